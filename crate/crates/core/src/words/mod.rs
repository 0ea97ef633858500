//! Free-group words, free reduction, substitution and evaluation in matrix groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("no image for generator {0:?}")]
    MissingImage(String),
    #[error("generator images have different sizes")]
    DimensionMismatch,
    #[error("cannot parse word {0:?}: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A freely reduced word: `(generator, exponent)` syllables with nonzero
/// exponents and no two adjacent syllables on the same generator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(String, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: &str) -> Self {
        Word { letters: vec![(name.to_string(), 1)] }
    }

    /// Builds and freely reduces a word from raw syllables.
    pub fn from_syllables<S: Into<String>>(syllables: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut out: Vec<(String, i64)> = Vec::new();
        for (g, e) in syllables {
            push(&mut out, g.into(), e);
        }
        Word { letters: out }
    }

    pub fn syllables(&self) -> &[(String, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of letters, counting exponents.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Generators occurring in the word, sorted.
    pub fn alphabet(&self) -> Vec<String> {
        let mut a: Vec<String> = self.letters.iter().map(|(g, _)| g.clone()).collect();
        a.sort();
        a.dedup();
        a
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|(g, e)| (g.clone(), -e)).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for (g, e) in &other.letters {
            push(&mut out, g.clone(), *e);
        }
        Word { letters: out }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// Replaces every generator by a word and reduces.
    pub fn translate(&self, subst: &HashMap<String, Word>) -> Result<Word, WordError> {
        let mut out = Word::identity();
        for (g, e) in &self.letters {
            let w = subst.get(g).ok_or_else(|| WordError::MissingImage(g.clone()))?;
            out = out.concat(&w.pow(*e));
        }
        Ok(out)
    }

    /// The image under the homomorphism given on generators.
    pub fn evaluate(&self, images: &HashMap<String, Matrix>) -> Result<Matrix, WordError> {
        let first = images.values().next().ok_or(WordError::DimensionMismatch)?;
        let n = first.rows();
        if images.values().any(|m| m.rows() != n || m.cols() != n) {
            return Err(WordError::DimensionMismatch);
        }
        let tower = images.values().max_by_key(|m| m.tower().depth()).unwrap().tower().clone();
        let mut inverses: HashMap<&str, Matrix> = HashMap::new();
        let mut acc = Matrix::identity(&tower, n);
        for (g, e) in &self.letters {
            let m = images.get(g).ok_or_else(|| WordError::MissingImage(g.clone()))?;
            let base = if *e < 0 {
                if !inverses.contains_key(g.as_str()) {
                    inverses.insert(g, m.inverse()?);
                }
                &inverses[g.as_str()]
            } else {
                m
            };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(base)?;
            }
        }
        Ok(acc)
    }

    /// Parses `b^-1 a^3 b^-1 a^-1`, `BaaaBA`, `[a, b^-1]`, `(ab)^2`.
    ///
    /// Lowercase letters are generators, uppercase their inverses.
    pub fn parse(s: &str) -> Result<Word, WordError> {
        let cs: Vec<char> = s.chars().collect();
        let mut p = 0;
        let w = parse_seq(&cs, &mut p, s)?;
        if p != cs.len() {
            return Err(WordError::Parse(s.into(), format!("unexpected {:?}", cs[p])));
        }
        Ok(w)
    }
}

fn push(out: &mut Vec<(String, i64)>, g: String, e: i64) {
    if e == 0 {
        return;
    }
    if let Some((last, le)) = out.last_mut() {
        if *last == g {
            *le += e;
            if *le == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((g, e));
}

fn parse_seq(cs: &[char], p: &mut usize, src: &str) -> Result<Word, WordError> {
    let err = |m: &str| WordError::Parse(src.into(), m.into());
    let mut acc = Word::identity();
    while *p < cs.len() {
        let c = cs[*p];
        let atom = if c.is_whitespace() || c == '*' || c == '·' {
            *p += 1;
            continue;
        } else if c == ')' || c == ']' || c == ',' {
            break;
        } else if c == '(' {
            *p += 1;
            let w = parse_seq(cs, p, src)?;
            if cs.get(*p) != Some(&')') {
                return Err(err("missing ')'"));
            }
            *p += 1;
            w
        } else if c == '[' {
            *p += 1;
            let x = parse_seq(cs, p, src)?;
            if cs.get(*p) != Some(&',') {
                return Err(err("commutator needs ','"));
            }
            *p += 1;
            let y = parse_seq(cs, p, src)?;
            if cs.get(*p) != Some(&']') {
                return Err(err("missing ']'"));
            }
            *p += 1;
            Word::commutator(&x, &y)
        } else if c.is_ascii_alphabetic() {
            *p += 1;
            let g = Word::generator(&c.to_ascii_lowercase().to_string());
            if c.is_ascii_uppercase() {
                g.inverse()
            } else {
                g
            }
        } else if c == '1' {
            *p += 1;
            Word::identity()
        } else {
            return Err(err(&format!("unexpected {c:?}")));
        };
        let mut k = 1i64;
        if cs.get(*p) == Some(&'^') {
            *p += 1;
            let st = *p;
            if matches!(cs.get(*p), Some('-') | Some('−')) {
                *p += 1;
            }
            while cs.get(*p).is_some_and(|c| c.is_ascii_digit()) {
                *p += 1;
            }
            let t: String = cs[st..*p].iter().map(|&c| if c == '−' { '-' } else { c }).collect();
            k = t.parse().map_err(|_| err("bad exponent"))?;
        }
        acc = acc.concat(&atom.pow(k));
    }
    Ok(acc)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.letters.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") }).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Builds an image map from `(generator, matrix)` pairs.
pub fn images(pairs: &[(&str, &Matrix)]) -> HashMap<String, Matrix> {
    pairs.iter().map(|(g, m)| (g.to_string(), (*m).clone())).collect()
}

/// A catalog entry: a single word or a list of subgroup generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    Word(Word),
    Generators(Vec<Word>),
}

impl CatalogEntry {
    pub fn word(&self) -> Option<&Word> {
        match self {
            CatalogEntry::Word(w) => Some(w),
            CatalogEntry::Generators(_) => None,
        }
    }
}

/// Named words of the Whitehead link group, in the `a, b` presentation unless noted.
pub fn builtin_words() -> BTreeMap<&'static str, CatalogEntry> {
    let w = |s: &str| Word::parse(s).expect("catalog word");
    let s0 = w("[a, b^-1] a^-1 b^2 a^-3 [b, a]");
    let s_inf = w("b^-1 a^3 b^-1 a^-1");
    let mut c = BTreeMap::new();
    c.insert("relator_xy", CatalogEntry::Word(w("[x,y][x,y^-1][x^-1,y^-1][x^-1,y]")));
    c.insert("relator_ab", CatalogEntry::Word(w("[b a^-3 b^2, a^-1 b]")));
    c.insert("relator_ab_long", CatalogEntry::Word(w("a b a^-3 b^2 a^-1 b^-1 a^3 b^-2")));
    c.insert("m1", CatalogEntry::Word(w("a^-2 b")));
    c.insert("l1", CatalogEntry::Word(w("a^-2 b a b^-2 a b")));
    c.insert("m2", CatalogEntry::Word(w("b^-1 a")));
    c.insert("l2", CatalogEntry::Word(w("b^-1 a b^-1 a b a^-3 b a")));
    c.insert("s0", CatalogEntry::Word(s0.clone()));
    c.insert("s_inf", CatalogEntry::Word(s_inf.clone()));
    c.insert("cusp0_gens", CatalogEntry::Generators(vec![w("a b^-1 a"), s0]));
    c.insert("cusp_inf_gens", CatalogEntry::Generators(vec![w("a b^-1"), s_inf]));
    c
}

/// Looks up a single word of [`builtin_words`].
pub fn builtin(name: &str) -> Option<Word> {
    builtin_words().get(name).and_then(|e| e.word().cloned())
}

/// The substitution `(x, y) -> (a b^-1, a b^-1 a)`.
pub fn xy_to_ab() -> HashMap<String, Word> {
    HashMap::from([
        ("x".to_string(), Word::parse("a b^-1").unwrap()),
        ("y".to_string(), Word::parse("a b^-1 a").unwrap()),
    ])
}

/// The substitution `(a, b) -> (x^-1 y, x^-2 y)`.
pub fn ab_to_xy() -> HashMap<String, Word> {
    HashMap::from([
        ("a".to_string(), Word::parse("x^-1 y").unwrap()),
        ("b".to_string(), Word::parse("x^-2 y").unwrap()),
    ])
}

/// Equality up to a scalar `lambda` with `lambda^n = 1`, `n` the matrix size:
/// `+-1` in SL(2), cube roots of unity in SL(3).
pub fn projectively_equal(x: &Matrix, y: &Matrix) -> Result<bool, LinalgError> {
    Ok(projective_scalar(x, y)?.is_some())
}

/// The scalar `lambda` with `x = lambda y` and `lambda^n = 1`, if any.
pub fn projective_scalar(x: &Matrix, y: &Matrix) -> Result<Option<FieldElement>, LinalgError> {
    if x.rows() != y.rows() || x.cols() != y.cols() || !x.is_square() {
        return Err(LinalgError::Dimension("projective comparison of different shapes".into()));
    }
    let n = x.rows();
    let Some(k) = (0..n * n).find(|&k| !y.get(k / n, k % n).is_zero()) else {
        return Ok(None);
    };
    let lambda = x.get(k / n, k % n).try_div(y.get(k / n, k % n))?;
    if !lambda.pow(n as i64)?.is_one() {
        return Ok(None);
    }
    Ok((y.scale(&lambda) == *x).then_some(lambda))
}
