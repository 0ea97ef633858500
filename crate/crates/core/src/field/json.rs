use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Adjoined, FieldElement, FieldError, Tower};

/// One adjoined square in the JSON form of a tower: a rational (`"-1"`, `"3"`)
/// or a coefficient list over the prefix tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelJson {
    Int(i64),
    Rational(String),
    Element(Vec<String>),
}

/// `{"tower": [d0, d1, ...], "coeffs": ["p/q", ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub tower: Vec<LevelJson>,
    pub coeffs: Vec<String>,
}

fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    BigRational::from_str(s.trim()).map_err(|_| FieldError::Parse(format!("bad rational {s:?}")))
}

fn level_key(tower: &Tower) -> Vec<LevelJson> {
    (0..tower.depth())
        .map(|l| {
            let d = tower.square(l);
            match d.as_rational() {
                Some(q) => LevelJson::Rational(q.to_string()),
                None => LevelJson::Element(d.coeffs().iter().map(|c| c.to_string()).collect()),
            }
        })
        .collect()
}

fn normalize_key(levels: &[LevelJson]) -> Result<Vec<LevelJson>, FieldError> {
    levels
        .iter()
        .map(|l| {
            Ok(match l {
                LevelJson::Int(n) => LevelJson::Rational(n.to_string()),
                LevelJson::Rational(s) => LevelJson::Rational(parse_rational(s)?.to_string()),
                LevelJson::Element(cs) => LevelJson::Element(
                    cs.iter().map(|c| Ok(parse_rational(c)?.to_string())).collect::<Result<_, FieldError>>()?,
                ),
            })
        })
        .collect()
}

type Registry = Mutex<Vec<(Vec<LevelJson>, Arc<Tower>)>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| {
        let seeded = [Tower::rationals(), Tower::eisenstein(), Tower::standard()];
        Mutex::new(seeded.into_iter().map(|t| (level_key(&t), t)).collect())
    })
}

/// Rebuilds (or reuses) the tower described by a JSON level list.
pub fn tower_from_levels(levels: &[LevelJson]) -> Result<Arc<Tower>, FieldError> {
    let key = normalize_key(levels)?;
    if let Some((_, t)) = registry().lock().unwrap().iter().find(|(k, _)| *k == key) {
        return Ok(t.clone());
    }
    let mut tower = Tower::rationals();
    for level in &key {
        let d = match level {
            LevelJson::Rational(s) => FieldElement::from_rational(&tower, parse_rational(s)?),
            LevelJson::Element(cs) => {
                if cs.len() != tower.degree() {
                    return Err(FieldError::Parse("level coefficient count does not match prefix degree".into()));
                }
                let coeffs = cs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
                FieldElement::from_coeffs(&tower, coeffs)
            }
            LevelJson::Int(_) => unreachable!("normalized away"),
        };
        tower = match tower.adjoin_sqrt(&d)? {
            Adjoined::Extended(t) => t,
            Adjoined::Root(_) => return Err(FieldError::PerfectSquare(d.to_string())),
        };
    }
    registry().lock().unwrap().push((key, tower.clone()));
    Ok(tower)
}

/// The JSON level list of a tower.
pub fn tower_levels(tower: &Tower) -> Vec<LevelJson> {
    level_key(tower)
}

impl From<&FieldElement> for ElementJson {
    fn from(e: &FieldElement) -> Self {
        ElementJson { tower: level_key(e.tower()), coeffs: e.coeffs().iter().map(|c| c.to_string()).collect() }
    }
}

impl TryFrom<&ElementJson> for FieldElement {
    type Error = FieldError;

    fn try_from(j: &ElementJson) -> Result<Self, FieldError> {
        let tower = tower_from_levels(&j.tower)?;
        if j.coeffs.len() != tower.degree() {
            return Err(FieldError::Parse(format!(
                "expected {} coefficients, found {}",
                tower.degree(),
                j.coeffs.len()
            )));
        }
        let coeffs = j.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(FieldElement::from_coeffs(&tower, coeffs))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        FieldElement::try_from(&j).map_err(serde::de::Error::custom)
    }
}
