//! `sample`: rows of the `X0` parametrisation over chosen trace coordinates.

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use xzero_core::x0::{self, float};
use xzero_core::{FieldElement, Tower};
use xzero_core::{Sign, TraceCoordinates, X0Error};

use crate::{Failure, Outcome};

/// Range of the seeded integer draws.
const SEED_RANGE: std::ops::RangeInclusive<i64> = -10..=10;
const MAX_ROWS: usize = 1_000_000;

#[derive(Args)]
pub struct SampleArgs {
    /// One point, `z1,z2,z3,z4` (rationals such as `1/2` are accepted).
    #[arg(long, allow_hyphen_values = true, group = "source")]
    z: Option<String>,
    /// Integer grid: `lo:hi[:step]` for all four coordinates, or four such ranges separated by commas.
    #[arg(long, allow_hyphen_values = true, group = "source")]
    grid: Option<String>,
    /// Number of seeded integer samples drawn from [-10, 10].
    #[arg(long, group = "source")]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
struct Row {
    index: usize,
    z: [String; 4],
    sign: Sign,
    /// `ok`, `denominator vanishes: ...` or `error: ...`.
    status: String,
    discriminant: String,
    delta: Option<String>,
    params: Option<[String; 4]>,
    matrices: Option<[Vec<Vec<String>>; 2]>,
    traces: Option<Vec<String>>,
    sigma: Option<&'static str>,
    commutator: &'static str,
}

impl Row {
    fn failed(&self) -> bool {
        self.sigma == Some("fail") || self.commutator == "fail" || self.status.starts_with("error")
    }

    fn record(&self) -> Vec<String> {
        let opt = |s: &Option<String>| s.clone().unwrap_or_default();
        let mut r = vec![self.index.to_string()];
        r.extend(self.z.iter().cloned());
        r.push(self.sign.to_string());
        r.push(self.status.clone());
        r.push(self.discriminant.clone());
        r.push(opt(&self.delta));
        match &self.params {
            Some(p) => r.extend(p.iter().cloned()),
            None => r.extend(std::iter::repeat_n(String::new(), 4)),
        }
        match &self.matrices {
            Some(m) => r.extend(m.iter().map(|x| serde_json::to_string(x).unwrap())),
            None => r.extend(std::iter::repeat_n(String::new(), 2)),
        }
        match &self.traces {
            Some(t) => r.extend(t.iter().cloned()),
            None => r.extend(std::iter::repeat_n(String::new(), 9)),
        }
        r.push(self.sigma.unwrap_or("").to_string());
        r.push(self.commutator.to_string());
        r
    }
}

fn header() -> Vec<String> {
    let mut h: Vec<String> =
        ["index", "z1", "z2", "z3", "z4", "sign", "status", "discriminant", "delta", "a", "b", "c", "d", "A", "B"]
            .map(String::from)
            .to_vec();
    h.extend((1..=9).map(|k| format!("tr{k}")));
    h.push("sigma".into());
    h.push("commutator".into());
    h
}

fn status_of(e: &X0Error) -> String {
    match e {
        X0Error::Denominator { param, expr } => format!("denominator vanishes: {param} has {expr} = 0"),
        other => format!("error: {other}"),
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fail"
    }
}

fn parse_point(s: &str) -> Result<Vec<FieldElement>, Failure> {
    let q = Tower::rationals();
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::Input(format!("--z needs four comma-separated values, got {s:?}")));
    }
    parts.iter().map(|p| FieldElement::parse(&q, p).map_err(|e| Failure::Input(format!("--z {p:?}: {e}")))).collect()
}

fn parse_range(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Input(format!("bad grid range {s:?}, expected lo:hi[:step]"));
    let n: Vec<i64> = s.split(':').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (lo, hi, step) = match n[..] {
        [lo, hi] => (lo, hi, 1),
        [lo, hi, step] if step > 0 => (lo, hi, step),
        _ => return Err(bad()),
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step as usize).collect())
}

fn grid(spec: &str) -> Result<Vec<[i64; 4]>, Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    let ranges: Vec<Vec<i64>> = match parts.len() {
        1 => vec![parse_range(parts[0])?; 4],
        4 => parts.iter().map(|p| parse_range(p)).collect::<Result<_, _>>()?,
        _ => return Err(Failure::Input(format!("grid needs one or four ranges, got {spec:?}"))),
    };
    let size = ranges.iter().map(Vec::len).try_fold(1usize, |a, n| a.checked_mul(n));
    if size.is_none_or(|n| n > MAX_ROWS) {
        return Err(Failure::Input(format!("grid {spec:?} exceeds {MAX_ROWS} points")));
    }
    let mut out = Vec::new();
    for &a in &ranges[0] {
        for &b in &ranges[1] {
            for &c in &ranges[2] {
                for &d in &ranges[3] {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    Ok(out)
}

fn seeded(count: usize, seed: u64) -> Vec<[i64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| std::array::from_fn(|_| rng.random_range(SEED_RANGE))).collect()
}

fn points(args: &SampleArgs) -> Result<Vec<TraceCoordinates>, Failure> {
    let ints = |v: Vec<[i64; 4]>| v.into_iter().map(TraceCoordinates::from_ints).collect();
    match (&args.z, &args.grid, args.count) {
        (Some(z), _, _) => {
            let z = parse_point(z)?;
            Ok(vec![TraceCoordinates::new([z[0].clone(), z[1].clone(), z[2].clone(), z[3].clone()])])
        }
        (_, Some(g), _) => Ok(ints(grid(g)?)),
        (_, _, Some(n)) if n <= MAX_ROWS => Ok(ints(seeded(n, args.seed))),
        (_, _, Some(n)) => Err(Failure::Input(format!("--count {n} exceeds {MAX_ROWS}"))),
        _ => Err(Failure::Input("give one of --z, --grid or --count".into())),
    }
}

fn signs(s: SignArg) -> &'static [Sign] {
    match s {
        SignArg::Plus => &[Sign::Plus],
        SignArg::Minus => &[Sign::Minus],
        SignArg::Both => &[Sign::Plus, Sign::Minus],
    }
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

struct Solved {
    params: [String; 4],
    delta: String,
    matrices: [Vec<Vec<String>>; 2],
    traces: Vec<FieldElement>,
    sigma: bool,
}

fn solve_exact(z: &TraceCoordinates, root: &FieldElement, s: Sign) -> Result<Solved, X0Error> {
    let p = x0::solve_with_delta(z, root, s)?;
    let (a, b) = x0::build_pair(&p)?;
    let traces = x0::trace_map(&a, &b)?;
    let sigma = x0::verify_sigma(&p, z)?.all_zero() && traces[..8] == z.lawton();
    let m = |x: &xzero_core::Matrix| x.to_rows().iter().map(|r| strings(r)).collect();
    Ok(Solved {
        params: [&p.a, &p.b, &p.c, &p.d].map(|x| x.to_string()),
        delta: p.delta.to_string(),
        matrices: [m(&a), m(&b)],
        traces: traces.to_vec(),
        sigma,
    })
}

fn exact_rows(index: usize, z: &TraceCoordinates, want: &[Sign]) -> Vec<Row> {
    let zs = z.z.clone().map(|x| x.to_string());
    let disc = x0::discriminant(z).to_string();
    let root = x0::principal_delta(z);
    let solved: Vec<(Sign, Result<Solved, X0Error>)> =
        [Sign::Plus, Sign::Minus].into_iter().map(|s| (s, root.clone().and_then(|r| solve_exact(z, &r, s)))).collect();
    // Needs both branches, whichever were requested.
    let commutator = match (&solved[0].1, &solved[1].1) {
        (Ok(p), Ok(m)) => {
            let diff = &p.traces[8] - &m.traces[8];
            let d = x0::discriminant(z);
            ok(&diff * &diff == d && (p.traces[8] != m.traces[8]) != d.is_zero())
        }
        _ => "n/a",
    };
    solved
        .into_iter()
        .filter(|(s, _)| want.contains(s))
        .map(|(sign, r)| match r {
            Ok(v) => Row {
                index,
                z: zs.clone(),
                sign,
                status: "ok".into(),
                discriminant: disc.clone(),
                delta: Some(v.delta),
                params: Some(v.params),
                matrices: Some(v.matrices),
                traces: Some(strings(&v.traces)),
                sigma: Some(ok(v.sigma)),
                commutator,
            },
            Err(e) => Row {
                index,
                z: zs.clone(),
                sign,
                status: status_of(&e),
                discriminant: disc.clone(),
                delta: None,
                params: None,
                matrices: None,
                traces: None,
                sigma: None,
                commutator,
            },
        })
        .collect()
}

fn float_rows(index: usize, z: &TraceCoordinates, want: &[Sign]) -> Vec<Row> {
    let zs = z.z.clone().map(|x| x.to_string());
    let disc = x0::discriminant(z).to_string();
    want.iter()
        .map(|&sign| match float::sample(z, sign) {
            Ok(f) => Row {
                index,
                z: zs.clone(),
                sign,
                status: "ok".into(),
                discriminant: disc.clone(),
                delta: Some(f.delta.to_string()),
                params: Some([&f.params.a, &f.params.b, &f.params.c, &f.params.d].map(|x| x.to_string())),
                matrices: None,
                traces: Some(strings(&f.traces)),
                sigma: Some(ok(f.sigma_ok)),
                commutator: ok(f.commutator_ok),
            },
            Err(e) => Row {
                index,
                z: zs.clone(),
                sign,
                status: status_of(&e),
                discriminant: disc.clone(),
                delta: None,
                params: None,
                matrices: None,
                traces: None,
                sigma: None,
                commutator: "n/a",
            },
        })
        .collect()
}

pub fn run(args: &SampleArgs) -> Outcome {
    let pts = points(args)?;
    if args.mode == Mode::Float {
        if let Some(z) = pts.iter().find(|z| z.z.iter().any(|x| x.as_rational().is_none())) {
            return Err(Failure::Input(format!("float mode needs rational z, got {z}")));
        }
    }
    let want = signs(args.sign);
    let rows: Vec<Row> = pts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, z)| match args.mode {
            Mode::Exact => exact_rows(k, z, want),
            Mode::Float => float_rows(k, z, want),
        })
        .collect();
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            let io = |e: csv::Error| Failure::Input(format!("writing CSV: {e}"));
            w.write_record(header()).map_err(io)?;
            for r in &rows {
                w.write_record(r.record()).map_err(io)?;
            }
            w.flush().map_err(|e| Failure::Input(format!("writing CSV: {e}")))?;
        }
    }
    let degenerate = rows.iter().filter(|r| r.status.starts_with("denominator")).count();
    let failed: Vec<usize> = rows.iter().filter(|r| r.failed()).map(|r| r.index).collect();
    eprintln!("{} rows from {} points; {degenerate} with a vanishing denominator", rows.len(), pts.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("checks failed at sample(s) {failed:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ranges() {
        assert_eq!(parse_range("-2:2:2").ok(), Some(vec![-2, 0, 2]));
        assert!(parse_range("1:0").is_err() && parse_range("0:4:0").is_err() && parse_range("7").is_err());
        let g = grid("0:1,5:5,0:2,-1:-1").ok().unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], [0, 5, 0, -1]);
        assert!(grid("-100:100").is_err());
    }

    #[test]
    fn seeded_draws_stay_in_range() {
        let s = seeded(50, 3);
        assert_eq!(s, seeded(50, 3));
        assert!(s.iter().flatten().all(|x| SEED_RANGE.contains(x)));
    }

    #[test]
    fn csv_record_matches_header() {
        let rows = exact_rows(0, &TraceCoordinates::from_ints([1, 2, 3, 4]), &[Sign::Minus]);
        assert_eq!(rows[0].record().len(), header().len());
        let rows = exact_rows(0, &TraceCoordinates::from_ints([0, 0, 0, -3]), &[Sign::Plus]);
        assert_eq!(rows[0].record().len(), header().len());
    }
}
