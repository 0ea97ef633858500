//! Acceptance run: one line per criterion.
//!
//! A criterion is reported `PASS` when every stated value is reproduced. It is
//! reported `FAIL as stated` when a printed value provably cannot be reproduced;
//! in that case the line says what was found instead, and the evidence for
//! that finding is itself asserted. Any other failed assertion, or a blown time
//! budget, makes the process exit non-zero.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xzero_core::defvar::{self, DefPoint, GluingSystem};
use xzero_core::flags::{self, Flag, FlagTetrahedron};
use xzero_core::linalg::{char_poly_3, is_regular_order_three, is_regular_unipotent, kernel_basis, rank};
use xzero_core::whitehead::{self, InstanceData};
use xzero_core::words::{builtin, images, projectively_equal, xy_to_ab, Word};
use xzero_core::x0::{self, Sign, TraceCoordinates, X0Error};
use xzero_core::{FieldElement, Matrix, Tower};

enum Verdict {
    Pass(String),
    /// The stated value is unattainable; the string says what holds instead.
    NotAsStated(String),
}

type Outcome = Result<Verdict, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn std_el(s: &str) -> FieldElement {
    FieldElement::parse(&Tower::standard(), s).unwrap()
}

fn gauss_matrix(rows: &[&[&str]]) -> Matrix {
    Matrix::parse(&Tower::standard().prefix(1), rows).unwrap()
}

fn data() -> InstanceData {
    InstanceData::bundled().expect("bundled data")
}

fn ev(w: &str, im: &HashMap<String, Matrix>) -> Matrix {
    Word::parse(w).unwrap().evaluate(im).unwrap()
}

fn builtin_ev(name: &str, im: &HashMap<String, Matrix>) -> Matrix {
    builtin(name).unwrap().evaluate(im).unwrap()
}

fn proj(x: &Matrix, y: &Matrix) -> bool {
    projectively_equal(x, y).unwrap()
}

fn order_three_checks(m: &Matrix) -> bool {
    let id = Matrix::identity(m.tower(), 3);
    m.det().unwrap().is_one()
        && m.trace().unwrap().is_zero()
        && m.inverse().unwrap().trace().unwrap().is_zero()
        && m.pow(3).unwrap() == id
}

fn c1_constants() -> Outcome {
    let d = data();
    ensure!(d.u == gauss_matrix(&[&["1", "i"], &["0", "1"]]), "u differs");
    ensure!(d.w1 == gauss_matrix(&[&["1", "0"], &["-1-i", "1"]]), "w1 differs");
    ensure!(d.t2 == gauss_matrix(&[&["1", "2"], &["0", "1"]]), "t2 differs");
    let im = d.rho_geom_images().unwrap();
    ensure!(im["a"] == gauss_matrix(&[&["i", "-i"], &["-1-i", "1"]]), "rho_geom(a) differs");
    ensure!(im["b"] == gauss_matrix(&[&["-1+2i", "-2i"], &["-1-i", "1"]]), "rho_geom(b) differs");
    let s = Matrix::parse(
        &Tower::standard(),
        &[&["1", "(sqrt3 - i*sqrt5)/2", "-1"], &["-(sqrt3 + i*sqrt5)/2", "-1", "0"], &["-1", "0", "0"]],
    )
    .unwrap();
    ensure!(d.s == s, "S differs from its printed form");
    ensure!(order_three_checks(&d.s), "S fails det/tr/cube");
    ensure!(order_three_checks(&d.t), "corrected T fails det/tr/cube");
    let printed = whitehead::printed_t();
    ensure!(!order_three_checks(&printed), "printed T unexpectedly has order three");
    Ok(Verdict::Pass(format!(
        "u, w1, t2, rho_geom(a), rho_geom(b) exact; S and corrected T have det 1, tr = tr^-1 = 0, cube I (printed T has tr T^-1 = {})",
        printed.inverse().unwrap().trace().unwrap()
    )))
}

fn c2_words() -> Outcome {
    let d = data();
    let im = d.rho_geom_images().unwrap();
    let sl2 = d.sl2_images();
    let id2 = Matrix::identity(d.u.tower(), 2);
    let mut wrong = Vec::new();

    let t2_printed = ev("(Wu)^2 w u W u", &sl2);
    if t2_printed != d.t2 {
        wrong.push("t2 = (w1^-1 u)^2 w1 u w1^-1 u (the word gives another matrix; w1^-1 u w1 u^-1 w1 u w1^-1 u = -t2)");
    }
    ensure!(ev("W u w U w u W u", &sl2) == d.t2.neg(), "corrected t2 word is not -t2");
    for name in ["relator_ab", "relator_ab_long"] {
        ensure!(proj(&builtin_ev(name, &im), &id2), "SL(2) image of {name} is not +-I");
    }
    let rel_xy = builtin("relator_xy").unwrap().translate(&xy_to_ab()).unwrap();
    ensure!(proj(&rel_xy.evaluate(&im).unwrap(), &id2), "SL(2) image of the xy relator is not +-I");

    let a = &im["a"];
    let ai = a.inverse().unwrap();
    let conj = |w: &str| a.mul(&builtin_ev(w, &im)).unwrap().mul(&ai).unwrap();
    let w1i = d.w1.inverse().unwrap();
    let s0 = builtin_ev("s0", &im);
    if !proj(&conj("m1"), &d.w1) {
        wrong.push("a m1 a^-1 = w1 (it is w1^-1)");
    }
    ensure!(proj(&conj("m1"), &w1i), "a m1 a^-1 is not +-w1^-1");
    ensure!(proj(&conj("m2"), &d.u), "a m2 a^-1 is not +-u");
    let l2 = d.t2.inverse().unwrap().mul(&d.u).unwrap().mul(&d.u).unwrap();
    ensure!(proj(&conj("l2"), &l2), "a l2 a^-1 is not +-t2^-1 u^2");
    let w1i2 = w1i.mul(&w1i).unwrap();
    if !proj(&conj("l1"), &w1i2.mul(&s0).unwrap()) {
        wrong.push("a l1 a^-1 = w1^-2 rho_geom(s0) (it is w1^-2 rho_geom(s0)^-1)");
    }
    ensure!(proj(&conj("l1"), &w1i2.mul(&s0.inverse().unwrap()).unwrap()), "a l1 a^-1 is not +-w1^-2 s0^-1");

    let r0 = d.rho0_images();
    let id3 = Matrix::identity(d.s.tower(), 3);
    for name in ["relator_ab", "relator_ab_long"] {
        ensure!(builtin_ev(name, &r0) == id3, "rho0({name}) != I");
    }
    ensure!(rel_xy.evaluate(&r0).unwrap() == id3, "rho0(xy relator) != I");
    for (m, l) in [("m1", "l1"), ("m2", "l2")] {
        ensure!(builtin_ev(m, &r0).pow(3).unwrap() == builtin_ev(l, &r0), "rho0({m})^3 != rho0({l})");
    }
    let (si, ti) = (d.s.inverse().unwrap(), d.t.inverse().unwrap());
    ensure!(builtin_ev("s0", &r0) == d.s.mul(&ti).unwrap().mul(&d.s).unwrap(), "rho0(s0) != S T^-1 S");
    ensure!(builtin_ev("s_inf", &r0) == d.t.mul(&si).unwrap(), "rho0(s_inf) != T S^-1");

    let held = "relators +-I in SL(2) and = I under rho0; a m2 a^-1, a l2 a^-1 projective; rho0(m_i)^3 = rho0(l_i); rho0(s0) = S T^-1 S; rho0(s_inf) = T S^-1";
    if wrong.is_empty() {
        Ok(Verdict::Pass(held.into()))
    } else {
        Ok(Verdict::NotAsStated(format!(
            "printed identities false: {}; corrected forms verified; also {held}",
            wrong.join("; ")
        )))
    }
}

fn vec3(v: [&str; 3]) -> [FieldElement; 3] {
    v.map(std_el)
}

/// The decoration as printed: `(point, form)` per vertex.
fn table3() -> BTreeMap<&'static str, Flag> {
    let f = |p: [&str; 3], q: [&str; 3]| Flag::new(vec3(p), vec3(q)).unwrap();
    BTreeMap::from([
        ("inf", f(["1", "0", "0"], ["0", "0", "1"])),
        ("0", f(["1", "-(3*sqrt3 + i*sqrt5)/4", "-1"], ["1", "(3*sqrt3 - i*sqrt5)/4", "-1"])),
        ("i", f(["1", "-(sqrt3 + i*sqrt5)/4", "(-1 + i*sqrt15)/4"], ["(1 + i*sqrt15)/4", "(sqrt3 - i*sqrt5)/4", "-1"])),
        ("-1+i", f(["1", "(3*sqrt3 - i*sqrt5)/4", "-1"], ["1", "-(3*sqrt3 + i*sqrt5)/4", "-1"])),
        (
            "-i",
            f(["1", "(sqrt3 - i*sqrt5)/4", "-(1 + i*sqrt15)/4"], ["(1 - i*sqrt15)/4", "-(sqrt3 + i*sqrt5)/4", "-1"]),
        ),
        ("(-1+i)/2", f(["0", "0", "1"], ["1", "0", "0"])),
    ])
}

fn c3_decoration() -> Outcome {
    let d = data();
    let (computed, report) = whitehead::build_decoration(&d).map_err(|e| e.to_string())?;
    ensure!(report.ok(), "decoration report has failures");
    let table = table3();
    ensure!(computed.len() == 6, "expected six flags, got {}", computed.len());
    for (tag, f) in &table {
        let c = computed.get(*tag).ok_or(format!("no computed flag for {tag}"))?;
        ensure!(c.same_as(f), "flag at {tag} differs from the table");
    }
    let ti = d.t.inverse().unwrap();
    let st = d.s.mul(&ti).unwrap();
    let sts = st.mul(&d.s).unwrap();
    ensure!(is_regular_unipotent(&st).unwrap(), "S T^-1 not regular unipotent");
    ensure!(is_regular_unipotent(&sts).unwrap(), "S T^-1 S not regular unipotent");
    let ts = d.t.mul(&d.s).unwrap();
    let ts_fixes = table["(-1+i)/2"].is_invariant_under(&ts).unwrap();
    Ok(Verdict::Pass(format!(
        "6/6 invariant flags equal the table projectively; S T^-1, S T^-1 S regular unipotent (stabilizer of (-1+i)/2 taken as S^-1 T; printed T S fixes it: {ts_fixes})"
    )))
}

const TABLE4: [[&str; 4]; 4] = [
    ["(7 + i*sqrt15)/4", "(-1 - i*sqrt15)/8", "(7 - i*sqrt15)/4", "(-1 + i*sqrt15)/8"],
    ["(-1 + i*sqrt15)/8", "(7 - i*sqrt15)/4", "(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4"],
    ["(7 - i*sqrt15)/4", "(-1 + i*sqrt15)/8", "(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4"],
    ["(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4", "(-1 + i*sqrt15)/8", "(7 - i*sqrt15)/4"],
];
const EDGES: [(usize, usize); 4] = [(1, 2), (2, 1), (3, 4), (4, 3)];

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for e in 0..4 {
                    let p = [a, b, c, e];
                    if (0..4).all(|k| p.contains(&k)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn c4_coordinates() -> Outcome {
    let d = data();
    let (fl, _) = whitehead::build_decoration(&d).map_err(|e| e.to_string())?;
    let mut z = Vec::new();
    let mut mismatches = Vec::new();
    for (n, tags) in d.tetrahedra.iter().enumerate() {
        let t = FlagTetrahedron::new(tags.clone().map(|tag| fl[&tag].clone()));
        let c = flags::tetra_coordinates(&t).map_err(|e| format!("tetrahedron {n}: {e}"))?;
        for (k, &(i, j)) in EDGES.iter().enumerate() {
            if *c.z(i, j) != std_el(TABLE4[n][k]) {
                mismatches.push((n, k, c.z(i, j).clone()));
            }
        }
        z.extend(c.edges.iter().cloned());
    }
    let p = DefPoint { z };
    let res = defvar::evaluate_residuals(&d.gluing, &p).map_err(|e| e.to_string())?;
    let ir = res.values[..32].iter().filter(|v| v.is_one()).count();
    let gl = res.values[32..].iter().filter(|v| v.is_one()).count();
    ensure!(res.values.len() == 48 && ir == 32 && gl == 16, "residuals: {ir}/32 internal, {gl}/16 gluing equal 1");
    let matched = 16 - mismatches.len();
    if mismatches.is_empty() {
        return Ok(Verdict::Pass(
            "16/16 table values exact; 32/32 internal relations and 16/16 gluing residuals equal 1".into(),
        ));
    }
    // The only admissible discrepancy is the z34/z43 swap in one row.
    ensure!(
        mismatches.len() == 2
            && mismatches.iter().all(|(n, k, _)| *n == 2 && (*k == 2 || *k == 3))
            && mismatches[0].2 == std_el(TABLE4[2][3])
            && mismatches[1].2 == std_el(TABLE4[2][2]),
        "unexpected table mismatches: {:?}",
        mismatches.iter().map(|(n, k, v)| format!("tet {n} {:?} = {v}", EDGES[*k])).collect::<Vec<_>>()
    );
    // Evidence 1: the printed pair leaves the variety.
    let mut printed = p.clone();
    for k in [2, 3] {
        let (i, j) = EDGES[k];
        printed.z[24 + flags::half_edge_rank(i, j)] = std_el(TABLE4[2][k]);
    }
    let off = defvar::evaluate_residuals(&d.gluing, &printed).map(|r| !r.all_one()).unwrap_or(true);
    ensure!(off, "printed values also satisfy every residual");
    // Evidence 2: no vertex ordering of that tetrahedron yields the printed row.
    let tags = &d.tetrahedra[2];
    let any_order = permutations4().into_iter().any(|perm| {
        let t = FlagTetrahedron::new(perm.map(|k| fl[&tags[k]].clone()));
        flags::tetra_coordinates(&t)
            .map(|c| EDGES.iter().enumerate().all(|(k, &(i, j))| *c.z(i, j) == std_el(TABLE4[2][k])))
            .unwrap_or(false)
    });
    ensure!(!any_order, "some vertex ordering reproduces the printed row");
    Ok(Verdict::NotAsStated(format!(
        "{matched}/16 table values exact; in tetrahedron 2 the printed z34 and z43 are transposed (the printed pair violates the residuals; no vertex ordering reproduces it); 32/32 internal relations and 16/16 gluing residuals equal 1"
    )))
}

fn c5_tangent() -> Outcome {
    let d = data();
    let (p, _) = whitehead::build_defpoint(&d).map_err(|e| e.to_string())?;
    let j = defvar::build_jacobian(&d.gluing, &p).map_err(|e| e.to_string())?;
    ensure!(j.rows() == 48 && j.cols() == 48, "Jacobian is {}x{}", j.rows(), j.cols());
    let row = |r: usize| (0..48).map(|c| (c, j.get(r, c))).collect::<Vec<_>>();
    for r in 0..16 {
        let nz: Vec<_> = row(r).into_iter().filter(|(_, e)| !e.is_zero()).collect();
        ensure!(nz.len() == 3 && nz.iter().all(|(_, e)| e.is_one()), "row {r} is not three ones");
    }
    for r in 16..32 {
        ensure!(
            row(r).into_iter().all(|(_, e)| e.is_zero() || e.is_one() || p.z.contains(e)),
            "row {r} has an entry outside 0, 1, z"
        );
    }
    for r in 32..48 {
        let ones = row(r).into_iter().filter(|(_, e)| e.is_one()).count();
        let zeros = row(r).into_iter().filter(|(_, e)| e.is_zero()).count();
        ensure!(ones + zeros == 48 && [4, 6, 8].contains(&ones), "gluing row {r} has {ones} ones");
    }
    let ker = kernel_basis(&j).map_err(|e| e.to_string())?;
    let rk = rank(&j).map_err(|e| e.to_string())?;
    ensure!(ker.len() == 4, "kernel dimension {}", ker.len());
    ensure!(rk == 44, "rank {rk}");
    for v in &ker {
        ensure!(j.mul_vec(v).unwrap().iter().all(FieldElement::is_zero), "kernel vector not annihilated");
    }
    Ok(Verdict::Pass("48x48 Jacobian: 16 rows of three ones, 16 rows in {0, 1, z}, 16 gluing rows of 4/6/8 ones; kernel dimension 4, rank 44".into()))
}

fn draw(rng: &mut ChaCha8Rng) -> TraceCoordinates {
    TraceCoordinates::from_ints(std::array::from_fn(|_| rng.random_range(-10..=10)))
}

fn c6_parametrisation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut done, mut degenerate) = (0, 0);
    while done < 100 {
        let z = draw(&mut rng);
        let sign = if done % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let p = match x0::solve_parameters(&z, sign) {
            Ok(p) => p,
            Err(X0Error::Denominator { .. }) => {
                degenerate += 1;
                continue;
            }
            Err(e) => return Err(format!("{z}: {e}")),
        };
        let (a, b) = x0::build_pair(&p).map_err(|e| format!("{z}: {e}"))?;
        ensure!(
            is_regular_order_three(&a).unwrap() && is_regular_order_three(&b).unwrap(),
            "{z}: pair not of order three"
        );
        let t = x0::trace_map(&a, &b).map_err(|e| e.to_string())?;
        ensure!(t[..8] == z.lawton(), "{z}: traces differ");
        let s = x0::verify_sigma(&p, &z).map_err(|e| e.to_string())?;
        ensure!(s.all_zero(), "{z}: system residuals nonzero");
        done += 1;
    }
    let err = x0::solve_parameters(&TraceCoordinates::from_ints([0, 0, 0, -3]), Sign::Plus).unwrap_err();
    ensure!(matches!(err, X0Error::Denominator { param: "a", .. }), "degenerate sample: {err}");
    Ok(Verdict::Pass(format!(
        "100 seeded samples (both signs): order-three pairs, traces (0,0,z1,z2,0,0,z3,z4), both systems and the quadratic exact; {degenerate} draws skipped with named denominator errors; (0,0,0,-3) -> {err}"
    )))
}

fn c7_branched_cover() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut done = 0;
    while done < 20 {
        let z = draw(&mut rng);
        let c = match x0::commutator_discriminant_check(&z) {
            Ok(c) => c,
            Err(X0Error::Denominator { .. }) => continue,
            Err(e) => return Err(format!("{z}: {e}")),
        };
        ensure!(c.square_matches, "{z}: (t+ - t-)^2 != Delta");
        ensure!(c.distinct == !c.discriminant.is_zero(), "{z}: distinctness does not track Delta");
        done += 1;
    }
    let z0 = TraceCoordinates::from_ints([-4, -1, 4, -1]);
    ensure!(x0::discriminant(&z0).is_zero(), "constructed sample has Delta != 0");
    let c = x0::commutator_discriminant_check(&z0).map_err(|e| e.to_string())?;
    ensure!(c.t_plus == c.t_minus, "t+ != t- at Delta = 0");
    Ok(Verdict::Pass("(t+ - t-)^2 = Delta and t+ != t- at 20 samples; t+ = t- at (-4,-1,4,-1) where Delta = 0".into()))
}

/// The sign fix that keeps the printed (1,2) entry and negates (2,1) instead.
fn alternative_t() -> Matrix {
    let mut t = whitehead::printed_t();
    let v = -t.get(1, 0);
    t.set(1, 0, v).unwrap();
    t
}

fn x0_matches(s: &Matrix, t: &Matrix) -> Result<(TraceCoordinates, FieldElement, Option<Sign>), String> {
    let tr = x0::trace_map(s, t).map_err(|e| e.to_string())?;
    ensure!([0, 1, 4, 5].iter().all(|&k| tr[k].is_zero()), "trace slots 1,2,5,6 do not vanish");
    let z = TraceCoordinates::new([tr[2].clone(), tr[3].clone(), tr[6].clone(), tr[7].clone()]);
    let root = x0::principal_delta(&z).map_err(|e| e.to_string())?;
    let mut hit = None;
    for sign in [Sign::Plus, Sign::Minus] {
        let p = x0::solve_with_delta(&z, &root, sign).map_err(|e| e.to_string())?;
        let (a, b) = x0::build_pair(&p).map_err(|e| e.to_string())?;
        if x0::trace_map(&a, &b).map_err(|e| e.to_string())? == tr {
            hit = Some(sign);
        }
    }
    Ok((z.clone(), x0::discriminant(&z), hit))
}

fn c8_cross_module() -> Outcome {
    let d = data();
    let int = |n: i64| FieldElement::from_int(&Tower::rationals(), n);
    ensure!(x0::discriminant(&TraceCoordinates::from_ints([5, 3, 5, 3])) == int(-375), "Delta(5,3,5,3) != -375");
    let (z, disc, hit) = x0_matches(&d.s, &d.t)?;
    let sign = hit.ok_or("no sign reproduces the nine traces of (S, T)")?;
    let stated = TraceCoordinates::from_ints([5, 3, 5, 3]);
    let lift = |v: &TraceCoordinates| v.z.clone().map(|x| x.embed_into(&Tower::standard()).unwrap());
    if lift(&z) == lift(&stated) {
        return Ok(Verdict::Pass(format!("z = {z}, Delta = {disc}; nine traces reproduced with sign {sign}")));
    }
    // The stated value needs the other sign fix of T; show that fix breaks the decoration.
    let alt = alternative_t();
    ensure!(order_three_checks(&alt), "alternative T is not of order three");
    let (z_alt, disc_alt, hit_alt) = x0_matches(&d.s, &alt)?;
    ensure!(lift(&z_alt) == lift(&stated), "alternative T gives z = {z_alt}");
    let im = images(&[("a", &d.s), ("b", &alt)]);
    let table = table3();
    let broken: Vec<&str> = d
        .stabilizers
        .iter()
        .filter(|(tag, w)| !table[tag.as_str()].is_invariant_under(&w.evaluate(&im).unwrap()).unwrap())
        .map(|(tag, _)| tag.as_str())
        .collect();
    ensure!(!broken.is_empty(), "alternative T keeps every table flag invariant");
    Ok(Verdict::NotAsStated(format!(
        "with the T that reproduces the decoration table: z = {z}, Delta = {disc}, nine traces reproduced with sign {sign}; \
         the stated (5,3,5,3), Delta = {disc_alt} comes from negating entry (2,1) instead (nine traces reproduced: {}), \
         but that T leaves the table flags at {broken:?} non-invariant; Delta(5,3,5,3) = -375 holds",
        hit_alt.map_or("no".into(), |s| format!("sign {s}"))
    )))
}

/// Runs one property with its own case count; returns its label.
fn prop(name: &str, cases: u32, f: impl FnOnce(&mut TestRunner) -> Result<(), String>) -> Result<String, String> {
    let mut r = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let start = Instant::now();
    f(&mut r).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} ({cases} cases, {:.1}s)", start.elapsed().as_secs_f64()))
}

fn element() -> impl Strategy<Value = FieldElement> {
    proptest::collection::vec((-20i64..=20, 1i64..=6), 8).prop_map(|c| {
        FieldElement::from_coeffs(
            &Tower::standard(),
            c.into_iter().map(|(p, q)| BigRational::new(p.into(), q.into())).collect(),
        )
    })
}

fn nonzero() -> impl Strategy<Value = FieldElement> {
    element().prop_filter("nonzero", |x| !x.is_zero())
}

/// Product of elementary matrices `I + (a + b*unit) e_rc`, so det 1.
fn elementary_product(t: &std::sync::Arc<Tower>, n: usize, steps: &[(usize, usize, i64, i64)], unit: &str) -> Matrix {
    let u = FieldElement::parse(t, unit).unwrap();
    let mut m = Matrix::identity(t, n);
    for &(r, c, a, b) in steps {
        if r == c {
            continue;
        }
        let mut e = Matrix::identity(t, n);
        e.set(r, c, &FieldElement::from_int(t, a) + &(&FieldElement::from_int(t, b) * &u)).unwrap();
        m = m.mul(&e).unwrap();
    }
    m
}

fn tce(e: impl std::fmt::Display) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn c9_properties() -> Outcome {
    let mut done = Vec::new();

    done.push(prop("field axioms", 1000, |r| {
        r.run(&(element(), element(), element()), |(x, y, z)| {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().map_err(tce)?).is_one());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    done.push(prop("Cayley-Hamilton", 100, |r| {
        // Products of elementary matrices with arbitrary field entries: all of SL(3), no division.
        let moves = proptest::collection::vec((0usize..3, 0usize..3, element()), 1..6);
        r.run(&moves, |moves| {
            let t = Tower::standard();
            let mut m1 = Matrix::identity(&t, 3);
            for (row, col, x) in moves.into_iter().filter(|m| m.0 != m.1) {
                let mut e = Matrix::identity(&t, 3);
                e.set(row, col, x).map_err(tce)?;
                m1 = m1.mul(&e).map_err(tce)?;
            }
            prop_assert!(m1.det().map_err(tce)?.is_one());
            let (tr, tri) = char_poly_3(&m1).map_err(tce)?;
            let m2 = m1.mul(&m1).map_err(tce)?;
            let m3 = m2.mul(&m1).map_err(tce)?;
            let lhs = m3
                .sub(&m2.scale(&tr))
                .and_then(|x| x.add(&m1.scale(&tri)))
                .and_then(|x| x.sub(&Matrix::identity(&t, 3)))
                .map_err(tce)?;
            prop_assert!(lhs.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    done.push(prop("rank-nullity", 100, |r| {
        r.run(&(1usize..=6, 1usize..=8, proptest::collection::vec(-2i64..=2, 48)), |(rows, cols, v)| {
            let q = Tower::standard();
            let m = Matrix::from_entries(
                &q,
                rows,
                cols,
                v[..rows * cols].iter().map(|&n| FieldElement::from_int(&q, n)).collect(),
            )
            .map_err(tce)?;
            let ker = kernel_basis(&m).map_err(tce)?;
            prop_assert_eq!(rank(&m).map_err(tce)? + ker.len(), cols);
            for k in &ker {
                prop_assert!(m.mul_vec(k).map_err(tce)?.iter().all(FieldElement::is_zero));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    let d = data();
    let tet0 = FlagTetrahedron::new(d.tetrahedra[0].clone().map(|t| d.flags[&t].clone()));
    let z0 = flags::tetra_coordinates(&tet0).map_err(|e| e.to_string())?;
    done.push(prop("lift and SL(3) invariance of coordinates", 40, |r| {
        let moves = proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3, -2i64..=2), 1..7);
        r.run(&(moves, nonzero(), nonzero()), |(steps, s, u)| {
            let t = Tower::standard();
            let g = elementary_product(&t, 3, &steps, "i*sqrt3");
            prop_assert!(g.det().map_err(tce)?.is_one());
            let moved =
                FlagTetrahedron::new(tet0.flags.clone().map(|f| f.rescaled(&s, &u))).transform(&g).map_err(tce)?;
            prop_assert_eq!(&flags::tetra_coordinates(&moved).map_err(tce)?, &z0);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    let (p, _) = whitehead::build_defpoint(&d).map_err(|e| e.to_string())?;
    let j = defvar::build_jacobian(&d.gluing, &p).map_err(|e| e.to_string())?;
    let sys_json: serde_json::Value = serde_json::from_str(&d.gluing.to_json()).unwrap();
    done.push(prop("column-permutation invariance of kernel dimension", 12, |r| {
        r.run(&Just((0..48).collect::<Vec<usize>>()).prop_shuffle(), |perm| {
            let jp = j.permute_columns(&perm);
            prop_assert_eq!(kernel_basis(&jp).map_err(tce)?.len(), 4);
            let mut sj = sys_json.clone();
            let order: Vec<serde_json::Value> = perm.iter().map(|&c| sj["column_order"][c].clone()).collect();
            sj["column_order"] = order.into();
            for row in sj["rows"].as_array_mut().unwrap() {
                let ex: Vec<serde_json::Value> = perm.iter().map(|&c| row["exponents"][c].clone()).collect();
                row["exponents"] = ex.into();
            }
            let sys = GluingSystem::from_json(&sj.to_string()).map_err(tce)?;
            prop_assert_eq!(defvar::tangent_dimension(&sys, &p).map_err(tce)?, 4);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    done.push(prop("word evaluation is a homomorphism", 100, |r| {
        let word = proptest::collection::vec((prop_oneof![Just("a"), Just("b")], -3i64..=3), 0..8)
            .prop_map(Word::from_syllables);
        let gen = proptest::collection::vec((0usize..2, 0usize..2, -3i64..=3, -2i64..=2), 1..6);
        r.run(&(word.clone(), word, gen.clone(), gen), |(v, w, ga, gb)| {
            let q = Tower::standard().prefix(1);
            let im =
                images(&[("a", &elementary_product(&q, 2, &ga, "i")), ("b", &elementary_product(&q, 2, &gb, "i"))]);
            let e = |x: &Word| x.evaluate(&im).map_err(tce);
            prop_assert_eq!(e(&v.concat(&w))?, e(&v)?.mul(&e(&w)?).map_err(tce)?);
            prop_assert_eq!(e(&v.inverse())?, e(&v)?.inverse().map_err(tce)?);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    Ok(Verdict::Pass(format!("all exact: {}", done.join(", "))))
}

struct Criterion {
    n: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { n: 1, title: "constants", budget: s(1), run: c1_constants },
        Criterion { n: 2, title: "word identities", budget: s(1), run: c2_words },
        Criterion { n: 3, title: "decoration", budget: s(1), run: c3_decoration },
        Criterion { n: 4, title: "coordinates", budget: s(5), run: c4_coordinates },
        Criterion { n: 5, title: "tangent space", budget: s(60), run: c5_tangent },
        Criterion { n: 6, title: "parametrisation", budget: s(120), run: c6_parametrisation },
        Criterion { n: 7, title: "branched cover", budget: s(30), run: c7_branched_cover },
        Criterion { n: 8, title: "cross-module consistency", budget: s(10), run: c8_cross_module },
        Criterion { n: 9, title: "property suites", budget: s(600), run: c9_properties },
    ];
    // Warm the lazily built towers so the first criterion is not charged for them.
    let _ = (Tower::standard(), Tower::eisenstein(), data());
    let (mut pass, mut stated, mut broken) = (0, 0, 0);
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let dt = start.elapsed();
        let time = format!("{:.2}s of {}s", dt.as_secs_f64(), c.budget.as_secs());
        let over = dt > c.budget;
        match (&out, over) {
            (Ok(Verdict::Pass(msg)), false) => {
                pass += 1;
                println!("criterion {} PASS [{}] ({time}): {msg}", c.n, c.title);
            }
            (Ok(Verdict::NotAsStated(msg)), false) => {
                stated += 1;
                println!("criterion {} FAIL as stated [{}] ({time}): {msg}", c.n, c.title);
            }
            (Ok(_), true) => {
                broken += 1;
                println!("criterion {} FAIL [{}] ({time}): over time budget", c.n, c.title);
            }
            (Err(e), _) => {
                broken += 1;
                println!("criterion {} FAIL [{}] ({time}): {e}", c.n, c.title);
            }
        }
    }
    println!("acceptance: {pass} pass, {stated} unattainable as stated (analysed above), {broken} broken");
    if broken > 0 {
        std::process::exit(1);
    }
}
