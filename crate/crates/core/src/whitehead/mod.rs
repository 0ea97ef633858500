//! The Whitehead link instance: constants, the representations `rho_geom`
//! and `rho0`, the decoration of `rho0`, its deformation-variety point and
//! the end-to-end pipeline.
//!
//! Every check lands in a [`Report`]. Printed identities that turn out to be
//! false are kept as [`Status::Erratum`] entries next to the corrected
//! statement that is actually verified, so nothing is silently replaced.

mod data;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::defvar::{self, DefPoint, DefVarError};
use crate::field::{FieldElement, Tower};
use crate::flags::{self, invariant_flag, is_general_position, FlagError, FlagMode, FlagTetrahedron, HALF_EDGES};
use crate::linalg::{is_regular_order_three, is_regular_unipotent, LinalgError, Matrix};
use crate::words::{builtin, projectively_equal, xy_to_ab, Word, WordError};
use crate::x0::{self, Sign, TraceCoordinates, X0Error};

pub use data::{
    bundled_point, InstanceData, FLAGS_JSON, INSTANCE_JSON, MATRICES_JSON, POINT_JSON, RAW_GLUING_CSV,
    RAW_GLUING_HEADER,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WhiteheadError {
    #[error("bad instance data: {0}")]
    Data(String),
    #[error("stage {stage}: {message}")]
    Stage { stage: Stage, message: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    RhoGeom,
    Rho0,
    Decoration,
    Defpoint,
    Tangent,
    X0,
}

impl Stage {
    pub const ALL: [Stage; 6] =
        [Stage::RhoGeom, Stage::Rho0, Stage::Decoration, Stage::Defpoint, Stage::Tangent, Stage::X0];

    pub fn name(self) -> &'static str {
        match self {
            Stage::RhoGeom => "rho-geom",
            Stage::Rho0 => "rho0",
            Stage::Decoration => "decoration",
            Stage::Defpoint => "defpoint",
            Stage::Tangent => "tangent",
            Stage::X0 => "x0",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A printed statement that does not hold; its correction is a separate check.
    Erratum,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub stage: Stage,
    pub check: String,
    pub expected: serde_json::Value,
    pub got: serde_json::Value,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, stage: Stage, check: &str, expected: impl Serialize, got: impl Serialize, pass: bool) {
        self.checks.push(Check {
            stage,
            check: check.to_string(),
            expected: serde_json::to_value(expected).unwrap(),
            got: serde_json::to_value(got).unwrap(),
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            note: None,
        });
    }

    fn truth(&mut self, stage: Stage, check: &str, pass: bool) {
        self.push(stage, check, true, pass, pass);
    }

    /// Records a printed claim. If it holds it is an ordinary pass; if not,
    /// it is an erratum and `note` says where the correction is checked.
    fn printed(&mut self, stage: Stage, check: &str, holds: bool, got: impl Serialize, note: &str) {
        self.checks.push(Check {
            stage,
            check: check.to_string(),
            expected: serde_json::Value::Bool(true),
            got: serde_json::to_value(got).unwrap(),
            pass: holds,
            status: if holds { Status::Pass } else { Status::Erratum },
            note: (!holds).then(|| note.to_string()),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// No check failed; errata are allowed.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn errata(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Erratum)
    }

    pub fn find(&self, check: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }
}

fn stage_err(stage: Stage) -> impl Fn(String) -> WhiteheadError {
    move |message| WhiteheadError::Stage { stage, message }
}

fn word(s: &str) -> Word {
    Word::parse(s).expect("built-in word")
}

fn eval(w: &Word, im: &std::collections::HashMap<String, Matrix>, stage: Stage) -> Result<Matrix, WhiteheadError> {
    w.evaluate(im).map_err(|e: WordError| stage_err(stage)(e.to_string()))
}

fn show(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().into_iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}

fn gaussian() -> std::sync::Arc<Tower> {
    Tower::standard().prefix(1)
}

/// Constants of the `SL(2)` side and the identities satisfied by `rho_geom`.
pub fn check_rho_geom(d: &InstanceData) -> Result<Report, WhiteheadError> {
    let st = Stage::RhoGeom;
    let err = stage_err(st);
    let mut r = Report::default();
    let q = gaussian();
    let parse = |rows: &[&[&str]]| Matrix::parse(&q, rows).map_err(|e| err(e.to_string()));
    let u = parse(&[&["1", "i"], &["0", "1"]])?;
    let t2 = parse(&[&["1", "2"], &["0", "1"]])?;
    let w1 = parse(&[&["1", "0"], &["-1-i", "1"]])?;
    r.push(st, "u", show(&u), show(&d.u), d.u == u);
    r.push(st, "t2", show(&t2), show(&d.t2), d.t2 == t2);
    r.push(st, "w1", show(&w1), show(&d.w1), d.w1 == w1);
    let im = d.rho_geom_images()?;
    let ra = parse(&[&["i", "-i"], &["-1-i", "1"]])?;
    let rb = parse(&[&["-1+2i", "-2i"], &["-1-i", "1"]])?;
    r.push(st, "rho_geom(a)", show(&ra), show(&im["a"]), im["a"] == ra);
    r.push(st, "rho_geom(b)", show(&rb), show(&im["b"]), im["b"] == rb);

    let id = Matrix::identity(&q, 2);
    for name in ["relator_ab", "relator_ab_long"] {
        let m = eval(&builtin(name).unwrap(), &im, st)?;
        r.push(st, &format!("{name} = +-I"), "+-I", show(&m), projectively_equal(&m, &id)?);
    }
    let rel_xy = builtin("relator_xy").unwrap().translate(&xy_to_ab()).map_err(|e| err(e.to_string()))?;
    let m = eval(&rel_xy, &im, st)?;
    r.push(st, "relator_xy (x = ab^-1, y = ab^-1a) = +-I", "+-I", show(&m), projectively_equal(&m, &id)?);
    let s_inf = eval(&builtin("s_inf").unwrap(), &im, st)?;
    r.push(st, "rho_geom(b^-1 a^3 b^-1 a^-1) = +-t2", show(&d.t2), show(&s_inf), projectively_equal(&s_inf, &d.t2)?);

    // Identities in u, w1, t2 and rho_geom.
    let sl2 = d.sl2_images();
    let printed_t2 = eval(&word("(Wu)^2 w u W u"), &sl2, st)?;
    r.printed(
        st,
        "printed: t2 = (w1^-1 u)^2 w1 u w1^-1 u",
        printed_t2 == d.t2,
        show(&printed_t2),
        "the word evaluates to another matrix; corrected word checked below",
    );
    let fixed_t2 = eval(&word("W u w U w u W u"), &sl2, st)?;
    r.push(
        st,
        "t2 = +-w1^-1 u w1 u^-1 w1 u w1^-1 u",
        show(&d.t2),
        show(&fixed_t2),
        projectively_equal(&fixed_t2, &d.t2)?,
    );

    let a = &im["a"];
    let ai = a.inverse()?;
    let conj =
        |w: &str| -> Result<Matrix, WhiteheadError> { Ok(a.mul(&eval(&builtin(w).unwrap(), &im, st)?)?.mul(&ai)?) };
    let m1 = conj("m1")?;
    let m2 = conj("m2")?;
    let l1 = conj("l1")?;
    let l2 = conj("l2")?;
    let w1i = d.w1.inverse()?;
    r.printed(
        st,
        "printed: rho_geom(a m1 a^-1) = +-w1",
        projectively_equal(&m1, &d.w1)?,
        show(&m1),
        "the image is w1^-1; checked below",
    );
    r.push(st, "rho_geom(a m1 a^-1) = +-w1^-1", show(&w1i), show(&m1), projectively_equal(&m1, &w1i)?);
    r.push(st, "rho_geom(a m2 a^-1) = +-u", show(&d.u), show(&m2), projectively_equal(&m2, &d.u)?);
    let t2iu2 = d.t2.inverse()?.mul(&d.u)?.mul(&d.u)?;
    r.push(st, "rho_geom(a l2 a^-1) = +-t2^-1 u^2", show(&t2iu2), show(&l2), projectively_equal(&l2, &t2iu2)?);
    let s0 = eval(&builtin("s0").unwrap(), &im, st)?;
    let w1i2 = w1i.mul(&w1i)?;
    let printed_l1 = w1i2.mul(&s0)?;
    r.printed(
        st,
        "printed: rho_geom(a l1 a^-1) = +-w1^-2 rho_geom(s0)",
        projectively_equal(&l1, &printed_l1)?,
        show(&l1),
        "holds with rho_geom(s0)^-1; checked below",
    );
    let fixed_l1 = w1i2.mul(&s0.inverse()?)?;
    r.push(
        st,
        "rho_geom(a l1 a^-1) = +-w1^-2 rho_geom(s0)^-1",
        show(&fixed_l1),
        show(&l1),
        projectively_equal(&l1, &fixed_l1)?,
    );
    Ok(r)
}

/// `T` exactly as printed; its `(1,2)` entry has the wrong sign.
pub fn printed_t() -> Matrix {
    Matrix::parse(
        &Tower::standard(),
        &[&["1", "(sqrt3 + i*sqrt5)/2", "-1"], &["(sqrt3 - i*sqrt5)/2", "-1", "0"], &["-1", "0", "0"]],
    )
    .expect("printed T parses")
}

/// Exact identities of `rho0`.
pub fn check_rho0(d: &InstanceData) -> Result<Report, WhiteheadError> {
    let st = Stage::Rho0;
    let err = stage_err(st);
    let mut r = Report::default();
    let id = Matrix::identity(d.s.tower(), 3);
    let pt = printed_t();
    let pt_ok = is_regular_order_three(&pt).unwrap_or(false);
    r.printed(
        st,
        "printed T is regular of order three",
        pt_ok,
        x0::trace_map(&pt, &pt).map(|t| t[5].to_string()).unwrap_or_else(|e| e.to_string()),
        "tr T^-1 != 0; the bundled T negates entry (1,2)",
    );
    for (name, m) in [("S", &d.s), ("T", &d.t)] {
        r.push(st, &format!("det {name} = 1"), "1", m.det()?.to_string(), m.det()?.is_one());
        r.truth(
            st,
            &format!("{name} regular of order three (tr = tr^-1 = 0, {name}^3 = I)"),
            is_regular_order_three(m)?,
        );
        r.truth(st, &format!("{name}^3 = I"), m.pow(3)? == id);
    }
    let im = d.rho0_images();
    let e = |w: &Word| eval(w, &im, st);
    for name in ["relator_ab", "relator_ab_long"] {
        let m = e(&builtin(name).unwrap())?;
        r.push(st, &format!("rho0({name}) = I"), "I", show(&m), m == id);
    }
    let rel_xy = builtin("relator_xy").unwrap().translate(&xy_to_ab()).map_err(|e| err(e.to_string()))?;
    r.truth(st, "rho0(relator_xy) = I", e(&rel_xy)? == id);
    for (m, l) in [("m1", "l1"), ("m2", "l2")] {
        let mm = e(&builtin(m).unwrap())?;
        let ll = e(&builtin(l).unwrap())?;
        r.truth(st, &format!("rho0({m})^3 = rho0({l})"), mm.pow(3)? == ll);
    }
    let ti = d.t.inverse()?;
    let si = d.s.inverse()?;
    let st_i = d.s.mul(&ti)?;
    let st_i_s = st_i.mul(&d.s)?;
    let ts_i = d.t.mul(&si)?;
    r.truth(st, "rho0(s0) = S T^-1 S", e(&builtin("s0").unwrap())? == st_i_s);
    r.truth(st, "rho0(s_inf) = T S^-1", e(&builtin("s_inf").unwrap())? == ts_i);
    r.truth(st, "rho0(a b^-1) = S T^-1", e(&word("a b^-1"))? == st_i);
    r.truth(st, "rho0(a b^-1 a) = S T^-1 S", e(&word("a b^-1 a"))? == st_i_s);
    r.truth(st, "T S^-1 = (S T^-1)^-1", ts_i == st_i.inverse()?);
    r.truth(st, "S T^-1 regular unipotent", is_regular_unipotent(&st_i)?);
    r.truth(st, "S T^-1 S regular unipotent", is_regular_unipotent(&st_i_s)?);
    r.push(st, "tr S T^-1", "3", st_i.trace()?.to_string(), st_i.trace()? == FieldElement::from_int(st_i.tower(), 3));
    Ok(r)
}

/// The stabilizer generator printed for each vertex, where it differs from the bundled one.
const PRINTED_STABILIZERS: [(&str, &str); 1] = [("(-1+i)/2", "b a")];

/// The invariant flag of each stabilizer image, compared with the bundled flags.
pub fn build_decoration(d: &InstanceData) -> Result<(BTreeMap<String, flags::Flag>, Report), WhiteheadError> {
    let st = Stage::Decoration;
    let err = stage_err(st);
    let mut r = Report::default();
    let im = d.rho0_images();
    let mut out = BTreeMap::new();
    for (tag, w) in &d.stabilizers {
        let m = eval(w, &im, st)?;
        let regular = is_regular_unipotent(&m)?;
        r.truth(st, &format!("rho0({w}) regular unipotent [{tag}]"), regular);
        if !regular {
            return Err(err(format!("stabilizer of {tag} is not regular unipotent")));
        }
        let f = invariant_flag(&m, &FlagMode::Unipotent).map_err(|e| err(e.to_string()))?;
        let table = d.flags.get(tag).ok_or_else(|| err(format!("no flag for vertex {tag}")))?;
        r.push(st, &format!("flag[{tag}] matches table"), true, f.same_as(table), f.same_as(table));
        out.insert(tag.clone(), f);
    }
    for (tag, printed) in PRINTED_STABILIZERS {
        let m = eval(&word(printed), &im, st)?;
        let fixes = d.flags.get(tag).map(|f| f.is_invariant_under(&m)).transpose().map_err(|e| err(e.to_string()))?;
        r.printed(
            st,
            &format!("printed stabilizer rho0({printed}) fixes flag[{tag}]"),
            fixes == Some(true),
            fixes,
            "it does not; the bundled stabilizer of this vertex is a^-1 b (S^-1 T)",
        );
    }
    Ok((out, r))
}

/// Printed values of `(z12, z21, z34, z43)` per tetrahedron.
pub const TABLE4: [[&str; 4]; 4] = [
    ["(7 + i*sqrt15)/4", "(-1 - i*sqrt15)/8", "(7 - i*sqrt15)/4", "(-1 + i*sqrt15)/8"],
    ["(-1 + i*sqrt15)/8", "(7 - i*sqrt15)/4", "(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4"],
    ["(7 - i*sqrt15)/4", "(-1 + i*sqrt15)/8", "(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4"],
    ["(-1 - i*sqrt15)/8", "(7 + i*sqrt15)/4", "(-1 + i*sqrt15)/8", "(7 - i*sqrt15)/4"],
];

pub const TABLE4_EDGES: [(usize, usize); 4] = [(1, 2), (2, 1), (3, 4), (4, 3)];

pub fn table4_value(tet: usize, k: usize) -> FieldElement {
    FieldElement::parse(&Tower::standard(), TABLE4[tet][k]).expect("table entries parse")
}

/// Entries of the table that are transposed in print: `(tet, k, k')`.
const TABLE4_SWAPS: [(usize, usize, usize); 1] = [(2, 2, 3)];

/// Decorates the tetrahedra, computes all 48 coordinates and compares with the table.
pub fn build_defpoint(d: &InstanceData) -> Result<(DefPoint, Report), WhiteheadError> {
    let st = Stage::Defpoint;
    let err = stage_err(st);
    let mut r = Report::default();
    let mut z = vec![FieldElement::zero(&Tower::standard()); 12 * d.tetrahedra.len()];
    let mut coords = Vec::new();
    for (n, tags) in d.tetrahedra.iter().enumerate() {
        let fl = tags.clone().map(|t| d.flags[&t].clone());
        let gp = is_general_position(&fl);
        r.push(st, &format!("tetrahedron {n} in general position"), "general", format!("{gp:?}"), gp.is_ok());
        let c = flags::tetra_coordinates(&FlagTetrahedron::new(fl))
            .map_err(|e: FlagError| err(format!("tetrahedron {n}: {e}")))?;
        for (k, e) in c.edges.iter().enumerate() {
            z[12 * n + k] = e.clone();
        }
        coords.push(c);
    }
    for (n, c) in coords.iter().enumerate() {
        for (k, &(i, j)) in TABLE4_EDGES.iter().enumerate() {
            let got = c.z(i, j);
            let want = table4_value(n, k);
            let name = format!("table: z{i}{j} of tetrahedron {n}");
            if let Some(&(_, a, b)) = TABLE4_SWAPS.iter().find(|s| s.0 == n && (s.1 == k || s.2 == k)) {
                let other = table4_value(n, if k == a { b } else { a });
                r.printed(
                    st,
                    &name,
                    *got == want,
                    got.to_string(),
                    "printed z34 and z43 of this tetrahedron are transposed",
                );
                let (oi, oj) = TABLE4_EDGES[if k == a { b } else { a }];
                r.push(st, &format!("{name} = printed z{oi}{oj}"), other.to_string(), got.to_string(), *got == other);
            } else {
                r.push(st, &name, want.to_string(), got.to_string(), *got == want);
            }
        }
    }
    // Every tetrahedron carries the same values up to renumbering.
    let sorted = |c: &flags::ZCoordinates| {
        let mut v: Vec<String> = c.edges.iter().map(|e| e.to_string()).collect();
        v.sort();
        v
    };
    let first = sorted(&coords[0]);
    r.truth(st, "tetrahedra share one multiset of edge values", coords.iter().all(|c| sorted(c) == first));
    let p = DefPoint { z };
    let res = defvar::evaluate_residuals(&d.gluing, &p).map_err(|e| err(e.to_string()))?;
    let nrel = 8 * d.gluing.nu;
    r.push(
        st,
        "internal relations equal to 1",
        nrel,
        res.values[..nrel].iter().filter(|v| v.is_one()).count(),
        res.values[..nrel].iter().all(FieldElement::is_one),
    );
    let ng = res.values.len() - nrel;
    r.push(
        st,
        "gluing residuals equal to 1",
        ng,
        res.values[nrel..].iter().filter(|v| v.is_one()).count(),
        res.values[nrel..].iter().all(FieldElement::is_one),
    );
    // The printed transposition leaves the variety, which is why it is read as a misprint.
    let mut printed = p.clone();
    for (n, k, _) in TABLE4_SWAPS {
        let (i, j) = TABLE4_EDGES[k];
        printed.z[12 * n + flags::half_edge_rank(i, j)] = table4_value(n, k);
    }
    let on = defvar::evaluate_residuals(&d.gluing, &printed).map(|res| res.all_one()).unwrap_or(false);
    r.push(st, "printed table values (transposed entries) leave the variety", false, on, !on);
    r.push(st, "matches bundled point", true, p == bundled_point(), p == bundled_point());
    debug_assert_eq!(HALF_EDGES.len(), 12);
    Ok((p, r))
}

pub fn check_tangent(d: &InstanceData, p: &DefPoint) -> Result<Report, WhiteheadError> {
    let st = Stage::Tangent;
    let err = stage_err(st);
    let mut r = Report::default();
    r.truth(st, "gluing rows: 8 face, 8 edge, supports of 4, 6 or 8 ones", d.gluing.check_whitehead_shape().is_ok());
    let t = defvar::tangent_space(&d.gluing, p).map_err(|e: DefVarError| err(e.to_string()))?;
    r.push(st, "Jacobian kernel dimension", 4, t.dimension(), t.dimension() == 4);
    r.push(st, "Jacobian rank", 44, t.rank, t.rank == 44);
    r.truth(st, "rank + nullity = 48", t.rank_nullity_holds());
    Ok(r)
}

/// `rho0` inside the parametrisation: trace coordinates, `Delta` and a
/// parametrised pair with the same nine traces.
pub fn check_x0(d: &InstanceData) -> Result<Report, WhiteheadError> {
    let st = Stage::X0;
    let err = stage_err(st);
    let xe = |e: X0Error| err(e.to_string());
    let mut r = Report::default();
    let tr = x0::trace_map(&d.s, &d.t)?;
    let zero_slots = [0, 1, 4, 5].iter().all(|&k| tr[k].is_zero());
    r.push(st, "trace_map(S,T) slots 1,2,5,6 vanish", true, zero_slots, zero_slots);
    let z = TraceCoordinates::new([tr[2].clone(), tr[3].clone(), tr[6].clone(), tr[7].clone()]);
    let disc = x0::discriminant(&z);
    r.push(st, "z at rho0", "trace coordinates", z.to_string(), true);
    r.push(st, "Delta at rho0", "computed", disc.to_string(), true);
    let root = x0::principal_delta(&z).map_err(xe)?;
    let mut matched = None;
    for s in [Sign::Plus, Sign::Minus] {
        let p = x0::solve_with_delta(&z, &root, s).map_err(xe)?;
        let (a, b) = x0::build_pair(&p).map_err(xe)?;
        let t = x0::trace_map(&a, &b)?;
        if t == tr {
            matched = Some(s);
        }
    }
    let got: Vec<String> = tr.iter().map(|t| t.to_string()).collect();
    r.push(st, "parametrised pair reproduces all nine traces", got, matched.map(|s| s.to_string()), matched.is_some());
    Ok(r)
}

/// The full pipeline, or the selected stages. Stage dependencies (the
/// point for the tangent stage) are computed silently when not selected.
pub fn verify_main_theorem(d: &InstanceData, stages: &[Stage]) -> Result<Report, WhiteheadError> {
    let want = |s: Stage| stages.contains(&s);
    let mut r = Report::default();
    if want(Stage::RhoGeom) {
        r.extend(check_rho_geom(d)?);
    }
    if want(Stage::Rho0) {
        r.extend(check_rho0(d)?);
    }
    if want(Stage::Decoration) {
        r.extend(build_decoration(d)?.1);
    }
    if want(Stage::Defpoint) || want(Stage::Tangent) {
        let (p, rep) = build_defpoint(d)?;
        if want(Stage::Defpoint) {
            r.extend(rep);
        }
        if want(Stage::Tangent) {
            r.extend(check_tangent(d, &p)?);
        }
    }
    if want(Stage::X0) {
        r.extend(check_x0(d)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests;
