//! The bundled instance: matrices, decoration flags, tetrahedra and gluing data.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;

use super::WhiteheadError;
use crate::defvar::{DefPoint, GluingSystem};
use crate::flags::Flag;
use crate::linalg::Matrix;
use crate::words::{images, Word};

pub const MATRICES_JSON: &str = include_str!("../../data/matrices.json");
pub const FLAGS_JSON: &str = include_str!("../../data/flags.json");
pub const INSTANCE_JSON: &str = include_str!("../../data/instance.json");
pub const POINT_JSON: &str = include_str!("../../data/point.json");
pub const RAW_GLUING_CSV: &str = include_str!("../../data/whitehead_pgl3.csv");
pub const RAW_GLUING_HEADER: &str = include_str!("../../data/whitehead_pgl3.header.json");

#[derive(Deserialize)]
struct FlagsFile {
    flags: BTreeMap<String, Flag>,
    stabilizers: BTreeMap<String, String>,
    tetrahedra: Vec<[String; 4]>,
}

#[derive(Debug, Clone)]
pub struct InstanceData {
    pub u: Matrix,
    pub w1: Matrix,
    pub t2: Matrix,
    pub s: Matrix,
    pub t: Matrix,
    /// Decoration flags keyed by vertex tag.
    pub flags: BTreeMap<String, Flag>,
    /// Generator of each vertex stabilizer, in `a, b`.
    pub stabilizers: BTreeMap<String, Word>,
    /// Vertex tags of each tetrahedron, in vertex order `1..4`.
    pub tetrahedra: Vec<[String; 4]>,
    pub gluing: GluingSystem,
}

fn bad(file: &str, e: impl std::fmt::Display) -> WhiteheadError {
    WhiteheadError::Data(format!("{file}: {e}"))
}

impl InstanceData {
    pub fn bundled() -> Result<Self, WhiteheadError> {
        Self::from_strs(MATRICES_JSON, FLAGS_JSON, INSTANCE_JSON)
    }

    /// Reads `matrices.json`, `flags.json` and `instance.json` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, WhiteheadError> {
        let read = |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| bad(name, e));
        Self::from_strs(&read("matrices.json")?, &read("flags.json")?, &read("instance.json")?)
    }

    pub fn from_strs(matrices: &str, flags: &str, instance: &str) -> Result<Self, WhiteheadError> {
        let mut m: HashMap<String, Matrix> = serde_json::from_str(matrices).map_err(|e| bad("matrices.json", e))?;
        let mut take = |k: &str| m.remove(k).ok_or_else(|| bad("matrices.json", format!("missing {k}")));
        let (u, w1, t2, s, t) = (take("u")?, take("w1")?, take("t2")?, take("S")?, take("T")?);
        let f: FlagsFile = serde_json::from_str(flags).map_err(|e| bad("flags.json", e))?;
        let stabilizers = f
            .stabilizers
            .into_iter()
            .map(|(k, w)| Word::parse(&w).map(|w| (k, w)).map_err(|e| bad("flags.json", e)))
            .collect::<Result<_, _>>()?;
        for tags in &f.tetrahedra {
            if let Some(missing) = tags.iter().find(|t| !f.flags.contains_key(*t)) {
                return Err(bad("flags.json", format!("tetrahedron names unknown vertex {missing:?}")));
            }
        }
        let gluing = GluingSystem::from_json(instance).map_err(|e| bad("instance.json", e))?;
        Ok(InstanceData { u, w1, t2, s, t, flags: f.flags, stabilizers, tetrahedra: f.tetrahedra, gluing })
    }

    /// `a -> u^-1 w1`, `b -> u^-2 w1`.
    pub fn rho_geom_images(&self) -> Result<HashMap<String, Matrix>, WhiteheadError> {
        let ui = self.u.inverse()?;
        let a = ui.mul(&self.w1)?;
        let b = ui.mul(&ui)?.mul(&self.w1)?;
        Ok(images(&[("a", &a), ("b", &b)]))
    }

    /// `a -> S`, `b -> T`.
    pub fn rho0_images(&self) -> HashMap<String, Matrix> {
        images(&[("a", &self.s), ("b", &self.t)])
    }

    /// `u`, `w` (for `w1`) and `t` (for `t2`) as generator images.
    pub fn sl2_images(&self) -> HashMap<String, Matrix> {
        images(&[("u", &self.u), ("w", &self.w1), ("t", &self.t2)])
    }
}

/// The bundled deformation-variety point.
pub fn bundled_point() -> DefPoint {
    serde_json::from_str(POINT_JSON).expect("bundled point parses")
}
