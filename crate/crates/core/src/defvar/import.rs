//! Raw gluing-equation matrices with a column-labelling sidecar.

use serde::Deserialize;

use super::{DefVarError, GluingRow, GluingSystem, RowKind, VariableIndex};

/// Sidecar describing a raw exponent matrix.
#[derive(Debug, Clone, Deserialize)]
pub struct SourceHeader {
    #[serde(default)]
    pub source: String,
    pub nu: usize,
    #[serde(default)]
    pub source_columns: Vec<String>,
    /// Canonical tag (`tet:ij`) of each raw column, in raw order.
    pub canonical_columns: Vec<String>,
    #[serde(default)]
    pub row_labels: Vec<String>,
    pub row_types: Vec<RowKind>,
}

/// Reads an integer CSV (no header line) and permutes its columns into canonical order.
pub fn import_raw(csv_text: &str, header_json: &str) -> Result<GluingSystem, DefVarError> {
    let h: SourceHeader = serde_json::from_str(header_json).map_err(|e| DefVarError::Instance(e.to_string()))?;
    let n = 12 * h.nu;
    if h.canonical_columns.len() != n {
        return Err(DefVarError::Instance(format!("{} column tags for {n} columns", h.canonical_columns.len())));
    }
    let target: Vec<usize> =
        h.canonical_columns.iter().map(|t| t.parse::<VariableIndex>().map(|v| v.column())).collect::<Result<_, _>>()?;
    let mut check = target.clone();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(DefVarError::Instance("canonical_columns is not a permutation".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let mut rows = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| DefVarError::Instance(e.to_string()))?;
        if rec.len() != n {
            return Err(DefVarError::Instance(format!("raw row {r} has {} entries, expected {n}", rec.len())));
        }
        let mut e = vec![0i64; n];
        for (src, field) in rec.iter().enumerate() {
            e[target[src]] =
                field.parse().map_err(|_| DefVarError::Instance(format!("raw row {r}: bad entry {field:?}")))?;
        }
        let kind = *h.row_types.get(r).ok_or_else(|| DefVarError::Instance(format!("no type for raw row {r}")))?;
        rows.push(GluingRow { kind, exponents: e, label: h.row_labels.get(r).cloned() });
    }
    if rows.len() != h.row_types.len() {
        return Err(DefVarError::Instance(format!("{} rows but {} row types", rows.len(), h.row_types.len())));
    }
    GluingSystem::new(h.nu, rows)
}
