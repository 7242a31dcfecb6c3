//! JSON file formats for algebras and double-extension data.
//!
//! Algebra file:
//!
//! ```json
//! {
//!   "dim": 3,
//!   "brackets": [{ "i": 1, "j": 2, "coeffs": { "3": 1.0 } }],
//!   "metric": [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
//!   "comment": "optional"
//! }
//! ```
//!
//! Indices are 1-based with `i < j`. Extension file fields are `v_dim`, `K`,
//! `D`, `mu`, `b` and optionally `basis_change` and `comment`.
//!
//! Numbers are written in the shortest form that parses back to the same
//! binary64 value, so write followed by read is the identity.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{make_metric, CatalogKey, CatalogName};
use crate::curvature::MetricLieAlgebra;
use crate::doubleext::ExtensionData;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::pseudolin::{Gram, Matrix, Vector};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    pub v_dim: usize,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
    pub mu: f64,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_change: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

/// A validated algebra file.
#[derive(Clone, Debug)]
pub struct AlgebraDoc {
    pub algebra: LieAlgebra,
    pub metric: Option<Gram>,
    pub comment: Option<String>,
}

impl AlgebraDoc {
    pub fn metric_algebra(&self) -> Result<MetricLieAlgebra> {
        let gram = self
            .metric
            .clone()
            .ok_or_else(|| Error::InvalidInput("file has no `metric` field".into()))?;
        MetricLieAlgebra::new(self.algebra.clone(), gram)
    }
}

/// A validated extension file.
#[derive(Clone, Debug)]
pub struct ExtensionDoc {
    pub data: ExtensionData,
    pub basis_change: Option<Matrix>,
    pub comment: Option<String>,
    /// Non-fatal findings, such as a `K` that had to be antisymmetrized.
    pub warnings: Vec<String>,
}

fn parse_error(e: serde_json::Error) -> Error {
    if e.line() > 0 {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    } else {
        Error::Parse(e.to_string())
    }
}

fn at_line(line: Option<usize>, msg: String) -> Error {
    match line {
        Some(l) => Error::Parse(format!("line {l}: {msg}")),
        None => Error::Parse(msg),
    }
}

/// Line of a top-level field, or of element `index` of a top-level array field.
fn locate(text: &str, key: &str, index: Option<usize>) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut line = 1;
    let mut depth = 0usize;
    let mut i = 0;
    let mut want_key = true;
    let mut found_key = false;
    let mut element = 0usize;
    let mut element_started = false;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => line += 1,
            b'"' => {
                let start = i + 1;
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
                let s = &text[start..i.min(text.len())];
                if depth == 1 && want_key && !found_key && s == key {
                    found_key = true;
                    if index.is_none() {
                        return Some(line);
                    }
                }
                if found_key && depth == 2 && !element_started {
                    element_started = true;
                    if Some(element) == index {
                        return Some(line);
                    }
                }
            }
            b'{' | b'[' => {
                if found_key && depth == 2 && !element_started {
                    element_started = true;
                    if Some(element) == index {
                        return Some(line);
                    }
                }
                depth += 1;
                if depth == 1 {
                    want_key = true;
                }
            }
            b'}' | b']' => {
                depth = depth.saturating_sub(1);
                if found_key && depth == 1 {
                    return None;
                }
            }
            b':' if depth == 1 => want_key = false,
            b',' if depth == 1 => want_key = true,
            b',' if found_key && depth == 2 => {
                element += 1;
                element_started = false;
            }
            b' ' | b'\t' | b'\r' => {}
            _ => {
                if found_key && depth == 2 && !element_started {
                    element_started = true;
                    if Some(element) == index {
                        return Some(line);
                    }
                }
            }
        }
        i += 1;
    }
    None
}

fn matrix_from_rows(rows: &[Vec<f64>], r: usize, c: usize, what: &str) -> std::result::Result<Matrix, String> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(format!("{what} must be {r}x{c}"));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(format!("{what} has non-finite entries"));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn parse_algebra(text: &str) -> Result<AlgebraDoc> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(parse_error)?;
    let n = file.dim;
    if n == 0 {
        return Err(at_line(locate(text, "dim", None), "dim must be positive".into()));
    }
    let mut seen = BTreeMap::new();
    let mut brackets = Vec::with_capacity(file.brackets.len());
    for (idx, br) in file.brackets.iter().enumerate() {
        let line = locate(text, "brackets", Some(idx));
        let fail = |msg: String| at_line(line, format!("bracket {}: {msg}", idx + 1));
        if br.i < 1 || br.j > n || br.i >= br.j {
            return Err(fail(format!("need 1 <= i < j <= {n}, got i={}, j={}", br.i, br.j)));
        }
        if seen.insert((br.i, br.j), idx).is_some() {
            return Err(fail(format!("pair ({}, {}) appears twice", br.i, br.j)));
        }
        let mut coeffs = Vec::with_capacity(br.coeffs.len());
        for (&k, &v) in &br.coeffs {
            if k < 1 || k > n {
                return Err(fail(format!("coefficient index {k} out of range 1..={n}")));
            }
            if !v.is_finite() {
                return Err(fail(format!("coefficient of e{k} is not finite")));
            }
            coeffs.push((k - 1, v));
        }
        brackets.push((br.i - 1, br.j - 1, coeffs));
    }
    let algebra = LieAlgebra::from_brackets(n, brackets)?;
    let algebra = algebra
        .checked(tol::LINALG)
        .map_err(|e| at_line(locate(text, "brackets", None), e.to_string()))?;

    let metric = match &file.metric {
        None => None,
        Some(rows) => {
            let line = locate(text, "metric", None);
            let m = matrix_from_rows(rows, n, n, "metric").map_err(|msg| at_line(line, msg))?;
            let asym = (&m - m.transpose()).amax();
            if asym > tol::scaled(tol::LINALG, m.amax()) {
                return Err(at_line(line, format!("metric is not symmetric (defect {asym:e})")));
            }
            Some(Gram::new(m).map_err(|e| at_line(line, e.to_string()))?)
        }
    };
    Ok(AlgebraDoc {
        algebra,
        metric,
        comment: file.comment,
    })
}

pub fn algebra_file(algebra: &LieAlgebra, metric: Option<&Gram>, comment: Option<&str>) -> AlgebraFile {
    let brackets = algebra
        .upper_brackets()
        .filter_map(|(i, j, v)| {
            let coeffs: BTreeMap<usize, f64> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(k, c)| (k + 1, *c))
                .collect();
            (!coeffs.is_empty()).then_some(BracketEntry {
                i: i + 1,
                j: j + 1,
                coeffs,
            })
        })
        .collect();
    AlgebraFile {
        dim: algebra.dim(),
        brackets,
        metric: metric.map(|g| rows_of(g.matrix())),
        comment: comment.map(str::to_string),
    }
}

pub fn write_algebra(algebra: &LieAlgebra, metric: Option<&Gram>, comment: Option<&str>) -> String {
    let mut s = serde_json::to_string_pretty(&algebra_file(algebra, metric, comment)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_extension(text: &str) -> Result<ExtensionDoc> {
    let file: ExtensionFile = serde_json::from_str(text).map_err(parse_error)?;
    let v = file.v_dim;
    let k = matrix_from_rows(&file.k, v, v, "K").map_err(|m| at_line(locate(text, "K", None), m))?;
    let d = matrix_from_rows(&file.d, v, v, "D").map_err(|m| at_line(locate(text, "D", None), m))?;
    if file.b.len() != v || file.b.iter().any(|x| !x.is_finite()) {
        return Err(at_line(
            locate(text, "b", None),
            format!("b must have {v} finite entries"),
        ));
    }
    if !file.mu.is_finite() {
        return Err(at_line(locate(text, "mu", None), "mu must be finite".into()));
    }
    let mut warnings = Vec::new();
    let defect = (&k + k.transpose()).amax();
    if defect > tol::scaled(tol::LINALG, k.amax()) {
        warnings.push(format!(
            "K is not skew-symmetric (defect {defect:e}); replaced by (K - K^T)/2"
        ));
    }
    let basis_change = match &file.basis_change {
        None => None,
        Some(rows) => Some(
            matrix_from_rows(rows, v + 2, v + 2, "basis_change")
                .map_err(|m| at_line(locate(text, "basis_change", None), m))?,
        ),
    };
    let data = ExtensionData::new(k, d, file.mu, Vector::from_vec(file.b))?;
    Ok(ExtensionDoc {
        data,
        basis_change,
        comment: file.comment,
        warnings,
    })
}

pub fn extension_file(data: &ExtensionData, basis_change: Option<&Matrix>, comment: Option<&str>) -> ExtensionFile {
    ExtensionFile {
        v_dim: data.v_dim(),
        k: rows_of(data.k()),
        d: rows_of(&data.d),
        mu: data.mu,
        b: data.b.iter().copied().collect(),
        basis_change: basis_change.map(rows_of),
        comment: comment.map(str::to_string),
    }
}

pub fn write_extension(data: &ExtensionData, basis_change: Option<&Matrix>, comment: Option<&str>) -> String {
    let mut s = serde_json::to_string_pretty(&extension_file(data, basis_change, comment)).expect("serializable");
    s.push('\n');
    s
}

fn symbolic_constants(name: CatalogName) -> Option<&'static str> {
    match name {
        CatalogName::EX7 => Some("coefficients 1.4142135623730951 = sqrt(2)"),
        CatalogName::EX8 => Some(
            "coefficients -6.928203230275509 = -4 sqrt(3), 1.5811388300841898 = sqrt(5/2), \
             -3.4641016151377544 = -2 sqrt(3), 5.612486080160912 = 3 sqrt(7/2), \
             -5.656854249492381 = -4 sqrt(2), -4.58257569495584 = -sqrt(21)",
        ),
        _ => None,
    }
}

/// Algebra file of a catalog entry, with the key recorded in `comment`.
pub fn catalog_export(key: &CatalogKey) -> Result<String> {
    let m = make_metric(key)?;
    let mut comment = format!("catalog {key}");
    if let Some(sym) = symbolic_constants(key.name) {
        comment.push_str("; ");
        comment.push_str(sym);
    }
    Ok(write_algebra(m.algebra(), Some(m.gram()), Some(&comment)))
}

pub fn read_algebra_path(path: &Path) -> Result<AlgebraDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_extension_path(path: &Path) -> Result<ExtensionDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_extension(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::MetricVariant;

    #[test]
    fn algebra_round_trip_is_bit_exact() {
        for name in CatalogName::ALL {
            let key = match name.variants().first() {
                Some(&v) => CatalogKey::variant(v, &[]),
                None if name.is_example() => CatalogKey::example(name),
                None => continue,
            };
            let text = catalog_export(&key).unwrap();
            let doc = parse_algebra(&text).unwrap();
            let again = write_algebra(&doc.algebra, doc.metric.as_ref(), doc.comment.as_deref());
            assert_eq!(text, again, "{key}");
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let text = "{\n  \"dim\": 3,\n  \"brackets\": [\n    {\"i\": 1, \"j\": 2, \"coeffs\": {\"3\": 1}},\n    {\"i\": 2, \"j\": 1, \"coeffs\": {\"3\": 1}}\n  ]\n}\n";
        let err = parse_algebra(text).unwrap_err().to_string();
        assert!(err.contains("line 5"), "{err}");
        let text = "{\n  \"dim\": 3,\n  \"brackets\": [\n    {\"i\": 1, \"j\": 2, \"coeffs\": {\"7\": 1}}\n  ]\n}\n";
        let err = parse_algebra(text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("out of range"), "{err}");
        let err = parse_algebra("{\n \"dim\": 3,\n \"brackets\": [,]\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        let text = "{\n \"dim\": 2,\n \"brackets\": [],\n \"metric\": [[1, 2], [0, 1]]\n}";
        let err = parse_algebra(text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("symmetric"), "{err}");
    }

    #[test]
    fn jacobi_failures_are_rejected() {
        let text = r#"{"dim": 3, "brackets": [
            {"i": 1, "j": 2, "coeffs": {"3": 1}},
            {"i": 1, "j": 3, "coeffs": {"1": 1}},
            {"i": 2, "j": 3, "coeffs": {"2": 1}}]}"#;
        assert!(parse_algebra(text).is_err());
    }

    #[test]
    fn extension_round_trip_and_warning() {
        let text = r#"{"v_dim": 2, "K": [[0, -1], [2, 0]], "D": [[0, 1], [0, 0]], "mu": 0, "b": [0.5, 0]}"#;
        let doc = parse_extension(text).unwrap();
        assert_eq!(doc.warnings.len(), 1);
        assert_eq!(doc.data.k()[(1, 0)], 1.5);
        let out = write_extension(&doc.data, None, None);
        let again = parse_extension(&out).unwrap();
        assert!(again.warnings.is_empty());
        assert_eq!(again.data, doc.data);
    }

    #[test]
    fn metric_is_required_for_curvature() {
        let doc = parse_algebra(r#"{"dim": 2, "brackets": []}"#).unwrap();
        assert!(doc.metric_algebra().is_err());
        let text = catalog_export(&CatalogKey::variant(MetricVariant::M32, &[("alpha", 1.0)])).unwrap();
        assert!(parse_algebra(&text).unwrap().metric_algebra().is_ok());
    }
}
