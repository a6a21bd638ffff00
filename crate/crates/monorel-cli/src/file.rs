//! Relation files: one relation per file, exactly one construction key.
//!
//! The four construction forms mirror the ways relations are built
//! elsewhere: a plain matrix operator, an explicit graph basis, a normal
//! cone of a subspace, and the structured generator form (symmetric plus
//! skew part restricted to a domain, with a multivalued offset).

use monorel_core::relation::stack_pair;
use monorel_core::{LinearRelation, Subspace, Tolerance};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredForm {
    pub symmetric: Vec<Vec<f64>>,
    pub skew: Vec<Vec<f64>>,
    pub domain_basis: Vec<Vec<f64>>,
    pub offset_basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph_basis: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normal_cone: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structured: Option<StructuredForm>,
}

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn rows_to_matrix(rows: &[Vec<f64>], nrows: usize, ncols: usize, what: &str) -> Result<DMatrix<f64>, SchemaError> {
    if rows.len() != nrows {
        return Err(SchemaError(format!(
            "{what}: expected {nrows} rows, got {}",
            rows.len()
        )));
    }
    let mut m = DMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(SchemaError(format!(
                "{what}: row {i} has length {}, expected {ncols}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn rows_to_vectors(rows: &[Vec<f64>], len: usize, what: &str) -> Result<Vec<DVector<f64>>, SchemaError> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != len {
                Err(SchemaError(format!(
                    "{what}: row {i} has length {}, expected {len}",
                    row.len()
                )))
            } else {
                Ok(DVector::from_row_slice(row))
            }
        })
        .collect()
}

impl RelationFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let file: RelationFile =
            serde_json::from_str(text).map_err(|e| SchemaError(format!("invalid relation file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.n == 0 {
            return Err(SchemaError("n must be >= 1".into()));
        }
        let n = self.n;
        let keys = [
            self.matrix.is_some(),
            self.graph_basis.is_some(),
            self.normal_cone.is_some(),
            self.structured.is_some(),
        ]
        .iter()
        .filter(|&&k| k)
        .count();
        if keys != 1 {
            return Err(SchemaError(format!(
                "exactly one of matrix / graph_basis / normal_cone / structured required, found {keys}"
            )));
        }
        let check_rows = |rows: &[Vec<f64>], count: Option<usize>, len: usize, what: &str| {
            if let Some(count) = count {
                if rows.len() != count {
                    return Err(SchemaError(format!(
                        "{what}: expected {count} rows, got {}",
                        rows.len()
                    )));
                }
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != len {
                    return Err(SchemaError(format!(
                        "{what}: row {i} has length {}, expected {len}",
                        row.len()
                    )));
                }
            }
            Ok(())
        };
        if let Some(rows) = &self.matrix {
            check_rows(rows, Some(n), n, "matrix")?;
        }
        if let Some(rows) = &self.graph_basis {
            check_rows(rows, None, 2 * n, "graph_basis")?;
        }
        if let Some(rows) = &self.normal_cone {
            check_rows(rows, None, n, "normal_cone")?;
        }
        if let Some(s) = &self.structured {
            check_rows(&s.symmetric, Some(n), n, "structured.symmetric")?;
            check_rows(&s.skew, Some(n), n, "structured.skew")?;
            check_rows(&s.domain_basis, None, n, "structured.domain_basis")?;
            check_rows(&s.offset_basis, None, n, "structured.offset_basis")?;
        }
        Ok(())
    }

    pub fn build(&self, tol: &Tolerance) -> Result<LinearRelation, SchemaError> {
        self.validate()?;
        let n = self.n;
        if let Some(rows) = &self.matrix {
            let m = rows_to_matrix(rows, n, n, "matrix")?;
            return LinearRelation::from_matrix(&m, tol)
                .map_err(|e| SchemaError(e.to_string()));
        }
        if let Some(rows) = &self.graph_basis {
            let vectors = rows_to_vectors(rows, 2 * n, "graph_basis")?;
            return LinearRelation::from_graph_basis(n, &vectors, tol)
                .map_err(|e| SchemaError(e.to_string()));
        }
        if let Some(rows) = &self.normal_cone {
            let vectors = rows_to_vectors(rows, n, "normal_cone")?;
            let l = Subspace::spanned_by(n, &vectors, tol).map_err(|e| SchemaError(e.to_string()))?;
            return Ok(LinearRelation::normal_cone(&l, tol));
        }
        let s = self.structured.as_ref().expect("validated above");
        let sym = rows_to_matrix(&s.symmetric, n, n, "structured.symmetric")?;
        let skew = rows_to_matrix(&s.skew, n, n, "structured.skew")?;
        if (&sym - sym.transpose()).amax() > tol.atol {
            return Err(SchemaError("structured.symmetric is not symmetric".into()));
        }
        if (&skew + skew.transpose()).amax() > tol.atol {
            return Err(SchemaError("structured.skew is not skew-symmetric".into()));
        }
        let op = &sym + &skew;
        let domain = Subspace::spanned_by(n, &rows_to_vectors(&s.domain_basis, n, "structured.domain_basis")?, tol)
            .map_err(|e| SchemaError(e.to_string()))?;
        let offset = Subspace::spanned_by(n, &rows_to_vectors(&s.offset_basis, n, "structured.offset_basis")?, tol)
            .map_err(|e| SchemaError(e.to_string()))?;
        let mut cols = Vec::new();
        for x in domain.basis_columns() {
            cols.push(stack_pair(n, &x, &(&op * &x)).expect("length n"));
        }
        for z in offset.basis_columns() {
            cols.push(stack_pair(n, &DVector::zeros(n), &z).expect("length n"));
        }
        LinearRelation::from_graph_basis(n, &cols, tol).map_err(|e| SchemaError(e.to_string()))
    }

    /// Serializes a relation back to a file fragment: recognized as a matrix
    /// form when single-valued with full domain, otherwise as a graph basis.
    pub fn from_relation(a: &LinearRelation, tol: &Tolerance) -> Self {
        let n = a.n();
        let full_domain = a.dom(tol).dim() == n;
        let single_valued = a.at_zero(tol).dim() == 0;
        if full_domain && single_valued {
            let mut rows = vec![vec![0.0; n]; n];
            for j in 0..n {
                let mut e = DVector::zeros(n);
                e[j] = 1.0;
                let col = a
                    .image(&e, tol)
                    .expect("length checked")
                    .expect("full domain")
                    .particular()
                    .clone();
                for i in 0..n {
                    rows[i][j] = snap(col[i], tol);
                }
            }
            return RelationFile {
                n,
                matrix: Some(rows),
                graph_basis: None,
                normal_cone: None,
                structured: None,
            };
        }
        RelationFile {
            n,
            matrix: None,
            graph_basis: Some(canonical_rows(a.graph(), tol)),
            normal_cone: None,
            structured: None,
        }
    }
}

/// Snaps values at rounding-noise distance from zero, for stable output.
fn snap(v: f64, tol: &Tolerance) -> f64 {
    if v.abs() <= tol.atol {
        0.0
    } else {
        v
    }
}

/// Orthonormal basis rows in a reproducible order: each vector's first
/// coordinate above noise is made positive, then rows sort lexicographically.
pub fn canonical_rows(s: &Subspace, tol: &Tolerance) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = s
        .basis_columns()
        .into_iter()
        .map(|col| {
            let mut v: Vec<f64> = col.iter().cloned().map(|x| snap(x, tol)).collect();
            if let Some(lead) = v.iter().find(|x| x.abs() > tol.atol) {
                if *lead < 0.0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
            }
            v
        })
        .collect();
    rows.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b.iter()) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn parses_each_form() {
        let m = RelationFile::parse(r#"{"n":2,"matrix":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(m.build(&tol()).unwrap().graph().dim(), 2);

        let g = RelationFile::parse(r#"{"n":1,"graph_basis":[[0,1]]}"#).unwrap();
        let rel = g.build(&tol()).unwrap();
        assert_eq!(rel.dom(&tol()).dim(), 0);
        assert_eq!(rel.at_zero(&tol()).dim(), 1);

        let c = RelationFile::parse(r#"{"n":2,"normal_cone":[[1,0]]}"#).unwrap();
        assert_eq!(c.build(&tol()).unwrap().graph().dim(), 2);

        let s = RelationFile::parse(
            r#"{"n":2,"structured":{"symmetric":[[1,0],[0,1]],"skew":[[0,-1],[1,0]],"domain_basis":[[1,0]],"offset_basis":[[0,1]]}}"#,
        )
        .unwrap();
        assert_eq!(s.build(&tol()).unwrap().graph().dim(), 2);
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(RelationFile::parse(r#"{"n":2}"#).is_err());
        assert!(RelationFile::parse(r#"{"n":2,"matrix":[[1,0],[0,1]],"normal_cone":[[1,0]]}"#).is_err());
        assert!(RelationFile::parse(r#"{"n":0,"matrix":[]}"#).is_err());
        assert!(RelationFile::parse(r#"{"n":2,"matrix":[[1,0]]}"#).is_err());
        assert!(RelationFile::parse(r#"{"n":1,"graph_basis":[[1,0,0]]}"#).is_err());
        assert!(RelationFile::parse(r#"{"n":1,"unknown_key":3}"#).is_err());
    }

    #[test]
    fn matrix_recognition_round_trip() {
        let t = tol();
        let file = RelationFile::parse(r#"{"n":2,"matrix":[[0,-1],[1,0]]}"#).unwrap();
        let a = file.build(&t).unwrap();
        let back = RelationFile::from_relation(&a, &t);
        assert_eq!(back.matrix.unwrap(), vec![vec![0.0, -1.0], vec![1.0, 0.0]]);

        // Multivalued relations emit a graph basis.
        let cone = RelationFile::parse(r#"{"n":2,"normal_cone":[[1,0]]}"#).unwrap();
        let a = cone.build(&t).unwrap();
        let back = RelationFile::from_relation(&a, &t);
        assert!(back.graph_basis.is_some());
        let again = back.build(&t).unwrap();
        assert!(again.graph().subspace_equal(a.graph(), &t).unwrap());
    }

    #[test]
    fn canonical_rows_are_stable() {
        let t = tol();
        let s = Subspace::spanned_by(
            2,
            &[DVector::from_row_slice(&[0.0, -2.0]), DVector::from_row_slice(&[-1.0, 0.0])],
            &t,
        )
        .unwrap();
        let rows = canonical_rows(&s, &t);
        // Sign convention: leading coordinate positive; lexicographic order.
        assert_eq!(rows, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }
}
