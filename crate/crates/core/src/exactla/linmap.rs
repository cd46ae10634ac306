use super::sparse::{Accumulator, SparseVec};
use super::{FieldSpec, Scalar, Vector};
use crate::error::{Error, Result};

/// A linear map `k^domain -> k^codomain`, stored column by column as sparse
/// vectors. Column `j` is the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    field: FieldSpec,
    codomain: usize,
    columns: Vec<SparseVec>,
}

/// The first basis vector on which two maps disagree, with both images.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub column: usize,
    pub expected: Vector,
    pub actual: Vector,
}

impl LinMap {
    pub fn zeros(field: FieldSpec, codomain: usize, domain: usize) -> Self {
        LinMap {
            field,
            codomain,
            columns: vec![Vec::new(); domain],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        LinMap {
            field,
            codomain: n,
            columns: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    /// Builds a map from `(row, col, value)` triples. Duplicate positions and
    /// out-of-range indices are rejected; zero values are dropped.
    pub fn from_triples(
        field: FieldSpec,
        codomain: usize,
        domain: usize,
        triples: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); domain];
        for (r, c, v) in triples {
            if r >= codomain || c >= domain {
                return Err(Error::Dimension(format!(
                    "entry ({r}, {c}) outside a {codomain}x{domain} map"
                )));
            }
            if !field.contains(&v) {
                return Err(Error::FieldMismatch(field, v.field()));
            }
            columns[c].push((r, v));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
            if col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidStructure("duplicate matrix entry".into()));
            }
            col.retain(|(_, v)| !v.is_zero());
        }
        Ok(LinMap {
            field,
            codomain,
            columns,
        })
    }

    /// Builds a map whose `j`-th column is `column(j)`; the closure may
    /// return unsorted entries with repeats, which are summed.
    pub fn from_column_fn(
        field: FieldSpec,
        codomain: usize,
        domain: usize,
        mut column: impl FnMut(usize) -> SparseVec,
    ) -> Self {
        let columns = (0..domain)
            .map(|j| {
                let mut acc = Accumulator::new();
                for (i, v) in column(j) {
                    debug_assert!(i < codomain);
                    acc.add(i, &v);
                }
                acc.finish()
            })
            .collect();
        LinMap {
            field,
            codomain,
            columns,
        }
    }

    pub fn from_columns(field: FieldSpec, codomain: usize, columns: Vec<Vector>) -> Result<Self> {
        let mut cols = Vec::with_capacity(columns.len());
        for c in columns {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if c.dim() != codomain {
                return Err(Error::Dimension(format!(
                    "column of length {} in a map with codomain {codomain}",
                    c.dim()
                )));
            }
            cols.push(c.to_sparse());
        }
        Ok(LinMap {
            field,
            codomain,
            columns: cols,
        })
    }

    /// Builds a map from dense rows of small integers.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let domain = rows.first().map_or(0, Vec::len);
        let triples = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, v)| (r, c, field.from_i64(*v)))
        });
        Self::from_triples(field, rows.len(), domain, triples).expect("well-formed rows")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn domain_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.columns[j]
    }

    pub fn column_vector(&self, j: usize) -> Vector {
        Vector::from_sparse(self.field, self.codomain, &self.columns[j])
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        super::sparse::sparse_get(&self.columns[col], row)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero entries as `(row, col, value)`, sorted by row then column.
    pub fn triples(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.codomain == self.domain_dim()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    pub fn apply_sparse(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (j, xj) in x {
            acc.add_scaled(&self.columns[*j], xj);
        }
        acc.finish()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch(self.field, x.field()));
        }
        if x.dim() != self.domain_dim() {
            return Err(Error::Dimension(format!(
                "applying a map with domain {} to a vector of length {}",
                self.domain_dim(),
                x.dim()
            )));
        }
        Ok(Vector::from_sparse(
            self.field,
            self.codomain,
            &self.apply_sparse(&x.to_sparse()),
        ))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch(self.field, inner.field));
        }
        if inner.codomain != self.domain_dim() {
            return Err(Error::Dimension(format!(
                "composing {}x{} after {}x{}",
                self.codomain,
                self.domain_dim(),
                inner.codomain,
                inner.domain_dim()
            )));
        }
        Ok(LinMap {
            field: self.field,
            codomain: self.codomain,
            columns: inner.columns.iter().map(|c| self.apply_sparse(c)).collect(),
        })
    }

    /// Kronecker product: `(f ⊗ g)(x ⊗ y) = f(x) ⊗ g(y)` with index
    /// `(i, j) ↦ i * dim_g + j` on both sides.
    pub fn tensor(&self, other: &LinMap) -> Result<LinMap> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let (gc, gd) = (other.codomain, other.domain_dim());
        let mut columns = Vec::with_capacity(self.domain_dim() * gd);
        for fcol in &self.columns {
            for gcol in &other.columns {
                let mut col = Vec::with_capacity(fcol.len() * gcol.len());
                for (a, x) in fcol {
                    for (b, y) in gcol {
                        col.push((a * gc + b, x * y));
                    }
                }
                columns.push(col);
            }
        }
        Ok(LinMap {
            field: self.field,
            codomain: self.codomain * gc,
            columns,
        })
    }

    fn check_same_shape(&self, other: &LinMap) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.codomain != other.codomain || self.domain_dim() != other.domain_dim() {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.codomain,
                self.domain_dim(),
                other.codomain,
                other.domain_dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap> {
        self.check_same_shape(other)?;
        let one = self.field.one();
        Ok(LinMap {
            field: self.field,
            codomain: self.codomain,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| {
                    let mut acc = Accumulator::new();
                    acc.add_scaled(a, &one);
                    acc.add_scaled(b, &one);
                    acc.finish()
                })
                .collect(),
        })
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap> {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> LinMap {
        LinMap {
            field: self.field,
            codomain: self.codomain,
            columns: self
                .columns
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|(i, v)| (*i, v * s))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn transpose(&self) -> LinMap {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.codomain];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        LinMap {
            field: self.field,
            codomain: self.domain_dim(),
            columns,
        }
    }

    /// Rows as sparse vectors indexed by column.
    pub fn rows(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    /// The first basis vector (in index order) whose images under `self` and
    /// `other` differ; `self` is reported as the expected side.
    pub fn first_difference(&self, other: &LinMap) -> Result<Option<Discrepancy>> {
        self.check_same_shape(other)?;
        Ok(self
            .columns
            .iter()
            .zip(&other.columns)
            .position(|(a, b)| a != b)
            .map(|j| Discrepancy {
                column: j,
                expected: self.column_vector(j),
                actual: other.column_vector(j),
            }))
    }

    /// The swap `k^m ⊗ k^n -> k^n ⊗ k^m`.
    pub fn swap(field: FieldSpec, m: usize, n: usize) -> LinMap {
        LinMap {
            field,
            codomain: m * n,
            columns: (0..m * n)
                .map(|idx| vec![((idx % n) * m + idx / n, field.one())])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_identities() {
        let q = FieldSpec::Rationals;
        let t = LinMap::identity(q, 2).tensor(&LinMap::identity(q, 3)).unwrap();
        assert_eq!(t, LinMap::identity(q, 6));
    }

    #[test]
    fn tensor_with_zero() {
        let q = FieldSpec::Rationals;
        let f = LinMap::from_i64_rows(q, &[vec![1, 2], vec![3, 4]]);
        let t = f.tensor(&LinMap::zeros(q, 2, 3)).unwrap();
        assert!(t.is_zero());
        assert_eq!((t.codomain_dim(), t.domain_dim()), (4, 6));
    }

    #[test]
    fn tensor_index_convention() {
        let q = FieldSpec::Rationals;
        let f = LinMap::from_i64_rows(q, &[vec![1, 2], vec![3, 4]]);
        let g = LinMap::from_i64_rows(q, &[vec![0, 1, 0], vec![5, 0, 7]]);
        let x = Vector::from_i64s(q, &[1, -1]);
        let y = Vector::from_i64s(q, &[2, 0, 3]);
        let lhs = f.tensor(&g).unwrap().apply(&x.tensor(&y).unwrap()).unwrap();
        let rhs = f.apply(&x).unwrap().tensor(&g.apply(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_exchanges_factors() {
        let q = FieldSpec::Rationals;
        let x = Vector::from_i64s(q, &[1, 2]);
        let y = Vector::from_i64s(q, &[3, 4, 5]);
        let s = LinMap::swap(q, 2, 3);
        assert_eq!(
            s.apply(&x.tensor(&y).unwrap()).unwrap(),
            y.tensor(&x).unwrap()
        );
    }

    #[test]
    fn duplicate_triples_rejected() {
        let q = FieldSpec::Rationals;
        let r = LinMap::from_triples(q, 2, 2, vec![(0, 0, q.one()), (0, 0, q.one())]);
        assert!(r.is_err());
        let r = LinMap::from_triples(q, 2, 2, vec![(2, 0, q.one())]);
        assert!(r.is_err());
    }

    #[test]
    fn compose_checks_dimensions() {
        let q = FieldSpec::Rationals;
        let a = LinMap::identity(q, 2);
        let b = LinMap::identity(q, 3);
        assert!(a.compose(&b).is_err());
        let c = LinMap::identity(FieldSpec::Prime(3), 2);
        assert!(matches!(a.compose(&c), Err(Error::FieldMismatch(..))));
    }
}
