use std::collections::HashMap;

use super::sparse::{sparse_get, sparse_sub_scaled, Accumulator, SparseVec};
use super::{FieldSpec, LinMap, Scalar, Vector};
use crate::error::{Error, Result};

/// Incrementally maintained reduced row echelon form.
///
/// Rows are inserted one at a time; each stored row has a leading 1 at its
/// pivot column and zeros at every other pivot column. The stored form is the
/// unique RREF of the row space, so pivots are always the lowest possible
/// column indices regardless of insertion order.
#[derive(Clone, Debug)]
pub struct Rref {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    row_of_pivot: HashMap<usize, usize>,
}

impl Rref {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Rref {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_pivot: HashMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored rows without inserting it.
    pub fn reduce(&self, row: &[(usize, Scalar)]) -> SparseVec {
        let hits: Vec<_> = row
            .iter()
            .filter_map(|(c, v)| self.row_of_pivot.get(c).map(|&r| (r, v)))
            .collect();
        if hits.is_empty() {
            return row.to_vec();
        }
        let mut acc = Accumulator::new();
        acc.add_scaled(row, &self.field.one());
        for (r, v) in hits {
            acc.add_scaled(&self.rows[r], &-v);
        }
        acc.finish()
    }

    /// Inserts a row; returns the new pivot column, or `None` when the row
    /// was already in the span.
    pub fn insert(&mut self, row: &[(usize, Scalar)]) -> Option<usize> {
        let mut reduced = self.reduce(row);
        let (pivot, lead) = reduced.first()?.clone();
        let inv = lead.inv().expect("nonzero lead");
        if !inv.is_one() {
            for (_, v) in reduced.iter_mut() {
                *v = &*v * &inv;
            }
        }
        for existing in self.rows.iter_mut() {
            if let Some(c) = sparse_get(existing, pivot).cloned() {
                *existing = sparse_sub_scaled(existing, &reduced, &c);
            }
        }
        self.row_of_pivot.insert(pivot, self.rows.len());
        self.rows.push(reduced);
        self.pivots.push(pivot);
        Some(pivot)
    }

    pub fn contains(&self, row: &[(usize, Scalar)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// Non-pivot columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|c| !self.row_of_pivot.contains_key(c))
            .collect()
    }

    pub fn row_for_pivot(&self, pivot: usize) -> Option<&[(usize, Scalar)]> {
        self.row_of_pivot.get(&pivot).map(|&r| self.rows[r].as_slice())
    }

    /// Basis of `{x : row · x = 0 for every stored row}`, one vector per free
    /// column, in increasing free-column order.
    pub fn null_space(&self) -> Vec<Vector> {
        let pivots = self.pivot_columns();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = Vector::zeros(self.field, self.ncols);
                v.set(f, self.field.one());
                for &p in &pivots {
                    let row = self.row_for_pivot(p).expect("pivot row");
                    if let Some(c) = sparse_get(row, f) {
                        v.set(p, -c);
                    }
                }
                v
            })
            .collect()
    }
}

/// An exact linear system `A x = b` assembled one equation at a time.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: FieldSpec,
    nvars: usize,
    rref: Rref,
    inconsistent: bool,
}

impl LinearSystem {
    pub fn new(field: FieldSpec, nvars: usize) -> Self {
        LinearSystem {
            field,
            nvars,
            rref: Rref::new(field, nvars + 1),
            inconsistent: false,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `Σ coeffs[i] x_i = rhs`. Coefficient indices must be below
    /// `nvars`; they may repeat and come in any order.
    pub fn add_equation(&mut self, coeffs: &[(usize, Scalar)], rhs: &Scalar) {
        if self.inconsistent {
            return;
        }
        let mut acc = Accumulator::new();
        for (i, v) in coeffs {
            debug_assert!(*i < self.nvars);
            acc.add(*i, v);
        }
        acc.add(self.nvars, rhs);
        let row = acc.finish();
        if row.is_empty() {
            return;
        }
        if self.rref.insert(&row) == Some(self.nvars) {
            self.inconsistent = true;
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    /// Dimension of the solution space of the homogeneous part.
    pub fn nullity(&self) -> usize {
        self.nvars - self.rref.rank()
    }

    /// Basis of the solutions of the homogeneous part, one vector per free
    /// variable.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let pivots = self.rref.pivot_columns();
        self.rref
            .free_columns()
            .into_iter()
            .filter(|&f| f < self.nvars)
            .map(|f| {
                let mut v = Vector::zeros(self.field, self.nvars);
                v.set(f, self.field.one());
                for &p in &pivots {
                    let row = self.rref.row_for_pivot(p).expect("pivot row");
                    if let Some(c) = sparse_get(row, f) {
                        v.set(p, -c);
                    }
                }
                v
            })
            .collect()
    }

    /// The solution with every free variable set to zero, or `None` if the
    /// system is inconsistent.
    pub fn solution(&self) -> Option<Vector> {
        if self.inconsistent {
            return None;
        }
        let mut x = Vector::zeros(self.field, self.nvars);
        for p in self.rref.pivot_columns() {
            let row = self.rref.row_for_pivot(p).expect("pivot row");
            if let Some(v) = sparse_get(row, self.nvars) {
                x.set(p, v.clone());
            }
        }
        Some(x)
    }
}

fn check_field(a: &LinMap, f: FieldSpec) -> Result<()> {
    if a.field() != f {
        return Err(Error::FieldMismatch(a.field(), f));
    }
    Ok(())
}

/// Solves `A x = b` exactly. Free variables are set to zero, so the answer
/// is determined by lowest-index-first pivoting.
pub fn solve(a: &LinMap, b: &Vector) -> Result<Option<Vector>> {
    check_field(a, b.field())?;
    if b.dim() != a.codomain_dim() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a map with codomain {}",
            b.dim(),
            a.codomain_dim()
        )));
    }
    let mut sys = LinearSystem::new(a.field(), a.domain_dim());
    for (i, row) in a.rows().into_iter().enumerate() {
        sys.add_equation(&row, b.get(i));
        if !sys.is_consistent() {
            return Ok(None);
        }
    }
    Ok(sys.solution())
}

/// Basis of `{x : A x = 0}`; empty iff `A` is injective.
pub fn kernel(a: &LinMap) -> Vec<Vector> {
    let mut rref = Rref::new(a.field(), a.domain_dim());
    for row in a.rows() {
        if !row.is_empty() {
            rref.insert(&row);
        }
    }
    rref.null_space()
}

pub fn rank(a: &LinMap) -> usize {
    let mut rref = Rref::new(a.field(), a.domain_dim());
    for row in a.rows() {
        if !row.is_empty() {
            rref.insert(&row);
        }
    }
    rref.rank()
}

/// Two-sided inverse of a square map, if it exists.
pub fn inverse(a: &LinMap) -> Option<LinMap> {
    let n = a.domain_dim();
    if a.codomain_dim() != n {
        return None;
    }
    // Row-reduce [A | I]; the right block of the final RREF is A⁻¹.
    let mut rref = Rref::new(a.field(), 2 * n);
    for (i, mut row) in a.rows().into_iter().enumerate() {
        row.push((n + i, a.field().one()));
        rref.insert(&row);
    }
    if rref.pivot_columns() != (0..n).collect::<Vec<_>>() {
        return None;
    }
    let triples = (0..n).flat_map(|p| {
        rref.row_for_pivot(p)
            .expect("pivot row")
            .iter()
            .filter(|(c, _)| *c >= n)
            .map(move |(c, v)| (p, c - n, v.clone()))
            .collect::<Vec<_>>()
    });
    Some(LinMap::from_triples(a.field(), n, n, triples).expect("in range"))
}
