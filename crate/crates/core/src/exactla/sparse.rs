use std::collections::BTreeMap;

use super::Scalar;

/// Sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Collects sparse linear combinations and emits them in sorted order with
/// cancelled terms dropped.
#[derive(Default)]
pub struct Accumulator {
    terms: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: usize, value: &Scalar) {
        if value.is_zero() {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(slot) => *slot += value,
            None => {
                self.terms.insert(index, value.clone());
            }
        }
    }

    /// Adds `a * b` at `index`.
    pub fn add_product(&mut self, index: usize, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(slot) => slot.add_mul(a, b),
            None => {
                self.terms.insert(index, a * b);
            }
        }
    }

    /// Adds `scale * v`.
    pub fn add_scaled(&mut self, v: &[(usize, Scalar)], scale: &Scalar) {
        if scale.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add_product(*i, x, scale);
        }
    }

    pub fn finish(self) -> SparseVec {
        self.terms.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Value at `index` of a sorted sparse vector.
pub fn sparse_get(v: &[(usize, Scalar)], index: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&index, |(i, _)| *i).ok().map(|k| &v[k].1)
}

/// `a - scale * b` by a linear merge.
pub fn sparse_sub_scaled(a: &[(usize, Scalar)], b: &[(usize, Scalar)], scale: &Scalar) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(&b[j].1 * scale)));
            j += 1;
        } else {
            let v = &a[i].1 - &(&b[j].1 * scale);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
