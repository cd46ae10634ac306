//! Non-unital algebras given by structure constants.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactla::sparse::{Accumulator, SparseVec};
use crate::exactla::{
    kernel, quotient_by_span, rank, solve, FieldSpec, LinMap, LinearSystem, QuotientSpace, Scalar,
    Vector,
};
use crate::report::{CheckReport, Witness};

/// A finite-dimensional associative algebra, possibly without unit.
///
/// The multiplication is stored as the map `μ: R ⊗ R -> R`; column
/// `i * dim + j` holds `b_i · b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraData {
    field: FieldSpec,
    labels: Vec<String>,
    mul: LinMap,
}

pub(crate) fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidStructure(format!("duplicate basis label {l:?}")));
        }
    }
    Ok(())
}

impl AlgebraData {
    /// Builds an algebra from triples `(i, j, k, c)` meaning `b_i b_j ∋ c b_k`.
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        triples: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mul = LinMap::from_triples(
            field,
            n,
            n * n,
            triples.into_iter().map(|(i, j, k, c)| {
                // Out-of-range i or j is folded into an out-of-range column.
                let col = if i < n && j < n { i * n + j } else { n * n };
                (k, col, c)
            }),
        )?;
        Self::from_mul_map(field, labels, mul)
    }

    pub fn from_mul_map(field: FieldSpec, labels: Vec<String>, mul: LinMap) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        if mul.field() != field {
            return Err(Error::FieldMismatch(field, mul.field()));
        }
        if mul.codomain_dim() != n || mul.domain_dim() != n * n {
            return Err(Error::Dimension(format!(
                "multiplication must be {n}x{}, got {}x{}",
                n * n,
                mul.codomain_dim(),
                mul.domain_dim()
            )));
        }
        Ok(AlgebraData { field, labels, mul })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self) -> &LinMap {
        &self.mul
    }

    /// Structure constants `(i, j, k, c)` sorted by `(i, j, k)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out: Vec<_> = (0..n * n)
            .flat_map(|col| {
                self.mul
                    .column(col)
                    .iter()
                    .map(move |(k, c)| (col / n, col % n, *k, c.clone()))
            })
            .collect();
        out.sort_by_key(|(i, j, k, _)| (*i, *j, *k));
        out
    }

    /// `b_i · b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.mul.column(i * self.dim() + j)
    }

    pub fn product_sparse(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                acc.add_scaled(self.basis_product(*i, *j), &xy);
            }
        }
        acc.finish()
    }

    pub fn product(&self, a: &Vector, b: &Vector) -> Vector {
        Vector::from_sparse(
            self.field,
            self.dim(),
            &self.product_sparse(&a.to_sparse(), &b.to_sparse()),
        )
    }

    /// `s ↦ r · s`.
    pub fn left_multiplication(&self, r: &Vector) -> LinMap {
        let rs = r.to_sparse();
        LinMap::from_column_fn(self.field, self.dim(), self.dim(), |s| {
            self.product_sparse(&rs, &[(s, self.field.one())])
        })
    }

    /// `s ↦ s · r`.
    pub fn right_multiplication(&self, r: &Vector) -> LinMap {
        let rs = r.to_sparse();
        LinMap::from_column_fn(self.field, self.dim(), self.dim(), |s| {
            self.product_sparse(&[(s, self.field.one())], &rs)
        })
    }

    /// A two-sided unit, if one exists.
    pub fn unit(&self) -> Option<Vector> {
        let n = self.dim();
        let one = self.field.one();
        let zero = self.field.zero();
        let mut sys = LinearSystem::new(self.field, n);
        // u·b_i = b_i and b_i·u = b_i, coordinatewise.
        for i in 0..n {
            let mut left: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
            let mut right: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
            for u in 0..n {
                for (k, c) in self.basis_product(u, i) {
                    left[*k].push((u, c.clone()));
                }
                for (k, c) in self.basis_product(i, u) {
                    right[*k].push((u, c.clone()));
                }
            }
            for k in 0..n {
                let rhs = if k == i { &one } else { &zero };
                sys.add_equation(&left[k], rhs);
                sys.add_equation(&right[k], rhs);
            }
        }
        sys.solution()
    }

    /// Replaces the basis: `change` sends new basis vectors to old
    /// coordinates (columns are the new basis expressed in the old one).
    pub fn change_basis(&self, change: &LinMap, inverse: &LinMap) -> Result<AlgebraData> {
        let mul = inverse.compose(&self.mul)?.compose(&change.tensor(change)?)?;
        AlgebraData::from_mul_map(self.field, self.labels.clone(), mul)
    }
}

/// Checks `(b_i b_j) b_k = b_i (b_j b_k)` on all basis triples; the witness
/// is the lexicographically first violation.
pub fn check_associativity(r: &AlgebraData) -> CheckReport {
    CheckReport::timed(|| {
        let n = r.dim();
        let one = r.field.one();
        let violation = (0..n * n * n).into_par_iter().find_map_first(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let lhs = r.product_sparse(r.basis_product(i, j), &[(k, one.clone())]);
            let rhs = r.product_sparse(&[(i, one.clone())], r.basis_product(j, k));
            (lhs != rhs).then_some((i, j, k, lhs, rhs))
        });
        match violation {
            None => CheckReport::pass("associativity"),
            Some((i, j, k, lhs, rhs)) => CheckReport::fail(
                "associativity",
                format!(
                    "({}·{})·{} != {}·({}·{})",
                    r.labels[i], r.labels[j], r.labels[k], r.labels[i], r.labels[j], r.labels[k]
                ),
                Witness::new(
                    vec![i, j, k],
                    Vector::from_sparse(r.field, n, &lhs),
                    Vector::from_sparse(r.field, n, &rhs),
                ),
            ),
        }
    })
}

/// `r ↦ (s ↦ s·r)` flattened to `R -> R ⊗ R*` (row `s * n + k`).
pub fn left_annihilator_map(r: &AlgebraData) -> LinMap {
    let n = r.dim();
    LinMap::from_column_fn(r.field, n * n, n, |col| {
        (0..n)
            .flat_map(|s| {
                r.basis_product(s, col)
                    .iter()
                    .map(move |(k, c)| (s * n + k, c.clone()))
            })
            .collect()
    })
}

/// `r ↦ (s ↦ r·s)` flattened likewise.
pub fn right_annihilator_map(r: &AlgebraData) -> LinMap {
    let n = r.dim();
    LinMap::from_column_fn(r.field, n * n, n, |col| {
        (0..n)
            .flat_map(|s| {
                r.basis_product(col, s)
                    .iter()
                    .map(move |(k, c)| (s * n + k, c.clone()))
            })
            .collect()
    })
}

fn annihilator_witness(r: &AlgebraData, v: &Vector) -> Witness {
    let first = v.entries().iter().position(|x| !x.is_zero()).unwrap_or(0);
    Witness::new(vec![first], Vector::zeros(r.field, r.dim()), v.clone())
}

/// Passes iff no nonzero `r` has `s·r = 0` for all `s`, nor `r·s = 0` for all `s`.
pub fn check_nondegenerate(r: &AlgebraData) -> CheckReport {
    CheckReport::timed(|| {
        if let Some(v) = kernel(&left_annihilator_map(r)).first() {
            return CheckReport::fail(
                "nondegenerate",
                format!("{v} is annihilated by every element on the left"),
                annihilator_witness(r, v),
            );
        }
        if let Some(v) = kernel(&right_annihilator_map(r)).first() {
            return CheckReport::fail(
                "nondegenerate",
                format!("{v} is annihilated by every element on the right"),
                annihilator_witness(r, v),
            );
        }
        CheckReport::pass("nondegenerate")
    })
}

/// Reports whether `map` is a bijection, naming the first obstruction.
pub(crate) fn bijectivity_report(check: &str, what: &str, map: &LinMap) -> CheckReport {
    let field = map.field();
    let target = map.codomain_dim();
    if rank(map) < target {
        // First codomain basis vector outside the image.
        let missing = (0..target)
            .find(|&i| {
                solve(map, &Vector::basis(field, target, i))
                    .expect("same field")
                    .is_none()
            })
            .expect("rank deficit implies a missing basis vector");
        return CheckReport::fail(
            check,
            format!("{what} not surjective: basis vector {missing} not in the image"),
            Witness::new(
                vec![missing],
                Vector::basis(field, target, missing),
                Vector::zeros(field, target),
            ),
        );
    }
    if let Some(v) = kernel(map).first() {
        return CheckReport::fail(
            check,
            format!("{what} not injective: nonzero class {v} maps to zero"),
            Witness::new(vec![], Vector::zeros(field, target), map.apply(v).expect("dims")),
        );
    }
    CheckReport::pass(check)
}

/// `R ⊗_R R`: the quotient of `R ⊗ R` by `(b_i b_j) ⊗ b_k - b_i ⊗ (b_j b_k)`.
pub fn balanced_square(r: &AlgebraData) -> QuotientSpace {
    let n = r.dim();
    let field = r.field;
    let mut relations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = Accumulator::new();
                for (t, c) in r.basis_product(i, j) {
                    acc.add(t * n + k, c);
                }
                for (t, c) in r.basis_product(j, k) {
                    acc.add(i * n + t, &-c);
                }
                let rel = acc.finish();
                if !rel.is_empty() {
                    relations.push(Vector::from_sparse(field, n * n, &rel));
                }
            }
        }
    }
    quotient_by_span(field, n * n, relations).expect("consistent dimensions")
}

/// Firmness: `μ` induces a bijection `R ⊗_R R -> R`.
pub fn check_firm_algebra(r: &AlgebraData) -> (CheckReport, QuotientSpace) {
    let start = std::time::Instant::now();
    let q = balanced_square(r);
    let mut report = if let Some(rel) = q.relations.iter().find(|v| !r.mul.apply(v).unwrap().is_zero()) {
        CheckReport::refused(
            "firm-algebra",
            "multiplication does not vanish on the balancing relations (not associative)",
            Some(Witness::new(
                vec![],
                Vector::zeros(r.field, r.dim()),
                r.mul.apply(rel).unwrap(),
            )),
        )
    } else {
        let induced = r.mul.compose(&q.section).expect("dims");
        bijectivity_report("firm-algebra", "μ̄", &induced)
            .with_note(format!("dim R⊗_R R = {}", q.quotient_dim))
    };
    report.elapsed = start.elapsed();
    (report, q)
}

/// A candidate family of idempotents serving as local units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalUnitFamily {
    pub elements: Vec<Vector>,
    pub max_subset_size: usize,
}

impl LocalUnitFamily {
    pub fn new(elements: Vec<Vector>, max_subset_size: usize) -> Self {
        LocalUnitFamily {
            elements,
            max_subset_size: max_subset_size.max(1),
        }
    }
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Checks every member of `family` is idempotent, then that every subset of
/// `test_set` (default: the basis) of size at most `max_subset_size` is fixed
/// on both sides by some member. A pass certifies local units only up to that
/// subset size.
pub fn verify_local_units(
    r: &AlgebraData,
    family: &LocalUnitFamily,
    test_set: Option<&[Vector]>,
) -> CheckReport {
    CheckReport::timed(|| {
        let basis: Vec<Vector>;
        let tests = match test_set {
            Some(t) => t,
            None => {
                basis = (0..r.dim()).map(|i| Vector::basis(r.field, r.dim(), i)).collect();
                &basis
            }
        };
        for (idx, e) in family.elements.iter().enumerate() {
            let ee = r.product(e, e);
            if &ee != e {
                return CheckReport::fail(
                    "local-units",
                    format!("family member {idx} is not idempotent"),
                    Witness::new(vec![idx], e.clone(), ee),
                );
            }
        }
        // fixes[e][t]: e·t = t = t·e
        let fixes: Vec<Vec<bool>> = family
            .elements
            .par_iter()
            .map(|e| {
                tests
                    .iter()
                    .map(|t| &r.product(e, t) == t && &r.product(t, e) == t)
                    .collect()
            })
            .collect();
        let subsets = subsets_up_to(tests.len(), family.max_subset_size);
        let missing = subsets.par_iter().find_first(|s| {
            !fixes.iter().any(|row| s.iter().all(|&t| row[t]))
        });
        let bound = format!(
            "local units verified up to subset size {}",
            family.max_subset_size
        );
        match missing {
            None => CheckReport::pass("local-units").with_note(bound),
            Some(s) => {
                let t = &tests[s[0]];
                let actual = family
                    .elements
                    .first()
                    .map(|e| r.product(e, t))
                    .unwrap_or_else(|| Vector::zeros(r.field, r.dim()));
                CheckReport::fail(
                    "local-units",
                    format!("no family member fixes test subset {s:?}"),
                    Witness::new(s.clone(), t.clone(), actual),
                )
                .with_note(bound)
            }
        }
    })
}

/// If `family` fixes the whole basis with a single member, that member is a
/// global unit; returns it.
pub fn global_unit_from_local_units(r: &AlgebraData, family: &LocalUnitFamily) -> Option<Vector> {
    let basis: Vec<Vector> = (0..r.dim()).map(|i| Vector::basis(r.field, r.dim(), i)).collect();
    family.elements.iter().find_map(|e| {
        basis
            .iter()
            .all(|b| &r.product(e, b) == b && &r.product(b, e) == b)
            .then(|| e.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn nil() -> AlgebraData {
        AlgebraData::new(q(), labels(&["x"]), vec![]).unwrap()
    }

    fn g2() -> AlgebraData {
        AlgebraData::new(
            q(),
            labels(&["p0", "p1"]),
            vec![(0, 0, 0, q().one()), (1, 1, 1, q().one())],
        )
        .unwrap()
    }

    fn dual2() -> AlgebraData {
        // 1·1 = 1, 1·x = x·1 = x, x·x = 0
        AlgebraData::new(
            q(),
            labels(&["1", "x"]),
            vec![(0, 0, 0, q().one()), (0, 1, 1, q().one()), (1, 0, 1, q().one())],
        )
        .unwrap()
    }

    #[test]
    fn associative_examples_pass() {
        assert!(check_associativity(&g2()).passed());
        assert!(check_associativity(&dual2()).passed());
    }

    #[test]
    fn non_associative_reports_first_triple() {
        // a·a = b, a·b = a
        let r = AlgebraData::new(
            q(),
            labels(&["a", "b"]),
            vec![(0, 0, 1, q().one()), (0, 1, 0, q().one())],
        )
        .unwrap();
        let rep = check_associativity(&r);
        assert!(!rep.passed());
        let w = rep.witness.unwrap();
        // (a a) a = b a = 0 while a (a a) = a b = a: the first violation.
        assert_eq!(w.tuple, vec![0, 0, 0]);
        assert!(w.expected.is_zero());
        assert_eq!(w.actual, Vector::basis(q(), 2, 0));
        // (a a) b = 0 while a (a b) = b is also a violation.
        let ab = r.product(&r.product(&Vector::basis(q(), 2, 0), &Vector::basis(q(), 2, 0)), &Vector::basis(q(), 2, 1));
        let a_b = r.product(&Vector::basis(q(), 2, 0), &r.product(&Vector::basis(q(), 2, 0), &Vector::basis(q(), 2, 1)));
        assert!(ab.is_zero());
        assert_eq!(a_b, Vector::basis(q(), 2, 1));
    }

    #[test]
    fn nondegeneracy() {
        let rep = check_nondegenerate(&nil());
        assert!(!rep.passed());
        assert_eq!(rep.witness.unwrap().actual, Vector::basis(q(), 1, 0));
        assert!(check_nondegenerate(&g2()).passed());
        assert!(check_nondegenerate(&dual2()).passed());
        assert_eq!(kernel(&left_annihilator_map(&nil())).len(), 1);
    }

    #[test]
    fn firmness() {
        let (rep, quo) = check_firm_algebra(&g2());
        assert!(rep.passed());
        assert_eq!(quo.quotient_dim, 2);
        assert!(check_firm_algebra(&dual2()).0.passed());
        let (rep, quo) = check_firm_algebra(&nil());
        assert!(!rep.passed());
        assert_eq!(quo.quotient_dim, 1);
        assert!(quo.relations.is_empty());
        assert!(rep.message.contains("not surjective"));
    }

    #[test]
    fn unit_detection() {
        assert_eq!(g2().unit(), Some(Vector::from_i64s(q(), &[1, 1])));
        assert_eq!(dual2().unit(), Some(Vector::from_i64s(q(), &[1, 0])));
        assert_eq!(nil().unit(), None);
    }

    #[test]
    fn local_units() {
        let fam = LocalUnitFamily::new(
            vec![
                Vector::from_i64s(q(), &[1, 0]),
                Vector::from_i64s(q(), &[0, 1]),
                Vector::from_i64s(q(), &[1, 1]),
            ],
            2,
        );
        let rep = verify_local_units(&g2(), &fam, None);
        assert!(rep.passed(), "{rep}");
        assert!(rep.notes[0].contains("subset size 2"));

        let rep = verify_local_units(&nil(), &LocalUnitFamily::new(vec![], 2), None);
        assert!(!rep.passed());
        assert_eq!(rep.witness.unwrap().tuple, vec![0]);

        let bad = LocalUnitFamily::new(vec![Vector::from_i64s(q(), &[2, 0])], 1);
        let rep = verify_local_units(&g2(), &bad, None);
        assert!(!rep.passed());
        assert!(rep.message.contains("idempotent"));
    }

    #[test]
    fn singletons_alone_do_not_cover_pairs() {
        let fam = LocalUnitFamily::new(
            vec![Vector::from_i64s(q(), &[1, 0]), Vector::from_i64s(q(), &[0, 1])],
            2,
        );
        let rep = verify_local_units(&g2(), &fam, None);
        assert_eq!(rep.witness.unwrap().tuple, vec![0, 1]);
        assert_eq!(global_unit_from_local_units(&g2(), &fam), None);
    }
}
