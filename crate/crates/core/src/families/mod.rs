//! Example generators: grouplike bundles, comatrix coalgebras, truncated
//! polynomials, graded smash products and the locally-finite integers.

mod locally_finite;
mod smash;

pub use locally_finite::{
    gen_grouplike_integers, rigidity_check, window_check, LabelKind, LocallyFiniteBundle,
};
pub use smash::{
    gen_graded_smash, graded_from_smash, random_graded_module, smash_from_graded, GradedAlgebraData,
    GradedModule, SmashProduct,
};

use crate::algcore::{AlgebraData, LocalUnitFamily};
use crate::coalgcore::CoalgebraData;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Vector};
use crate::frobcore::FrobeniusBundle;

pub const MAX_GROUP_ORDER: usize = 64;

/// A finite group given by its multiplication table; element `0` need not be
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Err(Error::InvalidStructure(format!("group table: {msg}")));
        if n == 0 || n > MAX_GROUP_ORDER {
            return bad(format!("order {n} outside 1..={MAX_GROUP_ORDER}"));
        }
        if let Some(row) = table.iter().position(|r| r.len() != n) {
            return bad(format!("row {row} has the wrong length"));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return bad("entry out of range".into());
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        else {
            return bad("no identity element".into());
        };
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == identity && table[h][g] == identity) {
                Some(h) => inverses.push(h),
                None => return bad(format!("element {g} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(GroupTable {
            table,
            identity,
            inverses,
        })
    }

    /// `ℤ/n` with identity `0`.
    pub fn cyclic(n: usize) -> Result<Self> {
        GroupTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Where the grouplike basis is indexed.
#[derive(Clone, Debug)]
pub enum IndexSet {
    Group(GroupTable),
    Integers,
}

#[derive(Clone, Debug)]
pub enum GrouplikeBundle {
    Finite(FrobeniusBundle),
    LocallyFinite(LocallyFiniteBundle),
}

/// `μ(p_g⊗p_h) = δ_gh p_g`, `Δ(p_g) = p_g⊗p_g`, `ε(p_g) = 1`.
pub fn gen_grouplike(index: &IndexSet, field: FieldSpec) -> GrouplikeBundle {
    match index {
        IndexSet::Group(g) => GrouplikeBundle::Finite(grouplike_bundle(g.order(), field)),
        IndexSet::Integers => GrouplikeBundle::LocallyFinite(gen_grouplike_integers(field)),
    }
}

/// The grouplike bundle on `order` points.
pub fn grouplike_bundle(order: usize, field: FieldSpec) -> FrobeniusBundle {
    let labels: Vec<String> = (0..order).map(|g| format!("p{g}")).collect();
    grouplike_with_labels(labels, field)
}

pub(crate) fn grouplike_with_labels(labels: Vec<String>, field: FieldSpec) -> FrobeniusBundle {
    let n = labels.len();
    let one = field.one();
    let alg = AlgebraData::new(field, labels.clone(), (0..n).map(|g| (g, g, g, one.clone())))
        .expect("valid grouplike algebra");
    let counit = Vector::new(field, vec![one.clone(); n]).expect("field");
    let coalg = CoalgebraData::new(field, labels, (0..n).map(|g| (g, g, g, one.clone())), counit)
        .expect("valid grouplike coalgebra");
    FrobeniusBundle::new(alg, coalg).expect("same basis")
}

/// Local units `Σ_{g∈F} p_g` over all nonempty `F` for small orders, and
/// over singletons plus the full set otherwise.
pub fn grouplike_local_units(order: usize, field: FieldSpec, max_subset: usize) -> LocalUnitFamily {
    LocalUnitFamily::new(subset_sums(order, field, |g| vec![g]), max_subset)
}

/// Sums of the vectors `part(g)` (sets of basis indices) over subsets of the
/// group, each as a 0/1 vector of dimension `Σ |part(g)|`.
pub(crate) fn subset_sums(
    order: usize,
    field: FieldSpec,
    part: impl Fn(usize) -> Vec<usize>,
) -> Vec<Vector> {
    let dim: usize = (0..order).map(|g| part(g).len()).sum();
    let make = |set: &[usize]| {
        let mut v = Vector::zeros(field, dim);
        for &g in set {
            for i in part(g) {
                v.set(i, field.one());
            }
        }
        v
    };
    if order <= 8 {
        (1u32..(1 << order))
            .map(|mask| {
                let set: Vec<usize> = (0..order).filter(|g| mask & (1 << g) != 0).collect();
                make(&set)
            })
            .collect()
    } else {
        let mut out: Vec<Vector> = (0..order).map(|g| make(&[g])).collect();
        out.push(make(&(0..order).collect::<Vec<_>>()));
        out
    }
}

/// The comatrix coalgebra: `Δ(e_ij) = Σ_k e_ik⊗e_kj`, `ε(e_ij) = δ_ij`.
pub fn gen_comatrix(n: usize, field: FieldSpec) -> Result<CoalgebraData> {
    if n == 0 {
        return Err(Error::InvalidStructure("comatrix size must be at least 1".into()));
    }
    let idx = |i: usize, j: usize| i * n + j;
    let labels = (0..n * n).map(|x| format!("e{}_{}", x / n, x % n)).collect();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                triples.push((idx(i, j), idx(i, k), idx(k, j), field.one()));
            }
        }
    }
    let counit: Vec<i64> = (0..n * n).map(|x| (x / n == x % n) as i64).collect();
    CoalgebraData::new(field, labels, triples, Vector::from_i64s(field, &counit))
}

/// `k[x]/(x²)` with `ε(1) = 0`, `ε(x) = 1`, `Δ(1) = 1⊗x + x⊗1`, `Δ(x) = x⊗x`.
pub fn gen_trunc_poly(field: FieldSpec) -> FrobeniusBundle {
    let one = field.one();
    let labels = vec!["1".to_string(), "x".to_string()];
    let alg = AlgebraData::new(
        field,
        labels.clone(),
        vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())],
    )
    .expect("valid algebra");
    let coalg = CoalgebraData::new(
        field,
        labels,
        vec![(0, 0, 1, one.clone()), (0, 1, 0, one.clone()), (1, 1, 1, one)],
        Vector::from_i64s(field, &[0, 1]),
    )
    .expect("valid coalgebra");
    FrobeniusBundle::new(alg, coalg).expect("same basis")
}

/// One-dimensional `x² = 0` with `Δ(x) = x⊗x`, `ε(x) = 1`: a coalgebra
/// satisfying the compatibility diagram on a degenerate, non-firm algebra.
pub fn gen_nil(field: FieldSpec) -> FrobeniusBundle {
    let labels = vec!["x".to_string()];
    let alg = AlgebraData::new(field, labels.clone(), Vec::new()).expect("valid algebra");
    let coalg = CoalgebraData::new(
        field,
        labels,
        vec![(0, 0, 0, field.one())],
        Vector::from_i64s(field, &[1]),
    )
    .expect("valid coalgebra");
    FrobeniusBundle::new(alg, coalg).expect("same basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{check_associativity, check_firm_algebra, check_nondegenerate, verify_local_units};
    use crate::coalgcore::check_coalgebra;
    use crate::frobcore::{check_frobenius, cosep_solve};

    #[test]
    fn group_table_validation() {
        assert!(GroupTable::cyclic(5).is_ok());
        assert!(GroupTable::new(vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(GroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::cyclic(65).is_err());
        let g = GroupTable::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inverse(0), 0);
    }

    #[test]
    fn trivial_group_is_base_field() {
        let b = grouplike_bundle(1, FieldSpec::Rationals);
        assert_eq!(b.algebra().unit(), Some(Vector::from_i64s(FieldSpec::Rationals, &[1])));
        assert!(check_frobenius(&b).passed());
    }

    #[test]
    fn grouplike_checks() {
        for f in [FieldSpec::Rationals, FieldSpec::prime(2).unwrap()] {
            let GrouplikeBundle::Finite(b) = gen_grouplike(&IndexSet::Group(GroupTable::cyclic(3).unwrap()), f)
            else {
                panic!("finite")
            };
            assert!(check_associativity(b.algebra()).passed());
            assert!(check_coalgebra(b.coalgebra()).passed());
            assert!(check_frobenius(&b).passed());
            assert!(check_nondegenerate(b.algebra()).passed());
            assert!(check_firm_algebra(b.algebra()).0.passed());
            let e = grouplike_local_units(3, f, 2);
            assert_eq!(e.elements.len(), 7);
            assert!(verify_local_units(b.algebra(), &e, None).passed());
        }
    }

    #[test]
    fn comatrix_and_trunc_poly() {
        let c = gen_comatrix(1, FieldSpec::Rationals).unwrap();
        assert!(check_coalgebra(&c).passed());
        assert!(gen_comatrix(0, FieldSpec::Rationals).is_err());
        let d = gen_trunc_poly(FieldSpec::Rationals);
        assert!(check_frobenius(&d).passed());
        assert_eq!(cosep_solve(d.coalgebra()).unwrap(), None);
    }

    #[test]
    fn nil_is_degenerate() {
        let b = gen_nil(FieldSpec::Rationals);
        assert!(check_frobenius(&b).passed());
        assert!(!check_nondegenerate(b.algebra()).passed());
        let (firm, _) = check_firm_algebra(b.algebra());
        assert!(firm.message.contains("μ̄ not surjective"), "{}", firm.message);
    }
}
