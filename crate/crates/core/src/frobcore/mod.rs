//! Frobenius bundles: an algebra and a coalgebra on one space, the
//! compatibility between them, coseparable coalgebras, and Casimir
//! multipliers.

mod casimir;
mod cosep;

pub use casimir::{
    casimir_from_delta, delta_from_casimir, multiplier_to_element, verify_multiplier_law,
    MultiplierPair, Side,
};
pub use cosep::{build_from_cosep, check_retraction, cosep_solve};

use rayon::prelude::*;

use crate::algcore::{check_associativity, AlgebraData};
use crate::coalgcore::{check_coalgebra, CoalgebraData};
use crate::error::{Error, Result};
use crate::exactla::sparse::{Accumulator, SparseVec};
use crate::exactla::{FieldSpec, LinMap, Scalar, Vector};
use crate::report::{CheckReport, Witness};

/// An algebra and a coalgebra sharing a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusBundle {
    algebra: AlgebraData,
    coalgebra: CoalgebraData,
}

impl FrobeniusBundle {
    pub fn new(algebra: AlgebraData, coalgebra: CoalgebraData) -> Result<Self> {
        if algebra.field() != coalgebra.field() {
            return Err(Error::FieldMismatch(algebra.field(), coalgebra.field()));
        }
        if algebra.labels() != coalgebra.labels() {
            return Err(Error::InvalidStructure(
                "algebra and coalgebra bases differ".into(),
            ));
        }
        Ok(FrobeniusBundle { algebra, coalgebra })
    }

    pub fn algebra(&self) -> &AlgebraData {
        &self.algebra
    }

    pub fn coalgebra(&self) -> &CoalgebraData {
        &self.coalgebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    /// Transports the structure along an invertible map whose columns are the
    /// new basis in old coordinates.
    pub fn change_basis(&self, change: &LinMap, inverse: &LinMap) -> Result<FrobeniusBundle> {
        let algebra = self.algebra.change_basis(change, inverse)?;
        let comul = inverse
            .tensor(inverse)?
            .compose(self.coalgebra.comul())?
            .compose(change)?;
        let counit = self.coalgebra.counit_map().compose(change)?.column_vector_row();
        let coalgebra =
            CoalgebraData::from_maps(self.field(), self.labels().to_vec(), comul, counit)?;
        FrobeniusBundle::new(algebra, coalgebra)
    }
}

trait RowVector {
    fn column_vector_row(&self) -> Vector;
}

impl RowVector for LinMap {
    /// The single row of a `1 x n` map as a vector.
    fn column_vector_row(&self) -> Vector {
        let n = self.domain_dim();
        let entries = (0..n).map(|j| self.entry(0, j)).collect();
        Vector::new(self.field(), entries).expect("same field")
    }
}

/// Associativity of `μ` plus coassociativity and counit laws of `(Δ, ε)`.
pub fn check_prerequisites(b: &FrobeniusBundle) -> CheckReport {
    CheckReport::aggregate(
        "prerequisites",
        vec![check_associativity(&b.algebra), check_coalgebra(&b.coalgebra)],
    )
}

/// The three composites `R ⊗ R -> R ⊗ R` of the compatibility condition:
/// `(μ⊗id)(id⊗Δ)`, `Δμ`, `(id⊗μ)(Δ⊗id)`.
pub fn frobenius_composites(b: &FrobeniusBundle) -> (LinMap, LinMap, LinMap) {
    let id = LinMap::identity(b.field(), b.dim());
    let mu = b.algebra.mul();
    let delta = b.coalgebra.comul();
    let left = mu
        .tensor(&id)
        .unwrap()
        .compose(&id.tensor(delta).unwrap())
        .unwrap();
    let middle = delta.compose(mu).unwrap();
    let right = id
        .tensor(mu)
        .unwrap()
        .compose(&delta.tensor(&id).unwrap())
        .unwrap();
    (left, middle, right)
}

/// `(μ⊗id)∘(id⊗Δ) = Δ∘μ = (id⊗μ)∘(Δ⊗id)`, both equalities exact. The witness
/// is the first basis pair at which either equality fails.
pub fn check_frobenius(b: &FrobeniusBundle) -> CheckReport {
    CheckReport::timed(|| {
        let n = b.dim();
        let (left, middle, right) = frobenius_composites(b);
        let bad = (0..n * n).find_map(|col| {
            if left.column(col) != middle.column(col) {
                Some((col, "(μ⊗id)(id⊗Δ) ≠ Δμ", left.column_vector(col)))
            } else if right.column(col) != middle.column(col) {
                Some((col, "(id⊗μ)(Δ⊗id) ≠ Δμ", right.column_vector(col)))
            } else {
                None
            }
        });
        match bad {
            None => CheckReport::pass("frobenius"),
            Some((col, what, actual)) => {
                let (i, j) = (col / n, col % n);
                CheckReport::fail(
                    "frobenius",
                    format!("{what} at ({}, {})", b.labels()[i], b.labels()[j]),
                    Witness::new(vec![i, j], middle.column_vector(col), actual),
                )
            }
        }
    })
}

/// Product in the algebra `R ⊗ R`: `(a⊗b)(c⊗d) = ac ⊗ bd`.
pub fn square_product(alg: &AlgebraData, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let n = alg.dim();
    let mut acc = Accumulator::new();
    for (u, xu) in x {
        let (a, b) = (u / n, u % n);
        for (v, yv) in y {
            let (c, d) = (v / n, v % n);
            let coef = xu * yv;
            let ac = alg.basis_product(a, c);
            let bd = alg.basis_product(b, d);
            for (p, cp) in ac {
                let t = cp * &coef;
                for (q, cq) in bd {
                    acc.add_product(p * n + q, &t, cq);
                }
            }
        }
    }
    acc.finish()
}

/// `(r ⊗ 1)·x`: left multiplication on the first tensor factor.
pub fn act_first_factor(alg: &AlgebraData, r: &[(usize, Scalar)], x: &[(usize, Scalar)]) -> SparseVec {
    let n = alg.dim();
    let mut acc = Accumulator::new();
    for (u, xu) in x {
        let (a, b) = (u / n, u % n);
        for (ri, rc) in r {
            let coef = xu * rc;
            for (p, cp) in alg.basis_product(*ri, a) {
                acc.add_product(p * n + b, cp, &coef);
            }
        }
    }
    acc.finish()
}

/// `x·(1 ⊗ r)`: right multiplication on the second tensor factor.
pub fn act_second_factor(alg: &AlgebraData, x: &[(usize, Scalar)], r: &[(usize, Scalar)]) -> SparseVec {
    let n = alg.dim();
    let mut acc = Accumulator::new();
    for (u, xu) in x {
        let (a, b) = (u / n, u % n);
        for (ri, rc) in r {
            let coef = xu * rc;
            for (q, cq) in alg.basis_product(b, *ri) {
                acc.add_product(a * n + q, cq, &coef);
            }
        }
    }
    acc.finish()
}

/// Checks that `n: R -> R⊗R` is a right inverse of `μ` satisfying
/// `n(b_i b_j) = (b_i ⊗ 1)·n(b_j)` on every basis pair.
pub fn section_check(b: &FrobeniusBundle, section: &LinMap) -> CheckReport {
    CheckReport::timed(|| {
        let dim = b.dim();
        let f = b.field();
        if section.field() != f || section.domain_dim() != dim || section.codomain_dim() != dim * dim
        {
            return CheckReport::refused("section", "section must be a map R -> R⊗R", None);
        }
        let alg = &b.algebra;
        let mu_n = alg.mul().compose(section).unwrap();
        if let Some(d) = LinMap::identity(f, dim).first_difference(&mu_n).unwrap() {
            return CheckReport::fail(
                "section",
                format!("μ∘n ≠ id at {}", b.labels()[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        let one = f.one();
        let bad = (0..dim * dim).into_par_iter().find_map_first(|idx| {
            let (i, j) = (idx / dim, idx % dim);
            let lhs = section.apply_sparse(alg.basis_product(i, j));
            let rhs = act_first_factor(alg, &[(i, one.clone())], section.column(j));
            (lhs != rhs).then_some((i, j, lhs, rhs))
        });
        match bad {
            None => CheckReport::pass("section"),
            Some((i, j, lhs, rhs)) => CheckReport::fail(
                "section",
                format!(
                    "n({}·{}) ≠ ({}⊗1)·n({})",
                    b.labels()[i],
                    b.labels()[j],
                    b.labels()[i],
                    b.labels()[j]
                ),
                Witness::new(
                    vec![i, j],
                    Vector::from_sparse(f, dim * dim, &rhs),
                    Vector::from_sparse(f, dim * dim, &lhs),
                ),
            ),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::inverse;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn g2q() -> FrobeniusBundle {
        let one = q().one();
        let alg = AlgebraData::new(
            q(),
            labels(&["p0", "p1"]),
            vec![(0, 0, 0, one.clone()), (1, 1, 1, one.clone())],
        )
        .unwrap();
        let coalg = CoalgebraData::new(
            q(),
            labels(&["p0", "p1"]),
            vec![(0, 0, 0, one.clone()), (1, 1, 1, one)],
            Vector::from_i64s(q(), &[1, 1]),
        )
        .unwrap();
        FrobeniusBundle::new(alg, coalg).unwrap()
    }

    pub(crate) fn dual2() -> FrobeniusBundle {
        let one = q().one();
        let alg = AlgebraData::new(
            q(),
            labels(&["1", "x"]),
            vec![(0, 0, 0, one.clone()), (0, 1, 1, one.clone()), (1, 0, 1, one.clone())],
        )
        .unwrap();
        let coalg = CoalgebraData::new(
            q(),
            labels(&["1", "x"]),
            vec![(0, 0, 1, one.clone()), (0, 1, 0, one.clone()), (1, 1, 1, one)],
            Vector::from_i64s(q(), &[0, 1]),
        )
        .unwrap();
        FrobeniusBundle::new(alg, coalg).unwrap()
    }

    #[test]
    fn frobenius_examples() {
        assert!(check_frobenius(&g2q()).passed());
        assert!(check_frobenius(&dual2()).passed());
        // All three composites send p_g⊗p_h to δ_gh p_g⊗p_g.
        let (l, m, r) = frobenius_composites(&g2q());
        assert_eq!(l, m);
        assert_eq!(m, r);
        assert_eq!(m.column(0), &[(0, q().one())]);
        assert!(m.column(1).is_empty());
    }

    #[test]
    fn broken_comultiplication_is_detected() {
        let b = g2q();
        let one = q().one();
        let coalg = CoalgebraData::new(
            q(),
            labels(&["p0", "p1"]),
            vec![(0, 0, 1, one.clone()), (1, 1, 1, one)],
            Vector::from_i64s(q(), &[1, 1]),
        )
        .unwrap();
        let broken = FrobeniusBundle::new(b.algebra().clone(), coalg).unwrap();
        let rep = check_frobenius(&broken);
        assert!(!rep.passed());
        assert_eq!(rep.witness.as_ref().unwrap().tuple, vec![0, 0]);
        // At (p0, p1) the composite (id⊗μ)(Δ⊗id) gives p0⊗p1 while Δμ gives 0.
        let (_, m, r) = frobenius_composites(&broken);
        assert!(m.column(1).is_empty());
        assert_eq!(r.column(1), &[(1, q().one())]);
    }

    #[test]
    fn verdict_invariant_under_base_change() {
        let p = LinMap::from_i64_rows(q(), &[vec![2, 1], vec![1, 1]]);
        let pinv = inverse(&p).unwrap();
        for b in [g2q(), dual2()] {
            let c = b.change_basis(&p, &pinv).unwrap();
            assert!(check_frobenius(&c).passed());
            assert!(check_prerequisites(&c).passed());
            assert_ne!(c, b);
        }
    }

    #[test]
    fn section_examples() {
        let b = g2q();
        assert!(section_check(&b, b.coalgebra().comul()).passed());
        let rep = section_check(&b, &LinMap::zeros(q(), 4, 2));
        assert!(!rep.passed());
        assert!(rep.message.contains("μ∘n"));
    }

    #[test]
    fn square_product_basics() {
        let b = g2q();
        let alg = b.algebra();
        let one = q().one();
        // (p0⊗p1)(p0⊗p1) = p0⊗p1, (p0⊗p1)(p1⊗p1) = 0
        let x = vec![(1, one.clone())];
        assert_eq!(square_product(alg, &x, &x), x);
        assert!(square_product(alg, &x, &[(3, one.clone())]).is_empty());
        assert_eq!(act_first_factor(alg, &[(0, one.clone())], &x), x);
        assert!(act_second_factor(alg, &x, &[(0, one)]).is_empty());
    }
}
