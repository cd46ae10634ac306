//! Casimir multipliers of `R ⊗ R` and the passage between them and
//! bilinear comultiplications.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{act_first_factor, act_second_factor, check_frobenius, square_product, FrobeniusBundle};
use crate::algcore::{check_firm_algebra, check_nondegenerate, AlgebraData};
use crate::coalgcore::{check_coassociativity, check_counit, CoalgebraData};
use crate::error::{Error, Result};
use crate::exactla::sparse::{Accumulator, SparseVec};
use crate::exactla::{LinMap, LinearSystem, Vector};
use crate::report::{CheckReport, Witness};

/// A multiplier of `R ⊗ R` given by its left and right actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierPair {
    /// `x ↦ e·x`.
    pub lambda: LinMap,
    /// `x ↦ x·e`.
    pub rho: LinMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `ρ(x)·y = x·λ(y)` for all basis elements `x, y` of `R ⊗ R`.
pub fn verify_multiplier_law(r: &AlgebraData, m: &MultiplierPair) -> CheckReport {
    CheckReport::timed(|| {
        let nn = r.dim() * r.dim();
        let f = r.field();
        for map in [&m.lambda, &m.rho] {
            if map.field() != f || map.domain_dim() != nn || map.codomain_dim() != nn {
                return CheckReport::refused(
                    "multiplier-law",
                    "λ and ρ must be endomorphisms of R⊗R",
                    None,
                );
            }
        }
        let one = f.one();
        let bad = (0..nn * nn).into_par_iter().find_map_first(|idx| {
            let (x, y) = (idx / nn, idx % nn);
            let lhs = square_product(r, m.rho.column(x), &[(y, one.clone())]);
            let rhs = square_product(r, &[(x, one.clone())], m.lambda.column(y));
            (lhs != rhs).then_some((x, y, lhs, rhs))
        });
        match bad {
            None => CheckReport::pass("multiplier-law"),
            Some((x, y, lhs, rhs)) => CheckReport::fail(
                "multiplier-law",
                "ρ(x)·y ≠ x·λ(y)",
                Witness::new(
                    vec![x, y],
                    Vector::from_sparse(f, nn, &rhs),
                    Vector::from_sparse(f, nn, &lhs),
                ),
            ),
        }
    })
}

/// The multiplier `e` with `λ(s⊗r) = Σ r₁s ⊗ r₂` and `ρ(s⊗r) = Σ s₁ ⊗ r s₂`.
pub fn casimir_from_delta(b: &FrobeniusBundle) -> Result<MultiplierPair> {
    let fr = check_frobenius(b);
    if !fr.passed() {
        return Err(Error::refused(fr));
    }
    let nd = check_nondegenerate(b.algebra());
    if !nd.passed() {
        return Err(Error::refused(nd));
    }
    let n = b.dim();
    let f = b.field();
    let alg = b.algebra();
    let coalg = b.coalgebra();
    let lambda = LinMap::from_column_fn(f, n * n, n * n, |col| {
        let (s, r) = (col / n, col % n);
        let mut acc = Accumulator::new();
        for (row, c) in coalg.basis_coproduct(r) {
            let (a, bb) = (row / n, row % n);
            for (p, cp) in alg.basis_product(a, s) {
                acc.add_product(p * n + bb, cp, c);
            }
        }
        acc.finish()
    });
    let rho = LinMap::from_column_fn(f, n * n, n * n, |col| {
        let (s, r) = (col / n, col % n);
        let mut acc = Accumulator::new();
        for (row, c) in coalg.basis_coproduct(s) {
            let (a, bb) = (row / n, row % n);
            for (q, cq) in alg.basis_product(r, bb) {
                acc.add_product(a * n + q, cq, c);
            }
        }
        acc.finish()
    });
    let m = MultiplierPair { lambda, rho };
    let law = verify_multiplier_law(alg, &m);
    if !law.passed() {
        return Err(Error::refused(law));
    }
    Ok(m)
}

/// Solves for the element `t = (b_r ⊗ 1)e` (side `Left`: `t·x = (b_r⊗1)·λ(x)`)
/// or `t = e(1 ⊗ b_r)` (side `Right`: `x·t = ρ(x)·(1⊗b_r)`), over all basis
/// `x` of `R ⊗ R`. Returns `None` when no such element exists.
pub fn multiplier_to_element(
    r: &AlgebraData,
    m: &MultiplierPair,
    index: usize,
    side: Side,
) -> Result<Option<Vector>> {
    let n = r.dim();
    let nn = n * n;
    let f = r.field();
    if index >= n {
        return Err(Error::Dimension(format!("basis index {index} out of range {n}")));
    }
    for map in [&m.lambda, &m.rho] {
        if map.field() != f {
            return Err(Error::FieldMismatch(f, map.field()));
        }
        if map.domain_dim() != nn || map.codomain_dim() != nn {
            return Err(Error::Dimension("multiplier maps must act on R⊗R".into()));
        }
    }
    let one = f.one();
    let unit_r = [(index, one.clone())];
    let blocks: Vec<(SparseVec, BTreeMap<usize, SparseVec>)> = (0..nn)
        .into_par_iter()
        .map(|u| {
            let basis_u = [(u, one.clone())];
            let rhs = match side {
                Side::Left => act_first_factor(r, &unit_r, m.lambda.column(u)),
                Side::Right => act_second_factor(r, m.rho.column(u), &unit_r),
            };
            let mut rows: BTreeMap<usize, Accumulator> = BTreeMap::new();
            for v in 0..nn {
                let basis_v = [(v, one.clone())];
                let prod = match side {
                    Side::Left => square_product(r, &basis_v, &basis_u),
                    Side::Right => square_product(r, &basis_u, &basis_v),
                };
                for (w, c) in prod {
                    rows.entry(w).or_default().add(v, &c);
                }
            }
            for (w, _) in &rhs {
                rows.entry(*w).or_default();
            }
            (rhs, rows.into_iter().map(|(w, a)| (w, a.finish())).collect())
        })
        .collect();
    let mut system = LinearSystem::new(f, nn);
    let zero = f.zero();
    for (rhs, rows) in blocks {
        for (w, coeffs) in rows {
            let value = rhs
                .iter()
                .find(|(i, _)| *i == w)
                .map(|(_, c)| c)
                .unwrap_or(&zero);
            system.add_equation(&coeffs, value);
        }
        if !system.is_consistent() {
            return Ok(None);
        }
    }
    if system.nullity() > 0 {
        return Err(Error::DegeneracyLeak(format!(
            "element for r = {} determined only up to a {}-dimensional space",
            r.labels()[index],
            system.nullity()
        )));
    }
    Ok(system.solution())
}

/// Rebuilds `Δ(b_i) = (b_i ⊗ 1)e` from a multiplier and checks that it agrees
/// with `e(1 ⊗ b_i)`, satisfies the counit laws with `ε`, is an `R`-bimodule
/// map and is coassociative.
pub fn delta_from_casimir(
    r: &AlgebraData,
    m: &MultiplierPair,
    counit: &Vector,
) -> Result<(CoalgebraData, CheckReport)> {
    let (firm, _) = check_firm_algebra(r);
    if !firm.passed() {
        return Err(Error::refused(firm));
    }
    let nd = check_nondegenerate(r);
    if !nd.passed() {
        return Err(Error::refused(nd));
    }
    let n = r.dim();
    let f = r.field();
    if counit.field() != f {
        return Err(Error::FieldMismatch(f, counit.field()));
    }
    if counit.dim() != n {
        return Err(Error::Dimension(format!("counit of length {} for dimension {n}", counit.dim())));
    }
    let start = std::time::Instant::now();
    let mut columns = Vec::with_capacity(n);
    let mut left_right = CheckReport::pass("casimir-left-right");
    for i in 0..n {
        let refuse = || {
            Error::refused(CheckReport::refused(
                "delta-from-casimir",
                format!("e not in the ideal R⊗R at r = {}", r.labels()[i]),
                None,
            ))
        };
        let left = multiplier_to_element(r, m, i, Side::Left)?.ok_or_else(refuse)?;
        let right = multiplier_to_element(r, m, i, Side::Right)?.ok_or_else(refuse)?;
        if left != right && left_right.passed() {
            left_right = CheckReport::fail(
                "casimir-left-right",
                format!("(r⊗1)e ≠ e(1⊗r) at r = {}", r.labels()[i]),
                Witness::new(vec![i], left.clone(), right),
            );
        }
        columns.push(left);
    }
    left_right.elapsed = start.elapsed();
    let comul = LinMap::from_columns(f, n * n, columns)?;
    let coalg = CoalgebraData::from_maps(f, r.labels().to_vec(), comul, counit.clone())?;
    let bundle = FrobeniusBundle::new(r.clone(), coalg.clone())?;
    let mut bilinear = check_frobenius(&bundle);
    bilinear.check = "bilinearity".into();
    let report = CheckReport::aggregate(
        "delta-from-casimir",
        vec![
            left_right,
            check_counit(&coalg),
            bilinear,
            check_coassociativity(&coalg),
        ],
    );
    Ok((coalg, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobcore::tests::{dual2, g2q};

    #[test]
    fn grouplike_casimir() {
        let b = g2q();
        let m = casimir_from_delta(&b).unwrap();
        // λ(p_g⊗p_h) = ρ(p_g⊗p_h) = δ_gh p_g⊗p_g
        let expected = LinMap::from_triples(
            b.field(),
            4,
            4,
            vec![(0, 0, b.field().one()), (3, 3, b.field().one())],
        )
        .unwrap();
        assert_eq!(m.lambda, expected);
        assert_eq!(m.rho, expected);
        for (i, side) in [(0, Side::Left), (1, Side::Right)] {
            let t = multiplier_to_element(b.algebra(), &m, i, side).unwrap().unwrap();
            assert_eq!(t, b.coalgebra().comul().column_vector(i));
        }
    }

    #[test]
    fn round_trips() {
        for b in [g2q(), dual2()] {
            let m = casimir_from_delta(&b).unwrap();
            assert!(verify_multiplier_law(b.algebra(), &m).passed());
            let (c, rep) = delta_from_casimir(b.algebra(), &m, b.coalgebra().counit()).unwrap();
            assert!(rep.passed(), "{rep}");
            assert_eq!(&c, b.coalgebra());
            let b2 = FrobeniusBundle::new(b.algebra().clone(), c).unwrap();
            assert_eq!(casimir_from_delta(&b2).unwrap(), m);
        }
    }

    #[test]
    fn zero_pair_gives_zero() {
        let b = dual2();
        let m = MultiplierPair {
            lambda: LinMap::zeros(b.field(), 4, 4),
            rho: LinMap::zeros(b.field(), 4, 4),
        };
        let t = multiplier_to_element(b.algebra(), &m, 1, Side::Left).unwrap().unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn zero_counit_fails() {
        let b = g2q();
        let m = casimir_from_delta(&b).unwrap();
        let (_, rep) = delta_from_casimir(b.algebra(), &m, &Vector::zeros(b.field(), 2)).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.find("counit").unwrap().verdict, crate::report::Verdict::Fail);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn zero_algebra_refused() {
        let b = g2q();
        let zero = AlgebraData::from_mul_map(b.field(), b.labels().to_vec(), LinMap::zeros(b.field(), 2, 4))
            .unwrap();
        let zb = FrobeniusBundle::new(zero, b.coalgebra().clone()).unwrap();
        assert!(matches!(casimir_from_delta(&zb), Err(Error::Refused(_))));
    }

    #[test]
    fn broken_law_is_reported() {
        let b = dual2();
        let mut m = casimir_from_delta(&b).unwrap();
        m.rho = m.rho.add(&LinMap::identity(b.field(), 4)).unwrap();
        let rep = verify_multiplier_law(b.algebra(), &m);
        assert!(!rep.passed());
        assert_eq!(rep.witness.unwrap().tuple.len(), 2);
    }
}
