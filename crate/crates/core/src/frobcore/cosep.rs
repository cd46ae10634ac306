//! Bicolinear retractions of the comultiplication.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::FrobeniusBundle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algcore::{check_nondegenerate, AlgebraData};
use crate::coalgcore::{check_coalgebra, CoalgebraData};
use crate::error::{Error, Result};
use crate::exactla::sparse::Accumulator;
use crate::exactla::{rank, solve, LinMap, LinearSystem, Scalar, Vector};
use crate::report::{CheckReport, Witness};

/// Rows of the homogeneous equations `(id⊗ν)(Δ⊗id) = Δν = (ν⊗id)(id⊗Δ)` on
/// the input `b_a ⊗ b_b`, with `ν[z; a, b]` at index `z n² + a n + b`.
fn bicolinear_rows(c: &CoalgebraData, a: usize, b: usize) -> Vec<Vec<(usize, Scalar)>> {
    let n = c.dim();
    let var = |z: usize, x: usize, y: usize| z * n * n + x * n + y;
    let mut delta_nu: BTreeMap<usize, Accumulator> = BTreeMap::new();
    for z in 0..n {
        for (row, coef) in c.basis_coproduct(z) {
            delta_nu.entry(*row).or_default().add(var(z, a, b), coef);
        }
    }
    let mut left: BTreeMap<usize, Accumulator> = BTreeMap::new();
    for (row, coef) in c.basis_coproduct(a) {
        let (first, y) = (row / n, row % n);
        for d in 0..n {
            left.entry(first * n + d).or_default().add(var(d, y, b), coef);
        }
    }
    let mut right: BTreeMap<usize, Accumulator> = BTreeMap::new();
    for (row, coef) in c.basis_coproduct(b) {
        let (x, d) = (row / n, row % n);
        for first in 0..n {
            right.entry(first * n + d).or_default().add(var(first, a, x), coef);
        }
    }
    let dn: BTreeMap<usize, Vec<(usize, Scalar)>> =
        delta_nu.into_iter().map(|(k, v)| (k, v.finish())).collect();
    let mut rows = Vec::new();
    for side in [left, right] {
        let mut side: BTreeMap<usize, Vec<(usize, Scalar)>> =
            side.into_iter().map(|(k, v)| (k, v.finish())).collect();
        for k in dn.keys() {
            side.entry(*k).or_default();
        }
        for (k, terms) in side {
            let mut acc = Accumulator::new();
            acc.add_scaled(&terms, &c.field().one());
            if let Some(d) = dn.get(&k) {
                acc.add_scaled(d, &-&c.field().one());
            }
            let row = acc.finish();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// Solves for a bicolinear retraction `ν: C ⊗ C -> C` of `Δ`. Returns `None`
/// when the system is inconsistent, i.e. `C` is not coseparable. Among the
/// solutions, the one orthogonal to the homogeneous solutions is tried first,
/// then the one with free variables zero, then seeded random ones; the first
/// giving a non-degenerate algebra is returned.
pub fn cosep_solve(c: &CoalgebraData) -> Result<Option<LinMap>> {
    let pre = check_coalgebra(c);
    if !pre.passed() {
        return Err(Error::refused(pre));
    }
    let n = c.dim();
    let f = c.field();
    let nn = n * n;
    let mut system = LinearSystem::new(f, n * nn);

    for i in 0..n {
        for z in 0..n {
            let coeffs: Vec<_> = c
                .basis_coproduct(i)
                .iter()
                .map(|(row, coef)| (z * nn + row, coef.clone()))
                .collect();
            let rhs = if z == i { f.one() } else { f.zero() };
            system.add_equation(&coeffs, &rhs);
        }
    }
    let blocks: Vec<_> = (0..nn)
        .into_par_iter()
        .map(|ab| bicolinear_rows(c, ab / n, ab % n))
        .collect();
    let zero = f.zero();
    for rows in blocks {
        for row in rows {
            system.add_equation(&row, &zero);
            if !system.is_consistent() {
                return Ok(None);
            }
        }
    }
    let Some(x0) = system.solution() else {
        return Ok(None);
    };
    let to_map = |x: &Vector| {
        LinMap::from_column_fn(f, n, nn, |ab| {
            (0..n).map(|z| (z, x.get(z * nn + ab).clone())).collect()
        })
    };
    let kernel = system.kernel_basis();
    if kernel.is_empty() {
        return Ok(Some(to_map(&x0)));
    }
    let mut candidates = Vec::new();
    if let Some(x) = least_norm(&x0, &kernel)? {
        candidates.push(x);
    }
    candidates.push(x0.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..RANDOM_CANDIDATES {
        let mut x = x0.clone();
        for k in &kernel {
            x = x.add(&k.scale(&f.from_i64(rng.gen_range(-2..=2))))?;
        }
        candidates.push(x);
    }
    let labels = c.labels().to_vec();
    let chosen = candidates
        .iter()
        .map(&to_map)
        .find(|nu| {
            AlgebraData::from_mul_map(f, labels.clone(), nu.clone())
                .map(|a| check_nondegenerate(&a).passed())
                .unwrap_or(false)
        });
    Ok(Some(chosen.unwrap_or_else(|| to_map(&candidates[0]))))
}

const RANDOM_CANDIDATES: usize = 16;

/// The solution `x0 - K y` orthogonal to the kernel `K`, when the Gram
/// matrix of `K` is invertible.
fn least_norm(x0: &Vector, kernel: &[Vector]) -> Result<Option<Vector>> {
    let f = x0.field();
    let d = kernel.len();
    let mut gram = Vec::with_capacity(d * d);
    for a in kernel {
        for b in kernel {
            gram.push(a.dot(b)?);
        }
    }
    let gram = LinMap::from_column_fn(f, d, d, |j| {
        (0..d).map(|i| (i, gram[i * d + j].clone())).collect()
    });
    if rank(&gram) < d {
        return Ok(None);
    }
    let rhs = kernel.iter().map(|k| k.dot(x0)).collect::<Result<Vec<_>>>()?;
    let Some(y) = solve(&gram, &Vector::new(f, rhs)?)? else {
        return Ok(None);
    };
    let mut x = x0.clone();
    for (k, c) in kernel.iter().zip(y.entries()) {
        x = x.sub(&k.scale(c))?;
    }
    Ok(Some(x))
}

/// Verifies `ν∘Δ = id` and `(id⊗ν)(Δ⊗id) = Δν = (ν⊗id)(id⊗Δ)`.
pub fn check_retraction(c: &CoalgebraData, nu: &LinMap) -> CheckReport {
    CheckReport::timed(|| {
        let n = c.dim();
        let f = c.field();
        if nu.field() != f || nu.codomain_dim() != n || nu.domain_dim() != n * n {
            return CheckReport::refused("retraction", "ν must be a map C⊗C -> C", None);
        }
        let id = LinMap::identity(f, n);
        let delta = c.comul();
        let nu_delta = nu.compose(delta).unwrap();
        if let Some(d) = id.first_difference(&nu_delta).unwrap() {
            return CheckReport::fail(
                "retraction",
                format!("ν∘Δ ≠ id at {}", c.labels()[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        let middle = delta.compose(nu).unwrap();
        let left = id
            .tensor(nu)
            .unwrap()
            .compose(&delta.tensor(&id).unwrap())
            .unwrap();
        let right = nu
            .tensor(&id)
            .unwrap()
            .compose(&id.tensor(delta).unwrap())
            .unwrap();
        for (what, side) in [("(id⊗ν)(Δ⊗id) ≠ Δν", &left), ("(ν⊗id)(id⊗Δ) ≠ Δν", &right)] {
            if let Some(d) = middle.first_difference(side).unwrap() {
                let (a, b) = (d.column / n, d.column % n);
                return CheckReport::fail(
                    "retraction",
                    format!("{what} at ({}, {})", c.labels()[a], c.labels()[b]),
                    Witness::new(vec![a, b], d.expected, d.actual),
                );
            }
        }
        CheckReport::pass("retraction")
    })
}

/// The bundle whose multiplication is the retraction `ν`.
pub fn build_from_cosep(c: &CoalgebraData, nu: &LinMap) -> Result<FrobeniusBundle> {
    let rep = check_retraction(c, nu);
    if !rep.passed() {
        return Err(Error::refused(rep));
    }
    let alg = AlgebraData::from_mul_map(c.field(), c.labels().to_vec(), nu.clone())?;
    FrobeniusBundle::new(alg, c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::check_firm_algebra;
    use crate::exactla::{FieldSpec, Vector};
    use crate::frobcore::tests::{dual2, g2q};
    use crate::frobcore::{check_frobenius, section_check};

    fn comatrix(f: FieldSpec, n: usize) -> CoalgebraData {
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.push((i * n + j, i * n + k, k * n + j, f.one()));
                }
            }
        }
        let labels = (0..n * n).map(|x| format!("e{}{}", x / n, x % n)).collect();
        let counit: Vec<i64> = (0..n * n).map(|x| (x / n == x % n) as i64).collect();
        CoalgebraData::new(f, labels, t, Vector::from_i64s(f, &counit)).unwrap()
    }

    #[test]
    fn grouplike_retraction_is_pointwise() {
        let b = g2q();
        let nu = cosep_solve(b.coalgebra()).unwrap().unwrap();
        assert_eq!(&nu, b.algebra().mul());
        let built = build_from_cosep(b.coalgebra(), &nu).unwrap();
        assert_eq!(built, b);
    }

    #[test]
    fn comatrix_is_coseparable() {
        for (f, n) in [
            (FieldSpec::Rationals, 2),
            (FieldSpec::Rationals, 3),
            (FieldSpec::prime(2).unwrap(), 2),
            (FieldSpec::prime(3).unwrap(), 2),
        ] {
            let c = comatrix(f, n);
            let nu = cosep_solve(&c).unwrap().expect("retraction");
            assert!(check_retraction(&c, &nu).passed());
            let b = build_from_cosep(&c, &nu).unwrap();
            assert!(check_frobenius(&b).passed());
            assert!(crate::algcore::check_nondegenerate(b.algebra()).passed(), "{f} n={n}");
            assert!(check_firm_algebra(b.algebra()).0.passed());
            assert!(section_check(&b, c.comul()).passed());
        }
    }

    #[test]
    fn dual2_is_not_coseparable() {
        assert_eq!(cosep_solve(dual2().coalgebra()).unwrap(), None);
    }

    #[test]
    fn zero_retraction_refused() {
        let c = g2q().coalgebra().clone();
        let err = build_from_cosep(&c, &LinMap::zeros(c.field(), 2, 4)).unwrap_err();
        assert!(err.report().unwrap().message.contains("ν∘Δ"));
    }
}
