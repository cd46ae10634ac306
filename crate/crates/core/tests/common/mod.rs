#![allow(dead_code)]

use firmfrob::algcore::{AlgebraData, LocalUnitFamily};
use firmfrob::coalgcore::CoalgebraData;
use firmfrob::exactla::{FieldSpec, LinMap, Scalar, Vector};
use firmfrob::families::{gen_comatrix, gen_nil, gen_trunc_poly, grouplike_bundle, grouplike_local_units};
use firmfrob::frobcore::{build_from_cosep, cosep_solve, FrobeniusBundle};
use firmfrob::report::{CheckReport, Verdict};

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn fp(p: u32) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn g2q() -> FrobeniusBundle {
    grouplike_bundle(2, q())
}

pub fn dual2() -> FrobeniusBundle {
    gen_trunc_poly(q())
}

pub fn nil() -> FrobeniusBundle {
    gen_nil(q())
}

pub fn cosep_bundle(n: usize, f: FieldSpec) -> FrobeniusBundle {
    let c = gen_comatrix(n, f).unwrap();
    let nu = cosep_solve(&c).unwrap().expect("comatrix retraction");
    build_from_cosep(&c, &nu).unwrap()
}

pub fn mc2() -> FrobeniusBundle {
    cosep_bundle(2, q())
}

/// A local-unit family fixed from the unmutated fixture.
pub fn fixture_units(b: &FrobeniusBundle, max_subset: usize) -> LocalUnitFamily {
    let grouplike = b.labels().iter().enumerate().all(|(i, l)| *l == format!("p{i}"));
    if grouplike {
        grouplike_local_units(b.dim(), b.field(), max_subset)
    } else {
        LocalUnitFamily::new(vec![b.algebra().unit().expect("unital fixture")], max_subset)
    }
}

/// Klein four-group table on `{0, 1, 2, 3}` with `g·h = g xor h`.
pub fn klein_table() -> Vec<Vec<usize>> {
    (0..4).map(|g| (0..4).map(|h| g ^ h).collect()).collect()
}

/// `ε ⊗ id` applied to an element of `R ⊗ R` in row-major coordinates.
pub fn counit_first(eps: &Vector, t: &Vector) -> Vector {
    let n = eps.dim();
    let f = eps.field();
    let mut out = vec![f.zero(); n];
    for a in 0..n {
        for b in 0..n {
            let c = t.get(a * n + b);
            if !c.is_zero() {
                out[b].add_mul(eps.get(a), c);
            }
        }
    }
    Vector::new(f, out).unwrap()
}

/// `id ⊗ ε` applied to an element of `R ⊗ R`.
pub fn counit_second(eps: &Vector, t: &Vector) -> Vector {
    let n = eps.dim();
    let f = eps.field();
    let mut out = vec![f.zero(); n];
    for a in 0..n {
        for b in 0..n {
            let c = t.get(a * n + b);
            if !c.is_zero() {
                out[a].add_mul(eps.get(b), c);
            }
        }
    }
    Vector::new(f, out).unwrap()
}

/// Dense structure constants `mu[i][j][k]` read straight off the
/// multiplication map.
pub fn dense_mul(a: &AlgebraData) -> Vec<Vec<Vec<Scalar>>> {
    let n = a.dim();
    let m = a.mul();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| m.entry(k, i * n + j)).collect()).collect())
        .collect()
}

/// Dense `delta[i][j][k]`: coefficient of `b_j ⊗ b_k` in `Δ(b_i)`.
pub fn dense_comul(c: &CoalgebraData) -> Vec<Vec<Vec<Scalar>>> {
    let n = c.dim();
    let d = c.comul();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| d.entry(j * n + k, i)).collect()).collect())
        .collect()
}

pub fn dense_map(m: &LinMap) -> Vec<Vec<Scalar>> {
    (0..m.codomain_dim())
        .map(|r| (0..m.domain_dim()).map(|c| m.entry(r, c)).collect())
        .collect()
}

/// Some node of the tree failed and carries a witness.
pub fn has_witnessed_failure(r: &CheckReport) -> bool {
    (r.verdict == Verdict::Fail && r.witness.is_some()) || r.children.iter().any(has_witnessed_failure)
}

/// Which structure constant a mutation touches.
#[derive(Clone, Copy, Debug)]
pub enum Slot {
    Mul(usize, usize, usize),
    Comul(usize, usize, usize),
    Counit(usize),
}

/// Adds `delta` to a single structure constant of `b`.
pub fn mutate(b: &FrobeniusBundle, slot: Slot, delta: &Scalar) -> FrobeniusBundle {
    let f = b.field();
    let n = b.dim();
    let mut mu = dense_mul(b.algebra());
    let mut de = dense_comul(b.coalgebra());
    let mut eps = b.coalgebra().counit().clone();
    match slot {
        Slot::Mul(i, j, k) => mu[i][j][k] = &mu[i][j][k] + delta,
        Slot::Comul(i, j, k) => de[i][j][k] = &de[i][j][k] + delta,
        Slot::Counit(i) => eps.set(i, eps.get(i) + delta),
    }
    let triples = |t: &Vec<Vec<Vec<Scalar>>>| {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !t[i][j][k].is_zero() {
                        out.push((i, j, k, t[i][j][k].clone()));
                    }
                }
            }
        }
        out
    };
    let labels = b.labels().to_vec();
    let alg = AlgebraData::new(f, labels.clone(), triples(&mu)).unwrap();
    let coalg = CoalgebraData::new(f, labels, triples(&de), eps).unwrap();
    FrobeniusBundle::new(alg, coalg).unwrap()
}
