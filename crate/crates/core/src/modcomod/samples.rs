//! Sample (co)modules and morphisms: one-dimensional ones found exactly,
//! larger ones built from direct sums and seeded random base changes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_firm_module, induced_action, ComoduleData, ModuleData, Samples, Structure};
use crate::algcore::AlgebraData;
use crate::coalgcore::{dual_convolution, CoalgebraData};
use crate::error::Result;
use crate::exactla::poly::{minimal_polynomial, roots};
use crate::exactla::sparse::Accumulator;
use crate::exactla::{inverse, FieldSpec, LinMap, Rref, Scalar, Vector};
use crate::frobcore::FrobeniusBundle;

/// All nonzero algebra maps `χ: R -> k`, as coordinate vectors
/// `(χ(b_0), …, χ(b_{n-1}))`.
///
/// `χ(b_i)` must be an eigenvalue of left multiplication by `b_i` with `χ`
/// a joint left eigenvector, so the search branches over the roots of each
/// minimal polynomial and prunes when the joint eigenspace becomes zero.
pub fn characters(r: &AlgebraData) -> Vec<Vector> {
    let n = r.dim();
    let f = r.field();
    let candidates: Vec<Vec<Scalar>> = (0..n)
        .map(|i| roots(&minimal_polynomial(&r.left_multiplication(&Vector::basis(f, n, i)))))
        .collect();
    let mut out = Vec::new();
    let mut assigned = Vec::with_capacity(n);
    search(r, &candidates, &Rref::new(f, n), &mut assigned, &mut out);
    out
}

fn search(
    r: &AlgebraData,
    candidates: &[Vec<Scalar>],
    constraints: &Rref,
    assigned: &mut Vec<Scalar>,
    out: &mut Vec<Vector>,
) {
    let n = r.dim();
    let i = assigned.len();
    if i == n {
        let x = Vector::new(r.field(), assigned.clone()).expect("field");
        if !x.is_zero() && is_character(r, &x) {
            out.push(x);
        }
        return;
    }
    for lambda in &candidates[i] {
        let mut next = constraints.clone();
        for j in 0..n {
            let mut acc = Accumulator::new();
            acc.add_scaled(r.basis_product(i, j), &r.field().one());
            acc.add(j, &-lambda);
            next.insert(&acc.finish());
        }
        if next.rank() == n {
            continue;
        }
        assigned.push(lambda.clone());
        search(r, candidates, &next, assigned, out);
        assigned.pop();
    }
}

fn is_character(r: &AlgebraData, x: &Vector) -> bool {
    let n = r.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let mut lhs = r.field().zero();
            for (k, c) in r.basis_product(i, j) {
                lhs.add_mul(c, x.get(*k));
            }
            lhs == x.get(i) * x.get(j)
        })
    })
}

/// All grouplike elements `g` (`Δg = g⊗g`, `ε(g) = 1`), found as the
/// characters of the convolution dual.
pub fn grouplikes(c: &CoalgebraData) -> Result<Vec<Vector>> {
    let dual = dual_convolution(c)?;
    Ok(characters(&dual))
}

/// The one-dimensional modules `v·r = χ(r) v` for nonzero characters `χ`.
pub fn one_dim_modules(b: &FrobeniusBundle) -> Vec<ModuleData> {
    characters(b.algebra())
        .into_iter()
        .map(|chi| {
            let action = LinMap::from_column_fn(b.field(), 1, b.dim(), |r| {
                let v = chi.get(r);
                if v.is_zero() {
                    vec![]
                } else {
                    vec![(0, v.clone())]
                }
            });
            ModuleData::new(1, action).expect("dims")
        })
        .collect()
}

/// The one-dimensional comodules `ρ(v) = v⊗g` for grouplike `g`.
pub fn one_dim_comodules(b: &FrobeniusBundle) -> Result<Vec<ComoduleData>> {
    Ok(grouplikes(b.coalgebra())?.iter().map(ComoduleData::line).collect())
}

/// Block-diagonal sum of comodules.
pub fn direct_sum(parts: &[ComoduleData], r_dim: usize, field: FieldSpec) -> ComoduleData {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        offsets.push(total);
        total += p.dim();
    }
    let mut columns = Vec::with_capacity(total);
    for (p, off) in parts.iter().zip(&offsets) {
        for v in 0..p.dim() {
            columns.push(
                p.coaction()
                    .column(v)
                    .iter()
                    .map(|(row, c)| ((off + row / r_dim) * r_dim + row % r_dim, c.clone()))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let coaction = LinMap::from_column_fn(field, total * r_dim, total, |v| columns[v].clone());
    ComoduleData::new(total, coaction).expect("dims")
}

/// A seeded random invertible matrix with small integer entries and its
/// inverse.
pub fn random_invertible(field: FieldSpec, dim: usize, rng: &mut impl Rng) -> (LinMap, LinMap) {
    loop {
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let p = LinMap::from_i64_rows(field, &rows);
        if let Some(inv) = inverse(&p) {
            return (p, inv);
        }
    }
}

fn random_map(field: FieldSpec, rows: usize, cols: usize, rng: &mut impl Rng) -> LinMap {
    if rows == 0 || cols == 0 {
        return LinMap::zeros(field, rows, cols);
    }
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-2..=2)).collect())
        .collect();
    LinMap::from_i64_rows(field, &data)
}

/// The building blocks for random comodules: the regular comodule and the
/// one-dimensional ones, restricted to dimension at most `max_dim`.
fn atoms(b: &FrobeniusBundle, max_dim: usize) -> Result<Vec<ComoduleData>> {
    let mut atoms = one_dim_comodules(b)?;
    if b.dim() <= max_dim {
        atoms.push(ComoduleData::regular(b));
    }
    Ok(atoms)
}

/// A random comodule of dimension at most `max_dim`: a direct sum of atoms
/// seen through a random change of basis.
pub fn random_comodule(
    b: &FrobeniusBundle,
    max_dim: usize,
    rng: &mut impl Rng,
) -> Result<Option<ComoduleData>> {
    let atoms = atoms(b, max_dim)?;
    if atoms.is_empty() {
        return Ok(None);
    }
    let mut parts = Vec::new();
    let mut dim = 0;
    loop {
        let fitting: Vec<&ComoduleData> = atoms.iter().filter(|a| dim + a.dim() <= max_dim).collect();
        let Some(a) = fitting.choose(rng) else { break };
        parts.push((*a).clone());
        dim += a.dim();
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if parts.is_empty() {
        return Ok(None);
    }
    let sum = direct_sum(&parts, b.dim(), b.field());
    let (p, p_inv) = random_invertible(b.field(), sum.dim(), rng);
    Ok(Some(sum.change_basis(&p, &p_inv, b.dim())?))
}

/// Regular, one-dimensional and `count` seeded random modules and comodules
/// (dimension at most `max_dim`). Modules that are not firm are left out.
pub fn standard_samples(b: &FrobeniusBundle, seed: u64, count: usize, max_dim: usize) -> Result<Samples> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comodules = vec![ComoduleData::regular(b)];
    comodules.extend(one_dim_comodules(b)?);
    let mut modules = vec![ModuleData::regular(b)];
    modules.extend(one_dim_modules(b));
    for _ in 0..count {
        if let Some(c) = random_comodule(b, max_dim, &mut rng)? {
            comodules.push(c);
        }
        if let Some(c) = random_comodule(b, max_dim, &mut rng)? {
            let m = induced_action(b, &c)?;
            let (p, p_inv) = random_invertible(b.field(), m.dim(), &mut rng);
            modules.push(m.change_basis(&p, &p_inv, b.dim())?);
        }
    }
    modules.retain(|m| check_firm_module(b, m).passed());
    Ok(Samples { modules, comodules })
}

/// A morphism candidate between two structures.
#[derive(Clone, Debug)]
pub struct MorphismSample {
    pub map: LinMap,
    pub src: Structure,
    pub dst: Structure,
}

/// `count` seeded morphism candidates drawn from `samples`: the first half
/// are genuine morphisms (identities, base-change isomorphisms, zero maps,
/// left multiplications on the regular module), the rest random maps.
pub fn sample_morphisms(b: &FrobeniusBundle, samples: &Samples, seed: u64, count: usize) -> Vec<MorphismSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = b.field();
    let mut structures: Vec<Structure> = samples.comodules.iter().cloned().map(Structure::Comodule).collect();
    structures.extend(samples.modules.iter().cloned().map(Structure::Module));
    if structures.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let src = structures.choose(&mut rng).expect("nonempty").clone();
        if k < count / 2 {
            match k % 4 {
                0 => out.push(MorphismSample {
                    map: LinMap::identity(f, src.dim()),
                    dst: src.clone(),
                    src,
                }),
                1 => {
                    let (p, p_inv) = random_invertible(f, src.dim(), &mut rng);
                    let dst = match &src {
                        Structure::Module(m) => Structure::Module(m.change_basis(&p, &p_inv, b.dim()).expect("dims")),
                        Structure::Comodule(c) => {
                            Structure::Comodule(c.change_basis(&p, &p_inv, b.dim()).expect("dims"))
                        }
                    };
                    out.push(MorphismSample { map: p_inv, src, dst });
                }
                2 => {
                    let dst = structures.choose(&mut rng).expect("nonempty").clone();
                    out.push(MorphismSample {
                        map: LinMap::zeros(f, dst.dim(), src.dim()),
                        src,
                        dst,
                    });
                }
                _ => {
                    let r = Vector::from_sparse(
                        f,
                        b.dim(),
                        random_map(f, b.dim(), 1, &mut rng).column(0),
                    );
                    let regular = Structure::Module(ModuleData::regular(b));
                    out.push(MorphismSample {
                        map: b.algebra().left_multiplication(&r),
                        src: regular.clone(),
                        dst: regular,
                    });
                }
            }
        } else {
            let dst = structures.choose(&mut rng).expect("nonempty").clone();
            out.push(MorphismSample {
                map: random_map(f, dst.dim(), src.dim(), &mut rng),
                src,
                dst,
            });
        }
    }
    out
}
