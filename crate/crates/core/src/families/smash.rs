//! Group-graded unital algebras, their smash products with the function
//! algebra of the group, and the passage between graded modules and firm
//! modules over the smash product.

use rand::Rng;

use super::GroupTable;
use crate::algcore::{AlgebraData, LocalUnitFamily};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, LinMap, Vector};
use crate::modcomod::samples::random_invertible;
use crate::modcomod::{check_firm_module_over, check_module_over, ModuleData};

/// A unital algebra with a homogeneous basis: `grading[i]` is the degree of
/// `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebraData {
    algebra: AlgebraData,
    group: GroupTable,
    grading: Vec<usize>,
    unit: Vector,
}

impl GradedAlgebraData {
    pub fn new(algebra: AlgebraData, group: GroupTable, grading: Vec<usize>) -> Result<Self> {
        let n = algebra.dim();
        if grading.len() != n || grading.iter().any(|&g| g >= group.order()) {
            return Err(Error::InvalidStructure("grading must assign a group element to each basis vector".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let deg = group.mul(grading[i], grading[j]);
                if let Some((k, _)) = algebra.basis_product(i, j).iter().find(|(k, _)| grading[*k] != deg) {
                    return Err(Error::InvalidStructure(format!(
                        "grading violated: {}·{} has a component on {} outside degree {deg}",
                        algebra.labels()[i],
                        algebra.labels()[j],
                        algebra.labels()[*k]
                    )));
                }
            }
        }
        let unit = algebra
            .unit()
            .ok_or_else(|| Error::InvalidStructure("graded algebra must be unital".into()))?;
        if unit.to_sparse().iter().any(|(i, _)| grading[*i] != group.identity()) {
            return Err(Error::InvalidStructure("unit is not in the neutral degree".into()));
        }
        Ok(GradedAlgebraData {
            algebra,
            group,
            grading,
            unit,
        })
    }

    /// The group algebra `k[G]` graded by `G`.
    pub fn group_algebra(group: GroupTable, field: FieldSpec) -> Result<Self> {
        let n = group.order();
        let labels = (0..n).map(|g| format!("u{g}")).collect();
        let triples: Vec<_> = (0..n)
            .flat_map(|g| (0..n).map(move |h| (g, h)))
            .map(|(g, h)| (g, h, group.mul(g, h), field.one()))
            .collect();
        let algebra = AlgebraData::new(field, labels, triples)?;
        GradedAlgebraData::new(algebra, group, (0..n).collect())
    }

    pub fn algebra(&self) -> &AlgebraData {
        &self.algebra
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }
}

/// The smash product `A # k^G` on the basis `a_i ⊗ p_g` (index `i·|G| + g`)
/// with its family of local units `Σ_{g∈F} 1⊗p_g`.
#[derive(Clone, Debug)]
pub struct SmashProduct {
    pub graded: GradedAlgebraData,
    pub algebra: AlgebraData,
    pub local_units: LocalUnitFamily,
}

impl SmashProduct {
    fn index(&self, i: usize, g: usize) -> usize {
        i * self.graded.group.order() + g
    }

    /// `1 ⊗ p_g` in smash coordinates.
    pub fn idempotent(&self, g: usize) -> Vector {
        let mut v = Vector::zeros(self.algebra.field(), self.algebra.dim());
        for (i, c) in self.graded.unit.to_sparse() {
            v.set(self.index(i, g), c);
        }
        v
    }
}

/// `(a ⊗ p_g)(b ⊗ p_h) = a b_{g⁻¹h} ⊗ p_h`.
pub fn gen_graded_smash(a: &GradedAlgebraData, max_subset: usize) -> Result<SmashProduct> {
    let n = a.algebra.dim();
    let order = a.group.order();
    let f = a.algebra.field();
    let mut labels = Vec::with_capacity(n * order);
    for l in a.algebra.labels() {
        for g in 0..order {
            labels.push(format!("{l}#p{g}"));
        }
    }
    let mut triples = Vec::new();
    for i in 0..n {
        for g in 0..order {
            for j in 0..n {
                for h in 0..order {
                    if a.grading[j] != a.group.mul(a.group.inverse(g), h) {
                        continue;
                    }
                    for (k, c) in a.algebra.basis_product(i, j) {
                        triples.push((i * order + g, j * order + h, k * order + h, c.clone()));
                    }
                }
            }
        }
    }
    let algebra = AlgebraData::new(f, labels, triples)?;
    let mut smash = SmashProduct {
        graded: a.clone(),
        algebra,
        local_units: LocalUnitFamily::new(Vec::new(), max_subset),
    };
    let subsets: Vec<Vec<usize>> = if order <= 8 {
        (1u32..(1 << order))
            .map(|mask| (0..order).filter(|g| mask & (1 << g) != 0).collect())
            .collect()
    } else {
        let mut s: Vec<Vec<usize>> = (0..order).map(|g| vec![g]).collect();
        s.push((0..order).collect());
        s
    };
    let idempotents: Vec<Vector> = (0..order).map(|g| smash.idempotent(g)).collect();
    smash.local_units.elements = subsets
        .iter()
        .map(|set| {
            set.iter()
                .fold(Vector::zeros(f, n * order), |acc, &g| acc.add(&idempotents[g]).expect("dims"))
        })
        .collect();
    Ok(smash)
}

/// A right `A`-module with a `G`-grading given by the projections onto its
/// homogeneous components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub module: ModuleData,
    pub projections: Vec<LinMap>,
}

impl GradedModule {
    /// Checks the module law, that the projections form a complete family of
    /// orthogonal idempotents, and `M_g · A_h ⊆ M_{gh}`.
    pub fn new(a: &GradedAlgebraData, module: ModuleData, projections: Vec<LinMap>) -> Result<Self> {
        let rep = check_module_over(&a.algebra, &module);
        if !rep.passed() {
            return Err(Error::refused(rep));
        }
        let order = a.group.order();
        let m = module.dim();
        let f = module.field();
        if projections.len() != order
            || projections.iter().any(|p| p.domain_dim() != m || p.codomain_dim() != m || p.field() != f)
        {
            return Err(Error::Dimension("one projection M -> M per group element".into()));
        }
        let mut sum = LinMap::zeros(f, m, m);
        for (g, p) in projections.iter().enumerate() {
            for (h, q) in projections.iter().enumerate() {
                let pq = p.compose(q)?;
                let expected = if g == h { p.clone() } else { LinMap::zeros(f, m, m) };
                if pq != expected {
                    return Err(Error::InvalidStructure(format!(
                        "projections {g} and {h} are not orthogonal idempotents"
                    )));
                }
            }
            sum = sum.add(p)?;
        }
        if !sum.is_identity() {
            return Err(Error::InvalidStructure("projections do not sum to the identity".into()));
        }
        for j in 0..a.algebra.dim() {
            let right = right_action(&module, a.algebra.dim(), j);
            for (g, p) in projections.iter().enumerate() {
                let target = a.group.mul(g, a.grading[j]);
                let moved = right.compose(p)?;
                if projections[target].compose(&moved)? != moved {
                    return Err(Error::InvalidStructure(format!(
                        "M_{g} · {} is not contained in M_{target}",
                        a.algebra.labels()[j]
                    )));
                }
            }
        }
        Ok(GradedModule { module, projections })
    }
}

/// `m ↦ m · a_j`.
fn right_action(m: &ModuleData, r_dim: usize, j: usize) -> LinMap {
    LinMap::from_column_fn(m.field(), m.dim(), m.dim(), |v| m.action().column(v * r_dim + j).to_vec())
}

/// `m · (a ⊗ p_g) = (m · a)_g`.
pub fn smash_from_graded(s: &SmashProduct, m: &GradedModule) -> Result<ModuleData> {
    let order = s.graded.group.order();
    let n = s.graded.algebra.dim();
    let dim = m.module.dim();
    let f = m.module.field();
    let action = LinMap::from_column_fn(f, dim, dim * n * order, |col| {
        let (v, rest) = (col / (n * order), col % (n * order));
        let (i, g) = (rest / order, rest % order);
        m.projections[g].apply_sparse(m.module.action().column(v * n + i))
    });
    ModuleData::new(dim, action)
}

/// `m · a = Σ_g m · (a ⊗ p_g)` with `M_g = M · (1 ⊗ p_g)`. Refuses modules
/// that are not firm.
pub fn graded_from_smash(s: &SmashProduct, m: &ModuleData) -> Result<GradedModule> {
    let rep = check_firm_module_over(&s.algebra, m);
    if !rep.passed() {
        return Err(Error::refused(rep));
    }
    let order = s.graded.group.order();
    let n = s.graded.algebra.dim();
    let sn = n * order;
    let dim = m.dim();
    let f = m.field();
    let one = f.one();
    let action = LinMap::from_column_fn(f, dim, dim * n, |col| {
        let (v, i) = (col / n, col % n);
        let mut acc = crate::exactla::sparse::Accumulator::new();
        for g in 0..order {
            acc.add_scaled(m.action().column(v * sn + i * order + g), &one);
        }
        acc.finish()
    });
    let projections = (0..order)
        .map(|g| {
            let e = s.idempotent(g).to_sparse();
            LinMap::from_column_fn(f, dim, dim, |v| {
                let mut acc = crate::exactla::sparse::Accumulator::new();
                for (idx, c) in &e {
                    acc.add_scaled(m.action().column(v * sn + idx), c);
                }
                acc.finish()
            })
        })
        .collect();
    GradedModule::new(&s.graded, ModuleData::new(dim, action)?, projections)
}

/// A direct sum of shifted copies of `A` (`M_g = A_{s g}`) of total
/// dimension at most `max_dim`, seen through a random change of basis.
pub fn random_graded_module(a: &GradedAlgebraData, max_dim: usize, rng: &mut impl Rng) -> Result<Option<GradedModule>> {
    let n = a.algebra.dim();
    let order = a.group.order();
    let f = a.algebra.field();
    if n == 0 || n > max_dim {
        return Ok(None);
    }
    let copies = rng.gen_range(1..=max_dim / n);
    let shifts: Vec<usize> = (0..copies).map(|_| rng.gen_range(0..order)).collect();
    let dim = copies * n;
    let action = LinMap::from_column_fn(f, dim, dim * n, |col| {
        let (v, j) = (col / n, col % n);
        let (copy, i) = (v / n, v % n);
        a.algebra
            .basis_product(i, j)
            .iter()
            .map(|(k, c)| (copy * n + k, c.clone()))
            .collect()
    });
    let projections: Vec<LinMap> = (0..order)
        .map(|g| {
            LinMap::from_column_fn(f, dim, dim, |v| {
                let (copy, i) = (v / n, v % n);
                if a.grading[i] == a.group.mul(shifts[copy], g) {
                    vec![(v, f.one())]
                } else {
                    vec![]
                }
            })
        })
        .collect();
    let (p, p_inv) = random_invertible(f, dim, rng);
    let module = ModuleData::new(dim, action)?.change_basis(&p, &p_inv, n)?;
    let projections = projections
        .iter()
        .map(|q| p_inv.compose(q)?.compose(&p))
        .collect::<Result<Vec<_>>>()?;
    GradedModule::new(a, module, projections).map(Some)
}
