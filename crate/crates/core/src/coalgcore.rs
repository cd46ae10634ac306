//! Coalgebras given by structure constants, their convolution duals, and the
//! comparison maps into the dual.

use crate::algcore::{check_labels, AlgebraData};
use crate::error::{Error, Result};
use crate::exactla::sparse::{Accumulator, SparseVec};
use crate::exactla::{kernel, FieldSpec, LinMap, Scalar, Vector};
use crate::frobcore::{check_frobenius, FrobeniusBundle};
use crate::report::{CheckReport, Witness};

/// A coalgebra: `Δ: C -> C ⊗ C` (column `i` holds `Δ(b_i)`) and `ε: C -> k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraData {
    field: FieldSpec,
    labels: Vec<String>,
    comul: LinMap,
    counit: Vector,
}

impl CoalgebraData {
    /// Builds a coalgebra from triples `(i, j, k, c)` meaning
    /// `Δ(b_i) ∋ c b_j ⊗ b_k`.
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        triples: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        counit: Vector,
    ) -> Result<Self> {
        let n = labels.len();
        let comul = LinMap::from_triples(
            field,
            n * n,
            n,
            triples.into_iter().map(|(i, j, k, c)| {
                let row = if j < n && k < n { j * n + k } else { n * n };
                (row, i, c)
            }),
        )?;
        Self::from_maps(field, labels, comul, counit)
    }

    pub fn from_maps(
        field: FieldSpec,
        labels: Vec<String>,
        comul: LinMap,
        counit: Vector,
    ) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        if comul.field() != field {
            return Err(Error::FieldMismatch(field, comul.field()));
        }
        if counit.field() != field {
            return Err(Error::FieldMismatch(field, counit.field()));
        }
        if comul.codomain_dim() != n * n || comul.domain_dim() != n || counit.dim() != n {
            return Err(Error::Dimension(format!(
                "comultiplication must be {}x{n} with a counit of length {n}",
                n * n
            )));
        }
        Ok(CoalgebraData {
            field,
            labels,
            comul,
            counit,
        })
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

    pub fn comul(&self) -> &LinMap {
        &self.comul
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    /// `ε` as a `1 x n` map.
    pub fn counit_map(&self) -> LinMap {
        LinMap::from_column_fn(self.field, 1, self.dim(), |j| {
            vec![(0, self.counit.get(j).clone())]
        })
    }

    pub fn with_counit(&self, counit: Vector) -> Result<Self> {
        Self::from_maps(self.field, self.labels.clone(), self.comul.clone(), counit)
    }

    /// Comultiplication triples `(i, j, k, c)` sorted by `(i, j, k)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| {
                self.comul
                    .column(i)
                    .iter()
                    .map(move |(row, c)| (i, row / n, row % n, c.clone()))
            })
            .collect()
    }

    /// `Δ(b_i)` in `C ⊗ C`.
    pub fn basis_coproduct(&self, i: usize) -> &[(usize, Scalar)] {
        self.comul.column(i)
    }

    pub fn coproduct_sparse(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.comul.apply_sparse(v)
    }

    pub fn counit_of(&self, v: &[(usize, Scalar)]) -> Scalar {
        let mut acc = self.field.zero();
        for (i, x) in v {
            acc.add_mul(x, self.counit.get(*i));
        }
        acc
    }
}

/// `(Δ⊗id)∘Δ = (id⊗Δ)∘Δ` on every basis element.
pub fn check_coassociativity(c: &CoalgebraData) -> CheckReport {
    CheckReport::timed(|| {
        let id = LinMap::identity(c.field, c.dim());
        let left = c.comul.tensor(&id).unwrap().compose(&c.comul).unwrap();
        let right = id.tensor(&c.comul).unwrap().compose(&c.comul).unwrap();
        match left.first_difference(&right).unwrap() {
            None => CheckReport::pass("coassociativity"),
            Some(d) => CheckReport::fail(
                "coassociativity",
                format!("Δ not coassociative at {}", c.labels[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            ),
        }
    })
}

/// `(ε⊗id)∘Δ = id = (id⊗ε)∘Δ` on every basis element.
pub fn check_counit(c: &CoalgebraData) -> CheckReport {
    CheckReport::timed(|| {
        let id = LinMap::identity(c.field, c.dim());
        let eps = c.counit_map();
        let counit_left = eps.tensor(&id).unwrap().compose(&c.comul).unwrap();
        if let Some(d) = id.first_difference(&counit_left).unwrap() {
            return CheckReport::fail(
                "counit",
                format!("(ε⊗id)Δ ≠ id at {}", c.labels[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        let counit_right = id.tensor(&eps).unwrap().compose(&c.comul).unwrap();
        if let Some(d) = id.first_difference(&counit_right).unwrap() {
            return CheckReport::fail(
                "counit",
                format!("(id⊗ε)Δ ≠ id at {}", c.labels[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        CheckReport::pass("counit")
    })
}

/// Coassociativity and both counit laws.
pub fn check_coalgebra(c: &CoalgebraData) -> CheckReport {
    CheckReport::aggregate("coalgebra", vec![check_coassociativity(c), check_counit(c)])
}

/// The convolution algebra `C*` on the dual basis: `φ_j ∗ φ_k = Σ_i c_i^{jk} φ_i`
/// where `Δ(b_i) = Σ c_i^{jk} b_j ⊗ b_k`. Its unit is the counit.
pub fn dual_convolution(c: &CoalgebraData) -> Result<AlgebraData> {
    let rep = check_coalgebra(c);
    if !rep.passed() {
        return Err(Error::refused(rep.with_message("dual_convolution needs a valid coalgebra")));
    }
    let labels = c.labels.iter().map(|l| format!("{l}*")).collect();
    AlgebraData::from_mul_map(c.field, labels, c.comul.transpose())
}

/// The canonical maps `θ_R(c) = ε(c·−)` and `θ_L(c) = ε(−·c)` from `C` into
/// its dual, with the module-map, injectivity and anti-multiplicativity checks.
#[derive(Clone, Debug)]
pub struct CoFrobeniusMaps {
    /// Column `c`, row `d`: `ε(b_c b_d)`.
    pub right: LinMap,
    /// Column `c`, row `d`: `ε(b_d b_c)`.
    pub left: LinMap,
    pub report: CheckReport,
}

/// `(θ ∗ ψ)(d) = Σ θ(d₁) ψ(d₂)` on functionals given as coordinate vectors.
fn convolve(c: &CoalgebraData, theta: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
    let n = c.dim();
    (0..n)
        .map(|d| {
            let mut acc = c.field.zero();
            for (row, coef) in c.basis_coproduct(d) {
                let t = &theta[row / n] * &psi[row % n];
                acc.add_mul(&t, coef);
            }
            acc
        })
        .collect()
}

fn dual_basis(c: &CoalgebraData, j: usize) -> Vec<Scalar> {
    Vector::basis(c.field, c.dim(), j).entries().to_vec()
}

pub fn cofrobenius_maps(b: &FrobeniusBundle) -> Result<CoFrobeniusMaps> {
    let pre = crate::frobcore::check_prerequisites(b);
    if !pre.passed() {
        return Err(Error::refused(pre));
    }
    let fr = check_frobenius(b);
    if !fr.passed() {
        return Err(Error::refused(fr));
    }
    let alg = b.algebra();
    let coalg = b.coalgebra();
    let n = b.dim();
    let f = b.field();
    let right = LinMap::from_column_fn(f, n, n, |c| {
        (0..n)
            .map(|d| (d, coalg.counit_of(alg.basis_product(c, d))))
            .collect()
    });
    let left = LinMap::from_column_fn(f, n, n, |c| {
        (0..n)
            .map(|d| (d, coalg.counit_of(alg.basis_product(d, c))))
            .collect()
    });
    let col = |m: &LinMap, j: usize| m.column_vector(j).entries().to_vec();
    let apply = |m: &LinMap, v: &SparseVec| {
        Vector::from_sparse(f, n, &m.apply_sparse(v)).entries().to_vec()
    };

    // θ_R(c ↼ φ) = θ_R(c) ∗ φ with c ↼ φ = φ(c₁) c₂.
    let mut right_module = CheckReport::pass("theta-right-module-map");
    'outer: for c in 0..n {
        for j in 0..n {
            let mut acc = Accumulator::new();
            for (row, coef) in coalg.basis_coproduct(c) {
                if row / n == j {
                    acc.add(row % n, coef);
                }
            }
            let lhs = apply(&right, &acc.finish());
            let rhs = convolve(coalg, &col(&right, c), &dual_basis(coalg, j));
            if lhs != rhs {
                right_module = CheckReport::fail(
                    "theta-right-module-map",
                    "θ_R(c↼φ) ≠ θ_R(c)∗φ",
                    Witness::new(vec![c, j], Vector::new(f, rhs)?, Vector::new(f, lhs)?),
                );
                break 'outer;
            }
        }
    }

    // θ_L(φ ⇀ c) = φ ∗ θ_L(c) with φ ⇀ c = c₁ φ(c₂).
    let mut left_module = CheckReport::pass("theta-left-module-map");
    'outer: for c in 0..n {
        for j in 0..n {
            let mut acc = Accumulator::new();
            for (row, coef) in coalg.basis_coproduct(c) {
                if row % n == j {
                    acc.add(row / n, coef);
                }
            }
            let lhs = apply(&left, &acc.finish());
            let rhs = convolve(coalg, &dual_basis(coalg, j), &col(&left, c));
            if lhs != rhs {
                left_module = CheckReport::fail(
                    "theta-left-module-map",
                    "θ_L(φ⇀c) ≠ φ∗θ_L(c)",
                    Witness::new(vec![c, j], Vector::new(f, rhs)?, Vector::new(f, lhs)?),
                );
                break 'outer;
            }
        }
    }

    let injective = |name: &str, m: &LinMap| match kernel(m).into_iter().next() {
        None => CheckReport::pass(name),
        Some(v) => CheckReport::fail(
            name,
            format!("{v} lies in the kernel"),
            Witness::new(vec![], Vector::zeros(f, n), v),
        ),
    };
    let right_inj = injective("theta-right-injective", &right);
    let left_inj = injective("theta-left-injective", &left);
    let anti = check_anti_multiplicative(b, &right);

    let report = CheckReport::aggregate(
        "cofrobenius",
        vec![right_module, left_module, right_inj, left_inj, anti],
    );
    Ok(CoFrobeniusMaps {
        right,
        left,
        report,
    })
}

/// `ε(c d₁) ε(c′ d₂) = ε(c′ c d)` for all basis triples, i.e.
/// `θ_R(c) ∗ θ_R(c′) = θ_R(c′ c)`.
fn check_anti_multiplicative(b: &FrobeniusBundle, right: &LinMap) -> CheckReport {
    let alg = b.algebra();
    let coalg = b.coalgebra();
    let n = b.dim();
    let f = b.field();
    for c in 0..n {
        for c2 in 0..n {
            let lhs = convolve(
                coalg,
                right.column_vector(c).entries(),
                right.column_vector(c2).entries(),
            );
            let prod = alg.basis_product(c2, c);
            let rhs = Vector::from_sparse(f, n, &right.apply_sparse(prod))
                .entries()
                .to_vec();
            if lhs != rhs {
                let d = (0..n).find(|&d| lhs[d] != rhs[d]).unwrap_or(0);
                return CheckReport::fail(
                    "anti-multiplicative",
                    "ε(c d₁) ε(c′ d₂) ≠ ε(c′ c d)",
                    Witness::new(
                        vec![c, c2, d],
                        Vector::new(f, rhs).expect("field"),
                        Vector::new(f, lhs).expect("field"),
                    ),
                );
            }
        }
    }
    CheckReport::pass("anti-multiplicative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::check_associativity;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn g2_coalgebra() -> CoalgebraData {
        CoalgebraData::new(
            q(),
            labels(&["p0", "p1"]),
            vec![(0, 0, 0, q().one()), (1, 1, 1, q().one())],
            Vector::from_i64s(q(), &[1, 1]),
        )
        .unwrap()
    }

    fn mc2() -> CoalgebraData {
        // e_ij at index 2i + j, Δ(e_ij) = Σ_k e_ik ⊗ e_kj
        let mut t = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    t.push((2 * i + j, 2 * i + k, 2 * k + j, q().one()));
                }
            }
        }
        CoalgebraData::new(
            q(),
            labels(&["e00", "e01", "e10", "e11"]),
            t,
            Vector::from_i64s(q(), &[1, 0, 0, 1]),
        )
        .unwrap()
    }

    #[test]
    fn coalgebra_examples() {
        assert!(check_coalgebra(&g2_coalgebra()).passed());
        assert!(check_coalgebra(&mc2()).passed());
        let broken = g2_coalgebra().with_counit(Vector::zeros(q(), 2)).unwrap();
        let rep = check_coalgebra(&broken);
        assert!(!rep.passed());
        assert!(rep.message.contains("ε"));
    }

    #[test]
    fn dual_of_grouplike_is_pointwise() {
        let d = dual_convolution(&g2_coalgebra()).unwrap();
        assert_eq!(
            d.structure_constants(),
            vec![(0, 0, 0, q().one()), (1, 1, 1, q().one())]
        );
        assert!(check_associativity(&d).passed());
        assert_eq!(d.unit(), Some(Vector::from_i64s(q(), &[1, 1])));
    }

    #[test]
    fn dual_of_comatrix_is_matrix_algebra() {
        let d = dual_convolution(&mc2()).unwrap();
        // e_ij* e_kl* = δ_jk e_il*
        let idx = |i: usize, j: usize| 2 * i + j;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let p = d.basis_product(idx(i, j), idx(k, l));
                        if j == k {
                            assert_eq!(p, &[(idx(i, l), q().one())]);
                        } else {
                            assert!(p.is_empty());
                        }
                    }
                }
            }
        }
        assert!(check_associativity(&d).passed());
    }

    #[test]
    fn counit_is_unit_of_dual() {
        let c = mc2();
        let d = dual_convolution(&c).unwrap();
        let phi = Vector::from_i64s(q(), &[3, -1, 4, 7]);
        assert_eq!(d.product(c.counit(), &phi), phi);
        assert_eq!(d.product(&phi, c.counit()), phi);
    }

    #[test]
    fn dual_refuses_invalid_coalgebra() {
        let broken = g2_coalgebra().with_counit(Vector::zeros(q(), 2)).unwrap();
        assert!(matches!(dual_convolution(&broken), Err(Error::Refused(_))));
    }
}
