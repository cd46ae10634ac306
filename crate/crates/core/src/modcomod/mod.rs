//! Right modules and right comodules over a Frobenius bundle, and the two
//! functors between them.

pub mod samples;

use crate::algcore::{bijectivity_report, AlgebraData};
use crate::error::{Error, Result};
use crate::exactla::sparse::Accumulator;
use crate::exactla::{inverse, quotient_by_span, FieldSpec, LinMap, QuotientSpace, Vector};
use crate::frobcore::FrobeniusBundle;
use crate::report::{CheckReport, Witness};

/// A right module: `α: A ⊗ R -> A`, column `a * dim_R + r` holding `a · b_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleData {
    field: FieldSpec,
    dim: usize,
    action: LinMap,
}

/// A right comodule: `ρ: N -> N ⊗ R`, column `v` holding `ρ(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleData {
    field: FieldSpec,
    dim: usize,
    coaction: LinMap,
}

impl ModuleData {
    pub fn new(dim: usize, action: LinMap) -> Result<Self> {
        if action.codomain_dim() != dim || (dim == 0 && action.domain_dim() != 0) {
            return Err(Error::Dimension(format!(
                "action must map into a space of dimension {dim}"
            )));
        }
        if dim > 0 && !action.domain_dim().is_multiple_of(dim) {
            return Err(Error::Dimension("action domain is not A ⊗ R".into()));
        }
        Ok(ModuleData {
            field: action.field(),
            dim,
            action,
        })
    }

    /// `R` acting on itself by multiplication.
    pub fn regular(b: &FrobeniusBundle) -> Self {
        ModuleData::new(b.dim(), b.algebra().mul().clone()).expect("dims")
    }

    /// The zero action on `k^dim`.
    pub fn zero(b: &FrobeniusBundle, dim: usize) -> Self {
        ModuleData::new(dim, LinMap::zeros(b.field(), dim, dim * b.dim())).expect("dims")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &LinMap {
        &self.action
    }

    /// Transports the action along an invertible `p` (new basis in old
    /// coordinates): `α' = p⁻¹ α (p ⊗ id)`.
    pub fn change_basis(&self, p: &LinMap, p_inv: &LinMap, r_dim: usize) -> Result<Self> {
        let id = LinMap::identity(self.field, r_dim);
        let action = p_inv.compose(&self.action)?.compose(&p.tensor(&id)?)?;
        ModuleData::new(self.dim, action)
    }
}

impl ComoduleData {
    pub fn new(dim: usize, coaction: LinMap) -> Result<Self> {
        if coaction.domain_dim() != dim || (dim == 0 && coaction.codomain_dim() != 0) {
            return Err(Error::Dimension(format!(
                "coaction must be defined on a space of dimension {dim}"
            )));
        }
        if dim > 0 && !coaction.codomain_dim().is_multiple_of(dim) {
            return Err(Error::Dimension("coaction codomain is not N ⊗ R".into()));
        }
        Ok(ComoduleData {
            field: coaction.field(),
            dim,
            coaction,
        })
    }

    /// `R` coacting on itself by `Δ`.
    pub fn regular(b: &FrobeniusBundle) -> Self {
        ComoduleData::new(b.dim(), b.coalgebra().comul().clone()).expect("dims")
    }

    /// The line `k v` with `ρ(v) = v ⊗ g`.
    pub fn line(g: &Vector) -> Self {
        let n = g.dim();
        let coaction = LinMap::from_column_fn(g.field(), n, 1, |_| g.to_sparse());
        ComoduleData::new(1, coaction).expect("dims")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coaction(&self) -> &LinMap {
        &self.coaction
    }

    /// `ρ' = (p⁻¹ ⊗ id) ρ p`.
    pub fn change_basis(&self, p: &LinMap, p_inv: &LinMap, r_dim: usize) -> Result<Self> {
        let id = LinMap::identity(self.field, r_dim);
        let coaction = p_inv.tensor(&id)?.compose(&self.coaction)?.compose(p)?;
        ComoduleData::new(self.dim, coaction)
    }
}

fn shape_refusal(check: &str, expected: FieldSpec, field: FieldSpec, ok: bool) -> Option<CheckReport> {
    if field != expected {
        return Some(CheckReport::refused(check, format!("field {field} differs from {expected}"), None));
    }
    if !ok {
        return Some(CheckReport::refused(check, "dimensions do not match the bundle", None));
    }
    None
}

fn module_shape_ok(b: &FrobeniusBundle, m: &ModuleData) -> bool {
    m.action.domain_dim() == m.dim * b.dim()
}

fn comodule_shape_ok(b: &FrobeniusBundle, n: &ComoduleData) -> bool {
    n.coaction.codomain_dim() == n.dim * b.dim()
}

/// `α∘(α⊗id) = α∘(id⊗μ)`; the witness is a triple `(a, r, s)`.
pub fn check_module(b: &FrobeniusBundle, m: &ModuleData) -> CheckReport {
    check_module_over(b.algebra(), m)
}

/// [`check_module`] for an algebra without a coalgebra structure.
pub fn check_module_over(alg: &AlgebraData, m: &ModuleData) -> CheckReport {
    CheckReport::timed(|| {
        let n = alg.dim();
        if let Some(r) = shape_refusal("module", alg.field(), m.field, m.action.domain_dim() == m.dim * n) {
            return r;
        }
        let f = alg.field();
        let id_r = LinMap::identity(f, n);
        let id_a = LinMap::identity(f, m.dim);
        let lhs = m.action.compose(&m.action.tensor(&id_r).unwrap()).unwrap();
        let rhs = m.action.compose(&id_a.tensor(alg.mul()).unwrap()).unwrap();
        match rhs.first_difference(&lhs).unwrap() {
            None => CheckReport::pass("module"),
            Some(d) => {
                let (a, r, s) = (d.column / (n * n), (d.column / n) % n, d.column % n);
                let l = alg.labels();
                CheckReport::fail(
                    "module",
                    format!("(a·{})·{} ≠ a·({}{}) at a = {a}", l[r], l[s], l[r], l[s]),
                    Witness::new(vec![a, r, s], d.expected, d.actual),
                )
            }
        }
    })
}

/// `A ⊗_R R`: the quotient of `A ⊗ R` by `(a·r)⊗s - a⊗(rs)`.
pub fn balanced_tensor(alg: &AlgebraData, m: &ModuleData) -> QuotientSpace {
    let n = alg.dim();
    let mut relations = Vec::new();
    for a in 0..m.dim {
        for r in 0..n {
            for s in 0..n {
                let mut acc = Accumulator::new();
                for (x, c) in m.action.column(a * n + r) {
                    acc.add(x * n + s, c);
                }
                for (t, c) in alg.basis_product(r, s) {
                    acc.add(a * n + t, &-c);
                }
                let rel = acc.finish();
                if !rel.is_empty() {
                    relations.push(Vector::from_sparse(alg.field(), m.dim * n, &rel));
                }
            }
        }
    }
    quotient_by_span(alg.field(), m.dim * n, relations).expect("dims")
}

fn firm_module_parts(alg: &AlgebraData, m: &ModuleData) -> (CheckReport, Option<(QuotientSpace, LinMap)>) {
    let start = std::time::Instant::now();
    let module = check_module_over(alg, m);
    if !module.passed() {
        let mut r = CheckReport::refused(
            "firm-module",
            format!("not a module: {}", module.message),
            module.witness.clone(),
        );
        r.children.push(module);
        return (r, None);
    }
    let q = balanced_tensor(alg, m);
    let induced = m.action.compose(&q.section).expect("dims");
    let mut report = bijectivity_report("firm-module", "induced action A⊗_R R -> A", &induced)
        .with_note(format!("dim A⊗_R R = {}", q.quotient_dim));
    report.elapsed = start.elapsed();
    (report, Some((q, induced)))
}

/// The action induces a bijection `A ⊗_R R -> A`.
pub fn check_firm_module(b: &FrobeniusBundle, m: &ModuleData) -> CheckReport {
    check_firm_module_over(b.algebra(), m)
}

/// [`check_firm_module`] for an algebra without a coalgebra structure.
pub fn check_firm_module_over(alg: &AlgebraData, m: &ModuleData) -> CheckReport {
    firm_module_parts(alg, m).0
}

/// `(ρ⊗id)∘ρ = (id⊗Δ)∘ρ` and `(id⊗ε)∘ρ = id`.
pub fn check_comodule(b: &FrobeniusBundle, c: &ComoduleData) -> CheckReport {
    CheckReport::timed(|| {
        if let Some(r) = shape_refusal("comodule", b.field(), c.field, comodule_shape_ok(b, c)) {
            return r;
        }
        let f = b.field();
        let id_r = LinMap::identity(f, b.dim());
        let id_n = LinMap::identity(f, c.dim);
        let lhs = c.coaction.tensor(&id_r).unwrap().compose(&c.coaction).unwrap();
        let rhs = id_n
            .tensor(b.coalgebra().comul())
            .unwrap()
            .compose(&c.coaction)
            .unwrap();
        if let Some(d) = rhs.first_difference(&lhs).unwrap() {
            return CheckReport::fail(
                "comodule",
                format!("coaction not coassociative at basis vector {}", d.column),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        let counit = id_n
            .tensor(&b.coalgebra().counit_map())
            .unwrap()
            .compose(&c.coaction)
            .unwrap();
        if let Some(d) = id_n.first_difference(&counit).unwrap() {
            return CheckReport::fail(
                "comodule",
                format!("(id⊗ε)ρ ≠ id at basis vector {}", d.column),
                Witness::new(vec![d.column], d.expected, d.actual),
            );
        }
        CheckReport::pass("comodule")
    })
}

/// `ᾱ = (id⊗ε)(id⊗μ)(ρ⊗id)`, computed without any checks.
pub fn alpha_bar(b: &FrobeniusBundle, c: &ComoduleData) -> LinMap {
    let f = b.field();
    let id_r = LinMap::identity(f, b.dim());
    let id_n = LinMap::identity(f, c.dim);
    id_n.tensor(&b.coalgebra().counit_map())
        .unwrap()
        .compose(&id_n.tensor(b.algebra().mul()).unwrap())
        .unwrap()
        .compose(&c.coaction.tensor(&id_r).unwrap())
        .unwrap()
}

/// The module `n · r = n₀ ε(n₁ r)` of a comodule.
pub fn induced_action(b: &FrobeniusBundle, c: &ComoduleData) -> Result<ModuleData> {
    let rep = check_comodule(b, c);
    if !rep.passed() {
        return Err(Error::refused(rep));
    }
    let m = ModuleData::new(c.dim, alpha_bar(b, c))?;
    let rep = check_module(b, &m);
    if !rep.passed() {
        return Err(Error::refused(rep.with_message("induced action is not associative")));
    }
    Ok(m)
}

/// The coaction of a firm module, built from a section of its action taken
/// from the firmness quotient.
pub fn induced_coaction(b: &FrobeniusBundle, m: &ModuleData) -> Result<ComoduleData> {
    let (rep, parts) = firm_module_parts(b.algebra(), m);
    if !rep.passed() {
        return Err(Error::refused(rep));
    }
    let (q, induced) = parts.expect("firm module has a quotient");
    let induced_inv = inverse(&induced).expect("bijective");
    let section = q.section.compose(&induced_inv)?;
    induced_coaction_with_section(b, m, &section)
}

/// `ρ = (α⊗id)(id⊗Δ)σ` for a given right inverse `σ` of `α`, certified by
/// `ρ∘α = (α⊗id)(id⊗Δ)` and the comodule laws.
pub fn induced_coaction_with_section(
    b: &FrobeniusBundle,
    m: &ModuleData,
    section: &LinMap,
) -> Result<ComoduleData> {
    if let Some(r) = shape_refusal("induced-coaction", b.field(), m.field, module_shape_ok(b, m)) {
        return Err(Error::refused(r));
    }
    let f = b.field();
    let id_r = LinMap::identity(f, b.dim());
    let id_m = LinMap::identity(f, m.dim);
    if let Some(d) = id_m.first_difference(&m.action.compose(section)?)? {
        return Err(Error::refused(CheckReport::refused(
            "induced-coaction",
            "σ is not a right inverse of the action",
            Some(Witness::new(vec![d.column], d.expected, d.actual)),
        )));
    }
    let t = m
        .action
        .tensor(&id_r)?
        .compose(&id_m.tensor(b.coalgebra().comul())?)?;
    let rho = t.compose(section)?;
    let n = b.dim();
    if let Some(d) = t.first_difference(&rho.compose(&m.action)?)? {
        return Err(Error::refused(CheckReport::fail(
            "induced-coaction",
            "not induced-coactionable: ρ∘α ≠ (α⊗id)(id⊗Δ)",
            Witness::new(vec![d.column / n, d.column % n], d.expected, d.actual),
        )));
    }
    let c = ComoduleData::new(m.dim, rho)?;
    let rep = check_comodule(b, &c);
    if !rep.passed() {
        return Err(Error::refused(rep.with_message("induced coaction violates the comodule laws")));
    }
    Ok(c)
}

fn map_comparison(check: &str, expected: &LinMap, actual: &LinMap) -> CheckReport {
    match expected.first_difference(actual) {
        Ok(None) => CheckReport::pass(check),
        Ok(Some(d)) => CheckReport::fail(
            check,
            format!("structure maps differ at column {}", d.column),
            Witness::new(vec![d.column], d.expected, d.actual),
        ),
        Err(e) => CheckReport::refused(check, e.to_string(), None),
    }
}

fn from_error(check: &str, e: Error) -> CheckReport {
    match e {
        Error::Refused(r) => {
            let mut r = *r;
            let inner = r.check.clone();
            r.message = format!("{inner}: {}", r.message);
            r.check = check.to_string();
            r
        }
        other => CheckReport::refused(check, other.to_string(), None),
    }
}

/// A collection of (co)modules to run the round trips on.
#[derive(Clone, Debug, Default)]
pub struct Samples {
    pub modules: Vec<ModuleData>,
    pub comodules: Vec<ComoduleData>,
}

/// `coaction(action(N)) = N` for every sample comodule and
/// `action(coaction(M)) = M` for every sample module, exactly.
pub fn verify_roundtrips(b: &FrobeniusBundle, samples: &Samples) -> CheckReport {
    use rayon::prelude::*;
    let comodule_reports: Vec<CheckReport> = samples
        .comodules
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let name = format!("comodule-roundtrip[{i}]");
            CheckReport::timed(|| {
                match induced_action(b, c).and_then(|m| induced_coaction(b, &m)) {
                    Ok(back) => map_comparison(&name, &c.coaction, &back.coaction),
                    Err(e) => from_error(&name, e),
                }
            })
        })
        .collect();
    let module_reports: Vec<CheckReport> = samples
        .modules
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let name = format!("module-roundtrip[{i}]");
            CheckReport::timed(|| {
                match induced_coaction(b, m).and_then(|c| induced_action(b, &c)) {
                    Ok(back) => map_comparison(&name, &m.action, &back.action),
                    Err(e) => from_error(&name, e),
                }
            })
        })
        .collect();
    let mut children = comodule_reports;
    children.extend(module_reports);
    let total = children.len();
    CheckReport::aggregate("roundtrips", children)
        .with_note(format!("verified on sample set of {total} (co)modules"))
}

/// `(id⊗μ)(ρ⊗id) = ρ∘ᾱ` and `ρ∘ᾱ = (ᾱ⊗id)(id⊗Δ)` on `N ⊗ R`.
pub fn lemma_aux_check(b: &FrobeniusBundle, c: &ComoduleData) -> CheckReport {
    let rep = check_comodule(b, c);
    if !rep.passed() {
        return CheckReport::refused("lemma-aux", format!("not a comodule: {}", rep.message), rep.witness);
    }
    let f = b.field();
    let n = b.dim();
    let id_r = LinMap::identity(f, n);
    let id_n = LinMap::identity(f, c.dim);
    let abar = alpha_bar(b, c);
    let rho_abar = c.coaction.compose(&abar).unwrap();
    let first = id_n
        .tensor(b.algebra().mul())
        .unwrap()
        .compose(&c.coaction.tensor(&id_r).unwrap())
        .unwrap();
    let second = abar
        .tensor(&id_r)
        .unwrap()
        .compose(&id_n.tensor(b.coalgebra().comul()).unwrap())
        .unwrap();
    let compare = |name: &str, what: &str, other: &LinMap| {
        CheckReport::timed(|| match rho_abar.first_difference(other).unwrap() {
            None => CheckReport::pass(name),
            Some(d) => CheckReport::fail(
                name,
                format!("{what} at (v{}, {})", d.column / n, b.labels()[d.column % n]),
                Witness::new(vec![d.column / n, d.column % n], d.expected, d.actual),
            ),
        })
    };
    CheckReport::aggregate(
        "lemma-aux",
        vec![
            compare("aux-coaction", "(id⊗μ)(ρ⊗id) ≠ ρ∘ᾱ", &first),
            compare("aux-comodule-map", "(ᾱ⊗id)(id⊗Δ) ≠ ρ∘ᾱ", &second),
        ],
    )
}

/// A module or a comodule; the other structure is obtained by transport.
#[derive(Clone, Debug)]
pub enum Structure {
    Module(ModuleData),
    Comodule(ComoduleData),
}

impl Structure {
    pub fn dim(&self) -> usize {
        match self {
            Structure::Module(m) => m.dim,
            Structure::Comodule(c) => c.dim,
        }
    }

    fn both(&self, b: &FrobeniusBundle) -> Result<(ModuleData, ComoduleData)> {
        match self {
            Structure::Module(m) => Ok((m.clone(), induced_coaction(b, m)?)),
            Structure::Comodule(c) => Ok((induced_action(b, c)?, c.clone())),
        }
    }
}

/// `f∘α = α'∘(f⊗id)`.
pub fn module_morphism_check(b: &FrobeniusBundle, f: &LinMap, src: &ModuleData, dst: &ModuleData) -> CheckReport {
    let id_r = LinMap::identity(b.field(), b.dim());
    let lhs = f.compose(&src.action).unwrap();
    let rhs = dst.action.compose(&f.tensor(&id_r).unwrap()).unwrap();
    let n = b.dim();
    match rhs.first_difference(&lhs).unwrap() {
        None => CheckReport::pass("module-morphism"),
        Some(d) => CheckReport::fail(
            "module-morphism",
            "f(a·r) ≠ f(a)·r",
            Witness::new(vec![d.column / n, d.column % n], d.expected, d.actual),
        ),
    }
}

/// `(f⊗id)∘ρ = ρ'∘f`.
pub fn comodule_morphism_check(
    b: &FrobeniusBundle,
    f: &LinMap,
    src: &ComoduleData,
    dst: &ComoduleData,
) -> CheckReport {
    let id_r = LinMap::identity(b.field(), b.dim());
    let lhs = f.tensor(&id_r).unwrap().compose(&src.coaction).unwrap();
    let rhs = dst.coaction.compose(f).unwrap();
    match rhs.first_difference(&lhs).unwrap() {
        None => CheckReport::pass("comodule-morphism"),
        Some(d) => CheckReport::fail(
            "comodule-morphism",
            "(f⊗id)ρ ≠ ρ'f",
            Witness::new(vec![d.column], d.expected, d.actual),
        ),
    }
}

/// Passes iff `f` is a module morphism exactly when it is a comodule
/// morphism between the transported structures.
pub fn morphism_transport_check(
    b: &FrobeniusBundle,
    f: &LinMap,
    src: &Structure,
    dst: &Structure,
) -> CheckReport {
    CheckReport::timed(|| {
        if f.field() != b.field() || f.domain_dim() != src.dim() || f.codomain_dim() != dst.dim() {
            return CheckReport::refused("morphism-transport", "f has the wrong shape", None);
        }
        let (sm, sc) = match src.both(b) {
            Ok(p) => p,
            Err(e) => return from_error("morphism-transport", e),
        };
        let (dm, dc) = match dst.both(b) {
            Ok(p) => p,
            Err(e) => return from_error("morphism-transport", e),
        };
        let module = module_morphism_check(b, f, &sm, &dm);
        let comodule = comodule_morphism_check(b, f, &sc, &dc);
        let mut rep = if module.passed() == comodule.passed() {
            CheckReport::pass("morphism-transport").with_note(if module.passed() {
                "f is a morphism on both sides"
            } else {
                "f is a morphism on neither side"
            })
        } else {
            let failing = if module.passed() { &comodule } else { &module };
            let mut r = CheckReport::fail(
                "morphism-transport",
                format!("only one side holds; {} fails", failing.check),
                failing.witness.clone().expect("failure has witness"),
            );
            r.message = format!("{}: {}", r.message, failing.message);
            r
        };
        rep.children = vec![module, comodule];
        rep
    })
}

/// On the regular firm module, `(id⊗ε)` after the induced coaction is the
/// identity.
pub fn triangle_identity_check(b: &FrobeniusBundle) -> CheckReport {
    let m = ModuleData::regular(b);
    match induced_coaction(b, &m) {
        Err(e) => from_error("triangle-identity", e),
        Ok(c) => {
            let f = b.field();
            let id = LinMap::identity(f, b.dim());
            let lhs = id
                .tensor(&b.coalgebra().counit_map())
                .unwrap()
                .compose(&c.coaction)
                .unwrap();
            map_comparison("triangle-identity", &id, &lhs)
        }
    }
}
