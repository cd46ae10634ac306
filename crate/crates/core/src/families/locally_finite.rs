//! Bundles on a countable basis, given by rules and examined on finite,
//! nested windows of labels.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algcore::{global_unit_from_local_units, verify_local_units, AlgebraData, LocalUnitFamily};
use crate::coalgcore::CoalgebraData;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Scalar, Vector};
use crate::frobcore::FrobeniusBundle;
use crate::report::{CheckReport, Witness};
use crate::suite::{run_suite, SuiteCheck, SuiteOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Integers,
    FiniteGroupTable,
}

type MulRule = dyn Fn(i64, i64) -> Vec<(i64, Scalar)> + Send + Sync;
type ComulRule = dyn Fn(i64) -> Vec<(i64, i64, Scalar)> + Send + Sync;
type CounitRule = dyn Fn(i64) -> Scalar + Send + Sync;
type WindowRule = dyn Fn(usize) -> Vec<i64> + Send + Sync;
type UnitRule = dyn Fn(usize) -> Vec<(i64, Scalar)> + Send + Sync;

/// Structure maps given per basis label, with nested finite windows of labels
/// and a local unit attached to each window size.
#[derive(Clone)]
pub struct LocallyFiniteBundle {
    pub field: FieldSpec,
    pub label_kind: LabelKind,
    pub mul: Arc<MulRule>,
    pub comul: Arc<ComulRule>,
    pub counit: Arc<CounitRule>,
    pub window: Arc<WindowRule>,
    pub local_unit: Arc<UnitRule>,
}

impl fmt::Debug for LocallyFiniteBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocallyFiniteBundle")
            .field("field", &self.field)
            .field("label_kind", &self.label_kind)
            .finish_non_exhaustive()
    }
}

fn label_name(g: i64) -> String {
    format!("p{g}")
}

/// The grouplike bundle on `ℤ`: windows `{-w..w}` and local units
/// `Σ_{|g|≤w} p_g`.
pub fn gen_grouplike_integers(field: FieldSpec) -> LocallyFiniteBundle {
    LocallyFiniteBundle {
        field,
        label_kind: LabelKind::Integers,
        mul: Arc::new(move |g, h| if g == h { vec![(g, field.one())] } else { vec![] }),
        comul: Arc::new(move |g| vec![(g, g, field.one())]),
        counit: Arc::new(move |_| field.one()),
        window: Arc::new(|w| {
            let w = w as i64;
            (-w..=w).collect()
        }),
        local_unit: Arc::new(move |w| {
            let w = w as i64;
            (-w..=w).map(|g| (g, field.one())).collect()
        }),
    }
}

impl LocallyFiniteBundle {
    /// The grouplike bundle on a finite group, as a locally-finite bundle
    /// whose every window is the whole group.
    pub fn from_group_order(order: usize, field: FieldSpec) -> Self {
        let n = order as i64;
        LocallyFiniteBundle {
            field,
            label_kind: LabelKind::FiniteGroupTable,
            mul: Arc::new(move |g, h| if g == h { vec![(g, field.one())] } else { vec![] }),
            comul: Arc::new(move |g| vec![(g, g, field.one())]),
            counit: Arc::new(move |_| field.one()),
            window: Arc::new(move |_| (0..n).collect()),
            local_unit: Arc::new(move |_| (0..n).map(|g| (g, field.one())).collect()),
        }
    }

    /// The finite bundle spanned by the labels of window `w`. Refuses when
    /// some rule output leaves the window.
    pub fn window_bundle(&self, w: usize) -> Result<FrobeniusBundle> {
        let labels = (self.window)(w);
        let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let escape = |what: String| {
            Error::refused(CheckReport::refused(
                "window-closure",
                format!("window not closed; enlarge ({what})"),
                None,
            ))
        };
        let n = labels.len();
        let mut mul = Vec::new();
        for (i, &g) in labels.iter().enumerate() {
            for (j, &h) in labels.iter().enumerate() {
                for (k, c) in (self.mul)(g, h) {
                    let Some(&kk) = index.get(&k) else {
                        return Err(escape(format!("{}·{} has a term on {}", label_name(g), label_name(h), label_name(k))));
                    };
                    mul.push((i, j, kk, c));
                }
            }
        }
        let mut comul = Vec::new();
        let mut counit = Vec::with_capacity(n);
        for (i, &g) in labels.iter().enumerate() {
            for (a, b, c) in (self.comul)(g) {
                match (index.get(&a), index.get(&b)) {
                    (Some(&aa), Some(&bb)) => comul.push((i, aa, bb, c)),
                    _ => return Err(escape(format!("Δ({}) leaves the window", label_name(g)))),
                }
            }
            counit.push((self.counit)(g));
        }
        let names: Vec<String> = labels.iter().map(|&g| label_name(g)).collect();
        let alg = AlgebraData::new(self.field, names.clone(), mul)?;
        let coalg = CoalgebraData::new(self.field, names, comul, Vector::new(self.field, counit)?)?;
        FrobeniusBundle::new(alg, coalg)
    }

    /// The local units of windows `0..=w`, in window-`w` coordinates.
    pub fn window_local_units(&self, w: usize, max_subset: usize) -> Result<LocalUnitFamily> {
        let labels = (self.window)(w);
        let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut elements = Vec::new();
        for v in 0..=w {
            let mut e = Vector::zeros(self.field, labels.len());
            for (g, c) in (self.local_unit)(v) {
                let Some(&i) = index.get(&g) else {
                    return Err(Error::refused(CheckReport::refused(
                        "window-closure",
                        format!("window not closed; enlarge (local unit {v} uses {})", label_name(g)),
                        None,
                    )));
                };
                e.set(i, c);
            }
            if !elements.contains(&e) {
                elements.push(e);
            }
        }
        Ok(LocalUnitFamily::new(elements, max_subset))
    }
}

/// Runs `suite` on window `w` with the window's local units, labelling the
/// result window-verified.
pub fn window_check(
    lf: &LocallyFiniteBundle,
    w: usize,
    suite: &[SuiteCheck],
    opts: &SuiteOptions,
) -> CheckReport {
    let bundle = match lf.window_bundle(w) {
        Ok(b) => b,
        Err(Error::Refused(r)) => return *r,
        Err(e) => return CheckReport::refused("window-closure", e.to_string(), None),
    };
    let units = match lf.window_local_units(w, opts.max_subset) {
        Ok(u) => u,
        Err(Error::Refused(r)) => return *r,
        Err(e) => return CheckReport::refused("window-closure", e.to_string(), None),
    };
    let opts = SuiteOptions {
        local_units: Some(units),
        ..opts.clone()
    };
    let mut inner = run_suite(&bundle, suite, &opts);
    inner.check = format!("window-{w}");
    let mut rep = CheckReport::aggregate("window", vec![CheckReport::pass("window-closure"), inner]);
    rep.provenance.seed = Some(opts.seed);
    rep.provenance.max_subset = Some(opts.max_subset);
    rep.window_verified(w)
}

/// On window `w`: the local units, checked at subset size equal to the
/// dimension, produce a global unit of the window; that element fails to be a
/// unit of the whole bundle on the first label outside the window.
pub fn rigidity_check(lf: &LocallyFiniteBundle, w: usize) -> CheckReport {
    let bundle = match lf.window_bundle(w) {
        Ok(b) => b,
        Err(e) => return CheckReport::refused("rigidity", e.to_string(), None),
    };
    let n = bundle.dim();
    let family = match lf.window_local_units(w, n) {
        Ok(f) => f,
        Err(e) => return CheckReport::refused("rigidity", e.to_string(), None),
    };
    let certificate = verify_local_units(bundle.algebra(), &family, None);
    let finite = if !certificate.passed() {
        certificate.clone()
    } else {
        match global_unit_from_local_units(bundle.algebra(), &family) {
            Some(_) => CheckReport::pass("finite-unit"),
            None => CheckReport::fail(
                "finite-unit",
                "local units verified at full subset size but no global unit found",
                Witness::new(vec![], Vector::zeros(bundle.field(), n), Vector::zeros(bundle.field(), n)),
            ),
        }
    };
    let labels = (lf.window)(w);
    let outside = (lf.window)(w + 1).into_iter().find(|g| !labels.contains(g));
    let global = match (outside, global_unit_from_local_units(bundle.algebra(), &family)) {
        (None, _) => CheckReport::pass("no-global-unit")
            .with_note("the window already exhausts the basis; the bundle is unital"),
        (Some(_), None) => CheckReport::refused("no-global-unit", "no window unit to test", None),
        (Some(out), Some(u)) => {
            // u · p_out computed by the rules, on the labels window ∪ {out}.
            let mut terms: Vec<(i64, Scalar)> = Vec::new();
            for (i, c) in u.to_sparse() {
                for (k, d) in (lf.mul)(labels[i], out) {
                    terms.push((k, &c * &d));
                }
            }
            let acts_as_unit = terms.len() == 1 && terms[0].0 == out && terms[0].1.is_one();
            if acts_as_unit {
                CheckReport::fail(
                    "no-global-unit",
                    format!("window unit fixes {}", label_name(out)),
                    Witness::new(
                        vec![labels.len()],
                        Vector::from_i64s(lf.field, &[1]),
                        Vector::from_i64s(lf.field, &[1]),
                    ),
                )
            } else {
                CheckReport::pass("no-global-unit")
                    .with_note(format!("window unit does not fix {}", label_name(out)))
            }
        }
    };
    CheckReport::aggregate("rigidity", vec![finite, global])
}
