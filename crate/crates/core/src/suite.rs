//! Named checks and the runner that applies a list of them to a bundle.

use std::fmt;
use std::sync::OnceLock;

use crate::algcore::{
    check_associativity, check_firm_algebra, check_nondegenerate, verify_local_units, LocalUnitFamily,
};
use crate::coalgcore::{check_coalgebra, cofrobenius_maps};
use crate::error::{Error, Result};
use crate::frobcore::{casimir_from_delta, check_frobenius, delta_from_casimir, FrobeniusBundle};
use crate::modcomod::samples::{sample_morphisms, standard_samples};
use crate::modcomod::{
    lemma_aux_check, morphism_transport_check, triangle_identity_check, verify_roundtrips, Samples,
};
use crate::report::{CheckReport, Provenance, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteCheck {
    Associativity,
    Coalgebra,
    Frobenius,
    Nondegenerate,
    Firmness,
    LocalUnits,
    Roundtrips,
    LemmaAux,
    MorphismTransport,
    Triangle,
    CoFrobenius,
    Casimir,
}

impl SuiteCheck {
    pub const ALL: [SuiteCheck; 12] = [
        SuiteCheck::Associativity,
        SuiteCheck::Coalgebra,
        SuiteCheck::Frobenius,
        SuiteCheck::Nondegenerate,
        SuiteCheck::Firmness,
        SuiteCheck::LocalUnits,
        SuiteCheck::Roundtrips,
        SuiteCheck::LemmaAux,
        SuiteCheck::MorphismTransport,
        SuiteCheck::Triangle,
        SuiteCheck::CoFrobenius,
        SuiteCheck::Casimir,
    ];

    /// The checks on the structure maps alone.
    pub const AXIOMS: [SuiteCheck; 6] = [
        SuiteCheck::Associativity,
        SuiteCheck::Coalgebra,
        SuiteCheck::Frobenius,
        SuiteCheck::Nondegenerate,
        SuiteCheck::Firmness,
        SuiteCheck::LocalUnits,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteCheck::Associativity => "associativity",
            SuiteCheck::Coalgebra => "coalgebra",
            SuiteCheck::Frobenius => "frobenius",
            SuiteCheck::Nondegenerate => "nondegenerate",
            SuiteCheck::Firmness => "firm-algebra",
            SuiteCheck::LocalUnits => "local-units",
            SuiteCheck::Roundtrips => "roundtrips",
            SuiteCheck::LemmaAux => "lemma-aux",
            SuiteCheck::MorphismTransport => "morphism-transport",
            SuiteCheck::Triangle => "triangle-identity",
            SuiteCheck::CoFrobenius => "cofrobenius",
            SuiteCheck::Casimir => "casimir",
        }
    }

    /// Parses a check name or one of the suite names `all`, `axioms`,
    /// `structural`, `firmness`, `modcomod`.
    pub fn parse_suite(spec: &str) -> Result<Vec<SuiteCheck>> {
        let mut out: Vec<SuiteCheck> = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let add: Vec<SuiteCheck> = match part {
                "all" => Self::ALL.to_vec(),
                "axioms" => Self::AXIOMS.to_vec(),
                "structural" => vec![SuiteCheck::Associativity, SuiteCheck::Coalgebra],
                "firmness" | "firm" => vec![SuiteCheck::Nondegenerate, SuiteCheck::Firmness],
                "modcomod" => vec![
                    SuiteCheck::Roundtrips,
                    SuiteCheck::LemmaAux,
                    SuiteCheck::MorphismTransport,
                    SuiteCheck::Triangle,
                ],
                name => match Self::ALL.iter().find(|c| c.name() == name) {
                    Some(c) => vec![*c],
                    None => return Err(Error::Parse(format!("unknown check or suite {name:?}"))),
                },
            };
            for c in add {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty suite".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for SuiteCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub max_subset: usize,
    /// Random (co)modules per kind in the round-trip sample set.
    pub samples: usize,
    pub max_sample_dim: usize,
    pub morphisms: usize,
    /// Used by the local-unit check; defaults to the unit when there is one.
    pub local_units: Option<LocalUnitFamily>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            max_subset: 2,
            samples: 20,
            max_sample_dim: 6,
            morphisms: 20,
            local_units: None,
        }
    }
}

fn from_error(check: &str, e: Error) -> CheckReport {
    match e {
        Error::Refused(r) => {
            let mut r = *r;
            r.message = format!("{}: {}", r.check, r.message);
            r.check = check.to_string();
            r
        }
        other => CheckReport::refused(check, other.to_string(), None),
    }
}

fn local_units_report(b: &FrobeniusBundle, opts: &SuiteOptions) -> CheckReport {
    let family = match &opts.local_units {
        Some(f) => LocalUnitFamily::new(f.elements.clone(), opts.max_subset),
        None => match b.algebra().unit() {
            Some(u) => LocalUnitFamily::new(vec![u], opts.max_subset),
            None => {
                return CheckReport::refused(
                    "local-units",
                    "no unit and no local-unit family supplied",
                    None,
                )
            }
        },
    };
    verify_local_units(b.algebra(), &family, None)
}

fn casimir_report(b: &FrobeniusBundle) -> CheckReport {
    CheckReport::timed(|| {
        let m = match casimir_from_delta(b) {
            Ok(m) => m,
            Err(e) => return from_error("casimir", e),
        };
        let (coalg, rebuild) = match delta_from_casimir(b.algebra(), &m, b.coalgebra().counit()) {
            Ok(p) => p,
            Err(e) => return from_error("casimir", e),
        };
        let delta_back = match b.coalgebra().comul().first_difference(coalg.comul()) {
            Ok(None) => CheckReport::pass("delta-roundtrip"),
            Ok(Some(d)) => CheckReport::fail(
                "delta-roundtrip",
                format!("Δ′ ≠ Δ at {}", b.labels()[d.column]),
                Witness::new(vec![d.column], d.expected, d.actual),
            ),
            Err(e) => CheckReport::refused("delta-roundtrip", e.to_string(), None),
        };
        let multiplier_back = match FrobeniusBundle::new(b.algebra().clone(), coalg)
            .and_then(|b2| casimir_from_delta(&b2))
        {
            Ok(m2) if m2 == m => CheckReport::pass("multiplier-roundtrip"),
            Ok(m2) => {
                let d = m
                    .lambda
                    .first_difference(&m2.lambda)
                    .ok()
                    .flatten()
                    .or_else(|| m.rho.first_difference(&m2.rho).ok().flatten())
                    .expect("pairs differ");
                CheckReport::fail(
                    "multiplier-roundtrip",
                    "e′ ≠ e",
                    Witness::new(vec![d.column], d.expected, d.actual),
                )
            }
            Err(e) => from_error("multiplier-roundtrip", e),
        };
        CheckReport::aggregate("casimir", vec![rebuild, delta_back, multiplier_back])
    })
}

/// Runs `checks` on `b` in the given order and aggregates the results.
pub fn run_suite(b: &FrobeniusBundle, checks: &[SuiteCheck], opts: &SuiteOptions) -> CheckReport {
    let samples: OnceLock<std::result::Result<Samples, CheckReport>> = OnceLock::new();
    let get_samples = || {
        samples.get_or_init(|| {
            standard_samples(b, opts.seed, opts.samples, opts.max_sample_dim)
                .map_err(|e| from_error("samples", e))
        })
    };
    let children = checks
        .iter()
        .map(|c| match c {
            SuiteCheck::Associativity => check_associativity(b.algebra()),
            SuiteCheck::Coalgebra => check_coalgebra(b.coalgebra()),
            SuiteCheck::Frobenius => check_frobenius(b),
            SuiteCheck::Nondegenerate => check_nondegenerate(b.algebra()),
            SuiteCheck::Firmness => check_firm_algebra(b.algebra()).0,
            SuiteCheck::LocalUnits => local_units_report(b, opts),
            SuiteCheck::Roundtrips => match get_samples() {
                Ok(s) => verify_roundtrips(b, s),
                Err(r) => from_error("roundtrips", Error::refused(r.clone())),
            },
            SuiteCheck::LemmaAux => match get_samples() {
                Ok(s) => CheckReport::aggregate(
                    "lemma-aux",
                    s.comodules.iter().map(|n| lemma_aux_check(b, n)).collect(),
                ),
                Err(r) => from_error("lemma-aux", Error::refused(r.clone())),
            },
            SuiteCheck::MorphismTransport => match get_samples() {
                Ok(s) => CheckReport::aggregate(
                    "morphism-transport",
                    sample_morphisms(b, s, opts.seed.wrapping_add(1), opts.morphisms)
                        .iter()
                        .map(|m| morphism_transport_check(b, &m.map, &m.src, &m.dst))
                        .collect(),
                ),
                Err(r) => from_error("morphism-transport", Error::refused(r.clone())),
            },
            SuiteCheck::Triangle => triangle_identity_check(b),
            SuiteCheck::CoFrobenius => match cofrobenius_maps(b) {
                Ok(maps) => maps.report,
                Err(e) => from_error("cofrobenius", e),
            },
            SuiteCheck::Casimir => casimir_report(b),
        })
        .collect();
    let mut report = CheckReport::aggregate("suite", children);
    report.provenance = Provenance {
        input_hash: None,
        seed: Some(opts.seed),
        window: None,
        max_subset: Some(opts.max_subset),
    };
    report
}
