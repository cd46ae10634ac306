//! The JSON document format: bundles, algebras, coalgebras, modules,
//! comodules, Casimir data and reports, with scalars written as strings.

use serde::{Deserialize, Serialize};

use crate::algcore::{AlgebraData, LocalUnitFamily};
use crate::coalgcore::CoalgebraData;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, LinMap, Scalar, Vector};
use crate::frobcore::{FrobeniusBundle, MultiplierPair};
use crate::modcomod::{ComoduleData, ModuleData};
use crate::report::{CheckReport, Provenance};

pub const FORMAT: &str = "firmfrob/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawField {
    Rationals,
    Prime { p: u32 },
}

type Triple = (usize, usize, usize, String);
type Entry = (usize, usize, String);

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawUnits {
    max_subset: usize,
    elements: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawModule {
    field: RawField,
    dim: usize,
    r_dim: usize,
    /// `[a, r, b, c]`: `a · b_r ∋ c b`.
    action: Vec<Triple>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawComodule {
    field: RawField,
    dim: usize,
    r_dim: usize,
    /// `[v, w, r, c]`: `ρ(v) ∋ c w ⊗ b_r`.
    coaction: Vec<Triple>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawElement {
    r: String,
    left: Vec<String>,
    right: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawWitness {
    tuple: Vec<usize>,
    expected: Vec<String>,
    actual: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawReport {
    check: String,
    verdict: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<RawWitness>,
    elapsed_us: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<RawReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
struct RawProvenance {
    input_hash: Option<String>,
    seed: Option<u64>,
    window: Option<usize>,
    max_subset: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawBody {
    Bundle {
        field: RawField,
        dim: usize,
        labels: Vec<String>,
        mul: Vec<Triple>,
        comul: Vec<Triple>,
        counit: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        local_units: Option<RawUnits>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        modules: Vec<RawModule>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        comodules: Vec<RawComodule>,
    },
    Algebra {
        field: RawField,
        dim: usize,
        labels: Vec<String>,
        mul: Vec<Triple>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        local_units: Option<RawUnits>,
    },
    Coalgebra {
        field: RawField,
        dim: usize,
        labels: Vec<String>,
        comul: Vec<Triple>,
        counit: Vec<String>,
    },
    Module(RawModule),
    Comodule(RawComodule),
    Casimir {
        field: RawField,
        dim: usize,
        labels: Vec<String>,
        /// `[row, col, c]` on `R ⊗ R`.
        lambda: Vec<Entry>,
        rho: Vec<Entry>,
        elements: Vec<RawElement>,
        report: RawReport,
    },
    Report {
        command: String,
        verdict: String,
        provenance: RawProvenance,
        report: RawReport,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawDoc {
    format: String,
    #[serde(flatten)]
    body: RawBody,
}

/// A bundle together with the optional data a bundle file may carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleFile {
    pub bundle: FrobeniusBundle,
    pub local_units: Option<LocalUnitFamily>,
    pub modules: Vec<ModuleData>,
    pub comodules: Vec<ComoduleData>,
}

impl BundleFile {
    pub fn new(bundle: FrobeniusBundle) -> Self {
        BundleFile {
            bundle,
            local_units: None,
            modules: Vec::new(),
            comodules: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebra: AlgebraData,
    pub local_units: Option<LocalUnitFamily>,
}

/// The multiplier pair, the elements `(b_r⊗1)e` and `e(1⊗b_r)`, and the
/// reconstruction report.
#[derive(Clone, Debug)]
pub struct CasimirFile {
    pub field: FieldSpec,
    pub labels: Vec<String>,
    pub pair: MultiplierPair,
    pub elements: Vec<(Vector, Vector)>,
    pub report: CheckReport,
}

#[derive(Clone, Debug)]
pub struct ReportFile {
    pub command: String,
    pub report: CheckReport,
}

#[derive(Clone, Debug)]
pub enum Document {
    Bundle(BundleFile),
    Algebra(AlgebraFile),
    Coalgebra(CoalgebraData),
    Module(ModuleData),
    Comodule(ComoduleData),
    Casimir(CasimirFile),
    Report(ReportFile),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Bundle(_) => "bundle",
            Document::Algebra(_) => "algebra",
            Document::Coalgebra(_) => "coalgebra",
            Document::Module(_) => "module",
            Document::Comodule(_) => "comodule",
            Document::Casimir(_) => "casimir",
            Document::Report(_) => "report",
        }
    }
}

fn field_from_raw(f: RawField) -> Result<FieldSpec> {
    match f {
        RawField::Rationals => Ok(FieldSpec::Rationals),
        RawField::Prime { p } => FieldSpec::prime(p),
    }
}

fn field_to_raw(f: FieldSpec) -> RawField {
    match f {
        FieldSpec::Rationals => RawField::Rationals,
        FieldSpec::Prime(p) => RawField::Prime { p },
    }
}

fn at<T>(place: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::MalformedScalar { text, reason } => Error::MalformedScalar {
            text,
            reason: format!("{reason} (at {place})"),
        },
        Error::Refused(_) => e,
        other => Error::Parse(format!("{place}: {other}")),
    })
}

fn scalar(f: FieldSpec, text: &str, place: &str) -> Result<Scalar> {
    at(place, f.parse(text))
}

fn vector(f: FieldSpec, texts: &[String], place: &str) -> Result<Vector> {
    let entries = texts
        .iter()
        .enumerate()
        .map(|(i, t)| scalar(f, t, &format!("{place}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Vector::new(f, entries)
}

fn triples(f: FieldSpec, raw: &[Triple], place: &str) -> Result<Vec<(usize, usize, usize, Scalar)>> {
    raw.iter()
        .enumerate()
        .map(|(i, (a, b, c, s))| Ok((*a, *b, *c, scalar(f, s, &format!("{place}[{i}]"))?)))
        .collect()
}

fn check_dim(place: &str, declared: usize, labels: &[String]) -> Result<()> {
    if declared != labels.len() {
        return Err(Error::Parse(format!(
            "{place}: dim {declared} but {} labels",
            labels.len()
        )));
    }
    Ok(())
}

fn units_from_raw(f: FieldSpec, dim: usize, raw: Option<RawUnits>) -> Result<Option<LocalUnitFamily>> {
    let Some(raw) = raw else { return Ok(None) };
    let elements = raw
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let v = vector(f, e, &format!("local_units.elements[{i}]"))?;
            if v.dim() != dim {
                return Err(Error::Parse(format!("local_units.elements[{i}]: length {} ≠ dim {dim}", v.dim())));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(LocalUnitFamily::new(elements, raw.max_subset)))
}

fn units_to_raw(u: &Option<LocalUnitFamily>) -> Option<RawUnits> {
    u.as_ref().map(|u| RawUnits {
        max_subset: u.max_subset_size,
        elements: u.elements.iter().map(|v| v.to_strings()).collect(),
    })
}

fn module_from_raw(raw: RawModule, expect_field: Option<FieldSpec>, place: &str) -> Result<ModuleData> {
    let f = field_from_raw(raw.field)?;
    if let Some(e) = expect_field {
        if e != f {
            return Err(Error::Parse(format!("{place}: field {f} differs from the bundle field {e}")));
        }
    }
    let n = raw.r_dim;
    let entries = triples(f, &raw.action, &format!("{place}.action"))?;
    let map = at(
        place,
        LinMap::from_triples(
            f,
            raw.dim,
            raw.dim * n,
            entries.into_iter().map(|(a, r, b, c)| {
                let col = if r < n { a * n + r } else { raw.dim * n };
                (b, col, c)
            }),
        ),
    )?;
    at(place, ModuleData::new(raw.dim, map))
}

fn module_to_raw(m: &ModuleData, r_dim: usize) -> RawModule {
    RawModule {
        field: field_to_raw(m.field()),
        dim: m.dim(),
        r_dim,
        action: sorted(
            m.action()
                .triples()
                .into_iter()
                .map(|(b, col, c)| (col / r_dim, col % r_dim, b, c.to_string()))
                .collect(),
        ),
    }
}

fn comodule_from_raw(raw: RawComodule, expect_field: Option<FieldSpec>, place: &str) -> Result<ComoduleData> {
    let f = field_from_raw(raw.field)?;
    if let Some(e) = expect_field {
        if e != f {
            return Err(Error::Parse(format!("{place}: field {f} differs from the bundle field {e}")));
        }
    }
    let n = raw.r_dim;
    let entries = triples(f, &raw.coaction, &format!("{place}.coaction"))?;
    let map = at(
        place,
        LinMap::from_triples(
            f,
            raw.dim * n,
            raw.dim,
            entries.into_iter().map(|(v, w, r, c)| {
                let row = if r < n && w < raw.dim { w * n + r } else { raw.dim * n };
                (row, v, c)
            }),
        ),
    )?;
    at(place, ComoduleData::new(raw.dim, map))
}

fn comodule_to_raw(c: &ComoduleData, r_dim: usize) -> RawComodule {
    RawComodule {
        field: field_to_raw(c.field()),
        dim: c.dim(),
        r_dim,
        coaction: sorted(
            c.coaction()
                .triples()
                .into_iter()
                .map(|(row, v, s)| (v, row / r_dim, row % r_dim, s.to_string()))
                .collect(),
        ),
    }
}

fn sorted(mut v: Vec<Triple>) -> Vec<Triple> {
    v.sort_by_key(|t| (t.0, t.1, t.2));
    v
}

fn scalar_triples(t: Vec<(usize, usize, usize, Scalar)>) -> Vec<Triple> {
    t.into_iter().map(|(i, j, k, c)| (i, j, k, c.to_string())).collect()
}

fn entries(m: &LinMap) -> Vec<Entry> {
    m.triples().into_iter().map(|(r, c, s)| (r, c, s.to_string())).collect()
}

fn report_to_raw(r: &CheckReport) -> RawReport {
    RawReport {
        check: r.check.clone(),
        verdict: r.verdict.as_str().to_string(),
        message: r.message.clone(),
        witness: r.witness.as_ref().map(|w| RawWitness {
            tuple: w.tuple.clone(),
            expected: w.expected.to_strings(),
            actual: w.actual.to_strings(),
        }),
        elapsed_us: r.elapsed.as_micros() as u64,
        notes: r.notes.clone(),
        children: r.children.iter().map(report_to_raw).collect(),
    }
}

fn provenance_to_raw(p: &Provenance) -> RawProvenance {
    RawProvenance {
        input_hash: p.input_hash.clone(),
        seed: p.seed,
        window: p.window,
        max_subset: p.max_subset,
    }
}

/// Parses any document kind that can serve as input.
pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    if raw.format != FORMAT {
        return Err(Error::Parse(format!(
            "unsupported format {:?}, expected {FORMAT:?}",
            raw.format
        )));
    }
    match raw.body {
        RawBody::Bundle {
            field,
            dim,
            labels,
            mul,
            comul,
            counit,
            local_units,
            modules,
            comodules,
        } => {
            let f = field_from_raw(field)?;
            check_dim("bundle", dim, &labels)?;
            let alg = at("mul", AlgebraData::new(f, labels.clone(), triples(f, &mul, "mul")?))?;
            let counit = vector(f, &counit, "counit")?;
            let coalg = at(
                "comul",
                CoalgebraData::new(f, labels, triples(f, &comul, "comul")?, counit),
            )?;
            let bundle = at("bundle", FrobeniusBundle::new(alg, coalg))?;
            let modules = modules
                .into_iter()
                .enumerate()
                .map(|(i, m)| module_from_raw(m, Some(f), &format!("modules[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let comodules = comodules
                .into_iter()
                .enumerate()
                .map(|(i, c)| comodule_from_raw(c, Some(f), &format!("comodules[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Document::Bundle(BundleFile {
                local_units: units_from_raw(f, dim, local_units)?,
                bundle,
                modules,
                comodules,
            }))
        }
        RawBody::Algebra {
            field,
            dim,
            labels,
            mul,
            local_units,
        } => {
            let f = field_from_raw(field)?;
            check_dim("algebra", dim, &labels)?;
            let algebra = at("mul", AlgebraData::new(f, labels, triples(f, &mul, "mul")?))?;
            Ok(Document::Algebra(AlgebraFile {
                algebra,
                local_units: units_from_raw(f, dim, local_units)?,
            }))
        }
        RawBody::Coalgebra {
            field,
            dim,
            labels,
            comul,
            counit,
        } => {
            let f = field_from_raw(field)?;
            check_dim("coalgebra", dim, &labels)?;
            let counit = vector(f, &counit, "counit")?;
            Ok(Document::Coalgebra(at(
                "comul",
                CoalgebraData::new(f, labels, triples(f, &comul, "comul")?, counit),
            )?))
        }
        RawBody::Module(m) => Ok(Document::Module(module_from_raw(m, None, "module")?)),
        RawBody::Comodule(c) => Ok(Document::Comodule(comodule_from_raw(c, None, "comodule")?)),
        RawBody::Casimir { .. } | RawBody::Report { .. } => Err(Error::Parse(
            "casimir and report documents are output only".into(),
        )),
    }
}

fn bundle_body(b: &BundleFile) -> RawBody {
    let bundle = &b.bundle;
    let n = bundle.dim();
    RawBody::Bundle {
        field: field_to_raw(bundle.field()),
        dim: n,
        labels: bundle.labels().to_vec(),
        mul: scalar_triples(bundle.algebra().structure_constants()),
        comul: scalar_triples(bundle.coalgebra().structure_constants()),
        counit: bundle.coalgebra().counit().to_strings(),
        local_units: units_to_raw(&b.local_units),
        modules: b.modules.iter().map(|m| module_to_raw(m, n)).collect(),
        comodules: b.comodules.iter().map(|c| comodule_to_raw(c, n)).collect(),
    }
}

fn body(doc: &Document, provenance: &Provenance) -> RawBody {
    match doc {
        Document::Bundle(b) => bundle_body(b),
        Document::Algebra(a) => RawBody::Algebra {
            field: field_to_raw(a.algebra.field()),
            dim: a.algebra.dim(),
            labels: a.algebra.labels().to_vec(),
            mul: scalar_triples(a.algebra.structure_constants()),
            local_units: units_to_raw(&a.local_units),
        },
        Document::Coalgebra(c) => RawBody::Coalgebra {
            field: field_to_raw(c.field()),
            dim: c.dim(),
            labels: c.labels().to_vec(),
            comul: scalar_triples(c.structure_constants()),
            counit: c.counit().to_strings(),
        },
        Document::Module(m) => {
            let r_dim = if m.dim() == 0 { 0 } else { m.action().domain_dim() / m.dim() };
            RawBody::Module(module_to_raw(m, r_dim))
        }
        Document::Comodule(c) => {
            let r_dim = if c.dim() == 0 { 0 } else { c.coaction().codomain_dim() / c.dim() };
            RawBody::Comodule(comodule_to_raw(c, r_dim))
        }
        Document::Casimir(c) => RawBody::Casimir {
            field: field_to_raw(c.field),
            dim: c.labels.len(),
            labels: c.labels.clone(),
            lambda: entries(&c.pair.lambda),
            rho: entries(&c.pair.rho),
            elements: c
                .labels
                .iter()
                .zip(&c.elements)
                .map(|(l, (left, right))| RawElement {
                    r: l.clone(),
                    left: left.to_strings(),
                    right: right.to_strings(),
                })
                .collect(),
            report: report_to_raw(&c.report),
        },
        Document::Report(r) => RawBody::Report {
            command: r.command.clone(),
            verdict: r.report.verdict.as_str().to_string(),
            provenance: provenance_to_raw(provenance),
            report: report_to_raw(&r.report),
        },
    }
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize_document(doc: &Document) -> String {
    let provenance = match doc {
        Document::Report(r) => r.report.provenance.clone(),
        _ => Provenance::default(),
    };
    let raw = RawDoc {
        format: FORMAT.to_string(),
        body: body(doc, &provenance),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gen_comatrix, gen_trunc_poly, grouplike_bundle};
    use crate::modcomod::ModuleData;

    #[test]
    fn bundle_round_trip() {
        let mut file = BundleFile::new(gen_trunc_poly(FieldSpec::prime(5).unwrap()));
        file.modules.push(ModuleData::regular(&file.bundle));
        file.comodules.push(ComoduleData::regular(&file.bundle));
        let text = serialize_document(&Document::Bundle(file.clone()));
        assert!(text.starts_with("{\n  \"format\": \"firmfrob/1\",\n  \"kind\": \"bundle\""));
        let Document::Bundle(back) = parse_document(&text).unwrap() else {
            panic!("bundle")
        };
        assert_eq!(back, file);
        assert_eq!(serialize_document(&Document::Bundle(back)), text);
    }

    #[test]
    fn other_kinds_round_trip() {
        let c = gen_comatrix(2, FieldSpec::Rationals).unwrap();
        let text = serialize_document(&Document::Coalgebra(c.clone()));
        assert!(matches!(parse_document(&text).unwrap(), Document::Coalgebra(d) if d == c));
        let b = grouplike_bundle(3, FieldSpec::Rationals);
        let m = ModuleData::regular(&b);
        let text = serialize_document(&Document::Module(m.clone()));
        assert!(matches!(parse_document(&text).unwrap(), Document::Module(d) if d == m));
    }

    #[test]
    fn malformed_inputs() {
        let b = grouplike_bundle(2, FieldSpec::Rationals);
        let text = serialize_document(&Document::Bundle(BundleFile::new(b)));
        let bad = text.replacen("\"1\"", "\"1/0\"", 1);
        assert!(matches!(parse_document(&bad), Err(Error::MalformedScalar { .. })));
        let bad = text.replace("firmfrob/1", "firmfrob/2");
        assert!(matches!(parse_document(&bad), Err(Error::Parse(_))));
        assert!(matches!(parse_document("{"), Err(Error::Parse(m)) if m.contains("line 1")));
    }
}
