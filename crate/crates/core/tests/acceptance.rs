//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use firmfrob::algcore::{check_firm_algebra, check_nondegenerate};
use firmfrob::coalgcore::cofrobenius_maps;
use firmfrob::error::Error;
use firmfrob::exactla::{FieldSpec, LinMap, Vector};
use firmfrob::families::{
    gen_comatrix, gen_graded_smash, gen_grouplike, gen_grouplike_integers, graded_from_smash,
    grouplike_local_units, random_graded_module, rigidity_check, smash_from_graded, window_check,
    GradedAlgebraData, GroupTable, GrouplikeBundle, IndexSet,
};
use firmfrob::frobcore::{
    build_from_cosep, casimir_from_delta, cosep_solve, delta_from_casimir, multiplier_to_element,
    section_check, verify_multiplier_law, FrobeniusBundle, Side,
};
use firmfrob::modcomod::samples::{sample_morphisms, standard_samples};
use firmfrob::modcomod::{
    check_firm_module_over, induced_action, induced_coaction, lemma_aux_check, morphism_transport_check,
    verify_roundtrips, ModuleData,
};
use firmfrob::report::Verdict;
use firmfrob::shell::{serialize_document, BundleFile, Document};
use firmfrob::suite::{run_suite, SuiteCheck, SuiteOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fields() -> [FieldSpec; 4] {
    [q(), fp(2), fp(3), fp(5)]
}

/// Grouplike bundles on every group of order 1 to 5, over each field.
fn grouplike_fixtures() -> Vec<(String, FrobeniusBundle)> {
    let mut tables: Vec<(String, GroupTable)> = (1..=5)
        .map(|n| (format!("Z{n}"), GroupTable::cyclic(n).unwrap()))
        .collect();
    tables.push(("V4".into(), GroupTable::new(klein_table()).unwrap()));
    let mut out = Vec::new();
    for (name, g) in tables {
        for f in fields() {
            match gen_grouplike(&IndexSet::Group(g.clone()), f) {
                GrouplikeBundle::Finite(b) => out.push((format!("{name}/{f}"), b)),
                GrouplikeBundle::LocallyFinite(_) => unreachable!("finite group"),
            }
        }
    }
    out
}

fn roundtrip_fixtures() -> Vec<(String, FrobeniusBundle)> {
    let mut out = grouplike_fixtures();
    out.push(("DUAL2".into(), dual2()));
    out.push(("MC2".into(), mc2()));
    out
}

fn crit1() -> Outcome {
    let start = Instant::now();
    let fixtures = grouplike_fixtures();
    for (name, b) in &fixtures {
        let n = b.dim();
        let f = b.field();
        // μ(p_g⊗p_h) = δ_gh p_g, Δ(p_g) = p_g⊗p_g, ε = 1.
        let mu = dense_mul(b.algebra());
        let de = dense_comul(b.coalgebra());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let want = if i == j && j == k { f.one() } else { f.zero() };
                    ensure(mu[i][j][k] == want && de[i][j][k] == want, || {
                        format!("{name}: structure constant ({i},{j},{k})")
                    })?;
                }
            }
            ensure(b.coalgebra().counit().get(i).is_one(), || format!("{name}: counit"))?;
        }
        let opts = SuiteOptions {
            max_subset: 2,
            local_units: Some(grouplike_local_units(n, f, 2)),
            ..SuiteOptions::default()
        };
        let rep = run_suite(b, &SuiteCheck::AXIOMS, &opts);
        ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{} bundles in {elapsed:.2?}", fixtures.len()))
}

fn crit2() -> Outcome {
    let mut counted = (0, 0, 0);
    for (seed, (name, b)) in roundtrip_fixtures().into_iter().enumerate() {
        let s = standard_samples(&b, seed as u64, 20, 6).map_err(|e| format!("{name}: {e}"))?;
        ensure(s.modules[0] == ModuleData::regular(&b), || format!("{name}: regular module missing"))?;
        let rep = verify_roundtrips(&b, &s);
        ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
        for n in &s.comodules {
            let back = induced_coaction(&b, &induced_action(&b, n).unwrap()).unwrap();
            ensure(&back == n, || format!("{name}: comodule round trip differs"))?;
        }
        for m in &s.modules {
            let back = induced_action(&b, &induced_coaction(&b, m).unwrap()).unwrap();
            ensure(&back == m, || format!("{name}: module round trip differs"))?;
        }
        let morphisms = sample_morphisms(&b, &s, seed as u64 + 1000, 20);
        ensure(morphisms.len() == 20, || format!("{name}: {} morphisms", morphisms.len()))?;
        for m in &morphisms {
            let rep = morphism_transport_check(&b, &m.map, &m.src, &m.dst);
            ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
        }
        counted.0 += 1;
        counted.1 += s.modules.len() + s.comodules.len();
        counted.2 += morphisms.len();
    }
    Ok(format!(
        "{} bundles, {} (co)modules, {} morphisms",
        counted.0, counted.1, counted.2
    ))
}

/// Componentwise product on `R ⊗ R`.
fn tensor_product(b: &FrobeniusBundle, x: &Vector, y: &Vector) -> Vector {
    let n = b.dim();
    let f = b.field();
    let mu = dense_mul(b.algebra());
    let mut out = vec![f.zero(); n * n];
    for (xi, xc) in x.to_sparse() {
        for (yi, yc) in y.to_sparse() {
            let (a, bb) = (xi / n, xi % n);
            let (c, d) = (yi / n, yi % n);
            let coef = &xc * &yc;
            for k in 0..n {
                if mu[a][c][k].is_zero() {
                    continue;
                }
                for l in 0..n {
                    if !mu[bb][d][l].is_zero() {
                        let t = &mu[a][c][k] * &mu[bb][d][l];
                        out[k * n + l].add_mul(&coef, &t);
                    }
                }
            }
        }
    }
    Vector::new(f, out).unwrap()
}

fn crit3() -> Outcome {
    for (name, b) in [("G2Q", g2q()), ("DUAL2", dual2())] {
        let n = b.dim();
        let f = b.field();
        let alg = b.algebra();
        let mu = dense_mul(alg);
        let de = dense_comul(b.coalgebra());
        let pair = casimir_from_delta(&b).map_err(|e| format!("{name}: {e}"))?;
        // λ(s⊗r) = Σ r₁s ⊗ r₂ and ρ(s⊗r) = Σ s₁ ⊗ r s₂.
        for s in 0..n {
            for r in 0..n {
                let mut lam = vec![f.zero(); n * n];
                let mut rho = vec![f.zero(); n * n];
                for x in 0..n {
                    for y in 0..n {
                        for k in 0..n {
                            lam[k * n + y].add_mul(&de[r][x][y], &mu[x][s][k]);
                            rho[x * n + k].add_mul(&de[s][x][y], &mu[r][y][k]);
                        }
                    }
                }
                let col = s * n + r;
                ensure(pair.lambda.column_vector(col).entries() == lam.as_slice(), || {
                    format!("{name}: λ at ({s},{r})")
                })?;
                ensure(pair.rho.column_vector(col).entries() == rho.as_slice(), || {
                    format!("{name}: ρ at ({s},{r})")
                })?;
            }
        }
        let law = verify_multiplier_law(alg, &pair);
        ensure(law.passed(), || format!("{name}: {}", law.find_failure()))?;
        for x in 0..n * n {
            for y in 0..n * n {
                let (bx, by) = (Vector::basis(f, n * n, x), Vector::basis(f, n * n, y));
                let lhs = tensor_product(&b, &pair.rho.apply(&bx).unwrap(), &by);
                let rhs = tensor_product(&b, &bx, &pair.lambda.apply(&by).unwrap());
                ensure(lhs == rhs, || format!("{name}: multiplier law at ({x},{y})"))?;
            }
        }
        let (coalg, rep) =
            delta_from_casimir(alg, &pair, b.coalgebra().counit()).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
        ensure(coalg.comul() == b.coalgebra().comul(), || format!("{name}: Δ′ ≠ Δ"))?;
        let b2 = FrobeniusBundle::new(alg.clone(), coalg).unwrap();
        let pair2 = casimir_from_delta(&b2).map_err(|e| format!("{name}: {e}"))?;
        ensure(pair2 == pair, || format!("{name}: e′ ≠ e"))?;
        let eps = b.coalgebra().counit();
        for r in 0..n {
            let br = Vector::basis(f, n, r);
            let left = multiplier_to_element(alg, &pair, r, Side::Left)
                .map_err(|e| e.to_string())?
                .ok_or(format!("{name}: (r⊗1)e outside R⊗R"))?;
            ensure(counit_first(eps, &left) == br, || format!("{name}: (ε⊗id)((r⊗1)e) ≠ r at {r}"))?;
            let right = multiplier_to_element(alg, &pair, r, Side::Right)
                .map_err(|e| e.to_string())?
                .ok_or(format!("{name}: e(1⊗r) outside R⊗R"))?;
            ensure(counit_second(eps, &right) == br, || format!("{name}: (id⊗ε)(e(1⊗r)) ≠ r at {r}"))?;
        }
    }
    Ok("G2Q, DUAL2".into())
}

fn cosep_full(name: &str, c: &firmfrob::coalgcore::CoalgebraData) -> Result<FrobeniusBundle, String> {
    let nu = cosep_solve(c)
        .map_err(|e| format!("{name}: {e}"))?
        .ok_or(format!("{name}: no retraction"))?;
    let n = c.dim();
    ensure(nu.compose(c.comul()).unwrap() == LinMap::identity(c.field(), n), || {
        format!("{name}: ν∘Δ ≠ id")
    })?;
    let b = build_from_cosep(c, &nu).map_err(|e| format!("{name}: {e}"))?;
    let rep = run_suite(&b, &SuiteCheck::ALL, &SuiteOptions::default());
    ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
    let sec = section_check(&b, b.coalgebra().comul());
    ensure(sec.passed(), || format!("{name}: {}", sec.find_failure()))?;
    Ok(b)
}

fn crit4() -> Outcome {
    let mut timing = Duration::ZERO;
    for n in [2, 3] {
        let start = Instant::now();
        let c = gen_comatrix(n, q()).unwrap();
        cosep_full(&format!("MC{n}"), &c)?;
        if n == 3 {
            timing = start.elapsed();
            ensure(timing < Duration::from_secs(10), || format!("MC3 took {timing:?}"))?;
        }
    }
    let fixtures = grouplike_fixtures();
    for (name, b) in &fixtures {
        cosep_full(name, b.coalgebra())?;
    }
    let none = cosep_solve(dual2().coalgebra()).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || "DUAL2 coalgebra reported coseparable".into())?;
    Ok(format!("MC2, MC3 ({timing:.2?}), {} grouplike; DUAL2 none", fixtures.len()))
}

fn crit5() -> Outcome {
    let mut aux = 0;
    for (seed, (name, b)) in roundtrip_fixtures().into_iter().enumerate() {
        let s = standard_samples(&b, seed as u64, 20, 6).map_err(|e| e.to_string())?;
        for c in &s.comodules {
            let rep = lemma_aux_check(&b, c);
            ensure(rep.passed(), || format!("{name}: {}", rep.find_failure()))?;
            aux += 1;
        }
    }
    let mut caught = 0;
    for (index, (name, b)) in [("G2Q", g2q()), ("DUAL2", dual2()), ("MC2", mc2())]
        .into_iter()
        .enumerate()
    {
        let n = b.dim();
        let f = b.field();
        let opts = SuiteOptions {
            samples: 4,
            morphisms: 4,
            local_units: Some(fixture_units(&b, 2)),
            ..SuiteOptions::default()
        };
        let base = run_suite(&b, &SuiteCheck::ALL, &opts);
        ensure(base.passed(), || format!("{name}: fixture fails: {}", base.find_failure()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
        for trial in 0..50 {
            let slots = 2 * n * n * n + n;
            let pick = rng.gen_range(0..slots);
            let slot = if pick < n * n * n {
                Slot::Mul(pick / (n * n), (pick / n) % n, pick % n)
            } else if pick < 2 * n * n * n {
                let p = pick - n * n * n;
                Slot::Comul(p / (n * n), (p / n) % n, p % n)
            } else {
                Slot::Counit(pick - 2 * n * n * n)
            };
            let delta = loop {
                let d = f.from_i64(rng.gen_range(-3..=3));
                if !d.is_zero() {
                    break d;
                }
            };
            let mutated = mutate(&b, slot, &delta);
            let rep = run_suite(&mutated, &SuiteCheck::ALL, &opts);
            ensure(has_witnessed_failure(&rep), || {
                format!("{name}: mutation {trial} {slot:?} by {delta} not detected")
            })?;
            caught += 1;
        }
    }
    Ok(format!("{aux} comodules pass the auxiliary identities; {caught}/150 mutations caught"))
}

fn crit6() -> Outcome {
    let lf = gen_grouplike_integers(fp(5));
    for w in 1..=5 {
        let b = lf.window_bundle(w).map_err(|e| e.to_string())?;
        ensure(b.dim() == 2 * w + 1, || format!("window {w} has dimension {}", b.dim()))?;
        let rep = window_check(&lf, w, &SuiteCheck::ALL, &SuiteOptions::default());
        ensure(rep.verdict == Verdict::WindowVerified, || format!("window {w}: {}", rep.find_failure()))?;
        ensure(rep.find("local-units").is_some_and(|r| r.passed()), || {
            format!("window {w}: local units")
        })?;
        let rig = rigidity_check(&lf, w);
        ensure(rig.passed(), || format!("rigidity at {w}: {}", rig.find_failure()))?;
    }
    let a = GradedAlgebraData::group_algebra(GroupTable::cyclic(3).unwrap(), q()).unwrap();
    let s = gen_graded_smash(&a, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    let mut attempts = 0;
    while done < 10 {
        attempts += 1;
        ensure(attempts < 1000, || "could not sample graded modules".into())?;
        let Some(m) = random_graded_module(&a, 6, &mut rng).map_err(|e| e.to_string())? else {
            continue;
        };
        ensure(m.module.dim() <= 6, || "graded module too large".into())?;
        let sm = smash_from_graded(&s, &m).map_err(|e| e.to_string())?;
        let firm = check_firm_module_over(&s.algebra, &sm);
        ensure(firm.passed(), || firm.find_failure())?;
        let back = graded_from_smash(&s, &sm).map_err(|e| e.to_string())?;
        ensure(back == m, || format!("graded module {done} does not round-trip"))?;
        ensure(smash_from_graded(&s, &back).unwrap() == sm, || "smash module does not round-trip".into())?;
        done += 1;
    }
    Ok("windows 1..=5 window-verified over F5, rigidity, 10 graded modules".into())
}

fn crit7() -> Outcome {
    let mut bundles = roundtrip_fixtures();
    bundles.push(("MC3".into(), cosep_bundle(3, q())));
    bundles.push(("G2Q".into(), g2q()));
    let mut checked = 0;
    for (name, b) in &bundles {
        if !check_nondegenerate(b.algebra()).passed() {
            continue;
        }
        let n = b.dim();
        let mu = dense_mul(b.algebra());
        let eps = b.coalgebra().counit();
        let maps = cofrobenius_maps(b).map_err(|e| format!("{name}: {e}"))?;
        ensure(maps.report.passed(), || format!("{name}: {}", maps.report.find_failure()))?;
        let mut rank_ok = true;
        for c in 0..n {
            for d in 0..n {
                let mut r = b.field().zero();
                let mut l = b.field().zero();
                for k in 0..n {
                    r.add_mul(&mu[c][d][k], eps.get(k));
                    l.add_mul(&mu[d][c][k], eps.get(k));
                }
                rank_ok &= maps.right.entry(d, c) == r && maps.left.entry(d, c) == l;
            }
        }
        ensure(rank_ok, || format!("{name}: θ differs from ε(c·−), ε(−·c)"))?;
        ensure(firmfrob::exactla::rank(&maps.right) == n && firmfrob::exactla::rank(&maps.left) == n, || {
            format!("{name}: θ not injective")
        })?;
        checked += 1;
    }
    // ε(c d₁) ε(c′ d₂) = ε(c′ c d) on every basis triple of G2Q.
    let b = g2q();
    let n = b.dim();
    let mu = dense_mul(b.algebra());
    let de = dense_comul(b.coalgebra());
    let eps = b.coalgebra().counit();
    let e_of = |i: usize, j: usize| {
        let mut s = b.field().zero();
        for k in 0..n {
            s.add_mul(&mu[i][j][k], eps.get(k));
        }
        s
    };
    for c in 0..n {
        for c2 in 0..n {
            for d in 0..n {
                let mut lhs = b.field().zero();
                for x in 0..n {
                    for y in 0..n {
                        let t = &e_of(c, x) * &e_of(c2, y);
                        lhs.add_mul(&de[d][x][y], &t);
                    }
                }
                let mut rhs = b.field().zero();
                for k in 0..n {
                    let t = &mu[c2][c][k] * &e_of(k, d);
                    rhs = &rhs + &t;
                }
                ensure(lhs == rhs, || format!("G2Q anti-multiplicativity at ({c},{c2},{d})"))?;
            }
        }
    }
    Ok(format!("{checked} bundles; G2Q anti-multiplicative on all triples"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_firmfrob"))
        .args(args)
        .output()
        .expect("run firmfrob");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap_or(-1), text)
}

fn crit8() -> Outcome {
    let b = nil();
    let nd = check_nondegenerate(b.algebra());
    ensure(nd.verdict == Verdict::Fail && nd.witness.is_some(), || "NIL non-degeneracy".into())?;
    let (firm, _) = check_firm_algebra(b.algebra());
    ensure(firm.verdict == Verdict::Fail && firm.witness.is_some(), || "NIL firmness".into())?;

    let g = g2q();
    match induced_coaction(&g, &ModuleData::zero(&g, 2)) {
        Err(Error::Refused(r)) => ensure(has_witnessed_failure(&r), || "zero module refusal lacks witness".into())?,
        other => return Err(format!("zero module not refused: {other:?}")),
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |s: &str| dir.path().join(s).to_string_lossy().into_owned();
    let write = |p: &str, d: &Document| std::fs::write(path(p), serialize_document(d)).unwrap();
    write("nil.json", &Document::Bundle(BundleFile::new(nil())));
    write("g2q.json", &Document::Bundle(BundleFile::new(g2q())));
    write("zero.json", &Document::Module(ModuleData::zero(&g, 2)));
    for (args, label) in [
        (vec!["check", &path("nil.json"), "--suite", "firmness"], "check NIL"),
        (vec!["casimir", &path("nil.json"), &path("cas.json")], "casimir NIL"),
        (
            vec!["convert", "mod-to-comod", &path("zero.json"), &path("g2q.json"), &path("out.json")],
            "convert zero module",
        ),
    ] {
        let (code, text) = run_cli(&args);
        ensure(code == 1, || format!("{label}: exit {code}"))?;
        ensure(text.contains(": fail (") && text.contains(" at ["), || format!("{label}: no witness in {text}"))?;
    }
    ensure(!dir.path().join("out.json").exists(), || "refused conversion wrote output".into())?;
    Ok("NIL, zero module; CLI exit 1 with witnesses".into())
}

trait FindFailure {
    fn find_failure(&self) -> String;
}

impl FindFailure for firmfrob::report::CheckReport {
    /// The deepest non-passing node, for failure messages.
    fn find_failure(&self) -> String {
        match self.children.iter().find(|c| !c.passed()) {
            Some(c) => c.find_failure(),
            None => self.to_string(),
        }
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("axiom suite on grouplike bundles", crit1),
        ("module/comodule round trips and morphism transport", crit2),
        ("Casimir reconstruction", crit3),
        ("coseparable coalgebras", crit4),
        ("auxiliary identities and mutation detection", crit5),
        ("locally-finite windows and graded smash modules", crit6),
        ("co-Frobenius maps", crit7),
        ("negative controls", crit8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: pass: {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
