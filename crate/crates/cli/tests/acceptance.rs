//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Bounds, counts and time limits are
//! pinned below.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dfoperad::bridge::{check_df_monoid, df_from_multicat, mackey_from_monoid, monoid_from_mackey, roundtrip_check};
use dfoperad::dblcat::{check_lax_functor, check_pb_functoriality, check_product_preservation, BoundedSite};
use dfoperad::fincat::corpus::{composable_triples, functor_pairs, profunctors};
use dfoperad::fincat::{
    associator, check_cell, compose_functors, compose_profunctors, hom_profunctor, is_bijective_cell, left_unitor,
    representable_of, right_unitor, CatFunctor, FinCat, ProfCell,
};
use dfoperad::finset::FinSet;
use dfoperad::monoidal::{indexed_monoidal, iso_class_monoid, Mode};
use dfoperad::multicat::{
    discrete_multicat, endomorphism_multicat, monoid_corpus, terminal_multicat, CommMonoid, Profile, SymMulticat,
};
use dfoperad::radix;
use dfoperad::report::Report;
use serde_json::{json, Value};

const C1_SITE_BOUND: usize = 4;
const C1_TIME_LIMIT: Duration = Duration::from_secs(60);
const C2_SITE_BOUND: usize = 4;
const C2_MIN_SQUARES: u64 = 100;
const C3_BOUND: usize = 3;
const C3_TIME_LIMIT: Duration = Duration::from_secs(300);
const C6_SITE_BOUND: usize = 4;
const C7_SITE_BOUND: usize = 3;
const C8_PROFUNCTORS: usize = 60;
const C8_TRIPLES: usize = 50;
const C8_FUNCTOR_PAIRS: usize = 25;
const C8_SEED: u64 = 2024;

type Verdict = Result<(bool, String, String), String>;

struct Line {
    criterion: u8,
    title: &'static str,
}

impl Line {
    fn print(&self, v: &Verdict, elapsed: Duration) -> bool {
        let (ok, detail) = match v {
            Ok((ok, detail, _)) => (*ok, detail.clone()),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} criterion {} ({}): {} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            self.criterion,
            self.title,
            detail,
            elapsed.as_secs_f64()
        );
        ok
    }
}

fn timed(f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn site(n: usize) -> Result<Arc<BoundedSite>, String> {
    BoundedSite::new(n).map(Arc::new).map_err(|e| e.to_string())
}

fn machine(reports: &[Report], extra: Value) -> String {
    serde_json::to_string(&json!({"reports": reports, "extra": extra})).expect("serializable")
}

fn criterion_1() -> Verdict {
    let required = [
        CommMonoid::cyclic(2),
        CommMonoid::cyclic(3),
        CommMonoid::cyclic(4),
        CommMonoid::klein_four(),
        CommMonoid::boolean_or(),
        CommMonoid::boolean_and(),
    ];
    let corpus = monoid_corpus();
    let missing: Vec<_> = required.iter().filter(|m| !corpus.contains(m)).map(|m| m.name().to_string()).collect();
    let s = site(C1_SITE_BOUND)?;
    let mut reports = Vec::new();
    let mut bad = Vec::new();
    for m in corpus.iter().filter(|m| m.order() <= 4) {
        let fm = mackey_from_monoid(m, s.clone());
        let r = check_df_monoid(&fm);
        let back = monoid_from_mackey(&fm).map_err(|e| e.to_string())?;
        if !r.passed() || back.table() != m.table() || back.unit() != m.unit() {
            bad.push(m.name().to_string());
        }
        reports.push(r);
    }
    let ok = missing.is_empty() && bad.is_empty();
    Ok((
        ok,
        format!(
            "{} monoids at site bound {C1_SITE_BOUND}, missing {missing:?}, mismatched {bad:?}",
            reports.len()
        ),
        machine(&reports, json!(null)),
    ))
}

/// Pullback squares over seeds of size at most `b`, one per labelling of
/// the apex: for every cospan `J -> K <- L` with a pullback of size
/// `p <= b`, `p!` squares.
fn square_oracle(b: usize) -> u64 {
    let fact = |p: usize| (1..=p as u64).product::<u64>();
    let mut total = 0;
    for k in 0..=b {
        for j in 0..=b {
            for l in 0..=b {
                let (nj, nl) = (k.pow(j as u32), k.pow(l as u32));
                for cj in 0..nj {
                    let lm = radix::decode_uniform(cj, k, j);
                    for cl in 0..nl {
                        let gm = radix::decode_uniform(cl, k, l);
                        let p: usize = (0..k)
                            .map(|c| lm.iter().filter(|&&x| x == c).count() * gm.iter().filter(|&&x| x == c).count())
                            .sum();
                        if p <= b {
                            total += fact(p);
                        }
                    }
                }
            }
        }
    }
    total
}

fn criterion_2() -> Verdict {
    let fm = mackey_from_monoid(&CommMonoid::cyclic(3), site(C2_SITE_BOUND)?);
    let r = check_df_monoid(&fm);
    let sq = r.check("mackey_squares").ok_or("no mackey_squares check")?;
    let expected = square_oracle(C2_SITE_BOUND);
    let ok = sq.failures == 0 && sq.instances > C2_MIN_SQUARES && sq.instances == expected;
    Ok((
        ok,
        format!(
            "{} squares checked (independent count {expected}), {} failures",
            sq.instances, sq.failures
        ),
        machine(std::slice::from_ref(&r), json!(null)),
    ))
}

fn c3_multicats() -> Result<Vec<SymMulticat>, String> {
    Ok(vec![
        terminal_multicat(C3_BOUND),
        discrete_multicat(&CommMonoid::cyclic(2), C3_BOUND),
        discrete_multicat(&CommMonoid::boolean_or(), C3_BOUND),
        endomorphism_multicat(&FinSet::canonical(2), C3_BOUND).map_err(|e| e.to_string())?,
    ])
}

fn criterion_3() -> Verdict {
    let t = Instant::now();
    let s = site(C3_BOUND)?;
    let mut reports = Vec::new();
    let mut bad = Vec::new();
    for m in c3_multicats()? {
        let r = roundtrip_check(Arc::new(m.clone()), s.clone()).map_err(|e| e.to_string())?;
        let both_directions = ["identity_on_objects", "hom_bijections", "comparison_invertible"]
            .iter()
            .all(|c| r.check(c).is_some_and(|o| o.passed()))
            && ["forward_", "backward_", "comparison_"]
                .iter()
                .all(|t| r.checks.iter().any(|c| c.check.starts_with(t)));
        if !r.passed() || !both_directions {
            bad.push(m.name().to_string());
        }
        reports.push(r);
    }
    let elapsed = t.elapsed();
    let ok = bad.is_empty() && elapsed < C3_TIME_LIMIT;
    Ok((
        ok,
        format!(
            "{} round trips at arity/site bound {C3_BOUND}, failing {bad:?}, limit {}s",
            reports.len(),
            C3_TIME_LIMIT.as_secs()
        ),
        machine(&reports, json!(null)),
    ))
}

/// End({0,1}) with the transposition acting trivially on the first
/// projection.
fn transposed() -> Result<SymMulticat, String> {
    let m = endomorphism_multicat(&FinSet::canonical(2), C3_BOUND)
        .and_then(|m| m.tabulate())
        .map_err(|e| e.to_string())?;
    let first = radix::encode_uniform(&[0, 0, 1, 1], 2);
    m.with_action_entry(&Profile::new(vec![0, 0], 0), &[1, 0], first, first)
        .map_err(|e| e.to_string())
}

fn criterion_4() -> Verdict {
    let s = site(C3_BOUND)?;
    let err = |e: dfoperad::dblcat::DblCatError| e.to_string();
    let end = endomorphism_multicat(&FinSet::canonical(2), C3_BOUND).map_err(|e| e.to_string())?;
    let d = df_from_multicat(Arc::new(end), s.clone()).map_err(|e| e.to_string())?;
    let lax = check_lax_functor(&d).map_err(err)?;
    let pb = check_pb_functoriality(&d).map_err(err)?;
    let instances = |r: &Report| r.checks.iter().map(|c| c.instances).sum::<u64>();
    let bad = df_from_multicat(Arc::new(transposed()?), s).map_err(|e| e.to_string())?;
    let bad_lax = check_lax_functor(&bad).map_err(err)?;
    let bad_pb = check_pb_functoriality(&bad).map_err(err)?;
    let witnesses = bad_lax.witnesses().count() + bad_pb.witnesses().count();
    let ok = lax.passed() && pb.passed() && witnesses >= 1;
    Ok((
        ok,
        format!(
            "End(2): {} lax and {} pb instances, {} violations; transposed entry: {} failures, {witnesses} witnesses",
            instances(&lax),
            instances(&pb),
            lax.failures() + pb.failures(),
            bad_lax.failures() + bad_pb.failures()
        ),
        machine(&[lax, pb], json!({"injected_failures": bad_lax.failures() + bad_pb.failures()})),
    ))
}

fn criterion_5() -> Verdict {
    let s = site(C3_BOUND)?;
    let mut reports = Vec::new();
    let mut bad = Vec::new();
    let mut sums = 0;
    for m in c3_multicats()? {
        let d = df_from_multicat(Arc::new(m.clone()), s.clone()).map_err(|e| e.to_string())?;
        let r = check_product_preservation(&d).map_err(|e| e.to_string())?;
        let cmp = r.check("sum_comparison").ok_or("no sum_comparison check")?;
        sums += cmp.instances;
        if !r.passed() || cmp.instances == 0 {
            bad.push(m.name().to_string());
        }
        reports.push(r);
    }
    Ok((
        bad.is_empty(),
        format!("{} operads, {sums} sum comparisons at bound {C3_BOUND}, failing {bad:?}", reports.len()),
        machine(&reports, json!(null)),
    ))
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dfoperad"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn chain_file(dir: &Path) -> Result<String, String> {
    let path = dir.join("chain2.json").display().to_string();
    let (code, _) = cli(&["gen", "category", "chain:2", "--out", &path])?;
    if code != 0 {
        return Err(format!("gen exited {code}"));
    }
    Ok(path)
}

fn check_passed(report: &Value, check: &str) -> Option<(bool, u64)> {
    report["checks"]
        .as_array()?
        .iter()
        .find(|c| c["check"] == check)
        .map(|c| (c["failures"] == 0, c["instances"].as_u64().unwrap_or(0)))
}

fn criterion_6(dir: &Path) -> Verdict {
    let chain = chain_file(dir)?;
    let bound = C6_SITE_BOUND.to_string();
    let s = site(C6_SITE_BOUND)?;
    let (maps, squares) = (s.map_count() as u64, s.square_count() as u64);
    let run = |mode: &str| -> Result<(i32, Value), String> {
        let (code, out) = cli(&[
            "check", "monoidal", &chain, "--mode", mode, "--fibration", "--site-bound", &bound, "--format", "json",
        ])?;
        Ok((code, serde_json::from_str(&out).map_err(|e| e.to_string())?))
    };
    let (sum_code, sums) = run("cocartesian")?;
    let (prod_code, prods) = run("cartesian")?;
    let shape = |v: &Value| -> Option<(bool, bool, bool)> {
        let r = v["reports"].as_array()?;
        let (rep, n) = check_passed(&r[0], "find_representing_functor")?;
        let (bc, m) = check_passed(&r[1], "beck_chevalley")?;
        let (tw, _) = check_passed(&r[1], "tensor_witnesses")?;
        let (fib, _) = check_passed(&r[2], "corepresented_by_reindexing")?;
        Some((rep && n == maps, bc && tw && m == squares, fib))
    };
    let expected_map = json!({"source": "2", "target": "1", "map": ["1", "1"]});
    let witnessed = prods["reports"][2]["checks"][0]["witnesses"].as_array().is_some_and(|ws| {
        ws.iter().any(|w| {
            let o = &w["obstruction"]["not_isomorphic"];
            w["map"] == expected_map && o["x"] == "(0,1)" && o["y"] == "(0)"
        })
    });
    let s_shape = shape(&sums).ok_or("malformed sums report")?;
    let p_shape = shape(&prods).ok_or("malformed products report")?;
    let ok = s_shape == (true, true, true)
        && sum_code == 0
        && p_shape == (true, true, false)
        && witnessed
        && prod_code == 1;
    Ok((
        ok,
        format!(
            "site bound {C6_SITE_BOUND}: sums (representable, BC, fibration) = {s_shape:?} exit {sum_code}; \
             products = {p_shape:?} exit {prod_code}, witness f:2->1 X=(0,1) Y=(0) found: {witnessed}"
        ),
        String::new(),
    ))
}

fn criterion_7() -> Verdict {
    let s = site(C7_SITE_BOUND)?;
    let (d, ws) = indexed_monoidal(Arc::new(FinCat::chain(2)), Mode::Sums, s.clone()).map_err(|e| e.to_string())?;
    let fm = iso_class_monoid(&d, &ws, dfoperad::fincat::DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let r = check_df_monoid(&fm);
    let want = mackey_from_monoid(&CommMonoid::boolean_or(), s.clone());
    let sizes = (0..=s.bound()).all(|n| fm.size(n) == want.size(n));
    let differing = (0..s.map_count())
        .filter(|&f| fm.restrict(f) != want.restrict(f) || fm.transfer(f) != want.transfer(f))
        .count();
    let ok = r.passed() && sizes && differing == 0;
    Ok((
        ok,
        format!(
            "site bound {C7_SITE_BOUND}: check {}, sizes equal {sizes}, {differing} of {} maps differ",
            if r.passed() { "passes" } else { "fails" },
            s.map_count()
        ),
        machine(std::slice::from_ref(&r), fm.to_json()),
    ))
}

/// `rep(F);rep(G) -> rep(F;G)`, `[(a, b)] ↦ b ∘ G(a)`.
fn canonical_representable_iso(f: &CatFunctor, g: &CatFunctor) -> Result<ProfCell, String> {
    let rf = Arc::new(representable_of(f));
    let rg = Arc::new(representable_of(g));
    let comp = compose_profunctors(&rf, &rg).map_err(|e| e.to_string())?;
    let fg = compose_functors(f, g).map_err(|e| e.to_string())?;
    let target = Arc::new(representable_of(&fg));
    let (b, c) = (f.target().clone(), g.target().clone());
    ProfCell::from_fn(
        Arc::new(comp.profunctor.clone()),
        target,
        CatFunctor::identity(f.source().clone()),
        CatFunctor::identity(c.clone()),
        |x, z, k| {
            let (y, a, e) = comp.rep(x, z, k);
            let arrow_a = b.hom(f.obj(x), y)[a];
            let arrow_e = c.hom(g.obj(y), z)[e];
            c.hom_pos(c.comp(arrow_e, g.arr(arrow_a)))
        },
    )
    .map_err(|e| e.to_string())
}

fn criterion_8() -> Verdict {
    let mut unit_ok = 0;
    let ps = profunctors(C8_SEED, C8_PROFUNCTORS);
    for phi in &ps {
        let hl = Arc::new(hom_profunctor(phi.source()));
        let hr = Arc::new(hom_profunctor(phi.target()));
        let lu = left_unitor(&compose_profunctors(&hl, phi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let ru = right_unitor(&compose_profunctors(phi, &hr).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if [lu, ru].iter().all(|c| check_cell(c).is_ok() && is_bijective_cell(c)) {
            unit_ok += 1;
        }
    }
    let mut assoc_ok = 0;
    let triples = composable_triples(C8_SEED, C8_TRIPLES);
    for [a, b, c] in &triples {
        let e = |e: dfoperad::fincat::FinCatError| e.to_string();
        let ab = compose_profunctors(a, b).map_err(e)?;
        let ab_c = compose_profunctors(&Arc::new(ab.profunctor.clone()), c).map_err(e)?;
        let bc = compose_profunctors(b, c).map_err(e)?;
        let a_bc = compose_profunctors(a, &Arc::new(bc.profunctor.clone())).map_err(e)?;
        let iso = associator(&ab, &ab_c, &bc, &a_bc).map_err(e)?;
        if check_cell(&iso).is_ok() && is_bijective_cell(&iso) {
            assoc_ok += 1;
        }
    }
    let mut rep_ok = 0;
    let pairs = functor_pairs(C8_SEED, C8_FUNCTOR_PAIRS);
    for (f, g) in &pairs {
        let iso = canonical_representable_iso(f, g)?;
        if check_cell(&iso).is_ok() && is_bijective_cell(&iso) {
            rep_ok += 1;
        }
    }
    let ok = ps.len() >= 50
        && unit_ok == ps.len()
        && assoc_ok == triples.len()
        && pairs.len() >= 20
        && rep_ok == pairs.len();
    Ok((
        ok,
        format!(
            "unit laws {unit_ok}/{}, associativity {assoc_ok}/{}, representables {rep_ok}/{}",
            ps.len(),
            triples.len(),
            pairs.len()
        ),
        serde_json::to_string(&json!([unit_ok, assoc_ok, rep_ok])).expect("serializable"),
    ))
}

fn criterion_9(dir: &Path, first: &[(u8, String)]) -> Verdict {
    let rerun: Vec<(u8, Verdict)> = vec![(2, criterion_2()), (7, criterion_7()), (8, criterion_8())];
    let mut differing = Vec::new();
    for (n, v) in rerun {
        let again = v?.2;
        match first.iter().find(|(m, _)| *m == n) {
            Some((_, before)) if *before == again => {}
            _ => differing.push(format!("criterion {n}")),
        }
    }
    let chain = chain_file(dir)?;
    let z3 = dir.join("z3.json").display().to_string();
    cli(&["gen", "monoid", "cyclic:3", "--out", &z3])?;
    let commands: [Vec<&str>; 2] = [
        vec!["check", "monoidal", &chain, "--mode", "cartesian", "--fibration", "--site-bound", "3", "--format", "json"],
        vec!["check", "monoid", &z3, "--site-bound", "3", "--format", "json"],
    ];
    for args in &commands {
        let (a, b) = (cli(args)?, cli(args)?);
        if a != b {
            differing.push(args.join(" "));
        }
    }
    Ok((
        differing.is_empty(),
        format!("reran criteria 2, 7, 8 and two CLI reports; differing: {differing:?}"),
        String::new(),
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut all = true;
    let mut machine_reports = Vec::new();
    let mut report = |n: u8, title: &'static str, (v, t): (Verdict, Duration)| {
        let ok = Line { criterion: n, title }.print(&v, t);
        if let Ok((_, _, m)) = v {
            machine_reports.push((n, m));
        }
        ok
    };
    let (v1, t1) = timed(criterion_1);
    let v1 = v1.map(|(ok, d, m)| (ok && t1 < C1_TIME_LIMIT, format!("{d}, limit {}s", C1_TIME_LIMIT.as_secs()), m));
    all &= report(1, "monoid round trip", (v1, t1));
    all &= report(2, "Mackey square coverage", timed(criterion_2));
    all &= report(3, "operad round trip", timed(criterion_3));
    all &= report(4, "lax coherence and pasting", timed(criterion_4));
    all &= report(5, "product preservation", timed(criterion_5));
    all &= report(6, "monoidal/fibration discrimination", timed(|| criterion_6(dir.path())));
    all &= report(7, "iso-class collapse", timed(criterion_7));
    all &= report(8, "profunctor algebra", timed(criterion_8));
    let first = machine_reports.clone();
    let (v9, t9) = timed(|| criterion_9(dir.path(), &first));
    all &= Line {
        criterion: 9,
        title: "determinism",
    }
    .print(&v9, t9);
    if !all {
        std::process::exit(1);
    }
}
