//! Acceptance criteria, one line per criterion. Runs as a plain program so
//! the report is always printed; exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidconv::convolution::identity_check_counts;
use rigidconv::corpus::{corpus, corpus_entry, CorpusKind};
use rigidconv::probes::{nilpotency_sweep, pcurvature, PCurvatureStatus};
use rigidconv::rational::{int, rat};
use rigidconv::{
    equivalence_harness, katz_reduce, replay, round_trip_check, Error, FuchsianSystem,
    HarnessConfig, MatQ, Rational,
};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_rigidconv");

struct Verdict {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict {
        ok: false,
        detail: detail.into(),
    }
}

fn temp_file(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "rigidconv-acceptance-{}-{tag}.json",
        std::process::id()
    ));
    std::fs::write(&path, contents).unwrap();
    path
}

fn cli_with_threads(args: &[&str], threads: &str) -> (i32, String) {
    let out = Command::new(BIN)
        .args(args)
        .env("RIGIDCONV_THREADS", threads)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, stdout) = cli_with_threads(args, "0");
    if code != 0 {
        return Err(format!("`{}` exited with {code}", args.join(" ")));
    }
    serde_json::from_str(&stdout).map_err(|e| e.to_string())
}

fn example_file(name: &str) -> PathBuf {
    let (_, text) = cli_with_threads(&["examples", name], "0");
    temp_file(&name.replace('/', "_"), &text)
}

fn within(elapsed: Duration, limit: Duration, v: Verdict) -> Verdict {
    if v.ok && elapsed >= limit {
        fail(format!(
            "{} but took {elapsed:.2?} (limit {limit:?})",
            v.detail
        ))
    } else {
        Verdict {
            ok: v.ok,
            detail: format!("{} [{elapsed:.2?}]", v.detail),
        }
    }
}

fn criterion_1() -> Result<Verdict, String> {
    let half = cli_json(&["hbound", "1/2"])?;
    let sixth = cli_json(&["hbound", "1/6"])?;
    let v_half = half["value"].as_f64().ok_or("missing value")?;
    let v_sixth = sixth["value"].as_f64().ok_or("missing value")?;
    let want_half = 2.0 * 2f64.ln();
    let want_sixth = 2.0 * 2f64.ln() + 1.5 * 3f64.ln();
    let ok = half["terms"] == json!([[2, "2"]])
        && (v_half - want_half).abs() < 1e-9
        && (v_sixth - want_sixth).abs() < 1e-9;
    let detail = format!(
        "H(1/2) = {v_half:.9}, H(1/6) = {v_sixth:.9}, terms {}",
        half["terms"]
    );
    Ok(if ok { pass(detail) } else { fail(detail) })
}

fn criterion_2() -> Result<Verdict, String> {
    let worked = temp_file(
        "worked",
        r#"{"rank":1,"points":["0","1"],"residues":[[["1/2"]],[["1/3"]]]}"#,
    );
    let w = worked.to_str().unwrap();
    let up = cli_json(&["mc", "--lambda", "1/6", w])?;
    let expect_up = json!([[["2/3", "1/3"], ["0", "0"]], [["0", "0"], ["1/2", "1/2"]]]);
    let down = cli_json(&["mc", "--lambda", "-5/6", w])?;
    let down_sys = rigidconv_cli::SystemDocument::from_value(&down)
        .map_err(|e| e.to_string())?
        .system;
    let target = FuchsianSystem::new(
        1,
        vec![int(0), int(1)],
        vec![MatQ::scalar(1, &rat(-1, 3)), MatQ::scalar(1, &rat(-1, 2))],
    )
    .unwrap();
    let down_ok =
        down_sys.rank() == 1 && down_sys.is_isomorphic(&target).map_err(|e| e.to_string())?;
    let degenerate = temp_file(
        "degenerate",
        r#"{"rank":1,"points":["0","1"],"residues":[[["0"]],[["1/3"]]]}"#,
    );
    let pruned = cli_json(&["mc", "--lambda", "1/6", degenerate.to_str().unwrap()])?;
    let kummer = json!({"rank": 1, "points": ["1"], "residues": [[["1/2"]]]});
    let checks = [
        up["residues"] == expect_up && up["rank"] == json!(2),
        down_ok,
        pruned == kummer,
    ];
    let detail = format!(
        "mc_1/6 exact: {}, mc_-5/6 conjugate: {}, prune to kummer(1,1/2): {}",
        checks[0], checks[1], checks[2]
    );
    Ok(if checks.iter().all(|&c| c) {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn random_irreducible_rank_two(rng: &mut ChaCha8Rng) -> FuchsianSystem {
    let entry = |rng: &mut ChaCha8Rng| -> Rational {
        let dens = [1, 2, 3];
        rat(rng.gen_range(-3..=3), dens[rng.gen_range(0..3)])
    };
    loop {
        let residues: Vec<MatQ> = (0..3)
            .map(|_| MatQ::new(2, 2, (0..4).map(|_| entry(rng)).collect()).unwrap())
            .collect();
        let f = FuchsianSystem::new(2, vec![int(0), int(1), int(3)], residues).unwrap();
        if f.residues().iter().all(|a| a.nullity() == 0) && f.is_absolutely_irreducible() {
            return f;
        }
    }
}

fn criterion_3() -> Result<Verdict, String> {
    let lambdas = [rat(1, 5), rat(1, 7), rat(2, 9)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for i in 0..50 {
        let f = random_irreducible_rank_two(&mut rng);
        match round_trip_check(&f, &lambdas[i % 3]) {
            Ok(true) => passed += 1,
            Ok(false) => failed += 1,
            Err(Error::PreconditionSkipped(_)) => skipped += 1,
            Err(e) => return Err(format!("system {i}: {e}")),
        }
    }
    let detail = format!("{passed} isomorphic, {failed} not, {skipped} skipped of 50");
    Ok(if failed == 0 && skipped < 5 {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn criterion_4() -> Result<Verdict, String> {
    let (checks, violations) = identity_check_counts();
    let detail = format!("{checks} convolutions checked in this process, {violations} violations");
    Ok(if checks > 0 && violations == 0 {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn criterion_5() -> Result<Verdict, String> {
    let f = corpus_entry("kummer-0-1/2").unwrap().system;
    let sweep = nilpotency_sweep(&f, 3, 97).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} good primes, {} zero, {} bad",
        sweep.summary.good, sweep.summary.zero, sweep.summary.bad
    );
    let ok = sweep.summary.good == 24
        && sweep
            .reports
            .iter()
            .all(|r| r.status == PCurvatureStatus::Zero);
    Ok(if ok { pass(detail) } else { fail(detail) })
}

fn criterion_6() -> Result<Verdict, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let dens = [1, 2, 4];
    let mut violations = 0;
    let mut runs = 0;
    for _ in 0..20 {
        let residues: Vec<MatQ> = (0..3)
            .map(|_| {
                MatQ::new(
                    2,
                    2,
                    (0..4)
                        .map(|_| rat(rng.gen_range(-3..=3), dens[rng.gen_range(0..3)]))
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let f = FuchsianSystem::new(2, vec![int(0), int(1), int(2)], residues).unwrap();
        for p in [3, 5, 7] {
            runs += 1;
            match pcurvature(&f, p) {
                Ok(_) => {}
                Err(Error::SymbolResidue { .. }) => violations += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    let detail = format!("{runs} symbol towers, {violations} nonvanishing middle coefficients");
    Ok(if violations == 0 && runs == 60 {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn criterion_7() -> Result<Verdict, String> {
    let half = example_file("kummer-0-1/2");
    let third = example_file("kummer-0-1/3");
    let a = cli_json(&[
        "rho",
        "--smax",
        "64",
        "--window",
        "32..64",
        half.to_str().unwrap(),
    ])?;
    let b = cli_json(&["rho", "--smax", "54", third.to_str().unwrap()])?;
    let primes = |v: &Value| -> Vec<u64> {
        v["contributions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["p"].as_u64().unwrap())
            .collect()
    };
    let ta = a["total"].as_f64().unwrap();
    let tb = b["total"].as_f64().unwrap();
    let target_b = 1.5 * 3f64.ln();
    let ok = primes(&a) == [2]
        && (1.370..=1.387).contains(&ta)
        && primes(&b) == [3]
        && ((tb - target_b) / target_b).abs() < 0.03;
    let detail = format!("kummer(0,1/2): {ta:.6} at p = {:?}; kummer(0,1/3): {tb:.6} at p = {:?} (target {target_b:.6})", primes(&a), primes(&b));
    Ok(if ok { pass(detail) } else { fail(detail) })
}

fn criterion_8() -> Result<Verdict, String> {
    let entry = corpus_entry("mc-worked").unwrap();
    let f = &entry.system;
    let trace = katz_reduce(f).map_err(|e| e.to_string())?;
    let before = f.rigidity_index().map_err(|e| e.to_string())?;
    let replay_ok = replay(&trace, f).is_ok();
    let file = example_file("mc-worked");
    let cli = cli_json(&["katz", "--replay", file.to_str().unwrap()])?;
    let nilpotent = corpus_entry("nilpotent-rigid").unwrap().system;
    let negative = match katz_reduce(&nilpotent) {
        Err(failure) => matches!(failure.error, Error::Stuck(_) | Error::Resonant(_)),
        Ok(_) => false,
    };
    let after = trace.terminal.rigidity_index().map_err(|e| e.to_string())?;
    let ok = trace.steps.len() == 1
        && trace.steps[0].lambda == rat(-1, 6)
        && before == 2
        && after == 2
        && trace.terminal.rank() == 1
        && replay_ok
        && cli["replay"] == json!("isomorphic")
        && negative;
    let detail = format!(
        "steps {}, lambda {}, index {before} -> {after}, replay {}, negative control refused: {negative}",
        trace.steps.len(),
        trace.steps.first().map(|s| s.lambda.to_string()).unwrap_or_default(),
        if replay_ok { "isomorphic" } else { "mismatch" }
    );
    Ok(if ok { pass(detail) } else { fail(detail) })
}

fn criterion_9() -> Result<Verdict, String> {
    let config = HarnessConfig {
        primes: (2, 50),
        depth: 32,
        extra_prime_bound: 32,
    };
    let mut lines = Vec::new();
    let mut ok = true;
    for entry in corpus().into_iter().filter(|e| e.kind == CorpusKind::Rigid) {
        let report = equivalence_harness(&entry.system, config)
            .map_err(|e| format!("{}: {e}", entry.name))?;
        let all_good = report
            .stages
            .iter()
            .all(|s| s.sweep.summary.nilpotent_fraction == 1.0);
        let agree = report.nilpotent_channel
            && report.convergence_channel
            && report.terminal_channel
            && all_good;
        ok &= agree;
        lines.push(format!("{} agree={agree}", entry.name));
    }
    let four = corpus_entry("nonrigid-4pt").unwrap().system;
    let refused = matches!(
        equivalence_harness(&four, config),
        Err(Error::NotRigid { .. })
    );
    let witnesses = nilpotency_sweep(&four, 2, 50)
        .map_err(|e| e.to_string())?
        .non_nilpotent_primes();
    ok &= refused && !witnesses.is_empty();
    lines.push(format!(
        "nonrigid-4pt refused={refused} non-nilpotent at {witnesses:?}"
    ));
    let detail = lines.join("; ");
    Ok(if ok { pass(detail) } else { fail(detail) })
}

fn criterion_10() -> Result<Verdict, String> {
    let worked = example_file("mc-worked");
    let hyper = example_file("hypergeometric");
    let four = example_file("nonrigid-4pt");
    let nilpotent = example_file("nilpotent-rigid");
    let kummer = example_file("kummer-0-1/2");
    let w = worked.to_str().unwrap();
    let h = hyper.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["examples"],
        vec!["validate", w],
        vec!["mc", "--lambda", "1/6", w],
        vec!["twist", "--alphas", "1/2,-1/3", h],
        vec!["rigidity", h],
        vec!["pcurvature", "--primes", "2..97", w],
        vec!["pcurvature", "--primes", "2..50", four.to_str().unwrap()],
        vec![
            "pcurvature",
            "--primes",
            "2..50",
            nilpotent.to_str().unwrap(),
        ],
        vec!["rho", "--smax", "32", h],
        vec![
            "rho",
            "--smax",
            "64",
            "--window",
            "32..64",
            kummer.to_str().unwrap(),
        ],
        vec!["hbound", "1/6"],
        vec!["katz", "--replay", h],
        vec!["katz", nilpotent.to_str().unwrap()],
        vec!["check", "--primes", "2..50", "--smax", "32", w],
        vec!["check", "--primes", "2..50", "--smax", "32", h],
    ];
    let mut differing = Vec::new();
    for args in &runs {
        let one = cli_with_threads(args, "1");
        let four = cli_with_threads(args, "4");
        let again = cli_with_threads(args, "4");
        if one != four || four != again {
            differing.push(args.join(" "));
        }
    }
    let detail = format!(
        "{} commands compared under 1 and 4 workers, {} differ {differing:?}",
        runs.len(),
        differing.len()
    );
    Ok(if differing.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn main() {
    type Criterion = fn() -> Result<Verdict, String>;
    // criterion 4 inspects counters filled by the others, so it runs last
    let criteria: [(u32, &str, Criterion, u64); 10] = [
        (1, "H(lambda) exactness", criterion_1, 1),
        (2, "worked middle convolution fixtures", criterion_2, 1),
        (3, "mc round trip on random systems", criterion_3, 60),
        (5, "Kummer p-curvature sweep", criterion_5, 10),
        (6, "symbol vanishing", criterion_6, 600),
        (7, "truncated rho fixtures", criterion_7, 20),
        (8, "Katz reduction of the worked system", criterion_8, 5),
        (9, "equivalence harness on the corpus", criterion_9, 60),
        (10, "determinism across worker counts", criterion_10, 600),
        (4, "trace and rank identities", criterion_4, 600),
    ];
    let mut results = Vec::new();
    for (number, title, check, limit) in criteria {
        let start = Instant::now();
        let verdict = match check() {
            Ok(v) => v,
            Err(e) => fail(format!("error: {e}")),
        };
        let verdict = within(start.elapsed(), Duration::from_secs(limit), verdict);
        results.push((number, title, verdict));
    }
    results.sort_by_key(|(n, _, _)| *n);
    let mut failures = 0;
    for (number, title, verdict) in &results {
        let status = if verdict.ok { "PASS" } else { "FAIL" };
        if !verdict.ok {
            failures += 1;
        }
        println!(
            "criterion {number:>2} {status}  {title}: {}",
            verdict.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        results.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
