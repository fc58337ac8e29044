//! JSON renderings of library results.

use rigidconv::probes::{HBound, PCurvatureReport, RhoEstimate, SweepReport};
use rigidconv::{
    Error, FuchsianSystem, HarnessReport, KatzStep, KatzTrace, LocalSpectrum, Spectrum,
};
use serde_json::{json, Value};

use crate::document::{rational_value, rationals, SystemDocument};

pub fn system(f: &FuchsianSystem) -> Value {
    SystemDocument::new(f.clone()).to_value()
}

pub fn spectrum(s: &LocalSpectrum) -> Value {
    let eigenvalues = match &s.eigenvalues {
        Spectrum::Rational(list) => Value::Array(
            list.iter()
                .map(|(e, m)| json!({"value": rational_value(e), "multiplicity": m}))
                .collect(),
        ),
        Spectrum::NonRational => json!("non_rational"),
    };
    json!({"point": s.point.to_string(), "eigenvalues": eigenvalues})
}

pub fn pcurvature_report(r: &PCurvatureReport) -> Value {
    let witness = match &r.witness {
        None => Value::Null,
        Some(w) => json!({"char_poly_index": w.index, "coefficient": w.coefficient.coeffs()}),
    };
    json!({"p": r.p, "status": r.status.as_str(), "witness": witness})
}

pub fn sweep(s: &SweepReport) -> Value {
    let m = &s.summary;
    json!({
        "range": [s.range.0, s.range.1],
        "reports": s.reports.iter().map(pcurvature_report).collect::<Vec<_>>(),
        "summary": {
            "primes": m.primes,
            "good": m.good,
            "zero": m.zero,
            "nilpotent": m.nilpotent,
            "non_nilpotent": m.non_nilpotent,
            "bad_prime": m.bad,
            "nilpotent_fraction": m.nilpotent_fraction,
            "nilpotent_fraction_label": "heuristic",
        },
        "non_nilpotent_primes": s.non_nilpotent_primes(),
    })
}

pub fn rho(r: &RhoEstimate) -> Value {
    json!({
        "depth": r.depth,
        "window": [r.window.0, r.window.1],
        "candidate_primes": r.candidate_primes,
        "contributions": r.contributions.iter().map(|c| {
            let (e, s) = c.best.expect("contributions have a best term");
            json!({"p": c.p, "exponent": e, "s": s, "value": c.windowed_log})
        }).collect::<Vec<_>>(),
        "total": r.total,
    })
}

pub fn hbound(h: &HBound) -> Value {
    json!({
        "terms": h.terms.iter().map(|(p, c)| json!([p, rational_value(c)])).collect::<Vec<_>>(),
        "value": h.value,
    })
}

pub fn katz_step(s: &KatzStep) -> Value {
    json!({
        "alphas": rationals(&s.twist.alphas),
        "lambda": rational_value(&s.lambda),
        "rank_before": s.rank_before,
        "rank_after": s.rank_after,
        "pruned_points": rationals(&s.pruned_points),
    })
}

pub fn katz_trace(t: &KatzTrace) -> Value {
    json!({
        "steps": t.steps.iter().map(katz_step).collect::<Vec<_>>(),
        "terminal": system(&t.terminal),
    })
}

pub fn harness(r: &HarnessReport) -> Value {
    json!({
        "config": {
            "primes": [r.config.primes.0, r.config.primes.1],
            "smax": r.config.depth,
            "extra_prime_bound": r.config.extra_prime_bound,
        },
        "steps": r.trace.steps.iter().map(katz_step).collect::<Vec<_>>(),
        "stages": r.stages.iter().map(|s| json!({
            "stage": s.stage,
            "rank": s.rank,
            "sweep": sweep(&s.sweep)["summary"].clone(),
            "non_nilpotent_primes": s.sweep.non_nilpotent_primes(),
            "rho": s.rho,
            "rho_doubled_bound": s.rho_doubled,
            "rho_stable": s.rho_stable(),
        })).collect::<Vec<_>>(),
        "channels": {
            "nilpotent": r.nilpotent_channel,
            "convergence": r.convergence_channel,
            "terminal_rank_one": r.terminal_channel,
        },
        "agree": r.channels_agree(),
    })
}

pub fn error(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}
