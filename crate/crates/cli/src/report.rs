use jss_core::approx::{approximate_jss, ApproxOptions, ApproxSequence};
use jss_core::compound::second_compound;
use jss_core::relation::{enumerate_relations, is_transitive};
use jss_core::signsym::detect_weak;
use jss_core::spectral::{classify_with, eigenvalues, Case, Classification, ClassifyOptions};
use jss_core::{Error, Matrix, ZeroBand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u64 = 1;
const SIGNIFICANT_DIGITS: usize = 12;
const APPROX_TARGET: f64 = 1e-6;

pub struct Analysis {
    pub report: Value,
    pub classification: Classification,
    pub approx: Option<Result<ApproxSequence, Error>>,
}

fn inapplicable(reason: impl std::fmt::Display) -> Value {
    json!({ "inapplicable": reason.to_string() })
}

/// SHA-256 over `n` and the bit patterns of the entries, little endian.
pub fn digest(a: &Matrix) -> String {
    let mut h = Sha256::new();
    h.update((a.n() as u64).to_le_bytes());
    for x in a.as_slice() {
        h.update(x.to_bits().to_le_bytes());
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

/// Rounds every float to a fixed number of significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().unwrap_or(0.0);
            let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
            if let Some(r) = serde_json::Number::from_f64(rounded) {
                *num = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or_else(|e| inapplicable(format!("serialization failed: {e}")))
}

fn approx_summary(seq: &ApproxSequence) -> Value {
    let steps: Vec<Value> = seq
        .steps
        .iter()
        .map(|s| {
            json!({
                "epsilon": s.epsilon,
                "distance": s.distance,
                "certified": s.certificate.passed(),
                "min_smoothed_entry": s.certificate.min_smoothed_entry,
                "min_smoothed_compound_entry": s.certificate.min_smoothed_compound_entry,
                "direct_compound_deviation": s.certificate.direct_compound_deviation,
                "rank_repair": s.certificate.rank_repair,
            })
        })
        .collect();
    json!({
        "order": seq.order,
        "signature": seq.signature.signs(),
        "steps": steps,
        "rejected": seq.rejected,
        "converged_norm": seq.converged_norm,
        "target_distance": seq.target_distance,
        "reached_target": seq.reached_target,
        "leading_pair_nonnegative": seq.leading_pair_nonnegative,
        "rank_repair_used": seq.rank_repair_used,
        "final_approximant": seq.steps.last().map(|s| s.approximant.to_rows()),
    })
}

pub fn analyse(a: &Matrix, tol: f64, with_approx: bool) -> Result<Analysis, Error> {
    let opts = ClassifyOptions {
        peripheral_tol: tol,
        ..ClassifyOptions::default()
    };
    let classification = classify_with(a, &opts)?;
    let spectrum = eigenvalues(a, tol)?;

    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("input_digest".into(), json!(digest(a)));
    report.insert("n".into(), json!(a.n()));
    report.insert("matrix".into(), json!(a.to_rows()));

    let compound = second_compound(a);
    let matrix_sign = match &classification.sign_partition {
        Some(j) => to_value(j),
        None => match detect_weak(a, ZeroBand::Exact) {
            Ok(j) => to_value(&j),
            Err(e) => inapplicable(e),
        },
    };
    let compound_sign = match (&classification.compound_partition, &compound) {
        (Some(j), _) => to_value(j),
        (None, Err(e)) => inapplicable(e),
        (None, Ok(c)) => match detect_weak(c, ZeroBand::COMPUTED) {
            Ok(j) => to_value(&j),
            Err(e) => inapplicable(e),
        },
    };
    report.insert(
        "sign_analysis".into(),
        json!({ "matrix": matrix_sign, "compound": compound_sign }),
    );
    report.insert(
        "compound".into(),
        match &compound {
            Ok(c) => json!(c.to_rows()),
            Err(e) => inapplicable(e),
        },
    );

    let relation = match &classification.relation {
        Some(w) => json!({
            "pairs": to_value(w),
            "transitive": is_transitive(w),
            "grid": w.dot_grid().lines().collect::<Vec<_>>(),
        }),
        None => inapplicable("sign partitions of A and A^(2) are both required"),
    };
    report.insert("relation".into(), relation);
    report.insert(
        "permutation".into(),
        match (&classification.order, classification.transitive) {
            (Some(theta), _) => to_value(theta),
            (None, Some(false)) => inapplicable("relation is not transitive"),
            (None, _) => inapplicable("no relation"),
        },
    );
    report.insert("spectrum".into(), to_value(&spectrum));
    report.insert("classification".into(), to_value(&classification));

    let approx = with_approx.then(|| {
        let opts = ApproxOptions {
            target_distance: Some(APPROX_TARGET),
            ..ApproxOptions::default()
        };
        approximate_jss(a, &opts)
    });
    report.insert(
        "approx".into(),
        match &approx {
            None => inapplicable("not requested"),
            Some(Ok(seq)) => approx_summary(seq),
            Some(Err(e)) => inapplicable(e),
        },
    );

    let mut report = Value::Object(report);
    round_floats(&mut report);
    Ok(Analysis {
        report,
        classification,
        approx,
    })
}

pub fn enumeration(n: usize) -> Result<Value, Error> {
    let (mut total, mut transitive) = (0u64, 0u64);
    for w in enumerate_relations(n)? {
        total += 1;
        transitive += u64::from(is_transitive(&w));
    }
    Ok(json!({ "n": n, "relations": total, "transitive": transitive }))
}

pub fn trace_lines(analysis: &Analysis) -> Vec<String> {
    let c = &analysis.classification;
    let mut lines: Vec<String> = c.witness.iter().map(|w| format!("trace: {w}")).collect();
    for check in &c.checks {
        let mark = if check.passed { "ok  " } else { "FAIL" };
        let detail = if check.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", check.detail)
        };
        lines.push(format!("check {mark} {}{detail}", check.name));
    }
    let verdict = match c.case {
        Case::TwoPositiveLeading => format!(
            "case: two positive simple leading eigenvalues, lambda1 = {:.6}, lambda2 = {:.6}",
            c.lambda1.unwrap_or(f64::NAN),
            c.lambda2.unwrap_or(f64::NAN)
        ),
        Case::TridentH3 => "case: three simple peripheral eigenvalues, h = 3".to_string(),
        Case::Inapplicable => format!(
            "case: inapplicable ({})",
            c.inapplicable.as_deref().unwrap_or("verification failed")
        ),
    };
    lines.push(verdict);
    lines.push(format!("verified: {}", c.verified));
    if let Some(w) = &c.relation {
        lines.push("relation grid (x = first index, y = second index):".into());
        lines.extend(w.dot_grid().lines().map(str::to_string));
    }
    lines
}

pub fn approx_table(seq: &Result<ApproxSequence, Error>) -> Vec<String> {
    match seq {
        Err(e) => vec![format!("approximation: {e}")],
        Ok(seq) => {
            let mut lines = vec![format!("{:>12}  {:>12}  certificate", "epsilon", "distance")];
            for s in &seq.steps {
                let cert = match s.certificate.rank_repair {
                    Some(eta) => format!("strict, rank repair {eta:.3e}"),
                    None => "strict".to_string(),
                };
                lines.push(format!("{:>12.6e}  {:>12.6e}  {cert}", s.epsilon, s.distance));
            }
            for r in &seq.rejected {
                lines.push(format!("{:>12.6e}  {:>12.6e}  rejected: {}", r.epsilon, r.distance, r.reason));
            }
            lines.push(match seq.reached_target {
                Some(true) => format!("target distance {:e} reached", APPROX_TARGET),
                _ => format!("target distance {:e} NOT reached", APPROX_TARGET),
            });
            lines
        }
    }
}
