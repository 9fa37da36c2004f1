//! Deterministic text output: CSV tables and flat JSON summaries.
//!
//! Numbers are rendered with 17 significant digits in scientific notation so
//! golden-file comparisons are meaningful; none of the writers emits clock or
//! environment content.

use std::io::{self, Write};

use crate::evolution::{EvolutionTrace, Outcome};
use crate::scalar::Scalar;
use crate::stationary::ContinuationTrace;

/// 17-significant-digit rendering used in every data file.
pub fn fmt_scalar<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x)
}

fn fmt_bool(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Render a flat JSON object from (key, rendered value) pairs, preserving
/// the given key order.
pub fn flat_json(entries: &[(&str, String)]) -> String {
    let mut s = String::from("{");
    for (k, (key, value)) in entries.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        s.push('"');
        s.push_str(key);
        s.push_str("\": ");
        s.push_str(value);
    }
    s.push_str("}\n");
    s
}

/// `r,u` table for a plate field.
pub fn write_plate_csv<T: Scalar, W: Write>(
    w: &mut W,
    radii: &[T],
    values: &[T],
) -> io::Result<()> {
    writeln!(w, "r,u")?;
    for (r, u) in radii.iter().zip(values) {
        writeln!(w, "{},{}", fmt_scalar(*r), fmt_scalar(*u))?;
    }
    Ok(())
}

/// `lambda,u_min,iters,converged` table for a continuation trace.
pub fn write_sweep_csv<T: Scalar, W: Write>(
    w: &mut W,
    trace: &ContinuationTrace<T>,
) -> io::Result<()> {
    writeln!(w, "lambda,u_min,iters,converged")?;
    for rec in &trace.records {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_scalar(rec.lambda),
            fmt_scalar(rec.u_min),
            rec.iterations,
            fmt_bool(rec.converged)
        )?;
    }
    Ok(())
}

/// Sweep summary with the fold estimate, its bracket, the nonexistence
/// threshold, and the aspect ratio of the run.
pub fn sweep_summary_json<T: Scalar>(trace: &ContinuationTrace<T>, mu1: T, eps: T) -> String {
    flat_json(&[
        ("lambda_star", fmt_scalar(trace.lambda_star)),
        ("bracket_lo", fmt_scalar(trace.bracket.0)),
        ("bracket_hi", fmt_scalar(trace.bracket.1)),
        ("mu1", fmt_scalar(mu1)),
        ("eps", fmt_scalar(eps)),
    ])
}

pub fn eigen_summary_json<T: Scalar>(mu1: T, residual: T) -> String {
    flat_json(&[
        ("mu1", fmt_scalar(mu1)),
        ("residual", fmt_scalar(residual)),
    ])
}

pub fn stability_summary_json<T: Scalar>(
    mu1: T,
    residual: T,
    min_real_part: T,
    stable: bool,
) -> String {
    flat_json(&[
        ("mu1", fmt_scalar(mu1)),
        ("residual", fmt_scalar(residual)),
        ("min_real_part", fmt_scalar(min_real_part)),
        ("stable", if stable { "true" } else { "false" }.to_string()),
    ])
}

/// `t,u_min,error,energy` table for an evolution trace. Missing entries
/// (no target supplied, or the final record of a touchdown) render as `nan`.
pub fn write_evolution_csv<T: Scalar, W: Write>(
    w: &mut W,
    trace: &EvolutionTrace<T>,
) -> io::Result<()> {
    writeln!(w, "t,u_min,error,energy")?;
    let opt = |x: Option<T>| match x {
        Some(v) => fmt_scalar(v),
        None => "nan".to_string(),
    };
    for rec in &trace.records {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_scalar(rec.t),
            fmt_scalar(rec.u_min),
            opt(rec.error),
            opt(rec.energy)
        )?;
    }
    Ok(())
}

pub fn evolution_summary_json<T: Scalar>(trace: &EvolutionTrace<T>) -> String {
    let outcome = match trace.outcome {
        Outcome::Converged => "converged",
        Outcome::Touchdown => "touchdown",
        Outcome::MaxTime => "max_time",
    };
    let rate = match trace.fitted_rate {
        Some(r) => fmt_scalar(r),
        None => "null".to_string(),
    };
    flat_json(&[
        ("outcome", format!("\"{outcome}\"")),
        ("fitted_rate", rate),
    ])
}
