//! Semi-implicit time integration of `du/dt + A u = -lambda g(u)`.
//!
//! The stiff fourth-order part is treated implicitly and the trace force
//! explicitly: `(I + dt A) u_{k+1} = u_k - dt lambda g(u_k)`. One
//! factorization of `(I + dt A)` serves the whole run, the scheme is
//! first-order in `dt` and unconditionally stable in the linear part, and
//! stationary states are exact fixed points of the step.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::CylinderGrid;
use crate::linalg::{BandLu, BandMatrix};
use crate::model::Params;
use crate::plate::{assemble_shifted_system, solve_interleaved, PlateField};
use crate::potential::{solve_potential, trace_force, TraceForce};
use crate::scalar::Scalar;

/// Default gap at which a run is declared touched down. The transformed
/// coefficients degenerate as the gap closes, so integration stops early
/// while the linear algebra is still well-conditioned.
pub const STOP_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Target supplied and the final error fell below 1% of the initial one.
    Converged,
    Touchdown,
    MaxTime,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionRecord<T> {
    pub t: T,
    pub u_min: T,
    /// `||u(t) - target||_2` when a target is supplied.
    pub error: Option<T>,
    /// Total energy; absent on the final record of a touchdown (the state
    /// may already be past the model's validity).
    pub energy: Option<T>,
}

#[derive(Debug, Clone)]
pub struct EvolutionTrace<T> {
    pub records: Vec<EvolutionRecord<T>>,
    pub outcome: Outcome,
    /// Least-squares decay rate of `ln error` over the tail half of the
    /// record (only with a target).
    pub fitted_rate: Option<T>,
}

/// Factored semi-implicit stepper for a fixed `dt`.
pub struct EvolutionStepper<T> {
    cyl: Arc<CylinderGrid<T>>,
    params: Params<T>,
    dt: T,
    matrix: BandMatrix<T>,
    lu: BandLu<T>,
}

impl<T: Scalar> EvolutionStepper<T> {
    pub fn new(cyl: Arc<CylinderGrid<T>>, params: Params<T>, dt: T) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        let violations = params.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidParameter(violations.join("; ")));
        }
        let matrix = assemble_shifted_system(&params, cyl.radial(), T::one(), dt);
        let lu = matrix.factor()?;
        Ok(Self {
            cyl,
            params,
            dt,
            matrix,
            lu,
        })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Advance one step given the force already evaluated at `u`.
    pub fn advance(&self, u: &PlateField<T>, force: &TraceForce<T>) -> Result<PlateField<T>> {
        let rhs: Vec<T> = u
            .values()
            .iter()
            .zip(force.values())
            .map(|(&ui, &gi)| ui - self.dt * self.params.lambda * gi)
            .collect();
        solve_interleaved(&self.matrix, &self.lu, self.cyl.radial(), &rhs)
    }

    /// One full step: potential solve, trace force, semi-implicit update.
    pub fn step(&self, u: &PlateField<T>) -> Result<PlateField<T>> {
        let phi = solve_potential(&self.cyl, u, &self.params)?;
        let force = trace_force(&phi, &self.params)?;
        self.advance(u, &force)
    }
}

/// Integrate from `u0` until `t >= t_end` or touchdown, recording the gap,
/// the distance to `target` (if supplied), and the total energy.
pub fn evolve<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    p: &Params<T>,
    u0: &PlateField<T>,
    t_end: T,
    dt: T,
    target: Option<&PlateField<T>>,
    stop_gap: T,
) -> Result<EvolutionTrace<T>> {
    let stepper = EvolutionStepper::new(cyl.clone(), *p, dt)?;
    let grid = cyl.radial();
    let mut u = u0.clone();
    let mut t = T::zero();
    let mut records = Vec::new();
    let outcome;

    let error_to = |u: &PlateField<T>| -> Result<Option<T>> {
        match target {
            Some(tgt) => {
                let diff: Vec<T> = u
                    .values()
                    .iter()
                    .zip(tgt.values())
                    .map(|(&a, &b)| a - b)
                    .collect();
                Ok(Some(grid.l2_norm(&diff)?))
            }
            None => Ok(None),
        }
    };

    loop {
        if u.min_gap() <= stop_gap {
            records.push(EvolutionRecord {
                t,
                u_min: u.min_value(),
                error: error_to(&u)?,
                energy: None,
            });
            outcome = Outcome::Touchdown;
            break;
        }
        let phi = solve_potential(cyl, &u, p)?;
        let force = trace_force(&phi, p)?;
        let energy = crate::energy::total_energy(&u, &phi, p)?.e_total;
        records.push(EvolutionRecord {
            t,
            u_min: u.min_value(),
            error: error_to(&u)?,
            energy: Some(energy),
        });
        if t >= t_end {
            outcome = match (target, records.first().and_then(|r| r.error)) {
                (Some(_), Some(e0)) => {
                    let last = records.last().and_then(|r| r.error).unwrap_or(e0);
                    if last <= T::of(0.01) * e0 {
                        Outcome::Converged
                    } else {
                        Outcome::MaxTime
                    }
                }
                _ => Outcome::MaxTime,
            };
            break;
        }
        u = stepper.advance(&u, &force)?;
        t += dt;
    }

    let fitted_rate = fit_decay_rate(&records);
    Ok(EvolutionTrace {
        records,
        outcome,
        fitted_rate,
    })
}

/// Least-squares slope of `ln error` over the tail half of the record.
fn fit_decay_rate<T: Scalar>(records: &[EvolutionRecord<T>]) -> Option<T> {
    let errs: Vec<(T, T)> = records
        .iter()
        .filter_map(|r| r.error.map(|e| (r.t, e)))
        .collect();
    if errs.len() < 4 {
        return None;
    }
    let floor = T::of(1e-13) * (T::one() + errs[0].1);
    let tail: Vec<(T, T)> = errs[errs.len() / 2..]
        .iter()
        .copied()
        .filter(|&(_, e)| e > floor)
        .collect();
    if tail.len() < 3 {
        return None;
    }
    let n = T::of_usize(tail.len());
    let mut st = T::zero();
    let mut sy = T::zero();
    for &(t, e) in &tail {
        st += t;
        sy += e.ln();
    }
    let (mt, my) = (st / n, sy / n);
    let mut num = T::zero();
    let mut den = T::zero();
    for &(t, e) in &tail {
        num += (t - mt) * (e.ln() - my);
        den += (t - mt) * (t - mt);
    }
    if den == T::zero() {
        return None;
    }
    Some(-(num / den))
}
