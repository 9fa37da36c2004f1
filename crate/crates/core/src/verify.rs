//! Invariant suite for stationary solution candidates.
//!
//! Every provable sign and barrier property of a converged stationary state
//! is checked numerically at fixed tolerances: the deflection is nonpositive
//! with a positive gap, both hinged conditions hold, the Laplacian of the
//! deflection is nonnegative, the trace force and the vertical field
//! derivative stay at or above one, and the potential stays below the
//! barrier `1 + z - u`.

use std::sync::Arc;

use crate::error::Result;
use crate::grid::CylinderGrid;
use crate::model::Params;
use crate::plate::{check_hinged_bc, PlateField};
use crate::potential::{check_max_principle, dz_psi_on_plate, solve_potential, trace_force};
use crate::scalar::Scalar;

/// `u <= 0` is enforced up to this.
pub const U_UPPER_TOL: f64 = 1e-8;
/// Hinged-condition residual bound for converged states.
pub const BC_RESIDUAL_TOL: f64 = 1e-6;
/// `lap u >= 0` is enforced down to `-this`.
pub const LAPLACIAN_LOWER_TOL: f64 = 1e-8;
/// `g(u) >= 1 - this`.
pub const FORCE_LOWER_TOL: f64 = 1e-6;
/// `dz psi(., u) >= 1 - this`.
pub const DZPSI_LOWER_TOL: f64 = 1e-6;
/// `psi <= 1 + z - u + this` pointwise.
pub const BARRIER_TOL: f64 = 1e-6;

/// One named check: `observed` must stay on the feasible side of `bound`
/// in the direction given by `cmp` (`"<="` or `">="`).
#[derive(Debug, Clone)]
pub struct CheckResult<T> {
    pub name: &'static str,
    pub cmp: &'static str,
    pub observed: T,
    pub bound: T,
    pub pass: bool,
}

impl<T: Scalar> CheckResult<T> {
    fn at_most(name: &'static str, observed: T, bound: T) -> Self {
        Self {
            name,
            cmp: "<=",
            observed,
            bound,
            pass: observed <= bound,
        }
    }

    fn at_least(name: &'static str, observed: T, bound: T) -> Self {
        Self {
            name,
            cmp: ">=",
            observed,
            bound,
            pass: observed >= bound,
        }
    }
}

pub fn all_pass<T>(checks: &[CheckResult<T>]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Run the full invariant suite on a stationary-solution candidate.
/// Solves the potential for `u` internally.
pub fn invariant_suite<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    p: &Params<T>,
    u: &PlateField<T>,
) -> Result<Vec<CheckResult<T>>> {
    let grid = cyl.radial();
    let mut checks = Vec::new();

    checks.push(CheckResult::at_most(
        "max u",
        u.max_value(),
        T::of(U_UPPER_TOL),
    ));
    checks.push(CheckResult::at_least("min gap", u.min_gap(), T::zero()));

    let (bc1, bc2) = check_hinged_bc(u, p);
    checks.push(CheckResult::at_most(
        "|u(1)|",
        bc1,
        T::of(BC_RESIDUAL_TOL),
    ));
    // re-measuring the Steklov condition with one-sided stencils carries
    // their O(h^2) truncation, so this bound is grid-aware
    let h = grid.h();
    let steklov_bound =
        T::of(BC_RESIDUAL_TOL).max(T::of(4.0) * h * h * (T::one() + u.sup_norm()));
    checks.push(CheckResult::at_most("steklov residual", bc2, steklov_bound));

    let lap = grid.radial_laplacian(u.values())?;
    checks.push(CheckResult::at_least(
        "min lap u",
        crate::scalar::slice_min(&lap),
        -T::of(LAPLACIAN_LOWER_TOL),
    ));

    let phi = solve_potential(cyl, u, p)?;
    let g = trace_force(&phi, p)?;
    checks.push(CheckResult::at_least(
        "min g",
        g.min_value(),
        T::one() - T::of(FORCE_LOWER_TOL),
    ));

    let dz = dz_psi_on_plate(&phi);
    checks.push(CheckResult::at_least(
        "min dz psi",
        crate::scalar::slice_min(&dz),
        T::one() - T::of(DZPSI_LOWER_TOL),
    ));

    let mp = check_max_principle(&phi);
    checks.push(CheckResult::at_most(
        "sup (psi - barrier)",
        mp.sup_psi_minus_barrier,
        T::of(BARRIER_TOL),
    ));

    Ok(checks)
}
