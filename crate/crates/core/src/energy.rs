//! Mechanical, electrostatic, and total energies, plus numerical
//! first-variation checks.
//!
//! In radial symmetry the torsion integrand reduces through
//! `(d1 d2 u)^2 - d1^2 u d2^2 u = -u_rr u_r / r`, and the Young lower bound
//! for the bending part becomes `(beta (1 - |sigma|) / 2) int (u_rr^2 +
//! (u_r/r)^2)`. The total energy is weighted as
//! `E = E_m + 2 lambda E_e`, the unique weighting whose critical points
//! satisfy `A u = -lambda g(u)`; `variation_test_total` is the executable
//! check of that choice.
//!
//! The mechanical energy is quadratic, so its centered finite difference is
//! exact in the step and the variation defects isolate pure spatial
//! discretization error. The electrostatic energy is genuinely nonlinear in
//! `u` (the potential is re-solved at each probe), so its defects carry an
//! `O(step^2)` truncation term as well.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::CylinderGrid;
use crate::model::Params;
use crate::plate::PlateField;
use crate::potential::{solve_potential, trace_force, PotentialField};
use crate::scalar::Scalar;

/// Default centered finite-difference step for the variation tests.
pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy)]
pub struct EnergyReport<T> {
    pub e_mech: T,
    pub e_elec: T,
    pub e_total: T,
    /// Young-inequality lower bound on the bending part; nonnegative, and
    /// `e_mech >= bending_lower_bound` whenever `tau >= 0`.
    pub bending_lower_bound: T,
}

/// Mechanical energy and its Young lower bound.
pub fn mechanical_energy<T: Scalar>(u: &PlateField<T>, p: &Params<T>) -> Result<(T, T)> {
    let g = u.grid();
    let n = g.n();
    let uv = u.values();
    let ur = g.radial_derivative(uv)?;
    let urr = g.second_derivative(uv)?;
    let half = T::of(0.5);

    let mut bend = vec![T::zero(); n + 1];
    let mut bound = vec![T::zero(); n + 1];
    for i in 0..=n {
        // u_r / r tends to u_rr at the axis
        let a = if i == 0 { urr[0] } else { ur[i] / g.r(i) };
        let lap = urr[i] + a;
        bend[i] = half * p.beta * lap * lap - p.beta * (T::one() - p.sigma) * urr[i] * a
            + half * p.tau * ur[i] * ur[i];
        bound[i] = urr[i] * urr[i] + a * a;
    }
    let e_mech = g.integrate_disc(&bend)?;
    let lower = half * p.beta * (T::one() - p.sigma.abs()) * g.integrate_disc(&bound)?;
    Ok((e_mech, lower))
}

/// Electrostatic energy
/// `-(1/2) int_{Omega(u)} (eps^2 |grad' psi|^2 + (dz psi)^2)`,
/// evaluated on the cylinder with the volume element `(1 + u) deta dx`.
pub fn electrostatic_energy<T: Scalar>(
    u: &PlateField<T>,
    phi: &PotentialField<T>,
    p: &Params<T>,
) -> Result<T> {
    u.check_same_grid(phi.deflection())?;
    let cyl = phi.grid();
    let radial = cyl.radial();
    let n = radial.n();
    let m = cyl.m();
    let h = radial.h();
    let he = cyl.h_eta();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let four = T::of(4.0);
    let eps2 = p.eps * p.eps;
    let uv = phi.deflection().values();
    let ur = radial.radial_derivative(uv)?;

    let phi_at = |i: usize, j: usize| phi.at(i, j);
    let mut column = vec![T::zero(); n + 1];
    for i in 0..=n {
        let one_u = T::one() + uv[i];
        let mut inner = T::zero();
        for j in 0..=m {
            let fe = if j == 0 {
                (-three * phi_at(i, 0) + four * phi_at(i, 1) - phi_at(i, 2)) / (two * he)
            } else if j == m {
                (three * phi_at(i, m) - four * phi_at(i, m - 1) + phi_at(i, m - 2)) / (two * he)
            } else {
                (phi_at(i, j + 1) - phi_at(i, j - 1)) / (two * he)
            };
            let fr = if i == 0 {
                T::zero()
            } else if i == n {
                (three * phi_at(n, j) - four * phi_at(n - 1, j) + phi_at(n - 2, j)) / (two * h)
            } else {
                (phi_at(i + 1, j) - phi_at(i - 1, j)) / (two * h)
            };
            let psi_r = fr - cyl.eta(j) * ur[i] * fe / one_u;
            let psi_z = fe / one_u;
            inner += cyl.eta_weight(j) * (eps2 * psi_r * psi_r + psi_z * psi_z);
        }
        column[i] = one_u * inner;
    }
    Ok(-T::of(0.5) * radial.integrate_disc(&column)?)
}

/// Total energy `E = E_m + 2 lambda E_e` with the Young bound attached.
pub fn total_energy<T: Scalar>(
    u: &PlateField<T>,
    phi: &PotentialField<T>,
    p: &Params<T>,
) -> Result<EnergyReport<T>> {
    let (e_mech, bound) = mechanical_energy(u, p)?;
    let e_elec = electrostatic_energy(u, phi, p)?;
    Ok(EnergyReport {
        e_mech,
        e_elec,
        e_total: e_mech + T::of(2.0) * p.lambda * e_elec,
        bending_lower_bound: bound,
    })
}

fn require_direction<T: Scalar>(v: &PlateField<T>) -> Result<()> {
    if !v.is_boundary_conforming(T::machine_epsilon() * T::of(64.0)) {
        return Err(Error::InvalidParameter(
            "variation direction must vanish at r = 1".to_string(),
        ));
    }
    Ok(())
}

/// Integration-by-parts side of the mechanical first variation:
/// `int (beta lap^2 u - tau lap u) v dx
///  + beta (lap u(1) - (1 - sigma) kappa u'(1)) * 2 pi * v'(1)`.
fn mechanical_variation_formula<T: Scalar>(
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
) -> Result<T> {
    let g = u.grid();
    let lap = g.radial_laplacian(u.values())?;
    let lap2 = g.radial_laplacian(&lap)?;
    let au: Vec<T> = lap2
        .iter()
        .zip(&lap)
        .map(|(&l2, &l)| p.beta * l2 - p.tau * l)
        .collect();
    let volume = g.inner_product(&au, v.values())?;
    let uprime = g.boundary_normal_derivative(u.values())?;
    let vprime = g.boundary_normal_derivative(v.values())?;
    let steklov_residual = lap[g.n()] - (T::one() - p.sigma) * p.kappa * uprime;
    Ok(volume + p.beta * steklov_residual * T::two_pi() * vprime)
}

/// Defect between the centered finite difference of the mechanical energy in
/// direction `v` and the integration-by-parts formula.
pub fn variation_test_mech<T: Scalar>(
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
) -> Result<T> {
    variation_test_mech_with_step(u, v, p, T::of(FD_STEP))
}

pub fn variation_test_mech_with_step<T: Scalar>(
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
    step: T,
) -> Result<T> {
    u.check_same_grid(v)?;
    require_direction(v)?;
    let (ep, _) = mechanical_energy(&u.axpy(step, v)?, p)?;
    let (em, _) = mechanical_energy(&u.axpy(-step, v)?, p)?;
    let fd = (ep - em) / (T::of(2.0) * step);
    Ok((fd - mechanical_variation_formula(u, v, p)?).abs())
}

/// Defect between the centered finite difference of the electrostatic energy
/// and `(1/2) int g(u) v dx`. Each probe re-solves the potential.
pub fn variation_test_elec<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
) -> Result<T> {
    variation_test_elec_with_step(cyl, u, v, p, T::of(FD_STEP))
}

fn electrostatic_energy_at<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    p: &Params<T>,
) -> Result<T> {
    let phi = solve_potential(cyl, u, p)?;
    electrostatic_energy(u, &phi, p)
}

pub fn variation_test_elec_with_step<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
    step: T,
) -> Result<T> {
    u.check_same_grid(v)?;
    require_direction(v)?;
    let ep = electrostatic_energy_at(cyl, &u.axpy(step, v)?, p)?;
    let em = electrostatic_energy_at(cyl, &u.axpy(-step, v)?, p)?;
    let fd = (ep - em) / (T::of(2.0) * step);

    let phi = solve_potential(cyl, u, p)?;
    let g = trace_force(&phi, p)?;
    let formula = T::of(0.5) * u.grid().inner_product(g.values(), v.values())?;
    Ok((fd - formula).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct TotalVariationReport<T> {
    /// |finite difference - integration-by-parts formula|
    pub defect: T,
    /// The raw finite-difference derivative; vanishes at stationary points.
    pub fd_derivative: T,
}

/// First-variation check for the total energy: the finite difference of
/// `E_m + 2 lambda E_e` against
/// `int (A u + lambda g(u)) v dx + boundary term`.
pub fn variation_test_total<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
) -> Result<TotalVariationReport<T>> {
    variation_test_total_with_step(cyl, u, v, p, T::of(FD_STEP))
}

pub fn variation_test_total_with_step<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
    step: T,
) -> Result<TotalVariationReport<T>> {
    u.check_same_grid(v)?;
    require_direction(v)?;
    let two = T::of(2.0);
    let total = |w: &PlateField<T>| -> Result<T> {
        let (e_mech, _) = mechanical_energy(w, p)?;
        Ok(e_mech + two * p.lambda * electrostatic_energy_at(cyl, w, p)?)
    };
    let fd = (total(&u.axpy(step, v)?)? - total(&u.axpy(-step, v)?)?) / (two * step);

    let phi = solve_potential(cyl, u, p)?;
    let g = trace_force(&phi, p)?;
    let formula = mechanical_variation_formula(u, v, p)?
        + p.lambda * u.grid().inner_product(g.values(), v.values())?;
    Ok(TotalVariationReport {
        defect: (fd - formula).abs(),
        fd_derivative: fd,
    })
}

/// Raw centered finite difference of the total energy in direction `v`
/// (the criticality probe used at converged stationary states).
pub fn total_energy_directional_derivative<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    u: &PlateField<T>,
    v: &PlateField<T>,
    p: &Params<T>,
    step: T,
) -> Result<T> {
    u.check_same_grid(v)?;
    require_direction(v)?;
    let two = T::of(2.0);
    let total = |w: &PlateField<T>| -> Result<T> {
        let (e_mech, _) = mechanical_energy(w, p)?;
        Ok(e_mech + two * p.lambda * electrostatic_energy_at(cyl, w, p)?)
    };
    Ok((total(&u.axpy(step, v)?)? - total(&u.axpy(-step, v)?)?) / (two * step))
}
