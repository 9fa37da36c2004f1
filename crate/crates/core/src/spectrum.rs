//! Principal eigenpair of the hinged plate operator and the spectrum of the
//! linearized stationary problem.
//!
//! The principal pair is computed by inverse power iteration against the
//! factored plate solve: the target is the smallest eigenvalue with a
//! positive eigenfunction, which inverse iteration finds without any shift.
//! The stability report assembles `A + lambda Dg(U)` densely on the interior
//! nodes (the interior dimension is a few hundred at most) and takes the
//! full nonsymmetric spectrum, so there is no Krylov convergence question
//! near the fold.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{CylinderGrid, RadialGrid};
use crate::model::Params;
use crate::plate::{PlateField, PlateOperator};
use crate::potential::{trace_force_jacobian, TraceForce};
use crate::scalar::Scalar;

/// Relative eigenvalue change at which inverse iteration stops.
pub const EIGEN_TOL: f64 = 1e-12;
pub const EIGEN_MAX_ITER: usize = 500;

/// Relative agreement demanded between the two quadrature routes of the
/// certificate's middle quantity (operator side vs eigenvalue side). The two
/// agree only to discretization order, not to solver tolerance.
pub const CERTIFICATE_GREEN_RTOL: f64 = 2e-2;

/// Relative slack allowed on the certificate inequalities.
pub const CERTIFICATE_SLACK: f64 = 1e-6;

/// Principal eigenvalue and positive eigenfunction, normalized to max 1.
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub mu1: T,
    pub phi1: PlateField<T>,
    /// `||A phi1 - mu1 phi1||_inf` with the hinged closure.
    pub residual: T,
}

/// Smallest real part of the linearization spectrum at a stationary state.
#[derive(Debug, Clone, Copy)]
pub struct StabilityReport<T> {
    pub lambda: T,
    pub min_real_part: T,
    pub stable: bool,
}

fn rayleigh<T: Scalar>(grid: &RadialGrid<T>, w: &[T], y: &[T]) -> Result<T> {
    let num = grid.inner_product(w, w)?;
    let den = grid.inner_product(w, y)?;
    Ok(num / den)
}

/// Inverse power iteration for the principal eigenpair of
/// `beta lap^2 - tau lap` with hinged conditions.
pub fn principal_eigenpair<T: Scalar>(
    p: &Params<T>,
    grid: &Arc<RadialGrid<T>>,
) -> Result<EigenPair<T>> {
    let op = PlateOperator::new(p, grid.clone())?;
    principal_eigenpair_with(&op)
}

/// Same, reusing an existing factorization.
pub fn principal_eigenpair_with<T: Scalar>(op: &PlateOperator<T>) -> Result<EigenPair<T>> {
    let grid = op.grid().clone();
    let n = grid.n();
    let mut w = PlateField::from_fn(grid.clone(), |r| T::one() - r * r);
    let mut mu = T::zero();
    let mut change = T::of(f64::INFINITY);
    for _ in 0..EIGEN_MAX_ITER {
        let y = op.solve(w.values())?;
        let mu_new = rayleigh(&grid, w.values(), y.values())?;
        change = (mu_new - mu).abs();
        mu = mu_new;
        let scale = y.sup_norm();
        let mut normalized = y;
        for v in normalized.values_mut() {
            *v /= scale;
        }
        w = normalized;
        if change <= T::of(EIGEN_TOL) * mu.abs() {
            break;
        }
    }
    if !(change <= T::of(EIGEN_TOL) * mu.abs()) {
        return Err(Error::EigenStagnation {
            iterations: EIGEN_MAX_ITER,
            change: change.as_f64(),
        });
    }
    // positive orientation, max value 1
    if w.values()[0] < T::zero() {
        for v in w.values_mut() {
            *v = -*v;
        }
    }
    let max = w.max_value();
    for v in w.values_mut() {
        *v /= max;
    }
    let au = op.apply_condensed(w.values())?;
    let mut residual = T::zero();
    for i in 0..n {
        residual = residual.max((au[i] - mu * w.values()[i]).abs());
    }
    Ok(EigenPair {
        mu1: mu,
        phi1: w,
        residual,
    })
}

/// Deflated inverse iteration: the smallest eigenvalue in the complement of
/// the principal eigenfunction (quadrature-orthogonal projection). Used as a
/// simplicity probe; the value is meaningful to discretization accuracy.
pub fn second_eigenvalue<T: Scalar>(
    p: &Params<T>,
    grid: &Arc<RadialGrid<T>>,
    first: &EigenPair<T>,
) -> Result<T> {
    let op = PlateOperator::new(p, grid.clone())?;
    let phi1 = &first.phi1;
    let phi_norm2 = grid.inner_product(phi1.values(), phi1.values())?;
    let project = |w: &mut PlateField<T>| -> Result<()> {
        let c = grid.inner_product(w.values(), phi1.values())? / phi_norm2;
        let pv = phi1.values().to_vec();
        for (wi, pi) in w.values_mut().iter_mut().zip(pv) {
            *wi -= c * pi;
        }
        Ok(())
    };

    let mut w = PlateField::from_fn(grid.clone(), |r| {
        (T::one() - r * r) * (T::one() - T::of(3.0) * r * r)
    });
    project(&mut w)?;
    let mut mu = T::zero();
    for _ in 0..EIGEN_MAX_ITER {
        let mut y = op.solve(w.values())?;
        project(&mut y)?;
        let mu_new = rayleigh(&grid, w.values(), y.values())?;
        let change = (mu_new - mu).abs();
        mu = mu_new;
        let scale = y.sup_norm();
        for v in y.values_mut() {
            *v /= scale;
        }
        w = y;
        if change <= T::of(1e-10) * mu.abs() {
            return Ok(mu);
        }
    }
    Err(Error::EigenStagnation {
        iterations: EIGEN_MAX_ITER,
        change: f64::NAN,
    })
}

/// Dense matrix of the plate operator with the hinged closure, on the
/// interior nodes `0..n-1`.
pub fn operator_matrix<T: Scalar>(op: &PlateOperator<T>) -> Result<DMatrix<T>> {
    let n = op.grid().n();
    let mut a = DMatrix::zeros(n, n);
    let mut basis = vec![T::zero(); n + 1];
    for k in 0..n {
        for b in basis.iter_mut() {
            *b = T::zero();
        }
        basis[k] = T::one();
        let col = op.apply_condensed(&basis)?;
        for i in 0..n {
            a[(i, k)] = col[i];
        }
    }
    Ok(a)
}

/// Spectrum of `A + lambda Dg(U)` at a stationary state `U`; `stable` means
/// every eigenvalue has positive real part (the evolution damps
/// perturbations).
pub fn linearized_spectral_bound<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    p: &Params<T>,
    u: &PlateField<T>,
) -> Result<StabilityReport<T>> {
    let op = PlateOperator::new(p, cyl.radial().clone())?;
    let n = cyl.radial().n();
    let mut m = operator_matrix(&op)?;
    if p.lambda > T::zero() {
        let fd = T::of(1e-6) * (T::one() + u.sup_norm());
        let dg = trace_force_jacobian(cyl, u, p, fd)?;
        for i in 0..n {
            for k in 0..n {
                m[(i, k)] += p.lambda * dg[(i, k)];
            }
        }
    }
    let min_real_part = min_real_eigenvalue(m)?;
    Ok(StabilityReport {
        lambda: p.lambda,
        min_real_part,
        stable: min_real_part > T::zero(),
    })
}

fn min_real_eigenvalue<T: Scalar>(m: DMatrix<T>) -> Result<T> {
    let n = m.nrows();
    let schur = nalgebra::linalg::Schur::try_new(m, T::of(1e-13), 20_000)
        .ok_or_else(|| Error::EigenSolveFailed("Schur iteration did not converge".into()))?;
    let eigs = schur.complex_eigenvalues();
    let mut min_re = T::of(f64::INFINITY);
    for k in 0..n {
        min_re = min_re.min(eigs[k].re);
    }
    Ok(min_re)
}

/// Quadrature evaluation of the eigenfunction-multiplier chain at a
/// stationary state: `lambda int phi1 <= int (-A U) phi1 ~= -mu1 int U phi1
/// < mu1 int phi1`. The outer inequalities get a tiny relative slack; the
/// middle equality is a Green-formula identity and is only checked to
/// discretization order.
#[derive(Debug, Clone, Copy)]
pub struct CertificateReport<T> {
    pub lambda: T,
    /// `lambda int phi1`
    pub lhs: T,
    /// `int (-A U) phi1` (operator route)
    pub mid_operator: T,
    /// `-mu1 int U phi1` (eigenvalue route)
    pub mid_eigen: T,
    /// `mu1 int phi1`
    pub rhs: T,
    pub ok: bool,
}

pub fn nonexistence_certificate<T: Scalar>(
    p: &Params<T>,
    eig: &EigenPair<T>,
    u: &PlateField<T>,
    _force: &TraceForce<T>,
) -> Result<CertificateReport<T>> {
    let grid = u.grid().clone();
    let n = grid.n();
    let op = PlateOperator::new(p, grid.clone())?;
    let phi1 = eig.phi1.values();

    let ones = vec![T::one(); n + 1];
    let int_phi = grid.inner_product(&ones, phi1)?;
    let lhs = p.lambda * int_phi;

    let mut neg_au = op.apply_condensed(u.values())?;
    for v in neg_au.iter_mut() {
        *v = -*v;
    }
    neg_au.push(T::zero()); // phi1 vanishes at r = 1 anyway
    let mid_operator = grid.inner_product(&neg_au, phi1)?;
    let mid_eigen = -eig.mu1 * grid.inner_product(u.values(), phi1)?;
    let rhs = eig.mu1 * int_phi;

    let slack = T::of(CERTIFICATE_SLACK) * rhs.abs();
    let scale = mid_operator.abs().max(mid_eigen.abs()).max(slack);
    let ok = lhs <= mid_operator + slack
        && mid_eigen < rhs + slack
        && (mid_operator - mid_eigen).abs() <= T::of(CERTIFICATE_GREEN_RTOL) * scale;
    Ok(CertificateReport {
        lambda: p.lambda,
        lhs,
        mid_operator,
        mid_eigen,
        rhs,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_j0_first_zero;

    fn params(sigma: f64, tau: f64) -> Params<f64> {
        Params {
            beta: 1.0,
            tau,
            sigma,
            eps: 0.1,
            lambda: 0.0,
            kappa: 1.0,
        }
    }

    #[test]
    fn navier_eigenvalue_matches_bessel_oracle() {
        let grid = RadialGrid::shared(512).unwrap();
        let j01 = bessel_j0_first_zero();

        let pair = principal_eigenpair(&params(1.0, 0.0), &grid).unwrap();
        let exact = j01.powi(4);
        assert!(
            (pair.mu1 - exact).abs() < 1e-3 * exact,
            "mu1 {} vs {exact}",
            pair.mu1
        );

        let pair = principal_eigenpair(&params(1.0, 1.0), &grid).unwrap();
        let exact = j01.powi(4) + j01.powi(2);
        assert!(
            (pair.mu1 - exact).abs() < 1e-3 * exact,
            "mu1 {} vs {exact}",
            pair.mu1
        );
    }

    #[test]
    fn steklov_case_self_converges() {
        let coarse = principal_eigenpair(&params(0.0, 0.0), &RadialGrid::shared(256).unwrap())
            .unwrap();
        let fine = principal_eigenpair(&params(0.0, 0.0), &RadialGrid::shared(1024).unwrap())
            .unwrap();
        assert!(
            (coarse.mu1 - fine.mu1).abs() < 2e-3 * fine.mu1,
            "{} vs {}",
            coarse.mu1,
            fine.mu1
        );
    }

    #[test]
    fn eigenfunction_shape() {
        for (sigma, tau) in [(-0.8, 0.0), (0.0, 1.0), (0.8, 5.0), (1.0, 0.0)] {
            let grid = RadialGrid::shared(128).unwrap();
            let pair = principal_eigenpair(&params(sigma, tau), &grid).unwrap();
            assert!(pair.mu1 > 0.0);
            let v = pair.phi1.values();
            let n = grid.n();
            assert!(v[n].abs() < 1e-12, "phi1(1) = {}", v[n]);
            for i in 0..n {
                assert!(v[i] > 0.0, "phi1 <= 0 at node {i} (sigma {sigma})");
            }
            let slope = grid.boundary_normal_derivative(v).unwrap();
            assert!(slope < 0.0, "phi1'(1) = {slope}");
            assert!((pair.phi1.max_value() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rayleigh_quotient_consistency() {
        let grid = RadialGrid::shared(256).unwrap();
        let p = params(0.3, 0.5);
        let pair = principal_eigenpair(&p, &grid).unwrap();
        let op = PlateOperator::new(&p, grid.clone()).unwrap();
        let mut au = op.apply_condensed(pair.phi1.values()).unwrap();
        au.push(0.0);
        let num = grid.inner_product(&au, pair.phi1.values()).unwrap();
        let den = grid
            .inner_product(pair.phi1.values(), pair.phi1.values())
            .unwrap();
        assert!(
            (num / den - pair.mu1).abs() <= 1e-8 * pair.mu1,
            "rayleigh {} vs mu1 {}",
            num / den,
            pair.mu1
        );
    }

    #[test]
    fn deflation_finds_a_well_separated_second_eigenvalue() {
        let p = params(0.0, 0.0);
        let g64 = RadialGrid::shared(64).unwrap();
        let g128 = RadialGrid::shared(128).unwrap();
        let e64 = principal_eigenpair(&p, &g64).unwrap();
        let e128 = principal_eigenpair(&p, &g128).unwrap();
        let mu2_64 = second_eigenvalue(&p, &g64, &e64).unwrap();
        let mu2_128 = second_eigenvalue(&p, &g128, &e128).unwrap();
        assert!(mu2_64 > 1.5 * e64.mu1);
        assert!(
            (mu2_64 - mu2_128).abs() < 0.05 * mu2_128,
            "{mu2_64} vs {mu2_128}"
        );
    }

    #[test]
    fn operator_matrix_spectrum_matches_power_iteration() {
        let grid = RadialGrid::shared(96).unwrap();
        let p = params(0.0, 0.0);
        let pair = principal_eigenpair(&p, &grid).unwrap();
        let cyl = crate::grid::CylinderGrid::shared(96, 16).unwrap();
        let u = PlateField::zeros(grid.clone());
        let rep = linearized_spectral_bound(&cyl, &p, &u).unwrap();
        assert!(
            (rep.min_real_part - pair.mu1).abs() < 5e-3 * pair.mu1,
            "{} vs {}",
            rep.min_real_part,
            pair.mu1
        );
        assert!(rep.stable);
    }

    #[test]
    fn degenerate_certificate_at_zero_lambda() {
        let grid = RadialGrid::shared(64).unwrap();
        let p = params(0.0, 0.0);
        let pair = principal_eigenpair(&p, &grid).unwrap();
        let u = PlateField::zeros(grid.clone());
        let force = TraceForce::new(grid.clone(), vec![1.0; grid.n() + 1]).unwrap();
        let rep = nonexistence_certificate(&p, &pair, &u, &force).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.rhs > 0.0);
        assert!(rep.mid_operator.abs() < 1e-9);
    }
}
