//! Coupled stationary solves and continuation in the voltage parameter.
//!
//! The stationary system is the fixed-point problem `u = -lambda A^{-1} g(u)`.
//! Picard iterates that map directly (optionally damped); Newton solves
//! `(I + lambda A^{-1} Dg(u)) delta = -(u + lambda A^{-1} g(u))` with the
//! force Jacobian assembled column-by-column from finite differences of the
//! trace force. Continuation marches lambda upward with warm starts and a
//! secant predictor, halves the step on failure, and brackets the fold.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::CylinderGrid;
use crate::model::Params;
use crate::plate::{PlateField, PlateOperator};
use crate::potential::{solve_potential, trace_force, trace_force_jacobian, TraceForce};
use crate::scalar::Scalar;
use crate::verify;

/// Iteration scheme for the nonlinear solve.
#[derive(Debug, Clone, Copy)]
pub enum Method<T> {
    /// Damped fixed-point iteration; `damping` in (0, 1], 1 is undamped.
    Picard { damping: T },
    /// Newton with a finite-difference force Jacobian.
    Newton,
}

impl<T: Scalar> Default for Method<T> {
    fn default() -> Self {
        Method::Picard { damping: T::one() }
    }
}

/// Outcome of one nonlinear solve.
#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub converged: bool,
    pub iterations: usize,
    /// Sup-norm of the last update (Picard) or residual (Newton).
    pub residual: T,
    pub solution: PlateField<T>,
    pub force: TraceForce<T>,
}

/// Discrete membership data for the solution set `S(rho)`.
#[derive(Debug, Clone, Copy)]
pub struct MembershipReport<T> {
    pub rho: T,
    /// Discrete surrogate of the `W^2_3` norm:
    /// `(int (|u|^3 + |u_r|^3 + |lap u|^3 + |u_rr|^3) dx)^{1/3}`.
    pub w23_norm: T,
    pub min_gap: T,
    pub boundary_conforming: bool,
    pub in_s: bool,
}

/// Membership in `S(rho)`: boundary conformity, norm below `1/rho`, and a
/// gap above `rho`. The norm convention is a fixed surrogate used only for
/// bookkeeping, never inside solver logic.
pub fn membership<T: Scalar>(u: &PlateField<T>, rho: T) -> Result<MembershipReport<T>> {
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in (0, 1), got {rho:e}"
        )));
    }
    let g = u.grid();
    let uv = u.values();
    let ur = g.radial_derivative(uv)?;
    let urr = g.second_derivative(uv)?;
    let lap = g.radial_laplacian(uv)?;
    let cube = |x: T| x.abs().powi(3);
    let integrand: Vec<T> = (0..uv.len())
        .map(|i| cube(uv[i]) + cube(ur[i]) + cube(lap[i]) + cube(urr[i]))
        .collect();
    let w23_norm = g.integrate_disc(&integrand)?.max(T::zero()).powf(T::of(1.0 / 3.0));
    let min_gap = u.min_gap();
    let boundary_conforming =
        u.is_boundary_conforming(T::of(1e-10) * (T::one() + u.sup_norm()));
    let in_s = boundary_conforming && w23_norm < T::one() / rho && min_gap > rho;
    Ok(MembershipReport {
        rho,
        w23_norm,
        min_gap,
        boundary_conforming,
        in_s,
    })
}

/// Assembled context for stationary solves at a fixed parameter set; the
/// plate factorization is shared across iterations and lambda values.
pub struct StationaryProblem<T> {
    cyl: Arc<CylinderGrid<T>>,
    op: PlateOperator<T>,
    params: Params<T>,
}

impl<T: Scalar> StationaryProblem<T> {
    pub fn new(cyl: Arc<CylinderGrid<T>>, params: Params<T>) -> Result<Self> {
        let op = PlateOperator::new(&params, cyl.radial().clone())?;
        Ok(Self { cyl, op, params })
    }

    pub fn cylinder(&self) -> &Arc<CylinderGrid<T>> {
        &self.cyl
    }

    pub fn operator(&self) -> &PlateOperator<T> {
        &self.op
    }

    pub fn params(&self) -> &Params<T> {
        &self.params
    }

    pub fn set_lambda(&mut self, lambda: T) {
        self.params.lambda = lambda;
    }

    /// Trace force of the potential solved at `u`.
    pub fn force(&self, u: &PlateField<T>) -> Result<TraceForce<T>> {
        let phi = solve_potential(&self.cyl, u, &self.params)?;
        trace_force(&phi, &self.params)
    }

    /// One fixed-point application `u -> A^{-1}(-lambda g(u))`.
    pub fn picard_step(&self, u: &PlateField<T>) -> Result<PlateField<T>> {
        self.picard_step_at(self.params.lambda, u)
    }

    fn picard_step_at(&self, lambda: T, u: &PlateField<T>) -> Result<PlateField<T>> {
        let p = self.params.with_lambda(lambda);
        let phi = solve_potential(&self.cyl, u, &p)?;
        let g = trace_force(&phi, &p)?;
        let f: Vec<T> = g.values().iter().map(|&v| -lambda * v).collect();
        self.op.solve(&f)
    }

    /// Nonlinear solve at the problem's own lambda.
    pub fn solve(
        &self,
        u0: &PlateField<T>,
        method: Method<T>,
        tol: T,
        max_iter: usize,
    ) -> Result<SolveReport<T>> {
        self.solve_at(self.params.lambda, u0, method, tol, max_iter)
    }

    /// Nonlinear solve at an explicit lambda (continuation entry point).
    pub fn solve_at(
        &self,
        lambda: T,
        u0: &PlateField<T>,
        method: Method<T>,
        tol: T,
        max_iter: usize,
    ) -> Result<SolveReport<T>> {
        match method {
            Method::Picard { damping } => self.picard_solve(lambda, u0, damping, tol, max_iter),
            Method::Newton => self.newton_solve(lambda, u0, tol, max_iter),
        }
    }

    fn picard_solve(
        &self,
        lambda: T,
        u0: &PlateField<T>,
        damping: T,
        tol: T,
        max_iter: usize,
    ) -> Result<SolveReport<T>> {
        if !(damping > T::zero() && damping <= T::one()) {
            return Err(Error::InvalidParameter("damping must lie in (0, 1]".into()));
        }
        let mut u = u0.clone();
        let mut residual = T::of(f64::INFINITY);
        let mut converged = false;
        let mut iterations = 0;
        for k in 1..=max_iter {
            iterations = k;
            let mapped = self.picard_step_at(lambda, &u)?;
            let next = u.axpy(damping, &mapped.axpy(-T::one(), &u)?)?;
            residual = crate::scalar::sup_norm_diff(next.values(), u.values());
            u = next;
            if residual <= tol * (T::one() + u.sup_norm()) {
                converged = true;
                break;
            }
        }
        let p = self.params.with_lambda(lambda);
        let phi = solve_potential(&self.cyl, &u, &p)?;
        let force = trace_force(&phi, &p)?;
        Ok(SolveReport {
            converged,
            iterations,
            residual,
            solution: u,
            force,
        })
    }

    /// Columns of `A^{-1} Dg(u)` over interior nodes.
    fn inverse_force_jacobian(&self, lambda: T, u: &PlateField<T>) -> Result<DMatrix<T>> {
        let n = self.cyl.radial().n();
        let p = self.params.with_lambda(lambda);
        let fd = T::of(1e-6) * (T::one() + u.sup_norm());
        let dg = trace_force_jacobian(&self.cyl, u, &p, fd)?;
        let mut m = DMatrix::zeros(n, n);
        let mut col = vec![T::zero(); n + 1];
        for k in 0..n {
            for i in 0..n {
                col[i] = dg[(i, k)];
            }
            col[n] = T::zero();
            let sol = self.op.solve(&col)?;
            for i in 0..n {
                m[(i, k)] = sol.values()[i];
            }
        }
        Ok(m)
    }

    fn newton_solve(
        &self,
        lambda: T,
        u0: &PlateField<T>,
        tol: T,
        max_iter: usize,
    ) -> Result<SolveReport<T>> {
        let n = self.cyl.radial().n();
        let mut u = u0.clone();
        let mut residual = T::of(f64::INFINITY);
        let mut converged = false;
        let mut iterations = 0;
        for k in 1..=max_iter {
            iterations = k;
            let mapped = self.picard_step_at(lambda, &u)?;
            // F(u) = u - picard(u)
            let r: Vec<T> = u
                .values()
                .iter()
                .zip(mapped.values())
                .map(|(&a, &b)| a - b)
                .take(n)
                .collect();
            residual = crate::scalar::sup_norm(&r);
            if residual <= tol * (T::one() + u.sup_norm()) {
                converged = true;
                break;
            }
            // F'(u) = I + lambda A^{-1} Dg(u)
            let mut m = self.inverse_force_jacobian(lambda, &u)?;
            for e in m.iter_mut() {
                *e *= lambda;
            }
            for i in 0..n {
                m[(i, i)] += T::one();
            }
            let rhs = DVector::from_iterator(n, r.iter().map(|&x| -x));
            let delta = m
                .lu()
                .solve(&rhs)
                .ok_or(Error::SingularSystem { column: 0 })?;
            let vals = u.values_mut();
            for i in 0..n {
                vals[i] += delta[i];
            }
        }
        let p = self.params.with_lambda(lambda);
        let phi = solve_potential(&self.cyl, &u, &p)?;
        let force = trace_force(&phi, &p)?;
        Ok(SolveReport {
            converged,
            iterations,
            residual,
            solution: u,
            force,
        })
    }
}

/// One accepted continuation step.
#[derive(Debug, Clone)]
pub struct ContinuationRecord<T> {
    pub lambda: T,
    pub u_min: T,
    pub iterations: usize,
    pub converged: bool,
    /// Retained so downstream checks (certificates, stability) can reuse the
    /// branch without re-solving.
    pub solution: PlateField<T>,
    pub force: TraceForce<T>,
}

#[derive(Debug, Clone)]
pub struct ContinuationTrace<T> {
    pub records: Vec<ContinuationRecord<T>>,
    /// Midpoint of the final bracket.
    pub lambda_star: T,
    /// (last accepted lambda, tightest rejected lambda).
    pub bracket: (T, T),
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuationOptions<T> {
    pub dlambda0: T,
    pub method: Method<T>,
    pub tol: T,
    pub max_iter: usize,
    /// Safety cap; the march stops if lambda exceeds it.
    pub lambda_max: T,
    /// Reject steps whose converged solution violates the cheap invariant
    /// suite (sign, concavity, force lower bound).
    pub check_invariants: bool,
}

impl<T: Scalar> Default for ContinuationOptions<T> {
    fn default() -> Self {
        Self {
            dlambda0: T::of(0.1),
            method: Method::default(),
            tol: T::of(1e-10),
            max_iter: 200,
            lambda_max: T::of(1e3),
            check_invariants: true,
        }
    }
}

/// Cheap recordwise invariants: `u <= 0`, `lap u >= 0`, `g >= 1` within the
/// shared tolerances.
pub(crate) fn record_invariants_ok<T: Scalar>(u: &PlateField<T>, force: &TraceForce<T>) -> bool {
    if u.max_value() > T::of(verify::U_UPPER_TOL) {
        return false;
    }
    let lap = match u.grid().radial_laplacian(u.values()) {
        Ok(l) => l,
        Err(_) => return false,
    };
    if crate::scalar::slice_min(&lap) < -T::of(verify::LAPLACIAN_LOWER_TOL) {
        return false;
    }
    force.min_value() >= T::one() - T::of(verify::FORCE_LOWER_TOL)
}

/// Shared continuation engine: march lambda from 0 with warm starts and a
/// secant predictor; on failure halve the step and retry from the last
/// success; stop when the step falls below `1e-4 * dlambda0`.
pub(crate) fn run_continuation<T, S>(
    zero_state: PlateField<T>,
    mut solve_at: S,
    opts: &ContinuationOptions<T>,
) -> Result<ContinuationTrace<T>>
where
    T: Scalar,
    S: FnMut(T, &PlateField<T>) -> Result<SolveReport<T>>,
{
    if !(opts.dlambda0 > T::zero()) {
        return Err(Error::InvalidParameter("dlambda0 must be positive".into()));
    }
    let mut records = Vec::new();

    // the trivial state anchors the branch
    let first = solve_at(T::zero(), &zero_state)?;
    records.push(ContinuationRecord {
        lambda: T::zero(),
        u_min: first.solution.min_value(),
        iterations: first.iterations,
        converged: first.converged,
        solution: first.solution.clone(),
        force: first.force,
    });

    let mut lambda_prev = T::zero();
    let mut u_prev = first.solution;
    let mut older: Option<(T, PlateField<T>)> = None;
    let mut step = opts.dlambda0;
    let min_step = T::of(1e-4) * opts.dlambda0;
    let mut bracket_hi: Option<T> = None;

    while step >= min_step && lambda_prev < opts.lambda_max {
        let lambda_try = (lambda_prev + step).min(opts.lambda_max);

        // secant predictor from the last two accepted states
        let mut start = u_prev.clone();
        if let Some((l2, u2)) = &older {
            let dl = lambda_prev - *l2;
            if dl > T::zero() {
                let slope = (lambda_try - lambda_prev) / dl;
                if let Ok(pred) = u_prev.axpy(slope, &u_prev.axpy(-T::one(), u2)?) {
                    if pred.min_gap() > T::of(0.05) {
                        start = pred;
                    }
                }
            }
        }

        let accepted = match solve_at(lambda_try, &start) {
            Ok(rep) if rep.converged => {
                if opts.check_invariants && !record_invariants_ok(&rep.solution, &rep.force) {
                    None
                } else {
                    Some(rep)
                }
            }
            Ok(_) => None,
            Err(Error::Touchdown { .. }) => None,
            Err(Error::ResidualTooLarge { .. }) => None,
            Err(e) => return Err(e),
        };

        match accepted {
            Some(rep) => {
                records.push(ContinuationRecord {
                    lambda: lambda_try,
                    u_min: rep.solution.min_value(),
                    iterations: rep.iterations,
                    converged: true,
                    solution: rep.solution.clone(),
                    force: rep.force,
                });
                older = Some((lambda_prev, u_prev));
                u_prev = rep.solution;
                lambda_prev = lambda_try;
                if let Some(b) = bracket_hi {
                    if lambda_try >= b {
                        bracket_hi = None;
                    }
                }
            }
            None => {
                bracket_hi = Some(match bracket_hi {
                    Some(b) => b.min(lambda_try),
                    None => lambda_try,
                });
                step /= T::of(2.0);
            }
        }
    }

    let hi = bracket_hi.unwrap_or(lambda_prev);
    Ok(ContinuationTrace {
        lambda_star: (lambda_prev + hi) / T::of(2.0),
        bracket: (lambda_prev, hi),
        records,
    })
}

/// Continuation for the free-boundary stationary problem.
pub fn continue_in_lambda<T: Scalar>(
    cyl: &Arc<CylinderGrid<T>>,
    params: &Params<T>,
    opts: &ContinuationOptions<T>,
) -> Result<ContinuationTrace<T>> {
    let problem = StationaryProblem::new(cyl.clone(), *params)?;
    let zero = PlateField::zeros(cyl.radial().clone());
    run_continuation(
        zero,
        |lambda, u0| problem.solve_at(lambda, u0, opts.method, opts.tol, opts.max_iter),
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CylinderGrid;

    fn params(lambda: f64) -> Params<f64> {
        Params {
            beta: 1.0,
            tau: 0.0,
            sigma: 0.0,
            eps: 0.1,
            lambda,
            kappa: 1.0,
        }
    }

    fn problem(n: usize, lambda: f64) -> StationaryProblem<f64> {
        let cyl = CylinderGrid::shared(n, n).unwrap();
        StationaryProblem::new(cyl, params(lambda)).unwrap()
    }

    #[test]
    fn picard_step_at_zero_lambda_returns_zero() {
        let prob = problem(32, 0.0);
        let u = PlateField::from_fn(prob.cylinder().radial().clone(), |r| -0.2 * (1.0 - r * r));
        let next = prob.picard_step(&u).unwrap();
        assert!(next.sup_norm() < 1e-13);
    }

    #[test]
    fn picard_step_from_flat_state() {
        // g(0) = 1, so the step returns -lambda A^{-1} 1 with center -5 lambda / 64
        let prob = problem(128, 0.5);
        let u = PlateField::zeros(prob.cylinder().radial().clone());
        let next = prob.picard_step(&u).unwrap();
        assert!(
            (next.values()[0] + 5.0 * 0.5 / 64.0).abs() < 1e-5,
            "{}",
            next.values()[0]
        );
    }

    #[test]
    fn stationary_solve_is_a_fixed_point() {
        let prob = problem(48, 0.5);
        let u0 = PlateField::zeros(prob.cylinder().radial().clone());
        let rep = prob
            .solve(&u0, Method::default(), 1e-10, 200)
            .unwrap();
        assert!(rep.converged, "residual {}", rep.residual);
        let mapped = prob.picard_step(&rep.solution).unwrap();
        let drift = crate::scalar::sup_norm_diff(mapped.values(), rep.solution.values());
        assert!(drift < 1e-9, "fixed point drift {drift}");
        // in (-5 lambda / 64 - 0.02, 0)
        let center = rep.solution.values()[0];
        assert!(center < 0.0 && center > -5.0 * 0.5 / 64.0 - 0.02, "{center}");
    }

    #[test]
    fn lambda_expansion_is_second_order() {
        // ||U_lambda - (-lambda A^{-1} 1)|| / lambda^2 stays in a narrow band
        let mut ratios = Vec::new();
        for lambda in [0.5, 0.25] {
            let prob = problem(48, lambda);
            let radial = prob.cylinder().radial().clone();
            let u0 = PlateField::zeros(radial.clone());
            let rep = prob.solve(&u0, Method::default(), 1e-12, 300).unwrap();
            assert!(rep.converged);
            let linear = prob
                .operator()
                .solve(&vec![-lambda; radial.n() + 1])
                .unwrap();
            let diff = crate::scalar::sup_norm_diff(rep.solution.values(), linear.values());
            ratios.push(diff / (lambda * lambda));
        }
        let band = ratios[0] / ratios[1];
        assert!(
            band > 1.0 / 1.25 && band < 1.25,
            "ratios {ratios:?} band {band}"
        );
    }

    #[test]
    fn picard_and_newton_agree() {
        let prob = problem(32, 0.4);
        let u0 = PlateField::zeros(prob.cylinder().radial().clone());
        let a = prob.solve(&u0, Method::default(), 1e-11, 300).unwrap();
        let b = prob.solve(&u0, Method::Newton, 1e-11, 50).unwrap();
        assert!(a.converged && b.converged);
        let gap = crate::scalar::sup_norm_diff(a.solution.values(), b.solution.values());
        assert!(gap <= 1e-7, "picard vs newton gap {gap}");
    }

    #[test]
    fn membership_examples() {
        let cyl = CylinderGrid::shared(32, 32).unwrap();
        let radial = cyl.radial().clone();

        let zero = PlateField::zeros(radial.clone());
        let rep = membership(&zero, 0.3).unwrap();
        assert!(rep.in_s && rep.boundary_conforming);
        assert_eq!(rep.w23_norm, 0.0);
        assert_eq!(rep.min_gap, 1.0);

        // constant plate below -1 + rho: min_gap fails
        let rho: f64 = 0.4;
        let sunk = PlateField::constant(radial.clone(), -1.0 + rho / 2.0);
        let rep = membership(&sunk, rho).unwrap();
        assert!(!rep.in_s && rep.min_gap <= rho);

        // huge amplitude: norm bound fails
        let big = PlateField::from_fn(radial, |r| 50.0 * (1.0 - r * r));
        let rep = membership(&big, 0.3).unwrap();
        assert!(!rep.in_s && rep.w23_norm >= 1.0 / 0.3);

        assert!(membership(&zero, 1.2).is_err());
    }

    #[test]
    fn nonconvergence_is_reported_not_fatal() {
        // far above pull-in the iteration either oscillates/diverges without
        // touchdown or touches down; both count as failure
        let prob = problem(32, 30.0);
        let u0 = PlateField::zeros(prob.cylinder().radial().clone());
        match prob.solve(&u0, Method::default(), 1e-10, 40) {
            Ok(rep) => assert!(!rep.converged),
            Err(Error::Touchdown { .. }) => {}
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }
}
