//! The vanishing-aspect-ratio model: at `eps = 0` the potential is explicit,
//! `psi = (1 + z)/(1 + u)`, and the plate equation closes to
//! `beta lap^2 u - tau lap u = -lambda / (1 + u)^2` with the same hinged
//! conditions. Solvers mirror the free-boundary ones, but Newton uses the
//! analytic Jacobian `2 lambda / (1 + u)^3` instead of finite differences.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::model::Params;
use crate::plate::{PlateField, PlateOperator};
use crate::potential::TraceForce;
use crate::scalar::Scalar;
use crate::stationary::{
    run_continuation, ContinuationOptions, ContinuationTrace, Method, SolveReport,
};

/// Small gap problem context (`eps = 0` enforced).
pub struct SmallGapProblem<T> {
    grid: Arc<RadialGrid<T>>,
    op: PlateOperator<T>,
    params: Params<T>,
}

/// Pointwise right-hand side `-lambda / (1 + u)^2`.
pub fn smallgap_rhs<T: Scalar>(u: &PlateField<T>, lambda: T) -> Result<Vec<T>> {
    let gap = u.min_gap();
    if gap <= T::of(crate::potential::TOUCHDOWN_GAP) {
        return Err(Error::Touchdown {
            min_gap: gap.as_f64(),
        });
    }
    Ok(u.values()
        .iter()
        .map(|&ui| {
            let one_u = T::one() + ui;
            -lambda / (one_u * one_u)
        })
        .collect())
}

impl<T: Scalar> SmallGapProblem<T> {
    pub fn new(grid: Arc<RadialGrid<T>>, params: Params<T>) -> Result<Self> {
        if params.eps != T::zero() {
            return Err(Error::InvalidParameter(format!(
                "small gap model requires eps = 0, got {:e}",
                params.eps
            )));
        }
        let op = PlateOperator::new(&params, grid.clone())?;
        Ok(Self { grid, op, params })
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn params(&self) -> &Params<T> {
        &self.params
    }

    pub fn operator(&self) -> &PlateOperator<T> {
        &self.op
    }

    fn force_of(&self, u: &PlateField<T>) -> Result<TraceForce<T>> {
        let values = u
            .values()
            .iter()
            .map(|&ui| {
                let one_u = T::one() + ui;
                T::one() / (one_u * one_u)
            })
            .collect();
        TraceForce::new(self.grid.clone(), values)
    }

    fn picard_step_at(&self, lambda: T, u: &PlateField<T>) -> Result<PlateField<T>> {
        let f = smallgap_rhs(u, lambda)?;
        self.op.solve(&f)
    }

    pub fn solve(
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
        let force = self.force_of(&u)?;
        Ok(SolveReport {
            converged,
            iterations,
            residual,
            solution: u,
            force,
        })
    }

    fn newton_solve(
        &self,
        lambda: T,
        u0: &PlateField<T>,
        tol: T,
        max_iter: usize,
    ) -> Result<SolveReport<T>> {
        let n = self.grid.n();
        let mut u = u0.clone();
        let mut residual = T::of(f64::INFINITY);
        let mut converged = false;
        let mut iterations = 0;
        let two = T::of(2.0);
        for k in 1..=max_iter {
            iterations = k;
            let mapped = self.picard_step_at(lambda, &u)?;
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
            // F(u) = u + lambda A^{-1} (1+u)^{-2}, so
            // F'(u) = I - 2 lambda A^{-1} diag((1+u)^{-3})
            let mut m = DMatrix::zeros(n, n);
            let mut col = vec![T::zero(); n + 1];
            for kcol in 0..n {
                for c in col.iter_mut() {
                    *c = T::zero();
                }
                let one_u = T::one() + u.values()[kcol];
                col[kcol] = -two * lambda / (one_u * one_u * one_u);
                let sol = self.op.solve(&col)?;
                for i in 0..n {
                    m[(i, kcol)] = sol.values()[i];
                }
                m[(kcol, kcol)] += T::one();
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
        let force = self.force_of(&u)?;
        Ok(SolveReport {
            converged,
            iterations,
            residual,
            solution: u,
            force,
        })
    }

    /// Fold of the small gap branch by the shared continuation engine.
    pub fn fold(&self, opts: &ContinuationOptions<T>) -> Result<ContinuationTrace<T>> {
        let zero = PlateField::zeros(self.grid.clone());
        run_continuation(
            zero,
            |lambda, u0| self.solve(lambda, u0, opts.method, opts.tol, opts.max_iter),
            opts,
        )
    }
}
