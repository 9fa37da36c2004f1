//! The hinged plate operator `A u = beta Delta^2 u - tau Delta u` with
//! boundary conditions `u = Delta u - (1 - sigma) kappa u' = 0` at `r = 1`.
//!
//! The fourth-order problem is solved as the coupled second-order system in
//! `(u, v)` with `v = -Delta u`:
//!
//! ```text
//!   Delta u + v = 0          in D
//!   -beta Delta v + tau v = f    in D
//!   u = 0,  v = -(1 - sigma) kappa u'(1)   at r = 1
//! ```
//!
//! assembled monolithically (the Steklov row couples `v(1)` to `u'(1)`) and
//! factored once per parameter set, so repeated solves against one
//! factorization are cheap and deterministic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::{BandLu, BandMatrix};
use crate::model::Params;
use crate::scalar::Scalar;

/// Relative backward-error bound enforced after every plate solve.
pub const SOLVE_BACKWARD_ERROR: f64 = 1e-10;

/// Discrete deflection on a radial grid, in units of the gap height.
#[derive(Debug, Clone)]
pub struct PlateField<T> {
    grid: Arc<RadialGrid<T>>,
    values: Vec<T>,
}

impl<T: Scalar> PlateField<T> {
    pub fn new(grid: Arc<RadialGrid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n() + 1 {
            return Err(Error::LengthMismatch {
                expected: grid.n() + 1,
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid<T>>) -> Self {
        let values = vec![T::zero(); grid.n() + 1];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<RadialGrid<T>>, f: impl Fn(T) -> T) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Arc<RadialGrid<T>>, c: T) -> Self {
        let values = vec![c; grid.n() + 1];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn min_value(&self) -> T {
        crate::scalar::slice_min(&self.values)
    }

    pub fn max_value(&self) -> T {
        crate::scalar::slice_max(&self.values)
    }

    /// `1 + min u`, the remaining distance to touchdown.
    pub fn min_gap(&self) -> T {
        T::one() + self.min_value()
    }

    pub fn sup_norm(&self) -> T {
        crate::scalar::sup_norm(&self.values)
    }

    /// First hinged condition `u(1) = 0`, up to `tol`.
    pub fn is_boundary_conforming(&self, tol: T) -> bool {
        self.values[self.grid.n()].abs() <= tol
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: T, other: &PlateField<T>) -> Result<PlateField<T>> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a + s * b)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn check_same_grid(&self, other: &PlateField<T>) -> Result<()> {
        if self.grid.n() != other.grid.n() {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                got: other.grid.n(),
            });
        }
        Ok(())
    }
}

/// Assembled and factored hinged plate operator.
#[derive(Debug)]
pub struct PlateOperator<T> {
    params: Params<T>,
    grid: Arc<RadialGrid<T>>,
    matrix: BandMatrix<T>,
    lu: BandLu<T>,
}

/// Assemble the monolithic `(u, v)` band system for
/// `mass * u + scale * (beta lap^2 - tau lap) u = f` with hinged conditions.
///
/// Unknowns are interleaved as `[u_0, v_0, u_1, v_1, ...]`, which keeps the
/// band at `kl = 5`, `ku = 2` (the Steklov row reaches back to `u_{n-2}`).
/// The stationary operator uses `(mass, scale) = (0, 1)`; the semi-implicit
/// time stepper uses `(1, dt)`.
pub(crate) fn assemble_shifted_system<T: Scalar>(
    params: &Params<T>,
    grid: &RadialGrid<T>,
    mass: T,
    scale: T,
) -> BandMatrix<T> {
    let n = grid.n();
    let h = grid.h();
    let h2 = h * h;
    let two = T::of(2.0);
    let four = T::of(4.0);
    let beta = scale * params.beta;
    let tau = scale * params.tau;
    let mut a = BandMatrix::new(2 * (n + 1), 5, 2);

    // coupling rows: Delta u + v = 0
    a.set(0, 0, -four / h2);
    a.set(0, 2, four / h2);
    a.set(0, 1, T::one());
    for i in 1..n {
        let r = grid.r(i);
        let lo = T::one() / h2 - T::one() / (two * h * r);
        let hi = T::one() / h2 + T::one() / (two * h * r);
        let row = 2 * i;
        a.set(row, 2 * (i - 1), lo);
        a.set(row, 2 * i, -two / h2);
        a.set(row, 2 * (i + 1), hi);
        a.set(row, 2 * i + 1, T::one());
    }

    // equation rows: mass u - beta Delta v + tau v = f
    a.set(1, 0, mass);
    a.set(1, 1, four * beta / h2 + tau);
    a.set(1, 3, -four * beta / h2);
    for i in 1..n {
        let r = grid.r(i);
        let lo = T::one() / h2 - T::one() / (two * h * r);
        let hi = T::one() / h2 + T::one() / (two * h * r);
        let row = 2 * i + 1;
        a.set(row, 2 * i, mass);
        a.set(row, 2 * (i - 1) + 1, -beta * lo);
        a.set(row, 2 * i + 1, two * beta / h2 + tau);
        a.set(row, 2 * (i + 1) + 1, -beta * hi);
    }

    // boundary rows: u_n = 0 and v_n + (1-sigma) kappa u'(1) = 0
    a.set(2 * n, 2 * n, T::one());
    let steklov = (T::one() - params.sigma) * params.kappa / (two * h);
    let row = 2 * n + 1;
    a.set(row, 2 * n + 1, T::one());
    a.set(row, 2 * n, T::of(3.0) * steklov);
    a.set(row, 2 * (n - 1), -four * steklov);
    a.set(row, 2 * (n - 2), steklov);
    a
}

/// Shared solve path: fill the interleaved right-hand side, solve, check the
/// backward error, and extract the deflection.
pub(crate) fn solve_interleaved<T: Scalar>(
    matrix: &BandMatrix<T>,
    lu: &BandLu<T>,
    grid: &Arc<RadialGrid<T>>,
    f: &[T],
) -> Result<PlateField<T>> {
    let n = grid.n();
    if f.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            got: f.len(),
        });
    }
    let mut b = vec![T::zero(); 2 * (n + 1)];
    for i in 0..n {
        b[2 * i + 1] = f[i];
    }
    let x = crate::linalg::solve_refined(matrix, lu, &b, 1);
    let be = matrix.backward_error(&x, &b).as_f64();
    let tol = SOLVE_BACKWARD_ERROR.max(T::machine_epsilon().as_f64() * 1e3);
    if be > tol {
        return Err(Error::ResidualTooLarge { residual: be, tol });
    }
    let values: Vec<T> = (0..=n).map(|i| x[2 * i]).collect();
    PlateField::new(grid.clone(), values)
}

impl<T: Scalar> PlateOperator<T> {
    /// Assemble the monolithic `(u, v)` system and factor it.
    pub fn new(params: &Params<T>, grid: Arc<RadialGrid<T>>) -> Result<Self> {
        let violations = params.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidParameter(violations.join("; ")));
        }
        let a = assemble_shifted_system(params, &grid, T::zero(), T::one());
        let lu = a.factor()?;
        Ok(Self {
            params: *params,
            grid,
            matrix: a,
            lu,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn params(&self) -> &Params<T> {
        &self.params
    }

    /// Solve `A u = f` with the hinged boundary conditions.
    ///
    /// `f` must carry one value per node; only the entries at `r < 1` enter
    /// (the boundary rows are the boundary conditions).
    pub fn solve(&self, f: &[T]) -> Result<PlateField<T>> {
        solve_interleaved(&self.matrix, &self.lu, &self.grid, f)
    }

    /// `beta Delta^2 u - tau Delta u` by two nested radial Laplacians.
    ///
    /// The inner Laplacian closes the boundary value with one-sided stencils,
    /// so this is the free differential action; values are meaningful at
    /// `r < 1`.
    pub fn apply(&self, u: &PlateField<T>) -> Result<Vec<T>> {
        if u.grid().n() != self.grid.n() {
            return Err(Error::GridMismatch {
                expected: self.grid.n(),
                got: u.grid().n(),
            });
        }
        let lap = self.grid.radial_laplacian(u.values())?;
        let lap2 = self.grid.radial_laplacian(&lap)?;
        Ok(lap2
            .iter()
            .zip(&lap)
            .map(|(&l2, &l)| self.params.beta * l2 - self.params.tau * l)
            .collect())
    }

    /// The operator with the hinged closure folded in: the inner Laplacian's
    /// boundary value comes from the Steklov condition, exactly as in the
    /// assembled system, so this is the exact inverse of [`Self::solve`] on
    /// fields with `u(1) = 0`. Returns values at nodes `0..n`.
    pub fn apply_condensed(&self, u: &[T]) -> Result<Vec<T>> {
        let n = self.grid.n();
        if u.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: u.len(),
            });
        }
        let h = self.grid.h();
        let h2 = h * h;
        let two = T::of(2.0);
        let lap = self.grid.radial_laplacian(u)?;
        let mut v: Vec<T> = lap.iter().map(|&l| -l).collect();
        let uprime = self.grid.boundary_normal_derivative(u)?;
        v[n] = -(T::one() - self.params.sigma) * self.params.kappa * uprime;

        let mut out = vec![T::zero(); n];
        out[0] = -self.params.beta * T::of(4.0) * (v[1] - v[0]) / h2 + self.params.tau * v[0];
        for i in 1..n {
            let r = self.grid.r(i);
            let d2 = (v[i + 1] - two * v[i] + v[i - 1]) / h2;
            let d1 = (v[i + 1] - v[i - 1]) / (two * h);
            out[i] = -self.params.beta * (d2 + d1 / r) + self.params.tau * v[i];
        }
        Ok(out)
    }
}

/// Residuals of the two hinged conditions,
/// `(|u(1)|, |Delta u(1) - (1 - sigma) kappa u'(1)|)`,
/// evaluated with the grid's one-sided stencils.
pub fn check_hinged_bc<T: Scalar>(u: &PlateField<T>, p: &Params<T>) -> (T, T) {
    let g = u.grid();
    let n = g.n();
    let first = u.values()[n].abs();
    let lap1 = g.boundary_second_derivative(u.values()).unwrap()
        + g.boundary_normal_derivative(u.values()).unwrap();
    let uprime = g.boundary_normal_derivative(u.values()).unwrap();
    let second = (lap1 - (T::one() - p.sigma) * p.kappa * uprime).abs();
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;

    fn params(beta: f64, tau: f64, sigma: f64) -> Params<f64> {
        Params {
            beta,
            tau,
            sigma,
            eps: 0.1,
            lambda: 0.0,
            kappa: 1.0,
        }
    }

    fn paraboloid(grid: &Arc<RadialGrid<f64>>) -> PlateField<f64> {
        PlateField::from_fn(grid.clone(), |r| 1.0 - r * r)
    }

    /// Closed-form solution of `Delta^2 u = -1` with hinged conditions on the
    /// unit disc: `u = -r^4/64 + A r^2 + B` with `A` fixed by the Steklov row
    /// and `B` by `u(1) = 0`.
    fn hinged_disc_solution(sigma: f64, r: f64) -> f64 {
        let a = (3.0 + sigma) / (32.0 * (1.0 + sigma));
        let b = 1.0 / 64.0 - a;
        -r.powi(4) / 64.0 + a * r * r + b
    }

    #[test]
    fn closed_form_oracle_at_sigma_zero() {
        // A from v(1) = -u'(1): 1/4 - 4A = 1/16 - 2A -> A = 3/32, B = -5/64.
        assert!((hinged_disc_solution(0.0, 0.0) + 5.0 / 64.0).abs() < 1e-16);
        // Navier limit: A = 1/16, B = -3/64.
        assert!((hinged_disc_solution(1.0, 0.0) + 3.0 / 64.0).abs() < 1e-16);
    }

    #[test]
    fn apply_on_paraboloid() {
        let grid = RadialGrid::shared(64).unwrap();
        let op = PlateOperator::new(&params(1.0, 1.0, 0.0), grid.clone()).unwrap();
        let u = paraboloid(&grid);
        let au = op.apply(&u).unwrap();
        for i in 0..grid.n() {
            assert!((au[i] - 4.0).abs() < 1e-9, "node {i}: {}", au[i]);
        }

        let zero = PlateField::zeros(grid.clone());
        for v in op.apply(&zero).unwrap() {
            assert_eq!(v, 0.0);
        }

        let op0 = PlateOperator::new(&params(1.0, 0.0, 0.0), grid.clone()).unwrap();
        for (i, v) in op0.apply(&u).unwrap().iter().enumerate().take(grid.n()) {
            assert!(v.abs() < 1e-9, "node {i}: {v}");
        }
    }

    #[test]
    fn solve_matches_closed_form() {
        let grid = RadialGrid::shared(256).unwrap();
        let f = vec![-1.0; 257];
        for sigma in [0.0, 1.0] {
            let op = PlateOperator::new(&params(1.0, 0.0, sigma), grid.clone()).unwrap();
            let u = op.solve(&f).unwrap();
            let expected = hinged_disc_solution(sigma, 0.0);
            assert!(
                (u.values()[0] - expected).abs() < 1e-5,
                "sigma {sigma}: {} vs {expected}",
                u.values()[0]
            );
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let grid = RadialGrid::shared(64).unwrap();
        let op = PlateOperator::new(&params(1.0, 1.0, 0.3), grid.clone()).unwrap();
        let u = op.solve(&vec![0.0; 65]).unwrap();
        assert!(u.sup_norm() < 1e-14);
    }

    #[test]
    fn solve_enforces_hinged_conditions() {
        // the first condition is a boundary row, exact to rounding; the
        // Steklov residual re-measured with one-sided stencils carries the
        // stencils' own O(h^2) truncation and shrinks at second order
        let mut residuals = Vec::new();
        for n in [128usize, 256] {
            let grid = RadialGrid::shared(n).unwrap();
            let p = params(1.0, 0.0, 0.0);
            let op = PlateOperator::new(&p, grid.clone()).unwrap();
            let u = op.solve(&vec![-1.0; n + 1]).unwrap();
            let (bc1, bc2) = check_hinged_bc(&u, &p);
            assert!(bc1 <= 1e-12, "u(1) residual {bc1}");
            let h2 = grid.h() * grid.h();
            assert!(bc2 <= h2, "Steklov residual {bc2} vs h^2 {h2}");
            residuals.push(bc2);
        }
        let order = (residuals[0] / residuals[1]).log2();
        assert!(order > 1.8 && order < 2.2, "order {order}");
    }

    #[test]
    fn hinged_residuals_of_probe_fields() {
        let grid = RadialGrid::shared(64).unwrap();
        let p = params(1.0, 0.0, 1.0);
        let u = paraboloid(&grid);
        let (bc1, bc2) = check_hinged_bc(&u, &p);
        assert!(bc1 < 1e-12);
        assert!((bc2 - 4.0).abs() < 1e-9, "Navier residual {bc2}");

        let zero = PlateField::zeros(grid);
        let (z1, z2) = check_hinged_bc(&zero, &p);
        assert_eq!((z1, z2), (0.0, 0.0));
    }

    #[test]
    fn condensed_apply_inverts_solve() {
        // recomputing A u amplifies rounding by the operator norm (~h^-4),
        // so the tolerance is grid-aware
        for (n, tol) in [(64usize, 1e-8), (128, 1e-7)] {
            let grid = RadialGrid::shared(n).unwrap();
            let op = PlateOperator::new(&params(2.0, 0.7, 0.3), grid.clone()).unwrap();
            let f: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&r| -1.0 - 0.5 * (3.0 * r).cos())
                .collect();
            let u = op.solve(&f).unwrap();
            let back = op.apply_condensed(u.values()).unwrap();
            for i in 0..grid.n() {
                assert!(
                    (back[i] - f[i]).abs() < tol,
                    "n {n} node {i}: {} vs {}",
                    back[i],
                    f[i]
                );
            }
        }
    }

    #[test]
    fn solve_of_condensed_apply_is_identity() {
        let grid = RadialGrid::shared(128).unwrap();
        let op = PlateOperator::new(&params(1.0, 1.0, -0.4), grid.clone()).unwrap();
        // a boundary-conforming smooth field
        let u = PlateField::from_fn(grid.clone(), |r| -0.3 * (1.0 - r * r) * (1.0 + r * r / 2.0));
        let mut f = op.apply_condensed(u.values()).unwrap();
        f.push(0.0);
        let u2 = op.solve(&f).unwrap();
        for (a, b) in u.values().iter().zip(u2.values()) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn sign_preservation_on_random_nonpositive_forcing() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let grid = RadialGrid::shared(96).unwrap();
        for trial in 0..20 {
            let sigma = rng.random_range(-0.8..0.9);
            let tau = rng.random_range(0.0..3.0);
            let op = PlateOperator::new(&params(1.0, tau, sigma), grid.clone()).unwrap();
            let (a, b, c): (f64, f64, f64) = (
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
            );
            let f: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&r| -(0.05 + a + b * r * r + c * (2.0 * r).cos().powi(2)))
                .collect();
            let u = op.solve(&f).unwrap();
            for i in 0..grid.n() {
                assert!(u.values()[i] < 0.0, "trial {trial} node {i}");
            }
            let up = grid.boundary_normal_derivative(u.values()).unwrap();
            assert!(up > 0.0, "trial {trial}: u'(1) = {up}");
        }
    }

    #[test]
    fn f32_plate_solve() {
        let grid = RadialGrid::<f32>::shared(64).unwrap();
        let p = Params {
            beta: 1.0f32,
            tau: 0.0,
            sigma: 0.0,
            eps: 0.1,
            lambda: 0.0,
            kappa: 1.0,
        };
        let op = PlateOperator::new(&p, grid).unwrap();
        let u = op.solve(&vec![-1.0f32; 65]).unwrap();
        assert!((u.values()[0] + 5.0 / 64.0).abs() < 1e-3);
    }
}
