//! Radial discretization of the unit disc and the fixed cylinder.
//!
//! All fields in this crate are radially symmetric, so the disc `D` collapses
//! to the interval `0 <= r <= 1` with node-centered uniform spacing, and the
//! cylinder `D x (0,1)` to a tensor grid in `(r, eta)`. Differential operators
//! use centered stencils with a ghost-node mirror at `r = 0` and one-sided
//! 3- or 4-point stencils at `r = 1`; quadrature is the trapezoid rule in
//! `r dr`, so the area element of the disc is built in.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimum interval count accepted for either grid direction.
pub const MIN_INTERVALS: usize = 16;

/// Uniform radial grid on `[0, 1]` with `n` intervals.
#[derive(Debug, Clone)]
pub struct RadialGrid<T> {
    n: usize,
    h: T,
    nodes: Vec<T>,
    quad_weights: Vec<T>,
}

impl<T: Scalar> RadialGrid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_INTERVALS {
            return Err(Error::InvalidParameter(format!(
                "radial interval count {n} < {MIN_INTERVALS}"
            )));
        }
        let h = T::one() / T::of_usize(n);
        let nodes: Vec<T> = (0..=n).map(|i| T::of_usize(i) * h).collect();
        let mut quad_weights = vec![h; n + 1];
        quad_weights[0] = h / T::of(2.0);
        quad_weights[n] = h / T::of(2.0);
        Ok(Self {
            n,
            h,
            nodes,
            quad_weights,
        })
    }

    pub fn shared(n: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(n)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn r(&self, i: usize) -> T {
        self.nodes[i]
    }

    pub fn quad_weights(&self) -> &[T] {
        &self.quad_weights
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::LengthMismatch {
                expected: self.n + 1,
                got: len,
            });
        }
        Ok(())
    }

    /// `int_D f dx = 2 pi sum_i w_i f_i r_i` (trapezoid rule).
    pub fn integrate_disc(&self, f: &[T]) -> Result<T> {
        self.check_len(f.len())?;
        let mut s = T::zero();
        for i in 0..=self.n {
            s += self.quad_weights[i] * f[i] * self.nodes[i];
        }
        Ok(T::two_pi() * s)
    }

    /// Quadrature inner product `int_D f g dx`.
    pub fn inner_product(&self, f: &[T], g: &[T]) -> Result<T> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        let mut s = T::zero();
        for i in 0..=self.n {
            s += self.quad_weights[i] * f[i] * g[i] * self.nodes[i];
        }
        Ok(T::two_pi() * s)
    }

    /// Quadrature L2 norm.
    pub fn l2_norm(&self, f: &[T]) -> Result<T> {
        Ok(self.inner_product(f, f)?.max(T::zero()).sqrt())
    }

    /// Radial Laplacian `u'' + u'/r`.
    ///
    /// Interior nodes use centered differences; `r = 0` uses the mirror
    /// condition (`2 u''(0)`, second-order); the entry at `r = 1` is a
    /// one-sided second-order estimate for callers that need a boundary
    /// value (the boundary row of a solve never uses it).
    pub fn radial_laplacian(&self, u: &[T]) -> Result<Vec<T>> {
        self.check_len(u.len())?;
        let n = self.n;
        let h = self.h;
        let h2 = h * h;
        let mut out = vec![T::zero(); n + 1];
        out[0] = T::of(4.0) * (u[1] - u[0]) / h2;
        for i in 1..n {
            let r = self.nodes[i];
            let d2 = (u[i + 1] - T::of(2.0) * u[i] + u[i - 1]) / h2;
            let d1 = (u[i + 1] - u[i - 1]) / (T::of(2.0) * h);
            out[i] = d2 + d1 / r;
        }
        out[n] = self.boundary_second_derivative(u)? + self.boundary_normal_derivative(u)?;
        Ok(out)
    }

    /// First radial derivative: zero at the axis by symmetry, centered in the
    /// interior, one-sided second-order at `r = 1`.
    pub fn radial_derivative(&self, u: &[T]) -> Result<Vec<T>> {
        self.check_len(u.len())?;
        let n = self.n;
        let two_h = T::of(2.0) * self.h;
        let mut out = vec![T::zero(); n + 1];
        for i in 1..n {
            out[i] = (u[i + 1] - u[i - 1]) / two_h;
        }
        out[n] = self.boundary_normal_derivative(u)?;
        Ok(out)
    }

    /// Second radial derivative (mirror at the axis, one-sided at `r = 1`).
    pub fn second_derivative(&self, u: &[T]) -> Result<Vec<T>> {
        self.check_len(u.len())?;
        let n = self.n;
        let h2 = self.h * self.h;
        let mut out = vec![T::zero(); n + 1];
        out[0] = T::of(2.0) * (u[1] - u[0]) / h2;
        for i in 1..n {
            out[i] = (u[i + 1] - T::of(2.0) * u[i] + u[i - 1]) / h2;
        }
        out[n] = self.boundary_second_derivative(u)?;
        Ok(out)
    }

    /// One-sided second-order normal derivative `u'(1)`.
    pub fn boundary_normal_derivative(&self, u: &[T]) -> Result<T> {
        self.check_len(u.len())?;
        let n = self.n;
        Ok(
            (T::of(3.0) * u[n] - T::of(4.0) * u[n - 1] + u[n - 2])
                / (T::of(2.0) * self.h),
        )
    }

    /// One-sided second-order estimate of `u''(1)`.
    pub fn boundary_second_derivative(&self, u: &[T]) -> Result<T> {
        self.check_len(u.len())?;
        let n = self.n;
        Ok(
            (T::of(2.0) * u[n] - T::of(5.0) * u[n - 1] + T::of(4.0) * u[n - 2] - u[n - 3])
                / (self.h * self.h),
        )
    }
}

/// Tensor grid for the fixed cylinder `D x (0, 1)`; `eta` is the transformed
/// vertical coordinate.
#[derive(Debug, Clone)]
pub struct CylinderGrid<T> {
    radial: Arc<RadialGrid<T>>,
    m: usize,
    h_eta: T,
    eta: Vec<T>,
}

impl<T: Scalar> CylinderGrid<T> {
    pub fn new(radial: Arc<RadialGrid<T>>, m: usize) -> Result<Self> {
        if m < MIN_INTERVALS {
            return Err(Error::InvalidParameter(format!(
                "vertical interval count {m} < {MIN_INTERVALS}"
            )));
        }
        let h_eta = T::one() / T::of_usize(m);
        let eta: Vec<T> = (0..=m).map(|j| T::of_usize(j) * h_eta).collect();
        Ok(Self {
            radial,
            m,
            h_eta,
            eta,
        })
    }

    pub fn shared(n: usize, m: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(RadialGrid::shared(n)?, m)?))
    }

    pub fn radial(&self) -> &Arc<RadialGrid<T>> {
        &self.radial
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h_eta(&self) -> T {
        self.h_eta
    }

    pub fn eta(&self, j: usize) -> T {
        self.eta[j]
    }

    pub fn eta_nodes(&self) -> &[T] {
        &self.eta
    }

    /// Trapezoid weight in the eta direction.
    pub fn eta_weight(&self, j: usize) -> T {
        if j == 0 || j == self.m {
            self.h_eta / T::of(2.0)
        } else {
            self.h_eta
        }
    }

    /// Flat index of node `(i, j)`, row-major in `i`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.m + 1) + j
    }

    pub fn num_nodes(&self) -> usize {
        (self.radial.n() + 1) * (self.m + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> RadialGrid<f64> {
        RadialGrid::new(n).unwrap()
    }

    #[test]
    fn rejects_small_grids() {
        assert!(RadialGrid::<f64>::new(8).is_err());
        let r = RadialGrid::<f64>::shared(16).unwrap();
        assert!(CylinderGrid::new(r, 4).is_err());
    }

    #[test]
    fn node_layout() {
        let g = grid(32);
        assert_eq!(g.r(0), 0.0);
        assert_eq!(g.r(32), 1.0);
        assert!((g.r(7) - 7.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn quadrature_of_one_is_pi() {
        for n in [16, 64, 256] {
            let g = grid(n);
            let f = vec![1.0; n + 1];
            let area = g.integrate_disc(&f).unwrap();
            assert!(
                (area - std::f64::consts::PI).abs() < 1e-12 * std::f64::consts::PI,
                "n = {n}: {area}"
            );
        }
    }

    #[test]
    fn quadrature_of_r2_and_paraboloid() {
        let g = grid(128);
        let r2: Vec<f64> = g.nodes().iter().map(|&r| r * r).collect();
        let para: Vec<f64> = g.nodes().iter().map(|&r| 1.0 - r * r).collect();
        // 2 pi int r^3 dr = pi/2; 2 pi int (1 - r^2) r dr = pi/2
        let half_pi = std::f64::consts::PI / 2.0;
        assert!((g.integrate_disc(&r2).unwrap() - half_pi).abs() < 1e-4);
        assert!((g.integrate_disc(&para).unwrap() - half_pi).abs() < 1e-4);
    }

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = grid(64);
        let u: Vec<f64> = g.nodes().iter().map(|&r| 1.0 - r * r).collect();
        let lap = g.radial_laplacian(&u).unwrap();
        for (i, &v) in lap.iter().enumerate() {
            assert!((v + 4.0).abs() < 1e-11, "node {i}: {v}");
        }
    }

    #[test]
    fn laplacian_of_quartic_is_second_order() {
        // Delta r^4 = 16 r^2
        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&n| {
                let g = grid(n);
                let u: Vec<f64> = g.nodes().iter().map(|&r| r.powi(4)).collect();
                let lap = g.radial_laplacian(&u).unwrap();
                (0..n)
                    .map(|i| (lap[i] - 16.0 * g.r(i) * g.r(i)).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.9, "observed order {order}");
        let order = (errs[1] / errs[2]).log2();
        assert!(order > 1.9, "observed order {order}");
    }

    #[test]
    fn laplacian_annihilates_constants() {
        let g = grid(32);
        let u = vec![3.5; 33];
        for v in g.radial_laplacian(&u).unwrap() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_derivative_examples() {
        let g = grid(64);
        let u: Vec<f64> = g.nodes().iter().map(|&r| 1.0 - r * r).collect();
        assert!((g.boundary_normal_derivative(&u).unwrap() + 2.0).abs() < 1e-12);

        let z = vec![0.0; 65];
        assert_eq!(g.boundary_normal_derivative(&z).unwrap(), 0.0);

        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&n| {
                let g = grid(n);
                let u: Vec<f64> = g.nodes().iter().map(|&r| r.powi(4)).collect();
                (g.boundary_normal_derivative(&u).unwrap() - 4.0).abs()
            })
            .collect();
        assert!(errs[0] / errs[1] > 3.5 && errs[1] / errs[2] > 3.5, "{errs:?}");
    }

    #[test]
    fn quadrature_refinement_order() {
        // smooth radial integrand: f = cos(pi r / 2)
        let exact = 2.0 * std::f64::consts::PI * (4.0 / (std::f64::consts::PI.powi(2)))
            * (std::f64::consts::PI / 2.0 - 1.0);
        let err = |n: usize| {
            let g = grid(n);
            let f: Vec<f64> = g
                .nodes()
                .iter()
                .map(|&r| (std::f64::consts::PI * r / 2.0).cos())
                .collect();
            (g.integrate_disc(&f).unwrap() - exact).abs()
        };
        let (e32, e64, e128) = (err(32), err(64), err(128));
        assert!((e32 / e64).log2() > 1.9, "{e32} {e64}");
        assert!((e64 / e128).log2() > 1.9, "{e64} {e128}");
    }

    #[test]
    fn f32_grid_basics() {
        let g = RadialGrid::<f32>::new(32).unwrap();
        let f = vec![1.0f32; 33];
        assert!((g.integrate_disc(&f).unwrap() - std::f32::consts::PI).abs() < 1e-5);
    }
}
