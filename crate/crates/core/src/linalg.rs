//! Banded LU factorization with partial pivoting.
//!
//! Both elliptic solves in this crate (the plate system and the transformed
//! potential system) produce matrices with fixed, narrow bandwidth, so a
//! direct band factorization in LAPACK-style storage is used instead of a
//! general sparse solver. Factorizations are deterministic, which keeps
//! repeated runs byte-identical.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Band matrix in column-major band storage: entry `(i, j)` is kept at
/// `ab[j * (kl + ku + 1) + (i - j + ku)]` for `j - ku <= i <= j + kl`.
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            kl,
            ku,
            ab: vec![T::zero(); n * (kl + ku + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        assert!(
            i + self.ku >= j && j + self.kl >= i,
            "entry ({i}, {j}) outside band (kl = {}, ku = {})",
            self.kl,
            self.ku
        );
        j * (self.kl + self.ku + 1) + (i + self.ku - j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if i + self.ku >= j && j + self.kl >= i {
            self.ab[j * (self.kl + self.ku + 1) + (i + self.ku - j)]
        } else {
            T::zero()
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for j in 0..self.n {
            let xj = x[j];
            if xj == T::zero() {
                continue;
            }
            let ilo = j.saturating_sub(self.ku);
            let ihi = (j + self.kl).min(self.n - 1);
            let col = j * (self.kl + self.ku + 1);
            for i in ilo..=ihi {
                y[i] += self.ab[col + (i + self.ku - j)] * xj;
            }
        }
        y
    }

    /// Max row sum norm.
    pub fn inf_norm(&self) -> T {
        let mut rows = vec![T::zero(); self.n];
        for j in 0..self.n {
            let ilo = j.saturating_sub(self.ku);
            let ihi = (j + self.kl).min(self.n - 1);
            let col = j * (self.kl + self.ku + 1);
            for i in ilo..=ihi {
                rows[i] += self.ab[col + (i + self.ku - j)].abs();
            }
        }
        crate::scalar::slice_max(&rows)
    }

    /// Normwise backward error of a candidate solution `x` of `A x = b`.
    pub fn backward_error(&self, x: &[T], b: &[T]) -> T {
        let r = self.matvec(x);
        let num = r
            .iter()
            .zip(b)
            .fold(T::zero(), |acc, (&ri, &bi)| acc.max((ri - bi).abs()));
        let den = self.inf_norm() * crate::scalar::sup_norm(x) + crate::scalar::sup_norm(b);
        if den == T::zero() {
            num
        } else {
            num / den
        }
    }

    /// LU factorization with partial pivoting.
    pub fn factor(&self) -> Result<BandLu<T>> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let ub = kl + ku; // upper bandwidth after pivoting fill
        let ldf = 2 * kl + ku + 1;
        let lda = kl + ku + 1;
        let mut f = vec![T::zero(); n * ldf];
        for j in 0..n {
            for r in 0..lda {
                f[j * ldf + kl + r] = self.ab[j * lda + r];
            }
        }
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let base = j * ldf + ku + kl;
            let mut p = 0usize;
            let mut maxv = f[base].abs();
            for k in 1..=km {
                let v = f[base + k].abs();
                if v > maxv {
                    maxv = v;
                    p = k;
                }
            }
            if maxv == T::zero() {
                return Err(Error::SingularSystem { column: j });
            }
            ipiv[j] = j + p;
            if p != 0 {
                let cmax = (j + ub).min(n - 1);
                for c in j..=cmax {
                    let a = c * ldf + (ku + kl + j - c);
                    f.swap(a, a + p);
                }
            }
            let piv = f[base];
            for k in 1..=km {
                f[base + k] /= piv;
            }
            let cmax = (j + ub).min(n - 1);
            for c in (j + 1)..=cmax {
                let a = c * ldf + (ku + kl + j - c);
                let fj = f[a];
                if fj != T::zero() {
                    for k in 1..=km {
                        let m = f[base + k];
                        f[a + k] -= m * fj;
                    }
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            ku,
            f,
            ipiv,
        })
    }
}

/// Solve with a fixed number of iterative-refinement sweeps. One sweep is
/// enough to pull the forward error of the well-conditioned elliptic systems
/// here down to the exactness the closed-form oracles demand.
pub fn solve_refined<T: Scalar>(
    a: &BandMatrix<T>,
    lu: &BandLu<T>,
    b: &[T],
    sweeps: usize,
) -> Vec<T> {
    let mut x = lu.solve(b);
    for _ in 0..sweeps {
        let ax = a.matvec(&x);
        let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &axi)| bi - axi).collect();
        let dx = lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += *di;
        }
    }
    x
}

/// Factored form produced by [`BandMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    f: Vec<T>,
    ipiv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    pub fn solve_in_place(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let ub = kl + ku;
        let ldf = 2 * kl + ku + 1;
        for j in 0..n {
            let jp = self.ipiv[j];
            if jp != j {
                b.swap(j, jp);
            }
            let bj = b[j];
            if bj != T::zero() {
                let km = kl.min(n - 1 - j);
                let base = j * ldf + ku + kl;
                for k in 1..=km {
                    let m = self.f[base + k];
                    b[j + k] -= m * bj;
                }
            }
        }
        for j in (0..n).rev() {
            let x = b[j] / self.f[j * ldf + ku + kl];
            b[j] = x;
            if x != T::zero() {
                let ilo = j.saturating_sub(ub);
                for i in ilo..j {
                    let u = self.f[j * ldf + (ku + kl + i - j)];
                    b[i] -= u * x;
                }
            }
        }
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
