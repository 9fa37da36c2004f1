//! Flat `key=value` run configuration shared by the command-line tools.

use crate::error::{Error, Result};
use crate::model::Params;
use crate::scalar::Scalar;

/// Keys accepted in a config file, in canonical output order.
pub const CONFIG_KEYS: [&str; 10] = [
    "beta", "tau", "sigma", "eps", "lambda", "kappa", "nr", "neta", "tol", "max_iter",
];

/// Parameters plus discretization and solver controls.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig<T> {
    pub params: Params<T>,
    pub nr: usize,
    pub neta: usize,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for RunConfig<T> {
    fn default() -> Self {
        Self {
            params: Params::default(),
            nr: 64,
            neta: 64,
            tol: T::of(1e-10),
            max_iter: 200,
        }
    }
}

impl<T: Scalar> RunConfig<T> {
    /// Parse a flat `key=value` file. Blank lines and `#` comments are
    /// allowed; unknown keys are an error.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
            })?;
            cfg.set_key(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one key from its text form (also used for flag overrides).
    pub fn set_key(&mut self, key: &str, value: &str) -> Result<()> {
        let parse_real = |v: &str| -> Result<T> {
            v.parse::<f64>()
                .map(T::of)
                .map_err(|_| Error::Config(format!("key {key}: bad number {v:?}")))
        };
        let parse_size = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("key {key}: bad integer {v:?}")))
        };
        match key {
            "beta" => self.params.beta = parse_real(value)?,
            "tau" => self.params.tau = parse_real(value)?,
            "sigma" => self.params.sigma = parse_real(value)?,
            "eps" => self.params.eps = parse_real(value)?,
            "lambda" => self.params.lambda = parse_real(value)?,
            "kappa" => self.params.kappa = parse_real(value)?,
            "nr" => self.nr = parse_size(value)?,
            "neta" => self.neta = parse_size(value)?,
            "tol" => self.tol = parse_real(value)?,
            "max_iter" => self.max_iter = parse_size(value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.params.validate();
        if !violations.is_empty() {
            return Err(Error::Config(violations.join("; ")));
        }
        if self.nr < crate::grid::MIN_INTERVALS || self.neta < crate::grid::MIN_INTERVALS {
            return Err(Error::Config(format!(
                "grid sizes must be >= {} (nr = {}, neta = {})",
                crate::grid::MIN_INTERVALS,
                self.nr,
                self.neta
            )));
        }
        if !(self.tol > T::zero() && self.tol <= T::of(1e-4)) {
            return Err(Error::Config("tol must lie in (0, 1e-4]".to_string()));
        }
        Ok(())
    }

    /// Canonical `key=value` rendering (the effective-config echo).
    pub fn render(&self) -> String {
        let p = &self.params;
        let f = crate::report::fmt_scalar::<T>;
        format!(
            "beta={}\ntau={}\nsigma={}\neps={}\nlambda={}\nkappa={}\nnr={}\nneta={}\ntol={}\nmax_iter={}\n",
            f(p.beta),
            f(p.tau),
            f(p.sigma),
            f(p.eps),
            f(p.lambda),
            f(p.kappa),
            self.nr,
            self.neta,
            f(self.tol),
            self.max_iter
        )
    }
}
