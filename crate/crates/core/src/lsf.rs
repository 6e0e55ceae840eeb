//! Little Sinc Function bases on `[-L, L]`.
//!
//! The periodic family has `N + 1` functions peaked at `x_k = 2Lk/(N+1)`,
//! `k = -N/2 ..= N/2`; the Dirichlet family has `N - 1` functions peaked at
//! `x_k = 2Lk/N`, `k = -N/2+1 ..= N/2-1`, and vanishes at `x = +-L`. Each
//! function equals 1 at its own node and 0 at every other node.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Periodic,
    Dirichlet,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Dirichlet => "dirichlet",
        }
    }
}

/// Below this distance (in the angle variable) from a node the quotient
/// formulas are replaced by their Taylor expansion.
const NODE_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsfBasis {
    kind: BoundaryKind,
    n: u32,
    half_width: f64,
}

impl LsfBasis {
    pub fn new(kind: BoundaryKind, n: u32, half_width: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Input(format!("N must be even and >= 2, got {n}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Input(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            kind,
            n,
            half_width,
        })
    }

    pub fn periodic(n: u32, half_width: f64) -> Result<Self> {
        Self::new(BoundaryKind::Periodic, n, half_width)
    }

    pub fn dirichlet(n: u32, half_width: f64) -> Result<Self> {
        Self::new(BoundaryKind::Dirichlet, n, half_width)
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of basis functions.
    pub fn size(&self) -> usize {
        match self.kind {
            BoundaryKind::Periodic => self.n as usize + 1,
            BoundaryKind::Dirichlet => self.n as usize - 1,
        }
    }

    /// Smallest signed index.
    pub fn first_index(&self) -> i64 {
        match self.kind {
            BoundaryKind::Periodic => -(self.n as i64) / 2,
            BoundaryKind::Dirichlet => -(self.n as i64) / 2 + 1,
        }
    }

    pub fn last_index(&self) -> i64 {
        -self.first_index()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.first_index()..=self.last_index()
    }

    /// Position of signed index `k` in storage order.
    pub fn offset(&self, k: i64) -> Result<usize> {
        if k < self.first_index() || k > self.last_index() {
            return Err(Error::Index {
                index: k,
                lo: self.first_index(),
                hi: self.last_index(),
            });
        }
        Ok((k - self.first_index()) as usize)
    }

    /// Number of panels: `N + 1` (periodic) or `N` (Dirichlet).
    fn panels(&self) -> f64 {
        match self.kind {
            BoundaryKind::Periodic => self.n as f64 + 1.0,
            BoundaryKind::Dirichlet => self.n as f64,
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.panels()
    }

    pub fn node(&self, k: i64) -> f64 {
        k as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.indices().map(|k| self.node(k)).collect()
    }

    /// `s_k(x)`.
    pub fn value(&self, k: i64, x: f64) -> Result<f64> {
        self.offset(k)?;
        Ok(self.value_unchecked(k, x))
    }

    fn value_unchecked(&self, k: i64, x: f64) -> f64 {
        let nf = self.n as f64;
        let theta = PI * x / (2.0 * self.half_width);
        match self.kind {
            BoundaryKind::Periodic => {
                // (-1)^k sin((N+1) theta) / ((N+1) sin(theta - theta_k)) written
                // as a Dirichlet kernel in u = theta - theta_k.
                let u = theta - PI * k as f64 / (nf + 1.0);
                if u.abs() < NODE_EPS {
                    let m = nf + 1.0;
                    1.0 - (m * m - 1.0) * u * u / 6.0
                } else {
                    ((nf + 1.0) * u).sin() / ((nf + 1.0) * u.sin())
                }
            }
            BoundaryKind::Dirichlet => {
                let tk = PI * k as f64 / nf;
                let e = theta - tk;
                if e.abs() < NODE_EPS {
                    let t = tk.tan();
                    1.0 + 0.5 * t * e + (1.0 / 6.0 + 0.25 * t * t - nf * nf / 6.0) * e * e
                } else {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign / nf * tk.cos() * (nf * theta).sin() / (theta.sin() - tk.sin())
                }
            }
        }
    }

    /// `sum_k values[k] s_k(x)`, with `values` in storage order.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.size() {
            return Err(Error::Input(format!(
                "expected {} node values, got {}",
                self.size(),
                values.len()
            )));
        }
        Ok(self
            .indices()
            .zip(values)
            .map(|(k, v)| v * self.value_unchecked(k, x))
            .sum())
    }

    /// `c_kj = s_k''(x_j)` in closed form, storage order in both indices.
    pub fn second_derivative_matrix(&self) -> SymMatrix {
        let nf = self.n as f64;
        let scale = (PI / (2.0 * self.half_width)).powi(2);
        let first = self.first_index();
        let entry: Box<dyn Fn(i64, i64) -> f64> = match self.kind {
            BoundaryKind::Periodic => Box::new(move |k, j| {
                if k == j {
                    -nf * (nf + 2.0) / 3.0
                } else {
                    let u = PI * (j - k) as f64 / (nf + 1.0);
                    let sign = if (j - k) % 2 == 0 { 1.0 } else { -1.0 };
                    -2.0 * sign * u.cos() / u.sin().powi(2)
                }
            }),
            BoundaryKind::Dirichlet => Box::new(move |k, j| {
                let tk = PI * k as f64 / nf;
                if k == j {
                    (1.0 - nf * nf) / 3.0 + 0.5 * tk.tan().powi(2)
                } else {
                    let tj = PI * j as f64 / nf;
                    let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                    -2.0 * sign * tk.cos() * tj.cos() / (tj.sin() - tk.sin()).powi(2)
                }
            }),
        };
        SymMatrix::from_fn(self.size(), |a, b| {
            scale * entry(first + a as i64, first + b as i64)
        })
    }
}
