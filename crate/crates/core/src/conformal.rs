//! Conformal maps from the rectangle `[-lx, lx] x [-pi, pi]` onto rings.
//!
//! A map is `g(z) = C sum_k eta_k exp((k+1)(z - lx))` with `eta_0 = 1`. The
//! vertical edges `x = +-lx` become the outer and inner boundaries; the
//! horizontal edges are identified, closing the ring.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::GaussLegendre;

/// Default number of quadrature nodes per direction in [`PowerSeriesMap::geometry`].
pub const DEFAULT_QUAD_N: usize = 256;

const PROBE_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapSpec", into = "MapSpec")]
pub struct PowerSeriesMap {
    lx: f64,
    c: f64,
    eta: Vec<f64>,
}

/// JSON form of a map: `{"lx": .., "c": .., "eta": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MapSpec {
    lx: f64,
    #[serde(default = "one")]
    c: f64,
    eta: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<MapSpec> for PowerSeriesMap {
    type Error = Error;

    fn try_from(spec: MapSpec) -> Result<Self> {
        PowerSeriesMap::new(spec.lx, spec.c, spec.eta)
    }
}

impl From<PowerSeriesMap> for MapSpec {
    fn from(m: PowerSeriesMap) -> Self {
        MapSpec {
            lx: m.lx,
            c: m.c,
            eta: m.eta,
        }
    }
}

/// Area, boundary lengths and the expected constant of the counting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingGeometry {
    pub area: f64,
    pub perimeter_total: f64,
    pub perimeter_outer: f64,
    pub perimeter_inner: f64,
    /// Constant term of the smoothed counting function; zero for one hole.
    pub euler_constant: f64,
}

impl PowerSeriesMap {
    /// Validates the coefficients and rejects maps whose density vanishes
    /// anywhere on a 64 x 64 probe grid of the closed rectangle.
    pub fn new(lx: f64, c: f64, eta: Vec<f64>) -> Result<Self> {
        if !(lx > 0.0) || !lx.is_finite() {
            return Err(Error::Domain(format!("lx must be positive, got {lx}")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("dilation must be positive, got {c}")));
        }
        if eta.first() != Some(&1.0) {
            return Err(Error::Domain("eta must start with eta_0 = 1".into()));
        }
        if eta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("eta has non-finite coefficients".into()));
        }
        let map = Self { lx, c, eta };
        for i in 0..PROBE_N {
            let x = -lx + 2.0 * lx * i as f64 / (PROBE_N - 1) as f64;
            for j in 0..PROBE_N {
                let y = -PI + 2.0 * PI * j as f64 / (PROBE_N - 1) as f64;
                map.sigma(x, y)?;
            }
        }
        Ok(map)
    }

    /// The exponential map onto the annulus `a < r < 1`.
    pub fn annulus(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!(
                "inner radius must lie in (0, 1), got {a}"
            )));
        }
        Self::new(-a.ln() / 2.0, 1.0, vec![1.0])
    }

    /// `exp(z - lx) + alpha exp(2(z - lx))`.
    pub fn robnik(alpha: f64, lx: f64) -> Result<Self> {
        Self::new(lx, 1.0, vec![1.0, alpha])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MapSpec = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("bad map specification: {e}")))?;
        Self::try_from(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serializes")
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// Whether this is the plain exponential (circular annulus) map.
    pub fn is_circular(&self) -> bool {
        self.eta.iter().skip(1).all(|&v| v == 0.0)
    }

    /// `g(x + iy)` as `(u, v)`, dilation included.
    pub fn map_point(&self, x: f64, y: f64) -> (f64, f64) {
        let w = Complex64::new(x - self.lx, y).exp();
        let mut power = w;
        let mut sum = Complex64::new(0.0, 0.0);
        for &eta in &self.eta {
            sum += eta * power;
            power *= w;
        }
        (self.c * sum.re, self.c * sum.im)
    }

    /// Density of the undilated map: the double cosine sum
    /// `sum_kj eta_k eta_j (k+1)(j+1) e^{(x-lx)(k+j+2)} cos(y (k-j))`.
    /// `y` is first wrapped into `[-pi, pi)`.
    pub(crate) fn sigma_raw(&self, x: f64, y: f64) -> f64 {
        let y = (y + PI).rem_euclid(2.0 * PI) - PI;
        let e = (x - self.lx).exp();
        let mut a = Vec::with_capacity(self.eta.len());
        let mut power = e;
        for (k, &eta) in self.eta.iter().enumerate() {
            a.push(eta * (k + 1) as f64 * power);
            power *= e;
        }
        let mut total: f64 = a.iter().map(|v| v * v).sum();
        for k in 1..a.len() {
            for j in 0..k {
                total += 2.0 * a[k] * a[j] * ((k - j) as f64 * y).cos();
            }
        }
        total
    }

    /// Conformal density `|d g_bar / dz|^2` of the undilated map.
    pub fn sigma(&self, x: f64, y: f64) -> Result<f64> {
        let s = self.sigma_raw(x, y);
        if !(s > 0.0) {
            return Err(Error::Degeneracy(format!(
                "conformal density {s:e} <= 0 at ({x}, {y}): map is not conformal on the rectangle"
            )));
        }
        Ok(s)
    }

    /// Area by Gauss (x) x trapezoid (y) quadrature of `C^2 Sigma`, boundary
    /// lengths by the trapezoid rule on `C sqrt(Sigma)` along `x = +-lx`.
    pub fn geometry(&self, quad_n: usize) -> Result<RingGeometry> {
        let quad_n = quad_n.max(2);
        let rule = GaussLegendre::new(quad_n);
        let h = 2.0 * PI / quad_n as f64;
        let ys: Vec<f64> = (0..quad_n).map(|j| -PI + j as f64 * h).collect();
        let mut area = 0.0;
        for (x, w) in rule.mapped(-self.lx, self.lx) {
            let mut row = 0.0;
            for &y in &ys {
                row += self.sigma(x, y)?;
            }
            area += w * h * row;
        }
        let edge = |x: f64| -> Result<f64> {
            let mut s = 0.0;
            for &y in &ys {
                s += self.sigma(x, y)?.sqrt();
            }
            Ok(self.c * h * s)
        };
        let outer = edge(self.lx)?;
        let inner = edge(-self.lx)?;
        Ok(RingGeometry {
            area: self.c * self.c * area,
            perimeter_total: outer + inner,
            perimeter_outer: outer,
            perimeter_inner: inner,
            euler_constant: 0.0,
        })
    }
}

/// Smallest, largest and mean width of the Robnik ring
/// `exp(z - lx) + alpha exp(2(z - lx))`.
pub fn robnik_widths(alpha: f64, lx: f64) -> (f64, f64, f64) {
    let base = 1.0 - (-2.0 * lx).exp();
    let spread = alpha * (1.0 - (-4.0 * lx).exp());
    (base - spread, base + spread, base)
}

/// Energies of the dilated map: `E = E_bar / C^2`.
pub fn rescale_energy(energy_unscaled: f64, c: f64) -> f64 {
    energy_unscaled / (c * c)
}
