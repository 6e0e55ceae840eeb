//! Geometry from a truncated spectrum: improved heat sums `A_m(t)` for the
//! area, a least-squares fit of the heat sum for perimeter and constant, and
//! the counting staircase.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::refine_root;
use crate::spectrum::Spectrum;

/// Points in the log-spaced scan for the optimal `t`.
pub const T_SCAN_POINTS: usize = 400;
/// Points in the log-spaced fit window `[t*/2, 2t*]`.
pub const FIT_POINTS: usize = 64;

/// Ascending positive energies, degenerate levels repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSumSeries {
    energies: Vec<f64>,
}

impl HeatSumSeries {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Input("spectrum is empty".into()));
        }
        if energies.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(Error::Input("energies must be positive and finite".into()));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Input("energies must be ascending".into()));
        }
        Ok(Self { energies })
    }

    pub fn from_spectrum(spectrum: &Spectrum) -> Result<Self> {
        Self::new(spectrum.expanded())
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `sum_n exp(-E_n t)`.
    pub fn heat_sum(&self, t: f64) -> f64 {
        self.energies.iter().map(|e| (-e * t).exp()).sum()
    }

    fn weighted_sum(&self, t: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.energies
            .iter()
            .map(|e| {
                let x = e * t;
                (-x).exp() * f(x)
            })
            .sum()
    }
}

fn check_order(m: u32) -> Result<()> {
    if m > 3 {
        return Err(Error::Input(format!(
            "approximant order must be 0..=3, got {m}"
        )));
    }
    Ok(())
}

/// Polynomial factor of `A_m` in `x = E t`.
fn factor(m: u32, x: f64) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0 * x - 1.0,
        2 => x * (2.0 * x - 3.0),
        _ => x * (4.0 * x * x - 12.0 * x + 3.0) / 3.0,
    }
}

/// Polynomial factor of `dA_m/dt`: `f + x (f' - f)`.
fn derivative_factor(m: u32, x: f64) -> f64 {
    match m {
        0 => 1.0 - x,
        1 => -2.0 * x * x + 5.0 * x - 1.0,
        2 => x * (-2.0 * x * x + 9.0 * x - 6.0),
        _ => x * (-4.0 * x * x * x + 28.0 * x * x - 39.0 * x + 6.0) / 3.0,
    }
}

/// `A_m(t) = 4 pi t sum_n exp(-E_n t) f_m(E_n t)`.
pub fn area_approximant(series: &HeatSumSeries, m: u32, t: f64) -> Result<f64> {
    check_order(m)?;
    if !(t > 0.0) {
        return Err(Error::Input(format!("t must be positive, got {t}")));
    }
    Ok(4.0 * PI * t * series.weighted_sum(t, |x| factor(m, x)))
}

/// `dA_m/dt`, term by term.
pub fn area_approximant_derivative(series: &HeatSumSeries, m: u32, t: f64) -> Result<f64> {
    check_order(m)?;
    Ok(4.0 * PI * series.weighted_sum(t, |x| derivative_factor(m, x)))
}

/// `A_1'^2 + A_2'^2 + A_3'^2`.
pub fn flatness_objective(series: &HeatSumSeries, t: f64) -> f64 {
    series
        .energies
        .iter()
        .fold([0.0; 3], |mut acc, e| {
            let x = e * t;
            let w = (-x).exp();
            for (m, slot) in acc.iter_mut().enumerate() {
                *slot += w * derivative_factor(m as u32 + 1, x);
            }
            acc
        })
        .iter()
        .map(|d| (4.0 * PI * d).powi(2))
        .sum()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Polynomial factor of `d^2A_m/dt^2` (up to `4 pi/t`): `x (g' - g)`.
fn second_derivative_factor(m: u32, x: f64) -> f64 {
    x * match m {
        0 => x - 2.0,
        1 => 2.0 * x * x - 9.0 * x + 6.0,
        2 => 2.0 * x * x * x - 15.0 * x * x + 24.0 * x - 6.0,
        _ => (4.0 * x.powi(4) - 44.0 * x.powi(3) + 123.0 * x * x - 84.0 * x + 6.0) / 3.0,
    }
}

/// `t d/dt` of [`flatness_objective`]; its sign change locates the minimum
/// much more sharply than the objective itself.
fn flatness_slope(series: &HeatSumSeries, t: f64) -> f64 {
    let (d1, d2) = series
        .energies
        .iter()
        .fold(([0.0; 3], [0.0; 3]), |(mut d1, mut d2), e| {
            let x = e * t;
            let w = (-x).exp();
            for m in 0..3 {
                d1[m] += w * derivative_factor(m as u32 + 1, x);
                d2[m] += w * second_derivative_factor(m as u32 + 1, x);
            }
            (d1, d2)
        });
    2.0 * (4.0 * PI).powi(2) * (0..3).map(|m| d1[m] * d2[m]).sum::<f64>()
}

/// The `t` where the area approximants are flattest: scan of
/// [`flatness_objective`] over `[0.1/E_max, 10/E_min]`, lowest interior local
/// minimum, refined in `log t` on the zero of the analytic slope.
///
/// The right end of the window always has a small objective because only the
/// ground state survives there; it is never an acceptable answer, so minima
/// on the window edge are skipped.
pub fn optimal_t(series: &HeatSumSeries) -> Result<f64> {
    let e = series.energies();
    let grid = log_grid(0.1 / e[e.len() - 1], 10.0 / e[0], T_SCAN_POINTS);
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| flatness_objective(series, t))
        .collect();
    if values.iter().all(|v| !v.is_finite()) {
        return Err(Error::Input(
            "flatness objective is not finite anywhere".into(),
        ));
    }
    let interior = (1..grid.len() - 1)
        .filter(|&i| {
            values[i].is_finite() && values[i] <= values[i - 1] && values[i] <= values[i + 1]
        })
        .min_by(|&a, &b| values[a].total_cmp(&values[b]));
    let best = match interior {
        Some(i) => i,
        None => values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0),
    };
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let slope = |u: f64| flatness_slope(series, u.exp());
    let t = if slope(lo) < 0.0 && slope(hi) > 0.0 {
        refine_root(slope, (lo, hi), 1e-13)?.exp()
    } else {
        golden_section(|u| flatness_objective(series, u.exp()), lo, hi).exp()
    };
    // never return something worse than the best scanned point
    if flatness_objective(series, t) <= values[best] {
        Ok(t)
    } else {
        Ok(grid[best])
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    // 1e-10 relative in t is 1e-10 absolute in log t
    while hi - lo > 1e-10 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Perimeter `L` and constant `C` from a weighted least-squares fit of
/// `K(t) - A/(4 pi t) = -L/(8 sqrt(pi t)) + C` on 64 log-spaced points of
/// `[t*/2, 2t*]`, weights `1/K(t)`. For the counting function
/// `A E/4pi - L sqrt(E)/4pi + C` the heat-kernel constant equals `C`.
pub fn perimeter_constant_estimates(series: &HeatSumSeries, area_est: f64) -> Result<(f64, f64)> {
    let t_star = optimal_t(series)?;
    perimeter_constant_at(series, area_est, t_star)
}

/// [`perimeter_constant_estimates`] around a given `t*`.
pub fn perimeter_constant_at(
    series: &HeatSumSeries,
    area_est: f64,
    t_star: f64,
) -> Result<(f64, f64)> {
    if !(area_est > 0.0) {
        return Err(Error::Input(format!(
            "area estimate must be positive, got {area_est}"
        )));
    }
    // normal equations for y = p u + c with u = -1/(8 sqrt(pi t))
    let (mut suu, mut su, mut s1, mut suy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in log_grid(t_star / 2.0, 2.0 * t_star, FIT_POINTS) {
        let k = series.heat_sum(t);
        let w = (1.0 / k).powi(2);
        let u = -1.0 / (8.0 * (PI * t).sqrt());
        let y = k - area_est / (4.0 * PI * t);
        suu += w * u * u;
        su += w * u;
        s1 += w;
        suy += w * u * y;
        sy += w * y;
    }
    let det = suu * s1 - su * su;
    if !(det.abs() > 1e-12 * suu * s1) {
        return Err(Error::Accuracy("perimeter fit is singular".into()));
    }
    let l = (suy * s1 - su * sy) / det;
    let c = (suu * sy - su * suy) / det;
    Ok((l, c))
}

/// Everything recovered from one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryEstimate {
    pub t_star: f64,
    /// `A_1`, `A_2`, `A_3` at `t*`.
    pub area_approximants: [f64; 3],
    /// Mean of the three approximants.
    pub area: f64,
    pub perimeter: f64,
    pub constant: f64,
}

/// Area as the mean of `A_1..A_3` at `t*`, then `L` and `C` around the
/// same `t*`.
pub fn estimate_geometry(series: &HeatSumSeries) -> Result<GeometryEstimate> {
    let t_star = optimal_t(series)?;
    let mut approx = [0.0; 3];
    for (m, slot) in approx.iter_mut().enumerate() {
        *slot = area_approximant(series, m as u32 + 1, t_star)?;
    }
    let area = approx.iter().sum::<f64>() / 3.0;
    let (perimeter, constant) = perimeter_constant_at(series, area, t_star)?;
    Ok(GeometryEstimate {
        t_star,
        area_approximants: approx,
        area,
        perimeter,
        constant,
    })
}

/// Number of energies `<= e` in an ascending list.
pub fn staircase(energies: &[f64], e: f64) -> usize {
    energies.partition_point(|&v| v <= e)
}
