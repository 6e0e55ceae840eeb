//! WebAssembly entry points for the static demo page in `www/`.
//!
//! Each operation has a plain Rust function returning a serializable report
//! (tested natively) and a `#[wasm_bindgen]` wrapper that hands the report
//! to JavaScript as a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ringspec::analytic::{enumerate_analytic, weyl_energy, AnalyticModel};
use ringspec::ccm::{self, balanced_nx, CcmConfig, LsfCache};
use ringspec::conformal::{PowerSeriesMap, DEFAULT_QUAD_N};
use ringspec::exact::annulus_spectrum;
use ringspec::variational::{variational_ground_annulus, variational_ground_general, TrialBasis};
use ringspec::{Error, Result};

/// Largest collocation problem the page will attempt; the dense solve is
/// cubic and runs on the browser's main thread.
pub const MAX_DEMO_DIM: usize = 1500;
pub const MAX_DEMO_STATES: usize = 2000;
/// Radial floor for the demo grid: the balanced rule gives only a couple of
/// radial points on thin rings.
pub const MIN_DEMO_NX: u32 = 12;

#[derive(Debug, Clone, Serialize)]
pub struct AnnulusRow {
    pub index: usize,
    pub exact: f64,
    pub analytic: f64,
    pub weyl: f64,
}

/// Exact, resummed and Weyl energies of the annulus `a < r < 1`, state by state.
pub fn annulus_comparison(a: f64, count: usize) -> Result<Vec<AnnulusRow>> {
    if count == 0 || count > MAX_DEMO_STATES {
        return Err(Error::Input(format!(
            "count must lie in 1..={MAX_DEMO_STATES}"
        )));
    }
    let exact = annulus_spectrum(a, 1.0, count)?.expanded();
    let analytic = enumerate_analytic(&AnalyticModel::Annulus { a }, count)?.expanded();
    let geom = PowerSeriesMap::annulus(a)?.geometry(DEFAULT_QUAD_N)?;
    Ok((0..count)
        .map(|i| AnnulusRow {
            index: i + 1,
            exact: exact[i],
            analytic: analytic[i],
            weyl: weyl_energy(i as u64 + 1, &geom),
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct Wavefunction {
    pub nx: u32,
    pub ny: u32,
    pub energies: Vec<f64>,
    pub state: usize,
    /// `(u, v, psi)` on the collocation grid, mapped onto the ring.
    pub points: Vec<(f64, f64, f64)>,
    /// Outer and inner boundary curves as `(u, v)` polylines.
    pub outer: Vec<(f64, f64)>,
    pub inner: Vec<(f64, f64)>,
}

/// Collocation eigenstate `state` (0-based) of the ring
/// `exp(z - lx) + alpha exp(2(z - lx))`, together with the lowest energies.
pub fn robnik_wavefunction(alpha: f64, lx: f64, ny: u32, state: usize) -> Result<Wavefunction> {
    let map = PowerSeriesMap::robnik(alpha, lx)?;
    let nx = balanced_nx(lx, ny).max(MIN_DEMO_NX);
    let config = CcmConfig::new(nx, ny, map.clone())?;
    if config.dim() > MAX_DEMO_DIM {
        return Err(Error::Input(format!(
            "grid {nx} x {ny} has dimension {} > {MAX_DEMO_DIM}",
            config.dim()
        )));
    }
    let n_states = (state + 1).max(10).min(config.dim());
    if state >= n_states {
        return Err(Error::Input(format!(
            "state must be below {}",
            config.dim()
        )));
    }
    let result = ccm::solve(&config, n_states, true, &LsfCache::disabled())?;
    let points = ccm::sample_wavefunction(&result, state)?;
    let boundary = |x: f64| -> Vec<(f64, f64)> {
        (0..=256)
            .map(|j| {
                map.map_point(
                    x,
                    -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / 256.0,
                )
            })
            .collect()
    };
    Ok(Wavefunction {
        nx,
        ny,
        energies: result.energies,
        state,
        points,
        outer: boundary(lx),
        inner: boundary(-lx),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationalRow {
    pub n: usize,
    pub energy: f64,
}

/// Ground-state estimates for basis sizes `1..=max_n`. The radial basis
/// suits the annulus, the angular one deformed rings; `alpha = 0` with the
/// radial basis uses the closed-form matrix elements.
pub fn variational_convergence(
    alpha: f64,
    lx: f64,
    angular: bool,
    max_n: usize,
) -> Result<Vec<VariationalRow>> {
    if max_n == 0 || max_n > 12 {
        return Err(Error::Input("basis size must lie in 1..=12".into()));
    }
    let map = PowerSeriesMap::robnik(alpha, lx)?;
    (1..=max_n)
        .map(|n| {
            let basis = if angular {
                TrialBasis::angular(n)
            } else {
                TrialBasis::radial(n)?
            };
            let energy = if alpha == 0.0 && !angular {
                variational_ground_annulus((-2.0 * lx).exp(), basis)?
            } else {
                variational_ground_general(&map, basis, DEFAULT_QUAD_N)?
            };
            Ok(VariationalRow { n, energy })
        })
        .collect()
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsValue> {
    r.map(|v| serde_json::to_string(&v).expect("report serializes"))
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = annulusComparison)]
pub fn annulus_comparison_js(a: f64, count: usize) -> std::result::Result<String, JsValue> {
    to_js(annulus_comparison(a, count))
}

#[wasm_bindgen(js_name = robnikWavefunction)]
pub fn robnik_wavefunction_js(
    alpha: f64,
    lx: f64,
    ny: u32,
    state: usize,
) -> std::result::Result<String, JsValue> {
    to_js(robnik_wavefunction(alpha, lx, ny, state))
}

#[wasm_bindgen(js_name = variationalConvergence)]
pub fn variational_convergence_js(
    alpha: f64,
    lx: f64,
    angular: bool,
    max_n: usize,
) -> std::result::Result<String, JsValue> {
    to_js(variational_convergence(alpha, lx, angular, max_n))
}

#[wasm_bindgen]
pub fn version() -> String {
    ringspec::VERSION.to_string()
}
