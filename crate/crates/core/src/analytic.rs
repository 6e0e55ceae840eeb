//! Resummed perturbative energies `E ~ eps / <Sigma>` on the rectangle basis
//! `psi_nx(x) chi_ny(y)` (s = 1) / `psi_nx(x) phi_ny(y)` (s = 2), the closed
//! forms for the circular annulus and the Robnik ring, and the smooth Weyl
//! counting function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conformal::{PowerSeriesMap, RingGeometry, DEFAULT_QUAD_N};
use crate::error::{Error, Result};
use crate::spectrum::{Engine, LabeledLevel, Spectrum};

/// Quantum numbers of a rectangle state; `s = 1` is the cosine branch,
/// `s = 2` the sine branch, and `ny = 0` exists only for `s = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectQuantumNumbers {
    pub nx: u32,
    pub ny: u32,
    pub s: u8,
}

impl RectQuantumNumbers {
    pub fn new(nx: u32, ny: u32, s: u8) -> Result<Self> {
        if nx == 0 {
            return Err(Error::Input("nx starts at 1".into()));
        }
        if !(s == 1 || s == 2) {
            return Err(Error::Input(format!("s must be 1 or 2, got {s}")));
        }
        if ny == 0 && s == 2 {
            return Err(Error::Input("ny = 0 has no sine partner".into()));
        }
        Ok(Self { nx, ny, s })
    }
}

/// `nx^2 pi^2 / (4 lx^2) + ny^2`.
pub fn unperturbed_energy(q: RectQuantumNumbers, lx: f64) -> f64 {
    let nx = q.nx as f64;
    nx * nx * PI * PI / (4.0 * lx * lx) + (q.ny as f64).powi(2)
}

/// `int psi_nx (e^{x - lx})^{k+j+2} psi_nxp dx` over `[-lx, lx]`, closed form.
pub fn w_element(nx: u32, nxp: u32, k: u32, j: u32, lx: f64) -> f64 {
    let p = (k + j + 2) as f64;
    let (n, m) = (nx as f64, nxp as f64);
    let sign = if (nx + nxp).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let q = 4.0 * lx * lx * p * p;
    8.0 * PI * PI * lx * n * m * p * (sign - (-2.0 * lx * p).exp())
        / ((q + PI * PI * (n - m).powi(2)) * (q + PI * PI * (n + m).powi(2)))
}

/// `int cos(ny y) cos(nyp y) cos((k-j) y) dy` (s = 1) or the same with sines
/// (s = 2), over `[-pi, pi]`.
pub fn i_element(s: u8, ny: u32, nyp: u32, k: u32, j: u32) -> f64 {
    let d = k as i64 - j as i64;
    let (a, b) = (ny as i64, nyp as i64);
    let hit = |v: i64| if v == 0 { 1.0 } else { 0.0 };
    let same = hit(a - b + d) + hit(a - b - d);
    let opposite = hit(a + b + d) + hit(a + b - d);
    match s {
        1 => PI / 2.0 * (same + opposite),
        _ => PI / 2.0 * (same - opposite),
    }
}

fn alpha(q: RectQuantumNumbers) -> f64 {
    match (q.ny, q.s) {
        (0, 1) => 1.0 / (2.0 * PI).sqrt(),
        (0, _) => 0.0,
        _ => 1.0 / PI.sqrt(),
    }
}

/// `<q| (e^{x-lx})^{k+j+2} cos((k-j) y) |qp>`; no mixing between `s` values.
pub fn delta_element(
    q: RectQuantumNumbers,
    qp: RectQuantumNumbers,
    k: u32,
    j: u32,
    lx: f64,
) -> f64 {
    if q.s != qp.s {
        return 0.0;
    }
    let angular = i_element(q.s, q.ny, qp.ny, k, j);
    if angular == 0.0 {
        return 0.0;
    }
    alpha(q) * alpha(qp) * w_element(q.nx, qp.nx, k, j, lx) * angular
}

/// `<q|Sigma|qp>` for the undilated map.
pub fn sigma_element(map: &PowerSeriesMap, q: RectQuantumNumbers, qp: RectQuantumNumbers) -> f64 {
    let eta = map.eta();
    let mut total = 0.0;
    for (k, &ek) in eta.iter().enumerate() {
        for (j, &ej) in eta.iter().enumerate() {
            if ek == 0.0 || ej == 0.0 {
                continue;
            }
            let weight = ek * ej * (k + 1) as f64 * (j + 1) as f64;
            total += weight * delta_element(q, qp, k as u32, j as u32, map.lx());
        }
    }
    total
}

/// `<q|Sigma|q>`: the diagonal `k = j` sum plus, for `ny >= 1`, the
/// `(-1)^{s+1}`-weighted terms with `|k - j| = 2 ny`.
pub fn sigma_expectation(map: &PowerSeriesMap, q: RectQuantumNumbers) -> f64 {
    sigma_element(map, q, q)
}

/// `eps / <Sigma> / C^2`.
pub fn resummed_energy(map: &PowerSeriesMap, q: RectQuantumNumbers) -> Result<f64> {
    let expectation = sigma_expectation(map, q);
    if !(expectation > 0.0) {
        return Err(Error::Degeneracy(format!(
            "<Sigma> = {expectation:e} is not positive for {q:?}"
        )));
    }
    Ok(unperturbed_energy(q, map.lx()) / expectation / map.c().powi(2))
}

fn check_inner_radius(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("a must lie in (0, 1), got {a}")));
    }
    Ok(())
}

/// Resummed energy of the circular annulus `a < r < 1` in closed form.
pub fn annulus_formula(a: f64, nx: u32, ny: u32) -> Result<f64> {
    robnik_formula(a, 0.0, nx, ny)
}

/// Resummed energy of the Robnik ring `e^{z-lx} + alpha e^{2(z-lx)}` with
/// `a = e^{-2 lx}`; reduces to [`annulus_formula`] at `alpha = 0`.
///
/// The `alpha^2` term comes from `4 alpha^2 W_{nx,nx,1,1}`, whose exponent
/// `4(x - lx)` contributes the factor `1 / (4 log^2 a + pi^2 nx^2)`.
pub fn robnik_formula(a: f64, alpha: f64, nx: u32, ny: u32) -> Result<f64> {
    check_inner_radius(a)?;
    if nx == 0 {
        return Err(Error::Input("nx starts at 1".into()));
    }
    let (l, n2, m2) = (a.ln(), (nx as f64).powi(2), (ny as f64).powi(2));
    let pi2 = PI * PI;
    let r = 2.0 * pi2 * (a.powi(4) - 1.0) * n2 * l * (l * l + pi2 * n2) / (4.0 * l * l + pi2 * n2);
    let numerator = 2.0 * (l * l + pi2 * n2) * (m2 * l * l + pi2 * n2);
    Ok(numerator / (pi2 * (a * a - 1.0) * n2 * l + alpha * alpha * r))
}

/// Where analytic energies come from.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticModel {
    /// [`annulus_formula`] for `a < r < 1`.
    Annulus { a: f64 },
    /// [`robnik_formula`].
    Robnik { a: f64, alpha: f64 },
    /// [`resummed_energy`] for an arbitrary map.
    Map(PowerSeriesMap),
}

impl AnalyticModel {
    /// Energies of the `s = 1` and `s = 2` states (`s = 2` absent for `ny = 0`).
    fn energies(&self, nx: u32, ny: u32) -> Result<(f64, Option<f64>)> {
        match self {
            AnalyticModel::Annulus { a } => {
                let e = annulus_formula(*a, nx, ny)?;
                Ok((e, (ny > 0).then_some(e)))
            }
            AnalyticModel::Robnik { a, alpha } => {
                let e = robnik_formula(*a, *alpha, nx, ny)?;
                Ok((e, (ny > 0).then_some(e)))
            }
            AnalyticModel::Map(map) => {
                let e1 = resummed_energy(map, RectQuantumNumbers::new(nx, ny, 1)?)?;
                let e2 = if ny > 0 {
                    Some(resummed_energy(map, RectQuantumNumbers::new(nx, ny, 2)?)?)
                } else {
                    None
                };
                Ok((e1, e2))
            }
        }
    }

    fn geometry(&self) -> Result<RingGeometry> {
        let map = match self {
            AnalyticModel::Annulus { a } => PowerSeriesMap::annulus(*a)?,
            AnalyticModel::Robnik { a, alpha } => {
                check_inner_radius(*a)?;
                PowerSeriesMap::robnik(*alpha, -a.ln() / 2.0)?
            }
            AnalyticModel::Map(map) => map.clone(),
        };
        map.geometry(DEFAULT_QUAD_N)
    }
}

/// Levels with `E <= cutoff`. The `ny` scan for each `nx`, and the `nx` scan
/// itself, stop once energies exceed `1.5 * cutoff`.
fn levels_below(model: &AnalyticModel, cutoff: f64) -> Result<Vec<LabeledLevel>> {
    let mut levels = Vec::new();
    for nx in 1u32.. {
        let (ground, _) = model.energies(nx, 0)?;
        if ground > 1.5 * cutoff {
            break;
        }
        for ny in 0u32.. {
            let (e1, e2) = model.energies(nx, ny)?;
            let lowest = e2.map_or(e1, |e2| e1.min(e2));
            if lowest > 1.5 * cutoff {
                break;
            }
            let labels = Some((nx as i64, ny as i64));
            let level = |energy, s, multiplicity| LabeledLevel {
                energy,
                labels,
                s,
                multiplicity,
                engine: Engine::Analytic,
            };
            match e2 {
                None if e1 <= cutoff => levels.push(level(e1, Some(1), 1)),
                Some(e2) if e1 == e2 && e1 <= cutoff => levels.push(level(e1, None, 2)),
                Some(e2) if e1 != e2 => {
                    if e1 <= cutoff {
                        levels.push(level(e1, Some(1), 1));
                    }
                    if e2 <= cutoff {
                        levels.push(level(e2, Some(2), 1));
                    }
                }
                _ => {}
            }
        }
    }
    Ok(levels)
}

/// The lowest `n_states` analytic states. `ny >= 1` levels carry
/// multiplicity 2 when both branches coincide and are listed separately
/// (with their `s`) otherwise.
pub fn enumerate_analytic(model: &AnalyticModel, n_states: usize) -> Result<Spectrum> {
    if n_states == 0 {
        return Err(Error::Input("n_states must be positive".into()));
    }
    let geom = model.geometry()?;
    let mut cutoff = weyl_energy(n_states as u64 + 2, &geom).max(model.energies(1, 0)?.0);
    loop {
        let levels = levels_below(model, cutoff)?;
        let states: usize = levels.iter().map(|l| l.multiplicity as usize).sum();
        if states >= n_states {
            let mut spectrum = Spectrum::new(levels);
            spectrum.truncate_states(n_states);
            return Ok(spectrum);
        }
        cutoff *= 1.5;
    }
}

/// `A E / 4 pi - L sqrt(E) / 4 pi + C`.
pub fn counting_estimate(e: f64, geom: &RingGeometry) -> f64 {
    let e = e.max(0.0);
    (geom.area * e - geom.perimeter_total * e.sqrt()) / (4.0 * PI) + geom.euler_constant
}

/// Energy at which [`counting_estimate`] equals `n`: the positive root of
/// `A x^2 - L x - 4 pi (n - C) = 0` in `x = sqrt(E)`.
pub fn weyl_energy(n: u64, geom: &RingGeometry) -> f64 {
    let (a, l) = (geom.area, geom.perimeter_total);
    let rhs = 4.0 * PI * (n as f64 - geom.euler_constant);
    let x = (l + (l * l + 4.0 * a * rhs).max(0.0).sqrt()) / (2.0 * a);
    x * x
}
