//! Ground-state estimates from one application of the inverse operator to a
//! trial state: `E = <chi|M E^-1 M|chi> / <chi|M E^-1 S E^-1 M|chi>` with
//! `M = <Sigma^{1/2}>`, `S = <Sigma>` and `E` the rectangle energies,
//! minimized over the trial coefficients as a generalized eigenproblem.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytic::{unperturbed_energy, RectQuantumNumbers};
use crate::conformal::PowerSeriesMap;
use crate::error::{Error, Result};
use crate::linalg::{gen_sym_eig, GaussLegendre, SymMatrix};

/// Default quadrature nodes per direction for general maps.
pub const DEFAULT_QUAD_N: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// `psi_1(x)` times `chi_0, phi_1, chi_1, ..., phi_N, chi_N`.
    Angular,
    /// `chi_0(y)` times `psi_1, ..., psi_N`.
    Radial,
}

/// `size` counts functions for the radial basis (at least 1) and
/// `(phi_n, chi_n)` pairs on top of `chi_0` for the angular basis (0 gives
/// the single-function estimate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialBasis {
    pub kind: BasisKind,
    pub size: usize,
}

impl TrialBasis {
    pub fn radial(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Input(
                "radial basis needs at least one function".into(),
            ));
        }
        Ok(Self {
            kind: BasisKind::Radial,
            size,
        })
    }

    pub fn angular(size: usize) -> Self {
        Self {
            kind: BasisKind::Angular,
            size,
        }
    }

    /// Quantum numbers of the basis functions in coefficient order.
    pub fn states(&self) -> Vec<RectQuantumNumbers> {
        let q = |nx, ny, s| RectQuantumNumbers::new(nx, ny, s).expect("valid basis state");
        match self.kind {
            BasisKind::Radial => (1..=self.size as u32).map(|n| q(n, 0, 1)).collect(),
            BasisKind::Angular => {
                let mut out = vec![q(1, 0, 1)];
                for n in 1..=self.size as u32 {
                    out.push(q(1, n, 2));
                    out.push(q(1, n, 1));
                }
                out
            }
        }
    }
}

/// `int psi_m psi_l e^{x - lx} dx` over `[-lx, lx]`.
pub fn sigma_half_element_radial(m: u32, l: u32, lx: f64) -> f64 {
    let (m, l) = (m.min(l), m.max(l));
    let (mf, lf) = (m as f64, l as f64);
    let pi2 = PI * PI;
    if m == l {
        // e^{-L} sinh L = (1 - e^{-2L}) / 2
        pi2 * mf * mf * 0.5 * (-(-2.0 * lx).exp_m1()) / (lx.powi(3) + pi2 * lx * mf * mf)
    } else {
        let sign = if (m + l) % 2 == 0 { 1.0 } else { -1.0 };
        8.0 * pi2 * lx * mf * lf * (1.0 - sign * (-2.0 * lx).exp()) * sign
            / (16.0 * lx.powi(4)
                + 8.0 * pi2 * lx * lx * (mf * mf + lf * lf)
                + pi2 * pi2 * (mf * mf - lf * lf).powi(2))
    }
}

/// `int psi_m psi_l e^{2(x - lx)} dx` over `[-lx, lx]`.
pub fn sigma_element_radial(m: u32, l: u32, lx: f64) -> f64 {
    let (m, l) = (m.min(l), m.max(l));
    let (mf, lf) = (m as f64, l as f64);
    let pi2 = PI * PI;
    if m == l {
        pi2 * (-(-4.0 * lx).exp_m1()) * mf * mf / (4.0 * (4.0 * lx.powi(3) + pi2 * lx * mf * mf))
    } else {
        let sign = if (m + l) % 2 == 0 { 1.0 } else { -1.0 };
        16.0 * pi2 * lx * lf * mf * (1.0 - sign * (-4.0 * lx).exp()) * sign
            / (256.0 * lx.powi(4)
                + 32.0 * pi2 * lx * lx * (lf * lf + mf * mf)
                + pi2 * pi2 * (mf * mf - lf * lf).powi(2))
    }
}

/// Smallest eigenvalue of the pencil `(M E^-1 M, M E^-1 S E^-1 M)` built
/// literally. Squares the conditioning of `S`; kept as a cross-check.
#[cfg(test)]
fn minimize_direct(m: &SymMatrix, s: &SymMatrix, eps: &[f64]) -> Result<f64> {
    let n = eps.len();
    // b = E^-1 M, so Q = M b and P = b^T S b.
    let b: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j) / eps[i]).collect())
        .collect();
    let q = SymMatrix::from_fn(n, |i, j| (0..n).map(|k| m.get(i, k) * b[k][j]).sum());
    let sb: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| s.get(i, k) * b[k][j]).sum())
                .collect()
        })
        .collect();
    let p = SymMatrix::from_fn(n, |i, j| (0..n).map(|k| b[k][i] * sb[k][j]).sum());
    Ok(gen_sym_eig(&q, &p, false)?.values[0])
}

/// The same minimum through the congruence `d = E^-1 M c`, which turns the
/// pencil into `(E, S)`. `M` is a Gram matrix with positive weight, hence
/// invertible, so nothing is lost; only `S` needs to be well conditioned.
fn minimize(s: &SymMatrix, eps: &[f64]) -> Result<f64> {
    let e = SymMatrix::from_diag(eps);
    let dec = gen_sym_eig(&e, s, false).map_err(|e| match e {
        Error::Degeneracy(msg) => Error::Degeneracy(format!("denominator form: {msg}")),
        other => other,
    })?;
    Ok(dec.values[0])
}

/// Ground-state estimate for the circular annulus `a < r < 1` from closed
/// form matrix elements.
pub fn variational_ground_annulus(a: f64, basis: TrialBasis) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("a must lie in (0, 1), got {a}")));
    }
    let lx = -a.ln() / 2.0;
    let states = basis.states();
    let n = states.len();
    let eps: Vec<f64> = states.iter().map(|&q| unperturbed_energy(q, lx)).collect();
    let s = match basis.kind {
        BasisKind::Radial => SymMatrix::from_fn(n, |i, j| {
            sigma_element_radial(i as u32 + 1, j as u32 + 1, lx)
        }),
        // Sigma depends on x only: the form is diagonal in the y modes.
        BasisKind::Angular => SymMatrix::from_diag(&vec![sigma_element_radial(1, 1, lx); n]),
    };
    minimize(&s, &eps)
}

fn basis_value(q: RectQuantumNumbers, lx: f64, x: f64, y: f64) -> f64 {
    let radial = (q.nx as f64 * PI / (2.0 * lx) * (x + lx)).sin() / lx.sqrt();
    let angular = match (q.ny, q.s) {
        (0, _) => 1.0 / (2.0 * PI).sqrt(),
        (ny, 1) => (ny as f64 * y).cos() / PI.sqrt(),
        (ny, _) => (ny as f64 * y).sin() / PI.sqrt(),
    };
    radial * angular
}

/// `<i|Sigma|j>` over the basis by quadrature.
fn quadrature_form(
    map: &PowerSeriesMap,
    states: &[RectQuantumNumbers],
    quad_n: usize,
) -> Result<SymMatrix> {
    let lx = map.lx();
    let n = states.len();
    let rule = GaussLegendre::new(quad_n);
    let h = 2.0 * PI / quad_n as f64;
    let mut s = vec![0.0; n * n];
    let mut values = vec![0.0; n];
    for (x, wx) in rule.mapped(-lx, lx) {
        for j in 0..quad_n {
            let y = -PI + j as f64 * h;
            let sigma = map.sigma(x, y)?;
            let w = wx * h;
            for (v, &q) in values.iter_mut().zip(states) {
                *v = basis_value(q, lx, x, y);
            }
            for a in 0..n {
                let va = w * sigma * values[a];
                for b in 0..=a {
                    s[a * n + b] += va * values[b];
                }
            }
        }
    }
    Ok(SymMatrix::from_fn(n, |i, j| s[i * n + j]))
}

/// Ground-state estimate for an arbitrary map with `<Sigma>` elements from
/// Gauss (x) by trapezoid (y) quadrature, checked against a run with twice
/// the nodes. Rescaled by `C^2`.
pub fn variational_ground_general(
    map: &PowerSeriesMap,
    basis: TrialBasis,
    quad_n: usize,
) -> Result<f64> {
    let quad_n = quad_n.max(8);
    let states = basis.states();
    let eps: Vec<f64> = states
        .iter()
        .map(|&q| unperturbed_energy(q, map.lx()))
        .collect();
    let coarse = minimize(&quadrature_form(map, &states, quad_n)?, &eps)?;
    let fine = minimize(&quadrature_form(map, &states, 2 * quad_n)?, &eps)?;
    if (fine - coarse).abs() > 1e-6 * fine.abs() {
        return Err(Error::Accuracy(format!(
            "quadrature not converged: {coarse} with {quad_n} nodes, {fine} with {}",
            2 * quad_n
        )));
    }
    Ok(fine / map.c().powi(2))
}

/// What the trial basis is applied to.
#[derive(Debug, Clone, PartialEq)]
pub enum VariationalTarget {
    /// Closed-form elements for the circular annulus.
    Annulus { a: f64 },
    /// Quadrature elements for any map.
    Map(PowerSeriesMap),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalRow {
    pub size: usize,
    pub energy: f64,
    /// `(energy - reference) / reference`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalReport {
    pub kind: BasisKind,
    pub reference: f64,
    pub rows: Vec<VariationalRow>,
    /// Sizes whose energy exceeds the previous row's by more than 1e-10
    /// relative.
    pub increases: Vec<usize>,
    /// Sizes whose energy lies below the reference by more than 1e-6
    /// relative.
    pub below_reference: Vec<usize>,
}

/// Energies for each basis size against a reference ground energy.
pub fn variational_upper_bound_check(
    target: &VariationalTarget,
    kind: BasisKind,
    sizes: &[usize],
    reference: f64,
) -> Result<VariationalReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let basis = match kind {
            BasisKind::Radial => TrialBasis::radial(size)?,
            BasisKind::Angular => TrialBasis::angular(size),
        };
        let energy = match target {
            VariationalTarget::Annulus { a } => variational_ground_annulus(*a, basis)?,
            VariationalTarget::Map(map) => variational_ground_general(map, basis, DEFAULT_QUAD_N)?,
        };
        rows.push(VariationalRow {
            size,
            energy,
            gap: (energy - reference) / reference,
        });
    }
    let increases = rows
        .windows(2)
        .filter(|w| w[1].energy > w[0].energy * (1.0 + 1e-10))
        .map(|w| w[1].size)
        .collect();
    let below_reference = rows
        .iter()
        .filter(|r| r.gap < -1e-6)
        .map(|r| r.size)
        .collect();
    Ok(VariationalReport {
        kind,
        reference,
        rows,
        increases,
        below_reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_function_is_the_resummed_formula() {
        let e = variational_ground_annulus(0.9, TrialBasis::radial(1).unwrap()).unwrap();
        assert!((e - 987.1575032).abs() < 1e-9 * e);
        let e = variational_ground_annulus(0.9, TrialBasis::angular(0)).unwrap();
        assert!((e - 987.1575032).abs() < 1e-9 * e);
    }

    #[test]
    fn angular_annulus_gains_nothing() {
        let base = variational_ground_annulus(0.3, TrialBasis::angular(0)).unwrap();
        for n in 1..4 {
            let e = variational_ground_annulus(0.3, TrialBasis::angular(n)).unwrap();
            assert!((e - base).abs() < 1e-12 * base);
        }
    }

    #[test]
    fn diagonal_sigma_element() {
        let lx = -(0.9f64).ln() / 2.0;
        let expected = PI * PI * (1.0 - (-4.0 * lx).exp()) / (4.0 * (4.0 * lx * lx + PI * PI));
        // the closed form carries the 1/lx of the normalized psi_1
        assert!((sigma_element_radial(1, 1, lx) * lx - expected).abs() < 1e-14);
    }

    #[test]
    fn basis_layout() {
        let states = TrialBasis::angular(2).states();
        let labels: Vec<_> = states.iter().map(|q| (q.nx, q.ny, q.s)).collect();
        assert_eq!(
            labels,
            vec![(1, 0, 1), (1, 1, 2), (1, 1, 1), (1, 2, 2), (1, 2, 1)]
        );
        assert!(TrialBasis::radial(0).is_err());
        assert_eq!(TrialBasis::radial(3).unwrap().states().len(), 3);
    }

    #[test]
    fn reduced_pencil_matches_direct_form() {
        for (a, n) in [(0.5, 4), (0.01, 5), (1e-5, 3)] {
            let lx = -f64::ln(a) / 2.0;
            let m = SymMatrix::from_fn(n, |i, j| {
                sigma_half_element_radial(i as u32 + 1, j as u32 + 1, lx)
            });
            let s = SymMatrix::from_fn(n, |i, j| {
                sigma_element_radial(i as u32 + 1, j as u32 + 1, lx)
            });
            let eps: Vec<f64> = (1..=n)
                .map(|k| (k as f64 * PI / (2.0 * lx)).powi(2))
                .collect();
            let direct = minimize_direct(&m, &s, &eps).unwrap();
            let reduced = minimize(&s, &eps).unwrap();
            assert!(
                (direct - reduced).abs() < 1e-9 * reduced,
                "a = {a}: {direct} vs {reduced}"
            );
        }
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(
            variational_ground_annulus(1.0, TrialBasis::angular(0)),
            Err(Error::Domain(_))
        ));
    }
}
