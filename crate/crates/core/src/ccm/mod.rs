//! Conformal collocation: the ring problem `-(1/Sigma) Laplacian psi = E psi`
//! pulled back to the rectangle and discretized on a Dirichlet (x) by
//! periodic (y) sinc grid.
//!
//! Grid point `K` (1-based) sits at `(x_k, y_k')` with `x` the fast index:
//! `K - 1 = (k' + ny/2)(nx - 1) + (k + nx/2 - 1)`.

mod cache;

use std::f64::consts::PI;

pub use cache::{cache_file_name, LsfCache, CACHE_DIR_ENV};

use crate::conformal::PowerSeriesMap;
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, SymMatrix};
use crate::lsf::LsfBasis;
use crate::spectrum::{Engine, LabeledLevel, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct CcmConfig {
    nx: u32,
    ny: u32,
    map: PowerSeriesMap,
}

impl CcmConfig {
    pub fn new(nx: u32, ny: u32, map: PowerSeriesMap) -> Result<Self> {
        for (name, v) in [("nx", nx), ("ny", ny)] {
            if v < 2 || v % 2 != 0 {
                return Err(Error::Input(format!(
                    "{name} must be even and >= 2, got {v}"
                )));
            }
        }
        Ok(Self { nx, ny, map })
    }

    pub fn nx(&self) -> u32 {
        self.nx
    }

    pub fn ny(&self) -> u32 {
        self.ny
    }

    pub fn map(&self) -> &PowerSeriesMap {
        &self.map
    }

    /// `(nx - 1)(ny + 1)`.
    pub fn dim(&self) -> usize {
        (self.nx as usize - 1) * (self.ny as usize + 1)
    }

    pub fn x_basis(&self) -> LsfBasis {
        LsfBasis::dirichlet(self.nx, self.map.lx()).expect("validated grid")
    }

    /// The y half-width is always pi so the rectangle closes into a ring.
    pub fn y_basis(&self) -> LsfBasis {
        LsfBasis::periodic(self.ny, PI).expect("validated grid")
    }

    /// Rectangle coordinates of every grid point, in `K` order.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let (xb, yb) = (self.x_basis(), self.y_basis());
        let xs = xb.nodes();
        let mut out = Vec::with_capacity(self.dim());
        for y in yb.nodes() {
            out.extend(xs.iter().map(|&x| (x, y)));
        }
        out
    }
}

/// Even `nx` closest to `(lx / pi)(ny + 1)`, at least 2: equal spacing in
/// both directions.
pub fn balanced_nx(lx: f64, ny: u32) -> u32 {
    let target = lx / PI * (ny as f64 + 1.0);
    let half = (target / 2.0).round();
    if half.is_finite() && half >= 1.0 {
        2 * half.min(u32::MAX as f64 / 2.0) as u32
    } else {
        2
    }
}

/// Signed grid indices `(k, k')` of the 1-based flat index `K`.
pub fn flatten(big_k: i64, nx: u32, ny: u32) -> Result<(i64, i64)> {
    let (nx, ny) = (nx as i64, ny as i64);
    let dim = (nx - 1) * (ny + 1);
    if big_k < 1 || big_k > dim {
        return Err(Error::Index {
            index: big_k,
            lo: 1,
            hi: dim,
        });
    }
    // [K / (nx - 1 + eps)] with eps -> 0+: exact multiples round down.
    let q = (big_k - 1) / (nx - 1);
    Ok((big_k - (nx - 1) * q - nx / 2, q - ny / 2))
}

/// Inverse of [`flatten`].
pub fn unflatten(k: i64, kp: i64, nx: u32, ny: u32) -> Result<i64> {
    let (nxi, nyi) = (nx as i64, ny as i64);
    if k.abs() > nxi / 2 - 1 {
        return Err(Error::Index {
            index: k,
            lo: -nxi / 2 + 1,
            hi: nxi / 2 - 1,
        });
    }
    if kp.abs() > nyi / 2 {
        return Err(Error::Index {
            index: kp,
            lo: -nyi / 2,
            hi: nyi / 2,
        });
    }
    Ok((kp + nyi / 2) * (nxi - 1) + k + nxi / 2)
}

/// The discretized operator before the density is applied.
#[derive(Debug, Clone)]
pub struct Assembled {
    /// `-(c_x (x) I + I (x) c_y)` in `K` order; positive definite.
    pub laplacian: SymMatrix,
    /// `1 / Sigma` at every grid point.
    pub inv_density: Vec<f64>,
    /// Both derivative blocks were read from the cache.
    pub cache_hit: bool,
}

pub fn assemble(config: &CcmConfig, cache: &LsfCache) -> Result<Assembled> {
    let (cx, hit_x) = cache.second_derivative(&config.x_basis())?;
    let (cy, hit_y) = cache.second_derivative(&config.y_basis())?;
    let mx = config.nx as usize - 1;
    let my = config.ny as usize + 1;
    let dim = mx * my;

    let mut data = vec![0.0; dim * dim];
    for iy in 0..my {
        for ix in 0..mx {
            let row = &mut data[(iy * mx + ix) * dim..(iy * mx + ix + 1) * dim];
            for jx in 0..mx {
                row[iy * mx + jx] -= cx.get(ix, jx);
            }
            for jy in 0..my {
                row[jy * mx + ix] -= cy.get(iy, jy);
            }
        }
    }
    let laplacian = SymMatrix::from_symmetric_data(dim, data);

    let mut inv_density = Vec::with_capacity(dim);
    for (x, y) in config.nodes() {
        inv_density.push(1.0 / config.map.sigma(x, y)?);
    }
    Ok(Assembled {
        laplacian,
        inv_density,
        cache_hit: hit_x && hit_y,
    })
}

#[derive(Debug, Clone)]
pub struct CcmResult {
    /// Lowest eigenvalues, ascending, in units of the dilated ring.
    pub energies: Vec<f64>,
    /// `vectors[i][K - 1]` is state `i` at grid point `K`.
    pub vectors: Option<Vec<Vec<f64>>>,
    pub config: CcmConfig,
    pub cache_hit: bool,
}

impl CcmResult {
    /// One unlabeled level per eigenvalue.
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::new(
            self.energies
                .iter()
                .map(|&e| LabeledLevel::unlabeled(e, Engine::Ccm))
                .collect(),
        )
    }

    /// The discrete norm `C^2 hx hy sum_K Sigma_K psi_K^2`.
    pub fn weighted_norm(&self, state: usize) -> Result<f64> {
        let psi = self.vector(state)?;
        let map = self.config.map();
        let (hx, hy) = (
            self.config.x_basis().spacing(),
            self.config.y_basis().spacing(),
        );
        let mut s = 0.0;
        for ((x, y), v) in self.config.nodes().into_iter().zip(psi) {
            s += map.sigma(x, y)? * v * v;
        }
        Ok(map.c() * map.c() * hx * hy * s)
    }

    pub fn vector(&self, state: usize) -> Result<&[f64]> {
        let vectors = self
            .vectors
            .as_ref()
            .ok_or_else(|| Error::State("eigenvectors were not requested".into()))?;
        vectors
            .get(state)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Index {
                index: state as i64,
                lo: 0,
                hi: vectors.len() as i64 - 1,
            })
    }
}

/// Lowest `n_states` eigenvalues of `D^{-1} L`, computed from the similar
/// symmetric matrix `D^{-1/2} L D^{-1/2}` (`D = diag(Sigma)`) and divided by
/// `C^2`.
///
/// Eigenvectors are mapped back to grid values `psi = D^{-1/2} v`, normalized
/// to unit [`CcmResult::weighted_norm`] and signed so their largest entry is
/// positive.
pub fn solve(
    config: &CcmConfig,
    n_states: usize,
    want_vectors: bool,
    cache: &LsfCache,
) -> Result<CcmResult> {
    let dim = config.dim();
    if n_states == 0 || n_states > dim {
        return Err(Error::Input(format!(
            "n_states must lie in 1..={dim}, got {n_states}"
        )));
    }
    let Assembled {
        mut laplacian,
        inv_density,
        cache_hit,
    } = assemble(config, cache)?;
    let root: Vec<f64> = inv_density.iter().map(|v| v.sqrt()).collect();
    laplacian.scale_congruence_in_place(&root);
    let dec = sym_eig(&laplacian, want_vectors)?;
    drop(laplacian);

    let c2 = config.map.c().powi(2);
    let energies: Vec<f64> = dec.values[..n_states].iter().map(|v| v / c2).collect();
    let norm =
        1.0 / (config.map.c() * (config.x_basis().spacing() * config.y_basis().spacing()).sqrt());
    let vectors = dec.vectors.map(|mut all| {
        all.truncate(n_states);
        for v in all.iter_mut() {
            let mut peak = 0.0f64;
            for (x, r) in v.iter_mut().zip(&root) {
                *x *= r * norm;
                if x.abs() > peak.abs() {
                    peak = *x;
                }
            }
            if peak < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        all
    });
    Ok(CcmResult {
        energies,
        vectors,
        config: config.clone(),
        cache_hit,
    })
}

/// Grid values of one state placed on the ring: `(u, v, psi)` per point,
/// `(u, v)` the image of the node under the dilated map.
pub fn sample_wavefunction(result: &CcmResult, state: usize) -> Result<Vec<(f64, f64, f64)>> {
    let psi = result.vector(state)?;
    let map = result.config.map();
    Ok(result
        .config
        .nodes()
        .into_iter()
        .zip(psi)
        .map(|((x, y), &p)| {
            let (u, v) = map.map_point(x, y);
            (u, v, p)
        })
        .collect())
}
