//! Bessel functions of integer order and the annulus cross-product function.
//!
//! Evaluation strategy by region:
//!
//! * `x^2/4 <= (m+1)/2`: ascending series for `J_m` (terms decrease from the
//!   first one, so there is no cancellation).
//! * `x < 20`: Miller backward recurrence for `J_n`, normalized with
//!   `J_0 + 2 sum J_2k = 1`; `Y_0`, `Y_1` from their Neumann series in the
//!   same `J_n`; forward recurrence for `Y_m`.
//! * `x >= 20`: Hankel asymptotic expansion for orders 0 and 1 (the smallest
//!   term is below `e^-40`), forward recurrence for `Y_m` and for `J_m` when
//!   `m < x`, Miller otherwise.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::linalg::{find_root_brackets, refine_root};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HANKEL_MIN_X: f64 = 20.0;
const RESCALE: f64 = 1e250;

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

fn series_applies(m: u32, x: f64) -> bool {
    0.25 * x * x <= 0.5 * (m as f64 + 1.0)
}

/// Ascending series `sum (-1)^k (x/2)^(2k+m) / (k! (m+k)!)`.
fn series_j(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let lead = (m as f64 * (0.5 * x).ln() - ln_factorial(m)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = 0.25 * x * x;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..200 {
        term *= -q / (k as f64 * (m as f64 + k as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel asymptotic amplitudes `(P, Q)` for order `nu`.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0_f64;
    for k in 1..200u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() > term.abs() || next == 0.0 {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            // k = 1, 3, 5, ... contribute to Q with signs +, -, +, ...
            let sign = if ((k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * term;
        } else {
            p += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// `(J_nu(x), Y_nu(x))` from the Hankel expansion, `x >= 20`.
fn hankel_jy(nu: u32, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu as f64, x);
    let chi = x - (0.5 * nu as f64 + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Normalized `J_0 ..= J_top` by Miller's backward recurrence, where `top`
/// is the (even) starting index chosen for `nmax` and `x`.
fn miller(x: f64, nmax: u32) -> Vec<f64> {
    let reach = (nmax as f64).max(x);
    let mut start = (reach + 30.0 + 2.0 * (40.0 * reach).sqrt()) as usize;
    start += start % 2;
    let mut f = vec![0.0; start + 2];
    f[start] = 1e-30;
    for n in (1..=start).rev() {
        let v = (2.0 * n as f64 / x) * f[n] - f[n + 1];
        f[n - 1] = v;
        if v.abs() > RESCALE {
            for w in &mut f[n - 1..] {
                *w /= RESCALE;
            }
        }
    }
    let norm = f[0] + 2.0 * f.iter().skip(2).step_by(2).sum::<f64>();
    f.truncate(start + 1);
    f.iter_mut().for_each(|v| *v /= norm);
    f
}

/// `Y_0` and `Y_1` from the Neumann series in the Miller sequence.
fn neumann_y01(x: f64, j: &[f64]) -> (f64, f64) {
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1usize;
    while 2 * k + 1 < j.len() {
        let kf = k as f64;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / kf;
        s1 -= sign * (2.0 * kf + 1.0) * j[2 * k + 1] / (kf * (kf + 1.0));
        k += 1;
    }
    let y0 = FRAC_2_PI * (lg * j[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * ((lg - 1.0) * j[1] - j[0] / x + s1);
    (y0, y1)
}

/// Forward recurrence `Y_{n+1} = (2n/x) Y_n - Y_{n-1}`; saturates to
/// `-inf` on overflow.
fn forward_y(m: u32, x: f64, y0: f64, y1: f64) -> f64 {
    if m == 0 {
        return y0;
    }
    let (mut a, mut b) = (y0, y1);
    for n in 1..m {
        let c = (2.0 * n as f64 / x) * b - a;
        if !c.is_finite() {
            return f64::NEG_INFINITY;
        }
        a = b;
        b = c;
    }
    b
}

fn forward_j(m: u32, x: f64, j0: f64, j1: f64) -> f64 {
    if m == 0 {
        return j0;
    }
    let (mut a, mut b) = (j0, j1);
    for n in 1..m {
        let c = (2.0 * n as f64 / x) * b - a;
        a = b;
        b = c;
    }
    b
}

fn j_unchecked(m: u32, x: f64) -> f64 {
    if series_applies(m, x) {
        series_j(m, x)
    } else if x >= HANKEL_MIN_X && (m as f64) < x {
        forward_j(m, x, hankel_jy(0, x).0, hankel_jy(1, x).0)
    } else {
        miller(x, m)[m as usize]
    }
}

/// `(J_m(x), Y_m(x))` for `x > 0`.
fn jy_unchecked(m: u32, x: f64) -> (f64, f64) {
    if x < 1e-8 {
        let lg = (0.5 * x).ln() + EULER_GAMMA;
        let y0 = FRAC_2_PI * lg;
        let y1 = -FRAC_2_PI / x + (x / PI) * (lg - 0.5);
        return (series_j(m, x), forward_y(m, x, y0, y1));
    }
    if x >= HANKEL_MIN_X {
        let (j0, y0) = hankel_jy(0, x);
        let (j1, y1) = hankel_jy(1, x);
        let j = if series_applies(m, x) {
            series_j(m, x)
        } else if (m as f64) < x {
            forward_j(m, x, j0, j1)
        } else {
            miller(x, m)[m as usize]
        };
        return (j, forward_y(m, x, y0, y1));
    }
    let seq = miller(x, m.max(1));
    let (y0, y1) = neumann_y01(x, &seq);
    let j = if series_applies(m, x) {
        series_j(m, x)
    } else {
        seq[m as usize]
    };
    (j, forward_y(m, x, y0, y1))
}

/// Bessel function of the first kind `J_m(x)`, `x >= 0`.
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("J_{m}({x}) requires finite x >= 0")));
    }
    Ok(j_unchecked(m, x))
}

/// Bessel function of the second kind `Y_m(x)`, `x > 0`. Returns `-inf`
/// where the true value overflows.
pub fn bessel_y(m: u32, x: f64) -> Result<f64> {
    Ok(bessel_jy(m, x)?.1)
}

/// `(J_m(x), Y_m(x))` sharing one evaluation, `x > 0`.
pub fn bessel_jy(m: u32, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Y_{m}({x}) requires finite x > 0")));
    }
    Ok(jy_unchecked(m, x))
}

fn check_cross_args(k: f64, beta: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("cross product needs k > 0, got {k}")));
    }
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "cross product needs beta > 1, got {beta}"
        )));
    }
    Ok(())
}

/// `Y_m(k) J_m(k beta) - J_m(k) Y_m(k beta)`.
pub fn cross_product(m: u32, k: f64, beta: f64) -> Result<f64> {
    check_cross_args(k, beta)?;
    let (jk, yk) = jy_unchecked(m, k);
    let (jb, yb) = jy_unchecked(m, k * beta);
    Ok(yk * jb - jk * yb)
}

/// The cross product divided by `max(|J_m(k)|, |Y_m(k)|)`: same sign and
/// zeros, but finite where `Y_m(k)` overflows.
fn cross_product_scaled(m: u32, k: f64, beta: f64) -> f64 {
    let (jk, yk) = jy_unchecked(m, k);
    let (jb, yb) = jy_unchecked(m, k * beta);
    if !yk.is_finite() {
        return -jb;
    }
    let s = yk.abs().max(jk.abs());
    let second = if jk == 0.0 { 0.0 } else { (jk / s) * yb };
    (yk / s) * jb - second
}

/// The first `count` positive zeros of the cross product in `k`, ascending.
///
/// Zeros satisfy `k > m / beta` (the angular part of the Laplacian alone
/// exceeds `m^2 / b^2`), so the scan starts there and advances in windows of
/// `(count + 5)` asymptotic spacings `pi / (beta - 1)`.
pub fn cross_product_roots(m: u32, beta: f64, count: usize) -> Result<Vec<f64>> {
    check_cross_args(1.0, beta)?;
    if count == 0 {
        return Err(Error::Input("count must be positive".into()));
    }
    let spacing = PI / (beta - 1.0);
    let mut lo = (m as f64 / beta).max(1e-6 * spacing);
    let window = spacing * (count + 5) as f64;
    let steps_per_window = 64 * (count + 5);
    let mut roots = Vec::with_capacity(count);
    for _ in 0..64 {
        let hi = lo + window;
        let f = |k: f64| cross_product_scaled(m, k, beta);
        for bracket in find_root_brackets(f, lo, hi, steps_per_window) {
            let tol = 1e-13 * bracket.1;
            roots.push(refine_root(f, bracket, tol)?);
            if roots.len() == count {
                return Ok(roots);
            }
        }
        lo = hi;
    }
    Err(Error::Internal(format!(
        "found only {} of {count} cross-product zeros for m = {m}, beta = {beta} below k = {lo}",
        roots.len()
    )))
}

/// Zeros of the cross product in `(m / beta, k_max]`, ascending.
pub(crate) fn cross_product_roots_below(m: u32, beta: f64, k_max: f64) -> Result<Vec<f64>> {
    let spacing = PI / (beta - 1.0);
    let lo = (m as f64 / beta).max(1e-6 * spacing);
    if k_max <= lo {
        return Ok(Vec::new());
    }
    let steps = (64.0 * (k_max - lo) / spacing).ceil().max(16.0) as usize;
    let f = |k: f64| cross_product_scaled(m, k, beta);
    find_root_brackets(f, lo, k_max, steps)
        .into_iter()
        .map(|b| refine_root(f, b, 1e-13 * b.1))
        .collect()
}
