use std::f64::consts::PI;

/// One-dimensional quadrature rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Gauss-Legendre with `n` nodes: exact for polynomials of degree `2n - 1`.
    Gauss,
    /// Trapezoid rule on `n` equal panels of a periodic integrand.
    PeriodicTrapezoid,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn trapezoid(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (hi - lo) / n as f64;
    h * (0..n).map(|j| f(lo + j as f64 * h)).sum::<f64>()
}

/// Integral of `f` over `[lo, hi]` with the selected rule and `n` nodes.
pub fn integrate_1d(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, scheme: Scheme, n: usize) -> f64 {
    assert!(n >= 2, "quadrature needs n >= 2");
    match scheme {
        Scheme::Gauss => GaussLegendre::new(n).integrate(lo, hi, f),
        Scheme::PeriodicTrapezoid => trapezoid(lo, hi, n, f),
    }
}

/// Tensor rule on `[x_lo, x_hi] x [y_lo, y_hi]`: Gauss in `x` with `nx`
/// nodes, periodic trapezoid in `y` with `ny` panels.
pub fn integrate_rect(
    mut f: impl FnMut(f64, f64) -> f64,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    nx: usize,
    ny: usize,
) -> f64 {
    let rule = GaussLegendre::new(nx);
    let h = (y_hi - y_lo) / ny as f64;
    let mut total = 0.0;
    for (x, w) in rule.mapped(x_lo, x_hi) {
        let mut row = 0.0;
        for j in 0..ny {
            row += f(x, y_lo + j as f64 * h);
        }
        total += w * h * row;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_two_points_is_exact_for_cubics() {
        let v = integrate_1d(|x| x * x, 0.0, 1.0, Scheme::Gauss, 2);
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = integrate_1d(|x| x * x * x - 2.0 * x, 0.0, 2.0, Scheme::Gauss, 2);
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn periodic_trapezoid_cos_squared() {
        let v = integrate_1d(
            |y| y.cos().powi(2),
            0.0,
            2.0 * PI,
            Scheme::PeriodicTrapezoid,
            8,
        );
        assert!((v - PI).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 64, 257] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn antisymmetric_integrand_vanishes() {
        for n in [3, 8, 33] {
            let v = integrate_1d(|x| x.powi(3) * (x * x).exp(), -1.5, 1.5, Scheme::Gauss, n);
            assert!(v.abs() < 1e-14, "{v}");
        }
    }
}
