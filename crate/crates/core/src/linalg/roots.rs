use crate::error::{Error, Result};

/// Absolute bracket width at which [`refine_root`] stops by default.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Every sign change of `f` over a uniform scan of `[lo, hi]` with `steps`
/// subintervals, in ascending order. A grid point where `f` is exactly zero
/// yields a degenerate bracket `(x, x)`.
pub fn find_root_brackets(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Vec<(f64, f64)> {
    let steps = steps.max(1);
    let h = (hi - lo) / steps as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    for i in 1..=steps {
        let x1 = if i == steps { hi } else { lo + i as f64 * h };
        let f1 = f(x1);
        if f1 == 0.0 {
            out.push((x1, x1));
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) && f0.is_finite() && f1.is_finite() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Bisection until the bracket is narrower than `tol`. The returned value
/// always lies inside the input bracket.
pub fn refine_root(mut f: impl FnMut(f64) -> f64, (lo, hi): (f64, f64), tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    if fa == 0.0 {
        return Ok(a);
    }
    let fb = f(b);
    if fb == 0.0 {
        return Ok(b);
    }
    if !fa.is_finite() || !fb.is_finite() || (fa < 0.0) == (fb < 0.0) {
        return Err(Error::Input(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sin_bracket_contains_pi() {
        // [1, 7] also contains 2 pi.
        let b = find_root_brackets(f64::sin, 1.0, 7.0, 600);
        assert_eq!(b.len(), 2);
        assert!(b[0].0 <= PI && PI <= b[0].1);
        assert!(b[1].0 <= 2.0 * PI && 2.0 * PI <= b[1].1);
    }

    #[test]
    fn cos_three_brackets() {
        let b = find_root_brackets(f64::cos, 0.0, 10.0, 1000);
        assert_eq!(b.len(), 3);
        for (br, r) in b.iter().zip([0.5 * PI, 1.5 * PI, 2.5 * PI]) {
            assert!(br.0 <= r && r <= br.1);
        }
    }

    #[test]
    fn refine_pi_and_sqrt2() {
        let r = refine_root(f64::sin, (3.0, 3.3), 1e-12).unwrap();
        assert!((r - PI).abs() < 1e-12);
        let r = refine_root(|x| x * x - 2.0, (1.0, 2.0), 1e-12).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn refine_without_sign_change_fails() {
        assert!(matches!(
            refine_root(|x| x * x + 1.0, (-1.0, 1.0), 1e-12),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn no_sign_change_gives_empty_list() {
        assert!(find_root_brackets(|x| x * x + 1.0, -3.0, 3.0, 100).is_empty());
    }
}
