use crate::error::{Error, Result};

/// Dense real symmetric matrix, stored full and row-major.
///
/// Both triangles are kept and are bitwise equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    /// Builds the matrix from the lower triangle of `f(i, j)` (`j <= i`).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Accepts a row-major square matrix that is symmetric up to rounding
    /// (relative 1e-10 of the largest entry) and stores its symmetric part.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        let scale = data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut data = data;
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (data[i * dim + j], data[j * dim + i]);
                if (a - b).abs() > 1e-10 * scale {
                    return Err(Error::Input(format!(
                        "matrix not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                let s = 0.5 * (a + b);
                data[i * dim + j] = s;
                data[j * dim + i] = s;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Input("rows of unequal length".into()));
        }
        Self::from_row_major(dim, rows.concat())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| dot(self.row(i), v)).collect()
    }

    /// Returns `D A D` for the diagonal matrix `D = diag(scale)`.
    pub fn scaled_congruence(&self, scale: &[f64]) -> Self {
        let mut out = self.clone();
        out.scale_congruence_in_place(scale);
        out
    }

    /// Replaces `A` by `D A D`, `D = diag(scale)`.
    pub fn scale_congruence_in_place(&mut self, scale: &[f64]) {
        let n = self.dim;
        assert_eq!(scale.len(), n, "scale length must match dimension");
        for i in 0..n {
            let si = scale[i];
            for (v, sj) in self.data[i * n..(i + 1) * n].iter_mut().zip(scale) {
                *v *= si * sj;
            }
        }
    }

    /// Wraps row-major data already known to be exactly symmetric.
    pub(crate) fn from_symmetric_data(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        debug_assert!((0..dim).all(|i| (0..i).all(|j| data[i * dim + j] == data[j * dim + i])));
        Self { dim, data }
    }
}

/// Eigenvalues in ascending order, with matching orthonormal eigenvectors
/// when requested (`vectors[i]` belongs to `values[i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder reflector `I - u u^T / h` acting on the leading `u.len()`
/// coordinates.
struct Reflector {
    u: Vec<f64>,
    h: f64,
}

/// Reduces the symmetric matrix held in `w` (full row-major, only the lower
/// triangle is read) to tridiagonal form. Returns the diagonal, the
/// subdiagonal (`e[i]` couples `i-1` and `i`, `e[0] = 0`) and the reflectors
/// indexed by the row they annihilated.
fn tridiagonalize(w: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, Vec<Option<Reflector>>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors: Vec<Option<Reflector>> = (0..n).map(|_| None).collect();

    for i in (1..n).rev() {
        let l = i - 1;
        let (head, tail) = w.split_at_mut(i * n);
        let row = &tail[..i];
        let scale: f64 = row.iter().map(|v| v.abs()).sum();
        if i == 1 || scale == 0.0 {
            e[i] = row[l];
            continue;
        }
        let mut u: Vec<f64> = row.iter().map(|v| v / scale).collect();
        let sigma = dot(&u, &u);
        let f = u[l];
        let g = if f >= 0.0 {
            -sigma.sqrt()
        } else {
            sigma.sqrt()
        };
        e[i] = scale * g;
        let h = sigma - f * g;
        u[l] = f - g;

        // p = A u / h on the leading i x i block, reading the lower triangle.
        let mut p = vec![0.0; i];
        for j in 0..i {
            let rj = &head[j * n..j * n + j + 1];
            let uj = u[j];
            let mut acc = rj[j] * uj;
            for ((a, uk), pk) in rj[..j].iter().zip(&u[..j]).zip(p[..j].iter_mut()) {
                acc += a * uk;
                *pk += a * uj;
            }
            p[j] += acc;
        }
        let inv_h = 1.0 / h;
        p.iter_mut().for_each(|v| *v *= inv_h);
        let kk = 0.5 * dot(&u, &p) * inv_h;
        let q: Vec<f64> = p.iter().zip(&u).map(|(pv, uv)| pv - kk * uv).collect();

        for j in 0..i {
            let rj = &mut head[j * n..j * n + j + 1];
            let (uj, qj) = (u[j], q[j]);
            for ((a, qk), uk) in rj.iter_mut().zip(&q[..=j]).zip(&u[..=j]) {
                *a -= uj * qk + qj * uk;
            }
        }
        reflectors[i] = Some(Reflector { u, h });
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = w[i * n + i];
    }
    (d, e, reflectors)
}

/// Builds `Q^T` (row-major, rows are columns of `Q`) from the reflectors.
fn accumulate_transpose(reflectors: &[Option<Reflector>], n: usize) -> Vec<Vec<f64>> {
    let mut zt: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row = vec![0.0; n];
            row[r] = 1.0;
            row
        })
        .collect();
    for (i, refl) in reflectors.iter().enumerate() {
        let Some(Reflector { u, h }) = refl else {
            continue;
        };
        for row in zt.iter_mut().take(i) {
            let s = dot(&row[..i], u) / h;
            if s != 0.0 {
                row[..i].iter_mut().zip(u).for_each(|(z, uk)| *z -= s * uk);
            }
        }
    }
    zt
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Rotations are applied
/// to the rows of `rows` when given.
fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    mut rows: Option<&mut Vec<Vec<f64>>>,
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Accuracy(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(rows) = rows.as_deref_mut() {
                    let (lo, hi) = rows.split_at_mut(i + 1);
                    let (ri, ri1) = (&mut lo[i], &mut hi[0]);
                    for (zi, zi1) in ri.iter_mut().zip(ri1.iter_mut()) {
                        let f = *zi1;
                        *zi1 = s * *zi + c * f;
                        *zi = c * *zi - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues (ascending) of a symmetric matrix, and optionally an
/// orthonormal set of eigenvectors.
///
/// Householder tridiagonalization followed by implicit-shift QL; `O(n^3)`.
pub fn sym_eig(a: &SymMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let mut w = a.as_slice().to_vec();
    let (mut d, mut e, reflectors) = tridiagonalize(&mut w, n);
    drop(w);

    let mut rows = want_vectors.then(|| accumulate_transpose(&reflectors, n));
    drop(reflectors);
    tridiagonal_ql(&mut d, &mut e, rows.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = rows.map(|mut rows| {
        order
            .iter()
            .map(|&i| std::mem::take(&mut rows[i]))
            .collect()
    });
    Ok(EigenDecomposition { values, vectors })
}

/// Lower Cholesky factor of `b`, row-major.
fn cholesky(b: &SymMatrix) -> Result<Vec<f64>> {
    let n = b.dim();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s = b.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::Degeneracy(format!(
                        "matrix is not positive definite (pivot {i} = {s:e})"
                    )));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Eigenvalues of the pencil `(a, b)`, `a x = lambda b x`, with `b`
/// symmetric positive definite. Vectors, when requested, are
/// `b`-orthonormal.
pub fn gen_sym_eig(a: &SymMatrix, b: &SymMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::Input(format!(
            "pencil dimensions differ: {n} vs {}",
            b.dim()
        )));
    }
    if b.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let l = cholesky(b)?;

    // x = L^{-1} A, column by column (forward substitution on every column).
    let mut x = a.as_slice().to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[i * n + k];
            if lik != 0.0 {
                let (top, bottom) = x.split_at_mut(i * n);
                let rk = &top[k * n..(k + 1) * n];
                bottom[..n]
                    .iter_mut()
                    .zip(rk)
                    .for_each(|(xi, xk)| *xi -= lik * xk);
            }
        }
        let inv = 1.0 / l[i * n + i];
        x[i * n..(i + 1) * n].iter_mut().for_each(|v| *v *= inv);
    }
    // c = x L^{-T}: solve on rows, c[r][j] = (x[r][j] - sum_k<j c[r][k] l[j][k]) / l[j][j].
    let mut c = x;
    for r in 0..n {
        let row = &mut c[r * n..(r + 1) * n];
        for j in 0..n {
            let s = row[j] - dot(&row[..j], &l[j * n..j * n + j]);
            row[j] = s / l[j * n + j];
        }
    }
    let c = SymMatrix::from_row_major(n, c)?;
    let mut dec = sym_eig(&c, want_vectors)?;
    if let Some(vectors) = dec.vectors.as_mut() {
        // back-substitute L^T x = y
        for v in vectors.iter_mut() {
            for i in (0..n).rev() {
                let mut s = v[i];
                for k in i + 1..n {
                    s -= l[k * n + i] * v[k];
                }
                v[i] = s / l[i * n + i];
            }
        }
    }
    Ok(dec)
}
