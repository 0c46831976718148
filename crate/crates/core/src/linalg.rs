//! Small dense linear algebra kernels: symmetric eigenproblems via Householder
//! tridiagonalization and implicit QL, and real Hessenberg eigenvalues via
//! balancing plus the Francis double-shift QR iteration.

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Dense {
        Dense::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Leading principal `n x n` block.
    pub fn leading(&self, n: usize) -> Dense {
        Dense::from_fn(n, n, |i, j| self[(i, j)])
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Determinant by partial-pivot LU.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let (p, pv) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if pv == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                if f != 0.0 {
                    for j in k..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for Dense {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Dense {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    tql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Implicit QL with Wilkinson-type shifts. `e[i]` couples `i` and `i + 1`.
/// When `z` is given, the rotations are accumulated into its columns.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Dense>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let per_value_cap = 30;
    let total_cap = 30 * n.max(1);
    let mut total = 0usize;
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
            total += 1;
            if iter > per_value_cap || total > total_cap {
                return Err(Error::EigenNonConvergence { cap: total_cap });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + sign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
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
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..z.rows() {
                        let f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
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

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns `(diag, off, q)` with `a = q T q^T` when vectors are requested.
fn tridiagonalize(a: &Dense, want_vectors: bool) -> (Vec<f64>, Vec<f64>, Option<Dense>) {
    let n = a.rows();
    // 1-based working copy keeps the classical index arithmetic readable.
    let mut w = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            w[i + 1][j + 1] = a[(i, j)];
        }
    }
    let mut d = vec![0.0; n + 1];
    let mut e = vec![0.0; n + 1];
    for i in (2..=n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 1 {
            let scale: f64 = (1..=l).map(|k| w[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = w[i][l];
            } else {
                for k in 1..=l {
                    w[i][k] /= scale;
                    h += w[i][k] * w[i][k];
                }
                let mut f = w[i][l];
                let mut g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                w[i][l] = f - g;
                f = 0.0;
                for j in 1..=l {
                    if want_vectors {
                        w[j][i] = w[i][j] / h;
                    }
                    g = 0.0;
                    for k in 1..=j {
                        g += w[j][k] * w[i][k];
                    }
                    for k in j + 1..=l {
                        g += w[k][j] * w[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * w[i][j];
                }
                let hh = f / (h + h);
                for j in 1..=l {
                    let f = w[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 1..=j {
                        w[j][k] -= f * e[k] + g * w[i][k];
                    }
                }
            }
        } else {
            e[i] = w[i][l];
        }
        d[i] = h;
    }
    d[1] = 0.0;
    e[1] = 0.0;
    for i in 1..=n {
        let l = i - 1;
        if want_vectors && d[i] != 0.0 {
            for j in 1..=l {
                let mut g = 0.0;
                for k in 1..=l {
                    g += w[i][k] * w[k][j];
                }
                for k in 1..=l {
                    w[k][j] -= g * w[k][i];
                }
            }
        }
        d[i] = w[i][i];
        if want_vectors {
            w[i][i] = 1.0;
            for j in 1..=l {
                w[j][i] = 0.0;
                w[i][j] = 0.0;
            }
        }
    }
    let diag = d[1..].to_vec();
    // e[i] couples i-1 and i (1-based); shift to the i, i+1 convention.
    let mut off = vec![0.0; n];
    if n >= 2 {
        off[..n - 1].copy_from_slice(&e[2..=n]);
    }
    let q = want_vectors.then(|| Dense::from_fn(n, n, |i, j| w[i + 1][j + 1]));
    (diag, off, q)
}

/// Eigenvalues (ascending) of a dense symmetric matrix.
pub fn sym_eigenvalues_dense(a: &Dense) -> Result<Vec<f64>> {
    let (mut d, mut e, _) = tridiagonalize(a, false);
    tql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenpairs of a dense symmetric matrix, ascending; column `k` of the
/// returned matrix is the eigenvector of value `k`.
pub fn sym_eigen_dense(a: &Dense) -> Result<(Vec<f64>, Dense)> {
    let n = a.rows();
    let (mut d, mut e, q) = tridiagonalize(a, true);
    let mut z = q.expect("vectors requested");
    tql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = Dense::from_fn(n, n, |r, c| z[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues `(re, im)` of a real upper-Hessenberg matrix after balancing.
pub fn hessenberg_eigenvalues(h: &Dense) -> Result<Vec<(f64, f64)>> {
    let n = h.rows();
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = h[(i, j)];
        }
    }
    balance(&mut a, n);
    hqr(&mut a, n)
}

fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i][j] *= g;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Francis double-shift QR on a 1-based upper-Hessenberg array.
fn hqr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<(f64, f64)>> {
    const MAX_ITS: usize = 60;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITS {
                        return Err(Error::RootFinder { iterations: its });
                    }
                    if its > 0 && its % 10 == 0 {
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s0;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_toeplitz_closed_form() {
        let n = 12;
        let ev = tridiag_eigenvalues(&vec![0.0; n], &vec![0.5; n - 1]).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let exact = ((n - j) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
        }
    }

    #[test]
    fn dense_symmetric_residuals() {
        let n = 9;
        let a = Dense::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let (vals, vecs) = sym_eigen_dense(&a).unwrap();
        let only = sym_eigenvalues_dense(&a).unwrap();
        for k in 0..n {
            assert!((vals[k] - only[k]).abs() < 1e-12);
            let v: Vec<f64> = (0..n).map(|i| vecs[(i, k)]).collect();
            let av = a.matvec(&v);
            let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - vals[k] * y).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-12 * a.max_abs() * n as f64);
        }
    }

    #[test]
    fn hessenberg_complex_pair() {
        // Companion of z^2 + 1.
        let h = Dense::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => -1.0,
            (1, 0) => 1.0,
            _ => 0.0,
        });
        let mut ev = hessenberg_eigenvalues(&h).unwrap();
        ev.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert!((ev[0].1 + 1.0).abs() < 1e-14 && ev[0].0.abs() < 1e-14);
        assert!((ev[1].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_matches_product_of_eigenvalues() {
        let a = Dense::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.3 / (1.0 + (i + j) as f64) });
        let ev = sym_eigenvalues_dense(&a).unwrap();
        let prod: f64 = ev.iter().product();
        assert!((a.det() - prod).abs() < 1e-12);
    }
}
