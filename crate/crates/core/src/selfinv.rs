//! Self-inversive polynomials built from the limit symbol.
//!
//! With `U_1 .. U_L` the off-diagonal limits of `M_e`,
//! `P_{2L,λ}(z) = Σ_k U_k (z^{L+k} + z^{L-k}) - λ z^L`. On `|z| = 1` this is
//! `z^L (S(θ) - λ)` with symbol `S(θ) = 2 Σ U_k cos kθ = Q(cos θ)` for the
//! centred primitive, so circle zeros appear exactly when `λ` lies in the
//! range of `Q` over `[-1, 1]`.

use num_complex::Complex64;

use crate::darboux::ExceptionalFamily;
use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues_dense;
use crate::opmatrix::{limit_coeffs, limit_coeffs_of, q_primitive, BandedSymMatrix, ConstantMode};
use crate::output::Table;
use crate::poly::{poly_roots, Polynomial};

pub const CIRCLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SelfInversivePoly {
    pub l: usize,
    /// `U_1 .. U_L`.
    pub u: Vec<f64>,
    pub lambda: f64,
    /// Degree `2L`; coefficient `k` equals coefficient `2L - k`.
    pub poly: Polynomial,
}

impl SelfInversivePoly {
    pub fn from_u(u: &[f64], lambda: f64) -> Self {
        let l = u.len();
        let mut c = vec![0.0; 2 * l + 1];
        c[l] = -lambda;
        for (k, &uk) in u.iter().enumerate() {
            c[l + k + 1] = uk;
            c[l - k - 1] = uk;
        }
        Self {
            l,
            u: u.to_vec(),
            lambda,
            poly: Polynomial::new(c),
        }
    }

    /// `P + λ z^L`.
    pub fn without_lambda(&self) -> Polynomial {
        Self::from_u(&self.u, 0.0).poly
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        Ok(poly_roots(&self.poly)?.all())
    }

    /// Roots strictly inside the disk, `|r| < 1 - tol`.
    pub fn roots_inside_disk(&self, tol: f64) -> Result<usize> {
        Ok(self.roots()?.iter().filter(|r| r.norm() < 1.0 - tol).count())
    }

    /// Largest distance from a root `r` to the nearest root at `1 / conj(r)`.
    pub fn inversion_asymmetry(&self) -> Result<f64> {
        let roots = self.roots()?;
        Ok(roots
            .iter()
            .map(|r| {
                let mirror = r.conj().inv();
                roots.iter().map(|s| (s - mirror).norm()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max))
    }
}

pub fn build_self_inversive(fam: &ExceptionalFamily, lambda: f64) -> SelfInversivePoly {
    SelfInversivePoly::from_u(&limit_coeffs(fam)[1..], lambda)
}

/// True iff some root satisfies `||r| - 1| <= tol`. A vanishing value at
/// `z = ±1` also counts: the endpoint roots are double and may split off the
/// circle in floating point.
pub fn circle_zero_test(p: &SelfInversivePoly, tol: f64) -> Result<bool> {
    let scale: f64 = p.poly.coeffs().iter().map(|c| c.abs()).sum();
    for x in [1.0, -1.0] {
        if p.poly.eval(x).abs() <= 1e-12 * scale {
            return Ok(true);
        }
    }
    Ok(p.roots()?.iter().any(|r| (r.norm() - 1.0).abs() <= tol))
}

/// `|λ| > Σ_{k≠L} |c_k|` guarantees no circle zeros. Sufficient only.
pub fn dominant_middle_test(p: &SelfInversivePoly) -> bool {
    let c = p.poly.coeffs();
    let others: f64 = c.iter().enumerate().filter(|&(k, _)| k != p.l).map(|(_, v)| v.abs()).sum();
    c.get(p.l).copied().unwrap_or(0.0).abs() > others
}

/// `[2 Σ (-1)^k U_k, 2 Σ U_k]`, checked against `[Q(-1), Q(1)]` for the
/// centred primitive.
pub fn statement_interval(fam: &ExceptionalFamily) -> Result<(f64, f64)> {
    let (lo, hi) = interval_from_u(&limit_coeffs(fam));
    let q = q_primitive(fam, ConstantMode::MinusU0);
    let (qlo, qhi) = (q.eval(-1.0), q.eval(1.0));
    if (lo - qlo).abs() > 1e-12 || (hi - qhi).abs() > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "limit-symbol interval [{lo}, {hi}] differs from [Q(-1), Q(1)] = [{qlo}, {qhi}]"
        )));
    }
    Ok((lo, hi))
}

/// From `U_0 .. U_L`; `U_0` is ignored.
pub fn interval_from_u(u: &[f64]) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (k, &uk) in u.iter().enumerate().skip(1) {
        hi += 2.0 * uk;
        lo += if k % 2 == 0 { 2.0 * uk } else { -2.0 * uk };
    }
    (lo, hi)
}

/// Banded Toeplitz section with entries `U_{|i-j|}` off the diagonal and zero on it.
pub fn toeplitz_section(u: &[f64], n: usize) -> BandedSymMatrix {
    let l = u.len().saturating_sub(1);
    let mut m = BandedSymMatrix::zeros(n, l);
    for i in 0..n {
        for k in 1..=l {
            if i + k < n {
                m.set(i, i + k, u[k]);
            }
        }
    }
    m
}

/// Sorted eigenvalues of the `n x n` Toeplitz section of the limit symbol.
pub fn toeplitz_section_spectrum(fam: &ExceptionalFamily, n: usize) -> Result<Vec<f64>> {
    toeplitz_spectrum_of(&fam.b_tilde, n)
}

pub fn toeplitz_spectrum_of(b_tilde: &Polynomial, n: usize) -> Result<Vec<f64>> {
    let u = limit_coeffs_of(b_tilde);
    let l = u.len() - 1;
    if n < 2 * l + 1 {
        return Err(Error::SizeTooSmall {
            needed: 2 * l + 1,
            available: n,
        });
    }
    let mut ev = sym_eigenvalues_dense(&toeplitz_section(&u, n).to_dense())?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Hausdorff distance between `points` and the image `Q(cos θ_j)`,
/// `θ_j = (j + 1/2) π / m`, `j < m`, of the centred primitive.
pub fn symbol_image_distance(fam: &ExceptionalFamily, points: &[f64], m: usize) -> f64 {
    let q = q_primitive(fam, ConstantMode::MinusU0);
    let grid: Vec<f64> = (0..m)
        .map(|j| q.eval(((j as f64 + 0.5) * std::f64::consts::PI / m as f64).cos()))
        .collect();
    let dir = |a: &[f64], b: &[f64]| {
        a.iter()
            .map(|x| b.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    dir(points, &grid).max(dir(&grid, points))
}

/// One row of a `λ` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub lo: f64,
    pub hi: f64,
    pub inside_interval: bool,
    pub has_circle_zero: bool,
    pub n_roots_inside_disk: usize,
}

impl SweepRow {
    /// Circle zeros exactly inside the interval; `L` roots in the disk outside it.
    pub fn consistent(&self, l: usize) -> bool {
        self.inside_interval == self.has_circle_zero
            && (self.inside_interval || self.n_roots_inside_disk == l)
    }
}

pub fn sweep(fam: &ExceptionalFamily, lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    let (lo, hi) = statement_interval(fam)?;
    lambdas
        .iter()
        .map(|&lambda| {
            let p = build_self_inversive(fam, lambda);
            Ok(SweepRow {
                lambda,
                lo,
                hi,
                inside_interval: lo <= lambda && lambda <= hi,
                has_circle_zero: circle_zero_test(&p, CIRCLE_TOL)?,
                n_roots_inside_disk: p.roots_inside_disk(CIRCLE_TOL)?,
            })
        })
        .collect()
}

/// Rows `(lambda, lo, hi, inside_interval, has_circle_zero, n_roots_inside_disk)`.
pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&["lambda", "lo", "hi", "inside_interval", "has_circle_zero", "n_roots_inside_disk"]);
    for r in rows {
        t.push(vec![
            r.lambda.into(),
            r.lo.into(),
            r.hi.into(),
            r.inside_interval.into(),
            r.has_circle_zero.into(),
            r.n_roots_inside_disk.into(),
        ]);
    }
    t
}
