//! Matrices of multiplication operators.
//!
//! Multiplication by `Q = ∫ bt` is `(2L+1)`-diagonal in the orthonormal
//! exceptional basis (`M_e`), while multiplication by `x` is tridiagonal in
//! the standard orthonormal basis `q_n` of `W` (`A`). The basis change `O`
//! relates them through `O^T Q(A) O = M_e`.

use crate::darboux::ExceptionalFamily;
use crate::error::{Error, Result};
use crate::jacobi::{JacobiParams, QuadratureRule};
use crate::linalg::Dense;
use crate::output::Table;
use crate::poly::Polynomial;

/// Integration constant of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantMode {
    /// `Q(0) = 0`.
    Zero,
    /// `Q = Q_0 - U_0`, which centres the limit symbol.
    MinusU0,
}

/// `Q = ∫^x bt`, of degree `L`.
pub fn q_primitive(fam: &ExceptionalFamily, mode: ConstantMode) -> Polynomial {
    let q0 = fam.b_tilde.antiderivative();
    match mode {
        ConstantMode::Zero => q0,
        ConstantMode::MinusU0 => &q0 - &Polynomial::constant(limit_coeffs(fam)[0]),
    }
}

/// `U_0 .. U_L` for `bt = sum d_k x^k`:
/// `U_2l = sum_{p >= max(l,1)} d_{2p-1}/(2p) C(2p, p-l) / 4^p` and
/// `U_{2l+1} = sum_{p >= l} d_{2p}/(2p+1) C(2p+1, p-l) / 2^(2p+1)`.
pub fn limit_coeffs(fam: &ExceptionalFamily) -> Vec<f64> {
    limit_coeffs_of(&fam.b_tilde)
}

pub fn limit_coeffs_of(b_tilde: &Polynomial) -> Vec<f64> {
    let l = b_tilde.degree() + 1;
    let d = |k: usize| b_tilde.coeff(k);
    let binom = |n: usize, k: usize| -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    (0..=l)
        .map(|j| {
            if j % 2 == 0 {
                let lh = j / 2;
                (lh.max(1)..=l / 2)
                    .map(|p| d(2 * p - 1) / (2 * p) as f64 * binom(2 * p, p - lh) / 4f64.powi(p as i32))
                    .sum()
            } else {
                let lh = (j - 1) / 2;
                (lh..=(l - 1) / 2)
                    .map(|p| {
                        d(2 * p) / (2 * p + 1) as f64 * binom(2 * p + 1, p - lh)
                            / 2f64.powi(2 * p as i32 + 1)
                    })
                    .sum()
            }
        })
        .collect()
}

fn require_complete(fam: &ExceptionalFamily) -> Result<()> {
    if fam.is_complete() {
        Ok(())
    } else {
        Err(Error::Hypothesis(
            "the exceptional system misses the constant function; its span is not closed under multiplication by Q".into(),
        ))
    }
}

/// `u_{n,k} = <Q P̂_n, P̂_{n+k}>_W` for `n < N`, `|k| <= L`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub l: usize,
    /// `rows[n][k + L]`.
    pub rows: Vec<Vec<f64>>,
    pub limits: Vec<f64>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, n: usize, k: i64) -> f64 {
        let l = self.l as i64;
        if k.abs() > l || (n as i64 + k) < 0 {
            return 0.0;
        }
        self.rows[n][(k + l) as usize]
    }

    /// `max_{|k| <= L} |u_{n,k} - U_|k||`.
    pub fn limit_gap(&self, n: usize) -> f64 {
        let l = self.l as i64;
        (-l..=l)
            .map(|k| (self.get(n, k) - self.limits[k.unsigned_abs() as usize]).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|u_{n,k} - u_{n+k,-k}|` inside the table.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.len() {
            for k in 1..=self.l {
                if n + k < self.len() {
                    worst = worst.max((self.get(n, k as i64) - self.get(n + k, -(k as i64))).abs());
                }
            }
        }
        worst
    }

    /// Columns `n, k, u_nk, U_limit, abs_gap`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["n", "k", "u_nk", "U_limit", "abs_gap"]);
        let l = self.l as i64;
        for n in 0..self.len() {
            for k in -l..=l {
                if (n as i64 + k) < 0 {
                    continue;
                }
                let u = self.get(n, k);
                let lim = self.limits[k.unsigned_abs() as usize];
                t.push(vec![n.into(), k.into(), u.into(), lim.into(), (u - lim).abs().into()]);
            }
        }
        t
    }
}

/// Quadrature nodes with `P̂_0 .. P̂_nmax` tabulated at each.
struct ExceptionalTable {
    rule: QuadratureRule,
    values: Vec<Vec<f64>>,
}

impl ExceptionalTable {
    fn new(fam: &ExceptionalFamily, nmax: usize, extra_degree: usize) -> Result<Self> {
        let degree = 2 * (nmax + fam.b.degree()) + extra_degree;
        let rule = fam.weight_quadrature(degree)?;
        let values = rule
            .nodes
            .iter()
            .map(|&x| fam.orthonormal_values(nmax, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rule, values })
    }
}

/// Recurrence coefficients of `Q_0 = ∫^x bt` (zero constant) for `n < n_rows`.
pub fn recurrence_coeffs(fam: &ExceptionalFamily, n_rows: usize) -> Result<RecurrenceTable> {
    if n_rows == 0 {
        return Err(Error::InvalidParams("recurrence table needs N >= 1".into()));
    }
    require_complete(fam)?;
    let l = fam.l();
    let q = q_primitive(fam, ConstantMode::Zero);
    let tab = ExceptionalTable::new(fam, n_rows - 1 + l, l)?;
    let qx: Vec<f64> = tab.rule.nodes.iter().map(|&x| q.eval(x)).collect();
    let mut rows = vec![vec![0.0; 2 * l + 1]; n_rows];
    for (n, row) in rows.iter_mut().enumerate() {
        for (slot, k) in (-(l as i64)..=l as i64).enumerate() {
            let m = n as i64 + k;
            if m < 0 {
                continue;
            }
            let m = m as usize;
            row[slot] = tab
                .values
                .iter()
                .zip(&tab.rule.weights)
                .zip(&qx)
                .map(|((v, w), qv)| w * qv * v[n] * v[m])
                .sum();
        }
    }
    Ok(RecurrenceTable {
        l,
        rows,
        limits: limit_coeffs(fam),
    })
}

/// `|Q P̂_n(x) - sum_k u_{n,k} P̂_{n+k}(x)|` relative to the size of the terms.
pub fn recurrence_residual(fam: &ExceptionalFamily, table: &RecurrenceTable, n: usize, x: f64) -> Result<f64> {
    let l = table.l as i64;
    let v = fam.orthonormal_values(n + table.l, x)?;
    let lhs = q_primitive(fam, ConstantMode::Zero).eval(x) * v[n];
    let mut rhs = 0.0;
    let mut scale = lhs.abs();
    for k in -l..=l {
        let m = n as i64 + k;
        if m >= 0 {
            let t = table.get(n, k) * v[m as usize];
            rhs += t;
            scale += t.abs();
        }
    }
    Ok((lhs - rhs).abs() / scale.max(1.0))
}

/// Symmetric band matrix of half-bandwidth `L`; `upper[i][d]` is entry `(i, i+d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    half_bandwidth: usize,
    upper: Vec<Vec<f64>>,
}

impl BandedSymMatrix {
    pub fn zeros(size: usize, half_bandwidth: usize) -> Self {
        Self {
            half_bandwidth,
            upper: vec![vec![0.0; half_bandwidth + 1]; size],
        }
    }

    /// Diagonal `diag` and first off-diagonal `off` (`off[i]` couples `i, i+1`).
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), 1);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        for (i, &o) in off.iter().enumerate().take(diag.len().saturating_sub(1)) {
            m.set(i, i + 1, o);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.upper.len()
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        if c - r > self.half_bandwidth || c >= self.size() {
            0.0
        } else {
            self.upper[r][c - r]
        }
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        assert!(c - r <= self.half_bandwidth, "entry ({i}, {j}) outside the band");
        self.upper[r][c - r] = v;
    }

    /// Leading `n x n` section.
    pub fn leading(&self, n: usize) -> Self {
        let n = n.min(self.size());
        let mut upper = self.upper[..n].to_vec();
        for (i, row) in upper.iter_mut().enumerate() {
            for (d, v) in row.iter_mut().enumerate() {
                if i + d >= n {
                    *v = 0.0;
                }
            }
        }
        Self {
            half_bandwidth: self.half_bandwidth,
            upper,
        }
    }

    pub fn to_dense(&self) -> Dense {
        Dense::from_fn(self.size(), self.size(), |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> f64 {
        self.upper.iter().map(|r| r[0]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.upper.iter().map(|r| r[0]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Product of two finite symmetric band matrices of equal size, kept as a
    /// symmetric band matrix (valid because the factors commute in every use
    /// here: they are polynomials in one matrix).
    fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let hb = self.half_bandwidth + other.half_bandwidth;
        let mut out = Self::zeros(n, hb);
        for i in 0..n {
            for j in i..(i + hb + 1).min(n) {
                let lo = i.saturating_sub(self.half_bandwidth).max(j.saturating_sub(other.half_bandwidth));
                let hi = (i + self.half_bandwidth).min(j + other.half_bandwidth).min(n - 1);
                let mut s = 0.0;
                for k in lo..=hi {
                    s += self.get(i, k) * other.get(k, j);
                }
                out.upper[i][j - i] = s;
            }
        }
        out
    }

    fn add_identity(&mut self, c: f64) {
        for r in &mut self.upper {
            r[0] += c;
        }
    }

    /// `P(C)` of the finite matrix itself (Horner), with no truncation
    /// correction.
    pub fn poly_of_finite(&self, p: &Polynomial) -> Self {
        let deg = p.degree();
        let mut acc = Self::zeros(self.size(), 0);
        acc.add_identity(p.coeff(deg));
        for k in (0..deg).rev() {
            acc = acc.mul(self);
            acc.add_identity(p.coeff(k));
        }
        acc
    }
}

/// `P(C)` for the infinite band matrix whose leading section is `mat`.
///
/// Rows and columns below `size - deg(P) L` see the truncation edge, so the
/// result is cut to that size; every returned entry is exact.
pub fn apply_poly_to_banded(mat: &BandedSymMatrix, p: &Polynomial) -> Result<BandedSymMatrix> {
    let margin = p.degree() * mat.half_bandwidth();
    if mat.size() <= margin {
        return Err(Error::SizeTooSmall {
            needed: margin + 1,
            available: mat.size(),
        });
    }
    Ok(mat.poly_of_finite(p).leading(mat.size() - margin))
}

/// `(1/n) |Tr P(C_{nxn}) - Tr (P(C))_{nxn}|`.
pub fn truncation_trace_gap(c: &BandedSymMatrix, p: &Polynomial, n: usize) -> Result<f64> {
    let needed = n + p.degree() * c.half_bandwidth();
    if c.size() < needed {
        return Err(Error::SizeTooSmall {
            needed,
            available: c.size(),
        });
    }
    let truncated_first = c.leading(n).poly_of_finite(p).trace();
    let exact = c.leading(needed).poly_of_finite(p).leading(n).trace();
    Ok((truncated_first - exact).abs() / n as f64)
}

/// Diagonals of `(C_{nxn})^l` and of `(C^l)_{nxn}`. They agree except in the
/// last `k (l - 1)` positions, `k` the half-bandwidth.
pub fn power_diagonals(c: &BandedSymMatrix, l: usize, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = Polynomial::x().pow(l);
    let needed = n + l * c.half_bandwidth();
    if c.size() < needed {
        return Err(Error::SizeTooSmall {
            needed,
            available: c.size(),
        });
    }
    let first = c.leading(n).poly_of_finite(&p).diagonal();
    let exact = c.leading(needed).poly_of_finite(&p).leading(n).diagonal();
    Ok((first, exact))
}

/// `M_e` of size `n`: `entry(i, i+d) = u_{i,d}`, shifted by `-U_0` in
/// `MinusU0` mode.
pub fn build_me(fam: &ExceptionalFamily, n: usize, mode: ConstantMode) -> Result<BandedSymMatrix> {
    let table = recurrence_coeffs(fam, n)?;
    Ok(me_from_table(&table, mode))
}

pub fn me_from_table(table: &RecurrenceTable, mode: ConstantMode) -> BandedSymMatrix {
    let n = table.len();
    let shift = match mode {
        ConstantMode::Zero => 0.0,
        ConstantMode::MinusU0 => table.limits[0],
    };
    let mut m = BandedSymMatrix::zeros(n, table.l);
    for i in 0..n {
        for d in 0..=table.l {
            if i + d < n {
                m.set(i, i + d, table.get(i, d as i64));
            }
        }
        m.set(i, i, table.get(i, 0) - shift);
    }
    m
}

/// Orthonormal recurrence `x q_n = a_{n+1} q_{n+1} + b_n q_n + a_n q_{n-1}`
/// of a weight; `a[n]` is `a_n` with `a[0] = 0`, `b[n]` is `b_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardRecurrence {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `∫ W`.
    pub mu0: f64,
}

impl StandardRecurrence {
    /// Number of `b_n` available.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Tridiagonal `A` of size `n <= len()`.
    pub fn jacobi_matrix(&self, n: usize) -> BandedSymMatrix {
        BandedSymMatrix::tridiagonal(&self.b[..n], &self.a[1..n])
    }

    /// `q_0(x) .. q_{len-1}(x)`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        let (mut prev, mut cur) = (0.0, 1.0 / self.mu0.sqrt());
        out.push(cur);
        for k in 0..n.saturating_sub(1) {
            let next = ((x - self.b[k]) * cur - self.a[k] * prev) / self.a[k + 1];
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }
}

/// Stieltjes procedure on a discrete measure; also returns `q_n` at the nodes.
fn stieltjes(nodes: &[f64], weights: &[f64], n: usize) -> Result<(StandardRecurrence, Vec<Vec<f64>>)> {
    let mu0: f64 = weights.iter().sum();
    let m = nodes.len();
    let mut qs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut prev = vec![0.0; m];
    let mut cur = vec![1.0 / mu0.sqrt(); m];
    let mut a = vec![0.0];
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let bk: f64 = (0..m).map(|i| weights[i] * nodes[i] * cur[i] * cur[i]).sum();
        b.push(bk);
        let r: Vec<f64> = (0..m).map(|i| (nodes[i] - bk) * cur[i] - a[k] * prev[i]).collect();
        let ak1 = (0..m).map(|i| weights[i] * r[i] * r[i]).sum::<f64>().sqrt();
        if !(ak1 > 1e-14) {
            return Err(Error::PositivityLoss { n: k + 1, value: ak1 });
        }
        a.push(ak1);
        qs.push(std::mem::replace(&mut cur, r.iter().map(|v| v / ak1).collect()));
        prev = qs[k].clone();
    }
    Ok((StandardRecurrence { a, b, mu0 }, qs))
}

/// Recurrence of `W` up to `b_{n-1}, a_n`, by the discretized Stieltjes
/// procedure on `2n + padding` Gauss nodes.
pub fn standard_recurrence(fam: &ExceptionalFamily, n: usize) -> Result<StandardRecurrence> {
    let rule = fam.weight_rule(2 * n + fam.quad_padding)?;
    Ok(stieltjes(&rule.nodes, &rule.weights, n)?.0)
}

/// Recurrence for `w^(a,b) g` with a smooth positive `g`, doubling the
/// discretization until `a_n, b_n` settle to `1e-13`.
pub fn standard_recurrence_for_weight(
    params: JacobiParams,
    g: impl Fn(f64) -> f64,
    n: usize,
) -> Result<StandardRecurrence> {
    let discretize = |m: usize| -> Result<StandardRecurrence> {
        let mut rule = crate::jacobi::gauss_jacobi_rule(m, params)?;
        for (w, &x) in rule.weights.iter_mut().zip(&rule.nodes) {
            *w *= g(x);
        }
        Ok(stieltjes(&rule.nodes, &rule.weights, n)?.0)
    };
    let mut m = n + 16;
    let mut last = discretize(m)?;
    while m < 8 * n + 4096 {
        m *= 2;
        let next = discretize(m)?;
        let diff = next
            .a
            .iter()
            .zip(&last.a)
            .chain(next.b.iter().zip(&last.b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if diff <= 1e-13 {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::QuadratureNonConvergence("Stieltjes discretization did not settle".into()))
}

/// `o_ij = <P̂_j, q_i>_W` for `i, j < n`.
pub fn basis_change(fam: &ExceptionalFamily, n: usize) -> Result<Dense> {
    require_complete(fam)?;
    let rows = n + fam.codim() + 1;
    let degree = 2 * (n + fam.b.degree() + rows);
    let rule = fam.weight_rule(degree / 2 + 1 + fam.quad_padding)?;
    let (_, qs) = stieltjes(&rule.nodes, &rule.weights, rows)?;
    let ph: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&x| fam.orthonormal_values(n, x))
        .collect::<Result<_>>()?;
    Ok(Dense::from_fn(n, n, |i, j| {
        (0..rule.len()).map(|t| rule.weights[t] * qs[i][t] * ph[t][j]).sum()
    }))
}
