//! Classical Jacobi polynomials `P_n^(a,b)`, their orthonormal versions
//! `p_n = P_n / rho_n`, the derivative identity and Gauss–Jacobi rules.
//!
//! Values always come from three-term recurrences; explicit coefficient
//! expansions are only used for low-degree seed polynomials, where the
//! parameters may leave the orthogonal regime (`a <= -1` or `b <= -1`).

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::tridiag_eigenvalues;
use crate::poly::Polynomial;

/// Jacobi parameter pair `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    /// Validated constructor: both parameters must exceed -1.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self { alpha, beta };
        if p.is_orthogonal() {
            Ok(p)
        } else {
            Err(Error::InvalidParams(format!(
                "Jacobi parameters ({alpha}, {beta}) need alpha > -1 and beta > -1"
            )))
        }
    }

    /// Any real pair; used for seed polynomials such as `P_m^(-a, b)`.
    pub fn any(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Both parameters exceed -1, so the weight has finite moments.
    pub fn is_orthogonal(&self) -> bool {
        self.alpha > -1.0 && self.beta > -1.0 && self.alpha.is_finite() && self.beta.is_finite()
    }

    pub fn shifted(&self, da: f64, db: f64) -> Self {
        Self::any(self.alpha + da, self.beta + db)
    }

    /// `w(x) = (1-x)^alpha (1+x)^beta`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }

    /// Orthonormal recurrence `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}`:
    /// the off-diagonal coefficient `a_n`, `n >= 1`.
    pub fn off_diag(&self, n: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let nf = n as f64;
        if n == 1 {
            return 2.0 / (a + b + 2.0) * ((a + 1.0) * (b + 1.0) / (a + b + 3.0)).sqrt();
        }
        let s = 2.0 * nf + a + b;
        2.0 / s * (nf * (nf + a) * (nf + b) * (nf + a + b) / ((s - 1.0) * (s + 1.0))).sqrt()
    }

    /// Diagonal coefficient `b_n`.
    pub fn diag(&self, n: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if n == 0 {
            return (b - a) / (a + b + 2.0);
        }
        let s = 2.0 * n as f64 + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }
}

/// Generalized binomial coefficient `C(r, j)` for real `r`.
fn binom(r: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (r - i as f64) / (i + 1) as f64)
}

/// Explicit monomial expansion of `P_n^(a,b)`, valid for every real pair.
pub fn jacobi_poly(n: usize, params: JacobiParams) -> Polynomial {
    let (a, b) = (params.alpha, params.beta);
    let nf = n as f64;
    let xm = Polynomial::new(vec![-0.5, 0.5]);
    let xp = Polynomial::new(vec![0.5, 0.5]);
    let mut total = Polynomial::zero();
    for k in 0..=n {
        let c = binom(nf + a, n - k) * binom(nf + b, k);
        if c == 0.0 {
            continue;
        }
        let term = &xm.pow(k) * &xp.pow(n - k);
        total = &total + &term.scale(c);
    }
    total
}

/// Leading coefficient of `P_n^(a,b)`: `C(2n+a+b, n) / 2^n`.
pub fn jacobi_leading_coeff(n: usize, params: JacobiParams) -> f64 {
    binom(2.0 * n as f64 + params.alpha + params.beta, n) / 2f64.powi(n as i32)
}

/// `P_n^(a,b)(x)` by the classical three-term recurrence.
///
/// Outside the orthogonal regime the recurrence can divide by zero, so the
/// explicit expansion is used there instead.
pub fn jacobi_eval(n: usize, params: JacobiParams, x: f64) -> f64 {
    if !params.is_orthogonal() {
        return jacobi_poly(n, params).eval(x);
    }
    let (a, b) = (params.alpha, params.beta);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * s;
        let c2 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
        let c3 = 2.0 * (kf + a) * (kf + b) * (s + 2.0);
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Value of `P_n^(a,b)(x)` with regime and degree diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValue {
    pub value: f64,
    /// False when `a <= -1` or `b <= -1`.
    pub orthogonal: bool,
    /// Actual degree; less than `n` when the leading coefficient vanishes.
    pub degree: usize,
}

pub fn jacobi_eval_checked(n: usize, params: JacobiParams, x: f64) -> JacobiValue {
    let orthogonal = params.is_orthogonal();
    let degree = if jacobi_leading_coeff(n, params) != 0.0 {
        n
    } else {
        jacobi_poly(n, params).trimmed(1e-14).degree()
    };
    JacobiValue {
        value: jacobi_eval(n, params, x),
        orthogonal,
        degree,
    }
}

/// `ln rho_k^2` for the orthogonal regime.
fn ln_norm_sq(k: usize, params: JacobiParams) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    let kf = k as f64;
    let ln2 = std::f64::consts::LN_2 * (a + b + 1.0);
    if k == 0 {
        return ln2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
    }
    ln2 + ln_gamma(kf + a + 1.0) + ln_gamma(kf + b + 1.0)
        - (2.0 * kf + a + b + 1.0).ln()
        - ln_gamma(kf + 1.0)
        - ln_gamma(kf + a + b + 1.0)
}

/// `rho_k = ||P_k^(a,b)||` in `L^2((1-x)^a (1+x)^b)`.
pub fn jacobi_norm(k: usize, params: JacobiParams) -> f64 {
    (0.5 * ln_norm_sq(k, params)).exp()
}

/// All orthonormal values `p_0(x) .. p_nmax(x)`.
pub fn orthonormal_values(nmax: usize, params: JacobiParams, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let p0 = 1.0 / jacobi_norm(0, params);
    out.push(p0);
    if nmax == 0 {
        return out;
    }
    let mut prev = 0.0;
    let mut cur = p0;
    for k in 0..nmax {
        let a_k = if k == 0 { 0.0 } else { params.off_diag(k) };
        let next = ((x - params.diag(k)) * cur - a_k * prev) / params.off_diag(k + 1);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `p_n^(a,b)(x)`, orthonormal.
pub fn jacobi_orthonormal_eval(n: usize, params: JacobiParams, x: f64) -> f64 {
    orthonormal_values(n, params, x)[n]
}

/// `(p_n(x), p_n'(x))` by the recurrence and its derivative.
pub fn orthonormal_with_derivative(n: usize, params: JacobiParams, x: f64) -> (f64, f64) {
    let p0 = 1.0 / jacobi_norm(0, params);
    let (mut prev, mut cur) = (0.0, p0);
    let (mut dprev, mut dcur) = (0.0, 0.0);
    for k in 0..n {
        let a_k = if k == 0 { 0.0 } else { params.off_diag(k) };
        let a_next = params.off_diag(k + 1);
        let shift = x - params.diag(k);
        let next = (shift * cur - a_k * prev) / a_next;
        let dnext = (shift * dcur + cur - a_k * dprev) / a_next;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
    }
    (cur, dcur)
}

/// `p_n' = factor * p_{n-1}^(a+1, b+1)`, or zero for `n = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeIdentity {
    /// `p_0` is constant.
    Zero,
    Scaled { factor: f64, params: JacobiParams },
}

/// Derivative of the orthonormal `p_n` expressed through the shifted family:
/// factor `(n+a+b+1)/2 * rho_{n-1}^(a+1,b+1) / rho_n^(a,b)`.
pub fn jacobi_derivative_as_jacobi(n: usize, params: JacobiParams) -> DerivativeIdentity {
    if n == 0 {
        return DerivativeIdentity::Zero;
    }
    let shifted = params.shifted(1.0, 1.0);
    let ratio = (0.5 * (ln_norm_sq(n - 1, shifted) - ln_norm_sq(n, params))).exp();
    DerivativeIdentity::Scaled {
        factor: (n as f64 + params.alpha + params.beta + 1.0) / 2.0 * ratio,
        params: shifted,
    }
}

/// `[p_n, p_n', ..., p_n^(order)]` at `x`, applying the derivative identity
/// repeatedly.
pub fn orthonormal_derivatives(n: usize, params: JacobiParams, x: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    out.push(jacobi_orthonormal_eval(n, params, x));
    let mut factor = 1.0;
    let mut cur = params;
    for k in 1..=order {
        if k > n {
            out.push(0.0);
            continue;
        }
        match jacobi_derivative_as_jacobi(n - k + 1, cur) {
            DerivativeIdentity::Zero => out.push(0.0),
            DerivativeIdentity::Scaled { factor: f, params: next } => {
                factor *= f;
                cur = next;
                out.push(factor * jacobi_orthonormal_eval(n - k, cur, x));
            }
        }
    }
    out
}

/// Orthonormal values and first derivatives for every degree `0..=nmax`
/// at `x`, the derivatives taken from the shifted family.
pub fn orthonormal_values_and_derivatives(
    nmax: usize,
    params: JacobiParams,
    x: f64,
) -> (Vec<f64>, Vec<f64>) {
    let values = orthonormal_values(nmax, params, x);
    let mut derivs = vec![0.0; nmax + 1];
    if nmax >= 1 {
        let shifted = params.shifted(1.0, 1.0);
        let sv = orthonormal_values(nmax - 1, shifted, x);
        for n in 1..=nmax {
            if let DerivativeIdentity::Scaled { factor, .. } = jacobi_derivative_as_jacobi(n, params) {
                derivs[n] = factor * sv[n - 1];
            }
        }
    }
    (values, derivs)
}

/// `p_{n-1}, p_n` and their derivatives at a complex point, all sharing the
/// scale factor `2^log2_scale` (the true values are the stored ones times it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPair {
    pub prev: Complex64,
    pub cur: Complex64,
    pub dprev: Complex64,
    pub dcur: Complex64,
    pub log2_scale: i64,
}

/// Complex recurrence with periodic rescaling; safe far outside `[-1, 1]`.
pub fn orthonormal_pair_complex(n: usize, params: JacobiParams, z: Complex64) -> ScaledPair {
    const BIG: f64 = 1e150;
    const SHIFT: i32 = 500;
    let zero = Complex64::new(0.0, 0.0);
    let p0 = Complex64::new(1.0 / jacobi_norm(0, params), 0.0);
    let (mut prev, mut cur, mut dprev, mut dcur) = (zero, p0, zero, zero);
    let mut log2_scale = 0i64;
    for k in 0..n {
        let a_k = if k == 0 { 0.0 } else { params.off_diag(k) };
        let a_next = params.off_diag(k + 1);
        let shift = z - params.diag(k);
        let next = (shift * cur - prev * a_k) / a_next;
        let dnext = (shift * dcur + cur - dprev * a_k) / a_next;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        if cur.norm() > BIG || dcur.norm() > BIG {
            let f = 2f64.powi(-SHIFT);
            prev *= f;
            cur *= f;
            dprev *= f;
            dcur *= f;
            log2_scale += SHIFT as i64;
        }
    }
    ScaledPair {
        prev,
        cur,
        dprev,
        dcur,
        log2_scale,
    }
}

/// Gauss rule for a Jacobi weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub params: JacobiParams,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(x_i)`, approximating `∫ f (1-x)^a (1+x)^b dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `n`-point Gauss–Jacobi rule: Golub–Welsch eigenvalues of the Jacobi
/// matrix, polished by Newton on `p_n`, with Christoffel weights
/// `1 / sum_{k<n} p_k(x_i)^2`.
pub fn gauss_jacobi_rule(n_nodes: usize, params: JacobiParams) -> Result<QuadratureRule> {
    if n_nodes == 0 {
        return Err(Error::InvalidParams("quadrature needs at least one node".into()));
    }
    if !params.is_orthogonal() {
        return Err(Error::InvalidParams(format!(
            "no Gauss rule for ({}, {})",
            params.alpha, params.beta
        )));
    }
    let diag: Vec<f64> = (0..n_nodes).map(|k| params.diag(k)).collect();
    let off: Vec<f64> = (1..n_nodes).map(|k| params.off_diag(k)).collect();
    let mut nodes = tridiag_eigenvalues(&diag, &off)?;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = orthonormal_with_derivative(n_nodes, params, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let nx = *x - step;
            if nx.is_finite() && nx > -1.0 && nx < 1.0 {
                *x = nx;
            }
            if step.abs() <= 2.0 * f64::EPSILON {
                break;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let v = orthonormal_values(n_nodes - 1, params, x);
            1.0 / v.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        params,
    })
}

/// Node-doubling integration of `∫ f (1-x)^a (1+x)^b dx` until successive
/// results agree to `1e-12` relative.
pub fn integrate_adaptive(params: JacobiParams, f: impl Fn(f64) -> f64) -> Result<f64> {
    const REL: f64 = 1e-12;
    let mut n = 16;
    let mut last = gauss_jacobi_rule(n, params)?.integrate(&f);
    while n < 4096 {
        n *= 2;
        let next = gauss_jacobi_rule(n, params)?.integrate(&f);
        if (next - last).abs() <= REL * next.abs().max(1e-300) || (next - last).abs() < 1e-300 {
            return Ok(next);
        }
        last = next;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "no {REL:e} agreement up to {n} nodes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre() -> JacobiParams {
        JacobiParams::new(0.0, 0.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = JacobiParams::new(0.7, -0.3).unwrap();
        assert_eq!(jacobi_eval(0, p, 0.42), 1.0);
        assert!((jacobi_eval(1, legendre(), 0.5) - 0.5).abs() < 1e-15);
        assert!((jacobi_eval(2, JacobiParams::new(1.0, 0.0).unwrap(), 1.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn value_at_one_is_binomial() {
        let p = JacobiParams::new(3.0, 0.5).unwrap();
        for n in 0..30 {
            let expect = binom(n as f64 + 3.0, n);
            assert!((jacobi_eval(n, p, 1.0) - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn recurrence_matches_explicit_expansion() {
        let p = JacobiParams::new(3.0, 0.0).unwrap();
        for n in 0..12 {
            let poly = jacobi_poly(n, p);
            for &x in &[-0.9, -0.2, 0.35, 0.99] {
                let a = jacobi_eval(n, p, x);
                assert!((a - poly.eval(x)).abs() < 1e-11 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert!((jacobi_norm(0, legendre()) - 2f64.sqrt()).abs() < 1e-15);
        assert!((jacobi_norm(0, JacobiParams::new(3.0, 0.0).unwrap()) - 2.0).abs() < 1e-14);
        assert!((jacobi_norm(1, legendre()) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_examples() {
        assert!((jacobi_orthonormal_eval(0, legendre(), 0.9) - 0.5f64.sqrt()).abs() < 1e-15);
        let p30 = JacobiParams::new(3.0, 0.0).unwrap();
        assert!((jacobi_orthonormal_eval(0, p30, 0.0) - 0.5).abs() < 1e-14);
        let rule = gauss_jacobi_rule(20, p30).unwrap();
        for n in 0..=10 {
            for m in 0..=10 {
                let ip = rule.integrate(|x| {
                    jacobi_orthonormal_eval(n, p30, x) * jacobi_orthonormal_eval(m, p30, x)
                });
                let delta = if n == m { 1.0 } else { 0.0 };
                assert!((ip - delta).abs() < 1e-12, "<p{n},p{m}> = {ip}");
            }
        }
    }

    #[test]
    fn orthonormal_is_normalized_classical() {
        let p = JacobiParams::new(0.5, 1.5).unwrap();
        for n in 0..25 {
            let x = 0.37;
            let a = jacobi_orthonormal_eval(n, p, x);
            let b = jacobi_eval(n, p, x) / jacobi_norm(n, p);
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn orthonormality_invariant() {
        for &(a, b) in &[(0.0, 0.0), (3.0, 0.0), (0.5, 1.5)] {
            let p = JacobiParams::new(a, b).unwrap();
            let rule = gauss_jacobi_rule(40, p).unwrap();
            let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| orthonormal_values(30, p, x)).collect();
            for i in 0..=30 {
                for j in 0..=30 {
                    let ip: f64 = vals.iter().zip(&rule.weights).map(|(v, w)| w * v[i] * v[j]).sum();
                    let delta = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - delta).abs() <= 1e-11, "({a},{b}) <{i},{j}> = {ip}");
                }
            }
        }
    }

    fn finite_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn derivative_identity_examples() {
        let leg = legendre();
        match jacobi_derivative_as_jacobi(1, leg) {
            DerivativeIdentity::Scaled { factor, params } => {
                let d = factor * jacobi_orthonormal_eval(0, params, 0.3);
                assert!((d - 1.5f64.sqrt()).abs() < 1e-14);
                let fd = finite_difference(|x| jacobi_orthonormal_eval(1, leg, x), 0.3, 1e-6);
                assert!((d - fd).abs() < 1e-6);
            }
            DerivativeIdentity::Zero => panic!("n = 1 has a derivative"),
        }
        assert_eq!(jacobi_derivative_as_jacobi(0, leg), DerivativeIdentity::Zero);
    }

    #[test]
    fn derivative_identity_pointwise() {
        use rand::{Rng, SeedableRng};
        let p = JacobiParams::new(3.0, 0.0).unwrap();
        let DerivativeIdentity::Scaled { factor, params } = jacobi_derivative_as_jacobi(5, p) else {
            panic!()
        };
        // Closed form of the factor: sqrt(n (n + a + b + 1)).
        assert!((factor - (5.0f64 * 9.0).sqrt()).abs() < 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x: f64 = rng.gen_range(-0.95..0.95);
            let d = factor * jacobi_orthonormal_eval(4, params, x);
            let h = 1e-5;
            let fd = finite_difference(|t| jacobi_orthonormal_eval(5, p, t), x, h);
            assert!((d - fd).abs() <= 1e-10 * (1.0 + d.abs()) + 5.0 * h * h * 1e3, "{d} vs {fd}");
            let (_, dr) = orthonormal_with_derivative(5, p, x);
            assert!((d - dr).abs() <= 1e-10 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn repeated_derivatives_match_recurrence() {
        let p = JacobiParams::new(0.5, 1.5).unwrap();
        let d = orthonormal_derivatives(7, p, 0.2, 3);
        let (v, dv) = orthonormal_with_derivative(7, p, 0.2);
        assert!((d[0] - v).abs() < 1e-13 && (d[1] - dv).abs() < 1e-11);
        let h = 1e-4;
        let fd2 = (orthonormal_derivatives(7, p, 0.2 + h, 1)[1] - orthonormal_derivatives(7, p, 0.2 - h, 1)[1]) / (2.0 * h);
        assert!((d[2] - fd2).abs() < 1e-5 * (1.0 + d[2].abs()));
        assert_eq!(orthonormal_derivatives(1, p, 0.2, 3)[2], 0.0);
    }

    #[test]
    fn ode_residual() {
        for &(a, b) in &[(0.0, 0.0), (3.0, 0.0), (0.5, 1.5)] {
            let p = JacobiParams::new(a, b).unwrap();
            for n in 0..=30usize {
                for i in 0..20 {
                    let x = -0.95 + 1.9 * i as f64 / 19.0;
                    let y = jacobi_orthonormal_eval(n, p, x);
                    // First and second derivatives through the identity twice.
                    let (d1, d2) = match jacobi_derivative_as_jacobi(n, p) {
                        DerivativeIdentity::Zero => (0.0, 0.0),
                        DerivativeIdentity::Scaled { factor, params } => {
                            let d1 = factor * jacobi_orthonormal_eval(n - 1, params, x);
                            let d2 = match jacobi_derivative_as_jacobi(n - 1, params) {
                                DerivativeIdentity::Zero => 0.0,
                                DerivativeIdentity::Scaled { factor: f2, params: p2 } => {
                                    factor * f2 * jacobi_orthonormal_eval(n - 2, p2, x)
                                }
                            };
                            (d1, d2)
                        }
                    };
                    let t1 = (1.0 - x * x) * d2;
                    let t2 = (b - a - (a + b + 2.0) * x) * d1;
                    let t3 = n as f64 * (n as f64 + a + b + 1.0) * y;
                    let scale = t1.abs() + t2.abs() + t3.abs() + 1.0;
                    assert!((t1 + t2 + t3).abs() <= 1e-8 * scale);
                }
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        let r = gauss_jacobi_rule(1, legendre()).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);

        let r = gauss_jacobi_rule(5, legendre()).unwrap();
        assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-14);

        // (1-x)^2 (1+x) = 1 - x - x^2 + x^3 and ∫ x^j = 2/(j+1) for even j.
        let p = JacobiParams::new(2.0, 1.0).unwrap();
        let r = gauss_jacobi_rule(20, p).unwrap();
        let mono = |j: usize| if j % 2 == 0 { 2.0 / (j as f64 + 1.0) } else { 0.0 };
        for k in 0..=39usize {
            let exact = mono(k) - mono(k + 1) - mono(k + 2) + mono(k + 3);
            let q = r.integrate(|x| x.powi(k as i32));
            assert!((q - exact).abs() <= 1e-12 * exact.abs().max(1e-3), "k={k}: {q} vs {exact}");
        }
    }

    #[test]
    fn nodes_are_zeros_of_p_n() {
        let p = JacobiParams::new(0.5, 1.5).unwrap();
        let r = gauss_jacobi_rule(30, p).unwrap();
        for &x in &r.nodes {
            assert!(x > -1.0 && x < 1.0);
            assert!(jacobi_orthonormal_eval(30, p, x).abs() < 1e-11);
        }
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn non_orthogonal_regime_is_flagged() {
        let seed = JacobiParams::any(-3.0, 0.0);
        let v = jacobi_eval_checked(1, seed, 1.0);
        assert!(!v.orthogonal);
        assert_eq!(v.degree, 1);
        // P_1^(-3,0)(x) = -(3 + x)/2
        assert!((v.value + 2.0).abs() < 1e-15);
        // P_1^(1,-3): a + b + 2 = 0 kills the linear term.
        let v = jacobi_eval_checked(1, JacobiParams::any(1.0, -3.0), 0.2);
        assert_eq!(v.degree, 0);
        assert!((v.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn complex_pair_matches_real_path() {
        let p = JacobiParams::new(3.0, 0.0).unwrap();
        let pair = orthonormal_pair_complex(40, p, Complex64::new(0.3, 0.0));
        assert_eq!(pair.log2_scale, 0);
        let (v, d) = orthonormal_with_derivative(40, p, 0.3);
        assert!((pair.cur.re - v).abs() < 1e-12 * (1.0 + v.abs()));
        assert!((pair.dcur.re - d).abs() < 1e-10 * (1.0 + d.abs()));
        // Far outside the interval the scaled values stay finite.
        let far = orthonormal_pair_complex(600, p, Complex64::new(-3.0, 0.0));
        assert!(far.log2_scale > 0 && far.cur.norm().is_finite());
    }

    #[test]
    fn adaptive_integration_of_rational_weight() {
        // ∫ (1-x)^2 (1+x) / (3+x)^2 dx on [-1, 1]
        let p = JacobiParams::new(2.0, 1.0).unwrap();
        let v = integrate_adaptive(p, |x| 1.0 / ((3.0 + x) * (3.0 + x))).unwrap();
        // Closed form: 28 - 32 ln 2 + ... evaluated with a fine composite rule as oracle.
        let m = 200_000;
        let h = 2.0 / m as f64;
        let simpson: f64 = (0..=m)
            .map(|i| {
                let x = -1.0 + i as f64 * h;
                let c = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                c * (1.0 - x).powi(2) * (1.0 + x) / (3.0 + x).powi(2)
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((v - simpson).abs() < 1e-12);
    }
}
