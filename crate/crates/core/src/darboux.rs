//! One-step Darboux transformation of the Jacobi operator.
//!
//! A quasi-rational eigenfunction `phi` of `T = p D^2 + q D` (with
//! `p = 1 - x^2`, `q = b - a - (a + b + 2) x`) gives `w = phi'/phi`, the
//! factor `A = b (D - w)` and the exceptional system `P_n^[1] = A p_n`,
//! orthogonal for `W = (1-x)^(a+e1) (1+x)^(b+e2) / bt^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::{
    gauss_jacobi_rule, integrate_adaptive, jacobi_leading_coeff, jacobi_norm, jacobi_poly,
    orthonormal_derivatives, orthonormal_values_and_derivatives, JacobiParams, QuadratureRule,
};
use crate::poly::{poly_roots, Polynomial};

/// Which endpoint factors accompany the seed polynomial in `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedType {
    /// `b0 = (1-x) P_m^(-a, b)`
    #[serde(rename = "I")]
    TypeI,
    /// `b0 = (1+x) P_m^(a, -b)`
    #[serde(rename = "II")]
    TypeII,
    /// `b0 = (1-x^2) P_m^(-a, -b)`
    #[serde(rename = "III")]
    TypeIII,
}

impl SeedType {
    /// `(e1, e2)`: an endpoint factor in `b` lowers the weight exponent there.
    pub fn eps(&self) -> (i8, i8) {
        match self {
            SeedType::TypeI => (-1, 1),
            SeedType::TypeII => (1, -1),
            SeedType::TypeIII => (-1, -1),
        }
    }

    pub fn seed_params(&self, params: JacobiParams) -> JacobiParams {
        let (a, b) = (params.alpha, params.beta);
        match self {
            SeedType::TypeI => JacobiParams::any(-a, b),
            SeedType::TypeII => JacobiParams::any(a, -b),
            SeedType::TypeIII => JacobiParams::any(-a, -b),
        }
    }

    /// Eigenvalue of the seed eigenfunction under `T`.
    pub fn lambda_closed_form(&self, params: JacobiParams, m: usize) -> f64 {
        let (a, b, m) = (params.alpha, params.beta, m as f64);
        match self {
            SeedType::TypeI => (a - m) * (m + b + 1.0),
            SeedType::TypeII => (b - m) * (m + a + 1.0),
            SeedType::TypeIII => (a + b - m) * (m + 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedChoice {
    pub kind: SeedType,
    pub m: usize,
    /// Extra factor of `b`; no real zeros near `[-1, 1]`.
    pub s: Polynomial,
}

impl SeedChoice {
    pub fn new(kind: SeedType, m: usize) -> Self {
        Self {
            kind,
            m,
            s: Polynomial::constant(1.0),
        }
    }
}

fn default_s() -> Vec<f64> {
    vec![1.0]
}

fn default_true() -> bool {
    true
}

/// JSON description of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub seed_type: SeedType,
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    #[serde(default = "default_s")]
    pub s_coeffs: Vec<f64>,
    #[serde(default = "default_true")]
    pub sign_normalize: bool,
}

impl FamilySpec {
    pub fn new(seed_type: SeedType, alpha: f64, beta: f64, m: usize) -> Self {
        Self {
            seed_type,
            alpha,
            beta,
            m,
            s_coeffs: default_s(),
            sign_normalize: true,
        }
    }

    pub fn build(&self) -> Result<ExceptionalFamily> {
        let params = JacobiParams::new(self.alpha, self.beta)?;
        let seed = SeedChoice {
            kind: self.seed_type,
            m: self.m,
            s: Polynomial::new(self.s_coeffs.clone()),
        };
        build_family_with(params, seed, self.sign_normalize)
    }
}

/// A validated one-step exceptional Jacobi family.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalFamily {
    pub params: JacobiParams,
    pub seed: SeedChoice,
    /// Seed polynomial `P_m` in its classical normalization.
    pub seed_poly: Polynomial,
    pub b: Polynomial,
    pub bw: Polynomial,
    pub b_tilde: Polynomial,
    pub eps1: i8,
    pub eps2: i8,
    /// Recovered from the Riccati identity.
    pub lambda_tilde: f64,
    pub lambda_closed_form: f64,
    /// Largest deviation of the Riccati expression from `lambda_tilde`.
    pub riccati_spread: f64,
    /// `(a + e1, b + e2)`: the Jacobi part of `W`.
    pub weight_params: JacobiParams,
    /// `∫ W` and `∫ x^2 W`.
    pub weight_moments: (f64, f64),
    /// Gauss nodes needed to integrate `1/bt^2` against the Jacobi part to `1e-14`.
    pub quad_padding: usize,
}

impl ExceptionalFamily {
    /// `L = deg(bt) + 1`.
    pub fn l(&self) -> usize {
        self.b_tilde.degree() + 1
    }

    /// Codimension `deg(bt)`.
    pub fn codim(&self) -> usize {
        self.b_tilde.degree()
    }

    pub fn p(x: f64) -> f64 {
        1.0 - x * x
    }

    pub fn q(&self, x: f64) -> f64 {
        let (a, b) = (self.params.alpha, self.params.beta);
        b - a - (a + b + 2.0) * x
    }

    pub fn q_poly(&self) -> Polynomial {
        let (a, b) = (self.params.alpha, self.params.beta);
        Polynomial::new(vec![b - a, -(a + b + 2.0)])
    }

    /// `lambda_n = -n (n + a + b + 1)`, the eigenvalue of `p_n` under `T`.
    pub fn lambda_n(&self, n: usize) -> f64 {
        let nf = n as f64;
        -nf * (nf + self.params.alpha + self.params.beta + 1.0)
    }

    pub fn w(&self, x: f64) -> f64 {
        self.bw.eval(x) / self.b.eval(x)
    }

    /// `P_0^[1] .. P_nmax^[1]` at `x`.
    pub fn exceptional_values(&self, nmax: usize, x: f64) -> Vec<f64> {
        let (p, dp) = orthonormal_values_and_derivatives(nmax, self.params, x);
        let (bx, bwx) = (self.b.eval(x), self.bw.eval(x));
        p.iter().zip(&dp).map(|(v, d)| bx * d - bwx * v).collect()
    }

    /// `P̂_0 .. P̂_nmax` at `x`.
    pub fn orthonormal_values(&self, nmax: usize, x: f64) -> Result<Vec<f64>> {
        let mut v = self.exceptional_values(nmax, x);
        for (n, val) in v.iter_mut().enumerate() {
            *val /= sigma(self, n)?;
        }
        Ok(v)
    }

    /// `[y, y', y'']` for `y = P_n^[1]`, from the derivative identity.
    pub fn exceptional_derivatives(&self, n: usize, x: f64) -> [f64; 3] {
        let d = orthonormal_derivatives(n, self.params, x, 3);
        let b = [self.b.eval(x), self.b.derivative().eval(x), self.b.derivative().derivative().eval(x)];
        let bw1 = self.bw.derivative();
        let bw = [self.bw.eval(x), bw1.eval(x), bw1.derivative().eval(x)];
        [
            b[0] * d[1] - bw[0] * d[0],
            b[1] * d[1] + b[0] * d[2] - bw[1] * d[0] - bw[0] * d[1],
            b[2] * d[1] + 2.0 * b[1] * d[2] + b[0] * d[3]
                - bw[2] * d[0]
                - 2.0 * bw[1] * d[1]
                - bw[0] * d[2],
        ]
    }

    /// `p (w' + w^2) + q w` at `x`; constant `lambda_tilde` for a valid family.
    pub fn riccati_value(&self, x: f64) -> f64 {
        let (b, bw) = (self.b.eval(x), self.bw.eval(x));
        let (db, dbw) = (self.b.derivative().eval(x), self.bw.derivative().eval(x));
        let w = bw / b;
        let dw = (dbw * b - bw * db) / (b * b);
        Self::p(x) * (dw + w * w) + self.q(x) * w
    }

    /// False when `B[1] = (p w + q - p b'/b) / b` vanishes identically: the
    /// constant is then `W`-orthogonal to every `P_n^[1]` and the system
    /// does not span the polynomials it lives in.
    pub fn is_complete(&self) -> bool {
        let db = self.b.derivative();
        chebyshev_points(7).any(|x| {
            let p = Self::p(x);
            let v = p * self.w(x) + self.q(x) - p * db.eval(x) / self.b.eval(x);
            v.abs() > 1e-10 * (1.0 + self.q(x).abs())
        })
    }

    /// Exact degree of `P_n^[1]`: `n + deg b - 1` unless the leading terms cancel.
    pub fn exceptional_degree(&self, n: usize) -> usize {
        let db = self.b.degree();
        let top = n + db - 1;
        let lead = self.b.leading() * n as f64 - self.bw.coeff(db - 1);
        let scale = self.b.leading().abs() * n as f64 + self.bw.coeff(db - 1).abs();
        if lead.abs() > 1e-12 * scale {
            return top;
        }
        self.exceptional_poly(n).trimmed(1e-10).degree()
    }

    /// Monomial expansion of `P_n^[1]` (orthonormal `p_n`); only for small `n`.
    pub fn exceptional_poly(&self, n: usize) -> Polynomial {
        let pn = jacobi_poly(n, self.params).scale(1.0 / jacobi_norm(n, self.params));
        &(&self.b * &pn.derivative()) - &(&self.bw * &pn)
    }

    /// Gauss rule for `W` with `n_nodes` nodes: the Jacobi rule for the
    /// weight parameters with `1/bt^2` folded into the weights.
    pub fn weight_rule(&self, n_nodes: usize) -> Result<QuadratureRule> {
        let mut rule = gauss_jacobi_rule(n_nodes, self.weight_params)?;
        for (w, &x) in rule.weights.iter_mut().zip(&rule.nodes) {
            let bt = self.b_tilde.eval(x);
            *w /= bt * bt;
        }
        Ok(rule)
    }

    /// Rule integrating `poly * W` accurately for polynomials up to `degree`.
    pub fn weight_quadrature(&self, degree: usize) -> Result<QuadratureRule> {
        self.weight_rule(degree / 2 + 1 + self.quad_padding)
    }
}

/// Build with the default sign normalization.
pub fn build_family(params: JacobiParams, seed: SeedChoice) -> Result<ExceptionalFamily> {
    build_family_with(params, seed, true)
}

fn chebyshev_points(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos())
}

fn real_roots_in(p: &Polynomial, lo: f64, hi: f64) -> Result<Option<f64>> {
    if p.degree() == 0 {
        return Ok(None);
    }
    let roots = poly_roots(p)?;
    Ok(roots
        .all()
        .into_iter()
        .find(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) && z.re >= lo && z.re <= hi)
        .map(|z| z.re))
}

pub fn build_family_with(
    params: JacobiParams,
    seed: SeedChoice,
    sign_normalize: bool,
) -> Result<ExceptionalFamily> {
    if !params.is_orthogonal() {
        return Err(Error::InvalidParams(format!(
            "classical parameters ({}, {}) must exceed -1",
            params.alpha, params.beta
        )));
    }
    if seed.s.is_zero() {
        return Err(Error::InvalidParams("extra factor s is the zero polynomial".into()));
    }
    if let Some(x) = real_roots_in(&seed.s, -1.001, 1.001)? {
        return Err(Error::FactorZero { x });
    }
    let (a, bpar) = (params.alpha, params.beta);
    let m = seed.m;
    let sp = seed.kind.seed_params(params);
    if jacobi_leading_coeff(m, sp) == 0.0 {
        let actual = jacobi_poly(m, sp).trimmed(1e-14).degree();
        return Err(Error::DegenerateSeed { expected: m, actual });
    }
    let seed_poly = jacobi_poly(m, sp);
    if let Some(x) = real_roots_in(&seed_poly, -1.0, 1.0)? {
        return Err(Error::SeedZero { x });
    }

    let one_minus = Polynomial::new(vec![1.0, -1.0]);
    let one_plus = Polynomial::new(vec![1.0, 1.0]);
    let dp = seed_poly.derivative();
    let (endpoint, bw0) = match seed.kind {
        SeedType::TypeI => (
            one_minus.clone(),
            &seed_poly.scale(a) + &(&one_minus * &dp),
        ),
        SeedType::TypeII => (
            one_plus.clone(),
            &seed_poly.scale(-bpar) + &(&one_plus * &dp),
        ),
        SeedType::TypeIII => {
            let p = &one_minus * &one_plus;
            let bw = &(&(&one_plus * &seed_poly).scale(a) - &(&one_minus * &seed_poly).scale(bpar))
                + &(&p * &dp);
            (p, bw)
        }
    };
    let raw_tilde = &seed.s * &seed_poly;
    let sign = if sign_normalize && raw_tilde.eval(0.0) < 0.0 { -1.0 } else { 1.0 };
    let b_tilde = raw_tilde.scale(sign);
    let b = &endpoint * &b_tilde;
    let bw = (&seed.s * &bw0).scale(sign);

    let log_derivative = |x: f64| -> f64 {
        let core = dp.eval(x) / seed_poly.eval(x);
        match seed.kind {
            SeedType::TypeI => a / (1.0 - x) + core,
            SeedType::TypeII => -bpar / (1.0 + x) + core,
            SeedType::TypeIII => a / (1.0 - x) - bpar / (1.0 + x) + core,
        }
    };
    let residual = chebyshev_points(50)
        .map(|x| {
            let lhs = b.eval(x) * log_derivative(x);
            (lhs - bw.eval(x)).abs() / (1.0 + bw.eval(x).abs())
        })
        .fold(0.0, f64::max);
    if residual > 1e-10 {
        return Err(Error::BwNotPolynomial { residual });
    }

    let (e1, e2) = seed.kind.eps();
    let weight_params = JacobiParams::any(a + e1 as f64, bpar + e2 as f64);
    let mut fam = ExceptionalFamily {
        params,
        seed,
        seed_poly,
        b,
        bw,
        b_tilde,
        eps1: e1,
        eps2: e2,
        lambda_tilde: f64::NAN,
        lambda_closed_form: f64::NAN,
        riccati_spread: f64::NAN,
        weight_params,
        weight_moments: (f64::NAN, f64::NAN),
        quad_padding: 0,
    };

    let mut values: Vec<f64> = chebyshev_points(50).map(|x| fam.riccati_value(x)).collect();
    values.sort_by(f64::total_cmp);
    let lambda = 0.5 * (values[24] + values[25]);
    let spread = values.iter().map(|v| (v - lambda).abs()).fold(0.0, f64::max);
    if !(spread <= 1e-8 * (1.0 + lambda.abs())) {
        return Err(Error::RiccatiNotConstant { spread });
    }
    let closed = fam.seed.kind.lambda_closed_form(params, m);
    if (closed - lambda).abs() > 1e-8 * (1.0 + closed.abs()) {
        return Err(Error::Inconsistent(format!(
            "Riccati constant {lambda} differs from the seed eigenvalue {closed}"
        )));
    }
    fam.lambda_tilde = lambda;
    fam.lambda_closed_form = closed;
    fam.riccati_spread = spread;

    if !weight_params.is_orthogonal() {
        return Err(Error::WeightMomentsDiverge(format!(
            "weight exponents ({}, {}) must exceed -1",
            weight_params.alpha, weight_params.beta
        )));
    }
    let bt = fam.b_tilde.clone();
    let g = |x: f64| {
        let v = bt.eval(x);
        1.0 / (v * v)
    };
    let m0 = integrate_adaptive(weight_params, g)
        .map_err(|e| Error::WeightMomentsDiverge(e.to_string()))?;
    let m2 = integrate_adaptive(weight_params, |x| x * x * g(x))
        .map_err(|e| Error::WeightMomentsDiverge(e.to_string()))?;
    if !(m0.is_finite() && m2.is_finite() && m0 > 0.0) {
        return Err(Error::WeightMomentsDiverge(format!("moments {m0}, {m2}")));
    }
    fam.weight_moments = (m0, m2);
    fam.quad_padding = padding_for(weight_params, &g)?;
    Ok(fam)
}

/// Smallest power-of-two node count `K` such that `K` and `2K` nodes agree on
/// `∫ g w` to `1e-14` relative.
fn padding_for(params: JacobiParams, g: &impl Fn(f64) -> f64) -> Result<usize> {
    let mut k = 8;
    let mut last = gauss_jacobi_rule(k, params)?.integrate(g);
    while k <= 2048 {
        let next = gauss_jacobi_rule(2 * k, params)?.integrate(g);
        if (next - last).abs() <= 1e-14 * next.abs() {
            return Ok(k);
        }
        last = next;
        k *= 2;
    }
    Err(Error::QuadratureNonConvergence(
        "1/bt^2 not resolved by 4096 nodes".into(),
    ))
}

/// `W(x) = (1-x)^(a+e1) (1+x)^(b+e2) / bt(x)^2` on the open interval.
pub fn weight_eval(fam: &ExceptionalFamily, x: f64) -> Result<f64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain { x });
    }
    let bt = fam.b_tilde.eval(x);
    Ok(fam.weight_params.weight(x) / (bt * bt))
}

/// `P_n^[1](x) = b p_n' - bw p_n` with orthonormal `p_n`.
pub fn exceptional_eval(fam: &ExceptionalFamily, n: usize, x: f64) -> f64 {
    let d = orthonormal_derivatives(n, fam.params, x, 1);
    fam.b.eval(x) * d[1] - fam.bw.eval(x) * d[0]
}

/// `sigma_k = sqrt(k (k + a + b + 1) + lambda_tilde)`, the `W`-norm of `P_k^[1]`.
pub fn sigma(fam: &ExceptionalFamily, k: usize) -> Result<f64> {
    let (a, b) = (fam.params.alpha, fam.params.beta);
    if !(a + fam.eps1 as f64 / 2.0 > -0.5) {
        return Err(Error::SigmaHypothesis(format!(
            "alpha + eps1/2 = {} is not > -1/2",
            a + fam.eps1 as f64 / 2.0
        )));
    }
    if !(b + fam.eps2 as f64 / 2.0 > -0.5) {
        return Err(Error::SigmaHypothesis(format!(
            "beta + eps2/2 = {} is not > -1/2",
            b + fam.eps2 as f64 / 2.0
        )));
    }
    let kf = k as f64;
    let s2 = kf * (kf + a + b + 1.0) + fam.lambda_tilde;
    if !(s2 > 0.0) {
        return Err(Error::SigmaHypothesis(format!("sigma_{k}^2 = {s2} is not positive")));
    }
    Ok(s2.sqrt())
}

/// `P̂_n = P_n^[1] / sigma_n`.
pub fn orthonormal_exceptional_eval(fam: &ExceptionalFamily, n: usize, x: f64) -> Result<f64> {
    Ok(exceptional_eval(fam, n, x) / sigma(fam, n)?)
}

/// `num / den` with polynomial parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Rational {
    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Cancel common factors `x - r` for the given candidate roots.
    fn cancel(mut self, roots: &[f64]) -> Self {
        for &r in roots {
            loop {
                if self.den.degree() == 0 {
                    break;
                }
                let (qd, rd) = self.den.deflate(r);
                let (qn, rn) = self.num.deflate(r);
                let dscale = self.den.max_abs_coeff();
                let nscale = self.num.max_abs_coeff();
                if rd.abs() > 1e-12 * dscale || rn.abs() > 1e-10 * nscale.max(1e-300) {
                    break;
                }
                self.den = qd;
                self.num = qn;
            }
        }
        self
    }
}

/// Coefficients of the partner operator `p D^2 + q̂ D + r̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerCoefficients {
    pub q_hat: Rational,
    pub r_hat: Rational,
}

/// `q̂ = q + p' - 2 (b'/b) p`, and with `w = bw/b`
/// `r̂ = q' + w p' - (b'/b)(q + p') + (2 (b'/b)^2 - b''/b + 2 w') p`,
/// both reduced over common endpoint factors.
pub fn partner_coefficients(fam: &ExceptionalFamily) -> PartnerCoefficients {
    let p = Polynomial::new(vec![1.0, 0.0, -1.0]);
    let dp = p.derivative();
    let q = fam.q_poly();
    let dq = q.derivative();
    let b = &fam.b;
    let db = b.derivative();
    let d2b = db.derivative();
    let bw = &fam.bw;
    let dbw = bw.derivative();
    let q_plus = &q + &dp;

    let q_num = &(b * &q_plus) - &(&db * &p).scale(2.0);
    let b2 = b * b;
    let r_num = {
        let t1 = &dq * &b2;
        let t2 = &(bw * &dp) * b;
        let t3 = &(&db * b) * &q_plus;
        let t4 = &(&(&db * &db).scale(2.0) - &(&d2b * b)) * &p;
        let t5 = &(&(&dbw * b) - &(bw * &db)).scale(2.0) * &p;
        &(&(&(&t1 + &t2) - &t3) + &t4) + &t5
    };
    let endpoints = [1.0, -1.0];
    PartnerCoefficients {
        q_hat: Rational { num: q_num, den: b.clone() }.cancel(&endpoints),
        r_hat: Rational { num: r_num, den: b2 }.cancel(&endpoints),
    }
}

/// Largest relative residual of
/// `p y' + (p w + q - p b'/b) y = (lambda_n - lambda_tilde) b p_n`, `y = P_n^[1]`,
/// over 20 interior points.
pub fn intertwining_check(fam: &ExceptionalFamily, n: usize) -> f64 {
    let db = fam.b.derivative();
    let rhs_factor = fam.lambda_n(n) - fam.lambda_tilde;
    chebyshev_points(20)
        .map(|x| {
            let d = fam.exceptional_derivatives(n, x);
            let p = ExceptionalFamily::p(x);
            let bx = fam.b.eval(x);
            let coeff = p * fam.w(x) + fam.q(x) - p * db.eval(x) / bx;
            let pn = orthonormal_derivatives(n, fam.params, x, 0)[0];
            let lhs = p * d[1] + coeff * d[0];
            let rhs = rhs_factor * bx * pn;
            let scale = (p * d[1]).abs() + (coeff * d[0]).abs() + rhs.abs() + 1.0;
            (lhs - rhs).abs() / scale
        })
        .fold(0.0, f64::max)
}
