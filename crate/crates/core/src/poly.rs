//! Dense real polynomials in the monomial basis, complex root finding and the
//! normalized Bessel function `j_a(z) = Γ(a+1) (2/z)^a J_a(z)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, Dense};

/// Real polynomial; `coeffs[k]` multiplies `x^k`. Exact trailing zeros are
/// trimmed so a nonzero polynomial always has a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `prod (x - r)` over the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(1.0), |acc, &r| &acc * &Self::new(vec![-r, 1.0]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Drop leading coefficients with `|c| <= tol * max|c|`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|v| v.abs() <= tol * scale) {
            c.pop();
        }
        Self::new(c)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Primitive with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend(self.coeffs.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
        Self::new(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Synthetic division by `x - r`: returns the quotient and the remainder `p(r)`.
    pub fn deflate(&self, r: f64) -> (Self, f64) {
        let n = self.coeffs.len();
        if n <= 1 {
            return (Self::zero(), self.coeff(0));
        }
        let mut q = vec![0.0; n - 1];
        let mut acc = 0.0;
        for k in (1..n).rev() {
            acc = acc * r + self.coeffs[k];
            q[k - 1] = acc;
        }
        (Self::new(q), acc * r + self.coeffs[0])
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

/// Roots of a polynomial grouped into clusters with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRootSet {
    /// Cluster representative and multiplicity.
    pub roots: Vec<(Complex64, usize)>,
}

impl ComplexRootSet {
    /// Number of roots counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.1).sum()
    }

    /// Every root repeated by multiplicity.
    pub fn all(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect()
    }
}

/// Clustering radius used for multiplicity reporting.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;
const NEWTON_STEPS: usize = 50;

/// All complex roots: balanced companion-matrix eigenvalues, each polished by
/// at most 50 Newton steps (the raw eigenvalue is kept if Newton does worse).
pub fn poly_roots(p: &Polynomial) -> Result<ComplexRootSet> {
    let raw = raw_roots(p)?;
    Ok(cluster(&raw, ROOT_CLUSTER_TOL))
}

/// Unclustered roots after Newton polishing.
pub fn raw_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if p.is_zero() || n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let lead = p.leading();
    let mut companion = Dense::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -p.coeff(n - 1 - j) / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    let eig = hessenberg_eigenvalues(&companion)?;
    let dp = p.derivative();
    Ok(eig
        .into_iter()
        .map(|(re, im)| newton_polish(p, &dp, Complex64::new(re, im)))
        .collect())
}

fn newton_polish(p: &Polynomial, dp: &Polynomial, z0: Complex64) -> Complex64 {
    let r0 = p.eval_complex(z0).norm();
    let mut z = z0;
    for _ in 0..NEWTON_STEPS {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval_complex(z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            return z0;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1e-300) {
            break;
        }
    }
    let r = p.eval_complex(z).norm();
    if r.is_finite() && r <= r0 && (z - z0).norm() <= 1e-3 * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

fn cluster(raw: &[Complex64], tol: f64) -> ComplexRootSet {
    let mut used = vec![false; raw.len()];
    let mut roots = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![raw[i]];
        for j in i + 1..raw.len() {
            if !used[j] && (raw[j] - raw[i]).norm() <= tol {
                used[j] = true;
                members.push(raw[j]);
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        roots.push((mean, members.len()));
    }
    roots.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    ComplexRootSet { roots }
}

/// Residual bound `|p(r)| <= 1e-10 * max|c| * max(1,|r|)^deg` for a root.
pub fn root_residual_ok(p: &Polynomial, r: Complex64) -> bool {
    let bound = 1e-10 * p.max_abs_coeff() * r.norm().max(1.0).powi(p.degree() as i32);
    p.eval_complex(r).norm() <= bound
}

/// `j_a(z) = sum_k (-1)^k Γ(a+1) / (k! Γ(k+a+1)) (z/2)^(2k)`, `a > -1`.
///
/// The alternating series loses roughly `|z|/2.3` digits to cancellation, so
/// results beyond `|z| ≈ 20` should not be trusted.
pub fn bessel_j_small(alpha: f64, z: Complex64) -> Complex64 {
    let q = -(z * z) / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term = term * q / (k as f64 * (k as f64 + alpha));
        sum += term;
        let past_peak = (k as f64) * (k as f64 + alpha) > q.norm();
        if past_peak && term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

/// Classical Bessel function of the first kind, `J_a(x)` for real `x > 0`.
pub fn bessel_j(alpha: f64, x: f64) -> f64 {
    bessel_j_small(alpha, Complex64::new(x, 0.0)).re * (x / 2.0).powf(alpha) / gamma(alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::x().eval(0.3), 0.3);
        // b-tilde of the reference family, (3 + x)/2.
        assert_eq!(Polynomial::new(vec![1.5, 0.5]).eval(1.0), 2.0);
        assert_eq!(Polynomial::new(vec![0.0, 1.5, 0.25]).eval(-1.0), -1.25);
    }

    #[test]
    fn roots_examples() {
        let r = poly_roots(&Polynomial::new(vec![-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.count(), 2);
        assert!((r.roots[0].0 - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((r.roots[1].0 - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        let r = poly_roots(&Polynomial::new(vec![1.5, 0.5])).unwrap();
        assert!((r.roots[0].0 - Complex64::new(-3.0, 0.0)).norm() < 1e-14);

        let r = poly_roots(&Polynomial::new(vec![1.0, 0.0, 1.0])).unwrap().all();
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, 1.0)).norm() < 1e-14));
        assert!(r.iter().any(|z| (z - Complex64::new(0.0, -1.0)).norm() < 1e-14));
    }

    #[test]
    fn constant_rejected() {
        assert_eq!(poly_roots(&Polynomial::constant(2.0)), Err(Error::ConstantPolynomial));
        assert_eq!(poly_roots(&Polynomial::zero()), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn multiplicity_reported() {
        let p = Polynomial::from_roots(&[0.5, 0.5, -0.25]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.count(), 3);
        assert!(r.roots.iter().any(|&(z, m)| m == 2 && (z.re - 0.5).abs() < 1e-7));
    }

    #[test]
    fn deflate_by_linear_factor() {
        let p = Polynomial::from_roots(&[1.0, -2.0, 0.5]);
        let (q, rem) = p.deflate(1.0);
        assert!(rem.abs() < 1e-15);
        assert_eq!(q.degree(), 2);
        for &x in &[0.3, -1.7, 4.0] {
            assert!((q.eval(x) * (x - 1.0) - p.eval(x)).abs() < 1e-13);
        }
        let (_, rem) = p.deflate(3.0);
        assert!((rem - p.eval(3.0)).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_and_derivative() {
        let p = Polynomial::new(vec![1.5, 0.5]);
        let q = p.antiderivative();
        assert_eq!(q.coeffs(), &[0.0, 1.5, 0.25]);
        assert_eq!(q.derivative(), p);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_j_small(0.5, Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(bessel_j_small(0.5, Complex64::new(PI, 0.0)).norm() < 1e-12);
        // j_{1/2}(z) = sin z / z.
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let v = bessel_j_small(0.5, Complex64::new(x, 0.0)).re;
            assert!((v - x.sin() / x).abs() < 1e-13);
        }
        assert!(bessel_j_small(0.0, Complex64::new(2.404825557695773, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn bessel_bounded_by_one_on_real_axis() {
        for &a in &[0.0, 0.5, 2.0, 4.0] {
            for i in 0..100 {
                let x = 20.0 * i as f64 / 99.0;
                let v = bessel_j_small(a, Complex64::new(x, 0.0)).norm();
                assert!(v <= 1.0 + 1e-12, "a={a} x={x} v={v}");
            }
        }
    }

    #[test]
    fn bessel_j_classical_value() {
        // J_1(1) = 0.44005058574493355
        assert!((bessel_j(1.0, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    fn planted() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.05f64..0.95, 0.0f64..(2.0 * PI)), 1..=6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recovers_planted_roots(roots in planted()) {
            // Conjugate pairs keep coefficients real: degree <= 12.
            let zs: Vec<Complex64> = roots
                .iter()
                .flat_map(|&(r, t)| [Complex64::from_polar(r, t), Complex64::from_polar(r, -t)])
                .collect();
            let mut p = Polynomial::constant(1.0);
            for &(r, t) in &roots {
                let z = Complex64::from_polar(r, t);
                p = &p * &Polynomial::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]);
            }
            let min_sep = zs
                .iter()
                .enumerate()
                .flat_map(|(i, a)| zs[i + 1..].iter().map(move |b| (a - b).norm()))
                .fold(f64::INFINITY, f64::min);
            // Clustered roots are ill-conditioned by nature; only well-separated sets.
            prop_assume!(min_sep > 0.05);
            let found = raw_roots(&p).unwrap();
            prop_assert_eq!(found.len(), zs.len());
            for z in &zs {
                let d = found.iter().map(|f| (f - z).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(d < 1e-8, "root {} off by {}", z, d);
            }
        }

        #[test]
        fn product_evaluates_multiplicatively(
            a in prop::collection::vec(-2.0f64..2.0, 1..8),
            b in prop::collection::vec(-2.0f64..2.0, 1..8),
            x in -1.5f64..1.5,
        ) {
            let pa = Polynomial::new(a);
            let pb = Polynomial::new(b);
            let lhs = (&pa * &pb).eval(x);
            let rhs = pa.eval(x) * pb.eval(x);
            let scale = pa.coeffs().iter().map(|c| c.abs()).sum::<f64>().max(1e-300)
                * pb.coeffs().iter().map(|c| c.abs()).sum::<f64>().max(1e-300)
                * 1.5f64.powi(16);
            prop_assert!((lhs - rhs).abs() <= 1e-11 * scale.max(rhs.abs()));
        }

        #[test]
        fn product_degree_is_sum(
            a in prop::collection::vec(0.5f64..2.0, 1..8),
            b in prop::collection::vec(0.5f64..2.0, 1..8),
        ) {
            let pa = Polynomial::new(a);
            let pb = Polynomial::new(b);
            let prod = &pa * &pb;
            prop_assert_eq!(prod.degree(), pa.degree() + pb.degree());
            let lead = pa.leading() * pb.leading();
            prop_assert!((prod.leading() - lead).abs() <= 1e-12 * lead.abs());
        }
    }
}
