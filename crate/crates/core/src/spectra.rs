//! Eigenvalues of finite sections, the modified average characteristic
//! polynomial and the measures compared against the arcsine law.

use num_complex::Complex64;

use crate::darboux::ExceptionalFamily;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigenvalues_dense, tridiag_eigenvalues, Dense};
use crate::opmatrix::{
    apply_poly_to_banded, build_me, me_from_table, q_primitive, recurrence_coeffs,
    standard_recurrence, BandedSymMatrix, ConstantMode,
};
use crate::output::Table;
use crate::poly::Polynomial;

/// Equal-weight point measure on sorted points.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        Self { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(1/n) sum f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().map(|&x| f(x)).sum::<f64>() / self.len() as f64
    }
}

/// All `n` eigenvalues of the leading `n x n` section, ascending.
pub fn sym_eigenvalues(mat: &BandedSymMatrix, n: usize) -> Result<Vec<f64>> {
    if n > mat.size() {
        return Err(Error::SizeTooSmall {
            needed: n,
            available: mat.size(),
        });
    }
    let m = mat.leading(n);
    if mat.half_bandwidth() <= 1 {
        let diag = m.diagonal();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m.get(i, i + 1)).collect();
        tridiag_eigenvalues(&diag, &off)
    } else {
        sym_eigenvalues_dense(&m.to_dense())
    }
}

/// Unique `y` in `[-1, 1]` with `Q(y) = z` for increasing `Q`, or `None` when
/// `z` lies outside `Q([-1, 1])`.
pub fn q_inverse(q: &Polynomial, z: f64) -> Option<f64> {
    let (lo_v, hi_v) = (q.eval(-1.0), q.eval(1.0));
    if z < lo_v || z > hi_v {
        return None;
    }
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if q.eval(mid) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dq = q.derivative();
    let mut y = 0.5 * (lo + hi);
    for _ in 0..5 {
        let d = dq.eval(y);
        if d == 0.0 {
            break;
        }
        let next = y - (q.eval(y) - z) / d;
        if next.is_finite() && (-1.0..=1.0).contains(&next) {
            y = next;
        }
    }
    Some(y)
}

/// Zeros `z_i` of `det(zI - M_e)` and their preimages under `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgCharZeros {
    pub z: Vec<f64>,
    /// `Q^{-1}(z_i)` in `[-1, 1]`, or `None` outside `Q([-1, 1])`.
    pub y: Vec<Option<f64>>,
    pub q: Polynomial,
}

impl AvgCharZeros {
    /// Zero-counting measure of the `z_i`.
    pub fn nu(&self) -> EmpiricalMeasure {
        EmpiricalMeasure::new(self.z.clone())
    }

    /// Counting measure of the in-range preimages, still normalized by `n`
    /// through the out-of-range count being reported separately.
    pub fn nu_tilde(&self) -> EmpiricalMeasure {
        EmpiricalMeasure::new(self.y.iter().flatten().copied().collect())
    }

    pub fn out_of_range(&self) -> usize {
        self.y.iter().filter(|y| y.is_none()).count()
    }
}

/// Zeros of the modified average characteristic polynomial, which are the
/// eigenvalues of `M_e` truncated to `n x n`.
pub fn avg_char_poly_zeros(fam: &ExceptionalFamily, n: usize, mode: ConstantMode) -> Result<AvgCharZeros> {
    let me = build_me(fam, n, mode)?;
    zeros_from_me(fam, &me, mode)
}

pub fn zeros_from_me(fam: &ExceptionalFamily, me: &BandedSymMatrix, mode: ConstantMode) -> Result<AvgCharZeros> {
    let z = sym_eigenvalues(me, me.size())?;
    let q = q_primitive(fam, mode);
    let y = z.iter().map(|&v| q_inverse(&q, v)).collect();
    Ok(AvgCharZeros { z, y, q })
}

/// Determinantal expectation `E prod (z - Q(x_i))` by tensor quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// `∫ det K_N prod W`, which equals `N!` for an orthonormal kernel.
    pub normalization: f64,
}

impl OracleValue {
    /// `c(N) N!` with `c(N)` fixed by unit total mass.
    pub fn c_times_factorial(&self, n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product::<f64>() / self.normalization
    }
}

/// Expectation of `prod (z - Q(x_i))` under `c(N) det K_N(x_i, x_j) prod W(x_i)`,
/// with `c(N)` fixed numerically; 64 nodes per axis, `N <= 3`.
pub fn determinantal_oracle(
    fam: &ExceptionalFamily,
    n: usize,
    z: Complex64,
    mode: ConstantMode,
) -> Result<OracleValue> {
    if n == 0 || n > 3 {
        return Err(Error::InvalidParams(format!("oracle supports 1 <= N <= 3, got {n}")));
    }
    let rule = fam.weight_rule(64)?;
    let m = rule.len();
    let q = q_primitive(fam, mode);
    let ph: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&x| fam.orthonormal_values(n - 1, x))
        .collect::<Result<_>>()?;
    let kernel = |i: usize, j: usize| -> f64 { (0..n).map(|k| ph[i][k] * ph[j][k]).sum() };
    let kmat: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| kernel(i, j)).collect()).collect();
    let factor: Vec<Complex64> = rule.nodes.iter().map(|&x| z - q.eval(x)).collect();

    let mut total = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut idx = vec![0usize; n];
    loop {
        let det = match n {
            1 => kmat[idx[0]][idx[0]],
            _ => {
                let d = Dense::from_fn(n, n, |a, b| kmat[idx[a]][idx[b]]);
                d.det()
            }
        };
        let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
        let prod: Complex64 = idx.iter().map(|&i| factor[i]).product();
        total += prod * (det * w);
        mass += det * w;
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
            if pos == n {
                return Ok(OracleValue {
                    value: total / mass,
                    normalization: mass,
                });
            }
        }
    }
}

/// `det(zI - T)` for a small real matrix, by complex Gaussian elimination.
pub fn char_poly_value(t: &Dense, z: Complex64) -> Complex64 {
    let n = t.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = Complex64::new(-t[(i, j)], 0.0);
                    if i == j {
                        v + z
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].norm().total_cmp(&a[y][c].norm()))
            .unwrap_or(c);
        if a[p][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

/// True when both weight exponents are at least `-1/2`.
pub fn christoffel_hypothesis(fam: &ExceptionalFamily) -> bool {
    fam.weight_params.alpha >= -0.5 && fam.weight_params.beta >= -0.5
}

/// `dmu_n = (1/n) K_n(x, x) W(x) dx`.
#[derive(Debug, Clone)]
pub struct ChristoffelMeasure<'a> {
    pub fam: &'a ExceptionalFamily,
    pub n: usize,
}

impl<'a> ChristoffelMeasure<'a> {
    pub fn new(fam: &'a ExceptionalFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("Christoffel measure needs n >= 1".into()));
        }
        Ok(Self { fam, n })
    }

    /// Density against `dx`.
    pub fn density(&self, x: f64) -> Result<f64> {
        let v = self.fam.orthonormal_values(self.n - 1, x)?;
        let w = crate::darboux::weight_eval(self.fam, x)?;
        Ok(v.iter().map(|p| p * p).sum::<f64>() * w / self.n as f64)
    }

    /// `∫ P^l dmu_n` for `l = 0 ..= l_max`; entry 0 is the total mass.
    pub fn moments(&self, p: &Polynomial, l_max: usize) -> Result<Vec<f64>> {
        let degree = 2 * (self.n + self.fam.b.degree()) + p.degree() * l_max;
        let rule = self.fam.weight_quadrature(degree)?;
        let mut out = vec![0.0; l_max + 1];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = self.fam.orthonormal_values(self.n - 1, x)?;
            let k: f64 = v.iter().map(|t| t * t).sum::<f64>() / self.n as f64;
            let px = p.eval(x);
            let mut pl = 1.0;
            for o in out.iter_mut() {
                *o += w * k * pl;
                pl *= px;
            }
        }
        Ok(out)
    }
}

/// `∫ Q^l dmu_n`, `l = 0 ..= l_max`, with `Q` in the given mode.
pub fn christoffel_moments(
    fam: &ExceptionalFamily,
    n: usize,
    l_max: usize,
    mode: ConstantMode,
) -> Result<Vec<f64>> {
    ChristoffelMeasure::new(fam, n)?.moments(&q_primitive(fam, mode), l_max)
}

/// `∫ P^l dmu_e` for the arcsine law on `[-1, 1]`, `l = 0 ..= l_max`, by
/// Chebyshev–Gauss quadrature exact for the degrees involved.
pub fn equilibrium_moments(p: &Polynomial, l_max: usize) -> Vec<f64> {
    let k = p.degree() * l_max / 2 + 2;
    let nodes: Vec<f64> = (1..=k)
        .map(|i| (std::f64::consts::PI * (2 * i - 1) as f64 / (2 * k) as f64).cos())
        .collect();
    (0..=l_max)
        .map(|l| nodes.iter().map(|&x| p.eval(x).powi(l as i32)).sum::<f64>() / k as f64)
        .collect()
}

/// `(1/n) |Tr (Q(A_{nxn}))^l - Tr (M_{e,nxn})^l|`.
pub fn trace_gap_experiment(fam: &ExceptionalFamily, l: usize, n: usize, mode: ConstantMode) -> Result<f64> {
    let sr = standard_recurrence(fam, n)?;
    let q = q_primitive(fam, mode);
    let me = me_from_table(&recurrence_coeffs(fam, n)?, mode);
    trace_gap_from(&sr.jacobi_matrix(n), &me, &q, l)
}

/// Same gap from prebuilt `A_{nxn}` and `M_{e,nxn}`.
pub fn trace_gap_from(a: &BandedSymMatrix, me: &BandedSymMatrix, q: &Polynomial, l: usize) -> Result<f64> {
    let n = a.size();
    if me.size() != n {
        return Err(Error::Inconsistent(format!(
            "sections differ in size: {} vs {}",
            n,
            me.size()
        )));
    }
    let qa = a.poly_of_finite(q);
    let xl = Polynomial::x().pow(l);
    let lhs = qa.poly_of_finite(&xl).trace();
    let rhs = me.poly_of_finite(&xl).trace();
    Ok((lhs - rhs).abs() / n as f64)
}

/// `Q(A)` for the infinite matrix, exact on the returned section.
pub fn q_of_a(fam: &ExceptionalFamily, n: usize, mode: ConstantMode) -> Result<BandedSymMatrix> {
    let q = q_primitive(fam, mode);
    let realized = n + q.degree() + 5;
    let sr = standard_recurrence(fam, realized)?;
    Ok(apply_poly_to_banded(&sr.jacobi_matrix(realized), &q)?.leading(n))
}

/// Angles `eta_i / pi` in `[0, 1]` of points `x_i = cos eta_i`, ascending.
fn unit_angles(points: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = points.iter().map(|&x| x.clamp(-1.0, 1.0).acos() / std::f64::consts::PI).collect();
    u.sort_by(f64::total_cmp);
    u
}

/// `|#{gamma <= eta_i <= delta} - (delta - gamma) n / pi| / n`.
pub fn interval_discrepancy(points: &[f64], gamma: f64, delta: f64) -> f64 {
    let n = points.len() as f64;
    let count = points
        .iter()
        .map(|&x| x.clamp(-1.0, 1.0).acos())
        .filter(|&e| e >= gamma && e <= delta)
        .count() as f64;
    (count - (delta - gamma) / std::f64::consts::PI * n).abs() / n
}

/// Supremum of `interval_discrepancy` over all `[gamma, delta] ⊂ [0, pi]`.
///
/// A closed interval through points `i..=j` overshoots by
/// `(j-i+1)/n - (u_j - u_i)`; an interval strictly between points `i < j`
/// (with `u_0 = 0`, `u_{n+1} = 1`) undershoots by `(u_j - u_i) - (j-i-1)/n`.
pub fn sup_discrepancy(points: &[f64]) -> f64 {
    let u = unit_angles(points);
    let n = u.len();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let mut over = f64::NEG_INFINITY;
    let mut best_left = f64::NEG_INFINITY;
    for (j, &uj) in u.iter().enumerate() {
        best_left = best_left.max(uj - j as f64 / nf);
        over = over.max((j + 1) as f64 / nf - uj + best_left);
    }
    let mut ext = Vec::with_capacity(n + 2);
    ext.push(0.0);
    ext.extend_from_slice(&u);
    ext.push(1.0);
    let mut under = f64::NEG_INFINITY;
    let mut best = f64::NEG_INFINITY;
    for (j, &uj) in ext.iter().enumerate() {
        if j > 0 {
            under = under.max(uj - (j as f64 - 1.0) / nf + best);
        }
        best = best.max(-ext[j] + j as f64 / nf);
    }
    over.max(under).max(0.0)
}

/// Rows `(n, l, moment_mu_n, moment_equilibrium, gap)` for `∫ Q^l`.
pub fn moments_table(fam: &ExceptionalFamily, n_list: &[usize], l_max: usize, mode: ConstantMode) -> Result<Table> {
    let q = q_primitive(fam, mode);
    let eq = equilibrium_moments(&q, l_max);
    let mut t = Table::new(&["n", "l", "mu_n_moment", "equilibrium_moment", "gap"]);
    for &n in n_list {
        let mu = christoffel_moments(fam, n, l_max, mode)?;
        for l in 0..=l_max {
            t.push(vec![n.into(), l.into(), mu[l].into(), eq[l].into(), (mu[l] - eq[l]).abs().into()]);
        }
    }
    Ok(t)
}

/// Rows `(n, l, trace_gap)`.
pub fn trace_gap_table(fam: &ExceptionalFamily, n_list: &[usize], l_max: usize, mode: ConstantMode) -> Result<Table> {
    let q = q_primitive(fam, mode);
    let mut t = Table::new(&["n", "l", "trace_gap"]);
    for &n in n_list {
        let a = standard_recurrence(fam, n)?.jacobi_matrix(n);
        let me = me_from_table(&recurrence_coeffs(fam, n)?, mode);
        for l in 1..=l_max {
            t.push(vec![n.into(), l.into(), trace_gap_from(&a, &me, &q, l)?.into()]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::{FamilySpec, SeedType};
    use crate::jacobi::{jacobi_poly, JacobiParams};
    use crate::opmatrix::standard_recurrence_for_weight;
    use crate::poly::poly_roots;

    fn f1() -> ExceptionalFamily {
        FamilySpec::new(SeedType::TypeI, 3.0, 0.0, 1).build().unwrap()
    }

    #[test]
    fn eigen_examples() {
        let d = BandedSymMatrix::tridiagonal(&[3.0, -1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(sym_eigenvalues(&d, 3).unwrap(), vec![-1.0, 2.0, 3.0]);
        let s = BandedSymMatrix::tridiagonal(&[0.0, 0.0], &[1.0]);
        let e = sym_eigenvalues(&s, 2).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);

        let sr = standard_recurrence_for_weight(JacobiParams::new(0.0, 0.0).unwrap(), |_| 1.0, 8).unwrap();
        let e = sym_eigenvalues(&sr.jacobi_matrix(8), 8).unwrap();
        let mut roots: Vec<f64> = poly_roots(&jacobi_poly(8, JacobiParams::new(0.0, 0.0).unwrap()))
            .unwrap()
            .all()
            .iter()
            .map(|z| z.re)
            .collect();
        roots.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn banded_eigen_residuals() {
        let f = f1();
        let me = build_me(&f, 40, ConstantMode::Zero).unwrap();
        let dense = me.to_dense();
        let (vals, vecs) = crate::linalg::sym_eigen_dense(&dense).unwrap();
        let fast = sym_eigenvalues(&me, 40).unwrap();
        let norm = dense.max_abs() * 40.0;
        for k in [0, 7, 19, 30, 39] {
            assert!((vals[k] - fast[k]).abs() < 1e-12);
            let v: Vec<f64> = (0..40).map(|i| vecs[(i, k)]).collect();
            let mv = dense.matvec(&v);
            let r = mv.iter().zip(&v).map(|(a, b)| (a - vals[k] * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-8 * norm);
        }
    }

    #[test]
    fn char_poly_zeros_small() {
        let f = f1();
        let me = build_me(&f, 3, ConstantMode::Zero).unwrap();
        let zeros = zeros_from_me(&f, &me, ConstantMode::Zero).unwrap();
        // Expand det(zI - M) = z^3 - tr z^2 + c1 z - det by hand.
        let m = me.to_dense();
        let tr = m.trace();
        let c1 = m[(0, 0)] * m[(1, 1)] + m[(0, 0)] * m[(2, 2)] + m[(1, 1)] * m[(2, 2)]
            - m[(0, 1)].powi(2)
            - m[(0, 2)].powi(2)
            - m[(1, 2)].powi(2);
        let cp = Polynomial::new(vec![-m.det(), c1, -tr, 1.0]);
        let mut roots: Vec<f64> = poly_roots(&cp).unwrap().all().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        for (a, b) in zeros.z.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_q_preimages() {
        let q = Polynomial::x();
        for &z in &[-0.9, 0.0, 0.3] {
            assert!((q_inverse(&q, z).unwrap() - z).abs() < 1e-15);
        }
        assert_eq!(q_inverse(&q, 1.5), None);
        let q = q_primitive(&f1(), ConstantMode::Zero);
        let y = q_inverse(&q, 0.4).unwrap();
        assert!((q.eval(y) - 0.4).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_fraction() {
        let z = avg_char_poly_zeros(&f1(), 100, ConstantMode::Zero).unwrap();
        assert!(z.out_of_range() <= 2, "{}", z.out_of_range());
    }

    #[test]
    fn oracle_matches_determinant() {
        let f = f1();
        for mode in [ConstantMode::Zero, ConstantMode::MinusU0] {
            let me = build_me(&f, 2, mode).unwrap();
            for n in 1..=2 {
                let t = me.leading(n).to_dense();
                for z in [
                    Complex64::new(2.0, 0.0),
                    Complex64::new(-0.5, 0.3),
                    Complex64::new(0.1, -1.0),
                    Complex64::new(3.0, 2.0),
                    Complex64::new(0.0, 0.0),
                ] {
                    let o = determinantal_oracle(&f, n, z, mode).unwrap();
                    let d = char_poly_value(&t, z);
                    assert!((o.value - d).norm() <= 1e-4 * d.norm().max(1e-3), "n={n} z={z}");
                    assert!((o.c_times_factorial(n) - 1.0).abs() < 1e-6);
                }
            }
        }
        let o = determinantal_oracle(&f, 1, Complex64::new(0.7, 0.0), ConstantMode::Zero).unwrap();
        let u00 = recurrence_coeffs(&f, 1).unwrap().get(0, 0);
        assert!((o.value.re - (0.7 - u00)).abs() < 1e-10);
    }

    #[test]
    fn christoffel_examples() {
        let f = f1();
        let m1 = christoffel_moments(&f, 1, 1, ConstantMode::Zero).unwrap();
        let u00 = recurrence_coeffs(&f, 1).unwrap().get(0, 0);
        assert!((m1[0] - 1.0).abs() < 1e-8);
        assert!((m1[1] - u00).abs() < 1e-10);
        for n in [5, 37] {
            assert!((christoffel_moments(&f, n, 0, ConstantMode::Zero).unwrap()[0] - 1.0).abs() < 1e-8);
        }
        assert!(christoffel_hypothesis(&f));
    }

    #[test]
    fn equilibrium_examples() {
        let e = equilibrium_moments(&Polynomial::x(), 6);
        assert!(e[1].abs() < 1e-15);
        assert!((e[2] - 0.5).abs() < 1e-15);
        assert!((e[4] - 0.375).abs() < 1e-15);
        let q0 = q_primitive(&f1(), ConstantMode::Zero);
        assert!((equilibrium_moments(&q0, 1)[1] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn trace_gap_examples() {
        let c = FamilySpec::new(SeedType::TypeI, 1.0, 0.0, 0).build().unwrap();
        for l in 1..=3 {
            assert!(trace_gap_experiment(&c, l, 30, ConstantMode::Zero).unwrap() < 1e-9);
        }
    }

    #[test]
    fn discrepancy_examples() {
        let n = 37;
        let pts: Vec<f64> = (1..=n)
            .map(|i| ((i as f64 - 0.5) * std::f64::consts::PI / n as f64).cos())
            .collect();
        assert!(sup_discrepancy(&pts) <= 1.0 / n as f64 + 1e-12);
        assert!((sup_discrepancy(&[1.0; 10]) - 1.0).abs() < 1e-15);
        assert!((interval_discrepancy(&[1.0, 1.0], 0.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sup_discrepancy_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..25);
            let pts: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut cuts: Vec<f64> = pts.iter().map(|x: &f64| x.acos()).collect();
            cuts.push(0.0);
            cuts.push(std::f64::consts::PI);
            let mut brute = 0.0f64;
            let eps = 1e-12;
            for &g in &cuts {
                for &d in &cuts {
                    if g > d {
                        continue;
                    }
                    brute = brute.max(interval_discrepancy(&pts, g, d));
                    // Open-interval limits, approached from inside.
                    if d - g > 2.0 * eps {
                        brute = brute.max(interval_discrepancy(&pts, g + eps, d - eps));
                    }
                }
            }
            let fast = sup_discrepancy(&pts);
            assert!((fast - brute).abs() < 1e-9, "{fast} vs {brute}");
        }
    }

    #[test]
    fn legendre_zero_discrepancy() {
        let n = 50;
        let leg = JacobiParams::new(0.0, 0.0).unwrap();
        let rule = crate::jacobi::gauss_jacobi_rule(n, leg).unwrap();
        // Monic omega_n = P_n / lead; |P_n| <= 1 on [-1, 1], so A(n) = 2^n / lead.
        let lead = crate::jacobi::jacobi_leading_coeff(n, leg);
        let ln_a = n as f64 * 2f64.ln() - lead.ln();
        let bound = 8.0 / 3f64.ln() * (ln_a / n as f64).sqrt();
        assert!(sup_discrepancy(&rule.nodes) < bound);
    }
}
