//! Large-`n` behaviour of `P_n^[1]`: zero location, outer ratio asymptotics,
//! Mehler–Heine scaling at `x = 1` and the angular distribution of the
//! regular zeros.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::darboux::ExceptionalFamily;
use crate::error::{Error, Result};
use crate::jacobi::{jacobi_norm, orthonormal_pair_complex, orthonormal_with_derivative};
use crate::output::Table;
use crate::poly::{bessel_j_small, poly_roots};
use crate::spectra::sup_discrepancy;

/// `P_n^[1](x)` on the real line, one recurrence pass.
pub fn exceptional_real(fam: &ExceptionalFamily, n: usize, x: f64) -> f64 {
    let (p, dp) = orthonormal_with_derivative(n, fam.params, x);
    fam.b.eval(x) * dp - fam.bw.eval(x) * p
}

/// `P_{n-1}^[1](z)`, `P_n^[1](z)` and `d/dz P_n^[1](z)`, all divided by
/// `2^log2_scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexExceptional {
    pub prev: Complex64,
    pub cur: Complex64,
    pub dcur: Complex64,
    pub log2_scale: i64,
}

pub fn exceptional_complex(fam: &ExceptionalFamily, n: usize, z: Complex64) -> ComplexExceptional {
    let s = orthonormal_pair_complex(n, fam.params, z);
    let b = fam.b.eval_complex(z);
    let db = fam.b.derivative().eval_complex(z);
    let bw = fam.bw.eval_complex(z);
    let dbw = fam.bw.derivative().eval_complex(z);
    let q = Complex64::new(fam.params.beta - fam.params.alpha, 0.0)
        - z * (fam.params.alpha + fam.params.beta + 2.0);
    let p = Complex64::new(1.0, 0.0) - z * z;
    // Second derivative from the Jacobi equation p y'' + q y' = lambda_n y.
    let d2 = (s.cur * fam.lambda_n(n) - q * s.dcur) / p;
    ComplexExceptional {
        prev: b * s.dprev - bw * s.prev,
        cur: b * s.dcur - bw * s.cur,
        dcur: db * s.dcur + b * d2 - dbw * s.cur - bw * s.dcur,
        log2_scale: s.log2_scale,
    }
}

/// Zeros of `P_n^[1]` split by location.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSplit {
    pub n: usize,
    pub degree: usize,
    /// Ascending, in `(-1, 1)`.
    pub regular: Vec<f64>,
    pub exceptional: Vec<Complex64>,
}

impl ZeroSplit {
    /// `n` regular zeros and the rest outside `[-1, 1]`.
    pub fn is_clean(&self) -> bool {
        self.regular.len() == self.n && self.regular.len() + self.exceptional.len() == self.degree
    }

    /// Smallest distance between consecutive regular zeros.
    pub fn min_regular_gap(&self) -> f64 {
        self.regular.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

const IM_TOL: f64 = 1e-8;
const EDGE: f64 = 1e-10;

fn is_regular(z: Complex64) -> bool {
    z.im.abs() <= IM_TOL && z.re > -1.0 + EDGE && z.re < 1.0 - EDGE
}

/// Regular zeros by sign changes on a `16 deg`-point angular grid refined by
/// bisection; exceptional zeros by Newton with implicit deflation, seeded at
/// the roots of `bt`.
pub fn zero_split(fam: &ExceptionalFamily, n: usize) -> Result<ZeroSplit> {
    let degree = fam.exceptional_degree(n);
    let f = |x: f64| exceptional_real(fam, n, x);
    let grid = 16 * degree.max(1);
    let xs: Vec<f64> = (0..=grid)
        .map(|j| (std::f64::consts::PI * j as f64 / grid as f64).cos())
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut regular = Vec::new();
    for j in 0..grid {
        let (mut hi, mut lo) = (xs[j], xs[j + 1]);
        let (mut fhi, flo) = (vals[j], vals[j + 1]);
        if fhi == 0.0 && hi < 1.0 && hi > -1.0 {
            regular.push(hi);
            continue;
        }
        if fhi * flo >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = f(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm > 0.0) == (fhi > 0.0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
            }
        }
        regular.push(0.5 * (lo + hi));
    }
    regular.sort_by(f64::total_cmp);

    let missing = degree.saturating_sub(regular.len());
    let mut seeds: Vec<Complex64> = if fam.b_tilde.degree() > 0 {
        poly_roots(&fam.b_tilde)?.all()
    } else {
        Vec::new()
    };
    let spare = [
        Complex64::new(1.5, 0.5),
        Complex64::new(-1.5, 0.5),
        Complex64::new(0.0, 1.5),
        Complex64::new(2.5, -0.5),
        Complex64::new(-2.5, -0.5),
    ];
    seeds.extend(spare.iter().cycle().take(missing));
    let mut found: Vec<Complex64> = Vec::new();
    for seed in seeds.into_iter().take(missing) {
        let root = deflated_newton(fam, n, seed, &regular, &found)?;
        found.push(root);
    }

    let mut exceptional = Vec::new();
    for z in found {
        if is_regular(z) {
            regular.push(z.re);
        } else {
            exceptional.push(z);
        }
    }
    regular.sort_by(f64::total_cmp);
    exceptional.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ZeroSplit {
        n,
        degree,
        regular,
        exceptional,
    })
}

fn deflated_newton(
    fam: &ExceptionalFamily,
    n: usize,
    seed: Complex64,
    regular: &[f64],
    found: &[Complex64],
) -> Result<Complex64> {
    const ITS: usize = 200;
    let mut z = seed;
    for _ in 0..ITS {
        let e = exceptional_complex(fam, n, z);
        if e.cur.norm() == 0.0 {
            return Ok(z);
        }
        let mut logd = e.dcur / e.cur;
        for &r in regular {
            logd -= (z - r).inv();
        }
        for &r in found {
            logd -= (z - r).inv();
        }
        let step = logd.inv();
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            if z.im.abs() < 1e-12 * (1.0 + z.re.abs()) {
                z.im = 0.0;
            }
            return Ok(z);
        }
    }
    Err(Error::RootFinder { iterations: ITS })
}

/// Hausdorff distance between the exceptional zeros and the roots of `bt`.
pub fn exceptional_zero_gap(fam: &ExceptionalFamily, n: usize) -> Result<f64> {
    let split = zero_split(fam, n)?;
    let targets = if fam.b_tilde.degree() > 0 {
        poly_roots(&fam.b_tilde)?.all()
    } else {
        Vec::new()
    };
    Ok(hausdorff(&split.exceptional, &targets))
}

pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let dir = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    dir(a, b).max(dir(b, a))
}

/// Branch of `z - sqrt(z^2 - 1)` inside the unit disk.
pub fn ratio_limit(z: Complex64) -> Complex64 {
    let s = (z * z - 1.0).sqrt();
    let r = z - s;
    if r.norm() <= 1.0 {
        r
    } else {
        z + s
    }
}

/// `P_{n-1}^[1](z) / P_n^[1](z)` for `z` off `[-1, 1]` and away from the roots of `bt`.
pub fn ratio_asymptotics(fam: &ExceptionalFamily, z: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParams("ratio needs n >= 1".into()));
    }
    if z.im.abs() < 1e-12 && z.re.abs() <= 1.0 {
        return Err(Error::Excluded(format!("z = {z} lies on [-1, 1]")));
    }
    if fam.b_tilde.degree() > 0 {
        for r in poly_roots(&fam.b_tilde)?.all() {
            if (z - r).norm() <= 0.05 {
                return Err(Error::Excluded(format!("z = {z} is within 0.05 of the root {r} of bt")));
            }
        }
    }
    let e = exceptional_complex(fam, n, z);
    Ok(e.prev / e.cur)
}

/// Scaled value and its Bessel limit at `cos(z/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MehlerHeine {
    pub scaled: Complex64,
    pub limit: Complex64,
}

impl MehlerHeine {
    pub fn rel_err(&self) -> f64 {
        (self.scaled - self.limit).norm() / self.limit.norm()
    }
}

/// For `e1 = +1`: `rho_n n^-(a+2) P_n^[1](cos(z/n)) -> b(1) / (2 Γ(a+2)) j_{a+1}(z)`.
/// For `e1 = -1`, with `b = (1-x) b1`: `rho_n n^-a P_n^[1](cos(z/n)) -> -b1(1)/Γ(a) j_{a-1}(z)`.
pub fn mehler_heine(fam: &ExceptionalFamily, z: Complex64, n: usize) -> Result<MehlerHeine> {
    let a = fam.params.alpha;
    let e1 = fam.eps1 as f64;
    if a < -e1 / 2.0 {
        return Err(Error::Hypothesis(format!("alpha = {a} < -eps1/2 = {}", -e1 / 2.0)));
    }
    let x = (z / n as f64).cos();
    let e = exceptional_complex(fam, n, x);
    let value = e.cur * 2f64.powi(e.log2_scale as i32);
    let rho = jacobi_norm(n, fam.params);
    let nf = n as f64;
    if fam.eps1 == 1 {
        let c = fam.b.eval(1.0) / (2.0 * gamma(a + 2.0));
        Ok(MehlerHeine {
            scaled: value * rho / nf.powf(a + 2.0),
            limit: bessel_j_small(a + 1.0, z) * c,
        })
    } else {
        let (q, _) = fam.b.deflate(1.0);
        let b1_at_one = -q.eval(1.0);
        let c = -b1_at_one / gamma(a);
        Ok(MehlerHeine {
            scaled: value * rho / nf.powf(a),
            limit: bessel_j_small(a - 1.0, z) * c,
        })
    }
}

/// Sup discrepancy of the regular-zero angles and the bound
/// `c sqrt(log n / n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyPoint {
    pub n: usize,
    pub value: f64,
    pub bound: f64,
}

fn discrepancy_hypothesis(fam: &ExceptionalFamily) -> Result<()> {
    let (a, b) = (fam.params.alpha, fam.params.beta);
    if a >= -0.5 && b >= -0.5 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("need alpha, beta >= -1/2, got ({a}, {b})")))
    }
}

pub fn regular_zero_discrepancy_value(fam: &ExceptionalFamily, n: usize) -> Result<f64> {
    discrepancy_hypothesis(fam)?;
    Ok(sup_discrepancy(&zero_split(fam, n)?.regular))
}

/// `C` such that the bound is met with equality at `n0`.
pub fn fit_discrepancy_constant(fam: &ExceptionalFamily, n0: usize) -> Result<f64> {
    let v = regular_zero_discrepancy_value(fam, n0)?;
    let nf = n0 as f64;
    Ok(v / (nf.ln() / nf).sqrt())
}

/// Discrepancy at each `n` against `C sqrt(log n / n)`, `C` fitted at the
/// first entry of `n_list` and then frozen.
pub fn regular_zero_discrepancy(fam: &ExceptionalFamily, n_list: &[usize]) -> Result<Vec<DiscrepancyPoint>> {
    let Some(&n0) = n_list.first() else {
        return Ok(Vec::new());
    };
    let c = fit_discrepancy_constant(fam, n0)?;
    n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            Ok(DiscrepancyPoint {
                n,
                value: regular_zero_discrepancy_value(fam, n)?,
                bound: c * (nf.ln() / nf).sqrt(),
            })
        })
        .collect()
}

/// Rows `(n, z, ratio_error)`.
pub fn ratio_table(fam: &ExceptionalFamily, n_list: &[usize], zs: &[Complex64]) -> Result<Table> {
    let mut t = Table::new(&["n", "z", "ratio_error"]);
    for &z in zs {
        for &n in n_list {
            let err = (ratio_asymptotics(fam, z, n)? - ratio_limit(z)).norm();
            t.push(vec![n.into(), z.into(), err.into()]);
        }
    }
    Ok(t)
}

/// Rows `(n, hausdorff_gap)`.
pub fn zero_gap_table(fam: &ExceptionalFamily, n_list: &[usize]) -> Result<Table> {
    let mut t = Table::new(&["n", "hausdorff_gap"]);
    for &n in n_list {
        t.push(vec![n.into(), exceptional_zero_gap(fam, n)?.into()]);
    }
    Ok(t)
}

/// Rows `(n, discrepancy, bound)`.
pub fn discrepancy_table(fam: &ExceptionalFamily, n_list: &[usize]) -> Result<Table> {
    let mut t = Table::new(&["n", "discrepancy", "bound"]);
    for p in regular_zero_discrepancy(fam, n_list)? {
        t.push(vec![p.n.into(), p.value.into(), p.bound.into()]);
    }
    Ok(t)
}

/// Rows `(n, z, mh_scaled, mh_limit, rel_err)`.
pub fn mehler_heine_table(fam: &ExceptionalFamily, n_list: &[usize], zs: &[Complex64]) -> Result<Table> {
    let mut t = Table::new(&["n", "z", "mh_scaled", "mh_limit", "rel_err"]);
    for &z in zs {
        for &n in n_list {
            let mh = mehler_heine(fam, z, n)?;
            t.push(vec![n.into(), z.into(), mh.scaled.into(), mh.limit.into(), mh.rel_err().into()]);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::{exceptional_eval, FamilySpec, SeedType};

    fn f1() -> ExceptionalFamily {
        FamilySpec::new(SeedType::TypeI, 3.0, 0.0, 1).build().unwrap()
    }

    #[test]
    fn complex_matches_real() {
        let f = f1();
        for n in [0, 1, 9, 40] {
            for &x in &[-0.8, 0.1, 0.95] {
                let e = exceptional_complex(&f, n, Complex64::new(x, 0.0));
                assert_eq!(e.log2_scale, 0);
                let r = exceptional_eval(&f, n, x);
                assert!((e.cur.re - r).abs() < 1e-10 * (1.0 + r.abs()));
                assert!((exceptional_real(&f, n, x) - r).abs() < 1e-10 * (1.0 + r.abs()));
                let h = 1e-5;
                let fd = (exceptional_eval(&f, n, x + h) - exceptional_eval(&f, n, x - h)) / (2.0 * h);
                assert!((e.dcur.re - fd).abs() < 1e-5 * (1.0 + fd.abs()));
            }
        }
    }

    #[test]
    fn f1_split_small() {
        let f = f1();
        let s = zero_split(&f, 10).unwrap();
        assert_eq!(s.regular.len(), 10);
        assert_eq!(s.exceptional.len(), 1);
        assert!((s.exceptional[0] + 3.0).norm() < 0.5);
        assert!(s.is_clean());
        // Companion-matrix cross-check.
        let poly = f.exceptional_poly(10);
        let mut roots: Vec<Complex64> = poly_roots(&poly).unwrap().all();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - s.exceptional[0]).norm() < 1e-8);
        for (r, x) in roots[1..].iter().zip(&s.regular) {
            assert!((r.re - x).abs() < 1e-8);
        }
    }

    #[test]
    fn codim0_has_no_exceptional_zeros() {
        let c = FamilySpec::new(SeedType::TypeI, 1.0, 0.0, 0).build().unwrap();
        let s = zero_split(&c, 15).unwrap();
        assert!(s.exceptional.is_empty());
        assert_eq!(s.regular.len(), 15);
        assert_eq!(exceptional_zero_gap(&c, 15).unwrap(), 0.0);
    }

    #[test]
    fn ratio_examples() {
        let f = f1();
        let z = Complex64::new(2.0, 0.0);
        let r = ratio_asymptotics(&f, z, 200).unwrap();
        assert!((r - (2.0 - 3f64.sqrt())).norm() < 0.01);
        let ten = Complex64::new(10.0, 0.0);
        assert!((ratio_limit(ten).re - (10.0 - 99f64.sqrt())).abs() < 1e-15);
        let errs: Vec<f64> = [20, 40, 80, 160]
            .iter()
            .map(|&n| (ratio_asymptotics(&f, ten, n).unwrap() - ratio_limit(ten)).norm())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(ratio_limit(Complex64::new(2.0, 1.0)).norm() < 1.0);
        assert!(matches!(ratio_asymptotics(&f, Complex64::new(0.5, 0.0), 10), Err(Error::Excluded(_))));
        assert!(matches!(ratio_asymptotics(&f, Complex64::new(-3.01, 0.0), 10), Err(Error::Excluded(_))));
    }

    #[test]
    fn mehler_heine_at_zero() {
        let f = f1();
        let mh = mehler_heine(&f, Complex64::new(0.0, 0.0), 50).unwrap();
        assert!((mh.limit.re + 1.0).abs() < 1e-13);
        // Exact finite-n value: -bw(1) C(n+3, 3) / n^3 with bw(1) = 6.
        let exact = -6.0 * (53.0 * 52.0 * 51.0 / 6.0) / 50f64.powi(3);
        assert!((mh.scaled.re - exact).abs() < 1e-10);
    }

    #[test]
    fn endpoint_values_nonzero() {
        let f = f1();
        for n in 0..=100 {
            assert!(exceptional_real(&f, n, 1.0).abs() > 0.0);
            assert!(exceptional_real(&f, n, -1.0).abs() > 0.0);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let b = [Complex64::new(0.0, 0.5)];
        assert!((hausdorff(&a, &b) - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(hausdorff(&[], &[]), 0.0);
    }
}
