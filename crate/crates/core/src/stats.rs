//! Pearson correlation, OLS with confidence bands, t-tests and top-k overlap,
//! with the Student-t distribution computed from the regularized incomplete
//! beta function.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scoring::pairwise_sum;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// I_{df/(df+t²)}(df/2, 1/2) = P(|T| ≥ |t|). Near t = 0 the argument rounds
/// to 1, so the complement is evaluated at t²/(df+t²) instead.
fn two_sided_tail(t: f64, df: f64) -> f64 {
    let y = t * t / (df + t * t);
    if y < 0.5 {
        1.0 - reg_inc_beta(0.5, df / 2.0, y)
    } else {
        reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))
    }
}

/// P(T ≤ t) for Student's t with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let tail = 0.5 * two_sided_tail(t, df);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// P(|T| ≥ |t|).
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    two_sided_tail(t, df).clamp(0.0, 1.0)
}

/// Inverse of [`t_cdf`] by bisection.
pub fn t_quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile probability must be in (0, 1)");
    let (mut lo, mut hi) = (-1.0, 1.0);
    while t_cdf(lo, df) > p {
        lo *= 2.0;
    }
    while t_cdf(hi, df) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample variance (n − 1 denominator).
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (xs.len() as f64 - 1.0)
}

fn centered_cross(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mx, my) = (mean(x), mean(y));
    let sxy: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sxx: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    let syy: Vec<f64> = y.iter().map(|b| (b - my) * (b - my)).collect();
    (pairwise_sum(&sxy), pairwise_sum(&sxx), pairwise_sum(&syy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub t: f64,
    pub df: f64,
    pub p_two_sided: f64,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::Stats(format!("length mismatch {} vs {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Stats(format!("pearson needs n ≥ 3, got {n}")));
    }
    let (sxy, sxx, syy) = centered_cross(x, y);
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::Stats("pearson of a constant series".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let (t, p) = if r.abs() == 1.0 {
        (r.signum() * f64::INFINITY, 0.0)
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        (t, t_two_sided_p(t, df))
    };
    Ok(CorrelationResult {
        r,
        n,
        t,
        df,
        p_two_sided: p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Σ e² / (n − 2)
    pub residual_variance: f64,
    pub n: usize,
    x_mean: f64,
    sxx: f64,
    t_crit: f64,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    /// 95% confidence band for the mean response at `x`.
    pub fn confidence_band(&self, x: f64) -> (f64, f64) {
        let se = (self.residual_variance * (1.0 / self.n as f64 + (x - self.x_mean).powi(2) / self.sxx)).sqrt();
        let y = self.predict(x);
        (y - self.t_crit * se, y + self.t_crit * se)
    }

    pub fn residuals(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| b - self.predict(*a)).collect()
    }
}

pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<FitResult> {
    if x.len() != y.len() {
        return Err(Error::Stats(format!("length mismatch {} vs {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Stats(format!("ols needs n ≥ 3, got {n}")));
    }
    let (sxy, sxx, _) = centered_cross(x, y);
    if sxx <= 0.0 {
        return Err(Error::Stats("ols with a constant regressor".into()));
    }
    let slope = sxy / sxx;
    let x_mean = mean(x);
    let intercept = mean(y) - slope * x_mean;
    let sq: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .collect();
    let df = (n - 2) as f64;
    Ok(FitResult {
        slope,
        intercept,
        residual_variance: pairwise_sum(&sq) / df,
        n,
        x_mean,
        sxx,
        t_crit: t_quantile(0.975, df),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    pub p_two_sided: f64,
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Stats("t-test needs at least two values per sample".into()));
    }
    let (va, vb) = (variance(a), variance(b));
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::Stats("t-test sample with zero variance".into()));
    }
    Ok((va, vb))
}

/// Unequal-variance t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_ttest(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    let (va, vb) = check_samples(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (qa, qb) = (va / na, vb / nb);
    let t = (mean(a) - mean(b)) / (qa + qb).sqrt();
    let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    Ok(TTestResult {
        t,
        df,
        p_two_sided: t_two_sided_p(t, df),
    })
}

/// Classic equal-variance Student t-test.
pub fn pooled_ttest(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    let (va, vb) = check_samples(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let df = na + nb - 2.0;
    let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    let t = (mean(a) - mean(b)) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt();
    Ok(TTestResult {
        t,
        df,
        p_two_sided: t_two_sided_p(t, df),
    })
}

/// |top_k(a) ∩ top_k(b)| for two rankings given best-first.
pub fn top_k_overlap<K: Ord>(a: &[K], b: &[K], k: usize) -> usize {
    let ta: BTreeSet<&K> = a.iter().take(k).collect();
    b.iter().take(k).filter(|x| ta.contains(x)).count()
}
