use std::f64::consts::PI;

use sciai_core::stats::{pearson, pooled_ttest, t_cdf, t_quantile, top_k_overlap, welch_ttest};

/// Γ(k/2) for a positive integer k, from the factorial recurrences.
fn gamma_half(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        (1..k / 2).map(f64::from).product()
    } else {
        // Γ(n + 1/2) = (2n)! / (4^n n!) · √π
        let n = (k - 1) / 2;
        let mut g = PI.sqrt();
        for i in 0..n {
            g *= f64::from(i) + 0.5;
        }
        g
    }
}

fn t_density(x: f64, df: u32) -> f64 {
    let v = f64::from(df);
    let c = gamma_half(df + 1) / ((v * PI).sqrt() * gamma_half(df));
    c * (1.0 + x * x / v).powf(-(v + 1.0) / 2.0)
}

/// 1/2 + ∫₀ᵗ f by composite Simpson.
fn t_cdf_numeric(t: f64, df: u32) -> f64 {
    let n = 20_000;
    let h = t / n as f64;
    let mut s = t_density(0.0, df) + t_density(t, df);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * t_density(i as f64 * h, df);
    }
    0.5 + s * h / 3.0
}

#[test]
fn t_cdf_matches_numeric_integration() {
    for df in [2, 5, 17] {
        for i in 0..=100 {
            let t = -5.0 + 0.1 * f64::from(i);
            let (got, want) = (t_cdf(t, f64::from(df)), t_cdf_numeric(t, df));
            assert!((got - want).abs() <= 1e-6, "df {df} t {t}: {got} vs {want}");
        }
    }
}

#[test]
fn t_cdf_closed_forms() {
    for i in 0..=40 {
        let t = -10.0 + 0.5 * f64::from(i);
        let cauchy = 0.5 + t.atan() / PI;
        let two = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
        assert!((t_cdf(t, 1.0) - cauchy).abs() < 1e-12);
        assert!((t_cdf(t, 2.0) - two).abs() < 1e-12);
    }
    for p in [0.025, 0.3, 0.5, 0.9, 0.975] {
        let q = t_quantile(p, 7.0);
        assert!((t_cdf(q, 7.0) - p).abs() < 1e-12, "{p}: {q} {}", t_cdf(q, 7.0));
    }
}

fn t3_two_sided(t: f64) -> f64 {
    let s = 3f64.sqrt();
    let cdf = 0.5 + (t / (s * (1.0 + t * t / 3.0)) + (t / s).atan()) / PI;
    2.0 * (1.0 - cdf)
}

#[test]
fn pearson_hand_worked() {
    // centered cross products 6, 10, 6 give r = 6/√60 = √0.6
    let c = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
    assert!((c.r - 0.6f64.sqrt()).abs() < 1e-12);
    assert_eq!(c.df, 3.0);
    assert!((c.t - 4.5f64.sqrt()).abs() < 1e-12);
    assert!((c.p_two_sided - t3_two_sided(4.5f64.sqrt())).abs() < 1e-9);
}

#[test]
fn welch_and_pooled_hand_worked() {
    let a = [1.0, 2.0, 3.0, 4.0];
    let b = [2.0, 4.0, 6.0, 8.0, 10.0];
    // s²_a = 5/3, s²_b = 10; q_a = 5/12, q_b = 2
    let (qa, qb): (f64, f64) = (5.0 / 12.0, 2.0);
    let w = welch_ttest(&a, &b).unwrap();
    assert!((w.t - (-3.5 / (qa + qb).sqrt())).abs() < 1e-12);
    let df = (qa + qb).powi(2) / (qa * qa / 3.0 + qb * qb / 4.0);
    assert!((w.df - df).abs() < 1e-12);
    // reference p from scipy.stats.ttest_ind(a, b, equal_var=False)
    assert!((w.p_two_sided - 0.06913359319239236).abs() < 1e-9);

    // pooled s² = (3·5/3 + 4·10)/7 = 45/7
    let p = pooled_ttest(&a, &b).unwrap();
    assert!((p.t - (-3.5 / (45.0 / 7.0 * (0.25 + 0.2f64)).sqrt())).abs() < 1e-12);
    assert_eq!(p.df, 7.0);
    assert!((p.p_two_sided - 0.07861923505869378).abs() < 1e-9);
}

#[test]
fn biology_top_three_overlap() {
    let direct = ["biological system", "computational biology", "neuroscience"];
    let potential = ["biological system", "computational biology", "animal science"];
    assert_eq!(top_k_overlap(&direct, &potential, 3), 2);
}

#[test]
fn degenerate_inputs_are_errors() {
    assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    assert!(welch_ttest(&[1.0], &[1.0, 2.0]).is_err());
    assert!(pooled_ttest(&[1.0, 1.0], &[1.0, 2.0]).is_err());
}
