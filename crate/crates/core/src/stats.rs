//! Statistical utilities: binomial tails, Chernoff bounds, Wilson intervals,
//! and chi-square checks used by the audits and experiments.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

/// ln C(n, k).
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Exact Pr[Bin(n, p) <= floor(delta * n * p)] by stable log-space summation.
pub fn binomial_lower_tail(n: u64, p: f64, delta: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must be in [0,1]");
    assert!(delta > 0.0 && delta < 1.0, "delta must be in (0,1)");
    if p == 0.0 {
        return 1.0; // Bin(n,0) = 0 <= 0
    }
    let cutoff = (delta * n as f64 * p).floor() as u64;
    let cutoff = cutoff.min(n);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_terms = Vec::with_capacity(cutoff as usize + 1);
    for k in 0..=cutoff {
        let lt = ln_choose(n, k) + k as f64 * lp + (n - k) as f64 * lq;
        if lt.is_finite() {
            log_terms.push(lt);
        } else if lt == f64::NEG_INFINITY {
            continue; // structurally impossible term (e.g. p = 1, k < n)
        }
    }
    if log_terms.is_empty() {
        return 0.0;
    }
    let m = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_terms.iter().map(|lt| (lt - m).exp()).sum();
    (m + sum.ln()).exp().min(1.0)
}

/// Chernoff lower-tail bound: Pr[X < (1-a) mu] < exp(-a^2 mu / 2).
pub fn chernoff_lower(mu: f64, a: f64) -> f64 {
    (-a * a * mu / 2.0).exp()
}

/// Chernoff upper-tail bound: Pr[X > (1+a) mu] < exp(-a^2 mu / 3), 0 < a < 3/2.
pub fn chernoff_upper(mu: f64, a: f64) -> f64 {
    (-a * a * mu / 3.0).exp()
}

/// Two-sided z quantile for the given confidence (e.g. 0.99 -> 2.5758...).
pub fn z_two_sided(confidence: f64) -> f64 {
    assert!(confidence > 0.0 && confidence < 1.0);
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = z_two_sided(confidence);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Chi-square critical value: Pr[X > value] = alpha for X ~ chi2(df).
pub fn chi_square_critical(df: f64, alpha: f64) -> f64 {
    assert!(df > 0.0 && alpha > 0.0 && alpha < 1.0);
    ChiSquared::new(df).expect("valid df").inverse_cdf(1.0 - alpha)
}

/// Pearson statistic of an r x 2 contingency table given as two count columns.
/// Rows with empty expected counts are skipped; returns (statistic, df).
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let ta: u64 = a.iter().sum();
    let tb: u64 = b.iter().sum();
    let total = (ta + tb) as f64;
    if total == 0.0 {
        return (0.0, 0.0);
    }
    let mut stat = 0.0;
    let mut rows = 0.0f64;
    for (&ca, &cb) in a.iter().zip(b) {
        let row = (ca + cb) as f64;
        if row == 0.0 {
            continue;
        }
        rows += 1.0;
        for (obs, t) in [(ca as f64, ta as f64), (cb as f64, tb as f64)] {
            let exp = row * t / total;
            if exp > 0.0 {
                stat += (obs - exp).powi(2) / exp;
            }
        }
    }
    (stat, (rows - 1.0).max(0.0))
}

/// Goodness-of-fit statistic against uniform expectations; returns (stat, df).
pub fn uniform_chi_square(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    if total == 0 || counts.len() < 2 {
        return (0.0, 0.0);
    }
    let exp = total as f64 / counts.len() as f64;
    let stat = counts
        .iter()
        .map(|&c| (c as f64 - exp).powi(2) / exp)
        .sum();
    (stat, counts.len() as f64 - 1.0)
}

/// Mean and its two-sided confidence half-width under the normal approximation.
pub fn mean_ci(samples_sum: f64, samples_sq_sum: f64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    let nf = n as f64;
    let mean = samples_sum / nf;
    let var = (samples_sq_sum / nf - mean * mean).max(0.0);
    let half = z_two_sided(confidence) * (var / nf).sqrt();
    (mean, half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_tail_examples() {
        // Pr[Bin(10, 0.5) <= 1] = 11/1024
        let t = binomial_lower_tail(10, 0.5, 0.2);
        assert!((t - 11.0 / 1024.0).abs() < 1e-12, "{t}");
        // p = 0 gives probability 1
        assert_eq!(binomial_lower_tail(100, 0.0, 0.5), 1.0);
    }

    #[test]
    fn binomial_tail_lemma_regime() {
        // n = 10^4, p = ln n / n: exact tail <= n^(-2/3) at delta = 0.1.
        let n = 10_000u64;
        let p = (n as f64).ln() / n as f64;
        let bound = (n as f64).powf(-2.0 / 3.0);
        let tail = binomial_lower_tail(n, p, 0.1);
        assert!(tail <= bound, "tail = {tail}");
        // the lemma's hypothesis (e^2/d)^d e^(d-1) <= e^-0.7 first holds
        // around delta = 0.05; verify both the hypothesis and the bound there
        let delta = 0.05f64;
        let hyp = (std::f64::consts::E.powi(2) / delta).powf(delta) * (delta - 1.0).exp();
        assert!(hyp <= (-0.7f64).exp(), "hypothesis value {hyp}");
        assert!(binomial_lower_tail(n, p, delta) <= bound);
    }

    #[test]
    fn chernoff_dominates_exact_tail() {
        // dual route: exact binomial tail vs the Chernoff bound it must respect
        let (n, p) = (500u64, 0.04);
        let mu = n as f64 * p;
        for delta in [0.2, 0.5, 0.8] {
            let exact = binomial_lower_tail(n, p, delta);
            let bound = chernoff_lower(mu, 1.0 - delta);
            assert!(exact <= bound + 1e-12, "delta={delta}: {exact} > {bound}");
        }
    }

    #[test]
    fn wilson_and_z() {
        let z = z_two_sided(0.99);
        assert!((z - 2.575_829_303_548_9).abs() < 1e-9);
        let (lo, hi) = wilson_interval(50, 100, 0.99);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(lo > 0.35 && hi < 0.65);
        let (lo, hi) = wilson_interval(0, 100, 0.99);
        assert_eq!(lo, 0.0);
        assert!(hi < 0.1);
    }

    #[test]
    fn chi_square_critical_values() {
        // chi2(1) at alpha = 0.001 is 10.828; chi2(9) is 27.877
        assert!((chi_square_critical(1.0, 0.001) - 10.828).abs() < 1e-2);
        assert!((chi_square_critical(9.0, 0.001) - 27.877).abs() < 1e-2);
    }

    #[test]
    fn contingency_statistic() {
        let (stat, df) = two_sample_chi_square(&[50, 50], &[50, 50]);
        assert_eq!(stat, 0.0);
        assert_eq!(df, 1.0);
        let (stat, df) = two_sample_chi_square(&[90, 10], &[10, 90]);
        assert!(df == 1.0 && stat > 100.0);
    }
}
