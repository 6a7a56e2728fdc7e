//! Paired tests, resampling intervals and effect sizes.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{MemError, Result};
use crate::rng::Mulberry32;

/// Largest sample for which the signed-rank null is enumerated exactly.
pub const EXACT_WILCOXON_MAX_N: usize = 25;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
pub fn sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided paired Wilcoxon signed-rank p-value. Zero differences are
/// dropped; the null is enumerated exactly up to 25 pairs and approximated
/// by a tie-corrected normal beyond that.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MemError::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Err(MemError::Degenerate("all paired differences are zero"));
    }
    if diffs.len() < 5 {
        return Err(MemError::InvalidArgument(format!("need at least 5 nonzero differences, got {}", diffs.len())));
    }
    let n = diffs.len();
    let ranks = average_ranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let w_plus: f64 = ranks.iter().zip(&diffs).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();

    if n <= EXACT_WILCOXON_MAX_N {
        // Doubled ranks are integers even with half-rank ties.
        let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
        let total: usize = doubled.iter().sum();
        let mut counts = vec![0f64; total + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=total).rev() {
                counts[s] += counts[s - r];
            }
        }
        let all = 2f64.powi(n as i32);
        let w = (w_plus * 2.0).round() as usize;
        let lower: f64 = counts[..=w].iter().sum::<f64>() / all;
        let upper: f64 = counts[w..].iter().sum::<f64>() / all;
        return Ok((2.0 * lower.min(upper)).min(1.0));
    }

    let nf = n as f64;
    let mu = nf * (nf + 1.0) / 4.0;
    let mut abs_sorted: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    abs_sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < abs_sorted.len() {
        let j = abs_sorted[i..].iter().take_while(|v| **v == abs_sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return Err(MemError::Degenerate("zero variance in signed-rank statistic"));
    }
    let z = ((w_plus - mu).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    Ok((2.0 * (1.0 - normal.cdf(z))).min(1.0))
}

/// Percentile 95% interval of the mean over `n_boot` resamples.
pub fn bootstrap_ci(samples: &[f64], n_boot: usize, rng: &mut Mulberry32) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(MemError::InvalidArgument("bootstrap needs at least one sample".into()));
    }
    if n_boot == 0 {
        return Err(MemError::InvalidArgument("bootstrap needs at least one resample".into()));
    }
    let n = samples.len();
    let mut means: Vec<f64> = (0..n_boot)
        .map(|_| (0..n).map(|_| samples[rng.below(n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let lo = ((0.025 * n_boot as f64).floor() as usize).min(n_boot - 1);
    let hi = ((0.975 * n_boot as f64).ceil() as usize).saturating_sub(1).min(n_boot - 1);
    Ok((means[lo], means[hi]))
}

/// Mean difference over pooled standard deviation. A zero pooled deviation
/// yields a signed infinity (or 0 when the means agree).
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(MemError::InvalidArgument("effect size needs two samples per group".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = (((na - 1.0) * sd(a).powi(2) + (nb - 1.0) * sd(b).powi(2)) / (na + nb - 2.0)).sqrt();
    let diff = mean(a) - mean(b);
    if pooled == 0.0 {
        return Ok(if diff == 0.0 { 0.0 } else { f64::INFINITY.copysign(diff) });
    }
    Ok(diff / pooled)
}

/// Pearson correlation; 0 when either series is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(MemError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return Ok(0.0);
    }
    Ok(cov / (vx * vy).sqrt())
}

/// Spearman rank correlation via Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    pearson(&average_ranks(x), &average_ranks(y))
}
