//! Heat trace `Z(t) = Σ e^{−λₙt}` and the counting function `N(λ) = #{n : λₙ ≤ λ}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::spectrum::{asymptotic_eigenvalue, SpectralTable};

/// `2Γ(5/4)/π`, the limit of `t^{5/4} Z(t)` as t ↓ 0.
pub fn trace_limit() -> f64 {
    2.0 * gamma(1.25) / PI
}

/// `8/(5π)`, the limit of `N(λ)/λ^{5/4}`.
pub fn weyl_limit() -> f64 {
    8.0 / (5.0 * PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub t: f64,
    /// Lower bound on Z(t).
    pub partial_sum: f64,
    /// Z(t) ≤ partial_sum + tail_bound.
    pub tail_bound: f64,
    /// Terms summed: table records plus asymptotic extension.
    pub n_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl TraceEstimate {
    pub fn midpoint(&self) -> f64 {
        self.partial_sum + 0.5 * self.tail_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatConfig {
    /// Stop extending once the integral tail is below this fraction of the sum.
    pub rel_tail: f64,
    /// Warn when the final bound exceeds this fraction of the sum.
    pub rel_accuracy: f64,
    pub max_terms: usize,
}

impl Default for HeatConfig {
    fn default() -> Self {
        Self { rel_tail: 1e-15, rel_accuracy: 1e-8, max_terms: 50_000_000 }
    }
}

/// `K` in `|λₙ/gₙ − 1| ≤ K n^{−3/2}` beyond the table, where gₙ is the asymptotic eigenvalue:
/// twice the largest value seen over the upper half of the table (1 for short tables).
pub fn relative_error_constant(table: &SpectralTable) -> f64 {
    let n_max = table.n_max();
    if n_max < 20 {
        return 1.0;
    }
    let k = table.records[n_max / 2..]
        .iter()
        .map(|r| (r.lambda / asymptotic_eigenvalue(r.n) - 1.0).abs() * (r.n as f64).powf(1.5))
        .fold(0.0f64, f64::max);
    2.0 * k
}

pub fn heat_trace(t: f64, table: &SpectralTable) -> Result<TraceEstimate> {
    heat_trace_with(t, table, &HeatConfig::default())
}

pub fn heat_trace_with(t: f64, table: &SpectralTable, cfg: &HeatConfig) -> Result<TraceEstimate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let mut sum: f64 = table.records.iter().map(|r| (-r.lambda * t).exp()).sum();
    let mut spread = 0.0;
    let k = relative_error_constant(table);
    let c = (5.0 * PI / 8.0).powf(0.8);
    let mut n = table.n_max();
    let tail_from = |n: usize| -> f64 {
        // Σ_{m>n} e^{−λ_m t} ≤ ∫_{n−1/2}^∞ e^{−a s^{4/5}} ds, a = c(1 − εₙ)t.
        let eps = k * (n as f64).powf(-1.5);
        let a = c * (1.0 - eps).max(0.0) * t;
        if a <= 0.0 {
            return f64::INFINITY;
        }
        let s0 = n as f64 - 0.5;
        1.25 * gamma(1.25) * a.powf(-1.25) * gamma_ur(1.25, a * s0.powf(0.8))
    };
    let mut tail = tail_from(n);
    while tail > cfg.rel_tail * sum && n < cfg.max_terms {
        for _ in 0..1000 {
            n += 1;
            let g = asymptotic_eigenvalue(n);
            let eps = k * (n as f64).powf(-1.5);
            let lo = (-g * (1.0 + eps) * t).exp();
            let hi = (-g * (1.0 - eps) * t).exp();
            sum += lo;
            spread += hi - lo;
        }
        tail = tail_from(n);
    }
    let tail_bound = spread + tail;
    let warning = (tail_bound > cfg.rel_accuracy * sum).then(|| {
        format!("tail bound {tail_bound:e} above requested accuracy; about {} exact records would be needed", required_terms(t, cfg.rel_accuracy))
    });
    Ok(TraceEstimate { t, partial_sum: sum, tail_bound, n_used: n, warning })
}

/// Rough index where `e^{−gₙ t}` drops below `acc`.
fn required_terms(t: f64, acc: f64) -> usize {
    let lam = (1.0 / acc).ln() / t;
    index_for(lam)
}

/// Smallest n with asymptotic eigenvalue above `lambda`.
fn index_for(lambda: f64) -> usize {
    ((16.0 / (5.0 * PI) * lambda.max(0.0).powf(1.25) + 1.0) / 2.0).ceil() as usize + 1
}

pub fn trace_scan(ts: &[f64], table: &SpectralTable) -> Result<Vec<TraceEstimate>> {
    ts.iter().map(|&t| heat_trace(t, table)).collect()
}

/// `N(λ)`; λ must not exceed the largest tabulated eigenvalue.
pub fn counting(lambda: f64, table: &SpectralTable) -> Result<usize> {
    let top = table.records.last().map_or(0.0, |r| r.lambda);
    if !(lambda <= top) {
        return Err(Error::Domain(format!(
            "λ = {lambda} is beyond the table (largest {top}); n_max ≥ {} is required",
            index_for(lambda)
        )));
    }
    Ok(table.records.partition_point(|r| r.lambda <= lambda))
}

/// `N(λ)/λ^{5/4}`.
pub fn weyl_ratio(lambda: f64, table: &SpectralTable) -> Result<f64> {
    Ok(counting(lambda, table)? as f64 / lambda.powf(1.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy4::Airy4Config;
    use crate::spectrum::spectral_table;
    use std::sync::OnceLock;

    fn table() -> &'static SpectralTable {
        static T: OnceLock<SpectralTable> = OnceLock::new();
        T.get_or_init(|| spectral_table(60, 1e-10, &Airy4Config::default()).unwrap())
    }

    #[test]
    fn limits() {
        assert!((trace_limit() - 0.57703373861647).abs() < 1e-13);
        assert!((weyl_limit() - 0.5092958178940651).abs() < 1e-15);
    }

    #[test]
    fn trace_is_bracketed_and_decreasing() {
        let ts = [0.05, 0.1, 0.2, 0.4, 1.0, 2.0];
        let scan = trace_scan(&ts, table()).unwrap();
        for w in scan.windows(2) {
            assert!(w[1].partial_sum + w[1].tail_bound < w[0].partial_sum);
        }
        let z1 = &scan[4];
        assert!(z1.tail_bound <= 1e-10, "{}", z1.tail_bound);
        // Independent bound on the tail from the table alone.
        let direct: f64 = table().records.iter().map(|r| (-r.lambda).exp()).sum();
        assert!(z1.partial_sum >= direct && z1.partial_sum - direct < 1e-20);
    }

    #[test]
    fn counting_function_steps() {
        let t = table();
        assert_eq!(counting(0.5, t).unwrap(), 0);
        for r in &t.records[..20] {
            assert_eq!(counting(r.lambda, t).unwrap() - counting(r.lambda - 1e-9, t).unwrap(), 1);
            assert_eq!(counting(r.lambda, t).unwrap(), r.n);
        }
        let err = counting(1e4, t).unwrap_err().to_string();
        assert!(err.contains("n_max"), "{err}");
    }

    #[test]
    fn abel_sum_matches_trace() {
        // ∫ e^{−λt} dN(λ) as a Stieltjes sum over unit jumps.
        let t = 0.7;
        let abel: f64 = (1..=table().n_max()).map(|n| (-table().get(n).unwrap().lambda * t).exp()).sum();
        let z = heat_trace(t, table()).unwrap();
        // The trace adds asymptotic terms beyond the table, each below e^{−λ₆₀ t}.
        assert!(abel <= z.partial_sum && z.partial_sum - abel < 1e-12);
    }
}
