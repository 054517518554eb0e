//! Entire power series about the origin.
//!
//! With `d_k = 5^{(k-4)/5} Γ((k+1)/5) / π` every function here is
//! `Σ_k d_k w_k y^k / k!` for a weight sequence `w_k` of period 10:
//! `cos(π(6k+1)/10)` for Ai₄, `sin(π(6k+1)/10)` for Im W, `(-1)^k` for the
//! Laplace part. `d_{k+5} = (k+1) d_k` keeps the coefficients exact in
//! double-double once the first five are known.

use crate::dd::Dd;

const D0: [Dd; 5] = [
    Dd::new(0.40324280955646263, -1.4090673358095923e-18),
    Dd::new(0.26881958406348483, 1.4257162256650125e-17),
    Dd::new(0.2490077663722574, -3.777455846704633e-18),
    Dd::new(0.2685930715407077, -1.451668028225928e-18),
    Dd::new(0.3183098861837907, -1.9678676675182486e-17),
];

const C1: Dd = Dd::new(0.9510565162951535, 4.0934500900087295e-17); // cos(π/10)
const C3: Dd = Dd::new(0.5877852522924731, -7.93475083819002e-18); // cos(3π/10)
const S1: Dd = Dd::new(0.30901699437494745, -2.716057601841253e-17); // sin(π/10)
const S3: Dd = Dd::new(0.8090169943749475, -2.716057601841253e-17); // sin(3π/10)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// Ai₄ = Re W.
    Ai,
    /// Im W.
    ImW,
    /// Laplace part L.
    Lap,
    /// Ãi₄ = L − Im W.
    AiTilde,
}

fn cos_w(k: usize) -> Dd {
    match k % 10 {
        0 | 3 => C1,
        1 | 2 => -C3,
        6 | 7 => C3,
        5 | 8 => -C1,
        _ => Dd::ZERO,
    }
}

fn sin_w(k: usize) -> Dd {
    match k % 10 {
        0 | 8 => S1,
        1 | 7 => S3,
        2 | 6 => -S3,
        3 | 5 => -S1,
        4 => Dd::from_f64(1.0),
        _ => Dd::from_f64(-1.0),
    }
}

fn alt(k: usize) -> Dd {
    Dd::from_f64(if k % 2 == 0 { 1.0 } else { -1.0 })
}

impl Weight {
    fn at(self, k: usize) -> Dd {
        match self {
            Weight::Ai => cos_w(k),
            Weight::ImW => sin_w(k),
            Weight::Lap => alt(k),
            Weight::AiTilde => alt(k) - sin_w(k),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    pub abs_err: f64,
    /// Largest single term, a measure of cancellation.
    pub max_term: f64,
    pub terms: usize,
    pub converged: bool,
}

/// p-th derivative of the series for each weight in `weights`, at `y`.
/// `compensated` selects double-double accumulation; otherwise plain f64.
pub fn sum<const M: usize>(y: f64, p: usize, weights: [Weight; M], compensated: bool, max_terms: usize) -> [SeriesSum; M] {
    let mut d = D0;
    // Advance coefficients so that d[k % 5] holds d_k for the current k.
    let mut acc_dd = [Dd::ZERO; M];
    let mut acc_f = [0.0f64; M];
    let mut abs_sum = [0.0f64; M];
    let mut max_term = [0.0f64; M];
    // y^{k-p}/(k-p)!
    let mut t = Dd::from_f64(1.0);
    let mut prev_mag = f64::INFINITY;
    let mut tail = f64::INFINITY;
    let mut k = 0usize;
    let mut converged = false;
    let unit = if compensated { 1e-31 } else { f64::EPSILON };
    while k < max_terms.max(p + 1) {
        let dk = d[k % 5];
        if k >= p {
            let base = dk * t;
            let mag = base.hi.abs();
            for i in 0..M {
                let term = base * weights[i].at(k);
                if compensated {
                    acc_dd[i] = acc_dd[i] + term;
                } else {
                    acc_f[i] += term.hi;
                }
                abs_sum[i] += term.hi.abs();
                max_term[i] = max_term[i].max(term.hi.abs());
            }
            // Stop only on the magnitude without the weight: some weights vanish identically.
            let big = max_term.iter().fold(mag, |m, v| m.max(*v));
            if k >= p + 10 && (mag < prev_mag || mag == 0.0) && mag <= unit * 1e-3 * big.max(f64::MIN_POSITIVE) {
                tail = 2.0 * mag;
                converged = true;
                break;
            }
            prev_mag = mag;
            t = t.mul_f64(y).div_f64((k + 1 - p) as f64);
        }
        // d_{k+5} = (k+1) d_k
        d[k % 5] = dk.mul_f64((k + 1) as f64);
        k += 1;
    }
    std::array::from_fn(|i| {
        let value = if compensated { acc_dd[i].to_f64() } else { acc_f[i] };
        let cancel = unit * abs_sum[i] * if compensated { 4.0 } else { 1.0 };
        let abs_err = if converged { tail + cancel } else { f64::INFINITY } + f64::EPSILON * value.abs();
        SeriesSum { value, abs_err, max_term: max_term[i], terms: k, converged }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // High-precision reference values (50-digit evaluation of the same series).
    #[test]
    fn values_at_origin() {
        let [ai, imw, lap, at] = sum(0.0, 0, [Weight::Ai, Weight::ImW, Weight::Lap, Weight::AiTilde], true, 400);
        assert!((ai.value - 0.383506701677839).abs() < 1e-15);
        assert!((imw.value - 0.124608881012447).abs() < 1e-15);
        assert!((lap.value - 0.403242809556463).abs() < 1e-15);
        assert!((at.value - 0.278633928544015).abs() < 1e-15);
        let [d1] = sum(0.0, 1, [Weight::Ai], true, 400);
        assert!((d1.value + 0.158008187039913).abs() < 1e-15);
    }

    #[test]
    fn matches_reference_off_origin() {
        let [ai, imw] = sum(-5.0, 0, [Weight::Ai, Weight::ImW], true, 400);
        assert!((ai.value - 0.0941089314002826).abs() < 1e-14);
        assert!((imw.value - 0.132046956057579).abs() < 1e-14);
        let [ai, imw] = sum(3.0, 0, [Weight::Ai, Weight::ImW], true, 400);
        assert!((ai.value + 0.0061397988920864).abs() < 1e-15);
        assert!((imw.value - 0.128806892149089).abs() < 1e-14);
    }

    #[test]
    fn plain_summation_loses_digits_at_radius() {
        let [c] = sum(-8.0, 0, [Weight::Ai], true, 600);
        let [p] = sum(-8.0, 0, [Weight::Ai], false, 600);
        assert!(p.abs_err > c.abs_err);
        assert!((c.value - p.value).abs() <= p.abs_err + c.abs_err);
    }
}
