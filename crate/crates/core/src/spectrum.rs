//! Eigenvalues as zeros of the determinants
//! `Φ₁ = Ai₄ Ãi₄'' − Ai₄'' Ãi₄` (even index) and `Φ₂ = Ai₄' Ãi₄''' − Ai₄''' Ãi₄'`
//! (odd index), evaluated at −λ, and the companion zeros μₙ of Ai₄' / Ai₄.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy4::{self, Airy4Config, Jet};
use crate::eigenfunctions;
use crate::error::{Error, Result};
use crate::scaled::ScaledReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub n: usize,
    pub parity: Parity,
    pub lambda: f64,
    pub mu: f64,
    pub bracket: (f64, f64),
    /// Determinant value at −λ.
    pub residual: ScaledReal,
    pub c1: f64,
    pub c2: f64,
    /// `√(c₁ |c₂|)`.
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub version: String,
    pub tol: f64,
    pub airy: Airy4Config,
    /// Invariant violations found while cross-checking the records.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralTable {
    pub records: Vec<EigenvalueRecord>,
    pub meta: TableMeta,
}

impl SpectralTable {
    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }

    pub fn get(&self, n: usize) -> Option<&EigenvalueRecord> {
        n.checked_sub(1).and_then(|i| self.records.get(i))
    }

    pub fn n_max(&self) -> usize {
        self.records.len()
    }
}

/// `2^{5/4} √Γ(4/5) / (5^{1/10} √π)`.
pub fn deviation_prefactor() -> f64 {
    2f64.powf(1.25) * statrs::function::gamma::gamma(0.8).sqrt() / (5f64.powf(0.1) * PI.sqrt())
}

/// `(5(2n−1)π/16)^{4/5}`.
pub fn asymptotic_eigenvalue(n: usize) -> f64 {
    assert!(n >= 1, "index starts at 1");
    (5.0 * (2 * n - 1) as f64 * PI / 16.0).powf(0.8)
}

/// Lower and upper bounds on λ_{n+1} − λₙ.
pub fn gap_bounds(n: usize) -> (f64, f64) {
    assert!(n >= 1, "index starts at 1");
    let m = (n as f64 - 0.5).powf(-0.2);
    let lower = PI / 2.0 * (8.0 / (15.0 * PI)).powf(0.2) * m;
    let upper = PI / 2.0 * (8.0 / (5.0 * PI)).powf(0.2) * m;
    (lower, upper)
}

pub fn deviation_bound(rec: &EigenvalueRecord) -> f64 {
    deviation_prefactor() * rec.gamma
}

fn det(j: &Jet, lo: usize, hi: usize) -> (ScaledReal, f64) {
    let (a0, a1) = (j.ai[lo], j.ai[hi]);
    let (t0, t1) = (j.at[lo], j.at[hi]);
    let v = a0.value * t1.value - a1.value * t0.value;
    let err = ScaledReal::from_f64(a0.abs_err) * t1.value.abs()
        + a0.value.abs() * ScaledReal::from_f64(t1.abs_err)
        + ScaledReal::from_f64(a1.abs_err) * t0.value.abs()
        + a1.value.abs() * ScaledReal::from_f64(t0.abs_err);
    (v, err.to_f64())
}

/// Φ₁(−λ).
pub fn phi1(lambda: f64, cfg: &Airy4Config) -> Result<ScaledReal> {
    check_lambda(lambda)?;
    Ok(det(&airy4::jet(-lambda, cfg)?, 0, 2).0)
}

/// Φ₂(−λ).
pub fn phi2(lambda: f64, cfg: &Airy4Config) -> Result<ScaledReal> {
    check_lambda(lambda)?;
    Ok(det(&airy4::jet(-lambda, cfg)?, 1, 3).0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("λ must be positive and finite, got {lambda}")))
    }
}

/// Determinant times `π λ^{±1/4} e^{−(4/5)λ^{5/4}}` (sign − for Φ₂), which oscillates
/// with unit amplitude; with its error in the same units.
pub fn phi_normalized(parity: Parity, lambda: f64, cfg: &Airy4Config) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    let jet = airy4::jet(-lambda, cfg)?;
    let (v, err) = match parity {
        Parity::Even => det(&jet, 0, 2),
        Parity::Odd => det(&jet, 1, 3),
    };
    let q = match parity {
        Parity::Even => 0.25,
        Parity::Odd => -0.25,
    };
    let ln_norm = PI.ln() + q * lambda.ln() - 0.8 * lambda.powf(1.25);
    let value = v.unscale(-ln_norm);
    let e = ScaledReal::from_f64(err).unscale(-ln_norm);
    Ok((value, e))
}

/// Brent's method on a sign-changing bracket; returns (root, final bracket).
fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<(f64, (f64, f64))> {
    if fa == 0.0 {
        return Ok((a, (a, a)));
    }
    if fb == 0.0 {
        return Ok((b, (b, b)));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok((b, (lo, hi)));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::NoConvergence(format!("root refinement stalled near {b}")))
}

fn bracket_scan<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64, step: f64) -> Result<Option<(f64, f64, f64, f64)>> {
    let mut a = lo;
    let mut fa = f(a)?;
    while a < hi {
        let b = (a + step).min(hi);
        let fb = f(b)?;
        if fa.signum() != fb.signum() || fb == 0.0 {
            return Ok(Some((a, b, fa, fb)));
        }
        a = b;
        fa = fb;
    }
    Ok(None)
}

/// Find the single sign change of `f` in `guess ± half`, widening once by `widen`.
fn bracket_window<F: FnMut(f64) -> Result<f64>>(f: &mut F, n: usize, guess: f64, half: f64, widen: f64) -> Result<(f64, f64, f64, f64)> {
    for w in [half, half + widen] {
        let lo = (guess - w).max(1e-9);
        let hi = guess + w;
        let (flo, fhi) = (f(lo)?, f(hi)?);
        if flo.signum() != fhi.signum() {
            return Ok((lo, hi, flo, fhi));
        }
        if w > half {
            return Err(Error::Bracket { n, lo, hi });
        }
    }
    unreachable!()
}

/// Initial guesses for the zeros of Ai₄ (`f`) and Ai₄' (`g`), in τ.
fn zero_expansion(tau: f64, derivative: bool) -> f64 {
    let t2 = tau * tau;
    let s = if derivative {
        1.0 - 0.05289277344 / t2 - 0.003797437462 / (t2 * t2) - 0.0005042991615 / (t2 * t2 * t2)
    } else {
        1.0 + 0.1586783204 / t2 - 0.03595263992 / (t2 * t2) + 0.01511323043 / (t2 * t2 * t2)
    };
    tau.powf(0.8) * s
}

/// Initial guess for μₙ from the zero expansions.
pub fn mu_guess(n: usize) -> f64 {
    let j = n.div_ceil(2) as f64;
    if n % 2 == 1 {
        zero_expansion(5.0 * (4.0 * j - 3.0) * PI / 16.0, true)
    } else {
        zero_expansion(5.0 * (4.0 * j - 1.0) * PI / 16.0, false)
    }
}

/// μₙ: the j-th negative zero of Ai₄' (n = 2j−1) or of Ai₄ (n = 2j), as a positive number.
pub fn mu(n: usize, tol: f64, cfg: &Airy4Config) -> Result<f64> {
    if n == 0 || !(tol > 0.0) {
        return Err(Error::Domain(format!("mu needs n ≥ 1 and tol > 0 (n = {n}, tol = {tol})")));
    }
    let p = if n % 2 == 1 { 1 } else { 0 };
    let mut f = |x: f64| airy4::ai4_deriv(-x, p, cfg).map(|e| e.to_f64());
    let (lo, hi, flo, fhi) = if n <= 2 {
        bracket_scan(&mut f, 0.0, 5.0, 0.1)?.ok_or(Error::Bracket { n, lo: 0.0, hi: 5.0 })?
    } else {
        let half = 0.45 * gap_bounds(n).0;
        bracket_window(&mut f, n, mu_guess(n), half, gap_bounds(n).0)?
    };
    Ok(brent(f, lo, hi, flo, fhi, tol)?.0)
}

/// The n-th eigenvalue together with μₙ and the normalization constants.
pub fn eigenvalue(n: usize, tol: f64, cfg: &Airy4Config) -> Result<EigenvalueRecord> {
    if n == 0 || !(tol > 0.0) {
        return Err(Error::Domain(format!("eigenvalue needs n ≥ 1 and tol > 0 (n = {n}, tol = {tol})")));
    }
    let parity = Parity::of(n);
    let guess = asymptotic_eigenvalue(n);
    let (lower, _) = gap_bounds(n);
    let mut f = |l: f64| phi_normalized(parity, l, cfg).map(|v| v.0);
    let (lo, hi, flo, fhi) = bracket_window(&mut f, n, guess, 0.45 * lower, lower)?;
    let (lambda, bracket) = brent(&mut f, lo, hi, flo, fhi, tol)?;

    let mut warnings = Vec::new();
    let (_, perr) = phi_normalized(parity, lambda, cfg)?;
    // Slope of the normalized determinant is about λ^{1/4}.
    let achievable = perr / lambda.powf(0.25);
    if achievable > tol {
        warnings.push(format!("tol {tol:e} below achievable root accuracy {achievable:e}"));
    }
    let residual = match parity {
        Parity::Even => phi1(lambda, cfg)?,
        Parity::Odd => phi2(lambda, cfg)?,
    };
    let mu = mu(n, tol, cfg)?;
    let (c1, c2) = eigenfunctions::norm_constants(n, lambda, cfg)?;
    let gamma = (c1 * c2.abs()).sqrt();
    Ok(EigenvalueRecord { n, parity, lambda, mu, bracket, residual, c1, c2, gamma, warnings })
}

/// Records 1..=n_max, computed in parallel, then cross-checked.
pub fn spectral_table(n_max: usize, tol: f64, cfg: &Airy4Config) -> Result<SpectralTable> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    cfg.validate()?;
    let records: Vec<EigenvalueRecord> = (1..=n_max)
        .into_par_iter()
        .map(|n| eigenvalue(n, tol, cfg).map_err(|e| Error::Record { n, source: Box::new(e) }))
        .collect::<Result<_>>()?;
    let notes = check_records(&records);
    Ok(SpectralTable {
        records,
        meta: TableMeta { version: crate::VERSION.to_string(), tol, airy: *cfg, notes },
    })
}

fn check_records(records: &[EigenvalueRecord]) -> Vec<String> {
    let mut notes = Vec::new();
    for w in records.windows(2) {
        if w[1].lambda <= w[0].lambda {
            notes.push(format!("lambda not increasing at n = {}", w[1].n));
        }
        if w[1].mu <= w[0].mu {
            notes.push(format!("mu not increasing at n = {}", w[1].n));
        }
    }
    for r in records {
        if !(r.bracket.0 <= r.lambda && r.lambda <= r.bracket.1) {
            notes.push(format!("n = {}: lambda outside its bracket", r.n));
        }
        let dev = (r.lambda - r.mu).abs();
        let bound = deviation_bound(r);
        if dev > bound {
            notes.push(format!("n = {}: |lambda - mu| = {dev:e} exceeds deviation bound {bound:e}", r.n));
        }
        for w in &r.warnings {
            notes.push(format!("n = {}: {w}", r.n));
        }
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Airy4Config {
        Airy4Config::default()
    }

    #[test]
    fn closed_forms() {
        assert!((asymptotic_eigenvalue(1) - 0.98537131513504).abs() < 1e-12);
        assert!((asymptotic_eigenvalue(2) - 2.3729955252757).abs() < 1e-12);
        let (lo, hi) = gap_bounds(1);
        assert!((lo - 1.265597613480373).abs() < 1e-12);
        assert!((hi - 1.5765941042160614).abs() < 1e-12);
        for n in [1, 7, 40] {
            let (lo, hi) = gap_bounds(n);
            assert!((lo / hi - 3f64.powf(-0.2)).abs() < 1e-14);
        }
        assert!((deviation_prefactor() - 1.2326361418233944).abs() < 1e-12);
        let r = asymptotic_eigenvalue(100_000) / 100_000f64.powf(0.8);
        assert!((r - (5.0 * PI / 8.0).powf(0.8)).abs() < 1e-5);
    }

    #[test]
    fn eigenvalues_match_reference() {
        // Zeros of the determinants from a 60-digit series evaluation.
        let want = [(1, 0.97842694525798207), (2, 2.3581951110138335), (5, 5.7079050131743765), (6, 6.7112650822076355), (10, 10.390516352515941)];
        for (n, w) in want {
            let r = eigenvalue(n, 1e-13, &cfg()).unwrap();
            assert!((r.lambda - w).abs() < 1e-11, "n = {n}: {}", r.lambda);
            assert!(r.bracket.0 <= r.lambda && r.lambda <= r.bracket.1);
        }
        for n in [21, 40] {
            let r = eigenvalue(n, 1e-12, &cfg()).unwrap();
            assert!((r.lambda - asymptotic_eigenvalue(n)).abs() < 0.05 * gap_bounds(n).0);
        }
    }

    #[test]
    fn companion_zeros() {
        let want = [(1, 0.69054021053966587), (2, 2.4732820482122084), (5, 5.7080527839295735), (10, 10.39807976795947)];
        for (n, w) in want {
            let m = mu(n, 1e-13, &cfg()).unwrap();
            assert!((m - w).abs() < 1e-10, "n = {n}: {m}");
        }
    }

    #[test]
    fn mu2_guess_is_the_printed_expansion() {
        assert!((mu_guess(2) - 2.4153).abs() < 1e-3);
    }

    #[test]
    fn normalized_determinants_follow_leading_form() {
        for lam in [5.0, 9.0, 20.0, 60.0] {
            let xi = 0.8 * f64::powf(lam, 1.25);
            let (v1, _) = phi_normalized(Parity::Even, lam, &cfg()).unwrap();
            let (v2, _) = phi_normalized(Parity::Odd, lam, &cfg()).unwrap();
            let tol = 2.0 * f64::powf(lam, -0.625);
            assert!((v1 - (xi + PI / 4.0).sin()).abs() < tol, "λ = {lam}");
            assert!((v2 - (xi + PI / 4.0).cos()).abs() < tol, "λ = {lam}");
        }
    }

    #[test]
    fn determinants_in_log_scale_do_not_overflow() {
        let v = phi1(300.0, &cfg()).unwrap();
        assert!(v.log_mag.is_finite() && v.log_mag > 700.0);
    }
}
