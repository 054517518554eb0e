//! The fourth-order Airy function Ai₄ (solution of `f'''' + y f = 0` given by
//! `(1/π)∫₀^∞ cos(t⁵/5 + yt) dt`) and its companion Ãi₄ = L − Im W, where
//! `W(y) = (1/π)∫₀^∞ e^{i(t⁵/5 + yt)} dt` and `L(y) = (1/π)∫₀^∞ e^{−yt − t⁵/5} dt`.
//!
//! Near the origin the entire series is summed in double-double; outside the
//! switch radius either contour quadrature (default) or the leading saddle-point
//! forms are used. Values are [`ScaledReal`] because Ãi₄(−λ) grows like
//! `e^{(4/5)λ^{5/4}}`.

pub mod asymptotic;
pub mod contour;
pub mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::scaled::ScaledReal;
use series::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Asymptotic,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Asymptotic => "asymptotic",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccuracyWarning {
    /// Error estimate above the configured target.
    TargetMissed,
    /// Series hit `series_terms_max` before the terms became negligible.
    SeriesTruncated,
    /// Adaptive quadrature ran out of subdivisions.
    QuadratureIncomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnEval {
    pub value: ScaledReal,
    pub abs_err: f64,
    pub method: Method,
    pub warning: Option<AccuracyWarning>,
}

impl FnEval {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEval {
    pub value: Complex64,
    pub abs_err: f64,
    pub method: Method,
    pub warning: Option<AccuracyWarning>,
}

/// What to use outside the series radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FarField {
    Quadrature,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Airy4Config {
    pub series_switch_radius: f64,
    pub series_terms_max: usize,
    /// Double-double accumulation of the series. Plain f64 otherwise.
    pub compensated_summation: bool,
    pub target_abs_err: f64,
    pub far_field: FarField,
}

impl Default for Airy4Config {
    fn default() -> Self {
        Self {
            series_switch_radius: 8.0,
            series_terms_max: 800,
            compensated_summation: true,
            target_abs_err: 1e-13,
            far_field: FarField::Quadrature,
        }
    }
}

impl Airy4Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_switch_radius > 0.0 && self.series_switch_radius.is_finite()) {
            return Err(Error::Domain("series_switch_radius must be positive".into()));
        }
        if !(self.target_abs_err > 0.0) {
            return Err(Error::Domain("target_abs_err must be positive".into()));
        }
        Ok(())
    }

    pub fn default_method(&self, y: f64) -> Method {
        if y.abs() <= self.series_switch_radius {
            Method::Series
        } else {
            match self.far_field {
                FarField::Quadrature => Method::Quadrature,
                FarField::Asymptotic => Method::Asymptotic,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Func {
    Ai4,
    Ai4Tilde,
}

fn flag(value: ScaledReal, abs_err: f64, cfg: &Airy4Config, base: Option<AccuracyWarning>) -> Option<AccuracyWarning> {
    if base.is_some() {
        return base;
    }
    let scale = value.abs().to_f64().max(1.0);
    if !(abs_err <= cfg.target_abs_err * scale) {
        Some(AccuracyWarning::TargetMissed)
    } else {
        None
    }
}

/// Rounding of the log-magnitude representation itself.
fn repr_err(v: ScaledReal) -> f64 {
    if v.is_zero() {
        0.0
    } else {
        2.0 * f64::EPSILON * (1.0 + v.log_mag.abs()) * v.abs().to_f64()
    }
}

fn finish(value: ScaledReal, abs_err: f64, method: Method, cfg: &Airy4Config, w: Option<AccuracyWarning>) -> FnEval {
    let abs_err = abs_err + repr_err(value);
    FnEval { value, abs_err, method, warning: flag(value, abs_err, cfg, w) }
}

fn from_series(s: series::SeriesSum, cfg: &Airy4Config) -> FnEval {
    let w = (!s.converged).then_some(AccuracyWarning::SeriesTruncated);
    finish(ScaledReal::from_f64(s.value), s.abs_err, Method::Series, cfg, w)
}

fn quad_warning(converged: bool) -> Option<AccuracyWarning> {
    (!converged).then_some(AccuracyWarning::QuadratureIncomplete)
}

/// Both functions, derivative orders `p0 .. p0+4`, by one route.
fn block(y: f64, p0: usize, method: Method, cfg: &Airy4Config) -> Result<([FnEval; 5], [FnEval; 5])> {
    check_finite(y, "y")?;
    match method {
        Method::Series => {
            let mut ai = Vec::with_capacity(5);
            let mut at = Vec::with_capacity(5);
            for p in p0..p0 + 5 {
                let [a, t] = series::sum(y, p, [Weight::Ai, Weight::AiTilde], cfg.compensated_summation, cfg.series_terms_max);
                ai.push(from_series(a, cfg));
                at.push(from_series(t, cfg));
            }
            Ok((ai.try_into().unwrap(), at.try_into().unwrap()))
        }
        Method::Quadrature => {
            if y > 0.0 {
                let s = contour::saddle_line(y, p0);
                let w = quad_warning(s.converged);
                let e = s.shift.exp();
                let ai = std::array::from_fn(|j| {
                    let v = ScaledReal::from_scaled(s.value[j].re, s.shift);
                    finish(v, s.err[j] * e + f64::EPSILON * v.abs().to_f64(), Method::Quadrature, cfg, w)
                });
                let at = std::array::from_fn(|j| {
                    let v = ScaledReal::from_scaled(s.value[j].im, s.shift);
                    finish(v, s.err[j] * e + f64::EPSILON * v.abs().to_f64(), Method::Quadrature, cfg, w)
                });
                Ok((ai, at))
            } else {
                let wv = contour::w_derivs(y, p0);
                let l = contour::laplace_derivs(y, p0);
                let w = quad_warning(wv.converged && l.converged);
                let ai = std::array::from_fn(|j| {
                    let v = ScaledReal::from_f64(wv.value[j].re);
                    finish(v, wv.err[j] + f64::EPSILON * v.abs().to_f64(), Method::Quadrature, cfg, w)
                });
                let at = std::array::from_fn(|j| {
                    let lv = ScaledReal::from_scaled(l.value[j].re, l.shift);
                    let v = lv - ScaledReal::from_f64(wv.value[j].im);
                    let err = ScaledReal::from_scaled(l.err[j], l.shift).to_f64() + wv.err[j];
                    finish(v, err + f64::EPSILON * v.abs().to_f64(), Method::Quadrature, cfg, w)
                });
                Ok((ai, at))
            }
        }
        Method::Asymptotic => {
            if y == 0.0 {
                return Err(Error::UnsupportedRange("leading asymptotics are undefined at y = 0".into()));
            }
            let mk = |l: asymptotic::Leading| finish(l.value, l.err.to_f64(), Method::Asymptotic, cfg, None);
            let ai = std::array::from_fn(|j| mk(asymptotic::ai(y, p0 + j)));
            let at = std::array::from_fn(|j| mk(asymptotic::ai_tilde(y, p0 + j)));
            Ok((ai, at))
        }
    }
}

/// Derivative `p` of `f` evaluated directly by the given route (no ODE recursion).
pub fn eval_direct(f: Func, y: f64, p: usize, method: Method, cfg: &Airy4Config) -> Result<FnEval> {
    let (ai, at) = block(y, p, method, cfg)?;
    Ok(match f {
        Func::Ai4 => ai[0],
        Func::Ai4Tilde => at[0],
    })
}

/// Derivative `p` of both functions at one point by the default route.
pub fn pair(y: f64, p: usize, cfg: &Airy4Config) -> Result<(FnEval, FnEval)> {
    check_finite(y, "y")?;
    match cfg.default_method(y) {
        Method::Series => {
            let [a, t] = series::sum(y, p, [Weight::Ai, Weight::AiTilde], cfg.compensated_summation, cfg.series_terms_max);
            Ok((from_series(a, cfg), from_series(t, cfg)))
        }
        m => {
            let (a, t) = block(y, p, m, cfg)?;
            Ok((a[0], t[0]))
        }
    }
}

/// Orders 0..=3 of Ai₄ and Ãi₄ at one point, sharing the work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub y: f64,
    pub ai: [FnEval; 4],
    pub at: [FnEval; 4],
}

impl Jet {
    pub fn get(&self, f: Func) -> &[FnEval; 4] {
        match f {
            Func::Ai4 => &self.ai,
            Func::Ai4Tilde => &self.at,
        }
    }

    /// Derivative `p` of `f`, using `f'''' = −y f` and its derivatives for p ≥ 4.
    pub fn deriv(&self, f: Func, p: usize) -> FnEval {
        let base = self.get(f);
        if p < 4 {
            return base[p];
        }
        let y = ScaledReal::from_f64(self.y);
        let mut vals: Vec<FnEval> = base.to_vec();
        for q in 4..=p {
            // f^{(q)} = −y f^{(q−4)} − (q−4) f^{(q−5)}
            let a = vals[q - 4];
            let mut v = -(y * a.value);
            let mut err = self.y.abs() * a.abs_err;
            let mut mag = (y * a.value).abs().to_f64();
            if q >= 5 {
                let b = vals[q - 5];
                let k = (q - 4) as f64;
                v = v - b.value.scale(k);
                err += k * b.abs_err;
                mag += k * b.value.abs().to_f64();
            }
            let warning = a.warning.or(if q >= 5 { vals[q - 5].warning } else { None });
            vals.push(FnEval { value: v, abs_err: err + f64::EPSILON * mag, method: a.method, warning });
        }
        vals[p]
    }
}

pub fn jet(y: f64, cfg: &Airy4Config) -> Result<Jet> {
    let (ai, at) = block(y, 0, cfg.default_method(y), cfg)?;
    Ok(Jet { y, ai: [ai[0], ai[1], ai[2], ai[3]], at: [at[0], at[1], at[2], at[3]] })
}

pub fn ai4(y: f64, cfg: &Airy4Config) -> Result<FnEval> {
    ai4_deriv(y, 0, cfg)
}

pub fn ai4_deriv(y: f64, p: usize, cfg: &Airy4Config) -> Result<FnEval> {
    if p < 4 {
        eval_direct(Func::Ai4, y, p, cfg.default_method(y), cfg)
    } else {
        Ok(jet(y, cfg)?.deriv(Func::Ai4, p))
    }
}

pub fn ai4_tilde(y: f64, cfg: &Airy4Config) -> Result<FnEval> {
    ai4_tilde_deriv(y, 0, cfg)
}

pub fn ai4_tilde_deriv(y: f64, p: usize, cfg: &Airy4Config) -> Result<FnEval> {
    if p < 4 {
        eval_direct(Func::Ai4Tilde, y, p, cfg.default_method(y), cfg)
    } else {
        Ok(jet(y, cfg)?.deriv(Func::Ai4Tilde, p))
    }
}

/// `W(y) = (1/π)∫₀^∞ e^{i(t⁵/5 + yt)} dt`; real part Ai₄.
pub fn w_complex(y: f64, cfg: &Airy4Config) -> Result<ComplexEval> {
    check_finite(y, "y")?;
    if y.abs() <= cfg.series_switch_radius {
        let [re, im] = series::sum(y, 0, [Weight::Ai, Weight::ImW], cfg.compensated_summation, cfg.series_terms_max);
        let value = Complex64::new(re.value, im.value);
        let abs_err = re.abs_err.hypot(im.abs_err);
        let w = (!(re.converged && im.converged)).then_some(AccuracyWarning::SeriesTruncated);
        let warning = flag(ScaledReal::from_f64(value.norm()), abs_err, cfg, w);
        Ok(ComplexEval { value, abs_err, method: Method::Series, warning })
    } else {
        let r = contour::w_derivs(y, 0);
        let value = r.value[0];
        let abs_err = r.err[0] + f64::EPSILON * value.norm();
        let warning = flag(ScaledReal::from_f64(value.norm()), abs_err, cfg, quad_warning(r.converged));
        Ok(ComplexEval { value, abs_err, method: Method::Quadrature, warning })
    }
}

/// `L(y) = (1/π)∫₀^∞ e^{−yt − t⁵/5} dt`.
pub fn laplace_part(y: f64, cfg: &Airy4Config) -> Result<FnEval> {
    check_finite(y, "y")?;
    if y.abs() <= cfg.series_switch_radius {
        let [l] = series::sum(y, 0, [Weight::Lap], cfg.compensated_summation, cfg.series_terms_max);
        Ok(from_series(l, cfg))
    } else {
        let r = contour::laplace_derivs(y, 0);
        let v = ScaledReal::from_scaled(r.value[0].re, r.shift);
        let err = ScaledReal::from_scaled(r.err[0], r.shift).to_f64() + f64::EPSILON * v.abs().to_f64();
        Ok(finish(v, err, Method::Quadrature, cfg, quad_warning(r.converged)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> Airy4Config {
        Airy4Config::default()
    }

    #[test]
    fn origin_values() {
        let c = cfg();
        assert!((ai4(0.0, &c).unwrap().to_f64() - 0.383506701677839).abs() < 1e-15);
        assert!((ai4_deriv(0.0, 1, &c).unwrap().to_f64() + 0.158008187039913).abs() < 1e-15);
        assert!((laplace_part(0.0, &c).unwrap().to_f64() - 0.403242809556463).abs() < 1e-15);
        assert!((w_complex(0.0, &c).unwrap().value.im - 0.124608881012447).abs() < 1e-15);
        assert!((ai4_tilde(0.0, &c).unwrap().to_f64() - 0.278633928544015).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ai4(f64::NAN, &cfg()).is_err());
        assert!(ai4_tilde(f64::INFINITY, &cfg()).is_err());
    }

    #[test]
    fn first_negative_zero() {
        // 30-digit root of the series.
        let z = -2.4732820482122;
        let v = ai4(z, &cfg()).unwrap();
        let d = ai4_deriv(z, 1, &cfg()).unwrap().to_f64();
        assert!(v.to_f64().abs() <= 1e-12 * d.abs().max(1.0));
    }

    #[test]
    fn routes_agree_across_radius() {
        let c = cfg();
        for y in [-12.0, -9.5, -8.0, -6.0, 6.0, 8.0, 9.5, 12.0] {
            for p in 0..4 {
                for f in [Func::Ai4, Func::Ai4Tilde] {
                    let s = eval_direct(f, y, p, Method::Series, &c).unwrap();
                    let q = eval_direct(f, y, p, Method::Quadrature, &c).unwrap();
                    let d = (s.value - q.value).abs().to_f64();
                    assert!(d <= s.abs_err + q.abs_err, "{f:?} y={y} p={p}: {} vs {} (err {} {})", s.to_f64(), q.to_f64(), s.abs_err, q.abs_err);
                }
            }
        }
    }

    #[test]
    fn growth_of_companion() {
        let v = ai4_tilde(-20.0, &cfg()).unwrap();
        assert_eq!(v.value.sign, 1);
        let lead = 0.8 * 20f64.powf(1.25) + (20f64.powf(-0.375) / (2.0 * std::f64::consts::PI).sqrt()).ln();
        assert!((v.value.log_mag - lead).abs() <= 0.1 * lead.abs());
    }

    #[test]
    fn decay_bound_for_companion() {
        let v = ai4_tilde(20.0, &cfg()).unwrap().to_f64();
        let bound = 20f64.powf(-0.375) * (-(2.0 * 2f64.sqrt() / 5.0) * 20f64.powf(1.25)).exp()
            / (2.0 * std::f64::consts::PI).sqrt();
        assert!(v.abs() <= bound * 1.05, "{v} vs {bound}");
    }

    #[test]
    fn ai4_far_right_is_tiny_but_resolved() {
        let v = ai4(50.0, &cfg()).unwrap();
        assert!(v.value.log_mag < -70.0);
        assert!(v.abs_err <= 1e-10 * v.value.abs().to_f64());
        // Fitted constant against e^{−2y}: finite.
        let c1 = (v.value.log_mag + 100.0).exp();
        assert!(c1.is_finite());
    }

    #[test]
    fn recursion_orders() {
        let c = cfg();
        for y in [-3.0, 0.7, 5.0] {
            let a = ai4(y, &c).unwrap().to_f64();
            let a1 = ai4_deriv(y, 1, &c).unwrap().to_f64();
            let a4 = ai4_deriv(y, 4, &c).unwrap().to_f64();
            let a5 = ai4_deriv(y, 5, &c).unwrap().to_f64();
            assert!((a4 + y * a).abs() <= 1e-15 * (1.0 + (y * a).abs()));
            assert!((a5 + a + y * a1).abs() <= 1e-14);
        }
    }

    #[test]
    fn w_real_part_is_ai4() {
        let c = cfg();
        for y in [0.0, 1.0, -9.0, 10.0] {
            let w = w_complex(y, &c).unwrap();
            let a = ai4(y, &c).unwrap();
            assert!((w.value.re - a.to_f64()).abs() <= w.abs_err + a.abs_err);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn laplace_positive(y in -25.0f64..25.0) {
            prop_assert_eq!(laplace_part(y, &cfg()).unwrap().value.sign, 1);
        }

        #[test]
        fn companion_positive_on_left(y in -30.0f64..0.0) {
            prop_assert_eq!(ai4_tilde(y, &cfg()).unwrap().value.sign, 1);
        }

        #[test]
        fn companion_is_laplace_minus_imw(y in -20.0f64..12.0) {
            let c = cfg();
            let l = laplace_part(y, &c).unwrap();
            let w = w_complex(y, &c).unwrap();
            let t = ai4_tilde(y, &c).unwrap();
            let d = (l.value - ScaledReal::from_f64(w.value.im) - t.value).abs().to_f64();
            prop_assert!(d <= 2.0 * (l.abs_err + w.abs_err + t.abs_err));
        }
    }
}
