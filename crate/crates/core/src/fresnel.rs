//! Generalized Fresnel integrals `si(a, z) = ∫_z^∞ t^{a−1} sin t dt`, `ci(a, z) = ∫_z^∞ t^{a−1} cos t dt`
//! via the upper incomplete gamma function, and the Fresnel-integral representation of
//! the determinants Φ₁(−λ), Φ₂(−λ):
//!
//! ```text
//! Φ₁(−λ) = −(1/2π²) ∫₀^∞ [h₁ cos θ − h₂ sin θ] dv,   Φ₂(−λ) = −(1/2π²) ∫₀^∞ [h₃ cos θ − h₄ sin θ] dv,
//! θ = v⁵/20 + λv,  z = v⁵/16,
//! h₁ = v^{1/2} si(½, z), h₂ = v^{1/2} ci(½, z), h₃ = 2 sin z − v^{5/2} ci(½, z), h₄ = 2 cos z + v^{5/2} si(½, z).
//! ```
//!
//! With `G = ci − i·si = e^{−iπa/2} Γ(a, iz)` the integrands are `−v^{1/2} Im(G e^{iθ})` and
//! `2 sin(z − θ) − v^{5/2} Re(G e^{iθ})`. They are integrated on `[0, V]` and the remaining
//! tails, which only converge conditionally on the real axis, along rays leaving `V` at
//! angle `−π/10` (the `G e^{iθ}` parts) or `+π/10` (the `e^{i(z−θ)}` part), where they decay
//! like `e^{−s⁵/80}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::airy4::{FnEval, Method};
use crate::error::{Error, Result};
use crate::quad;
use crate::scaled::ScaledReal;

/// Default upper limit of λ for the Fresnel route.
pub const LAMBDA_MAX: f64 = 6.0;

const SERIES_RADIUS: f64 = 3.0;
const SPLIT: f64 = 2.0;

/// `e^{w} Γ(a, w)` with an error estimate, for real `a` that is not a non-positive integer.
pub fn inc_gamma_scaled(a: f64, w: Complex64) -> Result<(Complex64, f64)> {
    if a <= 0.0 && a.fract() == 0.0 {
        return Err(Error::UnsupportedRange(format!("Γ(a, w) needs a ∉ {{0, −1, …}}, got {a}")));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if w.norm() <= SERIES_RADIUS {
        let g = statrs::function::gamma::gamma(a);
        if w == Complex64::new(0.0, 0.0) {
            return Ok((Complex64::new(g, 0.0), 4.0 * f64::EPSILON * g.abs()));
        }
        // γ(a, w) = w^a Σ (−w)^k / (k! (a + k))
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term / a;
        let mut abs_sum = sum.norm();
        for k in 1..200 {
            term *= -w / k as f64;
            let t = term / (a + k as f64);
            sum += t;
            abs_sum += t.norm();
            if t.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        let wa = w.powf(a);
        let lower = wa * sum;
        let value = (Complex64::new(g, 0.0) - lower) * w.exp();
        let err = 4.0 * f64::EPSILON * (g.abs() + wa.norm() * abs_sum) * w.exp().norm();
        Ok((value, err))
    } else {
        // Modified Lentz on Γ(a, w) = e^{−w} w^a / (w + 1 − a − 1(1−a)/(w + 3 − a − 2(2−a)/(…))).
        let tiny = Complex64::new(1e-300, 0.0);
        let mut b = w + 1.0 - a;
        let mut c = Complex64::new(1e300, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        let mut iters = 0;
        for i in 1..5000 {
            iters = i;
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = d * an + b;
            if d.norm() < 1e-300 {
                d = tiny;
            }
            c = b + an / c;
            if c.norm() < 1e-300 {
                c = tiny;
            }
            d = Complex64::new(1.0, 0.0) / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).norm() < f64::EPSILON {
                break;
            }
        }
        if iters >= 4999 {
            return Err(Error::NoConvergence(format!("incomplete gamma continued fraction at w = {w}")));
        }
        let value = w.powf(a) * h;
        let err = (8.0 + iters as f64 / 4.0) * f64::EPSILON * value.norm();
        Ok((value, err))
    }
}

/// Upper incomplete gamma `Γ(a, w)` for complex w.
pub fn inc_gamma(a: f64, w: Complex64) -> Result<(Complex64, f64)> {
    let (v, e) = inc_gamma_scaled(a, w)?;
    let s = (-w).exp();
    Ok((v * s, e * s.norm()))
}

fn check_args(a: f64, z: f64) -> Result<()> {
    if !(a < 1.0) || !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("generalized Fresnel integrals need a < 1 and z > 0 (a = {a}, z = {z})")));
    }
    Ok(())
}

/// `ci(a, z) − i·si(a, z) = e^{−iπa/2} Γ(a, iz)`.
fn fresnel_pair(a: f64, z: f64) -> Result<(Complex64, f64)> {
    check_args(a, z)?;
    let (g, e) = inc_gamma(a, Complex64::new(0.0, z))?;
    Ok((Complex64::from_polar(1.0, -FRAC_PI_2 * a) * g, e))
}

fn fn_eval(v: f64, err: f64) -> FnEval {
    FnEval { value: ScaledReal::from_f64(v), abs_err: err, method: Method::Series, warning: None }
}

pub fn fresnel_si(a: f64, z: f64) -> Result<FnEval> {
    let (g, e) = fresnel_pair(a, z)?;
    Ok(fn_eval(-g.im, e))
}

pub fn fresnel_ci(a: f64, z: f64) -> Result<FnEval> {
    let (g, e) = fresnel_pair(a, z)?;
    Ok(fn_eval(g.re, e))
}

/// `(si, ci)(½, v⁵/16)`, with the v = 0 limit `(√(π/2), √(π/2))`.
fn half_order(v: f64) -> Result<(f64, f64)> {
    if v == 0.0 {
        let s = (PI / 2.0).sqrt();
        return Ok((s, s));
    }
    let (g, _) = fresnel_pair(0.5, v.powi(5) / 16.0)?;
    Ok((-g.im, g.re))
}

pub fn h1(v: f64) -> Result<f64> {
    Ok(v.sqrt() * half_order(v)?.0)
}

pub fn h2(v: f64) -> Result<f64> {
    Ok(v.sqrt() * half_order(v)?.1)
}

pub fn h3(v: f64) -> Result<f64> {
    let z = v.powi(5) / 16.0;
    Ok(2.0 * z.sin() - v.powf(2.5) * half_order(v)?.1)
}

pub fn h4(v: f64) -> Result<f64> {
    let z = v.powi(5) / 16.0;
    Ok(2.0 * z.cos() + v.powf(2.5) * half_order(v)?.0)
}

/// `v^q · G(v) · e^{iθ(v)}` for complex v, with `e^{iθ − w}` combined so nothing overflows.
fn g_phase(v: Complex64, q: f64, lambda: f64) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let v5 = v.powi(5);
    let w = i * v5 / 16.0;
    let (gs, _) = inc_gamma_scaled(0.5, w)?;
    let theta_minus_z = -v5 / 80.0 + v * lambda;
    Ok(v.powf(q) * Complex64::from_polar(1.0, -FRAC_PI_2 * 0.5) * gs * (i * theta_minus_z).exp())
}

/// Ray `V + s·e^{iα}` for s ∈ [0, ∞), stopping where `|integrand| < e^{−40}` relative.
fn ray_integral<F: FnMut(Complex64) -> Result<Complex64>>(mut f: F, angle: f64, lambda: f64) -> Result<(Complex64, f64)> {
    let dir = Complex64::from_polar(1.0, angle);
    let start = Complex64::new(SPLIT, 0.0);
    // Envelope exponent: −Im(v⁵)/80·sign + λ|Im v|, dominated by the quintic.
    let envelope = |s: f64| {
        let v = start + dir * s;
        -(v.powi(5).im.abs()) / 80.0 + lambda * v.im.abs()
    };
    let mut s_max = 2.0;
    while envelope(s_max) > -45.0 {
        s_max *= 1.3;
    }
    let mut fail = None;
    let init = (6.0 * s_max).ceil() as usize;
    let r = quad::integrate(
        |s| {
            let v = start + dir * s;
            match f(v) {
                Ok(x) => {
                    let y = x * dir;
                    [y.re, y.im]
                }
                Err(e) => {
                    fail.get_or_insert(e);
                    [0.0, 0.0]
                }
            }
        },
        0.0,
        s_max,
        init,
        [1e-15, 1e-15],
        1e-13,
        4000,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    if !r.converged {
        return Err(Error::NoConvergence(format!("Fresnel tail ray did not converge at λ = {lambda}")));
    }
    Ok((Complex64::new(r.value[0], r.value[1]), r.err[0].hypot(r.err[1])))
}

fn segment<F: FnMut(f64) -> Result<f64>>(mut f: F, lambda: f64) -> Result<(f64, f64)> {
    let mut fail = None;
    let init = ((lambda * SPLIT / PI).ceil() as usize + 4).max(8);
    let r = quad::integrate(
        |v| match f(v) {
            Ok(x) => [x],
            Err(e) => {
                fail.get_or_insert(e);
                [0.0]
            }
        },
        0.0,
        SPLIT,
        init,
        [1e-15],
        1e-13,
        4000,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    Ok((r.value[0], r.err[0]))
}

fn check_lambda(lambda: f64, lambda_max: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    if lambda > lambda_max {
        return Err(Error::UnsupportedRange(format!("Fresnel route is limited to λ ≤ {lambda_max}, got {lambda}")));
    }
    Ok(())
}

fn finish(integral: f64, err: f64) -> FnEval {
    let scale = -1.0 / (2.0 * PI * PI);
    FnEval {
        value: ScaledReal::from_f64(scale * integral),
        abs_err: scale.abs() * err,
        method: Method::Quadrature,
        warning: None,
    }
}

/// Φ₁(−λ) from the Fresnel-integral representation.
pub fn phi1_fresnel(lambda: f64) -> Result<FnEval> {
    phi1_fresnel_with(lambda, LAMBDA_MAX)
}

pub fn phi1_fresnel_with(lambda: f64, lambda_max: f64) -> Result<FnEval> {
    check_lambda(lambda, lambda_max)?;
    let (head, e1) = segment(
        |v| {
            let th = v.powi(5) / 20.0 + lambda * v;
            let (si, ci) = half_order(v)?;
            Ok(v.sqrt() * (si * th.cos() - ci * th.sin()))
        },
        lambda,
    )?;
    let (tail, e2) = ray_integral(|v| g_phase(v, 0.5, lambda), -PI / 10.0, lambda)?;
    Ok(finish(head - tail.im, e1 + e2))
}

/// Φ₂(−λ) from the Fresnel-integral representation.
pub fn phi2_fresnel(lambda: f64) -> Result<FnEval> {
    phi2_fresnel_with(lambda, LAMBDA_MAX)
}

pub fn phi2_fresnel_with(lambda: f64, lambda_max: f64) -> Result<FnEval> {
    check_lambda(lambda, lambda_max)?;
    let (head, e1) = segment(
        |v| {
            let z = v.powi(5) / 16.0;
            let th = v.powi(5) / 20.0 + lambda * v;
            let (si, ci) = half_order(v)?;
            Ok(2.0 * (z - th).sin() - v.powf(2.5) * (ci * th.cos() + si * th.sin()))
        },
        lambda,
    )?;
    let (osc, e2) = ray_integral(
        |v| {
            let i = Complex64::new(0.0, 1.0);
            Ok(2.0 * (i * (v.powi(5) / 80.0 - v * lambda)).exp())
        },
        PI / 10.0,
        lambda,
    )?;
    let (gpart, e3) = ray_integral(|v| g_phase(v, 2.5, lambda), -PI / 10.0, lambda)?;
    Ok(finish(head + osc.im - gpart.re, e1 + e2 + e3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_gamma_recurrence() {
        for &a in &[0.5, -0.5, 0.3, -1.7] {
            for &w in &[Complex64::new(0.0, 0.7), Complex64::new(0.0, 2.9), Complex64::new(0.0, 3.1), Complex64::new(1.5, 4.0), Complex64::new(0.0, 40.0)] {
                let (g0, _) = inc_gamma(a, w).unwrap();
                let (g1, _) = inc_gamma(a + 1.0, w).unwrap();
                let rhs = g0 * a + w.powf(a) * (-w).exp();
                assert!((g1 - rhs).norm() <= 1e-12 * g1.norm().max(rhs.norm()), "a = {a}, w = {w}");
            }
        }
    }

    #[test]
    fn half_order_identity_matches_quadrature() {
        // si(½, z) = ∫_z^∞ t^{−1/2} sin t dt = 2∫_{√z}^∞ sin(u²) du.
        let z = 2.0;
        let si = fresnel_si(0.5, z).unwrap().to_f64();
        let ci = fresnel_ci(0.5, z).unwrap().to_f64();
        let full = (PI / 2.0).sqrt();
        let (s0, _) = quad::integrate1(|t| (t * t).sin(), 0.0, z.sqrt(), 1e-16, 1e-15);
        let (c0, _) = quad::integrate1(|t| (t * t).cos(), 0.0, z.sqrt(), 1e-16, 1e-15);
        assert!((si - (full - 2.0 * s0)).abs() < 1e-13);
        assert!((ci - (full - 2.0 * c0)).abs() < 1e-13);
        let g = inc_gamma(0.5, Complex64::new(0.0, z)).unwrap().0;
        let rebuilt = Complex64::from_polar(1.0, PI / 4.0) * Complex64::new(ci, -si);
        assert!((g - rebuilt).norm() < 1e-10 * g.norm());
    }

    #[test]
    fn large_argument_behaviour() {
        let z = 1e6;
        assert!(fresnel_si(0.5, z).unwrap().to_f64().abs() <= 2.0 / z.sqrt());
        for z in [50.0, 200.0] {
            let ci = fresnel_ci(0.5, z).unwrap().to_f64();
            let lead = -(z as f64).powf(-0.5) * z.sin();
            assert!((ci - lead).abs() < 1.0 / z * z.powf(-0.5) * 2.0, "z = {z}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(fresnel_si(1.0, 1.0).is_err());
        assert!(fresnel_ci(0.5, 0.0).is_err());
        assert!(matches!(phi1_fresnel(7.0), Err(Error::UnsupportedRange(_))));
    }

    #[test]
    fn boundary_values_of_the_h_functions() {
        assert_eq!(h4(0.0).unwrap(), 2.0);
        assert_eq!(h3(0.0).unwrap(), 0.0);
        assert_eq!(h1(0.0).unwrap(), 0.0);
    }

    #[test]
    fn tail_rays_reproduce_a_longer_real_axis_integral() {
        // The Φ₁ integrand decays like v^{-2}; compare the rotated tail with brute force on [2, 40]
        // plus a one-term remainder estimate.
        let lambda = 1.0;
        let (ray, _) = ray_integral(|v| g_phase(v, 0.5, lambda), -PI / 10.0, lambda).unwrap();
        let (direct, _) = quad::integrate1(
            |v| {
                let th = v.powi(5) / 20.0 + lambda * v;
                let (si, ci) = half_order(v).unwrap();
                -v.sqrt() * (si * th.cos() - ci * th.sin())
            },
            2.0,
            8.0,
            1e-13,
            1e-11,
        );
        // Beyond v = 8 the integrand is below 8^{-2}·4 and oscillates fast; allow that much.
        assert!((ray.im - direct).abs() < 1e-3, "{} vs {direct}", ray.im);
    }
}
