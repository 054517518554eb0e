//! Absolutely convergent contour integrals for the far field.
//!
//! * `W^{(p)}(y) = (1/π) ∫ (it)^p e^{i(t⁵/5 + yt)} dt` along `[0, t₀]` and then the
//!   ray `t₀ + s·e^{iπ/10}`, with `t₀ = (-y)^{1/4}` for y < 0 (the real stationary
//!   point) and `t₀ = 0` otherwise.
//! * `L^{(p)}(y) = (1/π) ∫ (−t)^p e^{−yt − t⁵/5} dt` with the peak value
//!   `e^{(4/5)|y|^{5/4}}` factored out for y < 0.
//! * For y > 0 both functions come from one line `Im u = κ = y^{1/4}/√2` through the
//!   complex saddle points, plus a piece of the imaginary axis for the companion
//!   function. Nothing cancels there, so tiny values keep their relative accuracy.

use std::f64::consts::{FRAC_1_PI, PI};

use num_complex::Complex64;

use crate::quad;

/// Five consecutive derivative orders `p0 .. p0 + 4`.
pub const ORDERS: usize = 5;

#[derive(Debug, Clone, Copy)]
pub struct ContourOut {
    pub value: [Complex64; ORDERS],
    pub err: [f64; ORDERS],
    /// Values are `value · e^{shift}`.
    pub shift: f64,
    pub converged: bool,
}

const CUTOFF: f64 = 90.0;
const REL_TOL: f64 = 1e-15;

fn ipow(z: Complex64, p: usize) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    for _ in 0..p {
        r *= z;
    }
    r
}

fn max_pieces(init: usize) -> usize {
    (init * 8).max(400)
}

/// `W^{(p)}(y)` for `p = p0 .. p0+4`.
pub fn w_derivs(y: f64, p0: usize) -> ContourOut {
    let t0 = if y < 0.0 { (-y).powf(0.25) } else { 0.0 };
    let mut value = [Complex64::new(0.0, 0.0); ORDERS];
    let mut err = [0.0; ORDERS];
    let mut converged = true;

    if t0 > 0.0 {
        // Phase rate is at most |y| on [0, t₀]: keep pieces below ~π radians.
        let init = ((-y) * t0 / PI).ceil() as usize + 2;
        let mut theta_max: f64 = 0.0;
        let r = quad::integrate(
            |t| {
                let theta = t * (t.powi(4) / 5.0 + y);
                theta_max = theta_max.max(theta.abs());
                let e = Complex64::from_polar(1.0, theta);
                let it = Complex64::new(0.0, t);
                let mut out = [0.0; 2 * ORDERS];
                let mut f = ipow(it, p0) * e;
                for j in 0..ORDERS {
                    out[2 * j] = f.re;
                    out[2 * j + 1] = f.im;
                    f *= it;
                }
                out
            },
            0.0,
            t0,
            init,
            [0.0; 2 * ORDERS],
            REL_TOL,
            max_pieces(init),
        );
        converged &= r.converged;
        for j in 0..ORDERS {
            value[j] += Complex64::new(r.value[2 * j], r.value[2 * j + 1]);
            // Rounding of the phase argument itself.
            let phase = f64::EPSILON * theta_max * (r.abs_integral[2 * j] + r.abs_integral[2 * j + 1]);
            err[j] += r.err[2 * j].hypot(r.err[2 * j + 1]) + phase;
        }
    }

    let dir = Complex64::from_polar(1.0, PI / 10.0);
    let g = |s: f64| -> Complex64 {
        let t = Complex64::new(t0, 0.0) + dir * s;
        Complex64::new(0.0, 1.0) * (ipow(t, 5) / 5.0 + t * y)
    };
    let pmax = (p0 + ORDERS) as f64;
    let mut s_max = 1.0;
    while g(s_max).re + pmax * (t0 + s_max).ln().max(0.0) > -CUTOFF {
        s_max *= 1.5;
    }
    let init = (4.0 * s_max).ceil() as usize + 4;
    let r = quad::integrate(
        |s| {
            let t = Complex64::new(t0, 0.0) + dir * s;
            let it = Complex64::new(0.0, 1.0) * t;
            let mut f = ipow(it, p0) * g(s).exp() * dir;
            let mut out = [0.0; 2 * ORDERS];
            for j in 0..ORDERS {
                out[2 * j] = f.re;
                out[2 * j + 1] = f.im;
                f *= it;
            }
            out
        },
        0.0,
        s_max,
        init,
        [0.0; 2 * ORDERS],
        REL_TOL,
        max_pieces(init),
    );
    converged &= r.converged;
    for j in 0..ORDERS {
        value[j] += Complex64::new(r.value[2 * j], r.value[2 * j + 1]);
        err[j] += r.err[2 * j].hypot(r.err[2 * j + 1]);
        value[j] *= FRAC_1_PI;
        err[j] *= FRAC_1_PI;
    }
    ContourOut { value, err, shift: 0.0, converged }
}

/// `L^{(p)}(y)` for `p = p0 .. p0+4`; real parts only.
pub fn laplace_derivs(y: f64, p0: usize) -> ContourOut {
    let (t0, shift) = if y < 0.0 {
        let lam = -y;
        (lam.powf(0.25), 0.8 * lam.powf(1.25))
    } else {
        (0.0, 0.0)
    };
    let expo = |t: f64| -y * t - t.powi(5) / 5.0 - shift;
    let integrand = |t: f64| {
        let mut f = (-t).powi(p0 as i32) * expo(t).exp();
        let mut out = [0.0; ORDERS];
        for o in out.iter_mut() {
            *o = f;
            f *= -t;
        }
        out
    };
    let pmax = (p0 + ORDERS) as f64;
    let mut t_max = t0 + 1.0;
    while expo(t_max) + pmax * t_max.ln().max(0.0) > -CUTOFF {
        t_max = t0 + 1.5 * (t_max - t0);
    }
    let mut value = [Complex64::new(0.0, 0.0); ORDERS];
    let mut err = [0.0; ORDERS];
    let mut converged = true;
    let mut add = |a: f64, b: f64| {
        if b <= a {
            return;
        }
        let init = (2.0 * (b - a) * (1.0 + t0.powf(1.5))).ceil() as usize + 2;
        let r = quad::integrate(integrand, a, b, init, [0.0; ORDERS], REL_TOL, max_pieces(init));
        converged &= r.converged;
        for j in 0..ORDERS {
            value[j].re += r.value[j] * FRAC_1_PI;
            err[j] += r.err[j] * FRAC_1_PI;
        }
    };
    add(0.0, t0);
    add(t0, t_max);
    ContourOut { value, err, shift, converged }
}

/// For y > 0: `value[j] = Ai₄^{(p)}(y) + i·Ãi₄^{(p)}(y)` (scaled by `e^{shift}`).
pub fn saddle_line(y: f64, p0: usize) -> ContourOut {
    assert!(y > 0.0);
    let kappa = y.powf(0.25) / std::f64::consts::SQRT_2;
    // Re G at the saddle points.
    let shift = -3.2 * kappa.powi(5);
    let i = Complex64::new(0.0, 1.0);
    let pmax = (p0 + ORDERS) as f64;

    // Relative envelope along the line is e^{-κ (s² − κ²)²}.
    let s_max = (kappa * kappa + ((CUTOFF + 5.0 * pmax) / kappa).sqrt()).sqrt() + 1.0;
    let init = (s_max * (1.0 + 2.0 * kappa.powf(1.5))).ceil() as usize + 4;
    let r = quad::integrate(
        |s| {
            let u = Complex64::new(s, kappa);
            let g = i * (ipow(u, 5) / 5.0 + u * y) - shift;
            let iu = i * u;
            let mut f = ipow(iu, p0) * g.exp();
            let mut out = [0.0; 2 * ORDERS];
            for j in 0..ORDERS {
                out[2 * j] = f.re;
                out[2 * j + 1] = f.im;
                f *= iu;
            }
            out
        },
        0.0,
        s_max,
        init,
        [0.0; 2 * ORDERS],
        REL_TOL,
        max_pieces(init),
    );
    let mut converged = r.converged;

    let expo = |tau: f64| -tau.powi(5) / 5.0 - y * tau - shift;
    let mut t_max = kappa + 1.0;
    while expo(t_max) + pmax * t_max.ln().max(0.0) > -CUTOFF {
        t_max = kappa + 1.5 * (t_max - kappa);
    }
    let init_v = (4.0 * (t_max - kappa)).ceil() as usize + 2;
    let v = quad::integrate(
        |tau| {
            let mut f = (-tau).powi(p0 as i32) * expo(tau).exp();
            let mut out = [0.0; ORDERS];
            for o in out.iter_mut() {
                *o = f;
                f *= -tau;
            }
            out
        },
        kappa,
        t_max,
        init_v,
        [0.0; ORDERS],
        REL_TOL,
        max_pieces(init_v),
    );
    converged &= v.converged;

    let mut value = [Complex64::new(0.0, 0.0); ORDERS];
    let mut err = [0.0; ORDERS];
    for j in 0..ORDERS {
        let ai = r.value[2 * j];
        let at = -r.value[2 * j + 1] + v.value[j];
        value[j] = Complex64::new(ai, at) * FRAC_1_PI;
        err[j] = (r.err[2 * j].max(r.err[2 * j + 1]) + v.err[j]) * FRAC_1_PI;
    }
    ContourOut { value, err, shift, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_matches_reference_values() {
        // 30-digit series evaluations.
        let cases = [
            (-5.0, 0.0941089314002826, 0.132046956057579),
            (-2.0, 0.179641792062532, -0.406789125885563),
            (1.0, 0.192196874235692, 0.239273857933384),
            (3.0, -0.0061397988920864, 0.128806892149089),
        ];
        for (y, re, im) in cases {
            let w = w_derivs(y, 0);
            assert!(w.converged);
            assert!((w.value[0].re - re).abs() < 1e-13, "y = {y}: {}", w.value[0].re);
            assert!((w.value[0].im - im).abs() < 1e-13, "y = {y}: {}", w.value[0].im);
        }
    }

    #[test]
    fn laplace_at_origin() {
        let l = laplace_derivs(0.0, 0);
        assert!((l.value[0].re - 0.403242809556463).abs() < 1e-14);
        assert!(l.value[1].re < 0.0);
    }

    #[test]
    fn saddle_line_matches_series_at_three() {
        let s = saddle_line(3.0, 0);
        let ai = s.value[0].re * s.shift.exp();
        assert!((ai + 0.0061397988920864).abs() < 1e-15, "{ai}");
        let l = laplace_derivs(3.0, 0).value[0].re;
        let w = w_derivs(3.0, 0).value[0].im;
        let at = s.value[0].im * s.shift.exp();
        assert!((at - (l - w)).abs() < 1e-13, "{at} vs {}", l - w);
    }
}
