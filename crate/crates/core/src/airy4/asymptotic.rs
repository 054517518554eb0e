//! Leading-order saddle-point forms.
//!
//! y = −λ < 0 (real saddle at λ^{1/4}), with ξ = (4/5)λ^{5/4}:
//!   Ai₄^{(p)}(−λ) ≈ (2π)^{-1/2} λ^{(2p−3)/8} cos(ξ − π/4 − pπ/2)
//!   Ãi₄^{(p)}(−λ) ≈ (−1)^p (2π)^{-1/2} λ^{(2p−3)/8} e^{ξ}
//! y > 0 (complex saddles y^{1/4}e^{iπ/4}, y^{1/4}e^{3iπ/4}), with a = (2√2/5) y^{5/4}:
//!   Ai₄^{(p)}(y) ≈ (2π)^{-1/2} y^{(2p−3)/8} e^{−a} cos(a + 3pπ/4 − π/8)
//!   Ãi₄^{(p)}(y) ≈ −(2π)^{-1/2} y^{(2p−3)/8} e^{−a} sin(a + 3pπ/4 − π/8)
//! The relative error model is |y|^{-5/8}.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use crate::scaled::ScaledReal;

#[derive(Debug, Clone, Copy)]
pub struct Leading {
    pub value: ScaledReal,
    /// Error bound, as a scaled magnitude.
    pub err: ScaledReal,
}

fn amp_ln(mag: f64, p: usize) -> f64 {
    -0.5 * (2.0 * PI).ln() + (2.0 * p as f64 - 3.0) / 8.0 * mag.ln()
}

pub fn ai(y: f64, p: usize) -> Leading {
    let pf = p as f64;
    if y < 0.0 {
        let lam = -y;
        let xi = 0.8 * lam.powf(1.25);
        let la = amp_ln(lam, p);
        let c = (xi - FRAC_PI_4 - pf * PI / 2.0).cos();
        Leading {
            value: ScaledReal::from_scaled(c, la),
            err: ScaledReal::new(1, la - 0.625 * lam.ln()),
        }
    } else {
        let a = 2.0 * std::f64::consts::SQRT_2 / 5.0 * y.powf(1.25);
        let la = amp_ln(y, p) - a;
        let c = (a + 3.0 * pf * FRAC_PI_4 - FRAC_PI_8).cos();
        Leading {
            value: ScaledReal::from_scaled(c, la),
            err: ScaledReal::new(1, la - 0.625 * y.ln()),
        }
    }
}

pub fn ai_tilde(y: f64, p: usize) -> Leading {
    let pf = p as f64;
    if y < 0.0 {
        let lam = -y;
        let xi = 0.8 * lam.powf(1.25);
        let la = amp_ln(lam, p) + xi;
        let s = if p % 2 == 0 { 1 } else { -1 };
        Leading {
            value: ScaledReal::new(s, la),
            err: ScaledReal::new(1, la - 0.625 * lam.ln()),
        }
    } else {
        let a = 2.0 * std::f64::consts::SQRT_2 / 5.0 * y.powf(1.25);
        let la = amp_ln(y, p) - a;
        let s = -(a + 3.0 * pf * FRAC_PI_4 - FRAC_PI_8).sin();
        Leading {
            value: ScaledReal::from_scaled(s, la),
            err: ScaledReal::new(1, la - 0.625 * y.ln()),
        }
    }
}
