//! Normalized eigenfunctions on the Fourier side,
//! `φₙ(y) = c₁ Ai₄(|y| − λₙ) + c₂ Ãi₄(|y| − λₙ)` (times `sgn y` for even n),
//! and their inverse cosine / sine transforms ψₙ.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy4::{self, AccuracyWarning, Airy4Config, FnEval, Jet, Method};
use crate::error::{Error, Result};
use crate::quad;
use crate::scaled::ScaledReal;
use crate::spectrum::{self, EigenvalueRecord, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaTriple {
    pub l1: ScaledReal,
    pub l2: ScaledReal,
    pub l3: ScaledReal,
}

fn triple_from_jet(j: &Jet) -> LambdaTriple {
    let a = |p: usize| j.ai[p].value;
    let t = |p: usize| j.at[p].value;
    LambdaTriple {
        l1: t(0) * a(1) - a(0) * t(1),
        l2: t(1) * a(2) - a(1) * t(2),
        l3: t(2) * a(3) - a(2) * t(3),
    }
}

pub fn lambda_triple(lambda: f64, cfg: &Airy4Config) -> Result<LambdaTriple> {
    check_lambda(lambda)?;
    Ok(triple_from_jet(&airy4::jet(-lambda, cfg)?))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("λ must be positive and finite, got {lambda}")))
    }
}

/// `(c₁, c₂)` for index `n` at the eigenvalue `lambda`.
pub fn norm_constants(n: usize, lambda: f64, cfg: &Airy4Config) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if n == 0 {
        return Err(Error::Domain("index starts at 1".into()));
    }
    let j = airy4::jet(-lambda, cfg)?;
    let lt = triple_from_jet(&j);
    let (num1, num2, den) = match Parity::of(n) {
        Parity::Odd => {
            let s = (lt.l1 * lt.l1).scale(lambda) + lt.l2 * lt.l2;
            let d = s.scale(2.0).sqrt().expect("sum of squares");
            (-j.at[1].value, j.ai[1].value, d)
        }
        Parity::Even => {
            let prod = lt.l2 * lt.l3;
            let d = prod.sqrt().ok_or_else(|| {
                Error::Inconsistency(format!("Λ₂Λ₃ = {prod} < 0 at λ = {lambda}; not an even-index eigenvalue"))
            })?;
            (j.at[2].value, -j.ai[2].value, d.scale(2.0))
        }
    };
    if den.is_zero() {
        return Err(Error::Inconsistency(format!("vanishing normalizer at λ = {lambda}")));
    }
    Ok(((num1 / den).to_f64(), (num2 / den).to_f64()))
}

/// `‖Ai₄(|·| − λ)‖₂²` from the closed-form identity.
pub fn ai4_norm_sq(lambda: f64, cfg: &Airy4Config) -> Result<f64> {
    check_lambda(lambda)?;
    let j = airy4::jet(-lambda, cfg)?;
    let a = |p: usize| j.ai[p].to_f64();
    Ok(2.0 * (lambda * a(0) * a(0) + a(2) * a(2) - 2.0 * a(1) * a(3)))
}

/// `λ + (5/(2√2) · ln(1/ε))^{4/5}`: beyond this the Fourier-side eigenfunction is below ε.
pub fn truncation_cutoff(lambda: f64, target_abs_err: f64) -> f64 {
    lambda + (5.0 / (2.0 * SQRT_2) * (1.0 / target_abs_err).ln()).powf(0.8)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub panel_width: f64,
    pub nodes: usize,
    pub target_abs_err: f64,
    pub y_max: f64,
}

impl QuadConfig {
    pub fn for_lambda(lambda: f64, target_abs_err: f64) -> Self {
        Self { panel_width: 0.25, nodes: 20, target_abs_err, y_max: truncation_cutoff(lambda, target_abs_err) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Cos,
    Sin,
}

impl Kernel {
    fn eval(self, t: f64) -> f64 {
        match self {
            Kernel::Cos => t.cos(),
            Kernel::Sin => t.sin(),
        }
    }
}

/// Values sampled on the handle's Gauss–Legendre panels.
#[derive(Debug, Clone)]
struct Table {
    /// Ai₄(y − λ) at every node.
    ai: Vec<f64>,
    /// c₂·Ãi₄(y − λ) at every node.
    ct: Vec<f64>,
    err: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EigenfunctionHandle {
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub c1: f64,
    pub c2: f64,
    /// `1/‖Ai₄(|·| − λ)‖₂`.
    pub c_norm: f64,
    /// ±1, chosen so that ψ^{(n−1)}(0) > 0.
    pub orientation: f64,
    pub quad: QuadConfig,
    cfg: Airy4Config,
    ref_nodes: Vec<f64>,
    ref_weights: Vec<f64>,
    bary: Vec<f64>,
    panels: usize,
    table: Table,
}

impl EigenfunctionHandle {
    pub fn new(rec: &EigenvalueRecord, cfg: &Airy4Config) -> Result<Self> {
        if 0.8 * rec.lambda.powf(1.25) > 650.0 {
            return Err(Error::UnsupportedRange(format!("eigenfunction tables need λ below ~230, got {}", rec.lambda)));
        }
        let quad_cfg = QuadConfig::for_lambda(rec.lambda, cfg.target_abs_err);
        let (ref_nodes, ref_weights) = quad::gauss_legendre(quad_cfg.nodes);
        let bary = quad::barycentric_weights(&ref_nodes);
        let panels = (quad_cfg.y_max / quad_cfg.panel_width).ceil() as usize;
        let c2s = ScaledReal::from_f64(rec.c2);
        let hw = 0.5 * quad_cfg.panel_width;
        let rows: Vec<Vec<(f64, f64, f64)>> = (0..panels)
            .into_par_iter()
            .map(|k| {
                let mid = (k as f64 + 0.5) * quad_cfg.panel_width;
                ref_nodes
                    .iter()
                    .map(|t| {
                        let (a, b) = airy4::pair(mid + hw * t - rec.lambda, 0, cfg)?;
                        let ct = (c2s * b.value).to_f64();
                        let err = rec.c1.abs() * a.abs_err + rec.c2.abs() * b.abs_err;
                        Ok((a.to_f64(), ct, err))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let flat: Vec<(f64, f64, f64)> = rows.into_iter().flatten().collect();
        let table = Table {
            ai: flat.iter().map(|r| r.0).collect(),
            ct: flat.iter().map(|r| r.1).collect(),
            err: flat.iter().map(|r| r.2).collect(),
        };
        let c_norm = ai4_norm_sq(rec.lambda, cfg)?.sqrt().recip();
        let mut h = Self {
            n: rec.n,
            lambda: rec.lambda,
            mu: rec.mu,
            c1: rec.c1,
            c2: rec.c2,
            c_norm,
            orientation: 1.0,
            quad: quad_cfg,
            cfg: *cfg,
            ref_nodes,
            ref_weights,
            bary,
            panels,
            table,
        };
        h.orientation = h.pick_orientation();
        Ok(h)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    fn kernel(&self) -> Kernel {
        match self.parity() {
            Parity::Odd => Kernel::Cos,
            Parity::Even => Kernel::Sin,
        }
    }

    fn node(&self, k: usize, i: usize) -> (f64, f64) {
        let w = self.quad.panel_width;
        let y = (k as f64 + 0.5) * w + 0.5 * w * self.ref_nodes[i];
        (y, 0.5 * w * self.ref_weights[i])
    }

    fn phi_table(&self) -> Vec<f64> {
        self.table.ai.iter().zip(&self.table.ct).map(|(a, t)| self.c1 * a + t).collect()
    }

    /// `∫₀^∞ y^p φ(y) dy` over the table, in the formula's sign.
    fn table_moment(&self, p: usize) -> (f64, f64) {
        let phi = self.phi_table();
        let (mut s, mut sa) = (0.0, 0.0);
        for k in 0..self.panels {
            for i in 0..self.quad.nodes {
                let (y, w) = self.node(k, i);
                let t = w * y.powi(p as i32) * phi[k * self.quad.nodes + i];
                s += t;
                sa += t.abs();
            }
        }
        (s, sa)
    }

    fn pick_orientation(&self) -> f64 {
        let p = self.n - 1;
        let (m, ma) = self.table_moment(p);
        if m.abs() > 1e-8 * ma {
            // ψ^{(p)}(0) = (−1)^{⌊p/2⌋} √(2/π) ∫ y^p φ.
            let s = if (p / 2) % 2 == 0 { 1.0 } else { -1.0 };
            (s * m).signum()
        } else {
            self.c1.signum()
        }
    }

    /// Fourier-side value at y.
    pub fn phi_hat(&self, y: f64) -> Result<f64> {
        Ok(self.phi_hat_eval(y, 0)?.0)
    }

    /// Derivative `p` (one-sided at 0) of φ with its error, by direct evaluation.
    pub fn phi_hat_eval(&self, y: f64, p: usize) -> Result<(f64, f64)> {
        crate::error::check_finite(y, "y")?;
        if self.parity() == Parity::Even && y == 0.0 && p == 0 {
            return Ok((0.0, 0.0));
        }
        let (a, b) = airy4::pair(y.abs() - self.lambda, p, &self.cfg)?;
        let ct = (ScaledReal::from_f64(self.c2) * b.value).to_f64();
        let v = self.c1 * a.to_f64() + ct;
        let e = self.c1.abs() * a.abs_err + self.c2.abs() * b.abs_err;
        // d^p/dy^p of f(|y|) picks up sgn(y)^p; even n adds one more sgn.
        let mut s = if y < 0.0 && p % 2 == 1 { -1.0 } else { 1.0 };
        if self.parity() == Parity::Even && y < 0.0 {
            s = -s;
        }
        Ok((self.orientation * s * v, e))
    }

    /// `φ⁗(y) + (|y| − λ)φ(y)` with the fourth derivative evaluated directly, for y > 0.
    pub fn fourier_ode_residual(&self, y: f64) -> Result<(f64, f64)> {
        if !(y > 0.0) {
            return Err(Error::Domain("ODE residual is checked on y > 0".into()));
        }
        let (f4, e4) = self.phi_hat_eval(y, 4)?;
        let (f0, e0) = self.phi_hat_eval(y, 0)?;
        let z = y - self.lambda;
        Ok((f4 + z * f0, e4 + z.abs() * e0))
    }

    /// `g^{(p)}(0⁺)` for p < count, where `g(y) = c₁Ai₄(y − λ) + c₂Ãi₄(y − λ)`, oriented.
    pub fn origin_derivs(&self, count: usize) -> Result<Vec<(f64, f64)>> {
        let j = airy4::jet(-self.lambda, &self.cfg)?;
        let c2 = ScaledReal::from_f64(self.c2);
        let mut out: Vec<(f64, f64)> = (0..4)
            .map(|p| {
                let v = self.c1 * j.ai[p].to_f64() + (c2 * j.at[p].value).to_f64();
                let e = self.c1.abs() * j.ai[p].abs_err + self.c2.abs() * j.at[p].abs_err;
                (self.orientation * v, e)
            })
            .collect();
        for p in 4..count {
            // g^{(p)}(0) = λ g^{(p−4)}(0) − (p−4) g^{(p−5)}(0)
            let (a, ea) = out[p - 4];
            let (mut v, mut e) = (self.lambda * a, self.lambda * ea);
            if p >= 5 {
                let k = (p - 4) as f64;
                v -= k * out[p - 5].0;
                e += k * out[p - 5].1;
            }
            out.push((v, e + f64::EPSILON * v.abs()));
        }
        out.truncate(count);
        Ok(out)
    }

    /// The two boundary values that must vanish: (φ′, φ‴)(0⁺) for odd n, (φ, φ″)(0⁺) for even n.
    pub fn boundary_values(&self) -> Result<[f64; 2]> {
        let d = self.origin_derivs(4)?;
        Ok(match self.parity() {
            Parity::Odd => [d[1].0, d[3].0],
            Parity::Even => [d[0].0, d[2].0],
        })
    }

    /// `∫_ℝ φ² dy` over the table.
    pub fn norm_sq(&self) -> f64 {
        let phi = self.phi_table();
        self.weighted_sum(|idx, _| phi[idx] * phi[idx]) * 2.0
    }

    /// `∫_ℝ φₘ φₙ dy` (equal to ⟨ψₘ, ψₙ⟩).
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.quad.panel_width != other.quad.panel_width || self.quad.nodes != other.quad.nodes {
            return Err(Error::Domain("handles use different panel layouts".into()));
        }
        if self.parity() != other.parity() {
            return Ok(0.0);
        }
        let (a, b) = (self.phi_table(), other.phi_table());
        let m = self.panels.min(other.panels) * self.quad.nodes;
        let mut s = 0.0;
        for idx in 0..m {
            let (_, w) = self.node(idx / self.quad.nodes, idx % self.quad.nodes);
            s += w * a[idx] * b[idx];
        }
        Ok(2.0 * s * self.orientation * other.orientation)
    }

    fn weighted_sum<F: Fn(usize, f64) -> f64>(&self, f: F) -> f64 {
        let mut s = 0.0;
        for k in 0..self.panels {
            for i in 0..self.quad.nodes {
                let (y, w) = self.node(k, i);
                s += w * f(k * self.quad.nodes + i, y);
            }
        }
        s
    }

    /// `√(2/π) ∫₀^{Y_max} K(xy) v(y) dy` for tabulated `v`; returns (value, error).
    fn transform(&self, vals: &[f64], errs: Option<&[f64]>, x: f64, kernel: Kernel) -> (f64, f64) {
        let m = self.quad.nodes;
        let w = self.quad.panel_width;
        // Keep at most ~3 radians of the kernel per sub-panel.
        let sub = ((x.abs() * w / 3.0).ceil() as usize).max(1);
        let (mut s, mut sa, mut se) = (0.0, 0.0, 0.0);
        for k in 0..self.panels {
            let pv = &vals[k * m..(k + 1) * m];
            let a = k as f64 * w;
            if sub == 1 {
                for i in 0..m {
                    let (y, wt) = self.node(k, i);
                    let t = wt * kernel.eval(x * y) * pv[i];
                    s += t;
                    sa += t.abs();
                    if let Some(e) = errs {
                        se += wt * e[k * m + i];
                    }
                }
            } else {
                let h = w / sub as f64;
                for j in 0..sub {
                    let mid = a + (j as f64 + 0.5) * h;
                    for i in 0..m {
                        let y = mid + 0.5 * h * self.ref_nodes[i];
                        let wt = 0.5 * h * self.ref_weights[i];
                        let tref = (y - (a + 0.5 * w)) / (0.5 * w);
                        let v = quad::barycentric_eval(&self.ref_nodes, &self.bary, pv, tref);
                        let t = wt * kernel.eval(x * y) * v;
                        s += t;
                        sa += t.abs();
                    }
                }
                if let Some(e) = errs {
                    for i in 0..m {
                        let (_, wt) = self.node(k, i);
                        se += wt * e[k * m + i];
                    }
                }
            }
        }
        let scale = FRAC_2_PI.sqrt();
        let last = vals.last().map_or(0.0, |v| v.abs());
        let round = 16.0 * f64::EPSILON * sa * (1.0 + (x.abs() * self.quad.y_max).log2().max(0.0));
        (scale * s, scale * (se + round + last))
    }

    /// Position-space eigenfunction by quadrature.
    pub fn psi(&self, x: f64) -> Result<FnEval> {
        crate::error::check_finite(x, "x")?;
        let phi = self.phi_table();
        let (v, e) = self.transform(&phi, Some(&self.table.err), x.abs(), self.kernel());
        let sign = if self.parity() == Parity::Even && x < 0.0 { -1.0 } else { 1.0 };
        let value = ScaledReal::from_f64(self.orientation * sign * v);
        let warning = (e > self.quad.target_abs_err.max(1e-12) * 10.0).then_some(AccuracyWarning::TargetMissed);
        Ok(FnEval { value, abs_err: e, method: Method::Quadrature, warning })
    }

    /// Large-|x| expansion with `terms` terms counted from the leading non-vanishing one.
    pub fn psi_tail_series(&self, x: f64, terms: usize) -> Result<FnEval> {
        if terms < 2 {
            return Err(Error::Domain("the tail series needs at least 2 terms".into()));
        }
        crate::error::check_finite(x, "x")?;
        if x.abs() < 1.0 {
            return Err(Error::Domain("the tail series is for large |x|".into()));
        }
        let ax = x.abs();
        let (r0, odd) = match self.parity() {
            Parity::Odd => (2, true),
            Parity::Even => (3, false),
        };
        let r_last = r0 + terms;
        let d = self.origin_derivs(2 * r_last + 2)?;
        let term = |r: usize| -> (f64, f64) {
            let (g, e) = if odd { d[2 * r + 1] } else { d[2 * r] };
            let pow = if odd { 2 * r + 2 } else { 2 * r + 1 };
            let s = match (odd, r % 2) {
                (true, 0) => -1.0,
                (true, _) => 1.0,
                (false, 0) => 1.0,
                (false, _) => -1.0,
            };
            let xp = ax.powi(pow as i32);
            (s * g / xp, e / xp)
        };
        let (mut v, mut e) = (0.0, 0.0);
        for r in 0..r_last {
            let (t, te) = term(r);
            v += t;
            e += te;
        }
        e += term(r_last).0.abs();
        let scale = FRAC_2_PI.sqrt();
        let sign = if self.parity() == Parity::Even && x < 0.0 { -1.0 } else { 1.0 };
        let warning = (scale * e > self.quad.target_abs_err).then_some(AccuracyWarning::SeriesTruncated);
        Ok(FnEval {
            value: ScaledReal::from_f64(sign * scale * v),
            abs_err: scale * e,
            method: Method::Asymptotic,
            warning,
        })
    }

    /// Coefficient `a_p` of `ψ(x) = Σ (−1)^r a_{2r} x^{2r}` (odd n) or `Σ (−1)^r a_{2r+1} x^{2r+1}` (even n).
    pub fn taylor_coeff(&self, p: usize) -> Result<f64> {
        let want_even = self.parity() == Parity::Odd;
        if (p % 2 == 0) != want_even {
            return Err(Error::Domain(format!("order {p} has the wrong parity for n = {}", self.n)));
        }
        let (m, _) = self.table_moment(p);
        let start = self.panels as f64 * self.quad.panel_width;
        let eps = self.quad.target_abs_err;
        let mut end = start;
        for _ in 0..6 {
            end = self.lambda + (5.0 / (2.0 * SQRT_2) * ((1.0 / eps).ln() + p as f64 * end.ln())).powf(0.8);
        }
        let mut extra = 0.0;
        if end > start {
            let mut fail = None;
            let (v, _) = quad::integrate1(
                |y| match self.phi_hat_eval(y, 0) {
                    Ok((f, _)) => self.orientation * f * y.powi(p as i32),
                    Err(e) => {
                        fail.get_or_insert(e);
                        0.0
                    }
                },
                start,
                end,
                eps,
                1e-12,
            );
            if let Some(e) = fail {
                return Err(e);
            }
            extra = v * self.orientation;
        }
        let fact: f64 = (1..=p).map(|k| k as f64).product();
        Ok(self.orientation * FRAC_2_PI.sqrt() * (m + extra) / fact)
    }

    /// `c₁ Ai₄(|y| − μ)` (sup-norm approximant).
    pub fn chi_mu(&self, y: f64) -> Result<f64> {
        self.chi(y, self.mu, self.c1)
    }

    /// `Cₙ Ai₄(|y| − λ)` with `Cₙ = 1/‖Ai₄(|·| − λ)‖₂` (L² approximant).
    pub fn chi_lambda(&self, y: f64) -> Result<f64> {
        self.chi(y, self.lambda, self.c_norm)
    }

    fn chi(&self, y: f64, shift: f64, scale: f64) -> Result<f64> {
        let a = airy4::ai4(y.abs() - shift, &self.cfg)?.to_f64();
        let s = match self.parity() {
            Parity::Odd => 1.0,
            Parity::Even => y.signum() * if y == 0.0 { 0.0 } else { 1.0 },
        };
        Ok(self.orientation * s * scale * a)
    }

    /// Bounds and measured distances between ψ and the inverse transforms of both approximants.
    pub fn approx_error_report(&self) -> Result<ApproxErrorReport> {
        let m = self.quad.nodes;
        let ai_mu: Vec<f64> = (0..self.panels * m)
            .into_par_iter()
            .map(|idx| {
                let (y, _) = self.node(idx / m, idx % m);
                airy4::ai4(y - self.mu, &self.cfg).map(|e| e.to_f64())
            })
            .collect::<Result<_>>()?;
        let phi = self.phi_table();
        let d_mu: Vec<f64> = phi.iter().zip(&ai_mu).map(|(p, a)| p - self.c1 * a).collect();
        let d_lam: Vec<f64> = phi.iter().zip(&self.table.ai).map(|(p, a)| p - self.c_norm * a).collect();
        let l2 = |d: &[f64]| (2.0 * self.weighted_sum(|i, _| d[i] * d[i])).max(0.0).sqrt();
        let kernel = self.kernel();
        let sup = |d: &[f64]| -> f64 {
            (0..=400)
                .into_par_iter()
                .map(|i| self.transform(d, None, 0.05 * i as f64, kernel).0.abs())
                .reduce(|| 0.0, f64::max)
        };
        let rec_gamma = (self.c1 * self.c2.abs()).sqrt();
        Ok(ApproxErrorReport {
            n: self.n,
            sup_bound: sup_bound_prefactor() * self.c2.abs(),
            sup_est: sup(&d_mu),
            l2_bound: l2_bound_prefactor() * self.beta(),
            l2_est: l2(&d_lam),
            sup_est_lambda_shift: sup(&d_lam),
            l2_est_mu_shift: l2(&d_mu),
            gamma: rec_gamma,
        })
    }

    /// `n^{1/5} Cₙ √(|c₂|/c₁)`.
    pub fn beta(&self) -> f64 {
        (self.n as f64).powf(0.2) * self.c_norm * (self.c2.abs() / self.c1).sqrt()
    }
}

/// `2^{9/4}/√(5π)`.
pub fn sup_bound_prefactor() -> f64 {
    2f64.powf(2.25) / (5.0 * PI).sqrt()
}

/// `2^{33/20} 3^{1/5} 5^{1/10} π^{−13/10} √Γ(4/5)`.
pub fn l2_bound_prefactor() -> f64 {
    2f64.powf(1.65) * 3f64.powf(0.2) * 5f64.powf(0.1) / PI.powf(1.3) * statrs::function::gamma::gamma(0.8).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxErrorReport {
    pub n: usize,
    pub sup_bound: f64,
    /// Sup over x ∈ [0, 20] of the difference for the μ-shifted approximant.
    pub sup_est: f64,
    pub l2_bound: f64,
    /// L² difference for the λ-shifted approximant.
    pub l2_est: f64,
    pub sup_est_lambda_shift: f64,
    pub l2_est_mu_shift: f64,
    pub gamma: f64,
}

/// Convenience: solve for the n-th eigenvalue and build its handle.
pub fn handle(n: usize, cfg: &Airy4Config) -> Result<EigenfunctionHandle> {
    let rec = spectrum::eigenvalue(n, 1e-13, cfg)?;
    EigenfunctionHandle::new(&rec, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn cfg() -> Airy4Config {
        Airy4Config::default()
    }

    fn handles() -> &'static Vec<EigenfunctionHandle> {
        static H: OnceLock<Vec<EigenfunctionHandle>> = OnceLock::new();
        H.get_or_init(|| (1..=4).map(|n| handle(n, &cfg()).unwrap()).collect())
    }

    #[test]
    fn constants_of_the_ground_state() {
        let (c1, c2) = norm_constants(1, 0.97842694525798, &cfg()).unwrap();
        assert!((c1 - 1.2227272).abs() < 1e-6, "{c1}");
        assert!((c2 - 0.107644).abs() < 1e-5, "{c2}");
        let (c1, c2) = norm_constants(2, 2.3581951110138, &cfg()).unwrap();
        assert!((c1 - 1.1442097).abs() < 1e-6, "{c1}");
        assert!((c2 + 0.0137822).abs() < 1e-6, "{c2}");
    }

    #[test]
    fn odd_constants_satisfy_the_boundary_relation() {
        let lam = 4.6760301852013;
        let (c1, c2) = norm_constants(3, 3.5576290173049, &cfg()).unwrap();
        let j = airy4::jet(-3.5576290173049, &cfg()).unwrap();
        let r = c1 * j.ai[1].to_f64() + c2 * j.at[1].to_f64();
        assert!(r.abs() < 1e-12);
        assert!(norm_constants(4, lam, &cfg()).is_ok());
    }

    #[test]
    fn norm_identity_matches_quadrature() {
        for lam in [1.0, 3.0, 5.0] {
            let closed = ai4_norm_sq(lam, &cfg()).unwrap();
            let (direct, _) = quad::integrate1(|z| airy4::ai4(z, &cfg()).unwrap().to_f64().powi(2), -lam, 30.0, 1e-14, 1e-13);
            assert!((closed - 2.0 * direct).abs() < 1e-8, "λ = {lam}: {closed} vs {}", 2.0 * direct);
        }
    }

    #[test]
    fn fourier_side_is_normalized_with_boundary_conditions() {
        for h in handles() {
            assert!((h.norm_sq() - 1.0).abs() < 1e-8, "n = {}: {}", h.n, h.norm_sq());
            for b in h.boundary_values().unwrap() {
                assert!(b.abs() < 1e-8, "n = {}: {b}", h.n);
            }
        }
        assert_eq!(handles()[1].phi_hat(0.0).unwrap(), 0.0);
        let h = &handles()[1];
        assert_eq!(h.phi_hat(1.3).unwrap(), -h.phi_hat(-1.3).unwrap());
    }

    #[test]
    fn sign_convention() {
        let h = handles();
        assert!(h[0].psi(0.0).unwrap().to_f64() > 0.0);
        assert!(h[1].psi(0.01).unwrap().to_f64() > 0.0);
        assert!(h[0].taylor_coeff(0).unwrap() > 0.0);
        assert!(h[1].taylor_coeff(1).unwrap() > 0.0);
        assert!(h[0].taylor_coeff(1).is_err());
    }

    #[test]
    fn taylor_series_reproduces_psi_near_origin() {
        let h = &handles()[0];
        let x: f64 = 0.5;
        let mut s = 0.0;
        for r in 0..12 {
            s += (-1f64).powi(r as i32) * h.taylor_coeff(2 * r).unwrap() * x.powi(2 * r as i32);
        }
        let p = h.psi(x).unwrap().to_f64();
        assert!((s - p).abs() < 1e-9, "{s} vs {p}");
        assert!((h.taylor_coeff(0).unwrap() - h.psi(0.0).unwrap().to_f64()).abs() < 1e-12);
    }

    #[test]
    fn tail_series_matches_quadrature() {
        for h in &handles()[..2] {
            let q = h.psi(20.0).unwrap();
            let t = h.psi_tail_series(20.0, 4).unwrap();
            let d = (q.to_f64() - t.to_f64()).abs();
            assert!(d <= 2.0 * (q.abs_err + t.abs_err) + 1e-14, "n = {}: {} vs {}", h.n, q.to_f64(), t.to_f64());
        }
        assert!(handles()[0].psi_tail_series(20.0, 1).is_err());
    }

    #[test]
    fn orthonormal_on_the_fourier_side() {
        let h = handles();
        for a in h {
            for b in h {
                let want = if a.n == b.n { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ode_residual_on_the_fourier_side() {
        let h = &handles()[2];
        for i in 1..40 {
            let (r, e) = h.fourier_ode_residual(0.3 * i as f64).unwrap();
            assert!(r.abs() <= 10.0 * e + 1e-12, "{r} {e}");
        }
    }

    #[test]
    fn constants() {
        assert!((sup_bound_prefactor() - 1.2002).abs() < 1e-4);
        assert!((l2_bound_prefactor() - 1.1187814304806158).abs() < 1e-12);
    }
}
