//! Gauss–Legendre rules and a vector-valued adaptive Gauss–Kronrod integrator.

use std::f64::consts::PI;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534339129920,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if m == 1 {
            z = 0.0;
            dp = 1.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// Barycentric weights for interpolation through `nodes`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    w.iter_mut().for_each(|v| *v /= scale);
    w
}

/// Second-form barycentric interpolation.
pub fn barycentric_eval(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xj, &wj), &fj) in nodes.iter().zip(weights).zip(values) {
        let d = x - xj;
        if d == 0.0 {
            return fj;
        }
        let t = wj / d;
        num += t * fj;
        den += t;
    }
    num / den
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const M: usize> {
    pub value: [f64; M],
    /// Estimated absolute error, per component.
    pub err: [f64; M],
    /// Integral of |f|, per component (rounding scale).
    pub abs_integral: [f64; M],
    pub converged: bool,
    pub evals: usize,
}

#[derive(Clone, Copy)]
struct Piece<const M: usize> {
    a: f64,
    b: f64,
    val: [f64; M],
    err: [f64; M],
    absv: [f64; M],
}

fn gk21<const M: usize, F: FnMut(f64) -> [f64; M]>(f: &mut F, a: f64, b: f64) -> Piece<M> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; M];
    let mut g = [0.0; M];
    let mut absv = [0.0; M];
    let fc = f(c);
    for i in 0..M {
        k[i] = WGK[10] * fc[i];
        absv[i] = WGK[10] * fc[i].abs();
    }
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for i in 0..M {
            k[i] += WGK[j] * (f1[i] + f2[i]);
            absv[i] += WGK[j] * (f1[i].abs() + f2[i].abs());
            if j % 2 == 1 {
                g[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
    }
    let mut val = [0.0; M];
    let mut err = [0.0; M];
    for i in 0..M {
        val[i] = k[i] * h;
        err[i] = ((k[i] - g[i]) * h).abs();
        absv[i] *= h.abs();
    }
    Piece { a, b, val, err, absv }
}

/// Adaptive Gauss–Kronrod (10/21) on [a, b], with initial split into `init` pieces.
/// A component is converged when its error is below `max(abs_tol[i], rel_tol·|I_i|)`.
pub fn integrate<const M: usize, F: FnMut(f64) -> [f64; M]>(
    mut f: F,
    a: f64,
    b: f64,
    init: usize,
    abs_tol: [f64; M],
    rel_tol: f64,
    max_pieces: usize,
) -> QuadResult<M> {
    let init = init.max(1);
    let mut pieces: Vec<Piece<M>> = (0..init)
        .map(|j| {
            let lo = a + (b - a) * j as f64 / init as f64;
            let hi = if j + 1 == init { b } else { a + (b - a) * (j + 1) as f64 / init as f64 };
            gk21(&mut f, lo, hi)
        })
        .collect();
    let mut evals = 21 * init;
    let eps = f64::EPSILON;
    loop {
        let mut tot = [0.0; M];
        let mut tot_err = [0.0; M];
        let mut tot_abs = [0.0; M];
        for p in &pieces {
            for i in 0..M {
                tot[i] += p.val[i];
                tot_err[i] += p.err[i];
                tot_abs[i] += p.absv[i];
            }
        }
        let target: [f64; M] =
            std::array::from_fn(|i| abs_tol[i].max(rel_tol * tot[i].abs()).max(20.0 * eps * tot_abs[i]));
        let ok = (0..M).all(|i| tot_err[i] <= target[i]);
        if ok || pieces.len() >= max_pieces {
            let err = std::array::from_fn(|i| tot_err[i] + eps * tot_abs[i]);
            return QuadResult { value: tot, err, abs_integral: tot_abs, converged: ok, evals };
        }
        // Split the piece with the worst error relative to its component targets.
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let r = (0..M).map(|i| p.err[i] / target[i].max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
                (j, r)
            })
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        pieces.push(gk21(&mut f, p.a, mid));
        pieces.push(gk21(&mut f, mid, p.b));
        evals += 42;
    }
}

/// Scalar convenience wrapper.
pub fn integrate1<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let r = integrate(|x| [f(x)], a, b, 1, [abs_tol], rel_tol, 4000);
    (r.value[0], r.err[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for m in [1, 2, 5, 20, 31] {
            let (x, w) = gauss_legendre(m);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "m = {m}");
            let deg = 2 * m - 2;
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn kronrod_handles_oscillation() {
        let (v, e) = integrate1(|x| (50.0 * x).cos(), 0.0, 3.0, 1e-14, 0.0);
        let exact = (150.0f64).sin() / 50.0;
        assert!((v - exact).abs() < 1e-13);
        assert!(e < 1e-12);
    }

    #[test]
    fn barycentric_is_exact_for_low_degree() {
        let (x, _) = gauss_legendre(12);
        let w = barycentric_weights(&x);
        let vals: Vec<f64> = x.iter().map(|t| t.powi(7) - 2.0 * t).collect();
        let p = barycentric_eval(&x, &w, &vals, 0.3217);
        assert!((p - (0.3217f64.powi(7) - 2.0 * 0.3217)).abs() < 1e-14);
    }
}
