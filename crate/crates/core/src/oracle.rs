//! Brute-force check: the periodic Fourier multiplier `|k|` plus `x⁴` on a uniform grid of
//! `[−L, L)`, diagonalized densely (Householder tridiagonalization, implicit QL).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the dense matrix storage.
pub const DEFAULT_MAX_BYTES: usize = 1 << 30;

#[derive(Debug, Clone)]
pub struct Discretization {
    pub half_width: f64,
    pub points: usize,
    /// Grid `x_j = −L + j·2L/N`.
    pub x: Vec<f64>,
    /// Row-major `N × N`.
    pub matrix: Vec<f64>,
}

impl Discretization {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.points + j]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.points;
        (0..n).map(|i| self.matrix[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Largest relative asymmetry `|A_ij − A_ji| / max|A|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.points;
        let scale = self.matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut d = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                d = d.max((self.entry(i, j) - self.entry(j, i)).abs());
            }
        }
        d / scale
    }
}

pub fn discretize(half_width: f64, points: usize) -> Result<Discretization> {
    discretize_with_budget(half_width, points, DEFAULT_MAX_BYTES)
}

pub fn discretize_with_budget(half_width: f64, points: usize, max_bytes: usize) -> Result<Discretization> {
    if !points.is_power_of_two() || points < 4 {
        return Err(Error::Domain(format!("grid size must be a power of two ≥ 4, got {points}")));
    }
    build(half_width, points, max_bytes)
}

fn build(half_width: f64, points: usize, max_bytes: usize) -> Result<Discretization> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::Domain(format!("box half-width must be positive, got {half_width}")));
    }
    if points % 2 != 0 {
        return Err(Error::Domain("grid size must be even".into()));
    }
    let bytes = points.saturating_mul(points).saturating_mul(8);
    if bytes > max_bytes {
        let mut max_feasible = 4;
        while (2 * max_feasible) * (2 * max_feasible) * 8 <= max_bytes {
            max_feasible *= 2;
        }
        return Err(Error::MemoryBudget { requested: points, max_feasible });
    }
    let n = points;
    let h = 2.0 * half_width / n as f64;
    let x: Vec<f64> = (0..n).map(|j| -half_width + j as f64 * h).collect();
    let half = (n / 2) as i64;
    // Circulant first column: (1/N) Σ_m |k_m| cos(2π m d / N), m = −N/2 .. N/2−1.
    let col: Vec<f64> = (0..n)
        .map(|d| {
            let mut s = 0.0;
            for m in -half..half {
                let k = PI * m as f64 / half_width;
                s += k.abs() * (2.0 * PI * (m * d as i64 % n as i64) as f64 / n as f64).cos();
            }
            s / n as f64
        })
        .collect();
    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            matrix[i * n + j] = col[(i + n - j) % n];
        }
        matrix[i * n + i] += x[i].powi(4);
    }
    // Exact symmetry.
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (matrix[i * n + j] + matrix[j * n + i]);
            matrix[i * n + j] = v;
            matrix[j * n + i] = v;
        }
    }
    Ok(Discretization { half_width, points, x, matrix })
}

/// Householder reduction `A = Q T Qᵀ`, keeping the reflectors.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    /// Unit reflector for column k acting on indices k+1.., or empty.
    reflectors: Vec<Vec<f64>>,
}

fn tridiagonalize(d: &Discretization) -> Tridiagonal {
    let n = d.points;
    let mut a = d.matrix.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let mut w = vec![0.0; n];
    for k in 0..n - 1 {
        diag[k] = a[k * n + k];
        let m = n - k - 1;
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 || m == 1 {
            off[k] = v[0];
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        v.iter_mut().for_each(|t| *t /= vn);
        off[k] = alpha;
        // w = A22 v, q = w − (vᵀw) v, A22 −= 2(v qᵀ + q vᵀ).
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            w[i] = row.iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let kk: f64 = v.iter().zip(&w[..m]).map(|(x, y)| x * y).sum();
        for i in 0..m {
            w[i] -= kk * v[i];
        }
        for i in 0..m {
            let (vi, qi) = (v[i], w[i]);
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= 2.0 * (vi * w[j] + qi * v[j]);
            }
        }
        reflectors.push(v);
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    Tridiagonal { diag, off, reflectors }
}

/// All eigenvalues of a symmetric tridiagonal matrix by implicit QL, ascending.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(format!("QL sweep stalled at row {l} after 60 iterations (|e| = {:e})", e[l].abs())));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Solve `(T − σI) y = b` by Gaussian elimination with partial pivoting.
fn tridiagonal_solve(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64]) {
    let n = diag.len();
    // Rows hold (main, first super, second super) after pivoting.
    let mut u0: Vec<f64> = diag.iter().map(|d| d - sigma).collect();
    let mut u1: Vec<f64> = off.to_vec();
    u1.push(0.0);
    let mut u2 = vec![0.0; n];
    let mut low: Vec<f64> = off.to_vec();
    let tiny = f64::EPSILON * diag.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..n - 1 {
        if low[i].abs() > u0[i].abs() {
            // Swap rows i and i+1.
            let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
            u0[i] = low[i];
            u1[i] = u0[i + 1];
            u2[i] = u1[i + 1];
            let f = a0 / u0[i];
            u0[i + 1] = a1 - f * u1[i];
            u1[i + 1] = a2 - f * u2[i];
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
            low[i] = f;
        } else {
            if u0[i] == 0.0 {
                u0[i] = tiny;
            }
            let f = low[i] / u0[i];
            u0[i + 1] -= f * u1[i];
            b[i + 1] -= f * b[i];
            low[i] = f;
        }
    }
    if u0[n - 1] == 0.0 {
        u0[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= u1[i] * b[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * b[i + 2];
        }
        b[i] = s / u0[i];
    }
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    v.iter_mut().for_each(|t| *t /= s);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    /// Lowest k eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Matching unit ℓ² eigenvectors on the grid (empty if not requested).
    pub vectors: Vec<Vec<f64>>,
}

pub fn solve(d: &Discretization, k: usize, vectors: bool) -> Result<OracleSolution> {
    if k == 0 || k > d.points / 4 {
        return Err(Error::Domain(format!("need 1 ≤ k ≤ N/4, got k = {k}")));
    }
    let t = tridiagonalize(d);
    let all = tridiagonal_eigenvalues(&t.diag, &t.off)?;
    let values = all[..k].to_vec();
    let mut vecs = Vec::new();
    if vectors {
        let n = d.points;
        for (idx, &lam) in values.iter().enumerate() {
            let sigma = lam + 1e-10 * lam.abs().max(1.0);
            let mut y: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7 + idx * 13) % 17) as f64).collect();
            for _ in 0..4 {
                tridiagonal_solve(&t.diag, &t.off, sigma, &mut y);
                normalize(&mut y);
            }
            // Back-transform with the reflectors, last first.
            for (kk, v) in t.reflectors.iter().enumerate().rev() {
                if v.is_empty() {
                    continue;
                }
                let seg = &mut y[kk + 1..];
                let dot: f64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
                seg.iter_mut().zip(v).for_each(|(a, b)| *a -= 2.0 * dot * b);
            }
            normalize(&mut y);
            vecs.push(y);
        }
    }
    Ok(OracleSolution { values, vectors: vecs })
}

pub fn oracle_eigs(d: &Discretization, k: usize) -> Result<Vec<f64>> {
    Ok(solve(d, k, false)?.values)
}

/// The k-th (1-based) eigenvector, unit ℓ² norm.
pub fn oracle_eigvec(d: &Discretization, k: usize) -> Result<Vec<f64>> {
    Ok(solve(d, k, true)?.vectors.pop().expect("k ≥ 1"))
}

/// +1 for an even grid function about x = 0, −1 for odd, from the mirror overlap.
pub fn grid_parity(v: &[f64]) -> f64 {
    let n = v.len();
    let s: f64 = (0..n).map(|j| v[j] * v[(n - j) % n]).sum();
    s.signum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedEigs {
    pub half_width: f64,
    pub points: usize,
    pub values: Vec<f64>,
    /// Per-eigenvalue `max(|λ(L,2N) − λ(L,N)|, |λ(1.5L,1.5N) − λ(L,N)|)`.
    pub estimate: Vec<f64>,
}

/// Eigenvalues at (L, N) with a convergence estimate from the two refined grids.
pub fn refined_eigs(half_width: f64, points: usize, k: usize) -> Result<RefinedEigs> {
    let base = || discretize(half_width, points).and_then(|d| oracle_eigs(&d, k));
    let fine = || discretize(half_width, 2 * points).and_then(|d| oracle_eigs(&d, k));
    let wide = || build(1.5 * half_width, points * 3 / 2, DEFAULT_MAX_BYTES).and_then(|d| oracle_eigs(&d, k));
    let (a, (b, c)) = rayon::join(base, || rayon::join(fine, wide));
    let (a, b, c) = (a?, b?, c?);
    let estimate = (0..k).map(|i| (b[i] - a[i]).abs().max((c[i] - a[i]).abs())).collect();
    Ok(RefinedEigs { half_width, points, values: a, estimate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinetic_block_is_the_momentum_multiplier() {
        let d = discretize(4.0, 16).unwrap();
        let n = d.points;
        let m = 3.0;
        let k = PI * m / d.half_width;
        let v: Vec<f64> = d.x.iter().map(|x| (k * x).cos()).collect();
        let mut kin = d.apply(&v);
        for i in 0..n {
            kin[i] -= d.x[i].powi(4) * v[i];
        }
        for i in 0..n {
            assert!((kin[i] - k * v[i]).abs() < 1e-12);
        }
        assert_eq!(d.symmetry_defect(), 0.0);
        let j = d.x.iter().position(|&x| x == 2.0).unwrap();
        let diag_kin = d.entry(0, 0) - d.x[0].powi(4);
        assert!((d.entry(j, j) - diag_kin - 16.0).abs() < 1e-12);
    }

    #[test]
    fn ql_matches_a_known_spectrum() {
        // Second-difference matrix: eigenvalues 2 − 2cos(jπ/(n+1)).
        let n = 12;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let ev = tridiagonal_eigenvalues(&diag, &off).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13);
        }
    }

    #[test]
    fn dense_solver_residuals() {
        let d = discretize(6.0, 64).unwrap();
        let s = solve(&d, 4, true).unwrap();
        for (lam, v) in s.values.iter().zip(&s.vectors) {
            let av = d.apply(v);
            let r: f64 = av.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-9 * lam.abs().max(1.0), "{r}");
        }
        let parities: Vec<f64> = s.vectors.iter().map(|v| grid_parity(v)).collect();
        assert_eq!(parities, vec![1.0, -1.0, 1.0, -1.0]);
        assert!(s.values.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn budget_names_feasible_size() {
        match discretize_with_budget(10.0, 1024, 1 << 20) {
            Err(Error::MemoryBudget { requested, max_feasible }) => {
                assert_eq!(requested, 1024);
                assert_eq!(max_feasible, 256);
            }
            other => panic!("{other:?}"),
        }
        assert!(discretize(1.0, 100).is_err());
    }
}
