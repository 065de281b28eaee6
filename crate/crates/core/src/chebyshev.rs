//! Chebyshev (minimax monic) polynomials on sampled outer boundaries and
//! logarithmic capacity from ‖t_n‖^{1/n}.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, CMatrix};
use crate::mp::Cplx;
use crate::orthopoly::least_squares;
use crate::region::Region;

type C64 = Complex64;

pub const MAX_LAWSON_ITERATIONS: usize = 500;

/// Ladder 4, 8, ..., 32.
pub fn default_degrees() -> Vec<usize> {
    (1..=8).map(|k| 4 * k).collect()
}

#[derive(Clone, Debug)]
pub struct ChebyshevResult {
    pub degree: usize,
    /// Coefficients of (z − center)^k, k = 0..n (last entry 1).
    pub coeffs: Vec<C64>,
    pub center: C64,
    /// log of the max of |t_n| over the boundary sample.
    pub log_sup_norm: f64,
    pub sample_size: usize,
    pub solver_tolerance: f64,
    /// (max − weighted L2 lower bound)/max at the returned iterate.
    pub relative_gap: f64,
    pub iterations: usize,
    pub converged: bool,
    comrade: DMatrix<f64>,
    comrade_im: DMatrix<f64>,
    length: f64,
}

impl ChebyshevResult {
    pub fn sup_norm(&self) -> f64 {
        self.log_sup_norm.exp()
    }

    pub fn nth_root(&self) -> f64 {
        (self.log_sup_norm / self.degree as f64).exp()
    }

    pub fn eval(&self, z: C64) -> C64 {
        let w = z - self.center;
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// Zeros of t_n from the eigenvalues of the comrade matrix of the
    /// Arnoldi basis, computed at 128 bits.
    pub fn zeros(&self) -> Result<Vec<C64>> {
        let n = self.degree;
        let prec = 128;
        let m = CMatrix::from_fn(n, prec, |i, j| {
            Cplx::from_f64(prec, self.comrade[(i, j)], self.comrade_im[(i, j)])
        });
        let eig = hessenberg_eigenvalues(&m).ok_or(Error::RootFinder { degree: n })?;
        Ok(eig
            .into_iter()
            .map(|w| self.center + w.to_c64() * self.length)
            .collect())
    }
}

struct Arnoldi {
    q: DMatrix<C64>,
    h: DMatrix<C64>,
    /// 1 / leading coefficient of q_n.
    lead: f64,
}

/// Orthonormal (in the discrete ℓ² sense) polynomial basis q_0..q_n on the
/// points, with Hessenberg recurrence w·q_k = Σ_{j≤k+1} h_{jk} q_j.
fn arnoldi(w: &[C64], n: usize) -> Result<Arnoldi> {
    let m = w.len();
    let mut q = DMatrix::<C64>::zeros(m, n + 1);
    let mut h = DMatrix::<C64>::zeros(n + 1, n);
    let q0 = 1.0 / (m as f64).sqrt();
    q.column_mut(0).fill(C64::new(q0, 0.0));
    let mut lc = q0;
    for k in 1..=n {
        let mut v: DVector<C64> = DVector::from_iterator(m, (0..m).map(|i| w[i] * q[(i, k - 1)]));
        for _ in 0..2 {
            for j in 0..k {
                let qj = q.column(j);
                let c = qj.dotc(&v);
                h[(j, k - 1)] += c;
                v.axpy(-c, &qj, C64::new(1.0, 0.0));
            }
        }
        let nrm = v.norm();
        if !(nrm > 0.0) {
            return Err(Error::DegenerateSample);
        }
        h[(k, k - 1)] = C64::new(nrm, 0.0);
        q.column_mut(k).copy_from(&(v / C64::new(nrm, 0.0)));
        lc /= nrm;
    }
    Ok(Arnoldi { q, h, lead: 1.0 / lc })
}

struct Fit {
    weights: Vec<f64>,
    x: DVector<C64>,
    absr: Vec<f64>,
    max: f64,
    l2: f64,
}

/// Lawson update w_i·|r_i|, normalized to unit mass.
fn reweight(f: &Fit) -> Option<Vec<f64>> {
    let mut w: Vec<f64> = f.weights.iter().zip(&f.absr).map(|(wi, ri)| wi * ri).collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    w.iter_mut().for_each(|x| *x /= total);
    Some(w)
}

/// Log-barrier Newton for min t s.t. |b_i − (A x)_i| ≤ t, started from a
/// feasible x. Returns the final x and the dual weights 2t/(τ g_i), which
/// sum to one at a central point.
fn barrier_polish(
    a: &DMatrix<C64>,
    b: &DVector<C64>,
    x0: &DVector<C64>,
    max0: f64,
    tol: f64,
) -> Option<(DVector<C64>, Vec<f64>)> {
    let m = a.nrows();
    let n = a.ncols();
    let dim = 2 * n + 1;
    // real form: ρ_i = c_i − B_i y with y = (Re x, Im x)
    let mut bm = DMatrix::<f64>::zeros(2 * m, 2 * n);
    for i in 0..m {
        for k in 0..n {
            let v = a[(i, k)];
            bm[(2 * i, k)] = v.re;
            bm[(2 * i, k + n)] = -v.im;
            bm[(2 * i + 1, k)] = v.im;
            bm[(2 * i + 1, k + n)] = v.re;
        }
    }
    let c = DVector::from_fn(2 * m, |j, _| if j % 2 == 0 { b[j / 2].re } else { b[j / 2].im });
    let mut z = DVector::<f64>::zeros(dim);
    for k in 0..n {
        z[k] = x0[k].re;
        z[k + n] = x0[k].im;
    }
    z[2 * n] = max0 * 1.05;

    let slack = |z: &DVector<f64>| -> Option<(DVector<f64>, Vec<f64>)> {
        let rho = &c - &bm * z.rows(0, 2 * n);
        let t = z[2 * n];
        let g: Vec<f64> = (0..m)
            .map(|i| t * t - rho[2 * i] * rho[2 * i] - rho[2 * i + 1] * rho[2 * i + 1])
            .collect();
        g.iter().all(|&gi| gi > 0.0).then_some((rho, g))
    };
    let phi = |z: &DVector<f64>, tau: f64| -> Option<f64> {
        let (_, g) = slack(z)?;
        Some(tau * z[2 * n] - g.iter().map(|gi| gi.ln()).sum::<f64>())
    };

    let theta = 2.0 * m as f64;
    let mut tau = theta / (0.1 * max0);
    for _ in 0..60 {
        for _ in 0..100 {
            let (rho, g) = slack(&z)?;
            let t = z[2 * n];
            let mut grad = DVector::<f64>::zeros(dim);
            grad[2 * n] = tau;
            // ∇g_i = (2 B_iᵀρ_i, 2t); rows of `gfull` hold ∇g_i/g_i
            let mut gfull = DMatrix::<f64>::zeros(m, dim);
            let mut scaled = bm.clone();
            for i in 0..m {
                let row = (bm.row(2 * i) * rho[2 * i] + bm.row(2 * i + 1) * rho[2 * i + 1]) * (2.0 / g[i]);
                for k in 0..2 * n {
                    grad[k] -= row[k];
                    gfull[(i, k)] = row[k];
                }
                gfull[(i, 2 * n)] = 2.0 * t / g[i];
                grad[2 * n] -= gfull[(i, 2 * n)];
                let s = (2.0 / g[i]).sqrt();
                scaled.row_mut(2 * i).scale_mut(s);
                scaled.row_mut(2 * i + 1).scale_mut(s);
            }
            // Σ ∇g∇gᵀ/g² + diag(2BᵀB, −2)/g
            let mut h = gfull.transpose() * &gfull;
            let btb = scaled.transpose() * &scaled;
            h.view_mut((0, 0), (2 * n, 2 * n)).add_assign(&btb);
            h[(2 * n, 2 * n)] -= g.iter().map(|gi| 2.0 / gi).sum::<f64>();
            let chol = h.cholesky()?;
            let step = -chol.solve(&grad);
            let dec = -grad.dot(&step);
            if dec < 1e-10 {
                break;
            }
            let f0 = phi(&z, tau)?;
            let mut s = 1.0;
            loop {
                let trial = &z + &step * s;
                if let Some(f1) = phi(&trial, tau) {
                    if f1 <= f0 - 0.25 * s * dec {
                        z = trial;
                        break;
                    }
                }
                s *= 0.5;
                if s < 1e-12 {
                    return None;
                }
            }
        }
        if theta / tau < 0.25 * tol * z[2 * n] {
            break;
        }
        tau *= 8.0;
    }
    let (_, g) = slack(&z)?;
    let t = z[2 * n];
    let w: Vec<f64> = g.iter().map(|gi| 2.0 * t / (tau * gi)).collect();
    let total: f64 = w.iter().sum();
    let w = w.into_iter().map(|x| x / total).collect();
    let x = DVector::from_fn(n, |k, _| C64::new(z[k], z[k + n]));
    Some((x, w))
}

/// Weighted complex least squares min ‖diag(√w)(A x − b)‖ via QR.
fn weighted_solve(a: &DMatrix<C64>, b: &DVector<C64>, w: &[f64]) -> Option<DVector<C64>> {
    let m = a.nrows();
    let n = a.ncols();
    if n == 0 {
        return Some(DVector::zeros(0));
    }
    let sw: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let aw = DMatrix::from_fn(m, n, |i, j| a[(i, j)] * sw[i]);
    let bw = DVector::from_fn(m, |i, _| b[i] * sw[i]);
    let qr = aw.qr();
    let rhs = qr.q().adjoint() * bw;
    qr.r().solve_upper_triangular(&rhs)
}

/// Monic degree-n polynomial minimizing the max modulus over `m` outer
/// boundary samples, by Lawson's iteratively reweighted least squares.
///
/// The iteration stops when the weighted ℓ² residual (a lower bound for the
/// minimax value) is within `tol` relative of the max residual, or after
/// [`MAX_LAWSON_ITERATIONS`] rounds. An unconverged run is finished by a
/// barrier Newton polish whose dual weights are checked with the same
/// bound; `converged` is false only if that also misses `tol`.
pub fn chebyshev_polynomial(region: &Region, n: usize, m: usize, tol: f64) -> Result<ChebyshevResult> {
    if n < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if m < 8 * n {
        return Err(Error::InvalidArgument(format!(
            "need at least 8n = {} boundary samples, got {m}",
            8 * n
        )));
    }
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1e-2], got {tol}")));
    }
    let zeta = region.boundary_points(m);
    solve_on_points(&zeta, n, tol)
}

/// Lawson solver on an explicit point set.
pub fn solve_on_points(zeta: &[C64], n: usize, tol: f64) -> Result<ChebyshevResult> {
    let m = zeta.len();
    if m == 0 {
        return Err(Error::DegenerateSample);
    }
    let center = zeta.iter().sum::<C64>() / m as f64;
    let length = zeta.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    if !(length > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let w: Vec<C64> = zeta.iter().map(|z| (z - center) / length).collect();
    let arn = arnoldi(&w, n)?;
    let basis = arn.q.columns(0, n).into_owned();
    let target: DVector<C64> = arn.q.column(n) * C64::new(arn.lead, 0.0);

    let fit = |weights: Vec<f64>| -> Result<Fit> {
        let x = weighted_solve(&basis, &target, &weights).ok_or(Error::DegenerateSample)?;
        let r = &target - &basis * &x;
        let absr: Vec<f64> = r.iter().map(|v| v.norm()).collect();
        let max = absr.iter().cloned().fold(0.0, f64::max);
        let l2 = weights
            .iter()
            .zip(&absr)
            .map(|(wi, ri)| wi * ri * ri)
            .sum::<f64>()
            .sqrt();
        Ok(Fit { weights, x, absr, max, l2 })
    };

    let mut cur = fit(vec![1.0 / m as f64; m])?;
    let mut best: (f64, DVector<C64>) = (cur.max, cur.x.clone());
    let mut lower = cur.l2;
    let mut iterations = 1;
    let gap = |best: f64, lower: f64| if best > 0.0 { (best - lower) / best } else { 0.0 };
    while gap(best.0, lower) >= tol && iterations < MAX_LAWSON_ITERATIONS {
        iterations += 1;
        let Some(w) = reweight(&cur) else { break };
        cur = fit(w)?;
        lower = lower.max(cur.l2);
        if cur.max < best.0 {
            best = (cur.max, cur.x.clone());
        }
    }
    if gap(best.0, lower) >= tol {
        // Lawson stalls near corners; finish with barrier Newton and certify
        // through the weighted residual of its dual weights
        if let Some((x, w)) = barrier_polish(&basis, &target, &best.1, best.0, tol) {
            let f = fit(w)?;
            lower = lower.max(f.l2);
            let r = &target - &basis * &x;
            let max = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if max < best.0 {
                best = (max, x);
            }
        }
    }
    let converged = gap(best.0, lower) < tol;
    let (best_max, x) = best;
    let relative_gap = gap(best_max, lower);

    // monomial coefficients of t(w) = lead·q_n − Σ x_k q_k
    let mut qc: Vec<Vec<C64>> = Vec::with_capacity(n + 1);
    qc.push(vec![C64::new(1.0 / (m as f64).sqrt(), 0.0)]);
    for k in 1..=n {
        let mut next = vec![C64::new(0.0, 0.0); k + 1];
        for (i, c) in qc[k - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for j in 0..k {
            let hj = arn.h[(j, k - 1)];
            for (i, c) in qc[j].iter().enumerate() {
                next[i] -= hj * c;
            }
        }
        let hk = arn.h[(k, k - 1)];
        for c in next.iter_mut() {
            *c /= hk;
        }
        qc.push(next);
    }
    let mut tw = vec![C64::new(0.0, 0.0); n + 1];
    for (i, c) in qc[n].iter().enumerate() {
        tw[i] += c * arn.lead;
    }
    for k in 0..n {
        for (i, c) in qc[k].iter().enumerate() {
            tw[i] -= x[k] * c;
        }
    }
    // T(z) = L^n t((z − c)/L)
    let coeffs: Vec<C64> = tw
        .iter()
        .enumerate()
        .map(|(k, c)| c * length.powi((n - k) as i32))
        .collect();
    let mut coeffs = coeffs;
    coeffs[n] = C64::new(1.0, 0.0);

    // comrade matrix: H_n with its last column shifted by h_{n,n-1}·x/lead
    let hn = arn.h[(n, n - 1)];
    let mut comrade = DMatrix::<f64>::zeros(n, n);
    let mut comrade_im = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = arn.h[(i, j)];
            if j == n - 1 {
                v += hn * x[i] / arn.lead;
            }
            comrade[(i, j)] = v.re;
            comrade_im[(i, j)] = v.im;
        }
    }

    Ok(ChebyshevResult {
        degree: n,
        coeffs,
        center,
        log_sup_norm: best_max.ln() + n as f64 * length.ln(),
        sample_size: m,
        solver_tolerance: tol,
        relative_gap,
        iterations,
        converged,
        comrade,
        comrade_im,
        length,
    })
}

/// Boundary sample size for each degree of a ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleRule {
    /// m = k·n.
    PerDegree(usize),
    /// The same m for every degree.
    Fixed(usize),
}

impl SampleRule {
    pub fn size(&self, n: usize) -> usize {
        match *self {
            SampleRule::PerDegree(k) => k * n,
            SampleRule::Fixed(m) => m,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityEstimate {
    pub degrees: Vec<usize>,
    /// ‖t_n‖^{1/n} per degree.
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub results: Vec<ChebyshevResult>,
    pub extrapolated: f64,
    /// Degrees used in the fit.
    pub fit_degrees: Vec<usize>,
    pub tolerance: f64,
}

impl CapacityEstimate {
    pub fn log_norms(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.log_sup_norm).collect()
    }
}

/// Chebyshev polynomials over a degree ladder and the capacity estimate from
/// a least-squares fit of log‖t_n‖ = n·log c + d over the upper half of the
/// converged degrees.
pub fn capacity_estimate(
    region: &Region,
    degrees: &[usize],
    rule: SampleRule,
    tol: f64,
) -> Result<CapacityEstimate> {
    if degrees.is_empty() || degrees.windows(2).any(|p| p[0] >= p[1]) || degrees[0] < 1 {
        return Err(Error::InvalidArgument(
            "degree ladder must be strictly ascending and start at 1 or more".into(),
        ));
    }
    let results: Vec<ChebyshevResult> = degrees
        .par_iter()
        .map(|&n| chebyshev_polynomial(region, n, rule.size(n), tol))
        .collect::<Result<Vec<_>>>()?;
    let good: Vec<&ChebyshevResult> = results.iter().filter(|r| r.converged).collect();
    if good.len() < 3 {
        return Err(Error::TooFewConverged { converged: good.len() });
    }
    let top = &good[good.len() / 2..];
    let a = DMatrix::from_fn(top.len(), 2, |i, j| if j == 0 { top[i].degree as f64 } else { 1.0 });
    let b = DVector::from_iterator(top.len(), top.iter().map(|r| r.log_sup_norm));
    let fit = least_squares(&a, &b).ok_or(Error::TooFewConverged { converged: good.len() })?;
    Ok(CapacityEstimate {
        degrees: degrees.to_vec(),
        values: results.iter().map(ChebyshevResult::nth_root).collect(),
        converged: results.iter().map(|r| r.converged).collect(),
        fit_degrees: top.iter().map(|r| r.degree).collect(),
        extrapolated: fit[0].exp(),
        results,
        tolerance: tol,
    })
}

/// Closed form when available, otherwise the default ladder with m = 16n
/// and tolerance 1e-4.
pub fn capacity(region: &Region) -> Result<f64> {
    if let Some(c) = region.capacity_known() {
        return Ok(c);
    }
    Ok(capacity_estimate(region, &default_degrees(), SampleRule::PerDegree(16), 1e-4)?.extrapolated)
}
