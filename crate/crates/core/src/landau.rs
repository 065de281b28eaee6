//! Landau-level compressions P_q v P_q as truncated Hermitian matrices, their
//! spectra, and the n-th root sequences and limit predictions built on them.
//!
//! Everything is computed at b0 = 2 after the substitution z ↦ √(b0/2)·z on
//! the weight, which is exact.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::chebyshev::CapacityEstimate;
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, CMatrix};
use crate::mp::{ln_factorial, pi, Cplx, Real};
use crate::orthopoly::{monic_orthogonalize, RhoEstimate};
use crate::region::{Point, Region};
use crate::special::{integrate_adaptive_rel, lower_gamma};
use crate::weight::{mixed_moments, Density, MomentKind, Profile, Weight};

/// Level q, field strength b0 and truncation degree N (matrix size N+1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandauBasisSpec {
    pub q: usize,
    pub b0: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl LandauBasisSpec {
    pub fn new(q: usize, b0: f64, n: usize) -> Result<Self> {
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::InvalidArgument(format!("b0 must be positive, got {b0}")));
        }
        if n < q {
            return Err(Error::InvalidArgument(format!(
                "truncation degree N = {n} must be at least q = {q}"
            )));
        }
        Ok(LandauBasisSpec { q, b0, n })
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }
}

/// Truncated compression matrix with the data it came from.
#[derive(Clone, Debug)]
pub struct LandauMatrix {
    pub spec: LandauBasisSpec,
    pub matrix: CMatrix,
    pub provenance: String,
    /// The moment table came from the rotationally symmetric shortcut.
    pub radial_path: bool,
}

impl LandauMatrix {
    pub fn get(&self, j: usize, k: usize) -> &Cplx {
        self.matrix.get(j, k)
    }

    pub fn precision_bits(&self) -> u32 {
        self.matrix.prec()
    }
}

/// v'(w) = v(w/√(b0/2)), the weight that gives the same compression at b0 = 2.
pub fn reduce_to_b0_two(v: &Weight, b0: f64) -> Result<Weight> {
    if !(b0 > 0.0 && b0.is_finite()) {
        return Err(Error::InvalidArgument(format!("b0 must be positive, got {b0}")));
    }
    if b0 == 2.0 {
        return Ok(v.clone());
    }
    v.affine((b0 / 2.0).sqrt(), Point::new(0.0, 0.0))
}

/// Lowest-Landau-level matrix T_jk = ⟨e_j, v e_k⟩, 0 ≤ j, k ≤ N.
pub fn lll_matrix(v: &Weight, b0: f64, n: usize, prec: u32) -> Result<LandauMatrix> {
    level_q_matrix(v, 0, b0, n, prec)
}

/// Polynomial part Σ c_ab z^a z̄^b of a basis function, keyed by (a, b).
pub type SymbolicPoly = BTreeMap<(usize, usize), i128>;

/// q applications of f ↦ ∂f/∂z − z̄ f to z^k.
pub fn creation_polynomial(k: usize, q: usize) -> Result<SymbolicPoly> {
    let mut p = SymbolicPoly::new();
    p.insert((k, 0), 1);
    for _ in 0..q {
        let mut next = SymbolicPoly::new();
        for (&(a, b), &c) in &p {
            if a > 0 {
                let d = c.checked_mul(a as i128).ok_or(Error::CoefficientOverflow)?;
                let slot = next.entry((a - 1, b)).or_insert(0);
                *slot = slot.checked_add(d).ok_or(Error::CoefficientOverflow)?;
            }
            let slot = next.entry((a, b + 1)).or_insert(0);
            *slot = slot.checked_sub(c).ok_or(Error::CoefficientOverflow)?;
        }
        next.retain(|_, c| *c != 0);
        p = next;
    }
    Ok(p)
}

/// Level-q matrix in the basis obtained from the LLL basis by q normalized
/// creation steps:
/// T_jk = Σ p_ab p_cd G_{a+d, b+c} / (q! π √(j! k!)), with G the Gaussian
/// moments ∫ z^x z̄^y v e^{−|z|²} dm at b0 = 2.
pub fn level_q_matrix(v: &Weight, q: usize, b0: f64, n: usize, prec: u32) -> Result<LandauMatrix> {
    let spec = LandauBasisSpec::new(q, b0, n)?;
    let w = reduce_to_b0_two(v, b0)?;
    let table = mixed_moments(&w, MomentKind::Gaussian { b0: 2.0 }, n + q, prec)?;
    let polys: Vec<SymbolicPoly> = (0..=n).map(|k| creation_polynomial(k, q)).collect::<Result<_>>()?;

    let log_s = table.log_scale();
    let ln_pi = Float::with_val(prec, pi(prec).ln_ref());
    let ln_qf = ln_factorial(q as u64, prec);
    let half_ln_fact: Vec<Real> = (0..=n).map(|j| ln_factorial(j as u64, prec) / 2u32).collect();
    let pow_s: Vec<Real> = (0..=2 * (n + q))
        .map(|e| Float::with_val(prec, &log_s * e as u32).exp())
        .collect();

    let rows: Vec<Vec<Cplx>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            (j..=n)
                .map(|k| {
                    let mut acc = Cplx::zero(prec);
                    for (&(a, b), &pj) in &polys[j] {
                        for (&(c, d), &pk) in &polys[k] {
                            let (x, y) = (a + d, b + c);
                            let coef = Float::with_val(prec, pj) * pk;
                            let f = Float::with_val(prec, &coef * &pow_s[x + y]);
                            acc.add_mul_real(table.get(x, y), &f);
                        }
                    }
                    let mut log_norm = Float::with_val(prec, &ln_pi + &ln_qf);
                    log_norm += &half_ln_fact[j];
                    log_norm += &half_ln_fact[k];
                    acc.scale(&Float::with_val(prec, -log_norm).exp())
                })
                .collect()
        })
        .collect();

    let mut matrix = CMatrix::zeros(n + 1, prec);
    for (j, row) in rows.into_iter().enumerate() {
        for (off, e) in row.into_iter().enumerate() {
            let k = j + off;
            if j == k {
                matrix.set(j, j, Cplx::from_real(e.re));
            } else {
                matrix.set(k, j, e.conj());
                matrix.set(j, k, e);
            }
        }
    }
    Ok(LandauMatrix {
        spec,
        matrix,
        provenance: v.provenance(),
        radial_path: table.used_radial_path(),
    })
}

/// Eigenvalues s_1 ≥ s_2 ≥ … of a compression matrix.
#[derive(Clone, Debug)]
pub struct ToeplitzSpectrum {
    pub spec: LandauBasisSpec,
    /// Descending.
    pub eigenvalues: Vec<Real>,
    /// ln s_n; −∞ for entries that came out non-positive.
    pub log_eigs: Vec<Real>,
    /// max of the Hermiticity defect and the final relative off-diagonal
    /// size of the Jacobi iteration.
    pub matrix_residual: f64,
    /// Eigenvalues above s_1·10^(−p/3); these lead the descending list.
    pub trusted_count: usize,
    pub precision_bits: u32,
    pub provenance: String,
}

impl ToeplitzSpectrum {
    /// s_n, 1-based.
    pub fn s(&self, n: usize) -> &Real {
        &self.eigenvalues[n - 1]
    }

    pub fn is_trusted(&self, n: usize) -> bool {
        n >= 1 && n <= self.trusted_count
    }

    /// ln (n!·s_index)^{1/n}.
    pub fn log_nth_root(&self, n: usize, index: usize) -> f64 {
        let prec = self.precision_bits;
        let mut l = ln_factorial(n as u64, prec);
        l += &self.log_eigs[index - 1];
        (l / n as u32).to_f64()
    }
}

fn trusted_floor(s1: &Real, prec: u32) -> Real {
    let ln10 = Float::with_val(prec, 10).ln();
    let e = Float::with_val(prec, -(prec as f64) / 3.0) * ln10;
    Float::with_val(prec, s1 * e.exp())
}

fn finish_spectrum(
    spec: LandauBasisSpec,
    mut eig: Vec<Real>,
    residual: f64,
    prec: u32,
    provenance: String,
) -> ToeplitzSpectrum {
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let trusted_count = match eig.first() {
        Some(s1) if *s1 > 0 => {
            let floor = trusted_floor(s1, prec);
            eig.iter().take_while(|s| **s > floor).count()
        }
        _ => 0,
    };
    let log_eigs = eig
        .iter()
        .map(|s| {
            if *s > 0 {
                Float::with_val(prec, s.ln_ref())
            } else {
                Float::with_val(prec, f64::NEG_INFINITY)
            }
        })
        .collect();
    ToeplitzSpectrum {
        spec,
        eigenvalues: eig,
        log_eigs,
        matrix_residual: residual,
        trusted_count,
        precision_bits: prec,
        provenance,
    }
}

/// Hermiticity tolerance for a `prec`-bit matrix: 2^(−p/2) relative.
pub fn hermitian_tolerance(prec: u32) -> f64 {
    2f64.powi(-(prec as i32) / 2)
}

/// Spectrum by cyclic Jacobi at `prec` bits, sorted descending, with the
/// trusted prefix marked.
pub fn spectrum(m: &LandauMatrix, prec: u32) -> Result<ToeplitzSpectrum> {
    let defect = m.matrix.hermitian_defect();
    if defect > hermitian_tolerance(prec) {
        return Err(Error::NotHermitian { defect });
    }
    let a = if prec == m.matrix.prec() {
        m.matrix.clone()
    } else {
        let n = m.matrix.dim();
        CMatrix::from_fn(n, prec, |i, j| {
            let e = m.matrix.get(i, j);
            Cplx {
                re: Float::with_val(prec, &e.re),
                im: Float::with_val(prec, &e.im),
            }
        })
    };
    let out = jacobi_eigenvalues(&a);
    Ok(finish_spectrum(
        m.spec,
        out.eigenvalues,
        defect.max(out.relative_offdiag),
        prec,
        m.provenance.clone(),
    ))
}

/// J(m) = (1/m!) ∫ t^m e^{−t} ṽ(√t) dt over the squared radii of the support,
/// m = 0..=max_m, for a weight rotationally symmetric about the origin (at
/// b0 = 2). Closed forms through γ(·, ·) for constant and power profiles,
/// adaptive quadrature otherwise.
fn radial_integrals(w: &Weight, max_m: usize, prec: u32) -> Result<Vec<Real>> {
    if !w.is_radial_about_origin() {
        return Err(Error::OracleNotApplicable);
    }
    let (r0, r1) = match w.support() {
        Region::Disc { radius, .. } => (0.0, *radius),
        Region::Annulus {
            inner_radius,
            outer_radius,
            ..
        } => (*inner_radius, *outer_radius),
        _ => return Err(Error::OracleNotApplicable),
    };
    let wp = prec + 32;
    let x0 = Float::with_val(wp, r0).square();
    let x1 = Float::with_val(wp, r1).square();
    let gamma_between = |s: &Real| -> Real {
        let hi = lower_gamma(s, &x1);
        if r0 > 0.0 {
            hi - lower_gamma(s, &x0)
        } else {
            hi
        }
    };
    // ṽ(ρ) = c·(ρ/L)^k turns the integral into c·L^{−k}·γ(m+1+k/2, ·)
    let monomial = match w.density() {
        Density::Constant { c } => Some((*c, 0u32, 1.0)),
        Density::Radial {
            profile, length, ..
        } => match profile {
            Profile::Chi => Some((1.0, 0, *length)),
            Profile::Power(k) => Some((1.0, *k, *length)),
        },
        Density::Generic { .. } => None,
    };
    Ok((0..=max_m)
        .into_par_iter()
        .map(|m| {
            let ln_fact = ln_factorial(m as u64, wp);
            match monomial {
                Some((c, k, length)) => {
                    let s = Float::with_val(wp, m + 1) + Float::with_val(wp, k) / 2u32;
                    let mut val = gamma_between(&s);
                    val *= Float::with_val(wp, -&ln_fact).exp();
                    val *= c;
                    val /= Float::with_val(wp, length).pow_ref_i(k);
                    Float::with_val(prec, val)
                }
                None => {
                    let lf = ln_fact.to_f64();
                    let f = |t: f64| {
                        if t <= 0.0 {
                            return if m == 0 { w.radial_value(0.0) } else { 0.0 };
                        }
                        (m as f64 * t.ln() - t - lf).exp() * w.radial_value(t.sqrt())
                    };
                    Float::with_val(prec, integrate_adaptive_rel(&f, r0 * r0, r1 * r1, 1e-14))
                }
            }
        })
        .collect())
}

/// Diagonal of the level-q matrix of a centered radial weight by separation
/// of variables: T_kk = Σ p_ab p_cd (a+d)! J(a+d) / (q! k!), using only
/// one-dimensional radial integrals.
pub fn radial_level_diagonal(v: &Weight, q: usize, b0: f64, n: usize, prec: u32) -> Result<Vec<Real>> {
    LandauBasisSpec::new(q, b0, n)?;
    let w = reduce_to_b0_two(v, b0)?;
    let j = radial_integrals(&w, n + q, prec)?;
    (0..=n)
        .map(|k| {
            let p = creation_polynomial(k, q)?;
            let mut acc = Float::new(prec);
            for (&(a, _), &pa) in &p {
                for (&(_, d), &pd) in &p {
                    let m = a + d;
                    let mut t = Float::with_val(prec, pa) * pd;
                    t *= Float::with_val(prec, &ln_factorial(m as u64, prec) - &ln_factorial(k as u64, prec)).exp();
                    t *= &j[m];
                    acc += t;
                }
            }
            Ok(acc / Float::with_val(prec, Float::factorial(q as u32)))
        })
        .collect()
}

/// Lowest-level spectrum of a weight rotationally symmetric about the
/// origin: s_{n+1} = (1/n!) ∫ tⁿ e^{−t} ṽ(√t) dt.
pub fn radial_oracle(v: &Weight, b0: f64, n: usize, prec: u32) -> Result<ToeplitzSpectrum> {
    if !v.is_radial_about_origin() {
        return Err(Error::OracleNotApplicable);
    }
    let spec = LandauBasisSpec::new(0, b0, n)?;
    let w = reduce_to_b0_two(v, b0)?;
    let eig = radial_integrals(&w, n, prec)?;
    Ok(finish_spectrum(spec, eig, 0.0, prec, v.provenance()))
}

trait PowI {
    fn pow_ref_i(&self, k: u32) -> Real;
}

impl PowI for Real {
    fn pow_ref_i(&self, k: u32) -> Real {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(k))
    }
}

/// Limits predicted from ρ̂ and Ĉp for the eigenvalue sequences of the
/// perturbed operators. Nothing here is computed from those operators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictedLimits {
    pub q: usize,
    pub b0: f64,
    /// lim sup / lim inf of (±n! λ_n^±)^{1/n}: b0 ρ̂_±/2.
    pub theorem1_limsup: f64,
    pub theorem1_liminf: f64,
    /// Central value b0 ρ̂/2 from the extrapolated ρ̂ when available.
    pub theorem1_point: f64,
    /// lim (±n!(λ_{q,n}^± − 2q b0))^{1/n}: (b0/2) Ĉp².
    pub theorem2_limit: f64,
    /// lim sup / lim inf of (−(n!)² Λ_n)^{1/n}: (b0 ρ̂_±/2)².
    pub theorem3_limsup: f64,
    pub theorem3_liminf: f64,
    pub theorem3_point: f64,
    /// ln s_n ≈ −n ln n + n·linear: coefficient of n ln n.
    pub log_asymptote_n_log_n: f64,
    /// ln(b0/2) + 2 ln Ĉp.
    pub log_asymptote_linear: f64,
    pub rho_provenance: String,
    pub capacity_provenance: String,
}

/// A capacity value tied to the region it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacitySource {
    pub value: f64,
    pub support: String,
    /// "closed_form" or "chebyshev_ladder".
    pub origin: &'static str,
}

impl CapacitySource {
    pub fn known(region: &Region) -> Result<Self> {
        let value = region.capacity_known().ok_or_else(|| {
            Error::InvalidArgument("no closed-form capacity for this region".into())
        })?;
        Ok(CapacitySource {
            value,
            support: region.to_json(),
            origin: "closed_form",
        })
    }

    pub fn from_estimate(region: &Region, est: &CapacityEstimate) -> Self {
        CapacitySource {
            value: est.extrapolated,
            support: region.to_json(),
            origin: "chebyshev_ladder",
        }
    }
}

pub fn theorem_predictions(
    v: &Weight,
    q: usize,
    b0: f64,
    rho: &RhoEstimate,
    cap: &CapacitySource,
) -> Result<PredictedLimits> {
    if !(b0 > 0.0 && b0.is_finite()) {
        return Err(Error::InvalidArgument(format!("b0 must be positive, got {b0}")));
    }
    let prov = v.provenance();
    if rho.provenance != prov {
        return Err(Error::ProvenanceMismatch(format!(
            "ρ̂ was computed for {} but the weight is {}",
            rho.provenance, prov
        )));
    }
    let support = v.support().to_json();
    if cap.support != support {
        return Err(Error::ProvenanceMismatch(format!(
            "capacity was computed for {} but the support is {}",
            cap.support, support
        )));
    }
    let half = b0 / 2.0;
    let point = rho.extrapolated.unwrap_or(rho.rho_plus_hat);
    let t1 = |r: f64| half * r;
    Ok(PredictedLimits {
        q,
        b0,
        theorem1_limsup: t1(rho.rho_plus_hat),
        theorem1_liminf: t1(rho.rho_minus_hat),
        theorem1_point: t1(point),
        theorem2_limit: half * cap.value * cap.value,
        theorem3_limsup: t1(rho.rho_plus_hat).powi(2),
        theorem3_liminf: t1(rho.rho_minus_hat).powi(2),
        theorem3_point: t1(point).powi(2),
        log_asymptote_n_log_n: -1.0,
        log_asymptote_linear: half.ln() + 2.0 * cap.value.ln(),
        rho_provenance: rho.provenance.clone(),
        capacity_provenance: format!("{}:{}", cap.origin, cap.support),
    })
}

/// Spectral and orthogonal-polynomial sides of the lowest-level asymptotics
/// (n! s_{n+1})^{1/n} ~ (b0/2) M_n^{1/n}.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsReport {
    pub n: Vec<usize>,
    /// ln (n! s_{n+1})^{1/n}.
    pub log_lhs: Vec<f64>,
    /// ln ((b0/2) M_n^{1/n}).
    pub log_rhs: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Largest n with s_{n+1} trusted.
    pub max_trusted_n: usize,
    pub predicted_limits: Option<PredictedLimits>,
    pub provenance: String,
}

impl AsymptoticsReport {
    pub fn lhs(&self) -> Vec<f64> {
        self.log_lhs.iter().map(|l| l.exp()).collect()
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.log_rhs.iter().map(|l| l.exp()).collect()
    }

    pub fn ratio_at(&self, n: usize) -> Option<f64> {
        self.n.iter().position(|&k| k == n).map(|i| self.ratio[i])
    }
}

/// Minimum number of trusted eigenvalues for a meaningful sequence.
pub const MIN_TRUSTED: usize = 5;

pub fn lemma1_sequences(v: &Weight, b0: f64, n: usize, prec: u32) -> Result<AsymptoticsReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("N must be at least 4, got {n}")));
    }
    let spec = spectrum(&lll_matrix(v, b0, n, prec)?, prec)?;
    lemma1_from_spectrum(v, b0, &spec)
}

/// As [`lemma1_sequences`] with a precomputed lowest-level spectrum of `v`.
pub fn lemma1_from_spectrum(v: &Weight, b0: f64, spec: &ToeplitzSpectrum) -> Result<AsymptoticsReport> {
    if spec.trusted_count < MIN_TRUSTED {
        return Err(Error::TrustedTailTooShort {
            trusted: spec.trusted_count,
        });
    }
    if spec.provenance != v.provenance() {
        return Err(Error::ProvenanceMismatch(format!(
            "spectrum was computed for {} but the weight is {}",
            spec.provenance,
            v.provenance()
        )));
    }
    let prec = spec.precision_bits;
    let n_max = (spec.trusted_count - 1).min(spec.spec.n);
    let plain = mixed_moments(v, MomentKind::Plain, n_max, prec)?;
    let basis = monic_orthogonalize(&plain)?;
    let ln_half = (b0 / 2.0).ln();
    let ns: Vec<usize> = (1..=n_max).collect();
    let log_lhs: Vec<f64> = ns.iter().map(|&k| spec.log_nth_root(k, k + 1)).collect();
    let log_rhs: Vec<f64> = ns
        .iter()
        .map(|&k| ln_half + basis.log_norms()[k].to_f64() / k as f64)
        .collect();
    let ratio = log_lhs.iter().zip(&log_rhs).map(|(l, r)| (l - r).exp()).collect();
    Ok(AsymptoticsReport {
        n: ns,
        log_lhs,
        log_rhs,
        ratio,
        max_trusted_n: n_max,
        predicted_limits: None,
        provenance: v.provenance(),
    })
}

/// (n, (n!·s_n)^{1/n}) over the trusted part of a level-q spectrum.
pub fn level_q_sequence(spec: &ToeplitzSpectrum) -> Vec<(usize, f64)> {
    (1..=spec.trusted_count)
        .map(|k| (k, spec.log_nth_root(k, k).exp()))
        .collect()
}
