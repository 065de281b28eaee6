//! Dense extended-precision linear algebra: Cholesky, cyclic Jacobi for
//! Hermitian matrices, and shifted QR on upper Hessenberg matrices.

use rug::Float;

use crate::mp::{Cplx, Real};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    prec: u32,
    data: Vec<Cplx>,
}

impl CMatrix {
    pub fn zeros(n: usize, prec: u32) -> Self {
        CMatrix {
            n,
            prec,
            data: vec![Cplx::zero(prec); n * n],
        }
    }

    pub fn from_fn(n: usize, prec: u32, mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, prec, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn prec(&self) -> u32 {
        self.prec
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Cplx {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Cplx {
        &mut self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cplx) {
        self.data[i * self.n + j] = v;
    }

    /// Leading principal `m × m` block.
    pub fn leading(&self, m: usize) -> CMatrix {
        assert!(m <= self.n);
        CMatrix::from_fn(m, self.prec, |i, j| self.get(i, j).clone())
    }

    pub fn max_abs(&self) -> Real {
        let mut m = Float::new(self.prec);
        for z in &self.data {
            let a = z.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// max |a_ij - conj(a_ji)| / max |a_ij|
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale.is_zero() {
            return 0.0;
        }
        let mut worst = Float::new(self.prec);
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self.get(i, j) - &self.get(j, i).conj()).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        (worst / scale).to_f64()
    }

    pub fn to_c64_rows(&self) -> Vec<Vec<num_complex::Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_c64()).collect())
            .collect()
    }
}

/// Lower-triangular factor `L` with `A = L·L*` for a Hermitian positive
/// definite `A`. On failure returns the first degree whose pivot is not
/// strictly positive.
pub fn cholesky(a: &CMatrix) -> Result<CMatrix, usize> {
    let n = a.dim();
    let prec = a.prec();
    let floor = Float::with_val(prec, Float::i_exp(1, 16 - prec as i32));
    let mut l = CMatrix::zeros(n, prec);
    for j in 0..n {
        let mut d = a.get(j, j).re.clone();
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        // a pivot that is rounding noise relative to the diagonal counts as zero
        if !(d > Float::with_val(prec, &floor * &a.get(j, j).re)) {
            return Err(j);
        }
        let d = d.sqrt();
        let inv = Float::with_val(prec, 1 / &d);
        l.set(j, j, Cplx::from_real(d));
        for i in (j + 1)..n {
            let mut s = a.get(i, j).clone();
            for k in 0..j {
                let t = l.get(i, k) * &l.get(j, k).conj();
                s.sub_assign(&t);
            }
            l.set(i, j, s.scale(&inv));
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
pub fn lower_triangular_inverse(l: &CMatrix) -> CMatrix {
    let n = l.dim();
    let prec = l.prec();
    let mut x = CMatrix::zeros(n, prec);
    for i in 0..n {
        let inv_ii = l.get(i, i).recip();
        x.set(i, i, inv_ii.clone());
        for j in 0..i {
            let mut s = Cplx::zero(prec);
            for k in j..i {
                s.add_mul(l.get(i, k), x.get(k, j));
            }
            x.set(i, j, -(&s * &inv_ii));
        }
    }
    x
}

/// Outcome of a Jacobi diagonalisation.
#[derive(Clone, Debug)]
pub struct JacobiOutcome {
    /// Eigenvalues in the order of the final diagonal (unsorted).
    pub eigenvalues: Vec<Real>,
    pub sweeps: usize,
    pub converged: bool,
    /// max over pairs of |a_pq| / sqrt(|a_pp a_qq|) after the last sweep.
    pub relative_offdiag: f64,
}

const MAX_JACOBI_SWEEPS: usize = 80;

/// Cyclic Jacobi on a Hermitian matrix.
///
/// A pair is rotated while `|a_pq| > tol·sqrt(|a_pp a_qq|)` with
/// `tol = 2^(8-p)`; this relative test is what lets the small end of a graded
/// positive definite spectrum come out with high relative accuracy.
pub fn jacobi_eigenvalues(a: &CMatrix) -> JacobiOutcome {
    let n = a.dim();
    let prec = a.prec();
    let mut m = a.clone();
    for i in 0..n {
        m.get_mut(i, i).im = Float::new(prec);
    }
    let tol = Float::with_val(prec, Float::i_exp(1, 8 - prec as i32));
    let two = Float::with_val(prec, 2);
    let mut sweeps = 0;
    let mut converged = n <= 1;
    while !converged && sweeps < MAX_JACOBI_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m.get(p, q).abs();
                if g.is_zero() {
                    continue;
                }
                let app = m.get(p, p).re.clone();
                let aqq = m.get(q, q).re.clone();
                let mut scale = Float::with_val(prec, &app * &aqq);
                scale.abs_mut();
                let scale = scale.sqrt();
                let thresh = if scale.is_zero() {
                    Float::with_val(prec, &tol * Float::with_val(prec, app.abs_ref()) + Float::with_val(prec, aqq.abs_ref()))
                } else {
                    Float::with_val(prec, &tol * &scale)
                };
                if g <= thresh {
                    continue;
                }
                rotated = true;
                let theta = Float::with_val(prec, &aqq - &app) / Float::with_val(prec, &two * &g);
                let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let mut t = Float::with_val(prec, 1) / (Float::with_val(prec, theta.abs_ref()) + root);
                if theta.is_sign_negative() {
                    t = -t;
                }
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                // phase u = a_pq/|a_pq|; the rotation acts on (a_rp, conj(u)·a_rq)
                let u = m.get(p, q).scale(&Float::with_val(prec, g.recip_ref()));
                let ubar = u.conj();
                let tg = Float::with_val(prec, &t * &g);
                m.get_mut(p, p).re -= &tg;
                m.get_mut(q, q).re += &tg;
                m.set(p, q, Cplx::zero(prec));
                m.set(q, p, Cplx::zero(prec));
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m.get(r, p).clone();
                    let arq_phased = m.get(r, q) * &ubar;
                    let mut new_rp = arp.scale(&c);
                    new_rp.sub_assign(&arq_phased.scale(&s));
                    let mut new_rq = arq_phased.scale(&c);
                    new_rq.add_assign(&arp.scale(&s));
                    m.set(p, r, new_rp.conj());
                    m.set(q, r, new_rq.conj());
                    m.set(r, p, new_rp);
                    m.set(r, q, new_rq);
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            let g = m.get(p, q).abs();
            if g.is_zero() {
                continue;
            }
            let s = Float::with_val(prec, &m.get(p, p).re * &m.get(q, q).re).abs().sqrt();
            let r = if s.is_zero() { f64::INFINITY } else { (g / s).to_f64() };
            worst = worst.max(r);
        }
    }
    JacobiOutcome {
        eigenvalues: (0..n).map(|i| m.get(i, i).re.clone()).collect(),
        sweeps,
        converged,
        relative_offdiag: worst,
    }
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts. Returns `None` if some eigenvalue fails to deflate.
pub fn hessenberg_eigenvalues(h: &CMatrix) -> Option<Vec<Cplx>> {
    let n = h.dim();
    let prec = h.prec();
    let mut a = h.clone();
    let mut eig = vec![Cplx::zero(prec); n];
    if n == 0 {
        return Some(eig);
    }
    let eps = Float::with_val(prec, Float::i_exp(1, 2 - prec as i32));
    let half = Float::with_val(prec, 0.5);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 60 * n + 200;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = a.get(0, 0).clone();
            break;
        }
        // locate the active unreduced block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = a.get(lo, lo - 1).abs();
            let mut diag = a.get(lo, lo).abs();
            diag += a.get(lo - 1, lo - 1).abs();
            if diag.is_zero() {
                diag = a.max_abs();
            }
            if sub <= Float::with_val(prec, &eps * &diag) {
                a.set(lo, lo - 1, Cplx::zero(prec));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = a.get(hi, hi).clone();
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return None;
        }
        let shift = if iter % 11 == 10 {
            // exceptional shift
            let mut s = a.get(hi, hi).clone();
            let kick = a.get(hi, hi - 1).abs();
            s.re += &kick;
            s
        } else {
            let x = a.get(hi - 1, hi - 1);
            let y = a.get(hi - 1, hi);
            let z = a.get(hi, hi - 1);
            let w = a.get(hi, hi);
            let mean = (x + w).scale(&half);
            let diff = (x - w).scale(&half);
            let disc = (&(&diff * &diff) + &(y * z)).sqrt();
            let l1 = &mean + &disc;
            let l2 = &mean - &disc;
            if (&l1 - w).norm_sqr() <= (&l2 - w).norm_sqr() {
                l1
            } else {
                l2
            }
        };
        for k in lo..=hi {
            a.get_mut(k, k).sub_assign(&shift);
        }
        let mut rots: Vec<(Real, Cplx)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = a.get(k, k).clone();
            let y = a.get(k + 1, k).clone();
            let xa = x.abs();
            let r = Float::with_val(prec, xa.hypot_ref(&y.abs()));
            let (c, s) = if r.is_zero() {
                (Float::with_val(prec, 1), Cplx::zero(prec))
            } else if xa.is_zero() {
                (Float::new(prec), Cplx::one(prec))
            } else {
                let c = Float::with_val(prec, &xa / &r);
                let phase = x.scale(&Float::with_val(prec, xa.recip_ref()));
                let s = (&phase * &y.conj()).scale(&Float::with_val(prec, r.recip_ref()));
                (c, s)
            };
            for j in k..=hi {
                let rk = a.get(k, j).clone();
                let rk1 = a.get(k + 1, j).clone();
                let mut top = rk.scale(&c);
                top.add_mul(&s, &rk1);
                let mut bot = rk1.scale(&c);
                bot.sub_assign(&(&s.conj() * &rk));
                a.set(k, j, top);
                a.set(k + 1, j, bot);
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            let top_row = (k + 2).min(hi);
            for i in lo..=top_row {
                let ck = a.get(i, k).clone();
                let ck1 = a.get(i, k + 1).clone();
                let mut new_k = ck.scale(c);
                new_k.add_mul(&s.conj(), &ck1);
                let mut new_k1 = ck1.scale(c);
                new_k1.sub_assign(&(s * &ck));
                a.set(i, k, new_k);
                a.set(i, k + 1, new_k1);
            }
        }
        for k in lo..=hi {
            a.get_mut(k, k).add_assign(&shift);
        }
    }
    Some(eig)
}

/// Companion matrix of the monic polynomial with lower coefficients
/// `coeffs[0..n]` (constant term first), in upper Hessenberg form.
pub fn companion(coeffs: &[Cplx], prec: u32) -> CMatrix {
    let n = coeffs.len();
    let mut m = CMatrix::zeros(n, prec);
    for j in 0..n {
        m.set(0, j, -coeffs[n - 1 - j].clone());
    }
    for i in 1..n {
        m.set(i, i - 1, Cplx::one(prec));
    }
    m
}
