//! Monic orthogonal polynomials for v·dm, the norm sequence M_n and its
//! n-th root behaviour.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rug::Float;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, companion, hessenberg_eigenvalues, lower_triangular_inverse, CMatrix};
use crate::mp::{Cplx, Real};
use crate::region::Region;
use crate::weight::{Density, GenericClass, MomentKind, MomentTable, Profile, Weight};

/// Monic orthogonal polynomials p_0..p_N in the rescaled variable u = z/s.
#[derive(Clone, Debug)]
pub struct MonicOrthoBasis {
    maxdeg: usize,
    prec: u32,
    scale: Real,
    /// Row n: coefficients of u^0..u^(n-1) of the monic p_n(s·u)/s^n.
    coeffs: Vec<Vec<Cplx>>,
    log_norms: Vec<Real>,
    cholesky_residual: f64,
    provenance: String,
}

/// Root of p_n with the modulus of p_n there.
#[derive(Clone, Debug)]
pub struct Root {
    pub z: Complex64,
    pub residual: f64,
}

impl MonicOrthoBasis {
    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// log M_n for n = 0..=N.
    pub fn log_norms(&self) -> &[Real] {
        &self.log_norms
    }

    /// Coefficient of z^k in p_n (k ≤ n), in the original variable.
    pub fn coeff(&self, n: usize, k: usize) -> Cplx {
        if k == n {
            return Cplx::one(self.prec);
        }
        let f = Float::with_val(self.prec, self.scale.pow_u(n - k));
        self.coeffs[n][k].scale(&f)
    }

    /// Max relative entrywise defect of L·L* against the Gram matrix.
    pub fn cholesky_residual(&self) -> f64 {
        self.cholesky_residual
    }

    /// p_n(z) in double precision.
    pub fn eval(&self, n: usize, z: Complex64) -> Complex64 {
        let s = self.scale.to_f64();
        let u = z / s;
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * u + self.coeffs[n][k].to_c64();
        }
        acc * s.powi(n as i32)
    }

    /// max over n ≠ k of |⟨p_n, p_k⟩| / sqrt(M_n M_k), recombined from the
    /// moment table the basis was built from.
    pub fn orthogonality_defect(&self, moments: &MomentTable) -> f64 {
        let n = self.maxdeg + 1;
        let prec = self.prec;
        let full = |i: usize| -> Vec<Cplx> {
            let mut c = self.coeffs[i].clone();
            c.push(Cplx::one(prec));
            c
        };
        let rows: Vec<Vec<Cplx>> = (0..n).map(full).collect();
        // G·conj(c_k) for every k
        let gc: Vec<Vec<Cplx>> = rows
            .iter()
            .map(|ck| {
                (0..n)
                    .map(|a| {
                        let mut acc = Cplx::zero(prec);
                        for (b, cb) in ck.iter().enumerate() {
                            acc.add_mul_conj(moments.get(a, b), cb);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let norms: Vec<f64> = self
            .log_norms
            .iter()
            .enumerate()
            .map(|(i, l)| {
                // rescaled norm M'_i = M_i / s^(2i)
                (l.to_f64() - 2.0 * i as f64 * self.scale.to_f64().ln()).exp()
            })
            .collect();
        let mut worst = 0f64;
        for i in 0..n {
            for k in 0..i {
                let mut acc = Cplx::zero(prec);
                for (a, ca) in rows[i].iter().enumerate() {
                    acc.add_mul(ca, &gc[k][a]);
                }
                worst = worst.max(acc.abs().to_f64() / (norms[i] * norms[k]).sqrt());
            }
        }
        worst
    }
}

trait PowU {
    fn pow_u(&self, k: usize) -> Real;
}

impl PowU for Real {
    fn pow_u(&self, k: usize) -> Real {
        let mut r = Float::with_val(self.prec(), 1);
        for _ in 0..k {
            r *= self;
        }
        r
    }
}

/// Cholesky G = L·L* of the moment Gram matrix; M_n = L_nn² and p_n is
/// L_nn times row n of L⁻¹. The monomial rescaling of the table is undone
/// by adding 2n·log s to log M_n.
pub fn monic_orthogonalize(moments: &MomentTable) -> Result<MonicOrthoBasis> {
    if moments.kind() != MomentKind::Plain {
        return Err(Error::InvalidArgument(
            "orthogonal polynomials need a plain moment table".into(),
        ));
    }
    let n = moments.maxdeg() + 1;
    let prec = moments.precision_bits();
    let g = moments.gram(n);
    let l = cholesky(&g).map_err(|degree| Error::DegenerateMomentMatrix { degree })?;
    let inv = lower_triangular_inverse(&l);
    let log_s = moments.log_scale();
    let mut coeffs = Vec::with_capacity(n);
    let mut log_norms = Vec::with_capacity(n);
    for i in 0..n {
        let lii = l.get(i, i).re.clone();
        let mut row = Vec::with_capacity(i);
        for k in 0..i {
            row.push(inv.get(i, k).scale(&lii));
        }
        coeffs.push(row);
        let mut log_m = Float::with_val(prec, lii.square_ref()).ln();
        log_m += Float::with_val(prec, &log_s * (2 * i) as u32);
        log_norms.push(log_m);
    }
    Ok(MonicOrthoBasis {
        maxdeg: n - 1,
        prec,
        scale: moments.scale().clone(),
        coeffs,
        log_norms,
        cholesky_residual: reconstruction_defect(&g, &l),
        provenance: moments.provenance().to_string(),
    })
}

fn reconstruction_defect(g: &CMatrix, l: &CMatrix) -> f64 {
    let n = g.dim();
    let prec = g.prec();
    let mut worst = 0f64;
    for i in 0..n {
        for j in 0..=i {
            let mut acc = Cplx::zero(prec);
            for k in 0..=j {
                acc.add_mul_conj(l.get(i, k), l.get(j, k));
            }
            let diff = (&acc - g.get(i, j)).abs();
            let mut scale = Float::with_val(prec, &g.get(i, i).re * &g.get(j, j).re);
            scale = scale.sqrt();
            worst = worst.max((diff / scale).to_f64());
        }
    }
    worst
}

/// log M_n for n = 0..=N.
pub fn m_sequence(basis: &MonicOrthoBasis) -> &[Real] {
    basis.log_norms()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoEstimate {
    /// (n, M_n^{1/n}) for n in the window.
    pub sequence: Vec<(usize, f64)>,
    pub rho_plus_hat: f64,
    pub rho_minus_hat: f64,
    pub extrapolated: Option<f64>,
    pub window: (usize, usize),
    pub provenance: String,
}

/// n-th roots M_n^{1/n} over [n_min, N]. The running sup and inf are taken
/// over the last ⌈(N − n_min)/3⌉ entries, and the limit is estimated by a
/// least-squares fit of log M_n = n log ρ + c log n + d on the same tail.
pub fn rho_estimates(basis: &MonicOrthoBasis, n_min: usize) -> Result<RhoEstimate> {
    let n_max = basis.maxdeg();
    if n_min < 1 || n_min >= n_max || n_max - n_min + 1 < 4 {
        return Err(Error::WindowTooSmall {
            points: (n_max + 1).saturating_sub(n_min.max(1)),
        });
    }
    let logs: Vec<f64> = basis.log_norms().iter().map(|l| l.to_f64()).collect();
    let sequence: Vec<(usize, f64)> = (n_min..=n_max)
        .map(|n| (n, (logs[n] / n as f64).exp()))
        .collect();
    let tail_len = (n_max - n_min).div_ceil(3);
    let tail = &sequence[sequence.len() - tail_len..];
    let rho_plus_hat = tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let rho_minus_hat = tail.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let extrapolated = if tail_len >= 3 {
        let rows: Vec<usize> = tail.iter().map(|p| p.0).collect();
        let a = DMatrix::from_fn(rows.len(), 3, |i, j| {
            let n = rows[i] as f64;
            [n, n.ln(), 1.0][j]
        });
        let b = DVector::from_iterator(rows.len(), rows.iter().map(|&n| logs[n]));
        least_squares(&a, &b).map(|x| x[0].exp())
    } else {
        None
    };
    Ok(RhoEstimate {
        sequence,
        rho_plus_hat,
        rho_minus_hat,
        extrapolated,
        window: (n_min, n_max),
        provenance: basis.provenance().to_string(),
    })
}

/// Column-scaled least squares via SVD.
pub(crate) fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let norms: Vec<f64> = (0..a.ncols()).map(|j| a.column(j).norm().max(1e-300)).collect();
    let mut scaled = a.clone();
    for (j, nrm) in norms.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / nrm);
    }
    let x = scaled.svd(true, true).solve(b, 1e-13).ok()?;
    Some(DVector::from_iterator(x.len(), x.iter().zip(&norms).map(|(v, n)| v / n)))
}

/// The n roots of p_n with residuals |p_n(root)|.
pub fn zeros(basis: &MonicOrthoBasis, n: usize) -> Result<Vec<Root>> {
    if n < 1 || n > basis.maxdeg() {
        return Err(Error::InvalidArgument(format!(
            "degree {n} outside 1..={}",
            basis.maxdeg()
        )));
    }
    let prec = basis.prec;
    let mut coeffs = basis.coeffs[n].clone();
    let mut roots_u: Vec<Cplx> = Vec::with_capacity(n);
    // exact zero roots first
    while !coeffs.is_empty() && coeffs[0].is_zero() {
        roots_u.push(Cplx::zero(prec));
        coeffs.remove(0);
    }
    if !coeffs.is_empty() {
        let comp = companion(&coeffs, prec);
        let eig = hessenberg_eigenvalues(&comp).ok_or(Error::RootFinder { degree: n })?;
        roots_u.extend(eig);
    }
    let s = basis.scale.clone();
    let s_n = s.to_f64().powi(n as i32);
    Ok(roots_u
        .into_iter()
        .map(|u| {
            // |p_n(s·u)| = s^n |p'_n(u)|, evaluated by Horner at full precision
            let mut acc = Cplx::one(prec);
            for k in (0..n).rev() {
                acc = &acc * &u;
                acc.add_assign(&basis.coeffs[n][k]);
            }
            Root {
                z: u.scale(&s).to_c64(),
                residual: acc.abs().to_f64() * s_n,
            }
        })
        .collect())
}

/// (lower, upper) bounds for ρ₋(v) and ρ₊(v): squared capacities of Ω₋(v)
/// and of the support. Only two density classes are handled: constant
/// densities on a region (Ω₋ = support) and the chord-length weight of a
/// ball, whose local mass decays polynomially at every point of the closed
/// disc (Ω₋ = the disc).
pub fn theoretical_bounds(
    v: &Weight,
    capacity: &dyn Fn(&Region) -> Result<f64>,
) -> Result<(f64, f64)> {
    let supported = match v.density() {
        Density::Constant { .. } => true,
        Density::Radial { profile, .. } => *profile == Profile::Chi,
        Density::Generic { class, .. } => matches!(class, GenericClass::Ball3d { .. }),
    };
    if !supported {
        return Err(Error::BoundsNotDerivable);
    }
    let cap = capacity(v.support())?;
    Ok((cap * cap, cap * cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::pi;
    use crate::region::Point;
    use crate::weight::mixed_moments;

    fn disc_basis(center: Point, r: f64, n: usize, prec: u32) -> (MonicOrthoBasis, MomentTable) {
        let w = Weight::indicator(Region::disc(center, r).unwrap()).unwrap();
        let t = mixed_moments(&w, MomentKind::Plain, n, prec).unwrap();
        (monic_orthogonalize(&t).unwrap(), t)
    }

    #[test]
    fn centered_disc_gives_monomials() {
        let (b, _) = disc_basis(Point::new(0.0, 0.0), 1.5, 12, 128);
        for n in 0..=12 {
            for k in 0..n {
                assert!(b.coeff(n, k).is_zero());
            }
            // π r^{2n+2}/(n+1)
            let exact = (pi(128) * Float::with_val(128, 1.5f64).pow_u(2 * n + 2) / (n as u32 + 1)).ln();
            let err = Float::with_val(128, &b.log_norms()[n] - &exact).abs();
            assert!(err < 1e-30);
        }
        let roots = zeros(&b, 3).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.z.norm() == 0.0));
    }

    #[test]
    fn off_center_disc_first_polynomial() {
        let a = Point::new(0.6, -0.3);
        let (b, t) = disc_basis(a, 0.8, 6, 128);
        let c0 = b.coeff(1, 0).to_c64();
        assert!((c0 + a).norm() < 1e-25);
        let m1 = b.log_norms()[1].to_f64().exp();
        assert!((m1 - std::f64::consts::PI * 0.8f64.powi(4) / 2.0).abs() < 1e-14);
        let roots = zeros(&b, 1).unwrap();
        assert!((roots[0].z - a).norm() < 1e-14);
        assert!(b.orthogonality_defect(&t) < 1e-20);
        assert!(b.cholesky_residual() < 1e-30);
    }

    #[test]
    fn rho_window_checks() {
        let (b, _) = disc_basis(Point::new(0.0, 0.0), 1.0, 5, 128);
        assert!(rho_estimates(&b, 3).is_err());
        let r = rho_estimates(&b, 1).unwrap();
        assert!(r.rho_minus_hat <= r.rho_plus_hat);
        assert_eq!(r.window, (1, 5));
    }

    #[test]
    fn bounds_for_unsupported_density() {
        let w = Weight::radial(
            Region::disc(Point::new(0.0, 0.0), 1.0).unwrap(),
            Point::new(0.0, 0.0),
            Profile::Power(2),
        )
        .unwrap();
        let cap = |r: &Region| r.capacity_known().ok_or(Error::BoundsNotDerivable);
        assert_eq!(theoretical_bounds(&w, &cap).unwrap_err(), Error::BoundsNotDerivable);
        let d = Weight::indicator(Region::disc(Point::new(3.0, 0.0), 0.5).unwrap()).unwrap();
        assert_eq!(theoretical_bounds(&d, &cap).unwrap(), (0.25, 0.25));
    }
}
