//! Special functions and one-dimensional quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::mp::Real;

/// Lower incomplete gamma γ(s, x) = ∫₀ˣ t^(s-1) e^(-t) dt for s > 0, x ≥ 0,
/// by the power series x^s e^(-x) Σ x^k / (s(s+1)...(s+k)).
pub fn lower_gamma(s: &Real, x: &Real) -> Real {
    let prec = s.prec().max(x.prec());
    if x.is_zero() {
        return Float::new(prec);
    }
    let wp = prec + 32;
    let s = Float::with_val(wp, s);
    let x = Float::with_val(wp, x);
    let mut term = Float::with_val(wp, s.recip_ref());
    let mut sum = term.clone();
    let mut denom = s.clone();
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    for _ in 0..100_000 {
        denom += 1u32;
        term *= &x;
        term /= &denom;
        sum += &term;
        if denom > x && Float::with_val(wp, term.abs_ref()) < Float::with_val(wp, &eps * &sum) {
            break;
        }
    }
    let log_pref = Float::with_val(wp, &s * Float::with_val(wp, x.ln_ref())) - &x;
    Float::with_val(prec, sum * log_pref.exp())
}

/// γ(n, x) for a positive integer n.
pub fn lower_gamma_int(n: u32, x: &Real) -> Real {
    lower_gamma(&Float::with_val(x.prec(), n), x)
}

/// Regularised P(s, x) = γ(s, x) / Γ(s).
pub fn regularized_lower_gamma(s: &Real, x: &Real) -> Real {
    let prec = s.prec().max(x.prec());
    let g = lower_gamma(s, x);
    let lg = Float::with_val(prec + 32, s).ln_gamma();
    Float::with_val(prec, g * Float::with_val(prec + 32, -lg).exp())
}

/// Gauss–Legendre rule on [-1, 1]: (nodes, weights), nodes ascending.
pub type GaussRule = Arc<(Vec<Real>, Vec<Real>)>;

fn gl_cache() -> &'static Mutex<HashMap<(usize, u32), GaussRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), GaussRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_k(x) and P_{k-1}(x) by the three-term recurrence.
fn legendre_pair(k: usize, x: &Real) -> (Real, Real) {
    let prec = x.prec();
    let mut p_prev = Float::with_val(prec, 1);
    let mut p = x.clone();
    if k == 0 {
        return (p_prev, Float::new(prec));
    }
    for j in 1..k {
        // (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
        let mut next = Float::with_val(prec, x * &p);
        next *= (2 * j + 1) as u32;
        next -= Float::with_val(prec, &p_prev * (j as u32));
        next /= (j + 1) as u32;
        p_prev = std::mem::replace(&mut p, next);
    }
    (p, p_prev)
}

/// k-point Gauss–Legendre rule at `prec` bits (cached).
pub fn gauss_legendre(k: usize, prec: u32) -> GaussRule {
    assert!(k >= 1);
    if let Some(rule) = gl_cache().lock().unwrap().get(&(k, prec)) {
        return rule.clone();
    }
    let wp = prec + 32;
    let mut nodes = vec![Float::new(prec); k];
    let mut weights = vec![Float::new(prec); k];
    let half = (k + 1) / 2;
    let kf = k as f64;
    for i in 0..half {
        // i-th largest root
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 4));
        let mut dp = Float::new(wp);
        for _ in 0..200 {
            let (p, pm1) = legendre_pair(k, &x);
            // P'_k = k (x P_k - P_{k-1}) / (x^2 - 1)
            let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
            dp = Float::with_val(wp, &x * &p) - &pm1;
            dp *= k as u32;
            dp /= &x2m1;
            let dx = Float::with_val(wp, &p / &dp);
            x -= &dx;
            if Float::with_val(wp, dx.abs_ref()) <= eps {
                let (p, pm1) = legendre_pair(k, &x);
                let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
                dp = Float::with_val(wp, &x * &p) - &pm1;
                dp *= k as u32;
                dp /= &x2m1;
                break;
            }
        }
        let one_minus = 1u32 - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2u32) / (one_minus * Float::with_val(wp, dp.square_ref()));
        let hi = k - 1 - i;
        nodes[hi] = Float::with_val(prec, &x);
        weights[hi] = Float::with_val(prec, &w);
        nodes[i] = Float::with_val(prec, -&x);
        weights[i] = Float::with_val(prec, &w);
    }
    if k % 2 == 1 {
        nodes[k / 2] = Float::new(prec);
    }
    let rule: GaussRule = Arc::new((nodes, weights));
    gl_cache().lock().unwrap().insert((k, prec), rule.clone());
    rule
}

/// f64 copy of a Gauss–Legendre rule.
pub fn gauss_legendre_f64(k: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(k, 128);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| (x.to_f64(), w.to_f64()))
        .collect()
}

const ADAPTIVE_ORDER: usize = 10;

/// Adaptive Gauss–Legendre integration in double precision: a panel is
/// accepted when its 10-point value agrees with the sum over its two halves to
/// `abs_tol` (scaled by panel width fraction); otherwise it is bisected.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let rule = RULE.get_or_init(|| gauss_legendre_f64(ADAPTIVE_ORDER));
    let panel = |lo: f64, hi: f64| -> f64 {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        rule.iter().map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    };
    if b <= a {
        return 0.0;
    }
    let total = b - a;
    let mut stack = vec![(a, b, panel(a, b), 0u32)];
    let mut acc = 0.0;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        let tol = abs_tol * ((hi - lo) / total).max(1e-3);
        if (left + right - whole).abs() <= tol || depth >= 60 {
            acc += left + right;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    acc
}

/// [`integrate_adaptive`] with a tolerance relative to a 64-panel first guess.
pub fn integrate_adaptive_rel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = gauss_legendre_f64(ADAPTIVE_ORDER);
    let panels = 64;
    let h = (b - a) / panels as f64;
    let guess: f64 = (0..panels)
        .map(|j| {
            let c = a + (j as f64 + 0.5) * h;
            rule.iter().map(|(x, w)| w * f(c + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum();
    let tol = rel_tol * guess.abs().max(f64::MIN_POSITIVE);
    integrate_adaptive(f, a, b, tol)
}

/// Composite Gauss–Legendre integration at extended precision: the number of
/// equal panels doubles until two successive values agree to `2^(-p/2)`
/// relative.
pub fn integrate_mp<F: Fn(&Real) -> Real>(f: &F, a: &Real, b: &Real, order: usize) -> Real {
    let prec = a.prec();
    let rule = gauss_legendre(order, prec);
    let eval = |panels: u32| -> Real {
        let width = Float::with_val(prec, b - a) / panels;
        let half = Float::with_val(prec, &width / 2u32);
        let mut sum = Float::new(prec);
        for j in 0..panels {
            let mut center = Float::with_val(prec, &width * j);
            center += a;
            center += &half;
            for (x, w) in rule.0.iter().zip(&rule.1) {
                let t = Float::with_val(prec, &center + Float::with_val(prec, &half * x));
                sum += Float::with_val(prec, w * f(&t));
            }
        }
        sum * half
    };
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let mut panels = 1u32;
    let mut prev = eval(panels);
    loop {
        panels *= 2;
        let cur = eval(panels);
        let diff = Float::with_val(prec, &cur - &prev).abs();
        let scale = Float::with_val(prec, cur.abs_ref());
        if diff <= Float::with_val(prec, &tol * &scale) || panels >= 1 << 12 {
            return cur;
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    /// γ(n, x) = (n-1)! (1 - e^{-x} Σ_{k<n} x^k/k!) evaluated at doubled precision.
    fn lower_gamma_finite_sum(n: u32, x: f64, prec: u32) -> Real {
        let wp = 2 * prec;
        let x = Float::with_val(wp, x);
        let mut term = Float::with_val(wp, 1);
        let mut sum = Float::with_val(wp, 1);
        for k in 1..n {
            term *= &x;
            term /= k;
            sum += &term;
        }
        let tail = 1u32 - sum * Float::with_val(wp, -&x).exp();
        Float::with_val(prec, tail * Float::with_val(wp, Float::factorial(n - 1)))
    }

    #[test]
    fn lower_gamma_matches_finite_sum() {
        for &(n, x) in &[(1u32, 1.0), (2, 1.0), (5, 0.3), (41, 1.0), (20, 4.0), (3, 10.0)] {
            let ours = lower_gamma_int(n, &Float::with_val(256, x));
            let oracle = lower_gamma_finite_sum(n, x, 256);
            let rel = Float::with_val(256, &ours - &oracle).abs() / &oracle;
            assert!(rel < 1e-60, "n={n} x={x} rel={}", rel.to_f64());
        }
    }

    #[test]
    fn lower_gamma_unit_values() {
        let one = Float::with_val(128, 1);
        let g1 = lower_gamma_int(1, &one).to_f64();
        assert!((g1 - (1.0 - (-1f64).exp())).abs() < 1e-15);
        let g2 = lower_gamma_int(2, &one).to_f64();
        assert!((g2 - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-15);
        assert!((g2 - 0.264241).abs() < 1e-6);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let prec = 192;
        for k in [1usize, 2, 5, 16, 33] {
            let rule = gauss_legendre(k, prec);
            for deg in 0..(2 * k) {
                let mut s = Float::new(prec);
                for (x, w) in rule.0.iter().zip(&rule.1) {
                    s += Float::with_val(prec, w * Float::with_val(prec, x.pow(deg as u32)));
                }
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let err = Float::with_val(prec, &s - exact).abs().to_f64();
                // f64 literal for the exact value limits us to ~1e-16
                assert!(err < 1e-15, "k={k} deg={deg} err={err}");
            }
        }
    }

    #[test]
    fn gauss_legendre_high_precision_moment() {
        let prec = 256;
        let rule = gauss_legendre(20, prec);
        let mut s = Float::new(prec);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            s += Float::with_val(prec, w * Float::with_val(prec, x.pow(10u32)));
        }
        let exact = Float::with_val(prec, 2) / 11u32;
        assert!(Float::with_val(prec, &s - &exact).abs() < 1e-70);
    }

    #[test]
    fn adaptive_integration_handles_a_jump() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let v = integrate_adaptive(&f, 0.0, 1.0, 1e-13);
        assert!((v - 0.3).abs() < 1e-11, "{v}");
        let g = |x: f64| (1.0 - x * x).max(0.0).sqrt();
        let v = integrate_adaptive(&g, -1.0, 1.0, 1e-13);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn mp_integration_of_incomplete_gamma_integrand() {
        let prec = 192;
        let f = |t: &Real| {
            let p = Float::with_val(prec, t.pow(7u32));
            p * Float::with_val(prec, -t).exp()
        };
        let v = integrate_mp(&f, &Float::new(prec), &Float::with_val(prec, 1), 12);
        let g = lower_gamma_int(8, &Float::with_val(prec, 1));
        let rel = (Float::with_val(prec, &v - &g) / &g).abs();
        assert!(rel < 1e-40);
    }
}
