//! Complex roots of univariate polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `Σ c_k z^k` (ascending coefficients) as eigenvalues of the
/// companion matrix, polished by Newton steps on the original polynomial.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| *z == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let mut zeros = 0;
    while c.len() > 1 && c[0] == Complex64::new(0.0, 0.0) {
        c.remove(0);
        zeros += 1;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if c.len() < 2 {
        return out;
    }
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let eig: Vec<Complex64> = match m.clone().try_schur(1e-15, 500 * d) {
        Some(s) => s.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_else(|| durand_kerner(&c)),
        None => durand_kerner(&c),
    };
    for z in eig.iter() {
        out.push(polish(&c, *z));
    }
    out
}

/// Simultaneous iteration for all roots; slow near multiple roots but always
/// terminates.
fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let radius = 1.0 + monic[..d].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..d {
            let p = monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z[i] + a);
            let q = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if q.norm() == 0.0 {
                continue;
            }
            let step = p / q;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
    }
    z
}

pub fn real_poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    poly_roots(&coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect::<Vec<_>>())
}
