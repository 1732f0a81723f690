//! Floating-point polynomial roots for the measure machinery.
//!
//! A deterministic Aberth-Ehrlich solver (fixed initial ring, no
//! randomness) with Newton polishing, plus relative-tolerance clustering
//! that assigns multiplicities summing exactly to the polynomial degree.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// All roots of `sum c_k z^k` (little-endian, nonzero leading coefficient),
/// unordered, one entry per root counted with multiplicity.
pub(crate) fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[0] / coeffs[1]]),
        2 => {
            let a = coeffs[2];
            let b = coeffs[1];
            let c = coeffs[0];
            let disc = (b * b - 4.0 * a * c).sqrt();
            // pick the sign that avoids cancellation
            let q = if (b.conj() * disc).re >= 0.0 {
                -0.5 * (b + disc)
            } else {
                -0.5 * (b - disc)
            };
            let r1 = q / a;
            let r2 = if q.norm() > 0.0 {
                c / q
            } else {
                Complex64::new(0.0, 0.0)
            };
            return Ok(vec![r1, r2]);
        }
        _ => {}
    }

    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * (k as f64))
        .collect();

    // Cauchy-style inclusion radius
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta =
                2.0 * std::f64::consts::PI * (j as f64) / (n as f64) + 0.41 / (n as f64) + 0.7;
            Complex64::from_polar(radius * (1.0 + 0.05 * (j as f64) / (n as f64)), theta)
        })
        .collect();

    let eval = |p: &[Complex64], x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in p.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    let mut converged = vec![false; n];
    for _sweep in 0..400 {
        let mut done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let p = eval(&monic, z[i]);
            let dp = eval(&deriv, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { p };
            let mut rep = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        rep += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * rep;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if step.norm() <= 1e-14 * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    // final Newton polish
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let p = eval(&monic, *zi);
            let dp = eval(&deriv, *zi);
            if dp.norm() > 1e-300 {
                let step = p / dp;
                if step.norm() < 1.0 {
                    *zi -= step;
                }
            }
        }
    }

    // residual sanity: a wildly non-converged configuration is reported
    let scale = radius.max(1.0);
    for zi in &z {
        let p = eval(&monic, *zi);
        if !p.norm().is_finite() || p.norm() > 1e-4 * scale.powi(n as i32) {
            return Err(Error::NumericalFailure(format!(
                "root finder residual {:.3e} at degree {n}",
                p.norm()
            )));
        }
    }
    Ok(z)
}

/// Cluster points within relative tolerance, returning `(centroid, count)`
/// with counts summing to the input length.
pub(crate) fn cluster_points(points: &[Complex64], rel_tol: f64) -> Vec<(Complex64, u32)> {
    let mut clusters: Vec<(Complex64, u32)> = Vec::new();
    for &p in points {
        let mut placed = false;
        for (c, m) in clusters.iter_mut() {
            let scale = 1.0f64.max(c.norm()).max(p.norm());
            if (*c - p).norm() <= rel_tol * scale {
                // running centroid
                let mf = *m as f64;
                *c = (*c * mf + p) / (mf + 1.0);
                *m += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((p, 1));
        }
    }
    clusters
}
