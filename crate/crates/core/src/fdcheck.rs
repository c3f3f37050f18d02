//! Central finite-difference checks for gradients and Hessians.

use crate::linalg::Mat;

/// Central-difference gradient of a scalar function.
pub fn gradient(f: impl Fn(&[f64]) -> f64, z: &[f64], step: f64) -> Vec<f64> {
    let mut out = vec![0.0; z.len()];
    let mut work = z.to_vec();
    for k in 0..z.len() {
        work[k] = z[k] + step;
        let fp = f(&work);
        work[k] = z[k] - step;
        let fm = f(&work);
        work[k] = z[k];
        out[k] = (fp - fm) / (2.0 * step);
    }
    out
}

/// Central-difference Jacobian of a gradient (i.e. a Hessian estimate),
/// symmetrized.
pub fn jacobian_of_gradient(g: impl Fn(&[f64]) -> Vec<f64>, z: &[f64], step: f64) -> Mat {
    let d = z.len();
    let mut out = Mat::zeros(d, d);
    let mut work = z.to_vec();
    for k in 0..d {
        work[k] = z[k] + step;
        let gp = g(&work);
        work[k] = z[k] - step;
        let gm = g(&work);
        work[k] = z[k];
        for i in 0..d {
            out[(i, k)] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    out.symmetrize();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient() {
        // f = x^2 + 3xy
        let f = |z: &[f64]| z[0] * z[0] + 3.0 * z[0] * z[1];
        let g = gradient(f, &[2.0, -1.0], 1e-6);
        assert!((g[0] - 1.0).abs() < 1e-8);
        assert!((g[1] - 6.0).abs() < 1e-8);
    }

    #[test]
    fn quadratic_hessian() {
        let g = |z: &[f64]| vec![2.0 * z[0] + 3.0 * z[1], 3.0 * z[0]];
        let h = jacobian_of_gradient(g, &[0.3, 0.7], 1e-6);
        assert!((h[(0, 0)] - 2.0).abs() < 1e-8);
        assert!((h[(0, 1)] - 3.0).abs() < 1e-8);
        assert!((h[(1, 1)]).abs() < 1e-8);
    }
}
