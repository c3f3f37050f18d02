//! Cyclic Jacobi eigendecomposition for dense symmetric matrices.

use crate::linalg::mat::{norm2, Mat};
use crate::{Error, Result};

/// Eigendecomposition of a symmetric matrix: `values` ascending,
/// `vectors` holds the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

const MAX_SWEEPS: usize = 60;

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Rejects inputs whose asymmetry exceeds `1e-10` relative to the largest
/// entry. Off-diagonal mass is annihilated until it falls below machine
/// precision, so eigenpair residuals land near 1e-14 * |A|.
pub fn eigh(a: &Mat) -> Result<SymEigen> {
    a.require_symmetric(1e-10)?;
    let n = a.rows();
    if n == 0 {
        return Ok(SymEigen { values: vec![], vectors: Mat::zeros(0, 0) });
    }

    let mut m = a.clone();
    m.symmetrize();
    let mut v = Mat::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].abs();
            }
        }
        if off == 0.0 {
            return Ok(sorted(d, v));
        }
        // threshold phase keeps early sweeps from chasing negligible entries
        let tresh = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };

        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let g = 100.0 * m[(p, q)].abs();
                if sweep > 3
                    && d[p].abs() + g == d[p].abs()
                    && d[q].abs() + g == d[q].abs()
                {
                    m[(p, q)] = 0.0;
                    continue;
                }
                if m[(p, q)].abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    m[(p, q)] / h
                } else {
                    let theta = 0.5 * h / m[(p, q)];
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * m[(p, q)];
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[(p, q)] = 0.0;
                let rotate = |m: &mut Mat, i: usize, j: usize, k: usize, l: usize| {
                    let g = m[(i, j)];
                    let h = m[(k, l)];
                    m[(i, j)] = g - s * (h + g * tau);
                    m[(k, l)] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut m, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut m, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut m, p, j, q, j);
                }
                for j in 0..n {
                    rotate(&mut v, j, p, j, q);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }

    Err(Error::NoConvergence("Jacobi sweeps exhausted"))
}

fn sorted(d: Vec<f64>, v: Mat) -> SymEigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    SymEigen { values, vectors }
}

/// Max over eigenpairs of ||A v - lambda v||_2.
pub fn eigen_residual(a: &Mat, e: &SymEigen) -> f64 {
    let n = a.rows();
    let mut worst = 0.0_f64;
    for (k, &lambda) in e.values.iter().enumerate() {
        let v = e.vectors.column(k);
        let av = a.mul_vec(&v);
        let r: Vec<f64> = (0..n).map(|i| av[i] - lambda * v[i]).collect();
        worst = worst.max(norm2(&r));
    }
    worst
}
