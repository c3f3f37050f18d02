//! Dense nonsymmetric eigenvalues: balancing, Hessenberg reduction, and the
//! shifted double-step QR iteration, plus complex inverse iteration used to
//! validate eigenpair residuals.

use num_complex::Complex64;

use crate::linalg::mat::Mat;
use crate::{Error, Result};

/// All complex eigenvalues of a real square matrix, sorted by (re, im).
pub fn eig(a: &Mat) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![Complex64::new(a[(0, 0)], 0.0)]);
    }
    let mut h = a.clone();
    balance(&mut h);
    elmhes(&mut h);
    let mut eigs = hqr(&mut h)?;
    sort_complex(&mut eigs);
    Ok(eigs)
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// Collapse eigenvalue clusters tighter than the attainable forward error
/// onto their means.
///
/// A multiple eigenvalue of a defective matrix splits by O(sqrt(eps |A|))
/// under any backward-stable method, while the mean of the split cluster
/// stays accurate to O(eps |A|). Averaging therefore restores the accuracy
/// of repeated eigenvalues without touching well-separated ones; `scale`
/// should be the magnitude of the matrix the spectrum came from.
pub fn refine_spectrum_clusters(eigs: &mut [Complex64], scale: f64) {
    let width = 8.0 * (f64::EPSILON * scale.max(1.0)).sqrt();
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigs[i] - eigs[j]).norm() <= width {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut sum = vec![Complex64::new(0.0, 0.0); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sum[r] += eigs[i];
        count[r] += 1;
    }
    for i in 0..n {
        let r = find(&mut parent, i);
        eigs[i] = sum[r] / count[r] as f64;
    }
}

/// Diagonal similarity scaling so row and column norms become comparable.
fn balance(a: &mut Mat) {
    let n = a.rows();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut c2 = c;
                while c2 < g {
                    f *= RADIX;
                    c2 *= sqrdx;
                }
                g = r * RADIX;
                while c2 > g {
                    f /= RADIX;
                    c2 /= sqrdx;
                }
                if (c2 + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= ginv;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Reduce to upper Hessenberg form by stabilized elementary similarity
/// transformations.
fn elmhes(a: &mut Mat) {
    let n = a.rows();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0_f64;
        let mut i_piv = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                i_piv = j;
            }
        }
        if i_piv != m {
            for j in (m - 1)..n {
                let t = a[(i_piv, j)];
                a[(i_piv, j)] = a[(m, j)];
                a[(m, j)] = t;
            }
            for j in 0..n {
                let t = a[(j, i_piv)];
                a[(j, i_piv)] = a[(j, m)];
                a[(j, m)] = t;
            }
        }
        if x != 0.0 {
            for i in (m + 1)..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = 0.0;
                    for j in m..n {
                        let sub = y * a[(m, j)];
                        a[(i, j)] -= sub;
                    }
                    for j in 0..n {
                        let add = y * a[(j, i)];
                        a[(j, m)] += add;
                    }
                }
            }
        }
    }
    // clear junk below the subdiagonal
    for i in 2..n {
        for j in 0..(i - 1) {
            a[(i, j)] = 0.0;
        }
    }
}

/// QR eigenvalue iteration with implicit double shifts on an upper
/// Hessenberg matrix. Eigenvalues only.
fn hqr(a: &mut Mat) -> Result<Vec<Complex64>> {
    let n = a.rows();
    let eps = f64::EPSILON;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut nn = n - 1;
    let mut t = 0.0;
    'outer: loop {
        let mut its = 0;
        loop {
            // find a negligible subdiagonal element
            let mut l = nn;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                // one real root
                wr[nn] = x + t;
                wi[nn] = 0.0;
                if nn == 0 {
                    break 'outer;
                }
                nn -= 1;
                break;
            }
            let mut y = a[(nn - 1, nn - 1)];
            let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
            if l == nn - 1 {
                // a pair of roots from the trailing 2x2
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.abs().copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = wr[nn - 1];
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn] = z;
                    wi[nn - 1] = -z;
                }
                if nn <= 1 {
                    break 'outer;
                }
                nn -= 2;
                break;
            }
            // no convergence yet: perform a QR step
            if its == 60 {
                return Err(Error::NoConvergence("QR iteration limit"));
            }
            // exceptional shifts break the symmetric-spectrum stalls that
            // quadruple-symmetric companion matrices can produce
            if its != 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nn {
                    a[(i, i)] -= x;
                }
                let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - rr - ss;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }
            for k in m..nn {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k + 1 != nn { a[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nn {
                            pp += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= pp * z;
                        }
                        a[(k + 1, j)] -= pp * y;
                        a[(k, j)] -= pp * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nn {
                            pp += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= pp * r;
                        }
                        a[(i, k + 1)] -= pp * q;
                        a[(i, k)] -= pp;
                    }
                }
            }
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Deterministic pseudo-random stream (splitmix64), mapped into [-0.5, 0.5).
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// LU factorization with partial pivoting over complex numbers.
/// Singular pivots are replaced by a tiny value so inverse iteration can
/// proceed on (A - lambda I) when lambda is an exact eigenvalue.
struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
}

impl ComplexLu {
    fn factor(mut m: Vec<Complex64>, n: usize, tiny: f64) -> Self {
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut best = k;
            let mut best_mag = m[k * n + k].norm_sqr();
            for i in (k + 1)..n {
                let mag = m[i * n + k].norm_sqr();
                if mag > best_mag {
                    best_mag = mag;
                    best = i;
                }
            }
            if best != k {
                for j in 0..n {
                    m.swap(k * n + j, best * n + j);
                }
                piv.swap(k, best);
            }
            if m[k * n + k].norm() < tiny {
                m[k * n + k] = Complex64::new(tiny, 0.0);
            }
            let inv = m[k * n + k].inv();
            for i in (k + 1)..n {
                let f = m[i * n + k] * inv;
                m[i * n + k] = f;
                for j in (k + 1)..n {
                    let sub = f * m[k * n + j];
                    m[i * n + j] -= sub;
                }
            }
        }
        Self { n, lu: m, piv }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for k in 0..i {
                let sub = self.lu[i * n + k] * x[k];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let sub = self.lu[i * n + k] * x[k];
                x[i] -= sub;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// ||A v - lambda v||_2 for the unit-norm v obtained by inverse iteration
/// with the fixed shift `lambda`.
pub fn eigenpair_residual(a: &Mat, lambda: Complex64) -> f64 {
    let n = a.rows();
    let scale = a.max_abs().max(1.0);
    let tiny = f64::EPSILON * scale * n as f64;
    let mut shifted = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            shifted[i * n + j] = Complex64::new(a[(i, j)], 0.0);
        }
        shifted[i * n + i] -= lambda;
    }
    let lu = ComplexLu::factor(shifted, n, tiny);

    let mut rng = SplitMix::new(0x5ca1ab1e);
    let mut v: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.next_f64(), rng.next_f64())).collect();
    normalize(&mut v);

    let mut best = f64::INFINITY;
    for _ in 0..4 {
        let mut w = lu.solve(&v);
        normalize(&mut w);
        v = w.clone();
        // residual of the candidate
        let mut r = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                s += a[(i, j)] * w[j];
            }
            r[i] = s - lambda * w[i];
        }
        let res = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        best = best.min(res);
        if best < f64::EPSILON * scale {
            break;
        }
        normalize(&mut w);
    }
    best
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
}

/// Max over eigenvalues of the inverse-iteration eigenpair residual.
pub fn max_eigenpair_residual(a: &Mat, eigs: &[Complex64]) -> f64 {
    eigs.iter().map(|&l| eigenpair_residual(a, l)).fold(0.0, f64::max)
}
