//! Hessians in the symmetry-adapted basis: block extraction, closed-form
//! eigenvalues for the plain ring, a dense symmetric oracle, and the
//! degeneracy scan over the central mass.

use crate::linalg::{eigh, eigen_residual, Mat};
use crate::nbody::{hessian_at_reference, Configuration, TargetFn};
use crate::parallel;
use crate::symmetry_basis::{pair_max, PermRepresentation, RotPart, SubspaceLabel, SymmetryBasis};
use crate::{Error, Result};

/// Default relative tolerance for the off-block residual of P^T H P.
pub const DEFAULT_BLOCK_TOL: f64 = 1e-9;

/// Clustering width for eigenvalue multiplicities, relative to the
/// spectral radius.
pub const MULTIPLICITY_TOL: f64 = 1e-7;

/// One extracted diagonal block (2x2 or 3x3).
#[derive(Clone, Debug)]
pub struct Block {
    pub label: SubspaceLabel,
    pub columns: Vec<usize>,
    pub entries: Mat,
    pub eigenvalues: Vec<f64>,
}

/// The block-diagonal content of a transformed Hessian: scalar entries,
/// small blocks, the clustered eigenvalue multiset, and the largest entry
/// found outside the declared blocks.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    pub scalars: Vec<(SubspaceLabel, f64)>,
    pub blocks: Vec<Block>,
    pub eigenvalues: Vec<(f64, usize)>,
    pub off_block_residual: f64,
}

impl BlockSpectrum {
    /// All eigenvalues expanded by multiplicity, ascending.
    pub fn eigenvalue_multiset(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (v, m) in &self.eigenvalues {
            out.extend(std::iter::repeat_n(*v, *m));
        }
        out
    }
}

/// P^T H P, symmetrized. `H` must be symmetric and match the basis size.
pub fn transform(h: &Mat, basis: &SymmetryBasis) -> Result<Mat> {
    if h.rows() != basis.dim() || h.cols() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: h.rows() });
    }
    h.require_symmetric(1e-10)?;
    let p = basis.matrix();
    let mut t = p.transpose().matmul(&h.matmul(p));
    t.symmetrize();
    Ok(t)
}

/// Read the labeled scalar entries and blocks off a transformed matrix.
///
/// `tol_rel` bounds the acceptable off-block residual relative to the
/// largest entry of `t`; exceeding it means the original matrix did not
/// commute with the group action (or the basis ordering is wrong).
pub fn extract_blocks(t: &Mat, basis: &SymmetryBasis, tol_rel: f64) -> Result<BlockSpectrum> {
    if t.rows() != basis.dim() || t.cols() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: t.rows() });
    }
    let labels = basis.labels();
    let mut off = 0.0_f64;
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            if labels[i] != labels[j] {
                off = off.max(t[(i, j)].abs());
            }
        }
    }
    let tol = tol_rel * t.max_abs().max(1.0);
    if off > tol {
        return Err(Error::StructureViolation { residual: off, tol });
    }

    let mut scalars = Vec::new();
    let mut blocks = Vec::new();
    let mut all_eigs = Vec::new();
    for (label, cols) in basis.groups() {
        if cols.len() == 1 {
            let v = t[(cols[0], cols[0])];
            scalars.push((label, v));
            all_eigs.push(v);
        } else {
            let entries = t.submatrix(&cols, &cols);
            let eigenvalues = small_sym_eigs(&entries)?;
            all_eigs.extend_from_slice(&eigenvalues);
            blocks.push(Block { label, columns: cols, entries, eigenvalues });
        }
    }
    let eigenvalues = cluster_multiplicities(all_eigs, multiplicity_width_of(t.max_abs()));
    Ok(BlockSpectrum { scalars, blocks, eigenvalues, off_block_residual: off })
}

fn multiplicity_width_of(scale: f64) -> f64 {
    MULTIPLICITY_TOL * scale.max(1.0)
}

/// Eigenvalues of a small symmetric block: closed form for 1x1/2x2,
/// Jacobi for anything larger.
fn small_sym_eigs(m: &Mat) -> Result<Vec<f64>> {
    match m.rows() {
        0 => Ok(vec![]),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let (lo, hi) = sym2x2_eigs(m[(0, 0)], m[(1, 1)], 0.5 * (m[(0, 1)] + m[(1, 0)]))?;
            Ok(vec![lo, hi])
        }
        _ => Ok(eigh(m)?.values),
    }
}

/// Roots of lambda^2 - a lambda + b with a = trace and b = determinant.
/// Rounding can push the discriminant of a symmetric block slightly below
/// zero; within 1e-12 relative it is clamped, beyond that the block was not
/// symmetric and the input is rejected.
fn sym2x2_eigs(a11: f64, a22: f64, a12: f64) -> Result<(f64, f64)> {
    let a = a11 + a22;
    let b = a11 * a22 - a12 * a12;
    let mut disc = a * a - 4.0 * b;
    if disc < 0.0 {
        if disc.abs() <= 1e-12 * (a * a).max(1.0) {
            disc = 0.0;
        } else {
            return Err(Error::NotSymmetric(disc.abs().sqrt()));
        }
    }
    let root = disc.sqrt();
    Ok(((a - root) / 2.0, (a + root) / 2.0))
}

/// Evaluate the closed-form scalar entries and 2x2 blocks of the plain
/// ring's Hessian directly from the first two columns of H.
///
/// The entries combine the second partials against x_1 and y_1 with weights
/// (2/n)(n-p) and the angles p*theta and p*k*theta; the second block family
/// equals the first. Available for the plain n-gon only.
pub fn closed_form_spectrum(c: &Configuration, which: TargetFn) -> Result<BlockSpectrum> {
    if c.has_center() {
        return Err(Error::Unsupported("closed-form blocks exist only for the plain n-gon"));
    }
    let n = c.ring_count();
    let h = hessian_at_reference(c, which);
    let theta = std::f64::consts::TAU / n as f64;

    // second partials against x_1 (column 0) and y_1 (column 1), taken at
    // the ring body p steps behind body 1
    let dxx = |p: usize| h[(2 * (n - p), 0)];
    let dyx = |p: usize| h[(2 * (n - p) + 1, 0)];
    let dxy = |p: usize| h[(2 * (n - p), 1)];
    let dyy = |p: usize| h[(2 * (n - p) + 1, 1)];

    let weighted = |f: &dyn Fn(usize, f64, f64) -> f64| -> f64 {
        let mut acc = 0.0;
        for p in 1..n {
            let (sin, cos) = (p as f64 * theta).sin_cos();
            acc += f(p, sin, cos) * (n - p) as f64;
        }
        acc * 2.0 / n as f64
    };

    let lambda1 = weighted(&|p, s, c| dxx(p) * c - dyx(p) * s) + h[(0, 0)];
    let lambda2 = weighted(&|p, s, c| dxy(p) * s + dyy(p) * c) + h[(1, 1)];

    let even = n % 2 == 0;
    let mut scalars = vec![
        (SubspaceLabel { s_sign: 1, rot: RotPart::One }, lambda1),
        (SubspaceLabel { s_sign: -1, rot: RotPart::One }, lambda2),
    ];
    if even {
        let alt = |p: usize| if p % 2 == 0 { 1.0 } else { -1.0 };
        let lambda3 = weighted(&|p, s, c| alt(p) * (dxx(p) * c - dyx(p) * s)) + h[(0, 0)];
        let lambda4 = weighted(&|p, s, c| alt(p) * (dxy(p) * s + dyy(p) * c)) + h[(1, 1)];
        scalars.push((SubspaceLabel { s_sign: 1, rot: RotPart::MinusOne }, lambda3));
        scalars.push((SubspaceLabel { s_sign: -1, rot: RotPart::MinusOne }, lambda4));
    }

    let scalar_count = scalars.len();
    let mut blocks = Vec::new();
    let mut all_eigs: Vec<f64> = scalars.iter().map(|(_, v)| *v).collect();
    for k in 1..=pair_max(n) {
        let ck = |p: usize| ((p * k) as f64 * theta).cos();
        let sk = |p: usize| ((p * k) as f64 * theta).sin();
        let a11 = weighted(&|p, s, c| (dxx(p) * c - dyx(p) * s) * ck(p)) + h[(0, 0)];
        let a22 = weighted(&|p, s, c| (dxy(p) * s + dyy(p) * c) * ck(p)) + h[(1, 1)];
        let a12 = weighted(&|p, s, c| (dxy(p) * c - dyy(p) * s) * sk(p));
        let entries = Mat::from_rows(&[&[a11, a12], &[a12, a22]]);
        let (lo, hi) = sym2x2_eigs(a11, a22, a12)?;
        let base = scalar_count + 4 * (k - 1);
        for (s_sign, cols) in [(1_i8, vec![base, base + 1]), (-1, vec![base + 2, base + 3])] {
            blocks.push(Block {
                label: SubspaceLabel { s_sign, rot: RotPart::Pair(k) },
                columns: cols,
                entries: entries.clone(),
                eigenvalues: vec![lo, hi],
            });
            all_eigs.push(lo);
            all_eigs.push(hi);
        }
    }

    let scale = all_eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eigenvalues = cluster_multiplicities(all_eigs, multiplicity_width_of(scale));
    Ok(BlockSpectrum { scalars, blocks, eigenvalues, off_block_residual: 0.0 })
}

/// Full spectrum of a symmetric matrix by the Jacobi iteration, sorted
/// ascending, with every eigenpair residual verified below 1e-9.
pub fn dense_spectrum_oracle(h: &Mat) -> Result<Vec<f64>> {
    let e = eigh(h)?;
    let res = eigen_residual(h, &e);
    if res > 1e-9 {
        return Err(Error::NoConvergence("eigenpair residual above 1e-9"));
    }
    Ok(e.values)
}

/// Largest relative commutation defect of `h` against the two generator
/// matrices, ||H D - D H||_inf / ||H||_inf.
pub fn commutation_residual(rep: &PermRepresentation, h: &Mat) -> Result<f64> {
    use crate::dihedral::GroupElement;
    let n = rep.ring_count();
    let scale = h.norm_inf().max(1.0);
    let mut worst = 0.0_f64;
    for g in [GroupElement::reflection(0, n)?, GroupElement::rotation(1, n)?] {
        let d = rep.matrix(&g)?;
        let defect = h.matmul(&d).sub(&d.matmul(h)).norm_inf();
        worst = worst.max(defect / scale);
    }
    Ok(worst)
}

/// Group a sorted copy of `values` into clusters of the given width and
/// report (cluster mean, multiplicity) pairs.
pub fn cluster_multiplicities(mut values: Vec<f64>, width: f64) -> Vec<(f64, usize)> {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 0..values.len() {
        if i + 1 == values.len() || values[i + 1] - values[i] > width {
            let group = &values[start..=i];
            let mean = group.iter().sum::<f64>() / group.len() as f64;
            out.push((mean, group.len()));
            start = i + 1;
        }
    }
    out
}

/// Worst pairwise deviation |a_i - b_i| / max(1, |a_i|) after sorting both
/// multisets. `None` when the lengths differ.
pub fn multiset_relative_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
            .fold(0.0, f64::max),
    )
}

/// One evaluated point of the central-mass grid.
#[derive(Clone, Debug)]
pub struct MassGridPoint {
    pub mass: f64,
    /// Eigenvalues below 1e-7 of the spectral radius.
    pub zero_count: usize,
    pub determinants: Vec<(SubspaceLabel, f64)>,
}

/// A refined root of a block determinant: the central mass at which that
/// block of the centered ring's Hessian becomes singular.
#[derive(Clone, Debug)]
pub struct CriticalMass {
    pub mass: f64,
    pub label: SubspaceLabel,
    pub det: f64,
}

#[derive(Clone, Debug)]
pub struct MassScan {
    pub grid: Vec<MassGridPoint>,
    pub critical: Vec<CriticalMass>,
}

/// Scan the centered configuration's Hessian of sqrt(I)*U over a mass grid,
/// then bisect every block-determinant sign change down to 1e-10 in m.
///
/// The two scalar blocks holding the scaling and rotation null directions
/// are excluded from root finding (their determinants vanish identically).
/// Runs the grid in parallel when the `parallel` feature is enabled.
pub fn degeneracy_scan(n: usize, m_lo: f64, m_hi: f64, steps: usize) -> Result<MassScan> {
    scan_impl(n, m_lo, m_hi, steps, true)
}

/// Sequential reference implementation of [`degeneracy_scan`].
pub fn degeneracy_scan_seq(n: usize, m_lo: f64, m_hi: f64, steps: usize) -> Result<MassScan> {
    scan_impl(n, m_lo, m_hi, steps, false)
}

const BISECTION_TOL_M: f64 = 1e-10;

fn scan_impl(n: usize, m_lo: f64, m_hi: f64, steps: usize, par: bool) -> Result<MassScan> {
    if !(m_lo > 0.0) || !(m_hi > m_lo) {
        return Err(Error::InvalidArgument(format!(
            "mass range must satisfy 0 < lo < hi, got [{m_lo}, {m_hi}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 grid steps, got {steps}")));
    }
    let basis = SymmetryBasis::new(n, true)?;
    let grid_mass =
        |i: usize| m_lo + (m_hi - m_lo) * i as f64 / (steps - 1) as f64;

    let eval = |i: usize| -> Result<MassGridPoint> {
        let m = grid_mass(i);
        let spectrum = centered_spectrum(n, m, &basis)?;
        let multiset = spectrum.eigenvalue_multiset();
        let radius = multiset.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1e-300);
        let zero_count = multiset.iter().filter(|v| v.abs() / radius < 1e-7).count();
        let mut determinants = Vec::new();
        for (label, v) in &spectrum.scalars {
            determinants.push((*label, *v));
        }
        for b in &spectrum.blocks {
            determinants.push((b.label, det_small(&b.entries)));
        }
        Ok(MassGridPoint { mass: m, zero_count, determinants })
    };

    let evaluated: Vec<Result<MassGridPoint>> = if par {
        parallel::map_range(steps, eval)
    } else {
        parallel::map_range_seq(steps, eval)
    };
    let mut grid = Vec::with_capacity(steps);
    for point in evaluated {
        grid.push(point?);
    }

    // bracket sign changes per non-trivial label and refine by bisection
    let trivial = |label: &SubspaceLabel| label.rot == RotPart::One;
    let mut critical = Vec::new();
    let n_labels = grid[0].determinants.len();
    for li in 0..n_labels {
        let label = grid[0].determinants[li].0;
        if trivial(&label) {
            continue;
        }
        for w in 0..(steps - 1) {
            let (m_a, d_a) = (grid[w].mass, grid[w].determinants[li].1);
            let (m_b, d_b) = (grid[w + 1].mass, grid[w + 1].determinants[li].1);
            if d_a == 0.0 || d_a.signum() == d_b.signum() {
                continue;
            }
            let (mass, det) = bisect_block_det(n, &basis, label, (m_a, d_a), (m_b, d_b))?;
            critical.push(CriticalMass { mass, label, det });
        }
    }
    critical.sort_by(|a, b| a.mass.partial_cmp(&b.mass).unwrap());
    Ok(MassScan { grid, critical })
}

fn centered_spectrum(n: usize, m: f64, basis: &SymmetryBasis) -> Result<BlockSpectrum> {
    let c = Configuration::centered(n, m)?;
    let h = hessian_at_reference(&c, TargetFn::Normalized);
    let t = transform(&h, basis)?;
    extract_blocks(&t, basis, DEFAULT_BLOCK_TOL)
}

fn labeled_block_det(n: usize, basis: &SymmetryBasis, label: SubspaceLabel, m: f64) -> Result<f64> {
    let c = Configuration::centered(n, m)?;
    let h = hessian_at_reference(&c, TargetFn::Normalized);
    let cols: Vec<usize> = basis
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == label)
        .map(|(i, _)| i)
        .collect();
    // restricted transform: only the block's columns are needed
    let p = basis.matrix();
    let d = cols.len();
    let mut sub = Mat::zeros(d, d);
    for (a, &ca) in cols.iter().enumerate() {
        let hca = h.mul_vec(&p.column(ca));
        for (b, &cb) in cols.iter().enumerate() {
            sub[(a, b)] = crate::linalg::dot(&hca, &p.column(cb));
        }
    }
    sub.symmetrize();
    Ok(det_small(&sub))
}

fn bisect_block_det(
    n: usize,
    basis: &SymmetryBasis,
    label: SubspaceLabel,
    (mut m_a, mut d_a): (f64, f64),
    (mut m_b, _d_b): (f64, f64),
) -> Result<(f64, f64)> {
    while m_b - m_a > BISECTION_TOL_M {
        let mid = 0.5 * (m_a + m_b);
        let d_mid = labeled_block_det(n, basis, label, mid)?;
        if d_mid == 0.0 {
            return Ok((mid, d_mid));
        }
        if d_mid.signum() == d_a.signum() {
            m_a = mid;
            d_a = d_mid;
        } else {
            m_b = mid;
        }
    }
    let mass = 0.5 * (m_a + m_b);
    Ok((mass, labeled_block_det(n, basis, label, mass)?))
}

fn det_small(m: &Mat) -> f64 {
    match m.rows() {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => unreachable!("blocks are at most 3x3"),
    }
}
