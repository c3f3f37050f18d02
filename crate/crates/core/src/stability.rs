//! Linear stability of the ring relative equilibrium. The rotating-frame
//! linearization xi'' = 2 omega J xi' + omega^2 xi + D^2U(z0) xi is pushed
//! through the symmetry basis, where it splits into quadratic eigenvalue
//! problems of size at most 4. Each one is solved by companion
//! linearization and the union is checked against the dense 4n x 4n
//! first-order spectrum.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{
    dot, eig, max_eigenpair_residual, norm_inf, refine_spectrum_clusters, sort_complex, Mat,
};
use crate::nbody::{eval_moment, eval_potential, Configuration};
use crate::symmetry_basis::{RotPart, SubspaceLabel, SymmetryBasis};
use crate::{Error, Result};

/// The rotating-frame data for the ring of n unit masses: the angular
/// frequency omega with omega^2 = U(z0) / (2 I(z0)), the potential Hessian
/// at z0, and the block-diagonal spin matrix J.
#[derive(Clone, Debug)]
pub struct RotatingFrameProblem {
    pub config: Configuration,
    pub omega: f64,
    pub u_hessian: Mat,
    pub j: Mat,
    /// max-norm of omega^2 z0 + grad U(z0); vanishes at the relative
    /// equilibrium.
    pub equilibrium_residual: f64,
}

impl RotatingFrameProblem {
    pub fn build(n: usize) -> Result<Self> {
        let config = Configuration::ngon(n)?;
        let z0 = config.reference_coords();
        let moment = eval_moment(&config, &z0)?;
        let pot = eval_potential(&config, &z0)?;
        let omega = (pot.value / (2.0 * moment.value)).sqrt();
        let residual: Vec<f64> = z0
            .iter()
            .zip(&pot.gradient)
            .map(|(z, g)| omega * omega * z + g)
            .collect();
        Ok(Self {
            config,
            omega,
            u_hessian: pot.hessian,
            j: spin_matrix(n),
            equilibrium_residual: norm_inf(&residual),
        })
    }

    pub fn dim(&self) -> usize {
        self.u_hessian.rows()
    }

    /// The problem after the time rescale t -> t/c: omega scales by c and
    /// the potential Hessian by c^2, so every eigenvalue scales by c.
    pub fn time_rescaled(&self, c: f64) -> Self {
        Self {
            config: self.config.clone(),
            omega: c * self.omega,
            u_hessian: self.u_hessian.scaled(c * c),
            j: self.j.clone(),
            equilibrium_residual: c * c * self.equilibrium_residual,
        }
    }
}

/// Block-diagonal matrix of 2x2 blocks J1 = [[0, 1], [-1, 0]], one per body.
pub fn spin_matrix(bodies: usize) -> Mat {
    let mut j = Mat::zeros(2 * bodies, 2 * bodies);
    for b in 0..bodies {
        j[(2 * b, 2 * b + 1)] = 1.0;
        j[(2 * b + 1, 2 * b)] = -1.0;
    }
    j
}

/// P^T J P together with the residuals certifying its block structure.
#[derive(Clone, Debug)]
pub struct SpinTransform {
    pub transformed: Mat,
    /// Largest entry coupling different rotation-part groups.
    pub off_block_residual: f64,
    /// Worst defect of the exact mapping identities J v1 = -v2, J v2 = v1
    /// on the rotation-fixed columns, and of pair-group invariance.
    pub mapping_residual: f64,
    /// Column sets of the rotation-part groups, in order.
    pub groups: Vec<Vec<usize>>,
}

/// Transform the spin matrix into the symmetry basis and verify that it
/// couples nothing beyond the rotation-part groups: the two scalar pairs
/// become 2x2 antidiagonal blocks and each eigenvalue pair keeps a 4x4
/// block.
pub fn transform_spin(problem: &RotatingFrameProblem, basis: &SymmetryBasis) -> Result<SpinTransform> {
    if basis.centered() || basis.dim() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: basis.dim() });
    }
    let p = basis.matrix();
    let j = &problem.j;
    let transformed = p.transpose().matmul(&j.matmul(p));

    let labels = basis.labels();
    let mut off = 0.0_f64;
    for a in 0..transformed.rows() {
        for b in 0..transformed.cols() {
            if labels[a].rot != labels[b].rot {
                off = off.max(transformed[(a, b)].abs());
            }
        }
    }
    if off > 1e-9 {
        return Err(Error::StructureViolation { residual: off, tol: 1e-9 });
    }

    // J v1 = -v2 and J v2 = v1 for both rotation-fixed column pairs
    let mut mapping = 0.0_f64;
    let mut check_pair = |c1: usize, c2: usize| {
        let v1 = p.column(c1);
        let v2 = p.column(c2);
        let jv1 = j.mul_vec(&v1);
        let jv2 = j.mul_vec(&v2);
        let r1: Vec<f64> = jv1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        let r2: Vec<f64> = jv2.iter().zip(&v1).map(|(a, b)| a - b).collect();
        mapping = mapping.max(norm_inf(&r1)).max(norm_inf(&r2));
    };
    check_pair(0, 1);
    if basis.ring_count() % 2 == 0 {
        check_pair(2, 3);
    }

    // each pair group's span is J-invariant
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, lab) in labels.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if labels[g[0]].rot == lab.rot => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    for g in &groups {
        for &c in g {
            let jv = j.mul_vec(&p.column(c));
            let mut rem = jv.clone();
            for &s in g {
                let b = p.column(s);
                let coef = dot(&jv, &b);
                for (r, bi) in rem.iter_mut().zip(&b) {
                    *r -= coef * bi;
                }
            }
            mapping = mapping.max(crate::linalg::norm2(&rem));
        }
    }

    Ok(SpinTransform { transformed, off_block_residual: off, mapping_residual: mapping, groups })
}

/// Qualitative tag for a block of the linearization spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockClass {
    /// every eigenvalue on the imaginary axis
    Elliptic,
    /// every eigenvalue off the imaginary axis
    Hyperbolic,
    /// some on, some off
    Mixed,
    /// zero eigenvalues beyond the symmetry-forced pair
    Degenerate,
}

impl std::fmt::Display for BlockClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BlockClass::Elliptic => "elliptic",
            BlockClass::Hyperbolic => "hyperbolic",
            BlockClass::Mixed => "mixed",
            BlockClass::Degenerate => "degenerate",
        };
        write!(f, "{s}")
    }
}

impl Serialize for BlockClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Eigenvalues and classification of one joint block.
#[derive(Clone, Debug)]
pub struct StabilityBlock {
    pub columns: Vec<usize>,
    pub labels: Vec<SubspaceLabel>,
    pub eigenvalues: Vec<Complex64>,
    pub classification: BlockClass,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub n: usize,
    pub omega: f64,
    pub blocks: Vec<StabilityBlock>,
    pub block_union: Vec<Complex64>,
    pub dense: Vec<Complex64>,
    /// Hausdorff distance between the block union and the dense spectrum.
    pub spectral_mismatch: f64,
    /// |lambda| below 1e-8 * max(1, omega) in the union.
    pub zero_count: usize,
}

/// Solve the per-block quadratic eigenvalue problems
/// det(lambda^2 I - 2 omega lambda J_b - (omega^2 I + U_b)) = 0
/// and cross-check the union against the dense first-order linearization.
///
/// The joint partition is found by union-find over the numerically nonzero
/// couplings of both transformed matrices, so the two scalar entries merge
/// with their spin coupling into 2x2 blocks and each pair quadruple stays a
/// 4x4 block.
pub fn block_polynomial_eigs(
    problem: &RotatingFrameProblem,
    basis: &SymmetryBasis,
) -> Result<StabilityReport> {
    let spin = transform_spin(problem, basis)?;
    let hu = crate::block_spectrum::transform(&problem.u_hessian, basis)?;
    let dim = basis.dim();
    let omega = problem.omega;

    // union-find over couplings above 1e-10 of each matrix's scale
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    let tol_h = 1e-10 * hu.max_abs().max(1.0);
    let tol_j = 1e-10 * spin.transformed.max_abs().max(1.0);
    for a in 0..dim {
        for b in (a + 1)..dim {
            if hu[(a, b)].abs() > tol_h || spin.transformed[(a, b)].abs() > tol_j
                || hu[(b, a)].abs() > tol_h || spin.transformed[(b, a)].abs() > tol_j
            {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb] = ra;
                }
            }
        }
    }
    let mut blocks_cols: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<(usize, usize)> = (0..dim).map(|i| (find(&mut parent, i), i)).collect();
    root_of.sort();
    let mut current_root = usize::MAX;
    for (root, col) in root_of {
        if root != current_root {
            blocks_cols.push(Vec::new());
            current_root = root;
        }
        blocks_cols.last_mut().unwrap().push(col);
    }
    blocks_cols.sort_by_key(|cols| cols[0]);

    let zero_tol = 1e-8 * omega.max(1.0);
    let mut blocks = Vec::new();
    let mut union: Vec<Complex64> = Vec::new();
    for cols in blocks_cols {
        let d = cols.len();
        let jb = spin.transformed.submatrix(&cols, &cols);
        let kb = hu.submatrix(&cols, &cols);
        // companion form of lambda^2 v = 2 omega lambda J v + (omega^2 + K) v
        let mut companion = Mat::zeros(2 * d, 2 * d);
        for a in 0..d {
            companion[(a, d + a)] = 1.0;
            for b in 0..d {
                companion[(d + a, b)] = kb[(a, b)] + if a == b { omega * omega } else { 0.0 };
                companion[(d + a, d + b)] = 2.0 * omega * jb[(a, b)];
            }
        }
        let mut eigenvalues = eig(&companion)?;
        refine_spectrum_clusters(&mut eigenvalues, companion.max_abs());
        sort_complex(&mut eigenvalues);

        let labels: Vec<SubspaceLabel> = cols.iter().map(|&c| basis.labels()[c]).collect();
        let forced_zeros = if labels.iter().any(|l| l.rot == RotPart::One) { 2 } else { 0 };
        let zeros = eigenvalues.iter().filter(|l| l.norm() < zero_tol).count();
        let re_small = eigenvalues.iter().filter(|l| l.re.abs() < zero_tol).count();
        let classification = if zeros > forced_zeros {
            BlockClass::Degenerate
        } else if re_small == eigenvalues.len() {
            BlockClass::Elliptic
        } else if re_small == 0 {
            BlockClass::Hyperbolic
        } else {
            BlockClass::Mixed
        };
        union.extend_from_slice(&eigenvalues);
        blocks.push(StabilityBlock { columns: cols, labels, eigenvalues, classification });
    }
    sort_complex(&mut union);

    let dense = dense_linearization_oracle(problem)?;
    let spectral_mismatch = hausdorff(&union, &dense);
    let zero_count = union.iter().filter(|l| l.norm() < zero_tol).count();

    Ok(StabilityReport {
        n: basis.ring_count(),
        omega,
        blocks,
        block_union: union,
        dense,
        spectral_mismatch,
        zero_count,
    })
}

/// Assemble the first-order system matrix [[0, I], [omega^2 I + D2U, 2 omega J]].
pub fn first_order_matrix(problem: &RotatingFrameProblem) -> Mat {
    let d = problem.dim();
    let omega = problem.omega;
    let mut a = Mat::zeros(2 * d, 2 * d);
    for i in 0..d {
        a[(i, d + i)] = 1.0;
        for j in 0..d {
            a[(d + i, j)] = problem.u_hessian[(i, j)] + if i == j { omega * omega } else { 0.0 };
            a[(d + i, d + j)] = 2.0 * omega * problem.j[(i, j)];
        }
    }
    a
}

/// Full complex spectrum of the dense 4n x 4n first-order linearization,
/// with every eigenpair residual verified below 1e-7 by inverse iteration.
pub fn dense_linearization_oracle(problem: &RotatingFrameProblem) -> Result<Vec<Complex64>> {
    let a = first_order_matrix(problem);
    let mut eigs = eig(&a)?;
    refine_spectrum_clusters(&mut eigs, a.max_abs());
    let res = max_eigenpair_residual(&a, &eigs);
    if res > 1e-7 {
        return Err(Error::NoConvergence("linearization eigenpair residual above 1e-7"));
    }
    sort_complex(&mut eigs);
    Ok(eigs)
}

/// Hausdorff distance between two finite spectra in the complex plane.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_sided = |xs: &[Complex64], ys: &[Complex64]| -> f64 {
        xs.iter()
            .map(|x| ys.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0_f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Worst violation of the Hamiltonian quadruple symmetry
/// {lambda, -lambda, conj(lambda), -conj(lambda)} over a spectrum.
pub fn quadruple_symmetry_defect(spectrum: &[Complex64]) -> f64 {
    let mut worst = 0.0_f64;
    for l in spectrum {
        for image in [-l, l.conj(), -l.conj()] {
            let nearest = spectrum
                .iter()
                .map(|m| (m - image).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_for_triangle() {
        // omega^2 = U / (2I) = sqrt(3) / 3
        let p = RotatingFrameProblem::build(3).unwrap();
        assert!((p.omega * p.omega - 3.0_f64.sqrt() / 3.0).abs() < 1e-14);
        assert!(p.equilibrium_residual < 1e-10);
    }

    #[test]
    fn spin_matrix_properties() {
        let j = spin_matrix(4);
        // J^2 = -I and J^T = -J
        let j2 = j.matmul(&j);
        assert!(j2.add(&Mat::identity(8)).max_abs() < 1e-15);
        assert!(j.transpose().add(&j).max_abs() < 1e-15);
        // z^T J z = 0
        let p = RotatingFrameProblem::build(4).unwrap();
        let z0 = p.config.reference_coords();
        let jz = p.j.mul_vec(&z0);
        assert!(dot(&z0, &jz).abs() < 1e-14);
    }

    #[test]
    fn spin_transform_structure() {
        for n in [3, 4, 8] {
            let p = RotatingFrameProblem::build(n).unwrap();
            let basis = SymmetryBasis::new(n, false).unwrap();
            let spin = transform_spin(&p, &basis).unwrap();
            assert!(spin.off_block_residual < 1e-12, "n={n}");
            assert!(spin.mapping_residual < 1e-12, "n={n}");
            // scalar pairs are antidiagonal: [[0, 1], [-1, 0]] on columns 0, 1
            let t = &spin.transformed;
            assert!((t[(0, 1)] - 1.0).abs() < 1e-12);
            assert!((t[(1, 0)] + 1.0).abs() < 1e-12);
            assert!(t[(0, 0)].abs() < 1e-12 && t[(1, 1)].abs() < 1e-12);
        }
    }

    #[test]
    fn mapping_identities_exact() {
        let n = 6;
        let p = RotatingFrameProblem::build(n).unwrap();
        let basis = SymmetryBasis::new(n, false).unwrap();
        let pm = basis.matrix();
        // J v1 = -v2 and J v2 = v1 for the rotation-fixed columns
        let v1 = pm.column(0);
        let v2 = pm.column(1);
        let jv1 = p.j.mul_vec(&v1);
        for (a, b) in jv1.iter().zip(&v2) {
            assert!((a + b).abs() < 1e-15);
        }
        let jv2 = p.j.mul_vec(&v2);
        for (a, b) in jv2.iter().zip(&v1) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn joint_blocks_are_at_most_4x4() {
        for n in [3, 4, 7, 8] {
            let p = RotatingFrameProblem::build(n).unwrap();
            let basis = SymmetryBasis::new(n, false).unwrap();
            let report = block_polynomial_eigs(&p, &basis).unwrap();
            let total: usize = report.blocks.iter().map(|b| b.columns.len()).sum();
            assert_eq!(total, 2 * n);
            for b in &report.blocks {
                assert!(b.columns.len() <= 4, "n={n}: block of size {}", b.columns.len());
                assert_eq!(b.eigenvalues.len(), 2 * b.columns.len());
            }
        }
    }

    #[test]
    fn block_union_matches_dense_oracle() {
        for n in [3, 4, 6] {
            let p = RotatingFrameProblem::build(n).unwrap();
            let basis = SymmetryBasis::new(n, false).unwrap();
            let report = block_polynomial_eigs(&p, &basis).unwrap();
            assert!(report.spectral_mismatch < 1e-7, "n={n}: {:.3e}", report.spectral_mismatch);
            assert!(report.zero_count >= 2, "n={n}");
            assert!(quadruple_symmetry_defect(&report.block_union) < 1e-8, "n={n}");
        }
    }

    #[test]
    fn rotation_block_is_elliptic_kepler_like() {
        // the block holding the rotation/scaling pair has eigenvalues
        // {0, 0, ±i omega}
        let p = RotatingFrameProblem::build(5).unwrap();
        let basis = SymmetryBasis::new(5, false).unwrap();
        let report = block_polynomial_eigs(&p, &basis).unwrap();
        let b = report
            .blocks
            .iter()
            .find(|b| b.labels.iter().any(|l| l.rot == RotPart::One))
            .unwrap();
        assert_eq!(b.classification, BlockClass::Elliptic);
        let zeros = b.eigenvalues.iter().filter(|l| l.norm() < 1e-8).count();
        assert_eq!(zeros, 2);
        let at_omega = b
            .eigenvalues
            .iter()
            .filter(|l| (l.im.abs() - p.omega).abs() < 1e-8 && l.re.abs() < 1e-8)
            .count();
        assert_eq!(at_omega, 2);
    }

    #[test]
    fn spectrum_closed_under_conjugation_and_negation() {
        let p = RotatingFrameProblem::build(4).unwrap();
        let dense = dense_linearization_oracle(&p).unwrap();
        assert!(quadruple_symmetry_defect(&dense) < 1e-8);
        // trace of the first-order matrix is zero, so eigenvalues sum to zero
        let sum: Complex64 = dense.iter().sum();
        assert!(sum.norm() < 1e-8);
    }

    #[test]
    fn time_rescale_scales_eigenvalues() {
        let n = 5;
        let c = 2.0;
        let p = RotatingFrameProblem::build(n).unwrap();
        let basis = SymmetryBasis::new(n, false).unwrap();
        let base = block_polynomial_eigs(&p, &basis).unwrap();
        let scaled = block_polynomial_eigs(&p.time_rescaled(c), &basis).unwrap();
        let rescaled: Vec<Complex64> = base.block_union.iter().map(|l| l * c).collect();
        assert!(hausdorff(&rescaled, &scaled.block_union) < 1e-7);
    }

    #[test]
    fn transformed_system_has_identical_spectrum() {
        // similarity invariance: the zeta system P^{-1}(...)P has the same
        // eigenvalues as the xi system
        let n = 4;
        let p = RotatingFrameProblem::build(n).unwrap();
        let basis = SymmetryBasis::new(n, false).unwrap();
        let hu = crate::block_spectrum::transform(&p.u_hessian, &basis).unwrap();
        let spin = transform_spin(&p, &basis).unwrap();
        let zeta = RotatingFrameProblem {
            config: p.config.clone(),
            omega: p.omega,
            u_hessian: hu,
            j: spin.transformed,
            equilibrium_residual: p.equilibrium_residual,
        };
        let a = eig(&first_order_matrix(&p)).unwrap();
        let b = eig(&first_order_matrix(&zeta)).unwrap();
        assert!(hausdorff(&a, &b) < 1e-7);
    }
}
