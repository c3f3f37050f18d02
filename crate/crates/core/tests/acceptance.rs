//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line with its worst residual when run with --nocapture.
//!
//! Run with:
//!   cargo test -p ngon-spectra --test acceptance -- --nocapture

use std::time::Instant;

use ngon_spectra::block_spectrum::{
    closed_form_spectrum, degeneracy_scan, dense_spectrum_oracle, extract_blocks,
    multiset_relative_deviation, transform, DEFAULT_BLOCK_TOL,
};
use ngon_spectra::dihedral::{decompose, elements, IrrepLabel};
use ngon_spectra::linalg::norm_inf;
use ngon_spectra::nbody::{hessian_at_reference, Configuration, TargetFn};
use ngon_spectra::stability::{
    block_polynomial_eigs, quadruple_symmetry_defect, RotatingFrameProblem,
};
use ngon_spectra::symmetry_basis::{
    verify_invariant_subspaces, PermRepresentation, RotPart, SymmetryBasis,
};

fn report(criterion: &str, detail: String) {
    println!("criterion {criterion}: PASS ({detail})");
}

#[test]
fn criterion_01_representation_correctness() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in 3..=16 {
        let rep = PermRepresentation::new(n, false).unwrap();
        let elems = elements(n).unwrap();
        let mats: Vec<_> = elems.iter().map(|g| rep.matrix(g).unwrap()).collect();
        for (a, ma) in elems.iter().zip(&mats) {
            // trace matches the character table: 2n at e, 0 elsewhere
            let tr: f64 = (0..ma.rows()).map(|i| ma[(i, i)]).sum();
            let expect = if a.is_identity() { 2.0 * n as f64 } else { 0.0 };
            assert_eq!(tr, expect, "trace of {a} at n={n}");
            for (b, mb) in elems.iter().zip(&mats) {
                let prod = a.multiply(b).unwrap();
                let idx = elems.iter().position(|g| *g == prod).unwrap();
                let defect = ma.matmul(mb).sub(&mats[idx]).max_abs();
                worst = worst.max(defect);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-12, "homomorphism defect {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:.2?}");
    report("01 representation correctness", format!("defect {worst:.3e}, {elapsed:.2?}"));
}

#[test]
fn criterion_02_decomposition() {
    for n in 3..=16 {
        for centered in [false, true] {
            let rep = PermRepresentation::new(n, centered).unwrap();
            let got = decompose(&rep.character()).unwrap();
            let mut expect = vec![(IrrepLabel::Phi1, 1), (IrrepLabel::Phi2, 1)];
            if n % 2 == 0 {
                expect.push((IrrepLabel::Phi3, 1));
                expect.push((IrrepLabel::Phi4, 1));
            }
            let top = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
            for k in 1..=top {
                expect.push((IrrepLabel::Rho(k), if centered && k == 1 { 3 } else { 2 }));
            }
            assert_eq!(got, expect, "n={n} centered={centered}");
        }
    }
    report("02 decomposition", "exact multiplicities for n in 3..=16, plain and centered".into());
}

#[test]
fn criterion_03_basis_validity() {
    let mut worst_ortho = 0.0_f64;
    let mut worst_form = 0.0_f64;
    for n in 3..=24 {
        for centered in [false, true] {
            let basis = SymmetryBasis::new(n, centered).unwrap();
            worst_ortho = worst_ortho.max(basis.orthogonality_residual());
            let rep = PermRepresentation::new(n, centered).unwrap();
            let sub = verify_invariant_subspaces(&rep, &basis).unwrap();
            worst_form = worst_form.max(sub.max_residual);
        }
    }
    assert!(worst_ortho < 1e-12, "orthogonality {worst_ortho:.3e}");
    assert!(worst_form < 1e-12, "block diagonalization {worst_form:.3e}");
    report(
        "03 basis validity",
        format!("orthogonality {worst_ortho:.3e}, generator forms {worst_form:.3e}"),
    );
}

#[test]
fn criterion_04_commutation() {
    let mut worst = 0.0_f64;
    for n in 3..=16 {
        let rep = PermRepresentation::new(n, false).unwrap();
        let c = Configuration::ngon(n).unwrap();
        for target in [TargetFn::Bare, TargetFn::Normalized] {
            let h = hessian_at_reference(&c, target);
            let r = ngon_spectra::block_spectrum::commutation_residual(&rep, &h).unwrap();
            worst = worst.max(r);
        }
    }
    assert!(worst < 1e-10, "commutation defect {worst:.3e}");
    report("04 commutation", format!("relative defect {worst:.3e}"));
}

#[test]
fn criterion_05_block_structure_and_vanishing_entries() {
    let mut worst_rel = 0.0_f64;
    for n in 4..=16 {
        let basis = SymmetryBasis::new(n, false).unwrap();
        let c = Configuration::ngon(n).unwrap();
        for target in [TargetFn::Bare, TargetFn::Normalized] {
            let h = hessian_at_reference(&c, target);
            let t = transform(&h, &basis).unwrap();
            let spec = extract_blocks(&t, &basis, DEFAULT_BLOCK_TOL).unwrap();
            let bound = 1e-9 * h.norm_inf();
            assert!(
                spec.off_block_residual < bound,
                "n={n} {target}: off-block {:.3e}",
                spec.off_block_residual
            );
            worst_rel = worst_rel.max(spec.off_block_residual / h.norm_inf());
            // entries proven to vanish, in 1-based numbering:
            // (1,2) (1,3) (1,4) (1,5) (3,5) (5,7)
            for (i, j) in [(0, 1), (0, 2), (0, 3), (0, 4), (2, 4), (4, 6)] {
                assert!(t[(i, j)].abs() < bound, "n={n} {target} entry ({i},{j})");
            }
        }
    }
    report("05 block structure", format!("worst relative off-block residual {worst_rel:.3e}"));
}

#[test]
fn criterion_06_closed_form_fidelity() {
    let start = Instant::now();
    let mut worst_entry = 0.0_f64;
    let mut worst_dev = 0.0_f64;
    for n in 3..=24 {
        let basis = SymmetryBasis::new(n, false).unwrap();
        let c = Configuration::ngon(n).unwrap();
        for target in [TargetFn::Bare, TargetFn::Normalized] {
            let h = hessian_at_reference(&c, target);
            let cf = closed_form_spectrum(&c, target).unwrap();
            let ex = extract_blocks(&transform(&h, &basis).unwrap(), &basis, DEFAULT_BLOCK_TOL)
                .unwrap();
            for ((la, va), (lb, vb)) in cf.scalars.iter().zip(&ex.scalars) {
                assert_eq!(la, lb);
                worst_entry = worst_entry.max((va - vb).abs());
            }
            for (a, b) in cf.blocks.iter().zip(&ex.blocks) {
                assert_eq!(a.label, b.label);
                worst_entry = worst_entry.max(a.entries.sub(&b.entries).max_abs());
            }
            let dense = dense_spectrum_oracle(&h).unwrap();
            let dev = multiset_relative_deviation(&cf.eigenvalue_multiset(), &dense).unwrap();
            worst_dev = worst_dev.max(dev);
        }
    }
    let elapsed = start.elapsed();
    assert!(worst_entry < 1e-9, "entrywise {worst_entry:.3e}");
    assert!(worst_dev < 1e-8, "multiset deviation {worst_dev:.3e}");
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    report(
        "06 closed-form fidelity",
        format!("entrywise {worst_entry:.3e}, multiset {worst_dev:.3e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_07_null_directions() {
    let mut worst = 0.0_f64;
    for n in 3..=24 {
        let c = Configuration::ngon(n).unwrap();
        let h = hessian_at_reference(&c, TargetFn::Normalized);
        let z0 = c.reference_coords();
        let jz0: Vec<f64> = z0.chunks(2).flat_map(|q| [q[1], -q[0]]).collect();
        worst = worst.max(norm_inf(&h.mul_vec(&z0)));
        worst = worst.max(norm_inf(&h.mul_vec(&jz0)));
    }
    assert!(worst < 1e-9, "null direction residual {worst:.3e}");
    report("07 null directions", format!("worst residual {worst:.3e}"));
}

#[test]
fn criterion_08_centered_case() {
    let mut worst_rel = 0.0_f64;
    let mut worst_dev = 0.0_f64;
    for n in 3..=12 {
        let basis = SymmetryBasis::new(n, true).unwrap();
        for m in [0.1, 1.0, 10.0] {
            let c = Configuration::centered(n, m).unwrap();
            let h = hessian_at_reference(&c, TargetFn::Normalized);
            let t = transform(&h, &basis).unwrap();
            let spec = extract_blocks(&t, &basis, DEFAULT_BLOCK_TOL).unwrap();
            assert!(spec.off_block_residual < 1e-9 * h.norm_inf(), "n={n} m={m}");
            worst_rel = worst_rel.max(spec.off_block_residual / h.norm_inf());
            // two 3x3 blocks on the first eigenvalue pair, nothing larger
            let three: Vec<_> = spec.blocks.iter().filter(|b| b.entries.rows() == 3).collect();
            assert_eq!(three.len(), 2, "n={n} m={m}");
            assert!(three.iter().all(|b| b.label.rot == RotPart::Pair(1)));
            assert!(spec.blocks.iter().all(|b| b.entries.rows() <= 3));
            let dense = dense_spectrum_oracle(&h).unwrap();
            let dev = multiset_relative_deviation(&spec.eigenvalue_multiset(), &dense).unwrap();
            assert!(dev < 1e-8, "n={n} m={m}: {dev:.3e}");
            worst_dev = worst_dev.max(dev);
        }
    }
    report(
        "08 centered case",
        format!("off-block {worst_rel:.3e}, spectrum deviation {worst_dev:.3e}"),
    );
}

#[test]
fn criterion_09_stability() {
    let start = Instant::now();
    let mut worst_mismatch = 0.0_f64;
    let mut worst_quad = 0.0_f64;
    for n in 3..=12 {
        let problem = RotatingFrameProblem::build(n).unwrap();
        let basis = SymmetryBasis::new(n, false).unwrap();
        let rep = block_polynomial_eigs(&problem, &basis).unwrap();
        assert!(rep.spectral_mismatch < 1e-7, "n={n}: {:.3e}", rep.spectral_mismatch);
        assert!(rep.zero_count >= 2, "n={n}: {} zero eigenvalues", rep.zero_count);
        worst_mismatch = worst_mismatch.max(rep.spectral_mismatch);
        worst_quad = worst_quad.max(quadruple_symmetry_defect(&rep.block_union));
    }
    let elapsed = start.elapsed();
    assert!(worst_quad < 1e-8, "quadruple symmetry {worst_quad:.3e}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    report(
        "09 stability",
        format!("Hausdorff {worst_mismatch:.3e}, quadruple {worst_quad:.3e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_10_degeneracy_scan() {
    let start = Instant::now();
    let scan = degeneracy_scan(7, 0.1, 50.0, 500).unwrap();
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    assert!(!scan.critical.is_empty(), "expected at least one degeneracy in range");
    for c in &scan.critical {
        assert!(c.det.abs() < 1e-8, "det at m*={} is {:.3e}", c.mass, c.det);
        // the root is bracketed by a sign change of the same block's
        // determinant on the grid
        let li = scan.grid[0]
            .determinants
            .iter()
            .position(|(l, _)| *l == c.label)
            .unwrap();
        let bracketed = scan.grid.windows(2).any(|w| {
            w[0].mass <= c.mass
                && c.mass <= w[1].mass
                && w[0].determinants[li].1.signum() != w[1].determinants[li].1.signum()
        });
        assert!(bracketed, "m*={} not bracketed", c.mass);
    }
    for p in &scan.grid {
        assert!(p.zero_count >= 2, "m={}: {}", p.mass, p.zero_count);
    }
    report(
        "10 degeneracy scan",
        format!("{} critical masses, {elapsed:.2?}", scan.critical.len()),
    );
}
