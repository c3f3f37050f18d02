//! Command line front end: decomposition reports, symmetry bases, block
//! spectra, stability, mass scans, and the verification suite, with
//! machine-readable output.
//!
//! Exit codes: 0 success, 1 structure/verification failure, 2 bad arguments.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ngon_spectra::block_spectrum::{
    closed_form_spectrum, commutation_residual, degeneracy_scan, dense_spectrum_oracle,
    extract_blocks, multiset_relative_deviation, transform, BlockSpectrum, DEFAULT_BLOCK_TOL,
};
use ngon_spectra::dihedral::{
    character, conjugacy_classes, decompose, elements, inner_product, irrep_matrix, IrrepLabel,
};
use ngon_spectra::linalg::norm_inf;
use ngon_spectra::nbody::{
    central_config_residual, eval_normalized, hessian_at_reference, Configuration, TargetFn,
};
use ngon_spectra::stability::{
    block_polynomial_eigs, dense_linearization_oracle, hausdorff, quadruple_symmetry_defect,
    transform_spin, RotatingFrameProblem,
};
use ngon_spectra::symmetry_basis::{
    reflection_eigenvectors, rotation_eigenvectors, verify_invariant_subspaces,
    PermRepresentation, RotPart, SymmetryBasis,
};
use ngon_spectra::Error;

#[derive(Parser)]
#[command(name = "ngon-spectra", version, about = "Block spectra of ring central configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the artifact to this path instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of D_n and the multiplicities of the configuration
    /// representation
    Decompose {
        #[arg(long)]
        n: usize,
        /// Use the centered (2n+2)-dimensional representation
        #[arg(long)]
        centered: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The symmetry-adapted orthogonal basis P with column labels
    Basis {
        #[arg(long)]
        n: usize,
        /// Central mass; builds the (2n+2)-dimensional basis
        #[arg(long)]
        centered: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Block spectrum of the Hessian at the reference configuration
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Central mass; analyzes the centered configuration
        #[arg(long)]
        centered: Option<f64>,
        /// f (= sqrt(I) U) or U
        #[arg(long, default_value = "f")]
        function: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Relative off-block residual tolerance
        #[arg(long, default_value_t = DEFAULT_BLOCK_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rotating-frame linear stability of the ring relative equilibrium
    Stability {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Scan the central mass for Hessian degeneracies
    ScanMass {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the full invariant suite for one n and print a pass/fail table
    Verify {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Decompose { n, centered, out } => {
            let report = decompose_report(n, centered)?;
            emit(&out, to_json(&report))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis { n, centered, out } => {
            validate_mass(centered)?;
            let report = basis_report(n, centered.is_some())?;
            emit(&out, to_json(&report))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { n, centered, function, format, tol, out } => {
            validate_mass(centered)?;
            let target: TargetFn = function.parse()?;
            let report = spectrum_report(n, centered, target, tol)?;
            let rendered = match format {
                Format::Json => to_json(&report),
                Format::Csv => spectrum_csv(&report),
                Format::Text => spectrum_text(&report),
            };
            emit(&out, rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stability { n, format, out } => {
            let report = stability_report(n)?;
            let rendered = match format {
                Format::Json => to_json(&report),
                Format::Csv => stability_csv(&report),
                Format::Text => stability_text(&report),
            };
            emit(&out, rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ScanMass { n, from, to, steps, out } => {
            let report = scan_report(n, from, to, steps)?;
            emit(&out, to_json(&report))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { n } => verify(n),
    }
}

fn validate_mass(mass: Option<f64>) -> Result<(), Error> {
    if let Some(m) = mass {
        if !(m > 0.0) {
            return Err(Error::InvalidArgument(format!("central mass must be positive, got {m}")));
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn emit(out: &OutputArgs, rendered: String) -> Result<(), Error> {
    match &out.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// decompose

#[derive(Serialize)]
struct ClassInfo {
    representative: String,
    size: usize,
}

#[derive(Serialize)]
struct CharacterRow {
    irrep: IrrepLabel,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct Multiplicity {
    irrep: IrrepLabel,
    multiplicity: usize,
}

#[derive(Serialize)]
struct DecomposeReport {
    n: usize,
    centered: bool,
    classes: Vec<ClassInfo>,
    character_table: Vec<CharacterRow>,
    representation_character: Vec<f64>,
    multiplicities: Vec<Multiplicity>,
}

fn decompose_report(n: usize, centered: bool) -> Result<DecomposeReport, Error> {
    let rep = PermRepresentation::new(n, centered)?;
    let classes = conjugacy_classes(n)?
        .iter()
        .map(|c| ClassInfo { representative: c.representative.to_string(), size: c.size })
        .collect();
    let character_table = IrrepLabel::all_for(n)?
        .into_iter()
        .map(|l| {
            let chi = character(l, n)?;
            Ok(CharacterRow { irrep: l, values: chi.class_values().iter().map(|(_, v)| *v).collect() })
        })
        .collect::<Result<_, Error>>()?;
    let rep_chi = rep.character();
    let multiplicities = decompose(&rep_chi)?
        .into_iter()
        .map(|(irrep, multiplicity)| Multiplicity { irrep, multiplicity })
        .collect();
    Ok(DecomposeReport {
        n,
        centered,
        classes,
        character_table,
        representation_character: rep_chi.class_values().iter().map(|(_, v)| *v).collect(),
        multiplicities,
    })
}

// ---------------------------------------------------------------------------
// basis

#[derive(Serialize)]
struct BasisColumn {
    index: usize,
    label: String,
    role: String,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct BasisReport {
    n: usize,
    centered: bool,
    dim: usize,
    orthogonality_residual: f64,
    columns: Vec<BasisColumn>,
}

fn basis_report(n: usize, centered: bool) -> Result<BasisReport, Error> {
    let basis = SymmetryBasis::new(n, centered)?;
    let p = basis.matrix();
    let columns = (0..basis.dim())
        .map(|j| BasisColumn {
            index: j,
            label: basis.labels()[j].to_string(),
            role: basis.roles()[j].to_string(),
            values: p.column(j),
        })
        .collect();
    Ok(BasisReport {
        n,
        centered,
        dim: basis.dim(),
        orthogonality_residual: basis.orthogonality_residual(),
        columns,
    })
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Serialize)]
struct ScalarEntry {
    label: String,
    value: f64,
}

#[derive(Serialize)]
struct BlockEntry {
    label: String,
    entries: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
}

#[derive(Serialize)]
struct SpectrumLine {
    value: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumReport {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    centered_mass: Option<f64>,
    function: TargetFn,
    scalars: Vec<ScalarEntry>,
    blocks: Vec<BlockEntry>,
    off_block_residual: f64,
    spectrum: Vec<SpectrumLine>,
}

fn block_spectrum_for(
    n: usize,
    centered: Option<f64>,
    target: TargetFn,
    tol: f64,
) -> Result<BlockSpectrum, Error> {
    let config = match centered {
        Some(m) => Configuration::centered(n, m)?,
        None => Configuration::ngon(n)?,
    };
    let basis = SymmetryBasis::new(n, centered.is_some())?;
    let h = hessian_at_reference(&config, target);
    let t = transform(&h, &basis)?;
    extract_blocks(&t, &basis, tol)
}

fn spectrum_report(
    n: usize,
    centered: Option<f64>,
    target: TargetFn,
    tol: f64,
) -> Result<SpectrumReport, Error> {
    let spec = block_spectrum_for(n, centered, target, tol)?;
    Ok(SpectrumReport {
        n,
        centered_mass: centered,
        function: target,
        scalars: spec
            .scalars
            .iter()
            .map(|(l, v)| ScalarEntry { label: l.to_string(), value: *v })
            .collect(),
        blocks: spec
            .blocks
            .iter()
            .map(|b| BlockEntry {
                label: b.label.to_string(),
                entries: (0..b.entries.rows())
                    .map(|i| (0..b.entries.cols()).map(|j| b.entries[(i, j)]).collect())
                    .collect(),
                eigenvalues: b.eigenvalues.clone(),
            })
            .collect(),
        off_block_residual: spec.off_block_residual,
        spectrum: spec
            .eigenvalues
            .iter()
            .map(|(value, multiplicity)| SpectrumLine { value: *value, multiplicity: *multiplicity })
            .collect(),
    })
}

fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("value,multiplicity\n");
    for line in &report.spectrum {
        let _ = writeln!(out, "{},{}", line.value, line.multiplicity);
    }
    out
}

fn spectrum_text(report: &SpectrumReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Hessian of {} at the n = {} reference configuration{}",
        report.function,
        report.n,
        report
            .centered_mass
            .map(|m| format!(" (central mass {m})"))
            .unwrap_or_default()
    );
    let _ = writeln!(out, "off-block residual: {:.3e}", report.off_block_residual);
    let _ = writeln!(out, "scalars:");
    for s in &report.scalars {
        let _ = writeln!(out, "  [{}]  {:+.12}", s.label, s.value);
    }
    let _ = writeln!(out, "blocks:");
    for b in &report.blocks {
        let _ = writeln!(out, "  [{}]", b.label);
        for row in &b.entries {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:+.12}")).collect();
            let _ = writeln!(out, "    {}", cells.join("  "));
        }
        let eigs: Vec<String> = b.eigenvalues.iter().map(|v| format!("{v:+.12}")).collect();
        let _ = writeln!(out, "    eigenvalues: {}", eigs.join(", "));
    }
    let _ = writeln!(out, "spectrum (value, multiplicity):");
    for line in &report.spectrum {
        let _ = writeln!(out, "  {:+.12}  x{}", line.value, line.multiplicity);
    }
    out
}

// ---------------------------------------------------------------------------
// stability

#[derive(Serialize)]
struct ComplexEntry {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct StabilityBlockEntry {
    columns: Vec<usize>,
    labels: Vec<String>,
    eigenvalues: Vec<ComplexEntry>,
    classification: String,
}

#[derive(Serialize)]
struct StabilityReportOut {
    n: usize,
    omega: f64,
    equilibrium_residual: f64,
    blocks: Vec<StabilityBlockEntry>,
    spectral_mismatch: f64,
    zero_count: usize,
}

fn stability_report(n: usize) -> Result<StabilityReportOut, Error> {
    let problem = RotatingFrameProblem::build(n)?;
    let basis = SymmetryBasis::new(n, false)?;
    let report = block_polynomial_eigs(&problem, &basis)?;
    Ok(StabilityReportOut {
        n,
        omega: problem.omega,
        equilibrium_residual: problem.equilibrium_residual,
        blocks: report
            .blocks
            .iter()
            .map(|b| StabilityBlockEntry {
                columns: b.columns.clone(),
                labels: b.labels.iter().map(|l| l.to_string()).collect(),
                eigenvalues: b
                    .eigenvalues
                    .iter()
                    .map(|l| ComplexEntry { re: l.re, im: l.im })
                    .collect(),
                classification: b.classification.to_string(),
            })
            .collect(),
        spectral_mismatch: report.spectral_mismatch,
        zero_count: report.zero_count,
    })
}

fn stability_csv(report: &StabilityReportOut) -> String {
    let mut out = String::from("block,classification,re,im\n");
    for (i, b) in report.blocks.iter().enumerate() {
        for l in &b.eigenvalues {
            let _ = writeln!(out, "{},{},{},{}", i, b.classification, l.re, l.im);
        }
    }
    out
}

fn stability_text(report: &StabilityReportOut) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "relative equilibrium n = {}, omega = {:.12} (equilibrium residual {:.3e})",
        report.n, report.omega, report.equilibrium_residual
    );
    for (i, b) in report.blocks.iter().enumerate() {
        let _ = writeln!(
            out,
            "block {} on columns {:?} [{}]: {}",
            i,
            b.columns,
            b.labels.join("; "),
            b.classification
        );
        for l in &b.eigenvalues {
            let _ = writeln!(out, "  {:+.12e} {:+.12e}i", l.re, l.im);
        }
    }
    let _ = writeln!(out, "block union vs dense linearization: {:.3e}", report.spectral_mismatch);
    let _ = writeln!(out, "zero eigenvalues: {}", report.zero_count);
    out
}

// ---------------------------------------------------------------------------
// scan-mass

#[derive(Serialize)]
struct CriticalMassEntry {
    mass: f64,
    label: String,
    determinant: f64,
}

#[derive(Serialize)]
struct GridEntry {
    mass: f64,
    zero_count: usize,
}

#[derive(Serialize)]
struct ScanReport {
    n: usize,
    from: f64,
    to: f64,
    steps: usize,
    critical_masses: Vec<CriticalMassEntry>,
    grid: Vec<GridEntry>,
}

fn scan_report(n: usize, from: f64, to: f64, steps: usize) -> Result<ScanReport, Error> {
    let scan = degeneracy_scan(n, from, to, steps)?;
    Ok(ScanReport {
        n,
        from,
        to,
        steps,
        critical_masses: scan
            .critical
            .iter()
            .map(|c| CriticalMassEntry {
                mass: c.mass,
                label: c.label.to_string(),
                determinant: c.det,
            })
            .collect(),
        grid: scan
            .grid
            .iter()
            .map(|g| GridEntry { mass: g.mass, zero_count: g.zero_count })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    name: &'static str,
    residual: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

fn verify(n: usize) -> Result<ExitCode, Error> {
    let mut checks: Vec<Check> = Vec::new();
    let push = |name: &'static str, residual: f64, tol: f64, checks: &mut Vec<Check>| {
        checks.push(Check { name, residual, tol });
    };

    // irreducible representations
    let mut worst = 0.0_f64;
    for label in IrrepLabel::all_for(n)? {
        for a in elements(n)? {
            for b in elements(n)? {
                let lhs = irrep_matrix(label, &a)?.matmul(&irrep_matrix(label, &b)?);
                let rhs = irrep_matrix(label, &a.multiply(&b)?)?;
                worst = worst.max(lhs.sub(&rhs).max_abs());
            }
        }
    }
    push("irrep homomorphism", worst, 1e-12, &mut checks);

    let labels = IrrepLabel::all_for(n)?;
    let mut worst = 0.0_f64;
    for &a in &labels {
        for &b in &labels {
            let ip = inner_product(&character(a, n)?, &character(b, n)?)?;
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((ip - expect).abs());
        }
    }
    push("character orthonormality", worst, 1e-12, &mut checks);

    // permutation representation
    for centered in [false, true] {
        let rep = PermRepresentation::new(n, centered)?;
        let mut worst = 0.0_f64;
        for a in elements(n)? {
            for b in elements(n)? {
                let lhs = rep.matrix(&a)?.matmul(&rep.matrix(&b)?);
                let rhs = rep.matrix(&a.multiply(&b)?)?;
                worst = worst.max(lhs.sub(&rhs).max_abs());
            }
        }
        let name =
            if centered { "representation homomorphism (centered)" } else { "representation homomorphism" };
        push(name, worst, 1e-12, &mut checks);
    }

    let rep = PermRepresentation::new(n, false)?;
    let mut worst = 0.0_f64;
    for g in elements(n)? {
        let m = rep.matrix(&g)?;
        let tr: f64 = (0..m.rows()).map(|i| m[(i, i)]).sum();
        let expect = if g.is_identity() { 2.0 * n as f64 } else { 0.0 };
        worst = worst.max((tr - expect).abs());
    }
    push("representation trace vs table", worst, 1e-12, &mut checks);

    // decomposition multiplicities
    let expected_plain = expected_multiplicities(n, false);
    let got_plain = decompose(&rep.character())?;
    push(
        "decomposition (plain)",
        if got_plain == expected_plain { 0.0 } else { 1.0 },
        0.5,
        &mut checks,
    );
    let rep_c = PermRepresentation::new(n, true)?;
    let got_centered = decompose(&rep_c.character())?;
    push(
        "decomposition (centered)",
        if got_centered == expected_multiplicities(n, true) { 0.0 } else { 1.0 },
        0.5,
        &mut checks,
    );

    // eigenvector families
    let ds = rep.matrix(&ngon_spectra::dihedral::GroupElement::reflection(0, n)?)?;
    let mut worst = 0.0_f64;
    for (sign, v) in reflection_eigenvectors(n)? {
        let w = ds.mul_vec(&v);
        for (wi, vi) in w.iter().zip(&v) {
            worst = worst.max((wi - sign as f64 * vi).abs());
        }
    }
    push("reflection eigenvectors", worst, 1e-12, &mut checks);

    let dr = rep.matrix(&ngon_spectra::dihedral::GroupElement::rotation(1, n)?)?;
    let theta = std::f64::consts::TAU / n as f64;
    let mut worst = 0.0_f64;
    for v in rotation_eigenvectors(n)? {
        let (lre, lim) = match v.kind {
            RotPart::One => (1.0, 0.0),
            RotPart::MinusOne => (-1.0, 0.0),
            RotPart::Pair(j) => ((j as f64 * theta).cos(), (j as f64 * theta).sin()),
        };
        let wre = dr.mul_vec(&v.re);
        let wim = dr.mul_vec(&v.im);
        for k in 0..wre.len() {
            worst = worst.max((wre[k] - (lre * v.re[k] - lim * v.im[k])).abs());
            worst = worst.max((wim[k] - (lim * v.re[k] + lre * v.im[k])).abs());
        }
    }
    push("rotation eigenvectors", worst, 1e-12, &mut checks);

    // basis
    for centered in [false, true] {
        let basis = SymmetryBasis::new(n, centered)?;
        let rep = PermRepresentation::new(n, centered)?;
        let report = verify_invariant_subspaces(&rep, &basis)?;
        if centered {
            push("basis orthogonality (centered)", basis.orthogonality_residual(), 1e-12, &mut checks);
            push("block diagonalization of D(s), D(r) (centered)", report.max_residual, 1e-12, &mut checks);
        } else {
            push("basis orthogonality", basis.orthogonality_residual(), 1e-12, &mut checks);
            push("block diagonalization of D(s), D(r)", report.max_residual, 1e-12, &mut checks);
        }
    }

    // configurations and Hessians
    let config = Configuration::ngon(n)?;
    push("central configuration residual", central_config_residual(&config), 1e-10, &mut checks);
    let config_c = Configuration::centered(n, 1.0)?;
    push(
        "central configuration residual (centered, m=1)",
        central_config_residual(&config_c),
        1e-10,
        &mut checks,
    );

    let basis = SymmetryBasis::new(n, false)?;
    let basis_c = SymmetryBasis::new(n, true)?;
    for target in [TargetFn::Normalized, TargetFn::Bare] {
        let h = hessian_at_reference(&config, target);
        let name = match target {
            TargetFn::Normalized => "commutation with group action (f)",
            TargetFn::Bare => "commutation with group action (U)",
        };
        push(name, commutation_residual(&rep, &h)?, 1e-10, &mut checks);

        let t = transform(&h, &basis)?;
        let spec = extract_blocks(&t, &basis, DEFAULT_BLOCK_TOL)?;
        let rel = spec.off_block_residual / h.norm_inf().max(1.0);
        let name = match target {
            TargetFn::Normalized => "off-block residual (f)",
            TargetFn::Bare => "off-block residual (U)",
        };
        push(name, rel, 1e-9, &mut checks);

        let cf = closed_form_spectrum(&config, target)?;
        let mut worst = 0.0_f64;
        for ((_, a), (_, b)) in cf.scalars.iter().zip(&spec.scalars) {
            worst = worst.max((a - b).abs());
        }
        for (a, b) in cf.blocks.iter().zip(&spec.blocks) {
            worst = worst.max(a.entries.sub(&b.entries).max_abs());
        }
        let name = match target {
            TargetFn::Normalized => "closed form vs extracted blocks (f)",
            TargetFn::Bare => "closed form vs extracted blocks (U)",
        };
        push(name, worst, 1e-9, &mut checks);

        let dense = dense_spectrum_oracle(&h)?;
        let dev = multiset_relative_deviation(&cf.eigenvalue_multiset(), &dense)
            .expect("multisets have equal size");
        let name = match target {
            TargetFn::Normalized => "closed form vs dense oracle (f)",
            TargetFn::Bare => "closed form vs dense oracle (U)",
        };
        push(name, dev, 1e-8, &mut checks);
    }

    // paired blocks agree
    let t = transform(&hessian_at_reference(&config, TargetFn::Normalized), &basis)?;
    let spec = extract_blocks(&t, &basis, DEFAULT_BLOCK_TOL)?;
    let mut worst = 0.0_f64;
    for a in &spec.blocks {
        if a.label.s_sign == 1 {
            if let Some(b) =
                spec.blocks.iter().find(|b| b.label.rot == a.label.rot && b.label.s_sign == -1)
            {
                worst = worst.max(a.entries.sub(&b.entries).max_abs());
            }
        }
    }
    push("paired blocks equal (B_k = A_k)", worst, 1e-9, &mut checks);

    // centered block structure
    let h_c = hessian_at_reference(&config_c, TargetFn::Normalized);
    let t_c = transform(&h_c, &basis_c)?;
    let spec_c = extract_blocks(&t_c, &basis_c, DEFAULT_BLOCK_TOL)?;
    push(
        "off-block residual (centered, m=1)",
        spec_c.off_block_residual / h_c.norm_inf().max(1.0),
        1e-9,
        &mut checks,
    );
    let dense_c = dense_spectrum_oracle(&h_c)?;
    let dev = multiset_relative_deviation(&spec_c.eigenvalue_multiset(), &dense_c)
        .expect("multisets have equal size");
    push("centered blocks vs dense oracle", dev, 1e-8, &mut checks);

    // null directions
    let h = hessian_at_reference(&config, TargetFn::Normalized);
    let z0 = config.reference_coords();
    let jz0: Vec<f64> = z0.chunks(2).flat_map(|q| [q[1], -q[0]]).collect();
    let worst = norm_inf(&h.mul_vec(&z0)).max(norm_inf(&h.mul_vec(&jz0)));
    push("null directions of D2f", worst, 1e-9, &mut checks);

    // gradient against finite differences at a perturbed point
    let mut rng = ngon_spectra::linalg::SplitMix::new(0xfeed);
    let z: Vec<f64> = z0.iter().map(|v| v + 0.03 * rng.next_f64()).collect();
    let eval = eval_normalized(&config, &z)?;
    let fd = ngon_spectra::fdcheck::gradient(
        |p| eval_normalized(&config, p).map(|e| e.value).unwrap_or(f64::NAN),
        &z,
        1e-6,
    );
    let worst = eval
        .gradient
        .iter()
        .zip(&fd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    push("gradient vs finite differences", worst, 1e-6, &mut checks);

    // stability
    let problem = RotatingFrameProblem::build(n)?;
    let spin = transform_spin(&problem, &basis)?;
    push("spin transform off-block residual", spin.off_block_residual, 1e-9, &mut checks);
    push("spin mapping identities", spin.mapping_residual, 1e-12, &mut checks);
    let stab = block_polynomial_eigs(&problem, &basis)?;
    push("stability blocks vs dense linearization", stab.spectral_mismatch, 1e-7, &mut checks);
    push("quadruple symmetry", quadruple_symmetry_defect(&stab.block_union), 1e-8, &mut checks);
    push("zero eigenvalue count >= 2", (2.0 - stab.zero_count as f64).max(0.0), 0.5, &mut checks);
    let dense_lin = dense_linearization_oracle(&problem)?;
    push("dense linearization self-check", hausdorff(&stab.dense, &dense_lin), 1e-12, &mut checks);

    // print the table
    let name_w = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!("verification suite for n = {n}");
    let mut all_ok = true;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        all_ok &= c.passed();
        println!("  {:name_w$}  {:>12.3e}  (tol {:>8.1e})  {}", c.name, c.residual, c.tol, status);
    }
    println!("{}", if all_ok { "all checks passed" } else { "FAILURES present" });
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn expected_multiplicities(n: usize, centered: bool) -> Vec<(IrrepLabel, usize)> {
    let mut out = vec![(IrrepLabel::Phi1, 1), (IrrepLabel::Phi2, 1)];
    if n % 2 == 0 {
        out.push((IrrepLabel::Phi3, 1));
        out.push((IrrepLabel::Phi4, 1));
    }
    let top = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for k in 1..=top {
        let m = if centered && k == 1 { 3 } else { 2 };
        out.push((IrrepLabel::Rho(k), m));
    }
    out
}
