//! `rootframe`: construct classical root systems, analyze frames, rescale
//! eigenframes to Parseval form, close frames under their own reflections,
//! and verify root-system closure.
//!
//! Exit codes: 0 = ran (and, for `verify`, passed); 1 = `verify` verdict
//! failure; 2 = usage or validation error; 3 = internal error. `analyze`
//! always exits 0 on a clean run — its verdicts live in the report.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::DVector;

use rootframe::{
    commutation_check, construct_classical, emit_report, frame_digest, gram_analysis,
    group_enumerate, is_root_frame_closure, load_frame, multiplicity_bound_check,
    parseval_scaling, positive_subsystem, root_frame_invariants, save_frame, sign_symmetrize,
    spark_obstruction, spectral_analysis, verify_root_system, ClosureBlock, ClosureCaps,
    ClosureStatus, Error, FailureWitness, Family, Frame, FrameDocument, GramVerdict,
    GroupEnumeration, LoadedFrame, PositiveSystem, ReportDocument, Result, RootFrameVerdict,
    RootSystem, SplitMix64,
};

#[derive(Parser)]
#[command(
    name = "rootframe",
    version,
    about = "Root systems as frames: construction, spectral analysis, Parseval rescaling, reflection closure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a classical root system and write its positive subsystem as
    /// a frame document (the separating functional is recorded in the
    /// document's `beta` field).
    Construct {
        /// Family: A, B, C, D, or I2.
        family: String,
        /// Rank (for I2: the index n of the dihedral system).
        rank: usize,
        /// Scale all roots to unit norm.
        #[arg(long)]
        normalize: bool,
        /// Explicit separating functional, comma-separated coordinates.
        #[arg(long, value_name = "X1,X2,...", conflicts_with = "seed")]
        beta: Option<String>,
        /// Seed for drawing the separating functional.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (default: stdout).
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
    /// Analyze a frame document: spectral report, commutation check, Gram
    /// structure, multiplicity bounds, and root-frame invariants when the
    /// input is a unit-norm positive subsystem. Verdicts never affect the
    /// exit code.
    Analyze {
        /// Frame document path, or "-" for stdin.
        input: String,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
    /// Rescale an eigenframe to Parseval form (weights divided by the
    /// per-vector eigenvalues) and write the scaled frame document.
    Scale {
        /// Frame document path, or "-" for stdin.
        input: String,
        /// Destination for the scaled frame (default: stdout).
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Destination for the residual report (default: stderr).
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
    /// Close a unit-norm frame under its own reflections and classify the
    /// outcome; caps are reported, never errors.
    Closure {
        /// Frame document path, or "-" for stdin.
        input: String,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Destination for the orbit frame document when the run closes
        /// (default: `<output>.orbit` when --output is a path).
        #[arg(long, value_name = "PATH")]
        orbit_out: Option<PathBuf>,
        /// Stop once the signed orbit would exceed this many vectors.
        #[arg(long, default_value_t = 10_000, value_parser = parse_cap)]
        max_vectors: usize,
        #[arg(long, default_value_t = 64, value_parser = parse_cap)]
        max_sweeps: usize,
        /// Also enumerate the reflection group of a recovered root system.
        #[arg(long)]
        enumerate_group: bool,
        #[arg(long, default_value_t = 100_000, value_parser = parse_cap)]
        max_group_elements: usize,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
    /// Verify that the sign-symmetrized input is reflection-closed and that
    /// the pair-reflection (spark) obstruction passes. Exit 0 iff both hold.
    Verify {
        /// Frame document path, or "-" for stdin.
        input: String,
        /// Optional structured report destination.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("tolerance must be a positive finite number".into())
    }
}

fn parse_cap(s: &str) -> std::result::Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0 {
        Ok(v)
    } else {
        Err("caps must be positive".into())
    }
}

fn parse_beta(s: &str) -> Result<DVector<f64>> {
    let coords: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|part| part.trim().parse::<f64>()).collect();
    match coords {
        Ok(c) if !c.is_empty() => Ok(DVector::from_vec(c)),
        _ => Err(Error::InvalidParameter(format!(
            "--beta expects comma-separated coordinates, got {s:?}"
        ))),
    }
}

fn read_loaded(input: &str) -> Result<LoadedFrame> {
    if input == "-" {
        load_frame(io::stdin().lock())
    } else {
        let file = File::open(input)
            .map_err(|e| Error::InvalidInput(format!("{input}: {e}")))?;
        load_frame(file)
    }
}

fn write_output(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = File::create(path)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            write(&mut file)
        }
        None => write(&mut io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::RetryExhausted { .. } => 3,
                _ => 2,
            })
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Construct { family, rank, normalize, beta, seed, output, tol } => {
            cmd_construct(&family, rank, normalize, beta.as_deref(), seed, output.as_deref(), tol)
        }
        Command::Analyze { input, output, tol } => cmd_analyze(&input, output.as_deref(), tol),
        Command::Scale { input, output, report, tol } => {
            cmd_scale(&input, output.as_deref(), report.as_deref(), tol)
        }
        Command::Closure {
            input,
            output,
            orbit_out,
            max_vectors,
            max_sweeps,
            enumerate_group,
            max_group_elements,
            tol,
        } => cmd_closure(
            &input,
            output.as_deref(),
            orbit_out,
            ClosureCaps { max_vectors, max_sweeps },
            enumerate_group,
            max_group_elements,
            tol,
        ),
        Command::Verify { input, output, tol } => cmd_verify(&input, output.as_deref(), tol),
    }
}

fn cmd_construct(
    family: &str,
    rank: usize,
    normalize: bool,
    beta: Option<&str>,
    seed: u64,
    output: Option<&Path>,
    tol: f64,
) -> Result<u8> {
    let fam = Family::parse(family).ok_or_else(|| {
        Error::InvalidParameter(format!("unknown family {family:?} (expected A, B, C, D, or I2)"))
    })?;
    let system = construct_classical(fam, rank, normalize)?;
    let beta_vec = beta.map(parse_beta).transpose()?;
    let positives = positive_subsystem(&system, beta_vec.as_ref(), Some(seed), tol)?;
    let frame = Frame::from_positives(&positives);
    let doc = FrameDocument::from_frame(&frame, system.family_tag(), Some(positives.beta()));
    write_output(output, |w| save_frame(&doc, w))?;
    Ok(0)
}

fn cmd_analyze(input: &str, output: Option<&Path>, tol: f64) -> Result<u8> {
    let loaded = read_loaded(input)?;
    let report = build_analysis_report(&loaded, tol)?;
    write_output(output, |w| emit_report(&report, w))?;
    Ok(0)
}

fn build_analysis_report(loaded: &LoadedFrame, eps: f64) -> Result<ReportDocument> {
    let frame = &loaded.frame;
    let mut report = ReportDocument::new(frame_digest(&loaded.document)?);

    let spectral = spectral_analysis(frame, eps);
    report.eigen_clusters =
        spectral.eigen_clusters.iter().map(|c| (c.lambda, c.multiplicity)).collect();
    report.verdicts.insert("is_frame".into(), spectral.verdicts.is_frame);
    report.verdicts.insert("is_tight".into(), spectral.verdicts.is_tight);
    report.verdicts.insert("is_eigenframe".into(), spectral.verdicts.is_eigenframe);
    report.residuals.insert("eigenvector_residual".into(), spectral.worst_residual);
    if let Some(d) = spectral.lambda_discrepancy {
        report.residuals.insert("lambda_discrepancy".into(), d);
    }

    let commutation = commutation_check(frame);
    report.verdicts.insert("commutes".into(), commutation.commutes);
    report.residuals.insert("reflection_commutator".into(), commutation.reflection_commutator);
    report.residuals.insert("rank_one_commutator".into(), commutation.rank_one_commutator);

    let gram = gram_analysis(frame, eps);
    match gram.verdict {
        GramVerdict::BlockDiagonal { max_cross_entry } => {
            report.verdicts.insert("gram_block_diagonal".into(), true);
            report.residuals.insert("gram_max_cross_entry".into(), max_cross_entry);
        }
        GramVerdict::CrossTermsPresent { max_cross_entry } => {
            report.verdicts.insert("gram_block_diagonal".into(), false);
            report.residuals.insert("gram_max_cross_entry".into(), max_cross_entry);
        }
        GramVerdict::NotApplicable => {}
    }

    match multiplicity_bound_check(frame, eps) {
        Ok(m) => {
            report.verdicts.insert("multiplicity_bound".into(), m.pass);
            let worst = m.cluster_masses.iter().map(|c| c.defect).fold(0.0_f64, f64::max);
            report.residuals.insert("cluster_mass_defect".into(), worst);
        }
        // The bound is an eigenframe statement; skip it for other frames.
        Err(Error::NotAnEigenframe { .. }) => {}
        Err(e) => return Err(e),
    }

    if let Some(positives) = recover_positive_system(loaded, eps) {
        let invariants = root_frame_invariants(&positives, eps)?;
        report.verdicts.insert("root_frame_invariants".into(), invariants.pass);
        report.residuals.insert("trace_defect".into(), invariants.trace_defect);
        report.residuals.insert("cross_orthogonality".into(), invariants.cross_orthogonality);
        let worst =
            invariants.clusters.iter().map(|c| c.counting_defect).fold(0.0_f64, f64::max);
        report.residuals.insert("counting_defect".into(), worst);
    }
    Ok(report)
}

/// Reinterprets the input as a positive subsystem when that is faithful:
/// unweighted unit-norm vectors whose sign-symmetrization verifies as a root
/// system, with some functional (the recorded one, the vector sum, or a
/// seeded draw) keeping every input direction strictly positive.
fn recover_positive_system(loaded: &LoadedFrame, eps: f64) -> Option<PositiveSystem> {
    let frame = &loaded.frame;
    if frame.weights().iter().any(|&w| w != 1.0) || !frame.is_unit_norm(eps) {
        return None;
    }
    let signed = sign_symmetrize(frame.vectors(), eps);
    if signed.len() != 2 * frame.len() {
        // Some input directions coincided up to sign; index bookkeeping
        // would no longer describe the document's rows.
        return None;
    }
    let system = RootSystem::new(frame.dim(), signed, None).ok()?;

    let mut candidates = Vec::new();
    if let Some(beta) = loaded.document.beta_vector() {
        if beta.len() == frame.dim() {
            candidates.push(beta);
        }
    }
    let sum = frame
        .vectors()
        .iter()
        .fold(DVector::zeros(frame.dim()), |acc: DVector<f64>, v| acc + v);
    if sum.norm() > 0.0 {
        candidates.push(sum.normalize());
    }
    let mut rng = SplitMix64::new(0);
    candidates.extend((0..64).map(|_| rng.unit_vector(frame.dim())));

    for beta in candidates {
        if frame.vectors().iter().all(|v| v.dot(&beta) > eps) {
            if let Ok(p) = positive_subsystem(&system, Some(&beta), None, eps) {
                return Some(p);
            }
        }
    }
    None
}

fn cmd_scale(
    input: &str,
    output: Option<&Path>,
    report_out: Option<&Path>,
    tol: f64,
) -> Result<u8> {
    let loaded = read_loaded(input)?;
    let scaling = parseval_scaling(&loaded.frame, tol)?;

    let doc = FrameDocument::from_frame(
        &scaling.scaled,
        loaded.document.tag.as_deref(),
        loaded.document.beta_vector().as_ref(),
    );
    write_output(output, |w| save_frame(&doc, w))?;

    let mut report = ReportDocument::new(frame_digest(&loaded.document)?);
    report.verdicts.insert(
        "parseval".into(),
        scaling.residual <= rootframe::tol::PARSEVAL_RESIDUAL,
    );
    report.verdicts.insert(
        "dimension_identity".into(),
        scaling.dimension_defect <= rootframe::tol::DIMENSION_DEFECT,
    );
    report.residuals.insert("parseval_residual".into(), scaling.residual);
    report.residuals.insert("dimension_defect".into(), scaling.dimension_defect);
    match report_out {
        Some(path) => write_output(Some(path), |w| emit_report(&report, w))?,
        None => emit_report(&report, io::stderr().lock())?,
    }
    Ok(0)
}

fn cmd_closure(
    input: &str,
    output: Option<&Path>,
    orbit_out: Option<PathBuf>,
    caps: ClosureCaps,
    enumerate_group: bool,
    max_group_elements: usize,
    tol: f64,
) -> Result<u8> {
    let loaded = read_loaded(input)?;
    let mut outcome = is_root_frame_closure(&loaded.frame, caps, tol)?;
    if outcome.closure.duplicates_collapsed > 0 {
        eprintln!(
            "warning: collapsed {} input direction(s) duplicated up to sign",
            outcome.closure.duplicates_collapsed
        );
    }

    let mut report = ReportDocument::new(frame_digest(&loaded.document)?);
    report
        .verdicts
        .insert("closed".into(), outcome.closure.status == ClosureStatus::Closed);
    report
        .verdicts
        .insert("root_frame".into(), outcome.verdict == RootFrameVerdict::Yes);
    if enumerate_group {
        if let Some(system) = &outcome.root_system {
            match group_enumerate(system, max_group_elements, tol)? {
                GroupEnumeration::Complete { order, root_set_invariant } => {
                    outcome.closure.group_order = Some(order);
                    report.verdicts.insert("root_set_invariant".into(), root_set_invariant);
                }
                GroupEnumeration::CapExceeded { explored } => {
                    eprintln!(
                        "warning: group enumeration hit the cap after {explored} elements"
                    );
                }
            }
        } else {
            eprintln!("warning: no closed root system to enumerate a group for");
        }
    }
    report.closure = Some(ClosureBlock::from_result(&outcome.closure, Some(outcome.verdict)));
    write_output(output, |w| emit_report(&report, w))?;

    if let Some(orbit) = outcome.closure.orbit.as_ref() {
        let derived = orbit_out.or_else(|| {
            output.map(|p| {
                let mut name = p.as_os_str().to_owned();
                name.push(".orbit");
                PathBuf::from(name)
            })
        });
        if let Some(path) = derived {
            let orbit_frame = Frame::unweighted(loaded.frame.dim(), orbit.clone())?;
            let tag = match &loaded.document.tag {
                Some(t) => format!("{t}+orbit"),
                None => "orbit".to_string(),
            };
            let doc = FrameDocument::from_frame(&orbit_frame, Some(&tag), None);
            write_output(Some(&path), |w| save_frame(&doc, w))?;
        }
    }
    Ok(0)
}

fn cmd_verify(input: &str, output: Option<&Path>, tol: f64) -> Result<u8> {
    let loaded = read_loaded(input)?;
    let signed = sign_symmetrize(loaded.frame.vectors(), tol);
    let verification = verify_root_system(&signed, tol)?;
    let spark = spark_obstruction(&loaded.frame, tol)?;

    let mut report = ReportDocument::new(frame_digest(&loaded.document)?);
    report.verdicts.insert("root_system".into(), verification.pass);
    report.verdicts.insert("spark_obstruction".into(), spark.pass);
    for v in &verification.violations {
        println!(
            "closure violation: reflecting vector {} through vector {} leaves the \
             sign-symmetrized set",
            v.beta_index, v.alpha_index
        );
        report.failures.push(FailureWitness {
            kind: "closure".into(),
            indices: vec![v.alpha_index, v.beta_index],
            vector: v.reflected.iter().copied().collect(),
        });
    }
    for f in &spark.failures {
        println!(
            "spark witness: reflecting vector {} through vector {} misses the frame \
             (up to sign)",
            f.argument_index, f.axis_index
        );
        report.failures.push(FailureWitness {
            kind: "spark".into(),
            indices: vec![f.axis_index, f.argument_index],
            vector: f.reflected.iter().copied().collect(),
        });
    }
    println!("root system closure: {}", if verification.pass { "PASS" } else { "FAIL" });
    println!("spark obstruction: {}", if spark.pass { "PASS" } else { "FAIL" });
    if let Some(path) = output {
        write_output(Some(path), |w| emit_report(&report, w))?;
    }
    Ok(if verification.pass && spark.pass { 0 } else { 1 })
}
