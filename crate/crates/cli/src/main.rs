//! Command-line front end: instance generation, simulation, certification,
//! recovery, the least-squares oracle, the ambiguity witness and the
//! self-check suite.
//!
//! Exit codes: 0 success, 1 a mathematical condition failed, 2 invalid
//! input or I/O trouble.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use persource::dft::{dft, idft, PeriodicSequence};
use persource::error::Error;
use persource::frame;
use persource::gen::{gen_instance, GenParams, OperatorKind};
use persource::io::{
    self, CertifyReportFile, CheckResult, ConfigEcho, InstanceFile, OracleReportFile,
    RecoverReportFile, SampleFile, SourceFile, VerifyReportFile, WitnessReportFile,
    WitnessSummary,
};
use persource::linalg::{self, CVector};
use persource::recovery;
use persource::system::{
    build_resolvents, generate_samples, periodic_solution, SourceSignal, SystemInstance,
};
use persource::{SampleMatrix, Tolerances};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "persource", version, about = "Periodic source recovery from space-time samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance with a planted source and x0.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        period: usize,
        /// Number of sampling vectors J.
        #[arg(long)]
        vectors: usize,
        #[arg(long)]
        subspace_dim: usize,
        /// Spectral norm of the evolution operator, in (0, 1).
        #[arg(long)]
        norm_a: f64,
        #[arg(long)]
        seed: u64,
        /// Output directory for instance.json and source.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the driven system and write space-time samples.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify the frame conditions of the sampling system.
    Certify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the source from samples (refused when certification fails).
    Recover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        /// Override the recovery tolerance target.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares identification of (x0, w), independent of the frame route.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce two sources with near-identical samples at a failing frequency.
    Witness {
        #[arg(long)]
        instance: PathBuf,
        /// Frequency to probe; defaults to the first failing one.
        #[arg(long)]
        freq: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the internal invariant suite against an instance (and samples).
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::CertificateFailed { .. }
        | Error::NotAFrame { .. }
        | Error::NotContractive { .. }
        | Error::EquivalenceViolation { .. }
        | Error::RankDeficient { .. }
        | Error::WitnessUnavailable { .. } => 1,
        _ => 2,
    }
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Error> {
    match out {
        Some(path) => io::save_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<SystemInstance, Error> {
    let file: InstanceFile = io::load_json(path)?;
    let inst = file.to_instance(Tolerances::default())?;
    if inst.near_unit_norm() {
        eprintln!(
            "warning: ||A|| = {:.4} is close to 1; transients decay slowly and long sample \
             records are needed",
            inst.a_norm()
        );
    }
    Ok(inst)
}

fn path_str(p: &Path) -> Option<String> {
    Some(p.display().to_string())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            dim,
            period,
            vectors,
            subspace_dim,
            norm_a,
            seed,
            out,
        } => {
            let params = GenParams {
                dim,
                period,
                n_samplers: vectors,
                subspace_dim,
                norm_a,
                seed,
                operator: OperatorKind::Gaussian,
                tol: Tolerances::default(),
            };
            let (inst, w, x0) = gen_instance(&params)?;
            std::fs::create_dir_all(&out)?;
            io::save_json(&out.join("instance.json"), &InstanceFile::from_instance(&inst))?;
            io::save_json(&out.join("source.json"), &SourceFile::from_parts(&w, &x0))?;
            println!(
                "wrote {} and {}",
                out.join("instance.json").display(),
                out.join("source.json").display()
            );
            Ok(0)
        }

        Command::Simulate {
            instance,
            source,
            steps,
            noise,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let source_file: SourceFile = io::load_json(&source)?;
            let (w, x0) = source_file.to_parts(&inst)?;
            if steps < 2 * inst.period() {
                return Err(Error::InvalidParameter(format!(
                    "steps = {steps} is below two periods ({})",
                    2 * inst.period()
                )));
            }
            let y = generate_samples(&inst, &w, &x0, steps, noise)?;
            io::save_json(&out, &SampleFile::from_samples(&y))?;
            println!("wrote {} ({} rows)", out.display(), y.n_rows());
            Ok(0)
        }

        Command::Certify { instance, out } => {
            let inst = load_instance(&instance)?;
            let certificate = frame::certify(&inst)?;
            let verdict = certificate.verdict;
            let report = CertifyReportFile {
                version: VERSION.to_string(),
                timestamp_unix: timestamp(),
                config: ConfigEcho {
                    command: "certify".into(),
                    instance_path: path_str(&instance),
                    ..Default::default()
                },
                certificate,
            };
            emit(&out, &report)?;
            Ok(if verdict { 0 } else { 1 })
        }

        Command::Recover {
            instance,
            samples,
            tol,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let inst = match tol {
                Some(t) => {
                    if !(t > 0.0) {
                        return Err(Error::InvalidParameter(
                            "tolerance must be positive".into(),
                        ));
                    }
                    let mut tols = *inst.tolerances();
                    tols.tol_recovery = t;
                    rebuild_with_tolerances(&inst, tols)?
                }
                None => inst,
            };
            let sample_file: SampleFile = io::load_json(&samples)?;
            let y = sample_file.to_samples()?;
            let config = ConfigEcho {
                command: "recover".into(),
                instance_path: path_str(&instance),
                samples_path: path_str(&samples),
                tol,
                ..Default::default()
            };
            match recovery::apply_r(&inst, &y) {
                Ok(report) => {
                    let file =
                        RecoverReportFile::success(VERSION, timestamp(), config, &report);
                    emit(&out, &file)?;
                    Ok(0)
                }
                Err(Error::CertificateFailed { failed }) => {
                    let certificate = frame::certify(&inst)?;
                    let witness = failed.first().and_then(|&s| {
                        recovery::ambiguity_witness(&inst, s).ok().map(|w| {
                            WitnessSummary {
                                frequency: w.frequency,
                                lambda_min: w.lambda_min,
                                predicted_sample_gap: w.predicted_gap,
                                source_separation: recovery::source_distance(
                                    &w.base_source,
                                    &w.alt_source,
                                ),
                            }
                        })
                    });
                    let file = RecoverReportFile {
                        version: VERSION.to_string(),
                        timestamp_unix: timestamp(),
                        config,
                        certificate,
                        w_hat: None,
                        x_p_hat: None,
                        truncation_bound: None,
                        spectral_residuals: None,
                        projection_residual: None,
                        convergence: None,
                        oracle_gap: None,
                        witness,
                    };
                    emit(&out, &file)?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }

        Command::Oracle {
            instance,
            samples,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let sample_file: SampleFile = io::load_json(&samples)?;
            let y = sample_file.to_samples()?;
            let est = recovery::oracle_least_squares(&inst, &y)?;
            let report = OracleReportFile {
                version: VERSION.to_string(),
                timestamp_unix: timestamp(),
                config: ConfigEcho {
                    command: "oracle".into(),
                    instance_path: path_str(&instance),
                    samples_path: path_str(&samples),
                    ..Default::default()
                },
                w: est
                    .w
                    .values()
                    .samples()
                    .iter()
                    .map(io::vector_to_json)
                    .collect(),
                x0: io::vector_to_json(&est.x0),
                residual: est.residual,
                condition_ratio: est.condition_ratio,
            };
            emit(&out, &report)?;
            Ok(0)
        }

        Command::Witness {
            instance,
            freq,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let s = match freq {
                Some(s) => s,
                None => {
                    let cert = frame::certify(&inst)?;
                    *cert.failed_frequencies().first().ok_or(
                        Error::WitnessUnavailable { frequency: 0 },
                    )?
                }
            };
            let wit = recovery::ambiguity_witness(&inst, s)?;
            let report = WitnessReportFile {
                version: VERSION.to_string(),
                timestamp_unix: timestamp(),
                config: ConfigEcho {
                    command: "witness".into(),
                    instance_path: path_str(&instance),
                    ..Default::default()
                },
                summary: WitnessSummary {
                    frequency: wit.frequency,
                    lambda_min: wit.lambda_min,
                    predicted_sample_gap: wit.predicted_gap,
                    source_separation: recovery::source_distance(
                        &wit.base_source,
                        &wit.alt_source,
                    ),
                },
                base_source: wit
                    .base_source
                    .values()
                    .samples()
                    .iter()
                    .map(io::vector_to_json)
                    .collect(),
                base_x0: io::vector_to_json(&wit.base_x0),
                alt_source: wit
                    .alt_source
                    .values()
                    .samples()
                    .iter()
                    .map(io::vector_to_json)
                    .collect(),
                alt_x0: io::vector_to_json(&wit.alt_x0),
            };
            emit(&out, &report)?;
            Ok(0)
        }

        Command::Verify {
            instance,
            samples,
            trials,
            out,
        } => {
            let raw: InstanceFile = io::load_json(&instance)?;
            let sample_matrix = match &samples {
                Some(p) => {
                    let f: SampleFile = io::load_json(p)?;
                    Some(f.to_samples()?)
                }
                None => None,
            };
            let checks = run_verify_suite(&raw, sample_matrix.as_ref(), trials);
            let pass = checks.iter().all(|c| c.pass);
            let report = VerifyReportFile {
                version: VERSION.to_string(),
                timestamp_unix: timestamp(),
                config: ConfigEcho {
                    command: "verify".into(),
                    instance_path: path_str(&instance),
                    samples_path: samples.as_deref().and_then(path_str),
                    trials: Some(trials),
                    ..Default::default()
                },
                checks,
                pass,
            };
            emit(&out, &report)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

/// Rebuild an instance with different tolerances (instances are immutable).
fn rebuild_with_tolerances(
    inst: &SystemInstance,
    tols: Tolerances,
) -> Result<SystemInstance, Error> {
    SystemInstance::new(
        inst.a().clone(),
        inst.subspace().clone(),
        inst.sampling_vectors().to_vec(),
        inst.period(),
        inst.seed(),
        tols,
    )
}

fn check(name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn run_verify_suite(
    raw: &InstanceFile,
    samples: Option<&SampleMatrix>,
    trials: usize,
) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let tol = Tolerances::default();

    // Contractivity straight from the file so a corrupted A is a failed
    // check, not a parse error.
    let a = match io::matrix_from_json(&raw.a) {
        Ok(a) => a,
        Err(e) => {
            checks.push(check("parse-A", false, e.to_string()));
            return checks;
        }
    };
    let a_norm = linalg::spectral_norm(&a);
    checks.push(check(
        "contractivity",
        a_norm < 1.0,
        format!("||A|| = {a_norm:.6}"),
    ));

    let inst = match raw.to_instance(tol) {
        Ok(i) => i,
        Err(e) => {
            checks.push(check("instance-valid", false, e.to_string()));
            return checks;
        }
    };
    checks.push(check("instance-valid", true, String::new()));

    // DFT unitarity and round-trip on random vector-valued sequences.
    let mut dft_ok = true;
    let mut worst = 0.0f64;
    let mut rng = persource::rng::stream(inst.seed(), "verify-dft");
    for _ in 0..trials.max(1) {
        use rand::Rng;
        let n_per = 1 + rng.gen_range(0..8);
        let d = 1 + rng.gen_range(0..6);
        let q = PeriodicSequence::new(
            (0..n_per)
                .map(|_| CVector::from_fn(d, |_, _| persource::rng::complex_normal(&mut rng)))
                .collect(),
        )
        .expect("nonempty");
        let s = dft(&q);
        let unitarity = (s.norm_sq() - q.norm_sq()).abs() / (1.0 + q.norm_sq());
        let back = idft(&s);
        let round_trip = q
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
            / (1.0 + q.norm());
        worst = worst.max(unitarity).max(round_trip);
        if unitarity > 1e-12 || round_trip > 1e-12 {
            dft_ok = false;
        }
    }
    checks.push(check("dft-unitarity", dft_ok, format!("worst deviation {worst:.3e}")));

    // Resolvent defining identity.
    match build_resolvents(inst.a(), inst.period(), inst.tolerances()) {
        Ok(fam) => {
            let d = inst.dim();
            let worst = (0..inst.period())
                .map(|s| {
                    (fam.inverse(s) * fam.resolvent(s)
                        - persource::CMatrix::identity(d, d))
                    .norm()
                })
                .fold(0.0, f64::max);
            checks.push(check(
                "resolvent-identity",
                worst <= 1e-10,
                format!("worst residual {worst:.3e}"),
            ));
        }
        Err(e) => checks.push(check("resolvent-identity", false, e.to_string())),
    }

    // Periodic solutions of random planted sources satisfy the recurrence.
    let mut rng = persource::rng::stream(inst.seed(), "verify-periodic");
    let mut periodic_ok = true;
    let mut periodic_worst = 0.0f64;
    for _ in 0..trials.max(1) {
        let values: Vec<CVector> = (0..inst.period())
            .map(|_| {
                let v = CVector::from_fn(inst.dim(), |_, _| {
                    persource::rng::complex_normal(&mut rng)
                });
                linalg::project(inst.subspace(), &v).expect("dims")
            })
            .collect();
        let w = match SourceSignal::new(
            PeriodicSequence::new(values).expect("nonempty"),
            inst.subspace(),
            inst.tolerances(),
        ) {
            Ok(w) => w,
            Err(_) => continue,
        };
        match periodic_solution(&inst, &w) {
            Ok(xp) => {
                let scale = 1.0 + xp.norm();
                for n in 0..inst.period() as i64 {
                    let res = (xp.at(n + 1) - (inst.a() * xp.at(n) + w.at(n))).norm() / scale;
                    periodic_worst = periodic_worst.max(res);
                    if res > 1e-10 {
                        periodic_ok = false;
                    }
                }
            }
            Err(_) => periodic_ok = false,
        }
    }
    checks.push(check(
        "periodic-solution-residual",
        periodic_ok,
        format!("worst residual {periodic_worst:.3e}"),
    ));

    // Certification runs and the two projected formulations stay consistent.
    let certificate = match frame::certify(&inst) {
        Ok(cert) => {
            checks.push(check(
                "frame-equivalence",
                true,
                format!("verdict = {}", cert.verdict),
            ));
            Some(cert)
        }
        Err(e) => {
            checks.push(check("frame-equivalence", false, e.to_string()));
            None
        }
    };

    if let Some(y) = samples {
        match recovery::residue_limits(y) {
            Ok(limits) => {
                let flagged = limits.any_non_geometric();
                checks.push(check(
                    "residue-decay-geometric",
                    !flagged,
                    if flagged {
                        "non-geometric residue deltas (noise floor, tampering, or ||A|| near 1)"
                            .into()
                    } else {
                        String::new()
                    },
                ));
            }
            Err(e) => checks.push(check("residue-decay-geometric", false, e.to_string())),
        }

        if certificate.as_ref().is_some_and(|c| c.verdict) {
            let gap = recovery::apply_r(&inst, y).and_then(|report| {
                let est = recovery::oracle_least_squares(&inst, y)?;
                let denom = recovery::source_distance(
                    &est.w,
                    &SourceSignal::new(
                        PeriodicSequence::new(vec![
                            CVector::zeros(inst.dim());
                            inst.period()
                        ])
                        .expect("nonempty"),
                        inst.subspace(),
                        inst.tolerances(),
                    )?,
                );
                Ok(recovery::source_distance(&report.w_hat, &est.w) / (1.0 + denom))
            });
            match gap {
                Ok(g) => checks.push(check(
                    "oracle-gap",
                    g <= 1e-6,
                    format!("relative gap {g:.3e}"),
                )),
                Err(e) => checks.push(check("oracle-gap", false, e.to_string())),
            }
        }
    }

    checks
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
