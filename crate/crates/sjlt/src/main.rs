//! Command-line front end for the sparse embedding library.
//!
//! Exit codes: 0 on success, 2 on invalid input or parameters, 3 when a
//! requested check fails (code distance below threshold, empirical rate above
//! bound).

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sjlt::analysis::{
    estimate_failure, estimate_moment, lower_bound_experiment, mean_and_se, set_threads,
    LowerBoundConfig, VectorKind,
};
use sjlt::codes::{check_code_for_params, load_code, min_distance};
use sjlt::error::Error;
use sjlt::linalg::{
    approx_matrix_product, exact_matrix_product, load_matrix_csv, regression_init,
    regression_solve, regression_update, save_matrix_csv, RegressionUpdate,
};
use sjlt::params::{derive_params, JlParams, DEFAULT_C_K, DEFAULT_C_S};
use sjlt::sketch::{
    load_sketch, sample_sketch, save_sketch, sketch_from_code, ConstructionTag,
};

#[derive(Parser)]
#[command(name = "sjlt", version, about = "Sparse sign sketches for dimension reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Source dimension.
    #[arg(long)]
    d: usize,
    /// Target distortion, in (0, 0.5).
    #[arg(long)]
    eps: f64,
    /// Failure probability, in (0, 0.5).
    #[arg(long)]
    delta: f64,
    /// Override the derived column sparsity.
    #[arg(long)]
    s: Option<usize>,
    /// Override the derived target dimension.
    #[arg(long)]
    k: Option<usize>,
    /// Constant in front of the target-dimension bound.
    #[arg(long, default_value_t = DEFAULT_C_K)]
    ck: f64,
    /// Constant in front of the sparsity bound.
    #[arg(long, default_value_t = DEFAULT_C_S)]
    cs: f64,
    /// Master seed; everything derives from it deterministically.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ParamArgs {
    fn build(&self) -> Result<JlParams, Error> {
        match (self.s, self.k) {
            (Some(s), Some(k)) => {
                JlParams::from_dims(self.d, k, s, self.eps, self.delta, self.seed)
            }
            (None, None) => derive_params(
                &[(self.eps, self.delta)],
                self.d,
                self.seed,
                self.ck,
                self.cs,
            ),
            _ => Err(Error::InvalidParameter(
                "--s and --k must be given together or not at all".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a sketch and write it to a binary file.
    Gen {
        #[command(flatten)]
        params: ParamArgs,
        /// Construction family: block, graph, dks, or dense.
        #[arg(long, default_value = "block")]
        construction: String,
        /// Build the column supports from a code file instead of hashing.
        #[arg(long)]
        code_file: Option<PathBuf>,
        /// Output path for the sketch.
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a stored sketch to a vector (one coordinate per input line).
    Apply {
        /// Sketch produced by `gen`.
        #[arg(long)]
        sketch: PathBuf,
        /// Input vector file; defaults to stdin.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Output file; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate distortion moments over fresh sketch draws.
    BenchDistortion {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "block")]
        construction: String,
        /// Moment order (even).
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Test-vector shape: uniform, spread, two_coord, or basis.
        #[arg(long, default_value = "uniform")]
        vector: String,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Estimate the failure rate Pr[|distortion| > eps] and compare to delta.
    BenchFailure {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "block")]
        construction: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Test-vector shape: uniform, spread, two_coord, or basis.
        #[arg(long, default_value = "uniform")]
        vector: String,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Measure the failure rate of an under-sparse sketch on its hard vector.
    LowerBound {
        /// Construction family: block, graph, or dks.
        #[arg(long, default_value = "block")]
        construction: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Column sparsity to stress.
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target-dimension constant (the experiment sizes k = ck * l / eps^2).
        #[arg(long, default_value_t = 1.0)]
        ck: f64,
        /// Failure threshold as a multiple of eps.
        #[arg(long, default_value_t = 2.0)]
        threshold_factor: f64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Check that a code's minimum distance supports the requested sketch.
    VerifyCode {
        /// Code file (one codeword per line).
        #[arg(long)]
        code_file: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Constant in the distance threshold s - c * s^2 / k.
        #[arg(long, default_value_t = 1.0)]
        c_dist: f64,
    },
    /// Approximate A' B through a shared sketch and report the error.
    Matprod {
        /// CSV matrix A (d rows).
        #[arg(long)]
        a: PathBuf,
        /// CSV matrix B (d rows); defaults to A.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the approximate product (CSV).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress environment-dependent comments in the output file.
        #[arg(long)]
        reproducible: bool,
    },
    /// Solve least squares through a streamed sketch of (A, b).
    Regress {
        /// CSV design matrix A (d rows, n columns).
        #[arg(long = "in")]
        input: PathBuf,
        /// CSV right-hand side (d values).
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output format: json or csv.
        #[arg(long, default_value = "json")]
        format: String,
        /// Output file; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_tag(name: &str) -> Result<ConstructionTag, Error> {
    ConstructionTag::parse(name)
}

/// Test vector by name: the evenly weighted `uniform`, or one of the
/// adversarial shapes.
fn vector_by_name(name: &str, p: &JlParams) -> Result<(Vec<f64>, &'static str), Error> {
    if name == "uniform" {
        return Ok((sjlt::analysis::uniform_vector(p.d)?, "uniform"));
    }
    let kind = VectorKind::parse(name)?;
    Ok((
        sjlt::analysis::hard_vector(kind, p.s, p.eps, p.d)?,
        kind.as_str(),
    ))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen {
            params,
            construction,
            code_file,
            out,
        } => {
            let p = params.build()?;
            let sketch = match code_file {
                Some(path) => {
                    let code = load_code(&path, p.s, p.k)?;
                    sketch_from_code(&code, &p)?
                }
                None => sample_sketch(parse_tag(&construction)?, &p)?,
            };
            save_sketch(&sketch, &out)?;
            println!(
                "wrote {} sketch: k={} d={} s={} nnz={} seed={}",
                sketch.tag(),
                sketch.k(),
                sketch.d(),
                sketch.s(),
                sketch.nnz(),
                sketch.seed()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Apply { sketch, input, out } => {
            let sk = load_sketch(&sketch)?;
            let text = match input {
                Some(path) => std::fs::read_to_string(path)?,
                None => std::io::read_to_string(std::io::stdin())?,
            };
            let x = parse_vector_file(&text)?;
            let y = sk.apply(&x)?;
            let mut rendered = String::new();
            for v in &y {
                rendered.push_str(&format!("{v}\n"));
            }
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::BenchDistortion {
            params,
            construction,
            ell,
            trials,
            vector,
            threads,
        } => {
            set_threads(threads);
            let p = params.build()?;
            let tag = parse_tag(&construction)?;
            let (x, _) = vector_by_name(&vector, &p)?;
            let samples = sjlt::analysis::norm_sq_samples(tag, &p, &x, trials)?;
            let distortions: Vec<f64> = samples.iter().map(|v| (v - 1.0).abs()).collect();
            let (mean_d, se_d) = mean_and_se(&distortions);
            let moment = estimate_moment(tag, &p, &x, ell, trials)?;
            println!(
                "construction={tag} d={} k={} s={} trials={trials}",
                p.d, p.k, p.s
            );
            println!("mean |distortion| = {mean_d:.6} (se {se_d:.6})");
            println!("moment[{ell}] = {moment:.6e} vs (eps/2)^{ell} = {:.6e}", (p.eps / 2.0).powi(ell as i32));
            Ok(ExitCode::SUCCESS)
        }
        Command::BenchFailure {
            params,
            construction,
            trials,
            vector,
            threads,
        } => {
            set_threads(threads);
            let p = params.build()?;
            let tag = parse_tag(&construction)?;
            let (x, vector_tag) = vector_by_name(&vector, &p)?;
            let report = estimate_failure(tag, &p, &x, vector_tag, p.eps, trials)?;
            println!("{}", to_json(&report)?);
            if report.wilson_upper_95 <= p.delta {
                println!("PASS: empirical rate is consistent with delta={}", p.delta);
                Ok(ExitCode::SUCCESS)
            } else if report.rate > p.delta {
                println!("FAIL: observed rate {} exceeds delta={}", report.rate, p.delta);
                Ok(ExitCode::from(3))
            } else {
                println!(
                    "INCONCLUSIVE: rate {} is below delta={} but the confidence bound {} is not; \
                     raise --trials",
                    report.rate, p.delta, report.wilson_upper_95
                );
                Ok(ExitCode::from(3))
            }
        }
        Command::LowerBound {
            construction,
            eps,
            delta,
            s,
            trials,
            seed,
            ck,
            threshold_factor,
            threads,
        } => {
            set_threads(threads);
            let tag = parse_tag(&construction)?;
            let mut config = LowerBoundConfig::new(tag, eps, delta, s, trials, seed);
            config.c_k = ck;
            config.threshold_factor = threshold_factor;
            let report = lower_bound_experiment(&config)?;
            println!("{}", to_json(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyCode {
            code_file,
            params,
            c_dist,
        } => {
            let p = params.build()?;
            let code = load_code(&code_file, p.s, p.k)?;
            let dist = min_distance(&code)?;
            let threshold = p.s as f64 - c_dist * (p.s * p.s) as f64 / p.k as f64;
            println!(
                "code: {} words, length {}, min distance {dist}, threshold {threshold:.3}",
                code.num_words(),
                code.len(),
            );
            if check_code_for_params(&code, &p, c_dist)? {
                println!("PASS: distance supports s={} k={}", p.s, p.k);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: distance below threshold");
                Ok(ExitCode::from(3))
            }
        }
        Command::Matprod {
            a,
            b,
            eps,
            delta,
            seed,
            out,
            reproducible,
        } => {
            let ma = load_matrix_csv(&a)?;
            let mb = match &b {
                Some(path) => load_matrix_csv(path)?,
                None => ma.clone(),
            };
            if ma.rows() != mb.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "A has {} rows, B has {}",
                    ma.rows(),
                    mb.rows()
                )));
            }
            let r = ma.cols() + mb.cols();
            let reqs = sjlt::linalg::product_moment_requirements(eps, delta, r, None)?;
            let p = derive_params(&reqs, ma.rows(), seed, DEFAULT_C_K, DEFAULT_C_S)?;
            let sketch = sample_sketch(ConstructionTag::Block, &p)?;
            let approx = approx_matrix_product(&sketch, &ma, &mb)?;
            let exact = exact_matrix_product(&ma, &mb)?;
            let mut err = 0.0f64;
            for i in 0..approx.rows() {
                for j in 0..approx.cols() {
                    err += (approx.get(i, j) - exact.get(i, j)).powi(2);
                }
            }
            let scale = ma.frobenius_norm() * mb.frobenius_norm();
            let rel = err.sqrt() / scale.max(f64::MIN_POSITIVE);
            println!(
                "sketched product: k={} s={} rel_frobenius_err={rel:.6} (target eps={eps})",
                p.k, p.s
            );
            if let Some(path) = out {
                let comment = if reproducible {
                    None
                } else {
                    Some(format!("approx product, seed={seed} k={} s={}", p.k, p.s))
                };
                save_matrix_csv(&approx, &path, comment.as_deref())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Regress {
            input,
            rhs,
            eps,
            delta,
            seed,
            format,
            out,
        } => {
            let a = load_matrix_csv(&input)?;
            let b = load_matrix_csv(&rhs)?;
            if b.cols() != 1 || b.rows() != a.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "rhs must be a single column of {} values, got {}x{}",
                    a.rows(),
                    b.rows(),
                    b.cols()
                )));
            }
            let p = JlParams::derive(eps, delta, a.rows(), seed)?;
            let mut state = regression_init(&p, a.cols())?;
            // replay the matrix as a turnstile stream
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    regression_update(
                        &mut state,
                        &RegressionUpdate::Design { row: i, col: j, value: a.get(i, j) },
                    )?;
                }
                regression_update(
                    &mut state,
                    &RegressionUpdate::Rhs { row: i, value: b.get(i, 0) },
                )?;
            }
            let (x, residual) = regression_solve(&state)?;
            let rendered = match format.as_str() {
                "json" => {
                    let report = serde_json::json!({
                        "x": x,
                        "residual": residual,
                        "k": p.k,
                        "s": p.s,
                    });
                    format!("{}\n", to_json(&report)?)
                }
                "csv" => {
                    let mut s = String::new();
                    for v in &x {
                        s.push_str(&format!("{v}\n"));
                    }
                    s
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown format {other:?}; expected json or csv"
                    )))
                }
            };
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(rendered.as_bytes())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_vector_file(text: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
            let v: f64 = tok.parse().map_err(|_| {
                Error::Format(format!("line {}: bad number {tok:?}", lineno + 1))
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Format("empty vector input".into()));
    }
    Ok(out)
}
