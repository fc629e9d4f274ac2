//! `sphere-distal`: distality, fixed points and orbits of matrices acting
//! on spheres, with JSON reports and reproducible exit codes.

mod input;
mod report;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sphere_distal::distality::{classify_projective_distality, semigroup_distality_test};
use sphere_distal::fixed::{choose_nondistal_witness, fixed_or_periodic_points, isometry_even_sphere_witness};
use sphere_distal::{AffineSphereMap, Config, Error, SpherePoint};

use report::{exit, verdict_code, Failure, RunReport};

#[derive(Debug, Parser)]
#[command(name = "sphere-distal", version, about = "Dynamics of invertible matrices on spheres")]
struct Cli {
    /// JSON configuration file; any field may be omitted.
    #[arg(long, global = true, env = "SPHERE_DISTAL_CONFIG", value_name = "FILE")]
    config: Option<PathBuf>,

    /// Random seed for the orbit oracle and the semigroup word sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(flatten)]
    tol: TolFlags,

    #[command(subcommand)]
    command: Command,
}

/// Overrides for individual tolerances.
#[derive(Debug, Args)]
struct TolFlags {
    #[arg(long, global = true, value_name = "X")]
    tol_unit_norm: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_spectral: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_rank: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_residual: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_bisection: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_cluster: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_singular: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_classification: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    tol_orthogonality: Option<f64>,
}

impl TolFlags {
    fn apply(&self, cfg: &mut Config) {
        let t = &mut cfg.tolerances;
        let pairs = [
            (self.tol_unit_norm, &mut t.unit_norm),
            (self.tol_spectral, &mut t.spectral),
            (self.tol_rank, &mut t.rank),
            (self.tol_residual, &mut t.residual),
            (self.tol_bisection, &mut t.bisection),
            (self.tol_cluster, &mut t.cluster),
            (self.tol_singular, &mut t.singular),
            (self.tol_classification, &mut t.classification),
            (self.tol_orthogonality, &mut t.orthogonality),
        ];
        for (flag, field) in pairs {
            if let Some(v) = flag {
                *field = v;
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Vector(Vec<f64>);

fn vector_arg(s: &str) -> Result<Vector, String> {
    input::vector(s).map(Vector)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the projective action of a matrix is distal.
    /// Exit 0 = Distal, 1 = NotDistal, 2 = Inconclusive.
    Classify {
        /// Matrix JSON, `{"dim": d, "rows": [...]}` or bare rows; `-` reads stdin.
        matrix: PathBuf,
    },
    /// Fixed point, or period-2 points, of the affine circle map `(a + T x) / |a + T x|`.
    FixedPoint {
        matrix: PathBuf,
        /// Translation, e.g. `--a 0,0.2`.
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        a: Vector,
    },
    /// Iterate a point and write the orbit as CSV and optionally SVG.
    Orbit {
        matrix: PathBuf,
        /// Translation; omit for the projective action.
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        a: Option<Vector>,
        /// Starting point; normalized onto the sphere.
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        x: Vector,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// CSV destination. Without it the CSV text is embedded in the report.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        /// Axis dropped by the orthographic view of a 3-dimensional orbit.
        #[arg(long, value_enum, default_value_t = svg::Axis::Z)]
        axis: svg::Axis,
    },
    /// Distality test for the semigroup generated by a list of matrices.
    /// Exit codes as for `classify`.
    Semigroup {
        /// JSON `{"generators": [...], "word_length_budget": 8, "sample_count": 256, "rng_seed": 0}`.
        spec: PathBuf,
    },
    /// Translation making the affine map non-distal: any 2x2 matrix, or an
    /// orthogonal 3x3 matrix.
    Witness { matrix: PathBuf },
    /// The point mapped to `y` by the affine map.
    InverseImage {
        matrix: PathBuf,
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        a: Vector,
        #[arg(long, value_parser = vector_arg, allow_hyphen_values = true)]
        y: Vector,
    },
}

struct Outcome {
    payload: Value,
    code: u8,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize to JSON")
}

fn point(v: &[f64]) -> Result<SpherePoint<f64>, Failure> {
    SpherePoint::from_vector(v).map_err(|_| Failure::parse("point must be a nonzero finite vector".into()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn run(command: &Command, cfg: &Config, seed: Option<u64>) -> Result<Outcome, Failure> {
    match command {
        Command::Classify { matrix } => {
            let v = classify_projective_distality(&input::matrix(matrix)?, cfg)?;
            Ok(Outcome { code: verdict_code(v.verdict), payload: to_value(&v) })
        }
        Command::FixedPoint { matrix, a } => {
            let points = fixed_or_periodic_points(&input::matrix(matrix)?, &a.0, &cfg.tolerances)?;
            Ok(Outcome { code: exit::OK, payload: to_value(&points) })
        }
        Command::Orbit { matrix, a, x, steps, csv, svg: svg_path, axis } => {
            let t = input::matrix(matrix)?;
            let d = t.dim();
            let a = a.as_ref().map_or_else(|| vec![0.0; d], |v| v.0.clone());
            let map = AffineSphereMap::new(t, a, &cfg.tolerances)?;
            let x = point(&x.0)?;
            let orbit = map.orbit(&x, *steps)?;
            let text = orbit.to_csv_string();
            let mut payload = json!({
                "regime": map.regime(),
                "steps": steps,
                "points": orbit.points,
            });
            match csv {
                Some(p) => {
                    write_file(p, &text)?;
                    payload["csv_path"] = json!(p);
                }
                None => payload["csv"] = json!(text),
            }
            if let Some(p) = svg_path {
                if !(2..=3).contains(&d) {
                    return Err(Error::DimensionUnsupported(d).into());
                }
                write_file(p, &svg::orbit(&orbit.points, *axis))?;
                payload["svg_path"] = json!(p);
            }
            Ok(Outcome { code: exit::OK, payload })
        }
        Command::Semigroup { spec } => {
            let mut spec = input::semigroup_spec(spec)?;
            if let Some(s) = seed {
                spec.rng_seed = s;
            }
            let v = semigroup_distality_test(&spec, cfg)?;
            Ok(Outcome { code: verdict_code(v.verdict), payload: to_value(&v) })
        }
        Command::Witness { matrix } => {
            let t = input::matrix(matrix)?;
            let witness = match t.dim() {
                2 => to_value(&choose_nondistal_witness(&t, &cfg.tolerances)?),
                3 => to_value(&isometry_even_sphere_witness(&t, cfg)?),
                d => return Err(Error::DimensionUnsupported(d).into()),
            };
            Ok(Outcome { code: exit::OK, payload: json!({ "dimension": t.dim(), "witness": witness }) })
        }
        Command::InverseImage { matrix, a, y } => {
            let map = AffineSphereMap::new(input::matrix(matrix)?, a.0.clone(), &cfg.tolerances)?;
            let y = point(&y.0)?;
            let x = map.inverse_image(&y)?;
            let check = map.apply(&x)?.distance(&y);
            Ok(Outcome { code: exit::OK, payload: json!({ "point": x, "forward_residual": check }) })
        }
    }
}

fn emit(report: &RunReport) {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE } else { exit::OK });
        }
    };
    let started = Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();

    let cfg = input::config(cli.config.as_ref()).and_then(|mut cfg| {
        cli.tol.apply(&mut cfg);
        if let Some(s) = cli.seed {
            cfg.seed = s;
        }
        cfg.validate().map_err(|e| Failure::parse(e.to_string()))?;
        Ok(cfg)
    });
    let (config, result) = match cfg {
        Ok(cfg) => (cfg, run(&cli.command, &cfg, cli.seed)),
        Err(f) => (Config::default(), Err(f)),
    };
    let (payload, code) = match result {
        Ok(o) => (o.payload, o.code),
        Err(f) => {
            eprintln!("sphere-distal: {}", f.message);
            (json!({ "error": f }), f.code)
        }
    };
    emit(&RunReport {
        command: args,
        config,
        payload,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        version: env!("CARGO_PKG_VERSION"),
    });
    ExitCode::from(code)
}
