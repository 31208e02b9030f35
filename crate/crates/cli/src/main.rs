use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liegeo::report::{write_ndjson, ReportRecord};

mod commands;

/// Left-invariant Lorentz geometry on small Lie groups, Iwasawa factorizations
/// of SL(2,R) and the Goedel chart. Reports are newline-delimited JSON.
#[derive(Parser, Debug)]
#[command(name = "liegeo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct PresetArg {
    /// Built-in preset name.
    #[arg(long, conflicts_with = "preset_file")]
    preset: Option<String>,
    /// Path to an algebra JSON file.
    #[arg(long)]
    preset_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure-constant checks.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// Levi-Civita connection table of a preset.
    Connection(PresetArg),
    /// Curvature table k_raw = (R(X,Y)Y, X).
    Curvature {
        #[command(flatten)]
        preset: PresetArg,
        /// Also emit the normalized sectional curvature.
        #[arg(long)]
        normalized: bool,
    },
    /// Pseudo-orthonormal basis by Gram–Schmidt.
    Orthonormalize {
        #[command(flatten)]
        preset: PresetArg,
        /// Processing order, e.g. "0,1,2" (default: natural order).
        #[arg(long)]
        order: Option<String>,
    },
    /// Curvature for the metric scaled by c.
    Scale {
        #[command(flatten)]
        preset: PresetArg,
        /// Positive scalar, e.g. "2", "1/4", "1/2*sqrt2".
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Iwasawa factorization of a matrix literal "a,b;c,d".
    Iwasawa {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, value_enum, default_value = "kan")]
        order: Order,
    },
    /// The map Psi(rho, theta, phi) onto SL(2,R).
    Psi(PsiArgs),
    /// Integrate the geodesic equations from the identity.
    Geodesic {
        #[command(flatten)]
        preset: PresetArg,
        /// Initial body velocity, e.g. "1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Emit every n-th sample of the trajectory.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// The Goedel metric in global coordinates.
    Goedel {
        #[command(subcommand)]
        action: GoedelAction,
    },
    /// Homomorphism checks of the explicit group maps.
    Maps {
        #[command(subcommand)]
        action: MapsAction,
    },
    /// Runs every acceptance criterion.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraAction {
    /// Jacobi identity, antisymmetry, nondegeneracy and realization.
    Check(PresetArg),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Kan,
    Nak,
}

#[derive(Args, Debug)]
struct PsiArgs {
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Recover (rho, theta, phi) from a matrix literal.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["verify_nak", "pushforward"])]
    inverse: Option<String>,
    /// Batch check of Psi against its NAK factors.
    #[arg(long, requires = "seed", conflicts_with = "pushforward")]
    verify_nak: bool,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Push the sub-Riemannian frame forward at (rho, theta, phi).
    #[arg(long)]
    pushforward: bool,
    /// Central-difference step for --pushforward.
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
}

#[derive(Subcommand, Debug)]
enum GoedelAction {
    /// Metric components at a chart point.
    Components {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Pullback of the metric under the isometry action at random points.
    PullbackCheck {
        /// Fixed action parameters "a,b,c,d"; random when absent.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Use a finite-difference Jacobian instead of the analytic one.
        #[arg(long)]
        fd: bool,
    },
    /// Christoffel symbols at a chart point.
    Christoffel {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(Subcommand, Debug)]
enum MapsAction {
    /// Homomorphism residuals over random pairs.
    Check {
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn run(cli: Cli) -> liegeo::Result<Vec<ReportRecord>> {
    use commands as c;
    match cli.command {
        Command::Algebra {
            action: AlgebraAction::Check(p),
        } => c::algebra_check(&c::load(&p.preset, &p.preset_file)?),
        Command::Connection(p) => c::connection(&c::load(&p.preset, &p.preset_file)?),
        Command::Curvature { preset, normalized } => {
            c::curvature(&c::load(&preset.preset, &preset.preset_file)?, normalized)
        }
        Command::Orthonormalize { preset, order } => c::orthonormalize(
            &c::load(&preset.preset, &preset.preset_file)?,
            order.as_deref(),
        ),
        Command::Scale { preset, c: factor } => {
            c::scale(&c::load(&preset.preset, &preset.preset_file)?, &factor)
        }
        Command::Iwasawa { matrix, order } => c::iwasawa(&matrix, matches!(order, Order::Nak)),
        Command::Psi(a) => {
            if a.verify_nak {
                c::psi_verify(a.samples, a.seed.expect("required by clap"))
            } else if let Some(m) = a.inverse {
                c::psi_inverse(&m)
            } else {
                let coords = c::psi_coords(a.rho, a.theta, a.phi)?;
                if a.pushforward {
                    c::psi_pushforward(&coords, a.h)
                } else {
                    c::psi_eval(&coords)
                }
            }
        }
        Command::Geodesic {
            preset,
            v,
            t,
            steps,
            stride,
        } => c::geodesic(
            &c::load(&preset.preset, &preset.preset_file)?,
            &v,
            t,
            steps,
            stride,
        ),
        Command::Goedel { action } => match action {
            GoedelAction::Components { point, a } => c::goedel_components(&point, a),
            GoedelAction::PullbackCheck {
                params,
                samples,
                seed,
                a,
                fd,
            } => c::goedel_pullback(params.as_deref(), samples, seed, a, fd),
            GoedelAction::Christoffel { point, a } => c::goedel_christoffel(&point, a),
        },
        Command::Maps {
            action: MapsAction::Check { pairs, seed },
        } => c::maps_check(pairs, seed),
        Command::VerifyAll { seed } => Ok(c::verify_all(seed)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("usage error"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(records) => {
            let mut out = io::stdout().lock();
            if write_ndjson(&mut out, &records)
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if records.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
