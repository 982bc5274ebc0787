use std::path::PathBuf;

use clap::{Parser, Subcommand};
use yamabe_cli::commands::{self, Outputs, RotationalArgs, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "yamabe",
    version,
    about = "Verify gradient almost Yamabe solitons on hypersurfaces of warped products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the five space-form models against their constant curvature.
    Spaceforms {
        /// Append the known-wrong pair (exp warp, sphere fiber, c = -1).
        #[arg(long, hide = true)]
        inject_wrong_row: bool,
    },
    /// Run the checks of a TOML scene file.
    Analyze {
        scene: PathBuf,
        /// Report path, overriding the scene's output.report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// OBJ mesh path, overriding the scene's output.mesh.
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Build a constant-angle rotational hypersurface and classify it.
    Rotational {
        /// Constant angle function, strictly between 0 and 1.
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        theta: f64,
        /// Warping function of t.
        #[arg(long, default_value = "exp(t)")]
        f: String,
        /// Hypersurface dimension.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c1: f64,
        /// Profile constant; omitted means anchored at u0.
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u0: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        u1: f64,
        /// Domain of the warp as LO,HI (inf allowed).
        #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
        interval: Option<(f64, f64)>,
        /// Lattice points per chart axis.
        #[arg(long, default_value_t = 9)]
        samples: usize,
        /// Points around the rotation circle in the mesh.
        #[arg(long, default_value_t = 48)]
        angular_samples: usize,
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the immersion presets.
    Presets,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected LO,HI")?;
    let num = |x: &str| -> Result<f64, String> {
        match x.trim() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            t => t.parse().map_err(|e| format!("{t}: {e}")),
        }
    };
    Ok((num(a)?, num(b)?))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            std::process::exit(code);
        }
    };
    let mut out = std::io::stdout().lock();
    let code = match cli.command {
        Command::Spaceforms { inject_wrong_row } => commands::cmd_spaceforms(inject_wrong_row, &mut out),
        Command::Analyze { scene, report, mesh } => commands::cmd_analyze(&scene, &Outputs { report, mesh }, &mut out),
        Command::Rotational {
            theta,
            f,
            n,
            c1,
            c2,
            u0,
            u1,
            interval,
            samples,
            angular_samples,
            mesh,
            report,
        } => {
            let (lo, hi) = interval.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
            let args = RotationalArgs {
                theta,
                f,
                n,
                c1,
                c2,
                u0,
                u1,
                lo,
                hi,
                samples,
                angular_samples,
            };
            commands::cmd_rotational(&args, &Outputs { report, mesh }, &mut out)
        }
        Command::Presets => commands::cmd_presets(&mut out),
    };
    std::process::exit(code);
}
