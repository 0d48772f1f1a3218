//! Command-line interface: certification runs, curvature reports, mesh
//! export, and point evaluation.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bezier::{classify_closedness, eval_surface, subdivide_to_level, Closedness};
use crate::curvature::{curvature_report, smooth_report};
use crate::error::Result;
use crate::io::{export_mesh, load_net, write_report, ExportFormat};
use crate::mesh::mesh_from_patches;
use crate::pipeline::{certified_level, run as run_pipeline, LevelRecord, RunConfig};

#[derive(Parser)]
#[command(
    name = "bezmesh",
    about = "Bezier control surfaces: subdivision certificates, curvature balances, mesh export",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the subdivision pipeline and certify embeddedness.
    Check {
        /// Control net file.
        net: PathBuf,
        /// Deepest subdivision level.
        #[arg(long, default_value_t = 5)]
        max_level: usize,
        /// Write the full JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Gauss-Legendre nodes per direction.
        #[arg(long, default_value_t = 64)]
        quad_nodes: usize,
        /// Hausdorff samples per direction.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Absolute intersection tolerance (default: 1e-9 x bbox diagonal).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Keep subdividing past the first certified level.
        #[arg(long)]
        keep_going: bool,
    },
    /// Print the curvature report at one subdivision level.
    Curvature {
        net: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 64)]
        quad_nodes: usize,
    },
    /// Export the triangulated control surface as OBJ.
    Export {
        net: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the smooth surface at (u, v).
    Eval {
        net: PathBuf,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
    },
}

/// Parse and execute; returns the process exit code. Usage problems exit
/// 2, computation failures 1, and a `check` that does not certify 1.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check { net, max_level, json, quad_nodes, samples, epsilon, keep_going } => {
            let net = load_net(net)?;
            let config = RunConfig {
                max_level,
                quad_nodes,
                samples,
                epsilon,
                stop_on_certify: !keep_going,
            };
            let records = run_pipeline(&net, &config)?;
            print_level_table(&records);
            let code = match certified_level(&records) {
                Some(level) => {
                    println!("certified at level {level}");
                    0
                }
                None => {
                    println!("not certified within {max_level} level(s)");
                    1
                }
            };
            if let Some(path) = json {
                std::fs::write(&path, write_report(&net, &config, &records)?)?;
                println!("report written to {}", path.display());
            }
            Ok(code)
        }
        Command::Curvature { net, level, quad_nodes } => {
            let net = load_net(net)?;
            let closedness = classify_closedness(&net)?;
            let smooth = match closedness {
                Closedness::Open => Some(smooth_report(&net, quad_nodes)?),
                Closedness::ClosedTorus => None,
            };
            let mesh = mesh_from_patches(&subdivide_to_level(&net, level), closedness)?;
            let report = curvature_report(&mesh, smooth)?;
            println!("level:                 {level}");
            println!("euler characteristic:  {}", report.euler_char);
            println!("interior defect sum:   {:+.12e}", report.interior_defect_sum);
            println!("boundary exterior sum: {:+.12e}", report.boundary_exterior_sum);
            println!("discrete residual:     {:+.3e}", report.discrete_residual);
            if let Some(s) = &report.smooth {
                println!("area integral:         {:+.12e}", s.area_integral);
                println!("geodesic integral:     {:+.12e}", s.geodesic_integral);
                println!("curvature integral:    {:+.12e}", s.curvature_integral);
                println!("corner turning:        {:+.12e}", s.corner_turning);
            }
            println!("convergence residual:  {:+.3e}", report.convergence_residual);
            Ok(0)
        }
        Command::Export { net, level, out } => {
            let net = load_net(net)?;
            let closedness = classify_closedness(&net)?;
            let mesh = mesh_from_patches(&subdivide_to_level(&net, level), closedness)?;
            std::fs::write(&out, export_mesh(&mesh, ExportFormat::Obj))?;
            println!(
                "wrote {} ({} vertices, {} triangles)",
                out.display(),
                mesh.vertex_count(),
                mesh.triangle_count()
            );
            Ok(0)
        }
        Command::Eval { net, u, v } => {
            let net = load_net(net)?;
            let p = eval_surface(&net, u, v);
            println!("{} {} {}", p.x, p.y, p.z);
            Ok(0)
        }
    }
}

fn print_level_table(records: &[LevelRecord]) {
    println!(
        "{:>5} {:>8} {:>12} {:>9} {:>9} {:>9} {:>5} {:>6} {:>5} {:>10}",
        "level", "patches", "hausdorff", "theta_n", "theta_u", "theta_v", "cond", "oracle", "topo", "verdict"
    );
    for r in records {
        let yn = |b: bool| if b { "yes" } else { "no" };
        println!(
            "{:>5} {:>8} {:>12.4e} {:>9.4} {:>9.4} {:>9.4} {:>5} {:>6} {:>5} {:>10}",
            r.level,
            r.patch_count,
            r.hausdorff,
            r.max_cone_spans.theta_n,
            r.max_cone_spans.theta_u,
            r.max_cone_spans.theta_v,
            yn(r.certificate.conditions_pass),
            yn(r.certificate.oracle_clear),
            yn(r.certificate.topology_match),
            format!("{:?}", r.certificate.verdict),
        );
    }
}
