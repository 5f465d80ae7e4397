//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 internal failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::io::{load_drawing, save_drawing};
use crate::mesh_ops::obj::{load_obj, write_obj};
use crate::pipeline::{run_pipeline, write_outputs, PipelineOptions};
use crate::synth::{generate, truth_mesh, SyntheticSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Edge length of the ground-truth meshes written by `synth`.
const TRUTH_EDGE: f64 = 0.02;

#[derive(Debug, Parser)]
#[command(
    name = "ribbon-surface",
    version,
    about = "Turns ribbon-stroke drawings into manifold triangle meshes",
    args_conflicts_with_subcommands = true,
    subcommand_negates_reqs = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Stroke drawing (JSON).
    #[arg(long, required = true)]
    input: Option<PathBuf>,
    /// Output mesh (OBJ).
    #[arg(long, required = true)]
    output: Option<PathBuf>,
    /// Refuse to match strokes of different colors.
    #[arg(long)]
    use_color: bool,
    /// Keep sharp creases instead of beveling them.
    #[arg(long)]
    preserve_creases: bool,
    /// Skip the boundary extension stage.
    #[arg(long)]
    skip_extension: bool,
    /// Fill boundary loops with at most this many sides.
    #[arg(long, value_name = "MAX_SIDES", default_value_t = 0)]
    close_holes: usize,
    /// Laplacian smoothing iterations applied to the final mesh.
    #[arg(long, value_name = "ITERS", default_value_t = 0)]
    smooth: usize,
    /// Write intermediate meshes and stage data to this directory.
    #[arg(long, value_name = "DIR")]
    dump_stages: Option<PathBuf>,
    /// JSON file overriding engine constants.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// JSON run report.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic drawing and its ground-truth surface.
    Synth {
        /// Spec JSON file or preset name (sphere, dome, cube, cylinder, torus).
        #[arg(long)]
        spec: String,
        /// Output drawing (JSON).
        #[arg(long)]
        out: PathBuf,
        /// Output ground-truth mesh (OBJ).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Evaluate a reconstructed mesh.
    Eval {
        /// Reconstructed mesh (OBJ).
        #[arg(long)]
        mesh: PathBuf,
        /// Ground-truth mesh (OBJ).
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Drawing the mesh was built from (JSON).
        #[arg(long)]
        drawing: Option<PathBuf>,
        /// JSON file overriding engine constants.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Output report (JSON); printed to standard output when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Some(Command::Synth { spec, out, truth }) => synth(&spec, &out, truth.as_deref()),
        Some(Command::Eval {
            mesh,
            truth,
            drawing,
            config,
            report,
        }) => eval(&mesh, truth.as_deref(), drawing.as_deref(), config.as_deref(), report.as_deref()),
        None => run(cli.run),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_INTERNAL
            }
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::from_json(&std::fs::read_to_string(p).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        })?),
        None => Ok(Config::default()),
    }
}

fn run(args: RunArgs) -> Result<()> {
    // clap enforces both flags outside subcommands
    let (Some(input), Some(output)) = (args.input, args.output) else {
        return Err(Error::Validation("--input and --output are required".into()));
    };
    let config = load_config(args.config.as_deref())?;
    let loaded = load_drawing(&input)?;
    if loaded.dropped_strokes > 0 {
        eprintln!("warning: dropped {} degenerate strokes", loaded.dropped_strokes);
    }
    let options = PipelineOptions {
        use_color: args.use_color,
        preserve_creases: args.preserve_creases,
        skip_extension: args.skip_extension,
        close_holes_max_sides: args.close_holes,
        smooth_iterations: args.smooth,
        dump_dir: args.dump_stages,
        config,
    };
    let out = run_pipeline(&loaded.drawing, &options)?;
    write_outputs(&out, &output, args.report.as_deref())?;
    eprintln!(
        "{} triangles, {} components, {} non-manifold edges, {} non-manifold vertices",
        out.report.triangles, out.report.components, out.report.nonmanifold_edges, out.report.nonmanifold_vertices
    );
    Ok(())
}

fn synth(spec: &str, out: &Path, truth: Option<&Path>) -> Result<()> {
    let spec = match SyntheticSpec::preset(spec) {
        Some(s) => s,
        None => {
            let path = Path::new(spec);
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            SyntheticSpec::from_json(&text)?
        }
    };
    let drawing = generate(&spec)?;
    save_drawing(&drawing, out)?;
    if let Some(path) = truth {
        write_obj(&truth_mesh(spec.surface, TRUTH_EDGE), path)?;
    }
    Ok(())
}

fn eval(mesh: &Path, truth: Option<&Path>, drawing: Option<&Path>, config: Option<&Path>, report: Option<&Path>) -> Result<()> {
    let config = load_config(config)?;
    let mesh = load_obj(mesh)?;
    let truth = truth.map(load_obj).transpose()?;
    let drawing = drawing.map(load_drawing).transpose()?.map(|d| d.drawing);
    let json = evaluate(&mesh, truth.as_ref(), drawing.as_ref(), &config).to_json();
    match report {
        Some(path) => std::fs::write(path, json).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}
