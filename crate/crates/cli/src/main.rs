use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plane_breaker_core::expr::{evaluate, parse, EvalResult, Expression, ParseError};
use plane_breaker_core::mesh::{
    build_mesh_with, export_obj, sample_grid_with, ColorMap, Domain, Resolution, ZLimits,
};
use plane_breaker_core::Execution;
use plane_breaker_relay::{Server, Session, SessionConfig};

#[derive(Parser)]
#[command(
    name = "plane-breaker",
    version,
    about = "Plot z = f(x, y) surfaces and relay them to viewers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mesh a surface and write it as Wavefront OBJ.
    Plot(PlotArgs),
    /// Evaluate an expression at one point.
    Eval(EvalArgs),
    /// Run the WebSocket relay.
    Serve(ServeArgs),
}

#[derive(Args)]
struct PlotArgs {
    /// Expression in x and y, optionally prefixed with `z =`.
    #[arg(allow_hyphen_values = true)]
    expression: String,
    /// Output file; the OBJ goes to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    xmax: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    ymin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    ymax: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    zmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    zmax: f64,
    /// Grid cells per axis.
    #[arg(long, default_value_t = 128)]
    segments: u32,
    /// Colormap table: one `t r g b` row per stop.
    #[arg(long)]
    colormap: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(allow_hyphen_values = true)]
    expression: String,
    /// Point as `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    at: (f64, f64),
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "PLANE_BREAKER_ADDR", default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Directory with the viewer bundle, served at `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let coord = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((coord(x)?, coord(y)?))
}

/// A failed command: message for stderr and the process exit code.
struct Failure {
    code: u8,
    message: String,
}

const EXIT_USAGE: u8 = 2;
const EXIT_EMPTY_MESH: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_BIND: u8 = 5;

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plot(args) => plot(args),
        Command::Eval(args) => eval(args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Error line followed by the source with a caret under the offending byte.
fn diagnostic(source: &str, err: &ParseError) -> String {
    let pos = err.position.min(source.len());
    let column = source.char_indices().take_while(|(i, _)| *i < pos).count();
    format!(
        "error: {} at position {}\n  {}\n  {}^",
        err.reason,
        err.position,
        source,
        " ".repeat(column)
    )
}

fn parse_expression(source: &str) -> Result<Expression, Failure> {
    parse(source).map_err(|e| Failure::new(EXIT_USAGE, diagnostic(source, &e)))
}

fn plot(args: PlotArgs) -> Result<(), Failure> {
    let expr = parse_expression(&args.expression)?;
    let usage = |e: plane_breaker_core::mesh::MeshError| Failure::new(EXIT_USAGE, format!("error: {e}"));
    let domain = Domain::new(args.xmin, args.xmax, args.ymin, args.ymax).map_err(usage)?;
    let z_limits = ZLimits::new(args.zmin, args.zmax).map_err(usage)?;
    let resolution = Resolution::new(args.segments).map_err(usage)?;
    let colormap = match &args.colormap {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_IO, format!("error: reading {}: {e}", path.display())))?;
            ColorMap::parse_table(&text).map_err(usage)?
        }
        None => ColorMap::viridis(),
    };

    let field = sample_grid_with(&expr, domain, resolution, Execution::Sequential);
    let mesh = build_mesh_with(&expr, &field, z_limits, &colormap, Execution::Sequential);
    if mesh.is_empty() {
        return Err(Failure::new(
            EXIT_EMPTY_MESH,
            format!(
                "error: empty mesh: no samples of {} lie within z limits [{}, {}]",
                mesh.label(),
                z_limits.z_min(),
                z_limits.z_max()
            ),
        ));
    }

    let obj = export_obj(&mesh);
    let summary = format!(
        "{}\nvertices {}\ntriangles {}",
        mesh.label(),
        mesh.vertex_count(),
        mesh.triangle_count()
    );
    match &args.output {
        Some(path) => {
            fs::write(path, obj)
                .map_err(|e| Failure::new(EXIT_IO, format!("error: writing {}: {e}", path.display())))?;
            println!("{summary}");
        }
        None => {
            io::stdout()
                .lock()
                .write_all(obj.as_bytes())
                .map_err(|e| Failure::new(EXIT_IO, format!("error: writing stdout: {e}")))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), Failure> {
    let expr = parse_expression(&args.expression)?;
    let (x, y) = args.at;
    match evaluate(&expr, x, y) {
        EvalResult::Value(v) => println!("{v:.6}"),
        EvalResult::Undefined => println!("undefined"),
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| Failure::new(EXIT_IO, format!("error: starting runtime: {e}")))?;
    runtime.block_on(async {
        let server = Server::bind(args.addr, Session::new(SessionConfig::default()), args.static_dir)
            .await
            .map_err(|e| Failure::new(EXIT_BIND, format!("error: cannot bind {}: {e}", args.addr)))?;
        server
            .run_until(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| Failure::new(EXIT_IO, format!("error: server: {e}")))
    })
}
