//! The `plot94` command line.
//!
//! Exit status: 0 on success, 1 for invalid input (bad flags, unknown demo,
//! malformed expression or program, drawing off the page), 2 for I/O
//! failures. Diagnostics go to stderr only.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use plot94_core::backend::{emit_hpgl, emit_svg, PageSetup};
use plot94_core::contour::choose_levels;
use plot94_core::dmpl::{parse_dmp_bytes, translate_with, DmpResolution};
use plot94_core::expr::parse_expression;
use plot94_core::scene::{
    normalized_grid, render_contour_demo, render_contour_grid, render_demo,
    render_scalar_surface, resolution, Demo, View, DEFAULT_RESOLUTION,
};
use plot94_core::surface::{EulerAngles, MeshStyle, Projection};
use plot94_core::DisplayList;

#[derive(Debug, Parser)]
#[command(name = "plot94", version, about = "Pen-plotter surfaces, contours and DM/PL conversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a surface with hidden lines removed.
    Render(RenderArgs),
    /// Draw level curves of a scalar surface in plan view.
    Contour(ContourArgs),
    /// Translate a DM/PL program to HP-GL.
    Convert(ConvertArgs),
    /// Run the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Hpgl,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Rows,
    Mesh,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in surface: sinc, saddle, ripple, sphere, torus.
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    pub demo: Option<String>,
    /// z = f(x, y) in the expression grammar, e.g. "sin(r)/r".
    #[arg(long)]
    pub expr: Option<String>,
    /// Half-width of the square domain sampled for --expr.
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    /// Samples per axis (2..=512).
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub res: usize,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format; defaults from the --out extension, else svg.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, or "-" for stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: Source,
    /// Euler angles in degrees (Z-X-Z).
    #[arg(long, default_value_t = -45.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = -60.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, value_enum, default_value_t = Style::Rows)]
    pub style: Style,
    /// Perspective eye distance; orthographic when absent.
    #[arg(long)]
    pub distance: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of evenly spaced levels.
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// DM/PL input file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// HP-GL output file, or "-" for stdout.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    /// Treat one DM/PL step as 0.001 inch instead of 0.005.
    #[arg(long)]
    pub fine: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8094)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
}

/// A failure and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn format_for(output: &Output) -> Format {
    output.format.unwrap_or_else(|| {
        match output.out.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("hpgl") || e.eq_ignore_ascii_case("plt") => {
                Format::Hpgl
            }
            _ => Format::Svg,
        }
    })
}

fn write_out(path: &Path, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    if path == Path::new("-") {
        stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| Failure::Io(format!("stdout: {e}")))
    } else {
        std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn encode(dl: &DisplayList, format: Format) -> Result<Vec<u8>, Failure> {
    let page = PageSetup::default();
    Ok(match format {
        Format::Hpgl => emit_hpgl(dl, &page).map_err(invalid)?.to_file_string().into_bytes(),
        Format::Svg => emit_svg(dl, &page).into_bytes(),
    })
}

fn demo(name: &str) -> Result<Demo, Failure> {
    name.parse::<Demo>().map_err(invalid)
}

fn check_extent(extent: f64) -> Result<(f64, f64), Failure> {
    if extent.is_finite() && extent > 0.0 {
        Ok((-extent, extent))
    } else {
        Err(Failure::Invalid(format!("--extent must be positive, got {extent}")))
    }
}

fn expr_grid(text: &str, src: &Source) -> Result<plot94_core::surface::ScalarGrid, Failure> {
    let e = parse_expression(text).map_err(invalid)?;
    let res = resolution(src.res).map_err(invalid)?;
    normalized_grid(|x, y| e.eval(x, y), check_extent(src.extent)?, res).map_err(invalid)
}

pub fn render(args: &RenderArgs) -> Result<DisplayList, Failure> {
    let view = View {
        angles: EulerAngles::from_degrees(args.phi, args.theta, args.psi),
        projection: match args.distance {
            Some(distance) => Projection::Perspective { distance },
            None => Projection::Orthographic,
        },
        style: match args.style {
            Style::Rows => MeshStyle::Rows,
            Style::Mesh => MeshStyle::Mesh,
        },
        ..View::default()
    };
    let page = PageSetup::default();
    match (&args.source.demo, &args.source.expr) {
        (Some(name), _) => {
            let res = resolution(args.source.res).map_err(invalid)?;
            render_demo(demo(name)?, res, &view, &page).map_err(invalid)
        }
        (None, Some(text)) => {
            let grid = expr_grid(text, &args.source)?;
            render_scalar_surface(&grid, &view, &page, "expr").map_err(invalid)
        }
        (None, None) => Err(invalid("one of --demo or --expr is required")),
    }
}

pub fn contour(args: &ContourArgs) -> Result<DisplayList, Failure> {
    let page = PageSetup::default();
    if args.levels == 0 {
        return Err(invalid("--levels must be at least 1"));
    }
    match (&args.source.demo, &args.source.expr) {
        (Some(name), _) => {
            let res = resolution(args.source.res).map_err(invalid)?;
            render_contour_demo(demo(name)?, res, args.levels, &page).map_err(invalid)
        }
        (None, Some(text)) => {
            let grid = expr_grid(text, &args.source)?;
            let levels = choose_levels(&grid, args.levels);
            render_contour_grid(&grid, &levels, &page, "contour-expr").map_err(invalid)
        }
        (None, None) => Err(invalid("one of --demo or --expr is required")),
    }
}

pub fn convert(args: &ConvertArgs) -> Result<String, Failure> {
    let bytes = std::fs::read(&args.input)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.input.display())))?;
    let program = parse_dmp_bytes(&bytes).map_err(invalid)?;
    let res = if args.fine {
        DmpResolution::FINE
    } else {
        DmpResolution::default()
    };
    let doc = translate_with(&program, &PageSetup::default(), res).map_err(invalid)?;
    Ok(doc.to_file_string())
}

fn serve(args: &ServeArgs) -> Result<(), Failure> {
    let addr = SocketAddr::new(args.host, args.port);
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("plot94: serving on http://{addr}");
    rt.block_on(plot94_service::run(addr))
        .map_err(|e| Failure::Io(format!("{addr}: {e}")))
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Render(a) => {
            let bytes = encode(&render(a)?, format_for(&a.output))?;
            write_out(&a.output.out, &bytes, stdout)
        }
        Command::Contour(a) => {
            let bytes = encode(&contour(a)?, format_for(&a.output))?;
            write_out(&a.output.out, &bytes, stdout)
        }
        Command::Convert(a) => write_out(&a.out, convert(a)?.as_bytes(), stdout),
        Command::Serve(a) => serve(a),
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "plot94: {}", f.message());
            f.code()
        }
    }
}
