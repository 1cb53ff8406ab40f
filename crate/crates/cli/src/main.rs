use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubecyl::generators::{
    self, band_flip, band_half_turn, grid_reflection, grid_rotation, hypercube_symmetry,
};
use cubecyl::hyperbolicity::{abbreviate, max_grid_size, pigeonhole_bounds, GeometryConstants};
use cubecyl::io::{export_dot, load_complex, report_to_string, ComplexFile, FileError, Highlight};
use cubecyl::stability::{stability_sweep, SweepMode};
use cubecyl::{CubeComplex, Vertex};

#[derive(Parser)]
#[command(
    name = "cubecyl",
    version,
    about = "Cylinders and stability checks on finite CAT(0) cube complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a complex file describes a median graph
    Validate { path: PathBuf },
    /// Print size, dimension, hyperbolicity and derived constants
    Info { path: PathBuf },
    /// Print I(x,y), the cylinder I_D(x,y) and its defining halfspaces
    Cylinder {
        path: PathBuf,
        x: Vertex,
        y: Vertex,
        /// Grid size D (default: the largest grid in the complex)
        #[arg(long = "D", visible_alias = "grid-d")]
        grid_d: Option<usize>,
    },
    /// Check cylinder stability over all or sampled triples
    Stability(StabilityArgs),
    /// Generate a complex file
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Write the complex as a DOT graph
    ExportDot {
        path: PathBuf,
        /// Mark the interval and cylinder of the pair X Y
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        highlight: Option<Vec<Vertex>>,
        #[arg(long = "D", visible_alias = "grid-d")]
        grid_d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    All,
    Sample,
}

#[derive(Args)]
struct StabilityArgs {
    path: PathBuf,
    #[arg(long = "D", visible_alias = "grid-d")]
    grid_d: Option<usize>,
    /// Ball radius (default 5·D·d)
    #[arg(long = "R", visible_alias = "radius")]
    radius: Option<u32>,
    #[arg(long, value_enum, default_value = "all")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GenOpts {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform random labelled tree on N vertices
    Tree {
        n: usize,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// The cube Q_d
    Hypercube {
        d: u32,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// The M x N square grid
    Grid {
        m: usize,
        n: usize,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// N unit squares glued corner to corner
    Staircase {
        n: usize,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// Lattice points (i, j) of [0,N]^2 with |i - j| <= W
    Band {
        n: usize,
        w: usize,
        #[command(flatten)]
        opts: GenOpts,
    },
    /// Dual of a random pocset on WALLS walls
    SageevRandom {
        walls: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[command(flatten)]
        opts: GenOpts,
    },
}

/// A failure reported as `error: <kind>: <message>`.
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl Display) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::new(e.kind(), e)
    }
}

impl From<cubecyl::Error> for Failure {
    fn from(e: cubecyl::Error) -> Self {
        Failure::new(e.kind(), e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    FileError::io(path, e).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            let message = f.message.replace('\n', " ");
            eprintln!("error: {}: {message}", f.kind);
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Validate { path } => {
            let (file, c) = load_complex(&path)?;
            println!(
                "valid: vertices={} edges={} hyperplanes={} automorphisms={}",
                c.vertex_count(),
                c.edges().len(),
                c.hyperplane_count(),
                file.automorphisms.len()
            );
        }
        Command::Info { path } => {
            let (file, c) = load_complex(&path)?;
            print!("{}", info(&file, &c));
        }
        Command::Cylinder { path, x, y, grid_d } => {
            let (_, c) = load_complex(&path)?;
            check_vertices(&c, &[x, y])?;
            let grid_d = grid_d.unwrap_or_else(|| max_grid_size(&c).0);
            let cyl = c.cylinder(x, y, grid_d);
            println!("D={grid_d}");
            println!("interval={:?}", c.interval_by_metric(x, y).to_vec());
            println!("cylinder={:?}", cyl.vertices.to_vec());
            println!("defining_halfspaces={:?}", cyl.defining_set.to_vec());
        }
        Command::Stability(args) => return stability(args),
        Command::Gen { kind } => generate(kind)?,
        Command::ExportDot {
            path,
            highlight,
            grid_d,
            out,
        } => {
            let (file, c) = load_complex(&path)?;
            let highlight = match highlight.as_deref() {
                Some(&[x, y]) => {
                    check_vertices(&c, &[x, y])?;
                    let grid_d = grid_d.unwrap_or_else(|| max_grid_size(&c).0);
                    Some(Highlight {
                        endpoints: (x, y),
                        interval: c.interval_by_metric(x, y),
                        cylinder: c.cylinder(x, y, grid_d).vertices,
                    })
                }
                _ => None,
            };
            let name = file.name.clone().unwrap_or_else(|| stem(&path));
            write_output(out.as_deref(), &export_dot(&c, &name, highlight.as_ref()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "complex".into())
}

fn check_vertices(c: &CubeComplex, vs: &[Vertex]) -> Result<(), Failure> {
    for &v in vs {
        if v >= c.vertex_count() {
            return Err(Failure::new(
                "bad-vertex",
                format!("vertex {v} out of range 0..{}", c.vertex_count()),
            ));
        }
    }
    Ok(())
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn info(file: &ComplexFile, c: &CubeComplex) -> String {
    let g = GeometryConstants::compute(c);
    let b = pigeonhole_bounds(g.dim as u64, g.delta4, g.grid_d as u64);
    let mut lines = Vec::new();
    if let Some(name) = &file.name {
        lines.push(format!("name={name}"));
    }
    lines.push(format!("vertices={}", c.vertex_count()));
    lines.push(format!("edges={}", c.edges().len()));
    lines.push(format!("hyperplanes={}", c.hyperplane_count()));
    lines.push(format!("diameter={}", c.diameter()));
    lines.push(format!("dim={}", g.dim));
    lines.push(format!("delta4={}", g.delta4));
    lines.push(format!("grid_D={}", g.grid_d));
    lines.push(format!("theta={}", g.theta));
    lines.push(format!("R={}", g.radius));
    lines.push(format!("L={}", b.l));
    lines.push(format!("T={}", abbreviate(&b.t)));
    lines.push(format!("K_log2_upper={}", abbreviate(&b.k_log2_upper)));
    lines.push(match &b.m_bound {
        Some(m) => format!("M_upper={}", abbreviate(m)),
        None => "M_upper=unmaterialised".to_string(),
    });
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

fn stability(args: StabilityArgs) -> Result<ExitCode, Failure> {
    let (file, c) = load_complex(&args.path)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Failure::new("threads", e))?;
    let report = pool.install(|| {
        let g = GeometryConstants::compute(&c);
        let grid_d = args.grid_d.unwrap_or(g.grid_d);
        let radius = args.radius.unwrap_or(5 * (grid_d * g.dim) as u32);
        let mode = match args.mode {
            Mode::All => SweepMode::All,
            Mode::Sample => SweepMode::Sample {
                count: args.count,
                seed: args.seed,
            },
        };
        let mut r = stability_sweep(&c, &g, grid_d, radius, mode);
        r.name = Some(file.name.clone().unwrap_or_else(|| stem(&args.path)));
        r
    });
    let text = report_to_string(&report);
    match &args.out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| io_failure(p, e))?;
            println!(
                "triples={} failures={} max_sym_diff={} max_empirical_k={} max_projection_difference={}",
                report.triples_checked,
                report.failure_count,
                report.max_sym_diff,
                report.max_empirical_k,
                report.max_projection_difference
            );
        }
        None => print!("{text}"),
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn generate(kind: GenKind) -> Result<(), Failure> {
    let (name, c, autos, opts) = match kind {
        GenKind::Tree { n, opts } => {
            if n == 0 {
                return Err(Failure::new(
                    "bad-parameter",
                    "tree needs at least one vertex",
                ));
            }
            (
                format!("tree({n},{})", opts.seed),
                generators::gen_tree(n, opts.seed),
                vec![],
                opts,
            )
        }
        GenKind::Hypercube { d, opts } => {
            if !(1..=12).contains(&d) {
                return Err(Failure::new(
                    "bad-parameter",
                    "hypercube dimension must be in 1..=12",
                ));
            }
            let autos = if d >= 2 {
                vec![hypercube_symmetry(d, 1, (0, 1))]
            } else {
                vec![]
            };
            (
                format!("hypercube({d})"),
                generators::gen_hypercube(d),
                autos,
                opts,
            )
        }
        GenKind::Grid { m, n, opts } => {
            let mut autos = vec![grid_reflection(m, n)];
            if m == n {
                autos.push(grid_rotation(m));
            }
            (
                format!("grid({m},{n})"),
                generators::gen_grid(m, n),
                autos,
                opts,
            )
        }
        GenKind::Staircase { n, opts } => {
            if n == 0 {
                return Err(Failure::new(
                    "bad-parameter",
                    "staircase needs at least one square",
                ));
            }
            let autos = vec![band_flip(n, 1), band_half_turn(n, 1)];
            (
                format!("staircase({n})"),
                generators::gen_staircase(n),
                autos,
                opts,
            )
        }
        GenKind::Band { n, w, opts } => {
            if n == 0 {
                return Err(Failure::new("bad-parameter", "band needs n >= 1"));
            }
            let autos = vec![band_flip(n, w), band_half_turn(n, w)];
            (
                format!("band({n},{w})"),
                generators::gen_band(n, w),
                autos,
                opts,
            )
        }
        GenKind::SageevRandom {
            walls,
            density,
            opts,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::new("bad-parameter", "density must be in [0, 1]"));
            }
            let spec = generators::random_pocset(walls, density, opts.seed);
            let c = generators::sageev_dual(&spec)?;
            (
                format!("sageev({walls},{density},{})", opts.seed),
                c,
                vec![],
                opts,
            )
        }
    };
    let file = ComplexFile::from_complex(&c, Some(name), autos);
    match &opts.out {
        Some(p) => file.save(p)?,
        None => print!("{}", file.to_canonical_string()),
    }
    Ok(())
}
