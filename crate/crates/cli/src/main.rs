use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fatpoint::constructions::{self, ConstructionError, ConstructionResult};
use fatpoint::fermat::{self, FermatError, GeneratorKind};
use fatpoint::field::primes_with_root_of_unity;
use fatpoint::interpolation::{self, InterpolationError, LinearSystem};
use fatpoint::linalg;
use fatpoint::{make_field, Field, FieldError, FieldHandle, FieldSpec, Poly, PolyError, ProjPoint};

const SCHEMA_VERSION: u32 = 1;
const MAX_DIM: usize = 9;
const MAX_POINTS: u64 = 100_000;
const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "fatpoint",
    version,
    about = "Fermat-type configurations and unexpected hypersurfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Coefficient field.
    #[arg(long, value_enum, env = "FATPOINT_BACKEND", default_value_t = Backend::Cyclotomic, global = true)]
    backend: Backend,
    /// Prime for the modular backend (must be 1 mod n).
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Skip the resource guards.
    #[arg(long, global = true)]
    force: bool,
    /// Write the relevant matrix as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    dump_matrix: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Cyclotomic,
    Modular,
}

#[derive(Subcommand)]
enum Command {
    /// List the points of W_{N,n}.
    Points(ConfigArgs),
    /// Run a verification.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Build an explicit hypersurface and check its claims.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Test general fat points for unexpected hypersurfaces.
    Unexpected(UnexpectedArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    #[arg(long = "N", value_name = "N")]
    dim: usize,
    #[arg(long = "n", value_name = "n")]
    n: u64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Generators span every graded piece of the ideal up to a degree.
    Generation {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Generators vanish on the configuration and are independent.
    Vanishing {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Symbolic identities behind the generators and the quartic Q_R.
    Identities {
        #[arg(long = "N", value_name = "N", default_value_t = 3)]
        dim: usize,
    },
    /// Interpolation matrices of a triple point against the published tables.
    Tables {
        #[arg(long = "N", value_name = "N")]
        dim: usize,
    },
    /// dim V_{N,3} and the conditions imposed by further double points.
    Propositions {
        /// Values of k, with N = 2k + 1.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        k: Vec<usize>,
        #[arg(long, default_value_t = interpolation::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<String>>,
    /// Draw the points from the seed instead.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Curve of degree n + 2 through W_{2,n} with a point of multiplicity 4.
    Qp {
        #[arg(long = "n", value_name = "n")]
        n: u64,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Quartic through W_{3,3} with a triple point.
    Qr {
        #[command(flatten)]
        points: PointArgs,
    },
    /// Quartic through W_{5,3} with a triple and a double point.
    Qrp {
        #[command(flatten)]
        points: PointArgs,
        /// Coordinates of the double point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        second_point: Option<Vec<String>>,
    },
    /// The cone J_{i,j} in P^5.
    Cone {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        points: PointArgs,
    },
}

#[derive(Args)]
struct UnexpectedArgs {
    #[arg(long = "N", value_name = "N")]
    dim: usize,
    /// Omit for an empty base together with --empty.
    #[arg(long = "n", value_name = "n")]
    n: Option<u64>,
    /// Use the empty set as base.
    #[arg(long)]
    empty: bool,
    #[arg(long)]
    degree: u32,
    #[arg(long, value_delimiter = ',')]
    mults: Vec<u32>,
    #[arg(long, default_value_t = interpolation::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}
impl From<FermatError> for CliError {
    fn from(e: FermatError) -> Self {
        CliError::Usage(e.to_string())
    }
}
impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Usage(e.to_string())
    }
}
impl From<InterpolationError> for CliError {
    fn from(e: InterpolationError) -> Self {
        CliError::Usage(e.to_string())
    }
}
impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, Value>,
    seed: Option<u64>,
    backend: Vec<FieldSpec>,
    artifact_version: String,
    timestamp: String,
}

struct Outcome {
    command: String,
    parameters: BTreeMap<String, Value>,
    seed: Option<u64>,
    backend: Vec<FieldSpec>,
    result: Value,
    text: String,
    passed: bool,
    notes: Vec<String>,
    matrix_csv: Option<String>,
    /// Text labels for a passing and a failing run.
    status: (&'static str, &'static str),
}

impl Outcome {
    fn new(command: &str, result: Value, text: String, passed: bool) -> Self {
        Outcome {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            backend: Vec::new(),
            result,
            text,
            passed,
            notes: Vec::new(),
            matrix_csv: None,
            status: ("pass", "FAIL"),
        }
    }

    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable"),
        );
        self
    }
}

struct Ctx {
    backend: Backend,
    prime: Option<u64>,
    force: bool,
    dump: bool,
}

impl Ctx {
    fn field(&self, n: u64) -> Result<FieldHandle, CliError> {
        let spec = match self.backend {
            Backend::Cyclotomic => FieldSpec::cyclotomic(n),
            Backend::Modular => {
                let p = match self.prime {
                    Some(p) => p,
                    None => primes_with_root_of_unity(n, 1)[0],
                };
                FieldSpec::modular(n, p)
            }
        };
        Ok(make_field(spec)?)
    }

    /// Fields for a computation that is repeated on two primes when modular.
    fn fields(&self, n: u64) -> Result<Vec<FieldHandle>, CliError> {
        match (self.backend, self.prime) {
            (Backend::Modular, None) => primes_with_root_of_unity(n, 2)
                .into_iter()
                .map(|p| Ok(make_field(FieldSpec::modular(n, p))?))
                .collect(),
            _ => Ok(vec![self.field(n)?]),
        }
    }

    fn guard(&self, dim: usize, n: u64) -> Result<(), CliError> {
        if dim == 0 {
            return Err(CliError::Usage("N must be at least 1".into()));
        }
        if n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        if self.force {
            return Ok(());
        }
        if dim > MAX_DIM {
            return Err(CliError::Usage(format!(
                "N = {dim} exceeds {MAX_DIM}; pass --force to override"
            )));
        }
        let count = (n as f64).powi(dim as i32);
        if count > MAX_POINTS as f64 {
            return Err(CliError::Usage(format!(
                "n^N = {count} exceeds {MAX_POINTS}; pass --force to override"
            )));
        }
        Ok(())
    }
}

macro_rules! with_field {
    ($handle:expr, |$f:ident| $body:expr) => {
        match $handle {
            FieldHandle::Cyclotomic($f) => $body,
            FieldHandle::Prime($f) => $body,
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        backend: cli.backend,
        prime: cli.prime,
        force: cli.force,
        dump: cli.dump_matrix.is_some(),
    };
    let outcome = match run(&ctx, &cli.command) {
        Ok(o) => o,
        Err(CliError::Usage(msg)) | Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let (Some(path), Some(csv)) = (&cli.dump_matrix, &outcome.matrix_csv) {
        if let Err(e) = std::fs::write(path, csv) {
            eprintln!(
                "error: {}",
                CliError::Io(format!("{}: {e}", path.display())).message()
            );
            return ExitCode::from(2);
        }
    }
    let rendered = match cli.format {
        Format::Text => render_text(&outcome),
        Format::Json => render_json(&outcome),
    };
    print!("{rendered}");
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

fn render_json(o: &Outcome) -> String {
    let manifest = RunManifest {
        command: o.command.clone(),
        parameters: o.parameters.clone(),
        seed: o.seed,
        backend: o.backend.clone(),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "manifest": manifest,
        "passed": o.passed,
        "result": o.result,
        "notes": o.notes,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn render_text(o: &Outcome) -> String {
    let mut s = o.text.clone();
    if let Some(seed) = o.seed {
        let _ = writeln!(s, "{:<18}{seed}", "seed:");
    }
    for b in &o.backend {
        let _ = writeln!(s, "{:<18}{b}", "backend:");
    }
    for n in &o.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(
        s,
        "{:<18}{}",
        "status:",
        if o.passed { o.status.0 } else { o.status.1 }
    );
    s
}

fn run(ctx: &Ctx, command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Points(c) => cmd_points(ctx, c),
        Command::Verify(v) => match v {
            VerifyCommand::Generation { config, max_degree } => {
                cmd_generation(ctx, config, *max_degree)
            }
            VerifyCommand::Vanishing { config } => cmd_vanishing(ctx, config),
            VerifyCommand::Identities { dim } => cmd_identities(ctx, *dim),
            VerifyCommand::Tables { dim } => cmd_tables(ctx, *dim),
            VerifyCommand::Propositions { k, trials, seed } => {
                cmd_propositions(ctx, k, *trials, *seed)
            }
        },
        Command::Construct(c) => cmd_construct(ctx, c),
        Command::Unexpected(u) => cmd_unexpected(ctx, u),
    }
}

fn cmd_points(ctx: &Ctx, c: &ConfigArgs) -> Result<Outcome, CliError> {
    ctx.guard(c.dim, c.n)?;
    with_field!(ctx.field(c.n)?, |f| {
        let config = fermat::build_configuration(c.dim, c.n, &f)?;
        let mut result: Value = serde_json::from_str(&config.to_json(&f)).expect("valid json");
        result["count"] = json!(config.len());
        result["fermat_count"] = json!(config.fermat_points.len());
        result["coordinate_count"] = json!(config.coordinate_points.len());
        let mut text = format!(
            "W_{{{},{}}}: {} points ({} Fermat + {} coordinate)\n",
            c.dim,
            c.n,
            config.len(),
            config.fermat_points.len(),
            config.coordinate_points.len()
        );
        for p in config.points() {
            let _ = writeln!(text, "({})", p.format(&f).join(" : "));
        }
        let mut o = Outcome::new("points", result, text, true)
            .param("N", c.dim)
            .param("n", c.n);
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn cmd_generation(ctx: &Ctx, c: &ConfigArgs, max_degree: Option<u32>) -> Result<Outcome, CliError> {
    ctx.guard(c.dim, c.n)?;
    let d_max = max_degree.unwrap_or(c.n as u32 + 3);
    with_field!(ctx.field(c.n)?, |f| {
        let report = interpolation::verify_generation(&f, c.dim, c.n, d_max)?;
        let mut text = format!(
            "generation of the ideal of W_{{{},{}}} up to degree {d_max}\n",
            c.dim, c.n
        );
        let _ = writeln!(text, "{:>6} {:>8} {:>8}  equal", "degree", "span", "ideal");
        for r in &report.rows {
            let _ = writeln!(
                text,
                "{:>6} {:>8} {:>8}  {}",
                r.degree, r.span_dim, r.kernel_dim, r.equal
            );
        }
        let mut o = Outcome::new(
            "verify generation",
            serde_json::to_value(&report).unwrap(),
            text,
            report.holds,
        )
        .param("N", c.dim)
        .param("n", c.n)
        .param("max_degree", d_max);
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn generator_kind(dim: usize, n: u64) -> Result<GeneratorKind, CliError> {
    match (dim, n) {
        (2, n) if n >= 3 => Ok(GeneratorKind::FermatPlane),
        (d, 3) if d >= 3 => Ok(GeneratorKind::FermatSpace),
        _ => Err(CliError::Usage(format!(
            "no generator set for N = {dim}, n = {n}"
        ))),
    }
}

fn cmd_vanishing(ctx: &Ctx, c: &ConfigArgs) -> Result<Outcome, CliError> {
    ctx.guard(c.dim, c.n)?;
    let kind = generator_kind(c.dim, c.n)?;
    with_field!(ctx.field(c.n)?, |f| {
        let gens = fermat::generators(kind, c.dim, c.n, &f)?;
        let config = fermat::build_configuration(c.dim, c.n, &f)?;
        let check = fermat::verify_vanishing(&gens, &config)?;
        let rank = fermat::coefficient_rank(&f, &gens.gens);
        let passed = check.holds && rank == gens.len();
        let mut text = format!("{} generators, coefficient rank {rank}\n", gens.len());
        let _ = writeln!(
            text,
            "vanish on all {} points: {}",
            config.len(),
            check.holds
        );
        if let Some((g, p)) = check.witness {
            let _ = writeln!(text, "witness: generator {g} at point {p}");
        }
        let result = json!({
            "generators": gens.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "labels": gens.labels,
            "count": gens.len(),
            "rank": rank,
            "points": config.len(),
            "vanishing": check,
        });
        let mut o = Outcome::new("verify vanishing", result, text, passed)
            .param("N", c.dim)
            .param("n", c.n);
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn cmd_identities(ctx: &Ctx, dim: usize) -> Result<Outcome, CliError> {
    ctx.guard(dim, 3)?;
    if dim < 3 {
        return Err(CliError::Usage("identities need N >= 3".into()));
    }
    with_field!(ctx.field(3)?, |f| {
        let x: Vec<_> = (0..3).map(|i| Poly::var(&f, 3, i)).collect();
        let br = |a: &Poly<_>, b: &Poly<_>| a.bracket(b, 3);
        let jacobi = &(&(&x[0].pow(3) * &br(&x[1], &x[2])?) + &(&x[1].pow(3) * &br(&x[2], &x[0])?))
            + &(&x[2].pow(3) * &br(&x[0], &x[1])?);
        let jacobi_ok = jacobi.is_zero();
        let rewrite_ok = fermat::rewrite_identity_check(dim, &f)?;
        let derivs = constructions::qr_derivative_identities(&f)?;
        let shift = constructions::qr_shift_sign(&f)?;
        let passed = jacobi_ok && rewrite_ok && derivs.all() && shift.is_some();
        let mut text = String::new();
        let _ = writeln!(text, "{:<34}{jacobi_ok}", "cube bracket Jacobi identity:");
        let _ = writeln!(
            text,
            "{:<34}{rewrite_ok}",
            format!("generator rewriting (N = {dim}):")
        );
        let _ = writeln!(
            text,
            "{:<34}{}",
            "dQ_R/dx0 closed form:", derivs.first_derivative
        );
        let _ = writeln!(
            text,
            "{:<34}{}",
            "d2Q_R/dx0^2 closed form:", derivs.second_derivative_x0x0
        );
        let _ = writeln!(
            text,
            "{:<34}{}",
            "d2Q_R/dx0dx1 closed form:", derivs.mixed_derivative_x0x1
        );
        let _ = writeln!(
            text,
            "{:<34}{}",
            "first derivatives vanish at R:", derivs.first_derivatives_vanish_at_r
        );
        let _ = writeln!(
            text,
            "{:<34}{}",
            "second derivatives vanish at R:", derivs.second_derivatives_vanish_at_r
        );
        let shift_text = shift.map_or("none".to_string(), |s| s.to_string());
        let _ = writeln!(text, "{:<34}{shift_text}", "cyclic shift sign of Q_R:");
        let result = json!({
            "jacobi": jacobi_ok,
            "rewrite": rewrite_ok,
            "qr_derivatives": derivs,
            "qr_shift_sign": shift,
        });
        let mut o = Outcome::new("verify identities", result, text, passed).param("N", dim);
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn cmd_tables(ctx: &Ctx, dim: usize) -> Result<Outcome, CliError> {
    if dim != 3 && dim != 5 {
        return Err(CliError::Usage("tables exist for N = 3 and N = 5".into()));
    }
    with_field!(ctx.field(3)?, |f| {
        let table = interpolation::symbolic_interpolation_matrix(&f, dim)?;
        let reference = interpolation::reference_table(&f, dim)?;
        let diff = interpolation::compare_tables(&table, &reference);
        let rank = linalg::symbolic_rank(&table.matrix).rank;
        let expected_rank =
            table.column_labels.len() - interpolation::binomial(dim as u64 - 1, 2) as usize;
        let passed = diff.is_empty() && rank == expected_rank;
        let mut text = format!(
            "interpolation matrix of a triple point in P^{dim}: {} x {}\n",
            table.matrix.rows(),
            table.matrix.cols()
        );
        let _ = writeln!(text, "{:<22}{}", "rows differing:", diff.len());
        let _ = writeln!(
            text,
            "{:<22}{rank} (expected {expected_rank})",
            "generic rank:"
        );
        for d in &diff {
            let _ = writeln!(
                text,
                "row {}: computed [{}] reference [{}]",
                d.row,
                d.computed.join(", "),
                d.reference.join(", ")
            );
        }
        let labels: Vec<String> = table
            .column_labels
            .iter()
            .map(|(i, j)| format!("g{i}{j}"))
            .collect();
        let mut o = Outcome::new(
            "verify tables",
            json!({
                "rows": table.matrix.rows(),
                "cols": table.matrix.cols(),
                "columns": labels,
                "derivatives": table.row_labels,
                "rank": rank,
                "expected_rank": expected_rank,
                "diff": diff,
            }),
            text,
            passed,
        )
        .param("N", dim);
        o.matrix_csv = Some(table.matrix.to_csv(|e| e.display_with("a")));
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn cmd_propositions(
    ctx: &Ctx,
    ks: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let max_k = if ctx.force {
        usize::MAX
    } else {
        interpolation::DEFAULT_MAX_K
    };
    for &k in ks {
        ctx.guard(2 * k + 1, 3)?;
    }
    let mut runs = Vec::new();
    let mut backends = Vec::new();
    for handle in ctx.fields(3)? {
        with_field!(handle, |f| {
            backends.push(f.spec());
            runs.push(interpolation::conditions_count_sweep(
                &f, ks, trials, seed, max_k,
            )?);
        })
    }
    let first = &runs[0];
    let agree = runs.iter().all(|r| {
        r.iter().zip(first).all(|(a, b)| {
            (a.triple_dim, &a.increments, a.final_dim) == (b.triple_dim, &b.increments, b.final_dim)
        })
    });
    let passed = agree && runs.iter().flatten().all(|r| r.matches);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:>3} {:>3} {:>7} {:>9} {:>16} {:>6} {:>9} {:>6}",
        "k", "N", "dim V", "expected", "increments", "total", "expected", "final"
    );
    for r in first {
        let inc = r
            .increments
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            text,
            "{:>3} {:>3} {:>7} {:>9} {:>16} {:>6} {:>9} {:>6}",
            r.k,
            r.dim,
            r.triple_dim,
            r.expected_triple_dim,
            inc,
            r.total_conditions,
            r.expected_total,
            r.final_dim
        );
    }
    if runs.len() > 1 {
        let _ = writeln!(text, "{:<18}{agree}", "primes agree:");
    }
    let mut o = Outcome::new(
        "verify propositions",
        json!({ "runs": runs, "primes_agree": agree }),
        text,
        passed,
    )
    .param("k", ks)
    .param("trials", trials);
    o.seed = Some(seed);
    o.backend = backends;
    o.notes
        .push("dimensions are minima over seeded random general points".into());
    Ok(o)
}

fn parse_point<F: Field>(
    f: &F,
    coords: &[String],
    dim: usize,
) -> Result<ProjPoint<F::Elem>, CliError> {
    if coords.len() != dim + 1 {
        return Err(CliError::Usage(format!(
            "expected {} coordinates, got {}",
            dim + 1,
            coords.len()
        )));
    }
    Ok(ProjPoint::parse(f, coords)?)
}

/// Explicit points, or `count` random general points from the seed.
fn resolve_points<F: Field>(
    f: &F,
    args: &PointArgs,
    explicit: &[Option<&Vec<String>>],
    dim: usize,
    n: u64,
) -> Result<Vec<ProjPoint<F::Elem>>, CliError> {
    if args.random {
        if explicit.iter().any(Option::is_some) {
            return Err(CliError::Usage("--random excludes explicit points".into()));
        }
        return Ok(interpolation::random_general_points(
            f,
            dim,
            n,
            explicit.len(),
            args.seed,
        )?);
    }
    explicit
        .iter()
        .map(|p| match p {
            Some(c) => parse_point(f, c, dim),
            None => Err(CliError::Usage(
                "missing point coordinates; pass them or use --random".into(),
            )),
        })
        .collect()
}

fn construction_text<F: Field>(name: &str, res: &ConstructionResult<F>) -> String {
    let f = res.poly.field();
    let mut text = format!("{name} = {}\n", res.poly);
    let _ = writeln!(text, "{:<18}{}", "degree:", res.poly.degree().unwrap_or(0));
    let _ = writeln!(
        text,
        "{:<18}{}/{}",
        "base vanishing:",
        res.base_vanishing,
        res.base_config.len()
    );
    for ((p, c), m) in res
        .claimed_multiplicities
        .iter()
        .zip(&res.measured_multiplicities)
    {
        let _ = writeln!(
            text,
            "multiplicity at ({}): {m} (claimed {c})",
            p.format(f).join(" : ")
        );
    }
    if let Some(s) = res.system_check {
        let _ = writeln!(text, "{:<18}{s}", "spans system:");
    }
    text
}

fn cmd_construct(ctx: &Ctx, c: &ConstructCommand) -> Result<Outcome, CliError> {
    let n = match c {
        ConstructCommand::Qp { n, .. } => *n,
        _ => 3,
    };
    if n < 3 {
        return Err(CliError::Usage(format!("n must be at least 3, got {n}")));
    }
    ctx.guard(2, n)?;
    with_field!(ctx.field(n)?, |f| {
        let (kind, args, res) = match c {
            ConstructCommand::Qp { points, .. } => {
                let pts = resolve_points(&f, points, &[points.point.as_ref()], 2, n)?;
                ("qp", points, constructions::curve_qp(&f, n, &pts[0])?)
            }
            ConstructCommand::Qr { points } => {
                let pts = resolve_points(&f, points, &[points.point.as_ref()], 3, 3)?;
                ("qr", points, constructions::quartic_qr(&f, &pts[0])?)
            }
            ConstructCommand::Qrp {
                points,
                second_point,
            } => {
                let pts = resolve_points(
                    &f,
                    points,
                    &[points.point.as_ref(), second_point.as_ref()],
                    5,
                    3,
                )?;
                (
                    "qrp",
                    points,
                    constructions::quartic_qrp(&f, &pts[0], &pts[1])?,
                )
            }
            ConstructCommand::Cone { i, j, points } => {
                let pts = resolve_points(&f, points, &[points.point.as_ref()], 5, 3)?;
                let cone = constructions::cone_j(&f, *i, *j, &pts[0])?;
                let free = cone.partial_derivative(*i)?.is_zero()
                    && cone.partial_derivative(*j)?.is_zero();
                let mult = constructions::multiplicity_at(&cone, &pts[0])?;
                let base = fermat::build_configuration(5, 3, &f)?;
                let mut vanish = 0;
                for p in base.points() {
                    if f.is_zero(&cone.evaluate(p)?) {
                        vanish += 1;
                    }
                }
                let passed = free && mult >= 3 && vanish == base.len();
                let mut text = format!("J_{{{i},{j}}} = {cone}\n");
                let _ = writeln!(text, "{:<18}{free}", format!("free of x{i}, x{j}:"));
                let _ = writeln!(text, "{:<18}{vanish}/{}", "base vanishing:", base.len());
                let _ = writeln!(
                    text,
                    "multiplicity at ({}): {mult} (claimed 3)",
                    pts[0].format(&f).join(" : ")
                );
                let result = json!({
                    "poly": cone.to_string(),
                    "support": constructions::cone_support(*i, *j)?,
                    "independent_of_vertex_variables": free,
                    "base_size": base.len(),
                    "base_vanishing": vanish,
                    "multiplicities": [{ "point": pts[0].format(&f), "claimed": 3, "measured": mult }],
                    "verified": passed,
                });
                let mut o = Outcome::new("construct cone", result, text, passed)
                    .param("i", i)
                    .param("j", j);
                if points.random {
                    o.seed = Some(points.seed);
                }
                o.backend.push(f.spec());
                return Ok(o);
            }
        };
        let name = match kind {
            "qp" => "Q_P",
            "qr" => "Q_R",
            _ => "Q_{R,P}",
        };
        let text = construction_text(name, &res);
        let mut o = Outcome::new(
            &format!("construct {kind}"),
            res.to_json(),
            text,
            res.verified,
        )
        .param("n", n);
        if args.random {
            o.seed = Some(args.seed);
        }
        o.backend.push(f.spec());
        Ok(o)
    })
}

fn cmd_unexpected(ctx: &Ctx, u: &UnexpectedArgs) -> Result<Outcome, CliError> {
    if u.mults.is_empty() {
        return Err(CliError::Usage(
            "--mults needs at least one multiplicity".into(),
        ));
    }
    let n = match (u.empty, u.n) {
        (true, None) => 1,
        (true, Some(_)) => return Err(CliError::Usage("--empty excludes --n".into())),
        (false, Some(n)) => n,
        (false, None) => return Err(CliError::Usage("pass --n or --empty".into())),
    };
    ctx.guard(u.dim, n)?;
    with_field!(ctx.field(n)?, |f| {
        let config = if u.empty {
            fermat::Configuration::empty(u.dim)
        } else {
            fermat::build_configuration(u.dim, n, &f)?
        };
        let report = interpolation::unexpectedness_report(
            &f, &config, u.degree, &u.mults, u.trials, u.seed,
        )?;
        let base = if u.empty {
            format!("empty set in P^{}", u.dim)
        } else {
            format!("W_{{{},{n}}}", u.dim)
        };
        let mut text = format!(
            "base: {base}, degree {}, multiplicities {:?}\n",
            u.degree, u.mults
        );
        let _ = writeln!(text, "{:<22}{}", "base dimension:", report.base_dim);
        let _ = writeln!(
            text,
            "{:<22}{}",
            "conditions expected:", report.conditions_expected
        );
        let _ = writeln!(text, "{:<22}{}", "virtual dimension:", report.virtual_dim);
        let _ = writeln!(text, "{:<22}{}", "expected dimension:", report.expected_dim);
        let _ = writeln!(text, "{:<22}{}", "actual dimension:", report.actual_dim);
        let _ = writeln!(text, "{:<22}{:?}", "rank per point:", report.rank_per_point);
        let mut o = Outcome::new(
            "unexpected",
            serde_json::to_value(&report).unwrap(),
            text,
            report.verdict,
        )
        .param("N", u.dim)
        .param("n", if u.empty { None } else { Some(n) })
        .param("empty", u.empty)
        .param("degree", u.degree)
        .param("mults", &u.mults)
        .param("trials", u.trials);
        o.seed = Some(u.seed);
        o.status = ("unexpected", "not unexpected");
        o.backend.push(f.spec());
        o.notes.push("base_dim is the computed dimension of the degree piece through the base, not the naive count".into());
        if ctx.dump {
            // Conditions matrix of the first trial.
            let seed0 = interpolation::trial_seeds(u.seed, 1)[0];
            let pts = interpolation::sample_fat_points(
                &f,
                &config,
                &u.mults,
                seed0,
                interpolation::DEFAULT_BOUND,
            )?;
            let m = LinearSystem::through(&f, &config, u.degree).conditions_matrix(&pts)?;
            o.matrix_csv = Some(m.to_csv(|e| f.format(e)));
        }
        Ok(o)
    })
}
