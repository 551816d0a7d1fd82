use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gorulab::eulerbernoulli::{self, IdentitySuite};
use gorulab::exactnum::Rational;
use gorulab::fgraded::{self, Family, RelationCheck};
use gorulab::molien::{self, GroupSpec, ScreenVerdict};
use gorulab::powersum::{self, SymmetricTriangle};
use gorulab::series::LaurentAtOne;
use gorulab::triangles::{self, CoefficientTriangle, Presentation};
use gorulab::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "gorulab", version, about = "Exact Laurent-coefficient tests for Gorenstein Hilbert series")]
struct Cli {
    /// Series truncation order
    #[arg(long, global = true, env = "GORULAB_TRUNCATION", default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    truncation: u32,
    /// Largest relation index evaluated
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..))]
    m_max: i64,
    /// Abort group closure beyond this many elements
    #[arg(long, global = true, default_value_t = molien::DEFAULT_MAX_ORDER, value_parser = positive_usize)]
    max_order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the relation families on a γ vector
    Check {
        file: PathBuf,
        /// Degree, or `auto` for 2γ_1/γ_0
        #[arg(long, default_value = "auto")]
        r: DegreeArg,
    },
    /// Molien series of a finite group, with an optional Gorenstein screen
    Molien {
        file: PathBuf,
        /// Number of Laurent coefficients beyond γ_0 (defaults to the truncation)
        #[arg(long = "K", short = 'K')]
        k: Option<usize>,
        #[arg(long)]
        screen: bool,
    },
    /// Complete a γ vector from its even or odd part
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        /// γ_{-r} for even r <= 0
        #[arg(long, allow_hyphen_values = true)]
        free_gamma: Option<Rational>,
    },
    /// Verify an identity family on a grid
    Identity(IdentityArgs),
    /// Coefficient triangles
    Triangle(TriangleArgs),
    /// Tables of the Euler-polynomial coefficients
    Coeffs {
        #[arg(long, value_enum)]
        table: CoeffTable,
        #[arg(long, default_value_t = 8)]
        n_max: i64,
        /// Degree for the `unified` and `bracket-r` tables
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        r: i64,
    },
}

#[derive(Clone, Debug)]
enum DegreeArg {
    Auto,
    Fixed(i64),
}

impl std::str::FromStr for DegreeArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(DegreeArg::Auto);
        }
        s.parse().map(DegreeArg::Fixed).map_err(|_| format!("expected `auto` or an integer, got `{s}`"))
    }
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got `{s}`")),
        Ok(v) => Ok(v),
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Direction {
    OddFromEven,
    EvenFromOdd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Suite {
    Lemma45,
    Moll,
    Cubic,
    Quadratic,
    Gould,
    ProofSupport,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 8)]
    n_max: i64,
    /// Upper bound for ℓ in the Bernoulli convolution
    #[arg(long, default_value_t = 25)]
    l_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -6)]
    r_min: i64,
    #[arg(long, default_value_t = 6)]
    r_max: i64,
    /// Upper bound for the second index (proof-support and gould)
    #[arg(long, default_value_t = 6)]
    j_max: i64,
    /// Triangle for the gould suite: pascal, lucas, random:SEED or a JSON file
    #[arg(long, default_value = "pascal")]
    triangle: String,
}

#[derive(Args, Debug)]
struct TriangleArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["lucas", "pascal_k"])]
    r: Option<i64>,
    #[arg(long, default_value_t = 6)]
    rows: usize,
    #[arg(long, default_value = "raw")]
    presentation: Presentation,
    /// Lucas triangle instead of a coefficient triangle
    #[arg(long)]
    lucas: bool,
    /// Rescaled binomial triangle of order K
    #[arg(long, value_name = "K")]
    pascal_k: Option<i64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CoeffTable {
    Bracket,
    Brace,
    Unified,
    BracketR,
}

/// A γ vector: a bare array, `{"gammas": [...]}` or a Laurent expansion.
#[derive(Deserialize)]
#[serde(untagged)]
enum GammaFile {
    Bare(Vec<Rational>),
    Laurent(LaurentAtOne),
    Wrapped { gammas: Vec<Rational> },
}

enum Outcome {
    Pass,
    Negative,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_gammas(path: &Path) -> Result<Vec<Rational>> {
    Ok(match read_json::<GammaFile>(path)? {
        GammaFile::Bare(g) | GammaFile::Wrapped { gammas: g } => g,
        GammaFile::Laurent(l) => l.gammas,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn gamma_lines(out: &mut String, gammas: &[Rational]) {
    for (i, g) in gammas.iter().enumerate() {
        let _ = writeln!(out, "γ_{i} = {g}");
    }
}

#[derive(Serialize)]
struct Violation<'a> {
    family: Family,
    m: i64,
    residual: &'a Rational,
    certificate: String,
}

fn cmd_check(cli: &Cli, file: &Path, r: &DegreeArg) -> Result<(String, Outcome)> {
    let gammas = read_gammas(file)?;
    let r = match r {
        DegreeArg::Fixed(r) => *r,
        DegreeArg::Auto => {
            let (g0, g1) = match gammas.as_slice() {
                [g0, g1, ..] => (g0, g1),
                _ => return Err(Error::InsufficientCoefficients("--r auto needs γ_0 and γ_1".into())),
            };
            let d = fgraded::degree_from_gammas(g0, g1)?;
            d.to_i64()
                .filter(|_| d.is_integer())
                .ok_or_else(|| Error::InvalidInput(format!("2γ_1/γ_0 = {d} is not an integer")))?
        }
    };
    let check = fgraded::check_relations(&gammas, r, cli.m_max)?;
    let violation = check.first_violation().map(|(family, x)| Violation {
        family,
        m: x.m,
        residual: &x.reduced_residual,
        certificate: x.certificate(),
    });
    let outcome = if check.is_consistent() { Outcome::Pass } else { Outcome::Negative };
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "r": r,
            "consistent": check.is_consistent(),
            "violation": violation,
            "check": check,
        })),
        Format::Text => {
            let mut s = format!("r = {r}\n");
            check_text(&mut s, &check);
            s
        }
    };
    Ok((text, outcome))
}

fn check_text(s: &mut String, check: &RelationCheck) {
    for rep in &check.reports {
        let evaluated = rep.residuals.len();
        let _ = write!(s, "{}: {evaluated} evaluated, {} skipped, ", rep.family.tag(), rep.skipped.len());
        match rep.residuals.iter().find(|x| !x.residual.is_zero()) {
            Some(x) => {
                let _ = writeln!(s, "violated at m = {}: {}", x.m, x.certificate());
            }
            None => s.push_str("consistent\n"),
        }
    }
    s.push_str(if check.is_consistent() { "verdict: consistent\n" } else { "verdict: violated\n" });
}

fn cmd_molien(cli: &Cli, file: &Path, k: Option<usize>, screen: bool) -> Result<(String, Outcome)> {
    let spec: GroupSpec = read_json(file)?;
    let group = spec.closure(cli.max_order)?;
    let k = k.unwrap_or(cli.truncation as usize);
    let series = molien::molien_series(&group, k)?;
    let report = if screen { Some(molien::gorenstein_screen(&group, k, cli.m_max)?) } else { None };
    let outcome = match report.as_ref().map(|r| &r.verdict) {
        Some(ScreenVerdict::NotGorenstein { .. }) => Outcome::Negative,
        _ => Outcome::Pass,
    };
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "group": group.summary(),
            "hilbert": series.hilbert,
            "laurent": series.laurent,
            "screen": report,
        })),
        Format::Text => {
            let sizes = group.strata_sizes().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let mut s = format!("order: {}\ndim: {}\nstrata p=0..{}: {sizes}\n", group.order(), group.dim(), group.dim());
            let _ = writeln!(s, "hilbert: {}", series.hilbert);
            let _ = writeln!(s, "pole order: {}", series.laurent.pole_order);
            gamma_lines(&mut s, &series.laurent.gammas);
            if let Some(rep) = &report {
                let _ = writeln!(s, "pseudoreflections: {}", rep.pseudoreflections);
                match &rep.verdict {
                    ScreenVerdict::NotGorenstein { family, m, certificate, .. } => {
                        let _ = writeln!(s, "verdict: not Gorenstein ({} m = {m}): {certificate}", family.tag());
                    }
                    ScreenVerdict::ConsistentUpTo { m } => {
                        let _ = writeln!(s, "verdict: consistent up to m = {m}");
                    }
                }
            }
            s
        }
    };
    Ok((text, outcome))
}

fn cmd_transform(
    cli: &Cli,
    file: &Path,
    direction: Direction,
    r: i64,
    free: Option<&Rational>,
) -> Result<(String, Outcome)> {
    let part = read_gammas(file)?;
    let n_max = cli.truncation as usize / 2;
    let (even, odd) = match direction {
        Direction::OddFromEven => {
            let odd = fgraded::odd_from_even(&part, r, n_max)?;
            (part[..=n_max].to_vec(), odd)
        }
        Direction::EvenFromOdd => {
            let even = fgraded::even_from_odd(&part, r, n_max, free)?;
            (even, part[..=n_max].to_vec())
        }
    };
    let full: Vec<Rational> = even.into_iter().zip(odd).flat_map(|(e, o)| [e, o]).collect();
    let text = match cli.format {
        Format::Json => to_json(&json!({ "r": r, "gammas": full })),
        Format::Text => {
            let mut s = String::new();
            gamma_lines(&mut s, &full);
            s
        }
    };
    Ok((text, Outcome::Pass))
}

fn load_triangle(spec: &str, n_max: usize) -> Result<SymmetricTriangle> {
    match spec {
        "pascal" => Ok(SymmetricTriangle::pascal(n_max)),
        "lucas" => Ok(SymmetricTriangle::lucas(n_max)),
        _ => match spec.strip_prefix("random:") {
            Some(seed) => {
                let seed = seed.parse().map_err(|_| Error::InvalidInput(format!("bad seed `{seed}`")))?;
                Ok(SymmetricTriangle::random(n_max, seed))
            }
            None => read_json(Path::new(spec)),
        },
    }
}

fn cmd_identity(cli: &Cli, a: &IdentityArgs) -> Result<(String, Outcome)> {
    let (value, passed, summary) = match a.suite {
        Suite::Gould => {
            let n_max = usize::try_from(a.n_max).map_err(|_| Error::InvalidInput("n_max must be nonnegative".into()))?;
            let m_max = usize::try_from(a.j_max).map_err(|_| Error::InvalidInput("j_max must be nonnegative".into()))?;
            let t = load_triangle(&a.triangle, n_max)?;
            let rep = powersum::verify_gould(&t, n_max.min(t.n_max()), m_max)?;
            let summary = format!("gould: {} checked, {} nonzero", rep.checked, rep.nonzero.len());
            (serde_json::to_value(&rep).expect("serializable"), rep.passed(), summary)
        }
        s => {
            let suite = match s {
                Suite::Lemma45 => IdentitySuite::Lemma45 { n_max: a.n_max },
                Suite::Moll => IdentitySuite::Moll { l_max: a.l_max },
                Suite::Cubic => IdentitySuite::Cubic { n_max: a.n_max, r_min: a.r_min, r_max: a.r_max },
                Suite::Quadratic => IdentitySuite::Quadratic { n_max: a.n_max, r_min: a.r_min, r_max: a.r_max },
                Suite::ProofSupport => IdentitySuite::ProofSupport { n_max: a.n_max, m_max: a.j_max },
                Suite::Gould => unreachable!(),
            };
            let rep = eulerbernoulli::verify_identities(&suite);
            let summary = format!("{}: {} checked, {} nonzero", rep.suite, rep.checked, rep.nonzero.len());
            (serde_json::to_value(&rep).expect("serializable"), rep.passed(), summary)
        }
    };
    let text = match cli.format {
        Format::Json => to_json(&value),
        Format::Text => format!("{summary}\n{}\n", if passed { "pass" } else { "fail" }),
    };
    Ok((text, if passed { Outcome::Pass } else { Outcome::Negative }))
}

fn cmd_triangle(cli: &Cli, a: &TriangleArgs) -> Result<(String, Outcome)> {
    let tri: CoefficientTriangle = if a.lucas {
        triangles::lucas_triangle(a.rows)
    } else if let Some(k) = a.pascal_k {
        triangles::emit_pascal_rescaled(k)?
    } else {
        let r = a.r.ok_or_else(|| Error::InvalidInput("one of --r, --lucas, --pascal-k is required".into()))?;
        triangles::emit_triangle(r, a.rows, a.presentation)?
    };
    let text = match cli.format {
        Format::Json => to_json(&tri),
        Format::Text => tri.to_string(),
    };
    Ok((text, Outcome::Pass))
}

#[derive(Serialize)]
struct CoeffRow {
    n: i64,
    values: Vec<Rational>,
}

fn cmd_coeffs(cli: &Cli, table: CoeffTable, n_max: i64, r: i64) -> Result<(String, Outcome)> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let values = (0..=n)
            .map(|i| match table {
                CoeffTable::Bracket => Ok(eulerbernoulli::bracket(n, i)),
                CoeffTable::Brace => Ok(eulerbernoulli::brace(n, i)),
                CoeffTable::Unified => eulerbernoulli::unified_coeff(n, i, r),
                CoeffTable::BracketR => eulerbernoulli::bracket_r(n, i, r),
            })
            .collect::<Result<Vec<_>>>();
        match values {
            Ok(values) => rows.push(CoeffRow { n, values }),
            Err(Error::ForbiddenIndex { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let text = match cli.format {
        Format::Json => to_json(&rows),
        Format::Text => {
            let w = rows.iter().flat_map(|r| r.values.iter().map(|v| v.to_string().len())).max().unwrap_or(1);
            let lw = n_max.to_string().len();
            let mut s = String::new();
            for row in &rows {
                let _ = write!(s, "{:>lw$}:", row.n);
                for v in &row.values {
                    let _ = write!(s, " {:>w$}", v.to_string());
                }
                s.push('\n');
            }
            s
        }
    };
    Ok((text, Outcome::Pass))
}

fn run(cli: &Cli) -> Result<(String, Outcome)> {
    match &cli.command {
        Command::Check { file, r } => cmd_check(cli, file, r),
        Command::Molien { file, k, screen } => cmd_molien(cli, file, *k, *screen),
        Command::Transform { file, direction, r, free_gamma } => {
            cmd_transform(cli, file, *direction, *r, free_gamma.as_ref())
        }
        Command::Identity(a) => cmd_identity(cli, a),
        Command::Triangle(a) => cmd_triangle(cli, a),
        Command::Coeffs { table, n_max, r } => cmd_coeffs(cli, *table, *n_max, *r),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, outcome)) => {
            print!("{text}");
            match outcome {
                Outcome::Pass => ExitCode::SUCCESS,
                Outcome::Negative => ExitCode::from(1),
            }
        }
        Err(e) => {
            let extra = match &e {
                Error::ConstraintViolation { index, .. } => json!({ "index": index }),
                _ => json!({}),
            };
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string(), "detail": extra }));
            ExitCode::from(if matches!(e, Error::ConstraintViolation { .. }) { 1 } else { 2 })
        }
    }
}
