use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gce_core::complexes::{self, Bidegree, ComplexId, EgcElement};
use gce_core::gtmaps::{self, NamedElement};
use gce_core::homology::{cohomology, Config};
use gce_core::linalg::{is_prime, CoeffMode, DEFAULT_PRIMES};
use gce_core::verify::{run_suite, Suite, VerifyOptions, SUITES};
use gce_core::{canonicalize, parse_terms, Error, GraphError, GraphKind, GraphVector};

#[derive(Parser)]
#[command(name = "gce", version, about = "Graph complexes and their cohomology in small bidegrees")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Directory for cached bases
    #[arg(long, global = true, env = "GCE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Number of worker threads
    #[arg(long, global = true, env = "GCE_JOBS")]
    jobs: Option<usize>,
    /// Ranks modulo these primes, exact on disagreement
    #[arg(long = "mod", global = true, value_delimiter = ',', conflicts_with = "exact")]
    primes: Vec<u64>,
    /// Ranks over the rationals
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true, env = "GCE_MAX_VERTICES")]
    max_vertices: Option<usize>,
    #[arg(long, global = true, env = "GCE_MAX_EDGES")]
    max_edges: Option<usize>,
    #[arg(long, global = true, env = "GCE_MAX_TERMS")]
    max_terms: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a vector
    Canon { input: String },
    /// Differential of a vector in a complex (inferred from the graph kind by default)
    Delta {
        input: String,
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        flags: Option<String>,
    },
    /// Lie bracket of two vectors
    Bracket { a: String, b: String },
    /// Divergence of an undirected vector
    Div { input: String },
    /// The map F from in/out graphs to graphs with an external vertex
    #[command(name = "F")]
    F { input: String },
    /// Inverse of F
    #[command(name = "Finv")]
    Finv { input: String },
    /// Lift of a divergence-free undirected vector to the extended complex
    Psi { input: String },
    /// Cohomology dimensions over a box of bidegrees
    Cohomology {
        complex: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long)]
        flags: Option<String>,
        /// Cells "w,d" whose representatives are printed
        #[arg(long = "reps", allow_hyphen_values = true)]
        reps: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Runs a verification suite, or all of them
    Verify {
        suite: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
    },
}

enum Input {
    Vector(GraphVector),
    Pair(EgcElement),
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn read_text(arg: &str) -> Result<String, Error> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if Path::new(arg).is_file() {
        return Ok(std::fs::read_to_string(arg)?);
    }
    // a bare graph literal
    if arg.contains('|') {
        Ok(arg.to_string())
    } else {
        Ok(format!("1 | {arg}"))
    }
}

fn read_input(arg: &str) -> Result<Input, Error> {
    if let Some(name) = arg.strip_prefix('@') {
        return match gtmaps::named(name) {
            Some(NamedElement::Vector(v)) => Ok(Input::Vector(v)),
            Some(NamedElement::Pair(p)) => Ok(Input::Pair(p)),
            None => Err(parse_error(format!(
                "unknown element @{name}; known: {}",
                gtmaps::NAMES.join(", ")
            ))),
        };
    }
    let text = read_text(arg)?;
    let terms = parse_terms(&text)?;
    let mut kinds: Vec<GraphKind> = terms.iter().map(|(_, g)| g.kind()).collect();
    kinds.sort_by_key(|k| k.to_string());
    kinds.dedup();
    match kinds.as_slice() {
        [] => Ok(Input::Vector(GraphVector::zero(GraphKind::U))),
        [k] => {
            let mut v = GraphVector::zero(*k);
            for (c, g) in terms {
                v.add_term(c, &g)?;
            }
            Ok(Input::Vector(v))
        }
        _ => Ok(Input::Pair(EgcElement::parse(&text)?)),
    }
}

fn vector(input: Input) -> Result<GraphVector, Error> {
    match input {
        Input::Vector(v) => Ok(v),
        Input::Pair(_) => Err(Error::KindMismatch {
            expected: "a single-kind vector".into(),
            found: "a pair".into(),
        }),
    }
}

fn pair(input: Input) -> Result<EgcElement, Error> {
    match input {
        Input::Pair(p) => Ok(p),
        Input::Vector(v) if v.kind() == GraphKind::U => EgcElement::from_gc(v),
        Input::Vector(v) => EgcElement::from_m(v),
    }
}

fn default_complex(kind: GraphKind) -> Result<ComplexId, Error> {
    Ok(match kind {
        GraphKind::U => ComplexId::FGC,
        GraphKind::U_TADPOLE => ComplexId::FGC_TADPOLE,
        GraphKind::D => ComplexId::DFGC,
        GraphKind::M => ComplexId::FGC1,
        GraphKind::X => ComplexId::FBVG1,
        other => {
            return Err(Error::KindMismatch {
                expected: "a graph kind with a differential".into(),
                found: other.to_string(),
            })
        }
    })
}

/// Parses `a` or `a..b`.
fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let bad = || parse_error(format!("bad range {s:?}; expected N or A..B"));
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let x = s.trim().parse().map_err(|_| bad())?;
            Ok((x, x))
        }
    }
}

fn config(g: &Global) -> Result<Config, Error> {
    let mut cfg = Config {
        cache_dir: g.cache_dir.clone(),
        jobs: g.jobs,
        ..Config::default()
    };
    if g.exact {
        cfg.coeff_mode = CoeffMode::Exact;
    } else if !g.primes.is_empty() {
        let mut ps = g.primes.clone();
        ps.sort_unstable();
        ps.dedup();
        if ps.len() != g.primes.len() {
            return Err(parse_error("primes must be distinct"));
        }
        if let Some(p) = ps.iter().find(|&&p| p == 2 || !is_prime(p) || p >= 1 << 32) {
            return Err(parse_error(format!("{p} is not an odd prime below 2^32")));
        }
        cfg.coeff_mode = CoeffMode::Modular(g.primes.clone());
    } else {
        cfg.coeff_mode = CoeffMode::Modular(DEFAULT_PRIMES.to_vec());
    }
    for (cap, value) in [
        (&mut cfg.max_vertices, g.max_vertices),
        (&mut cfg.max_edges, g.max_edges),
        (&mut cfg.max_terms, g.max_terms),
    ] {
        if let Some(v) = value {
            if v == 0 {
                return Err(parse_error("resource caps must be positive"));
            }
            *cap = v;
        }
    }
    if cfg.jobs == Some(0) {
        return Err(parse_error("--jobs must be positive"));
    }
    Ok(cfg)
}

fn complex_with_flags(name: &str, flags: Option<&str>) -> Result<ComplexId, Error> {
    let c: ComplexId = name.parse()?;
    match flags {
        Some(f) => Ok(c.with_flags(complexes::parse_flags(f)?)),
        None => Ok(c),
    }
}

fn print_input(out: &mut impl Write, x: &Input) -> io::Result<()> {
    match x {
        Input::Vector(v) => write!(out, "{v}"),
        Input::Pair(p) => write!(out, "{}", p.to_vector_text()),
    }
}

/// Runs a command; `Ok(false)` means a verification failed.
fn run(cli: Cli, out: &mut impl Write) -> Result<bool, Error> {
    let cfg = config(&cli.global)?;
    let result = match cli.command {
        Command::Canon { input } => {
            let x = read_input(&input)?;
            if let Input::Vector(v) = &x {
                // fail on graphs that vanish or break the kind's rules
                for (g, _) in v.terms() {
                    canonicalize(g)?;
                }
            }
            Some(x)
        }
        Command::Delta { input, complex, flags } => {
            let x = read_input(&input)?;
            let c = match (&complex, &x) {
                (Some(name), _) => complex_with_flags(name, flags.as_deref())?,
                (None, Input::Pair(_)) => complex_with_flags("fEGC", flags.as_deref())?,
                (None, Input::Vector(v)) => {
                    let c = default_complex(v.kind())?;
                    match &flags {
                        Some(f) => c.with_flags(complexes::parse_flags(f)?),
                        None => c,
                    }
                }
            };
            if c == ComplexId::FEGC.with_flags(c.flags) {
                let p = pair(x)?;
                Some(Input::Pair(complexes::egc_differential(&p)?))
            } else {
                Some(Input::Vector(complexes::differential(&c, &vector(x)?)?))
            }
        }
        Command::Bracket { a, b } => {
            let (a, b) = (read_input(&a)?, read_input(&b)?);
            let egc_kind = |k: GraphKind| k == GraphKind::U || k == GraphKind::M;
            let mixed = match (&a, &b) {
                (Input::Vector(x), Input::Vector(y)) => {
                    x.kind() != y.kind() && egc_kind(x.kind()) && egc_kind(y.kind())
                }
                _ => true,
            };
            if mixed {
                Some(Input::Pair(complexes::egc_bracket(&pair(a)?, &pair(b)?)?))
            } else {
                Some(Input::Vector(complexes::bracket(&vector(a)?, &vector(b)?)?))
            }
        }
        Command::Div { input } => Some(Input::Vector(complexes::divergence(&vector(read_input(&input)?)?)?)),
        Command::F { input } => Some(Input::Vector(gtmaps::f_map(&vector(read_input(&input)?)?)?)),
        Command::Finv { input } => Some(Input::Vector(gtmaps::f_inverse(&vector(read_input(&input)?)?)?)),
        Command::Psi { input } => Some(Input::Pair(gtmaps::psi(&vector(read_input(&input)?)?)?)),
        Command::Cohomology {
            complex,
            w,
            d,
            flags,
            reps,
            json,
        } => {
            let c = complex_with_flags(&complex, flags.as_deref())?;
            let (w, d) = (parse_range(&w)?, parse_range(&d)?);
            let reps = reps
                .iter()
                .map(|s| {
                    let (a, b) = s.split_once(',').ok_or_else(|| parse_error(format!("bad cell {s:?}; expected w,d")))?;
                    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| parse_error(format!("bad cell {s:?}")));
                    Ok(Bidegree { w: p(a)?, d: p(b)? })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let report = cfg.install(|| cohomology(&c, w, d, &reps, &cfg))??;
            let methods: Vec<String> = report.methods.iter().map(|m| format!("{m:?}")).collect();
            if !methods.is_empty() {
                eprintln!("rank methods: {}", summarize(&methods));
            }
            if json {
                write!(out, "{}", report.to_json())?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            let skipped = report.cells.iter().filter(|c| c.skipped.is_some()).count();
            if skipped > 0 {
                return Err(Error::ResourceLimit(format!("{skipped} cells skipped")));
            }
            None
        }
        Command::Verify { suite, w, d } => {
            let suites: Vec<Suite> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let opts = VerifyOptions {
                w: w.as_deref().map(parse_range).transpose()?,
                d: d.as_deref().map(parse_range).transpose()?,
            };
            let mut ok = true;
            for s in suites {
                let report = run_suite(s, &cfg, &opts)?;
                write!(out, "{}", report.to_text())?;
                ok &= report.passed();
            }
            return Ok(ok);
        }
    };
    if let Some(x) = result {
        print_input(out, &x)?;
    }
    Ok(true)
}

fn summarize(methods: &[String]) -> String {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for m in methods {
        match counts.iter_mut().find(|(x, _)| x == m) {
            Some((_, c)) => *c += 1,
            None => counts.push((m.clone(), 1)),
        }
    }
    counts.iter().map(|(m, c)| format!("{m} x{c}")).collect::<Vec<_>>().join(", ")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) => 2,
        Error::Graph(GraphError::Syntax { .. } | GraphError::LabelOutOfRange { .. } | GraphError::TooManyVertices(_)) => 2,
        Error::Graph(_) => 3,
        Error::KindMismatch { .. } | Error::NotInternal(_) | Error::NotDivergenceFree(_) | Error::NotInComplex { .. } => 3,
        Error::BadPrime(_) => 3,
        Error::ResourceLimit(_) => 4,
        Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
