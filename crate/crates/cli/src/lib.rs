//! Command-line front end: every pipeline of `z2genus-core` as a subcommand
//! that reads plain-text or JSON inputs and writes a JSON report.
//!
//! Exit status: 0 when the run succeeds and every checked invariant holds,
//! 1 when an invariant derived from a theorem fails, 2 on input errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use z2genus_core::bounds::{
    amalgamation_check, claim_rank_inequality_check, kleitman_check, parity_sweep, thm1_lower_bounds,
    upper_bound_search, AmalgamationInput, KmnLabeling, SearchConfig,
};
use z2genus_core::drawing::{CrosscapDrawing, Graph, SpanningForest};
use z2genus_core::gf2::gram_factor;
use z2genus_core::minrank::{
    brute_force_minrank, minrank_corner, minrank_three_upper, minrank_two_diag, CompletionResult, Layout,
    PartialSymmetricMatrix,
};
use z2genus_core::tournament::{
    decaen_check, generate_instance, random_even_kmn_drawing, verify_block_bound, BlockBoundReport,
};
use z2genus_core::{Error, Gf2Matrix};

pub const TOOL: &str = "z2genus";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "z2genus", version, about = "GF(2) rank tools for Z2-genus bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Drawings scored by `search-upper`.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub budget: usize,

    /// Beam width of `search-upper`.
    #[arg(long, global = true, default_value_t = 64)]
    pub beam: usize,

    /// Largest number of free bits enumerated by the exhaustive oracle.
    #[arg(long = "oracle-bits", global = true, default_value_t = 24)]
    pub oracle_bits: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Rank of a matrix file.
    Rank { input: PathBuf },
    /// Factor a symmetric matrix as BᵀB.
    Factor { input: PathBuf },
    /// Minimum-rank completion of a partial symmetric matrix.
    Minrank {
        input: PathBuf,
        /// Only alternate completions (oracle only).
        #[arg(long)]
        alternate: bool,
    },
    /// De Caen bound for a tournament file, or block bounds for generated instances.
    TournamentVerify {
        input: Option<PathBuf>,
        /// Block count and block size of generated instances.
        #[arg(long, num_args = 2, value_names = ["M", "N"], default_values_t = [3, 4])]
        blocks: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Lower bounds for K_{m,n} next to the genus values.
    KmnBounds { m: usize, n: usize },
    /// `kmn-bounds` for all 3 ≤ m ≤ n ≤ max.
    KmnSweep {
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
    /// Kleitman invariant of a K_{3,3} drawing file, or of random even drawings.
    Kleitman {
        input: Option<PathBuf>,
        /// Zero the star edges at vertices 0 and 3 before checking.
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Search for an upper-bound certificate on a graph file.
    SearchUpper {
        input: PathBuf,
        /// Bound g₀ with alternate witnesses instead of eg₀.
        #[arg(long)]
        alternate: bool,
    },
    /// Amalgamation inequalities for interval bounds given as JSON.
    AmalgamCheck { input: PathBuf },
    /// Rank inequality for a matrix partitioned into classes E1, F1, F2, E2.
    ClaimCheck {
        input: PathBuf,
        #[arg(long, num_args = 4, value_names = ["E1", "F1", "F2", "E2"], required = true)]
        sizes: Vec<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rank { .. } => "rank",
            Command::Factor { .. } => "factor",
            Command::Minrank { .. } => "minrank",
            Command::TournamentVerify { .. } => "tournament-verify",
            Command::KmnBounds { .. } => "kmn-bounds",
            Command::KmnSweep { .. } => "kmn-sweep",
            Command::Kleitman { .. } => "kleitman",
            Command::SearchUpper { .. } => "search-upper",
            Command::AmalgamCheck { .. } => "amalgam-check",
            Command::ClaimCheck { .. } => "claim-check",
        }
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    /// Every invariant checked during the run held.
    pub holds: bool,
    /// Pre-rendered rows for `--format table`; otherwise the report's
    /// top-level fields are listed.
    pub table: Option<String>,
}

impl Outcome {
    fn new(report: impl Serialize, holds: bool) -> Result<Self, InputError> {
        Ok(Self {
            report: to_value(report)?,
            holds,
            table: None,
        })
    }
}

/// Anything that makes the inputs unusable; maps to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

fn to_value(v: impl Serialize) -> Result<Value, InputError> {
    serde_json::to_value(v).map_err(|e| InputError(format!("cannot serialize report: {e}")))
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_text<T: std::str::FromStr<Err = Error>>(path: &Path) -> Result<T, InputError> {
    read(path)?
        .parse()
        .map_err(|e: Error| InputError(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        InputError(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::Rank { input } => rank(input),
        Command::Factor { input } => factor(input),
        Command::Minrank { input, alternate } => minrank(input, *alternate, cli.oracle_bits),
        Command::TournamentVerify { input, blocks, count } => match input {
            Some(path) => decaen_file(path),
            None => block_instances(blocks[0], blocks[1], *count, cli.seed),
        },
        Command::KmnBounds { m, n } => {
            let r = thm1_lower_bounds(*m, *n)?;
            let holds = r.consistent();
            Outcome::new(r, holds)
        }
        Command::KmnSweep { max } => kmn_sweep(*max),
        Command::Kleitman { input, normalize, count } => match input {
            Some(path) => kleitman_file(path, *normalize),
            None => kleitman_batch(*count, cli.seed),
        },
        Command::SearchUpper { input, alternate } => {
            let g: Graph = parse_text(input)?;
            let config = SearchConfig {
                alternate: *alternate,
                budget: cli.budget,
                beam: cli.beam,
                seed: cli.seed,
                ..SearchConfig::default()
            };
            let cert = upper_bound_search(&g, &config)?;
            let verification_error = cert.verify().err().map(|e| e.to_string());
            let verified = verification_error.is_none();
            Outcome::new(
                json!({ "certificate": cert, "verified": verified, "verification_error": verification_error }),
                verified,
            )
        }
        Command::AmalgamCheck { input } => {
            let data: AmalgamationInput = parse_json(input)?;
            let r = amalgamation_check(data)?;
            let holds = !r.refuted();
            Outcome::new(r, holds)
        }
        Command::ClaimCheck { input, sizes } => {
            let b: Gf2Matrix = parse_text(input)?;
            let r = claim_rank_inequality_check(&b, [sizes[0], sizes[1], sizes[2], sizes[3]])?;
            Outcome::new(r, r.holds)
        }
    }
}

fn rank(input: &Path) -> Result<Outcome, InputError> {
    let a: Gf2Matrix = parse_text(input)?;
    let symmetric = a.is_symmetric();
    let alternate = if symmetric { Some(a.is_alternate()?) } else { None };
    Outcome::new(
        json!({ "rows": a.rows(), "cols": a.cols(), "rank": a.rank(),
                "symmetric": symmetric, "alternate": alternate }),
        true,
    )
}

fn factor(input: &Path) -> Result<Outcome, InputError> {
    let a: Gf2Matrix = parse_text(input)?;
    let f = gram_factor(&a)?;
    let alternate = a.is_alternate()?;
    let product_matches = f.factor.transpose().mul(&f.factor)? == a;
    let extra = f.factor_rank as i64 - f.input_rank as i64;
    let rank_ok = extra == 0 || (extra == 1 && alternate && f.input_rank > 0);
    Outcome::new(
        json!({ "alternate": alternate, "factor": f, "product_matches": product_matches,
                "rank_relation_holds": rank_ok }),
        product_matches && rank_ok,
    )
}

fn minrank(input: &Path, alternate: bool, oracle_bits: usize) -> Result<Outcome, InputError> {
    let p: PartialSymmetricMatrix = parse_text(input)?;
    let layout = p.layout();
    let formula: Option<CompletionResult> = if alternate {
        None
    } else {
        match layout {
            Layout::Corner => Some(minrank_corner(p.known(0, 0), p.known(0, 1))?),
            Layout::TwoDiag => Some(minrank_two_diag(p.known(0, 1))?),
            Layout::ThreeUpper => Some(minrank_three_upper(
                p.known(0, 0),
                p.known(0, 1),
                p.known(0, 2),
                p.known(1, 2),
            )?),
            Layout::Known | Layout::Other => None,
        }
    };
    let (oracle, oracle_skipped) = match brute_force_minrank(&p, alternate, oracle_bits) {
        Ok(r) => (Some(r), None),
        Err(e @ (Error::Capacity { .. } | Error::Precondition(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let mut holds = true;
    if let Some(f) = &formula {
        holds &= f.achieved_rank <= f.value;
        if let Some(o) = &oracle {
            holds &= match layout {
                Layout::ThreeUpper => o.value <= f.value,
                _ => o.value == f.value && f.achieved_rank == f.value,
            };
        }
    }
    Outcome::new(
        json!({ "layout": layout, "dim": p.dim(), "formula": formula, "oracle": oracle,
                "oracle_skipped": oracle_skipped, "consistent": holds }),
        holds,
    )
}

fn decaen_file(path: &Path) -> Result<Outcome, InputError> {
    let a: Gf2Matrix = parse_text(path)?;
    let r = decaen_check(&a)?;
    Outcome::new(r, r.holds)
}

#[derive(Serialize)]
struct BlockBatch {
    m: usize,
    n: usize,
    count: usize,
    violations: usize,
    proof_tail_violations: usize,
    separating: usize,
    /// Instances with random diagonal blocks that still meet the bound.
    random_diagonal_holds: usize,
    records: Vec<BlockBoundReport>,
}

fn block_instances(m: usize, n: usize, count: usize, seed: u64) -> Result<Outcome, InputError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(count);
    let mut random_diagonal_holds = 0;
    for _ in 0..count {
        let inst = generate_instance(m, n, rng.gen())?;
        records.push(verify_block_bound(&inst)?);
        random_diagonal_holds += verify_block_bound(&inst.with_random_diagonal_blocks(rng.gen()))?.holds as usize;
    }
    let violations = records.iter().filter(|r| !r.holds).count();
    let batch = BlockBatch {
        m,
        n,
        count,
        violations,
        proof_tail_violations: records.iter().filter(|r| !r.holds_proof_tail).count(),
        separating: records.iter().filter(|r| r.separates).count(),
        random_diagonal_holds,
        records,
    };
    Outcome::new(batch, violations == 0)
}

fn kmn_sweep(max: usize) -> Result<Outcome, InputError> {
    if max < 3 {
        return Err(InputError(format!("--max must be at least 3, got {max}")));
    }
    let mut rows = Vec::new();
    let mut holds = true;
    let mut table = String::from("m\tn\tg_ringel\tg0_lower\teg_ringel\teg0_lower\tratio\n");
    for m in 3..=max {
        for n in m..=max {
            let r = thm1_lower_bounds(m, n)?;
            holds &= r.consistent();
            if m == n {
                holds &= r.ratio >= Ratio::new(n as i64 - 6, n as i64);
            }
            let _ = writeln!(
                table,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.m, r.n, r.g_ringel, r.g0_lower, r.eg_ringel, r.eg0_lower, r.ratio
            );
            rows.push(r);
        }
    }
    let mut out = Outcome::new(json!({ "max": max, "rows": rows }), holds)?;
    out.table = Some(table);
    Ok(out)
}

fn k33_star(g: &Graph) -> Result<SpanningForest, InputError> {
    let mut star: Vec<usize> = (3..6).filter_map(|v| g.edge_index(0, v)).collect();
    star.extend((1..3).filter_map(|u| g.edge_index(u, 3)));
    Ok(SpanningForest::from_edges(g, &star)?)
}

fn kleitman_file(path: &Path, normalize: bool) -> Result<Outcome, InputError> {
    let mut d: CrosscapDrawing = parse_json(path)?;
    if normalize {
        d = d.normalize_forest(&k33_star(d.graph())?)?;
    }
    let value = kleitman_check(&d, &KmnLabeling::standard(3, 3))?;
    Outcome::new(json!({ "value": value as u8 }), value)
}

fn kleitman_batch(count: usize, seed: u64) -> Result<Outcome, InputError> {
    let sweep = parity_sweep(&Graph::complete_bipartite(3, 3), 24)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ones = 0;
    for _ in 0..count {
        let d = random_even_kmn_drawing(3, 3, &mut rng)?;
        ones += kleitman_check(&d, &KmnLabeling::standard(3, 3))? as usize;
    }
    let holds = sweep.all_odd() && ones == count;
    Outcome::new(json!({ "sweep": sweep, "drawings": count, "value_one": ones }), holds)
}

/// Report wrapped with the tool version and the configuration.
pub fn envelope(cli: &Cli, outcome: &Outcome) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "config": cli,
        "holds": outcome.holds,
        "report": outcome.report,
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(cli: &Cli, outcome: &Outcome) -> String {
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(cli, outcome)).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = format!("{TOOL} {VERSION} {}\n", cli.command.name());
            match &outcome.table {
                Some(t) => s.push_str(t),
                None => {
                    if let Value::Object(map) = &outcome.report {
                        for (k, v) in map {
                            let _ = writeln!(s, "{k}\t{}", scalar(v));
                        }
                    } else {
                        let _ = writeln!(s, "{}", scalar(&outcome.report));
                    }
                }
            }
            let _ = writeln!(s, "holds\t{}", outcome.holds);
            s
        }
    }
}

/// Parses arguments, runs, writes the report and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = render(&cli, &outcome);
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    if outcome.holds {
        0
    } else {
        eprintln!("invariant failed: see report");
        1
    }
}
