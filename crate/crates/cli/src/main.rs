//! `lcolor`: verify, construct, search and classify L(r)-colorings.
//!
//! Exit codes: 0 success (for `verify`, an L(r)-coloring); 1 a violation,
//! or a construction that fails its own check; 2 bad input or parameters;
//! 3 a search budget ran out or an output file could not be written.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lcolor::constructions::{extend_full, lower_string};
use lcolor::engine::{classify_all, families, ClassificationTable, Rule, Semantics, Summary};
use lcolor::search::{compute_g, SearchConfig};
use lcolor::{find_violation, parse_coloring_text, to_coloring_text, Coloring};

#[derive(Parser)]
#[command(name = "lcolor", version, about = "Colorings of [1, N] avoiding monochromatic m-sets X < Y with 2(x_m - x_1) <= y_m - x_1")]
struct Cli {
    /// Omit the leading timestamp line.
    #[arg(long, global = true)]
    no_meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a coloring; prints a violation certificate if there is one.
    Verify {
        /// Coloring file (RLE with optional `@start [r=R]` header, or JSON).
        #[arg(long, conflicts_with = "rle")]
        file: Option<PathBuf>,
        /// Inline RLE tokens, e.g. `1^3 2^2`.
        #[arg(required_unless_present = "file", num_args = 1..)]
        rle: Vec<String>,
        #[arg(long)]
        m: usize,
    },
    /// Build an explicit coloring and report the lower bound it witnesses.
    Construct {
        #[arg(value_enum)]
        name: Construction,
        #[arg(long)]
        m: usize,
        /// Colors (lift, sandwich, bracket, extend).
        #[arg(long)]
        r: Option<u32>,
        /// Inner color count (lift, sandwich, bracket).
        #[arg(long)]
        j: Option<u32>,
        /// Inner coloring for `extend`.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Print the extension to [1, L] instead of the builder's own interval.
        #[arg(long)]
        full: bool,
        /// Skip verifying the extension.
        #[arg(long)]
        no_check: bool,
    },
    /// Exact g(m, r) by exhaustive search.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 64)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        node_budget: Option<u64>,
        /// Write the result as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every r in [2, max].
    Classify {
        #[arg(long)]
        max: u32,
        /// CSV table path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary path.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// `leading` compares leading terms only; `strict` tracks offsets and thresholds.
        #[arg(long, default_value = "leading")]
        semantics: Semantics,
    },
    /// The four families r_{n+1} = 3r_n - r_{n-1} up to max.
    Families {
        #[arg(long)]
        max: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    TwoColor,
    ThreeColor,
    FourColor,
    Lift,
    Sandwich,
    Bracket,
    Extend,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn input(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: err.into() }
}

fn runtime(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, err: err.into() }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.no_meta {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        println!("# lcolor {} at unix time {secs}", env!("CARGO_PKG_VERSION"));
    }
    let outcome = match cli.command {
        Command::Verify { file, rle, m } => {
            let rle = (!rle.is_empty()).then(|| rle.join(" "));
            verify(file.as_deref(), rle.as_deref(), m)
        }
        Command::Construct { name, m, r, j, file, full, no_check } => construct(name, m, r, j, file.as_deref(), full, no_check),
        Command::Search { m, r, max_n, threads, node_budget, out } => search(m, r, max_n, threads, node_budget, out.as_deref()),
        Command::Classify { max, out, summary, semantics } => classify(max, out.as_deref(), summary.as_deref(), semantics),
        Command::Families { max } => list_families(max),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read_coloring(file: Option<&Path>, rle: Option<&str>) -> Result<Coloring, Failure> {
    let text = match (file, rle) {
        (Some(p), _) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(input)?,
        (None, Some(s)) => s.to_string(),
        (None, None) => return Err(input(anyhow::anyhow!("no coloring given"))),
    };
    parse_coloring_text(&text).map_err(input)
}

fn verify(file: Option<&Path>, rle: Option<&str>, m: usize) -> Outcome {
    if m == 0 {
        return Err(input(anyhow::anyhow!("m must be at least 1")));
    }
    let c = read_coloring(file, rle)?;
    println!("coloring of [{}, {}] with r = {}", c.start(), c.end(), c.r());
    match find_violation(&c, m) {
        None => {
            println!("L({})-coloring for m = {m}", c.r());
            Ok(0)
        }
        Some(v) => {
            let (lhs, rhs) = v.inequality();
            println!("violation for m = {m}");
            println!("X = {:?} (color {})", v.x.positions(), v.color_x);
            println!("Y = {:?} (color {})", v.y.positions(), v.color_y);
            println!(
                "2({} - {}) = {lhs} <= {rhs} = {} - {}",
                v.x.tail(),
                v.x.head(),
                v.y.tail(),
                v.x.head()
            );
            Ok(1)
        }
    }
}

fn need(v: Option<u32>, flag: &str, name: &str) -> Result<u32, Failure> {
    v.ok_or_else(|| input(anyhow::anyhow!("{name} needs --{flag}")))
}

fn construct(
    name: Construction,
    m: usize,
    r: Option<u32>,
    j: Option<u32>,
    file: Option<&Path>,
    full: bool,
    no_check: bool,
) -> Outcome {
    let (built, r) = match name {
        Construction::TwoColor | Construction::ThreeColor | Construction::FourColor => {
            let r = match name {
                Construction::TwoColor => 2,
                Construction::ThreeColor => 3,
                _ => 4,
            };
            (lower_string(r, m).map_err(input)?, r)
        }
        Construction::Lift | Construction::Sandwich | Construction::Bracket => {
            let rule = match name {
                Construction::Lift => Rule::Lift,
                Construction::Sandwich => Rule::Sandwich,
                _ => Rule::Bracket,
            };
            let r = need(r, "r", rule.name())?;
            let j = need(j, "j", rule.name())?;
            if j == 0 || j >= r {
                return Err(input(anyhow::anyhow!("need 1 <= j < r (r = {r}, j = {j})")));
            }
            let table = classify_all(j, Semantics::Strict);
            (table.kb.rule_coloring(rule, r, j, m).map_err(input)?, r)
        }
        Construction::Extend => {
            let r = need(r, "r", "extend")?;
            let file = file.ok_or_else(|| input(anyhow::anyhow!("extend needs --file")))?;
            (read_coloring(Some(file), None)?, r)
        }
    };
    let extended = extend_full(&built, m, r).map_err(input)?;
    let shown = if full { &extended } else { &built };
    print!("{}", to_coloring_text(shown));
    if !no_check {
        if let Some(v) = find_violation(&extended, m) {
            println!("extension to [1, {}] is not an L({r})-coloring: X = {:?}, Y = {:?}", extended.end(), v.x.positions(), v.y.positions());
            return Ok(1);
        }
        println!("verified: L({r})-coloring of [1, {}] for m = {m}", extended.end());
    }
    println!("g({m},{r}) > {}", extended.end());
    Ok(0)
}

fn search(m: usize, r: u32, max_n: usize, threads: usize, node_budget: Option<u64>, out: Option<&Path>) -> Outcome {
    if m == 0 || r == 0 || threads == 0 {
        return Err(input(anyhow::anyhow!("m, r and threads must be at least 1")));
    }
    let mut cfg = SearchConfig::default().with_threads(threads);
    if let Some(b) = node_budget {
        cfg = cfg.with_node_budget(b);
    }
    let res = compute_g(m, r, max_n, &cfg);
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(&res).expect("search result serializes");
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display())).map_err(runtime)?;
    }
    let witness = res.witness_rle().unwrap_or_else(|| "(none)".into());
    match res.g {
        Some(g) if res.is_exact() => {
            println!("g({m},{r}) = {g}");
            println!("witness of length {}: {witness}", g - 1);
            println!("nodes: {}", res.nodes);
            Ok(0)
        }
        _ => {
            let reached = match &res.status {
                lcolor::search::SearchStatus::LowerBoundOnly { n_reached, reason } => {
                    println!("g({m},{r}) > {n_reached} ({reason})");
                    *n_reached
                }
                lcolor::search::SearchStatus::Exact => 0,
            };
            println!("longest witness found (length {reached}): {witness}");
            println!("nodes: {}", res.nodes);
            Ok(3)
        }
    }
}

fn print_summary(s: &Summary) {
    println!("r in [2, {}], {} semantics: {} rows, {} unclassified", s.max_r, semantics_name(s.semantics), s.total, s.unclassified);
    println!("by kind:");
    for (k, v) in &s.by_kind {
        println!("  {k:<12} {:>8} {:>9.4}%", v.count, v.percent);
    }
    println!("by generating rule:");
    for (k, v) in &s.by_theorem {
        println!("  {k:<12} {:>8} {:>9.4}%", v.count, v.percent);
    }
    println!("by generating rule, r >= 5:");
    for (k, v) in &s.by_theorem_rules_only {
        println!("  {k:<12} {:>8} {:>9.4}%", v.count, v.percent);
    }
}

fn semantics_name(s: Semantics) -> &'static str {
    match s {
        Semantics::Strict => "strict",
        Semantics::Leading => "leading",
    }
}

fn write_outputs(t: &ClassificationTable, out: Option<&Path>, summary: Option<&Path>) -> Result<(), Failure> {
    if let Some(p) = out {
        fs::write(p, t.to_csv_string()).with_context(|| format!("writing {}", p.display())).map_err(runtime)?;
    }
    if let Some(p) = summary {
        fs::write(p, t.summary_json() + "\n").with_context(|| format!("writing {}", p.display())).map_err(runtime)?;
    }
    Ok(())
}

fn classify(max: u32, out: Option<&Path>, summary: Option<&Path>, semantics: Semantics) -> Outcome {
    if max < 2 {
        return Err(input(anyhow::anyhow!("--max must be at least 2")));
    }
    let t = classify_all(max, semantics);
    write_outputs(&t, out, summary)?;
    print_summary(&t.summary());
    let missing = t.unclassified();
    if let Some(first) = missing.first() {
        println!("first unclassified r: {first}");
    }
    Ok(0)
}

fn list_families(max: i64) -> Outcome {
    let fams = families(max).map_err(input)?;
    let table = classify_all(u32::try_from(max.clamp(2, u32::MAX as i64)).unwrap_or(u32::MAX), Semantics::Leading);
    for f in &fams {
        println!("{} = {}", f.spec.name, f.spec.label);
        for (n, &r) in f.members.iter().enumerate() {
            let row = table.get(r as u32);
            let kind = row.map_or("-", |c| c.kind.name());
            let coeff = row.and_then(|c| c.lower).map_or("-".to_string(), |b| b.coeff.to_string());
            println!("  n = {n:<3} r = {r:<8} {kind:<6} coefficient {coeff}");
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from(["lcolor", "--no-meta", "construct", "sandwich", "--m", "4", "--r", "7", "--j", "2"]).unwrap();
        assert!(cli.no_meta);
        assert!(matches!(cli.command, Command::Construct { name: Construction::Sandwich, m: 4, r: Some(7), j: Some(2), .. }));
        let cli = Cli::try_parse_from(["lcolor", "classify", "--max", "10"]).unwrap();
        assert!(matches!(cli.command, Command::Classify { semantics: Semantics::Leading, .. }));
        assert!(Cli::try_parse_from(["lcolor", "verify", "--m", "2"]).is_err());
        assert!(Cli::try_parse_from(["lcolor", "classify", "--max", "10", "--semantics", "loose"]).is_err());
    }
}
