//! `classprod` — exact conjugacy-class algebra, character tables, and
//! word-width checks for small finite groups, plus the orthogonal-group
//! counting routines that work beyond enumeration range.

mod output;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use classprod::classalg::ClassConstraint;
use classprod::groups::GroupSpec;
use classprod::report::CheckRecord;
use classprod::session::Session;
use classprod::symbols::Symbol;
use classprod::words::{self, WidthTarget};
use classprod::{numth, Error};

use output::{emit_records, Format};

#[derive(Parser)]
#[command(name = "classprod", version, about = "Exact class products, character tables, and word widths for small finite groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Output format for record streams
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Directory for cached character tables (overrides CLASSPROD_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for parallel kernels (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration cap on group order
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group and report order, center, and exponent
    Group {
        /// Group spec, e.g. alt:5, sym:6, sl:2:7, psl:2:9, su:3:3, sp4:3, psp4:3
        spec: String,
    },
    /// List conjugacy classes: order, size, inverse class, representative
    Classes {
        spec: String,
        /// Also classify regular semisimple classes (matrix groups only)
        #[arg(long)]
        regular_semisimple: bool,
    },
    /// Compute (or load from cache) the exact character table
    Chartab {
        spec: String,
        /// Print full cyclotomic values, not just degrees
        #[arg(long)]
        values: bool,
    },
    /// Search for class pairs whose product covers the non-central elements
    Cover {
        spec: String,
        /// Constraint on both representative orders: any, prime, square-free,
        /// rs (regular semisimple), or order=M
        #[arg(long, default_value = "any")]
        constraint: String,
        /// Require the product to also avoid the center exactly
        #[arg(long)]
        exact: bool,
        /// Stop after the first covering pair
        #[arg(long)]
        first: bool,
    },
    /// Width of the power word x^m on a group, at class-set level
    Width {
        spec: String,
        /// Power-word exponent m
        #[arg(short, long)]
        m: u64,
        /// Target set: all elements or the non-central ones
        #[arg(long, value_enum, default_value_t = TargetOpt::All)]
        target: TargetOpt,
    },
    /// Check whether every element is a product x^k · y^l, and print bounds
    Waring {
        spec: Option<String>,
        #[arg(short, long, requires = "spec")]
        k: Option<u64>,
        #[arg(short, long, requires = "spec")]
        l: Option<u64>,
        /// Print the order threshold m^(8m²) and the width bound f(m) instead
        #[arg(long, conflicts_with_all = ["spec", "k", "l"])]
        bounds: Option<u64>,
    },
    /// Largest primitive prime divisor of q^n − 1
    Ppd { q: u64, n: u32 },
    /// Degree of the unipotent character attached to a D_n symbol
    Symbol {
        /// First sequence, comma-separated, e.g. 0,2,3
        #[arg(long, value_delimiter = ',')]
        x: Vec<u32>,
        /// Second sequence, comma-separated (empty allowed: pass --y "")
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        y: Vec<u32>,
        /// Field size q (even q required only by the orthogonal-space routines)
        #[arg(short, long)]
        q: u64,
    },
    /// Run or list the built-in verification scenarios
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    /// List the scenario catalog
    List,
    /// Run named scenarios (or those from a config file)
    Run {
        /// Scenario names; see `scenario list`
        names: Vec<String>,
        /// TOML config file (keys: scenarios, cap, threads, cache_dir, format)
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum TargetOpt {
    All,
    Noncentral,
}

#[derive(Deserialize, Default)]
struct ConfigFile {
    scenarios: Option<Vec<String>>,
    cap: Option<u64>,
    threads: Option<usize>,
    cache_dir: Option<PathBuf>,
    format: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns Ok(false) when a scenario check failed (nonzero exit, no error).
fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut global = cli.global.clone();

    // Config file can supply defaults for scenario runs before thread setup.
    let mut config = ConfigFile::default();
    if let Cmd::Scenario { cmd: ScenarioCmd::Run { config: Some(path), .. } } = &cli.cmd {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        config = toml::from_str(&text).context("parsing config")?;
        if global.threads.is_none() {
            global.threads = config.threads;
        }
        if global.cache_dir.is_none() {
            global.cache_dir = config.cache_dir.clone();
        }
        if let Some(c) = config.cap {
            global.cap = c;
        }
        if let Some(f) = &config.format {
            global.format = match f.as_str() {
                "jsonl" => Format::Jsonl,
                "tsv" => Format::Tsv,
                other => bail!("unknown format {other:?} in config"),
            };
        }
    }

    if let Some(t) = global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("initializing thread pool")?;
    }

    let session = Session::with_cache_dir(global.cap, global.cache_dir.clone());

    match cli.cmd {
        Cmd::Group { spec } => {
            let spec: GroupSpec = spec.parse()?;
            let g = session.group(&spec)?;
            let formula = spec.closed_form_order()?;
            emit_records(
                global.format,
                &[json!({
                    "group": spec.to_string(),
                    "order": g.order(),
                    "center": g.center().len(),
                    "exponent": g.exponent(),
                    "q_part": formula.q_part.to_string(),
                })],
            )?;
            Ok(true)
        }
        Cmd::Classes { spec, regular_semisimple } => {
            let spec: GroupSpec = spec.parse()?;
            let g = session.group(&spec)?;
            let d = session.decomposition(&spec)?;
            let mut records = Vec::new();
            for i in 0..d.k() {
                let mut rec = json!({
                    "class": i,
                    "order": d.orders[i],
                    "size": d.sizes[i],
                    "inverse_class": d.inverse_class[i],
                    "representative": format!("{:?}", g.element(d.reps[i])),
                });
                if regular_semisimple {
                    let r = classprod::classes::is_regular_semisimple(&g, &d, i)?;
                    rec["regular_semisimple"] = json!(r.is_regular_semisimple);
                }
                records.push(rec);
            }
            emit_records(global.format, &records)?;
            Ok(true)
        }
        Cmd::Chartab { spec, values } => {
            let spec: GroupSpec = spec.parse()?;
            let d = session.decomposition(&spec)?;
            let t = session.table(&spec)?;
            let mut records = Vec::new();
            records.push(json!({
                "group": spec.to_string(),
                "characters": t.k,
                "conductor": t.e,
                "prime": t.ell,
                "class_sizes": d.sizes,
            }));
            for (r, &deg) in t.degrees.iter().enumerate() {
                let mut rec = json!({ "character": r, "degree": deg });
                if values {
                    let row: Vec<_> = (0..t.k)
                        .map(|j| json!({ "class": j, "terms": t.value(r, j).terms }))
                        .collect();
                    rec["values"] = json!(row);
                }
                records.push(rec);
            }
            emit_records(global.format, &records)?;
            Ok(true)
        }
        Cmd::Cover { spec, constraint, exact, first } => {
            let spec: GroupSpec = spec.parse()?;
            let g = session.group(&spec)?;
            let d = session.decomposition(&spec)?;
            let sc = session.tensor(&spec)?;
            let constraint = ClassConstraint::parse(&constraint)?;
            let hits = classprod::classalg::search_covering_pairs(
                &g, &d, &sc, &constraint, exact, first,
            )?;
            let mut records = Vec::new();
            for hit in &hits {
                records.push(json!({
                    "group": spec.to_string(),
                    "class_i": hit.i,
                    "class_j": hit.j,
                    "order_i": d.orders[hit.i],
                    "order_j": d.orders[hit.j],
                    "covers_noncentral": hit.covers,
                    "exactly_noncentral": hit.exact,
                    "missing_classes": hit.missing,
                }));
            }
            if hits.is_empty() {
                records.push(json!({
                    "group": spec.to_string(),
                    "covers_noncentral": false,
                    "note": "no class pair satisfying the constraint covers the non-central classes",
                }));
            }
            emit_records(global.format, &records)?;
            Ok(true)
        }
        Cmd::Width { spec, m, target } => {
            let spec: GroupSpec = spec.parse()?;
            let g = session.group(&spec)?;
            let d = session.decomposition(&spec)?;
            let sc = session.tensor(&spec)?;
            let target = match target {
                TargetOpt::All => WidthTarget::All,
                TargetOpt::Noncentral => WidthTarget::NonCentral,
            };
            let rep = words::power_word_width(&g, &d, &sc, m, target)?;
            emit_records(
                global.format,
                &[json!({
                    "group": spec.to_string(),
                    "m": m,
                    "width": rep.width.map(|w| w.to_string()).unwrap_or_else(|| "infinite".into()),
                    "image_classes": rep.image_classes,
                    "support_sizes": rep.support_sizes,
                    "missing_at_last_step": rep.missing_final,
                })],
            )?;
            Ok(true)
        }
        Cmd::Waring { spec, k, l, bounds } => {
            if let Some(m) = bounds {
                let (threshold, f) = numth::waring_bounds(m);
                emit_records(
                    global.format,
                    &[json!({
                        "m": m,
                        "order_threshold": threshold.to_string(),
                        "width_bound": f,
                    })],
                )?;
                return Ok(true);
            }
            let spec_str = spec.ok_or_else(|| Error::BadParameter("waring needs a group spec or --bounds".into()))?;
            let (k, l) = match (k, l) {
                (Some(k), Some(l)) => (k, l),
                _ => bail!("waring needs both -k and -l"),
            };
            let spec: GroupSpec = spec_str.parse()?;
            let g = session.group(&spec)?;
            let d = session.decomposition(&spec)?;
            let sc = session.tensor(&spec)?;
            let rep = words::waring_pair_check(&g, &d, &sc, k, l)?;
            emit_records(
                global.format,
                &[json!({
                    "group": spec.to_string(),
                    "k": k,
                    "l": l,
                    "surjective": rep.surjective,
                    "missing_classes": rep.missing,
                })],
            )?;
            Ok(true)
        }
        Cmd::Ppd { q, n } => {
            let r = numth::ppd(q, n)?;
            emit_records(
                global.format,
                &[json!({
                    "q": q,
                    "n": n,
                    "ppd": r.map(|p| p.to_string()).unwrap_or_else(|| "none".into()),
                })],
            )?;
            Ok(true)
        }
        Cmd::Symbol { x, y, q } => {
            let y: Vec<u32> = if y.is_empty() { vec![] } else { y };
            let s = Symbol::new(x, y)?;
            let n = s.rank()?;
            let hooks = s.hook_data()?;
            let degree = s.unipotent_degree(q)?;
            emit_records(
                global.format,
                &[json!({
                    "symbol_x": s.x,
                    "symbol_y": s.y,
                    "q": q,
                    "n": n,
                    "degree": degree.to_string(),
                    "hooks": hooks.hooks,
                    "cohooks": hooks.cohooks,
                    "a_stat": hooks.a_stat,
                    "b_stat": hooks.b_stat,
                })],
            )?;
            Ok(true)
        }
        Cmd::Scenario { cmd } => match cmd {
            ScenarioCmd::List => {
                let records: Vec<_> = scenarios::CATALOG
                    .iter()
                    .map(|(name, desc)| json!({ "scenario": name, "description": desc }))
                    .collect();
                emit_records(global.format, &records)?;
                Ok(true)
            }
            ScenarioCmd::Run { names, config: _ } => {
                let mut names = names;
                if names.is_empty() {
                    if let Some(s) = config.scenarios {
                        names = s;
                    }
                }
                if names.is_empty() {
                    names = scenarios::CATALOG.iter().map(|(n, _)| n.to_string()).collect();
                }
                let mut all: Vec<CheckRecord> = Vec::new();
                for name in &names {
                    let recs = scenarios::run_scenario(&session, name)?;
                    all.extend(recs);
                }
                let ok = all.iter().all(|r| r.pass);
                output::emit_checks(global.format, &all)?;
                Ok(ok)
            }
        },
    }
}
