//! `apndesigns` command-line tool.
//!
//! Exit codes: 0 success or property holds, 1 property verified false,
//! 2 usage or parameter error, 3 undetermined or over budget.

mod select;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use apndesigns::affine::{orbit_checked, orbit_size_streaming, stabilizer_order, MATERIALIZE_MAX_DEGREE};
use apndesigns::blocks::{apn_catalog, apn_image_block_unchecked, kasami_block, oval_block, oval_catalog};
use apndesigns::boolfn::{char_fn, is_semibent, walsh_fast, walsh_naive};
use apndesigns::codes::{code_from_block, DEFAULT_ENUM_BUDGET, DEFAULT_SEED};
use apndesigns::designs::iso::classify;
use apndesigns::designs::{evaluate_criteria, spectral_pair, verify_t_design};
use apndesigns::equations::conjecture::{check_conjecture_with, ConjectureOptions};
use apndesigns::gf2n::gcd;
use apndesigns::{ConjectureId, Error, FieldCtx, OrbitDesign, Verdict, SCHEMA_VERSION};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use select::BlockArgs;

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const UNDETERMINED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "apndesigns", version, about = "3-designs from APN and oval power functions over GF(2^n)")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the generation time out of JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a base block and print or save it.
    Block {
        #[command(flatten)]
        block: BlockArgs,
        /// Write the block file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Develop a block under x -> ax + b and report orbit size and stabilizer.
    Orbit {
        #[command(flatten)]
        block: BlockArgs,
        /// Write the orbit here (JSON, or binary with --binary).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, requires = "out")]
        binary: bool,
    },
    /// Check the t-design property, optionally with the spectral criteria.
    Verify {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(short, long, default_value_t = 3)]
        t: u32,
        /// Also evaluate the character-sum, Walsh and N_E criteria.
        #[arg(long)]
        criteria: bool,
    },
    /// Binary code spanned by the orbit.
    Code {
        #[command(flatten)]
        block: BlockArgs,
        /// Maximum number of codewords enumerated exactly.
        #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
        budget: u64,
        /// Seed for the randomized low-weight search.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        search_seed: u64,
        /// Also report the dual code.
        #[arg(long)]
        dual: bool,
        /// Print the generator matrix.
        #[arg(long, value_enum)]
        matrix: Option<MatrixFormat>,
    },
    /// Check one of the open statements at a single n.
    Conjecture {
        /// unique-root, kasami-ap, welch-ap, niho-ap, pairwise-noniso,
        /// code-params or code-ineq.
        id: String,
        #[arg(short, long)]
        n: u32,
        /// Index for unique-root (inferred from n = 3i +- 1 otherwise).
        #[arg(short, long)]
        i: Option<u32>,
    },
    /// Split the catalog designs at n into isomorphism classes.
    Classify {
        #[arg(short, long, default_value_t = 5)]
        n: u32,
    },
    /// Walsh spectrum of the block's indicator function.
    Walsh {
        #[command(flatten)]
        block: BlockArgs,
        /// Use the quadratic definition instead of the fast transform.
        #[arg(long)]
        naive: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatrixFormat {
    Text,
    Json,
}

struct Report {
    code: u8,
    text: String,
    json: Value,
}

fn envelope(cli: &Cli, command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        m.insert("generated_at".into(), secs.into());
    }
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => UNDETERMINED,
        _ => USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("APNDESIGNS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let command = match &cli.cmd {
        Command::Block { .. } => "block",
        Command::Orbit { .. } => "orbit",
        Command::Verify { .. } => "verify",
        Command::Code { .. } => "code",
        Command::Conjecture { .. } => "conjecture",
        Command::Classify { .. } => "classify",
        Command::Walsh { .. } => "walsh",
    };
    match run(&cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            if cli.json {
                let v = envelope(&cli, command, r.json);
                // a closed pipe downstream is not an error for us
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                let _ = write!(out, "{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: &Cli) -> apndesigns::Result<Report> {
    match &cli.cmd {
        Command::Block { block, out } => cmd_block(block, out.as_ref()),
        Command::Orbit { block, out, binary } => cmd_orbit(block, out.as_ref(), *binary),
        Command::Verify { block, t, criteria } => cmd_verify(block, *t, *criteria),
        Command::Code {
            block,
            budget,
            search_seed,
            dual,
            matrix,
        } => cmd_code(block, *budget, *search_seed, *dual, *matrix),
        Command::Conjecture { id, n, i } => cmd_conjecture(id, *n, *i),
        Command::Classify { n } => cmd_classify(*n),
        Command::Walsh { block, naive } => cmd_walsh(block, *naive),
    }
}

fn cmd_block(args: &BlockArgs, out: Option<&PathBuf>) -> apndesigns::Result<Report> {
    let lb = args.resolve()?;
    let file = lb.to_file();
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&file)?)?;
    }
    let members: Vec<String> = lb.block.iter().map(|x| x.to_string()).collect();
    Ok(Report {
        code: OK,
        text: format!("{} size {}\n{}\n", lb.label(), lb.block.size(), members.join(" ")),
        json: json!({ "label": lb.label(), "size": lb.block.size(), "block": file }),
    })
}

fn cmd_orbit(args: &BlockArgs, out: Option<&PathBuf>, binary: bool) -> apndesigns::Result<Report> {
    let lb = args.resolve()?;
    let ctx = lb.block.ctx();
    let q = ctx.size() as u64;
    let size = if ctx.n() > MATERIALIZE_MAX_DEGREE {
        if out.is_some() {
            return Err(Error::Budget(format!("cannot write an orbit at n > {MATERIALIZE_MAX_DEGREE}")));
        }
        orbit_size_streaming(&lb.block)?
    } else {
        let d = orbit_checked(&lb.block)?;
        if let Some(path) = out {
            if binary {
                d.write_binary(fs::File::create(path)?)?;
            } else {
                fs::write(path, serde_json::to_string(&d.to_file(&lb.construction))?)?;
            }
        }
        d.num_blocks() as u64
    };
    let stab = stabilizer_order(&lb.block);
    Ok(Report {
        code: OK,
        text: format!(
            "{}: v={} k={} blocks={} stabilizer={} (q(q-1)={})\n",
            lb.label(),
            q,
            lb.block.size(),
            size,
            stab,
            q * (q - 1)
        ),
        json: json!({
            "label": lb.label(),
            "v": q,
            "k": lb.block.size(),
            "num_blocks": size,
            "stab_order": stab,
        }),
    })
}

fn cmd_verify(args: &BlockArgs, t: u32, criteria: bool) -> apndesigns::Result<Report> {
    let lb = args.resolve()?;
    let d = orbit_checked(&lb.block)?;
    let outcome = verify_t_design(&d, t)?;
    let mut text = match outcome.params() {
        Some(p) => format!("{}: {} (stabilizer {})\n", lb.label(), p, d.stab_order()),
        None => format!("{}: not a {t}-design\n", lb.label()),
    };
    let mut body = json!({ "label": lb.label(), "t": t, "stab_order": d.stab_order(), "outcome": outcome });
    let mut code = if outcome.is_design() { OK } else { NEGATIVE };
    if criteria {
        let pair = spectral_pair(&lb.block, &lb.construction)?;
        let s = evaluate_criteria(&d, &pair)?;
        text += &format!(
            "criteria with d={}: char-sum {}, walsh-triple {}, N_E {}{}; agree: {}\n",
            pair.d,
            s.char_sum.constant,
            s.walsh_triple.constant,
            s.n_count.constant,
            s.equation_count.as_ref().map_or(String::new(), |r| format!(", equation {}", r.constant)),
            s.agree()
        );
        if !s.agree() {
            code = UNDETERMINED;
        }
        body["criteria"] = serde_json::to_value(&s)?;
    }
    Ok(Report { code, text, json: body })
}

fn cmd_code(
    args: &BlockArgs,
    budget: u64,
    seed: u64,
    dual: bool,
    matrix: Option<MatrixFormat>,
) -> apndesigns::Result<Report> {
    let lb = args.resolve()?;
    let c = code_from_block(&lb.block)?;
    let md = c.min_distance(budget, seed);
    let w = c.weight_enumerator(budget).ok();
    let mut text = format!("{}: [{}, {}, {}]", lb.label(), c.len(), c.dim(), md);
    text += if c.is_self_dual() { " self-dual\n" } else { "\n" };
    if let Some(w) = &w {
        let terms: Vec<String> = w.nonzero().iter().map(|(k, v)| format!("{k}:{v}")).collect();
        text += &format!("weights {}\n", terms.join(" "));
    }
    let mut body = json!({
        "label": lb.label(),
        "length": c.len(),
        "dimension": c.dim(),
        "min_distance": md,
        "self_dual": c.is_self_dual(),
        "weight_enumerator": w,
    });
    if dual {
        let dc = c.dual();
        let dmd = dc.min_distance(budget, seed);
        text += &format!("dual: [{}, {}, {}]\n", dc.len(), dc.dim(), dmd);
        body["dual"] = json!({ "dimension": dc.dim(), "min_distance": dmd });
    }
    match matrix {
        Some(MatrixFormat::Text) => text += &c.to_text(),
        Some(MatrixFormat::Json) => text += &format!("{}\n", serde_json::to_string(&c.to_json())?),
        None => {}
    }
    if matrix.is_some() {
        body["generator"] = serde_json::to_value(c.to_json())?;
    }
    Ok(Report { code: OK, text, json: body })
}

fn cmd_conjecture(id: &str, n: u32, i: Option<u32>) -> apndesigns::Result<Report> {
    let id: ConjectureId = id.parse()?;
    let r = check_conjecture_with(id, n, &ConjectureOptions { i })?;
    let code = match r.verdict {
        Verdict::Holds => OK,
        Verdict::Fails => NEGATIVE,
        Verdict::OutOfBudget => UNDETERMINED,
    };
    let verdict = serde_json::to_value(&r.verdict)?;
    let mut text = format!(
        "{} at n={}: {} ({:.1} ms)\n",
        id,
        n,
        verdict.as_str().unwrap_or_default(),
        r.elapsed.as_secs_f64() * 1e3
    );
    if let Some(w) = &r.witness {
        text += &format!("witness: {w}\n");
    }
    Ok(Report {
        code,
        text,
        json: serde_json::to_value(&r)?,
    })
}

fn catalog_designs(n: u32) -> apndesigns::Result<Vec<(String, OrbitDesign)>> {
    let ctx = FieldCtx::new(n)?;
    let mut out = Vec::new();
    for i in (1..=(n - 1) / 2).filter(|&i| gcd(i as u64, n as u64) == 1) {
        out.push((format!("KA({n},{i})"), orbit_checked(&kasami_block(&ctx, i)?)?));
    }
    let mut seen = BTreeSet::new();
    for e in apn_catalog(n) {
        let s = ctx.exponent_u128(e.exponent as u128);
        // the Gold exponents give the hyperplane design, like the Niho one at n = 5
        if seen.insert(s.value()) {
            out.push((format!("AP({n},{s})"), orbit_checked(&apn_image_block_unchecked(&ctx, s))?));
        }
    }
    let mut seen = BTreeSet::new();
    for e in oval_catalog(n) {
        let s = ctx.exponent_u128(e.exponent as u128);
        if seen.insert(s.value()) {
            out.push((format!("OV({n},{s})"), orbit_checked(&oval_block(&ctx, s)?)?));
        }
    }
    Ok(out)
}

/// The eleven designs compared at n = 5.
fn named_designs_n5() -> apndesigns::Result<Vec<(String, OrbitDesign)>> {
    let ctx = FieldCtx::new(5)?;
    let mut out = Vec::new();
    for i in [1, 2] {
        out.push((format!("KA(5,{i})"), orbit_checked(&kasami_block(&ctx, i)?)?));
    }
    for s in [5, 7, 13] {
        out.push((format!("AP(5,{s})"), orbit_checked(&apn_image_block_unchecked(&ctx, ctx.exponent(s)))?));
    }
    for s in [6, 26, 28, 4, 24, 8] {
        out.push((format!("OV(5,{s})"), orbit_checked(&oval_block(&ctx, ctx.exponent(s))?)?));
    }
    Ok(out)
}

fn cmd_classify(n: u32) -> apndesigns::Result<Report> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Precondition(format!("classification needs odd n >= 3, got {n}")));
    }
    if n > 7 {
        return Err(Error::Budget(format!("classification runs for n <= 7, got {n}")));
    }
    let ds = if n == 5 { named_designs_n5()? } else { catalog_designs(n)? };
    let c = classify(&ds);
    let mut text = String::new();
    for cl in &c.classes {
        text += &format!("{{{}}}\n", cl.join(", "));
    }
    for (a, b) in &c.undetermined {
        text += &format!("undetermined: {a} vs {b}\n");
    }
    Ok(Report {
        code: if c.is_complete() { OK } else { UNDETERMINED },
        text,
        json: json!({ "n": n, "classification": c }),
    })
}

fn cmd_walsh(args: &BlockArgs, naive: bool) -> apndesigns::Result<Report> {
    let lb = args.resolve()?;
    let f = char_fn(&lb.block);
    let w = if naive { walsh_naive(&f) } else { walsh_fast(&f) };
    let values: Vec<i32> = w.values().into_iter().collect();
    let semibent = is_semibent(&w).ok();
    Ok(Report {
        code: OK,
        text: format!(
            "{}: values {:?}, semi-bent {}\n",
            lb.label(),
            values,
            semibent.map_or("n/a (n even)".to_string(), |b| b.to_string())
        ),
        json: json!({
            "label": lb.label(),
            "values": values,
            "semibent": semibent,
            "spectrum": w,
        }),
    })
}
