//! `setecc`: encode, decode, simulate, and check set substitution codes.
//!
//! Exit status: 0 success, 1 verification or decoding failure, 2 usage or
//! input error, 3 work guard exceeded.

use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Num;
use serde::Serialize;
use serde_json::{json, Value};

use setecc::analysis::bounds::{
    anchor_chain, improved_chain, multi_chain, redundancy, single_chain, ChainReport,
};
use setecc::analysis::{evaluate_bounds, run_lemma_suite, SuiteConfig};
use setecc::codec::{AnchorEnsemble, EnsembleGuard};
use setecc::sim::{simulate, PatternMode};
use setecc::{
    AnchorCodec, Error, ImprovedCodec, MultiSubCodec, Params, SetCodec, SingleSubCodec, Word,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CodecKind {
    Single,
    SingleImproved,
    Multi,
    Anchor,
}

impl CodecKind {
    fn default_params(self) -> (usize, usize, usize) {
        match self {
            CodecKind::Single => (32, 192, 1),
            CodecKind::SingleImproved => (32, 128, 1),
            CodecKind::Multi => (128, 1280, 2),
            CodecKind::Anchor => (2, 64, 1),
        }
    }
}

/// Every flag can also be set through an environment variable
/// `SETECC_<FLAG>`, e.g. `SETECC_SEED` or `SETECC_MAX_WEIGHT`.
#[derive(Debug, Parser)]
#[command(
    name = "setecc",
    version,
    about = "Substitution-correcting codes for unordered sets of strings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "single",
        env = "SETECC_CODEC"
    )]
    codec: CodecKind,

    /// Number of strings (codec default when omitted).
    #[arg(long = "M", global = true, env = "SETECC_M")]
    m: Option<usize>,

    /// String length in bits.
    #[arg(long = "L", global = true, env = "SETECC_L")]
    l: Option<usize>,

    /// Substitution budget.
    #[arg(long = "K", global = true, env = "SETECC_K")]
    k: Option<usize>,

    #[arg(long, global = true, default_value_t = 0, env = "SETECC_SEED")]
    seed: u64,

    /// Messages per simulation.
    #[arg(long, global = true, default_value_t = 10, env = "SETECC_TRIALS")]
    trials: u64,

    /// Random patterns per message when not exhaustive.
    #[arg(long, global = true, default_value_t = 100, env = "SETECC_PATTERNS")]
    patterns: u64,

    /// Try every single flip of each message.
    #[arg(long, global = true, env = "SETECC_EXHAUSTIVE")]
    exhaustive: bool,

    /// Largest random pattern weight (defaults to K).
    #[arg(long, global = true, env = "SETECC_MAX_WEIGHT")]
    max_weight: Option<usize>,

    /// Cap on brute-force work units for enumeration.
    #[arg(long, global = true, env = "SETECC_GUARD")]
    guard: Option<u64>,

    /// Anchor ensemble cache file, built on first use.
    #[arg(long, global = true, env = "SETECC_ENSEMBLE_CACHE")]
    ensemble_cache: Option<PathBuf>,

    /// Input file (stdin when omitted).
    #[arg(long = "in", global = true, env = "SETECC_IN")]
    input: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true, env = "SETECC_OUT")]
    out: Option<PathBuf>,

    /// Machine-readable output.
    #[arg(long, global = true, env = "SETECC_JSON")]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read a hex message and write its codeword, one string per line.
    Encode {
        /// Message in hex; read from the input when omitted.
        message: Option<String>,
    },
    /// Read a received word and write the decoded message in hex.
    Decode,
    /// Encode random messages, corrupt them, and tally the decoder outcomes.
    Simulate,
    /// Redundancy of the codec against the general bounds and its chain.
    Bounds,
    /// Run the exhaustive lemma checks with M, L, K as maxima.
    Verify,
}

enum Built {
    Single(SingleSubCodec),
    Improved(ImprovedCodec),
    Multi(MultiSubCodec),
    Anchor(AnchorCodec),
}

impl Built {
    fn codec(&self) -> &dyn SetCodec {
        match self {
            Built::Single(c) => c,
            Built::Improved(c) => c,
            Built::Multi(c) => c,
            Built::Anchor(c) => c,
        }
    }

    fn chain(&self) -> ChainReport {
        match self {
            Built::Single(c) => single_chain(c),
            Built::Improved(c) => improved_chain(c),
            Built::Multi(c) => multi_chain(c),
            Built::Anchor(c) => anchor_chain(c),
        }
    }
}

/// Failure carrying its exit status.
struct Exit {
    code: u8,
    report: Option<Value>,
    message: String,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::GuardExceeded { .. }) => 3,
        Some(err) if err.is_decode_failure() => 1,
        _ => 2,
    }
}

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit {
            code: exit_code(&e),
            report: None,
            message: format!("{e:#}"),
        }
    }
}

impl Cli {
    fn params(&self) -> anyhow::Result<Params> {
        let (m, l, k) = self.codec.default_params();
        Ok(Params::new(
            self.m.unwrap_or(m),
            self.l.unwrap_or(l),
            self.k.unwrap_or(k),
        )?)
    }

    fn ensemble_guard(&self) -> EnsembleGuard {
        let mut g = EnsembleGuard::default();
        if let Some(w) = self.guard {
            g.max_work = w;
        }
        g
    }

    fn build(&self) -> anyhow::Result<Built> {
        let p = self.params()?;
        Ok(match self.codec {
            CodecKind::Single => Built::Single(SingleSubCodec::new(p)?),
            CodecKind::SingleImproved => Built::Improved(ImprovedCodec::new(p)?),
            CodecKind::Multi => Built::Multi(MultiSubCodec::new(p)?),
            CodecKind::Anchor => {
                let g = self.ensemble_guard();
                let e = match &self.ensemble_cache {
                    Some(path) => AnchorEnsemble::load_or_build(path, p.m, p.k, &g)?,
                    None => AnchorEnsemble::build(p.m, p.k, &g)?,
                };
                Built::Anchor(AnchorCodec::new(p, Arc::new(e))?)
            }
        })
    }

    fn read_input(&self) -> anyhow::Result<String> {
        let mut s = String::new();
        match &self.input {
            Some(p) => {
                s = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            }
            None => {
                io::stdin()
                    .read_to_string(&mut s)
                    .context("reading stdin")?;
            }
        }
        Ok(s)
    }

    fn write_output(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn envelope(&self, command: &str, params: Params, body: Value) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "codec": self.codec,
            "params": params,
        });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
            dst.extend(src);
        }
        v
    }
}

fn parse_hex(s: &str) -> anyhow::Result<BigUint> {
    let t = s.trim();
    let t = t.strip_prefix("0x").unwrap_or(t);
    if t.is_empty() {
        return Err(anyhow!("empty message"));
    }
    BigUint::from_str_radix(t, 16).map_err(|e| anyhow!("message is not hex: {e}"))
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn encode(cli: &Cli, message: Option<&str>) -> Result<(), Exit> {
    let built = cli.build()?;
    let codec = built.codec();
    let hex = match message {
        Some(m) => m.to_string(),
        None => cli.read_input()?,
    };
    let value = parse_hex(&hex)?;
    let word = codec.encode_value(&value).map_err(anyhow::Error::from)?;
    let mut buf = Vec::new();
    word.write_to(&mut buf).map_err(anyhow::Error::from)?;
    let text = String::from_utf8(buf).expect("bit strings are ASCII");
    if cli.json {
        let rows: Vec<&str> = text.lines().collect();
        let v = cli.envelope(
            "encode",
            codec.params(),
            json!({ "message": format!("{value:x}"), "word": rows }),
        );
        cli.write_output(&to_json_text(&v))?;
    } else {
        cli.write_output(&text)?;
    }
    Ok(())
}

fn decode(cli: &Cli) -> Result<(), Exit> {
    let built = cli.build()?;
    let codec = built.codec();
    let text = cli.read_input()?;
    let word = Word::read_from(BufReader::new(text.as_bytes())).map_err(anyhow::Error::from)?;
    match codec.decode_value(&word) {
        Ok(v) => {
            let out = if cli.json {
                to_json_text(&cli.envelope(
                    "decode",
                    codec.params(),
                    json!({ "ok": true, "message": format!("{v:x}") }),
                ))
            } else {
                format!("{v:x}\n")
            };
            cli.write_output(&out)?;
            Ok(())
        }
        Err(e) => {
            let code = exit_code(&anyhow::Error::from(e.clone()));
            let report = cli.envelope(
                "decode",
                codec.params(),
                json!({ "ok": false, "error_kind": e.kind(), "error": e.to_string() }),
            );
            Err(Exit {
                code,
                report: cli.json.then_some(report),
                message: format!("decoding failed ({}): {e}", e.kind()),
            })
        }
    }
}

fn simulate_cmd(cli: &Cli) -> Result<(), Exit> {
    let built = cli.build()?;
    let codec = built.codec();
    let p = codec.params();
    let max_weight = cli.max_weight.unwrap_or(p.k);
    let mode = if cli.exhaustive {
        PatternMode::Exhaustive
    } else {
        PatternMode::Random {
            per_message: cli.patterns,
            max_weight,
        }
    };
    let tally = simulate(codec, cli.seed, cli.trials, mode).map_err(anyhow::Error::from)?;
    let within_budget = cli.exhaustive || max_weight <= p.k;
    // Within the budget anything short of full recovery is a failure;
    // beyond it only a wrong message is.
    let ok = tally.wrong == 0 && (!within_budget || tally.all_recovered());
    let v = cli.envelope(
        "simulate",
        p,
        json!({
            "seed": cli.seed,
            "trials": cli.trials,
            "mode": mode,
            "within_budget": within_budget,
            "tally": tally,
            "success_rate": tally.rate(),
            "passed": ok,
        }),
    );
    let text = if cli.json {
        to_json_text(&v)
    } else {
        let mut s = format!(
            "{} M={} L={} K={}: {}/{} recovered, {} wrong",
            codec.name(),
            p.m,
            p.l,
            p.k,
            tally.recovered,
            tally.words,
            tally.wrong
        );
        for (k, n) in &tally.failures {
            s.push_str(&format!(", {n} {k}"));
        }
        s.push('\n');
        s
    };
    finish(cli, ok, text)
}

fn bounds_cmd(cli: &Cli) -> Result<(), Exit> {
    let built = cli.build()?;
    let codec = built.codec();
    let r = redundancy(codec);
    let bounds = evaluate_bounds(codec.params(), Some(r));
    let chain = built.chain();
    let v = cli.envelope(
        "bounds",
        codec.params(),
        json!({ "redundancy": r, "bounds": bounds, "chain": chain }),
    );
    let text = if cli.json {
        to_json_text(&v)
    } else {
        let mut s = format!("{}: r = {r:.6} bits\n", codec.name());
        s.push_str(&format!("  upper 2K log ML + 3 = {:.6}\n", bounds.upper));
        if let Some(x) = bounds.lower_single {
            s.push_str(&format!("  lower log(eps ML) = {x:.6}\n"));
        }
        s.push_str(&format!(
            "  lower K(log ML - 2 log K) = {:.6}\n",
            bounds.lower_main
        ));
        for step in &chain.steps {
            let mark = match (step.asserted, step.holds) {
                (_, true) => "ok",
                (true, false) => "FAILS",
                (false, false) => "fails (reported only)",
            };
            let (a, b) = (&chain.lines[step.from], &chain.lines[step.to]);
            s.push_str(&format!(
                "  {} = {:.6} {} {} = {:.6}: {mark}\n",
                a.label, a.value, step.relation, b.label, b.value
            ));
        }
        s.push_str(&format!(
            "  chain target {:.6}: {}\n",
            chain.target,
            if chain.holds { "holds" } else { "violated" }
        ));
        s
    };
    finish(cli, chain.holds, text)
}

fn verify_cmd(cli: &Cli) -> Result<(), Exit> {
    let mut config = SuiteConfig::default();
    config.max_m = cli.m.unwrap_or(config.max_m);
    config.max_l = cli.l.unwrap_or(config.max_l);
    config.max_k = cli.k.unwrap_or(config.max_k);
    if let Some(g) = cli.guard {
        config.max_work = g;
    }
    let report = run_lemma_suite(&config).map_err(anyhow::Error::from)?;
    let text = if cli.json {
        let mut v = serde_json::to_value(&report).expect("reports serialize");
        if let Value::Object(o) = &mut v {
            o.insert("schema_version".into(), json!(SCHEMA_VERSION));
            o.insert("command".into(), json!("verify"));
        }
        to_json_text(&v)
    } else {
        let mut s = String::new();
        for l in &report.lemmas {
            s.push_str(&format!(
                "{} {}: {} checked, {} violations\n",
                if l.passed() { "ok  " } else { "FAIL" },
                l.name,
                l.checked,
                l.violations
            ));
        }
        s
    };
    finish(cli, report.passed, text)
}

fn finish(cli: &Cli, ok: bool, text: String) -> Result<(), Exit> {
    cli.write_output(&text)?;
    if ok {
        Ok(())
    } else {
        Err(Exit {
            code: 1,
            report: None,
            message: "verification failed".into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Encode { message } => encode(&cli, message.as_deref()),
        Command::Decode => decode(&cli),
        Command::Simulate => simulate_cmd(&cli),
        Command::Bounds => bounds_cmd(&cli),
        Command::Verify => verify_cmd(&cli),
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(r) = &e.report {
                let _ = cli.write_output(&to_json_text(r));
            }
            eprintln!("setecc: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
