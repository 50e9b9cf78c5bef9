// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use coinv_core::pipelines::{composed_shift, simplified_shift, simplified_shift_inv};
use coinv_core::qpoly::{q_binomial, q_multinomial};
use coinv_core::trace::Tracer;
use coinv_core::verify::{all_pass, check_bijection, check_identity, sweep, BijectionId, Bounds, IdentityId, Report};
use coinv_core::words::{classify, enumerate, p_max, p_one, Class, Freqs, Letter, Params, Position, Word};
use serde_json::json;

/// Coinversion statistics, q-analogs and bijection checks on words.
#[derive(Parser)]
#[command(name = "coinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print coinv of a word.
    Coinv { word: Word },
    /// Print coinv, p_1, p_n, k, L, N and the class of a word.
    Stats {
        word: Word,
        /// Top letter; defaults to the largest letter present.
        #[arg(long)]
        n: Option<Letter>,
    },
    /// Print the Gaussian binomial [n choose k]_q.
    Qbin {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Print the q-multinomial [n; k1, k2, ...]_q.
    Qmulti {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(value_delimiter = ',', allow_negative_numbers = true)]
        parts: Vec<i64>,
    },
    /// List a rearrangement class and its generating function.
    Enumerate {
        /// Letter counts starting at letter 0.
        #[arg(long, value_delimiter = ',', required = true)]
        freqs: Vec<usize>,
        /// Filter such as p1=2,pn=3,class=gt.
        #[arg(long)]
        pred: Option<String>,
        /// Top letter for the filter; defaults to the largest letter present.
        #[arg(long)]
        n: Option<Letter>,
    },
    /// Check one identity or one bijection.
    Verify(VerifyArgs),
    /// Check everything within the given bounds.
    Sweep {
        #[arg(long = "max-n", default_value_t = 3)]
        max_n: Letter,
        #[arg(long = "max-N")]
        max_len: usize,
        #[arg(long = "min-n", default_value_t = 3)]
        min_n: Letter,
        /// Largest total count of middle letters when n > 3.
        #[arg(long = "max-a")]
        max_middle: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Show the weight-shifting bijection step by step.
    Trace {
        #[arg(long)]
        word: Word,
        #[arg(long)]
        n: Option<Letter>,
        /// Run the inverse map; the word must lie in W_(k+1)^<=.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "bijection", required_unless_present = "bijection")]
    identity: Option<String>,
    #[arg(long)]
    bijection: Option<String>,
    #[arg(long = "N")]
    len: Option<usize>,
    #[arg(long = "L")]
    marked: usize,
    #[arg(long = "k")]
    tops: usize,
    #[arg(long = "i")]
    one_pos: Option<usize>,
    #[arg(long = "j")]
    top_pos: Option<usize>,
    /// Middle-letter counts a_2, ..., a_(n-1).
    #[arg(long = "a", value_delimiter = ',')]
    middle: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    n: Letter,
    #[arg(long)]
    json: bool,
}

/// Failures that map to exit status 1 rather than 2.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<VerificationFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn top_of(word: &Word, n: Option<Letter>) -> Result<Letter> {
    match n.or_else(|| word.max_letter()) {
        Some(top) => Ok(top),
        None => bail!("cannot infer the top letter of an empty word; pass --n"),
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Coinv { word } => println!("{}", word.coinv()),
        Command::Stats { word, n } => stats(&word, top_of(&word, n)?)?,
        Command::Qbin { n, k } => println!("{}", q_binomial(n, k)?),
        Command::Qmulti { n, parts } => println!("{}", q_multinomial(n, &parts)?),
        Command::Enumerate { freqs, pred, n } => enumerate_cmd(freqs, pred.as_deref(), n)?,
        Command::Verify(args) => verify_cmd(args)?,
        Command::Sweep {
            max_n,
            max_len,
            min_n,
            max_middle,
            json,
            sequential,
        } => {
            let mut bounds = Bounds::new(max_n, max_len);
            bounds.min_n = min_n;
            if let Some(m) = max_middle {
                bounds = bounds.with_max_middle(m);
            }
            if sequential {
                bounds = bounds.sequential();
            }
            let reports = sweep(&bounds);
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for r in &reports {
                    println!("{r}");
                }
                let failed = reports.iter().filter(|r| !r.passed()).count();
                println!("{} reports, {failed} failed", reports.len());
            }
            if !all_pass(&reports) {
                return Err(VerificationFailed.into());
            }
        }
        Command::Trace { word, n, inverse, json } => trace_cmd(&word, top_of(&word, n)?, inverse, json)?,
    }
    Ok(())
}

fn stats(word: &Word, top: Letter) -> Result<()> {
    if top < 3 {
        bail!("top letter must be at least 3, got {top}");
    }
    if let Some(bad) = word.letters().iter().find(|&&x| x == 0 || x > top) {
        bail!("letter {bad} outside the alphabet 1..={top}");
    }
    let k = word.count(top);
    let l = word.count(1) + k;
    println!("coinv {}", word.coinv());
    println!("p_1 {}", p_one(word, top));
    println!("p_{top} {}", p_max(word, top));
    println!("k {k}");
    println!("L {l}");
    println!("N {}", word.len());
    println!("class {}", classify(word, top));
    Ok(())
}

struct Pred {
    one_pos: Option<usize>,
    top_pos: Option<usize>,
    class: Option<Class>,
}

fn parse_pred(s: &str) -> Result<Pred> {
    let mut pred = Pred {
        one_pos: None,
        top_pos: None,
        class: None,
    };
    for clause in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let (key, value) = clause
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got {clause:?}"))?;
        match key.trim() {
            "p1" => pred.one_pos = Some(value.trim().parse().with_context(|| format!("bad p1 in {clause:?}"))?),
            "pn" => pred.top_pos = Some(value.trim().parse().with_context(|| format!("bad pn in {clause:?}"))?),
            "class" => {
                pred.class = Some(match value.trim() {
                    "gt" => Class::Greater,
                    "le" => Class::LessEq,
                    other => bail!("class must be gt or le, got {other:?}"),
                })
            }
            other => bail!("unknown predicate key {other:?}"),
        }
    }
    Ok(pred)
}

fn enumerate_cmd(freqs: Vec<usize>, pred: Option<&str>, n: Option<Letter>) -> Result<()> {
    let freqs = Freqs::new(freqs);
    let pred = pred.map(parse_pred).transpose()?;
    let top = n.or_else(|| freqs.counts().iter().rposition(|&c| c > 0).map(|l| l as Letter));
    let words = enumerate(&freqs)?;
    let keep = |w: &Word| match (&pred, top) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(p), Some(top)) => {
            p.one_pos.is_none_or(|i| p_one(w, top) == Position::Finite(i))
                && p.top_pos.is_none_or(|j| p_max(w, top) == Position::Finite(j))
                && p.class.is_none_or(|c| classify(w, top) == c)
        }
    };
    let mut poly = coinv_core::qpoly::QPoly::zero();
    for w in words.iter().filter(|w| keep(w)) {
        println!("{w} {}", w.coinv());
        poly.add_monomial(w.coinv() as usize)?;
    }
    println!("GF {poly}");
    Ok(())
}

fn verify_params(args: &VerifyArgs) -> Result<Params> {
    let middle = match (&args.middle, args.n) {
        (Some(a), _) => a.clone(),
        (None, 3) => {
            let len = args.len.ok_or_else(|| anyhow!("--N is required"))?;
            vec![len.checked_sub(args.marked).ok_or_else(|| anyhow!("L exceeds N"))?]
        }
        (None, _) => bail!("--a is required when n > 3"),
    };
    let mut params = Params::general(args.n, args.marked, args.tops, middle);
    if let Some(len) = args.len {
        if len != params.len {
            bail!("N = {len} but L + sum(a) = {}", params.len);
        }
    }
    params.one_pos = args.one_pos;
    params.top_pos = args.top_pos;
    Ok(params)
}

fn verify_cmd(args: VerifyArgs) -> Result<()> {
    let params = verify_params(&args)?;
    let report: Report = match (&args.identity, &args.bijection) {
        (Some(id), _) => check_identity(id.parse::<IdentityId>()?, &params)?,
        (None, Some(name)) => check_bijection(name.parse::<BijectionId>()?, &params)?,
        (None, None) => bail!("pass --identity or --bijection"),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{report}");
        println!("lhs {}", report.lhs);
        println!("rhs {}", report.rhs);
    }
    if !report.passed() {
        return Err(VerificationFailed.into());
    }
    Ok(())
}

fn trace_cmd(word: &Word, top: Letter, inverse: bool, json: bool) -> Result<()> {
    if inverse {
        let out = simplified_shift_inv(word, top)?;
        let trace = out.trace.expect("traced");
        if json {
            let doc = json!({"word": word, "n": top, "inverse": true, "simplified": trace, "output": out.word, "shift": out.tops});
            println!("{}", serde_json::to_string_pretty(&doc)?);
        } else {
            print!("{trace}");
            println!("w={} shift {}", out.word, out.tops);
        }
        return Ok(());
    }

    let mut composed = Tracer::on();
    let (composed_word, _) = composed_shift(word, top, &mut composed)?;
    let composed = composed.finish().expect("traced");
    let out = simplified_shift(word, top)?;
    let simplified = out.trace.expect("traced");
    if composed_word != out.word {
        bail!(
            "composed route gives {composed_word} but the simplified map gives {}",
            out.word
        );
    }
    if json {
        let doc = json!({
            "word": word,
            "n": top,
            "inverse": false,
            "composed": composed,
            "simplified": simplified,
            "output": out.word,
            "shift": out.tops,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("composed route (weight {})", composed.initial_weight);
        for step in &composed.steps {
            println!("  {step}");
        }
        println!("simplified route (weight {})", simplified.initial_weight);
        for step in &simplified.steps {
            println!("  {step}");
        }
        println!("w'={} shift {}", out.word, out.tops);
    }
    Ok(())
}
