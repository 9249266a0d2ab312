//! Command-line harness: quiver ingestion, configuration, computation
//! commands, verification suites, and JSON reporting.
//!
//! Exit codes: 0 on success, 1 when an identity check fails, 2 on
//! configuration or parse errors.

use clap::{Parser, Subcommand, ValueEnum};
use necklace_bv::grading::Parity;
use necklace_bv::necklace::NecklaceOps;
use necklace_bv::quiver::{Quiver, VertexId};
use necklace_bv::rat::{format_rat, parse_rat, Rat};
use necklace_bv::report::IdentityReport;
use necklace_bv::superlin::{parse_dims_spec, IotaData, SuperSpace};
use necklace_bv::symbv::{HbarParam, SymBv};
use necklace_bv::tracemap::TraceContext;
use necklace_bv::verify::{
    verify_axioms, verify_bv_square_necklace, verify_bv_square_rep, verify_commute,
    verify_pairing, verify_theorem, SampleConfig,
};
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "necklace-bv",
    about = "Graded necklace Lie bialgebras of quivers, their BV operators, \
             and the supertrace morphism to the intertwining representation variety",
    version
)]
struct Cli {
    /// Quiver file (`vertices: ...` then `arrow <name> <src> <tgt>` lines)
    #[arg(long, global = true, value_name = "FILE")]
    quiver: Option<String>,

    /// Grading parameter
    #[arg(long, global = true, default_value = "0", value_parser = ["0", "1"])]
    p: String,

    /// BV parameter hbar as a rational `P/Q`
    #[arg(long, global = true, default_value = "1/2", value_name = "P/Q")]
    hbar: String,

    /// Graded dimensions per vertex, e.g. `v=1|1,w=2|2` (default 1|1 each)
    #[arg(long, global = true, value_name = "v=n|m,...")]
    dims: Option<String>,

    /// `default` or a path to an exact-rational iota matrix file
    #[arg(long, global = true, default_value = "default", value_name = "default|FILE")]
    iota: String,

    /// PRNG seed for the verifier suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trials per identity
    #[arg(long, global = true, default_value_t = 200)]
    trials: u64,

    /// Maximum sampled/accepted path length
    #[arg(long = "max-len", global = true, default_value_t = 6)]
    max_len: usize,

    /// Write the JSON report to this file
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Necklace bracket of two sums, e.g. `bracket "a a" "~a ~a"`
    Bracket { x: String, y: String },
    /// Necklace cobracket of a sum
    Cobracket { x: String },
    /// BV operator applied to an element, e.g. `bvdelta "1 * (a a) (~a ~a)"`
    Bvdelta { e: String },
    /// Trace morphism of a necklace sum
    Phi { x: String },
    /// Run a verification suite
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Axioms,
    Bvsquare,
    Pairing,
    Commute,
    Theorem,
}

struct ConfigFailure(String);

impl<E: std::fmt::Display> From<E> for ConfigFailure {
    fn from(e: E) -> Self {
        ConfigFailure(e.to_string())
    }
}

struct Session {
    quiver: necklace_bv::quiver::DoubledQuiver,
    p: Parity,
    hbar: Rat,
    dims: Vec<(usize, usize)>,
    iota_source: String,
    seed: u64,
    trials: u64,
    max_len: usize,
}

impl Session {
    fn build(cli: &Cli) -> Result<Session, ConfigFailure> {
        let quiver_path = cli
            .quiver
            .as_deref()
            .ok_or_else(|| ConfigFailure("--quiver FILE is required".into()))?;
        let text = std::fs::read_to_string(quiver_path)
            .map_err(|e| ConfigFailure(format!("cannot read `{quiver_path}`: {e}")))?;
        let quiver = Quiver::parse(&text)?;
        if quiver.vertex_count() == 0 {
            return Err(ConfigFailure("quiver has no vertices".into()));
        }
        let p = if cli.p == "1" { Parity::ODD } else { Parity::EVEN };
        let hbar = parse_rat(&cli.hbar).map_err(|e| ConfigFailure(format!("--hbar: {e}")))?;
        if p.is_odd() {
            HbarParam::new(hbar.clone(), p)
                .and_then(|h| h.iota_scalar())
                .map_err(|e| ConfigFailure(format!("hbar: {e}")))?;
        }
        let space = parse_dims_spec(&quiver, cli.dims.as_deref())?;
        let dims: Vec<(usize, usize)> = (0..quiver.vertex_count())
            .map(|i| {
                let v = VertexId(i);
                (space.even_dim(v), space.odd_dim(v))
            })
            .collect();
        if !p.is_odd() {
            for (i, (n, m)) in dims.iter().enumerate() {
                if n != m {
                    return Err(ConfigFailure(format!(
                        "p=0 requires equal even and odd dimensions; vertex `{}` has {n}|{m}",
                        quiver.vertex_name(VertexId(i))
                    )));
                }
            }
        }
        Ok(Session {
            quiver: quiver.double(p),
            p,
            hbar,
            dims,
            iota_source: cli.iota.clone(),
            seed: cli.seed,
            trials: cli.trials,
            max_len: cli.max_len,
        })
    }

    fn params(&self) -> Result<HbarParam, ConfigFailure> {
        HbarParam::new(self.hbar.clone(), self.p)
            .map_err(|e| ConfigFailure(format!("hbar: {e}")))
    }

    fn space(&self) -> SuperSpace {
        SuperSpace::new(self.dims.clone())
    }

    fn iota(&self, space: &SuperSpace) -> Result<IotaData, ConfigFailure> {
        let names = |v: VertexId| self.quiver.base().vertex_name(v).to_owned();
        if self.iota_source == "default" {
            let params = self.params()?;
            if self.p.is_odd() {
                let scalar = params
                    .iota_scalar()
                    .map_err(|e| ConfigFailure(format!("hbar: {e}")))?;
                Ok(IotaData::default_p1(space, names, scalar)?)
            } else {
                Ok(IotaData::default_p0(space, names, params.lambda())?)
            }
        } else {
            let text = std::fs::read_to_string(&self.iota_source)
                .map_err(|e| ConfigFailure(format!("cannot read `{}`: {e}", self.iota_source)))?;
            Ok(IotaData::parse_file(&text, &self.quiver, space, self.p)?)
        }
    }

    fn dims_string(&self) -> String {
        (0..self.quiver.vertex_count())
            .map(|i| {
                format!(
                    "{}={}|{}",
                    self.quiver.base().vertex_name(VertexId(i)),
                    self.dims[i].0,
                    self.dims[i].1
                )
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    fn config_json(&self) -> serde_json::Value {
        json!({
            "quiver": self.quiver.base().emit(),
            "p": if self.p.is_odd() { 1 } else { 0 },
            "hbar": format_rat(&self.hbar),
            "dims": self.dims_string(),
            "iota": self.iota_source,
            "seed": self.seed,
            "trials": self.trials,
            "max_len": self.max_len,
        })
    }

    fn check_word_lengths(
        &self,
        sum: &necklace_bv::necklace::NecklaceSum,
    ) -> Result<(), ConfigFailure> {
        necklace_bv::necklace::check_max_len(sum, self.max_len)?;
        Ok(())
    }
}

fn emit_report(
    session: &Session,
    json_path: Option<&str>,
    suites: &[IdentityReport],
) -> Result<bool, ConfigFailure> {
    let pass = suites.iter().all(|r| r.passed());
    for r in suites {
        println!(
            "{} {}::{} trials={} failures={}{}",
            if r.passed() { "ok  " } else { "FAIL" },
            r.name,
            r.identity,
            r.trials,
            r.failures,
            match &r.first_counterexample {
                Some(ce) => format!(" counterexample: {ce}"),
                None => String::new(),
            }
        );
    }
    let report = json!({
        "config": session.config_json(),
        "suites": suites,
        "pass": pass,
    });
    let rendered = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match json_path {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| ConfigFailure(format!("cannot write `{path}`: {e}")))?,
        None => print!("{rendered}"),
    }
    Ok(pass)
}

fn run(cli: &Cli) -> Result<ExitCode, ConfigFailure> {
    let session = Session::build(cli)?;
    let ops = NecklaceOps::new(&session.quiver);
    let sym = SymBv::new(ops.clone());
    match &cli.command {
        Command::Bracket { x, y } => {
            let xs = ops.parse_sum(x)?;
            let ys = ops.parse_sum(y)?;
            session.check_word_lengths(&xs)?;
            session.check_word_lengths(&ys)?;
            println!("{}", ops.format_sum(&ops.bracket(&xs, &ys)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Cobracket { x } => {
            let xs = ops.parse_sum(x)?;
            session.check_word_lengths(&xs)?;
            println!("{}", ops.format_tensor(&ops.cobracket(&xs)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bvdelta { e } => {
            let elem = sym.parse_element(e)?;
            let params = session.params()?;
            println!("{}", sym.format_element(&sym.bv_delta(&elem, &params)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Phi { x } => {
            let xs = ops.parse_sum(x)?;
            session.check_word_lengths(&xs)?;
            let space = session.space();
            let iota = session.iota(&space)?;
            let ctx = TraceContext::new(&session.quiver, space, iota)?;
            let phi = ctx.phi_sum(&xs)?;
            println!("{}", ctx.alg.format_poly(&session.quiver, &phi));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let params = session.params()?;
            let cfg = SampleConfig::new(session.seed, session.trials, session.max_len);
            let mut reports: Vec<IdentityReport> = Vec::new();
            let needs_ctx = matches!(
                suite,
                Suite::All | Suite::Bvsquare | Suite::Pairing | Suite::Commute | Suite::Theorem
            );
            let ctx = if needs_ctx {
                let space = session.space();
                let iota = session.iota(&space)?;
                Some(TraceContext::new(&session.quiver, space, iota)?)
            } else {
                None
            };
            if matches!(suite, Suite::All | Suite::Axioms) {
                reports.extend(verify_axioms(&sym, &params, &cfg));
            }
            if matches!(suite, Suite::All | Suite::Bvsquare) {
                reports.extend(verify_bv_square_necklace(&sym, &params, &cfg));
                reports.extend(verify_bv_square_rep(ctx.as_ref().unwrap(), &cfg));
            }
            if matches!(suite, Suite::All | Suite::Pairing) {
                reports.extend(verify_pairing(ctx.as_ref().unwrap(), &cfg));
            }
            if matches!(suite, Suite::All | Suite::Commute) {
                reports.extend(verify_commute(ctx.as_ref().unwrap(), &cfg));
            }
            if matches!(suite, Suite::All | Suite::Theorem) {
                reports.extend(verify_theorem(ctx.as_ref().unwrap(), &sym, &params, &cfg)?);
            }
            let pass = emit_report(&session, cli.json.as_deref(), &reports)?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(ConfigFailure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
