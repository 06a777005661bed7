//! Batch command-line tool for the simplicial operator calculus: word
//! normalization, presentation and instance verification, semidirect
//! decomposition, and the search over total orders.
//!
//! Exit codes: 0 success, 1 verification failures found, 2 usage or schema
//! errors.  All randomness flows from `--seed` (or `DOLDKAN_SEED`); repeated
//! runs with the same seed produce byte-identical output.

mod output;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use doldkan_core::dkengine::{
    decompose, decomposition_from_json, decomposition_to_json, reconstruct,
    verify_kernel_characterization, verify_replacement_projections, verify_unique_factorization,
};
use doldkan_core::explorer::{
    replay_witness, search_orders, summarize, SearchConfig, SearchMode,
};
use doldkan_core::opcalc::{
    map_to_word_delta, map_to_word_fin, verify_presentations, word_to_map, OperatorWord,
};
use doldkan_core::orders::{
    linear_extensions, PartialOrderKind, TotalOrder, Variant,
};
use doldkan_core::report::{VerifyReport, Witness};
use doldkan_core::sgroup::{parse_instance_spec, AnyInstance, SGroup};
use doldkan_core::{with_instance, Error};

use output::{write_out, Envelope};

#[derive(Parser)]
#[command(name = "doldkan", version, about = "Simplicial operator calculus and semidirect-product decompositions")]
struct Cli {
    /// Worker threads for parallel sweeps; output is identical regardless.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed for all randomized checks.
    #[arg(long, global = true, env = "DOLDKAN_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an operator word to its function table and a canonical word.
    Normalize(NormalizeArgs),
    /// Run a verification suite; exits 1 when any check fails.
    Verify {
        #[command(subcommand)]
        scope: VerifyScope,
    },
    /// Decompose an element along a total order.
    Decompose(DecomposeArgs),
    /// Multiply the components of a decomposition back together.
    Reconstruct(ReconstructArgs),
    /// Classify total orders by decomposition behavior (JSON lines).
    Search(SearchArgs),
    /// Re-run a recorded failure witness from its stored inputs.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct NormalizeArgs {
    /// Word JSON: a list of {"kind","i","level"} generators, outermost
    /// first; a file path, '-' for stdin, or inline JSON.
    input: String,
    /// Level of the identity word when the list is empty.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum VerifyScope {
    /// Check every relation row of both presentation tables against the
    /// function oracle.
    Presentations {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Functoriality, homomorphism and Moore boundary checks for one
    /// instance (plus the chain round trip on chain-complex instances).
    Instance {
        #[arg(long)]
        instance: String,
        /// Largest level exercised.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
    },
    /// Invariance of Moore chains and cycles under the permutation action,
    /// the symmetric chain condition, and the replacement projections.
    Symmetric {
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Unique factorization and kernel characterization for one or more
    /// total orders.
    Sdp {
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "simplicial", value_parser = parse_variant)]
        variant: Variant,
        /// "binary", "extensions:lp", "extensions:incl", inline JSON, or
        /// @file.
        #[arg(long, default_value = "binary")]
        order: String,
        #[arg(long, default_value_t = 50)]
        trials: u64,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    instance: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "simplicial", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value = "binary")]
    order: String,
    /// Accept orders that do not extend the partial order.
    #[arg(long)]
    force: bool,
    /// Element JSON; file path, '-' for stdin, or inline JSON.
    input: String,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    instance: String,
    /// Decomposition JSON; file path, '-' for stdin, or inline JSON.
    input: String,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    instance: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "simplicial", value_parser = parse_variant)]
    variant: Variant,
    /// "exhaustive" (all orders, n <= 3) or "sample".
    #[arg(long, default_value = "sample")]
    mode: String,
    /// Number of sampled orders in sample mode.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Trials per order for the sampled probes.
    #[arg(long, default_value_t = 20)]
    trials: u64,
}

#[derive(Args)]
struct ReplayArgs {
    /// Witness JSON; file path, '-' for stdin, or inline JSON.
    input: String,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "simplicial" => Ok(Variant::Simplicial),
        "symmetric" => Ok(Variant::Symmetric),
        other => Err(format!("unknown variant {other:?} (simplicial or symmetric)")),
    }
}

/// Reads a positional input: a file path, '-' for stdin, or inline JSON.
fn read_input(input: &str) -> anyhow::Result<String> {
    if input == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)?;
        return Ok(buf);
    }
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(input.to_string());
    }
    Ok(std::fs::read_to_string(input)?)
}

/// Expands `gamma:@file` style specs before handing them to the parser.
fn load_instance(spec: &str) -> Result<AnyInstance, Error> {
    if let Some(path) = spec.strip_prefix("gamma:@") {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))?;
        return parse_instance_spec(&format!("gamma:{body}"));
    }
    parse_instance_spec(spec)
}

enum OrderSpec {
    Binary,
    Extensions(PartialOrderKind),
    Explicit(Box<TotalOrder>),
}

fn parse_order_spec(s: &str) -> Result<OrderSpec, Error> {
    match s {
        "binary" => Ok(OrderSpec::Binary),
        "extensions:lp" => Ok(OrderSpec::Extensions(PartialOrderKind::Lp)),
        "extensions:incl" => Ok(OrderSpec::Extensions(PartialOrderKind::Incl)),
        other => {
            let body = if let Some(path) = other.strip_prefix('@') {
                std::fs::read_to_string(path)
                    .map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))?
            } else if other.trim_start().starts_with('{') {
                other.to_string()
            } else {
                return Err(Error::Schema(format!("unknown order spec {other:?}")));
            };
            let order: TotalOrder =
                serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?;
            Ok(OrderSpec::Explicit(Box::new(order)))
        }
    }
}

fn resolve_orders(spec: &OrderSpec, n: usize, variant: Variant) -> Result<Vec<TotalOrder>, Error> {
    match spec {
        OrderSpec::Binary => Ok(vec![TotalOrder::binary(n, variant)]),
        OrderSpec::Extensions(kind) => linear_extensions(n, variant, *kind, None, None),
        OrderSpec::Explicit(order) => Ok(vec![(**order).clone()]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the pool may already exist under a test harness.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let seed = cli.seed.unwrap_or(0);
    match run(cli, seed) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            // Everything the user can mis-specify is a usage error.
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, seed: u64) -> anyhow::Result<u8> {
    match cli.command {
        Command::Normalize(args) => cmd_normalize(&cli.out, seed, args),
        Command::Verify { scope } => cmd_verify(&cli.out, seed, scope),
        Command::Decompose(args) => cmd_decompose(&cli.out, seed, args),
        Command::Reconstruct(args) => cmd_reconstruct(&cli.out, seed, args),
        Command::Search(args) => cmd_search(&cli.out, seed, args),
        Command::Replay(args) => cmd_replay(&cli.out, seed, args),
    }
}

#[derive(Serialize)]
struct NormalizeConfig<'a> {
    input: &'a str,
    n: Option<usize>,
}

fn cmd_normalize(out: &Option<PathBuf>, seed: u64, args: NormalizeArgs) -> anyhow::Result<u8> {
    let body = read_input(&args.input)?;
    let raw: serde_json::Value = serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?;
    let word = match raw.as_array() {
        Some(list) if list.is_empty() => {
            let n = args.n.ok_or_else(|| {
                Error::Schema("an empty word needs --n for its level".into())
            })?;
            OperatorWord::identity(n)
        }
        Some(_) => serde_json::from_value(raw).map_err(|e| Error::Schema(e.to_string()))?,
        None => return Err(Error::Schema("word JSON must be a list of generators".into()).into()),
    };
    let map = word_to_map(&word);
    let (canonical, kind) = if map.is_monotone() {
        (map_to_word_delta(&map)?, "delta")
    } else {
        (map_to_word_fin(&map)?, "fin")
    };
    debug_assert_eq!(word_to_map(&canonical), map);
    let config = NormalizeConfig { input: &args.input, n: args.n };
    let envelope = Envelope::new(
        "doldkan/normalize/v1",
        "normalize",
        seed,
        &config,
        serde_json::json!({
            "map": map,
            "canonical": canonical,
            "canonical_kind": kind,
        }),
    );
    write_out(out, &envelope.render())?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyConfig {
    scope: String,
    instance: Option<String>,
    n: usize,
    variant: Option<Variant>,
    order: Option<String>,
    trials: u64,
    seed: u64,
}

fn cmd_verify(out: &Option<PathBuf>, seed: u64, scope: VerifyScope) -> anyhow::Result<u8> {
    match scope {
        VerifyScope::Presentations { n_max } => {
            let report = verify_presentations(n_max);
            let ok = report.all_pass();
            let config = VerifyConfig {
                scope: "presentations".into(),
                instance: None,
                n: n_max,
                variant: None,
                order: None,
                trials: 0,
                seed,
            };
            let envelope = Envelope::new(
                "doldkan/verify/v1",
                "verify presentations",
                seed,
                &config,
                serde_json::json!({
                    "report": report,
                    "failures": report.total_failures,
                }),
            );
            write_out(out, &envelope.render())?;
            Ok(if ok { 0 } else { 1 })
        }
        VerifyScope::Instance { instance, n, trials } => {
            let any = load_instance(&instance)?;
            let mut report =
                with_instance!(&any, |inst| doldkan_core::sgroup::verify_instance(
                    inst, n, trials, seed
                ))?;
            if let AnyInstance::Gamma(gamma) = &any {
                let mut chain_check =
                    doldkan_core::report::CheckReport::new("chain_complex_round_trip");
                for level in 0..=n.max(gamma.chain().length() + 1) {
                    let data = gamma.moore_data(level);
                    chain_check.record(data.round_trips(), || Witness {
                        instance: gamma.instance_id(),
                        n: level,
                        check: "chain_complex_round_trip".into(),
                        seed,
                        trial: 0,
                        order: None,
                        inputs: serde_json::json!(null),
                        expected: serde_json::json!(data.expected_order.to_string()),
                        got: serde_json::json!(data.kernel_order.to_string()),
                    });
                }
                report.checks.push(chain_check);
            }
            finish_verify(out, seed, "verify instance", VerifyConfig {
                scope: "instance".into(),
                instance: Some(instance),
                n,
                variant: None,
                order: None,
                trials,
                seed,
            }, report)
        }
        VerifyScope::Symmetric { instance, n, trials } => {
            let any = load_instance(&instance)?;
            let report = with_instance!(&any, |inst| -> Result<VerifyReport, Error> {
                let mut report = VerifyReport::new(vec![]);
                for level in 0..=n {
                    report.extend(doldkan_core::sgroup::verify_symmetric_invariance(
                        inst, level, trials, seed,
                    )?);
                    report.extend(doldkan_core::sgroup::verify_symmetric_chain_condition(
                        inst, level, trials, seed,
                    )?);
                    if level >= 1 {
                        report.extend(verify_replacement_projections(inst, level, trials, seed)?);
                    }
                }
                Ok(report)
            })?;
            finish_verify(out, seed, "verify symmetric", VerifyConfig {
                scope: "symmetric".into(),
                instance: Some(instance),
                n,
                variant: None,
                order: None,
                trials,
                seed,
            }, report)
        }
        VerifyScope::Sdp { instance, n, variant, order, trials } => {
            let any = load_instance(&instance)?;
            let spec = parse_order_spec(&order)?;
            let orders = resolve_orders(&spec, n, variant)?;
            let report = with_instance!(&any, |inst| -> Result<VerifyReport, Error> {
                let mut report = VerifyReport::new(vec![]);
                for total in &orders {
                    report.extend(verify_unique_factorization(
                        inst, n, total, variant, trials, seed,
                    )?);
                    for k in 0..total.len() {
                        report.extend(verify_kernel_characterization(
                            inst, n, total, variant, k, trials, seed,
                        )?);
                    }
                }
                Ok(report)
            })?;
            finish_verify(out, seed, "verify sdp", VerifyConfig {
                scope: "sdp".into(),
                instance: Some(instance),
                n,
                variant: Some(variant),
                order: Some(order),
                trials,
                seed,
            }, report)
        }
    }
}

fn finish_verify(
    out: &Option<PathBuf>,
    seed: u64,
    command: &str,
    config: VerifyConfig,
    report: VerifyReport,
) -> anyhow::Result<u8> {
    let merged = merge_checks(report);
    let failures = merged.total_failures();
    let envelope = Envelope::new(
        "doldkan/verify/v1",
        command,
        seed,
        &config,
        serde_json::json!({
            "checks": merged.checks,
            "total_checks": merged.total_checks(),
            "failures": failures,
        }),
    );
    write_out(out, &envelope.render())?;
    Ok(if failures == 0 { 0 } else { 1 })
}

/// Collapses same-named check tallies accumulated across levels or orders.
fn merge_checks(report: VerifyReport) -> VerifyReport {
    let mut merged: Vec<doldkan_core::report::CheckReport> = Vec::new();
    for check in report.checks {
        match merged.iter_mut().find(|c| c.name == check.name) {
            Some(existing) => existing.merge(check),
            None => merged.push(check),
        }
    }
    VerifyReport::new(merged)
}

#[derive(Serialize)]
struct DecomposeConfig {
    instance: String,
    n: usize,
    variant: Variant,
    order: String,
    force: bool,
    seed: u64,
}

fn cmd_decompose(out: &Option<PathBuf>, seed: u64, args: DecomposeArgs) -> anyhow::Result<u8> {
    let any = load_instance(&args.instance)?;
    let spec = parse_order_spec(&args.order)?;
    let orders = resolve_orders(&spec, args.n, args.variant)?;
    let [order] = orders.as_slice() else {
        return Err(Error::Schema(
            "decompose needs a single order, not an extension family".into(),
        )
        .into());
    };
    let body = read_input(&args.input)?;
    let element: serde_json::Value = serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?;
    let config = DecomposeConfig {
        instance: args.instance.clone(),
        n: args.n,
        variant: args.variant,
        order: args.order.clone(),
        force: args.force,
        seed,
    };
    let payload = with_instance!(&any, |inst| -> Result<serde_json::Value, Error> {
        let g = inst.elem_from_json(args.n, &element)?;
        let dec = decompose(inst, args.n, &g, order, args.variant, args.force)?;
        Ok(decomposition_to_json(inst, &dec))
    })?;
    let envelope = Envelope::new(
        "doldkan/decomposition/v1",
        "decompose",
        seed,
        &config,
        serde_json::json!({ "decomposition": payload }),
    );
    write_out(out, &envelope.render())?;
    Ok(0)
}

#[derive(Serialize)]
struct ReconstructConfig {
    instance: String,
    seed: u64,
}

fn cmd_reconstruct(out: &Option<PathBuf>, seed: u64, args: ReconstructArgs) -> anyhow::Result<u8> {
    let any = load_instance(&args.instance)?;
    let body = read_input(&args.input)?;
    let doc: serde_json::Value = serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?;
    // Accept either a bare decomposition or a decompose output envelope.
    let dec_json = doc.get("decomposition").unwrap_or(&doc);
    let config = ReconstructConfig { instance: args.instance.clone(), seed };
    let payload = with_instance!(&any, |inst| -> Result<serde_json::Value, Error> {
        let dec = decomposition_from_json(inst, dec_json)?;
        let g = reconstruct(inst, &dec);
        Ok(inst.elem_to_json(dec.n(), &g))
    })?;
    let envelope = Envelope::new(
        "doldkan/element/v1",
        "reconstruct",
        seed,
        &config,
        serde_json::json!({ "element": payload }),
    );
    write_out(out, &envelope.render())?;
    Ok(0)
}

#[derive(Serialize)]
struct SearchCliConfig {
    instance: String,
    n: usize,
    variant: Variant,
    mode: String,
    count: usize,
    trials: u64,
    seed: u64,
}

fn cmd_search(out: &Option<PathBuf>, seed: u64, args: SearchArgs) -> anyhow::Result<u8> {
    let any = load_instance(&args.instance)?;
    let mode = match args.mode.as_str() {
        "exhaustive" => SearchMode::Exhaustive,
        "sample" => SearchMode::Sample { count: args.count },
        other => return Err(Error::Schema(format!("unknown search mode {other:?}")).into()),
    };
    let cfg = SearchConfig { n: args.n, variant: args.variant, mode, trials: args.trials, seed };
    let verdicts = with_instance!(&any, |inst| search_orders(inst, &cfg))?;
    let summary = summarize(&verdicts);
    let config = SearchCliConfig {
        instance: args.instance.clone(),
        n: args.n,
        variant: args.variant,
        mode: args.mode.clone(),
        count: args.count,
        trials: args.trials,
        seed,
    };
    let mut lines = String::new();
    for v in &verdicts {
        let mut value = serde_json::to_value(v).expect("verdict serializes");
        value["schema"] = serde_json::json!("doldkan/verdict/v1");
        lines.push_str(&serde_json::to_string(&value).expect("verdict serializes"));
        lines.push('\n');
    }
    let summary_env = Envelope::new(
        "doldkan/search-summary/v1",
        "search",
        seed,
        &config,
        serde_json::json!({ "summary": summary }),
    );
    lines.push_str(&serde_json::to_string(&summary_env).expect("summary serializes"));
    lines.push('\n');
    write_out(out, &lines)?;
    Ok(0)
}

#[derive(Serialize)]
struct ReplayConfig {
    seed: u64,
}

fn cmd_replay(out: &Option<PathBuf>, seed: u64, args: ReplayArgs) -> anyhow::Result<u8> {
    let body = read_input(&args.input)?;
    let raw: serde_json::Value =
        serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?;
    // Accept a single witness or a list of them.
    let witnesses: Vec<Witness> = if raw.is_array() {
        serde_json::from_value(raw).map_err(|e| Error::Schema(e.to_string()))?
    } else {
        vec![serde_json::from_value(raw).map_err(|e| Error::Schema(e.to_string()))?]
    };
    let mut reports = Vec::with_capacity(witnesses.len());
    for witness in &witnesses {
        let any = load_instance(&witness.instance)?;
        reports.push(with_instance!(&any, |inst| replay_witness(inst, witness))?);
    }
    let payload = match reports.as_slice() {
        [single] => serde_json::json!({ "replay": single }),
        _ => serde_json::json!({ "replays": reports }),
    };
    let envelope = Envelope::new(
        "doldkan/replay/v1",
        "replay",
        seed,
        &ReplayConfig { seed },
        payload,
    );
    write_out(out, &envelope.render())?;
    Ok(0)
}
