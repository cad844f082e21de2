//! Command dispatch for the `strandalg` binary.
//!
//! Exit codes: 0 on success, 1 when a verification or comparison fails,
//! 2 on input errors (unreadable files, parse errors, violated
//! preconditions).

use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};

use crate::algebra::{AlgebraContext, IdealPresentation};
use crate::dsl::{parse_element, parse_spec, SpecFile};
use crate::primitives::{enumerate_primitive_cycles, nerve_partition, NervePartition, PrimitiveCycleSet};
use crate::relations::{check_biserial, check_special_pair};
use crate::report::peirce_report;
use crate::verifier::{truncation_dimension_check, verify_string_algebra};

#[derive(Parser)]
#[command(
    name = "strandalg",
    version,
    about = "String algebras from quivers with zero-relations over truncated regular local rings"
)]
pub struct Cli {
    /// Override the truncation caps as `L,D` (wins over the model block and
    /// the STRANDALG_CAPS environment variable)
    #[arg(long, global = true, value_name = "L,D")]
    caps: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a spec file and check the biserial and special-pair conditions
    Check { file: PathBuf },
    /// Enumerate the primitive cycles
    Primitives { file: PathBuf },
    /// Print the nerve partition of the primitive vertices
    Nerve { file: PathBuf },
    /// Print the generators of the construction's ideal
    Ideal {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Reduce an element expression to its normal form in the quotient
    Reduce {
        file: PathBuf,
        /// Expression such as "s1*e(1) - path(a*y*x)"
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the full string-algebra verification suite
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare truncation dimensions at level d (equicharacteristic models)
    Truncdim { file: PathBuf, d: usize },
    /// Print the Peirce-decomposition report
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// An unusable input; verification failures exit with code 1 instead.
struct Failure(String);

impl Failure {
    fn code(&self) -> i32 {
        2
    }

    fn message(&self) -> &str {
        &self.0
    }
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure(e.to_string())
}

fn load(path: &FsPath) -> Result<SpecFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn caps_override(flag: &Option<String>) -> Result<Option<(usize, usize)>, Failure> {
    let raw = match flag {
        Some(s) => Some(s.clone()),
        None => std::env::var("STRANDALG_CAPS").ok(),
    };
    let Some(raw) = raw else { return Ok(None) };
    let parts: Vec<&str> = raw.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| input_err(format!("cannot parse caps `{raw}`; expected `L,D`")))
    };
    match parts.as_slice() {
        [l, d] => Ok(Some((parse(l)?, parse(d)?))),
        _ => Err(input_err(format!("cannot parse caps `{raw}`; expected `L,D`"))),
    }
}

struct Pipeline {
    spec: SpecFile,
    pcs: PrimitiveCycleSet,
    partition: NervePartition,
    ctx: AlgebraContext,
    ideal: IdealPresentation,
}

fn pipeline(spec: SpecFile, caps: Option<(usize, usize)>) -> Result<Pipeline, Failure> {
    let pcs = enumerate_primitive_cycles(&spec.quiver, &spec.zset).map_err(input_err)?;
    let partition = nerve_partition(&spec.quiver, &pcs);
    let (model, len_cap) = spec
        .resolve_model(partition.block_count(), caps)
        .map_err(input_err)?;
    let ctx = AlgebraContext::new(spec.quiver.clone(), model, len_cap);
    let ideal = ctx
        .ideal_generators(&spec.zset, &pcs, &partition)
        .map_err(input_err)?;
    Ok(Pipeline {
        spec,
        pcs,
        partition,
        ctx,
        ideal,
    })
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    let caps = caps_override(&cli.caps)?;
    match &cli.command {
        Command::Check { file } => {
            let spec = load(file)?;
            let mut ok = true;
            match check_biserial(&spec.quiver) {
                Ok(()) => println!("biserial: ok"),
                Err(v) => {
                    ok = false;
                    println!(
                        "biserial: FAIL (vertex {} meets more than 2 arrows on one side)",
                        spec.quiver.vertex_name(v)
                    );
                }
            }
            let verdict = check_special_pair(&spec.quiver, &spec.zset);
            if verdict.special {
                println!("special pair: ok");
            } else {
                ok = false;
                for w in &verdict.witnesses {
                    println!("special pair: FAIL ({})", w.render(&spec.quiver));
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Primitives { file } => {
            let spec = load(file)?;
            let pcs = enumerate_primitive_cycles(&spec.quiver, &spec.zset).map_err(input_err)?;
            for c in pcs.cycles() {
                println!(
                    "{} (at {})",
                    c.render(&spec.quiver),
                    spec.quiver.vertex_name(c.incidence())
                );
            }
            Ok(0)
        }
        Command::Nerve { file } => {
            let spec = load(file)?;
            let pcs = enumerate_primitive_cycles(&spec.quiver, &spec.zset).map_err(input_err)?;
            let partition = nerve_partition(&spec.quiver, &pcs);
            println!("{}", partition.render(&spec.quiver));
            Ok(0)
        }
        Command::Ideal { file, json } => {
            let p = pipeline(load(file)?, caps)?;
            if *json {
                let value = p.ideal.to_json(&p.ctx.quiver, &p.ctx.model, p.ctx.len_cap);
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                for r in p.ideal.zset().relations() {
                    println!("z: {}", r.render(&p.ctx.quiver));
                }
                for g in p.ideal.v_generators() {
                    let sigma: Vec<String> =
                        g.sigma.iter().map(|c| c.render(&p.ctx.quiver)).collect();
                    println!(
                        "v: {}*e({}) - ({})",
                        p.ctx.model.var_names()[g.s_index - 1],
                        p.ctx.quiver.vertex_name(g.vertex),
                        sigma.join(" + ")
                    );
                }
                for g in p.ideal.notv_generators() {
                    println!(
                        "notv: {}*e({})",
                        p.ctx.model.var_names()[g.s_index - 1],
                        p.ctx.quiver.vertex_name(g.vertex)
                    );
                }
            }
            Ok(0)
        }
        Command::Reduce { file, expr, json } => {
            let p = pipeline(load(file)?, caps)?;
            let element = parse_element(expr, &p.ctx).map_err(input_err)?;
            let nf = p.ctx.reduce(&element, &p.ideal);
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&p.ctx.to_json(&nf)).expect("json")
                );
            } else {
                println!("{}", p.ctx.render(&nf));
                println!("caps: L={} D={}", p.ctx.len_cap, p.ctx.model.deg_cap());
            }
            Ok(0)
        }
        Command::Verify { file, json } => {
            let spec = load(file)?;
            // verification reports non-special pairs instead of erroring
            let block_count = match enumerate_primitive_cycles(&spec.quiver, &spec.zset) {
                Ok(pcs) => nerve_partition(&spec.quiver, &pcs).block_count(),
                Err(_) => 0,
            };
            let (model, len_cap) = spec
                .resolve_model(block_count, caps)
                .map_err(input_err)?;
            let report = verify_string_algebra(&spec.quiver, &spec.zset, &model, len_cap);
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("json")
                );
            } else {
                println!("{}", report.render());
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Truncdim { file, d } => {
            let p = pipeline(load(file)?, caps)?;
            let check = truncation_dimension_check(
                &p.spec.quiver,
                &p.spec.zset,
                &p.ctx.model,
                &p.ideal,
                *d,
                p.ctx.len_cap,
            )
            .map_err(input_err)?;
            println!(
                "d={} lhs={} rhs={} equal={}",
                check.d, check.lhs_dim, check.rhs_dim, check.equal
            );
            Ok(if check.equal { 0 } else { 1 })
        }
        Command::Report { file, json } => {
            let p = pipeline(load(file)?, caps)?;
            let report = peirce_report(&p.ctx, &p.ideal, &p.pcs);
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json(&p.ctx)).expect("json")
                );
            } else {
                println!("{}", report.render(&p.ctx));
            }
            let _ = &p.partition;
            Ok(0)
        }
    }
}
