use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use operad_forge_core::budget::Budget;
use operad_forge_core::conjectures::{
    check_conjecture1, check_conjecture2, check_cover, downset, poset_for_tree, Conj1Report,
    Conj1Witness, Conj2Witness, LabelSystem,
};
use operad_forge_core::lattice::block::{block_homology, FrontierStatus, DEFAULT_MAX_TOTAL};
use operad_forge_core::lattice::closure::{
    closure_check, ClosureBounds, ClosureMode, ClosureOperad, ClosureWitness,
    DEFAULT_MAX_CANDIDATES,
};
use operad_forge_core::lattice::matching::{matching_check, replay_matching, MatchingWitness};
use operad_forge_core::lattice::{count_paths, enumerate_paths, LatticePath};
use operad_forge_core::signatures::{BergerElement, TruncatedSignature};
use operad_forge_core::topology::{
    dismantle, milgram_poset, poset_homology_capped, HomologyReport,
};
use operad_forge_core::trees::LevelTree;
use operad_forge_core::vdgen::{generate_tilde, generate_tilde_in, generate_v, move_graph};
use operad_forge_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

pub const DEFAULT_MAX_POSET_SIZE: u128 = 1_000_000;
pub const DEFAULT_MAX_SIMPLICES: u128 = 100_000;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical label list V_d
    Vd {
        #[arg(long)]
        d: usize,
    },
    /// Auxiliary list for the level-l meets, in depth l+1 unless --d is given
    Tilde {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Every state reachable by elementary moves
    MoveGraph {
        #[arg(long)]
        d: usize,
    },
    /// Twist-compatibility of a label system
    Conj1 {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// Interval membership in the canonical list
    Conj2 {
        #[arg(long)]
        d: usize,
    },
    /// Cover of P^(d) by the principal downsets of V_d
    Cover {
        #[arg(long)]
        d: usize,
    },
    /// The poset P^(d), or the product poset attached to a (d+1)-tree
    Poset {
        #[arg(long)]
        d: usize,
        /// Tree in nested form, e.g. "[[[1],[1]]]"
        #[arg(long)]
        tree: Option<String>,
        /// Also search for a dismantling certificate
        #[arg(long)]
        dismantle: bool,
        #[command(flatten)]
        labels: LabelArgs,
    },
    /// The two-leaf Milgram poset M^n_2
    Milgram {
        #[arg(long)]
        n: usize,
        /// Accepted for symmetry with `poset`; homology is always reported
        #[arg(long)]
        homology: bool,
    },
    /// Enumerate lattice paths, or report parameters of a given path
    Paths {
        /// Argument degrees, comma separated
        #[arg(long = "in", value_delimiter = ',', required_unless_present = "path")]
        in_degrees: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        out: usize,
        /// Keep only paths in this block, e.g. "(121)"
        #[arg(long)]
        block: Option<String>,
        /// A path in JSON form; reports its parameters instead
        #[arg(long)]
        path: Option<String>,
    },
    /// Closure of an operad under composition, by exhaustive enumeration
    Closure {
        #[arg(long, value_enum, default_value_t = OperadKind::Lattice)]
        operad: OperadKind,
        /// Level of the classical operad L_{level,B}
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Depth of the label system for --operad seq
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[command(flatten)]
        labels: LabelArgs,
        #[arg(long)]
        max_leaves: Option<usize>,
        #[arg(long)]
        max_outer_leaves: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        max_candidates: Option<u128>,
    },
    /// Matching map m_level of a block
    Matching {
        #[arg(long)]
        block: String,
        #[arg(long, allow_negative_numbers = true)]
        level: i64,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Integer homology of a block at a fixed output degree
    BlockHomology {
        #[arg(long)]
        block: String,
        #[arg(long, default_value_t = 0)]
        out: usize,
        #[arg(long)]
        max_total: Option<usize>,
    },
    /// Replay the witness embedded in a failure report ("-" reads stdin)
    VerifyWitness { report: PathBuf },
}

#[derive(Debug, Clone, clap::Args)]
pub struct LabelArgs {
    /// Label-system file in JSON form; defaults to the built-in system
    #[arg(long)]
    system: Option<PathBuf>,
    /// Replace the labels at one level, e.g. "0=(121)|(121)"; repeatable,
    /// several labels separated by ';'
    #[arg(long = "replace-level")]
    replace: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OperadKind {
    Lattice,
    Seq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Full,
    Partial,
}

/// Caps and budget shared by every command.
pub struct Settings {
    pub format: Format,
    pub budget: Budget,
    pub max_poset_size: Option<u128>,
    pub max_simplices: Option<u128>,
    pub max_degree: Option<usize>,
    pub max_total: Option<usize>,
    pub max_candidates: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

pub struct Report {
    pub body: String,
    pub status: Status,
}

/// Command failures, split by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::SizeCap { .. } => Failure::Inconclusive(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn json_body<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn unsupported(command: &str, format: Format) -> Failure {
    usage(format!("{command} has no {} output", format.name()))
}

fn label_csv(labels: &[TruncatedSignature]) -> String {
    let mut out = String::from("index,label\n");
    for (i, x) in labels.iter().enumerate() {
        writeln!(out, "{},{x}", i + 1).unwrap();
    }
    out
}

fn label_system(d: usize, args: &LabelArgs) -> Result<LabelSystem, Failure> {
    let mut sys = match &args.system {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let sys: LabelSystem = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if sys.depth() != d {
                return Err(usage(format!(
                    "system has depth {}, expected {d}",
                    sys.depth()
                )));
            }
            sys
        }
        None => LabelSystem::builtin(d)?,
    };
    for entry in &args.replace {
        let (level, labels) = entry
            .split_once('=')
            .ok_or_else(|| usage(format!("--replace-level expects LEVEL=LABELS, got {entry}")))?;
        let level: usize = level
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad level in {entry}")))?;
        let labels = labels
            .split(';')
            .map(|t| TruncatedSignature::parse(t.trim(), d))
            .collect::<Result<Vec<_>, _>>()?;
        sys = sys.with_level(level, labels)?;
    }
    Ok(sys)
}

fn homology_json(h: &HomologyReport) -> Value {
    json!({
        "betti": h.betti(),
        "reduced_betti": h.reduced_betti(),
        "torsion": h.has_torsion(),
        "acyclic": h.is_acyclic(),
        "chain_ranks": h.generators,
    })
}

pub fn run(command: &Command, settings: &Settings) -> Outcome {
    let format = settings.format;
    match command {
        Command::Vd { d } => {
            let seq = generate_v(*d)?;
            let body = match format {
                Format::Json => json_body(&seq),
                Format::Csv => label_csv(&seq.elements),
                Format::Dot => move_graph(*d)?.to_dot(),
            };
            Ok(Report {
                body,
                status: Status::Pass,
            })
        }
        Command::Tilde { l, d } => {
            let seq = match d {
                Some(d) => generate_tilde_in(*l, *d)?,
                None => generate_tilde(*l)?,
            };
            let body = match format {
                Format::Json => json_body(&seq),
                Format::Csv => label_csv(&seq.elements),
                Format::Dot => return Err(unsupported("tilde", format)),
            };
            Ok(Report {
                body,
                status: Status::Pass,
            })
        }
        Command::MoveGraph { d } => {
            let graph = move_graph(*d)?;
            let body = match format {
                Format::Json => json_body(&graph),
                Format::Dot => graph.to_dot(),
                Format::Csv => return Err(unsupported("move-graph", format)),
            };
            Ok(Report {
                body,
                status: Status::Pass,
            })
        }
        Command::Conj1 { d, labels } => {
            let sys = label_system(*d, labels)?;
            let report = check_conjecture1(&sys);
            #[derive(Serialize)]
            struct WithSystem<'a> {
                #[serde(flatten)]
                report: &'a Conj1Report,
                system: &'a LabelSystem,
            }
            require_json("conj1", format)?;
            Ok(Report {
                body: json_body(&WithSystem {
                    report: &report,
                    system: &sys,
                }),
                status: status(report.outcome.passed()),
            })
        }
        Command::Conj2 { d } => {
            require_json("conj2", format)?;
            let report = check_conjecture2(*d)?;
            Ok(Report {
                body: json_body(&report),
                status: status(report.outcome.passed()),
            })
        }
        Command::Cover { d } => {
            require_json("cover", format)?;
            let report = check_cover(*d)?;
            Ok(Report {
                body: json_body(&report),
                status: status(report.pass),
            })
        }
        Command::Poset {
            d,
            tree,
            dismantle: certify,
            labels,
        } => poset(*d, tree.as_deref(), *certify, labels, settings),
        Command::Milgram { n, .. } => {
            if *n == 0 {
                return Err(usage("milgram needs n >= 1"));
            }
            let p = milgram_poset(*n)?;
            let h =
                poset_homology_capped(&p, settings.max_simplices.unwrap_or(DEFAULT_MAX_SIMPLICES))?;
            let sphere = h.is_sphere(n - 1);
            let body = match format {
                Format::Json => json_body(&json!({
                    "check": "milgram",
                    "n": n,
                    "size": p.len(),
                    "elements": p.elements().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "homology": homology_json(&h),
                    "sphere_dimension": n - 1,
                    "is_sphere": sphere,
                })),
                Format::Csv => h.to_csv(),
                Format::Dot => p.to_dot("milgram"),
            };
            Ok(Report {
                body,
                status: status(sphere),
            })
        }
        Command::Paths {
            in_degrees,
            out,
            block,
            path,
        } => paths(in_degrees, *out, block.as_deref(), path.as_deref(), format),
        Command::Closure {
            operad,
            level,
            d,
            labels,
            max_leaves,
            max_outer_leaves,
            max_degree,
            mode,
            max_candidates,
        } => {
            require_json("closure", format)?;
            let operad = match operad {
                OperadKind::Lattice => ClosureOperad::Lattice { level: *level },
                OperadKind::Seq => ClosureOperad::Seq {
                    system: label_system(*d, labels)?,
                },
            };
            let seq = matches!(operad, ClosureOperad::Seq { .. });
            let leaves = max_leaves.unwrap_or(if seq { 2 } else { 3 });
            let bounds = ClosureBounds {
                max_leaves: leaves,
                max_outer_leaves: max_outer_leaves.unwrap_or(leaves),
                max_degree: max_degree.or(settings.max_degree).unwrap_or(1),
                mode: match mode {
                    Some(ModeArg::Full) => ClosureMode::Full,
                    Some(ModeArg::Partial) => ClosureMode::Partial,
                    None if seq => ClosureMode::Partial,
                    None => ClosureMode::Full,
                },
                max_candidates: max_candidates
                    .or(settings.max_candidates)
                    .unwrap_or(DEFAULT_MAX_CANDIDATES),
            };
            let report = closure_check(&operad, &bounds, &settings.budget)?;
            Ok(Report {
                body: json_body(&report),
                status: status(report.outcome.passed()),
            })
        }
        Command::Matching {
            block,
            level,
            max_degree,
        } => {
            require_json("matching", format)?;
            let bound = BergerElement::parse(block)?;
            let report = matching_check(
                &bound,
                *level,
                max_degree.or(settings.max_degree).unwrap_or(2),
                &settings.budget,
            )?;
            Ok(Report {
                body: json_body(&report),
                status: status(report.outcome.passed()),
            })
        }
        Command::BlockHomology {
            block,
            out,
            max_total,
        } => {
            let bound = BergerElement::parse(block)?;
            let cap = max_total
                .or(settings.max_total)
                .unwrap_or(DEFAULT_MAX_TOTAL);
            let report = block_homology(&bound, *out, cap, &settings.budget)?;
            let state = match report.status {
                FrontierStatus::Inconclusive => Status::Inconclusive,
                FrontierStatus::Closed => status(report.is_point()),
            };
            let body = match format {
                Format::Json => json_body(&report),
                Format::Csv => report.homology.to_csv(),
                Format::Dot => return Err(unsupported("block-homology", format)),
            };
            Ok(Report {
                body,
                status: state,
            })
        }
        Command::VerifyWitness { report } => {
            require_json("verify-witness", format)?;
            verify_witness(report, settings)
        }
    }
}

fn require_json(command: &str, format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        other => Err(unsupported(command, other)),
    }
}

fn poset(
    d: usize,
    tree: Option<&str>,
    certify: bool,
    labels: &LabelArgs,
    settings: &Settings,
) -> Outcome {
    let cap = settings.max_poset_size.unwrap_or(DEFAULT_MAX_POSET_SIZE);
    let (name, p) = match tree {
        None => (
            "downset",
            downset(&generate_v(d)?.elements)?.map(|x| x.to_string()),
        ),
        Some(text) => {
            let sys = label_system(d, labels)?;
            let tree = LevelTree::parse(d + 1, text)?;
            let tp = poset_for_tree(&sys, &tree)?;
            ("tree", tp.product.materialize(cap)?.map(|x| x.to_string()))
        }
    };
    let h = poset_homology_capped(&p, settings.max_simplices.unwrap_or(DEFAULT_MAX_SIMPLICES))?;
    let body = match settings.format {
        Format::Dot => p.to_dot(name),
        Format::Csv => h.to_csv(),
        Format::Json => {
            let mut value = json!({
                "check": "poset",
                "kind": name,
                "d": d,
                "size": p.len(),
                "elements": p.elements(),
                "homology": homology_json(&h),
            });
            if certify {
                value["dismantling"] = serde_json::to_value(dismantle(&p)).expect("serializable");
            }
            json_body(&value)
        }
    };
    Ok(Report {
        body,
        status: status(h.is_acyclic()),
    })
}

fn paths(
    in_degrees: &[usize],
    out: usize,
    block: Option<&str>,
    path: Option<&str>,
    format: Format,
) -> Outcome {
    let bound = block.map(BergerElement::parse).transpose()?;
    if let Some(text) = path {
        require_json("paths --path", format)?;
        let p: LatticePath =
            serde_json::from_str(text).map_err(|e| usage(format!("--path: {e}")))?;
        let k = p.arity();
        let pairs: Vec<Value> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(
                |(i, j)| json!({"pair": [i + 1, j + 1], "factor": p.pair_factor(i, j).to_string()}),
            )
            .collect();
        let mut value = json!({
            "check": "paths",
            "path": p,
            "display": p.to_string(),
            "params": p.params(),
            "pairs": pairs,
            "complexity": p.complexity(),
            "nondegenerate": p.is_nondegenerate(),
        });
        if let Some(b) = &bound {
            value["block"] = json!(block);
            value["member"] = json!(p.in_block(b)?);
        }
        return Ok(Report {
            body: json_body(&value),
            status: Status::Pass,
        });
    }
    let all = enumerate_paths(in_degrees, out);
    let kept: Vec<LatticePath> = match &bound {
        Some(b) => all
            .into_iter()
            .map(|p| p.in_block(b).map(|ok| ok.then_some(p)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect(),
        None => all,
    };
    let body = match format {
        Format::Json => json_body(&json!({
            "check": "paths",
            "degrees": {"in": in_degrees, "out": out},
            "block": block,
            "total": count_paths(in_degrees, out).to_string(),
            "count": kept.len(),
            "paths": kept,
        })),
        Format::Csv => {
            let mut text = String::from("path,complexity,nondegenerate\n");
            for p in &kept {
                writeln!(text, "{p},{},{}", p.complexity(), p.is_nondegenerate()).unwrap();
            }
            text
        }
        Format::Dot => return Err(unsupported("paths", format)),
    };
    Ok(Report {
        body,
        status: Status::Pass,
    })
}

fn field<T: serde::de::DeserializeOwned>(report: &Value, key: &str) -> Result<T, Failure> {
    let value = report
        .get(key)
        .ok_or_else(|| usage(format!("report has no `{key}`")))?;
    serde_json::from_value(value.clone()).map_err(|e| usage(format!("`{key}`: {e}")))
}

fn verify_witness(path: &PathBuf, settings: &Settings) -> Outcome {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| usage(e.to_string()))?
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    let report: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let check: String = field(&report, "check")?;
    let result = report.get("result").and_then(Value::as_str);
    let replayed = match check.as_str() {
        "conj1" => {
            let sys: LabelSystem = field(&report, "system")?;
            let w: Conj1Witness = field(&report, "witness")?;
            w.replay(&sys)?
        }
        "conj2" => field::<Conj2Witness>(&report, "witness")?.replay()?,
        "closure" => field::<ClosureWitness>(&report, "witness")?.replay()?,
        "matching" => {
            let bound = BergerElement::parse(&field::<String>(&report, "block")?)?;
            let level: i64 = field(&report, "level")?;
            let w: MatchingWitness = field(&report, "witness")?;
            replay_matching(&bound, level, &w)?
        }
        "cover" => {
            let d: usize = field(&report, "d")?;
            !field::<bool>(&report, "pass")? && !check_cover(d)?.pass
        }
        "block-homology" => {
            let bound = BergerElement::parse(&field::<String>(&report, "block")?)?;
            let out: usize = field(&report, "output_degree")?;
            let cap: usize = field(&report, "max_total")?;
            let claimed: Vec<usize> = report["homology"]["degrees"]
                .as_array()
                .ok_or_else(|| usage("report has no homology degrees"))?
                .iter()
                .map(|d| d["betti"].as_u64().unwrap_or(0) as usize)
                .collect();
            let fresh = block_homology(&bound, out, cap, &settings.budget)?;
            fresh.status == FrontierStatus::Closed
                && !fresh.is_point()
                && fresh.homology.betti() == claimed
        }
        other => return Err(usage(format!("no witness replay for `{other}` reports"))),
    };
    if check != "cover" && check != "block-homology" && result != Some("fail") {
        return Err(usage(format!(
            "{check} report carries no failure to replay"
        )));
    }
    Ok(Report {
        body: json_body(&json!({"check": "verify-witness", "report": check, "replayed": replayed})),
        status: status(replayed),
    })
}
