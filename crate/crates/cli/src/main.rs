//! Command-line front end for the finite-group dominion toolkit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use domkit_core::bounds::{absolute_closedness_check, certify, hunt_candidates};
use domkit_core::catalog::{build_catalog, load_catalog, save_catalog, Catalog, ConstructorSet};
use domkit_core::construct::{
    bigone_witness, default_transversal, kk_embedding, mckay_witness, omega_wreath,
    orbit_transversal, ExtensionPresentation, GroupAction,
};
use domkit_core::group::{closure, direct_product, quotient, FiniteGroup, Subgroup};
use domkit_core::homsearch::dominion_upper_approx;
use domkit_core::io::{fingerprint_file, load_group, load_variety, save_group};
use domkit_core::words::{group_exponent, is_member, verbal_subgroup};
use domkit_core::{Error, Limits};

#[derive(Parser)]
#[command(name = "domkit", version, about = "finite-group dominion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest group order any construction may materialize
    /// (default: DOMKIT_ORDER_CAP or 20000).
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    /// Node budget for backtracking searches and tuple enumeration.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Worker thread count (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GroupArg {
    /// Path to a group file.
    #[arg(long)]
    group: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, quotient, or multiply groups.
    Group {
        #[command(subcommand)]
        action: GroupCommand,
    },
    /// Verbal subgroup of a group for a variety.
    Verbal {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        variety: PathBuf,
    },
    /// Variety membership test.
    Member {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        variety: PathBuf,
    },
    /// Wreath product of two groups.
    Wreath {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        top: PathBuf,
        /// Index set: "regular" or "cosets:<subgroup spec on the top group>".
        #[arg(long, default_value = "regular")]
        omega: String,
        /// Write the flat group to this path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Kaloujnine–Krasner embedding of an extension into a wreath product.
    Embed {
        /// Extension file: {"group": <path>, "kernel": <subgroup spec>}.
        #[arg(long)]
        extension: PathBuf,
        /// Transversal choice: "default" or "orbit" (orbit needs --subgroup).
        #[arg(long, default_value = "default")]
        transversal: String,
        /// H for the orbit transversal.
        #[arg(long)]
        subgroup: Option<String>,
        /// D for the orbit transversal (defaults to the trivial subgroup).
        #[arg(long)]
        d: Option<String>,
    },
    /// Witness constructions.
    Witness {
        #[command(subcommand)]
        action: WitnessCommand,
    },
    /// Dominion bounds and certification.
    Dominion {
        #[command(subcommand)]
        action: DominionCommand,
    },
    /// Catalog maintenance.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    Inspect {
        #[command(flatten)]
        group: GroupArg,
    },
    Quotient {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    Product {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        group2: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// McKay witness for (G, H) with G in the outer variety.
    Mckay {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        subgroup: String,
        /// The nontrivial inner-variety group M.
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        variety: PathBuf,
    },
    /// Full Theorem-3.4 pipeline report.
    Bigone {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
}

#[derive(Subcommand)]
enum DominionCommand {
    Approx {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
    Certify {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
    Hunt {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Absolute-closedness report for G over the catalog (disjoint factors).
    Closed {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    Build {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        output: PathBuf,
    },
    List {
        #[arg(long)]
        catalog: PathBuf,
    },
}

/// Resolves a subgroup specifier against a group: a comma-separated list of
/// element indices or labels, taken as generators.
fn parse_subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup, Error> {
    let mut gens = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(idx) = token.parse::<usize>() {
            gens.push(idx);
            continue;
        }
        let found = (0..g.order()).find(|&i| g.label(i) == token);
        match found {
            Some(i) => gens.push(i),
            None => {
                return Err(Error::Malformed {
                    path: "--subgroup".into(),
                    message: format!("no element with label or index {token:?}"),
                })
            }
        }
    }
    closure(g, &gens)
}

#[derive(Serialize)]
struct InputFingerprint {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    version: &'static str,
    inputs: Vec<InputFingerprint>,
    report: T,
}

struct Ctx {
    format: Format,
    limits: Limits,
    inputs: Vec<InputFingerprint>,
}

impl Ctx {
    fn track(&mut self, path: &Path) -> Result<(), Error> {
        self.inputs.push(InputFingerprint {
            path: path.display().to_string(),
            sha256: fingerprint_file(path)?,
        });
        Ok(())
    }

    fn load_group(&mut self, path: &Path) -> Result<FiniteGroup, Error> {
        self.track(path)?;
        load_group(path)
    }

    fn load_variety(&mut self, path: &Path) -> Result<domkit_core::VarietyPresentation, Error> {
        self.track(path)?;
        load_variety(path)
    }

    fn load_catalog(&mut self, path: &Path) -> Result<Catalog, Error> {
        self.track(&path.join("manifest.json"))?;
        load_catalog(path)
    }

    /// Emits the report: JSON with version and fingerprints, or the given
    /// plain-text lines.
    fn emit<T: Serialize>(&self, report: T, text: Vec<String>) {
        match self.format {
            Format::Json => {
                let wrapped = Report {
                    version: env!("CARGO_PKG_VERSION"),
                    inputs: self
                        .inputs
                        .iter()
                        .map(|i| InputFingerprint {
                            path: i.path.clone(),
                            sha256: i.sha256.clone(),
                        })
                        .collect(),
                    report,
                };
                println!("{}", serde_json::to_string(&wrapped).unwrap());
            }
            Format::Text => {
                for line in text {
                    println!("{line}");
                }
            }
        }
    }
}

fn describe_subgroup(g: &FiniteGroup, s: &Subgroup) -> String {
    let labels: Vec<String> = s.elements.iter().map(|&i| g.label(i)).collect();
    format!("order {} {{{}}}", s.order(), labels.join(", "))
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut limits = Limits::default();
    if let Some(cap) = cli.order_cap.or_else(|| {
        std::env::var("DOMKIT_ORDER_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    }) {
        limits.order_cap = cap;
    }
    if let Some(budget) = cli.node_budget {
        limits.node_budget = budget;
    }
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let mut ctx = Ctx {
        format: cli.format,
        limits,
        inputs: Vec::new(),
    };
    let limits = ctx.limits;

    match cli.command {
        Command::Group { action } => match action {
            GroupCommand::Inspect { group } => {
                let g = ctx.load_group(&group.group)?;
                #[derive(Serialize)]
                struct Inspect {
                    order: usize,
                    abelian: bool,
                    exponent: u64,
                    order_profile: std::collections::BTreeMap<usize, usize>,
                    generators: Vec<String>,
                }
                let gens = g.small_generating_set();
                let r = Inspect {
                    order: g.order(),
                    abelian: g.is_abelian(),
                    exponent: group_exponent(&g),
                    order_profile: g.order_profile(),
                    generators: gens.iter().map(|&i| g.label(i)).collect(),
                };
                let text = vec![
                    format!("order: {}", r.order),
                    format!("abelian: {}", r.abelian),
                    format!("exponent: {}", r.exponent),
                    format!("order profile: {:?}", r.order_profile),
                    format!("generators: {}", r.generators.join(", ")),
                ];
                ctx.emit(r, text);
            }
            GroupCommand::Quotient {
                group,
                subgroup,
                output,
            } => {
                let g = ctx.load_group(&group.group)?;
                let n = parse_subgroup(&g, &subgroup)?;
                let (q, _) = quotient(&g, &n)?;
                if let Some(out) = &output {
                    save_group(out, &q)?;
                }
                #[derive(Serialize)]
                struct Out {
                    order: usize,
                    abelian: bool,
                    written: Option<String>,
                }
                let r = Out {
                    order: q.order(),
                    abelian: q.is_abelian(),
                    written: output.as_ref().map(|p| p.display().to_string()),
                };
                ctx.emit(r, vec![format!("quotient order: {}", q.order())]);
            }
            GroupCommand::Product {
                group,
                group2,
                output,
            } => {
                let g1 = ctx.load_group(&group.group)?;
                let g2 = ctx.load_group(&group2)?;
                let (p, _, _) = direct_product(&g1, &g2, &limits)?;
                if let Some(out) = &output {
                    save_group(out, &p)?;
                }
                #[derive(Serialize)]
                struct Out {
                    order: usize,
                    written: Option<String>,
                }
                let r = Out {
                    order: p.order(),
                    written: output.as_ref().map(|p| p.display().to_string()),
                };
                ctx.emit(r, vec![format!("product order: {}", p.order())]);
            }
        },
        Command::Verbal { group, variety } => {
            let g = ctx.load_group(&group.group)?;
            let v = ctx.load_variety(&variety)?;
            let s = verbal_subgroup(&g, &v, &limits)?;
            let text = vec![format!("verbal subgroup: {}", describe_subgroup(&g, &s))];
            ctx.emit(s, text);
        }
        Command::Member { group, variety } => {
            let g = ctx.load_group(&group.group)?;
            let v = ctx.load_variety(&variety)?;
            let m = is_member(&g, &v, &limits)?;
            ctx.emit(m, vec![format!("{m}")]);
        }
        Command::Wreath {
            base,
            top,
            omega,
            output,
        } => {
            let n = ctx.load_group(&base)?;
            let k = ctx.load_group(&top)?;
            let action = if omega == "regular" {
                GroupAction::regular(&k)
            } else if let Some(spec) = omega.strip_prefix("cosets:") {
                let h = parse_subgroup(&k, spec)?;
                GroupAction::on_left_cosets(&k, &h)?
            } else {
                return Err(Error::Malformed {
                    path: "--omega".into(),
                    message: format!("expected \"regular\" or \"cosets:<spec>\", got {omega:?}"),
                });
            };
            let w = omega_wreath(&n, &k, action, &limits)?;
            if let Some(out) = &output {
                save_group(out, &w.flat)?;
            }
            #[derive(Serialize)]
            struct Out {
                order: usize,
                base_order: usize,
                top_order: usize,
                omega_size: usize,
                written: Option<String>,
            }
            let r = Out {
                order: w.flat.order(),
                base_order: w.base.order(),
                top_order: w.top.order(),
                omega_size: w.action.domain_size,
                written: output.as_ref().map(|p| p.display().to_string()),
            };
            let text = vec![format!(
                "wreath product order {} = {} * {}^{}",
                r.order,
                r.top_order,
                r.base_order,
                r.omega_size
            )];
            ctx.emit(r, text);
        }
        Command::Embed {
            extension,
            transversal,
            subgroup,
            d,
        } => {
            ctx.track(&extension)?;
            #[derive(serde::Deserialize)]
            struct ExtFile {
                group: String,
                kernel: String,
            }
            let text = std::fs::read_to_string(&extension).map_err(|source| Error::Io {
                path: extension.display().to_string(),
                source,
            })?;
            let file: ExtFile = serde_json::from_str(&text).map_err(|e| Error::Malformed {
                path: extension.display().to_string(),
                message: e.to_string(),
            })?;
            let base_dir = extension.parent().unwrap_or(Path::new("."));
            let g = ctx.load_group(&base_dir.join(&file.group))?;
            let n = parse_subgroup(&g, &file.kernel)?;
            let ext = ExtensionPresentation::from_normal(&g, &n)?;
            let tau = match transversal.as_str() {
                "default" => default_transversal(&ext),
                "orbit" => {
                    let h_spec = subgroup.as_deref().ok_or_else(|| Error::Malformed {
                        path: "--subgroup".into(),
                        message: "orbit transversal requires --subgroup".into(),
                    })?;
                    let h = parse_subgroup(&g, h_spec)?;
                    let d = match &d {
                        Some(spec) => parse_subgroup(&g, spec)?,
                        None => Subgroup::trivial(),
                    };
                    orbit_transversal(&g, &n, &h, &d)?
                }
                other => {
                    return Err(Error::Malformed {
                        path: "--transversal".into(),
                        message: format!("expected \"default\" or \"orbit\", got {other:?}"),
                    })
                }
            };
            let (w, gamma) = kk_embedding(&ext, &tau, &limits)?;
            #[derive(Serialize)]
            struct Out {
                wreath_order: usize,
                injective: bool,
                transversal_lift: Vec<usize>,
                image: Vec<usize>,
            }
            let r = Out {
                wreath_order: w.flat.order(),
                injective: gamma.is_injective(),
                transversal_lift: tau.lift.clone(),
                image: gamma.image.clone(),
            };
            let text = vec![
                format!("wreath order: {}", r.wreath_order),
                format!("injective: {}", r.injective),
                format!("transversal: {:?}", r.transversal_lift),
            ];
            ctx.emit(r, text);
        }
        Command::Witness { action } => match action {
            WitnessCommand::Mckay {
                group,
                subgroup,
                base,
                variety,
            } => {
                let g = ctx.load_group(&group.group)?;
                let h = parse_subgroup(&g, &subgroup)?;
                let m = ctx.load_group(&base)?;
                let v = ctx.load_variety(&variety)?;
                let (w, f, conj) = mckay_witness(&g, &h, &m, &v, &limits)?;
                let eq: Vec<usize> = (0..g.order())
                    .filter(|&x| f.apply(x) == conj.apply(x))
                    .collect();
                #[derive(Serialize)]
                struct Out {
                    witness_order: usize,
                    equalizer_in_g: Vec<usize>,
                    f: Vec<usize>,
                    g: Vec<usize>,
                }
                let r = Out {
                    witness_order: w.flat.order(),
                    equalizer_in_g: eq.clone(),
                    f: f.image.clone(),
                    g: conj.image.clone(),
                };
                let text = vec![
                    format!("witness order: {}", w.flat.order()),
                    format!("equalizer ∩ G: {:?} (H = {:?})", eq, h.elements),
                ];
                ctx.emit(r, text);
            }
            WitnessCommand::Bigone {
                group,
                subgroup,
                variety,
                catalog,
            } => {
                let g = ctx.load_group(&group.group)?;
                let h = parse_subgroup(&g, &subgroup)?;
                let v = ctx.load_variety(&variety)?;
                let cat = ctx.load_catalog(&catalog)?;
                let report = bigone_witness(&g, &h, &v, &cat, &limits)?;
                let text = vec![
                    format!("certified: {}", report.certified),
                    format!("D: {}", describe_subgroup(&g, &report.d)),
                    format!("HD: {}", describe_subgroup(&g, &report.hd)),
                    format!("notes: {:?}", report.notes),
                ];
                ctx.emit(report, text);
            }
        },
        Command::Dominion { action } => match action {
            DominionCommand::Approx {
                group,
                subgroup,
                variety,
                catalog,
            } => {
                let g = ctx.load_group(&group.group)?;
                let h = parse_subgroup(&g, &subgroup)?;
                let v = ctx.load_variety(&variety)?;
                let cat = ctx.load_catalog(&catalog)?;
                let r = dominion_upper_approx(&g, &h, &v, &cat, &limits)?;
                let text = vec![
                    format!("approximation: {}", describe_subgroup(&g, &r.subgroup)),
                    format!("contributing pairs: {}", r.contributing_pairs.len()),
                    format!("vacuous: {}", r.vacuous),
                ];
                ctx.emit(r, text);
            }
            DominionCommand::Certify {
                group,
                subgroup,
                variety,
                catalog,
            } => {
                let g = ctx.load_group(&group.group)?;
                let h = parse_subgroup(&g, &subgroup)?;
                let v = ctx.load_variety(&variety)?;
                let cat = ctx.load_catalog(&catalog)?;
                let r = certify(&g, &h, &v, &cat, &limits)?;
                let mut text = vec![
                    format!("status: {:?}", r.status),
                    format!("H: {}", describe_subgroup(&g, &r.h)),
                    format!("lower: {}", describe_subgroup(&g, &r.lower)),
                    format!("upper: {}", describe_subgroup(&g, &r.upper)),
                ];
                if let Some(dom) = &r.dom {
                    text.push(format!("dom: {}", describe_subgroup(&g, dom)));
                }
                for rule in &r.rules_fired {
                    text.push(format!("rule: {rule}"));
                }
                for note in &r.notes {
                    text.push(format!("note: {note}"));
                }
                ctx.emit(r, text);
            }
            DominionCommand::Hunt {
                variety,
                max_order,
                catalog,
            } => {
                let v = ctx.load_variety(&variety)?;
                let cat = ctx.load_catalog(&catalog)?;
                let reports = hunt_candidates(&v, max_order, &cat, &limits)?;
                let mut text = vec![format!("candidates: {}", reports.len())];
                for r in &reports {
                    text.push(format!(
                        "group order {} H order {} approx order {}",
                        r.group_order,
                        r.h.order(),
                        r.approx.as_ref().map_or(0, |a| a.subgroup.order()),
                    ));
                }
                ctx.emit(reports, text);
            }
            DominionCommand::Closed {
                group,
                variety,
                catalog,
            } => {
                let g = ctx.load_group(&group.group)?;
                let v = ctx.load_variety(&variety)?;
                let cat = ctx.load_catalog(&catalog)?;
                let r = absolute_closedness_check(&g, &v, &cat, &limits)?;
                let mut text = Vec::new();
                for e in &r.entries {
                    text.push(format!(
                        "{}: {} embeddings, certified {}",
                        e.target_provenance, e.embeddings_checked, e.certified
                    ));
                }
                ctx.emit(r, text);
            }
        },
        Command::Catalog { action } => match action {
            CatalogCommand::Build {
                variety,
                max_order,
                output,
            } => {
                let v = ctx.load_variety(&variety)?;
                let cat = build_catalog(&v, max_order, &ConstructorSet::default(), &limits)?;
                save_catalog(&cat, &output)?;
                #[derive(Serialize)]
                struct Out {
                    entries: usize,
                    written: String,
                }
                let r = Out {
                    entries: cat.len(),
                    written: output.display().to_string(),
                };
                ctx.emit(r, vec![format!("catalog entries: {}", cat.len())]);
            }
            CatalogCommand::List { catalog } => {
                let cat = ctx.load_catalog(&catalog)?;
                #[derive(Serialize)]
                struct Entry {
                    order: usize,
                    provenance: String,
                }
                let entries: Vec<Entry> = cat
                    .entries
                    .iter()
                    .map(|e| Entry {
                        order: e.group.order(),
                        provenance: e.provenance.clone(),
                    })
                    .collect();
                let text = entries
                    .iter()
                    .map(|e| format!("order {:5}  {}", e.order, e.provenance))
                    .collect();
                ctx.emit(entries, text);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_resource_exhaustion() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
