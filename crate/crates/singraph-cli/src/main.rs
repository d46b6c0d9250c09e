//! Command-line front end: classification, cycle and root computations,
//! deformation data, the sandwich constructions, and golden-corpus checks.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singraph::classify::{
    laufer_type, nonsimple_witness, obtainable_from_base, sandwich_obstruction, NonsimpleWitness,
};
use singraph::cycles::{fundamental_cycle, multiplicity, positive_roots, resolution_profile};
use singraph::deform::{enumerate_adjacencies, star_deformation};
use singraph::graph::{Cycle, WeightedDualGraph};
use singraph::sandwich::{
    attach_arrows, decorated_curve_of, delta_const_candidates, germ_label, graph_of,
    is_sandwiched, proximity_factorize, DecoratedCurve,
};
use singraph::Error;

#[derive(Parser)]
#[command(name = "singraph", version, about = "Resolution-graph combinatorics of rational surface singularities")]
struct Cli {
    /// Emit machine-readable JSON instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Emit the input graph in DOT format and exit.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a graph against the template lists.
    Classify { graph: PathBuf },
    /// Fundamental cycle of a graph.
    Zcycle { graph: PathBuf },
    /// Positive roots of a rational graph.
    Roots { graph: PathBuf },
    /// Adjacent (deformation-reachable) graphs with root-collection witnesses.
    Adjacencies {
        graph: PathBuf,
        /// Cap on the number of roots in a collection.
        #[arg(long)]
        max_m: Option<usize>,
    },
    /// Star-deformation root collection of a confining star graph.
    Star { graph: PathBuf },
    /// Multiplicities along repeated blow-up decomposition.
    BlowupProfile { graph: PathBuf },
    /// Decorated-curve constructions.
    Sandwich {
        #[command(subcommand)]
        cmd: SandwichCmd,
    },
    /// Golden corpus management.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum SandwichCmd {
    /// Attach arrows, factorize, and print the decorated curve of a graph.
    Build {
        graph: PathBuf,
        /// End vertex receiving one arrow less (default: least end by id).
        #[arg(long)]
        e0: Option<String>,
    },
    /// Graphs of the singularities of X(C,l) for a decorated curve file.
    Graph { curve: PathBuf },
    /// Combinatorial delta-constant deformation candidates of a curve.
    Deform {
        curve: PathBuf,
        /// Bound on the number of special points per candidate.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Decide whether a graph is sandwiched.
    Check {
        graph: PathBuf,
        /// Arrows allowed per vertex in the search (default: multiplicity).
        #[arg(long)]
        budget: Option<i64>,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Run the golden-file suite.
    Verify {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

fn load_graph(path: &Path) -> anyhow::Result<WeightedDualGraph> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    WeightedDualGraph::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn load_curve(path: &Path) -> anyhow::Result<DecoratedCurve> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    DecoratedCurve::from_json(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn cycle_map(g: &WeightedDualGraph, c: &Cycle) -> serde_json::Map<String, serde_json::Value> {
    g.vertices()
        .map(|v| (g.id(v).to_string(), serde_json::json!(c.coeff(v))))
        .collect()
}

fn cycle_str(g: &WeightedDualGraph, c: &Cycle) -> String {
    g.vertices()
        .map(|v| format!("{}:{}", g.id(v), c.coeff(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn graph_summary(g: &WeightedDualGraph) -> String {
    let weights: Vec<String> = g
        .vertices()
        .map(|v| format!("{}({})", g.id(v), g.weight(v)))
        .collect();
    let edges: Vec<String> = g
        .edges()
        .map(|(a, b, m)| {
            if m == 1 {
                format!("{}-{}", g.id(a), g.id(b))
            } else {
                format!("{}-{}x{}", g.id(a), g.id(b), m)
            }
        })
        .collect();
    format!("[{}] edges [{}]", weights.join(" "), edges.join(" "))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let json = cli.json;
    let dot = cli.dot;
    match cli.cmd {
        Cmd::Classify { graph } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let tag = laufer_type(&g)?;
            let base = obtainable_from_base(&g)?;
            let witness = if base.is_none() {
                Some(nonsimple_witness(&g)?)
            } else {
                None
            };
            if json {
                let obj = serde_json::json!({
                    "multiplicity": multiplicity(&g)?,
                    "laufer_type": tag.as_ref().map(|m| m.tag.to_string()),
                    "base": base.as_ref().map(|(k, _)| k.to_string()),
                    "simple": base.is_some(),
                    "witness": witness.as_ref().map(witness_label),
                });
                println!("{}", serde_json::to_string_pretty(&obj)?);
            } else {
                println!("multiplicity {}", multiplicity(&g)?);
                match tag {
                    Some(m) => println!("template {}", m.tag),
                    None => println!("template none"),
                }
                match (&base, &witness) {
                    (Some((kind, _)), _) => println!("rational {kind}; simple"),
                    (None, Some(w)) => {
                        println!("not obtainable from a double or triple point; not simple");
                        println!("witness: {}", witness_label(w));
                    }
                    _ => unreachable!(),
                }
            }
        }
        Cmd::Zcycle { graph } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let (z, _) = fundamental_cycle(&g)?;
            if json {
                let obj = serde_json::json!({
                    "coefficients": cycle_map(&g, &z),
                    "multiplicity": multiplicity(&g)?,
                    "reduced": z.is_reduced(),
                });
                println!("{}", serde_json::to_string_pretty(&obj)?);
            } else {
                println!("Z = {}", cycle_str(&g, &z));
                println!("multiplicity {}", multiplicity(&g)?);
            }
        }
        Cmd::Roots { graph } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let roots = positive_roots(&g)?;
            if json {
                let list: Vec<_> = roots.iter().map(|r| cycle_map(&g, r)).collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "count": roots.len(),
                    "roots": list,
                }))?);
            } else {
                println!("{} positive roots", roots.len());
                for r in &roots {
                    println!("  {}", cycle_str(&g, r));
                }
            }
        }
        Cmd::Adjacencies { graph, max_m } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let adjs = enumerate_adjacencies(&g, max_m)?;
            if json {
                let list: Vec<_> = adjs
                    .iter()
                    .map(|a| {
                        serde_json::json!({
                            "graph": serde_json::from_str::<serde_json::Value>(&a.graph.to_json())
                                .unwrap(),
                            "roots": a.witness.as_ref().map(|w| {
                                w.roots().iter().map(|r| cycle_map(&g, r)).collect::<Vec<_>>()
                            }),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "count": adjs.len(),
                    "adjacencies": list,
                }))?);
            } else {
                println!("{} adjacencies", adjs.len());
                for a in &adjs {
                    if a.graph.is_empty() {
                        println!("  smooth");
                    } else {
                        println!("  {}", graph_summary(&a.graph));
                    }
                    if let Some(w) = &a.witness {
                        for r in w.roots() {
                            println!("    root {}", cycle_str(&g, r));
                        }
                    }
                }
            }
        }
        Cmd::Star { graph } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let col = star_deformation(&g)?;
            if json {
                let roots: Vec<_> = col.roots().iter().map(|r| cycle_map(&g, r)).collect();
                let squares: Vec<i64> = col
                    .roots()
                    .iter()
                    .map(|r| singraph::dot(&g, r, r).unwrap())
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "roots": roots,
                    "squares": squares,
                }))?);
            } else {
                for (i, r) in col.roots().iter().enumerate() {
                    let sq = singraph::dot(&g, r, r).unwrap();
                    println!("D{i} = {}  (D{i}^2 = {sq})", cycle_str(&g, r));
                }
            }
        }
        Cmd::BlowupProfile { graph } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let profile = resolution_profile(&g)?;
            let quads = profile.iter().filter(|&&(m, _)| m == 4).count();
            if json {
                let list: Vec<_> = profile
                    .iter()
                    .map(|&(m, d)| serde_json::json!({"multiplicity": m, "depth": d}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "profile": list,
                    "quadruple_points": quads,
                }))?);
            } else {
                for (m, d) in &profile {
                    println!("depth {d}: multiplicity {m}");
                }
                println!("quadruple points: {quads}");
            }
        }
        Cmd::Sandwich { cmd } => run_sandwich(cmd, json, dot)?,
        Cmd::Corpus { cmd } => match cmd {
            CorpusCmd::Verify { dir } => corpus_verify(&dir)?,
        },
    }
    Ok(())
}

fn witness_label(w: &NonsimpleWitness) -> String {
    match w {
        NonsimpleWitness::HighValencyStar { center } => {
            format!("vertex {center} has valency at least 4")
        }
        NonsimpleWitness::TwoTripleMerge { path } => {
            let p: Vec<String> = path.iter().map(|v| format!("v{}", v + 1)).collect();
            format!("merging the chain {} joins two triple points", p.join("-"))
        }
        NonsimpleWitness::ConfiningSubgraph(t) => {
            format!("contains a confining star of type {}", t.kind)
        }
    }
}

fn run_sandwich(cmd: SandwichCmd, json: bool, dot: bool) -> anyhow::Result<()> {
    match cmd {
        SandwichCmd::Build { graph, e0 } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            let e0 = match e0 {
                Some(id) => Some(g.index_of(&id)?),
                None => None,
            };
            let aug = attach_arrows(&g, e0)?;
            let pm = proximity_factorize(&aug)?;
            let curve = decorated_curve_of(&aug, &pm)?;
            println!("{}", curve.to_json());
        }
        SandwichCmd::Graph { curve } => {
            let c = load_curve(&curve)?;
            let graphs = graph_of(&c)?;
            if dot {
                for g in &graphs {
                    print!("{}", g.to_dot());
                }
            } else if json {
                let list: Vec<serde_json::Value> = graphs
                    .iter()
                    .map(|g| serde_json::from_str(&g.to_json()).unwrap())
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "components": list,
                }))?);
            } else if graphs.is_empty() {
                println!("smooth");
            } else {
                for (i, g) in graphs.iter().enumerate() {
                    println!("component {}: {}", i + 1, graph_summary(g));
                }
            }
        }
        SandwichCmd::Deform { curve, depth } => {
            let c = load_curve(&curve)?;
            let fibers = delta_const_candidates(&c, depth)?;
            if json {
                let list: Vec<serde_json::Value> = fibers
                    .iter()
                    .map(|f| {
                        let germs: Vec<serde_json::Value> = f
                            .iter()
                            .map(|g| {
                                serde_json::json!({
                                    "type": germ_label(g),
                                    "decorations": g.branches.iter().map(|b| b.l).collect::<Vec<_>>(),
                                })
                            })
                            .collect();
                        serde_json::json!(germs)
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({
                    "combinatorial": true,
                    "count": fibers.len(),
                    "candidates": list,
                }))?);
            } else {
                println!("{} combinatorial candidates", fibers.len());
                for f in &fibers {
                    let parts: Vec<String> = f
                        .iter()
                        .map(|g| {
                            let ls: Vec<String> =
                                g.branches.iter().map(|b| b.l.to_string()).collect();
                            format!("{}({})", germ_label(g), ls.join(","))
                        })
                        .collect();
                    println!("  {}", parts.join(" + "));
                }
            }
        }
        SandwichCmd::Check { graph, budget } => {
            let g = load_graph(&graph)?;
            if dot {
                print!("{}", g.to_dot());
                return Ok(());
            }
            match is_sandwiched(&g, budget) {
                Ok(ans) => {
                    if json {
                        println!("{}", serde_json::json!({ "sandwiched": ans }));
                    } else {
                        println!("sandwiched: {ans}");
                    }
                }
                Err(Error::BudgetExhausted) => {
                    return Err(anyhow::anyhow!(
                        "unknown: arrow budget exhausted without a certificate"
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// corpus verification

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn ok(&mut self, name: &str, what: &str, pass: bool) {
        if pass {
            println!("ok   {name}: {what}");
        } else {
            println!("FAIL {name}: {what}");
            self.failures.push(format!("{name}: {what}"));
        }
    }
}

fn corpus_verify(dir: &Path) -> anyhow::Result<()> {
    use singraph::canon::isomorphic;

    let gdir = dir.join("graphs");
    let cdir = dir.join("curves");
    let mut ck = Check { failures: Vec::new() };
    let load = |name: &str| load_graph(&gdir.join(format!("{name}.json")));
    let loadc = |name: &str| load_curve(&cdir.join(format!("{name}.json")));

    // every graph file is a minimal negative-definite rational graph
    let mut names: Vec<String> = fs::read_dir(&gdir)?
        .filter_map(|e| {
            let p = e.ok()?.path();
            let stem = p.file_stem()?.to_str()?.to_string();
            (p.extension()?.to_str()? == "json").then_some(stem)
        })
        .collect();
    names.sort();
    for name in &names {
        let g = load(name)?;
        let good = g.is_negative_definite()
            && singraph::cycles::is_rational(&g).unwrap_or(false)
            && g.is_minimal();
        ck.ok(name, "negative definite, rational, minimal", good);
    }

    // root counts on the ADE members
    for (name, expect) in [
        ("a1", 1),
        ("a4", 10),
        ("a8", 36),
        ("d4", 12),
        ("d6", 30),
        ("e6", 36),
        ("e7", 63),
        ("e8", 120),
    ] {
        let g = load(name)?;
        let n = positive_roots(&g)?.len();
        ck.ok(name, &format!("{expect} positive roots"), n == expect);
    }

    // template tags
    for (name, tag) in [
        ("i-ii", "I/II"),
        ("iii1", "III.1"),
        ("iii2", "III.2"),
        ("iii3", "III.3"),
        ("iii4", "III.4"),
        ("iii5", "III.5"),
        ("iii6", "III.6"),
        ("iii7", "III.7"),
        ("iii8", "III.8"),
        ("iii9", "III.9"),
        ("e6", "III.7"),
        ("e7", "III.8"),
        ("e8", "III.9"),
    ] {
        let g = load(name)?;
        let got = laufer_type(&g)?.map(|m| m.tag.to_string());
        ck.ok(name, &format!("template {tag}"), got.as_deref() == Some(tag));
    }

    // confining stars: witnessed, star deformation valid
    for name in ["tilde-e6", "tilde-e7", "tilde-e8"] {
        let g = load(name)?;
        let deform_ok = star_deformation(&g).is_ok();
        let not_obtainable = obtainable_from_base(&g)?.is_none();
        ck.ok(name, "confining star with valid root collection", deform_ok && not_obtainable);
    }

    // n-star family: n virtual quadruple points
    for n in 1..=4usize {
        let g = load(&format!("star{n}"))?;
        let quads = resolution_profile(&g)?
            .iter()
            .filter(|&&(m, _)| m == 4)
            .count();
        ck.ok(&format!("star{n}"), &format!("{n} quadruple points"), quads == n);
    }

    // worked sandwich example: graph -> curve -> graph
    {
        let g = load("x37-11")?;
        let aug = attach_arrows(&g, None)?;
        let pm = proximity_factorize(&aug)?;
        let curve = decorated_curve_of(&aug, &pm)?;
        let stored = loadc("x37-11")?;
        ck.ok("x37-11", "stored decorated curve matches", curve == stored);
        let back = graph_of(&curve)?;
        let round = back.len() == 1 && isomorphic(&back[0], &g)?;
        ck.ok("x37-11", "graph_of inverts the construction", round);
        let mut ls: Vec<u64> = curve.branches.iter().map(|b| b.l).collect();
        ls.sort();
        ck.ok("x37-11", "decorations 2,2,4,6", ls == vec![2, 2, 4, 6]);
    }

    // cusp germ golden
    {
        let c = loadc("cusp-a2")?;
        let gs = graph_of(&c)?;
        let mut ws: Vec<i64> = gs.iter().map(|g| g.weight(0)).collect();
        ws.sort();
        let good = gs.len() == 2 && gs.iter().all(|g| g.len() == 1) && ws == vec![-3, -2];
        ck.ok("cusp-a2", "graph is two points of weight -3 and -2", good);
    }

    // recipe curves reproduce their stored graphs
    for name in [
        "recipe-iii3-k2-s1",
        "recipe-iii3-k2-s1-forked",
        "recipe-iii4-e6-k2",
        "recipe-iii4-e6-k2-deep",
        "recipe-iii4-e8-k2",
        "recipe-iii4-high-k3",
    ] {
        let c = loadc(name)?;
        let gs = graph_of(&c)?;
        let expect = load(&format!("{name}-graph"))?;
        let good = gs.len() == 1 && isomorphic(&gs[0], &expect)?;
        ck.ok(name, "graph_of matches stored graph", good);
        let tag = laufer_type(&expect)?.map(|m| m.tag.to_string());
        let want = if name.contains("iii3") { "III.3" } else { "III.4" };
        ck.ok(name, &format!("graph has template {want}"), tag.as_deref() == Some(want));
    }

    // sandwich obstruction split
    for name in ["d4", "d5", "d6", "iii5", "iii6", "iii7", "iii8", "iii9"] {
        let g = load(name)?;
        let good = sandwich_obstruction(&g)? && is_sandwiched(&g, None) == Ok(false);
        ck.ok(name, "obstructed, not sandwiched", good);
    }
    for name in ["a1", "a3", "a8", "i-ii", "x37-11", "iii1"] {
        let g = load(name)?;
        let good = is_sandwiched(&g, None) == Ok(true);
        ck.ok(name, "sandwiched", good);
    }

    if ck.failures.is_empty() {
        println!("corpus verify: all checks passed");
        Ok(())
    } else {
        Err(anyhow::anyhow!("{} corpus checks failed", ck.failures.len()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
