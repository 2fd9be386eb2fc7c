mod report;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opinion_game::design::{
    all_pairs, bidirect_approx, brute_force_design, optimal_edge_weight_capped,
    steepest_descent_design, DesignObjective, EdgePlan, DEFAULT_RHO_CAP,
};
use opinion_game::equilibrium::{default_max_iter, nash, nash_iterative, optimum, DEFAULT_TOL};
use opinion_game::error::GraphError;
use opinion_game::generators::{
    gen_cycle, gen_dense_subgraph_gadget, gen_kary_tree, gen_path3, gen_random,
    gen_random_eulerian, gen_star, gen_subset_sum_gadget, gen_vertex_cover_gadget,
};
use opinion_game::graph::{edge_expansion, max_degree, Graph};
use opinion_game::io::{read_graph, write_graph};
use opinion_game::poa::{
    algebraic_connectivity, directed_worst, eulerian_beta, expander_bound, poa,
    poa_bound_from_beta, undirected_worst, PoAReport,
};
use serde_json::{json, Value};

use report::{fin, fins, CliError, CliResult, RunReport};

#[derive(Parser)]
#[command(name = "opgame", version, about = "Opinion-formation game analysis")]
struct Cli {
    /// Numerical tolerance for iterative solves and consistency checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Iterative,
}

#[derive(Subcommand)]
enum Command {
    /// Nash equilibrium opinions and social cost.
    Nash {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Socially optimal opinions and cost.
    Opt { graph: PathBuf },
    /// Price of anarchy for the given internal opinions.
    Poa { graph: PathBuf },
    /// Worst-case price of anarchy over all internal opinions.
    Worst { graph: PathBuf },
    /// Eulerian bounds on the worst-case price of anarchy.
    Bounds { graph: PathBuf },
    /// Network design by edge addition.
    Design {
        #[command(subcommand)]
        mode: DesignMode,
    },
    /// Emit a generated instance as a graph document.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand)]
enum DesignMode {
    /// Optimal weight for a single added edge.
    Edge {
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_CAP)]
        rho_cap: f64,
    },
    /// Steepest-descent edge additions.
    Greedy {
        graph: PathBuf,
        #[arg(long)]
        budget: usize,
        /// Largest weight added per step.
        #[arg(long, default_value_t = 1.0)]
        cap: f64,
        #[command(flatten)]
        cand: Candidates,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Add reverse edges and certify the resulting cost.
    Bidirect {
        graph: PathBuf,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive search over small edge sets.
    Brute {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        weight: f64,
        /// Leave this node's own cost out of the objective.
        #[arg(long)]
        exclude: Option<usize>,
        #[command(flatten)]
        cand: Candidates,
    },
}

#[derive(Args)]
struct Candidates {
    /// Candidate edges as `i:j` pairs separated by commas.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    candidates: Option<Vec<(usize, usize)>>,
}

#[derive(Subcommand)]
enum Family {
    Path3,
    Star {
        #[arg(long)]
        n: usize,
    },
    Tree {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        depth: u32,
    },
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        opinions: Option<Vec<f64>>,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 1.0)]
        min_weight: f64,
        #[arg(long, default_value_t = 1.0)]
        max_weight: f64,
        #[arg(long)]
        directed: bool,
    },
    Eulerian {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        cycles: usize,
    },
    GadgetSubsetsum {
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        #[arg(long)]
        target: u64,
    },
    GadgetVc {
        #[arg(long)]
        source: PathBuf,
    },
    GadgetDks {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected i:j, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn load(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(read_graph(&text)?)
}

fn save(path: &Path, g: &Graph) -> CliResult<()> {
    fs::write(path, write_graph(g))
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn digest(path: &Path, g: &Graph) -> Value {
    json!({
        "file": path.display().to_string(),
        "n": g.n(),
        "edges": g.edges().len(),
        "directed": g.is_directed(),
    })
}

fn poa_json(r: &PoAReport) -> CliResult<Value> {
    let components = r
        .per_component
        .iter()
        .map(|c| Ok(json!({"nodes": c.nodes, "poa": fin(c.poa)?})))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(json!({
        "poa": fin(r.poa)?,
        "nash_cost": fin(r.nash_cost)?,
        "opt_cost": fin(r.opt_cost)?,
        "worst_s": r.worst_s.as_ref().map(fins).transpose()?,
        "extremal_eigenvalue": r.extremal_eigenvalue.map(fin).transpose()?,
        "per_component": components,
    }))
}

fn plan_json(p: &EdgePlan) -> CliResult<Value> {
    Ok(json!({
        "from": p.i,
        "to": p.j,
        "rho_star": fin(p.rho_star)?,
        "saturated": p.saturated,
        "phi_star": fin(p.phi_star)?,
        "phi_max": fin(p.phi_max)?,
        "alpha": fin(p.alpha)?,
        "beta": fin(p.beta)?,
        "gamma": fin(p.gamma)?,
        "predicted_cost": fin(p.predicted_cost)?,
        "baseline_cost": fin(p.baseline_cost)?,
    }))
}

/// Pairs with no arc yet in the directed expansion of `g`.
fn missing_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let d = g.as_directed();
    all_pairs(d.n())
        .into_iter()
        .filter(|&(i, j)| d.weight(i, j) == 0.0)
        .collect()
}

struct Outcome {
    input: Option<Value>,
    result: Value,
    tolerances: Value,
    /// Set when a report is still worth printing but the run failed.
    failure: Option<CliError>,
}

impl Outcome {
    fn ok(input: Value, result: Value, tol: f64) -> Self {
        Self {
            input: Some(input),
            result,
            tolerances: json!({"tol": tol}),
            failure: None,
        }
    }
}

fn run_analysis(cmd: &Command, tol: f64) -> CliResult<Outcome> {
    match cmd {
        Command::Nash {
            graph,
            method,
            max_iter,
        } => {
            let g = load(graph)?;
            let r = match method {
                Method::Direct => nash(&g)?,
                Method::Iterative => {
                    nash_iterative(&g, tol, max_iter.unwrap_or_else(|| default_max_iter(g.n())))?
                }
            };
            let failure = (!r.converged).then(|| {
                CliError::Numerical(format!("iteration stopped after {} steps", r.iterations))
            });
            Ok(Outcome {
                input: Some(digest(graph, &g)),
                result: json!({
                    "method": if *method == Method::Direct { "direct" } else { "iterative" },
                    "opinions": fins(&r.opinions)?,
                    "social_cost": fin(r.social_cost)?,
                    "residual": fin(r.residual)?,
                    "iterations": r.iterations,
                    "converged": r.converged,
                }),
                tolerances: json!({"tol": tol, "max_iter": max_iter.unwrap_or_else(|| default_max_iter(g.n()))}),
                failure,
            })
        }
        Command::Opt { graph } => {
            let g = load(graph)?;
            let r = optimum(&g)?;
            let result = json!({
                "opinions": fins(&r.opinions)?,
                "social_cost": fin(r.social_cost)?,
                "residual": fin(r.residual)?,
            });
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        Command::Poa { graph } => {
            let g = load(graph)?;
            Ok(Outcome::ok(digest(graph, &g), poa_json(&poa(&g)?)?, tol))
        }
        Command::Worst { graph } => {
            let g = load(graph)?;
            let (method, r) = if g.is_directed() {
                ("generalized", directed_worst(&g)?)
            } else {
                ("spectral", undirected_worst(&g)?)
            };
            let mut result = poa_json(&r)?;
            result["method"] = json!(method);
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        Command::Bounds { graph } => {
            let g = load(graph)?;
            let beta = eulerian_beta(&g)?;
            let lambda2 = algebraic_connectivity(&g);
            let delta = max_degree(&g);
            let expansion = match edge_expansion(&g) {
                Ok(a) => Some(a),
                Err(GraphError::TooLarge { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let expander = expansion.map(|a| expander_bound(delta, a)).transpose()?;
            let bound = poa_bound_from_beta(beta, lambda2)?;
            let worst = directed_worst(&g)?.poa;
            let result = json!({
                "beta": fin(beta)?,
                "max_degree": fin(delta)?,
                "beta_within_degree": beta <= delta + 1.0 + tol,
                "lambda2": fin(lambda2)?,
                "beta_bound": fin(bound)?,
                "edge_expansion": expansion.map(fin).transpose()?,
                "expander_bound": expander.map(fin).transpose()?,
                "worst_poa": fin(worst)?,
                "bound_holds": worst <= bound + tol,
            });
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        Command::Design { mode } => run_design(mode, tol),
        Command::Gen { .. } => unreachable!("gen is handled separately"),
    }
}

fn run_design(mode: &DesignMode, tol: f64) -> CliResult<Outcome> {
    match mode {
        DesignMode::Edge {
            graph,
            from,
            to,
            rho_cap,
        } => {
            let g = load(graph)?;
            let p = optimal_edge_weight_capped(&g, *from, *to, *rho_cap)?;
            let mut result = json!({"mode": "edge", "plan": plan_json(&p)?});
            result["improves"] = json!(p.predicted_cost < p.baseline_cost - tol);
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        DesignMode::Greedy {
            graph,
            budget,
            cap,
            cand,
            output,
        } => {
            let g = load(graph)?;
            let run = steepest_descent_design(&g, *budget, *cap, cand.candidates.as_deref())?;
            let steps = run
                .steps
                .iter()
                .map(|s| {
                    Ok(json!({
                        "plan": plan_json(&s.plan)?,
                        "applied_rho": fin(s.applied_rho)?,
                        "cost_after": fin(s.cost_after)?,
                    }))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let final_cost = run.steps.last().map_or(run.initial_cost, |s| s.cost_after);
            if let Some(out) = output {
                save(out, &run.graph)?;
            }
            let result = json!({
                "mode": "greedy",
                "initial_cost": fin(run.initial_cost)?,
                "final_cost": fin(final_cost)?,
                "steps": steps,
            });
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        DesignMode::Bidirect {
            graph,
            weighted,
            output,
        } => {
            let g = load(graph)?;
            let (out_graph, c) = bidirect_approx(&g, *weighted)?;
            if let Some(out) = output {
                save(out, &out_graph)?;
            }
            let result = json!({
                "mode": "bidirect",
                "weighted": weighted,
                "added_edges": out_graph.edges().len().saturating_sub(g.as_directed().edges().len()),
                "nash_cost": fin(c.nash_cost)?,
                "opt_cost": fin(c.opt_cost)?,
                "ratio": fin(c.ratio)?,
                "bound": fin(c.bound)?,
                "holds": c.ratio <= c.bound + tol,
            });
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
        DesignMode::Brute {
            graph,
            k,
            weight,
            exclude,
            cand,
        } => {
            let g = load(graph)?;
            let pairs = cand.candidates.clone().unwrap_or_else(|| missing_pairs(&g));
            let objective = exclude.map_or(DesignObjective::Full, DesignObjective::ExcludeNode);
            let r = brute_force_design(&g, &pairs, *k, *weight, objective)?;
            let result = json!({
                "mode": "brute",
                "candidates": pairs.len(),
                "evaluated": r.evaluated,
                "best_edges": r.best_edges,
                "best_cost": fin(r.best_cost)?,
                "baseline_cost": fin(r.baseline_cost)?,
            });
            Ok(Outcome::ok(digest(graph, &g), result, tol))
        }
    }
}

fn generate(family: &Family, seed: u64) -> CliResult<Graph> {
    Ok(match family {
        Family::Path3 => gen_path3(),
        Family::Star { n } => gen_star(*n)?,
        Family::Tree { k, depth } => gen_kary_tree(*k, *depth)?,
        Family::Cycle { n, opinions } => gen_cycle(*n, opinions.clone())?,
        Family::Random {
            n,
            density,
            min_weight,
            max_weight,
            directed,
        } => gen_random(*n, *density, (*min_weight, *max_weight), *directed, seed)?,
        Family::Eulerian { n, cycles } => gen_random_eulerian(*n, *cycles, seed)?,
        Family::GadgetSubsetsum { items, target } => gen_subset_sum_gadget(items, *target)?.graph,
        Family::GadgetVc { source } => gen_vertex_cover_gadget(&load(source)?)?.graph,
        Family::GadgetDks { source, k } => gen_dense_subgraph_gadget(&load(source)?, *k)?.graph,
    })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn run(cli: &Cli, echo: String) -> CliResult<()> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    if let Command::Gen { family } = &cli.command {
        emit(&write_graph(&generate(family, cli.seed)?));
        return Ok(());
    }
    let start = Instant::now();
    let outcome = run_analysis(&cli.command, tol)?;
    let report = RunReport {
        command: echo,
        input: outcome.input,
        result: outcome.result,
        tolerances: outcome.tolerances,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    match cli.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&report.to_json())
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            emit(&format!("{text}\n"));
        }
        Format::Tsv => emit(&report.to_tsv()),
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    match run(&cli, echo) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
