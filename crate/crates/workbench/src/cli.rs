//! Command-line interface. `run` returns the exit code and the text that
//! `main` prints, so every verb except `serve` is testable in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use atoric::exactmath::num::{show_rat, Int, Rat};
use atoric::exactmath::{cf_eval, cf_expand, Chain};
use atoric::flip::{antiflip_in_bounds, cohomology_path, flip, initial_antiflip, FlipError, FlipKind};
use atoric::hjchain::{blowdown, blowup, find_wahl_splits, golden_script, parse_chain, replay_trace, MoveScript};
use atoric::mori::{generate, max_antiflip_param, validate_seed, MoriError, Verdict};
use atoric::mutate::{classify, mutate, Mutability, MutateError};
use atoric::wedge::{boundary_chain, bounded, invariants, realize, Side, WedgeParams};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::parse::{parse_rational, parse_wedge, wedge_from_chain};
use crate::render::{render_svg, Viewport};
use crate::scenario::{cp2_triangle, run_named, run_scenario, Report, Scenario, SCENARIOS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_SCENARIO_FAIL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "atoric", about = "Almost-toric wedges, mutations, flips and Mori sequences", version)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// A wedge given either as `p1,q1,p2,q2,c,a` or as a marked chain plus `a`.
#[derive(Args, Debug, Clone)]
pub struct WedgeArg {
    /// `p1,q1,p2,q2,c,a`, optionally written `Π(...)`.
    #[arg(value_parser = parse_wedge, required_unless_present = "chain")]
    pub wedge: Option<WedgeParams>,
    /// Marked chain such as `[4]-3-[]`, used with `--a`.
    #[arg(long, requires = "a", conflicts_with = "wedge")]
    pub chain: Option<String>,
    /// Edge length for `--chain`.
    #[arg(long, value_parser = parse_rational)]
    pub a: Option<Rat>,
}

impl WedgeArg {
    fn resolve(&self) -> Result<WedgeParams, Failure> {
        match (&self.wedge, &self.chain, &self.a) {
            (Some(w), _, _) => Ok(w.clone()),
            (None, Some(c), Some(a)) => wedge_from_chain(c, a).map_err(Failure::Validation),
            _ => Err(Failure::Validation("a wedge or --chain with --a is required".into())),
        }
    }
}

fn parse_bounds(s: &str) -> Result<(Rat, Rat), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected l1,l2; got {s:?}"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn parse_viewport(s: &str) -> Result<Viewport, String> {
    let parts: Vec<Rat> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    match <[Rat; 4]>::try_from(parts) {
        Ok([x0, y0, x1, y1]) => Ok(Viewport::new(x0, y0, x1, y1)),
        Err(_) => Err(format!("expected x0,y0,x1,y1; got {s:?}")),
    }
}

fn parse_seed(s: &str) -> Result<[Int; 4], String> {
    let parts: Vec<Int> = s
        .split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| format!("not an integer: {x:?}")))
        .collect::<Result<_, _>>()?;
    <[Int; 4]>::try_from(parts).map_err(|_| format!("expected p1,q1,p2,q2; got {s:?}"))
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parameters, invariants, boundary chain and mutability of a wedge.
    Wedge(WedgeArg),
    /// Mutability of one or both sides, with the witness.
    Classify {
        #[command(flatten)]
        wedge: WedgeArg,
        #[arg(long, value_parser = parse_side)]
        side: Option<Side>,
    },
    /// Mutates repeatedly on one side.
    Mutate {
        #[command(flatten)]
        wedge: WedgeArg,
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// The Mori sequence of a seed `p1,q1,p2,q2`.
    Mori {
        #[arg(value_parser = parse_seed)]
        seed: [Int; 4],
        #[arg(short, long, default_value_t = 10)]
        n: usize,
    },
    /// Antiflip of a K-positive wedge, optionally inside bounds `l1,l2`.
    Antiflip {
        #[command(flatten)]
        wedge: WedgeArg,
        #[arg(long = "a-minus", value_parser = parse_rational)]
        a_minus: Rat,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<(Rat, Rat)>,
    },
    /// Descends by left mutations and flips a K-negative wedge.
    Flip {
        #[command(flatten)]
        wedge: WedgeArg,
        #[arg(long = "a-plus", value_parser = parse_rational)]
        a_plus: Rat,
    },
    /// The cohomology-class path of an antiflip and its gap window.
    Cohomology {
        #[command(flatten)]
        wedge: WedgeArg,
        #[arg(long = "a-minus", value_parser = parse_rational)]
        a_minus: Rat,
        #[arg(long, value_parser = parse_rational)]
        l2: Rat,
    },
    /// Hirzebruch-Jung chain utilities.
    Chain {
        #[command(subcommand)]
        op: ChainOp,
    },
    /// Runs a fixed scenario, all of them, or one loaded from a JSON file.
    Scenario {
        /// One of quintic, godeaux, cp2, k1a, curve.
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        file: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["name", "file"])]
        all: bool,
    },
    /// SVG drawing of a wedge (or of the ℂP² triangle with `--cp2`).
    Render {
        #[arg(value_parser = parse_wedge, required_unless_present = "cp2")]
        wedge: Option<WedgeParams>,
        #[arg(long, conflicts_with = "wedge")]
        cp2: bool,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<(Rat, Rat)>,
        #[arg(long, value_parser = parse_viewport)]
        viewport: Option<Viewport>,
    },
    /// Starts the HTTP session service.
    Serve {
        #[arg(long, env = "ATORIC_BIND", default_value = "127.0.0.1:8080")]
        bind: String,
        /// Append-only JSON-lines move journal, replayed at startup.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ChainOp {
    /// Evaluates `[b1,...,bk]` as a continued fraction.
    Eval { chain: String },
    /// Expands a rational `p/q > 1` into its chain.
    Expand {
        #[arg(value_parser = parse_rational)]
        value: Rat,
    },
    /// Blows up at position `at` (0 = before the first entry).
    Blowup {
        chain: String,
        #[arg(long)]
        at: usize,
    },
    /// Blows down the 1 at index `at`.
    Blowdown {
        chain: String,
        #[arg(long)]
        at: usize,
    },
    /// Replays a move script (default: the built-in script from `[4,3]`).
    Replay {
        #[arg(long, default_value = "[4,3]")]
        start: String,
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// All splittings `left - c - right` into two Wahl chains.
    Splits { chain: String },
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Precondition(_) => EXIT_PRECONDITION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Precondition(m) => m,
        }
    }
}

fn flip_failure(e: FlipError) -> Failure {
    match e {
        FlipError::NonPositiveLength | FlipError::NotCanonical { .. } => Failure::Validation(e.to_string()),
        other => Failure::Precondition(other.to_string()),
    }
}

fn mori_failure(e: MoriError) -> Failure {
    Failure::Validation(e.to_string())
}

/// Result of one verb: text for humans, JSON for machines, and the exit code.
pub struct Output {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn ok(text: String, json: impl Serialize) -> Self {
        Output { code: EXIT_OK, text, json: serde_json::to_value(json).expect("serializable") }
    }
}

fn pairs(v: &[(Int, Int)]) -> String {
    v.iter().map(|(p, q)| format!("({p},{q})")).collect::<Vec<_>>().join(", ")
}

fn status_line(m: &Mutability) -> String {
    let side = match m.side {
        Side::Left => "left",
        Side::Right => "right",
    };
    format!("{side}: {:?} (criterion {})", m.status, m.criterion)
}

fn wedge_report(w: &WedgeParams) -> Output {
    let inv = invariants(w);
    let chain = boundary_chain(w);
    let (l, r) = (classify(w, Side::Left), classify(w, Side::Right));
    let mut t = String::new();
    let _ = writeln!(t, "{w}");
    let _ = writeln!(t, "sigma = {}, Delta = {}, Omega = {}, {:?}", inv.sigma, inv.delta, inv.omega, inv.k_sign);
    let _ = writeln!(t, "boundary chain {chain}");
    let _ = writeln!(t, "{}", status_line(&l));
    let _ = write!(t, "{}", status_line(&r));
    #[derive(Serialize)]
    struct J<'a> {
        wedge: &'a WedgeParams,
        invariants: atoric::wedge::WedgeInvariants,
        #[serde(rename = "boundaryChain")]
        boundary_chain: String,
        left: Mutability,
        right: Mutability,
    }
    Output::ok(t, J { wedge: w, invariants: inv, boundary_chain: chain.to_string(), left: l, right: r })
}

fn report_output(r: Report) -> Output {
    let code = if r.pass { EXIT_OK } else { EXIT_SCENARIO_FAIL };
    Output { code, text: r.to_string(), json: serde_json::to_value(&r).expect("serializable") }
}

fn chain_arg(s: &str) -> Result<Chain, Failure> {
    parse_chain(s).map_err(|e| Failure::Validation(e.to_string()))
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Wedge(w) => Ok(wedge_report(&w.resolve()?)),
        Command::Classify { wedge, side } => {
            let w = wedge.resolve()?;
            let sides = side.map_or(vec![Side::Left, Side::Right], |s| vec![s]);
            let ms: Vec<Mutability> = sides.iter().map(|s| classify(&w, *s)).collect();
            let text = ms
                .iter()
                .map(|m| format!("{}\n  witness {}", status_line(m), serde_json::to_string(&m.witness).expect("json")))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::ok(text, ms))
        }
        Command::Mutate { wedge, side, times } => {
            let mut cur = wedge.resolve()?;
            let mut orbit = vec![cur.clone()];
            for _ in 0..*times {
                cur = mutate(&cur, *side).map_err(|e| match e {
                    MutateError::NotMutable(m) => Failure::Precondition(format!("{} of {cur}", status_line(&m))),
                    other => Failure::Precondition(other.to_string()),
                })?;
                orbit.push(cur.clone());
            }
            let text = orbit.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(text, orbit))
        }
        Command::Mori { seed, n } => {
            let [p1, q1, p2, q2] = seed.clone();
            let seed = validate_seed(p1, q1, p2, q2).map_err(mori_failure)?;
            let seq = generate(&seed, *n);
            let mut text = format!("delta = {}, {:?}\n{}", seed.delta, seq.classification, pairs(&seq.display_pairs()));
            if seq.terminated {
                text.push_str("\nterminated: p left the positive quadrant");
            }
            Ok(Output::ok(text, seq))
        }
        Command::Antiflip { wedge, a_minus, bounds } => {
            let w = wedge.resolve()?;
            match bounds {
                None => {
                    let r = initial_antiflip(&w, a_minus).map_err(flip_failure)?;
                    let text = format!("{w} -> {} (delta {})", r.minus, r.delta_used);
                    Ok(Output::ok(text, r))
                }
                Some((l1, l2)) => {
                    let r = antiflip_in_bounds(&w, l1, l2, a_minus).map_err(flip_failure)?;
                    let mut text = format!(
                        "{w} -> {} (delta {})\nbounds ({}, {}) -> ({}, {})",
                        r.result.minus,
                        r.result.delta_used,
                        show_rat(l1),
                        show_rat(l2),
                        show_rat(&r.new_bounds.l1),
                        show_rat(&r.new_bounds.l2)
                    );
                    if let Ok(cap) = max_antiflip_param(l2, &r.result.delta_used) {
                        let _ = write!(
                            text,
                            "\ncap l2(1 - lambda_-^2) = {} ~ {}, certified below by {}",
                            cap.exact,
                            cap.exact.to_decimal(8),
                            show_rat(&cap.rational_under_approx)
                        );
                    }
                    match &r.budget {
                        Some(b) => {
                            let _ = write!(text, "\nbudget verdict {:?}", b.verdict);
                            if let Some(bound) = &b.bound {
                                let _ = write!(text, ", bound {} ~ {}", bound, bound.to_decimal(8));
                            }
                            if b.verdict == Verdict::FitsForever {
                                text.push_str("\ninfinite mutability certified");
                            }
                        }
                        None => text.push_str("\nno budget: the result is not infinitely right-mutable"),
                    }
                    Ok(Output::ok(text, r))
                }
            }
        }
        Command::Flip { wedge, a_plus } => {
            let w = wedge.resolve()?;
            let r = flip(&w, a_plus).map_err(flip_failure)?;
            let descent = r.descent_orbit.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" -> ");
            let text = match &r.kind {
                FlipKind::FlipTo { plus } => format!("descent {descent}\nflip to {plus}"),
                FlipKind::DivisorialContraction { sphere } => format!(
                    "descent {descent}\ndivisorial contraction: -1-sphere from ({},{}) hitting {:?} at ({},{})",
                    show_rat(&sphere.from.x),
                    show_rat(&sphere.from.y),
                    sphere.hits,
                    show_rat(&sphere.at.x),
                    show_rat(&sphere.at.y)
                ),
            };
            Ok(Output::ok(text, r))
        }
        Command::Cohomology { wedge, a_minus, l2 } => {
            let w = wedge.resolve()?;
            let c = cohomology_path(&w, a_minus, l2).map_err(flip_failure)?;
            let mut text = format!(
                "c1 path from {} to {}, affine distance {}",
                show_rat(&c.start),
                show_rat(&c.end),
                show_rat(&c.affine_distance)
            );
            if let (Some(g), Some(e)) = (&c.gap_window, &c.epsilon_exact) {
                let _ = write!(
                    text,
                    "\ngap window ({}, {}], epsilon exact {} ~ {}",
                    show_rat(&g.low),
                    show_rat(&g.high),
                    e,
                    e.to_decimal(8)
                );
            }
            Ok(Output::ok(text, c))
        }
        Command::Chain { op } => chain(op),
        Command::Scenario { name, file, all } => {
            if *all {
                let reports: Vec<Report> = SCENARIOS.iter().map(|n| run_named(n).expect("known scenario")).collect();
                let pass = reports.iter().all(|r| r.pass);
                let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n\n");
                let code = if pass { EXIT_OK } else { EXIT_SCENARIO_FAIL };
                return Ok(Output { code, text, json: serde_json::to_value(&reports).expect("serializable") });
            }
            if let Some(path) = file {
                let src = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
                let s: Scenario = serde_json::from_str(&src)
                    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
                return Ok(report_output(run_scenario(&s)));
            }
            let name = name
                .as_deref()
                .ok_or_else(|| Failure::Validation(format!("name a scenario ({}), --file or --all", SCENARIOS.join(", "))))?;
            run_named(name)
                .map(report_output)
                .ok_or_else(|| Failure::Validation(format!("unknown scenario {name:?}; known: {}", SCENARIOS.join(", "))))
        }
        Command::Render { wedge, cp2, bounds, viewport } => {
            let poly = if *cp2 {
                cp2_triangle()
            } else {
                let w = wedge.as_ref().ok_or_else(|| Failure::Validation("a wedge is required".into()))?;
                match bounds {
                    Some((l1, l2)) => bounded(w, l1, l2).map_err(|e| Failure::Validation(e.to_string()))?,
                    None => realize(w),
                }
            };
            let vp = viewport.clone().unwrap_or_else(|| Viewport::fit(&poly));
            let svg = render_svg(&poly, &vp).map_err(|e| Failure::Validation(e.to_string()))?;
            Ok(Output { code: EXIT_OK, json: Value::String(svg.clone()), text: svg.trim_end().to_string() })
        }
        Command::Serve { .. } => Err(Failure::Validation("serve is handled by the binary".into())),
    }
}

fn chain(op: &ChainOp) -> Result<Output, Failure> {
    let invalid = |e: &dyn std::fmt::Display| Failure::Validation(e.to_string());
    match op {
        ChainOp::Eval { chain } => {
            let c = chain_arg(chain)?;
            let v = cf_eval(&c);
            Ok(Output::ok(format!("{c} = {v}"), v))
        }
        ChainOp::Expand { value } => {
            let c = cf_expand(value).map_err(|e| invalid(&e))?;
            Ok(Output::ok(format!("{} = {c}", show_rat(value)), c))
        }
        ChainOp::Blowup { chain, at } => {
            let c = blowup(&chain_arg(chain)?, *at).map_err(|e| invalid(&e))?;
            Ok(Output::ok(c.to_string(), c))
        }
        ChainOp::Blowdown { chain, at } => {
            let c = blowdown(&chain_arg(chain)?, *at).map_err(|e| Failure::Precondition(e.to_string()))?;
            Ok(Output::ok(c.to_string(), c))
        }
        ChainOp::Replay { start, script } => {
            let start = chain_arg(start)?;
            let script: MoveScript = match script {
                None => golden_script(),
                Some(path) => {
                    let src = std::fs::read_to_string(path).map_err(|e| invalid(&e))?;
                    serde_json::from_str(&src).map_err(|e| invalid(&e))?
                }
            };
            let trace = replay_trace(&start, &script).map_err(|e| Failure::Precondition(e.to_string()))?;
            let mut text = start.to_string();
            for c in &trace {
                let _ = write!(text, "\n{c}");
            }
            Ok(Output::ok(text, trace))
        }
        ChainOp::Splits { chain } => {
            let splits = find_wahl_splits(&chain_arg(chain)?);
            let text = if splits.is_empty() {
                "no Wahl splittings".to_string()
            } else {
                splits.iter().map(|s| s.chain.to_string()).collect::<Vec<_>>().join("\n")
            };
            Ok(Output::ok(text, splits))
        }
    }
}

/// Runs one verb. Errors are reported as text with the matching exit code.
pub fn run_command(cli: &Cli) -> Output {
    match execute(&cli.command) {
        Ok(o) => o,
        Err(f) => Output {
            code: f.code(),
            text: format!("error: {}", f.message()),
            json: serde_json::json!({ "error": f.message() }),
        },
    }
}

/// Parses `args` (including the program name) and runs the verb, returning the
/// exit code and the rendered output. `--out` writes the output to a file.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (e.exit_code(), e.to_string()),
    };
    let out = run_command(&cli);
    let rendered = if cli.json {
        match &out.json {
            Value::String(s) if matches!(cli.command, Command::Render { .. }) => s.clone(),
            v => serde_json::to_string_pretty(v).expect("json"),
        }
    } else {
        out.text.clone()
    };
    match &cli.out {
        Some(path) if matches!(out.code, EXIT_OK | EXIT_SCENARIO_FAIL) => {
            match std::fs::write(path, format!("{}\n", rendered.trim_end())) {
                Ok(()) => (out.code, String::new()),
                Err(e) => (EXIT_VALIDATION, format!("error: {}: {e}", path.display())),
            }
        }
        _ => (out.code, rendered),
    }
}
