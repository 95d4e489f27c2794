//! Command-line front end: solve melons in closed form, run the exact game
//! oracle, verify strategy classes, generate graph families, compute the
//! alternation parameter, and play interactive attack sessions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 unrecognized graph family, 4 resource limit or timeout.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use evc::edgelist::{parse_edge_list, write_edge_list};
use evc::families::{g_k, melon_graph, sp_expression_of_melon, GkSpec, MelonSpec};
use evc::graph::{apply_defense, min_vertex_covers_bruteforce, Attack, Configuration, Graph};
use evc::melon::{classify, evc_melon, path_rotation_class, strategy_class, StrategyClass};
use evc::oracle::{
    evc_exact_with_limit, shift_witness, verify_class, OracleError, SafeSet, DEFAULT_ORACLE_LIMIT,
};
use evc::sp::{alt, parse_sp, recognize_melon, MelonStructure, SpTree};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNRECOGNIZED: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "evc",
    about = "Eternal vertex cover solver and verifier for melon graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recognize the input and report vc/evc with the strategy class size.
    Solve {
        /// Melon path lengths, comma separated (e.g. 2,2,3)
        #[arg(long, value_delimiter = ',', conflicts_with = "edges")]
        melon: Option<Vec<usize>>,
        /// Edge list file
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Exact game solver: smallest guard count with a nonempty safe family.
    Oracle {
        #[arg(long, value_delimiter = ',', conflicts_with = "edges")]
        melon: Option<Vec<usize>>,
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Vertex-count override for the exhaustive search
        #[arg(long)]
        max_n: Option<usize>,
        /// Abort after this many seconds
        #[arg(long)]
        timeout: Option<u64>,
        /// Include the full safe family in the output
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Check the strategy class closure for a melon, edge by edge.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        melon: Vec<usize>,
        /// Also require agreement with the exact oracle
        #[arg(long)]
        oracle_cross_check: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Interactive (or scripted) attacker session against a defender.
    Play {
        #[arg(long, value_delimiter = ',', conflicts_with = "edges")]
        melon: Option<Vec<usize>>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Defender::Strategy)]
        defender: Defender,
        /// Seed for scripted random attacks
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Play this many random rounds and exit instead of reading stdin
        #[arg(long)]
        auto: Option<usize>,
    },
    /// Write generated family members as edge list files.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Alternation count of a series-parallel decomposition.
    Alt {
        /// Series-parallel expression, e.g. "P(S(e,e),S(e,e))"
        #[arg(long, conflicts_with = "melon")]
        sp: Option<String>,
        #[arg(long, value_delimiter = ',')]
        melon: Option<Vec<usize>>,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Melon graph from path lengths
    Melon {
        #[arg(value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Separation family member G_k
    Gk {
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Defender {
    /// Case-analysis strategy class (melons only)
    Strategy,
    /// Lexicographically smallest safe successor from the exact oracle
    Oracle,
}

struct AppError {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> AppError {
    AppError { code, message: message.into() }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, AppError> {
    match cli.cmd {
        Cmd::Solve { melon, edges, pretty } => cmd_solve(melon, edges, pretty),
        Cmd::Oracle { melon, edges, max_n, timeout, dump, pretty } => {
            cmd_oracle(melon, edges, max_n, timeout, dump, pretty)
        }
        Cmd::Verify { melon, oracle_cross_check, pretty } => {
            cmd_verify(melon, oracle_cross_check, pretty)
        }
        Cmd::Play { melon, edges, defender, seed, auto } => {
            cmd_play(melon, edges, defender, seed, auto)
        }
        Cmd::Gen { what } => cmd_gen(what),
        Cmd::Alt { sp, melon } => cmd_alt(sp, melon),
    }
}

/// Loads the input graph and, when possible, its melon structure.
fn load_input(
    melon: Option<Vec<usize>>,
    edges: Option<PathBuf>,
) -> Result<(Graph, Option<MelonStructure>), AppError> {
    match (melon, edges) {
        (Some(lengths), None) => {
            let spec = MelonSpec::new(lengths).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            let (g, m) = melon_graph(&spec);
            Ok((g, Some(m)))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            let g = parse_edge_list(&text)
                .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            let m = recognize_melon(&g).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            Ok((g, m))
        }
        _ => Err(fail(EXIT_USAGE, "exactly one of --melon or --edges is required")),
    }
}

fn family_name(m: &MelonStructure) -> &'static str {
    match m.k() {
        1 => "path",
        2 => "cycle",
        _ => "melon",
    }
}

fn print_json<T: Serialize>(value: &T, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("output serializes");
    println!("{text}");
}

#[derive(Serialize)]
struct SolveOutput {
    vertices: usize,
    edge_count: usize,
    family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_size: Option<u64>,
}

fn cmd_solve(
    melon: Option<Vec<usize>>,
    edges: Option<PathBuf>,
    pretty: bool,
) -> Result<u8, AppError> {
    let (g, structure) = load_input(melon, edges)?;
    match structure {
        Some(m) => {
            let r = evc_melon(&m);
            print_json(
                &SolveOutput {
                    vertices: g.vertex_count(),
                    edge_count: g.edge_count(),
                    family: family_name(&m),
                    case: Some(r.case.as_str()),
                    vc: Some(r.vc),
                    evc: Some(r.evc),
                    class_size: Some(r.class_size),
                },
                pretty,
            );
            Ok(0)
        }
        None => {
            let vc = min_vertex_covers_bruteforce(&g).ok().map(|(tau, _)| tau);
            print_json(
                &SolveOutput {
                    vertices: g.vertex_count(),
                    edge_count: g.edge_count(),
                    family: "unrecognized",
                    case: None,
                    vc,
                    evc: None,
                    class_size: None,
                },
                pretty,
            );
            Ok(EXIT_UNRECOGNIZED)
        }
    }
}

#[derive(Serialize)]
struct OracleOutput {
    vertices: usize,
    edge_count: usize,
    family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vc: Option<usize>,
    evc: usize,
    safe_set_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    safe_set: Option<Vec<Vec<usize>>>,
}

fn cmd_oracle(
    melon: Option<Vec<usize>>,
    edges: Option<PathBuf>,
    max_n: Option<usize>,
    timeout: Option<u64>,
    dump: bool,
    pretty: bool,
) -> Result<u8, AppError> {
    let (g, structure) = load_input(melon, edges)?;
    let limit = max_n.unwrap_or(DEFAULT_ORACLE_LIMIT);
    let (evc, set) = run_oracle(g.clone(), limit, timeout)?;
    let vc = evc::graph::min_vertex_covers_bruteforce_with_limit(&g, limit)
        .ok()
        .map(|(tau, _)| tau);
    let output = OracleOutput {
        vertices: g.vertex_count(),
        edge_count: g.edge_count(),
        family: structure.as_ref().map_or("unrecognized", family_name),
        case: structure.as_ref().map(|m| classify(m).as_str()),
        vc,
        evc,
        safe_set_size: set.len(),
        safe_set: dump.then(|| {
            set.configs()
                .iter()
                .map(|c| c.occupied().to_vec())
                .collect()
        }),
    };
    print_json(&output, pretty);
    Ok(0)
}

/// Runs the exact solver, optionally on a worker thread with a deadline.
/// On timeout the error carries the guard count that was being searched.
fn run_oracle(
    g: Graph,
    limit: usize,
    timeout: Option<u64>,
) -> Result<(usize, SafeSet), AppError> {
    let to_app_error = |e: OracleError| {
        let code = match e {
            OracleError::LimitExceeded { .. } | OracleError::TooManyGuards(..) => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        fail(code, e.to_string())
    };
    let Some(secs) = timeout else {
        return evc_exact_with_limit(&g, limit).map_err(to_app_error);
    };

    enum Progress {
        Searching { guards: usize, upper: usize },
        Done(Result<(usize, SafeSet), OracleError>),
    }
    let (tx, rx) = mpsc::channel();
    let n = g.vertex_count();
    thread::spawn(move || {
        // mirror evc_exact, reporting each guard count as it starts
        let result = (|| {
            if !g.is_connected() {
                return evc_exact_with_limit(&g, limit); // yields the error
            }
            let (tau, _) = evc::graph::min_vertex_covers_bruteforce_with_limit(&g, limit)
                .map_err(|_| OracleError::LimitExceeded { n, limit })?;
            let upper = (2 * tau).min(n);
            for k in tau..=upper {
                let _ = tx.send(Progress::Searching { guards: k, upper });
                let set = evc::oracle::safe_set_with_limit(&g, k, limit)?;
                if !set.is_empty() {
                    return Ok((k, set));
                }
            }
            unreachable!("a safe family exists at twice the vertex cover number")
        })();
        let _ = tx.send(Progress::Done(result));
    });

    let deadline = std::time::Instant::now() + Duration::from_secs(secs);
    let mut last_seen = None;
    loop {
        let remaining = deadline.saturating_duration_since(std::time::Instant::now());
        match rx.recv_timeout(remaining) {
            Ok(Progress::Searching { guards, upper }) => last_seen = Some((guards, upper)),
            Ok(Progress::Done(result)) => return result.map_err(to_app_error),
            Err(_) => {
                let progress = match last_seen {
                    Some((guards, upper)) => {
                        format!("was testing {guards} guards (search runs up to {upper})")
                    }
                    None => "still enumerating minimum vertex covers".to_string(),
                };
                return Err(fail(
                    EXIT_LIMIT,
                    format!("timed out after {secs}s on a {n}-vertex instance; {progress}"),
                ));
            }
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    family: &'static str,
    case: &'static str,
    configs: usize,
    edges: usize,
    checked: usize,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    evc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_evc: Option<usize>,
    failures: Vec<FailureOutput>,
}

#[derive(Serialize)]
struct FailureOutput {
    config: Vec<usize>,
    edge: (usize, usize),
    reason: String,
}

fn build_class(m: &MelonStructure) -> Result<StrategyClass, AppError> {
    let built = if m.k() == 1 {
        path_rotation_class(m)
    } else {
        strategy_class(m)
    };
    built.map_err(|e| match e {
        evc::melon::MelonError::ClassTooLarge(_) => fail(EXIT_LIMIT, e.to_string()),
        _ => fail(EXIT_USAGE, e.to_string()),
    })
}

fn cmd_verify(melon: Vec<usize>, oracle_cross_check: bool, pretty: bool) -> Result<u8, AppError> {
    let spec = MelonSpec::new(melon).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let (g, m) = melon_graph(&spec);
    let sc = build_class(&m)?;
    let report = verify_class(&g, &sc);
    let result = evc_melon(&m);
    let mut ok = report.ok();
    let oracle_evc = if oracle_cross_check {
        let (exact, _) = run_oracle(g.clone(), DEFAULT_ORACLE_LIMIT, None)?;
        ok &= exact == result.evc;
        Some(exact)
    } else {
        None
    };
    let output = VerifyOutput {
        family: family_name(&m),
        case: result.case.as_str(),
        configs: sc.enumerate().len(),
        edges: g.edge_count(),
        checked: report.checked,
        ok,
        evc: Some(result.evc),
        oracle_evc,
        failures: report
            .failures
            .iter()
            .map(|f| FailureOutput {
                config: f.config.occupied().to_vec(),
                edge: f.edge,
                reason: f.reason.clone(),
            })
            .collect(),
    };
    print_json(&output, pretty);
    Ok(if ok { 0 } else { EXIT_VERIFY_FAILED })
}

fn cmd_gen(what: GenCmd) -> Result<u8, AppError> {
    let (graph, out) = match what {
        GenCmd::Melon { lengths, out } => {
            let spec = MelonSpec::new(lengths).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            (melon_graph(&spec).0, out)
        }
        GenCmd::Gk { k, out } => {
            let spec = GkSpec::new(k).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            (g_k(&spec).graph, out)
        }
    };
    fs::write(&out, write_edge_list(&graph))
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", out.display())))?;
    #[derive(Serialize)]
    struct GenOutput {
        written: String,
        vertices: usize,
        edge_count: usize,
    }
    print_json(
        &GenOutput {
            written: out.display().to_string(),
            vertices: graph.vertex_count(),
            edge_count: graph.edge_count(),
        },
        false,
    );
    Ok(0)
}

fn cmd_alt(sp: Option<String>, melon: Option<Vec<usize>>) -> Result<u8, AppError> {
    let tree: SpTree = match (sp, melon) {
        (Some(text), None) => parse_sp(&text).map_err(|e| fail(EXIT_USAGE, e.to_string()))?,
        (None, Some(lengths)) => {
            let spec = MelonSpec::new(lengths).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            sp_expression_of_melon(&melon_graph(&spec).1)
        }
        _ => return Err(fail(EXIT_USAGE, "exactly one of --sp or --melon is required")),
    };
    println!("{}", alt(&tree));
    Ok(0)
}

// --- play -------------------------------------------------------------

enum DefenderImpl {
    Strategy(StrategyClass),
    Oracle(SafeSet),
}

struct Session {
    graph: Graph,
    current: Configuration,
    defender: DefenderImpl,
    rng: u64,
    log: Vec<Round>,
}

#[derive(Serialize, Clone)]
struct Round {
    attack: (usize, usize),
    moves: Vec<(usize, usize)>,
    configuration: Vec<usize>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Session {
    fn defend(&mut self, attack: Attack) -> Result<Round, AppError> {
        let d = match &self.defender {
            DefenderImpl::Strategy(sc) => sc
                .respond(&self.current, attack)
                .map_err(|e| fail(EXIT_VERIFY_FAILED, format!("defender failed: {e}")))?,
            DefenderImpl::Oracle(set) => set
                .configs()
                .iter()
                .find_map(|c2| {
                    shift_witness(&self.graph, &self.current, c2, attack)
                        .ok()
                        .flatten()
                })
                .ok_or_else(|| fail(EXIT_VERIFY_FAILED, "defender failed: no safe successor"))?,
        };
        // fail closed: any invalid move or non-cover image aborts
        let image = apply_defense(&self.graph, &self.current, &d, attack)
            .map_err(|e| fail(EXIT_VERIFY_FAILED, format!("invalid defender move: {e}")))?;
        if !self.graph.is_vertex_cover(&image) {
            return Err(fail(EXIT_VERIFY_FAILED, "defender left an uncovered edge"));
        }
        let round = Round {
            attack: attack.endpoints(),
            moves: d.proper_moves().collect(),
            configuration: image.occupied().to_vec(),
        };
        self.current = image;
        self.log.push(round.clone());
        Ok(round)
    }

    fn random_attack(&mut self) -> Attack {
        let edges = self.graph.edges();
        let pick = (splitmix64(&mut self.rng) % edges.len() as u64) as usize;
        let (u, v) = edges[pick];
        Attack::new(&self.graph, u, v).expect("edge list entries are edges")
    }
}

fn cmd_play(
    melon: Option<Vec<usize>>,
    edges: Option<PathBuf>,
    defender: Defender,
    seed: u64,
    auto: Option<usize>,
) -> Result<u8, AppError> {
    let (graph, structure) = load_input(melon, edges)?;
    let defender = match defender {
        Defender::Strategy => {
            let m = structure
                .ok_or_else(|| fail(EXIT_UNRECOGNIZED, "strategy defender needs a melon input"))?;
            DefenderImpl::Strategy(build_class(&m)?)
        }
        Defender::Oracle => {
            let (_, set) = run_oracle(graph.clone(), DEFAULT_ORACLE_LIMIT, None)?;
            DefenderImpl::Oracle(set)
        }
    };
    let current = match &defender {
        DefenderImpl::Strategy(sc) => sc.enumerate()[0].clone(),
        DefenderImpl::Oracle(set) => set.configs()[0].clone(),
    };
    let mut session = Session { graph, current, defender, rng: seed, log: Vec::new() };

    println!(
        "{}",
        serde_json::json!({
            "vertices": session.graph.vertex_count(),
            "edge_count": session.graph.edge_count(),
            "configuration": session.current.occupied(),
        })
    );

    if let Some(rounds) = auto {
        for _ in 0..rounds {
            let attack = session.random_attack();
            let round = session.defend(attack)?;
            print_json(&round, false);
        }
        return Ok(0);
    }

    let stdin = io::stdin();
    let mut out = io::stdout();
    loop {
        out.flush().ok();
        let mut line = String::new();
        if stdin.lock().read_line(&mut line).unwrap_or(0) == 0 {
            return Ok(0);
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["quit"] | ["exit"] => return Ok(0),
            ["show"] => {
                println!(
                    "{}",
                    serde_json::json!({
                        "configuration": session.current.occupied(),
                        "is_cover": session.graph.is_vertex_cover(&session.current),
                    })
                );
            }
            ["log"] => {
                for round in &session.log {
                    print_json(round, false);
                }
            }
            ["attack", a, b] => match (a.parse(), b.parse()) {
                (Ok(u), Ok(v)) => match Attack::new(&session.graph, u, v) {
                    Ok(attack) => {
                        let round = session.defend(attack)?;
                        print_json(&round, false);
                    }
                    Err(_) => println!("not an edge"),
                },
                _ => println!("usage: attack <u> <v>"),
            },
            ["auto", n] => match n.parse::<usize>() {
                Ok(rounds) => {
                    for _ in 0..rounds {
                        let attack = session.random_attack();
                        let round = session.defend(attack)?;
                        print_json(&round, false);
                    }
                }
                Err(_) => println!("usage: auto <rounds>"),
            },
            _ => println!("commands: show | attack <u> <v> | auto <n> | log | quit"),
        }
    }
}
