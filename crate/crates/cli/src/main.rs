use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use circulant_genus::adam::{adam_equivalent, normal_form};
use circulant_genus::classify::{classify, family_table, lower_bound, upper_bound, GenusBounds};
use circulant_genus::embed::{certify, embedding_to_dot, graph_to_dot, EmbeddingExport};
use circulant_genus::graph::Ladder;
use circulant_genus::oracle::{
    girth, isomorphic_bruteforce, min_genus_bruteforce, verify_decomposition, OracleBudget,
    OracleOutcome,
};
use circulant_genus::spectral::{algebraic_connectivity, remark_table, spectral_report, RemarkRow};
use circulant_genus::{CirculantGraph, Error};

#[derive(Parser)]
#[command(name = "circgenus", version, about = "Genus bounds, embeddings and spectra of circulant graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Genus bounds with the rules that produced them.
    Classify {
        /// Graph literal `n:a1,...,ak`.
        graph: Option<CirculantGraph>,
        /// Classify every jump set of this order instead.
        #[arg(long, conflicts_with = "graph")]
        table: Option<usize>,
        /// Largest number of jumps enumerated by `--table`.
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Lower and upper bound only.
    Bounds { graph: CirculantGraph },
    /// Certified embedding, if one of the constructions applies.
    Embed {
        graph: CirculantGraph,
        /// Re-trace the exported rotation and verify Euler's relation.
        #[arg(long)]
        check: bool,
    },
    /// Exact minimum genus by exhaustive search (tiny graphs only).
    OracleGenus {
        graph: CirculantGraph,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Wall-clock cap in seconds.
        #[arg(long)]
        time: Option<f64>,
    },
    /// Exact isomorphism test by backtracking.
    OracleIso { first: CirculantGraph, second: CirculantGraph },
    /// Length of a shortest cycle.
    Girth { graph: CirculantGraph },
    /// Number of components and the circulant each one is isomorphic to.
    Components { graph: CirculantGraph },
    /// Ladder decomposition `x = r + sum m_i a_i` against a jump prefix.
    Decompose {
        graph: CirculantGraph,
        #[arg(long, default_value_t = 1)]
        prefix: usize,
        /// Vertices to decompose; all of them when omitted.
        vertices: Vec<usize>,
    },
    /// Least jump set over all unit multiples.
    AdamNormalize { graph: CirculantGraph },
    /// Whether some unit maps the first jump set onto the second.
    AdamEq { first: CirculantGraph, second: CirculantGraph },
    /// Algebraic connectivity, diameter and the genus-based bound.
    Spectra {
        graph: CirculantGraph,
        /// Genus used in the bound; defaults to the classified upper bound.
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Spectral table of `C_{2^j}(1, s-1, s)`, `s = floor(sqrt(2^j))`.
    RemarkTable {
        /// Exponents, as `a..b` (inclusive) or a comma list.
        #[arg(long = "j", default_value = "8..19")]
        j: String,
    },
    /// Family table of `n`-vertex circulants with their asserted genus.
    Table { n: usize },
}

/// Domain failure: reported on stderr with exit status 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

enum Output {
    Json(Value),
    Text(String),
}

type Outcome = std::result::Result<(Output, bool), Failure>;

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok((out, ok)) => {
            let text = match out {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Output::Text(t) => t,
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) if msg.starts_with("usage: ") => {
            eprintln!("error: {}", &msg[7..]);
            ExitCode::from(2)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(format!("usage: {msg}"))
}

/// Emits `json` as JSON, `text` as text, and the graph's DOT when asked.
fn render(cli: &Cli, json: Value, text: impl FnOnce() -> String, graph: Option<&CirculantGraph>) -> Outcome {
    let out = match cli.format {
        Format::Json => Output::Json(json),
        Format::Text => Output::Text(text()),
        Format::Dot => match graph {
            Some(g) => Output::Text(graph_to_dot(g)),
            None => return Err(usage("dot output needs a single graph")),
        },
    };
    Ok((out, true))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { graph: Some(g), .. } => {
            let b = classify(g)?;
            render(cli, to_json(&b), || bounds_text(&b), Some(g))
        }
        Command::Classify { graph: None, table: Some(n), max_k } => classify_table(cli, *n, *max_k),
        Command::Classify { graph: None, table: None, .. } => {
            Err(usage("classify needs a graph or --table <n>"))
        }
        Command::Bounds { graph } => {
            let (lower, lr) = lower_bound(graph)?;
            let (upper, ur) = upper_bound(graph)?;
            let v = json!({"graph": graph, "lower": lower, "upper": upper, "lowerRules": lr, "upperRules": ur});
            render(cli, v, || format!("{graph}: {lower} <= genus <= {upper}\n"), Some(graph))
        }
        Command::Embed { graph, check } => embed(cli, graph, *check),
        Command::OracleGenus { graph, max_nodes, time } => {
            let mut budget = OracleBudget::genus();
            if let Some(m) = max_nodes {
                budget.max_rotation_nodes = *m;
            }
            if let Some(t) = time {
                budget.time_cap = Duration::try_from_secs_f64(*t)
                    .map_err(|_| usage(format!("bad --time {t}")))?;
            }
            let out = min_genus_bruteforce(graph, budget)?;
            let ok = out.value().is_some();
            let text = match &out {
                OracleOutcome::Value { value } => format!("{graph}: genus {value}\n"),
                other => format!("{graph}: {}\n", outcome_word(other)),
            };
            let (o, _) = render(cli, json!({"graph": graph, "genus": out}), || text, Some(graph))?;
            Ok((o, ok))
        }
        Command::OracleIso { first, second } => {
            let out = isomorphic_bruteforce(first, second, OracleBudget::isomorphism());
            let ok = out.value().is_some();
            let text = match &out {
                OracleOutcome::Value { value } => format!("{first} ~ {second}: {value}\n"),
                other => format!("{first} ~ {second}: {}\n", outcome_word(other)),
            };
            let v = json!({"first": first, "second": second, "isomorphic": out});
            let (o, _) = render(cli, v, || text, None)?;
            Ok((o, ok))
        }
        Command::Girth { graph } => {
            let gi = girth(graph);
            let text = match gi {
                Some(x) => format!("{graph}: girth {x}\n"),
                None => format!("{graph}: acyclic\n"),
            };
            render(cli, json!({"graph": graph, "girth": gi}), || text, Some(graph))
        }
        Command::Components { graph } => {
            let c = graph.components();
            let text = format!("{graph}: {} components, each {}\n", c.d, c.quotient);
            render(cli, to_json(&c), || text, Some(graph))
        }
        Command::Decompose { graph, prefix, vertices } => decompose(cli, graph, *prefix, vertices),
        Command::AdamNormalize { graph } => {
            let nf = normal_form(graph);
            let text = format!("{graph} -> {} (multiplier {})\n", nf.canonical, nf.multiplier);
            render(cli, to_json(&nf), || text, Some(&nf.canonical))
        }
        Command::AdamEq { first, second } => {
            let r = adam_equivalent(first, second);
            let text = match r {
                Some(r) => format!("{second} = {r} * {first}: Adam-equivalent\n"),
                None => format!("{first}, {second}: not Adam-equivalent\n"),
            };
            let v = json!({"first": first, "second": second, "equivalent": r.is_some(), "multiplier": r});
            render(cli, v, || text, None)
        }
        Command::Spectra { graph, genus } => {
            let genus = match genus {
                Some(g) => *g,
                None => classify(graph)?.upper,
            };
            let report = spectral_report(graph, genus)?;
            let a = algebraic_connectivity(graph);
            let text = format!(
                "{graph}: a(G) = {:.6}, D(G) = {}, 4/(nD) = {:.6e}, bound(g={genus}) = {}\n",
                a.value,
                report.diameter,
                report.lower_bound_four,
                report.boshier_bound.value.map_or("n/a".into(), |v| format!("{v:.6}")),
            );
            render(cli, to_json(&report), || text, Some(graph))
        }
        Command::RemarkTable { j } => {
            let exps = parse_exponents(j)?;
            let rows = remark_table(&exps)?;
            render(cli, to_json(&rows), || remark_text(&rows), None)
        }
        Command::Table { n } => family(cli, *n),
    }
}

fn outcome_word<T>(o: &OracleOutcome<T>) -> String {
    match o {
        OracleOutcome::Value { .. } => "value".into(),
        OracleOutcome::Unknown { nodes, .. } => format!("unknown after {nodes} nodes"),
        OracleOutcome::OverBudget { reason } => format!("over budget ({reason})"),
    }
}

fn bounds_text(b: &GenusBounds) -> String {
    let exact = b.exact.map_or("-".into(), |x| x.to_string());
    let rules: Vec<String> = b.provenance.iter().map(|r| to_json(r).as_str().unwrap_or("").to_string()).collect();
    format!(
        "{}: lower {} upper {} exact {} (normal form {}) [{}]\n",
        b.graph,
        b.lower,
        b.upper,
        exact,
        b.normal_form.canonical,
        rules.join(", ")
    )
}

fn embed(cli: &Cli, graph: &CirculantGraph, check: bool) -> Outcome {
    let Some((rs, report)) = certify(graph)? else {
        return Err(Failure(format!("{graph}: no construction applies")));
    };
    let export = EmbeddingExport::new(&rs, &report);
    let verified = if check { Some(export.recheck()?) } else { None };
    let ok = verified != Some(false);
    let out = match cli.format {
        Format::Dot => Output::Text(embedding_to_dot(&rs, &report)),
        Format::Json => {
            let mut v = to_json(&export);
            v["faceSizes"] = to_json(&report.face_sizes);
            if let Some(ok) = verified {
                v["verified"] = json!(ok);
            }
            Output::Json(v)
        }
        Format::Text => {
            let mut t = format!("{graph}: genus {}, {} faces {:?}\n", report.genus, report.f, report.face_sizes);
            for (v, cycle) in rs.rotation().iter().enumerate() {
                t.push_str(&format!("  {v}: {cycle:?}\n"));
            }
            if let Some(ok) = verified {
                t.push_str(&format!("verified: {ok}\n"));
            }
            Output::Text(t)
        }
    };
    Ok((out, ok))
}

fn decompose(cli: &Cli, graph: &CirculantGraph, prefix: usize, vertices: &[usize]) -> Outcome {
    if prefix == 0 || prefix > graph.k() {
        return Err(usage(format!("--prefix must lie in 1..={}", graph.k())));
    }
    let ladder = Ladder::new(graph.n(), &graph.jumps()[..prefix]);
    let xs: Vec<usize> = if vertices.is_empty() { (0..graph.n()).collect() } else { vertices.to_vec() };
    let mut rows = Vec::new();
    for &x in &xs {
        let dec = circulant_genus::decompose(graph, prefix, x)?;
        rows.push(json!({"vertex": x, "r": dec.r, "coefficients": dec.coefficients}));
    }
    let verified = verify_decomposition(graph, prefix);
    let text = {
        let mut t = format!("{graph} prefix {prefix}: d = {}, bounds {:?}, verified {verified}\n", ladder.d, ladder.bounds);
        for r in &rows {
            t.push_str(&format!("  {} = r {} + {}\n", r["vertex"], r["r"], r["coefficients"]));
        }
        t
    };
    let v = json!({"graph": graph, "ladder": ladder, "verified": verified, "decompositions": rows});
    let (o, _) = render(cli, v, || text, Some(graph))?;
    Ok((o, verified))
}

fn parse_exponents(list: &str) -> std::result::Result<Vec<u32>, Failure> {
    let bad = || usage(format!("bad exponent list {list:?}"));
    if let Some((a, b)) = list.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    list.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn remark_text(rows: &[RemarkRow]) -> String {
    let mut t = format!(
        "{:>8} {:>6} {:>6} {:>14} {:>12} {:>12} {:>8} {:>11}\n",
        "n", "s-1", "D(G)", "4/(nD)", "a(G)", "96/(√2√n-18)", "D(1,s-1)", "printed s-1"
    );
    for r in rows {
        let printed = r.printed_second_jump.map_or("-".into(), |p| p.to_string());
        t.push_str(&format!(
            "{:>8} {:>6} {:>6} {:>14.6e} {:>12.6} {:>12.6} {:>8} {:>11}\n",
            r.n,
            r.second_jump,
            r.report.diameter,
            r.report.lower_bound_four,
            r.report.algebraic_connectivity,
            r.closed_form_bound,
            r.two_jump_diameter,
            printed
        ));
    }
    t
}

/// Applies `f` to every item on `threads` workers, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.max(1).min(items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn jump_sets(n: usize, max_k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), 1usize)];
    while let Some((set, next)) = stack.pop() {
        if !set.is_empty() {
            out.push(set.clone());
        }
        if set.len() == max_k {
            continue;
        }
        for a in next..=n / 2 {
            let mut s = set.clone();
            s.push(a);
            stack.push((s, a + 1));
        }
    }
    out.sort();
    out
}

fn classify_table(cli: &Cli, n: usize, max_k: usize) -> Outcome {
    if n < 3 {
        return Err(usage("--table needs n >= 3"));
    }
    let sets = jump_sets(n, max_k);
    let rows: Vec<Value> = par_map(&sets, cli.threads, |set| {
        let jumps: Vec<i64> = set.iter().map(|&a| a as i64).collect();
        let g = CirculantGraph::new(n, &jumps).expect("jumps in range");
        match classify(&g) {
            Ok(b) => to_json(&b),
            Err(_) => json!({"graph": g, "components": g.components()}),
        }
    });
    let text = || {
        let mut t = String::new();
        for r in &rows {
            let g: CirculantGraph = serde_json::from_value(r["graph"].clone()).expect("graph");
            if r.get("components").is_some() {
                t.push_str(&format!("{g}: disconnected ({} components)\n", r["components"]["d"]));
            } else {
                let exact = r.get("exact").map_or("-".into(), |x| x.to_string());
                t.push_str(&format!("{g}: lower {} upper {} exact {exact}\n", r["lower"], r["upper"]));
            }
        }
        t
    };
    render(cli, Value::Array(rows.clone()), text, None)
}

fn family(cli: &Cli, n: usize) -> Outcome {
    let rows = family_table(n)?;
    let mut out = Vec::new();
    let mut text = String::new();
    for row in &rows {
        let checks = par_map(&row.members, cli.threads, |g| {
            let b = classify(g).ok();
            let emb = certify(g).ok().flatten().map(|(_, r)| (r.genus, r.all_faces_of_size(4)));
            (b, emb)
        });
        let exact = checks.iter().filter(|(b, _)| b.as_ref().and_then(|b| b.exact) == Some(row.genus)).count();
        let embedded = checks.iter().filter(|(_, e)| e.map(|e| e.0) == Some(row.genus)).count();
        let quad = checks.iter().filter(|(_, e)| *e == Some((row.genus, true))).count();
        text.push_str(&format!(
            "k={} scales {:?} genus {}: {} members, {} embedded at that genus ({} all-quad), {} proved exact\n",
            row.k, row.scales, row.genus, row.members.len(), embedded, quad, exact
        ));
        out.push(json!({
            "k": row.k, "scales": row.scales, "genus": row.genus,
            "members": row.members.iter().map(|g| g.literal()).collect::<Vec<_>>(),
            "embeddedAtGenus": embedded, "allQuad": quad, "provedExact": exact,
        }));
    }
    render(cli, Value::Array(out), || text, None)
}
