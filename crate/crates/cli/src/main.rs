use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dipath::bounds::bounds_row;
use dipath::construct::{
    balanced_blow_up, blow_up, iterated_balanced_blow_up, named_base, BlowupSpec, IteratedSpec,
};
use dipath::flag::{build_basis, export_sdp, verify_certificate, SdpCertificate, Verdict};
use dipath::format::{parse_graph, to_compact, write_arc_text};
use dipath::grid::{
    builtin_cases, certify, parse_cases, restricted_problem, standard_problem, BoundMode,
    GridCertificate, Slack,
};
use dipath::rational::{fmt_decimal, fmt_rational, parse_rational, ratio};
use dipath::search::{exhaustive_max, local_search, MoveSet, SearchReport};
use dipath::{
    are_isomorphic, count_induced, count_p4_through, density, enumerate_family, Constraint,
    OrientedGraph, Rational, VertexSet,
};

#[derive(Parser)]
#[command(name = "dipath", version, about = "Induced directed-path densities in oriented graphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DIPATH_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induced copies of a pattern in a graph.
    Count(CountArgs),
    /// Induced density of a pattern in a graph.
    Density(DensityArgs),
    /// All isomorphism classes on n vertices.
    Enumerate(EnumerateArgs),
    /// Blow-up constructions.
    Construct(ConstructArgs),
    /// Maximise the number of induced 4-paths.
    Search(SearchArgs),
    /// Grid certificate for the exceptional-vertex program.
    CertifyGrid(GridArgs),
    /// Closed-form bounds on path inducibility.
    Bounds(BoundsArgs),
    /// Flag-algebra program export and certificate verification.
    Flag {
        #[command(subcommand)]
        action: FlagAction,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `p4`, `t3`, `c5`, `ck:<k>`, `path:<k>` or a graph file.
    #[arg(long, default_value = "p4")]
    pattern: String,
    /// Only 4-paths containing all these vertices (comma separated).
    #[arg(long, value_delimiter = ',')]
    through: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "p4")]
    pattern: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Compact,
    Arcs,
    Csv,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t3_free: bool,
    #[arg(long, value_enum, default_value = "compact")]
    format: GraphFormat,
}

#[derive(Args)]
struct ConstructArgs {
    /// `c5`, `ck:<k>` or `path:<k>`.
    #[arg(long, default_value = "c5")]
    base: String,
    /// Total vertex count of a balanced (or iterated) blow-up.
    #[arg(long, conflicts_with = "sizes")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    iterated: bool,
    /// Explicit class sizes, one per base vertex.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "arcs")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t3_free: bool,
    #[arg(long, conflicts_with = "local")]
    exhaustive: bool,
    /// Hill-climb from the graph in this file.
    #[arg(long)]
    local: Option<PathBuf>,
    /// Maximum number of accepted moves.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// Also allow single-pair rewiring moves.
    #[arg(long)]
    rewire: bool,
    /// Directory for maximizer graph files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    Tight,
}

#[derive(Args)]
struct GridArgs {
    /// `1`..`4`, `all` or `standard`.
    #[arg(long, default_value = "all")]
    case: String,
    /// Alternative case-definition file.
    #[arg(long)]
    cases_file: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    resolution: u64,
    /// Grid steps of slack per constraint, or `auto` for the sound minimum.
    #[arg(long, default_value = "auto")]
    slack: String,
    #[arg(long, value_enum, default_value = "paper")]
    mode: Mode,
    /// Certificate file (a directory when several cases run).
    #[arg(long)]
    emit_certificate: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value = "4..6")]
    k_range: String,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Subcommand)]
enum FlagAction {
    /// Write the sparse SDP for an external solver.
    Export {
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a directory of rational certificate blocks against a bound.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        bound: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Write the all-zero certificate (one file per type).
    ZeroCert {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Bad input detected by the front end; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_status(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<dipath::Error>() {
        Some(
            dipath::Error::ResourceLimit(_)
            | dipath::Error::Unsupported(_)
            | dipath::Error::Io(_),
        )
        | None => 1,
        Some(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut out = String::new();
    let code = match cli.command {
        Command::Count(a) => count(a, &mut out)?,
        Command::Density(a) => density_cmd(a, &mut out)?,
        Command::Enumerate(a) => enumerate(a, &mut out)?,
        Command::Construct(a) => construct(a, &mut out)?,
        Command::Search(a) => search(a, &mut out)?,
        Command::CertifyGrid(a) => certify_grid(a, &mut out)?,
        Command::Bounds(a) => bounds(a, &mut out)?,
        Command::Flag { action } => flag(action, &mut out)?,
    };
    print!("{out}");
    Ok(code)
}

fn read_graph(path: &Path) -> Result<OrientedGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pattern(spec: &str) -> Result<OrientedGraph> {
    match spec.to_ascii_lowercase().as_str() {
        "p4" => return Ok(OrientedGraph::directed_path(4)?),
        "t3" => return Ok(OrientedGraph::transitive_tournament(3)),
        _ => {}
    }
    let path = Path::new(spec);
    if path.exists() {
        return read_graph(path);
    }
    named_base(spec).map_err(|_| {
        usage(format!(
            "unknown pattern `{spec}` (expected p4, t3, c5, ck:<k>, path:<k> or a graph file)"
        ))
    })
}

fn exact(r: &Rational) -> String {
    format!("{} ({})", fmt_rational(r), fmt_decimal(r, 6))
}

fn constraint(t3_free: bool) -> Constraint {
    if t3_free {
        Constraint::T3Free
    } else {
        Constraint::AllOriented
    }
}

fn count(a: CountArgs, out: &mut String) -> Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let n = match &a.through {
        Some(vs) => {
            if a.pattern.to_ascii_lowercase() != "p4" {
                return Err(usage("--through is only supported for the p4 pattern"));
            }
            count_p4_through(&g, &VertexSet::new(g.n(), vs.iter().copied())?)?
        }
        None => count_induced(&g, &pattern(&a.pattern)?)?,
    };
    match a.format {
        Format::Text => writeln!(out, "{n}")?,
        Format::Csv => writeln!(out, "pattern,count\n{},{n}", a.pattern)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn density_cmd(a: DensityArgs, out: &mut String) -> Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let d = density(&g, &pattern(&a.pattern)?)?;
    match a.format {
        Format::Text => writeln!(out, "{}", exact(&d))?,
        Format::Csv => writeln!(out, "pattern,density\n{},{}", a.pattern, fmt_rational(&d))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn enumerate(a: EnumerateArgs, out: &mut String) -> Result<ExitCode> {
    let family = enumerate_family(a.n, constraint(a.t3_free))?;
    if a.format == GraphFormat::Csv {
        writeln!(out, "index,graph")?;
    }
    for (i, g) in family.graphs().iter().enumerate() {
        match a.format {
            GraphFormat::Compact => writeln!(out, "{}", to_compact(g))?,
            GraphFormat::Csv => writeln!(out, "{i},{}", to_compact(g))?,
            GraphFormat::Arcs => writeln!(out, "# graph {i}\n{}", write_arc_text(g))?,
        }
    }
    if a.format != GraphFormat::Csv {
        writeln!(out, "# count={}", family.len())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn construct(a: ConstructArgs, out: &mut String) -> Result<ExitCode> {
    let base = named_base(&a.base)?;
    let g = match (a.n, a.sizes) {
        (Some(n), None) if a.iterated => iterated_balanced_blow_up(&IteratedSpec::new(base, n)?),
        (Some(n), None) => balanced_blow_up(&base, n)?,
        (None, Some(sizes)) => blow_up(&BlowupSpec::new(base, sizes)?),
        _ => return Err(usage("give either --n or --sizes")),
    };
    let text = match a.format {
        GraphFormat::Arcs => write_arc_text(&g),
        GraphFormat::Compact => format!("{}\n", to_compact(&g)),
        GraphFormat::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v) in g.arcs() {
                writeln!(s, "{u},{v}")?;
            }
            s
        }
    };
    match a.out {
        Some(path) => std::fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => out.push_str(&text),
    }
    Ok(ExitCode::SUCCESS)
}

/// Short name for a maximizer: `C5`, `C5[a,b,c,d,e]` for a blow-up (class sizes
/// along the cycle, largest rotation), else its code.
fn describe(g: &OrientedGraph) -> Result<String> {
    // twins share both neighbourhoods, hence are non-adjacent
    let mut classes: Vec<(Vec<u64>, Vec<u64>, Vec<usize>)> = Vec::new();
    for v in 0..g.n() {
        let key = (g.out_row(v).to_vec(), g.in_row(v).to_vec());
        match classes.iter_mut().find(|(o, i, _)| (o, i) == (&key.0, &key.1)) {
            Some(c) => c.2.push(v),
            None => classes.push((key.0, key.1, vec![v])),
        }
    }
    if classes.len() != 5 {
        return Ok(to_compact(g));
    }
    let reps: Vec<usize> = classes.iter().map(|c| c.2[0]).collect();
    let quotient = g.induced_subgraph(&VertexSet::new(g.n(), reps.iter().copied())?)?;
    if !are_isomorphic(&quotient, &OrientedGraph::directed_cycle(5)?)? {
        return Ok(to_compact(g));
    }
    if g.n() == 5 {
        return Ok("C5".into());
    }
    let sizes: Vec<usize> = classes.iter().map(|c| c.2.len()).collect();
    let position = |v: usize| reps.iter().position(|&r| r == v).expect("representative");
    let mut order = vec![0usize];
    while order.len() < 5 {
        let last = reps[*order.last().unwrap()];
        let next = reps.iter().copied().find(|&r| g.has_arc(last, r)).expect("cycle successor");
        order.push(position(next));
    }
    let walk: Vec<usize> = order.iter().map(|&c| sizes[c]).collect();
    let best = (0..5)
        .map(|k| walk[k..].iter().chain(&walk[..k]).copied().collect::<Vec<_>>())
        .max()
        .unwrap();
    let parts: Vec<String> = best.iter().map(|s| s.to_string()).collect();
    Ok(format!("C5[{}]", parts.join(",")))
}

fn search(a: SearchArgs, out: &mut String) -> Result<ExitCode> {
    let c = constraint(a.t3_free);
    let report: SearchReport = match (&a.local, a.exhaustive) {
        (Some(path), _) => {
            let start = read_graph(path)?;
            if a.n.is_some_and(|n| n != start.n()) {
                return Err(usage(format!("--n differs from the start graph's {} vertices", start.n())));
            }
            let moves = MoveSet {
                clone_delete: true,
                rewire_pair: a.rewire,
            };
            local_search(&start, c, moves, a.budget)?
        }
        (None, true) => {
            let n = a.n.ok_or_else(|| usage("--exhaustive needs --n"))?;
            exhaustive_max(n, c, &OrientedGraph::directed_path(4)?)?
        }
        (None, false) => return Err(usage("choose --exhaustive or --local <start-file>")),
    };
    let names = report
        .maximizers
        .iter()
        .map(describe)
        .collect::<Result<Vec<_>>>()?;
    match a.format {
        Format::Text => {
            let iso = if names.len() == 1 { names[0].clone() } else { "-".into() };
            writeln!(
                out,
                "max={} maximizers={} iso={iso}",
                report.max_count,
                report.maximizers.len()
            )?;
            writeln!(out, "n={} constraint={}", report.n, report.constraint.name())?;
            if report.exhaustive {
                writeln!(out, "examined={} labeled graphs", report.examined)?;
            } else {
                writeln!(
                    out,
                    "examined={} candidate moves accepted={}",
                    report.examined, report.accepted_moves
                )?;
            }
            for (g, name) in report.maximizers.iter().zip(&names) {
                writeln!(out, "maximizer {} {name}", to_compact(g))?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,constraint,mode,max,maximizer,name,examined,accepted_moves")?;
            let mode = if report.exhaustive { "exhaustive" } else { "local" };
            for (g, name) in report.maximizers.iter().zip(&names) {
                writeln!(
                    out,
                    "{},{},{mode},{},{},{name},{},{}",
                    report.n,
                    report.constraint.name(),
                    report.max_count,
                    to_compact(g),
                    report.examined,
                    report.accepted_moves
                )?;
            }
        }
    }
    if let Some(dir) = a.out_dir {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, g) in report.maximizers.iter().enumerate() {
            std::fs::write(dir.join(format!("maximizer-{i}.txt")), write_arc_text(g))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn certify_grid(a: GridArgs, out: &mut String) -> Result<ExitCode> {
    if a.resolution < 2 {
        return Err(usage("--resolution must be at least 2"));
    }
    let slack = if a.slack == "auto" {
        Slack::Auto
    } else {
        Slack::Steps(
            parse_rational(&a.slack).map_err(|_| usage(format!("bad --slack `{}`", a.slack)))?,
        )
    };
    let mode = match a.mode {
        Mode::Paper => BoundMode::Paper,
        Mode::Tight => BoundMode::Tight,
    };
    let cases = match &a.cases_file {
        Some(p) => parse_cases(
            &std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?,
        )?,
        None => builtin_cases(),
    };
    let problems = match a.case.as_str() {
        "standard" => vec![("standard".to_string(), standard_problem())],
        "all" => cases
            .iter()
            .map(|c| Ok((c.id.to_string(), restricted_problem(c)?)))
            .collect::<Result<Vec<_>>>()?,
        id => {
            let c = cases
                .iter()
                .find(|c| c.id.to_string() == id)
                .ok_or_else(|| usage(format!("unknown case `{id}`")))?;
            vec![(id.to_string(), restricted_problem(c)?)]
        }
    };
    let sampled_limit = ratio(1, 25);
    let certified_limit = ratio(7, 100);
    if a.format == Format::Csv {
        writeln!(out, "case,resolution,mode,evaluated,feasible,sampled_max,certified_bound")?;
    }
    let mut certs: Vec<(String, GridCertificate)> = Vec::new();
    for (id, p) in &problems {
        let cert = certify(p, a.resolution, &slack, mode)?;
        let opt = |r: &Option<Rational>| r.as_ref().map_or("none".to_string(), fmt_rational);
        match a.format {
            Format::Csv => writeln!(
                out,
                "{id},{},{},{},{},{},{}",
                a.resolution,
                mode.name(),
                cert.evaluated,
                cert.feasible,
                opt(&cert.sampled_max),
                opt(&cert.certified_bound)
            )?,
            Format::Text => {
                let rel = |v: &Option<Rational>, limit: &Rational, what: &str| match v {
                    Some(v) if v < limit => format!("{what}<{}", fmt_rational(limit)),
                    Some(_) => format!("{what}>={}", fmt_rational(limit)),
                    None => format!("{what}=none"),
                };
                let show = |v: &Option<Rational>| v.as_ref().map_or("none".to_string(), exact);
                writeln!(out, "case {id} resolution={} mode={}", a.resolution, mode.name())?;
                writeln!(out, "  evaluated={} feasible={}", cert.evaluated, cert.feasible)?;
                writeln!(out, "  sampled_max={}", show(&cert.sampled_max))?;
                writeln!(out, "  certified_bound={}", show(&cert.certified_bound))?;
                writeln!(
                    out,
                    "  {} {}",
                    rel(&cert.sampled_max, &sampled_limit, "sampled"),
                    rel(&cert.certified_bound, &certified_limit, "certified")
                )?;
            }
        }
        certs.push((id.clone(), cert));
    }
    if let Some(path) = a.emit_certificate {
        if certs.len() == 1 {
            std::fs::write(&path, certs[0].1.to_text())
                .with_context(|| format!("writing {}", path.display()))?;
        } else {
            std::fs::create_dir_all(&path)?;
            for (id, cert) in &certs {
                std::fs::write(path.join(format!("case-{id}.cert")), cert.to_text())?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(a: BoundsArgs, out: &mut String) -> Result<ExitCode> {
    let (lo, hi) = a
        .k_range
        .split_once("..")
        .and_then(|(lo, hi)| Some((lo.trim().parse::<u64>().ok()?, hi.trim().parse::<u64>().ok()?)))
        .ok_or_else(|| usage(format!("--k-range expects `a..b`, got `{}`", a.k_range)))?;
    if lo > hi {
        return Err(usage(format!("empty range {lo}..{hi}")));
    }
    let rows = (lo..=hi).map(bounds_row).collect::<dipath::Result<Vec<_>>>()?;
    match a.format {
        TableFormat::Csv => {
            writeln!(out, "{}", dipath::bounds::BoundsRow::FIELDS.join(","))?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.k,
                    fmt_rational(&r.lower_iterated),
                    fmt_rational(&r.lower_generic),
                    fmt_rational(&r.conj_t3free),
                    fmt_rational(&r.upper_pg),
                    fmt_rational(&r.upper_knv_t3free),
                    r.upper_fa.as_ref().map_or("", |q| q.decimal)
                )?;
            }
        }
        TableFormat::Table => {
            for r in &rows {
                writeln!(out, "k={}", r.k)?;
                for (name, v) in [
                    ("lower_iterated", &r.lower_iterated),
                    ("lower_generic", &r.lower_generic),
                    ("conj_t3free", &r.conj_t3free),
                    ("upper_pg", &r.upper_pg),
                    ("upper_knv_t3free", &r.upper_knv_t3free),
                ] {
                    writeln!(out, "  {name:<17} {}", exact(v))?;
                }
                match &r.upper_fa {
                    Some(q) => writeln!(out, "  {:<17} {} (quoted)", "upper_fa", q.decimal)?,
                    None => writeln!(out, "  {:<17} -", "upper_fa")?,
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn flag(action: FlagAction, out: &mut String) -> Result<ExitCode> {
    let basis = build_basis()?;
    match action {
        FlagAction::Export { out: path } => {
            export_sdp(&basis, &basis.target_vector(), &path)
                .with_context(|| format!("writing {}", path.display()))?;
            let sizes: Vec<String> = (0..basis.types.len())
                .map(|t| basis.flag_count(t).to_string())
                .collect();
            writeln!(
                out,
                "constraints={} type_blocks={} wrote {}",
                basis.targets.len(),
                sizes.join(","),
                path.display()
            )?;
            Ok(ExitCode::SUCCESS)
        }
        FlagAction::ZeroCert { out: path } => {
            let max = basis
                .target_vector()
                .into_iter()
                .max()
                .ok_or_else(|| anyhow!("empty target family"))?;
            SdpCertificate::zero(&basis, max.clone()).write_dir(&path)?;
            writeln!(out, "zero certificate for bound {} in {}", fmt_rational(&max), path.display())?;
            Ok(ExitCode::SUCCESS)
        }
        FlagAction::Verify { cert, bound, format } => {
            let bound = parse_rational(&bound).map_err(|_| usage(format!("bad --bound `{bound}`")))?;
            if !cert.is_dir() {
                bail!(usage(format!("{} is not a directory", cert.display())));
            }
            let cert = SdpCertificate::read_dir(&cert, bound.clone())?;
            let verdict = verify_certificate(&basis, &cert)?;
            let csv = format == Format::Csv;
            if csv {
                writeln!(out, "verdict,bound,detail")?;
            }
            let b = fmt_rational(&bound);
            match &verdict {
                Verdict::Proves { tight } if csv => {
                    let codes: Vec<String> = tight.iter().map(|h| to_compact(&h.graph())).collect();
                    writeln!(out, "proves,{b},{}", codes.join(" "))?;
                }
                Verdict::Proves { tight } => {
                    writeln!(out, "proves bound={} tight={}", exact(&bound), tight.len())?;
                    for h in tight {
                        writeln!(out, "tight {}", to_compact(&h.graph()))?;
                    }
                }
                Verdict::FailsAt { target, value } if csv => {
                    writeln!(out, "fails,{b},{} {}", to_compact(&target.graph()), fmt_rational(value))?
                }
                Verdict::FailsAt { target, value } => writeln!(
                    out,
                    "fails bound={} at={} value={}",
                    exact(&bound),
                    to_compact(&target.graph()),
                    exact(value)
                )?,
                Verdict::NotPsd { type_code } if csv => writeln!(out, "not-psd,{b},{type_code}")?,
                Verdict::NotPsd { type_code } => writeln!(out, "not-psd type={type_code}")?,
            }
            Ok(match verdict {
                Verdict::Proves { .. } => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            })
        }
    }
}
