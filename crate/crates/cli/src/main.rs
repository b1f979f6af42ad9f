mod args;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use log::{debug, info};
use powerflow_core::equilibria::{realized_multisink_equilibrium, scale_spread, EQUILIBRIUM_TOL};
use powerflow_core::io::{write_comparison, write_trajectory};
use powerflow_core::{
    assemble_multisink_equilibrium, centrality_profile, classify, compare_models, predict_limit,
    simulate, AssembledEquilibrium, Error, Prediction, RelativeInteractionMatrix, Status,
    StructureKind,
};

use args::{Cli, Command, EquilibriumArgs, NetworkArgs, RunArgs};
use report::{fmt_nodes, fmt_vec, limit_label};

/// A failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonSquare { .. }
            | Error::TooSmall { .. }
            | Error::NonFinite { .. }
            | Error::NegativeEntry { .. }
            | Error::DiagonalNonzero { .. }
            | Error::RowSumOutOfTolerance { .. }
            | Error::Parse { .. }
            | Error::EmptyAdviceSet { .. }
            | Error::NotInSimplex { .. }
            | Error::InvalidInitial(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("POWERFLOW_LOG", "off"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a, &mut out),
        Command::Centrality(a) => cmd_centrality(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a, &mut out),
        Command::Equilibrium(a) => cmd_equilibrium(a, &mut out),
        Command::Compare(a) => cmd_compare(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("powerflow: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(args: &NetworkArgs) -> Result<RelativeInteractionMatrix, Failure> {
    let c = args.load()?;
    info!("loaded network with {} nodes", c.n());
    Ok(c)
}

fn cmd_classify(a: &NetworkArgs, out: &mut impl Write) -> CliResult {
    let c = load(a)?;
    let s = classify(&c);
    let star = |h: Option<usize>| h.map(|h| format!(", star center = {}", h + 1)).unwrap_or_default();
    match s.kind() {
        StructureKind::Irreducible { star_center } => {
            write!(out, "irreducible{}", star(*star_center))?;
            if s.is_degenerate() {
                write!(out, " (two nodes: every state is fixed)")?;
            }
            writeln!(out)?;
        }
        StructureKind::ReducibleReachable { reachable, star_center } => {
            writeln!(
                out,
                "reducible, r={} globally reachable: {}; reducible nodes: {}{}",
                reachable.len(),
                fmt_nodes(reachable),
                fmt_nodes(&s.non_sink_nodes()),
                star(*star_center)
            )?;
        }
        StructureKind::MultiSink { sinks, non_sink, .. } => {
            let list: Vec<String> = sinks.iter().map(|k| fmt_nodes(k)).collect();
            write!(out, "K={} sinks: {}; m={} non-sink", sinks.len(), list.join(", "), non_sink.len())?;
            if !non_sink.is_empty() {
                write!(out, ": {}", fmt_nodes(non_sink))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

fn cmd_centrality(a: &NetworkArgs, out: &mut impl Write) -> CliResult {
    let c = load(a)?;
    let s = classify(&c);
    let p = centrality_profile(&c, &s)?;
    match &p.global {
        Some(g) => {
            writeln!(out, "node,c")?;
            for (i, v) in g.iter().enumerate() {
                writeln!(out, "{},{v}", i + 1)?;
            }
        }
        None => {
            writeln!(out, "sink,node,c")?;
            for (k, (nodes, v)) in p.sinks.iter().zip(&p.per_sink).enumerate() {
                for (i, ci) in nodes.iter().zip(v) {
                    writeln!(out, "{},{},{ci}", k + 1, i + 1)?;
                }
            }
        }
    }
    Ok(())
}

fn open_out(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn cmd_simulate(a: &RunArgs, out: &mut impl Write) -> CliResult {
    let c = load(&a.network)?;
    let x0 = a.initial(c.n())?;
    let opts = a.options()?;
    let tr = simulate(a.model.into(), &c, &x0, &opts)?;
    debug!("{} steps, status {}", tr.steps(), tr.status);

    match &a.out {
        Some(path) => {
            let mut f = open_out(path)?;
            write_trajectory(&tr, &mut f)?;
            f.flush()?;
        }
        None if !a.quiet => write_trajectory(&tr, out)?,
        None => {}
    }
    // With the CSV on stdout the summary goes to stderr to keep it parseable.
    let summary = format!(
        "model: {}\nstatus: {}\nfinal x: {}",
        tr.model,
        tr.status,
        fmt_vec(tr.final_state().values())
    );
    if a.out.is_some() || a.quiet {
        writeln!(out, "{summary}")?;
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_equilibrium(a: &EquilibriumArgs, out: &mut impl Write) -> CliResult {
    let c = load(&a.run.network)?;
    let s = classify(&c);
    let profile = centrality_profile(&c, &s)?;
    let n = c.n();

    if let Some(zeta) = &a.zeta {
        let zeta = args::parse_list(zeta).map_err(Failure::usage)?;
        let eq = assemble_multisink_equilibrium(&s, &profile, &zeta, EQUILIBRIUM_TOL)?;
        writeln!(out, "sink powers: {}", fmt_vec(&zeta))?;
        return write_assembled(&eq, n, out);
    }

    let x0 = a.run.initial(n)?;
    let opts = a.run.options()?;
    let pred = predict_limit(&c, &s, &profile, &x0)?;
    writeln!(out, "regime: {}", pred.regime)?;
    match &pred.kind {
        Prediction::Vertex { node } => {
            writeln!(out, "x0 = e_{} is fixed under the single-timescale map", node + 1)?;
        }
        Prediction::StarAutocrat { center } => {
            writeln!(out, "autocrat at node {}; interior equilibria: none", center + 1)?;
        }
        Prediction::UniqueInterior { x, alpha } => {
            writeln!(out, "x* = {}", fmt_vec(x.values()))?;
            writeln!(out, "alpha = {alpha}")?;
            let sink = &profile.sinks[0];
            let local: Vec<f64> = sink.iter().map(|&i| x[i]).collect();
            let pass = ordering_holds(&local, &profile.per_sink[0])
                && scale_spread(&local, &profile.per_sink[0]) < 10.0 * EQUILIBRIUM_TOL;
            writeln!(out, "ordering check {}", if pass { "PASS" } else { "FAIL" })?;
        }
        Prediction::TwoNodeFamily { support } => {
            let tr = simulate(powerflow_core::Model::SingleTimescale, &c, &x0, &opts)?;
            let x = tr.final_state();
            writeln!(
                out,
                "family (alpha, 1 - alpha) on nodes {}; realized alpha = {} ({})",
                fmt_nodes(support),
                x[support[0]],
                tr.status
            )?;
        }
        Prediction::MultiSinkFamily { .. } => {
            let (tr, eq) = realized_multisink_equilibrium(&c, &x0, &opts)?;
            let zeta = powerflow_core::sink_power(&s, tr.final_state())?;
            writeln!(out, "realized sink powers: {} ({})", fmt_vec(&zeta), tr.status)?;
            write_assembled(&eq, n, out)?;
        }
    }
    Ok(())
}

fn ordering_holds(x: &[f64], c: &[f64]) -> bool {
    use powerflow_core::equilibria::TIE_TOL;
    (0..c.len()).all(|i| {
        (0..c.len()).all(|j| {
            if (c[i] - c[j]).abs() < TIE_TOL {
                (x[i] - x[j]).abs() < 10.0 * TIE_TOL
            } else {
                (c[i] > c[j]) == (x[i] > x[j])
            }
        })
    })
}

fn write_assembled(eq: &AssembledEquilibrium, n: usize, out: &mut impl Write) -> CliResult {
    match eq {
        AssembledEquilibrium::Point(x) => writeln!(out, "x* = {}", fmt_vec(x.values()))?,
        AssembledEquilibrium::TwoNodeFamily { sink, support } => {
            let example = eq.with_alpha(n, 0.5);
            writeln!(
                out,
                "sink {} holds all power: family (alpha, 1 - alpha) on nodes {}, e.g. {}",
                sink + 1,
                fmt_nodes(support),
                fmt_vec(example.values())
            )?;
        }
    }
    Ok(())
}

fn cmd_compare(a: &RunArgs, out: &mut impl Write) -> CliResult {
    let c = load(&a.network)?;
    let x0 = a.initial(c.n())?;
    let opts = a.options()?;
    let r = compare_models(&c, &x0, &opts)?;

    if let Some(path) = &a.out {
        let mut f = open_out(path)?;
        write_comparison(&r.single_timescale, &r.original_df, &mut f)?;
        f.flush()?;
    }
    writeln!(out, "regime: {}", r.regime)?;
    writeln!(out, "single-timescale: {} -> {}", r.single_timescale.status, fmt_vec(r.limit_st.values()))?;
    writeln!(out, "original-df: {} -> {}", r.original_df.status, fmt_vec(r.limit_df.values()))?;
    let (a_label, b_label) = (limit_label(&r.limit_st), limit_label(&r.limit_df));
    if r.limit_distance < 1e-6 || (a_label == b_label && a_label.starts_with("e_")) {
        writeln!(out, "limits agree (dist {:.3e})", r.limit_distance)?;
    } else {
        writeln!(out, "limits differ: {a_label} vs {b_label} (dist {:.3e})", r.limit_distance)?;
    }
    if let Some((st, df)) = &r.sink_totals {
        writeln!(out, "sink,zeta_st,zeta_df")?;
        for (k, (x, y)) in st.iter().zip(df).enumerate() {
            writeln!(out, "{},{x},{y}", k + 1)?;
        }
    }
    if matches!(r.single_timescale.status, Status::MaxStepsReached)
        || matches!(r.original_df.status, Status::MaxStepsReached)
    {
        info!("at least one run hit the step limit");
    }
    Ok(())
}
