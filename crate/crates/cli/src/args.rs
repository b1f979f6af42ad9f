use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use powerflow_core::io::{build_doubly_stochastic_random, build_ring, build_star, load_network};
use powerflow_core::{Model, RelativeInteractionMatrix, SelfWeightVector, SimulationOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::Failure;

/// Social power dynamics on influence networks.
#[derive(Debug, Parser)]
#[command(name = "powerflow", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the structure of the network digraph.
    Classify(NetworkArgs),
    /// Print eigenvector centralities (per sink when there are several).
    Centrality(NetworkArgs),
    /// Iterate one model and emit the trajectory as CSV.
    Simulate(RunArgs),
    /// Predict or assemble the equilibrium reached from x0.
    Equilibrium(EquilibriumArgs),
    /// Run both models from the same x0 and compare their limits.
    Compare(RunArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct NetworkArgs {
    /// Dense matrix or adjacency-list file.
    #[arg(long, value_name = "FILE")]
    pub network: Option<PathBuf>,
    /// star:N, ring:N or ds:N:SEED.
    #[arg(long, value_name = "SPEC")]
    pub builder: Option<String>,
}

impl NetworkArgs {
    pub fn load(&self) -> Result<RelativeInteractionMatrix, Failure> {
        if let Some(path) = &self.network {
            return load_network(path, None).map_err(|e| {
                let mut f = Failure::from(e);
                f.message = format!("{}: {}", path.display(), f.message);
                f
            });
        }
        let spec = self.builder.as_deref().expect("clap enforces one network source");
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| {
            s.parse::<u64>().map_err(|_| Failure::usage(format!("bad number {s:?} in --builder {spec}")))
        };
        let c = match parts.as_slice() {
            ["star", n] => build_star(num(n)? as usize)?,
            ["ring", n] => build_ring(num(n)? as usize)?,
            ["ds", n, seed] => build_doubly_stochastic_random(num(n)? as usize, num(seed)?)?,
            _ => return Err(Failure::usage(format!("unknown builder {spec:?}"))),
        };
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    St,
    Df,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::St => Model::SingleTimescale,
            ModelArg::Df => Model::OriginalDf,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub network: NetworkArgs,
    #[arg(long, value_enum, default_value = "st")]
    pub model: ModelArg,
    /// uniform, vertex:I, random:SEED or list:a,b,...
    #[arg(long, default_value = "uniform")]
    pub x0: String,
    #[arg(long, default_value_t = SimulationOptions::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = SimulationOptions::default().max_steps)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// Write CSV output to this file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Do not print the trajectory to stdout.
    #[arg(long)]
    pub quiet: bool,
}

impl RunArgs {
    pub fn options(&self) -> Result<SimulationOptions, Failure> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::usage("--tol must be positive"));
        }
        if self.record_every == 0 {
            return Err(Failure::usage("--record-every must be at least 1"));
        }
        Ok(SimulationOptions { tol: self.tol, max_steps: self.max_steps, record_every: self.record_every })
    }

    pub fn initial(&self, n: usize) -> Result<SelfWeightVector, Failure> {
        parse_x0(&self.x0, n)
    }
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Sink powers a,b,... for assembling a multi-sink equilibrium.
    #[arg(long)]
    pub zeta: Option<String>,
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad number {v:?}")))
        .collect()
}

pub fn parse_x0(spec: &str, n: usize) -> Result<SelfWeightVector, Failure> {
    let bad = |why: String| Failure::usage(format!("--x0 {spec}: {why}"));
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let values = match kind {
        "uniform" => return Ok(SelfWeightVector::uniform(n)),
        "vertex" => {
            let i: usize = rest.parse().map_err(|_| bad("expected a node number".into()))?;
            if i == 0 || i > n {
                return Err(bad(format!("node must be in 1..={n}")));
            }
            return Ok(SelfWeightVector::vertex(n, i - 1));
        }
        "random" => {
            let seed: u64 = rest.parse().map_err(|_| bad("expected an integer seed".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v: Vec<f64> = (0..n).map(|_| Distribution::<f64>::sample(&Exp1, &mut rng)).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        }
        "list" => parse_list(rest).map_err(bad)?,
        _ => return Err(bad("expected uniform, vertex:I, random:SEED or list:...".into())),
    };
    if values.len() != n {
        return Err(bad(format!("{} entries for a {n}-node network", values.len())));
    }
    SelfWeightVector::new(values).map_err(|e| bad(e.to_string()))
}
