use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use snl_core::norms::NormSpec;
use snl_core::{Error, Result};

/// Parameters shared by the subcommands. Every field can come from a flag or
/// from a scenario file; flags win.
#[derive(Args, Clone, Debug, Default)]
pub struct Params {
    /// euclidean, hexagonal, pnorm:<p>, ellipse:<q11>,<q12>,<q22>, inline JSON or @file
    #[arg(long, global = true)]
    pub norm: Option<String>,
    /// Number of prescribed classes, the trivial class included
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Number of classes to enumerate
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Node budget for combinatorial searches
    #[arg(long, global = true)]
    pub node_budget: Option<u64>,
    /// Grid resolution of canyon graphs
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Background systole of canyon graphs (default ℓ_k)
    #[arg(long, global = true)]
    pub background: Option<f64>,
    /// Length bound for spectra (default 1.5·ℓ_k)
    #[arg(long, global = true)]
    pub bound: Option<f64>,
    /// Relative tolerance for grouping equal lengths
    #[arg(long, global = true)]
    pub tie_tolerance: Option<f64>,
    /// Value of Θ when no admissible cycle exists (default ζ)
    #[arg(long, global = true)]
    pub theta_cap: Option<f64>,
    /// Multiplicity, or half the number of polygon vertices
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Sup-norm radius of the sampled classes
    #[arg(long, global = true)]
    pub radius: Option<i64>,
    /// Largest multiple n in f(n·h)/n
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Number of unit directions sampled
    #[arg(long, global = true)]
    pub directions: Option<usize>,
    /// Cover window for shortest-walk searches (default: grown until certified)
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Recorded with the scenario; no subcommand draws random numbers
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// Scenario file: the same parameters as JSON. `norm` is a string in flag
/// syntax or a norm object.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    norm: Option<serde_json::Value>,
    k: Option<usize>,
    budget: Option<usize>,
    node_budget: Option<u64>,
    grid: Option<usize>,
    background: Option<f64>,
    bound: Option<f64>,
    tie_tolerance: Option<f64>,
    theta_cap: Option<f64>,
    m: Option<usize>,
    radius: Option<i64>,
    n_max: Option<usize>,
    directions: Option<usize>,
    window: Option<i64>,
    seed: Option<u64>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

impl Params {
    /// Fills unset fields from the scenario file.
    pub fn with_scenario(mut self, path: Option<&PathBuf>) -> Result<Self> {
        let Some(path) = path else { return Ok(self) };
        let s: Scenario = serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Validation(format!("scenario {}: {e}", path.display())))?;
        if self.norm.is_none() {
            self.norm = match s.norm {
                Some(serde_json::Value::String(v)) => Some(v),
                Some(v) => Some(v.to_string()),
                None => None,
            };
        }
        macro_rules! fill {
            ($($f:ident),*) => { $( self.$f = self.$f.or(s.$f); )* };
        }
        fill!(k, budget, node_budget, grid, background, bound, tie_tolerance, theta_cap, m, radius, n_max, directions, window, seed);
        Ok(self)
    }

    pub fn norm(&self) -> Result<NormSpec<f64>> {
        match &self.norm {
            Some(s) => parse_norm(s),
            None => invalid("--norm is required"),
        }
    }

    pub fn k(&self) -> Result<usize> {
        self.k.ok_or_else(|| Error::Validation("--k is required".into()))
    }

    pub fn m(&self) -> Result<usize> {
        self.m.ok_or_else(|| Error::Validation("--m is required".into()))
    }
}

pub fn parse_norm(s: &str) -> Result<NormSpec<f64>> {
    let s = s.trim();
    if let Some(path) = s.strip_prefix('@') {
        return parse_norm(&read(Path::new(path))?);
    }
    if s.starts_with('{') {
        let n: NormSpec<f64> =
            serde_json::from_str(s).map_err(|e| Error::Validation(format!("norm JSON: {e}")))?;
        n.validate()?;
        return Ok(n);
    }
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let numbers = || -> Result<Vec<f64>> {
        arg.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Validation(format!("bad number {t:?} in norm {s:?}"))))
            .collect()
    };
    match (name, arg.is_empty()) {
        ("euclidean", true) => Ok(NormSpec::euclidean()),
        ("hexagonal", true) => Ok(NormSpec::hexagonal()),
        ("pnorm", false) => match numbers()?.as_slice() {
            [p] => NormSpec::pnorm(*p),
            _ => invalid("pnorm takes one exponent, e.g. pnorm:3"),
        },
        ("ellipse", false) => match numbers()?.as_slice() {
            [a, b, c] => NormSpec::ellipse([[*a, *b], [*b, *c]]),
            _ => invalid("ellipse takes q11,q12,q22, e.g. ellipse:1,0.3,0.8"),
        },
        _ => invalid(format!("unknown norm {s:?}")),
    }
}
