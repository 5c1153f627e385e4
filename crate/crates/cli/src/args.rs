//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hharmonic", version, about = "Szegő and weighted Bergman kernels of H-harmonic functions on the unit ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate the Szegő kernel at one pair of points
    Eval(EvalArgs),
    /// Diagonal values K(x, x) along the first axis
    Diag(DiagArgs),
    /// Kernel values on a radius × radius or radius × angle grid
    Table(TableArgs),
    /// Evaluate several representations and report pairwise residuals
    Compare(CompareArgs),
    /// Evaluate the weighted Bergman kernel and list the I_m(s) table used
    Bergman(BergmanArgs),
    /// Run the invariant suite
    Selftest(SelftestArgs),
    /// Wall time against accuracy for each representation
    Bench(BenchArgs),
}

/// Kernel and truncation settings shared by every evaluating command.
#[derive(Debug, Args, Serialize, Clone)]
pub struct Common {
    /// Dimension n ≥ 3
    #[arg(long = "dim", short = 'n', default_value_t = 3)]
    pub dim: usize,
    /// Bergman weight s > −1 (Bergman representations only)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Replace every I_m(s) by this constant (Bergman representations only)
    #[arg(long)]
    pub im_override: Option<f64>,
    /// Relative tolerance of every series
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
    /// Cap on terms (single series) or shells (multi-index series)
    #[arg(long, default_value_t = 4000)]
    pub max_terms: usize,
    /// Quadrature nodes per direction for oracle integrals
    #[arg(long, default_value_t = 128)]
    pub nodes: usize,
    /// Sphere quadrature scheme for oracle integrals
    #[arg(long, value_enum, default_value_t = SchemeArg::Tensor)]
    pub scheme: SchemeArg,
    /// Monte Carlo samples
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: usize,
    /// Seed for Monte Carlo sampling and random pairs
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
    /// Leave the wall_time column empty so output is reproducible byte for byte
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    /// First point, comma-separated coordinates
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Second point; mutually exclusive with --lambda
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub y: Option<String>,
    /// Take y = λx
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = Rep::Auto)]
    pub rep: Rep,
}

#[derive(Debug, Args, Serialize)]
pub struct DiagArgs {
    #[command(flatten)]
    pub common: Common,
    /// Radii as start:stop:step (stop included)
    #[arg(long)]
    pub radii: String,
    #[arg(long, value_enum, default_value_t = Rep::Auto)]
    pub rep: Rep,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
    /// Radii of x as start:stop:step
    #[arg(long)]
    pub radii: String,
    /// Radii of y as start:stop:step; defaults to --radii, or to |x| when --angles is given
    #[arg(long)]
    pub radii_y: Option<String>,
    /// Angles between x and y in radians as start:stop:step
    #[arg(long)]
    pub angles: Option<String>,
    #[arg(long, value_enum, default_value_t = Rep::Auto)]
    pub rep: Rep,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated representations (at least two)
    #[arg(long, value_delimiter = ',', default_value = "x9,finite-sum,quadrature")]
    pub rep: Vec<Rep>,
    /// Fixed first point; without --x and --y, seeded random pairs are drawn
    #[arg(long, allow_hyphen_values = true, requires = "y")]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub y: Option<String>,
    /// Number of random pairs
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    /// Largest radius of the random pairs
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Largest acceptable pairwise relative residual
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BergmanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, value_enum, default_value_t = Rep::BergmanZonal)]
    pub rep: Rep,
}

#[derive(Debug, Args, Serialize)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true, default_value = "0.3,0.2,0")]
    pub x: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-0.1,0.4,0.1")]
    pub y: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rep {
    Auto,
    X9,
    FiniteSum,
    RadialF1,
    Diagonal,
    /// Tensor or Monte Carlo quadrature of the Poisson-kernel integral
    Quadrature,
    BergmanZonal,
    BergmanTriple,
}

impl Rep {
    pub fn label(self) -> &'static str {
        match self {
            Rep::Auto => "auto",
            Rep::X9 => "x9",
            Rep::FiniteSum => "finite-sum",
            Rep::RadialF1 => "radial-f1",
            Rep::Diagonal => "diagonal",
            Rep::Quadrature => "quadrature",
            Rep::BergmanZonal => "bergman-zonal",
            Rep::BergmanTriple => "bergman-triple",
        }
    }

    pub fn is_bergman(self) -> bool {
        matches!(self, Rep::BergmanZonal | Rep::BergmanTriple)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Tensor,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parses `start:stop:step` into the inclusive list of values.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}` in range `{s}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    let (start, stop, step) = match nums.as_slice() {
        [v] => return Ok(vec![*v]),
        [a, b, c] => (*a, *b, *c),
        _ => return Err(format!("range `{s}` must be start:stop:step or a single value")),
    };
    if !(step > 0.0) || !(stop >= start) || ![start, stop, step].iter().all(|v| v.is_finite()) {
        return Err(format!("range `{s}` needs start ≤ stop and a positive step"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(format!("range `{s}` has too many points"));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Parses comma-separated coordinates and checks them against `dim`.
pub fn parse_coords(s: &str, dim: usize) -> Result<Vec<f64>, String> {
    let coords = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad coordinate `{p}` in `{s}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    if coords.len() != dim {
        return Err(format!("point `{s}` has {} coordinates but --dim is {dim}", coords.len()));
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_the_end() {
        assert_eq!(parse_range("0:0.3:0.1").unwrap().len(), 4);
        assert_eq!(parse_range("0.0:0.9:0.1").unwrap().len(), 10);
        assert_eq!(parse_range("0.25").unwrap(), vec![0.25]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }

    #[test]
    fn coordinates_are_checked_against_the_dimension() {
        assert_eq!(parse_coords("0.1, -0.2,0", 3).unwrap(), vec![0.1, -0.2, 0.0]);
        assert!(parse_coords("0.1,0.2", 3).is_err());
        assert!(parse_coords("0.1,a,0", 3).is_err());
    }

    #[test]
    fn grammar_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
