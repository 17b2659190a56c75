//! Command-line flags, the JSON config file and the resolved run config.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use hecke_cells::Bond;
use serde::{Serialize, Serializer};
use serde_json::Value;

/// Unequal-parameter Hecke algebras, Kazhdan–Lusztig bases and cells of
/// Coxeter groups of rank at most 3.
#[derive(Parser, Debug, Serialize)]
#[command(name = "hecke-cells", version, args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: Global,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Global {
    /// Coxeter labels `m_rt,m_rs,m_st` (generators r, s, t), or one label
    /// `m` for a dihedral group on s, t. `inf` stands for ∞.
    #[arg(long, global = true)]
    pub system: Option<Bonds>,
    /// Weights of the generators, in the same order (`L(r),L(s),L(t)`).
    #[arg(long, global = true)]
    pub weights: Option<Weights>,
    /// Ball radius.
    #[arg(long, global = true, default_value_t = 4)]
    pub radius: usize,
    /// Length up to which group elements are enumerated. Defaults to what
    /// the command needs.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Truncation level `N`.
    #[arg(long, global = true)]
    pub level: Option<u64>,
    /// Directory for cached Kazhdan–Lusztig tables.
    #[arg(long, global = true, env = "HECKE_CELLS_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Report file (JSON); for `export`, the exported file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for commands that run independent checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// JSON file whose keys mirror the long flags; flags given on the
    /// command line take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// List the elements of the ball.
    Ball,
    /// Kazhdan–Lusztig polynomials `p_{y,w}` for one `w`.
    Kl {
        #[arg(long)]
        w: String,
        /// Only this `y`.
        #[arg(long)]
        y: Option<String>,
    },
    /// `C_w` in the standard basis.
    Cbasis {
        #[arg(long)]
        w: String,
    },
    /// `T_x T_y` or `C_x C_y`.
    Mult {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Basis::T)]
        basis: Basis,
    },
    /// Bounded a-function profile of `w`, or of every element of the ball.
    Afun {
        #[arg(long)]
        w: Option<String>,
    },
    /// The distinguished elements grouped by `a′`.
    Dset,
    /// `w = b·d·y` with `d` distinguished.
    Decompose {
        #[arg(long)]
        w: String,
    },
    /// Element-to-cell table of the ball.
    Cells {
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run one verification.
    Verify {
        /// P1..P15, bound, strict, expansion, dihedral or length.
        #[arg(long)]
        check: Check,
        /// Distinguished element for `strict` and `length` (default: all).
        #[arg(long)]
        d: Option<String>,
        /// Expansion subcase such as `reduced2(8.2)` (default: all).
        #[arg(long)]
        case: Option<String>,
        /// Dihedral lemma (default: all).
        #[arg(long)]
        lemma: Option<String>,
        /// Ball on which cell preorders are computed for P-checks
        /// (default: twice the radius).
        #[arg(long)]
        graph_radius: Option<usize>,
    },
    /// Critical values, hyperplanes or triple points in weight space.
    Critical {
        #[arg(long, value_enum)]
        mode: Mode,
        /// `m_rs = 2m`.
        #[arg(long)]
        m: u32,
        /// `m_st = k` (1d mode).
        #[arg(long)]
        k: Option<u32>,
        /// `m_st = 2n` (2d and triples modes).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Write the hyperplane arrangement for `m_rs = 2m`, `m_st = 2n` to `--out`.
    Export {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Defaults to the extension of `--out`.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    T,
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[value(name = "1d")]
    #[serde(rename = "1d")]
    OneD,
    #[value(name = "2d")]
    #[serde(rename = "2d")]
    TwoD,
    Triples,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Svg,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    P(u8),
    Bound,
    Strict,
    Expansion,
    Dihedral,
    Length,
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Check, String> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "bound" => return Ok(Check::Bound),
            "strict" => return Ok(Check::Strict),
            "expansion" => return Ok(Check::Expansion),
            "dihedral" => return Ok(Check::Dihedral),
            "length" => return Ok(Check::Length),
            _ => {}
        }
        match lower.strip_prefix('p').map(str::parse::<u8>) {
            Some(Ok(k)) if (1..=15).contains(&k) => Ok(Check::P(k)),
            _ => Err(format!("unknown check {s:?} (expected P1..P15, bound, strict, expansion, dihedral or length)")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::P(k) => write!(f, "P{k}"),
            Check::Bound => f.write_str("bound"),
            Check::Strict => f.write_str("strict"),
            Check::Expansion => f.write_str("expansion"),
            Check::Dihedral => f.write_str("dihedral"),
            Check::Length => f.write_str("length"),
        }
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Comma-separated Coxeter labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Bonds(pub Vec<Bond>);

impl FromStr for Bonds {
    type Err = String;
    fn from_str(s: &str) -> Result<Bonds, String> {
        s.split(',').map(|b| b.parse::<Bond>().map_err(|e| e.to_string())).collect::<Result<_, _>>().map(Bonds)
    }
}

/// Comma-separated weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Weights(pub Vec<u32>);

impl FromStr for Weights {
    type Err = String;
    fn from_str(s: &str) -> Result<Weights, String> {
        s.split(',')
            .map(|w| match w.trim().parse::<u32>() {
                Ok(0) | Err(_) => Err(format!("weights must be positive integers, got {w:?}")),
                Ok(v) => Ok(v),
            })
            .collect::<Result<_, _>>()
            .map(Weights)
    }
}

/// Rewrites `argv` so that the settings of a `--config` file come first
/// and the command line overrides them.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?;
    let Value::Object(map) = value else { return Err(format!("config {path}: expected a JSON object")) };

    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut rest: Vec<String> = argv[1..].to_vec();
    let mut sub = rest.iter().position(|a| names.contains(a)).map(|i| rest.remove(i));
    let mut tokens = Vec::new();
    for (key, v) in map {
        if key == "command" {
            let Value::String(name) = v else { return Err(format!("config {path}: command must be a string")) };
            sub.get_or_insert(name);
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => tokens.push(flag),
            Value::String(s) => tokens.extend([flag, s]),
            Value::Number(n) => tokens.extend([flag, n.to_string()]),
            Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                tokens.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return Err(format!("config {path}: nested object for {key}")),
        }
    }
    let mut out = vec![argv[0].clone()];
    out.extend(sub);
    out.extend(tokens);
    out.extend(rest);
    Ok(out)
}
