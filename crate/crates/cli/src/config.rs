//! Flags, the flat `key=value` config file, and the resolved run
//! configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};
use dioph_core::casework::{parse_psi_table, Case, CaseConfig, PsiSpec};
use dioph_core::numkit::parse_rational;
use dioph_core::{Interval, Rational};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CACHE_ENV: &str = "DIOPH_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".dioph-cache";

#[derive(Parser, Debug)]
#[command(name = "dioph", version, about = "Exact experiments on integer polynomials that are small at a point")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Enum,
    Count,
    Measure,
    Scaling,
    BcSum,
    Lemma1Check,
    Lemma2Check,
    Essential,
    Tau,
    Wn,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Enum => "enum",
            Command::Count => "count",
            Command::Measure => "measure",
            Command::Scaling => "scaling",
            Command::BcSum => "bc-sum",
            Command::Lemma1Check => "lemma1-check",
            Command::Lemma2Check => "lemma2-check",
            Command::Essential => "essential",
            Command::Tau => "tau",
            Command::Wn => "wn",
        }
    }
}

/// Every flag is optional here; defaults and the config file fill gaps.
#[derive(Args, Debug, Default)]
pub struct Flags {
    /// big, medium or small
    #[arg(long)]
    pub case: Option<String>,
    /// Degree bound
    #[arg(long)]
    pub n: Option<String>,
    /// Derivative exponent, 1/q
    #[arg(long)]
    pub delta: Option<String>,
    /// pow:c=C,w=W or table:PATH
    #[arg(long)]
    pub psi: Option<String>,
    /// a:b with rational ends
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Single height or comma list
    #[arg(long = "H")]
    pub h: Option<String>,
    /// A:B, A:B:x2 or a comma list
    #[arg(long)]
    pub heights: Option<String>,
    /// Dyadic blocks: A:B, m=A..B or a comma list
    #[arg(long)]
    pub blocks: Option<String>,
    /// Measure enclosure width
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    /// Largest family a single computation may enumerate
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<String>,
    #[arg(long = "no-cache")]
    pub no_cache: bool,
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Flat key=value file using the flag names
    #[arg(long)]
    pub config: Option<String>,
    /// Fill the wall_ms column
    #[arg(long)]
    pub timing: bool,
    /// Number of lemma1-check trials
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// wn target: p/q, dec:DIGITS or alg:c0,c1,..@lo:hi
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    /// enum: comma list of coefficient positions fixed at zero
    #[arg(long)]
    pub zero: Option<String>,
}

const KEYS: &[&str] = &[
    "case", "n", "delta", "psi", "interval", "H", "heights", "blocks", "tol", "workers", "budget", "cache-dir",
    "no-cache", "out", "format", "timing", "trials", "seed", "target", "zero",
];

impl Flags {
    fn entries(&self) -> Vec<(&'static str, Option<String>)> {
        let flag = |b: bool| b.then(|| "true".to_string());
        vec![
            ("case", self.case.clone()),
            ("n", self.n.clone()),
            ("delta", self.delta.clone()),
            ("psi", self.psi.clone()),
            ("interval", self.interval.clone()),
            ("H", self.h.clone()),
            ("heights", self.heights.clone()),
            ("blocks", self.blocks.clone()),
            ("tol", self.tol.clone()),
            ("workers", self.workers.clone()),
            ("budget", self.budget.clone()),
            ("cache-dir", self.cache_dir.clone()),
            ("no-cache", flag(self.no_cache)),
            ("out", self.out.clone()),
            ("format", self.format.clone()),
            ("timing", flag(self.timing)),
            ("trials", self.trials.clone()),
            ("seed", self.seed.clone()),
            ("target", self.target.clone()),
            ("zero", self.zero.clone()),
        ]
    }
}

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", no + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if !KEYS.contains(&k) || k == "config" {
            return Err(CliError::Config(format!("config line {}: unknown key {k:?}", no + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A fully resolved invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub case: Case,
    pub n: usize,
    pub delta: Rational,
    /// As given, e.g. `pow:c=1,w=3` or `table:psi.txt`.
    pub psi_src: String,
    pub psi: PsiSpec,
    pub interval_src: String,
    pub interval: Interval,
    pub heights: Vec<u64>,
    pub blocks: Vec<u32>,
    pub tol: Rational,
    pub workers: usize,
    pub budget: u128,
    pub cache_dir: PathBuf,
    pub use_cache: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timing: bool,
    pub trials: usize,
    pub seed: u64,
    pub target: Option<String>,
    pub zero: Vec<usize>,
}

fn bad(what: &str, v: &str) -> CliError {
    CliError::Config(format!("malformed {what}: {v:?}"))
}

fn parse_num<T: std::str::FromStr>(what: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| bad(what, v))
}

fn parse_rat(what: &str, v: &str) -> Result<Rational, CliError> {
    parse_rational(v).ok_or_else(|| bad(what, v))
}

fn parse_list<T: std::str::FromStr>(what: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|s| parse_num(what, s)).collect()
}

/// `8`, `4,8,16`, `A:B` (every height) or `A:B:x2` (doubling).
pub fn parse_heights(v: &str) -> Result<Vec<u64>, CliError> {
    let parts: Vec<&str> = v.split(':').collect();
    let hs = match parts.as_slice() {
        [one] => parse_list("heights", one)?,
        [a, b] => {
            let (a, b): (u64, u64) = (parse_num("heights", a)?, parse_num("heights", b)?);
            (a..=b).collect()
        }
        [a, b, step] => {
            let (a, b): (u64, u64) = (parse_num("heights", a)?, parse_num("heights", b)?);
            let f: u64 = step.strip_prefix('x').ok_or_else(|| bad("heights step", step)).and_then(|s| parse_num("heights step", s))?;
            if f < 2 || a == 0 {
                return Err(bad("heights", v));
            }
            std::iter::successors(Some(a), |h| h.checked_mul(f)).take_while(|h| *h <= b).collect()
        }
        _ => return Err(bad("heights", v)),
    };
    if hs.is_empty() || hs.contains(&0) {
        return Err(CliError::Config(format!("heights {v:?} must be a nonempty list of positive integers")));
    }
    Ok(hs)
}

/// `A:B`, `m=A..B` or a comma list.
pub fn parse_blocks(v: &str) -> Result<Vec<u32>, CliError> {
    let body = v.trim().strip_prefix("m=").unwrap_or(v.trim());
    let range = body.split_once("..").or_else(|| body.split_once(':'));
    let bs: Vec<u32> = match range {
        Some((a, b)) => (parse_num("blocks", a)?..=parse_num("blocks", b)?).collect(),
        None => parse_list("blocks", body)?,
    };
    if bs.is_empty() || bs.contains(&0) {
        return Err(CliError::Config(format!("blocks {v:?} must be a nonempty list of positive integers")));
    }
    Ok(bs)
}

/// `a:b` as a closed interval with rational ends.
pub fn parse_interval(v: &str) -> Result<Interval, CliError> {
    let (a, b) = v.split_once(':').ok_or_else(|| bad("interval", v))?;
    let (a, b) = (parse_rat("interval", a)?, parse_rat("interval", b)?);
    if a >= b {
        return Err(CliError::Config(format!("interval {v:?} needs a < b")));
    }
    Interval::closed(a, b).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_psi(v: &str) -> Result<PsiSpec, CliError> {
    if let Some(path) = v.strip_prefix("table:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read psi table {path:?}: {e}")))?;
        let label = std::path::Path::new(path).file_name().map_or(path.into(), |s| s.to_string_lossy().into_owned());
        return parse_psi_table(&label, &text).map_err(|e| CliError::Config(e.to_string()));
    }
    PsiSpec::parse_power_law(v).map_err(|e| CliError::Config(e.to_string()))
}

impl RunConfig {
    /// Flags override the config file, which overrides defaults.
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let mut map = match &cli.flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {path:?}: {e}")))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in cli.flags.entries() {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        Self::from_map(cli.command, &map)
    }

    pub fn from_map(command: Command, map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let truthy = |k: &str| -> Result<bool, CliError> {
            match get(k) {
                None | Some("false") => Ok(false),
                Some("true") => Ok(true),
                Some(v) => Err(bad(k, v)),
            }
        };
        let case = get("case").map_or(Ok(Case::Big), |v| v.parse().map_err(|_| bad("case", v)))?;
        let n = get("n").map_or(Ok(2), |v| parse_num("n", v))?;
        let delta = get("delta").map_or(Ok(Rational::new(1.into(), 10.into())), |v| parse_rat("delta", v))?;
        let psi_src = get("psi").unwrap_or("pow:c=1,w=3").to_string();
        let psi = parse_psi(&psi_src)?;
        let interval_src = get("interval").unwrap_or("1:2").to_string();
        let interval = parse_interval(&interval_src)?;
        let mut heights = Vec::new();
        if let Some(v) = get("H") {
            heights = parse_list("H", v)?;
        }
        if let Some(v) = get("heights") {
            heights.extend(parse_heights(v)?);
        }
        let blocks = get("blocks").map_or(Ok(Vec::new()), parse_blocks)?;
        let tol = get("tol").map_or(Ok(Rational::new(1.into(), 1_000_000_000.into())), |v| parse_rat("tol", v))?;
        let workers = match get("workers") {
            Some(v) => parse_num("workers", v)?,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let budget = get("budget").map_or(Ok(5_000_000), |v| parse_num("budget", v))?;
        let cache_dir = get("cache-dir")
            .map(String::from)
            .or_else(|| std::env::var(CACHE_ENV).ok())
            .unwrap_or_else(|| DEFAULT_CACHE_DIR.into())
            .into();
        let format = match get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            v => return Err(bad("format", v)),
        };
        let cfg = RunConfig {
            command,
            case,
            n,
            delta,
            psi_src,
            psi,
            interval_src,
            interval,
            heights,
            blocks,
            tol,
            workers: workers.max(1),
            budget,
            cache_dir,
            use_cache: !truthy("no-cache")?,
            out: get("out").map(PathBuf::from),
            format,
            timing: truthy("timing")?,
            trials: get("trials").map_or(Ok(500), |v| parse_num("trials", v))?,
            seed: get("seed").map_or(Ok(1), |v| parse_num("seed", v))?,
            target: get("target").map(String::from),
            zero: get("zero").map_or(Ok(Vec::new()), |v| parse_list("zero", v))?,
        };
        cfg.case_config()?;
        Ok(cfg)
    }

    /// Validated casework parameters; rejects intervals touching 0.
    pub fn case_config(&self) -> Result<CaseConfig, CliError> {
        let cfg = CaseConfig {
            n: self.n,
            delta: self.delta.clone(),
            interval: self.interval.clone(),
            psi: self.psi.clone(),
            tol: self.tol.clone(),
        };
        cfg.validate().map_err(|e| match e {
            dioph_core::Error::InvalidInterval(m) => CliError::Config(format!(
                "interval {} rejected: the experiments require 0<c₀(I), where c₀(I) = inf |x| over I ({m})",
                self.interval_src
            )),
            other => CliError::Config(other.to_string()),
        })?;
        Ok(cfg)
    }

    pub fn interval_canonical(&self) -> String {
        let (a, b) = self.interval.rational_bounds().expect("parsed from rationals");
        format!("{a}:{b}")
    }

    pub fn heights_required(&self) -> Result<&[u64], CliError> {
        if self.heights.is_empty() {
            return Err(CliError::Config(format!("{} needs --H or --heights", self.command.name())));
        }
        Ok(&self.heights)
    }

    /// Canonical form of Ψ; a table is identified by its contents.
    fn psi_canonical(&self) -> String {
        match &self.psi {
            PsiSpec::Table { values, .. } => {
                let body: Vec<String> = values.iter().map(|(h, v)| format!("{h} {v}")).collect();
                format!("table:sha256={}", hex::encode(Sha256::digest(body.join("\n").as_bytes())))
            }
            p => p.id(),
        }
    }

    /// The settings that determine report bytes, as config-file text.
    /// Parsing it back yields the same canonical text.
    pub fn canonical(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let mut lines = vec![
            format!("case={}", self.case),
            format!("n={}", self.n),
            format!("delta={}", self.delta),
            format!("psi={}", self.psi_src),
            format!("interval={}", self.interval_canonical()),
            format!("tol={}", self.tol),
            format!("budget={}", self.budget),
            format!("format={}", if self.format == Format::Json { "json" } else { "csv" }),
            format!("trials={}", self.trials),
            format!("seed={}", self.seed),
        ];
        if !self.heights.is_empty() {
            lines.push(format!("heights={}", join(&self.heights.iter().map(u64::to_string).collect::<Vec<_>>())));
        }
        if !self.blocks.is_empty() {
            lines.push(format!("blocks={}", join(&self.blocks.iter().map(u32::to_string).collect::<Vec<_>>())));
        }
        if let Some(t) = &self.target {
            lines.push(format!("target={t}"));
        }
        if !self.zero.is_empty() {
            lines.push(format!("zero={}", join(&self.zero.iter().map(usize::to_string).collect::<Vec<_>>())));
        }
        if self.timing {
            lines.push("timing=true".into());
        }
        lines.join("\n") + "\n"
    }

    /// Cache identity: the command, the canonical settings, and the
    /// contents of a Ψ table.
    pub fn cache_identity(&self) -> String {
        format!("command={}\n{}psi-canonical={}\n", self.command.name(), self.canonical(), self.psi_canonical())
    }
}
