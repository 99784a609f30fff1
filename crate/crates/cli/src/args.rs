// SPDX-License-Identifier: Apache-2.0

//! Command-line flags and the optional `key=value` config file.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use iqswitch::{MulticastPolicy, TrafficSpec, UnicastPolicy, WbaParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig6,
    Fig8,
    RrmLimit,
    FifoLimit,
    Props,
}

#[derive(Parser, Debug, Default)]
#[command(
    name = "iqswitch",
    version,
    about = "Input-queued crossbar switch simulator",
    long_about = "Runs slot-synchronous simulations of an NxN input-queued switch and writes one CSV row per run.\n\
                  Any flag except --config, --preset, --out, --trace, --force and --parallel may also be given as\n\
                  `name=value` in a config file; flags on the command line win."
)]
pub struct Cli {
    /// Unicast scheduler: islip, rrm, ilqf, iocf, maxsize, lqf, ocf, fifo or oq.
    #[arg(long)]
    pub policy: Option<String>,

    /// Multicast discipline: random-split, no-split, concentrate or wba.
    #[arg(long)]
    pub multicast: Option<String>,

    /// Number of ports.
    #[arg(long)]
    pub n: Option<usize>,

    /// Strict-priority traffic classes (1 to 4).
    #[arg(long)]
    pub classes: Option<usize>,

    /// Iterations per slot for iterative schedulers.
    #[arg(long)]
    pub iters: Option<usize>,

    /// Fabric transfer phases per slot.
    #[arg(long)]
    pub speedup: Option<usize>,

    /// Offered load per output.
    #[arg(long, conflicts_with = "load_sweep")]
    pub load: Option<f64>,

    /// Load sweep `lo:hi:step`, both ends inclusive.
    #[arg(long)]
    pub load_sweep: Option<String>,

    /// Traffic shape: uniform, bursty:B (mean burst B), multicast:F (mean
    /// fanout F) or saturated.
    #[arg(long)]
    pub traffic: Option<String>,

    /// Simulated slots per run.
    #[arg(long)]
    pub horizon: Option<u64>,

    /// Slots excluded from statistics (default: a tenth of the horizon).
    #[arg(long)]
    pub warmup: Option<u64>,

    /// RNG seed (default 1); traffic and scheduler use separate streams
    #[arg(long)]
    pub seed: Option<u64>,

    /// Run a predefined experiment instead of a single configuration.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// CSV destination (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write a one-line scheduler trace for each of the first K slots.
    #[arg(long, value_name = "K")]
    pub trace: Option<u64>,

    /// Trace destination (default: stderr).
    #[arg(long, requires = "trace")]
    pub trace_out: Option<PathBuf>,

    /// Run loads that are not strictly admissible (at most 1).
    #[arg(long)]
    pub force: bool,

    /// Run sweep points on all cores. Results are identical either way.
    #[arg(long)]
    pub parallel: bool,

    /// Flat `key=value` file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "policy",
    "multicast",
    "n",
    "classes",
    "iters",
    "speedup",
    "load",
    "load-sweep",
    "traffic",
    "horizon",
    "warmup",
    "seed",
];

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {raw:?}", k + 1);
        };
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", k + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, file: &HashMap<String, String>, key: &str) -> Result<()>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    if slot.is_none() {
        if let Some(v) = file.get(key) {
            *slot = Some(v.parse().with_context(|| format!("config key {key}={v}"))?);
        }
    }
    Ok(())
}

impl Cli {
    /// Fills unset flags from the config file, if any.
    pub fn merge_config(&mut self) -> Result<()> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
        self.apply(&file)
    }

    fn apply(&mut self, file: &HashMap<String, String>) -> Result<()> {
        fill(&mut self.policy, file, "policy")?;
        fill(&mut self.multicast, file, "multicast")?;
        fill(&mut self.n, file, "n")?;
        fill(&mut self.classes, file, "classes")?;
        fill(&mut self.iters, file, "iters")?;
        fill(&mut self.speedup, file, "speedup")?;
        fill(&mut self.traffic, file, "traffic")?;
        fill(&mut self.horizon, file, "horizon")?;
        fill(&mut self.warmup, file, "warmup")?;
        fill(&mut self.seed, file, "seed")?;
        // a load on the command line displaces a sweep from the file and
        // vice versa
        if self.load.is_none() && self.load_sweep.is_none() {
            fill(&mut self.load, file, "load")?;
            fill(&mut self.load_sweep, file, "load-sweep")?;
        }
        Ok(())
    }

    pub fn trace_path(&self) -> Option<&Path> {
        self.trace_out.as_deref()
    }
}

pub fn parse_unicast(name: &str, iterations: usize) -> Result<UnicastPolicy> {
    Ok(match name {
        "islip" => UnicastPolicy::Islip { iterations },
        "rrm" => UnicastPolicy::Rrm { iterations },
        "ilqf" => UnicastPolicy::Ilqf { iterations },
        "iocf" => UnicastPolicy::Iocf { iterations },
        "maxsize" => UnicastPolicy::MaxSize,
        "lqf" => UnicastPolicy::Lqf,
        "ocf" => UnicastPolicy::Ocf,
        "fifo" => UnicastPolicy::Fifo,
        "oq" => UnicastPolicy::OutputQueued,
        other => bail!("unknown policy {other:?}"),
    })
}

pub fn parse_multicast(name: &str) -> Result<MulticastPolicy> {
    Ok(match name {
        "random-split" => MulticastPolicy::RandomSplit,
        "no-split" => MulticastPolicy::NoSplit,
        "concentrate" => MulticastPolicy::Concentrate,
        "wba" => MulticastPolicy::Wba(WbaParams::default()),
        other => bail!("unknown multicast policy {other:?}"),
    })
}

/// Traffic shape without its load.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    Uniform,
    Bursty(f64),
    Multicast(f64),
    Saturated,
}

impl Shape {
    pub fn parse(text: &str) -> Result<Shape> {
        let (kind, param) = match text.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (text, None),
        };
        let number = |what: &str| -> Result<f64> {
            let p = param.with_context(|| format!("{kind} traffic needs :{what}"))?;
            p.parse().with_context(|| format!("bad {what} {p:?}"))
        };
        Ok(match kind {
            "uniform" if param.is_none() => Shape::Uniform,
            "saturated" if param.is_none() => Shape::Saturated,
            "bursty" => Shape::Bursty(number("mean burst length")?),
            "multicast" => Shape::Multicast(number("mean fanout")?),
            _ => bail!("unknown traffic {text:?}"),
        })
    }

    pub fn spec(self, load: f64) -> TrafficSpec {
        match self {
            Shape::Uniform => TrafficSpec::BernoulliUniform { load },
            Shape::Bursty(b) => TrafficSpec::OnOffBursty {
                load,
                mean_burst: b,
            },
            Shape::Multicast(f) => TrafficSpec::multicast_at_load(load, f),
            Shape::Saturated => TrafficSpec::Saturated { pattern: None },
        }
    }

    pub fn saturated_spec(self) -> TrafficSpec {
        match self {
            Shape::Multicast(f) => TrafficSpec::SaturatedMulticast { mean_fanout: f },
            _ => TrafficSpec::Saturated { pattern: None },
        }
    }

    pub fn label(self) -> String {
        match self {
            Shape::Uniform => "uniform".into(),
            Shape::Bursty(b) => format!("bursty:{b}"),
            Shape::Multicast(f) => format!("multicast:{f}"),
            Shape::Saturated => "saturated".into(),
        }
    }
}

/// Expands `lo:hi:step` into loads, rounding away accumulated float error.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        bail!("load sweep must be lo:hi:step, got {text:?}");
    };
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .with_context(|| format!("bad number {s:?}"))
    };
    let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
    if step.is_nan() || step <= 0.0 || hi < lo {
        bail!("load sweep needs lo <= hi and step > 0");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}
