// SPDX-License-Identifier: Apache-2.0

//! Turns flags or a preset into a list of independent runs.

use anyhow::{bail, Result};
use iqswitch::{admissible_check, MulticastPolicy, SimConfig, TrafficSpec, UnicastPolicy};

use crate::args::{parse_multicast, parse_sweep, parse_unicast, Cli, Preset, Shape};

/// One simulation to run and the labels its row carries.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub config: SimConfig,
    /// `None` for saturated runs.
    pub load: Option<f64>,
    pub traffic_label: String,
}

const DEFAULT_HORIZON: u64 = 100_000;

struct Base {
    n: usize,
    classes: usize,
    speedup: usize,
    horizon: u64,
    warmup: Option<u64>,
    seed: u64,
    trace: u64,
}

impl Base {
    fn from_cli(cli: &Cli, n: usize) -> Self {
        Base {
            n: cli.n.unwrap_or(n),
            classes: cli.classes.unwrap_or(1),
            speedup: cli.speedup.unwrap_or(1),
            horizon: cli.horizon.unwrap_or(DEFAULT_HORIZON),
            warmup: cli.warmup,
            seed: cli.seed.unwrap_or(1),
            trace: cli.trace.unwrap_or(0),
        }
    }

    fn run(
        &self,
        unicast: UnicastPolicy,
        multicast: MulticastPolicy,
        shape: Shape,
        load: Option<f64>,
    ) -> RunSpec {
        let traffic = match load {
            Some(l) => shape.spec(l),
            None => shape.saturated_spec(),
        };
        let mut config = SimConfig::new(self.n, unicast, traffic, self.horizon, self.seed);
        config.classes = self.classes;
        config.speedup = self.speedup;
        config.multicast = multicast;
        config.trace_slots = self.trace;
        if let Some(w) = self.warmup {
            config.warmup = w;
        }
        RunSpec {
            config,
            load,
            traffic_label: match (load, shape) {
                (Some(_), _) | (None, Shape::Saturated) => shape.label(),
                (None, Shape::Multicast(f)) => format!("saturated-multicast:{f}"),
                (None, _) => Shape::Saturated.label(),
            },
        }
    }
}

fn check_load(load: f64, traffic: &TrafficSpec, n: usize, force: bool) -> Result<()> {
    if !(0.0..=1.0).contains(&load) {
        bail!("load {load} is inadmissible: an output cannot carry more than one cell per slot");
    }
    if let Some(rates) = traffic.rate_matrix(n) {
        let a = admissible_check(&rates);
        if !a.admissible && !force {
            bail!(
                "load {load} is inadmissible (largest row/column sum {:.4} is not below 1); pass --force to run it anyway",
                a.worst()
            );
        }
    }
    Ok(())
}

pub fn build(cli: &Cli) -> Result<Vec<RunSpec>> {
    match cli.preset {
        Some(p) => preset(cli, p),
        None => single(cli),
    }
}

fn single(cli: &Cli) -> Result<Vec<RunSpec>> {
    let base = Base::from_cli(cli, 16);
    let iters = cli.iters.unwrap_or(1);
    let unicast = parse_unicast(cli.policy.as_deref().unwrap_or("islip"), iters)?;
    let multicast = parse_multicast(cli.multicast.as_deref().unwrap_or("random-split"))?;
    let shape = Shape::parse(cli.traffic.as_deref().unwrap_or("uniform"))?;

    let loads: Vec<Option<f64>> = if shape == Shape::Saturated {
        if cli.load.is_some() || cli.load_sweep.is_some() {
            bail!("saturated traffic takes no load");
        }
        vec![None]
    } else if let Some(sweep) = &cli.load_sweep {
        parse_sweep(sweep)?.into_iter().map(Some).collect()
    } else {
        vec![Some(cli.load.unwrap_or(0.5))]
    };

    let mut runs = Vec::with_capacity(loads.len());
    for load in loads {
        let run = base.run(unicast, multicast, shape, load);
        if let Some(l) = load {
            check_load(l, &run.config.traffic, base.n, cli.force)?;
        }
        run.config.validate()?;
        runs.push(run);
    }
    Ok(runs)
}

fn preset(cli: &Cli, which: Preset) -> Result<Vec<RunSpec>> {
    let iters = cli.iters;
    let rs = MulticastPolicy::RandomSplit;
    let mut runs = Vec::new();
    match which {
        Preset::Fig6 => {
            let base = Base::from_cli(cli, 16);
            let loads = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99];
            let policies = [
                UnicastPolicy::OutputQueued,
                UnicastPolicy::Islip { iterations: 1 },
                UnicastPolicy::Islip { iterations: 2 },
                UnicastPolicy::Islip { iterations: 4 },
                UnicastPolicy::Fifo,
            ];
            for p in policies {
                for l in loads {
                    runs.push(base.run(p, rs, Shape::Uniform, Some(l)));
                }
            }
        }
        Preset::Fig8 => {
            let base = Base::from_cli(cli, 8);
            let shape = Shape::Multicast(4.0);
            let unicast = UnicastPolicy::Islip {
                iterations: iters.unwrap_or(1),
            };
            for m in [MulticastPolicy::RandomSplit, MulticastPolicy::NoSplit] {
                for k in 1..=9 {
                    runs.push(base.run(unicast, m, shape, Some(k as f64 / 10.0)));
                }
                runs.push(base.run(unicast, m, shape, None));
            }
        }
        Preset::RrmLimit => {
            let base = Base::from_cli(cli, 16);
            let it = iters.unwrap_or(1);
            for p in [
                UnicastPolicy::Rrm { iterations: it },
                UnicastPolicy::Islip { iterations: it },
            ] {
                for k in 0..=15 {
                    runs.push(base.run(p, rs, Shape::Uniform, Some(0.5 + 0.02 * k as f64)));
                }
                runs.push(base.run(p, rs, Shape::Uniform, None));
            }
        }
        Preset::FifoLimit => {
            let base = Base::from_cli(cli, 16);
            for k in 0..=10 {
                runs.push(base.run(
                    UnicastPolicy::Fifo,
                    rs,
                    Shape::Uniform,
                    Some(0.5 + 0.02 * k as f64),
                ));
            }
            runs.push(base.run(UnicastPolicy::Fifo, rs, Shape::Uniform, None));
        }
        Preset::Props => {
            let base = Base::from_cli(cli, 16);
            let n = base.n;
            for l in [0.5, 0.8, 0.9, 0.95, 0.99] {
                runs.push(base.run(
                    UnicastPolicy::Islip { iterations: n },
                    rs,
                    Shape::Uniform,
                    Some(l),
                ));
            }
            for p in [
                UnicastPolicy::Islip { iterations: 1 },
                UnicastPolicy::Ilqf { iterations: 1 },
                UnicastPolicy::Iocf { iterations: 1 },
            ] {
                runs.push(base.run(p, rs, Shape::Bursty(16.0), Some(0.8)));
            }
            runs.push(base.run(
                UnicastPolicy::Islip { iterations: 1 },
                rs,
                Shape::Uniform,
                None,
            ));
        }
    }
    // tidy float labels such as 0.5 + 0.02 * 3
    for r in &mut runs {
        if let Some(l) = r.load.as_mut() {
            *l = (*l * 1e9).round() / 1e9;
            r.config.traffic = r
                .config
                .traffic
                .with_load(*l)
                .expect("preset loads apply to loaded traffic");
        }
    }
    for r in &runs {
        r.config.validate()?;
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn cli(args: &[&str]) -> Cli {
        Cli::parse_from(std::iter::once("iqswitch").chain(args.iter().copied()))
    }

    #[test]
    fn single_run_defaults() {
        let runs = build(&cli(&[])).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].config.n, 16);
        assert_eq!(runs[0].load, Some(0.5));
    }

    #[test]
    fn sweep_expands() {
        let runs = build(&cli(&["--load-sweep", "0.2:0.6:0.2"])).unwrap();
        let loads: Vec<f64> = runs.iter().map(|r| r.load.unwrap()).collect();
        assert_eq!(loads, vec![0.2, 0.4, 0.6]);
    }

    #[test]
    fn full_load_needs_force() {
        assert!(build(&cli(&["--load", "1.0"])).is_err());
        assert!(build(&cli(&["--load", "1.0", "--force"])).is_ok());
        assert!(build(&cli(&["--load", "1.2", "--force"])).is_err());
    }

    #[test]
    fn presets_build() {
        for p in ["fig6", "fig8", "rrm-limit", "fifo-limit", "props"] {
            let runs = build(&cli(&["--preset", p])).unwrap();
            assert!(!runs.is_empty(), "{p}");
        }
        let fig6 = build(&cli(&["--preset", "fig6"])).unwrap();
        assert_eq!(fig6.len(), 5 * 11);
        assert!(fig6.iter().all(|r| r.config.n == 16));
    }
}
