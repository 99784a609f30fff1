// SPDX-License-Identifier: Apache-2.0

//! CSV rows. Each row carries everything needed to reproduce it.

use std::io::Write;

use anyhow::Result;
use iqswitch::SimResult;
use serde::Serialize;

use crate::plan::RunSpec;

#[derive(Debug, Serialize)]
pub struct Row {
    pub policy: &'static str,
    pub iterations: Option<usize>,
    pub load: Option<f64>,
    pub mean_delay_slots: f64,
    pub throughput: f64,
    pub max_iters_used: Option<usize>,
    pub seed: u64,
    pub multicast: &'static str,
    pub n: usize,
    pub classes: usize,
    pub speedup: usize,
    pub traffic: String,
    pub horizon: u64,
    pub warmup: u64,
    pub mean_iters_used: Option<f64>,
    pub diverged: bool,
    pub ingress_run: f64,
    pub egress_run: f64,
}

impl Row {
    pub fn new(spec: &RunSpec, r: &SimResult) -> Self {
        let c = &spec.config;
        let iterative = c.unicast.iterations().is_some();
        Row {
            policy: c.unicast.name(),
            iterations: c.unicast.iterations(),
            load: spec.load,
            mean_delay_slots: r.delay.mean(),
            throughput: r.throughput.aggregate,
            max_iters_used: iterative.then_some(r.convergence.max),
            seed: c.seed,
            multicast: c.multicast.name(),
            n: c.n,
            classes: c.classes,
            speedup: c.speedup,
            traffic: spec.traffic_label.clone(),
            horizon: c.horizon,
            warmup: c.warmup,
            mean_iters_used: iterative.then_some(r.convergence.mean),
            diverged: r.diverged,
            ingress_run: r.burstiness.ingress_mean_run,
            egress_run: r.burstiness.egress_mean_run,
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
