// SPDX-License-Identifier: Apache-2.0

//! `iqswitch` command-line driver.

mod args;
mod plan;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use clap::Parser;
use rayon::prelude::*;

use crate::args::Cli;
use crate::plan::RunSpec;
use crate::report::Row;

struct Outcome {
    row: Row,
    trace: Vec<String>,
}

fn execute(spec: &RunSpec) -> Result<Outcome> {
    let limit = spec.config.trace_slots;
    let mut trace = Vec::new();
    let result = iqswitch::run_with(spec.config.clone(), |rec| {
        if rec.slot < limit {
            trace.push(rec.trace_line());
        }
    })
    .with_context(|| {
        format!(
            "run policy={} load={:?} seed={}",
            spec.config.unicast.name(),
            spec.load,
            spec.config.seed
        )
    })?;
    Ok(Outcome {
        row: Row::new(spec, &result),
        trace,
    })
}

fn main() -> Result<()> {
    let mut cli = Cli::parse();
    cli.merge_config()?;
    let runs = plan::build(&cli)?;

    let outcomes: Vec<Outcome> = if cli.parallel {
        runs.par_iter().map(execute).collect::<Result<_>>()?
    } else {
        runs.iter().map(execute).collect::<Result<_>>()?
    };

    if cli.trace.is_some() {
        let mut sink: Box<dyn Write> = match cli.trace_path() {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(io::stderr().lock()),
        };
        let tagged = outcomes.len() > 1;
        for (k, o) in outcomes.iter().enumerate() {
            for line in &o.trace {
                if tagged {
                    writeln!(sink, "run={k} {line}")?;
                } else {
                    writeln!(sink, "{line}")?;
                }
            }
        }
        sink.flush()?;
    }

    let rows: Vec<Row> = outcomes.into_iter().map(|o| o.row).collect();
    match &cli.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            report::write_csv(BufWriter::new(file), &rows)
        }
        None => report::write_csv(io::stdout().lock(), &rows),
    }
}
