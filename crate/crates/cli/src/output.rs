use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Common, Format};
use crate::Failure;

static START: OnceLock<Instant> = OnceLock::new();

/// Marks the start of the run for the wall-time report.
pub fn start_clock() {
    START.get_or_init(Instant::now);
}

/// Configuration block written at the top of every output file. Worker count,
/// cache location and output path are left out so files stay byte-identical.
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str, common: &Common) -> Self {
        let mut h = Self { entries: Vec::new() };
        h.add("tool", format!("fqmoments {}", env!("CARGO_PKG_VERSION")));
        h.add("command", command);
        h.add("q", common.q);
        h.add("seed", common.seed);
        h.add("timing", common.timing);
        h
    }

    pub fn add(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    /// Records a tolerance and whether it was overridden.
    pub fn tolerance(&mut self, key: &str, value: f64, overridden: bool) -> &mut Self {
        let note = if overridden { "override" } else { "default" };
        self.add(&format!("tolerance.{key}"), format!("{value:e} ({note})"))
    }
}

/// Cells run and passed, largest residual and fitted constants of one suite.
pub struct Verdict {
    pub suite: String,
    pub run: usize,
    pub passed: usize,
    pub skipped: usize,
    pub max_residual: f64,
    pub constants: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            run: 0,
            passed: 0,
            skipped: 0,
            max_residual: 0.0,
            constants: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, passed: bool, residual: f64) {
        self.run += 1;
        self.passed += usize::from(passed);
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.run
    }

    fn to_json(&self) -> Value {
        let constants: Map<String, Value> = self.constants.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "suite": self.suite,
            "cells_run": self.run,
            "cells_passed": self.passed,
            "cells_skipped": self.skipped,
            "max_residual": self.max_residual,
            "fitted_constants": constants,
            "notes": self.notes,
        })
    }

    fn print(&self) {
        eprintln!(
            "{}: {}/{} cells passed, {} skipped, max residual {:.3e}, {:.2}s",
            self.suite,
            self.passed,
            self.run,
            self.skipped,
            self.max_residual,
            START.get_or_init(Instant::now).elapsed().as_secs_f64()
        );
        for (k, v) in &self.constants {
            eprintln!("  {k} = {v:.6}");
        }
        for n in &self.notes {
            eprintln!("  {n}");
        }
    }
}

fn sink(common: &Common) -> io::Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes header, rows and (JSON only) verdicts; verdicts always go to stderr.
/// Returns `Err(Verification)` when any verdict has a failing cell.
pub fn emit<R: Serialize>(common: &Common, header: &Header, rows: &[R], verdicts: &[Verdict]) -> Result<(), Failure> {
    let mut out = sink(common)?;
    match common.format {
        Format::Csv => {
            for (k, v) in &header.entries {
                writeln!(out, "# {k}: {v}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            for r in rows {
                w.serialize(r).map_err(|e| Failure::Usage(format!("csv: {e}")))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let header: Map<String, Value> = header.entries.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            let doc = json!({
                "header": header,
                "rows": rows,
                "summary": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    for v in verdicts {
        v.print();
    }
    if verdicts.iter().all(Verdict::ok) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
