//! Identity catalog, verification runner and reports.

mod catalog;
mod check;
pub mod spectrum;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::Jacobi;
use crate::model::{Bundle, Model, ModelSpec};

pub use catalog::catalog;
pub use check::Checker;

/// How a difference of operators is judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// The difference must equal the expected value exactly.
    Exact,
    /// Any coordinate-free difference passes and is reported.
    Constant,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "constant" => Ok(Mode::Constant),
            _ => Err(Error::Usage(format!("unknown mode `{s}` (expected exact or constant)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

pub(crate) type CheckFn = fn(&Context, &mut Checker) -> Result<()>;

/// One catalog entry.
pub struct Identity {
    pub id: &'static str,
    pub statement: &'static str,
    pub models: &'static [Model],
    pub min_n: usize,
    pub max_n: usize,
    /// Models for which the identity defaults to constant mode.
    pub constant_by_default: &'static [Model],
    /// Whether the identity accepts constant mode at all.
    pub constant_capable: bool,
    pub(crate) check: CheckFn,
}

impl Identity {
    pub fn applies_to(&self, spec: &ModelSpec) -> std::result::Result<(), String> {
        if !self.models.contains(&spec.model) {
            let names: Vec<&str> = self.models.iter().map(|m| m.name()).collect();
            return Err(format!("applies to {} only", names.join(", ")));
        }
        if spec.n < self.min_n || spec.n > self.max_n {
            return Err(format!("applies to N in {}..={}", self.min_n, self.max_n));
        }
        Ok(())
    }

    pub fn mode_for(&self, model: Model, requested: Option<Mode>) -> Mode {
        if !self.constant_capable {
            return Mode::Exact;
        }
        requested.unwrap_or(if self.constant_by_default.contains(&model) { Mode::Constant } else { Mode::Exact })
    }
}

/// Shared, lazily built objects for one model.
pub struct Context {
    pub bundle: Bundle,
    pub jacobi: Jacobi,
    pub mode: Mode,
    seed: u64,
}

impl Context {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        Ok(Context { bundle: Bundle::new(spec), jacobi: Jacobi::standard(spec.n)?, mode: Mode::Exact, seed: 0x5eed })
    }

    pub fn spec(&self) -> &ModelSpec {
        self.bundle.spec()
    }

    pub(crate) fn rng(&self, salt: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ self.spec().n as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub identity: String,
    pub model: Model,
    pub n: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn without_timing(&self) -> Report {
        Report { entries: self.entries.iter().map(|e| Entry { millis: 0, ..e.clone() }).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = write!(out, "{} {:<18} {} N={} {:>6} ms", e.status.label(), e.identity, e.model, e.n, e.millis);
            if let Some(c) = &e.constant {
                let _ = write!(out, "  constant = {c}");
            }
            if let Some(r) = &e.reason {
                let _ = write!(out, "  ({r})");
            }
            out.push('\n');
            if let Some(r) = &e.residual {
                let short: String = r.chars().take(400).collect();
                let ellipsis = if short.len() < r.len() { " ..." } else { "" };
                let _ = writeln!(out, "    residual: {short}{ellipsis}");
            }
        }
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }
}

/// Run one identity against a prepared context.
pub fn run_identity(identity: &Identity, ctx: &Context, mode: Option<Mode>) -> Entry {
    let spec = *ctx.spec();
    let mut entry = Entry {
        identity: identity.id.to_string(),
        model: spec.model,
        n: spec.n,
        status: Status::Skipped,
        constant: None,
        residual: None,
        reason: None,
        millis: 0,
    };
    if let Err(reason) = identity.applies_to(&spec) {
        entry.reason = Some(reason);
        return entry;
    }
    let start = Instant::now();
    let mut ck = Checker::new(identity.mode_for(spec.model, mode));
    let outcome = (identity.check)(ctx, &mut ck);
    entry.millis = start.elapsed().as_millis() as u64;
    entry.constant = ck.constant.take();
    match (outcome, ck.failure.take()) {
        (Err(e), _) => {
            entry.status = Status::Fail;
            entry.residual = Some(e.to_string());
        }
        (Ok(()), Some(f)) => {
            entry.status = Status::Fail;
            entry.residual = Some(f);
        }
        (Ok(()), None) => entry.status = Status::Pass,
    }
    entry
}

/// Options of a suite run.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub filter: Option<String>,
    pub mode: Option<Mode>,
    pub jobs: Option<usize>,
}

/// Run every catalog identity matching the filter, sorted by id.
pub fn run_suite(spec: ModelSpec, opts: &SuiteOptions) -> Result<Report> {
    let pattern = match &opts.filter {
        Some(f) => Some(glob::Pattern::new(f).map_err(|e| Error::Usage(format!("bad filter `{f}`: {e}")))?),
        None => None,
    };
    let mut selected: Vec<&Identity> =
        catalog().iter().filter(|id| pattern.as_ref().is_none_or(|p| p.matches(id.id))).collect();
    selected.sort_by_key(|id| id.id);
    let ctx = Context::new(spec)?;
    let run = || selected.par_iter().map(|id| run_identity(id, &ctx, opts.mode)).collect::<Vec<_>>();
    let mut entries = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {j} workers: {e}")))?
            .install(run),
        None => run(),
    };
    entries.sort_by(|a, b| a.identity.cmp(&b.identity));
    Ok(Report { entries })
}

pub fn find(id: &str) -> Option<&'static Identity> {
    catalog().iter().find(|i| i.id == id)
}
