//! Randomized campaigns over generated instances.
//!
//! Trial `i` draws everything from `seed_i = derive_seed(master_seed, i)`:
//! generator, dimension, angle, split and the matrix seed are taken from
//! `derive_seed(seed_i, j)` for `j = 0..=4`. Records depend only on the trial
//! index, so the worker count never changes the output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sectorial_core::lab::{im_part_bound, modulus_bound};
use sectorial_core::random::RNG_ALGORITHM;
use sectorial_core::{derive_seed, random_matrix, BoundInstance, Error, PartitionedMatrix, SectorAngle};

use crate::config::{Generator, Resolved, SweepConfig};
use crate::error::HarnessError;

/// Documented in reports so seeds can be re-derived by hand.
pub const SEED_DERIVATION: &str =
    "seed_i = splitmix64_finalize(master_seed + (i + 1) * 0x9E3779B97F4A7C15) (wrapping)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub kind: String,
    pub norm: String,
    pub f: String,
    pub s: Option<f64>,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub ineq: String,
    pub s: f64,
    pub residual_min_eig: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub generator: String,
    pub n: usize,
    pub split: usize,
    /// Angle requested from the generator.
    pub generator_alpha: f64,
    /// Minimal sector angle measured on the instance.
    pub sector_angle: Option<f64>,
    pub reports: Vec<ReportRecord>,
    pub witnesses: Vec<WitnessRecord>,
    /// Bound kinds whose hypotheses the instance does not meet.
    pub skipped: Vec<String>,
    /// Failures recorded in-band instead of aborting the campaign.
    pub errors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl TrialRecord {
    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.holds).count() + self.witnesses.iter().filter(|w| !w.holds).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub reports: usize,
    pub violations: usize,
    pub errors: usize,
    pub skipped: usize,
    pub witness_checks: usize,
    /// Smallest `margin` per bound kind.
    pub min_margin_by_kind: BTreeMap<String, f64>,
    /// Smallest `margin / max(1, rhs)` per bound kind.
    pub min_relative_margin_by_kind: BTreeMap<String, f64>,
    pub min_witness_residual: Option<f64>,
    pub rng: String,
    pub seed_derivation: String,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

impl SweepOutcome {
    /// One JSON object per trial, then `{"summary": ...}`.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), HarnessError> {
        let io = |source| HarnessError::Io {
            path: "<output>".into(),
            source,
        };
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n").map_err(io)?;
        }
        serde_json::to_writer(&mut w, &serde_json::json!({ "summary": &self.summary }))?;
        w.write_all(b"\n").map_err(io)?;
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}

/// Uniform in `[0, 1)` from the top 53 bits.
fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Parameters of one generated trial instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialParams {
    pub seed: u64,
    pub generator: Generator,
    pub n: usize,
    pub alpha: f64,
    pub split: usize,
    pub matrix_seed: u64,
}

pub fn trial_params(cfg: &SweepConfig, generators: &[Generator], index: usize) -> TrialParams {
    let seed = derive_seed(cfg.master_seed, index as u64);
    let draw = |j: u64| derive_seed(seed, j);
    let generator = generators[(draw(0) % generators.len() as u64) as usize];
    let [nlo, nhi] = cfg.n_range;
    let n = nlo + (draw(1) % (nhi - nlo + 1) as u64) as usize;
    let [alo, ahi] = cfg.alpha_range;
    let alpha = match generator {
        Generator::Psd => 0.0,
        _ => alo + (ahi - alo) * unit(draw(2)),
    };
    let split = 1 + (draw(3) % (n - 1) as u64) as usize;
    TrialParams {
        seed,
        generator,
        n,
        alpha,
        split,
        matrix_seed: draw(4),
    }
}

/// Generates the instance of trial `index`.
pub fn trial_instance(cfg: &SweepConfig, generators: &[Generator], index: usize) -> Result<(TrialParams, PartitionedMatrix), Error> {
    let p = trial_params(cfg, generators, index);
    let a = random_matrix(p.generator.random_kind(p.alpha), p.n, p.matrix_seed)?;
    Ok((p, PartitionedMatrix::new(a, p.split)?))
}

fn run_trial(cfg: &SweepConfig, res: &Resolved, index: usize) -> TrialRecord {
    let start = cfg.record_timing.then(Instant::now);
    let p = trial_params(cfg, &res.generators, index);
    let mut rec = TrialRecord {
        trial: index,
        seed: p.seed,
        generator: p.generator.name().into(),
        n: p.n,
        split: p.split,
        generator_alpha: p.alpha,
        sector_angle: None,
        reports: Vec::new(),
        witnesses: Vec::new(),
        skipped: Vec::new(),
        errors: Vec::new(),
        wall_time_ms: None,
    };
    let inst = trial_instance(cfg, &res.generators, index).and_then(|(_, part)| BoundInstance::new(part));
    match inst {
        Ok(inst) => evaluate(cfg, res, &inst, &mut rec),
        Err(e) => rec.errors.push(format!("instance: {e}")),
    }
    rec.wall_time_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    rec
}

fn evaluate(cfg: &SweepConfig, res: &Resolved, inst: &BoundInstance, rec: &mut TrialRecord) {
    let alpha = inst.sector().angle();
    rec.sector_angle = alpha.map(|a| a.alpha());
    let n = inst.partition().dim();
    for f in &res.functions {
        for spec in &res.norms {
            for norm in spec.expand(n) {
                for kind in res.kinds.iter().flat_map(|k| k.expand(&cfg.s_values)) {
                    match inst.verify(None, f, norm, kind) {
                        Ok(r) => rec.reports.push(ReportRecord {
                            kind: kind.to_string(),
                            norm: norm.to_string(),
                            f: f.to_string(),
                            s: r.s,
                            alpha: r.alpha,
                            lhs: r.lhs,
                            rhs: r.rhs,
                            margin: r.margin,
                            holds: r.holds,
                        }),
                        Err(Error::NotApplicable { .. }) => {
                            let k = kind.to_string();
                            if !rec.skipped.contains(&k) {
                                rec.skipped.push(k);
                            }
                        }
                        Err(e) => rec.errors.push(format!("{kind} {f} {norm}: {e}")),
                    }
                }
            }
        }
    }
    if cfg.witnesses {
        if let Some(alpha) = alpha {
            witness_records(inst, alpha, &cfg.s_values, rec);
        }
    }
}

fn witness_records(inst: &BoundInstance, alpha: SectorAngle, s_values: &[f64], rec: &mut TrialRecord) {
    let a = inst.partition().matrix();
    for &s in s_values {
        for (name, out) in [("im_part", im_part_bound(a, alpha, s)), ("modulus", modulus_bound(a, alpha, s))] {
            match out {
                Ok(w) => rec.witnesses.push(WitnessRecord {
                    ineq: name.into(),
                    s,
                    residual_min_eig: w.residual_min_eig,
                    tolerance: w.tolerance,
                    holds: w.holds,
                }),
                Err(e) => rec.errors.push(format!("{name} s={s}: {e}")),
            }
        }
    }
}

pub fn summarize(cfg: &SweepConfig, records: &[TrialRecord]) -> SweepSummary {
    let mut min_margin: BTreeMap<String, f64> = BTreeMap::new();
    let mut min_rel: BTreeMap<String, f64> = BTreeMap::new();
    let mut min_witness: Option<f64> = None;
    for r in records {
        for b in &r.reports {
            let m = min_margin.entry(b.kind.clone()).or_insert(f64::INFINITY);
            *m = m.min(b.margin);
            let m = min_rel.entry(b.kind.clone()).or_insert(f64::INFINITY);
            *m = m.min(b.margin / b.rhs.max(1.0));
        }
        for w in &r.witnesses {
            min_witness = Some(min_witness.map_or(w.residual_min_eig, |m| m.min(w.residual_min_eig)));
        }
    }
    SweepSummary {
        trials: records.len(),
        reports: records.iter().map(|r| r.reports.len()).sum(),
        violations: records.iter().map(TrialRecord::violations).sum(),
        errors: records.iter().map(|r| r.errors.len()).sum(),
        skipped: records.iter().map(|r| r.skipped.len()).sum(),
        witness_checks: records.iter().map(|r| r.witnesses.len()).sum(),
        min_margin_by_kind: min_margin,
        min_relative_margin_by_kind: min_rel,
        min_witness_residual: min_witness,
        rng: RNG_ALGORITHM.into(),
        seed_derivation: SEED_DERIVATION.into(),
        master_seed: cfg.master_seed,
    }
}

/// Maps `f` over `0..count` on a pool of `parallelism` workers (0 = all
/// cores), returning results in index order.
pub fn par_map_indexed<T: Send>(
    parallelism: usize,
    count: usize,
    f: impl Fn(usize) -> T + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, HarnessError> {
    let res = cfg.resolve()?;
    let records = par_map_indexed(cfg.parallelism, cfg.trials, |i| run_trial(cfg, &res, i))?;
    let summary = summarize(cfg, &records);
    Ok(SweepOutcome { records, summary })
}
