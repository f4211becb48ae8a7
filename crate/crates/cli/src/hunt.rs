//! Harness self-test: inject known-false claims and check that they are caught.
//!
//! Three mutations run on every trial instance of a campaign:
//! - `rhs_shrink`: the right side is scaled by 0.9. Only instances where the
//!   shrunk claim is actually false count; a tight psd instance (margin 0)
//!   is added per trial so the mutation always has targets.
//! - `angle_halved`: the bound is requested at half the sector angle, which
//!   must be refused.
//! - `non_sectorial`: `A − (λ_min(ℜA) + c) I` has an indefinite real part and
//!   must be refused.

use serde::{Deserialize, Serialize};
use sectorial_core::bounds::bound_holds;
use sectorial_core::eigen::eigenvalues;
use sectorial_core::matrix::real_part;
use sectorial_core::norms::NormFamily;
use sectorial_core::sectorial::ANGLE_TOL;
use sectorial_core::{
    derive_seed, random_matrix, BoundInstance, BoundKind, BoundReport, ComplexMatrix, ConcaveFunction, Error,
    PartitionedMatrix, RandomKind, SectorAngle,
};

use crate::config::SweepConfig;
use crate::error::HarnessError;
use crate::sweep::{par_map_indexed, trial_instance};

pub const RHS_SHRINK: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationVerdict {
    /// The mutated claim is false and the harness rejected it.
    Flagged,
    /// The mutated claim is false but the harness accepted it.
    Missed,
    /// The mutated claim is still true; it says nothing about sensitivity.
    Survived,
}

/// Applies the right-side shrink to a report.
pub fn shrink_verdict(r: &BoundReport, factor: f64) -> MutationVerdict {
    let rhs = factor * r.rhs;
    if rhs >= r.lhs {
        MutationVerdict::Survived
    } else if bound_holds(rhs - r.lhs, rhs) {
        MutationVerdict::Missed
    } else {
        MutationVerdict::Flagged
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MutationOutcome {
    pub name: String,
    pub applicable: usize,
    pub flagged: usize,
    pub survived: usize,
    pub rate: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntReport {
    pub trials: usize,
    pub instance_errors: usize,
    pub mutations: Vec<MutationOutcome>,
    pub passed: bool,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    applicable: usize,
    flagged: usize,
    survived: usize,
}

impl Tally {
    fn record(&mut self, v: MutationVerdict) {
        match v {
            MutationVerdict::Survived => self.survived += 1,
            MutationVerdict::Flagged => {
                self.applicable += 1;
                self.flagged += 1;
            }
            MutationVerdict::Missed => self.applicable += 1,
        }
    }

    fn add(&mut self, o: Tally) {
        self.applicable += o.applicable;
        self.flagged += o.flagged;
        self.survived += o.survived;
    }

    fn outcome(self, name: &str, threshold: f64) -> MutationOutcome {
        let rate = if self.applicable == 0 {
            0.0
        } else {
            self.flagged as f64 / self.applicable as f64
        };
        MutationOutcome {
            name: name.into(),
            applicable: self.applicable,
            flagged: self.flagged,
            survived: self.survived,
            rate,
            threshold,
            passed: self.applicable > 0 && rate >= threshold,
        }
    }
}

#[derive(Default, Clone, Copy)]
struct TrialTally {
    shrink: Tally,
    halved: Tally,
    outside: Tally,
    error: bool,
}

fn flagged_if(hit: bool) -> MutationVerdict {
    if hit {
        MutationVerdict::Flagged
    } else {
        MutationVerdict::Missed
    }
}

/// Shifts `A` so its real part has minimum eigenvalue `−c`.
pub fn push_out_of_sector(a: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
    let lmin = *eigenvalues(&real_part(a))?.last().expect("non-empty spectrum");
    let c = 0.1 * a.max_abs().max(1.0);
    Ok(a - &ComplexMatrix::identity(a.dim()).scale(lmin + c))
}

fn hunt_trial(cfg: &SweepConfig, res: &crate::config::Resolved, index: usize) -> TrialTally {
    let mut t = TrialTally::default();
    let Ok((params, part)) = trial_instance(cfg, &res.generators, index) else {
        t.error = true;
        return t;
    };
    let Ok(inst) = BoundInstance::new(part.clone()) else {
        t.error = true;
        return t;
    };

    for f in &res.functions {
        for spec in &res.norms {
            for norm in spec.expand(params.n) {
                for kind in res.kinds.iter().flat_map(|k| k.expand(&cfg.s_values)) {
                    if let Ok(r) = inst.verify(None, f, norm, kind) {
                        t.shrink.record(shrink_verdict(&r, RHS_SHRINK));
                    }
                }
            }
        }
    }
    // Tight target: lee with f = identity and the trace norm has margin 0 on psd input.
    if let Ok(tight) = random_matrix(RandomKind::Psd, params.n, derive_seed(params.seed, 5))
        .and_then(|a| PartitionedMatrix::new(a, params.split))
        .and_then(BoundInstance::new)
        .and_then(|i| i.verify(None, &ConcaveFunction::identity(), NormFamily::Trace, BoundKind::Lee))
    {
        t.shrink.record(shrink_verdict(&tight, RHS_SHRINK));
    }

    let probe_f = &res.functions[0];
    let probe = BoundKind::M2(1.0);
    if let Some(alpha) = inst.sector().angle() {
        if alpha.alpha() / 2.0 < alpha.alpha() - ANGLE_TOL {
            let halved = SectorAngle::new(alpha.alpha() / 2.0).expect("half of a valid angle");
            let out = inst.verify(Some(halved), probe_f, NormFamily::Trace, probe);
            t.halved.record(flagged_if(matches!(out, Err(Error::AngleTooSmall { .. }))));
        }
    }

    let outside = push_out_of_sector(part.matrix())
        .and_then(|b| PartitionedMatrix::new(b, params.split))
        .and_then(BoundInstance::new)
        .and_then(|i| i.verify(None, probe_f, NormFamily::Trace, probe));
    t.outside.record(flagged_if(matches!(outside, Err(Error::NotInSector))));
    t
}

pub fn hunt_sensitivity(cfg: &SweepConfig) -> Result<HuntReport, HarnessError> {
    let res = cfg.resolve()?;
    let tallies = par_map_indexed(cfg.parallelism, cfg.trials, |i| hunt_trial(cfg, &res, i))?;
    let mut total = TrialTally::default();
    let mut instance_errors = 0;
    for t in tallies {
        total.shrink.add(t.shrink);
        total.halved.add(t.halved);
        total.outside.add(t.outside);
        instance_errors += usize::from(t.error);
    }
    let mutations = vec![
        total.shrink.outcome("rhs_shrink", 0.99),
        total.halved.outcome("angle_halved", 0.99),
        total.outside.outcome("non_sectorial", 1.0),
    ];
    let passed = mutations.iter().all(|m| m.passed);
    Ok(HuntReport {
        trials: cfg.trials,
        instance_errors,
        mutations,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sectorial_core::Complex64;

    #[test]
    fn loose_instance_survives_and_tight_instance_is_flagged() {
        let d = ComplexMatrix::diagonal(&[Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)]);
        let inst = BoundInstance::new(PartitionedMatrix::new(d, 1).unwrap()).unwrap();
        let id = ConcaveFunction::identity();
        let quarter = SectorAngle::new(std::f64::consts::FRAC_PI_4).unwrap();
        let r = inst.verify(Some(quarter), &id, NormFamily::Trace, BoundKind::M2(1.0)).unwrap();
        assert_eq!(shrink_verdict(&r, RHS_SHRINK), MutationVerdict::Survived);

        let psd = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let inst = BoundInstance::new(PartitionedMatrix::new(psd, 1).unwrap()).unwrap();
        let r = inst.verify(None, &id, NormFamily::Trace, BoundKind::Lee).unwrap();
        assert_eq!(shrink_verdict(&r, RHS_SHRINK), MutationVerdict::Flagged);
    }

    #[test]
    fn shifted_matrix_is_outside_every_sector() {
        let a = random_matrix(RandomKind::Sectorial(0.3), 4, 1).unwrap();
        let b = push_out_of_sector(&a).unwrap();
        let inst = BoundInstance::new(PartitionedMatrix::new(b, 2).unwrap()).unwrap();
        assert!(inst.sector().angle().is_none());
    }
}
