//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::time::Instant;

use sectorial_core::eigen::eigenvalues;
use sectorial_core::lab::{
    bourin_uchiyama_consequence, fan_hoffman_check, im_part_bound, block_modulus_check, modulus_bound,
    re_modulus_dominance, thompson_consequence, weyl_norm_monotone, ConsequenceCheck,
};
use sectorial_core::matrix::HermitianMatrix;
use sectorial_core::norms::NormFamily;
use sectorial_core::sectorial::sector_angle_auto;
use sectorial_core::{
    derive_seed, random_matrix, sector_angle, AngleMethod, BoundInstance, BoundKind, ComplexMatrix, ConcaveFunction,
    PartitionedMatrix, RandomKind, SectorAngle,
};
use sectorial_lab::config::Generator;
use sectorial_lab::hunt::hunt_sensitivity;
use sectorial_lab::sweep::trial_instance;
use sectorial_lab::{run_sweep, SweepConfig};

const MASTER_SEED: u64 = 0x5EC7_0A1D;
const CAMPAIGN_TRIALS: usize = 1000;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent random parameters for auxiliary campaigns.
struct Draw(u64);

impl Draw {
    fn new(stream: u64, i: usize) -> Self {
        Draw(derive_seed(MASTER_SEED ^ stream.wrapping_mul(0xA24B_AED4_963E_E407), i as u64))
    }
    fn raw(&self, j: u64) -> u64 {
        derive_seed(self.0, j)
    }
    fn range(&self, j: u64, lo: usize, hi: usize) -> usize {
        lo + (self.raw(j) % (hi - lo + 1) as u64) as usize
    }
    fn log_uniform(&self, j: u64, lo: f64, hi: f64) -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * unit(self.raw(j))).exp()
    }
    fn uniform(&self, j: u64, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * unit(self.raw(j))
    }
}

fn functions() -> Vec<ConcaveFunction> {
    SweepConfig::with_defaults(0, 0).resolve().unwrap().functions
}

fn campaign_config() -> SweepConfig {
    let mut cfg = SweepConfig::with_defaults(CAMPAIGN_TRIALS, MASTER_SEED);
    cfg.witnesses = false;
    cfg
}

/// The instances of the main campaign, with their minimal sector angles.
fn campaign_instances() -> Vec<(BoundInstance, SectorAngle)> {
    let cfg = campaign_config();
    let gens = [Generator::Sectorial];
    (0..CAMPAIGN_TRIALS)
        .map(|i| {
            let (_, part) = trial_instance(&cfg, &gens, i).unwrap();
            let inst = BoundInstance::new(part).unwrap();
            let alpha = inst.sector().angle().unwrap();
            (inst, alpha)
        })
        .collect()
}

fn main_campaign() -> Outcome {
    let cfg = campaign_config();
    let start = Instant::now();
    let out = run_sweep(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for r in out.records.iter().flat_map(|t| &t.reports) {
        worst = worst.min(r.margin / r.rhs.max(1.0));
        bad += usize::from(r.margin < -1e-8 * r.rhs.max(1.0));
    }
    let s = &out.summary;
    outcome(
        s.trials == CAMPAIGN_TRIALS && s.violations == 0 && s.errors == 0 && bad == 0 && secs < 120.0,
        format!(
            "{} trials, {} reports, {} violations, {} errors, min relative margin {worst:.3e}, {secs:.1}s",
            s.trials, s.reports, s.violations + bad, s.errors
        ),
    )
}

fn dominance(instances: &[(BoundInstance, SectorAngle)]) -> Outcome {
    let fs = functions();
    let (mut checks, mut failures) = (0, 0);
    for (inst, alpha) in instances {
        for f in &fs {
            for norm in NormFamily::all_ky_fan(inst.partition().dim()) {
                for j in 0..16 {
                    let s = 1.0 + j as f64 / 15.0;
                    checks += 1;
                    failures += usize::from(!inst.dominance_over_zpt(*alpha, f, norm, s).unwrap().holds);
                }
            }
        }
    }
    outcome(failures == 0, format!("{checks} comparisons, {failures} with main(s) above zpt"))
}

fn ulp_distance(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64).abs_diff(b.to_bits() as i64)
}

fn mao_identity(instances: &[(BoundInstance, SectorAngle)]) -> Outcome {
    let fs = functions();
    let (mut checks, mut worst) = (0, 0);
    for (inst, alpha) in instances {
        for f in &fs {
            for norm in NormFamily::all_ky_fan(inst.partition().dim()) {
                let mao = inst.rhs(*alpha, f, norm, BoundKind::Mao).unwrap();
                let m2 = inst.rhs(*alpha, f, norm, BoundKind::M2(1.0)).unwrap();
                checks += 1;
                worst = worst.max(ulp_distance(mao, m2));
            }
        }
    }
    outcome(worst <= 1, format!("{checks} comparisons, max distance {worst} ulp"))
}

/// Singular values from the Hermitian dilation `[[0, B], [B*, 0]]`, whose
/// spectrum is `±σ(B)`.
fn dilation_singular_values(b: &ComplexMatrix) -> Vec<f64> {
    let z = ComplexMatrix::zeros(b.dim());
    let h = HermitianMatrix::new(ComplexMatrix::from_blocks(&z, b, &b.adjoint(), &z).unwrap()).unwrap();
    let mut ev = eigenvalues(&h).unwrap();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev.truncate(b.dim());
    ev.into_iter().map(|x| x.max(0.0)).collect()
}

fn ky_fan_of_padded(vals: &[f64], n: usize, k: usize) -> f64 {
    let mut v = vals.to_vec();
    v.resize(n, 0.0);
    v.sort_by(|x, y| y.total_cmp(x));
    v[..k].iter().sum()
}

fn quarter_angle() -> Outcome {
    let fs = functions();
    let alpha = SectorAngle::new(FRAC_PI_4).unwrap();
    let c = 2f64.sqrt() / 2.0;
    let (mut checks, mut worst) = (0, 0.0f64);
    for i in 0..100 {
        let d = Draw::new(4, i);
        let n = d.range(0, 2, 12);
        let split = d.range(1, 1, n - 1);
        let a = random_matrix(RandomKind::Sectorial(FRAC_PI_4), n, d.raw(2)).unwrap();
        let p = PartitionedMatrix::new(a, split).unwrap();
        let blocks = [dilation_singular_values(&p.a11()), dilation_singular_values(&p.a22())];
        let inst = BoundInstance::new(p).unwrap();
        for f in &fs {
            for k in 1..=n {
                let got = inst.rhs(alpha, f, NormFamily::KyFan(k), BoundKind::M2(1.0)).unwrap();
                let want: f64 = blocks
                    .iter()
                    .map(|sv| {
                        let fv: Vec<f64> = sv.iter().map(|&x| f.eval(c * x)).collect();
                        2.0 * ky_fan_of_padded(&fv, n, k)
                    })
                    .sum();
                checks += 1;
                worst = worst.max((got - want).abs() / want.abs().max(1.0));
            }
        }
    }
    outcome(worst <= 1e-10, format!("{checks} comparisons, max relative gap {worst:.2e}"))
}

fn witness_suite() -> Outcome {
    let mut fails = [0usize; 3];
    let mut worst = f64::INFINITY;
    for i in 0..500 {
        let d = Draw::new(5, i);
        let m = d.range(0, 1, 6);
        let s = d.log_uniform(1, 0.1, 10.0);
        let big = random_matrix(RandomKind::Psd, 2 * m, d.raw(2)).unwrap();
        let p = PartitionedMatrix::new(big, m).unwrap();
        let a = HermitianMatrix::symmetrize(p.a11());
        let b = HermitianMatrix::symmetrize(p.a22());
        match block_modulus_check(&a, &p.a12(), &b, s) {
            Ok((r1, r2)) => {
                worst = worst.min(r1.residual_min_eig).min(r2.residual_min_eig);
                fails[0] += usize::from(!(r1.holds && r2.holds));
            }
            Err(_) => fails[0] += 1,
        }

        let n = d.range(3, 2, 12);
        let alpha = d.uniform(4, 0.01, 1.48);
        let a = random_matrix(RandomKind::Sectorial(alpha), n, d.raw(5)).unwrap();
        let measured = sector_angle_auto(&a).unwrap().angle().unwrap();
        for (slot, out) in [(1, im_part_bound(&a, measured, s)), (2, modulus_bound(&a, measured, s))] {
            match out {
                Ok(w) => {
                    worst = worst.min(w.residual_min_eig);
                    fails[slot] += usize::from(!w.holds);
                }
                Err(_) => fails[slot] += 1,
            }
        }
    }

    let mut tight = 0.0f64;
    for i in 0..50 {
        let d = Draw::new(55, i);
        let p = random_matrix(RandomKind::Psd, d.range(0, 1, 8), d.raw(1)).unwrap();
        let h = HermitianMatrix::symmetrize(p.clone());
        let (r1, r2) = block_modulus_check(&h, &p, &h, 1.0).unwrap();
        tight = tight.max(r1.residual_min_eig.abs()).max(r2.residual_min_eig.abs());
    }
    outcome(
        fails == [0, 0, 0] && tight <= 1e-10,
        format!(
            "failures block/im/modulus {fails:?} over 500 each, min residual {worst:.3e}, tight-case |residual| {tight:.1e}"
        ),
    )
}

fn consequences() -> Outcome {
    let fs = functions();
    let mut fails = [0usize; 5];
    let tally = |slot: &mut usize, out: Result<ConsequenceCheck, sectorial_core::Error>| {
        *slot += usize::from(!out.map(|c| c.holds).unwrap_or(false));
    };
    for i in 0..500 {
        let d = Draw::new(6, i);
        let n = d.range(0, 1, 12);
        let f = &fs[d.range(1, 0, fs.len() - 1)];
        let g = |j| random_matrix(RandomKind::Ginibre, n, d.raw(j)).unwrap();
        let psd = |j| HermitianMatrix::symmetrize(random_matrix(RandomKind::Psd, n, d.raw(j)).unwrap());
        let alpha = d.uniform(2, 0.01, 1.48);
        let sect = random_matrix(RandomKind::Sectorial(alpha), n, d.raw(3)).unwrap();

        tally(&mut fails[0], thompson_consequence(&g(10), &g(11)));
        tally(&mut fails[1], bourin_uchiyama_consequence(f, &psd(12), &psd(13)));
        tally(&mut fails[2], fan_hoffman_check(&g(14)));
        let b = psd(15);
        tally(&mut fails[3], weyl_norm_monotone(f, &b.add(&psd(16)), &b));
        tally(&mut fails[4], re_modulus_dominance(f, &sect));
    }
    outcome(
        fails.iter().all(|&x| x == 0),
        format!("failures thompson/bourin_uchiyama/fan_hoffman/weyl/re_modulus {fails:?} over 500 each"),
    )
}

fn angle_cross_validation() -> Outcome {
    let (mut spread, mut round_trip) = (0.0f64, 0.0f64);
    for i in 0..300 {
        let d = Draw::new(7, i);
        let n = d.range(0, 2, 12);
        let alpha = d.uniform(1, 0.01, 1.48);
        let a = random_matrix(RandomKind::Sectorial(alpha), n, d.raw(2)).unwrap();
        let angles: Vec<f64> = [AngleMethod::Whitened, AngleMethod::Bisection, AngleMethod::FovSampling]
            .iter()
            .map(|&m| sector_angle(&a, m).unwrap().angle().unwrap().alpha())
            .collect();
        let hi = angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = angles.iter().cloned().fold(f64::INFINITY, f64::min);
        spread = spread.max(hi - lo);
        round_trip = round_trip.max((angles[0] - alpha).abs());
    }
    outcome(
        spread <= 1e-6 && round_trip <= 1e-8,
        format!("max method spread {spread:.2e} rad, max generator round-trip error {round_trip:.2e} rad"),
    )
}

fn zero_angle_reduction() -> Outcome {
    let fs: Vec<ConcaveFunction> = functions().into_iter().filter(|f| f.at_zero() == 0.0).collect();
    let zero = SectorAngle::zero();
    let (mut checks, mut worst) = (0, 0.0f64);
    for i in 0..100 {
        let d = Draw::new(8, i);
        let n = d.range(0, 2, 12);
        let a = random_matrix(RandomKind::Psd, n, d.raw(1)).unwrap();
        let inst = BoundInstance::new(PartitionedMatrix::new(a, d.range(2, 1, n - 1)).unwrap()).unwrap();
        for f in &fs {
            for norm in NormFamily::all_ky_fan(n) {
                let lee = inst.rhs(zero, f, norm, BoundKind::Lee).unwrap();
                for j in 0..8 {
                    let s = d.log_uniform(10 + j, 1e-3, 1e3);
                    let main = inst.rhs(zero, f, norm, BoundKind::Main(s)).unwrap();
                    checks += 1;
                    worst = worst.max((main - lee).abs() / lee.max(1.0));
                }
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("{checks} comparisons over {} functions, max relative gap {worst:.2e}", fs.len()),
    )
}

fn sensitivity() -> Outcome {
    let mut cfg = SweepConfig::with_defaults(300, MASTER_SEED ^ 0x9);
    cfg.generators = vec!["sectorial".into(), "normal_sectorial".into(), "psd".into()];
    let report = hunt_sensitivity(&cfg).unwrap();
    let shrink = &report.mutations[0];
    let outside = &report.mutations[2];
    let detail = report
        .mutations
        .iter()
        .map(|m| format!("{} {}/{}", m.name, m.flagged, m.applicable))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        report.passed && shrink.rate >= 0.99 && outside.rate == 1.0,
        format!("{detail} ({} instance errors)", report.instance_errors),
    )
}

fn determinism() -> Outcome {
    let mut cfg = SweepConfig::with_defaults(CAMPAIGN_TRIALS, MASTER_SEED);
    cfg.parallelism = 1;
    let serial = run_sweep(&cfg).unwrap().to_jsonl();
    cfg.parallelism = 0;
    let first = run_sweep(&cfg).unwrap().to_jsonl();
    let second = run_sweep(&cfg).unwrap().to_jsonl();
    outcome(
        serial == first && first == second,
        format!("{CAMPAIGN_TRIALS}-trial sweep, {} bytes, 1 worker vs all cores vs rerun", first.len()),
    )
}

fn main() -> ExitCode {
    let instances = campaign_instances();
    let criteria: Vec<Criterion> = vec![
        ("main and m2 bounds on the 1000-trial campaign", Box::new(main_campaign)),
        ("main(s) below zpt for s in [1, 2]", Box::new(|| dominance(&instances))),
        ("mao equals m2(1) to 1 ulp", Box::new(|| mao_identity(&instances))),
        ("m2(1) at a quarter-turn sector matches the closed form", Box::new(quarter_angle)),
        ("witness inequalities and the tight block case", Box::new(witness_suite)),
        ("majorization consequences", Box::new(consequences)),
        ("sector-angle methods agree and generators round-trip", Box::new(angle_cross_validation)),
        ("zero angle reduces main(s) to lee", Box::new(zero_angle_reduction)),
        ("harness flags injected violations", Box::new(sensitivity)),
        ("sweeps are byte-identical across reruns and worker counts", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.passed);
        println!("{} {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
