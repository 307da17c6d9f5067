//! Machine-checkable verification suite. Each check pins one facet of the
//! construction: exact identities, Monte-Carlo unbiasedness, the moment
//! bound, the n^{-1/2} error scaling, the trace-preserving correction, the
//! rank lower bound, entropy/fidelity corollaries, correlation destruction,
//! and determinism. `quick` runs reduced-scale variants of every check;
//! `full` runs the stated scales.

use std::time::Instant;

use serde_json::json;

use kslice_core::compress::{
    compress, sample_env_vector, slice_kraus_operator, CompressionPlan, Sampler,
};
use kslice_core::linalg::{hermitian_eig, operator_norm};
use kslice_core::metrics::{
    approximation_report, max_output_infnorm, one_to_p_distance, ordering_epsilon,
    ordering_margin, OptBudget,
};
use kslice_core::rng::{haar_unit_vectors, random_density_matrix};
use kslice_core::zoo::{
    cq_channel, qc_channel, random_channel, randomizing_channel, tight_frame, werner_channel,
};
use kslice_core::{kraus_from_choi, CMatrix, CVector, Channel, SplitMix64};

use crate::csvio::write_csv;
use crate::jsonio::ScenarioConfigJson;
use crate::svg::render_chart;
use crate::sweep::{csv_without_ms, rows_to_csv, run_sweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn name(&self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "quick" => Some(Level::Quick),
            "full" => Some(Level::Full),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: &'static str,
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub detail: String,
    pub ms: u128,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    /// Deterministic CSV: no timing column, shortest-round-trip floats.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.id.to_string(),
                    c.name.clone(),
                    if c.pass { "pass" } else { "fail" }.to_string(),
                    format!("{}", c.value),
                    c.detail.clone(),
                ]
            })
            .collect();
        write_csv(&["id", "name", "status", "value", "detail"], &rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "level": self.level.name(),
            "total": self.checks.len(),
            "passed": self.passed(),
            "failed": self.failed(),
            "checks": self.checks.iter().map(|c| json!({
                "id": c.id,
                "name": c.name,
                "pass": c.pass,
                "value": c.value,
                "detail": c.detail,
                "ms": c.ms,
            })).collect::<Vec<_>>(),
        })
    }
}

fn finish(id: &'static str, name: &str, pass: bool, value: f64, detail: String, t0: Instant) -> Check {
    Check {
        id,
        name: name.to_string(),
        pass,
        value,
        detail,
        ms: t0.elapsed().as_millis(),
    }
}

fn tp_defect_of(ch: &Channel) -> f64 {
    let eig = hermitian_eig(&ch.kraus_sum()).expect("witness is Hermitian");
    eig.values.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max)
}

/// Trace-preservation check over named channels; fails when any defect
/// exceeds 1e-10. Exposed so fault-injection tests can feed it broken input.
pub fn check_tp_exactness(channels: &[(String, Channel)]) -> Check {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_name = String::new();
    for (name, ch) in channels {
        let defect = tp_defect_of(ch);
        if defect > worst {
            worst = defect;
            worst_name = name.clone();
        }
    }
    finish(
        "AC2",
        "zoo channels exactly trace preserving",
        worst <= 1e-10,
        worst,
        format!("worst defect at {worst_name}; threshold 1e-10"),
        t0,
    )
}

// ---------------------------------------------------------------- AC1

fn roundtrip_channels(level: Level) -> Vec<Channel> {
    match level {
        Level::Full => vec![
            random_channel(2, 2, 4, 1).unwrap(),
            random_channel(3, 3, 6, 2).unwrap(),
            random_channel(4, 4, 8, 3).unwrap(),
            random_channel(8, 8, 16, 4).unwrap(),
            random_channel(3, 2, 4, 5).unwrap(),
            random_channel(2, 6, 3, 6).unwrap(),
            randomizing_channel(4).unwrap(),
            werner_channel(3, 0.7).unwrap(),
            qc_channel(4, 8).unwrap(),
            cq_channel(8, 4).unwrap(),
        ],
        Level::Quick => vec![
            random_channel(2, 2, 4, 1).unwrap(),
            random_channel(3, 3, 6, 2).unwrap(),
            randomizing_channel(3).unwrap(),
            qc_channel(2, 4).unwrap(),
        ],
    }
}

fn ac1(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let channels = roundtrip_channels(level);
    let per = match level {
        Level::Full => 10,
        Level::Quick => 5,
    };
    let mut worst_choi = 0.0f64;
    let mut worst_stine = 0.0f64;
    let mut states = 0usize;
    for (i, ch) in channels.iter().enumerate() {
        let rebuilt = kraus_from_choi(&ch.to_choi(), 1e-10).unwrap();
        let v = ch.stinespring();
        let mut rng = SplitMix64::new(1000 + i as u64);
        for _ in 0..per {
            let rho = random_density_matrix(ch.dim_in(), &mut rng);
            let direct = ch.apply(&rho).unwrap();
            worst_choi = worst_choi.max(rebuilt.apply(&rho).unwrap().max_abs_diff(&direct));
            worst_stine = worst_stine.max(v.channel_action(&rho).unwrap().max_abs_diff(&direct));
            states += 1;
        }
    }
    checks.push(finish(
        "AC1",
        "kraus-choi-kraus round trip",
        worst_choi <= 1e-9,
        worst_choi,
        format!("worst action deviation over {states} states; threshold 1e-9"),
        t0,
    ));
    checks.push(finish(
        "AC1",
        "kraus-stinespring-apply route",
        worst_stine <= 1e-9,
        worst_stine,
        format!("worst action deviation over {states} states; threshold 1e-9"),
        t0,
    ));
}

// ---------------------------------------------------------------- AC2

fn ac2(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    // Choi of the fully randomizing channel is 1/d².
    let mut worst = 0.0f64;
    for d in [2usize, 3, 4] {
        let tau = randomizing_channel(d).unwrap().to_choi();
        let flat = CMatrix::identity(d * d).scale_re(1.0 / (d * d) as f64);
        worst = worst.max(tau.matrix().max_abs_diff(&flat));
    }
    checks.push(finish(
        "AC2",
        "randomizing choi is maximally mixed",
        worst <= 1e-12,
        worst,
        "d in {2,3,4}; threshold 1e-12".to_string(),
        t0,
    ));

    let t0 = Instant::now();
    let mut mismatches = 0usize;
    for d in [3usize, 4] {
        let cases = [
            (0.5, d * d),
            (1.0, d * (d + 1) / 2),
            (0.0, d * (d - 1) / 2),
        ];
        for (lambda, expected) in cases {
            let rank = werner_channel(d, lambda).unwrap().kraus_rank(1e-10);
            if rank != expected {
                mismatches += 1;
            }
        }
    }
    checks.push(finish(
        "AC2",
        "werner kraus ranks",
        mismatches == 0,
        mismatches as f64,
        "ranks (d^2, d(d+1)/2, d(d-1)/2) at lambda (0.5, 1, 0), d in {3,4}".to_string(),
        t0,
    ));

    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for (n, d) in [(4usize, 4usize), (16, 4), (37, 5)] {
        let frame = tight_frame(n, d).unwrap();
        worst = worst.max(frame.frame_defect());
        for v in frame.vectors() {
            worst = worst.max((v.norm() - 1.0).abs());
            for j in 0..d {
                worst = worst.max((v.as_slice()[j].norm_sqr() - 1.0 / d as f64).abs());
            }
        }
    }
    checks.push(finish(
        "AC2",
        "tight frame identity and flat overlaps",
        worst <= 1e-12,
        worst,
        "(N,d) in {(4,4),(16,4),(37,5)}; threshold 1e-12".to_string(),
        t0,
    ));

    let t0 = Instant::now();
    let ch = qc_channel(16, 16).unwrap();
    let out = ch.apply(&CVector::basis(16, 0).projector()).unwrap();
    let dev = out.max_abs_diff(&CMatrix::identity(16).scale_re(1.0 / 16.0));
    checks.push(finish(
        "AC2",
        "measurement flattens the first basis state",
        dev <= 1e-12,
        dev,
        "qc(16,16) on |1><1| vs 1/16; threshold 1e-12".to_string(),
        t0,
    ));

    let zoo: Vec<(String, Channel)> = vec![
        ("randomizing:d=4".to_string(), randomizing_channel(4).unwrap()),
        ("werner:d=4,lambda=0.75".to_string(), werner_channel(4, 0.75).unwrap()),
        ("qc:a=4,b=8".to_string(), qc_channel(4, 8).unwrap()),
        ("cq:a=8,b=4".to_string(), cq_channel(8, 4).unwrap()),
        ("random:a=4,b=4,e=8,seed=5".to_string(), random_channel(4, 4, 8, 5).unwrap()),
    ];
    checks.push(check_tp_exactness(&zoo));
    let _ = level;
}

// ---------------------------------------------------------------- AC3

/// Max over matrix entries (re and im separately) of
/// |MC mean − exact| / (4·SE + 1e-12) for m Haar slices.
fn unbiasedness_stat(ch: &Channel, rho: &CMatrix, m: usize, seed: u64) -> f64 {
    let v = ch.stinespring();
    let dim = ch.dim_out();
    let mut sum = CMatrix::zeros(dim, dim);
    let mut sq_re = vec![0.0f64; dim * dim];
    let mut sq_im = vec![0.0f64; dim * dim];
    for i in 0..m {
        let mut rng = SplitMix64::substream(seed, i as u64);
        let phi = sample_env_vector(Sampler::Haar, v.dim_env(), &mut rng).unwrap();
        let k = slice_kraus_operator(&v, &phi).unwrap();
        let out = k.mul(rho).mul(&k.dagger());
        sum.add_assign(&out);
        for r in 0..dim {
            for c in 0..dim {
                let z = out.get(r, c);
                sq_re[r * dim + c] += z.re * z.re;
                sq_im[r * dim + c] += z.im * z.im;
            }
        }
    }
    let mf = m as f64;
    let expected = ch.apply_matrix(rho).unwrap();
    let mut worst = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let mean = sum.get(r, c) / mf;
            let e = expected.get(r, c);
            let se_re = ((sq_re[r * dim + c] / mf - mean.re * mean.re).max(0.0) / mf).sqrt();
            let se_im = ((sq_im[r * dim + c] / mf - mean.im * mean.im).max(0.0) / mf).sqrt();
            worst = worst.max((mean.re - e.re).abs() / (4.0 * se_re + 1e-12));
            worst = worst.max((mean.im - e.im).abs() / (4.0 * se_im + 1e-12));
        }
    }
    worst
}

fn ac3(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (m, cases): (usize, Vec<(&str, Channel)>) = match level {
        Level::Full => (
            10_000,
            vec![
                ("randomizing:d=8", randomizing_channel(8).unwrap()),
                ("werner:d=4,lambda=0.75", werner_channel(4, 0.75).unwrap()),
                ("random:a=8,b=8,e=64,seed=11", random_channel(8, 8, 64, 11).unwrap()),
            ],
        ),
        Level::Quick => (
            2_000,
            vec![
                ("randomizing:d=4", randomizing_channel(4).unwrap()),
                ("werner:d=3,lambda=0.75", werner_channel(3, 0.75).unwrap()),
            ],
        ),
    };
    let mut worst = 0.0f64;
    for (i, (_, ch)) in cases.iter().enumerate() {
        let mut rng = SplitMix64::new(3100 + i as u64);
        let rho = random_density_matrix(ch.dim_in(), &mut rng);
        worst = worst.max(unbiasedness_stat(ch, &rho, m, 3200 + i as u64));
    }
    checks.push(finish(
        "AC3",
        "slice expectation matches the channel",
        worst <= 1.0,
        worst,
        format!("max |mean-exact|/(4SE) over {} channels, {m} haar slices", cases.len()),
        t0,
    ));
}

// ---------------------------------------------------------------- AC4

fn ac4(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (m, pairs) = match level {
        Level::Full => (100_000usize, 5usize),
        Level::Quick => (5_000, 2),
    };
    let (dim_b, dim_e) = (8usize, 8usize);
    let mut worst_ratio = 0.0f64;
    for pair in 0..pairs {
        let mut rng = SplitMix64::new(4100 + pair as u64);
        let sigma = random_density_matrix(dim_b * dim_e, &mut rng);
        let y = kslice_core::rng::haar_unit_vector(dim_b, &mut rng);
        for p in 1..=4u32 {
            let est = kslice_core::compress::psi1_moment_oracle(
                &sigma,
                dim_b,
                dim_e,
                &y,
                p,
                m,
                4200 + pair as u64,
            )
            .unwrap();
            if est.bound > 0.0 {
                worst_ratio = worst_ratio.max(est.empirical_normalized / est.bound);
            }
        }
    }
    checks.push(finish(
        "AC4",
        "psi1 normalized moments below the bound",
        worst_ratio <= 1.05,
        worst_ratio,
        format!("p in 1..4, s=8, m={m}, {pairs} seeded (sigma, y); threshold 1.05"),
        t0,
    ));
}

// ---------------------------------------------------------------- AC5

fn ac5(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (ns, seeds, pool, band) = match level {
        Level::Full => (
            vec![256usize, 1024, 4096],
            vec![1u64, 2, 3, 4, 5],
            1000usize,
            (0.4f64, 0.65f64),
        ),
        Level::Quick => (vec![128, 512], vec![1, 2], 300, (0.3, 0.75)),
    };
    let ch = randomizing_channel(8).unwrap();
    let budget = OptBudget::custom(2, 25, pool, 900).unwrap();
    let mut errors = vec![vec![0.0f64; seeds.len()]; ns.len()];
    for (ni, &n) in ns.iter().enumerate() {
        for (si, &seed) in seeds.iter().enumerate() {
            let plan = CompressionPlan::new(n, Sampler::Haar, seed).unwrap();
            let result = compress(&ch, &plan).unwrap();
            errors[ni][si] = one_to_p_distance(&ch, &result.sliced, 1.0, &budget)
                .unwrap()
                .value;
        }
    }
    // Strict decrease per seed along the n ladder.
    let mut worst_step = 0.0f64;
    for si in 0..seeds.len() {
        for ni in 1..ns.len() {
            worst_step = worst_step.max(errors[ni][si] / errors[ni - 1][si]);
        }
    }
    checks.push(finish(
        "AC5",
        "estimated error strictly decreases in n",
        worst_step < 1.0,
        worst_step,
        format!("worst e(next)/e(prev) per seed, n grid {ns:?}"),
        t0,
    ));
    let t0 = Instant::now();
    for ni in 0..ns.len() - 1 {
        let mut ratio = 0.0f64;
        for si in 0..seeds.len() {
            ratio += errors[ni + 1][si] / errors[ni][si];
        }
        ratio /= seeds.len() as f64;
        checks.push(finish(
            "AC5",
            &format!("error ratio e(4n)/e(n) at n={}", ns[ni]),
            ratio >= band.0 && ratio <= band.1,
            ratio,
            format!(
                "mean over {} seeds; ideal 0.5 for n^(-1/2) scaling; band [{}, {}]",
                seeds.len(),
                band.0,
                band.1
            ),
            t0,
        ));
    }
}

// ---------------------------------------------------------------- AC6

fn ac6(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let cases: Vec<(Channel, usize, u64)> = match level {
        Level::Full => {
            let mut v: Vec<(Channel, usize, u64)> = Vec::new();
            for seed in 1..=4u64 {
                v.push((randomizing_channel(4).unwrap(), 256, seed));
            }
            for seed in 50..=52u64 {
                v.push((random_channel(4, 4, 16, seed).unwrap(), 256, seed));
            }
            for seed in 60..=62u64 {
                v.push((werner_channel(4, 0.75).unwrap(), 512, seed));
            }
            v
        }
        Level::Quick => vec![
            (randomizing_channel(4).unwrap(), 256, 1),
            (random_channel(4, 4, 16, 50).unwrap(), 256, 2),
            (werner_channel(4, 0.75).unwrap(), 512, 3),
        ],
    };
    let mut max_defect = 0.0f64;
    let mut max_corrected = 0.0f64;
    let mut worst_shift_ratio = 0.0f64;
    for (i, (ch, n, seed)) in cases.iter().enumerate() {
        let plan = CompressionPlan::new(*n, Sampler::Haar, *seed).unwrap();
        let result = compress(ch, &plan).unwrap();
        max_defect = max_defect.max(result.tp_defect);
        let corrected = result.corrected.clone().expect("defect below 1");
        max_corrected = max_corrected.max(tp_defect_of(&corrected));
        let budget = OptBudget::custom(3, 30, 200, 6000 + i as u64).unwrap();
        let shift = one_to_p_distance(&corrected, &result.sliced, 1.0, &budget)
            .unwrap()
            .value;
        worst_shift_ratio = worst_shift_ratio.max(shift / (1.5 * result.tp_defect + 1e-6));
    }
    checks.push(finish(
        "AC6",
        "fixture defects stay below one half",
        max_defect < 0.5,
        max_defect,
        format!("{} seeded compressions", cases.len()),
        t0,
    ));
    checks.push(finish(
        "AC6",
        "corrected channels exactly trace preserving",
        max_corrected <= 1e-10,
        max_corrected,
        "max corrected defect; threshold 1e-10".to_string(),
        t0,
    ));
    checks.push(finish(
        "AC6",
        "correction shift bounded by 1.5 x defect",
        worst_shift_ratio <= 1.0,
        worst_shift_ratio,
        "max shift / (1.5 tp_defect + 1e-6); threshold 1".to_string(),
        t0,
    ));
}

// ---------------------------------------------------------------- AC7

fn ac7(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (d, n) = match level {
        Level::Full => (16usize, 8usize),
        Level::Quick => (8, 4),
    };
    let eps = 0.3;
    let ch = qc_channel(d, d).unwrap();
    let env = ch.kraus().len();
    let plan = CompressionPlan::new(n, Sampler::Haar, 17).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let budget = OptBudget::custom(6, 60, 400, 19).unwrap();
    let margin = ordering_margin(&ch, &result.sliced, eps, &budget).unwrap();
    let threshold = -(1.0 - 2.0 * eps) / d as f64 + 1e-9;
    checks.push(finish(
        "AC7",
        "rank-starved measurement violates the ordering",
        margin.value < threshold,
        margin.value,
        format!("qc({d},{d}) with n={n} slices at eps={eps}; must fall below {threshold:.6}"),
        t0,
    ));
    let t0 = Instant::now();
    let plan = CompressionPlan::new(env, Sampler::BasisExhaustive, 0).unwrap();
    let exact = compress(&ch, &plan).unwrap();
    let mut worst = f64::INFINITY;
    for eps in [0.3f64, 0.01] {
        let m = ordering_margin(&ch, &exact.sliced, eps, &budget).unwrap();
        worst = worst.min(m.value);
    }
    checks.push(finish(
        "AC7",
        "exhaustive basis mode keeps the ordering",
        worst >= 0.0,
        worst,
        format!("min margin over eps in {{0.3, 0.01}} with n=|E|={env}"),
        t0,
    ));
}

// ---------------------------------------------------------------- AC8

fn ac8(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (n, pool) = match level {
        Level::Full => (4096usize, 487usize),
        Level::Quick => (1024, 137),
    };
    let ch = randomizing_channel(8).unwrap();
    let plan = CompressionPlan::new(n, Sampler::Haar, 23).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let eps_budget = OptBudget::custom(3, 30, 400, 29).unwrap();
    let eps_hat = ordering_epsilon(&ch, &result.sliced, &eps_budget).unwrap().value;
    checks.push(finish(
        "AC8",
        "measured ordering parameter below one half",
        eps_hat < 0.5,
        eps_hat,
        format!("randomizing d=8, n={n}"),
        t0,
    ));
    let t0 = Instant::now();
    let report_budget = OptBudget::custom(1, 1, pool, 31).unwrap();
    let report = approximation_report(&ch, &result.sliced, &report_budget).unwrap();
    let bound_p2 = 8.0 * eps_hat + 0.01;
    checks.push(finish(
        "AC8",
        "renyi-2 output entropy deviation",
        report.entropy_p2_dev <= bound_p2,
        report.entropy_p2_dev,
        format!("pool {}; bound 4e p/(p-1) + 0.01 = {bound_p2:.4}", report.pool_size),
        t0,
    ));
    let bound_pinf = 4.0 * eps_hat + 0.01;
    checks.push(finish(
        "AC8",
        "renyi-inf output entropy deviation",
        report.entropy_pinf_dev <= bound_pinf,
        report.entropy_pinf_dev,
        format!("pool {}; bound 4e + 0.01 = {bound_pinf:.4}", report.pool_size),
        t0,
    ));
    let bound_f = 3.0 / std::f64::consts::SQRT_2 * eps_hat.sqrt() + 0.02;
    checks.push(finish(
        "AC8",
        "output fidelity deviation",
        report.fidelity_dev <= bound_f,
        report.fidelity_dev,
        format!(
            "pool {} x {} targets; bound (3/sqrt2)sqrt(e) + 0.02 = {bound_f:.4}",
            report.pool_size, report.omega_pool_size
        ),
        t0,
    ));
}

// ---------------------------------------------------------------- AC9

fn ac9(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (d, states) = match level {
        Level::Full => (16usize, 1000usize),
        Level::Quick => (8, 300),
    };
    let lambda = 0.75;
    let n = 64 * d;
    let ch = werner_channel(d, lambda).unwrap();
    let plan = CompressionPlan::new(n, Sampler::Haar, 37).unwrap();
    let result = compress(&ch, &plan).unwrap();
    let ref_norm = max_output_infnorm(&ch, &OptBudget::custom(4, 50, 300, 43).unwrap())
        .unwrap()
        .value;
    let mut worst = 0.0f64;
    for psi in haar_unit_vectors(d, states, 41) {
        let diff = result
            .sliced
            .apply_pure(&psi)
            .unwrap()
            .sub(&ch.apply_pure(&psi).unwrap());
        worst = worst.max(operator_norm(&diff).unwrap());
    }
    let threshold = 0.5 * ref_norm;
    checks.push(finish(
        "AC9",
        "werner compression in (1->inf) norm",
        worst <= threshold,
        worst,
        format!(
            "d={d}, lambda={lambda}, n={n}: max over {states} pure states vs 0.5 x sup-norm {ref_norm:.6}"
        ),
        t0,
    ));
}

// ---------------------------------------------------------------- AC10

fn ac10(level: Level, checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let (dim_a, dim_c, n, terms) = match level {
        Level::Full => (8usize, 4usize, 2048usize, 20usize),
        Level::Quick => (4, 3, 512, 8),
    };
    let budget = OptBudget::custom(3, 30, 300, 53).unwrap();
    let report = crate::correlations::correlations_demo(
        dim_a,
        dim_c,
        "maxmixed",
        n,
        47,
        terms,
        Sampler::Haar,
        &budget,
    )
    .unwrap();
    checks.push(finish(
        "AC10",
        "separable left side within the per-term bound",
        report.left_side <= report.per_term_bound + 1e-10,
        report.left_side,
        format!(
            "dim_A={dim_a}, dim_C={dim_c}, {terms} terms, n={n}; per-term bound {:.6}",
            report.per_term_bound
        ),
        t0,
    ));
    checks.push(finish(
        "AC10",
        "dual-map spot check within measured epsilon",
        report.dual_worst_ratio <= 1.0,
        report.dual_worst_ratio,
        format!(
            "max |Nhat*-N*|(M) / (eps tr M / B) over {} POVM elements, eps_hat {:.4}",
            report.povm_pool, report.eps_hat
        ),
        t0,
    ));
}

// ---------------------------------------------------------------- AC11

fn deterministic_subreport() -> String {
    let mut checks = Vec::new();
    ac2(Level::Quick, &mut checks);
    VerifyReport { level: Level::Quick, checks }.to_csv()
}

fn ac11(checks: &mut Vec<Check>) {
    let t0 = Instant::now();
    let a = deterministic_subreport();
    let b = deterministic_subreport();
    let identical_checks = a == b;
    let cfg = ScenarioConfigJson {
        channel: "randomizing:d=3".to_string(),
        n_grid: vec![8, 32],
        samplers: vec!["haar".to_string(), "basis".to_string()],
        seeds: vec![1, 2],
        metrics: vec!["one_to_p:p=1".to_string(), "tp_defect".to_string()],
        budget: "quick".to_string(),
    };
    let rows_a = run_sweep(&cfg).unwrap();
    let rows_b = run_sweep(&cfg).unwrap();
    let csv_a = rows_to_csv(&rows_a);
    let csv_b = rows_to_csv(&rows_b);
    let identical_csv = csv_without_ms(&csv_a) == csv_without_ms(&csv_b);
    let table = crate::csvio::parse_csv(&csv_a).unwrap();
    let svg_a = render_chart(&table, "n", "value", &["sampler".to_string(), "metric".to_string()]);
    let table_b = crate::csvio::parse_csv(&csv_b).unwrap();
    let svg_b = render_chart(&table_b, "n", "value", &["sampler".to_string(), "metric".to_string()]);
    let identical_svg = match (svg_a, svg_b) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    let pass = identical_checks && identical_csv && identical_svg;
    checks.push(finish(
        "AC11",
        "repeated runs are byte-identical",
        pass,
        if pass { 1.0 } else { 0.0 },
        format!(
            "check CSV identical: {identical_checks}; sweep CSV (minus ms) identical: {identical_csv}; SVG identical: {identical_svg}"
        ),
        t0,
    ));
}

/// Run every check at the requested level. `quick` targets a couple of
/// minutes, `full` the stated acceptance scales.
pub fn verify_suite(level: Level) -> VerifyReport {
    let mut checks = Vec::new();
    ac1(level, &mut checks);
    ac2(level, &mut checks);
    ac3(level, &mut checks);
    ac4(level, &mut checks);
    ac5(level, &mut checks);
    ac6(level, &mut checks);
    ac7(level, &mut checks);
    ac8(level, &mut checks);
    ac9(level, &mut checks);
    ac10(level, &mut checks);
    ac11(&mut checks);
    VerifyReport { level, checks }
}
