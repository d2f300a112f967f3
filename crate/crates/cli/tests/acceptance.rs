//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when the set of failing criteria differs from `KNOWN_RED`.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bistrip::constants::{
    alpha_imperfect, alpha_perfect_at, alpha_star, gamma_plus, junction_matrix, AsymptoticConstants,
};
use bistrip::factorize::{
    analyticity_half_width, infinity_coefficient, verify_asymptotics, Factorization,
    FactorizationSettings,
};
use bistrip::field::{
    far_field_check, near_tip_check, edge_limit_for_config, edge_limit_oracle, FieldSettings,
};
use bistrip::kernel::{
    dimensionalize, eval_xi_star, log_xi_star_star, nondimensionalize, DimensionlessParams,
    StripConfig,
};
use bistrip_cli::config::{Axis, Mode, RunConfig, SweepSpec};
use bistrip_cli::sweep::run_sweep;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria expected to fail; see the decisions ledger for the analysis.
const KNOWN_RED: &[u32] = &[4];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> StripConfig {
    let mu1 = 10f64.powf(rng.gen_range(-1.0..1.0));
    let mu2 = 10f64.powf(rng.gen_range(-1.0..1.0));
    let h1 = 10f64.powf(rng.gen_range(-0.7..0.3));
    let h2 = 10f64.powf(rng.gen_range(-0.7..0.3));
    let kappa_star = 10f64.powf(rng.gen_range(-2.0..2.0));
    StripConfig::new(mu1, mu2, h1, h2, kappa_star * (h1 + h2) / (mu1 + mu2)).unwrap()
}

fn skewed() -> StripConfig {
    StripConfig::new(2.0, 0.7, 0.3, 1.1, 0.4).unwrap()
}

fn resin_cell(kappa: f64) -> StripConfig {
    StripConfig::new(26e9, 82e9, 0.1, 0.05, kappa).unwrap()
}

fn three_sig(x: f64) -> String {
    format!("{x:.2e}")
}

fn criterion_1() -> Outcome {
    let resin_mu = 2.5e9;
    let resin_h = 0.01;
    let cases = [
        (resin_h / resin_mu, 2.88),
        (resin_h / (1000.0 * resin_mu), 2.88e-3),
        (resin_h / (resin_mu / 10.0), 28.8),
    ];
    let mut ok = true;
    let mut got = Vec::new();
    for (kappa, target) in cases {
        let ks = nondimensionalize(&resin_cell(kappa)).unwrap().kappa_star;
        ok &= three_sig(ks) == three_sig(target);
        got.push(three_sig(ks));
    }
    Outcome::new(ok, format!("kappa* = {}", got.join(", ")))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let jobs: Vec<(StripConfig, Vec<f64>)> = (0..20)
        .map(|_| {
            let cfg = random_config(&mut rng);
            let h = cfg.h_total();
            let xs = (0..200)
                .map(|_| {
                    let t = 10f64.powf(rng.gen_range(-3.0..3.0)) / h;
                    if rng.gen_bool(0.5) {
                        t
                    } else {
                        -t
                    }
                })
                .collect();
            (cfg, xs)
        })
        .collect();
    let worst: Result<f64, bistrip::Error> = jobs
        .par_iter()
        .map(|(cfg, xs)| {
            let half = analyticity_half_width(cfg)?;
            let s = FactorizationSettings::for_config(cfg).with_beta(0.5 * half);
            let f = Factorization::new(cfg, s)?;
            let mut worst = 0.0f64;
            for &t in xs {
                let xi = Complex64::new(t, 0.0);
                let p = f.factor_plus(xi)?;
                let target = eval_xi_star(xi, cfg)?.re;
                worst = worst.max(((p * p.conj()).re - target).abs() / target);
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)));
    let elapsed = start.elapsed();
    match worst {
        Ok(w) => Outcome::new(
            w < 1e-6 && elapsed < Duration::from_secs(30),
            format!("max rel identity error {w:.2e} over 4000 points (< 1e-6), {elapsed:.1?} (< 30 s)"),
        ),
        Err(e) => Outcome::new(false, format!("error: {e}")),
    }
}

fn asymptote_configs() -> Vec<StripConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut v = vec![
        StripConfig::symmetric(1.0),
        StripConfig::symmetric(0.5),
        skewed(),
        resin_cell(0.01 / 2.5e9),
    ];
    v.extend((0..4).map(|_| random_config(&mut rng)));
    v
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for cfg in asymptote_configs() {
        match verify_asymptotics(&cfg, FactorizationSettings::for_config(&cfg)) {
            Ok(r) => worst = worst.max(r.zero_rel_dev),
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        }
    }
    Outcome::new(
        worst < 1e-4,
        format!("max rel error of the alpha/(pi i) coefficient {worst:.2e} (< 1e-4), 8 configs"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_negated = 0.0f64;
    for cfg in [StripConfig::symmetric(1.0), skewed(), resin_cell(0.01 / 2.5e9)] {
        let f = match Factorization::with_defaults(&cfg) {
            Ok(f) => f,
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        };
        let target = Complex64::new(0.0, -cfg.params().inf_coeff / PI);
        match infinity_coefficient(&f, 1e3) {
            Ok(c) => {
                worst = worst.max((c - target).norm() / target.norm());
                worst_negated = worst_negated.max((c + target).norm() / target.norm());
            }
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        }
    }
    Outcome::new(
        worst < 0.05,
        format!(
            "max rel deviation from (mu1+mu2)/(pi i mu1 mu2 kappa) at |xi|H = 1e3: {worst:.3} (< 0.05); \
             from its negative: {worst_negated:.2e}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfgs: Vec<StripConfig> = (0..100).map(|_| random_config(&mut rng)).collect();
    let res: Result<Vec<[f64; 5]>, bistrip::Error> = cfgs
        .par_iter()
        .map(|cfg| {
            let s = FactorizationSettings::for_config(cfg);
            let k = AsymptoticConstants::compute(cfg, &s)?;
            let (p, q) = (cfg.mu1 * cfg.h1, cfg.mu2 * cfg.h2);
            let balance = (p * k.c.0 + q * k.c.1).abs();
            let dp = nondimensionalize(cfg)?;
            let kref = alpha_star(&dp)? / PI + 1.0 / dp.lambda_star;
            let d1 = -k.c.0 * dp.h_total * kref;
            let d2 = -k.c.1 * dp.h_total * kref;
            let d_dev = ((k.d.0 - d1) / d1).abs().max(((k.d.1 - d2) / d2).abs());
            let a0_dev = (k.a0 / cfg.params().lambda - 1.0).abs();
            let gm_dev = (k.gamma_minus / (PI * (1.0 / cfg.h1).min(1.0 / cfg.h2)) - 1.0).abs();
            let m = junction_matrix(cfg, &k);
            let det_dev = (m.det / m.det_closed_form - 1.0).abs();
            Ok([balance, d_dev, a0_dev, gm_dev, det_dev])
        })
        .collect();
    match res {
        Ok(rows) => {
            let max = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);
            let (bal, d, a0, gm, det) = (max(0), max(1), max(2), max(3), max(4));
            Outcome::new(
                bal <= 2.0 * f64::EPSILON && d < 1e-10 && a0 < 1e-10 && gm < 1e-10 && det < 1e-10,
                format!(
                    "100 configs: |mu1H1C1+mu2H2C2| {bal:.1e} (<= 2 eps), D_j {d:.1e}, a0 {a0:.1e}, \
                     gamma- {gm:.1e}, det(M) {det:.1e} (all < 1e-10)"
                ),
            )
        }
        Err(e) => Outcome::new(false, format!("error: {e}")),
    }
}

fn criterion_6() -> Outcome {
    let perfect = StripConfig::symmetric(0.0);
    let g0 = match gamma_plus(&perfect) {
        Ok(g) => g.value,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let dev0 = (g0 - PI / (2.0 * perfect.h1)).abs();
    let mut worst = 0.0f64;
    for (m, h) in [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.6)] {
        let dp = DimensionlessParams::new(m, h, 1e4, 1.0).unwrap();
        let cfg = dimensionalize(&dp, 1.0, 1.0).unwrap();
        match gamma_plus(&cfg) {
            Ok(g) => worst = worst.max((g.value / cfg.params().lambda - 1.0).abs()),
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        }
    }
    Outcome::new(
        dev0 < 1e-10 && worst < 0.02,
        format!("kappa=0: |gamma+ - pi/(2H)| = {dev0:.1e} (< 1e-10); kappa*=1e4: max |gamma+/lambda - 1| = {worst:.2e} (< 0.02)"),
    )
}

fn criterion_7() -> Outcome {
    let ap = match alpha_perfect_at(0.0, 0.0) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let ap_dev = (ap + LN_2 / PI).abs();
    let dp = DimensionlessParams::new(0.0, 0.0, 8.0, 1.0).unwrap();
    let ratio = |t: f64| log_xi_star_star(t, &dp) / (t * t);
    // Even in t, so Richardson on t² removes the leading correction.
    let limit = (4.0 * ratio(1e-3) - ratio(2e-3)) / 3.0;
    let lim_dev = (limit - 1.0 / 12.0).abs();
    Outcome::new(
        ap_dev < 1e-8 && lim_dev < 1e-6,
        format!("|alpha_P(0,0) + ln2/pi| = {ap_dev:.1e} (< 1e-8); |lim ln Xi**/t^2 - 1/12| = {lim_dev:.1e} (< 1e-6)"),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let axis: Vec<f64> = (0..5).map(|i| -0.4 + 0.2 * i as f64).collect();
    let mut worst = 0.0f64;
    for &h in &axis {
        for &m in &axis {
            let dp = DimensionlessParams::new(m, h, 1e-6, 1.0).unwrap();
            match (alpha_imperfect(&dp), alpha_perfect_at(m, h)) {
                (Ok(i), Ok(p)) => worst = worst.max((i / p - 1.0).abs()),
                (Err(e), _) | (_, Err(e)) => return Outcome::new(false, format!("error: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst < 0.05 && elapsed < Duration::from_secs(120),
        format!("kappa*=1e-6 on [-0.4,0.4]^2: max |alpha_I/alpha_P - 1| = {worst:.3} (< 0.05), {elapsed:.1?} (< 2 min)"),
    )
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for cfg in [StripConfig::symmetric(1.0), skewed()] {
        let start = Instant::now();
        let s = FactorizationSettings::for_config(&cfg);
        let run = || -> bistrip::Result<(f64, f64, f64, f64, f64)> {
            let f = Factorization::new(&cfg, s)?;
            let k = AsymptoticConstants::compute(&cfg, &s)?;
            let fs = FieldSettings::default();
            let far = far_field_check(&f, &fs, k.c.0, k.d.0)?;
            let tip = near_tip_check(&f, &fs)?;
            Ok((
                far.slope_rel_dev,
                far.intercept_rel_dev,
                far.decay_rel_dev,
                tip.flux_rel_dev,
                tip.jump_rel_dev,
            ))
        };
        match run() {
            Ok((sl, ic, dr, fl, jp)) => {
                let elapsed = start.elapsed();
                ok &= sl < 1e-2
                    && ic < 2e-2
                    && dr < 5e-2
                    && fl < 2e-2
                    && jp < 2e-2
                    && elapsed < Duration::from_secs(300);
                lines.push(format!(
                    "[slope {sl:.1e}, intercept {ic:.1e}, decay {dr:.1e}, flux {fl:.1e}, jump {jp:.1e}; {elapsed:.1?}]"
                ));
            }
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        }
    }
    Outcome::new(
        ok,
        format!("rel deviations (limits 1%/2%/5%/2%/2%, < 5 min each): {}", lines.join(" ")),
    )
}

fn criterion_10() -> Outcome {
    let one = Complex64::new(1.0, 0.0);
    let synthetic = match edge_limit_oracle(one, |t| Ok(one / (t + Complex64::i())), 1.0) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("error: {e}")),
    };
    let syn_dev = (synthetic.limit + Complex64::i()).norm();
    let mut worst = 0.0f64;
    let mut worst_neg = 0.0f64;
    for cfg in [StripConfig::symmetric(1.0), skewed()] {
        let lam = cfg.params().lambda;
        let r = match Factorization::with_defaults(&cfg).and_then(|f| edge_limit_for_config(&f)) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("error: {e}")),
        };
        worst = worst.max((r.limit - r.expected).norm() / lam);
        worst_neg = worst_neg.max(r.negative_value.norm() / lam);
    }
    Outcome::new(
        syn_dev < 1e-3 && worst < 2e-2 && worst_neg < 1e-4,
        format!(
            "synthetic |f(0+) + i| = {syn_dev:.1e} (< 1e-3); weight function |f(0+) + i a1|/lambda = {worst:.1e} (< 2e-2); \
             |f(x<0)|/lambda = {worst_neg:.1e} (< 1e-4)"
        ),
    )
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(Mode::Sweep);
    cfg.sweep = SweepSpec {
        mu_star: Axis {
            min: -0.9,
            max: 0.9,
            count: 7,
        },
        h_star: Axis {
            min: -0.9,
            max: 0.9,
            count: 7,
        },
        kappa_star: vec![100.0, 1.0, 0.01],
        margin: 0.02,
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = run_sweep(&cfg, &a, Some(1)).and_then(|_| run_sweep(&cfg, &b, Some(4)));
    if let Err(e) = run {
        return Outcome::new(false, format!("error: {e}"));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    Outcome::new(
        x == y,
        format!("two sweeps of 147 rows (1 and 4 threads): {} bytes each, identical = {}", x.len(), x == y),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "kappa* arithmetic", criterion_1),
        (2, "factorization identity", criterion_2),
        (3, "zero-point asymptote", criterion_3),
        (4, "infinity asymptote", criterion_4),
        (5, "constants identities", criterion_5),
        (6, "gamma+ limits", criterion_6),
        (7, "perfect-interface anchor", criterion_7),
        (8, "imperfect to perfect limit", criterion_8),
        (9, "field reconstruction", criterion_9),
        (10, "edge-limit oracle", criterion_10),
        (11, "determinism", criterion_11),
    ];
    let mut red = Vec::new();
    for (n, name, f) in criteria {
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n:>2} ({name}): {}", o.detail);
        if !o.passed {
            red.push(n);
        }
    }
    if red == KNOWN_RED {
        println!("acceptance: {} of 11 pass; known red: {:?}", 11 - red.len(), KNOWN_RED);
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {red:?}, expected {KNOWN_RED:?}");
        ExitCode::FAILURE
    }
}
