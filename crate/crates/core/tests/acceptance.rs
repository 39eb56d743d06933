//! Acceptance suite. Runs every criterion in sequence (timing included, so
//! nothing else competes for the CPU), prints one PASS/FAIL line for each
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use rand::Rng;
use sparsenb::bernoulli::fit_sparse_bernoulli;
use sparsenb::experiments::{planted_dataset, run_gap_experiment, run_pipeline, run_scaling, GapCurve, Method, PlantedConfig};
use sparsenb::multinomial::{fit_multinomial_mle, h_vector, smnb_bound, RelaxationSolver, DEFAULT_TOL};
use sparsenb::primalization::{lp_postprocess, sk_certificate};
use sparsenb::{summarize, topk_sum, ClassSummary};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bernoulli_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(101);
    let mut cases = 0;
    for inst in 0..50 {
        let m = rng.random_range(1..=8);
        let n = rng.random_range(2..=20);
        let data = DenseBinary::random(&mut rng, m, n);
        let s = summarize(&data.dataset()).map_err(|e| e.to_string())?;
        // half the instances smoothed with gamma = 1, checked through pseudo rows
        let (gamma, reference) = if inst % 2 == 0 { (0.0, data.with_pseudo_rows(0)) } else { (1.0, data.with_pseudo_rows(1)) };
        for k in 0..=m {
            let fit = fit_sparse_bernoulli(&s, k, gamma).map_err(|e| e.to_string())?;
            let best = reference.sparse_optimum(k);
            check(rel_close(fit.objective, best, 1e-9), || {
                format!("instance {inst} k={k}: objective {} vs oracle {best}", fit.objective)
            })?;
            let achieved = reference.log_likelihood(fit.model.theta_plus(), fit.model.theta_minus());
            check(rel_close(achieved, best, 1e-9), || {
                format!("instance {inst} k={k}: theta attains {achieved}, oracle {best}")
            })?;
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("50 instances, {cases} (instance, k) pairs, {secs:.2} s"))
}

fn multinomial_sandwich() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(102);
    let mut pairs = 0;
    for inst in 0..30 {
        let m = rng.random_range(8..=10);
        let raw = random_count_summary(&mut rng, m, 12);
        let gamma = 0.5;
        let s = raw.smoothed(gamma);
        let solver = RelaxationSolver::new(&raw, gamma).map_err(|e| e.to_string())?;
        let phi: Vec<f64> = (0..=m).map(|k| multinomial_phi(&s, k)).collect();
        for k in 4..=m - 4 {
            let psi_k = solver.psi(k, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let psi_km4 = solver.psi(k - 4, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let ok = psi_km4 - 1e-8 <= phi[k] && phi[k] <= psi_k + 1e-8 && psi_k + 1e-8 <= phi[k + 4] + 2e-8;
            check(ok, || {
                format!(
                    "instance {inst} k={k}: psi(k-4)={psi_km4} phi(k)={} psi(k)={psi_k} phi(k+4)={}",
                    phi[k],
                    phi[k + 4]
                )
            })?;
            pairs += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.2} s"))?;
    Ok(format!("30 instances, {pairs} (instance, k) pairs, {secs:.2} s"))
}

fn full_cardinality_exactness() -> Outcome {
    let mut rng = rng(103);
    let mut worst: f64 = 0.0;
    for inst in 0..20 {
        let m = rng.random_range(1..=200);
        let raw = random_count_summary(&mut rng, m, 50);
        let gamma = rng.random_range(0.1..2.0);
        let psi = smnb_bound(&raw, m, gamma, DEFAULT_TOL).map_err(|e| e.to_string())?.psi;
        let s = raw.smoothed(gamma);
        // direct classical log-likelihood: sum f ln(f / F) per class
        let direct = |f: &[f64]| {
            let total: f64 = f.iter().sum();
            f.iter().map(|&v| v * (v / total).ln()).sum::<f64>()
        };
        let mle = direct(s.f_plus()) + direct(s.f_minus());
        let via_model = fit_multinomial_mle(&raw, gamma)
            .and_then(|model| model.log_likelihood(&s))
            .map_err(|e| e.to_string())?;
        let rel = (psi - mle).abs() / mle.abs().max(1.0);
        worst = worst.max(rel);
        check(rel <= 1e-9 && rel_close(via_model, mle, 1e-12), || {
            format!("instance {inst}: psi(m)={psi} mle={mle} model={via_model}")
        })?;
    }
    Ok(format!("20 instances, worst relative error {worst:.1e}"))
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

fn gap_shape(curve: &GapCurve) -> Result<(f64, f64, f64), String> {
    let m = curve.m as f64;
    for r in &curve.rows {
        let tol = 1e-9 * r.psi_k.abs().max(1.0);
        check(r.primal_value <= r.psi_k + tol, || format!("m={} k={}: primal above psi", curve.m, r.k))?;
        if let Some(p4) = r.psi_km4 {
            check(p4 <= r.primal_value + 1e-8 * r.psi_k.abs().max(1.0), || {
                format!("m={} k={}: psi(k-4)={p4} > primal={}", curve.m, r.k, r.primal_value)
            })?;
        }
    }
    let width = |keep: &dyn Fn(usize) -> bool| {
        mean(curve.rows.iter().filter(|r| keep(r.k)).filter_map(|r| r.delta.map(|d| d / r.psi_k.abs())))
    };
    let high = width(&|k| k as f64 >= 0.5 * m);
    let low = width(&|k| k as f64 <= 0.25 * m);
    let closed = curve
        .rows
        .iter()
        .filter(|r| r.a_posteriori_gap <= 1e-6 * r.psi_k.abs())
        .count() as f64
        / curve.rows.len() as f64;
    Ok((high, low, closed))
}

fn gap_experiment_shape() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for m in [30, 3000] {
        let curve = run_gap_experiment(m, 7, 0.0).map_err(|e| e.to_string())?;
        let (high, low, closed) = gap_shape(&curve)?;
        check(high < low, || format!("m={m}: mean width k>=m/2 {high:.3e} not below k<=m/4 {low:.3e}"))?;
        if m == 3000 {
            check(closed >= 0.7, || format!("m=3000: only {:.1}% of rows have a closed gap", 100.0 * closed))?;
        }
        parts.push(format!("m={m}: width {high:.2e} < {low:.2e}, closed {:.1}%", 100.0 * closed));
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{}; {secs:.1} s", parts.join("; ")))
}

fn lp_postprocessing() -> Outcome {
    let mut rng = rng(105);
    let mut max_fractional = 0;
    let mut bracketed = 0;
    for inst in 0..20u64 {
        let m = if inst < 10 { rng.random_range(4..=10) } else { rng.random_range(11..=50) };
        let raw = random_count_summary(&mut rng, m, 15);
        let gamma = 0.5;
        let k = rng.random_range(0..=m);
        let relax = smnb_bound(&raw, k, gamma, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let out = lp_postprocess(&raw, &relax, inst).map_err(|e| format!("instance {inst}: {e}"))?;
        max_fractional = max_fractional.max(out.lp.fractional.len());
        check(out.lp.fractional.len() <= 4, || {
            format!("instance {inst}: {} fractional coordinates", out.lp.fractional.len())
        })?;
        if m <= 10 {
            let s = raw.smoothed(gamma);
            let (lo, hi) = (multinomial_phi(&s, k), multinomial_phi(&s, k + 4));
            check(lo - 1e-8 <= out.value && out.value <= hi + 1e-8, || {
                format!("instance {inst} m={m} k={k}: refined {} outside [{lo}, {hi}]", out.value)
            })?;
            bracketed += 1;
        }
    }
    Ok(format!("20 instances, max |J| = {max_fractional}, {bracketed} bracketed by the exhaustive optimum"))
}

fn scaling() -> Outcome {
    let report = run_scaling(10_000, &[1, 2, 4, 8], 0.05, 1).map_err(|e| e.to_string())?;
    let detail: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("m={} {:.2} ms", p.m, 1e3 * p.seconds))
        .collect();
    let ratios: Vec<String> = report
        .points
        .windows(2)
        .map(|w| format!("{:.2}", w[1].seconds / w[0].seconds))
        .collect();
    check(report.ratio_bound_ok, || {
        format!("doubling ratios {} exceed 2.5 ({})", ratios.join(", "), detail.join(", "))
    })?;
    Ok(format!("{}; ratios {}", detail.join(", "), ratios.join(", ")))
}

fn planted_recovery() -> Outcome {
    let data = planted_dataset(&PlantedConfig::default()).map_err(|e| e.to_string())?;
    let report = run_pipeline(&data.train, &data.test, Method::Smnb, 10, 1.0).map_err(|e| e.to_string())?;
    let recovered = report.selected.iter().filter(|j| data.informative.contains(j)).count();
    check(recovered >= 8 && report.stage2_accuracy >= 0.9, || {
        format!("recovered {recovered}/10, accuracy {:.3}", report.stage2_accuracy)
    })?;
    Ok(format!("recovered {recovered}/10 planted features, held-out accuracy {:.3}", report.stage2_accuracy))
}

fn random_summary(rng: &mut impl Rng, m: usize) -> ClassSummary {
    let fp = (0..m).map(|_| rng.random_range(0.01..20.0)).collect();
    let fm = (0..m).map(|_| rng.random_range(0.01..20.0)).collect();
    ClassSummary::new(fp, fm, rng.random_range(1..50), rng.random_range(1..50)).unwrap()
}

fn property_suites() -> Outcome {
    let mut rng = rng(108);
    for i in 0..1000 {
        let m = rng.random_range(1..40);
        let s = random_summary(&mut rng, m);
        let alpha = rng.random_range(1e-6..1.0 - 1e-6);
        let h = h_vector(&s, alpha).map_err(|e| e.to_string())?;
        check(h.iter().all(|&v| v >= -1e-9), || format!("h pair {i}: negative entry at alpha={alpha}"))?;
    }
    for i in 0..1000 {
        let m = rng.random_range(1..40);
        let s = random_summary(&mut rng, m);
        let k = rng.random_range(0..=m);
        let (a, b) = (rng.random_range(1e-6..1.0 - 1e-6), rng.random_range(1e-6..1.0 - 1e-6));
        let f = |x: f64| topk_sum(&h_vector(&s, x).unwrap(), k).unwrap();
        let (mid, avg) = (f(0.5 * (a + b)), 0.5 * (f(a) + f(b)));
        check(mid <= avg + 1e-9 * avg.abs().max(1.0), || format!("convexity triple {i}: {mid} > {avg}"))?;
    }
    for i in 0..50 {
        let m = rng.random_range(2..60);
        let s = random_summary(&mut rng, m);
        let solver = RelaxationSolver::new(&s, 0.0).map_err(|e| e.to_string())?;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=m {
            let relax = solver.relax(k, DEFAULT_TOL).map_err(|e| e.to_string())?;
            check(relax.psi >= prev - 1e-9 * relax.psi.abs().max(1.0), || format!("instance {i}: psi not monotone at k={k}"))?;
            prev = relax.psi;
            let model = &relax.primal_model;
            for theta in [model.theta_plus(), model.theta_minus()] {
                let total: f64 = theta.iter().sum();
                check((total - 1.0).abs() <= 1e-12, || format!("instance {i} k={k}: theta sums to {total}"))?;
            }
            let differing = model.theta_plus().iter().zip(model.theta_minus()).filter(|(p, q)| p != q).count();
            check(differing <= k, || format!("instance {i} k={k}: {differing} differing coordinates"))?;
        }
    }
    for i in 0..1000 {
        let m = rng.random_range(1..50);
        let c: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..100.0)).collect();
        let k = rng.random_range(0..=m);
        let cert = sk_certificate(&c, k).map_err(|e| e.to_string())?;
        let sk = topk_sum(&c, k).unwrap();
        let (dual, primal) = (cert.dual_value(&c, k), cert.primal_value(&c));
        check(rel_close(dual, sk, 1e-12) && rel_close(primal, sk, 1e-12), || {
            format!("certificate {i}: dual {dual} primal {primal} s_k {sk}")
        })?;
    }
    Ok("h >= 0 (1000), midpoint convexity (1000), monotone psi, simplex, support size, s_k certificates (1000)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 bernoulli exactness", bernoulli_exactness),
        ("2 multinomial sandwich", multinomial_sandwich),
        ("3 k = m exactness", full_cardinality_exactness),
        ("4 gap experiment shape", gap_experiment_shape),
        ("5 LP post-processing", lp_postprocessing),
        ("6 runtime scaling", scaling),
        ("7 planted recovery", planted_recovery),
        ("8 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
