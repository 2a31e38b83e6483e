//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the PASS/FAIL lines are always shown.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{oracle_eigenvalues, oracle_trace_norm, random_hermitian, rng};
use qutrit_dsd::channel::{apply_kraus_pair, kraus_set, ChannelParams, ChannelVariant};
use qutrit_dsd::dynamics::{
    detect_events, linspace, p_of_t, scan, sweep_surface, zero_crossings, EventKind, EventWindow,
    ScanConfig, Witness, AS_WRITTEN_T_MAX,
};
use qutrit_dsd::linalg::{
    hermitian_eigenvalues, partial_transpose_matrix, realign, realign_matrix, trace_norm, Subsystem,
};
use qutrit_dsd::states::{horodecki_state, HorodeckiParam};
use qutrit_dsd::validate::random_density_matrix;
use qutrit_dsd::witnesses::{ccnr, negativity};
use rand::Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn kraus_completeness() -> Verdict {
    let mut worst: f64 = 0.0;
    for (variant, p_max) in [(ChannelVariant::AsWritten, 0.5), (ChannelVariant::Factorized, 1.0)] {
        for r in linspace(0.0, 1.0, 20) {
            for p in linspace(0.0, p_max, 20) {
                let k = kraus_set(&ChannelParams::symmetric(r, p, variant).unwrap());
                worst = worst.max(k.completeness_deviation());
            }
        }
    }
    verdict(worst <= 1e-12, format!("max |sum E^dag E - I| = {worst:.2e} (<= 1e-12)"))
}

fn state_invariants() -> Verdict {
    let mut g = rng(500);
    let (mut herm, mut trace, mut min_eig): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for k in 0..500 {
        let alpha = g.random_range(2.0..=5.0);
        let r = g.random_range(0.0..=1.0);
        let (variant, t_max) = if k % 2 == 0 {
            (ChannelVariant::AsWritten, AS_WRITTEN_T_MAX)
        } else {
            (ChannelVariant::Factorized, 3.0)
        };
        let t = g.random_range(0.0..=t_max);
        let params = ChannelParams::symmetric(r, p_of_t(t).unwrap(), variant).unwrap();
        let set = kraus_set(&params);
        let rho0 = horodecki_state(HorodeckiParam::new(alpha).unwrap());
        let m = apply_kraus_pair(rho0.matrix(), &set, &set);
        herm = herm.max(m.hermiticity_deviation());
        trace = trace.max((m.trace().re - 1.0).abs().max(m.trace().im.abs()));
        min_eig = min_eig.min(hermitian_eigenvalues(&m).unwrap()[0]);
    }
    verdict(
        herm <= 1e-10 && trace <= 1e-10 && min_eig >= -1e-9,
        format!("500 evolutions: hermiticity {herm:.1e}, |tr-1| {trace:.1e}, min eig {min_eig:.2e}"),
    )
}

fn initial_classification() -> Verdict {
    let mut wrong = Vec::new();
    for alpha in [2.0, 2.5, 3.5, 3.99, 4.0, 4.01, 4.3, 4.8, 5.0] {
        let n = negativity(&horodecki_state(HorodeckiParam::new(alpha).unwrap())).unwrap();
        if (n > 0.0) != (alpha > 4.0) {
            wrong.push(alpha);
        }
    }
    let mut ccnr_values = Vec::new();
    for alpha in [3.5, 4.0] {
        let rho = horodecki_state(HorodeckiParam::new(alpha).unwrap());
        let ours = ccnr(&rho).unwrap();
        let oracle = oracle_trace_norm(&realign(&rho).unwrap()) - 1.0;
        ccnr_values.push((alpha, ours, oracle));
    }
    let ccnr_ok = ccnr_values
        .iter()
        .all(|&(_, ours, oracle)| ours > 0.0 && oracle > 0.0 && within(ours, oracle, 1e-9));
    verdict(
        wrong.is_empty() && ccnr_ok,
        format!(
            "N>0 exactly for alpha>4 (mismatches {wrong:?}); R(3.5) = {:.6}, R(4.0) = {:.6}",
            ccnr_values[0].1, ccnr_values[1].1
        ),
    )
}

fn as_written_config(alpha: f64) -> ScanConfig {
    ScanConfig::new(alpha, 0.9, ChannelVariant::AsWritten, 0.0, AS_WRITTEN_T_MAX, 70)
}

fn fig3_thresholds() -> Verdict {
    let cfg = as_written_config(4.3);
    let series = scan(&cfg).unwrap();
    let events = detect_events(&series, &cfg).unwrap();
    let death = events.iter().find(|e| e.kind == EventKind::Dsd).map(|e| 0.5 * (e.t_start + e.t_end));
    let window = events.iter().find(|e| e.kind == EventKind::CcnrPositiveWindow).map(|e| e.t_end);
    let ok = matches!(death, Some(t) if within(t, 0.075, 0.005)) && matches!(window, Some(t) if within(t, 0.093, 0.005));
    verdict(ok, format!("N -> 0 at t = {death:.4?} (0.075 +- 0.005); R > 0 window ends at t = {window:.4?} (0.093 +- 0.005)"))
}

fn fig4_thresholds() -> Verdict {
    let cfg = as_written_config(4.8);
    let series = scan(&cfg).unwrap();
    let r = zero_crossings(&series, &cfg, Witness::Ccnr).unwrap();
    let n = zero_crossings(&series, &cfg, Witness::Negativity).unwrap();
    let r0 = r.first().filter(|c| c.was_active).map(|c| c.t());
    let n0 = n.first().filter(|c| c.was_active).map(|c| c.t());
    let ok = matches!(r0, Some(t) if within(t, 0.12, 0.01)) && matches!(n0, Some(t) if within(t, 0.23, 0.01));
    verdict(ok, format!("R -> 0 at t = {r0:.4?} (0.12 +- 0.01); N -> 0 at t = {n0:.4?} (0.23 +- 0.01)"))
}

fn transitions(alpha: f64) -> Vec<EventWindow> {
    let cfg = ScanConfig::new(alpha, 0.15, ChannelVariant::Factorized, 0.0, 3.0, 301);
    let series = scan(&cfg).unwrap();
    detect_events(&series, &cfg)
        .unwrap()
        .into_iter()
        .filter(|e| matches!(e.kind, EventKind::Dsd | EventKind::Dsb))
        .collect()
}

fn describe(events: &[EventWindow]) -> String {
    if events.is_empty() {
        return "none".into();
    }
    events
        .iter()
        .map(|e| format!("{}@{:.4}", e.kind.as_str(), e.t_start))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fig5_qualitative() -> Verdict {
    let a = transitions(4.3);
    let b = transitions(3.5);
    let c = transitions(2.5);
    let death_then_birth = a
        .iter()
        .position(|e| e.kind == EventKind::Dsd)
        .is_some_and(|i| a[i + 1..].iter().any(|e| e.kind == EventKind::Dsb));
    let birth = |v: &[EventWindow]| v.iter().any(|e| e.kind == EventKind::Dsb);
    verdict(
        death_then_birth && birth(&b) && birth(&c),
        format!(
            "t in [0, 3]: (a) alpha=4.3: {}; (b) alpha=3.5: {}; (c) alpha=2.5: {}",
            describe(&a),
            describe(&b),
            describe(&c)
        ),
    )
}

fn figs12_reach_ppt() -> Verdict {
    let alphas = [4.2, 4.6, 5.0];
    let times = linspace(0.0, 1.0, 101);
    let mut first_ppt = Vec::new();
    for r in [0.15, 0.9] {
        let rows = sweep_surface(&alphas, r, ChannelVariant::Factorized, &times).unwrap();
        for (k, &alpha) in alphas.iter().enumerate() {
            let row = &rows[k * times.len()..(k + 1) * times.len()];
            first_ppt.push((r, alpha, row.iter().find(|c| c.lambda_min >= 0.0).map(|c| c.t)));
        }
    }
    let ok = first_ppt.iter().all(|(_, _, t)| t.is_some());
    let detail = first_ppt
        .iter()
        .map(|(r, a, t)| format!("r={r},alpha={a}:{t:?}"))
        .collect::<Vec<_>>()
        .join(" ");
    verdict(ok, format!("first t with lambda_min >= 0: {detail}"))
}

fn oracle_equivalence() -> Verdict {
    let mut g = rng(800);
    let mut norm_worst: f64 = 0.0;
    for _ in 0..100 {
        let h = random_hermitian(&mut g, 9);
        let by_eig: f64 = oracle_eigenvalues(&h).iter().map(|l| l.abs()).sum();
        norm_worst = norm_worst.max((trace_norm(&h).unwrap() - by_eig).abs());
    }
    let mut inv_worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_density_matrix(&mut g);
        let m = rho.matrix();
        inv_worst = inv_worst.max(realign_matrix(&realign_matrix(m).unwrap()).unwrap().max_abs_diff(m));
        for sub in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose_matrix(&partial_transpose_matrix(m, sub).unwrap(), sub).unwrap();
            inv_worst = inv_worst.max(twice.max_abs_diff(m));
        }
    }
    verdict(
        norm_worst <= 1e-10 && inv_worst <= 1e-12,
        format!("trace norm vs sum|eig| {norm_worst:.1e} (<= 1e-10); involutions {inv_worst:.1e} (<= 1e-12)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Verdict); 8] = [
        ("kraus completeness", Duration::from_secs(1), kraus_completeness),
        ("state invariant preservation", Duration::from_secs(5), state_invariants),
        ("initial classification", Duration::from_secs(1), initial_classification),
        ("fig3 thresholds (as-written)", Duration::from_secs(2), fig3_thresholds),
        ("fig4 thresholds (as-written)", Duration::from_secs(2), fig4_thresholds),
        ("fig5 death/birth (factorized)", Duration::from_secs(10), fig5_qualitative),
        ("figs1-2 reach PPT", Duration::from_secs(10), figs12_reach_ppt),
        ("oracle equivalence", Duration::MAX, oracle_equivalence),
    ];

    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = v.passed && in_time;
        if !passed {
            failed += 1;
        }
        let budget = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" / {:.0?}", limit)
        };
        println!(
            "{} {name}: {} [{:.2?}{budget}]",
            if passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
