//! Built-in invariant checks run by `qutrit-dsd validate`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{apply_kraus_pair, kraus_set, ChannelParams, ChannelVariant, KrausSet};
use crate::dynamics::{linspace, p_of_t, AS_WRITTEN_T_MAX};
use crate::linalg::{
    hermitian_eigenvalues, partial_transpose_matrix, realign_matrix, trace_norm, ComplexMatrix,
    DensityMatrix, Subsystem, C64, QUTRIT,
};
use crate::states::{classify_initial, horodecki_state, HorodeckiParam, InitialClass};
use crate::witnesses::{ccnr, negativity, negativity_on};

const SEED: u64 = 0x5eed_0d5d;

/// Faults that can be injected to exercise the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds a seventh operator `sqrt(1e-3) |0><0|`, so the completeness sum
    /// overshoots the identity by 1e-3.
    BrokenCompleteness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value against its limit.
    pub detail: String,
}

impl CheckResult {
    fn bound(name: &'static str, worst: f64, limit: f64) -> Self {
        Self {
            name,
            passed: worst <= limit,
            detail: format!("worst {worst:.3e} (limit {limit:.0e})"),
        }
    }
}

/// Random full-rank two-qutrit state `G G^dagger / tr(G G^dagger)`.
pub fn random_density_matrix<R: Rng>(rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(9, 9, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::bipartite(m.scale_real(1.0 / tr)).expect("G G^dagger is a valid state")
}

/// Random single-qutrit state.
pub fn random_qutrit_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(3, 3, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::qutrit(m.scale_real(1.0 / tr)).expect("G G^dagger is a valid state")
}

fn kraus_for(params: &ChannelParams, fault: Option<Fault>) -> KrausSet {
    let set = kraus_set(params);
    match fault {
        None => set,
        Some(Fault::BrokenCompleteness) => {
            let mut ops = set.operators().to_vec();
            let mut extra = ComplexMatrix::zeros(QUTRIT, QUTRIT);
            extra[(0, 0)] = C64::new(1e-3f64.sqrt(), 0.0);
            ops.push(extra);
            KrausSet::from_operators(ops).expect("3x3 operators")
        }
    }
}

fn completeness(variant: ChannelVariant, p_max: f64, fault: Option<Fault>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in linspace(0.0, 1.0, 20) {
        for p in linspace(0.0, p_max, 20) {
            let params = ChannelParams::symmetric(r, p, variant).expect("grid inside domain");
            worst = worst.max(kraus_for(&params, fault).completeness_deviation());
        }
    }
    worst
}

struct Evolved {
    hermiticity: f64,
    trace: f64,
    min_eigenvalue: f64,
}

fn random_evolutions(count: usize, fault: Option<Fault>) -> Evolved {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Evolved {
        hermiticity: 0.0,
        trace: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    for _ in 0..count {
        let alpha = rng.random_range(2.0..=5.0);
        let r = rng.random_range(0.0..=1.0);
        let variant = if rng.random_bool(0.5) {
            ChannelVariant::AsWritten
        } else {
            ChannelVariant::Factorized
        };
        let t_max = match variant {
            ChannelVariant::AsWritten => AS_WRITTEN_T_MAX,
            ChannelVariant::Factorized => 3.0,
        };
        let t = rng.random_range(0.0..=t_max);
        let params = ChannelParams::symmetric(r, p_of_t(t).unwrap(), variant).unwrap();
        let k = kraus_for(&params, fault);
        let rho0 = horodecki_state(HorodeckiParam::new(alpha).unwrap());
        let m = apply_kraus_pair(rho0.matrix(), &k, &k);
        out.hermiticity = out.hermiticity.max(m.hermiticity_deviation());
        out.trace = out.trace.max((m.trace() - C64::new(1.0, 0.0)).norm());
        if let Ok(ev) = hermitian_eigenvalues(&m) {
            out.min_eigenvalue = out.min_eigenvalue.min(ev[0]);
        } else {
            out.min_eigenvalue = f64::NEG_INFINITY;
        }
    }
    out
}

/// Runs every check; `fault` perturbs the Kraus sets used by the channel checks.
pub fn run_checks(fault: Option<Fault>) -> Vec<CheckResult> {
    let mut results = Vec::new();

    results.push(CheckResult::bound(
        "kraus_completeness_as_written",
        completeness(ChannelVariant::AsWritten, 0.5, fault),
        1e-12,
    ));
    results.push(CheckResult::bound(
        "kraus_completeness_factorized",
        completeness(ChannelVariant::Factorized, 1.0, fault),
        1e-12,
    ));

    let evolved = random_evolutions(200, fault);
    results.push(CheckResult::bound("evolution_hermitian", evolved.hermiticity, 1e-10));
    results.push(CheckResult::bound("evolution_unit_trace", evolved.trace, 1e-10));
    results.push(CheckResult::bound("evolution_positive", -evolved.min_eigenvalue, 1e-9));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let states: Vec<DensityMatrix> = (0..50).map(|_| random_density_matrix(&mut rng)).collect();

    let mut pt_worst: f64 = 0.0;
    let mut realign_worst: f64 = 0.0;
    let mut norm_worst: f64 = 0.0;
    let mut pt_sym_worst: f64 = 0.0;
    for rho in &states {
        let m = rho.matrix();
        for sub in [Subsystem::A, Subsystem::B] {
            let twice = partial_transpose_matrix(&partial_transpose_matrix(m, sub).unwrap(), sub).unwrap();
            pt_worst = pt_worst.max(twice.max_abs_diff(m));
        }
        let twice = realign_matrix(&realign_matrix(m).unwrap()).unwrap();
        realign_worst = realign_worst.max(twice.max_abs_diff(m));

        let pt = partial_transpose_matrix(m, Subsystem::B).unwrap();
        let by_eig: f64 = hermitian_eigenvalues(&pt).unwrap().iter().map(|l| l.abs()).sum();
        norm_worst = norm_worst.max((trace_norm(&pt).unwrap() - by_eig).abs());

        let na = negativity_on(rho, Subsystem::A).unwrap();
        let nb = negativity_on(rho, Subsystem::B).unwrap();
        pt_sym_worst = pt_sym_worst.max((na - nb).abs());
    }
    results.push(CheckResult::bound("partial_transpose_involution", pt_worst, 1e-12));
    results.push(CheckResult::bound("realign_involution", realign_worst, 1e-12));
    results.push(CheckResult::bound("trace_norm_matches_eigenvalues", norm_worst, 1e-10));
    results.push(CheckResult::bound("negativity_subsystem_symmetry", pt_sym_worst, 1e-10));

    let mut mismatches = Vec::new();
    for alpha in [2.0, 2.5, 3.0, 3.5, 3.99, 4.0, 4.01, 4.3, 4.8, 5.0] {
        let param = HorodeckiParam::new(alpha).unwrap();
        let free = negativity(&horodecki_state(param)).unwrap() > 0.0;
        if free != (classify_initial(param) == InitialClass::FreeEntangled) {
            mismatches.push(alpha);
        }
    }
    results.push(CheckResult {
        name: "initial_classification",
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "10 alpha values agree".into()
        } else {
            format!("disagree at alpha = {mismatches:?}")
        },
    });

    let mut identity_worst: f64 = 0.0;
    let mut linearity_worst: f64 = 0.0;
    for (rho1, rho2) in states.iter().zip(states.iter().skip(1)).take(20) {
        let r = rng.random_range(0.0..=1.0);
        let id = kraus_for(&ChannelParams::symmetric(r, 0.0, ChannelVariant::AsWritten).unwrap(), fault);
        identity_worst = identity_worst.max(apply_kraus_pair(rho1.matrix(), &id, &id).max_abs_diff(rho1.matrix()));

        let params = ChannelParams::symmetric(r, rng.random_range(0.0..=1.0), ChannelVariant::Factorized).unwrap();
        let k = kraus_for(&params, fault);
        let w = rng.random_range(0.0..=1.0);
        let mixed = rho1.mix(rho2, w).unwrap();
        let lhs = apply_kraus_pair(mixed.matrix(), &k, &k);
        let rhs = &apply_kraus_pair(rho1.matrix(), &k, &k).scale_real(w)
            + &apply_kraus_pair(rho2.matrix(), &k, &k).scale_real(1.0 - w);
        linearity_worst = linearity_worst.max(lhs.max_abs_diff(&rhs));
    }
    results.push(CheckResult::bound("identity_channel", identity_worst, 1e-14));
    results.push(CheckResult::bound("channel_linearity", linearity_worst, 1e-12));

    let mut product_worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let a = random_qutrit_state(&mut rng);
        let b = random_qutrit_state(&mut rng);
        let rho = DensityMatrix::product(&a, &b).unwrap();
        product_worst = product_worst.max(ccnr(&rho).unwrap());
    }
    results.push(CheckResult::bound("ccnr_product_states_nonpositive", product_worst, 1e-12));

    results
}
