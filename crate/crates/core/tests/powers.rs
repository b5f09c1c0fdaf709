use qcoherence::coherence::CoherenceMeasure::{self, RelEntropy, L1};
use qcoherence::powers::{
    cohering_power, complete_cohering_from, complete_cohering_power, complete_decohering_power, compute,
    extended_cohering_gain, generalized_cohering_power, PowerKind,
};
use qcoherence::quantum::{partial_trace, tensor, von_neumann_entropy, KrausChannel};
use qcoherence::random::{random_channel, random_state, rng};
use qcoherence::zoo::{build, ChannelSpec};
use qcoherence::OptimizerConfig;

fn cfg(seed: u64) -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(16).with_seed(seed)
}

fn bipartite(seed: u64) -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(2).with_seed(seed)
}

fn zoo(spec: ChannelSpec) -> KrausChannel {
    build(&spec).unwrap()
}

fn sample_channels() -> Vec<KrausChannel> {
    vec![
        zoo(ChannelSpec::Hadamard),
        zoo(ChannelSpec::MaxCohering { dim: 2 }),
        zoo(ChannelSpec::Erasing { dim: 2, target: 0 }),
        zoo(ChannelSpec::Depolarizing { dim: 2, p: 0.4 }),
        random_channel(2, 2, &mut rng(5)),
        random_channel(3, 2, &mut rng(6)),
    ]
}

#[test]
fn cohering_ordering() {
    for (i, phi) in sample_channels().iter().enumerate() {
        for measure in [RelEntropy, L1] {
            let c = cohering_power(phi, measure, &cfg(i as u64)).unwrap();
            let g = generalized_cohering_power(phi, measure, &cfg(i as u64)).unwrap();
            let complete = complete_cohering_from(phi, &g, 2, &bipartite(i as u64)).unwrap();
            assert!(c.value <= g.value + 1e-6, "channel {i} {measure:?}: {} > {}", c.value, g.value);
            for r in &complete {
                assert!(
                    g.value <= r.value + 1e-6,
                    "channel {i} {measure:?} k={}: {} > {}",
                    r.ancilla_dim,
                    g.value,
                    r.value
                );
            }
            assert!(c.passed() && g.passed());
        }
    }
}

#[test]
fn complete_never_exceeds_generalized_for_rel_entropy() {
    for i in 0..20u64 {
        let d = 2 + (i as usize % 2);
        let phi = random_channel(d, 2, &mut rng(1000 + i));
        let g = generalized_cohering_power(&phi, RelEntropy, &cfg(i)).unwrap();
        for r in complete_cohering_from(&phi, &g, 3, &bipartite(i)).unwrap().iter().skip(1) {
            assert!(r.value - g.value <= 1e-5, "channel {i} k={}: {} vs {}", r.ancilla_dim, r.value, g.value);
            assert!(r.checks["not_above_generalized"]);
        }
    }
}

#[test]
fn saturating_decohering_input_has_mixed_marginal() {
    let erasing = zoo(ChannelSpec::Erasing { dim: 2, target: 0 });
    let reports = complete_decohering_power(&erasing, RelEntropy, 2, &cfg(3)).unwrap();
    let k2 = &reports[1];
    assert!(k2.value >= 2.0 - 1e-4, "{}", k2.value);
    let marginal = partial_trace(&k2.optimal_input, &[0]).unwrap();
    assert!(von_neumann_entropy(&marginal) >= 1.0 - 0.05);
    assert!((k2.diagnostics["marginal_entropy_a"] - von_neumann_entropy(&marginal)).abs() < 1e-12);
    assert!(reports.iter().all(|r| r.passed()));
}

#[test]
fn l1_product_bound_scales_with_ancilla() {
    for phi in [zoo(ChannelSpec::Hadamard), random_channel(2, 2, &mut rng(17))] {
        let reports = complete_cohering_power(&phi, L1, 3, &bipartite(1)).unwrap();
        let bound: Vec<f64> = reports.iter().map(|r| r.diagnostics["product_lower_bound"]).collect();
        assert!(bound[0] > 0.0);
        for (i, bi) in bound.iter().enumerate() {
            for (j, bj) in bound.iter().enumerate() {
                let (ki, kj) = ((i + 1) as f64, (j + 1) as f64);
                assert!((bi / bj - ki / kj).abs() <= 1e-9);
            }
        }
        for r in &reports {
            assert!((r.diagnostics["product_direct"] - r.diagnostics["product_lower_bound"]).abs() <= 1e-8);
            assert!(r.value >= r.diagnostics["product_lower_bound"] - 1e-9);
        }
    }
}

#[test]
fn any_ancilla_partner_keeps_the_optimum() {
    for (i, phi) in sample_channels().iter().enumerate() {
        let g = generalized_cohering_power(phi, RelEntropy, &cfg(i as u64)).unwrap();
        let mut g_rng = rng(40 + i as u64);
        for k in [1, 2, 3] {
            let sigma = random_state(&[k], &mut g_rng);
            let gain = extended_cohering_gain(phi, RelEntropy, &tensor(&g.optimal_input, &sigma)).unwrap();
            assert!((gain - g.value).abs() <= 1e-8, "channel {i} k={k}: {gain} vs {}", g.value);
        }
    }
}

#[test]
fn compute_dispatches_every_kind() {
    let phi = zoo(ChannelSpec::Hadamard);
    let small = OptimizerConfig::default().with_restarts(2).with_max_iters(300);
    for kind in PowerKind::ALL {
        let measure: CoherenceMeasure = RelEntropy;
        let reports = compute(kind, &phi, measure, 2, &small).unwrap();
        assert_eq!(reports.len(), if kind.uses_ancilla() { 2 } else { 1 });
        assert!(reports.iter().all(|r| r.kind == kind));
    }
    assert!(compute(PowerKind::SeparableCompleteDecohering, &phi, L1, 2, &small).is_err());
    assert!(compute(PowerKind::CompleteCohering, &phi, L1, 0, &small).is_err());
}

#[test]
fn reports_are_reproducible() {
    let phi = random_channel(2, 2, &mut rng(8));
    let a = compute(PowerKind::CompleteDecohering, &phi, RelEntropy, 2, &bipartite(9)).unwrap();
    let b = compute(PowerKind::CompleteDecohering, &phi, RelEntropy, 2, &bipartite(9)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
