use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdi_core::formulations::{
    build_maxcut, build_maxcut_strengthened, build_theta_prime_trace, build_theta_trace,
    build_theta_variant, build_vector_chromatic, homogenize_maxcut, homogenize_point,
    vector_chromatic_from_t, ThetaVariant,
};
use tdi_core::sdp::{solve, SdpProblem, SolveOptions};
use tdi_core::{Graph, SymMatrix, WeightVec};

// Reference optima from an independent conic solver (CLARABEL through cvxpy).
const THETA_C5: f64 = 2.236067977518212;
const THETA_C5_RAMP: f64 = 8.000000000032387;
const THETA_C7: f64 = 3.3176672074244524;
const THETA_C7_COMPLEMENT: f64 = 2.1099162642089007;
const MAXCUT_C5: f64 = 4.522542485737773;
const MAXCUT_K3: f64 = 2.249999999966297;

fn value(p: &SdpProblem) -> f64 {
    solve(p, &SolveOptions::default()).unwrap().value()
}

fn theta(g: &Graph, w: &WeightVec, v: ThetaVariant) -> f64 {
    value(&build_theta_variant(g, w, v).unwrap())
}

#[test]
fn theta_family_matches_reference_values() {
    let c5 = Graph::cycle(5);
    for v in ThetaVariant::ALL {
        assert!((theta(&c5, &WeightVec::ones(5), v) - THETA_C5).abs() < 1e-6, "{v:?}");
    }
    let ramp = WeightVec(vec![1, 2, 3, 4, 5]);
    assert!((theta(&c5, &ramp, ThetaVariant::Theta) - THETA_C5_RAMP).abs() < 1e-6);
    let c7 = Graph::cycle(7);
    let t7 = theta(&c7, &WeightVec::ones(7), ThetaVariant::Theta);
    let t7c = theta(&c7.complement(), &WeightVec::ones(7), ThetaVariant::Theta);
    assert!((t7 - THETA_C7).abs() < 1e-6);
    assert!((t7c - THETA_C7_COMPLEMENT).abs() < 1e-6);
    // vertex-transitive graphs: θ(G)·θ(Ḡ) = n
    assert!((t7 * t7c - 7.0).abs() < 1e-5);
}

#[test]
fn trace_formulations_agree_with_lifted_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in [Graph::cycle(5), Graph::path(4), Graph::cycle(6), Graph::complete(3)] {
        let w = WeightVec((0..g.n()).map(|_| rng.gen_range(0..=4)).collect());
        let lifted = theta(&g, &w, ThetaVariant::Theta);
        let lifted_prime = theta(&g, &w, ThetaVariant::ThetaPrime);
        assert!((value(&build_theta_trace(&g, &w).unwrap()) - lifted).abs() < 1e-6);
        assert!((value(&build_theta_prime_trace(&g, &w).unwrap()) - lifted_prime).abs() < 1e-6);
    }
}

#[test]
fn support_values_are_monotone_and_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in [Graph::cycle(5), Graph::cycle(6).complement(), Graph::path(5)] {
        for _ in 0..4 {
            let w = WeightVec((0..g.n()).map(|_| rng.gen_range(0..=5)).collect());
            let tp = theta(&g, &w, ThetaVariant::ThetaPrime);
            let t = theta(&g, &w, ThetaVariant::Theta);
            let tplus = theta(&g, &w, ThetaVariant::ThetaPlus);
            assert!(tp <= t + 1e-7 && t <= tplus + 1e-7, "{tp} {t} {tplus}");
            let w2 = WeightVec(w.0.iter().map(|x| 2 * x).collect());
            assert!((theta(&g, &w2, ThetaVariant::Theta) - 2.0 * t).abs() < 1e-6);
        }
    }
}

#[test]
fn maxcut_values_and_homogenization() {
    let k3 = Graph::complete(3);
    assert!((value(&build_maxcut(&k3, &WeightVec::ones(3)).unwrap()) - MAXCUT_K3).abs() < 1e-6);
    let c5 = Graph::cycle(5);
    let plain = value(&build_maxcut(&c5, &WeightVec::ones(5)).unwrap());
    let homog = value(&homogenize_maxcut(&c5, &WeightVec::ones(5)).unwrap());
    assert!((plain - MAXCUT_C5).abs() < 1e-6);
    assert!((plain - homog).abs() < 1e-6);
    // strengthening is exact on K2 with a negative weight
    let k2 = Graph::complete(2);
    let v = value(&build_maxcut_strengthened(&k2, &WeightVec(vec![-1])).unwrap());
    assert!((v + 1.0).abs() < 1e-6);
}

#[test]
fn homogenized_points_keep_objective_and_feasibility() {
    let g = Graph::cycle(5);
    let w = WeightVec(vec![1, 2, 0, 3, 1]);
    let plain = build_maxcut(&g, &w).unwrap();
    let homog = homogenize_maxcut(&g, &w).unwrap();
    let y = solve(&plain, &SolveOptions::default()).unwrap().primal.x;
    let yh = SymMatrix::direct_sum(1.0, &y);
    let x = homogenize_point(&yh);
    assert!(homog.primal_residual(&x).unwrap() < 1e-8);
    let a = plain.objective.inner(&y).unwrap();
    let b = homog.objective.inner(&x).unwrap();
    assert!((a - b).abs() < 1e-8);
    // every cut vector ŝ = (1, s) maps to a rank-one feasible point
    let s = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
    let x = homogenize_point(&SymMatrix::sym_outer(&s));
    assert!(homog.primal_residual(&x).unwrap() < 1e-12);
    assert_eq!(x.numeric_rank(1e-9), 1);
}

#[test]
fn vector_chromatic_number_examples() {
    let chi_v = |g: &Graph| vector_chromatic_from_t(value(&build_vector_chromatic(g).unwrap()));
    assert!((chi_v(&Graph::complete(3)) - 3.0).abs() < 1e-6);
    assert!((chi_v(&Graph::complete(2)) - 2.0).abs() < 1e-6);
    assert!((chi_v(&Graph::cycle(5)) - THETA_C5).abs() < 1e-6);
    assert!((chi_v(&Graph::cycle(6)) - 2.0).abs() < 1e-6);
    assert!(build_vector_chromatic(&Graph::empty(3)).is_err());
}
