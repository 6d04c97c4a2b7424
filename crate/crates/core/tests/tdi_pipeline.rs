use rayon::prelude::*;
use tdi_core::corpus::corpus;
use tdi_core::formulations::ThetaVariant;
use tdi_core::io::to_graph6;
use tdi_core::sdp::SolveOptions;
use tdi_core::tdi::{
    audit_weights, gc_floor_cut, gc_membership, integral_argmax_exists, integrality_audit,
    support_value, tdi_check_theta_weights, AuditReport, AuditVerdict, BodyOracle, WeightBox,
    INT_TOL,
};
use tdi_core::{Graph, WeightVec};

#[test]
fn tdi_on_tested_weights_implies_integral_support_values() {
    let graphs = corpus(5, true).unwrap();
    graphs.par_iter().for_each(|g| {
        let weights = audit_weights(g.n(), &WeightBox::default(), 50, 0).unwrap();
        let tdi = tdi_check_theta_weights(g, &weights, INT_TOL, &SolveOptions::default()).unwrap();
        assert!(tdi.agreement, "{}", to_graph6(g));
        if tdi.verdict.passed() {
            let body = BodyOracle::theta(g, ThetaVariant::Theta);
            let audit = integrality_audit(&body, &weights, INT_TOL).unwrap();
            assert_eq!(audit.verdict, AuditVerdict::AllIntegral, "{}", to_graph6(g));
            assert!(audit.records.iter().all(|r| r.integral_argmax));
        }
    });
}

#[test]
fn audit_reports_serialize_deterministically() {
    let body = BodyOracle::theta(&Graph::cycle(5), ThetaVariant::Theta);
    let weights = WeightBox::new(0, 1).unwrap().points_or_sample(5, 0, 0);
    let a = integrality_audit(&body, &weights, INT_TOL).unwrap();
    let b = integrality_audit(&body, &weights, INT_TOL).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(text, serde_json::to_string(&b).unwrap());
    let back: AuditReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.verdict, a.verdict);
    // the first fractional weight in lexicographic order is the C5 in the box
    assert_eq!(a.verdict, AuditVerdict::CounterexampleFound(vec![1, 1, 1, 1, 1]));
}

#[test]
fn sampled_boxes_are_seeded() {
    let b = WeightBox::new(0, 5).unwrap();
    assert_eq!(b.points_or_sample(9, 20, 42), b.points_or_sample(9, 20, 42));
    assert_ne!(b.points_or_sample(9, 20, 42), b.points_or_sample(9, 20, 43));
}

#[test]
fn gomory_chvatal_cuts_of_an_odd_cycle() {
    let c5 = Graph::cycle(5);
    let body = BodyOracle::theta(&c5, ThetaVariant::Theta);
    let cut = gc_floor_cut(&body, &WeightVec::ones(5)).unwrap();
    assert_eq!(cut.rhs, 2);
    // every stable set satisfies it, the fractional centre does not
    for mask in 0u32..32 {
        let u = tdi_core::SubsetMask(mask);
        if c5.is_stable(u) {
            assert!(cut.satisfied_by(&u.incidence(5)));
        }
    }
    assert!(!gc_membership(&[cut], &[0.5; 5]));
    assert!(!integral_argmax_exists(&body, &WeightVec::ones(5)).unwrap());
}

#[test]
fn other_bodies_share_the_support_function_interface() {
    let c5 = Graph::cycle(5);
    let w = WeightVec(vec![1, 0, 2, 1, 1]);
    let values: Vec<f64> = ThetaVariant::ALL
        .iter()
        .map(|&v| support_value(&BodyOracle::theta(&c5, v), &w).unwrap())
        .collect();
    assert!(values[0] <= values[1] + 1e-7 && values[1] <= values[2] + 1e-7);
}
