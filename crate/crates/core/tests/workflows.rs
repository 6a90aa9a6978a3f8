use std::f64::consts::PI;

use qaoa_lab::analytic::{random_guess_closed_form, random_guess_reference, tree_optimum};
use qaoa_lab::fixtures;
use qaoa_lab::graph::{complete, complete_bipartite, cycle, generate_regular, WeightScheme};
use qaoa_lab::maxcut::{approximation_ratio, brute_force_extremes};
use qaoa_lab::rqaoa::{audit_symmetry_chain, rqaoa_run};
use qaoa_lab::simulator::QaoaSimulator;
use qaoa_lab::symmetry::{canonicalize_to_u, domain_tag, DomainTag};
use qaoa_lab::transfer::{
    receiver_optimum, scan_degrees, transfer_error, write_csv, OptimizerConfig, ScanPlan, CSV_HEADER,
};
use qaoa_lab::{classify_symmetry, SymmetryKind};

#[test]
fn optimize_then_canonicalize_lands_in_u1() {
    let g = generate_regular(10, 3, &WeightScheme::Unit, 4).unwrap();
    let best = receiver_optimum(&g, 1, &OptimizerConfig::default(), &[]).unwrap();
    let canon = canonicalize_to_u(&best.params, classify_symmetry(&g).kind).unwrap();
    assert_ne!(canon.domain, DomainTag::Neither);
    let sim = QaoaSimulator::new(&g).unwrap();
    assert!((sim.expectation(&canon.params) - best.value).abs() < 1e-9);
}

#[test]
fn tree_donor_beats_random_guess_on_k33() {
    let g = complete_bipartite(3, 3);
    let ext = brute_force_extremes(&g).unwrap();
    let x = tree_optimum(3).unwrap().params();
    let r = approximation_ratio(QaoaSimulator::new(&g).unwrap().expectation(&x), &ext).unwrap();
    let gap = random_guess_reference(r, &ext).unwrap();
    assert!((gap - random_guess_closed_form(3, 1.0)).abs() < 1e-12);
    assert!(gap > 0.0);
}

#[test]
fn scan_csv_is_reproducible() {
    let mut plan = ScanPlan::regular(8, vec![3], vec![3], 1);
    plan.instances = 2;
    let render = || {
        let mut out = Vec::new();
        write_csv(&scan_degrees(&plan).unwrap().rows, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    };
    let a = render();
    assert!(a.starts_with(CSV_HEADER));
    assert_eq!(a.lines().count(), 2);
    assert_eq!(a, render());
}

#[test]
fn fixture_sets_transfer_identically_to_an_ows_receiver() {
    let sets = fixtures::by_name("tree3-p2").unwrap();
    let g = generate_regular(8, 3, &WeightScheme::Unit, 1).unwrap();
    assert_eq!(classify_symmetry(&g).kind, SymmetryKind::Ows);
    let opt = receiver_optimum(&g, 2, &OptimizerConfig::default(), &sets[..1]).unwrap();
    let deltas: Vec<f64> = sets
        .iter()
        .map(|s| transfer_error(&g, s, &opt.params).unwrap().delta)
        .collect();
    assert!(deltas.iter().all(|d| (d - deltas[0]).abs() < 1e-9));
    assert_eq!(domain_tag(&sets[0]), DomainTag::U1);
    assert_eq!(domain_tag(&sets[7]), DomainTag::U2);
}

#[test]
fn rqaoa_log_and_chain_are_consistent() {
    let g = cycle(8);
    let res = rqaoa_run(&g, 1, &OptimizerConfig::default(), 3).unwrap();
    assert_eq!(res.cost, 8.0);
    let audit = audit_symmetry_chain(&g, &res.steps).unwrap();
    assert!(audit.classes.iter().all(|c| c.kind == SymmetryKind::Ews));
    let mut buf = Vec::new();
    res.write_log_jsonl(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), res.steps.len());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("eliminated").is_some() && v.get("correlation").is_some());
    }
}

#[test]
fn rqaoa_solves_k5_with_fields_exactly() {
    let g = complete(5).with_fields(vec![1.0, 0.0, -1.0, 0.0, 2.0]).unwrap();
    let ext = brute_force_extremes(&g).unwrap();
    let res = rqaoa_run(&g, 1, &OptimizerConfig::default(), 3).unwrap();
    assert!(res.cost <= ext.c_max + 1e-12);
    assert!(res.cost >= ext.c_min);
    assert_eq!(res.assignment.len(), 5);
}

#[test]
fn gamma_shift_by_pi_is_free_on_c6() {
    let g = cycle(6);
    let sim = QaoaSimulator::new(&g).unwrap();
    let x = qaoa_lab::ParameterSet::single(0.4, 0.3);
    let y = qaoa_lab::ParameterSet::single(0.4 - PI, 0.3);
    assert!((sim.expectation(&x) - sim.expectation(&y)).abs() < 1e-12);
}
