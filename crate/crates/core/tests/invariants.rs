use std::f64::consts::{FRAC_PI_4, PI};

use proptest::prelude::*;
use qaoa_lab::graph::{parse_instance, write_instance};
use qaoa_lab::maxcut::{brute_force_extremes, ising_energy, spins_from_index};
use qaoa_lab::rqaoa::{contract, lift_through};
use qaoa_lab::simulator::QaoaSimulator;
use qaoa_lab::symmetry::{canonicalize_to_u, enumerate_orbit, in_domain, wrap_angles, Domain};
use qaoa_lab::{classify_symmetry, Execution, IsingInstance, ParameterSet, SymmetryKind};

fn instance(max_n: usize, integer: bool) -> impl Strategy<Value = IsingInstance> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let weight = if integer {
            prop_oneof![Just(-2.0), Just(-1.0), Just(1.0), Just(2.0), Just(3.0)].boxed()
        } else {
            (-2.0..2.0f64).prop_filter("non-zero", |w| *w != 0.0).boxed()
        };
        let field = if integer {
            (-2i32..=2).prop_map(f64::from).boxed()
        } else {
            (-1.0..1.0f64).boxed()
        };
        (
            proptest::collection::vec(proptest::option::weighted(0.6, weight), pairs.len()),
            proptest::collection::vec(field, n),
            Just(pairs),
        )
            .prop_map(move |(ws, h, pairs)| {
                let mut edges: Vec<(usize, usize, f64)> =
                    pairs.iter().zip(ws).filter_map(|(&(i, j), w)| w.map(|w| (i, j, w))).collect();
                if edges.is_empty() {
                    edges.push((0, 1, 1.0));
                }
                IsingInstance::new(n, edges).unwrap().with_fields(h).unwrap()
            })
    })
}

fn params(p: usize) -> impl Strategy<Value = ParameterSet> {
    (
        proptest::collection::vec(-2.0 * PI..2.0 * PI, p),
        proptest::collection::vec(-PI..PI, p),
    )
        .prop_map(|(g, b)| ParameterSet::new(g, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_stays_normalized_and_cost_is_bounded(inst in instance(7, false), x in (1..=3usize).prop_flat_map(params)) {
        let sim = QaoaSimulator::new(&inst).unwrap();
        let state = sim.prepare_state(&x);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        let ext = brute_force_extremes(&inst).unwrap();
        let c = sim.expectation(&x);
        prop_assert!(c <= ext.c_max + 1e-9 && c >= ext.c_min - 1e-9);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise(inst in instance(8, false), x in (1..=2usize).prop_flat_map(params)) {
        let seq = QaoaSimulator::with_options(&inst, 22, Execution::Sequential).unwrap();
        let par = QaoaSimulator::with_options(&inst, 22, Execution::Parallel).unwrap();
        prop_assert_eq!(seq.expectation(&x).to_bits(), par.expectation(&x).to_bits());
    }

    #[test]
    fn wrapping_lands_in_a_and_is_idempotent(x in (1..=4usize).prop_flat_map(params)) {
        let w = wrap_angles(&x);
        prop_assert!(in_domain(&w, &Domain::A));
        prop_assert_eq!(wrap_angles(&w), w);
    }

    #[test]
    fn canonical_member_is_constant_on_orbits(x in (1..=3usize).prop_flat_map(params), ows in any::<bool>()) {
        let kind = if ows { SymmetryKind::Ows } else { SymmetryKind::Ews };
        let orbit = enumerate_orbit(&x, kind).unwrap();
        prop_assert!(orbit.members.len() <= orbit.expected_size);
        if let Ok(c) = canonicalize_to_u(&x, kind) {
            for m in &orbit.members {
                let again = canonicalize_to_u(m, kind).unwrap();
                prop_assert!(again.params.max_abs_diff(&c.params).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn orbit_members_share_the_landscape(inst in instance(6, true), x in (1..=2usize).prop_flat_map(params)) {
        let kind = classify_symmetry(&inst).kind;
        prop_assume!(kind.has_shift_symmetry());
        let sim = QaoaSimulator::new(&inst).unwrap();
        let c0 = sim.expectation(&x);
        for m in enumerate_orbit(&x, kind).unwrap().members {
            // mixer wrapping by pi/2 is a symmetry only without fields
            let unwrapped_beta = x.betas().iter().all(|b| (-FRAC_PI_4..FRAC_PI_4).contains(b));
            if inst.is_maxcut() || unwrapped_beta {
                prop_assert!((sim.expectation(&m) - c0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn contraction_preserves_energy(inst in instance(7, true), pick in any::<prop::sample::Index>(), plus in any::<bool>()) {
        let e = inst.edges()[pick.index(inst.num_edges())];
        let step = contract(&inst, e.i, e.j, if plus { 1 } else { -1 }).unwrap();
        let steps = [step];
        let reduced = &steps[0].instance;
        for y in 0..1usize << reduced.n() {
            let x = spins_from_index(y, reduced.n());
            let lifted = lift_through(&steps, &x);
            prop_assert_eq!(
                ising_energy(&inst, &lifted).unwrap(),
                ising_energy(reduced, &x).unwrap() + steps[0].total_energy_offset
            );
        }
    }

    #[test]
    fn graph_files_round_trip(inst in instance(8, false)) {
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        let back = parse_instance(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back.n(), inst.n());
        prop_assert_eq!(back.edges(), inst.edges());
        prop_assert_eq!(back.fields(), inst.fields());
    }
}
