mod common;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use hoq_core::coloring::ColoringProblem;
use hoq_core::encode::{self, PairStrategy};
use hoq_core::gadget::{self, Gate};
use hoq_core::poly::{self, Coeff, QuboPolynomial, SpinAssignment, SpinPolynomial};
use hoq_core::qaoa::{QaoaParams, QaoaProblem, StateVector};

use common::*;

fn arb_coeff() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, prop::sample::select(vec![1i64, 1, 1, 2, 3])).prop_map(|(n, d)| Coeff::new(n, d))
}

prop_compose! {
    fn arb_poly(max_vars: usize, max_terms: usize)
        (n in 1..=max_vars)
        (terms in prop::collection::vec((0u32..(1 << n), arb_coeff()), 0..=max_terms), n in Just(n))
        -> SpinPolynomial
    {
        let terms = terms
            .into_iter()
            .map(|(mask, c)| ((0..n).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>(), c));
        SpinPolynomial::from_terms(n, terms).unwrap()
    }
}

fn arb_pair(max_vars: usize) -> impl Strategy<Value = (SpinPolynomial, SpinPolynomial)> {
    (1..=max_vars).prop_flat_map(|n| {
        let one = move || {
            prop::collection::vec((0u32..(1 << n), arb_coeff()), 0..=6).prop_map(move |terms| {
                let terms = terms
                    .into_iter()
                    .map(|(mask, c)| ((0..n).filter(|b| mask >> b & 1 == 1).collect::<Vec<_>>(), c));
                SpinPolynomial::from_terms(n, terms).unwrap()
            })
        };
        (one(), one())
    })
}

fn all_assignments(n: usize) -> impl Iterator<Item = SpinAssignment> {
    (0..1usize << n).map(move |i| SpinAssignment::from_index(n, i))
}

/// Small simple graphs: up to 4 vertices, 2..=5 colors.
fn arb_problem() -> impl Strategy<Value = ColoringProblem> {
    (1usize..=4, 2usize..=5).prop_flat_map(|(n, c)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e);
            ColoringProblem::new(n, edges, c).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_stay_multilinear((p, q) in arb_pair(6)) {
        let prod = p.checked_mul(&q).unwrap();
        for (vars, c) in prod.terms() {
            prop_assert!(vars.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(vars.iter().all(|&v| v < prod.num_vars()));
            prop_assert!(c != Coeff::from_integer(0));
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism((p, q) in arb_pair(7)) {
        let prod = p.checked_mul(&q).unwrap();
        let sum = p.checked_add(&q).unwrap();
        for a in all_assignments(p.num_vars()) {
            let (x, y) = (p.evaluate(&a).unwrap(), q.evaluate(&a).unwrap());
            prop_assert_eq!(prod.evaluate(&a).unwrap(), x * y);
            prop_assert_eq!(sum.evaluate(&a).unwrap(), x + y);
        }
    }

    #[test]
    fn energy_table_matches_evaluation(p in arb_poly(8, 10)) {
        let table = p.energy_table().unwrap();
        for (i, a) in all_assignments(p.num_vars()).enumerate() {
            prop_assert_eq!(table.get(i), p.evaluate(&a).unwrap());
        }
        prop_assert_eq!(table.mean(), p.constant_term());
    }

    #[test]
    fn qubo_change_of_variable_is_pointwise(p in arb_poly(7, 8)) {
        let q = poly::ising_to_qubo(&p);
        prop_assert_eq!(&poly::qubo_to_ising(&q), &p);
        for a in all_assignments(p.num_vars()) {
            let bits: Vec<u8> = a.values().iter().map(|&s| u8::from(s < 0)).collect();
            prop_assert_eq!(q.evaluate(&bits).unwrap(), p.evaluate(&a).unwrap());
        }
    }

    #[test]
    fn qubo_round_trip(terms in prop::collection::vec((0u32..64, arb_coeff()), 0..8)) {
        let q = QuboPolynomial::from_terms(
            6,
            terms.into_iter().map(|(m, c)| ((0..6).filter(|b| m >> b & 1 == 1).collect::<Vec<usize>>(), c)),
        ).unwrap();
        prop_assert_eq!(poly::ising_to_qubo(&poly::qubo_to_ising(&q)), q);
    }

    #[test]
    fn substitution_agrees_where_replacement_holds(p in arb_poly(6, 10)) {
        prop_assume!(p.num_vars() >= 2);
        // s0 s1 -> 1 + s0 + s1 - 2A, with A a fresh variable
        let n = p.num_vars() + 1;
        let widened = p.with_num_vars(n).unwrap();
        let aux = n - 1;
        let repl = SpinPolynomial::from_terms(n, [
            (vec![], Coeff::from_integer(1)),
            (vec![0], Coeff::from_integer(1)),
            (vec![1], Coeff::from_integer(1)),
            (vec![aux], Coeff::from_integer(-2)),
        ]).unwrap();
        let out = widened.substitute_pair(0, 1, &repl).unwrap();
        for a in all_assignments(n) {
            let s = a.values();
            if s[0] * s[1] == 1 + s[0] + s[1] - 2 * s[aux] {
                prop_assert_eq!(out.evaluate(&a).unwrap(), widened.evaluate(&a).unwrap());
            }
        }
    }

    #[test]
    fn compiled_cx_count_is_ladder_total(p in arb_poly(8, 12)) {
        let circ = gadget::compile_natural(&p);
        let expected: usize = p.non_constant_terms().map(|(v, _)| 2 * (v.len() - 1)).sum();
        prop_assert_eq!(circ.cx_count(), expected);
        let ordered = gadget::compile(&p, &gadget::order_terms(&p)).unwrap();
        prop_assert_eq!(ordered.cx_count(), expected);
    }

    #[test]
    fn cancellation_is_idempotent_and_sound(p in arb_poly(7, 12), gamma in -7.0f64..7.0) {
        let circ = gadget::compile(&p, &gadget::order_terms(&p)).unwrap();
        let once = gadget::cancel_pass(&circ);
        prop_assert_eq!(&gadget::cancel_pass(&once), &once);
        prop_assert!(once.cx_count() <= circ.cx_count());
        prop_assert!(gadget::verify_circuit(&circ, &p, gamma).unwrap() < 1e-9);
        prop_assert!(gadget::verify_circuit(&once, &p, gamma).unwrap() < 1e-9);
    }

    #[test]
    fn encodings_are_exact(problem in arb_problem()) {
        let proper = problem.count_proper().unwrap();
        let c = problem.colors();
        let l = encode::bits_for_colors(c);

        let binary = encode::encode_binary(&problem).unwrap();
        prop_assert_eq!(binary.num_qubits(), problem.num_vertices() * l);
        if problem.num_edges() > 0 {
            prop_assert_eq!(binary.poly.degree(), 2 * l);
        }
        check_encoding(&problem, &binary, proper)?;

        let unary = encode::encode_unary(&problem).unwrap();
        prop_assert!(unary.poly.degree() <= 2);
        let predicted = encode::predicted_cx_unary(
            problem.num_vertices() as u64,
            problem.num_edges() as u64,
            c as u64,
        );
        prop_assert_eq!(gadget::compile_natural(&unary.poly).cx_count() as u64, predicted);
        if unary.num_qubits() <= 16 {
            check_encoding(&problem, &unary, proper)?;
        }

        let (_, cert) = encode::reduce_order(&binary, Coeff::from_integer(1), &PairStrategy::MostFrequent).unwrap();
        if let Some(safe) = cert.safe_lambda {
            let (reduced, _) = encode::reduce_order(&binary, Coeff::from_integer(safe), &PairStrategy::MostFrequent).unwrap();
            prop_assert!(reduced.poly.degree() <= 2);
            check_encoding(&problem, &reduced, proper)?;
        }
    }

    #[test]
    fn closed_form_matches_summation(l in 2u32..=6, n in 0i64..200, e in 0i64..400) {
        prop_assert_eq!(
            encode::predicted_cx_binary_closed_form(n, e, l),
            encode::predicted_cx_binary_sum(n, e, l)
        );
    }

    #[test]
    fn norm_is_preserved(p in arb_poly(6, 8), angles in prop::collection::vec(-4.0f64..4.0, 0..=6)) {
        let layers = angles.len() / 2;
        let params = QaoaParams::new(angles[..layers].to_vec(), angles[layers..2 * layers].to_vec()).unwrap();
        let problem = QaoaProblem::new(&p.energy_table().unwrap()).unwrap();
        let state = problem.evolve(&params);
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn phase_only_schedule_keeps_uniform_probabilities(p in arb_poly(6, 8), gammas in prop::collection::vec(-9.0f64..9.0, 1..4)) {
        let params = QaoaParams::new(vec![0.0; gammas.len()], gammas).unwrap();
        let problem = QaoaProblem::new(&p.energy_table().unwrap()).unwrap();
        let state = problem.evolve(&params);
        let uniform = 1.0 / (1usize << p.num_vars()) as f64;
        for i in 0..1usize << p.num_vars() {
            prop_assert!((state.probability(i) - uniform).abs() < 1e-12);
        }
    }

    #[test]
    fn simulator_matches_dense_exponentials(p in arb_poly(4, 6), angles in prop::collection::vec(-3.0f64..3.0, 2..=6)) {
        let layers = angles.len() / 2;
        let (betas, gammas) = (angles[..layers].to_vec(), angles[layers..2 * layers].to_vec());
        let n = p.num_vars();
        let terms: Vec<(Vec<usize>, f64)> = p.terms().map(|(v, c)| (v.to_vec(), c.to_f64().unwrap())).collect();
        let h = dense_hamiltonian(n, &terms);
        let x = mixer_hamiltonian(n);
        let mut state: Vec<Complex64> = StateVector::uniform(n).amplitudes().to_vec();
        for (&b, &g) in betas.iter().zip(&gammas) {
            state = h.scale(Complex64::new(0.0, -g)).expm().apply(&state);
            state = x.scale(Complex64::new(0.0, -b)).expm().apply(&state);
        }
        let problem = QaoaProblem::new(&p.energy_table().unwrap()).unwrap();
        let got = problem.evolve(&QaoaParams::new(betas, gammas).unwrap());
        prop_assert!(max_deviation(got.amplitudes(), &state) < 1e-8);
    }

    #[test]
    fn compiled_circuits_match_dense_unitary(p in arb_poly(4, 6), gamma in -3.0f64..3.0) {
        let n = p.num_vars();
        let circ = gadget::cancel_pass(&gadget::compile(&p, &gadget::order_terms(&p)).unwrap());
        let mut u = Mat::identity(1 << n);
        for g in circ.gates() {
            let m = match g {
                Gate::Cx { control, target } => cx(n, *control, *target),
                Gate::Rz { qubit, multiplier } => rz(n, *qubit, multiplier.to_f64().unwrap() * gamma),
            };
            u = m.mul(&u);
        }
        u = u.scale(Complex64::from_polar(1.0, -circ.global_phase().to_f64().unwrap() * gamma));
        let terms: Vec<(Vec<usize>, f64)> = p.terms().map(|(v, c)| (v.to_vec(), c.to_f64().unwrap())).collect();
        let target = dense_hamiltonian(n, &terms).scale(Complex64::new(0.0, -gamma)).expm();
        let worst = u.data.iter().zip(&target.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-9, "deviation {worst}");
    }
}

fn check_encoding(
    problem: &ColoringProblem,
    prog: &hoq_core::IsingProgram,
    proper: u64,
) -> Result<(), TestCaseError> {
    let table = prog.poly.energy_table().unwrap();
    let ground = table.ground_states();
    let zero = Coeff::from_integer(0);
    prop_assert_eq!(table.min() == zero, proper > 0);
    if proper == 0 {
        prop_assert!(table.min() > zero);
        return Ok(());
    }
    let mut decoded = Vec::new();
    for &g in &ground {
        let col = prog.decode(&SpinAssignment::from_index(prog.num_qubits(), g)).unwrap();
        let col = col.expect("ground state decodes");
        prop_assert!(problem.is_proper(&col).unwrap());
        decoded.push(col);
    }
    decoded.sort();
    decoded.dedup();
    prop_assert_eq!(decoded.len() as u64, proper);
    prop_assert_eq!(ground.len() as u64, proper);
    Ok(())
}

#[test]
fn illegal_state_penalty_partition() {
    for c in 2..=32usize {
        let l = encode::bits_for_colors(c);
        let msps = encode::multi_state_penalties(c, l).unwrap();
        assert_eq!(msps.len() as u32, ((1usize << l) - c).count_ones());
        let smallest = msps.iter().map(|m| 1i64 << m.fixed.len()).min();
        let penalty = encode::illegal_state_penalty(c, 0, l, l).unwrap();
        for color in 0..1usize << l {
            // color index bits, MSB on qubit 0
            let spins = (0..l).map(|k| if color >> (l - 1 - k) & 1 == 1 { -1 } else { 1 }).collect();
            let v = penalty.evaluate(&SpinAssignment::new(spins).unwrap()).unwrap();
            if color < c {
                assert_eq!(v, Coeff::from_integer(0), "c={c} color={color}");
            } else {
                assert!(v >= Coeff::from_integer(smallest.unwrap()), "c={c} color={color}");
            }
        }
    }
}

#[test]
fn phase_is_periodic_in_gamma_for_integer_hamiltonians() {
    let prog = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let problem = QaoaProblem::new(&prog.poly.energy_table().unwrap()).unwrap();
    let tau = std::f64::consts::TAU;
    let a = problem.run(&QaoaParams::new(vec![0.4, 1.3], vec![0.9, 2.2]).unwrap()).unwrap();
    let b = problem.run(&QaoaParams::new(vec![0.4, 1.3], vec![0.9 + tau, 2.2 - tau]).unwrap()).unwrap();
    assert!((a.expectation - b.expectation).abs() < 1e-9);
    assert!((a.success_probability - b.success_probability).abs() < 1e-9);
}
