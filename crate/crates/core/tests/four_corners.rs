//! The four corners instance under all three encodings.
//!
//! Expected Hamiltonians are rebuilt here term by term from their factored
//! forms, independently of the encoders.

use hoq_core::coloring::ColoringProblem;
use hoq_core::encode::{self, PairStrategy, QubitLabel, Scheme};
use hoq_core::gadget;
use hoq_core::poly::{Coeff, SpinAssignment, SpinPolynomial};

fn int(v: i64) -> Coeff {
    Coeff::from_integer(v)
}

/// Linear form `k + Σ c_i s_i` over `n` variables.
fn lin(n: usize, k: i64, parts: &[(usize, i64)]) -> SpinPolynomial {
    let mut p = SpinPolynomial::constant(n, int(k));
    for &(v, c) in parts {
        p.add_term(&[v], int(c)).unwrap();
    }
    p
}

fn mul(a: &SpinPolynomial, b: &SpinPolynomial) -> SpinPolynomial {
    a.checked_mul(b).unwrap()
}

fn add(a: &SpinPolynomial, b: &SpinPolynomial) -> SpinPolynomial {
    a.checked_add(b).unwrap()
}

const A0: usize = 0;
const A1: usize = 1;
const B0: usize = 2;
const B1: usize = 3;
const C0: usize = 4;
const C1: usize = 5;
const D0: usize = 6;
const D1: usize = 7;

/// (a0a1 + c0c1)(b0b1 + d0d1) + (a0 + c0)(b0 + d0) + (a1 + c1)(b1 + d1) + 4
fn h1_factored() -> SpinPolynomial {
    let n = 8;
    let ac = SpinPolynomial::from_terms(n, [(vec![A0, A1], int(1)), (vec![C0, C1], int(1))]).unwrap();
    let bd = SpinPolynomial::from_terms(n, [(vec![B0, B1], int(1)), (vec![D0, D1], int(1))]).unwrap();
    let mut h = mul(&ac, &bd);
    h = add(&h, &mul(&lin(n, 0, &[(A0, 1), (C0, 1)]), &lin(n, 0, &[(B0, 1), (D0, 1)])));
    h = add(&h, &mul(&lin(n, 0, &[(A1, 1), (C1, 1)]), &lin(n, 0, &[(B1, 1), (D1, 1)])));
    add(&h, &SpinPolynomial::constant(n, int(4)))
}

#[test]
fn binary_matches_factored_h1() {
    let prog = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    assert_eq!(prog.poly, h1_factored());
    assert_eq!(prog.num_qubits(), 8);
    assert_eq!(prog.poly.count_terms_of_degree(4), 4);
    assert_eq!(prog.poly.count_terms_of_degree(2), 8);
    assert_eq!(prog.poly.non_constant_terms().count(), 12);
    assert_eq!(prog.poly.constant_term(), int(4));
    assert_eq!(prog.poly.degree(), 4);
}

#[test]
fn h1_energy_examples() {
    let prog = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let proper = SpinAssignment::new(vec![1, 1, -1, 1, 1, -1, -1, -1]).unwrap();
    assert_eq!(prog.poly.evaluate(&proper).unwrap(), int(0));
    assert_eq!(prog.decode(&proper).unwrap().unwrap().colors(), &[0, 2, 1, 3]);
    assert_eq!(prog.poly.evaluate(&SpinAssignment::all_up(8)).unwrap(), int(16));

    let table = prog.poly.energy_table().unwrap();
    assert_eq!(table.min(), int(0));
    assert_eq!(table.max(), int(16));
    assert_eq!(table.ground_states().len(), 84);
    assert_eq!(table.mean(), int(4));
}

#[test]
fn binary_color_table() {
    let p = ColoringProblem::new(1, [], 4).unwrap();
    let prog = encode::encode_binary(&p).unwrap();
    for (spins, color) in [([1, 1], 0), ([1, -1], 1), ([-1, 1], 2), ([-1, -1], 3)] {
        let a = SpinAssignment::new(spins.to_vec()).unwrap();
        assert_eq!(prog.decode(&a).unwrap().unwrap().colors(), &[color]);
    }
}

#[test]
fn unary_matches_factored_form() {
    let prog = encode::encode_unary(&ColoringProblem::four_corners()).unwrap();
    let n = 16;
    // vertex v, color k -> 4v + k; regions a, b, c, d = 0..4
    let q = |v: usize, k: usize| 4 * v + k;
    let mut h = SpinPolynomial::zero(n);
    for k in 0..4 {
        let ac = lin(n, 2, &[(q(0, k), -1), (q(2, k), -1)]);
        let bd = lin(n, 2, &[(q(1, k), -1), (q(3, k), -1)]);
        h = add(&h, &mul(&ac, &bd));
    }
    for v in 0..4 {
        let s = lin(n, -2, &(0..4).map(|k| (q(v, k), 1)).collect::<Vec<_>>());
        h = add(&h, &mul(&s, &s));
    }
    assert_eq!(prog.poly, h);
    assert_eq!(prog.poly.count_terms_of_degree(2), 40);
    assert_eq!(prog.poly.degree(), 2);
    assert_eq!(gadget::compile_natural(&prog.poly).cx_count(), 80);
    assert_eq!(encode::predicted_cx_unary(4, 4, 4), 80);
}

#[test]
fn unary_ground_states_are_proper_one_hot_colorings() {
    let problem = ColoringProblem::four_corners();
    let prog = encode::encode_unary(&problem).unwrap();
    let table = prog.poly.energy_table().unwrap();
    let ground = table.ground_states();
    assert_eq!(table.min(), int(0));
    assert_eq!(ground.len(), 84);
    let mut decoded: Vec<_> = ground
        .iter()
        .map(|&i| prog.decode(&SpinAssignment::from_index(16, i)).unwrap().unwrap())
        .collect();
    assert!(decoded.iter().all(|c| problem.is_proper(c).unwrap()));
    decoded.sort();
    decoded.dedup();
    assert_eq!(decoded.len(), 84);
}

/// H_obj and H_con with A, B, C, D on qubits 8, 9, 10, 11.
fn reduced_factored(lambda: i64) -> SpinPolynomial {
    let n = 12;
    let (a, b, c, d) = (8, 9, 10, 11);
    let left = lin(n, 2, &[(A0, 1), (A1, 1), (C0, 1), (C1, 1), (a, -2), (c, -2)]);
    let right = lin(n, 2, &[(B0, 1), (B1, 1), (D0, 1), (D1, 1), (b, -2), (d, -2)]);
    let mut obj = mul(&left, &right);
    obj = add(&obj, &mul(&lin(n, 0, &[(A0, 1), (C0, 1)]), &lin(n, 0, &[(B0, 1), (D0, 1)])));
    obj = add(&obj, &mul(&lin(n, 0, &[(A1, 1), (C1, 1)]), &lin(n, 0, &[(B1, 1), (D1, 1)])));
    obj = add(&obj, &SpinPolynomial::constant(n, int(4)));

    let mut con = SpinPolynomial::constant(n, int(8));
    for (x, y, aux) in [(A0, A1, a), (B0, B1, b), (C0, C1, c), (D0, D1, d)] {
        let aux_part = mul(&lin(n, 0, &[(aux, -2)]), &lin(n, 1, &[(x, 1), (y, 1)]));
        con = add(&con, &aux_part);
        con = add(&con, &mul(&lin(n, 1, &[(x, 1)]), &lin(n, 1, &[(y, 1)])));
    }
    add(&obj, &con.scale(int(lambda)))
}

#[test]
fn reduction_reproduces_h2() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let (reduced, cert) = encode::reduce_order(&binary, int(3), &PairStrategy::MostFrequent).unwrap();
    let pairs: Vec<_> = cert.substitutions.iter().map(|s| (s.left, s.right, s.aux)).collect();
    assert_eq!(pairs, vec![(A0, A1, 8), (B0, B1, 9), (C0, C1, 10), (D0, D1, 11)]);
    assert_eq!(reduced.poly, reduced_factored(3));
    assert_eq!(reduced.scheme, Scheme::Reduced);
    assert_eq!(reduced.num_qubits(), 12);
    assert_eq!(reduced.labels[8], QubitLabel::Aux { left: A0, right: A1 });
    assert_eq!(reduced.poly.degree(), 2);
    assert_eq!(reduced.poly.count_terms_of_degree(2), 48);
    assert_eq!(gadget::compile_natural(&reduced.poly).cx_count(), 96);
    assert_eq!(cert.safe_lambda, Some(3));
    assert_eq!(cert.is_safe(), Some(true));
}

#[test]
fn explicit_pairs_match_default_strategy() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let fixed = PairStrategy::Fixed(vec![(A0, A1), (B0, B1), (C0, C1), (D0, D1)]);
    let (a, _) = encode::reduce_order(&binary, int(3), &fixed).unwrap();
    let (b, _) = encode::reduce_order(&binary, int(3), &PairStrategy::MostFrequent).unwrap();
    assert_eq!(a.poly, b.poly);
}

#[test]
fn reduction_is_sound_over_all_states() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let (reduced, cert) = encode::reduce_order(&binary, int(3), &PairStrategy::MostFrequent).unwrap();
    let mut ground = 0;
    for idx in 0..1 << 12 {
        let full = SpinAssignment::from_index(12, idx);
        let e = reduced.poly.evaluate(&full).unwrap();
        let h1 = binary.poly.evaluate(&cert.project(&full)).unwrap();
        if cert.is_consistent(&full) {
            assert_eq!(e, h1);
        } else {
            assert!(e > h1, "state {idx}");
        }
        if e == int(0) {
            ground += 1;
            assert!(cert.is_consistent(&full));
        }
    }
    assert_eq!(ground, 84);
}

#[test]
fn lambda_sweep() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let (_, cert) = encode::reduce_order(&binary, int(3), &PairStrategy::MostFrequent).unwrap();
    let verdicts: Vec<bool> = (1..=3)
        .map(|l| encode::lambda_preserves_ground_states(&binary.poly, &cert.objective, &cert.constraint, int(l)).unwrap())
        .collect();
    assert_eq!(verdicts, vec![false, false, true]);
    // Below the safe weight the reduced ground states drift.
    let (weak, _) = encode::reduce_order(&binary, int(2), &PairStrategy::MostFrequent).unwrap();
    assert_eq!(weak.poly.energy_table().unwrap().ground_states().len(), 180);
    let (weaker, _) = encode::reduce_order(&binary, int(1), &PairStrategy::MostFrequent).unwrap();
    assert_eq!(weaker.poly.energy_table().unwrap().min(), int(-32));
}

#[test]
fn lift_produces_consistent_ground_states() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let (reduced, cert) = encode::reduce_order(&binary, int(3), &PairStrategy::MostFrequent).unwrap();
    for g in binary.poly.energy_table().unwrap().ground_states() {
        let lifted = cert.lift(&SpinAssignment::from_index(8, g)).unwrap();
        assert!(cert.is_consistent(&lifted));
        assert_eq!(reduced.poly.evaluate(&lifted).unwrap(), int(0));
        assert_eq!(
            reduced.decode(&lifted).unwrap(),
            binary.decode(&SpinAssignment::from_index(8, g)).unwrap()
        );
    }
}

#[test]
fn gate_counts() {
    let problem = ColoringProblem::four_corners();
    let binary = encode::encode_binary(&problem).unwrap();
    let circ = gadget::compile_natural(&binary.poly);
    assert_eq!(circ.cx_count(), 40);
    assert_eq!(circ.rz_count(), 12);
    assert_eq!(gadget::ladder_cx_total(&binary.poly), 40);
    assert_eq!(encode::predicted_cx_binary_closed_form(4, 4, 2), 16);
}

#[test]
fn ordered_h1_cancels_at_least_eight() {
    let binary = encode::encode_binary(&ColoringProblem::four_corners()).unwrap();
    let order = gadget::order_terms(&binary.poly);
    let circ = gadget::compile(&binary.poly, &order).unwrap();
    assert_eq!(circ.cx_count(), 40);
    let cancelled = gadget::cancel_pass(&circ);
    assert!(cancelled.cx_count() <= 32, "got {}", cancelled.cx_count());
    for gamma in [0.0, 0.7, 2.3] {
        assert!(gadget::verify_circuit(&circ, &binary.poly, gamma).unwrap() < 1e-10);
        assert!(gadget::verify_circuit(&cancelled, &binary.poly, gamma).unwrap() < 1e-10);
    }
}
