//! Shared fixtures for the integration suites: the spec matrix every
//! cross-check runs over, and reference constructions that stay independent
//! of the gate pipeline.

use acf_core::compile::PairAxis;
use acf_core::problem::ProblemSpec;
use acf_core::symmetry::{AbelianGroupSpec, BasisString, Charge, QuditRep};
use ndarray::Array2;
use num_complex::Complex64;

pub fn u1_qubits(n: usize, k: usize) -> ProblemSpec {
    let g = AbelianGroupSpec::u1();
    let rep = QuditRep::qubit(&g).unwrap();
    ProblemSpec::new(g, rep, n, k).unwrap()
}

pub fn zp_qubits(p: u64, n: usize, k: usize) -> ProblemSpec {
    let g = AbelianGroupSpec::cyclic(p).unwrap();
    let rep = QuditRep::qubit(&g).unwrap();
    ProblemSpec::new(g, rep, n, k).unwrap()
}

pub fn trivial_qubits(n: usize, k: usize) -> ProblemSpec {
    let g = AbelianGroupSpec::trivial();
    let rep = QuditRep::new(vec![Charge::zero(&g); 2], &g).unwrap();
    ProblemSpec::new(g, rep, n, k).unwrap()
}

pub fn mixed_z2_u1(n: usize, k: usize) -> ProblemSpec {
    let g = AbelianGroupSpec::new(vec![2, 0]).unwrap();
    let rep = QuditRep::new(
        vec![
            Charge::new(vec![0, 0], &g).unwrap(),
            Charge::new(vec![1, 1], &g).unwrap(),
            Charge::new(vec![1, -1], &g).unwrap(),
        ],
        &g,
    )
    .unwrap();
    ProblemSpec::new(g, rep, n, k).unwrap()
}

pub fn z3_qutrits(n: usize, k: usize) -> ProblemSpec {
    let g = AbelianGroupSpec::cyclic(3).unwrap();
    let rep = QuditRep::new(
        (0..3)
            .map(|r| Charge::new(vec![r], &g).unwrap())
            .collect(),
        &g,
    )
    .unwrap();
    ProblemSpec::new(g, rep, n, k).unwrap()
}

/// Every instance the cross-check criteria sweep. All entries satisfy
/// d^n <= 256 so the dense oracle applies everywhere.
pub fn test_matrix() -> Vec<(String, ProblemSpec)> {
    let mut specs = Vec::new();
    for n in 3..=8 {
        specs.push((format!("u1-qubits-n{n}-k2"), u1_qubits(n, 2)));
    }
    specs.push(("u1-qubits-n4-k3".into(), u1_qubits(4, 3)));
    for n in 2..=4 {
        specs.push((format!("z2-qubits-n{n}-k2"), zp_qubits(2, n, 2)));
    }
    specs.push(("z2-qubits-n4-k3".into(), zp_qubits(2, 4, 3)));
    specs.push(("z3-qubits-n4-k2".into(), zp_qubits(3, 4, 2)));
    specs.push(("z3-qubits-n4-k3".into(), zp_qubits(3, 4, 3)));
    specs.push(("z3-qubits-n5-k3".into(), zp_qubits(3, 5, 3)));
    specs.push(("z4-qubits-n4-k2".into(), zp_qubits(4, 4, 2)));
    specs.push(("trivial-qubits-n3-k2".into(), trivial_qubits(3, 2)));
    specs.push(("z2xu1-qutrits-n3-k2".into(), mixed_z2_u1(3, 2)));
    specs.push(("z3-qutrits-n3-k2".into(), z3_qutrits(3, 2)));
    specs
}

/// Dense two-level exponential, built entry by entry: the reference the
/// compiled circuits are measured against.
pub fn two_level_exp(
    n: usize,
    d: usize,
    r: &BasisString,
    rp: &BasisString,
    axis: PairAxis,
    theta: f64,
) -> Array2<Complex64> {
    let size = d.pow(n as u32);
    let mut m = Array2::from_diag_elem(size, Complex64::new(1.0, 0.0));
    let (i, j) = (r.to_index(d), rp.to_index(d));
    match axis {
        PairAxis::X => {
            m[(i, i)] = Complex64::new(theta.cos(), 0.0);
            m[(j, j)] = Complex64::new(theta.cos(), 0.0);
            m[(i, j)] = Complex64::new(0.0, theta.sin());
            m[(j, i)] = Complex64::new(0.0, theta.sin());
        }
        PairAxis::Y => {
            m[(i, i)] = Complex64::new(theta.cos(), 0.0);
            m[(j, j)] = Complex64::new(theta.cos(), 0.0);
            m[(i, j)] = Complex64::new(-theta.sin(), 0.0);
            m[(j, i)] = Complex64::new(theta.sin(), 0.0);
        }
        PairAxis::Z => {
            m[(i, i)] = Complex64::from_polar(1.0, theta);
            m[(j, j)] = Complex64::from_polar(1.0, -theta);
        }
    }
    m
}

/// Two-qubit controlled rotation: identity on the control-0 subspace,
/// exp(i*theta*X(0;1)) on the target qubit when the control reads 1.
pub fn controlled_rx(theta: f64) -> Array2<Complex64> {
    let mut m = Array2::from_diag_elem(4, Complex64::new(1.0, 0.0));
    m[(2, 2)] = Complex64::new(theta.cos(), 0.0);
    m[(3, 3)] = Complex64::new(theta.cos(), 0.0);
    m[(2, 3)] = Complex64::new(0.0, theta.sin());
    m[(3, 2)] = Complex64::new(0.0, theta.sin());
    m
}

pub fn max_entry_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
