//! Dense verification backend: gate matrices, circuit unitaries, symmetry
//! checks, and block-phase-aware distances. Basis order is lexicographic
//! over product strings with qudit 0 most significant.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{AcfError, Result};
use crate::gates::{Circuit, Gate, RotAxis};
use crate::linalg::{eye, operator_norm};
use crate::problem::ResourceBudget;
use crate::reach::ComponentTable;
use crate::symmetry::{AbelianGroupSpec, BasisString, QuditRep};

pub type DenseUnitary = Array2<Complex64>;

fn letter_stride(n: usize, d: usize, qudit: usize) -> usize {
    d.pow((n - 1 - qudit) as u32)
}

fn letter_at(row: usize, n: usize, d: usize, qudit: usize) -> usize {
    (row / letter_stride(n, d, qudit)) % d
}

/// Apply a gate on the left: U <- G U. Gates are sparse in the product
/// basis, so this runs in O(d^2n) per gate instead of a dense matmul.
pub fn apply_gate_left(u: &mut DenseUnitary, gate: &Gate, n: usize, d: usize) {
    let size = u.nrows();
    match gate {
        Gate::GlobalPhase { angle } => {
            let phase = Complex64::from_polar(1.0, *angle);
            u.mapv_inplace(|z| z * phase);
        }
        Gate::LetterPhase {
            qudit,
            letter,
            angle,
        } => {
            let phase = Complex64::from_polar(1.0, *angle);
            for row in 0..size {
                if letter_at(row, n, d, *qudit) == *letter {
                    for col in 0..size {
                        u[(row, col)] *= phase;
                    }
                }
            }
        }
        Gate::PairControl { a, ra, b, rb } => {
            for row in 0..size {
                if letter_at(row, n, d, *a) == *ra && letter_at(row, n, d, *b) == *rb {
                    for col in 0..size {
                        u[(row, col)] = -u[(row, col)];
                    }
                }
            }
        }
        Gate::LocalRot {
            support,
            s,
            s_prime,
            axis,
            angle,
        } => {
            let cos = Complex64::new(angle.cos(), 0.0);
            let (to_partner, from_partner) = match axis {
                // exp(i t X) on the pair: [[cos, i sin], [i sin, cos]]
                RotAxis::X => (
                    Complex64::new(0.0, angle.sin()),
                    Complex64::new(0.0, angle.sin()),
                ),
                // exp(i t Y) on the pair: [[cos, -sin], [sin, cos]]
                RotAxis::Y => (
                    Complex64::new(-angle.sin(), 0.0),
                    Complex64::new(angle.sin(), 0.0),
                ),
            };
            let offset: isize = support
                .iter()
                .zip(s.iter().zip(s_prime.iter()))
                .map(|(&q, (&ls, &lp))| {
                    (lp as isize - ls as isize) * letter_stride(n, d, q) as isize
                })
                .sum();
            for row in 0..size {
                let matches_s = support
                    .iter()
                    .zip(s.iter())
                    .all(|(&q, &l)| letter_at(row, n, d, q) == l);
                if !matches_s {
                    continue;
                }
                let partner = (row as isize + offset) as usize;
                for col in 0..size {
                    let top = u[(row, col)];
                    let bottom = u[(partner, col)];
                    u[(row, col)] = cos * top + to_partner * bottom;
                    u[(partner, col)] = from_partner * top + cos * bottom;
                }
            }
        }
    }
}

/// Dense matrix of a single gate.
pub fn gate_matrix(gate: &Gate, n: usize, d: usize, budget: &ResourceBudget) -> Result<DenseUnitary> {
    let size = budget.check_dense(d, n)?;
    let mut u = eye(size);
    apply_gate_left(&mut u, gate, n, d);
    Ok(u)
}

/// Ordered product of the circuit's gates; later gates multiply on the left.
pub fn circuit_unitary(c: &Circuit, budget: &ResourceBudget) -> Result<DenseUnitary> {
    let size = budget.check_dense(c.d, c.n)?;
    let mut u = eye(size);
    for gate in &c.gates {
        apply_gate_left(&mut u, gate, c.n, c.d);
    }
    Ok(u)
}

/// Diagonal symmetry generators: one unitary per finite factor (the image of
/// that factor's generator) and one Hermitian charge operator per U(1)
/// factor. Commuting with all of them is equivalent to commuting with every
/// group element.
pub enum GeneratorDiag {
    Finite { modulus: u64, phases: Vec<Complex64> },
    Charge { values: Vec<f64> },
}

pub fn symmetry_generators(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
) -> Result<Vec<GeneratorDiag>> {
    let d = rep.d();
    let size = d.pow(n as u32);
    let mut charges_by_row: Vec<Vec<i64>> = Vec::with_capacity(size);
    for row in 0..size {
        let s = BasisString::from_index(row, n, d);
        // unreduced coordinate sums so U(1) charges keep their integer values
        let mut coords = vec![0i64; group.num_factors()];
        for &l in s.letters() {
            for (acc, &c) in coords.iter_mut().zip(rep.letter_charge(l)?.components()) {
                *acc += c;
            }
        }
        charges_by_row.push(coords);
    }
    let mut out = Vec::new();
    for (i, &m) in group.moduli().iter().enumerate() {
        if m >= 2 {
            let phases = charges_by_row
                .iter()
                .map(|q| {
                    Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * (q[i].rem_euclid(m as i64) as f64)
                            / (m as f64),
                    )
                })
                .collect();
            out.push(GeneratorDiag::Finite { modulus: m, phases });
        } else {
            let values = charges_by_row.iter().map(|q| q[i] as f64).collect();
            out.push(GeneratorDiag::Charge { values });
        }
    }
    Ok(out)
}

/// Worst commutator entry |[U, S]| over all symmetry generators S.
pub fn invariance_defect(
    u: &DenseUnitary,
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
) -> Result<f64> {
    let gens = symmetry_generators(rep, group, n)?;
    let size = u.nrows();
    if size != rep.d().pow(n as u32) {
        return Err(AcfError::Structure(format!(
            "matrix size {size} does not match d^n = {}",
            rep.d().pow(n as u32)
        )));
    }
    let mut worst = 0.0f64;
    for gen in &gens {
        for row in 0..size {
            for col in 0..size {
                let factor = match gen {
                    GeneratorDiag::Finite { phases, .. } => (phases[row] - phases[col]).norm(),
                    GeneratorDiag::Charge { values } => (values[row] - values[col]).abs(),
                };
                let defect = factor * u[(row, col)].norm();
                if defect > worst {
                    worst = defect;
                }
            }
        }
    }
    Ok(worst)
}

/// True iff U commutes with every symmetry generator to 1e-9.
pub fn check_invariance(
    u: &DenseUnitary,
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
) -> Result<bool> {
    Ok(invariance_defect(u, rep, group, n)? <= 1e-9)
}

/// Per-component phase-optimized distances between two block-diagonal
/// unitaries.
#[derive(Debug, Clone)]
pub struct BlockDistance {
    /// Worst phase-optimized operator-norm distance over components.
    pub max_distance: f64,
    /// Recovered phase per component, in component order.
    pub phases: Vec<f64>,
    /// Largest matrix element outside the block structure (both inputs).
    pub max_off_block: f64,
}

const OFF_BLOCK_TOL: f64 = 1e-8;

/// Minimize ||U_b - e^{i phi} V_b|| per component and report the worst
/// distance and all recovered phases. Inputs must be block-diagonal with
/// respect to the component table to 1e-8.
pub fn block_phase_distance(
    u: &DenseUnitary,
    v: &DenseUnitary,
    ct: &ComponentTable,
) -> Result<BlockDistance> {
    let d = ct.rep.d();
    let size = d.pow(ct.n as u32);
    if u.nrows() != size || v.nrows() != size {
        return Err(AcfError::Structure(format!(
            "expected {size}x{size} operands for the component table"
        )));
    }
    let mut component_of_row = vec![0usize; size];
    for row in 0..size {
        let s = BasisString::from_index(row, ct.n, d);
        component_of_row[row] = ct.component_of_string(&s)?;
    }
    let mut max_off_block = 0.0f64;
    for row in 0..size {
        for col in 0..size {
            if component_of_row[row] != component_of_row[col] {
                max_off_block = max_off_block
                    .max(u[(row, col)].norm())
                    .max(v[(row, col)].norm());
            }
        }
    }
    if max_off_block > OFF_BLOCK_TOL {
        return Err(AcfError::InvalidTarget(format!(
            "operands leak outside the invariant-subspace blocks: max off-block entry {max_off_block:.3e}"
        )));
    }
    let mut phases = Vec::with_capacity(ct.num_components());
    let mut max_distance = 0.0f64;
    for index in 0..ct.num_components() {
        let rows: Vec<usize> = (0..size)
            .filter(|&r| component_of_row[r] == index)
            .collect();
        let m = rows.len();
        let mut ub = Array2::zeros((m, m));
        let mut vb = Array2::zeros((m, m));
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in rows.iter().enumerate() {
                ub[(i, j)] = u[(r, c)];
                vb[(i, j)] = v[(r, c)];
            }
        }
        let overlap: Complex64 = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| vb[(i, j)].conj() * ub[(i, j)])
            .sum();
        let distance_at = |phi: f64| {
            let rot = Complex64::from_polar(1.0, phi);
            let diff = &ub - &vb.mapv(|z| z * rot);
            operator_norm(&diff)
        };
        let phi = if overlap.norm() > 1e-12 * m as f64 {
            overlap.arg()
        } else {
            // Degenerate overlap: coarse grid, then golden-section refine.
            let mut best = (f64::INFINITY, 0.0f64);
            for step in 0..64 {
                let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * step as f64 / 64.0;
                let dist = distance_at(phi);
                if dist < best.0 {
                    best = (dist, phi);
                }
            }
            let span = 2.0 * std::f64::consts::PI / 64.0;
            golden_section(best.1 - span, best.1 + span, &distance_at)
        };
        let dist = distance_at(phi);
        phases.push(wrap_angle(phi));
        if dist > max_distance {
            max_distance = dist;
        }
    }
    Ok(BlockDistance {
        max_distance,
        phases,
        max_off_block,
    })
}

fn wrap_angle(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = phi % two_pi;
    if x <= -std::f64::consts::PI {
        x += two_pi;
    } else if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}

fn golden_section(mut lo: f64, mut hi: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    let ratio = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}
