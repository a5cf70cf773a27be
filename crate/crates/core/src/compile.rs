//! Lowering block-diagonal targets to k-local symmetric gate sequences.
//!
//! Per block: two-level (Givens) factorization with a diagonal remainder,
//! Euler ZXZ angles per factor, and two-level rotations synthesized by the
//! controlled-conjugation recursion (for pairs within Hamming distance k)
//! or by conjugating along a reachability path (for distant pairs). A
//! single-ancilla route lifts arbitrary diagonal phase patterns.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{AcfError, Result};
use crate::gates::{Circuit, Gate, RotAxis};
use crate::linalg::unitarity_defect;
use crate::reach::{find_path, ComponentTable, RedistGenerator};
use crate::symmetry::{total_charge, AbelianGroupSpec, BasisString, Charge, QuditRep};
use crate::target::BlockTarget;

/// Generator axis for a two-level rotation target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairAxis {
    X,
    Y,
    Z,
}

const ZERO_ANGLE: f64 = 1e-14;

/// One two-level factor of a Givens decomposition: a special-unitary 2x2
/// acting on block coordinates (i, j).
#[derive(Debug, Clone)]
pub struct GivensFactor {
    pub i: usize,
    pub j: usize,
    pub matrix: [[Complex64; 2]; 2],
}

/// Factor a unitary into two-level special unitaries and a diagonal
/// remainder: block = T_1 * T_2 * ... * T_q * D. The remainder has unit
/// determinant whenever the input does.
pub fn givens_decompose(
    block: &Array2<Complex64>,
) -> Result<(Vec<GivensFactor>, Vec<Complex64>)> {
    let m = block.nrows();
    if block.ncols() != m {
        return Err(AcfError::InvalidTarget("block must be square".into()));
    }
    let defect = unitarity_defect(block);
    if defect > 1e-9 {
        return Err(AcfError::InvalidTarget(format!(
            "block is not unitary: defect {defect:.3e}"
        )));
    }
    let mut a = block.clone();
    let mut factors: Vec<GivensFactor> = Vec::new();
    for col in 0..m {
        for row in col + 1..m {
            let bottom = a[(row, col)];
            if bottom.norm() <= 1e-14 {
                continue;
            }
            let top = a[(col, col)];
            let rho = (top.norm_sqr() + bottom.norm_sqr()).sqrt();
            let alpha = top / rho;
            let beta = bottom / rho;
            // g zeroes a[(row, col)]; det(g) = |alpha|^2 + |beta|^2 = 1
            let g = [
                [alpha.conj(), beta.conj()],
                [-beta, alpha],
            ];
            for c in 0..m {
                let x = a[(col, c)];
                let y = a[(row, c)];
                a[(col, c)] = g[0][0] * x + g[0][1] * y;
                a[(row, c)] = g[1][0] * x + g[1][1] * y;
            }
            // T = g^dag, recorded in product order
            factors.push(GivensFactor {
                i: col,
                j: row,
                matrix: [
                    [g[0][0].conj(), g[1][0].conj()],
                    [g[0][1].conj(), g[1][1].conj()],
                ],
            });
        }
    }
    let remainder = (0..m).map(|i| a[(i, i)]).collect();
    Ok((factors, remainder))
}

/// Euler angles (a, b, c) with V = Zrot(a) * Xrot(b) * Zrot(c) for a
/// special-unitary 2x2, where Zrot(t) = diag(e^{it}, e^{-it}) and
/// Xrot(t) = exp(it X).
pub fn euler_zxz(v: &[[Complex64; 2]; 2]) -> (f64, f64, f64) {
    let u = v[0][0];
    let w = v[0][1];
    let b = w.norm().atan2(u.norm());
    let sum = if u.norm() > 1e-12 { u.arg() } else { 0.0 };
    let diff = if w.norm() > 1e-12 {
        w.arg() - std::f64::consts::FRAC_PI_2
    } else {
        0.0
    };
    ((sum + diff) / 2.0, b, (sum - diff) / 2.0)
}

struct PairContext<'a> {
    rep: &'a QuditRep,
    k: usize,
}

/// Circuit for exp(i*theta*G(r;r')) with G in {X, Y, Z}, for a pair at
/// Hamming distance at most k. Spectator qudits are folded in by the
/// controlled-conjugation recursion, doubling the rotation count per
/// spectator; Y and Z targets wrap the X core.
pub fn synth_pair_rotation(
    r: &BasisString,
    r_prime: &BasisString,
    axis: PairAxis,
    theta: f64,
    k: usize,
    rep: &QuditRep,
    group: &AbelianGroupSpec,
) -> Result<Circuit> {
    let n = r.len();
    if r_prime.len() != n {
        return Err(AcfError::Structure("strings differ in length".into()));
    }
    if r == r_prime {
        return Err(AcfError::InvalidTarget(
            "rotation endpoints must be distinct".into(),
        ));
    }
    let c1 = total_charge(r, rep, group)?;
    let c2 = total_charge(r_prime, rep, group)?;
    if c1 != c2 {
        return Err(AcfError::InvalidTarget(format!(
            "endpoints carry different charges: {c1} vs {c2}"
        )));
    }
    let dist = r.hamming_distance(r_prime);
    if dist > k {
        return Err(AcfError::Structure(format!(
            "Hamming distance {dist} exceeds k={k}; route via synth_path_rotation"
        )));
    }
    let ctx = PairContext { rep, k };
    pair_rotation(&ctx, r, r_prime, axis, theta)
}

fn pair_rotation(
    ctx: &PairContext,
    r: &BasisString,
    r_prime: &BasisString,
    axis: PairAxis,
    theta: f64,
) -> Result<Circuit> {
    let n = r.len();
    let d = ctx.rep.d();
    let mut circuit = Circuit::new(n, d);
    if theta.abs() < ZERO_ANGLE {
        return Ok(circuit);
    }
    match axis {
        PairAxis::X => emit_x_core(ctx, &mut circuit, r, r_prime, theta),
        PairAxis::Y => {
            let witness = witness_qudit(r, r_prime);
            let rb = r.letters()[witness];
            circuit.push(Gate::LetterPhase {
                qudit: witness,
                letter: rb,
                angle: -std::f64::consts::FRAC_PI_2,
            });
            emit_x_core(ctx, &mut circuit, r, r_prime, theta);
            circuit.push(Gate::LetterPhase {
                qudit: witness,
                letter: rb,
                angle: std::f64::consts::FRAC_PI_2,
            });
        }
        PairAxis::Z => {
            // With Y = i(|r><r'| - |r'><r|) the triple (X, Y, Z) is
            // left-handed: e^{-i pi/4 Y} X e^{+i pi/4 Y} = Z, so
            // exp(i t Z) = e^{-i pi/4 Y} exp(i t X) e^{+i pi/4 Y}.
            let pre = pair_rotation(ctx, r, r_prime, PairAxis::Y, std::f64::consts::FRAC_PI_4)?;
            circuit.extend(pre);
            emit_x_core(ctx, &mut circuit, r, r_prime, theta);
            let post = pair_rotation(ctx, r, r_prime, PairAxis::Y, -std::f64::consts::FRAC_PI_4)?;
            circuit.extend(post);
        }
    }
    Ok(circuit)
}

/// Lowest-index differing qudit.
fn witness_qudit(r: &BasisString, r_prime: &BasisString) -> usize {
    r.letters()
        .iter()
        .zip(r_prime.letters())
        .position(|(a, b)| a != b)
        .expect("distinct strings differ somewhere")
}

fn emit_x_core(
    ctx: &PairContext,
    circuit: &mut Circuit,
    r: &BasisString,
    r_prime: &BasisString,
    theta: f64,
) {
    let diff: Vec<usize> = r
        .letters()
        .iter()
        .zip(r_prime.letters())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect();
    let agree: Vec<usize> = (0..r.len()).filter(|i| !diff.contains(i)).collect();
    debug_assert!(diff.len() <= ctx.k);
    let witness = diff[0];
    let base_angle = theta / 2f64.powi(agree.len() as i32);
    let base = Gate::LocalRot {
        support: diff.clone(),
        s: diff.iter().map(|&q| r.letters()[q]).collect(),
        s_prime: diff.iter().map(|&q| r_prime.letters()[q]).collect(),
        axis: RotAxis::X,
        angle: base_angle,
    };
    emit_controlled_levels(circuit, &base, r, &agree, agree.len(), witness, 1.0);
}

/// exp(i s phi F_l) where F_l pins the first l spectators to their letters
/// in r: F_{l} = F_{l-1} - C F_{l-1} C unrolls to
/// [C, exp(-i s phi F_{l-1}), C, exp(+i s phi F_{l-1})] in application order.
fn emit_controlled_levels(
    circuit: &mut Circuit,
    base: &Gate,
    r: &BasisString,
    agree: &[usize],
    level: usize,
    witness: usize,
    sign: f64,
) {
    if level == 0 {
        let mut gate = base.clone();
        if let Gate::LocalRot { angle, .. } = &mut gate {
            *angle *= sign;
        }
        circuit.push(gate);
        return;
    }
    let control = agree[level - 1];
    let c_gate = Gate::PairControl {
        a: control,
        ra: r.letters()[control],
        b: witness,
        rb: r.letters()[witness],
    };
    circuit.push(c_gate.clone());
    emit_controlled_levels(circuit, base, r, agree, level - 1, witness, -sign);
    circuit.push(c_gate);
    emit_controlled_levels(circuit, base, r, agree, level - 1, witness, sign);
}

/// Circuit for exp(i*theta*G(r;r')) for arbitrarily distant pairs in one
/// component: the rotation is conjugated by quarter-turn Y rotations along
/// the edges of a reachability path, each edge synthesized as a pair
/// rotation.
pub fn synth_path_rotation(
    r: &BasisString,
    r_prime: &BasisString,
    axis: PairAxis,
    theta: f64,
    ct: &ComponentTable,
) -> Result<Circuit> {
    if r == r_prime {
        return Err(AcfError::InvalidTarget(
            "rotation endpoints must be distinct".into(),
        ));
    }
    let path = find_path(r, r_prime, ct)?;
    let ctx = PairContext {
        rep: &ct.rep,
        k: ct.k,
    };
    if theta.abs() < ZERO_ANGLE {
        return Ok(Circuit::new(r.len(), ct.rep.d()));
    }
    match axis {
        PairAxis::X | PairAxis::Y => path_rotation(&ctx, &path.waypoints, axis, theta),
        PairAxis::Z => {
            // Z from the left-handed su(2) sandwich at the endpoints, with
            // Y path parts.
            let mut circuit = path_rotation(
                &ctx,
                &path.waypoints,
                PairAxis::Y,
                std::f64::consts::FRAC_PI_4,
            )?;
            circuit.extend(path_rotation(&ctx, &path.waypoints, PairAxis::X, theta)?);
            circuit.extend(path_rotation(
                &ctx,
                &path.waypoints,
                PairAxis::Y,
                -std::f64::consts::FRAC_PI_4,
            )?);
            Ok(circuit)
        }
    }
}

fn path_rotation(
    ctx: &PairContext,
    waypoints: &[BasisString],
    axis: PairAxis,
    theta: f64,
) -> Result<Circuit> {
    debug_assert!(matches!(axis, PairAxis::X | PairAxis::Y));
    if waypoints.len() == 2 {
        return pair_rotation(ctx, &waypoints[0], &waypoints[1], axis, theta);
    }
    // exp(i t G(w0; wt)) =
    //   e^{-i pi/2 Y(w0;w1)} exp(i t G(w1; wt)) e^{+i pi/2 Y(w0;w1)}
    let mut circuit = pair_rotation(
        ctx,
        &waypoints[0],
        &waypoints[1],
        PairAxis::Y,
        std::f64::consts::FRAC_PI_2,
    )?;
    circuit.extend(path_rotation(ctx, &waypoints[1..], axis, theta)?);
    circuit.extend(pair_rotation(
        ctx,
        &waypoints[0],
        &waypoints[1],
        PairAxis::Y,
        -std::f64::consts::FRAC_PI_2,
    )?);
    Ok(circuit)
}

/// Residual determinant phase of one block under lenient compilation.
#[derive(Debug, Clone)]
pub struct BlockPhase {
    pub charge: Charge,
    pub alpha: usize,
    /// Phase per basis vector: the compiled block equals the target times
    /// e^{-i phase}.
    pub phase: f64,
}

#[derive(Debug)]
pub struct SynthOutcome {
    pub circuit: Circuit,
    pub unrealized: Vec<BlockPhase>,
}

/// Lower a block target to gates. Strict mode rejects blocks whose
/// determinant is not 1; lenient mode compiles the special part of each
/// block and reports the left-over per-block phase. Untouched components
/// receive no gates at all, so the circuit acts as the identity there.
pub fn synth_block_unitary(
    target: &BlockTarget,
    ct: &ComponentTable,
    strict: bool,
) -> Result<SynthOutcome> {
    if ct.k < 2 || ct.is_string_level() {
        return Err(AcfError::Structure(
            "block synthesis requires a component table with k >= 2".into(),
        ));
    }
    target.validate(strict)?;
    let mut circuit = Circuit::new(target.n, target.d);
    let mut unrealized = Vec::new();
    for ((charge, alpha), block) in &target.blocks {
        let index = ct
            .components()
            .iter()
            .position(|c| &c.charge == charge && c.alpha == *alpha)
            .ok_or_else(|| AcfError::InvalidTarget(format!("no component ({charge}, {alpha})")))?;
        let labels = ct.member_strings(index)?;
        let m = labels.len();
        let det = crate::linalg::determinant(block);
        let per_vector_phase = det.arg() / m as f64;
        let special = if per_vector_phase.abs() > 1e-12 {
            let corr = Complex64::from_polar(1.0, -per_vector_phase);
            unrealized.push(BlockPhase {
                charge: charge.clone(),
                alpha: *alpha,
                phase: per_vector_phase,
            });
            block.mapv(|z| z * corr)
        } else {
            block.clone()
        };
        let (factors, remainder) = givens_decompose(&special)?;
        // block = T_1 ... T_q D: apply D first, then T_q ... T_1.
        let mut running = 0.0f64;
        for i in 0..m.saturating_sub(1) {
            running += remainder[i].arg();
            if running.abs() < ZERO_ANGLE {
                continue;
            }
            let rot = synth_path_rotation(&labels[i], &labels[i + 1], PairAxis::Z, running, ct)?;
            circuit.extend(rot);
        }
        for factor in factors.iter().rev() {
            let (a, b, c) = euler_zxz(&factor.matrix);
            let (ri, rj) = (&labels[factor.i], &labels[factor.j]);
            if c.abs() >= ZERO_ANGLE {
                circuit.extend(synth_path_rotation(ri, rj, PairAxis::Z, c, ct)?);
            }
            if b.abs() >= ZERO_ANGLE {
                circuit.extend(synth_path_rotation(ri, rj, PairAxis::X, b, ct)?);
            }
            if a.abs() >= ZERO_ANGLE {
                circuit.extend(synth_path_rotation(ri, rj, PairAxis::Z, a, ct)?);
            }
        }
    }
    Ok(SynthOutcome {
        circuit,
        unrealized,
    })
}

/// Diagonal unitary on n qudits realized with 2-local symmetric gates and a
/// single ancilla in the reference letter 0. For every string r with a
/// nonzero residual phase, the generator |r><r| (x) |0><0| - |r'><r'| (x)
/// |s><s| is a distance-2 two-level Z on n+1 qudits; the string 0^n keeps
/// its phase via a global phase gate.
pub fn synth_diagonal_with_ancilla(
    phases: &BTreeMap<BasisString, f64>,
    n: usize,
    rep: &QuditRep,
    group: &AbelianGroupSpec,
) -> Result<Circuit> {
    let d = rep.d();
    let zero_string = BasisString::from_raw(vec![0; n]);
    for s in phases.keys() {
        if s.len() != n {
            return Err(AcfError::Structure(format!(
                "phase key {s} has wrong length for n={n}"
            )));
        }
        if s.letters().iter().any(|&l| l >= d) {
            return Err(AcfError::Structure(format!("phase key {s} has letters >= d")));
        }
    }
    let base_phase = phases.get(&zero_string).copied().unwrap_or(0.0);
    let mut circuit = Circuit::new(n + 1, d);
    for (r, &theta) in phases {
        if r == &zero_string {
            continue;
        }
        let residual = theta - base_phase;
        if residual.abs() < ZERO_ANGLE {
            continue;
        }
        let j = r
            .letters()
            .iter()
            .position(|&l| l != 0)
            .expect("non-zero string has a charged letter");
        let s_letter = r.letters()[j];
        let mut u = r.letters().to_vec();
        u.push(0);
        let mut v = r.letters().to_vec();
        v[j] = 0;
        v.push(s_letter);
        let rot = synth_pair_rotation(
            &BasisString::from_raw(u),
            &BasisString::from_raw(v),
            PairAxis::Z,
            residual,
            2,
            rep,
            group,
        )?;
        circuit.extend(rot);
    }
    circuit.push(Gate::GlobalPhase { angle: base_phase });
    Ok(circuit)
}

/// Lenient synthesis plus the ancilla route for the left-over block phases:
/// the result acts on n+1 qudits and reproduces the target exactly on
/// |psi> (x) |0>.
pub fn synth_block_unitary_with_ancilla(
    target: &BlockTarget,
    ct: &ComponentTable,
) -> Result<Circuit> {
    let outcome = synth_block_unitary(target, ct, false)?;
    let mut phases: BTreeMap<BasisString, f64> = BTreeMap::new();
    for bp in &outcome.unrealized {
        let index = ct
            .components()
            .iter()
            .position(|c| c.charge == bp.charge && c.alpha == bp.alpha)
            .expect("phase names a known component");
        for s in ct.member_strings(index)? {
            phases.insert(s, bp.phase);
        }
    }
    let mut circuit = Circuit::new(target.n + 1, target.d);
    for gate in outcome.circuit.gates {
        circuit.push(gate);
    }
    if !phases.is_empty() {
        let diag = synth_diagonal_with_ancilla(&phases, target.n, &ct.rep, &ct.group)?;
        circuit.extend(diag);
    }
    Ok(circuit)
}

#[derive(Debug, Clone)]
pub struct GateFamilyReport {
    pub ok: bool,
    /// Index and description of the first offending gate.
    pub offending: Option<(usize, String)>,
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

fn permutations(len: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in 0..len {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(len, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(len, &mut Vec::new(), &mut out);
    out
}

fn local_rot_matches_hredist(
    s: &[usize],
    s_prime: &[usize],
    hredist: &[RedistGenerator],
) -> bool {
    for gen in hredist {
        let l = gen.t.len();
        if l != s.len() {
            continue;
        }
        for perm in permutations(l) {
            let forward = (0..l)
                .all(|i| s[i] == gen.t.letters()[perm[i]] && s_prime[i] == gen.t_prime.letters()[perm[i]]);
            let backward = (0..l)
                .all(|i| s[i] == gen.t_prime.letters()[perm[i]] && s_prime[i] == gen.t.letters()[perm[i]]);
            if forward || backward {
                return true;
            }
        }
    }
    false
}

/// Check a circuit against the three semi-universality gate families:
/// quarter-turn letter phases, pair controls, and redistribution rotations
/// drawn from `hredist` up to support embedding. In lenient mode only
/// k-locality and the symmetry of each gate are required.
pub fn verify_gate_family(
    c: &Circuit,
    hredist: &[RedistGenerator],
    strict: bool,
    k: usize,
    rep: &QuditRep,
    group: &AbelianGroupSpec,
) -> GateFamilyReport {
    for (idx, gate) in c.gates.iter().enumerate() {
        if gate.support_size() > k {
            return GateFamilyReport {
                ok: false,
                offending: Some((idx, format!("support {} exceeds k={k}", gate.support_size()))),
            };
        }
        if let Err(e) = gate.validate(c.n, rep, group) {
            return GateFamilyReport {
                ok: false,
                offending: Some((idx, e.to_string())),
            };
        }
        if !strict {
            continue;
        }
        let offense = match gate {
            Gate::GlobalPhase { angle } => {
                if wrap_angle(*angle).abs() > 1e-9 {
                    Some("global phase with a nonzero angle".to_string())
                } else {
                    None
                }
            }
            Gate::LetterPhase { angle, .. } => {
                let w = wrap_angle(*angle).abs();
                if (w - std::f64::consts::FRAC_PI_2).abs() > 1e-9 {
                    Some(format!("letter phase angle {angle} is not +-pi/2"))
                } else {
                    None
                }
            }
            Gate::PairControl { .. } => None,
            Gate::LocalRot {
                s, s_prime, axis, ..
            } => {
                if *axis != RotAxis::X {
                    Some("rotation axis is not X".to_string())
                } else if !local_rot_matches_hredist(s, s_prime, hredist) {
                    Some("rotation endpoints not in the redistribution set".to_string())
                } else {
                    None
                }
            }
        };
        if let Some(msg) = offense {
            return GateFamilyReport {
                ok: false,
                offending: Some((idx, msg)),
            };
        }
    }
    GateFamilyReport {
        ok: true,
        offending: None,
    }
}
