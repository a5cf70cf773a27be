//! The analyze / verify / simulate pipelines and their JSON documents.
//! Reports are deterministic byte-for-byte for identical inputs.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::compile::BlockPhase;
use crate::error::Result;
use crate::gates::Circuit;
use crate::oracle::{klocal_invariant_basis, lie_closure_dim, verify_commutant};
use crate::problem::{ProblemSpec, ResourceBudget};
use crate::reach::{commutant_dim, components, is_semi_universal, ComponentTable};
use crate::sector::{
    dim_full_symmetric_group, dim_gap_lower_bound, enumerate_sectors, phase_constraint_rank,
    predicted_dim,
};
use crate::sim::{block_phase_distance, check_invariance, circuit_unitary, DenseUnitary};
use crate::symmetry::{irreps_count, min_compression_length};
use crate::target::BlockTarget;
use crate::SCHEMA;

#[derive(Debug, Clone, Serialize)]
pub struct SectorEntry {
    pub charge: Vec<i64>,
    pub dim: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentEntry {
    pub charge: Vec<i64>,
    pub alpha: usize,
    pub dim: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub schema: String,
    pub moduli: Vec<u64>,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub sectors: Vec<SectorEntry>,
    pub irreps_n: usize,
    pub irreps_k: usize,
    pub l_min: usize,
    pub dim_gap_bound: u128,
    pub phase_rank: usize,
    pub dim_full: u128,
    pub predicted_dim: u128,
    pub predicted_dim_exact: bool,
    pub components: Vec<ComponentEntry>,
    /// Absent for k = 1 tables, where the criterion does not apply.
    pub semi_universal: Option<bool>,
    pub commutant_dim: usize,
}

fn component_entries(ct: &ComponentTable) -> Vec<ComponentEntry> {
    ct.components()
        .iter()
        .map(|c| ComponentEntry {
            charge: c.charge.components().to_vec(),
            alpha: c.alpha,
            dim: c.dim,
        })
        .collect()
}

pub fn run_analyze(spec: &ProblemSpec, budget: &ResourceBudget) -> Result<AnalyzeReport> {
    let table = enumerate_sectors(&spec.rep, &spec.group, spec.n, budget)?;
    let ct = components(&table, spec.k)?;
    let semi = if ct.is_string_level() {
        None
    } else {
        Some(is_semi_universal(&ct)?)
    };
    let rank = phase_constraint_rank(&spec.rep, &spec.group, spec.n, spec.k)?;
    let predicted = predicted_dim(
        &spec.rep,
        &spec.group,
        spec.n,
        spec.k,
        semi.unwrap_or(false),
        budget,
    )?;
    Ok(AnalyzeReport {
        schema: SCHEMA.to_string(),
        moduli: spec.group.moduli().to_vec(),
        d: spec.rep.d(),
        n: spec.n,
        k: spec.k,
        sectors: table
            .sectors()
            .iter()
            .map(|s| SectorEntry {
                charge: s.charge.components().to_vec(),
                dim: s.dim,
            })
            .collect(),
        irreps_n: irreps_count(&spec.rep, &spec.group, spec.n)?,
        irreps_k: irreps_count(&spec.rep, &spec.group, spec.k)?,
        l_min: min_compression_length(&spec.rep, &spec.group, spec.n)?,
        dim_gap_bound: dim_gap_lower_bound(&spec.rep, &spec.group, spec.n, spec.k)?,
        phase_rank: rank,
        dim_full: dim_full_symmetric_group(&table),
        predicted_dim: predicted.value,
        predicted_dim_exact: predicted.exact,
        components: component_entries(&ct),
        semi_universal: semi,
        commutant_dim: commutant_dim(&ct),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub n: usize,
    pub k: usize,
    pub closure_dim: usize,
    pub predicted_dim: u128,
    pub dim_full: u128,
    pub commutant_dim: usize,
    pub components: usize,
    pub semi_universal: Option<bool>,
    pub commutant_matches: bool,
    pub ok: bool,
}

/// Dense cross-checks: Lie-closure dimension against the predicted formula
/// and the solved commutant against the component count.
pub fn run_verify(spec: &ProblemSpec, budget: &ResourceBudget) -> Result<VerifyReport> {
    let table = enumerate_sectors(&spec.rep, &spec.group, spec.n, budget)?;
    let ct = components(&table, spec.k)?;
    let semi = if ct.is_string_level() {
        None
    } else {
        Some(is_semi_universal(&ct)?)
    };
    let basis = klocal_invariant_basis(&spec.rep, &spec.group, spec.n, spec.k, budget)?;
    let closure = lie_closure_dim(&basis, budget)?;
    let commutant = verify_commutant(&ct, &basis)?;
    let predicted = predicted_dim(
        &spec.rep,
        &spec.group,
        spec.n,
        spec.k,
        semi.unwrap_or(false),
        budget,
    )?;
    let dim_full = dim_full_symmetric_group(&table);
    let mut ok = commutant.ok;
    if semi == Some(true) && closure as u128 != predicted.value {
        ok = false;
    }
    if spec.k == spec.n && closure as u128 != dim_full {
        ok = false;
    }
    Ok(VerifyReport {
        schema: SCHEMA.to_string(),
        n: spec.n,
        k: spec.k,
        closure_dim: closure,
        predicted_dim: predicted.value,
        dim_full,
        commutant_dim: commutant.commutant_dim,
        components: ct.num_components(),
        semi_universal: semi,
        commutant_matches: commutant.matches_components,
        ok,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseEntry {
    pub charge: Vec<i64>,
    pub alpha: usize,
    pub phase: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub schema: String,
    pub n: usize,
    pub d: usize,
    pub gates: usize,
    pub unitary_hash: String,
    pub invariant_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<PhaseEntry>>,
}

/// SHA-256 over the raw little-endian bytes of the matrix entries.
pub fn unitary_hash(u: &DenseUnitary) -> String {
    let mut hasher = Sha256::new();
    hasher.update((u.nrows() as u64).to_le_bytes());
    for z in u.iter() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run_simulate(
    spec: &ProblemSpec,
    circuit: &Circuit,
    target: Option<&BlockTarget>,
    budget: &ResourceBudget,
) -> Result<SimulateReport> {
    circuit.validate(&spec.rep, &spec.group)?;
    let u = circuit_unitary(circuit, budget)?;
    let invariant_ok = check_invariance(&u, &spec.rep, &spec.group, circuit.n)?;
    let (block_distance, phases) = match target {
        None => (None, None),
        Some(t) => {
            let table = enumerate_sectors(&spec.rep, &spec.group, circuit.n, budget)?;
            let ct = components(&table, spec.k)?;
            let expected = t.assemble(&ct, budget)?;
            let bd = block_phase_distance(&u, &expected, &ct)?;
            let entries = ct
                .components()
                .iter()
                .zip(&bd.phases)
                .map(|(c, &phase)| PhaseEntry {
                    charge: c.charge.components().to_vec(),
                    alpha: c.alpha,
                    phase,
                })
                .collect();
            (Some(bd.max_distance), Some(entries))
        }
    };
    Ok(SimulateReport {
        schema: SCHEMA.to_string(),
        n: circuit.n,
        d: circuit.d,
        gates: circuit.len(),
        unitary_hash: unitary_hash(&u),
        invariant_ok,
        block_distance,
        phases,
    })
}

/// Lenient-synthesis side report listing per-block phases the circuit does
/// not realize.
#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub schema: String,
    pub strict: bool,
    pub ancilla: bool,
    pub gates: usize,
    pub unrealized_phases: Vec<PhaseEntry>,
}

pub fn synth_report(
    strict: bool,
    ancilla: bool,
    gates: usize,
    unrealized: &[BlockPhase],
) -> SynthReport {
    SynthReport {
        schema: SCHEMA.to_string(),
        strict,
        ancilla,
        gates,
        unrealized_phases: unrealized
            .iter()
            .map(|b| PhaseEntry {
                charge: b.charge.components().to_vec(),
                alpha: b.alpha,
                phase: b.phase,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{AbelianGroupSpec, QuditRep};

    fn spec_u1(n: usize, k: usize) -> ProblemSpec {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::qubit(&g).unwrap();
        ProblemSpec::new(g, rep, n, k).unwrap()
    }

    #[test]
    fn analyze_u1() {
        let budget = ResourceBudget::default();
        let report = run_analyze(&spec_u1(4, 2), &budget).unwrap();
        assert_eq!(report.semi_universal, Some(true));
        assert_eq!(report.commutant_dim, 5);
        assert_eq!(report.irreps_n, 5);
        assert_eq!(report.irreps_k, 3);
        assert_eq!(report.dim_gap_bound, 2);
        assert_eq!(report.l_min, 4);
        assert_eq!(report.dim_full, 70);
        assert_eq!(report.predicted_dim, 68);
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"schema\":\"acf-1\""));
    }

    #[test]
    fn analyze_z3_not_semi_universal_at_k2() {
        let budget = ResourceBudget::default();
        let g = AbelianGroupSpec::cyclic(3).unwrap();
        let rep = QuditRep::qubit(&g).unwrap();
        let spec = ProblemSpec::new(g, rep, 4, 2).unwrap();
        let report = run_analyze(&spec, &budget).unwrap();
        assert_eq!(report.semi_universal, Some(false));
        assert_eq!(report.components.len(), 5);
    }

    #[test]
    fn verify_u1_closure_19() {
        let budget = ResourceBudget::default();
        let report = run_verify(&spec_u1(3, 2), &budget).unwrap();
        assert_eq!(report.closure_dim, 19);
        assert_eq!(report.predicted_dim, 19);
        assert_eq!(report.commutant_dim, 4);
        assert!(report.ok);
    }

    #[test]
    fn simulate_empty_circuit() {
        let budget = ResourceBudget::default();
        let spec = spec_u1(2, 2);
        let c = Circuit::new(2, 2);
        let report = run_simulate(&spec, &c, None, &budget).unwrap();
        assert!(report.invariant_ok);
        assert!(report.block_distance.is_none());
        // deterministic hash
        let again = run_simulate(&spec, &c, None, &budget).unwrap();
        assert_eq!(report.unitary_hash, again.unitary_hash);
    }
}
