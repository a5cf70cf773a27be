//! Python bindings: a `Problem` class wrapping one symmetry/representation
//! instance, plus small charge-arithmetic helpers. Reports, circuits, and
//! targets cross the boundary as JSON strings; parse them with `json.loads`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use acf_core::compile::{synth_block_unitary, synth_block_unitary_with_ancilla};
use acf_core::error::AcfError;
use acf_core::gates::Circuit;
use acf_core::problem::{ProblemSpec, ResourceBudget};
use acf_core::reach::{self, components, ComponentTable, RedistGenerator};
use acf_core::report::{run_analyze, run_simulate, run_verify, synth_report};
use acf_core::sector::{enumerate_sectors, phase_constraint_rank};
use acf_core::symmetry::{
    self, AbelianGroupSpec, BasisString, Charge, QuditRep,
};
use acf_core::target::{sample_block_target, BlockTarget};

fn to_py_err(err: AcfError) -> PyErr {
    match err {
        AcfError::Parse(_) | AcfError::Structure(_) | AcfError::InvalidTarget(_)
        | AcfError::InvalidGenerator(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// One analysis/synthesis instance: group moduli, per-letter charges, system
/// size n, and gate locality k.
#[pyclass]
struct Problem {
    spec: ProblemSpec,
    budget: ResourceBudget,
}

impl Problem {
    fn table(&self) -> PyResult<ComponentTable> {
        let sectors = enumerate_sectors(&self.spec.rep, &self.spec.group, self.spec.n, &self.budget)
            .map_err(to_py_err)?;
        components(&sectors, self.spec.k).map_err(to_py_err)
    }

    fn string(&self, letters: Vec<usize>) -> PyResult<BasisString> {
        BasisString::new(letters, &self.spec.rep).map_err(to_py_err)
    }
}

#[pymethods]
impl Problem {
    #[new]
    #[pyo3(signature = (moduli, letter_charges, n, k=2, dense_cap=None))]
    fn new(
        moduli: Vec<u64>,
        letter_charges: Vec<Vec<i64>>,
        n: usize,
        k: usize,
        dense_cap: Option<u128>,
    ) -> PyResult<Self> {
        let group = AbelianGroupSpec::new(moduli).map_err(to_py_err)?;
        let charges = letter_charges
            .into_iter()
            .map(|c| Charge::new(c, &group))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        let rep = QuditRep::new(charges, &group).map_err(to_py_err)?;
        let spec = ProblemSpec::new(group, rep, n, k).map_err(to_py_err)?;
        let budget = match dense_cap {
            Some(cap) => ResourceBudget::with_dense_cap(cap),
            None => ResourceBudget::default(),
        };
        Ok(Self { spec, budget })
    }

    /// Parse the same JSON document the CLI accepts.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = ProblemSpec::from_json(text).map_err(to_py_err)?;
        Ok(Self {
            spec,
            budget: ResourceBudget::default(),
        })
    }

    /// Full analysis report as JSON.
    fn analyze(&self) -> PyResult<String> {
        run_analyze(&self.spec, &self.budget)
            .map_err(to_py_err)
            .and_then(|r| to_json(&r))
    }

    /// Dense Lie-closure and commutant cross-checks as JSON.
    fn verify(&self) -> PyResult<String> {
        run_verify(&self.spec, &self.budget)
            .map_err(to_py_err)
            .and_then(|r| to_json(&r))
    }

    fn is_semi_universal(&self) -> PyResult<bool> {
        reach::is_semi_universal(&self.table()?).map_err(to_py_err)
    }

    fn commutant_dim(&self) -> PyResult<usize> {
        Ok(reach::commutant_dim(&self.table()?))
    }

    fn irreps_count(&self, k: usize) -> PyResult<usize> {
        symmetry::irreps_count(&self.spec.rep, &self.spec.group, k).map_err(to_py_err)
    }

    fn min_compression_length(&self) -> PyResult<usize> {
        symmetry::min_compression_length(&self.spec.rep, &self.spec.group, self.spec.n)
            .map_err(to_py_err)
    }

    fn phase_constraint_rank(&self) -> PyResult<usize> {
        phase_constraint_rank(&self.spec.rep, &self.spec.group, self.spec.n, self.spec.k)
            .map_err(to_py_err)
    }

    /// Waypoint strings of a charge-preserving bounded-move path.
    fn find_path(&self, r: Vec<usize>, r_prime: Vec<usize>) -> PyResult<Vec<Vec<usize>>> {
        let ct = self.table()?;
        let path = reach::find_path(&self.string(r)?, &self.string(r_prime)?, &ct)
            .map_err(to_py_err)?;
        Ok(path
            .waypoints
            .into_iter()
            .map(|w| w.letters().to_vec())
            .collect())
    }

    /// True when the generator pairs connect all equal-charge k-strings.
    fn check_hredist_transitive(
        &self,
        pairs: Vec<(Vec<usize>, Vec<usize>)>,
    ) -> PyResult<bool> {
        let gens = pairs
            .into_iter()
            .map(|(t, t_prime)| {
                Ok(RedistGenerator {
                    t: BasisString::new(t, &self.spec.rep).map_err(to_py_err)?,
                    t_prime: BasisString::new(t_prime, &self.spec.rep).map_err(to_py_err)?,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        reach::check_hredist_transitive(
            &gens,
            &self.spec.rep,
            &self.spec.group,
            self.spec.k,
            &self.budget,
        )
        .map_err(to_py_err)
    }

    /// Seeded Haar-per-block strict target as JSON.
    fn gen_target(&self, seed: u64) -> PyResult<String> {
        let ct = self.table()?;
        self.budget
            .check_dense(self.spec.rep.d(), self.spec.n)
            .map_err(to_py_err)?;
        Ok(sample_block_target(&ct, seed).to_json())
    }

    /// Compile a block target; returns (circuit_json, synth_report_json).
    #[pyo3(signature = (target_json, strict=true, ancilla=false))]
    fn synth(&self, target_json: &str, strict: bool, ancilla: bool) -> PyResult<(String, String)> {
        let ct = self.table()?;
        let target = BlockTarget::from_json(target_json, &ct).map_err(to_py_err)?;
        let (circuit, unrealized) = if ancilla {
            (
                synth_block_unitary_with_ancilla(&target, &ct).map_err(to_py_err)?,
                Vec::new(),
            )
        } else {
            let outcome = synth_block_unitary(&target, &ct, strict).map_err(to_py_err)?;
            (outcome.circuit, outcome.unrealized)
        };
        let report = synth_report(strict, ancilla, circuit.len(), &unrealized);
        Ok((circuit.to_json(), to_json(&report)?))
    }

    /// Re-simulate a circuit, optionally against a target; JSON report.
    #[pyo3(signature = (circuit_json, target_json=None))]
    fn simulate(&self, circuit_json: &str, target_json: Option<&str>) -> PyResult<String> {
        let circuit = Circuit::from_json(circuit_json).map_err(to_py_err)?;
        let target = match target_json {
            Some(text) => {
                let ct = self.table()?;
                Some(BlockTarget::from_json(text, &ct).map_err(to_py_err)?)
            }
            None => None,
        };
        run_simulate(&self.spec, &circuit, target.as_ref(), &self.budget)
            .map_err(to_py_err)
            .and_then(|r| to_json(&r))
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(moduli={:?}, d={}, n={}, k={})",
            self.spec.group.moduli(),
            self.spec.rep.d(),
            self.spec.n,
            self.spec.k
        )
    }
}

/// Componentwise charge sum, canonicalized under the moduli.
#[pyfunction]
fn charge_add(a: Vec<i64>, b: Vec<i64>, moduli: Vec<u64>) -> PyResult<Vec<i64>> {
    let group = AbelianGroupSpec::new(moduli).map_err(to_py_err)?;
    let ca = Charge::new(a, &group).map_err(to_py_err)?;
    let cb = Charge::new(b, &group).map_err(to_py_err)?;
    let sum = symmetry::charge_add(&ca, &cb, &group).map_err(to_py_err)?;
    Ok(sum.components().to_vec())
}

/// Total charge of a basis string under per-letter charges.
#[pyfunction]
fn total_charge(
    letters: Vec<usize>,
    letter_charges: Vec<Vec<i64>>,
    moduli: Vec<u64>,
) -> PyResult<Vec<i64>> {
    let group = AbelianGroupSpec::new(moduli).map_err(to_py_err)?;
    let charges = letter_charges
        .into_iter()
        .map(|c| Charge::new(c, &group))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py_err)?;
    let rep = QuditRep::new(charges, &group).map_err(to_py_err)?;
    let s = BasisString::new(letters, &rep).map_err(to_py_err)?;
    let total = symmetry::total_charge(&s, &rep, &group).map_err(to_py_err)?;
    Ok(total.components().to_vec())
}

#[pymodule]
fn acf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_function(wrap_pyfunction!(charge_add, m)?)?;
    m.add_function(wrap_pyfunction!(total_charge, m)?)?;
    Ok(())
}
