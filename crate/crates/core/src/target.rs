//! Block targets: one dense unitary per invariant subspace, with JSON I/O
//! and a seeded Haar-per-block sampler for reproducible test inputs.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{AcfError, Result};
use crate::linalg::{determinant, unitarity_defect};
use crate::problem::ResourceBudget;
use crate::reach::ComponentTable;
use crate::symmetry::Charge;
use crate::SCHEMA;

pub const UNITARITY_TOL: f64 = 1e-9;
pub const DET_TOL: f64 = 1e-9;

/// Key of one invariant subspace.
pub type BlockKey = (Charge, usize);

/// A symmetric target given block by block. Basis order inside each block is
/// lexicographic over member strings.
#[derive(Debug, Clone)]
pub struct BlockTarget {
    pub n: usize,
    pub d: usize,
    pub blocks: BTreeMap<BlockKey, Array2<Complex64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockDoc {
    charge: Vec<i64>,
    alpha: usize,
    dim: usize,
    /// Row-major [re, im] pairs.
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockTargetDoc {
    schema: String,
    n: usize,
    d: usize,
    blocks: Vec<BlockDoc>,
}

impl BlockTarget {
    pub fn to_json(&self) -> String {
        let blocks = self
            .blocks
            .iter()
            .map(|((charge, alpha), m)| BlockDoc {
                charge: charge.components().to_vec(),
                alpha: *alpha,
                dim: m.nrows(),
                matrix: (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect(),
            })
            .collect();
        let doc = BlockTargetDoc {
            schema: SCHEMA.to_string(),
            n: self.n,
            d: self.d,
            blocks,
        };
        serde_json::to_string_pretty(&doc).expect("target serialization is infallible")
    }

    /// Parse against a component table; every block must name an existing
    /// component and match its dimension.
    pub fn from_json(text: &str, ct: &ComponentTable) -> Result<Self> {
        let doc: BlockTargetDoc =
            serde_json::from_str(text).map_err(|e| AcfError::Parse(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(AcfError::Parse(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                doc.schema
            )));
        }
        if doc.n != ct.n || doc.d != ct.rep.d() {
            return Err(AcfError::InvalidTarget(format!(
                "target is for n={}, d={}; component table has n={}, d={}",
                doc.n,
                doc.d,
                ct.n,
                ct.rep.d()
            )));
        }
        let mut blocks = BTreeMap::new();
        for b in doc.blocks {
            let charge = Charge::new(b.charge.clone(), &ct.group)?;
            let info = ct
                .components()
                .iter()
                .find(|c| c.charge == charge && c.alpha == b.alpha)
                .ok_or_else(|| {
                    AcfError::InvalidTarget(format!(
                        "no component with charge {charge} and alpha {}",
                        b.alpha
                    ))
                })?;
            if info.dim != b.dim as u128 || b.matrix.len() != b.dim {
                return Err(AcfError::InvalidTarget(format!(
                    "block ({charge}, {}) has dim {} but the component has dim {}",
                    b.alpha, b.dim, info.dim
                )));
            }
            let mut m = Array2::zeros((b.dim, b.dim));
            for (r, row) in b.matrix.iter().enumerate() {
                if row.len() != b.dim {
                    return Err(AcfError::InvalidTarget("ragged block matrix".into()));
                }
                for (c, &[re, im]) in row.iter().enumerate() {
                    m[(r, c)] = Complex64::new(re, im);
                }
            }
            blocks.insert((charge, b.alpha), m);
        }
        Ok(Self {
            n: doc.n,
            d: doc.d,
            blocks,
        })
    }

    /// Unitarity of every block, and in strict mode unit determinants. In
    /// lenient mode returns the determinant phase of each block.
    pub fn validate(&self, strict: bool) -> Result<Vec<(BlockKey, f64)>> {
        let mut det_phases = Vec::new();
        let mut violations = Vec::new();
        for (key, m) in &self.blocks {
            let defect = unitarity_defect(m);
            if defect > UNITARITY_TOL {
                return Err(AcfError::InvalidTarget(format!(
                    "block ({}, {}) is not unitary: defect {defect:.3e}",
                    key.0, key.1
                )));
            }
            let det = determinant(m);
            if (det - Complex64::new(1.0, 0.0)).norm() > DET_TOL {
                violations.push(format!(
                    "block ({}, {}): det = {:.6} + {:.6}i",
                    key.0, key.1, det.re, det.im
                ));
            }
            det_phases.push((key.clone(), det.arg()));
        }
        if strict && !violations.is_empty() {
            return Err(AcfError::PhaseObstruction(violations.join("; ")));
        }
        Ok(det_phases)
    }

    /// Assemble the full dense unitary: blocks on their member strings,
    /// identity on components the target does not name.
    pub fn assemble(&self, ct: &ComponentTable, budget: &ResourceBudget) -> Result<Array2<Complex64>> {
        let size = budget.check_dense(self.d, self.n)?;
        let mut u = crate::linalg::eye(size);
        for ((charge, alpha), m) in &self.blocks {
            let index = ct
                .components()
                .iter()
                .position(|c| &c.charge == charge && c.alpha == *alpha)
                .ok_or_else(|| {
                    AcfError::InvalidTarget(format!("no component ({charge}, {alpha})"))
                })?;
            let rows: Vec<usize> = ct
                .member_strings(index)?
                .iter()
                .map(|s| s.to_index(self.d))
                .collect();
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in rows.iter().enumerate() {
                    u[(r, c)] = m[(i, j)];
                }
            }
        }
        Ok(u)
    }
}

/// Haar-random unitary via Ginibre + Gram-Schmidt QR with positive diagonal.
fn haar_unitary(m: usize, rng: &mut ChaCha8Rng) -> Array2<Complex64> {
    let mut a = Array2::zeros((m, m));
    for r in 0..m {
        for c in 0..m {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            a[(r, c)] = Complex64::new(re, im);
        }
    }
    // column-wise modified Gram-Schmidt, two passes
    for col in 0..m {
        for _ in 0..2 {
            for prev in 0..col {
                let mut inner = Complex64::default();
                for r in 0..m {
                    inner += a[(r, prev)].conj() * a[(r, col)];
                }
                for r in 0..m {
                    let sub = inner * a[(r, prev)];
                    a[(r, col)] -= sub;
                }
            }
        }
        let norm: f64 = (0..m).map(|r| a[(r, col)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..m {
            a[(r, col)] /= norm;
        }
    }
    a
}

/// Haar-random special unitary: Haar unitary with the determinant phase
/// spread evenly over the diagonal.
pub fn haar_special_unitary(m: usize, rng: &mut ChaCha8Rng) -> Array2<Complex64> {
    let mut u = haar_unitary(m, rng);
    let det = determinant(&u);
    let correction = Complex64::from_polar(1.0, -det.arg() / m as f64);
    u.mapv_inplace(|z| z * correction);
    u
}

/// Seeded strict target: one Haar special unitary per component.
pub fn sample_block_target(ct: &ComponentTable, seed: u64) -> BlockTarget {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = BTreeMap::new();
    for info in ct.components() {
        let m = info.dim as usize;
        blocks.insert(
            (info.charge.clone(), info.alpha),
            haar_special_unitary(m, &mut rng),
        );
    }
    BlockTarget {
        n: ct.n,
        d: ct.rep.d(),
        blocks,
    }
}

/// Seeded target with an arbitrary phase on each block determinant; used to
/// exercise lenient mode and the ancilla route.
pub fn sample_block_target_with_phases(ct: &ComponentTable, seed: u64) -> BlockTarget {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = BTreeMap::new();
    for info in ct.components() {
        let m = info.dim as usize;
        let mut u = haar_special_unitary(m, &mut rng);
        let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let phase = Complex64::from_polar(1.0, phi / m as f64);
        u.mapv_inplace(|z| z * phase);
        blocks.insert((info.charge.clone(), info.alpha), u);
    }
    BlockTarget {
        n: ct.n,
        d: ct.rep.d(),
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::components;
    use crate::sector::enumerate_sectors;
    use crate::symmetry::{AbelianGroupSpec, QuditRep};

    fn table() -> ComponentTable {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::qubit(&g).unwrap();
        let t = enumerate_sectors(&rep, &g, 3, &ResourceBudget::default()).unwrap();
        components(&t, 2).unwrap()
    }

    #[test]
    fn sampler_is_seeded_and_special() {
        let ct = table();
        let t1 = sample_block_target(&ct, 42);
        let t2 = sample_block_target(&ct, 42);
        for (k, m) in &t1.blocks {
            let other = &t2.blocks[k];
            assert_eq!(m, other);
            assert!(unitarity_defect(m) < 1e-12);
            let det = determinant(m);
            assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
        let t3 = sample_block_target(&ct, 43);
        assert_ne!(t1.blocks, t3.blocks);
    }

    #[test]
    fn strict_validation_rejects_phased_blocks() {
        let ct = table();
        let t = sample_block_target_with_phases(&ct, 7);
        assert!(t.validate(false).is_ok());
        assert!(matches!(
            t.validate(true),
            Err(AcfError::PhaseObstruction(_))
        ));
    }

    #[test]
    fn json_roundtrip_and_assembly() {
        let budget = ResourceBudget::default();
        let ct = table();
        let t = sample_block_target(&ct, 11);
        let text = t.to_json();
        let back = BlockTarget::from_json(&text, &ct).unwrap();
        let u1 = t.assemble(&ct, &budget).unwrap();
        let u2 = back.assemble(&ct, &budget).unwrap();
        let diff = crate::linalg::max_abs(&(&u1 - &u2));
        assert!(diff < 1e-15);
        assert!(unitarity_defect(&u1) < 1e-9);
    }

    #[test]
    fn from_json_rejects_unknown_block() {
        let ct = table();
        let text = format!(
            r#"{{"schema":"{SCHEMA}","n":3,"d":2,"blocks":[
                {{"charge":[9],"alpha":0,"dim":1,"matrix":[[[1.0,0.0]]]}}
            ]}}"#
        );
        assert!(matches!(
            BlockTarget::from_json(&text, &ct),
            Err(AcfError::InvalidTarget(_))
        ));
    }
}
