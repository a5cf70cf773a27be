//! Problem description: group, per-qudit representation, system size, gate
//! locality, and resource budgets.

use serde::{Deserialize, Serialize};

use crate::error::{AcfError, Result};
use crate::symmetry::{AbelianGroupSpec, Charge, QuditRep};

/// Caps on dense and combinatorial work. `dense_cap` bounds d^n wherever a
/// dense matrix or a full string enumeration is materialized; the
/// `ACF_DENSE_CAP` environment variable overrides the default.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceBudget {
    pub dense_cap: u128,
    pub composition_cap: u128,
    pub oracle_cap: u128,
    pub closure_element_cap: usize,
}

impl Default for ResourceBudget {
    fn default() -> Self {
        let dense_cap = std::env::var("ACF_DENSE_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(4096);
        Self {
            dense_cap,
            composition_cap: 1 << 20,
            oracle_cap: 256,
            closure_element_cap: 4096,
        }
    }
}

impl ResourceBudget {
    pub fn with_dense_cap(cap: u128) -> Self {
        Self {
            dense_cap: cap,
            ..Self::default()
        }
    }

    pub fn check_dense(&self, d: usize, n: usize) -> Result<usize> {
        let size = (d as u128).checked_pow(n as u32).ok_or(AcfError::Resource {
            what: "dense dimension d^n".into(),
            needed: u128::MAX,
            cap: self.dense_cap,
        })?;
        if size > self.dense_cap {
            return Err(AcfError::Resource {
                what: "dense dimension d^n".into(),
                needed: size,
                cap: self.dense_cap,
            });
        }
        Ok(size as usize)
    }
}

/// On-disk problem document. `letter_charges` holds one integer vector per
/// basis letter of the local qudit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpecDoc {
    pub moduli: Vec<u64>,
    pub d: usize,
    pub letter_charges: Vec<Vec<i64>>,
    pub n: usize,
    #[serde(default = "default_k")]
    pub k: usize,
}

fn default_k() -> usize {
    2
}

/// Validated problem instance.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub group: AbelianGroupSpec,
    pub rep: QuditRep,
    pub n: usize,
    pub k: usize,
}

impl ProblemSpec {
    pub fn new(group: AbelianGroupSpec, rep: QuditRep, n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(AcfError::Structure("n must be >= 1".into()));
        }
        if k == 0 {
            return Err(AcfError::Structure("k must be >= 1".into()));
        }
        if k > n {
            return Err(AcfError::Structure(format!("k={k} exceeds n={n}")));
        }
        Ok(Self { group, rep, n, k })
    }

    pub fn from_doc(doc: &ProblemSpecDoc) -> Result<Self> {
        let group = AbelianGroupSpec::new(doc.moduli.clone())?;
        if doc.letter_charges.len() != doc.d {
            return Err(AcfError::Structure(format!(
                "expected {} letter charges, found {}",
                doc.d,
                doc.letter_charges.len()
            )));
        }
        let charges = doc
            .letter_charges
            .iter()
            .map(|c| Charge::new(c.clone(), &group))
            .collect::<Result<Vec<_>>>()?;
        let rep = QuditRep::new(charges, &group)?;
        Self::new(group, rep, doc.n, doc.k)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemSpecDoc =
            serde_json::from_str(text).map_err(|e| AcfError::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> ProblemSpecDoc {
        ProblemSpecDoc {
            moduli: self.group.moduli().to_vec(),
            d: self.rep.d(),
            letter_charges: self
                .rep
                .letter_charges()
                .iter()
                .map(|c| c.components().to_vec())
                .collect(),
            n: self.n,
            k: self.k,
        }
    }

    /// Same problem with a different gate locality.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.group.clone(), self.rep.clone(), self.n, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let text = r#"{"moduli":[0],"d":2,"letter_charges":[[0],[1]],"n":4,"k":2}"#;
        let spec = ProblemSpec::from_json(text).unwrap();
        assert_eq!(spec.n, 4);
        assert_eq!(spec.k, 2);
        assert_eq!(spec.rep.d(), 2);
        let doc = spec.to_doc();
        assert_eq!(doc.letter_charges, vec![vec![0], vec![1]]);
    }

    #[test]
    fn k_defaults_to_two() {
        let text = r#"{"moduli":[2],"d":2,"letter_charges":[[0],[1]],"n":3}"#;
        let spec = ProblemSpec::from_json(text).unwrap();
        assert_eq!(spec.k, 2);
    }

    #[test]
    fn bad_documents_rejected() {
        assert!(ProblemSpec::from_json("{").is_err());
        let text = r#"{"moduli":[2],"d":3,"letter_charges":[[0],[1]],"n":3,"k":2}"#;
        assert!(ProblemSpec::from_json(text).is_err());
        let text = r#"{"moduli":[2],"d":2,"letter_charges":[[0],[1]],"n":2,"k":3}"#;
        assert!(ProblemSpec::from_json(text).is_err());
    }
}
