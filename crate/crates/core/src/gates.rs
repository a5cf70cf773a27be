//! The constrained instruction set and circuits over it.
//!
//! Four gate kinds: a global phase, a single-letter phase on one qudit, the
//! 2-local Hermitian pair control 1 - 2|ra><ra| (x) |rb><rb|, and a two-level
//! X/Y rotation exp(i*theta*G(s;s')) on an ordered support of at most k
//! qudits. Angles serialize as decimal strings so circuit files survive
//! tooling that mangles float literals.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AcfError, Result};
use crate::symmetry::{total_charge, AbelianGroupSpec, BasisString, QuditRep};
use crate::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotAxis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    GlobalPhase {
        #[serde(with = "angle_string")]
        angle: f64,
    },
    /// exp(i*angle*|letter><letter|) on one qudit.
    LetterPhase {
        qudit: usize,
        letter: usize,
        #[serde(with = "angle_string")]
        angle: f64,
    },
    /// 1 - 2|ra><ra|_a (x) |rb><rb|_b; Hermitian and involutive.
    PairControl {
        a: usize,
        ra: usize,
        b: usize,
        rb: usize,
    },
    /// exp(i*angle*G(s;s')) with G = X or Y on the ordered support.
    LocalRot {
        support: Vec<usize>,
        s: Vec<usize>,
        s_prime: Vec<usize>,
        axis: RotAxis,
        #[serde(with = "angle_string")]
        angle: f64,
    },
}

mod angle_string {
    use super::*;

    pub fn serialize<S: Serializer>(angle: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&angle.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = f64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an angle as a decimal string or number")
            }
            fn visit_str<E: DeError>(self, v: &str) -> std::result::Result<f64, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_f64<E: DeError>(self, v: f64) -> std::result::Result<f64, E> {
                Ok(v)
            }
            fn visit_i64<E: DeError>(self, v: i64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_u64<E: DeError>(self, v: u64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
        }
        de.deserialize_any(V)
    }
}

impl Gate {
    /// Number of qudits the gate acts on nontrivially, at most.
    pub fn support_size(&self) -> usize {
        match self {
            Gate::GlobalPhase { .. } => 0,
            Gate::LetterPhase { .. } => 1,
            Gate::PairControl { .. } => 2,
            Gate::LocalRot { support, .. } => support.len(),
        }
    }

    pub fn dagger(&self) -> Gate {
        match self {
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: -angle },
            Gate::LetterPhase {
                qudit,
                letter,
                angle,
            } => Gate::LetterPhase {
                qudit: *qudit,
                letter: *letter,
                angle: -angle,
            },
            Gate::PairControl { .. } => self.clone(),
            Gate::LocalRot {
                support,
                s,
                s_prime,
                axis,
                angle,
            } => Gate::LocalRot {
                support: support.clone(),
                s: s.clone(),
                s_prime: s_prime.clone(),
                axis: *axis,
                angle: -angle,
            },
        }
    }

    /// Structural validity for an (n, d) system, including the exact charge
    /// test that makes a LocalRot symmetric.
    pub fn validate(&self, n: usize, rep: &QuditRep, group: &AbelianGroupSpec) -> Result<()> {
        let d = rep.d();
        let check_idx = |q: usize| {
            if q >= n {
                Err(AcfError::Structure(format!(
                    "qudit index {q} out of range for n={n}"
                )))
            } else {
                Ok(())
            }
        };
        let check_letter = |l: usize| {
            if l >= d {
                Err(AcfError::Structure(format!(
                    "letter {l} out of range for d={d}"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Gate::GlobalPhase { .. } => Ok(()),
            Gate::LetterPhase { qudit, letter, .. } => {
                check_idx(*qudit)?;
                check_letter(*letter)
            }
            Gate::PairControl { a, ra, b, rb } => {
                check_idx(*a)?;
                check_idx(*b)?;
                if a == b {
                    return Err(AcfError::Structure(
                        "pair control needs two distinct qudits".into(),
                    ));
                }
                check_letter(*ra)?;
                check_letter(*rb)
            }
            Gate::LocalRot {
                support,
                s,
                s_prime,
                ..
            } => {
                if support.is_empty() {
                    return Err(AcfError::Structure("empty rotation support".into()));
                }
                let mut seen = support.to_vec();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != support.len() {
                    return Err(AcfError::Structure("repeated qudit in support".into()));
                }
                for &q in support {
                    check_idx(q)?;
                }
                if s.len() != support.len() || s_prime.len() != support.len() {
                    return Err(AcfError::Structure(
                        "rotation strings must match the support length".into(),
                    ));
                }
                if s == s_prime {
                    return Err(AcfError::Structure("rotation endpoints must differ".into()));
                }
                let bs = BasisString::new(s.clone(), rep)?;
                let bs2 = BasisString::new(s_prime.clone(), rep)?;
                let c1 = total_charge(&bs, rep, group)?;
                let c2 = total_charge(&bs2, rep, group)?;
                if c1 != c2 {
                    return Err(AcfError::Structure(format!(
                        "rotation endpoints carry different charges: {c1} vs {c2}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Ordered gate sequence; later gates multiply on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub schema: String,
    pub n: usize,
    pub d: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            n,
            d,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: Circuit) {
        debug_assert_eq!(self.n, other.n);
        self.gates.extend(other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Inverse circuit: daggered gates in reverse order.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            schema: self.schema.clone(),
            n: self.n,
            d: self.d,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    pub fn validate(&self, rep: &QuditRep, group: &AbelianGroupSpec) -> Result<()> {
        if rep.d() != self.d {
            return Err(AcfError::Structure(format!(
                "circuit is over d={}, rep has d={}",
                self.d,
                rep.d()
            )));
        }
        for (i, gate) in self.gates.iter().enumerate() {
            gate.validate(self.n, rep, group)
                .map_err(|e| AcfError::Structure(format!("gate {i}: {e}")))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text).map_err(|e| AcfError::Parse(e.to_string()))?;
        if c.schema != SCHEMA {
            return Err(AcfError::Parse(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                c.schema
            )));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::AbelianGroupSpec;

    fn u1_qubits() -> (AbelianGroupSpec, QuditRep) {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::qubit(&g).unwrap();
        (g, rep)
    }

    #[test]
    fn json_roundtrip_with_string_angles() {
        let mut c = Circuit::new(3, 2);
        c.push(Gate::LocalRot {
            support: vec![0, 1],
            s: vec![0, 1],
            s_prime: vec![1, 0],
            axis: RotAxis::X,
            angle: 0.7,
        });
        c.push(Gate::PairControl {
            a: 0,
            ra: 1,
            b: 2,
            rb: 0,
        });
        c.push(Gate::LetterPhase {
            qudit: 1,
            letter: 1,
            angle: std::f64::consts::FRAC_PI_2,
        });
        let text = c.to_json();
        assert!(text.contains("\"angle\": \"0.7\""));
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn validation_catches_charge_violations() {
        let (g, rep) = u1_qubits();
        let mut c = Circuit::new(2, 2);
        c.push(Gate::LocalRot {
            support: vec![0, 1],
            s: vec![0, 0],
            s_prime: vec![1, 1],
            axis: RotAxis::X,
            angle: 0.3,
        });
        assert!(c.validate(&rep, &g).is_err());

        let g2 = AbelianGroupSpec::cyclic(2).unwrap();
        let rep2 = QuditRep::qubit(&g2).unwrap();
        let mut c2 = Circuit::new(2, 2);
        c2.push(Gate::LocalRot {
            support: vec![0, 1],
            s: vec![0, 0],
            s_prime: vec![1, 1],
            axis: RotAxis::X,
            angle: 0.3,
        });
        c2.validate(&rep2, &g2).unwrap();
    }

    #[test]
    fn validation_catches_bad_indices() {
        let (g, rep) = u1_qubits();
        let mut c = Circuit::new(2, 2);
        c.push(Gate::LetterPhase {
            qudit: 5,
            letter: 0,
            angle: 0.1,
        });
        assert!(c.validate(&rep, &g).is_err());

        let mut c = Circuit::new(2, 2);
        c.push(Gate::PairControl {
            a: 0,
            ra: 3,
            b: 1,
            rb: 0,
        });
        assert!(c.validate(&rep, &g).is_err());
    }
}
