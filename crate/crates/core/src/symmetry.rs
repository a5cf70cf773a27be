//! Abelian groups, their irreps (charges), and diagonal qudit representations.
//!
//! A group is a product of cyclic and circle factors, given by a modulus per
//! coordinate: modulus 0 is a U(1) factor (irreps labelled by all of Z),
//! modulus p >= 2 is Z_p (irreps labelled mod p). Irreps are integer vectors
//! kept in canonical form so equality is plain componentwise comparison.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AcfError, Result};

/// Product of Z_p and U(1) factors, one modulus per coordinate (0 = U(1)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    moduli: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m == 1) {
            return Err(AcfError::Structure(format!(
                "modulus {m} is not allowed: each modulus must be 0 (a U(1) factor) or >= 2"
            )));
        }
        Ok(Self { moduli })
    }

    /// Single cyclic factor Z_p.
    pub fn cyclic(p: u64) -> Result<Self> {
        Self::new(vec![p])
    }

    /// Single U(1) factor.
    pub fn u1() -> Self {
        Self { moduli: vec![0] }
    }

    /// The trivial group (no factors).
    pub fn trivial() -> Self {
        Self { moduli: Vec::new() }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn num_factors(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|&m| m >= 2)
    }

    /// Group order; `None` when some factor is U(1).
    pub fn order(&self) -> Option<u128> {
        if self.is_finite() {
            Some(self.moduli.iter().map(|&m| m as u128).product())
        } else {
            None
        }
    }

    /// Canonical form of one irrep coordinate.
    fn reduce_coord(&self, i: usize, value: i64) -> i64 {
        let m = self.moduli[i];
        if m == 0 {
            value
        } else {
            value.rem_euclid(m as i64)
        }
    }

    /// Enumerate all group elements of a finite group, in lexicographic order.
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        let order = self.order().ok_or_else(|| {
            AcfError::Structure("cannot enumerate elements of a group with U(1) factors".into())
        })?;
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; self.moduli.len()];
        loop {
            out.push(cur.clone());
            let mut i = self.moduli.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.moduli[i] as i64 {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// Irrep label: an integer vector, coordinate i reduced mod m_i when m_i >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Charge(Vec<i64>);

impl Charge {
    /// Canonicalize `components` under `group`.
    pub fn new(components: Vec<i64>, group: &AbelianGroupSpec) -> Result<Self> {
        if components.len() != group.num_factors() {
            return Err(AcfError::Structure(format!(
                "charge has {} components but the group has {} factors",
                components.len(),
                group.num_factors()
            )));
        }
        let reduced = components
            .iter()
            .enumerate()
            .map(|(i, &c)| group.reduce_coord(i, c))
            .collect();
        Ok(Self(reduced))
    }

    pub fn zero(group: &AbelianGroupSpec) -> Self {
        Self(vec![0; group.num_factors()])
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise sum, canonicalized.
pub fn charge_add(a: &Charge, b: &Charge, group: &AbelianGroupSpec) -> Result<Charge> {
    if a.0.len() != group.num_factors() || b.0.len() != group.num_factors() {
        return Err(AcfError::Structure(
            "charge length does not match the group".into(),
        ));
    }
    let sum = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    Charge::new(sum, group)
}

/// Componentwise difference, canonicalized.
pub fn charge_sub(a: &Charge, b: &Charge, group: &AbelianGroupSpec) -> Result<Charge> {
    if a.0.len() != group.num_factors() || b.0.len() != group.num_factors() {
        return Err(AcfError::Structure(
            "charge length does not match the group".into(),
        ));
    }
    let diff = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
    Charge::new(diff, group)
}

/// Diagonal representation of the group on one qudit: a charge per basis letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuditRep {
    d: usize,
    letter_charges: Vec<Charge>,
}

impl QuditRep {
    pub fn new(letter_charges: Vec<Charge>, group: &AbelianGroupSpec) -> Result<Self> {
        if letter_charges.is_empty() {
            return Err(AcfError::Structure(
                "a qudit needs at least one basis letter".into(),
            ));
        }
        for c in &letter_charges {
            if c.components().len() != group.num_factors() {
                return Err(AcfError::Structure(
                    "letter charge length does not match the group".into(),
                ));
            }
        }
        Ok(Self {
            d: letter_charges.len(),
            letter_charges,
        })
    }

    /// n-qubit convention for U(1)/Z_p examples: letter 0 neutral, letter 1 charged.
    pub fn qubit(group: &AbelianGroupSpec) -> Result<Self> {
        let zero = Charge::zero(group);
        let one = Charge::new(vec![1; group.num_factors()], group)?;
        Self::new(vec![zero, one], group)
    }

    /// All letters carry the zero charge.
    pub fn trivial(d: usize, group: &AbelianGroupSpec) -> Result<Self> {
        Self::new(vec![Charge::zero(group); d], group)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn letter_charge(&self, letter: usize) -> Result<&Charge> {
        self.letter_charges.get(letter).ok_or_else(|| {
            AcfError::Structure(format!("letter {letter} out of range for d={}", self.d))
        })
    }

    pub fn letter_charges(&self) -> &[Charge] {
        &self.letter_charges
    }
}

/// Regauge so letter 0 carries the zero charge. The invariant-subspace
/// structure is unchanged: the shift multiplies u(g) by the inverse of a
/// 1D irrep, a global phase.
pub fn normalize_rep(rep: &QuditRep, group: &AbelianGroupSpec) -> Result<QuditRep> {
    let base = rep.letter_charges[0].clone();
    let shifted = rep
        .letter_charges
        .iter()
        .map(|c| charge_sub(c, &base, group))
        .collect::<Result<Vec<_>>>()?;
    QuditRep::new(shifted, group)
}

/// Product basis element: one letter per qudit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisString(Vec<usize>);

impl BasisString {
    pub fn new(letters: Vec<usize>, rep: &QuditRep) -> Result<Self> {
        for &l in &letters {
            if l >= rep.d() {
                return Err(AcfError::Structure(format!(
                    "letter {l} out of range for d={}",
                    rep.d()
                )));
            }
        }
        Ok(Self(letters))
    }

    /// Unvalidated constructor for internal use; letters must be < d.
    pub(crate) fn from_raw(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of positions where the two strings differ.
    pub fn hamming_distance(&self, other: &BasisString) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Row index in the lexicographic product-basis ordering.
    pub fn to_index(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * d + l)
    }

    pub fn from_index(mut index: usize, n: usize, d: usize) -> Self {
        let mut letters = vec![0usize; n];
        for slot in letters.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        Self(letters)
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            if l < 10 {
                write!(f, "{l}")?;
            } else {
                write!(f, "[{l}]")?;
            }
        }
        Ok(())
    }
}

/// Total charge of a basis string: the sum of its letter charges. This fixes
/// the sector containing the string.
pub fn total_charge(s: &BasisString, rep: &QuditRep, group: &AbelianGroupSpec) -> Result<Charge> {
    let mut acc = Charge::zero(group);
    for &l in s.letters() {
        acc = charge_add(&acc, rep.letter_charge(l)?, group)?;
    }
    Ok(acc)
}

/// The set of charges expressible as a sum of exactly k letter charges,
/// computed by k-fold set convolution with canonical reduction.
pub fn irreps_set(rep: &QuditRep, group: &AbelianGroupSpec, k: usize) -> Result<BTreeSet<Charge>> {
    if k == 0 {
        return Err(AcfError::Structure("irreps_set requires k >= 1".into()));
    }
    let letters: BTreeSet<Charge> = rep.letter_charges().iter().cloned().collect();
    let mut acc = letters.clone();
    for _ in 1..k {
        let mut next = BTreeSet::new();
        for a in &acc {
            for b in &letters {
                next.insert(charge_add(a, b, group)?);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Number of inequivalent irreps appearing on k qudits.
pub fn irreps_count(rep: &QuditRep, group: &AbelianGroupSpec, k: usize) -> Result<usize> {
    Ok(irreps_set(rep, group, k)?.len())
}

/// Smallest l with irreps_count(l) = irreps_count(n). The count is
/// non-decreasing in l (adding a fixed letter charge is injective), so a
/// linear scan terminates.
pub fn min_compression_length(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
) -> Result<usize> {
    if n == 0 {
        return Err(AcfError::Structure(
            "min_compression_length requires n >= 1".into(),
        ));
    }
    let target = irreps_count(rep, group, n)?;
    for l in 1..=n {
        if irreps_count(rep, group, l)? == target {
            return Ok(l);
        }
    }
    unreachable!("irreps_count(n) = irreps_count(n)")
}

/// One coordinate of a group element: an integer for a finite factor, an
/// angle in radians for a U(1) factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupCoordinate {
    Finite(i64),
    Angle(f64),
}

/// Group element across all factors.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(pub Vec<GroupCoordinate>);

impl GroupElement {
    pub fn from_finite(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&a| GroupCoordinate::Finite(a)).collect())
    }
}

/// Character of irrep `mu` at a group element: the product over coordinates
/// of exp(2*pi*i*mu_i*a_i/m_i) for finite factors and exp(i*mu_i*theta_i) for
/// U(1) factors.
pub fn character_value(
    mu: &Charge,
    element: &GroupElement,
    group: &AbelianGroupSpec,
) -> Result<Complex64> {
    if mu.components().len() != group.num_factors() || element.0.len() != group.num_factors() {
        return Err(AcfError::Structure(
            "charge/element length does not match the group".into(),
        ));
    }
    let mut phase = 0.0f64;
    for (i, (&m, coord)) in group.moduli().iter().zip(&element.0).enumerate() {
        let mu_i = mu.components()[i] as f64;
        match (m, coord) {
            (0, GroupCoordinate::Angle(theta)) => phase += mu_i * theta,
            (0, GroupCoordinate::Finite(_)) => {
                return Err(AcfError::Structure(format!(
                    "coordinate {i} is a U(1) factor and needs an angle"
                )))
            }
            (m, GroupCoordinate::Finite(a)) => {
                phase += 2.0 * std::f64::consts::PI * mu_i * (*a as f64) / (m as f64)
            }
            (_, GroupCoordinate::Angle(_)) => {
                return Err(AcfError::Structure(format!(
                    "coordinate {i} is a finite factor and needs an integer"
                )))
            }
        }
    }
    Ok(Complex64::from_polar(1.0, phase))
}
