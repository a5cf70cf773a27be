//! Charge sectors and the dimension/phase bookkeeping for k-local symmetric
//! dynamics: sector dimensions, the irrep-count gap, and the rank of the
//! character span that controls realizable sector determinants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{AcfError, Result};
use crate::linalg::{float_rank, integer_rank};
use crate::problem::ResourceBudget;
use crate::symmetry::{
    charge_add, character_value, irreps_count, irreps_set, AbelianGroupSpec, Charge,
    GroupCoordinate, GroupElement, QuditRep,
};

/// Letter-count vector: how many qudits sit in each local basis letter.
/// Swaps are symmetric and 2-local, so a composition captures everything
/// about a basis string except the qudit order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn of_letters(letters: &[usize], d: usize) -> Self {
        let mut counts = vec![0usize; d];
        for &l in letters {
            counts[l] += 1;
        }
        Self(counts)
    }

    pub fn total_charge(&self, rep: &QuditRep, group: &AbelianGroupSpec) -> Result<Charge> {
        let t = group.num_factors();
        let mut comps = vec![0i64; t];
        for (letter, &count) in self.0.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let c = rep.letter_charge(letter)?;
            for (acc, &x) in comps.iter_mut().zip(c.components()) {
                *acc += x * count as i64;
            }
        }
        Charge::new(comps, group)
    }

    /// Minimal number of positions that must change to move between two
    /// compositions of the same total size.
    pub fn move_size(&self, other: &Composition) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| b.saturating_sub(a))
            .sum()
    }
}

/// n!/(c_0! c_1! ... ), exact in u128.
pub fn multinomial(counts: &[usize]) -> u128 {
    let mut result: u128 = 1;
    let mut seen: usize = 0;
    for &c in counts {
        for i in 1..=c {
            seen += 1;
            result = result * seen as u128 / i as u128;
        }
    }
    result
}

/// All length-d compositions of n, ascending lexicographic.
pub fn compositions(n: usize, d: usize) -> Vec<Composition> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Composition(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in 0..=remaining {
            prefix.push(c);
            rec(remaining - c, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn composition_count(n: usize, d: usize) -> u128 {
    // C(n + d - 1, d - 1)
    let mut counts = vec![0usize; 2];
    counts[0] = n;
    counts[1] = d - 1;
    multinomial(&counts)
}

#[derive(Debug, Clone)]
pub struct SectorInfo {
    pub charge: Charge,
    pub dim: u128,
    pub members: Vec<Composition>,
}

/// Partition of the product basis into charge sectors, with dimensions.
#[derive(Debug, Clone)]
pub struct SectorTable {
    pub n: usize,
    pub rep: QuditRep,
    pub group: AbelianGroupSpec,
    sectors: Vec<SectorInfo>,
}

impl SectorTable {
    pub fn sectors(&self) -> &[SectorInfo] {
        &self.sectors
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn sector_of(&self, charge: &Charge) -> Option<&SectorInfo> {
        self.sectors.iter().find(|s| &s.charge == charge)
    }

    pub fn total_dim(&self) -> u128 {
        self.sectors.iter().map(|s| s.dim).sum()
    }
}

/// Group all compositions by total charge; sector dimensions are sums of
/// multinomials.
pub fn enumerate_sectors(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    budget: &ResourceBudget,
) -> Result<SectorTable> {
    if n == 0 {
        return Err(AcfError::Structure("enumerate_sectors requires n >= 1".into()));
    }
    let count = composition_count(n, rep.d());
    if count > budget.composition_cap {
        return Err(AcfError::Resource {
            what: "composition enumeration".into(),
            needed: count,
            cap: budget.composition_cap,
        });
    }
    let mut by_charge: BTreeMap<Charge, Vec<Composition>> = BTreeMap::new();
    for comp in compositions(n, rep.d()) {
        let charge = comp.total_charge(rep, group)?;
        by_charge.entry(charge).or_default().push(comp);
    }
    let sectors = by_charge
        .into_iter()
        .map(|(charge, members)| {
            let dim = members.iter().map(|c| multinomial(c.counts())).sum();
            SectorInfo {
                charge,
                dim,
                members,
            }
        })
        .collect();
    Ok(SectorTable {
        n,
        rep: rep.clone(),
        group: group.clone(),
        sectors,
    })
}

/// Real dimension of the group of all symmetric unitaries: sum of squared
/// sector dimensions.
pub fn dim_full_symmetric_group(table: &SectorTable) -> u128 {
    table.sectors.iter().map(|s| s.dim * s.dim).sum()
}

/// Lower bound on dim(all symmetric) - dim(k-local symmetric):
/// irreps_count(n) - irreps_count(k).
pub fn dim_gap_lower_bound(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
) -> Result<u128> {
    if k == 0 || k > n {
        return Err(AcfError::Structure(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let full = irreps_count(rep, group, n)? as u128;
    let local = irreps_count(rep, group, k)? as u128;
    Ok(full - local)
}

/// Multiplicity of each letter charge, as a function on the dual lattice.
fn letter_multiplicity(rep: &QuditRep, group: &AbelianGroupSpec) -> BTreeMap<Charge, BigInt> {
    let mut out: BTreeMap<Charge, BigInt> = BTreeMap::new();
    let _ = group;
    for c in rep.letter_charges() {
        *out.entry(c.clone()).or_insert_with(|| BigInt::from(0)) += 1;
    }
    out
}

fn convolve(
    a: &BTreeMap<Charge, BigInt>,
    b: &BTreeMap<Charge, BigInt>,
    group: &AbelianGroupSpec,
) -> Result<BTreeMap<Charge, BigInt>> {
    let mut out: BTreeMap<Charge, BigInt> = BTreeMap::new();
    for (ca, va) in a {
        for (cb, vb) in b {
            let key = charge_add(ca, cb, group)?;
            *out.entry(key).or_insert_with(|| BigInt::from(0)) += va * vb;
        }
    }
    Ok(out)
}

/// Integer coefficient matrix of the functions r(g)^(n-k) * f_nu in the
/// character basis: rows indexed by nu in Irreps(k), columns by the charges
/// their expansions touch. Characters of distinct irreps are linearly
/// independent over the complex numbers, so the real span of these functions
/// has dimension equal to the rational rank of this matrix.
fn character_span_matrix(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
) -> Result<(Vec<Charge>, Vec<Charge>, Vec<Vec<BigInt>>)> {
    let rows: Vec<Charge> = irreps_set(rep, group, k)?.into_iter().collect();
    let mut power: BTreeMap<Charge, BigInt> = BTreeMap::new();
    power.insert(Charge::zero(group), BigInt::from(1));
    let letters = letter_multiplicity(rep, group);
    for _ in 0..(n - k) {
        power = convolve(&power, &letters, group)?;
    }
    let mut column_set: std::collections::BTreeSet<Charge> = std::collections::BTreeSet::new();
    for nu in &rows {
        for c in power.keys() {
            column_set.insert(charge_add(nu, c, group)?);
        }
    }
    let col_list: Vec<Charge> = column_set.into_iter().collect();
    let columns: BTreeMap<Charge, usize> = col_list
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let mut matrix = vec![vec![BigInt::from(0); col_list.len()]; rows.len()];
    for (ri, nu) in rows.iter().enumerate() {
        for (c, coeff) in &power {
            let mu = charge_add(nu, c, group)?;
            let ci = columns[&mu];
            matrix[ri][ci] = coeff.clone();
        }
    }
    Ok((rows, col_list, matrix))
}

/// Dimension of the real span of the functions r(g)^(n-k) * f_nu over the
/// group, where r(g) is the single-qudit trace. This counts the independently
/// tunable sector determinants under k-local symmetric generators. Exact
/// integer arithmetic throughout; see `phase_constraint_rank_float` for the
/// floating-point cross-check.
pub fn phase_constraint_rank(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
) -> Result<usize> {
    if k == 0 || k > n {
        return Err(AcfError::Structure(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let (_, _, matrix) = character_span_matrix(rep, group, n, k)?;
    Ok(integer_rank(&matrix))
}

/// Floating-point evaluation of the same rank, by stacking real and
/// imaginary parts of the functions over a grid of group elements: full
/// enumeration on finite factors, a Fourier-sufficient uniform angle grid on
/// U(1) factors. Cross-check only; the exact path is authoritative.
pub fn phase_constraint_rank_float(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
    tol: f64,
) -> Result<usize> {
    if k == 0 || k > n {
        return Err(AcfError::Structure(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let (rows, cols, _) = character_span_matrix(rep, group, n, k)?;
    // Per-coordinate grid sizes: full order for finite factors, enough points
    // to separate every Laurent exponent for U(1) factors.
    let mut grid_sizes = Vec::new();
    for (i, &m) in group.moduli().iter().enumerate() {
        if m >= 2 {
            grid_sizes.push(m as usize);
        } else {
            let max_exp = cols
                .iter()
                .chain(rows.iter())
                .map(|c| c.components()[i].abs())
                .max()
                .unwrap_or(0);
            grid_sizes.push(2 * max_exp as usize + 3);
        }
    }
    let total: usize = grid_sizes.iter().product::<usize>().max(1);
    let mut elements = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut coords = Vec::with_capacity(group.num_factors());
        for (i, &m) in group.moduli().iter().enumerate() {
            let g = grid_sizes[i];
            let pos = idx % g;
            idx /= g;
            if m >= 2 {
                coords.push(GroupCoordinate::Finite(pos as i64));
            } else {
                coords.push(GroupCoordinate::Angle(
                    2.0 * std::f64::consts::PI * pos as f64 / g as f64,
                ));
            }
        }
        elements.push(GroupElement(coords));
    }
    let mut float_rows = Vec::with_capacity(rows.len());
    for nu in &rows {
        let mut row = Vec::with_capacity(2 * elements.len());
        let mut ims = Vec::with_capacity(elements.len());
        for g in &elements {
            // r(g)^(n-k) f_nu(g) with r(g) the sum of letter characters.
            let mut r = num_complex::Complex64::new(0.0, 0.0);
            for c in rep.letter_charges() {
                r += character_value(c, g, group)?;
            }
            let val = r.powu((n - k) as u32) * character_value(nu, g, group)?;
            row.push(val.re);
            ims.push(val.im);
        }
        row.extend(ims);
        float_rows.push(row);
    }
    Ok(float_rank(&float_rows, tol))
}

/// Predicted real dimension of the k-local symmetric gate group:
/// dim_full - |Irreps(n)| + phase rank. Exact when the k-local commutator
/// subgroup already saturates (semi-universality); otherwise reported with
/// `exact = false` and no bound is claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedDim {
    pub value: u128,
    pub exact: bool,
}

pub fn predicted_dim(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
    semi_universal: bool,
    budget: &ResourceBudget,
) -> Result<PredictedDim> {
    let table = enumerate_sectors(rep, group, n, budget)?;
    let full = dim_full_symmetric_group(&table);
    let irreps_n = irreps_count(rep, group, n)? as u128;
    let rank = phase_constraint_rank(rep, group, n, k)? as u128;
    Ok(PredictedDim {
        value: full - irreps_n + rank,
        exact: semi_universal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::QuditRep;
    use proptest::prelude::*;

    fn u1_qubits() -> (AbelianGroupSpec, QuditRep) {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::qubit(&g).unwrap();
        (g, rep)
    }

    fn zp_qubits(p: u64) -> (AbelianGroupSpec, QuditRep) {
        let g = AbelianGroupSpec::cyclic(p).unwrap();
        let rep = QuditRep::qubit(&g).unwrap();
        (g, rep)
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[3]), 1);
        assert_eq!(multinomial(&[1, 2]), 3);
        assert_eq!(multinomial(&[2, 2]), 6);
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(multinomial(&[0, 0]), 1);
    }

    #[test]
    fn sectors_u1_qubits() {
        let (g, rep) = u1_qubits();
        let t = enumerate_sectors(&rep, &g, 3, &ResourceBudget::default()).unwrap();
        assert_eq!(t.num_sectors(), 4);
        let dims: Vec<u128> = t.sectors().iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
        assert_eq!(t.total_dim(), 8);
        assert_eq!(dim_full_symmetric_group(&t), 20);
    }

    #[test]
    fn sectors_z2_qubits() {
        let (g, rep) = zp_qubits(2);
        let t = enumerate_sectors(&rep, &g, 2, &ResourceBudget::default()).unwrap();
        assert_eq!(t.num_sectors(), 2);
        let dims: Vec<u128> = t.sectors().iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![2, 2]);
        assert_eq!(dim_full_symmetric_group(&t), 8);
    }

    #[test]
    fn sectors_trivial_rep() {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::trivial(2, &g).unwrap();
        let t = enumerate_sectors(&rep, &g, 2, &ResourceBudget::default()).unwrap();
        assert_eq!(t.num_sectors(), 1);
        assert_eq!(t.sectors()[0].dim, 4);
        assert_eq!(dim_full_symmetric_group(&t), 16);
    }

    #[test]
    fn budget_guard_fires() {
        let (g, rep) = u1_qubits();
        let tight = ResourceBudget {
            composition_cap: 3,
            ..ResourceBudget::default()
        };
        assert!(matches!(
            enumerate_sectors(&rep, &g, 5, &tight),
            Err(AcfError::Resource { .. })
        ));
    }

    #[test]
    fn dim_gap_examples() {
        let (g, rep) = u1_qubits();
        assert_eq!(dim_gap_lower_bound(&rep, &g, 5, 2).unwrap(), 3);
        assert_eq!(dim_gap_lower_bound(&rep, &g, 5, 5).unwrap(), 0);
        let (g3, rep3) = zp_qubits(3);
        assert_eq!(dim_gap_lower_bound(&rep3, &g3, 4, 3).unwrap(), 0);
    }

    #[test]
    fn phase_rank_examples() {
        let (g2, rep2) = zp_qubits(2);
        assert_eq!(phase_constraint_rank(&rep2, &g2, 3, 2).unwrap(), 1);

        let (g3, rep3) = zp_qubits(3);
        assert_eq!(phase_constraint_rank(&rep3, &g3, 4, 3).unwrap(), 3);
        assert_eq!(irreps_count(&rep3, &g3, 4).unwrap(), 3);

        // k = n: characters themselves, always independent.
        let (u1, repu) = u1_qubits();
        assert_eq!(phase_constraint_rank(&repu, &u1, 4, 4).unwrap(), 5);
    }

    #[test]
    fn phase_rank_float_cross_check() {
        for (g, rep, n, k) in [
            {
                let (g, r) = zp_qubits(2);
                (g, r, 3, 2)
            },
            {
                let (g, r) = zp_qubits(3);
                (g, r, 4, 3)
            },
            {
                let (g, r) = zp_qubits(4);
                (g, r, 4, 2)
            },
            {
                let (g, r) = u1_qubits();
                (g, r, 4, 2)
            },
            {
                let g = AbelianGroupSpec::new(vec![2, 0]).unwrap();
                let r = QuditRep::new(
                    vec![
                        Charge::new(vec![0, 0], &g).unwrap(),
                        Charge::new(vec![1, 1], &g).unwrap(),
                        Charge::new(vec![1, -1], &g).unwrap(),
                    ],
                    &g,
                )
                .unwrap();
                (g, r, 3, 2)
            },
        ] {
            let exact = phase_constraint_rank(&rep, &g, n, k).unwrap();
            let float = phase_constraint_rank_float(&rep, &g, n, k, 1e-9).unwrap();
            assert_eq!(exact, float, "n={n} k={k}");
        }
    }

    #[test]
    fn predicted_dim_examples() {
        let (g, rep) = u1_qubits();
        let p = predicted_dim(&rep, &g, 3, 2, true, &ResourceBudget::default()).unwrap();
        assert_eq!(p.value, 19);
        assert!(p.exact);

        let p = predicted_dim(&rep, &g, 3, 3, true, &ResourceBudget::default()).unwrap();
        assert_eq!(p.value, 20);

        // Z_2 qubits n=3 k=2: two sectors of dim 4, one tunable determinant.
        let (g2, rep2) = zp_qubits(2);
        let p = predicted_dim(&rep2, &g2, 3, 2, true, &ResourceBudget::default()).unwrap();
        assert_eq!(p.value, 31); // (16-1) + (16-1) + 1
    }

    proptest! {
        #[test]
        fn sector_dims_sum_to_dn(n in 1usize..9, d in 1usize..4, p in 2u64..5) {
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::new(
                (0..d).map(|r| Charge::new(vec![r as i64 % p as i64], &g).unwrap()).collect(),
                &g,
            ).unwrap();
            let t = enumerate_sectors(&rep, &g, n, &ResourceBudget::default()).unwrap();
            prop_assert_eq!(t.total_dim(), (d as u128).pow(n as u32));
        }

        #[test]
        fn gap_monotone_in_k(n in 2usize..7, p in 2u64..5) {
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::qubit(&g).unwrap();
            let mut prev = dim_gap_lower_bound(&rep, &g, n, 1).unwrap();
            for k in 2..=n {
                let cur = dim_gap_lower_bound(&rep, &g, n, k).unwrap();
                prop_assert!(cur <= prev);
                prev = cur;
            }
            prop_assert_eq!(dim_gap_lower_bound(&rep, &g, n, n).unwrap(), 0);
        }

        #[test]
        fn phase_rank_bounded_by_irreps_k(n in 2usize..6, k in 1usize..6, p in 2u64..6) {
            prop_assume!(k <= n);
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::qubit(&g).unwrap();
            let rank = phase_constraint_rank(&rep, &g, n, k).unwrap();
            let ik = irreps_count(&rep, &g, k).unwrap();
            let inn = irreps_count(&rep, &g, n).unwrap();
            prop_assert!(rank <= ik);
            // Odd p: the single-qudit trace never vanishes, rank saturates.
            if p % 2 == 1 {
                prop_assert_eq!(rank, ik);
            }
            // Even p with k < n: Tr u(p/2) = 0 forces a strict deficit.
            if p % 2 == 0 && k < n {
                prop_assert!(rank < inn);
            }
        }
    }
}
