//! Brute-force ground truth at dense scale: spanning sets of k-local
//! symmetric Hermitians, the real dimension of the Lie algebra they
//! generate, charge vectors, and commutant cross-checks against the
//! reachability verdicts.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{AcfError, Result};
use crate::linalg::{flatten_hermitian, GramBasis};
use crate::problem::ResourceBudget;
use crate::reach::ComponentTable;
use crate::sector::SectorTable;
use crate::sim::invariance_defect;
use crate::symmetry::{total_charge, AbelianGroupSpec, BasisString, Charge, QuditRep};

/// Linearly independent spanning set of k-local symmetric Hermitians, as
/// dense matrices on the full d^n space.
pub struct OperatorBasis {
    pub elements: Vec<Array2<Complex64>>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

fn letter_stride(n: usize, d: usize, qudit: usize) -> usize {
    d.pow((n - 1 - qudit) as u32)
}

enum TwoLevelKind {
    Diag,
    X,
    Y,
}

/// Embed |t><t'|-type Hermitians on a qudit subset into the full space.
fn embedded_two_level(
    n: usize,
    d: usize,
    support: &[usize],
    t: &[usize],
    t_prime: &[usize],
    kind: TwoLevelKind,
) -> Array2<Complex64> {
    let size = d.pow(n as u32);
    let mut m = Array2::zeros((size, size));
    let offset: isize = support
        .iter()
        .zip(t.iter().zip(t_prime.iter()))
        .map(|(&q, (&a, &b))| (b as isize - a as isize) * letter_stride(n, d, q) as isize)
        .sum();
    for row in 0..size {
        let matches = support
            .iter()
            .zip(t.iter())
            .all(|(&q, &l)| (row / letter_stride(n, d, q)) % d == l);
        if !matches {
            continue;
        }
        let partner = (row as isize + offset) as usize;
        match kind {
            TwoLevelKind::Diag => m[(row, row)] = Complex64::new(1.0, 0.0),
            TwoLevelKind::X => {
                m[(row, partner)] = Complex64::new(1.0, 0.0);
                m[(partner, row)] = Complex64::new(1.0, 0.0);
            }
            TwoLevelKind::Y => {
                m[(row, partner)] = Complex64::new(0.0, 1.0);
                m[(partner, row)] = Complex64::new(0.0, -1.0);
            }
        }
    }
    m
}

fn ascending_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for q in start..n {
            prefix.push(q);
            rec(q + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Spanning independent set of k-local symmetric Hermitians: per k-subset,
/// charge-block-diagonal matrix units symmetrized into Hermitian pairs, then
/// global de-duplication by Gram reduction over the Hilbert-Schmidt inner
/// product.
pub fn klocal_invariant_basis(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
    budget: &ResourceBudget,
) -> Result<OperatorBasis> {
    if k == 0 || k > n {
        return Err(AcfError::Structure(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let d = rep.d();
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > budget.oracle_cap {
        return Err(AcfError::Resource {
            what: "dense operator basis".into(),
            needed: size,
            cap: budget.oracle_cap,
        });
    }
    let size = size as usize;
    let local_size = d.pow(k as u32);

    // Group the k-letter strings by total charge once; identical per subset.
    let mut blocks: std::collections::BTreeMap<Charge, Vec<Vec<usize>>> = Default::default();
    for idx in 0..local_size {
        let s = BasisString::from_index(idx, k, d);
        let c = total_charge(&s, rep, group)?;
        blocks.entry(c).or_default().push(s.letters().to_vec());
    }

    let mut gram = GramBasis::new(2 * size * size, 1e-9);
    let mut elements = Vec::new();
    for subset in ascending_subsets(n, k) {
        for members in blocks.values() {
            for (i, t) in members.iter().enumerate() {
                let diag = embedded_two_level(n, d, &subset, t, t, TwoLevelKind::Diag);
                if gram.insert(&flatten_hermitian(&diag)) {
                    elements.push(diag);
                }
                for t_prime in members.iter().skip(i + 1) {
                    let x = embedded_two_level(n, d, &subset, t, t_prime, TwoLevelKind::X);
                    if gram.insert(&flatten_hermitian(&x)) {
                        elements.push(x);
                    }
                    let y = embedded_two_level(n, d, &subset, t, t_prime, TwoLevelKind::Y);
                    if gram.insert(&flatten_hermitian(&y)) {
                        elements.push(y);
                    }
                }
            }
        }
    }
    Ok(OperatorBasis {
        elements,
        n,
        k,
        d,
    })
}

fn commutator_i(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let ab = a.dot(b);
    let ba = b.dot(a);
    (&ab - &ba).mapv(|z| z * Complex64::new(0.0, 1.0))
}

const MAX_CLOSURE_ROUNDS: usize = 64;

/// Real dimension of the Lie algebra generated by the basis under iterated
/// commutators i[A, B], with Gram reduction until stable. Breadth-first over
/// generator pairs, deterministic order.
pub fn lie_closure_dim(basis: &OperatorBasis, budget: &ResourceBudget) -> Result<usize> {
    if basis.elements.is_empty() {
        return Err(AcfError::Structure("empty operator basis".into()));
    }
    let size = basis.elements[0].nrows();
    let mut gram = GramBasis::new(2 * size * size, 1e-9);
    let mut closure: Vec<Array2<Complex64>> = Vec::new();
    for el in &basis.elements {
        if gram.insert(&flatten_hermitian(el)) {
            closure.push(el.clone());
        }
    }
    let mut frontier = 0..closure.len();
    for _round in 0..MAX_CLOSURE_ROUNDS {
        if frontier.is_empty() {
            return Ok(closure.len());
        }
        let fixed = frontier.end;
        for j in frontier.clone() {
            for i in 0..fixed {
                let candidate = commutator_i(&closure[i], &closure[j]);
                if gram.insert(&flatten_hermitian(&candidate)) {
                    if closure.len() >= budget.closure_element_cap {
                        return Err(AcfError::Resource {
                            what: "lie closure elements".into(),
                            needed: closure.len() as u128 + 1,
                            cap: budget.closure_element_cap as u128,
                        });
                    }
                    closure.push(candidate);
                }
            }
        }
        frontier = fixed..closure.len();
    }
    if frontier.is_empty() {
        Ok(closure.len())
    } else {
        Err(AcfError::NonConvergence(format!(
            "closure still growing after {MAX_CLOSURE_ROUNDS} rounds ({} elements)",
            closure.len()
        )))
    }
}

/// Sector traces (Tr(H Pi_mu))_mu in canonical charge order. H must commute
/// with the symmetry generators to 1e-9.
pub fn charge_vector(h: &Array2<Complex64>, table: &SectorTable) -> Result<Vec<f64>> {
    let d = table.rep.d();
    let size = d.pow(table.n as u32);
    if h.nrows() != size || h.ncols() != size {
        return Err(AcfError::Structure(format!(
            "operator is {}x{}, expected {size}x{size}",
            h.nrows(),
            h.ncols()
        )));
    }
    let defect = invariance_defect(h, &table.rep, &table.group, table.n)?;
    if defect > 1e-9 {
        return Err(AcfError::Structure(format!(
            "operator is not symmetric: commutator defect {defect:.3e}"
        )));
    }
    let mut sector_index: std::collections::BTreeMap<&Charge, usize> = Default::default();
    for (i, s) in table.sectors().iter().enumerate() {
        sector_index.insert(&s.charge, i);
    }
    let mut out = vec![0.0f64; table.num_sectors()];
    for row in 0..size {
        let s = BasisString::from_index(row, table.n, d);
        let charge = total_charge(&s, &table.rep, &table.group)?;
        let idx = *sector_index
            .get(&charge)
            .ok_or_else(|| AcfError::Structure(format!("no sector for charge {charge}")))?;
        out[idx] += h[(row, row)].re;
    }
    Ok(out)
}

/// Outcome of the commutant cross-check.
#[derive(Debug, Clone)]
pub struct CommutantReport {
    /// Commutant dimension from the linear solve over the basis support.
    pub commutant_dim: usize,
    /// Partition from the solve matches the component table exactly.
    pub matches_components: bool,
    /// Every single-site letter projector lies in the span of the basis,
    /// which pins the commutant inside the diagonal algebra.
    pub projectors_in_span: bool,
    pub ok: bool,
}

const SUPPORT_TOL: f64 = 1e-12;

/// Solve for the commutant of the basis and compare with the component
/// table. Since the basis spans every single-site letter projector, any
/// commuting operator is diagonal in the product basis; the remaining linear
/// constraints x_r = x_c for off-diagonal support (r, c) reduce to connected
/// components of the support graph.
pub fn verify_commutant(ct: &ComponentTable, basis: &OperatorBasis) -> Result<CommutantReport> {
    let d = basis.d;
    let n = basis.n;
    let size = d.pow(n as u32);
    if ct.n != n || ct.rep.d() != d {
        return Err(AcfError::Structure(
            "component table and basis describe different systems".into(),
        ));
    }

    // 1. The diagonal reduction premise, verified numerically.
    let mut gram = GramBasis::new(2 * size * size, 1e-9);
    for el in &basis.elements {
        gram.insert(&flatten_hermitian(el));
    }
    let mut projectors_in_span = true;
    for qudit in 0..n {
        for letter in 0..d {
            let p = embedded_two_level(n, d, &[qudit], &[letter], &[letter], TwoLevelKind::Diag);
            if gram.residual_norm(&flatten_hermitian(&p)) > 1e-9 {
                projectors_in_span = false;
            }
        }
    }

    // 2. Union-find over the off-diagonal support of the basis.
    fn root(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut uf: Vec<usize> = (0..size).collect();
    for el in &basis.elements {
        for row in 0..size {
            for col in row + 1..size {
                if el[(row, col)].norm() > SUPPORT_TOL {
                    let (a, b) = (root(&mut uf, row), root(&mut uf, col));
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for row in 0..size {
        let r = root(&mut uf, row);
        classes.entry(r).or_default().push(row);
    }
    let commutant_dim = classes.len();

    // 3. Exact agreement with the reachability partition.
    let mut matches_components = commutant_dim == ct.num_components();
    if matches_components {
        'outer: for members in classes.values() {
            let first = ct.component_of_string(&BasisString::from_index(members[0], n, d))?;
            for &row in members {
                let c = ct.component_of_string(&BasisString::from_index(row, n, d))?;
                if c != first {
                    matches_components = false;
                    break 'outer;
                }
            }
            if ct.components()[first].dim != members.len() as u128 {
                matches_components = false;
                break;
            }
        }
    }

    Ok(CommutantReport {
        commutant_dim,
        matches_components,
        projectors_in_span,
        ok: matches_components && projectors_in_span,
    })
}
