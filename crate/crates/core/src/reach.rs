//! Invariant subspaces as connected components of the charge-preserving
//! bounded-Hamming-move graph, the semi-universality verdict, and explicit
//! connecting paths.
//!
//! For k >= 2 the graph lives on compositions: swaps are 2-local and
//! symmetric, so qudit order is irrelevant and two compositions are adjacent
//! when the minimal number of changed positions between them is at most k.
//! k = 1 gets a string-level fallback and is excluded from semi-universality
//! verdicts, which assume k >= 2.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{AcfError, Result};
use crate::problem::ResourceBudget;
use crate::sector::{multinomial, Composition, SectorTable};
use crate::symmetry::{total_charge, AbelianGroupSpec, BasisString, Charge, QuditRep};

#[derive(Debug, Clone)]
pub struct ComponentInfo {
    pub charge: Charge,
    pub alpha: usize,
    pub dim: u128,
    pub members: Vec<Composition>,
}

/// Partition of each charge sector into irreducible invariant subspaces.
#[derive(Debug, Clone)]
pub struct ComponentTable {
    pub n: usize,
    pub k: usize,
    pub rep: QuditRep,
    pub group: AbelianGroupSpec,
    string_level: bool,
    components: Vec<ComponentInfo>,
    by_composition: BTreeMap<Composition, usize>,
    by_string: BTreeMap<BasisString, usize>,
    num_sectors: usize,
}

impl ComponentTable {
    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_sectors(&self) -> usize {
        self.num_sectors
    }

    pub fn is_string_level(&self) -> bool {
        self.string_level
    }

    /// Component index containing a basis string.
    pub fn component_of_string(&self, s: &BasisString) -> Result<usize> {
        if s.len() != self.n {
            return Err(AcfError::Structure(format!(
                "string has {} letters, system has {}",
                s.len(),
                self.n
            )));
        }
        if self.string_level {
            return self.by_string.get(s).copied().ok_or_else(|| {
                AcfError::Structure(format!("string {s} not indexed in the component table"))
            });
        }
        let comp = Composition::of_letters(s.letters(), self.rep.d());
        self.by_composition.get(&comp).copied().ok_or_else(|| {
            AcfError::Structure(format!("composition of {s} not present in the table"))
        })
    }

    pub fn component_of_composition(&self, c: &Composition) -> Option<usize> {
        self.by_composition.get(c).copied()
    }

    /// All member strings of a component in lexicographic order. Dense-scale
    /// helper; callers guard d^n with the budget.
    pub fn member_strings(&self, index: usize) -> Result<Vec<BasisString>> {
        let info = self
            .components
            .get(index)
            .ok_or_else(|| AcfError::Structure(format!("component index {index} out of range")))?;
        let d = self.rep.d();
        let size = (d as u128).pow(self.n as u32);
        if size > (1u128 << 24) {
            return Err(AcfError::Resource {
                what: "string expansion".into(),
                needed: size,
                cap: 1u128 << 24,
            });
        }
        let mut out = Vec::new();
        for idx in 0..size as usize {
            let s = BasisString::from_index(idx, self.n, d);
            if self.string_level {
                if self.by_string.get(&s) == Some(&index) {
                    out.push(s);
                }
            } else {
                let comp = Composition::of_letters(s.letters(), d);
                if info.members.binary_search(&comp).is_ok() {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }
}

/// Connected components of the composition graph within each sector. Edges
/// join compositions whose minimal move size is at most k; k = 1 falls back
/// to a string-level graph (single-letter replacements within one charge).
pub fn components(table: &SectorTable, k: usize) -> Result<ComponentTable> {
    if k == 0 {
        return Err(AcfError::Structure("components requires k >= 1".into()));
    }
    if k == 1 {
        return string_level_components(table, k);
    }
    let mut infos: Vec<ComponentInfo> = Vec::new();
    let mut by_composition = BTreeMap::new();
    for sector in table.sectors() {
        let members = &sector.members;
        let mut seen = vec![false; members.len()];
        let mut alpha = 0usize;
        for start in 0..members.len() {
            if seen[start] {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            let mut component = vec![start];
            while let Some(cur) = queue.pop_front() {
                for next in 0..members.len() {
                    if !seen[next] && members[cur].move_size(&members[next]) <= k {
                        seen[next] = true;
                        component.push(next);
                        queue.push_back(next);
                    }
                }
            }
            component.sort();
            let comps: Vec<Composition> = component.iter().map(|&i| members[i].clone()).collect();
            let dim = comps.iter().map(|c| multinomial(c.counts())).sum();
            let index = infos.len();
            for c in &comps {
                by_composition.insert(c.clone(), index);
            }
            infos.push(ComponentInfo {
                charge: sector.charge.clone(),
                alpha,
                dim,
                members: comps,
            });
            alpha += 1;
        }
    }
    Ok(ComponentTable {
        n: table.n,
        k,
        rep: table.rep.clone(),
        group: table.group.clone(),
        string_level: false,
        components: infos,
        by_composition,
        by_string: BTreeMap::new(),
        num_sectors: table.num_sectors(),
    })
}

fn string_level_components(table: &SectorTable, k: usize) -> Result<ComponentTable> {
    let d = table.rep.d();
    let n = table.n;
    let partition = string_components_brute_force(&table.rep, &table.group, n, k)?;
    let mut infos: Vec<ComponentInfo> = Vec::new();
    let mut by_string = BTreeMap::new();
    let mut by_class: BTreeMap<(Charge, usize), Vec<BasisString>> = BTreeMap::new();
    for (s, class) in partition {
        let charge = total_charge(&s, &table.rep, &table.group)?;
        by_class.entry((charge, class)).or_default().push(s);
    }
    let mut alpha_by_charge: BTreeMap<Charge, usize> = BTreeMap::new();
    for ((charge, _), strings) in by_class {
        let alpha = alpha_by_charge.entry(charge.clone()).or_insert(0);
        let index = infos.len();
        for s in &strings {
            by_string.insert(s.clone(), index);
        }
        let mut comps: Vec<Composition> = strings
            .iter()
            .map(|s| Composition::of_letters(s.letters(), d))
            .collect();
        comps.sort();
        comps.dedup();
        infos.push(ComponentInfo {
            charge,
            alpha: *alpha,
            dim: strings.len() as u128,
            members: comps,
        });
        *alpha += 1;
    }
    Ok(ComponentTable {
        n,
        k,
        rep: table.rep.clone(),
        group: table.group.clone(),
        string_level: true,
        components: infos,
        by_composition: BTreeMap::new(),
        by_string,
        num_sectors: table.num_sectors(),
    })
}

/// Brute-force string-level partition: BFS over all d^n strings with edges
/// between equal-charge strings at Hamming distance <= k. This is the
/// independent oracle the composition graph is validated against.
pub fn string_components_brute_force(
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    n: usize,
    k: usize,
) -> Result<Vec<(BasisString, usize)>> {
    let d = rep.d();
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > (1u128 << 20) {
        return Err(AcfError::Resource {
            what: "brute-force string graph".into(),
            needed: size,
            cap: 1u128 << 20,
        });
    }
    let size = size as usize;
    let strings: Vec<BasisString> = (0..size).map(|i| BasisString::from_index(i, n, d)).collect();
    let charges: Vec<Charge> = strings
        .iter()
        .map(|s| total_charge(s, rep, group))
        .collect::<Result<Vec<_>>>()?;
    let mut class = vec![usize::MAX; size];
    let mut next_class = 0usize;
    for start in 0..size {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = next_class;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for other in 0..size {
                if class[other] == usize::MAX
                    && charges[other] == charges[cur]
                    && strings[cur].hamming_distance(&strings[other]) <= k
                {
                    class[other] = next_class;
                    queue.push_back(other);
                }
            }
        }
        next_class += 1;
    }
    Ok(strings.into_iter().zip(class).collect())
}

/// True when every sector holds exactly one component: k-local symmetric
/// gates then realize every symmetric unitary up to sector phases. Refuses
/// string-level (k = 1) tables, which the criterion does not cover.
pub fn is_semi_universal(ct: &ComponentTable) -> Result<bool> {
    if ct.string_level {
        return Err(AcfError::Structure(
            "semi-universality verdicts need k >= 2; the k = 1 table is string-level".into(),
        ));
    }
    Ok(ct.num_components() == ct.num_sectors())
}

/// Dimension of the commutant of the k-local symmetric gate group: one
/// projector per component.
pub fn commutant_dim(ct: &ComponentTable) -> usize {
    ct.num_components()
}

/// Waypoint sequence connecting two strings: consecutive waypoints share the
/// total charge and differ in at most k positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub waypoints: Vec<BasisString>,
}

impl Path {
    pub fn validate(&self, rep: &QuditRep, group: &AbelianGroupSpec, k: usize) -> Result<()> {
        if self.waypoints.is_empty() {
            return Err(AcfError::Structure("empty path".into()));
        }
        let charge = total_charge(&self.waypoints[0], rep, group)?;
        for w in &self.waypoints[1..] {
            if total_charge(w, rep, group)? != charge {
                return Err(AcfError::Structure(format!(
                    "waypoint {w} changes the total charge"
                )));
            }
        }
        for pair in self.waypoints.windows(2) {
            let dist = pair[0].hamming_distance(&pair[1]);
            if dist == 0 || dist > k {
                return Err(AcfError::Structure(format!(
                    "step {} -> {} moves {dist} positions (k = {k})",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }
}

fn component_name(ct: &ComponentTable, index: usize) -> String {
    let info = &ct.components[index];
    format!("(mu={}, alpha={})", info.charge, info.alpha)
}

/// Deterministic lift of a composition edge: rewrite the lowest-index
/// positions holding surplus letters, filling deficits in ascending letter
/// order.
fn lift_step(current: &BasisString, target: &Composition, d: usize) -> BasisString {
    let have = Composition::of_letters(current.letters(), d);
    let mut surplus: Vec<usize> = Vec::new();
    let mut deficit: Vec<usize> = Vec::new();
    for letter in 0..d {
        let h = have.counts()[letter];
        let w = target.counts()[letter];
        if h > w {
            let mut remaining = h - w;
            for (pos, &l) in current.letters().iter().enumerate() {
                if l == letter && remaining > 0 {
                    surplus.push(pos);
                    remaining -= 1;
                }
            }
        } else {
            for _ in h..w {
                deficit.push(letter);
            }
        }
    }
    surplus.sort_unstable();
    let mut letters = current.letters().to_vec();
    for (pos, letter) in surplus.into_iter().zip(deficit) {
        letters[pos] = letter;
    }
    BasisString::from_raw(letters)
}

/// Shortest composition path (edge count, lexicographic tie-break), lifted to
/// strings, then finished with deterministic swap moves so the final waypoint
/// is exactly the requested string.
pub fn find_path(r: &BasisString, r_prime: &BasisString, ct: &ComponentTable) -> Result<Path> {
    let from = ct.component_of_string(r)?;
    let to = ct.component_of_string(r_prime)?;
    if from != to {
        return Err(AcfError::Reachability {
            from: r.to_string(),
            to: r_prime.to_string(),
            from_component: component_name(ct, from),
            to_component: component_name(ct, to),
        });
    }
    if r == r_prime {
        return Ok(Path {
            waypoints: vec![r.clone()],
        });
    }
    if ct.string_level {
        return string_level_path(r, r_prime, ct);
    }
    let d = ct.rep.d();
    let members = &ct.components[from].members;
    let start = members
        .binary_search(&Composition::of_letters(r.letters(), d))
        .expect("member by construction");
    let goal = members
        .binary_search(&Composition::of_letters(r_prime.letters(), d))
        .expect("member by construction");

    // BFS over member compositions; members are sorted, and scanning
    // neighbors in index order makes the parent choice lexicographic.
    let mut parent = vec![usize::MAX; members.len()];
    let mut dist = vec![usize::MAX; members.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            break;
        }
        for next in 0..members.len() {
            if dist[next] == usize::MAX && members[cur].move_size(&members[next]) <= ct.k {
                dist[next] = dist[cur] + 1;
                parent[next] = cur;
                queue.push_back(next);
            }
        }
    }
    let mut comp_path = vec![goal];
    let mut cur = goal;
    while cur != start {
        cur = parent[cur];
        comp_path.push(cur);
    }
    comp_path.reverse();

    let mut waypoints = vec![r.clone()];
    for &idx in &comp_path[1..] {
        let next = lift_step(waypoints.last().unwrap(), &members[idx], d);
        waypoints.push(next);
    }
    // Swap-sort the final string into r_prime; each swap changes 2 positions.
    let mut current = waypoints.last().unwrap().clone();
    for i in 0..current.len() {
        if current.letters()[i] == r_prime.letters()[i] {
            continue;
        }
        let j = (i + 1..current.len())
            .find(|&j| {
                current.letters()[j] == r_prime.letters()[i]
                    && current.letters()[j] != r_prime.letters()[j]
            })
            .or_else(|| {
                (i + 1..current.len()).find(|&j| current.letters()[j] == r_prime.letters()[i])
            })
            .expect("equal compositions leave a donor position");
        let mut letters = current.letters().to_vec();
        letters.swap(i, j);
        current = BasisString::from_raw(letters);
        waypoints.push(current.clone());
    }
    Ok(Path { waypoints })
}

fn string_level_path(r: &BasisString, r_prime: &BasisString, ct: &ComponentTable) -> Result<Path> {
    let index = ct.component_of_string(r)?;
    let members: Vec<BasisString> = ct
        .by_string
        .iter()
        .filter(|(_, &c)| c == index)
        .map(|(s, _)| s.clone())
        .collect();
    let pos_of = |s: &BasisString| members.binary_search(s).expect("member");
    let start = pos_of(r);
    let goal = pos_of(r_prime);
    let mut parent = vec![usize::MAX; members.len()];
    let mut dist = vec![usize::MAX; members.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            break;
        }
        for next in 0..members.len() {
            if dist[next] == usize::MAX && members[cur].hamming_distance(&members[next]) <= ct.k {
                dist[next] = dist[cur] + 1;
                parent[next] = cur;
                queue.push_back(next);
            }
        }
    }
    let mut path = vec![goal];
    let mut cur = goal;
    while cur != start {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Ok(Path {
        waypoints: path.into_iter().map(|i| members[i].clone()).collect(),
    })
}

/// One redistribution generator: an equal-charge pair of strings over at most
/// k qudits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedistGenerator {
    pub t: BasisString,
    pub t_prime: BasisString,
}

/// True when embedded applications of the generators connect every pair of
/// equal-charge k-letter strings. This is the checkable criterion for a gate
/// family to reach semi-universality.
pub fn check_hredist_transitive(
    hredist: &[RedistGenerator],
    rep: &QuditRep,
    group: &AbelianGroupSpec,
    k: usize,
    budget: &ResourceBudget,
) -> Result<bool> {
    for g in hredist {
        if g.t.len() != g.t_prime.len() {
            return Err(AcfError::InvalidGenerator(format!(
                "pair ({}, {}) has mismatched lengths",
                g.t, g.t_prime
            )));
        }
        if g.t.len() > k || g.t.is_empty() {
            return Err(AcfError::InvalidGenerator(format!(
                "pair ({}, {}) must act on 1..=k qudits",
                g.t, g.t_prime
            )));
        }
        if g.t == g.t_prime {
            return Err(AcfError::InvalidGenerator(format!(
                "pair ({}, {}) is trivial",
                g.t, g.t_prime
            )));
        }
        let ct = total_charge(&g.t, rep, group)?;
        let ct2 = total_charge(&g.t_prime, rep, group)?;
        if ct != ct2 {
            return Err(AcfError::InvalidGenerator(format!(
                "pair ({}, {}) changes the total charge: {ct} vs {ct2}",
                g.t, g.t_prime
            )));
        }
    }
    let d = rep.d();
    let cap = budget.dense_cap.max(1 << 16);
    let size = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(AcfError::Resource {
            what: "transitivity check over B_k".into(),
            needed: size,
            cap,
        });
    }
    let size = size as usize;
    let charges: Vec<Charge> = (0..size)
        .map(|i| total_charge(&BasisString::from_index(i, k, d), rep, group))
        .collect::<Result<Vec<_>>>()?;

    fn root(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut uf: Vec<usize> = (0..size).collect();
    let positions: Vec<usize> = (0..k).collect();
    for g in hredist {
        for embedding in ordered_injections(&positions, g.t.len()) {
            for idx in 0..size {
                let s = BasisString::from_index(idx, k, d);
                let matches = embedding
                    .iter()
                    .zip(g.t.letters())
                    .all(|(&pos, &lt)| s.letters()[pos] == lt);
                if !matches {
                    continue;
                }
                let mut letters = s.letters().to_vec();
                for (&pos, &lt) in embedding.iter().zip(g.t_prime.letters()) {
                    letters[pos] = lt;
                }
                let target = BasisString::from_raw(letters).to_index(d);
                let (a, b) = (root(&mut uf, idx), root(&mut uf, target));
                if a != b {
                    uf[a] = b;
                }
            }
        }
    }
    let mut class_by_charge: BTreeMap<&Charge, usize> = BTreeMap::new();
    for idx in 0..size {
        let r = root(&mut uf, idx);
        match class_by_charge.get(&charges[idx]) {
            None => {
                class_by_charge.insert(&charges[idx], r);
            }
            Some(&existing) if existing != r => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

/// All ordered l-tuples of distinct elements of `items`.
fn ordered_injections(items: &[usize], l: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], l: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == l {
            out.push(prefix.clone());
            return;
        }
        for &x in items {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(items, l, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(items, l, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sector::enumerate_sectors;
    use crate::symmetry::{AbelianGroupSpec, QuditRep};
    use proptest::prelude::*;

    fn build(group: &AbelianGroupSpec, rep: &QuditRep, n: usize, k: usize) -> ComponentTable {
        let table = enumerate_sectors(rep, group, n, &ResourceBudget::default()).unwrap();
        components(&table, k).unwrap()
    }

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
    fn z3_components_split_then_merge() {
        let (g, rep) = zp_qubits(3);
        let ct2 = build(&g, &rep, 4, 2);
        assert_eq!(ct2.num_components(), 5);
        assert!(!is_semi_universal(&ct2).unwrap());
        assert_eq!(commutant_dim(&ct2), 5);

        let ct3 = build(&g, &rep, 4, 3);
        assert_eq!(ct3.num_components(), 3);
        assert_eq!(ct3.num_sectors(), 3);
        assert!(is_semi_universal(&ct3).unwrap());
    }

    #[test]
    fn u1_always_transitive_at_k2() {
        let (g, rep) = u1_qubits();
        let ct = build(&g, &rep, 4, 2);
        assert_eq!(ct.num_components(), 5);
        assert!(is_semi_universal(&ct).unwrap());
    }

    #[test]
    fn full_hamming_moves_connect_sectors() {
        let (g, rep) = zp_qubits(3);
        let ct = build(&g, &rep, 4, 4);
        assert!(is_semi_universal(&ct).unwrap());
    }

    #[test]
    fn z2_three_qubits() {
        let (g, rep) = zp_qubits(2);
        let ct = build(&g, &rep, 3, 2);
        assert_eq!(commutant_dim(&ct), 2);
        assert!(is_semi_universal(&ct).unwrap());
    }

    #[test]
    fn trivial_rep_single_component() {
        let g = AbelianGroupSpec::u1();
        let rep = QuditRep::trivial(2, &g).unwrap();
        let ct = build(&g, &rep, 3, 2);
        assert_eq!(commutant_dim(&ct), 1);
    }

    #[test]
    fn k1_table_is_string_level_and_refuses_verdict() {
        let (g, rep) = u1_qubits();
        let table = enumerate_sectors(&rep, &g, 3, &ResourceBudget::default()).unwrap();
        let ct = components(&table, 1).unwrap();
        assert!(ct.is_string_level());
        assert!(is_semi_universal(&ct).is_err());
        // U(1) qubit letters carry distinct charges: k=1 freezes every string.
        assert_eq!(ct.num_components(), 8);
    }

    #[test]
    fn component_dims_sum_to_sector_dims() {
        let (g, rep) = zp_qubits(3);
        let table = enumerate_sectors(&rep, &g, 5, &ResourceBudget::default()).unwrap();
        let ct = components(&table, 2).unwrap();
        for sector in table.sectors() {
            let total: u128 = ct
                .components()
                .iter()
                .filter(|c| c.charge == sector.charge)
                .map(|c| c.dim)
                .sum();
            assert_eq!(total, sector.dim);
        }
    }

    #[test]
    fn find_path_same_string() {
        let (g, rep) = u1_qubits();
        let ct = build(&g, &rep, 4, 2);
        let r = BasisString::new(vec![0, 1, 1, 0], &rep).unwrap();
        let p = find_path(&r, &r, &ct).unwrap();
        assert_eq!(p.waypoints.len(), 1);
        let _ = g;
    }

    #[test]
    fn find_path_swap_pairs() {
        let (g, rep) = u1_qubits();
        let ct = build(&g, &rep, 4, 2);
        let r = BasisString::new(vec![0, 0, 1, 1], &rep).unwrap();
        let rp = BasisString::new(vec![1, 1, 0, 0], &rep).unwrap();
        let p = find_path(&r, &rp, &ct).unwrap();
        assert_eq!(p.waypoints.len(), 3);
        assert_eq!(p.waypoints.first().unwrap(), &r);
        assert_eq!(p.waypoints.last().unwrap(), &rp);
        p.validate(&rep, &g, 2).unwrap();
    }

    #[test]
    fn find_path_z3_annihilation() {
        let (g, rep) = zp_qubits(3);
        let ct = build(&g, &rep, 4, 3);
        let r = BasisString::new(vec![1, 1, 1, 0], &rep).unwrap();
        let rp = BasisString::new(vec![0, 0, 0, 0], &rep).unwrap();
        let p = find_path(&r, &rp, &ct).unwrap();
        assert_eq!(p.waypoints.len(), 2);
        p.validate(&rep, &g, 3).unwrap();
    }

    #[test]
    fn find_path_rejects_cross_component() {
        let (g, rep) = zp_qubits(3);
        let ct = build(&g, &rep, 4, 2);
        let r = BasisString::new(vec![0, 0, 0, 0], &rep).unwrap();
        let rp = BasisString::new(vec![1, 1, 1, 0], &rep).unwrap();
        match find_path(&r, &rp, &ct) {
            Err(AcfError::Reachability {
                from_component,
                to_component,
                ..
            }) => assert_ne!(from_component, to_component),
            other => panic!("expected reachability error, got {other:?}"),
        }
    }

    #[test]
    fn hredist_examples() {
        let budget = ResourceBudget::default();
        let (u1, repu) = u1_qubits();
        let hop = RedistGenerator {
            t: BasisString::new(vec![0, 1], &repu).unwrap(),
            t_prime: BasisString::new(vec![1, 0], &repu).unwrap(),
        };
        assert!(check_hredist_transitive(&[hop.clone()], &repu, &u1, 3, &budget).unwrap());

        let (g2, rep2) = zp_qubits(2);
        let hop2 = RedistGenerator {
            t: BasisString::new(vec![0, 1], &rep2).unwrap(),
            t_prime: BasisString::new(vec![1, 0], &rep2).unwrap(),
        };
        assert!(!check_hredist_transitive(&[hop2.clone()], &rep2, &g2, 2, &budget).unwrap());

        let pair = RedistGenerator {
            t: BasisString::new(vec![0, 0], &rep2).unwrap(),
            t_prime: BasisString::new(vec![1, 1], &rep2).unwrap(),
        };
        assert!(check_hredist_transitive(&[hop2, pair], &rep2, &g2, 2, &budget).unwrap());
    }

    #[test]
    fn hredist_rejects_charge_violation() {
        let budget = ResourceBudget::default();
        let (u1, repu) = u1_qubits();
        let bad = RedistGenerator {
            t: BasisString::new(vec![0, 0], &repu).unwrap(),
            t_prime: BasisString::new(vec![1, 1], &repu).unwrap(),
        };
        assert!(matches!(
            check_hredist_transitive(&[bad], &repu, &u1, 2, &budget),
            Err(AcfError::InvalidGenerator(_))
        ));
    }

    #[test]
    fn matches_string_brute_force() {
        use crate::symmetry::Charge;
        let cases: Vec<(AbelianGroupSpec, QuditRep, usize)> = vec![
            {
                let (g, r) = u1_qubits();
                (g, r, 4)
            },
            {
                let (g, r) = zp_qubits(2);
                (g, r, 4)
            },
            {
                let (g, r) = zp_qubits(3);
                (g, r, 5)
            },
            {
                let g = AbelianGroupSpec::cyclic(4).unwrap();
                let r = QuditRep::new(
                    vec![
                        Charge::new(vec![0], &g).unwrap(),
                        Charge::new(vec![1], &g).unwrap(),
                        Charge::new(vec![2], &g).unwrap(),
                    ],
                    &g,
                )
                .unwrap();
                (g, r, 3)
            },
        ];
        for (g, rep, n) in cases {
            for k in 2..=n {
                let ct = build(&g, &rep, n, k);
                let brute = string_components_brute_force(&rep, &g, n, k).unwrap();
                let mut brute_classes: BTreeMap<usize, Vec<BasisString>> = BTreeMap::new();
                for (s, c) in brute {
                    brute_classes.entry(c).or_default().push(s);
                }
                assert_eq!(ct.num_components(), brute_classes.len(), "n={n} k={k}");
                for class in brute_classes.values() {
                    let first = ct.component_of_string(&class[0]).unwrap();
                    for s in class {
                        assert_eq!(ct.component_of_string(s).unwrap(), first);
                    }
                    assert_eq!(ct.components()[first].dim, class.len() as u128);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Raising k coarsens the partition.
        #[test]
        fn partitions_coarsen_with_k(p in 2u64..5, n in 2usize..6) {
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::qubit(&g).unwrap();
            let table = enumerate_sectors(&rep, &g, n, &ResourceBudget::default()).unwrap();
            let mut prev = components(&table, 2).unwrap();
            for k in 3..=n {
                let cur = components(&table, k).unwrap();
                prop_assert!(cur.num_components() <= prev.num_components());
                for info in prev.components() {
                    let targets: std::collections::BTreeSet<usize> = info
                        .members
                        .iter()
                        .map(|c| cur.component_of_composition(c).unwrap())
                        .collect();
                    prop_assert_eq!(targets.len(), 1);
                }
                prev = cur;
            }
        }

        /// k >= l_min + 1 makes every sector a single component (finite groups).
        #[test]
        fn reservoir_bound(p in 2u64..5, n in 2usize..7) {
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::qubit(&g).unwrap();
            let lmin = crate::symmetry::min_compression_length(&rep, &g, n).unwrap();
            let k = (lmin + 1).min(n);
            if k >= 2 {
                let table = enumerate_sectors(&rep, &g, n, &ResourceBudget::default()).unwrap();
                let ct = components(&table, k).unwrap();
                prop_assert_eq!(ct.num_components(), ct.num_sectors());
            }
        }

        /// find_path output always validates, for random same-component pairs.
        #[test]
        fn paths_validate(p in 2u64..4, n in 3usize..6, seed in 0u64..500) {
            let g = AbelianGroupSpec::cyclic(p).unwrap();
            let rep = QuditRep::qubit(&g).unwrap();
            let k = (p as usize).min(n);
            prop_assume!(k >= 2);
            let table = enumerate_sectors(&rep, &g, n, &ResourceBudget::default()).unwrap();
            let ct = components(&table, k).unwrap();
            let size = 2usize.pow(n as u32);
            let a = BasisString::from_index(seed as usize % size, n, 2);
            let ca = ct.component_of_string(&a).unwrap();
            let b = (0..size)
                .map(|i| BasisString::from_index(i, n, 2))
                .find(|s| ct.component_of_string(s).unwrap() == ca && s != &a);
            if let Some(b) = b {
                let path = find_path(&a, &b, &ct).unwrap();
                path.validate(&rep, &g, k).unwrap();
                prop_assert_eq!(path.waypoints.first().unwrap(), &a);
                prop_assert_eq!(path.waypoints.last().unwrap(), &b);
            }
        }
    }
}
