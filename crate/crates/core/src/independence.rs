//! Rosenthal independence of set systems and function families, VC dimension
//! and dual set systems.
//!
//! A finite family `C_1..C_k` of subsets of a ground set is independent when
//! every one of the `2^k` cells `⋂_{i∈P} C_i ∩ ⋂_{j∉P} C_jᶜ` is nonempty.
//! (Requiring only the full patterns is equivalent to requiring all disjoint
//! `(P, M)` patterns: each partial pattern contains a full one.)
//!
//! A family of functions is independent when for some thresholds `a < b` the
//! sets `{f_i <= a}` and `{f_i >= b}` form independent patterns. On finite
//! value sets only the gaps between consecutive values matter: inside the gap
//! `(v_j, v_{j+1})` the low sets are `{f <= v_j}` and the high sets their
//! complements, so each gap reduces to the set case.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use crate::algebra::{median3, MedianAlgebra};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::limits::Limit;
use crate::rational::{int, Rational, RationalFunctionTable};
use crate::walls::{Separation, WallSystem};

/// A finite family of subsets of `{0, .., ground-1}`; duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground: usize,
    sets: Vec<ElementSet>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndResult {
    pub ind: usize,
    /// Indices of one largest independent subfamily.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcResult {
    pub vc: usize,
    /// One largest shattered subset of the ground set.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSystem {
    /// Ground set = indices of the primal sets; one set `R_x` per distinct point signature.
    pub system: SetSystem,
    /// `representative[j]` is the first primal point with signature `j`.
    pub representative: Vec<usize>,
    /// Number of primal points whose signature repeated an earlier one.
    pub collapsed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndVcReport {
    pub ind: usize,
    pub dual_vc: usize,
    pub equal: bool,
}

impl SetSystem {
    pub fn new(ground: usize, sets: Vec<ElementSet>) -> Result<Self> {
        if let Some(i) = sets.iter().position(|s| s.universe() != ground) {
            return Err(Error::malformed(format!(
                "set {i} lives on a ground set of size {}, expected {ground}",
                sets[i].universe()
            )));
        }
        Ok(SetSystem {
            ground,
            sets,
            labels: None,
        })
    }

    /// From member lists; an out-of-range id names its set and position.
    pub fn from_members(ground: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for (i, members) in sets.iter().enumerate() {
            if let Some(j) = members.iter().position(|&x| x >= ground) {
                return Err(Error::malformed(format!(
                    "set {i} position {j}: id {} outside ground set of size {ground}",
                    members[j]
                )));
            }
            out.push(ElementSet::from_members(ground, members.iter().copied()));
        }
        Self::new(ground, out)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, s: ElementSet) -> Result<()> {
        if s.universe() != self.ground {
            return Err(Error::malformed("set lives on a different ground set"));
        }
        self.sets.push(s);
        Ok(())
    }

    /// Pairs `(first, later)` of indices holding equal sets.
    pub fn duplicates(&self) -> Vec<(usize, usize)> {
        let mut first: HashMap<&ElementSet, usize> = HashMap::new();
        let mut out = Vec::new();
        for (i, s) in self.sets.iter().enumerate() {
            match first.get(s) {
                Some(&j) => out.push((j, i)),
                None => {
                    first.insert(s, i);
                }
            }
        }
        out
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &i in indices {
            if i >= self.sets.len() {
                return Err(Error::precondition(format!("set index {i} out of range")));
            }
            if !seen.insert(i) {
                return Err(Error::precondition(format!("set index {i} repeated")));
            }
        }
        Ok(())
    }

    /// All `2^k` full sign cells of the chosen sets are nonempty.
    pub fn is_independent_family(&self, indices: &[usize]) -> Result<bool> {
        self.check_indices(indices)?;
        Limit::SetIndependenceMaxK.check(indices.len())?;
        let mut cells = vec![ElementSet::full(self.ground)];
        for &i in indices {
            match refine(&cells, &self.sets[i]) {
                Some(next) => cells = next,
                None => return Ok(false),
            }
        }
        Ok(cells.iter().all(|c| !c.is_empty()))
    }

    /// Pairs of sets whose four cells are all nonempty. Every independent
    /// family is a clique here.
    pub fn pairwise_graph(&self) -> Vec<ElementSet> {
        let k = self.sets.len();
        let mut adj = vec![ElementSet::empty(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if crate::walls::crossing(&self.sets[i], &self.sets[j]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        adj
    }

    /// Independence number with a witness subfamily (lexicographically first among the largest).
    pub fn ind(&self) -> IndResult {
        let adj = self.pairwise_graph();
        let k = self.sets.len();
        let mut best = Vec::new();
        let starts: Vec<usize> = (0..k)
            .filter(|&i| {
                let s = &self.sets[i];
                !s.is_empty() && !s.is_full()
            })
            .collect();
        let mut candidates = ElementSet::from_members(k, starts.iter().copied());
        for &v in &starts {
            if candidates.len() < best.len() {
                break;
            }
            candidates.remove(v);
            let cells = refine(&[ElementSet::full(self.ground)], &self.sets[v]).expect("proper nonempty set");
            let next = candidates.intersection(&adj[v]);
            let mut current = vec![v];
            self.extend(&adj, &mut current, cells, next, &mut best);
        }
        IndResult {
            ind: best.len(),
            witness: best,
        }
    }

    fn extend(
        &self,
        adj: &[ElementSet],
        current: &mut Vec<usize>,
        cells: Vec<ElementSet>,
        mut candidates: ElementSet,
        best: &mut Vec<usize>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        // 2^(k+1) nonempty disjoint cells need at least that many points.
        if (1usize << current.len().min(63)) * 2 > self.ground {
            return;
        }
        while let Some(v) = candidates.first() {
            if current.len() + candidates.len() <= best.len() {
                return;
            }
            candidates.remove(v);
            if let Some(next_cells) = refine(&cells, &self.sets[v]) {
                current.push(v);
                self.extend(adj, current, next_cells, candidates.intersection(&adj[v]), best);
                current.pop();
            }
        }
    }

    /// Largest shattered subset of the ground set, grown level by level from
    /// shattered sets only (subsets of shattered sets are shattered).
    pub fn vc_dimension(&self) -> Result<VcResult> {
        Limit::VcGroundMax.check(self.ground)?;
        if self.sets.is_empty() {
            return Ok(VcResult { vc: 0, witness: vec![] });
        }
        let mut level: Vec<Vec<usize>> = vec![vec![]];
        let mut best = vec![];
        while !level.is_empty() {
            best = level[0].clone();
            let mut next = Vec::new();
            for t in &level {
                let start = t.last().map_or(0, |&m| m + 1);
                for x in start..self.ground {
                    let mut candidate = t.clone();
                    candidate.push(x);
                    if self.shatters(&candidate) {
                        next.push(candidate);
                    }
                }
            }
            level = next;
        }
        Ok(VcResult {
            vc: best.len(),
            witness: best,
        })
    }

    /// `{C ∩ T : C}` is the full power set of `T`.
    pub fn shatters(&self, t: &[usize]) -> bool {
        let k = t.len();
        if k >= usize::BITS as usize || (1usize << k) > self.sets.len() {
            return false;
        }
        let mut seen = vec![false; 1 << k];
        let mut distinct = 0;
        for s in &self.sets {
            let trace = t
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &x)| acc | (usize::from(s.contains(x)) << i));
            if !seen[trace] {
                seen[trace] = true;
                distinct += 1;
            }
        }
        distinct == 1 << k
    }

    /// The incidence-transposed system: ground = set indices, one set
    /// `R_x = {i : x ∈ C_i}` per point, repeated signatures kept once.
    pub fn dual(&self) -> DualSystem {
        let k = self.sets.len();
        let mut seen: HashMap<ElementSet, usize> = HashMap::new();
        let mut sets = Vec::new();
        let mut representative = Vec::new();
        for x in 0..self.ground {
            let r = ElementSet::from_members(k, (0..k).filter(|&i| self.sets[i].contains(x)));
            if !seen.contains_key(&r) {
                seen.insert(r.clone(), sets.len());
                sets.push(r);
                representative.push(x);
            }
        }
        let collapsed = self.ground - sets.len();
        DualSystem {
            system: SetSystem {
                ground: k,
                sets,
                labels: Some(representative.iter().map(|x| format!("R_{x}")).collect()),
            },
            representative,
            collapsed,
        }
    }

    /// Computes `ind` by subfamily search and the dual VC dimension by
    /// shattering, independently, and compares them.
    pub fn check_ind_equals_dual_vc(&self) -> Result<IndVcReport> {
        let ind = self.ind().ind;
        let dual_vc = self.dual().system.vc_dimension()?.vc;
        Ok(IndVcReport {
            ind,
            dual_vc,
            equal: ind == dual_vc,
        })
    }
}

/// Splits every cell by `s`; `None` if some piece is empty.
fn refine(cells: &[ElementSet], s: &ElementSet) -> Option<Vec<ElementSet>> {
    let mut out = Vec::with_capacity(cells.len() * 2);
    for c in cells {
        let inside = c.intersection(s);
        let outside = c.difference(s);
        if inside.is_empty() || outside.is_empty() {
            return None;
        }
        out.push(inside);
        out.push(outside);
    }
    Some(out)
}

/// Rational-valued functions on a common carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionFamily {
    n: usize,
    functions: Vec<RationalFunctionTable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionIndependence {
    pub independent: bool,
    /// Witnessing `(a, b)`: the quarter points of the first gap that works.
    pub thresholds: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionInd {
    pub ind: usize,
    pub witness: Vec<usize>,
    pub thresholds: Option<(Rational, Rational)>,
}

fn quarter_points(lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let four = int(4);
    let three = int(3);
    ((&three * lo + hi) / &four, (lo + &three * hi) / &four)
}

impl FunctionFamily {
    pub fn new(n: usize, functions: Vec<RationalFunctionTable>) -> Result<Self> {
        if let Some(i) = functions.iter().position(|f| f.n() != n) {
            return Err(Error::malformed(format!(
                "function {i} has {} values, expected {n}",
                functions[i].n()
            )));
        }
        Ok(FunctionFamily { n, functions })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn functions(&self) -> &[RationalFunctionTable] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    fn merged_values<'a>(&self, chosen: impl Iterator<Item = &'a RationalFunctionTable>) -> Vec<Rational> {
        let all: BTreeSet<Rational> = chosen.flat_map(|f| f.values().iter().cloned()).collect();
        all.into_iter().collect()
    }

    /// High sets `{f >= hi}` of every function for one value gap.
    fn high_sets(&self, hi: &Rational) -> SetSystem {
        SetSystem {
            ground: self.n,
            sets: self.functions.iter().map(|f| f.superlevel(hi)).collect(),
            labels: None,
        }
    }

    /// Searches the value gaps of the chosen functions for thresholds `a < b`
    /// making every low/high pattern nonempty.
    pub fn is_independent(&self, indices: &[usize]) -> Result<FunctionIndependence> {
        let mut seen = BTreeSet::new();
        for &i in indices {
            if i >= self.functions.len() || !seen.insert(i) {
                return Err(Error::precondition(format!("function index {i} invalid or repeated")));
            }
        }
        Limit::FunctionIndependenceMaxK.check(indices.len())?;
        let values = self.merged_values(indices.iter().map(|&i| &self.functions[i]));
        for gap in values.windows(2) {
            let highs = self.high_sets(&gap[1]);
            let local: Vec<usize> = indices.to_vec();
            if highs.is_independent_family(&local)? {
                return Ok(FunctionIndependence {
                    independent: true,
                    thresholds: Some(quarter_points(&gap[0], &gap[1])),
                });
            }
        }
        Ok(FunctionIndependence {
            independent: false,
            thresholds: None,
        })
    }

    /// Largest independent subfamily over all threshold gaps.
    pub fn ind(&self) -> FunctionInd {
        let values = self.merged_values(self.functions.iter());
        let mut best = FunctionInd {
            ind: 0,
            witness: vec![],
            thresholds: None,
        };
        for gap in values.windows(2) {
            let r = self.high_sets(&gap[1]).ind();
            if r.ind > best.ind {
                best = FunctionInd {
                    ind: r.ind,
                    witness: r.witness,
                    thresholds: Some(quarter_points(&gap[0], &gap[1])),
                };
            }
        }
        best
    }

    /// Distinct functions only, first occurrence kept.
    pub fn dedup(&self) -> Self {
        let mut seen = BTreeSet::new();
        let functions = self
            .functions
            .iter()
            .filter(|f| seen.insert(f.values().to_vec()))
            .cloned()
            .collect();
        FunctionFamily { n: self.n, functions }
    }

    /// Every MP map from `a` to the chain `{0, 1/(m-1), .., 1}`, in
    /// lexicographic order of value vectors.
    ///
    /// Backtracking over element values; each assignment propagates forced
    /// values `f(m(x,y,z)) = med(f(x), f(y), f(z))` through all assigned pairs.
    pub fn all_mp_maps(a: &MedianAlgebra, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::precondition("target chain must be nonempty"));
        }
        let n = a.n();
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut values = vec![usize::MAX; n];
        mp_search(a, m, &mut values, &mut found);
        let scale = if m == 1 { Rational::one() } else { int(m as i64 - 1) };
        let functions = found
            .into_iter()
            .map(|v| RationalFunctionTable::new(v.into_iter().map(|x| int(x as i64) / &scale).collect()))
            .collect();
        Self::new(n, functions)
    }
}

fn mp_search(a: &MedianAlgebra, m: usize, values: &mut [usize], found: &mut Vec<Vec<usize>>) {
    let Some(x) = values.iter().position(|&v| v == usize::MAX) else {
        found.push(values.to_vec());
        return;
    };
    for v in 0..m {
        let mut trail = Vec::new();
        if assign(a, values, x, v, &mut trail) {
            mp_search(a, m, values, found);
        }
        for y in trail {
            values[y] = usize::MAX;
        }
    }
}

/// Sets `values[x] = v` and propagates; records every assignment in `trail`.
fn assign(a: &MedianAlgebra, values: &mut [usize], x: usize, v: usize, trail: &mut Vec<usize>) -> bool {
    values[x] = v;
    trail.push(x);
    let mut queue = vec![x];
    while let Some(y) = queue.pop() {
        let assigned: Vec<usize> = (0..values.len()).filter(|&i| values[i] != usize::MAX).collect();
        for (i, &p) in assigned.iter().enumerate() {
            for &q in &assigned[i..] {
                let w = a.median(y, p, q);
                let want = median3(values[y], values[p], values[q]);
                if values[w] == usize::MAX {
                    values[w] = want;
                    trail.push(w);
                    queue.push(w);
                } else if values[w] != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Splits an MP function at `a < b` and separates its level sets by a wall.
///
/// `L = {f <= a}` and `R = {f >= b}` are convex because `f` is MP; the wall
/// returned has `L` on one side and `R` on the other.
pub fn separate_level_sets(
    walls: &WallSystem,
    f: &RationalFunctionTable,
    a: &Rational,
    b: &Rational,
) -> Result<Separation> {
    let alg = walls.algebra();
    if let Some(w) = f.mp_witness(alg)? {
        return Err(Error::precondition(format!("function is not median-preserving at {w:?}")));
    }
    if a >= b {
        return Err(Error::precondition("thresholds must satisfy a < b"));
    }
    let low = f.sublevel(a);
    let high = f.superlevel(b);
    if low.is_empty() || high.is_empty() {
        return Err(Error::precondition("a level set is empty"));
    }
    if !alg.is_convex(&low) || !alg.is_convex(&high) {
        return Err(Error::Invariant("level set of an MP function is not convex".into()));
    }
    walls.kakutani_separate(&low, &high)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn halfspace_system(a: &MedianAlgebra) -> SetSystem {
        let ws = WallSystem::new(a);
        SetSystem::new(a.n(), ws.halfspaces().to_vec()).unwrap()
    }

    /// Literal definition: every disjoint (P, M) over the chosen sets has a point.
    fn oracle_independent(s: &SetSystem, idx: &[usize]) -> bool {
        let k = idx.len();
        let mut code = vec![0u8; k];
        loop {
            let ok = (0..s.ground()).any(|x| {
                idx.iter().zip(&code).all(|(&i, &c)| match c {
                    1 => s.sets()[i].contains(x),
                    2 => !s.sets()[i].contains(x),
                    _ => true,
                })
            });
            if !ok {
                return false;
            }
            let mut p = 0;
            while p < k && code[p] == 2 {
                code[p] = 0;
                p += 1;
            }
            if p == k {
                return true;
            }
            code[p] += 1;
        }
    }

    fn oracle_ind(s: &SetSystem) -> usize {
        let k = s.len();
        (0u64..1 << k)
            .filter(|&m| {
                let idx: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).collect();
                oracle_independent(s, &idx)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn oracle_vc(s: &SetSystem) -> usize {
        let g = s.ground();
        if s.is_empty() {
            return 0;
        }
        (0u64..1 << g)
            .filter(|&m| {
                let t: Vec<usize> = (0..g).filter(|&i| m >> i & 1 == 1).collect();
                let traces: BTreeSet<Vec<bool>> =
                    s.sets().iter().map(|c| t.iter().map(|&x| c.contains(x)).collect()).collect();
                traces.len() == 1 << t.len()
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn random_system(rng: &mut ChaCha8Rng, ground: usize, count: usize) -> SetSystem {
        let sets = (0..count)
            .map(|_| ElementSet::from_mask(ground, rng.random::<u64>()))
            .collect();
        SetSystem::new(ground, sets).unwrap()
    }

    #[test]
    fn independence_examples() {
        let s = halfspace_system(&MedianAlgebra::hypercube(2).unwrap());
        // Halfspaces in lexicographic order: {0,1}, {0,2}, {1,3}, {2,3}.
        assert!(s.is_independent_family(&[0, 1]).unwrap());
        assert!(!s.is_independent_family(&[0, 3]).unwrap());
        let c = SetSystem::from_members(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!c.is_independent_family(&[0, 1]).unwrap());
        assert!(c.is_independent_family(&[0]).unwrap());
        assert!(c.is_independent_family(&[0, 0]).is_err());
        let big = SetSystem::new(2, vec![ElementSet::from_members(2, [0]); 25]).unwrap();
        let all: Vec<usize> = (0..25).collect();
        assert!(big.is_independent_family(&all).unwrap_err().is_refusal());
    }

    #[test]
    fn ind_of_halfspace_systems() {
        assert_eq!(halfspace_system(&MedianAlgebra::hypercube(3).unwrap()).ind().ind, 3);
        for k in 2..=7 {
            assert_eq!(halfspace_system(&MedianAlgebra::chain(k).unwrap()).ind().ind, 1);
        }
        assert_eq!(SetSystem::new(5, vec![]).unwrap().ind().ind, 0);
        let trivial = SetSystem::new(3, vec![ElementSet::empty(3), ElementSet::full(3)]).unwrap();
        assert_eq!(trivial.ind().ind, 0);
    }

    #[test]
    fn ind_matches_subfamily_scan_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let ground = rng.random_range(1..=8);
            let count = rng.random_range(0..=7);
            let s = random_system(&mut rng, ground, count);
            let r = s.ind();
            assert_eq!(r.ind, oracle_ind(&s), "{s:?}");
            assert!(oracle_independent(&s, &r.witness));
        }
    }

    #[test]
    fn vc_examples() {
        let q = halfspace_system(&MedianAlgebra::hypercube(2).unwrap());
        assert_eq!(q.vc_dimension().unwrap().vc, 2);
        let singles = SetSystem::from_members(5, &(0..5).map(|i| vec![i]).collect::<Vec<_>>()).unwrap();
        assert_eq!(singles.vc_dimension().unwrap().vc, 1);
        assert_eq!(SetSystem::new(5, vec![]).unwrap().vc_dimension().unwrap().vc, 0);
        let wide = SetSystem::new(30, vec![ElementSet::empty(30)]).unwrap();
        assert!(wide.vc_dimension().unwrap_err().is_refusal());
    }

    #[test]
    fn vc_matches_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let ground = rng.random_range(1..=8);
            let count = rng.random_range(0..=10);
            let s = random_system(&mut rng, ground, count);
            let r = s.vc_dimension().unwrap();
            assert_eq!(r.vc, oracle_vc(&s));
            if !s.is_empty() {
                assert!(s.shatters(&r.witness));
            }
        }
    }

    #[test]
    fn dual_examples() {
        let c = halfspace_system(&MedianAlgebra::chain(3).unwrap());
        let d = c.dual();
        assert_eq!(d.system.ground(), 4);
        assert_eq!(d.system.len(), 3);
        assert_eq!(d.collapsed, 0);
        let whole = SetSystem::new(4, vec![ElementSet::full(4)]).unwrap();
        let d = whole.dual();
        assert_eq!(d.system.sets(), &[ElementSet::full(1)]);
        assert_eq!(d.collapsed, 3);
    }

    #[test]
    fn double_dual_is_transpose_of_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let s = random_system(&mut rng, 7, 5);
            let d = s.dual();
            let dd = d.system.dual();
            // Incidence of dd: dd set j contains point i iff primal point rep[i] lies in primal set rep'[j].
            for (j, set) in dd.system.sets().iter().enumerate() {
                let primal_set = dd.representative[j];
                for (i, &x) in d.representative.iter().enumerate() {
                    assert_eq!(set.contains(i), s.sets()[primal_set].contains(x));
                }
            }
        }
    }

    #[test]
    fn ind_equals_dual_vc_examples() {
        let r = halfspace_system(&MedianAlgebra::hypercube(3).unwrap())
            .check_ind_equals_dual_vc()
            .unwrap();
        assert_eq!(r, IndVcReport { ind: 3, dual_vc: 3, equal: true });
        let e = SetSystem::new(3, vec![]).unwrap().check_ind_equals_dual_vc().unwrap();
        assert_eq!(e, IndVcReport { ind: 0, dual_vc: 0, equal: true });
    }

    #[test]
    fn duplicates_never_raise_ind_or_vc() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let s = random_system(&mut rng, 6, 5);
            let mut doubled = s.clone();
            for set in s.sets() {
                doubled.push(set.clone()).unwrap();
            }
            assert!(doubled.duplicates().len() >= s.len());
            assert_eq!(doubled.ind().ind, s.ind().ind);
            assert_eq!(doubled.vc_dimension().unwrap().vc, s.vc_dimension().unwrap().vc);
        }
    }

    proptest! {
        #[test]
        fn subfamilies_of_independent_families_are_independent(
            masks in prop::collection::vec(any::<u64>(), 1..6), drop in 0usize..6) {
            let sets = masks.iter().map(|&m| ElementSet::from_mask(16, m)).collect();
            let s = SetSystem::new(16, sets).unwrap();
            let all: Vec<usize> = (0..s.len()).collect();
            if s.is_independent_family(&all).unwrap() {
                let sub: Vec<usize> = all.iter().copied().filter(|&i| i != drop % s.len()).collect();
                prop_assert!(s.is_independent_family(&sub).unwrap());
            }
        }

        #[test]
        fn ind_and_vc_monotone_under_adding_sets(
            masks in prop::collection::vec(any::<u64>(), 0..6), extra in any::<u64>()) {
            let sets: Vec<ElementSet> = masks.iter().map(|&m| ElementSet::from_mask(8, m)).collect();
            let s = SetSystem::new(8, sets).unwrap();
            let mut t = s.clone();
            t.push(ElementSet::from_mask(8, extra)).unwrap();
            prop_assert!(t.ind().ind >= s.ind().ind);
            prop_assert!(t.vc_dimension().unwrap().vc >= s.vc_dimension().unwrap().vc);
        }

        #[test]
        fn vc_monotone_under_ground_extension(masks in prop::collection::vec(any::<u8>(), 1..6)) {
            let small = SetSystem::new(8, masks.iter().map(|&m| ElementSet::from_mask(8, m as u64)).collect()).unwrap();
            let large = SetSystem::new(11, masks.iter().map(|&m| ElementSet::from_mask(11, m as u64)).collect()).unwrap();
            prop_assert!(large.vc_dimension().unwrap().vc >= small.vc_dimension().unwrap().vc);
        }
    }

    /// Literal function independence: search (a, b) over all values, midpoints
    /// and quarter points, checking every disjoint (P, M).
    fn oracle_function_independent(f: &FunctionFamily, idx: &[usize]) -> bool {
        let mut vals: Vec<Rational> = f.merged_values(idx.iter().map(|&i| &f.functions()[i]));
        let base = vals.clone();
        for w in base.windows(2) {
            vals.push((&w[0] + &w[1]) / int(2));
            let (a, b) = quarter_points(&w[0], &w[1]);
            vals.push(a);
            vals.push(b);
        }
        vals.sort();
        vals.dedup();
        for a in &vals {
            for b in vals.iter().filter(|b| *b > a) {
                let lows: Vec<ElementSet> = idx.iter().map(|&i| f.functions()[i].sublevel(a)).collect();
                let highs: Vec<ElementSet> = idx.iter().map(|&i| f.functions()[i].superlevel(b)).collect();
                let k = idx.len();
                let all = (0..3usize.pow(k as u32)).all(|mut code| {
                    let mut cell = ElementSet::full(f.n());
                    for j in 0..k {
                        match code % 3 {
                            1 => cell.intersect_with(&lows[j]),
                            2 => cell.intersect_with(&highs[j]),
                            _ => {}
                        }
                        code /= 3;
                    }
                    !cell.is_empty()
                });
                if all {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn function_independence_examples() {
        let q = MedianAlgebra::hypercube(2).unwrap();
        let p1 = RationalFunctionTable::from_ints(&[0, 1, 0, 1]);
        let p2 = RationalFunctionTable::from_ints(&[0, 0, 1, 1]);
        let fam = FunctionFamily::new(4, vec![p1.clone(), p2]).unwrap();
        let r = fam.is_independent(&[0, 1]).unwrap();
        assert!(r.independent);
        assert_eq!(r.thresholds, Some((ratio(1, 4), ratio(3, 4))));
        let neg = RationalFunctionTable::from_ints(&[1, 0, 1, 0]);
        let fam = FunctionFamily::new(4, vec![p1.clone(), neg]).unwrap();
        assert!(!fam.is_independent(&[0, 1]).unwrap().independent);
        let constant = FunctionFamily::new(4, vec![RationalFunctionTable::constant(4, int(1))]).unwrap();
        assert!(!constant.is_independent(&[0]).unwrap().independent);
        assert_eq!(constant.ind().ind, 0);
        let single = FunctionFamily::new(4, vec![p1]).unwrap();
        assert_eq!(single.ind().ind, 1);
        let _ = q;
    }

    #[test]
    fn function_independence_matches_literal_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..120 {
            let n = rng.random_range(2..=7);
            let k = rng.random_range(1..=4);
            let fs = (0..k)
                .map(|_| RationalFunctionTable::new((0..n).map(|_| ratio(rng.random_range(0..4), 3)).collect()))
                .collect();
            let fam = FunctionFamily::new(n, fs).unwrap();
            let idx: Vec<usize> = (0..k).collect();
            assert_eq!(fam.is_independent(&idx).unwrap().independent, oracle_function_independent(&fam, &idx));
            let best = (0u32..1 << k)
                .filter(|m| {
                    let sub: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).collect();
                    sub.is_empty() || oracle_function_independent(&fam, &sub)
                })
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            assert_eq!(fam.ind().ind, best);
        }
    }

    #[test]
    fn open_and_closed_rays_agree_at_quarter_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = 6;
            let fs: Vec<RationalFunctionTable> = (0..3)
                .map(|_| RationalFunctionTable::new((0..n).map(|_| int(rng.random_range(0..3))).collect()))
                .collect();
            let fam = FunctionFamily::new(n, fs.clone()).unwrap();
            if let Some((a, b)) = fam.is_independent(&[0, 1, 2]).unwrap().thresholds {
                for f in &fs {
                    let open_low = ElementSet::from_members(n, (0..n).filter(|&x| f.get(x) < &a));
                    let open_high = ElementSet::from_members(n, (0..n).filter(|&x| f.get(x) > &b));
                    assert_eq!(open_low, f.sublevel(&a));
                    assert_eq!(open_high, f.superlevel(&b));
                }
            }
        }
    }

    #[test]
    fn mp_maps_of_square_and_chain() {
        let q = MedianAlgebra::hypercube(2).unwrap();
        let maps = FunctionFamily::all_mp_maps(&q, 2).unwrap();
        // Two constants and four halfspace indicators.
        assert_eq!(maps.len(), 6);
        assert_eq!(maps.ind().ind, 2);
        let c = MedianAlgebra::chain(5).unwrap();
        let maps = FunctionFamily::all_mp_maps(&c, 3).unwrap();
        for f in maps.functions() {
            assert!(f.is_mp(&c).unwrap());
        }
        assert_eq!(maps.ind().ind, 1);
        let single = FunctionFamily::new(5, vec![RationalFunctionTable::from_ints(&[0, 0, 1, 1, 1])]).unwrap();
        assert_eq!(single.ind().ind, 1);
    }

    #[test]
    fn mp_enumeration_matches_brute_force() {
        for a in [
            MedianAlgebra::grid(&[2, 3]).unwrap(),
            MedianAlgebra::wedge(&[1, 2]).unwrap(),
            MedianAlgebra::chain(4).unwrap(),
        ] {
            for m in 1..=3usize {
                let fast = FunctionFamily::all_mp_maps(&a, m).unwrap();
                let n = a.n();
                let mut count = 0;
                for code in 0..m.pow(n as u32) {
                    let mut c = code;
                    let v: Vec<i64> = (0..n)
                        .map(|_| {
                            let d = (c % m) as i64;
                            c /= m;
                            d
                        })
                        .collect();
                    if RationalFunctionTable::from_ints(&v).is_mp(&a).unwrap() {
                        count += 1;
                    }
                }
                assert_eq!(fast.len(), count, "{a:?} m={m}");
            }
        }
    }

    #[test]
    fn level_set_separation() {
        let g = MedianAlgebra::grid(&[3, 3]).unwrap();
        let ws = WallSystem::new(&g);
        let x = RationalFunctionTable::new((0..9).map(|i| ratio((i % 3) as i64, 2)).collect());
        let s = separate_level_sets(&ws, &x, &ratio(1, 4), &ratio(3, 4)).unwrap();
        // A vertical wall: membership depends on the x coordinate only.
        for y in 0..3 {
            for xx in 0..3 {
                assert_eq!(s.wall.side0.contains(xx + 3 * y), s.wall.side0.contains(xx));
            }
        }
        assert!(s.wall.side0.contains(0) && !s.wall.side0.contains(2));

        let h = &ws.halfspaces()[0];
        let ind = RationalFunctionTable::indicator(h);
        let s = separate_level_sets(&ws, &ind, &ratio(1, 4), &ratio(3, 4)).unwrap();
        assert!(s.wall.side0 == *h || s.wall.side1 == *h);

        let constant = RationalFunctionTable::constant(9, int(1));
        assert!(matches!(
            separate_level_sets(&ws, &constant, &ratio(1, 4), &ratio(3, 4)),
            Err(Error::Precondition(_))
        ));
        let xor = RationalFunctionTable::from_ints(&[0, 1, 0, 1, 0, 1, 0, 1, 1]);
        assert!(separate_level_sets(&ws, &xor, &ratio(1, 4), &ratio(3, 4)).is_err());
    }
}
