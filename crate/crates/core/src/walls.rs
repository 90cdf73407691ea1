//! Halfspaces and walls of a finite median algebra: enumeration, crossing,
//! rank (by clique search and by cube embedding), separation, Helly checks,
//! traces on subalgebras and the diagonal sign embedding.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::MedianAlgebra;
use crate::clique::{cliques_of_size, max_clique};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::limits::Limit;

/// A complementary pair of nonempty convex sets. `side0` holds element 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub side0: ElementSet,
    pub side1: ElementSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfspaceMethod {
    /// One candidate per adjacent pair `u, v`: `{x : m(u, v, x) = u}`.
    EdgeGenerated,
    /// Scan every subset; the oracle for small carriers.
    BruteForce,
}

/// True iff all four intersections of `h1`, `h2` and their complements are nonempty.
pub fn are_crossing(h1: &ElementSet, h2: &ElementSet) -> Result<bool> {
    if h1.universe() != h2.universe() {
        return Err(Error::precondition("halfspaces belong to different carriers"));
    }
    Ok(crossing(h1, h2))
}

pub(crate) fn crossing(h1: &ElementSet, h2: &ElementSet) -> bool {
    let c1 = h1.complement();
    let c2 = h2.complement();
    h1.intersects(h2) && h1.intersects(&c2) && c1.intersects(h2) && c1.intersects(&c2)
}

/// Adjacent pairs `u < v`, i.e. `[u, v] = {u, v}`.
pub fn edges(a: &MedianAlgebra) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..a.n() {
        for v in u + 1..a.n() {
            if a.interval(u, v).len() == 2 {
                out.push((u, v));
            }
        }
    }
    out
}

/// All halfspaces in canonical (lexicographic member) order.
pub fn enumerate_halfspaces(a: &MedianAlgebra, method: HalfspaceMethod) -> Result<Vec<ElementSet>> {
    match method {
        HalfspaceMethod::EdgeGenerated => Ok(edge_generated(a)),
        HalfspaceMethod::BruteForce => brute_force(a),
    }
}

fn edge_generated(a: &MedianAlgebra) -> Vec<ElementSet> {
    let n = a.n();
    let mut found = BTreeSet::new();
    for (u, v) in edges(a) {
        let h = ElementSet::from_members(n, (0..n).filter(|&x| a.median(u, v, x) == u));
        if found.contains(&h) {
            continue;
        }
        let c = h.complement();
        if !h.is_empty() && !c.is_empty() && a.is_convex(&h) && a.is_convex(&c) {
            found.insert(h);
            found.insert(c);
        }
    }
    found.into_iter().collect()
}

fn brute_force(a: &MedianAlgebra) -> Result<Vec<ElementSet>> {
    let n = a.n();
    Limit::BruteHalfspaceMax.check(n)?;
    let mut iv = vec![0u64; n * n];
    for x in 0..n {
        for y in 0..n {
            iv[x * n + y] = a.interval(x, y).as_mask().expect("carrier fits one word");
        }
    }
    let convex = |s: u64| {
        let mut rest = s;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut others = rest;
            while others != 0 {
                let y = others.trailing_zeros() as usize;
                others &= others - 1;
                if iv[x * n + y] & !s != 0 {
                    return false;
                }
            }
        }
        true
    };
    let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut out: Vec<ElementSet> = (1..full)
        .filter(|&s| convex(s) && convex(full & !s))
        .map(|s| ElementSet::from_mask(n, s))
        .collect();
    out.sort();
    Ok(out)
}

/// Outcome of [`WallSystem::helly_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HellyOutcome {
    /// Least element of the common intersection.
    CommonPoint(usize),
    /// The lexicographically least pair `i < j` with `C_i ∩ C_j = ∅`.
    DisjointPair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub wall_index: usize,
    pub wall: Wall,
    /// Whether the first set lies in `side0`.
    pub first_in_side0: bool,
}

/// Walls of the induced algebra on `Q` with no ambient wall restricting to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub q_walls: usize,
    pub failures: Vec<Wall>,
}

impl TraceReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The enumerated halfspaces and walls of one algebra, with derived structure.
#[derive(Debug, Clone)]
pub struct WallSystem {
    algebra: MedianAlgebra,
    halfspaces: Vec<ElementSet>,
    /// `(side0, side1)` indices into `halfspaces`, sorted by side0.
    walls: Vec<(usize, usize)>,
    index: HashMap<ElementSet, usize>,
}

impl WallSystem {
    pub fn new(a: &MedianAlgebra) -> Self {
        Self::from_halfspaces(a, edge_generated(a))
    }

    pub fn with_method(a: &MedianAlgebra, method: HalfspaceMethod) -> Result<Self> {
        Ok(Self::from_halfspaces(a, enumerate_halfspaces(a, method)?))
    }

    fn from_halfspaces(a: &MedianAlgebra, halfspaces: Vec<ElementSet>) -> Self {
        let index: HashMap<ElementSet, usize> =
            halfspaces.iter().enumerate().map(|(i, h)| (h.clone(), i)).collect();
        let mut walls: Vec<(usize, usize)> = halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains(0))
            .map(|(i, h)| (i, index[&h.complement()]))
            .collect();
        walls.sort_by(|a, b| halfspaces[a.0].cmp(&halfspaces[b.0]));
        WallSystem {
            algebra: a.clone(),
            halfspaces,
            walls,
            index,
        }
    }

    pub fn algebra(&self) -> &MedianAlgebra {
        &self.algebra
    }

    pub fn halfspaces(&self) -> &[ElementSet] {
        &self.halfspaces
    }

    pub fn halfspace_index(&self, h: &ElementSet) -> Option<usize> {
        self.index.get(h).copied()
    }

    /// Wall list as index pairs into [`WallSystem::halfspaces`].
    pub fn wall_indices(&self) -> &[(usize, usize)] {
        &self.walls
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn wall(&self, i: usize) -> Wall {
        let (a, b) = self.walls[i];
        Wall {
            side0: self.halfspaces[a].clone(),
            side1: self.halfspaces[b].clone(),
        }
    }

    pub fn walls(&self) -> Vec<Wall> {
        (0..self.walls.len()).map(|i| self.wall(i)).collect()
    }

    /// Neighbourhoods of the crossing graph on walls.
    pub fn crossing_adjacency(&self) -> Vec<ElementSet> {
        let w = self.walls.len();
        let mut adj = vec![ElementSet::empty(w); w];
        for i in 0..w {
            for j in i + 1..w {
                if crossing(&self.halfspaces[self.walls[i].0], &self.halfspaces[self.walls[j].0]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        adj
    }

    pub fn crossing_edges(&self) -> Vec<(usize, usize)> {
        self.crossing_adjacency()
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// A maximum family of pairwise crossing walls (as wall indices).
    pub fn max_crossing_family(&self) -> Vec<usize> {
        max_clique(&self.crossing_adjacency())
    }

    /// Rank as the size of a largest pairwise crossing wall family; 0 for a point.
    pub fn rank_via_crossing(&self) -> usize {
        self.max_crossing_family().len()
    }

    /// An embedding of `{0,1}^k` as a median subalgebra, if one exists:
    /// `result[mask]` is the image of the cube vertex `mask`.
    ///
    /// Candidates for vertex `ε` are drawn from the cell `⋂ W_i^{ε_i}` of a
    /// k-clique of crossing walls; every embedded cube sits in such cells.
    pub fn cube_embedding(&self, k: usize) -> Result<Option<Vec<usize>>> {
        Limit::EmbedMaxK.check(k)?;
        Limit::EmbedMaxN.check(self.algebra.n())?;
        if k == 0 {
            return Ok(Some(vec![0]));
        }
        let adj = self.crossing_adjacency();
        for clique in cliques_of_size(&adj, k) {
            let cells: Vec<ElementSet> = (0..1usize << k)
                .map(|eps| {
                    let mut cell = ElementSet::full(self.algebra.n());
                    for (bit, &w) in clique.iter().enumerate() {
                        let (s0, s1) = self.walls[w];
                        let side = if eps >> bit & 1 == 1 { s1 } else { s0 };
                        cell.intersect_with(&self.halfspaces[side]);
                    }
                    cell
                })
                .collect();
            if cells.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut assigned = vec![usize::MAX; 1 << k];
            if self.place_vertex(&cells, &mut assigned, 0) {
                return Ok(Some(assigned));
            }
        }
        Ok(None)
    }

    fn place_vertex(&self, cells: &[ElementSet], assigned: &mut [usize], next: usize) -> bool {
        if next == cells.len() {
            return true;
        }
        let a = &self.algebra;
        // A triple of placed vertices whose majority is `next` forces its image.
        let mut forced = None;
        'find: for x in 0..next {
            for y in x + 1..next {
                for z in y + 1..next {
                    if (x & y) | (y & z) | (x & z) == next {
                        forced = Some(a.median(assigned[x], assigned[y], assigned[z]));
                        break 'find;
                    }
                }
            }
        }
        let candidates: Vec<usize> = match forced {
            Some(c) if cells[next].contains(c) => vec![c],
            Some(_) => return false,
            None => cells[next].to_vec(),
        };
        for c in candidates {
            assigned[next] = c;
            if self.consistent(assigned, next) && self.place_vertex(cells, assigned, next + 1) {
                return true;
            }
        }
        assigned[next] = usize::MAX;
        false
    }

    /// Checks every triple among placed vertices `0..=last` that involves `last`.
    fn consistent(&self, assigned: &[usize], last: usize) -> bool {
        let a = &self.algebra;
        for x in 0..=last {
            for y in x..=last {
                for z in y..=last {
                    let maj = (x & y) | (y & z) | (x & z);
                    let involved = x == last || y == last || z == last || maj == last;
                    if involved && maj <= last && a.median(assigned[x], assigned[y], assigned[z]) != assigned[maj] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Does `{0,1}^k` embed as a median subalgebra?
    pub fn rank_via_embedding(&self, k: usize) -> Result<bool> {
        Ok(self.cube_embedding(k)?.is_some())
    }

    /// Largest `k` for which a cube embeds, searching upward from 1.
    pub fn max_embedding_rank(&self) -> Result<usize> {
        let mut k = 0;
        while self.rank_via_embedding(k + 1)? {
            k += 1;
        }
        Ok(k)
    }

    /// A wall with `c1` on one side and `c2` on the other: the first in canonical order.
    pub fn kakutani_separate(&self, c1: &ElementSet, c2: &ElementSet) -> Result<Separation> {
        let a = &self.algebra;
        if c1.is_empty() || c2.is_empty() {
            return Err(Error::precondition("separated sets must be nonempty"));
        }
        a.require_convex(c1, "C1")?;
        a.require_convex(c2, "C2")?;
        if c1.intersects(c2) {
            return Err(Error::precondition("separated sets must be disjoint"));
        }
        for (i, &(s0, s1)) in self.walls.iter().enumerate() {
            let (h0, h1) = (&self.halfspaces[s0], &self.halfspaces[s1]);
            let first_in_side0 = if c1.is_subset(h0) && c2.is_subset(h1) {
                true
            } else if c1.is_subset(h1) && c2.is_subset(h0) {
                false
            } else {
                continue;
            };
            return Ok(Separation {
                wall_index: i,
                wall: self.wall(i),
                first_in_side0,
            });
        }
        Err(Error::Invariant(format!("no wall separates {c1:?} from {c2:?}")))
    }

    /// A common point of pairwise intersecting convex sets, or a disjoint pair.
    pub fn helly_check(&self, sets: &[ElementSet]) -> Result<HellyOutcome> {
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::precondition(format!("set {i} is empty")));
            }
            self.algebra.require_convex(s, &format!("C{i}"))?;
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                if sets[i].is_disjoint(&sets[j]) {
                    return Ok(HellyOutcome::DisjointPair(i, j));
                }
            }
        }
        let mut common = ElementSet::full(self.algebra.n());
        for s in sets {
            common.intersect_with(s);
        }
        common
            .first()
            .map(HellyOutcome::CommonPoint)
            .ok_or_else(|| Error::Invariant("pairwise intersecting convex sets with empty intersection".into()))
    }

    /// Every wall of the subalgebra `q` is the trace of an ambient wall.
    pub fn wall_trace_check(&self, q: &ElementSet) -> Result<TraceReport> {
        let (sub, embedding) = self.algebra.subalgebra(q)?;
        let n = self.algebra.n();
        let traces: BTreeSet<ElementSet> = self.halfspaces.iter().map(|h| h.intersection(q)).collect();
        let sub_walls = WallSystem::new(&sub);
        let lift = |s: &ElementSet| ElementSet::from_members(n, s.iter().map(|i| embedding[i]));
        let failures: Vec<Wall> = sub_walls
            .walls()
            .into_iter()
            .map(|w| Wall {
                side0: lift(&w.side0),
                side1: lift(&w.side1),
            })
            .filter(|w| !traces.contains(&w.side0))
            .collect();
        Ok(TraceReport {
            q_walls: sub_walls.wall_count(),
            failures,
        })
    }

    pub fn roller_embedding(&self) -> RollerEmbedding {
        let h = self.halfspaces.len();
        let vectors = (0..self.algebra.n())
            .map(|x| ElementSet::from_members(h, (0..h).filter(|&i| self.halfspaces[i].contains(x))))
            .collect();
        RollerEmbedding {
            algebra: self.algebra.clone(),
            vectors,
        }
    }

    /// `σ(i) = index of g(H_i)`. Fails if some image is not a halfspace.
    pub fn halfspace_permutation(&self, g: &[usize]) -> Result<Vec<usize>> {
        let n = self.algebra.n();
        if g.len() != n {
            return Err(Error::precondition("permutation degree differs from carrier size"));
        }
        self.halfspaces
            .iter()
            .map(|h| {
                let image = ElementSet::from_members(n, h.iter().map(|x| g[x]));
                self.halfspace_index(&image).ok_or_else(|| {
                    Error::precondition(format!("image {image:?} of halfspace {h:?} is not a halfspace"))
                })
            })
            .collect()
    }
}

/// The diagonal sign map `x -> (1[x ∈ H])_H` into the cube over all halfspaces.
#[derive(Debug, Clone)]
pub struct RollerEmbedding {
    algebra: MedianAlgebra,
    /// `vectors[x]` is the set of halfspace indices containing `x`.
    pub vectors: Vec<ElementSet>,
}

impl RollerEmbedding {
    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.universe())
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<&ElementSet> = self.vectors.iter().collect();
        distinct.len() == self.vectors.len()
    }

    /// First triple where `ι(m(x,y,z))` differs from the coordinate-wise majority.
    pub fn mp_witness(&self) -> Option<[usize; 3]> {
        let n = self.algebra.n();
        let v = &self.vectors;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if v[self.algebra.median(x, y, z)] != ElementSet::majority(&v[x], &v[y], &v[z]) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_mp(&self) -> bool {
        self.mp_witness().is_none()
    }

    /// The image is closed under the cube median.
    pub fn image_is_subalgebra(&self) -> bool {
        let image: BTreeSet<&ElementSet> = self.vectors.iter().collect();
        let v = &self.vectors;
        (0..v.len()).all(|x| {
            (x..v.len()).all(|y| (y..v.len()).all(|z| image.contains(&ElementSet::majority(&v[x], &v[y], &v[z]))))
        })
    }

    /// `ι(g x) = σ_g ι(x)` for all `x`, where `σ_g` permutes halfspace coordinates.
    pub fn is_equivariant(&self, walls: &WallSystem, g: &[usize]) -> Result<bool> {
        let sigma = walls.halfspace_permutation(g)?;
        let h = self.dimension();
        Ok((0..self.algebra.n()).all(|x| {
            let moved = ElementSet::from_members(h, self.vectors[x].iter().map(|i| sigma[i]));
            moved == self.vectors[g[x]]
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> ElementSet {
        ElementSet::from_members(n, v.iter().copied())
    }

    #[test]
    fn square_and_chain_halfspaces() {
        let q = MedianAlgebra::hypercube(2).unwrap();
        let ws = WallSystem::new(&q);
        assert_eq!(ws.halfspaces().len(), 4);
        assert_eq!(ws.wall_count(), 2);
        let c = MedianAlgebra::chain(3).unwrap();
        let hs = enumerate_halfspaces(&c, HalfspaceMethod::BruteForce).unwrap();
        let expected: Vec<ElementSet> = vec![set(3, &[0]), set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[2])];
        assert_eq!(hs, expected);
        assert_eq!(enumerate_halfspaces(&c, HalfspaceMethod::EdgeGenerated).unwrap(), expected);
    }

    #[test]
    fn hypercube_has_2n_halfspaces() {
        for d in 1..=4 {
            let q = MedianAlgebra::hypercube(d).unwrap();
            let edge = enumerate_halfspaces(&q, HalfspaceMethod::EdgeGenerated).unwrap();
            assert_eq!(edge.len(), 2 * d);
            assert_eq!(edge, enumerate_halfspaces(&q, HalfspaceMethod::BruteForce).unwrap());
        }
    }

    #[test]
    fn brute_force_refuses_large_carriers() {
        let g = MedianAlgebra::grid(&[3, 7]).unwrap();
        assert!(enumerate_halfspaces(&g, HalfspaceMethod::BruteForce).unwrap_err().is_refusal());
    }

    #[test]
    fn crossing_cases() {
        let q = MedianAlgebra::hypercube(2).unwrap();
        let ws = WallSystem::new(&q);
        let w0 = ws.wall(0);
        let w1 = ws.wall(1);
        assert!(are_crossing(&w0.side0, &w1.side0).unwrap());
        assert!(!are_crossing(&w0.side0, &w0.side0).unwrap());
        assert!(!are_crossing(&set(3, &[0]), &set(3, &[0, 1])).unwrap());
        assert!(are_crossing(&set(3, &[0]), &set(4, &[0])).is_err());
    }

    #[test]
    fn ranks() {
        for d in 1..=4 {
            let ws = WallSystem::new(&MedianAlgebra::hypercube(d).unwrap());
            assert_eq!(ws.rank_via_crossing(), d);
            assert_eq!(ws.max_embedding_rank().unwrap(), d);
        }
        for k in 2..=6 {
            assert_eq!(WallSystem::new(&MedianAlgebra::chain(k).unwrap()).rank_via_crossing(), 1);
        }
        assert_eq!(WallSystem::new(&MedianAlgebra::chain(1).unwrap()).rank_via_crossing(), 0);
        assert_eq!(WallSystem::new(&MedianAlgebra::grid(&[3, 3]).unwrap()).rank_via_crossing(), 2);
    }

    /// Embedding oracle that ignores walls: place cube vertices anywhere.
    fn brute_embeds(a: &MedianAlgebra, k: usize) -> bool {
        fn rec(a: &MedianAlgebra, k: usize, placed: &mut Vec<usize>) -> bool {
            let next = placed.len();
            if next == 1 << k {
                return true;
            }
            for c in 0..a.n() {
                if placed.contains(&c) {
                    continue;
                }
                placed.push(c);
                let ok = (0..=next).all(|x| {
                    (0..=next).all(|y| {
                        (0..=next).all(|z| {
                            let maj = (x & y) | (y & z) | (x & z);
                            maj > next || a.median(placed[x], placed[y], placed[z]) == placed[maj]
                        })
                    })
                });
                if ok && rec(a, k, placed) {
                    return true;
                }
                placed.pop();
            }
            false
        }
        rec(a, k, &mut Vec::new())
    }

    #[test]
    fn embedding_search_matches_wall_free_oracle() {
        let cases = [
            MedianAlgebra::chain(5).unwrap(),
            MedianAlgebra::hypercube(2).unwrap(),
            MedianAlgebra::grid(&[2, 3]).unwrap(),
            MedianAlgebra::grid(&[3, 3]).unwrap(),
            MedianAlgebra::wedge(&[1, 2]).unwrap(),
            MedianAlgebra::wedge(&[1, 1, 1]).unwrap(),
            MedianAlgebra::hypercube(3).unwrap(),
        ];
        for a in &cases {
            let ws = WallSystem::new(a);
            for k in 1..=3 {
                if (1 << k) > a.n() {
                    assert!(!ws.rank_via_embedding(k).unwrap());
                    continue;
                }
                assert_eq!(ws.rank_via_embedding(k).unwrap(), brute_embeds(a, k), "{:?} k={k}", a);
            }
        }
    }

    #[test]
    fn chain5_has_no_square_and_wedge_has_a_3cube() {
        let c = WallSystem::new(&MedianAlgebra::chain(5).unwrap());
        assert!(!c.rank_via_embedding(2).unwrap());
        let w = WallSystem::new(&MedianAlgebra::wedge(&[1, 2, 3]).unwrap());
        assert!(w.rank_via_embedding(3).unwrap());
        assert!(!w.rank_via_embedding(4).unwrap());
        let q = WallSystem::new(&MedianAlgebra::hypercube(3).unwrap());
        let emb = q.cube_embedding(3).unwrap().unwrap();
        let distinct: BTreeSet<_> = emb.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert!(q.rank_via_embedding(6).unwrap_err().is_refusal());
    }

    #[test]
    fn kakutani_examples() {
        let q = MedianAlgebra::hypercube(2).unwrap();
        let ws = WallSystem::new(&q);
        let s = ws.kakutani_separate(&set(4, &[0b00]), &set(4, &[0b11])).unwrap();
        assert!(s.wall.side0.contains(0) && s.wall.side1.contains(3));
        assert!(s.first_in_side0);
        let c = MedianAlgebra::chain(3).unwrap();
        let wc = WallSystem::new(&c);
        let s = wc.kakutani_separate(&set(3, &[2]), &set(3, &[0])).unwrap();
        assert!(!s.first_in_side0);
        assert!(s.wall.side1.contains(2) && s.wall.side0.contains(0));
        assert!(matches!(
            wc.kakutani_separate(&set(3, &[1]), &set(3, &[1])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            ws.kakutani_separate(&set(4, &[0, 3]), &set(4, &[1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn helly_examples() {
        let g = MedianAlgebra::grid(&[3, 3]).unwrap();
        let ws = WallSystem::new(&g);
        // Subsquares by lower-left corner (x, y): ids x + 3y.
        let sub = |x: usize, y: usize| set(9, &[x + 3 * y, x + 1 + 3 * y, x + 3 * (y + 1), x + 1 + 3 * (y + 1)]);
        let out = ws.helly_check(&[sub(0, 0), sub(1, 0), sub(0, 1)]).unwrap();
        assert_eq!(out, HellyOutcome::CommonPoint(4));
        let wc = WallSystem::new(&MedianAlgebra::chain(3).unwrap());
        assert_eq!(
            wc.helly_check(&[set(3, &[0]), set(3, &[2])]).unwrap(),
            HellyOutcome::DisjointPair(0, 1)
        );
        assert_eq!(wc.helly_check(&[set(3, &[1, 2])]).unwrap(), HellyOutcome::CommonPoint(1));
        assert!(wc.helly_check(&[set(3, &[0, 2])]).is_err());
    }

    #[test]
    fn traces() {
        let g = MedianAlgebra::grid(&[3, 3]).unwrap();
        let ws = WallSystem::new(&g);
        let r = ws.wall_trace_check(&set(9, &[0, 1, 3, 4])).unwrap();
        assert!(r.holds());
        assert_eq!(r.q_walls, 2);
        assert!(ws.wall_trace_check(&set(9, &[4])).unwrap().holds());
        let q = WallSystem::new(&MedianAlgebra::hypercube(3).unwrap());
        assert!(q.wall_trace_check(&set(8, &[0b000, 0b001, 0b011, 0b111])).unwrap().holds());
        assert!(matches!(
            q.wall_trace_check(&set(8, &[0b011, 0b101, 0b110])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn roller_basics() {
        let c = WallSystem::new(&MedianAlgebra::chain(3).unwrap());
        let r = c.roller_embedding();
        assert_eq!(r.dimension(), 4);
        assert!(r.is_injective() && r.is_mp() && r.image_is_subalgebra());
        let point = WallSystem::new(&MedianAlgebra::chain(1).unwrap());
        let rp = point.roller_embedding();
        assert_eq!(rp.dimension(), 0);
        assert!(rp.is_injective() && rp.is_mp());
        let q = WallSystem::new(&MedianAlgebra::hypercube(2).unwrap());
        let rq = q.roller_embedding();
        assert!(rq.is_injective() && rq.is_mp());
        assert!(rq.is_equivariant(&q, &[0, 2, 1, 3]).unwrap());
        assert!(c.roller_embedding().is_equivariant(&c, &[2, 1, 0]).unwrap());
        // Not an automorphism: swaps an endpoint with the middle.
        assert!(c.halfspace_permutation(&[1, 0, 2]).is_err());
    }
}
