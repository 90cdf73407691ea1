//! Automorphism groups, orbits of functions, and the finite tameness and
//! equivariance checks built on them.
//!
//! Permutations are one-line images: `g[x]` is the image of `x`. Composition
//! `g * h` means `x -> g[h[x]]`. The action on functions is `f_g(x) = f(g x)`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::algebra::MedianAlgebra;
use crate::error::{Error, Result};
use crate::independence::FunctionFamily;
use crate::limits::Limit;
use crate::rational::{Rational, RationalFunctionTable};
use crate::walls::WallSystem;

pub type Permutation = Vec<usize>;

pub fn identity(n: usize) -> Permutation {
    (0..n).collect()
}

/// `x -> g[h[x]]`.
pub fn compose(g: &[usize], h: &[usize]) -> Permutation {
    h.iter().map(|&x| g[x]).collect()
}

pub fn inverse(g: &[usize]) -> Permutation {
    let mut inv = vec![0; g.len()];
    for (x, &gx) in g.iter().enumerate() {
        inv[gx] = x;
    }
    inv
}

fn validate(degree: usize, g: &[usize], which: usize) -> Result<()> {
    if g.len() != degree {
        return Err(Error::malformed(format!(
            "permutation {which} has {} images, expected {degree}",
            g.len()
        )));
    }
    let mut seen = vec![false; degree];
    for (i, &y) in g.iter().enumerate() {
        if y >= degree || std::mem::replace(&mut seen[y], true) {
            return Err(Error::malformed(format!(
                "permutation {which} position {i}: image {y} out of range or repeated"
            )));
        }
    }
    Ok(())
}

/// `g(m(x,y,z)) = m(gx, gy, gz)` for all triples.
pub fn is_automorphism(a: &MedianAlgebra, g: &[usize]) -> bool {
    let n = a.n();
    g.len() == n
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| g[a.median(x, y, z)] == a.median(g[x], g[y], g[z]))))
}

/// A permutation group given by generators, with the full element list when
/// its order is at most the group-list limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    /// Sorted lexicographically; `None` when the closure exceeded the limit.
    elements: Option<Vec<Permutation>>,
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: vec![],
            elements: Some(vec![identity(degree)]),
        }
    }

    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            validate(degree, g, i)?;
        }
        let elements = closure(degree, &generators);
        Ok(PermutationGroup {
            degree,
            generators,
            elements,
        })
    }

    /// From a complete, already closed element list.
    fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([identity(degree)]);
        for g in &elements {
            if !span.contains(g) {
                generators.push(g.clone());
                span = closure(degree, &generators)
                    .expect("subgroup of a listed group")
                    .into_iter()
                    .collect();
            }
        }
        PermutationGroup {
            degree,
            generators,
            elements: Some(elements),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(Vec::len)
    }

    /// Identity, closure under composition and inverses, on the listed elements.
    pub fn check_group_axioms(&self) -> Option<bool> {
        let elements = self.elements.as_ref()?;
        let set: HashSet<&Permutation> = elements.iter().collect();
        let id = identity(self.degree);
        Some(
            set.contains(&id)
                && elements.iter().all(|g| set.contains(&inverse(g)))
                && elements
                    .iter()
                    .all(|g| elements.iter().all(|h| set.contains(&compose(g, h)))),
        )
    }

    /// Errors unless every generator is an automorphism of `a`.
    pub fn require_bound_to(&self, a: &MedianAlgebra) -> Result<()> {
        if self.degree != a.n() {
            return Err(Error::precondition(format!(
                "group of degree {} used with carrier of size {}",
                self.degree,
                a.n()
            )));
        }
        match self.generators.iter().position(|g| !is_automorphism(a, g)) {
            Some(i) => Err(Error::precondition(format!("generator {i} is not a median automorphism"))),
            None => Ok(()),
        }
    }
}

/// All products of generators, sorted; `None` past the group-list limit.
fn closure(degree: usize, generators: &[Permutation]) -> Option<Vec<Permutation>> {
    let limit = Limit::GroupListMax.value();
    let id = identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = compose(s, &g);
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    Some(out)
}

/// Every median automorphism of `a`, by backtracking over images in element order.
///
/// Candidates for `g(x)` must match `x` in wall-incidence signature (the
/// sorted sizes of the halfspaces containing it) and in edge degree.
pub fn automorphisms(a: &MedianAlgebra) -> Result<PermutationGroup> {
    let n = a.n();
    Limit::AutomorphismMax.check(n)?;
    let walls = WallSystem::new(a);
    let mut degree = vec![0usize; n];
    for (u, v) in crate::walls::edges(a) {
        degree[u] += 1;
        degree[v] += 1;
    }
    let signature: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|x| {
            let mut sizes: Vec<usize> = walls
                .halfspaces()
                .iter()
                .filter(|h| h.contains(x))
                .map(|h| h.len())
                .collect();
            sizes.sort_unstable();
            (degree[x], sizes)
        })
        .collect();
    let mut found = Vec::new();
    let mut g = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(a, &signature, &mut g, &mut used, &mut found)?;
    Ok(PermutationGroup::from_elements(n, found))
}

fn search(
    a: &MedianAlgebra,
    signature: &[(usize, Vec<usize>)],
    g: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Permutation>,
) -> Result<()> {
    let n = a.n();
    let x = g.len();
    if x == n {
        found.push(g.clone());
        return Limit::GroupListMax.check(found.len());
    }
    for y in 0..n {
        if used[y] || signature[y] != signature[x] {
            continue;
        }
        g.push(y);
        if consistent(a, g) {
            used[y] = true;
            search(a, signature, g, used, found)?;
            used[y] = false;
        }
        g.pop();
    }
    Ok(())
}

/// Checks every triple whose points and median are all assigned and which
/// involves the newest element.
fn consistent(a: &MedianAlgebra, g: &[usize]) -> bool {
    let x = g.len() - 1;
    for p in 0..=x {
        for q in p..=x {
            for r in q..=x {
                let w = a.median(p, q, r);
                if w > x || (r != x && w != x) {
                    continue;
                }
                if g[w] != a.median(g[p], g[q], g[r]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Validates hint generators as automorphisms and closes them.
pub fn automorphisms_from_generators(a: &MedianAlgebra, generators: Vec<Permutation>) -> Result<PermutationGroup> {
    let group = PermutationGroup::from_generators(a.n(), generators)?;
    group.require_bound_to(a)?;
    Ok(group)
}

/// Axis permutations of a grid with equal side lengths (including hypercubes),
/// generated by adjacent transpositions.
pub fn coordinate_permutation_group(a: &MedianAlgebra) -> Result<PermutationGroup> {
    let dims = a
        .provenance()
        .grid_dims()
        .ok_or_else(|| Error::precondition("coordinate permutations need a grid, chain or hypercube"))?;
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::precondition("coordinate permutations need equal side lengths"));
    }
    let d = dims.len();
    let side = dims[0];
    let n = a.n();
    let coords = |mut x: usize| {
        let mut c = vec![0; d];
        for ci in c.iter_mut() {
            *ci = x % side;
            x /= side;
        }
        c
    };
    let id_of = |c: &[usize]| c.iter().rev().fold(0, |acc, &ci| acc * side + ci);
    let generators = (0..d.saturating_sub(1))
        .map(|i| {
            (0..n)
                .map(|x| {
                    let mut c = coords(x);
                    c.swap(i, i + 1);
                    id_of(&c)
                })
                .collect()
        })
        .collect();
    PermutationGroup::from_generators(n, generators)
}

/// The distinct functions `x -> f(g x)` for `g` in the group, in discovery
/// order starting from `f`.
pub fn orbit_family(f: &RationalFunctionTable, group: &PermutationGroup) -> Result<FunctionFamily> {
    if f.n() != group.degree() {
        return Err(Error::precondition("function and group act on different carriers"));
    }
    let mut seen: HashSet<Vec<Rational>> = HashSet::from([f.values().to_vec()]);
    let mut orbit = vec![f.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for g in group.generators() {
            let h = orbit[i].compose(g);
            if seen.insert(h.values().to_vec()) {
                orbit.push(h);
            }
        }
        i += 1;
    }
    FunctionFamily::new(f.n(), orbit)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamenessReport {
    pub orbit_size: usize,
    pub ind_orbit: usize,
    pub rank: usize,
    pub bounded: bool,
    /// Orbit indices of a largest independent subfamily.
    pub witness: Vec<usize>,
    pub thresholds: Option<(Rational, Rational)>,
}

/// `ind(orbit of f) <= rank`, for MP `f` only.
pub fn orbit_tameness_check(
    walls: &WallSystem,
    f: &RationalFunctionTable,
    group: &PermutationGroup,
) -> Result<TamenessReport> {
    let a = walls.algebra();
    if let Some(w) = f.mp_witness(a)? {
        return Err(Error::precondition(format!("function is not median-preserving at {w:?}")));
    }
    group.require_bound_to(a)?;
    let orbit = orbit_family(f, group)?;
    let ind = orbit.ind();
    let rank = walls.rank_via_crossing();
    Ok(TamenessReport {
        orbit_size: orbit.len(),
        ind_orbit: ind.ind,
        rank,
        bounded: ind.ind <= rank,
        witness: ind.witness,
        thresholds: ind.thresholds,
    })
}

/// Each group element permutes the halfspaces and `ι(g x) = σ_g ι(x)`.
/// Generators suffice: both properties are closed under composition.
pub fn roller_equivariance_check(walls: &WallSystem, group: &PermutationGroup) -> Result<bool> {
    if group.degree() != walls.algebra().n() {
        return Err(Error::precondition("group and algebra have different carriers"));
    }
    let iota = walls.roller_embedding();
    for g in group.generators() {
        match iota.is_equivariant(walls, g) {
            Ok(true) => {}
            Ok(false) | Err(Error::Precondition(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Images of the walls under `g` are walls, and crossing pairs stay crossing.
pub fn preserves_walls(walls: &WallSystem, g: &[usize]) -> Result<bool> {
    let Ok(sigma) = walls.halfspace_permutation(g) else {
        return Ok(false);
    };
    let mut wall_of = vec![0; walls.halfspaces().len()];
    for (w, &(s0, s1)) in walls.wall_indices().iter().enumerate() {
        wall_of[s0] = w;
        wall_of[s1] = w;
    }
    let image = |w: usize| wall_of[sigma[walls.wall_indices()[w].0]];
    let crossing: BTreeSet<(usize, usize)> = walls.crossing_edges().into_iter().collect();
    Ok(crossing.iter().all(|&(i, j)| {
        let (x, y) = (image(i), image(j));
        crossing.contains(&(x.min(y), x.max(y)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn brute_automorphism_count(a: &MedianAlgebra) -> usize {
        fn rec(a: &MedianAlgebra, g: &mut Vec<usize>, used: &mut [bool]) -> usize {
            if g.len() == a.n() {
                return usize::from(is_automorphism(a, g));
            }
            let mut total = 0;
            for y in 0..a.n() {
                if !used[y] {
                    used[y] = true;
                    g.push(y);
                    total += rec(a, g, used);
                    g.pop();
                    used[y] = false;
                }
            }
            total
        }
        rec(a, &mut Vec::new(), &mut vec![false; a.n()])
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphisms(&MedianAlgebra::hypercube(2).unwrap()).unwrap().order(), Some(8));
        let c3 = automorphisms(&MedianAlgebra::chain(3).unwrap()).unwrap();
        assert_eq!(c3.elements().unwrap(), &[vec![0, 1, 2], vec![2, 1, 0]]);
        let star = automorphisms(&MedianAlgebra::wedge(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(star.order(), Some(6));
        assert!(star.elements().unwrap().iter().all(|g| g[0] == 0));
        assert_eq!(automorphisms(&MedianAlgebra::hypercube(3).unwrap()).unwrap().order(), Some(48));
        assert!(automorphisms(&MedianAlgebra::chain(13).unwrap()).unwrap_err().is_refusal());
    }

    #[test]
    fn automorphisms_match_brute_force() {
        for a in [
            MedianAlgebra::grid(&[2, 3]).unwrap(),
            MedianAlgebra::wedge(&[1, 2]).unwrap(),
            MedianAlgebra::chain(6).unwrap(),
            MedianAlgebra::hypercube(2).unwrap(),
            crate::generators::random_subalgebra(3, 3, 1).unwrap(),
        ] {
            let g = automorphisms(&a).unwrap();
            assert_eq!(g.order(), Some(brute_automorphism_count(&a)));
            assert_eq!(g.check_group_axioms(), Some(true));
            let elements = g.elements().unwrap();
            assert!(elements.windows(2).all(|w| w[0] < w[1]));
            let regenerated = PermutationGroup::from_generators(a.n(), g.generators().to_vec()).unwrap();
            assert_eq!(regenerated.elements(), g.elements());
        }
    }

    #[test]
    fn automorphisms_preserve_walls_and_crossing() {
        for e in crate::generators::standard_corpus().iter().filter(|e| e.algebra.n() <= 9) {
            let ws = WallSystem::new(&e.algebra);
            let group = automorphisms(&e.algebra).unwrap();
            for g in group.elements().unwrap() {
                assert!(preserves_walls(&ws, g).unwrap(), "{}", e.name);
            }
        }
    }

    #[test]
    fn hint_generators_are_validated() {
        let c = MedianAlgebra::chain(4).unwrap();
        let g = automorphisms_from_generators(&c, vec![vec![3, 2, 1, 0]]).unwrap();
        assert_eq!(g.order(), Some(2));
        assert!(automorphisms_from_generators(&c, vec![vec![1, 0, 2, 3]]).is_err());
        assert!(matches!(
            PermutationGroup::from_generators(3, vec![vec![0, 0, 1]]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn coordinate_groups() {
        let q3 = MedianAlgebra::hypercube(3).unwrap();
        let g = coordinate_permutation_group(&q3).unwrap();
        assert_eq!(g.order(), Some(6));
        g.require_bound_to(&q3).unwrap();
        let grid = MedianAlgebra::grid(&[3, 3]).unwrap();
        assert_eq!(coordinate_permutation_group(&grid).unwrap().order(), Some(2));
        assert!(coordinate_permutation_group(&MedianAlgebra::grid(&[2, 3]).unwrap()).is_err());
    }

    fn projection(d: usize, bit: usize) -> RationalFunctionTable {
        RationalFunctionTable::from_ints(&(0..1usize << d).map(|x| (x >> bit & 1) as i64).collect::<Vec<_>>())
    }

    #[test]
    fn orbits() {
        let q3 = MedianAlgebra::hypercube(3).unwrap();
        let g = coordinate_permutation_group(&q3).unwrap();
        let orbit = orbit_family(&projection(3, 0), &g).unwrap();
        assert_eq!(orbit.len(), 3);
        let constant = RationalFunctionTable::constant(8, ratio(1, 2));
        assert_eq!(orbit_family(&constant, &g).unwrap().len(), 1);
        let f = projection(3, 1);
        assert_eq!(orbit_family(&f, &PermutationGroup::trivial(8)).unwrap().functions(), &[f]);
    }

    #[test]
    fn tameness_examples() {
        for m in 2..=4 {
            let q = MedianAlgebra::hypercube(m).unwrap();
            let ws = WallSystem::new(&q);
            let r = orbit_tameness_check(&ws, &projection(m, 0), &coordinate_permutation_group(&q).unwrap()).unwrap();
            assert_eq!((r.orbit_size, r.ind_orbit, r.rank, r.bounded), (m, m, m, true));
        }
        let c5 = MedianAlgebra::chain(5).unwrap();
        let ws = WallSystem::new(&c5);
        let f = RationalFunctionTable::from_ints(&[0, 1, 1, 2, 5]);
        let r = orbit_tameness_check(&ws, &f, &automorphisms(&c5).unwrap()).unwrap();
        assert_eq!((r.ind_orbit, r.rank, r.bounded), (1, 1, true));
        let g = MedianAlgebra::grid(&[3, 3]).unwrap();
        let ws = WallSystem::new(&g);
        let x = RationalFunctionTable::new((0..9).map(|i| int((i % 3) as i64)).collect());
        let r = orbit_tameness_check(&ws, &x, &automorphisms(&g).unwrap()).unwrap();
        assert_eq!((r.ind_orbit, r.rank, r.bounded), (2, 2, true));
        let xor = RationalFunctionTable::from_ints(&[0, 1, 1, 0]);
        let q2 = MedianAlgebra::hypercube(2).unwrap();
        assert!(matches!(
            orbit_tameness_check(&WallSystem::new(&q2), &xor, &PermutationGroup::trivial(4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn roller_equivariance() {
        let q2 = MedianAlgebra::hypercube(2).unwrap();
        let ws = WallSystem::new(&q2);
        assert!(roller_equivariance_check(&ws, &automorphisms(&q2).unwrap()).unwrap());
        let c3 = MedianAlgebra::chain(3).unwrap();
        let ws3 = WallSystem::new(&c3);
        let rev = PermutationGroup::from_generators(3, vec![vec![2, 1, 0]]).unwrap();
        assert!(roller_equivariance_check(&ws3, &rev).unwrap());
        assert!(roller_equivariance_check(&ws3, &PermutationGroup::trivial(3)).unwrap());
        // A non-automorphism does not map halfspaces to halfspaces.
        let c4 = MedianAlgebra::chain(4).unwrap();
        let swap = PermutationGroup::from_generators(4, vec![vec![1, 0, 2, 3]]).unwrap();
        assert!(!roller_equivariance_check(&WallSystem::new(&c4), &swap).unwrap());
    }
}
