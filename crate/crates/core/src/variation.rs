//! Edge-sum variation over subalgebras and halfspace-chain variation.
//!
//! `Υ(f, Q)` sums `|f(a) - f(b)|` over the adjacent pairs of a subalgebra `Q`
//! (pairs whose `Q`-relative interval is just `{a, b}`); the total variation is
//! its maximum over subalgebras. Chain variation instead follows transversals
//! `z_0 ∈ H_0, z_i ∈ H_i \ H_{i-1}` of strictly nested halfspaces.
//!
//! Chain families may also contain the whole carrier, playing the role of the
//! ray `(-∞, max]` in a linear order; without it no strict chain of proper
//! halfspaces reaches both ends of a chain.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::algebra::MedianAlgebra;
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::limits::Limit;
use crate::rational::{Rational, RationalFunctionTable};
use crate::walls::WallSystem;

fn check_function(a: &MedianAlgebra, f: &RationalFunctionTable) -> Result<()> {
    if f.n() != a.n() {
        return Err(Error::precondition(format!(
            "function on {} points used with carrier of size {}",
            f.n(),
            a.n()
        )));
    }
    Ok(())
}

fn dist(f: &RationalFunctionTable, x: usize, y: usize) -> Rational {
    (f.get(x) - f.get(y)).abs()
}

/// Unordered pairs `a < b` in `q` with `[a, b] ∩ q = {a, b}`.
pub fn adjacency_pairs(a: &MedianAlgebra, q: &ElementSet) -> Result<Vec<(usize, usize)>> {
    a.require_subalgebra(q)?;
    let members = q.to_vec();
    let mut out = Vec::new();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let inside = a.interval(x, y).intersection(q);
            if inside.len() == 2 {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

pub fn edge_sum_variation(a: &MedianAlgebra, f: &RationalFunctionTable, q: &ElementSet) -> Result<Rational> {
    check_function(a, f)?;
    Ok(adjacency_pairs(a, q)?
        .into_iter()
        .fold(Rational::zero(), |acc, (x, y)| acc + dist(f, x, y)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonResult {
    pub value: Rational,
    /// A maximizing subalgebra; ties go to the least in set order.
    pub witness: ElementSet,
    /// True when only a declared pool was searched: `value` is then a lower bound.
    pub lower_bound_only: bool,
}

/// Maximum of `Υ(f, Q)` over every nonempty subalgebra `Q`.
pub fn total_variation_upsilon(a: &MedianAlgebra, f: &RationalFunctionTable) -> Result<UpsilonResult> {
    check_function(a, f)?;
    let n = a.n();
    Limit::SubalgebraEnumMax.check(n)?;
    let mut intervals = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            intervals[x * n + y] = a.interval(x, y).as_mask().expect("n <= 32") as u32;
        }
    }
    let mut best: Option<(Rational, u32)> = None;
    for mask in 1u32..(1u64 << n) as u32 {
        if !closed(a, mask) {
            continue;
        }
        let mut value = Rational::zero();
        let mut rest = mask;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut later = rest;
            while later != 0 {
                let y = later.trailing_zeros() as usize;
                later &= later - 1;
                if (intervals[x * n + y] & mask).count_ones() == 2 {
                    value += dist(f, x, y);
                }
            }
        }
        let better = match &best {
            None => true,
            Some((v, m)) => value > *v || (value == *v && set_of(n, mask) < set_of(n, *m)),
        };
        if better {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("singletons are subalgebras");
    Ok(UpsilonResult {
        value,
        witness: set_of(n, mask),
        lower_bound_only: false,
    })
}

fn set_of(n: usize, mask: u32) -> ElementSet {
    ElementSet::from_mask(n, mask as u64)
}

fn closed(a: &MedianAlgebra, mask: u32) -> bool {
    let members: Vec<usize> = (0..32).filter(|&i| mask >> i & 1 == 1).collect();
    for (i, &x) in members.iter().enumerate() {
        for (j, &y) in members.iter().enumerate().skip(i + 1) {
            for &z in &members[j + 1..] {
                if mask >> a.median(x, y, z) & 1 == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Maximum of `Υ(f, Q)` over a declared pool of subalgebras, flagged as a lower bound.
pub fn total_variation_over_pool(
    a: &MedianAlgebra,
    f: &RationalFunctionTable,
    pool: &[ElementSet],
) -> Result<UpsilonResult> {
    check_function(a, f)?;
    let mut best: Option<(Rational, &ElementSet)> = None;
    for q in pool {
        let v = edge_sum_variation(a, f, q)?;
        if best.as_ref().is_none_or(|(b, w)| v > *b || (v == *b && q < *w)) {
            best = Some((v, q));
        }
    }
    let (value, witness) = best.ok_or_else(|| Error::precondition("pool of subalgebras is empty"))?;
    Ok(UpsilonResult {
        value,
        witness: witness.clone(),
        lower_bound_only: true,
    })
}

/// Strictly increasing halfspaces `H_0 ⊊ H_1 ⊊ .. ⊊ H_m`; the last may be the whole carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceChain {
    sets: Vec<ElementSet>,
}

impl HalfspaceChain {
    pub fn new(walls: &WallSystem, sets: Vec<ElementSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::precondition("a halfspace chain needs at least one halfspace"));
        }
        for (i, h) in sets.iter().enumerate() {
            if !is_chain_member(walls, h) {
                return Err(Error::precondition(format!("chain member {i} is not a halfspace")));
            }
        }
        for (i, w) in sets.windows(2).enumerate() {
            if !(w[0].is_subset(&w[1]) && w[0] != w[1]) {
                return Err(Error::precondition(format!(
                    "chain members {i} and {} are not strictly nested",
                    i + 1
                )));
            }
        }
        Ok(HalfspaceChain { sets })
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    /// `H_0`, then the annuli `H_i \ H_{i-1}`.
    pub fn stages(&self) -> Vec<ElementSet> {
        let mut out = vec![self.sets[0].clone()];
        out.extend(self.sets.windows(2).map(|w| w[1].difference(&w[0])));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVariation {
    pub value: Rational,
    /// One maximizing transversal `(z_0, .., z_m)`.
    pub transversal: Vec<usize>,
}

type Layer<'a> = BTreeMap<&'a Rational, (Rational, usize, Option<&'a Rational>)>;

/// Exact maximum over transversals, by dynamic programming over stages.
/// The state is the f-value of the last chosen point.
pub fn chain_variation(f: &RationalFunctionTable, chain: &HalfspaceChain) -> Result<ChainVariation> {
    let stages = chain.stages();
    if let Some(h) = stages.last() {
        if h.universe() != f.n() {
            return Err(Error::precondition("function and chain live on different carriers"));
        }
    }
    // Per stage: distinct value -> (best sum ending there, representative, predecessor value).
    let mut layers: Vec<Layer<'_>> = Vec::new();
    for (i, stage) in stages.iter().enumerate() {
        let mut layer: Layer<'_> = BTreeMap::new();
        for z in stage.iter() {
            let v = f.get(z);
            if layer.contains_key(v) {
                continue;
            }
            let entry = if i == 0 {
                (Rational::zero(), z, None)
            } else {
                let mut best: Option<(Rational, &Rational)> = None;
                for (&pv, (sum, _, _)) in &layers[i - 1] {
                    let cand = sum + (v - pv).abs();
                    if best.as_ref().is_none_or(|(b, _)| cand > *b) {
                        best = Some((cand, pv));
                    }
                }
                let (sum, pv) = best.expect("annuli of a strict chain are nonempty");
                (sum, z, Some(pv))
            };
            layer.insert(v, entry);
        }
        layers.push(layer);
    }
    let last = layers.last().expect("nonempty chain");
    let (mut value_key, (value, _, _)) = last
        .iter()
        .fold(None::<(&Rational, &(Rational, usize, Option<&Rational>))>, |acc, (k, e)| match acc {
            Some((_, b)) if b.0 >= e.0 => acc,
            _ => Some((*k, e)),
        })
        .expect("nonempty stage");
    let value = value.clone();
    let mut transversal = vec![0; layers.len()];
    for i in (0..layers.len()).rev() {
        let (_, z, prev) = &layers[i][value_key];
        transversal[i] = *z;
        if let Some(p) = prev {
            value_key = p;
        }
    }
    Ok(ChainVariation { value, transversal })
}

fn is_chain_member(walls: &WallSystem, h: &ElementSet) -> bool {
    walls.halfspace_index(h).is_some() || (h.universe() == walls.algebra().n() && h.is_full())
}

/// Which halfspaces may appear in chains. `All` and `Coordinate` also include
/// the whole carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyMode {
    All,
    /// Halfspaces of a grid determined by one coordinate.
    Coordinate(usize),
    Custom(Vec<ElementSet>),
}

/// The sets selected by `mode`, canonically sorted and deduplicated.
pub fn halfspace_family(walls: &WallSystem, mode: &FamilyMode) -> Result<Vec<ElementSet>> {
    let whole = ElementSet::full(walls.algebra().n());
    let mut family = match mode {
        FamilyMode::All => {
            let mut v = walls.halfspaces().to_vec();
            v.push(whole);
            v
        }
        FamilyMode::Coordinate(axis) => {
            let dims = walls
                .algebra()
                .provenance()
                .grid_dims()
                .ok_or_else(|| Error::precondition("coordinate families need a grid, chain or hypercube"))?;
            if *axis >= dims.len() {
                return Err(Error::precondition(format!(
                    "axis {axis} out of range for {} coordinates",
                    dims.len()
                )));
            }
            let stride: usize = dims[..*axis].iter().product();
            let coord = |x: usize| (x / stride) % dims[*axis];
            walls
                .halfspaces()
                .iter()
                .filter(|h| (0..h.universe()).all(|x| h.contains(x) == h.contains(coord(x) * stride)))
                .cloned()
                .chain(std::iter::once(whole))
                .collect()
        }
        FamilyMode::Custom(sets) => {
            for (i, h) in sets.iter().enumerate() {
                if !is_chain_member(walls, h) {
                    return Err(Error::precondition(format!("family member {i} is not a halfspace")));
                }
            }
            sets.clone()
        }
    };
    family.sort();
    family.dedup();
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvChainResult {
    pub value: Rational,
    /// A maximizing chain, least in lexicographic order of (halfspace, point) choices.
    pub chain: Vec<ElementSet>,
    pub transversal: Vec<usize>,
}

/// Maximum chain variation over all strictly nested chains drawn from `family`.
///
/// `suffix(H, v)` is the best continuation after choosing a point of value `v`
/// with current top `H`; it depends on nothing else, so it is memoized.
pub fn bv_chain(walls: &WallSystem, f: &RationalFunctionTable, family: &[ElementSet]) -> Result<BvChainResult> {
    check_function(walls.algebra(), f)?;
    let family = halfspace_family(walls, &FamilyMode::Custom(family.to_vec()))?;
    Limit::ChainFamilyMax.check(family.len())?;
    let values = f.distinct_values();
    let vindex: Vec<usize> = (0..f.n())
        .map(|x| values.binary_search(f.get(x)).expect("value present"))
        .collect();
    let k = family.len();
    // Per (H, H' ⊋ H): one representative point per distinct value in the annulus.
    let mut steps: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if i != j && family[i].is_subset(&family[j]) {
                let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
                for z in family[j].difference(&family[i]).iter() {
                    reps.entry(vindex[z]).or_insert(z);
                }
                let mut reps: Vec<usize> = reps.into_values().collect();
                reps.sort_unstable();
                steps[i].push((j, reps));
            }
        }
    }
    let mut memo: Vec<Vec<Option<Suffix>>> = vec![vec![None; values.len()]; k];
    let mut best: Option<(Rational, usize, usize)> = None;
    for (i, h) in family.iter().enumerate() {
        let mut seen = vec![false; values.len()];
        for z in h.iter() {
            if std::mem::replace(&mut seen[vindex[z]], true) {
                continue;
            }
            let s = suffix(i, vindex[z], &values, &vindex, &steps, &mut memo);
            if best.as_ref().is_none_or(|(b, _, _)| s > *b) {
                best = Some((s, i, z));
            }
        }
    }
    let Some((value, mut h, mut z)) = best else {
        return Ok(BvChainResult {
            value: Rational::zero(),
            chain: vec![],
            transversal: vec![],
        });
    };
    let mut chain = vec![family[h].clone()];
    let mut transversal = vec![z];
    while let Some((_, Some((nh, nz)))) = &memo[h][vindex[z]] {
        h = *nh;
        z = *nz;
        chain.push(family[h].clone());
        transversal.push(z);
    }
    Ok(BvChainResult {
        value,
        chain,
        transversal,
    })
}

/// Best continuation value, and the `(halfspace, point)` it steps to.
type Suffix = (Rational, Option<(usize, usize)>);

fn suffix(
    h: usize,
    v: usize,
    values: &[Rational],
    vindex: &[usize],
    steps: &[Vec<(usize, Vec<usize>)>],
    memo: &mut [Vec<Option<Suffix>>],
) -> Rational {
    if let Some((s, _)) = &memo[h][v] {
        return s.clone();
    }
    let mut best = (Rational::zero(), None);
    for (j, reps) in &steps[h] {
        for &z in reps {
            let cand = (&values[vindex[z]] - &values[v]).abs() + suffix(*j, vindex[z], values, vindex, steps, memo);
            if cand > best.0 {
                best = (cand, Some((*j, z)));
            }
        }
    }
    let s = best.0.clone();
    memo[h][v] = Some(best);
    s
}
