//! Finite median algebras: representation, axiom verification, intervals,
//! convexity, hulls and subalgebra closure.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::limits::Limit;

/// Interval masks are cached for carriers up to this size.
const INTERVAL_CACHE_MAX: usize = 256;

/// Carriers above this size are scanned for the symmetry axiom by sampling.
const SYMMETRY_EXHAUSTIVE_MAX: usize = 256;

/// How an algebra was built. Used for reporting and by coordinate-aware operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Table,
    Hypercube { d: usize },
    Chain { k: usize },
    Grid { dims: Vec<usize> },
    Product(Box<Provenance>, Box<Provenance>),
    Wedge { dims: Vec<usize> },
    /// Median closure of hypercube vertices (bit masks); `seed` is set for random draws.
    Closure { d: usize, vertices: Vec<u64>, seed: Option<u64> },
    Graph { n: usize, edges: Vec<(usize, usize)> },
    Subalgebra { members: Vec<usize> },
}

impl Provenance {
    /// Axis lengths when elements are mixed-radix grid coordinates (axis 0 varies fastest).
    pub fn grid_dims(&self) -> Option<Vec<usize>> {
        match self {
            Provenance::Hypercube { d } => Some(vec![2; *d]),
            Provenance::Chain { k } => Some(vec![*k]),
            Provenance::Grid { dims } => Some(dims.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Provenance::Table => write!(f, "table"),
            Provenance::Hypercube { d } => write!(f, "hypercube({d})"),
            Provenance::Chain { k } => write!(f, "chain({k})"),
            Provenance::Grid { dims } => write!(f, "grid({})", list(dims)),
            Provenance::Product(a, b) => write!(f, "product({a}, {b})"),
            Provenance::Wedge { dims } => write!(f, "wedge({})", list(dims)),
            Provenance::Closure { d, vertices, seed } => match seed {
                Some(s) => write!(f, "closure(d={d}, points={}, seed={s})", vertices.len()),
                None => write!(f, "closure(d={d}, points={})", vertices.len()),
            },
            Provenance::Graph { n, edges } => write!(f, "graph(n={n}, edges={})", edges.len()),
            Provenance::Subalgebra { members } => write!(f, "subalgebra(|Q|={})", members.len()),
        }
    }
}

#[derive(Clone)]
enum Rule {
    Table(Arc<[u32]>),
    /// Coordinate-wise betweenness on a product of chains.
    Grid { dims: Arc<[usize]> },
    /// Boolean cube; ids are coordinate bit masks.
    Cube,
    /// Cubes glued at their origins; `starts[c]` is the id of vertex mask 1 of cube `c`.
    Wedge { starts: Arc<[usize]> },
}

/// A finite median algebra on the carrier `{0, .., n-1}`.
///
/// Immutable after construction. Cloning is cheap and shares the interval cache.
#[derive(Clone)]
pub struct MedianAlgebra {
    n: usize,
    rule: Rule,
    provenance: Provenance,
    intervals: Arc<OnceLock<Vec<ElementSet>>>,
}

impl fmt::Debug for MedianAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MedianAlgebra")
            .field("n", &self.n)
            .field("provenance", &self.provenance)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// Symmetry under argument permutations.
    M1,
    /// `m(x, y, y) = y`.
    M2,
    /// `m(m(x,y,z),u,v) = m(x, m(y,u,v), m(z,u,v))`.
    M3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    /// Some axiom families were sampled; `trials` tuples per sampled family.
    Randomized { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub failure: Option<AxiomFailure>,
    pub mode: VerifyMode,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 1_000_000,
            seed: 0,
        }
    }
}

fn check_carrier(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::malformed("carrier must be nonempty"));
    }
    Limit::CarrierMax.check(n)
}

impl MedianAlgebra {
    /// Builds an algebra from a row-major `n³` table: entry `(x*n + y)*n + z` is `m(x,y,z)`.
    ///
    /// Axioms are not checked here; see [`MedianAlgebra::verify_axioms`].
    pub fn from_table(n: usize, table: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::malformed("carrier must be nonempty"));
        }
        Limit::TableMax.check(n)?;
        if table.len() != n * n * n {
            return Err(Error::malformed(format!(
                "table has {} entries, expected n^3 = {}",
                table.len(),
                n * n * n
            )));
        }
        if let Some(i) = table.iter().position(|&v| v >= n) {
            return Err(Error::malformed(format!(
                "table index {i} holds {} which is not an element id below {n}",
                table[i]
            )));
        }
        let table: Arc<[u32]> = table.iter().map(|&v| v as u32).collect();
        Ok(Self::with_rule(n, Rule::Table(table), Provenance::Table))
    }

    fn with_rule(n: usize, rule: Rule, provenance: Provenance) -> Self {
        MedianAlgebra {
            n,
            rule,
            provenance,
            intervals: Arc::new(OnceLock::new()),
        }
    }

    /// Product of chains with the coordinate-wise median. Ids are mixed radix with axis 0 fastest.
    pub fn grid(dims: &[usize]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::malformed("grid axes must have length at least 1"));
        }
        let n = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::malformed("grid size overflows"))?;
        check_carrier(n)?;
        let rule = if dims.iter().all(|&d| d == 2) {
            Rule::Cube
        } else {
            Rule::Grid { dims: dims.into() }
        };
        Ok(Self::with_rule(n, rule, Provenance::Grid { dims: dims.to_vec() }))
    }

    /// The linear order `0 < 1 < .. < k-1` with its betweenness median.
    pub fn chain(k: usize) -> Result<Self> {
        let mut a = Self::grid(&[k])?;
        a.provenance = Provenance::Chain { k };
        Ok(a)
    }

    /// The Boolean cube `{0,1}^d`; element ids are coordinate bit masks.
    pub fn hypercube(d: usize) -> Result<Self> {
        if d == 0 || d >= usize::BITS as usize {
            return Err(Error::malformed(format!("hypercube dimension {d} out of range")));
        }
        check_carrier(1 << d)?;
        Ok(Self::with_rule(1 << d, Rule::Cube, Provenance::Hypercube { d }))
    }

    /// Cubes `{0,1}^d_i` glued at their all-zeros vertices.
    ///
    /// Ids: the wedge point is 0, then each cube's nonzero vertices in input
    /// order, by increasing bit mask.
    pub fn wedge(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0 || d > 20) {
            return Err(Error::malformed("wedge dimensions must be between 1 and 20"));
        }
        let mut starts = Vec::with_capacity(dims.len());
        let mut n = 1usize;
        for &d in dims {
            starts.push(n);
            n += (1usize << d) - 1;
        }
        check_carrier(n)?;
        Ok(Self::with_rule(
            n,
            Rule::Wedge { starts: starts.into() },
            Provenance::Wedge { dims: dims.to_vec() },
        ))
    }

    /// Coordinate-wise product; element `(a, b)` has id `a * |B| + b`. Always materialized.
    pub fn product(a: &MedianAlgebra, b: &MedianAlgebra) -> Result<Self> {
        let n = a
            .n
            .checked_mul(b.n)
            .ok_or_else(|| Error::malformed("product size overflows"))?;
        Limit::TableMax.check(n)?;
        let nb = b.n;
        let mut table = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let ma = a.median(x / nb, y / nb, z / nb);
                    let mb = b.median(x % nb, y % nb, z % nb);
                    table.push(ma * nb + mb);
                }
            }
        }
        let mut p = Self::from_table(n, &table)?;
        p.provenance = Provenance::Product(Box::new(a.provenance.clone()), Box::new(b.provenance.clone()));
        Ok(p)
    }

    /// The induced algebra on a subalgebra `q`, with `embedding[i]` the ambient id of element `i`.
    pub fn subalgebra(&self, q: &ElementSet) -> Result<(MedianAlgebra, Vec<usize>)> {
        self.require_subalgebra(q)?;
        let embedding = q.to_vec();
        let k = embedding.len();
        Limit::TableMax.check(k)?;
        let mut local = vec![usize::MAX; self.n];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let mut table = Vec::with_capacity(k * k * k);
        for &x in &embedding {
            for &y in &embedding {
                for &z in &embedding {
                    table.push(local[self.median(x, y, z)]);
                }
            }
        }
        let mut sub = Self::from_table(k, &table)?;
        sub.provenance = Provenance::Subalgebra {
            members: embedding.clone(),
        };
        Ok((sub, embedding))
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_table(&self) -> bool {
        matches!(self.rule, Rule::Table(_))
    }

    /// `m(x, y, z)`. Panics on ids outside the carrier.
    #[inline]
    pub fn median(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.n;
        assert!(x < n && y < n && z < n, "element id out of range");
        match &self.rule {
            Rule::Table(t) => t[(x * n + y) * n + z] as usize,
            Rule::Cube => (x & y) | (y & z) | (x & z),
            Rule::Grid { dims } => {
                let (mut x, mut y, mut z) = (x, y, z);
                let mut id = 0;
                let mut stride = 1;
                for &d in dims.iter() {
                    let (a, b, c) = (x % d, y % d, z % d);
                    id += median3(a, b, c) * stride;
                    stride *= d;
                    x /= d;
                    y /= d;
                    z /= d;
                }
                id
            }
            Rule::Wedge { starts } => wedge_median(starts, x, y, z),
        }
    }

    /// The full table, row-major. Refused above the table threshold.
    pub fn to_table(&self) -> Result<Vec<usize>> {
        Limit::TableMax.check(self.n)?;
        let n = self.n;
        let mut t = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    t.push(self.median(x, y, z));
                }
            }
        }
        Ok(t)
    }

    /// Exhaustive axiom check when the carrier allows it, sampled otherwise.
    pub fn verify_axioms(&self) -> AxiomReport {
        self.verify_axioms_with(VerifyOptions::default())
    }

    /// Checks M2, then M1, then M3 and reports the first failing family.
    ///
    /// Exhaustive scans report the lexicographically least witness. Sampled
    /// scans report the first witness drawn.
    pub fn verify_axioms_with(&self, opts: VerifyOptions) -> AxiomReport {
        let n = self.n;
        let m = |x, y, z| self.median(x, y, z);
        let mut randomized = false;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let fail = |axiom, witness: Vec<usize>, randomized| AxiomReport {
            failure: Some(AxiomFailure { axiom, witness }),
            mode: mode(randomized, opts),
        };

        for x in 0..n {
            for y in 0..n {
                if m(x, y, y) != y {
                    return fail(Axiom::M2, vec![x, y, y], false);
                }
            }
        }

        let symmetric = |x, y, z| {
            let v = m(x, y, z);
            m(x, z, y) == v && m(y, x, z) == v && m(y, z, x) == v && m(z, x, y) == v && m(z, y, x) == v
        };
        if n <= SYMMETRY_EXHAUSTIVE_MAX {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !symmetric(x, y, z) {
                            return fail(Axiom::M1, vec![x, y, z], false);
                        }
                    }
                }
            }
        } else {
            randomized = true;
            for _ in 0..opts.trials {
                let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !symmetric(x, y, z) {
                    return fail(Axiom::M1, vec![x, y, z], true);
                }
            }
        }

        let distributive = |x, y, z, u, v| m(m(x, y, z), u, v) == m(x, m(y, u, v), m(z, u, v));
        if n <= Limit::AxiomExhaustiveMax.value() {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for u in 0..n {
                            for v in 0..n {
                                if !distributive(x, y, z, u, v) {
                                    return fail(Axiom::M3, vec![x, y, z, u, v], randomized);
                                }
                            }
                        }
                    }
                }
            }
        } else {
            randomized = true;
            for _ in 0..opts.trials {
                let t: [usize; 5] = std::array::from_fn(|_| rng.random_range(0..n));
                if !distributive(t[0], t[1], t[2], t[3], t[4]) {
                    return fail(Axiom::M3, t.to_vec(), true);
                }
            }
        }

        AxiomReport {
            failure: None,
            mode: mode(randomized, opts),
        }
    }

    fn check_element(&self, x: usize) -> Result<()> {
        if x >= self.n {
            Err(Error::precondition(format!("element {x} outside carrier of size {}", self.n)))
        } else {
            Ok(())
        }
    }

    fn check_set(&self, s: &ElementSet) -> Result<()> {
        if s.universe() != self.n {
            Err(Error::precondition(format!(
                "set over universe {} used with carrier of size {}",
                s.universe(),
                self.n
            )))
        } else {
            Ok(())
        }
    }

    fn compute_interval(&self, x: usize, y: usize) -> ElementSet {
        let mut s = ElementSet::empty(self.n);
        for z in 0..self.n {
            if self.median(x, y, z) == z {
                s.insert(z);
            }
        }
        s
    }

    fn interval_cache(&self) -> Option<&[ElementSet]> {
        if self.n > INTERVAL_CACHE_MAX {
            return None;
        }
        Some(self.intervals.get_or_init(|| {
            let n = self.n;
            let mut all = vec![ElementSet::empty(n); n * n];
            for x in 0..n {
                for y in x..n {
                    let s = self.compute_interval(x, y);
                    all[y * n + x] = s.clone();
                    all[x * n + y] = s;
                }
            }
            all
        }))
    }

    /// `[x, y] = {z : m(x, y, z) = z}`. Panics on ids outside the carrier.
    pub fn interval(&self, x: usize, y: usize) -> ElementSet {
        assert!(x < self.n && y < self.n, "element id out of range");
        match self.interval_cache() {
            Some(c) => c[x * self.n + y].clone(),
            None => self.compute_interval(x, y),
        }
    }

    fn with_interval<R>(&self, x: usize, y: usize, f: impl FnOnce(&ElementSet) -> R) -> R {
        match self.interval_cache() {
            Some(c) => f(&c[x * self.n + y]),
            None => f(&self.compute_interval(x, y)),
        }
    }

    pub fn checked_interval(&self, x: usize, y: usize) -> Result<ElementSet> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.interval(x, y))
    }

    /// Intersects the three pairwise intervals of a triple and returns the unique
    /// member, which must equal `m(x, y, z)`. Any other outcome means a corrupt table.
    pub fn triple_intersection_check(&self, x: usize, y: usize, z: usize) -> Result<usize> {
        for e in [x, y, z] {
            self.check_element(e)?;
        }
        let mut s = self.interval(x, y);
        s.intersect_with(&self.interval(y, z));
        s.intersect_with(&self.interval(x, z));
        let members = s.to_vec();
        let m = self.median(x, y, z);
        match members.as_slice() {
            [only] if *only == m => Ok(m),
            _ => Err(Error::Invariant(format!(
                "intervals of ({x},{y},{z}) meet in {members:?}, median is {m}"
            ))),
        }
    }

    /// True iff `[x, y] ⊆ s` for all `x, y ∈ s`.
    pub fn is_convex(&self, s: &ElementSet) -> bool {
        let members = s.to_vec();
        members.iter().enumerate().all(|(i, &x)| {
            members[i + 1..]
                .iter()
                .all(|&y| self.with_interval(x, y, |iv| iv.is_subset(s)))
        })
    }

    pub fn checked_is_convex(&self, s: &ElementSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(self.is_convex(s))
    }

    /// Least convex superset of `s`.
    pub fn convex_hull(&self, s: &ElementSet) -> ElementSet {
        let mut hull = s.clone();
        let mut queue = s.to_vec();
        let mut done: Vec<usize> = Vec::new();
        while let Some(x) = queue.pop() {
            done.push(x);
            for &y in &done {
                self.with_interval(x, y, |iv| {
                    for z in iv {
                        if hull.insert(z) {
                            queue.push(z);
                        }
                    }
                });
            }
        }
        hull
    }

    pub fn checked_convex_hull(&self, s: &ElementSet) -> Result<ElementSet> {
        self.check_set(s)?;
        Ok(self.convex_hull(s))
    }

    /// Least superset of `s` closed under the median.
    pub fn subalgebra_closure(&self, s: &ElementSet) -> ElementSet {
        let mut closed = s.clone();
        let mut queue = s.to_vec();
        let mut done: Vec<usize> = Vec::new();
        while let Some(x) = queue.pop() {
            done.push(x);
            for i in 0..done.len() {
                for j in i..done.len() {
                    let z = self.median(x, done[i], done[j]);
                    if closed.insert(z) {
                        queue.push(z);
                    }
                }
            }
        }
        closed
    }

    pub fn checked_subalgebra_closure(&self, s: &ElementSet) -> Result<ElementSet> {
        self.check_set(s)?;
        Ok(self.subalgebra_closure(s))
    }

    pub fn is_subalgebra(&self, s: &ElementSet) -> bool {
        let members = s.to_vec();
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate().skip(i + 1) {
                for &z in &members[j + 1..] {
                    if !s.contains(self.median(x, y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub(crate) fn require_subalgebra(&self, q: &ElementSet) -> Result<()> {
        self.check_set(q)?;
        if self.is_subalgebra(q) {
            Ok(())
        } else {
            Err(Error::precondition(format!("{:?} is not closed under the median", q)))
        }
    }

    pub(crate) fn require_convex(&self, s: &ElementSet, name: &str) -> Result<()> {
        self.check_set(s)?;
        if self.is_convex(s) {
            Ok(())
        } else {
            Err(Error::precondition(format!("{name} = {s:?} is not convex")))
        }
    }
}

fn mode(randomized: bool, opts: VerifyOptions) -> VerifyMode {
    if randomized {
        VerifyMode::Randomized {
            trials: opts.trials,
            seed: opts.seed,
        }
    } else {
        VerifyMode::Exhaustive
    }
}

#[inline]
pub(crate) fn median3<T: Ord + Copy>(a: T, b: T, c: T) -> T {
    a.max(b).min(a.min(b).max(c))
}

fn wedge_locate(starts: &[usize], x: usize) -> Option<(usize, usize)> {
    if x == 0 {
        return None;
    }
    let c = starts.partition_point(|&s| s <= x) - 1;
    Some((c, x - starts[c] + 1))
}

fn wedge_median(starts: &[usize], x: usize, y: usize, z: usize) -> usize {
    let pts = [wedge_locate(starts, x), wedge_locate(starts, y), wedge_locate(starts, z)];
    let encode = |c: usize, mask: usize| if mask == 0 { 0 } else { starts[c] + mask - 1 };
    let mask = |p: Option<(usize, usize)>| p.map_or(0, |(_, m)| m);
    let cubes: Vec<usize> = pts.iter().flatten().map(|&(c, _)| c).collect();
    // All points in one cube (the wedge point lies in every cube).
    if let Some(&c) = cubes.first() {
        if cubes.iter().all(|&d| d == c) {
            let (a, b, e) = (mask(pts[0]), mask(pts[1]), mask(pts[2]));
            return encode(c, (a & b) | (b & e) | (a & e));
        }
    } else {
        return 0;
    }
    // Two non-basepoint points share a cube: their cube median with the basepoint.
    for i in 0..3 {
        for j in i + 1..3 {
            if let (Some((ci, mi)), Some((cj, mj))) = (pts[i], pts[j]) {
                if ci == cj {
                    return encode(ci, mi & mj);
                }
            }
        }
    }
    0
}
