//! Constructors for example algebras: cubes, grids, wedges, products, median
//! closures of cube vertices, median graphs, and a standard test corpus.
//!
//! Random draws use ChaCha8 seeded with `seed_from_u64`, which is specified
//! independently of platform, so a seed reproduces the same algebra everywhere.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{MedianAlgebra, Provenance};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::limits::Limit;

/// Largest cube dimension for vertex-closure generation (closures are materialized).
pub const CLOSURE_MAX_D: usize = 6;

/// A reproducible recipe for an algebra, as found in generator JSON files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Hypercube {
        d: usize,
    },
    Chain {
        k: usize,
    },
    Grid {
        dims: Vec<usize>,
    },
    Product {
        left: Box<GeneratorSpec>,
        right: Box<GeneratorSpec>,
    },
    Wedge {
        dims: Vec<usize>,
    },
    /// Either explicit `vertices` (bit masks) or `points` random vertices drawn with `seed`.
    Closure {
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Graph {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<MedianAlgebra> {
        match self {
            GeneratorSpec::Hypercube { d } => MedianAlgebra::hypercube(*d),
            GeneratorSpec::Chain { k } => MedianAlgebra::chain(*k),
            GeneratorSpec::Grid { dims } => MedianAlgebra::grid(dims),
            GeneratorSpec::Product { left, right } => MedianAlgebra::product(&left.build()?, &right.build()?),
            GeneratorSpec::Wedge { dims } => MedianAlgebra::wedge(dims),
            GeneratorSpec::Closure {
                d,
                vertices,
                points,
                seed,
            } => match (vertices, points) {
                (Some(v), None) => cube_closure(*d, v),
                (None, Some(p)) => random_subalgebra(*d, *p, seed.unwrap_or(0)),
                _ => Err(Error::malformed("closure needs exactly one of `vertices` or `points`")),
            },
            GeneratorSpec::Graph { n, edges } => import_median_graph(*n, edges),
        }
    }

    /// The recipe that rebuilds an algebra, when it was made by a generator.
    pub fn from_provenance(p: &Provenance) -> Option<Self> {
        Some(match p {
            Provenance::Hypercube { d } => GeneratorSpec::Hypercube { d: *d },
            Provenance::Chain { k } => GeneratorSpec::Chain { k: *k },
            Provenance::Grid { dims } => GeneratorSpec::Grid { dims: dims.clone() },
            Provenance::Wedge { dims } => GeneratorSpec::Wedge { dims: dims.clone() },
            Provenance::Product(a, b) => GeneratorSpec::Product {
                left: Box::new(Self::from_provenance(a)?),
                right: Box::new(Self::from_provenance(b)?),
            },
            Provenance::Closure { d, vertices, seed } => match seed {
                Some(seed) => GeneratorSpec::Closure {
                    d: *d,
                    vertices: None,
                    points: Some(vertices.len()),
                    seed: Some(*seed),
                },
                None => GeneratorSpec::Closure {
                    d: *d,
                    vertices: Some(vertices.clone()),
                    points: None,
                    seed: None,
                },
            },
            Provenance::Graph { n, edges } => GeneratorSpec::Graph {
                n: *n,
                edges: edges.clone(),
            },
            Provenance::Table | Provenance::Subalgebra { .. } => return None,
        })
    }
}

/// The induced algebra on the median closure of `vertices` in `{0,1}^d`.
/// Element ids follow increasing vertex mask.
pub fn cube_closure(d: usize, vertices: &[u64]) -> Result<MedianAlgebra> {
    closure_with_seed(d, vertices, None)
}

fn closure_with_seed(d: usize, vertices: &[u64], seed: Option<u64>) -> Result<MedianAlgebra> {
    if d == 0 || d > CLOSURE_MAX_D {
        return Err(Error::precondition(format!(
            "closure cube dimension {d} outside 1..={CLOSURE_MAX_D}"
        )));
    }
    if vertices.is_empty() {
        return Err(Error::precondition("closure needs at least one vertex"));
    }
    if let Some(i) = vertices.iter().position(|&v| v >> d != 0) {
        return Err(Error::malformed(format!(
            "vertex {i} ({}) is not a vertex of the {d}-cube",
            vertices[i]
        )));
    }
    let cube = MedianAlgebra::hypercube(d)?;
    let seeds = ElementSet::from_members(1 << d, vertices.iter().map(|&v| v as usize));
    let closed = cube.subalgebra_closure(&seeds);
    let (sub, _) = cube.subalgebra(&closed)?;
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sub.with_provenance(Provenance::Closure {
        d,
        vertices: sorted,
        seed,
    }))
}

/// Median closure of `points` distinct uniformly random vertices of `{0,1}^d`.
pub fn random_subalgebra(d: usize, points: usize, seed: u64) -> Result<MedianAlgebra> {
    if d == 0 || d > CLOSURE_MAX_D {
        return Err(Error::precondition(format!(
            "closure cube dimension {d} outside 1..={CLOSURE_MAX_D}"
        )));
    }
    if points == 0 || points > 1 << d {
        return Err(Error::precondition(format!("cannot draw {points} distinct vertices of the {d}-cube")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<u64> = sample(&mut rng, 1 << d, points).into_iter().map(|v| v as u64).collect();
    closure_with_seed(d, &vertices, Some(seed))
}

/// Builds the median operation of a median graph from its distances.
///
/// `m(x,y,z)` is the unique vertex on geodesics between each pair; a triple
/// with zero or several such vertices is reported by its ids.
pub fn import_median_graph(n: usize, edges: &[(usize, usize)]) -> Result<MedianAlgebra> {
    if n == 0 {
        return Err(Error::malformed("graph must have at least one vertex"));
    }
    Limit::TableMax.check(n)?;
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::malformed(format!("edge {i} ({u}, {v}) names a vertex outside 0..{n}")));
        }
        if u == v {
            return Err(Error::malformed(format!("edge {i} is a loop at {u}")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dist = vec![usize::MAX; n * n];
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if row[v] == usize::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(t) = row.iter().position(|&d| d == usize::MAX) {
            return Err(Error::precondition(format!("graph is disconnected: no path from {s} to {t}")));
        }
    }
    let d = |x: usize, y: usize| dist[x * n + y];
    let between = |x: usize, y: usize, w: usize| d(x, w) + d(w, y) == d(x, y);
    let mut table = vec![0usize; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut found = None;
                for w in 0..n {
                    if between(x, y, w) && between(y, z, w) && between(x, z, w) {
                        if found.is_some() {
                            return Err(Error::precondition(format!(
                                "not a median graph: triple ({x}, {y}, {z}) has several medians"
                            )));
                        }
                        found = Some(w);
                    }
                }
                table[(x * n + y) * n + z] = found.ok_or_else(|| {
                    Error::precondition(format!("not a median graph: triple ({x}, {y}, {z}) has no median"))
                })?;
            }
        }
    }
    let a = MedianAlgebra::from_table(n, &table)?;
    let report = a.verify_axioms();
    if let Some(fail) = report.failure {
        return Err(Error::precondition(format!(
            "graph medians violate {:?} at {:?}",
            fail.axiom, fail.witness
        )));
    }
    let mut edges = edges.to_vec();
    edges.sort_unstable();
    Ok(a.with_provenance(Provenance::Graph { n, edges }))
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: MedianAlgebra,
}

fn tree(n: usize, parents: &[usize]) -> MedianAlgebra {
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
    import_median_graph(n, &edges).expect("trees are median graphs")
}

/// A fixed collection of small algebras (all with at most 12 elements) used
/// by tests and the acceptance suite.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut add = |name: String, a: MedianAlgebra| out.push(CorpusEntry { name, algebra: a });
    for k in 1..=12 {
        add(format!("chain({k})"), MedianAlgebra::chain(k).unwrap());
    }
    for d in 1..=3 {
        add(format!("hypercube({d})"), MedianAlgebra::hypercube(d).unwrap());
    }
    for dims in [
        &[2, 3][..],
        &[2, 4],
        &[2, 5],
        &[2, 6],
        &[3, 3],
        &[3, 4],
        &[2, 2, 3],
    ] {
        add(
            format!("grid({})", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")),
            MedianAlgebra::grid(dims).unwrap(),
        );
    }
    for dims in [
        &[1, 1][..],
        &[1, 2],
        &[2, 1],
        &[2, 2],
        &[1, 1, 1],
        &[1, 1, 2],
        &[1, 1, 1, 1],
        &[3],
        &[1, 3],
        &[1, 1, 1, 1, 1],
        &[2, 1, 1, 1],
    ] {
        add(
            format!("wedge({})", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")),
            MedianAlgebra::wedge(dims).unwrap(),
        );
    }
    add("tree:spine-with-leaves".into(), tree(6, &[0, 1, 2, 2, 2]));
    add("tree:binary-7".into(), tree(7, &[0, 0, 1, 1, 2, 2]));
    add("tree:caterpillar-8".into(), tree(8, &[0, 1, 2, 0, 1, 2, 3]));
    add("tree:spider-9".into(), tree(9, &[0, 1, 0, 3, 0, 5, 0, 7]));
    add("tree:broom-10".into(), tree(10, &[0, 1, 2, 3, 4, 4, 4, 0, 8]));
    // 3x3 grid minus the corner (2,2): three squares in an L.
    add(
        "squaregraph:L".into(),
        import_median_graph(
            8,
            &[(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (0, 3), (3, 6), (1, 4), (4, 7), (2, 5)],
        )
        .unwrap(),
    );
    // 3-cube with a pendant vertex at 7.
    let mut cube_edges: Vec<(usize, usize)> = (0..8usize)
        .flat_map(|x| (0..3).map(move |b| (x, x ^ (1 << b))))
        .filter(|(x, y)| x < y)
        .collect();
    cube_edges.push((7, 8));
    add("graph:cube-with-pendant".into(), import_median_graph(9, &cube_edges).unwrap());
    let mut random = 0;
    let mut seed = 0u64;
    while random < 8 {
        let (d, points) = (3 + (seed % 2) as usize, 3 + (seed % 3) as usize);
        let a = random_subalgebra(d, points, seed).unwrap();
        if a.n() <= 12 && a.n() >= 3 {
            add(format!("closure(d={d}, points={points}, seed={seed})"), a);
            random += 1;
        }
        seed += 1;
    }
    let c2 = MedianAlgebra::chain(2).unwrap();
    let c3 = MedianAlgebra::chain(3).unwrap();
    let star3 = MedianAlgebra::wedge(&[1, 1, 1]).unwrap();
    let square = MedianAlgebra::hypercube(2).unwrap();
    for (name, a, b) in [
        ("chain(3)xchain(2)", &c3, &c2),
        ("chain(3)xchain(3)", &c3, &c3),
        ("wedge(1,1,1)xchain(2)", &star3, &c2),
        ("hypercube(2)xchain(3)", &square, &c3),
        ("chain(2)xwedge(1,1,1)", &c2, &star3),
    ] {
        add(name.into(), MedianAlgebra::product(a, b).unwrap());
    }
    out
}
