//! `report`: every applicable check on one algebra, in a fixed order.
//!
//! A check whose input exceeds a size limit is reported as skipped, never
//! as passed. Checks that need a passing axiom scan are skipped otherwise.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use medalg::actions::{automorphisms, orbit_tameness_check, PermutationGroup};
use medalg::clique::cliques_of_size;
use medalg::independence::{FunctionFamily, SetSystem};
use medalg::walls::{enumerate_halfspaces, HellyOutcome};
use medalg::{ElementSet, HalfspaceMethod, MedianAlgebra, Provenance, WallSystem};

use crate::commands::{load_algebra, members};
use crate::{CliError, Output};

const SAMPLES: usize = 200;
const SUBFAMILY_BUDGET: usize = 200_000;

enum Status {
    Pass,
    Fail,
    Skipped,
}

struct Check {
    status: Status,
    value: Value,
    witness: Value,
}

impl Check {
    fn pass(value: Value) -> Self {
        Check {
            status: Status::Pass,
            value,
            witness: Value::Null,
        }
    }

    fn verdict(ok: bool, value: Value, witness: Value) -> Self {
        Check {
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            witness,
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Check {
            status: Status::Skipped,
            value: json!({"reason": reason.into()}),
            witness: Value::Null,
        }
    }
}

type CheckResult = medalg::Result<Check>;

/// Refusals become skips; other errors are failures of the check itself.
fn settle(r: CheckResult) -> Check {
    match r {
        Ok(c) => c,
        Err(e) if e.is_refusal() => Check::skipped(e.to_string()),
        Err(e) => Check::verdict(false, Value::Null, json!({"error": e.to_string()})),
    }
}

struct Context {
    a: MedianAlgebra,
    ws: WallSystem,
    group: medalg::Result<PermutationGroup>,
    seed: u64,
}

fn halfspace_methods(c: &Context) -> CheckResult {
    let edge = c.ws.halfspaces().to_vec();
    let brute = enumerate_halfspaces(&c.a, HalfspaceMethod::BruteForce)?;
    let ok = edge == brute;
    Ok(Check::verdict(
        ok,
        json!({"halfspaces": edge.len(), "walls": c.ws.wall_count()}),
        if ok { Value::Null } else { json!({"brute_force": brute.len()}) },
    ))
}

fn rank(c: &Context) -> CheckResult {
    let crossing = c.ws.rank_via_crossing();
    let embedding = c.ws.max_embedding_rank()?;
    let ind = SetSystem::new(c.a.n(), c.ws.halfspaces().to_vec())?.ind().ind;
    let ok = crossing == embedding && embedding == ind;
    Ok(Check::verdict(
        ok,
        json!({"crossing": crossing, "embedding": embedding, "ind": ind}),
        if ok { Value::Null } else { json!({"max_crossing_family": c.ws.max_crossing_family()}) },
    ))
}

fn rank_mp_maps(c: &Context) -> CheckResult {
    let crossing = c.ws.rank_via_crossing();
    let maps = FunctionFamily::all_mp_maps(&c.a, 3)?;
    let r = maps.ind();
    Ok(Check::verdict(
        r.ind == crossing,
        json!({"ind": r.ind, "rank": crossing, "maps": maps.len()}),
        if r.ind == crossing { Value::Null } else { json!(r.witness) },
    ))
}

fn crossing_iff_independent(c: &Context) -> CheckResult {
    let hs = c.ws.halfspaces();
    let h = hs.len();
    let budget = h + h * h.saturating_sub(1) / 2 + h * h.saturating_sub(1) * h.saturating_sub(2) / 6;
    if budget > SUBFAMILY_BUDGET {
        return Ok(Check::skipped(format!("{budget} subfamilies exceed the budget {SUBFAMILY_BUDGET}")));
    }
    let sys = SetSystem::new(c.a.n(), hs.to_vec())?;
    let adj = sys.pairwise_graph();
    let mut checked = 0usize;
    for i in 0..h {
        for j in i + 1..h {
            for k in (j + 1..h).map(Some).chain([None]) {
                let fam: Vec<usize> = [i, j].into_iter().chain(k).collect();
                let crossing = fam
                    .iter()
                    .enumerate()
                    .all(|(p, &x)| fam[p + 1..].iter().all(|&y| adj[x].contains(y)));
                if sys.is_independent_family(&fam)? != crossing {
                    return Ok(Check::verdict(false, json!({"checked": checked}), json!(fam)));
                }
                checked += 1;
            }
        }
    }
    Ok(Check::pass(json!({"subfamilies": checked, "max_size": 3})))
}

fn ind_dual_vc(c: &Context) -> CheckResult {
    let r = SetSystem::new(c.a.n(), c.ws.halfspaces().to_vec())?.check_ind_equals_dual_vc()?;
    Ok(Check::verdict(
        r.equal,
        json!({"ind": r.ind, "dual_vc": r.dual_vc}),
        Value::Null,
    ))
}

fn random_hull(a: &MedianAlgebra, rng: &mut ChaCha8Rng, points: usize) -> ElementSet {
    let n = a.n();
    a.convex_hull(&ElementSet::from_members(n, (0..points).map(|_| rng.random_range(0..n))))
}

fn kakutani(c: &Context) -> CheckResult {
    let a = &c.a;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut pairs: Vec<(ElementSet, ElementSet)> = Vec::new();
    for x in 0..a.n() {
        for y in x + 1..a.n() {
            pairs.push((ElementSet::singleton(a.n(), x), ElementSet::singleton(a.n(), y)));
        }
    }
    for _ in 0..SAMPLES {
        let (c1, c2) = (random_hull(a, &mut rng, 2), random_hull(a, &mut rng, 2));
        if c1.is_disjoint(&c2) {
            pairs.push((c1, c2));
        }
    }
    for (c1, c2) in &pairs {
        match c.ws.kakutani_separate(c1, c2) {
            Ok(_) => {}
            Err(medalg::Error::Invariant(_)) => {
                return Ok(Check::verdict(false, Value::Null, json!([members(c1), members(c2)])))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Check::pass(json!({"pairs": pairs.len(), "seed": c.seed})))
}

fn helly(c: &Context) -> CheckResult {
    let a = &c.a;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(1));
    let mut families = 0;
    for _ in 0..SAMPLES {
        // Hulls of S minus one point: any two share the rest of S.
        let k = rng.random_range(3..=5);
        let pts: Vec<usize> = (0..k).map(|_| rng.random_range(0..a.n())).collect();
        let family: Vec<ElementSet> = (0..k)
            .map(|skip| {
                let rest = pts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &p)| p);
                a.convex_hull(&ElementSet::from_members(a.n(), rest))
            })
            .collect();
        match c.ws.helly_check(&family) {
            Ok(HellyOutcome::CommonPoint(_)) => families += 1,
            Ok(HellyOutcome::DisjointPair(i, j)) => {
                return Ok(Check::verdict(false, Value::Null, json!({"disjoint": [i, j], "points": pts})))
            }
            Err(medalg::Error::Invariant(_)) => {
                return Ok(Check::verdict(false, Value::Null, json!({"points": pts})))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Check::pass(json!({"families": families, "seed": c.seed.wrapping_add(1)})))
}

fn wall_traces(c: &Context) -> CheckResult {
    let a = &c.a;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(2));
    let mut subalgebras = 0;
    for _ in 0..20 {
        let k = rng.random_range(1..=4);
        let q = a.subalgebra_closure(&ElementSet::from_members(a.n(), (0..k).map(|_| rng.random_range(0..a.n()))));
        let r = c.ws.wall_trace_check(&q)?;
        if !r.holds() {
            let w = &r.failures[0];
            return Ok(Check::verdict(
                false,
                Value::Null,
                json!({"subalgebra": members(&q), "wall": [members(&w.side0), members(&w.side1)]}),
            ));
        }
        subalgebras += 1;
    }
    Ok(Check::pass(json!({"subalgebras": subalgebras})))
}

fn roller(c: &Context) -> CheckResult {
    let iota = c.ws.roller_embedding();
    let injective = iota.is_injective();
    let mp = iota.mp_witness();
    let sub = iota.image_is_subalgebra();
    Ok(Check::verdict(
        injective && mp.is_none() && sub,
        json!({"dimension": iota.dimension(), "injective": injective, "mp": mp.is_none(), "image_subalgebra": sub}),
        mp.map_or(Value::Null, |t| json!({"mp_triple": t})),
    ))
}

fn group(c: &Context) -> medalg::Result<&PermutationGroup> {
    c.group.as_ref().map_err(Clone::clone)
}

fn roller_equivariance(c: &Context) -> CheckResult {
    let g = group(c)?;
    let iota = c.ws.roller_embedding();
    for p in g.elements().unwrap_or(g.generators()) {
        if !iota.is_equivariant(&c.ws, p)? {
            return Ok(Check::verdict(false, Value::Null, json!({"automorphism": p})));
        }
    }
    Ok(Check::pass(json!({"group_order": g.order()})))
}

fn orbit_tameness(c: &Context) -> CheckResult {
    let g = group(c)?;
    let maps = FunctionFamily::all_mp_maps(&c.a, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(3));
    let picks: Vec<usize> = if maps.len() <= 20 {
        (0..maps.len()).collect()
    } else {
        (0..20).map(|_| rng.random_range(0..maps.len())).collect()
    };
    let mut worst = 0;
    for &i in &picks {
        let r = orbit_tameness_check(&c.ws, &maps.functions()[i], g)?;
        if !r.bounded {
            return Ok(Check::verdict(
                false,
                json!({"ind_orbit": r.ind_orbit, "rank": r.rank}),
                json!({"function": medalg::io::function_json(&maps.functions()[i]), "orbit_witness": r.witness}),
            ));
        }
        worst = worst.max(r.ind_orbit);
    }
    Ok(Check::pass(json!({"observables": picks.len(), "max_ind_orbit": worst, "rank": c.ws.rank_via_crossing()})))
}

fn product_rank(c: &Context) -> CheckResult {
    let Provenance::Product(l, r) = c.a.provenance() else {
        return Ok(Check::skipped("not a product"));
    };
    let spec = |p: &Provenance| medalg::generators::GeneratorSpec::from_provenance(p);
    let (Some(ls), Some(rs)) = (spec(l), spec(r)) else {
        return Ok(Check::skipped("factors cannot be rebuilt"));
    };
    let (rl, rr) = (
        WallSystem::new(&ls.build()?).rank_via_crossing(),
        WallSystem::new(&rs.build()?).rank_via_crossing(),
    );
    let rp = c.ws.rank_via_crossing();
    Ok(Check::verdict(rp == rl + rr, json!({"product": rp, "left": rl, "right": rr}), Value::Null))
}

fn wedge_cubes(c: &Context) -> CheckResult {
    let Provenance::Wedge { dims } = c.a.provenance() else {
        return Ok(Check::skipped("not a wedge"));
    };
    // Ids: the wedge point 0, then each cube's nonzero vertices in input order.
    let mut cube_of = vec![usize::MAX; c.a.n()];
    let mut next = 1;
    for (i, &d) in dims.iter().enumerate() {
        for _ in 1..(1usize << d) {
            cube_of[next] = i;
            next += 1;
        }
    }
    let mut wall_cube = Vec::new();
    for w in c.ws.walls() {
        let away = if w.side0.contains(0) { w.side1 } else { w.side0 };
        let cubes: std::collections::BTreeSet<usize> = away.iter().map(|x| cube_of[x]).collect();
        if cubes.len() != 1 {
            return Ok(Check::verdict(false, Value::Null, json!({"halfspace": members(&away)})));
        }
        wall_cube.push(*cubes.first().expect("halfspaces are nonempty"));
    }
    let adj = c.ws.crossing_adjacency();
    let rank = c.ws.rank_via_crossing();
    let mut families = 0;
    for k in 2..=rank {
        for clique in cliques_of_size(&adj, k) {
            if clique.iter().any(|&w| wall_cube[w] != wall_cube[clique[0]]) {
                return Ok(Check::verdict(false, Value::Null, json!({"crossing_walls": clique})));
            }
            families += 1;
        }
    }
    let expected = dims.iter().copied().max().unwrap_or(0);
    Ok(Check::verdict(
        rank == expected,
        json!({"rank": rank, "crossing_families": families, "walls": wall_cube.len()}),
        Value::Null,
    ))
}

type CheckFn = fn(&Context) -> CheckResult;

const CHECKS: [(&str, CheckFn); 13] = [
    ("halfspace_methods", halfspace_methods),
    ("rank", rank),
    ("rank_mp_maps", rank_mp_maps),
    ("crossing_iff_independent", crossing_iff_independent),
    ("ind_equals_dual_vc", ind_dual_vc),
    ("kakutani_separation", kakutani),
    ("helly", helly),
    ("wall_traces", wall_traces),
    ("roller_embedding", roller),
    ("roller_equivariance", roller_equivariance),
    ("orbit_tameness", orbit_tameness),
    ("product_rank", product_rank),
    ("wedge_cubes", wedge_cubes),
];

pub fn run(path: &Path, seed: u64, stable: bool) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let n = a.n();
    let mut rows = Vec::new();
    let mut failed = 0;
    let mut record = |name: &str, check: Check, ms: u128, rows: &mut Vec<Value>| {
        let status = match check.status {
            Status::Pass => "pass",
            Status::Fail => {
                failed += 1;
                "fail"
            }
            Status::Skipped => "skipped",
        };
        let mut row = json!({"name": name, "status": status, "value": check.value, "witness": check.witness});
        if !stable {
            row["runtime_ms"] = json!(ms as u64);
        }
        rows.push(row);
    };

    let start = Instant::now();
    let axioms = a.verify_axioms();
    let axioms_ok = axioms.passed();
    let check = Check::verdict(
        axioms_ok,
        json!({"exhaustive": matches!(axioms.mode, medalg::VerifyMode::Exhaustive)}),
        axioms
            .failure
            .as_ref()
            .map_or(Value::Null, |f| json!({"axiom": f.axiom.to_string(), "tuple": f.witness})),
    );
    record("axioms", check, start.elapsed().as_millis(), &mut rows);

    if axioms_ok {
        let ws = WallSystem::new(&a);
        let ctx = Context {
            group: automorphisms(&a),
            a,
            ws,
            seed,
        };
        for (name, f) in CHECKS {
            let start = Instant::now();
            let check = settle(f(&ctx));
            record(name, check, start.elapsed().as_millis(), &mut rows);
        }
    } else {
        for (name, _) in CHECKS {
            record(name, Check::skipped("axioms failed"), 0, &mut rows);
        }
    }
    let ok = failed == 0;
    Ok(Output::checked(
        json!({"n": n, "checks": rows, "failed": failed, "passed": ok}),
        ok,
    ))
}
