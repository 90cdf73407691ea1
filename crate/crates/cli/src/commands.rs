use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::{json, Value};

use medalg::actions::{automorphisms, automorphisms_from_generators, orbit_family, orbit_tameness_check, PermutationGroup};
use medalg::generators::{standard_corpus, GeneratorSpec};
use medalg::io;
use medalg::variation::{
    bv_chain, edge_sum_variation, halfspace_family, total_variation_upsilon, FamilyMode,
};
use medalg::{ElementSet, HalfspaceMethod, MedianAlgebra, VerifyMode, VerifyOptions, WallSystem};

use crate::{CliError, Output, RankMethod, VariationMode};

#[derive(Subcommand)]
pub enum GenFamily {
    /// The Boolean cube {0,1}^d.
    Hypercube { d: usize },
    /// A linear order with k elements.
    Chain { k: usize },
    /// A product of chains with the given side lengths.
    Grid {
        #[arg(required = true)]
        dims: Vec<usize>,
    },
    /// Cubes of the given dimensions glued at one common vertex.
    Wedge {
        #[arg(required = true)]
        dims: Vec<usize>,
    },
    /// The median closure of cube vertices: explicit masks, or random ones from a seed.
    Closure {
        #[arg(long)]
        d: usize,
        #[arg(long, num_args = 1.., conflicts_with_all = ["points", "seed"], required_unless_present = "points")]
        vertices: Option<Vec<u64>>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, requires = "points")]
        seed: Option<u64>,
    },
    /// Import a median graph from {"n", "edges"}.
    Graph { file: PathBuf },
    /// The product of two generator-format algebra files.
    Product { left: PathBuf, right: PathBuf },
    /// Write every algebra of the standard corpus into a directory.
    Corpus { dir: PathBuf },
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_algebra(path: &Path) -> Result<MedianAlgebra, CliError> {
    Ok(io::parse_algebra(&read(path)?)?)
}

pub fn members(s: &ElementSet) -> Value {
    json!(s.to_vec())
}

fn maybe_rationals(t: &Option<(medalg::Rational, medalg::Rational)>) -> Value {
    match t {
        Some((a, b)) => json!([io::rational_json(a), io::rational_json(b)]),
        None => Value::Null,
    }
}

pub fn verify(path: &Path, trials: u64, seed: u64) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let report = a.verify_axioms_with(VerifyOptions { trials, seed });
    let mode = match report.mode {
        VerifyMode::Exhaustive => json!("exhaustive"),
        VerifyMode::Randomized { trials, seed } => json!({"randomized": {"trials": trials, "seed": seed}}),
    };
    let failure = report
        .failure
        .as_ref()
        .map_or(Value::Null, |f| json!({"axiom": f.axiom.to_string(), "witness": f.witness}));
    Ok(Output::checked(
        json!({"n": a.n(), "passed": report.passed(), "mode": mode, "failure": failure}),
        report.passed(),
    ))
}

/// `(rank, agree)`; `agree` is meaningful only for `Both`.
fn rank_of(ws: &WallSystem, method: RankMethod) -> Result<(usize, Option<(usize, usize)>), CliError> {
    Ok(match method {
        RankMethod::Clique => (ws.rank_via_crossing(), None),
        RankMethod::Embed => (ws.max_embedding_rank()?, None),
        RankMethod::Both => {
            let clique = ws.rank_via_crossing();
            let embed = ws.max_embedding_rank()?;
            (clique, Some((clique, embed)))
        }
    })
}

pub fn rank(path: &Path, method: RankMethod) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let ws = WallSystem::new(&a);
    Ok(match rank_of(&ws, method)? {
        (r, None) => Output::ok(json!({"rank": r, "method": method.name()})),
        (r, Some((clique, embed))) if clique == embed => Output::ok(json!({"rank": r, "agree": true})),
        (r, Some((clique, embed))) => Output::checked(
            json!({"rank": r, "agree": false, "witness": {"clique": clique, "embed": embed}}),
            false,
        ),
    })
}

pub fn walls(path: &Path, method: RankMethod, brute: bool) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let hm = if brute {
        HalfspaceMethod::BruteForce
    } else {
        HalfspaceMethod::EdgeGenerated
    };
    let ws = WallSystem::with_method(&a, hm)?;
    let (r, both) = rank_of(&ws, method)?;
    let agree = both.is_none_or(|(c, e)| c == e);
    let halfspaces: Vec<Value> = ws.halfspaces().iter().map(|h| json!({"members": members(h)})).collect();
    let mut body = json!({
        "halfspaces": halfspaces,
        "walls": ws.wall_indices(),
        "crossing_edges": ws.crossing_edges(),
        "rank": r,
        "method": method.name(),
    });
    if let Some((c, e)) = both {
        body["agree"] = json!(agree);
        if !agree {
            body["witness"] = json!({"clique": c, "embed": e});
        }
    }
    Ok(Output::checked(body, agree))
}

pub fn ind_sets(path: &Path) -> Result<Output, CliError> {
    let s = io::parse_set_system(&read(path)?)?;
    let r = s.ind();
    Ok(Output::ok(json!({"ind": r.ind, "witness": r.witness})))
}

pub fn ind_functions(path: &Path) -> Result<Output, CliError> {
    let fam = io::parse_function_family(&read(path)?)?;
    let r = fam.ind();
    Ok(Output::ok(json!({
        "ind": r.ind,
        "witness": r.witness,
        "thresholds": maybe_rationals(&r.thresholds),
    })))
}

pub fn vc(path: &Path, dual: bool) -> Result<Output, CliError> {
    let s = io::parse_set_system(&read(path)?)?;
    if !dual {
        let r = s.vc_dimension()?;
        return Ok(Output::ok(json!({"vc": r.vc, "witness": r.witness})));
    }
    let d = s.dual();
    let r = d.system.vc_dimension()?;
    Ok(Output::ok(json!({
        "vc": r.vc,
        "witness": r.witness,
        "dual_ground": d.system.ground(),
        "dual_sets": d.system.len(),
        "collapsed": d.collapsed,
    })))
}

pub fn roller(path: &Path) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let ws = WallSystem::new(&a);
    let iota = ws.roller_embedding();
    let injective = iota.is_injective();
    let mp_witness = iota.mp_witness();
    let subalgebra = iota.image_is_subalgebra();
    // Equivariance needs the automorphism group; skipped (null) when refused.
    let (equivariant, bad_g) = match automorphisms(&a) {
        Ok(group) => {
            let mut bad = None;
            for g in group.elements().unwrap_or(group.generators()) {
                if !iota.is_equivariant(&ws, g)? {
                    bad = Some(g.clone());
                    break;
                }
            }
            (json!(bad.is_none()), bad)
        }
        Err(e) if e.is_refusal() => (Value::Null, None),
        Err(e) => return Err(e.into()),
    };
    let ok = injective && mp_witness.is_none() && subalgebra && bad_g.is_none();
    let vectors: Vec<Value> = iota.vectors.iter().map(members).collect();
    let mut body = json!({
        "dimension": iota.dimension(),
        "vectors": vectors,
        "injective": injective,
        "mp": mp_witness.is_none(),
        "image_subalgebra": subalgebra,
        "equivariant": equivariant,
    });
    if !ok {
        body["witness"] = json!({"mp_triple": mp_witness, "automorphism": bad_g});
    }
    Ok(Output::checked(body, ok))
}

fn family_mode(spec: &str, n: usize) -> Result<FamilyMode, CliError> {
    if spec == "all" {
        Ok(FamilyMode::All)
    } else if let Some(axis) = spec.strip_prefix("coord:") {
        axis.parse()
            .map(FamilyMode::Coordinate)
            .map_err(|_| CliError::Input(format!("bad axis in --halfspaces {spec}")))
    } else if let Some(file) = spec.strip_prefix("file:") {
        Ok(FamilyMode::Custom(io::parse_halfspaces(&read(Path::new(file))?, n)?))
    } else {
        Err(CliError::Input(format!(
            "--halfspaces must be all, coord:<axis> or file:<path>, got {spec}"
        )))
    }
}

pub fn variation(path: &Path, function: &Path, mode: VariationMode, halfspaces: &str) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let f = io::parse_function(&read(function)?)?;
    if f.n() != a.n() {
        return Err(CliError::Input(format!(
            "function has {} values but the carrier has {} elements",
            f.n(),
            a.n()
        )));
    }
    let body = match mode {
        VariationMode::Edge => {
            let full = ElementSet::full(a.n());
            let v = edge_sum_variation(&a, &f, &full)?;
            json!({"value": io::rational_json(&v), "witness": {"subalgebra": members(&full)}})
        }
        VariationMode::Total => {
            let r = total_variation_upsilon(&a, &f)?;
            json!({
                "value": io::rational_json(&r.value),
                "witness": {"subalgebra": members(&r.witness), "lower_bound_only": r.lower_bound_only},
            })
        }
        VariationMode::Chain => {
            let ws = WallSystem::new(&a);
            let family = halfspace_family(&ws, &family_mode(halfspaces, a.n())?)?;
            let r = bv_chain(&ws, &f, &family)?;
            let chain: Vec<Value> = r.chain.iter().map(members).collect();
            json!({
                "value": io::rational_json(&r.value),
                "witness": {"chain": chain, "transversal": r.transversal, "family_size": family.len()},
            })
        }
    };
    Ok(Output::ok(body))
}

fn group_for(a: &MedianAlgebra, generators: Option<&Path>) -> Result<PermutationGroup, CliError> {
    match generators {
        None => Ok(automorphisms(a)?),
        Some(p) => {
            let given = io::parse_group(&read(p)?)?;
            Ok(automorphisms_from_generators(a, given.generators().to_vec())?)
        }
    }
}

pub fn auts(path: &Path, generators: Option<&Path>) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let group = group_for(&a, generators)?;
    let mut body = match group.elements() {
        Some(all) => io::group_json(a.n(), all),
        None => io::group_json(a.n(), group.generators()),
    };
    body["order"] = json!(group.order());
    body["generators"] = json!(group.generators());
    Ok(Output::ok(body))
}

pub fn orbit(path: &Path, function: &Path, generators: Option<&Path>, check: bool) -> Result<Output, CliError> {
    let a = load_algebra(path)?;
    let f = io::parse_function(&read(function)?)?;
    let group = group_for(&a, generators)?;
    let orbit = orbit_family(&f, &group)?;
    let mut body = json!({"size": orbit.len(), "orbit": io::function_family_json(&orbit)});
    if !check {
        return Ok(Output::ok(body));
    }
    let ws = WallSystem::new(&a);
    let r = orbit_tameness_check(&ws, &f, &group)?;
    body["tameness"] = json!({
        "ind_orbit": r.ind_orbit,
        "rank": r.rank,
        "bounded": r.bounded,
        "witness": r.witness,
        "thresholds": maybe_rationals(&r.thresholds),
    });
    Ok(Output::checked(body, r.bounded))
}

fn spec_of(path: &Path) -> Result<GeneratorSpec, CliError> {
    let a = load_algebra(path)?;
    GeneratorSpec::from_provenance(a.provenance())
        .ok_or_else(|| CliError::Input(format!("{} is not in generator format", path.display())))
}

fn emit(spec: &GeneratorSpec, table: bool) -> Result<Value, CliError> {
    let a = spec.build()?;
    Ok(if table {
        io::algebra_table_json(&a)?
    } else {
        io::generator_json(spec)
    })
}

fn file_name(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    while out.ends_with('_') {
        out.pop();
    }
    out + ".json"
}

pub fn gen(family: &GenFamily, table: bool) -> Result<Output, CliError> {
    let spec = match family {
        GenFamily::Hypercube { d } => GeneratorSpec::Hypercube { d: *d },
        GenFamily::Chain { k } => GeneratorSpec::Chain { k: *k },
        GenFamily::Grid { dims } => GeneratorSpec::Grid { dims: dims.clone() },
        GenFamily::Wedge { dims } => GeneratorSpec::Wedge { dims: dims.clone() },
        GenFamily::Closure {
            d,
            vertices,
            points,
            seed,
        } => GeneratorSpec::Closure {
            d: *d,
            vertices: vertices.clone(),
            points: *points,
            seed: points.map(|_| seed.unwrap_or(0)),
        },
        GenFamily::Graph { file } => {
            let (n, edges) = io::parse_graph(&read(file)?)?;
            GeneratorSpec::Graph { n, edges }
        }
        GenFamily::Product { left, right } => GeneratorSpec::Product {
            left: Box::new(spec_of(left)?),
            right: Box::new(spec_of(right)?),
        },
        GenFamily::Corpus { dir } => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for entry in standard_corpus() {
                let spec = GeneratorSpec::from_provenance(entry.algebra.provenance())
                    .expect("corpus algebras come from generators");
                let name = file_name(&entry.name);
                let body = serde_json::to_string(&emit(&spec, table)?).expect("JSON values serialize");
                let target = dir.join(&name);
                std::fs::write(&target, body + "\n")
                    .map_err(|e| CliError::Input(format!("cannot write {}: {e}", target.display())))?;
                written.push(name);
            }
            return Ok(Output::ok(json!({"written": written})));
        }
    };
    Ok(Output::ok(emit(&spec, table)?))
}
