use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::crystal::{KashiwaraElement, TropCrystal};
use super::gt::{
    dominant_weights, gt_patterns, gt_rows, gt_weight_multiplicities, weyl_dimension, GTPattern,
};
use crate::error::{Error, Result};
use crate::tropical::IntBox;

/// Vertices of `B̃` with the `ẽ_i^1` edges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalGraph {
    pub rank: usize,
    /// Sorted.
    pub vertices: Vec<KashiwaraElement>,
    /// `(b, i, b′)` with `b′ = ẽ_i(b)`, by vertex index.
    pub edges: Vec<(usize, usize, usize)>,
    /// Vertices with `ε̃_i = 0` for every `i`.
    pub highest: Vec<bool>,
}

impl CrystalGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, b: &KashiwaraElement) -> Option<usize> {
        self.vertices.binary_search(b).ok()
    }

    pub fn highest_weight_vertices(&self) -> impl Iterator<Item = &KashiwaraElement> {
        self.vertices
            .iter()
            .zip(&self.highest)
            .filter(|(_, h)| **h)
            .map(|(v, _)| v)
    }

    /// Builds the graph on a set of cone points.
    pub fn from_vertices(t: &TropCrystal, mut vertices: Vec<KashiwaraElement>) -> Result<Self> {
        vertices.sort();
        vertices.dedup();
        let index: HashMap<&KashiwaraElement, usize> =
            vertices.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let per_vertex = vertices
            .par_iter()
            .map(|v| {
                let mut edges = Vec::new();
                let mut hw = true;
                for i in 1..=t.rank() {
                    if t.eps_tilde(i, v)? != 0 {
                        hw = false;
                    }
                    let w = t.e_tilde(i, 1, v)?;
                    if let Some(&k) = index.get(&w) {
                        edges.push((i, k));
                    }
                }
                Ok((edges, hw))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        let mut highest = Vec::with_capacity(vertices.len());
        for (k, (es, hw)) in per_vertex.into_iter().enumerate() {
            edges.extend(es.into_iter().map(|(i, w)| (k, i, w)));
            highest.push(hw);
        }
        Ok(CrystalGraph {
            rank: t.rank(),
            vertices,
            edges,
            highest,
        })
    }

    /// Disjoint union of graphs over the same crystal.
    pub fn union(t: &TropCrystal, graphs: &[CrystalGraph]) -> Result<Self> {
        let all: Vec<KashiwaraElement> = graphs
            .iter()
            .flat_map(|g| g.vertices.iter().cloned())
            .collect();
        Self::from_vertices(t, all)
    }
}

/// `B̃_λ`, found by breadth-first search from `(λ; 0)` under `ẽ_i^{±1}` and
/// confirmed by a scan of the box `|m_k| ≤ 2(λ₁ − λ_n) + 1`.
///
/// Disagreement between the two, or a cone point on the scan boundary, is
/// reported as [`Error::Inconsistent`].
pub fn enumerate_b_lambda(t: &TropCrystal, lambda: &[i64]) -> Result<CrystalGraph> {
    if t.lambda_len() == 0 || lambda.len() != t.lambda_len() {
        return Err(Error::InvalidArgument(format!(
            "λ must have {} coordinates for {}",
            t.lambda_len(),
            t.source().name()
        )));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda:?} is not dominant"
        )));
    }
    let ell = t.dim() - t.lambda_len();
    let seed = KashiwaraElement::new(lambda.to_vec(), vec![0; ell]);
    if !t.membership(&seed)? {
        return Err(Error::Inconsistent(format!(
            "seed {seed} is not in the cone"
        )));
    }
    let mut seen = BTreeSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed]);
    while let Some(v) = queue.pop_front() {
        for i in 1..=t.rank() {
            for n in [1, -1] {
                let w = t.e_tilde(i, n, &v)?;
                if !seen.contains(&w) && t.membership(&w)? {
                    seen.insert(w.clone());
                    queue.push_back(w);
                }
            }
        }
    }
    let scanned = box_scan(t, lambda)?;
    let bfs: Vec<KashiwaraElement> = seen.into_iter().collect();
    if bfs != scanned {
        let only_bfs = bfs.iter().find(|v| scanned.binary_search(v).is_err());
        let only_box = scanned.iter().find(|v| bfs.binary_search(v).is_err());
        return Err(Error::Inconsistent(format!(
            "BFS found {} points, box scan {}; first BFS-only {:?}, first box-only {:?}",
            bfs.len(),
            scanned.len(),
            only_bfs.map(ToString::to_string),
            only_box.map(ToString::to_string),
        )));
    }
    CrystalGraph::from_vertices(t, bfs)
}

fn box_scan(t: &TropCrystal, lambda: &[i64]) -> Result<Vec<KashiwaraElement>> {
    let ell = t.dim() - t.lambda_len();
    let r = 2 * (lambda[0] - lambda[lambda.len() - 1]) + 1;
    let bx = IntBox::cube(ell, -r, r);
    let size = u64::try_from(bx.size())
        .map_err(|_| Error::InvalidArgument("scan box too large".into()))?;
    let found = (0..size)
        .into_par_iter()
        .map(|k| {
            let m = bx.point(k as u128);
            let b = KashiwaraElement::new(lambda.to_vec(), m);
            Ok(t.membership(&b)?.then_some(b))
        })
        .filter_map(|r: Result<Option<_>>| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    if let Some(b) = found.iter().find(|b| b.m.iter().any(|&x| x.abs() == r)) {
        return Err(Error::Inconsistent(format!(
            "cone point {b} on the scan boundary ±{r}"
        )));
    }
    Ok(found)
}

/// A failure of `ẽ_iⁿ b ∈ B̃ ⟺ −φ̃_i(b) ≤ n ≤ ε̃_i(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFailure {
    pub vertex: String,
    pub index: usize,
    pub n: i64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    /// Vertex-index pairs examined.
    pub checked: usize,
    pub failures: Vec<NormalityFailure>,
}

impl NormalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every vertex and index, checks membership of `ẽ_iⁿ b` for all `n`
/// within `slack + 1` of the predicted range `[−φ̃_i(b), ε̃_i(b)]`.
pub fn normality_check(g: &CrystalGraph, t: &TropCrystal, slack: i64) -> Result<NormalityReport> {
    let per_vertex = g
        .vertices
        .par_iter()
        .map(|b| {
            let mut fails = Vec::new();
            for i in 1..=t.rank() {
                let (phi, eps) = (t.phi_tilde(i, b)?, t.eps_tilde(i, b)?);
                let lo = (-phi).min(eps) - slack - 1;
                let hi = (-phi).max(eps) + slack + 1;
                for n in lo..=hi {
                    let inside = t.membership(&t.e_tilde(i, n, b)?)?;
                    let predicted = -phi <= n && n <= eps;
                    if inside != predicted {
                        fails.push(NormalityFailure {
                            vertex: b.to_string(),
                            index: i,
                            n,
                            detail: format!("in cone: {inside}, φ̃ = {phi}, ε̃ = {eps}"),
                        });
                        break;
                    }
                }
            }
            Ok(fails)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalityReport {
        checked: g.len() * t.rank(),
        failures: per_vertex.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub highest: usize,
}

/// Connected components of the edge graph, each with its unique
/// highest-weight vertex.
pub fn components(g: &CrystalGraph) -> Result<Vec<Component>> {
    let mut adj = vec![Vec::new(); g.len()];
    for &(a, _, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        let hw: Vec<usize> = members.iter().copied().filter(|&v| g.highest[v]).collect();
        if hw.len() != 1 {
            let shown: Vec<String> = hw.iter().map(|&v| g.vertices[v].to_string()).collect();
            return Err(Error::HighestWeight(format!(
                "component of {} has {} highest-weight vertices {shown:?}",
                g.vertices[s],
                hw.len()
            )));
        }
        out.push(Component {
            vertices: members,
            highest: hw[0],
        });
    }
    Ok(out)
}

/// Multiset of `γ̃` over the vertices.
pub fn gamma_multiplicities(
    g: &CrystalGraph,
    t: &TropCrystal,
) -> Result<BTreeMap<Vec<i64>, usize>> {
    let mut m = BTreeMap::new();
    for v in &g.vertices {
        *m.entry(t.gamma_tilde(v)?).or_insert(0) += 1;
    }
    Ok(m)
}

/// Whether the `γ̃`-multiset of `B̃_λ` equals the GT weight multiset for `λ`.
pub fn weights_match_gt(g: &CrystalGraph, t: &TropCrystal, lambda: &[i64]) -> Result<bool> {
    Ok(gamma_multiplicities(g, t)? == gt_weight_multiplicities(lambda))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub lambda: Vec<i64>,
    pub count: usize,
    pub gt_count: usize,
    pub weyl: u128,
}

impl DimRow {
    pub fn matches(&self) -> bool {
        self.count == self.gt_count && self.count as u128 == self.weyl
    }
}

/// `|B̃_λ|` against both oracles for every dominant `λ` with `λ_n = 0`, `λ₁ ≤ max`.
pub fn dim_table(t: &TropCrystal, n: usize, max: i64) -> Result<Vec<DimRow>> {
    if t.lambda_len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} is not a GL{n} crystal",
            t.source().name()
        )));
    }
    dominant_weights(n, max)
        .into_iter()
        .map(|lambda| {
            let count = enumerate_b_lambda(t, &lambda)?.len();
            Ok(DimRow {
                gt_count: gt_patterns(&lambda).len(),
                weyl: weyl_dimension(&lambda).unwrap_or(0),
                count,
                lambda,
            })
        })
        .collect()
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn dim_table_tsv(rows: &[DimRow]) -> String {
    let mut s = String::from("lambda\tcount\tgt\tweyl\tmatch\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            join(&r.lambda),
            r.count,
            r.gt_count,
            r.weyl,
            r.matches()
        );
    }
    s
}

pub fn graph_to_dot(g: &CrystalGraph) -> String {
    let mut s = String::from("digraph crystal {\n");
    for (k, v) in g.vertices.iter().enumerate() {
        let shape = if g.highest[k] {
            ", shape=doublecircle"
        } else {
            ""
        };
        let _ = writeln!(s, "  v{k} [label=\"{v}\"{shape}];");
    }
    for &(a, i, b) in &g.edges {
        let _ = writeln!(s, "  v{a} -> v{b} [label=\"i={i}\"];");
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct VertexJson {
    id: usize,
    lambda: Vec<i64>,
    m: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gt: Option<Vec<Vec<i64>>>,
    gamma: Vec<i64>,
    eps: Vec<i64>,
    phi: Vec<i64>,
    highest_weight: bool,
}

#[derive(Serialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    i: usize,
}

#[derive(Serialize)]
struct GraphJson {
    schema_version: u32,
    crystal: String,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

/// JSON with per-vertex `λ`, `m`, GT rows (for `GL_3`), `γ̃`, `ε̃` and `φ̃`.
pub fn graph_to_json(g: &CrystalGraph, t: &TropCrystal) -> Result<String> {
    let gl3 = t.has_closed_forms();
    let vertices = g
        .vertices
        .iter()
        .enumerate()
        .map(|(id, v)| {
            Ok(VertexJson {
                id,
                lambda: v.lambda.clone(),
                m: v.m.clone(),
                gt: if gl3 {
                    Some(gt_rows(v).map(|p: GTPattern| p.rows)?)
                } else {
                    None
                },
                gamma: t.gamma_tilde(v)?,
                eps: (1..=t.rank())
                    .map(|i| t.eps_tilde(i, v))
                    .collect::<Result<_>>()?,
                phi: (1..=t.rank())
                    .map(|i| t.phi_tilde(i, v))
                    .collect::<Result<_>>()?,
                highest_weight: g.highest[id],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = g
        .edges
        .iter()
        .map(|&(from, i, to)| EdgeJson { from, to, i })
        .collect();
    let doc = GraphJson {
        schema_version: super::SCHEMA_VERSION,
        crystal: t.source().name().into(),
        vertices,
        edges,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}
