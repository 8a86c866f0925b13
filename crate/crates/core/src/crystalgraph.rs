//! Breadth-first exploration of the NSS crystal from `O`, string data,
//! axiom checks, the graded census and the Kostant partition function.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nss::{
    apply_fhat, eps_hat, phi_hat, weight, zero_datum, CartanData, DiagramCatalog, NssDatum, NssError,
    WeightVector,
};
use crate::par::{self, Execution};

/// Nonnegative coefficients over the simple roots.
pub type RootVector = Vec<u64>;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Nss(#[from] NssError),
    #[error("unsupported format {0:?} (expected dot or json)")]
    UnsupportedFormat(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

impl std::str::FromStr for Format {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(GraphError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub word: Vec<usize>,
    pub weight: Vec<i64>,
    pub eps: Vec<i64>,
    pub phi: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub i: usize,
}

/// An explored crystal. The serialisable part is plain data; the NSS data
/// behind each node are kept only for graphs built by [`explore`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub n: usize,
    pub depth: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    #[serde(skip)]
    data: Vec<NssDatum>,
}

impl PartialEq for CrystalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.depth == other.depth
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl CrystalGraph {
    pub fn from_parts(n: usize, depth: usize, nodes: Vec<GraphNode>, edges: Vec<GraphEdge>) -> Self {
        CrystalGraph { n, depth, nodes, edges, data: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The NSS datum behind node `id`, if the graph was explored in-process.
    pub fn datum(&self, id: usize) -> Option<&NssDatum> {
        self.data.get(id)
    }

    pub fn data(&self) -> &[NssDatum] {
        &self.data
    }

    /// `f_i b` if the edge was explored.
    pub fn f_hat(&self, b: usize, i: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.from == b && e.i == i).map(|e| e.to)
    }

    pub fn beta(&self, id: usize) -> RootVector {
        self.nodes[id].weight.iter().map(|&w| (-w).max(0) as u64).collect()
    }
}

/// `e_i b`, the partial inverse of `f_i`, found by inverting edges.
pub fn e_hat(g: &CrystalGraph, b: usize, i: usize) -> Option<usize> {
    g.edges.iter().find(|e| e.to == b && e.i == i).map(|e| e.from)
}

struct Pending {
    datum: NssDatum,
    weight: WeightVector,
    table: Vec<i64>,
}

/// All nodes reachable from `O` by words of length at most `depth`,
/// deduplicated by weight and the value table on σ-canonical diagrams with
/// at most `max_boxes` boxes.
pub fn explore(
    cartan: CartanData,
    depth: usize,
    max_boxes: usize,
    exec: Execution,
) -> Result<CrystalGraph, GraphError> {
    let n = cartan.rank();
    let catalog = DiagramCatalog::new(n, max_boxes);
    let root = zero_datum(cartan);
    let mut data = vec![root.clone()];
    let mut edges = Vec::new();
    let mut level: Vec<(usize, Pending)> =
        vec![(0, Pending { datum: root, weight: WeightVector::zero(n), table: vec![0; catalog.len()] })];

    for _ in 0..depth {
        // phi_i of every frontier node, then every child table
        let steps: Vec<Vec<i64>> = par::try_map(exec, &level, |(_, p)| {
            (0..n).map(|i| phi_hat(&p.datum, i).map(|v| v - 1)).collect::<Result<Vec<_>, _>>()
        })?;
        let jobs: Vec<(usize, usize)> = (0..level.len()).flat_map(|k| (0..n).map(move |i| (k, i))).collect();
        let tables = par::map(exec, &jobs, |&(k, i)| catalog.apply_fhat(&level[k].1.table, i, steps[k][i]));

        // sequential, deterministic insertion
        let mut seen: HashMap<(WeightVector, Vec<i64>), usize> = HashMap::new();
        let mut next: Vec<Pending> = Vec::new();
        let mut raw_edges: Vec<(usize, usize, usize)> = Vec::new();
        for (&(k, i), table) in jobs.iter().zip(tables) {
            let (from, parent) = &level[k];
            let mut w = parent.weight.clone();
            w.0[i] -= 1;
            let key = (w, table);
            let slot = match seen.get(&key) {
                Some(&s) => s,
                None => {
                    let s = next.len();
                    let (weight, table) = key.clone();
                    next.push(Pending { datum: apply_fhat(&parent.datum, i)?, weight, table });
                    seen.insert(key, s);
                    s
                }
            };
            raw_edges.push((*from, slot, i));
        }

        // order the new level by (weight, table) and assign ids
        let mut order: Vec<usize> = (0..next.len()).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&next[a], &next[b]);
            pb.weight.cmp(&pa.weight).then_with(|| pa.table.cmp(&pb.table))
        });
        let base = data.len();
        let mut new_id = vec![0; next.len()];
        for (rank, &slot) in order.iter().enumerate() {
            new_id[slot] = base + rank;
        }
        edges.extend(raw_edges.into_iter().map(|(from, slot, i)| GraphEdge { from, to: new_id[slot], i }));
        let mut slots: Vec<Option<Pending>> = next.into_iter().map(Some).collect();
        level = order
            .iter()
            .map(|&slot| (new_id[slot], slots[slot].take().expect("each slot used once")))
            .collect();
        data.extend(level.iter().map(|(_, p)| p.datum.clone()));
    }

    let stats = par::try_map(exec, &data, |m| -> Result<GraphNode, NssError> {
        Ok(GraphNode {
            id: 0,
            word: m.word().to_vec(),
            weight: weight(m)?.0,
            eps: (0..n).map(|i| eps_hat(m, i)).collect::<Result<_, _>>()?,
            phi: (0..n).map(|i| phi_hat(m, i)).collect::<Result<_, _>>()?,
        })
    })?;
    let nodes = stats.into_iter().enumerate().map(|(id, node)| GraphNode { id, ..node }).collect();
    edges.sort();
    Ok(CrystalGraph { n, depth, nodes, edges, data })
}

/// Checks the crystal axioms on every node and edge. An empty list means pass.
pub fn check_axioms(g: &CrystalGraph) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.n;
    let cartan = match CartanData::new(n) {
        Ok(c) => c,
        Err(e) => return vec![e.to_string()],
    };
    for (k, node) in g.nodes.iter().enumerate() {
        if node.id != k {
            out.push(format!("node at position {k} has id {}", node.id));
        }
        if node.weight.len() != n || node.eps.len() != n || node.phi.len() != n {
            out.push(format!("node {k}: statistics have the wrong length"));
            return out;
        }
    }
    let mut outgoing: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut incoming: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in &g.edges {
        if e.from >= g.len() || e.to >= g.len() || e.i >= n {
            out.push(format!("edge {e:?} is out of range"));
            continue;
        }
        outgoing.entry((e.from, e.i)).or_default().push(e.to);
        incoming.entry((e.to, e.i)).or_default().push(e.from);
    }
    if !out.is_empty() {
        return out;
    }

    for node in &g.nodes {
        let b = node.id;
        let wt = WeightVector(node.weight.clone());
        for i in 0..n {
            // (i)
            let pair = cartan.pair(&wt, i);
            if node.phi[i] != node.eps[i] + pair {
                out.push(format!(
                    "node {b}, i={i}: phi = {} but eps + <wt, h_i> = {}",
                    node.phi[i],
                    node.eps[i] + pair
                ));
            }
            // (iv): f_i is a partial bijection
            let outs = outgoing.get(&(b, i)).map_or(0, Vec::len);
            let ins = incoming.get(&(b, i)).map_or(&[][..], Vec::as_slice);
            if outs > 1 {
                out.push(format!("node {b}, i={i}: {outs} outgoing edges"));
            }
            if ins.len() > 1 {
                out.push(format!("node {b}, i={i}: {} incoming edges", ins.len()));
            }
            if outs == 0 && node.word.len() < g.depth {
                out.push(format!("node {b}, i={i}: f_i missing below the explored depth"));
            }
            // eps is the length of the e_i-string
            let mut len = 0;
            let mut cur = b;
            while let Some(&[prev]) = incoming.get(&(cur, i)).map(Vec::as_slice) {
                len += 1;
                cur = prev;
            }
            if node.eps[i] != len {
                out.push(format!(
                    "node {b}, i={i}: eps = {} but the e_i-string has length {len}",
                    node.eps[i]
                ));
            }
        }
        if b != 0 && node.eps.iter().all(|&e| e == 0) {
            out.push(format!("node {b} is a second highest-weight node"));
        }
    }
    if let Some(root) = g.nodes.first() {
        if root.weight.iter().any(|&w| w != 0) || root.eps.iter().any(|&e| e != 0) {
            out.push("node 0 is not the zero datum".to_string());
        }
    }
    // (ii), (iii)
    for e in &g.edges {
        let (s, t) = (&g.nodes[e.from], &g.nodes[e.to]);
        for j in 0..n {
            let dw = if j == e.i { -1 } else { 0 };
            if t.weight[j] != s.weight[j] + dw {
                out.push(format!(
                    "edge {} -{}-> {}: weight does not drop by alpha_{}",
                    e.from, e.i, e.to, e.i
                ));
                break;
            }
        }
        if t.eps[e.i] != s.eps[e.i] + 1 {
            out.push(format!("edge {} -{}-> {}: eps does not rise by one", e.from, e.i, e.to));
        }
        if t.phi[e.i] != s.phi[e.i] - 1 {
            out.push(format!("edge {} -{}-> {}: phi does not drop by one", e.from, e.i, e.to));
        }
    }
    out
}

/// Number of nodes of weight `-beta`, for every `beta` that occurs.
pub fn weight_census(g: &CrystalGraph) -> BTreeMap<RootVector, u64> {
    let mut census = BTreeMap::new();
    for k in 0..g.len() {
        *census.entry(g.beta(k)).or_insert(0) += 1;
    }
    census
}

/// Positive roots of `A^(1)_{n-1}` whose height is at most `max_height`,
/// each repeated according to its multiplicity.
pub fn positive_roots(n: usize, max_height: usize) -> Vec<RootVector> {
    let mut roots = Vec::new();
    for len in 1..=max_height {
        if len % n == 0 {
            let root = vec![(len / n) as u64; n];
            roots.extend(std::iter::repeat_n(root, n - 1));
        } else {
            for start in 0..n {
                let mut root = vec![0u64; n];
                for k in 0..len {
                    root[(start + k) % n] += 1;
                }
                roots.push(root);
            }
        }
    }
    roots
}

/// The Kostant partition function: the number of ways to write `b` as an
/// unordered sum of positive roots counted with multiplicity.
pub fn kostant(cartan: CartanData, b: &[u64]) -> u64 {
    let n = cartan.rank();
    assert_eq!(b.len(), n, "root vector has the wrong length");
    let dims: Vec<usize> = b.iter().map(|&x| x as usize + 1).collect();
    let size: usize = dims.iter().product();
    let index = |v: &[u64]| v.iter().zip(&dims).rev().fold(0usize, |acc, (&x, &d)| acc * d + x as usize);
    let height: u64 = b.iter().sum();
    let mut ways = vec![0u64; size];
    ways[0] = 1;
    let mut cur = vec![0u64; n];
    for root in positive_roots(n, height as usize) {
        if root.iter().zip(b).any(|(r, x)| r > x) {
            continue;
        }
        let offset = index(&root);
        // vectors in increasing index order, so each root may be reused
        for flat in 0..size {
            let mut rest = flat;
            for (c, &d) in cur.iter_mut().zip(&dims) {
                *c = (rest % d) as u64;
                rest /= d;
            }
            if cur.iter().zip(&root).all(|(c, r)| c >= r) {
                ways[flat] += ways[flat - offset];
            }
        }
    }
    ways[size - 1]
}

/// All `beta` with nonnegative entries and height `h`.
pub fn root_vectors_of_height(n: usize, h: u64) -> Vec<RootVector> {
    fn go(n: usize, left: u64, prefix: &mut Vec<u64>, out: &mut Vec<RootVector>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            go(n, left - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, h, &mut Vec::new(), &mut out);
    out
}

/// One row of a census comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub beta: RootVector,
    pub nodes: u64,
    pub kostant: u64,
}

impl CensusRow {
    pub fn ok(&self) -> bool {
        self.nodes == self.kostant
    }
}

/// Census against Kostant for every `beta` of height at most `max_height`.
pub fn census_table(g: &CrystalGraph, max_height: u64) -> Result<Vec<CensusRow>, GraphError> {
    let cartan = CartanData::new(g.n)?;
    let census = weight_census(g);
    Ok((0..=max_height)
        .flat_map(|h| root_vectors_of_height(g.n, h))
        .map(|beta| CensusRow {
            nodes: census.get(&beta).copied().unwrap_or(0),
            kostant: kostant(cartan, &beta),
            beta,
        })
        .collect())
}

pub fn export(g: &CrystalGraph, format: Format) -> Result<String, GraphError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(g)?;
            s.push('\n');
            Ok(s)
        }
        Format::Dot => Ok(to_dot(g)),
    }
}

fn join(xs: &[impl ToString]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn to_dot(g: &CrystalGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph nss {{");
    let _ = writeln!(s, "  // n = {}, depth = {}", g.n, g.depth);
    for node in &g.nodes {
        let word = if node.word.is_empty() { "O".to_string() } else { join(&node.word) };
        let _ = writeln!(s, "  n{} [label=\"{}\\nwt=({})\"];", node.id, word, join(&node.weight));
    }
    for e in &g.edges {
        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.i);
    }
    s.push_str("}\n");
    s
}

pub fn import_json(text: &str) -> Result<CrystalGraph, GraphError> {
    let g: CrystalGraph = serde_json::from_str(text)?;
    CartanData::new(g.n)?;
    Ok(g)
}
