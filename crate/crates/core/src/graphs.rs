//! Digraphs of families (edges at full-column-rank blocks), their strong
//! components, the linked graph of a pair, and the dimension constraints the
//! components impose on reducing subspaces and on coupled Sylvester solutions.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::CoupledFamily;
use crate::linalg::{rank, scaled_ranks, TolerancePolicy};
use crate::matrix::Matrix;
use crate::reducibility::SubspaceFamily;
use crate::report::{one_based_pairs, one_based_parts, one_based_vec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyDigraph {
    pub vertices: usize,
    /// Sorted; self-loops allowed.
    #[serde(serialize_with = "one_based_pairs")]
    pub edges: Vec<(usize, usize)>,
}

impl FamilyDigraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        Self { vertices, edges: set.into_iter().collect() }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == i).map(|e| e.1)
    }

    /// One `i j` line per edge, 1-based.
    pub fn edge_list(&self) -> String {
        let mut s = String::new();
        for (i, j) in &self.edges {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in 0..self.vertices {
            let _ = writeln!(s, "  v{};", v + 1);
        }
        for (i, j) in &self.edges {
            let _ = writeln!(s, "  v{} -> v{};", i + 1, j + 1);
        }
        s.push_str("}\n");
        s
    }
}

/// Edge `(i, j)` iff block `(i, j)` has full column rank.
pub fn digraph<T: Scalar>(f: &CoupledFamily<T>, pol: &TolerancePolicy) -> FamilyDigraph {
    let edges = f.blocks().filter(|(_, j, b)| rank(b, pol) == f.dims()[*j]).map(|(i, j, _)| (i, j));
    FamilyDigraph::new(f.k(), edges.collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccPartition {
    /// Each part sorted; parts ordered by their smallest vertex.
    #[serde(serialize_with = "one_based_parts")]
    pub parts: Vec<Vec<usize>>,
    pub strongly_connected: bool,
}

impl SccPartition {
    pub fn part_of(&self, v: usize) -> usize {
        self.parts.iter().position(|p| p.contains(&v)).expect("vertex in partition")
    }
}

struct Tarjan<'a> {
    graph: &'a [Vec<usize>],
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.idx[v] = Some(self.index);
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.graph[v] {
            match self.idx[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(self.low[v]) == self.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// Tarjan's algorithm. Self-loops never change components.
pub fn strongly_connected_components(d: &FamilyDigraph) -> SccPartition {
    let n = d.vertices;
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in &d.edges {
        if i != j {
            adj[i].push(j);
        }
    }
    let mut t = Tarjan {
        graph: &adj,
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if t.idx[v].is_none() {
            t.visit(v);
        }
    }
    let mut parts = t.comps;
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);
    let strongly_connected = parts.len() <= 1;
    SccPartition { parts, strongly_connected }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkedGraph {
    pub vertices: usize,
    /// Undirected edges `(i, j)` with `i < j`.
    #[serde(serialize_with = "one_based_pairs")]
    pub edges: Vec<(usize, usize)>,
    #[serde(serialize_with = "one_based_parts")]
    pub components: Vec<Vec<usize>>,
    pub connected: bool,
}

impl LinkedGraph {
    pub fn edge_list(&self) -> String {
        let mut s = String::new();
        for (i, j) in &self.edges {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for v in 0..self.vertices {
            let _ = writeln!(s, "  v{};", v + 1);
        }
        for (i, j) in &self.edges {
            let _ = writeln!(s, "  v{} -- v{};", i + 1, j + 1);
        }
        s.push_str("}\n");
        s
    }
}

/// Edge `{i, j}` iff `i` and `j` are strongly connected in either digraph.
pub fn linked_graph(da: &FamilyDigraph, db: &FamilyDigraph) -> Result<LinkedGraph> {
    if da.vertices != db.vertices {
        return Err(Error::IndexCountMismatch(da.vertices, db.vertices));
    }
    let n = da.vertices;
    let sa = strongly_connected_components(da);
    let sb = strongly_connected_components(db);
    let mut edges = BTreeSet::new();
    for part in sa.parts.iter().chain(&sb.parts) {
        for (x, &i) in part.iter().enumerate() {
            for &j in &part[x + 1..] {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    // union-find over the edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for &(i, j) in &edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if root_of[r] == usize::MAX {
            root_of[r] = components.len();
            components.push(Vec::new());
        }
        components[root_of[r]].push(v);
    }
    let connected = components.len() <= 1;
    Ok(LinkedGraph { vertices: n, edges: edges.into_iter().collect(), components, connected })
}

/// The three graphs of a pair in one dot document.
pub fn pair_dot(da: &FamilyDigraph, db: &FamilyDigraph, g: &LinkedGraph) -> String {
    let mut s = String::from("digraph pair {\n  compound=true;\n");
    for (tag, label, d) in [("A", "D(A)", da), ("B", "D(B)", db)] {
        let _ = writeln!(s, "  subgraph cluster_{tag} {{\n    label=\"{label}\";");
        for v in 0..d.vertices {
            let _ = writeln!(s, "    {tag}{} [label=\"v{}\"];", v + 1, v + 1);
        }
        for (i, j) in &d.edges {
            let _ = writeln!(s, "    {tag}{} -> {tag}{};", i + 1, j + 1);
        }
        s.push_str("  }\n");
    }
    s.push_str("  subgraph cluster_G {\n    label=\"G(A,B)\";\n");
    for v in 0..g.vertices {
        let _ = writeln!(s, "    G{} [label=\"v{}\"];", v + 1, v + 1);
    }
    for (i, j) in &g.edges {
        let _ = writeln!(s, "    G{} -> G{} [dir=none];", i + 1, j + 1);
    }
    s.push_str("  }\n}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    DigraphA,
    DigraphB,
    Linked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentConstraint {
    pub source: GraphSource,
    #[serde(serialize_with = "one_based_vec")]
    pub members: Vec<usize>,
    /// `n`, `m`, `dim U`, `rank`, or `nullity`.
    pub quantity: String,
    pub values: Vec<usize>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub constraints: Vec<ComponentConstraint>,
    pub violations: usize,
}

impl DimensionReport {
    fn push(&mut self, source: GraphSource, members: &[usize], quantity: &str, values: Vec<usize>) {
        let consistent = values.windows(2).all(|w| w[0] == w[1]);
        if !consistent {
            self.violations += 1;
        }
        self.constraints.push(ComponentConstraint {
            source,
            members: members.to_vec(),
            quantity: quantity.into(),
            values,
            consistent,
        });
    }

    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Within every strong component of `D(F)`: equal `n_i` and equal `dim U_i`.
pub fn subspace_dimension_report<T: Scalar>(
    f: &CoupledFamily<T>,
    u: &SubspaceFamily<T>,
    pol: &TolerancePolicy,
) -> Result<DimensionReport> {
    if u.k() != f.k() {
        return Err(Error::IndexCountMismatch(f.k(), u.k()));
    }
    let scc = strongly_connected_components(&digraph(f, pol));
    let d = u.dims();
    let mut report = DimensionReport { constraints: Vec::new(), violations: 0 };
    for part in scc.parts.iter().filter(|p| p.len() > 1) {
        report.push(GraphSource::DigraphA, part, "n", part.iter().map(|&i| f.dims()[i]).collect());
        report.push(GraphSource::DigraphA, part, "dim U", part.iter().map(|&i| d[i]).collect());
    }
    Ok(report)
}

/// Rank and nullity constraints on a solution `X` of `A_ij X_j = X_i B_ij`.
pub fn solution_rank_report<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    x: &[Matrix<T>],
    pol: &TolerancePolicy,
) -> Result<DimensionReport> {
    if a.k() != b.k() || x.len() != a.k() {
        return Err(Error::IndexCountMismatch(a.k(), b.k().min(x.len())));
    }
    let da = digraph(a, pol);
    let db = digraph(b, pol);
    let sa = strongly_connected_components(&da);
    let sb = strongly_connected_components(&db);
    let g = linked_graph(&da, &db)?;
    let ranks = scaled_ranks(x, pol);
    let nullity: Vec<usize> = x.iter().zip(&ranks).map(|(xi, r)| xi.cols() - r).collect();

    let mut report = DimensionReport { constraints: Vec::new(), violations: 0 };
    for part in sa.parts.iter().filter(|p| p.len() > 1) {
        report.push(GraphSource::DigraphA, part, "n", part.iter().map(|&i| a.dims()[i]).collect());
        report.push(GraphSource::DigraphA, part, "rank", part.iter().map(|&i| ranks[i]).collect());
    }
    for part in sb.parts.iter().filter(|p| p.len() > 1) {
        report.push(GraphSource::DigraphB, part, "m", part.iter().map(|&i| b.dims()[i]).collect());
        report.push(GraphSource::DigraphB, part, "nullity", part.iter().map(|&i| nullity[i]).collect());
        report.push(GraphSource::DigraphB, part, "rank", part.iter().map(|&i| ranks[i]).collect());
    }
    for comp in g.components.iter().filter(|c| c.len() > 1) {
        report.push(GraphSource::Linked, comp, "rank", comp.iter().map(|&i| ranks[i]).collect());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_cycle_is_one_component() {
        let k = 5;
        let d = FamilyDigraph::new(k, (0..k).map(|i| (i, (i + 1) % k)));
        let s = strongly_connected_components(&d);
        assert_eq!(s.parts, vec![vec![0, 1, 2, 3, 4]]);
        assert!(s.strongly_connected);
    }

    #[test]
    fn edgeless_graph_has_singletons() {
        let d = FamilyDigraph::new(3, []);
        let s = strongly_connected_components(&d);
        assert_eq!(s.parts, vec![vec![0], vec![1], vec![2]]);
        assert!(!s.strongly_connected);
        let g = linked_graph(&d, &d).unwrap();
        assert!(g.edges.is_empty());
        assert!(!g.connected);
    }

    #[test]
    fn self_loops_are_ignored() {
        let d = FamilyDigraph::new(2, [(0, 0), (1, 1)]);
        assert_eq!(strongly_connected_components(&d).parts.len(), 2);
    }

    #[test]
    fn strongly_connected_digraph_links_everything() {
        let d = FamilyDigraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let e = FamilyDigraph::new(4, []);
        let g = linked_graph(&d, &e).unwrap();
        assert_eq!(g.edges.len(), 6);
        assert!(g.connected);
    }

    #[test]
    fn vertex_count_mismatch() {
        assert!(linked_graph(&FamilyDigraph::new(2, []), &FamilyDigraph::new(3, [])).is_err());
    }

    #[test]
    fn dot_output_lists_edges() {
        let d = FamilyDigraph::new(3, [(0, 1), (1, 0)]);
        let dot = d.to_dot("D(A)");
        assert!(dot.contains("v1 -> v2;"));
        assert!(dot.contains("v2 -> v1;"));
        assert_eq!(d.edge_list(), "1 2\n2 1\n");
    }
}
