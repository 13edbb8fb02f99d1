//! Dart-based multigraphs.
//!
//! A graph is a quadruple (V, D, beg, inv) where `inv` is an involution on
//! darts. A dart fixed by `inv` is a semi-edge; a non-fixed dart whose two
//! ends coincide is a loop dart. This representation admits loops, semi-edges
//! and parallel edges, which is what quotients of simple graphs produce.

use crate::error::{CcvError, Result};

pub type Vertex = u32;
pub type Dart = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    SemiEdge,
    Loop,
    Link,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DartGraph {
    beg: Vec<Vertex>,
    inv: Vec<Dart>,
    nv: u32,
}

impl DartGraph {
    pub fn from_parts(nv: u32, beg: Vec<Vertex>, inv: Vec<Dart>) -> Result<Self> {
        if beg.len() != inv.len() {
            return Err(CcvError::Parse { line: 0, msg: "beg/inv length mismatch".into() });
        }
        let nd = beg.len() as u32;
        for (x, &v) in beg.iter().enumerate() {
            if v >= nv {
                return Err(CcvError::UnknownVertex(v));
            }
            let y = inv[x];
            if y >= nd {
                return Err(CcvError::UnknownDart(y));
            }
            if inv[y as usize] != x as u32 {
                return Err(CcvError::BadInvolution(x as u32));
            }
        }
        Ok(DartGraph { beg, inv, nv })
    }

    pub fn n_vertices(&self) -> u32 {
        self.nv
    }

    pub fn n_darts(&self) -> u32 {
        self.beg.len() as u32
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.nv
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        0..self.n_darts()
    }

    pub fn beg(&self, x: Dart) -> Vertex {
        self.beg[x as usize]
    }

    pub fn inv(&self, x: Dart) -> Dart {
        self.inv[x as usize]
    }

    /// The end of a dart: beg(inv(x)).
    pub fn term(&self, x: Dart) -> Result<Vertex> {
        if x >= self.n_darts() {
            return Err(CcvError::UnknownDart(x));
        }
        Ok(self.beg[self.inv[x as usize] as usize])
    }

    /// term without the id check, for internal hot paths.
    pub(crate) fn term_u(&self, x: Dart) -> Vertex {
        self.beg[self.inv[x as usize] as usize]
    }

    pub fn classify_edge(&self, x: Dart) -> Result<EdgeKind> {
        if x >= self.n_darts() {
            return Err(CcvError::UnknownDart(x));
        }
        let y = self.inv[x as usize];
        if y == x {
            Ok(EdgeKind::SemiEdge)
        } else if self.beg[x as usize] == self.beg[y as usize] {
            Ok(EdgeKind::Loop)
        } else {
            Ok(EdgeKind::Link)
        }
    }

    pub fn is_semi_edge(&self, x: Dart) -> bool {
        self.inv[x as usize] == x
    }

    pub fn is_loop_dart(&self, x: Dart) -> bool {
        let y = self.inv[x as usize];
        y != x && self.beg[x as usize] == self.beg[y as usize]
    }

    /// Darts emanating from v, ascending.
    pub fn darts_at(&self, v: Vertex) -> Vec<Dart> {
        self.darts().filter(|&x| self.beg[x as usize] == v).collect()
    }

    pub fn valence(&self, v: Vertex) -> usize {
        self.beg.iter().filter(|&&u| u == v).count()
    }

    /// One representative dart per edge: the dart x with x <= inv(x).
    pub fn edge_reps(&self) -> Vec<Dart> {
        self.darts().filter(|&x| x <= self.inv[x as usize]).collect()
    }

    /// Adjacency as (neighbour, dart) lists, darts ascending.
    pub fn adjacency(&self) -> Vec<Vec<(Vertex, Dart)>> {
        let mut adj = vec![Vec::new(); self.nv as usize];
        for x in self.darts() {
            adj[self.beg[x as usize] as usize].push((self.term_u(x), x));
        }
        adj
    }

    /// No semi-edges, no loops, no two distinct parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for x in self.edge_reps() {
            match self.classify_edge(x).unwrap() {
                EdgeKind::SemiEdge | EdgeKind::Loop => return false,
                EdgeKind::Link => {
                    let u = self.beg(x);
                    let v = self.term_u(x);
                    let key = (u.min(v), u.max(v));
                    if !seen.insert(key) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.nv == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nv as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.nv
    }

    /// Number of connected components and the component id of each vertex.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let adj = self.adjacency();
        let mut comp = vec![u32::MAX; self.nv as usize];
        let mut nc = 0u32;
        for s in 0..self.nv {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = nc;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = nc;
                        stack.push(w);
                    }
                }
            }
            nc += 1;
        }
        (nc as usize, comp)
    }

    /// Simple-graph neighbour sets (ignores semi-edges; loops give self-adjacency).
    pub fn neighbour_sets(&self) -> Vec<Vec<Vertex>> {
        let mut nbrs = vec![Vec::new(); self.nv as usize];
        for x in self.darts() {
            if !self.is_semi_edge(x) {
                nbrs[self.beg(x) as usize].push(self.term_u(x));
            }
        }
        for l in &mut nbrs {
            l.sort_unstable();
            l.dedup();
        }
        nbrs
    }
}

/// Mutable builder; darts are numbered in insertion order.
#[derive(Clone, Debug, Default)]
pub struct DartGraphBuilder {
    beg: Vec<Vertex>,
    inv: Vec<Dart>,
    nv: u32,
}

impl DartGraphBuilder {
    pub fn new(nv: u32) -> Self {
        DartGraphBuilder { beg: Vec::new(), inv: Vec::new(), nv }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.nv += 1;
        self.nv - 1
    }

    /// Ordinary edge u-v; returns (dart at u, dart at v).
    pub fn add_link(&mut self, u: Vertex, v: Vertex) -> (Dart, Dart) {
        let x = self.beg.len() as u32;
        self.beg.push(u);
        self.beg.push(v);
        self.inv.push(x + 1);
        self.inv.push(x);
        (x, x + 1)
    }

    pub fn add_loop(&mut self, u: Vertex) -> (Dart, Dart) {
        self.add_link(u, u)
    }

    pub fn add_semi_edge(&mut self, u: Vertex) -> Dart {
        let x = self.beg.len() as u32;
        self.beg.push(u);
        self.inv.push(x);
        x
    }

    pub fn build(self) -> DartGraph {
        DartGraph::from_parts(self.nv, self.beg, self.inv).expect("builder invariant")
    }
}

/// Build a simple graph from an edge list.
pub fn simple_graph(nv: u32, edges: &[(u32, u32)]) -> DartGraph {
    let mut b = DartGraphBuilder::new(nv);
    for &(u, v) in edges {
        assert!(u != v, "simple graph cannot have loops");
        b.add_link(u, v);
    }
    b.build()
}

/// A walk: consecutive darts chain term -> beg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk(pub Vec<Dart>);

impl Walk {
    pub fn validate(&self, g: &DartGraph) -> Result<()> {
        for (i, &x) in self.0.iter().enumerate() {
            if x >= g.n_darts() {
                return Err(CcvError::UnknownDart(x));
            }
            if i + 1 < self.0.len() {
                let y = self.0[i + 1];
                if y >= g.n_darts() {
                    return Err(CcvError::UnknownDart(y));
                }
                if g.term_u(x) != g.beg(y) {
                    return Err(CcvError::NotAWalk(i));
                }
            }
        }
        Ok(())
    }

    pub fn is_closed(&self, g: &DartGraph) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => g.beg(a) == g.term_u(b),
            _ => true,
        }
    }
}

/// Disjoint vertex blocks covering the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    pub blocks: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug)]
pub struct SpanningTree {
    /// Representative darts of the tree edges.
    pub tree_darts: Vec<Dart>,
    /// Per vertex: the dart pointing from its parent to it (root has none).
    pub parent_dart: Vec<Option<Dart>>,
    /// Vertices in root-first traversal order.
    pub order: Vec<Vertex>,
    pub root: Vertex,
}

impl SpanningTree {
    /// Membership test on darts: true iff the dart or its inverse is a tree edge.
    pub fn contains_dart(&self, g: &DartGraph, x: Dart) -> bool {
        let r = x.min(g.inv(x));
        self.tree_darts.binary_search(&r).is_ok()
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut c = x;
        while self.0[c as usize] != r {
            let n = self.0[c as usize];
            self.0[c as usize] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.0[ra.max(rb) as usize] = ra.min(rb);
            true
        }
    }
}

/// Deterministic spanning tree containing every required edge.
///
/// Required edges are taken first (error if they contain a cycle or a
/// non-link), then remaining links are scanned in ascending dart order.
pub fn spanning_tree(g: &DartGraph, required_edges: &[Dart]) -> Result<SpanningTree> {
    if !g.is_connected() {
        return Err(CcvError::Disconnected);
    }
    let mut uf = UnionFind::new(g.n_vertices() as usize);
    let mut tree: Vec<Dart> = Vec::new();
    let mut req: Vec<Dart> = required_edges.iter().map(|&x| x.min(g.inv(x))).collect();
    req.sort_unstable();
    req.dedup();
    for &x in &req {
        if x >= g.n_darts() {
            return Err(CcvError::UnknownDart(x));
        }
        if g.classify_edge(x)? != EdgeKind::Link {
            return Err(CcvError::RequiredEdgeNotLink(x));
        }
        if !uf.union(g.beg(x), g.term_u(x)) {
            return Err(CcvError::RequiredEdgesCyclic);
        }
        tree.push(x);
    }
    for x in g.edge_reps() {
        if g.classify_edge(x)? == EdgeKind::Link && uf.union(g.beg(x), g.term_u(x)) {
            tree.push(x);
        }
    }
    if tree.len() + 1 != g.n_vertices() as usize {
        return Err(CcvError::Disconnected);
    }
    tree.sort_unstable();

    // orient from root 0
    let mut adj = vec![Vec::new(); g.n_vertices() as usize];
    for &x in &tree {
        let (u, v) = (g.beg(x), g.term_u(x));
        adj[u as usize].push((v, x));
        adj[v as usize].push((u, g.inv(x)));
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let root = 0u32;
    let mut parent_dart = vec![None; g.n_vertices() as usize];
    let mut order = vec![root];
    let mut seen = vec![false; g.n_vertices() as usize];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(w, x) in &adj[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent_dart[w as usize] = Some(x);
                order.push(w);
            }
        }
    }
    Ok(SpanningTree { tree_darts: tree, parent_dart, order, root })
}

/// Orbits of the group generated by `gens` on vertices, blocks sorted by
/// minimum element.
pub fn vertex_orbits(g: &DartGraph, gens: &[crate::iso::GraphMap]) -> Result<VertexPartition> {
    for m in gens {
        if !m.is_automorphism(g) {
            return Err(CcvError::NotAnAutomorphism);
        }
    }
    let mut uf = UnionFind::new(g.n_vertices() as usize);
    for m in gens {
        for v in g.vertices() {
            uf.union(v, m.vertex[v as usize]);
        }
    }
    let mut blocks: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for v in g.vertices() {
        blocks.entry(uf.find(v)).or_default().push(v);
    }
    Ok(VertexPartition { blocks: blocks.into_values().collect() })
}

/// Quotient graph by the group generated by `gens`, together with the
/// projection (an epimorphism). Orbit ids are assigned by minimum member.
#[derive(Clone, Debug)]
pub struct Projection {
    pub vertex_map: Vec<Vertex>,
    pub dart_map: Vec<Dart>,
}

pub fn quotient(g: &DartGraph, gens: &[crate::iso::GraphMap]) -> Result<(DartGraph, Projection)> {
    for m in gens {
        if !m.is_automorphism(g) {
            return Err(CcvError::NotAnAutomorphism);
        }
    }
    let nv = g.n_vertices() as usize;
    let nd = g.n_darts() as usize;
    let mut vuf = UnionFind::new(nv);
    let mut duf = UnionFind::new(nd);
    for m in gens {
        for v in 0..nv as u32 {
            vuf.union(v, m.vertex[v as usize]);
        }
        for x in 0..nd as u32 {
            duf.union(x, m.dart[x as usize]);
        }
    }
    let mut vids: Vec<u32> = (0..nv as u32).map(|v| vuf.find(v)).collect();
    let mut dids: Vec<u32> = (0..nd as u32).map(|x| duf.find(x)).collect();
    let mut vreps: Vec<u32> = vids.clone();
    vreps.sort_unstable();
    vreps.dedup();
    let mut dreps: Vec<u32> = dids.clone();
    dreps.sort_unstable();
    dreps.dedup();
    let vindex = |r: u32| vreps.binary_search(&r).unwrap() as u32;
    let dindex = |r: u32| dreps.binary_search(&r).unwrap() as u32;
    for v in &mut vids {
        *v = vindex(*v);
    }
    for d in &mut dids {
        *d = dindex(*d);
    }
    let mut beg = vec![0u32; dreps.len()];
    let mut inv = vec![0u32; dreps.len()];
    for (i, &r) in dreps.iter().enumerate() {
        beg[i] = vids[g.beg(r) as usize];
        inv[i] = dids[g.inv(r) as usize];
    }
    let q = DartGraph::from_parts(vreps.len() as u32, beg, inv)?;
    Ok((q, Projection { vertex_map: vids, dart_map: dids }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn term_of_semi_edge_and_loop() {
        let mut b = DartGraphBuilder::new(1);
        let s = b.add_semi_edge(0);
        let (l, _) = b.add_loop(0);
        let g = b.build();
        assert_eq!(g.term(s).unwrap(), 0);
        assert_eq!(g.term(l).unwrap(), 0);
        assert_eq!(g.classify_edge(s).unwrap(), EdgeKind::SemiEdge);
        assert_eq!(g.classify_edge(l).unwrap(), EdgeKind::Loop);
        assert!(g.term(9).is_err());
    }

    #[test]
    fn classify_link() {
        let g = simple_graph(2, &[(0, 1)]);
        assert_eq!(g.classify_edge(0).unwrap(), EdgeKind::Link);
    }

    #[test]
    fn simplicity() {
        assert!(named::complete_graph(4).is_simple());
        let mut b = DartGraphBuilder::new(1);
        b.add_semi_edge(0);
        assert!(!b.build().is_simple());
        let mut b = DartGraphBuilder::new(2);
        b.add_link(0, 1);
        b.add_link(0, 1);
        assert!(!b.build().is_simple());
    }

    #[test]
    fn spanning_tree_of_tree_is_everything() {
        let g = simple_graph(4, &[(0, 1), (1, 2), (1, 3)]);
        let all: Vec<Dart> = g.edge_reps();
        let t = spanning_tree(&g, &all).unwrap();
        assert_eq!(t.tree_darts, all);
    }

    #[test]
    fn spanning_tree_skips_loops() {
        let mut b = DartGraphBuilder::new(3);
        b.add_loop(0);
        b.add_link(0, 1);
        b.add_link(1, 2);
        let g = b.build();
        let t = spanning_tree(&g, &[]).unwrap();
        assert_eq!(t.tree_darts.len(), 2);
        assert!(t.tree_darts.iter().all(|&x| g.classify_edge(x).unwrap() == EdgeKind::Link));
    }

    #[test]
    fn spanning_tree_rejects_cyclic_requirement() {
        let g = simple_graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let all: Vec<Dart> = g.edge_reps();
        assert!(matches!(spanning_tree(&g, &all), Err(CcvError::RequiredEdgesCyclic)));
    }

    #[test]
    fn walk_validation() {
        let g = simple_graph(3, &[(0, 1), (1, 2)]);
        // dart 0: 0->1, dart 2: 1->2
        Walk(vec![0, 2]).validate(&g).unwrap();
        assert!(Walk(vec![0, 3]).validate(&g).is_err());
    }

    #[test]
    fn quotient_by_trivial_group() {
        let g = named::petersen();
        let (q, _) = quotient(&g, &[]).unwrap();
        assert_eq!(q.n_vertices(), g.n_vertices());
        assert_eq!(q.n_darts(), g.n_darts());
    }
}
