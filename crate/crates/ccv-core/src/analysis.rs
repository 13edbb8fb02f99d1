//! Graph invariants for the transitivity analysis: girth, short-cycle
//! signatures, vertex/arc transitivity, and the structure of subgraph
//! preimages under the covering projection.

use crate::dartgraph::{DartGraph, Dart, EdgeKind, Vertex};
use crate::error::{CcvError, Result};
use crate::iso::{automorphism_group_bounded, GraphMap};
use crate::voltage::{expand, CyclicVoltageGraph, LabelledGraph};
use std::collections::BTreeSet;

pub const DEFAULT_CYCLE_BOUND: u32 = 12;

/// Length of a shortest cycle. Semi-edge and loop darts count as cycles of
/// length one, a parallel pair as a cycle of length two.
pub fn girth(g: &DartGraph) -> Result<u32> {
    let mut best = u32::MAX;
    let mut pair_seen = std::collections::HashSet::new();
    for x in g.edge_reps() {
        match g.classify_edge(x)? {
            EdgeKind::SemiEdge | EdgeKind::Loop => best = best.min(1),
            EdgeKind::Link => {
                let (u, v) = (g.beg(x), g.term_u(x));
                if !pair_seen.insert((u.min(v), u.max(v))) {
                    best = best.min(2);
                }
            }
        }
    }
    if best != u32::MAX {
        return Ok(best);
    }
    // simple graph: BFS from every vertex; the minimum over roots on a
    // shortest cycle is exact
    let nbrs = g.neighbour_sets();
    let n = g.n_vertices() as usize;
    for s in 0..n as u32 {
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        dist[s as usize] = 0;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if 2 * dist[v as usize] >= best {
                break;
            }
            for &w in &nbrs[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    parent[w as usize] = v;
                    q.push_back(w);
                } else if parent[v as usize] != w && w != v {
                    best = best.min(dist[v as usize] + dist[w as usize] + 1);
                }
            }
        }
    }
    if best == u32::MAX {
        Err(CcvError::Forest)
    } else {
        Ok(best)
    }
}

/// Exact number of c-cycles through the edge of dart e (cycles as undirected
/// vertex sequences).
pub fn edge_cycle_count(g: &DartGraph, e: Dart, c: u32, bound: u32) -> Result<u64> {
    if !g.is_simple() {
        return Err(CcvError::NotSimple);
    }
    if c > bound {
        return Err(CcvError::BoundExceeded { order: c as usize, bound: bound as usize });
    }
    if c < 3 {
        return Ok(0);
    }
    let u = g.beg(e);
    let v = g.term(e)?;
    let nbrs = g.neighbour_sets();
    // distances to u for pruning
    let n = g.n_vertices() as usize;
    let mut dist = vec![u32::MAX; n];
    dist[u as usize] = 0;
    let mut q = std::collections::VecDeque::from([u]);
    while let Some(x) = q.pop_front() {
        for &w in &nbrs[x as usize] {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[x as usize] + 1;
                q.push_back(w);
            }
        }
    }
    // a c-cycle through e is exactly a simple v-u path of length c-1; with
    // c >= 3 the direct step along e itself (length 1) never counts
    let mut visited = vec![false; n];
    visited[v as usize] = true;
    fn dfs(
        nbrs: &[Vec<Vertex>],
        dist: &[u32],
        visited: &mut Vec<bool>,
        at: Vertex,
        u: Vertex,
        left: u32,
        count: &mut u64,
    ) {
        for &w in &nbrs[at as usize] {
            if w == u {
                if left == 1 {
                    *count += 1;
                }
                continue;
            }
            if visited[w as usize] || dist[w as usize] > left - 1 {
                continue;
            }
            visited[w as usize] = true;
            dfs(nbrs, dist, visited, w, u, left - 1, count);
            visited[w as usize] = false;
        }
    }
    let mut count = 0;
    dfs(&nbrs, &dist, &mut visited, v, u, c - 1, &mut count);
    Ok(count)
}

/// Sorted triple of c-cycle counts over the three edges at a cubic vertex.
pub fn c_signature(g: &DartGraph, v: Vertex, c: u32, bound: u32) -> Result<[u64; 3]> {
    if !g.is_simple() {
        return Err(CcvError::NotSimple);
    }
    let darts = g.darts_at(v);
    if darts.len() != 3 {
        return Err(CcvError::NotCubic(v));
    }
    let mut sig = [0u64; 3];
    for (i, &x) in darts.iter().enumerate() {
        sig[i] = edge_cycle_count(g, x, c, bound)?;
    }
    sig.sort_unstable();
    Ok(sig)
}

/// True iff every vertex has the same c-signature.
pub fn is_c_cycle_regular(g: &DartGraph, c: u32, bound: u32) -> Result<bool> {
    let mut first: Option<[u64; 3]> = None;
    for v in g.vertices() {
        let s = c_signature(g, v, c, bound)?;
        match &first {
            None => first = Some(s),
            Some(f) => {
                if *f != s {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn vertex_orbit_count(g: &DartGraph, auts: &[GraphMap]) -> usize {
    crate::dartgraph::vertex_orbits(g, auts).map(|p| p.blocks.len()).unwrap_or(usize::MAX)
}

pub fn is_vertex_transitive(g: &DartGraph) -> Result<bool> {
    let auts = automorphism_group_bounded(g, 64)?;
    Ok(vertex_orbit_count(g, &auts) == 1)
}

/// Single automorphism orbit on darts.
pub fn is_arc_transitive(g: &DartGraph) -> Result<bool> {
    let auts = automorphism_group_bounded(g, 64)?;
    if g.n_darts() == 0 {
        return Ok(true);
    }
    let mut reached: BTreeSet<Dart> = BTreeSet::new();
    let mut stack = vec![0u32];
    reached.insert(0);
    while let Some(x) = stack.pop() {
        for a in &auts {
            let y = a.dart[x as usize];
            if reached.insert(y) {
                stack.push(y);
            }
        }
    }
    Ok(reached.len() == g.n_darts() as usize)
}

/// Full signature report of a simple cubic graph.
#[derive(Clone, Debug)]
pub struct SignatureReport {
    pub girth: u32,
    /// per-vertex girth-cycle signature, sorted ascending
    pub signatures: Vec<[u64; 3]>,
    pub cycle_regular: bool,
    pub vertex_transitive: bool,
    pub arc_transitive: bool,
    pub aut_order: u64,
    /// c-cycle-regularity flags for c = 3..=max_c
    pub regular_up_to: Vec<(u32, bool)>,
}

pub fn signature_report(g: &DartGraph, max_c: u32) -> Result<SignatureReport> {
    if !g.is_simple() {
        return Err(CcvError::NotSimple);
    }
    for v in g.vertices() {
        if g.valence(v) != 3 {
            return Err(CcvError::NotCubic(v));
        }
    }
    let girth = girth(g)?;
    let bound = max_c.max(girth).max(DEFAULT_CYCLE_BOUND);
    let signatures: Vec<[u64; 3]> =
        g.vertices().map(|v| c_signature(g, v, girth, bound)).collect::<Result<_>>()?;
    let cycle_regular = signatures.windows(2).all(|w| w[0] == w[1]);
    let auts = automorphism_group_bounded(g, 64)?;
    let vertex_transitive = vertex_orbit_count(g, &auts) == 1;
    let arc_transitive = is_arc_transitive(g)?;
    let mut regular_up_to = Vec::new();
    for c in 3..=max_c {
        regular_up_to.push((c, is_c_cycle_regular(g, c, bound)?));
    }
    Ok(SignatureReport {
        girth,
        signatures,
        cycle_regular,
        vertex_transitive,
        arc_transitive,
        aut_order: auts.len() as u64,
        regular_up_to,
    })
}

// ---------------------------------------------------------------------------
// the four labelled subgraph shapes and their cover preimages
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SShape {
    /// [1,2]-edge with a semi-edge at the double-index end: 3-cycles
    S1,
    /// [1,1]-edge with semi-edges at both ends: 4-cycles
    S2,
    /// [3,1]- and [1,3]-edges sharing their label-1 vertex: K_{3,2}
    S3,
    /// a [2,3]-edge: K_{3,2}
    S4,
}

#[derive(Clone, Debug)]
pub struct SInstance {
    pub kind: SShape,
    /// all darts of the subgraph (closed under inversion)
    pub darts: Vec<Dart>,
}

/// Locate every S1..S4 instance in a labelled graph.
pub fn find_s_shapes(lg: &LabelledGraph) -> Vec<SInstance> {
    let g = &lg.graph;
    let mut out = Vec::new();
    let semi_at = |v: Vertex| -> Option<Dart> {
        g.darts_at(v).into_iter().find(|&x| g.is_semi_edge(x))
    };
    for x in g.edge_reps() {
        if g.classify_edge(x).unwrap() != EdgeKind::Link {
            continue;
        }
        let y = g.inv(x);
        let (a, b) = (lg.lambda(x), lg.lambda(y));
        let (u, v) = (g.beg(x), g.beg(y));
        // S1: label-1 dart at u, label-2 at v; semi-edge at u
        if a == 1 && b == 2 {
            if let Some(s) = semi_at(u) {
                out.push(SInstance { kind: SShape::S1, darts: vec![x, y, s] });
            }
        }
        if a == 2 && b == 1 {
            if let Some(s) = semi_at(v) {
                out.push(SInstance { kind: SShape::S1, darts: vec![x, y, s] });
            }
        }
        // S2: [1,1]-edge with semi-edges at both ends
        if a == 1 && b == 1 {
            if let (Some(s1), Some(s2)) = (semi_at(u), semi_at(v)) {
                out.push(SInstance { kind: SShape::S2, darts: vec![x, y, s1, s2] });
            }
        }
        // S4: [2,3]-edge
        if (a == 2 && b == 3) || (a == 3 && b == 2) {
            out.push(SInstance { kind: SShape::S4, darts: vec![x, y] });
        }
    }
    // S3: two links meeting at a vertex with label 1 on the middle darts and
    // label 3 on both far darts
    for m in g.vertices() {
        let ds = g.darts_at(m);
        for (i, &p) in ds.iter().enumerate() {
            for &q in &ds[i + 1..] {
                if g.classify_edge(p).unwrap() == EdgeKind::Link
                    && g.classify_edge(q).unwrap() == EdgeKind::Link
                    && lg.lambda(p) == 1
                    && lg.lambda(q) == 1
                    && lg.lambda(g.inv(p)) == 3
                    && lg.lambda(g.inv(q)) == 3
                {
                    out.push(SInstance { kind: SShape::S3, darts: vec![p, g.inv(p), q, g.inv(q)] });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreimageClass {
    ThreeCycles,
    FourCycles,
    K32,
}

#[derive(Clone, Debug)]
pub struct PreimageReport {
    pub kind: SShape,
    pub components: usize,
    pub class: PreimageClass,
}

/// Classify the connected components of the preimage of an S-shaped labelled
/// subgraph under the covering projection.
pub fn preimage_structure(cvg: &CyclicVoltageGraph, inst: &SInstance) -> Result<PreimageReport> {
    let cover = expand(cvg);
    let base: BTreeSet<Dart> = inst.darts.iter().copied().collect();
    for &x in &base {
        if !base.contains(&cvg.graph().inv(x)) {
            return Err(CcvError::NoSShape);
        }
    }
    // sub-multigraph on the preimage darts
    let mut verts: BTreeSet<Vertex> = BTreeSet::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for d in cover.graph.darts() {
        if base.contains(&cover.dart_base[d as usize]) {
            let (a, b) = (cover.graph.beg(d), cover.graph.term(d)?);
            verts.insert(a);
            verts.insert(b);
            if d <= cover.graph.inv(d) {
                edges.push((a, b));
            }
        }
    }
    let vlist: Vec<Vertex> = verts.iter().copied().collect();
    let vid = |v: Vertex| vlist.binary_search(&v).unwrap();
    let mut adj = vec![Vec::new(); vlist.len()];
    for &(a, b) in &edges {
        adj[vid(a)].push(vid(b));
        adj[vid(b)].push(vid(a));
    }
    // components and their shape
    let mut comp = vec![usize::MAX; vlist.len()];
    let mut nc = 0;
    for s in 0..vlist.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = nc;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = nc;
                    stack.push(w);
                }
            }
        }
        nc += 1;
    }
    let mut class: Option<PreimageClass> = None;
    for c in 0..nc {
        let members: Vec<usize> = (0..vlist.len()).filter(|&v| comp[v] == c).collect();
        let mut degs: Vec<usize> = members.iter().map(|&v| adj[v].len()).collect();
        degs.sort_unstable();
        let ne: usize = degs.iter().sum::<usize>() / 2;
        let k = match (members.len(), ne, degs.as_slice()) {
            (3, 3, [2, 2, 2]) => PreimageClass::ThreeCycles,
            (4, 4, [2, 2, 2, 2]) => PreimageClass::FourCycles,
            (5, 6, [2, 2, 2, 3, 3]) => PreimageClass::K32,
            _ => return Err(CcvError::NoSShape),
        };
        match &class {
            None => class = Some(k),
            Some(prev) => {
                if *prev != k {
                    return Err(CcvError::NoSShape);
                }
            }
        }
    }
    let class = class.ok_or(CcvError::NoSShape)?;
    let expected = match inst.kind {
        SShape::S1 => PreimageClass::ThreeCycles,
        SShape::S2 => PreimageClass::FourCycles,
        SShape::S3 | SShape::S4 => PreimageClass::K32,
    };
    if class != expected {
        return Err(CcvError::NoSShape);
    }
    Ok(PreimageReport { kind: inst.kind, components: nc, class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilyParams};
    use crate::named;

    #[test]
    fn girth_values() {
        assert_eq!(girth(&named::complete_graph(4)).unwrap(), 3);
        assert_eq!(girth(&named::petersen()).unwrap(), 5);
        assert_eq!(girth(&named::heawood()).unwrap(), 6);
        assert_eq!(girth(&named::tutte_coxeter()).unwrap(), 8);
        assert!(girth(&crate::dartgraph::simple_graph(3, &[(0, 1), (1, 2)])).is_err());
    }

    #[test]
    fn k4_triangle_counts() {
        let g = named::complete_graph(4);
        for x in g.edge_reps() {
            assert_eq!(edge_cycle_count(&g, x, 3, 12).unwrap(), 2);
        }
        for v in g.vertices() {
            assert_eq!(c_signature(&g, v, 3, 12).unwrap(), [2, 2, 2]);
        }
    }

    #[test]
    fn heawood_hexagon_counts() {
        let g = named::heawood();
        for x in g.edge_reps() {
            assert_eq!(edge_cycle_count(&g, x, 6, 12).unwrap(), 8);
        }
    }

    #[test]
    fn zero_count_off_cycle() {
        // path extended to a triangle with a pendant: pendant edge on no cycle
        let g = crate::dartgraph::simple_graph(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let pendant = g.edge_reps().into_iter().find(|&x| g.beg(x) == 2 && g.term(x).unwrap() == 3).unwrap();
        assert_eq!(edge_cycle_count(&g, pendant, 3, 12).unwrap(), 0);
    }

    #[test]
    fn transitivity_flags() {
        assert!(is_vertex_transitive(&named::complete_bipartite(3, 3)).unwrap());
        assert!(is_arc_transitive(&named::petersen()).unwrap());
        assert!(!is_arc_transitive(&named::prism(3).unwrap()).unwrap());
    }

    #[test]
    fn petersen_signature() {
        let g = named::petersen();
        let rep = signature_report(&g, 6).unwrap();
        assert_eq!(rep.girth, 5);
        assert!(rep.cycle_regular);
        assert!(rep.vertex_transitive);
        assert_eq!(rep.aut_order, 120);
    }

    #[test]
    fn s_shapes_in_templates() {
        // family 10's quotient carries S1 twice, family 16's carries S4
        let c10 = make_family(&FamilyParams::new(10, 2)).unwrap();
        let shapes = find_s_shapes(&c10.lg);
        assert!(shapes.iter().any(|s| s.kind == SShape::S1));
        for s in shapes.iter().filter(|s| s.kind == SShape::S1) {
            let rep = preimage_structure(&c10, s).unwrap();
            assert_eq!(rep.class, PreimageClass::ThreeCycles);
        }
        let c16 = make_family(&FamilyParams::new(16, 1)).unwrap();
        let shapes = find_s_shapes(&c16.lg);
        assert!(shapes.iter().any(|s| s.kind == SShape::S4));
        for s in shapes.iter().filter(|s| s.kind == SShape::S4) {
            let rep = preimage_structure(&c16, s).unwrap();
            assert_eq!(rep.class, PreimageClass::K32);
        }
    }
}
