//! Brute-force enumeration of the cubic quotient shapes and recognition of
//! which templates a given simple cubic graph covers.

use crate::dartgraph::{quotient, spanning_tree, DartGraph, Dart, DartGraphBuilder, EdgeKind, SpanningTree, Vertex};
use crate::error::{CcvError, Result};
use crate::families::{self, FamilyParams, SlotKind};
use crate::iso::{automorphism_group_bounded, labelled_maps, GraphMap};
use crate::voltage::{extend, gcd_u64, reduce_voltages, t_normalise, CyclicVoltageGraph, LabelledGraph};
use std::collections::BTreeSet;

/// A labelled isomorphism class with its canonical key.
#[derive(Clone, Debug)]
pub struct LabelledIsoClass {
    pub representative: LabelledGraph,
    pub canonical_key: Vec<u8>,
}

/// Why a labelled graph cannot be extended to a quotient of a simple,
/// connected, cubic cover.
pub fn ccv_obstruction(lg: &LabelledGraph) -> Option<&'static str> {
    let g = &lg.graph;
    if !g.is_connected() {
        return Some("disconnected");
    }
    for v in g.vertices() {
        if lg.label_sum(v) != 3 {
            return Some("label sum at a vertex is not 3");
        }
    }
    for x in g.darts() {
        let (a, b) = (lg.lambda(x), lg.lambda(g.inv(x)));
        if a == b && a != 1 {
            return Some("lambda(x) = lambda(inv x) > 1");
        }
        if g.is_semi_edge(x) && a != 1 {
            return Some("semi-edge with label > 1");
        }
    }
    // parallel darts must all carry label 1
    let darts: Vec<Dart> = g.darts().collect();
    for (i, &x) in darts.iter().enumerate() {
        for &y in &darts[i + 1..] {
            if g.beg(x) == g.beg(y)
                && g.term_u(x) == g.term_u(y)
                && (lg.lambda(x) != 1 || lg.lambda(y) != 1)
            {
                return Some("parallel darts with label > 1");
            }
        }
    }
    // two semi-edges at one vertex both carry the forced voltage iota/2 and
    // so always double a cover edge
    for v in g.vertices() {
        let semis = g.darts_at(v).iter().filter(|&&x| g.is_semi_edge(x)).count();
        if semis > 1 {
            return Some("two semi-edges at one vertex");
        }
    }
    if extend(lg).is_err() {
        return Some("not extendable");
    }
    None
}

/// Canonical key of a labelled graph on few vertices: the minimal structural
/// encoding over all vertex orderings.
pub fn canonical_labelled_key(lg: &LabelledGraph) -> Vec<u8> {
    let g = &lg.graph;
    let n = g.n_vertices() as usize;
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best: Option<Vec<u8>> = None;
    loop {
        let mut enc: Vec<u8> = vec![n as u8];
        for p in 0..n as u32 {
            let v = perm.iter().position(|&q| q == p).unwrap() as u32;
            let mut loops: Vec<(u32, u32)> = Vec::new();
            let mut semis: Vec<u32> = Vec::new();
            for x in g.darts_at(v) {
                match g.classify_edge(x).unwrap() {
                    EdgeKind::Loop => {
                        if x < g.inv(x) {
                            let (a, b) = (lg.lambda(x), lg.lambda(g.inv(x)));
                            loops.push((a.min(b), a.max(b)));
                        }
                    }
                    EdgeKind::SemiEdge => semis.push(lg.lambda(x)),
                    EdgeKind::Link => {}
                }
            }
            loops.sort_unstable();
            semis.sort_unstable();
            enc.push(loops.len() as u8);
            for (a, b) in loops {
                enc.push(a as u8);
                enc.push(b as u8);
            }
            enc.push(semis.len() as u8);
            for s in semis {
                enc.push(s as u8);
            }
        }
        for pi in 0..n as u32 {
            for pj in pi + 1..n as u32 {
                let u = perm.iter().position(|&q| q == pi).unwrap() as u32;
                let w = perm.iter().position(|&q| q == pj).unwrap() as u32;
                let mut pairs: Vec<(u32, u32)> = Vec::new();
                for x in g.darts_at(u) {
                    if g.classify_edge(x).unwrap() == EdgeKind::Link && g.term_u(x) == w {
                        pairs.push((lg.lambda(x), lg.lambda(g.inv(x))));
                    }
                }
                pairs.sort_unstable();
                enc.push(pairs.len() as u8);
                for (a, b) in pairs {
                    enc.push(a as u8);
                    enc.push(b as u8);
                }
            }
        }
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
        // next permutation
        if !next_perm(&mut perm) {
            break;
        }
    }
    best.unwrap()
}

fn next_perm(p: &mut [u32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn label_preserving_isomorphic(a: &LabelledGraph, b: &LabelledGraph) -> bool {
    !labelled_maps(&a.graph, &a.lambda, &b.graph, &b.lambda, false).is_empty()
}

/// All connected dart-labelled graphs on at most `max_vertices` vertices that
/// extend to a quotient of a simple connected cubic cover, up to
/// label-preserving isomorphism.
pub fn enumerate_quotients(max_vertices: u32) -> Vec<LabelledIsoClass> {
    assert!(max_vertices <= 3, "enumeration is defined for at most 3 vertices");
    let mut out: Vec<LabelledIsoClass> = Vec::new();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    for nv in 1..=max_vertices {
        for lg in raw_candidates(nv) {
            if ccv_obstruction(&lg).is_some() {
                continue;
            }
            let key = canonical_labelled_key(&lg);
            if seen.insert(key.clone()) {
                out.push(LabelledIsoClass { representative: lg, canonical_key: key });
            }
        }
    }
    out.sort_by(|a, b| a.canonical_key.cmp(&b.canonical_key));
    out
}

/// All labelled multigraph structures on exactly nv vertices with loops,
/// semi-edges and up to three parallel links per pair, labels in 1..=3.
fn raw_candidates(nv: u32) -> Vec<LabelledGraph> {
    let pairs: Vec<(u32, u32)> = (0..nv).flat_map(|u| (u + 1..nv).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    let mut mult = vec![0u32; pairs.len()];
    loop {
        // loops and semi-edge counts per vertex
        let mut loops = vec![0u32; nv as usize];
        loop {
            let mut semis = vec![0u32; nv as usize];
            loop {
                build_labellings(nv, &pairs, &mult, &loops, &semis, &mut out);
                if !bump(&mut semis, 3) {
                    break;
                }
            }
            if !bump(&mut loops, 1) {
                break;
            }
        }
        if !bump(&mut mult, 3) {
            break;
        }
    }
    out
}

fn bump(v: &mut [u32], max: u32) -> bool {
    for x in v.iter_mut() {
        if *x < max {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

fn build_labellings(
    nv: u32,
    pairs: &[(u32, u32)],
    mult: &[u32],
    loops: &[u32],
    semis: &[u32],
    out: &mut Vec<LabelledGraph>,
) {
    // single links admit free labels; parallel bundles are forced to [1,1]
    let mut free_edges: Vec<usize> = Vec::new();
    for (i, &m) in mult.iter().enumerate() {
        if m == 1 {
            free_edges.push(i);
        }
    }
    let label_pairs = [(1u32, 1u32), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];
    let mut choice = vec![0usize; free_edges.len()];
    loop {
        let mut b = DartGraphBuilder::new(nv);
        let mut lambda: Vec<u32> = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            for _ in 0..mult[i] {
                b.add_link(u, v);
                if mult[i] == 1 {
                    let pos = free_edges.iter().position(|&e| e == i).unwrap();
                    let (a, c) = label_pairs[choice[pos]];
                    lambda.push(a);
                    lambda.push(c);
                } else {
                    lambda.push(1);
                    lambda.push(1);
                }
            }
        }
        for (v, &k) in loops.iter().enumerate() {
            for _ in 0..k {
                b.add_loop(v as u32);
                lambda.push(1);
                lambda.push(1);
            }
        }
        for (v, &k) in semis.iter().enumerate() {
            for _ in 0..k {
                b.add_semi_edge(v as u32);
                lambda.push(1);
            }
        }
        if let Ok(lg) = LabelledGraph::new(b.build(), lambda) {
            out.push(lg);
        }
        // advance label choices
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < label_pairs.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Quotient of g by the cyclic group generated by `a`, with the induced dart
/// labelling: lambda of a dart orbit is the number of its darts emanating
/// from any fixed vertex of its initial vertex orbit.
pub fn induced_labelling(g: &DartGraph, a: &GraphMap) -> Result<LabelledGraph> {
    Ok(induced_cvg(g, a)?.lg)
}

/// Quotient of g by <a> together with the induced index and voltage data: the
/// concrete inverse of the cover construction. The cover of the result is
/// isomorphic to g by construction.
pub fn induced_cvg(g: &DartGraph, a: &GraphMap) -> Result<CyclicVoltageGraph> {
    if !a.is_automorphism(g) {
        return Err(CcvError::NotAnAutomorphism);
    }
    let (q, proj) = quotient(g, std::slice::from_ref(a))?;
    // orbit representatives and in-orbit index of every vertex/dart; a dart
    // representative is chosen with its initial vertex at index 0 of the
    // vertex orbit, so cover indices line up with the expansion rule
    let nv = g.n_vertices() as usize;
    let nd = g.n_darts() as usize;
    let mut vrep = vec![u32::MAX; q.n_vertices() as usize];
    for v in 0..nv as u32 {
        let o = proj.vertex_map[v as usize] as usize;
        if vrep[o] == u32::MAX || v < vrep[o] {
            vrep[o] = v;
        }
    }
    let mut drep = vec![u32::MAX; q.n_darts() as usize];
    for x in 0..nd as u32 {
        let o = proj.dart_map[x as usize] as usize;
        let aligned = g.beg(x) == vrep[proj.vertex_map[g.beg(x) as usize] as usize];
        if aligned && (drep[o] == u32::MAX || x < drep[o]) {
            drep[o] = x;
        }
    }
    // index of a dart within its orbit: smallest j >= 0 with a^j(rep) = x
    let mut dart_index = vec![0u64; nd];
    let mut dart_orbit_size = vec![0u64; q.n_darts() as usize];
    for (o, &rep) in drep.iter().enumerate() {
        let mut c = rep;
        let mut j = 0u64;
        loop {
            dart_index[c as usize] = j;
            c = a.dart[c as usize];
            j += 1;
            if c == rep {
                break;
            }
        }
        dart_orbit_size[o] = j;
    }
    let mut vertex_orbit_size = vec![0u64; q.n_vertices() as usize];
    for (o, &rep) in vrep.iter().enumerate() {
        let mut c = rep;
        let mut j = 0u64;
        loop {
            c = a.vertex[c as usize];
            j += 1;
            if c == rep {
                break;
            }
        }
        vertex_orbit_size[o] = j;
    }
    // induced lambda and voltages
    let mut lambda = vec![0u32; q.n_darts() as usize];
    let mut zeta: Vec<(Dart, i64)> = Vec::new();
    for (o, &rep) in drep.iter().enumerate() {
        let bo = proj.vertex_map[g.beg(rep) as usize] as usize;
        lambda[o] = (dart_orbit_size[o] / vertex_orbit_size[bo]) as u32;
        let inv_rep = g.inv(rep);
        zeta.push((o as u32, dart_index[inv_rep as usize] as i64));
    }
    let lg = LabelledGraph::new(q, lambda)?;
    CyclicVoltageGraph::new(lg, vertex_orbit_size, &zeta)
}

/// Spanning-tree structure from an explicit set of tree edges.
fn tree_from_edges(g: &DartGraph, edges: &[Dart]) -> Result<SpanningTree> {
    let mut reps: Vec<Dart> = edges.iter().map(|&x| x.min(g.inv(x))).collect();
    reps.sort_unstable();
    reps.dedup();
    if reps.len() + 1 != g.n_vertices() as usize {
        return Err(CcvError::NotSpanning);
    }
    let mut adj = vec![Vec::new(); g.n_vertices() as usize];
    for &x in &reps {
        let (u, v) = (g.beg(x), g.term(x)?);
        adj[u as usize].push((v, x));
        adj[v as usize].push((u, g.inv(x)));
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut parent_dart = vec![None; g.n_vertices() as usize];
    let mut order = vec![0u32];
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
    if order.len() != g.n_vertices() as usize {
        return Err(CcvError::NotSpanning);
    }
    Ok(SpanningTree { tree_darts: reps, parent_dart, order, root: 0 })
}

/// One cyclic subgroup's quotient and what it matched.
#[derive(Clone, Debug)]
pub struct CyclicQuotientHit {
    pub generator: GraphMap,
    pub generator_order: u64,
    pub quotient: LabelledGraph,
    /// template index the quotient shape is label-isomorphic to
    pub shape: Option<u8>,
    /// the family parameter point recognised from the induced voltages,
    /// when it satisfies the family's conditions
    pub matched: Option<FamilyParams>,
}

/// Quotients of g by every cyclic subgroup of its automorphism group with at
/// most `max_orbits` vertex orbits, matched against the 25 templates.
///
/// Recognition reads off the induced (m; r, s) point after normalising the
/// induced voltages and accepts it when the family conditions hold with
/// m >= 2 (paper-table convention: the degenerate m = 1 instances of slotted
/// families are not reported, matching the printed cover table).
pub fn cyclic_quotients(g: &DartGraph, max_orbits: u32) -> Result<Vec<CyclicQuotientHit>> {
    if !g.is_simple() || !g.is_connected() {
        return Err(CcvError::NotSimple);
    }
    let auts = automorphism_group_bounded(g, 64)?;
    let mut hits = Vec::new();
    for a in auts {
        let orbits = crate::dartgraph::vertex_orbits(g, std::slice::from_ref(&a))?;
        if orbits.blocks.len() > max_orbits as usize {
            continue;
        }
        let induced = induced_cvg(g, &a)?;
        let (shape, matched) = recognise(&induced);
        hits.push(CyclicQuotientHit {
            generator_order: a.order(),
            generator: a,
            quotient: induced.lg.clone(),
            shape,
            matched,
        });
    }
    Ok(hits)
}

/// The set of family indices some cyclic subgroup quotient of g realises
/// admissibly: the cover table row of g.
pub fn ccv_cover_indices(g: &DartGraph, max_orbits: u32) -> Result<BTreeSet<u8>> {
    let hits = cyclic_quotients(g, max_orbits)?;
    Ok(hits.iter().filter_map(|h| h.matched.map(|p| p.index)).collect())
}

/// Match an induced quotient against the templates and recognise its
/// parameter point.
fn recognise(induced: &CyclicVoltageGraph) -> (Option<u8>, Option<FamilyParams>) {
    for index in 1..=25u8 {
        let t = families::quotient_template(index).unwrap();
        if t.lg.graph.n_vertices() != induced.lg.graph.n_vertices()
            || t.lg.graph.n_darts() != induced.lg.graph.n_darts()
        {
            continue;
        }
        let maps = labelled_maps(&t.lg.graph, &t.lg.lambda, &induced.lg.graph, &induced.lg.lambda, true);
        if maps.is_empty() {
            continue;
        }
        for phi in &maps {
            if let Some(p) = read_params(&t, induced, phi) {
                if families::admissible(&p) && (families::sporadic_m(index).is_some() || p.m >= 2) {
                    return (Some(index), Some(p));
                }
            }
        }
        return (Some(index), None);
    }
    (None, None)
}

/// Transport the template structure along phi, normalise the induced voltages
/// on the transported tree, and read off (m; r, s).
fn read_params(
    t: &families::QuotientTemplate,
    induced: &CyclicVoltageGraph,
    phi: &GraphMap,
) -> Option<FamilyParams> {
    let g = induced.graph();
    // template tree: every link that is not a slot
    let slot_darts: BTreeSet<Dart> = t
        .slots
        .iter()
        .flat_map(|s| [s.dart, t.lg.graph.inv(s.dart)])
        .collect();
    let mut tree_edges: Vec<Dart> = Vec::new();
    for x in t.lg.graph.edge_reps() {
        if t.lg.graph.classify_edge(x).unwrap() == EdgeKind::Link && !slot_darts.contains(&x) {
            tree_edges.push(phi.dart[x as usize]);
        }
    }
    let tree = tree_from_edges(g, &tree_edges).ok()?;
    let (normal, _) = t_normalise(induced, &tree).ok()?;
    let normal = reduce_voltages(&normal);
    let m = normal.iota[phi.vertex[t.distinguished as usize] as usize];
    let mut r = None;
    let mut s = None;
    for slot in &t.slots {
        let x = phi.dart[slot.dart as usize];
        let modulus = match slot.kind {
            SlotKind::Loop => normal.iota[g.beg(x) as usize],
            SlotKind::Edge => gcd_u64(
                normal.iota[g.beg(x) as usize],
                normal.iota[g.term(x).unwrap() as usize],
            ),
        };
        let v = (normal.zeta(x) % modulus) as i64;
        match slot.name {
            'r' => r = Some(v),
            _ => s = Some(v),
        }
    }
    // semi-edges must carry iota/2 after normalisation; anything else cannot
    // come from a simple cover
    for &x in &t.semis {
        let y = phi.dart[x as usize];
        let iota = normal.iota[g.beg(y) as usize];
        if iota % 2 != 0 || normal.zeta(y) % iota != iota / 2 {
            return None;
        }
    }
    Some(FamilyParams { index: t.index, m, r, s })
}

/// Shape-level template match for a bare labelled graph.
pub fn match_template_shape(lg: &LabelledGraph) -> Option<u8> {
    (1..=25u8).find(|&i| {
        let t = families::quotient_template(i).unwrap();
        label_preserving_isomorphic(&t.lg, lg)
    })
}

/// Data for the enumeration manifest.
pub fn manifest_json(classes: &[LabelledIsoClass]) -> serde_json::Value {
    let mut arr = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let mut obj = serde_json::Map::new();
        obj.insert("class".into(), serde_json::json!(i));
        obj.insert(
            "canonical_key".into(),
            serde_json::json!(hex(&c.canonical_key)),
        );
        obj.insert("vertices".into(), serde_json::json!(c.representative.graph.n_vertices()));
        obj.insert("darts".into(), serde_json::json!(c.representative.graph.n_darts()));
        obj.insert(
            "template".into(),
            match match_template_shape(&c.representative) {
                Some(i) => serde_json::json!(i),
                None => serde_json::Value::Null,
            },
        );
        arr.push(serde_json::Value::Object(obj));
    }
    serde_json::json!({ "count": classes.len(), "classes": arr })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// The spanning tree of a template quotient that contains all its
/// mixed-label edges, as required for normalised instances.
pub fn template_tree(lg: &LabelledGraph) -> Result<SpanningTree> {
    let g = &lg.graph;
    let required: Vec<Dart> = g
        .edge_reps()
        .into_iter()
        .filter(|&x| {
            g.classify_edge(x).unwrap() == EdgeKind::Link && lg.lambda(x) != lg.lambda(g.inv(x))
        })
        .collect();
    spanning_tree(g, &required)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn one_vertex_classes() {
        // loop plus semi-edge only; three semi-edges force a doubled cover edge
        let classes = enumerate_quotients(1);
        assert_eq!(classes.len(), 1);
        assert_eq!(match_template_shape(&classes[0].representative), Some(1));
    }

    #[test]
    fn twenty_five_classes() {
        let classes = enumerate_quotients(3);
        assert_eq!(classes.len(), 25);
        // bijective with the hard-coded templates
        let mut matched: Vec<u8> = classes
            .iter()
            .map(|c| match_template_shape(&c.representative).expect("every class matches"))
            .collect();
        matched.sort_unstable();
        let want: Vec<u8> = (1..=25).collect();
        assert_eq!(matched, want);
    }

    #[test]
    fn label_iso_respects_orientation_swap() {
        // one [1,2]-edge: swapping the stored orientation is the same graph
        let mut b1 = DartGraphBuilder::new(2);
        b1.add_link(0, 1);
        let g1 = b1.build();
        let lg1 = LabelledGraph::new(g1.clone(), vec![1, 2]).unwrap();
        let lg2 = LabelledGraph::new(g1.clone(), vec![2, 1]).unwrap();
        assert!(label_preserving_isomorphic(&lg1, &lg2));
        let lg3 = LabelledGraph::new(g1, vec![1, 3]).unwrap();
        assert!(!label_preserving_isomorphic(&lg1, &lg3));
    }

    #[test]
    fn induced_labelling_trivial_and_rotation() {
        let g = named::cycle_graph(6);
        let auts = crate::iso::automorphism_group(&g).unwrap();
        let rot = auts
            .iter()
            .find(|a| a.order() == 6 && a.vertex[0] == 1 && a.vertex[1] == 2)
            .expect("rotation");
        let lg = induced_labelling(&g, rot).unwrap();
        assert_eq!(lg.graph.n_vertices(), 1);
        assert_eq!(lg.graph.n_darts(), 2);
        assert!(lg.graph.is_loop_dart(0));
        assert_eq!(lg.lambda, vec![1, 1]);
    }

    #[test]
    fn induced_cvg_reconstructs() {
        let g = named::petersen();
        let auts = crate::iso::automorphism_group(&g).unwrap();
        for a in auts.iter().filter(|a| a.order() == 5).take(3) {
            let cvg = induced_cvg(&g, a).unwrap();
            let cover = crate::voltage::expand(&cvg);
            assert!(crate::iso::are_isomorphic(&cover.graph, &g).unwrap().is_some());
        }
    }

    #[test]
    fn k4_cover_indices() {
        let rows = ccv_cover_indices(&named::complete_graph(4), 3).unwrap();
        let want: BTreeSet<u8> = [1u8, 3].into_iter().collect();
        assert_eq!(rows, want);
    }
}
