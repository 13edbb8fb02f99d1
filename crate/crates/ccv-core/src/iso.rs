//! Isomorphism, automorphism and canonical-form search.
//!
//! Two engines: a bitset backtracking path for simple graphs (covers, census
//! graphs) and a bucketed path for small multigraphs with loops, semi-edges,
//! parallel edges and dart labels (quotients, templates).

use crate::dartgraph::{DartGraph, Vertex};
use crate::error::{CcvError, Result};
use std::collections::BTreeMap;

/// A graph map given by its vertex and dart images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub vertex: Vec<u32>,
    pub dart: Vec<u32>,
}

impl GraphMap {
    pub fn identity(g: &DartGraph) -> Self {
        GraphMap {
            vertex: (0..g.n_vertices()).collect(),
            dart: (0..g.n_darts()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex.iter().enumerate().all(|(i, &v)| i as u32 == v)
            && self.dart.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Checks that the map is a bijective morphism g1 -> g2.
    pub fn verify(&self, g1: &DartGraph, g2: &DartGraph) -> bool {
        if g1.n_vertices() != g2.n_vertices() || g1.n_darts() != g2.n_darts() {
            return false;
        }
        if self.vertex.len() != g1.n_vertices() as usize || self.dart.len() != g1.n_darts() as usize {
            return false;
        }
        let mut seen_v = vec![false; self.vertex.len()];
        for &v in &self.vertex {
            if v as usize >= seen_v.len() || seen_v[v as usize] {
                return false;
            }
            seen_v[v as usize] = true;
        }
        let mut seen_d = vec![false; self.dart.len()];
        for &d in &self.dart {
            if d as usize >= seen_d.len() || seen_d[d as usize] {
                return false;
            }
            seen_d[d as usize] = true;
        }
        for x in g1.darts() {
            let fx = self.dart[x as usize];
            if g2.beg(fx) != self.vertex[g1.beg(x) as usize] {
                return false;
            }
            if g2.inv(fx) != self.dart[g1.inv(x) as usize] {
                return false;
            }
        }
        true
    }

    pub fn is_automorphism(&self, g: &DartGraph) -> bool {
        self.verify(g, g)
    }

    /// self(other(x)).
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap {
            vertex: other.vertex.iter().map(|&v| self.vertex[v as usize]).collect(),
            dart: other.dart.iter().map(|&d| self.dart[d as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphMap {
        let mut vertex = vec![0u32; self.vertex.len()];
        let mut dart = vec![0u32; self.dart.len()];
        for (i, &v) in self.vertex.iter().enumerate() {
            vertex[v as usize] = i as u32;
        }
        for (i, &d) in self.dart.iter().enumerate() {
            dart[d as usize] = i as u32;
        }
        GraphMap { vertex, dart }
    }

    /// Order of the permutation (lcm of cycle lengths of the dart action).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.dart.len()];
        let mut ord = 1u64;
        for s in 0..self.dart.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = self.dart[c] as usize;
                len += 1;
            }
            ord = crate::voltage::lcm_u64(ord, len);
        }
        ord
    }
}

// ---------------------------------------------------------------------------
// simple-graph engine
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct BitAdj {
    words: usize,
    rows: Vec<u64>,
}

impl BitAdj {
    fn new(g: &DartGraph) -> Self {
        let n = g.n_vertices() as usize;
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        for x in g.darts() {
            let u = g.beg(x) as usize;
            let v = g.term(x).unwrap() as usize;
            rows[u * words + v / 64] |= 1 << (v % 64);
        }
        BitAdj { words, rows }
    }
    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
    #[inline]
    fn has(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }
}

/// Exact 1-dimensional refinement of two graphs with a shared colour
/// dictionary, so colour ids are comparable across the pair.
fn wl_colors_pair(g1: &DartGraph, g2: &DartGraph) -> (Vec<u32>, Vec<u32>) {
    let n1 = g1.n_vertices() as usize;
    let n2 = g2.n_vertices() as usize;
    let nb1 = g1.neighbour_sets();
    let nb2 = g2.neighbour_sets();
    // degree counts dart multiplicity, distinguishing semi-edges and loops
    let deg = |g: &DartGraph, v: u32| {
        let mut link = 0u32;
        let mut lo = 0u32;
        let mut se = 0u32;
        for x in g.darts_at(v) {
            match g.classify_edge(x).unwrap() {
                crate::dartgraph::EdgeKind::Link => link += 1,
                crate::dartgraph::EdgeKind::Loop => lo += 1,
                crate::dartgraph::EdgeKind::SemiEdge => se += 1,
            }
        }
        (link, lo, se)
    };
    let mut dict: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
    let assign = |k: (u32, u32, u32), dict: &mut BTreeMap<(u32, u32, u32), u32>| {
        let next = dict.len() as u32;
        *dict.entry(k).or_insert(next)
    };
    let mut c1: Vec<u32> = (0..n1 as u32).map(|v| assign(deg(g1, v), &mut dict)).collect();
    let mut c2: Vec<u32> = (0..n2 as u32).map(|v| assign(deg(g2, v), &mut dict)).collect();
    loop {
        let mut sigs: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
        let sig = |c: &[u32], nbrs: &[Vec<Vertex>], v: usize| {
            let mut s: Vec<u32> = nbrs[v].iter().map(|&w| c[w as usize]).collect();
            s.sort_unstable();
            (c[v], s)
        };
        for v in 0..n1 {
            let k = sig(&c1, &nb1, v);
            let next = sigs.len() as u32;
            sigs.entry(k).or_insert(next);
        }
        for v in 0..n2 {
            let k = sig(&c2, &nb2, v);
            let next = sigs.len() as u32;
            sigs.entry(k).or_insert(next);
        }
        let d1: Vec<u32> = (0..n1).map(|v| sigs[&sig(&c1, &nb1, v)]).collect();
        let d2: Vec<u32> = (0..n2).map(|v| sigs[&sig(&c2, &nb2, v)]).collect();
        if d1 == c1 && d2 == c2 {
            break;
        }
        c1 = d1;
        c2 = d2;
    }
    (c1, c2)
}

/// Backtracking vertex-map search between two simple graphs.
/// Returns all maps when `all`, else at most one.
fn simple_vertex_maps(g1: &DartGraph, g2: &DartGraph, all: bool) -> Vec<Vec<u32>> {
    let n = g1.n_vertices() as usize;
    if g2.n_vertices() as usize != n || g1.n_darts() != g2.n_darts() {
        return vec![];
    }
    if n == 0 {
        return vec![vec![]];
    }
    let (c1, c2) = wl_colors_pair(g1, g2);
    let mut h1: BTreeMap<u32, u32> = BTreeMap::new();
    let mut h2: BTreeMap<u32, u32> = BTreeMap::new();
    for &c in &c1 {
        *h1.entry(c).or_insert(0) += 1;
    }
    for &c in &c2 {
        *h2.entry(c).or_insert(0) += 1;
    }
    if h1 != h2 {
        return vec![];
    }
    let adj1 = BitAdj::new(g1);
    let adj2 = BitAdj::new(g2);
    let nbrs1 = g1.neighbour_sets();
    // distance matrices: partial maps must be distance-consistent, which
    // collapses the search on highly symmetric graphs
    let dist1 = distance_matrix(g1);
    let dist2 = distance_matrix(g2);

    // order: start from a vertex of rarest colour, grow by adjacency
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let start = (0..n as u32).min_by_key(|&v| (h1[&c1[v as usize]], c1[v as usize], v)).unwrap();
    order.push(start);
    placed[start as usize] = true;
    while order.len() < n {
        let next = (0..n as u32)
            .filter(|&v| !placed[v as usize])
            .min_by_key(|&v| {
                let attached = nbrs1[v as usize].iter().filter(|&&w| placed[w as usize]).count();
                (usize::MAX - attached, h1[&c1[v as usize]], v as usize)
            })
            .unwrap();
        order.push(next);
        placed[next as usize] = true;
    }

    let words = adj2.words;
    let mut results: Vec<Vec<u32>> = Vec::new();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    let mut mapped_mask = vec![0u64; words];

    struct Ctx<'a> {
        order: &'a [u32],
        c1: &'a [u32],
        c2: &'a [u32],
        adj2: &'a BitAdj,
        nbrs1: &'a [Vec<u32>],
        dist1: &'a [u8],
        dist2: &'a [u8],
        all: bool,
        n: usize,
        words: usize,
    }
    fn rec(
        ctx: &Ctx,
        depth: usize,
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        mapped_mask: &mut Vec<u64>,
        results: &mut Vec<Vec<u32>>,
    ) -> bool {
        if depth == ctx.n {
            results.push(map.clone());
            return !ctx.all;
        }
        let v = ctx.order[depth] as usize;
        // required image bitset: images of mapped neighbours of v
        let mut required = vec![0u64; ctx.words];
        for &w in &ctx.nbrs1[v] {
            let fw = map[w as usize];
            if fw != u32::MAX {
                required[fw as usize / 64] |= 1 << (fw % 64);
            }
        }
        'cand: for cand in 0..ctx.n as u32 {
            if used[cand as usize] || ctx.c2[cand as usize] != ctx.c1[v] {
                continue;
            }
            let row = ctx.adj2.row(cand as usize);
            for w in 0..ctx.words {
                if row[w] & mapped_mask[w] != required[w] {
                    continue 'cand;
                }
            }
            for d in 0..depth {
                let u = ctx.order[d] as usize;
                if ctx.dist1[v * ctx.n + u] != ctx.dist2[cand as usize * ctx.n + map[u] as usize] {
                    continue 'cand;
                }
            }
            map[v] = cand;
            used[cand as usize] = true;
            mapped_mask[cand as usize / 64] |= 1 << (cand % 64);
            let stop = rec(ctx, depth + 1, map, used, mapped_mask, results);
            map[v] = u32::MAX;
            used[cand as usize] = false;
            mapped_mask[cand as usize / 64] &= !(1 << (cand % 64));
            if stop {
                return true;
            }
        }
        false
    }

    let ctx = Ctx {
        order: &order,
        c1: &c1,
        c2: &c2,
        adj2: &adj2,
        nbrs1: &nbrs1,
        dist1: &dist1,
        dist2: &dist2,
        all,
        n,
        words,
    };
    let _ = adj1;
    rec(&ctx, 0, &mut map, &mut used, &mut mapped_mask, &mut results);
    results
}

/// All-pairs BFS distances, capped at 254; 255 marks unreachable.
fn distance_matrix(g: &DartGraph) -> Vec<u8> {
    let n = g.n_vertices() as usize;
    let nbrs = g.neighbour_sets();
    let mut out = vec![255u8; n * n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        let row = &mut out[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s as u32);
        while let Some(v) = queue.pop_front() {
            let dv = row[v as usize];
            for &w in &nbrs[v as usize] {
                if row[w as usize] == 255 {
                    row[w as usize] = dv.saturating_add(1).min(254);
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

/// Derive the dart map of a simple-graph vertex map.
fn dart_map_of_vertex_map(g1: &DartGraph, g2: &DartGraph, vm: &[u32]) -> Option<Vec<u32>> {
    let mut lookup: std::collections::HashMap<(u32, u32), u32> = Default::default();
    for x in g2.darts() {
        lookup.insert((g2.beg(x), g2.term(x).unwrap()), x);
    }
    let mut dm = vec![0u32; g1.n_darts() as usize];
    for x in g1.darts() {
        let key = (vm[g1.beg(x) as usize], vm[g1.term(x).unwrap() as usize]);
        dm[x as usize] = *lookup.get(&key)?;
    }
    Some(dm)
}

// ---------------------------------------------------------------------------
// general labelled-multigraph engine
// ---------------------------------------------------------------------------

/// Buckets of darts by structural role, with dart labels.
struct Buckets {
    /// per vertex: semi-edge darts sorted by label
    semis: Vec<Vec<u32>>,
    /// per vertex: loop representative darts (x < inv x) sorted by label pair
    loops: Vec<Vec<u32>>,
    /// per ordered vertex pair (u,v), u <= v: link reps with beg = u
    links: BTreeMap<(u32, u32), Vec<u32>>,
}

fn buckets(g: &DartGraph, lambda: &[u32]) -> Buckets {
    let nv = g.n_vertices() as usize;
    let mut semis = vec![Vec::new(); nv];
    let mut loops = vec![Vec::new(); nv];
    let mut links: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for x in g.edge_reps() {
        match g.classify_edge(x).unwrap() {
            crate::dartgraph::EdgeKind::SemiEdge => semis[g.beg(x) as usize].push(x),
            crate::dartgraph::EdgeKind::Loop => loops[g.beg(x) as usize].push(x),
            crate::dartgraph::EdgeKind::Link => {
                let (u, v) = (g.beg(x), g.term(x).unwrap());
                // store the dart whose beg is the smaller endpoint
                if u <= v {
                    links.entry((u, v)).or_default().push(x);
                } else {
                    links.entry((v, u)).or_default().push(g.inv(x));
                }
            }
        }
    }
    for l in &mut semis {
        l.sort_by_key(|&x| lambda[x as usize]);
    }
    for l in &mut loops {
        l.sort_by_key(|&x| loop_pair(lambda, g, x));
    }
    for l in links.values_mut() {
        l.sort_by_key(|&x| (lambda[x as usize], lambda[g.inv(x) as usize]));
    }
    Buckets { semis, loops, links }
}

fn loop_pair(lambda: &[u32], g: &DartGraph, x: u32) -> (u32, u32) {
    let a = lambda[x as usize];
    let b = lambda[g.inv(x) as usize];
    (a.min(b), a.max(b))
}

fn semi_profile(b: &Buckets, lambda: &[u32], v: usize) -> Vec<u32> {
    b.semis[v].iter().map(|&x| lambda[x as usize]).collect()
}

fn loop_profile(b: &Buckets, g: &DartGraph, lambda: &[u32], v: usize) -> Vec<(u32, u32)> {
    b.loops[v].iter().map(|&x| loop_pair(lambda, g, x)).collect()
}

/// Multiset of label pairs on links from u to v ((label at u, label at v)).
fn link_profile(b: &Buckets, g: &DartGraph, lambda: &[u32], u: u32, v: u32) -> Vec<(u32, u32)> {
    let key = (u.min(v), u.max(v));
    let mut out = Vec::new();
    if let Some(reps) = b.links.get(&key) {
        for &x in reps {
            let (a, bb) = (lambda[x as usize], lambda[g.inv(x) as usize]);
            if g.beg(x) == u {
                out.push((a, bb));
            } else {
                out.push((bb, a));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All label-preserving isomorphisms g1 -> g2 on the dart level.
/// With `lambda` all ones this is plain dart-graph isomorphism.
pub fn labelled_maps(
    g1: &DartGraph,
    l1: &[u32],
    g2: &DartGraph,
    l2: &[u32],
    all: bool,
) -> Vec<GraphMap> {
    if g1.n_vertices() != g2.n_vertices() || g1.n_darts() != g2.n_darts() {
        return vec![];
    }
    let all_ones = l1.iter().all(|&l| l == 1) && l2.iter().all(|&l| l == 1);
    if all_ones && g1.is_simple() && g2.is_simple() {
        let vms = simple_vertex_maps(g1, g2, all);
        return vms
            .into_iter()
            .filter_map(|vm| {
                let dm = dart_map_of_vertex_map(g1, g2, &vm)?;
                Some(GraphMap { vertex: vm, dart: dm })
            })
            .collect();
    }
    let n = g1.n_vertices() as usize;
    let b1 = buckets(g1, l1);
    let b2 = buckets(g2, l2);
    // vertex profile: semis, loops, sorted multiset of link profiles
    let profile = |g: &DartGraph, b: &Buckets, l: &[u32], v: u32| {
        let mut linkp: Vec<Vec<(u32, u32)>> = (0..g.n_vertices())
            .filter(|&w| w != v)
            .map(|w| link_profile(b, g, l, v, w))
            .filter(|p| !p.is_empty())
            .collect();
        linkp.sort();
        (
            semi_profile(b, l, v as usize),
            loop_profile(b, g, l, v as usize),
            link_profile(b, g, l, v, v), // empty; loops handled separately
            linkp,
        )
    };
    let p1: Vec<_> = (0..n as u32).map(|v| profile(g1, &b1, l1, v)).collect();
    let p2: Vec<_> = (0..n as u32).map(|v| profile(g2, &b2, l2, v)).collect();
    {
        let mut s1 = p1.clone();
        let mut s2 = p2.clone();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return vec![];
        }
    }

    let mut vms: Vec<Vec<u32>> = Vec::new();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        g1: &DartGraph,
        g2: &DartGraph,
        b1: &Buckets,
        b2: &Buckets,
        l1: &[u32],
        l2: &[u32],
        p1: &[(Vec<u32>, Vec<(u32, u32)>, Vec<(u32, u32)>, Vec<Vec<(u32, u32)>>)],
        p2: &[(Vec<u32>, Vec<(u32, u32)>, Vec<(u32, u32)>, Vec<Vec<(u32, u32)>>)],
        depth: usize,
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<u32>>,
        all: bool,
    ) -> bool {
        if depth == n {
            out.push(map.clone());
            return !all;
        }
        let v = depth as u32;
        'cand: for w in 0..n as u32 {
            if used[w as usize] || p1[v as usize] != p2[w as usize] {
                continue;
            }
            for u in 0..depth as u32 {
                let fu = map[u as usize];
                if link_profile(b1, g1, l1, v, u) != link_profile(b2, g2, l2, w, fu) {
                    continue 'cand;
                }
            }
            map[v as usize] = w;
            used[w as usize] = true;
            let stop = rec(n, g1, g2, b1, b2, l1, l2, p1, p2, depth + 1, map, used, out, all);
            map[v as usize] = u32::MAX;
            used[w as usize] = false;
            if stop {
                return true;
            }
        }
        false
    }
    rec(n, g1, g2, &b1, &b2, l1, l2, &p1, &p2, 0, &mut map, &mut used, &mut vms, all);

    // extend each vertex map to every consistent dart bijection
    let mut out: Vec<GraphMap> = Vec::new();
    for vm in vms {
        extend_dart_maps(g1, l1, g2, l2, &b1, &b2, &vm, all, &mut out);
        if !all && !out.is_empty() {
            break;
        }
    }
    out
}

/// Enumerate dart bijections compatible with a fixed vertex bijection.
fn extend_dart_maps(
    g1: &DartGraph,
    l1: &[u32],
    g2: &DartGraph,
    l2: &[u32],
    b1: &Buckets,
    b2: &Buckets,
    vm: &[u32],
    all: bool,
    out: &mut Vec<GraphMap>,
) {
    // choice points: per bucket, list of (source reps, matching target reps)
    enum Choice {
        Semi(Vec<u32>, Vec<u32>),
        Loop(Vec<u32>, Vec<u32>),
        Link(Vec<u32>, Vec<u32>),
    }
    let mut choices: Vec<Choice> = Vec::new();
    let n = g1.n_vertices();
    for v in 0..n {
        let w = vm[v as usize];
        // semis grouped by label
        let mut by_label: BTreeMap<u32, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for &x in &b1.semis[v as usize] {
            by_label.entry(l1[x as usize]).or_default().0.push(x);
        }
        for &y in &b2.semis[w as usize] {
            by_label.entry(l2[y as usize]).or_default().1.push(y);
        }
        for (_, (src, dst)) in by_label {
            if src.len() != dst.len() {
                return;
            }
            if !src.is_empty() {
                choices.push(Choice::Semi(src, dst));
            }
        }
        // loops grouped by unordered label pair
        let mut by_pair: BTreeMap<(u32, u32), (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for &x in &b1.loops[v as usize] {
            by_pair.entry(loop_pair(l1, g1, x)).or_default().0.push(x);
        }
        for &y in &b2.loops[w as usize] {
            by_pair.entry(loop_pair(l2, g2, y)).or_default().1.push(y);
        }
        for (_, (src, dst)) in by_pair {
            if src.len() != dst.len() {
                return;
            }
            if !src.is_empty() {
                choices.push(Choice::Loop(src, dst));
            }
        }
    }
    for (&(u, v), reps) in &b1.links {
        let (fu, fv) = (vm[u as usize], vm[v as usize]);
        let key = (fu.min(fv), fu.max(fv));
        let empty = Vec::new();
        let treps = b2.links.get(&key).unwrap_or(&empty);
        // orient targets so their beg corresponds to u's image
        let tor: Vec<u32> = treps
            .iter()
            .map(|&y| if g2.beg(y) == fu { y } else { g2.inv(y) })
            .collect();
        // group by ordered label pair
        let mut by_pair: BTreeMap<(u32, u32), (Vec<u32>, Vec<u32>)> = BTreeMap::new();
        for &x in reps {
            let x = if g1.beg(x) == u { x } else { g1.inv(x) };
            by_pair.entry((l1[x as usize], l1[g1.inv(x) as usize])).or_default().0.push(x);
        }
        for &y in &tor {
            by_pair.entry((l2[y as usize], l2[g2.inv(y) as usize])).or_default().1.push(y);
        }
        for (_, (src, dst)) in by_pair {
            if src.len() != dst.len() {
                return;
            }
            if !src.is_empty() {
                choices.push(Choice::Link(src, dst));
            }
        }
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        heap_perm(&mut idx, k, &mut out);
        out
    }
    fn heap_perm(a: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap_perm(a, k - 1, out);
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }

    // depth-first over choice points
    fn rec(
        g1: &DartGraph,
        l1: &[u32],
        g2: &DartGraph,
        l2: &[u32],
        vm: &[u32],
        choices: &[ChoiceView],
        depth: usize,
        dm: &mut Vec<u32>,
        all: bool,
        out: &mut Vec<GraphMap>,
    ) -> bool {
        if depth == choices.len() {
            let gm = GraphMap { vertex: vm.to_vec(), dart: dm.clone() };
            debug_assert!(gm.verify(g1, g2));
            out.push(gm);
            return !all;
        }
        let cv = &choices[depth];
        for perm in permutations_iter(cv.src.len()) {
            let mut ok = true;
            let mut local: Vec<(u32, u32, bool)> = Vec::new();
            for (i, &pi) in perm.iter().enumerate() {
                let x = cv.src[i];
                let y = cv.dst[pi];
                match cv.kind {
                    0 => {
                        // semi: direct
                        if l1[x as usize] != l2[y as usize] {
                            ok = false;
                            break;
                        }
                        local.push((x, y, false));
                    }
                    1 => {
                        // loop: orientation choice handled below via flag
                        local.push((x, y, true));
                    }
                    _ => {
                        // link: orientation forced by labels
                        if l1[x as usize] == l2[y as usize]
                            && l1[g1.inv(x) as usize] == l2[g2.inv(y) as usize]
                        {
                            local.push((x, y, false));
                        } else {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            // expand loop orientation choices
            let loops: Vec<usize> = local.iter().enumerate().filter(|(_, t)| t.2).map(|(i, _)| i).collect();
            let orients = 1usize << loops.len();
            'orient: for mask in 0..orients {
                let mut assignment: Vec<(u32, u32)> = Vec::with_capacity(local.len());
                for (i, &(x, y, is_loop)) in local.iter().enumerate() {
                    if is_loop {
                        let bit = loops.iter().position(|&j| j == i).unwrap();
                        let y2 = if mask >> bit & 1 == 1 { g2.inv(y) } else { y };
                        if l1[x as usize] != l2[y2 as usize]
                            || l1[g1.inv(x) as usize] != l2[g2.inv(y2) as usize]
                        {
                            continue 'orient;
                        }
                        assignment.push((x, y2));
                    } else {
                        assignment.push((x, y));
                    }
                }
                for &(x, y) in &assignment {
                    dm[x as usize] = y;
                    dm[g1.inv(x) as usize] = g2.inv(y);
                }
                let stop = rec(g1, l1, g2, l2, vm, choices, depth + 1, dm, all, out);
                if stop {
                    return true;
                }
            }
        }
        false
    }

    struct ChoiceView {
        kind: u8,
        src: Vec<u32>,
        dst: Vec<u32>,
    }
    fn permutations_iter(k: usize) -> Vec<Vec<usize>> {
        permutations(k)
    }

    let views: Vec<ChoiceView> = choices
        .into_iter()
        .map(|c| match c {
            Choice::Semi(s, d) => ChoiceView { kind: 0, src: s, dst: d },
            Choice::Loop(s, d) => ChoiceView { kind: 1, src: s, dst: d },
            Choice::Link(s, d) => ChoiceView { kind: 2, src: s, dst: d },
        })
        .collect();
    let mut dm = vec![u32::MAX; g1.n_darts() as usize];
    rec(g1, l1, g2, l2, vm, &views, 0, &mut dm, all, out);
}

// ---------------------------------------------------------------------------
// public API
// ---------------------------------------------------------------------------

pub const DEFAULT_SIZE_BOUND: usize = 64;

/// Exact automorphism group (all dart-level automorphisms).
pub fn automorphism_group_bounded(g: &DartGraph, bound: usize) -> Result<Vec<GraphMap>> {
    if g.n_vertices() as usize > bound {
        return Err(CcvError::BoundExceeded { order: g.n_vertices() as usize, bound });
    }
    let ones = vec![1u32; g.n_darts() as usize];
    Ok(labelled_maps(g, &ones, g, &ones, true))
}

pub fn automorphism_group(g: &DartGraph) -> Result<Vec<GraphMap>> {
    automorphism_group_bounded(g, DEFAULT_SIZE_BOUND)
}

/// Isomorphism test with witness.
pub fn are_isomorphic_bounded(g1: &DartGraph, g2: &DartGraph, bound: usize) -> Result<Option<GraphMap>> {
    let order = g1.n_vertices().max(g2.n_vertices()) as usize;
    if order > bound {
        return Err(CcvError::BoundExceeded { order, bound });
    }
    let o1 = vec![1u32; g1.n_darts() as usize];
    let o2 = vec![1u32; g2.n_darts() as usize];
    Ok(labelled_maps(g1, &o1, g2, &o2, false).into_iter().next())
}

pub fn are_isomorphic(g1: &DartGraph, g2: &DartGraph) -> Result<Option<GraphMap>> {
    are_isomorphic_bounded(g1, g2, 10_000)
}

// ---------------------------------------------------------------------------
// canonical form for simple graphs
// ---------------------------------------------------------------------------

/// Equitable refinement of an ordered partition given as vertex colours.
/// Cell order is derived from invariant signatures, so it is
/// isomorphism-invariant.
fn refine(nbrs: &[Vec<Vertex>], colors: &mut Vec<u32>) {
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, u32)> = (0..colors.len() as u32)
            .map(|v| {
                let mut s: Vec<u32> = nbrs[v as usize].iter().map(|&w| colors[w as usize]).collect();
                s.sort_unstable();
                (colors[v as usize], s, v)
            })
            .collect();
        sigs.sort();
        let mut new = vec![0u32; colors.len()];
        let mut c = 0u32;
        for i in 0..sigs.len() {
            if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                c += 1;
            }
            new[sigs[i].2 as usize] = c;
        }
        if new == *colors {
            return;
        }
        *colors = new;
    }
}

fn is_discrete(colors: &[u32]) -> bool {
    let mut seen = vec![false; colors.len()];
    for &c in colors {
        if seen[c as usize] {
            return false;
        }
        seen[c as usize] = true;
    }
    true
}

/// Canonical form of a simple graph: a relabelling and the canonical
/// adjacency key under it.
pub struct CanonicalForm {
    /// vertex -> canonical position
    pub labeling: Vec<u32>,
    pub key: Vec<u8>,
}

pub fn canonical_form_simple(g: &DartGraph) -> Result<CanonicalForm> {
    if !g.is_simple() {
        return Err(CcvError::NotSimple);
    }
    let n = g.n_vertices() as usize;
    let nbrs = g.neighbour_sets();
    let mut colors = vec![0u32; n];
    for v in 0..n {
        colors[v] = nbrs[v].len() as u32;
    }
    refine(&nbrs, &mut colors);

    fn key_of(nbrs: &[Vec<Vertex>], colors: &[u32]) -> Vec<u8> {
        // colors are a bijection vertex -> position
        let n = colors.len();
        let mut pos = vec![0u32; n];
        for (v, &c) in colors.iter().enumerate() {
            pos[v] = c;
        }
        let mut bits = vec![0u8; n.div_ceil(8) * n];
        for v in 0..n {
            for &w in &nbrs[v] {
                let (i, j) = (pos[v] as usize, pos[w as usize] as usize);
                bits[i * n.div_ceil(8) + j / 8] |= 1 << (j % 8);
            }
        }
        bits
    }

    fn search(
        nbrs: &[Vec<Vertex>],
        colors: &Vec<u32>,
        best: &mut Option<(Vec<u8>, Vec<u32>)>,
    ) {
        if is_discrete(colors) {
            let key = key_of(nbrs, colors);
            let better = match best {
                None => true,
                Some((bk, _)) => key < *bk,
            };
            if better {
                *best = Some((key, colors.clone()));
            }
            return;
        }
        // first smallest non-singleton cell by colour id
        let n = colors.len();
        let mut count: BTreeMap<u32, u32> = BTreeMap::new();
        for &c in colors.iter() {
            *count.entry(c).or_insert(0) += 1;
        }
        let target = *count.iter().find(|&(_, &k)| k > 1).map(|(c, _)| c).unwrap();
        for v in 0..n as u32 {
            if colors[v as usize] != target {
                continue;
            }
            let mut next = colors.clone();
            // individualize: v gets a colour just below the rest of its cell
            for c in next.iter_mut() {
                if *c > target {
                    *c += 1;
                }
            }
            next[v as usize] = target;
            for (w, c) in next.iter_mut().enumerate() {
                if w as u32 != v && *c == target {
                    *c = target + 1;
                }
            }
            refine(nbrs, &mut next);
            search(nbrs, &next, best);
        }
    }

    let mut best = None;
    search(&nbrs, &colors, &mut best);
    let (key, labeling) = best.expect("nonempty search");
    let mut full_key = (n as u32).to_be_bytes().to_vec();
    full_key.extend_from_slice(&key);
    Ok(CanonicalForm { labeling, key: full_key })
}

/// Canonical key bytes for a simple graph (isomorphism-invariant, exact).
pub fn canonical_key(g: &DartGraph) -> Result<Vec<u8>> {
    Ok(canonical_form_simple(g)?.key)
}

/// Relabel a simple graph into canonical form.
pub fn canonicalize(g: &DartGraph) -> Result<DartGraph> {
    let cf = canonical_form_simple(g)?;
    let n = g.n_vertices();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for x in g.edge_reps() {
        let (u, v) = (cf.labeling[g.beg(x) as usize], cf.labeling[g.term(x).unwrap() as usize]);
        edges.push((u.min(v), u.max(v)));
    }
    edges.sort_unstable();
    Ok(crate::dartgraph::simple_graph(n, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dartgraph::{simple_graph, DartGraphBuilder};
    use crate::named;

    #[test]
    fn k4_automorphisms() {
        let g = named::complete_graph(4);
        let auts = automorphism_group(&g).unwrap();
        assert_eq!(auts.len(), 24);
        for a in &auts {
            assert!(a.is_automorphism(&g));
        }
    }

    #[test]
    fn group_closed_under_composition() {
        let g = named::complete_graph(4);
        let auts = automorphism_group(&g).unwrap();
        let set: std::collections::HashSet<Vec<u32>> =
            auts.iter().map(|a| a.dart.clone()).collect();
        for a in auts.iter().take(6) {
            for b in auts.iter().take(6) {
                assert!(set.contains(&a.compose(b).dart));
            }
            assert!(set.contains(&a.inverse().dart));
        }
    }

    #[test]
    fn petersen_automorphisms() {
        let g = named::petersen();
        assert_eq!(automorphism_group(&g).unwrap().len(), 120);
    }

    #[test]
    fn iso_self_identity() {
        let g = named::petersen();
        let w = are_isomorphic(&g, &g).unwrap().unwrap();
        assert!(w.verify(&g, &g));
    }

    #[test]
    fn iso_distinguishes() {
        let k4 = named::complete_graph(4);
        let k33 = named::complete_bipartite(3, 3);
        assert!(are_isomorphic(&k4, &k33).unwrap().is_none());
    }

    #[test]
    fn multigraph_automorphisms_of_dipole() {
        // three parallel edges: 3! edge permutations times the side swap
        let mut b = DartGraphBuilder::new(2);
        b.add_link(0, 1);
        b.add_link(0, 1);
        b.add_link(0, 1);
        let g = b.build();
        assert_eq!(automorphism_group(&g).unwrap().len(), 12);
    }

    #[test]
    fn loop_flip_counts() {
        // single loop: identity and the dart swap
        let mut b = DartGraphBuilder::new(1);
        b.add_loop(0);
        let g = b.build();
        assert_eq!(automorphism_group(&g).unwrap().len(), 2);
    }

    #[test]
    fn canonical_form_invariance() {
        let g1 = simple_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let g2 = simple_graph(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]);
        assert_eq!(canonical_key(&g1).unwrap(), canonical_key(&g2).unwrap());
        let p5 = simple_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_ne!(canonical_key(&g1).unwrap(), canonical_key(&p5).unwrap());
    }
}
