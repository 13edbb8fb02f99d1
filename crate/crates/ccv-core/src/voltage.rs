//! Dart-labelled graphs, cyclic generalised voltage graphs and their covers.
//!
//! A labelled graph (Delta, lambda) is extendable when an index function iota
//! with lambda(x) iota(beg x) = lambda(inv x) iota(term x) exists; a voltage
//! zeta with zeta(inv x) = -zeta(x) mod lambda(x) iota(beg x) then defines the
//! cover: vertices v_i for i in Z_iota(v), darts x_i for i in
//! Z_{lambda(x) iota(beg x)}, beg(x_i) = (beg x)_i, inv(x_i) = (inv x)_{i+zeta(x)}.

use crate::dartgraph::{spanning_tree, DartGraph, Dart, EdgeKind, SpanningTree, Vertex, Walk};
use crate::error::{CcvError, Result};
use crate::iso::GraphMap;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Nonnegative residue of z modulo m > 0.
pub fn mod_pos(z: i64, m: u64) -> u64 {
    (z.rem_euclid(m as i64)) as u64
}

/// A positive rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkRatio {
    pub num: u64,
    pub den: u64,
}

impl WalkRatio {
    pub fn one() -> Self {
        WalkRatio { num: 1, den: 1 }
    }
    pub fn new(num: u64, den: u64) -> Self {
        assert!(num > 0 && den > 0);
        let g = gcd_u64(num, den);
        WalkRatio { num: num / g, den: den / g }
    }
    pub fn mul(self, other: WalkRatio) -> Self {
        // cross-cancel before multiplying; label products stay tiny but be exact
        let g1 = gcd_u64(self.num, other.den);
        let g2 = gcd_u64(other.num, self.den);
        WalkRatio {
            num: (self.num / g1).checked_mul(other.num / g2).expect("ratio overflow"),
            den: (self.den / g2).checked_mul(other.den / g1).expect("ratio overflow"),
        }
    }
    pub fn inv(self) -> Self {
        WalkRatio { num: self.den, den: self.num }
    }
    pub fn is_one(self) -> bool {
        self.num == 1 && self.den == 1
    }
}

/// A dart-labelled graph: lambda(x) >= 1 on every dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    pub graph: DartGraph,
    pub lambda: Vec<u32>,
}

impl LabelledGraph {
    pub fn new(graph: DartGraph, lambda: Vec<u32>) -> Result<Self> {
        if lambda.len() != graph.n_darts() as usize {
            return Err(CcvError::Parse { line: 0, msg: "lambda length mismatch".into() });
        }
        for (x, &l) in lambda.iter().enumerate() {
            if l == 0 {
                return Err(CcvError::Parse { line: 0, msg: format!("lambda({x}) must be >= 1") });
            }
        }
        Ok(LabelledGraph { graph, lambda })
    }

    pub fn unit(graph: DartGraph) -> Self {
        let n = graph.n_darts() as usize;
        LabelledGraph { graph, lambda: vec![1; n] }
    }

    pub fn lambda(&self, x: Dart) -> u32 {
        self.lambda[x as usize]
    }

    /// Sum of labels over the darts at v (the cover valence of the fibre).
    pub fn label_sum(&self, v: Vertex) -> u32 {
        self.graph.darts_at(v).iter().map(|&x| self.lambda[x as usize]).sum()
    }

    /// The ratio lambda(x) / lambda(inv x) over a single dart.
    fn dart_ratio(&self, x: Dart) -> WalkRatio {
        WalkRatio::new(self.lambda[x as usize] as u64, self.lambda[self.graph.inv(x) as usize] as u64)
    }
}

/// rho(W) = prod lambda(x_i) / lambda(x_i^{-1}) in lowest terms.
pub fn walk_ratio(lg: &LabelledGraph, w: &Walk) -> Result<WalkRatio> {
    w.validate(&lg.graph)?;
    let mut r = WalkRatio::one();
    for &x in &w.0 {
        r = r.mul(lg.dart_ratio(x));
    }
    Ok(r)
}

/// Per-vertex ratios relative to the root of a spanning tree.
fn tree_ratios(lg: &LabelledGraph, tree: &SpanningTree) -> Vec<WalkRatio> {
    let mut rho = vec![WalkRatio::one(); lg.graph.n_vertices() as usize];
    for &v in &tree.order {
        if let Some(x) = tree.parent_dart[v as usize] {
            let p = lg.graph.beg(x);
            rho[v as usize] = rho[p as usize].mul(lg.dart_ratio(x));
        }
    }
    rho
}

fn tree_walk_to_root(g: &DartGraph, tree: &SpanningTree, v: Vertex) -> Vec<Dart> {
    // darts from v up to the root
    let mut out = Vec::new();
    let mut c = v;
    while let Some(x) = tree.parent_dart[c as usize] {
        out.push(g.inv(x));
        c = g.beg(x);
    }
    out
}

/// Minimal index function of an extendable labelled graph
/// (gcd of its values is 1), or the violating fundamental cycle.
pub fn extend(lg: &LabelledGraph) -> Result<Vec<u64>> {
    let g = &lg.graph;
    let tree = spanning_tree(g, &[])?;
    let rho = tree_ratios(lg, &tree);
    // fundamental cycle check: one cotree dart at a time
    for x in g.edge_reps() {
        if tree.contains_dart(g, x) {
            continue;
        }
        let u = g.beg(x);
        let v = g.term(x)?;
        let along = rho[u as usize].mul(lg.dart_ratio(x));
        if along != rho[v as usize] {
            let ratio = along.mul(rho[v as usize].inv());
            // witness: root -> u, the dart x, then v -> root
            let mut w: Vec<Dart> = tree_walk_to_root(g, &tree, u);
            w.reverse();
            let mut w: Vec<Dart> = w.into_iter().map(|d| g.inv(d)).collect();
            w.push(x);
            w.extend(tree_walk_to_root(g, &tree, v));
            return Err(CcvError::NotExtendable {
                num: ratio.num as i64,
                den: ratio.den as i64,
                witness: w,
            });
        }
    }
    // iota(root) = lcm of denominators; iota(v) = iota(root) * rho_v
    let mut l = 1u64;
    for r in &rho {
        l = lcm_u64(l, r.den);
    }
    let iota: Vec<u64> = rho.iter().map(|r| l / r.den * r.num).collect();
    debug_assert_eq!(iota.iter().fold(0, |a, &b| gcd_u64(a, b)), 1);
    Ok(iota)
}

/// The unique index function with iota(v0) = m, when m is a valid multiple
/// of the minimal index at v0.
pub fn scaled_iota(lg: &LabelledGraph, v0: Vertex, m: u64) -> Result<Vec<u64>> {
    if v0 >= lg.graph.n_vertices() {
        return Err(CcvError::UnknownVertex(v0));
    }
    let min = extend(lg)?;
    let base = min[v0 as usize];
    if m == 0 || m % base != 0 {
        return Err(CcvError::BadIotaScale { v: v0, m, min: base });
    }
    let c = m / base;
    Ok(min.iter().map(|&x| x * c).collect())
}

/// A cyclic generalised voltage graph. Voltages are stored as canonical
/// residues in [0, lambda(x) * iota(beg x)), with the inverse-voltage
/// condition enforced at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicVoltageGraph {
    pub lg: LabelledGraph,
    pub iota: Vec<u64>,
    zeta: Vec<u64>,
}

impl CyclicVoltageGraph {
    /// Modulus of a dart: lambda(x) * iota(beg x).
    pub fn modulus(&self, x: Dart) -> u64 {
        self.lg.lambda(x) as u64 * self.iota[self.lg.graph.beg(x) as usize]
    }

    pub fn zeta(&self, x: Dart) -> u64 {
        self.zeta[x as usize]
    }

    pub fn graph(&self) -> &DartGraph {
        &self.lg.graph
    }

    /// Build from voltages on arbitrary darts; the inverse dart of each given
    /// dart receives the negated voltage. Conflicting assignments error.
    pub fn new(lg: LabelledGraph, iota: Vec<u64>, zeta_on: &[(Dart, i64)]) -> Result<Self> {
        let g = &lg.graph;
        if iota.len() != g.n_vertices() as usize {
            return Err(CcvError::Parse { line: 0, msg: "iota length mismatch".into() });
        }
        for (v, &i) in iota.iter().enumerate() {
            if i == 0 {
                return Err(CcvError::Parse { line: 0, msg: format!("iota({v}) must be >= 1") });
            }
        }
        for x in g.darts() {
            let lhs = lg.lambda(x) as u64 * iota[g.beg(x) as usize];
            let rhs = lg.lambda(g.inv(x)) as u64 * iota[g.term_u(x) as usize];
            if lhs != rhs {
                return Err(CcvError::RatioViolated(x));
            }
        }
        let mut raw: Vec<Option<i64>> = vec![None; g.n_darts() as usize];
        for &(x, z) in zeta_on {
            if x >= g.n_darts() {
                return Err(CcvError::UnknownDart(x));
            }
            if raw[x as usize].is_some() {
                return Err(CcvError::Parse { line: 0, msg: format!("duplicate voltage for dart {x}") });
            }
            raw[x as usize] = Some(z);
        }
        let mut zeta = vec![0u64; g.n_darts() as usize];
        for x in g.edge_reps() {
            let y = g.inv(x);
            let m = lg.lambda(x) as u64 * iota[g.beg(x) as usize];
            if x == y {
                let z = raw[x as usize].unwrap_or(0);
                if mod_pos(2 * z, m) != 0 {
                    return Err(CcvError::BadSemiEdgeVoltage(x));
                }
                zeta[x as usize] = mod_pos(z, m);
            } else {
                let (zx, zy) = match (raw[x as usize], raw[y as usize]) {
                    (None, None) => (0, 0),
                    (Some(a), None) => (mod_pos(a, m), mod_pos(-a, m)),
                    (None, Some(b)) => (mod_pos(-b, m), mod_pos(b, m)),
                    (Some(a), Some(b)) => {
                        if mod_pos(a + b, m) != 0 {
                            return Err(CcvError::InverseVoltageViolated(x));
                        }
                        (mod_pos(a, m), mod_pos(b, m))
                    }
                };
                zeta[x as usize] = zx;
                zeta[y as usize] = zy;
            }
        }
        Ok(CyclicVoltageGraph { lg, iota, zeta })
    }

    /// All-zero voltages.
    pub fn zero(lg: LabelledGraph, iota: Vec<u64>) -> Result<Self> {
        Self::new(lg, iota, &[])
    }
}

/// The expanded cover with fibre annotations.
#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: DartGraph,
    pub n: u64,
    pub vertex_base: Vec<Vertex>,
    pub vertex_index: Vec<u64>,
    pub dart_base: Vec<Dart>,
    pub dart_index: Vec<u64>,
    vertex_offset: Vec<u64>,
    dart_offset: Vec<u64>,
    iota: Vec<u64>,
    modulus: Vec<u64>,
}

impl Cover {
    pub fn vertex_of(&self, base: Vertex, index: u64) -> Result<Vertex> {
        if base >= self.vertex_offset.len() as u32 {
            return Err(CcvError::UnknownVertex(base));
        }
        if index >= self.iota[base as usize] {
            return Err(CcvError::IndexOutOfRange { what: "vertex fibre", index });
        }
        Ok((self.vertex_offset[base as usize] + index) as u32)
    }

    pub fn dart_of(&self, base: Dart, index: u64) -> Result<Dart> {
        if base >= self.dart_offset.len() as u32 {
            return Err(CcvError::UnknownDart(base));
        }
        if index >= self.modulus[base as usize] {
            return Err(CcvError::IndexOutOfRange { what: "dart fibre", index });
        }
        Ok((self.dart_offset[base as usize] + index) as u32)
    }

    pub fn fibre_size(&self, base: Vertex) -> u64 {
        self.iota[base as usize]
    }
}

/// n = lcm over darts of iota(beg x) * lambda(x): the order of the cyclic
/// group acting with the fibres as orbits.
pub fn faithful_n(cvg: &CyclicVoltageGraph) -> u64 {
    let mut n = 1;
    for x in cvg.graph().darts() {
        n = lcm_u64(n, cvg.modulus(x));
    }
    n
}

/// Subgroup generators in Z_n: vertex v -> iota(v), dart x -> iota(beg x) lambda(x).
pub fn zn_weights(cvg: &CyclicVoltageGraph) -> (Vec<u64>, Vec<u64>) {
    let vw = cvg.iota.clone();
    let dw = cvg.graph().darts().map(|x| cvg.modulus(x)).collect();
    (vw, dw)
}

/// Expand the cover per the cyclic cover construction.
pub fn expand(cvg: &CyclicVoltageGraph) -> Cover {
    let g = cvg.graph();
    let nv_base = g.n_vertices() as usize;
    let nd_base = g.n_darts() as usize;
    let mut vertex_offset = vec![0u64; nv_base];
    let mut acc = 0u64;
    for v in 0..nv_base {
        vertex_offset[v] = acc;
        acc += cvg.iota[v];
    }
    let total_v = acc as usize;
    let mut dart_offset = vec![0u64; nd_base];
    let mut modulus = vec![0u64; nd_base];
    let mut acc = 0u64;
    for x in 0..nd_base {
        dart_offset[x] = acc;
        modulus[x] = cvg.modulus(x as u32);
        acc += modulus[x];
    }
    let total_d = acc as usize;

    let mut beg = vec![0u32; total_d];
    let mut inv = vec![0u32; total_d];
    let mut dart_base = vec![0u32; total_d];
    let mut dart_index = vec![0u64; total_d];
    for x in 0..nd_base {
        let b = g.beg(x as u32) as usize;
        let y = g.inv(x as u32) as usize;
        let m = modulus[x];
        for i in 0..m {
            let id = (dart_offset[x] + i) as usize;
            dart_base[id] = x as u32;
            dart_index[id] = i;
            beg[id] = (vertex_offset[b] + i % cvg.iota[b]) as u32;
            inv[id] = (dart_offset[y] + (i + cvg.zeta[x]) % m) as u32;
        }
    }
    let mut vertex_base = vec![0u32; total_v];
    let mut vertex_index = vec![0u64; total_v];
    for v in 0..nv_base {
        for i in 0..cvg.iota[v] {
            let id = (vertex_offset[v] + i) as usize;
            vertex_base[id] = v as u32;
            vertex_index[id] = i;
        }
    }
    let graph = DartGraph::from_parts(total_v as u32, beg, inv).expect("cover is well formed");
    Cover {
        graph,
        n: faithful_n(cvg),
        vertex_base,
        vertex_index,
        dart_base,
        dart_index,
        vertex_offset,
        dart_offset,
        iota: cvg.iota.clone(),
        modulus,
    }
}

/// Adjacency oracle: u_i ~ v_j iff j - i = zeta(x) mod gcd(iota u, iota v)
/// for some dart x from u to v.
pub fn adjacent_in_cover(cvg: &CyclicVoltageGraph, u: Vertex, i: u64, v: Vertex, j: u64) -> Result<bool> {
    let g = cvg.graph();
    if u >= g.n_vertices() {
        return Err(CcvError::UnknownVertex(u));
    }
    if v >= g.n_vertices() {
        return Err(CcvError::UnknownVertex(v));
    }
    if i >= cvg.iota[u as usize] {
        return Err(CcvError::IndexOutOfRange { what: "vertex fibre", index: i });
    }
    if j >= cvg.iota[v as usize] {
        return Err(CcvError::IndexOutOfRange { what: "vertex fibre", index: j });
    }
    let d = gcd_u64(cvg.iota[u as usize], cvg.iota[v as usize]);
    for x in g.darts() {
        if g.beg(x) == u && g.term_u(x) == v {
            // same vertex pair via a semi-edge means u = v and x = inv x; still fine
            let diff = mod_pos(j as i64 - i as i64, d);
            if diff == cvg.zeta[x as usize] % d {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Reduce the carrier voltage of every edge modulo gcd(iota(beg), iota(term)).
/// The expanded cover is unchanged as a vertex multigraph.
pub fn reduce_voltages(cvg: &CyclicVoltageGraph) -> CyclicVoltageGraph {
    let g = cvg.graph().clone();
    let mut zeta = cvg.zeta.clone();
    for x in g.edge_reps() {
        let y = g.inv(x);
        let m = cvg.modulus(x);
        let d = gcd_u64(cvg.iota[g.beg(x) as usize], cvg.iota[g.term_u(x) as usize]);
        let r = cvg.zeta[x as usize] % d;
        zeta[x as usize] = r;
        if y != x {
            zeta[y as usize] = mod_pos(-(r as i64), m);
        }
    }
    CyclicVoltageGraph { lg: cvg.lg.clone(), iota: cvg.iota.clone(), zeta }
}

/// Shift all voltages by vertex potentials so that tree darts carry zero.
/// Returns the normalised graph and the potentials; `shift_witness` turns the
/// potentials into an explicit cover isomorphism.
pub fn t_normalise(cvg: &CyclicVoltageGraph, tree: &SpanningTree) -> Result<(CyclicVoltageGraph, Vec<i64>)> {
    let g = cvg.graph();
    if tree.order.len() != g.n_vertices() as usize || tree.tree_darts.len() + 1 != g.n_vertices() as usize
    {
        return Err(CcvError::NotSpanning);
    }
    let mut theta = vec![0i64; g.n_vertices() as usize];
    for &v in &tree.order {
        if let Some(x) = tree.parent_dart[v as usize] {
            let p = g.beg(x);
            theta[v as usize] = theta[p as usize] + cvg.zeta[x as usize] as i64;
        }
    }
    let mut zeta = vec![0u64; g.n_darts() as usize];
    for x in g.darts() {
        let m = cvg.modulus(x);
        let z = cvg.zeta[x as usize] as i64 + theta[g.beg(x) as usize] - theta[g.term_u(x) as usize];
        zeta[x as usize] = mod_pos(z, m);
    }
    Ok((CyclicVoltageGraph { lg: cvg.lg.clone(), iota: cvg.iota.clone(), zeta }, theta))
}

/// Explicit isomorphism expand(normalised) -> expand(original) given the
/// normalisation potentials: x_i -> x_{i + theta(beg x)}.
pub fn shift_witness(normalised: &Cover, original: &Cover, theta: &[i64]) -> GraphMap {
    let mut vertex = vec![0u32; normalised.graph.n_vertices() as usize];
    for id in 0..vertex.len() {
        let b = normalised.vertex_base[id];
        let i = normalised.vertex_index[id];
        let sz = normalised.iota[b as usize];
        let j = mod_pos(i as i64 + theta[b as usize], sz);
        vertex[id] = original.vertex_of(b, j).unwrap();
    }
    let mut dart = vec![0u32; normalised.graph.n_darts() as usize];
    for id in 0..dart.len() {
        let b = normalised.dart_base[id];
        let i = normalised.dart_index[id];
        let m = normalised.modulus[b as usize];
        let base_vertex = normalised.vertex_base
            [normalised.graph.beg(id as u32) as usize];
        let j = mod_pos(i as i64 + theta[base_vertex as usize], m);
        dart[id] = original.dart_of(b, j).unwrap();
    }
    GraphMap { vertex, dart }
}

/// Connectivity criterion for a T-normalised assignment:
/// gcd of all voltages and all indices equals 1.
pub fn is_connected_cover(cvg: &CyclicVoltageGraph, tree: &SpanningTree) -> Result<bool> {
    let g = cvg.graph();
    for &x in &tree.tree_darts {
        if cvg.zeta[x as usize] != 0 || cvg.zeta[g.inv(x) as usize] != 0 {
            return Err(CcvError::NotTNormalised(x));
        }
    }
    let mut d = 0u64;
    for x in g.darts() {
        d = gcd_u64(d, cvg.zeta[x as usize]);
    }
    for &i in &cvg.iota {
        d = gcd_u64(d, i);
    }
    Ok(d == 1)
}

/// Simplicity criterion: label coprimality, parallel-dart voltages distinct
/// modulo gcd of the end indices, and nonzero semi-edge voltages.
pub fn is_simple_cover(cvg: &CyclicVoltageGraph) -> bool {
    let g = cvg.graph();
    for x in g.darts() {
        let gl = gcd_u64(cvg.lg.lambda(x) as u64, cvg.lg.lambda(g.inv(x)) as u64);
        if gl != 1 {
            return false;
        }
        if g.is_semi_edge(x) && cvg.zeta[x as usize] % cvg.iota[g.beg(x) as usize] == 0 {
            return false;
        }
    }
    let darts: Vec<Dart> = g.darts().collect();
    for (a, &x) in darts.iter().enumerate() {
        for &y in &darts[a + 1..] {
            if g.beg(x) == g.beg(y) && g.term_u(x) == g.term_u(y) {
                let d = gcd_u64(cvg.iota[g.beg(x) as usize], cvg.iota[g.term_u(x) as usize]);
                if cvg.zeta[x as usize] % d == cvg.zeta[y as usize] % d {
                    return false;
                }
            }
        }
    }
    true
}

/// The fibre rotation f_a: x_i -> x_{i+a}; an automorphism for every a in Z_n.
pub fn fibre_rotation(cover: &Cover, a: i64) -> GraphMap {
    let mut vertex = vec![0u32; cover.graph.n_vertices() as usize];
    for id in 0..vertex.len() {
        let b = cover.vertex_base[id];
        let j = mod_pos(cover.vertex_index[id] as i64 + a, cover.iota[b as usize]);
        vertex[id] = cover.vertex_of(b, j).unwrap();
    }
    let mut dart = vec![0u32; cover.graph.n_darts() as usize];
    for id in 0..dart.len() {
        let b = cover.dart_base[id];
        let j = mod_pos(cover.dart_index[id] as i64 + a, cover.modulus[b as usize]);
        dart[id] = cover.dart_of(b, j).unwrap();
    }
    GraphMap { vertex, dart }
}

/// Multiply all voltages by a unit a of Z_n; the cover is isomorphic via
/// x_i -> x_{a i}.
pub fn scale_voltages(cvg: &CyclicVoltageGraph, a: u64) -> Result<CyclicVoltageGraph> {
    let n = faithful_n(cvg);
    if gcd_u64(a % n, n) != 1 {
        return Err(CcvError::NotCoprime(a, n));
    }
    let g = cvg.graph();
    let mut zeta = vec![0u64; g.n_darts() as usize];
    for x in g.darts() {
        let m = cvg.modulus(x);
        zeta[x as usize] = cvg.zeta[x as usize].wrapping_mul(a % m) % m;
    }
    Ok(CyclicVoltageGraph { lg: cvg.lg.clone(), iota: cvg.iota.clone(), zeta })
}

/// Explicit isomorphism expand(original) -> expand(scaled) for coprime a:
/// x_i -> x_{a i}.
pub fn scale_witness(original: &Cover, scaled: &Cover, a: u64) -> GraphMap {
    let mut vertex = vec![0u32; original.graph.n_vertices() as usize];
    for id in 0..vertex.len() {
        let b = original.vertex_base[id];
        let sz = original.iota[b as usize];
        vertex[id] = scaled.vertex_of(b, original.vertex_index[id] * (a % sz) % sz).unwrap();
    }
    let mut dart = vec![0u32; original.graph.n_darts() as usize];
    for id in 0..dart.len() {
        let b = original.dart_base[id];
        let m = original.modulus[b as usize];
        dart[id] = scaled.dart_of(b, original.dart_index[id] * (a % m) % m).unwrap();
    }
    GraphMap { vertex, dart }
}

/// Lift a label- and index-preserving base automorphism phi with
/// zeta(phi x) = a zeta(x) to a cover automorphism x_i -> (phi x)_{a i}.
pub fn lift_automorphism(
    cvg: &CyclicVoltageGraph,
    cover: &Cover,
    phi: &GraphMap,
    a: u64,
) -> Result<GraphMap> {
    let g = cvg.graph();
    if !phi.is_automorphism(g) {
        return Err(CcvError::NotAnAutomorphism);
    }
    let n = faithful_n(cvg);
    if gcd_u64(a % n, n) != 1 {
        return Err(CcvError::NotCoprime(a, n));
    }
    for v in g.vertices() {
        if cvg.iota[phi.vertex[v as usize] as usize] != cvg.iota[v as usize] {
            return Err(CcvError::NotAnAutomorphism);
        }
    }
    for x in g.darts() {
        let fx = phi.dart[x as usize];
        if cvg.lg.lambda(fx) != cvg.lg.lambda(x) {
            return Err(CcvError::NotAnAutomorphism);
        }
        let m = cvg.modulus(x);
        if cvg.zeta[fx as usize] % m != cvg.zeta[x as usize].wrapping_mul(a % m) % m {
            return Err(CcvError::NotAnAutomorphism);
        }
    }
    let mut vertex = vec![0u32; cover.graph.n_vertices() as usize];
    for id in 0..vertex.len() {
        let b = cover.vertex_base[id];
        let sz = cover.iota[b as usize];
        let j = cover.vertex_index[id] * (a % sz) % sz;
        vertex[id] = cover.vertex_of(phi.vertex[b as usize], j).unwrap();
    }
    let mut dart = vec![0u32; cover.graph.n_darts() as usize];
    for id in 0..dart.len() {
        let b = cover.dart_base[id];
        let m = cover.modulus[b as usize];
        let j = cover.dart_index[id] * (a % m) % m;
        dart[id] = cover.dart_of(phi.dart[b as usize], j).unwrap();
    }
    Ok(GraphMap { vertex, dart })
}

/// Equality of two covers over the same base as vertex-labelled multigraphs:
/// identical vertex fibres and identical edge multisets between fibre-indexed
/// vertices (the dart pairing inside a fibre may differ).
pub fn covers_equal_vertexwise(c1: &Cover, c2: &Cover) -> bool {
    if c1.graph.n_vertices() != c2.graph.n_vertices() || c1.graph.n_darts() != c2.graph.n_darts() {
        return false;
    }
    if c1.vertex_base != c2.vertex_base || c1.vertex_index != c2.vertex_index {
        return false;
    }
    let profile = |c: &Cover| {
        let mut links: Vec<(u32, u32)> = Vec::new();
        let mut loops: Vec<u32> = Vec::new();
        let mut semis: Vec<u32> = Vec::new();
        for x in c.graph.edge_reps() {
            match c.graph.classify_edge(x).unwrap() {
                EdgeKind::Link => {
                    let (u, v) = (c.graph.beg(x), c.graph.term(x).unwrap());
                    links.push((u.min(v), u.max(v)));
                }
                EdgeKind::Loop => loops.push(c.graph.beg(x)),
                EdgeKind::SemiEdge => semis.push(c.graph.beg(x)),
            }
        }
        links.sort_unstable();
        loops.sort_unstable();
        semis.sort_unstable();
        (links, loops, semis)
    };
    profile(c1) == profile(c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dartgraph::DartGraphBuilder;

    /// The three-vertex quotient of the running example: semi-edge at the
    /// distinguished vertex w, [2,1]-edges w-v and v-u, loop at u.
    pub fn fig3_labelled() -> LabelledGraph {
        let mut b = DartGraphBuilder::new(3);
        let (d0, d1) = b.add_link(0, 1); // w-v
        let (d2, d3) = b.add_link(1, 2); // v-u
        let (d4, d5) = b.add_loop(2); // loop at u
        let d6 = b.add_semi_edge(0); // semi at w
        let g = b.build();
        let mut lambda = vec![1u32; g.n_darts() as usize];
        lambda[d0 as usize] = 2;
        lambda[d1 as usize] = 1;
        lambda[d2 as usize] = 2;
        lambda[d3 as usize] = 1;
        lambda[d4 as usize] = 1;
        lambda[d5 as usize] = 1;
        lambda[d6 as usize] = 1;
        LabelledGraph::new(g, lambda).unwrap()
    }

    #[test]
    fn walk_ratio_basics() {
        let lg = fig3_labelled();
        assert_eq!(walk_ratio(&lg, &Walk(vec![])).unwrap(), WalkRatio::one());
        // single [2,1] dart from w to v
        assert_eq!(walk_ratio(&lg, &Walk(vec![0])).unwrap(), WalkRatio::new(2, 1));
        // closed walk w -> v -> w
        assert!(walk_ratio(&lg, &Walk(vec![0, 1])).unwrap().is_one());
    }

    #[test]
    fn extend_fig3_minimal() {
        let lg = fig3_labelled();
        assert_eq!(extend(&lg).unwrap(), vec![1, 2, 4]);
        assert_eq!(scaled_iota(&lg, 0, 2).unwrap(), vec![2, 4, 8]);
        assert!(scaled_iota(&lg, 1, 3).is_err());
    }

    #[test]
    fn extend_single_loop() {
        let mut b = DartGraphBuilder::new(1);
        b.add_loop(0);
        let lg = LabelledGraph::unit(b.build());
        assert_eq!(extend(&lg).unwrap(), vec![1]);
    }

    #[test]
    fn non_extendable_two_cycle() {
        // two parallel edges both labelled [1,2] in the same orientation
        let mut b = DartGraphBuilder::new(2);
        let (a0, a1) = b.add_link(0, 1);
        let (b0, b1) = b.add_link(0, 1);
        let g = b.build();
        let mut lambda = vec![1u32; 4];
        lambda[a0 as usize] = 1;
        lambda[a1 as usize] = 2;
        lambda[b0 as usize] = 2;
        lambda[b1 as usize] = 1;
        let lg = LabelledGraph::new(g, lambda).unwrap();
        match extend(&lg) {
            Err(CcvError::NotExtendable { num, den, witness }) => {
                assert_ne!(num, den);
                assert!(!witness.is_empty());
            }
            other => panic!("expected NotExtendable, got {other:?}"),
        }
    }

    #[test]
    fn expand_cn_from_single_loop() {
        // one vertex, iota = n, loop with zeta = 1 gives the n-cycle
        let mut b = DartGraphBuilder::new(1);
        b.add_loop(0);
        let lg = LabelledGraph::unit(b.build());
        let cvg = CyclicVoltageGraph::new(lg, vec![6], &[(0, 1)]).unwrap();
        let cover = expand(&cvg);
        let cn = crate::named::cycle_graph(6);
        assert!(crate::iso::are_isomorphic(&cover.graph, &cn).unwrap().is_some());
    }

    #[test]
    fn valency_law() {
        let lg = fig3_labelled();
        let iota = scaled_iota(&lg, 0, 2).unwrap();
        let cvg = CyclicVoltageGraph::new(lg, iota, &[(4, 2), (6, 1)]).unwrap();
        let cover = expand(&cvg);
        for v in cover.graph.vertices() {
            let base = cover.vertex_base[v as usize];
            let want: u32 = cvg.lg.label_sum(base);
            assert_eq!(cover.graph.valence(v) as u32, want);
        }
    }

    #[test]
    fn semi_edge_voltage_validation() {
        let mut b = DartGraphBuilder::new(1);
        b.add_semi_edge(0);
        let lg = LabelledGraph::unit(b.build());
        assert!(CyclicVoltageGraph::new(lg.clone(), vec![4], &[(0, 1)]).is_err());
        assert!(CyclicVoltageGraph::new(lg, vec![4], &[(0, 2)]).is_ok());
    }
}
