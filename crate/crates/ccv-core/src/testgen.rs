//! Deterministic random instances for the property suites. The generator
//! builds an index function first and derives compatible labels, so every
//! instance satisfies the ratio condition by construction.

use crate::dartgraph::{DartGraphBuilder, Dart};
use crate::voltage::{gcd_u64, CyclicVoltageGraph, LabelledGraph};

/// SplitMix64: tiny, deterministic, good enough for instance generation.
#[derive(Clone)]
pub struct Rng64(pub u64);

impl Rng64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    /// Uniform value in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo)
    }
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A random cyclic generalised voltage graph whose cover has at most
/// `max_cover` vertices.
pub fn random_cvg(rng: &mut Rng64, max_cover: u64) -> CyclicVoltageGraph {
    loop {
        if let Some(cvg) = try_random_cvg(rng, max_cover) {
            return cvg;
        }
    }
}

fn try_random_cvg(rng: &mut Rng64, max_cover: u64) -> Option<CyclicVoltageGraph> {
    let nv = rng.range(1, 5) as u32;
    let iota: Vec<u64> = (0..nv).map(|_| rng.range(1, 13)).collect();
    if iota.iter().sum::<u64>() > max_cover {
        return None;
    }
    let mut b = DartGraphBuilder::new(nv);
    let mut lambda: Vec<u32> = Vec::new();
    let mut carriers: Vec<Dart> = Vec::new();
    let mut add_edge = |b: &mut DartGraphBuilder, lambda: &mut Vec<u32>, carriers: &mut Vec<Dart>, rng: &mut Rng64, u: u32, v: u32| {
        let g = gcd_u64(iota[u as usize], iota[v as usize]);
        let k = rng.range(1, 3);
        let lu = (iota[v as usize] / g * k) as u32;
        let lv = (iota[u as usize] / g * k) as u32;
        let (x, _) = b.add_link(u, v);
        lambda.push(lu);
        lambda.push(lv);
        carriers.push(x);
    };
    // random spanning tree
    for v in 1..nv {
        let u = rng.below(v as u64) as u32;
        add_edge(&mut b, &mut lambda, &mut carriers, rng, u, v);
    }
    // extra links
    if nv >= 2 {
        for _ in 0..rng.below(3) {
            let u = rng.below(nv as u64) as u32;
            let v = rng.below(nv as u64) as u32;
            if u != v {
                add_edge(&mut b, &mut lambda, &mut carriers, rng, u, v);
            }
        }
    }
    // loops: both darts carry the same label
    for _ in 0..rng.below(3) {
        let u = rng.below(nv as u64) as u32;
        let c = rng.range(1, 3) as u32;
        let (x, _) = b.add_loop(u);
        lambda.push(c);
        lambda.push(c);
        carriers.push(x);
    }
    // semi-edges
    let mut semis: Vec<Dart> = Vec::new();
    for _ in 0..rng.below(3) {
        let u = rng.below(nv as u64) as u32;
        let x = b.add_semi_edge(u);
        lambda.push(rng.range(1, 3) as u32);
        semis.push(x);
    }
    let g = b.build();
    if !g.is_connected() {
        return None;
    }
    // cover size check: sum of dart fibres
    let mut dart_total = 0u64;
    for x in g.darts() {
        dart_total += lambda[x as usize] as u64 * iota[g.beg(x) as usize];
        if dart_total > 4 * max_cover {
            return None;
        }
    }
    let lg = LabelledGraph::new(g, lambda).ok()?;
    // voltages: free on links/loops, a solution of 2z = 0 on semi-edges
    let mut zeta: Vec<(Dart, i64)> = Vec::new();
    for &x in &carriers {
        let m = lg.lambda(x) as u64 * iota[lg.graph.beg(x) as usize];
        zeta.push((x, rng.below(m) as i64));
    }
    for &x in &semis {
        let m = lg.lambda(x) as u64 * iota[lg.graph.beg(x) as usize];
        let z = if m % 2 == 0 && rng.chance(1, 2) { (m / 2) as i64 } else { 0 };
        zeta.push((x, z));
    }
    CyclicVoltageGraph::new(lg, iota, &zeta).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let mut a = Rng64(7);
        let mut b = Rng64(7);
        let x = random_cvg(&mut a, 120);
        let y = random_cvg(&mut b, 120);
        assert_eq!(crate::formats::emit_cvg(&x), crate::formats::emit_cvg(&y));
    }

    #[test]
    fn generated_instances_expand() {
        let mut rng = Rng64(42);
        for _ in 0..50 {
            let cvg = random_cvg(&mut rng, 150);
            let cover = crate::voltage::expand(&cvg);
            // involution and valency law hold by construction
            for v in cover.graph.vertices() {
                let base = cover.vertex_base[v as usize];
                assert_eq!(cover.graph.valence(v) as u32, cvg.lg.label_sum(base));
            }
        }
    }
}
