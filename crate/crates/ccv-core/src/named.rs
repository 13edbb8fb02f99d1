//! Standard graphs used as isomorphism targets and cross-check oracles.

use crate::dartgraph::{simple_graph, DartGraph};
use crate::error::{CcvError, Result};

pub fn complete_graph(n: u32) -> DartGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    simple_graph(n, &edges)
}

pub fn complete_bipartite(a: u32, b: u32) -> DartGraph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    simple_graph(a + b, &edges)
}

pub fn cycle_graph(n: u32) -> DartGraph {
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    simple_graph(n, &edges)
}

/// Generalised Petersen graph GP(m, r): outer rim 0..m, inner 0..m,
/// spokes, inner jumps of r.
pub fn generalized_petersen(m: u32, r: u32) -> Result<DartGraph> {
    if m < 3 || r == 0 || r >= m || 2 * r == m {
        return Err(CcvError::Inadmissible {
            index: 0,
            clause: format!("GP({m},{r}) requires m >= 3, 0 < r < m/2 or r < m with 2r != m"),
        });
    }
    let mut edges = Vec::new();
    for i in 0..m {
        edges.push((i, (i + 1) % m));
        edges.push((i, m + i));
        let j = (i + r) % m;
        let (a, b) = (m + i, m + j);
        edges.push((a.min(b), a.max(b)));
    }
    let mut edges: Vec<(u32, u32)> =
        edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(simple_graph(2 * m, &edges))
}

pub fn petersen() -> DartGraph {
    generalized_petersen(5, 2).unwrap()
}

pub fn cube() -> DartGraph {
    generalized_petersen(4, 1).unwrap()
}

/// Prism Y_n = GP(n, 1).
pub fn prism(n: u32) -> Result<DartGraph> {
    if n < 3 {
        return Err(CcvError::Inadmissible { index: 0, clause: "prism needs n >= 3".into() });
    }
    generalized_petersen(n, 1)
}

/// Moebius ladder on 2n vertices: Cay(Z_2n, {1, -1, n}).
pub fn moebius_ladder(n: u32) -> Result<DartGraph> {
    if n < 2 {
        return Err(CcvError::Inadmissible { index: 0, clause: "Moebius ladder needs n >= 2".into() });
    }
    let v = 2 * n;
    let mut edges: Vec<(u32, u32)> = (0..v).map(|i| (i, (i + 1) % v)).collect();
    for i in 0..n {
        edges.push((i, i + n));
    }
    let mut edges: Vec<(u32, u32)> =
        edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(simple_graph(v, &edges))
}

/// Circulant Cay(Z_m, S) with S symmetrised.
pub fn circulant(m: u32, jumps: &[u32]) -> DartGraph {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 0..m {
        for &j in jumps {
            let k = (i + j) % m;
            if i != k {
                edges.push((i.min(k), i.max(k)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    simple_graph(m, &edges)
}

/// Cyclic Haar graph: vertices a_0..a_{m-1}, b_0..b_{m-1}, edges a_i - b_{i+d}.
pub fn haar_graph(m: u32, jumps: &[u32]) -> DartGraph {
    let mut edges = Vec::new();
    for i in 0..m {
        for &d in jumps {
            edges.push((i, m + (i + d) % m));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    simple_graph(2 * m, &edges)
}

pub fn heawood() -> DartGraph {
    haar_graph(7, &[0, 1, 3])
}

fn lcf(n: u32, pattern: &[i64], repeats: u32) -> DartGraph {
    assert_eq!(pattern.len() as u32 * repeats, n);
    let mut edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        let j = pattern[(i as usize) % pattern.len()];
        let t = ((i as i64 + j).rem_euclid(n as i64)) as u32;
        edges.push((i.min(t), i.max(t)));
    }
    edges.sort_unstable();
    edges.dedup();
    simple_graph(n, &edges)
}

/// Incidence graph of the Pappus configuration: points (i,j) of Z_3 x Z_3,
/// lines y = a x + b, point on line iff j = a i + b.
pub fn pappus() -> DartGraph {
    let mut edges = Vec::new();
    for i in 0..3u32 {
        for j in 0..3u32 {
            for a in 0..3u32 {
                let b = (j + 2 * a * i) % 3; // j - a*i mod 3
                edges.push((3 * i + j, 9 + 3 * a + b));
            }
        }
    }
    edges.sort_unstable();
    simple_graph(18, &edges)
}

pub fn tutte_coxeter() -> DartGraph {
    lcf(30, &[-13, -9, 7, -7, 9, 13], 5)
}

pub fn dodecahedron() -> DartGraph {
    generalized_petersen(10, 2).unwrap()
}

pub fn desargues() -> DartGraph {
    generalized_petersen(10, 3).unwrap()
}

/// Lookup by the names used in the analysis tables.
pub fn by_name(name: &str) -> Result<DartGraph> {
    match name {
        "K4" => Ok(complete_graph(4)),
        "K33" => Ok(complete_bipartite(3, 3)),
        "Q3" => Ok(cube()),
        "Petersen" => Ok(petersen()),
        "Heawood" => Ok(heawood()),
        "GP(8,3)" => generalized_petersen(8, 3),
        "Pappus" => Ok(pappus()),
        "GP(10,2)" => Ok(dodecahedron()),
        "GP(10,3)" => Ok(desargues()),
        "TutteCoxeter" => Ok(tutte_coxeter()),
        other => {
            if let Some(rest) = other.strip_prefix("GP(").and_then(|s| s.strip_suffix(")")) {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() == 2 {
                    if let (Ok(m), Ok(r)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
                        return generalized_petersen(m, r);
                    }
                }
            }
            if let Some(rest) = other.strip_prefix("Prism(").and_then(|s| s.strip_suffix(")")) {
                if let Ok(n) = rest.trim().parse() {
                    return prism(n);
                }
            }
            if let Some(rest) = other.strip_prefix("Moebius(").and_then(|s| s.strip_suffix(")")) {
                if let Ok(n) = rest.trim().parse() {
                    return moebius_ladder(n);
                }
            }
            Err(CcvError::Inadmissible { index: 0, clause: format!("unknown graph name `{other}`") })
        }
    }
}

/// The nine exceptional graphs of the vertex-transitivity analysis.
pub fn exceptional_set() -> Vec<(&'static str, DartGraph)> {
    vec![
        ("K4", complete_graph(4)),
        ("K33", complete_bipartite(3, 3)),
        ("Q3", cube()),
        ("Petersen", petersen()),
        ("Heawood", heawood()),
        ("GP(8,3)", generalized_petersen(8, 3).unwrap()),
        ("Pappus", pappus()),
        ("GP(10,2)", dodecahedron()),
        ("GP(10,3)", desargues()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(complete_graph(4).n_vertices(), 4);
        assert_eq!(petersen().n_vertices(), 10);
        assert_eq!(heawood().n_vertices(), 14);
        assert_eq!(pappus().n_vertices(), 18);
        assert_eq!(tutte_coxeter().n_vertices(), 30);
        assert!(tutte_coxeter().is_simple());
        for v in tutte_coxeter().vertices() {
            assert_eq!(tutte_coxeter().valence(v), 3);
        }
    }
}
