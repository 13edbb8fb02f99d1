//! File formats: the native dart-graph (.dgf) and voltage-graph (.cvg) text
//! formats, graph6 for simple graphs, and a dot emitter.
//!
//! .dgf is line oriented: header `dgf 1`, a vertex count `v <n>`, then one
//! line `d <id> <beg> <inv>` per dart in ascending id order. `#` starts a
//! comment. .cvg appends `l <dart> <lambda>` and `i <vertex> <iota>` lines
//! for every dart/vertex and `z <dart> <zeta>` lines for nonzero voltages.
//! Files emitted here re-parse and re-emit byte-identically.

use crate::dartgraph::{DartGraph, EdgeKind};
use crate::error::{CcvError, Result};
use crate::voltage::{CyclicVoltageGraph, LabelledGraph};

pub fn emit_dgf(g: &DartGraph) -> String {
    let mut out = String::from("dgf 1\n");
    out.push_str(&format!("v {}\n", g.n_vertices()));
    for x in g.darts() {
        out.push_str(&format!("d {} {} {}\n", x, g.beg(x), g.inv(x)));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(s: &'a str) -> Self {
        Lines { inner: s.lines().enumerate() }
    }
    /// Next meaningful line, with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| CcvError::Parse { line, msg: format!("bad number `{tok}`") })
}

type ExtraLines = Vec<(usize, Vec<String>)>;

fn parse_dgf_body(text: &str) -> Result<(DartGraph, ExtraLines)> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next().ok_or(CcvError::Parse { line: 0, msg: "empty file".into() })?;
    if header != "dgf 1" {
        return Err(CcvError::Parse { line: ln, msg: format!("expected `dgf 1`, got `{header}`") });
    }
    let (ln, vline) = lines.next().ok_or(CcvError::Parse { line: ln, msg: "missing `v` line".into() })?;
    let vtoks: Vec<&str> = vline.split_whitespace().collect();
    if vtoks.len() != 2 || vtoks[0] != "v" {
        return Err(CcvError::Parse { line: ln, msg: "expected `v <count>`".into() });
    }
    let nv: u32 = parse_num(vtoks[1], ln)?;
    let mut darts: Vec<(u32, u32, u32)> = Vec::new();
    let mut extra: ExtraLines = Vec::new();
    while let Some((ln, line)) = lines.next() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "d" => {
                if toks.len() != 4 {
                    return Err(CcvError::Parse { line: ln, msg: "expected `d <id> <beg> <inv>`".into() });
                }
                let id: u32 = parse_num(toks[1], ln)?;
                let beg: u32 = parse_num(toks[2], ln)?;
                let inv: u32 = parse_num(toks[3], ln)?;
                darts.push((id, beg, inv));
            }
            _ => extra.push((ln, toks.iter().map(|s| s.to_string()).collect())),
        }
    }
    darts.sort_unstable();
    for (i, &(id, _, _)) in darts.iter().enumerate() {
        if id != i as u32 {
            return Err(CcvError::Parse { line: 0, msg: format!("dart ids must be dense, missing {i}") });
        }
    }
    let beg: Vec<u32> = darts.iter().map(|d| d.1).collect();
    let inv: Vec<u32> = darts.iter().map(|d| d.2).collect();
    let g = DartGraph::from_parts(nv, beg, inv)?;
    Ok((g, extra))
}

pub fn parse_dgf(text: &str) -> Result<DartGraph> {
    let (g, extra) = parse_dgf_body(text)?;
    if let Some((ln, toks)) = extra.first() {
        return Err(CcvError::Parse { line: *ln, msg: format!("unexpected `{}` line in .dgf", toks[0]) });
    }
    Ok(g)
}

pub fn emit_cvg(cvg: &CyclicVoltageGraph) -> String {
    let g = cvg.graph();
    let mut out = emit_dgf(g);
    for x in g.darts() {
        out.push_str(&format!("l {} {}\n", x, cvg.lg.lambda(x)));
    }
    for v in g.vertices() {
        out.push_str(&format!("i {} {}\n", v, cvg.iota[v as usize]));
    }
    for x in g.darts() {
        if cvg.zeta(x) != 0 {
            out.push_str(&format!("z {} {}\n", x, cvg.zeta(x)));
        }
    }
    out
}

pub fn parse_cvg(text: &str) -> Result<CyclicVoltageGraph> {
    let (g, extra) = parse_dgf_body(text)?;
    let nd = g.n_darts() as usize;
    let nv = g.n_vertices() as usize;
    let mut lambda = vec![1u32; nd];
    let mut iota = vec![0u64; nv];
    let mut zeta: Vec<(u32, i64)> = Vec::new();
    for (ln, toks) in &extra {
        let ln = *ln;
        let expect = |n: usize| -> Result<()> {
            if toks.len() != n {
                Err(CcvError::Parse { line: ln, msg: format!("expected {n} fields in `{}` line", toks[0]) })
            } else {
                Ok(())
            }
        };
        match toks[0].as_str() {
            "l" => {
                expect(3)?;
                let x: u32 = parse_num(&toks[1], ln)?;
                if x as usize >= nd {
                    return Err(CcvError::Parse { line: ln, msg: format!("unknown dart {x}") });
                }
                lambda[x as usize] = parse_num(&toks[2], ln)?;
            }
            "i" => {
                expect(3)?;
                let v: u32 = parse_num(&toks[1], ln)?;
                if v as usize >= nv {
                    return Err(CcvError::Parse { line: ln, msg: format!("unknown vertex {v}") });
                }
                iota[v as usize] = parse_num(&toks[2], ln)?;
            }
            "z" => {
                expect(3)?;
                let x: u32 = parse_num(&toks[1], ln)?;
                if x as usize >= nd {
                    return Err(CcvError::Parse { line: ln, msg: format!("unknown dart {x}") });
                }
                zeta.push((x, parse_num(&toks[2], ln)?));
            }
            other => {
                return Err(CcvError::Parse { line: ln, msg: format!("unknown line kind `{other}`") });
            }
        }
    }
    for (v, &i) in iota.iter().enumerate() {
        if i == 0 {
            return Err(CcvError::Parse { line: 0, msg: format!("missing `i {v} <iota>` line") });
        }
    }
    let lg = LabelledGraph::new(g, lambda)?;
    CyclicVoltageGraph::new(lg, iota, &zeta)
}

// ---------------------------------------------------------------------------
// graph6
// ---------------------------------------------------------------------------

pub fn to_graph6(g: &DartGraph) -> Result<String> {
    if !g.is_simple() {
        return Err(CcvError::NonSimpleCover);
    }
    let n = g.n_vertices() as usize;
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else if n <= 258047 {
        bytes.push(b'~');
        bytes.push(((n >> 12) & 63) as u8 + 63);
        bytes.push(((n >> 6) & 63) as u8 + 63);
        bytes.push((n & 63) as u8 + 63);
    } else {
        return Err(CcvError::BoundExceeded { order: n, bound: 258047 });
    }
    let mut adj = vec![false; n * n];
    for x in g.darts() {
        let (u, v) = (g.beg(x) as usize, g.term(x)? as usize);
        adj[u * n + v] = true;
    }
    let mut acc = 0u8;
    let mut nb = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            nb += 1;
            if nb == 6 {
                bytes.push(acc + 63);
                acc = 0;
                nb = 0;
            }
        }
    }
    if nb > 0 {
        bytes.push((acc << (6 - nb)) + 63);
    }
    Ok(String::from_utf8(bytes).unwrap())
}

pub fn from_graph6(s: &str) -> Result<DartGraph> {
    let bytes: Vec<u8> = s.trim().bytes().collect();
    if bytes.is_empty() {
        return Err(CcvError::Parse { line: 1, msg: "empty graph6 string".into() });
    }
    let pos;
    let n: usize = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(CcvError::Parse { line: 1, msg: "truncated graph6 header".into() });
        }
        pos = 4;
        (((bytes[1] - 63) as usize) << 12) | (((bytes[2] - 63) as usize) << 6) | ((bytes[3] - 63) as usize)
    } else {
        pos = 1;
        (bytes[0] - 63) as usize
    };
    let need = n * n.saturating_sub(1) / 2;
    let mut bits = Vec::with_capacity(need + 6);
    for &b in &bytes[pos..] {
        if !(63..127).contains(&b) {
            return Err(CcvError::Parse { line: 1, msg: format!("bad graph6 byte {b}") });
        }
        let v = b - 63;
        for k in (0..6).rev() {
            bits.push(v >> k & 1 == 1);
        }
    }
    if bits.len() < need {
        return Err(CcvError::Parse { line: 1, msg: "truncated graph6 bits".into() });
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[idx] {
                edges.push((i as u32, j as u32));
            }
            idx += 1;
        }
    }
    Ok(crate::dartgraph::simple_graph(n as u32, &edges))
}

pub fn to_dot(g: &DartGraph) -> String {
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        out.push_str(&format!("  {v};\n"));
    }
    for x in g.edge_reps() {
        match g.classify_edge(x).unwrap() {
            EdgeKind::Link | EdgeKind::Loop => {
                out.push_str(&format!("  {} -- {};\n", g.beg(x), g.term(x).unwrap()));
            }
            EdgeKind::SemiEdge => {
                out.push_str(&format!("  {} -- {} [style=dashed];\n", g.beg(x), g.beg(x)));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dartgraph::DartGraphBuilder;
    use crate::named;
    use crate::voltage::LabelledGraph;

    #[test]
    fn dgf_round_trip() {
        let g = named::petersen();
        let text = emit_dgf(&g);
        let g2 = parse_dgf(&text).unwrap();
        assert_eq!(emit_dgf(&g2), text);
    }

    #[test]
    fn dgf_comments_and_errors() {
        let text = "# a comment\ndgf 1\nv 1\nd 0 0 0\n";
        let g = parse_dgf(text).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert!(g.is_semi_edge(0));
        assert!(parse_dgf("dgf 2\nv 0\n").is_err());
        assert!(parse_dgf("dgf 1\nv 1\nd 0 0 1\n").is_err());
    }

    #[test]
    fn cvg_round_trip() {
        let mut b = DartGraphBuilder::new(2);
        b.add_link(0, 1);
        b.add_loop(1);
        b.add_semi_edge(0);
        let g = b.build();
        let lg = LabelledGraph::unit(g);
        let cvg = crate::voltage::CyclicVoltageGraph::new(lg, vec![4, 4], &[(2, 1), (4, 2)]).unwrap();
        let text = emit_cvg(&cvg);
        let cvg2 = parse_cvg(&text).unwrap();
        assert_eq!(emit_cvg(&cvg2), text);
        assert_eq!(cvg2.zeta(2), 1);
        assert_eq!(cvg2.zeta(3), 3);
    }

    #[test]
    fn graph6_round_trip() {
        for g in [named::petersen(), named::heawood(), named::complete_graph(4)] {
            let s = to_graph6(&g).unwrap();
            let g2 = from_graph6(&s).unwrap();
            assert!(crate::iso::are_isomorphic(&g, &g2).unwrap().is_some());
            assert_eq!(to_graph6(&g2).unwrap(), s);
        }
    }

    #[test]
    fn graph6_rejects_non_simple() {
        let mut b = DartGraphBuilder::new(1);
        b.add_loop(0);
        assert!(to_graph6(&b.build()).is_err());
    }
}
