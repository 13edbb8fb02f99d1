//! Desk-scale census: every admissible family point up to a cover order,
//! with brute-force vertex-transitivity and membership in the
//! vertex-transitive classification clauses.
//!
//! The classification lists five infinite families plus one sporadic graph;
//! a census cover is a clause member when it is isomorphic to some clause
//! instance of the same order. Membership is decided by canonical form.

use crate::analysis::girth;
use crate::dartgraph::DartGraph;
use crate::error::Result;
use crate::families::{admissible, admissible_points, make_family, FamilyParams};
use crate::iso::{automorphism_group_bounded, canonical_key};
use crate::voltage::expand;
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct CensusRecord {
    pub params: FamilyParams,
    pub order: u64,
    pub girth: u32,
    pub aut_order: u64,
    pub vertex_transitive: bool,
    /// clause of the classification matched by isomorphism, if any
    pub clause: Option<String>,
    pub canonical: Vec<u8>,
}

/// Clause instances of a given cover order: (label, canonical key).
fn clause_instances(order: u64) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, FamilyParams)> = Vec::new();
    // (1) family 1 with r in {1, 2}
    if order >= 4 && order % 2 == 0 {
        for r in [1i64, 2] {
            let p = FamilyParams::with_r(1, order, r);
            if admissible(&p) {
                out.push(("(1)".into(), p));
            }
        }
    }
    if order % 2 == 0 {
        let m = order / 2;
        // (2) family 2 with s = 1 and r^2 = +-1 mod m, plus the point (10; 2)
        if m >= 3 {
            for r in 1..m {
                let rr = (r * r) % m;
                if rr == 1 % m || rr == (m - 1) % m {
                    let p = FamilyParams::with_rs(2, m, r as i64, 1);
                    if admissible(&p) {
                        out.push(("(2)".into(), p));
                    }
                }
            }
            if m == 10 {
                let p = FamilyParams::with_rs(2, 10, 2, 1);
                if admissible(&p) {
                    out.push(("(2)".into(), p));
                }
            }
            // (3) the whole admissible range of family 4
            for r in 1..m {
                for s in r + 1..m {
                    let p = FamilyParams::with_rs(4, m, r as i64, s as i64);
                    if admissible(&p) {
                        out.push(("(3)".into(), p));
                    }
                }
            }
        }
    }
    if order % 3 == 0 {
        let m = order / 3;
        // (4) family 22 at (m; 2, 1) with m/2 odd
        if m >= 4 && m % 2 == 0 && (m / 2) % 2 == 1 {
            let p = FamilyParams::with_rs(22, m, 2, 1);
            if admissible(&p) {
                out.push(("(4)".into(), p));
            }
        }
        // (5) family 23 at the stated congruence points and (4; 0, 1)
        if m % 2 == 0 {
            let h = m / 2;
            let r = if h % 4 == 1 {
                Some((h + 3) / 2)
            } else if h % 4 == 3 {
                Some((3 * m / 2 + 3) / 2)
            } else {
                None
            };
            if let Some(r) = r {
                let p = FamilyParams::with_rs(23, m, r as i64, 1);
                if admissible(&p) {
                    out.push(("(5)".into(), p));
                }
            }
            if m == 4 {
                let p = FamilyParams::with_rs(23, 4, 0, 1);
                if admissible(&p) {
                    out.push(("(5)".into(), p));
                }
            }
        }
    }
    if order == 30 {
        out.push(("tutte-coxeter".into(), FamilyParams::with_rs(25, 10, 1, 3)));
    }
    out.into_iter()
        .map(|(label, p)| {
            let cover = expand(&make_family(&p).expect("clause points are admissible"));
            (label, canonical_key(&cover.graph).expect("clause covers are simple"))
        })
        .collect()
}

pub struct ClauseTable {
    by_order: BTreeMap<u64, Vec<(String, Vec<u8>)>>,
}

impl ClauseTable {
    pub fn up_to(max_order: u64) -> Self {
        let orders: Vec<u64> = (1..=max_order).collect();
        let rows: Vec<(u64, Vec<(String, Vec<u8>)>)> =
            orders.par_iter().map(|&o| (o, clause_instances(o))).collect();
        ClauseTable { by_order: rows.into_iter().collect() }
    }

    pub fn lookup(&self, order: u64, key: &[u8]) -> Option<String> {
        self.by_order
            .get(&order)?
            .iter()
            .find(|(_, k)| k == key)
            .map(|(label, _)| label.clone())
    }
}

/// One record per admissible parameter point with cover order at most
/// `max_order`, in (family, m, r, s) order.
pub fn census(max_order: u64) -> Result<Vec<CensusRecord>> {
    let table = ClauseTable::up_to(max_order);
    let mut points: Vec<FamilyParams> = Vec::new();
    for index in 1..=25u8 {
        points.extend(admissible_points(index, max_order)?);
    }
    let records: Vec<Result<CensusRecord>> = points
        .par_iter()
        .map(|p| {
            let cvg = make_family(p)?;
            let cover = expand(&cvg);
            let auts = automorphism_group_bounded(&cover.graph, 64)?;
            let orbits = crate::analysis::vertex_orbit_count(&cover.graph, &auts);
            let canonical = canonical_key(&cover.graph)?;
            let order = cover.graph.n_vertices() as u64;
            Ok(CensusRecord {
                params: *p,
                order,
                girth: girth(&cover.graph)?,
                aut_order: auts.len() as u64,
                vertex_transitive: orbits == 1,
                clause: table.lookup(order, &canonical),
                canonical,
            })
        })
        .collect();
    records.into_iter().collect()
}

/// Number of isomorphism classes among the records.
pub fn distinct_covers(records: &[CensusRecord]) -> usize {
    let set: std::collections::BTreeSet<&[u8]> =
        records.iter().map(|r| r.canonical.as_slice()).collect();
    set.len()
}

/// Records violating the classification agreement (empty in a correct build).
pub fn disagreements(records: &[CensusRecord]) -> Vec<&CensusRecord> {
    records.iter().filter(|r| r.vertex_transitive != r.clause.is_some()).collect()
}

pub fn records_json(records: &[CensusRecord]) -> serde_json::Value {
    let arr: Vec<serde_json::Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "index": r.params.index,
                "m": r.params.m,
                "r": r.params.r,
                "s": r.params.s,
                "order": r.order,
                "vt": r.vertex_transitive,
                "clause": r.clause,
                "aut_order": r.aut_order,
                "girth": r.girth,
            })
        })
        .collect();
    serde_json::Value::Array(arr)
}

/// Convenience wrapper for spot checks.
pub fn cover_graph(p: &FamilyParams) -> Result<DartGraph> {
    Ok(expand(&make_family(p)?).graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_census_agrees() {
        let records = census(20).unwrap();
        assert!(!records.is_empty());
        let bad = disagreements(&records);
        assert!(
            bad.is_empty(),
            "disagreements: {:?}",
            bad.iter().map(|r| r.params).collect::<Vec<_>>()
        );
    }

    #[test]
    fn gamma12_6_4_not_vertex_transitive() {
        let g = cover_graph(&FamilyParams::with_r(12, 6, 4)).unwrap();
        assert!(!crate::analysis::is_vertex_transitive(&g).unwrap());
    }

    #[test]
    fn pappus_record_is_clause_member() {
        let records = census(18).unwrap();
        let pap = records
            .iter()
            .find(|r| r.params.index == 22 && r.params.m == 6 && r.params.r == Some(2) && r.params.s == Some(1))
            .expect("Pappus point present");
        assert!(pap.vertex_transitive);
        assert_eq!(pap.clause.as_deref(), Some("(4)"));
    }
}
