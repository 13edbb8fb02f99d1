//! The 25 quotient templates and the parameterised cover families.
//!
//! Each template is a dart-labelled graph on at most three vertices with a
//! distinguished vertex (always vertex 0 here), voltage slots on its cotree
//! loops/edges, and forced voltages elsewhere: 0 on spanning-tree darts and
//! iota/2 on semi-edges. Instantiating a template at (m; r, s) scales the
//! minimal index function so the distinguished vertex has index m and fills
//! the slots.
//!
//! Slot values live in canonical residues: a loop voltage modulo the index of
//! its vertex, an edge voltage modulo gcd of its end indices. Loop slots
//! exclude 0 and half the modulus (either value doubles an edge of the
//! cover), and slotted parallel edges exclude 0; these range constraints are
//! part of admissibility alongside each family's arithmetic conditions.

use crate::dartgraph::{Dart, DartGraphBuilder, Vertex};
use crate::error::{CcvError, Result};
use crate::voltage::{extend, gcd_u64, mod_pos, scaled_iota, CyclicVoltageGraph, LabelledGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Loop,
    Edge,
}

#[derive(Clone, Copy, Debug)]
pub struct Slot {
    pub name: char,
    pub kind: SlotKind,
    /// carrier dart of the slot
    pub dart: Dart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    M,
    MR,
    MRS,
}

impl Arity {
    pub fn as_str(self) -> &'static str {
        match self {
            Arity::M => "m",
            Arity::MR => "m; r",
            Arity::MRS => "m; r, s",
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuotientTemplate {
    pub index: u8,
    pub lg: LabelledGraph,
    pub distinguished: Vertex,
    /// minimal index function (gcd one), iota of the distinguished vertex first
    pub min_iota: Vec<u64>,
    pub slots: Vec<Slot>,
    pub semis: Vec<Dart>,
    pub arity: Arity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub index: u8,
    pub m: u64,
    pub r: Option<i64>,
    pub s: Option<i64>,
}

impl FamilyParams {
    pub fn new(index: u8, m: u64) -> Self {
        FamilyParams { index, m, r: None, s: None }
    }
    pub fn with_r(index: u8, m: u64, r: i64) -> Self {
        FamilyParams { index, m, r: Some(r), s: None }
    }
    pub fn with_rs(index: u8, m: u64, r: i64, s: i64) -> Self {
        FamilyParams { index, m, r: Some(r), s: Some(s) }
    }
}

struct Tb {
    b: DartGraphBuilder,
    lambda: Vec<u32>,
    slots: Vec<Slot>,
    semis: Vec<Dart>,
}

impl Tb {
    fn new(nv: u32) -> Self {
        Tb { b: DartGraphBuilder::new(nv), lambda: Vec::new(), slots: Vec::new(), semis: Vec::new() }
    }
    fn link(&mut self, u: Vertex, v: Vertex, lu: u32, lv: u32) -> (Dart, Dart) {
        let (x, y) = self.b.add_link(u, v);
        self.lambda.push(lu);
        self.lambda.push(lv);
        (x, y)
    }
    fn slot_link(&mut self, u: Vertex, v: Vertex, name: char) -> Dart {
        let (x, _) = self.link(u, v, 1, 1);
        self.slots.push(Slot { name, kind: SlotKind::Edge, dart: x });
        x
    }
    fn slot_loop(&mut self, u: Vertex, name: char) -> Dart {
        let (x, _) = self.b.add_loop(u);
        self.lambda.push(1);
        self.lambda.push(1);
        self.slots.push(Slot { name, kind: SlotKind::Loop, dart: x });
        x
    }
    fn semi(&mut self, u: Vertex) -> Dart {
        let x = self.b.add_semi_edge(u);
        self.lambda.push(1);
        self.semis.push(x);
        x
    }
    fn done(self, index: u8, arity: Arity) -> QuotientTemplate {
        let Tb { b, lambda, slots, semis } = self;
        let lg = LabelledGraph::new(b.build(), lambda).expect("template labels");
        let min_iota = extend(&lg).expect("templates are extendable");
        QuotientTemplate { index, lg, distinguished: 0, min_iota, slots, semis, arity }
    }
}

/// The canonical template of family i. Vertex 0 is the distinguished vertex.
pub fn quotient_template(index: u8) -> Result<QuotientTemplate> {
    if !(1..=25).contains(&index) {
        return Err(CcvError::UnknownFamily(index));
    }
    let t = match index {
        // one vertex: loop (slot r) plus a semi-edge
        1 => {
            let mut t = Tb::new(1);
            t.slot_loop(0, 'r');
            t.semi(0);
            t.done(1, Arity::MR)
        }
        // [1,1]-edge with a voltage-r loop and a voltage-s loop
        2 => {
            let mut t = Tb::new(2);
            t.link(0, 1, 1, 1);
            t.slot_loop(0, 'r');
            t.slot_loop(1, 's');
            t.done(2, Arity::MRS)
        }
        // two parallel edges (second carries r) and a semi-edge at each end
        3 => {
            let mut t = Tb::new(2);
            t.link(0, 1, 1, 1);
            t.slot_link(0, 1, 'r');
            t.semi(0);
            t.semi(1);
            t.done(3, Arity::MR)
        }
        // dipole: three parallel edges with voltages 0, r, s
        4 => {
            let mut t = Tb::new(2);
            t.link(0, 1, 1, 1);
            t.slot_link(0, 1, 'r');
            t.slot_link(0, 1, 's');
            t.done(4, Arity::MRS)
        }
        // [2,1]-edge toward a double-index vertex carrying the r loop;
        // semi-edge at the distinguished end
        5 => {
            let mut t = Tb::new(2);
            t.link(0, 1, 2, 1);
            t.slot_loop(1, 'r');
            t.semi(0);
            t.done(5, Arity::MR)
        }
        // [3,1]-edge toward a triple-index vertex carrying the r loop
        6 => {
            let mut t = Tb::new(2);
            t.link(0, 1, 3, 1);
            t.slot_loop(1, 'r');
            t.done(6, Arity::MR)
        }
        // path of [3,1]- and [1,3]-edges with a semi-edge in the middle
        7 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 3, 1);
            t.link(1, 2, 1, 3);
            t.semi(1);
            t.done(7, Arity::M)
        }
        // triangle: [1,2]-edges from the semi-edge vertex, [1,1]-slot across
        8 => {
            let mut t = Tb::new(3);
            t.link(2, 0, 1, 2);
            t.link(2, 1, 1, 2);
            t.slot_link(0, 1, 'r');
            t.semi(2);
            t.done(8, Arity::MR)
        }
        // [1,3]-edge into a path with semi-edges on both inner vertices
        9 => {
            let mut t = Tb::new(3);
            t.link(1, 0, 1, 3);
            t.link(2, 1, 2, 1);
            t.semi(1);
            t.semi(2);
            t.done(9, Arity::M)
        }
        // [2,1]/[1,2] path with a semi-edge at every vertex
        10 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 2, 1);
            t.link(1, 2, 1, 2);
            t.semi(0);
            t.semi(1);
            t.semi(2);
            t.done(10, Arity::M)
        }
        // single [2,3]-edge with a semi-edge on the label-2 side
        11 => {
            let mut t = Tb::new(2);
            t.link(1, 0, 2, 3);
            t.semi(1);
            t.done(11, Arity::M)
        }
        // [2,1]-edge, [1,1]-edge, r loop at the far end, semi-edges inbetween
        12 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 2, 1);
            t.link(1, 2, 1, 1);
            t.slot_loop(2, 'r');
            t.semi(0);
            t.semi(1);
            t.done(12, Arity::MR)
        }
        // [3,1]-edge, [1,1]-edge, r loop at the far end, middle semi-edge
        13 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 3, 1);
            t.link(1, 2, 1, 1);
            t.slot_loop(2, 'r');
            t.semi(1);
            t.done(13, Arity::MR)
        }
        // [2,3]-edge, [1,1]-edge and the r loop
        14 => {
            let mut t = Tb::new(3);
            t.link(1, 0, 2, 3);
            t.link(1, 2, 1, 1);
            t.slot_loop(2, 'r');
            t.done(14, Arity::MR)
        }
        // [2,1]-edge then [2,3]-edge, semi-edge at the distinguished end
        15 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 2, 1);
            t.link(1, 2, 2, 3);
            t.semi(0);
            t.done(15, Arity::M)
        }
        // bare tree: [3,1]-edge then [2,3]-edge
        16 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 3, 1);
            t.link(1, 2, 2, 3);
            t.done(16, Arity::M)
        }
        // [1,1]- and [2,1]-edges with r and s loops at the ends
        17 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 1, 1);
            t.link(1, 2, 2, 1);
            t.slot_loop(0, 'r');
            t.slot_loop(2, 's');
            t.done(17, Arity::MRS)
        }
        // chain of [2,1]-edges, r loop at the top, semi-edge at the bottom
        18 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 2, 1);
            t.link(1, 2, 2, 1);
            t.slot_loop(2, 'r');
            t.semi(0);
            t.done(18, Arity::MR)
        }
        // [3,1]- and [2,1]-edges down from the r loop at the distinguished vertex
        19 => {
            let mut t = Tb::new(3);
            t.link(1, 0, 2, 1);
            t.link(2, 1, 3, 1);
            t.slot_loop(0, 'r');
            t.done(19, Arity::MR)
        }
        // [3,1]-edge into a parallel pair (slot r), semi-edge at the far side
        20 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 3, 1);
            t.link(1, 2, 1, 1);
            t.slot_link(1, 2, 'r');
            t.semi(2);
            t.done(20, Arity::MR)
        }
        // [2,1]-edge into a parallel pair (slot r), semi-edges at both sides
        21 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 2, 1);
            t.link(1, 2, 1, 1);
            t.slot_link(1, 2, 'r');
            t.semi(0);
            t.semi(2);
            t.done(21, Arity::MR)
        }
        // parallel pair (slot r) from the semi-edge vertex, then an edge to
        // the s loop
        22 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 1, 1);
            t.slot_link(0, 1, 'r');
            t.link(1, 2, 1, 1);
            t.slot_loop(2, 's');
            t.semi(0);
            t.done(22, Arity::MRS)
        }
        // triangle with a doubled side: edge slot r, parallel slot s,
        // semi-edge at the apex
        23 => {
            let mut t = Tb::new(3);
            t.link(1, 2, 1, 1);
            t.slot_link(1, 2, 's');
            t.link(1, 0, 1, 1);
            t.slot_link(2, 0, 'r');
            t.semi(0);
            t.done(23, Arity::MRS)
        }
        // triangle (one side carries r) with a semi-edge at every vertex
        24 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 1, 1);
            t.link(1, 2, 1, 1);
            t.slot_link(2, 0, 'r');
            t.semi(0);
            t.semi(1);
            t.semi(2);
            t.done(24, Arity::MR)
        }
        // path with r and s loops at the ends, semi-edge in the middle
        25 => {
            let mut t = Tb::new(3);
            t.link(0, 1, 1, 1);
            t.link(0, 2, 1, 1);
            t.slot_loop(1, 'r');
            t.slot_loop(2, 's');
            t.semi(0);
            t.done(25, Arity::MRS)
        }
        _ => unreachable!(),
    };
    Ok(t)
}

/// Fixed parameter of the six one-point families.
pub fn sporadic_m(index: u8) -> Option<u64> {
    match index {
        7 => Some(2),
        9 => Some(4),
        10 => Some(2),
        11 => Some(4),
        15 => Some(6),
        16 => Some(1),
        _ => None,
    }
}

/// Admissibility clause of the family, as printed by `families list` and in
/// rejection errors.
pub fn clause_text(index: u8) -> &'static str {
    match index {
        1 => "m even, m >= 4, r != 0, gcd(m/2, r) = 1",
        2 | 17 => "m >= 3, r != 0, s != 0, gcd(m, r, s) = 1",
        3 | 12 | 13 | 14 | 18 | 20 | 21 => "m even, r != 0, gcd(m/2, r) = 1",
        4 => "m >= 3, 0 < r < s, gcd(m, r, s) = 1",
        5 => "m even, r != 0, gcd(m/2, r) = 1",
        6 | 19 => "r != 0, gcd(m, r) = 1",
        7 => "m = 2",
        8 => "gcd(m, r) = 1",
        9 => "m = 4",
        10 => "m = 2",
        11 => "m = 4",
        15 => "m = 6",
        16 => "m = 1",
        22 | 25 => "m even, m >= 4, r != 0, s != 0, gcd(m/2, r, s) = 1",
        23 => "m even, r != s, gcd(m/2, r) = 1 (plus the exceptional point m=4, r=0, s=1)",
        24 => "m even, m >= 4, gcd(m/2, r) = 1",
        _ => "unknown family",
    }
}

/// Canonicalised, validated parameters of a family instance.
#[derive(Clone, Debug)]
pub struct CanonicalParams {
    pub iota: Vec<u64>,
    /// canonical slot values aligned with template.slots
    pub slot_values: Vec<u64>,
}

fn fail(index: u8, clause: &str) -> CcvError {
    CcvError::Inadmissible { index, clause: clause.to_string() }
}

/// The vertex-transitive classification names family-23 points whose
/// canonical r violates the plain gcd condition: r = (m/2+3)/2 when
/// m/2 = 1 mod 4, r = (3m/2+3)/2 when m/2 = 3 mod 4 (with s = 1), and the
/// point (4; 0, 1). Whenever 3 divides m/2 these r hit gcd(m/2, r) = 3 or
/// even r = 0, yet the covers exist and are vertex-transitive; they are
/// admitted as documented exceptions.
pub fn gamma23_exceptional_point(m: u64, r: u64, s: u64) -> bool {
    if s != 1 {
        return false;
    }
    if m == 4 && r == 0 {
        return true;
    }
    let h = m / 2;
    let want = if h % 4 == 1 {
        (h + 3) / 2
    } else if h % 4 == 3 {
        (3 * h + 3) / 2
    } else {
        return false;
    };
    r == want % m
}

/// Validate parameters against the family's conditions; returns the scaled
/// index function and canonical slot residues.
pub fn check_params(p: &FamilyParams) -> Result<CanonicalParams> {
    let t = quotient_template(p.index)?;
    let want_r = t.arity != Arity::M;
    let want_s = t.arity == Arity::MRS;
    if p.r.is_some() != want_r || p.s.is_some() != want_s {
        return Err(CcvError::WrongArity { index: p.index, arity: t.arity.as_str(), r: p.r, s: p.s });
    }
    if let Some(fixed) = sporadic_m(p.index) {
        if p.m != fixed {
            return Err(fail(p.index, clause_text(p.index)));
        }
    }
    if p.m == 0 {
        return Err(fail(p.index, "m >= 1"));
    }
    let iota = scaled_iota(&t.lg, 0, p.m)
        .map_err(|_| fail(p.index, &format!("m must be a multiple of {}", t.min_iota[0])))?;
    for &x in &t.semis {
        if iota[t.lg.graph.beg(x) as usize] % 2 != 0 {
            return Err(fail(p.index, "m even"));
        }
    }
    // canonical slot residues
    let g = &t.lg.graph;
    let mut slot_values = Vec::new();
    for slot in &t.slots {
        let raw = match slot.name {
            'r' => p.r.unwrap(),
            _ => p.s.unwrap(),
        };
        let modulus = match slot.kind {
            SlotKind::Loop => iota[g.beg(slot.dart) as usize],
            SlotKind::Edge => gcd_u64(
                iota[g.beg(slot.dart) as usize],
                iota[g.term(slot.dart).unwrap() as usize],
            ),
        };
        let c = mod_pos(raw, modulus);
        if slot.kind == SlotKind::Loop {
            // a loop voltage of 0 or half the index doubles a cover edge
            if c == 0 {
                return Err(fail(p.index, &format!("{} != 0", slot.name)));
            }
            if 2 * c == modulus {
                return Err(fail(
                    p.index,
                    &format!("{} != {} (half the loop index)", slot.name, modulus / 2),
                ));
            }
        }
        slot_values.push(c);
    }
    let rc = t.slots.iter().position(|s| s.name == 'r').map(|i| slot_values[i]);
    let sc = t.slots.iter().position(|s| s.name == 's').map(|i| slot_values[i]);
    let m = p.m;
    // family 23 parameterises the doubled side through the shear s -> s - r:
    // the drawn condition r != s is then exactly the simplicity of the
    // parallel pair
    if p.index == 23 {
        let (r, s) = (rc.unwrap(), sc.unwrap());
        let sheared = (s + m - r % m) % m;
        let pos = t.slots.iter().position(|s| s.name == 's').unwrap();
        slot_values[pos] = sheared;
    }
    let cond = |ok: bool| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(fail(p.index, clause_text(p.index)))
        }
    };
    match p.index {
        1 => {
            cond(m % 2 == 0 && m >= 4)?;
            cond(gcd_u64(m / 2, rc.unwrap()) == 1)?;
        }
        2 | 17 => {
            cond(m >= 3)?;
            cond(gcd_u64(gcd_u64(m, rc.unwrap()), sc.unwrap()) == 1)?;
        }
        3 | 12 | 13 | 14 | 18 | 20 | 21 => {
            cond(m % 2 == 0)?;
            cond(rc.unwrap() != 0)?;
            cond(gcd_u64(m / 2, rc.unwrap()) == 1)?;
        }
        4 => {
            let (r, s) = (rc.unwrap(), sc.unwrap());
            cond(m >= 3 && r > 0 && r < s)?;
            cond(gcd_u64(gcd_u64(m, r), s) == 1)?;
        }
        5 => {
            cond(m % 2 == 0)?;
            cond(gcd_u64(m / 2, rc.unwrap()) == 1)?;
        }
        6 | 19 => {
            cond(gcd_u64(m, rc.unwrap()) == 1)?;
        }
        8 => {
            cond(gcd_u64(m, rc.unwrap()) == 1)?;
        }
        7 | 9 | 10 | 11 | 15 | 16 => {}
        22 | 25 => {
            let (r, s) = (rc.unwrap(), sc.unwrap());
            cond(m % 2 == 0 && m >= 4 && r != 0 && s != 0)?;
            cond(gcd_u64(gcd_u64(m / 2, r), s) == 1)?;
        }
        23 => {
            let (r, s) = (rc.unwrap(), sc.unwrap());
            cond(m % 2 == 0)?;
            cond(r != s)?;
            if !gamma23_exceptional_point(m, r, s) {
                cond(gcd_u64(m / 2, r) == 1)?;
            }
        }
        24 => {
            cond(m % 2 == 0 && m >= 4)?;
            cond(rc.unwrap() != 0)?;
            cond(gcd_u64(m / 2, rc.unwrap()) == 1)?;
        }
        _ => return Err(CcvError::UnknownFamily(p.index)),
    }
    Ok(CanonicalParams { iota, slot_values })
}

pub fn admissible(p: &FamilyParams) -> bool {
    check_params(p).is_ok()
}

/// Instantiate a family member as a cyclic generalised voltage graph.
pub fn make_family(p: &FamilyParams) -> Result<CyclicVoltageGraph> {
    let t = quotient_template(p.index)?;
    let c = check_params(p)?;
    let mut zeta: Vec<(Dart, i64)> = Vec::new();
    for (slot, &v) in t.slots.iter().zip(&c.slot_values) {
        zeta.push((slot.dart, v as i64));
    }
    for &x in &t.semis {
        zeta.push((x, (c.iota[t.lg.graph.beg(x) as usize] / 2) as i64));
    }
    CyclicVoltageGraph::new(t.lg, c.iota, &zeta)
}

/// Number of vertices of the cover of family `index` at parameter m.
pub fn cover_order(index: u8, m: u64) -> Result<u64> {
    let t = quotient_template(index)?;
    if m % t.min_iota[0] != 0 {
        return Err(fail(index, &format!("m must be a multiple of {}", t.min_iota[0])));
    }
    let c = m / t.min_iota[0];
    Ok(t.min_iota.iter().map(|&i| i * c).sum())
}

/// All admissible parameter points of a family with cover order at most
/// `max_order`, in lexicographic (m, r, s) order. Slot values range over
/// canonical residues.
pub fn admissible_points(index: u8, max_order: u64) -> Result<Vec<FamilyParams>> {
    let t = quotient_template(index)?;
    let mut out = Vec::new();
    if let Some(fixed) = sporadic_m(index) {
        if cover_order(index, fixed)? <= max_order {
            out.push(FamilyParams::new(index, fixed));
        }
        return Ok(out);
    }
    let step = t.min_iota[0];
    let mut m = step;
    while cover_order(index, m)? <= max_order {
        let iota = scaled_iota(&t.lg, 0, m)?;
        let slot_mod = |slot: &Slot| -> u64 {
            match slot.kind {
                SlotKind::Loop => iota[t.lg.graph.beg(slot.dart) as usize],
                SlotKind::Edge => gcd_u64(
                    iota[t.lg.graph.beg(slot.dart) as usize],
                    iota[t.lg.graph.term(slot.dart).unwrap() as usize],
                ),
            }
        };
        match t.arity {
            Arity::M => unreachable!(),
            Arity::MR => {
                let rm = slot_mod(&t.slots[0]);
                for r in 0..rm {
                    let p = FamilyParams::with_r(index, m, r as i64);
                    if admissible(&p) {
                        out.push(p);
                    }
                }
            }
            Arity::MRS => {
                let rm = slot_mod(&t.slots[0]);
                let sm = slot_mod(&t.slots[1]);
                for r in 0..rm {
                    for s in 0..sm {
                        let p = FamilyParams::with_rs(index, m, r as i64, s as i64);
                        if admissible(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        m += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use crate::named;
    use crate::voltage::expand;

    #[test]
    fn admissible_examples() {
        assert!(admissible(&FamilyParams::with_r(1, 4, 1)));
        assert!(admissible(&FamilyParams::with_rs(4, 3, 1, 2)));
        assert!(!admissible(&FamilyParams::with_r(12, 6, 3)));
    }

    #[test]
    fn family_k4_and_cube_from_delta6() {
        let k4 = expand(&make_family(&FamilyParams::with_r(6, 1, 1)).unwrap());
        assert!(are_isomorphic(&k4.graph, &named::complete_graph(4)).unwrap().is_some());
        let q3 = expand(&make_family(&FamilyParams::with_r(6, 2, 1)).unwrap());
        assert!(are_isomorphic(&q3.graph, &named::cube()).unwrap().is_some());
    }

    #[test]
    fn sporadic_orders() {
        for (i, order) in [(7u8, 10u64), (9, 22), (10, 8), (11, 10), (15, 26), (16, 6)] {
            let m = sporadic_m(i).unwrap();
            assert_eq!(cover_order(i, m).unwrap(), order);
            let cvg = make_family(&FamilyParams::new(i, m)).unwrap();
            let cover = expand(&cvg);
            assert_eq!(cover.graph.n_vertices() as u64, order);
            assert!(cover.graph.is_simple());
            assert!(cover.graph.is_connected());
        }
    }

    #[test]
    fn gamma16_is_k33() {
        let c = expand(&make_family(&FamilyParams::new(16, 1)).unwrap());
        assert!(are_isomorphic(&c.graph, &named::complete_bipartite(3, 3)).unwrap().is_some());
    }

    #[test]
    fn inadmissible_named_clause() {
        match make_family(&FamilyParams::with_r(1, 5, 1)) {
            Err(CcvError::Inadmissible { index: 1, clause }) => {
                assert!(clause.contains("m even") || clause.contains("multiple"));
            }
            other => panic!("expected Inadmissible, got {other:?}"),
        }
    }
}
