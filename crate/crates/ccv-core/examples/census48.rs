use ccv_core::families::FamilyParams;
fn main() {
    // all vt points of family 23 (my current slot naming: r = single edge 2-0, s = parallel)
    for m in [2u64, 4, 6, 10, 14] {
        let mut vt_points = Vec::new();
        for r in 0..m {
            for s in 1..m {
                let p = FamilyParams::with_rs(23, m, r as i64, s as i64);
                if !ccv_core::families::admissible(&p) { continue; }
                let g = ccv_core::census::cover_graph(&p).unwrap();
                if ccv_core::analysis::is_vertex_transitive(&g).unwrap() {
                    vt_points.push((r, s));
                }
            }
        }
        let h = m / 2;
        let formula = if h % 4 == 1 { Some((h+3)/2 % m) } else if h % 4 == 3 { Some((3*h+3)/2 % m) } else { None };
        println!("m={m} (h={h}, clause r={formula:?}): vt (r,s) = {vt_points:?}");
    }
}
