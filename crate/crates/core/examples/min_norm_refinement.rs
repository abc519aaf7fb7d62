//! Grid refinement of `min |v|` for the ABC fields used as nonvanishing
//! checks: the refined minimizer at several seed grids against the raw
//! minimum over a fine grid.

use beltrami_core::{locate_min_norm, make_abc, AbcParams};

fn main() {
    for p in [AbcParams::new(1.0, 0.5, 0.0), AbcParams::new(1.0, 0.5, 0.1), AbcParams::new(1.0, 1.0, 1.0)] {
        let v = make_abc(p);
        println!("ABC({}, {}, {})", p.a, p.b, p.c);
        for n in [8, 16, 32, 64] {
            let (m, x) = locate_min_norm(&v, n);
            println!("  seed grid {n:3}: refined min {m:.12e} at {x:.6?}");
        }
        let n = 192;
        let g = v.on_grid(n);
        let raw = (0..n * n * n).map(|p| (g[0][p] * g[0][p] + g[1][p] * g[1][p] + g[2][p] * g[2][p]).sqrt()).fold(f64::INFINITY, f64::min);
        println!("  raw minimum on {n}³ grid: {raw:.12e}");
    }
}
