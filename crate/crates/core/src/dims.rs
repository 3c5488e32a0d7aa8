//! Expected complex dimensions of moduli spaces and of their strata.

use crate::error::Result;
use crate::graph::{arithmetic_genus, DecoratedDualGraph, GeometryContext, Pairing};
use crate::lattice::lattice_summary;

/// `c1(A) - A.D + (n - 3)(1 - g) + k`.
pub fn expected_dim_main(ctx: &GeometryContext, genus: u64, k: usize, total: &Pairing) -> i64 {
    total.c1_log() + (i64::from(ctx.dim_x) - 3) * (1 - genus as i64) + k as i64
}

/// `c1(A) + (n - 3)(1 - g) + k - |I| - A.D`: maps with smooth domain landing
/// in the depth-`I` stratum.
pub fn expected_dim_smooth_depth(ctx: &GeometryContext, genus: u64, k: usize, total: &Pairing, depth: usize) -> i64 {
    expected_dim_main(ctx, genus, k, total) - depth as i64
}

/// Same as [`expected_dim_main`], resolving a degree tag through the context.
pub fn expected_dim_main_for_tag(ctx: &GeometryContext, genus: u64, k: usize, tag: &str) -> Result<i64> {
    Ok(expected_dim_main(ctx, genus, k, ctx.pairing(tag)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub dim_x: u32,
    pub genus: u64,
    pub marked_points: usize,
    pub c1: i64,
    pub degree_dot_divisor: i64,
    pub kernel_dim: usize,
    pub obstruction_dim: usize,
    pub main_dim: i64,
    /// `main_dim - kernel_dim`.
    pub stratum_dim: i64,
    /// `main_dim - stratum_dim`; may be negative.
    pub codim: i64,
    /// Only for graphs with a single vertex and no edges.
    pub smooth_depth_dim: Option<i64>,
    /// Sum over vertices of the smooth-domain dimension of the vertex piece,
    /// minus `n - |I_e|` matching conditions per edge.
    pub prelog_dim: i64,
    /// One vertex, no edges, empty depth.
    pub is_trivial_graph: bool,
}

pub fn expected_dim_stratum(g: &DecoratedDualGraph, ctx: &GeometryContext) -> Result<DimensionReport> {
    let genus = arithmetic_genus(g)?;
    let total = ctx.total_pairing(g)?;
    let k = g.legs().len();
    let summary = lattice_summary(g);
    let kernel_dim = summary.kernel_dim();
    let main_dim = expected_dim_main(ctx, genus, k, &total);
    let stratum_dim = main_dim - kernel_dim as i64;

    let single = g.vertices().len() == 1 && g.edges().is_empty();
    let smooth_depth_dim = single.then(|| expected_dim_smooth_depth(ctx, genus, k, &total, g.vertices()[0].depth.len()));

    let valence = g.valence();
    let mut prelog_dim = 0;
    for (v, val) in g.vertices().iter().zip(valence) {
        let pairing = ctx.pairing(&v.degree)?;
        prelog_dim += expected_dim_smooth_depth(ctx, u64::from(v.genus), val, pairing, v.depth.len());
    }
    for e in g.edges() {
        prelog_dim -= i64::from(ctx.dim_x) - e.depth.len() as i64;
    }

    Ok(DimensionReport {
        dim_x: ctx.dim_x,
        genus,
        marked_points: k,
        c1: total.c1,
        degree_dot_divisor: total.dot_total(),
        kernel_dim,
        obstruction_dim: summary.obstruction_dim,
        main_dim,
        stratum_dim,
        codim: main_dim - stratum_dim,
        smooth_depth_dim,
        prelog_dim,
        is_trivial_graph: single && g.vertices()[0].depth.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use std::collections::BTreeMap;

    fn ctx(n: u32, tags: &[(&str, i64, &[(&str, i64)])]) -> GeometryContext {
        GeometryContext {
            dim_x: n,
            divisors: vec!["1".into(), "2".into()],
            degrees: tags
                .iter()
                .map(|(t, c1, d)| {
                    (
                        t.to_string(),
                        Pairing {
                            c1: *c1,
                            divisor: d.iter().map(|(l, v)| (l.to_string(), *v)).collect::<BTreeMap<_, _>>(),
                        },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn main_dimension_of_plane_cubic_plus_line() {
        let c = ctx(2, &[("A", 9, &[("1", 3), ("2", 3)])]);
        assert_eq!(expected_dim_main_for_tag(&c, 0, 2, "A").unwrap(), 4);
    }

    #[test]
    fn smooth_depth_with_empty_depth_is_main() {
        let c = ctx(2, &[("A", 3, &[("1", 1), ("2", 1)])]);
        let p = c.pairing("A").unwrap();
        assert_eq!(expected_dim_smooth_depth(&c, 0, 2, p, 0), expected_dim_main(&c, 0, 2, p));
        assert_eq!(expected_dim_smooth_depth(&c, 0, 2, p, 1), 1);
    }

    #[test]
    fn decomposition_in_three_space() {
        for d in 2..=4i64 {
            let gv = ((d - 1) * (d - 2) / 2) as u32;
            let mut b = GraphBuilder::new(["1", "2"])
                .vertex("v1", gv, "D", &["1"])
                .vertex("v2", gv, "D", &["2"]);
            for i in 0..d {
                b = b.edge(&format!("e{i}"), "v1", "v2", &["1", "2"], &[("1", -1), ("2", 1)]);
            }
            for i in 0..2 * d as usize {
                b = b.leg(&format!("a{i:02}"), "v1", i + 1, &[("1", 1)]);
                b = b.leg(&format!("b{i:02}"), "v2", 2 * d as usize + i + 1, &[("2", 1)]);
            }
            let g = b.build().unwrap();
            let c = ctx(3, &[("D", 4 * d, &[("1", d), ("2", d)])]);
            let r = expected_dim_stratum(&g, &c).unwrap();
            assert_eq!(r.main_dim, 8 * d);
            assert_eq!(r.stratum_dim, 8 * d - 1);
            assert_eq!(r.prelog_dim, 9 * d - 2);
            assert_eq!(r.obstruction_dim as i64, d - 1);
            assert_eq!(r.prelog_dim - r.obstruction_dim as i64, r.stratum_dim);
        }
    }

    #[test]
    fn trivial_graph() {
        let g = GraphBuilder::new(["1", "2"]).vertex("v", 0, "A", &[]).build().unwrap();
        let c = ctx(2, &[("A", 3, &[])]);
        let r = expected_dim_stratum(&g, &c).unwrap();
        assert!(r.is_trivial_graph);
        assert_eq!(r.stratum_dim, r.main_dim);
        assert_eq!(r.kernel_dim, 0);
        assert_eq!(r.smooth_depth_dim, Some(r.main_dim));
    }
}
