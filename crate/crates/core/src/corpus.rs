//! Worked examples shipped with the library, each with the facts it is
//! expected to reproduce.

use crate::error::Result;
use crate::graph::{DecoratedDualGraph, GeometryContext};
use crate::io;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    /// Passes every axiom, including tropical realizability.
    pub valid: bool,
    pub feasible: bool,
    pub genus: u64,
    pub kernel_dim: Option<usize>,
    pub obstruction_dim: Option<usize>,
    pub component_count: Option<u64>,
    pub main_dim: Option<i64>,
    pub stratum_dim: Option<i64>,
    pub prelog_dim: Option<i64>,
    pub smooth_depth_dim: Option<i64>,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    pub expected: Expected,
}

impl CorpusEntry {
    pub fn load(&self) -> Result<(DecoratedDualGraph, GeometryContext)> {
        let (g, ctx) = io::parse_graph(self.source.as_bytes())?;
        Ok((g, ctx.expect("corpus files embed their context")))
    }
}

const fn base(valid: bool, feasible: bool, genus: u64) -> Expected {
    Expected {
        valid,
        feasible,
        genus,
        kernel_dim: None,
        obstruction_dim: None,
        component_count: None,
        main_dim: None,
        stratum_dim: None,
        prelog_dim: None,
        smooth_depth_dim: None,
    }
}

const fn plane_pair(d: i64) -> Expected {
    Expected {
        kernel_dim: Some(1),
        obstruction_dim: Some(d as usize - 1),
        main_dim: Some(8 * d),
        stratum_dim: Some(8 * d - 1),
        prelog_dim: Some(9 * d - 2),
        ..base(true, true, ((d - 1) * (d - 1)) as u64)
    }
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "ex32",
        description: "rational cubic in P2 with contacts (3,2),(0,1); a conic and a line off the divisor meet a ghost in D12; not tropically realizable",
        source: include_str!("../corpus/ex32.json"),
        expected: Expected {
            main_dim: Some(4),
            ..base(false, false, 0)
        },
    },
    CorpusEntry {
        name: "ex32-corrected",
        description: "the same graph with the line component inside D1; realizable with s = (0,0), (1,0), (2,1)",
        source: include_str!("../corpus/ex32-corrected.json"),
        expected: Expected {
            main_dim: Some(4),
            ..base(true, true, 0)
        },
    },
    CorpusEntry {
        name: "2lines-case1",
        description: "line in P2 through a ghost bubble at D12 carrying both marked points; line of depth {}",
        source: include_str!("../corpus/2lines-case1.json"),
        expected: Expected {
            obstruction_dim: Some(0),
            main_dim: Some(2),
            ..base(true, true, 0)
        },
    },
    CorpusEntry {
        name: "2lines-case2",
        description: "as 2lines-case1 with the line inside D1",
        source: include_str!("../corpus/2lines-case2.json"),
        expected: Expected {
            obstruction_dim: Some(0),
            main_dim: Some(2),
            ..base(true, true, 0)
        },
    },
    CorpusEntry {
        name: "2lines-case3",
        description: "as 2lines-case1 with the line inside D2",
        source: include_str!("../corpus/2lines-case3.json"),
        expected: Expected {
            obstruction_dim: Some(0),
            main_dim: Some(2),
            ..base(true, true, 0)
        },
    },
    CorpusEntry {
        name: "2lines-smooth-depth1",
        description: "line in P2 with smooth domain mapped into D1, contacts (1,0) and (0,1)",
        source: include_str!("../corpus/2lines-smooth-depth1.json"),
        expected: Expected {
            kernel_dim: Some(1),
            main_dim: Some(2),
            stratum_dim: Some(1),
            smooth_depth_dim: Some(1),
            ..base(true, true, 0)
        },
    },
    CorpusEntry {
        name: "ddecomp-d2",
        description: "two plane conics in the coordinate planes D1, D2 of P3 meeting in 2 points of D12",
        source: include_str!("../corpus/ddecomp-d2.json"),
        expected: plane_pair(2),
    },
    CorpusEntry {
        name: "ddecomp-d3",
        description: "two plane cubics in D1, D2 of P3 meeting in 3 points of D12; vertex genus (d-1)(d-2)/2",
        source: include_str!("../corpus/ddecomp-d3.json"),
        expected: plane_pair(3),
    },
    CorpusEntry {
        name: "ddecomp-d4",
        description: "two plane quartics in D1, D2 of P3 meeting in 4 points of D12",
        source: include_str!("../corpus/ddecomp-d4.json"),
        expected: plane_pair(4),
    },
    CorpusEntry {
        name: "ddecomp-d3-figure-genus",
        description: "ddecomp-d3 with vertex genus d(d-1)/2 as sometimes labeled; total genus d^2-1 = 8 disagrees with (d-1)^2 = 4 (flagged discrepancy)",
        source: include_str!("../corpus/ddecomp-d3-figure-genus.json"),
        expected: base(true, true, 8),
    },
    CorpusEntry {
        name: "d1rd22pt",
        description: "genus 1 conic in P3 relative to a smooth quadric: a line, two fibre covers and a line in D with contact 4",
        source: include_str!("../corpus/d1rd22pt.json"),
        expected: Expected {
            kernel_dim: Some(3),
            obstruction_dim: Some(0),
            component_count: Some(1),
            main_dim: Some(7),
            stratum_dim: Some(4),
            ..base(true, true, 1)
        },
    },
    CorpusEntry {
        name: "toricex",
        description: "two vertices of depth {1} and {2} joined by two edges of contact (-2,2); gluing space is two copies of C",
        source: include_str!("../corpus/toricex.json"),
        expected: Expected {
            kernel_dim: Some(1),
            obstruction_dim: Some(1),
            component_count: Some(2),
            ..base(true, true, 1)
        },
    },
    CorpusEntry {
        name: "labeled-curve",
        description: "nodal curve with component genera 0,2,0,1,0 and two marked points",
        source: include_str!("../corpus/labeled-curve.json"),
        expected: base(true, true, 4),
    },
    CorpusEntry {
        name: "single-vertex-genus3",
        description: "one smooth genus 3 component off the divisor",
        source: include_str!("../corpus/single-vertex-genus3.json"),
        expected: Expected {
            kernel_dim: Some(0),
            ..base(true, true, 3)
        },
    },
];

pub fn corpus_list() -> &'static [CorpusEntry] {
    CORPUS
}

pub fn corpus_entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}
