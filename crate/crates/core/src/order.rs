//! Vertex levels for graphs over a single smooth divisor.
//!
//! An edge with zero contact makes its endpoints equivalent; an edge with
//! positive contact from `v` to `w` makes `v` strictly smaller than `w`.
//! Levels are assigned by repeatedly removing the minimal classes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::DecoratedDualGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderFailure {
    /// Parallel edges between two vertices disagree on how they compare.
    IllDefined { first: String, second: String, edges: Vec<String> },
    /// The strict relation is cyclic, possibly through equivalent vertices.
    Cycle { vertices: Vec<String> },
    /// A vertex off the divisor is equivalent to, or above, a vertex on it.
    DepthConflict { off_divisor: String, other: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialOrderResult {
    /// `levels[v]`, aligned with the graph's vertices.
    Levels(Vec<u32>),
    Failure(OrderFailure),
}

impl PartialOrderResult {
    pub fn is_success(&self) -> bool {
        matches!(self, PartialOrderResult::Levels(_))
    }

    pub fn levels(&self) -> Option<&[u32]> {
        match self {
            PartialOrderResult::Levels(l) => Some(l),
            PartialOrderResult::Failure(_) => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    Equivalent,
    /// The smaller vertex of the ordered pair is the first one.
    Less,
    Greater,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn smooth_divisor_partial_order(g: &DecoratedDualGraph) -> Result<PartialOrderResult> {
    if g.divisors().len() != 1 {
        return Err(Error::Unsupported(format!(
            "levels need exactly one divisor, the graph has {}",
            g.divisors().len()
        )));
    }
    let vertices = g.vertices();
    let id = |v: usize| vertices[v].id.clone();
    let fail = |f: OrderFailure| Ok(PartialOrderResult::Failure(f));

    let mut pairs: BTreeMap<(usize, usize), (Relation, Vec<String>)> = BTreeMap::new();
    for edge in g.edges() {
        let s = edge.contact[0];
        if edge.is_loop() {
            if s != 0 {
                return fail(OrderFailure::Cycle { vertices: vec![id(edge.from)] });
            }
            continue;
        }
        let (a, b) = (edge.from.min(edge.to), edge.from.max(edge.to));
        let forward = if edge.from == a { s } else { -s };
        let rel = match forward.signum() {
            0 => Relation::Equivalent,
            1 => Relation::Less,
            _ => Relation::Greater,
        };
        let entry = pairs.entry((a, b)).or_insert((rel, Vec::new()));
        entry.1.push(edge.id.clone());
        if entry.0 != rel {
            return fail(OrderFailure::IllDefined {
                first: id(a),
                second: id(b),
                edges: entry.1.clone(),
            });
        }
    }

    let n = vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (&(a, b), (rel, _)) in &pairs {
        if *rel == Relation::Equivalent {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let class: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();

    let on_divisor = |v: usize| !vertices[v].depth.is_empty();
    for v in 0..n {
        let r = class[v];
        if on_divisor(v) != on_divisor(r) {
            let (off, other) = if on_divisor(v) { (r, v) } else { (v, r) };
            return fail(OrderFailure::DepthConflict {
                off_divisor: id(off),
                other: id(other),
            });
        }
    }

    // Strict arcs between classes, smaller class first.
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (&(a, b), (rel, _)) in &pairs {
        let (lo, hi) = match rel {
            Relation::Equivalent => continue,
            Relation::Less => (a, b),
            Relation::Greater => (b, a),
        };
        if class[lo] == class[hi] {
            return fail(OrderFailure::Cycle { vertices: vec![id(lo), id(hi)] });
        }
        if !on_divisor(hi) {
            return fail(OrderFailure::DepthConflict {
                off_divisor: id(hi),
                other: id(lo),
            });
        }
        arcs.push((class[lo], class[hi]));
    }

    let mut level: Vec<Option<u32>> = vec![None; n];
    for v in 0..n {
        if !on_divisor(v) {
            level[class[v]] = Some(0);
        }
    }
    let mut current = 0;
    loop {
        let pending: Vec<usize> = (0..n).filter(|&c| class[c] == c && level[c].is_none()).collect();
        if pending.is_empty() {
            break;
        }
        current += 1;
        let minimal: Vec<usize> = pending
            .iter()
            .copied()
            .filter(|&c| !arcs.iter().any(|&(lo, hi)| hi == c && level[lo].is_none()))
            .collect();
        if minimal.is_empty() {
            return fail(OrderFailure::Cycle {
                vertices: find_cycle(&pending, &arcs, &level).into_iter().map(id).collect(),
            });
        }
        for c in minimal {
            level[c] = Some(current);
        }
    }
    Ok(PartialOrderResult::Levels((0..n).map(|v| level[class[v]].unwrap_or(0)).collect()))
}

/// Walks backwards along arcs among unassigned classes until a class repeats.
fn find_cycle(pending: &[usize], arcs: &[(usize, usize)], level: &[Option<u32>]) -> Vec<usize> {
    let mut path = vec![pending[0]];
    loop {
        let c = *path.last().expect("nonempty path");
        let &(prev, _) = arcs
            .iter()
            .find(|&&(lo, hi)| hi == c && level[lo].is_none())
            .expect("every pending class has a pending predecessor");
        if let Some(start) = path.iter().position(|&x| x == prev) {
            let mut cycle: Vec<usize> = path[start..].to_vec();
            cycle.reverse();
            return cycle;
        }
        path.push(prev);
    }
}
