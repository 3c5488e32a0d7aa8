//! Enumeration of edge contact vectors compatible with fixed degree, depth
//! and leg data.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{DecoratedDualGraph, Depth, Edge, GeometryContext, Leg, Vertex};
use crate::tropical::tropical_feasibility;

/// A decorated graph with the edge contact vectors and leg contacts removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndecoratedGraph {
    pub divisors: Vec<String>,
    pub vertices: Vec<Vertex>,
    /// `(id, from, to, depth)`.
    pub edges: Vec<(String, usize, usize, Depth)>,
    /// `(id, at, index)`.
    pub legs: Vec<(String, usize, usize)>,
}

impl UndecoratedGraph {
    /// Strips the contact data from `g`, returning it together with the leg
    /// contact vectors.
    pub fn from_graph(g: &DecoratedDualGraph) -> (UndecoratedGraph, Vec<Vec<i64>>) {
        let u = UndecoratedGraph {
            divisors: g.divisors().to_vec(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| (e.id.clone(), e.from, e.to, e.depth.clone()))
                .collect(),
            legs: g.legs().iter().map(|l| (l.id.clone(), l.at, l.index)).collect(),
        };
        let contacts = g.legs().iter().map(|l| l.contact.clone()).collect();
        (u, contacts)
    }

    /// The decorated graph with the given edge and leg contact vectors.
    pub fn decorate(&self, edge_contacts: &[Vec<i64>], leg_contacts: &[Vec<i64>]) -> DecoratedDualGraph {
        let edges = self
            .edges
            .iter()
            .zip(edge_contacts)
            .map(|((id, from, to, depth), c)| Edge {
                id: id.clone(),
                from: *from,
                to: *to,
                depth: depth.clone(),
                contact: c.clone(),
                declared_reverse: None,
            })
            .collect();
        let legs = self
            .legs
            .iter()
            .zip(leg_contacts)
            .map(|((id, at, index), c)| Leg {
                id: id.clone(),
                at: *at,
                index: *index,
                contact: c.clone(),
            })
            .collect();
        DecoratedDualGraph::from_parts(self.divisors.clone(), self.vertices.clone(), edges, legs)
    }
}

/// All edge contact assignments satisfying the degree balance at every
/// vertex, the support condition and tropical realizability.
///
/// On a tree the contacts are forced by peeling leaves and no bound is used.
/// Otherwise every coordinate of every contact vector is restricted to
/// `[-bound, bound]`, so the answer is complete only within that box.
pub fn enumerate_edge_decorations(
    u: &UndecoratedGraph,
    ctx: &GeometryContext,
    leg_contacts: &[Vec<i64>],
    bound: u32,
) -> Result<Vec<Vec<Vec<i64>>>> {
    let s = u.divisors.len();
    let n = u.vertices.len();
    if n == 0 {
        return Ok(Vec::new());
    }

    // Required sum of outgoing edge contacts at each vertex.
    let mut required = Vec::with_capacity(n);
    for v in &u.vertices {
        let pairing = ctx.pairing(&v.degree)?;
        required.push(u.divisors.iter().map(|l| pairing.dot(l)).collect::<Vec<i64>>());
    }
    for ((_, at, _), c) in u.legs.iter().zip(leg_contacts) {
        for i in 0..s {
            required[*at][i] -= c[i];
        }
    }

    // Breadth-first spanning tree from the first vertex.
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = vec![0];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut tree = vec![false; u.edges.len()];
    while let Some(v) = queue.pop_front() {
        for (e, (_, a, b, _)) in u.edges.iter().enumerate() {
            let w = if *a == v {
                *b
            } else if *b == v {
                *a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                tree[e] = true;
                parent_edge[w] = Some(e);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Ok(Vec::new());
    }

    let chords: Vec<usize> = (0..u.edges.len()).filter(|&e| !tree[e]).collect();
    let free: Vec<(usize, usize)> = chords
        .iter()
        .flat_map(|&e| u.edges[e].3.iter().map(move |&i| (e, i)))
        .collect();
    let limit = i64::from(bound);
    let bounded = !chords.is_empty();

    let mut results = Vec::new();
    let mut values = vec![-limit; free.len()];
    loop {
        let mut contacts = vec![vec![0i64; s]; u.edges.len()];
        for (&(e, i), &x) in free.iter().zip(&values) {
            contacts[e][i] = x;
        }
        if let Some(full) = solve_tree(u, &required, &order, &parent_edge, contacts) {
            let within = !bounded || full.iter().flatten().all(|x| x.abs() <= limit);
            if within && tropical_feasibility(&u.decorate(&full, leg_contacts)).is_feasible() {
                results.push(full);
            }
        }
        if !advance(&mut values, limit) {
            break;
        }
    }
    Ok(results)
}

/// Next point of the box `[-limit, limit]^k` in lexicographic order.
fn advance(values: &mut [i64], limit: i64) -> bool {
    for x in values.iter_mut().rev() {
        if *x < limit {
            *x += 1;
            return true;
        }
        *x = -limit;
    }
    false
}

/// Determines the tree-edge contacts from the chord contacts by peeling
/// leaves; `None` if the support condition or the root balance fails.
fn solve_tree(
    u: &UndecoratedGraph,
    required: &[Vec<i64>],
    order: &[usize],
    parent_edge: &[Option<usize>],
    mut contacts: Vec<Vec<i64>>,
) -> Option<Vec<Vec<i64>>> {
    let s = u.divisors.len();
    let mut residual = required.to_vec();
    for (e, (_, a, b, _)) in u.edges.iter().enumerate() {
        if parent_edge.contains(&Some(e)) {
            continue;
        }
        for i in 0..s {
            residual[*a][i] -= contacts[e][i];
            residual[*b][i] += contacts[e][i];
        }
    }
    for &v in order.iter().rev() {
        let Some(e) = parent_edge[v] else {
            return residual[v].iter().all(|&x| x == 0).then_some(contacts);
        };
        let (_, a, b, depth) = &u.edges[e];
        let other = if *a == v { *b } else { *a };
        let sign = if *a == v { 1 } else { -1 };
        for i in 0..s {
            let c = sign * residual[v][i];
            if c != 0 && !depth.contains(&i) {
                return None;
            }
            contacts[e][i] = c;
            residual[other][i] += sign * c;
            residual[v][i] = 0;
        }
    }
    unreachable!("the root is the first vertex of the order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, Pairing};
    use std::collections::BTreeMap;

    fn context(entries: &[(&str, &[(&str, i64)])], divisors: &[&str]) -> GeometryContext {
        GeometryContext {
            dim_x: 2,
            divisors: divisors.iter().map(|s| s.to_string()).collect(),
            degrees: entries
                .iter()
                .map(|(tag, d)| {
                    (
                        tag.to_string(),
                        Pairing {
                            c1: 0,
                            divisor: d.iter().map(|(l, v)| (l.to_string(), *v)).collect::<BTreeMap<_, _>>(),
                        },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn path_has_a_unique_decoration() {
        let g = GraphBuilder::new(["1"])
            .vertex("a", 0, "A", &[])
            .vertex("b", 0, "B", &["1"])
            .vertex("c", 0, "C", &["1"])
            .edge("e1", "a", "b", &["1"], &[("1", 2)])
            .edge("e2", "b", "c", &["1"], &[("1", 1)])
            .leg("z", "c", 1, &[("1", 2)])
            .build()
            .unwrap();
        let ctx = context(&[("A", &[("1", 2)]), ("B", &[("1", -1)]), ("C", &[("1", 1)])], &["1"]);
        let (u, legs) = UndecoratedGraph::from_graph(&g);
        let found = enumerate_edge_decorations(&u, &ctx, &legs, 1).unwrap();
        assert_eq!(found, vec![vec![vec![2], vec![1]]]);
    }

    #[test]
    fn unbalanced_leaf_gives_nothing() {
        let g = GraphBuilder::new(["1"])
            .vertex("a", 0, "A", &[])
            .vertex("b", 0, "A", &[])
            .edge("e", "a", "b", &[], &[])
            .build()
            .unwrap();
        let ctx = context(&[("A", &[("1", 1)])], &["1"]);
        let (u, legs) = UndecoratedGraph::from_graph(&g);
        assert!(enumerate_edge_decorations(&u, &ctx, &legs, 5).unwrap().is_empty());
    }

    #[test]
    fn parallel_edges_are_searched_within_the_bound() {
        let g = GraphBuilder::new(["1", "2"])
            .vertex("v1", 0, "A1", &["1"])
            .vertex("v2", 0, "A2", &["2"])
            .edge("e1", "v1", "v2", &["1", "2"], &[("1", -2), ("2", 2)])
            .edge("e2", "v1", "v2", &["1", "2"], &[("1", -2), ("2", 2)])
            .build()
            .unwrap();
        let ctx = context(&[("A1", &[("1", -4), ("2", 4)]), ("A2", &[("1", 4), ("2", -4)])], &["1", "2"]);
        let (u, legs) = UndecoratedGraph::from_graph(&g);
        let found = enumerate_edge_decorations(&u, &ctx, &legs, 3).unwrap();
        assert!(found.contains(&vec![vec![-2, 2], vec![-2, 2]]));
        for f in &found {
            assert!(tropical_feasibility(&u.decorate(f, &legs)).is_feasible());
        }
    }
}
