//! Random graph families and independent reference computations.
#![allow(dead_code)]

use std::collections::BTreeMap;

use logcone::graph::Pairing;
use logcone::{DecoratedDualGraph, GeometryContext, GraphBuilder};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct Family {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Exact number of divisor labels, or a random count in `1..=3`.
    pub divisors: Option<usize>,
    pub max_entry: i64,
    pub tree: bool,
    pub genus_zero: bool,
    /// `Some(true)` forces a realizable construction, `Some(false)` random contacts.
    pub realizable: Option<bool>,
}

impl Default for Family {
    fn default() -> Self {
        Family {
            max_vertices: 6,
            max_edges: 8,
            divisors: None,
            max_entry: 5,
            tree: false,
            genus_zero: false,
            realizable: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub seed: u64,
    pub graph: DecoratedDualGraph,
    pub ctx: GeometryContext,
    pub realizable_by_construction: bool,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected graph satisfying every axiom except possibly tropical
/// realizability, with a context that makes the degrees balance.
///
/// Realizable graphs come from integer vertex positions: depth is the support
/// of the position and every contact is a difference of positions divided by
/// an edge length.
pub fn random_case(seed: u64, fam: Family) -> Case {
    let mut r = rng(seed);
    let s = fam.divisors.unwrap_or_else(|| r.gen_range(1..=3));
    let labels: Vec<String> = (1..=s).map(|i| i.to_string()).collect();
    let n = r.gen_range(1..=fam.max_vertices);
    let realizable = fam.realizable.unwrap_or_else(|| r.gen_bool(0.5));
    let half = fam.max_entry.min(4);

    let positions: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..s).map(|_| if r.gen_bool(0.5) { 0 } else { r.gen_range(1..=half) }).collect())
        .collect();
    let depths: Vec<Vec<usize>> = if realizable {
        positions.iter().map(|p| (0..s).filter(|&i| p[i] > 0).collect()).collect()
    } else {
        (0..n).map(|_| (0..s).filter(|_| r.gen_bool(0.5)).collect()).collect()
    };

    let mut ends: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    if !fam.tree {
        let extra = r.gen_range(0..=fam.max_edges - ends.len().min(fam.max_edges));
        for _ in 0..extra {
            ends.push((r.gen_range(0..n), r.gen_range(0..n)));
        }
    }
    let ends: Vec<(usize, usize)> = ends.into_iter().map(|(a, b)| if r.gen_bool(0.5) { (b, a) } else { (a, b) }).collect();

    let mut contacts = Vec::new();
    for &(a, b) in &ends {
        let depth: Vec<usize> = union(&depths[a], &depths[b]);
        let c: Vec<i64> = if realizable {
            let diff: Vec<i64> = (0..s).map(|i| positions[b][i] - positions[a][i]).collect();
            let g = diff.iter().fold(0i64, |g, x| g.gcd(x));
            let lengths: Vec<i64> = (1..=3).filter(|l| g == 0 || g % l == 0).collect();
            let l = *lengths.choose(&mut r).unwrap();
            diff.iter().map(|x| x / l).collect()
        } else {
            (0..s)
                .map(|i| if depth.contains(&i) { r.gen_range(-fam.max_entry..=fam.max_entry) } else { 0 })
                .collect()
        };
        contacts.push(c);
    }

    let k = r.gen_range(0..=3usize);
    let mut indices: Vec<usize> = (1..=k).collect();
    indices.shuffle(&mut r);
    let legs: Vec<(usize, usize, Vec<i64>)> = indices
        .into_iter()
        .map(|idx| (r.gen_range(0..n), idx, (0..s).map(|_| r.gen_range(0..=3)).collect()))
        .collect();

    let mut b = GraphBuilder::new(labels.clone());
    for v in 0..n {
        let genus = if fam.genus_zero { 0 } else { r.gen_range(0..=2) };
        let depth: Vec<&str> = depths[v].iter().map(|&i| labels[i].as_str()).collect();
        b = b.vertex(&format!("v{v}"), genus, &format!("A{v}"), &depth);
    }
    for (e, (&(a, bb), c)) in ends.iter().zip(&contacts).enumerate() {
        let depth: Vec<&str> = union(&depths[a], &depths[bb]).iter().map(|&i| labels[i].as_str()).collect();
        let contact: Vec<(&str, i64)> = labels.iter().map(String::as_str).zip(c.iter().copied()).collect();
        b = b.edge(&format!("e{e}"), &format!("v{a}"), &format!("v{bb}"), &depth, &contact);
    }
    for (l, (at, idx, c)) in legs.iter().enumerate() {
        let contact: Vec<(&str, i64)> = labels.iter().map(String::as_str).zip(c.iter().copied()).collect();
        b = b.leg(&format!("z{l}"), &format!("v{at}"), *idx, &contact);
    }
    let graph = b.build().expect("generated graph is well formed");

    let sums = logcone::graph::outgoing_contact_sums(&graph);
    let mut degrees = BTreeMap::new();
    for (v, sum) in graph.vertices().iter().zip(&sums) {
        let divisor: BTreeMap<String, i64> = labels.iter().cloned().zip(sum.iter().copied()).collect();
        let total: i64 = sum.iter().sum();
        degrees.insert(v.degree.clone(), Pairing { c1: total + r.gen_range(0..=6), divisor });
    }
    let ctx = GeometryContext {
        dim_x: r.gen_range(2..=4).max(s as u32),
        divisors: labels,
        degrees,
    };
    Case {
        seed,
        graph,
        ctx,
        realizable_by_construction: realizable,
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Reverses each edge independently with probability one half.
pub fn random_reorientation(g: &DecoratedDualGraph, seed: u64) -> DecoratedDualGraph {
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out = g.clone();
    for e in 0..g.edges().len() {
        if r.gen_bool(0.5) {
            out = out.with_edge_reversed(e);
        }
    }
    out
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rank_oracle(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over the rationals.
pub fn det_oracle(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Integer kernel by unimodular column operations: bring `a` to column
/// echelon form `a u`, then the trailing columns of `u` span the kernel.
pub fn kernel_oracle(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for row in u.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let swap = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in m.iter_mut().chain(u.iter_mut()) {
            row.swap(a, b);
        }
    };
    let mut pivot = 0;
    for r in 0..m.len() {
        if pivot == cols {
            break;
        }
        loop {
            // Smallest nonzero entry of row r among the unprocessed columns.
            let best = (pivot..cols).filter(|&c| !m[r][c].is_zero()).min_by_key(|&c| m[r][c].abs());
            let Some(best) = best else { break };
            swap(&mut m, &mut u, pivot, best);
            let mut done = true;
            for c in pivot + 1..cols {
                if !m[r][c].is_zero() {
                    let q = m[r][c].div_floor(&m[r][pivot]);
                    col_op(&mut m, &mut u, c, pivot, &q);
                    done &= m[r][c].is_zero();
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    (pivot..cols).map(|c| u.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Basis of the row lattice by Euclidean row reduction.
pub fn row_basis_oracle(gens: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = gens.to_vec();
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let best = (0..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].abs());
            let Some(p) = best else { break };
            let pivot = m[p].clone();
            let mut clean = true;
            for (i, row) in m.iter_mut().enumerate() {
                if i != p && !row[c].is_zero() {
                    let q = row[c].div_floor(&pivot[c]);
                    for j in 0..cols {
                        let t = &q * &pivot[j];
                        row[j] -= t;
                    }
                    clean &= row[c].is_zero();
                }
            }
            if clean {
                out.push(m.remove(p));
                break;
            }
        }
    }
    out
}

/// `[sup : sub]` when `sub` lies in `sup` with the same rank. `sup` must be a
/// basis. Solves `B_sub = X B_sup` over the rationals and returns `|det X|`.
pub fn index_oracle(sub_gens: &[Vec<BigInt>], sup_basis: &[Vec<BigInt>], cols: usize) -> Option<BigInt> {
    let sub = row_basis_oracle(sub_gens, cols);
    if sub.len() != sup_basis.len() {
        return None;
    }
    if sub.is_empty() {
        return Some(BigInt::one());
    }
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let gram = |a: &[Vec<BigInt>], b: &[Vec<BigInt>]| -> Vec<Vec<BigRational>> {
        a.iter()
            .map(|x| b.iter().map(|y| q(&x.iter().zip(y).map(|(p, r)| p * r).sum::<BigInt>())).collect())
            .collect()
    };
    let g_sup = gram(sup_basis, sup_basis);
    let g_mix = gram(&sub, sup_basis);
    // X = G_mix G_sup^{-1}; integrality of X is containment.
    let x = solve_right(&g_mix, &g_sup)?;
    if x.iter().flatten().any(|v| !v.is_integer()) {
        return None;
    }
    // Recheck X B_sup = B_sub exactly.
    for (xr, sr) in x.iter().zip(&sub) {
        for j in 0..cols {
            let v: BigRational = xr.iter().zip(sup_basis).map(|(a, b)| a * q(&b[j])).sum();
            if v != q(&sr[j]) {
                return None;
            }
        }
    }
    Some(det_oracle(&x).abs().to_integer())
}

/// `a m^{-1}` for invertible `m`.
fn solve_right(a: &[Vec<BigRational>], m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(p, c);
        let inv = aug[c][c].recip();
        for v in aug[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &aug[c][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    let inverse: Vec<Vec<BigRational>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
    Some(
        a.iter()
            .map(|row| (0..n).map(|j| row.iter().zip(&inverse).map(|(x, inv)| x * &inv[j]).sum()).collect())
            .collect(),
    )
}

/// Genus from first principles: vertex genera plus the cycle rank counted by
/// union-find.
pub fn genus_oracle(g: &DecoratedDualGraph) -> u64 {
    let n = g.vertices().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cycles = 0u64;
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a == b {
            cycles += 1;
        } else {
            parent[a] = b;
        }
    }
    g.vertices().iter().map(|v| u64::from(v.genus)).sum::<u64>() + cycles
}

/// Tropical feasibility for a single divisor as a system of difference
/// constraints, decided by Bellman-Ford.
///
/// Off-divisor vertices sit at 0, on-divisor vertices at least 1; an edge of
/// zero contact forces equality and a nonzero contact forces a gap of at
/// least 1 in its direction.
pub fn smooth_feasibility_oracle(g: &DecoratedDualGraph) -> bool {
    assert_eq!(g.divisors().len(), 1);
    let n = g.vertices().len();
    let origin = n;
    // x_b - x_a <= w as (a, b, w).
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for (v, vert) in g.vertices().iter().enumerate() {
        if vert.depth.is_empty() {
            arcs.push((origin, v, 0));
            arcs.push((v, origin, 0));
        } else {
            arcs.push((v, origin, -1));
        }
    }
    for e in g.edges() {
        let c = e.contact[0];
        let (lo, hi) = match c.signum() {
            0 => {
                arcs.push((e.from, e.to, 0));
                arcs.push((e.to, e.from, 0));
                continue;
            }
            1 => (e.from, e.to),
            _ => (e.to, e.from),
        };
        if lo == hi {
            return false;
        }
        arcs.push((hi, lo, -1));
    }
    let mut dist = vec![0i64; n + 1];
    for _ in 0..=n + 1 {
        let mut changed = false;
        for &(a, b, w) in &arcs {
            if dist[a] + w < dist[b] {
                dist[b] = dist[a] + w;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

/// All edge contact assignments in the box `[-bound, bound]` supported on the
/// edge depths whose degrees balance against `ctx`.
pub fn balanced_decorations_oracle(g: &DecoratedDualGraph, ctx: &GeometryContext, bound: i64) -> Vec<Vec<Vec<i64>>> {
    let s = g.divisors().len();
    let slots: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, edge)| edge.depth.iter().map(move |&i| (e, i)))
        .collect();
    let mut required: Vec<Vec<i64>> = g
        .vertices()
        .iter()
        .map(|v| {
            let p = ctx.pairing(&v.degree).unwrap();
            g.divisors().iter().map(|l| p.dot(l)).collect()
        })
        .collect();
    for l in g.legs() {
        for i in 0..s {
            required[l.at][i] -= l.contact[i];
        }
    }
    let mut out = Vec::new();
    let mut values = vec![-bound; slots.len()];
    loop {
        let mut contacts = vec![vec![0i64; s]; g.edges().len()];
        for (&(e, i), &x) in slots.iter().zip(&values) {
            contacts[e][i] = x;
        }
        let mut sums = vec![vec![0i64; s]; g.vertices().len()];
        for (e, edge) in g.edges().iter().enumerate() {
            for i in 0..s {
                sums[edge.from][i] += contacts[e][i];
                sums[edge.to][i] -= contacts[e][i];
            }
        }
        if sums == required {
            out.push(contacts);
        }
        let mut pos = 0;
        loop {
            if pos == values.len() {
                return out;
            }
            if values[pos] < bound {
                values[pos] += 1;
                break;
            }
            values[pos] = -bound;
            pos += 1;
        }
    }
}
