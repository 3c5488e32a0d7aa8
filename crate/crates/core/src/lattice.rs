//! The lattice map of a decorated graph and its exact invariants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::DecoratedDualGraph;
use crate::matrix::{self, IntegerMatrix, SmithNormalForm};

/// A coordinate of the domain lattice: an edge length or a vertex position
/// in one divisor direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainCoord {
    Edge(usize),
    Vertex(usize, usize),
}

/// A coordinate of the target lattice: edge `e`, divisor `i` with `i` in `I_e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetCoord {
    pub edge: usize,
    pub divisor: usize,
}

/// Ordered coordinates of a free module together with printable labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedBasis<C> {
    pub coords: Vec<C>,
    pub labels: Vec<String>,
}

impl<C: PartialEq> IndexedBasis<C> {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn position(&self, c: &C) -> Option<usize> {
        self.coords.iter().position(|x| x == c)
    }
}

/// Domain coordinates: edges first, then `(vertex, i)` for `i` in `I_v`.
pub fn domain_basis(g: &DecoratedDualGraph) -> IndexedBasis<DomainCoord> {
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        coords.push(DomainCoord::Edge(e));
        labels.push(format!("e:{}", edge.id));
    }
    for (v, vertex) in g.vertices().iter().enumerate() {
        for &i in &vertex.depth {
            coords.push(DomainCoord::Vertex(v, i));
            labels.push(format!("v:{}:{}", vertex.id, g.divisors()[i]));
        }
    }
    IndexedBasis { coords, labels }
}

/// Target coordinates `(e, i)` for `i` in `I_e`.
pub fn target_basis(g: &DecoratedDualGraph) -> IndexedBasis<TargetCoord> {
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        for &i in &edge.depth {
            coords.push(TargetCoord { edge: e, divisor: i });
            labels.push(format!("{}:{}", edge.id, g.divisors()[i]));
        }
    }
    IndexedBasis { coords, labels }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rho {
    pub domain: IndexedBasis<DomainCoord>,
    pub target: IndexedBasis<TargetCoord>,
    /// `target.len() x domain.len()`.
    pub matrix: IntegerMatrix,
}

pub fn build_rho(g: &DecoratedDualGraph) -> Rho {
    let domain = domain_basis(g);
    let target = target_basis(g);
    let mut matrix = IntegerMatrix::zeros(target.len(), domain.len());
    for (row, t) in target.coords.iter().enumerate() {
        let edge = &g.edges()[t.edge];
        for (col, d) in domain.coords.iter().enumerate() {
            let value = match *d {
                DomainCoord::Edge(e) if e == t.edge => edge.contact[t.divisor],
                DomainCoord::Edge(_) => 0,
                DomainCoord::Vertex(v, i) if i == t.divisor && !edge.is_loop() => {
                    if v == edge.from {
                        1
                    } else if v == edge.to {
                        -1
                    } else {
                        0
                    }
                }
                DomainCoord::Vertex(..) => 0,
            };
            matrix[(row, col)] = BigInt::from(value);
        }
    }
    Rho { domain, target, matrix }
}

#[derive(Clone, Debug)]
pub struct LatticeSummary {
    pub rho: Rho,
    /// Basis of the kernel, one row per generator, in Hermite normal form.
    pub kernel_basis: IntegerMatrix,
    pub image_rank: usize,
    pub cokernel_free_rank: usize,
    /// Elementary divisors of the lattice map that exceed one.
    pub cokernel_torsion: Vec<BigInt>,
    /// Complex dimension of the obstruction torus.
    pub obstruction_dim: usize,
    pub snf: SmithNormalForm,
}

impl LatticeSummary {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.rows()
    }

    pub fn component_count(&self) -> BigInt {
        self.cokernel_torsion.iter().product()
    }
}

pub fn lattice_summary(g: &DecoratedDualGraph) -> LatticeSummary {
    let rho = build_rho(g);
    let snf = matrix::smith_normal_form(&rho.matrix);
    let kernel_basis = matrix::integer_kernel(&rho.matrix);
    let image_rank = snf.rank;
    let cokernel_free_rank = rho.target.len() - image_rank;
    LatticeSummary {
        kernel_basis,
        image_rank,
        cokernel_free_rank,
        cokernel_torsion: snf.torsion(),
        obstruction_dim: cokernel_free_rank,
        snf,
        rho,
    }
}

/// Number of copies of the toric variety making up the gluing space: the
/// order of the torsion of the cokernel of the lattice map.
pub fn component_count(g: &DecoratedDualGraph) -> BigInt {
    let snf = matrix::smith_normal_form(&build_rho(g).matrix);
    snf.torsion().iter().product::<BigInt>().max(BigInt::one())
}

/// Obstruction dimension from the degree count
/// `sum_e (|I_e| - 1) - sum_v |I_v| + dim K`.
pub fn obstruction_dim_by_count(g: &DecoratedDualGraph, kernel_dim: usize) -> i64 {
    let edges: i64 = g.edges().iter().map(|e| e.depth.len() as i64 - 1).sum();
    let vertices: i64 = g.vertices().iter().map(|v| v.depth.len() as i64).sum();
    edges - vertices + kernel_dim as i64
}

/// Basis of the characters of the target that vanish on the image: the
/// integer left kernel of the lattice map, which is saturated.
pub fn annihilator_basis(rho: &Rho) -> IntegerMatrix {
    matrix::integer_kernel(&rho.matrix.transpose())
}

/// Basis of the annihilator of the kernel in the dual of the domain.
pub fn kernel_perp_basis(summary: &LatticeSummary) -> IntegerMatrix {
    let n = summary.rho.domain.len();
    if summary.kernel_basis.rows() == 0 {
        return IntegerMatrix::identity(n);
    }
    matrix::integer_kernel(&summary.kernel_basis)
}

/// Generators of the image of the dual map: the rows of the lattice map.
pub fn dual_image_generators(rho: &Rho) -> IntegerMatrix {
    rho.matrix.clone()
}

/// A violated kernel relation `s_head - s_tail = lambda_e s_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelRelationFailure {
    pub edge: String,
    pub divisor: String,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl fmt::Display for KernelRelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} divisor {}: {} != {}", self.edge, self.divisor, self.lhs, self.rhs)
    }
}

/// Reads `x` as `((lambda_e), (s_v))` and checks every edge relation in
/// every divisor coordinate, with `s_{v,i} = 0` for `i` outside `I_v`.
pub fn check_kernel_relations(g: &DecoratedDualGraph, x: &[BigInt]) -> Vec<KernelRelationFailure> {
    let domain = domain_basis(g);
    let s = |v: usize, i: usize| -> BigInt {
        domain
            .position(&DomainCoord::Vertex(v, i))
            .map_or_else(BigInt::zero, |p| x[p].clone())
    };
    let mut failures = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let lambda = &x[domain.position(&DomainCoord::Edge(e)).expect("edge coordinate")];
        for (i, label) in g.divisors().iter().enumerate() {
            let lhs = s(edge.to, i) - s(edge.from, i);
            let rhs = lambda * BigInt::from(edge.contact[i]);
            if lhs != rhs {
                failures.push(KernelRelationFailure {
                    edge: edge.id.clone(),
                    divisor: label.clone(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn toricex() -> DecoratedDualGraph {
        GraphBuilder::new(["1", "2"])
            .vertex("v1", 0, "A1", &["1"])
            .vertex("v2", 0, "A2", &["2"])
            .edge("e1", "v1", "v2", &["1", "2"], &[("1", -2), ("2", 2)])
            .edge("e2", "v1", "v2", &["1", "2"], &[("1", -2), ("2", 2)])
            .build()
            .unwrap()
    }

    fn int(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn toricex_columns() {
        let rho = build_rho(&toricex());
        assert_eq!(rho.domain.labels, ["e:e1", "e:e2", "v:v1:1", "v:v2:2"]);
        assert_eq!(rho.target.labels, ["e1:1", "e1:2", "e2:1", "e2:2"]);
        assert_eq!(rho.matrix.column(0), int(&[-2, 2, 0, 0]));
        assert_eq!(rho.matrix.column(2), int(&[1, 0, 1, 0]));
        assert_eq!(rho.matrix.column(3), int(&[0, -1, 0, -1]));
    }

    #[test]
    fn toricex_summary() {
        let g = toricex();
        let s = lattice_summary(&g);
        assert_eq!(s.kernel_basis, IntegerMatrix::from_i64(&[&[1, 1, 2, 2]]));
        assert_eq!(s.cokernel_torsion, int(&[2]));
        assert_eq!(s.image_rank, 3);
        assert_eq!(s.obstruction_dim, 1);
        assert_eq!(component_count(&g), BigInt::from(2));
        assert!(check_kernel_relations(&g, s.kernel_basis.row(0)).is_empty());
    }

    #[test]
    fn classical_graph_has_zero_target() {
        let g = GraphBuilder::new(["1"])
            .vertex("a", 0, "A", &[])
            .vertex("b", 1, "A", &[])
            .edge("e", "a", "b", &[], &[])
            .build()
            .unwrap();
        let s = lattice_summary(&g);
        assert_eq!(s.rho.matrix.rows(), 0);
        assert_eq!(s.kernel_dim(), 1);
        assert_eq!(s.obstruction_dim, 0);
        assert_eq!(component_count(&g), BigInt::one());
    }

    #[test]
    fn relation_failures_are_reported() {
        let g = toricex();
        assert_eq!(check_kernel_relations(&g, &int(&[1, 1, 2, 1])).len(), 2);
    }
}
