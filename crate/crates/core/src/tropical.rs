//! Tropical realizability of a decorated graph.
//!
//! A witness assigns to each vertex a position `s_v` in the closed positive
//! orthant, strictly positive exactly in the directions of `I_v`, and to each
//! edge a positive length `lambda_e`, such that `s_head - s_tail = lambda_e s_e`
//! for the reference orientation of every edge.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::DecoratedDualGraph;
use crate::lattice::{domain_basis, DomainCoord};
use crate::lp::{self, Feasibility};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalWitness {
    /// `s[v][i]`, one row per vertex and one entry per divisor.
    pub s: Vec<Vec<BigRational>>,
    /// One length per edge.
    pub lambda: Vec<BigRational>,
}

impl TropicalWitness {
    pub fn scale(&self, c: &BigRational) -> TropicalWitness {
        TropicalWitness {
            s: self.s.iter().map(|row| row.iter().map(|x| x * c).collect()).collect(),
            lambda: self.lambda.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.s.iter().flatten().chain(&self.lambda).all(|x| x.is_integer())
    }
}

/// Farkas certificate of infeasibility: multipliers `u_{e,i}` of the edge
/// equations such that the combined linear form is nonnegative and nonzero on
/// every variable, so no strictly positive point satisfies all equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    /// `u[e][i]`, one row per edge and one entry per divisor.
    pub multipliers: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TropicalVerdict {
    Feasible(TropicalWitness),
    Infeasible(InfeasibilityCertificate),
}

impl TropicalVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, TropicalVerdict::Feasible(_))
    }

    pub fn witness(&self) -> Option<&TropicalWitness> {
        match self {
            TropicalVerdict::Feasible(w) => Some(w),
            TropicalVerdict::Infeasible(_) => None,
        }
    }
}

/// Edge equations over every divisor coordinate, as a dense rational matrix
/// whose columns follow the domain basis of the lattice map.
pub fn constraint_matrix(g: &DecoratedDualGraph) -> Vec<Vec<BigRational>> {
    let domain = domain_basis(g);
    let s = g.divisors().len();
    let mut rows = Vec::with_capacity(g.edges().len() * s);
    for (e, edge) in g.edges().iter().enumerate() {
        for i in 0..s {
            let row = domain
                .coords
                .iter()
                .map(|c| {
                    let v = match *c {
                        DomainCoord::Edge(f) if f == e => -edge.contact[i],
                        DomainCoord::Vertex(v, j) if j == i && !edge.is_loop() => {
                            i64::from(v == edge.to) - i64::from(v == edge.from)
                        }
                        _ => 0,
                    };
                    BigRational::from_integer(v.into())
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Decides whether a witness exists, returning one or a certificate.
///
/// Since the equations are homogeneous, a strictly positive solution exists
/// exactly when one with every coordinate at least one does; the latter is
/// found by phase one of the simplex method after the shift `x = 1 + y`.
pub fn tropical_feasibility(g: &DecoratedDualGraph) -> TropicalVerdict {
    let a = constraint_matrix(g);
    let n = domain_basis(g).len();
    let b: Vec<BigRational> = a.iter().map(|row| -row.iter().sum::<BigRational>()).collect();
    let outcome = if a.is_empty() {
        Feasibility::Feasible(vec![BigRational::zero(); n])
    } else {
        lp::nonnegative_solution(&a, &b)
    };
    match outcome {
        Feasibility::Feasible(y) => {
            let x: Vec<BigRational> = y.into_iter().map(|v| v + BigRational::one()).collect();
            debug_assert_eq!(x.len(), n);
            let mut w = witness_from_domain(g, &x);
            for (e, edge) in g.edges().iter().enumerate() {
                if edge.contact.iter().all(|&c| c == 0) {
                    w.lambda[e] = BigRational::one();
                }
            }
            TropicalVerdict::Feasible(w)
        }
        Feasibility::Infeasible(u) => {
            let s = g.divisors().len();
            TropicalVerdict::Infeasible(InfeasibilityCertificate {
                multipliers: u.chunks(s.max(1)).take(g.edges().len()).map(<[_]>::to_vec).collect(),
            })
        }
    }
}

/// Reads a domain vector `((lambda_e), (s_{v,i}))` as a witness.
pub fn witness_from_domain(g: &DecoratedDualGraph, x: &[BigRational]) -> TropicalWitness {
    let domain = domain_basis(g);
    let mut w = TropicalWitness {
        s: vec![vec![BigRational::zero(); g.divisors().len()]; g.vertices().len()],
        lambda: vec![BigRational::zero(); g.edges().len()],
    };
    for (c, value) in domain.coords.iter().zip(x) {
        match *c {
            DomainCoord::Edge(e) => w.lambda[e] = value.clone(),
            DomainCoord::Vertex(v, i) => w.s[v][i] = value.clone(),
        }
    }
    w
}

/// Whether the certificate proves infeasibility of `g`.
pub fn verify_certificate(g: &DecoratedDualGraph, cert: &InfeasibilityCertificate) -> bool {
    let s = g.divisors().len();
    if cert.multipliers.len() != g.edges().len() || cert.multipliers.iter().any(|r| r.len() != s) {
        return false;
    }
    let u: Vec<BigRational> = cert.multipliers.iter().flatten().cloned().collect();
    let form = lp::left_product(&u, &constraint_matrix(g));
    if form.is_empty() {
        return false;
    }
    form.iter().all(|x| !x.is_negative()) && form.iter().any(|x| x.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessViolation {
    /// `s_{v,i}` is not positive although `i` is in `I_v`.
    NotPositive { vertex: String, divisor: String, value: BigRational },
    /// `s_{v,i}` is nonzero although `i` is outside `I_v`.
    OutsideDepth { vertex: String, divisor: String, value: BigRational },
    LengthNotPositive { edge: String, value: BigRational },
    /// `s_head - s_tail != lambda_e s_e` in coordinate `i`.
    Balance { edge: String, divisor: String, difference: BigRational, expected: BigRational },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessViolation::NotPositive { vertex, divisor, value } => {
                write!(f, "s[{vertex}][{divisor}] = {value} must be positive")
            }
            WitnessViolation::OutsideDepth { vertex, divisor, value } => {
                write!(f, "s[{vertex}][{divisor}] = {value} must vanish outside the depth")
            }
            WitnessViolation::LengthNotPositive { edge, value } => {
                write!(f, "lambda[{edge}] = {value} must be positive")
            }
            WitnessViolation::Balance { edge, divisor, difference, expected } => {
                write!(f, "edge {edge} divisor {divisor}: head minus tail is {difference}, expected {expected}")
            }
        }
    }
}

/// Exact check of a witness; `Ok(empty)` means it verifies.
pub fn verify_witness(g: &DecoratedDualGraph, w: &TropicalWitness) -> Result<Vec<WitnessViolation>> {
    let s = g.divisors().len();
    if w.s.len() != g.vertices().len() || w.s.iter().any(|r| r.len() != s) || w.lambda.len() != g.edges().len() {
        return Err(Error::Structural("witness does not match the graph's vertices, edges or divisors".into()));
    }
    let mut out = Vec::new();
    for (v, vertex) in g.vertices().iter().enumerate() {
        for (i, label) in g.divisors().iter().enumerate() {
            let value = &w.s[v][i];
            if vertex.depth.contains(&i) {
                if !value.is_positive() {
                    out.push(WitnessViolation::NotPositive {
                        vertex: vertex.id.clone(),
                        divisor: label.clone(),
                        value: value.clone(),
                    });
                }
            } else if !value.is_zero() {
                out.push(WitnessViolation::OutsideDepth {
                    vertex: vertex.id.clone(),
                    divisor: label.clone(),
                    value: value.clone(),
                });
            }
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let lambda = &w.lambda[e];
        if !lambda.is_positive() {
            out.push(WitnessViolation::LengthNotPositive {
                edge: edge.id.clone(),
                value: lambda.clone(),
            });
        }
        for (i, label) in g.divisors().iter().enumerate() {
            let difference = &w.s[edge.to][i] - &w.s[edge.from][i];
            let expected = lambda * BigRational::from_integer(edge.contact[i].into());
            if difference != expected {
                out.push(WitnessViolation::Balance {
                    edge: edge.id.clone(),
                    divisor: label.clone(),
                    difference,
                    expected,
                });
            }
        }
    }
    Ok(out)
}

/// Scales a witness by the least common multiple of its denominators.
pub fn integralize_witness(w: &TropicalWitness) -> TropicalWitness {
    let l = w
        .s
        .iter()
        .flatten()
        .chain(&w.lambda)
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    w.scale(&BigRational::from_integer(l))
}
