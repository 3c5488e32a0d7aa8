//! Binomial descriptions of the gluing space and of the toric variety of the
//! cone, and the numerical obstruction test.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::DecoratedDualGraph;
use crate::lattice::{self, DomainCoord, IndexedBasis, LatticeSummary, Rho};
use crate::matrix::{hermite_normal_form, IntegerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    /// One equation per edge and divisor in the edge depth.
    Gluing,
    /// Binomials of a lattice basis of the annihilator of the kernel. The
    /// toric ideal is the saturation of the ideal they generate.
    LatticeBasis,
    /// A lattice basis after eliminating variables by monomial substitution.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialSystem {
    pub kind: SystemKind,
    pub variables: Vec<String>,
    /// Each exponent vector `m` stands for `x^{m+} - x^{m-}`.
    pub binomials: Vec<Vec<BigInt>>,
}

impl BinomialSystem {
    fn monomial(&self, m: &[BigInt], positive: bool) -> String {
        let factors: Vec<String> = m
            .iter()
            .zip(&self.variables)
            .filter_map(|(e, x)| {
                let e = if positive { e.clone() } else { -e };
                if !e.is_positive() {
                    None
                } else if e == BigInt::from(1) {
                    Some(x.clone())
                } else {
                    Some(format!("{x}^{e}"))
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join(" * ")
        }
    }

    /// `x^{m+} = x^{m-}` in readable form.
    pub fn equation(&self, m: &[BigInt]) -> String {
        format!("{} = {}", self.monomial(m, true), self.monomial(m, false))
    }

    pub fn equations(&self) -> Vec<String> {
        self.binomials.iter().map(|m| self.equation(m)).collect()
    }

    /// One line per binomial: the equation, then the two exponent vectors.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.variables.join(" "));
        for m in &self.binomials {
            let plus: Vec<String> = m.iter().map(|e| e.max(&BigInt::zero()).to_string()).collect();
            let minus: Vec<String> = m.iter().map(|e| (-e).max(BigInt::zero()).to_string()).collect();
            out.push_str(&format!("{} : {} | {}\n", self.equation(m), plus.join(" "), minus.join(" ")));
        }
        out
    }

    /// Exponent vectors as the rows of a matrix.
    pub fn matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.variables.len(), self.binomials.clone())
    }
}

/// Variable names `ε_e` for edges and `t_v[i]` for vertex coordinates.
pub fn variable_names(g: &DecoratedDualGraph, domain: &IndexedBasis<DomainCoord>) -> Vec<String> {
    domain
        .coords
        .iter()
        .map(|c| match *c {
            DomainCoord::Edge(e) => format!("ε_{}", g.edges()[e].id),
            DomainCoord::Vertex(v, i) => format!("t_{}[{}]", g.vertices()[v].id, g.divisors()[i]),
        })
        .collect()
}

/// `ε_e^{s_e,i} t_{v,i} = t_{v',i}` for every edge and every `i` in `I_e`,
/// written for the orientation in which the contact is nonnegative, with
/// `t_{v,i} = 1` whenever `i` lies outside `I_v`.
pub fn gluing_equations(g: &DecoratedDualGraph) -> BinomialSystem {
    let rho = lattice::build_rho(g);
    let binomials = rho
        .target
        .coords
        .iter()
        .enumerate()
        .map(|(r, t)| {
            let row = rho.matrix.row(r);
            if g.edges()[t.edge].contact[t.divisor] < 0 {
                row.iter().map(|x| -x).collect()
            } else {
                row.to_vec()
            }
        })
        .collect();
    BinomialSystem {
        kind: SystemKind::Gluing,
        variables: variable_names(g, &rho.domain),
        binomials,
    }
}

/// Binomials of a Hermite basis of the annihilator of the kernel.
pub fn toric_ideal_generators(g: &DecoratedDualGraph) -> BinomialSystem {
    let summary = lattice::lattice_summary(g);
    toric_ideal_from_summary(g, &summary)
}

pub fn toric_ideal_from_summary(g: &DecoratedDualGraph, summary: &LatticeSummary) -> BinomialSystem {
    BinomialSystem {
        kind: SystemKind::LatticeBasis,
        variables: variable_names(g, &summary.rho.domain),
        binomials: lattice::kernel_perp_basis(summary).row_vecs(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub variable: String,
    /// Exponents of the monomial replacing the variable, over the variables
    /// of the unreduced system.
    pub monomial: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    pub system: BinomialSystem,
    /// Substitutions in the order they were applied.
    pub substitutions: Vec<Substitution>,
    /// Names of the variables that could not be eliminated.
    pub remaining: Vec<String>,
}

/// Eliminates variables of the given positions from a binomial system.
///
/// A variable `x_j` is eliminated when some generator, normalized so that its
/// `j`-th exponent is `-1`, has every other exponent nonnegative: then
/// `x_j = x^{m+}` on the variety, and every other generator `m'` becomes
/// `m' + m'_j m`, which no longer involves `x_j`. Candidates are tried from
/// the last position backwards until no further variable can be removed.
/// The remaining generators are returned in Hermite normal form over the
/// surviving variables.
pub fn eliminate(system: &BinomialSystem, candidates: &[usize]) -> ReducedSystem {
    let n = system.variables.len();
    let mut gens: Vec<Vec<BigInt>> = system.binomials.clone();
    let mut eliminated: Vec<usize> = Vec::new();
    let mut substitutions = Vec::new();
    let mut order: Vec<usize> = candidates.to_vec();
    order.sort_unstable();
    order.reverse();

    loop {
        let mut progress = false;
        for &j in &order {
            if eliminated.contains(&j) {
                continue;
            }
            let pivot = gens.iter().position(|m| {
                let unit = if m[j] == BigInt::from(-1) {
                    1
                } else if m[j] == BigInt::from(1) {
                    -1
                } else {
                    return false;
                };
                (0..n).all(|c| c == j || !(&m[c] * BigInt::from(unit)).is_negative())
            });
            let Some(p) = pivot else { continue };
            let mut m = gens.remove(p);
            if m[j].is_positive() {
                m = m.iter().map(|x| -x).collect();
            }
            for other in gens.iter_mut() {
                let f = other[j].clone();
                if !f.is_zero() {
                    for (x, y) in other.iter_mut().zip(&m) {
                        *x += &f * y;
                    }
                }
            }
            let mut monomial = m.clone();
            monomial[j] = BigInt::zero();
            substitutions.push(Substitution {
                variable: system.variables[j].clone(),
                monomial,
            });
            eliminated.push(j);
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let keep: Vec<usize> = (0..n).filter(|c| !eliminated.contains(c)).collect();
    let restricted = gens
        .iter()
        .filter(|m| m.iter().any(|x| !x.is_zero()))
        .map(|m| keep.iter().map(|&c| m[c].clone()).collect::<Vec<BigInt>>());
    let basis = hermite_normal_form(&IntegerMatrix::from_rows(keep.len(), restricted));
    let variables: Vec<String> = keep.iter().map(|&c| system.variables[c].clone()).collect();
    let remaining = candidates
        .iter()
        .filter(|c| !eliminated.contains(c))
        .map(|&c| system.variables[c].clone())
        .collect();
    ReducedSystem {
        system: BinomialSystem {
            kind: SystemKind::Reduced,
            variables,
            binomials: basis.row_vecs(),
        },
        substitutions,
        remaining,
    }
}

/// The lattice-basis presentation with all vertex variables `t_{v,i}`
/// eliminated where a monomial substitution allows it.
pub fn reduced_toric_ideal(g: &DecoratedDualGraph) -> ReducedSystem {
    let summary = lattice::lattice_summary(g);
    let mut system = toric_ideal_from_summary(g, &summary);
    // The gluing exponents lie in the same lattice and often provide the
    // monomial substitutions directly.
    system.binomials.extend(gluing_equations(g).binomials);
    let candidates: Vec<usize> = summary
        .rho
        .domain
        .coords
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, DomainCoord::Vertex(..)))
        .map(|(p, _)| p)
        .collect();
    eliminate(&system, &candidates)
}

/// Outcome of a bounded search for lattice binomials outside the ideal
/// generated by a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationProbe {
    pub checked: usize,
    /// Lattice vectors `m` whose binomial was not reached from the generators.
    pub unreached: Vec<Vec<i64>>,
}

impl SaturationProbe {
    pub fn is_saturated_up_to_bound(&self) -> bool {
        self.unreached.is_empty()
    }
}

/// Checks, for every `m = sum c_r b_r` over the rows `b_r` of `lattice` with
/// `sum |c_r| <= coefficient_bound` and `deg x^{m+} <= max_degree`, whether
/// `x^{m+}` and `x^{m-}` are joined by moves `x^a -> x^{a +- g}` along
/// generators `g` of `system`, staying in the nonnegative orthant with every
/// exponent at most `max_degree`.
///
/// A complete pass shows that the binomial ideal agrees with the lattice
/// ideal in the probed range; it is not a proof of saturation.
pub fn saturation_probe(
    system: &BinomialSystem,
    lattice: &IntegerMatrix,
    coefficient_bound: u32,
    max_degree: i64,
) -> SaturationProbe {
    let to_i64 = |v: &[BigInt]| -> Vec<i64> { v.iter().map(|x| x.to_i64().expect("small exponent")).collect() };
    let gens: Vec<Vec<i64>> = system.binomials.iter().map(|m| to_i64(m)).collect();
    let basis: Vec<Vec<i64>> = lattice.row_vecs().iter().map(|m| to_i64(m)).collect();
    let n = system.variables.len();
    let mut probe = SaturationProbe {
        checked: 0,
        unreached: Vec::new(),
    };
    let mut seen_m: HashSet<Vec<i64>> = HashSet::new();
    let bound = coefficient_bound as i64;
    let mut coeffs = vec![-bound; basis.len()];
    loop {
        if coeffs.iter().map(|c| c.abs()).sum::<i64>() <= bound {
            let mut m = vec![0i64; n];
            for (c, b) in coeffs.iter().zip(&basis) {
                for (x, y) in m.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            let plus: Vec<i64> = m.iter().map(|&x| x.max(0)).collect();
            let minus: Vec<i64> = m.iter().map(|&x| (-x).max(0)).collect();
            let degree = plus.iter().sum::<i64>().max(minus.iter().sum());
            if m.iter().any(|&x| x != 0) && degree <= max_degree && seen_m.insert(m.clone()) {
                probe.checked += 1;
                if !connected(&plus, &minus, &gens, max_degree) {
                    probe.unreached.push(m);
                }
            }
        }
        if !next_point(&mut coeffs, bound) {
            break;
        }
    }
    probe
}

fn next_point(values: &mut [i64], limit: i64) -> bool {
    for x in values.iter_mut().rev() {
        if *x < limit {
            *x += 1;
            return true;
        }
        *x = -limit;
    }
    false
}

fn connected(from: &[i64], to: &[i64], gens: &[Vec<i64>], cap: i64) -> bool {
    const MAX_STATES: usize = 50_000;
    let mut seen: HashSet<Vec<i64>> = HashSet::from([from.to_vec()]);
    let mut queue = VecDeque::from([from.to_vec()]);
    while let Some(a) = queue.pop_front() {
        if a == to {
            return true;
        }
        for g in gens {
            for sign in [1, -1] {
                let b: Vec<i64> = a.iter().zip(g).map(|(x, y)| x + sign * y).collect();
                if b.iter().all(|&x| (0..=cap).contains(&x)) && seen.len() < MAX_STATES && seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
    }
    false
}

/// Leading-coefficient ratios, one nonzero complex number per target
/// coordinate `(e, i)` with `i` in `I_e`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionInput {
    pub eta: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterValue {
    pub character: Vec<BigInt>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionResult {
    pub is_identity: bool,
    /// Characters with `|eta^m - 1| > tol`.
    pub violations: Vec<CharacterValue>,
    /// Every basis character with its deviation.
    pub values: Vec<CharacterValue>,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Whether `eta` lies in the subtorus `exp(Λ_C)`: every character in a
/// basis of the annihilator of the image must evaluate to one.
pub fn obstruction_test(g: &DecoratedDualGraph, input: &ObstructionInput, tol: f64) -> Result<ObstructionResult> {
    let rho = lattice::build_rho(g);
    obstruction_test_with(&rho, input, tol)
}

pub fn obstruction_test_with(rho: &Rho, input: &ObstructionInput, tol: f64) -> Result<ObstructionResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if input.eta.len() != rho.target.len() {
        return Err(Error::Structural(format!(
            "expected {} eta values, got {}",
            rho.target.len(),
            input.eta.len()
        )));
    }
    if let Some(p) = input.eta.iter().position(|z| z.norm() == 0.0 || !z.is_finite()) {
        return Err(Error::Domain(format!("eta at {} is zero or not finite", rho.target.labels[p])));
    }
    let log_space = input.eta.iter().all(|z| (1e-6..=1e6).contains(&z.norm()));
    let characters = lattice::annihilator_basis(rho);
    let mut values = Vec::new();
    for m in characters.row_vecs() {
        let value = if log_space {
            let z: Complex64 = m
                .iter()
                .zip(&input.eta)
                .map(|(k, eta)| eta.ln() * k.to_f64().expect("finite exponent"))
                .sum();
            z.exp()
        } else {
            m.iter().zip(&input.eta).fold(Complex64::new(1.0, 0.0), |acc, (k, eta)| match k.to_i32() {
                Some(k) => acc * eta.powi(k),
                None => acc * (eta.ln() * k.to_f64().expect("finite exponent")).exp(),
            })
        };
        values.push(CharacterValue {
            character: m,
            deviation: (value - 1.0).norm(),
        });
    }
    let violations: Vec<CharacterValue> = values.iter().filter(|v| v.deviation.is_nan() || v.deviation > tol).cloned().collect();
    Ok(ObstructionResult {
        is_identity: violations.is_empty(),
        violations,
        values,
    })
}

/// `eta = exp(rho xi)` for a complex domain vector `xi`.
pub fn torus_point(rho: &Rho, xi: &[Complex64]) -> ObstructionInput {
    let eta = (0..rho.matrix.rows())
        .map(|r| {
            let z: Complex64 = rho
                .matrix
                .row(r)
                .iter()
                .zip(xi)
                .map(|(a, x)| x * a.to_f64().expect("finite entry"))
                .sum();
            z.exp()
        })
        .collect();
    ObstructionInput { eta }
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

    fn d1rd22pt() -> DecoratedDualGraph {
        GraphBuilder::new(["1"])
            .vertex("v0", 0, "[1]", &[])
            .vertex("v1", 0, "[0]", &["1"])
            .vertex("v2", 0, "[0]", &["1"])
            .vertex("v3", 0, "[1]", &["1"])
            .edge("e1", "v0", "v1", &["1"], &[("1", 1)])
            .edge("e2", "v0", "v2", &["1"], &[("1", 1)])
            .edge("e3", "v1", "v3", &["1"], &[("1", 1)])
            .edge("e4", "v2", "v3", &["1"], &[("1", 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn toricex_gluing_equations() {
        let eqs = gluing_equations(&toricex()).equations();
        assert_eq!(
            eqs,
            ["ε_e1^2 = t_v1[1]", "ε_e1^2 = t_v2[2]", "ε_e2^2 = t_v1[1]", "ε_e2^2 = t_v2[2]"]
        );
    }

    #[test]
    fn d1rd22pt_reduces_to_a_quadric() {
        let r = reduced_toric_ideal(&d1rd22pt());
        assert!(r.remaining.is_empty());
        assert_eq!(r.system.variables, ["ε_e1", "ε_e2", "ε_e3", "ε_e4"]);
        assert_eq!(r.system.equations(), ["ε_e1 * ε_e3 = ε_e2 * ε_e4"]);
    }

    #[test]
    fn classical_graph_has_no_gluing_equations() {
        let g = GraphBuilder::new(["1"])
            .vertex("a", 0, "A", &[])
            .vertex("b", 0, "A", &[])
            .edge("e", "a", "b", &[], &[])
            .build()
            .unwrap();
        assert!(gluing_equations(&g).binomials.is_empty());
        assert!(toric_ideal_generators(&g).binomials.is_empty());
    }

    #[test]
    fn text_format() {
        let s = gluing_equations(&toricex());
        let text = s.to_text();
        assert!(text.starts_with("# ε_e1 ε_e2 t_v1[1] t_v2[2]\n"));
        assert!(text.contains("ε_e1^2 = t_v1[1] : 2 0 0 0 | 0 0 1 0\n"));
    }

    #[test]
    fn quadric_is_saturated_in_low_degree() {
        let r = reduced_toric_ideal(&d1rd22pt());
        let probe = saturation_probe(&r.system, &r.system.matrix(), 3, 6);
        assert!(probe.checked > 0);
        assert!(probe.is_saturated_up_to_bound());
    }

    #[test]
    fn lattice_basis_of_twisted_cubic_is_not_saturated() {
        // The lattice spanned by (1,-2,1,0) and (0,1,-2,1) contains
        // (1,-1,-1,1), whose binomial x0 x3 - x1 x2 is not reachable.
        let system = BinomialSystem {
            kind: SystemKind::LatticeBasis,
            variables: vec!["x0".into(), "x1".into(), "x2".into(), "x3".into()],
            binomials: vec![
                vec![1, -2, 1, 0].into_iter().map(BigInt::from).collect(),
                vec![0, 1, -2, 1].into_iter().map(BigInt::from).collect(),
            ],
        };
        let probe = saturation_probe(&system, &system.matrix(), 2, 4);
        assert!(probe.unreached.contains(&vec![1, -1, -1, 1]) || probe.unreached.contains(&vec![-1, 1, 1, -1]));
    }

    #[test]
    fn identity_eta() {
        let g = toricex();
        let input = ObstructionInput {
            eta: vec![Complex64::new(1.0, 0.0); 4],
        };
        assert!(obstruction_test(&g, &input, DEFAULT_TOLERANCE).unwrap().is_identity);
    }

    #[test]
    fn zero_eta_is_a_domain_error() {
        let input = ObstructionInput {
            eta: vec![Complex64::new(0.0, 0.0); 4],
        };
        assert!(matches!(obstruction_test(&toricex(), &input, 1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn perturbation_is_detected() {
        let g = toricex();
        let rho = lattice::build_rho(&g);
        let xi = [0.3, -0.2, 0.7, 1.1].map(|x| Complex64::new(x, 0.5 * x));
        let mut input = torus_point(&rho, &xi);
        assert!(obstruction_test(&g, &input, DEFAULT_TOLERANCE).unwrap().is_identity);
        input.eta[0] *= 1.01;
        assert!(!obstruction_test(&g, &input, DEFAULT_TOLERANCE).unwrap().is_identity);
    }
}
