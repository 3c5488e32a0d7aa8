//! Decorated dual graphs and the geometric context they are read against.
//!
//! A graph is immutable once built. Vertices, edges and legs are kept sorted
//! by id so that every derived matrix and report has a reproducible layout.
//! Each edge stores a single reference orientation `from -> to` together with
//! the contact vector of that orientation; the reverse contact vector is
//! always computed as its negative.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Subset of the divisor index set, as positions into [`DecoratedDualGraph::divisors`].
pub type Depth = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    /// Opaque homology tag, resolved through a [`GeometryContext`].
    pub degree: String,
    pub depth: Depth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
    pub depth: Depth,
    /// Contact vector of the reference orientation, one entry per divisor.
    pub contact: Vec<i64>,
    /// Reverse contact vector as written in the input file, if any. Only the
    /// validator looks at it.
    pub declared_reverse: Option<Vec<i64>>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    pub fn reverse_contact(&self) -> Vec<i64> {
        self.contact.iter().map(|c| -c).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub id: String,
    pub at: usize,
    /// Position of the marked point, expected to run over `1..=k`.
    pub index: usize,
    pub contact: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedDualGraph {
    divisors: Vec<String>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
}

impl DecoratedDualGraph {
    pub fn divisors(&self) -> &[String] {
        &self.divisors
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn divisor_index(&self, label: &str) -> Option<usize> {
        self.divisors.iter().position(|d| d == label)
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Contact vector of edge `e` oriented to start at vertex `v`.
    ///
    /// For a loop the reference orientation is returned.
    pub fn contact_from(&self, e: usize, v: usize) -> Vec<i64> {
        let edge = &self.edges[e];
        if edge.from == v {
            edge.contact.clone()
        } else {
            edge.reverse_contact()
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let adjacency = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Neighbour lists `(other endpoint, edge index)`; loops appear once.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adjacency[e.from].push((e.to, i));
            if !e.is_loop() {
                adjacency[e.to].push((e.from, i));
            }
        }
        adjacency
    }

    /// Number of half-edges and legs at each vertex; a loop counts twice.
    pub fn valence(&self) -> Vec<usize> {
        let mut valence = vec![0; self.vertices.len()];
        for e in &self.edges {
            valence[e.from] += 1;
            valence[e.to] += 1;
        }
        for l in &self.legs {
            valence[l.at] += 1;
        }
        valence
    }

    /// Same graph with the reference orientation of edge `e` reversed.
    pub fn with_edge_reversed(&self, e: usize) -> Self {
        let mut g = self.clone();
        let edge = &mut g.edges[e];
        std::mem::swap(&mut edge.from, &mut edge.to);
        edge.contact = edge.contact.iter().map(|c| -c).collect();
        edge.declared_reverse = None;
        g
    }

    pub fn builder<I, S>(divisors: I) -> GraphBuilder
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GraphBuilder::new(divisors)
    }

    pub(crate) fn from_parts(
        divisors: Vec<String>,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        legs: Vec<Leg>,
    ) -> Self {
        DecoratedDualGraph {
            divisors,
            vertices,
            edges,
            legs,
        }
    }
}

/// Arithmetic genus: sum of vertex genera plus the first Betti number.
pub fn arithmetic_genus(g: &DecoratedDualGraph) -> Result<u64> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let vertex_genus: u64 = g.vertices.iter().map(|v| u64::from(v.genus)).sum();
    let betti = g.edges.len() as u64 + 1 - g.vertices.len() as u64;
    Ok(vertex_genus + betti)
}

/// Restriction of the decorations to a subset of the divisor labels.
///
/// Vertices, edges and legs are kept; depths are intersected with the kept
/// labels and contact vectors are truncated to the kept coordinates.
pub fn restrict_graph(g: &DecoratedDualGraph, keep: &[&str]) -> Result<DecoratedDualGraph> {
    let mut kept = BTreeSet::new();
    for label in keep {
        let i = g
            .divisor_index(label)
            .ok_or_else(|| Error::Domain(format!("divisor label `{label}` is not in the graph")))?;
        kept.insert(i);
    }
    // New position of every kept old index, in the original order.
    let remap: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let depth = |d: &Depth| -> Depth { d.iter().filter_map(|i| remap.get(i).copied()).collect() };
    let truncate = |c: &[i64]| -> Vec<i64> { kept.iter().map(|&i| c[i]).collect() };

    Ok(DecoratedDualGraph {
        divisors: kept.iter().map(|&i| g.divisors[i].clone()).collect(),
        vertices: g
            .vertices
            .iter()
            .map(|v| Vertex {
                depth: depth(&v.depth),
                ..v.clone()
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| Edge {
                depth: depth(&e.depth),
                contact: truncate(&e.contact),
                declared_reverse: e.declared_reverse.as_deref().map(truncate),
                ..e.clone()
            })
            .collect(),
        legs: g
            .legs
            .iter()
            .map(|l| Leg {
                contact: truncate(&l.contact),
                ..l.clone()
            })
            .collect(),
    })
}

enum PendingKind {
    Vertex,
    Edge,
    Leg,
}

struct PendingVertex {
    id: String,
    genus: u32,
    degree: String,
    depth: Vec<String>,
}

struct PendingEdge {
    id: String,
    from: String,
    to: String,
    depth: Vec<String>,
    contact: Vec<(String, i64)>,
    reverse: Option<Vec<(String, i64)>>,
}

struct PendingLeg {
    id: String,
    at: String,
    index: usize,
    contact: Vec<(String, i64)>,
}

/// Assembles a graph from string ids, reporting unresolved references with
/// JSON-pointer paths into the equivalent graph file.
pub struct GraphBuilder {
    divisors: Vec<String>,
    vertices: Vec<PendingVertex>,
    edges: Vec<PendingEdge>,
    legs: Vec<PendingLeg>,
}

impl GraphBuilder {
    pub fn new<I, S>(divisors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GraphBuilder {
            divisors: divisors.into_iter().map(Into::into).collect(),
            vertices: Vec::new(),
            edges: Vec::new(),
            legs: Vec::new(),
        }
    }

    pub fn vertex(mut self, id: &str, genus: u32, degree: &str, depth: &[&str]) -> Self {
        self.vertices.push(PendingVertex {
            id: id.to_string(),
            genus,
            degree: degree.to_string(),
            depth: depth.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn edge(mut self, id: &str, from: &str, to: &str, depth: &[&str], contact: &[(&str, i64)]) -> Self {
        self.edges.push(PendingEdge {
            id: id.to_string(),
            from: from.to_string(),
            to: to.to_string(),
            depth: depth.iter().map(|s| s.to_string()).collect(),
            contact: contact.iter().map(|(l, c)| (l.to_string(), *c)).collect(),
            reverse: None,
        });
        self
    }

    /// Records an explicit reverse contact vector on the most recently added edge.
    pub fn declared_reverse(mut self, contact: &[(&str, i64)]) -> Self {
        if let Some(e) = self.edges.last_mut() {
            e.reverse = Some(contact.iter().map(|(l, c)| (l.to_string(), *c)).collect());
        }
        self
    }

    pub fn leg(mut self, id: &str, at: &str, index: usize, contact: &[(&str, i64)]) -> Self {
        self.legs.push(PendingLeg {
            id: id.to_string(),
            at: at.to_string(),
            index,
            contact: contact.iter().map(|(l, c)| (l.to_string(), *c)).collect(),
        });
        self
    }

    pub fn build(self) -> Result<DecoratedDualGraph> {
        let mut label_pos = HashMap::new();
        for (i, d) in self.divisors.iter().enumerate() {
            if label_pos.insert(d.as_str(), i).is_some() {
                return Err(Error::schema(format!("/divisors/{i}"), format!("duplicate divisor label `{d}`")));
            }
        }
        let resolve_depth = |labels: &[String], base: String| -> Result<Depth> {
            labels
                .iter()
                .enumerate()
                .map(|(j, l)| {
                    label_pos
                        .get(l.as_str())
                        .copied()
                        .ok_or_else(|| Error::schema(format!("{base}/depth/{j}"), format!("unknown divisor label `{l}`")))
                })
                .collect()
        };
        let resolve_contact = |entries: &[(String, i64)], base: String| -> Result<Vec<i64>> {
            let mut v = vec![0; self.divisors.len()];
            for (l, c) in entries {
                let i = label_pos.get(l.as_str()).copied().ok_or_else(|| {
                    Error::schema(format!("{base}/{}", escape_pointer(l)), format!("unknown divisor label `{l}`"))
                })?;
                v[i] = *c;
            }
            Ok(v)
        };

        check_unique(self.vertices.iter().map(|v| v.id.as_str()), PendingKind::Vertex)?;
        check_unique(self.edges.iter().map(|e| e.id.as_str()), PendingKind::Edge)?;
        check_unique(self.legs.iter().map(|l| l.id.as_str()), PendingKind::Leg)?;

        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            vertices.push(Vertex {
                id: v.id.clone(),
                genus: v.genus,
                degree: v.degree.clone(),
                depth: resolve_depth(&v.depth, format!("/vertices/{i}"))?,
            });
        }
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let vertex_pos: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let lookup = |id: &str, pointer: String| -> Result<usize> {
            vertex_pos
                .get(id)
                .copied()
                .ok_or_else(|| Error::schema(pointer, format!("`{id}` is not a vertex id")))
        };

        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            edges.push(Edge {
                id: e.id.clone(),
                from: lookup(&e.from, format!("/edges/{i}/from"))?,
                to: lookup(&e.to, format!("/edges/{i}/to"))?,
                depth: resolve_depth(&e.depth, format!("/edges/{i}"))?,
                contact: resolve_contact(&e.contact, format!("/edges/{i}/contact"))?,
                declared_reverse: match &e.reverse {
                    Some(r) => Some(resolve_contact(r, format!("/edges/{i}/reverse_contact"))?),
                    None => None,
                },
            });
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));

        let mut legs = Vec::with_capacity(self.legs.len());
        for (i, l) in self.legs.iter().enumerate() {
            legs.push(Leg {
                id: l.id.clone(),
                at: lookup(&l.at, format!("/legs/{i}/at"))?,
                index: l.index,
                contact: resolve_contact(&l.contact, format!("/legs/{i}/contact"))?,
            });
        }
        legs.sort_by(|a, b| a.id.cmp(&b.id));

        Ok(DecoratedDualGraph {
            divisors: self.divisors,
            vertices,
            edges,
            legs,
        })
    }
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>, kind: PendingKind) -> Result<()> {
    let section = match kind {
        PendingKind::Vertex => "vertices",
        PendingKind::Edge => "edges",
        PendingKind::Leg => "legs",
    };
    let mut seen = BTreeSet::new();
    for (i, id) in ids.enumerate() {
        if !seen.insert(id) {
            return Err(Error::schema(format!("/{section}/{i}/id"), format!("duplicate id `{id}`")));
        }
    }
    Ok(())
}

pub(crate) fn escape_pointer(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Intersection numbers of one degree class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    /// First Chern class of the tangent bundle evaluated on the class.
    pub c1: i64,
    /// Intersection with each divisor, keyed by label. Absent labels pair to zero.
    pub divisor: BTreeMap<String, i64>,
}

impl Pairing {
    pub fn dot(&self, label: &str) -> i64 {
        self.divisor.get(label).copied().unwrap_or(0)
    }

    /// Intersection with the whole divisor, the sum over all labels.
    pub fn dot_total(&self) -> i64 {
        self.divisor.values().sum()
    }

    /// First Chern class of the log tangent bundle on the class.
    pub fn c1_log(&self) -> i64 {
        self.c1 - self.dot_total()
    }

    pub fn add(&mut self, other: &Pairing) {
        self.c1 += other.c1;
        for (k, v) in &other.divisor {
            *self.divisor.entry(k.clone()).or_insert(0) += v;
        }
    }
}

/// The numbers a graph cannot supply by itself: the complex dimension of the
/// target, the divisor labels, and the pairings of every degree tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryContext {
    pub dim_x: u32,
    pub divisors: Vec<String>,
    pub degrees: BTreeMap<String, Pairing>,
}

impl GeometryContext {
    pub fn pairing(&self, tag: &str) -> Result<&Pairing> {
        self.degrees.get(tag).ok_or_else(|| Error::MissingPairing(tag.to_string()))
    }

    /// Pairings of the total degree, the sum of all vertex degrees.
    pub fn total_pairing(&self, g: &DecoratedDualGraph) -> Result<Pairing> {
        let mut total = Pairing::default();
        for v in g.vertices() {
            total.add(self.pairing(&v.degree)?);
        }
        Ok(total)
    }

    /// Context for the restricted graph: pairings with dropped divisors are removed.
    pub fn restrict(&self, keep: &[&str]) -> GeometryContext {
        GeometryContext {
            dim_x: self.dim_x,
            divisors: self.divisors.iter().filter(|d| keep.contains(&d.as_str())).cloned().collect(),
            degrees: self
                .degrees
                .iter()
                .map(|(tag, p)| {
                    let divisor = p
                        .divisor
                        .iter()
                        .filter(|(l, _)| keep.contains(&l.as_str()))
                        .map(|(l, v)| (l.clone(), *v))
                        .collect();
                    (tag.clone(), Pairing { c1: p.c1, divisor })
                })
                .collect(),
        }
    }
}

/// One violated axiom of a decorated dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Leg order indices are not a bijection onto `1..=k`.
    LegOrdering { indices: Vec<usize> },
    /// Edge depth differs from the union of its endpoint depths.
    EdgeDepth { edge: String, expected: Vec<String>, found: Vec<String> },
    /// Declared reverse contact is not the negative of the reference contact.
    Antisymmetry { edge: String, forward: Vec<i64>, reverse: Vec<i64> },
    /// Contact vector has a nonzero entry outside the edge depth.
    Support { edge: String, label: String, value: i64 },
    /// Intersection numbers of a vertex differ from the sum of outgoing contacts.
    DegreeBalance { vertex: String, label: String, expected: i64, found: i64 },
    Disconnected,
    /// Context is missing the pairings of a degree tag.
    MissingPairing { vertex: String, degree: String },
    /// Context divisor labels differ from the graph's.
    ContextDivisors { graph: Vec<String>, context: Vec<String> },
    /// No tropical witness exists.
    TropicalInfeasible,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LegOrdering { indices } => {
                write!(f, "leg indices {indices:?} are not a bijection onto 1..={}", indices.len())
            }
            Violation::EdgeDepth { edge, expected, found } => {
                write!(f, "edge {edge}: depth {found:?} differs from endpoint union {expected:?}")
            }
            Violation::Antisymmetry { edge, forward, reverse } => {
                write!(f, "edge {edge}: reverse contact {reverse:?} is not the negative of {forward:?}")
            }
            Violation::Support { edge, label, value } => {
                write!(f, "edge {edge}: contact {value} in coordinate {label} outside the edge depth")
            }
            Violation::DegreeBalance { vertex, label, expected, found } => {
                write!(f, "vertex {vertex}: pairing with {label} is {expected} but contacts sum to {found}")
            }
            Violation::Disconnected => write!(f, "graph is not connected"),
            Violation::MissingPairing { vertex, degree } => {
                write!(f, "vertex {vertex}: no pairing for degree `{degree}`")
            }
            Violation::ContextDivisors { graph, context } => {
                write!(f, "context divisors {context:?} differ from graph divisors {graph:?}")
            }
            Violation::TropicalInfeasible => write!(f, "no tropical witness exists"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// `2 g_v - 2 + valence <= 0`.
    UnstableVertex { vertex: String },
    /// Degree balance could not be checked for lack of a context.
    BalanceNotChecked,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::UnstableVertex { vertex } => write!(f, "vertex {vertex} has an unstable domain component"),
            Warning::BalanceNotChecked => write!(f, "degree balance not checked: no geometry context"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every axiom of a decorated dual graph against a context.
pub fn validate_graph(g: &DecoratedDualGraph, ctx: &GeometryContext) -> ValidationReport {
    validate_axioms(g, Some(ctx))
}

/// As [`validate_graph`], but the degree balance is skipped (with a warning)
/// when no context is available.
pub fn validate_axioms(g: &DecoratedDualGraph, ctx: Option<&GeometryContext>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let violations = &mut report.violations;
    let labels = |d: &Depth| -> Vec<String> { d.iter().map(|&i| g.divisors[i].clone()).collect() };

    let mut indices: Vec<usize> = g.legs.iter().map(|l| l.index).collect();
    indices.sort_unstable();
    if indices.iter().enumerate().any(|(i, &o)| o != i + 1) {
        violations.push(Violation::LegOrdering { indices });
    }

    for e in &g.edges {
        let union: Depth = g.vertices[e.from].depth.union(&g.vertices[e.to].depth).copied().collect();
        if union != e.depth {
            violations.push(Violation::EdgeDepth {
                edge: e.id.clone(),
                expected: labels(&union),
                found: labels(&e.depth),
            });
        }
        if let Some(reverse) = &e.declared_reverse {
            if reverse.iter().zip(&e.contact).any(|(r, c)| r + c != 0) {
                violations.push(Violation::Antisymmetry {
                    edge: e.id.clone(),
                    forward: e.contact.clone(),
                    reverse: reverse.clone(),
                });
            }
        }
        for (i, &c) in e.contact.iter().enumerate() {
            if c != 0 && !e.depth.contains(&i) {
                violations.push(Violation::Support {
                    edge: e.id.clone(),
                    label: g.divisors[i].clone(),
                    value: c,
                });
            }
        }
    }

    match ctx {
        Some(ctx) => check_balance(g, ctx, violations),
        None => report.warnings.push(Warning::BalanceNotChecked),
    }

    if !g.is_connected() {
        report.violations.push(Violation::Disconnected);
    }

    if !crate::tropical::tropical_feasibility(g).is_feasible() {
        report.violations.push(Violation::TropicalInfeasible);
    }

    for (v, valence) in g.vertices.iter().zip(g.valence()) {
        if 2 * i64::from(v.genus) - 2 + valence as i64 <= 0 {
            report.warnings.push(Warning::UnstableVertex { vertex: v.id.clone() });
        }
    }
    report
}

/// Sum of contact vectors of the oriented edges starting at each vertex and
/// of the legs attached to it. Loops contribute zero.
pub fn outgoing_contact_sums(g: &DecoratedDualGraph) -> Vec<Vec<i64>> {
    let s = g.divisors.len();
    let mut sums = vec![vec![0i64; s]; g.vertices.len()];
    for e in &g.edges {
        for i in 0..s {
            sums[e.from][i] += e.contact[i];
            sums[e.to][i] -= e.contact[i];
        }
    }
    for l in &g.legs {
        for i in 0..s {
            sums[l.at][i] += l.contact[i];
        }
    }
    sums
}

fn check_balance(g: &DecoratedDualGraph, ctx: &GeometryContext, violations: &mut Vec<Violation>) {
    let mut graph_labels = g.divisors.clone();
    let mut ctx_labels = ctx.divisors.clone();
    graph_labels.sort();
    ctx_labels.sort();
    if graph_labels != ctx_labels {
        violations.push(Violation::ContextDivisors {
            graph: g.divisors.clone(),
            context: ctx.divisors.clone(),
        });
    }
    let sums = outgoing_contact_sums(g);
    for (v, sum) in g.vertices.iter().zip(sums) {
        let Ok(pairing) = ctx.pairing(&v.degree) else {
            violations.push(Violation::MissingPairing {
                vertex: v.id.clone(),
                degree: v.degree.clone(),
            });
            continue;
        };
        for (i, label) in g.divisors.iter().enumerate() {
            let expected = pairing.dot(label);
            if expected != sum[i] {
                violations.push(Violation::DegreeBalance {
                    vertex: v.id.clone(),
                    label: label.clone(),
                    expected,
                    found: sum[i],
                });
            }
        }
    }
}
