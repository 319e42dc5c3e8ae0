//! Polarized switching circuits.
//!
//! A switching circuit is a directed multigraph in which every vertex has
//! equal in- and out-valency and both sides carry a bijective port labelling
//! `1..=valency`. A routing picks, per polarization class, a permutation
//! sending in-ports to out-ports; following it from edge to edge splits the
//! edge set into directed cycles.
//!
//! Vertex and edge ids are 1-based. Class indices are 0-based in this API
//! and 1-based in the JSON format.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::perm::{count_cycles_zero_based, Permutation};

pub type VertexId = u32;
pub type EdgeId = u32;

/// Default cap on the number of respecting routings enumerated.
pub const DEFAULT_MAX_ROUTINGS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    In,
    Out,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::In => "in",
            Side::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit has no edges")]
    Empty,
    #[error("vertex id 0 is not allowed")]
    ZeroVertexId,
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(VertexId),
    #[error("edge {edge} refers to unknown vertex {vertex}")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge ids must be 1..={expected_max} without gaps; found {found}")]
    EdgeIds { expected_max: usize, found: EdgeId },
    #[error("vertex {vertex} has two {side}-edges labelled {port}")]
    DuplicatePort { vertex: VertexId, side: Side, port: u32 },
    #[error("vertex {vertex} has {side}-port label {port} outside 1..={valency}")]
    PortOutOfRange { vertex: VertexId, side: Side, port: u32, valency: usize },
    #[error("vertex {vertex} has in-valency {in_valency} but out-valency {out_valency}")]
    ValencyImbalance { vertex: VertexId, in_valency: usize, out_valency: usize },
    #[error("vertex {0} has valency 0")]
    IsolatedVertex(VertexId),
    #[error("polarization class {class} names unknown vertex {vertex}")]
    UnknownClassMember { class: usize, vertex: VertexId },
    #[error("vertex {0} is in no polarization class")]
    Unclassified(VertexId),
    #[error("vertex {0} is in more than one polarization class")]
    MultiplyClassified(VertexId),
    #[error("polarization class {0} is empty")]
    EmptyClass(usize),
    #[error("polarization class {class} mixes valencies {first} and {second}")]
    MixedValency { class: usize, first: usize, second: usize },
    #[error("routing has {got} class permutations, polarization has {expected} classes")]
    RoutingClassCount { expected: usize, got: usize },
    #[error("routing permutation for class {class} has degree {got}, class valency is {expected}")]
    RoutingDegree { class: usize, expected: usize, got: usize },
    #[error("{routings} respecting routings exceed the enumeration cap of {cap}")]
    CapExceeded { routings: String, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub out_port: u32,
    pub head: VertexId,
    pub in_port: u32,
}

/// Unvalidated circuit data. Wrap it in a [`PolarizedCircuit`] to use it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingCircuit {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl SwitchingCircuit {
    /// Edges are kept sorted by id.
    pub fn new(vertices: Vec<VertexId>, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| e.id);
        SwitchingCircuit { vertices, edges }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// A partition of the vertices; class `c` is `classes()[c]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    classes: Vec<Vec<VertexId>>,
}

impl Polarization {
    pub fn new(classes: Vec<Vec<VertexId>>) -> Self {
        Polarization { classes }
    }

    /// Every vertex in its own class, in the given order.
    pub fn unpolarized(vertices: &[VertexId]) -> Self {
        Polarization { classes: vertices.iter().map(|&v| vec![v]).collect() }
    }

    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    pub fn width(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// One permutation per polarization class, sending in-port `i` to out-port
/// `perm(i)` at every vertex of the class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Routing {
    perms: Vec<Permutation>,
}

impl Routing {
    pub fn new(perms: Vec<Permutation>) -> Self {
        Routing { perms }
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn class_perm(&self, class: usize) -> &Permutation {
        &self.perms[class]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitShape {
    pub width: usize,
    pub max_valency: usize,
}

/// A validated circuit with its polarization and lookup tables.
#[derive(Debug, Clone)]
pub struct PolarizedCircuit {
    circuit: SwitchingCircuit,
    polarization: Polarization,
    vertex_pos: HashMap<VertexId, usize>,
    valency: Vec<usize>,
    out_offset: Vec<usize>,
    // out_edges[out_offset[v] + port - 1] = edge index
    out_edges: Vec<usize>,
    class_of: Vec<usize>,
    class_valency: Vec<usize>,
}

/// Checks every circuit and polarization invariant and returns the width
/// and maximum valency.
pub fn validate_circuit(c: &SwitchingCircuit, t: &Polarization) -> Result<CircuitShape, CircuitError> {
    let pc = PolarizedCircuit::new(c.clone(), t.clone())?;
    Ok(pc.shape())
}

impl PolarizedCircuit {
    pub fn new(circuit: SwitchingCircuit, polarization: Polarization) -> Result<Self, CircuitError> {
        if circuit.edges.is_empty() {
            return Err(CircuitError::Empty);
        }
        let mut vertex_pos = HashMap::with_capacity(circuit.vertices.len());
        for (pos, &v) in circuit.vertices.iter().enumerate() {
            if v == 0 {
                return Err(CircuitError::ZeroVertexId);
            }
            if vertex_pos.insert(v, pos).is_some() {
                return Err(CircuitError::DuplicateVertex(v));
            }
        }
        for (k, e) in circuit.edges.iter().enumerate() {
            if e.id as usize != k + 1 {
                return Err(CircuitError::EdgeIds { expected_max: circuit.edges.len(), found: e.id });
            }
        }

        let nv = circuit.vertices.len();
        let mut outs: Vec<Vec<(u32, usize)>> = vec![Vec::new(); nv];
        let mut ins: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for (k, e) in circuit.edges.iter().enumerate() {
            let tail = *vertex_pos
                .get(&e.tail)
                .ok_or(CircuitError::UnknownVertex { edge: e.id, vertex: e.tail })?;
            let head = *vertex_pos
                .get(&e.head)
                .ok_or(CircuitError::UnknownVertex { edge: e.id, vertex: e.head })?;
            outs[tail].push((e.out_port, k));
            ins[head].push(e.in_port);
        }

        let mut valency = vec![0; nv];
        let mut out_offset = Vec::with_capacity(nv);
        let mut out_edges = vec![0; circuit.edges.len()];
        let mut offset = 0;
        for pos in 0..nv {
            let vertex = circuit.vertices[pos];
            let (d_in, d_out) = (ins[pos].len(), outs[pos].len());
            if d_in != d_out {
                return Err(CircuitError::ValencyImbalance { vertex, in_valency: d_in, out_valency: d_out });
            }
            if d_out == 0 {
                return Err(CircuitError::IsolatedVertex(vertex));
            }
            check_ports(vertex, Side::Out, outs[pos].iter().map(|&(p, _)| p))?;
            check_ports(vertex, Side::In, ins[pos].iter().copied())?;
            valency[pos] = d_out;
            out_offset.push(offset);
            for &(port, k) in &outs[pos] {
                out_edges[offset + port as usize - 1] = k;
            }
            offset += d_out;
        }

        let mut class_of = vec![usize::MAX; nv];
        let mut class_valency = Vec::with_capacity(polarization.classes.len());
        for (c, members) in polarization.classes.iter().enumerate() {
            let Some(&first) = members.first() else {
                return Err(CircuitError::EmptyClass(c + 1));
            };
            let first_valency = match vertex_pos.get(&first) {
                Some(&pos) => valency[pos],
                None => return Err(CircuitError::UnknownClassMember { class: c + 1, vertex: first }),
            };
            for &v in members {
                let pos = *vertex_pos
                    .get(&v)
                    .ok_or(CircuitError::UnknownClassMember { class: c + 1, vertex: v })?;
                if class_of[pos] != usize::MAX {
                    return Err(CircuitError::MultiplyClassified(v));
                }
                if valency[pos] != first_valency {
                    return Err(CircuitError::MixedValency {
                        class: c + 1,
                        first: first_valency,
                        second: valency[pos],
                    });
                }
                class_of[pos] = c;
            }
            class_valency.push(first_valency);
        }
        if let Some(pos) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(CircuitError::Unclassified(circuit.vertices[pos]));
        }

        Ok(PolarizedCircuit {
            circuit,
            polarization,
            vertex_pos,
            valency,
            out_offset,
            out_edges,
            class_of,
            class_valency,
        })
    }

    pub fn circuit(&self) -> &SwitchingCircuit {
        &self.circuit
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn edges(&self) -> &[Edge] {
        &self.circuit.edges
    }

    pub fn num_edges(&self) -> usize {
        self.circuit.edges.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_valency.len()
    }

    pub fn shape(&self) -> CircuitShape {
        CircuitShape {
            width: self.polarization.width(),
            max_valency: self.valency.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn width(&self) -> usize {
        self.shape().width
    }

    pub fn max_valency(&self) -> usize {
        self.shape().max_valency
    }

    /// Panics on an unknown vertex.
    pub fn valency(&self, v: VertexId) -> usize {
        self.valency[self.vertex_pos[&v]]
    }

    /// 0-based class index of `v`. Panics on an unknown vertex.
    pub fn class_of(&self, v: VertexId) -> usize {
        self.class_of[self.vertex_pos[&v]]
    }

    pub fn class_valency(&self, class: usize) -> usize {
        self.class_valency[class]
    }

    /// The edge leaving `v` through out-port `port` (1-based).
    pub fn out_edge(&self, v: VertexId, port: u32) -> &Edge {
        let pos = self.vertex_pos[&v];
        &self.circuit.edges[self.out_edges[self.out_offset[pos] + port as usize - 1]]
    }

    pub fn identity_routing(&self) -> Routing {
        Routing::new(self.class_valency.iter().map(|&d| Permutation::identity(d)).collect())
    }

    /// Routing for binary circuits: a valency-2 class is swapped when
    /// `swapped(class)` holds; every other class gets the identity.
    pub fn binary_routing(&self, swapped: impl Fn(usize) -> bool) -> Routing {
        let swap = Permutation::from_images(&[2, 1]).expect("valid");
        Routing::new(
            self.class_valency
                .iter()
                .enumerate()
                .map(|(c, &d)| if d == 2 && swapped(c) { swap.clone() } else { Permutation::identity(d) })
                .collect(),
        )
    }

    pub fn check_routing(&self, r: &Routing) -> Result<(), CircuitError> {
        if r.perms.len() != self.num_classes() {
            return Err(CircuitError::RoutingClassCount { expected: self.num_classes(), got: r.perms.len() });
        }
        for (c, (p, &d)) in r.perms.iter().zip(&self.class_valency).enumerate() {
            if p.degree() != d {
                return Err(CircuitError::RoutingDegree { class: c + 1, expected: d, got: p.degree() });
            }
        }
        Ok(())
    }

    /// Number of respecting routings, `∏ valency(class)!`, or `None` on
    /// overflow.
    pub fn routing_count(&self) -> Option<u128> {
        self.class_valency.iter().try_fold(1u128, |acc, &d| {
            (1..=d as u128).try_fold(acc, |a, k| a.checked_mul(k))
        })
    }

    fn check_cap(&self, cap: u64) -> Result<(), CircuitError> {
        match self.routing_count() {
            Some(n) if n <= cap as u128 => Ok(()),
            Some(n) => Err(CircuitError::CapExceeded { routings: n.to_string(), cap }),
            None => Err(CircuitError::CapExceeded { routings: "more than 2^128".into(), cap }),
        }
    }

    /// Visits every respecting routing in the pinned order (class 1 slowest,
    /// each class's permutations in lexicographic order), passing the
    /// per-class permutation indices and the routing's cycle count. The
    /// visitor returns `false` to stop early.
    fn scan_routings(&self, cap: u64, mut visit: impl FnMut(&[usize], usize) -> bool) -> Result<(), CircuitError> {
        self.check_cap(cap)?;
        let perms: Vec<Vec<Permutation>> = self.class_valency.iter().map(|&d| Permutation::all(d)).collect();
        let m = self.num_edges();
        // per edge: (offset of the head's out-ports, head class, 0-based in-port)
        let hops: Vec<(usize, usize, usize)> = self
            .circuit
            .edges
            .iter()
            .map(|e| {
                let pos = self.vertex_pos[&e.head];
                (self.out_offset[pos], self.class_of[pos], e.in_port as usize - 1)
            })
            .collect();
        let mut digits = vec![0usize; perms.len()];
        let mut succ = vec![0usize; m];
        let mut seen = vec![false; m];
        loop {
            for (e, &(offset, class, port)) in hops.iter().enumerate() {
                let out_port = perms[class][digits[class]].zero_based()[port];
                succ[e] = self.out_edges[offset + out_port];
            }
            let cycles = count_cycles_zero_based(&succ, &mut seen);
            if !visit(&digits, cycles) {
                return Ok(());
            }
            // odometer, last class fastest
            let mut c = digits.len();
            loop {
                if c == 0 {
                    return Ok(());
                }
                c -= 1;
                digits[c] += 1;
                if digits[c] < perms[c].len() {
                    break;
                }
                digits[c] = 0;
            }
        }
    }

    fn routing_from_digits(&self, digits: &[usize]) -> Routing {
        Routing::new(
            digits
                .iter()
                .zip(&self.class_valency)
                .map(|(&k, &d)| Permutation::all(d).swap_remove(k))
                .collect(),
        )
    }
}

fn check_ports(vertex: VertexId, side: Side, ports: impl Iterator<Item = u32>) -> Result<(), CircuitError> {
    let ports: Vec<u32> = ports.collect();
    let valency = ports.len();
    let mut seen = vec![false; valency];
    for port in ports {
        if port == 0 || port as usize > valency {
            return Err(CircuitError::PortOutOfRange { vertex, side, port, valency });
        }
        if std::mem::replace(&mut seen[port as usize - 1], true) {
            return Err(CircuitError::DuplicatePort { vertex, side, port });
        }
    }
    Ok(())
}

/// The permutation of edge ids sending each edge to the edge that follows
/// it under routing `r`: an edge entering `v` on in-port `i` continues on
/// the out-edge of `v` labelled `r(class(v))(i)`.
pub fn successor_permutation(c: &PolarizedCircuit, r: &Routing) -> Result<Permutation, CircuitError> {
    c.check_routing(r)?;
    let image = c
        .circuit
        .edges
        .iter()
        .map(|e| {
            let pos = c.vertex_pos[&e.head];
            let out_port = r.perms[c.class_of[pos]].zero_based()[e.in_port as usize - 1];
            c.out_edges[c.out_offset[pos] + out_port]
        })
        .collect();
    Ok(Permutation::from_zero_based(image))
}

/// Cycles in the edge decomposition induced by `r`.
pub fn count_routing_cycles(c: &PolarizedCircuit, r: &Routing) -> Result<usize, CircuitError> {
    Ok(successor_permutation(c, r)?.cycle_count())
}

/// Every respecting routing exactly once, in the pinned order.
pub fn enumerate_routings(c: &PolarizedCircuit, cap: u64) -> Result<Routings, CircuitError> {
    c.check_cap(cap)?;
    let perms = c.class_valency.iter().map(|&d| Permutation::all(d)).collect::<Vec<_>>();
    Ok(Routings { digits: Some(vec![0; perms.len()]), perms })
}

#[derive(Debug, Clone)]
pub struct Routings {
    perms: Vec<Vec<Permutation>>,
    digits: Option<Vec<usize>>,
}

impl Iterator for Routings {
    type Item = Routing;

    fn next(&mut self) -> Option<Routing> {
        let digits = self.digits.as_mut()?;
        let routing = Routing::new(digits.iter().zip(&self.perms).map(|(&k, ps)| ps[k].clone()).collect());
        let mut c = digits.len();
        loop {
            if c == 0 {
                self.digits = None;
                break;
            }
            c -= 1;
            digits[c] += 1;
            if digits[c] < self.perms[c].len() {
                break;
            }
            digits[c] = 0;
        }
        Some(routing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxRouting {
    pub max_cycles: usize,
    /// Number of respecting routings attaining `max_cycles`.
    pub optimal_count: u64,
    /// The first optimal routing in enumeration order.
    pub witness: Routing,
}

pub fn max_routing(c: &PolarizedCircuit, cap: u64) -> Result<MaxRouting, CircuitError> {
    let mut best = 0;
    let mut count = 0u64;
    let mut witness = Vec::new();
    c.scan_routings(cap, |digits, cycles| {
        if cycles > best {
            best = cycles;
            count = 0;
            witness = digits.to_vec();
        }
        if cycles == best {
            count += 1;
        }
        true
    })?;
    Ok(MaxRouting { max_cycles: best, optimal_count: count, witness: c.routing_from_digits(&witness) })
}

/// Whether some respecting routing has at least `k` cycles.
pub fn decide_routing(c: &PolarizedCircuit, k: usize, cap: u64) -> Result<bool, CircuitError> {
    let mut found = false;
    c.scan_routings(cap, |_, cycles| {
        found = cycles >= k;
        !found
    })?;
    Ok(found)
}

/// Number of respecting routings for each attained cycle count.
pub fn routing_cycle_histogram(c: &PolarizedCircuit, cap: u64) -> Result<BTreeMap<usize, u64>, CircuitError> {
    let mut histogram = BTreeMap::new();
    c.scan_routings(cap, |_, cycles| {
        *histogram.entry(cycles).or_insert(0) += 1;
        true
    })?;
    Ok(histogram)
}
