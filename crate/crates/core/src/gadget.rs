//! Boolean gadget circuits.
//!
//! Every vertex here has valency 1 or 2, and each polarization class stands
//! for one Boolean variable: the class is routed with the identity when the
//! variable is false and with the swap `(1 2)` when it is true. A slot
//! holding a negated literal has in-port labels 1 and 2 exchanged at each of
//! its vertices, which flips the variable's effect and nothing else.
//!
//! Maximal cycle counts per gadget, in terms of literal values:
//!
//! | gadget      | cycles                                   | vertices per slot |
//! |-------------|------------------------------------------|-------------------|
//! | `I(a)`      | 2 if `a`, else 1                         | 1                 |
//! | `E(a,b)`    | 2 if `a = b`, else 1                     | 1, 1              |
//! | `F(a,b)`    | 1 if neither, 2 if exactly one, 3 if both | 1, 1             |
//! | `G(a,b)`    | 2 if neither, else 4                     | 2, 2              |
//! | `A(a,b,c)`  | 1 if none, else 3                        | 4, 4, 4           |
//!
//! `G(a,b)` is the disjoint union of `F(a,b)` and `E(¬a,b)`.
//!
//! Flipping one vertex's routing multiplies the edge successor permutation
//! by a transposition, so the cycle count changes parity once per vertex
//! flipped. `F` therefore needs an odd number of vertices per variable, and
//! `G` an even number.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{
    count_routing_cycles, CircuitError, Edge, EdgeId, PolarizedCircuit, Polarization, SwitchingCircuit,
    VertexId,
};
use crate::sat::Literal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("{gadget} needs distinct variables but x{variable} appears twice")]
    RepeatedVariable { gadget: GadgetKind, variable: u32 },
    #[error("{gadget} at {assignment}: expected {expected} cycles, got {actual}")]
    Mismatch { gadget: String, assignment: String, expected: usize, actual: usize },
    #[error("{gadget} has {expected} slots but the circuit has {got} classes")]
    SlotCount { gadget: GadgetKind, expected: usize, got: usize },
    #[error("class {class} must have valency 2 to carry a literal")]
    SlotValency { class: usize },
    #[error("unknown gadget {0:?}; expected one of I, E, F, G, A")]
    UnknownKind(String),
    #[error("gadget circuit is malformed: {0}")]
    Circuit(#[from] CircuitError),
}

/// Hands out fresh vertex and edge ids so fragments compose by disjoint
/// union without renaming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdAllocator {
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl Default for IdAllocator {
    fn default() -> Self {
        IdAllocator { next_vertex: 1, next_edge: 1 }
    }
}

impl IdAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        v
    }

    pub fn edge(&mut self) -> EdgeId {
        let e = self.next_edge;
        self.next_edge += 1;
        e
    }

    pub fn vertices_issued(&self) -> usize {
        self.next_vertex as usize - 1
    }

    pub fn edges_issued(&self) -> usize {
        self.next_edge as usize - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    I,
    E,
    F,
    G,
    A,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 5] = [GadgetKind::I, GadgetKind::E, GadgetKind::F, GadgetKind::G, GadgetKind::A];

    pub fn arity(self) -> usize {
        match self {
            GadgetKind::I => 1,
            GadgetKind::E | GadgetKind::F | GadgetKind::G => 2,
            GadgetKind::A => 3,
        }
    }

    /// Cycle count as a function of the literal values in each slot.
    pub fn expected_cycles(self, lits: &[bool]) -> usize {
        match (self, lits) {
            (GadgetKind::I, &[a]) => if a { 2 } else { 1 },
            (GadgetKind::E, &[a, b]) => if a == b { 2 } else { 1 },
            (GadgetKind::F, &[a, b]) => 1 + a as usize + b as usize,
            (GadgetKind::G, &[a, b]) => if a || b { 4 } else { 2 },
            (GadgetKind::A, &[a, b, c]) => if a || b || c { 3 } else { 1 },
            _ => panic!("{} takes {} literals, got {}", self, self.arity(), lits.len()),
        }
    }

    /// The cycle count reached exactly when the encoded clause holds.
    pub fn satisfied_cycles(self) -> usize {
        match self {
            GadgetKind::I | GadgetKind::E => 2,
            GadgetKind::F | GadgetKind::A => 3,
            GadgetKind::G => 4,
        }
    }

    pub fn vertices_per_slot(self) -> usize {
        match self {
            GadgetKind::I | GadgetKind::E | GadgetKind::F => 1,
            GadgetKind::G => 2,
            GadgetKind::A => 4,
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GadgetKind::I => "I",
            GadgetKind::E => "E",
            GadgetKind::F => "F",
            GadgetKind::G => "G",
            GadgetKind::A => "A",
        };
        f.write_str(name)
    }
}

impl FromStr for GadgetKind {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GadgetKind::ALL.into_iter().find(|k| k.to_string() == s).ok_or_else(|| GadgetError::UnknownKind(s.to_string()))
    }
}

/// Local wiring: (tail vertex, out-port, head vertex, in-port) with vertices
/// indexed within the gadget. Ports are given for positive literals.
type Wiring = &'static [(usize, u32, usize, u32)];

// out 1 -> in 2, out 2 -> in 1
const I_SLOTS: &[usize] = &[0];
const I_WIRING: Wiring = &[(0, 1, 0, 2), (0, 2, 0, 1)];

const E_SLOTS: &[usize] = &[0, 1];
const E_WIRING: Wiring = &[(0, 1, 1, 1), (0, 2, 1, 2), (1, 1, 0, 1), (1, 2, 0, 2)];

// two I-style loops whose crossing ports are joined to each other
const F_SLOTS: &[usize] = &[0, 1];
const F_WIRING: Wiring = &[(0, 1, 0, 2), (0, 2, 1, 1), (1, 1, 1, 2), (1, 2, 0, 1)];

// Four rows of (a, b, c); vertex 3r + k is row r, slot k. Inputs enter on
// the left (port 1 upper, 2 lower), outputs leave on the right (port 1
// upper, 2 lower). Rows are linked diagonally; the five loose ends of the
// drawing are joined pairwise.
const A_SLOTS: &[usize] = &[0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2];
const A_WIRING: Wiring = &[
    // row 0 straight links
    (0, 1, 1, 1),
    (1, 1, 2, 1),
    // row 3 straight links
    (9, 2, 10, 2),
    (10, 2, 11, 2),
    // diagonals between rows 0-1, 1-2, 2-3
    (0, 2, 3, 1),
    (3, 1, 1, 2),
    (1, 2, 4, 1),
    (4, 1, 2, 2),
    (2, 2, 5, 1),
    (3, 2, 6, 1),
    (6, 1, 4, 2),
    (4, 2, 7, 1),
    (7, 1, 5, 2),
    (5, 2, 8, 1),
    (6, 2, 9, 1),
    (9, 1, 7, 2),
    (7, 2, 10, 1),
    (10, 1, 8, 2),
    (8, 2, 11, 1),
    // loose ends
    (2, 1, 6, 2),
    (5, 1, 3, 2),
    (8, 1, 0, 1),
    (11, 1, 9, 2),
    (11, 2, 0, 2),
];

/// A gadget circuit with one polarization class per literal slot: class `k`
/// holds the vertices of slot `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetFragment {
    kind: GadgetKind,
    slots: Vec<Literal>,
    // (vertex id, slot)
    vertices: Vec<(VertexId, usize)>,
    edges: Vec<Edge>,
}

impl GadgetFragment {
    pub fn kind(&self) -> GadgetKind {
        self.kind
    }

    pub fn slots(&self) -> &[Literal] {
        &self.slots
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertex ids in allocation order, each with its slot.
    pub fn vertices(&self) -> &[(VertexId, usize)] {
        &self.vertices
    }

    pub fn slot_vertices(&self, slot: usize) -> Vec<VertexId> {
        self.vertices.iter().filter(|&&(_, s)| s == slot).map(|&(v, _)| v).collect()
    }

    /// Class id (0-based) of the class for `slot`.
    pub fn class_of_slot(&self, slot: usize) -> usize {
        slot
    }

    pub fn circuit(&self) -> SwitchingCircuit {
        SwitchingCircuit::new(self.vertices.iter().map(|&(v, _)| v).collect(), self.edges.clone())
    }

    pub fn polarization(&self) -> Polarization {
        Polarization::new((0..self.slots.len()).map(|s| self.slot_vertices(s)).collect())
    }

    /// The fragment as a validated circuit. Edge ids must start at 1, i.e.
    /// the fragment was built from a fresh allocator.
    pub fn polarized(&self) -> Result<PolarizedCircuit, CircuitError> {
        PolarizedCircuit::new(self.circuit(), self.polarization())
    }

    /// Exchanges the in-port labels at every vertex of `slot`.
    pub fn negate_slot(&mut self, slot: usize) {
        for e in &mut self.edges {
            if self.vertices.iter().any(|&(v, s)| v == e.head && s == slot) {
                e.in_port = 3 - e.in_port;
            }
        }
        self.slots[slot] = self.slots[slot].negate();
    }

    /// Cycle count when slot `k`'s class is routed by the truth value
    /// `variables[k]` of its variable.
    pub fn cycles_for_variables(&self, variables: &[bool]) -> Result<usize, CircuitError> {
        let pc = self.polarized()?;
        count_routing_cycles(&pc, &pc.binary_routing(|c| variables[c]))
    }
}

fn instantiate(
    kind: GadgetKind,
    slots: Vec<Literal>,
    parts: &[(&[usize], Wiring, &[bool])],
    alloc: &mut IdAllocator,
) -> GadgetFragment {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for &(vertex_slots, wiring, flip) in parts {
        let ids: Vec<VertexId> = vertex_slots.iter().map(|_| alloc.vertex()).collect();
        let negated = |local: usize| {
            let slot = vertex_slots[local];
            slots[slot].is_negated() != flip[slot]
        };
        for &(tail, out_port, head, in_port) in wiring {
            let in_port = if negated(head) { 3 - in_port } else { in_port };
            edges.push(Edge { id: alloc.edge(), tail: ids[tail], out_port, head: ids[head], in_port });
        }
        vertices.extend(ids.into_iter().zip(vertex_slots.iter().copied()));
    }
    GadgetFragment { kind, slots, vertices, edges }
}

fn distinct(kind: GadgetKind, lits: &[Literal]) -> Result<(), GadgetError> {
    for (k, a) in lits.iter().enumerate() {
        if let Some(b) = lits[k + 1..].iter().find(|b| b.variable() == a.variable()) {
            return Err(GadgetError::RepeatedVariable { gadget: kind, variable: b.variable() });
        }
    }
    Ok(())
}

pub fn build_i(lit: Literal, alloc: &mut IdAllocator) -> GadgetFragment {
    instantiate(GadgetKind::I, vec![lit], &[(I_SLOTS, I_WIRING, &[false])], alloc)
}

pub fn build_e(a: Literal, b: Literal, alloc: &mut IdAllocator) -> Result<GadgetFragment, GadgetError> {
    distinct(GadgetKind::E, &[a, b])?;
    Ok(instantiate(GadgetKind::E, vec![a, b], &[(E_SLOTS, E_WIRING, &[false, false])], alloc))
}

pub fn build_f(a: Literal, b: Literal, alloc: &mut IdAllocator) -> Result<GadgetFragment, GadgetError> {
    distinct(GadgetKind::F, &[a, b])?;
    Ok(instantiate(GadgetKind::F, vec![a, b], &[(F_SLOTS, F_WIRING, &[false, false])], alloc))
}

/// `F(a,b)` together with `E(¬a,b)`.
pub fn build_g(a: Literal, b: Literal, alloc: &mut IdAllocator) -> Result<GadgetFragment, GadgetError> {
    distinct(GadgetKind::G, &[a, b])?;
    Ok(instantiate(
        GadgetKind::G,
        vec![a, b],
        &[(F_SLOTS, F_WIRING, &[false, false]), (E_SLOTS, E_WIRING, &[true, false])],
        alloc,
    ))
}

pub fn build_a(a: Literal, b: Literal, c: Literal, alloc: &mut IdAllocator) -> Result<GadgetFragment, GadgetError> {
    distinct(GadgetKind::A, &[a, b, c])?;
    Ok(instantiate(GadgetKind::A, vec![a, b, c], &[(A_SLOTS, A_WIRING, &[false, false, false])], alloc))
}

/// Builds `kind` over the given literals.
pub fn build(kind: GadgetKind, lits: &[Literal], alloc: &mut IdAllocator) -> Result<GadgetFragment, GadgetError> {
    assert_eq!(lits.len(), kind.arity(), "{} takes {} literals", kind, kind.arity());
    match kind {
        GadgetKind::I => Ok(build_i(lits[0], alloc)),
        GadgetKind::E => build_e(lits[0], lits[1], alloc),
        GadgetKind::F => build_f(lits[0], lits[1], alloc),
        GadgetKind::G => build_g(lits[0], lits[1], alloc),
        GadgetKind::A => build_a(lits[0], lits[1], lits[2], alloc),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub gadget: String,
    /// Literal values, slot 1 first.
    pub assignment: Vec<bool>,
    pub expected: usize,
    pub actual: usize,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }

    pub fn assignment_string(&self) -> String {
        self.assignment.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub rows: Vec<TableRow>,
}

impl GadgetReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| !r.matches())
    }

    pub fn is_ok(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn first_mismatch_error(&self) -> Option<GadgetError> {
        self.mismatches().next().map(|row| GadgetError::Mismatch {
            gadget: row.gadget.clone(),
            assignment: row.assignment_string(),
            expected: row.expected,
            actual: row.actual,
        })
    }
}

/// Routes `fragment` under every assignment of its slot literals (rows in
/// binary order, slot 1 most significant) and compares against `expected`,
/// which maps literal values to a cycle count.
pub fn tabulate_fragment(
    name: &str,
    fragment: &GadgetFragment,
    expected: impl Fn(&[bool]) -> usize,
) -> Result<Vec<TableRow>, CircuitError> {
    let pc = fragment.polarized()?;
    let arity = fragment.slots.len();
    let mut rows = Vec::with_capacity(1 << arity);
    for mask in 0..1u32 << arity {
        let lits: Vec<bool> = (0..arity).map(|k| mask >> (arity - 1 - k) & 1 == 1).collect();
        let routing = pc.binary_routing(|c| lits[c] != fragment.slots[c].is_negated());
        let actual = count_routing_cycles(&pc, &routing)?;
        rows.push(TableRow { gadget: name.to_string(), assignment: lits.clone(), expected: expected(&lits), actual });
    }
    Ok(rows)
}

/// Tabulates an arbitrary circuit as gadget `kind`, class `c` carrying the
/// positive literal of slot `c + 1`.
pub fn tabulate_circuit(kind: GadgetKind, pc: &PolarizedCircuit) -> Result<Vec<TableRow>, GadgetError> {
    let arity = kind.arity();
    if pc.num_classes() != arity {
        return Err(GadgetError::SlotCount { gadget: kind, expected: arity, got: pc.num_classes() });
    }
    if let Some(class) = (0..arity).find(|&c| pc.class_valency(c) != 2) {
        return Err(GadgetError::SlotValency { class: class + 1 });
    }
    let mut rows = Vec::with_capacity(1 << arity);
    for mask in 0..1u32 << arity {
        let lits: Vec<bool> = (0..arity).map(|k| mask >> (arity - 1 - k) & 1 == 1).collect();
        let actual = count_routing_cycles(pc, &pc.binary_routing(|c| lits[c]))?;
        rows.push(TableRow { gadget: kind.to_string(), assignment: lits.clone(), expected: kind.expected_cycles(&lits), actual });
    }
    Ok(rows)
}

/// Truth tables of the canonical I, E, F, G and A gadgets (22 rows).
pub fn tabulate_gadgets() -> Result<GadgetReport, GadgetError> {
    let mut rows = Vec::new();
    for kind in GadgetKind::ALL {
        let lits: Vec<Literal> = (1..=kind.arity() as u32).map(Literal::positive).collect();
        let fragment = build(kind, &lits, &mut IdAllocator::new())?;
        rows.extend(tabulate_fragment(&kind.to_string(), &fragment, |l| kind.expected_cycles(l))?);
    }
    Ok(GadgetReport { rows })
}

/// Like [`tabulate_gadgets`], failing on the first mismatching row.
pub fn verify_gadget_tables() -> Result<GadgetReport, GadgetError> {
    let report = tabulate_gadgets()?;
    match report.first_mismatch_error() {
        Some(err) => Err(err),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{max_routing, validate_circuit, DEFAULT_MAX_ROUTINGS};

    fn pos(v: u32) -> Literal {
        Literal::positive(v)
    }

    fn neg(v: u32) -> Literal {
        Literal::negative(v)
    }

    fn fresh(kind: GadgetKind, lits: &[Literal]) -> GadgetFragment {
        build(kind, lits, &mut IdAllocator::new()).unwrap()
    }

    #[test]
    fn i_examples() {
        let i = fresh(GadgetKind::I, &[pos(1)]);
        assert_eq!(i.cycles_for_variables(&[true]).unwrap(), 2);
        assert_eq!(i.cycles_for_variables(&[false]).unwrap(), 1);
        let not_i = fresh(GadgetKind::I, &[neg(1)]);
        assert_eq!(not_i.cycles_for_variables(&[false]).unwrap(), 2);
        assert_eq!(not_i.cycles_for_variables(&[true]).unwrap(), 1);
    }

    #[test]
    fn e_examples() {
        let e = fresh(GadgetKind::E, &[pos(1), pos(2)]);
        for (a, b) in [(false, false), (true, true)] {
            assert_eq!(e.cycles_for_variables(&[a, b]).unwrap(), 2);
        }
        for (a, b) in [(false, true), (true, false)] {
            assert_eq!(e.cycles_for_variables(&[a, b]).unwrap(), 1);
        }
        let e_neg = fresh(GadgetKind::E, &[neg(1), pos(2)]);
        assert_eq!(e_neg.cycles_for_variables(&[false, true]).unwrap(), 2);
        assert_eq!(
            build_e(pos(1), neg(1), &mut IdAllocator::new()).unwrap_err(),
            GadgetError::RepeatedVariable { gadget: GadgetKind::E, variable: 1 }
        );
    }

    #[test]
    fn f_examples() {
        let f = fresh(GadgetKind::F, &[pos(1), pos(2)]);
        assert_eq!(f.cycles_for_variables(&[true, false]).unwrap(), 2);
        assert_eq!(f.cycles_for_variables(&[false, true]).unwrap(), 2);
        assert_eq!(f.cycles_for_variables(&[true, true]).unwrap(), 3);
        assert_eq!(f.cycles_for_variables(&[false, false]).unwrap(), 1);
        assert!(build_f(pos(2), pos(2), &mut IdAllocator::new()).is_err());
    }

    #[test]
    fn g_examples_and_union_sum() {
        let g = fresh(GadgetKind::G, &[pos(1), pos(2)]);
        assert_eq!(g.cycles_for_variables(&[false, false]).unwrap(), 2);
        assert_eq!(g.cycles_for_variables(&[true, false]).unwrap(), 4);
        let f = fresh(GadgetKind::F, &[pos(1), pos(2)]);
        let e = fresh(GadgetKind::E, &[neg(1), pos(2)]);
        for mask in 0..4 {
            let vals = [mask & 2 != 0, mask & 1 != 0];
            assert_eq!(
                g.cycles_for_variables(&vals).unwrap(),
                f.cycles_for_variables(&vals).unwrap() + e.cycles_for_variables(&vals).unwrap()
            );
        }
        assert!(build_g(neg(3), pos(3), &mut IdAllocator::new()).is_err());
    }

    #[test]
    fn a_examples() {
        let a = fresh(GadgetKind::A, &[pos(1), pos(2), pos(3)]);
        assert_eq!(a.cycles_for_variables(&[false, false, false]).unwrap(), 1);
        assert_eq!(a.cycles_for_variables(&[true, false, false]).unwrap(), 3);
        let counts: Vec<usize> = (0..8)
            .map(|m| a.cycles_for_variables(&[m & 4 != 0, m & 2 != 0, m & 1 != 0]).unwrap())
            .collect();
        assert!(counts.iter().all(|&c| c == 1 || c == 3));
        assert_eq!(counts.iter().filter(|&&c| c == 1).count(), 1);
        assert!(build_a(pos(1), pos(2), neg(1), &mut IdAllocator::new()).is_err());
    }

    #[test]
    fn verify_tables_is_clean() {
        let report = verify_gadget_tables().unwrap();
        assert_eq!(report.rows.len(), 22);
        let count = |name: &str| report.rows.iter().filter(|r| r.gadget == name).count();
        assert_eq!((count("I"), count("E"), count("F"), count("G"), count("A")), (2, 4, 4, 4, 8));
        assert!(report.is_ok());
    }

    #[test]
    fn corrupted_fragment_is_reported() {
        let mut e = fresh(GadgetKind::E, &[pos(1), pos(2)]);
        // swap the in-ports at vertex 2 only: E now behaves like E(a, ¬b)
        let head = e.slot_vertices(1)[0];
        for edge in e.edges.iter_mut().filter(|edge| edge.head == head) {
            edge.in_port = 3 - edge.in_port;
        }
        let rows = tabulate_fragment("E", &e, |l| GadgetKind::E.expected_cycles(l)).unwrap();
        let report = GadgetReport { rows };
        assert_eq!(report.mismatches().count(), 4);
        assert_eq!(
            report.first_mismatch_error().unwrap(),
            GadgetError::Mismatch { gadget: "E".into(), assignment: "00".into(), expected: 2, actual: 1 }
        );
    }

    #[test]
    fn fragments_are_binary_and_sized() {
        for kind in GadgetKind::ALL {
            let lits: Vec<Literal> = (1..=kind.arity() as u32).map(pos).collect();
            let f = fresh(kind, &lits);
            let shape = validate_circuit(&f.circuit(), &f.polarization()).unwrap();
            assert!(shape.max_valency <= 2);
            for slot in 0..kind.arity() {
                assert_eq!(f.slot_vertices(slot).len(), kind.vertices_per_slot(), "{kind} slot {slot}");
            }
            assert_eq!(shape.width, kind.vertices_per_slot());
        }
    }

    #[test]
    fn negating_a_slot_flips_its_variable() {
        for kind in GadgetKind::ALL {
            let arity = kind.arity();
            let lits: Vec<Literal> = (1..=arity as u32).map(pos).collect();
            let base = fresh(kind, &lits);
            for slot in 0..arity {
                let mut flipped_lits = lits.clone();
                flipped_lits[slot] = flipped_lits[slot].negate();
                let built = fresh(kind, &flipped_lits);
                let mut swapped = base.clone();
                swapped.negate_slot(slot);
                assert_eq!(built, swapped, "{kind} slot {slot}: negation is an in-port exchange");
                for mask in 0..1u32 << arity {
                    let vals: Vec<bool> = (0..arity).map(|k| mask >> k & 1 == 1).collect();
                    let mut toggled = vals.clone();
                    toggled[slot] = !toggled[slot];
                    assert_eq!(
                        built.cycles_for_variables(&vals).unwrap(),
                        base.cycles_for_variables(&toggled).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn optimal_routings_match_satisfying_assignments() {
        let cases = [
            (GadgetKind::I, 2, 1),
            (GadgetKind::E, 2, 2),
            (GadgetKind::F, 3, 1),
            (GadgetKind::G, 4, 3),
            (GadgetKind::A, 3, 7),
        ];
        for (kind, max, count) in cases {
            let lits: Vec<Literal> = (1..=kind.arity() as u32).map(pos).collect();
            let pc = fresh(kind, &lits).polarized().unwrap();
            let best = max_routing(&pc, DEFAULT_MAX_ROUTINGS).unwrap();
            assert_eq!((best.max_cycles, best.optimal_count), (max, count), "{kind}");
            assert_eq!(best.max_cycles, kind.satisfied_cycles());
        }
    }

    #[test]
    fn allocator_keeps_fragments_disjoint() {
        let mut alloc = IdAllocator::new();
        let a = build_i(pos(1), &mut alloc);
        let b = build_e(pos(1), pos(2), &mut alloc).unwrap();
        assert_eq!(a.vertices()[0].0, 1);
        assert_eq!(b.vertices()[0].0, 2);
        assert_eq!(b.edges()[0].id, 3);
        assert_eq!((alloc.vertices_issued(), alloc.edges_issued()), (3, 6));
    }

    #[test]
    fn tabulate_circuit_checks_shape() {
        let e = fresh(GadgetKind::E, &[pos(1), pos(2)]).polarized().unwrap();
        let rows = tabulate_circuit(GadgetKind::E, &e).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(TableRow::matches));
        let as_f = tabulate_circuit(GadgetKind::F, &e).unwrap();
        assert!(as_f.iter().any(|r| !r.matches()));
        assert_eq!(
            tabulate_circuit(GadgetKind::A, &e).unwrap_err(),
            GadgetError::SlotCount { gadget: GadgetKind::A, expected: 3, got: 2 }
        );
        assert_eq!("G".parse::<GadgetKind>().unwrap(), GadgetKind::G);
        assert_eq!("Z".parse::<GadgetKind>().unwrap_err(), GadgetError::UnknownKind("Z".into()));
    }
}
