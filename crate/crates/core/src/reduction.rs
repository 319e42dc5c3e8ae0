//! Constructive transformations between 3-SAT, maximal routing on binary
//! polarized circuits, and distance to IDS subgroups, with the maps that
//! carry witnesses across.
//!
//! * [`sat_to_circuit`] splits every variable into one copy per occurrence,
//!   chains the copies with equivalence gadgets, and places one clause
//!   gadget per clause. A routing reaches `M = 3b + 4g + 2i + 2e` cycles
//!   exactly when the corresponding assignment satisfies the formula.
//! * [`circuit_to_ids`] takes edges as points: `π` follows the identity
//!   routing and each valency-2 class contributes the product of the
//!   transpositions of its vertices' out-edge pairs.
//! * [`ids_to_circuit`] goes the other way with a valency-1 vertex per point
//!   and a valency-2 vertex per transposition.
//!
//! In both directions a routing with `c` cycles corresponds to `η ∈ H` with
//! `d(η, π) = n - c`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{CircuitError, Edge, PolarizedCircuit, Polarization, Routing, SwitchingCircuit, VertexId};
use crate::gadget::{build, GadgetError, GadgetKind, IdAllocator};
use crate::perm::{IdsGeneratorSet, PermError, Permutation, Subset, Transposition};
use crate::sat::{Assignment, CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("clause {clause} is not in 3-SAT normal form (1 to 3 literals over distinct variables)")]
    NotNormalized { clause: usize },
    #[error("formula has no clauses; the reduced circuit would be empty")]
    EmptyFormula,
    #[error("vertex {vertex} has valency {valency}; only valencies 1 and 2 are supported")]
    ValencyTooLarge { vertex: VertexId, valency: usize },
    #[error("bound {k} exceeds the {n} available points")]
    BoundTooLarge { k: usize, n: usize },
    #[error("permutation has degree {pi} but the generators act on {ids} points")]
    DegreeMismatch { pi: usize, ids: usize },
    #[error("instance must act on at least one point")]
    NoPoints,
    #[error("assignment covers {got} variables, the split formula has {expected}")]
    AssignmentSize { expected: usize, got: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A formula in which the `j`-th occurrence of each original variable got
/// its own variable, plus the equivalences chaining the copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFormula {
    formula: CnfFormula,
    // origin[y - 1] = (original variable, occurrence number from 1)
    origin: Vec<(u32, u32)>,
    equivalences: Vec<(u32, u32)>,
}

impl SplitFormula {
    /// The clauses of the original formula over the split variables.
    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn num_variables(&self) -> usize {
        self.origin.len()
    }

    /// `(x, j)` for split variable `y`: `y` is the `j`-th occurrence of `x`.
    pub fn origin(&self, y: u32) -> (u32, u32) {
        self.origin[y as usize - 1]
    }

    pub fn origins(&self) -> &[(u32, u32)] {
        &self.origin
    }

    pub fn equivalences(&self) -> &[(u32, u32)] {
        &self.equivalences
    }

    /// Clauses plus each equivalence `a ≡ b` written as `(¬a ∨ b) ∧ (a ∨ ¬b)`.
    pub fn to_cnf(&self) -> CnfFormula {
        let mut clauses = self.formula.clauses().to_vec();
        for &(a, b) in &self.equivalences {
            clauses.push(vec![Literal::negative(a), Literal::positive(b)]);
            clauses.push(vec![Literal::positive(a), Literal::negative(b)]);
        }
        CnfFormula::new(self.num_variables(), clauses).expect("split variables are in range")
    }

    /// Copies each original variable's value to all of its split copies.
    pub fn lift(&self, original: &Assignment) -> Assignment {
        Assignment::new(self.origin.iter().map(|&(x, _)| original.value(x)).collect())
    }
}

/// Renames the `j`-th occurrence of `x_i` (scanning clauses in order) to a
/// fresh variable `y_i^j`, numbered in scan order, and records the chain
/// `y_i^1 ≡ y_i^2, …` for every original variable in ascending order.
pub fn split_variables(f: &CnfFormula) -> SplitFormula {
    let mut origin = Vec::new();
    let mut occurrences: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut clauses = Vec::with_capacity(f.clauses().len());
    for clause in f.clauses() {
        let mut renamed = Vec::with_capacity(clause.len());
        for lit in clause {
            let copies = occurrences.entry(lit.variable()).or_default();
            let y = origin.len() as u32 + 1;
            copies.push(y);
            origin.push((lit.variable(), copies.len() as u32));
            renamed.push(Literal::new(y, lit.is_negated()));
        }
        clauses.push(renamed);
    }
    let equivalences = occurrences.values().flat_map(|ys| ys.windows(2).map(|w| (w[0], w[1]))).collect();
    let formula = CnfFormula::new(origin.len(), clauses).expect("split variables are in range");
    SplitFormula { formula, origin, equivalences }
}

/// Gadget tallies: three-literal clauses (`b`), two-literal clauses (`g`),
/// unit clauses (`i`) and equivalences (`e`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GadgetCounts {
    pub b: usize,
    pub g: usize,
    pub i: usize,
    pub e: usize,
}

impl GadgetCounts {
    /// `3b + 4g + 2i + 2e`.
    pub fn target_cycles(&self) -> usize {
        3 * self.b + 4 * self.g + 2 * self.i + 2 * self.e
    }
}

#[derive(Debug, Clone)]
pub struct SatCircuitInstance {
    circuit: PolarizedCircuit,
    split: SplitFormula,
    counts: GadgetCounts,
}

impl SatCircuitInstance {
    pub fn circuit(&self) -> &PolarizedCircuit {
        &self.circuit
    }

    pub fn split(&self) -> &SplitFormula {
        &self.split
    }

    pub fn counts(&self) -> GadgetCounts {
        self.counts
    }

    /// Cycle count reached exactly by routings of satisfying assignments.
    pub fn target_m(&self) -> usize {
        self.counts.target_cycles()
    }

    /// Split variable encoded by each class; class `c` encodes `y_{c+1}`.
    pub fn class_to_variable(&self) -> Vec<u32> {
        (1..=self.circuit.num_classes() as u32).collect()
    }
}

/// Builds the polarized circuit for a 3-SAT-normalized formula.
pub fn sat_to_circuit(f: &CnfFormula) -> Result<SatCircuitInstance, ReductionError> {
    for (idx, clause) in f.clauses().iter().enumerate() {
        let distinct = clause.iter().enumerate().all(|(k, a)| clause[..k].iter().all(|b| b.variable() != a.variable()));
        if clause.is_empty() || clause.len() > 3 || !distinct {
            return Err(ReductionError::NotNormalized { clause: idx + 1 });
        }
    }
    if f.clauses().is_empty() {
        return Err(ReductionError::EmptyFormula);
    }

    let split = split_variables(f);
    let mut alloc = IdAllocator::new();
    let mut counts = GadgetCounts::default();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut classes: Vec<Vec<VertexId>> = vec![Vec::new(); split.num_variables()];

    let mut place = |kind: GadgetKind, lits: &[Literal], alloc: &mut IdAllocator| -> Result<(), ReductionError> {
        let fragment = build(kind, lits, alloc)?;
        for &(v, slot) in fragment.vertices() {
            vertices.push(v);
            classes[lits[slot].variable() as usize - 1].push(v);
        }
        edges.extend_from_slice(fragment.edges());
        Ok(())
    };

    for clause in split.formula().clauses() {
        let kind = match clause.len() {
            3 => {
                counts.b += 1;
                GadgetKind::A
            }
            2 => {
                counts.g += 1;
                GadgetKind::G
            }
            _ => {
                counts.i += 1;
                GadgetKind::I
            }
        };
        place(kind, clause, &mut alloc)?;
    }
    for &(a, b) in split.equivalences() {
        counts.e += 1;
        place(GadgetKind::E, &[Literal::positive(a), Literal::positive(b)], &mut alloc)?;
    }

    let circuit = PolarizedCircuit::new(SwitchingCircuit::new(vertices, edges), Polarization::new(classes))?;
    Ok(SatCircuitInstance { circuit, split, counts })
}

/// Class `c` is swapped exactly when split variable `y_{c+1}` is true.
pub fn assignment_to_routing(sci: &SatCircuitInstance, a: &Assignment) -> Result<Routing, ReductionError> {
    let expected = sci.split.num_variables();
    if a.len() != expected {
        return Err(ReductionError::AssignmentSize { expected, got: a.len() });
    }
    Ok(sci.circuit.binary_routing(|c| a.value(c as u32 + 1)))
}

/// A subgroup-distance instance: is some `η ∈ ⟨γ_1, …, γ_t⟩` within Cayley
/// distance `bound_k` of `π`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdsDistanceInstance {
    ids: IdsGeneratorSet,
    pi: Permutation,
    bound_k: usize,
}

impl IdsDistanceInstance {
    pub fn new(ids: IdsGeneratorSet, pi: Permutation, bound_k: usize) -> Result<Self, ReductionError> {
        if pi.degree() != ids.degree() {
            return Err(ReductionError::DegreeMismatch { pi: pi.degree(), ids: ids.degree() });
        }
        if pi.degree() == 0 {
            return Err(ReductionError::NoPoints);
        }
        if bound_k > pi.degree() {
            return Err(ReductionError::BoundTooLarge { k: bound_k, n: pi.degree() });
        }
        Ok(IdsDistanceInstance { ids, pi, bound_k })
    }

    pub fn ids(&self) -> &IdsGeneratorSet {
        &self.ids
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn bound_k(&self) -> usize {
        self.bound_k
    }

    pub fn degree(&self) -> usize {
        self.pi.degree()
    }

    pub fn with_bound(&self, bound_k: usize) -> Result<Self, ReductionError> {
        IdsDistanceInstance::new(self.ids.clone(), self.pi.clone(), bound_k)
    }
}

#[derive(Debug, Clone)]
pub struct CircuitToIds {
    pub instance: IdsDistanceInstance,
    /// 0-based class index behind each generator.
    pub generator_classes: Vec<usize>,
}

/// Edges become points. `π(e)` is the edge leaving `head(e)` on the
/// out-port equal to `e`'s in-port; each valency-2 class yields the product
/// of the transpositions of its vertices' two out-edges; the bound is
/// `#E - k`.
pub fn circuit_to_ids(c: &PolarizedCircuit, k: usize) -> Result<CircuitToIds, ReductionError> {
    let n = c.num_edges();
    if k > n {
        return Err(ReductionError::BoundTooLarge { k, n });
    }
    for &v in c.circuit().vertices() {
        let valency = c.valency(v);
        if valency > 2 {
            return Err(ReductionError::ValencyTooLarge { vertex: v, valency });
        }
    }
    let pi_images: Vec<usize> = c.edges().iter().map(|e| c.out_edge(e.head, e.in_port).id as usize).collect();
    let pi = Permutation::from_images(&pi_images)?;

    let mut generators = Vec::new();
    let mut generator_classes = Vec::new();
    for (class, members) in c.polarization().classes().iter().enumerate() {
        if c.class_valency(class) != 2 {
            continue;
        }
        let gen = members
            .iter()
            .map(|&v| Transposition::new(c.out_edge(v, 1).id as usize, c.out_edge(v, 2).id as usize))
            .collect::<Result<Vec<_>, _>>()?;
        generators.push(gen);
        generator_classes.push(class);
    }
    let ids = IdsGeneratorSet::new(n, generators)?;
    Ok(CircuitToIds { instance: IdsDistanceInstance::new(ids, pi, n - k)?, generator_classes })
}

#[derive(Debug, Clone)]
pub struct IdsToCircuit {
    pub circuit: PolarizedCircuit,
    /// Routings with at least this many cycles witness distance ≤ the bound.
    pub k_routing: usize,
    /// Vertex `P(k)` for point `k` is `point_vertex[k - 1]`.
    pub point_vertex: Vec<VertexId>,
    /// Vertices `Q(j, i)` of generator `j` (0-based), one per transposition.
    pub transposition_vertices: Vec<Vec<VertexId>>,
}

/// Builds the circuit with a valency-1 vertex `P(k)` per point and a
/// valency-2 vertex `Q(j, i)` per transposition `(x y)`, wired
/// `P(x) → Q` on in-port 1, `P(y) → Q` on in-port 2, `Q → P(π(x))` on
/// out-port 1 and `Q → P(π(y))` on out-port 2. Points outside every support
/// get a pass-through edge `P(k) → P(π(k))`. Classes are the generators'
/// `Q` vertices in generator order, then one singleton per `P` vertex.
pub fn ids_to_circuit(inst: &IdsDistanceInstance) -> Result<IdsToCircuit, ReductionError> {
    let n = inst.degree();
    let pi = inst.pi();
    let point_vertex: Vec<VertexId> = (1..=n as u32).collect();
    let mut next_vertex = n as u32 + 1;
    let mut edges = Vec::new();
    let mut push = |tail, out_port, head, in_port| {
        let id = edges.len() as u32 + 1;
        edges.push(Edge { id, tail, out_port, head, in_port });
    };

    let mut in_support = vec![false; n];
    let mut transposition_vertices = Vec::with_capacity(inst.ids().len());
    for gen in inst.ids().generators() {
        let mut qs = Vec::with_capacity(gen.len());
        for t in gen {
            let q = next_vertex;
            next_vertex += 1;
            let (x, y) = (t.x(), t.y());
            in_support[x - 1] = true;
            in_support[y - 1] = true;
            push(x as u32, 1, q, 1);
            push(y as u32, 1, q, 2);
            push(q, 1, pi.apply(x) as u32, 1);
            push(q, 2, pi.apply(y) as u32, 1);
            qs.push(q);
        }
        transposition_vertices.push(qs);
    }
    for k in 1..=n {
        if !in_support[k - 1] {
            push(k as u32, 1, pi.apply(k) as u32, 1);
        }
    }

    let mut vertices = point_vertex.clone();
    vertices.extend(transposition_vertices.iter().flatten());
    let mut classes = transposition_vertices.clone();
    classes.extend(point_vertex.iter().map(|&p| vec![p]));
    let circuit = PolarizedCircuit::new(SwitchingCircuit::new(vertices, edges), Polarization::new(classes))?;
    Ok(IdsToCircuit { circuit, k_routing: n - inst.bound_k(), point_vertex, transposition_vertices })
}

/// The element `η` matching a routing of [`ids_to_circuit`]'s output: the
/// product of the generators whose class is routed with the swap.
pub fn routing_to_group_element(inst: &IdsDistanceInstance, r: &Routing) -> Result<Permutation, ReductionError> {
    Ok(crate::perm::ids_element(inst.ids(), routing_subset(inst, r)?))
}

/// Generator subset selected by a routing of [`ids_to_circuit`]'s output.
pub fn routing_subset(inst: &IdsDistanceInstance, r: &Routing) -> Result<Subset, ReductionError> {
    let t = inst.ids().len();
    let expected = t + inst.degree();
    if r.perms().len() != expected {
        return Err(CircuitError::RoutingClassCount { expected, got: r.perms().len() }.into());
    }
    let mut subset = Subset::empty();
    for (class, p) in r.perms().iter().enumerate() {
        let valency = if class < t { 2 } else { 1 };
        if p.degree() != valency {
            return Err(CircuitError::RoutingDegree { class: class + 1, expected: valency, got: p.degree() }.into());
        }
        if class < t && !p.is_identity() {
            subset = subset.with(class);
        }
    }
    Ok(subset)
}

/// The routing of [`ids_to_circuit`]'s output matching generator subset `s`.
pub fn subset_to_routing(out: &IdsToCircuit, s: Subset) -> Routing {
    out.circuit.binary_routing(|c| s.contains(c))
}
