//! Random instance generators and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use subgroup_distance::circuit::{Edge, PolarizedCircuit, Polarization, SwitchingCircuit, VertexId};
use subgroup_distance::perm::{IdsGeneratorSet, Permutation, Transposition};
use subgroup_distance::reduction::IdsDistanceInstance;
use subgroup_distance::sat::{CnfFormula, Literal};

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).unwrap()
}

/// Valencies for a circuit with exactly `edges` edges, each 1 or 2.
fn random_valencies(rng: &mut impl Rng, edges: usize) -> Vec<usize> {
    let mut valencies = Vec::new();
    let mut left = edges;
    while left > 0 {
        let d = if left >= 2 && rng.gen_bool(0.6) { 2 } else { 1 };
        valencies.push(d);
        left -= d;
    }
    valencies
}

/// A switching circuit with valencies in {1, 2}, 1 to `max_edges` edges and
/// a random polarization whose classes group vertices of equal valency.
pub fn random_circuit(rng: &mut impl Rng, max_edges: usize) -> PolarizedCircuit {
    let num_edges = rng.gen_range(1..=max_edges);
    let valencies = random_valencies(rng, num_edges);
    let vertices: Vec<VertexId> = (1..=valencies.len() as VertexId).collect();
    let outs: Vec<(VertexId, u32)> =
        vertices.iter().flat_map(|&v| (1..=valencies[v as usize - 1] as u32).map(move |p| (v, p))).collect();
    let mut ins = outs.clone();
    ins.shuffle(rng);
    let edges = outs
        .iter()
        .zip(&ins)
        .enumerate()
        .map(|(k, (&(tail, out_port), &(head, in_port)))| Edge { id: k as u32 + 1, tail, out_port, head, in_port })
        .collect();

    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    for d in [1, 2] {
        let same: Vec<VertexId> = vertices.iter().copied().filter(|v| valencies[*v as usize - 1] == d).collect();
        if same.is_empty() {
            continue;
        }
        let mut groups: Vec<Vec<VertexId>> = vec![Vec::new(); same.len()];
        for v in same {
            let g = rng.gen_range(0..groups.len());
            groups[g].push(v);
        }
        classes.extend(groups.into_iter().filter(|g| !g.is_empty()));
    }
    PolarizedCircuit::new(SwitchingCircuit::new(vertices, edges), Polarization::new(classes)).unwrap()
}

/// An IDS instance with `n ≤ max_n`, at most `max_t` generators of width
/// at most `max_width`, random `π` and random bound.
pub fn random_ids_instance(rng: &mut impl Rng, max_n: usize, max_t: usize, max_width: usize) -> IdsDistanceInstance {
    let n = rng.gen_range(1..=max_n);
    let mut points: Vec<usize> = (1..=n).collect();
    points.shuffle(rng);
    let t = rng.gen_range(0..=max_t);
    let mut generators = Vec::new();
    let mut next = 0;
    for _ in 0..t {
        let room = (n - next) / 2;
        if room == 0 {
            break;
        }
        let size = rng.gen_range(1..=room.min(max_width));
        let gen = (0..size)
            .map(|s| Transposition::new(points[next + 2 * s], points[next + 2 * s + 1]).unwrap())
            .collect();
        next += 2 * size;
        generators.push(gen);
    }
    let ids = IdsGeneratorSet::new(n, generators).unwrap();
    let k = rng.gen_range(0..=n);
    IdsDistanceInstance::new(ids, random_permutation(rng, n), k).unwrap()
}

/// Clauses of 1 to 3 literals over distinct variables among `1..=vars`.
pub fn random_3sat(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let vars = rng.gen_range(1..=max_vars);
    let num_clauses = rng.gen_range(1..=max_clauses);
    let mut pool: Vec<u32> = (1..=vars as u32).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let len = rng.gen_range(1..=3.min(vars));
            pool.shuffle(rng);
            pool[..len].iter().map(|&v| Literal::new(v, rng.gen_bool(0.5))).collect()
        })
        .collect();
    CnfFormula::new(vars, clauses).unwrap()
}

/// Cycle count of the edge decomposition in which every vertex `v` sends
/// in-port `i` to out-port `routes[v][i - 1]`, followed edge by edge.
pub fn traced_cycles(edges: &[Edge], routes: &HashMap<VertexId, Vec<u32>>) -> usize {
    let by_out: HashMap<(VertexId, u32), usize> =
        edges.iter().enumerate().map(|(k, e)| ((e.tail, e.out_port), k)).collect();
    let mut visited = vec![false; edges.len()];
    let mut cycles = 0;
    for start in 0..edges.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut e = start;
        while !visited[e] {
            visited[e] = true;
            let port = routes[&edges[e].head][edges[e].in_port as usize - 1];
            e = by_out[&(edges[e].head, port)];
        }
    }
    cycles
}

/// All permutations of `1..=d` as image lists, by recursive insertion.
pub fn port_permutations(d: usize) -> Vec<Vec<u32>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for smaller in port_permutations(d - 1) {
        for pos in 0..d {
            let mut p = smaller.clone();
            p.insert(pos, d as u32);
            out.push(p);
        }
    }
    out
}

/// Maximum of [`traced_cycles`] over independent per-vertex routings.
pub fn traced_unpolarized_max(edges: &[Edge], valency: &HashMap<VertexId, usize>) -> usize {
    let mut vertices: Vec<VertexId> = valency.keys().copied().collect();
    vertices.sort_unstable();
    let mut routes = HashMap::new();
    let mut best = 0;
    search(edges, &vertices, valency, &mut routes, &mut best);
    best
}

fn search(
    edges: &[Edge],
    rest: &[VertexId],
    valency: &HashMap<VertexId, usize>,
    routes: &mut HashMap<VertexId, Vec<u32>>,
    best: &mut usize,
) {
    match rest.split_first() {
        None => *best = (*best).max(traced_cycles(edges, routes)),
        Some((&v, tail)) => {
            for p in port_permutations(valency[&v]) {
                routes.insert(v, p);
                search(edges, tail, valency, routes, best);
            }
        }
    }
}
