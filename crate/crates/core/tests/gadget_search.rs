//! Exhaustive searches over small port wirings for the two-literal
//! gadget whose cycle count is `1 + a + b`.
//!
//! Vertices are numbered `0..v`, all of valency 2; out-slot and in-slot
//! `2w + (p - 1)` is port `p` of vertex `w`. A wiring sends out-slot `k` to
//! in-slot `wiring[k]`. Vertex `w` belongs to the variable `owner[w]` and is
//! swapped when that variable is true.

use subgroup_distance::gadget::{build_f, IdAllocator};
use subgroup_distance::sat::Literal;

fn cycles(wiring: &[usize], owner: &[usize], values: [bool; 2]) -> usize {
    let m = wiring.len();
    let next = |k: usize| {
        let slot = wiring[k];
        let (w, port) = (slot / 2, slot % 2);
        2 * w + if values[owner[w]] { 1 - port } else { port }
    };
    let mut seen = vec![false; m];
    let mut count = 0;
    for start in 0..m {
        if !seen[start] {
            count += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = next(k);
            }
        }
    }
    count
}

fn meets_table(wiring: &[usize], owner: &[usize]) -> bool {
    [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .all(|(a, b)| cycles(wiring, owner, [a, b]) == 1 + a as usize + b as usize)
}

/// Every permutation of `0..m`, Heap's algorithm.
fn all_wirings(m: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..m).collect();
    let mut c = vec![0; m];
    let mut out = vec![p.clone()];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[test]
fn no_two_vertex_per_variable_wiring_meets_the_table() {
    let wirings = all_wirings(8);
    assert_eq!(wirings.len(), 40320);
    let owner = [0, 0, 1, 1];
    assert_eq!(wirings.iter().filter(|w| meets_table(w, &owner)).count(), 0);
}

#[test]
fn one_vertex_per_variable_has_four_solutions_including_the_library_gadget() {
    let owner = [0, 1];
    let solutions: Vec<Vec<usize>> = all_wirings(4).into_iter().filter(|w| meets_table(w, &owner)).collect();
    assert_eq!(solutions.len(), 4);

    let f = build_f(Literal::positive(1), Literal::positive(2), &mut IdAllocator::new()).unwrap();
    let local = |v| f.vertices().iter().position(|&(u, _)| u == v).unwrap();
    assert_eq!(f.vertices().iter().map(|&(_, slot)| slot).collect::<Vec<_>>(), vec![0, 1]);
    let mut wiring = vec![0; 4];
    for e in f.edges() {
        wiring[2 * local(e.tail) + e.out_port as usize - 1] = 2 * local(e.head) + e.in_port as usize - 1;
    }
    assert!(solutions.contains(&wiring), "{wiring:?} not among {solutions:?}");
}

#[test]
fn flipping_one_vertex_changes_parity() {
    // on every 2-vertex wiring, toggling a single vertex moves the count by one
    for wiring in all_wirings(4) {
        for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
            let base = cycles(&wiring, &[0, 1], [a, b]);
            let flipped = cycles(&wiring, &[0, 1], [!a, b]);
            assert_eq!(base.abs_diff(flipped), 1, "{wiring:?} at ({a}, {b})");
        }
    }
}
