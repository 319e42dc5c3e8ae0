//! Brute-force oracles: exact distance to an IDS subgroup, breadth-first
//! Cayley distance, and capped subgroup closure.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::perm::{compose, count_cycles_zero_based, ids_element, PermError, Permutation, Subset, MAX_SUBSET_GENERATORS};
use crate::reduction::IdsDistanceInstance;

/// Default cap on the number of generators for subset enumeration.
pub const DEFAULT_MAX_SUBSETS: usize = 24;

/// Largest degree accepted by [`bfs_cayley_distance`].
pub const MAX_BFS_DEGREE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{generators} generators exceed the subset-enumeration cap of {cap}")]
    SubsetCapExceeded { generators: usize, cap: usize },
    #[error("degree {0} is too large for breadth-first search (at most {MAX_BFS_DEGREE})")]
    DegreeTooLarge(usize),
    #[error("subgroup closure exceeds the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDistance {
    pub distance: usize,
    /// Lexicographically least generator subset attaining the distance.
    pub witness: Subset,
    /// The subgroup element selected by `witness`.
    pub element: Permutation,
}

/// Walks all `2^t` subsets in Gray-code order, handing each subset and the
/// distance `d(η_S, π)` to `visit`.
fn scan_subsets(inst: &IdsDistanceInstance, cap: usize, mut visit: impl FnMut(Subset, usize)) -> Result<(), SolverError> {
    let gens = inst.ids();
    let t = gens.len();
    if t > cap.min(MAX_SUBSET_GENERATORS - 1) {
        return Err(SolverError::SubsetCapExceeded { generators: t, cap });
    }
    let n = inst.pi().degree();
    // d(η, π) = n - cycles(η⁻¹π) = n - cycles(πη), since η is an involution
    // and πη is conjugate to ηπ. πη' = (πη)·γ_j swaps two image entries per
    // transposition of γ_j.
    let mut product = inst.pi().zero_based().to_vec();
    let mut seen = vec![false; n];
    let mut subset = Subset::empty();
    visit(subset, n - count_cycles_zero_based(&product, &mut seen));
    for step in 1u64..1 << t {
        let j = step.trailing_zeros() as usize;
        for tr in &gens.generators()[j] {
            product.swap(tr.x() - 1, tr.y() - 1);
        }
        subset = subset.toggled(j);
        visit(subset, n - count_cycles_zero_based(&product, &mut seen));
    }
    Ok(())
}

/// `min_S d(η_S, π)` over every generator subset `S`.
pub fn distance_to_ids_subgroup(inst: &IdsDistanceInstance, cap: usize) -> Result<SubgroupDistance, SolverError> {
    let mut best: Option<(usize, Subset)> = None;
    scan_subsets(inst, cap, |subset, d| {
        let better = match best {
            None => true,
            Some((bd, bs)) => d < bd || (d == bd && subset.lex_cmp(&bs).is_lt()),
        };
        if better {
            best = Some((d, subset));
        }
    })?;
    let (distance, witness) = best.expect("at least the empty subset");
    Ok(SubgroupDistance { distance, witness, element: ids_element(inst.ids(), witness) })
}

/// Whether some element of the subgroup lies within the instance bound.
pub fn decide_distance(inst: &IdsDistanceInstance, cap: usize) -> Result<bool, SolverError> {
    Ok(distance_to_ids_subgroup(inst, cap)?.distance <= inst.bound_k())
}

/// Number of generator subsets at each distance from `π`.
pub fn distance_histogram(inst: &IdsDistanceInstance, cap: usize) -> Result<BTreeMap<usize, u64>, SolverError> {
    let mut histogram = BTreeMap::new();
    scan_subsets(inst, cap, |_, d| *histogram.entry(d).or_insert(0) += 1)?;
    Ok(histogram)
}

/// Shortest path from `p` to `q` in the Cayley graph of `S_n` generated by
/// all transpositions.
pub fn bfs_cayley_distance(p: &Permutation, q: &Permutation) -> Result<usize, SolverError> {
    let n = p.degree();
    if q.degree() != n {
        return Err(PermError::DegreeMismatch { left: n, right: q.degree() }.into());
    }
    if n > MAX_BFS_DEGREE {
        return Err(SolverError::DegreeTooLarge(n));
    }
    let target = q.zero_based().to_vec();
    let start = p.zero_based().to_vec();
    let mut dist: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(current) = queue.pop_front() {
        let d = dist[&current];
        if current == target {
            return Ok(d);
        }
        for x in 0..n {
            for y in x + 1..n {
                // right multiplication by (x y) swaps two image entries
                let mut next = current.clone();
                next.swap(x, y);
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    unreachable!("transpositions generate S_n")
}

/// The subgroup of `S_n` generated by `generators`, or an error once more
/// than `cap` elements have been found.
pub fn capped_closure(n: usize, generators: &[Permutation], cap: usize) -> Result<BTreeSet<Permutation>, SolverError> {
    for g in generators {
        if g.degree() != n {
            return Err(PermError::DegreeMismatch { left: n, right: g.degree() }.into());
        }
    }
    let identity = Permutation::identity(n);
    let mut elements = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(current) = queue.pop_front() {
        for g in generators {
            let next = compose(&current, g)?;
            if elements.insert(next.clone()) {
                if elements.len() > cap {
                    return Err(SolverError::ClosureCapExceeded { cap });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{cayley_distance, IdsGeneratorSet, Transposition};

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn inst(n: usize, pi: Permutation, gens: &[&[(usize, usize)]], k: usize) -> IdsDistanceInstance {
        let gens = gens
            .iter()
            .map(|g| g.iter().map(|&(x, y)| Transposition::new(x, y).unwrap()).collect())
            .collect();
        IdsDistanceInstance::new(IdsGeneratorSet::new(n, gens).unwrap(), pi, k).unwrap()
    }

    #[test]
    fn distance_examples() {
        let trivial = inst(4, cyc(4, &[&[1, 2, 3, 4]]), &[], 4);
        assert_eq!(distance_to_ids_subgroup(&trivial, DEFAULT_MAX_SUBSETS).unwrap().distance, 3);

        let member = inst(2, cyc(2, &[&[1, 2]]), &[&[(1, 2)]], 0);
        let found = distance_to_ids_subgroup(&member, DEFAULT_MAX_SUBSETS).unwrap();
        assert_eq!(found.distance, 0);
        assert_eq!(found.witness, Subset(1));
        assert_eq!(found.element, cyc(2, &[&[1, 2]]));

        // H = {I, (1 2)(3 4)}: d(I, π) = 3, d((1 2)(3 4), π) = 4 - cycles((1 2)(3 4)(1 2 3 4)) = 1
        let pair = inst(4, cyc(4, &[&[1, 2, 3, 4]]), &[&[(1, 2), (3, 4)]], 0);
        assert_eq!(cayley_distance(&Permutation::identity(4), pair.pi()).unwrap(), 3);
        assert_eq!(cayley_distance(&cyc(4, &[&[1, 2], &[3, 4]]), pair.pi()).unwrap(), 1);
        assert_eq!(distance_to_ids_subgroup(&pair, DEFAULT_MAX_SUBSETS).unwrap().distance, 1);
    }

    #[test]
    fn decide_examples() {
        let pair = inst(4, cyc(4, &[&[1, 2, 3, 4]]), &[&[(1, 2), (3, 4)]], 0);
        assert!(!decide_distance(&pair, DEFAULT_MAX_SUBSETS).unwrap());
        let loose = inst(4, cyc(4, &[&[1, 2, 3, 4]]), &[&[(1, 2), (3, 4)]], 4);
        assert!(decide_distance(&loose, DEFAULT_MAX_SUBSETS).unwrap());
        let member = inst(2, cyc(2, &[&[1, 2]]), &[&[(1, 2)]], 0);
        assert!(decide_distance(&member, DEFAULT_MAX_SUBSETS).unwrap());
    }

    #[test]
    fn witness_ties_break_lexicographically() {
        // π = (1 2)(3 4); gens (1 2), (3 4): distances I:2, {1}:1, {2}:1, {1,2}:0
        let both = inst(4, cyc(4, &[&[1, 2], &[3, 4]]), &[&[(1, 2)], &[(3, 4)]], 0);
        assert_eq!(distance_to_ids_subgroup(&both, 24).unwrap().witness, Subset(3));
        // π = [3,4,2,1]: {1} and {2} both reach 2; (b1,b2) = (0,1) < (1,0)
        let pi = Permutation::from_images(&[3, 4, 2, 1]).unwrap();
        let tie = inst(4, pi, &[&[(1, 2)], &[(3, 4)]], 0);
        let found = distance_to_ids_subgroup(&tie, 24).unwrap();
        assert_eq!((found.distance, found.witness), (2, Subset(2)));
        // π = [3,4,1,2]: {} and {1,2} both reach 2; the empty set wins
        let pi = Permutation::from_images(&[3, 4, 1, 2]).unwrap();
        let tie = inst(4, pi, &[&[(1, 2)], &[(3, 4)]], 0);
        let found = distance_to_ids_subgroup(&tie, 24).unwrap();
        assert_eq!((found.distance, found.witness), (2, Subset::empty()));
    }

    #[test]
    fn subset_cap() {
        let gens: Vec<Vec<(usize, usize)>> = (0..5).map(|k| vec![(2 * k + 1, 2 * k + 2)]).collect();
        let refs: Vec<&[(usize, usize)]> = gens.iter().map(Vec::as_slice).collect();
        let big = inst(10, Permutation::identity(10), &refs, 0);
        assert_eq!(
            distance_to_ids_subgroup(&big, 4).unwrap_err(),
            SolverError::SubsetCapExceeded { generators: 5, cap: 4 }
        );
        assert_eq!(distance_histogram(&big, 5).unwrap().values().sum::<u64>(), 32);
    }

    #[test]
    fn bfs_examples() {
        let id4 = Permutation::identity(4);
        assert_eq!(bfs_cayley_distance(&id4, &id4).unwrap(), 0);
        assert_eq!(bfs_cayley_distance(&id4, &cyc(4, &[&[1, 2], &[3, 4]])).unwrap(), 2);
        for p in Permutation::all(4) {
            assert_eq!(bfs_cayley_distance(&id4, &p).unwrap(), cayley_distance(&id4, &p).unwrap());
        }
        assert_eq!(
            bfs_cayley_distance(&Permutation::identity(8), &Permutation::identity(8)).unwrap_err(),
            SolverError::DegreeTooLarge(8)
        );
    }

    #[test]
    fn closure_examples() {
        assert_eq!(capped_closure(3, &[], 10).unwrap(), BTreeSet::from([Permutation::identity(3)]));
        let t = cyc(3, &[&[1, 2]]);
        assert_eq!(capped_closure(3, std::slice::from_ref(&t), 10).unwrap(), BTreeSet::from([Permutation::identity(3), t.clone()]));
        let s3 = capped_closure(3, &[t.clone(), cyc(3, &[&[1, 2, 3]])], 10).unwrap();
        assert_eq!(s3, Permutation::all(3).into_iter().collect());
        assert_eq!(
            capped_closure(3, &[t, cyc(3, &[&[1, 2, 3]])], 5).unwrap_err(),
            SolverError::ClosureCapExceeded { cap: 5 }
        );
    }
}
