//! Permutations of `{1..n}`, Cayley distance, and IDS generator sets.
//!
//! Points are 1-based at every public boundary and 0-based inside the image
//! table. Composition applies the right argument first: `compose(p, q)(i) =
//! p(q(i))`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("points are 1-based; 0 is not a point")]
    ZeroPoint,
    #[error("point {point} is outside 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("image table is not a bijection: {point} appears more than once")]
    NotABijection { point: usize },
    #[error("transposition ({0} {0}) is degenerate")]
    DegenerateTransposition(usize),
    #[error("ids violation: point {point} appears in more than one transposition")]
    IdsViolation { point: usize },
    #[error("generator {index} has no transpositions")]
    EmptyGenerator { index: usize },
}

/// A bijection on `{1..n}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Builds a permutation from a 1-based image list, e.g. `[2, 1, 4, 3]`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &point in images {
            if point == 0 || point > n {
                return Err(PermError::PointOutOfRange { point, n });
            }
            if std::mem::replace(&mut seen[point - 1], true) {
                return Err(PermError::NotABijection { point });
            }
            image.push(point - 1);
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation of degree `n` from disjoint cycles in 1-based
    /// cycle notation. Points not mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point == 0 || point > n {
                    return Err(PermError::PointOutOfRange { point, n });
                }
                if std::mem::replace(&mut seen[point - 1], true) {
                    return Err(PermError::NotABijection { point });
                }
                let next = cycle[(k + 1) % cycle.len()];
                image[point - 1] = next - 1;
            }
        }
        Ok(Permutation { image })
    }

    pub(crate) fn from_zero_based(image: Vec<usize>) -> Self {
        debug_assert!({
            let mut seen = vec![false; image.len()];
            image.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
        });
        Permutation { image }
    }

    pub fn transposition(n: usize, t: Transposition) -> Result<Self, PermError> {
        let mut p = Permutation::identity(n);
        for point in [t.x, t.y] {
            if point > n {
                return Err(PermError::PointOutOfRange { point, n });
            }
        }
        p.image.swap(t.x - 1, t.y - 1);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of the 1-based point `i`.
    ///
    /// Panics if `i` is not in `1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    /// The 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&i| i + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| self.image[j] == i)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Permutation {
        inverse(self)
    }

    pub fn cycle_count(&self) -> usize {
        cycle_count(self)
    }

    /// Cycle decomposition in 1-based notation, each cycle starting at its
    /// smallest point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Every permutation of degree `n` in lexicographic order of image tables.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation { image: current.clone() }];
        while next_lexicographic(&mut current) {
            out.push(Permutation { image: current.clone() });
        }
        out
    }
}

/// Advances `v` to the next permutation in lexicographic order; returns
/// false when `v` was the last one.
pub(crate) fn next_lexicographic(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

/// Cycle notation, omitting fixed points; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (k, point) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", point)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::from_images(&images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images()
    }
}

/// `compose(p, q)(i) = p(q(i))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch { left: p.degree(), right: q.degree() });
    }
    Ok(Permutation { image: q.image.iter().map(|&i| p.image[i]).collect() })
}

pub fn inverse(p: &Permutation) -> Permutation {
    let mut image = vec![0; p.degree()];
    for (i, &j) in p.image.iter().enumerate() {
        image[j] = i;
    }
    Permutation { image }
}

/// Number of orbits on `{1..n}`, fixed points included.
pub fn cycle_count(p: &Permutation) -> usize {
    count_cycles_zero_based(&p.image, &mut vec![false; p.degree()])
}

/// Cycle count of a 0-based image table, using `seen` as scratch space.
pub(crate) fn count_cycles_zero_based(image: &[usize], seen: &mut [bool]) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    let mut cycles = 0;
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = image[i];
        }
    }
    cycles
}

/// Minimum number of transpositions turning `p` into `q`:
/// `n - cycle_count(p⁻¹ q)`.
pub fn cayley_distance(p: &Permutation, q: &Permutation) -> Result<usize, PermError> {
    let quotient = compose(&inverse(p), q)?;
    Ok(quotient.degree() - cycle_count(&quotient))
}

/// A transposition `(x y)` on 1-based points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    x: usize,
    y: usize,
}

impl Transposition {
    pub fn new(x: usize, y: usize) -> Result<Self, PermError> {
        if x == 0 || y == 0 {
            return Err(PermError::ZeroPoint);
        }
        if x == y {
            return Err(PermError::DegenerateTransposition(x));
        }
        Ok(Transposition { x, y })
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.x, self.y)
    }
}

/// Generators that are products of disjoint transpositions, with every point
/// used at most once across the whole set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdsGeneratorSet {
    n: usize,
    generators: Vec<Vec<Transposition>>,
    width: usize,
}

impl IdsGeneratorSet {
    pub fn new(n: usize, generators: Vec<Vec<Transposition>>) -> Result<Self, PermError> {
        let width = validate_ids(n, &generators)?;
        Ok(IdsGeneratorSet { n, generators, width })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<Transposition>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest number of transpositions in one generator; 0 for no generators.
    pub fn width(&self) -> usize {
        self.width
    }

    /// The `j`-th generator (0-based) as a permutation.
    pub fn generator(&self, j: usize) -> Permutation {
        let mut image: Vec<usize> = (0..self.n).collect();
        for t in &self.generators[j] {
            image.swap(t.x - 1, t.y - 1);
        }
        Permutation { image }
    }

    /// Points moved by some generator.
    pub fn support(&self) -> Vec<usize> {
        let mut points: Vec<usize> =
            self.generators.iter().flatten().flat_map(|t| [t.x, t.y]).collect();
        points.sort_unstable();
        points
    }
}

/// Checks global support-disjointness and returns the width.
pub fn validate_ids(n: usize, generators: &[Vec<Transposition>]) -> Result<usize, PermError> {
    let mut used = vec![false; n];
    let mut width = 0;
    for (index, gen) in generators.iter().enumerate() {
        if gen.is_empty() {
            return Err(PermError::EmptyGenerator { index: index + 1 });
        }
        width = width.max(gen.len());
        for t in gen {
            for point in [t.x, t.y] {
                if point > n {
                    return Err(PermError::PointOutOfRange { point, n });
                }
                if std::mem::replace(&mut used[point - 1], true) {
                    return Err(PermError::IdsViolation { point });
                }
            }
        }
    }
    Ok(width)
}

/// A set of generator indices, bit `j` standing for generator `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(pub u64);

pub const MAX_SUBSET_GENERATORS: usize = 64;

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn full(t: usize) -> Self {
        if t >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << t) - 1)
        }
    }

    /// `j` is a 0-based generator index.
    pub fn contains(&self, j: usize) -> bool {
        j < 64 && self.0 >> j & 1 == 1
    }

    pub fn with(self, j: usize) -> Self {
        Subset(self.0 | 1 << j)
    }

    pub fn toggled(self, j: usize) -> Self {
        Subset(self.0 ^ 1 << j)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// 0-based indices of the members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |&j| self.contains(j))
    }

    /// Lexicographic comparison of the bit tuples `(b_1, ..., b_t)` with
    /// `false < true`, generator 1 compared first.
    pub fn lex_cmp(&self, other: &Subset) -> std::cmp::Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

/// Product of the selected generators. They commute, so order is irrelevant.
pub fn ids_element(gens: &IdsGeneratorSet, subset: Subset) -> Permutation {
    let mut image: Vec<usize> = (0..gens.n).collect();
    for j in subset.indices().take_while(|&j| j < gens.len()) {
        for t in &gens.generators[j] {
            image.swap(t.x - 1, t.y - 1);
        }
    }
    Permutation { image }
}
