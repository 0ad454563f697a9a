//! Perfect matchings on `2n` linearly ordered points.
//!
//! A [`Matching`] is stored as its fixed-point-free involution. Points are
//! numbered from 1 in every public signature; the 0-based storage is private.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MatchingError;

/// One arc of a matching, `left < right`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub left: usize,
    pub right: usize,
}

impl Arc {
    /// Builds an arc from two distinct points given in either order.
    pub fn new(a: usize, b: usize) -> Result<Arc, MatchingError> {
        if a == b {
            return Err(MatchingError::SelfPair(a));
        }
        Ok(Arc {
            left: a.min(b),
            right: a.max(b),
        })
    }

    /// Strict crossing `i < i' < j < j'` in either order.
    pub fn crosses(&self, other: &Arc) -> bool {
        (self.left < other.left && other.left < self.right && self.right < other.right)
            || (other.left < self.left && self.left < other.right && other.right < self.right)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.left, self.right)
    }
}

/// A perfect matching of size `n`, i.e. a fixed-point-free involution of
/// `{1, ..., 2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Matching {
    // partner[i] is the 0-based partner of 0-based point i
    partner: Vec<usize>,
}

impl Matching {
    /// The matching with no arcs.
    pub fn empty() -> Matching {
        Matching::default()
    }

    /// Builds a matching of size `n` from 1-based point pairs.
    ///
    /// Every point of `1..=2n` must be covered exactly once.
    pub fn from_arcs<I>(arcs: I, n: usize) -> Result<Matching, MatchingError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let points = 2 * n;
        let mut partner = vec![usize::MAX; points];
        for (a, b) in arcs {
            let arc = Arc::new(a, b)?;
            for p in [arc.left, arc.right] {
                if p == 0 || p > points {
                    return Err(MatchingError::OutOfRange { point: p, points });
                }
                if partner[p - 1] != usize::MAX {
                    return Err(MatchingError::DuplicatePoint(p));
                }
            }
            partner[arc.left - 1] = arc.right - 1;
            partner[arc.right - 1] = arc.left - 1;
        }
        if let Some(i) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(MatchingError::Uncovered(i + 1));
        }
        Ok(Matching { partner })
    }

    /// Builds a matching from one-line notation of the involution (1-based).
    pub fn from_permutation(perm: &[usize]) -> Result<Matching, MatchingError> {
        if !perm.len().is_multiple_of(2) {
            return Err(MatchingError::OddLength(perm.len()));
        }
        let n = perm.len() / 2;
        let mut arcs = Vec::with_capacity(n);
        for (i, &p) in perm.iter().enumerate() {
            if p == 0 || p > perm.len() {
                return Err(MatchingError::OutOfRange {
                    point: p,
                    points: perm.len(),
                });
            }
            if p == i + 1 {
                return Err(MatchingError::SelfPair(p));
            }
            if perm[p - 1] != i + 1 {
                return Err(MatchingError::NotInvolution(i + 1));
            }
            if i + 1 < p {
                arcs.push((i + 1, p));
            }
        }
        Matching::from_arcs(arcs, n)
    }

    pub(crate) fn from_partner_unchecked(partner: Vec<usize>) -> Matching {
        debug_assert!(partner
            .iter()
            .enumerate()
            .all(|(i, &p)| p != i && partner[p] == i));
        Matching { partner }
    }

    /// Number of arcs.
    pub fn size(&self) -> usize {
        self.partner.len() / 2
    }

    /// Number of points, `2n`.
    pub fn points(&self) -> usize {
        self.partner.len()
    }

    /// Partner of the 1-based point `i`.
    ///
    /// # Panics
    ///
    /// If `i` is not in `1..=2n`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i - 1] + 1
    }

    /// Whether the 1-based point `i` is the left end of its arc.
    pub fn is_left(&self, i: usize) -> bool {
        self.partner[i - 1] > i - 1
    }

    pub(crate) fn partners0(&self) -> &[usize] {
        &self.partner
    }

    /// One-line notation of the involution, 1-based.
    pub fn to_permutation(&self) -> Vec<usize> {
        self.partner.iter().map(|&p| p + 1).collect()
    }

    /// Arcs in ascending order of their left endpoint.
    pub fn arcs(&self) -> Vec<Arc> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i < p)
            .map(|(i, &p)| Arc {
                left: i + 1,
                right: p + 1,
            })
            .collect()
    }

    /// Reverses every maximal run of consecutive left endpoints.
    pub fn left_twist(&self) -> Matching {
        self.twist(true)
    }

    /// Reverses every maximal run of consecutive right endpoints.
    pub fn right_twist(&self) -> Matching {
        self.twist(false)
    }

    fn twist(&self, left_side: bool) -> Matching {
        let len = self.partner.len();
        let on_side = |i: usize| (self.partner[i] > i) == left_side;
        let mut partner = self.partner.clone();
        let mut a = 0;
        while a < len {
            if !on_side(a) {
                a += 1;
                continue;
            }
            let mut b = a;
            while b + 1 < len && on_side(b + 1) {
                b += 1;
            }
            // the arc attached at a+t moves to b-t
            for t in 0..=(b - a) {
                let other = self.partner[a + t];
                partner[b - t] = other;
                partner[other] = b - t;
            }
            a = b + 1;
        }
        Matching { partner }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for arc in self.arcs() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{arc}")?;
        }
        Ok(())
    }
}

impl FromStr for Matching {
    type Err = MatchingError;

    /// Parses the `"1-3 2-6 4-5 7-8"` form. The size is the number of pairs.
    fn from_str(s: &str) -> Result<Matching, MatchingError> {
        let mut arcs = Vec::new();
        for token in s.split_whitespace() {
            let (a, b) = token
                .split_once('-')
                .ok_or_else(|| MatchingError::Syntax(token.to_string()))?;
            let a = a
                .parse::<usize>()
                .map_err(|_| MatchingError::Syntax(token.to_string()))?;
            let b = b
                .parse::<usize>()
                .map_err(|_| MatchingError::Syntax(token.to_string()))?;
            arcs.push((a, b));
        }
        let n = arcs.len();
        Matching::from_arcs(arcs, n)
    }
}

/// `(2n-1)!!` as a machine integer, for loop bounds and sanity checks.
/// Overflows (and panics in debug) beyond `n = 19`.
pub fn matching_count_u64(n: usize) -> u64 {
    (1..=n as u64).map(|i| 2 * i - 1).product()
}

/// Lazy stream over all matchings of size `n`.
///
/// Point 1 is paired with each candidate in ascending order, and the rest is
/// filled recursively the same way, so matchings come grouped by the partner
/// of point 1. This is the order of the recursive construction that inserts
/// a new leftmost arc into a matching of size `n - 1`.
pub fn enumerate_matchings(n: usize) -> MatchingIter {
    MatchingIter::new(n)
}

pub struct MatchingIter {
    partner: Vec<usize>,
    // stack of (opener, index into candidates tried)
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl MatchingIter {
    fn new(n: usize) -> MatchingIter {
        MatchingIter {
            partner: vec![usize::MAX; 2 * n],
            stack: Vec::with_capacity(n),
            started: false,
            done: false,
        }
    }

    /// Advance the DFS to the next complete matching. Returns false at the end.
    fn advance(&mut self) -> bool {
        let len = self.partner.len();
        if !self.started {
            self.started = true;
            return self.descend(0);
        }
        // backtrack: try the next partner for the deepest opener
        while let Some((opener, last)) = self.stack.pop() {
            self.partner[opener] = usize::MAX;
            self.partner[last] = usize::MAX;
            let mut next = last + 1;
            while next < len && self.partner[next] != usize::MAX {
                next += 1;
            }
            if next < len {
                self.partner[opener] = next;
                self.partner[next] = opener;
                self.stack.push((opener, next));
                if self.descend(opener + 1) {
                    return true;
                }
            }
        }
        false
    }

    /// Fill every unpaired point from `from` onwards with the smallest choice.
    fn descend(&mut self, from: usize) -> bool {
        let len = self.partner.len();
        let mut i = from;
        loop {
            while i < len && self.partner[i] != usize::MAX {
                i += 1;
            }
            if i == len {
                return true;
            }
            let mut j = i + 1;
            while j < len && self.partner[j] != usize::MAX {
                j += 1;
            }
            debug_assert!(j < len, "odd number of free points");
            self.partner[i] = j;
            self.partner[j] = i;
            self.stack.push((i, j));
            i += 1;
        }
    }

    /// Visits every remaining matching through a borrowed 0-based partner
    /// slice, without allocating a [`Matching`] per item.
    pub(crate) fn for_each_raw<F: FnMut(&[usize])>(mut self, mut f: F) {
        while !self.done {
            if self.advance() {
                f(&self.partner);
            } else {
                self.done = true;
            }
        }
    }
}

impl Iterator for MatchingIter {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        if self.advance() {
            Some(Matching {
                partner: self.partner.clone(),
            })
        } else {
            self.done = true;
            None
        }
    }
}

/// Visits all matchings of size `n` whose point 1 is paired with the 1-based
/// point `first_partner`, in enumeration order.
pub(crate) fn for_each_with_first_partner<F: FnMut(&[usize])>(
    n: usize,
    first_partner: usize,
    mut f: F,
) {
    // enumerate the remaining 2n-2 points as a matching of size n-1 and
    // splice point 1 and its partner back in
    let fp = first_partner - 1;
    let mut full = vec![0usize; 2 * n];
    let lift = |q: usize| if q + 1 < fp { q + 1 } else { q + 2 };
    MatchingIter::new(n - 1).for_each_raw(|rest| {
        full[0] = fp;
        full[fp] = 0;
        for (q, &r) in rest.iter().enumerate() {
            full[lift(q)] = lift(r);
        }
        f(&full);
    });
}

/// Uniform random matching of size `n`, reproducible for a fixed seed.
pub fn random_matching(n: usize, seed: u64) -> Matching {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_matching_with(n, &mut rng)
}

/// Uniform random matching drawn from `rng`: the smallest unpaired point is
/// paired with a uniformly chosen point among the other unpaired ones.
pub fn random_matching_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matching {
    let len = 2 * n;
    let mut partner = vec![usize::MAX; len];
    // pool of unpaired points with a position index for O(1) removal
    let mut pool: Vec<usize> = (0..len).collect();
    let mut slot: Vec<usize> = (0..len).collect();
    let remove = |pool: &mut Vec<usize>, slot: &mut Vec<usize>, p: usize| {
        let at = slot[p];
        let last = *pool.last().expect("pool is non-empty");
        pool.swap_remove(at);
        if last != p {
            slot[last] = at;
        }
    };
    for i in 0..len {
        if partner[i] != usize::MAX {
            continue;
        }
        remove(&mut pool, &mut slot, i);
        let j = pool[rng.gen_range(0..pool.len())];
        remove(&mut pool, &mut slot, j);
        partner[i] = j;
        partner[j] = i;
    }
    Matching { partner }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn m(s: &str) -> Matching {
        s.parse().unwrap()
    }

    #[test]
    fn permutation_of_four_arc_example() {
        let mu = Matching::from_arcs([(1, 3), (2, 6), (4, 5), (7, 8)], 4).unwrap();
        assert_eq!(mu.to_permutation(), vec![3, 6, 1, 5, 4, 2, 8, 7]);
        assert_eq!(
            Matching::from_permutation(&mu.to_permutation()).unwrap(),
            mu
        );
        assert_eq!(mu.to_string(), "1-3 2-6 4-5 7-8");
    }

    #[test]
    fn small_and_empty() {
        let e = Matching::from_arcs(Vec::new(), 0).unwrap();
        assert_eq!(e.size(), 0);
        assert!(e.to_permutation().is_empty());
        assert_eq!(m("1-2").to_permutation(), vec![2, 1]);
        assert_eq!(m("").size(), 0);
    }

    #[test]
    fn from_arcs_errors() {
        assert_eq!(
            Matching::from_arcs([(1, 2), (2, 3)], 2),
            Err(MatchingError::DuplicatePoint(2))
        );
        assert_eq!(
            Matching::from_arcs([(1, 5)], 1),
            Err(MatchingError::OutOfRange {
                point: 5,
                points: 2
            })
        );
        assert_eq!(
            Matching::from_arcs([(3, 3)], 2),
            Err(MatchingError::SelfPair(3))
        );
        assert_eq!(
            Matching::from_arcs([(1, 4)], 2),
            Err(MatchingError::Uncovered(2))
        );
        assert!(Matching::from_permutation(&[2, 3, 1, 4]).is_err());
        assert!("1-x".parse::<Matching>().is_err());
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        for n in 0..=7 {
            let all: Vec<Matching> = enumerate_matchings(n).collect();
            assert_eq!(all.len() as u64, matching_count_u64(n), "n={n}");
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len(), "n={n}");
        }
    }

    #[test]
    fn enumeration_order_groups_by_first_partner() {
        let all: Vec<Matching> = enumerate_matchings(3).collect();
        let firsts: Vec<usize> = all.iter().map(|mu| mu.partner(1)).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        assert_eq!(firsts, sorted);
        assert_eq!(all[0].to_string(), "1-2 3-4 5-6");
        assert_eq!(all[14].to_string(), "1-6 2-5 3-4");
    }

    #[test]
    fn split_enumeration_matches_full_stream() {
        let n = 5;
        let full: Vec<Vec<usize>> = enumerate_matchings(n).map(|mu| mu.partner).collect();
        let mut split = Vec::new();
        for fp in 2..=2 * n {
            for_each_with_first_partner(n, fp, |p| split.push(p.to_vec()));
        }
        assert_eq!(full, split);
    }

    #[test]
    fn right_twist_example() {
        assert_eq!(m("1-4 2-3").right_twist(), m("1-3 2-4"));
        // pattern 321 as a matching twists to pattern 123
        assert_eq!(m("1-6 2-5 3-4").right_twist(), m("1-4 2-5 3-6"));
        assert_eq!(m("1-6 2-5 3-4").left_twist(), m("1-4 2-5 3-6"));
    }

    #[test]
    fn twists_are_size_preserving_involutions() {
        for n in 0..=5 {
            for mu in enumerate_matchings(n) {
                let l = mu.left_twist();
                let r = mu.right_twist();
                assert_eq!(l.size(), n);
                assert_eq!(l.left_twist(), mu);
                assert_eq!(r.right_twist(), mu);
            }
        }
    }

    #[test]
    fn random_matching_trivial_sizes() {
        assert_eq!(random_matching(0, 7).size(), 0);
        assert_eq!(random_matching(1, 99), m("1-2"));
        assert_eq!(random_matching(40, 5), random_matching(40, 5));
    }

    #[test]
    fn random_matching_is_uniform_for_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 100_000;
        let mut freq: HashMap<Matching, usize> = HashMap::new();
        for _ in 0..samples {
            *freq.entry(random_matching_with(3, &mut rng)).or_default() += 1;
        }
        assert_eq!(freq.len(), 15);
        for mu in enumerate_matchings(3) {
            let f = freq[&mu] as f64 / samples as f64;
            assert!((f - 1.0 / 15.0).abs() < 0.005, "{mu}: {f}");
        }
    }
}
