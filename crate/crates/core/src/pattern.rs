//! Endhered patterns and their occurrences in matchings.
//!
//! An endhered pattern of size `p` is a matching on `2p` points whose `p`
//! left endpoints all precede its `p` right endpoints; it is identified with
//! the permutation read off its right half. A matching contains the pattern
//! at `(i+1, j+1)` when points `i+1..=i+p` are left endpoints whose partners
//! are exactly `j+1..=j+p`, arranged as the pattern prescribes.

use std::fmt;
use std::str::FromStr;

use crate::error::PatternError;
use crate::matching::Matching;

/// A permutation of `1..=p`, `p >= 1`, read as an endhered pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndheredPattern {
    perm: Vec<usize>,
}

impl EndheredPattern {
    pub fn new(perm: Vec<usize>) -> Result<EndheredPattern, PatternError> {
        if perm.is_empty() {
            return Err(PatternError::Empty);
        }
        let p = perm.len();
        let mut seen = vec![false; p];
        for &v in &perm {
            if v == 0 || v > p || seen[v - 1] {
                return Err(PatternError::NotPermutation(format!("{perm:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(EndheredPattern { perm })
    }

    /// All `p!` patterns of size `p` in lexicographic order.
    pub fn all_of_size(p: usize) -> Vec<EndheredPattern> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=p).collect();
        if p == 0 {
            return out;
        }
        loop {
            out.push(EndheredPattern {
                perm: current.clone(),
            });
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> EndheredPattern {
        let mut inv = vec![0; self.perm.len()];
        for (s, &v) in self.perm.iter().enumerate() {
            inv[v - 1] = s + 1;
        }
        EndheredPattern { perm: inv }
    }

    /// `π_p ... π_1`, the image under the right twist.
    pub fn reverse(&self) -> EndheredPattern {
        EndheredPattern {
            perm: self.perm.iter().rev().copied().collect(),
        }
    }

    /// `(p+1-π_1) ... (p+1-π_p)`, the image under the left twist.
    pub fn complement(&self) -> EndheredPattern {
        let p = self.perm.len();
        EndheredPattern {
            perm: self.perm.iter().map(|&v| p + 1 - v).collect(),
        }
    }

    /// The pattern as a matching of size `p` with its occurrence at `(1, p+1)`.
    pub fn as_matching(&self) -> Matching {
        let p = self.perm.len();
        let inv = self.inverse();
        let arcs = inv.perm.iter().enumerate().map(|(s, &v)| (s + 1, v + p));
        Matching::from_arcs(arcs, p).expect("a permutation always yields a matching")
    }

    /// Encoding of the inverse permutation used by the window scanner.
    pub(crate) fn code(&self) -> u64 {
        let inv = self.inverse();
        encode(inv.perm.iter().map(|&v| v - 1), self.perm.len())
    }
}

fn encode<I: Iterator<Item = usize>>(digits: I, base: usize) -> u64 {
    digits.fold(0u64, |acc, d| acc * base as u64 + d as u64)
}

fn next_permutation(v: &mut [usize]) -> bool {
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

impl fmt::Display for EndheredPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.perm.len() < 10 {
            for v in &self.perm {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.perm.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for EndheredPattern {
    type Err = PatternError;

    /// Digit strings such as `"132"`; sizes of ten or more use commas.
    fn from_str(s: &str) -> Result<EndheredPattern, PatternError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PatternError::Empty);
        }
        let bad = || PatternError::NotPermutation(s.to_string());
        let perm: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        EndheredPattern::new(perm).map_err(|_| bad())
    }
}

/// Position of one occurrence: first starting point and first ending point,
/// both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub start: usize,
    pub end: usize,
}

/// If the `p` points starting at 0-based `i` are left endpoints whose
/// partners form a consecutive block, returns the 0-based first point of
/// that block.
#[inline]
pub(crate) fn endhered_block(partner: &[usize], i: usize, p: usize) -> Option<usize> {
    let block = &partner[i..i + p];
    let mut lo = usize::MAX;
    let mut hi = 0;
    for (t, &q) in block.iter().enumerate() {
        if q < i + t {
            return None;
        }
        lo = lo.min(q);
        hi = hi.max(q);
    }
    // partners are distinct, so a span of p means a consecutive block
    (hi - lo + 1 == p).then_some(lo)
}

/// Like [`endhered_block`] but also encodes the realized inverse permutation
/// in base `p`. Only meaningful while `p^p` fits in a `u64` (`p <= 15`).
#[inline]
pub(crate) fn window_code(partner: &[usize], i: usize, p: usize) -> Option<u64> {
    let lo = endhered_block(partner, i, p)?;
    Some(encode(partner[i..i + p].iter().map(|&q| q - lo), p))
}

fn scan<'a>(
    partner: &'a [usize],
    pat: &'a EndheredPattern,
) -> impl Iterator<Item = Occurrence> + 'a {
    let p = pat.size();
    let inv = pat.inverse();
    let last = if partner.len() >= 2 * p {
        partner.len() - p + 1
    } else {
        0
    };
    (0..last).filter_map(move |i| {
        let lo = endhered_block(partner, i, p)?;
        let hit = partner[i..i + p]
            .iter()
            .zip(inv.as_slice())
            .all(|(&q, &v)| q - lo + 1 == v);
        hit.then_some(Occurrence {
            start: i + 1,
            end: lo + 1,
        })
    })
}

/// Every occurrence of `pat` in `m`, in ascending start order.
pub fn find_occurrences(m: &Matching, pat: &EndheredPattern) -> Vec<Occurrence> {
    scan(m.partners0(), pat).collect()
}

/// Number of occurrences of `pat` in `m`.
pub fn count_occurrences(m: &Matching, pat: &EndheredPattern) -> usize {
    scan(m.partners0(), pat).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::enumerate_matchings;
    use proptest::prelude::*;

    fn pat(s: &str) -> EndheredPattern {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Matching {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(pat("132").as_slice(), &[1, 3, 2]);
        assert_eq!(pat("132").to_string(), "132");
        assert!("122".parse::<EndheredPattern>().is_err());
        assert!("".parse::<EndheredPattern>().is_err());
        assert!("1a".parse::<EndheredPattern>().is_err());
        let big: EndheredPattern = "10,1,2,3,4,5,6,7,8,9".parse().unwrap();
        assert_eq!(big.size(), 10);
        assert_eq!(big.to_string(), "10,1,2,3,4,5,6,7,8,9");
    }

    #[test]
    fn as_matching_examples() {
        assert_eq!(pat("21").as_matching(), m("1-4 2-3"));
        assert_eq!(pat("12").as_matching(), m("1-3 2-4"));
        assert_eq!(pat("231").as_matching(), m("1-6 2-4 3-5"));
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(
            find_occurrences(&m("1-6 2-5 3-4"), &pat("21")),
            vec![
                Occurrence { start: 1, end: 5 },
                Occurrence { start: 2, end: 4 }
            ]
        );
        assert_eq!(
            find_occurrences(&m("1-3 2-4"), &pat("12")),
            vec![Occurrence { start: 1, end: 3 }]
        );
        assert!(find_occurrences(&m("1-3 2-6 4-5 7-8"), &pat("21")).is_empty());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_occurrences(&m("1-6 2-5 3-4"), &pat("321")), 1);
        assert_eq!(count_occurrences(&Matching::empty(), &pat("21")), 0);
        assert_eq!(count_occurrences(&m("1-4 2-3"), &pat("21")), 1);
    }

    #[test]
    fn twist_images_of_patterns() {
        assert_eq!(pat("321").reverse(), pat("123"));
        assert_eq!(pat("231").reverse(), pat("132"));
        assert_eq!(pat("312").reverse(), pat("213"));
        assert_eq!(pat("321").complement(), pat("123"));
        assert_eq!(pat("132").complement(), pat("312"));
        assert_eq!(pat("213").complement(), pat("231"));
        for p in EndheredPattern::all_of_size(3) {
            assert_eq!(p.as_matching().right_twist(), p.reverse().as_matching());
            assert_eq!(p.as_matching().left_twist(), p.complement().as_matching());
        }
    }

    #[test]
    fn all_of_size_counts() {
        assert_eq!(EndheredPattern::all_of_size(1).len(), 1);
        assert_eq!(EndheredPattern::all_of_size(3).len(), 6);
        assert_eq!(EndheredPattern::all_of_size(4).len(), 24);
    }

    /// Inserts the arcs of `pat` into `host` so that its left block sits right
    /// before host point `a` and its right block right before host point `b`
    /// (0-based gaps, `a <= b`).
    fn plant(host: &Matching, pat: &EndheredPattern, a: usize, b: usize) -> (Matching, usize) {
        let p = pat.size();
        let shift = |q: usize| {
            // host 0-based q -> new 0-based position
            q + if q >= a { p } else { 0 } + if q >= b { p } else { 0 }
        };
        let mut arcs: Vec<(usize, usize)> = host
            .arcs()
            .iter()
            .map(|arc| (shift(arc.left - 1) + 1, shift(arc.right - 1) + 1))
            .collect();
        let right_base = b + p;
        let inv = pat.inverse();
        for s in 0..p {
            arcs.push((a + s + 1, right_base + inv.as_slice()[s]));
        }
        (Matching::from_arcs(arcs, host.size() + p).unwrap(), a + 1)
    }

    #[test]
    fn planted_occurrences_are_detected() {
        for p in 1..=3 {
            for pattern in EndheredPattern::all_of_size(p) {
                for n in 0..=(5 - p) {
                    for host in enumerate_matchings(n) {
                        let len = host.points();
                        for a in 0..=len {
                            for b in a..=len {
                                let (mu, start) = plant(&host, &pattern, a, b);
                                let occ = find_occurrences(&mu, &pattern);
                                assert!(
                                    occ.iter().any(|o| o.start == start),
                                    "{pattern} planted in {host} at ({a},{b}) -> {mu}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn occurrences_are_well_formed(seed in any::<u64>(), n in 0usize..30, p in 1usize..4) {
            let mu = crate::matching::random_matching(n, seed);
            for pattern in EndheredPattern::all_of_size(p) {
                let occ = find_occurrences(&mu, &pattern);
                prop_assert!(occ.len() <= n);
                for w in occ.windows(2) {
                    prop_assert!(w[0].start < w[1].start);
                }
                for o in &occ {
                    prop_assert!(o.start >= 1);
                    prop_assert!(o.end >= o.start + p);
                    prop_assert!(o.end + p - 1 <= 2 * n);
                    for s in 0..p {
                        let inv = pattern.inverse();
                        prop_assert_eq!(mu.partner(o.start + s), inv.as_slice()[s] + o.end - 1);
                    }
                }
            }
        }
    }
}
