//! Exhaustive and sampled occurrence distributions.
//!
//! Exhaustive scans visit all `(2n-1)!!` matchings. Work is split by the
//! partner of point 1 and merged in that order, so results do not depend on
//! the number of worker threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::CountError;
use crate::matching::{for_each_with_first_partner, random_matching_with};
use crate::pattern::{window_code, EndheredPattern};

/// `k -> number of matchings with exactly k occurrences`.
pub type Distribution = BTreeMap<usize, u64>;

/// `(k, m) -> number of matchings with k occurrences of the first pattern and
/// m of the second`.
pub type JointDistribution = BTreeMap<(usize, usize), u64>;

/// Size limits for exhaustive scans. Exceeding one is an error rather than a
/// scan that never finishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForce {
    /// Largest matching size scanned; `(2*10-1)!!` is about `6.5e8`.
    pub max_n: usize,
    /// Largest pattern size accepted.
    pub max_pattern: usize,
    /// Largest pattern size for [`BruteForce::wilf_classes`], which scans all
    /// `p!` patterns.
    pub max_wilf_size: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            max_n: 10,
            max_pattern: 6,
            max_wilf_size: 3,
        }
    }
}

impl BruteForce {
    /// Limits with the matching-size guard lifted. The pattern-size limits
    /// stay in place.
    pub fn allow_large() -> Self {
        BruteForce {
            max_n: usize::MAX,
            ..BruteForce::default()
        }
    }

    fn check(&self, n: usize, patterns: &[&EndheredPattern]) -> Result<(), CountError> {
        if n > self.max_n {
            return Err(CountError::SizeGuard {
                n,
                limit: self.max_n,
            });
        }
        if let Some(p) = patterns
            .iter()
            .map(|p| p.size())
            .find(|&p| p > self.max_pattern)
        {
            return Err(CountError::PatternSizeGuard {
                p,
                limit: self.max_pattern,
            });
        }
        Ok(())
    }

    /// Distribution of occurrence counts of `pat` over all matchings of size `n`.
    pub fn distribution(
        &self,
        n: usize,
        pat: &EndheredPattern,
    ) -> Result<Distribution, CountError> {
        Ok(self.distributions(n, std::slice::from_ref(pat))?.remove(0))
    }

    /// Distributions of several patterns computed in one pass.
    pub fn distributions(
        &self,
        n: usize,
        patterns: &[EndheredPattern],
    ) -> Result<Vec<Distribution>, CountError> {
        self.check(n, &patterns.iter().collect::<Vec<_>>())?;
        let scanner = Scanner::new(patterns);
        let histograms = scan_all(
            n,
            patterns.len(),
            n + 1,
            |partner, hist: &mut Vec<Vec<u64>>| {
                let counts = scanner.counts(partner);
                for (h, &k) in hist.iter_mut().zip(&counts) {
                    h[k] += 1;
                }
            },
        );
        Ok(histograms.into_iter().map(to_distribution).collect())
    }

    /// Joint distribution of occurrence counts of two patterns.
    pub fn joint_distribution(
        &self,
        n: usize,
        first: &EndheredPattern,
        second: &EndheredPattern,
    ) -> Result<JointDistribution, CountError> {
        self.check(n, &[first, second])?;
        let patterns = [first.clone(), second.clone()];
        let scanner = Scanner::new(&patterns);
        let side = n + 1;
        let flat = scan_all(n, 1, side * side, |partner, hist: &mut Vec<Vec<u64>>| {
            let c = scanner.counts(partner);
            hist[0][c[0] * side + c[1]] += 1;
        });
        Ok(flat[0]
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v > 0)
            .map(|(idx, &v)| ((idx / side, idx % side), v))
            .collect())
    }

    /// Groups all `p!` patterns of size `p` by their distributions over
    /// matching sizes `1..=max_n`.
    ///
    /// Each class is sorted, and classes are ordered by their smallest member.
    pub fn wilf_classes(
        &self,
        p: usize,
        max_n: usize,
    ) -> Result<Vec<Vec<EndheredPattern>>, CountError> {
        if p == 0 || p > self.max_wilf_size {
            return Err(CountError::PatternSizeGuard {
                p,
                limit: self.max_wilf_size,
            });
        }
        let patterns = EndheredPattern::all_of_size(p);
        let mut profiles: Vec<Vec<Distribution>> = vec![Vec::new(); patterns.len()];
        for n in 1..=max_n {
            for (profile, dist) in profiles.iter_mut().zip(self.distributions(n, &patterns)?) {
                profile.push(dist);
            }
        }
        let mut classes: Vec<(Vec<Distribution>, Vec<EndheredPattern>)> = Vec::new();
        for (pattern, profile) in patterns.into_iter().zip(profiles) {
            match classes.iter_mut().find(|(key, _)| *key == profile) {
                Some((_, members)) => members.push(pattern),
                None => classes.push((profile, vec![pattern])),
            }
        }
        let mut out: Vec<Vec<EndheredPattern>> = classes.into_iter().map(|(_, m)| m).collect();
        for class in &mut out {
            class.sort();
        }
        out.sort();
        Ok(out)
    }
}

/// Exhaustive distribution with the default guard.
pub fn distribution_bruteforce(
    n: usize,
    pat: &EndheredPattern,
) -> Result<Distribution, CountError> {
    BruteForce::default().distribution(n, pat)
}

/// Exhaustive joint distribution with the default guard.
pub fn joint_distribution_bruteforce(
    n: usize,
    first: &EndheredPattern,
    second: &EndheredPattern,
) -> Result<JointDistribution, CountError> {
    BruteForce::default().joint_distribution(n, first, second)
}

/// Wilf classes with the default guard.
pub fn wilf_classes(p: usize, max_n: usize) -> Result<Vec<Vec<EndheredPattern>>, CountError> {
    BruteForce::default().wilf_classes(p, max_n)
}

fn to_distribution(hist: Vec<u64>) -> Distribution {
    hist.into_iter()
        .enumerate()
        .filter(|&(_, v)| v > 0)
        .collect()
}

/// Runs `visit` over every matching of size `n`, in parallel by the partner
/// of point 1, with `tables` histograms of `width` cells each.
fn scan_all<F>(n: usize, tables: usize, width: usize, visit: F) -> Vec<Vec<u64>>
where
    F: Fn(&[usize], &mut Vec<Vec<u64>>) + Sync,
{
    let fresh = || vec![vec![0u64; width]; tables];
    if n == 0 {
        let mut hist = fresh();
        visit(&[], &mut hist);
        return hist;
    }
    let parts: Vec<Vec<Vec<u64>>> = (2..=2 * n)
        .into_par_iter()
        .map(|fp| {
            let mut hist = fresh();
            for_each_with_first_partner(n, fp, |partner| visit(partner, &mut hist));
            hist
        })
        .collect();
    let mut total = fresh();
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            for (a, b) in t.iter_mut().zip(p) {
                *a += b;
            }
        }
    }
    total
}

/// Counts several patterns at once, sharing the window scan between patterns
/// of the same size.
struct Scanner {
    // (pattern size, codes of the patterns of that size, their indices)
    groups: Vec<(usize, Vec<(u64, usize)>)>,
    len: usize,
}

impl Scanner {
    fn new(patterns: &[EndheredPattern]) -> Scanner {
        let mut groups: Vec<(usize, Vec<(u64, usize)>)> = Vec::new();
        for (idx, pat) in patterns.iter().enumerate() {
            let entry = (pat.code(), idx);
            match groups.iter_mut().find(|(p, _)| *p == pat.size()) {
                Some((_, list)) => list.push(entry),
                None => groups.push((pat.size(), vec![entry])),
            }
        }
        Scanner {
            groups,
            len: patterns.len(),
        }
    }

    fn counts(&self, partner: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.len];
        for (p, members) in &self.groups {
            let p = *p;
            if partner.len() < 2 * p {
                continue;
            }
            for i in 0..=partner.len() - p {
                let Some(code) = window_code(partner, i, p) else {
                    continue;
                };
                for &(c, idx) in members {
                    if c == code {
                        counts[idx] += 1;
                    }
                }
            }
        }
        counts
    }
}

/// Number of samples drawn from one random stream.
const CHUNK: usize = 4096;

/// Empirical occurrence counts over uniform random matchings.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarlo {
    pub samples: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl MonteCarlo {
    /// Draws `samples` uniform matchings of size `n`.
    ///
    /// Samples are drawn in fixed chunks, chunk `c` from stream `c` of a
    /// ChaCha generator seeded with `seed`, so the result is the same for
    /// any thread count.
    pub fn run(
        n: usize,
        pat: &EndheredPattern,
        samples: usize,
        seed: u64,
    ) -> Result<MonteCarlo, CountError> {
        if samples == 0 {
            return Err(CountError::NoSamples);
        }
        let chunks = samples.div_ceil(CHUNK);
        let parts: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let take = CHUNK.min(samples - c * CHUNK);
                let mut hist = vec![0u64; n + 1];
                for _ in 0..take {
                    let m = random_matching_with(n, &mut rng);
                    hist[crate::pattern::count_occurrences(&m, pat)] += 1;
                }
                hist
            })
            .collect();
        let mut hist = vec![0u64; n + 1];
        for part in parts {
            for (a, b) in hist.iter_mut().zip(part) {
                *a += b;
            }
        }
        Ok(MonteCarlo {
            samples,
            counts: to_distribution(hist),
        })
    }

    pub fn frequencies(&self) -> BTreeMap<usize, f64> {
        self.counts
            .iter()
            .map(|(&k, &v)| (k, v as f64 / self.samples as f64))
            .collect()
    }

    /// Total-variation distance between the empirical law and `pmf` on the
    /// nonnegative integers. The mass of `pmf` beyond the evaluated range is
    /// added as is.
    pub fn tv_distance<F: Fn(usize) -> f64>(&self, pmf: F) -> f64 {
        let freq = self.frequencies();
        let top = freq.keys().next_back().copied().unwrap_or(0) + 64;
        let mut diff = 0.0;
        let mut mass = 0.0;
        for k in 0..=top {
            let q = pmf(k);
            mass += q;
            diff += (freq.get(&k).copied().unwrap_or(0.0) - q).abs();
        }
        0.5 * (diff + (1.0 - mass).max(0.0))
    }
}

/// Empirical frequencies of occurrence counts of `pat` in `samples` uniform
/// matchings of size `n`.
pub fn monte_carlo_distribution(
    n: usize,
    pat: &EndheredPattern,
    samples: usize,
    seed: u64,
) -> Result<BTreeMap<usize, f64>, CountError> {
    Ok(MonteCarlo::run(n, pat, samples, seed)?.frequencies())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{enumerate_matchings, matching_count_u64};
    use crate::pattern::count_occurrences;

    fn pat(s: &str) -> EndheredPattern {
        s.parse().unwrap()
    }

    fn dist(pairs: &[(usize, u64)]) -> Distribution {
        pairs.iter().copied().collect()
    }

    #[test]
    fn small_distributions_from_tables() {
        assert_eq!(
            distribution_bruteforce(3, &pat("21")).unwrap(),
            dist(&[(0, 10), (1, 4), (2, 1)])
        );
        assert_eq!(
            distribution_bruteforce(4, &pat("321")).unwrap(),
            dist(&[(0, 100), (1, 4), (2, 1)])
        );
        assert_eq!(
            distribution_bruteforce(4, &pat("132")).unwrap(),
            dist(&[(0, 99), (1, 6)])
        );
    }

    #[test]
    fn parallel_scan_matches_sequential_count() {
        let patterns: Vec<EndheredPattern> =
            ["21", "12", "231", "1"].iter().map(|s| pat(s)).collect();
        let n = 5;
        let fast = BruteForce::default().distributions(n, &patterns).unwrap();
        for (pattern, got) in patterns.iter().zip(fast) {
            let mut slow = Distribution::new();
            for m in enumerate_matchings(n) {
                *slow.entry(count_occurrences(&m, pattern)).or_default() += 1;
            }
            assert_eq!(got, slow, "{pattern}");
        }
    }

    #[test]
    fn totals_are_double_factorials() {
        for n in 0..=6 {
            for p in ["21", "12", "123", "132", "2413"] {
                let d = distribution_bruteforce(n, &pat(p)).unwrap();
                assert_eq!(d.values().sum::<u64>(), matching_count_u64(n));
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(
            distribution_bruteforce(11, &pat("21")),
            Err(CountError::SizeGuard { n: 11, limit: 10 })
        ));
        assert!(matches!(
            distribution_bruteforce(3, &pat("1234567")),
            Err(CountError::PatternSizeGuard { p: 7, .. })
        ));
        assert!(wilf_classes(4, 3).is_err());
        let custom = BruteForce {
            max_n: 2,
            ..BruteForce::default()
        };
        assert!(custom.distribution(3, &pat("21")).is_err());
        assert!(BruteForce::allow_large()
            .distribution(3, &pat("21"))
            .is_ok());
    }

    #[test]
    fn joint_examples() {
        let one = joint_distribution_bruteforce(1, &pat("21"), &pat("12")).unwrap();
        assert_eq!(one, [((0, 0), 1)].into_iter().collect());

        let joint = joint_distribution_bruteforce(4, &pat("21"), &pat("12")).unwrap();
        for (&(k, m), &v) in &joint {
            assert_eq!(joint.get(&(m, k)).copied(), Some(v));
        }
        let marginal: Distribution =
            joint
                .iter()
                .fold(Distribution::new(), |mut acc, (&(k, _), &v)| {
                    *acc.entry(k).or_default() += v;
                    acc
                });
        assert_eq!(marginal, distribution_bruteforce(4, &pat("21")).unwrap());

        let diag = joint_distribution_bruteforce(3, &pat("21"), &pat("21")).unwrap();
        assert!(diag.keys().all(|&(k, m)| k == m));
        let diag: Distribution = diag.into_iter().map(|((k, _), v)| (k, v)).collect();
        assert_eq!(diag, distribution_bruteforce(3, &pat("21")).unwrap());
    }

    #[test]
    fn twin_patterns_have_symmetric_joint_distribution() {
        for n in 1..=5 {
            for p in EndheredPattern::all_of_size(3) {
                for twin in [p.reverse(), p.complement()] {
                    let joint = joint_distribution_bruteforce(n, &p, &twin).unwrap();
                    for (&(k, m), &v) in &joint {
                        assert_eq!(joint.get(&(m, k)).copied(), Some(v), "{p} vs {twin}, n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn wilf_classes_small() {
        let names = |classes: Vec<Vec<EndheredPattern>>| -> Vec<Vec<String>> {
            classes
                .into_iter()
                .map(|c| c.into_iter().map(|p| p.to_string()).collect())
                .collect()
        };
        assert_eq!(names(wilf_classes(1, 4).unwrap()), vec![vec!["1"]]);
        assert_eq!(names(wilf_classes(2, 6).unwrap()), vec![vec!["12", "21"]]);
    }

    #[test]
    fn monte_carlo_trivial_and_deterministic() {
        let f = monte_carlo_distribution(1, &pat("21"), 500, 3).unwrap();
        assert_eq!(f, [(0, 1.0)].into_iter().collect());
        let a = MonteCarlo::run(30, &pat("21"), 10_000, 11).unwrap();
        let b = MonteCarlo::run(30, &pat("21"), 10_000, 11).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.frequencies().values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(matches!(
            MonteCarlo::run(3, &pat("21"), 0, 1),
            Err(CountError::NoSamples)
        ));
    }

    #[test]
    fn monte_carlo_matches_exact_n4() {
        // the 21 distribution at n = 4, over 105 matchings
        let exact = [68.0, 30.0, 6.0, 1.0];
        let f = monte_carlo_distribution(4, &pat("21"), 1_000_000, 99).unwrap();
        for (k, &e) in exact.iter().enumerate() {
            let got = f.get(&k).copied().unwrap_or(0.0);
            assert!((got - e / 105.0).abs() < 0.01, "k={k}: {got}");
        }
    }

    #[test]
    fn tv_distance_of_exact_law_is_zero() {
        let mc = MonteCarlo {
            samples: 4,
            counts: [(0, 2), (1, 2)].into_iter().collect(),
        };
        let tv = mc.tv_distance(|k| if k < 2 { 0.5 } else { 0.0 });
        assert!(tv.abs() < 1e-15);
        let tv = mc.tv_distance(|k| if k == 0 { 1.0 } else { 0.0 });
        assert!((tv - 0.5).abs() < 1e-15);
    }
}
