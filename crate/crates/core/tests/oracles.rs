//! Library results against independent, deliberately naive reimplementations.

use std::collections::BTreeSet;

use endhered::asymptotics::{asym_ratio_c, asym_ratio_d, ratio_to_f64};
use endhered::census::distribution_bruteforce;
use endhered::enumeration::{double_factorial, table_a21, table_c321, table_d132};
use endhered::matching::{enumerate_matchings, random_matching, Matching};
use endhered::pattern::{count_occurrences, EndheredPattern};
use num_bigint::BigInt;
use proptest::prelude::*;

/// All matchings on points `1..=2n` by pairing the first free point with
/// each later free point, as sorted arc lists.
fn naive_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            let mut arcs = acc.clone();
            arcs.sort();
            out.push(arcs);
            return;
        }
        let first = free[0];
        for idx in 1..free.len() {
            let rest: Vec<usize> = free
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != 0 && i != idx)
                .map(|(_, &x)| x)
                .collect();
            acc.push((first, free[idx]));
            go(rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go((1..=2 * n).collect(), &mut Vec::new(), &mut out);
    out
}

fn arcs_of(m: &Matching) -> Vec<(usize, usize)> {
    m.arcs().into_iter().map(|a| (a.left, a.right)).collect()
}

/// Occurrences straight from the definition: starting point `i`, offset `j`,
/// and `mu(i + s) = pi^{-1}(s) + j` for every `s`, with every `i + s` a left
/// endpoint.
fn naive_count(m: &Matching, pat: &EndheredPattern) -> usize {
    let p = pat.size();
    let points = m.points();
    let inv = pat.inverse();
    let inv = inv.as_slice();
    let mut count = 0;
    for i in 1..=points {
        if i + p - 1 > points {
            break;
        }
        for j in 0..=points {
            let ok = (0..p).all(|s| {
                let target = inv[s] + j;
                target <= points && i + s < target && m.partner(i + s) == target
            });
            if ok {
                count += 1;
            }
        }
    }
    count
}

/// Left or right twist from the definition: reverse each maximal run of
/// consecutive left (or right) endpoints.
fn naive_twist(m: &Matching, left: bool) -> Matching {
    let points = m.points();
    let side = |x: usize| m.is_left(x) == left;
    let mut image: Vec<usize> = (0..=points).collect();
    let mut x = 1;
    while x <= points {
        if !side(x) {
            x += 1;
            continue;
        }
        let mut y = x;
        while y < points && side(y + 1) {
            y += 1;
        }
        for t in 0..=(y - x) {
            image[x + t] = y - t;
        }
        x = y + 1;
    }
    let arcs: Vec<(usize, usize)> = arcs_of(m)
        .into_iter()
        .map(|(a, b)| (image[a], image[b]))
        .collect();
    Matching::from_arcs(arcs, m.size()).unwrap()
}

#[test]
fn enumeration_matches_naive_recursion() {
    for n in 0..=5 {
        let lib: Vec<Vec<(usize, usize)>> = enumerate_matchings(n).map(|m| arcs_of(&m)).collect();
        let naive = naive_matchings(n);
        assert_eq!(lib.len(), naive.len());
        let a: BTreeSet<_> = lib.into_iter().collect();
        let b: BTreeSet<_> = naive.into_iter().collect();
        assert_eq!(a, b, "n={n}");
    }
}

#[test]
fn naive_counts_reproduce_tables() {
    // brute force through the naive counter, independent of the library scanner
    let tables = [
        ("21", table_a21(6)),
        ("321", table_c321(6)),
        ("132", table_d132(6)),
    ];
    for (name, table) in &tables {
        let p: EndheredPattern = name.parse().unwrap();
        for n in 1..=6 {
            let mut hist = vec![0u64; n + 1];
            for arcs in naive_matchings(n) {
                let m = Matching::from_arcs(arcs, n).unwrap();
                hist[naive_count(&m, &p)] += 1;
            }
            for (k, &v) in hist.iter().enumerate() {
                assert_eq!(table.get(n, k), BigInt::from(v), "{name} n={n} k={k}");
            }
        }
    }
}

#[test]
fn library_distribution_matches_naive_for_size_four_patterns() {
    for p in EndheredPattern::all_of_size(4) {
        let lib = distribution_bruteforce(5, &p).unwrap();
        let mut hist = std::collections::BTreeMap::new();
        for m in enumerate_matchings(5) {
            *hist.entry(naive_count(&m, &p)).or_insert(0u64) += 1;
        }
        assert_eq!(lib, hist, "{p}");
    }
}

#[test]
fn d132_first_row_converges() {
    let n = 200;
    let d = table_d132(n);
    let scaled = ratio_to_f64(&(d.get(n, 1) * n), &double_factorial(2 * n as i64 - 1));
    assert!((scaled / 0.25 - 1.0).abs() < 0.05, "{scaled}");
    let lead = asym_ratio_d(n, 1) * n as f64;
    assert!((lead - 0.25).abs() < 1e-12);
}

#[test]
fn c321_first_row_tracks_leading_term() {
    let n = 200;
    let c = table_c321(n);
    let exact = ratio_to_f64(&c.get(n, 1), &double_factorial(2 * n as i64 - 1));
    let lead = asym_ratio_c(n, 1);
    assert!((exact / lead - 1.0).abs() < 0.05, "{exact} vs {lead}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counts_agree_with_definition(seed in any::<u64>(), n in 0usize..25, p in 1usize..5, which in any::<prop::sample::Index>()) {
        let m = random_matching(n, seed);
        let pats = EndheredPattern::all_of_size(p);
        let pat = which.get(&pats);
        prop_assert_eq!(count_occurrences(&m, pat), naive_count(&m, pat));
    }

    #[test]
    fn twists_agree_with_definition(seed in any::<u64>(), n in 0usize..30) {
        let m = random_matching(n, seed);
        prop_assert_eq!(m.left_twist(), naive_twist(&m, true));
        prop_assert_eq!(m.right_twist(), naive_twist(&m, false));
    }

    #[test]
    fn twists_carry_occurrences(seed in any::<u64>(), n in 0usize..25, p in 2usize..4) {
        // an occurrence sits inside one run, so a twist maps occurrences of
        // a pattern to occurrences of the twisted pattern
        let m = random_matching(n, seed);
        for pat in EndheredPattern::all_of_size(p) {
            let as_m = pat.as_matching();
            let left = EndheredPattern::all_of_size(p).into_iter().find(|q| q.as_matching() == as_m.left_twist()).unwrap();
            let right = EndheredPattern::all_of_size(p).into_iter().find(|q| q.as_matching() == as_m.right_twist()).unwrap();
            prop_assert_eq!(count_occurrences(&m.left_twist(), &left), count_occurrences(&m, &pat));
            prop_assert_eq!(count_occurrences(&m.right_twist(), &right), count_occurrences(&m, &pat));
            prop_assert_eq!(&left, &pat.complement());
            prop_assert_eq!(&right, &pat.reverse());
        }
    }
}
