//! Extended dot-bracket notation, Waterman-Ponty checks, and RNA shapes.
//!
//! Positions are 1-based throughout, as in the dot-bracket string itself.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::StructureError;
use crate::matching::Matching;

/// Ordered bracket types. Type 0 is tried first when serializing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAlphabet {
    pairs: Vec<(char, char)>,
}

impl BracketAlphabet {
    /// `()`, `[]`, `{}`, `<>` then `aA` through `zZ` with lowercase openers.
    pub fn standard() -> BracketAlphabet {
        Self::build(false)
    }

    /// Same order as [`BracketAlphabet::standard`] but letter pairs open with
    /// the uppercase character (`Aa` ... `Zz`), as some annotation tools emit.
    pub fn uppercase_openers() -> BracketAlphabet {
        Self::build(true)
    }

    fn build(upper_first: bool) -> BracketAlphabet {
        let mut pairs = vec![('(', ')'), ('[', ']'), ('{', '}'), ('<', '>')];
        for lower in 'a'..='z' {
            let upper = lower.to_ascii_uppercase();
            pairs.push(if upper_first {
                (upper, lower)
            } else {
                (lower, upper)
            });
        }
        BracketAlphabet { pairs }
    }

    pub fn new(pairs: Vec<(char, char)>) -> Result<BracketAlphabet, StructureError> {
        if pairs.is_empty() {
            return Err(StructureError::Alphabet("no bracket types".into()));
        }
        let mut seen = BTreeSet::new();
        for &(o, c) in &pairs {
            for ch in [o, c] {
                if ch == '.' {
                    return Err(StructureError::Alphabet(
                        "`.` is reserved for unpaired positions".into(),
                    ));
                }
                if !seen.insert(ch) {
                    return Err(StructureError::Alphabet(format!("`{ch}` is used twice")));
                }
            }
        }
        Ok(BracketAlphabet { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, t: usize) -> (char, char) {
        self.pairs[t]
    }

    fn opener_type(&self, ch: char) -> Option<usize> {
        self.pairs.iter().position(|&(o, _)| o == ch)
    }

    fn closer_type(&self, ch: char) -> Option<usize> {
        self.pairs.iter().position(|&(_, c)| c == ch)
    }

    /// Bracket type of `ch` if it is an opener or closer of this alphabet.
    pub fn type_of(&self, ch: char) -> Option<usize> {
        self.opener_type(ch).or_else(|| self.closer_type(ch))
    }
}

impl Default for BracketAlphabet {
    fn default() -> Self {
        Self::standard()
    }
}

/// Base pairs `(i, j)` with `1 <= i < j <= length`, each position used at
/// most once. Pairs are kept sorted by opener.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SecondaryStructure {
    length: usize,
    pairs: Vec<(usize, usize)>,
}

impl SecondaryStructure {
    pub fn new(
        length: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<SecondaryStructure, StructureError> {
        let mut used = vec![false; length + 1];
        let mut out = Vec::new();
        for (a, b) in pairs {
            let (i, j) = (a.min(b), a.max(b));
            if i == 0 || i == j || j > length {
                return Err(StructureError::BadPair(a, b));
            }
            for p in [i, j] {
                if std::mem::replace(&mut used[p], true) {
                    return Err(StructureError::NotMonogamous(p));
                }
            }
            out.push((i, j));
        }
        out.sort_unstable();
        Ok(SecondaryStructure { length, pairs: out })
    }

    /// The structure whose pairs are the arcs of `m` on `2 * m.size()` positions.
    pub fn from_matching(m: &Matching) -> SecondaryStructure {
        SecondaryStructure {
            length: m.points(),
            pairs: m.arcs().into_iter().map(|a| (a.left, a.right)).collect(),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Drop unpaired positions and renumber the rest in order.
    pub fn to_matching(&self) -> Matching {
        let mut index = vec![usize::MAX; self.length + 1];
        let mut next = 0;
        let mut paired = vec![false; self.length + 1];
        for &(i, j) in &self.pairs {
            paired[i] = true;
            paired[j] = true;
        }
        for (pos, &is_paired) in paired.iter().enumerate().skip(1) {
            if is_paired {
                index[pos] = next;
                next += 1;
            }
        }
        let mut partner = vec![0; next];
        for &(i, j) in &self.pairs {
            partner[index[i]] = index[j];
            partner[index[j]] = index[i];
        }
        Matching::from_partner_unchecked(partner)
    }
}

fn crossing(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Stack-based parse: one stack per bracket type.
pub fn parse_dotbracket(
    text: &str,
    alphabet: &BracketAlphabet,
) -> Result<SecondaryStructure, StructureError> {
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); alphabet.len()];
    let mut pairs = Vec::new();
    let mut length = 0;
    for (idx, ch) in text.chars().enumerate() {
        let pos = idx + 1;
        length = pos;
        if ch == '.' {
            continue;
        }
        if let Some(t) = alphabet.opener_type(ch) {
            stacks[t].push(pos);
        } else if let Some(t) = alphabet.closer_type(ch) {
            let open = stacks[t]
                .pop()
                .ok_or(StructureError::UnmatchedCloser { ch, pos })?;
            pairs.push((open, pos));
        } else {
            return Err(StructureError::UnknownChar { ch, pos });
        }
    }
    let mut open: Vec<usize> = stacks.into_iter().flatten().collect();
    if !open.is_empty() {
        open.sort_unstable();
        return Err(StructureError::Unclosed(open));
    }
    SecondaryStructure::new(length, pairs)
}

/// First-come-first-served layout: pairs in ascending opener order each
/// take the lowest bracket type none of whose pairs they cross.
pub fn serialize_dotbracket(
    s: &SecondaryStructure,
    alphabet: &BracketAlphabet,
) -> Result<String, StructureError> {
    let mut out = vec!['.'; s.length];
    // per type, closers of pairs still open at the current position; they
    // nest, so the innermost (smallest closer) is on top
    let mut live: Vec<Vec<usize>> = vec![Vec::new(); alphabet.len()];
    for &(i, j) in &s.pairs {
        let mut chosen = None;
        for (t, stack) in live.iter_mut().enumerate() {
            while stack.last().is_some_and(|&c| c < i) {
                stack.pop();
            }
            if stack.last().is_none_or(|&c| c > j) {
                chosen = Some(t);
                break;
            }
        }
        let t = chosen.ok_or(StructureError::AlphabetExhausted(i, j))?;
        live[t].push(j);
        let (o, c) = alphabet.pair(t);
        out[i - 1] = o;
        out[j - 1] = c;
    }
    Ok(out.into_iter().collect())
}

/// Violations of the three Waterman-Ponty conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub theta: usize,
    pub monogamy_violations: Vec<((usize, usize), (usize, usize))>,
    pub distance_violations: Vec<(usize, usize)>,
    pub pseudoknot_violations: Vec<((usize, usize), (usize, usize))>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.monogamy_violations.is_empty()
            && self.distance_violations.is_empty()
            && self.pseudoknot_violations.is_empty()
    }
}

/// Check raw pairs, which need not be monogamous. `j - i >= theta` is the
/// distance condition.
pub fn validate_pairs(pairs: &[(usize, usize)], theta: usize) -> ValidationReport {
    let mut sorted: Vec<(usize, usize)> =
        pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    let mut report = ValidationReport {
        theta,
        ..ValidationReport::default()
    };
    for (x, &a) in sorted.iter().enumerate() {
        if a.1 - a.0 < theta {
            report.distance_violations.push(a);
        }
        for &b in &sorted[x + 1..] {
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                report.monogamy_violations.push((a, b));
            } else if crossing(a, b) {
                report.pseudoknot_violations.push((a, b));
            }
        }
    }
    report
}

pub fn validate_waterman_ponty(s: &SecondaryStructure, theta: usize) -> ValidationReport {
    validate_pairs(&s.pairs, theta)
}

fn collapse_once(m: &Matching) -> Matching {
    let partner = m.partners0();
    let stacked_inside = |i: usize| {
        let j = partner[i];
        j > i + 1 && partner[i + 1] == j - 1
    };
    let keep: Vec<bool> = (0..partner.len())
        .map(|x| {
            let i = x.min(partner[x]);
            !stacked_inside(i)
        })
        .collect();
    let mut index = vec![usize::MAX; partner.len()];
    let mut next = 0;
    for (x, &k) in keep.iter().enumerate() {
        if k {
            index[x] = next;
            next += 1;
        }
    }
    let mut out = vec![0; next];
    for (x, &k) in keep.iter().enumerate() {
        if k {
            out[index[x]] = index[partner[x]];
        }
    }
    Matching::from_partner_unchecked(out)
}

/// Remove every arc `(i, j)` for which `(i+1, j-1)` is also an arc, renumber,
/// and repeat until nothing changes. The result has no occurrence of 21.
pub fn collapse_shape(m: &Matching) -> Matching {
    let mut cur = collapse_once(m);
    let mut passes = 1;
    loop {
        let next = collapse_once(&cur);
        if next == cur {
            break;
        }
        passes += 1;
        cur = next;
    }
    if passes > 1 {
        log::info!("shape collapse of {m} needed {passes} passes");
    }
    cur
}

/// Number of distinct bracket types used in `text`, ignoring dots and
/// characters outside the alphabet.
pub fn bracket_types_used(text: &str, alphabet: &BracketAlphabet) -> usize {
    text.chars()
        .filter_map(|ch| alphabet.type_of(ch))
        .collect::<BTreeSet<_>>()
        .len()
}

impl fmt::Display for SecondaryStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serialize_dotbracket(self, &BracketAlphabet::standard()) {
            Ok(s) => f.write_str(&s),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}
