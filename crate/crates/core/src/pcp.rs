//! Post correspondence instances, their prefix variant, bounded searches and
//! the PCP → prefix-PCP reduction.
//!
//! Index words are stored zero-based; constructors and `Display` use the
//! one-based numbering of the pairs.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{TapeAlphabet, Word};

pub const HASH_MARKER: &str = "#";
pub const STAR_MARKER: &str = "*";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    alphabet: TapeAlphabet,
    pairs: Vec<(Word, Word)>,
}

impl PcpInstance {
    pub fn new(alphabet: TapeAlphabet, pairs: Vec<(Word, Word)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::NoPairs);
        }
        for (i, (u, v)) in pairs.iter().enumerate() {
            if u.is_empty() || v.is_empty() {
                return Err(Error::EmptyPairWord(i + 1));
            }
            alphabet.check(u)?;
            alphabet.check(v)?;
        }
        Ok(PcpInstance { alphabet, pairs })
    }

    /// Builds an instance from string pairs, tokenized against `symbols`.
    pub fn from_strs(symbols: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let alphabet = TapeAlphabet::new(symbols.iter().copied())?;
        let pairs = pairs
            .iter()
            .map(|(u, v)| Ok((alphabet.parse_word(u)?, alphabet.parse_word(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, pairs)
    }

    pub fn alphabet(&self) -> &TapeAlphabet {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.pairs
            .iter()
            .map(|(u, v)| u.len().max(v.len()))
            .max()
            .unwrap_or(0)
    }

    fn check_index_word(&self, w: &IndexWord) -> Result<()> {
        match w.0.iter().find(|&&i| i >= self.len()) {
            Some(&i) => Err(Error::IndexOutOfRange {
                index: i + 1,
                n: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// `u_{i_1} ⋯ u_{i_m}`.
    pub fn upper(&self, w: &IndexWord) -> Word {
        Word(
            w.0.iter()
                .flat_map(|&i| self.pairs[i].0 .0.iter().copied())
                .collect(),
        )
    }

    /// `v_{i_1} ⋯ v_{i_m}`.
    pub fn lower(&self, w: &IndexWord) -> Word {
        Word(
            w.0.iter()
                .flat_map(|&i| self.pairs[i].1 .0.iter().copied())
                .collect(),
        )
    }

    pub fn render(&self, w: &Word) -> String {
        self.alphabet.display(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexWord(Vec<usize>);

impl IndexWord {
    /// From zero-based pair indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexWord);
        }
        Ok(IndexWord(indices))
    }

    /// From one-based pair numbers, e.g. `[1, 2, 1, 1]`.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i == 0) {
            return Err(Error::IndexOutOfRange { index: i, n: 0 });
        }
        Self::new(indices.iter().map(|i| i - 1).collect())
    }

    /// Parses `"1211"` (digits) or `"1.2.10"` (dot separated), one-based.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid index word `{s}`"));
        let nums: Vec<usize> = if s.contains('.') {
            s.split('.')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.trim()
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Self::from_one_based(&nums)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &IndexWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, n: usize) -> IndexWord {
        IndexWord(self.0[..n].to_vec())
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&i| i >= 9) {
            "."
        } else {
            ""
        };
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

/// Which side of the instance the longer index word is read on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `u_{long} = v_{short}`.
    UpperLong,
    /// `u_{short} = v_{long}`.
    LowerLong,
}

/// Witness of a prefix-PCP solution: `short` is a prefix of `long`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixPcpSolution {
    pub long: IndexWord,
    pub short: IndexWord,
    pub orientation: Orientation,
}

impl PrefixPcpSolution {
    /// Builds the canonical form from the upper-side and lower-side words.
    pub fn from_sides(upper: IndexWord, lower: IndexWord) -> Result<Self> {
        if upper.is_prefix_of(&lower) && upper.len() < lower.len() {
            Ok(PrefixPcpSolution {
                long: lower,
                short: upper,
                orientation: Orientation::LowerLong,
            })
        } else if lower.is_prefix_of(&upper) {
            Ok(PrefixPcpSolution {
                long: upper,
                short: lower,
                orientation: Orientation::UpperLong,
            })
        } else {
            Err(Error::MalformedWitness(format!(
                "neither {upper} nor {lower} is a prefix of the other"
            )))
        }
    }

    /// Index word read on the `u` side.
    pub fn upper(&self) -> &IndexWord {
        match self.orientation {
            Orientation::UpperLong => &self.long,
            Orientation::LowerLong => &self.short,
        }
    }

    /// Index word read on the `v` side.
    pub fn lower(&self) -> &IndexWord {
        match self.orientation {
            Orientation::UpperLong => &self.short,
            Orientation::LowerLong => &self.long,
        }
    }

    /// The common word of both sides, read along the long index word.
    pub fn long_side_word(&self, inst: &PcpInstance) -> Word {
        match self.orientation {
            Orientation::UpperLong => inst.upper(&self.long),
            Orientation::LowerLong => inst.lower(&self.long),
        }
    }
}

pub fn check_pcp_solution(inst: &PcpInstance, w: &IndexWord) -> Result<bool> {
    inst.check_index_word(w)?;
    Ok(inst.upper(w) == inst.lower(w))
}

/// `wu` is read on the `u` side and `wv` on the `v` side.
pub fn check_prefix_pcp_solution(
    inst: &PcpInstance,
    wu: &IndexWord,
    wv: &IndexWord,
) -> Result<bool> {
    inst.check_index_word(wu)?;
    inst.check_index_word(wv)?;
    let related = wu.is_prefix_of(wv) || wv.is_prefix_of(wu);
    Ok(related && inst.upper(wu) == inst.lower(wv))
}

pub fn check_solution(inst: &PcpInstance, sol: &PrefixPcpSolution) -> Result<bool> {
    if !sol.short.is_prefix_of(&sol.long) {
        return Ok(false);
    }
    check_prefix_pcp_solution(inst, sol.upper(), sol.lower())
}

fn compatible(a: &[u32], b: &[u32]) -> bool {
    let n = a.len().min(b.len());
    a[..n] == b[..n]
}

/// Breadth-first over index-word length, lexicographic within a length,
/// expanding only words whose two concatenations are prefix-compatible.
pub fn search_pcp(inst: &PcpInstance, max_len: usize) -> Option<IndexWord> {
    let n = inst.len();
    let mut level: Vec<(Vec<usize>, Vec<u32>, Vec<u32>)> =
        vec![(Vec::new(), Vec::new(), Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, u, v) in &level {
            for i in 0..n {
                let mut u2 = u.clone();
                u2.extend_from_slice(inst.pairs[i].0.letters());
                let mut v2 = v.clone();
                v2.extend_from_slice(inst.pairs[i].1.letters());
                if !compatible(&u2, &v2) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(i);
                if u2 == v2 {
                    return Some(IndexWord(w2));
                }
                next.push((w2, u2, v2));
            }
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    None
}

struct PrefixNode {
    word: Vec<usize>,
    /// `upper[j]` = u-concatenation of the first `j` indices.
    upper: Vec<Vec<u32>>,
    lower: Vec<Vec<u32>>,
}

impl PrefixNode {
    fn viable(&self) -> bool {
        let m = self.word.len();
        let (u, v) = (&self.upper[m], &self.lower[m]);
        (1..=m).any(|j| compatible(u, &self.lower[j]) || compatible(v, &self.upper[j]))
    }

    fn solution(&self) -> Option<PrefixPcpSolution> {
        let m = self.word.len();
        let long = IndexWord(self.word.clone());
        for j in 1..=m {
            if self.upper[m] == self.lower[j] {
                return Some(PrefixPcpSolution {
                    short: long.prefix(j),
                    long,
                    orientation: Orientation::UpperLong,
                });
            }
        }
        for j in 1..m {
            if self.lower[m] == self.upper[j] {
                return Some(PrefixPcpSolution {
                    short: long.prefix(j),
                    long,
                    orientation: Orientation::LowerLong,
                });
            }
        }
        None
    }
}

/// First solution with `max(m, m') ≤ max_len`: shortest long word, then
/// lexicographic long word, then upper-long before lower-long, then shortest
/// short word.
pub fn search_prefix_pcp(inst: &PcpInstance, max_len: usize) -> Option<PrefixPcpSolution> {
    let n = inst.len();
    let mut level = vec![PrefixNode {
        word: Vec::new(),
        upper: vec![Vec::new()],
        lower: vec![Vec::new()],
    }];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for node in &level {
            for i in 0..n {
                let mut word = node.word.clone();
                word.push(i);
                let mut upper = node.upper.clone();
                let mut u = upper.last().cloned().unwrap_or_default();
                u.extend_from_slice(inst.pairs[i].0.letters());
                upper.push(u);
                let mut lower = node.lower.clone();
                let mut v = lower.last().cloned().unwrap_or_default();
                v.extend_from_slice(inst.pairs[i].1.letters());
                lower.push(v);
                let child = PrefixNode { word, upper, lower };
                if let Some(sol) = child.solution() {
                    return Some(sol);
                }
                if child.viable() {
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    None
}

/// The `2n+1`-pair prefix-PCP instance over `B ∪ {#, *}` whose solvability
/// matches PCP solvability of `inst`.
pub fn reduce_pcp_to_prefix(inst: &PcpInstance) -> Result<PcpInstance> {
    for marker in [HASH_MARKER, STAR_MARKER] {
        if inst.alphabet.contains(marker) {
            return Err(Error::SymbolClash(marker.to_string()));
        }
    }
    let alphabet = inst
        .alphabet
        .with_symbol(HASH_MARKER)?
        .with_symbol(STAR_MARKER)?;
    let hash = alphabet.letter(HASH_MARKER).expect("just added");
    let star = alphabet.letter(STAR_MARKER).expect("just added");

    // star before every letter but the first: x1 * x2 * ... * xk
    let joined = |w: &Word| -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * w.len());
        for (j, &x) in w.letters().iter().enumerate() {
            if j > 0 {
                out.push(star);
            }
            out.push(x);
        }
        out
    };
    let mut firsts = Vec::with_capacity(inst.len());
    let mut middles = Vec::with_capacity(inst.len());
    for (u, v) in &inst.pairs {
        let ju = joined(u);
        let jv = joined(v);
        let a = [vec![hash], ju.clone()].concat();
        let b = [vec![hash], jv.clone(), vec![star]].concat();
        let uu = [vec![star], ju].concat();
        let vv = [jv, vec![star]].concat();
        firsts.push((Word(a), Word(b)));
        middles.push((Word(uu), Word(vv)));
    }
    let mut pairs = firsts;
    pairs.extend(middles);
    pairs.push((Word(vec![star, hash]), Word(vec![hash])));
    PcpInstance::new(alphabet, pairs)
}

/// Maps a PCP solution `i_1⋯i_m` of the source instance (with `n` pairs) to
/// the reduced witness `A_{i_1} U_{i_2} ⋯ U_{i_m} Y` on both sides.
pub fn encode_solution(n: usize, w: &IndexWord) -> PrefixPcpSolution {
    let mut idx = Vec::with_capacity(w.len() + 1);
    idx.push(w.0[0]);
    idx.extend(w.0[1..].iter().map(|&i| n + i));
    idx.push(2 * n);
    let word = IndexWord(idx);
    PrefixPcpSolution {
        long: word.clone(),
        short: word,
        orientation: Orientation::UpperLong,
    }
}

/// Inverse of [`encode_solution`]: reads the `A U⋯U Y` shape off the long
/// word, up to the first `Y`, and drops the markers.
pub fn decode_reduced_solution(n: usize, sol: &PrefixPcpSolution) -> Result<IndexWord> {
    let w = sol.long.indices();
    let y = 2 * n;
    let end = w
        .iter()
        .position(|&i| i == y)
        .ok_or_else(|| Error::MalformedWitness("no closing (Y, Z) pair".into()))?;
    if end == 0 {
        return Err(Error::MalformedWitness("witness starts with (Y, Z)".into()));
    }
    if w[0] >= n {
        return Err(Error::MalformedWitness(
            "witness must start with an (A, B) pair".into(),
        ));
    }
    let mut out = vec![w[0]];
    for &i in &w[1..end] {
        if !(n..2 * n).contains(&i) {
            return Err(Error::MalformedWitness(format!(
                "index {} inside the witness is not a (U, V) pair",
                i + 1
            )));
        }
        out.push(i - n);
    }
    if sol.short.len() < end + 1 {
        return Err(Error::MalformedWitness(
            "short side ends before (Y, Z)".into(),
        ));
    }
    Ok(IndexWord(out))
}
