//! The 2-tape, 3-state automata encoding prefix-PCP (one for universality,
//! one for universal prefixes), and the blocking witnesses used to show that
//! a solution kills universality.
//!
//! Transitions form a set: when two items produce the same transition it is
//! emitted once and its provenance lists both items.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mta::{cut_runs, ConfigPrefix, MultiTapeAutomaton, RunPrefix, StateId, Transition};
use crate::pcp::{check_solution, PcpInstance, PrefixPcpSolution};
use crate::words::{Letter, TapeAlphabet, UltimatelyPeriodicSeq, Word};

pub const X: StateId = 0;
pub const U: StateId = 1;
pub const V: StateId = 2;
pub const STATE_NAMES: [&str; 3] = ["X", "U", "V"];

/// Cap on the runs enumerated by [`blocking_extension`].
pub const MAX_RUNS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Universality,
    UniversalPrefix,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Universality => "universality",
            Variant::UniversalPrefix => "universal-prefix",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "universality" => Ok(Variant::Universality),
            "universal-prefix" => Ok(Variant::UniversalPrefix),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// Where a tape symbol of the constructed automaton comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", content = "of", rename_all = "kebab-case")]
pub enum SymbolRole {
    /// Pair index, one-based.
    Index(usize),
    /// Letter of the instance alphabet.
    Letter(String),
    Hash,
    Amp,
    Star,
}

/// Marker symbols actually used; primed when the instance already has them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Markers {
    pub hash: String,
    pub amp: Option<String>,
    pub star: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutput {
    pub variant: Variant,
    pub automaton: MultiTapeAutomaton,
    /// The instance as written on tape 2 (star-interleaved for the
    /// universal-prefix variant), over the tape-2 alphabet.
    pub instance: PcpInstance,
    pub markers: Markers,
    /// Per tape, per letter.
    pub roles: Vec<Vec<SymbolRole>>,
    /// Per transition, the item numbers (1–9) that produce it.
    pub provenance: Vec<Vec<u8>>,
}

impl ReductionOutput {
    /// Tape-1 letter of pair `i` (zero-based).
    pub fn index_letter(&self, i: usize) -> Letter {
        i as Letter
    }

    pub fn hash_letter(&self) -> Letter {
        self.automaton.alphabets()[1]
            .letter(&self.markers.hash)
            .expect("hash is on tape 2")
    }

    /// `&` on tape 1 and on tape 2.
    pub fn amp_letters(&self) -> Option<(Letter, Letter)> {
        let amp = self.markers.amp.as_ref()?;
        let a = self.automaton.alphabets();
        Some((a[0].letter(amp)?, a[1].letter(amp)?))
    }

    /// Index word as a tape-1 word.
    pub fn index_word(&self, w: &crate::pcp::IndexWord) -> Word {
        Word(w.indices().iter().map(|&i| self.index_letter(i)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Longest instance word accepted.
    pub max_word_len: usize,
    pub max_transitions: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_word_len: 8,
            max_transitions: 1_000_000,
        }
    }
}

/// `x_1 x_2 ⋯ x_k ↦ x_1 * x_2 * ⋯ x_k *`.
pub fn star_interleave(w: &Word, star: Letter) -> Word {
    Word(w.letters().iter().flat_map(|&x| [x, star]).collect())
}

#[derive(Default)]
struct Table {
    map: IndexMap<Transition, Vec<u8>>,
}

impl Table {
    fn add(&mut self, from: StateId, to: StateId, w1: Word, w2: Word, item: u8) {
        let items = self
            .map
            .entry(Transition {
                from,
                to,
                words: vec![w1, w2],
            })
            .or_default();
        if !items.contains(&item) {
            items.push(item);
        }
    }
}

/// Words over `letters` of length `1..=|target|`, first letter accepted by
/// `first`, that are not prefixes of `target`. Length-lexicographic order.
fn non_prefix_words(
    letters: &[Letter],
    target: &Word,
    first: impl Fn(Letter) -> bool,
) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<Letter>> = letters
        .iter()
        .filter(|&&l| first(l))
        .map(|&l| vec![l])
        .collect();
    for len in 1..=target.len() {
        for w in &level {
            if w[..] != target.letters()[..len] {
                out.push(Word(w.clone()));
            }
        }
        if len < target.len() {
            level = level
                .iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
    }
    out
}

/// Upper bound on the words enumerated for items (3)–(6).
fn estimate(inst: &PcpInstance, size: usize, first: usize) -> usize {
    let per_word = |len: usize| -> usize {
        let mut total = 0usize;
        let mut count = first;
        for _ in 0..len {
            total = total.saturating_add(count);
            count = count.saturating_mul(size);
        }
        total
    };
    inst.pairs()
        .iter()
        .map(|(u, v)| {
            per_word(u.len())
                .saturating_add(per_word(v.len()))
                .saturating_mul(2)
        })
        .fold(0usize, usize::saturating_add)
}

fn guard(inst: &PcpInstance, opts: &BuildOptions, size: usize, first: usize) -> Result<()> {
    let len = inst.max_word_len();
    if len > opts.max_word_len {
        return Err(Error::InstanceTooLarge {
            len,
            limit: opts.max_word_len,
        });
    }
    let count = estimate(inst, size, first);
    if count > opts.max_transitions {
        return Err(Error::TooManyTransitions {
            count,
            limit: opts.max_transitions,
        });
    }
    Ok(())
}

/// Items (1)–(6), with `first` restricting the first letter of the words of
/// items (3)–(6) and `hash` excluded in addition for (3) and (5).
fn core_items(
    t: &mut Table,
    inst: &PcpInstance,
    a2: &[Letter],
    hash: Letter,
    first: impl Fn(Letter) -> bool,
) {
    let n = inst.len();
    let idx = |i: usize| Word(vec![i as Letter]);
    for i in 0..n {
        let u = &inst.pairs()[i].0;
        t.add(X, U, idx(i), u.clone(), 1);
        t.add(U, U, idx(i), u.clone(), 1);
    }
    for i in 0..n {
        let v = &inst.pairs()[i].1;
        t.add(X, V, idx(i), v.clone(), 2);
        t.add(V, V, idx(i), v.clone(), 2);
    }
    for (side, back, item) in [(0usize, U, 3u8), (1, V, 5)] {
        let words: Vec<Vec<Word>> = inst
            .pairs()
            .iter()
            .map(|pair| non_prefix_words(a2, if side == 0 { &pair.0 } else { &pair.1 }, &first))
            .collect();
        for (i, ws) in words.iter().enumerate() {
            for u in ws.iter().filter(|u| u.first() != Some(hash)) {
                t.add(back, X, idx(i), u.clone(), item);
            }
        }
        for (i, ws) in words.into_iter().enumerate() {
            for u in ws {
                t.add(X, X, idx(i), u, item + 1);
            }
        }
    }
}

fn finish(
    variant: Variant,
    a1: TapeAlphabet,
    a2: TapeAlphabet,
    instance: PcpInstance,
    markers: Markers,
    roles: Vec<Vec<SymbolRole>>,
    table: Table,
) -> Result<ReductionOutput> {
    let (transitions, provenance): (Vec<_>, Vec<_>) = table.map.into_iter().unzip();
    let automaton = MultiTapeAutomaton::new(
        vec![a1, a2],
        STATE_NAMES.iter().map(|s| s.to_string()).collect(),
        transitions,
    )?;
    Ok(ReductionOutput {
        variant,
        automaton,
        instance,
        markers,
        roles,
        provenance,
    })
}

fn index_alphabet(n: usize, extra: Option<&str>) -> Result<TapeAlphabet> {
    TapeAlphabet::new(
        (1..=n)
            .map(|i| i.to_string())
            .chain(extra.map(String::from)),
    )
}

/// State `X` is universal iff the instance has no prefix-PCP solution.
pub fn build_universality_automaton(
    inst: &PcpInstance,
    opts: &BuildOptions,
) -> Result<ReductionOutput> {
    let b = inst.alphabet();
    guard(inst, opts, b.len() + 1, b.len() + 1)?;
    let hash = b.fresh_symbol("#");
    let a2 = b.with_symbol(&hash)?;
    let hash_l = a2.letter(&hash).expect("added");
    let a1 = index_alphabet(inst.len(), None)?;
    let instance = PcpInstance::new(a2.clone(), inst.pairs().to_vec())?;

    let mut t = Table::default();
    core_items(&mut t, &instance, &a2.letters_by_digit(), hash_l, |_| true);

    let roles = vec![
        (1..=inst.len()).map(SymbolRole::Index).collect(),
        b.symbols()
            .iter()
            .map(|s| SymbolRole::Letter(s.clone()))
            .chain([SymbolRole::Hash])
            .collect(),
    ];
    let markers = Markers {
        hash,
        amp: None,
        star: None,
    };
    finish(Variant::Universality, a1, a2, instance, markers, roles, t)
}

/// State `X` has a universal prefix iff the instance has no prefix-PCP
/// solution (and then `X` is in fact universal).
pub fn build_universal_prefix_automaton(
    inst: &PcpInstance,
    opts: &BuildOptions,
) -> Result<ReductionOutput> {
    let b = inst.alphabet();
    let len = inst.max_word_len();
    if len > opts.max_word_len {
        return Err(Error::InstanceTooLarge {
            len,
            limit: opts.max_word_len,
        });
    }
    let hash = b.fresh_symbol("#");
    let with_hash = b.with_symbol(&hash)?;
    let star = with_hash.fresh_symbol("*");
    let amp = with_hash.with_symbol(&star)?.fresh_symbol("&");
    let a2 = with_hash.with_symbol(&amp)?.with_symbol(&star)?;
    let hash_l = a2.letter(&hash).expect("added");
    let amp2 = a2.letter(&amp).expect("added");
    let star_l = a2.letter(&star).expect("added");
    let a1 = index_alphabet(inst.len(), Some(&amp))?;
    let amp1 = a1.letter(&amp).expect("added");

    let pairs = inst
        .pairs()
        .iter()
        .map(|(u, v)| (star_interleave(u, star_l), star_interleave(v, star_l)))
        .collect();
    let instance = PcpInstance::new(a2.clone(), pairs)?;
    let relaxed = BuildOptions {
        max_word_len: usize::MAX,
        ..*opts
    };
    guard(&instance, &relaxed, a2.len(), b.len() + 1)?;

    let mut t = Table::default();
    let a2_letters = a2.letters_by_digit();
    let a1_letters = a1.letters_by_digit();
    core_items(&mut t, &instance, &a2_letters, hash_l, |l| {
        l != amp2 && l != star_l
    });
    for q in [X, U, V] {
        for &a in &a1_letters {
            t.add(q, X, Word(vec![a]), Word(vec![amp2]), 7);
        }
    }
    for q in [X, U, V] {
        for &a in a2_letters.iter().filter(|&&a| a != star_l) {
            t.add(q, X, Word(vec![amp1]), Word(vec![a]), 8);
        }
    }
    for q in [X, U, V] {
        for &a in &a1_letters {
            for &bb in &a2_letters {
                t.add(q, X, Word(vec![a]), Word(vec![star_l, bb]), 9);
            }
        }
    }

    let roles = vec![
        (1..=inst.len())
            .map(SymbolRole::Index)
            .chain([SymbolRole::Amp])
            .collect(),
        b.symbols()
            .iter()
            .map(|s| SymbolRole::Letter(s.clone()))
            .chain([SymbolRole::Hash, SymbolRole::Amp, SymbolRole::Star])
            .collect(),
    ];
    let markers = Markers {
        hash,
        amp: Some(amp),
        star: Some(star),
    };
    finish(
        Variant::UniversalPrefix,
        a1,
        a2,
        instance,
        markers,
        roles,
        t,
    )
}

pub fn build(inst: &PcpInstance, variant: Variant, opts: &BuildOptions) -> Result<ReductionOutput> {
    match variant {
        Variant::Universality => build_universality_automaton(inst, opts),
        Variant::UniversalPrefix => build_universal_prefix_automaton(inst, opts),
    }
}

fn require_solution(out: &ReductionOutput, sol: &PrefixPcpSolution) -> Result<()> {
    if check_solution(&out.instance, sol)? {
        Ok(())
    } else {
        Err(Error::MalformedWitness(format!(
            "({}, {}) does not solve the instance",
            sol.upper(),
            sol.lower()
        )))
    }
}

/// The blocked prefix `i_1⋯i_m | w #`, where `i_1⋯i_m` is the longer index
/// word and `w` the common word. Tape 1 is shorter; its remaining positions
/// are left unconstrained (a ragged prefix).
pub fn blocking_config_universality(
    out: &ReductionOutput,
    sol: &PrefixPcpSolution,
) -> Result<ConfigPrefix> {
    require_solution(out, sol)?;
    let tape1 = out.index_word(&sol.long);
    let tape2 = sol
        .long_side_word(&out.instance)
        .concat(&Word(vec![out.hash_letter()]));
    Ok(ConfigPrefix::ragged(vec![tape1, tape2]))
}

/// One step of the counting argument for the universal-prefix construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessExtension {
    /// `&^L s i`: the pad, the solution's index word, and one index letter
    /// so that tape 1 is not showing `&` when tape 2 reaches `#`.
    pub x_ext: Word,
    /// `&^{L'} t #`.
    pub y_ext: Word,
    pub pad: usize,
    pub pad2: usize,
    pub head_gap: usize,
    /// Accepting runs of `x &^ω | y &^ω`, cut where both heads enter the
    /// `&` region.
    pub runs: Vec<RunPrefix>,
    /// Index into `runs` of the run being blocked.
    pub chosen: usize,
}

impl WitnessExtension {
    pub fn extended(&self, x: &Word, y: &Word) -> (Word, Word) {
        (x.concat(&self.x_ext), y.concat(&self.y_ext))
    }
}

/// `x &^ω | y &^ω` for the universal-prefix automaton.
pub fn amp_tail_config(
    out: &ReductionOutput,
    x: &Word,
    y: &Word,
) -> Result<Vec<UltimatelyPeriodicSeq>> {
    let (amp1, amp2) = out
        .amp_letters()
        .ok_or(Error::WrongVariant("needs the universal-prefix automaton"))?;
    Ok(vec![
        UltimatelyPeriodicSeq::new(x.clone(), Word(vec![amp1]))?,
        UltimatelyPeriodicSeq::new(y.clone(), Word(vec![amp2]))?,
    ])
}

/// Extends `x | y` so that the run with the smallest head gap is blocked
/// and every other run continues in exactly one way.
pub fn blocking_extension(
    out: &ReductionOutput,
    sol: &PrefixPcpSolution,
    x: &Word,
    y: &Word,
) -> Result<WitnessExtension> {
    if out.variant != Variant::UniversalPrefix {
        return Err(Error::WrongVariant("needs the universal-prefix automaton"));
    }
    require_solution(out, sol)?;
    let (amp1, amp2) = out.amp_letters().expect("universal-prefix variant");
    let c = amp_tail_config(out, x, y)?;
    let runs = cut_runs(&out.automaton, X, &c, &[x.len(), y.len()], MAX_RUNS)?;
    let gap = |r: &RunPrefix| r.head_pos[1].abs_diff(r.head_pos[0]);
    let chosen = (0..runs.len())
        .min_by_key(|&i| gap(&runs[i]))
        .ok_or(Error::NotAccepted)?;
    let r = &runs[chosen];
    let pad = r.head_pos[0] - x.len();
    let pad2 = r.head_pos[1] - y.len();

    let mut x_ext = vec![amp1; pad];
    x_ext.extend(out.index_word(&sol.long).letters());
    x_ext.push(out.index_letter(0));
    let mut y_ext = vec![amp2; pad2];
    y_ext.extend(sol.long_side_word(&out.instance).letters());
    y_ext.push(out.hash_letter());

    Ok(WitnessExtension {
        x_ext: Word(x_ext),
        y_ext: Word(y_ext),
        pad,
        pad2,
        head_gap: gap(r),
        chosen,
        runs,
    })
}
