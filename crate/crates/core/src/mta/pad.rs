//! Padding tape alphabets to power-of-two sizes with duplicate symbols.
//!
//! A duplicate behaves exactly like its original letter: every transition is
//! copied once per way of swapping original letters for their duplicates.
//! Collapsing duplicates maps padded configurations onto original ones and
//! accepting runs onto accepting runs, so universality, dead prefixes and
//! universal prefixes are preserved, while every tape base becomes a power
//! of two.

use super::{MultiTapeAutomaton, Transition, TransitionId};
use crate::error::{Error, Result};
use crate::words::{Letter, TapeAlphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padded {
    pub automaton: MultiTapeAutomaton,
    /// Source transition of every padded transition.
    pub origin: Vec<TransitionId>,
    /// Per tape, `(duplicate, original)` letter pairs that were added.
    pub duplicates: Vec<Vec<(Letter, Letter)>>,
}

impl Padded {
    /// Replaces duplicates by their originals.
    pub fn collapse(&self, tape: usize, w: &Word) -> Word {
        Word(
            w.letters()
                .iter()
                .map(|&l| {
                    self.duplicates[tape]
                        .iter()
                        .find(|&&(d, _)| d == l)
                        .map_or(l, |&(_, o)| o)
                })
                .collect(),
        )
    }

    pub fn was_padded(&self) -> bool {
        self.duplicates.iter().any(|d| !d.is_empty())
    }
}

/// Pads every alphabet of size `s` to `s.next_power_of_two()`; the `j`-th
/// added symbol duplicates the letter of digit `j`. Fails when the copied
/// transition set would exceed `max_transitions`.
pub fn pad_pow2(m: &MultiTapeAutomaton, max_transitions: usize) -> Result<Padded> {
    let mut alphabets = Vec::with_capacity(m.tapes());
    let mut duplicates = Vec::with_capacity(m.tapes());
    for a in m.alphabets() {
        let by_digit = a.letters_by_digit();
        let mut padded: TapeAlphabet = a.clone();
        let mut dups = Vec::new();
        for j in 0..a.len().next_power_of_two() - a.len() {
            let orig = by_digit[j % by_digit.len()];
            let name = padded.fresh_symbol(&format!("{}'", a.symbol(orig)));
            padded = padded.with_symbol(&name)?;
            dups.push((padded.len() as Letter - 1, orig));
        }
        alphabets.push(padded);
        duplicates.push(dups);
    }

    let variants = |k: usize, l: Letter| -> Vec<Letter> {
        std::iter::once(l)
            .chain(
                duplicates[k]
                    .iter()
                    .filter(|&&(_, o)| o == l)
                    .map(|&(d, _)| d),
            )
            .collect()
    };
    let mut count = 0usize;
    for t in m.transitions() {
        let copies = t
            .words
            .iter()
            .enumerate()
            .flat_map(|(k, w)| w.letters().iter().map(move |&l| (k, l)))
            .try_fold(1usize, |acc, (k, l)| acc.checked_mul(variants(k, l).len()));
        count = copies
            .and_then(|c| count.checked_add(c))
            .unwrap_or(usize::MAX);
        if count > max_transitions {
            return Err(Error::TooManyTransitions {
                count,
                limit: max_transitions,
            });
        }
    }

    let mut transitions = Vec::with_capacity(count);
    let mut origin = Vec::with_capacity(count);
    for (tid, t) in m.transitions().iter().enumerate() {
        let mut partial: Vec<Vec<Word>> = vec![Vec::new()];
        for (k, w) in t.words.iter().enumerate() {
            let mut words = vec![Vec::new()];
            for &l in w.letters() {
                let vs = variants(k, l);
                words = words
                    .into_iter()
                    .flat_map(|p: Vec<Letter>| {
                        vs.iter().map(move |&v| {
                            let mut p = p.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            partial = partial
                .into_iter()
                .flat_map(|ws| {
                    words.iter().map(move |w| {
                        let mut ws = ws.clone();
                        ws.push(Word(w.clone()));
                        ws
                    })
                })
                .collect();
        }
        for words in partial {
            transitions.push(Transition {
                from: t.from,
                to: t.to,
                words,
            });
            origin.push(tid);
        }
    }
    Ok(Padded {
        automaton: MultiTapeAutomaton::new(alphabets, m.states().to_vec(), transitions)?,
        origin,
        duplicates,
    })
}
