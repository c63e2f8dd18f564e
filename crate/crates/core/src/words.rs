//! Tape alphabets, finite words, eventually periodic sequences and their
//! radix valuations.
//!
//! A symbol of an alphabet is an arbitrary nonempty token. Internally a
//! letter is the index of its symbol in declaration order; the *digit* of a
//! letter is a separate bijection onto `0..|A|`, by default the identity.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{Rational, RationalVector};

pub type Letter = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TapeAlphabet {
    symbols: Vec<String>,
    digits: Vec<u32>,
    index: HashMap<String, Letter>,
}

impl TapeAlphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let digits = (0..symbols.len() as u32).collect();
        Self::with_digits(symbols, digits)
    }

    /// Alphabet with an explicit digit bijection (`digits[i]` is the digit of
    /// the `i`th declared symbol).
    pub fn with_digits(symbols: Vec<String>, digits: Vec<u32>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::EmptySymbol);
            }
            if index.insert(s.clone(), i as Letter).is_some() {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        let mut seen = vec![false; symbols.len()];
        if digits.len() != symbols.len() {
            return Err(Error::InvalidDigits(symbols.len()));
        }
        for &d in &digits {
            match seen.get_mut(d as usize) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(Error::InvalidDigits(symbols.len())),
            }
        }
        Ok(TapeAlphabet {
            symbols,
            digits,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Radix of the valuation, `|A|`.
    pub fn base(&self) -> u32 {
        self.symbols.len() as u32
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// True when the digit map is declaration order.
    pub fn has_identity_digits(&self) -> bool {
        self.digits.iter().enumerate().all(|(i, &d)| i as u32 == d)
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter as usize]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.index.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn digit(&self, letter: Letter) -> u32 {
        self.digits[letter as usize]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }

    /// Letters sorted by digit value.
    pub fn letters_by_digit(&self) -> Vec<Letter> {
        let mut ls: Vec<Letter> = self.letters().collect();
        ls.sort_by_key(|&l| self.digit(l));
        ls
    }

    /// Appends a new symbol (digit = old size).
    pub fn with_symbol(&self, symbol: &str) -> Result<Self> {
        if self.contains(symbol) {
            return Err(Error::SymbolClash(symbol.to_string()));
        }
        let mut symbols = self.symbols.clone();
        let mut digits = self.digits.clone();
        digits.push(symbols.len() as u32);
        symbols.push(symbol.to_string());
        Self::with_digits(symbols, digits)
    }

    /// `base`, or `base` followed by primes, whichever is not yet a symbol.
    pub fn fresh_symbol(&self, base: &str) -> String {
        let mut s = base.to_string();
        while self.contains(&s) {
            s.push('\'');
        }
        s
    }

    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.0.iter().find(|&&l| l as usize >= self.len()) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Tokenizes a string by greedy longest match against the symbols. When
    /// no symbol contains `.`, a dotted input is split on the dots instead
    /// (the [`Self::display`] form).
    pub fn parse_word(&self, input: &str) -> Result<Word> {
        if input.contains('.') && !self.symbols.iter().any(|s| s.contains('.')) {
            let tokens: Vec<&str> = input.split('.').collect();
            return self.word_from_tokens(&tokens);
        }
        let mut by_len: Vec<(&str, Letter)> = self
            .symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as Letter))
            .collect();
        by_len.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(&b.1)));
        let mut rest = input;
        let mut letters = Vec::new();
        while !rest.is_empty() {
            match by_len.iter().find(|(s, _)| rest.starts_with(s)) {
                Some(&(s, l)) => {
                    letters.push(l);
                    rest = &rest[s.len()..];
                }
                None => {
                    let symbol = rest.chars().next().map(String::from).unwrap_or_default();
                    return Err(Error::UnknownSymbol {
                        symbol,
                        input: input.to_string(),
                    });
                }
            }
        }
        Ok(Word(letters))
    }

    pub fn word_from_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        tokens
            .iter()
            .map(|t| {
                self.letter(t.as_ref()).ok_or_else(|| Error::UnknownSymbol {
                    symbol: t.as_ref().to_string(),
                    input: tokens
                        .iter()
                        .map(|t| t.as_ref())
                        .collect::<Vec<_>>()
                        .join(" "),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn tokens(&self, word: &Word) -> Vec<String> {
        word.0.iter().map(|&l| self.symbol(l).to_string()).collect()
    }

    /// Concatenated symbols; only unambiguous when [`Self::is_single_char`].
    pub fn render(&self, word: &Word) -> String {
        word.0.iter().map(|&l| self.symbol(l)).collect()
    }

    /// Rendering that stays parseable: plain concatenation for single-char
    /// alphabets, dot-separated tokens otherwise.
    pub fn display(&self, word: &Word) -> String {
        if self.is_single_char() {
            self.render(word)
        } else {
            self.tokens(word).join(".")
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `preperiod · period^ω`, kept in normal form: primitive period, then the
/// shortest preperiod. Structural equality is therefore sequence equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UltimatelyPeriodicSeq {
    preperiod: Word,
    period: Word,
}

impl UltimatelyPeriodicSeq {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut period = primitive_root(period);
        let mut preperiod = preperiod;
        while let (Some(&a), Some(&b)) = (preperiod.0.last(), period.0.last()) {
            if a != b {
                break;
            }
            preperiod.0.pop();
            period.0.rotate_right(1);
        }
        Ok(UltimatelyPeriodicSeq { preperiod, period })
    }

    pub fn constant(letter: Letter) -> Self {
        UltimatelyPeriodicSeq {
            preperiod: Word::empty(),
            period: Word(vec![letter]),
        }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// Representative of position `pos` in `0..preperiod+period`.
    pub fn normalize(&self, pos: usize) -> usize {
        let pre = self.preperiod.len();
        if pos < pre {
            pos
        } else {
            pre + (pos - pre) % self.period.len()
        }
    }

    /// Number of distinct normalized positions.
    pub fn positions(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    pub fn at(&self, pos: usize) -> Letter {
        let p = self.normalize(pos);
        let pre = self.preperiod.len();
        if p < pre {
            self.preperiod.0[p]
        } else {
            self.period.0[p - pre]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.at(i)).collect())
    }

    /// The suffix starting at position `n`.
    pub fn skip(&self, n: usize) -> Self {
        let pre = self.preperiod.len();
        if n <= pre {
            return Self::new(Word(self.preperiod.0[n..].to_vec()), self.period.clone())
                .expect("period is nonempty");
        }
        let mut period = self.period.clone();
        let shift = (n - pre) % period.len();
        period.0.rotate_left(shift);
        Self::new(Word::empty(), period).expect("period is nonempty")
    }

    pub fn check(&self, alphabet: &TapeAlphabet) -> Result<()> {
        alphabet.check(&self.preperiod)?;
        alphabet.check(&self.period)
    }
}

fn primitive_root(w: Word) -> Word {
    let n = w.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| w.0[i] == w.0[i - d]) {
            return w.prefix(d);
        }
    }
    w
}

/// `Σ δ(u_i)·|A|^{-i}`, exactly.
pub fn digit_value(alphabet: &TapeAlphabet, word: &Word) -> Rational {
    let base = BigInt::from(alphabet.base());
    let mut numer = BigInt::zero();
    let mut denom = BigInt::one();
    for &l in word.letters() {
        numer = numer * &base + BigInt::from(alphabet.digit(l));
        denom *= &base;
    }
    Rational::new(numer, denom)
}

/// Componentwise [`digit_value`].
pub fn vector_value(alphabets: &[TapeAlphabet], words: &[Word]) -> RationalVector {
    alphabets
        .iter()
        .zip(words)
        .map(|(a, w)| digit_value(a, w))
        .collect()
}

/// Exact value of `preperiod · period^ω` via the geometric series.
pub fn seq_value(alphabet: &TapeAlphabet, seq: &UltimatelyPeriodicSeq) -> Rational {
    let pre = digit_value(alphabet, &seq.preperiod);
    let per = digit_value(alphabet, &seq.period);
    let shift = crate::rational::inv_pow(alphabet.base(), seq.preperiod.len());
    let ratio = crate::rational::inv_pow(alphabet.base(), seq.period.len());
    pre + shift * per / (Rational::one() - ratio)
}
