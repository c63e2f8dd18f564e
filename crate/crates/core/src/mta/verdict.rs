use std::fmt;

use super::ConfigPrefix;

/// Search and saturation limits. Every verdict records the bounds it was
/// computed under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_prefix_len: usize,
    pub max_ext_len: usize,
    pub overhang_cap: usize,
    /// Upper limit on distinct belief states visited by one search.
    pub max_beliefs: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_prefix_len: 8,
            max_ext_len: 12,
            overhang_cap: 8,
            max_beliefs: 200_000,
        }
    }
}

impl Bounds {
    pub fn new(max_prefix_len: usize, max_ext_len: usize, overhang_cap: usize) -> Self {
        Bounds {
            max_prefix_len,
            max_ext_len,
            overhang_cap,
            ..Bounds::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No configuration with this prefix is accepted.
    DeadPrefix(ConfigPrefix),
    /// `prefix = x·extension` is dead for the queried prefix `x`.
    DeadExtension {
        prefix: ConfigPrefix,
        extension: ConfigPrefix,
    },
    /// Closed belief family: `beliefs` states, hashed canonically.
    Certificate { digest: String, beliefs: usize },
    /// A prefix whose belief saturation closed.
    UniversalPrefix {
        prefix: ConfigPrefix,
        digest: String,
        beliefs: usize,
    },
    /// Accepting lasso, as transition indices.
    Run { stem: Vec<usize>, cycle: Vec<usize> },
}

/// Three-valued answer. `Yes` and `No` are claims about the unbounded
/// property; `Unknown` claims nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict3 {
    pub value: Verdict,
    pub witness: Option<Witness>,
    pub bounds: Bounds,
    pub note: Option<String>,
}

impl Verdict3 {
    pub fn yes(witness: Witness, bounds: Bounds) -> Self {
        Verdict3 {
            value: Verdict::Yes,
            witness: Some(witness),
            bounds,
            note: None,
        }
    }

    pub fn no(witness: Witness, bounds: Bounds) -> Self {
        Verdict3 {
            value: Verdict::No,
            witness: Some(witness),
            bounds,
            note: None,
        }
    }

    pub fn unknown(bounds: Bounds, note: impl Into<String>) -> Self {
        Verdict3 {
            value: Verdict::Unknown,
            witness: None,
            bounds,
            note: Some(note.into()),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.value == Verdict::Yes
    }

    pub fn is_no(&self) -> bool {
        self.value == Verdict::No
    }

    pub fn is_unknown(&self) -> bool {
        self.value == Verdict::Unknown
    }

    /// The prefix carried by a dead-prefix or universal-prefix witness.
    pub fn prefix(&self) -> Option<&ConfigPrefix> {
        match &self.witness {
            Some(Witness::DeadPrefix(p))
            | Some(Witness::DeadExtension { prefix: p, .. })
            | Some(Witness::UniversalPrefix { prefix: p, .. }) => Some(p),
            _ => None,
        }
    }
}
