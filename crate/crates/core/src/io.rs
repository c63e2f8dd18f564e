//! File formats: PCP, automaton and GIFS JSON, configuration specs and
//! binary PGM images.
//!
//! Words are written as strings in the alphabet's display form (plain for
//! single-character alphabets, dot-separated tokens otherwise). Rationals
//! are `"n"` or `"n/d"` strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gifs::{AffineMapR, Edge, GifsGraph, ImageGrid};
use crate::mta::{ConfigPrefix, MultiTapeAutomaton, Transition, Verdict3, Witness};
use crate::pcp::PcpInstance;
use crate::rational::{format_rational, parse_rational};
use crate::reductions::{ReductionOutput, SymbolRole, Variant};
use crate::words::{TapeAlphabet, UltimatelyPeriodicSeq};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PcpFile {
    alphabet: Vec<String>,
    pairs: Vec<(String, String)>,
}

pub fn parse_pcp_json(s: &str) -> Result<PcpInstance> {
    let f: PcpFile = serde_json::from_str(s).map_err(parse_err)?;
    let alphabet = TapeAlphabet::new(f.alphabet)?;
    let pairs = f
        .pairs
        .iter()
        .map(|(u, v)| Ok((alphabet.parse_word(u)?, alphabet.parse_word(v)?)))
        .collect::<Result<Vec<_>>>()?;
    PcpInstance::new(alphabet, pairs)
}

pub fn pcp_to_json(inst: &PcpInstance) -> String {
    let a = inst.alphabet();
    to_pretty(&PcpFile {
        alphabet: a.symbols().to_vec(),
        pairs: inst
            .pairs()
            .iter()
            .map(|(u, v)| (a.display(u), a.display(v)))
            .collect(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    from: String,
    to: String,
    words: Vec<String>,
}

/// Side table for automata built by a reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub variant: Variant,
    /// Per tape, the role of each symbol.
    pub symbols: Vec<Vec<SymbolRole>>,
    /// Per transition, the construction items producing it.
    pub items: Vec<Vec<u8>>,
}

impl Provenance {
    pub fn of(out: &ReductionOutput) -> Self {
        Provenance {
            variant: out.variant,
            symbols: out.roles.clone(),
            items: out.provenance.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    tapes: usize,
    alphabets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    digits: Option<Vec<Vec<u32>>>,
    states: Vec<String>,
    transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

pub fn parse_automaton_json(s: &str) -> Result<(MultiTapeAutomaton, Option<Provenance>)> {
    let f: AutomatonFile = serde_json::from_str(s).map_err(parse_err)?;
    if f.tapes != f.alphabets.len() {
        return Err(Error::Parse(format!(
            "`tapes` is {} but {} alphabets are given",
            f.tapes,
            f.alphabets.len()
        )));
    }
    let alphabets = match &f.digits {
        None => f
            .alphabets
            .iter()
            .map(|a| TapeAlphabet::new(a.iter().cloned()))
            .collect::<Result<Vec<_>>>()?,
        Some(ds) if ds.len() == f.alphabets.len() => f
            .alphabets
            .iter()
            .zip(ds)
            .map(|(a, d)| TapeAlphabet::with_digits(a.clone(), d.clone()))
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::Parse("`digits` must have one entry per tape".into())),
    };
    let state = |t: usize, name: &str| {
        f.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState {
                transition: t,
                state: name.to_string(),
            })
    };
    let mut transitions = Vec::with_capacity(f.transitions.len());
    for (i, t) in f.transitions.iter().enumerate() {
        if t.words.len() != alphabets.len() {
            return Err(Error::TapeCountMismatch {
                transition: i,
                expected: alphabets.len(),
                found: t.words.len(),
            });
        }
        let words = t
            .words
            .iter()
            .zip(&alphabets)
            .map(|(w, a)| {
                a.parse_word(w)
                    .map_err(|e| Error::UnknownSymbolInTransition {
                        transition: i,
                        detail: e.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push(Transition {
            from: state(i, &t.from)?,
            to: state(i, &t.to)?,
            words,
        });
    }
    let m = MultiTapeAutomaton::new(alphabets, f.states, transitions)?;
    if let Some(p) = &f.provenance {
        if p.items.len() != m.transitions().len() {
            return Err(Error::Parse(
                "provenance must list items for every transition".into(),
            ));
        }
    }
    Ok((m, f.provenance))
}

pub fn automaton_to_json(m: &MultiTapeAutomaton, provenance: Option<&Provenance>) -> String {
    let identity = m.alphabets().iter().all(TapeAlphabet::has_identity_digits);
    to_pretty(&AutomatonFile {
        tapes: m.tapes(),
        alphabets: m.alphabets().iter().map(|a| a.symbols().to_vec()).collect(),
        digits: (!identity).then(|| m.alphabets().iter().map(|a| a.digits().to_vec()).collect()),
        states: m.states().to_vec(),
        transitions: m
            .transitions()
            .iter()
            .map(|t| TransitionFile {
                from: m.states()[t.from].clone(),
                to: m.states()[t.to].clone(),
                words: t
                    .words
                    .iter()
                    .zip(m.alphabets())
                    .map(|(w, a)| a.display(w))
                    .collect(),
            })
            .collect(),
        provenance: provenance.cloned(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    from: String,
    to: String,
    matrix: Vec<Vec<String>>,
    translation: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GifsFile {
    dim: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeFile>,
}

pub fn parse_gifs_json(s: &str) -> Result<GifsGraph> {
    let f: GifsFile = serde_json::from_str(s).map_err(parse_err)?;
    let vertex = |name: &str| {
        f.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    };
    let mut edges = Vec::with_capacity(f.edges.len());
    for (i, e) in f.edges.iter().enumerate() {
        let matrix = e
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let translation = e
            .translation
            .iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<_>>>()?;
        let map = AffineMapR::new(matrix, translation).map_err(|err| match err {
            Error::NotContracting { bound, .. } => Error::NotContracting { edge: i, bound },
            other => other,
        })?;
        edges.push(Edge {
            from: vertex(&e.from)?,
            to: vertex(&e.to)?,
            map,
        });
    }
    GifsGraph::new(f.dim, f.vertices, edges)
}

pub fn gifs_to_json(g: &GifsGraph) -> String {
    let fmt_vec = |v: &[crate::rational::Rational]| v.iter().map(format_rational).collect();
    to_pretty(&GifsFile {
        dim: g.dim(),
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeFile {
                from: g.vertices()[e.from].clone(),
                to: g.vertices()[e.to].clone(),
                matrix: e.map.matrix().iter().map(|r| fmt_vec(r)).collect(),
                translation: fmt_vec(e.map.translation()),
            })
            .collect(),
    })
}

/// Parses `"pre:period|pre:period|…"`, one part per tape. A part without
/// `:` is a pure period.
pub fn parse_config(m: &MultiTapeAutomaton, s: &str) -> Result<Vec<UltimatelyPeriodicSeq>> {
    let parts: Vec<&str> = s.split('|').collect();
    if parts.len() != m.tapes() {
        return Err(Error::ConfigTapeMismatch {
            expected: m.tapes(),
            found: parts.len(),
        });
    }
    parts
        .iter()
        .zip(m.alphabets())
        .map(|(p, a)| {
            let (pre, per) = p.split_once(':').unwrap_or(("", p));
            UltimatelyPeriodicSeq::new(a.parse_word(pre.trim())?, a.parse_word(per.trim())?)
        })
        .collect()
}

pub fn format_config(m: &MultiTapeAutomaton, c: &[UltimatelyPeriodicSeq]) -> String {
    c.iter()
        .zip(m.alphabets())
        .map(|(s, a)| format!("{}:{}", a.display(s.preperiod()), a.display(s.period())))
        .collect::<Vec<_>>()
        .join("|")
}

/// Binary PGM, maxval 255: 0 inside, 255 outside.
pub fn write_pgm(img: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.bits.iter().map(|&b| if b { 0u8 } else { 255 }));
    out
}

/// A decoded grayscale image; pixels darker than half of maxval are set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl From<&ImageGrid> for Bitmap {
    fn from(img: &ImageGrid) -> Self {
        Bitmap {
            width: img.width,
            height: img.height,
            bits: img.bits.clone(),
        }
    }
}

pub fn parse_pgm(data: &[u8]) -> Result<Bitmap> {
    let bad = |m: &str| Error::Parse(format!("PGM: {m}"));
    let mut pos = 0usize;
    let mut field = || -> Result<usize> {
        loop {
            match data.get(pos) {
                Some(b'#') => {
                    while data.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while data
            .get(pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            pos += 1;
        }
        std::str::from_utf8(&data[start..pos])
            .ok()
            .and_then(|s| if s == "P5" { Some(5) } else { s.parse().ok() })
            .ok_or_else(|| bad("bad header field"))
    };
    if field()? != 5 || !data.starts_with(b"P5") {
        return Err(bad("not a binary graymap"));
    }
    let width = field()?;
    let height = field()?;
    let maxval = field()?;
    if maxval == 0 || maxval > 255 {
        return Err(bad("maxval must be in 1..=255"));
    }
    // exactly one whitespace byte before the raster
    if !data.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("missing raster separator"));
    }
    pos += 1;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| bad("image too large"))?;
    let raster = data
        .get(pos..)
        .filter(|r| r.len() == n)
        .ok_or_else(|| bad("raster size mismatch"))?;
    Ok(Bitmap {
        width,
        height,
        bits: raster.iter().map(|&v| (v as usize) * 2 < maxval).collect(),
    })
}

fn prefix_json(m: &MultiTapeAutomaton, p: &ConfigPrefix) -> Value {
    Value::String(p.render(m))
}

/// Machine-readable form of a verdict, prefixes rendered against `m`.
pub fn verdict_json(m: Option<&MultiTapeAutomaton>, v: &Verdict3) -> Value {
    let render = |p: &ConfigPrefix| match m {
        Some(m) => prefix_json(m, p),
        None => Value::String(format!("{p:?}")),
    };
    let witness = v.witness.as_ref().map(|w| match w {
        Witness::DeadPrefix(p) => json!({"kind": "dead-prefix", "prefix": render(p)}),
        Witness::DeadExtension { prefix, extension } => json!({
            "kind": "dead-extension", "prefix": render(prefix), "extension": render(extension)
        }),
        Witness::Certificate { digest, beliefs } => json!({
            "kind": "certificate", "digest": digest, "beliefs": beliefs
        }),
        Witness::UniversalPrefix { prefix, digest, beliefs } => json!({
            "kind": "universal-prefix", "prefix": render(prefix), "digest": digest, "beliefs": beliefs
        }),
        Witness::Run { stem, cycle } => json!({"kind": "run", "stem": stem, "cycle": cycle}),
    });
    json!({
        "verdict": v.value.to_string(),
        "witness": witness,
        "bounds": {
            "max_prefix_len": v.bounds.max_prefix_len,
            "max_ext_len": v.bounds.max_ext_len,
            "overhang_cap": v.bounds.overhang_cap,
            "max_beliefs": v.bounds.max_beliefs,
        },
        "note": v.note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gifs::{compile_gifs, outer_cover, rasterize, Viewport, MAX_BOXES};

    const EX21: &str = r#"{"tapes": 2, "alphabets": [["0","1"],["0","1","2"]], "states": ["X","Y"],
        "transitions": [{"from":"X","to":"X","words":["0","22"]}, {"from":"X","to":"Y","words":["10","11"]},
        {"from":"Y","to":"Y","words":["1","001"]}, {"from":"Y","to":"Y","words":["1","20"]},
        {"from":"Y","to":"X","words":["110","2"]}]}"#;

    #[test]
    fn pcp_round_trip() {
        let inst = parse_pcp_json(r#"{"alphabet": ["a","b"], "pairs": [["a","abb"],["bb","aa"]]}"#)
            .unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(parse_pcp_json(&pcp_to_json(&inst)).unwrap(), inst);
        assert!(parse_pcp_json(r#"{"alphabet": ["a"], "pairs": [["a","b"]]}"#).is_err());
    }

    #[test]
    fn automaton_round_trip() {
        let (m, p) = parse_automaton_json(EX21).unwrap();
        assert!(p.is_none());
        assert_eq!(m.transitions().len(), 5);
        let (m2, _) = parse_automaton_json(&automaton_to_json(&m, None)).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn gifs_round_trip() {
        let (m, _) = parse_automaton_json(EX21).unwrap();
        let g = compile_gifs(&m).unwrap();
        assert_eq!(parse_gifs_json(&gifs_to_json(&g)).unwrap(), g);
        let bad = r#"{"dim":1,"vertices":["q"],"edges":[{"from":"q","to":"q","matrix":[["1"]],"translation":["0"]}]}"#;
        assert!(matches!(
            parse_gifs_json(bad),
            Err(Error::NotContracting { edge: 0, .. })
        ));
    }

    #[test]
    fn config_specs() {
        let (m, _) = parse_automaton_json(EX21).unwrap();
        let c = parse_config(&m, ":0|:22").unwrap();
        assert_eq!(format_config(&m, &c), ":0|:2");
        assert_eq!(parse_config(&m, "0|2").unwrap(), c);
        assert!(parse_config(&m, "1:|0").is_err());
        assert!(parse_config(&m, ":0").is_err());
    }

    #[test]
    fn pgm_round_trip() {
        let (m, _) = parse_automaton_json(EX21).unwrap();
        let g = compile_gifs(&m).unwrap();
        let c = outer_cover(&g, 3, MAX_BOXES).unwrap();
        let img = rasterize(&c, 0, &Viewport::unit(2), 16).unwrap();
        let bytes = write_pgm(&img);
        assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
        assert_eq!(parse_pgm(&bytes).unwrap(), Bitmap::from(&img));
        assert!(parse_pgm(b"P5\n2 2\n255\n\x00").is_err());
        assert!(parse_pgm(b"P2\n1 1\n255\n0").is_err());
    }
}
