//! Interior and full-cube claims for attractors of automaton-compiled
//! graphs, delegated to the automaton's universality checks.
//!
//! Outer covers can never show that an interior is empty, so the interior
//! verdict is `Yes` (with an explicit box inside the attractor) or
//! `Unknown`, never `No`.

use super::cover::{box_stats, outer_cover, BoxR, BoxStats, MAX_BOXES};
use super::{compile_gifs, GifsGraph};
use crate::error::{Error, Result};
use crate::mta::{
    check_universal, search_universal_prefix, Bounds, ConfigPrefix, MultiTapeAutomaton, Verdict3,
};
use crate::rational::Rational;
use crate::words::digit_value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteriorOptions {
    pub bounds: Bounds,
    /// Deepest cover used for the advisory density trend.
    pub trend_depth: usize,
    pub max_boxes: usize,
}

impl Default for InteriorOptions {
    fn default() -> Self {
        InteriorOptions {
            bounds: Bounds::default(),
            trend_depth: 6,
            max_boxes: MAX_BOXES,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InteriorReport {
    pub vertex: String,
    /// Is the attractor the whole cube `[0,1]^d`?
    pub equals_cube: Verdict3,
    /// Does the attractor have nonempty interior?
    pub interior: Verdict3,
    /// A box inside the attractor, when `interior` is `Yes`.
    pub interior_box: Option<BoxR>,
    /// Box statistics at depths `1..=trend_depth`; advisory only. Empty
    /// when the interior was certified.
    pub density_trend: Vec<BoxStats>,
}

/// `Δ([w])`: the points of all configurations extending `w`.
pub fn cylinder_box(m: &MultiTapeAutomaton, w: &ConfigPrefix) -> BoxR {
    let (lo, hi): (Vec<Rational>, Vec<Rational>) = w
        .tapes()
        .iter()
        .zip(m.alphabets())
        .map(|(word, a)| {
            let lo = digit_value(a, word);
            let hi = &lo + crate::rational::inv_pow(a.base(), word.len());
            (lo, hi)
        })
        .unzip();
    BoxR::new(lo, hi)
}

fn trend(g: &GifsGraph, vertex: usize, opts: &InteriorOptions) -> Vec<BoxStats> {
    (1..=opts.trend_depth)
        .map_while(|k| {
            outer_cover(g, k, opts.max_boxes)
                .ok()
                .map(|c| box_stats(&c, vertex))
        })
        .collect()
}

/// With `source`, `g` must be `compile_gifs(source)`: universality of the
/// state certifies `X_q = [0,1]^d`, a universal prefix certifies its
/// cylinder box as interior, and a dead prefix certifies `X_q ≠ [0,1]^d`.
/// Without `source` only the density trend is reported.
pub fn interior_report(
    g: &GifsGraph,
    vertex: usize,
    source: Option<&MultiTapeAutomaton>,
    opts: &InteriorOptions,
) -> Result<InteriorReport> {
    let name = g
        .vertices()
        .get(vertex)
        .cloned()
        .ok_or_else(|| Error::UnknownVertex(format!("#{vertex}")))?;
    let bounds = opts.bounds;
    let Some(m) = source else {
        return Ok(InteriorReport {
            vertex: name,
            equals_cube: Verdict3::unknown(
                bounds,
                "no automaton provenance; outer covers cannot decide",
            ),
            interior: Verdict3::unknown(
                bounds,
                "no automaton provenance; density trend is advisory",
            ),
            interior_box: None,
            density_trend: trend(g, vertex, opts),
        });
    };
    if compile_gifs(m)? != *g {
        return Err(Error::ProvenanceMismatch);
    }

    let equals_cube = check_universal(m, vertex, bounds);
    if equals_cube.is_yes() {
        return Ok(InteriorReport {
            vertex: name,
            interior: equals_cube.clone(),
            equals_cube,
            interior_box: Some(BoxR::unit(g.dim())),
            density_trend: Vec::new(),
        });
    }
    let (prefix, interior) = search_universal_prefix(m, vertex, bounds);
    let interior_box = prefix.map(|w| cylinder_box(m, &w));
    let density_trend = if interior.is_yes() {
        Vec::new()
    } else {
        trend(g, vertex, opts)
    };
    Ok(InteriorReport {
        vertex: name,
        equals_cube,
        interior,
        interior_box,
        density_trend,
    })
}
