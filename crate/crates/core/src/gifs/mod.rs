//! Exact affine graph-directed IFS.
//!
//! Every vertex `q` has an attractor `X_q = ⋃_{e: q→r} f_e(X_r)`. The GIFS
//! compiled from a multi-tape automaton has `X_q = {Δ(c) : c is q-accepted}`,
//! so runs map to points and prefixes to boxes.

mod cover;
mod interior;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mta::MultiTapeAutomaton;
use crate::rational::{inv_pow, Rational, RationalVector};
use crate::words::vector_value;

pub use cover::{
    bounding_box, box_stats, cover_contains_box, cover_contains_point, intersection_raster,
    outer_cover, rasterize, refine_cover, BoxCover, BoxR, BoxStats, ImageGrid, Viewport, MAX_BOXES,
    MAX_RESOLUTION,
};
pub use interior::{cylinder_box, interior_report, InteriorOptions, InteriorReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContractionCertificate {
    /// Diagonal matrix; the bound is the largest absolute entry.
    DiagonalMax,
    /// Largest absolute row sum, an upper bound on the operator norm for
    /// the sup norm.
    InfinityNorm,
}

impl fmt::Display for ContractionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionCertificate::DiagonalMax => "diagonal-max",
            ContractionCertificate::InfinityNorm => "infinity-norm",
        })
    }
}

/// `x ↦ M x + v` with a certified sup-norm contraction bound `c < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMapR {
    matrix: Vec<Vec<Rational>>,
    translation: RationalVector,
    bound: Rational,
    certificate: ContractionCertificate,
}

impl AffineMapR {
    /// Fails with `NotContracting` (edge 0) when the certified bound is ≥ 1,
    /// even if the spectral radius is smaller.
    pub fn new(matrix: Vec<Vec<Rational>>, translation: RationalVector) -> Result<Self> {
        let d = translation.len();
        if matrix.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || matrix[i][j].is_zero()));
        let bound = matrix
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, x| acc + x.abs()))
            .max()
            .unwrap_or_else(Rational::zero);
        if bound >= Rational::one() {
            return Err(Error::NotContracting {
                edge: 0,
                bound: crate::rational::format_rational(&bound),
            });
        }
        let certificate = if diagonal {
            ContractionCertificate::DiagonalMax
        } else {
            ContractionCertificate::InfinityNorm
        };
        Ok(AffineMapR {
            matrix,
            translation,
            bound,
            certificate,
        })
    }

    pub fn diagonal(diag: Vec<Rational>, translation: RationalVector) -> Result<Self> {
        let d = diag.len();
        let matrix = diag
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let mut row = vec![Rational::zero(); d];
                row[i] = x;
                row
            })
            .collect();
        Self::new(matrix, translation)
    }

    /// `x ↦ M⁻¹ (x + v)` for an expanding integer-like `M`.
    pub fn inverse_of(m: Vec<Vec<Rational>>, v: RationalVector) -> Result<Self> {
        let inv = invert(&m)?;
        let t = mat_vec(&inv, &v);
        Self::new(inv, t)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn certificate(&self) -> ContractionCertificate {
        self.certificate
    }

    pub fn is_diagonal(&self) -> bool {
        self.certificate == ContractionCertificate::DiagonalMax
    }

    pub fn apply(&self, x: &[Rational]) -> RationalVector {
        let mut y = mat_vec(&self.matrix, x);
        for (yi, vi) in y.iter_mut().zip(&self.translation) {
            *yi += vi;
        }
        y
    }
}

fn mat_vec(m: &[Vec<Rational>], x: &[Rational]) -> RationalVector {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(a, _)| !a.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

fn identity(d: usize) -> Vec<Vec<Rational>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Solves `a x = b` by exact Gauss–Jordan elimination.
fn solve(mut a: Vec<Vec<Rational>>, mut b: RationalVector) -> Result<RationalVector> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        b[col] /= &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Ok(b)
}

fn invert(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let d = m.len();
    let cols = (0..d)
        .map(|j| solve(m.to_vec(), identity(d)[j].clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..d)
        .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub map: AffineMapR,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GifsGraph {
    dim: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
}

impl GifsGraph {
    pub fn new(dim: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            for v in [e.from, e.to] {
                if v >= vertices.len() {
                    return Err(Error::UnknownVertex(format!("#{v}")));
                }
            }
            if e.map.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.map.dim(),
                });
            }
            outgoing[e.from].push(i);
        }
        if let Some(q) = outgoing.iter().position(Vec::is_empty) {
            return Err(Error::NoOutgoingEdge(vertices[q].clone()));
        }
        Ok(GifsGraph {
            dim,
            vertices,
            edges,
            outgoing,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outgoing(&self, q: usize) -> &[usize] {
        &self.outgoing[q]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Largest contraction bound over all edges.
    pub fn max_bound(&self) -> Rational {
        self.edges
            .iter()
            .map(|e| e.map.bound().clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn check_path(&self, path: &[usize]) -> Result<()> {
        for (i, &e) in path.iter().enumerate() {
            let edge = self.edges.get(e).ok_or(Error::NoSuchEdge(e))?;
            if i > 0 && self.edges[path[i - 1]].to != edge.from {
                return Err(Error::DisconnectedPath(i));
            }
        }
        Ok(())
    }

    /// `f_{e_1} ∘ ⋯ ∘ f_{e_n}` as a matrix and a translation.
    fn compose(&self, path: &[usize]) -> (Vec<Vec<Rational>>, RationalVector) {
        let mut m = identity(self.dim);
        let mut t = vec![Rational::zero(); self.dim];
        // (A, b) ∘ f = (A M, A v + b), accumulated left to right
        for &e in path {
            let f = &self.edges[e].map;
            let av = mat_vec(&m, f.translation());
            for (ti, x) in t.iter_mut().zip(av) {
                *ti += x;
            }
            m = mat_mul(&m, f.matrix());
        }
        (m, t)
    }
}

/// One vertex per state, one edge per transition (same indices), with map
/// `diag(|A_k|^{-|w_k|}) x + Δ(w)`.
pub fn compile_gifs(m: &MultiTapeAutomaton) -> Result<GifsGraph> {
    let edges = m
        .transitions()
        .iter()
        .map(|t| {
            let diag = t
                .words
                .iter()
                .zip(m.alphabets())
                .map(|(w, a)| inv_pow(a.base(), w.len()))
                .collect();
            let map = AffineMapR::diagonal(diag, vector_value(m.alphabets(), &t.words))?;
            Ok(Edge {
                from: t.from,
                to: t.to,
                map,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GifsGraph::new(m.tapes(), m.states().to_vec(), edges)
}

/// `f_{e_1} ∘ ⋯ ∘ f_{e_n}(seed)`.
pub fn run_point(g: &GifsGraph, path: &[usize], seed: &[Rational]) -> Result<RationalVector> {
    g.check_path(path)?;
    if seed.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: seed.len(),
        });
    }
    Ok(path
        .iter()
        .rev()
        .fold(seed.to_vec(), |x, &e| g.edges[e].map.apply(&x)))
}

/// The point `f_stem(p)` where `p` is the fixed point of `f_cycle`.
pub fn attractor_point(
    g: &GifsGraph,
    stem: &[usize],
    cycle: &[usize],
    vertex: usize,
) -> Result<RationalVector> {
    if cycle.is_empty() {
        return Err(Error::DisconnectedPath(0));
    }
    let whole: Vec<usize> = stem.iter().chain(cycle).copied().collect();
    g.check_path(&whole)?;
    g.check_path(&[cycle, &cycle[..1]].concat())?;
    if g.edges[whole[0]].from != vertex {
        return Err(Error::DisconnectedPath(0));
    }
    let (a, b) = g.compose(cycle);
    // (I - A) p = b
    let lhs = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    if i == j {
                        Rational::one() - x
                    } else {
                        -x.clone()
                    }
                })
                .collect()
        })
        .collect();
    let p = solve(lhs, b)?;
    run_point(g, stem, &p)
}
