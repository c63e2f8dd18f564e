//! Outer box covers, rasterization and box counting.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AffineMapR, GifsGraph};
use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational, RationalVector};

/// Default cap on boxes per cover level.
pub const MAX_BOXES: usize = 10_000_000;
/// Largest accepted image side.
pub const MAX_RESOLUTION: usize = 1 << 14;

/// Closed axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxR {
    pub lo: RationalVector,
    pub hi: RationalVector,
}

impl BoxR {
    pub fn new(lo: RationalVector, hi: RationalVector) -> Self {
        BoxR { lo, hi }
    }

    pub fn unit(d: usize) -> Self {
        BoxR {
            lo: vec![Rational::zero(); d],
            hi: vec![Rational::one(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_box(&self, other: &BoxR) -> bool {
        (0..self.dim()).all(|k| self.lo[k] <= other.lo[k] && other.hi[k] <= self.hi[k])
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        (0..self.dim()).all(|k| self.lo[k] <= p[k] && p[k] <= self.hi[k])
    }

    /// Closed intersection test (touching counts).
    pub fn meets(&self, other: &BoxR) -> bool {
        (0..self.dim()).all(|k| self.lo[k] <= other.hi[k] && other.lo[k] <= self.hi[k])
    }

    /// Exact image hull under an affine map, by interval arithmetic. For
    /// diagonal maps this is the exact image.
    pub fn image(&self, f: &AffineMapR) -> BoxR {
        let d = self.dim();
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for (row, v) in f.matrix().iter().zip(f.translation()) {
            let mut l = v.clone();
            let mut h = v.clone();
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let x = a * &self.lo[j];
                let y = a * &self.hi[j];
                if a.is_positive() {
                    l += x;
                    h += y;
                } else {
                    l += y;
                    h += x;
                }
            }
            lo.push(l);
            hi.push(h);
        }
        BoxR { lo, hi }
    }
}

/// `[0,1]^d` when every map sends it into itself, otherwise the sup-norm
/// ball of radius `max ‖v_e‖ / (1 − max c_e)`, which every map sends into
/// itself.
pub fn bounding_box(g: &GifsGraph) -> BoxR {
    let unit = BoxR::unit(g.dim());
    if g.edges()
        .iter()
        .all(|e| unit.contains_box(&unit.image(&e.map)))
    {
        return unit;
    }
    let c = g.max_bound();
    let v = g
        .edges()
        .iter()
        .flat_map(|e| e.map.translation().iter().map(|x| x.abs()))
        .max()
        .unwrap_or_else(Rational::zero);
    let r = v / (Rational::one() - c);
    BoxR {
        lo: vec![-r.clone(); g.dim()],
        hi: vec![r; g.dim()],
    }
}

/// Outer approximation of every attractor after `depth` refinements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxCover {
    pub depth: usize,
    pub bounding_box: BoxR,
    /// Sorted, deduplicated boxes per vertex.
    pub per_vertex: Vec<Vec<BoxR>>,
}

impl BoxCover {
    pub fn boxes(&self, vertex: usize) -> &[BoxR] {
        &self.per_vertex[vertex]
    }
}

/// Iterates `B_q ↦ { hull f_e(B) : e = q→r, B ∈ B_r }` from the bounding box.
pub fn outer_cover(g: &GifsGraph, depth: usize, max_boxes: usize) -> Result<BoxCover> {
    let b0 = bounding_box(g);
    let mut cover = BoxCover {
        depth: 0,
        per_vertex: vec![vec![b0.clone()]; g.vertices().len()],
        bounding_box: b0,
    };
    for _ in 0..depth {
        cover = refine_cover(g, &cover, max_boxes)?;
    }
    Ok(cover)
}

/// One more refinement step of `cover`.
pub fn refine_cover(g: &GifsGraph, cover: &BoxCover, max_boxes: usize) -> Result<BoxCover> {
    let mut total = 0usize;
    let mut next = Vec::with_capacity(cover.per_vertex.len());
    for q in 0..g.vertices().len() {
        let mut set = BTreeSet::new();
        for &e in g.outgoing(q) {
            let edge = &g.edges()[e];
            for b in &cover.per_vertex[edge.to] {
                set.insert(b.image(&edge.map));
            }
            if total + set.len() > max_boxes {
                return Err(Error::TooManyBoxes(max_boxes));
            }
        }
        total += set.len();
        next.push(set.into_iter().collect());
    }
    Ok(BoxCover {
        depth: cover.depth + 1,
        bounding_box: cover.bounding_box.clone(),
        per_vertex: next,
    })
}

/// Is `p` in some box of the cover at `vertex`?
pub fn cover_contains_point(cover: &BoxCover, vertex: usize, p: &[Rational]) -> bool {
    cover.boxes(vertex).iter().any(|b| b.contains_point(p))
}

/// Is `target` inside the union of the cover boxes at `vertex`? Checked by
/// bisecting `target` up to `max_splits` times; `false` may be a false
/// negative when boxes are not aligned with the bisection.
pub fn cover_contains_box(
    cover: &BoxCover,
    vertex: usize,
    target: &BoxR,
    max_splits: usize,
) -> bool {
    let boxes: Vec<&BoxR> = cover
        .boxes(vertex)
        .iter()
        .filter(|b| b.meets(target))
        .collect();
    covered(target, &boxes, max_splits)
}

fn covered(target: &BoxR, boxes: &[&BoxR], splits: usize) -> bool {
    if boxes.iter().any(|b| b.contains_box(target)) {
        return true;
    }
    if splits == 0 || boxes.is_empty() {
        return false;
    }
    let k = (0..target.dim())
        .max_by(|&a, &b| (&target.hi[a] - &target.lo[a]).cmp(&(&target.hi[b] - &target.lo[b])))
        .expect("nonzero dimension");
    let mid = (&target.lo[k] + &target.hi[k]) / int(2);
    let mut left = target.clone();
    left.hi[k] = mid.clone();
    let mut right = target.clone();
    right.lo[k] = mid;
    [left, right].iter().all(|half| {
        let sub: Vec<&BoxR> = boxes.iter().copied().filter(|b| b.meets(half)).collect();
        covered(half, &sub, splits - 1)
    })
}

/// Region of space mapped onto an image. One-dimensional viewports give
/// single-row images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport {
    pub lo: RationalVector,
    pub hi: RationalVector,
}

impl Viewport {
    pub fn new(lo: RationalVector, hi: RationalVector) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::EmptyViewport);
        }
        Ok(Viewport { lo, hi })
    }

    pub fn unit(d: usize) -> Self {
        Viewport {
            lo: vec![Rational::zero(); d],
            hi: vec![Rational::one(); d],
        }
    }

    pub fn of_box(b: &BoxR) -> Result<Self> {
        Self::new(b.lo.clone(), b.hi.clone())
    }
}

/// Occupancy bitmap, row 0 at the top (largest second coordinate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageGrid {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
    pub bits: Vec<bool>,
}

impl ImageGrid {
    fn blank(width: usize, height: usize, viewport: Viewport) -> Self {
        ImageGrid {
            width,
            height,
            viewport,
            bits: vec![false; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Pixel width along axis 0 (and pixel height along axis 1).
    pub fn scale(&self) -> Vec<Rational> {
        let sizes = [self.width, self.height];
        self.viewport
            .lo
            .iter()
            .zip(&self.viewport.hi)
            .zip(sizes)
            .map(|((l, h), n)| (h - l) / int(n as i64))
            .collect()
    }

    pub fn and(&self, other: &ImageGrid) -> Result<ImageGrid> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(Error::DimensionMismatch {
                expected: self.width * self.height,
                found: other.width * other.height,
            });
        }
        Ok(ImageGrid {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a && *b)
                .collect(),
            ..self.clone()
        })
    }
}

fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Clamped index range `[lo, hi]` of pixels, or `None` if empty.
fn clamp(lo: BigInt, hi: BigInt, n: usize) -> Option<(usize, usize)> {
    let lo = lo.max(BigInt::zero());
    let hi = hi.min(BigInt::from(n) - 1);
    if lo > hi {
        return None;
    }
    Some((lo.to_usize()?, hi.to_usize()?))
}

/// Pixels whose closed cell meets some cover box of `vertex`.
pub fn rasterize(
    cover: &BoxCover,
    vertex: usize,
    viewport: &Viewport,
    resolution: usize,
) -> Result<ImageGrid> {
    if resolution > MAX_RESOLUTION || resolution == 0 {
        return Err(Error::ResolutionTooLarge(resolution));
    }
    let d = cover.bounding_box.dim();
    if viewport.lo.len() != d || d > 2 {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: viewport.lo.len(),
        });
    }
    let height = if d == 2 { resolution } else { 1 };
    let mut img = ImageGrid::blank(resolution, height, viewport.clone());
    let s = img.scale();
    let one = Rational::one();
    for b in cover.boxes(vertex) {
        // column i covers [lo + i s, lo + (i+1) s]
        let Some((c0, c1)) = clamp(
            ceil(&((&b.lo[0] - &viewport.lo[0]) / &s[0] - &one)),
            floor(&((&b.hi[0] - &viewport.lo[0]) / &s[0])),
            resolution,
        ) else {
            continue;
        };
        let (r0, r1) = if d == 2 {
            // row j covers [hi - (j+1) s, hi - j s]
            match clamp(
                ceil(&((&viewport.hi[1] - &b.hi[1]) / &s[1] - &one)),
                floor(&((&viewport.hi[1] - &b.lo[1]) / &s[1])),
                height,
            ) {
                Some(r) => r,
                None => continue,
            }
        } else {
            (0, 0)
        };
        for r in r0..=r1 {
            img.bits[r * resolution + c0..=r * resolution + c1].fill(true);
        }
    }
    Ok(img)
}

/// Pixelwise AND of the rasters of `q` and `r`.
pub fn intersection_raster(
    cover: &BoxCover,
    q: usize,
    r: usize,
    viewport: &Viewport,
    resolution: usize,
) -> Result<ImageGrid> {
    rasterize(cover, q, viewport, resolution)?.and(&rasterize(cover, r, viewport, resolution)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxStats {
    pub depth: usize,
    /// Distinct cover boxes.
    pub count: usize,
    /// Total box volume over the bounding box's volume. Overlaps count
    /// twice, so this can exceed 1; for dyadic covers it is
    /// `count / 2^{depth·d}`.
    pub density: f64,
    /// `log count / log(1/s)`, `s` the largest box side relative to the
    /// bounding box; `None` at depth 0 or when `s` is not below 1.
    pub dim_estimate: Option<f64>,
}

/// Box-counting statistics of the cover at its own depth.
pub fn box_stats(cover: &BoxCover, vertex: usize) -> BoxStats {
    let boxes = cover.boxes(vertex);
    let n = boxes.len();
    let bb = &cover.bounding_box;
    let rel = |b: &BoxR, i: usize| to_f64(&((&b.hi[i] - &b.lo[i]) / (&bb.hi[i] - &bb.lo[i])));
    let density = boxes
        .iter()
        .map(|b| (0..b.dim()).map(|i| rel(b, i)).product::<f64>())
        .sum();
    let side = boxes
        .iter()
        .flat_map(|b| (0..b.dim()).map(move |i| rel(b, i)))
        .fold(0f64, f64::max);
    BoxStats {
        depth: cover.depth,
        count: n,
        density,
        dim_estimate: (cover.depth > 0 && side > 0.0 && side < 1.0)
            .then(|| (n as f64).ln() / -side.ln()),
    }
}
