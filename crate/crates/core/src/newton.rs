//! Newton polygons of Dieudonne modules.
//!
//! A polygon is stored as its slope segments (exact rationals, strictly
//! increasing, each with a multiplicity). It starts at (0, 0), ends at
//! (r, d), and every breakpoint is a lattice point.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::charpoly::charpoly;
use crate::error::{Error, Result};
use crate::sigma_modules::DieudonneModule;
use crate::witt_ring::Valuation;

pub type Slope = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub slope: Slope,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Validated constructor: slopes in [0, 1], strictly increasing, positive
    /// multiplicities, lattice breakpoints.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let poly = Self::from_segments_unchecked(segments)?;
        for s in &poly.segments {
            if s.slope < Slope::from_integer(0) || s.slope > Slope::from_integer(1) {
                return Err(Error::MalformedInput(format!(
                    "slope {} outside [0, 1]",
                    s.slope
                )));
            }
        }
        Ok(poly)
    }

    /// Checks everything except the [0, 1] slope range.
    fn from_segments_unchecked(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::MalformedInput("polygon has no segments".into()));
        }
        for s in &segments {
            if s.mult == 0 {
                return Err(Error::MalformedInput("zero multiplicity".into()));
            }
            if i64::from(s.mult) % s.slope.denom() != 0 {
                return Err(Error::MalformedInput(format!(
                    "slope {} with multiplicity {} ends off the lattice",
                    s.slope, s.mult
                )));
            }
        }
        if segments.windows(2).any(|w| w[0].slope >= w[1].slope) {
            return Err(Error::MalformedInput(
                "slopes must strictly increase".into(),
            ));
        }
        Ok(Self { segments })
    }

    /// Polygon with one slope `d / r` of multiplicity `r` (if lattice-valid).
    pub fn isoclinic(r: u32, d: u32) -> Result<Self> {
        Self::new(vec![Segment {
            slope: Slope::new(d as i64, r as i64),
            mult: r,
        }])
    }

    /// Polygon from (slope, multiplicity) pairs in any order; equal slopes merge.
    pub fn from_slopes(pairs: &[(Slope, u32)]) -> Result<Self> {
        let mut sorted = pairs.to_vec();
        sorted.sort_by_key(|a| a.0);
        let mut segments: Vec<Segment> = Vec::new();
        for (slope, mult) in sorted {
            match segments.last_mut() {
                Some(last) if last.slope == slope => last.mult += mult,
                _ => segments.push(Segment { slope, mult }),
            }
        }
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Height r.
    pub fn rank(&self) -> u32 {
        self.segments.iter().map(|s| s.mult).sum()
    }

    /// End value N(r).
    pub fn dim(&self) -> u32 {
        let total: Slope = self
            .segments
            .iter()
            .map(|s| s.slope * i64::from(s.mult))
            .sum();
        debug_assert!(total.is_integer());
        total.to_integer() as u32
    }

    pub fn codim(&self) -> u32 {
        self.rank() - self.dim()
    }

    /// Breakpoints from (0, 0) to (r, d), inclusive.
    pub fn vertices(&self) -> Vec<(u32, i64)> {
        let mut out = vec![(0u32, 0i64)];
        let (mut x, mut y) = (0u32, Slope::from_integer(0));
        for s in &self.segments {
            x += s.mult;
            y += s.slope * i64::from(s.mult);
            out.push((x, y.to_integer()));
        }
        out
    }

    /// N(t) for rational t in [0, r].
    pub fn eval(&self, t: Slope) -> Slope {
        let mut x = Slope::from_integer(0);
        let mut y = Slope::from_integer(0);
        for s in &self.segments {
            let end = x + i64::from(s.mult);
            if t <= end {
                return y + s.slope * (t - x);
            }
            x = end;
            y += s.slope * i64::from(s.mult);
        }
        y
    }

    /// Slope reflection lambda -> 1 - lambda: the polygon of the Cartier dual.
    pub fn reflect(&self) -> Self {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                slope: Slope::from_integer(1) - s.slope,
                mult: s.mult,
            })
            .collect();
        Self { segments }
    }

    /// Simple blocks (c_i, d_i), coprime, in slope order.
    pub fn to_simple_blocks(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for s in &self.segments {
            let a = *s.slope.numer() as u32;
            let b = *s.slope.denom() as u32;
            for _ in 0..(s.mult / b) {
                out.push((b - a, a));
            }
        }
        out
    }

    /// Polygon of a product of simple blocks H_{c_i, d_i}.
    pub fn from_simple_blocks(blocks: &[(u32, u32)]) -> Result<Self> {
        let pairs: Vec<(Slope, u32)> = blocks
            .iter()
            .map(|&(c, d)| {
                let r = c + d;
                if r == 0 {
                    return Err(Error::MalformedInput("empty block (0, 0)".into()));
                }
                Ok((Slope::new(d as i64, r as i64), r))
            })
            .collect::<Result<_>>()?;
        Self::from_slopes(&pairs)
    }

    /// Values at t = 1, ..., r - 1; the sort key of [`np_enumerate`].
    fn interior_values(&self) -> Vec<Slope> {
        (1..self.rank())
            .map(|t| self.eval(Slope::from_integer(t as i64)))
            .collect()
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}x{}", s.slope, s.mult)?;
        }
        f.write_str("}")
    }
}

/// Lower convex hull of points sorted by x (monotone chain).
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            // drop b unless a -> b -> pt turns strictly left (counter-clockwise)
            let cross =
                (bx - ax) as i128 * (pt.1 - ay) as i128 - (by - ay) as i128 * (pt.0 - ax) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

fn hull_segments(points: &[(usize, Valuation)]) -> Result<(Vec<Segment>, usize, u32)> {
    let mut finite: Vec<(i64, i64)> = points
        .iter()
        .filter_map(|&(i, v)| v.finite().map(|v| (i as i64, v as i64)))
        .collect();
    finite.sort();
    if finite.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::MalformedInput("repeated abscissa".into()));
    }
    let r = points.iter().map(|&(i, _)| i).max().unwrap_or(0);
    match finite.first() {
        Some(&(0, 0)) => {}
        _ => {
            return Err(Error::MalformedInput(
                "the point at i = 0 must have value 0".into(),
            ))
        }
    }
    let last = *finite.last().unwrap();
    if last.0 != r as i64 {
        return Err(Error::MalformedInput(format!(
            "the point at i = {r} must be finite"
        )));
    }
    if r == 0 {
        return Err(Error::MalformedInput("polygon of length 0".into()));
    }
    let hull = lower_hull(&finite);
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            let dy = w[1].1 - w[0].1;
            Segment {
                slope: Slope::new(dy, dx),
                mult: dx as u32,
            }
        })
        .collect();
    Ok((segments, r, last.1 as u32))
}

/// Lower convex hull of `(i, v_i)` through (0, 0) to (r, v_r); infinite
/// values are skipped.
pub fn np_from_points(points: &[(usize, Valuation)]) -> Result<NewtonPolygon> {
    let (segments, _, _) = hull_segments(points)?;
    NewtonPolygon::new(segments)
}

/// Exact Newton polygon of the isocrystal of `module`.
///
/// phi^deg is linear because sigma^deg = 1. Its characteristic polynomial
/// over W/p^N has a Newton polygon whose slopes are deg times the slopes of
/// the module; every relevant coefficient valuation is at most deg * d,
/// which the precision bound N > deg * d + 1 resolves.
pub fn np_of_module(module: &DieudonneModule) -> Result<NewtonPolygon> {
    let ring = module.ring();
    let deg = ring.deg() as u32;
    let d = module.dim();
    let n = ring.precision();
    if n <= deg * d + 1 {
        return Err(Error::PrecisionExhausted(format!(
            "precision {n} must exceed deg * d + 1 = {}",
            deg * d + 1
        )));
    }
    let linear = module.phi_power(deg as usize);
    let coeffs = charpoly(ring, &linear);
    let points: Vec<(usize, Valuation)> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (i, ring.valuation(c)))
        .collect();
    let r = module.rank();
    match points[r].1 {
        Valuation::Finite(v) if v == deg * d => {}
        other => {
            return Err(Error::PrecisionExhausted(format!(
                "determinant of phi^{deg} has valuation {other}, expected {}",
                deg * d
            )))
        }
    }
    let (segments, _, _) = hull_segments(&points)?;
    let scaled: Vec<Segment> = segments
        .into_iter()
        .map(|s| Segment {
            slope: s.slope / i64::from(deg),
            mult: s.mult,
        })
        .collect();
    NewtonPolygon::new(scaled)
        .map_err(|e| Error::PrecisionExhausted(format!("slopes of phi^{deg} do not descend: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    StrictlyAbove,
    StrictlyBelow,
    Incomparable,
}

impl Comparison {
    /// The non-strict relation "lies above".
    pub fn is_above(self) -> bool {
        matches!(self, Comparison::Equal | Comparison::StrictlyAbove)
    }

    pub fn is_below(self) -> bool {
        matches!(self, Comparison::Equal | Comparison::StrictlyBelow)
    }
}

/// Pointwise comparison, decided at the union of both breakpoint sets.
pub fn np_compare(a: &NewtonPolygon, b: &NewtonPolygon) -> Result<Comparison> {
    if a.rank() != b.rank() || a.dim() != b.dim() {
        return Err(Error::EndpointMismatch);
    }
    let mut xs: Vec<u32> = a
        .vertices()
        .into_iter()
        .chain(b.vertices())
        .map(|(x, _)| x)
        .collect();
    xs.sort_unstable();
    xs.dedup();
    let (mut above, mut below) = (false, false);
    for x in xs {
        let t = Slope::from_integer(x as i64);
        match a.eval(t).cmp(&b.eval(t)) {
            Ordering::Greater => above = true,
            Ordering::Less => below = true,
            Ordering::Equal => {}
        }
    }
    Ok(match (above, below) {
        (false, false) => Comparison::Equal,
        (true, false) => Comparison::StrictlyAbove,
        (false, true) => Comparison::StrictlyBelow,
        (true, true) => Comparison::Incomparable,
    })
}

/// Every Newton polygon of height c + d and dimension d, ascending in the
/// lexicographic order of the values at t = 1, ..., r - 1 (a linear
/// extension of the partial order).
pub fn np_enumerate(c: u32, d: u32) -> Vec<NewtonPolygon> {
    let r = c + d;
    if r == 0 {
        return Vec::new();
    }
    // candidate simple blocks, ordered by slope
    let mut blocks: Vec<(u32, u32)> = (0..=c)
        .flat_map(|ci| (0..=d).map(move |di| (ci, di)))
        .filter(|&(ci, di)| ci + di > 0 && ci.gcd(&di) == 1)
        .collect();
    blocks.sort_by(|x, y| {
        Slope::new(x.1 as i64, (x.0 + x.1) as i64).cmp(&Slope::new(y.1 as i64, (y.0 + y.1) as i64))
    });

    fn extend(
        blocks: &[(u32, u32)],
        start: usize,
        c_left: u32,
        d_left: u32,
        chosen: &mut Vec<(u32, u32)>,
        out: &mut Vec<NewtonPolygon>,
    ) {
        if c_left == 0 && d_left == 0 {
            out.push(NewtonPolygon::from_simple_blocks(chosen).expect("valid blocks"));
            return;
        }
        for (idx, &(bc, bd)) in blocks.iter().enumerate().skip(start) {
            if bc <= c_left && bd <= d_left {
                chosen.push((bc, bd));
                extend(blocks, idx, c_left - bc, d_left - bd, chosen, out);
                chosen.pop();
            }
        }
    }

    let mut out = Vec::new();
    extend(&blocks, 0, c, d, &mut Vec::new(), &mut out);
    out.sort_by_cached_key(NewtonPolygon::interior_values);
    out
}

/// Derived integer bounds attached to a (codimension, dimension) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutoffBounds {
    pub c: u32,
    pub d: u32,
    pub r: u32,
    /// ceil(cd / (c + d)): the isogeny cutoff bound.
    pub j: u32,
    /// cd + 1: bound on the level that determines the isomorphism class.
    pub n_bound: u32,
    /// ceil((c - 1)(d - 1) / (c + d)): bound on the minimal height of
    /// isosimple groups.
    pub isosimple_q_bound: u32,
}

impl CutoffBounds {
    pub fn new(c: u32, d: u32) -> Self {
        let r = c + d;
        assert!(r > 0, "bounds need c + d >= 1");
        let j = (c * d).div_ceil(r);
        let isosimple_q_bound = (c.saturating_sub(1) * d.saturating_sub(1)).div_ceil(r);
        if c >= 1 && d >= 1 && c.gcd(&d) == 1 {
            debug_assert_eq!(isosimple_q_bound + 1, j);
        }
        Self {
            c,
            d,
            r,
            j,
            n_bound: c * d + 1,
            isosimple_q_bound,
        }
    }

    /// Whether a witness pair exists (j >= 2).
    pub fn witness_available(&self) -> bool {
        self.j >= 2
    }
}

pub fn bounds(c: u32, d: u32) -> CutoffBounds {
    CutoffBounds::new(c, d)
}
