//! Exact rational convex geometry: hulls, height-one cone slices, dilation,
//! facet descriptions and normal fans.

pub mod lp;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::linalg::{null_space, rank};
use crate::exactmath::rat::primitive_integer_vector;
use crate::exactmath::{format_rat, parse_rat, Rat};

/// A convex polytope in `Q^dim`, stored by its vertices in ascending
/// lexicographic order. Two polytopes are equal iff their vertex lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
}

/// An element `(value, level)` of a graded semigroup in `N^n x N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedPoint {
    pub value: Vec<u32>,
    pub level: u32,
}

impl GradedPoint {
    pub fn new(value: Vec<u32>, level: u32) -> Self {
        GradedPoint { value, level }
    }
}

/// The half-space `normal . x >= offset`, with `normal` a primitive integer
/// vector pointing into the polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Facet {
    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, v)| Rat::from_integer(a.clone()) * v)
            .sum::<Rat>()
            - &self.offset
    }
}

fn lex_cmp(a: &[Rat], b: &[Rat]) -> Ordering {
    a.cmp(b)
}

fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs).expect("uniform widths")
}

impl RationalPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Builds a polytope from a list already known to be its vertex set.
    fn from_vertices(dim: usize, mut vertices: Vec<Vec<Rat>>) -> Self {
        vertices.sort_by(|a, b| lex_cmp(a, b));
        vertices.dedup();
        RationalPolytope { dim, vertices }
    }

    pub fn affine_dimension(&self) -> usize {
        affine_rank(&self.vertices)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dimension() == self.dim
    }

    /// Facet inequalities of a full-dimensional polytope, ordered by normal.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let n = self.dim;
        if n == 0 {
            return Ok(Vec::new());
        }
        let verts = &self.vertices;
        let mut found: Vec<Facet> = Vec::new();
        let mut subset: Vec<usize> = (0..n).collect();
        loop {
            if let Some(f) = self.supporting_hyperplane(&subset) {
                if !found.iter().any(|g| g.normal == f.normal) {
                    found.push(f);
                }
            }
            // next combination of n indices out of verts.len()
            let k = verts.len();
            let mut i = n;
            loop {
                if i == 0 {
                    found.sort_by(|a, b| a.normal.cmp(&b.normal));
                    return Ok(found);
                }
                i -= 1;
                if subset[i] < k - n + i {
                    subset[i] += 1;
                    for j in i + 1..n {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn supporting_hyperplane(&self, subset: &[usize]) -> Option<Facet> {
        let n = self.dim;
        let base = &self.vertices[subset[0]];
        let diffs: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let normal = if diffs.is_empty() {
            // dimension one: the hyperplane is a point
            vec![Rat::one()]
        } else {
            let ns = null_space(&diffs, n);
            if ns.len() != 1 {
                return None;
            }
            ns.into_iter().next().unwrap()
        };
        let ints = primitive_integer_vector(&normal);
        let a: Vec<Rat> = ints.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let dot = |v: &[Rat]| -> Rat { a.iter().zip(v).map(|(x, y)| x * y).sum() };
        let offset = dot(base);
        let mut above = false;
        let mut below = false;
        for v in &self.vertices {
            match dot(v).cmp(&offset) {
                Ordering::Greater => above = true,
                Ordering::Less => below = true,
                Ordering::Equal => {}
            }
        }
        match (above, below) {
            (true, true) | (false, false) => None,
            (true, false) => Some(Facet { normal: ints, offset }),
            (false, true) => Some(Facet {
                normal: ints.into_iter().map(|x| -x).collect(),
                offset: -offset,
            }),
        }
    }

    pub fn contains_point(&self, p: &[Rat]) -> bool {
        assert_eq!(p.len(), self.dim);
        if self.is_full_dimensional() && self.dim > 0 {
            let facets = self.facets().expect("full-dimensional");
            facets.iter().all(|f| !f.evaluate(p).is_negative())
        } else {
            lp::in_convex_hull(p, &self.vertices)
        }
    }

    /// Containment `other ⊆ self`.
    pub fn contains(&self, other: &RationalPolytope) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.is_full_dimensional() && self.dim > 0 {
            let facets = self.facets().expect("full-dimensional");
            other
                .vertices
                .iter()
                .all(|v| facets.iter().all(|f| !f.evaluate(v).is_negative()))
        } else {
            other.vertices.iter().all(|v| lp::in_convex_hull(v, &self.vertices))
        }
    }

    /// Canonical JSON text: `{"dim":n,"vertices":[["p/q",...],...]}`.
    pub fn to_json(&self) -> String {
        let doc = PolytopeDoc {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(format_rat).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolytopeDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut pts = Vec::with_capacity(doc.vertices.len());
        for v in &doc.vertices {
            let p: Result<Vec<Rat>> = v.iter().map(|s| parse_rat(s)).collect();
            let p = p?;
            if p.len() != doc.dim {
                return Err(Error::DimensionMismatch { expected: doc.dim, found: p.len() });
            }
            pts.push(p);
        }
        convex_hull(&pts)
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeDoc {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

/// Minimal vertex set of the convex hull of `points`.
///
/// A point is dropped when it is a convex combination of the remaining
/// candidates; each test is an exact feasibility problem.
pub fn convex_hull(points: &[Vec<Rat>]) -> Result<RationalPolytope> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
    }
    let mut candidates: Vec<Vec<Rat>> = points.to_vec();
    candidates.sort_by(|a, b| lex_cmp(a, b));
    candidates.dedup();

    // unique maximizers of a few linear functionals are vertices; keep them
    // aside so the feasibility tests only run on the rest
    let mut known = vec![false; candidates.len()];
    for dir in probe_directions(dim) {
        let scores: Vec<Rat> = candidates
            .iter()
            .map(|p| p.iter().zip(&dir).map(|(x, d)| x * Rat::from_integer(BigInt::from(*d))).sum())
            .collect();
        let best = scores.iter().max().cloned().unwrap();
        let winners: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        if winners.len() == 1 {
            known[winners[0]] = true;
        }
    }

    let mut i = 0;
    while i < candidates.len() {
        if known[i] {
            i += 1;
            continue;
        }
        // cheap test against confirmed vertices first
        let confirmed: Vec<Vec<Rat>> =
            candidates.iter().zip(&known).filter(|(_, k)| **k).map(|(p, _)| p.clone()).collect();
        if lp::in_convex_hull(&candidates[i], &confirmed) {
            candidates.remove(i);
            known.remove(i);
            continue;
        }
        let others: Vec<Vec<Rat>> = candidates
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        if lp::in_convex_hull(&candidates[i], &others) {
            candidates.remove(i);
            known.remove(i);
        } else {
            known[i] = true;
            i += 1;
        }
    }
    Ok(RationalPolytope::from_vertices(dim, candidates))
}

fn probe_directions(dim: usize) -> Vec<Vec<i64>> {
    let mut dirs = Vec::new();
    for i in 0..dim {
        for s in [1, -1] {
            let mut d = vec![0; dim];
            d[i] = s;
            dirs.push(d);
        }
    }
    dirs.push(vec![1; dim]);
    dirs.push(vec![-1; dim]);
    dirs
}

/// Height-one slice of the cone spanned by the graded points: the hull of
/// `value / level`.
pub fn cone_slice(points: &[GradedPoint]) -> Result<RationalPolytope> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut scaled = Vec::with_capacity(points.len());
    for gp in points {
        if gp.level == 0 {
            return Err(Error::InvalidArgument("graded point at level 0".into()));
        }
        let l = Rat::from_integer(BigInt::from(gp.level));
        scaled.push(
            gp.value
                .iter()
                .map(|&v| Rat::from_integer(BigInt::from(v)) / &l)
                .collect::<Vec<Rat>>(),
        );
    }
    convex_hull(&scaled)
}

pub fn dilate(p: &RationalPolytope, c: &Rat) -> Result<RationalPolytope> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("dilation factor must be positive".into()));
    }
    let verts = p
        .vertices
        .iter()
        .map(|v| v.iter().map(|x| x * c).collect())
        .collect();
    Ok(RationalPolytope::from_vertices(p.dim, verts))
}

pub fn polytope_equal(a: &RationalPolytope, b: &RationalPolytope) -> bool {
    a == b
}

/// The simplex with vertices `0, c e_1, ..., c e_{n-1}, c d e_n`.
pub fn theorem_simplex(n: usize, c: u64, d: u64) -> Result<RationalPolytope> {
    if n == 0 || c == 0 || d == 0 {
        return Err(Error::InvalidArgument("n, c and d must be at least 1".into()));
    }
    let mut verts = vec![vec![Rat::zero(); n]];
    for i in 0..n {
        let mut v = vec![Rat::zero(); n];
        let scale = if i + 1 == n { c * d } else { c };
        v[i] = Rat::from_integer(BigInt::from(scale));
        verts.push(v);
    }
    Ok(RationalPolytope::from_vertices(n, verts))
}

/// Inward primitive facet normals, ascending lexicographically. These are the
/// rays of the normal fan.
pub fn normal_fan_rays(p: &RationalPolytope) -> Result<Vec<Vec<BigInt>>> {
    let mut rays: Vec<Vec<BigInt>> = p.facets()?.into_iter().map(|f| f.normal).collect();
    rays.sort();
    Ok(rays)
}

/// `Q^n` vector from small integers.
pub fn rat_point(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn poly(points: &[&[i64]]) -> RationalPolytope {
        convex_hull(&points.iter().map(|p| rat_point(p)).collect::<Vec<_>>()).unwrap()
    }

    fn rays(xs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        let mut v: Vec<Vec<BigInt>> =
            xs.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        v.sort();
        v
    }

    #[test]
    fn hull_examples() {
        let single = poly(&[&[0, 0]]);
        assert_eq!(single.vertices(), &[rat_point(&[0, 0])]);

        let pts = vec![rat_point(&[0, 0]), rat_point(&[1, 0]), rat_point(&[0, 1]), vec![rat(1, 4), rat(1, 4)]];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull, poly(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(hull.vertices().len(), 3);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
        let mixed = vec![rat_point(&[0, 0]), rat_point(&[1])];
        assert!(matches!(convex_hull(&mixed), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn collinear_points_keep_endpoints() {
        let seg = poly(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
        assert_eq!(seg.vertices(), &[rat_point(&[0, 0]), rat_point(&[3, 3])]);
        assert!(!seg.is_full_dimensional());
        assert!(seg.contains_point(&rat_point(&[2, 2])));
        assert!(!seg.contains_point(&rat_point(&[2, 1])));
    }

    #[test]
    fn cone_slice_examples() {
        let tri = cone_slice(&[
            GradedPoint::new(vec![0, 0], 1),
            GradedPoint::new(vec![1, 0], 1),
            GradedPoint::new(vec![0, 3], 1),
        ])
        .unwrap();
        assert_eq!(tri, theorem_simplex(2, 1, 3).unwrap());
        let one = cone_slice(&[GradedPoint::new(vec![0, 6], 2)]).unwrap();
        assert_eq!(one.vertices(), &[rat_point(&[0, 3])]);
        assert_eq!(cone_slice(&[]), Err(Error::EmptyInput));
        assert!(cone_slice(&[GradedPoint::new(vec![0], 0)]).is_err());
    }

    #[test]
    fn dilation() {
        let unit = theorem_simplex(2, 1, 1).unwrap();
        assert_eq!(dilate(&unit, &int(2)).unwrap(), poly(&[&[0, 0], &[2, 0], &[0, 2]]));
        assert_eq!(dilate(&unit, &int(1)).unwrap(), unit);
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 3]]);
        assert_eq!(dilate(&tri, &int(2)).unwrap(), poly(&[&[0, 0], &[2, 0], &[0, 6]]));
        assert!(dilate(&tri, &int(0)).is_err());
        assert!(dilate(&tri, &rat(-1, 2)).is_err());
    }

    #[test]
    fn equality() {
        let unit = theorem_simplex(2, 1, 1).unwrap();
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert!(polytope_equal(&unit, &unit));
        assert!(!polytope_equal(&unit, &square));
        let redundant = convex_hull(&[
            rat_point(&[0, 0]),
            rat_point(&[1, 0]),
            rat_point(&[0, 1]),
            vec![rat(1, 2), rat(1, 2)],
        ])
        .unwrap();
        assert!(polytope_equal(&redundant, &unit));
    }

    #[test]
    fn theorem_simplices() {
        assert_eq!(theorem_simplex(2, 1, 3).unwrap(), poly(&[&[0, 0], &[1, 0], &[0, 3]]));
        assert_eq!(theorem_simplex(2, 1, 2).unwrap(), poly(&[&[0, 0], &[1, 0], &[0, 2]]));
        assert_eq!(
            theorem_simplex(3, 2, 1).unwrap(),
            poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2]])
        );
        assert!(theorem_simplex(0, 1, 1).is_err());
    }

    #[test]
    fn fans() {
        let square = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(normal_fan_rays(&square).unwrap(), rays(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        let unit = theorem_simplex(2, 1, 1).unwrap();
        assert_eq!(normal_fan_rays(&unit).unwrap(), rays(&[&[1, 0], &[0, 1], &[-1, -1]]));
        let tri = theorem_simplex(2, 1, 3).unwrap();
        assert_eq!(normal_fan_rays(&tri).unwrap(), rays(&[&[1, 0], &[0, 1], &[-3, -1]]));
        let seg = poly(&[&[0, 0], &[1, 1]]);
        assert_eq!(normal_fan_rays(&seg), Err(Error::NotFullDimensional));
        let interval = poly(&[&[0], &[2]]);
        assert_eq!(normal_fan_rays(&interval).unwrap(), rays(&[&[1], &[-1]]));
    }

    #[test]
    fn json_is_canonical() {
        let tri = dilate(&theorem_simplex(2, 1, 3).unwrap(), &rat(1, 2)).unwrap();
        let text = tri.to_json();
        assert_eq!(text, r#"{"dim":2,"vertices":[["0/1","0/1"],["0/1","3/2"],["1/2","0/1"]]}"#);
        assert_eq!(RationalPolytope::from_json(&text).unwrap(), tri);
    }
}
