//! Graded linear systems, their value sets under the flag valuation, the
//! Okounkov semigroup, the body estimate and finite-generation checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::convex::{cone_slice, GradedPoint, RationalPolytope};
use crate::error::{Error, Result};
use crate::exactmath::{graded_monomials, Echelon, Exponent, HomogPoly, Rat};
use crate::valuation::{FlagValuator, Section, ValuationVector};
use crate::varieties::CaseStudy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    /// `V_m` spanned by `m`-fold products of `V_1`.
    Powers,
    /// `V_m` the full degree-`mc` piece of the coordinate ring.
    Complete,
}

impl SystemKind {
    pub const ALL: [SystemKind; 2] = [SystemKind::Powers, SystemKind::Complete];

    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::Powers => "powers",
            SystemKind::Complete => "complete",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "powers" => Ok(SystemKind::Powers),
            "complete" => Ok(SystemKind::Complete),
            _ => Err(Error::InvalidArgument(format!("unknown kind `{s}`"))),
        }
    }
}

fn standard_basis(cs: &CaseStudy, degree: u32) -> Vec<Exponent> {
    match cs.reducer() {
        Some(r) => r.standard_monomials(degree),
        None => graded_monomials(cs.ambient_vars(), degree),
    }
}

fn one_monomial(e: Exponent) -> HomogPoly {
    HomogPoly::monomial(e, Rat::from_integer(1.into()))
}

/// Bases of the levels `V_m` of a graded linear system, cached per level.
#[derive(Debug)]
pub struct GradedSystem<'a> {
    case: &'a CaseStudy,
    kind: SystemKind,
    cache: BTreeMap<u32, Vec<Section>>,
}

impl<'a> GradedSystem<'a> {
    pub fn new(case: &'a CaseStudy, kind: SystemKind) -> Self {
        GradedSystem { case, kind, cache: BTreeMap::new() }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn basis(&mut self, m: u32) -> Result<&[Section]> {
        if !self.cache.contains_key(&m) {
            let b = graded_system_basis(self.case, self.kind, m)?;
            self.cache.insert(m, b);
        }
        Ok(&self.cache[&m])
    }
}

/// A basis of `V_m`, reduced modulo the relation.
pub fn graded_system_basis(cs: &CaseStudy, kind: SystemKind, m: u32) -> Result<Vec<Section>> {
    if m == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let degree = u32::try_from(cs.c)
        .ok()
        .and_then(|c| c.checked_mul(m))
        .ok_or_else(|| Error::InvalidArgument("degree overflow".into()))?;
    let monos = standard_basis(cs, degree);
    if kind == SystemKind::Complete || m == 1 {
        return Ok(monos.into_iter().map(one_monomial).collect());
    }
    let level1: Vec<Section> = standard_basis(cs, degree / m).into_iter().map(one_monomial).collect();
    let index: BTreeMap<Exponent, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut ech = Echelon::new(monos.len());
    let mut basis = Vec::new();
    // all m-fold products, as nondecreasing index tuples
    let mut tuple = vec![0usize; m as usize];
    'outer: loop {
        let mut prod = level1[tuple[0]].clone();
        for &i in &tuple[1..] {
            prod = cs.reduce(&(&prod * &level1[i]));
        }
        let prod = cs.reduce(&prod);
        if ech.insert(prod.coefficients_in(&index))? {
            basis.push(prod);
            if basis.len() == monos.len() {
                break;
            }
        }
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if tuple[pos] + 1 < level1.len() {
                let next = tuple[pos] + 1;
                for t in &mut tuple[pos..] {
                    *t = next;
                }
                break;
            }
        }
    }
    Ok(basis)
}

/// `{ nu(E) : E in span(basis), E != 0 }` by triangularization.
pub fn value_set(basis: &[Section], valuator: &FlagValuator) -> Result<BTreeSet<ValuationVector>> {
    Ok(triangularize(basis, valuator)?.into_iter().map(|(_, v)| v).collect())
}

/// Rewrites the basis so that all valuations are distinct; returns the new
/// basis with its valuations, in basis order.
pub fn triangularize(basis: &[Section], valuator: &FlagValuator) -> Result<Vec<(Section, ValuationVector)>> {
    let Some(first) = basis.first() else { return Ok(Vec::new()) };
    let degree = first.degree() as u64;
    let relation_degree = valuator.flag().relation().map_or(1, |f| f.degree() as u64);
    let bound = degree.max(1) * relation_degree;
    let dependent = |e: Error| match e {
        Error::ZeroSection => Error::Inconsistent("basis is linearly dependent modulo the relation".into()),
        other => other,
    };
    let mut items = Vec::with_capacity(basis.len());
    for s in basis {
        let v = valuator.evaluate(s).map_err(dependent)?;
        items.push((s.clone(), v));
    }
    loop {
        let mut by_value: BTreeMap<&ValuationVector, Vec<usize>> = BTreeMap::new();
        for (i, (_, v)) in items.iter().enumerate() {
            by_value.entry(&v.vector).or_default().push(i);
        }
        let Some(idx) = by_value.values().find(|ix| ix.len() > 1) else { break };
        let (i, j) = (idx[0], idx[1]);
        let ratio = &items[j].1.leading_unit / &items[i].1.leading_unit;
        let combined = items[j].0.add_scaled(&items[i].0, &-ratio);
        let v = valuator.evaluate(&combined).map_err(dependent)?;
        if v.vector <= items[j].1.vector || v.vector.entries().iter().any(|&x| x as u64 > bound) {
            return Err(Error::Inconsistent(format!("triangularization stalled at {}", v.vector)));
        }
        items[j] = (combined, v);
    }
    Ok(items.into_iter().map(|(s, v)| (s, v.vector)).collect())
}

/// Value sets of the levels `1..=M` of a graded linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovSemigroup {
    pub kind: SystemKind,
    pub n: usize,
    pub levels: BTreeMap<u32, BTreeSet<ValuationVector>>,
}

#[derive(Serialize, Deserialize)]
struct SemigroupDoc {
    kind: SystemKind,
    #[serde(rename = "M")]
    max_level: u32,
    levels: BTreeMap<u32, Vec<Vec<u32>>>,
}

impl OkounkovSemigroup {
    pub fn max_level(&self) -> u32 {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    pub fn level(&self, m: u32) -> Option<&BTreeSet<ValuationVector>> {
        self.levels.get(&m)
    }

    pub fn graded_points(&self) -> Vec<GradedPoint> {
        self.levels
            .iter()
            .flat_map(|(m, vs)| vs.iter().map(move |v| GradedPoint::new(v.0.clone(), *m)))
            .collect()
    }

    /// Whether `levels[i] + levels[j]` lies in `levels[i + j]` for all
    /// enumerated pairs.
    pub fn is_closed(&self) -> bool {
        for (i, a) in &self.levels {
            for (j, b) in self.levels.range(i..) {
                let Some(target) = self.levels.get(&(i + j)) else { continue };
                if a.iter().any(|u| b.iter().any(|v| !target.contains(&u.add(v)))) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        let doc = SemigroupDoc {
            kind: self.kind,
            max_level: self.max_level(),
            levels: self.levels.iter().map(|(m, vs)| (*m, vs.iter().map(|v| v.0.clone()).collect())).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SemigroupDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.levels.values().flatten().map(Vec::len).next().unwrap_or(0);
        if doc.levels.values().flatten().any(|v| v.len() != n) {
            return Err(Error::Parse("valuation vectors of different lengths".into()));
        }
        let levels = doc
            .levels
            .into_iter()
            .map(|(m, vs)| (m, vs.into_iter().map(ValuationVector).collect()))
            .collect();
        Ok(OkounkovSemigroup { kind: doc.kind, n, levels })
    }
}

/// Enumerates levels `1..=M` with a single shared valuator.
pub fn semigroup(cs: &CaseStudy, kind: SystemKind, max_level: u32) -> Result<OkounkovSemigroup> {
    let valuator = cs.valuator()?;
    semigroup_with(cs, kind, max_level, &valuator)
}

pub fn semigroup_with(cs: &CaseStudy, kind: SystemKind, max_level: u32, valuator: &FlagValuator) -> Result<OkounkovSemigroup> {
    if max_level == 0 {
        return Err(Error::InvalidArgument("max level must be at least 1".into()));
    }
    let mut system = GradedSystem::new(cs, kind);
    let mut levels = BTreeMap::new();
    for m in 1..=max_level {
        levels.insert(m, value_set(system.basis(m)?, valuator)?);
    }
    Ok(OkounkovSemigroup { kind, n: cs.n, levels })
}

/// Hull of `nu / m` over all enumerated graded points.
pub fn body_estimate(gamma: &OkounkovSemigroup) -> Result<RationalPolytope> {
    cone_slice(&gamma.graded_points())
}

/// True iff every vertex of `candidate` is an integer point of `level1`.
pub fn vertex_criterion(candidate: &RationalPolytope, level1: &BTreeSet<ValuationVector>) -> bool {
    candidate.vertices().iter().all(|v| {
        let ints: Option<Vec<u32>> = v
            .iter()
            .map(|x| {
                if x.is_integer() && !x.is_negative() {
                    u32::try_from(x.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect();
        ints.is_some_and(|p| level1.contains(&ValuationVector(p)))
    })
}

/// Least `k <= kmax` such that every point at levels `k < m <= M` is a sum
/// of points at levels `<= k`.
pub fn generation_degree(gamma: &OkounkovSemigroup, kmax: u32) -> Option<u32> {
    let top = gamma.max_level();
    for k in 1..=kmax {
        if k >= top {
            return Some(k);
        }
        // reachable[m]: sums of points from levels <= k with total level m
        let mut reachable: BTreeMap<u32, BTreeSet<ValuationVector>> = BTreeMap::new();
        let mut ok = true;
        for m in 1..=top {
            let mut here: BTreeSet<ValuationVector> =
                if m <= k { gamma.levels.get(&m).cloned().unwrap_or_default() } else { BTreeSet::new() };
            for j in 1..=k.min(m - 1) {
                let (Some(gen), Some(rest)) = (gamma.levels.get(&j), reachable.get(&(m - j))) else { continue };
                for a in gen {
                    for b in rest {
                        here.insert(a.add(b));
                    }
                }
            }
            if m > k && !gamma.levels.get(&m).is_none_or(|lv| lv.is_subset(&here)) {
                ok = false;
                break;
            }
            reachable.insert(m, here);
        }
        if ok {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{polytope_equal, rat_point, theorem_simplex};
    use crate::varieties::make_case;

    fn vv(xs: &[&[u32]]) -> BTreeSet<ValuationVector> {
        xs.iter().map(|x| ValuationVector(x.to_vec())).collect()
    }

    #[test]
    fn basis_dimensions() {
        let p2 = make_case("p2", 1).unwrap();
        for kind in SystemKind::ALL {
            assert_eq!(graded_system_basis(&p2, kind, 1).unwrap().len(), 3);
        }
        let fermat = make_case("fermat_cubic", 1).unwrap();
        assert_eq!(graded_system_basis(&fermat, SystemKind::Complete, 2).unwrap().len(), 10);
        let quadric = make_case("quadric_surface", 1).unwrap();
        assert_eq!(graded_system_basis(&quadric, SystemKind::Complete, 2).unwrap().len(), 9);
        assert_eq!(graded_system_basis(&quadric, SystemKind::Powers, 2).unwrap().len(), 9);
    }

    #[test]
    fn level_one_value_sets() {
        let p2 = make_case("p2", 1).unwrap();
        let basis = graded_system_basis(&p2, SystemKind::Complete, 1).unwrap();
        assert_eq!(value_set(&basis, &p2.valuator().unwrap()).unwrap(), vv(&[&[0, 0], &[1, 0], &[0, 1]]));
        let fermat = make_case("fermat_cubic", 1).unwrap();
        let basis = graded_system_basis(&fermat, SystemKind::Complete, 1).unwrap();
        assert_eq!(
            value_set(&basis, &fermat.valuator().unwrap()).unwrap(),
            vv(&[&[0, 0], &[0, 1], &[0, 3], &[1, 0]])
        );
        let single = [fermat.parse_section("x + y").unwrap()];
        assert_eq!(value_set(&single, &fermat.valuator().unwrap()).unwrap(), vv(&[&[0, 3]]));
    }

    #[test]
    fn semigroup_examples() {
        let g = semigroup(&make_case("p2", 1).unwrap(), SystemKind::Complete, 2).unwrap();
        assert_eq!(g.levels[&2].len(), 6);
        let g = semigroup(&make_case("quadric_surface", 1).unwrap(), SystemKind::Powers, 2).unwrap();
        assert_eq!(g.levels[&2].len(), 9);
        let g = semigroup(&make_case("fermat_cubic", 1).unwrap(), SystemKind::Complete, 2).unwrap();
        assert_eq!(
            g.levels[&2],
            vv(&[&[0, 0], &[0, 1], &[0, 2], &[0, 3], &[0, 4], &[0, 6], &[1, 0], &[1, 1], &[1, 3], &[2, 0]])
        );
        assert!(g.is_closed());
    }

    #[test]
    fn bodies_match_simplex() {
        for (name, m) in [("p2", 1), ("quadric_surface", 2), ("fermat_cubic", 1)] {
            let cs = make_case(name, 1).unwrap();
            let g = semigroup(&cs, SystemKind::Complete, m).unwrap();
            let body = body_estimate(&g).unwrap();
            assert!(polytope_equal(&body, &theorem_simplex(cs.n, cs.c, cs.d).unwrap()), "{name}");
        }
    }

    #[test]
    fn vertex_criterion_examples() {
        let tri = crate::convex::convex_hull(&[rat_point(&[0, 0]), rat_point(&[1, 0]), rat_point(&[0, 3])]).unwrap();
        assert!(vertex_criterion(&tri, &vv(&[&[0, 0], &[0, 1], &[0, 3], &[1, 0]])));
        let unit = theorem_simplex(2, 1, 1).unwrap();
        assert!(!vertex_criterion(&unit, &vv(&[&[0, 0], &[1, 0]])));
        let origin = crate::convex::convex_hull(&[rat_point(&[0, 0])]).unwrap();
        assert!(vertex_criterion(&origin, &vv(&[&[0, 0]])));
        let half = crate::convex::convex_hull(&[vec![crate::exactmath::rat(1, 2)]]).unwrap();
        assert!(!vertex_criterion(&half, &vv(&[&[0]])));
    }

    #[test]
    fn generation_degrees() {
        let g = semigroup(&make_case("p2", 1).unwrap(), SystemKind::Complete, 4).unwrap();
        assert_eq!(generation_degree(&g, 4), Some(1));
        let g1 = semigroup(&make_case("p2", 1).unwrap(), SystemKind::Complete, 1).unwrap();
        assert_eq!(generation_degree(&g1, 3), Some(1));
        // a level-2 point not generated by level 1
        let mut fake = g.clone();
        fake.levels.get_mut(&2).unwrap().insert(ValuationVector(vec![7, 7]));
        fake.levels.retain(|m, _| *m <= 2);
        assert_eq!(generation_degree(&fake, 1), None);
        assert_eq!(generation_degree(&fake, 2), Some(2));
    }

    #[test]
    fn json_round_trip() {
        let g = semigroup(&make_case("p2", 1).unwrap(), SystemKind::Powers, 2).unwrap();
        let text = g.to_json();
        assert!(text.starts_with(r#"{"kind":"powers","M":2,"levels":{"1":[[0,0],[0,1],[1,0]],"2":"#));
        assert_eq!(OkounkovSemigroup::from_json(&text).unwrap(), g);
    }
}
