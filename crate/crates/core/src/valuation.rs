//! Flag valuations: iterated vanishing orders along a flag of linear
//! sections of a projective hypersurface (or projective space), finished by
//! the order of vanishing at a point of the final curve.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{graded_monomials, Branch, Echelon, Exponent, HomogPoly, LocalChart, Rat, Reducer, PRECISION_CAP};

/// A section of `O(m)`: a homogeneous polynomial of degree `m`.
pub type Section = HomogPoly;

/// `(nu_1, ..., nu_n)`, compared lexicographically with `nu_1` most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValuationVector(pub Vec<u32>);

impl ValuationVector {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &ValuationVector) -> ValuationVector {
        ValuationVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ValuationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A full flag `X = Y_0 ⊃ Y_1 ⊃ ... ⊃ Y_n = {pt}` on a hypersurface
/// `{relation = 0}` (or on projective space when there is no relation).
/// `Y_i` is cut by the linear forms `steps[..i]`; the point is the support of
/// `final_form` on the curve `Y_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    ambient_vars: usize,
    relation: Option<HomogPoly>,
    steps: Vec<HomogPoly>,
    final_form: HomogPoly,
    point: Vec<Rat>,
    chart: LocalChart,
}

impl Flag {
    /// `chart` names the ambient coordinate set to 1 near the point and the
    /// coordinate used as local parameter on the final curve.
    pub fn new(
        ambient_vars: usize,
        relation: Option<HomogPoly>,
        steps: Vec<HomogPoly>,
        final_form: HomogPoly,
        point: Vec<Rat>,
        chart: LocalChart,
    ) -> Result<Self> {
        let mismatch = |found: usize| Error::DimensionMismatch { expected: ambient_vars, found };
        if let Some(f) = &relation {
            if f.num_vars() != ambient_vars {
                return Err(mismatch(f.num_vars()));
            }
            if f.degree() == 0 || f.is_zero() {
                return Err(Error::InvalidArgument("relation must be a nonconstant form".into()));
            }
        }
        for h in steps.iter().chain(std::iter::once(&final_form)) {
            if h.num_vars() != ambient_vars {
                return Err(mismatch(h.num_vars()));
            }
            if h.degree() != 1 || h.is_zero() {
                return Err(Error::InvalidArgument("flag forms must be nonzero linear forms".into()));
            }
        }
        if point.len() != ambient_vars {
            return Err(mismatch(point.len()));
        }
        let expected_dim = ambient_vars - 1 - usize::from(relation.is_some());
        if steps.len() + 1 != expected_dim {
            return Err(Error::InvalidArgument(format!(
                "a variety of dimension {expected_dim} needs {} step forms, got {}",
                expected_dim.saturating_sub(1),
                steps.len()
            )));
        }
        if chart.chart == chart.parameter || chart.chart >= ambient_vars || chart.parameter >= ambient_vars {
            return Err(Error::InvalidArgument("chart and parameter must be distinct coordinates".into()));
        }
        if point[chart.chart].is_zero() {
            return Err(Error::InvalidArgument("chart coordinate vanishes at the point".into()));
        }
        Ok(Flag { ambient_vars, relation, steps, final_form, point, chart })
    }

    pub fn ambient_vars(&self) -> usize {
        self.ambient_vars
    }

    pub fn relation(&self) -> Option<&HomogPoly> {
        self.relation.as_ref()
    }

    pub fn steps(&self) -> &[HomogPoly] {
        &self.steps
    }

    pub fn final_form(&self) -> &HomogPoly {
        &self.final_form
    }

    pub fn point(&self) -> &[Rat] {
        &self.point
    }

    pub fn chart(&self) -> LocalChart {
        self.chart
    }

    /// Dimension `n` of the flagged variety.
    pub fn dimension(&self) -> usize {
        self.steps.len() + 1
    }
}

/// Linear-algebra description of the degree-`m` piece of `(h^k) + (F)`.
fn ideal_piece(h: &HomogPoly, k: u32, relation: Option<&HomogPoly>, m: u32) -> (Echelon, usize) {
    let n = h.num_vars();
    let basis = graded_monomials(n, m);
    let index: BTreeMap<Exponent, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut ech = Echelon::new(basis.len());
    let mut power_gens = 0;
    if k <= m {
        let hk = h.pow(k);
        for mono in graded_monomials(n, m - k) {
            let g = &hk * &HomogPoly::monomial(mono, Rat::from_integer(1.into()));
            ech.insert(g.coefficients_in(&index)).expect("width");
            power_gens += 1;
        }
    }
    if let Some(f) = relation {
        if f.degree() <= m {
            for mono in graded_monomials(n, m - f.degree()) {
                let g = f * &HomogPoly::monomial(mono, Rat::from_integer(1.into()));
                ech.insert(g.coefficients_in(&index)).expect("width");
            }
        }
    }
    (ech, power_gens)
}

fn basis_index(n: usize, m: u32) -> BTreeMap<Exponent, usize> {
    graded_monomials(n, m).into_iter().enumerate().map(|(i, e)| (e, i)).collect()
}

fn check_linear(s: &HomogPoly, h: &HomogPoly, relation: Option<&HomogPoly>) -> Result<()> {
    if h.degree() != 1 || h.is_zero() {
        return Err(Error::InvalidArgument("h must be a nonzero linear form".into()));
    }
    if s.num_vars() != h.num_vars() {
        return Err(Error::DimensionMismatch { expected: h.num_vars(), found: s.num_vars() });
    }
    if let Some(f) = relation {
        if f.num_vars() != h.num_vars() {
            return Err(Error::DimensionMismatch { expected: h.num_vars(), found: f.num_vars() });
        }
    }
    Ok(())
}

/// Largest `k` with `s` in the degree-`m` part of `(h^k) + (F)`, decided by
/// exact membership tests.
pub fn order_along_hypersurface(s: &Section, h: &HomogPoly, relation: Option<&HomogPoly>) -> Result<u32> {
    check_linear(s, h, relation)?;
    let m = s.degree();
    let index = basis_index(s.num_vars(), m);
    let target = s.coefficients_in(&index);
    let (zero_piece, _) = ideal_piece(h, m + 1, relation, m);
    if zero_piece.contains(&target) {
        return Err(Error::ZeroSection);
    }
    let mut k = 0;
    while k < m {
        let (piece, _) = ideal_piece(h, k + 1, relation, m);
        if !piece.contains(&target) {
            break;
        }
        k += 1;
    }
    Ok(k)
}

/// Variable eliminated when restricting to `{h = 0}`: the last one with a
/// nonzero coefficient.
fn default_elimination(h: &HomogPoly) -> usize {
    (0..h.num_vars())
        .rev()
        .find(|&i| {
            let mut e = vec![0; h.num_vars()];
            e[i] = 1;
            !h.coeff(&e).is_zero()
        })
        .expect("nonzero linear form")
}

/// The form `x_v = -(sum_{i != v} a_i x_i) / a_v` describing `{h = 0}`.
fn solve_for(h: &HomogPoly, v: usize) -> HomogPoly {
    let n = h.num_vars();
    let unit = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    let av = h.coeff(&unit(v));
    let coeffs: Vec<Rat> = (0..n)
        .map(|i| if i == v { Rat::zero() } else { -(h.coeff(&unit(i)) / &av) })
        .collect();
    HomogPoly::linear(&coeffs)
}

/// Restriction of `s / h^k` to `{h = 0}`: writes `s = h^k t + F g` and
/// returns `t` with the last variable of `h` eliminated, together with the
/// index of that variable.
pub fn restrict_section(
    s: &Section,
    h: &HomogPoly,
    k: u32,
    relation: Option<&HomogPoly>,
) -> Result<(Section, usize)> {
    check_linear(s, h, relation)?;
    let m = s.degree();
    if k > m {
        return Err(Error::Inconsistent(format!("order {k} exceeds degree {m}")));
    }
    let index = basis_index(s.num_vars(), m);
    let (ech, power_gens) = ideal_piece(h, k, relation, m);
    let coeffs = ech
        .express(&s.coefficients_in(&index))
        .ok_or_else(|| Error::Inconsistent(format!("no decomposition s = h^{k} t + F g")))?;
    let monos = graded_monomials(s.num_vars(), m - k);
    let t = HomogPoly::from_coefficients(s.num_vars(), m - k, &monos, &coeffs[..power_gens]);
    let v = default_elimination(h);
    Ok((t.substitute_linear(v, &solve_for(h, v)).restrict_drop(v), v))
}

/// Order and leading coefficient of `g` at the point of a curve: the line
/// `P^1` when `curve` is `None`, otherwise the plane curve `{curve = 0}`.
fn order_on_branch(
    g: &Section,
    curve: Option<&HomogPoly>,
    point: &[Rat],
    chart: LocalChart,
    cache: Option<&Mutex<Option<Branch>>>,
) -> Result<(u32, Rat)> {
    let n = g.num_vars();
    match curve {
        None if n == 2 => {}
        Some(c) if n == 3 && c.num_vars() == 3 => {}
        _ => return Err(Error::DimensionMismatch { expected: if curve.is_some() { 3 } else { 2 }, found: n }),
    }
    if g.is_zero() {
        return Err(Error::ZeroSection);
    }
    if let Some(c) = curve {
        let reducer = Reducer::new(c.clone(), 0)?;
        if reducer.reduce(g).is_zero() {
            return Err(Error::ZeroSection);
        }
    }
    let expected = g.degree().max(1) as usize;
    let mut precision = 2 * expected + 2;
    loop {
        let precision_now = precision.min(PRECISION_CAP);
        let branch = match (curve, cache) {
            (None, _) => Branch::line(point, chart, precision_now)?,
            (Some(c), Some(slot)) => {
                let mut guard = slot.lock().expect("branch cache");
                match guard.as_ref() {
                    Some(b) if b.precision() >= precision_now => b.clone(),
                    _ => {
                        let b = Branch::plane(c, point, chart, precision_now)?;
                        *guard = Some(b.clone());
                        b
                    }
                }
            }
            (Some(c), None) => Branch::plane(c, point, chart, precision_now)?,
        };
        let series = branch.pullback(g);
        if let Some(v) = series.valuation() {
            return Ok((v as u32, series.coeff(v)));
        }
        if precision_now >= PRECISION_CAP {
            return Err(Error::PrecisionCap { cap: PRECISION_CAP });
        }
        precision *= 2;
    }
}

/// Order of vanishing of `g` at `point` on the curve, by pulling `g` back
/// along the local branch with precision escalation.
pub fn ord_at_point_on_curve(
    g: &Section,
    curve: Option<&HomogPoly>,
    point: &[Rat],
    chart: LocalChart,
) -> Result<u32> {
    Ok(order_on_branch(g, curve, point, chart, None)?.0)
}

#[derive(Clone, Debug)]
struct Stage {
    /// Variable (current numbering) replaced by the adapted coordinate `h`.
    elim: usize,
    /// `x_elim` in adapted coordinates, where slot `elim` holds `h`.
    to_adapted: HomogPoly,
    /// Relation in adapted coordinates.
    relation: Option<HomogPoly>,
    /// Reduction modulo the adapted relation by a pure power of a variable
    /// other than `elim`; `None` when no such variable exists.
    reducer: Option<Reducer>,
}

/// Restricting a section to the flag members one step at a time.
#[derive(Clone, Debug)]
struct Tower {
    stages: Vec<Stage>,
    curve: Option<HomogPoly>,
    point: Vec<Rat>,
    chart: LocalChart,
    final_form: HomogPoly,
}

impl Tower {
    fn build(flag: &Flag, require_point: bool) -> Result<Self> {
        let mut alive: Vec<usize> = (0..flag.ambient_vars).collect();
        let mut relation = flag.relation.clone();
        let mut point = flag.point.clone();
        let mut pending: Vec<HomogPoly> = flag.steps.clone();
        let mut final_form = flag.final_form.clone();
        let mut stages = Vec::new();
        for i in 0..flag.steps.len() {
            let h = pending[i].clone();
            let n = h.num_vars();
            let unit = |j: usize| {
                let mut e = vec![0; n];
                e[j] = 1;
                e
            };
            let protected = [flag.chart.chart, flag.chart.parameter];
            let elim = (0..n)
                .rev()
                .find(|&j| !h.coeff(&unit(j)).is_zero() && !protected.contains(&alive[j]))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("step {} only involves the chart coordinates", i + 1))
                })?;
            if require_point && !h.eval(&point).is_zero() {
                return Err(Error::InvalidArgument(format!("the point is not on step {}", i + 1)));
            }
            let a_e = h.coeff(&unit(elim));
            let coeffs: Vec<Rat> = (0..n)
                .map(|j| if j == elim { a_e.recip() } else { -(h.coeff(&unit(j)) / &a_e) })
                .collect();
            let to_adapted = HomogPoly::linear(&coeffs);
            let adapted_rel = relation.as_ref().map(|f| f.substitute_linear(elim, &to_adapted));
            let reducer = match &adapted_rel {
                None => None,
                Some(f) => (0..n)
                    .filter(|&u| u != elim)
                    .find(|&u| {
                        let mut e = vec![0; n];
                        e[u] = f.degree();
                        !f.coeff(&e).is_zero()
                    })
                    .map(|u| Reducer::new(f.clone(), u))
                    .transpose()?,
            };
            let restrict = |p: &HomogPoly| p.substitute_linear(elim, &to_adapted).restrict_drop(elim);
            for later in pending.iter_mut().skip(i + 1) {
                *later = restrict(later);
            }
            final_form = restrict(&final_form);
            relation = match &adapted_rel {
                None => None,
                Some(f) => {
                    let r = f.restrict_drop(elim);
                    if r.is_zero() {
                        return Err(Error::InvalidArgument(format!(
                            "step {} contains the whole variety",
                            i + 1
                        )));
                    }
                    Some(r)
                }
            };
            point.remove(elim);
            alive.remove(elim);
            stages.push(Stage { elim, to_adapted, relation: adapted_rel, reducer });
        }
        let locate = |orig: usize| alive.iter().position(|&a| a == orig).expect("protected coordinate");
        let chart = LocalChart { chart: locate(flag.chart.chart), parameter: locate(flag.chart.parameter) };
        match (&relation, alive.len()) {
            (None, 2) | (Some(_), 3) => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "the final flag member is not a line or a plane curve".into(),
                ))
            }
        }
        Ok(Tower { stages, curve: relation, point, chart, final_form })
    }
}

/// Per-step result of restricting a section down the flag.
fn descend(stage: &Stage, s: &Section) -> Result<(u32, Section)> {
    let adapted = s.substitute_linear(stage.elim, &stage.to_adapted);
    let e = stage.elim;
    let reduced = match (&stage.relation, &stage.reducer) {
        (None, _) => adapted,
        (Some(_), Some(red)) => red.reduce(&adapted),
        (Some(f), None) => {
            // no pure power to divide by: fall back to membership tests
            let h = HomogPoly::var(adapted.num_vars(), e);
            let k = order_along_hypersurface(&adapted, &h, Some(f))?;
            let (t, v) = restrict_section(&adapted, &h, k, Some(f))?;
            debug_assert_eq!(v, e);
            return Ok((k, t));
        }
    };
    let k = reduced.min_exponent(e).ok_or(Error::ZeroSection)?;
    Ok((k, reduced.coefficient_of_power(e, k).restrict_drop(e)))
}

/// Evaluates the flag valuation; caches the local branch at the point.
#[derive(Debug)]
pub struct FlagValuator {
    flag: Flag,
    tower: Tower,
    branch: Mutex<Option<Branch>>,
}

/// `nu(s)` together with the leading coefficient left after dividing out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub vector: ValuationVector,
    pub leading_unit: Rat,
}

impl FlagValuator {
    pub fn new(flag: &Flag) -> Result<Self> {
        Ok(FlagValuator { flag: flag.clone(), tower: Tower::build(flag, true)?, branch: Mutex::new(None) })
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    /// Final curve `Y_{n-1}` in the coordinates left after elimination
    /// (`None` for a line).
    pub fn final_curve(&self) -> Option<&HomogPoly> {
        self.tower.curve.as_ref()
    }

    pub fn evaluate(&self, s: &Section) -> Result<Valuation> {
        if s.num_vars() != self.flag.ambient_vars {
            return Err(Error::DimensionMismatch { expected: self.flag.ambient_vars, found: s.num_vars() });
        }
        if s.is_zero() {
            return Err(Error::ZeroSection);
        }
        let mut entries = Vec::with_capacity(self.flag.dimension());
        let mut current = s.clone();
        for stage in &self.tower.stages {
            let (k, t) = descend(stage, &current)?;
            entries.push(k);
            current = t;
        }
        let t = &self.tower;
        let (k, unit) = order_on_branch(&current, t.curve.as_ref(), &t.point, t.chart, Some(&self.branch))?;
        entries.push(k);
        Ok(Valuation { vector: ValuationVector(entries), leading_unit: unit })
    }
}

pub fn flag_valuation(s: &Section, flag: &Flag) -> Result<ValuationVector> {
    Ok(FlagValuator::new(flag)?.evaluate(s)?.vector)
}

pub fn leading_unit(s: &Section, flag: &Flag) -> Result<Rat> {
    Ok(FlagValuator::new(flag)?.evaluate(s)?.leading_unit)
}

/// The final curve and the final form restricted to it, without requiring
/// the point to lie on the flag members. Used by the flag verifier.
pub(crate) fn restricted_final_data(flag: &Flag) -> Result<(Option<HomogPoly>, HomogPoly, Vec<Rat>, LocalChart)> {
    let t = Tower::build(flag, false)?;
    Ok((t.curve, t.final_form, t.point, t.chart))
}
