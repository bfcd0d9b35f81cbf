//! Oracles shared by the integration suites. They recompute results by
//! routes that avoid the production code paths under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use okounkov_core::exactmath::{HomogPoly, LocalChart, Rat};
use okounkov_core::valuation::{order_along_hypersurface, ord_at_point_on_curve, restrict_section};
use okounkov_core::varieties::CaseStudy;

fn linear_coeffs(h: &HomogPoly) -> Vec<Rat> {
    (0..h.num_vars())
        .map(|i| {
            let mut e = vec![0; h.num_vars()];
            e[i] = 1;
            h.coeff(&e)
        })
        .collect()
}

/// `x_v` solved from `h = 0`.
fn solved(h: &HomogPoly, v: usize) -> HomogPoly {
    let a = linear_coeffs(h);
    let coeffs: Vec<Rat> = (0..a.len()).map(|i| if i == v { Rat::zero() } else { -(&a[i] / &a[v]) }).collect();
    HomogPoly::linear(&coeffs)
}

/// Flag valuation through ideal-membership orders in the original
/// coordinates, restricting one member at a time.
pub fn valuation_by_membership(cs: &CaseStudy, s: &HomogPoly) -> Vec<u32> {
    let flag = &cs.flag;
    let mut relation = flag.relation().cloned();
    let mut forms: Vec<HomogPoly> = flag.steps().to_vec();
    let mut final_form = flag.final_form().clone();
    let mut point = flag.point().to_vec();
    let mut alive: Vec<usize> = (0..flag.ambient_vars()).collect();
    let mut current = s.clone();
    let mut out = Vec::new();
    for i in 0..forms.len() {
        let h = forms[i].clone();
        let k = order_along_hypersurface(&current, &h, relation.as_ref()).unwrap();
        let (t, v) = restrict_section(&current, &h, k, relation.as_ref()).unwrap();
        out.push(k);
        current = t;
        let sub = solved(&h, v);
        let restrict = |p: &HomogPoly| p.substitute_linear(v, &sub).restrict_drop(v);
        relation = relation.as_ref().map(restrict);
        for f in forms.iter_mut().skip(i + 1) {
            *f = restrict(f);
        }
        final_form = restrict(&final_form);
        point.remove(v);
        alive.remove(v);
    }
    let pos = |orig: usize| alive.iter().position(|&a| a == orig).unwrap();
    let chart = LocalChart { chart: pos(flag.chart().chart), parameter: pos(flag.chart().parameter) };
    out.push(ord_at_point_on_curve(&current, relation.as_ref(), &point, chart).unwrap());
    out
}

/// Every valuation of a nonzero combination of `basis` with coefficients
/// in `-1..=1`.
pub fn value_set_by_search(cs: &CaseStudy, basis: &[HomogPoly]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let total = 3usize.pow(basis.len() as u32);
    for code in 1..total {
        let mut c = code;
        let mut s = HomogPoly::zero(basis[0].num_vars(), basis[0].degree());
        for b in basis {
            let digit = (c % 3) as i64 - 1;
            c /= 3;
            s = s.add_scaled(b, &Rat::from_integer(digit.into()));
        }
        let s = cs.reduce(&s);
        if !s.is_zero() {
            out.insert(valuation_by_membership(cs, &s));
        }
    }
    out
}

/// Smallest `k <= kmax` with every point at levels above `k` a sum of points
/// at levels `<= k`, by memoized backward decomposition.
pub fn generation_degree_by_search(levels: &BTreeMap<u32, BTreeSet<Vec<u32>>>, kmax: u32) -> Option<u32> {
    let top = *levels.keys().next_back()?;
    (1..=kmax).find(|&k| {
        let mut memo = HashMap::new();
        levels
            .iter()
            .filter(|(m, _)| **m > k)
            .all(|(m, pts)| pts.iter().all(|v| decomposes(levels, k, v, *m, &mut memo)))
            || k >= top
    })
}

fn decomposes(
    levels: &BTreeMap<u32, BTreeSet<Vec<u32>>>,
    k: u32,
    v: &[u32],
    m: u32,
    memo: &mut HashMap<(Vec<u32>, u32), bool>,
) -> bool {
    if m <= k && levels.get(&m).is_some_and(|l| l.contains(v)) {
        return true;
    }
    if let Some(&r) = memo.get(&(v.to_vec(), m)) {
        return r;
    }
    let mut found = false;
    'search: for j in 1..=k.min(m.saturating_sub(1)) {
        for a in levels.get(&j).into_iter().flatten() {
            if a.iter().zip(v).all(|(x, y)| x <= y) {
                let rest: Vec<u32> = v.iter().zip(a).map(|(y, x)| y - x).collect();
                if decomposes(levels, k, &rest, m - j, memo) {
                    found = true;
                    break 'search;
                }
            }
        }
    }
    memo.insert((v.to_vec(), m), found);
    found
}

pub fn levels_as_vecs(levels: &BTreeMap<u32, BTreeSet<okounkov_core::valuation::ValuationVector>>) -> BTreeMap<u32, BTreeSet<Vec<u32>>> {
    levels.iter().map(|(m, vs)| (*m, vs.iter().map(|v| v.0.clone()).collect())).collect()
}
