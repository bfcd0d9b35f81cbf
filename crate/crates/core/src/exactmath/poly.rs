//! Homogeneous multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{parse_rat, Rat};
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// A homogeneous polynomial. Zero coefficients are never stored and every
/// exponent vector sums to `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Rat>,
}

/// All exponent vectors of total degree `m` in `num_vars` variables, in
/// descending lexicographic order (`x0^m` first).
pub fn graded_monomials(num_vars: usize, m: u32) -> Vec<Exponent> {
    fn fill(prefix: &mut Exponent, left: usize, remaining: u32, out: &mut Vec<Exponent>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, left - 1, remaining - e, out);
            prefix.pop();
        }
    }
    assert!(num_vars >= 1, "graded_monomials needs at least one variable");
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(num_vars), num_vars, m, &mut out);
    out
}

impl HomogPoly {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogPoly { num_vars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(num_vars, 0);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rat::one())
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars);
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exponent: Exponent, coef: Rat) -> Self {
        let degree = exponent.iter().sum();
        let mut p = Self::zero(exponent.len(), degree);
        if !coef.is_zero() {
            p.terms.insert(exponent, coef);
        }
        p
    }

    /// The linear form `sum coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(
        num_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, Rat)>,
    ) -> Result<Self> {
        let mut p = Self::zero(num_vars, degree);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch { expected: num_vars, found: e.len() });
            }
            if e.iter().sum::<u32>() != degree {
                return Err(Error::InvalidArgument(format!(
                    "exponent {e:?} does not have degree {degree}"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Coefficients against an explicit monomial basis.
    pub fn from_coefficients(num_vars: usize, degree: u32, basis: &[Exponent], coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(num_vars, degree);
        for (e, c) in basis.iter().zip(coeffs) {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficients_in(&self, basis_index: &BTreeMap<Exponent, usize>) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); basis_index.len()];
        for (e, c) in &self.terms {
            let i = basis_index
                .get(e)
                .unwrap_or_else(|| panic!("monomial {e:?} outside the basis"));
            v[*i] = c.clone();
        }
        v
    }

    fn add_term(&mut self, e: Exponent, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_shape(&self, other: &Self) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.degree);
        }
        HomogPoly {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &Rat) -> Self {
        self.check_shape(other);
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.num_vars);
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Partial derivative. The derivative of a constant is the zero constant.
    pub fn partial(&self, var: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.num_vars, degree);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * Rat::from_integer(e[var].into()));
            }
        }
        out
    }

    /// Replaces `x_var` by the linear form `form` (in the same variables).
    pub fn substitute_linear(&self, var: usize, form: &HomogPoly) -> Self {
        assert_eq!(form.num_vars, self.num_vars);
        assert_eq!(form.degree, 1, "substitution needs a linear form");
        let max_pow = self.terms.keys().map(|e| e[var]).max().unwrap_or(0);
        let mut powers = vec![Self::one(self.num_vars)];
        for k in 1..=max_pow as usize {
            let next = &powers[k - 1] * form;
            powers.push(next);
        }
        let mut out = Self::zero(self.num_vars, self.degree);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[var] as usize;
            rest[var] = 0;
            let mono = Self::monomial(rest, c.clone());
            let prod = &mono * &powers[k];
            for (e2, c2) in prod.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    /// Sets `x_var = 0` and removes that variable.
    pub fn restrict_drop(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars - 1, self.degree);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                let mut e2 = e.clone();
                e2.remove(var);
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Smallest exponent of `var` over all terms; `None` for the zero polynomial.
    pub fn min_exponent(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Terms whose `var`-exponent is exactly `k`, with that power divided out.
    pub fn coefficient_of_power(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree - k);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            if !a.is_one() || factors.is_empty() {
                factors.insert(0, a.to_string());
            }
            s.push_str(&factors.join("*"));
        }
        s
    }

    /// Parses text like `x^3 + y^3 - 1/2*z*w^2` over the given variable names.
    pub fn parse(text: &str, names: &[&str]) -> Result<Self> {
        let err = |msg: &str| Error::Parse(format!("{msg} in `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial"));
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                chunks.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        chunks.push((negative, current));

        let n = names.len();
        let mut terms: Vec<(Exponent, Rat)> = Vec::new();
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return Err(err("dangling sign"));
            }
            let mut coef = Rat::one();
            let mut e = vec![0u32; n];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if factor.chars().next().unwrap().is_ascii_digit() {
                    coef *= parse_rat(factor)?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((v, p)) => (v, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let idx = names
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| err(&format!("unknown variable `{name}`")))?;
                e[idx] += power;
            }
            if neg {
                coef = -coef;
            }
            terms.push((e, coef));
        }
        let degree = terms[0].0.iter().sum();
        Self::from_terms(n, degree, terms)
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.num_vars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl Add for &HomogPoly {
    type Output = HomogPoly;
    fn add(self, rhs: &HomogPoly) -> HomogPoly {
        self.add_scaled(rhs, &Rat::one())
    }
}

impl Sub for &HomogPoly {
    type Output = HomogPoly;
    fn sub(self, rhs: &HomogPoly) -> HomogPoly {
        self.add_scaled(rhs, &-Rat::one())
    }
}

impl Neg for &HomogPoly {
    type Output = HomogPoly;
    fn neg(self) -> HomogPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &HomogPoly {
    type Output = HomogPoly;
    fn mul(self, rhs: &HomogPoly) -> HomogPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = HomogPoly::zero(self.num_vars, self.degree + rhs.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Principal-ideal division by a relation `F` with respect to the
/// lexicographic order that ranks `elim_var` first. Since `{F}` is a Gröbner
/// basis of `(F)`, the remainder is unique.
#[derive(Clone, Debug)]
pub struct Reducer {
    relation: HomogPoly,
    elim_var: usize,
    lead: Exponent,
    lead_coef: Rat,
}

impl Reducer {
    pub fn new(relation: HomogPoly, elim_var: usize) -> Result<Self> {
        if relation.is_zero() {
            return Err(Error::InvalidArgument("zero relation".into()));
        }
        if elim_var >= relation.num_vars {
            return Err(Error::InvalidArgument(format!("no variable {elim_var}")));
        }
        let key = |e: &Exponent| order_key(e, elim_var);
        let (lead, lead_coef) = relation
            .terms
            .iter()
            .max_by(|a, b| key(a.0).cmp(&key(b.0)))
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        Ok(Reducer { relation, elim_var, lead, lead_coef })
    }

    pub fn relation(&self) -> &HomogPoly {
        &self.relation
    }

    pub fn elim_var(&self) -> usize {
        self.elim_var
    }

    pub fn leading_monomial(&self) -> &Exponent {
        &self.lead
    }

    pub fn is_standard(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.lead).any(|(a, b)| a < b)
    }

    /// Degree-`m` monomials not divisible by the leading monomial; their
    /// classes form a basis of the degree-`m` piece of the quotient ring.
    pub fn standard_monomials(&self, m: u32) -> Vec<Exponent> {
        graded_monomials(self.relation.num_vars, m)
            .into_iter()
            .filter(|e| self.is_standard(e))
            .collect()
    }

    /// Returns `(q, r)` with `p = q * F + r` and no term of `r` divisible by
    /// the leading monomial.
    pub fn div_rem(&self, p: &HomogPoly) -> (HomogPoly, HomogPoly) {
        assert_eq!(p.num_vars, self.relation.num_vars);
        let n = p.num_vars;
        let ev = self.elim_var;
        let qdeg = p.degree.saturating_sub(self.relation.degree);
        let mut quotient = HomogPoly::zero(n, qdeg);
        let mut remainder = HomogPoly::zero(n, p.degree);
        let mut work: BTreeMap<Exponent, Rat> =
            p.terms.iter().map(|(e, c)| (order_key(e, ev), c.clone())).collect();
        while let Some((key, c)) = work.pop_last() {
            let e = from_order_key(&key, ev);
            if p.degree >= self.relation.degree && !self.is_standard(&e) {
                let shift: Exponent = e.iter().zip(&self.lead).map(|(a, b)| a - b).collect();
                let factor = &c / &self.lead_coef;
                for (fe, fc) in &self.relation.terms {
                    if *fe == self.lead {
                        continue;
                    }
                    let te: Exponent = fe.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    let k = order_key(&te, ev);
                    let v = work.entry(k.clone()).or_insert_with(Rat::zero);
                    *v -= &factor * fc;
                    if v.is_zero() {
                        work.remove(&k);
                    }
                }
                quotient.add_term(shift, factor);
            } else {
                remainder.add_term(e, c);
            }
        }
        (quotient, remainder)
    }

    pub fn reduce(&self, p: &HomogPoly) -> HomogPoly {
        self.div_rem(p).1
    }
}

fn order_key(e: &[u32], elim: usize) -> Exponent {
    let mut k = Vec::with_capacity(e.len());
    k.push(e[elim]);
    k.extend(e.iter().enumerate().filter(|(i, _)| *i != elim).map(|(_, v)| *v));
    k
}

fn from_order_key(k: &[u32], elim: usize) -> Exponent {
    let mut e: Exponent = k[1..].to_vec();
    e.insert(elim, k[0]);
    e
}

/// Remainder of `p` modulo `f`, eliminating powers `elim_var^{deg f}`.
/// `f` must contain `elim_var^{deg f}` with coefficient 1.
pub fn normal_form(p: &HomogPoly, f: &HomogPoly, elim_var: usize) -> Result<HomogPoly> {
    if p.num_vars != f.num_vars {
        return Err(Error::DimensionMismatch { expected: f.num_vars, found: p.num_vars });
    }
    let mut pure = vec![0; f.num_vars];
    if elim_var >= f.num_vars {
        return Err(Error::NotMonic { var: elim_var });
    }
    pure[elim_var] = f.degree;
    if !f.coeff(&pure).is_one() {
        return Err(Error::NotMonic { var: elim_var });
    }
    Ok(Reducer::new(f.clone(), elim_var)?.reduce(p))
}
