//! Univariate polynomials, resultants, and the common-zero test used to
//! certify smoothness of plane curves.

use num_traits::{One, Zero};

use super::linalg::determinant;
use super::poly::HomogPoly;
use super::rat::{int, Rat};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.0
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lc_inv = divisor.0[dd].recip();
        while r.len() > dd {
            let top = r.len() - 1;
            let f = &r[top] * &lc_inv;
            if !f.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    r[top - dd + i] -= &f * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UniPoly {
        let n = xs.len();
        let mut total = vec![Rat::zero(); n];
        for i in 0..n {
            let mut basis = vec![Rat::one()];
            let mut denom = Rat::one();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut next = vec![Rat::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &xs[j];
                }
                basis = next;
                denom *= &xs[i] - &xs[j];
            }
            let scale = &ys[i] / denom;
            for (t, b) in total.iter_mut().zip(&basis) {
                *t += b * &scale;
            }
        }
        UniPoly::new(total)
    }
}

/// Sylvester determinant of two univariate coefficient lists with formal
/// degrees `len - 1`.
fn sylvester(f: &[Rat], g: &[Rat]) -> Rat {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(&rows)
}

/// Bivariate polynomial in `(x, y)`, stored as `coeffs[i][j]` for `x^i y^j`.
#[derive(Clone, Debug)]
pub struct Bivariate {
    coeffs: Vec<Vec<Rat>>,
}

impl Bivariate {
    /// Dehomogenizes a ternary form: keeps coordinates `x_var`, `y_var` and
    /// sets the third to `1`.
    pub fn from_form(p: &HomogPoly, x_var: usize, y_var: usize) -> Self {
        let deg = p.degree() as usize;
        let mut coeffs = vec![vec![Rat::zero(); deg + 1]; deg + 1];
        for (e, c) in p.terms() {
            coeffs[e[x_var] as usize][e[y_var] as usize] += c;
        }
        Bivariate { coeffs }
    }

    fn degree_in_y(&self) -> Option<usize> {
        let mut best = None;
        for row in &self.coeffs {
            if let Some(j) = row.iter().rposition(|c| !c.is_zero()) {
                best = Some(best.map_or(j, |b: usize| b.max(j)));
            }
        }
        best
    }

    fn total_degree(&self) -> usize {
        let mut d = 0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = d.max(i + j);
                }
            }
        }
        d
    }

    fn at_x(&self, x: &Rat, ydeg: usize) -> Vec<Rat> {
        (0..=ydeg)
            .map(|j| {
                self.coeffs
                    .iter()
                    .rev()
                    .fold(Rat::zero(), |acc, row| acc * x + row.get(j).cloned().unwrap_or_default())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degree_in_y().is_none()
    }

    /// `Res_y(self, other)` as a polynomial in `x`; it vanishes at the
    /// `x`-coordinate of every common zero. When both inputs are constant in
    /// `y` the gcd of the two is returned instead. `None` when either input
    /// is zero.
    pub fn resultant_y(&self, other: &Bivariate) -> Option<UniPoly> {
        let df = self.degree_in_y()?;
        let dg = other.degree_in_y()?;
        if df == 0 && dg == 0 {
            // both constant in y: common zeros sit over the common roots in x
            let f0 = UniPoly::new(self.coeffs.iter().map(|r| r[0].clone()).collect());
            let g0 = UniPoly::new(other.coeffs.iter().map(|r| r[0].clone()).collect());
            return Some(f0.gcd(&g0));
        }
        let bound = self.total_degree() * other.total_degree();
        let xs: Vec<Rat> = (0..=bound as i64).map(int).collect();
        let ys: Vec<Rat> = xs
            .iter()
            .map(|x| sylvester(&self.at_x(x, df), &other.at_x(x, dg)))
            .collect();
        Some(UniPoly::interpolate(&xs, &ys))
    }
}

/// Decides whether ternary forms have no common zero in the affine chart
/// where coordinate `3 - x_var - y_var` equals one. A `true` answer is a
/// certificate; `false` means the pairwise resultants share a factor.
fn chart_certified(forms: &[HomogPoly], x_var: usize, y_var: usize) -> bool {
    let bis: Vec<Bivariate> = forms.iter().map(|f| Bivariate::from_form(f, x_var, y_var)).collect();
    let mut g = UniPoly::new(Vec::new());
    let mut candidates = bis.clone();
    // one extra combination guards against pairs sharing a factor
    if bis.len() >= 3 {
        let deg = forms.iter().map(|f| f.degree()).collect::<Vec<_>>();
        if deg.iter().all(|d| *d == deg[0]) {
            let mut sum = forms[0].clone();
            for (k, f) in forms.iter().enumerate().skip(1) {
                sum = sum.add_scaled(f, &int(k as i64 + 1));
            }
            candidates.push(Bivariate::from_form(&sum, x_var, y_var));
        }
    }
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if let Some(r) = candidates[i].resultant_y(&candidates[j]) {
                g = g.gcd(&r);
                if g.degree() == Some(0) {
                    return true;
                }
            }
        }
    }
    g.degree() == Some(0)
}

/// Certifies that ternary forms have no common zero in `P^2` over the
/// algebraic closure. The affine chart `z = 1` is certified by resultants
/// (retrying with the roles of the coordinates exchanged), the line at
/// infinity by univariate gcds, and the point `(1:0:0)` by evaluation.
pub fn no_common_projective_zero(forms: &[HomogPoly]) -> bool {
    assert!(forms.iter().all(|f| f.num_vars() == 3));
    if forms.iter().all(HomogPoly::is_zero) {
        return false;
    }
    let nonzero: Vec<HomogPoly> = forms.iter().filter(|f| !f.is_zero()).cloned().collect();
    if nonzero.iter().any(|f| f.degree() == 0) {
        return true;
    }
    // chart z = 1, try both projections
    if !(chart_certified(&nonzero, 0, 1) || chart_certified(&nonzero, 1, 0)) {
        // shear (x, y) -> (x + y, y) and retry
        let shear = HomogPoly::linear(&[int(1), int(1), int(0)]);
        let sheared: Vec<HomogPoly> = nonzero.iter().map(|f| f.substitute_linear(0, &shear)).collect();
        if !chart_certified(&sheared, 0, 1) {
            return false;
        }
    }
    // line z = 0, chart y = 1: univariate in x
    let mut g = UniPoly::new(Vec::new());
    for f in &nonzero {
        let deg = f.degree() as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for (e, v) in f.terms() {
            if e[2] == 0 {
                c[e[0] as usize] += v;
            }
        }
        g = g.gcd(&UniPoly::new(c));
    }
    if g.degree() != Some(0) {
        return false;
    }
    // point (1:0:0)
    let p = [int(1), int(0), int(0)];
    nonzero.iter().any(|f| !f.eval(&p).is_zero())
}
