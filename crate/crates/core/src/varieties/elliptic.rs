//! Elliptic curves `y^2 = x^3 + a x + b` over a prime field, the
//! chord-tangent group law, and single-point members of degree-`d` classes.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A point of `E(F_p)`. `Infinity` sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EcPoint {
    Infinity,
    Affine(u64, u64),
}

impl fmt::Display for EcPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcPoint::Infinity => write!(f, "O"),
            EcPoint::Affine(x, y) => write!(f, "({x},{y})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

#[derive(Clone, Debug)]
pub struct EllipticCurveFp {
    p: u64,
    a: u64,
    b: u64,
    points: Vec<EcPoint>,
}

impl EllipticCurveFp {
    /// Requires `p >= 5` prime and a nonzero discriminant.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not a prime >= 5")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidArgument("prime too large for exhaustive enumeration".into()));
        }
        let a = a.rem_euclid(p as i64) as u64;
        let b = b.rem_euclid(p as i64) as u64;
        let mut curve = EllipticCurveFp { p, a, b, points: Vec::new() };
        let disc = (4 * curve.mul(curve.mul(a, a), a) + 27 * curve.mul(b, b)) % p;
        if disc == 0 {
            return Err(Error::InvalidArgument("singular curve: 4a^3 + 27b^2 = 0".into()));
        }
        let mut points = vec![EcPoint::Infinity];
        for x in 0..p {
            let rhs = curve.rhs(x);
            for y in 0..p {
                if curve.mul(y, y) == rhs {
                    points.push(EcPoint::Affine(x, y));
                }
            }
        }
        curve.points = points;
        Ok(curve)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    /// All points, infinity first, then by `(x, y)`.
    pub fn points(&self) -> &[EcPoint] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    fn mul(&self, u: u64, v: u64) -> u64 {
        ((u as u128 * v as u128) % self.p as u128) as u64
    }

    fn rhs(&self, x: u64) -> u64 {
        (self.mul(self.mul(x, x), x) + self.mul(self.a, x) + self.b) % self.p
    }

    fn inv(&self, u: u64) -> u64 {
        // Fermat's little theorem
        let (mut base, mut e, mut acc) = (u % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn contains(&self, pt: &EcPoint) -> bool {
        match *pt {
            EcPoint::Infinity => true,
            EcPoint::Affine(x, y) => x < self.p && y < self.p && self.mul(y, y) == self.rhs(x),
        }
    }

    fn require(&self, pt: &EcPoint) -> Result<()> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn neg(&self, pt: &EcPoint) -> Result<EcPoint> {
        self.require(pt)?;
        Ok(match *pt {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine(x, y) => EcPoint::Affine(x, (self.p - y) % self.p),
        })
    }

    fn add_unchecked(&self, a: EcPoint, b: EcPoint) -> EcPoint {
        let p = self.p;
        match (a, b) {
            (EcPoint::Infinity, q) | (q, EcPoint::Infinity) => q,
            (EcPoint::Affine(x1, y1), EcPoint::Affine(x2, y2)) => {
                if x1 == x2 && (y1 + y2) % p == 0 {
                    return EcPoint::Infinity;
                }
                let slope = if x1 == x2 {
                    self.mul((3 * self.mul(x1, x1) + self.a) % p, self.inv(2 * y1 % p))
                } else {
                    self.mul((y2 + p - y1) % p, self.inv((x2 + p - x1) % p))
                };
                let x3 = (self.mul(slope, slope) + 2 * p - x1 - x2) % p;
                let y3 = (self.mul(slope, (x1 + p - x3) % p) + p - y1) % p;
                EcPoint::Affine(x3, y3)
            }
        }
    }

    pub fn ec_add(&self, a: &EcPoint, b: &EcPoint) -> Result<EcPoint> {
        self.require(a)?;
        self.require(b)?;
        Ok(self.add_unchecked(*a, *b))
    }

    /// `k * pt` by double-and-add; negative `k` uses `-pt`.
    pub fn ec_mul(&self, k: i64, pt: &EcPoint) -> Result<EcPoint> {
        let mut base = if k < 0 { self.neg(pt)? } else { self.require(pt).map(|_| *pt)? };
        let mut e = k.unsigned_abs();
        let mut acc = EcPoint::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(acc, base);
            }
            base = self.add_unchecked(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Group sum `sum n_i P_i` with the point at infinity as origin.
    pub fn divisor_class(&self, divisor: &[(EcPoint, u64)]) -> Result<EcPoint> {
        let mut acc = EcPoint::Infinity;
        for (pt, n) in divisor {
            let term = self.ec_mul(i64::try_from(*n).map_err(|_| Error::InvalidArgument("coefficient too large".into()))?, pt)?;
            acc = self.add_unchecked(acc, term);
        }
        Ok(acc)
    }
}

/// First point `P` (in enumeration order) with `d P` equal to the class of
/// the effective divisor `D`; `None` when no such point exists over `F_p`.
pub fn single_point_member(e: &EllipticCurveFp, divisor: &[(EcPoint, u64)], d: u64) -> Result<Option<EcPoint>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let found: u64 = divisor.iter().map(|(_, n)| n).sum();
    if found != d || divisor.iter().any(|(_, n)| *n == 0) {
        return Err(Error::DegreeMismatch { expected: d, found });
    }
    let sigma = e.divisor_class(divisor)?;
    let d = i64::try_from(d).map_err(|_| Error::InvalidArgument("d too large".into()))?;
    for pt in e.points() {
        if e.ec_mul(d, pt)? == sigma {
            return Ok(Some(*pt));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub divisor: Vec<EcPoint>,
    pub class: EcPoint,
    pub witness: Option<EcPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub p: u64,
    pub d: u64,
    pub curve_order: usize,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn solved(&self) -> usize {
        self.entries.iter().filter(|e| e.witness.is_some()).count()
    }

    pub fn unsolved(&self) -> usize {
        self.entries.len() - self.solved()
    }
}

/// Samples `samples` effective divisors of degree `d` (each a sum of `d`
/// affine points drawn with replacement) and searches each for a
/// single-point member.
pub fn lemma_sweep(e: &EllipticCurveFp, d: u64, samples: usize, seed: u64) -> Result<SweepReport> {
    let affine: Vec<EcPoint> = e.points().iter().copied().filter(|p| *p != EcPoint::Infinity).collect();
    if affine.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut divisor: Vec<EcPoint> = (0..d).map(|_| *affine.choose(&mut rng).expect("nonempty")).collect();
        divisor.sort();
        let weighted: Vec<(EcPoint, u64)> = divisor.iter().map(|p| (*p, 1)).collect();
        let class = e.divisor_class(&weighted)?;
        let witness = single_point_member(e, &weighted, d)?;
        entries.push(SweepEntry { divisor, class, witness });
    }
    Ok(SweepReport { p: e.p(), d, curve_order: e.order(), entries })
}
