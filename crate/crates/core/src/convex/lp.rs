//! Exact phase-one simplex, used for convex-hull membership.

use num_traits::{One, Signed, Zero};

use crate::exactmath::Rat;

/// Decides whether `{x >= 0 : A x = b}` is nonempty, with `b >= 0`.
/// Bland's rule guarantees termination.
pub fn feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let rows = a.len();
    if rows == 0 {
        return true;
    }
    let cols = a[0].len();
    debug_assert!(b.iter().all(|v| !v.is_negative()));
    let width = cols + rows;
    let mut tab: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..rows).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..width).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost: Vec<Rat> = (0..=width)
        .map(|k| {
            let base = if (cols..width).contains(&k) { Rat::one() } else { Rat::zero() };
            let col_sum: Rat = tab.iter().map(|r| r[k].clone()).sum();
            if k == width {
                -col_sum
            } else {
                base - col_sum
            }
        })
        .collect();

    while let Some(enter) = (0..width).find(|&k| cost[k].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let inv = tab[pr][enter].recip();
        for v in tab[pr].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = tab[pr].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }
    cost[width].is_zero()
}

/// Whether `p` is a convex combination of `points`.
pub fn in_convex_hull(p: &[Rat], points: &[Vec<Rat>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = p.len();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|j| points.iter().map(|q| &q[j] - &p[j]).collect())
        .collect();
    a.push(vec![Rat::one(); points.len()]);
    // rows with negative right-hand side do not occur: b = (0, ..., 0, 1)
    let mut b = vec![Rat::zero(); n];
    b.push(Rat::one());
    feasible(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn pt(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hull_membership() {
        let tri = vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])];
        assert!(in_convex_hull(&[rat(1, 4), rat(1, 4)], &tri));
        assert!(in_convex_hull(&[rat(1, 2), rat(1, 2)], &tri));
        assert!(in_convex_hull(&pt(&[0, 0]), &tri));
        assert!(!in_convex_hull(&[rat(1, 2), rat(2, 3)], &tri));
        assert!(!in_convex_hull(&pt(&[-1, 0]), &tri));
        assert!(!in_convex_hull(&pt(&[0, 0]), &[]));
    }

    #[test]
    fn degenerate_segment_in_3d() {
        let seg = vec![pt(&[0, 0, 0]), pt(&[2, 2, 2])];
        assert!(in_convex_hull(&pt(&[1, 1, 1]), &seg));
        assert!(!in_convex_hull(&pt(&[1, 1, 0]), &seg));
        assert!(!in_convex_hull(&pt(&[3, 3, 3]), &seg));
    }
}
