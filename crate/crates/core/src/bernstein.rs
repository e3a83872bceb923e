//! Range enclosures from tensor-product Bernstein coefficients.
//!
//! A polynomial `p` on the rectangle `[x0, x1] x [y0, y1]` is mapped to the unit
//! square, converted to the Bernstein basis of bidegree `(deg_x p, deg_y p)`,
//! and bounded by the minimum and maximum coefficient. The bound is exact at
//! the four corners and tightens under subdivision.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Poly2, Rational, Rect};

/// `lo <= p <= hi` on the enclosed rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl RangeEnclosure {
    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Closed axis-aligned rectangle `[x0, x1] x [y0, y1]`, `x0 < x1`, `y0 < y1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl Cell {
    /// Closure of a centered box.
    pub fn from_rect(rect: &Rect) -> Self {
        Self {
            x0: -rect.m().clone(),
            x1: rect.m().clone(),
            y0: -rect.n().clone(),
            y1: rect.n().clone(),
        }
    }

    pub fn center(&self) -> (Rational, Rational) {
        let two = Rational::from_integer(BigInt::from(2));
        ((&self.x0 + &self.x1) / &two, (&self.y0 + &self.y1) / two)
    }

    pub fn width(&self) -> Rational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rational {
        &self.y1 - &self.y0
    }

    /// Bisects the longer side; a tie splits along `x`.
    pub fn bisect(&self) -> (Cell, Cell) {
        let (cx, cy) = self.center();
        if self.width() >= self.height() {
            (
                Cell { x1: cx.clone(), ..self.clone() },
                Cell { x0: cx, ..self.clone() },
            )
        } else {
            (
                Cell { y1: cy.clone(), ..self.clone() },
                Cell { y0: cy, ..self.clone() },
            )
        }
    }
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Converts power coefficients `a[0..=d]` on `[0, 1]` to Bernstein
/// coefficients: `b_k = sum_{i <= k} C(k, i) / C(d, i) * a_i`.
fn power_to_bernstein(a: &[Rational]) -> Vec<Rational> {
    let d = a.len() - 1;
    let cd = binomials(d);
    (0..=d)
        .map(|k| {
            let ck = binomials(k);
            (0..=k).fold(Rational::zero(), |acc, i| {
                acc + &a[i] * Rational::new(ck[i].clone(), cd[i].clone())
            })
        })
        .collect()
}

/// Tensor-product Bernstein coefficients of `p` on `cell`, indexed
/// `[k][l]` for `t^k`-direction `k` and `u`-direction `l`.
pub fn bernstein_coefficients(p: &Poly2, cell: &Cell) -> Vec<Vec<Rational>> {
    let q = p.affine_substitute(&cell.width(), &cell.x0, &cell.height(), &cell.y0);
    let dx = p.degree_x().max(0) as usize;
    let dy = p.degree_y().max(0) as usize;
    let mut grid = vec![vec![Rational::zero(); dy + 1]; dx + 1];
    for (&(i, j), c) in q.terms() {
        grid[i as usize][j as usize] = c.clone();
    }
    // Rows along t, then columns along u.
    let mut along_t = vec![vec![Rational::zero(); dy + 1]; dx + 1];
    for j in 0..=dy {
        let col: Vec<Rational> = (0..=dx).map(|i| grid[i][j].clone()).collect();
        for (k, b) in power_to_bernstein(&col).into_iter().enumerate() {
            along_t[k][j] = b;
        }
    }
    along_t.iter().map(|row| power_to_bernstein(row)).collect()
}

/// Enclosure of `p` on `cell` from the extreme Bernstein coefficients.
pub fn enclosure_on_cell(p: &Poly2, cell: &Cell) -> RangeEnclosure {
    let coeffs = bernstein_coefficients(p, cell);
    let mut it = coeffs.iter().flatten();
    let first = it.next().cloned().unwrap_or_else(Rational::zero);
    let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), c| {
        (if c < &lo { c.clone() } else { lo }, if c > &hi { c.clone() } else { hi })
    });
    RangeEnclosure { lo, hi }
}

/// Enclosure of `p` on the closed box `[-m, m] x [-n, n]`.
pub fn bernstein_enclosure(p: &Poly2, rect: &Rect) -> RangeEnclosure {
    enclosure_on_cell(p, &Cell::from_rect(rect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn constant_is_tight() {
        let e = bernstein_enclosure(&Poly2::constant(int(5)), &Rect::new(int(3), rat(1, 2)).unwrap());
        assert_eq!(e, RangeEnclosure { lo: int(5), hi: int(5) });
    }

    #[test]
    fn linear_is_tight() {
        let e = bernstein_enclosure(&Poly2::x(), &Rect::unit());
        assert_eq!(e, RangeEnclosure { lo: int(-1), hi: int(1) });
    }

    #[test]
    fn x_squared_coefficients() {
        let x2 = &Poly2::x() * &Poly2::x();
        let coeffs = bernstein_coefficients(&x2, &Cell::from_rect(&Rect::unit()));
        let flat: Vec<_> = coeffs.into_iter().flatten().collect();
        assert_eq!(flat, vec![int(1), int(-1), int(1)]);
        let e = bernstein_enclosure(&x2, &Rect::unit());
        assert_eq!(e, RangeEnclosure { lo: int(-1), hi: int(1) });
    }

    #[test]
    fn subdivision_tightens_x_squared() {
        let x2 = &Poly2::x() * &Poly2::x();
        let (left, right) = Cell::from_rect(&Rect::unit()).bisect();
        assert_eq!(left.x1, int(0));
        let el = enclosure_on_cell(&x2, &left);
        let er = enclosure_on_cell(&x2, &right);
        assert_eq!(el, RangeEnclosure { lo: int(0), hi: int(1) });
        assert_eq!(er, RangeEnclosure { lo: int(0), hi: int(1) });
    }

    #[test]
    fn bisect_prefers_longer_side() {
        let cell = Cell::from_rect(&Rect::new(int(1), int(2)).unwrap());
        let (a, b) = cell.bisect();
        assert_eq!((a.y0, a.y1, b.y0, b.y1), (int(-2), int(0), int(0), int(2)));
    }
}
