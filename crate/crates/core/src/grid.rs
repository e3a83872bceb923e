//! Exact evaluation of a polynomial on a uniform rational grid.
//!
//! The grid points are `(m i / k, n j / k)`. Multiplying through by a common
//! denominator turns `D(m i / k, n j / k)` into an integer polynomial in
//! `(i, j)`, which is evaluated in `i128` when the values provably fit and in
//! `BigInt` otherwise. Results are exact either way.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{pow, Poly2, Rational, Rect};

/// Which grid indices to visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpan {
    /// `|i|, |j| < k`: strictly inside the open box.
    Interior,
    /// `|i|, |j| <= k`: the closed box including its boundary.
    Closed,
}

/// `D(m i / k, n j / k) = value(i, j) / scale` with integer `value`.
#[derive(Debug, Clone)]
pub struct ScaledGrid {
    poly: Poly2,
    coeffs: Vec<Vec<BigInt>>,
    scale: Rational,
    rect: Rect,
    k: i64,
}

impl ScaledGrid {
    /// Panics if `k < 1`.
    pub fn new(poly: &Poly2, rect: &Rect, k: i64) -> Self {
        assert!(k >= 1, "grid resolution must be positive");
        let d = poly.total_degree().max(0) as u32;
        let kk = Rational::from_integer(BigInt::from(k));
        // Coefficients of D(m s, n t) scaled by k^d, as polynomials in i, j.
        let raw: Vec<((u32, u32), Rational)> = poly
            .terms()
            .map(|(&(a, b), c)| {
                ((a, b), c * pow(rect.m(), a) * pow(rect.n(), b) * pow(&kk, d - a - b))
            })
            .collect();
        let lcm = raw
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let dx = poly.degree_x().max(0) as usize;
        let dy = poly.degree_y().max(0) as usize;
        let mut coeffs = vec![vec![BigInt::zero(); dy + 1]; dx + 1];
        for ((a, b), c) in raw {
            coeffs[a as usize][b as usize] = (c * &lcm).to_integer();
        }
        let scale = Rational::from_integer(lcm) * pow(&kk, d);
        Self {
            poly: poly.clone(),
            coeffs,
            scale,
            rect: rect.clone(),
            k,
        }
    }

    pub fn point(&self, i: i64, j: i64) -> (Rational, Rational) {
        let k = BigInt::from(self.k);
        (
            self.rect.m() * Rational::new(BigInt::from(i), k.clone()),
            self.rect.n() * Rational::new(BigInt::from(j), k),
        )
    }

    fn limit(&self, span: GridSpan) -> i64 {
        match span {
            GridSpan::Interior => self.k - 1,
            GridSpan::Closed => self.k,
        }
    }

    /// Upper bound on `|value(i, j)|` over the closed index range.
    fn magnitude_bound(&self) -> BigInt {
        let k = BigInt::from(self.k);
        let mut total = BigInt::zero();
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                total += c.abs() * num_traits::pow(k.clone(), a + b);
            }
        }
        total
    }

    fn fits_i128(&self, extra: &BigInt) -> bool {
        let bound = self.magnitude_bound() * extra.abs().max(BigInt::one());
        bound.bits() < 125
    }

    /// First point in row-major order (`j` outer, `i` inner, both ascending)
    /// with `|D| >= eps`, as `(i, j, value)`.
    pub fn first_at_least(&self, eps: &Rational, span: GridSpan) -> Option<(i64, i64, Rational)> {
        // |value| >= eps * scale  <=>  |value| * q >= p  with p / q = eps * scale.
        let threshold = eps * &self.scale;
        let (p, q) = (threshold.numer().clone(), threshold.denom().clone());
        let hit = if self.fits_i128(&q.clone().max(p.clone())) {
            let coeffs = self.convert::<i128>();
            let (p, q) = (to_i128(&p), to_i128(&q));
            scan(&coeffs, self.limit(span), |v: &i128| v.abs() * q >= p)
        } else {
            let coeffs = self.convert::<BigInt>();
            scan(&coeffs, self.limit(span), |v: &BigInt| v.abs() * &q >= p)
        };
        hit.map(|(i, j)| {
            let (x, y) = self.point(i, j);
            (i, j, self.poly.eval(&x, &y))
        })
    }

    /// Exact minimum and maximum over the grid, with the first index pair
    /// (row-major) attaining each.
    pub fn extrema(&self, span: GridSpan) -> GridExtrema {
        let (min, max) = if self.fits_i128(&BigInt::one()) {
            let coeffs = self.convert::<i128>();
            let ((lo, ilo), (hi, ihi)) = extrema_scan(&coeffs, self.limit(span));
            ((BigInt::from(lo), ilo), (BigInt::from(hi), ihi))
        } else {
            extrema_scan(&self.convert::<BigInt>(), self.limit(span))
        };
        GridExtrema {
            min: Rational::from_integer(min.0) / &self.scale,
            argmin: min.1,
            max: Rational::from_integer(max.0) / &self.scale,
            argmax: max.1,
        }
    }

    fn convert<T: FromBig>(&self) -> Vec<Vec<T>> {
        self.coeffs
            .iter()
            .map(|row| row.iter().map(T::from_big).collect())
            .collect()
    }
}

/// Extreme grid values and where they first occur, as grid indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridExtrema {
    pub min: Rational,
    pub argmin: (i64, i64),
    pub max: Rational,
    pub argmax: (i64, i64),
}

fn to_i128(v: &BigInt) -> i128 {
    i128::try_from(v).expect("bound checked before conversion")
}

trait FromBig: Clone + Ord + Zero + From<i64> + for<'a> Add<&'a Self, Output = Self> {
    fn from_big(v: &BigInt) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
}

impl FromBig for i128 {
    fn from_big(v: &BigInt) -> Self {
        to_i128(v)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl FromBig for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Mul::mul(self, rhs)
    }
}

/// Coefficients of the row polynomial in `i` for fixed `j`.
fn row_coeffs<T: FromBig>(coeffs: &[Vec<T>], j: i64) -> Vec<T> {
    let jt = T::from(j);
    coeffs
        .iter()
        .map(|row| {
            row.iter()
                .rev()
                .fold(T::zero(), |acc, c| acc.mul_ref(&jt) + c)
        })
        .collect()
}

fn horner<T: FromBig>(row: &[T], i: &T) -> T {
    row.iter().rev().fold(T::zero(), |acc, c| acc.mul_ref(i) + c)
}

fn scan<T: FromBig>(coeffs: &[Vec<T>], limit: i64, mut hit: impl FnMut(&T) -> bool) -> Option<(i64, i64)> {
    for j in -limit..=limit {
        let row = row_coeffs(coeffs, j);
        for i in -limit..=limit {
            if hit(&horner(&row, &T::from(i))) {
                return Some((i, j));
            }
        }
    }
    None
}

type Extreme<T> = (T, (i64, i64));

fn extrema_scan<T: FromBig>(coeffs: &[Vec<T>], limit: i64) -> (Extreme<T>, Extreme<T>) {
    let mut lo: Option<Extreme<T>> = None;
    let mut hi: Option<Extreme<T>> = None;
    for j in -limit..=limit {
        let row = row_coeffs(coeffs, j);
        for i in -limit..=limit {
            let v = horner(&row, &T::from(i));
            if lo.as_ref().is_none_or(|(l, _)| &v < l) {
                lo = Some((v.clone(), (i, j)));
            }
            if hi.as_ref().is_none_or(|(h, _)| &v > h) {
                hi = Some((v, (i, j)));
            }
        }
    }
    let lo = lo.unwrap_or((T::zero(), (0, 0)));
    let hi = hi.unwrap_or((T::zero(), (0, 0)));
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn extrema_match_direct_evaluation() {
        let p = Poly2::from_terms([(2, 0, rat(-1, 3)), (1, 1, rat(5, 7)), (0, 1, int(2)), (0, 0, rat(1, 2))]);
        let rect = Rect::new(rat(3, 2), rat(2, 5)).unwrap();
        let g = ScaledGrid::new(&p, &rect, 6);
        let ext = g.extrema(GridSpan::Closed);
        let mut best = None::<Rational>;
        let mut worst = None::<Rational>;
        for j in -6..=6 {
            for i in -6..=6 {
                let (x, y) = g.point(i, j);
                let v = p.eval(&x, &y);
                best = Some(best.map_or(v.clone(), |b| b.max(v.clone())));
                worst = Some(worst.map_or(v.clone(), |w| w.min(v)));
            }
        }
        assert_eq!(ext.max, best.unwrap());
        assert_eq!(ext.min, worst.unwrap());
    }

    #[test]
    fn first_hit_is_row_major() {
        // 4 - x^2 on the unit box: first hit at x = 0 in the lowest row.
        let p = &Poly2::constant(int(4)) - &(&Poly2::x() * &Poly2::x());
        let g = ScaledGrid::new(&p, &Rect::unit(), 10);
        let (i, j, v) = g.first_at_least(&int(4), GridSpan::Interior).unwrap();
        assert_eq!((i, j, v), (0, -9, int(4)));
    }

    #[test]
    fn zero_polynomial_has_no_hits() {
        let g = ScaledGrid::new(&Poly2::zero(), &Rect::unit(), 4);
        assert!(g.first_at_least(&rat(1, 1000), GridSpan::Closed).is_none());
        let ext = g.extrema(GridSpan::Closed);
        assert_eq!((ext.min, ext.max), (int(0), int(0)));
    }

    #[test]
    fn big_coefficients_take_the_bigint_path() {
        let huge = Rational::new(BigInt::from(10).pow(60u32), BigInt::from(3));
        let p = Poly2::monomial(huge.clone(), 1, 0);
        let g = ScaledGrid::new(&p, &Rect::unit(), 3);
        assert!(!g.fits_i128(&BigInt::one()));
        let ext = g.extrema(GridSpan::Closed);
        assert_eq!(ext.max, huge);
        let (i, j, _) = g.first_at_least(&huge, GridSpan::Closed).unwrap();
        assert_eq!((i, j), (-3, -3));
    }
}
