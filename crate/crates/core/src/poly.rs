//! Exact rational scalars and polynomials in one and two variables.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as an exact rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Coordinate direction, used both for partial derivatives and for fixing a
/// variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Sparse bivariate polynomial in `x`, `y` over the rationals.
///
/// Keys are exponent pairs `(i, j)` for `x^i y^j`. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `c * x^i * y^j`.
    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Affine polynomial `cx * x + cy * y + c0`.
    pub fn affine(cx: Rational, cy: Rational, c0: Rational) -> Self {
        Self::from_terms([(1, 0, cx), (0, 1, cy), (0, 0, c0)])
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(i, j)) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&(i, j));
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `((i, j), coefficient)` in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, with `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| i64::from(i) + i64::from(j))
            .max()
            .unwrap_or(-1)
    }

    /// Degree in `x` alone (`-1` for zero).
    pub fn degree_x(&self) -> i64 {
        self.terms.keys().map(|&(i, _)| i64::from(i)).max().unwrap_or(-1)
    }

    /// Degree in `y` alone (`-1` for zero).
    pub fn degree_y(&self) -> i64 {
        self.terms.keys().map(|&(_, j)| i64::from(j)).max().unwrap_or(-1)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c * factor))
                .collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn linear_comb(&self, other: &Poly2, alpha: &Rational, beta: &Rational) -> Self {
        let mut out = self.scale(alpha);
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c * beta);
        }
        out
    }

    pub fn diff(&self, axis: Axis) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match axis {
                Axis::X if i > 0 => out.add_term(i - 1, j, c * BigInt::from(i)),
                Axis::Y if j > 0 => out.add_term(i, j - 1, c * BigInt::from(j)),
                _ => {}
            }
        }
        out
    }

    /// Directional derivative `dp/dx - omega * dp/dy`.
    pub fn apply_l(&self, omega: &Rational) -> Self {
        self.diff(Axis::X)
            .linear_comb(&self.diff(Axis::Y), &Rational::one(), &-omega)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        // Horner in y for each power of x, then Horner in x.
        let dx = match u32::try_from(self.degree_x()) {
            Ok(d) => d,
            Err(_) => return Rational::zero(),
        };
        let mut acc = Rational::zero();
        for i in (0..=dx).rev() {
            acc = acc * x + self.restrict_row(i).eval(y);
        }
        acc
    }

    /// Coefficient of `x^i` as a polynomial in `y`.
    fn restrict_row(&self, i: u32) -> Poly1 {
        let coeffs = self
            .terms
            .range((i, 0)..=(i, u32::MAX))
            .map(|(&(_, j), c)| (j, c.clone()));
        Poly1::from_sparse(coeffs)
    }

    /// Fixes one variable: `Axis::X` substitutes `x = value` and returns a
    /// polynomial in `y`; `Axis::Y` substitutes `y = value` and returns a
    /// polynomial in `x`.
    pub fn restrict(&self, axis: Axis, value: &Rational) -> Poly1 {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (keep, fixed) = match axis {
                Axis::X => (j, i),
                Axis::Y => (i, j),
            };
            let keep = keep as usize;
            if coeffs.len() <= keep {
                coeffs.resize(keep + 1, Rational::zero());
            }
            coeffs[keep] += c * pow(value, fixed);
        }
        Poly1::new(coeffs)
    }

    /// Substitutes `x = ax * t + bx`, `y = ay * u + by` and returns the
    /// polynomial in `(t, u)`, reusing the `(x, y)` slots.
    pub fn affine_substitute(
        &self,
        ax: &Rational,
        bx: &Rational,
        ay: &Rational,
        by: &Rational,
    ) -> Self {
        let lin_x = Poly1::new(vec![bx.clone(), ax.clone()]);
        let lin_y = Poly1::new(vec![by.clone(), ay.clone()]);
        let dx = self.degree_x().max(0) as u32;
        let dy = self.degree_y().max(0) as u32;
        let px: Vec<Poly1> = powers(&lin_x, dx);
        let py: Vec<Poly1> = powers(&lin_y, dy);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let fx = &px[i as usize];
            let fy = &py[j as usize];
            for (a, ca) in fx.coeffs().iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, cb) in fy.coeffs().iter().enumerate() {
                    out.add_term(a as u32, b as u32, c * ca * cb);
                }
            }
        }
        out
    }

    /// Sum of `|coefficient| * |x|^i * |y|^j` over all terms, an upper bound
    /// for `|p|` on the rectangle `|x| <= x_bound`, `|y| <= y_bound`.
    pub fn abs_sum_bound(&self, x_bound: &Rational, y_bound: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.abs() * pow(x_bound, i) * pow(y_bound, j))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Terms in display order: total degree descending, then `x`-degree
    /// descending.
    pub fn terms_display_order(&self) -> Vec<((u32, u32), &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&k, c)| (k, c)).collect();
        v.sort_by(|(a, _), (b, _)| display_order(*a, *b));
        v
    }
}

fn display_order(a: (u32, u32), b: (u32, u32)) -> Ordering {
    let (da, db) = (a.0 + a.1, b.0 + b.1);
    db.cmp(&da).then(b.0.cmp(&a.0))
}

fn powers(base: &Poly1, max: u32) -> Vec<Poly1> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(Poly1::constant(Rational::one()));
    for k in 1..=max as usize {
        let next = out[k - 1].mul(base);
        out.push(next);
    }
    out
}

pub(crate) fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &'a Poly2) -> Poly2 {
        self.linear_comb(rhs, &Rational::one(), &Rational::one())
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &'a Poly2) -> Poly2 {
        self.linear_comb(rhs, &Rational::one(), &-Rational::one())
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

impl From<Rational> for Poly2 {
    fn from(c: Rational) -> Self {
        Poly2::constant(c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: u32, j: u32) -> fmt::Result {
    let mut first = true;
    for (var, e) in [("x", i), ("y", j)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(var)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text form, e.g. `1/4*x^2 + 1/2*x*y + 1/4*y^2`.
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, ((i, j), c)) in self.terms_display_order().into_iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if i == 0 && j == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, i, j)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, i, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

/// Dense univariate polynomial; index is the power of the variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly1 {
    coeffs: Vec<Rational>,
}

impl Poly1 {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    fn from_sparse<I: IntoIterator<Item = (u32, Rational)>>(terms: I) -> Self {
        let mut coeffs = Vec::new();
        for (k, c) in terms {
            let k = k as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += c;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Poly1) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                out[a + b] += ca * cb;
            }
        }
        Self::new(out)
    }
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Poly1[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Centered rectangle with half-widths `m` (along `x`) and `n` (along `y`).
///
/// Certification treats it as the open region `-m < x < m, -n < y < n`;
/// range enclosures and extrema work on its closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    m: Rational,
    n: Rational,
}

impl Rect {
    pub fn new(m: Rational, n: Rational) -> Result<Self, Error> {
        if !m.is_positive() || !n.is_positive() {
            return Err(Error::InvalidParameter("box half-widths must be positive"));
        }
        Ok(Self { m, n })
    }

    /// The unit box `(-1, 1) x (-1, 1)`.
    pub fn unit() -> Self {
        Self {
            m: Rational::one(),
            n: Rational::one(),
        }
    }

    pub fn m(&self) -> &Rational {
        &self.m
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    pub fn contains_open(&self, x: &Rational, y: &Rational) -> bool {
        x.abs() < self.m && y.abs() < self.n
    }

    pub fn contains_closed(&self, x: &Rational, y: &Rational) -> bool {
        x.abs() <= self.m && y.abs() <= self.n
    }

    pub fn corners(&self) -> [(Rational, Rational); 4] {
        let (m, n) = (&self.m, &self.n);
        [
            (-m.clone(), -n.clone()),
            (m.clone(), -n.clone()),
            (-m.clone(), n.clone()),
            (m.clone(), n.clone()),
        ]
    }
}
