//! Second-order bivariate operators with constant principal symbol
//!
//! ```text
//! A = a20 dx^2 + a11 dx dy + a02 dy^2 + a10(x, y) dx + a01(x, y) dy + a00(x, y)
//! ```
//!
//! and the factorization residual `R`: `A` factors into first-order operators
//! for a simple characteristic root `w` iff `a00 = R`, where `L = dx - w dy`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::{int, Axis, Poly2, Rational};
use crate::Error;

/// Constant coefficients of the second-order part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrincipalSymbol {
    pub a20: Rational,
    pub a11: Rational,
    pub a02: Rational,
}

impl PrincipalSymbol {
    pub fn new(a20: Rational, a11: Rational, a02: Rational) -> Self {
        Self { a20, a11, a02 }
    }

    /// `dx^2 - dy^2`.
    pub fn canonical() -> Self {
        Self::new(int(1), int(0), int(-1))
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical()
    }

    /// `P2(z) = a20 z^2 + a11 z + a02`.
    pub fn char_poly_at(&self, z: &Rational) -> Rational {
        (&self.a20 * z + &self.a11) * z + &self.a02
    }

    /// `2 a20 w + a11`, the derivative of `P2` at `w`.
    pub fn char_slope_at(&self, w: &Rational) -> Rational {
        int(2) * &self.a20 * w + &self.a11
    }

    /// Builds a root record for `omega`, checking that it is a root.
    pub fn root(&self, omega: Rational) -> Result<CharRoot, Error> {
        if self.a20.is_zero() {
            return Err(Error::ZeroLeading);
        }
        if !self.char_poly_at(&omega).is_zero() {
            return Err(Error::NotARoot);
        }
        let simple = !self.char_slope_at(&omega).is_zero();
        Ok(CharRoot { omega, simple })
    }
}

/// A rational root of the characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharRoot {
    pub omega: Rational,
    pub simple: bool,
}

impl CharRoot {
    /// Sign of the reduction for the canonical symbol: `+` for `w = 1`
    /// (`s_i = c_i + d_i`), `-` for `w = -1` (`s_i = c_i - d_i`).
    pub fn sign(&self) -> Option<RootSign> {
        if self.omega == int(1) {
            Some(RootSign::Plus)
        } else if self.omega == int(-1) {
            Some(RootSign::Minus)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootSign {
    Plus,
    Minus,
}

impl RootSign {
    fn factor(self) -> Rational {
        match self {
            RootSign::Plus => int(1),
            RootSign::Minus => int(-1),
        }
    }
}

/// Second-order operator with constant principal symbol and polynomial
/// lower-order coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lpdo2 {
    pub symbol: PrincipalSymbol,
    pub a10: Poly2,
    pub a01: Poly2,
    pub a00: Poly2,
}

impl Lpdo2 {
    pub fn new(symbol: PrincipalSymbol, a10: Poly2, a01: Poly2, a00: Poly2) -> Self {
        Self { symbol, a10, a01, a00 }
    }

    /// `dx^2 - dy^2 + a10 dx + a01 dy + a00`.
    pub fn canonical(a10: Poly2, a01: Poly2, a00: Poly2) -> Self {
        Self::new(PrincipalSymbol::canonical(), a10, a01, a00)
    }

    /// The wave operator `dx^2 - dy^2`.
    pub fn wave() -> Self {
        Self::canonical(Poly2::zero(), Poly2::zero(), Poly2::zero())
    }

    /// Applies the operator to a polynomial `u`.
    pub fn apply(&self, u: &Poly2) -> Poly2 {
        let ux = u.diff(Axis::X);
        let uy = u.diff(Axis::Y);
        let s = &self.symbol;
        let second = ux
            .diff(Axis::X)
            .scale(&s.a20)
            .linear_comb(&ux.diff(Axis::Y), &Rational::one(), &s.a11)
            .linear_comb(&uy.diff(Axis::Y), &Rational::one(), &s.a02);
        let first = &(&self.a10 * &ux) + &(&self.a01 * &uy);
        &(&second + &first) + &(&self.a00 * u)
    }

    /// Largest total degree among the lower-order coefficients.
    pub fn coefficient_degree(&self) -> i64 {
        self.a10
            .total_degree()
            .max(self.a01.total_degree())
            .max(self.a00.total_degree())
    }
}

/// Both rational roots of `P2`, ascending by value.
///
/// A double root is returned twice with `simple == false`.
pub fn characteristic_roots(sym: &PrincipalSymbol) -> Result<[CharRoot; 2], Error> {
    if sym.a20.is_zero() {
        return Err(Error::ZeroLeading);
    }
    let disc = &sym.a11 * &sym.a11 - int(4) * &sym.a20 * &sym.a02;
    let sqrt = rational_sqrt(&disc).ok_or(Error::NoRationalRoots)?;
    let two_a = int(2) * &sym.a20;
    let r1 = (-&sym.a11 - &sqrt) / &two_a;
    let r2 = (-&sym.a11 + &sqrt) / &two_a;
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let simple = !sqrt.is_zero();
    Ok([
        CharRoot { omega: lo, simple },
        CharRoot { omega: hi, simple },
    ])
}

fn rational_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let num = v.numer().sqrt();
    let den = v.denom().sqrt();
    if &(&num * &num) == v.numer() && &(&den * &den) == v.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

/// Intermediate values of the residual computation.
///
/// `s` is the transport coefficient `(w a10 + a01) / (2 a20 w + a11)`,
/// `l_of_s = L{s}`, `product = s * (a20 a01 + (a20 w + a11) a10) / (2 a20 w + a11)`
/// (which is `s^2` for the canonical symbol) and `r = l_of_s + product`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualTrace {
    pub s: Poly2,
    pub l_of_s: Poly2,
    pub product: Poly2,
    pub r: Poly2,
}

fn check_root(op: &Lpdo2, root: &CharRoot) -> Result<(), Error> {
    let checked = op.symbol.root(root.omega.clone())?;
    if !checked.simple || !root.simple {
        return Err(Error::NotSimpleRoot);
    }
    Ok(())
}

/// Residual `R` for a constant principal symbol.
///
/// With `k = 2 a20 w + a11`, `N = w a10 + a01` and
/// `M = a20 a01 + (a20 w + a11) a10`, `R = L{N / k} + (N / k)(M / k)`. The
/// `L(2 a20 w + a11)` and `L(a20)` corrections vanish for constant symbols.
pub fn residual(op: &Lpdo2, root: &CharRoot) -> Result<ResidualTrace, Error> {
    check_root(op, root)?;
    let sym = &op.symbol;
    let w = &root.omega;
    let k_inv = Rational::one() / sym.char_slope_at(w);
    let n = op.a10.linear_comb(&op.a01, w, &Rational::one());
    let m = op
        .a01
        .linear_comb(&op.a10, &sym.a20, &(&sym.a20 * w + &sym.a11));
    let s = n.scale(&k_inv);
    let l_of_s = s.apply_l(w);
    let product = &s * &m.scale(&k_inv);
    let r = &l_of_s + &product;
    Ok(ResidualTrace { s, l_of_s, product, r })
}

/// Residual for the canonical symbol through `S = (a10 +/- a01) / 2` and
/// `R = L{S} + S^2`. Independent of [`residual`]; the two must agree.
pub fn residual_canonical(op: &Lpdo2, root: &CharRoot) -> Result<ResidualTrace, Error> {
    if !op.symbol.is_canonical() {
        return Err(Error::NotCanonical);
    }
    check_root(op, root)?;
    let sign = root.sign().ok_or(Error::NotARoot)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let s = op.a10.linear_comb(&op.a01, &half, &(&half * sign.factor()));
    let l_of_s = s.apply_l(&root.omega);
    let product = &s * &s;
    let r = &l_of_s + &product;
    Ok(ResidualTrace { s, l_of_s, product, r })
}

/// Degree tag of a [`ReducedCoeffs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReducedDegree {
    One,
    Two,
}

/// `s_i = c_i +/- d_i` for `a10 = sum c_i m_i`, `a01 = sum d_i m_i` over the
/// monomials `m_1..m_6 = 1, y, x, y^2, xy, x^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedCoeffs {
    s: [Rational; 6],
    pub degree: ReducedDegree,
    pub sign: RootSign,
}

const MONOMIALS: [(u32, u32); 6] = [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)];

impl ReducedCoeffs {
    /// Degree-1 coefficients `(s1, s2, s3)`.
    pub fn deg1(s1: Rational, s2: Rational, s3: Rational, sign: RootSign) -> Self {
        Self {
            s: [s1, s2, s3, Rational::zero(), Rational::zero(), Rational::zero()],
            degree: ReducedDegree::One,
            sign,
        }
    }

    /// Degree-2 coefficients `(s1, ..., s6)`.
    pub fn deg2(s: [Rational; 6], sign: RootSign) -> Self {
        Self { s, degree: ReducedDegree::Two, sign }
    }

    /// `s_i` for `i` in `1..=6`. Panics outside that range.
    pub fn s(&self, i: usize) -> &Rational {
        &self.s[i - 1]
    }

    /// The polynomial `s6 x^2 + s5 xy + s4 y^2 + s3 x + s2 y + s1`.
    pub fn as_poly(&self) -> Poly2 {
        Poly2::from_terms(
            MONOMIALS
                .iter()
                .zip(self.s.iter())
                .map(|(&(i, j), c)| (i, j, c.clone())),
        )
    }
}

pub fn reduced_coeffs(a10: &Poly2, a01: &Poly2, sign: RootSign) -> Result<ReducedCoeffs, Error> {
    let deg = a10.total_degree().max(a01.total_degree());
    if deg > 2 {
        return Err(Error::DegreeTooHigh { found: deg, max: 2 });
    }
    let combined = a10.linear_comb(a01, &Rational::one(), &sign.factor());
    let s = MONOMIALS.map(|(i, j)| combined.coeff(i, j));
    let degree = if deg <= 1 { ReducedDegree::One } else { ReducedDegree::Two };
    Ok(ReducedCoeffs { s, degree, sign })
}

/// `(s3 - s2)/2 + (s3 x + s2 y + s1)^2 / 4`.
pub fn residual_closed_deg1(s: &ReducedCoeffs) -> Poly2 {
    let lin = Poly2::affine(s.s(3).clone(), s.s(2).clone(), s.s(1).clone());
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let constant = (s.s(3) - s.s(2)) / int(2);
    &(&lin * &lin).scale(&quarter) + &Poly2::constant(constant)
}

/// `(2(s6 x - s4 y) + s5 (y - x) + s3 - s2)/2 + (s6 x^2 + s5 xy + s4 y^2 + s3 x + s2 y + s1)^2 / 4`.
pub fn residual_closed_deg2(s: &ReducedCoeffs) -> Poly2 {
    let quad = s.as_poly();
    let lin = Poly2::affine(
        int(2) * s.s(6) - s.s(5),
        s.s(5) - int(2) * s.s(4),
        s.s(3) - s.s(2),
    );
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    &lin.scale(&half) + &(&quad * &quad).scale(&quarter)
}

/// Coefficient-matching residuals of `R(1) = a00` for degree-1 coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessSystem {
    /// `[s3^2, 2 s3 s2, s2^2, s3 s1 - 2 b3, s2 s1 - 2 b2, s1^2 + 2(s3 - s2) - 4 b1]`.
    pub residuals: [Rational; 6],
    pub all_zero: bool,
}

pub fn exactness_system_deg1(op: &Lpdo2, root: &CharRoot) -> Result<ExactnessSystem, Error> {
    if !op.symbol.is_canonical() {
        return Err(Error::NotCanonical);
    }
    check_root(op, root)?;
    let deg = op.coefficient_degree();
    if deg > 1 {
        return Err(Error::DegreeTooHigh { found: deg, max: 1 });
    }
    let sign = root.sign().ok_or(Error::NotARoot)?;
    let red = reduced_coeffs(&op.a10, &op.a01, sign)?;
    let (s1, s2, s3) = (red.s(1), red.s(2), red.s(3));
    let b1 = op.a00.coeff(0, 0);
    let b2 = op.a00.coeff(0, 1);
    let b3 = op.a00.coeff(1, 0);
    let residuals = [
        s3 * s3,
        int(2) * s3 * s2,
        s2 * s2,
        s3 * s1 - int(2) * b3,
        s2 * s1 - int(2) * b2,
        s1 * s1 + int(2) * (s3 - s2) - int(4) * b1,
    ];
    let all_zero = residuals.iter().all(Zero::is_zero);
    Ok(ExactnessSystem { residuals, all_zero })
}

/// Exactly factorizable canonical operators with affine `a10`, `a01`.
///
/// For `w = -1`: `a10 = c3 x + c2 y + c1`, `a01 = c3 x + c2 y + d1`,
/// `a00 = (c1 - d1)^2 / 4`. For `w = 1` the `x`, `y` parts of `a01` are
/// negated so that `s3 = s2 = 0` under the `+` reduction, and
/// `a00 = (c1 + d1)^2 / 4`.
pub fn family_deg1(
    c3: &Rational,
    c2: &Rational,
    c1: &Rational,
    d1: &Rational,
    root: &CharRoot,
) -> Result<Lpdo2, Error> {
    let sign = root.sign().ok_or(Error::InvalidParameter("family root must be 1 or -1"))?;
    let a10 = Poly2::affine(c3.clone(), c2.clone(), c1.clone());
    let (a01, s1) = match sign {
        RootSign::Minus => (Poly2::affine(c3.clone(), c2.clone(), d1.clone()), c1 - d1),
        RootSign::Plus => (Poly2::affine(-c3, -c2, d1.clone()), c1 + d1),
    };
    let a00 = Poly2::constant(&s1 * &s1 / int(4));
    Ok(Lpdo2::canonical(a10, a01, a00))
}

/// `a00 == R` for the given root.
pub fn is_exactly_factorizable(op: &Lpdo2, root: &CharRoot) -> Result<bool, Error> {
    Ok(residual(op, root)?.r == op.a00)
}

/// `deg(a00) <= deg(R)`, with `-1` as the degree of zero.
pub fn degree_necessary_check(op: &Lpdo2, root: &CharRoot) -> Result<bool, Error> {
    Ok(op.a00.total_degree() <= residual(op, root)?.r.total_degree())
}

/// First-order operator `px dx + py dy + p0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FirstOrderFactor {
    pub px: Rational,
    pub py: Rational,
    pub p0: Poly2,
}

impl FirstOrderFactor {
    pub fn new(px: Rational, py: Rational, p0: Poly2) -> Result<Self, Error> {
        if px.is_zero() && py.is_zero() {
            return Err(Error::InvalidParameter("first-order factor needs a derivative term"));
        }
        Ok(Self { px, py, p0 })
    }

    pub fn apply(&self, u: &Poly2) -> Poly2 {
        u.diff(Axis::X)
            .linear_comb(&u.diff(Axis::Y), &self.px, &self.py)
            .linear_comb(&(&self.p0 * u), &Rational::one(), &Rational::one())
    }
}

/// The operator `f o g`, so that `(f o g) u = f(g(u))`.
///
/// With `g u = qx ux + qy uy + q0 u`, the Leibniz rule gives
/// `a10 = px q0 + p0 qx`, `a01 = py q0 + p0 qy` and
/// `a00 = px dq0/dx + py dq0/dy + p0 q0`.
pub fn compose_first_order(f: &FirstOrderFactor, g: &FirstOrderFactor) -> Result<Lpdo2, Error> {
    let symbol = PrincipalSymbol::new(
        &f.px * &g.px,
        &f.px * &g.py + &f.py * &g.px,
        &f.py * &g.py,
    );
    if symbol.a20.is_zero() && symbol.a11.is_zero() && symbol.a02.is_zero() {
        return Err(Error::NotSecondOrder);
    }
    let one = Rational::one();
    let a10 = g.p0.linear_comb(&f.p0, &f.px, &g.px);
    let a01 = g.p0.linear_comb(&f.p0, &f.py, &g.py);
    let a00 = g
        .p0
        .diff(Axis::X)
        .linear_comb(&g.p0.diff(Axis::Y), &f.px, &f.py)
        .linear_comb(&(&f.p0 * &g.p0), &one, &one);
    Ok(Lpdo2::new(symbol, a10, a01, a00))
}

/// Searches `(dx + dy + p)(dx - dy + q)` and then `(dx - dy + p)(dx + dy + q)`
/// for a factorization of a canonical operator, solving `p`, `q` from
/// `a10`, `a01` and accepting only if the composition reproduces `op`.
pub fn reconstruct_factors(op: &Lpdo2) -> Option<(FirstOrderFactor, FirstOrderFactor)> {
    if !op.symbol.is_canonical() {
        return None;
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let plus = op.a10.linear_comb(&op.a01, &half, &half);
    let minus = op.a10.linear_comb(&op.a01, &half, &-&half);
    let orderings: [(Rational, Poly2, Rational, Poly2); 2] = [
        // (dx + dy + p)(dx - dy + q): a10 = p + q, a01 = q - p.
        (int(1), minus.clone(), int(-1), plus.clone()),
        // (dx - dy + p)(dx + dy + q): a10 = p + q, a01 = p - q.
        (int(-1), plus, int(1), minus),
    ];
    orderings.into_iter().find_map(|(fy, p, gy, q)| {
        let f = FirstOrderFactor::new(int(1), fy, p).ok()?;
        let g = FirstOrderFactor::new(int(1), gy, q).ok()?;
        let composed = compose_first_order(&f, &g).ok()?;
        (composed == *op).then_some((f, g))
    })
}

/// All reduced coefficients `s1..s6` as a vector, for diagnostics.
pub fn reduced_values(s: &ReducedCoeffs) -> Vec<Rational> {
    match s.degree {
        ReducedDegree::One => s.s[..3].to_vec(),
        ReducedDegree::Two => s.s.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn canon_root(w: i64) -> CharRoot {
        PrincipalSymbol::canonical().root(int(w)).unwrap()
    }

    #[test]
    fn roots_of_canonical_symbol() {
        let [a, b] = characteristic_roots(&PrincipalSymbol::canonical()).unwrap();
        assert_eq!((a.omega, b.omega), (int(-1), int(1)));
        assert!(a.simple && b.simple);
    }

    #[test]
    fn roots_errors_and_factoring() {
        let elliptic = PrincipalSymbol::new(int(1), int(0), int(1));
        assert_eq!(characteristic_roots(&elliptic), Err(Error::NoRationalRoots));
        let irrational = PrincipalSymbol::new(int(1), int(0), int(-2));
        assert_eq!(characteristic_roots(&irrational), Err(Error::NoRationalRoots));
        let zero = PrincipalSymbol::new(int(0), int(1), int(1));
        assert_eq!(characteristic_roots(&zero), Err(Error::ZeroLeading));
        let sym = PrincipalSymbol::new(int(1), int(-3), int(2));
        let [a, b] = characteristic_roots(&sym).unwrap();
        assert_eq!((a.omega, b.omega), (int(1), int(2)));
        assert!(a.simple && b.simple);
        let sym = PrincipalSymbol::new(int(4), int(0), rat(-1, 4));
        let [a, b] = characteristic_roots(&sym).unwrap();
        assert_eq!((a.omega, b.omega), (rat(-1, 4), rat(1, 4)));
    }

    #[test]
    fn double_root_is_not_simple() {
        let sym = PrincipalSymbol::new(int(1), int(-2), int(1));
        let [a, b] = characteristic_roots(&sym).unwrap();
        assert_eq!(a, b);
        assert!(!a.simple);
        let op = Lpdo2::new(sym, Poly2::x(), Poly2::zero(), Poly2::zero());
        assert_eq!(residual(&op, &a), Err(Error::NotSimpleRoot));
        assert_eq!(is_exactly_factorizable(&op, &a), Err(Error::NotSimpleRoot));
    }

    #[test]
    fn residual_examples() {
        for w in [1, -1] {
            assert!(residual(&Lpdo2::wave(), &canon_root(w)).unwrap().r.is_zero());
        }
        let op = Lpdo2::canonical(
            Poly2::affine(int(2), int(3), int(5)),
            Poly2::affine(int(2), int(3), int(1)),
            Poly2::zero(),
        );
        let tr = residual(&op, &canon_root(-1)).unwrap();
        assert_eq!(tr.s, Poly2::constant(int(2)));
        assert!(tr.l_of_s.is_zero());
        assert_eq!(tr.r, Poly2::constant(int(4)));

        let op = Lpdo2::canonical(Poly2::x(), Poly2::y(), Poly2::zero());
        let sum = &Poly2::x() + &Poly2::y();
        let expected = (&sum * &sum).scale(&rat(1, 4));
        assert_eq!(residual(&op, &canon_root(1)).unwrap().r, expected);
    }

    #[test]
    fn residual_rejects_non_roots() {
        let fake = CharRoot { omega: int(2), simple: true };
        assert_eq!(residual(&Lpdo2::wave(), &fake), Err(Error::NotARoot));
    }

    #[test]
    fn reduced_coeffs_examples() {
        let r = reduced_coeffs(&Poly2::x(), &Poly2::y(), RootSign::Plus).unwrap();
        assert_eq!((r.s(1), r.s(2), r.s(3)), (&int(0), &int(1), &int(1)));
        assert_eq!(r.degree, ReducedDegree::One);
        let p = Poly2::from_terms([(2, 0, int(3)), (0, 1, rat(1, 2))]);
        let r = reduced_coeffs(&p, &p, RootSign::Minus).unwrap();
        assert!(reduced_values(&r).iter().all(Zero::is_zero));
        assert_eq!(r.degree, ReducedDegree::Two);
        let r = reduced_coeffs(
            &Poly2::affine(int(2), int(3), int(5)),
            &Poly2::affine(int(2), int(3), int(1)),
            RootSign::Minus,
        )
        .unwrap();
        assert_eq!(reduced_values(&r), [int(4), int(0), int(0)]);
        let cubic = Poly2::monomial(int(1), 3, 0);
        assert_eq!(
            reduced_coeffs(&cubic, &Poly2::zero(), RootSign::Plus),
            Err(Error::DegreeTooHigh { found: 3, max: 2 })
        );
    }

    #[test]
    fn closed_deg1_examples() {
        let z = ReducedCoeffs::deg1(int(0), int(0), int(0), RootSign::Plus);
        assert!(residual_closed_deg1(&z).is_zero());
        let s = ReducedCoeffs::deg1(int(4), int(0), int(0), RootSign::Minus);
        assert_eq!(residual_closed_deg1(&s), Poly2::constant(int(4)));
        let s = ReducedCoeffs::deg1(int(0), int(1), int(1), RootSign::Plus);
        let sum = &Poly2::x() + &Poly2::y();
        assert_eq!(residual_closed_deg1(&s), (&sum * &sum).scale(&rat(1, 4)));
    }

    #[test]
    fn closed_deg2_examples() {
        let zero: [Rational; 6] = core::array::from_fn(|_| int(0));
        assert!(residual_closed_deg2(&ReducedCoeffs::deg2(zero.clone(), RootSign::Plus)).is_zero());
        let mut s = zero;
        s[5] = int(1);
        let expected = Poly2::from_terms([(1, 0, int(1)), (4, 0, rat(1, 4))]);
        assert_eq!(residual_closed_deg2(&ReducedCoeffs::deg2(s, RootSign::Plus)), expected);
    }

    #[test]
    fn exactness_system_examples() {
        let sys = exactness_system_deg1(&Lpdo2::wave(), &canon_root(1)).unwrap();
        assert!(sys.all_zero);
        let op = Lpdo2::canonical(
            Poly2::affine(int(2), int(3), int(5)),
            Poly2::affine(int(2), int(3), int(1)),
            Poly2::constant(int(4)),
        );
        let sys = exactness_system_deg1(&op, &canon_root(-1)).unwrap();
        assert!(sys.all_zero);
        let op = Lpdo2::canonical(Poly2::zero(), Poly2::zero(), Poly2::x());
        let sys = exactness_system_deg1(&op, &canon_root(1)).unwrap();
        assert_eq!(sys.residuals[3], int(-2));
        assert!(!sys.all_zero);
        let quad = Lpdo2::canonical(Poly2::monomial(int(1), 2, 0), Poly2::zero(), Poly2::zero());
        assert!(matches!(
            exactness_system_deg1(&quad, &canon_root(1)),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn family_examples() {
        let z = int(0);
        let op = family_deg1(&z, &z, &z, &z, &canon_root(-1)).unwrap();
        assert_eq!(op, Lpdo2::wave());
        let op = family_deg1(&int(2), &int(3), &int(5), &int(1), &canon_root(-1)).unwrap();
        assert_eq!(op.a00, Poly2::constant(int(4)));
        assert_eq!(op.a10, Poly2::affine(int(2), int(3), int(5)));
        assert_eq!(op.a01, Poly2::affine(int(2), int(3), int(1)));
        let op = family_deg1(&int(1), &int(0), &int(2), &int(-2), &canon_root(1)).unwrap();
        assert_eq!(op.a10, Poly2::affine(int(1), int(0), int(2)));
        assert_eq!(op.a01, Poly2::affine(int(-1), int(0), int(-2)));
        assert!(op.a00.is_zero());
        assert!(is_exactly_factorizable(&op, &canon_root(1)).unwrap());
        let bad = CharRoot { omega: int(3), simple: true };
        assert!(family_deg1(&z, &z, &z, &z, &bad).is_err());
    }

    #[test]
    fn exact_factorizability_examples() {
        for w in [1, -1] {
            assert!(is_exactly_factorizable(&Lpdo2::wave(), &canon_root(w)).unwrap());
        }
        let op = Lpdo2::canonical(Poly2::zero(), Poly2::zero(), Poly2::constant(int(1)));
        for w in [1, -1] {
            assert!(!is_exactly_factorizable(&op, &canon_root(w)).unwrap());
        }
    }

    #[test]
    fn degree_check_examples() {
        assert!(degree_necessary_check(&Lpdo2::wave(), &canon_root(1)).unwrap());
        let x2 = Poly2::monomial(int(1), 2, 0);
        let op = Lpdo2::canonical(Poly2::x(), Poly2::zero(), x2);
        let r = residual(&op, &canon_root(1)).unwrap().r;
        assert_eq!(r, Poly2::from_terms([(0, 0, rat(1, 2)), (2, 0, rat(1, 4))]));
        assert!(degree_necessary_check(&op, &canon_root(1)).unwrap());
        let op = Lpdo2::canonical(Poly2::x(), Poly2::zero(), Poly2::monomial(int(1), 3, 0));
        assert!(!degree_necessary_check(&op, &canon_root(1)).unwrap());
    }

    fn factor(px: i64, py: i64, p0: Poly2) -> FirstOrderFactor {
        FirstOrderFactor::new(int(px), int(py), p0).unwrap()
    }

    #[test]
    fn compose_examples() {
        let op = compose_first_order(&factor(1, 1, Poly2::zero()), &factor(1, -1, Poly2::zero()))
            .unwrap();
        assert_eq!(op, Lpdo2::wave());

        let (p, q) = (rat(3, 2), int(-5));
        let op = compose_first_order(
            &factor(1, 1, Poly2::constant(p.clone())),
            &factor(1, -1, Poly2::constant(q.clone())),
        )
        .unwrap();
        assert_eq!(op.a10, Poly2::constant(&p + &q));
        assert_eq!(op.a01, Poly2::constant(&q - &p));
        assert_eq!(op.a00, Poly2::constant(&p * &q));

        let op = compose_first_order(&factor(1, 1, Poly2::zero()), &factor(1, -1, Poly2::x()))
            .unwrap();
        assert_eq!(op.symbol, PrincipalSymbol::canonical());
        // (dx + dy)(ux - uy + x u) = uxx - uyy + x ux + x uy + u.
        assert_eq!(op.a10, Poly2::x());
        assert_eq!(op.a01, Poly2::x());
        assert_eq!(op.a00, Poly2::constant(int(1)));
    }

    #[test]
    fn compose_degenerate_is_rejected() {
        // dx o dy has a20 = a02 = 0 but a11 = 1; only an all-zero symbol fails.
        assert!(compose_first_order(&factor(1, 0, Poly2::zero()), &factor(0, 1, Poly2::zero())).is_ok());
        assert!(FirstOrderFactor::new(int(0), int(0), Poly2::x()).is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let (f, g) = reconstruct_factors(&Lpdo2::wave()).unwrap();
        assert_eq!(f, factor(1, 1, Poly2::zero()));
        assert_eq!(g, factor(1, -1, Poly2::zero()));

        let op = Lpdo2::canonical(
            Poly2::constant(int(3)),
            Poly2::constant(int(1)),
            Poly2::constant(int(2)),
        );
        let (f, g) = reconstruct_factors(&op).unwrap();
        assert_eq!(f.p0, Poly2::constant(int(1)));
        assert_eq!(g.p0, Poly2::constant(int(2)));

        let op = Lpdo2::canonical(Poly2::zero(), Poly2::zero(), Poly2::constant(int(1)));
        assert!(reconstruct_factors(&op).is_none());
    }

    /// The composition `(dx + dy)(dx - dy + x)` factors by construction, yet
    /// `a00 = R` fails for both roots: the residual test and the explicit
    /// factor search disagree on this operator.
    #[test]
    fn composition_and_residual_diverge() {
        let op = compose_first_order(&factor(1, 1, Poly2::zero()), &factor(1, -1, Poly2::x()))
            .unwrap();
        assert!(reconstruct_factors(&op).is_some());
        for w in [1, -1] {
            assert!(!is_exactly_factorizable(&op, &canon_root(w)).unwrap());
        }
    }
}
