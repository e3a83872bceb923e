//! Deciding `|D(x, y)| < eps` on the open box `(-m, m) x (-n, n)`.
//!
//! Quadratic `D` is decided exactly from its extrema on the closed box plus a
//! record of whether each extreme value is reached at an interior point:
//! a supremum equal to `eps` is harmless when it is only approached at the
//! excluded boundary. Higher degrees go through Bernstein subdivision, which
//! can certify, refute with an exactly evaluated interior point, or give up
//! with a bound on the remaining gap.
//!
//! The module also evaluates the quantifier-free formulas for
//! `forall x in (-1, 1): |a x^2 + b x + c| < 4`, the lifted sufficient
//! condition for affine coefficients, and the coefficient-wise triangle bound.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bernstein::{enclosure_on_cell, Cell};
use crate::grid::{GridSpan, ScaledGrid};
use crate::lpdo::{
    characteristic_roots, exactness_system_deg1, reduced_coeffs, residual, residual_closed_deg1,
    CharRoot, ExactnessSystem, Lpdo2, ReducedCoeffs, ResidualTrace, RootSign,
};
use crate::poly::{int, Axis, Poly1, Poly2, Rational, Rect};
use crate::Error;

/// `a x^2 + b x + c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnivQuad {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl UnivQuad {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Self { a, b, c }
    }

    pub fn as_poly(&self) -> Poly1 {
        Poly1::new(alloc::vec![self.c.clone(), self.b.clone(), self.a.clone()])
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        (&self.a * x + &self.b) * x + &self.c
    }
}

/// The four printed quantifier-free formulas for `|a x^2 + b x + c| < 4`
/// on `(-1, 1)`, each valid under its own sign assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QfFormula {
    /// Endpoint conjuncts plus the vertex disjunction; assumes `a < 0`.
    F15,
    /// Three-case disjunction by vertex position; assumes `a < 0`.
    F16,
    /// Endpoint conjuncts only; assumes `a = 0`, `b != 0`.
    F17,
    /// `F15` with the disjunct `a = 0` added; assumes `a <= 0`.
    F18,
}

/// Evaluates one of the printed formulas exactly, as written.
pub fn paper_qf_predicate(formula: QfFormula, q: &UnivQuad) -> Result<bool, Error> {
    let UnivQuad { a, b, c } = q;
    let zero = Rational::zero();
    let four = int(4);
    let two_a = int(2) * a;
    let disc_term = int(4) * a * c - b * b - int(16) * a;
    let endpoints = |a: &Rational| {
        c - b + a + &four >= zero
            && c - b + a - &four <= zero
            && c + b + a + &four >= zero
            && c + b + a - &four <= zero
    };
    match formula {
        QfFormula::F15 => {
            if !a.is_negative() {
                return Err(Error::PreconditionViolated("formula 15 needs a < 0"));
            }
            Ok(endpoints(a) && (b - &two_a <= zero || b + &two_a >= zero || disc_term > zero))
        }
        QfFormula::F16 => {
            if !a.is_negative() {
                return Err(Error::PreconditionViolated("formula 16 needs a < 0"));
            }
            let case1 = &two_a - b >= zero && a + b + c + &four >= zero && a - b + c - &four <= zero;
            let case2 = &two_a + b >= zero && a - b + c + &four >= zero && a + b + c - &four <= zero;
            let case3 = &two_a - b < zero
                && &two_a + b < zero
                && disc_term > zero
                && a - b + c + &four >= zero
                && a + b + c + &four >= zero;
            Ok(case1 || case2 || case3)
        }
        QfFormula::F17 => {
            if !a.is_zero() || b.is_zero() {
                return Err(Error::PreconditionViolated("formula 17 needs a = 0 and b != 0"));
            }
            Ok(endpoints(&zero))
        }
        QfFormula::F18 => {
            if a.is_positive() {
                return Err(Error::PreconditionViolated("formula 18 needs a <= 0"));
            }
            Ok(endpoints(a)
                && (b - &two_a <= zero || b + &two_a >= zero || disc_term > zero || a.is_zero()))
        }
    }
}

/// Extrema of a univariate polynomial of degree at most 2 on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalExtrema {
    pub min: Rational,
    pub max: Rational,
    /// Some point of `(lo, hi)` attains `min`.
    pub min_interior: bool,
    /// Some point of `(lo, hi)` attains `max`.
    pub max_interior: bool,
}

/// Candidate extremal points of `p` on `[lo, hi]`: the endpoints, the vertex
/// when it lies strictly inside, and the midpoint for constants.
fn interval_candidates(p: &Poly1, lo: &Rational, hi: &Rational) -> Result<Vec<Rational>, Error> {
    let mut pts = alloc::vec![lo.clone(), hi.clone()];
    match p.degree() {
        d if d > 2 => return Err(Error::DegreeTooHigh { found: d, max: 2 }),
        2 => {
            let vertex = -p.coeff(1) / (int(2) * p.coeff(2));
            if lo < &vertex && &vertex < hi {
                pts.push(vertex);
            }
        }
        d if d <= 0 => pts.push((lo + hi) / int(2)),
        _ => {}
    }
    Ok(pts)
}

pub fn interval_extrema(p: &Poly1, lo: &Rational, hi: &Rational) -> Result<IntervalExtrema, Error> {
    let pts = interval_candidates(p, lo, hi)?;
    let vals: Vec<(Rational, bool)> = pts
        .iter()
        .map(|t| (p.eval(t), lo < t && t < hi))
        .collect();
    let min = vals.iter().map(|(v, _)| v).min().cloned().unwrap_or_default();
    let max = vals.iter().map(|(v, _)| v).max().cloned().unwrap_or_default();
    let min_interior = vals.iter().any(|(v, inner)| *inner && *v == min);
    let max_interior = vals.iter().any(|(v, inner)| *inner && *v == max);
    Ok(IntervalExtrema { min, max, min_interior, max_interior })
}

/// `sup <= eps` with equality allowed only if it is not reached inside.
fn upper_ok(max: &Rational, max_interior: bool, eps: &Rational) -> bool {
    max < eps || (max == eps && !max_interior)
}

fn lower_ok(min: &Rational, min_interior: bool, eps: &Rational) -> bool {
    let neg = -eps;
    min > &neg || (min == &neg && !min_interior)
}

/// Exact truth of `forall x in (-m, m): |q(x)| < eps`.
pub fn quad_interval_decision(q: &UnivQuad, m: &Rational, eps: &Rational) -> bool {
    let ext = interval_extrema(&q.as_poly(), &-m, m).expect("quadratic input");
    upper_ok(&ext.max, ext.max_interior, eps) && lower_ok(&ext.min, ext.min_interior, eps)
}

/// `a = -s3^2`, `b = 4 b3 - 2 s1 s3`, `c = 4 b1 - 2 s3 - s1^2`.
pub fn substitute_reduced(b1: &Rational, b3: &Rational, s1: &Rational, s3: &Rational) -> UnivQuad {
    UnivQuad::new(
        -(s3 * s3),
        int(4) * b3 - int(2) * s1 * s3,
        int(4) * b1 - int(2) * s3 - s1 * s1,
    )
}

/// Formula 18 on the substituted quadratic, a test for
/// `forall x in (-1, 1): |4 b3 x + 4 b1 - 2 s3 - (s3 x + s1)^2| < 4`.
pub fn psi_sufficient(b1: &Rational, b3: &Rational, s1: &Rational, s3: &Rational) -> bool {
    paper_qf_predicate(QfFormula::F18, &substitute_reduced(b1, b3, s1, s3))
        .expect("a = -s3^2 is never positive")
}

/// The six free parameters of the affine problem: `a00 = b3 x + b2 y + b1`
/// and the reduced coefficients `s1, s2, s3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedProblem {
    pub b1: Rational,
    pub b2: Rational,
    pub b3: Rational,
    pub s1: Rational,
    pub s2: Rational,
    pub s3: Rational,
}

impl ReducedProblem {
    /// `a00 - R(1)` with `R(1) = (s3 - s2)/2 + (s3 x + s2 y + s1)^2 / 4`.
    pub fn difference(&self) -> Poly2 {
        let a00 = Poly2::affine(self.b3.clone(), self.b2.clone(), self.b1.clone());
        let s = ReducedCoeffs::deg1(self.s1.clone(), self.s2.clone(), self.s3.clone(), RootSign::Plus);
        &a00 - &residual_closed_deg1(&s)
    }
}

/// `b2 = 0 and s2 = 0 and psi`. True implies `|a00 - R(1)| < 1` on the open
/// unit box.
pub fn phi_sufficient_special(p: &ReducedProblem) -> bool {
    p.b2.is_zero() && p.s2.is_zero() && psi_sufficient(&p.b1, &p.b3, &p.s1, &p.s3)
}

/// `sum |coef_ij| m^i n^j < eps`.
pub fn triangle_sufficient(d: &Poly2, rect: &Rect, eps: &Rational) -> bool {
    &d.abs_sum_bound(rect.m(), rect.n()) < eps
}

/// Exact extrema of a quadratic on a closed box.
///
/// `min_attained` / `max_attained` list the candidate points that reach the
/// extreme values, sorted. When an extreme value is reached anywhere in the
/// open box, at least one listed point is interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extrema {
    pub min_val: Rational,
    pub max_val: Rational,
    pub min_attained: Vec<(Rational, Rational)>,
    pub max_attained: Vec<(Rational, Rational)>,
    pub interior_min_attained: bool,
    pub interior_max_attained: bool,
}

/// Points of the line `alpha x + beta y = gamma` inside the closed box,
/// as a segment `(start, end)`.
fn clip_line(
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    rect: &Rect,
) -> Option<((Rational, Rational), (Rational, Rational))> {
    let (m, n) = (rect.m(), rect.n());
    if beta.is_zero() {
        let x = gamma / alpha;
        return (x.abs() <= *m).then(|| ((x.clone(), -n.clone()), (x, n.clone())));
    }
    // y = (gamma - alpha x) / beta, need |x| <= m and |y| <= n.
    let y_at = |x: &Rational| (gamma - alpha * x) / beta;
    let (mut lo, mut hi) = (-m.clone(), m.clone());
    if !alpha.is_zero() {
        let xa = (gamma - beta * n) / alpha;
        let xb = (gamma + beta * n) / alpha;
        let (l, h) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        lo = lo.max(l);
        hi = hi.min(h);
    } else if y_at(&Rational::zero()).abs() > *n {
        return None;
    }
    (lo <= hi).then(|| {
        let (ylo, yhi) = (y_at(&lo), y_at(&hi));
        ((lo, ylo), (hi, yhi))
    })
}

/// Exact minimum and maximum of `d` (total degree at most 2) on the closed box.
pub fn quad_box_extrema(d: &Poly2, rect: &Rect) -> Result<Extrema, Error> {
    let deg = d.total_degree();
    if deg > 2 {
        return Err(Error::DegreeTooHigh { found: deg, max: 2 });
    }
    let (m, n) = (rect.m(), rect.n());
    let mut cands: BTreeSet<(Rational, Rational)> = rect.corners().into_iter().collect();

    for sx in [-m.clone(), m.clone()] {
        for y in interval_candidates(&d.restrict(Axis::X, &sx), &-n, n)? {
            cands.insert((sx.clone(), y));
        }
    }
    for sy in [-n.clone(), n.clone()] {
        for x in interval_candidates(&d.restrict(Axis::Y, &sy), &-m, m)? {
            cands.insert((x, sy.clone()));
        }
    }

    // Gradient: [2A B; B 2C] (x, y) = -(Dx, Ey).
    let two = int(2);
    let (a, b, c) = (d.coeff(2, 0), d.coeff(1, 1), d.coeff(0, 2));
    let (dx, ey) = (d.coeff(1, 0), d.coeff(0, 1));
    let det = int(4) * &a * &c - &b * &b;
    if !det.is_zero() {
        let x = (&b * &ey - &two * &c * &dx) / &det;
        let y = (&b * &dx - &two * &a * &ey) / &det;
        if rect.contains_closed(&x, &y) {
            cands.insert((x, y));
        }
    } else if a.is_zero() && b.is_zero() && c.is_zero() {
        if dx.is_zero() && ey.is_zero() {
            cands.insert((Rational::zero(), Rational::zero()));
        }
    } else {
        // Rank one: the stationary set is empty or a line on which d is constant.
        let (alpha, beta, gamma) = if !a.is_zero() || !b.is_zero() {
            (&two * &a, b.clone(), -dx.clone())
        } else {
            (b.clone(), &two * &c, -ey.clone())
        };
        let on_line = if beta.is_zero() {
            (&gamma / &alpha, Rational::zero())
        } else {
            (Rational::zero(), &gamma / &beta)
        };
        let grad_zero = d.diff(Axis::X).eval(&on_line.0, &on_line.1).is_zero()
            && d.diff(Axis::Y).eval(&on_line.0, &on_line.1).is_zero();
        if grad_zero {
            if let Some((p, q)) = clip_line(&alpha, &beta, &gamma, rect) {
                let mid = ((&p.0 + &q.0) / &two, (&p.1 + &q.1) / &two);
                cands.insert(p);
                cands.insert(q);
                cands.insert(mid);
            }
        }
    }

    let valued: Vec<((Rational, Rational), Rational)> = cands
        .into_iter()
        .map(|pt| {
            let v = d.eval(&pt.0, &pt.1);
            (pt, v)
        })
        .collect();
    let min_val = valued.iter().map(|(_, v)| v).min().cloned().unwrap_or_default();
    let max_val = valued.iter().map(|(_, v)| v).max().cloned().unwrap_or_default();
    let pick = |target: &Rational| -> Vec<(Rational, Rational)> {
        valued
            .iter()
            .filter(|(_, v)| v == target)
            .map(|(p, _)| p.clone())
            .collect()
    };
    let min_attained = pick(&min_val);
    let max_attained = pick(&max_val);
    let inside = |pts: &[(Rational, Rational)]| pts.iter().any(|(x, y)| rect.contains_open(x, y));
    Ok(Extrema {
        interior_min_attained: inside(&min_attained),
        interior_max_attained: inside(&max_attained),
        min_val,
        max_val,
        min_attained,
        max_attained,
    })
}

/// Input to the box certifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertRequest {
    pub d: Poly2,
    pub rect: Rect,
    eps: Rational,
    pub max_depth: u32,
}

impl CertRequest {
    pub fn new(d: Poly2, rect: Rect, eps: Rational, max_depth: u32) -> Result<Self, Error> {
        if !eps.is_positive() {
            return Err(Error::InvalidParameter("eps must be positive"));
        }
        Ok(Self { d, rect, eps, max_depth })
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }
}

/// Outcome of certifying `|D| < eps` on the open box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Holds; `margin` is `eps - sup |D|` (exact path) or a lower bound on it.
    Inside { margin: Rational },
    /// Fails at the interior point `(x, y)`, where `D = value` and `|value| >= eps`.
    Violated { x: Rational, y: Rational, value: Rational },
    /// Undecided; `gap` bounds how far leftover enclosures reach past `eps`.
    Unknown { gap: Rational },
}

impl Certificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, Certificate::Inside { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Certificate::Violated { .. })
    }
}

/// Moves `p` toward the center until `good` holds; `good` must hold near `p`.
fn pull_inside(
    d: &Poly2,
    p: &(Rational, Rational),
    good: impl Fn(&Rational) -> bool,
) -> (Rational, Rational, Rational) {
    let mut t = Rational::new(BigInt::one(), BigInt::from(2));
    loop {
        let keep = Rational::one() - &t;
        let (x, y) = (&p.0 * &keep, &p.1 * &keep);
        let v = d.eval(&x, &y);
        if good(&v) {
            return (x, y, v);
        }
        t /= int(2);
    }
}

/// Decides `|D| < eps` on the open box. Quadratics are decided exactly;
/// higher degrees go to [`bernstein_certify`].
pub fn certify_open_box(req: &CertRequest) -> Certificate {
    if req.d.total_degree() > 2 {
        return bernstein_certify(req);
    }
    let ext = quad_box_extrema(&req.d, &req.rect).expect("degree checked");
    let eps = &req.eps;
    let max_ok = upper_ok(&ext.max_val, ext.interior_max_attained, eps);
    let min_ok = lower_ok(&ext.min_val, ext.interior_min_attained, eps);
    if max_ok && min_ok {
        let sup = (&ext.max_val).max(&-&ext.min_val).clone();
        return Certificate::Inside { margin: eps - sup };
    }
    let (points, interior, good): (_, _, &dyn Fn(&Rational) -> bool) = if !max_ok {
        (&ext.max_attained, ext.interior_max_attained, &|v: &Rational| v >= eps)
    } else {
        (&ext.min_attained, ext.interior_min_attained, &|v: &Rational| v <= &-eps)
    };
    let value = if !max_ok { &ext.max_val } else { &ext.min_val };
    if interior {
        let (x, y) = points
            .iter()
            .find(|(x, y)| req.rect.contains_open(x, y))
            .cloned()
            .expect("interior attainment recorded");
        return Certificate::Violated { x, y, value: value.clone() };
    }
    // Strict violation on the boundary: by continuity it persists slightly inside.
    let (x, y, value) = pull_inside(&req.d, &points[0], good);
    Certificate::Violated { x, y, value }
}

/// Certifies `|D| < eps` by Bernstein enclosures on a breadth-first
/// subdivision of the closed box.
///
/// Cells whose enclosure lies in `(-eps, eps)` are settled; otherwise the cell
/// center is evaluated exactly and a value with `|D| >= eps` refutes. Cells
/// still open at `max_depth` make the result `Unknown`. Each level is
/// processed in a fixed order, so the outcome depends only on the input.
pub fn bernstein_certify(req: &CertRequest) -> Certificate {
    let eps = &req.eps;
    let neg = -eps;
    let mut level = alloc::vec![Cell::from_rect(&req.rect)];
    let mut worst_bound = Rational::zero();
    let mut gap: Option<Rational> = None;
    for depth in 0..=req.max_depth {
        let mut next = Vec::new();
        for cell in &level {
            let enc = enclosure_on_cell(&req.d, cell);
            if neg < enc.lo && enc.hi < *eps {
                worst_bound = worst_bound.max(enc.hi.clone()).max(-enc.lo.clone());
                continue;
            }
            let (cx, cy) = cell.center();
            if req.rect.contains_open(&cx, &cy) {
                let v = req.d.eval(&cx, &cy);
                if &v.abs() >= eps {
                    return Certificate::Violated { x: cx, y: cy, value: v };
                }
            }
            if depth < req.max_depth {
                let (a, b) = cell.bisect();
                next.push(a);
                next.push(b);
            } else {
                let over = (&enc.hi - eps).max(&neg - &enc.lo);
                gap = Some(gap.map_or(over.clone(), |g| g.max(over)));
            }
        }
        level = next;
    }
    match gap {
        Some(gap) => Certificate::Unknown { gap },
        None => Certificate::Inside { margin: eps - worst_bound },
    }
}

/// An interior point with `|D| >= eps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: Rational,
    pub y: Rational,
    pub value: Rational,
}

/// Exact scan of the interior grid `(m i / k, n j / k)`, `|i|, |j| < k`, in
/// row-major order (`y` outer, `x` inner, ascending); the first point with
/// `|D| >= eps` is returned.
pub fn sample_falsify(req: &CertRequest, grid_k: u32) -> Result<Option<Witness>, Error> {
    if grid_k < 2 {
        return Err(Error::InvalidParameter("grid resolution must be at least 2"));
    }
    let grid = ScaledGrid::new(&req.d, &req.rect, i64::from(grid_k));
    Ok(grid
        .first_at_least(&req.eps, GridSpan::Interior)
        .map(|(i, j, value)| {
            let (x, y) = grid.point(i, j);
            Witness { x, y, value }
        }))
}

/// Box, tolerance and subdivision depth shared by every root of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportParams {
    pub rect: Rect,
    pub eps: Rational,
    pub max_depth: u32,
}

impl ReportParams {
    pub fn new(rect: Rect, eps: Rational, max_depth: u32) -> Result<Self, Error> {
        if !eps.is_positive() {
            return Err(Error::InvalidParameter("eps must be positive"));
        }
        Ok(Self { rect, eps, max_depth })
    }

    /// `eps = m = n = 1`, the setting of the lifted sufficient condition.
    pub fn is_unit(&self) -> bool {
        self.eps.is_one() && self.rect.m().is_one() && self.rect.n().is_one()
    }
}

/// Per-root part of an approximate factorization report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub root: CharRoot,
    pub trace: ResidualTrace,
    pub exact: bool,
    /// Coefficient-matching residuals, for the canonical affine case only.
    pub exactness: Option<ExactnessSystem>,
    /// `a00 - R`.
    pub difference: Poly2,
    pub certificate: Certificate,
    /// `None` when the lifted condition does not apply.
    pub theorem1: Option<bool>,
    pub triangle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub params: ReportParams,
    /// One entry per root, ascending by `omega`.
    pub roots: Vec<RootReport>,
}

/// Reduced problem for a canonical operator with affine coefficients.
pub fn reduced_problem(op: &Lpdo2, root: &CharRoot) -> Option<ReducedProblem> {
    if !op.symbol.is_canonical() || op.coefficient_degree() > 1 {
        return None;
    }
    let s = reduced_coeffs(&op.a10, &op.a01, root.sign()?).ok()?;
    Some(ReducedProblem {
        b1: op.a00.coeff(0, 0),
        b2: op.a00.coeff(0, 1),
        b3: op.a00.coeff(1, 0),
        s1: s.s(1).clone(),
        s2: s.s(2).clone(),
        s3: s.s(3).clone(),
    })
}

/// Report for one root.
pub fn root_report(op: &Lpdo2, root: &CharRoot, params: &ReportParams) -> Result<RootReport, Error> {
    let trace = residual(op, root)?;
    let exact = trace.r == op.a00;
    let exactness = if op.symbol.is_canonical() && op.coefficient_degree() <= 1 {
        Some(exactness_system_deg1(op, root)?)
    } else {
        None
    };
    let difference = &op.a00 - &trace.r;
    let req = CertRequest::new(difference.clone(), params.rect.clone(), params.eps.clone(), params.max_depth)?;
    let certificate = certify_open_box(&req);
    let theorem1 = if params.is_unit() {
        reduced_problem(op, root).map(|p| phi_sufficient_special(&p))
    } else {
        None
    };
    let triangle = triangle_sufficient(&difference, &params.rect, &params.eps);
    Ok(RootReport {
        root: root.clone(),
        trace,
        exact,
        exactness,
        difference,
        certificate,
        theorem1,
        triangle,
    })
}

/// Residual, exactness, certificate and sufficient-condition verdicts for
/// each characteristic root.
pub fn approx_factor_report(op: &Lpdo2, params: &ReportParams) -> Result<Report, Error> {
    let roots = characteristic_roots(&op.symbol)?;
    let roots = roots
        .iter()
        .map(|root| root_report(op, root, params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report { params: params.clone(), roots })
}
