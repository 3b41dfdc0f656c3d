//! Exact arithmetic on the upper half-plane.
//!
//! Points of the upper half-plane are carried as `x + i*sqrt(s)` with `x` and
//! `s` rational. Every vertex of a geodesic arrangement for a fixed
//! discriminant has this shape, because the geodesic `a|t|^2 + b Re(t) + c = 0`
//! is the graph `s = -(a x^2 + b x + c) / a` over the real axis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{MlpError, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn big_to_rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

pub fn validate_discriminant(disc: i64) -> Result<()> {
    if disc <= 0 {
        return Err(MlpError::NonPositiveDiscriminant(disc));
    }
    let residue = disc.rem_euclid(4);
    if residue == 2 || residue == 3 {
        return Err(MlpError::InvalidDiscriminant { disc, residue });
    }
    Ok(())
}

pub fn is_discriminant(disc: i64) -> bool {
    validate_discriminant(disc).is_ok()
}

/// `Some(sqrt(n))` when `n` is a perfect square.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn is_even_square(disc: i64) -> bool {
    matches!(exact_sqrt(disc), Some(r) if r % 2 == 0)
}

fn ceil_sqrt(n: i64) -> i64 {
    let r = n.sqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// The element `[[a, b], [c, d]]` of SL2(Z).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    /// Returns `None` unless `ad - bc = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        Self::from_big(a.into(), b.into(), c.into(), d.into())
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Option<Self> {
        (&a * &d - &b * &c == BigInt::one()).then_some(Mat2 { a, b, c, d })
    }

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }

    /// Translation `t -> t + 1`.
    pub fn t() -> Self {
        Self::raw(1, 1, 0, 1)
    }

    /// Inversion `t -> -1/t`.
    pub fn s() -> Self {
        Self::raw(0, -1, 1, 0)
    }

    pub fn t_pow(n: i64) -> Self {
        Self::raw(1, n, 0, 1)
    }

    pub fn inverse(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Identity up to sign, i.e. trivial in PSL2(Z).
    pub fn is_projective_identity(&self) -> bool {
        self.is_identity() || -self.clone() == Self::identity()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| &acc * self)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// The point `x + i*sqrt(s)` of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicPoint {
    pub x: Rational,
    pub s: Rational,
}

impl AlgebraicPoint {
    pub fn new(x: Rational, s: Rational) -> Result<Self> {
        if !s.is_positive() {
            return Err(MlpError::OutOfDomain);
        }
        Ok(AlgebraicPoint { x, s })
    }

    /// Shorthand for tests and fixed points: `(xn/xd) + i*sqrt(sn/sd)`.
    pub fn from_ratios(xn: i64, xd: i64, sn: i64, sd: i64) -> Self {
        Self::new(rat(xn, xd), rat(sn, sd)).expect("s must be positive")
    }

    pub fn i() -> Self {
        Self::from_ratios(0, 1, 1, 1)
    }

    /// `1/2 + i*sqrt(3)/2`, the right corner of the standard domain.
    pub fn rho() -> Self {
        Self::from_ratios(1, 2, 3, 4)
    }

    pub fn abs_sq(&self) -> Rational {
        &self.x * &self.x + &self.s
    }

    /// `-1/2 <= x <= 1/2` and `|t| >= 1`.
    pub fn in_domain_closure(&self) -> bool {
        let half = rat(1, 2);
        self.x >= -half.clone() && self.x <= half && self.abs_sq() >= Rational::one()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.s.to_f64().unwrap_or(f64::NAN).sqrt(),
        )
    }

    /// The point as an element of the ring `Q(i*sqrt(s))`.
    pub fn as_complex(&self) -> ExactComplex {
        ExactComplex::new(self.x.clone(), Rational::one(), self.s.clone())
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i*sqrt({})", self.x, self.s)
    }
}

/// Integral binary quadratic form `a X^2 + b XY + c Y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_normalized(&self) -> bool {
        self.a.is_positive() || (self.a.is_zero() && self.b.is_positive())
    }

    /// Picks the representative of `{Q, -Q}` with `a > 0`, or `a = 0` and `b > 0`.
    pub fn normalized(&self) -> Self {
        if self.is_normalized() {
            self.clone()
        } else {
            QuadForm {
                a: -&self.a,
                b: -&self.b,
                c: -&self.c,
            }
        }
    }

    /// `a(x^2 + s) + bx + c`; vanishes exactly on the geodesic.
    pub fn eval(&self, p: &AlgebraicPoint) -> Rational {
        big_to_rat(&self.a) * p.abs_sq() + big_to_rat(&self.b) * &p.x + big_to_rat(&self.c)
    }

    /// Pull-back `Q(aX + bY, cX + dY)` without renormalizing, so that
    /// `eval(Q.pullback(g), p) = eval(Q, g p) * |c p + d|^2`.
    pub fn pullback(&self, g: &Mat2) -> QuadForm {
        let (qa, qb, qc) = (&self.a, &self.b, &self.c);
        let two = BigInt::from(2);
        QuadForm {
            a: qa * &g.a * &g.a + qb * &g.a * &g.c + qc * &g.c * &g.c,
            b: &two * qa * &g.a * &g.b + qb * (&g.a * &g.d + &g.b * &g.c) + &two * qc * &g.c * &g.d,
            c: qa * &g.b * &g.b + qb * &g.b * &g.d + qc * &g.d * &g.d,
        }
    }

    /// Height-squared of the geodesic over `x`: `-(a x^2 + b x + c)/a`.
    /// Only meaningful for semicircles.
    pub fn height_sq_at(&self, x: &Rational) -> Rational {
        let a = big_to_rat(&self.a);
        -(&a * x * x + big_to_rat(&self.b) * x + big_to_rat(&self.c)) / a
    }

    pub fn is_vertical(&self) -> bool {
        self.a.is_zero()
    }

    /// The closed x-interval over which the geodesic runs inside the closed
    /// standard domain, when that intersection is more than one point.
    ///
    /// For a semicircle with `a > 0` inside the strip `|x| <= 1/2`, the
    /// condition `|t| >= 1` is the linear constraint `b x + a + c <= 0`, and it
    /// already forces `s >= 3/4`.
    pub fn clip_to_domain(&self) -> Option<(Rational, Rational)> {
        let q = self.normalized();
        let half = rat(1, 2);
        if q.a.is_zero() {
            if q.b.is_zero() {
                return None;
            }
            let x = -big_to_rat(&q.c) / big_to_rat(&q.b);
            return (x >= -half.clone() && x <= half).then(|| (x.clone(), x));
        }
        let (lo, hi) = if q.b.is_zero() {
            if (&q.a + &q.c).is_positive() {
                return None;
            }
            (-half.clone(), half)
        } else {
            let t = -big_to_rat(&(&q.a + &q.c)) / big_to_rat(&q.b);
            if q.b.is_positive() {
                (-half.clone(), std::cmp::min(half, t))
            } else {
                (std::cmp::max(-half, t), rat(1, 2))
            }
        };
        (lo < hi).then_some((lo, hi))
    }

    pub fn to_i64(&self) -> Option<[i64; 3]> {
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?])
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geodesic {
    Semicircle { center: Rational, radius_sq: Rational },
    Vertical { x: Rational },
}

pub fn geodesic_of_form(q: &QuadForm) -> Result<Geodesic> {
    let q = q.normalized();
    if q.a.is_zero() {
        if q.b.is_zero() {
            return Err(MlpError::DegenerateForm {
                a: q.a.to_string(),
                b: q.b.to_string(),
                c: q.c.to_string(),
            });
        }
        return Ok(Geodesic::Vertical {
            x: -big_to_rat(&q.c) / big_to_rat(&q.b),
        });
    }
    let a = big_to_rat(&q.a);
    let center = -big_to_rat(&q.b) / (int(2) * &a);
    let radius_sq = big_to_rat(&q.discriminant()) / (int(4) * &a * &a);
    Ok(Geodesic::Semicircle { center, radius_sq })
}

pub fn eval_form(q: &QuadForm, p: &AlgebraicPoint) -> Rational {
    q.eval(p)
}

/// `Q o g`, renormalized. `p` lies on the result iff `g p` lies on `Q`.
pub fn form_action(q: &QuadForm, g: &Mat2) -> QuadForm {
    q.pullback(g).normalized()
}

/// All normalized forms of discriminant `disc` whose geodesic could meet the
/// region `x_lo <= x <= x_hi`, `s >= s_min`. A superset; callers filter.
pub fn candidate_forms(disc: i64, x_lo: &Rational, x_hi: &Rational, s_min: &Rational) -> Vec<QuadForm> {
    assert!(s_min.is_positive());
    let mut out = Vec::new();
    let root_ceil = ceil_sqrt(disc);
    // radius^2 = D / 4a^2 must reach s_min
    let mut a: i64 = 1;
    while int(4 * a * a) * s_min <= int(disc) {
        // center -b/2a within [x_lo - r, x_hi + r], 2ar = sqrt(D)
        let b_lo = (-(int(2 * a) * x_hi)).floor().to_integer().to_i64().unwrap() - root_ceil;
        let b_hi = (-(int(2 * a) * x_lo)).ceil().to_integer().to_i64().unwrap() + root_ceil;
        for b in b_lo..=b_hi {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                out.push(QuadForm::new(a, b, num / (4 * a)));
            }
        }
        a += 1;
    }
    if let Some(b) = exact_sqrt(disc) {
        // x = -c/b in [x_lo, x_hi]
        let c_lo = (-(int(b) * x_hi)).floor().to_integer().to_i64().unwrap();
        let c_hi = (-(int(b) * x_lo)).ceil().to_integer().to_i64().unwrap();
        for c in c_lo..=c_hi {
            let x = rat(-c, b);
            if &x >= x_lo && &x <= x_hi {
                out.push(QuadForm::new(0, b, c));
            }
        }
    }
    out
}

/// Normalized forms of discriminant `disc` whose geodesic meets the closed
/// standard domain in more than one point. Semicircles come first, ordered by
/// `a`, then `|b|` with positive `b` first; vertical lines follow by abscissa.
pub fn enumerate_forms(disc: i64) -> Result<Vec<QuadForm>> {
    validate_discriminant(disc)?;
    let half = rat(1, 2);
    let mut forms: Vec<QuadForm> = candidate_forms(disc, &-half.clone(), &half, &rat(3, 4))
        .into_iter()
        .filter(|q| q.clip_to_domain().is_some())
        .collect();
    forms.sort_by_key(form_order_key);
    forms.dedup();
    Ok(forms)
}

fn form_order_key(q: &QuadForm) -> (bool, BigInt, BigInt, bool, Rational) {
    let vertical_x = if q.a.is_zero() {
        -big_to_rat(&q.c) / big_to_rat(&q.b)
    } else {
        Rational::zero()
    };
    (
        q.a.is_zero(),
        q.a.clone(),
        q.b.abs(),
        q.b.is_negative(),
        vertical_x,
    )
}

/// Image of `x + i*sqrt(s)` under `t -> (a t + b)/(c t + d)`.
pub fn apply_mobius(g: &Mat2, p: &AlgebraicPoint) -> AlgebraicPoint {
    let (a, b, c, d) = (big_to_rat(&g.a), big_to_rat(&g.b), big_to_rat(&g.c), big_to_rat(&g.d));
    let cxd = &c * &p.x + &d;
    let denom = &cxd * &cxd + &c * &c * &p.s;
    let x = ((&a * &p.x + &b) * &cxd + &a * &c * &p.s) / &denom;
    let s = &p.s / (&denom * &denom);
    AlgebraicPoint { x, s }
}

/// `|c t + d|^2` for the point `t`.
pub fn cocycle_norm_sq(g: &Mat2, p: &AlgebraicPoint) -> Rational {
    let c = big_to_rat(&g.c);
    let cxd = &c * &p.x + big_to_rat(&g.d);
    &cxd * &cxd + &c * &c * &p.s
}

/// Reduces `p` into the standard domain: returns `(g, g p)` with
/// `-1/2 < Re(g p) <= 1/2` and `|g p| >= 1`.
pub fn reduce_point(p: &AlgebraicPoint) -> (Mat2, AlgebraicPoint) {
    let half = rat(1, 2);
    let mut g = Mat2::identity();
    let mut q = p.clone();
    loop {
        // n = ceil(x - 1/2) moves x into (-1/2, 1/2]
        let n = (&q.x - &half).ceil().to_integer();
        if !n.is_zero() {
            q.x -= big_to_rat(&n);
            g = &Mat2::from_big(BigInt::one(), -n, BigInt::zero(), BigInt::one()).unwrap() * &g;
        }
        if q.abs_sq() >= Rational::one() {
            return (g, q);
        }
        q = apply_mobius(&Mat2::s(), &q);
        g = &Mat2::s() * &g;
    }
}

/// `u + v * i * sqrt(s)`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub u: Rational,
    pub v: Rational,
    pub s: Rational,
}

impl ExactComplex {
    pub fn new(u: Rational, v: Rational, s: Rational) -> Self {
        ExactComplex { u, v, s }
    }

    pub fn real(u: Rational, s: &Rational) -> Self {
        ExactComplex::new(u, Rational::zero(), s.clone())
    }

    pub fn zero(s: &Rational) -> Self {
        Self::real(Rational::zero(), s)
    }

    pub fn one(s: &Rational) -> Self {
        Self::real(Rational::one(), s)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ExactComplex::new(&self.u * k, &self.v * k, self.s.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.s), |acc, _| &acc * self)
    }

    /// The same number written over `i*sqrt(new_s)`; needs `s / new_s` to be
    /// the square of a rational.
    pub fn reexpress(&self, new_s: &Rational) -> Option<Self> {
        if self.v.is_zero() {
            return Some(Self::real(self.u.clone(), new_s));
        }
        let ratio = rational_sqrt(&(&self.s / new_s))?;
        Some(ExactComplex::new(self.u.clone(), &self.v * ratio, new_s.clone()))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let root = self.s.to_f64().unwrap_or(f64::NAN).sqrt();
        (
            self.u.to_f64().unwrap_or(f64::NAN),
            self.v.to_f64().unwrap_or(f64::NAN) * root,
        )
    }

    fn check_ring(&self, o: &Self) {
        assert!(
            self.s == o.s || self.v.is_zero() || o.v.is_zero(),
            "ExactComplex values over different square roots"
        );
    }

    fn common_s(&self, o: &Self) -> Rational {
        if self.v.is_zero() {
            o.s.clone()
        } else {
            self.s.clone()
        }
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;

    fn add(self, o: &ExactComplex) -> ExactComplex {
        self.check_ring(o);
        ExactComplex::new(&self.u + &o.u, &self.v + &o.v, self.common_s(o))
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;

    fn sub(self, o: &ExactComplex) -> ExactComplex {
        self.check_ring(o);
        ExactComplex::new(&self.u - &o.u, &self.v - &o.v, self.common_s(o))
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;

    fn mul(self, o: &ExactComplex) -> ExactComplex {
        self.check_ring(o);
        let s = self.common_s(o);
        ExactComplex::new(
            &self.u * &o.u - &self.v * &o.v * &s,
            &self.u * &o.v + &self.v * &o.u,
            s,
        )
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*i*sqrt({})", self.u, self.v, self.s)
    }
}
