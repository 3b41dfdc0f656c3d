//! Slash action on polynomials of bounded degree and assembly of the space of
//! modular local polynomials.
//!
//! For weight `k <= 0` with `w = |k|`, the slash `(P |_k g)(X) = (cX + d)^w P((aX + b)/(cX + d))`
//! is linear on polynomials of degree at most `w`. Its matrix has as column
//! `j` the coefficients of `(cX + d)^(w - j) (aX + b)^j`, and composes as a
//! right action: `M(g1 g2) = M(g2) M(g1)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arrangement::{adjacent_sector_samples, build_arrangement, FaceComplex, FaceId, Location};
use crate::error::{MlpError, Result};
use crate::geometry::{
    big_to_rat, reduce_point, validate_discriminant, AlgebraicPoint, ExactComplex, Mat2, Rational,
};
use crate::gluing::{build_gluing_graph, GluingGraph};
use crate::linalg::nullspace;

/// Even weight `k <= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(i64);

impl Weight {
    pub fn new(k: i64) -> Result<Self> {
        if k > 0 || k % 2 != 0 {
            return Err(MlpError::InvalidWeight(k));
        }
        Ok(Weight(k))
    }

    pub fn k(self) -> i64 {
        self.0
    }

    /// `|k|`, the degree bound.
    pub fn degree(self) -> usize {
        self.0.unsigned_abs() as usize
    }
}

/// `p/q` with an explicit denominator, e.g. `1/1`, `-3/2`, `0/1`.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Coefficients `(p_0, ..., p_w)` of `sum p_j X^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyVec(pub Vec<Rational>);

impl PolyVec {
    pub fn zero(w: usize) -> Self {
        PolyVec(vec![Rational::zero(); w + 1])
    }

    pub fn monomial(w: usize, j: usize) -> Self {
        let mut p = Self::zero(w);
        p.0[j] = Rational::one();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyVec(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn degree_bound(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    /// Horner evaluation at `t` in the ring of `t`.
    pub fn eval(&self, t: &ExactComplex) -> ExactComplex {
        self.0.iter().rev().fold(ExactComplex::zero(&t.s), |acc, c| {
            let prod = &acc * t;
            &prod + &ExactComplex::real(c.clone(), &t.s)
        })
    }

    /// `P |_k g`.
    pub fn slash(&self, g: &Mat2) -> PolyVec {
        slash_matrix(g, self.degree_bound())
            .expect("degree bound of a stored polynomial is even")
            .apply(self)
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = fraction_string(&c.abs());
            let term = match j {
                0 => mag,
                1 => format!("{mag} X"),
                _ => format!("{mag} X^{j}"),
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{term}")?;
                first = false;
            } else {
                write!(f, " {} {term}", if c.is_negative() { '-' } else { '+' })?;
            }
        }
        if first {
            write!(f, "0/1")?;
        }
        Ok(())
    }
}

/// Integer matrix of `P -> P |_k g` on coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlashMatrix {
    pub degree: usize,
    /// Row-major, `(w + 1) x (w + 1)`.
    pub rows: Vec<Vec<BigInt>>,
}

impl SlashMatrix {
    pub fn identity(w: usize) -> Self {
        let rows = (0..=w)
            .map(|i| (0..=w).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        SlashMatrix { degree: w, rows }
    }

    pub fn apply(&self, p: &PolyVec) -> PolyVec {
        assert_eq!(p.0.len(), self.degree + 1);
        PolyVec(
            self.rows
                .iter()
                .map(|row| row.iter().zip(&p.0).map(|(m, c)| big_to_rat(m) * c).sum())
                .collect(),
        )
    }

    pub fn mul(&self, o: &SlashMatrix) -> SlashMatrix {
        let n = self.degree + 1;
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|l| &self.rows[i][l] * &o.rows[l][j]).sum()).collect())
            .collect();
        SlashMatrix { degree: self.degree, rows }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.degree)
    }

    /// Rows of `M - I`.
    fn minus_identity(&self) -> Vec<Vec<BigInt>> {
        let mut rows = self.rows.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] -= 1;
        }
        rows
    }
}

fn poly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_pow(p: &[BigInt], n: usize) -> Vec<BigInt> {
    (0..n).fold(vec![BigInt::one()], |acc, _| poly_mul(&acc, p))
}

pub fn slash_matrix(g: &Mat2, w: usize) -> Result<SlashMatrix> {
    if !w.is_multiple_of(2) {
        return Err(MlpError::InvalidWeight(-(w as i64)));
    }
    let lin_num = [g.b.clone(), g.a.clone()]; // aX + b
    let lin_den = [g.d.clone(), g.c.clone()]; // cX + d
    let mut rows = vec![vec![BigInt::zero(); w + 1]; w + 1];
    for j in 0..=w {
        let col = poly_mul(&poly_pow(&lin_den, w - j), &poly_pow(&lin_num, j));
        for (i, c) in col.into_iter().enumerate() {
            rows[i][j] = c;
        }
    }
    Ok(SlashMatrix { degree: w, rows })
}

/// Basis of the polynomials fixed by every constraint, by fraction-free
/// elimination of the stacked `M - I`.
pub fn fixed_space(constraints: &[SlashMatrix], w: usize) -> Vec<PolyVec> {
    let rows: Vec<Vec<BigInt>> = constraints
        .iter()
        .inspect(|m| assert_eq!(m.degree, w, "constraint degree mismatch"))
        .flat_map(SlashMatrix::minus_identity)
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    nullspace(rows, w + 1).into_iter().map(PolyVec).collect()
}

/// One basis vector: a polynomial for every face, zero off its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    /// `None` for the free per-face basis of the augmented set.
    pub orbit: Option<usize>,
    pub polys: Vec<PolyVec>,
}

impl BasisElement {
    pub fn support(&self) -> Vec<FaceId> {
        self.polys
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, _)| FaceId(i))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct LocalPolySpace {
    pub disc: i64,
    pub weight: Weight,
    pub augmented: bool,
    pub complex: Arc<FaceComplex>,
    pub gluing: Arc<GluingGraph>,
    pub basis: Vec<BasisElement>,
}

impl LocalPolySpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `(|k| + 1) r_F`, the largest possible dimension.
    pub fn upper_bound(&self) -> usize {
        (self.weight.degree() + 1) * self.complex.face_count()
    }
}

pub fn compute_space(disc: i64, k: i64, augmented: bool) -> Result<LocalPolySpace> {
    validate_discriminant(disc)?;
    let weight = Weight::new(k)?;
    let complex = Arc::new(build_arrangement(disc)?);
    let gluing = Arc::new(build_gluing_graph(&complex));
    Ok(compute_space_from(complex, gluing, weight, augmented))
}

/// Same as [`compute_space`] on a prebuilt complex and gluing graph.
pub fn compute_space_from(
    complex: Arc<FaceComplex>,
    gluing: Arc<GluingGraph>,
    weight: Weight,
    augmented: bool,
) -> LocalPolySpace {
    let w = weight.degree();
    let n = complex.face_count();
    let mut basis = Vec::new();
    if augmented {
        for f in 0..n {
            for j in 0..=w {
                let mut polys = vec![PolyVec::zero(w); n];
                polys[f] = PolyVec::monomial(w, j);
                basis.push(BasisElement { orbit: None, polys });
            }
        }
    } else {
        for (oi, orbit) in gluing.orbits.iter().enumerate() {
            let constraints: Vec<SlashMatrix> = orbit
                .cycles
                .iter()
                .map(|g| slash_matrix(g, w).expect("even degree"))
                .collect();
            for root_poly in fixed_space(&constraints, w) {
                let mut polys = vec![PolyVec::zero(w); n];
                for &f in &orbit.faces {
                    polys[f.0] = root_poly.slash(gluing.transport(f));
                }
                basis.push(BasisElement {
                    orbit: Some(oi),
                    polys,
                });
            }
        }
    }
    LocalPolySpace {
        disc: complex.disc,
        weight,
        augmented,
        complex,
        gluing,
        basis,
    }
}

/// `(c t + d)` for `g = [[a, b], [c, d]]`, in the ring of `t`.
fn cocycle(g: &Mat2, t: &AlgebraicPoint) -> ExactComplex {
    let c = big_to_rat(&g.c);
    ExactComplex::new(&c * &t.x + big_to_rat(&g.d), c, t.s.clone())
}

/// Value of a basis element at `p`, exact in `Q(i*sqrt(s_p))`.
///
/// `p` is reduced to `q = g p` in the standard domain and `F(p) = (c p + d)^w F(q)`.
/// Off the exceptional set `F(q)` is the face polynomial at `q`. On it, `F(q)`
/// is the mean over the components of `H \ E_D` touching `q` of their
/// polynomials at `q`. Each component is found from a sample point near `q`,
/// reduced in turn. Geodesics meeting the domain only at a corner count.
pub fn evaluate(space: &LocalPolySpace, index: usize, p: &AlgebraicPoint) -> Result<ExactComplex> {
    if !p.s.is_positive() {
        return Err(MlpError::OutOfDomain);
    }
    let element = space.basis.get(index).ok_or(MlpError::BasisIndex {
        index,
        dimension: space.dimension(),
    })?;
    let w = space.weight.degree() as u32;
    let (g, q) = reduce_point(p);
    let at_q = value_in_domain(space, element, &q);
    let at_q = at_q.reexpress(&p.s).expect("s_p / s_q is a rational square");
    Ok(&at_q * &cocycle(&g, p).pow(w))
}

fn value_in_domain(space: &LocalPolySpace, element: &BasisElement, q: &AlgebraicPoint) -> ExactComplex {
    let fc = &space.complex;
    let sectors = adjacent_sector_samples(fc.disc, q);
    let total = sectors.iter().fold(ExactComplex::zero(&q.s), |acc, (_, sample)| {
        let (h, reduced) = reduce_point(sample);
        let Location::Face(f) = fc.locate_in_domain(&reduced) else {
            panic!("sector sample {sample} lies on the exceptional set");
        };
        let limit = element.polys[f.0].slash(&h).eval(&q.as_complex());
        &acc + &limit
    });
    total.scale(&Rational::new(BigInt::one(), BigInt::from(sectors.len())))
}
