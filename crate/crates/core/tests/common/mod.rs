//! Independent oracles and reusable checks for the integration suites.
//!
//! The grid oracle never touches the library's arrangement code: it samples
//! the closed domain on an integer lattice, evaluates every form of the
//! discriminant in a wide box with `i128` arithmetic and identifies faces by
//! their sign patterns. Gluing edges come from sampling the walls and the
//! bottom arc the same way; dimensions from a plain rational rank.

#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use mlp_core::geometry::{int, rat, sign};
use mlp_core::{
    apply_mobius, build_arrangement, build_gluing_graph, compute_space_from, evaluate, AlgebraicPoint, ExactComplex,
    FaceComplex, GluingGraph, LocalPolySpace, Mat2, QuadForm, Rational, Weight,
};
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// `x = xn/xd`, `s = sn/sd`, all integral.
#[derive(Clone, Copy, Debug)]
pub struct LatticePoint {
    pub xn: i128,
    pub xd: i128,
    pub sn: i128,
    pub sd: i128,
}

impl LatticePoint {
    pub fn sign_of(&self, f: &[i64; 3]) -> i8 {
        let [a, b, c] = f.map(i128::from);
        let (xn, xd, sn, sd) = (self.xn, self.xd, self.sn, self.sd);
        // (a (x^2 + s) + b x + c) * xd^2 * sd
        let v = a * (xn * xn * sd + sn * xd * xd) + b * xn * xd * sd + c * xd * xd * sd;
        v.signum() as i8
    }

    pub fn pattern(&self, forms: &[[i64; 3]]) -> Option<Vec<i8>> {
        let p: Vec<i8> = forms.iter().map(|f| self.sign_of(f)).collect();
        (!p.contains(&0)).then_some(p)
    }
}

/// Every normalized form of discriminant `d` in a box much larger than any
/// form that can meet the domain.
pub fn wide_forms(d: i64) -> Vec<[i64; 3]> {
    let r = d.sqrt() + 1;
    let amax = r + 2;
    let bmax = 2 * amax + r + 4;
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -bmax..=bmax {
            if (b * b - d) % (4 * a) == 0 {
                out.push([a, b, (b * b - d) / (4 * a)]);
            }
        }
    }
    let b = d.sqrt();
    if b * b == d {
        for c in -bmax..=bmax {
            out.push([0, b, c]);
        }
    }
    out
}

pub struct GridOracle {
    pub forms: Vec<[i64; 3]>,
    pub faces: BTreeSet<Vec<i8>>,
    pub cusp_faces: BTreeSet<Vec<i8>>,
    /// `(from, to, is_s)`: `P_from = P_to | T` or `| S`.
    pub edges: BTreeSet<(Vec<i8>, Vec<i8>, bool)>,
}

pub fn grid_oracle(d: i64, nx: i128, ns: i128) -> GridOracle {
    let forms = wide_forms(d);
    let cap = i128::from((d.sqrt() / 2 + 1).max(2));
    let cap_sq = cap * cap;
    let mut faces = BTreeSet::new();
    let mut cusp_faces = BTreeSet::new();
    let half = nx / 2;
    for xn in -half + 1..half {
        // x^2 + s > 1  <=>  sn * nx^2 > (nx^2 - xn^2) * ns
        let s_min = ((nx * nx - xn * xn) * ns) / (nx * nx) + 1;
        for sn in s_min..cap_sq * ns {
            let p = LatticePoint { xn, xd: nx, sn, sd: ns };
            if let Some(pat) = p.pattern(&forms) {
                faces.insert(pat);
            }
        }
        let top = LatticePoint { xn, xd: nx, sn: cap_sq * ns - 1, sd: ns };
        if let Some(pat) = top.pattern(&forms) {
            cusp_faces.insert(pat);
        }
    }

    let mut edges = BTreeSet::new();
    for sn in 3 * ns / 4 + 1..cap_sq * ns {
        let l = LatticePoint { xn: -1, xd: 2, sn, sd: ns };
        let r = LatticePoint { xn: 1, xd: 2, sn, sd: ns };
        if let (Some(pl), Some(pr)) = (l.pattern(&forms), r.pattern(&forms)) {
            edges.insert((pl, pr, false));
        }
    }
    for xn in -half + 1..0 {
        let side = |xn: i128| LatticePoint { xn, xd: nx, sn: nx * nx - xn * xn, sd: nx * nx };
        if let (Some(pn), Some(pp)) = (side(xn).pattern(&forms), side(-xn).pattern(&forms)) {
            edges.insert((pn, pp, true));
        }
    }
    GridOracle { forms, faces, cusp_faces, edges }
}

impl GridOracle {
    pub fn index_of(&self, pat: &[i8]) -> usize {
        self.faces
            .iter()
            .position(|f| f == pat)
            .expect("boundary pattern of a face the grid never sampled")
    }

    /// Patterns restricted to the given forms, in the order of `forms`.
    pub fn restricted(&self, forms: &[QuadForm]) -> BTreeSet<Vec<i8>> {
        let cols: Vec<usize> = forms
            .iter()
            .map(|q| {
                let t = q.to_i64().expect("small form");
                self.forms.iter().position(|f| *f == t).expect("form outside the oracle box")
            })
            .collect();
        self.faces.iter().map(|p| cols.iter().map(|&c| p[c]).collect()).collect()
    }

    pub fn orbit_count(&self) -> usize {
        let n = self.faces.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(l: &mut [usize], mut i: usize) -> usize {
            while l[i] != i {
                i = l[i];
            }
            i
        }
        for (f, t, _) in &self.edges {
            let (a, b) = (root(&mut label, self.index_of(f)), root(&mut label, self.index_of(t)));
            label[a] = b;
        }
        (0..n).filter(|&i| root(&mut label, i) == i).count()
    }

    /// `(|k| + 1) * faces - rank` of the stacked relations.
    pub fn dimension(&self, w: usize) -> usize {
        let n = self.faces.len();
        let cols = (w + 1) * n;
        let t = oracle_slash_t(w);
        let s = oracle_slash_s(w);
        let mut rows = Vec::new();
        for (f, to, is_s) in &self.edges {
            let (fi, ti) = (self.index_of(f), self.index_of(to));
            let m = if *is_s { &s } else { &t };
            for i in 0..=w {
                let mut row = vec![Rational::zero(); cols];
                row[fi * (w + 1) + i] += Rational::one();
                for j in 0..=w {
                    row[ti * (w + 1) + j] -= m[i][j].clone();
                }
                rows.push(row);
            }
        }
        cols - rational_rank(rows, cols)
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `P(X) -> P(X + 1)` on coefficient vectors.
pub fn oracle_slash_t(w: usize) -> Vec<Vec<Rational>> {
    (0..=w)
        .map(|i| (0..=w).map(|j| if j >= i { int(binomial(j, i)) } else { int(0) }).collect())
        .collect()
}

/// `P(X) -> X^w P(-1/X)` on coefficient vectors.
pub fn oracle_slash_s(w: usize) -> Vec<Vec<Rational>> {
    (0..=w)
        .map(|i| {
            (0..=w)
                .map(|j| {
                    if i + j == w {
                        int(if j % 2 == 0 { 1 } else { -1 })
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn rational_rank(mut rows: Vec<Vec<Rational>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot[c];
                for j in c..cols {
                    let sub = &f * &pivot[j];
                    rows[r][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn discriminants(max: i64) -> impl Iterator<Item = i64> {
    (1..=max).filter(|d| d % 4 == 0 || d % 4 == 1)
}

pub struct Prepared {
    pub disc: i64,
    pub complex: Arc<FaceComplex>,
    pub gluing: Arc<GluingGraph>,
}

impl Prepared {
    pub fn space(&self, k: i64, augmented: bool) -> LocalPolySpace {
        compute_space_from(self.complex.clone(), self.gluing.clone(), Weight::new(k).unwrap(), augmented)
    }
}

/// Complexes and gluing graphs for every discriminant up to 100, built once
/// per test binary.
pub fn prepared() -> &'static [Prepared] {
    static ALL: OnceLock<Vec<Prepared>> = OnceLock::new();
    ALL.get_or_init(|| {
        discriminants(100)
            .map(|disc| {
                let complex = Arc::new(build_arrangement(disc).unwrap());
                let gluing = Arc::new(build_gluing_graph(&complex));
                Prepared { disc, complex, gluing }
            })
            .collect()
    })
}

pub fn prepared_for(d: i64) -> &'static Prepared {
    prepared().iter().find(|p| p.disc == d).expect("discriminant up to 100")
}

pub fn is_square(d: i64) -> bool {
    d.sqrt() * d.sqrt() == d
}

pub fn is_even_square(d: i64) -> bool {
    is_square(d) && d.sqrt() % 2 == 0
}

/// Product of `len` generators drawn from `T`, `T^-1`, `S`.
pub fn random_word<R: Rng>(rng: &mut R, len: usize) -> Mat2 {
    (0..len).fold(Mat2::identity(), |acc, _| {
        let g = match rng.gen_range(0..3) {
            0 => Mat2::t(),
            1 => Mat2::t().inverse(),
            _ => Mat2::s(),
        };
        &acc * &g
    })
}

pub fn random_point<R: Rng>(rng: &mut R) -> AlgebraicPoint {
    let x = rat(rng.gen_range(-40..=40), rng.gen_range(1..=12));
    let s = rat(rng.gen_range(1..=60), rng.gen_range(1..=16));
    AlgebraicPoint::new(x, s).unwrap()
}

/// `-g` and `g` act identically; keep the one with `c > 0`, or `c = 0, d > 0`.
fn projective(g: Mat2) -> Mat2 {
    if g.c.is_negative() || (g.c.is_zero() && g.d.is_negative()) {
        -g
    } else {
        g
    }
}

/// All `g` (mod `+-1`) with `g^-1 p` in the closed standard domain, found by
/// walking across the edges of the tiles around `p`.
pub fn star_of(p: &AlgebraicPoint) -> Vec<Mat2> {
    assert!(p.in_domain_closure());
    let mut seen = vec![Mat2::identity()];
    let mut queue = vec![Mat2::identity()];
    while let Some(g) = queue.pop() {
        for step in [Mat2::t(), Mat2::t().inverse(), Mat2::s()] {
            let h = projective(&g * &step);
            if !seen.contains(&h) && apply_mobius(&h.inverse(), p).in_domain_closure() {
                seen.push(h.clone());
                queue.push(h);
            }
        }
        assert!(seen.len() <= 12, "too many tiles around {p}");
    }
    seen
}

/// Every form of discriminant `d` whose geodesic passes through `p`, for `p`
/// in the closed standard domain.
pub fn forms_through(d: i64, p: &AlgebraicPoint) -> Vec<QuadForm> {
    wide_forms(d)
        .into_iter()
        .map(|[a, b, c]| QuadForm::new(a, b, c))
        .filter(|q| q.eval(p).is_zero())
        .collect()
}

/// Mean over the components of `H \ E_D` around `p` of the one-sided limits,
/// assembled from the tiles `g F` around `p`: on `g(f)` the function equals
/// `P_f | g^-1`. Tiles are grouped into components by the signs of the
/// geodesics through `p`, and pieces of one component must agree.
pub fn favg_oracle(space: &LocalPolySpace, index: usize, p: &AlgebraicPoint) -> ExactComplex {
    let fc: &FaceComplex = &space.complex;
    let element = &space.basis[index];
    let through = forms_through(fc.disc, p);
    let mut limits: BTreeMap<Vec<i8>, ExactComplex> = BTreeMap::new();
    for g in star_of(p) {
        let q = apply_mobius(&g.inverse(), p);
        let q_signs: Vec<i8> = fc.forms.iter().map(|f| sign(&f.eval(&q))).collect();
        for face in &fc.faces {
            let compatible = fc
                .face_signs(face.id)
                .iter()
                .zip(&q_signs)
                .all(|(&f, &s)| s == 0 || s == f);
            if !compatible {
                continue;
            }
            let key: Vec<i8> = through.iter().map(|t| sign(&t.pullback(&g).eval(&face.sample))).collect();
            let value = element.polys[face.id.0].slash(&g.inverse()).eval(&p.as_complex());
            if let Some(prev) = limits.get(&key) {
                assert_eq!(prev, &value, "two pieces of one component disagree at {p}");
            } else {
                limits.insert(key, value);
            }
        }
    }
    let expected = if through.is_empty() { 1 } else { 2 * through.len() };
    assert_eq!(limits.len(), expected, "components around {p}");
    let total = limits.values().fold(ExactComplex::zero(&p.s), |acc, v| &acc + v);
    total.scale(&Rational::new(BigInt::one(), BigInt::from(limits.len())))
}

/// Points of the exceptional set in the closed domain: every arc endpoint and
/// crossing, then random points along arcs, `count` in total.
pub fn exceptional_points<R: Rng>(fc: &FaceComplex, count: usize, rng: &mut R) -> Vec<AlgebraicPoint> {
    let mut pts: BTreeSet<AlgebraicPoint> = BTreeSet::new();
    for arc in &fc.arcs {
        if arc.is_vertical() {
            let x = arc.x_lo.clone();
            pts.insert(AlgebraicPoint { s: Rational::one() - &x * &x, x });
        } else {
            for x in [&arc.x_lo, &arc.x_hi] {
                pts.insert(AlgebraicPoint { x: x.clone(), s: arc.height_sq_at(x) });
            }
        }
    }
    for (i, p) in fc.forms.iter().enumerate() {
        for q in &fc.forms[i + 1..] {
            // a_q P - a_p Q is linear in x
            let lin_b = &q.a * &p.b - &p.a * &q.b;
            let lin_c = &q.a * &p.c - &p.a * &q.c;
            if lin_b.is_zero() {
                continue;
            }
            let x = -Rational::new(lin_c, lin_b);
            let semi = if p.is_vertical() { q } else { p };
            if semi.is_vertical() {
                continue;
            }
            let s = semi.height_sq_at(&x);
            if s.is_positive() {
                let pt = AlgebraicPoint { x, s };
                if pt.in_domain_closure() && p.eval(&pt).is_zero() && q.eval(&pt).is_zero() {
                    pts.insert(pt);
                }
            }
        }
    }
    let mut out: Vec<AlgebraicPoint> = pts.into_iter().collect();
    while out.len() > count {
        out.remove(rng.gen_range(0..out.len()));
    }
    let mut guard = 0;
    while out.len() < count && !fc.arcs.is_empty() && guard < 10 * count {
        guard += 1;
        let arc = &fc.arcs[rng.gen_range(0..fc.arcs.len())];
        let t = rat(rng.gen_range(1..64), 64);
        let p = if arc.is_vertical() {
            let x = arc.x_lo.clone();
            let lo = Rational::one() - &x * &x;
            AlgebraicPoint { s: &lo + (&fc.cap_sq - &lo) * t, x }
        } else {
            let x = &arc.x_lo + (&arc.x_hi - &arc.x_lo) * t;
            AlgebraicPoint { s: arc.height_sq_at(&x), x }
        };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Checks `evaluate` against [`favg_oracle`] on every given point, for the
/// basis elements listed.
pub fn check_favg(space: &LocalPolySpace, indices: &[usize], points: &[AlgebraicPoint]) -> Result<(), String> {
    for p in points {
        for &i in indices {
            let got = evaluate(space, i, p).map_err(|e| e.to_string())?;
            let want = favg_oracle(space, i, p);
            if got != want {
                return Err(format!("D={} element {i} at {p}: {got} != {want}", space.disc));
            }
        }
    }
    Ok(())
}

pub fn as_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}
