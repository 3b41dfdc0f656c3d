//! Invariant checks shared by the property suites and the acceptance gate.
//! Each returns the first violation as an error message.

use std::collections::BTreeSet;

use mlp_core::geometry::{int, sign};
use mlp_core::{
    apply_mobius, build_arrangement_with_cap, enumerate_forms, form_action, slash_matrix, AlgebraicPoint,
    FaceComplex, Mat2, Rational, SlashMatrix,
};
use num_traits::Signed;
use rand::Rng;

use super::{oracle_slash_s, oracle_slash_t, random_point, random_word};

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn as_rational(m: &SlashMatrix) -> Vec<Vec<Rational>> {
    m.rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

/// Right-action law on `pairs` random word pairs, `M(S)^2 = I`,
/// `(M(S) M(T))^3 = I`, and the generators against their closed forms, for
/// every even `w <= 8`.
pub fn slash_laws<R: Rng>(rng: &mut R, pairs: usize) -> Result<(), String> {
    for w in (0..=8).step_by(2) {
        let m = |g: &Mat2| slash_matrix(g, w).unwrap();
        let (ms, mt) = (m(&Mat2::s()), m(&Mat2::t()));
        ensure(as_rational(&mt) == oracle_slash_t(w), || format!("M(T) wrong for w={w}"))?;
        ensure(as_rational(&ms) == oracle_slash_s(w), || format!("M(S) wrong for w={w}"))?;
        ensure(ms.mul(&ms).is_identity(), || format!("M(S)^2 != I for w={w}"))?;
        let st = ms.mul(&mt);
        ensure(st.mul(&st).mul(&st).is_identity(), || format!("(M(S)M(T))^3 != I for w={w}"))?;
        for _ in 0..pairs {
            let len1 = rng.gen_range(0..=10);
            let len2 = rng.gen_range(0..=10);
            let (g1, g2) = (random_word(rng, len1), random_word(rng, len2));
            ensure(m(&(&g1 * &g2)) == m(&g2).mul(&m(&g1)), || {
                format!("M(g1 g2) != M(g2) M(g1) for g1={g1}, g2={g2}, w={w}")
            })?;
        }
    }
    Ok(())
}

/// `E_D` is carried to itself: `Q o g` vanishes exactly at `g^-1` of the zeros
/// of `Q`, with `|(Q o g)(p)| = |Q(g p)| |c p + d|^2` everywhere.
pub fn exceptional_set_invariance<R: Rng>(rng: &mut R, pairs: usize, points: usize) -> Result<(), String> {
    for _ in 0..pairs {
        let d = loop {
            let d = rng.gen_range(1..=100);
            if d % 4 <= 1 {
                break d;
            }
        };
        let forms = enumerate_forms(d).map_err(|e| e.to_string())?;
        let q = &forms[rng.gen_range(0..forms.len())];
        let len = rng.gen_range(0..=10);
        let g = random_word(rng, len);
        let moved = form_action(q, &g);
        ensure(moved.discriminant() == q.discriminant(), || format!("discriminant of {q} changed under {g}"))?;
        for _ in 0..points {
            let p = random_point(rng);
            let gp = apply_mobius(&g, &p);
            let cpd = mlp_core::geometry::cocycle_norm_sq(&g, &p);
            let lhs = moved.eval(&p).abs();
            let rhs = q.eval(&gp).abs() * cpd;
            ensure(lhs == rhs, || format!("pullback identity fails for {q}, {g}, {p}"))?;
        }
        // points on S_Q, pulled back
        if let Some((lo, hi)) = q.clip_to_domain() {
            for t in 0..=4 {
                let x = &lo + (&hi - &lo) * Rational::new(t.into(), 4.into());
                let on = if q.is_vertical() {
                    AlgebraicPoint::new(x, int(2)).unwrap()
                } else {
                    AlgebraicPoint::new(x.clone(), q.height_sq_at(&x)).unwrap()
                };
                let back = apply_mobius(&g.inverse(), &on);
                ensure(sign(&moved.eval(&back)) == 0, || format!("{on} on {q} but {back} not on {moved}"))?;
            }
        }
    }
    Ok(())
}

/// Wall pieces match under `T`, bottom pieces are mirror images under `S`.
pub fn boundary_symmetry(fc: &FaceComplex) -> Result<(), String> {
    let seg = fc.boundary_segments();
    let walls = |side: &[mlp_core::arrangement::WallSegment]| -> Vec<(Rational, Option<Rational>)> {
        side.iter().map(|w| (w.s_lo.clone(), w.s_hi.clone())).collect()
    };
    ensure(walls(&seg.left) == walls(&seg.right), || format!("D={}: wall breakpoints differ", fc.disc))?;
    let xs: BTreeSet<Rational> = seg.bottom.iter().flat_map(|b| [b.x_lo.clone(), b.x_hi.clone()]).collect();
    let mirrored: BTreeSet<Rational> = xs.iter().map(|x| -x.clone()).collect();
    ensure(xs == mirrored, || format!("D={}: bottom breakpoints not symmetric", fc.disc))?;
    let flags = fc.flags();
    ensure(flags.left_wall_in_e == flags.right_wall_in_e, || format!("D={}: wall flags differ", fc.disc))?;
    ensure(flags.left_wall_in_e == seg.left.is_empty(), || format!("D={}: wall flag and pieces disagree", fc.disc))?;
    ensure(flags.bottom_arc_in_e == seg.bottom.is_empty(), || {
        format!("D={}: bottom flag and pieces disagree", fc.disc)
    })
}

pub fn euler_relation(fc: &FaceComplex) -> Result<(), String> {
    let (v, e, f) = fc.euler_counts();
    ensure(v as i64 - e as i64 + f as i64 == 1, || format!("D={}: V-E+F = {v}-{e}+{f}", fc.disc))
}

/// Doubling the cap changes no count and no boundary piece.
pub fn cap_doubling(fc: &FaceComplex) -> Result<(), String> {
    let tall = build_arrangement_with_cap(fc.disc, &fc.cap * int(2)).map_err(|e| e.to_string())?;
    ensure(tall.face_count() == fc.face_count(), || format!("D={}: face count moved", fc.disc))?;
    ensure(tall.cusp_face_count() == fc.cusp_face_count(), || format!("D={}: cusp count moved", fc.disc))?;
    let (a, b) = (fc.boundary_segments(), tall.boundary_segments());
    let pattern = |c: &FaceComplex, f| c.face_signs(f).to_vec();
    let same_walls = |x: &[mlp_core::arrangement::WallSegment], y: &[mlp_core::arrangement::WallSegment]| {
        x.len() == y.len()
            && x.iter().zip(y).all(|(p, q)| {
                p.s_lo == q.s_lo && p.s_hi == q.s_hi && pattern(fc, p.face) == pattern(&tall, q.face)
            })
    };
    ensure(same_walls(&a.left, &b.left) && same_walls(&a.right, &b.right), || {
        format!("D={}: wall pieces moved", fc.disc)
    })?;
    ensure(
        a.bottom.len() == b.bottom.len()
            && a.bottom.iter().zip(&b.bottom).all(|(p, q)| {
                p.x_lo == q.x_lo && p.x_hi == q.x_hi && pattern(fc, p.face) == pattern(&tall, q.face)
            }),
        || format!("D={}: bottom pieces moved", fc.disc),
    )
}

/// No semicircle reaches the cap.
pub fn arcs_below_cap(fc: &FaceComplex) -> Result<(), String> {
    for arc in fc.arcs.iter().filter(|a| !a.is_vertical()) {
        let q = &arc.form;
        let radius_sq = Rational::new(q.discriminant(), &q.a * &q.a * 4);
        ensure(radius_sq < fc.cap_sq, || format!("D={}: {q} reaches the cap", fc.disc))?;
    }
    Ok(())
}
