//! Exact arrangement of geodesic arcs inside the capped standard domain.
//!
//! The region is `-1/2 <= x <= 1/2`, `|t| >= 1`, `Im t <= cap`. Every
//! semicircle of the arrangement is a single-valued graph over its x-interval
//! and every arc-arc crossing has a rational abscissa, so the region is cut
//! into vertical slabs at rational critical abscissae. Inside a slab the arcs
//! are totally ordered by height; the cells between consecutive arcs are then
//! joined across slab boundaries wherever their open height intervals overlap.
//! Heights are compared through their squares, which are rational at rational
//! abscissae.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Roots;
use num_traits::{One, Zero};

use crate::dsu::DisjointSets;
use crate::error::{MlpError, Result};
use crate::geometry::{
    big_to_rat, candidate_forms, enumerate_forms, int, rat, sign, validate_discriminant,
    AlgebraicPoint, QuadForm, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub usize);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A geodesic clipped to the domain. Vertical arcs have `x_lo == x_hi` and
/// run from the bottom arc up to the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub form: QuadForm,
    pub x_lo: Rational,
    pub x_hi: Rational,
}

impl Arc {
    pub fn is_vertical(&self) -> bool {
        self.form.is_vertical()
    }

    pub fn height_sq_at(&self, x: &Rational) -> Rational {
        self.form.height_sq_at(x)
    }

    fn spans(&self, x: &Rational) -> bool {
        !self.is_vertical() && &self.x_lo <= x && x <= &self.x_hi
    }
}

#[derive(Clone, Debug)]
pub struct Slab {
    pub x_lo: Rational,
    pub x_hi: Rational,
    /// Semicircle arcs crossing the slab, bottom to top.
    pub arcs: Vec<usize>,
    /// Face of each cell, bottom to top; one more than `arcs`.
    pub cells: Vec<FaceId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundaryFlags {
    pub left_wall_in_e: bool,
    pub right_wall_in_e: bool,
    pub bottom_arc_in_e: bool,
}

/// Open piece of a wall, as an interval of squared heights. `s_hi` is `None`
/// for the piece running up into the cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSegment {
    pub s_lo: Rational,
    pub s_hi: Option<Rational>,
    pub face: FaceId,
}

/// Open piece of the bottom arc `|t| = 1`, as an x-interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomSegment {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub face: FaceId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundarySegments {
    pub left: Vec<WallSegment>,
    pub right: Vec<WallSegment>,
    pub bottom: Vec<BottomSegment>,
    pub flags: BoundaryFlags,
}

#[derive(Clone, Debug)]
pub struct Face {
    pub id: FaceId,
    pub sample: AlgebraicPoint,
    pub is_cusp: bool,
    pub left_wall: Vec<(Rational, Option<Rational>)>,
    pub right_wall: Vec<(Rational, Option<Rational>)>,
    pub bottom: Vec<(Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Face(FaceId),
    /// The point lies on the exceptional set; these faces contain it in their closure.
    OnExceptional(Vec<FaceId>),
}

#[derive(Clone, Debug)]
pub struct FaceComplex {
    pub disc: i64,
    pub forms: Vec<QuadForm>,
    pub cap: Rational,
    pub cap_sq: Rational,
    pub arcs: Vec<Arc>,
    pub critical_xs: Vec<Rational>,
    pub slabs: Vec<Slab>,
    pub faces: Vec<Face>,
    pub segments: BoundarySegments,
    face_signs: Vec<Vec<i8>>,
    sign_index: HashMap<Vec<i8>, FaceId>,
}

/// Smallest integer strictly above both `sqrt(D)/2` and the point `i`.
pub fn default_cap(disc: i64) -> i64 {
    (disc.sqrt() / 2 + 1).max(2)
}

pub fn build_arrangement(disc: i64) -> Result<FaceComplex> {
    validate_discriminant(disc)?;
    build_arrangement_with_cap(disc, int(default_cap(disc)))
}

pub fn build_arrangement_with_cap(disc: i64, cap: Rational) -> Result<FaceComplex> {
    let forms = enumerate_forms(disc)?;
    let cap_sq = &cap * &cap;
    if cap_sq <= rat(disc, 4) || cap_sq <= Rational::one() {
        return Err(MlpError::CapTooLow);
    }
    let half = rat(1, 2);

    let mut flags = BoundaryFlags::default();
    let mut arcs = Vec::new();
    for q in &forms {
        if q.is_vertical() {
            let x = -big_to_rat(&q.c) / big_to_rat(&q.b);
            if x == -half.clone() {
                flags.left_wall_in_e = true;
                continue;
            }
            if x == half {
                flags.right_wall_in_e = true;
                continue;
            }
        } else if q.b.is_zero() && (&q.a + &q.c).is_zero() {
            flags.bottom_arc_in_e = true;
            continue;
        }
        let (x_lo, x_hi) = q.clip_to_domain().expect("enumerated forms meet the domain");
        arcs.push(Arc {
            form: q.clone(),
            x_lo,
            x_hi,
        });
    }

    let critical_xs = critical_abscissae(&arcs);
    let verticals: BTreeSet<Rational> = arcs
        .iter()
        .filter(|a| a.is_vertical())
        .map(|a| a.x_lo.clone())
        .collect();

    let ctx = Bounds {
        arcs: &arcs,
        cap_sq: &cap_sq,
    };

    // Slabs and their cells.
    let mut slab_arcs = Vec::with_capacity(critical_xs.len() - 1);
    let mut cell_base = Vec::with_capacity(critical_xs.len() - 1);
    let mut cells = DisjointSets::new(0);
    for w in critical_xs.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let mut active: Vec<usize> = (0..arcs.len()).filter(|&i| arcs[i].spans(&w[0]) && arcs[i].spans(&w[1])).collect();
        let mut keyed: Vec<(Rational, usize)> = active.drain(..).map(|i| (arcs[i].height_sq_at(&mid), i)).collect();
        keyed.sort();
        debug_assert!(keyed.windows(2).all(|p| p[0].0 < p[1].0), "arcs cross inside a slab");
        let active: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
        cell_base.push(cells.len());
        for _ in 0..=active.len() {
            cells.push();
        }
        slab_arcs.push(active);
    }

    // Join cells across slab boundaries.
    for j in 0..slab_arcs.len().saturating_sub(1) {
        let x = &critical_xs[j + 1];
        if verticals.contains(x) {
            continue;
        }
        let left = ctx.levels(&slab_arcs[j], x);
        let right = ctx.levels(&slab_arcs[j + 1], x);
        let (mut l, mut r) = (0, 0);
        while l + 1 < left.len() && r + 1 < right.len() {
            let lo = std::cmp::max(&left[l], &right[r]);
            let hi = std::cmp::min(&left[l + 1], &right[r + 1]);
            if lo < hi {
                cells.union(cell_base[j] + l, cell_base[j + 1] + r);
            }
            if left[l + 1] < right[r + 1] {
                l += 1;
            } else {
                r += 1;
            }
        }
    }

    // Canonical face numbering: first appearance, slabs left to right, cells top down.
    let mut face_of_root: BTreeMap<usize, FaceId> = BTreeMap::new();
    let mut samples: Vec<AlgebraicPoint> = Vec::new();
    let mut is_cusp: Vec<bool> = Vec::new();
    let mut slabs = Vec::with_capacity(slab_arcs.len());
    for (j, active) in slab_arcs.into_iter().enumerate() {
        let (x_lo, x_hi) = (critical_xs[j].clone(), critical_xs[j + 1].clone());
        let mid = (&x_lo + &x_hi) / int(2);
        let levels = ctx.levels(&active, &mid);
        let mut slab_cells = vec![FaceId(0); active.len() + 1];
        for k in (0..=active.len()).rev() {
            let root = cells.find(cell_base[j] + k);
            let next = FaceId(face_of_root.len());
            let face = *face_of_root.entry(root).or_insert_with(|| {
                samples.push(AlgebraicPoint {
                    x: mid.clone(),
                    s: (&levels[k] + &levels[k + 1]) / int(2),
                });
                is_cusp.push(false);
                next
            });
            if k == active.len() {
                is_cusp[face.0] = true;
            }
            slab_cells[k] = face;
        }
        slabs.push(Slab {
            x_lo,
            x_hi,
            arcs: active,
            cells: slab_cells,
        });
    }

    let segments = boundary_segments_of(&ctx, &slabs, &critical_xs, &flags);

    let mut faces: Vec<Face> = samples
        .into_iter()
        .zip(is_cusp)
        .enumerate()
        .map(|(i, (sample, is_cusp))| Face {
            id: FaceId(i),
            sample,
            is_cusp,
            left_wall: Vec::new(),
            right_wall: Vec::new(),
            bottom: Vec::new(),
        })
        .collect();
    for seg in &segments.left {
        faces[seg.face.0].left_wall.push((seg.s_lo.clone(), seg.s_hi.clone()));
    }
    for seg in &segments.right {
        faces[seg.face.0].right_wall.push((seg.s_lo.clone(), seg.s_hi.clone()));
    }
    for seg in &segments.bottom {
        faces[seg.face.0].bottom.push((seg.x_lo.clone(), seg.x_hi.clone()));
    }

    let face_signs: Vec<Vec<i8>> = faces
        .iter()
        .map(|f| forms.iter().map(|q| sign(&q.eval(&f.sample))).collect())
        .collect();
    let mut sign_index = HashMap::new();
    for (i, signs) in face_signs.iter().enumerate() {
        assert!(signs.iter().all(|&s| s != 0), "sample point on an arc");
        let prev = sign_index.insert(signs.clone(), FaceId(i));
        assert!(prev.is_none(), "two faces share a sign pattern");
    }

    Ok(FaceComplex {
        disc,
        forms,
        cap,
        cap_sq,
        arcs,
        critical_xs,
        slabs,
        faces,
        segments,
        face_signs,
        sign_index,
    })
}

struct Bounds<'a> {
    arcs: &'a [Arc],
    cap_sq: &'a Rational,
}

impl Bounds<'_> {
    /// Squared heights of the bottom arc, the given arcs, and the cap at `x`.
    fn levels(&self, active: &[usize], x: &Rational) -> Vec<Rational> {
        let mut v = Vec::with_capacity(active.len() + 2);
        v.push(Rational::one() - x * x);
        v.extend(active.iter().map(|&i| self.arcs[i].height_sq_at(x)));
        v.push(self.cap_sq.clone());
        v
    }
}

/// Walls, x = 0, arc endpoints, apexes, vertical abscissae and all pairwise
/// crossings of semicircle arcs.
fn critical_abscissae(arcs: &[Arc]) -> Vec<Rational> {
    let half = rat(1, 2);
    let mut xs: BTreeSet<Rational> = [-half.clone(), Rational::zero(), half.clone()].into_iter().collect();
    for arc in arcs {
        xs.insert(arc.x_lo.clone());
        xs.insert(arc.x_hi.clone());
        if !arc.is_vertical() {
            let apex = -big_to_rat(&arc.form.b) / (int(2) * big_to_rat(&arc.form.a));
            if arc.x_lo < apex && apex < arc.x_hi {
                xs.insert(apex);
            }
        }
    }
    for (i, p) in arcs.iter().enumerate() {
        for q in &arcs[i + 1..] {
            if let Some(x) = crossing_abscissa(p, q) {
                xs.insert(x);
            }
        }
    }
    xs.into_iter().collect()
}

/// Abscissa where two semicircle arcs cross inside the domain. Subtracting
/// the two circle equations leaves a linear equation in x.
fn crossing_abscissa(p: &Arc, q: &Arc) -> Option<Rational> {
    if p.is_vertical() || q.is_vertical() {
        return None;
    }
    let (pf, qf) = (&p.form, &q.form);
    let det = &qf.a * &pf.b - &pf.a * &qf.b;
    if det.is_zero() {
        return None;
    }
    let x = -big_to_rat(&(&qf.a * &pf.c - &pf.a * &qf.c)) / big_to_rat(&det);
    (p.spans(&x) && q.spans(&x)).then_some(x)
}

fn slab_index(critical_xs: &[Rational], x: &Rational) -> usize {
    // index j with critical_xs[j] <= x < critical_xs[j+1], clamped to the last slab
    let j = critical_xs.partition_point(|c| c <= x);
    j.saturating_sub(1).min(critical_xs.len() - 2)
}

fn boundary_segments_of(
    ctx: &Bounds<'_>,
    slabs: &[Slab],
    critical_xs: &[Rational],
    flags: &BoundaryFlags,
) -> BoundarySegments {
    let half = rat(1, 2);
    let wall = |slab: &Slab, x: &Rational| -> Vec<WallSegment> {
        let levels = ctx.levels(&slab.arcs, x);
        let top = levels.len() - 2;
        (0..levels.len() - 1)
            .filter(|&k| levels[k] < levels[k + 1])
            .map(|k| WallSegment {
                s_lo: levels[k].clone(),
                s_hi: (k != top).then(|| levels[k + 1].clone()),
                face: slab.cells[k],
            })
            .collect()
    };
    let left = if flags.left_wall_in_e {
        Vec::new()
    } else {
        wall(&slabs[0], &-half.clone())
    };
    let right = if flags.right_wall_in_e {
        Vec::new()
    } else {
        wall(slabs.last().unwrap(), &half)
    };

    let bottom = if flags.bottom_arc_in_e {
        Vec::new()
    } else {
        let mut breaks: BTreeSet<Rational> = [-half.clone(), Rational::zero(), half.clone()].into_iter().collect();
        for arc in ctx.arcs {
            for x in [&arc.x_lo, &arc.x_hi] {
                let on_bottom = if arc.is_vertical() {
                    true
                } else {
                    x * x + arc.height_sq_at(x) == Rational::one()
                };
                if on_bottom {
                    breaks.insert(x.clone());
                }
            }
        }
        let breaks: Vec<Rational> = breaks.into_iter().collect();
        breaks
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / int(2);
                let slab = &slabs[slab_index(critical_xs, &mid)];
                BottomSegment {
                    x_lo: w[0].clone(),
                    x_hi: w[1].clone(),
                    face: slab.cells[0],
                }
            })
            .collect()
    };

    BoundarySegments {
        left,
        right,
        bottom,
        flags: flags.clone(),
    }
}

impl FaceComplex {
    /// Number of faces, `r_F` for the standard domain.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Faces reaching the cap.
    pub fn cusp_face_count(&self) -> usize {
        self.faces.iter().filter(|f| f.is_cusp).count()
    }

    pub fn boundary_segments(&self) -> &BoundarySegments {
        &self.segments
    }

    pub fn flags(&self) -> &BoundaryFlags {
        &self.segments.flags
    }

    pub fn face_signs(&self, f: FaceId) -> &[i8] {
        &self.face_signs[f.0]
    }

    /// Point location in the capped closed domain.
    pub fn locate(&self, p: &AlgebraicPoint) -> Result<Location> {
        if !p.in_domain_closure() || p.s > self.cap_sq {
            return Err(MlpError::OutOfRegion);
        }
        Ok(self.locate_in_domain(p))
    }

    /// Point location in the closed standard domain, cap ignored. Points above
    /// the cap lie in cusp faces, which have the same sign pattern there.
    pub fn locate_in_domain(&self, p: &AlgebraicPoint) -> Location {
        debug_assert!(p.in_domain_closure());
        let signs: Vec<i8> = self.forms.iter().map(|q| sign(&q.eval(p))).collect();
        if signs.iter().all(|&s| s != 0) {
            return Location::Face(
                *self
                    .sign_index
                    .get(&signs)
                    .expect("every non-exceptional point of the domain lies in a face"),
            );
        }
        let adjacent = self
            .face_signs
            .iter()
            .enumerate()
            .filter(|(_, fs)| fs.iter().zip(&signs).all(|(&f, &s)| s == 0 || s == f))
            .map(|(i, _)| FaceId(i))
            .collect();
        Location::OnExceptional(adjacent)
    }

    /// `(V, E, F)` of the cell complex formed by the capped domain boundary and
    /// the arcs, counted from the geometry alone. Bounded faces only.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        let half = rat(1, 2);
        let mut vertices: BTreeSet<AlgebraicPoint> = BTreeSet::new();
        for x in [-half.clone(), half.clone()] {
            vertices.insert(AlgebraicPoint { x: x.clone(), s: rat(3, 4) });
            vertices.insert(AlgebraicPoint { x, s: self.cap_sq.clone() });
        }
        for arc in &self.arcs {
            if arc.is_vertical() {
                let x = arc.x_lo.clone();
                vertices.insert(AlgebraicPoint { s: Rational::one() - &x * &x, x: x.clone() });
                vertices.insert(AlgebraicPoint { x, s: self.cap_sq.clone() });
            } else {
                for x in [&arc.x_lo, &arc.x_hi] {
                    vertices.insert(AlgebraicPoint { x: x.clone(), s: arc.height_sq_at(x) });
                }
            }
        }
        for (i, p) in self.arcs.iter().enumerate() {
            for q in &self.arcs[i + 1..] {
                let x = match (p.is_vertical(), q.is_vertical()) {
                    (false, false) => crossing_abscissa(p, q),
                    (true, false) => q.spans(&p.x_lo).then(|| p.x_lo.clone()),
                    (false, true) => p.spans(&q.x_lo).then(|| q.x_lo.clone()),
                    (true, true) => None,
                };
                if let Some(x) = x {
                    let semi = if p.is_vertical() { q } else { p };
                    vertices.insert(AlgebraicPoint { s: semi.height_sq_at(&x), x });
                }
            }
        }

        let on_count = |pred: &dyn Fn(&AlgebraicPoint) -> bool| vertices.iter().filter(|v| pred(v)).count();
        let mut edges = 0;
        for arc in &self.arcs {
            let n = if arc.is_vertical() {
                on_count(&|v| v.x == arc.x_lo)
            } else {
                on_count(&|v| arc.x_lo <= v.x && v.x <= arc.x_hi && arc.form.eval(v).is_zero())
            };
            edges += n - 1;
        }
        edges += on_count(&|v| v.x == -half.clone()) - 1;
        edges += on_count(&|v| v.x == half) - 1;
        edges += on_count(&|v| v.abs_sq() == Rational::one()) - 1;
        edges += on_count(&|v| v.s == self.cap_sq) - 1;
        (vertices.len(), edges, self.faces.len())
    }

    /// Faces whose closure contains `p`, for any `p` in the closed domain.
    pub fn adjacent_faces(&self, p: &AlgebraicPoint) -> Vec<FaceId> {
        match self.locate_in_domain(p) {
            Location::Face(f) => vec![f],
            Location::OnExceptional(v) => v,
        }
    }
}

/// One sample point in each connected component of `H \ E_D` whose closure
/// contains `p`, keyed by its sign pattern against the geodesics through `p`.
/// A point off the exceptional set yields a single sample, `p` itself.
///
/// Samples are taken on the vertical lines `x = Re p +- delta` between the
/// crossings of the geodesics through `p`, shrinking `delta` until every
/// sample sees every other nearby geodesic on the same side as `p` does.
pub fn adjacent_sector_samples(disc: i64, p: &AlgebraicPoint) -> Vec<(Vec<i8>, AlgebraicPoint)> {
    let reach = rat(1, 8);
    let s_floor = &p.s / int(4);
    let local = candidate_forms(disc, &(&p.x - &reach), &(&p.x + &reach), &s_floor);
    let (through, others): (Vec<QuadForm>, Vec<QuadForm>) = local.into_iter().partition(|q| q.eval(p).is_zero());
    if through.is_empty() {
        return vec![(Vec::new(), p.clone())];
    }
    let other_signs: Vec<i8> = others.iter().map(|q| sign(&q.eval(p))).collect();
    let target = 2 * through.len();

    let mut delta = rat(1, 16);
    for _ in 0..64 {
        let mut found: BTreeMap<Vec<i8>, AlgebraicPoint> = BTreeMap::new();
        for x1 in [&p.x + &delta, &p.x - &delta] {
            let mut crossings: Vec<Rational> = through
                .iter()
                .filter(|q| !q.is_vertical())
                .map(|q| q.height_sq_at(&x1))
                .collect();
            crossings.sort();
            crossings.dedup();
            let candidates: Vec<Rational> = if crossings.is_empty() {
                vec![p.s.clone()]
            } else {
                let mut c = vec![&crossings[0] - &delta];
                c.extend(crossings.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
                c.push(crossings.last().unwrap() + &delta);
                c
            };
            for s in candidates {
                if s <= s_floor {
                    continue;
                }
                let q = AlgebraicPoint { x: x1.clone(), s };
                let key: Vec<i8> = through.iter().map(|f| sign(&f.eval(&q))).collect();
                if key.contains(&0) {
                    continue;
                }
                let clean = others
                    .iter()
                    .zip(&other_signs)
                    .all(|(f, &sp)| sign(&f.eval(&q)) == sp);
                if clean {
                    found.entry(key).or_insert(q);
                }
            }
        }
        if found.len() == target {
            return found.into_iter().collect();
        }
        delta /= int(4);
    }
    panic!("could not separate the sectors around {p}");
}
