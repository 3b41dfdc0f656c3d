//! Side pairings of the standard domain restricted to the exceptional-free
//! parts of its boundary.
//!
//! An edge `(from, to, g)` records the relation `P_from = P_to |_k g` between
//! the polynomials of two faces. Wall pieces are paired by `T`, bottom pieces
//! by `S`. Each connected component of the resulting multigraph is one
//! SL2(Z)-orbit of components of `H \ E_D`. A breadth-first forest assigns
//! every face a transport word `w_f` with `P_f = P_root | w_f`; every non-tree
//! edge `(f, f', g)` then forces `P_root` to be fixed by `w_f' g w_f^-1`.

use std::collections::VecDeque;

use crate::arrangement::{BottomSegment, FaceComplex, FaceId};
use crate::geometry::{Mat2, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T,
    S,
}

impl Generator {
    pub fn matrix(self) -> Mat2 {
        match self {
            Generator::T => Mat2::t(),
            Generator::S => Mat2::s(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentRef {
    /// Left-wall piece by squared height; `None` means up to the cusp.
    Wall { s_lo: Rational, s_hi: Option<Rational> },
    /// Bottom-arc piece with `x < 0`, paired with its mirror.
    Bottom { x_lo: Rational, x_hi: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingEdge {
    pub from: FaceId,
    pub to: FaceId,
    pub generator: Mat2,
    pub source: Option<SegmentRef>,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub root: FaceId,
    pub faces: Vec<FaceId>,
    /// Elements whose slash action must fix the root polynomial.
    pub cycles: Vec<Mat2>,
}

#[derive(Clone, Debug)]
pub struct GluingGraph {
    pub face_count: usize,
    pub edges: Vec<GluingEdge>,
    pub orbits: Vec<Orbit>,
    orbit_of: Vec<usize>,
    transport: Vec<Mat2>,
}

pub fn build_gluing_graph(fc: &FaceComplex) -> GluingGraph {
    let seg = fc.boundary_segments();
    let mut edges = Vec::new();

    assert_eq!(seg.left.len(), seg.right.len(), "wall pieces are not paired by T");
    for (l, r) in seg.left.iter().zip(&seg.right) {
        assert!(l.s_lo == r.s_lo && l.s_hi == r.s_hi, "wall pieces are not paired by T");
        edges.push(GluingEdge {
            from: l.face,
            to: r.face,
            generator: Mat2::t(),
            source: Some(SegmentRef::Wall {
                s_lo: l.s_lo.clone(),
                s_hi: l.s_hi.clone(),
            }),
        });
    }

    let (neg, pos): (Vec<&BottomSegment>, Vec<&BottomSegment>) =
        seg.bottom.iter().partition(|b| b.x_hi <= Rational::from_integer(0.into()));
    assert_eq!(neg.len(), pos.len(), "bottom pieces are not paired by S");
    for (n, p) in neg.iter().zip(pos.iter().rev()) {
        assert!(n.x_lo == -p.x_hi.clone() && n.x_hi == -p.x_lo.clone(), "bottom pieces are not paired by S");
        edges.push(GluingEdge {
            from: n.face,
            to: p.face,
            generator: Mat2::s(),
            source: Some(SegmentRef::Bottom {
                x_lo: n.x_lo.clone(),
                x_hi: n.x_hi.clone(),
            }),
        });
    }

    GluingGraph::from_edges(fc.face_count(), edges)
}

impl GluingGraph {
    /// Orbits, forest and cycle elements for an arbitrary edge list. Roots are
    /// the lowest face id of each orbit and edges are scanned in list order,
    /// so the result is a function of the inputs.
    pub fn from_edges(face_count: usize, edges: Vec<GluingEdge>) -> Self {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); face_count];
        for (i, e) in edges.iter().enumerate() {
            incident[e.from.0].push(i);
            if e.to != e.from {
                incident[e.to.0].push(i);
            }
        }

        let mut orbit_of = vec![usize::MAX; face_count];
        let mut transport: Vec<Option<Mat2>> = vec![None; face_count];
        let mut tree_edge = vec![false; edges.len()];
        let mut orbits = Vec::new();

        for root in 0..face_count {
            if orbit_of[root] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[root] = id;
            transport[root] = Some(Mat2::identity());
            let mut faces = vec![FaceId(root)];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &ei in &incident[u] {
                    let e = &edges[ei];
                    let (v, word) = if e.from.0 == u && orbit_of[e.to.0] == usize::MAX {
                        // P_to = P_from | g^-1
                        (e.to.0, transport[u].as_ref().unwrap() * &e.generator.inverse())
                    } else if e.to.0 == u && orbit_of[e.from.0] == usize::MAX {
                        (e.from.0, transport[u].as_ref().unwrap() * &e.generator)
                    } else {
                        continue;
                    };
                    tree_edge[ei] = true;
                    orbit_of[v] = id;
                    transport[v] = Some(word);
                    faces.push(FaceId(v));
                    queue.push_back(v);
                }
            }
            faces.sort();
            orbits.push(Orbit {
                root: FaceId(root),
                faces,
                cycles: Vec::new(),
            });
        }

        let transport: Vec<Mat2> = transport.into_iter().map(Option::unwrap).collect();
        for (ei, e) in edges.iter().enumerate() {
            if tree_edge[ei] {
                continue;
            }
            let element = &(&transport[e.to.0] * &e.generator) * &transport[e.from.0].inverse();
            orbits[orbit_of[e.from.0]].cycles.push(element);
        }

        GluingGraph {
            face_count,
            edges,
            orbits,
            orbit_of,
            transport,
        }
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_of(&self, f: FaceId) -> usize {
        self.orbit_of[f.0]
    }

    /// `w_f` with `P_f = P_root | w_f`.
    pub fn transport(&self, f: FaceId) -> &Mat2 {
        &self.transport[f.0]
    }

    /// Orbits containing at least one cusp face.
    pub fn cusp_orbit_count(&self, fc: &FaceComplex) -> usize {
        let mut seen: Vec<usize> = fc
            .faces
            .iter()
            .filter(|f| f.is_cusp)
            .map(|f| self.orbit_of(f.id))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}
