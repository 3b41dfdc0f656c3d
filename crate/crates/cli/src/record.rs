use serde::{Deserialize, Serialize};

use mlp_core::{fraction_string, is_even_square, LocalPolySpace};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FacePoly {
    pub face: usize,
    /// Coefficients of `X^0, X^1, ...` as `p/q`.
    pub coeffs: Vec<String>,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BasisRecord {
    pub orbit: Option<usize>,
    pub faces: Vec<FacePoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Flags {
    pub even_square: bool,
    pub augmented: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRecord {
    #[serde(rename = "D")]
    pub disc: i64,
    pub k: i64,
    pub forms: Vec<[i64; 3]>,
    #[serde(rename = "rF")]
    pub r_f: usize,
    pub cusp_faces: usize,
    /// Minimal face count over fundamental domains, via the weight-0 dimension.
    pub orbit_count: usize,
    pub dim: usize,
    pub basis: Vec<BasisRecord>,
    pub flags: Flags,
    pub tool_version: String,
}

impl ResultRecord {
    pub fn from_space(space: &LocalPolySpace) -> Self {
        let fc = &space.complex;
        let basis = space
            .basis
            .iter()
            .map(|b| BasisRecord {
                orbit: b.orbit,
                faces: b
                    .support()
                    .into_iter()
                    .map(|f| {
                        let p = &b.polys[f.0];
                        FacePoly {
                            face: f.0,
                            coeffs: p.coeffs().iter().map(fraction_string).collect(),
                            poly: p.to_string(),
                        }
                    })
                    .collect(),
            })
            .collect();
        ResultRecord {
            disc: space.disc,
            k: space.weight.k(),
            forms: fc
                .forms
                .iter()
                .map(|q| q.to_i64().expect("forms of small discriminants fit in i64"))
                .collect(),
            r_f: fc.face_count(),
            cusp_faces: fc.cusp_face_count(),
            orbit_count: space.gluing.orbit_count(),
            dim: space.dimension(),
            basis,
            flags: Flags {
                even_square: is_even_square(space.disc),
                augmented: space.augmented,
            },
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("records serialize");
        s.push('\n');
        s
    }
}
