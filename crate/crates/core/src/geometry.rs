//! The Voronoi cell of the lattice `A(ρ)` in dual coordinates `y = A x`.
//!
//! In `y`-coordinates the 24 vertices are linear in the Selling parameters.
//! A vertex is labelled `v_ijk` by an ordered triple of distinct superbase
//! indices; its antipode is `v_lkj` where `l` is the missing index. The 14
//! faces are six parallelograms (`F12`, `F13`, `F23` and their antipodes) and
//! eight centrally symmetric hexagons (`F0`..`F3` and antipodes).
//!
//! Areas are measured in the Euclidean metric: for a face with `y`-space
//! vector area `V`, the physical area is `√(VᵀAV) / √det A`.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::linalg::{add, cross, dot, neg, norm, quad_form, scale, sub};
use crate::selling::{gram_matrix, GramMatrix, SellingParams};

pub type Vec3 = [f64; 3];

/// Relative area under which a face is reported as degenerate.
pub const DEGENERATE_FACE_TOL: f64 = 1e-12;

/// Vertex label `v_ijk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabel(pub [u8; 3]);

impl VertexLabel {
    /// Label of the centrally opposite vertex: `v_ijk ↦ v_lkj`.
    pub fn antipode(self) -> Self {
        let [i, j, k] = self.0;
        let l = 6 - i - j - k;
        VertexLabel([l, k, j])
    }

    /// Position in [`VERTEX_LABELS`].
    pub fn index(self) -> usize {
        VERTEX_LABELS
            .iter()
            .position(|&l| l == self)
            .expect("vertex label is one of the 24 cell vertices")
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.0;
        write!(f, "v{i}{j}{k}")
    }
}

const fn vl(i: u8, j: u8, k: u8) -> VertexLabel {
    VertexLabel([i, j, k])
}

/// The 24 vertex labels in output order: the 14 generators with explicit
/// formulas followed by the 10 obtained by central inversion.
pub const VERTEX_LABELS: [VertexLabel; 24] = [
    vl(1, 0, 2),
    vl(1, 2, 0),
    vl(1, 0, 3),
    vl(1, 3, 0),
    vl(1, 2, 3),
    vl(1, 3, 2),
    vl(2, 0, 1),
    vl(2, 1, 0),
    vl(2, 1, 3),
    vl(2, 3, 1),
    vl(2, 3, 0),
    vl(2, 0, 3),
    vl(3, 1, 2),
    vl(3, 2, 1),
    vl(3, 0, 2),
    vl(3, 2, 0),
    vl(3, 0, 1),
    vl(3, 1, 0),
    vl(0, 2, 3),
    vl(0, 3, 2),
    vl(0, 1, 3),
    vl(0, 3, 1),
    vl(0, 1, 2),
    vl(0, 2, 1),
];

/// Central-inversion completion: `(derived, source)` with `v_derived = -v_source`.
pub const INVERSION_TABLE: [(VertexLabel, VertexLabel); 10] = [
    (vl(3, 0, 2), vl(1, 2, 0)),
    (vl(3, 2, 0), vl(1, 0, 2)),
    (vl(3, 0, 1), vl(2, 1, 0)),
    (vl(3, 1, 0), vl(2, 0, 1)),
    (vl(0, 2, 3), vl(1, 3, 2)),
    (vl(0, 3, 2), vl(1, 2, 3)),
    (vl(0, 1, 3), vl(2, 3, 1)),
    (vl(0, 3, 1), vl(2, 1, 3)),
    (vl(0, 1, 2), vl(3, 2, 1)),
    (vl(0, 2, 1), vl(3, 1, 2)),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexY {
    pub label: VertexLabel,
    pub coords: Vec3,
}

/// The 24 vertices in `y`-coordinates, ordered as [`VERTEX_LABELS`].
///
/// Defined for every `ρ ≥ 0`; on strata several vertices coincide.
pub fn cell_vertices(rho: &[f64; 6]) -> [VertexY; 24] {
    let [a, b, c, d, e, f] = *rho;
    let generators: [Vec3; 14] = [
        [a + d + e, f - b - d, -c - e - f],  // v102
        [a + d + e, b - d + f, -c - e - f],  // v120
        [a + d + e, -b - d - f, f - c - e],  // v103
        [a + d + e, -b - d - f, c + f - e],  // v130
        [a + d + e, b - d + f, c - e - f],   // v123
        [a + d + e, b - d - f, c - e + f],   // v132
        [-a - d + e, b + d + f, -c - e - f], // v201
        [a - d + e, b + d + f, -c - e - f],  // v210
        [a - d + e, b + d + f, c - e - f],   // v213
        [a - d - e, b + d + f, c + e - f],   // v231
        [-a - d - e, b + d + f, c + e - f],  // v230
        [-a - d - e, b + d + f, -c + e - f], // v203
        [a + d - e, b - d - f, c + e + f],   // v312
        [a - d - e, b + d - f, c + e + f],   // v321
    ]
    .map(|v| scale(v, 0.5));

    let mut coords = [[0.0; 3]; 24];
    coords[..14].copy_from_slice(&generators);
    for (derived, source) in INVERSION_TABLE {
        coords[derived.index()] = neg(coords[source.index()]);
    }
    std::array::from_fn(|k| VertexY {
        label: VERTEX_LABELS[k],
        coords: coords[k],
    })
}

/// The seven representative faces; each has an antipodal partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceKind {
    F12,
    F13,
    F23,
    F1,
    F2,
    F3,
    F0,
}

impl FaceKind {
    pub const ALL: [FaceKind; 7] = [
        FaceKind::F12,
        FaceKind::F13,
        FaceKind::F23,
        FaceKind::F1,
        FaceKind::F2,
        FaceKind::F3,
        FaceKind::F0,
    ];

    pub fn is_hexagon(self) -> bool {
        matches!(self, FaceKind::F1 | FaceKind::F2 | FaceKind::F3 | FaceKind::F0)
    }

    pub fn name(self) -> &'static str {
        match self {
            FaceKind::F12 => "F12",
            FaceKind::F13 => "F13",
            FaceKind::F23 => "F23",
            FaceKind::F1 => "F1",
            FaceKind::F2 => "F2",
            FaceKind::F3 => "F3",
            FaceKind::F0 => "F0",
        }
    }

    /// Vertex cycle of the representative face.
    pub fn cycle(self) -> &'static [VertexLabel] {
        const F12: [VertexLabel; 4] = [vl(1, 2, 0), vl(1, 2, 3), vl(2, 1, 3), vl(2, 1, 0)];
        const F13: [VertexLabel; 4] = [vl(1, 3, 0), vl(1, 3, 2), vl(3, 1, 2), vl(3, 1, 0)];
        const F23: [VertexLabel; 4] = [vl(2, 3, 0), vl(2, 3, 1), vl(3, 2, 1), vl(3, 2, 0)];
        const F1: [VertexLabel; 6] = [
            vl(1, 0, 2),
            vl(1, 2, 0),
            vl(1, 2, 3),
            vl(1, 3, 2),
            vl(1, 3, 0),
            vl(1, 0, 3),
        ];
        const F2: [VertexLabel; 6] = [
            vl(2, 0, 1),
            vl(2, 1, 0),
            vl(2, 1, 3),
            vl(2, 3, 1),
            vl(2, 3, 0),
            vl(2, 0, 3),
        ];
        const F3: [VertexLabel; 6] = [
            vl(3, 0, 2),
            vl(3, 2, 0),
            vl(3, 2, 1),
            vl(3, 1, 2),
            vl(3, 1, 0),
            vl(3, 0, 1),
        ];
        const F0: [VertexLabel; 6] = [
            vl(0, 1, 2),
            vl(0, 2, 1),
            vl(0, 2, 3),
            vl(0, 3, 2),
            vl(0, 3, 1),
            vl(0, 1, 3),
        ];
        match self {
            FaceKind::F12 => &F12,
            FaceKind::F13 => &F13,
            FaceKind::F23 => &F23,
            FaceKind::F1 => &F1,
            FaceKind::F2 => &F2,
            FaceKind::F3 => &F3,
            FaceKind::F0 => &F0,
        }
    }
}

/// A face of the cell: a representative or its antipode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceId {
    pub kind: FaceKind,
    pub opposite: bool,
}

impl FaceId {
    /// All 14 faces: the seven representatives, then their antipodes.
    pub fn all() -> impl Iterator<Item = FaceId> {
        [false, true].into_iter().flat_map(|opposite| {
            FaceKind::ALL
                .into_iter()
                .map(move |kind| FaceId { kind, opposite })
        })
    }

    /// Vertex labels in cycle order (antipodes map every label through
    /// [`VertexLabel::antipode`]).
    pub fn labels(self) -> Vec<VertexLabel> {
        let cycle = self.kind.cycle().iter().copied();
        if self.opposite {
            cycle.map(VertexLabel::antipode).collect()
        } else {
            cycle.collect()
        }
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.opposite {
            write!(f, "-{}", self.kind.name())
        } else {
            f.write_str(self.kind.name())
        }
    }
}

/// Vertex cycles of the seven representative faces.
pub fn face_cycles() -> [(FaceKind, &'static [VertexLabel]); 7] {
    FaceKind::ALL.map(|k| (k, k.cycle()))
}

/// Vector area `½ Σ p_k × p_{k+1}` of a closed polygon.
pub fn area_vector_polygon(points: &[Vec3]) -> Vec3 {
    let n = points.len();
    let mut acc = [0.0; 3];
    for k in 0..n {
        acc = add(acc, cross(points[k], points[(k + 1) % n]));
    }
    scale(acc, 0.5)
}

/// Closed-form vector areas of the seven representative faces, in
/// [`FaceKind::ALL`] order. Signs follow `u·(+1)`; orientation is immaterial
/// for areas.
pub fn area_vectors_closed(rho: &[f64; 6]) -> [(FaceKind, Vec3); 7] {
    let [a, b, c, d, e, f] = *rho;
    let cd = c * d;
    let be = b * e;
    let af = a * f;
    let s1 = b * c + b * f + c * f;
    let s2 = a * c + a * e + c * e;
    let s3 = a * b + a * d + b * d;
    let s0 = d * e + d * f + e * f;
    [
        (FaceKind::F12, [cd, cd, 0.0]),
        (FaceKind::F13, [be, 0.0, be]),
        (FaceKind::F23, [0.0, af, af]),
        (FaceKind::F1, [s1, 0.0, 0.0]),
        (FaceKind::F2, [0.0, s2, 0.0]),
        (FaceKind::F3, [0.0, 0.0, s3]),
        (FaceKind::F0, [s0, s0, s0]),
    ]
}

pub(crate) fn face_area_with(gram: &GramMatrix, v: Vec3) -> f64 {
    (quad_form(&gram.to_array(), v).max(0.0) / gram.det()).sqrt()
}

/// Physical area `√(VᵀAV) / √det A` of a face with `y`-space vector area `v`.
pub fn face_area(rho: &SellingParams, v: Vec3) -> Result<f64> {
    let gram = gram_matrix(rho).map_err(|_| Error::DegenerateCell { det: rho.det() })?;
    Ok(face_area_with(&gram, v))
}

/// Linear map from `y`-coordinates to Euclidean coordinates, `v = B^{-T} y`,
/// with `B` the upper Cholesky factor of `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanEmbedding {
    pub basis: [[f64; 3]; 3],
}

impl EuclideanEmbedding {
    /// Solves `Bᵀ v = y` by forward substitution.
    pub fn y_to_euclid(&self, y: Vec3) -> Vec3 {
        let r = &self.basis;
        let v0 = y[0] / r[0][0];
        let v1 = (y[1] - r[0][1] * v0) / r[1][1];
        let v2 = (y[2] - r[0][2] * v0 - r[1][2] * v1) / r[2][2];
        [v0, v1, v2]
    }

    /// `det B = √det A`.
    pub fn det(&self) -> f64 {
        self.basis[0][0] * self.basis[1][1] * self.basis[2][2]
    }
}

pub fn embed_euclidean(rho: &SellingParams) -> Result<EuclideanEmbedding> {
    let gram = gram_matrix(rho)?;
    Ok(EuclideanEmbedding {
        basis: *gram.cholesky_upper(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceCycle {
    pub id: FaceId,
    /// Indices into [`VoronoiCell::vertices`], ordered counter-clockwise seen
    /// from outside.
    pub vertices: Vec<usize>,
    /// Outward vector area in `y`-coordinates.
    pub area_vector: Vec3,
    /// Euclidean area.
    pub scalar_area: f64,
}

impl FaceCycle {
    pub fn is_degenerate(&self, total_area: f64) -> bool {
        self.scalar_area < DEGENERATE_FACE_TOL * total_area
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiCell {
    pub params: SellingParams,
    pub vertices: Vec<VertexY>,
    pub faces: Vec<FaceCycle>,
    pub total_area: f64,
    pub volume: f64,
}

impl VoronoiCell {
    pub fn face(&self, id: FaceId) -> &FaceCycle {
        self.faces
            .iter()
            .find(|f| f.id == id)
            .expect("every face id is present")
    }

    pub fn vertex_coords(&self, index: usize) -> Vec3 {
        self.vertices[index].coords
    }

    pub fn non_degenerate_faces(&self) -> impl Iterator<Item = &FaceCycle> {
        self.faces
            .iter()
            .filter(|f| !f.is_degenerate(self.total_area))
    }
}

/// Builds the cell from its vertices: polygon vector areas, metric areas and
/// the divergence-theorem volume in the Euclidean embedding.
pub fn build_cell(rho: &SellingParams) -> Result<VoronoiCell> {
    let gram = gram_matrix(rho).map_err(|_| Error::DegenerateCell { det: rho.det() })?;
    let embedding = EuclideanEmbedding {
        basis: *gram.cholesky_upper(),
    };
    let vertices = cell_vertices(rho.as_array()).to_vec();

    let mut faces = Vec::with_capacity(14);
    let mut volume = 0.0;
    for id in FaceId::all() {
        let mut indices: Vec<usize> = id.labels().into_iter().map(VertexLabel::index).collect();
        let pts: Vec<Vec3> = indices.iter().map(|&i| vertices[i].coords).collect();
        let mut area_vector = area_vector_polygon(&pts);
        // the cell contains the origin, so outward means positive flux of the centroid
        if dot(centroid(&pts), area_vector) < 0.0 {
            indices.reverse();
            area_vector = neg(area_vector);
        }

        let euclid: Vec<Vec3> = indices
            .iter()
            .map(|&i| embedding.y_to_euclid(vertices[i].coords))
            .collect();
        volume += dot(centroid(&euclid), area_vector_polygon(&euclid)) / 3.0;

        faces.push(FaceCycle {
            id,
            vertices: indices,
            area_vector,
            scalar_area: face_area_with(&gram, area_vector),
        });
    }
    let total_area = faces.iter().map(|f| f.scalar_area).sum();

    Ok(VoronoiCell {
        params: *rho,
        vertices,
        faces,
        total_area,
        volume: volume.abs(),
    })
}

fn centroid(points: &[Vec3]) -> Vec3 {
    let sum = points.iter().fold([0.0; 3], |acc, &p| add(acc, p));
    scale(sum, 1.0 / points.len() as f64)
}

/// Wavefront OBJ text of the cell in Euclidean coordinates.
///
/// Always writes 24 `v` lines. Faces are written outward-oriented with runs
/// of coincident vertices merged; degenerate faces are replaced by a
/// `# degenerate-face <name>` comment.
pub fn export_obj(cell: &VoronoiCell, embedding: &EuclideanEmbedding) -> String {
    let euclid: Vec<Vec3> = cell
        .vertices
        .iter()
        .map(|v| embedding.y_to_euclid(v.coords))
        .collect();
    let extent = euclid.iter().map(|&p| norm(p)).fold(0.0, f64::max);
    let snap = |x: f64| if x.abs() <= 1e-12 * extent { 0.0 } else { x };

    let mut out = String::new();
    let _ = writeln!(out, "# Voronoi cell, Selling parameters {}", cell.params);
    let _ = writeln!(
        out,
        "# total area {} volume {}",
        format_sig(cell.total_area, 9),
        format_sig(cell.volume, 9)
    );
    for p in &euclid {
        let _ = writeln!(
            out,
            "v {} {} {}",
            format_sig(snap(p[0]), 9),
            format_sig(snap(p[1]), 9),
            format_sig(snap(p[2]), 9)
        );
    }
    let coincide = |i: usize, j: usize| norm(sub(euclid[i], euclid[j])) <= 1e-9 * extent;
    for face in &cell.faces {
        if face.is_degenerate(cell.total_area) {
            let _ = writeln!(out, "# degenerate-face {}", face.id);
            continue;
        }
        let mut kept: Vec<usize> = Vec::with_capacity(face.vertices.len());
        for &i in &face.vertices {
            if kept.last().map_or(true, |&j| !coincide(i, j)) {
                kept.push(i);
            }
        }
        while kept.len() > 1 && coincide(kept[0], kept[kept.len() - 1]) {
            kept.pop();
        }
        let line: Vec<String> = kept.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "f {}", line.join(" "));
    }
    out
}
