//! Macroelement meshes: Clough-Tocher triangles and criss-cross quadrilaterals,
//! refined into sub-triangles with global entity numbering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::exactmath::scalar::{int, parse_rational, ratio, ExactScalar};

pub type Point = [ExactScalar; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MacroKind {
    CloughTocher,
    CrissCross,
    /// An unsplit triangle; used for classical single-element checks.
    Triangle,
}

impl MacroKind {
    pub fn name(&self) -> &'static str {
        match self {
            MacroKind::CloughTocher => "ct",
            MacroKind::CrissCross => "crisscross",
            MacroKind::Triangle => "triangle",
        }
    }

    pub fn corner_count(&self) -> usize {
        match self {
            MacroKind::CrissCross => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for MacroKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("degenerate triangle {0:?}")]
    Degenerate(Vec<String>),
    #[error("cell vertices are in clockwise order: {0:?}")]
    Clockwise(Vec<String>),
    #[error("interior point ({0}, {1}) is not strictly inside the triangle")]
    SplitPointOutside(String, String),
    #[error("quadrilateral is not strictly convex with vertices in counterclockwise cyclic order: {0:?}")]
    NotConvex(Vec<String>),
    #[error("cell {cell}: expected {expected} vertices for kind `{kind}`, got {got}")]
    VertexCount { cell: usize, kind: String, expected: usize, got: usize },
    #[error("cell {cell} references vertex {vertex}, but only {count} vertices exist")]
    VertexIndex { cell: usize, vertex: usize, count: usize },
    #[error("vertices {0} and {1} have identical coordinates")]
    DuplicateVertex(usize, usize),
    #[error("vertex {0} is not used by any cell")]
    UnusedVertex(usize),
    #[error("edge {0}-{1} is traversed in the same direction by two cells (flipped orientation or overlap)")]
    FlippedEdge(usize, usize),
    #[error("edge {0}-{1} is shared by more than two cells")]
    OvercrowdedEdge(usize, usize),
    #[error("vertex {vertex} lies in the interior of edge {a}-{b} (non-conforming interface)")]
    HangingVertex { vertex: usize, a: usize, b: usize },
    #[error("split point given for cell {0}, which is not a Clough-Tocher cell")]
    UnexpectedSplitPoint(usize),
    #[error("mesh has no cells")]
    Empty,
    #[error("unknown cell kind `{0}` (expected `ct` or `crisscross`)")]
    UnknownKind(String),
    #[error("unknown built-in mesh `{0}`; expected unit-square-cc, unit-triangle-ct, grid:NxM:cc or grid:NxM:ct")]
    UnknownBuiltin(String),
    #[error("invalid coordinate `{0}`")]
    BadNumber(String),
    #[error("mesh file: {0}")]
    Json(String),
    #[error("cannot read mesh file {path}: {msg}")]
    Io { path: String, msg: String },
}

fn fmt_point(p: &Point) -> String {
    format!("({}, {})", p[0], p[1])
}

fn fmt_points(ps: &[Point]) -> Vec<String> {
    ps.iter().map(fmt_point).collect()
}

pub fn point(x: ExactScalar, y: ExactScalar) -> Point {
    [x, y]
}

pub fn ipoint(x: i64, y: i64) -> Point {
    [int(x), int(y)]
}

pub fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn cross(a: &Point, b: &Point) -> ExactScalar {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Twice the signed area of the triangle `abc`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> ExactScalar {
    cross(&sub(b, a), &sub(c, a))
}

pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> ExactScalar {
    orient(a, b, c) * ratio(1, 2)
}

/// Unnormalized tangent `b - a` and normal (tangent rotated clockwise) of a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFrame {
    pub tangent: Point,
    pub normal: Point,
    pub length_sq: ExactScalar,
}

impl EdgeFrame {
    pub fn of(a: &Point, b: &Point) -> Self {
        let t = sub(b, a);
        let length_sq = &t[0] * &t[0] + &t[1] * &t[1];
        let normal = [t[1].clone(), -t[0].clone()];
        EdgeFrame { tangent: t, normal, length_sq }
    }
}

/// A parent cell with its refinement. Local vertices are the corners in
/// counterclockwise order followed by the split point (if any); sub-triangle
/// `k` is `(corner k, corner k+1, split)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroElement {
    pub kind: MacroKind,
    pub points: Vec<Point>,
    pub sub_triangles: Vec<[usize; 3]>,
    /// Oriented parent edges; edge `k` joins corners `k` and `k+1` (in some direction).
    pub parent_edges: Vec<[usize; 2]>,
    /// Interior edges `(corner k, split)`; edge `k` separates sub-triangles `k-1` and `k`.
    pub interior_edges: Vec<[usize; 2]>,
}

impl MacroElement {
    fn new(kind: MacroKind, corners: Vec<Point>, split: Option<Point>) -> Self {
        let n = corners.len();
        let mut points = corners;
        let (sub_triangles, interior_edges) = match split {
            Some(s) => {
                points.push(s);
                ((0..n).map(|k| [k, (k + 1) % n, n]).collect(), (0..n).map(|k| [k, n]).collect())
            }
            None => (vec![[0, 1, 2]], Vec::new()),
        };
        let parent_edges = (0..n)
            .map(|k| {
                let (a, b) = (k, (k + 1) % n);
                [a.min(b), a.max(b)]
            })
            .collect();
        MacroElement { kind, points, sub_triangles, parent_edges, interior_edges }
    }

    pub fn corner_count(&self) -> usize {
        self.kind.corner_count()
    }

    pub fn corners(&self) -> &[Point] {
        &self.points[..self.corner_count()]
    }

    pub fn split_point(&self) -> Option<&Point> {
        self.points.get(self.corner_count())
    }

    pub fn triangle_points(&self, t: usize) -> [&Point; 3] {
        let [a, b, c] = self.sub_triangles[t];
        [&self.points[a], &self.points[b], &self.points[c]]
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parent_edges.len() + self.interior_edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.sub_triangles.len()
    }

    pub fn area(&self) -> ExactScalar {
        let c = self.corners();
        (1..c.len() - 1).fold(ExactScalar::zero(), |acc, k| acc + triangle_area(&c[0], &c[k], &c[k + 1]))
    }

    pub fn sub_triangle_area_sum(&self) -> ExactScalar {
        (0..self.face_count()).fold(ExactScalar::zero(), |acc, t| {
            let [a, b, c] = self.triangle_points(t);
            acc + triangle_area(a, b, c)
        })
    }

    /// Sub-triangle used to evaluate point data at a corner.
    pub fn triangle_at_corner(&self, k: usize) -> usize {
        if self.face_count() == 1 {
            0
        } else {
            k
        }
    }

    /// Sub-triangle adjacent to parent edge `k`.
    pub fn triangle_at_parent_edge(&self, k: usize) -> usize {
        if self.face_count() == 1 {
            0
        } else {
            k
        }
    }

    /// The two sub-triangles sharing interior edge `k`: `(k-1, k)` cyclically.
    pub fn triangles_at_interior_edge(&self, k: usize) -> (usize, usize) {
        let n = self.corner_count();
        ((k + n - 1) % n, k)
    }

    pub fn parent_edge_points(&self, k: usize) -> (&Point, &Point) {
        let [a, b] = self.parent_edges[k];
        (&self.points[a], &self.points[b])
    }

    pub fn parent_edge_frame(&self, k: usize) -> EdgeFrame {
        let (a, b) = self.parent_edge_points(k);
        EdgeFrame::of(a, b)
    }

    /// Reorients parent edge `k` to run from `a` to `b` (local corner ids).
    pub fn orient_parent_edge(&mut self, k: usize, a: usize, b: usize) {
        let e = self.parent_edges[k];
        assert!((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a), "edge {k} does not join {a} and {b}");
        self.parent_edges[k] = [a, b];
    }
}

/// Split a counterclockwise triangle through an interior point (default: barycenter).
pub fn split_clough_tocher(triangle: [Point; 3], interior: Option<Point>) -> Result<MacroElement, MeshError> {
    let [a, b, c] = &triangle;
    let o = orient(a, b, c);
    if o.is_zero() {
        return Err(MeshError::Degenerate(fmt_points(&triangle)));
    }
    if o.is_negative() {
        return Err(MeshError::Clockwise(fmt_points(&triangle)));
    }
    let p = match interior {
        Some(p) => p,
        None => {
            let third = ratio(1, 3);
            [(&a[0] + &b[0] + &c[0]) * &third, (&a[1] + &b[1] + &c[1]) * &third]
        }
    };
    let inside = [orient(a, b, &p), orient(b, c, &p), orient(c, a, &p)].iter().all(|v| v.is_positive());
    if !inside {
        return Err(MeshError::SplitPointOutside(p[0].to_string(), p[1].to_string()));
    }
    Ok(MacroElement::new(MacroKind::CloughTocher, triangle.to_vec(), Some(p)))
}

/// Split a strictly convex counterclockwise quadrilateral by its diagonals.
pub fn split_crisscross(quad: [Point; 4]) -> Result<MacroElement, MeshError> {
    let turns: Vec<ExactScalar> = (0..4).map(|k| orient(&quad[k], &quad[(k + 1) % 4], &quad[(k + 2) % 4])).collect();
    if turns.iter().all(|t| t.is_negative()) {
        return Err(MeshError::Clockwise(fmt_points(&quad)));
    }
    if !turns.iter().all(|t| t.is_positive()) {
        return Err(MeshError::NotConvex(fmt_points(&quad)));
    }
    let z = diagonal_intersection(&quad);
    Ok(MacroElement::new(MacroKind::CrissCross, quad.to_vec(), Some(z)))
}

/// Intersection of the diagonals `v0v2` and `v1v3`.
pub fn diagonal_intersection(quad: &[Point; 4]) -> Point {
    let d1 = sub(&quad[2], &quad[0]);
    let d2 = sub(&quad[3], &quad[1]);
    let s = cross(&sub(&quad[1], &quad[0]), &d2) / cross(&d1, &d2);
    [&quad[0][0] + &s * &d1[0], &quad[0][1] + &s * &d1[1]]
}

pub fn unsplit_triangle(triangle: [Point; 3]) -> Result<MacroElement, MeshError> {
    let o = orient(&triangle[0], &triangle[1], &triangle[2]);
    if o.is_zero() {
        return Err(MeshError::Degenerate(fmt_points(&triangle)));
    }
    if o.is_negative() {
        return Err(MeshError::Clockwise(fmt_points(&triangle)));
    }
    Ok(MacroElement::new(MacroKind::Triangle, triangle.to_vec(), None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSpec {
    pub kind: MacroKind,
    pub vertices: Vec<usize>,
    pub split_point: Option<Point>,
}

impl CellSpec {
    pub fn ct(vertices: [usize; 3]) -> Self {
        CellSpec { kind: MacroKind::CloughTocher, vertices: vertices.to_vec(), split_point: None }
    }

    pub fn crisscross(vertices: [usize; 4]) -> Self {
        CellSpec { kind: MacroKind::CrissCross, vertices: vertices.to_vec(), split_point: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Parent,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshEdge {
    /// Global vertex ids, lower id first; this is the edge's orientation.
    pub ends: [usize; 2],
    pub kind: EdgeKind,
    pub triangles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroCell {
    pub element: MacroElement,
    /// Global id of each local vertex.
    pub vertices: Vec<usize>,
    /// Global edge id of each parent edge.
    pub parent_edges: Vec<usize>,
    pub interior_edges: Vec<usize>,
    pub triangles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroMesh {
    /// Parent vertices (input order) followed by split points (macro order).
    pub vertices: Vec<Point>,
    pub parent_vertex_count: usize,
    pub edges: Vec<MeshEdge>,
    pub triangles: Vec<[usize; 3]>,
    pub macros: Vec<MacroCell>,
    pub singular: Vec<bool>,
    pub boundary_vertex: Vec<bool>,
}

/// A macro and local parent-edge index on one side of an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSide {
    pub macro_index: usize,
    pub local_edge: usize,
}

impl MacroMesh {
    pub fn edge_frame(&self, e: usize) -> EdgeFrame {
        let [a, b] = self.edges[e].ends;
        EdgeFrame::of(&self.vertices[a], &self.vertices[b])
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edges[e].triangles.len() == 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn parent_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Parent).count()
    }

    /// Global ids of parent edges, in increasing order.
    pub fn parent_edge_ids(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].kind == EdgeKind::Parent).collect()
    }

    pub fn singular_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.singular[v]).collect()
    }

    /// The common macro kind, or `None` for a mixed mesh.
    pub fn uniform_kind(&self) -> Option<MacroKind> {
        let first = self.macros.first()?.element.kind;
        self.macros.iter().all(|m| m.element.kind == first).then_some(first)
    }

    /// Parent edges shared by two macros, with both sides.
    pub fn interfaces(&self) -> Vec<(usize, EdgeSide, EdgeSide)> {
        let mut sides: BTreeMap<usize, Vec<EdgeSide>> = BTreeMap::new();
        for (m, cell) in self.macros.iter().enumerate() {
            for (k, &e) in cell.parent_edges.iter().enumerate() {
                sides.entry(e).or_default().push(EdgeSide { macro_index: m, local_edge: k });
            }
        }
        sides.into_iter().filter(|(_, s)| s.len() == 2).map(|(e, s)| (e, s[0], s[1])).collect()
    }

    pub fn total_area(&self) -> ExactScalar {
        self.triangles
            .iter()
            .fold(ExactScalar::zero(), |acc, t| acc + triangle_area(&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]))
    }
}

/// Builds and numbers a conforming macro mesh.
pub fn assemble_mesh(vertices: Vec<Point>, cells: &[CellSpec]) -> Result<MacroMesh, MeshError> {
    if cells.is_empty() {
        return Err(MeshError::Empty);
    }
    let nv = vertices.len();
    let mut seen: BTreeMap<&Point, usize> = BTreeMap::new();
    for (i, p) in vertices.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Err(MeshError::DuplicateVertex(j, i));
        }
        seen.insert(p, i);
    }

    let mut used = vec![false; nv];
    let mut directed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut undirected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut elements = Vec::with_capacity(cells.len());
    for (ci, cell) in cells.iter().enumerate() {
        let expected = cell.kind.corner_count();
        if cell.vertices.len() != expected {
            return Err(MeshError::VertexCount { cell: ci, kind: cell.kind.name().to_string(), expected, got: cell.vertices.len() });
        }
        for &v in &cell.vertices {
            if v >= nv {
                return Err(MeshError::VertexIndex { cell: ci, vertex: v, count: nv });
            }
            used[v] = true;
        }
        let pts: Vec<Point> = cell.vertices.iter().map(|&v| vertices[v].clone()).collect();
        let element = match cell.kind {
            MacroKind::CloughTocher => split_clough_tocher([pts[0].clone(), pts[1].clone(), pts[2].clone()], cell.split_point.clone())?,
            MacroKind::CrissCross | MacroKind::Triangle if cell.split_point.is_some() => {
                return Err(MeshError::UnexpectedSplitPoint(ci));
            }
            MacroKind::CrissCross => split_crisscross([pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()])?,
            MacroKind::Triangle => unsplit_triangle([pts[0].clone(), pts[1].clone(), pts[2].clone()])?,
        };
        let n = cell.vertices.len();
        for k in 0..n {
            let (a, b) = (cell.vertices[k], cell.vertices[(k + 1) % n]);
            if !directed.insert((a, b)) {
                return Err(MeshError::FlippedEdge(a, b));
            }
            let count = undirected.entry((a.min(b), a.max(b))).or_insert(0);
            *count += 1;
            if *count > 2 {
                return Err(MeshError::OvercrowdedEdge(a.min(b), a.max(b)));
            }
        }
        elements.push(element);
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(MeshError::UnusedVertex(v));
    }
    for &(a, b) in undirected.keys() {
        for (v, p) in vertices.iter().enumerate() {
            if v != a && v != b && strictly_between(&vertices[a], &vertices[b], p) {
                return Err(MeshError::HangingVertex { vertex: v, a, b });
            }
        }
    }

    let mut all_vertices = vertices;
    let parent_vertex_count = nv;
    let mut edges: Vec<MeshEdge> = Vec::new();
    let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut triangles = Vec::new();
    let mut macros = Vec::with_capacity(cells.len());

    let mut edge_id = |edges: &mut Vec<MeshEdge>, a: usize, b: usize, kind: EdgeKind| -> usize {
        let key = (a.min(b), a.max(b));
        *edge_ids.entry(key).or_insert_with(|| {
            edges.push(MeshEdge { ends: [key.0, key.1], kind, triangles: Vec::new() });
            edges.len() - 1
        })
    };

    // Parent edges are numbered first so that their ids do not depend on splits.
    for cell in cells {
        let n = cell.vertices.len();
        for k in 0..n {
            edge_id(&mut edges, cell.vertices[k], cell.vertices[(k + 1) % n], EdgeKind::Parent);
        }
    }

    for (cell, mut element) in cells.iter().zip(elements) {
        let n = cell.vertices.len();
        let mut local_to_global = cell.vertices.clone();
        if let Some(s) = element.split_point() {
            all_vertices.push(s.clone());
            local_to_global.push(all_vertices.len() - 1);
        }
        let mut parent_edges = Vec::with_capacity(n);
        for k in 0..n {
            let (la, lb) = (k, (k + 1) % n);
            let (ga, gb) = (local_to_global[la], local_to_global[lb]);
            if ga < gb {
                element.orient_parent_edge(k, la, lb);
            } else {
                element.orient_parent_edge(k, lb, la);
            }
            parent_edges.push(edge_id(&mut edges, ga, gb, EdgeKind::Parent));
        }
        let interior_edges: Vec<usize> = element
            .interior_edges
            .iter()
            .map(|&[a, b]| edge_id(&mut edges, local_to_global[a], local_to_global[b], EdgeKind::Interior))
            .collect();
        let mut tri_ids = Vec::new();
        for t in &element.sub_triangles {
            let gt = [local_to_global[t[0]], local_to_global[t[1]], local_to_global[t[2]]];
            let id = triangles.len();
            triangles.push(gt);
            for k in 0..3 {
                let e = edge_id(&mut edges, gt[k], gt[(k + 1) % 3], EdgeKind::Interior);
                edges[e].triangles.push(id);
            }
            tri_ids.push(id);
        }
        macros.push(MacroCell { element, vertices: local_to_global, parent_edges, interior_edges, triangles: tri_ids });
    }

    let nvt = all_vertices.len();
    let mut boundary_vertex = vec![false; nvt];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nvt];
    for (e, edge) in edges.iter().enumerate() {
        if edge.triangles.len() == 1 {
            boundary_vertex[edge.ends[0]] = true;
            boundary_vertex[edge.ends[1]] = true;
        }
        incident[edge.ends[0]].push(e);
        incident[edge.ends[1]].push(e);
    }
    let singular = (0..nvt)
        .map(|v| {
            !boundary_vertex[v] && {
                let dirs: Vec<Point> = incident[v]
                    .iter()
                    .map(|&e| {
                        let [a, b] = edges[e].ends;
                        let other = if a == v { b } else { a };
                        sub(&all_vertices[other], &all_vertices[v])
                    })
                    .collect();
                lies_on_two_lines(&dirs)
            }
        })
        .collect();

    Ok(MacroMesh { vertices: all_vertices, parent_vertex_count, edges, triangles, macros, singular, boundary_vertex })
}

fn strictly_between(a: &Point, b: &Point, p: &Point) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let ab = sub(b, a);
    let ap = sub(p, a);
    let dot = &ab[0] * &ap[0] + &ab[1] * &ap[1];
    let len = &ab[0] * &ab[0] + &ab[1] * &ab[1];
    dot.is_positive() && dot < len
}

/// Four directions forming exactly two lines through the origin.
fn lies_on_two_lines(dirs: &[Point]) -> bool {
    if dirs.len() != 4 {
        return false;
    }
    let mut lines: Vec<&Point> = Vec::new();
    for d in dirs {
        if !lines.iter().any(|l| cross(l, d).is_zero()) {
            lines.push(d);
        }
    }
    lines.len() == 2
}

#[derive(Deserialize)]
struct MeshFile {
    vertices: Vec<[serde_json::Value; 2]>,
    cells: Vec<CellFile>,
}

#[derive(Deserialize)]
struct CellFile {
    kind: String,
    vertices: Vec<usize>,
    #[serde(default)]
    split_point: Option<[serde_json::Value; 2]>,
}

fn json_number(v: &serde_json::Value) -> Result<ExactScalar, MeshError> {
    let text = match v {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => return Err(MeshError::BadNumber(other.to_string())),
    };
    parse_rational(&text).map_err(|_| MeshError::BadNumber(text))
}

fn json_point(p: &[serde_json::Value; 2]) -> Result<Point, MeshError> {
    Ok([json_number(&p[0])?, json_number(&p[1])?])
}

/// Parses the JSON mesh format. Decimal coordinates are read exactly.
pub fn mesh_from_json(text: &str) -> Result<MacroMesh, MeshError> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| MeshError::Json(e.to_string()))?;
    let vertices = file.vertices.iter().map(json_point).collect::<Result<Vec<_>, _>>()?;
    let cells = file
        .cells
        .iter()
        .map(|c| {
            let kind = match c.kind.as_str() {
                "ct" => MacroKind::CloughTocher,
                "crisscross" => MacroKind::CrissCross,
                other => return Err(MeshError::UnknownKind(other.to_string())),
            };
            let split_point = c.split_point.as_ref().map(json_point).transpose()?;
            Ok(CellSpec { kind, vertices: c.vertices.clone(), split_point })
        })
        .collect::<Result<Vec<_>, _>>()?;
    assemble_mesh(vertices, &cells)
}

pub fn mesh_to_json(mesh: &MacroMesh) -> String {
    let vertices: Vec<serde_json::Value> =
        mesh.vertices[..mesh.parent_vertex_count].iter().map(|p| serde_json::json!([p[0].to_string(), p[1].to_string()])).collect();
    let cells: Vec<serde_json::Value> = mesh
        .macros
        .iter()
        .map(|m| {
            let n = m.element.corner_count();
            let mut c = serde_json::json!({"kind": m.element.kind.name(), "vertices": m.vertices[..n]});
            if m.element.kind == MacroKind::CloughTocher {
                let s = m.element.split_point().expect("ct split");
                c["split_point"] = serde_json::json!([s[0].to_string(), s[1].to_string()]);
            }
            c
        })
        .collect();
    serde_json::json!({"vertices": vertices, "cells": cells}).to_string()
}

/// Criss-cross grid of `nx × ny` unit squares on `[0, nx] × [0, ny]`.
pub fn crisscross_grid(nx: usize, ny: usize) -> MacroMesh {
    let (vertices, id) = grid_vertices(nx, ny);
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            cells.push(CellSpec::crisscross([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]));
        }
    }
    assemble_mesh(vertices, &cells).expect("grid is conforming")
}

/// Each unit square of an `nx × ny` grid cut along its rising diagonal, each
/// triangle Clough-Tocher split at its barycenter.
pub fn ct_grid(nx: usize, ny: usize) -> MacroMesh {
    let (vertices, id) = grid_vertices(nx, ny);
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            cells.push(CellSpec::ct([id(i, j), id(i + 1, j), id(i + 1, j + 1)]));
            cells.push(CellSpec::ct([id(i, j), id(i + 1, j + 1), id(i, j + 1)]));
        }
    }
    assemble_mesh(vertices, &cells).expect("grid is conforming")
}

fn grid_vertices(nx: usize, ny: usize) -> (Vec<Point>, impl Fn(usize, usize) -> usize) {
    let mut vertices = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(ipoint(i as i64, j as i64));
        }
    }
    (vertices, move |i: usize, j: usize| j * (nx + 1) + i)
}

/// The mesh consisting of one macro element.
pub fn single_macro_mesh(element: &MacroElement) -> MacroMesh {
    let n = element.corner_count();
    let split_point = match element.kind {
        MacroKind::CloughTocher => element.split_point().cloned(),
        _ => None,
    };
    let cell = CellSpec { kind: element.kind, vertices: (0..n).collect(), split_point };
    assemble_mesh(element.corners().to_vec(), &[cell]).expect("a macro element is a valid one-cell mesh")
}

pub fn unit_square_cc() -> MacroMesh {
    crisscross_grid(1, 1)
}

pub fn unit_triangle_ct() -> MacroMesh {
    assemble_mesh(vec![ipoint(0, 0), ipoint(1, 0), ipoint(0, 1)], &[CellSpec::ct([0, 1, 2])]).expect("valid")
}

pub const BUILTIN_NAMES: &str = "unit-square-cc, unit-triangle-ct, grid:NxM:cc, grid:NxM:ct";

pub fn builtin_mesh(name: &str) -> Result<MacroMesh, MeshError> {
    match name {
        "unit-square-cc" => return Ok(unit_square_cc()),
        "unit-triangle-ct" => return Ok(unit_triangle_ct()),
        _ => {}
    }
    let unknown = || MeshError::UnknownBuiltin(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    let [tag, size, kind] = parts.as_slice() else { return Err(unknown()) };
    if *tag != "grid" {
        return Err(unknown());
    }
    let (nx, ny) = size.split_once('x').ok_or_else(unknown)?;
    let nx: usize = nx.parse().map_err(|_| unknown())?;
    let ny: usize = ny.parse().map_err(|_| unknown())?;
    if nx == 0 || ny == 0 {
        return Err(unknown());
    }
    match *kind {
        "cc" => Ok(crisscross_grid(nx, ny)),
        "ct" => Ok(ct_grid(nx, ny)),
        _ => Err(unknown()),
    }
}

/// A built-in name, or else a path to a JSON mesh file.
pub fn load_mesh(name_or_path: &str) -> Result<MacroMesh, MeshError> {
    match builtin_mesh(name_or_path) {
        Ok(m) => Ok(m),
        Err(e) => {
            let path = Path::new(name_or_path);
            if !path.exists() {
                return Err(e);
            }
            let text =
                std::fs::read_to_string(path).map_err(|err| MeshError::Io { path: name_or_path.to_string(), msg: err.to_string() })?;
            mesh_from_json(&text)
        }
    }
}
