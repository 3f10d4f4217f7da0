//! The element catalog: shape spaces as constrained piecewise polynomials,
//! with their vertex and edge degrees of freedom. Interior degrees of
//! freedom are always moments against the element's bubble space.

use crate::exactmath::tensor::{DiffOp, Shape};
use crate::mesh::MacroKind;

use super::FeError;

/// Continuity imposed across interior edges of the macro (and checked across
/// parent edges shared by two macros).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuity {
    /// All entries continuous.
    Value,
    /// All entries of a derived field continuous.
    Derived(DiffOp),
    /// For each matrix column (or the vector itself), the normal component is continuous.
    NormalComponent,
}

/// How an edge moment reads the (operated) field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Entry(usize),
    /// `Σ_i n_i X_{i, column}` with the unnormalized edge normal.
    Normal {
        column: usize,
    },
    /// `Σ_i τ_i X_{i, column}` with the unnormalized edge tangent.
    Tangent {
        column: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointDof {
    pub op: Option<DiffOp>,
    pub entry: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeDof {
    pub op: Option<DiffOp>,
    pub pairing: Pairing,
    /// 0 for the weight `1`, 1 for `2t - 1`.
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementDef {
    pub name: String,
    pub macro_kind: MacroKind,
    pub shape: Shape,
    pub degree: u32,
    pub continuity: Vec<Continuity>,
    /// Alternating sum of the four sub-triangle values vanishes at the
    /// criss-cross split point.
    pub singular_vertex_relation: bool,
    pub vertex_dofs: Vec<PointDof>,
    pub edge_dofs: Vec<EdgeDof>,
}

pub const ELEMENT_NAMES: [&str; 12] = ["W0", "W1", "W2", "Y0", "Y1", "Y2", "Z0", "Z1", "Z2", "V0", "V1", "V2"];

/// Names in the order the stress and strain tables list them, without aliases.
pub const CRISSCROSS_ELEMENTS: [&str; 6] = ["W0", "W1", "W2", "Y0", "Y1", "Y2"];
pub const CLOUGH_TOCHER_ELEMENTS: [&str; 6] = ["Z0", "Z1", "Z2", "V0", "V1", "V2"];

fn value(entry: usize) -> PointDof {
    PointDof { op: None, entry }
}

fn derived(op: DiffOp, entry: usize) -> PointDof {
    PointDof { op: Some(op), entry }
}

fn moment(op: Option<DiffOp>, pairing: Pairing, weight: u32) -> EdgeDof {
    EdgeDof { op, pairing, weight }
}

fn scalar_c1(name: &str, kind: MacroKind) -> ElementDef {
    ElementDef {
        name: name.to_string(),
        macro_kind: kind,
        shape: Shape::SCALAR,
        degree: 3,
        continuity: vec![Continuity::Value, Continuity::Derived(DiffOp::Grad)],
        singular_vertex_relation: false,
        vertex_dofs: vec![value(0), derived(DiffOp::Grad, 0), derived(DiffOp::Grad, 1)],
        edge_dofs: vec![moment(Some(DiffOp::Grad), Pairing::Normal { column: 0 }, 0)],
    }
}

fn vector_p2(name: &str, kind: MacroKind) -> ElementDef {
    ElementDef {
        name: name.to_string(),
        macro_kind: kind,
        shape: Shape::vector(2),
        degree: 2,
        continuity: vec![Continuity::Value],
        singular_vertex_relation: false,
        vertex_dofs: vec![value(0), value(1)],
        edge_dofs: vec![moment(None, Pairing::Entry(0), 0), moment(None, Pairing::Entry(1), 0)],
    }
}

fn discontinuous(name: &str, kind: MacroKind, shape: Shape, degree: u32) -> ElementDef {
    ElementDef {
        name: name.to_string(),
        macro_kind: kind,
        shape,
        degree,
        continuity: Vec::new(),
        singular_vertex_relation: false,
        vertex_dofs: Vec::new(),
        edge_dofs: Vec::new(),
    }
}

/// Looks up a catalog element by name.
pub fn element(name: &str) -> Result<ElementDef, FeError> {
    use MacroKind::{CloughTocher as Ct, CrissCross as Cc};
    let def = match name {
        "W0" => scalar_c1("W0", Cc),
        "W1" | "Y0" => vector_p2(name, Cc),
        "W2" => ElementDef { singular_vertex_relation: true, ..discontinuous("W2", Cc, Shape::SCALAR, 1) },
        "Y1" => ElementDef {
            name: "Y1".into(),
            macro_kind: Cc,
            shape: Shape::matrix(2),
            degree: 1,
            continuity: vec![Continuity::NormalComponent],
            singular_vertex_relation: false,
            vertex_dofs: Vec::new(),
            edge_dofs: (0..2).flat_map(|c| (0..2).map(move |w| moment(None, Pairing::Normal { column: c }, w))).collect(),
        },
        "Y2" => discontinuous("Y2", Cc, Shape::vector(2), 0),
        "Z0" => {
            // Gradient entries are (grad u)_{lc} = ∂_l u_c at index 2l + c.
            let vertex_dofs = (0..2).flat_map(|c| [value(c), derived(DiffOp::Grad, c), derived(DiffOp::Grad, 2 + c)]).collect();
            let edge_dofs = (0..2)
                .flat_map(|c| {
                    [
                        moment(None, Pairing::Entry(c), 0),
                        moment(Some(DiffOp::Grad), Pairing::Normal { column: c }, 0),
                        moment(Some(DiffOp::Grad), Pairing::Normal { column: c }, 1),
                    ]
                })
                .collect();
            ElementDef {
                name: "Z0".into(),
                macro_kind: Ct,
                shape: Shape::vector(2),
                degree: 4,
                continuity: vec![Continuity::Value, Continuity::Derived(DiffOp::Grad)],
                singular_vertex_relation: false,
                vertex_dofs,
                edge_dofs,
            }
        }
        "Z1" => {
            let mut vertex_dofs: Vec<PointDof> = (0..4).map(value).collect();
            vertex_dofs.extend((0..2).map(|c| derived(DiffOp::Rot, c)));
            let mut edge_dofs: Vec<EdgeDof> = (0..4).flat_map(|e| (0..2).map(move |w| moment(None, Pairing::Entry(e), w))).collect();
            edge_dofs.push(moment(Some(DiffOp::Rot), Pairing::Tangent { column: 0 }, 0));
            edge_dofs.push(moment(Some(DiffOp::Rot), Pairing::Normal { column: 0 }, 0));
            ElementDef {
                name: "Z1".into(),
                macro_kind: Ct,
                shape: Shape::matrix(2),
                degree: 3,
                continuity: vec![Continuity::Value, Continuity::Derived(DiffOp::Rot)],
                singular_vertex_relation: false,
                vertex_dofs,
                edge_dofs,
            }
        }
        "Z2" | "V1" => vector_p2(name, Ct),
        "V0" => scalar_c1("V0", Ct),
        "V2" => discontinuous("V2", Ct, Shape::SCALAR, 1),
        _ => {
            return Err(FeError::UnknownElement { name: name.to_string(), valid: ELEMENT_NAMES.join(", ") });
        }
    };
    Ok(def)
}

/// Catalog names belonging to a macro kind.
pub fn elements_for(kind: MacroKind) -> &'static [&'static str] {
    match kind {
        MacroKind::CrissCross => &CRISSCROSS_ELEMENTS,
        MacroKind::CloughTocher => &CLOUGH_TOCHER_ELEMENTS,
        MacroKind::Triangle => &[],
    }
}

impl ElementDef {
    /// Same element under another name (for spaces that coincide, such as Y0 = W1).
    pub fn same_space(&self, other: &ElementDef) -> bool {
        ElementDef { name: other.name.clone(), ..self.clone() } == *other
    }
}
