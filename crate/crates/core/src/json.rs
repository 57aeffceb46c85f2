//! JSON artifacts. One schema covers polyhedra and formulations:
//!
//! ```json
//! {
//!   "dimension": 7,
//!   "variables": ["x0", "x1", ...],
//!   "inequalities": [{"coeffs": ["1", "0", ...], "rhs": "0"}, ...],
//!   "equalities":   [{"coeffs": [...], "rhs": "..."}, ...],
//!   "projection":   {"rows": [["1", "0", ...], ...]},
//!   "blocks":       [{"label": "x", "start": 0, "len": 6}, ...]
//! }
//! ```
//!
//! `projection` and `blocks` appear only for formulations. Rationals are
//! always `"p"` or `"p/q"` strings; floating point never appears.

use crate::error::{Error, Result};
use crate::ext::{ExtendedFormulation, LinearMap, VarBlock};
use crate::num::{format_rat, parse_rat, Rat};
use crate::poly::{HPolyhedron, LinExpr, Row, VPolyhedron};
use crate::verify::{Certificate, Status, VerificationReport};
use serde_json::{json, Map, Value};

fn rat_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

fn vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

fn rat_from_value(v: &Value) -> Result<Rat> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Malformed(format!("expected rational string, got {v}")))?;
    parse_rat(s).map_err(Error::Malformed)
}

fn vec_from_value(v: &Value) -> Result<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed("expected array of rationals".to_string()))?
        .iter()
        .map(rat_from_value)
        .collect()
}

fn row_value(row: &Row, dim: usize) -> Value {
    json!({
        "coeffs": vec_value(&row.expr.to_dense(dim)),
        "rhs": rat_value(&row.rhs),
    })
}

fn row_from_value(v: &Value, dim: usize) -> Result<Row> {
    let obj = v.as_object().ok_or_else(|| Error::Malformed("expected row object".to_string()))?;
    let coeffs = vec_from_value(
        obj.get("coeffs").ok_or_else(|| Error::Malformed("row missing coeffs".to_string()))?,
    )?;
    if coeffs.len() != dim {
        return Err(Error::Malformed(format!(
            "row has {} coefficients, dimension is {dim}",
            coeffs.len()
        )));
    }
    let rhs = rat_from_value(
        obj.get("rhs").ok_or_else(|| Error::Malformed("row missing rhs".to_string()))?,
    )?;
    Ok(Row::from_dense(&coeffs, rhs))
}

fn default_variables(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("x{i}")).collect()
}

fn block_variables(blocks: &[VarBlock], dim: usize) -> Vec<String> {
    let mut names = default_variables(dim);
    for b in blocks {
        for j in 0..b.len {
            if b.start + j < dim {
                names[b.start + j] = format!("{}{}", b.label, j);
            }
        }
    }
    names
}

fn h_body(p: &HPolyhedron, variables: Vec<String>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("dimension".to_string(), json!(p.dim()));
    m.insert("variables".to_string(), json!(variables));
    m.insert(
        "inequalities".to_string(),
        Value::Array(p.ineqs().iter().map(|r| row_value(r, p.dim())).collect()),
    );
    m.insert(
        "equalities".to_string(),
        Value::Array(p.eqs().iter().map(|r| row_value(r, p.dim())).collect()),
    );
    m
}

pub fn polyhedron_to_json(p: &HPolyhedron) -> Value {
    Value::Object(h_body(p, default_variables(p.dim())))
}

pub fn polyhedron_from_json(v: &Value) -> Result<HPolyhedron> {
    let obj =
        v.as_object().ok_or_else(|| Error::Malformed("expected polyhedron object".to_string()))?;
    let dim = obj
        .get("dimension")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("missing dimension".to_string()))? as usize;
    let rows = |key: &str| -> Result<Vec<Row>> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(arr) => arr
                .as_array()
                .ok_or_else(|| Error::Malformed(format!("{key} must be an array")))?
                .iter()
                .map(|r| row_from_value(r, dim))
                .collect(),
        }
    };
    HPolyhedron::new(dim, rows("inequalities")?, rows("equalities")?)
}

pub fn formulation_to_json(ext: &ExtendedFormulation) -> Value {
    let mut m = h_body(ext.lifted(), block_variables(ext.blocks(), ext.lifted_dim()));
    let rows: Vec<Value> = ext
        .projection()
        .rows()
        .iter()
        .map(|r| vec_value(&r.to_dense(ext.lifted_dim())))
        .collect();
    m.insert("projection".to_string(), json!({ "rows": Value::Array(rows) }));
    m.insert(
        "blocks".to_string(),
        Value::Array(
            ext.blocks()
                .iter()
                .map(|b| json!({"label": b.label, "start": b.start, "len": b.len}))
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn formulation_from_json(v: &Value) -> Result<ExtendedFormulation> {
    let lifted = polyhedron_from_json(v)?;
    let obj = v.as_object().expect("validated above");
    let proj = obj
        .get("projection")
        .and_then(|p| p.get("rows"))
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("formulation missing projection.rows".to_string()))?;
    let rows: Result<Vec<LinExpr>> = proj
        .iter()
        .map(|r| {
            let dense = vec_from_value(r)?;
            if dense.len() != lifted.dim() {
                return Err(Error::Malformed(format!(
                    "projection row has {} entries, lifted dimension is {}",
                    dense.len(),
                    lifted.dim()
                )));
            }
            Ok(LinExpr::from_dense(&dense))
        })
        .collect();
    let projection = LinearMap::new(lifted.dim(), rows?)?;
    let blocks = match obj.get("blocks") {
        None => Vec::new(),
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| Error::Malformed("blocks must be an array".to_string()))?
            .iter()
            .map(|b| {
                let label = b
                    .get("label")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Malformed("block missing label".to_string()))?
                    .to_string();
                let start = b
                    .get("start")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Malformed("block missing start".to_string()))?
                    as usize;
                let len = b
                    .get("len")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Malformed("block missing len".to_string()))?
                    as usize;
                Ok(VarBlock { label, start, len })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    ExtendedFormulation::new(lifted, projection, blocks)
}

pub fn vpolyhedron_to_json(p: &VPolyhedron) -> Value {
    json!({
        "dimension": p.dim(),
        "vertices": Value::Array(p.vertices().iter().map(|v| vec_value(v)).collect()),
        "rays": Value::Array(p.rays().iter().map(|r| vec_value(r)).collect()),
    })
}

pub fn vpolyhedron_from_json(v: &Value) -> Result<VPolyhedron> {
    let obj =
        v.as_object().ok_or_else(|| Error::Malformed("expected generator object".to_string()))?;
    let dim = obj
        .get("dimension")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("missing dimension".to_string()))? as usize;
    let gens = |key: &str| -> Result<Vec<Vec<Rat>>> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(arr) => arr
                .as_array()
                .ok_or_else(|| Error::Malformed(format!("{key} must be an array")))?
                .iter()
                .map(vec_from_value)
                .collect(),
        }
    };
    VPolyhedron::new(dim, gens("vertices")?, gens("rays")?)
}

fn certificate_to_json(c: &Certificate) -> Value {
    match c {
        Certificate::RowValidity { context, row, value, dual, appended } => json!({
            "kind": "row-validity",
            "context": context,
            "row": {"coeffs": sparse_value(&row.expr), "rhs": rat_value(&row.rhs)},
            "value": rat_value(value),
            "dual": {
                "ineq": vec_value(&dual.ineq),
                "eq": vec_value(&dual.eq),
                "appended": vec_value(&dual.appended),
            },
            "appended_rows": appended.len(),
        }),
        Certificate::PreimageWitness { context, target, witness, homogeneous } => json!({
            "kind": "preimage-witness",
            "context": context,
            "target": vec_value(target),
            "witness": vec_value(witness),
            "homogeneous": homogeneous,
        }),
        Certificate::Arithmetic { context } => json!({
            "kind": "arithmetic",
            "context": context,
        }),
        Certificate::ViolatedRow { context, row, lifted_point } => json!({
            "kind": "violated-row",
            "context": context,
            "row": {"coeffs": sparse_value(&row.expr), "rhs": rat_value(&row.rhs)},
            "point": vec_value(lifted_point),
        }),
        Certificate::ViolatedRowRay { context, row, lifted_point, lifted_ray } => json!({
            "kind": "violated-row-ray",
            "context": context,
            "row": {"coeffs": sparse_value(&row.expr), "rhs": rat_value(&row.rhs)},
            "point": vec_value(lifted_point),
            "ray": vec_value(lifted_ray),
        }),
        Certificate::UncoveredGenerator { context, target, homogeneous, farkas } => json!({
            "kind": "uncovered-generator",
            "context": context,
            "target": vec_value(target),
            "homogeneous": homogeneous,
            "farkas": {
                "ineq": vec_value(&farkas.ineq),
                "eq": vec_value(&farkas.eq),
                "appended": vec_value(&farkas.appended),
            },
        }),
    }
}

fn sparse_value(expr: &LinExpr) -> Value {
    Value::Array(
        expr.entries()
            .iter()
            .map(|(i, c)| json!({"coord": i, "value": rat_value(c)}))
            .collect(),
    )
}

pub fn report_to_json(r: &VerificationReport) -> Value {
    let status = match &r.status {
        Status::Verified => json!("verified"),
        Status::Refuted => json!("refuted"),
        Status::Skipped { reason } => json!({"skipped": reason}),
    };
    json!({
        "claim": r.claim,
        "status": status,
        "elapsed_ms": r.elapsed.as_millis() as u64,
        "certificates": Value::Array(r.certificates.iter().map(certificate_to_json).collect()),
    })
}

pub fn report_to_text(r: &VerificationReport) -> String {
    let status = match &r.status {
        Status::Verified => "verified".to_string(),
        Status::Refuted => "REFUTED".to_string(),
        Status::Skipped { reason } => format!("skipped ({reason})"),
    };
    let mut out = format!(
        "{}: {} [{} certificates, {} ms]\n",
        r.claim,
        status,
        r.certificates.len(),
        r.elapsed.as_millis()
    );
    if r.status == Status::Refuted {
        for c in &r.certificates {
            match c {
                Certificate::ViolatedRow { context, .. }
                | Certificate::ViolatedRowRay { context, .. }
                | Certificate::UncoveredGenerator { context, .. } => {
                    out.push_str(&format!("  witness: {context}\n"));
                }
                _ => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{tjoin_flow_piece, PieceSelector};
    use crate::graph::EdgeSpace;
    use crate::num::rat;
    use crate::poly::tjoin_dominant_h;

    #[test]
    fn polyhedron_round_trip() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let p = tjoin_dominant_h(&space).unwrap();
        let v = polyhedron_to_json(&p);
        let back = polyhedron_from_json(&v).unwrap();
        assert_eq!(p, back);
        // Serialization is deterministic.
        assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&polyhedron_to_json(&back)).unwrap());
    }

    #[test]
    fn formulation_round_trip() {
        let space = EdgeSpace::odd_everything(4).unwrap();
        let sel = PieceSelector::new(&space, [1, 2]).unwrap();
        let ext = tjoin_flow_piece(&space, &sel).unwrap();
        let v = formulation_to_json(&ext);
        let back = formulation_from_json(&v).unwrap();
        assert_eq!(ext.lifted(), back.lifted());
        assert_eq!(ext.projection(), back.projection());
        assert_eq!(ext.blocks(), back.blocks());
        assert_eq!(ext.size(), back.size());
    }

    #[test]
    fn rationals_serialize_as_fraction_strings() {
        let p = crate::poly::HPolyhedron::new(
            1,
            vec![crate::poly::Row::from_dense(&[crate::num::frac(2, 3)], rat(1))],
            vec![],
        )
        .unwrap();
        let s = serde_json::to_string(&polyhedron_to_json(&p)).unwrap();
        // Canonical primitive-integer scaling turns 2/3 x >= 1 into 2 x >= 3.
        assert!(s.contains("\"2\""), "{s}");
        assert!(s.contains("\"3\""), "{s}");
        assert!(!s.contains("0.6"), "{s}");
    }

    #[test]
    fn malformed_inputs_are_rejected()
    {
        assert!(polyhedron_from_json(&serde_json::json!({"dimension": "x"})).is_err());
        assert!(polyhedron_from_json(&serde_json::json!({
            "dimension": 2,
            "inequalities": [{"coeffs": ["1"], "rhs": "0"}],
        }))
        .is_err());
        assert!(formulation_from_json(&serde_json::json!({
            "dimension": 1, "inequalities": [], "equalities": []
        }))
        .is_err());
    }
}
