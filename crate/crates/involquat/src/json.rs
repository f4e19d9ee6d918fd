//! Wire formats. Field descriptors, scalars, matrices, algebra descriptors
//! and task inputs are plain JSON; scalars serialize as decimal strings
//! (prime-field residues), coefficient arrays (extension fields) or
//! "num/den" strings (rationals). All document maps are ordered, so a given
//! descriptor always serializes to identical bytes.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Scalar};
use crate::harness::fixtures::ExampleReport;
use crate::harness::fuzz::FuzzReport;
use crate::idempotent::IdempotentReport;
use crate::involution::{InvolutionAlgebra, InvolutionClass, InvolutionKind};
use crate::matrix::Matrix;
use crate::quaternion::{QuatOutcome, QuaternionSubalgebra};

pub const SCHEMA: &str = "involquat/1";

fn bad(msg: impl Into<String>) -> Error {
    Error::BadDescriptor(msg.into())
}

pub fn field_to_json(field: &Field) -> Value {
    let mut m = Map::new();
    match &field.spec().kind {
        FieldKind::Prime { p } => {
            m.insert("kind".into(), json!("Fp"));
            m.insert("p".into(), json!(p));
        }
        FieldKind::Extension { p, deg, modulus } => {
            m.insert("kind".into(), json!("Fq"));
            m.insert("p".into(), json!(p));
            m.insert("deg".into(), json!(deg));
            m.insert("modulus".into(), json!(modulus));
        }
        FieldKind::Rational => {
            m.insert("kind".into(), json!("Q"));
        }
    }
    if field.has_unitary() {
        m.insert("unitary".into(), json!(true));
    }
    Value::Object(m)
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let obj = v.as_object().ok_or_else(|| bad("field descriptor must be an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("field needs a kind"))?;
    let field = match kind {
        "Fp" => {
            let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| bad("Fp needs p"))?;
            Field::prime(p)?
        }
        "Fq" => {
            let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| bad("Fq needs p"))?;
            let deg = obj.get("deg").and_then(Value::as_u64).ok_or_else(|| bad("Fq needs deg"))? as usize;
            let modulus: Vec<u64> = obj
                .get("modulus")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("Fq needs a modulus array"))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad("modulus coefficients must be integers")))
                .collect::<Result<_>>()?;
            Field::extension(p, deg, &modulus)?
        }
        "Q" => Field::rationals(),
        other => return Err(bad(format!("unknown field kind {other}"))),
    };
    if obj.get("unitary").and_then(Value::as_bool).unwrap_or(false) {
        Ok(field.with_unitary()?)
    } else {
        Ok(field)
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    s.to_json_value()
}

pub fn scalar_from_json(field: &Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| bad("scalar number must be an integer"))?;
            Ok(field.from_integer(i))
        }
        Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad("bad numerator"))?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad("bad denominator"))?;
                field.from_bigint_ratio(n, d)
            } else {
                let n = BigInt::from_str(s).map_err(|_| bad(format!("bad scalar literal {s}")))?;
                field.from_bigint_ratio(n, BigInt::from(1))
            }
        }
        Value::Array(coeffs) => {
            let c: Vec<i64> = coeffs
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| bad("coefficients must be integers")))
                .collect::<Result<_>>()?;
            field.from_coeffs(&c)
        }
        _ => Err(bad("scalar must be a string, number or coefficient array")),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_to_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(field: &Field, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(bad("matrix must be nonempty"));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let cells = row.as_array().ok_or_else(|| bad("matrix rows must be arrays"))?;
        if cells.len() != n {
            return Err(bad("matrix must be square"));
        }
        for cell in cells {
            entries.push(scalar_from_json(field, cell)?);
        }
    }
    Ok(Matrix::from_fn(field, n, n, |i, j| entries[i * n + j].clone()))
}

pub fn algebra_to_json(alg: &InvolutionAlgebra) -> Value {
    json!({
        "field": field_to_json(alg.field()),
        "n": alg.side(),
        "involution": {
            "kind": match alg.kind() { InvolutionKind::First => "first", InvolutionKind::Unitary => "unitary" },
            "g": matrix_to_json(alg.descriptor()),
        },
    })
}

pub fn algebra_from_json(v: &Value) -> Result<InvolutionAlgebra> {
    let obj = v.as_object().ok_or_else(|| bad("algebra descriptor must be an object"))?;
    let field = field_from_json(obj.get("field").ok_or_else(|| bad("algebra needs a field"))?)?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| bad("algebra needs n"))? as usize;
    if n == 0 || n > 8 {
        return Err(bad("side length must be between 1 and 8"));
    }
    let inv = obj
        .get("involution")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("algebra needs an involution descriptor"))?;
    let kind = match inv.get("kind").and_then(Value::as_str) {
        Some("first") => InvolutionKind::First,
        Some("unitary") => InvolutionKind::Unitary,
        _ => return Err(bad("involution kind must be first or unitary")),
    };
    let g = matrix_from_json(&field, inv.get("g").ok_or_else(|| bad("involution needs g"))?)?;
    if g.rows() != n {
        return Err(Error::SizeMismatch);
    }
    InvolutionAlgebra::new(&field, n, kind, g)
}

/// A task input: the algebra, named elements, an optional lambda, and the
/// determinism parameters.
#[derive(Debug, Clone)]
pub struct InstanceDescriptor {
    pub algebra: InvolutionAlgebra,
    pub elements: BTreeMap<String, Matrix>,
    pub lambda: Option<Scalar>,
    pub task: Option<String>,
    pub seed: u64,
    pub trials: usize,
}

impl InstanceDescriptor {
    pub fn element(&self, name: &str) -> Result<&Matrix> {
        self.elements
            .get(name)
            .ok_or_else(|| bad(format!("descriptor has no element named '{name}'")))
    }

    /// First element present among the given names.
    pub fn element_among(&self, names: &[&str]) -> Result<&Matrix> {
        for name in names {
            if let Some(m) = self.elements.get(*name) {
                return Ok(m);
            }
        }
        Err(bad(format!("descriptor needs one element among {names:?}")))
    }
}

pub fn descriptor_from_json(v: &Value) -> Result<InstanceDescriptor> {
    let obj = v.as_object().ok_or_else(|| bad("descriptor must be an object"))?;
    if let Some(schema) = obj.get("schema").and_then(Value::as_str) {
        if schema != SCHEMA {
            return Err(bad(format!("unsupported schema {schema}, expected {SCHEMA}")));
        }
    }
    let algebra = algebra_from_json(obj.get("algebra").ok_or_else(|| bad("descriptor needs an algebra"))?)?;
    let mut elements = BTreeMap::new();
    if let Some(elems) = obj.get("elements") {
        let map = elems.as_object().ok_or_else(|| bad("elements must be an object"))?;
        for (name, mv) in map {
            let m = matrix_from_json(algebra.field(), mv)?;
            if m.rows() != algebra.side() {
                return Err(Error::SizeMismatch);
            }
            elements.insert(name.clone(), m);
        }
    }
    let lambda = match obj.get("lambda") {
        None | Some(Value::Null) => None,
        Some(v) => Some(scalar_from_json(algebra.field(), v)?),
    };
    let task = obj.get("task").and_then(Value::as_str).map(str::to_owned);
    let seed = obj.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let trials = obj.get("trials").and_then(Value::as_u64).unwrap_or(1000) as usize;
    Ok(InstanceDescriptor { algebra, elements, lambda, task, seed, trials })
}

pub fn descriptor_to_json(d: &InstanceDescriptor) -> Value {
    let elements: Map<String, Value> =
        d.elements.iter().map(|(k, m)| (k.clone(), matrix_to_json(m))).collect();
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("algebra".into(), algebra_to_json(&d.algebra));
    m.insert("elements".into(), Value::Object(elements));
    if let Some(l) = &d.lambda {
        m.insert("lambda".into(), scalar_to_json(l));
    }
    if let Some(t) = &d.task {
        m.insert("task".into(), json!(t));
    }
    m.insert("seed".into(), json!(d.seed));
    m.insert("trials".into(), json!(d.trials));
    Value::Object(m)
}

fn coords_to_json(coords: &[Scalar]) -> Value {
    Value::Array(coords.iter().map(scalar_to_json).collect())
}

pub fn subalgebra_to_json(q: &QuaternionSubalgebra) -> Value {
    let table: Vec<Value> = q
        .table
        .iter()
        .map(|row| Value::Array(row.iter().map(|c| coords_to_json(c)).collect()))
        .collect();
    let mut m = Map::new();
    m.insert("basis".into(), Value::Array(q.basis.iter().map(matrix_to_json).collect()));
    m.insert("structure_constants".into(), Value::Array(table));
    if let Some(images) = &q.sigma_images {
        m.insert(
            "sigma_images".into(),
            Value::Array(images.iter().map(|c| coords_to_json(c)).collect()),
        );
    }
    m.insert(
        "split_witness".into(),
        json!({
            "idempotent": matrix_to_json(&q.split_witness.idempotent),
            "coords": coords_to_json(&q.split_witness.coords),
        }),
    );
    m.insert(
        "members".into(),
        Value::Array(
            q.members
                .iter()
                .map(|mem| {
                    json!({
                        "name": mem.name,
                        "element": matrix_to_json(&mem.element),
                        "coords": coords_to_json(&mem.coords),
                    })
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

/// Decision wrapper used by the find-quat and oracle outputs.
pub fn outcome_to_json(out: &QuatOutcome) -> Value {
    match out {
        QuatOutcome::Found(q) => json!({
            "schema": SCHEMA,
            "decision": "constructed",
            "subalgebra": subalgebra_to_json(q),
        }),
        QuatOutcome::NoneByTheorem { reason } => json!({
            "schema": SCHEMA,
            "decision": "none-by-theorem",
            "reason": reason,
        }),
    }
}

pub fn precondition_failure_to_json(err: &Error) -> Value {
    json!({
        "schema": SCHEMA,
        "decision": "precondition-failed",
        "error": err.to_string(),
    })
}

pub fn involution_class_to_json(class: InvolutionClass) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": class.kind_name(),
        "type": class.type_name(),
    })
}

pub fn idempotent_report_to_json(r: &IdempotentReport) -> Value {
    json!({
        "schema": SCHEMA,
        "is_idempotent": r.is_idempotent,
        "dim_right_ideal": r.dim_right_ideal,
        "sigma_e_e_zero": r.sigma_e_e_zero,
        "complement_product_zero": r.complement_product_zero,
        "e_sigma_e": matrix_to_json(&r.e_sigma_e),
        "class": r.class.map(|c| c.name()),
    })
}

pub fn fuzz_report_to_json(r: &FuzzReport) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": r.kind,
        "seed": r.seed,
        "trials_requested": r.trials_requested,
        "trials_run": r.trials_run,
        "constructed": r.constructed,
        "none_by_theorem": r.none_by_theorem,
        "oracle_checked": r.oracle_checked,
        "metabolic_not_hyperbolic": r.metabolic_not_hyperbolic,
        "sample_witness": r.sample_witness,
        "infeasible": r.infeasible,
        "violations": r.violations,
    })
}

pub fn example_report_to_json(r: &ExampleReport) -> Value {
    json!({
        "schema": SCHEMA,
        "all_pass": r.all_pass(),
        "claims": r.claims.iter().map(|c| json!({
            "name": c.name,
            "pass": c.pass,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}
