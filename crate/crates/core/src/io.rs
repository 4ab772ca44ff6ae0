//! JSON forms of elements, matrices, vectors, words and reports. Indices in files are 1-based.

use serde_json::{json, Map, Value};

use crate::alg::FormAlg;
use crate::error::{Error, Result};
use crate::gens::{column_symbol, validate, Family, Letter, Payload, Symbol, Word};
use crate::group::{FGroup, Group, PGroup};
use crate::matrix::Mat;
use crate::reduce::{Diagonalization, PatchReport, PatchStatus, ReductionResult};
use crate::ring::{parse_element, El, FiniteRing, MPoly};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

/// Element values: indices as numbers, or the ring's own element syntax as strings.
pub trait JsonElem: FormAlg {
    fn elem_to_json(&self, e: &Self::E) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::E>;
}

fn base_elem(ring: &FiniteRing, v: &Value) -> Result<El> {
    match v {
        Value::Number(n) => {
            let k = n.as_u64().ok_or_else(|| bad(format!("element index {n} is not a nonnegative integer")))?;
            if k as usize >= ring.size() {
                return Err(bad(format!("element index {k} out of range for a ring of size {}", ring.size())));
            }
            Ok(k as El)
        }
        Value::String(s) => parse_element(ring, s),
        other => Err(bad(format!("expected an element, got {other}"))),
    }
}

impl JsonElem for crate::form::FormRing {
    fn elem_to_json(&self, e: &El) -> Value {
        json!(e)
    }
    fn elem_from_json(&self, v: &Value) -> Result<El> {
        base_elem(&self.ring, v)
    }
}

/// Polynomials: a number (constant), a list of X-coefficients, or a list of {x, t, c} terms.
impl JsonElem for crate::form::PolyFormRing {
    fn elem_to_json(&self, p: &MPoly) -> Value {
        if p.deg_t().unwrap_or(0) == 0 {
            json!(p.coeffs_x())
        } else {
            Value::Array(p.terms().iter().map(|&((x, t), c)| json!({"x": x, "t": t, "c": c})).collect())
        }
    }
    fn elem_from_json(&self, v: &Value) -> Result<MPoly> {
        let ring = &self.base.ring;
        match v {
            Value::Array(items) if items.iter().all(|x| x.is_object()) && !items.is_empty() => {
                let mut p = MPoly::zero();
                for it in items {
                    let dx = it.get("x").and_then(Value::as_u64).unwrap_or(0) as u16;
                    let dt = it.get("t").and_then(Value::as_u64).unwrap_or(0) as u16;
                    let c = base_elem(ring, it.get("c").ok_or_else(|| bad("term without 'c'"))?)?;
                    p = self.poly.add(&p, &MPoly::monomial(c, dx, dt));
                }
                Ok(p)
            }
            Value::Array(items) => Ok(MPoly::from_coeffs(&items.iter().map(|x| base_elem(ring, x)).collect::<Result<Vec<_>>>()?)),
            other => Ok(MPoly::constant(base_elem(ring, other)?)),
        }
    }
}

pub fn symbol_to_json<A: JsonElem>(g: &Group<A>, s: &Symbol<A::E>, inv: bool) -> Value {
    let a = g.alg.as_ref();
    let mut m = Map::new();
    m.insert("family".into(), json!(s.family.name()));
    m.insert("i".into(), json!(s.i + 1));
    m.insert("j".into(), json!(s.j + 1));
    let payload = match &s.payload {
        Payload::Scalar(x) => a.elem_to_json(x),
        Payload::Column { zeta, f } => json!({
            "zeta": zeta.iter().map(|z| a.elem_to_json(z)).collect::<Vec<_>>(),
            "f": a.elem_to_json(f),
        }),
    };
    m.insert("payload".into(), payload);
    if inv {
        m.insert("inverse".into(), json!(true));
    }
    Value::Object(m)
}

fn index(v: &Value, key: &str, bound: usize) -> Result<usize> {
    let k = v.get(key).and_then(Value::as_u64).ok_or_else(|| bad(format!("missing integer '{key}'")))? as usize;
    if k == 0 || k > bound {
        return Err(bad(format!("'{key}' = {k} is outside 1..={bound}")));
    }
    Ok(k - 1)
}

pub fn symbol_from_json<A: JsonElem>(g: &Group<A>, v: &Value) -> Result<Letter<A::E>> {
    let a = g.alg.as_ref();
    let fam = Family::parse(v.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing 'family'"))?)?;
    let i = index(v, "i", g.n)?;
    let payload = v.get("payload").ok_or_else(|| bad("missing 'payload'"))?;
    let sym = if fam.is_column() {
        let zeta = payload
            .get("zeta")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("column payload needs 'zeta'"))?
            .iter()
            .map(|z| a.elem_from_json(z))
            .collect::<Result<Vec<_>>>()?;
        if zeta.len() != g.r() {
            return Err(Error::Dimension(format!("zeta has {} entries, expected {}", zeta.len(), g.r())));
        }
        match payload.get("f") {
            Some(f) => Symbol { family: fam, i, j: i, payload: Payload::Column { zeta, f: a.elem_from_json(f)? } },
            None => column_symbol(g, fam, i, zeta).ok_or_else(|| Error::Constraint("no ζ_f exists for this ζ".into()))?,
        }
    } else {
        let j = index(v, "j", g.n)?;
        Symbol::scalar(fam, i, j, a.elem_from_json(payload)?)
    };
    validate(g, &sym)?;
    Ok(Letter { sym, inv: v.get("inverse").and_then(Value::as_bool).unwrap_or(false) })
}

pub fn word_to_json<A: JsonElem>(g: &Group<A>, w: &Word<A::E>) -> Value {
    Value::Array(w.letters.iter().map(|l| symbol_to_json(g, &l.sym, l.inv)).collect())
}

/// A list of symbols, or an object with a "word" list.
pub fn word_from_json<A: JsonElem>(g: &Group<A>, v: &Value) -> Result<Word<A::E>> {
    let items = match v {
        Value::Array(a) => a,
        Value::Object(_) => v.get("word").and_then(Value::as_array).ok_or_else(|| bad("expected a 'word' list"))?,
        _ => return Err(bad("expected a word")),
    };
    Ok(Word { letters: items.iter().map(|x| symbol_from_json(g, x)).collect::<Result<_>>()? })
}

pub fn matrix_to_json<A: JsonElem>(g: &Group<A>, m: &Mat<A::E>) -> Value {
    let a = g.alg.as_ref();
    json!({
        "shape": g.shape_spec(),
        "rows": m.rows,
        "cols": m.cols,
        "data": m.data.iter().map(|x| a.elem_to_json(x)).collect::<Vec<_>>(),
    })
}

/// Row-major "data" (flat) or nested "rows"; a bare nested list, or a report holding a "matrix", also works.
pub fn matrix_from_json<A: JsonElem>(g: &Group<A>, v: &Value) -> Result<Mat<A::E>> {
    if let Some(inner) = v.get("matrix") {
        return matrix_from_json(g, inner);
    }
    let a = g.alg.as_ref();
    let d = g.dim();
    let flat: Vec<Value> = match v {
        Value::Array(rows) => rows.iter().flat_map(|r| r.as_array().cloned().unwrap_or_default()).collect(),
        Value::Object(o) => match (o.get("data"), o.get("rows")) {
            (Some(Value::Array(xs)), _) => xs.clone(),
            (_, Some(Value::Array(rows))) => rows.iter().flat_map(|r| r.as_array().cloned().unwrap_or_default()).collect(),
            _ => return Err(bad("matrix needs 'data' or 'rows'")),
        },
        _ => return Err(bad("expected a matrix")),
    };
    if flat.len() != d * d {
        return Err(Error::Dimension(format!("matrix has {} entries, expected {}", flat.len(), d * d)));
    }
    Ok(Mat { rows: d, cols: d, data: flat.iter().map(|x| a.elem_from_json(x)).collect::<Result<_>>()? })
}

pub fn vector_from_json(g: &FGroup, v: &Value) -> Result<Vec<El>> {
    let items = match v {
        Value::Array(a) => a,
        Value::Object(_) => v.get("vector").and_then(Value::as_array).ok_or_else(|| bad("expected a 'vector' list"))?,
        _ => return Err(bad("expected a vector")),
    };
    if items.len() != g.dim() {
        return Err(Error::Dimension(format!("vector has {} entries, expected {}", items.len(), g.dim())));
    }
    items.iter().map(|x| base_elem(g.ring(), x)).collect()
}

pub fn reduction_to_json(g: &FGroup, r: &ReductionResult) -> Value {
    json!({
        "group": g.spec(),
        "input": r.input,
        "direction": if r.to_basis { "to-basis" } else { "from-basis" },
        "target": g.basis(g.dim() - 1),
        "word": word_to_json(g, &r.word),
    })
}

pub fn diagonalization_to_json(g: &FGroup, d: &Diagonalization) -> Value {
    json!({
        "left": word_to_json(g, &d.left),
        "right": word_to_json(g, &d.right),
        "diagonal": (0..d.d.rows).map(|i| *d.d.get(i, i)).collect::<Vec<_>>(),
    })
}

pub fn patch_status_json(s: &PatchStatus) -> Value {
    match s {
        PatchStatus::Success => json!({"status": "success"}),
        PatchStatus::Failure(m) => json!({"status": "failure", "reason": m}),
        PatchStatus::Unknown(m) => json!({"status": "unknown", "reason": m}),
    }
}

pub fn patch_report_to_json(pg: &PGroup, r: &PatchReport) -> Value {
    json!({
        "group": format!("{}/{}", pg.alg.base.spec(), pg.shape_spec()),
        "input": matrix_to_json(pg, &r.input),
        "pieces": r.pieces.iter().map(|p| json!({
            "idempotent": p.idempotent,
            "local_word": word_to_json(pg, &p.local_word),
            "b": p.b,
            "conductor": p.dilation.conductor,
            "d": p.dilation.d,
            "m": p.dilation.m,
        })).collect::<Vec<_>>(),
        "word": word_to_json(pg, &r.word),
        "verification": patch_status_json(&r.status),
    })
}

pub fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::eval;
    use crate::group::parse_group;

    #[test]
    fn words_round_trip() {
        let g = parse_group("zmod:4:lambda=3/herm:4:a=0").unwrap();
        let pool = crate::sample::symbol_pool(&g);
        let mut rng = crate::sample::rng(3);
        let w = crate::sample::random_word(&pool, 8, &mut rng);
        let back = word_from_json(&g, &word_to_json(&g, &w)).unwrap();
        assert_eq!(back, w);
        let m = eval(&g, &w).unwrap();
        assert_eq!(matrix_from_json(&g, &matrix_to_json(&g, &m)).unwrap(), m);
    }

    #[test]
    fn poly_words_round_trip() {
        let g = parse_group("zmod:6:lambda=5/quad:3").unwrap();
        let pg = g.over_poly();
        let pool = crate::sample::symbol_pool(&g);
        let mut rng = crate::sample::rng(3);
        let w = crate::sample::random_poly_word(&pg, &pool, 3, 5, &mut rng);
        assert_eq!(word_from_json(&pg, &word_to_json(&pg, &w)).unwrap(), w);
    }

    #[test]
    fn symbol_parsing_errors() {
        let g = parse_group("zmod:5:lambda=1/quad:3").unwrap();
        let v: Value = serde_json::from_str(r#"[{"family":"qe","i":1,"j":4,"payload":1}]"#).unwrap();
        assert!(word_from_json(&g, &v).is_err());
        let v: Value = serde_json::from_str(r#"[{"family":"qr","i":1,"j":1,"payload":1}]"#).unwrap();
        assert!(matches!(word_from_json(&g, &v), Err(Error::Constraint(_))));
        let v: Value = serde_json::from_str(r#"{"word":[{"family":"qe","i":1,"j":2,"payload":"3"}]}"#).unwrap();
        assert_eq!(word_from_json(&g, &v).unwrap().letters[0].sym, Symbol::scalar(Family::QE, 0, 1, 3));
    }
}
