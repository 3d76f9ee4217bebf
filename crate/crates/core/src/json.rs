//! Canonical JSON encoding of measures.
//!
//! The document shape is
//!
//! ```text
//! {
//!   "pp": [[pos, re, im], ...],
//!   "ac": {"origin": o, "step": s, "samples": [[re, im], ...], "clip": [a, b]} | null,
//!   "sc": {"ifs": [[ratio, offset, weight], ...], "depth": d, "mass": m,
//!          "atoms": [[pos, re, im], ...]} | null,
//!   "truncation": [lo, hi] | null
//! }
//! ```
//!
//! `clip` and `atoms` are optional on input. On input without `atoms`, the sc
//! part is realized from its generator; with `atoms` the list is taken
//! verbatim (this is how derived singular parts round-trip). Emission is
//! canonical: fixed key order, every number printed with 17 significant
//! digits, so parse -> emit is idempotent byte for byte.

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::measure::{Atom, DensityPart, IfsMap, Measure, PurePointPart, SingularPart};
use crate::window::Window;

/// 17 significant digits; round-trips every finite f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.16e}", x)
}

fn push_num(out: &mut String, x: f64) {
    out.push_str(&fmt_f64(x));
}

fn push_atoms(out: &mut String, atoms: &[Atom]) {
    out.push('[');
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        push_num(out, a.pos);
        out.push(',');
        push_num(out, a.weight.re);
        out.push(',');
        push_num(out, a.weight.im);
        out.push(']');
    }
    out.push(']');
}

/// Serialize a measure to its canonical JSON document.
pub fn to_json(m: &Measure) -> String {
    let mut s = String::with_capacity(256);
    s.push_str("{\"pp\":");
    push_atoms(&mut s, m.pp.atoms());
    s.push_str(",\"ac\":");
    match &m.ac {
        None => s.push_str("null"),
        Some(d) => {
            s.push_str("{\"origin\":");
            push_num(&mut s, d.origin);
            s.push_str(",\"step\":");
            push_num(&mut s, d.step);
            s.push_str(",\"samples\":[");
            for (i, v) in d.samples.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push('[');
                push_num(&mut s, v.re);
                s.push(',');
                push_num(&mut s, v.im);
                s.push(']');
            }
            s.push(']');
            if let Some((a, b)) = d.clip {
                s.push_str(",\"clip\":[");
                push_num(&mut s, a);
                s.push(',');
                push_num(&mut s, b);
                s.push(']');
            }
            s.push('}');
        }
    }
    s.push_str(",\"sc\":");
    if m.sc.is_empty() && m.sc.ifs.is_empty() {
        s.push_str("null");
    } else {
        s.push_str("{\"ifs\":[");
        for (i, f) in m.sc.ifs.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push('[');
            push_num(&mut s, f.ratio);
            s.push(',');
            push_num(&mut s, f.offset);
            s.push(',');
            push_num(&mut s, f.weight);
            s.push(']');
        }
        s.push_str("],\"depth\":");
        s.push_str(&m.sc.depth.to_string());
        s.push_str(",\"mass\":");
        push_num(&mut s, m.sc.mass);
        s.push_str(",\"atoms\":");
        push_atoms(&mut s, m.sc.atoms());
        s.push('}');
    }
    s.push_str(",\"truncation\":");
    match &m.truncation {
        None => s.push_str("null"),
        Some(w) => {
            s.push('[');
            push_num(&mut s, w.lo);
            s.push(',');
            push_num(&mut s, w.hi);
            s.push(']');
        }
    }
    s.push('}');
    s
}

fn bad(msg: &str) -> Error {
    Error::BadParams(format!("measure json: {msg}"))
}

fn as_f64(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(&format!("{ctx}: expected a number")))
}

fn parse_atom_list(v: &Value, ctx: &str) -> Result<Vec<Atom>> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(&format!("{ctx}: expected an array")))?;
    let mut atoms = Vec::with_capacity(arr.len());
    for row in arr {
        let row = row
            .as_array()
            .filter(|r| r.len() == 3)
            .ok_or_else(|| bad(&format!("{ctx}: expected [pos, re, im] triples")))?;
        atoms.push(Atom::new(
            as_f64(&row[0], ctx)?,
            Complex64::new(as_f64(&row[1], ctx)?, as_f64(&row[2], ctx)?),
        ));
    }
    Ok(atoms)
}

/// Parse a measure from its JSON document.
pub fn from_json(text: &str) -> Result<Measure> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| bad(&format!("parse error: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| bad("top level must be an object"))?;

    let pp = match obj.get("pp") {
        None | Some(Value::Null) => PurePointPart::empty(),
        Some(v) => PurePointPart::new(parse_atom_list(v, "pp")?),
    };

    let ac = match obj.get("ac") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let o = v.as_object().ok_or_else(|| bad("ac: expected an object"))?;
            let origin = as_f64(o.get("origin").ok_or_else(|| bad("ac.origin missing"))?, "ac.origin")?;
            let step = as_f64(o.get("step").ok_or_else(|| bad("ac.step missing"))?, "ac.step")?;
            let samples = o
                .get("samples")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("ac.samples missing"))?;
            let mut vals = Vec::with_capacity(samples.len());
            for s in samples {
                let s = s
                    .as_array()
                    .filter(|r| r.len() == 2)
                    .ok_or_else(|| bad("ac.samples: expected [re, im] pairs"))?;
                vals.push(Complex64::new(
                    as_f64(&s[0], "ac.samples")?,
                    as_f64(&s[1], "ac.samples")?,
                ));
            }
            let mut d = DensityPart::new(origin, step, vals)?;
            if let Some(c) = o.get("clip").filter(|c| !c.is_null()) {
                let c = c
                    .as_array()
                    .filter(|r| r.len() == 2)
                    .ok_or_else(|| bad("ac.clip: expected [lo, hi]"))?;
                d.clip = Some((as_f64(&c[0], "ac.clip")?, as_f64(&c[1], "ac.clip")?));
            }
            Some(d)
        }
    };

    let sc = match obj.get("sc") {
        None | Some(Value::Null) => SingularPart::empty(),
        Some(v) => {
            let o = v.as_object().ok_or_else(|| bad("sc: expected an object"))?;
            let mut ifs = Vec::new();
            if let Some(rows) = o.get("ifs").and_then(Value::as_array) {
                for row in rows {
                    let row = row
                        .as_array()
                        .filter(|r| r.len() == 3)
                        .ok_or_else(|| bad("sc.ifs: expected [ratio, offset, weight] triples"))?;
                    ifs.push(IfsMap {
                        ratio: as_f64(&row[0], "sc.ifs")?,
                        offset: as_f64(&row[1], "sc.ifs")?,
                        weight: as_f64(&row[2], "sc.ifs")?,
                    });
                }
            }
            let depth = o
                .get("depth")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("sc.depth missing"))? as u32;
            let mass = as_f64(o.get("mass").ok_or_else(|| bad("sc.mass missing"))?, "sc.mass")?;
            match o.get("atoms").filter(|a| !a.is_null()) {
                Some(a) => {
                    SingularPart::from_parts(ifs, depth, mass, parse_atom_list(a, "sc.atoms")?)
                }
                None => SingularPart::realize(ifs, depth, mass)?,
            }
        }
    };

    let truncation = match obj.get("truncation") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let r = v
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| bad("truncation: expected [lo, hi]"))?;
            Some(Window::new(
                as_f64(&r[0], "truncation")?,
                as_f64(&r[1], "truncation")?,
            )?)
        }
    };

    Ok(Measure {
        pp,
        ac,
        sc,
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_idempotent() {
        let text = r#"{
            "pp": [[0.5, 1.0, 0.0], [-2, 0.25, -0.125]],
            "ac": {"origin": -1, "step": 0.5, "samples": [[1,0],[0.1,0.2]]},
            "sc": {"ifs": [[0.3333333333333333, 0, 0.5],[0.3333333333333333, 0.6666666666666666, 0.5]], "depth": 4, "mass": 1.0},
            "truncation": [-8, 8]
        }"#;
        let m = from_json(text).unwrap();
        let once = to_json(&m);
        let twice = to_json(&from_json(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn seventeen_digit_numbers_round_trip() {
        let x = 0.1f64 + 0.2f64;
        let s = fmt_f64(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(fmt_f64(-0.0), fmt_f64(0.0));
    }

    #[test]
    fn missing_pieces_are_empty() {
        let m = from_json(r#"{"pp": [], "ac": null, "sc": null, "truncation": null}"#).unwrap();
        assert!(m.is_zero());
        assert_eq!(to_json(&from_json(&to_json(&m)).unwrap()), to_json(&m));
    }

    #[test]
    fn sc_atoms_override_realization() {
        let text = r#"{"pp": [], "ac": null,
            "sc": {"ifs": [], "depth": 0, "mass": 0.0, "atoms": [[0.25, 0.5, 0.0]]},
            "truncation": null}"#;
        let m = from_json(text).unwrap();
        assert_eq!(m.sc.atoms().len(), 1);
        assert_eq!(m.sc.atoms()[0].pos, 0.25);
    }
}
