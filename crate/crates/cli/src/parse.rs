//! Parsers for the small flag languages: windows `lo,hi`, epsilon lists,
//! `a..b` ranges, `hat:a,b,c` test functions and `gallery:name` measures.

use apmeas_core::constructions::{gallery, GalleryParams};
use apmeas_core::{Error, Measure, Result, TestFunction, Window};

pub fn window(s: &str) -> Result<Window> {
    let parts = split_floats(s)?;
    if parts.len() != 2 {
        return Err(Error::BadParams(format!("expected lo,hi: {s}")));
    }
    Window::new(parts[0], parts[1])
}

pub fn float_list(s: &str) -> Result<Vec<f64>> {
    let v = split_floats(s)?;
    if v.is_empty() {
        return Err(Error::BadParams("empty list".into()));
    }
    Ok(v)
}

fn split_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::BadParams(format!("not a number: {p}")))
        })
        .collect()
}

/// Inclusive integer range `a..b`, or a single integer.
pub fn int_range(s: &str) -> Result<(u32, u32)> {
    if let Some((a, b)) = s.split_once("..") {
        let a = a
            .parse::<u32>()
            .map_err(|_| Error::BadParams(format!("bad range start: {a}")))?;
        let b = b
            .parse::<u32>()
            .map_err(|_| Error::BadParams(format!("bad range end: {b}")))?;
        if a == 0 || b < a {
            return Err(Error::BadParams(format!("bad range: {s}")));
        }
        Ok((a, b))
    } else {
        let n = s
            .parse::<u32>()
            .map_err(|_| Error::BadParams(format!("bad integer: {s}")))?;
        Ok((n, n))
    }
}

/// Test functions: `hat:a,b,c` and `tent:a,b,c` (synonyms).
pub fn test_function(s: &str) -> Result<TestFunction> {
    match s.split_once(':') {
        Some(("hat", rest)) | Some(("tent", rest)) => {
            let v = split_floats(rest)?;
            if v.len() != 3 {
                return Err(Error::BadParams(format!("hat needs a,b,c: {s}")));
            }
            TestFunction::hat(v[0], v[1], v[2])
        }
        _ => Err(Error::BadParams(format!(
            "unknown test function spec: {s} (use hat:a,b,c)"
        ))),
    }
}

/// Measure families for `converge --seq`: `gallery:<name>` where the stage
/// index n supplies the parameter.
pub fn gallery_family(s: &str) -> Result<Box<dyn Fn(u32) -> Result<Measure> + Send + Sync>> {
    let name = s
        .strip_prefix("gallery:")
        .ok_or_else(|| Error::BadParams(format!("expected gallery:<name>: {s}")))?
        .to_string();
    Ok(Box::new(move |n: u32| {
        let params = GalleryParams {
            n: Some(n),
            depth: Some(8),
            ..Default::default()
        };
        gallery(&name, &params)
    }))
}

/// A single gallery measure for `--limit`, e.g. `gallery:leb01`.
pub fn gallery_fixed(s: &str) -> Result<Measure> {
    let name = s
        .strip_prefix("gallery:")
        .ok_or_else(|| Error::BadParams(format!("expected gallery:<name>: {s}")))?;
    gallery(
        name,
        &GalleryParams {
            n: Some(1),
            depth: Some(8),
            ..Default::default()
        },
    )
}
