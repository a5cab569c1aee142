//! JSON morphism files.
//!
//! ```json
//! {
//!   "k": 2,
//!   "n": 2,
//!   "images": [
//!     {
//!       "phi": [[1, 0], [0, 0]],
//!       "sigma": "(1 2)"
//!     },
//!     {
//!       "phi": [[0, 0], [0, 0]],
//!       "sigma": "id"
//!     }
//!   ]
//! }
//! ```
//!
//! `images[j]` is ψ(e_{j+1}); `phi[i]` is its translation at index `i + 1`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use nvtorus::{IntVec, Permutation, TorusMorphism, WreathElement};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    k: usize,
    n: usize,
    images: Vec<ImageSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageSpec {
    phi: Vec<Vec<i64>>,
    sigma: String,
}

fn field_error(path: String, message: impl Into<String>) -> CliError {
    CliError::Spec { path, line: None, column: None, message: message.into() }
}

pub fn parse_spec(text: &str) -> Result<TorusMorphism, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: SpecFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Spec {
            path,
            line: Some(inner.line()),
            column: Some(inner.column()),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| CliError::Spec {
        path: ".".into(),
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;

    if spec.images.len() != spec.k {
        return Err(field_error("images".into(), format!("expected {} images, found {}", spec.k, spec.images.len())));
    }
    let mut images = Vec::with_capacity(spec.k);
    for (j, img) in spec.images.iter().enumerate() {
        if img.phi.len() != spec.n {
            return Err(field_error(
                format!("images[{j}].phi"),
                format!("expected {} vectors, found {}", spec.n, img.phi.len()),
            ));
        }
        let mut trans = Vec::with_capacity(spec.n);
        for (i, v) in img.phi.iter().enumerate() {
            if v.len() != spec.k {
                return Err(field_error(
                    format!("images[{j}].phi[{i}]"),
                    format!("expected {} entries, found {}", spec.k, v.len()),
                ));
            }
            trans.push(IntVec::from_i64(v));
        }
        let sigma = Permutation::parse(spec.n, &img.sigma)
            .map_err(|e| field_error(format!("images[{j}].sigma"), e.to_string()))?;
        images.push(WreathElement::new(spec.k, trans, sigma)?);
    }
    Ok(TorusMorphism::new(spec.k, spec.n, images)?)
}

fn vector(v: &IntVec) -> String {
    let parts: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text of a morphism file; `parse_spec` inverts it exactly.
pub fn print_spec(psi: &TorusMorphism) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"k\": {},\n  \"n\": {},\n  \"images\": [", psi.k(), psi.n());
    for (j, img) in psi.images().iter().enumerate() {
        let phi: Vec<String> = img.translations().iter().map(vector).collect();
        let _ = write!(
            out,
            "    {{\n      \"phi\": [{}],\n      \"sigma\": \"{}\"\n    }}",
            phi.join(", "),
            img.perm()
        );
        out.push_str(if j + 1 < psi.k() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const POSITIVE: &str = r#"{
  "k": 2,
  "n": 2,
  "images": [
    {
      "phi": [[1, 0], [0, 0]],
      "sigma": "(1 2)"
    },
    {
      "phi": [[0, 0], [0, 0]],
      "sigma": "id"
    }
  ]
}
"#;

    #[test]
    fn canonical_round_trip() {
        let psi = parse_spec(POSITIVE).unwrap();
        assert_eq!(print_spec(&psi), POSITIVE);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = POSITIVE.replace("\"(1 2)\"", "\"(1 3)\"");
        match parse_spec(&bad) {
            Err(CliError::Spec { path, .. }) => assert_eq!(path, "images[0].sigma"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = POSITIVE.replace("[[1, 0], [0, 0]]", "[[1, \"x\"], [0, 0]]");
        match parse_spec(&bad) {
            Err(CliError::Spec { path, line, .. }) => {
                assert_eq!(path, "images[0].phi[0][1]");
                assert_eq!(line, Some(6));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_spec("{\"k\": 1}"), Err(CliError::Spec { .. })));
    }

    #[test]
    fn non_commuting_images_are_rejected() {
        let text = r#"{"k": 2, "n": 3, "images": [
            {"phi": [[0, 0], [0, 0], [0, 0]], "sigma": "(1 2)"},
            {"phi": [[0, 0], [0, 0], [0, 0]], "sigma": "(2 3)"}]}"#;
        assert!(matches!(parse_spec(text), Err(CliError::Core(nvtorus::Error::NonCommutingImages(1, 2)))));
    }
}
