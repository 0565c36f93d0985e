#![allow(dead_code)]

use assay_core::dataset::Dataset;
use assay_core::speclang::{parse_spec, validate_spec, ValidatedSpec};

pub fn spec(text: &str) -> ValidatedSpec {
    validate_spec(parse_spec(text).expect("parse")).expect("validate")
}

pub fn data(csv: &str, spec: &ValidatedSpec) -> Dataset {
    Dataset::from_reader(csv.as_bytes(), spec).expect("load")
}

/// Two-group comparison spec over columns `g` (categories a, b) and `y`.
pub fn two_group_spec(assumptions: &str) -> ValidatedSpec {
    spec(&format!(
        "data:\n  path = unused.csv\nvariables:\n  g = nominal {{a, b}}\n  y = interval\n\
         design:\n  study_type = experiment\n  independent = g\n  dependent = y\n\
         assumptions:\n  alpha = 0.05\n{assumptions}hypothesis:\n  g:a > g:b\n"
    ))
}

pub fn two_group_csv(a: &[f64], b: &[f64]) -> String {
    let mut s = String::from("g,y\n");
    for v in a {
        s.push_str(&format!("a,{v:?}\n"));
    }
    for v in b {
        s.push_str(&format!("b,{v:?}\n"));
    }
    s
}

pub fn uscrime_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo/uscrime.assay")
}
