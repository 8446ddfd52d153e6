//! On-disk germ description: a small JSON document listing objects, typed
//! elements and explicit product triples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::germ::{build_germ, GermError, GermSpec, GermTable};

#[derive(Debug, Error)]
pub enum GermFileError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad germ file: {0}")]
    Invalid(String),
    #[error(transparent)]
    Germ(#[from] GermError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GermFileElement {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub identity: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GermFile {
    pub objects: Vec<String>,
    pub elements: Vec<GermFileElement>,
    /// [a, b, ab] by element name
    pub products: Vec<[String; 3]>,
}

impl GermFile {
    pub fn from_str(text: &str) -> Result<GermFile, GermFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("germ files serialize");
        s.push('\n');
        s
    }

    pub fn to_spec(&self) -> Result<GermSpec, GermFileError> {
        let obj_index = |name: &str| {
            self.objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| GermFileError::Invalid(format!("unknown object {name:?}")))
        };
        let elem_index = |name: &str| {
            self.elements
                .iter()
                .position(|e| e.name == name)
                .ok_or_else(|| GermFileError::Invalid(format!("unknown element {name:?}")))
        };
        let mut spec = GermSpec {
            objects: self.objects.clone(),
            ..Default::default()
        };
        for e in &self.elements {
            spec.elements
                .push((e.name.clone(), obj_index(&e.source)?, obj_index(&e.target)?, e.identity));
        }
        for [a, b, c] in &self.products {
            spec.products
                .push((elem_index(a)?, elem_index(b)?, elem_index(c)?));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<GermTable, GermFileError> {
        Ok(build_germ(&self.to_spec()?)?)
    }

    /// Re-derive the file form of a table, products listed in the order of
    /// the element list; a fixed order makes round-trips byte-identical.
    pub fn from_table(germ: &GermTable) -> GermFile {
        let elements = germ
            .elements()
            .map(|e| GermFileElement {
                name: germ.label(e).to_string(),
                source: germ.object_label(germ.source(e)).to_string(),
                target: germ.object_label(germ.target(e)).to_string(),
                identity: germ.is_identity(e),
            })
            .collect();
        let mut triples: Vec<_> = germ.product_entries().collect();
        triples.sort();
        let products = triples
            .into_iter()
            .map(|(a, b, c)| {
                [
                    germ.label(a).to_string(),
                    germ.label(b).to_string(),
                    germ.label(c).to_string(),
                ]
            })
            .collect();
        GermFile {
            objects: germ.objects().map(|o| germ.object_label(o).to_string()).collect(),
            elements,
            products,
        }
    }
}

/// The braid germ on two letters: carrier 1, a, b, ab, ba, aba with the
/// length-additive product.
pub fn a2_germ_file() -> GermFile {
    let e = |name: &str| GermFileElement {
        name: name.to_string(),
        source: "*".to_string(),
        target: "*".to_string(),
        identity: name == "1",
    };
    let mut products = Vec::new();
    let mult: &[(&str, &str, &str)] = &[
        ("a", "b", "ab"),
        ("a", "ba", "aba"),
        ("b", "a", "ba"),
        ("b", "ab", "aba"),
        ("ab", "a", "aba"),
        ("ba", "b", "aba"),
    ];
    for &(a, b, c) in mult {
        products.push([a.to_string(), b.to_string(), c.to_string()]);
    }
    GermFile {
        objects: vec!["*".to_string()],
        elements: ["1", "a", "b", "ab", "ba", "aba"].iter().map(|n| e(n)).collect(),
        products,
    }
}

/// The seven-morphism germ with two objects where a and b have a unique
/// common right multiple c but their category-level lcm fails to exist.
pub fn counterexample_germ_file() -> GermFile {
    let el = |name: &str, source: &str, target: &str, identity: bool| GermFileElement {
        name: name.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        identity,
    };
    GermFile {
        objects: vec!["X".to_string(), "Y".to_string()],
        elements: vec![
            el("1_X", "X", "X", true),
            el("1_Y", "Y", "Y", true),
            el("s", "Y", "Y", false),
            el("t", "Y", "Y", false),
            el("a", "X", "Y", false),
            el("b", "X", "Y", false),
            el("u", "Y", "X", false),
            el("v", "Y", "X", false),
            el("c", "X", "Y", false),
        ],
        products: vec![
            ["a".into(), "s".into(), "c".into()],
            ["b".into(), "t".into(), "c".into()],
        ],
    }
}
