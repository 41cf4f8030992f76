//! JSON instance documents.
//!
//! ```json
//! {
//!   "curve": {"genera": [2, 2]},
//!   "bundle": {"rank": 2, "multidegree": [1, 1]},
//!   "polarization": {"weights": ["1/3", "2/3"]}
//! }
//! ```
//!
//! A bundle may give `multidegree`, `euler` (per-component Euler
//! characteristics) or both; when both are present they must agree.

use std::str::FromStr;

use combstab::kernel::{validate_pair, Assumptions, GeneratedPairData};
use combstab::model::{validate_polarization, BundleData, CombCurve, Polarization};
use combstab::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub curve: CurveDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<PolarizationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub genera: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub rank: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multidegree: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub rank: u32,
    pub sections: u32,
    pub multidegree: Vec<i64>,
    pub kernel_dims: Vec<u32>,
    #[serde(default)]
    pub assumptions: Assumptions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationDoc {
    pub weights: Vec<Rational>,
}

impl From<&Polarization> for PolarizationDoc {
    fn from(w: &Polarization) -> Self {
        PolarizationDoc {
            weights: w.weights.clone(),
        }
    }
}

impl From<&GeneratedPairData> for PairDoc {
    fn from(p: &GeneratedPairData) -> Self {
        PairDoc {
            rank: p.rank,
            sections: p.sections,
            multidegree: p.multidegree.clone(),
            kernel_dims: p.kernel_dims.clone(),
            assumptions: p.assumptions,
        }
    }
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn curve(&self) -> Result<CombCurve, CliError> {
        Ok(CombCurve::new(self.curve.genera.clone())?)
    }

    /// The bundle, with `multidegree` and `euler` cross-validated.
    pub fn bundle(&self, curve: &CombCurve) -> Result<BundleData, CliError> {
        let doc = self
            .bundle
            .as_ref()
            .ok_or_else(|| CliError::Input("document has no bundle".into()))?;
        let from_degrees = doc
            .multidegree
            .as_ref()
            .map(|d| -> Result<BundleData, CliError> {
                let b = BundleData::new(doc.rank, d.clone())?;
                b.component_eulers(curve)?;
                Ok(b)
            })
            .transpose()?;
        let from_eulers = doc
            .euler
            .as_ref()
            .map(|chi| BundleData::from_eulers(curve, doc.rank, chi))
            .transpose()?;
        match (from_degrees, from_eulers) {
            (Some(a), Some(b)) if a != b => Err(CliError::Input(format!(
                "multidegree {:?} and euler {:?} disagree: the euler list corresponds to multidegree {:?}",
                a.multidegree,
                doc.euler.as_deref().unwrap_or_default(),
                b.multidegree
            ))),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(CliError::Input("bundle needs a multidegree or an euler list".into())),
        }
    }

    pub fn pair(&self, curve: &CombCurve) -> Result<GeneratedPairData, CliError> {
        let doc = self
            .pair
            .as_ref()
            .ok_or_else(|| CliError::Input("document has no pair".into()))?;
        let pair = GeneratedPairData {
            rank: doc.rank,
            sections: doc.sections,
            multidegree: doc.multidegree.clone(),
            kernel_dims: doc.kernel_dims.clone(),
            assumptions: doc.assumptions,
        };
        validate_pair(curve, &pair).map_err(combstab::Error::InvalidPair)?;
        Ok(pair)
    }

    /// The polarization from `flag` if given, otherwise from the document;
    /// validated against `curve`.
    pub fn polarization(&self, curve: &CombCurve, flag: Option<&str>) -> Result<Polarization, CliError> {
        let w = match (flag, &self.polarization) {
            (Some(text), _) => parse_weights(text)?,
            (None, Some(doc)) => Polarization::new(doc.weights.clone()),
            (None, None) => {
                return Err(CliError::Input(
                    "no polarization: add one to the document or pass --polarization".into(),
                ))
            }
        };
        validate_polarization(&w).map_err(combstab::Error::InvalidPolarization)?;
        if w.len() != curve.components() {
            return Err(combstab::Error::LengthMismatch {
                what: "polarization",
                expected: curve.components(),
                found: w.len(),
            }
            .into());
        }
        Ok(w)
    }
}

/// Parses `"p/q,p/q,..."`.
pub fn parse_weights(text: &str) -> Result<Polarization, CliError> {
    text.split(',')
        .map(|s| Rational::from_str(s.trim()).map_err(|e| CliError::Input(format!("weight {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Polarization::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I1: &str = r#"{
        "curve": {"genera": [2, 2]},
        "bundle": {"rank": 2, "multidegree": [1, 1]},
        "polarization": {"weights": ["1/3", "2/3"]}
    }"#;

    #[test]
    fn parses_the_basic_instance() {
        let doc = InstanceDocument::parse(I1).unwrap();
        let c = doc.curve().unwrap();
        assert_eq!(doc.bundle(&c).unwrap(), BundleData::new(2, vec![1, 1]).unwrap());
        let w = doc.polarization(&c, None).unwrap();
        assert_eq!(w.to_string(), "(1/3, 2/3)");
        let flag = doc.polarization(&c, Some("1/2, 1/2")).unwrap();
        assert_eq!(flag.weights, vec![Rational::new(1, 2); 2]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"curve": {"genera": [2, 2]}, "colour": 1}"#;
        assert!(matches!(InstanceDocument::parse(text), Err(CliError::Json(_))));
        let text = r#"{"curve": {"genera": [2, 2], "nodes": 1}}"#;
        assert!(InstanceDocument::parse(text).is_err());
        let text = r#"{"curve": {"genera": [2, 2]}, "pair": {"rank": 1, "sections": 3,
            "multidegree": [3, 3], "kernel_dims": [0, 0], "assumptions": {"magic": true}}}"#;
        assert!(InstanceDocument::parse(text).is_err());
    }

    #[test]
    fn euler_and_degree_are_cross_checked() {
        // chi_j = d_j + 2(1 - 2) = d_j - 2
        let both = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [1, 1], "euler": [-1, -1]}}"#;
        let doc = InstanceDocument::parse(both).unwrap();
        assert_eq!(doc.bundle(&doc.curve().unwrap()).unwrap().multidegree, vec![1, 1]);

        let only = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "euler": [-1, -1]}}"#;
        let doc = InstanceDocument::parse(only).unwrap();
        assert_eq!(doc.bundle(&doc.curve().unwrap()).unwrap().multidegree, vec![1, 1]);

        let clash = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [1, 1], "euler": [-1, 0]}}"#;
        let doc = InstanceDocument::parse(clash).unwrap();
        assert!(matches!(doc.bundle(&doc.curve().unwrap()), Err(CliError::Input(_))));

        let neither = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2}}"#;
        let doc = InstanceDocument::parse(neither).unwrap();
        assert!(doc.bundle(&doc.curve().unwrap()).is_err());
    }

    #[test]
    fn input_errors() {
        let doc = InstanceDocument::parse(r#"{"curve": {"genera": [2, 2]}}"#).unwrap();
        let c = doc.curve().unwrap();
        assert!(doc.polarization(&c, None).is_err());
        assert!(doc.polarization(&c, Some("1/3,1/3,1/3")).is_err());
        assert!(doc.polarization(&c, Some("1/2,x")).is_err());
        assert!(doc.polarization(&c, Some("1/2,1/3")).is_err());
        assert!(doc.bundle(&c).is_err());
        assert!(doc.pair(&c).is_err());
        let short = InstanceDocument::parse(r#"{"curve": {"genera": [2]}}"#).unwrap();
        assert!(short.curve().is_err());
        let mismatch = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [1]}}"#;
        let doc = InstanceDocument::parse(mismatch).unwrap();
        assert!(doc.bundle(&c).is_err());
    }

    #[test]
    fn weights_render_in_lowest_terms() {
        let doc = InstanceDocument::parse(
            r#"{"curve": {"genera": [0, 0]}, "polarization": {"weights": ["2/4", "3/6"]}}"#,
        )
        .unwrap();
        assert!(doc.render().contains("\"1/2\""));
    }

    fn document() -> impl Strategy<Value = InstanceDocument> {
        (2usize..=5).prop_flat_map(|n| {
            let genera = prop::collection::vec(0u32..6, n);
            let ints = prop::collection::vec(-30i64..30, n);
            let bundle = prop::option::of((1u32..5, prop::option::of(ints.clone()), prop::option::of(ints.clone())));
            let pair = prop::option::of((
                1u32..4,
                1u32..8,
                ints,
                prop::collection::vec(0u32..4, n),
                any::<(bool, bool, bool)>(),
            ));
            let weights = prop::option::of(prop::collection::vec((-9i64..9, 1i64..64), n));
            (genera, bundle, pair, weights).prop_map(|(genera, bundle, pair, weights)| InstanceDocument {
                curve: CurveDoc { genera },
                bundle: bundle.map(|(rank, multidegree, euler)| BundleDoc {
                    rank,
                    multidegree,
                    euler,
                }),
                pair: pair.map(|(rank, sections, multidegree, kernel_dims, (a, b, c))| PairDoc {
                    rank,
                    sections,
                    multidegree,
                    kernel_dims,
                    assumptions: Assumptions {
                        general_linear_series: a,
                        butler_conjecture: b,
                        components_general_in_moduli: c,
                    },
                }),
                polarization: weights.map(|ws| PolarizationDoc {
                    weights: ws.into_iter().map(|(p, q)| Rational::new(p, q)).collect(),
                }),
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(doc in document()) {
            let text = doc.render();
            let back = InstanceDocument::parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.render(), text);
        }
    }
}
