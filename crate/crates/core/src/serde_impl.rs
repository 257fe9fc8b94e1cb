//! JSON-friendly encodings of spaces and operators.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::Matrix;
use crate::operator::LinearOperator;
use crate::space::{Gauge, NormKind, SpaceSpec};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<Box<SpaceRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    codomain: Option<Box<SpaceRepr>>,
}

impl From<&SpaceSpec> for SpaceRepr {
    fn from(s: &SpaceSpec) -> Self {
        let mut r = SpaceRepr { dim: Some(s.dim()), kind: String::new(), p: None, vertices: None, domain: None, codomain: None };
        match s.kind() {
            NormKind::Lp(p) => {
                r.kind = "lp".into();
                r.p = Some(if p.is_infinite() { Exponent::Text("inf".into()) } else { Exponent::Number(*p) });
            }
            NormKind::Polyhedral { vertices } => {
                r.kind = "polyhedral".into();
                r.vertices = Some(vertices.clone());
            }
            NormKind::Radial(g) => r.kind = g.name().into(),
            NormKind::OperatorNorm { domain, codomain } => {
                r.kind = "opnorm".into();
                r.domain = Some(Box::new(SpaceRepr::from(&**domain)));
                r.codomain = Some(Box::new(SpaceRepr::from(&**codomain)));
            }
        }
        r
    }
}

impl SpaceRepr {
    fn build(self) -> Result<SpaceSpec, String> {
        let space = match self.kind.as_str() {
            "lp" => {
                let dim = self.dim.ok_or("lp space needs \"dim\"")?;
                let p = match self.p.ok_or("lp space needs \"p\"")? {
                    Exponent::Number(p) => p,
                    Exponent::Text(t) if t == "inf" || t == "infinity" => f64::INFINITY,
                    Exponent::Text(t) => return Err(format!("unrecognized exponent {t:?}")),
                };
                SpaceSpec::lp(dim, p).map_err(|e| format!("{e}"))?
            }
            "polyhedral" => {
                SpaceSpec::polyhedral(self.vertices.ok_or("polyhedral space needs \"vertices\"")?)
                    .map_err(|e| format!("{e}"))?
            }
            "opnorm" => {
                let d = self.domain.ok_or("opnorm space needs \"domain\"")?.build()?;
                let c = self.codomain.ok_or("opnorm space needs \"codomain\"")?.build()?;
                SpaceSpec::operator_space(&d, &c).map_err(|e| format!("{e}"))?
            }
            other => match Gauge::from_name(other) {
                Some(g) => SpaceSpec::radial(g),
                None => return Err(format!("unknown space kind {other:?}")),
            },
        };
        if let Some(d) = self.dim {
            if d != space.dim() {
                return Err(format!("declared dim {d} but the space has dim {}", space.dim()));
            }
        }
        Ok(space)
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SpaceRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        SpaceRepr::deserialize(deserializer)?.build().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorRepr {
    matrix: Vec<Vec<f64>>,
    domain: SpaceSpec,
    codomain: SpaceSpec,
}

impl Serialize for LinearOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let m = self.matrix();
        OperatorRepr {
            matrix: (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
            domain: self.domain().clone(),
            codomain: self.codomain().clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(deserializer)?;
        let rows: Vec<&[f64]> = r.matrix.iter().map(|v| v.as_slice()).collect();
        let m = Matrix::from_rows(&rows).map_err(|e| D::Error::custom(format!("{e}")))?;
        LinearOperator::new(m, r.domain, r.codomain).map_err(|e| D::Error::custom(format!("{e}")))
    }
}
