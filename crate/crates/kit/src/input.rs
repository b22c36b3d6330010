//! Input documents: the surface description and the optional list of
//! extra divisors supplied by the user.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use picard_core::arith::numfield::{Embedding, NumberField};
use picard_core::arith::Field;
use picard_core::divisors::{known_conic, user_curve, DivisorRecord, FoundPair};
use picard_core::surface::{validate_surface, DoubleSexticSurface};
use serde::{Deserialize, Serialize};

use crate::codec::{decode_elem, decode_poly, parse_minpoly, parse_tpoly, AutomorphismData, Result};
use crate::KitError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDoc {
    /// Minimal polynomial of `alpha` over Q.
    pub minpoly: String,
}

/// `w^2 = sextic` over the field `Q(alpha)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDoc>,
    pub sextic: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub automorphisms: Vec<AutomorphismData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
}

impl SurfaceDoc {
    pub fn over_q(sextic: &str) -> Self {
        SurfaceDoc { field: None, sextic: sextic.to_string(), automorphisms: Vec::new(), time_limit_secs: None }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| KitError::Io(path.display().to_string(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| KitError::Format(format!("{}: {e}", path.display())))
    }

    pub fn base_field(&self) -> Result<NumberField> {
        match &self.field {
            None => Ok(NumberField::rationals()),
            Some(f) => parse_minpoly(&f.minpoly),
        }
    }

    /// Parses and validates the surface; fails on a singular branch curve or
    /// a map that does not preserve it.
    pub fn surface(&self) -> Result<DoubleSexticSurface> {
        let k = self.base_field()?;
        let f = decode_poly(&k, &self.sextic)?;
        let autos = self.automorphisms.iter().map(|a| a.decode(&k)).collect::<Result<Vec<_>>>()?;
        let budget = match self.time_limit_secs {
            Some(s) if !(s.is_finite() && s >= 0.0) => return Err(KitError::Format(format!("time_limit_secs must be nonnegative, got {s}"))),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(validate_surface(k, f, autos, budget)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDoc {
    /// Minimal polynomial over Q of the generator `alpha` of the field of the curve.
    pub minpoly: String,
    /// Image of the base generator in that field; omit over Q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_image: Option<String>,
}

/// One user-supplied divisor. A plane curve with a parametrization is
/// checked for splitting; a conic alone is parametrized automatically; a
/// record without a curve is a formal class with declared intersections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraDivisor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_curve: Option<String>,
    /// `[X(t), Y(t), Z(t)]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametrization: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_extension: Option<ExtensionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub intersections: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum ExtraFile {
    List(Vec<ExtraDivisor>),
    Wrapped { divisors: Vec<ExtraDivisor> },
}

pub fn load_extra(path: &Path) -> Result<Vec<ExtraDivisor>> {
    let text = std::fs::read_to_string(path).map_err(|e| KitError::Io(path.display().to_string(), e.to_string()))?;
    parse_extra(&text).map_err(|e| KitError::Format(format!("{}: {e}", path.display())))
}

pub fn parse_extra(text: &str) -> std::result::Result<Vec<ExtraDivisor>, serde_json::Error> {
    Ok(match serde_json::from_str(text)? {
        ExtraFile::List(v) => v,
        ExtraFile::Wrapped { divisors } => divisors,
    })
}

/// What a user divisor turns into.
pub enum Accepted {
    Split(FoundPair),
    Formal(DivisorRecord),
}

impl ExtraDivisor {
    pub fn label_or(&self, i: usize) -> String {
        self.label.clone().unwrap_or_else(|| format!("U{}", i + 1))
    }

    fn curve_field(&self, x: &DoubleSexticSurface) -> Result<Embedding> {
        let Some(ext) = &self.field_extension else {
            return Ok(Embedding::identity(&x.field));
        };
        let l = parse_minpoly(&ext.minpoly)?;
        let image = match &ext.base_image {
            Some(s) => decode_elem(&l, s)?,
            None if x.field.is_rationals() => l.zero(),
            None => return Err(KitError::Format("field_extension.base_image is required over a nontrivial base field".into())),
        };
        let e = Embedding { src: x.field.clone(), dst: l, image };
        if !e.is_valid() {
            return Err(KitError::Format("field_extension.base_image is not a root of the base minimal polynomial".into()));
        }
        Ok(e)
    }

    /// Builds the divisor; mathematical rejections come back as `Err` with the reason.
    pub fn accept(&self, x: &DoubleSexticSurface, index: usize, cap: usize) -> Result<Accepted> {
        let label = self.label_or(index);
        let Some(curve) = &self.plane_curve else {
            let declared = self.intersections.iter().map(|(k, v)| (k.clone(), *v)).collect();
            return Ok(Accepted::Formal(DivisorRecord::user_formal(&x.field, &label, self.self_intersection, declared)));
        };
        let emb = self.curve_field(x)?;
        let l = &emb.dst;
        let c = decode_poly(l, curve)?;
        match &self.parametrization {
            Some(p) => {
                let param = [parse_tpoly(l, &p[0])?, parse_tpoly(l, &p[1])?, parse_tpoly(l, &p[2])?];
                Ok(Accepted::Split(user_curve(x, &emb, &c, &param, &label, cap)?))
            }
            None if self.field_extension.is_none() && c.is_homogeneous_of(2) => match known_conic(x, &c, &label, cap)? {
                Some(p) => Ok(Accepted::Split(p)),
                None => Err(KitError::Rejected(format!("{label}: the conic is not sixtangent, so its pullback is irreducible"))),
            },
            None => Err(KitError::Rejected(format!("{label}: a parametrization is required for curves other than conics over the base field"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extra_file_shapes() {
        let a = parse_extra(r#"[{"label": "C", "plane_curve": "x^2 + y*z"}]"#).unwrap();
        let b = parse_extra(r#"{"divisors": [{"label": "C", "plane_curve": "x^2 + y*z"}]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].label_or(0), "C");
        let c = parse_extra(r#"[{"self_intersection": -2, "intersections": {"H": 1}}]"#).unwrap();
        assert_eq!(c[0].label_or(3), "U4");
        assert!(parse_extra(r#"{"curves": []}"#).is_err());
    }

    #[test]
    fn accept_sorts_divisors() {
        let x = SurfaceDoc::over_q("(x^3+y^3-z^3+x*y*z)^2 + (x^2+y*z)*(x^4+2*y^4+3*z^4-x*y*z^2)").surface().unwrap();
        let extra = parse_extra(
            r#"[
                {"label": "C", "plane_curve": "x^2 + y*z"},
                {"label": "E", "self_intersection": -2, "intersections": {"H": 0}},
                {"label": "Q", "plane_curve": "x^2 + y^2 - z^2"},
                {"label": "N", "plane_curve": "x*y*z - z^3"}
            ]"#,
        )
        .unwrap();
        assert!(matches!(extra[0].accept(&x, 0, 16), Ok(Accepted::Split(_))));
        assert!(matches!(extra[1].accept(&x, 1, 16), Ok(Accepted::Formal(_))));
        assert!(matches!(extra[2].accept(&x, 2, 16), Err(KitError::Rejected(_))));
        assert!(matches!(extra[3].accept(&x, 3, 16), Err(KitError::Rejected(_))));
    }

    #[test]
    fn surface_document_defaults() {
        let d: SurfaceDoc = serde_json::from_str(r#"{"sextic": "x^6+y^6+z^6"}"#).unwrap();
        assert_eq!(d, SurfaceDoc::over_q("x^6+y^6+z^6"));
        assert!(d.base_field().unwrap().is_rationals());
        assert!(SurfaceDoc::over_q("x^6+y^5").surface().is_err());
    }
}
