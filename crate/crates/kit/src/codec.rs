//! Text encodings of exact objects: number fields, elements, polynomials,
//! divisor records and divisor sets. Every encoding is canonical, so
//! `decode(encode(x)) == x` and `encode(decode(s)) == s` for encoded `s`.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use picard_core::arith::factor::KPoly;
use picard_core::arith::mpoly::Vars;
use picard_core::arith::numfield::{qpoly_to_string, Embedding, NfElem, NumberField, TowerStep};
use picard_core::arith::parse::{elem_to_string, mpoly_to_string, parse_elem, parse_mpoly, parse_qpoly};
use picard_core::arith::upoly::UPoly;
use picard_core::arith::Field;
use picard_core::divisors::{DivisorKind, DivisorRecord, DivisorSet, LiftBranch};
use picard_core::surface::{Poly, SurfaceAutomorphism};
use serde::{Deserialize, Serialize};

use crate::KitError;

pub type Result<T> = std::result::Result<T, KitError>;

pub fn parse_minpoly(s: &str) -> Result<NumberField> {
    let p = parse_qpoly(s, "alpha").or_else(|_| parse_qpoly(s, "t"))?;
    Ok(NumberField::new(&p)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerStepData {
    pub relative: String,
    pub shift: i64,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldData {
    /// Minimal polynomial of the generator, written in `alpha`.
    pub minpoly: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower: Vec<TowerStepData>,
}

impl FieldData {
    pub fn encode(k: &NumberField) -> Self {
        FieldData {
            minpoly: qpoly_to_string(k.minpoly(), "alpha"),
            tower: k
                .tower_trace()
                .iter()
                .map(|t| TowerStepData { relative: t.relative.clone(), shift: t.shift, degree: t.degree })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<NumberField> {
        let p = parse_qpoly(&self.minpoly, "alpha")?;
        let trace = self.tower.iter().map(|t| TowerStep { relative: t.relative.clone(), shift: t.shift, degree: t.degree }).collect();
        Ok(NumberField::with_trace(&p, trace)?)
    }
}

pub fn elem(k: &NumberField, a: &NfElem) -> String {
    elem_to_string(k, a)
}

pub fn decode_elem(k: &NumberField, s: &str) -> Result<NfElem> {
    Ok(parse_elem(s, k)?)
}

/// Coefficients from the constant term up.
pub fn kpoly(k: &NumberField, p: &KPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| elem(k, c)).collect()
}

pub fn decode_kpoly(k: &NumberField, c: &[String]) -> Result<KPoly> {
    let cs = c.iter().map(|s| decode_elem(k, s)).collect::<Result<Vec<_>>>()?;
    Ok(UPoly::from_coeffs(k, cs))
}

pub fn poly(k: &NumberField, p: &Poly) -> String {
    mpoly_to_string(p, k)
}

pub fn decode_poly(k: &NumberField, s: &str) -> Result<Poly> {
    Ok(parse_mpoly(s, &Vars::xyz(), k)?)
}

/// Polynomial in `t` over `k`, as a coefficient list.
pub fn parse_tpoly(k: &NumberField, s: &str) -> Result<KPoly> {
    let vars = Vars::new(&["t"]);
    let p = parse_mpoly(s, &vars, k)?;
    let n = p.degree_in(0).map_or(0, |d| d as usize + 1);
    let mut c = vec![k.zero(); n];
    for (m, e) in p.terms() {
        c[m[0] as usize] = e.clone();
    }
    Ok(UPoly::from_coeffs(k, c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingData {
    pub src: FieldData,
    pub dst: FieldData,
    /// Image of the generator of `src`, in `dst`.
    pub image: String,
}

impl EmbeddingData {
    pub fn encode(e: &Embedding) -> Self {
        EmbeddingData { src: FieldData::encode(&e.src), dst: FieldData::encode(&e.dst), image: elem(&e.dst, &e.image) }
    }

    pub fn decode(&self) -> Result<Embedding> {
        let src = self.src.decode()?;
        let dst = self.dst.decode()?;
        let image = decode_elem(&dst, &self.image)?;
        let e = Embedding { src, dst, image };
        if !e.is_valid() {
            return Err(KitError::Format("embedding image does not satisfy the source minimal polynomial".into()));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftData {
    pub c: String,
    pub sqrt_c: String,
    pub s: Vec<String>,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindData {
    Hyperplane,
    SplitComponent,
    DelPezzoPullback,
    UserFormal,
}

impl From<DivisorKind> for KindData {
    fn from(k: DivisorKind) -> Self {
        match k {
            DivisorKind::Hyperplane => KindData::Hyperplane,
            DivisorKind::SplitComponent => KindData::SplitComponent,
            DivisorKind::DelPezzoPullback => KindData::DelPezzoPullback,
            DivisorKind::UserFormal => KindData::UserFormal,
        }
    }
}

impl From<KindData> for DivisorKind {
    fn from(k: KindData) -> Self {
        match k {
            KindData::Hyperplane => DivisorKind::Hyperplane,
            KindData::SplitComponent => DivisorKind::SplitComponent,
            KindData::DelPezzoPullback => DivisorKind::DelPezzoPullback,
            KindData::UserFormal => DivisorKind::UserFormal,
        }
    }
}

/// A record over the field `K` of the enclosing set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordData {
    pub kind: KindData,
    pub label: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_curve: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<[Vec<String>; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftData>,
    pub field_of_definition: FieldData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersection: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declared: Vec<(String, i64)>,
}

impl RecordData {
    pub fn encode(r: &DivisorRecord, k: &NumberField) -> Self {
        RecordData {
            kind: r.kind.into(),
            label: r.label.clone(),
            degree: r.degree,
            plane_curve: r.plane_curve.as_ref().map(|p| poly(k, p)),
            param: r.param.as_ref().map(|p| [kpoly(k, &p[0]), kpoly(k, &p[1]), kpoly(k, &p[2])]),
            lift: r.lift.as_ref().map(|l| LiftData { c: elem(k, &l.c), sqrt_c: elem(k, &l.sqrt_c), s: kpoly(k, &l.s), sign: l.sign }),
            field_of_definition: FieldData::encode(&r.field_of_definition),
            self_intersection: r.self_intersection,
            declared: r.declared.clone(),
        }
    }

    pub fn decode(&self, k: &NumberField) -> Result<DivisorRecord> {
        let param = match &self.param {
            Some(p) => Some([decode_kpoly(k, &p[0])?, decode_kpoly(k, &p[1])?, decode_kpoly(k, &p[2])?]),
            None => None,
        };
        let lift = match &self.lift {
            Some(l) => Some(LiftBranch {
                c: decode_elem(k, &l.c)?,
                sqrt_c: decode_elem(k, &l.sqrt_c)?,
                s: decode_kpoly(k, &l.s)?,
                sign: l.sign,
            }),
            None => None,
        };
        Ok(DivisorRecord {
            kind: self.kind.into(),
            label: self.label.clone(),
            degree: self.degree,
            plane_curve: self.plane_curve.as_deref().map(|s| decode_poly(k, s)).transpose()?,
            param,
            lift,
            field_of_definition: self.field_of_definition.decode()?,
            self_intersection: self.self_intersection,
            declared: self.declared.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorSetData {
    pub embedding: EmbeddingData,
    pub records: Vec<RecordData>,
    pub g_closed: bool,
    pub galois_closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<String>,
}

impl DivisorSetData {
    pub fn encode(s: &DivisorSet) -> Self {
        let k = s.field();
        DivisorSetData {
            embedding: EmbeddingData::encode(&s.embedding),
            records: s.records.iter().map(|r| RecordData::encode(r, k)).collect(),
            g_closed: s.g_closed,
            galois_closed: s.galois_closed,
            partial: s.partial.clone(),
        }
    }

    pub fn decode(&self) -> Result<DivisorSet> {
        let embedding = self.embedding.decode()?;
        let k = embedding.dst.clone();
        let records = self.records.iter().map(|r| r.decode(&k)).collect::<Result<Vec<_>>>()?;
        Ok(DivisorSet {
            base: embedding.src.clone(),
            embedding,
            records,
            g_closed: self.g_closed,
            galois_closed: self.galois_closed,
            partial: self.partial.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismData {
    /// Rows of the linear part, entries in the grammar of the base field.
    pub matrix: [[String; 3]; 3],
    pub lambda: String,
    pub sign: i8,
}

impl AutomorphismData {
    pub fn encode(a: &SurfaceAutomorphism, k: &NumberField) -> Self {
        AutomorphismData {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| elem(k, &a.matrix[i][j]))),
            lambda: elem(k, &a.lambda),
            sign: a.sign,
        }
    }

    pub fn decode(&self, k: &NumberField) -> Result<SurfaceAutomorphism> {
        let mut rows = Vec::new();
        for r in &self.matrix {
            rows.push(r.iter().map(|s| decode_elem(k, s)).collect::<Result<Vec<_>>>()?);
        }
        let matrix: [[NfElem; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone()));
        if self.sign != 1 && self.sign != -1 {
            return Err(KitError::Format(format!("automorphism sign must be 1 or -1, got {}", self.sign)));
        }
        Ok(SurfaceAutomorphism { matrix, lambda: decode_elem(k, &self.lambda)?, sign: self.sign })
    }
}

pub fn bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|e| KitError::Format(format!("bad integer {s:?}: {e}")))
}

pub fn biguint(s: &str) -> Result<BigUint> {
    BigUint::from_str(s).map_err(|e| KitError::Format(format!("bad integer {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use picard_core::arith::numfield::NumberField;

    #[test]
    fn field_round_trip() {
        let k = parse_minpoly("alpha^3 - 2").unwrap();
        let d = FieldData::encode(&k);
        assert_eq!(d.minpoly, qpoly_to_string(k.minpoly(), "alpha"));
        assert_eq!(d.decode().unwrap(), k);
        let a = k.add(&k.generator(), &k.from_i64(3));
        let a2 = k.mul(&a, &a);
        let s = elem(&k, &a2);
        assert_eq!(decode_elem(&k, &s).unwrap(), a2);
    }

    #[test]
    fn poly_round_trip() {
        let k = parse_minpoly("alpha^2 + 1").unwrap();
        let p = decode_poly(&k, "x^6 + (alpha + 1/2)*y^3*z^3 - 3*alpha*z^6").unwrap();
        let s = poly(&k, &p);
        assert_eq!(decode_poly(&k, &s).unwrap(), p);
        assert_eq!(poly(&k, &decode_poly(&k, &s).unwrap()), s);
    }

    #[test]
    fn tpoly_parse() {
        let q = NumberField::rationals();
        let p = parse_tpoly(&q, "2*t^2 - 1").unwrap();
        assert_eq!(kpoly(&q, &p), vec!["-1", "0", "2"]);
        assert_eq!(decode_kpoly(&q, &kpoly(&q, &p)).unwrap(), p);
    }

    proptest::proptest! {
        #[test]
        fn elements_and_sextics_round_trip(c in proptest::collection::vec(-40i64..=40, 28), d in 1i64..=9) {
            let k = parse_minpoly("alpha^3 - alpha - 1").unwrap();
            let a = &k.generator();
            let e = |i: usize| {
                let x = k.add(&k.from_i64(c[i]), &k.mul(&k.from_i64(c[i + 1]), a));
                k.div(&x, &k.from_i64(d)).unwrap()
            };
            let x = e(0);
            proptest::prop_assert_eq!(decode_elem(&k, &elem(&k, &x)).unwrap(), x);
            let terms: Vec<String> = (0..7)
                .flat_map(|i| (0..=6 - i).map(move |j| (i, j)))
                .take(14)
                .enumerate()
                .map(|(n, (i, j))| format!("({})*x^{i}*y^{j}*z^{}", elem(&k, &e(2 * n)), 6 - i - j))
                .collect();
            let f = decode_poly(&k, &terms.join(" + ")).unwrap();
            proptest::prop_assert_eq!(decode_poly(&k, &poly(&k, &f)).unwrap(), f);
        }
    }
}
