//! Intersection numbers of the collected divisors and the Gram matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::arith::factor::{extend, factor_over, roots_over, KPoly};
use crate::arith::field::Field;
use crate::arith::numfield::{Embedding, NfElem, NumberField};
use crate::arith::series;
use crate::divisors::{preimage_locus, reference_points, same_component, DivisorKind, DivisorRecord, DivisorSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::surface::Poly;

/// Largest number of combinations tried when resolving constrained pairs.
pub const MAX_COMBINATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairValue {
    Exact(i64),
    /// Candidate values, sorted and distinct.
    Constrained(Vec<i64>),
}

impl PairValue {
    pub fn candidates(&self) -> Vec<i64> {
        match self {
            PairValue::Exact(v) => vec![*v],
            PairValue::Constrained(c) => c.clone(),
        }
    }

    pub fn exact(&self) -> Option<i64> {
        match self {
            PairValue::Exact(v) => Some(*v),
            PairValue::Constrained(_) => None,
        }
    }
}

/// Split of `C_a . C_b` between the components over `C_b`, seen from one component over `C_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PairSplit {
    /// Intersection with the given component over `C_b`.
    pub matching: i64,
    /// Intersection with the opposite component.
    pub opposite: i64,
    /// Multiplicity at points where the local comparison was inconclusive.
    pub unresolved: i64,
}

impl PairSplit {
    pub fn total(&self) -> i64 {
        self.matching + self.opposite + self.unresolved
    }

    fn value(&self) -> PairValue {
        if self.unresolved == 0 {
            PairValue::Exact(self.matching)
        } else {
            PairValue::Constrained((self.matching..=self.matching + self.unresolved).collect())
        }
    }
}

pub fn self_intersection(d: &DivisorRecord) -> Result<i64> {
    match d.kind {
        DivisorKind::Hyperplane => Ok(2),
        DivisorKind::SplitComponent => Ok(-2),
        _ => d.self_intersection.ok_or_else(|| Error::MissingSelfIntersection(d.label.clone())),
    }
}

fn declared(a: &DivisorRecord, b: &DivisorRecord) -> Option<i64> {
    let find = |x: &DivisorRecord, y: &DivisorRecord| x.declared.iter().find(|(l, _)| *l == y.label).map(|(_, v)| *v);
    find(a, b).or_else(|| find(b, a))
}

/// `D_a . D_b` for two records over `k`.
pub fn pair_intersection(a: &DivisorRecord, b: &DivisorRecord, k: &NumberField, cap: usize) -> Result<PairValue> {
    use DivisorKind::*;
    match (a.kind, b.kind) {
        (Hyperplane, Hyperplane) => Ok(PairValue::Exact(2)),
        (Hyperplane, SplitComponent) => Ok(PairValue::Exact(b.degree as i64)),
        (SplitComponent, Hyperplane) => Ok(PairValue::Exact(a.degree as i64)),
        (SplitComponent, SplitComponent) => match same_component(a, b, k) {
            Some(true) => Ok(PairValue::Exact(-2)),
            Some(false) => Ok(PairValue::Exact(complement_value(a.degree))),
            None => Ok(split_intersection(a, b, k, cap)?.value()),
        },
        _ => declared(a, b)
            .map(PairValue::Exact)
            .ok_or_else(|| Error::Invalid(format!("no declared intersection number for {} . {}", a.label, b.label))),
    }
}

/// `D^+ . D^-` from `D^+ + D^- = dH`, `H^2 = 2` and `D^2 = -2`.
pub fn complement_value(d: u32) -> i64 {
    let d = d as i64;
    d * d + 2
}

struct Branch {
    param: [KPoly; 3],
    w: KPoly,
}

fn eval_at(p: &Poly, pt: &[NfElem], k: &NumberField) -> NfElem {
    p.eval(pt, k)
}

fn point(param: &[KPoly; 3], t: &NfElem, k: &NumberField) -> [NfElem; 3] {
    core::array::from_fn(|i| param[i].eval(t, k))
}

fn nominal_degree(param: &[KPoly; 3]) -> usize {
    param.iter().map(|p| p.degree().unwrap_or(0)).max().unwrap_or(0)
}

/// Rechart `t = r + 1/u` so that `u = infinity` maps off `avoid`.
fn rotated(rec: &DivisorRecord, avoid: &Poly, k: &NumberField) -> Result<Branch> {
    let param = rec.param.as_ref().ok_or(Error::DegenerateParametrization)?;
    let w = rec.lift.as_ref().ok_or(Error::DegenerateParametrization)?.w(k);
    let n = nominal_degree(param);
    for r in reference_points() {
        let r = k.from_i64(r);
        let p = point(param, &r, k);
        if p.iter().all(|c| k.is_zero(c)) || k.is_zero(&eval_at(avoid, &p, k)) {
            continue;
        }
        return Ok(Branch {
            param: core::array::from_fn(|i| param[i].taylor_shift(&r, k).reverse(n, k)),
            w: w.taylor_shift(&r, k).reverse(3 * n, k),
        });
    }
    Err(Error::SharedComponent)
}

fn map_branch(b: &Branch, e: &Embedding) -> Branch {
    Branch { param: core::array::from_fn(|i| e.apply_poly(&b.param[i])), w: e.apply_poly(&b.w) }
}

/// Intersection of a split component `a` with the components over the curve of `b`.
pub fn split_intersection(a: &DivisorRecord, b: &DivisorRecord, k: &NumberField, cap: usize) -> Result<PairSplit> {
    let (Some(ca), Some(cb)) = (&a.plane_curve, &b.plane_curve) else {
        return Err(Error::DegenerateParametrization);
    };
    let g = cb.eval_upoly(a.param.as_ref().ok_or(Error::DegenerateParametrization)?, k);
    if g.is_zero() {
        return Err(Error::SharedComponent);
    }
    let ba = rotated(a, cb, k)?;
    let bb = rotated(b, ca, k)?;
    let g = cb.eval_upoly(&ba.param, k);
    let expected = nominal_degree(&ba.param) as i64 * cb.total_degree().unwrap_or(0) as i64;
    debug_assert_eq!(g.degree().unwrap_or(0) as i64, expected);
    let mut out = PairSplit::default();
    let (_, facs) = factor_over(k, &g);
    for (q, m) in facs {
        let width = q.degree().unwrap() as i64;
        let m = m as usize;
        let Ok(ext) = extend(k, &q, cap) else {
            out.unresolved += m as i64 * width;
            continue;
        };
        let l = &ext.field;
        let (la, lb) = (map_branch(&ba, &ext.embed), map_branch(&bb, &ext.embed));
        match local_split(&la, &lb, &ext.root, m, l) {
            Some((same, opp)) => {
                out.matching += same as i64 * width;
                out.opposite += opp as i64 * width;
            }
            None => out.unresolved += m as i64 * width,
        }
    }
    if out.total() != expected {
        return Err(Error::InconsistentIntersections);
    }
    Ok(out)
}

/// `(m_same, m_opposite)` at the point of `a` with parameter `t0` and multiplicity `m`.
fn local_split(a: &Branch, b: &Branch, t0: &NfElem, m: usize, l: &NumberField) -> Option<(usize, usize)> {
    let pt = point(&a.param, t0, l);
    let locus = preimage_locus(&b.param, &pt, l);
    if locus.degree() != Some(1) {
        return None;
    }
    let t1 = roots_over(l, &locus).into_iter().next()?;
    let i0 = pt.iter().position(|c| !l.is_zero(c))?;
    let pb = point(&b.param, &t1, l);
    let wa = l.div(&a.w.eval(t0, l), &l.pow(&pt[i0], 3))?;
    let wb = l.div(&b.w.eval(&t1, l), &l.pow(&pb[i0], 3))?;
    if !l.is_zero(&wa) {
        return Some(if wa == wb { (m, 0) } else { (0, m) });
    }
    series_split(a, b, t0, &t1, &pt, i0, m, l)
}

/// Compares the two lifts as power series in a common local parameter of the plane curves.
#[allow(clippy::too_many_arguments)]
fn series_split(a: &Branch, b: &Branch, t0: &NfElem, t1: &NfElem, pt: &[NfElem; 3], i0: usize, m: usize, l: &NumberField) -> Option<(usize, usize)> {
    let n = m + 1;
    let others: Vec<usize> = (0..3).filter(|&i| i != i0).collect();
    let local = |br: &Branch, t: &NfElem| -> ([Vec<NfElem>; 3], Vec<NfElem>) {
        let p: [Vec<NfElem>; 3] = core::array::from_fn(|i| series::truncate(br.param[i].taylor_shift(t, l).coeffs(), n, l));
        (p, series::truncate(br.w.taylor_shift(t, l).coeffs(), n, l))
    };
    let (pa, wa) = local(a, t0);
    let (pb, wb) = local(b, t1);
    // l_j = pt_{i0} x_j - pt_j x_{i0}
    let form = |p: &[Vec<NfElem>; 3], j: usize| series::sub(&series::scale(&p[j], &pt[i0], l), &series::scale(&p[i0], &pt[j], l), n, l);
    let la = [form(&pa, others[0]), form(&pa, others[1])];
    let lb = [form(&pb, others[0]), form(&pb, others[1])];
    let mut choices: Vec<(NfElem, bool)> = (0..8i64).map(|i| (l.from_i64(if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }), false)).collect();
    choices.push((l.zero(), true));
    for (c, swapped) in choices {
        let pick = |f: &[Vec<NfElem>; 2]| -> (Vec<NfElem>, Vec<NfElem>) {
            if swapped {
                (f[1].clone(), f[0].clone())
            } else {
                (series::add(&f[0], &series::scale(&f[1], &c, l), n, l), f[1].clone())
            }
        };
        let (ua, va) = pick(&la);
        let (ub, vb) = pick(&lb);
        if l.is_zero(&ua[1]) || l.is_zero(&ub[1]) {
            continue;
        }
        let chart = |u: &[NfElem], v: &[NfElem], p: &[Vec<NfElem>; 3], w: &[NfElem]| -> Option<(Vec<NfElem>, Vec<NfElem>)> {
            let inv0 = series::inv(&p[i0], n, l)?;
            let inv3 = series::mul(&series::mul(&inv0, &inv0, n, l), &inv0, n, l);
            let uu = series::mul(u, &inv0, n, l);
            let vv = series::mul(v, &inv0, n, l);
            let ww = series::mul(w, &inv3, n, l);
            let rho = series::revert(&uu, n, l)?;
            Some((series::compose(&vv, &rho, n, l), series::compose(&ww, &rho, n, l)))
        };
        let (phi_a, psi_a) = chart(&ua, &va, &pa, &wa)?;
        let (phi_b, psi_b) = chart(&ub, &vb, &pb, &wb)?;
        let contact = series::order(&series::sub(&phi_a, &phi_b, n, l), l)?;
        if contact != m {
            return None;
        }
        let same = series::order(&series::sub(&psi_a, &psi_b, n, l), l).unwrap_or(n).min(m);
        let opp = series::order(&series::add(&psi_a, &psi_b, n, l), l).unwrap_or(n).min(m);
        return (same + opp == m).then_some((same, opp));
    }
    None
}

#[derive(Clone, Debug)]
pub struct IntersectionJob {
    pub labels: Vec<String>,
    pub kinds: Vec<DivisorKind>,
    pub degrees: Vec<u32>,
    /// Symmetric table of pair values, including the diagonal.
    pub entries: Vec<Vec<PairValue>>,
    /// Index pairs of opposite components over one curve.
    pub complements: Vec<(usize, usize)>,
    pub hyperplane: Option<usize>,
    pub resolved: Option<Vec<Vec<i64>>>,
}

/// The value of entry `(i, j)` of the job for `set`.
pub fn pair_entry(set: &DivisorSet, i: usize, j: usize, cap: usize) -> Result<PairValue> {
    let r = &set.records;
    if i == j {
        return self_intersection(&r[i]).map(PairValue::Exact);
    }
    pair_intersection(&r[i], &r[j], set.field(), cap)
}

impl IntersectionJob {
    /// Assembles a job from precomputed upper-triangle values `(i, j, v)` with `i < j`.
    pub fn assemble(set: &DivisorSet, upper: Vec<(usize, usize, PairValue)>) -> Result<IntersectionJob> {
        let n = set.records.len();
        let mut entries = vec![vec![PairValue::Exact(0); n]; n];
        for (i, r) in set.records.iter().enumerate() {
            entries[i][i] = PairValue::Exact(self_intersection(r)?);
        }
        for (i, j, v) in upper {
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
        let k = set.field();
        let mut complements = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if same_component(&set.records[i], &set.records[j], k) == Some(false) {
                    complements.push((i, j));
                }
            }
        }
        Ok(IntersectionJob {
            labels: set.records.iter().map(|r| r.label.clone()).collect(),
            kinds: set.records.iter().map(|r| r.kind).collect(),
            degrees: set.records.iter().map(|r| r.degree).collect(),
            entries,
            complements,
            hyperplane: set.records.iter().position(|r| r.kind == DivisorKind::Hyperplane),
            resolved: None,
        })
    }

    /// Computes every pair sequentially.
    pub fn compute(set: &DivisorSet, cap: usize) -> Result<IntersectionJob> {
        let n = set.records.len();
        let mut upper = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                upper.push((i, j, pair_entry(set, i, j, cap)?));
            }
        }
        Self::assemble(set, upper)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn constrained_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|&(i, j)| self.entries[i][j].exact().is_none()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GramResolution {
    Resolved(Vec<Vec<i64>>),
    /// Every surviving matrix in enumeration order; `truncated` when the
    /// combination count exceeded [`MAX_COMBINATIONS`] and none were tried.
    Ambiguous { candidates: Vec<Vec<Vec<i64>>>, truncated: bool },
}

/// Checks evenness, the complement identities and `rank <= tau`.
pub fn admissible(job: &IntersectionJob, m: &[Vec<i64>], tau: usize) -> bool {
    let n = job.len();
    if (0..n).any(|i| m[i][i] % 2 != 0) {
        return false;
    }
    if let Some(h) = job.hyperplane {
        for &(i, i2) in &job.complements {
            let d = job.degrees[i] as i64;
            if (0..n).any(|j| m[i][j] + m[i2][j] != d * m[h][j]) {
                return false;
            }
        }
    }
    linalg::rank(&linalg::from_i64(m)) <= tau
}

pub fn build_intersection_matrix(job: &mut IntersectionJob, tau: usize) -> Result<GramResolution> {
    let n = job.len();
    let free = job.constrained_pairs();
    let options: Vec<Vec<i64>> = free.iter().map(|&(i, j)| job.entries[i][j].candidates()).collect();
    let mut total: usize = 1;
    for o in &options {
        total = total.saturating_mul(o.len());
    }
    if total > MAX_COMBINATIONS {
        return Ok(GramResolution::Ambiguous { candidates: Vec::new(), truncated: true });
    }
    let base: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| job.entries[i][j].exact().unwrap_or(0)).collect()).collect();
    let mut survivors = Vec::new();
    let mut idx = vec![0usize; free.len()];
    'outer: loop {
        let mut m = base.clone();
        for (s, &(i, j)) in free.iter().enumerate() {
            m[i][j] = options[s][idx[s]];
            m[j][i] = options[s][idx[s]];
        }
        if admissible(job, &m, tau) {
            survivors.push(m);
        }
        // odometer, last position fastest
        let mut p = free.len();
        loop {
            if p == 0 {
                break 'outer;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
    match survivors.len() {
        0 => Err(Error::InconsistentIntersections),
        1 => {
            let m = survivors.pop().unwrap();
            job.resolved = Some(m.clone());
            Ok(GramResolution::Resolved(m))
        }
        _ => Ok(GramResolution::Ambiguous { candidates: survivors, truncated: false }),
    }
}

/// Determinant of the `{H, D}` block for a component of degree `d`.
pub fn hyperplane_block_det(d: i64) -> BigInt {
    BigInt::from(2 * -2 - d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    fn synthetic(entries: Vec<Vec<PairValue>>, degrees: Vec<u32>, complements: Vec<(usize, usize)>) -> IntersectionJob {
        let n = entries.len();
        IntersectionJob {
            labels: (0..n).map(|i| format!("D{i}")).collect(),
            kinds: vec![DivisorKind::UserFormal; n],
            degrees,
            entries,
            complements,
            hyperplane: Some(0),
            resolved: None,
        }
    }

    #[test]
    fn self_intersections() {
        let k = q();
        assert_eq!(self_intersection(&DivisorRecord::hyperplane(&k)), Ok(2));
        let u = DivisorRecord::user_formal(&k, "E", Some(-2), vec![]);
        assert_eq!(self_intersection(&u), Ok(-2));
        let v = DivisorRecord::user_formal(&k, "F", None, vec![]);
        assert_eq!(self_intersection(&v), Err(Error::MissingSelfIntersection("F".into())));
    }

    #[test]
    fn complement_for_lines_is_three() {
        assert_eq!(complement_value(1), 3);
        assert_eq!(complement_value(2), 6);
        assert_eq!(hyperplane_block_det(1), BigInt::from(-5));
        assert_eq!(hyperplane_block_det(2), BigInt::from(-8));
    }

    #[test]
    fn exact_job_assembles_directly() {
        use PairValue::Exact as E;
        let mut job = synthetic(vec![vec![E(2), E(1)], vec![E(1), E(-2)]], vec![1, 1], vec![]);
        assert_eq!(build_intersection_matrix(&mut job, 22), Ok(GramResolution::Resolved(vec![vec![2, 1], vec![1, -2]])));
        assert!(job.resolved.is_some());
    }

    #[test]
    fn rank_bound_resolves_one_pair() {
        use PairValue::{Constrained as C, Exact as E};
        // H, D, E with D.E in {0, 3}; only E = H - D keeps rank 2
        let e = vec![
            vec![E(2), E(1), E(1)],
            vec![E(1), E(-2), C(vec![0, 3])],
            vec![E(1), C(vec![0, 3]), E(-2)],
        ];
        let mut job = synthetic(e, vec![1, 1, 1], vec![]);
        let r = build_intersection_matrix(&mut job, 2).unwrap();
        assert_eq!(r, GramResolution::Resolved(vec![vec![2, 1, 1], vec![1, -2, 3], vec![1, 3, -2]]));
    }

    #[test]
    fn complement_identity_filters_splittings() {
        use PairValue::{Constrained as C, Exact as E};
        // H, D+, D-, L with L.D+ and L.D- each in {0, 1}
        let e = vec![
            vec![E(2), E(1), E(1), E(1)],
            vec![E(1), E(-2), E(3), C(vec![0, 1])],
            vec![E(1), E(3), E(-2), C(vec![0, 1])],
            vec![E(1), C(vec![0, 1]), C(vec![0, 1]), E(-2)],
        ];
        let mut job = synthetic(e, vec![1, 1, 1, 1], vec![(1, 2)]);
        match build_intersection_matrix(&mut job, 22).unwrap() {
            GramResolution::Ambiguous { candidates, .. } => {
                assert_eq!(candidates.len(), 2);
                assert!(candidates.iter().all(|m| m[1][3] + m[2][3] == 1));
            }
            r => panic!("expected two survivors, got {r:?}"),
        }
    }

    #[test]
    fn all_options_survive() {
        use PairValue::{Constrained as C, Exact as E};
        let e = vec![
            vec![E(2), E(1), E(1)],
            vec![E(1), E(-2), C(vec![0, 1])],
            vec![E(1), C(vec![0, 1]), E(-2)],
        ];
        let mut job = synthetic(e, vec![1, 1, 1], vec![]);
        match build_intersection_matrix(&mut job, 22).unwrap() {
            GramResolution::Ambiguous { candidates, truncated } => {
                assert!(!truncated);
                assert_eq!(candidates.len(), 2);
                assert_eq!(candidates[0][1][2], 0);
                assert_eq!(candidates[1][1][2], 1);
            }
            r => panic!("expected ambiguity, got {r:?}"),
        }
    }

    #[test]
    fn no_survivor_is_an_error() {
        use PairValue::Exact as E;
        let mut job = synthetic(vec![vec![E(2), E(1)], vec![E(1), E(-2)]], vec![1, 1], vec![]);
        assert_eq!(build_intersection_matrix(&mut job, 1), Err(Error::InconsistentIntersections));
    }

    #[test]
    fn too_many_combinations() {
        use PairValue::{Constrained as C, Exact as E};
        let n = 6;
        let mut e = vec![vec![E(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                e[i][j] = if i == j { E(-2) } else { C((0..10).collect()) };
            }
        }
        let mut job = synthetic(e, vec![1; n], vec![]);
        assert_eq!(
            build_intersection_matrix(&mut job, 22),
            Ok(GramResolution::Ambiguous { candidates: vec![], truncated: true })
        );
    }
}
