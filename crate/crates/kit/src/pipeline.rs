//! The driver: an upper bound `tau` for the Picard number, divisor searches
//! in order of cost, the intersection matrix of what was found, and the
//! saturation test once the rank reaches `tau`. The clock is read between
//! operations only.

use std::time::Instant;

use picard_core::arith::numfield::NumberField;
use picard_core::arith::factor::relative_automorphisms;
use picard_core::budget::StepBudget;
use picard_core::divisors::{
    detect_del_pezzo, find_sixtangent_conics, find_tritangent_lines, propagate, DivisorKind, DivisorRecord, DivisorSet, FoundPair,
};
use picard_core::intersect::{build_intersection_matrix, pair_entry, self_intersection, GramResolution, IntersectionJob, PairValue};
use picard_core::lattice::{decompose_named, rank_and_relations, saturation_verdict, GramLattice, SaturationReport, Verdict};
use picard_core::linalg::{self, IntMatrix};
use picard_core::pointcount::{combine_bounds, frobenius_candidates, max_feasible_n, reduce_surface, FrobeniusData, UpperBound};
use picard_core::surface::{DoubleSexticSurface, SurfaceAutomorphism};
use rayon::prelude::*;

use crate::codec::{self, DivisorSetData, Result};
use crate::count::count_points_parallel;
use crate::input::Accepted;
use crate::report::{named_parts, Ambiguity, DivisorSummary, ProvenanceData, ReasonKind, Report, ReportReason, SaturationData};
use crate::session::{CandidateData, DelPezzoData, PairData, PrimeCounts, Session, StepTwo};
use crate::KitError;

/// `(M, verdict)` together with the full report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub gram: Vec<Vec<i64>>,
    pub verdict: bool,
    pub report: Report,
}

impl Outcome {
    fn of(report: Report) -> Self {
        Outcome { gram: report.gram_matrix.clone(), verdict: report.verdict, report }
    }
}

struct Clock {
    start: Instant,
    before: f64,
    limit: Option<f64>,
}

impl Clock {
    fn elapsed(&self) -> f64 {
        self.before + self.start.elapsed().as_secs_f64()
    }

    fn expired(&self) -> bool {
        self.limit.is_some_and(|l| self.elapsed() >= l)
    }
}

type Checkpoint<'a> = &'a mut dyn FnMut(&Session) -> Result<()>;

pub fn run_pipeline(s: &mut Session) -> Result<Outcome> {
    run_pipeline_with(s, &mut |_| Ok(()))
}

/// Runs to completion, calling `ckpt` after every operation that changed the session.
pub fn run_pipeline_with(s: &mut Session, ckpt: Checkpoint<'_>) -> Result<Outcome> {
    if let Some(r) = &s.outcome {
        return Ok(Outcome::of(r.clone()));
    }
    let x = s.surface.surface()?;
    let clock = Clock { start: Instant::now(), before: s.elapsed_secs, limit: s.options.time_limit_secs.or(s.surface.time_limit_secs) };
    let mut set = match &s.step_two {
        Some(t) => t.set.decode()?,
        None => {
            let set = DivisorSet::new(&x.field);
            s.step_two = Some(StepTwo {
                set: DivisorSetData::encode(&set),
                lines_done: false,
                lines_completed: false,
                del_pezzo_done: false,
                del_pezzo: None,
                user_done: s.extra.is_empty(),
                conic_budget: s.options.conic_steps,
                conics_completed: false,
                conics_given_up: false,
                notes: Vec::new(),
                rejected: Vec::new(),
            });
            s.log("divisors", "start from {H}");
            set
        }
    };
    step_one(s, &x, &clock, ckpt)?;
    let tau = s.step_one.tau.expect("step one sets tau");
    loop {
        let cur = step_three(s, &set, tau)?;
        s.elapsed_secs = clock.elapsed();
        ckpt(s)?;
        let mut reasons = Vec::new();
        match &cur.lattice {
            Err(e) => {
                reasons.push(reason(ReasonKind::Inconsistent, e.clone()));
                return finish(s, &set, &cur, tau, None, reasons, false, &clock, ckpt);
            }
            Ok(l) if l.rank() > tau as usize => {
                reasons.push(reason(ReasonKind::Inconsistent, format!("rank {} exceeds the upper bound {tau}", l.rank())));
                return finish(s, &set, &cur, tau, None, reasons, false, &clock, ckpt);
            }
            Ok(l) if l.rank() == tau as usize => {
                let isos = isometries(&cur.sub, &x, l);
                s.log("saturation", format!("rank {} reached; {} isometries", l.rank(), isos.len()));
                let rep = saturation_verdict(l, tau as usize, &isos)?;
                match rep.verdict {
                    Verdict::Saturated => reasons.push(reason(ReasonKind::Saturated, join(&rep))),
                    Verdict::NeedsMoreDivisors => reasons.push(reason(ReasonKind::NeedsMoreDivisors, join(&rep))),
                    Verdict::Inconclusive => reasons.push(reason(ReasonKind::LambdaPTooLarge, join(&rep))),
                }
                return finish(s, &set, &cur, tau, Some(&rep), reasons, false, &clock, ckpt);
            }
            Ok(_) => {}
        }
        if clock.expired() {
            reasons.push(reason(ReasonKind::Time, format!("time budget spent after {:.3} s", clock.elapsed())));
            return finish(s, &set, &cur, tau, None, reasons, true, &clock, ckpt);
        }
        if !search_step(s, &x, &mut set)? {
            let t = s.step_two.as_ref().unwrap();
            let r = cur.lattice.as_ref().map_or(1, |l| l.rank());
            if t.lines_completed && t.conics_completed {
                reasons.push(reason(
                    ReasonKind::NonSharpTauSuspected,
                    format!("every search finished with rank {r} below tau = {tau}"),
                ));
            } else {
                reasons.push(reason(ReasonKind::SearchInconclusive, t.notes.join("; ")));
            }
            reasons.push(reason(
                ReasonKind::CurveClassesInsufficient,
                String::from("only classes of rational curves over lines and conics were searched"),
            ));
            return finish(s, &set, &cur, tau, None, reasons, false, &clock, ckpt);
        }
        s.elapsed_secs = clock.elapsed();
        ckpt(s)?;
    }
}

fn reason(code: ReasonKind, text: impl Into<String>) -> ReportReason {
    ReportReason { code, text: text.into() }
}

fn join(r: &SaturationReport) -> String {
    r.reasons.iter().map(|x| x.text.as_str()).collect::<Vec<_>>().join("; ")
}

fn step_one(s: &mut Session, x: &DoubleSexticSurface, clock: &Clock, ckpt: Checkpoint<'_>) -> Result<()> {
    if s.step_one.done {
        return Ok(());
    }
    let set_bound = |s: &mut Session, ub: UpperBound, done: bool| {
        s.step_one.tau = Some(ub.value);
        s.step_one.provenance = Some(ProvenanceData::from(&ub.provenance));
        s.step_one.done = done;
        s.log("bound", format!("tau = {} ({:?})", ub.value, ub.provenance));
    };
    if let Some(t) = s.options.tau_override {
        set_bound(s, UpperBound::user_override(t)?, true);
        return Ok(());
    }
    if !x.field.is_rationals() {
        s.log("bound", "point counting needs the base field Q");
        set_bound(s, UpperBound::trivial(), true);
        return Ok(());
    }
    let (max_n, max_points) = (s.options.max_n, s.options.max_points);
    let mut interrupted = false;
    for p in s.options.primes.clone() {
        let i = match s.step_one.primes.iter().position(|c| c.p == p) {
            Some(i) => i,
            None => {
                s.step_one.primes.push(PrimeCounts { p, counts: Vec::new(), finished: false, candidates: Vec::new(), note: None });
                s.step_one.primes.len() - 1
            }
        };
        if s.step_one.primes[i].finished {
            continue;
        }
        let fp = match reduce_surface(x, p) {
            Ok(f) => f,
            Err(e) => {
                s.step_one.primes[i].finished = true;
                s.step_one.primes[i].note = Some(e.to_string());
                continue;
            }
        };
        let target = max_n.min(max_feasible_n(p, max_points)) as usize;
        while s.step_one.primes[i].counts.len() < target {
            if clock.expired() {
                interrupted = true;
                break;
            }
            let n = s.step_one.primes[i].counts.len() as u32 + 1;
            let c = count_points_parallel(&fp, p, n, max_points)?;
            s.step_one.primes[i].counts.push(c);
            s.log("count", format!("#X(F_{p}^{n}) = {c}"));
            s.elapsed_secs = clock.elapsed();
            ckpt(s)?;
        }
        if interrupted {
            break;
        }
        let pc = &mut s.step_one.primes[i];
        pc.finished = true;
        match frobenius_candidates(&pc.counts, p) {
            Ok(cs) => {
                pc.candidates = cs
                    .iter()
                    .map(|c| CandidateData { sign: c.sign, coeffs: c.coeffs.iter().map(|a| a.to_string()).collect(), tate_count: c.tate_count })
                    .collect()
            }
            Err(e) => pc.note = Some(e.to_string()),
        }
    }
    let mut data = Vec::new();
    for pc in &s.step_one.primes {
        if !s.options.primes.contains(&pc.p) || !pc.finished {
            continue;
        }
        let mut candidates = Vec::new();
        for c in &pc.candidates {
            let coeffs = c.coeffs.iter().map(|a| codec::bigint(a)).collect::<Result<Vec<_>>>()?;
            candidates.push(picard_core::pointcount::FrobeniusCandidate { sign: c.sign, coeffs, tate_count: c.tate_count });
        }
        data.push(FrobeniusData { p: pc.p, counts: pc.counts.clone(), candidates });
    }
    set_bound(s, combine_bounds(&data, None), !interrupted);
    Ok(())
}

/// Labels are the keys of the pair cache, so later duplicates get primes appended.
fn make_labels_unique(set: &mut DivisorSet) {
    for i in 0..set.records.len() {
        while set.records[..i].iter().any(|r| r.label == set.records[i].label) {
            set.records[i].label.push('\'');
        }
    }
}

fn absorb_found(set: &mut DivisorSet, found: &[FoundPair], cap: usize, notes: &mut Vec<String>) -> usize {
    let mut added = 0;
    for f in found {
        match set.absorb(f, cap) {
            Ok(n) => added += n,
            Err(e) => notes.push(format!("{}: {e}", f.records[0].label)),
        }
    }
    make_labels_unique(set);
    added
}

/// One divisor search; `false` once every search is exhausted.
fn search_step(s: &mut Session, x: &DoubleSexticSurface, set: &mut DivisorSet) -> Result<bool> {
    let cap = s.options.field_cap;
    let mut t = s.step_two.take().unwrap();
    let mut added = 0;
    let msg;
    if !t.lines_done {
        let out = find_tritangent_lines(x, cap);
        added = absorb_found(set, &out.found, cap, &mut t.notes);
        t.notes.extend(out.notes);
        t.lines_done = true;
        t.lines_completed = out.completed;
        msg = ("lines", format!("{} tritangent lines, {added} new classes", out.found.len()));
    } else if !t.del_pezzo_done {
        t.del_pezzo_done = true;
        t.del_pezzo = detect_del_pezzo(&x.f).map(|c| DelPezzoData { variables: c.variables, lower_bound: c.lower_bound });
        msg = ("del_pezzo", format!("{:?}", t.del_pezzo));
    } else if !t.user_done {
        for (i, e) in s.extra.iter().enumerate() {
            match e.accept(x, i, cap) {
                Ok(Accepted::Split(p)) => added += absorb_found(set, &[p], cap, &mut t.notes),
                Ok(Accepted::Formal(r)) => {
                    if set.insert(r) {
                        added += 1;
                    }
                    make_labels_unique(set);
                }
                Err(err @ (KitError::Format(_) | KitError::Core(picard_core::Error::Parse { .. }))) => {
                    s.step_two = Some(t);
                    return Err(err);
                }
                Err(err) => t.rejected.push(err.to_string()),
            }
        }
        t.user_done = true;
        msg = ("user", format!("{added} new classes, {} rejected", t.rejected.len()));
    } else if !t.conics_completed && !t.conics_given_up {
        let mut budget = StepBudget::new(t.conic_budget);
        let out = find_sixtangent_conics(x, &mut budget, cap);
        added = absorb_found(set, &out.found, cap, &mut t.notes);
        let steps = t.conic_budget;
        if out.completed {
            t.conics_completed = true;
        } else if t.conic_budget.saturating_mul(2) > s.options.conic_max_steps {
            t.conics_given_up = true;
            t.notes.push(format!("conic search did not finish within {steps} steps"));
        } else {
            t.conic_budget *= 2;
        }
        msg = ("conics", format!("{} conics with {steps} steps, completed = {}, {added} new classes", out.found.len(), out.completed));
    } else {
        s.step_two = Some(t);
        return Ok(false);
    }
    if added > 0 || !set.g_closed || !set.galois_closed {
        *set = propagate(set, &x.automorphisms, cap);
        make_labels_unique(set);
        if let Some(p) = &set.partial {
            t.notes.push(format!("orbit closure incomplete: {p}"));
        }
    }
    t.set = DivisorSetData::encode(set);
    s.step_two = Some(t);
    s.log(msg.0, format!("{}; {} classes", msg.1, set.records.len()));
    Ok(true)
}

struct Current {
    /// The classes entering the Gram matrix.
    sub: DivisorSet,
    gram: Vec<Vec<i64>>,
    lattice: std::result::Result<GramLattice, String>,
    ambiguity: Option<Ambiguity>,
}

fn to_data(v: std::result::Result<PairValue, picard_core::Error>) -> PairData {
    match v {
        Ok(PairValue::Exact(value)) => PairData::Exact { value },
        Ok(PairValue::Constrained(candidates)) => PairData::Constrained { candidates },
        Err(e) => PairData::Failed { reason: e.to_string() },
    }
}

fn step_three(s: &mut Session, set: &DivisorSet, tau: u32) -> Result<Current> {
    let n = set.records.len();
    let cap = s.options.field_cap;
    let labels: Vec<&str> = set.records.iter().map(|r| r.label.as_str()).collect();
    let missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| s.step_three.lookup(labels[i], labels[j]).is_none())
        .collect();
    if !missing.is_empty() {
        let fresh: Vec<PairData> = missing.par_iter().map(|&(i, j)| to_data(pair_entry(set, i, j, cap))).collect();
        for (&(i, j), v) in missing.iter().zip(fresh) {
            s.step_three.store(labels[i], labels[j], v);
        }
        s.log("intersections", format!("{} new pairs", missing.len()));
    }
    let value = |i: usize, j: usize| -> PairData {
        if i == j {
            return match self_intersection(&set.records[i]) {
                Ok(value) => PairData::Exact { value },
                Err(e) => PairData::Failed { reason: e.to_string() },
            };
        }
        s.step_three.lookup(labels[i], labels[j]).cloned().unwrap()
    };
    let table: Vec<Vec<PairData>> = (0..n).map(|i| (0..n).map(|j| value(i, j)).collect()).collect();
    let open: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|&(i, j)| !matches!(table[i][j], PairData::Exact { .. })).collect();
    let mut keep: Vec<usize> = (0..n).collect();
    let mut ambiguity = None;
    let mut resolved: Option<Vec<Vec<i64>>> = None;
    if !open.is_empty() {
        let failed = open.iter().any(|&(i, j)| matches!(table[i][j], PairData::Failed { .. }));
        let mut alternatives = None;
        if !failed {
            let upper = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let v = match &table[i][j] {
                        PairData::Exact { value } => PairValue::Exact(*value),
                        PairData::Constrained { candidates } => PairValue::Constrained(candidates.clone()),
                        PairData::Failed { .. } => unreachable!(),
                    };
                    (i, j, v)
                })
                .collect();
            let mut job = IntersectionJob::assemble(set, upper)?;
            match build_intersection_matrix(&mut job, tau as usize) {
                Ok(GramResolution::Resolved(m)) => resolved = Some(m),
                Ok(GramResolution::Ambiguous { candidates, truncated }) => alternatives = (!truncated).then_some(candidates.len()),
                Err(_) => alternatives = Some(0),
            }
        }
        if resolved.is_none() {
            // drop the class in the most undecided pairs until every entry is exact
            let mut dropped = Vec::new();
            loop {
                let bad: Vec<&(usize, usize)> = open.iter().filter(|(i, j)| keep.contains(i) && keep.contains(j)).collect();
                if bad.is_empty() {
                    break;
                }
                let score = |k: usize| bad.iter().filter(|(i, j)| *i == k || *j == k).count();
                let worst = keep
                    .iter()
                    .copied()
                    .filter(|&k| set.records[k].kind != DivisorKind::Hyperplane)
                    .max_by_key(|&k| (score(k), k))
                    .expect("the hyperplane class is always exact");
                keep.retain(|&k| k != worst);
                dropped.push(set.records[worst].label.clone());
            }
            ambiguity = Some(Ambiguity {
                pairs: open.iter().filter(|(i, j)| i != j).map(|&(i, j)| (set.records[i].label.clone(), set.records[j].label.clone())).collect(),
                alternatives,
                dropped,
            });
        }
    }
    let gram: Vec<Vec<i64>> = match resolved {
        Some(m) => m,
        None => keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| match table[i][j] {
                        PairData::Exact { value } => value,
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect(),
    };
    let mut sub = set.clone();
    sub.records = keep.iter().map(|&i| set.records[i].clone()).collect();
    let h = sub.records.iter().position(|r| r.kind == DivisorKind::Hyperplane);
    let lattice = rank_and_relations(&linalg::from_i64(&gram), h).map_err(|e| e.to_string());
    s.step_three.used = sub.records.iter().map(|r| r.label.clone()).collect();
    s.step_three.generator_gram = gram.clone();
    s.step_three.rank = lattice.as_ref().map_or(0, |l| l.rank());
    Ok(Current { sub, gram, lattice, ambiguity })
}

fn automorphisms_over(set: &DivisorSet, autos: &[SurfaceAutomorphism]) -> Vec<SurfaceAutomorphism> {
    autos
        .iter()
        .map(|a| SurfaceAutomorphism {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| set.embedding.apply(&a.matrix[i][j]))),
            lambda: set.embedding.apply(&a.lambda),
            sign: a.sign,
        })
        .collect()
}

/// The isometries of the lattice induced by the automorphisms of `X` and by
/// `Gal(K/k)`, for those that permute the used classes.
fn isometries(sub: &DivisorSet, x: &DoubleSexticSurface, l: &GramLattice) -> Vec<IntMatrix> {
    let k = sub.field().clone();
    let perm = |img: &dyn Fn(&DivisorRecord) -> DivisorRecord| -> Option<Vec<usize>> {
        sub.records.iter().map(|r| sub.position(&img(r))).collect()
    };
    let mut perms = Vec::new();
    for a in automorphisms_over(sub, &x.automorphisms) {
        perms.extend(perm(&|r| r.transform(&a, &k)));
    }
    if sub.galois_closed {
        for sigma in relative_automorphisms(&sub.embedding).iter().skip(1) {
            perms.extend(perm(&|r| r.map(sigma)));
        }
    }
    perms.iter().filter_map(|p| l.induced_isometry(p)).collect()
}

fn to_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|v| i64::try_from(v).map_err(|_| KitError::Overflow(v.to_string()))).collect())
        .collect()
}

fn field_name(k: &NumberField) -> String {
    if k.is_rationals() {
        return String::from("Q");
    }
    format!("Q[alpha]/({})", codec::FieldData::encode(k).minpoly)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    s: &mut Session,
    set: &DivisorSet,
    cur: &Current,
    tau: u32,
    saturation: Option<&SaturationReport>,
    mut reasons: Vec<ReportReason>,
    resumable: bool,
    clock: &Clock,
    ckpt: Checkpoint<'_>,
) -> Result<Outcome> {
    let t = s.step_two.as_ref().unwrap();
    for r in &t.rejected {
        reasons.push(reason(ReasonKind::DivisorRejected, r.clone()));
    }
    for n in t.notes.iter().filter(|n| n.contains("degree cap")) {
        reasons.push(reason(ReasonKind::FieldDegreeCap, n.clone()));
    }
    if let Some(a) = &cur.ambiguity {
        reasons.push(reason(ReasonKind::AmbiguousIntersections, format!("left out {}", a.dropped.join(", "))));
    }
    let fallback = || GramLattice::from_gram(&linalg::from_i64(&[vec![2]])).expect("((2)) is a lattice");
    let lat = cur.lattice.clone().unwrap_or_else(|_| fallback());
    let rank = lat.rank();
    let lower = t.del_pezzo.as_ref().map(|d| d.lower_bound);
    if let Some(b) = lower {
        if (rank as u32) < b {
            reasons.push(reason(ReasonKind::DelPezzoBound, format!("a del Pezzo cover gives rank at least {b}, the lattice has rank {rank}")));
        }
    }
    let verdict = saturation.is_some_and(|r| r.verdict == Verdict::Saturated) && rank == tau as usize;
    let used: Vec<&str> = cur.sub.records.iter().map(|r| r.label.as_str()).collect();
    let k = set.field();
    let divisors = set
        .records
        .iter()
        .map(|r| DivisorSummary {
            label: r.label.clone(),
            kind: format!("{:?}", r.kind),
            degree: r.degree,
            plane_curve: r.plane_curve.as_ref().map(|p| codec::poly(k, p)),
            field: field_name(&r.field_of_definition),
            used: used.contains(&r.label.as_str()),
        })
        .collect();
    let report = Report {
        gram_matrix: to_i64(&lat.gram)?,
        verdict,
        rank,
        det: lat.det.to_string(),
        tau,
        tau_provenance: s.step_one.provenance.clone().unwrap_or(ProvenanceData::TrivialCap),
        divisors,
        generator_gram: if cur.lattice.is_ok() { cur.gram.clone() } else { vec![vec![2]] },
        basis: to_i64(&lat.basis)?,
        ambiguities: cur.ambiguity.iter().cloned().collect(),
        reasons,
        named_decomposition: decompose_named(&lat).map(|d| named_parts(&d)),
        saturation: saturation.map(SaturationData::from),
        rank_lower_bound: lower,
        resumable,
    };
    s.log("done", format!("verdict {verdict}, rank {rank}"));
    s.outcome = Some(report.clone());
    s.elapsed_secs = clock.elapsed();
    ckpt(s)?;
    Ok(Outcome::of(report))
}
