use picard_core::lattice::signature;
use picard_core::linalg;
use picard_kit::input::{parse_extra, SurfaceDoc};
use picard_kit::report::ReasonKind;
use picard_kit::session::PairData;
use picard_kit::{load_session, run_pipeline, save_session, KitError, Options, Session};

/// One tritangent line `x = 0` with `f|_{x=0} = (y^3 + z^3)^2`.
const ONE_LINE: &str = "(y^3+z^3)^2 + x*(x^5+y^5+2*z^5)";

fn quick(tau: Option<u32>) -> Options {
    Options { tau_override: tau, primes: vec![3], max_n: 1, conic_steps: 1_000, conic_max_steps: 1_000, ..Options::default() }
}

fn assert_lattice_shape(m: &[Vec<i64>], rank: usize) {
    assert_eq!(m.len(), rank);
    for i in 0..rank {
        assert_eq!(m[i][i] % 2, 0);
        for j in 0..rank {
            assert_eq!(m[i][j], m[j][i]);
        }
    }
    assert_eq!(signature(&linalg::from_i64(m)), (1, rank - 1));
}

#[test]
fn override_one_with_only_the_hyperplane() {
    let mut s = Session::new(SurfaceDoc::over_q("x^6+y^6+z^6"), quick(Some(1)), vec![]);
    let out = run_pipeline(&mut s).unwrap();
    assert_eq!(out.gram, vec![vec![2]]);
    assert!(out.verdict);
    assert!(out.report.has_reason(ReasonKind::Saturated));
}

#[test]
fn zero_budget_stops_with_time() {
    let mut o = quick(None);
    o.time_limit_secs = Some(0.0);
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), o, vec![]);
    let out = run_pipeline(&mut s).unwrap();
    assert_eq!(out.gram, vec![vec![2]]);
    assert!(!out.verdict);
    assert!(out.report.has_reason(ReasonKind::Time));
    assert!(out.report.resumable);
}

#[test]
fn one_line_reaches_rank_two() {
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(Some(2)), vec![]);
    let out = run_pipeline(&mut s).unwrap();
    assert_eq!(out.report.rank, 2);
    assert_eq!(out.report.det, "-5");
    assert!(out.verdict);
    assert_lattice_shape(&out.gram, 2);
    // H, L+, L- with L+ + L- = H
    assert_eq!(out.report.generator_gram, vec![vec![2, 1, 1], vec![1, -2, 3], vec![1, 3, -2]]);
}

#[test]
fn finished_session_replays_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(Some(2)), vec![]);
    let first = run_pipeline(&mut s).unwrap();
    save_session(&s, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    let mut t = load_session(&path).unwrap();
    assert_eq!(t, s);
    let again = run_pipeline(&mut t).unwrap();
    assert_eq!(again, first);
    save_session(&t, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
}

#[test]
fn partial_session_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(None), vec![]);
    run_pipeline(&mut s).unwrap();
    // reopen the run so the stored state is mid-way
    s.outcome = None;
    save_session(&s, &path).unwrap();
    let t = load_session(&path).unwrap();
    assert_eq!(t, s);
    assert_eq!(t.to_json(), s.to_json());
    let set = t.step_two.as_ref().unwrap().set.decode().unwrap();
    assert_eq!(set.split_count(), 2);
    let x = t.surface.surface().unwrap();
    assert!(set.verify(&x.f));
}

#[test]
fn unknown_version_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(None), vec![]);
    std::fs::write(&path, s.to_json().replace("picard-session/1", "picard-session/9")).unwrap();
    assert!(matches!(load_session(&path), Err(KitError::Version { .. })));
}

#[test]
fn counting_resumes_at_the_next_n() {
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(None), vec![]);
    run_pipeline(&mut s).unwrap();
    assert_eq!(s.step_one.primes[0].counts.len(), 1);
    // a marker value shows the first count is not recomputed
    s.step_one.primes[0].counts[0] = 999;
    let mut o = s.options.clone();
    o.max_n = 2;
    s.update_options(o);
    let before = s.events.len();
    run_pipeline(&mut s).unwrap();
    let counts = &s.step_one.primes[0].counts;
    assert_eq!(counts[0], 999);
    assert_eq!(counts.len(), 2);
    let new_counts: Vec<_> = s.events[before..].iter().filter(|e| e.step == "count").collect();
    assert_eq!(new_counts.len(), 1);
    assert!(new_counts[0].message.starts_with("#X(F_3^2)"));
    // no pair is computed twice
    assert!(!s.events[before..].iter().any(|e| e.step == "intersections"));
}

#[test]
fn events_are_totally_ordered() {
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(None), vec![]);
    run_pipeline(&mut s).unwrap();
    for (i, e) in s.events.iter().enumerate() {
        assert_eq!(e.seq, i as u64);
    }
    let steps: Vec<&str> = s.events.iter().map(|e| e.step.as_str()).collect();
    let pos = |name: &str| steps.iter().position(|s| *s == name).unwrap();
    assert!(pos("bound") < pos("lines"));
    assert!(pos("lines") < pos("del_pezzo"));
    assert!(pos("del_pezzo") < pos("conics"));
    assert_eq!(*steps.last().unwrap(), "done");
}

#[test]
fn exhausted_search_reports_failure_modes() {
    let mut s = Session::new(SurfaceDoc::over_q(ONE_LINE), quick(Some(5)), vec![]);
    let out = run_pipeline(&mut s).unwrap();
    assert!(!out.verdict);
    assert_eq!(out.report.rank, 2);
    assert!(out.report.has_reason(ReasonKind::SearchInconclusive));
    assert!(out.report.has_reason(ReasonKind::CurveClassesInsufficient));
    assert_lattice_shape(&out.gram, 2);
}

#[test]
fn user_divisors_are_checked() {
    // the conic x^2 + y z is sixtangent by construction; the line x - y is not tritangent
    let f = "(x^3+y^3-z^3+x*y*z)^2 + (x^2+y*z)*(x^4+2*y^4+3*z^4-x*y*z^2)";
    let extra = parse_extra(
        r#"[
            {"label": "C", "plane_curve": "x^2 + y*z"},
            {"label": "N", "plane_curve": "x - y", "parametrization": ["t", "t", "1"]}
        ]"#,
    )
    .unwrap();
    let mut s = Session::new(SurfaceDoc::over_q(f), quick(Some(2)), extra);
    let out = run_pipeline(&mut s).unwrap();
    assert_eq!(out.report.rank, 2);
    assert!(out.report.divisors.iter().any(|d| d.label == "C+" && d.used));
    assert!(out.report.has_reason(ReasonKind::DivisorRejected));
    assert_eq!(out.report.det, "-8");
    assert_lattice_shape(&out.gram, 2);
    let cached = s.step_three.lookup("C+", "C-").unwrap();
    // C+ + C- = 2H
    assert_eq!(cached, &PairData::Exact { value: 6 });
}

#[test]
fn del_pezzo_cover_is_reported() {
    let mut s = Session::new(SurfaceDoc::over_q("x^6 + y^6 + z^6 + x^2*y^3*z"), quick(Some(3)), vec![]);
    let out = run_pipeline(&mut s).unwrap();
    assert_eq!(out.report.rank_lower_bound, Some(9));
    assert!(out.report.has_reason(ReasonKind::DelPezzoBound));
}

#[test]
fn invalid_surface_is_an_input_error() {
    let mut s = Session::new(SurfaceDoc::over_q("(y^3+z^3)^2 + x^6"), quick(None), vec![]);
    assert!(matches!(run_pipeline(&mut s), Err(KitError::Core(_))));
}
