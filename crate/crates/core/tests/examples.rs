mod common;

use common::{load, simple, simples};
use gored::gproj::{complete_resolution, gproj_test, perp_and_gproj_batch, GprojVerdict};
use gored::homology::{ext_dim, ext_dims, pd_bounded, DimVerdict, SearchConfig};
use gored::module_cat::{syzygy, Module};
use gored::presentation::{
    corner_algebra, parse_presentation, recover_presentation, BasedAlgebra, IdempotentSpec,
};
use gored::reduction::{
    arrow_candidates, conjecture_report, execute, idempotent_conditions, reduce, replay, vertex_candidates,
    ReduceOptions, ReductionTrace, StepSpec,
};

fn cfg() -> SearchConfig {
    SearchConfig::with_bound(20)
}

fn labels(c: &gored::presentation::Certified, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| c.algebra.vertex_labels()[v].clone()).collect()
}

fn graded_dims(a: &BasedAlgebra) -> Vec<usize> {
    let mut out = vec![0; a.loewy_length() + 1];
    for b in 0..a.dim() {
        out[a.radical_degree(b)] += 1;
    }
    out
}

#[test]
fn relation_sign_does_not_change_dimension() {
    let text = std::fs::read_to_string(common::fixture_path("ex46.alg")).unwrap();
    let flipped = text.replace("relation beta*alpha - delta*gamma", "relation delta*gamma - beta*alpha");
    assert_ne!(flipped, text);
    let c = parse_presentation(&flipped).unwrap().certify(None).unwrap();
    assert_eq!(c.dimension(), 14);
}

#[test]
fn corner_pieces_add_up() {
    for f in common::FIXTURES {
        let c = load(f);
        let a = &c.algebra;
        let n = a.num_vertices();
        for v in 0..n {
            let e: Vec<usize> = (0..n).filter(|&u| u != v || n == 1).collect();
            let spec = IdempotentSpec::new(e.clone(), n, true).unwrap();
            let corner = corner_algebra(a, &spec).unwrap();
            let mut total = corner.algebra.dim();
            for s in 0..n {
                for t in 0..n {
                    if !(spec.contains(s) && spec.contains(t)) {
                        total += a.basis_between(t, s).len();
                    }
                }
            }
            assert_eq!(total, a.dim(), "{f} at {v}");
        }
        let full = IdempotentSpec::new(0..n, n, true).unwrap();
        assert_eq!(corner_algebra(a, &full).unwrap().algebra.dim(), a.dim());
    }
}

#[test]
fn recovered_presentations_match() {
    for f in common::FIXTURES {
        let c = load(f);
        let back = recover_presentation(&c.algebra).unwrap().certify(None).unwrap();
        assert_eq!(back.dimension(), c.dimension(), "{f}");
        assert_eq!(graded_dims(&back.algebra), graded_dims(&c.algebra), "{f}");
    }
}

#[test]
fn arrow_candidates_of_ex48() {
    let c = load("ex48.alg");
    let q = c.presentation.quiver();
    let found: Vec<&str> = arrow_candidates(&c).unwrap().iter().map(|&x| q.arrow(x).label.as_str()).collect();
    assert_eq!(found, ["f2"]);
}

#[test]
fn arrow_candidates_ignore_redundant_generators() {
    let text = std::fs::read_to_string(common::fixture_path("ex48.alg")).unwrap();
    let padded = format!("{text}relation e*c*a - e*d*b\nrelation c*a*g*f2 - d*b*g*f2\n");
    let c = parse_presentation(&padded).unwrap().certify(None).unwrap();
    let q = c.presentation.quiver();
    let found: Vec<&str> = arrow_candidates(&c).unwrap().iter().map(|&x| q.arrow(x).label.as_str()).collect();
    assert_eq!(found, ["f2"]);
}

#[test]
fn hereditary_algebra_has_every_arrow_as_candidate() {
    let c = parse_presentation("vertex 1\nvertex 2\nvertex 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n")
        .unwrap()
        .certify(None)
        .unwrap();
    assert_eq!(arrow_candidates(&c).unwrap(), [0, 1]);
}

#[test]
fn vertex_candidates_of_fixtures() {
    let c = load("ex46.alg");
    assert_eq!(labels(&c, &vertex_candidates(&c)), ["2", "3"]);
    let c = load("ex47.alg");
    assert_eq!(labels(&c, &vertex_candidates(&c)), ["3", "5"]);
    assert!(vertex_candidates(&load("loop-x2.alg")).is_empty());
}

#[test]
fn idempotent_conditions_examples() {
    let c = load("ex46.alg");
    let n = c.algebra.num_vertices();
    let full = idempotent_conditions(&c.algebra, &IdempotentSpec::new(0..n, n, true).unwrap(), &cfg()).unwrap();
    for v in [full.pd_corner_ea, full.id_top, full.pd_corner_op_ae, full.pd_top] {
        assert_eq!(v.finite_value(), Some(0));
    }
    let e = IdempotentSpec::from_labels(&c.algebra, &["1", "4"], false).unwrap();
    let ic = idempotent_conditions(&c.algebra, &e, &cfg()).unwrap();
    assert!(ic.first_pair() && ic.second_pair());

    let a = load("ex47.alg");
    let v = |l: &str| a.algebra.vertex_index(l).unwrap();
    let b = execute(&a, &StepSpec::RemoveVertices(vec![v("3"), v("5")])).unwrap().certify(None).unwrap();
    let e = IdempotentSpec::from_labels(&b.algebra, &["2", "4"], false).unwrap();
    let ic = idempotent_conditions(&b.algebra, &e, &cfg()).unwrap();
    assert!(ic.second_pair());
    assert!(pd_bounded(&simple(&b, "1"), &cfg()).unwrap().is_finite());
}

#[test]
fn vertex_removal_is_a_corner_reduction() {
    for f in ["ex46.alg", "ex47.alg"] {
        let c = load(f);
        let n = c.algebra.num_vertices();
        let vs = vertex_candidates(&c);
        let keep: Vec<usize> = (0..n).filter(|v| !vs.contains(v)).collect();
        let e = IdempotentSpec::new(keep, n, false).unwrap();
        assert!(idempotent_conditions(&c.algebra, &e, &cfg()).unwrap().admitted(), "{f}");
        let by_vertex = execute(&c, &StepSpec::RemoveVertices(vs)).unwrap().certify(None).unwrap();
        let by_corner = execute(&c, &StepSpec::Corner(e)).unwrap().certify(None).unwrap();
        assert_eq!(by_vertex.dimension(), by_corner.dimension(), "{f}");
        assert_eq!(graded_dims(&by_vertex.algebra), graded_dims(&by_corner.algebra), "{f}");
        assert_eq!(by_vertex.algebra.vertex_labels(), by_corner.algebra.vertex_labels(), "{f}");
    }
}

#[test]
fn batch_verdicts() {
    let c = load("loop-x3.alg");
    assert!(perp_and_gproj_batch(&simples(&c), &cfg()).unwrap().iter().all(|r| r.gproj.is_gproj()));

    let c = load("ex47C.alg");
    let rows = perp_and_gproj_batch(&simples(&c), &cfg()).unwrap();
    assert!(rows.iter().all(|r| r.projective || !r.gproj.is_gproj()));

    let c = load("ex46.alg");
    let rows = perp_and_gproj_batch(&simples(&c), &cfg()).unwrap();
    let certified: Vec<&str> = rows.iter().filter(|r| r.gproj.is_gproj()).map(|r| r.label.as_str()).collect();
    assert_eq!(certified, ["S4"]);
}

#[test]
fn complete_resolutions_are_totally_acyclic() {
    for (f, v) in [("ex46.alg", "4"), ("loop-x2.alg", "1"), ("loop-x3.alg", "1")] {
        let c = load(f);
        let cr = complete_resolution(&simple(&c, v), &cfg()).unwrap();
        assert!(cr.is_exact().unwrap() && cr.is_dual_exact().unwrap(), "{f}");
    }
    let c = load("ex46.alg");
    let cr = complete_resolution(&simple(&c, "4"), &cfg()).unwrap();
    let p4 = Module::projective(c.algebra.clone(), c.algebra.vertex_index("4").unwrap()).unwrap();
    assert!(cr.terms.iter().all(|t| t.dims() == p4.dims()));
}

/// Certified Gorenstein projectives stay certified under syzygy and have
/// vanishing `Ext^j(M, A)` on `1..=2·bound`.
#[test]
fn gproj_soundness_and_syzygy_closure() {
    let config = SearchConfig::with_bound(20);
    for f in common::FIXTURES {
        let c = load(f);
        let regular = Module::regular(c.algebra.clone()).unwrap();
        for (label, s) in simples(&c) {
            if let GprojVerdict::CertifiedGproj { .. } = gproj_test(&s, &config).unwrap() {
                let ext = ext_dims(&s, &regular, 2 * config.bound, &config).unwrap();
                assert!(ext[1..].iter().all(|&d| d == 0), "{f} {label}");
                let omega = syzygy(&s, 1).unwrap();
                assert!(omega.is_zero() || gproj_test(&omega, &config).unwrap().is_gproj(), "{f} {label}");
            }
        }
    }
}

/// `pd M ≤ n` iff `Ext^{n+1}(M, S) = 0` for every simple `S`.
#[test]
fn projective_dimension_matches_ext_into_simples() {
    for f in common::FIXTURES {
        let c = load(f);
        let all = simples(&c);
        for (label, m) in &all {
            let vanish = |j: usize| all.iter().all(|(_, s)| ext_dim(m, s, j, &cfg()).unwrap() == 0);
            match pd_bounded(m, &cfg()).unwrap() {
                DimVerdict::Finite { value, .. } => {
                    assert!(!vanish(value), "{f} {label}");
                    assert!((value + 1..=value + 4).all(vanish), "{f} {label}");
                }
                DimVerdict::InfiniteCertified { .. } => assert!((1..=8).all(|j| !vanish(j)), "{f} {label}"),
                DimVerdict::AtLeast { .. } => panic!("{f} {label} undetermined"),
            }
        }
    }
}

#[test]
fn traces_replay_and_round_trip() {
    for (f, idem) in [
        ("ex46.alg", None),
        ("ex47.alg", Some(vec!["2".to_string(), "4".to_string()])),
        ("ex48.alg", None),
        ("loop-x2.alg", None),
    ] {
        let c = load(f);
        let options = ReduceOptions {
            idempotent: idem,
            ..ReduceOptions::default()
        };
        let trace = reduce(&c.presentation, &options).unwrap();
        let core = replay(&trace).unwrap();
        assert_eq!(gored::presentation::serialize_presentation(&core), trace.core, "{f}");
        assert_eq!(ReductionTrace::from_json(&trace.to_json()).unwrap(), trace, "{f}");
        for s in &trace.steps {
            assert_eq!(s.applied, !s.assertions.is_empty(), "{f} {:?}", s.kind);
            if s.applied {
                assert!(s.side_conditions.iter().any(|c| c.is_certified()));
            }
        }
        assert!(!conjecture_report(&trace).render().is_empty());
    }
}

#[test]
fn tampered_trace_fails_replay() {
    let c = load("ex46.alg");
    let mut trace = reduce(&c.presentation, &ReduceOptions::default()).unwrap();
    trace.core = trace.core.replace("eps*eps", "eps*eps*eps");
    assert!(replay(&trace).is_err());
    let mut trace = reduce(&c.presentation, &ReduceOptions::default()).unwrap();
    trace.initial_digest = "00".into();
    assert!(replay(&trace).is_err());
}
