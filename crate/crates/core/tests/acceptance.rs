//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails or exceeds its time limit.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::props;
use common::{fixture_path, load, simple, simples};
use gored::cli;
use rand::{RngCore, SeedableRng};
use gored::gproj::{gproj_test, perp_and_gproj_batch, GprojVerdict, NotGprojWitness};
use gored::homology::{ext_dim, ext_dims, pd_bounded, DimVerdict, PerpVerdict};
use gored::module_cat::{is_isomorphic, parse_representation, IsoConfig, IsoResult, Module};
use gored::presentation::{parse_presentation, serialize_presentation, Certified, IdempotentSpec};
use gored::reduction::{
    arrow_candidates, conjecture_report, ehi_sample_check, gorenstein_test, reduce, simples_in, vertex_candidates,
    Citation, Evidence, ReduceOptions, ReductionTrace, StepKind,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn applied(trace: &ReductionTrace) -> Vec<(StepKind, Vec<String>)> {
    trace.applied_steps().map(|s| (s.kind, s.parameters.clone())).collect()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn reduce_fixture(name: &str, idempotent: Option<&[&str]>) -> Result<ReductionTrace, String> {
    let options = ReduceOptions {
        idempotent: idempotent.map(strings),
        ..ReduceOptions::default()
    };
    reduce(&load(name).presentation, &options).map_err(fail)
}

fn c1_ex46_reduction() -> Outcome {
    let a = load("ex46.alg");
    let trace = reduce_fixture("ex46.alg", None)?;
    let expected = vec![
        (StepKind::VertexRemoval, strings(&["2", "3"])),
        (StepKind::VertexRemoval, strings(&["1"])),
    ];
    ensure(applied(&trace) == expected, format!("applied steps {:?}", applied(&trace)))?;
    let core = parse_presentation(&trace.core).map_err(fail)?.certify(None).map_err(fail)?;
    let q = core.presentation.quiver();
    ensure(
        core.dimension() == 2 && q.num_vertices() == 1 && q.num_arrows() == 1 && core.algebra.loewy_length() == 2,
        format!("core is not k[ε]/ε²:\n{}", trace.core),
    )?;
    ensure(trace.summary.core_self_injective, "core not flagged self-injective")?;
    let g = gorenstein_test(&a.algebra, &props::cfg()).map_err(fail)?;
    ensure(g.left.is_finite() && g.right.is_finite(), format!("gorenstein_test(A) = {g:?}"))?;
    let claims: Vec<&str> = trace.assertions.iter().map(|x| x.claim.as_str()).collect();
    for claim in ["Gproj-stable(A) ≃ Gproj-stable(core)", "D_def(A) ≃ D_def(core)"] {
        ensure(claims.contains(&claim), format!("missing assertion {claim}"))?;
    }
    // The core's only non-projective indecomposable is its simple, so the
    // stable category is mod k; D_def vanishes because the core is Gorenstein.
    let s = Module::simple(core.algebra.clone(), 0).map_err(fail)?;
    ensure(gproj_test(&s, &props::cfg()).map_err(fail)?.is_gproj(), "core simple not Gproj")?;
    ensure(trace.summary.core_gorenstein.is_gorenstein() == Some(true), "core not Gorenstein")?;
    Ok(format!("steps {{2,3}} then {{1}}, core dim {}", core.dimension()))
}

fn c2_ex46_gproj() -> Outcome {
    let a = load("ex46.alg");
    let cfg = props::cfg();
    let regular = Module::regular(a.algebra.clone()).map_err(fail)?;
    match gproj_test(&simple(&a, "4"), &cfg).map_err(fail)? {
        GprojVerdict::CertifiedGproj {
            perp: PerpVerdict::CertifiedYes {
                dimension: DimVerdict::InfiniteCertified { period_start, period_end, .. },
                ..
            },
            ..
        } if period_end - period_start == 1 => {}
        other => return Err(format!("S4: {other:?}")),
    }
    for v in ["1", "2", "3"] {
        let s = simple(&a, v);
        match gproj_test(&s, &cfg).map_err(fail)? {
            GprojVerdict::CertifiedNotGproj {
                witness: NotGprojWitness::ExtNonzero { degree },
            } => {
                let d = ext_dim(&s, &regular, degree, &cfg).map_err(fail)?;
                ensure(d > 0, format!("S{v}: witness degree {degree} but Ext = 0"))?;
                let first = (1..=degree).find(|&j| ext_dim(&s, &regular, j, &cfg).unwrap() > 0);
                ensure(first == Some(degree), format!("S{v}: witness {degree}, first nonzero {first:?}"))?;
            }
            other => return Err(format!("S{v}: {other:?}")),
        }
    }
    Ok("S4 certified with period 1; S1, S2, S3 refuted by Ext^1(S, A) ≠ 0".into())
}

fn c3_ex47_reduction() -> Outcome {
    let a = load("ex47.alg");
    let candidates: Vec<&str> = vertex_candidates(&a)
        .iter()
        .map(|&v| a.algebra.vertex_labels()[v].as_str())
        .collect();
    ensure(candidates == ["3", "5"], format!("vertex candidates {candidates:?}"))?;
    let trace = reduce_fixture("ex47.alg", Some(&["2", "4"]))?;
    let expected = vec![
        (StepKind::VertexRemoval, strings(&["3", "5"])),
        (StepKind::IdempotentReduction, strings(&["2", "4"])),
    ];
    ensure(applied(&trace) == expected, format!("applied steps {:?}", applied(&trace)))?;
    let corner = trace.applied_steps().nth(1).unwrap();
    ensure(corner.side_conditions.len() == 4, "corner step must record four conditions")?;
    let pd_top = corner
        .side_conditions
        .iter()
        .find(|c| c.name == "pd_A top(A/AeA)")
        .ok_or("no pd_A top condition")?;
    ensure(
        matches!(pd_top.evidence, Evidence::Dimension(DimVerdict::Finite { .. })),
        format!("pd S1 verdict {:?}", pd_top.evidence),
    )?;
    let b = props::ex47_b();
    ensure(pd_bounded(&simple(&b, "1"), &props::cfg()).map_err(fail)?.is_finite(), "pd_B S1 not finite")?;

    let core = parse_presentation(&trace.core).map_err(fail)?;
    let expected = parse_presentation(&std::fs::read_to_string(fixture_path("ex47C.alg")).unwrap()).map_err(fail)?;
    // Same quiver and the same relation set, in any order.
    let lines = |p: &gored::presentation::Presentation| {
        let mut l: Vec<String> = serialize_presentation(p).lines().map(str::to_string).collect();
        l.sort();
        l
    };
    ensure(lines(&core) == lines(&expected), format!("core differs:\n{}", trace.core))?;
    let core: Certified = core.certify(None).map_err(fail)?;
    let rows = perp_and_gproj_batch(&simples(&core), &props::cfg()).map_err(fail)?;
    ensure(
        rows.iter().all(|r| r.projective || !r.gproj.is_gproj()),
        "a non-projective simple of the core is certified Gproj",
    )?;
    let g = gorenstein_test(&core.algebra, &props::cfg()).map_err(fail)?;
    ensure(!(g.left.is_finite() && g.right.is_finite()), format!("core both-Finite: {g:?}"))?;
    Ok(format!("steps {{3,5}} then e2+e4; core id {} / {}", g.left, g.right))
}

fn c4_ex48() -> Outcome {
    let a = load("ex48.alg");
    let q = a.presentation.quiver();
    let found: Vec<&str> = arrow_candidates(&a).map_err(fail)?.iter().map(|&x| q.arrow(x).label.as_str()).collect();
    ensure(found.contains(&"f2") && !found.contains(&"f1"), format!("arrow candidates {found:?}"))?;
    let trace = reduce_fixture("ex48.alg", None)?;
    ensure(
        applied(&trace).first() == Some(&(StepKind::ArrowRemoval, strings(&["f2"]))),
        format!("applied steps {:?}", applied(&trace)),
    )?;
    let report = conjecture_report(&trace);
    ensure(
        report.transfers.len() == 3
            && report.transfers.iter().all(|t| t.statement.contains("iff") && t.citations.contains(&Citation::ArrowRemoval)),
        report.render(),
    )?;
    Ok(format!("arrow candidates {found:?}; transfers cite {}", Citation::ArrowRemoval.anchor()))
}

fn c5_ehi_tail() -> Outcome {
    let mut notes = Vec::new();
    let a46 = load("ex46.alg");
    let b = props::ex47_b();
    for (name, c, labels) in [("ex46 e1+e4", &a46, ["1", "4"]), ("B e2+e4", &b, ["2", "4"])] {
        let e = IdempotentSpec::from_labels(&c.algebra, &labels, false).map_err(fail)?;
        let samples = simples_in(&c.algebra, &e).map_err(fail)?;
        let table = ehi_sample_check(&c.algebra, &e, 12, &samples, &props::cfg()).map_err(fail)?;
        let t = table.t_obs.ok_or(format!("{name}: alarm"))?;
        ensure(t <= 6, format!("{name}: t_obs = {t}"))?;
        for row in &table.rows {
            ensure(
                (t + 1..=12).all(|j| row.big[j] == row.corner[j]),
                format!("{name}: {} {} disagree above {t}", row.x, row.y),
            )?;
        }
        notes.push(format!("{name} t_obs {t}"));
    }

    // A 2-cycle with radical square zero and e = e1: Ext^even(S1, S1) = k over
    // A but vanishes over eAe = k, so the sampled rows disagree at degree 12.
    let cyc = parse_presentation("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a*b\nrelation b*a\n")
        .map_err(fail)?
        .certify(None)
        .map_err(fail)?;
    let e = IdempotentSpec::new([0], 2, false).map_err(fail)?;
    let samples = simples_in(&cyc.algebra, &e).map_err(fail)?;
    let table = ehi_sample_check(&cyc.algebra, &e, 12, &samples, &props::cfg()).map_err(fail)?;
    ensure(table.alarm(), "disagreement at degree 12 did not raise the alarm")?;
    let mut trace = reduce_fixture("ex46.alg", None)?;
    trace.steps[0].alarms.push("sampled Ext dimensions disagree up to degree 12".into());
    ensure(trace.exit_code() == 3, "alarm does not map to exit code 3")?;
    Ok(notes.join(", "))
}

fn c6_property_suites() -> Outcome {
    type Prop = fn(u64, usize) -> props::Check;
    let suites: [(&str, Prop, usize); 7] = [
        ("dimension shift", props::dimension_shift, 200),
        ("Ext duality", props::ext_duality, 200),
        ("rank-nullity", |s, _| props::rank_nullity(s), 100),
        ("corner exactness", props::corner_exactness, 200),
        ("corner pd bound", props::corner_pd_bound, 100),
        ("corner perp", props::corner_perp, 100),
        ("corner Gproj", props::corner_gproj, 100),
    ];
    let mut seeds = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut total = 0;
    let mut violations = Vec::new();
    for (name, check, cases) in suites {
        for k in 0..cases {
            total += 1;
            let seed = seeds.next_u64();
            if let Err(e) = check(seed, k) {
                violations.push(format!("{name} (seed {seed}): {e}"));
            }
        }
    }
    ensure(violations.is_empty(), violations.join("; "))?;
    Ok(format!("{total} seeded cases, 0 violations"))
}

fn c7_micro_oracles() -> Outcome {
    let cfg = props::cfg();
    for f in ["loop-x2.alg", "loop-x3.alg"] {
        let c = load(f);
        let s = simple(&c, "1");
        let ext = ext_dims(&s, &s, 6, &cfg).map_err(fail)?;
        ensure(ext == [1; 7], format!("{f}: Ext(S,S) = {ext:?}"))?;
    }
    let c = load("loop-x3.alg");
    let jordan = |n: usize| {
        let rows: Vec<String> = (0..n)
            .map(|r| (0..n).map(|col| if r == col + 1 { "1" } else { "0" }).collect::<Vec<_>>().join(" "))
            .collect();
        parse_representation(&format!("dims {n}\narrow x: [{}]\n", rows.join("; ")), &c)
    };
    let mut classes: Vec<Module> = Vec::new();
    for n in 1..=3 {
        let m = jordan(n).map_err(fail)?;
        if !gproj_test(&m, &cfg).map_err(fail)?.is_gproj() {
            continue;
        }
        let mut new = true;
        for other in &classes {
            match is_isomorphic(&m, other, &IsoConfig::default()).map_err(fail)? {
                IsoResult::Yes(_) => new = false,
                IsoResult::No(_) => {}
                IsoResult::Unknown => return Err(format!("iso test undecided for J{n}")),
            }
        }
        if new {
            classes.push(m);
        }
    }
    ensure(classes.len() == 3, format!("{} certified Gproj classes", classes.len()))?;
    let free = Module::regular(c.algebra.clone()).map_err(fail)?;
    ensure(
        matches!(is_isomorphic(&classes[2], &free, &IsoConfig::default()).map_err(fail)?, IsoResult::Yes(_)),
        "J3 is not the free module",
    )?;
    Ok("Ext(S,S) = 1 in degrees 0..=6; 3 Gproj Jordan classes".into())
}

fn c8_determinism() -> Outcome {
    let mut commands: Vec<Vec<String>> = Vec::new();
    for f in common::FIXTURES {
        let path = fixture_path(f).display().to_string();
        let labels: Vec<String> = load(f).algebra.vertex_labels().to_vec();
        for cmd in ["check", "gorenstein", "reduce"] {
            commands.push(strings(&[cmd, &path]));
        }
        for v in &labels {
            commands.push(strings(&["gproj", &path, "--simple", v, "--complete"]));
            commands.push(strings(&["ext", &path, "--simple", v, "--simple", &labels[0]]));
        }
    }
    let path47 = fixture_path("ex47.alg").display().to_string();
    commands.push(strings(&["reduce", &path47, "--idempotent", "2,4"]));
    let mut runs = 0;
    for seed in ["0", "7"] {
        for cmd in &commands {
            let mut argv = strings(&["gored", "--format", "structured", "--seed", seed]);
            argv.extend(cmd.iter().cloned());
            let first = cli::run(argv.clone());
            let second = cli::run(argv);
            runs += 1;
            ensure(
                first.stdout == second.stdout && first.code == second.code,
                format!("output differs for {cmd:?} (seed {seed})"),
            )?;
            ensure(first.code != 1, format!("{cmd:?} failed: {}", first.stderr))?;
        }
    }
    Ok(format!("{runs} commands byte-identical across reruns"))
}

/// Writes past the test harness capture so the verdicts show in every run.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        ("1 ex46 reduction", c1_ex46_reduction, Duration::from_secs(5)),
        ("2 ex46 Gproj", c2_ex46_gproj, Duration::from_secs(5)),
        ("3 ex47 reduction", c3_ex47_reduction, Duration::from_secs(30)),
        ("4 ex48 arrow removal", c4_ex48, Duration::from_secs(10)),
        ("5 EHI tail agreement", c5_ehi_tail, Duration::from_secs(60)),
        ("6 property suites", c6_property_suites, Duration::from_secs(300)),
        ("7 micro oracles", c7_micro_oracles, Duration::from_secs(5)),
        ("8 determinism", c8_determinism, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other.clone(),
        };
        match verdict {
            Ok(detail) => report(format!("PASS  {name:<24} {elapsed:>9.2?}  {detail}")),
            Err(why) => {
                report(format!("FAIL  {name:<24} {elapsed:>9.2?}  {why}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
