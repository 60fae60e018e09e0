use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::homology::SearchConfig;
use crate::presentation::{
    parse_presentation, serialize_presentation, Certified, IdempotentSpec, Presentation,
};

use super::{
    arrow_candidates, evaluate_step, execute, gorenstein_test, vertex_candidates, Assertion, Citation,
    GorensteinVerdict, KnownClass, ReductionError, ReductionStep, StepContext, StepKind, StepSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOptions {
    pub search: SearchConfig,
    /// Top degree of the EHI sample tables.
    pub jmax: usize,
    /// Vertex labels of a user idempotent, tried once after vertex removal.
    pub idempotent: Option<Vec<String>>,
    pub seed: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            search: SearchConfig::default(),
            jmax: 12,
            idempotent: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub core_dimension: usize,
    pub core_self_injective: bool,
    pub core_gorenstein: GorensteinVerdict,
    /// Gorensteinness of the input, transferred from the core.
    pub input_gorenstein: Option<bool>,
    pub core_classes: Vec<KnownClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub options: ReduceOptions,
    /// Hex SHA-256 of the canonical serialization of the input.
    pub initial_digest: String,
    pub initial: String,
    pub steps: Vec<ReductionStep>,
    pub core: String,
    pub summary: Summary,
    pub assertions: Vec<Assertion>,
}

impl ReductionTrace {
    pub fn applied_steps(&self) -> impl Iterator<Item = &ReductionStep> {
        self.steps.iter().filter(|s| s.applied)
    }

    pub fn alarms(&self) -> Vec<&str> {
        self.steps.iter().flat_map(|s| s.alarms.iter().map(String::as_str)).collect()
    }

    /// 0 when every step and the summary are certified, 2 when some verdict
    /// stayed open or a requested step was refused, 3 on an alarm.
    pub fn exit_code(&self) -> i32 {
        if !self.alarms().is_empty() {
            3
        } else if self.steps.iter().all(ReductionStep::fully_certified)
            && self.summary.core_gorenstein.is_gorenstein().is_some()
        {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traces serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        serde_json::from_str(text).map_err(|e| ReductionError::BadTrace(e.to_string()))
    }

    /// Every corollary used by an applied step, in order of first use.
    pub fn corollaries(&self) -> Vec<Citation> {
        let mut out = Vec::new();
        for s in self.applied_steps() {
            let c = s.kind.citation();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

pub fn digest(p: &Presentation) -> String {
    hex::encode(Sha256::digest(serialize_presentation(p).as_bytes()))
}

fn known_classes(c: &Certified, gor: &GorensteinVerdict) -> Vec<KnownClass> {
    let a = &c.algebra;
    let mut out = Vec::new();
    if gor.is_self_injective() {
        out.push(KnownClass::SelfInjective);
    }
    if c.presentation.relations().iter().all(|r| r.is_monomial()) {
        out.push(KnownClass::Monomial);
    }
    if a.is_radical_square_zero() {
        out.push(KnownClass::RadicalSquareZero);
    }
    if a.is_local() && a.loewy_length() <= 3 {
        out.push(KnownClass::LocalRadicalCubeZero);
    }
    out
}

fn cumulative_assertions(steps: &[ReductionStep]) -> Vec<Assertion> {
    let mut cors = Vec::new();
    for s in steps.iter().filter(|s| s.applied) {
        let c = s.kind.citation();
        if !cors.contains(&c) {
            cors.push(c);
        }
    }
    if cors.is_empty() {
        return Vec::new();
    }
    let with = |claim: &str, theorem: Citation| {
        let mut citations = cors.clone();
        citations.push(theorem);
        Assertion {
            claim: claim.into(),
            citations,
        }
    };
    vec![
        with("D_sg(A) ≃ D_sg(core)", Citation::SingularEquivalence),
        with("Gproj-stable(A) ≃ Gproj-stable(core)", Citation::GprojEquivalence),
        with("D_def(A) ≃ D_def(core)", Citation::GprojEquivalence),
        with("A Gorenstein ⇔ core Gorenstein", Citation::GorensteinTransfer),
        with("GSC(A) ⇔ GSC(core)", Citation::SymmetryConjectureTransfer),
        with("ARC(A) ⇔ ARC(core)", Citation::ConjectureTransfer),
        with("GPC(A) ⇔ GPC(core)", Citation::ConjectureTransfer),
    ]
}

/// Greedy reduction to a fixpoint: vertex removals first, then the user
/// idempotent (once), then arrow removals one at a time, repeating after
/// every applied step. Candidates are taken in declaration order.
pub fn reduce(p: &Presentation, options: &ReduceOptions) -> Result<ReductionTrace, ReductionError> {
    let cfg = &options.search;
    let mut current = p.certify(None)?;
    let mut gor = gorenstein_test(&current.algebra, cfg)?;
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut pending = options.idempotent.clone();
    loop {
        let n = current.algebra.num_vertices();
        let spec = {
            let mut vs = vertex_candidates(&current);
            if vs.len() == n {
                vs.remove(0);
            }
            if !vs.is_empty() {
                Some(StepSpec::RemoveVertices(vs))
            } else if let Some(labels) = pending.take() {
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                Some(StepSpec::Corner(IdempotentSpec::from_labels(&current.algebra, &refs, true)?))
            } else {
                arrow_candidates(&current)?.first().map(|&x| StepSpec::RemoveArrow(x))
            }
        };
        let Some(spec) = spec else { break };
        let k = steps.iter().filter(|s| s.applied).count();
        let ctx = StepContext {
            config: cfg,
            jmax: options.jmax,
            gorenstein_before: gor,
            source_name: format!("A{k}"),
            target_name: format!("A{}", k + 1),
        };
        let (step, next) = evaluate_step(&current, &spec, &ctx)?;
        let applied_after = step.gorenstein_after;
        let is_corner = matches!(spec, StepSpec::Corner(_));
        steps.push(step);
        match next {
            Some(next) => {
                current = next;
                gor = applied_after.expect("applied steps record the new verdict");
            }
            None if is_corner => continue,
            None => break,
        }
    }
    let summary = Summary {
        core_dimension: current.dimension(),
        core_self_injective: gor.is_self_injective(),
        core_gorenstein: gor,
        input_gorenstein: gor.is_gorenstein(),
        core_classes: known_classes(&current, &gor),
    };
    Ok(ReductionTrace {
        options: options.clone(),
        initial_digest: digest(p),
        initial: serialize_presentation(p),
        assertions: cumulative_assertions(&steps),
        core: serialize_presentation(&current.presentation),
        steps,
        summary,
    })
}

fn spec_from_step(c: &Certified, step: &ReductionStep) -> Result<StepSpec, ReductionError> {
    let q = c.presentation.quiver();
    let vertex = |l: &String| {
        q.vertex_index(l)
            .ok_or_else(|| ReductionError::BadTrace(format!("unknown vertex {l}")))
    };
    Ok(match step.kind {
        StepKind::ArrowRemoval => {
            let [label] = &step.parameters[..] else {
                return Err(ReductionError::BadTrace("arrow removal needs one arrow".into()));
            };
            let x = q
                .arrow_index(label)
                .ok_or_else(|| ReductionError::BadTrace(format!("unknown arrow {label}")))?;
            StepSpec::RemoveArrow(x)
        }
        StepKind::VertexRemoval => StepSpec::RemoveVertices(step.parameters.iter().map(vertex).collect::<Result<_, _>>()?),
        StepKind::IdempotentReduction => {
            let vs = step.parameters.iter().map(vertex).collect::<Result<Vec<_>, _>>()?;
            StepSpec::Corner(IdempotentSpec::new(vs, q.num_vertices(), true)?)
        }
        StepKind::TriangularCornerA | StepKind::TriangularCornerB => {
            return Err(ReductionError::BadTrace("triangular steps are not part of a reduce trace".into()))
        }
    })
}

/// Re-executes the applied steps from the recorded input and checks every
/// intermediate core and the final core against the trace.
pub fn replay(trace: &ReductionTrace) -> Result<Presentation, ReductionError> {
    let p = parse_presentation(&trace.initial)?;
    if digest(&p) != trace.initial_digest {
        return Err(ReductionError::ReplayMismatch("input digest".into()));
    }
    let mut current = p.certify(None)?;
    for (i, step) in trace.applied_steps().enumerate() {
        let spec = spec_from_step(&current, step)?;
        let next = execute(&current, &spec)?;
        if Some(serialize_presentation(&next)) != step.result {
            return Err(ReductionError::ReplayMismatch(format!("applied step {i}")));
        }
        current = next.certify(None)?;
    }
    if serialize_presentation(&current.presentation) != trace.core {
        return Err(ReductionError::ReplayMismatch("final core".into()));
    }
    Ok(current.presentation)
}
