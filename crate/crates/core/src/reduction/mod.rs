//! The reduction pipeline: candidate detection, side conditions, step
//! execution and replayable traces for arrow removal, vertex removal,
//! idempotent corner reduction and triangular corners.
//!
//! Category equivalences and conjecture transfers are recorded as
//! assertions with citation anchors; they are never computed.

mod ehi;
mod report;
mod trace;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{analyse, id_bounded, DimVerdict, SearchConfig};
use crate::module_cat::{Module, ModuleError};
use crate::presentation::{
    arrow_occurs_in_every_min_genset, corner_algebra, minimal_relation_space, quotient_by_arrow,
    recover_presentation, triangular_algebra, BasedAlgebra, Bimodule, Certified, IdempotentSpec,
    Presentation, PresentationError,
};

pub use ehi::{ehi_sample_check, simples_in, EhiRow, EhiTable};
pub use report::{conjecture_report, Conclusion, Conjecture, ConjectureReport, KnownClass, Transfer};
pub use trace::{digest, reduce, replay, ReduceOptions, ReductionTrace, Summary};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("side condition not certified: {0}")]
    SideConditionNotCertified(String),
    #[error("trace replay diverged: {0}")]
    ReplayMismatch(String),
    #[error("malformed trace: {0}")]
    BadTrace(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Anchors of the results a step relies on. Serialized as stable names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Citation {
    #[serde(rename = "theorem-ehi")]
    EventuallyHomological,
    #[serde(rename = "theorem-Gor")]
    GorensteinTransfer,
    #[serde(rename = "theorem-GSC")]
    SymmetryConjectureTransfer,
    #[serde(rename = "theorem-sing-equiv")]
    SingularEquivalence,
    #[serde(rename = "lemma-perp")]
    PerpTransfer,
    #[serde(rename = "lemma-fGd")]
    GprojSyzygyTransfer,
    #[serde(rename = "theorem-Gproj-equiv")]
    GprojEquivalence,
    #[serde(rename = "theorem-ARC")]
    ConjectureTransfer,
    #[serde(rename = "cor-arrow")]
    ArrowRemoval,
    #[serde(rename = "cor-idem")]
    IdempotentReduction,
    #[serde(rename = "cor-vertex")]
    VertexRemoval,
    #[serde(rename = "cor-tri-alg-A")]
    TriangularA,
    #[serde(rename = "cor-tri-alg-B")]
    TriangularB,
}

impl Citation {
    pub fn anchor(self) -> &'static str {
        match self {
            Citation::EventuallyHomological => "theorem-ehi",
            Citation::GorensteinTransfer => "theorem-Gor",
            Citation::SymmetryConjectureTransfer => "theorem-GSC",
            Citation::SingularEquivalence => "theorem-sing-equiv",
            Citation::PerpTransfer => "lemma-perp",
            Citation::GprojSyzygyTransfer => "lemma-fGd",
            Citation::GprojEquivalence => "theorem-Gproj-equiv",
            Citation::ConjectureTransfer => "theorem-ARC",
            Citation::ArrowRemoval => "cor-arrow",
            Citation::IdempotentReduction => "cor-idem",
            Citation::VertexRemoval => "cor-vertex",
            Citation::TriangularA => "cor-tri-alg-A",
            Citation::TriangularB => "cor-tri-alg-B",
        }
    }
}

impl std::fmt::Display for Citation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.anchor())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    ArrowRemoval,
    VertexRemoval,
    IdempotentReduction,
    TriangularCornerA,
    TriangularCornerB,
}

impl StepKind {
    pub fn citation(self) -> Citation {
        match self {
            StepKind::ArrowRemoval => Citation::ArrowRemoval,
            StepKind::VertexRemoval => Citation::VertexRemoval,
            StepKind::IdempotentReduction => Citation::IdempotentReduction,
            StepKind::TriangularCornerA => Citation::TriangularA,
            StepKind::TriangularCornerB => Citation::TriangularB,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Evidence {
    Structural(bool),
    Dimension(DimVerdict),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub evidence: Evidence,
}

impl SideCondition {
    fn structural(name: &str, holds: bool) -> Self {
        SideCondition {
            name: name.into(),
            evidence: Evidence::Structural(holds),
        }
    }

    fn dimension(name: &str, v: DimVerdict) -> Self {
        SideCondition {
            name: name.into(),
            evidence: Evidence::Dimension(v),
        }
    }

    pub fn is_certified(&self) -> bool {
        match self.evidence {
            Evidence::Structural(b) => b,
            Evidence::Dimension(v) => v.is_finite(),
        }
    }
}

/// A tagged claim with the results it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub claim: String,
    pub citations: Vec<Citation>,
}

/// `id_A A` and `id_{A^op} A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinVerdict {
    pub left: DimVerdict,
    pub right: DimVerdict,
}

impl GorensteinVerdict {
    /// `Some(true)` when both are finite, `Some(false)` when one is certified
    /// infinite, `None` otherwise.
    pub fn is_gorenstein(&self) -> Option<bool> {
        let sides = [self.left, self.right];
        if sides.iter().all(DimVerdict::is_finite) {
            Some(true)
        } else if sides.iter().any(|v| matches!(v, DimVerdict::InfiniteCertified { .. })) {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_self_injective(&self) -> bool {
        self.left.finite_value() == Some(0) && self.right.finite_value() == Some(0)
    }

    /// Whether `id_A A < ∞ ⇔ id_{A^op} A < ∞` is settled for this algebra.
    pub fn settles_symmetry(&self) -> bool {
        self.left.is_certified() && self.right.is_certified()
    }
}

pub fn gorenstein_test(a: &Arc<BasedAlgebra>, config: &SearchConfig) -> Result<GorensteinVerdict, ModuleError> {
    Ok(GorensteinVerdict {
        left: id_bounded(&Module::regular(a.clone())?, config)?,
        right: id_bounded(&Module::regular(a.opposite())?, config)?,
    })
}

/// Largest projective dimension of a simple module.
pub fn global_dimension(a: &Arc<BasedAlgebra>, config: &SearchConfig) -> Result<DimVerdict, ModuleError> {
    let mut best = DimVerdict::Finite {
        value: 0,
        bound: config.bound,
    };
    for v in 0..a.num_vertices() {
        let (_, d) = analyse(&Module::simple(a.clone(), v)?, config)?;
        best = match (best, d) {
            (DimVerdict::InfiniteCertified { .. }, _) => best,
            (_, DimVerdict::InfiniteCertified { .. }) => d,
            (DimVerdict::AtLeast { .. }, _) => best,
            (_, DimVerdict::AtLeast { .. }) => d,
            (DimVerdict::Finite { value: x, .. }, DimVerdict::Finite { value: y, .. }) if y > x => d,
            _ => best,
        };
    }
    Ok(best)
}

/// Arrows that some minimal generating set of the ideal avoids.
pub fn arrow_candidates(c: &Certified) -> Result<Vec<usize>, PresentationError> {
    let space = minimal_relation_space(c);
    let n = c.presentation.quiver().num_arrows();
    let mut out = Vec::new();
    for a in 0..n {
        if !arrow_occurs_in_every_min_genset(&space, a, n)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// Vertices at which no minimal relation starts or ends.
pub fn vertex_candidates(c: &Certified) -> Vec<usize> {
    let space = minimal_relation_space(c);
    let mut touched = vec![false; c.presentation.quiver().num_vertices()];
    for r in &space.representatives {
        if let Some((s, t)) = r.endpoints() {
            touched[s] = true;
            touched[t] = true;
        }
    }
    (0..touched.len()).filter(|&v| !touched[v]).collect()
}

/// The four finiteness checks for a corner `eAe`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentConditions {
    /// `pd_{eAe} eA`.
    pub pd_corner_ea: DimVerdict,
    /// `id_A` of the top of `A/AeA`.
    pub id_top: DimVerdict,
    /// `pd_{(eAe)^op} Ae`.
    pub pd_corner_op_ae: DimVerdict,
    /// `pd_A` of the top of `A/AeA`.
    pub pd_top: DimVerdict,
}

impl IdempotentConditions {
    pub fn first_pair(&self) -> bool {
        self.pd_corner_ea.is_finite() && self.id_top.is_finite()
    }

    pub fn second_pair(&self) -> bool {
        self.pd_corner_op_ae.is_finite() && self.pd_top.is_finite()
    }

    pub fn admitted(&self) -> bool {
        self.first_pair() || self.second_pair()
    }

    fn pair_refuted(a: DimVerdict, b: DimVerdict) -> bool {
        matches!(a, DimVerdict::InfiniteCertified { .. }) || matches!(b, DimVerdict::InfiniteCertified { .. })
    }

    /// The two pairs are equivalent conditions; one certified and the other
    /// refuted cannot happen.
    pub fn inconsistent(&self) -> bool {
        (self.first_pair() && Self::pair_refuted(self.pd_corner_op_ae, self.pd_top))
            || (self.second_pair() && Self::pair_refuted(self.pd_corner_ea, self.id_top))
    }

    /// Both pairs contain a certified infinite dimension.
    pub fn refuted(&self) -> bool {
        Self::pair_refuted(self.pd_corner_ea, self.id_top) && Self::pair_refuted(self.pd_corner_op_ae, self.pd_top)
    }

    pub fn side_conditions(&self) -> Vec<SideCondition> {
        vec![
            SideCondition::dimension("pd_{eAe} eA", self.pd_corner_ea),
            SideCondition::dimension("id_A top(A/AeA)", self.id_top),
            SideCondition::dimension("pd_{(eAe)^op} Ae", self.pd_corner_op_ae),
            SideCondition::dimension("pd_A top(A/AeA)", self.pd_top),
        ]
    }
}

pub fn idempotent_conditions(
    a: &Arc<BasedAlgebra>,
    e: &IdempotentSpec,
    config: &SearchConfig,
) -> Result<IdempotentConditions, ReductionError> {
    let corner = corner_algebra(a, e)?;
    let op = a.opposite();
    let corner_op = corner_algebra(&op, e)?;
    let ea = Module::regular(a.clone())?.corner_module(&corner)?;
    let ae = Module::regular(op)?.corner_module(&corner_op)?;
    let mult: Vec<usize> = (0..a.num_vertices()).map(|v| usize::from(!e.contains(v))).collect();
    let top = Module::semisimple(a.clone(), mult)?;
    Ok(IdempotentConditions {
        pd_corner_ea: analyse(&ea, config)?.1,
        id_top: id_bounded(&top, config)?,
        pd_corner_op_ae: analyse(&ae, config)?.1,
        pd_top: analyse(&top, config)?.1,
    })
}

/// What a step does, in terms of the current core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepSpec {
    RemoveArrow(usize),
    RemoveVertices(Vec<usize>),
    Corner(IdempotentSpec),
}

/// A recorded step. `parameters` holds labels: the removed arrow, the
/// removed vertices, or the vertices kept by the idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub parameters: Vec<String>,
    pub side_conditions: Vec<SideCondition>,
    pub applied: bool,
    /// Observed degree after which sampled Ext dimensions agree.
    pub t_obs: Option<usize>,
    pub ehi: Option<EhiTable>,
    pub gorenstein_before: GorensteinVerdict,
    pub gorenstein_after: Option<GorensteinVerdict>,
    pub assertions: Vec<Assertion>,
    /// The new core in algebra file format.
    pub result: Option<String>,
    /// Observations contradicting a theorem; always empty unless there is a bug.
    pub alarms: Vec<String>,
}

impl ReductionStep {
    /// Every recorded condition and check reached a certified verdict.
    pub fn fully_certified(&self) -> bool {
        let gor = |g: &GorensteinVerdict| g.is_gorenstein().is_some();
        self.applied
            && self.side_conditions.iter().all(SideCondition::is_certified)
            && gor(&self.gorenstein_before)
            && self.gorenstein_after.as_ref().is_some_and(gor)
            && self.ehi.as_ref().is_none_or(|t| t.t_obs.is_some())
    }
}

/// Claims recorded for an applied step from `source` to `target`.
pub fn step_assertions(kind: StepKind, source: &str, target: &str) -> Vec<Assertion> {
    let cor = kind.citation();
    let claim = |text: String, theorem: Citation| Assertion {
        claim: text,
        citations: vec![cor, theorem],
    };
    vec![
        claim(format!("D_sg({source}) ≃ D_sg({target})"), Citation::SingularEquivalence),
        claim(
            format!("Gproj-stable({source}) ≃ Gproj-stable({target})"),
            Citation::GprojEquivalence,
        ),
        claim(format!("D_def({source}) ≃ D_def({target})"), Citation::GprojEquivalence),
        claim(
            format!("{source} Gorenstein ⇔ {target} Gorenstein"),
            Citation::GorensteinTransfer,
        ),
        claim(format!("GSC({source}) ⇔ GSC({target})"), Citation::SymmetryConjectureTransfer),
        claim(format!("ARC({source}) ⇔ ARC({target})"), Citation::ConjectureTransfer),
        claim(format!("GPC({source}) ⇔ GPC({target})"), Citation::ConjectureTransfer),
    ]
}

/// Executes a step without checking its conditions.
pub fn execute(c: &Certified, spec: &StepSpec) -> Result<Presentation, ReductionError> {
    let a = &c.algebra;
    Ok(match spec {
        StepSpec::RemoveArrow(x) => quotient_by_arrow(&c.presentation, *x)?,
        StepSpec::RemoveVertices(vs) => {
            let keep = (0..a.num_vertices()).filter(|v| !vs.contains(v));
            let e = IdempotentSpec::new(keep, a.num_vertices(), false)?;
            recover_presentation(&corner_algebra(a, &e)?.algebra)?
        }
        StepSpec::Corner(e) => recover_presentation(&corner_algebra(a, e)?.algebra)?,
    })
}

/// Context for evaluating one step inside a trace.
pub struct StepContext<'a> {
    pub config: &'a SearchConfig,
    pub jmax: usize,
    pub gorenstein_before: GorensteinVerdict,
    pub source_name: String,
    pub target_name: String,
}

/// Checks the conditions of a step, applies it when they hold and records
/// the EHI sample and the Gorenstein cross-check.
pub fn evaluate_step(
    c: &Certified,
    spec: &StepSpec,
    ctx: &StepContext<'_>,
) -> Result<(ReductionStep, Option<Certified>), ReductionError> {
    let a = &c.algebra;
    let q = c.presentation.quiver();
    let mut alarms = Vec::new();
    let (kind, parameters, mut side_conditions, admitted, corner_e) = match spec {
        StepSpec::RemoveArrow(x) => {
            let space = minimal_relation_space(c);
            let avoidable = !arrow_occurs_in_every_min_genset(&space, *x, q.num_arrows())?;
            (
                StepKind::ArrowRemoval,
                vec![q.arrow(*x).label.clone()],
                vec![SideCondition::structural(
                    "arrow avoided by a minimal generating set",
                    avoidable,
                )],
                avoidable,
                None,
            )
        }
        StepSpec::RemoveVertices(vs) => {
            let candidates = vertex_candidates(c);
            let free = !vs.is_empty() && vs.iter().all(|v| candidates.contains(v)) && vs.len() < a.num_vertices();
            let keep = (0..a.num_vertices()).filter(|v| !vs.contains(v));
            let e = IdempotentSpec::new(keep, a.num_vertices(), false)?;
            let mut conds = vec![SideCondition::structural("no minimal relation starts or ends here", free)];
            let ic = idempotent_conditions(a, &e, ctx.config)?;
            conds.extend(ic.side_conditions());
            if free && ic.inconsistent() {
                alarms.push("the two equivalent corner conditions disagree".into());
            }
            if free && !ic.admitted() && ic.refuted() {
                alarms.push("vertex removal does not satisfy the corner conditions".into());
            }
            (
                StepKind::VertexRemoval,
                vs.iter().map(|&v| q.vertices()[v].clone()).collect(),
                conds,
                free,
                Some(e),
            )
        }
        StepSpec::Corner(e) => {
            let ic = idempotent_conditions(a, e, ctx.config)?;
            if ic.inconsistent() {
                alarms.push("the two equivalent corner conditions disagree".into());
            }
            (
                StepKind::IdempotentReduction,
                e.vertices().iter().map(|&v| a.vertex_labels()[v].clone()).collect(),
                ic.side_conditions(),
                ic.admitted(),
                Some(e.clone()),
            )
        }
    };
    let mut step = ReductionStep {
        kind,
        parameters,
        side_conditions: Vec::new(),
        applied: false,
        t_obs: None,
        ehi: None,
        gorenstein_before: ctx.gorenstein_before,
        gorenstein_after: None,
        assertions: Vec::new(),
        result: None,
        alarms: Vec::new(),
    };
    std::mem::swap(&mut step.side_conditions, &mut side_conditions);
    if !admitted {
        step.alarms = alarms;
        return Ok((step, None));
    }
    let next = execute(c, spec)?.certify(None)?;
    if let Some(e) = &corner_e {
        let samples = simples_in(a, e)?;
        let table = ehi_sample_check(a, e, ctx.jmax, &samples, ctx.config)?;
        if table.t_obs.is_none() {
            alarms.push(format!("sampled Ext dimensions disagree up to degree {}", ctx.jmax));
        }
        step.t_obs = table.t_obs;
        step.ehi = Some(table);
    }
    let after = gorenstein_test(&next.algebra, ctx.config)?;
    if let (Some(x), Some(y)) = (ctx.gorenstein_before.is_gorenstein(), after.is_gorenstein()) {
        if x != y {
            alarms.push("Gorensteinness differs across the step".into());
        }
    }
    step.applied = true;
    step.gorenstein_after = Some(after);
    step.assertions = step_assertions(kind, &ctx.source_name, &ctx.target_name);
    step.result = Some(crate::presentation::serialize_presentation(&next.presentation));
    step.alarms = alarms;
    Ok((step, Some(next)))
}

/// Checks the conditions of a step and applies it, failing when they are
/// not certified.
pub fn apply_step(
    c: &Certified,
    spec: &StepSpec,
    ctx: &StepContext<'_>,
) -> Result<(ReductionStep, Certified), ReductionError> {
    match evaluate_step(c, spec, ctx)? {
        (step, Some(next)) => Ok((step, next)),
        (step, None) => {
            let failed: Vec<&str> = step
                .side_conditions
                .iter()
                .filter(|s| !s.is_certified())
                .map(|s| s.name.as_str())
                .collect();
            Err(ReductionError::SideConditionNotCertified(failed.join(", ")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangularSide {
    /// Keep `A` in `[[A, M], [0, B]]`: needs `gl B < ∞` and `pd_A M < ∞`.
    KeepA,
    /// Keep `B`: needs `gl A < ∞` and `pd_{B^op} M < ∞`.
    KeepB,
}

/// A triangular corner step on `T = [[A, M], [0, B]]`. The bimodule
/// conditions are read off `T`: `e_A T = A ⊕ M` as a left `A`-module and
/// `T e_B = M ⊕ B` as a right `B`-module.
pub fn triangular_step(
    a: &BasedAlgebra,
    b: &BasedAlgebra,
    m: &Bimodule,
    side: TriangularSide,
    config: &SearchConfig,
) -> Result<(ReductionStep, Option<Presentation>), ReductionError> {
    let t = Arc::new(triangular_algebra(a, b, m)?);
    let na = a.num_vertices();
    let n = t.num_vertices();
    let ea = IdempotentSpec::new(0..na, n, false)?;
    let eb = IdempotentSpec::new(na..n, n, false)?;
    let (kind, keep, other) = match side {
        TriangularSide::KeepA => (StepKind::TriangularCornerA, &ea, &eb),
        TriangularSide::KeepB => (StepKind::TriangularCornerB, &eb, &ea),
    };
    let other_alg = corner_algebra(&t, other)?.algebra;
    let gl = global_dimension(&other_alg, config)?;
    let ic = idempotent_conditions(&t, keep, config)?;
    let (gl_name, pd_name, pd) = match side {
        TriangularSide::KeepA => ("gl B", "pd_A M", ic.pd_corner_ea),
        TriangularSide::KeepB => ("gl A", "pd_{B^op} M", ic.pd_corner_op_ae),
    };
    let side_conditions = vec![SideCondition::dimension(gl_name, gl), SideCondition::dimension(pd_name, pd)];
    let applied = side_conditions.iter().all(SideCondition::is_certified);
    let gor = gorenstein_test(&t, config)?;
    let mut step = ReductionStep {
        kind,
        parameters: keep.vertices().iter().map(|&v| t.vertex_labels()[v].clone()).collect(),
        side_conditions,
        applied,
        t_obs: None,
        ehi: None,
        gorenstein_before: gor,
        gorenstein_after: None,
        assertions: Vec::new(),
        result: None,
        alarms: Vec::new(),
    };
    if !applied {
        return Ok((step, None));
    }
    let core = recover_presentation(&corner_algebra(&t, keep)?.algebra)?;
    let after = gorenstein_test(&core.certify(None)?.algebra, config)?;
    if let (Some(x), Some(y)) = (gor.is_gorenstein(), after.is_gorenstein()) {
        if x != y {
            step.alarms.push("Gorensteinness differs across the step".into());
        }
    }
    step.gorenstein_after = Some(after);
    step.assertions = step_assertions(kind, "T", "core");
    step.result = Some(crate::presentation::serialize_presentation(&core));
    Ok((step, Some(core)))
}
