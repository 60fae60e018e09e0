//! Quivers with relations, their rewriting systems and normal-form bases, and
//! the constructions that produce new algebras from old ones.

mod algebra;
mod construct;
mod parse;
mod quiver;
mod rewrite;

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, FieldSpec};

pub use algebra::{BasedAlgebra, Product};
pub use construct::{
    arrow_occurs_in_every_min_genset, corner_algebra, minimal_relation_space, opposite,
    quotient_by_arrow, recover_presentation, triangular_algebra, Bimodule, Corner,
    IdempotentSpec, RelationSpace,
};
pub use parse::{parse_poly, parse_presentation, serialize_presentation};
pub use quiver::{Arrow, Path, PathPoly, Quiver};
pub use rewrite::{basis_order, CompletionStats, ReductionSystem, Rule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("relation is not a combination of parallel paths: {0}")]
    NonParallelRelation(String),
    #[error("relation term is not in the square of the arrow ideal: {0}")]
    NotAdmissibleRelation(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("label `{0}` declared twice")]
    DuplicateLabel(String),
    #[error("`{0}` is not a valid label")]
    BadLabel(String),
    #[error("arrows `{0}` do not compose")]
    NotComposable(String),
    #[error("completion needs a rule with tip `{tip}` longer than the degree cap {cap}")]
    CompletionOverflow { cap: usize, tip: String },
    #[error("normal-form paths survive at length {cap}; the ideal is not admissible up to this cap")]
    NotAdmissibleUpToCap { cap: usize },
    #[error("algebra is not basic: {0}")]
    NotBasic(String),
    #[error("inconsistent algebra data: {0}")]
    InvalidAlgebra(String),
    #[error("incompatible bimodule actions: {0}")]
    IncompatibleActions(String),
    #[error("invalid idempotent: {0}")]
    BadIdempotent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `kQ/I` given by a quiver and generators of `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    quiver: Quiver,
    field: FieldSpec,
    relations: Vec<PathPoly>,
}

impl Presentation {
    pub fn new(
        quiver: Quiver,
        field: FieldSpec,
        relations: Vec<PathPoly>,
    ) -> Result<Self, PresentationError> {
        for r in &relations {
            field.check_same(&r.field())?;
            if !r.is_parallel() {
                return Err(PresentationError::NonParallelRelation(r.display(&quiver)));
            }
            if r.min_length().is_some_and(|l| l < 2) {
                return Err(PresentationError::NotAdmissibleRelation(r.display(&quiver)));
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Presentation {
            quiver,
            field,
            relations,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn relations(&self) -> &[PathPoly] {
        &self.relations
    }

    /// Same relations read over another field. Fails if a coefficient has no
    /// image there.
    pub fn over_field(&self, field: FieldSpec) -> Result<Self, PresentationError> {
        if field == self.field {
            return Ok(self.clone());
        }
        if self.field != FieldSpec::Rationals {
            return Err(PresentationError::InvalidAlgebra(format!(
                "cannot move coefficients from {} to {field}",
                self.field
            )));
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let mut out = PathPoly::zero(field);
                for (p, c) in r.terms() {
                    let crate::field::Scalar::Q(q) = c else {
                        unreachable!("rational presentation")
                    };
                    out.add_term(p.clone(), &field.from_rational(q)?);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>, PresentationError>>()?;
        Presentation::new(self.quiver.clone(), field, relations)
    }

    /// Completes, certifies admissibility and builds the normal-form algebra.
    ///
    /// With `cap = None` the degree cap is found by probing with growing caps
    /// and then set to three times the nilpotency degree.
    pub fn certify(&self, cap: Option<usize>) -> Result<Certified, PresentationError> {
        let cap = match cap {
            Some(c) => c,
            None => {
                let mut probe = 8;
                loop {
                    let attempt = ReductionSystem::complete(self, probe)
                        .and_then(|s| s.check_admissible(probe));
                    match attempt {
                        Ok(n) => break (3 * n).max(4),
                        Err(e) if probe >= 64 => return Err(e),
                        Err(_) => probe *= 2,
                    }
                }
            }
        };
        let system = ReductionSystem::complete(self, cap)?;
        let nilpotency = system.check_admissible(cap)?;
        let basis: Vec<Path> = system.normal_paths(cap).into_iter().flatten().collect();
        let algebra = BasedAlgebra::from_normal_forms(self, &system, &basis)?;
        Ok(Certified {
            presentation: self.clone(),
            system,
            nilpotency,
            basis,
            algebra: Arc::new(algebra),
        })
    }

    pub fn vertex_labels(&self) -> Vec<String> {
        self.quiver.vertices().to_vec()
    }
}

/// A presentation together with its completed rewriting system, the
/// nilpotency degree `N` (`J^N ⊆ I`) and the normal-form algebra.
#[derive(Clone, Debug)]
pub struct Certified {
    pub presentation: Presentation,
    pub system: ReductionSystem,
    pub nilpotency: usize,
    pub basis: Vec<Path>,
    pub algebra: Arc<BasedAlgebra>,
}

impl Certified {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Completes the relations of `p` with the given degree cap.
pub fn complete_rewrite_system(
    p: &Presentation,
    degree_cap: usize,
) -> Result<ReductionSystem, PresentationError> {
    ReductionSystem::complete(p, degree_cap)
}

/// Nilpotency degree of a completed system, see [`ReductionSystem::check_admissible`].
pub fn check_admissible(system: &ReductionSystem, cap: usize) -> Result<usize, PresentationError> {
    system.check_admissible(cap)
}

pub fn algebra_basis(p: &Presentation) -> Result<Arc<BasedAlgebra>, PresentationError> {
    Ok(p.certify(None)?.algebra)
}
