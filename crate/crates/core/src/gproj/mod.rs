//! Gorenstein projectivity through the totally reflexive criterion:
//! `M ∈ ⊥A`, `M* ∈ ⊥A^op` and `M → M**` invertible. A positive verdict can
//! be turned into an explicit complete resolution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{analyse, perp_test, DimVerdict, PerpVerdict, Resolution, SearchConfig};
use crate::module_cat::{evaluation_map, star_dual, Module, ModuleError, Morphism, StarDual};

#[derive(Debug, Error)]
pub enum GprojError {
    #[error("module is not certified Gorenstein projective")]
    NotCertified,
    #[error("spliced complex fails a check: {0}")]
    NotExact(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NotGprojWitness {
    /// `Ext^degree(M, A) ≠ 0`.
    ExtNonzero { degree: usize },
    /// `Ext^degree(M*, A) ≠ 0` over the opposite algebra.
    DualExtNonzero { degree: usize },
    /// `M → M**` is not bijective; `rank` is the rank of the evaluation map.
    EvaluationNotInvertible { rank: usize, dim: usize, double_dual_dim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GprojVerdict {
    CertifiedGproj { perp: PerpVerdict, dual_perp: PerpVerdict },
    CertifiedNotGproj { witness: NotGprojWitness },
    Undetermined { bound: usize },
}

impl GprojVerdict {
    pub fn is_gproj(&self) -> bool {
        matches!(self, GprojVerdict::CertifiedGproj { .. })
    }

    pub fn is_not_gproj(&self) -> bool {
        matches!(self, GprojVerdict::CertifiedNotGproj { .. })
    }
}

/// Checks (a) `M ∈ ⊥A`, (b) `M* ∈ ⊥A^op`, (c) `M → M**` invertible, and
/// reports the first certified failure in that order.
pub fn gproj_test(m: &Module, config: &SearchConfig) -> Result<GprojVerdict, ModuleError> {
    let perp = perp_test(m, config)?;
    if let PerpVerdict::CertifiedNo { degree } = perp {
        return Ok(GprojVerdict::CertifiedNotGproj {
            witness: NotGprojWitness::ExtNonzero { degree },
        });
    }
    let (first, _, ev) = evaluation_map(m)?;
    let dual_perp = perp_test(&first.module, config)?;
    if let PerpVerdict::CertifiedNo { degree } = dual_perp {
        return Ok(GprojVerdict::CertifiedNotGproj {
            witness: NotGprojWitness::DualExtNonzero { degree },
        });
    }
    if !ev.is_isomorphism() {
        return Ok(GprojVerdict::CertifiedNotGproj {
            witness: NotGprojWitness::EvaluationNotInvertible {
                rank: ev.rank(),
                dim: m.dim(),
                double_dual_dim: ev.target().dim(),
            },
        });
    }
    Ok(if perp.is_yes() && dual_perp.is_yes() {
        GprojVerdict::CertifiedGproj { perp, dual_perp }
    } else {
        GprojVerdict::Undetermined { bound: config.bound }
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchRow {
    pub label: String,
    pub projective: bool,
    pub perp: PerpVerdict,
    pub gproj: GprojVerdict,
}

/// Verdicts for a list of labelled modules, in input order.
pub fn perp_and_gproj_batch(
    modules: &[(String, Module)],
    config: &SearchConfig,
) -> Result<Vec<BatchRow>, ModuleError> {
    modules
        .iter()
        .map(|(label, m)| {
            let (_, pd) = analyse(m, config)?;
            Ok(BatchRow {
                label: label.clone(),
                projective: matches!(pd, DimVerdict::Finite { value: 0, .. }),
                perp: perp_test(m, config)?,
                gproj: gproj_test(m, config)?,
            })
        })
        .collect()
}

/// `f*: Y* → X*`, `ψ ↦ ψ ∘ f`, between the star duals.
pub fn star_dual_map(f: &Morphism, x: &StarDual, y: &StarDual) -> Result<Morphism, ModuleError> {
    let field = f.source().field();
    let blocks = (0..x.components.len())
        .map(|i| {
            let (cx, cy) = (&x.components[i], &y.components[i]);
            let mut block = crate::field::ExactMatrix::zeros(field, cx.dim(), cy.dim());
            for k in 0..cy.dim() {
                let psi = cy.basis_element(k);
                let pulled = f.then(&psi)?;
                let c = cx.coords(&pulled).expect("composite is a homomorphism");
                for (row, s) in c.into_iter().enumerate() {
                    block.set(row, k, s);
                }
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    Morphism::new(y.module.clone(), x.module.clone(), blocks)
}

/// A window `C_lo → ... → C_hi` of a complete resolution. Cohomological
/// indexing: `terms[k]` sits in degree `k - left`, so `P_0` is at degree
/// `-1` and `Q_0*` at degree `0`; the module is the image of `P_0 → Q_0*`.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    pub terms: Vec<Module>,
    /// `maps[k]: terms[k] → terms[k+1]`.
    pub maps: Vec<Morphism>,
    pub left: usize,
}

impl CompleteResolution {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactness at every interior term.
    pub fn is_exact(&self) -> Result<bool, ModuleError> {
        for k in 1..self.maps.len() {
            let (f, g) = (&self.maps[k - 1], &self.maps[k]);
            if !f.then(g)?.is_zero() || f.rank() + g.rank() != self.terms[k].dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exactness of `Hom(C, A)` at every interior term.
    pub fn is_dual_exact(&self) -> Result<bool, ModuleError> {
        let duals: Vec<StarDual> = self.terms.iter().map(star_dual).collect::<Result<_, _>>()?;
        let maps: Vec<Morphism> = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, f)| star_dual_map(f, &duals[k], &duals[k + 1]))
            .collect::<Result<_, _>>()?;
        for k in 1..maps.len() {
            // dual complex runs backwards: maps[k]* : C_{k+1}* → C_k*, then maps[k-1]*
            let (g, f) = (&maps[k], &maps[k - 1]);
            if !g.then(f)?.is_zero() || f.rank() + g.rank() != duals[k].module.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Splices the minimal resolution `P_•` of `M` with the dual of the minimal
/// resolution `Q_•` of `M*`, through `P_0 ↠ M ≅ M** ↪ Q_0*`. Each tail has
/// `config.bound` terms, so the window has width `2·bound`; exactness and
/// `Hom(-, A)`-exactness are verified on the whole window.
pub fn complete_resolution(m: &Module, config: &SearchConfig) -> Result<CompleteResolution, GprojError> {
    if !gproj_test(m, config)?.is_gproj() {
        return Err(GprojError::NotCertified);
    }
    let width = config.bound.max(1);
    let a = m.algebra().clone();
    let (mstar, _, ev) = evaluation_map(m)?;

    let mut left = Resolution::new(m);
    left.extend(width - 1, config)?;
    let mut right = Resolution::new(&mstar.module);
    right.extend(width - 1, config)?;

    let mut terms = Vec::new();
    let mut maps = Vec::new();

    // left tail P_{w-1} → ... → P_0
    let lcount = left.computed_len();
    for k in (0..lcount).rev() {
        terms.push(left.term(k).expect("computed").clone());
        if k >= 1 {
            maps.push(left.differential(k).expect("computed"));
        }
    }

    // right tail Q_0* → Q_1* → ...
    let rcount = right.computed_len();
    let qduals: Vec<StarDual> = (0..rcount)
        .map(|k| star_dual(right.term(k).expect("computed")))
        .collect::<Result<_, _>>()?;
    let mstar_dual = star_dual(&mstar.module)?;
    if rcount > 0 {
        let eps = right.cover_map(0).expect("computed");
        let eps_star = star_dual_map(&eps, &qduals[0], &mstar_dual)?;
        let splice = match lcount {
            0 => None,
            _ => Some(left.cover_map(0).expect("computed")),
        };
        let q0 = qduals[0].module.clone().rehome(a.clone())?;
        let to_double = Morphism::new(
            ev.target().clone(),
            q0.clone(),
            eps_star.blocks().to_vec(),
        )?;
        if let Some(p0_to_m) = splice {
            maps.push(p0_to_m.then(&ev)?.then(&to_double)?);
        }
        terms.push(q0);
        for k in 1..rcount {
            let d = right.differential(k).expect("computed");
            let dstar = star_dual_map(&d, &qduals[k], &qduals[k - 1])?;
            let src = terms.last().expect("nonempty").clone();
            let tgt = qduals[k].module.clone().rehome(a.clone())?;
            maps.push(Morphism::new(src, tgt.clone(), dstar.blocks().to_vec())?);
            terms.push(tgt);
        }
    }
    let cr = CompleteResolution {
        terms,
        maps,
        left: lcount,
    };
    if !cr.is_exact()? {
        return Err(GprojError::NotExact("complex is not exact".into()));
    }
    if !cr.is_dual_exact()? {
        return Err(GprojError::NotExact("Hom(-, A) of the complex is not exact".into()));
    }
    Ok(cr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use std::sync::Arc;

    fn algebra(text: &str) -> Arc<crate::presentation::BasedAlgebra> {
        parse_presentation(text).unwrap().certify(None).unwrap().algebra
    }

    #[test]
    fn self_injective_simples_are_gproj() {
        let a = algebra("vertex 1\narrow x: 1 -> 1\nrelation x*x\n");
        let cfg = SearchConfig::with_bound(6);
        let s = Module::simple(a.clone(), 0).unwrap();
        assert!(gproj_test(&s, &cfg).unwrap().is_gproj());
        let cr = complete_resolution(&s, &cfg).unwrap();
        assert_eq!(cr.len(), 12);
        assert!(cr.terms.iter().all(|t| t.dim() == 2));
    }

    #[test]
    fn projective_has_trivial_complete_resolution() {
        let a = algebra("vertex 1\nvertex 2\narrow a: 1 -> 2\n");
        let cfg = SearchConfig::with_bound(4);
        let p = Module::projective(a.clone(), 0).unwrap();
        assert!(gproj_test(&p, &cfg).unwrap().is_gproj());
        let cr = complete_resolution(&p, &cfg).unwrap();
        assert_eq!(cr.len(), 2);
        assert!(cr.maps[0].is_isomorphism());
        let s1 = Module::simple(a, 0).unwrap();
        assert!(gproj_test(&s1, &cfg).unwrap().is_not_gproj());
        assert!(matches!(complete_resolution(&s1, &cfg), Err(GprojError::NotCertified)));
    }
}
