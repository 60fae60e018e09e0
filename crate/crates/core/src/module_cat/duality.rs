use std::sync::Arc;

use crate::field::ExactMatrix;
use crate::presentation::BasedAlgebra;

use super::morphism::{hom_space, HomSpace, Morphism};
use super::{Module, ModuleError};

/// `D M = Hom_k(M, k)` over the opposite algebra: blocks are transposed.
pub fn dual(m: &Module) -> Module {
    let op = m.algebra().opposite();
    let blocks = m.blocks().iter().map(ExactMatrix::transpose).collect();
    Module::new(op, m.dims().to_vec(), blocks).expect("the dual of a module is a module")
}

/// `M* = Hom_A(M, A)` as a left `A^op`-module together with the hom spaces
/// `Hom_A(M, A e_i)` that give its vertex components.
#[derive(Clone, Debug)]
pub struct StarDual {
    pub module: Module,
    pub components: Vec<HomSpace>,
}

/// Right multiplication by `b ∈ e_t A e_s` as a map `A e_t → A e_s`.
fn right_multiplication(
    algebra: &Arc<BasedAlgebra>,
    projectives: &[Module],
    b: usize,
) -> Result<Morphism, ModuleError> {
    let a = algebra;
    let (t, s) = (a.target(b), a.source(b));
    let blocks = (0..a.num_vertices())
        .map(|v| {
            let from = a.basis_between(v, t);
            let to = a.basis_between(v, s);
            let mut m = ExactMatrix::zeros(a.field(), to.len(), from.len());
            for (col, &x) in from.iter().enumerate() {
                for (k, c) in a.mul_basis(x, b) {
                    let row = to.iter().position(|y| y == k).expect("graded");
                    m.set(row, col, c.clone());
                }
            }
            m
        })
        .collect();
    Morphism::new(projectives[t].clone(), projectives[s].clone(), blocks)
}

pub fn star_dual(m: &Module) -> Result<StarDual, ModuleError> {
    let a = m.algebra().clone();
    let projectives: Vec<Module> = (0..a.num_vertices())
        .map(|i| Module::projective(a.clone(), i))
        .collect::<Result<_, _>>()?;
    let components: Vec<HomSpace> = projectives
        .iter()
        .map(|p| hom_space(m, p))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = components.iter().map(HomSpace::dim).collect();
    let blocks = (0..a.dim())
        .map(|b| {
            let (t, s) = (a.target(b), a.source(b));
            let rb = right_multiplication(&a, &projectives, b)?;
            let mut block = ExactMatrix::zeros(a.field(), dims[s], dims[t]);
            for k in 0..dims[t] {
                let phi = components[t].basis_element(k);
                let moved = phi.then(&rb)?;
                let c = components[s].coords(&moved).expect("Hom(M, -) is closed under composition");
                for (row, x) in c.into_iter().enumerate() {
                    block.set(row, k, x);
                }
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    let module = Module::new(a.opposite(), dims, blocks)?;
    Ok(StarDual { module, components })
}

/// The canonical map `M → M**`, `m ↦ (φ ↦ φ(m))`, together with `M*` and
/// `M**`.
pub fn evaluation_map(m: &Module) -> Result<(StarDual, StarDual, Morphism), ModuleError> {
    let a = m.algebra().clone();
    let first = star_dual(m)?;
    let second = star_dual(&first.module)?;
    let double = second.module.clone().rehome(a.clone())?;
    let mstar = &first.module;
    let op = mstar.algebra().clone();
    let blocks = (0..a.num_vertices())
        .map(|i| {
            let target_proj = second.components[i].target().clone();
            let mut block = ExactMatrix::zeros(a.field(), double.dims()[i], m.dims()[i]);
            for r in 0..m.dims()[i] {
                // ev_m at vertex t sends φ_k ∈ Hom(M, A e_t) to φ_k(m) ∈ e_i A e_t
                let ev_blocks = (0..op.num_vertices())
                    .map(|t| {
                        let comp = &first.components[t];
                        let mut eb = ExactMatrix::zeros(a.field(), target_proj.dims()[t], comp.dim());
                        for k in 0..comp.dim() {
                            let phi = comp.basis_element(k);
                            for row in 0..target_proj.dims()[t] {
                                eb.set(row, k, phi.block(i).get(row, r).clone());
                            }
                        }
                        eb
                    })
                    .collect();
                let ev = Morphism::new(mstar.clone(), target_proj.clone(), ev_blocks)?;
                let c = second.components[i].coords(&ev).expect("evaluation is a homomorphism");
                for (row, x) in c.into_iter().enumerate() {
                    block.set(row, r, x);
                }
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    let ev = Morphism::new(m.clone(), double, blocks)?;
    Ok((first, second, ev))
}
