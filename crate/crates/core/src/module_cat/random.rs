use std::sync::Arc;

use rand::Rng;

use crate::field::{ColumnSpace, ExactMatrix, Scalar};
use crate::presentation::BasedAlgebra;

use super::morphism::{quotient, submodule, ShortExactSequence};
use super::{Module, ModuleError};

/// Subspaces of `M` spanned by `A·x` for the given homogeneous vectors.
fn generated(m: &Module, gens: &[(usize, Vec<Scalar>)]) -> Vec<ColumnSpace> {
    let a = m.algebra();
    let mut cols: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); a.num_vertices()];
    for (v, x) in gens {
        let col = ExactMatrix::column_vector(a.field(), x.clone());
        for b in 0..a.dim() {
            if a.source(b) == *v {
                let y = m.block(b).mul(&col).expect("shapes agree").column(0);
                cols[a.target(b)].push(y);
            }
        }
    }
    cols.into_iter()
        .enumerate()
        .map(|(v, c)| {
            if c.is_empty() {
                ColumnSpace::zero(a.field(), m.dims()[v])
            } else {
                ColumnSpace::span(&ExactMatrix::from_fn(a.field(), m.dims()[v], c.len(), |r, j| c[j][r].clone()))
            }
        })
        .collect()
}

/// `0 → U → P → P/U → 0` with `P` a sum of up to two copies of each
/// indecomposable projective and `U` generated by up to two random
/// homogeneous elements.
pub fn random_short_exact_sequence<R: Rng>(
    algebra: &Arc<BasedAlgebra>,
    rng: &mut R,
) -> Result<ShortExactSequence, ModuleError> {
    let r = algebra.num_vertices();
    let mut parts = Vec::new();
    for v in 0..r {
        for _ in 0..rng.gen_range(0..=2) {
            parts.push(Module::projective(algebra.clone(), v)?);
        }
    }
    if parts.is_empty() {
        parts.push(Module::projective(algebra.clone(), rng.gen_range(0..r))?);
    }
    let p = Module::direct_sum(algebra.clone(), &parts)?;
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let v = rng.gen_range(0..r);
        if p.dims()[v] == 0 {
            continue;
        }
        let x: Vec<Scalar> = (0..p.dims()[v]).map(|_| algebra.field().random_small(rng, 2)).collect();
        gens.push((v, x));
    }
    let spaces = generated(&p, &gens);
    let (_, incl) = submodule(&p, &spaces)?;
    let (_, proj) = quotient(&p, &spaces)?;
    ShortExactSequence::new(incl, proj)
}

/// A random nonzero quotient of a random projective, seeded by `rng`.
pub fn random_module<R: Rng>(algebra: &Arc<BasedAlgebra>, rng: &mut R) -> Result<Module, ModuleError> {
    loop {
        let seq = random_short_exact_sequence(algebra, rng)?;
        if !seq.right().is_zero() {
            return Ok(seq.right().clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::algebra;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_sequences_are_exact() {
        let a = algebra("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow x: 2 -> 2\nrelation x*x\n");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_short_exact_sequence(&a, &mut rng).unwrap();
            assert_eq!(s.left().dim() + s.right().dim(), s.middle().dim());
        }
        assert!(!random_module(&a, &mut rng).unwrap().is_zero());
    }
}
