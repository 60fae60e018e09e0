use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};

use super::morphism::{hom_space, Morphism};
use super::{Module, ModuleError};

#[derive(Clone, Debug)]
pub enum IsoResult {
    /// Certified by an invertible homomorphism.
    Yes(Morphism),
    /// Certified by a distinguishing invariant or an exhaustive search.
    No(String),
    Unknown,
}

impl IsoResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoResult::Yes(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoConfig {
    pub seed: u64,
    /// Random combinations tried before giving up.
    pub random_trials: usize,
    /// Largest number of coefficient vectors enumerated over a prime field.
    pub enumeration_budget: u64,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig {
            seed: 0,
            random_trials: 64,
            enumeration_budget: 1 << 16,
        }
    }
}

const MAX_ENUMERATED_DIM: usize = 12;

pub fn is_isomorphic(m: &Module, n: &Module, config: &IsoConfig) -> Result<IsoResult, ModuleError> {
    if !m.algebra().same_as(n.algebra()) {
        return Err(ModuleError::AlgebraMismatch);
    }
    if m.dims() != n.dims() {
        return Ok(IsoResult::No("dimension vectors differ".into()));
    }
    if m == n {
        return Ok(IsoResult::Yes(Morphism::identity(m)));
    }
    if m.radical_series_dims() != n.radical_series_dims() {
        return Ok(IsoResult::No("radical layers differ".into()));
    }
    if m.socle_dims() != n.socle_dims() {
        return Ok(IsoResult::No("socles differ".into()));
    }
    let hom = hom_space(m, n)?;
    let dims = [
        hom_space(m, m)?.dim(),
        hom.dim(),
        hom_space(n, m)?.dim(),
        hom_space(n, n)?.dim(),
    ];
    if dims.iter().any(|&d| d != dims[0]) {
        return Ok(IsoResult::No(format!("hom dimensions differ: {dims:?}")));
    }
    let d = hom.dim();
    for k in 0..d {
        let f = hom.basis_element(k);
        if f.is_isomorphism() {
            return Ok(IsoResult::Yes(f));
        }
    }
    let field = m.field();
    if let FieldSpec::Prime(p) = field {
        let total = (p as u64).checked_pow(d as u32);
        if d <= MAX_ENUMERATED_DIM && total.is_some_and(|t| t <= config.enumeration_budget) {
            let mut coeffs = vec![0u32; d];
            loop {
                let mut i = 0;
                while i < d && coeffs[i] + 1 == p {
                    coeffs[i] = 0;
                    i += 1;
                }
                if i == d {
                    break;
                }
                coeffs[i] += 1;
                let xs: Vec<Scalar> = coeffs.iter().map(|&c| field.from_i64(c as i64)).collect();
                let f = hom.combination(&xs);
                if f.is_isomorphism() {
                    return Ok(IsoResult::Yes(f));
                }
            }
            return Ok(IsoResult::No("exhaustive search found no invertible map".into()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_trials {
        let xs: Vec<Scalar> = (0..d).map(|_| field.random_small(&mut rng, 3)).collect();
        let f = hom.combination(&xs);
        if f.is_isomorphism() {
            return Ok(IsoResult::Yes(f));
        }
    }
    Ok(IsoResult::Unknown)
}

#[cfg(test)]
mod tests {
    use super::super::morphism::syzygy;
    use super::super::tests::{algebra, DUAL_NUMBERS};
    use super::*;
    use crate::field::ExactMatrix;
    use crate::presentation::parse_presentation;

    #[test]
    fn syzygy_of_simple_is_simple() {
        let a = algebra(DUAL_NUMBERS);
        let s = Module::simple(a.clone(), 0).unwrap();
        let om = syzygy(&s, 1).unwrap();
        let r = is_isomorphic(&om, &s, &IsoConfig::default()).unwrap();
        let IsoResult::Yes(f) = r else { panic!("expected an isomorphism") };
        assert!(f.is_isomorphism());
    }

    #[test]
    fn distinguishes_by_invariants() {
        let a = algebra("vertex 1\nvertex 2\narrow a: 1 -> 2\n");
        let s1 = Module::simple(a.clone(), 0).unwrap();
        let s2 = Module::simple(a.clone(), 1).unwrap();
        assert!(matches!(is_isomorphic(&s1, &s2, &IsoConfig::default()).unwrap(), IsoResult::No(_)));
    }

    #[test]
    fn finds_non_basis_isomorphism_by_enumeration() {
        // two non-identical presentations of the same module over GF(3)
        let p = parse_presentation("field GF(3)\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n")
            .unwrap()
            .certify(None)
            .unwrap();
        let f = p.algebra.field();
        let m1 = Module::from_representation(
            &p,
            vec![1, 1],
            &[ExactMatrix::from_i64_rows(f, &[&[1]]), ExactMatrix::from_i64_rows(f, &[&[1]])],
        )
        .unwrap();
        let m2 = Module::from_representation(
            &p,
            vec![1, 1],
            &[ExactMatrix::from_i64_rows(f, &[&[2]]), ExactMatrix::from_i64_rows(f, &[&[2]])],
        )
        .unwrap();
        let m3 = Module::from_representation(
            &p,
            vec![1, 1],
            &[ExactMatrix::from_i64_rows(f, &[&[1]]), ExactMatrix::from_i64_rows(f, &[&[2]])],
        )
        .unwrap();
        assert!(is_isomorphic(&m1, &m2, &IsoConfig::default()).unwrap().is_yes());
        assert!(matches!(is_isomorphic(&m1, &m3, &IsoConfig::default()).unwrap(), IsoResult::No(_)));
    }
}
