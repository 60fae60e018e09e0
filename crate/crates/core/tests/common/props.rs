//! Checks shared by the property suites and the acceptance run. Each takes
//! a seed, builds its random inputs deterministically and reports the first
//! violation.

use std::sync::{Arc, OnceLock};

use gored::field::{ExactMatrix, FieldSpec};
use gored::gproj::gproj_test;
use gored::homology::{ext_dim, ext_dims, min_resolution, pd_bounded, perp_test, DimVerdict, SearchConfig};
use gored::module_cat::{
    dual, random_module, random_short_exact_sequence, syzygy, Module, Morphism, ShortExactSequence,
};
use gored::presentation::{corner_algebra, BasedAlgebra, Certified, Corner, IdempotentSpec};
use gored::reduction::{ehi_sample_check, execute, simples_in, StepSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn cfg() -> SearchConfig {
    SearchConfig::with_bound(20)
}

pub struct Fixtures {
    pub algebras: Vec<Certified>,
    /// `(A, corner, t)` for the corner-functor checks, with `t` observed
    /// over every simple of `A` rather than only those supported on `e`.
    pub corners: Vec<(Arc<BasedAlgebra>, Corner, usize)>,
}

pub fn ex47_b() -> Certified {
    let a = super::load("ex47.alg");
    let v = |l: &str| a.algebra.vertex_index(l).unwrap();
    execute(&a, &StepSpec::RemoveVertices(vec![v("3"), v("5")]))
        .unwrap()
        .certify(None)
        .unwrap()
}

pub fn fixtures() -> &'static Fixtures {
    static F: OnceLock<Fixtures> = OnceLock::new();
    F.get_or_init(|| {
        let mut algebras: Vec<Certified> = super::FIXTURES.iter().map(|f| super::load(f)).collect();
        let b = ex47_b();
        algebras.push(b.clone());
        let a46 = algebras[0].clone();
        let mut corners = Vec::new();
        for (c, labels) in [(&a46, ["1", "4"]), (&b, ["2", "4"])] {
            let e = IdempotentSpec::from_labels(&c.algebra, &labels, false).unwrap();
            let n = c.algebra.num_vertices();
            let all = IdempotentSpec::new(0..n, n, true).unwrap();
            let samples = simples_in(&c.algebra, &all).unwrap();
            let table = ehi_sample_check(&c.algebra, &e, 12, &samples, &cfg()).unwrap();
            let corner = corner_algebra(&c.algebra, &e).unwrap();
            corners.push((c.algebra.clone(), corner, table.t_obs.unwrap()));
        }
        Fixtures { algebras, corners }
    })
}

pub fn algebra(i: usize) -> Arc<BasedAlgebra> {
    let f = fixtures();
    f.algebras[i % f.algebras.len()].algebra.clone()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corner_map(f: &Morphism, corner: &Corner) -> Result<Morphism, String> {
    let blocks = corner.vertex_map.iter().map(|&v| f.block(v).clone()).collect();
    let src = f.source().corner_module(corner).map_err(|e| e.to_string())?;
    let tgt = f.target().corner_module(corner).map_err(|e| e.to_string())?;
    Morphism::new(src, tgt, blocks).map_err(|e| e.to_string())
}

fn random_matrix(field: FieldSpec, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExactMatrix {
    ExactMatrix::from_fn(field, rows, cols, |_, _| field.random_small(rng, 2))
}

/// `M` with every vertex space re-based by a random invertible matrix.
fn base_change(m: &Module, rng: &mut ChaCha8Rng) -> Module {
    let field = m.field();
    let p: Vec<ExactMatrix> = m
        .dims()
        .iter()
        .map(|&d| loop {
            let x = random_matrix(field, rng, d, d);
            if x.is_invertible() {
                break x;
            }
        })
        .collect();
    let a = m.algebra();
    let blocks = (0..a.dim())
        .map(|b| {
            let (s, t) = (a.source(b), a.target(b));
            p[t].mul(m.block(b)).unwrap().mul(&p[s].inverse().unwrap()).unwrap()
        })
        .collect();
    Module::new(a.clone(), m.dims().to_vec(), blocks).unwrap()
}

pub fn rank_nullity(seed: u64) -> Check {
    let mut r = rng(seed);
    let field = if r.gen() { FieldSpec::prime(7).unwrap() } else { FieldSpec::Rationals };
    let (rows, cols) = (r.gen_range(0..7), r.gen_range(0..7));
    let m = random_matrix(field, &mut r, rows, cols);
    let k = m.kernel_basis();
    ensure(m.rank() + k.cols() == cols && m.mul(&k).unwrap().is_zero(), || {
        format!("rank {} + nullity {} != {cols}", m.rank(), k.cols())
    })
}

pub fn dimension_shift(seed: u64, fixture: usize) -> Check {
    let a = algebra(fixture);
    let mut r = rng(seed);
    let m = random_module(&a, &mut r).unwrap();
    let n = random_module(&a, &mut r).unwrap();
    let omega = syzygy(&m, 1).unwrap();
    for j in 1..4 {
        let (x, y) = (ext_dim(&m, &n, j + 1, &cfg()).unwrap(), ext_dim(&omega, &n, j, &cfg()).unwrap());
        ensure(x == y, || format!("Ext^{}(M,N) = {x} but Ext^{j}(ΩM,N) = {y}", j + 1))?;
    }
    Ok(())
}

pub fn ext_duality(seed: u64, fixture: usize) -> Check {
    let a = algebra(fixture);
    let mut r = rng(seed);
    let m = random_module(&a, &mut r).unwrap();
    let n = random_module(&a, &mut r).unwrap();
    let left = ext_dims(&m, &n, 6, &cfg()).unwrap();
    let right = ext_dims(&dual(&n), &dual(&m), 6, &cfg()).unwrap();
    ensure(left == right, || format!("{left:?} != {right:?}"))
}

pub fn betti_invariance(seed: u64, fixture: usize) -> Check {
    let a = algebra(fixture);
    let mut r = rng(seed);
    let m = random_module(&a, &mut r).unwrap();
    let n = base_change(&m, &mut r);
    let (rm, rn) = (min_resolution(&m, 5, &cfg()).unwrap(), min_resolution(&n, 5, &cfg()).unwrap());
    for k in 0..=5 {
        ensure(rm.betti(k) == rn.betti(k), || format!("Betti numbers differ in degree {k}"))?;
    }
    Ok(())
}

pub fn hom_from_projective(seed: u64, fixture: usize) -> Check {
    let a = algebra(fixture);
    let mut r = rng(seed);
    let m = random_module(&a, &mut r).unwrap();
    let v = r.gen_range(0..a.num_vertices());
    let p = Module::projective(a.clone(), v).unwrap();
    let h = ext_dim(&p, &m, 0, &cfg()).unwrap();
    ensure(h == m.dims()[v], || format!("dim Hom(P{v}, M) = {h}, dim e_v M = {}", m.dims()[v]))
}

pub fn corner_exactness(seed: u64, which: usize) -> Check {
    let (a, corner, _) = &fixtures().corners[which % 2];
    let seq = random_short_exact_sequence(a, &mut rng(seed)).unwrap();
    ensure(seq.left().dim() + seq.right().dim() == seq.middle().dim(), || "dimensions do not add".into())?;
    ShortExactSequence::new(corner_map(&seq.inclusion, corner)?, corner_map(&seq.projection, corner)?)
        .map(|_| ())
        .map_err(|e| format!("corner image not exact: {e}"))
}

/// `pd_{eAe}(eX) ≤ max(t, pd_A X)`.
pub fn corner_pd_bound(seed: u64, which: usize) -> Check {
    let (a, corner, t) = &fixtures().corners[which % 2];
    let x = random_module(a, &mut rng(seed)).unwrap();
    if let DimVerdict::Finite { value, .. } = pd_bounded(&x, &cfg()).unwrap() {
        let pd = pd_bounded(&x.corner_module(corner).unwrap(), &cfg()).unwrap();
        ensure(pd.finite_value().is_some_and(|d| d <= value.max(*t)), || {
            format!("{pd:?} against pd_A X = {value}, t = {t}")
        })?;
    }
    Ok(())
}

fn perp_sample(seed: u64, which: usize) -> (Module, &'static Corner, usize) {
    let (a, corner, t) = &fixtures().corners[which % 2];
    let mut r = rng(seed);
    let shift = r.gen_range(0..4);
    (syzygy(&random_module(a, &mut r).unwrap(), shift).unwrap(), corner, *t)
}

/// For `X ∈ ⊥A`, `Ω^t(eX) ∈ ⊥(eAe)`.
pub fn corner_perp(seed: u64, which: usize) -> Check {
    let (x, corner, t) = perp_sample(seed, which);
    if !x.is_zero() && perp_test(&x, &cfg()).unwrap().is_yes() {
        let y = syzygy(&x.corner_module(corner).unwrap(), t).unwrap();
        ensure(perp_test(&y, &cfg()).unwrap().is_yes(), || "Ω^t(eX) not in ⊥(eAe)".into())?;
    }
    Ok(())
}

/// For Gorenstein projective `X`, `Ω^t(eX)` is Gorenstein projective.
pub fn corner_gproj(seed: u64, which: usize) -> Check {
    let (x, corner, t) = perp_sample(seed, which);
    if !x.is_zero() && gproj_test(&x, &cfg()).unwrap().is_gproj() {
        let y = syzygy(&x.corner_module(corner).unwrap(), t).unwrap();
        ensure(y.is_zero() || gproj_test(&y, &cfg()).unwrap().is_gproj(), || {
            "Ω^t(eX) not Gorenstein projective".into()
        })?;
    }
    Ok(())
}
