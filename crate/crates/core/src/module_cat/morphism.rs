use crate::field::{ColumnSpace, ExactMatrix, Scalar};

use super::{Module, ModuleError};

/// A module homomorphism, stored as one block per vertex
/// (`dim e_v N × dim e_v M`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Module,
    target: Module,
    blocks: Vec<ExactMatrix>,
}

impl Morphism {
    pub fn new(source: Module, target: Module, blocks: Vec<ExactMatrix>) -> Result<Self, ModuleError> {
        let f = Self::unchecked(source, target, blocks)?;
        f.check_intertwines()?;
        Ok(f)
    }

    fn unchecked(source: Module, target: Module, blocks: Vec<ExactMatrix>) -> Result<Self, ModuleError> {
        if !source.algebra.same_as(&target.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        if blocks.len() != source.dims.len() {
            return Err(ModuleError::BadShape("one block per vertex".into()));
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.rows() != target.dims[v] || b.cols() != source.dims[v] {
                return Err(ModuleError::BadShape(format!("block at vertex {v}")));
            }
        }
        Ok(Morphism {
            source,
            target,
            blocks,
        })
    }

    fn check_intertwines(&self) -> Result<(), ModuleError> {
        let a = self.source.algebra.clone();
        for &g in a.generators() {
            let (t, s) = (a.target(g), a.source(g));
            let lhs = self.target.blocks[g].mul(&self.blocks[s])?;
            let rhs = self.blocks[t].mul(&self.source.blocks[g])?;
            if lhs != rhs {
                return Err(ModuleError::NotAMorphism(a.label(g).to_string()));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Module) -> Self {
        let blocks = m.dims.iter().map(|&d| ExactMatrix::identity(m.field(), d)).collect();
        Morphism {
            source: m.clone(),
            target: m.clone(),
            blocks,
        }
    }

    pub fn zero(source: &Module, target: &Module) -> Result<Self, ModuleError> {
        let blocks = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| ExactMatrix::zeros(source.field(), t, s))
            .collect();
        Self::unchecked(source.clone(), target.clone(), blocks)
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn block(&self, v: usize) -> &ExactMatrix {
        &self.blocks[v]
    }

    pub fn blocks(&self) -> &[ExactMatrix] {
        &self.blocks
    }

    /// Matrix on the total vertex-adapted bases.
    pub fn total_matrix(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.source.field(), self.target.dim(), self.source.dim());
        for v in 0..self.blocks.len() {
            m.set_block(self.target.offset(v), self.source.offset(v), &self.blocks[v]);
        }
        m
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism, ModuleError> {
        if self.target != other.source {
            return Err(ModuleError::BadShape("morphisms do not compose".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(f, g)| g.mul(f))
            .collect::<Result<_, _>>()?;
        Self::unchecked(self.source.clone(), other.target.clone(), blocks)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(ExactMatrix::rank).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(ExactMatrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.blocks.iter().all(ExactMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let blocks = self.blocks.iter().map(ExactMatrix::inverse).collect::<Option<Vec<_>>>()?;
        Self::unchecked(self.target.clone(), self.source.clone(), blocks).ok()
    }

    /// Image of the vertex-`v` vector `x`.
    pub fn apply_at(&self, v: usize, x: &[Scalar]) -> Vec<Scalar> {
        let col = ExactMatrix::column_vector(self.source.field(), x.to_vec());
        self.blocks[v].mul(&col).expect("shapes agree").column(0)
    }

    fn flatten(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }
}

/// `Hom_A(M, N)` with an echelon basis; coordinates are read off directly.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: ColumnSpace,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    fn unflatten(&self, v: &[Scalar]) -> Morphism {
        let mut blocks = Vec::with_capacity(self.source.dims.len());
        let mut pos = 0;
        for (&s, &t) in self.source.dims.iter().zip(&self.target.dims) {
            let block = ExactMatrix::from_fn(self.source.field(), t, s, |r, c| v[pos + r * s + c].clone());
            pos += s * t;
            blocks.push(block);
        }
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn basis_element(&self, k: usize) -> Morphism {
        self.unflatten(&self.space.basis().column(k))
    }

    pub fn basis(&self) -> Vec<Morphism> {
        (0..self.dim()).map(|k| self.basis_element(k)).collect()
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> Morphism {
        let col = ExactMatrix::column_vector(self.source.field(), coeffs.to_vec());
        self.unflatten(&self.space.basis().mul(&col).expect("one coefficient per basis element").column(0))
    }

    /// Coordinates of `f` in the basis, `None` if `f` is not in the space.
    pub fn coords(&self, f: &Morphism) -> Option<Vec<Scalar>> {
        self.space.coords(&f.flatten())
    }
}

/// Solves the commutation system `N(g)·f_s = f_t·M(g)` over the generators.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace, ModuleError> {
    if !m.algebra.same_as(&n.algebra) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let a = m.algebra.clone();
    let field = a.field();
    let r = a.num_vertices();
    let mut offsets = Vec::with_capacity(r);
    let mut unknowns = 0;
    for v in 0..r {
        offsets.push(unknowns);
        unknowns += m.dims[v] * n.dims[v];
    }
    let var = |v: usize, row: usize, col: usize| offsets[v] + row * m.dims[v] + col;
    let mut equations: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for &g in a.generators() {
        let (t, s) = (a.target(g), a.source(g));
        let (ng, mg) = (&n.blocks[g], &m.blocks[g]);
        for row in 0..n.dims[t] {
            for col in 0..m.dims[s] {
                let mut eq = Vec::new();
                for k in 0..n.dims[s] {
                    let c = ng.get(row, k);
                    if !c.is_zero() {
                        eq.push((var(s, k, col), c.clone()));
                    }
                }
                for k in 0..m.dims[t] {
                    let c = mg.get(k, col);
                    if !c.is_zero() {
                        eq.push((var(t, row, k), c.neg()));
                    }
                }
                if !eq.is_empty() {
                    equations.push(eq);
                }
            }
        }
    }
    let mut sys = ExactMatrix::zeros(field, equations.len(), unknowns);
    for (i, eq) in equations.iter().enumerate() {
        for (j, c) in eq {
            sys.add_at(i, *j, c);
        }
    }
    let space = if unknowns == 0 {
        ColumnSpace::zero(field, 0)
    } else {
        ColumnSpace::span(&sys.kernel_basis())
    };
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        space,
    })
}

pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<Morphism>, ModuleError> {
    Ok(hom_space(m, n)?.basis())
}

/// Subfamily `U ⊆ M` given by invariant subspaces; the second value is the
/// inclusion.
pub fn submodule(m: &Module, spaces: &[ColumnSpace]) -> Result<(Module, Morphism), ModuleError> {
    let a = m.algebra.clone();
    let dims: Vec<usize> = spaces.iter().map(ColumnSpace::dim).collect();
    let blocks = (0..a.dim())
        .map(|b| {
            let (t, s) = (a.target(b), a.source(b));
            let moved = m.blocks[b].mul(spaces[s].basis())?;
            spaces[t].coords_matrix(&moved).map_err(|_| {
                ModuleError::ActionInconsistent(format!("subspace is not stable under {}", a.label(b)))
            })
        })
        .collect::<Result<Vec<_>, ModuleError>>()?;
    let sub = Module::new(a, dims, blocks)?;
    let incl = spaces.iter().map(|s| s.basis().clone()).collect();
    let incl = Morphism::unchecked(sub.clone(), m.clone(), incl)?;
    Ok((sub, incl))
}

/// `M / U` for invariant subspaces `U_v`; the quotient basis is the set of
/// standard vectors off the pivot rows of `U_v`. Returns the projection.
pub fn quotient(m: &Module, spaces: &[ColumnSpace]) -> Result<(Module, Morphism), ModuleError> {
    let a = m.algebra.clone();
    let field = a.field();
    let comps: Vec<Vec<usize>> = spaces.iter().map(ColumnSpace::complement_rows).collect();
    let proj: Vec<ExactMatrix> = (0..a.num_vertices())
        .map(|v| {
            let mut p = ExactMatrix::zeros(field, comps[v].len(), m.dims[v]);
            for col in 0..m.dims[v] {
                let mut e = vec![field.zero(); m.dims[v]];
                e[col] = field.one();
                let red = spaces[v].reduce(&e);
                for (row, &r) in comps[v].iter().enumerate() {
                    p.set(row, col, red[r].clone());
                }
            }
            p
        })
        .collect();
    let dims: Vec<usize> = comps.iter().map(Vec::len).collect();
    let blocks = (0..a.dim())
        .map(|b| {
            let (t, s) = (a.target(b), a.source(b));
            let lifted = m.blocks[b].select_columns(&comps[s]);
            proj[t].mul(&lifted)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let q = Module::new(a, dims, blocks)?;
    let pi = Morphism::new(m.clone(), q.clone(), proj)?;
    Ok((q, pi))
}

pub fn kernel(f: &Morphism) -> Result<(Module, Morphism), ModuleError> {
    let spaces: Vec<ColumnSpace> = f
        .blocks
        .iter()
        .map(|b| {
            if b.cols() == 0 {
                ColumnSpace::zero(b.field(), 0)
            } else {
                ColumnSpace::span(&b.kernel_basis())
            }
        })
        .collect();
    submodule(&f.source, &spaces)
}

fn image_spaces(f: &Morphism) -> Vec<ColumnSpace> {
    f.blocks
        .iter()
        .map(|b| {
            if b.cols() == 0 {
                ColumnSpace::zero(b.field(), b.rows())
            } else {
                ColumnSpace::span(b)
            }
        })
        .collect()
}

pub fn image(f: &Morphism) -> Result<(Module, Morphism), ModuleError> {
    submodule(&f.target, &image_spaces(f))
}

pub fn cokernel(f: &Morphism) -> Result<(Module, Morphism), ModuleError> {
    quotient(&f.target, &image_spaces(f))
}

/// `0 → left → middle → right → 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub inclusion: Morphism,
    pub projection: Morphism,
}

impl ShortExactSequence {
    pub fn new(inclusion: Morphism, projection: Morphism) -> Result<Self, ModuleError> {
        if inclusion.target != projection.source {
            return Err(ModuleError::NotExact("maps do not compose".into()));
        }
        if !inclusion.is_injective() {
            return Err(ModuleError::NotExact("first map is not injective".into()));
        }
        if !projection.is_surjective() {
            return Err(ModuleError::NotExact("second map is not surjective".into()));
        }
        if !inclusion.then(&projection)?.is_zero() {
            return Err(ModuleError::NotExact("composite is not zero".into()));
        }
        if inclusion.source.dim() + projection.target.dim() != inclusion.target.dim() {
            return Err(ModuleError::NotExact("image differs from kernel".into()));
        }
        Ok(ShortExactSequence { inclusion, projection })
    }

    pub fn left(&self) -> &Module {
        &self.inclusion.source
    }

    pub fn middle(&self) -> &Module {
        &self.inclusion.target
    }

    pub fn right(&self) -> &Module {
        &self.projection.target
    }
}

/// A minimal projective cover `P ↠ M`.
///
/// `P = ⊕_u P(vertices[u])`; summand `u` sends `e_{vertices[u]}` to the
/// standard basis vector `tops[u]` of `e_{vertices[u]} M`, chosen off the
/// pivot rows of `rad M`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub projective: Module,
    pub map: Morphism,
    pub vertices: Vec<usize>,
    pub tops: Vec<usize>,
}

pub fn projective_cover(m: &Module) -> Result<Cover, ModuleError> {
    let a = m.algebra.clone();
    let rad = m.radical();
    let mut vertices = Vec::new();
    let mut tops = Vec::new();
    for (v, r) in rad.iter().enumerate() {
        for row in r.complement_rows() {
            vertices.push(v);
            tops.push(row);
        }
    }
    let proj: Vec<Module> = (0..a.num_vertices())
        .map(|v| Module::projective(a.clone(), v))
        .collect::<Result<_, _>>()?;
    let parts: Vec<Module> = vertices.iter().map(|&v| proj[v].clone()).collect();
    let p = Module::direct_sum(a.clone(), &parts)?;
    let blocks = (0..a.num_vertices())
        .map(|t| {
            let mut block = ExactMatrix::zeros(a.field(), m.dims[t], p.dims[t]);
            let mut c0 = 0;
            for (&j, &r) in vertices.iter().zip(&tops) {
                for x in a.basis_between(t, j) {
                    for row in 0..m.dims[t] {
                        block.set(row, c0, m.blocks[x].get(row, r).clone());
                    }
                    c0 += 1;
                }
            }
            block
        })
        .collect();
    let map = Morphism::new(p.clone(), m.clone(), blocks)?;
    debug_assert!(map.is_surjective());
    Ok(Cover {
        projective: p,
        map,
        vertices,
        tops,
    })
}

/// `Ω^k M`; `Ω^0 M = M`.
pub fn syzygy(m: &Module, k: usize) -> Result<Module, ModuleError> {
    let mut cur = m.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = kernel(&projective_cover(&cur)?.map)?.0;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{algebra, DUAL_NUMBERS};
    use super::*;

    const EX46: &str = "vertex 1\nvertex 2\nvertex 3\nvertex 4\n\
        arrow alpha: 1 -> 2\narrow eta: 1 -> 2\narrow beta: 2 -> 4\narrow gamma: 1 -> 3\n\
        arrow delta: 3 -> 4\narrow eps: 4 -> 4\n\
        relation eps*eps\nrelation beta*eta\nrelation beta*alpha - delta*gamma\n";

    #[test]
    fn hom_dimensions() {
        let a = algebra(DUAL_NUMBERS);
        let p = Module::projective(a.clone(), 0).unwrap();
        let s = Module::simple(a.clone(), 0).unwrap();
        assert_eq!(hom_space(&p, &p).unwrap().dim(), 2);
        assert_eq!(hom_space(&p, &s).unwrap().dim(), 1);
        assert_eq!(hom_space(&s, &p).unwrap().dim(), 1);
        let b = algebra(EX46);
        let s1 = Module::simple(b.clone(), 0).unwrap();
        let s2 = Module::simple(b.clone(), 1).unwrap();
        assert_eq!(hom_space(&s1, &s2).unwrap().dim(), 0);
    }

    #[test]
    fn kernel_of_cover_of_s4() {
        let a = algebra(EX46);
        let s4 = Module::simple(a.clone(), 3).unwrap();
        let cover = projective_cover(&s4).unwrap();
        assert_eq!(cover.projective.dim(), 2);
        let (k, incl) = kernel(&cover.map).unwrap();
        assert_eq!(k.dims(), &[0, 0, 0, 1]);
        let seq = ShortExactSequence::new(incl, cover.map.clone()).unwrap();
        assert_eq!(seq.left().dim() + seq.right().dim(), seq.middle().dim());
    }

    #[test]
    fn trivial_kernels_and_cokernels() {
        let a = algebra(EX46);
        let p1 = Module::projective(a.clone(), 0).unwrap();
        assert!(kernel(&Morphism::identity(&p1)).unwrap().0.is_zero());
        let z = Module::zero(a.clone());
        let (c, _) = cokernel(&Morphism::zero(&z, &p1).unwrap()).unwrap();
        assert_eq!(c, p1);
        assert!(syzygy(&p1, 1).unwrap().is_zero());
        let cover = projective_cover(&p1).unwrap();
        assert_eq!(cover.projective, p1);
    }

    #[test]
    fn dual_numbers_syzygies_are_simple() {
        let a = algebra(DUAL_NUMBERS);
        let s = Module::simple(a, 0).unwrap();
        for k in 1..4 {
            assert_eq!(syzygy(&s, k).unwrap(), s);
        }
    }
}
