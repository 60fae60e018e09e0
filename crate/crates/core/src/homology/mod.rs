//! Minimal projective resolutions, Ext dimensions, projective and injective
//! dimensions with periodicity certificates, and membership in `⊥A`.

use serde::{Deserialize, Serialize};

use crate::field::ExactMatrix;
use crate::module_cat::{
    dual, is_isomorphic, kernel, projective_cover, IsoConfig, IsoResult, Module, ModuleError, Morphism,
};

/// Limits shared by every bounded computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub bound: usize,
    pub iso: IsoConfig,
    /// A syzygy larger than this stops the resolution with a lower bound.
    pub max_syzygy_dim: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bound: 20,
            iso: IsoConfig::default(),
            max_syzygy_dim: 600,
        }
    }
}

impl SearchConfig {
    pub fn with_bound(bound: usize) -> Self {
        SearchConfig {
            bound,
            ..Self::default()
        }
    }
}

/// A verified isomorphism `Ω^a M ≅ Ω^b M` with `a < b`.
#[derive(Clone, Debug)]
pub struct PeriodicityCertificate {
    pub a: usize,
    pub b: usize,
    pub iso: Morphism,
}

impl PeriodicityCertificate {
    pub fn period(&self) -> usize {
        self.b - self.a
    }

    /// Re-checks that the stored map is an invertible homomorphism between
    /// the claimed syzygies.
    pub fn verify(&self, res: &Resolution) -> bool {
        self.b < res.syzygies.len()
            && self.iso.source() == &res.syzygies[self.a]
            && self.iso.target() == &res.syzygies[self.b]
            && Morphism::new(self.iso.source().clone(), self.iso.target().clone(), self.iso.blocks().to_vec())
                .is_ok()
            && self.iso.is_isomorphism()
    }
}

/// Outcome of a bounded dimension computation.
///
/// `Finite { value: d }` means the dimension is exactly `d`: `Ω^d M` is
/// projective and `Ω^(d+1) M = 0`. `AtLeast { value }` is a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DimVerdict {
    Finite { value: usize, bound: usize },
    InfiniteCertified { period_start: usize, period_end: usize, bound: usize },
    AtLeast { value: usize, bound: usize },
}

impl DimVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, DimVerdict::Finite { .. })
    }

    pub fn finite_value(&self) -> Option<usize> {
        match self {
            DimVerdict::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, DimVerdict::AtLeast { .. })
    }
}

impl std::fmt::Display for DimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimVerdict::Finite { value, .. } => write!(f, "finite ({value})"),
            DimVerdict::InfiniteCertified { period_start, period_end, .. } => {
                write!(f, "infinite (syzygies {period_start} and {period_end} isomorphic)")
            }
            DimVerdict::AtLeast { value, bound } => write!(f, "at least {value} (bound {bound})"),
        }
    }
}

/// The cover of `Ω^k M`: summand vertices of `P_k`, the chosen top vectors,
/// and the inclusion `Ω^(k+1) M ⊆ P_k`.
#[derive(Clone, Debug)]
struct Term {
    projective: Module,
    vertices: Vec<usize>,
    tops: Vec<usize>,
    inclusion: Morphism,
}

/// A prefix of the minimal projective resolution of a module, grown on
/// demand.
#[derive(Clone, Debug)]
pub struct Resolution {
    syzygies: Vec<Module>,
    terms: Vec<Term>,
    certificate: Option<PeriodicityCertificate>,
    truncated: bool,
}

impl Resolution {
    pub fn new(m: &Module) -> Self {
        Resolution {
            syzygies: vec![m.clone()],
            terms: Vec::new(),
            certificate: None,
            truncated: false,
        }
    }

    pub fn base(&self) -> &Module {
        &self.syzygies[0]
    }

    /// Projective dimension if the computed prefix reaches a zero syzygy.
    pub fn terminated_at(&self) -> Option<usize> {
        let z = self.syzygies.iter().position(Module::is_zero)?;
        Some(z.saturating_sub(1))
    }

    /// Degrees `0..computed_len()` have their projective term available.
    pub fn computed_len(&self) -> usize {
        self.terms.len()
    }

    pub fn syzygy(&self, k: usize) -> Option<&Module> {
        self.syzygies.get(k)
    }

    pub fn certificate(&self) -> Option<&PeriodicityCertificate> {
        self.certificate.as_ref()
    }

    /// True when growth stopped because a syzygy exceeded the size limit.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Computes `P_0, ..., P_n` unless the resolution stops earlier.
    pub fn extend(&mut self, n: usize, config: &SearchConfig) -> Result<(), ModuleError> {
        while self.terms.len() <= n && !self.truncated {
            let k = self.terms.len();
            let omega = &self.syzygies[k];
            if omega.is_zero() {
                break;
            }
            if omega.dim() > config.max_syzygy_dim {
                self.truncated = true;
                break;
            }
            let cover = projective_cover(omega)?;
            let (next, inclusion) = kernel(&cover.map)?;
            self.terms.push(Term {
                projective: cover.projective,
                vertices: cover.vertices,
                tops: cover.tops,
                inclusion,
            });
            self.syzygies.push(next);
        }
        Ok(())
    }

    /// Multiplicity of each indecomposable projective in `P_k`.
    pub fn betti(&self, k: usize) -> Vec<usize> {
        let r = self.base().dims().len();
        let mut out = vec![0; r];
        if let Some(t) = self.terms.get(k) {
            for &v in &t.vertices {
                out[v] += 1;
            }
        }
        out
    }

    pub fn term(&self, k: usize) -> Option<&Module> {
        self.terms.get(k).map(|t| &t.projective)
    }

    /// Looks for the earliest `b` (then earliest `a < b`) with
    /// `Ω^a ≅ Ω^b ≠ 0` among the syzygies computed so far.
    pub fn find_periodicity(&mut self, config: &SearchConfig) -> Result<Option<&PeriodicityCertificate>, ModuleError> {
        if self.certificate.is_none() {
            for b in 1..self.syzygies.len() {
                if let Some(c) = self.periodicity_at(b, config)? {
                    self.certificate = Some(c);
                    break;
                }
            }
        }
        Ok(self.certificate.as_ref())
    }

    fn periodicity_at(&self, b: usize, config: &SearchConfig) -> Result<Option<PeriodicityCertificate>, ModuleError> {
        let mb = &self.syzygies[b];
        if mb.is_zero() {
            return Ok(None);
        }
        for a in 0..b {
            let ma = &self.syzygies[a];
            if ma.dims() != mb.dims() {
                continue;
            }
            if let IsoResult::Yes(iso) = is_isomorphic(ma, mb, &config.iso)? {
                return Ok(Some(PeriodicityCertificate { a, b, iso }));
            }
        }
        Ok(None)
    }

    /// Matrix of `Hom(d_{k+1}, N): Hom(P_k, N) → Hom(P_{k+1}, N)`, where
    /// `Hom(P(i), N) = e_i N`.
    fn hom_differential(&self, k: usize, n: &Module) -> ExactMatrix {
        let a = n.algebra();
        let field = a.field();
        let dn = n.dims();
        let from = &self.terms[k];
        let to = &self.terms[k + 1];
        let col_off: Vec<usize> = from
            .vertices
            .iter()
            .scan(0, |acc, &v| {
                let o = *acc;
                *acc += dn[v];
                Some(o)
            })
            .collect();
        let row_off: Vec<usize> = to
            .vertices
            .iter()
            .scan(0, |acc, &v| {
                let o = *acc;
                *acc += dn[v];
                Some(o)
            })
            .collect();
        let cols: usize = from.vertices.iter().map(|&v| dn[v]).sum();
        let rows: usize = to.vertices.iter().map(|&v| dn[v]).sum();
        let mut out = ExactMatrix::zeros(field, rows, cols);
        for (w, (&i, &r)) in to.vertices.iter().zip(&to.tops).enumerate() {
            // d(gen_w) ∈ (P_k)_i, stacked by the summands of P_k
            let image = from.inclusion.block(i).column(r);
            let mut pos = 0;
            for (u, &j) in from.vertices.iter().enumerate() {
                let elems = a.basis_between(i, j);
                let mut acc = ExactMatrix::zeros(field, dn[i], dn[j]);
                for (x, c) in elems.iter().zip(&image[pos..pos + elems.len()]) {
                    if c.is_zero() {
                        continue;
                    }
                    let nb = n.block(*x);
                    for rr in 0..nb.rows() {
                        for cc in 0..nb.cols() {
                            let e = nb.get(rr, cc);
                            if !e.is_zero() {
                                acc.add_at(rr, cc, &e.mul(c));
                            }
                        }
                    }
                }
                pos += elems.len();
                out.set_block(row_off[w], col_off[u], &acc);
            }
        }
        out
    }

    fn hom_dim(&self, k: usize, n: &Module) -> usize {
        self.terms.get(k).map_or(0, |t| t.vertices.iter().map(|&v| n.dims()[v]).sum())
    }

    /// `dim Ext^j(M, N)` for `j = 0..=jmax`.
    pub fn ext_dims(&mut self, n: &Module, jmax: usize, config: &SearchConfig) -> Result<Vec<usize>, ModuleError> {
        if !self.base().algebra().same_as(n.algebra()) {
            return Err(ModuleError::AlgebraMismatch);
        }
        self.extend(jmax + 1, config)?;
        if self.truncated && self.terms.len() <= jmax + 1 {
            return Err(ModuleError::BadShape(format!(
                "resolution truncated at degree {} by the syzygy size limit",
                self.terms.len()
            )));
        }
        let rank_of = |res: &Self, k: usize| -> usize {
            if k + 1 < res.terms.len() {
                res.hom_differential(k, n).rank()
            } else {
                0
            }
        };
        let mut ranks = Vec::with_capacity(jmax + 1);
        for k in 0..=jmax {
            ranks.push(rank_of(self, k));
        }
        Ok((0..=jmax)
            .map(|j| {
                let prev = if j == 0 { 0 } else { ranks[j - 1] };
                self.hom_dim(j, n) - ranks[j] - prev
            })
            .collect())
    }

    /// The differential `d_k: P_k → P_{k-1}` for `k ≥ 1`.
    pub fn differential(&self, k: usize) -> Option<Morphism> {
        let prev = self.terms.get(k.checked_sub(1)?)?;
        let cover_map = self.cover_map(k)?;
        cover_map.then(&prev.inclusion).ok()
    }

    /// The augmentation `P_k ↠ Ω^k M`.
    pub fn cover_map(&self, k: usize) -> Option<Morphism> {
        let term = self.terms.get(k)?;
        let omega = &self.syzygies[k];
        let a = omega.algebra();
        let blocks = (0..a.num_vertices())
            .map(|t| {
                let mut block = ExactMatrix::zeros(a.field(), omega.dims()[t], term.projective.dims()[t]);
                let mut c0 = 0;
                for (&j, &r) in term.vertices.iter().zip(&term.tops) {
                    for x in a.basis_between(t, j) {
                        for row in 0..omega.dims()[t] {
                            block.set(row, c0, omega.block(x).get(row, r).clone());
                        }
                        c0 += 1;
                    }
                }
                block
            })
            .collect();
        Morphism::new(term.projective.clone(), omega.clone(), blocks).ok()
    }
}

/// Minimal resolution prefix `P_0..P_n` with a periodicity certificate when
/// one exists among `Ω^0..Ω^n`.
pub fn min_resolution(m: &Module, n: usize, config: &SearchConfig) -> Result<Resolution, ModuleError> {
    let mut res = Resolution::new(m);
    res.extend(n, config)?;
    res.syzygies.truncate(n + 1);
    res.terms.truncate(n + 1);
    res.find_periodicity(config)?;
    Ok(res)
}

pub fn ext_dim(m: &Module, n: &Module, j: usize, config: &SearchConfig) -> Result<usize, ModuleError> {
    Ok(Resolution::new(m).ext_dims(n, j, config)?[j])
}

pub fn ext_dims(m: &Module, n: &Module, jmax: usize, config: &SearchConfig) -> Result<Vec<usize>, ModuleError> {
    Resolution::new(m).ext_dims(n, jmax, config)
}

/// Grows the resolution one syzygy at a time until it terminates, becomes
/// periodic, exceeds the size limit, or passes `config.bound`.
pub fn analyse(m: &Module, config: &SearchConfig) -> Result<(Resolution, DimVerdict), ModuleError> {
    let bound = config.bound;
    let mut res = Resolution::new(m);
    if m.is_zero() {
        return Ok((res, DimVerdict::Finite { value: 0, bound }));
    }
    for k in 0..=bound {
        res.extend(k, config)?;
        if res.truncated {
            let value = res.syzygies.len() - 1;
            return Ok((res, DimVerdict::AtLeast { value, bound }));
        }
        let next = &res.syzygies[k + 1];
        if next.is_zero() {
            return Ok((res, DimVerdict::Finite { value: k, bound }));
        }
        if let Some(c) = res.periodicity_at(k + 1, config)? {
            let v = DimVerdict::InfiniteCertified {
                period_start: c.a,
                period_end: c.b,
                bound,
            };
            res.certificate = Some(c);
            return Ok((res, v));
        }
    }
    Ok((res, DimVerdict::AtLeast { value: bound + 1, bound }))
}

pub fn pd_bounded(m: &Module, config: &SearchConfig) -> Result<DimVerdict, ModuleError> {
    Ok(analyse(m, config)?.1)
}

/// `id_A M = pd_{A^op} D M`.
pub fn id_bounded(m: &Module, config: &SearchConfig) -> Result<DimVerdict, ModuleError> {
    pd_bounded(&dual(m), config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PerpVerdict {
    /// `Ext^j(M, A) = 0` for all `j ≥ 1`: checked on `1..=checked_to`,
    /// which covers a whole period or reaches the projective dimension.
    CertifiedYes { checked_to: usize, dimension: DimVerdict },
    CertifiedNo { degree: usize },
    UpToBound { bound: usize },
}

impl PerpVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PerpVerdict::CertifiedYes { .. })
    }
}

/// Membership of `M` in `⊥A = {X : Ext^j(X, A) = 0 for j ≥ 1}`.
pub fn perp_test(m: &Module, config: &SearchConfig) -> Result<PerpVerdict, ModuleError> {
    let (mut res, verdict) = analyse(m, config)?;
    let regular = Module::regular(m.algebra().clone())?;
    let (check_to, conclusive) = match verdict {
        DimVerdict::Finite { value, .. } => (value, true),
        DimVerdict::InfiniteCertified { period_end, .. } => (period_end, true),
        DimVerdict::AtLeast { .. } if res.truncated => (res.terms.len().saturating_sub(2), false),
        DimVerdict::AtLeast { bound, .. } => (bound, false),
    };
    if check_to >= 1 {
        let dims = match res.ext_dims(&regular, check_to, config) {
            Ok(d) => d,
            Err(_) => return Ok(PerpVerdict::UpToBound { bound: config.bound }),
        };
        if let Some(j) = (1..=check_to).find(|&j| dims[j] != 0) {
            return Ok(PerpVerdict::CertifiedNo { degree: j });
        }
    }
    Ok(if conclusive {
        PerpVerdict::CertifiedYes {
            checked_to: check_to,
            dimension: verdict,
        }
    } else {
        PerpVerdict::UpToBound { bound: config.bound }
    })
}

/// Cohomology dimensions of a complex given by consecutive matrices, used
/// as an independent check on composites and exactness.
pub fn is_exact_at(incoming: &ExactMatrix, outgoing: &ExactMatrix) -> Result<bool, ModuleError> {
    if !outgoing.mul(incoming)?.is_zero() {
        return Ok(false);
    }
    Ok(incoming.rank() + outgoing.rank() == incoming.rows())
}
