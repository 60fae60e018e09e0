use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::homology::{ext_dims, SearchConfig};
use crate::module_cat::{Module, ModuleError};
use crate::presentation::{corner_algebra, BasedAlgebra, IdempotentSpec};

/// Ext dimensions of one sampled pair over `A` and over `eAe`, degrees
/// `0..=jmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhiRow {
    pub x: String,
    pub y: String,
    pub big: Vec<usize>,
    pub corner: Vec<usize>,
}

impl EhiRow {
    pub fn agrees_at(&self, j: usize) -> bool {
        self.big[j] == self.corner[j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhiTable {
    pub jmax: usize,
    pub rows: Vec<EhiRow>,
    /// Least `t < jmax` with agreement in every degree `t < j ≤ jmax`;
    /// `None` when even degree `jmax` disagrees.
    pub t_obs: Option<usize>,
}

impl EhiTable {
    pub fn alarm(&self) -> bool {
        self.t_obs.is_none()
    }
}

/// The simple modules at the vertices of `e`, labelled `S<vertex>`.
pub fn simples_in(a: &Arc<BasedAlgebra>, e: &IdempotentSpec) -> Result<Vec<(String, Module)>, ModuleError> {
    e.vertices()
        .iter()
        .map(|&v| Ok((format!("S{}", a.vertex_labels()[v]), Module::simple(a.clone(), v)?)))
        .collect()
}

/// Compares `Ext^j_A(X, Y)` with `Ext^j_{eAe}(eX, eY)` on every ordered pair
/// of samples.
pub fn ehi_sample_check(
    a: &Arc<BasedAlgebra>,
    e: &IdempotentSpec,
    jmax: usize,
    samples: &[(String, Module)],
    config: &SearchConfig,
) -> Result<EhiTable, ModuleError> {
    let corner = corner_algebra(a, e).map_err(ModuleError::Presentation)?;
    let restricted: Vec<Module> = samples
        .iter()
        .map(|(_, m)| m.corner_module(&corner))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (i, (xl, x)) in samples.iter().enumerate() {
        for (k, (yl, y)) in samples.iter().enumerate() {
            rows.push(EhiRow {
                x: xl.clone(),
                y: yl.clone(),
                big: ext_dims(x, y, jmax, config)?,
                corner: ext_dims(&restricted[i], &restricted[k], jmax, config)?,
            });
        }
    }
    let agree = |j: usize| rows.iter().all(|r| r.agrees_at(j));
    let t_obs = if jmax == 0 {
        Some(0)
    } else if !agree(jmax) {
        None
    } else {
        let mut t = jmax - 1;
        while t > 0 && agree(t) {
            t -= 1;
        }
        Some(t)
    };
    Ok(EhiTable { jmax, rows, t_obs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn full_idempotent_agrees_everywhere() {
        let a = parse_presentation("vertex 1\nvertex 2\narrow a: 1 -> 2\narrow x: 2 -> 2\nrelation x*x\n")
            .unwrap()
            .certify(None)
            .unwrap()
            .algebra;
        let e = IdempotentSpec::new(0..2, 2, true).unwrap();
        let t = ehi_sample_check(&a, &e, 5, &simples_in(&a, &e).unwrap(), &SearchConfig::default()).unwrap();
        assert_eq!(t.t_obs, Some(0));
        assert!(t.rows.iter().all(|r| r.big == r.corner));
        assert_eq!(t.rows.len(), 4);
    }
}
