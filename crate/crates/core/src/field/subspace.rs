use super::{ExactMatrix, FieldError, FieldSpec, Scalar};

/// A subspace of `field^n` held as a reduced column-echelon basis: column `j`
/// has a one in row `pivot_rows[j]` and zeros in every other pivot row, so
/// coordinates of a member are read off the pivot rows directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSpace {
    basis: ExactMatrix,
    pivot_rows: Vec<usize>,
}

impl ColumnSpace {
    /// The span of the columns of `m`.
    pub fn span(m: &ExactMatrix) -> Self {
        let (r, pivots) = m.transpose().rref();
        let rank = pivots.len();
        let basis = r.block(0, 0, rank, m.rows()).transpose();
        ColumnSpace { basis, pivot_rows: pivots }
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        ColumnSpace {
            basis: ExactMatrix::zeros(field, ambient, 0),
            pivot_rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// `v` minus its projection along the pivot coordinates; zero exactly when
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let b = self.basis.get(r, j);
                if !b.is_zero() {
                    *o = o.sub(&c.mul(b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivot_rows.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates of every column of `m`; errors if one leaves the subspace.
    pub fn coords_matrix(&self, m: &ExactMatrix) -> Result<ExactMatrix, FieldError> {
        let field = self.basis.field();
        let mut out = ExactMatrix::zeros(field, self.dim(), m.cols());
        for c in 0..m.cols() {
            let col = m.column(c);
            let x = self.coords(&col).ok_or_else(|| {
                FieldError::DimensionMismatch(format!("column {c} is not in the subspace"))
            })?;
            for (r, s) in x.into_iter().enumerate() {
                out.set(r, c, s);
            }
        }
        Ok(out)
    }

    /// Standard basis indices complementing the subspace (the non-pivot rows).
    pub fn complement_rows(&self) -> Vec<usize> {
        (0..self.ambient_dim())
            .filter(|r| !self.pivot_rows.contains(r))
            .collect()
    }

    pub fn sum(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(Self::span(&self.basis.hstack(&other.basis)?))
    }
}
