use super::{CellComplex, ComplexError, UnitaryRep};
use crate::linalg::{hermitian_eigenvalues, hermitian_inv_sqrt, hermitian_sqrt, identity, max_abs, rank, CMat};

/// Tolerance for `d_{k+1} d_k = 0`, relative to `max(1, |d_{k+1}| |d_k|)`.
pub const COMPLEX_TOL: f64 = 1e-12;

/// Antilinear maps `⋆_k x = S_k · conj(x)` from `C^k` to `C^{N-k}`, one per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPairing {
    pub stars: Vec<CMat>,
}

/// Finite cochain complex `C^0 → C^1 → … → C^N` of complex vector spaces with
/// inner products. Spectral quantities are computed in an orthonormal frame
/// `d̃_k = G_{k+1}^{1/2} d_k G_k^{-1/2}`.
#[derive(Debug, Clone)]
pub struct TwistedComplex {
    d: Vec<CMat>,
    gram: Vec<CMat>,
    dual: Option<DualPairing>,
    source: Option<(CellComplex, UnitaryRep)>,
    dn: Vec<CMat>,
}

/// Assembles `d_k` by tensoring each incidence term with the holonomy of its word.
pub fn build_twisted_complex(cc: &CellComplex, rep: &UnitaryRep) -> Result<TwistedComplex, ComplexError> {
    for g in &cc.generators {
        if !rep.images.contains_key(g) {
            return Err(ComplexError::MissingGenerator(g.clone()));
        }
    }
    let r = rep.rank;
    let mut d = Vec::with_capacity(cc.coboundary.len());
    for (k, terms) in cc.coboundary.iter().enumerate() {
        let mut m = CMat::zeros(cc.cell_counts[k + 1] * r, cc.cell_counts[k] * r);
        for t in terms {
            let block = rep.holonomy(&t.word)? * crate::linalg::c(t.coeff as f64, 0.0);
            let mut view = m.view_mut((t.row * r, t.col * r), (r, r));
            view += block;
        }
        d.push(m);
    }
    let mut tc = TwistedComplex::from_differentials(d)?;
    tc.source = Some((cc.clone(), rep.clone()));
    Ok(tc)
}

fn dims_from(d: &[CMat]) -> Result<Vec<usize>, ComplexError> {
    if d.is_empty() {
        return Err(ComplexError::InvalidInput("complex needs at least one differential".into()));
    }
    let mut dims = vec![d[0].ncols()];
    for (k, m) in d.iter().enumerate() {
        if m.ncols() != dims[k] {
            return Err(ComplexError::InvalidInput(format!(
                "d_{k} has {} columns, expected {}",
                m.ncols(),
                dims[k]
            )));
        }
        dims.push(m.nrows());
    }
    Ok(dims)
}

fn check_square_zero(d: &[CMat]) -> Result<(), ComplexError> {
    for k in 0..d.len().saturating_sub(1) {
        let scale = (max_abs(&d[k + 1]) * max_abs(&d[k])).max(1.0);
        let residual = max_abs(&(&d[k + 1] * &d[k])) / scale;
        if residual > COMPLEX_TOL {
            return Err(ComplexError::NotAComplex { degree: k, residual });
        }
    }
    Ok(())
}

impl TwistedComplex {
    /// Complex with identity inner products from explicit differentials.
    pub fn from_differentials(d: Vec<CMat>) -> Result<Self, ComplexError> {
        let dims = dims_from(&d)?;
        check_square_zero(&d)?;
        let gram = dims.iter().map(|&n| identity(n)).collect();
        let dn = d.clone();
        Ok(TwistedComplex { d, gram, dual: None, source: None, dn })
    }

    /// Replaces the inner products; each Gram matrix must be Hermitian positive definite.
    pub fn with_gram(mut self, gram: Vec<CMat>) -> Result<Self, ComplexError> {
        let dims = self.dims();
        if gram.len() != dims.len() {
            return Err(ComplexError::InvalidInput(format!("need {} Gram matrices", dims.len())));
        }
        for (k, g) in gram.iter().enumerate() {
            if g.shape() != (dims[k], dims[k]) {
                return Err(ComplexError::InvalidInput(format!("Gram matrix {k} has wrong shape")));
            }
            if max_abs(&(g - g.adjoint())) > 1e-12 * max_abs(g).max(1.0) {
                return Err(ComplexError::InvalidInput(format!("Gram matrix {k} is not Hermitian")));
            }
            if hermitian_eigenvalues(g).first().is_some_and(|&e| e <= 0.0) {
                return Err(ComplexError::InvalidInput(format!("Gram matrix {k} is not positive definite")));
            }
        }
        self.gram = gram;
        self.refresh_frame();
        Ok(self)
    }

    pub fn with_dual(mut self, dual: DualPairing) -> Result<Self, ComplexError> {
        let dims = self.dims();
        let n = self.top_degree();
        if dual.stars.len() != dims.len() {
            return Err(ComplexError::InvalidInput(format!("need {} star matrices", dims.len())));
        }
        for (k, s) in dual.stars.iter().enumerate() {
            if s.shape() != (dims[n - k], dims[k]) || rank(s) < dims[k] {
                return Err(ComplexError::InvalidInput(format!("star {k} is not an isomorphism C^{k} -> C^{}", n - k)));
            }
        }
        self.dual = Some(dual);
        Ok(self)
    }

    fn refresh_frame(&mut self) {
        let sq: Vec<CMat> = self.gram.iter().map(hermitian_sqrt).collect();
        let isq: Vec<CMat> = self.gram.iter().map(hermitian_inv_sqrt).collect();
        self.dn = self.d.iter().enumerate().map(|(k, m)| &sq[k + 1] * m * &isq[k]).collect();
    }

    pub fn dims(&self) -> Vec<usize> {
        let mut dims = vec![self.d[0].ncols()];
        dims.extend(self.d.iter().map(|m| m.nrows()));
        dims
    }

    pub fn top_degree(&self) -> usize {
        self.d.len()
    }

    pub fn differential(&self, k: usize) -> &CMat {
        &self.d[k]
    }

    pub fn differentials(&self) -> &[CMat] {
        &self.d
    }

    pub fn gram(&self, k: usize) -> &CMat {
        &self.gram[k]
    }

    pub fn grams(&self) -> &[CMat] {
        &self.gram
    }

    pub fn dual(&self) -> Option<&DualPairing> {
        self.dual.as_ref()
    }

    pub fn source(&self) -> Option<&(CellComplex, UnitaryRep)> {
        self.source.as_ref()
    }

    /// `d_k^* = G_k^{-1} d_k^H G_{k+1}`, so that `⟨d_k u, v⟩ = ⟨u, d_k^* v⟩`.
    pub fn adjoint(&self, k: usize) -> CMat {
        let ginv = self.gram[k].clone().try_inverse().expect("Gram matrices are positive definite");
        ginv * self.d[k].adjoint() * &self.gram[k + 1]
    }

    /// `Δ_k = d_k^* d_k + d_{k-1} d_{k-1}^*`, in the cell basis.
    pub fn laplacian(&self, k: usize) -> CMat {
        let n = self.dims()[k];
        let mut lap = CMat::zeros(n, n);
        if k < self.d.len() {
            lap += self.adjoint(k) * &self.d[k];
        }
        if k > 0 {
            lap += &self.d[k - 1] * self.adjoint(k - 1);
        }
        lap
    }

    /// `d̃_k` in orthonormal coordinates; its plain adjoint is the metric adjoint.
    pub fn orthonormal_differential(&self, k: usize) -> &CMat {
        &self.dn[k]
    }

    pub fn orthonormal_laplacian(&self, k: usize) -> CMat {
        let n = self.dims()[k];
        let mut lap = CMat::zeros(n, n);
        if k < self.dn.len() {
            lap += self.dn[k].adjoint() * &self.dn[k];
        }
        if k > 0 {
            lap += &self.dn[k - 1] * self.dn[k - 1].adjoint();
        }
        lap
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.d.iter().map(rank).collect()
    }

    /// `β_k = dim C^k − rank d_k − rank d_{k−1}`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let ranks = self.ranks();
        self.dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                n - out - inc
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti_numbers().iter().all(|&b| b == 0)
    }

    pub fn require_acyclic(&self) -> Result<(), ComplexError> {
        match self.betti_numbers().iter().enumerate().find(|(_, &b)| b > 0) {
            Some((degree, &betti)) => Err(ComplexError::NotAcyclic { degree, betti }),
            None => Ok(()),
        }
    }

    /// New coordinates `x' = P_k x`: `d'_k = P_{k+1} d_k P_k^{-1}`, `G'_k = P_k^{-H} G_k P_k^{-1}`.
    /// A supplied dual pairing is carried along as `S'_k = P_{N-k} S_k conj(P_k)^{-1}`.
    pub fn change_basis(&self, p: &[CMat]) -> Result<TwistedComplex, ComplexError> {
        let dims = self.dims();
        if p.len() != dims.len() {
            return Err(ComplexError::InvalidInput(format!("need {} basis changes", dims.len())));
        }
        let mut inv = Vec::with_capacity(p.len());
        for (k, m) in p.iter().enumerate() {
            if m.shape() != (dims[k], dims[k]) {
                return Err(ComplexError::InvalidInput(format!("basis change {k} has wrong shape")));
            }
            inv.push(
                m.clone()
                    .try_inverse()
                    .ok_or_else(|| ComplexError::InvalidInput(format!("basis change {k} is singular")))?,
            );
        }
        let d = self.d.iter().enumerate().map(|(k, m)| &p[k + 1] * m * &inv[k]).collect();
        let gram: Vec<CMat> = self
            .gram
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let h = inv[k].adjoint() * g * &inv[k];
                (&h + h.adjoint()) * crate::linalg::c(0.5, 0.0)
            })
            .collect();
        let n = self.top_degree();
        let dual = self.dual.as_ref().map(|dp| DualPairing {
            stars: dp
                .stars
                .iter()
                .enumerate()
                .map(|(k, s)| &p[n - k] * s * inv[k].map(|z| z.conj()))
                .collect(),
        });
        let mut tc = TwistedComplex::from_differentials(d)?;
        tc.gram = gram;
        tc.dual = dual;
        tc.refresh_frame();
        Ok(tc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real};

    #[test]
    fn adjoint_is_metric_adjoint() {
        let d0 = from_real(2, 1, &[1.0, 2.0]);
        let d1 = from_real(1, 2, &[2.0, -1.0]);
        let g1 = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let g = vec![from_real(1, 1, &[3.0]), g1, from_real(1, 1, &[0.5])];
        let tc = TwistedComplex::from_differentials(vec![d0, d1]).unwrap().with_gram(g).unwrap();
        let u = from_real(1, 1, &[0.7]);
        let v = CMat::from_row_slice(2, 1, &[c(0.3, -1.0), c(2.0, 0.1)]);
        let lhs = (tc.differential(0) * &u).adjoint() * tc.gram(1) * &v;
        let rhs = u.adjoint() * tc.gram(0) * (tc.adjoint(0) * &v);
        assert!((lhs[(0, 0)] - rhs[(0, 0)]).norm() < 1e-14);
    }

    #[test]
    fn square_zero_is_enforced() {
        let d0 = from_real(1, 1, &[1.0]);
        let d1 = from_real(1, 1, &[1.0]);
        assert!(matches!(
            TwistedComplex::from_differentials(vec![d0, d1]),
            Err(ComplexError::NotAComplex { degree: 0, .. })
        ));
    }

    #[test]
    fn cone_has_no_cohomology() {
        let tc = TwistedComplex::from_differentials(vec![from_real(1, 1, &[1.0])]).unwrap();
        assert_eq!(tc.betti_numbers(), vec![0, 0]);
        let tc = TwistedComplex::from_differentials(vec![from_real(1, 1, &[0.0])]).unwrap();
        assert_eq!(tc.betti_numbers(), vec![1, 1]);
        assert_eq!(tc.require_acyclic(), Err(ComplexError::NotAcyclic { degree: 0, betti: 1 }));
    }
}
