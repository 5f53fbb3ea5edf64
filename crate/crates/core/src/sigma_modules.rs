//! Dieudonne modules: free modules of rank r over W/p^N with a sigma-linear
//! Frobenius phi satisfying pM ⊆ phi(M).
//!
//! phi is stored by its matrix A in the column convention, so
//! phi(x) = A sigma(x) on coordinate vectors. The Verschiebung is the
//! sigma^(-1)-linear map with matrix V = sigma^(-1)(p A^(-1)), and the
//! identities A sigma(V) = p I and V sigma^(-1)(A) = p I hold exactly.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::smith::{self, SmithData};
use crate::witt_ring::{WittElem, WittRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneModule {
    ring: Arc<WittRing>,
    phi: Matrix,
    codim: u32,
    dim: u32,
}

impl DieudonneModule {
    /// Validates the Dieudonne condition through the elementary divisors of
    /// the phi-matrix: every valuation must be 0 or 1. The count of zeros is
    /// the codimension c, the count of ones the dimension d.
    pub fn new(ring: Arc<WittRing>, phi: Matrix) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::NotADieudonneModule(
                "phi-matrix is not square".into(),
            ));
        }
        if phi.entries().any(|e| !ring.contains(e)) {
            return Err(Error::RingMismatch);
        }
        let n = ring.precision();
        if n < 2 {
            return Err(Error::NotADieudonneModule(
                "precision 1 cannot distinguish p from 0".into(),
            ));
        }
        let smith = smith::smith_valuations(&ring, &phi);
        if let Some(&bad) = smith.valuations.iter().find(|&&v| v >= 2) {
            let reason = if bad >= n {
                "phi is not injective at working precision".to_string()
            } else {
                format!("elementary divisor of valuation {bad} violates pM ⊆ phi(M)")
            };
            return Err(Error::NotADieudonneModule(reason));
        }
        let dim = smith.total();
        if dim >= n {
            return Err(Error::NotADieudonneModule(format!(
                "det valuation {dim} is not below the precision {n}"
            )));
        }
        let codim = phi.rows() as u32 - dim;
        Ok(Self {
            ring,
            phi,
            codim,
            dim,
        })
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn smith_valuations(&self) -> SmithData {
        smith::smith_valuations(&self.ring, &self.phi)
    }

    /// Matrix of phi^n: A sigma(A) sigma^2(A) ... sigma^(n-1)(A).
    pub fn phi_power(&self, n: usize) -> Matrix {
        assert!(n >= 1, "phi_power needs n >= 1");
        let ring = &*self.ring;
        let mut acc = self.phi.clone();
        for k in 1..n {
            acc = acc.mul(&self.phi.frobenius(k as i64, ring), ring);
        }
        acc
    }

    pub fn apply_phi(&self, x: &[WittElem]) -> Vec<WittElem> {
        let sx: Vec<WittElem> = x.iter().map(|e| self.ring.frobenius(e, 1)).collect();
        self.phi.mul_vec(&sx, &self.ring)
    }

    /// Matrix V of the Verschiebung.
    pub fn verschiebung(&self) -> Result<Matrix> {
        if self.dim >= self.ring.precision() {
            return Err(Error::PrecisionExhausted(format!(
                "dimension {} needs precision above {}",
                self.dim,
                self.ring.precision()
            )));
        }
        let scaled = smith::scaled_inverse(&self.ring, &self.phi, 1)?;
        Ok(scaled.frobenius(-1, &self.ring))
    }

    pub fn apply_verschiebung(&self, v: &Matrix, x: &[WittElem]) -> Vec<WittElem> {
        let sx: Vec<WittElem> = x.iter().map(|e| self.ring.frobenius(e, -1)).collect();
        v.mul_vec(&sx, &self.ring)
    }

    /// Module in the basis given by the columns of `u`: U^(-1) A sigma(U).
    pub fn change_basis(&self, u: &Matrix) -> Result<Self> {
        let ring = &*self.ring;
        let u_inv = smith::inverse(ring, u)?;
        let phi = u_inv.mul(&self.phi, ring).mul(&u.frobenius(1, ring), ring);
        Self::new(self.ring.clone(), phi)
    }

    /// The module (M, g phi) for g = I + p^level E with E uniformly random.
    ///
    /// Levels at or above N give g = I. Levels below N must leave
    /// `deg * d + 1` digits of headroom for the slope computation.
    pub fn perturb(&self, level: u32, seed: u64) -> Result<(Self, Matrix)> {
        let mut rng = SplitMix64::new(seed);
        self.perturb_with(level, &mut rng)
    }

    pub fn perturb_with(&self, level: u32, rng: &mut SplitMix64) -> Result<(Self, Matrix)> {
        let ring = &*self.ring;
        self.check_perturbation_level(level)?;
        let r = self.rank();
        let p_t = ring.p_pow(level);
        let mut g = Matrix::identity(ring, r);
        if !p_t.is_zero() {
            for i in 0..r {
                for j in 0..r {
                    let noise = ring.mul(&ring.random(rng), &p_t);
                    g.set(i, j, ring.add(g.get(i, j), &noise));
                }
            }
        }
        let module = self.apply_perturbation(&g)?;
        Ok((module, g))
    }

    pub fn check_perturbation_level(&self, level: u32) -> Result<()> {
        if level == 0 {
            return Err(Error::InvalidLevel);
        }
        let n = self.ring.precision();
        let needed = self.ring.deg() as u32 * self.dim + 1;
        if level < n && level + needed >= n {
            return Err(Error::PrecisionExhausted(format!(
                "level {level} leaves too little headroom below precision {n} (need level < {})",
                n.saturating_sub(needed)
            )));
        }
        Ok(())
    }

    /// The module with matrix G A.
    pub fn apply_perturbation(&self, g: &Matrix) -> Result<Self> {
        Self::new(self.ring.clone(), g.mul(&self.phi, &self.ring))
    }

    /// Dieudonne module of the Cartier dual: phi*(i, j) = sigma(V(j, i)).
    ///
    /// p A^(-1) depends on A only modulo p^(N-1), so `dual` is an involution
    /// modulo p^(N-1), not exactly.
    pub fn dual(&self) -> Result<Self> {
        let v = self.verschiebung()?;
        let phi = v.transpose().frobenius(1, &self.ring);
        Self::new(self.ring.clone(), phi)
    }
}
