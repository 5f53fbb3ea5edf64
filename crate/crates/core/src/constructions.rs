//! Explicit modules: the simple minimal modules H_{c,d}, their products
//! realizing a given Newton polygon, and the witness pair showing the
//! cutoff bound is attained.
//!
//! All bases are 0-indexed. For the witness pair this shifts the usual
//! 1-indexed description e_1, ..., e_r down by one.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::newton::{CutoffBounds, NewtonPolygon, Segment, Slope};
use crate::sigma_modules::DieudonneModule;
use crate::witt_ring::WittRing;

/// H_{c,d}: phi(e_l) = e_{d+l} for l < c and phi(e_l) = p e_{d+l} for
/// l >= c, indices mod c + d.
pub fn build_simple_minimal(ring: &Arc<WittRing>, c: u32, d: u32) -> Result<DieudonneModule> {
    let r = (c + d) as usize;
    if r == 0 {
        return Err(Error::MalformedInput("H_{0,0} has rank 0".into()));
    }
    if c.gcd(&d) != 1 {
        log::warn!("H_{{{c},{d}}} built from a non-coprime pair");
    }
    let mut phi = Matrix::zeros(ring, r, r);
    let p = ring.p_pow(1);
    for l in 0..r {
        let target = (d as usize + l) % r;
        let entry = if l < c as usize {
            ring.one()
        } else {
            p.clone()
        };
        phi.set(target, l, entry);
    }
    DieudonneModule::new(ring.clone(), phi)
}

/// Block-diagonal product of H_{c_i,d_i} over the simple blocks of `np`,
/// in nondecreasing slope order.
pub fn build_minimal(ring: &Arc<WittRing>, np: &NewtonPolygon) -> Result<DieudonneModule> {
    build_from_blocks(ring, &np.to_simple_blocks())
}

/// Product of the given simple blocks, sorted into slope order.
pub fn build_from_blocks(ring: &Arc<WittRing>, blocks: &[(u32, u32)]) -> Result<DieudonneModule> {
    if blocks.is_empty() {
        return Err(Error::MalformedInput("no blocks".into()));
    }
    let mut sorted = blocks.to_vec();
    for &(c, d) in &sorted {
        if c + d == 0 {
            return Err(Error::MalformedInput("block (0, 0)".into()));
        }
    }
    sorted.sort_by_key(|&(c, d)| Slope::new(d as i64, (c + d) as i64));
    let mats: Vec<Matrix> = sorted
        .iter()
        .map(|&(c, d)| build_simple_minimal(ring, c, d).map(|m| m.phi().clone()))
        .collect::<Result<_>>()?;
    DieudonneModule::new(ring.clone(), Matrix::block_diag(ring, &mats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub base: DieudonneModule,
    pub twisted: DieudonneModule,
    pub bounds: CutoffBounds,
    /// j - 1: the two phi-matrices agree modulo p^(j-1).
    pub congruence_level: u32,
    pub expected_base_np: NewtonPolygon,
    pub expected_twisted_np: NewtonPolygon,
}

/// The base module with phi(e_i) = e_{i+1} for i < c and p e_{i+1}
/// otherwise (indices mod r), and its twist where additionally
/// phi(e_{c-1}) picks up p^(j-1) e_0.
pub fn build_traverso_witness(ring: &Arc<WittRing>, c: u32, d: u32) -> Result<WitnessPair> {
    if c == 0 || d == 0 {
        return Err(Error::JTooSmall { c, d });
    }
    let bounds = CutoffBounds::new(c, d);
    if bounds.j < 2 {
        return Err(Error::JTooSmall { c, d });
    }
    let r = (c + d) as usize;
    let c_us = c as usize;
    let p = ring.p_pow(1);
    let mut base_phi = Matrix::zeros(ring, r, r);
    for i in 0..r {
        let entry = if i < c_us { ring.one() } else { p.clone() };
        base_phi.set((i + 1) % r, i, entry);
    }
    let twist = witness_twist(ring, c, d)?;
    let twisted_phi = twist.mul(&base_phi, ring);
    debug_assert_eq!(twisted_phi.get(0, c_us - 1), &ring.p_pow(bounds.j - 1));

    let base = DieudonneModule::new(ring.clone(), base_phi)?;
    let twisted = DieudonneModule::new(ring.clone(), twisted_phi)?;
    let lower = Slope::new((bounds.j - 1) as i64, c as i64);
    let upper = Slope::from_integer(1) - Slope::new((bounds.j - 1) as i64, d as i64);
    let expected_twisted_np = NewtonPolygon::new(vec![
        Segment {
            slope: lower,
            mult: c,
        },
        Segment {
            slope: upper,
            mult: d,
        },
    ])?;
    Ok(WitnessPair {
        base,
        twisted,
        bounds,
        congruence_level: bounds.j - 1,
        expected_base_np: NewtonPolygon::isoclinic(c + d, d)?,
        expected_twisted_np,
    })
}

/// The perturbation g = I + p^(j-1) E_{0,c} with g * base = twisted.
pub fn witness_twist(ring: &Arc<WittRing>, c: u32, d: u32) -> Result<Matrix> {
    let bounds = CutoffBounds::new(c, d);
    if c == 0 || d == 0 || bounds.j < 2 {
        return Err(Error::JTooSmall { c, d });
    }
    let r = (c + d) as usize;
    let mut g = Matrix::identity(ring, r);
    g.set(0, c as usize, ring.p_pow(bounds.j - 1));
    Ok(g)
}
