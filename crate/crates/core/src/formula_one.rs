//! The a-number and the cyclic-vector route to the Newton polygon.
//!
//! For x in M such that x, phi(x), ..., phi^(c-1)(x), theta(x), ...,
//! theta^d(x) is a basis (theta the Verschiebung), there is a relation
//!
//! ```text
//! psi = sum_{i=0..c} a_{c-i} phi^i + sum_{l=1..d} b_l theta^l,   psi(x) = 0,
//! ```
//!
//! with a_0 and b_d units. Setting a_{c+l} = p^l b_l, the Newton polygon of
//! the module is the lower convex hull of the points (i, v_p(a_i)).

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::newton::{np_from_points, NewtonPolygon};
use crate::rng::SplitMix64;
use crate::sigma_modules::DieudonneModule;
use crate::smith;
use crate::witt_ring::{Valuation, WittElem};

/// Seed of the pseudorandom phase of [`find_cyclic_vector`].
pub const CYCLIC_SEARCH_SEED: u64 = 0x5EED_C7C1_1C00_0001;

/// dim_k M / (phi(M) + theta(M)) = r - rank of [A | V] mod p.
pub fn a_number(module: &DieudonneModule) -> Result<u32> {
    let ring = module.ring();
    let v = module.verschiebung()?;
    let r = module.rank();
    let residue = ring.with_precision(1)?;
    let mut joined = Matrix::zeros(&residue, r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            joined.set(i, j, ring.reduce_into(module.phi().get(i, j), &residue));
            joined.set(i, r + j, ring.reduce_into(v.get(i, j), &residue));
        }
    }
    let rank = smith::smith_valuations(&residue, &joined).rank_mod_p();
    Ok((r - rank) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicVector {
    pub x: Vec<WittElem>,
    /// Columns x, phi(x), ..., phi^(c-1)(x), theta(x), ..., theta^d(x).
    pub basis_matrix: Matrix,
    /// phi^c(x), the vector the relation expresses in that basis.
    pub top_image: Vec<WittElem>,
}

/// Builds the candidate basis for `x`; `None` unless its determinant is a unit.
pub fn cyclic_vector_at(module: &DieudonneModule, x: &[WittElem]) -> Result<Option<CyclicVector>> {
    let ring = module.ring();
    let v = module.verschiebung()?;
    let c = module.codim() as usize;
    let d = module.dim() as usize;
    let mut columns = Vec::with_capacity(c + d);
    let mut cur = x.to_vec();
    for _ in 0..c {
        columns.push(cur.clone());
        cur = module.apply_phi(&cur);
    }
    let top_image = cur;
    let mut down = x.to_vec();
    for _ in 0..d {
        down = module.apply_verschiebung(&v, &down);
        columns.push(down.clone());
    }
    let basis_matrix = Matrix::from_columns(&columns).expect("r columns of length r");
    if !smith::is_unimodular(ring, &basis_matrix) {
        return Ok(None);
    }
    Ok(Some(CyclicVector {
        x: x.to_vec(),
        basis_matrix,
        top_image,
    }))
}

/// Standard basis vectors first, then pseudorandom vectors, until `budget`
/// candidates have been tried.
pub fn find_cyclic_vector(module: &DieudonneModule, budget: usize) -> Result<CyclicVector> {
    let ring = module.ring();
    let r = module.rank();
    let mut rng = SplitMix64::new(CYCLIC_SEARCH_SEED);
    for attempt in 0..budget {
        let x: Vec<WittElem> = if attempt < r {
            (0..r)
                .map(|i| {
                    if i == attempt {
                        ring.one()
                    } else {
                        ring.zero()
                    }
                })
                .collect()
        } else {
            (0..r).map(|_| ring.random(&mut rng)).collect()
        };
        if let Some(cv) = cyclic_vector_at(module, &x)? {
            return Ok(cv);
        }
    }
    Err(Error::NotFound { budget })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QxData {
    /// a_0, ..., a_r with a_0 = 1 and a_{c+l} = p^l b_l.
    pub coeffs: Vec<WittElem>,
    pub valuations: Vec<Valuation>,
    pub polygon: NewtonPolygon,
}

/// Solves psi(x) = 0 with a_0 = 1 in the cyclic basis.
pub fn qx_coefficients(module: &DieudonneModule, cv: &CyclicVector) -> Result<QxData> {
    let ring = module.ring();
    let c = module.codim() as usize;
    let d = module.dim() as usize;
    let r = c + d;
    let n = ring.precision();
    if (d as u32) >= n {
        return Err(Error::PrecisionExhausted(format!(
            "need precision above d = {d}"
        )));
    }
    let inv = smith::inverse(ring, &cv.basis_matrix).map_err(|_| {
        Error::DegenerateKernel(
            "candidate basis is not invertible; a_0 cannot be normalized".into(),
        )
    })?;
    let rhs: Vec<WittElem> = cv.top_image.iter().map(|e| ring.neg(e)).collect();
    let y = inv.mul_vec(&rhs, ring);

    // y[i] multiplies phi^i(x) for i < c, so a_{c-i} = y[i]; y[c+l-1] = b_l
    let mut coeffs = vec![ring.zero(); r + 1];
    coeffs[0] = ring.one();
    for i in 0..c {
        coeffs[c - i] = y[i].clone();
    }
    for l in 1..=d {
        let b = &y[c + l - 1];
        if l == d && !ring.is_unit(b) {
            return Err(Error::DegenerateKernel(format!(
                "b_d has valuation {}, expected 0",
                ring.valuation(b)
            )));
        }
        coeffs[c + l] = ring.mul(b, &ring.p_pow(l as u32));
    }
    let valuations: Vec<Valuation> = coeffs.iter().map(|a| ring.valuation(a)).collect();
    let polygon = np_from_qx_points(&valuations)?;
    Ok(QxData {
        coeffs,
        valuations,
        polygon,
    })
}

fn np_from_qx_points(valuations: &[Valuation]) -> Result<NewtonPolygon> {
    let points: Vec<(usize, Valuation)> = valuations.iter().copied().enumerate().collect();
    np_from_points(&points)
}

/// Newton polygon of the valuation tuple.
pub fn np_from_qx(qx: &QxData) -> Result<NewtonPolygon> {
    np_from_qx_points(&qx.valuations)
}

/// Convenience: search a cyclic vector and return the Formula route polygon.
pub fn np_via_cyclic_vector(
    module: &DieudonneModule,
    budget: usize,
) -> Result<(CyclicVector, QxData)> {
    let cv = find_cyclic_vector(module, budget)?;
    let qx = qx_coefficients(module, &cv)?;
    Ok((cv, qx))
}

/// For each i, the level j + max(0, i - c) modulo which a perturbation
/// g = 1 mod p^j leaves a_i unchanged: a_0..a_c move mod p^j, and
/// a_{c+l} = p^l b_l moves mod p^(j+l).
pub fn coefficient_stability_levels(j: u32, c: u32, r: u32) -> Vec<u32> {
    (0..=r).map(|i| j + i.saturating_sub(c)).collect()
}
