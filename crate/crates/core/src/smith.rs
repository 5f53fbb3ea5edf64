//! Smith normal form over the chain ring W/p^N.
//!
//! Every ideal of W/p^N is p^k(W/p^N), so elimination with a pivot of
//! minimal valuation is exact: each entry in the pivot's row and column is
//! an exact multiple of the pivot. Entries that vanish mod p^N report
//! valuation N.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::witt_ring::{WittElem, WittRing};

/// Elementary-divisor valuations, nondecreasing, one per diagonal position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithData {
    pub valuations: Vec<u32>,
}

impl SmithData {
    /// Number of diagonal entries that are units.
    pub fn rank_mod_p(&self) -> usize {
        self.valuations.iter().take_while(|&&v| v == 0).count()
    }

    pub fn total(&self) -> u32 {
        self.valuations.iter().sum()
    }
}

/// `left * m * right = diag(diagonal)` with `left`, `right` invertible.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub left: Matrix,
    pub right: Matrix,
    pub diagonal: Vec<WittElem>,
    pub valuations: Vec<u32>,
}

fn eliminate(ring: &WittRing, m: &Matrix, track: bool) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let n = ring.precision();
    let mut work = m.clone();
    let mut left = Matrix::identity(ring, if track { rows } else { 0 });
    let mut right = Matrix::identity(ring, if track { cols } else { 0 });
    let steps = rows.min(cols);
    let mut valuations = Vec::with_capacity(steps);

    for k in 0..steps {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            for j in k..cols {
                let v = ring.valuation_capped(work.get(i, j));
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, pi, pj) = best.expect("nonempty submatrix");
        if v >= n {
            valuations.resize(steps, n);
            break;
        }
        work.swap_rows(k, pi);
        work.swap_cols(k, pj);
        if track {
            left.swap_rows(k, pi);
            right.swap_cols(k, pj);
        }
        let unit = ring.div_p_pow(work.get(k, k), v);
        let unit_inv = ring.unit_inverse(&unit).expect("pivot cofactor is a unit");

        for i in (k + 1)..rows {
            let entry = work.get(i, k);
            if entry.is_zero() {
                continue;
            }
            let factor = ring.mul(&ring.div_p_pow(entry, v), &unit_inv);
            for j in k..cols {
                let updated = ring.sub(work.get(i, j), &ring.mul(&factor, work.get(k, j)));
                work.set(i, j, updated);
            }
            if track {
                for j in 0..rows {
                    let updated = ring.sub(left.get(i, j), &ring.mul(&factor, left.get(k, j)));
                    left.set(i, j, updated);
                }
            }
        }
        for j in (k + 1)..cols {
            let entry = work.get(k, j);
            if entry.is_zero() {
                continue;
            }
            let factor = ring.mul(&ring.div_p_pow(entry, v), &unit_inv);
            // column k is zero below the pivot, so only row k changes in `work`
            work.set(k, j, ring.zero());
            if track {
                for i in 0..cols {
                    let updated = ring.sub(right.get(i, j), &ring.mul(&factor, right.get(i, k)));
                    right.set(i, j, updated);
                }
            }
        }
        valuations.push(v);
    }

    let diagonal = (0..steps).map(|k| work.get(k, k).clone()).collect();
    SmithForm {
        left,
        right,
        diagonal,
        valuations,
    }
}

pub fn smith_form(ring: &WittRing, m: &Matrix) -> SmithForm {
    eliminate(ring, m, true)
}

pub fn smith_valuations(ring: &WittRing, m: &Matrix) -> SmithData {
    SmithData {
        valuations: eliminate(ring, m, false).valuations,
    }
}

/// p^k * m^(-1), which is integral exactly when every elementary divisor of
/// the square matrix `m` has valuation at most k.
pub fn scaled_inverse(ring: &WittRing, m: &Matrix, k: u32) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotInvertible);
    }
    let form = smith_form(ring, m);
    let n = ring.precision();
    if form.valuations.iter().any(|&v| v >= n) {
        return Err(Error::PrecisionExhausted(
            "an elementary divisor vanishes at working precision".into(),
        ));
    }
    if form.valuations.iter().any(|&v| v > k) {
        return Err(Error::NotInvertible);
    }
    // p^k / (p^v u) = p^(k-v) u^(-1)
    let quotients: Vec<WittElem> = form
        .diagonal
        .iter()
        .zip(&form.valuations)
        .map(|(d, &v)| {
            let unit = ring.div_p_pow(d, v);
            let inv = ring.unit_inverse(&unit).expect("unit cofactor");
            ring.mul(&inv, &ring.p_pow(k - v))
        })
        .collect();
    let middle = Matrix::diagonal(ring, &quotients);
    Ok(form.right.mul(&middle, ring).mul(&form.left, ring))
}

pub fn inverse(ring: &WittRing, m: &Matrix) -> Result<Matrix> {
    match scaled_inverse(ring, m, 0) {
        Err(Error::PrecisionExhausted(_)) => Err(Error::NotInvertible),
        other => other,
    }
}

/// True when det(m) is a unit.
pub fn is_unimodular(ring: &WittRing, m: &Matrix) -> bool {
    m.is_square() && smith_valuations(ring, m).valuations.iter().all(|&v| v == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::witt_ring::RingParams;

    fn ring(p: u64, deg: usize, n: u32) -> WittRing {
        WittRing::new(RingParams::new(p, deg, n)).unwrap()
    }

    fn int_matrix(r: &WittRing, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| r.from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn antidiagonal_h11() {
        let r = ring(2, 1, 8);
        let a = int_matrix(&r, &[&[0, 2], &[1, 0]]);
        assert_eq!(smith_valuations(&r, &a).valuations, vec![0, 1]);
    }

    #[test]
    fn diagonal_and_identity() {
        let r = ring(3, 1, 5);
        assert_eq!(
            smith_valuations(&r, &Matrix::identity(&r, 3)).valuations,
            vec![0, 0, 0]
        );
        let d = int_matrix(&r, &[&[1, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        assert_eq!(smith_valuations(&r, &d).valuations, vec![0, 1, 1]);
        let z = Matrix::zeros(&r, 2, 2);
        assert_eq!(smith_valuations(&r, &z).valuations, vec![5, 5]);
    }

    #[test]
    fn rectangular_rank() {
        let r = ring(2, 1, 4);
        let m = int_matrix(&r, &[&[1, 1, 0], &[2, 2, 2]]);
        assert_eq!(smith_valuations(&r, &m).valuations, vec![0, 1]);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let r = ring(3, 2, 5);
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let rows: Vec<Vec<WittElem>> = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| r.mul(&r.random(&mut rng), &r.p_pow(rng.below(2) as u32)))
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            let f = smith_form(&r, &m);
            let d = f.left.mul(&m, &r).mul(&f.right, &r);
            assert_eq!(d, Matrix::diagonal(&r, &f.diagonal));
            assert!(f.valuations.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn scaled_inverse_of_h11() {
        let r = ring(2, 1, 8);
        let a = int_matrix(&r, &[&[0, 2], &[1, 0]]);
        let v = scaled_inverse(&r, &a, 1).unwrap();
        assert_eq!(v, int_matrix(&r, &[&[0, 2], &[1, 0]]));
        assert_eq!(a.mul(&v, &r), int_matrix(&r, &[&[2, 0], &[0, 2]]));
        assert_eq!(inverse(&r, &a), Err(Error::NotInvertible));
    }

    #[test]
    fn unimodular_inverse() {
        let r = ring(5, 2, 4);
        let mut rng = SplitMix64::new(3);
        let mut found = 0;
        while found < 10 {
            let rows: Vec<Vec<WittElem>> = (0..3)
                .map(|_| (0..3).map(|_| r.random(&mut rng)).collect())
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            if !is_unimodular(&r, &m) {
                continue;
            }
            found += 1;
            let inv = inverse(&r, &m).unwrap();
            assert_eq!(m.mul(&inv, &r), Matrix::identity(&r, 3));
            assert_eq!(inv.mul(&m, &r), Matrix::identity(&r, 3));
        }
    }
}
