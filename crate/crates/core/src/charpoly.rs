//! Division-free characteristic polynomial (Berkowitz).
//!
//! Valid over any commutative ring, in particular over W/p^N where dividing
//! by integers divisible by p is impossible.

use crate::matrix::Matrix;
use crate::witt_ring::{WittElem, WittRing};

/// Coefficients `[1, c_1, ..., c_n]` of det(t I - m) = t^n + c_1 t^(n-1) + ... + c_n.
pub fn charpoly(ring: &WittRing, m: &Matrix) -> Vec<WittElem> {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let n = m.rows();
    if n == 0 {
        return vec![ring.one()];
    }
    // Start with the trailing 1x1 block and grow the leading corner upward.
    let last = n - 1;
    let mut poly = vec![ring.one(), ring.neg(m.get(last, last))];
    for k in (0..last).rev() {
        let size = n - k - 1; // dimension of the trailing block
        let a = m.get(k, k);
        let row: Vec<&WittElem> = ((k + 1)..n).map(|j| m.get(k, j)).collect();
        let mut col: Vec<WittElem> = ((k + 1)..n).map(|i| m.get(i, k).clone()).collect();

        // first column of the Toeplitz factor: 1, -a, -R C, -R S C, ..., -R S^(size-1) C
        let mut toeplitz = Vec::with_capacity(size + 2);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(a));
        for step in 0..size {
            let dot = row
                .iter()
                .zip(&col)
                .fold(ring.zero(), |acc, (r, c)| ring.add(&acc, &ring.mul(r, c)));
            toeplitz.push(ring.neg(&dot));
            if step + 1 < size {
                col = (0..size)
                    .map(|i| {
                        (0..size).fold(ring.zero(), |acc, j| {
                            ring.add(&acc, &ring.mul(m.get(k + 1 + i, k + 1 + j), &col[j]))
                        })
                    })
                    .collect();
            }
        }

        let next: Vec<WittElem> = (0..size + 2)
            .map(|i| {
                (0..=i.min(size)).fold(ring.zero(), |acc, j| {
                    ring.add(&acc, &ring.mul(&toeplitz[i - j], &poly[j]))
                })
            })
            .collect();
        poly = next;
    }
    poly
}
