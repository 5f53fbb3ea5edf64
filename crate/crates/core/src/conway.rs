//! Conway polynomials C_{p,n} for p <= 7 and n <= 8, coefficients low to high.

const TABLE: &[(u64, &[u64])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (3, &[1, 0, 2, 0, 0, 0, 0, 1]),
    (3, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (5, &[3, 4, 0, 0, 0, 1]),
    (5, &[2, 0, 1, 4, 1, 0, 1]),
    (5, &[3, 3, 0, 0, 0, 0, 0, 1]),
    (5, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
    (7, &[3, 4, 5, 0, 1]),
    (7, &[4, 1, 0, 0, 0, 1]),
    (7, &[3, 6, 4, 5, 1, 0, 1]),
    (7, &[4, 6, 0, 0, 0, 0, 0, 1]),
    (7, &[3, 2, 6, 4, 0, 0, 0, 0, 1]),
];

/// Table lookup; `None` outside the embedded range.
pub fn conway_polynomial(p: u64, deg: usize) -> Option<&'static [u64]> {
    TABLE
        .iter()
        .find(|(q, coeffs)| *q == p && coeffs.len() == deg + 1)
        .map(|(_, coeffs)| *coeffs)
}

/// Lexicographically least monic irreducible polynomial of degree `deg` over F_p,
/// comparing the coefficients of x^(deg-1), ..., x^0 in that order.
pub fn least_irreducible(p: u64, deg: usize) -> Vec<u64> {
    let mut tail = vec![0u64; deg]; // tail[0] is the x^(deg-1) coefficient
    loop {
        let mut f: Vec<u64> = tail.iter().rev().copied().collect();
        f.push(1);
        if crate::fp_poly::is_irreducible(&f, p) {
            return f;
        }
        // odometer increment, last position fastest
        let mut pos = deg;
        loop {
            assert!(pos > 0, "an irreducible polynomial of every degree exists");
            pos -= 1;
            tail[pos] += 1;
            if tail[pos] < p {
                break;
            }
            tail[pos] = 0;
        }
    }
}

/// Conway polynomial when tabulated, otherwise the lexicographic fallback.
pub fn default_defining_poly(p: u64, deg: usize) -> Vec<u64> {
    conway_polynomial(p, deg)
        .map(<[u64]>::to_vec)
        .unwrap_or_else(|| least_irreducible(p, deg))
}
