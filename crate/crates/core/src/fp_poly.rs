//! Dense polynomials over the prime field F_p, coefficients low to high.
//!
//! Only what the ring construction needs: irreducibility testing for
//! candidate defining polynomials and inversion in F_p[x]/(f).

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(p as i128) as u64)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub(crate) fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = inv_mod_p(*b.last().unwrap(), p).expect("p prime");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mul_mod_p(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod_p(c, bi, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod_p(x, y, p)) % p;
        }
    }
    div_rem(&prod, f, p).1
}

/// `base^(p^k)` modulo `f`, by k successive p-th powers.
fn frobenius_iterate(base: &[u64], k: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = base.to_vec();
    for _ in 0..k {
        let mut result = vec![1u64];
        let mut sq = acc.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &sq, f, p);
            }
            sq = mul_mod(&sq, &sq, f, p);
            e >>= 1;
        }
        acc = result;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = div_rem(&a, &b, p).1;
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `f` of degree n is irreducible iff
/// x^(p^n) = x mod f and gcd(x^(p^(n/q)) - x, f) = 1 for each prime q | n.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    let n = match f.len() {
        0 | 1 => return false,
        len => len - 1,
    };
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let full = frobenius_iterate(&x, n, &f, p);
    if !sub(&full, &x, p).is_empty() {
        return false;
    }
    prime_divisors(n).into_iter().all(|q| {
        let partial = frobenius_iterate(&x, n / q, &f, p);
        let g = gcd(&sub(&partial, &x, p), &f, p);
        g.len() == 1
    })
}

/// Inverse of `a` in F_p[x]/(f) for irreducible `f`; `None` when a = 0 mod (p, f).
pub(crate) fn inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = f.to_vec();
    trim(&mut r0);
    let mut r1 = div_rem(a, f, p).1;
    if r1.is_empty() {
        return None;
    }
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let qs = {
            let mut prod = vec![0u64; (q.len() + s1.len()).saturating_sub(1)];
            for (i, &x) in q.iter().enumerate() {
                for (j, &y) in s1.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + mul_mod_p(x, y, p)) % p;
                }
            }
            trim(&mut prod);
            prod
        };
        let s = sub(&s0, &qs, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant when f is irreducible
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod_p(r0[0], p)?;
    let mut out: Vec<u64> = s0.iter().map(|&x| mul_mod_p(x, c, p)).collect();
    trim(&mut out);
    Some(out)
}
