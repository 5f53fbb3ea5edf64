//! The truncated Witt ring W(F_q)/p^N, q = p^deg, presented as
//! (Z/p^N)[x]/(f) for a monic f that is irreducible mod p.
//!
//! Elements are coordinate vectors in the power basis 1, x, ..., x^(deg-1).
//! Every element of a ring shares the same flat precision N. The Frobenius
//! automorphism sigma is the ring map sending x to the unique root of f that
//! is congruent to x^p mod p; it is found by Newton iteration and stored as
//! the matrices of sigma^k acting on coordinates.

use std::fmt;

use crate::error::{Error, Result};
use crate::fp_poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    pub p: u64,
    pub deg: usize,
    pub precision: u32,
}

impl RingParams {
    pub fn new(p: u64, deg: usize, precision: u32) -> Self {
        Self { p, deg, precision }
    }
}

/// p-adic valuation of a ring element, capped by the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// The element is zero modulo p^N.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittElem(Vec<u64>);

impl WittElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittRing {
    params: RingParams,
    modulus: u64,
    defining_poly: Vec<u64>,
    frobenius_image: WittElem,
    // reduce[k] = x^(deg + k) in the power basis, k = 0..deg-1
    reduce: Vec<Vec<u64>>,
    // sigma_pow[k][i] = sigma^k(x^i), k = 0..deg-1
    sigma_pow: Vec<Vec<WittElem>>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl WittRing {
    /// Ring with the default defining polynomial: the Conway polynomial when
    /// tabulated, else the lexicographically least monic irreducible mod p.
    pub fn new(params: RingParams) -> Result<Self> {
        Self::check_params(&params)?;
        let poly = crate::conway::default_defining_poly(params.p, params.deg);
        Self::with_defining_poly(params, &poly)
    }

    /// Ring with an explicit monic defining polynomial given low to high
    /// (`deg + 1` coefficients, reduced into [0, p^N)).
    pub fn with_defining_poly(params: RingParams, poly: &[u64]) -> Result<Self> {
        let modulus = Self::check_params(&params)?;
        let RingParams { p, deg, .. } = params;
        if poly.len() != deg + 1 || poly[deg] % modulus != 1 % modulus {
            return Err(Error::InvalidParams(format!(
                "defining polynomial must be monic of degree {deg}"
            )));
        }
        let poly: Vec<u64> = poly.iter().map(|&c| c % modulus).collect();
        let residue: Vec<u64> = poly.iter().map(|&c| c % p).collect();
        if !fp_poly::is_irreducible(&residue, p) {
            return Err(Error::InvalidParams(
                "defining polynomial is not irreducible mod p".into(),
            ));
        }

        // x^(deg+k) = -sum f_i x^(i+k), folded iteratively
        let mut reduce: Vec<Vec<u64>> = Vec::with_capacity(deg);
        let mut cur: Vec<u64> = poly[..deg]
            .iter()
            .map(|&c| (modulus - c) % modulus)
            .collect();
        for _ in 0..deg {
            reduce.push(cur.clone());
            // multiply cur by x
            let top = cur[deg - 1];
            let mut next = vec![0u64; deg];
            next[1..deg].copy_from_slice(&cur[..(deg - 1)]);
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = add_mod(*slot, mul_mod(top, reduce[0][i], modulus), modulus);
            }
            cur = next;
        }

        let mut ring = WittRing {
            params,
            modulus,
            defining_poly: poly,
            frobenius_image: WittElem(vec![0; deg]),
            reduce,
            sigma_pow: Vec::new(),
        };
        ring.frobenius_image = ring.lift_frobenius_root()?;

        // sigma^1 on the power basis: x^i -> y^i
        let mut images = Vec::with_capacity(deg);
        let mut acc = ring.one();
        for _ in 0..deg {
            images.push(acc.clone());
            acc = ring.mul(&acc, &ring.frobenius_image);
        }
        let identity: Vec<WittElem> = (0..deg).map(|i| ring.basis(i)).collect();
        let mut sigma_pow = vec![identity];
        for k in 1..deg {
            let prev = &sigma_pow[k - 1];
            let next: Vec<WittElem> = prev.iter().map(|e| ring.apply_linear(&images, e)).collect();
            sigma_pow.push(next);
        }
        ring.sigma_pow = sigma_pow;
        Ok(ring)
    }

    fn check_params(params: &RingParams) -> Result<u64> {
        if !is_prime(params.p) {
            return Err(Error::NotPrime(params.p));
        }
        if params.deg == 0 {
            return Err(Error::InvalidParams(
                "field degree must be at least 1".into(),
            ));
        }
        if params.precision == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        params.p.checked_pow(params.precision).ok_or_else(|| {
            Error::InvalidParams(format!(
                "{}^{} does not fit in 64 bits",
                params.p, params.precision
            ))
        })
    }

    /// Newton iteration y <- y - f(y)/f'(y) from y = x^p.
    fn lift_frobenius_root(&self) -> Result<WittElem> {
        let deg = self.params.deg;
        let derivative: Vec<u64> = (1..=deg)
            .map(|i| mul_mod(self.defining_poly[i], i as u64 % self.modulus, self.modulus))
            .collect();
        let mut y = if deg == 1 {
            // the generator is the root -f_0 itself and sigma is the identity
            self.neg(&self.from_int(self.defining_poly[0] as i64))
        } else {
            self.pow(&self.basis(1), self.params.p)
        };
        let steps = 2 + (32 - self.params.precision.leading_zeros());
        for _ in 0..=steps {
            let value = self.eval_poly(&self.defining_poly, &y);
            if value.is_zero() {
                return Ok(y);
            }
            let slope = self.eval_poly(&derivative, &y);
            let correction = self.mul(
                &value,
                &self
                    .unit_inverse(&slope)
                    .map_err(|_| Error::HenselFailure)?,
            );
            y = self.sub(&y, &correction);
        }
        Err(Error::HenselFailure)
    }

    fn eval_poly(&self, poly: &[u64], y: &WittElem) -> WittElem {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, y);
            acc.0[0] = add_mod(acc.0[0], c % self.modulus, self.modulus);
        }
        acc
    }

    fn apply_linear(&self, images: &[WittElem], a: &WittElem) -> WittElem {
        let mut out = self.zero();
        for (coef, img) in a.0.iter().zip(images) {
            if *coef == 0 {
                continue;
            }
            for (o, &v) in out.0.iter_mut().zip(&img.0) {
                *o = add_mod(*o, mul_mod(*coef, v, self.modulus), self.modulus);
            }
        }
        out
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn deg(&self) -> usize {
        self.params.deg
    }

    pub fn precision(&self) -> u32 {
        self.params.precision
    }

    /// p^N.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Defining polynomial, low to high, including the leading 1.
    pub fn defining_poly(&self) -> &[u64] {
        &self.defining_poly
    }

    pub fn frobenius_image(&self) -> &WittElem {
        &self.frobenius_image
    }

    pub fn zero(&self) -> WittElem {
        WittElem(vec![0; self.params.deg])
    }

    pub fn one(&self) -> WittElem {
        self.from_int(1)
    }

    /// x^i for i < deg.
    pub fn basis(&self, i: usize) -> WittElem {
        let mut v = vec![0; self.params.deg];
        v[i] = 1 % self.modulus;
        WittElem(v)
    }

    pub fn from_int(&self, n: i64) -> WittElem {
        let mut v = vec![0; self.params.deg];
        v[0] = (n as i128).rem_euclid(self.modulus as i128) as u64;
        WittElem(v)
    }

    /// Element from power-basis coordinates; checks length and range.
    pub fn element(&self, coeffs: Vec<u64>) -> Result<WittElem> {
        if coeffs.len() != self.params.deg || coeffs.iter().any(|&c| c >= self.modulus) {
            return Err(Error::RingMismatch);
        }
        Ok(WittElem(coeffs))
    }

    /// Element from arbitrary integer coordinates, reduced mod p^N.
    pub fn element_reduced(&self, coeffs: &[i64]) -> Result<WittElem> {
        if coeffs.len() != self.params.deg {
            return Err(Error::RingMismatch);
        }
        Ok(WittElem(
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(self.modulus as i128) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, a: &WittElem) -> bool {
        a.0.len() == self.params.deg && a.0.iter().all(|&c| c < self.modulus)
    }

    /// p^k, zero when k >= N.
    pub fn p_pow(&self, k: u32) -> WittElem {
        if k >= self.params.precision {
            return self.zero();
        }
        self.from_int(self.params.p.pow(k) as i64)
    }

    /// Checked arithmetic entry point: both operands must belong to this ring.
    pub fn arithmetic(&self, a: &WittElem, b: &WittElem, op: ArithOp) -> Result<WittElem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::RingMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    pub fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        WittElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| add_mod(x, y, self.modulus))
                .collect(),
        )
    }

    pub fn sub(&self, a: &WittElem, b: &WittElem) -> WittElem {
        WittElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| add_mod(x, (self.modulus - y) % self.modulus, self.modulus))
                .collect(),
        )
    }

    pub fn neg(&self, a: &WittElem) -> WittElem {
        WittElem(
            a.0.iter()
                .map(|&x| (self.modulus - x) % self.modulus)
                .collect(),
        )
    }

    pub fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        let deg = self.params.deg;
        let m = self.modulus;
        if deg == 1 {
            return WittElem(vec![mul_mod(a.0[0], b.0[0], m)]);
        }
        let mut prod = vec![0u64; 2 * deg - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, m), m);
            }
        }
        let mut out = prod[..deg].to_vec();
        for (k, &high) in prod[deg..].iter().enumerate() {
            if high == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduce[k]) {
                *o = add_mod(*o, mul_mod(high, r, m), m);
            }
        }
        WittElem(out)
    }

    pub fn mul_scalar(&self, a: &WittElem, s: u64) -> WittElem {
        let s = s % self.modulus;
        WittElem(a.0.iter().map(|&x| mul_mod(x, s, self.modulus)).collect())
    }

    pub fn pow(&self, a: &WittElem, mut e: u64) -> WittElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn valuation(&self, a: &WittElem) -> Valuation {
        match self.valuation_capped(a) {
            v if v >= self.params.precision => Valuation::Infinite,
            v => Valuation::Finite(v),
        }
    }

    /// Valuation with zero reported as N.
    pub fn valuation_capped(&self, a: &WittElem) -> u32 {
        let p = self.params.p;
        a.0.iter()
            .map(|&c| {
                if c == 0 {
                    self.params.precision
                } else {
                    let mut c = c;
                    let mut v = 0;
                    while c % p == 0 {
                        c /= p;
                        v += 1;
                    }
                    v
                }
            })
            .min()
            .unwrap_or(self.params.precision)
    }

    pub fn is_unit(&self, a: &WittElem) -> bool {
        self.valuation_capped(a) == 0
    }

    /// Exact division of the representative by p^k; requires valuation >= k.
    pub fn div_p_pow(&self, a: &WittElem, k: u32) -> WittElem {
        let pk = self.params.p.pow(k);
        debug_assert!(a.0.iter().all(|c| c % pk == 0));
        WittElem(a.0.iter().map(|&c| c / pk).collect())
    }

    /// sigma^power; negative powers are taken mod deg.
    pub fn frobenius(&self, a: &WittElem, power: i64) -> WittElem {
        let k = power.rem_euclid(self.params.deg as i64) as usize;
        if k == 0 {
            return a.clone();
        }
        self.apply_linear(&self.sigma_pow[k], a)
    }

    /// Inverse of a unit: inversion in the residue field, then Newton
    /// lifting b <- b(2 - ab) until exact mod p^N.
    pub fn unit_inverse(&self, a: &WittElem) -> Result<WittElem> {
        if !self.contains(a) {
            return Err(Error::RingMismatch);
        }
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let p = self.params.p;
        let residue_f: Vec<u64> = self.defining_poly.iter().map(|&c| c % p).collect();
        let residue_a: Vec<u64> = a.0.iter().map(|&c| c % p).collect();
        let inv = fp_poly::inverse_mod(&residue_a, &residue_f, p).ok_or(Error::NotAUnit)?;
        let mut coeffs = vec![0u64; self.params.deg];
        coeffs[..inv.len()].copy_from_slice(&inv);
        let mut b = WittElem(coeffs);
        let two = self.from_int(2);
        let mut correct_to = 1u32;
        while correct_to < self.params.precision {
            let ab = self.mul(a, &b);
            b = self.mul(&b, &self.sub(&two, &ab));
            correct_to = correct_to.saturating_mul(2);
        }
        debug_assert_eq!(self.mul(a, &b), self.one());
        Ok(b)
    }

    /// Uniform element (each power-basis coordinate uniform in [0, p^N)).
    pub fn random(&self, rng: &mut crate::rng::SplitMix64) -> WittElem {
        WittElem(
            (0..self.params.deg)
                .map(|_| rng.below(self.modulus))
                .collect(),
        )
    }

    /// Reduction of an element to a ring of lower precision with the same
    /// defining polynomial.
    pub fn reduce_into(&self, a: &WittElem, target: &WittRing) -> WittElem {
        WittElem(a.0.iter().map(|&c| c % target.modulus).collect())
    }

    /// The same presentation at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<WittRing> {
        let params = RingParams {
            precision,
            ..self.params
        };
        let modulus = Self::check_params(&params)?;
        let poly: Vec<u64> = self.defining_poly.iter().map(|&c| c % modulus).collect();
        WittRing::with_defining_poly(params, &poly)
    }
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
