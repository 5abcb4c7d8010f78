//! Integer utilities and the per-prime parameter block.
//!
//! Everything here works at "desk scale": the prime `q` and the derived
//! candidate divisor `(q^2 + 3q + 4) / 4` fit comfortably in a `u64`, while
//! quantities that grow like `2^q` are carried as [`BigUint`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclotomy::{recover_st, CyclotomicTable};
use crate::error::{domain, Result};

/// Witness set that makes Miller-Rabin deterministic for every `n < 2^64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Exact primality for any `u64`.
///
/// Small factors are stripped by trial division, the rest goes through
/// Miller-Rabin with the first twelve primes as witnesses, which has no
/// pseudoprimes below `2^64`.
pub fn is_prime(n: u64) -> Result<bool> {
    if n < 2 {
        return domain(format!("is_prime requires n >= 2, got {n}"));
    }
    for p in MR_BASES {
        if n == p {
            return Ok(true);
        }
        if n.is_multiple_of(p) {
            return Ok(false);
        }
    }
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    'witness: for a in MR_BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// `base^exp mod modulus` on big naturals.
pub fn mod_pow(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if *modulus < BigUint::from(2u32) {
        return domain("mod_pow requires modulus >= 2");
    }
    Ok(base.modpow(exp, modulus))
}

/// Greatest common divisor of two big naturals, not both zero.
pub fn big_gcd(a: &BigUint, b: &BigUint) -> Result<BigUint> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd(0, 0) is undefined");
    }
    Ok(a.gcd(b))
}

/// Distinct prime divisors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff `g` generates the multiplicative group of `F_q`.
pub fn is_generator(g: u64, q: u64) -> bool {
    if q == 2 {
        return g % 2 == 1;
    }
    if g.is_multiple_of(q) {
        return false;
    }
    prime_factors(q - 1)
        .into_iter()
        .all(|p| pow_mod_u64(g, (q - 1) / p, q) != 1)
}

/// Smallest primitive root of `F_q`.
pub fn find_generator(q: u64) -> Result<u64> {
    if q < 2 || !is_prime(q)? {
        return domain(format!("{q} is not prime"));
    }
    if q == 2 {
        return Ok(1);
    }
    (2..q)
        .find(|&g| is_generator(g, q))
        .ok_or_else(|| crate::Error::Consistency(format!("no primitive root found for {q}")))
}

/// Arithmetic context for one prime `q ≡ 5 (mod 8)`.
///
/// `theta` is the generator actually used to label the cyclotomic classes.
/// It is chosen so that the cyclotomic numbers match the closed-form table
/// with `t > 0`; when the requested generator gave `t < 0` it has been
/// replaced by its inverse (which swaps `D_1` and `D_3`) and `relabeled`
/// is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeParams {
    pub q: u64,
    /// `(q - 1) / 4`, the size of each cyclotomic class.
    pub f: u64,
    /// `(q + 3) / 8`, so that `q = 8m - 3`.
    pub m: u64,
    pub theta: u64,
    /// The generator before sign normalisation.
    pub requested_theta: u64,
    pub relabeled: bool,
    /// `q = s^2 + 4t^2`, `s ≡ 1 (mod 4)`.
    pub s: i64,
    /// Always positive after normalisation.
    pub t: i64,
    /// Index of the class containing 2; always 1 or 3.
    pub k: usize,
}

impl PrimeParams {
    /// Sequence period `N = 2q`.
    pub fn period(&self) -> usize {
        2 * self.q as usize
    }
}

/// Builds the parameter block for `q`, using the smallest primitive root
/// unless `theta_override` is given.
pub fn build_params(q: u64, theta_override: Option<u64>) -> Result<PrimeParams> {
    if q < 2 || !is_prime(q)? {
        return domain(format!("{q} is not prime"));
    }
    if q % 8 != 5 {
        return domain(format!("q = {q} is not congruent to 5 mod 8"));
    }
    let requested = match theta_override {
        Some(g) => {
            if !(2..q).contains(&g) || !is_generator(g, q) {
                return domain(format!("{g} is not a primitive root mod {q}"));
            }
            g
        }
        None => find_generator(q)?,
    };

    let mut theta = requested;
    let mut table = CyclotomicTable::from_generator(q, theta);
    let (s, mut t) = recover_st(&table)?;
    let relabeled = t < 0;
    if relabeled {
        // θ^{-1} = θ^{q-2} and q - 2 ≡ 3 (mod 4): D_λ becomes D_{-λ}.
        theta = pow_mod_u64(theta, q - 2, q);
        table = CyclotomicTable::from_generator(q, theta);
        t = -t;
    }
    let k = table.class_of(2) as usize;
    debug_assert!(k == 1 || k == 3);

    Ok(PrimeParams {
        q,
        f: (q - 1) / 4,
        m: (q + 3) / 8,
        theta,
        requested_theta: requested,
        relabeled,
        s,
        t,
        k,
    })
}

/// Primes `q ≡ 5 (mod 8)` with `q <= q_max`, ascending.
pub fn dhm_primes(q_max: u64) -> Vec<u64> {
    (5..=q_max)
        .step_by(8)
        .filter(|&q| is_prime(q).unwrap_or(false))
        .collect()
}

/// `2^n - 1` as a big natural.
pub fn mersenne(n: u64) -> BigUint {
    (BigUint::one() << n) - BigUint::one()
}

/// `2^n + 1` as a big natural.
pub fn fermat_like(n: u64) -> BigUint {
    (BigUint::one() << n) + BigUint::one()
}
