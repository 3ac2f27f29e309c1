//! Elementary number theory over machine integers: deterministic primality,
//! squarefree factorization, Legendre symbols, and the sign-twisted prime q*.
//!
//! Everything here is deterministic and exact for the full `u64` range;
//! primality uses a Miller–Rabin base set proven correct below 3.3 * 10^24,
//! so there is no probabilistic regime for inputs this crate accepts.

use crate::error::{Error, Result};

/// Factor cap for trial division; composites whose second-largest prime
/// factor exceeds this are rejected rather than silently misfactored.
const TRIAL_DIVISION_CAP: u64 = 10_000_000;

/// A squarefree positive integer split into its prime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub value: u64,
    /// Distinct odd prime factors, strictly ascending.
    pub odd_primes: Vec<u64>,
    pub has_factor_two: bool,
}

impl PrimeFactorization {
    /// Product of the odd part, i.e. `value` with the factor 2 removed.
    pub fn odd_core(&self) -> u64 {
        if self.has_factor_two {
            self.value / 2
        } else {
            self.value
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for all `n < 2^64`.
///
/// Miller–Rabin with the fixed bases {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
/// 31, 37}, which is known to be exact for n < 3.317 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd_part = (n - 1) >> trailing;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, odd_part, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reference primality by plain trial division, used to cross-check
/// `is_prime` in tests. Linear in sqrt(n).
pub fn is_prime_trial_division(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor a squarefree positive integer, rejecting repeated prime factors.
pub fn factor_squarefree(a: u64) -> Result<PrimeFactorization> {
    assert!(a >= 1, "factor_squarefree expects a positive integer");
    let mut rest = a;
    let mut has_factor_two = false;
    if rest % 2 == 0 {
        rest /= 2;
        if rest % 2 == 0 {
            return Err(Error::NotSquarefree(a));
        }
        has_factor_two = true;
    }
    let mut odd_primes = Vec::new();
    let mut d = 3u64;
    while d * d <= rest && d <= TRIAL_DIVISION_CAP {
        if rest % d == 0 {
            rest /= d;
            if rest % d == 0 {
                return Err(Error::NotSquarefree(a));
            }
            odd_primes.push(d);
        }
        d += 2;
    }
    if rest > 1 {
        if is_prime(rest) {
            odd_primes.push(rest);
        } else {
            // rest is a composite with no factor below the cap: either a
            // square of a large prime (not squarefree) or a product of two
            // large primes we refuse to guess at.
            let r = rest.isqrt();
            if r * r == rest {
                return Err(Error::NotSquarefree(a));
            }
            return Err(Error::SearchExhausted {
                context: format!("factoring {a}"),
                cap: TRIAL_DIVISION_CAP,
            });
        }
    }
    odd_primes.sort_unstable();
    Ok(PrimeFactorization {
        value: a,
        odd_primes,
        has_factor_two,
    })
}

/// Legendre symbol (top/q) for an odd prime q, via Euler's criterion.
pub fn legendre(top: i128, q: u64) -> i32 {
    debug_assert!(q > 2 && is_prime(q), "legendre needs an odd prime modulus");
    let m = q as i128;
    let mut r = top % m;
    if r < 0 {
        r += m;
    }
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r as u64, (q - 1) / 2, q);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, q - 1);
        -1
    }
}

/// Square root modulo an odd prime (Tonelli–Shanks); None for non-residues.
pub fn sqrt_mod_prime(n: u64, q: u64) -> Option<u64> {
    debug_assert!(q > 2 && is_prime(q));
    let n = n % q;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (q - 1) / 2, q) != 1 {
        return None;
    }
    if q % 4 == 3 {
        return Some(pow_mod(n, (q + 1) / 4, q));
    }
    let s = (q - 1).trailing_zeros();
    let d = (q - 1) >> s;
    let z = (2..q).find(|&z| pow_mod(z, (q - 1) / 2, q) == q - 1).unwrap();
    let mut m = s;
    let mut c = pow_mod(z, d, q);
    let mut t = pow_mod(n, d, q);
    let mut r = pow_mod(n, d.div_ceil(2), q);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, q);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), q);
        m = i;
        c = mul_mod(b, b, q);
        t = mul_mod(t, c, q);
        r = mul_mod(r, b, q);
    }
    Some(r)
}

/// Full factorization of n by trial division (repeated factors allowed),
/// with the same large-cofactor policy as `factor_squarefree`.
pub fn factor_general(n: u64) -> Result<Vec<(u64, u32)>> {
    assert!(n >= 1);
    let mut rest = n;
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut d = 3u64;
    while d * d <= rest && d <= TRIAL_DIVISION_CAP {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        if is_prime(rest) {
            out.push((rest, 1));
        } else {
            return Err(Error::SearchExhausted {
                context: format!("factoring {n}"),
                cap: TRIAL_DIVISION_CAP,
            });
        }
    }
    Ok(out)
}

/// q* = (-1)^((q-1)/2) * q, the twist of an odd prime into the class ≡ 1 (mod 4).
pub fn q_star(q: u64) -> i128 {
    debug_assert!(q % 2 == 1 && is_prime(q));
    if q % 4 == 1 {
        q as i128
    } else {
        -(q as i128)
    }
}
