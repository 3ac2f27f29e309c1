//! Exact arithmetic in the real quadratic field k0 = Q(sqrt(p)) and its ring
//! of integers, for p = 2 or a prime p ≡ 1 (mod 4).
//!
//! Elements are stored as (s + t*sqrt(p)) / den with den ∈ {1, 2}; den = 2 is
//! only legal when p ≡ 1 (mod 4) and s ≡ t (mod 2), which is exactly the ring
//! of integers Z[(1 + sqrt(p))/2]. For p = 2 the ring of integers is Z[sqrt(2)]
//! and den is always 1.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::forms;

/// Iteration cap for the continued-fraction unit search.
pub const UNIT_SEARCH_CAP: u64 = 1_000_000;

/// Check that p is an accepted field parameter: 2 or a prime ≡ 1 (mod 4).
pub fn accepted_p(p: u64) -> bool {
    p == 2 || (p % 4 == 1 && is_prime(p))
}

/// An element (s + t*sqrt(p)) / den of the ring of integers of Q(sqrt(p)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    s: BigInt,
    t: BigInt,
    den: u8,
    p: u64,
}

impl QuadElem {
    /// Build an element in canonical form, validating integrality.
    pub fn new(s: impl Into<BigInt>, t: impl Into<BigInt>, den: u8, p: u64) -> Result<Self> {
        let (mut s, mut t): (BigInt, BigInt) = (s.into(), t.into());
        debug_assert!(accepted_p(p), "field parameter {p} not accepted");
        match den {
            1 => {}
            2 => {
                if p % 4 != 1 || (&s - &t).is_odd() {
                    return Err(Error::NotIntegral {
                        s: s.to_string(),
                        t: t.to_string(),
                        den,
                        p,
                    });
                }
            }
            _ => {
                return Err(Error::NotIntegral {
                    s: s.to_string(),
                    t: t.to_string(),
                    den,
                    p,
                })
            }
        }
        let mut den = den;
        if den == 2 && s.is_even() && t.is_even() {
            s /= 2;
            t /= 2;
            den = 1;
        }
        Ok(QuadElem { s, t, den, p })
    }

    pub fn from_int(n: impl Into<BigInt>, p: u64) -> Self {
        QuadElem::new(n, 0, 1, p).unwrap()
    }

    pub fn sqrt_p(p: u64) -> Self {
        QuadElem::new(0, 1, 1, p).unwrap()
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.t.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.s.is_one() && self.t.is_zero()
    }

    /// Rational part of the element if it is rational, else None.
    pub fn as_rational(&self) -> Option<BigInt> {
        if self.t.is_zero() {
            debug_assert_eq!(self.den, 1);
            Some(self.s.clone())
        } else {
            None
        }
    }

    pub fn try_mul(&self, rhs: &QuadElem) -> Result<QuadElem> {
        if self.p != rhs.p {
            return Err(Error::MismatchedField(self.p, rhs.p));
        }
        let p = BigInt::from(self.p);
        let s = &self.s * &rhs.s + &p * &self.t * &rhs.t;
        let t = &self.s * &rhs.t + &self.t * &rhs.s;
        let den = self.den * rhs.den;
        if den == 4 {
            // both halves: s ≡ t (mod 2) is preserved, and the product of two
            // integral elements is integral, so s and t are both even here.
            QuadElem::new(s / 2, t / 2, 2, self.p)
        } else {
            QuadElem::new(s, t, den, self.p)
        }
    }

    /// Galois conjugate: sqrt(p) ↦ -sqrt(p).
    pub fn conj(&self) -> QuadElem {
        QuadElem {
            s: self.s.clone(),
            t: -self.t.clone(),
            den: self.den,
            p: self.p,
        }
    }

    /// Field norm s^2 - p*t^2 (den-adjusted); an ordinary integer for every
    /// ring-of-integers element.
    pub fn norm(&self) -> BigInt {
        let raw = &self.s * &self.s - BigInt::from(self.p) * &self.t * &self.t;
        match self.den {
            1 => raw,
            _ => {
                debug_assert!((&raw % 4u8).is_zero());
                raw / 4
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> QuadElem {
        let mut base = self.clone();
        let mut acc = QuadElem::from_int(1, self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).unwrap();
            }
            base = base.try_mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Exact signs of the element under the two real embeddings
    /// (sqrt(p) ↦ +sqrt(p), sqrt(p) ↦ -sqrt(p)), as (+1 | -1) pairs.
    pub fn embedding_signs(&self) -> Result<(i32, i32)> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok((sign_at(&self.s, &self.t, self.p), sign_at(&self.s, &(-&self.t), self.p)))
    }

    /// Multiply by an integer power of `unit` (negative exponents use the
    /// conjugate; only valid when |norm(unit)| = 1).
    pub fn mul_unit_pow(&self, unit: &QuadElem, e: i32) -> QuadElem {
        debug_assert!(unit.norm().abs().is_one());
        if e == 0 {
            return self.clone();
        }
        let step = if e > 0 {
            unit.clone()
        } else {
            // unit^{-1} = conj / norm = ±conj
            if unit.norm().is_one() {
                unit.conj()
            } else {
                -unit.conj()
            }
        };
        let mut out = self.clone();
        for _ in 0..e.unsigned_abs() {
            out = out.try_mul(&step).unwrap();
        }
        out
    }

    /// Coordinates (c, d) in the integral basis {1, w}, where w = (1+sqrt(p))/2
    /// for odd p and w = sqrt(2) for p = 2.
    pub fn omega_coords(&self) -> (BigInt, BigInt) {
        if self.p == 2 {
            debug_assert_eq!(self.den, 1);
            return (self.s.clone(), self.t.clone());
        }
        match self.den {
            1 => (&self.s - &self.t, 2 * &self.t),
            _ => ((&self.s - &self.t) / 2, self.t.clone()),
        }
    }

    /// Inverse of `omega_coords`.
    pub fn from_omega_coords(c: &BigInt, d: &BigInt, p: u64) -> QuadElem {
        if p == 2 {
            return QuadElem::new(c.clone(), d.clone(), 1, 2).unwrap();
        }
        // c + d*(1+sqrt(p))/2 = (2c + d + d*sqrt(p))/2
        QuadElem::new(2 * c + d, d.clone(), 2, p).unwrap()
    }

    /// Residue class modulo 4 in the ring of integers.
    pub fn residue_mod4(&self) -> Residue4 {
        let (c, d) = self.omega_coords();
        Residue4 {
            c: c.mod_floor(&BigInt::from(4)).try_into().unwrap(),
            d: d.mod_floor(&BigInt::from(4)).try_into().unwrap(),
            p: self.p,
        }
    }

    /// Whether some ring-of-integers residue ξ mod 4 satisfies self ≡ ξ^2 (mod 4).
    ///
    /// Requires the element to be coprime to 2 (odd norm).
    pub fn is_square_mod4(&self) -> Result<bool> {
        if self.norm().is_even() {
            return Err(Error::NotOdd);
        }
        let r = self.residue_mod4();
        Ok(squares_mod4(self.p).contains(&(r.c, r.d)))
    }

    /// TeX rendering matching conventional typography.
    pub fn to_tex(&self) -> String {
        render(self, RenderStyle::Tex)
    }
}

fn sign_at(s: &BigInt, t: &BigInt, p: u64) -> i32 {
    // sign of s + t*sqrt(p), exactly: compare s^2 with p t^2 when signs differ.
    match (s.sign(), t.sign()) {
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => 0,
        (num_bigint::Sign::NoSign, sg) | (sg, num_bigint::Sign::NoSign) => {
            if sg == num_bigint::Sign::Plus {
                1
            } else {
                -1
            }
        }
        (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => 1,
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => -1,
        (ssign, _) => {
            let lhs = s * s;
            let rhs = BigInt::from(p) * t * t;
            let s_dominates = lhs > rhs;
            match (s_dominates, ssign == num_bigint::Sign::Plus) {
                (true, true) | (false, false) => 1,
                _ => -1,
            }
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            s: -self.s,
            t: -self.t,
            den: self.den,
            p: self.p,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -self.clone()
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.try_mul(rhs).expect("multiplying elements of different fields")
    }
}

/// One of the 16 residue classes of the ring of integers modulo 4, in the
/// integral basis {1, w}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue4 {
    pub c: u8,
    pub d: u8,
    pub p: u64,
}

impl fmt::Display for Residue4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w mod 4", self.c, self.d)
    }
}

/// The set of squares in (O/4O), as {1, w} coordinates mod 4.
pub fn squares_mod4(p: u64) -> Vec<(u8, u8)> {
    // w^2 = 2 for p = 2, and w^2 = (p-1)/4 + w for odd p.
    let mut set = Vec::new();
    for c in 0u16..4 {
        for d in 0u16..4 {
            let (a, b) = if p == 2 {
                ((c * c + 2 * d * d) % 4, (2 * c * d) % 4)
            } else {
                let cap_p = ((p as u16 - 1) / 4) % 4;
                ((c * c + cap_p * d * d) % 4, (2 * c * d + d * d) % 4)
            };
            let entry = (a as u8, b as u8);
            if !set.contains(&entry) {
                set.push(entry);
            }
        }
    }
    set.sort_unstable();
    set
}

/// λ ∈ {1, 3}: the power making ε_p^λ integral with the parity pattern
/// u ≡ 0 (mod 2), v ≡ 1 (mod 4); 1 when p ≡ 1 (mod 8), 3 when p ≡ 5 (mod 8).
pub fn lambda_exponent(p: u64) -> Result<u32> {
    if p == 2 {
        return Err(Error::LambdaUndefinedForTwo);
    }
    debug_assert!(accepted_p(p));
    Ok(if p % 8 == 1 { 1 } else { 3 })
}

/// Fundamental unit ε_p > 1 of the ring of integers of Q(sqrt(p)).
///
/// The continued fraction of sqrt(p) yields the smallest unit > 1 of
/// Z[sqrt(p)]; for p ≡ 5 (mod 8) the ring of integers may contain a smaller
/// half-integral unit ν with ν^3 equal to that one, recovered exactly from
/// the trace equation s^3 + 3s = 2u. Norm is -1 for every accepted p.
pub fn fundamental_unit(p: u64) -> Result<QuadElem> {
    fundamental_unit_capped(p, UNIT_SEARCH_CAP)
}

/// `fundamental_unit` with an explicit continued-fraction iteration cap.
pub fn fundamental_unit_capped(p: u64, cap: u64) -> Result<QuadElem> {
    debug_assert!(accepted_p(p));
    let (x, y, norm_is_minus_one) = pell_unit(p, cap)?;
    debug_assert!(norm_is_minus_one, "negative Pell must be solvable for accepted p");
    let integral = QuadElem::new(x, y, 1, p)?;
    if p % 8 == 5 {
        if let Some(half) = integral_cube_root_half(&integral, p) {
            return Ok(half);
        }
    }
    Ok(integral)
}

/// Smallest unit > 1 of Z[sqrt(p)] via the continued fraction of sqrt(p).
/// Returns (x, y, norm_is_minus_one) with x^2 - p y^2 = ±1.
fn pell_unit(p: u64, cap: u64) -> Result<(BigInt, BigInt, bool)> {
    let a0 = BigInt::from(p.isqrt());
    let n = BigInt::from(p);
    // surd state: (P + sqrt(n)) / Q
    let mut big_p = BigInt::zero();
    let mut big_q = BigInt::one();
    let mut a = a0.clone();
    // convergents
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    for i in 0..cap {
        big_p = &a * &big_q - &big_p;
        big_q = (&n - &big_p * &big_p) / &big_q;
        if big_q.is_one() {
            // period length i+1; convergent h/k solves x^2 - p y^2 = (-1)^(i+1)
            let norm_is_minus_one = i % 2 == 0;
            return Ok((h, k, norm_is_minus_one));
        }
        a = (&big_p + &a0) / &big_q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    Err(Error::SearchExhausted {
        context: format!("continued fraction of sqrt({p})"),
        cap,
    })
}

/// For u + v*sqrt(p) of norm -1, find ν = (s + t*sqrt(p))/2 with ν^3 equal to
/// it, if such a half-integral element exists. Exact: s is pinned by the
/// trace identity s^3 + 3s = 2u, then t^2 = (s^2 + 4)/p.
fn integral_cube_root_half(unit: &QuadElem, p: u64) -> Option<QuadElem> {
    let two_u: BigInt = 2 * unit.s();
    let s = two_u.cbrt();
    if &s * &s * &s + 3 * &s != two_u {
        return None;
    }
    let s2p4: BigInt = &s * &s + 4;
    let (q, r) = s2p4.div_rem(&BigInt::from(p));
    if !r.is_zero() {
        return None;
    }
    let t = q.sqrt();
    if &t * &t != q {
        return None;
    }
    if s.is_even() || t.is_even() {
        return None;
    }
    let nu = QuadElem::new(s, t, 2, p).ok()?;
    debug_assert_eq!(nu.pow(3), *unit);
    debug_assert_eq!(nu.norm(), BigInt::from(-1));
    Some(nu)
}

/// Class number of Q(sqrt(p)), by enumerating the reduction cycles of
/// primitive binary quadratic forms of the field discriminant (p for odd p,
/// 8 for p = 2). Equals the narrow class number, which coincides with the
/// wide one since the fundamental unit has norm -1.
pub fn class_number(p: u64) -> u64 {
    debug_assert!(accepted_p(p));
    let disc = if p == 2 { 8 } else { p };
    forms::class_number_direct(disc)
}

enum RenderStyle {
    Ascii,
    Tex,
}

fn render(e: &QuadElem, style: RenderStyle) -> String {
    let root = match style {
        RenderStyle::Ascii => format!("sqrt({})", e.p),
        RenderStyle::Tex => format!("\\sqrt{{{}}}", e.p),
    };
    let star = match style {
        RenderStyle::Ascii => "*",
        RenderStyle::Tex => "",
    };
    let inner = |s: &BigInt, t: &BigInt| -> String {
        if t.is_zero() {
            return s.to_string();
        }
        let coeff = if t.abs().is_one() {
            root.clone()
        } else {
            format!("{}{}{}", t.abs(), star, root)
        };
        if s.is_zero() {
            if t.is_negative() {
                format!("-{coeff}")
            } else {
                coeff
            }
        } else if t.is_negative() {
            format!("{s}-{coeff}")
        } else {
            format!("{s}+{coeff}")
        }
    };
    let negate_all = e.s.is_negative() && (e.t.is_negative() || e.t.is_zero())
        || e.t.is_negative() && e.s.is_zero();
    let (s, t) = if negate_all {
        (-&e.s, -&e.t)
    } else {
        (e.s.clone(), e.t.clone())
    };
    let body = inner(&s, &t);
    match (e.den, negate_all, style) {
        (1, false, _) => body,
        (1, true, RenderStyle::Ascii) => {
            if t.is_zero() || s.is_zero() {
                format!("-{body}")
            } else {
                format!("-({body})")
            }
        }
        (1, true, RenderStyle::Tex) => {
            if t.is_zero() || s.is_zero() {
                format!("-{body}")
            } else {
                format!("-({body})")
            }
        }
        (_, false, RenderStyle::Ascii) => format!("({body})/2"),
        (_, true, RenderStyle::Ascii) => format!("-({body})/2"),
        (_, false, RenderStyle::Tex) => format!("\\frac{{{body}}}{{2}}"),
        (_, true, RenderStyle::Tex) => format!("-\\frac{{{body}}}{{2}}"),
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, RenderStyle::Ascii))
    }
}

/// Parse the canonical ASCII display form back into an element of Q(sqrt(p)).
pub fn parse_elem(input: &str, p: u64) -> Result<QuadElem> {
    let err = || Error::ParseElement {
        input: input.to_string(),
        p,
    };
    let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let (negated, text) = match text.strip_prefix("-(") {
        Some(rest) => (true, format!("({rest}")),
        None => (false, text),
    };
    let (body, den) = if let Some(stripped) = text.strip_suffix("/2") {
        let inner = stripped
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(err)?;
        (inner.to_string(), 2u8)
    } else {
        let inner = text
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(&text);
        (inner.to_string(), 1u8)
    };
    // split into signed terms
    let mut terms: Vec<String> = Vec::new();
    let mut current = String::new();
    for (i, ch) in body.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !current.is_empty() {
            terms.push(std::mem::take(&mut current));
        }
        current.push(ch);
    }
    if !current.is_empty() {
        terms.push(current);
    }
    if terms.is_empty() || terms.len() > 2 {
        return Err(err());
    }
    let mut s = BigInt::zero();
    let mut t = BigInt::zero();
    let mut seen_root = false;
    let root = format!("sqrt({p})");
    for term in &terms {
        let (sign, rest) = match term.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        if let Some(coeff) = rest.strip_suffix(root.as_str()) {
            if seen_root {
                return Err(err());
            }
            seen_root = true;
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let value: BigInt = if coeff.is_empty() {
                BigInt::one()
            } else {
                coeff.parse().map_err(|_| err())?
            };
            t = BigInt::from(sign) * value;
        } else {
            if !s.is_zero() {
                return Err(err());
            }
            let value: BigInt = rest.parse().map_err(|_| err())?;
            s = BigInt::from(sign) * value;
        }
    }
    if negated {
        s = -s;
        t = -t;
    }
    QuadElem::new(s, t, den, p).map_err(|_| err())
}
