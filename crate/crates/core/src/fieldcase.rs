//! Instance resolution for K = Q(sqrt(-a*eps_p*sqrt(p))): input validation,
//! case dispatch, relative discriminants, the ramified-place inventory, and
//! the genus field generator table.

use num_bigint::BigInt;
#[cfg(test)]
use num_traits::Signed;

use crate::arith::{factor_squarefree, is_prime, legendre, q_star, PrimeFactorization};
use crate::error::{Error, Result};
use crate::hilbert::{SquareClass, SquareClassKind, SquarePayload};
use crate::quadfield::{class_number, fundamental_unit, lambda_exponent, QuadElem};

/// The exponent e in the rank formula r2 = t - e - 1; equal to 2 in every
/// case here because -1, eps_p and -eps_p are all non-norms at a real place
/// (see `verify::real_place_certificate`).
pub const UNIT_NORM_INDEX_EXPONENT: u32 = 2;

/// Residue case of a (or of its odd core when a is even).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ACase {
    Odd1Mod4,
    Odd3Mod4,
    EvenCore1Mod4,
    EvenCore3Mod4,
}

impl ACase {
    pub fn as_str(&self) -> &'static str {
        match self {
            ACase::Odd1Mod4 => "odd_1mod4",
            ACase::Odd3Mod4 => "odd_3mod4",
            ACase::EvenCore1Mod4 => "even_core1mod4",
            ACase::EvenCore3Mod4 => "even_core3mod4",
        }
    }

    pub fn parse(text: &str) -> Option<ACase> {
        match text {
            "odd_1mod4" => Some(ACase::Odd1Mod4),
            "odd_3mod4" => Some(ACase::Odd3Mod4),
            "even_core1mod4" => Some(ACase::EvenCore1Mod4),
            "even_core3mod4" => Some(ACase::EvenCore3Mod4),
            _ => None,
        }
    }

    fn is_even(&self) -> bool {
        matches!(self, ACase::EvenCore1Mod4 | ACase::EvenCore3Mod4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PCase {
    OneMod8,
    FiveMod8,
    Two,
}

impl PCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            PCase::OneMod8 => "p1mod8",
            PCase::FiveMod8 => "p5mod8",
            PCase::Two => "p_two",
        }
    }
}

/// Fully resolved instance data for a pair (p, a).
#[derive(Debug, Clone)]
pub struct CaseProfile {
    pub p: u64,
    pub a: u64,
    pub factorization: PrimeFactorization,
    /// Odd primes q | a with (p/q) = +1, ascending.
    pub split_primes: Vec<u64>,
    /// Odd primes q | a with (p/q) = -1, ascending.
    pub inert_primes: Vec<u64>,
    pub n: usize,
    pub m: usize,
    pub a_case: ACase,
    pub p_case: PCase,
    /// None for p = 2.
    pub lambda: Option<u32>,
    pub h: u64,
    pub eps: QuadElem,
    /// delta = -a * eps_p * sqrt(p); the element K is built from.
    pub delta: QuadElem,
    /// When set, case dispatch uses this tag instead of the computed one.
    pub case_override: Option<ACase>,
}

impl CaseProfile {
    pub fn effective_a_case(&self) -> ACase {
        self.case_override.unwrap_or(self.a_case)
    }

    /// lambda * h, the guaranteed norm-equation exponent (odd p only).
    pub fn lambda_h(&self) -> u32 {
        self.lambda.expect("lambda_h is only defined for odd p") * self.h as u32
    }

    pub fn with_case_override(mut self, tag: ACase) -> Result<CaseProfile> {
        if tag.is_even() != self.a_case.is_even() {
            return Err(Error::InvalidA {
                a: self.a,
                reason: format!(
                    "case override {} changes the parity of a (computed {})",
                    tag.as_str(),
                    self.a_case.as_str()
                ),
            });
        }
        self.case_override = Some(tag);
        Ok(self)
    }
}

/// Validate (p, a) and compute the full case profile.
pub fn resolve(p: u64, a: u64) -> Result<CaseProfile> {
    if !(p == 2 || (p % 4 == 1 && is_prime(p))) {
        return Err(Error::InvalidP(p));
    }
    if a == 0 {
        return Err(Error::InvalidA {
            a,
            reason: "a must be positive".into(),
        });
    }
    if p == 2 && a % 2 == 0 {
        return Err(Error::InvalidA {
            a,
            reason: "a must be odd when p = 2".into(),
        });
    }
    if a % p == 0 {
        return Err(Error::InvalidA {
            a,
            reason: format!("a shares the factor {p} with p"),
        });
    }
    let factorization = factor_squarefree(a).map_err(|e| match e {
        Error::NotSquarefree(_) => Error::InvalidA {
            a,
            reason: "a is not squarefree".into(),
        },
        other => other,
    })?;

    let mut split_primes = Vec::new();
    let mut inert_primes = Vec::new();
    for &q in &factorization.odd_primes {
        if legendre(p as i128, q) == 1 {
            split_primes.push(q);
        } else {
            inert_primes.push(q);
        }
    }
    let (n, m) = (factorization.odd_primes.len(), split_primes.len());

    let core = factorization.odd_core();
    let a_case = match (factorization.has_factor_two, core % 4) {
        (false, 1) => ACase::Odd1Mod4,
        (false, _) => ACase::Odd3Mod4,
        (true, 1) => ACase::EvenCore1Mod4,
        (true, _) => ACase::EvenCore3Mod4,
    };
    let p_case = match p {
        2 => PCase::Two,
        _ if p % 8 == 1 => PCase::OneMod8,
        _ => PCase::FiveMod8,
    };
    let lambda = if p == 2 {
        None
    } else {
        Some(lambda_exponent(p)?)
    };
    let h = class_number(p);
    let eps = fundamental_unit(p)?;
    let minus_a = QuadElem::from_int(-BigInt::from(a), p);
    let delta = minus_a
        .try_mul(&eps)?
        .try_mul(&QuadElem::sqrt_p(p))?;
    debug_assert_eq!(delta.norm(), BigInt::from(p) * BigInt::from(a) * BigInt::from(a));
    debug_assert_eq!(delta.embedding_signs()?, (-1, -1));

    Ok(CaseProfile {
        p,
        a,
        factorization,
        split_primes,
        inert_primes,
        n,
        m,
        a_case,
        p_case,
        lambda,
        h,
        eps,
        delta,
        case_override: None,
    })
}

/// Discriminant pair of a cyclic quartic field in the standard form
/// Q(sqrt(a(d + b*sqrt(d)))) with d = b^2 + c^2 squarefree, b, c > 0 and a
/// odd squarefree coprime to d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticDiscriminants {
    /// Absolute discriminant.
    pub absolute: BigInt,
    /// Relative discriminant over Q(sqrt(d)) is rel_coeff * sqrt(d).
    pub rel_coeff: BigInt,
    pub d: u64,
}

pub fn cyclic_quartic_discriminants(a: u64, b: u64, d: u64) -> Result<QuarticDiscriminants> {
    let malformed = |reason: &str| Error::MalformedStandardForm(format!("(a={a}, b={b}, d={d}): {reason}"));
    if a % 2 == 0 {
        return Err(malformed("a must be odd"));
    }
    factor_squarefree(a).map_err(|_| malformed("a must be squarefree"))?;
    factor_squarefree(d).map_err(|_| malformed("d must be squarefree"))?;
    if b == 0 || d <= b * b {
        return Err(malformed("need d = b^2 + c^2 with b, c > 0"));
    }
    let c2 = d - b * b;
    let c = c2.isqrt();
    if c * c != c2 {
        return Err(malformed("d - b^2 is not a positive square"));
    }
    if num_integer::gcd(a, d) != 1 {
        return Err(malformed("a and d must be coprime"));
    }
    let a_big = BigInt::from(a);
    let d_big = BigInt::from(d);
    let a2d3: BigInt = &a_big * &a_big * &d_big * &d_big * &d_big;
    let (two_power, rel_factor) = if d % 2 == 0 {
        (8u32, 4u64)
    } else if b % 2 == 0 && (a + b) % 4 == 3 {
        (4, 4)
    } else if b % 2 == 0 {
        debug_assert_eq!((a + b) % 4, 1);
        (0, 1)
    } else {
        (6, 8)
    };
    Ok(QuarticDiscriminants {
        absolute: a2d3 << two_power,
        rel_coeff: BigInt::from(rel_factor) * a_big,
        d,
    })
}

/// Coefficient c with delta_{K/k0} = c * sqrt(p), by case.
pub fn relative_discriminant_coeff(profile: &CaseProfile) -> u128 {
    let a = profile.a as u128;
    match (profile.p_case, profile.effective_a_case()) {
        (PCase::Two, _) => 4 * a,
        (PCase::FiveMod8, ACase::Odd1Mod4) => a,
        (PCase::OneMod8, ACase::Odd3Mod4) => a,
        _ => 4 * a,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedPrime {
    pub q: u64,
    pub splitting: SplittingType,
    /// Number of prime ideals of k0 above q that ramify in K/k0.
    pub ramified_ideals: u32,
}

/// The places of k0 ramifying in K/k0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedInventory {
    pub finite: Vec<RamifiedPrime>,
    pub infinite_count: u32,
    pub t: u32,
}

pub fn ramified_inventory(profile: &CaseProfile) -> RamifiedInventory {
    let mut finite = Vec::new();
    for &q in &profile.factorization.odd_primes {
        let split = profile.split_primes.binary_search(&q).is_ok();
        finite.push(RamifiedPrime {
            q,
            splitting: if split { SplittingType::Split } else { SplittingType::Inert },
            ramified_ideals: if split { 2 } else { 1 },
        });
    }
    // the ramified prime of k0/Q itself: (sqrt(p))
    finite.push(RamifiedPrime {
        q: profile.p,
        splitting: SplittingType::Ramified,
        ramified_ideals: 1,
    });
    // primes above 2 ramify in K/k0 exactly when 4 divides the relative
    // discriminant coefficient (for p = 2 they are already the (sqrt(2)) entry)
    if profile.p != 2 && relative_discriminant_coeff(profile) % 4 == 0 {
        let (splitting, count) = if profile.p % 8 == 1 {
            (SplittingType::Split, 2)
        } else {
            (SplittingType::Inert, 1)
        };
        finite.push(RamifiedPrime {
            q: 2,
            splitting,
            ramified_ideals: count,
        });
    }
    let t = finite.iter().map(|f| f.ramified_ideals).sum::<u32>() + 2;
    RamifiedInventory {
        finite,
        infinite_count: 2,
        t,
    }
}

/// Generators of the genus field K^(*) over K: the unit-like generator (if
/// any) followed by the twisted primes q_i* ascending.
pub fn genus_field(profile: &CaseProfile) -> Vec<SquareClass> {
    let mut out = Vec::new();
    let unit_like: Option<i128> = match (profile.p_case, profile.effective_a_case()) {
        (PCase::Two, _) => None,
        (PCase::FiveMod8, ACase::Odd1Mod4) => None,
        (PCase::FiveMod8, ACase::Odd3Mod4) => Some(-1),
        (PCase::FiveMod8, ACase::EvenCore1Mod4) => Some(2),
        (PCase::FiveMod8, ACase::EvenCore3Mod4) => Some(-2),
        (PCase::OneMod8, ACase::Odd3Mod4) => None,
        (PCase::OneMod8, ACase::Odd1Mod4) => Some(-1),
        (PCase::OneMod8, ACase::EvenCore1Mod4) => Some(-2),
        (PCase::OneMod8, ACase::EvenCore3Mod4) => Some(2),
    };
    if let Some(u) = unit_like {
        out.push(SquareClass {
            payload: SquarePayload::Rational(u),
            kind: SquareClassKind::SignUnit,
            source_q: None,
        });
    }
    for &q in &profile.factorization.odd_primes {
        out.push(SquareClass {
            payload: SquarePayload::Rational(q_star(q)),
            kind: SquareClassKind::QStar,
            source_q: Some(q),
        });
    }
    out
}
