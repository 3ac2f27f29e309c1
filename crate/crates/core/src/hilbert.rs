//! Hilbert genus field construction: alpha* normalization of norm-equation
//! solutions and assembly of the full generator list, with rank accounting
//! r2 = t - e - 1 and attached verification verdicts.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fieldcase::{
    ramified_inventory, relative_discriminant_coeff, ACase, CaseProfile, PCase,
    UNIT_NORM_INDEX_EXPONENT,
};
use crate::normeq::{NormCache, NormSolution};
use crate::quadfield::QuadElem;
use crate::verify;

/// A square-class generator of K^(*) or E over K: a rational integer or an
/// element of k0, tagged by provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClass {
    pub payload: SquarePayload,
    pub kind: SquareClassKind,
    pub source_q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquarePayload {
    Rational(i128),
    Quadratic(QuadElem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareClassKind {
    QStar,
    AlphaStar,
    UnitEps,
    SignUnit,
}

impl SquareClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SquareClassKind::QStar => "q_star",
            SquareClassKind::AlphaStar => "alpha_star",
            SquareClassKind::UnitEps => "unit_eps",
            SquareClassKind::SignUnit => "sign_unit",
        }
    }
}

impl SquareClass {
    pub fn display(&self) -> String {
        match &self.payload {
            SquarePayload::Rational(r) => r.to_string(),
            SquarePayload::Quadratic(u) => u.to_string(),
        }
    }

    pub fn tex(&self) -> String {
        match &self.payload {
            SquarePayload::Rational(r) => r.to_string(),
            SquarePayload::Quadratic(u) => u.to_tex(),
        }
    }

    /// The payload as an element of k0 = Q(sqrt(p)).
    pub fn as_elem(&self, p: u64) -> QuadElem {
        match &self.payload {
            SquarePayload::Rational(r) => QuadElem::from_int(BigInt::from(*r), p),
            SquarePayload::Quadratic(u) => {
                debug_assert_eq!(u.p(), p);
                u.clone()
            }
        }
    }
}

/// Sign/unit normalization of a norm-equation solution into the square-class
/// generator alpha*, such that K(sqrt(alpha*))/K is unramified.
///
/// Odd p: with s = (-1)^((x+y-1)/2), alpha* = s*alpha for q ≡ 1 (mod 4) and
/// s*alpha*sqrt(p) for q ≡ 3 (mod 4). For p = 2: alpha* = (-1)^((x-1)/2) *
/// alpha when q ≡ 1 (mod 8), and ±eps_2*alpha when q ≡ 7 (mod 8), picked by
/// the mod-4 square criterion (the y ≡ 3 (mod 4) rule); every p = 2 result
/// is post-validated against that criterion, falling back to a search over
/// {±alpha, ±eps_2*alpha}.
pub fn alpha_star(sol: &NormSolution, eps: &QuadElem) -> Result<SquareClass> {
    let alpha = sol.element();
    let payload = if sol.p == 2 {
        let primary = if sol.q % 8 == 1 {
            let exp = (&sol.x - 1u8) / 2u8;
            if exp.is_even() {
                alpha.clone()
            } else {
                -&alpha
            }
        } else {
            let eps_alpha = eps.try_mul(&alpha)?;
            if sol.y.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
                -eps_alpha
            } else {
                eps_alpha
            }
        };
        if primary.is_square_mod4()? {
            primary
        } else {
            let eps_alpha = eps.try_mul(&alpha)?;
            let candidates = [alpha.clone(), -&alpha, eps_alpha.clone(), -&eps_alpha];
            candidates
                .into_iter()
                .find(|c| c.is_square_mod4().unwrap_or(false))
                .ok_or(Error::NormalizationFailed { p: sol.p, q: sol.q })?
        }
    } else {
        let exp: BigInt = (&sol.x + &sol.y - 1u8) / 2u8;
        let signed = if exp.is_even() { alpha.clone() } else { -&alpha };
        let out = if sol.q % 4 == 1 {
            signed
        } else {
            signed.try_mul(&QuadElem::sqrt_p(sol.p))?
        };
        if !out.is_square_mod4()? {
            return Err(Error::NormalizationFailed { p: sol.p, q: sol.q });
        }
        out
    };
    Ok(SquareClass {
        payload: SquarePayload::Quadratic(payload),
        kind: SquareClassKind::AlphaStar,
        source_q: Some(sol.q),
    })
}

/// Predicted 2-rank of Cl(K) by case: n+m, n+m+1 or n+m+2.
pub fn predicted_rank(profile: &CaseProfile) -> u32 {
    let base = (profile.n + profile.m) as u32;
    match (profile.p_case, profile.effective_a_case()) {
        (PCase::Two, _) => base,
        (PCase::FiveMod8, ACase::Odd1Mod4) => base,
        (PCase::FiveMod8, _) => base + 1,
        (PCase::OneMod8, ACase::Odd3Mod4) => base,
        (PCase::OneMod8, _) => base + 2,
    }
}

/// Output record: generators, rank accounting and verification verdicts.
#[derive(Debug, Clone)]
pub struct HilbertGenusReport {
    pub profile: CaseProfile,
    pub genus_generators: Vec<SquareClass>,
    pub hilbert_generators: Vec<SquareClass>,
    /// Norm-equation solutions per split prime, ascending by q.
    pub solutions: Vec<NormSolution>,
    pub t: u32,
    pub e: u32,
    pub rank: u32,
    pub verification: verify::VerificationReport,
}

/// Construct the Hilbert genus field generator list for a resolved profile
/// and certify it (independence, unramifiedness, rank formula).
pub fn hilbert_genus(profile: &CaseProfile, cache: &NormCache) -> Result<HilbertGenusReport> {
    let genus_generators = crate::fieldcase::genus_field(profile);
    let mut hilbert_generators: Vec<SquareClass> = genus_generators.clone();

    let mut solutions = Vec::with_capacity(profile.m);
    for &q in &profile.split_primes {
        let sol = if profile.p == 2 {
            cache.two_rep(q)?
        } else {
            cache.solution(profile.p, q, profile.lambda_h())?
        };
        hilbert_generators.push(alpha_star(&sol, &profile.eps)?);
        solutions.push(sol);
    }
    // eps_p enters only in the p ≡ 1 (mod 8) cases with a unit-like generator
    if profile.p_case == PCase::OneMod8 && profile.effective_a_case() != ACase::Odd3Mod4 {
        hilbert_generators.push(SquareClass {
            payload: SquarePayload::Quadratic(profile.eps.clone()),
            kind: SquareClassKind::UnitEps,
            source_q: None,
        });
    }

    let t = ramified_inventory(profile).t;
    let e = UNIT_NORM_INDEX_EXPONENT;
    let rank = hilbert_generators.len() as u32;
    let verification = verify::certify(profile, &genus_generators, &hilbert_generators, t, e, rank)?;
    Ok(HilbertGenusReport {
        profile: profile.clone(),
        genus_generators,
        hilbert_generators,
        solutions,
        t,
        e,
        rank,
        verification,
    })
}

/// Convenience wrapper: resolve + construct + certify in one step.
pub fn full_report(p: u64, a: u64, strict: bool) -> Result<HilbertGenusReport> {
    let profile = crate::fieldcase::resolve(p, a)?;
    let cache = NormCache::new(strict);
    hilbert_genus(&profile, &cache)
}

/// The relative discriminant coefficient, re-exported for report assembly.
pub fn rel_disc_coeff(profile: &CaseProfile) -> u128 {
    relative_discriminant_coeff(profile)
}
