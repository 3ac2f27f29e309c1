//! Indefinite binary quadratic forms (a, b, c) of positive non-square
//! discriminant: reduction, cycle enumeration, class counting, and extraction
//! of representations x^2 - p y^2 = N through the principal class.
//!
//! Proper equivalence classes of primitive forms of discriminant D biject
//! with the narrow class group of the order of discriminant D, and the
//! reduced forms of one class form a single rho-cycle; both facts drive the
//! class-number count and the norm-equation solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const CYCLE_CAP: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Form {
        Form {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - 4 * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Reduced for positive non-square discriminant:
    /// |sqrt(D) - 2|a|| < b < sqrt(D), in exact integer terms.
    fn is_reduced(&self, sqrt_disc: &BigInt) -> bool {
        if !self.b.is_positive() || &self.b > sqrt_disc {
            return false;
        }
        let two_abs_a = 2 * self.a.abs();
        sqrt_disc - &self.b < two_abs_a && two_abs_a <= sqrt_disc + &self.b
    }
}

/// Right action of a 2x2 integer matrix with det ±1 on forms: f -> f∘M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub m00: BigInt,
    pub m01: BigInt,
    pub m10: BigInt,
    pub m11: BigInt,
}

impl Transform {
    pub fn identity() -> Transform {
        Transform {
            m00: BigInt::one(),
            m01: BigInt::zero(),
            m10: BigInt::zero(),
            m11: BigInt::one(),
        }
    }

    fn rho_step(shift: &BigInt) -> Transform {
        // f(x, y) -> f(-y, x + shift*y)
        Transform {
            m00: BigInt::zero(),
            m01: BigInt::from(-1),
            m10: BigInt::one(),
            m11: shift.clone(),
        }
    }

    fn translation(shift: &BigInt) -> Transform {
        Transform {
            m00: BigInt::one(),
            m01: shift.clone(),
            m10: BigInt::zero(),
            m11: BigInt::one(),
        }
    }

    pub fn compose(&self, rhs: &Transform) -> Transform {
        Transform {
            m00: &self.m00 * &rhs.m00 + &self.m01 * &rhs.m10,
            m01: &self.m00 * &rhs.m01 + &self.m01 * &rhs.m11,
            m10: &self.m10 * &rhs.m00 + &self.m11 * &rhs.m10,
            m11: &self.m10 * &rhs.m01 + &self.m11 * &rhs.m11,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.m00 * &self.m11 - &self.m01 * &self.m10
    }

    pub fn inverse(&self) -> Transform {
        let d = self.det();
        debug_assert!(d.abs().is_one());
        if d.is_one() {
            Transform {
                m00: self.m11.clone(),
                m01: -self.m01.clone(),
                m10: -self.m10.clone(),
                m11: self.m00.clone(),
            }
        } else {
            Transform {
                m00: -self.m11.clone(),
                m01: self.m01.clone(),
                m10: self.m10.clone(),
                m11: -self.m00.clone(),
            }
        }
    }

    pub fn apply(&self, f: &Form) -> Form {
        let a = f.eval(&self.m00, &self.m10);
        let c = f.eval(&self.m01, &self.m11);
        let b = 2 * &f.a * &self.m00 * &self.m01
            + &f.b * (&self.m00 * &self.m11 + &self.m01 * &self.m10)
            + 2 * &f.c * &self.m10 * &self.m11;
        Form { a, b, c }
    }
}

/// One rho step: (a, b, c) -> (c, r, (r^2 - D)/(4c)) with r ≡ -b (mod 2|c|)
/// in the standard window. Returns the new form and the step transform.
fn rho(f: &Form, sqrt_disc: &BigInt) -> (Form, Transform) {
    let two_c = 2 * f.c.abs();
    let abs_c = f.c.abs();
    // window for r
    let (low, high) = if abs_c > *sqrt_disc {
        (-&abs_c, abs_c.clone())
    } else {
        (sqrt_disc - &two_c, sqrt_disc.clone())
    };
    // r ≡ -b (mod 2|c|), low < r <= high
    let r = {
        let base = (-&f.b - &low).mod_floor(&two_c) + &low;
        if base <= low {
            base + &two_c
        } else {
            base
        }
    };
    debug_assert!(r > low && r <= high);
    debug_assert!(((&r + &f.b) % &two_c).is_zero());
    let shift = (&r + &f.b) / (2 * &f.c);
    let t = Transform::rho_step(&shift);
    let g = t.apply(f);
    debug_assert_eq!(g.b, r);
    (g, t)
}

/// Reduce a form, returning the reduced form and the cumulative transform U
/// with f∘U = reduced.
pub fn reduce(f: &Form) -> Result<(Form, Transform)> {
    let disc = f.discriminant();
    debug_assert!(disc.is_positive());
    let sqrt_disc = disc.sqrt();
    debug_assert!(&sqrt_disc * &sqrt_disc != disc, "square discriminant not supported");
    let mut current = f.clone();
    let mut acc = Transform::identity();
    for _ in 0..CYCLE_CAP {
        if current.is_reduced(&sqrt_disc) {
            return Ok((current, acc));
        }
        let (next, step) = rho(&current, &sqrt_disc);
        acc = acc.compose(&step);
        current = next;
    }
    Err(Error::SearchExhausted {
        context: "reducing a quadratic form".into(),
        cap: CYCLE_CAP,
    })
}

/// Walk the full rho-cycle of a reduced form, yielding every member once.
fn cycle_members(start: &Form, sqrt_disc: &BigInt) -> Result<Vec<Form>> {
    let mut members = vec![start.clone()];
    let mut current = start.clone();
    for _ in 0..CYCLE_CAP {
        let (next, _) = rho(&current, sqrt_disc);
        if next == *start {
            return Ok(members);
        }
        members.push(next.clone());
        current = next;
    }
    Err(Error::SearchExhausted {
        context: "walking a reduction cycle".into(),
        cap: CYCLE_CAP,
    })
}

/// All reduced primitive forms of positive non-square discriminant, in a
/// fixed lexicographic order.
pub fn reduced_primitive_forms(disc: u64) -> Vec<Form> {
    let d = BigInt::from(disc);
    let s = d.sqrt();
    let mut out = Vec::new();
    let smax: u64 = (&s).try_into().unwrap();
    let parity = disc % 2;
    for b in 1..=smax {
        if b % 2 != parity {
            continue;
        }
        let m = disc - b * b;
        debug_assert!(m % 4 == 0);
        let m = m / 4;
        for abs_a in 1..=m {
            if 2 * abs_a > smax + b {
                break;
            }
            // window: s - b < 2|a| <= s + b
            if m % abs_a != 0 || 2 * abs_a + b <= smax {
                continue;
            }
            let abs_c = m / abs_a;
            for (a, c) in [
                (BigInt::from(abs_a), -BigInt::from(abs_c)),
                (-BigInt::from(abs_a), BigInt::from(abs_c)),
            ] {
                let f = Form::new(a, b, c);
                if f.is_primitive() {
                    debug_assert!(f.is_reduced(&s));
                    debug_assert_eq!(f.discriminant(), d);
                    out.push(f);
                }
            }
        }
    }
    out.sort_by(|x, y| (&x.b, &x.a).cmp(&(&y.b, &y.a)));
    out
}

/// Class number by direct cycle partition of the reduced primitive forms.
pub fn class_number_direct(disc: u64) -> u64 {
    partition_cycles(disc, None)
}

/// Same count, second setting: forms are processed in a seeded shuffled
/// order and each cycle representative is scrambled through random
/// unimodular transforms and re-reduced, asserting it falls back into its
/// own cycle. A disagreement would make this panic rather than miscount.
pub fn class_number_scrambled(disc: u64, seed: u64) -> u64 {
    partition_cycles(disc, Some(seed))
}

fn partition_cycles(disc: u64, scramble_seed: Option<u64>) -> u64 {
    let sqrt_disc = BigInt::from(disc).sqrt();
    let mut forms = reduced_primitive_forms(disc);
    let mut rng = scramble_seed.map(Lcg::new);
    if let Some(rng) = rng.as_mut() {
        rng.shuffle(&mut forms);
    }
    let mut visited: std::collections::HashSet<Form> = std::collections::HashSet::new();
    let mut cycles = 0u64;
    for f in &forms {
        if visited.contains(f) {
            continue;
        }
        cycles += 1;
        let members = cycle_members(f, &sqrt_disc).expect("cycle walk within cap");
        if let Some(rng) = rng.as_mut() {
            let scrambled = scramble(f, rng);
            let (re_reduced, _) = reduce(&scrambled).expect("re-reduction within cap");
            assert!(
                members.contains(&re_reduced),
                "re-reduced scramble of {f:?} left its cycle"
            );
        }
        visited.extend(members);
    }
    cycles
}

fn scramble(f: &Form, rng: &mut Lcg) -> Form {
    let mut out = f.clone();
    for _ in 0..(2 + rng.next() % 4) {
        let shift = BigInt::from((rng.next() % 17) as i64 - 8);
        out = Transform::translation(&shift).apply(&out);
        // swap step (x, y) -> (-y, x)
        out = Transform::rho_step(&BigInt::zero()).apply(&out);
    }
    out
}

struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Lcg {
        Lcg(seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1))
    }

    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = (self.next() % (i as u64 + 1)) as usize;
            xs.swap(i, j);
        }
    }
}

/// Find (x, y) with x^2 - p y^2 = n, given r with r^2 ≡ p (mod n), by testing
/// whether the form (n, 2r, (r^2-p)/n) lies in the principal cycle of
/// discriminant 4p. Returns None when n is not represented.
pub fn represent_by_principal_form(p: u64, n: &BigInt, r: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    let pp = BigInt::from(p);
    debug_assert!(((r * r - &pp) % n).is_zero());
    let principal = Form::new(1, 0, -&pp);
    let candidate = Form {
        a: n.clone(),
        b: 2 * r,
        c: (r * r - &pp) / n,
    };
    debug_assert_eq!(candidate.discriminant(), 4 * &pp);

    let (target, u) = reduce(&candidate)?;
    let (start, v0) = reduce(&principal)?;
    let four_p: BigInt = 4 * &pp;
    let sqrt_disc = four_p.sqrt();

    let mut current = start.clone();
    let mut v = v0;
    for _ in 0..CYCLE_CAP {
        if current == target {
            // principal∘V = current = target = candidate∘U, so the first
            // column of V U^{-1} evaluates the principal form at n.
            let w = v.compose(&u.inverse());
            let x = w.m00;
            let y = w.m10;
            debug_assert_eq!(&x * &x - &pp * &y * &y, n.clone());
            return Ok(Some((x, y)));
        }
        let (next, step) = rho(&current, &sqrt_disc);
        v = v.compose(&step);
        current = next;
        if current == start {
            return Ok(None);
        }
    }
    Err(Error::SearchExhausted {
        context: "walking the principal cycle".into(),
        cap: CYCLE_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_class_numbers() {
        // narrow form class numbers of positive discriminants
        assert_eq!(class_number_direct(5), 1);
        assert_eq!(class_number_direct(8), 1);
        assert_eq!(class_number_direct(13), 1);
        assert_eq!(class_number_direct(73), 1);
        assert_eq!(class_number_direct(229), 3);
        assert_eq!(class_number_direct(40), 2);
        assert_eq!(class_number_direct(60), 4);
    }

    #[test]
    fn scrambled_count_matches_direct() {
        for disc in [5u64, 8, 13, 40, 60, 73, 145, 229, 401] {
            for seed in [1u64, 7, 42] {
                assert_eq!(
                    class_number_direct(disc),
                    class_number_scrambled(disc, seed),
                    "disc = {disc}"
                );
            }
        }
    }

    #[test]
    fn reduce_tracks_transform() {
        let f = Form::new(1, 0, -73);
        let (g, u) = reduce(&f).unwrap();
        assert_eq!(u.apply(&f), g);
        assert!(u.det().abs().is_one());
        let s = BigInt::from(292u32).sqrt();
        assert!(g.is_reduced(&s));
    }

    #[test]
    fn representation_extraction() {
        // 11 = 4^2 - 5*1^2, through r^2 ≡ 5 (mod 11), r = 4
        let got = represent_by_principal_form(5, &BigInt::from(11), &BigInt::from(4))
            .unwrap()
            .expect("11 is represented");
        let (x, y) = got;
        assert_eq!(&x * &x - 5 * &y * &y, BigInt::from(11));
    }

    #[test]
    fn non_representable_is_none() {
        // 3 splits in Q(sqrt(37)) but the primes above 3 have only
        // half-integral generators, so x^2 - 37 y^2 = 3 has no solution
        // while x^2 - 37 y^2 = 27 does. 1^2 ≡ 37 (mod 3).
        let got = represent_by_principal_form(37, &BigInt::from(3), &BigInt::from(1)).unwrap();
        assert!(got.is_none());
        let r27 = (0..27u32)
            .find(|r| (r * r) % 27 == 37 % 27)
            .map(BigInt::from)
            .unwrap();
        let got = represent_by_principal_form(37, &BigInt::from(27), &r27)
            .unwrap()
            .expect("27 is represented");
        assert_eq!(&got.0 * &got.0 - 37 * &got.1 * &got.1, BigInt::from(27));
    }
}
