//! Exact cyclotomic integers: Z-linear combinations of e-th roots of
//! unity, stored as sparse multiplicity vectors over exponents 0..e
//! (deliberately *not* reduced modulo the cyclotomic polynomial — table
//! values keep their eigenvalue-multiplicity form).  Identities between
//! values are decided rigorously by polynomial reduction mod Φ_e.

use crate::error::{Error, Result};
use crate::numth;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclotomicInt {
    pub e: u32,
    /// Sorted (exponent, coefficient) pairs, coefficients nonzero.
    pub terms: Vec<(u32, i64)>,
}

impl CyclotomicInt {
    pub fn zero(e: u32) -> Self {
        CyclotomicInt { e, terms: vec![] }
    }

    pub fn integer(e: u32, n: i64) -> Self {
        if n == 0 {
            Self::zero(e)
        } else {
            CyclotomicInt { e, terms: vec![(0, n)] }
        }
    }

    /// Build from a dense multiplicity vector of length e.
    pub fn from_mults(e: u32, mults: &[i64]) -> Self {
        let terms = mults
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(t, &m)| (t as u32, m))
            .collect();
        CyclotomicInt { e, terms }
    }

    pub fn is_zero_vector(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients (the value at ζ → 1).
    pub fn coeff_sum(&self) -> i64 {
        self.terms.iter().map(|&(_, m)| m).sum()
    }

    pub fn add(&self, other: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.check(other)?;
        let mut map: HashMap<u32, i64> = self.terms.iter().copied().collect();
        for &(t, m) in &other.terms {
            let entry = map.entry(t).or_insert(0);
            *entry = entry.checked_add(m).ok_or(Error::Overflow("cyclotomic add"))?;
        }
        Ok(Self::from_map(self.e, map))
    }

    pub fn scale(&self, c: i64) -> Result<CyclotomicInt> {
        let terms = self
            .terms
            .iter()
            .map(|&(t, m)| Ok((t, m.checked_mul(c).ok_or(Error::Overflow("cyclotomic scale"))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CyclotomicInt { e: self.e, terms: terms.into_iter().filter(|&(_, m)| m != 0).collect() })
    }

    pub fn mul(&self, other: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.check(other)?;
        let mut map: HashMap<u32, i64> = HashMap::new();
        for &(t1, m1) in &self.terms {
            for &(t2, m2) in &other.terms {
                let t = (t1 + t2) % self.e;
                let prod = m1.checked_mul(m2).ok_or(Error::Overflow("cyclotomic mul"))?;
                let entry = map.entry(t).or_insert(0);
                *entry = entry.checked_add(prod).ok_or(Error::Overflow("cyclotomic mul"))?;
            }
        }
        Ok(Self::from_map(self.e, map))
    }

    /// Complex conjugation: ζ^t ↦ ζ^{e−t}.
    pub fn conj(&self) -> CyclotomicInt {
        let mut terms: Vec<(u32, i64)> =
            self.terms.iter().map(|&(t, m)| ((self.e - t) % self.e, m)).collect();
        terms.sort_unstable();
        CyclotomicInt { e: self.e, terms }
    }

    /// Galois action σ_a: ζ^t ↦ ζ^{at}; requires gcd(a, e) = 1.
    pub fn galois(&self, a: u32) -> Result<CyclotomicInt> {
        if numth::gcd(a as u64, self.e as u64) != 1 {
            return Err(Error::BadParameter(format!("σ_{a} is not a unit mod {}", self.e)));
        }
        let mut terms: Vec<(u32, i64)> = self
            .terms
            .iter()
            .map(|&(t, m)| (((t as u64 * a as u64) % self.e as u64) as u32, m))
            .collect();
        terms.sort_unstable();
        Ok(CyclotomicInt { e: self.e, terms })
    }

    fn from_map(e: u32, map: HashMap<u32, i64>) -> CyclotomicInt {
        let mut terms: Vec<(u32, i64)> = map.into_iter().filter(|&(_, m)| m != 0).collect();
        terms.sort_unstable();
        CyclotomicInt { e, terms }
    }

    fn check(&self, other: &CyclotomicInt) -> Result<()> {
        if self.e != other.e {
            return Err(Error::BadParameter(format!(
                "cyclotomic conductors differ: {} vs {}",
                self.e, other.e
            )));
        }
        Ok(())
    }

    pub fn to_dense_i128(&self) -> Vec<i128> {
        let mut v = vec![0i128; self.e as usize];
        for &(t, m) in &self.terms {
            v[t as usize] = m as i128;
        }
        v
    }

    /// If this value is a rational integer, return it.
    pub fn as_integer(&self) -> Option<i128> {
        dense_as_integer(self.e, &self.to_dense_i128())
    }

    /// Value equality (as complex numbers), decided mod Φ_e.
    pub fn value_eq(&self, other: &CyclotomicInt) -> Result<bool> {
        self.check(other)?;
        let mut v = self.to_dense_i128();
        for &(t, m) in &other.terms {
            v[t as usize] -= m as i128;
        }
        Ok(dense_is_zero_value(self.e, &v))
    }
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials and reduction
// ---------------------------------------------------------------------------

static PHI_CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();

/// Coefficients of Φ_e (little-endian, monic, degree φ(e)), computed by
/// exact division of x^e − 1 by the proper-divisor cyclotomics.
pub fn cyclotomic_poly(e: u32) -> Vec<i64> {
    let cache = PHI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&e) {
        return p.clone();
    }
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in numth::divisors(e as u64) {
        if d == e as u64 {
            continue;
        }
        let phi_d = cyclotomic_poly(d as u32);
        num = exact_div(&num, &phi_d);
    }
    cache.lock().unwrap().insert(e, num.clone());
    num
}

/// Exact division of integer polynomials (monic divisor).
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    assert_eq!(*den.last().unwrap(), 1, "monic divisor");
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem: Vec<i64> = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i - dd + j] -= c * dj;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "division not exact");
    quot
}

/// Is Σ v_t ζ^t equal to zero (as a complex number)?
pub fn dense_is_zero_value(e: u32, v: &[i128]) -> bool {
    match rem_mod_phi_i128(e, v) {
        Some(r) => r.iter().all(|&c| c == 0),
        None => rem_mod_phi_big(e, v).iter().all(|c| c.is_zero()),
    }
}

/// If Σ v_t ζ^t is a rational integer, return it.
pub fn dense_as_integer(e: u32, v: &[i128]) -> Option<i128> {
    let as_int = |r: &[i128]| -> Option<i128> {
        if r.iter().skip(1).all(|&c| c == 0) {
            Some(r.first().copied().unwrap_or(0))
        } else {
            None
        }
    };
    match rem_mod_phi_i128(e, v) {
        Some(r) => as_int(&r),
        None => {
            let r = rem_mod_phi_big(e, v);
            if r.iter().skip(1).all(|c| c.is_zero()) {
                r.first()
                    .map(|c| c.try_into().ok())
                    .unwrap_or(Some(0))
            } else {
                None
            }
        }
    }
}

/// Remainder of Σ v_t x^t modulo Φ_e with overflow detection.
fn rem_mod_phi_i128(e: u32, v: &[i128]) -> Option<Vec<i128>> {
    let phi = cyclotomic_poly(e);
    let deg = phi.len() - 1;
    let mut r: Vec<i128> = v.to_vec();
    if r.len() < deg {
        r.resize(deg, 0);
    }
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate() {
            let t = c.checked_mul(pj as i128)?;
            r[i - deg + j] = r[i - deg + j].checked_sub(t)?;
        }
        debug_assert_eq!(r[i], 0);
    }
    r.truncate(deg);
    Some(r)
}

fn rem_mod_phi_big(e: u32, v: &[i128]) -> Vec<BigInt> {
    let phi = cyclotomic_poly(e);
    let deg = phi.len() - 1;
    let mut r: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
    if r.len() < deg {
        r.resize(deg, BigInt::zero());
    }
    for i in (deg..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate() {
            let t = &c * BigInt::from(pj);
            r[i - deg + j] -= t;
        }
    }
    r.truncate(deg);
    r
}

// ---------------------------------------------------------------------------
// Ramanujan sums
// ---------------------------------------------------------------------------

/// c_e(t) = Σ_{gcd(a,e)=1} ζ^{at} = μ(e/g)·φ(e)/φ(e/g) with g = gcd(t, e),
/// for t in 0..e.
pub fn ramanujan_coeffs(e: u32) -> Vec<i64> {
    let phi_e = numth::euler_phi(e as u64) as i64;
    (0..e as u64)
        .map(|t| {
            let g = numth::gcd(t, e as u64);
            let m = e as u64 / g;
            numth::moebius(m) * phi_e / numth::euler_phi(m) as i64
        })
        .collect()
}

/// The rational part of Σ v_t ζ^t: (Σ v_t·c_e(t)) / φ(e).  Equals the value
/// itself when the value is known to be rational (e.g. a Galois-stable sum
/// against a verified character table).
pub fn rational_part_numerator(terms: &[(u32, i64)], ramanujan: &[i64]) -> Result<i128> {
    let mut acc: i128 = 0;
    for &(t, m) in terms {
        let prod = (m as i128)
            .checked_mul(ramanujan[t as usize] as i128)
            .ok_or(Error::Overflow("rational part"))?;
        acc = acc.checked_add(prod).ok_or(Error::Overflow("rational part"))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len(), 49); // φ(105) = 48; has a −2 coefficient
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn cyclotomics_multiply_to_xe_minus_1() {
        for e in [1u32, 2, 6, 12, 30, 60] {
            let mut prod = vec![1i64];
            for d in numth::divisors(e as u64) {
                let phi = cyclotomic_poly(d as u32);
                let mut next = vec![0i64; prod.len() + phi.len() - 1];
                for (i, &a) in prod.iter().enumerate() {
                    for (j, &b) in phi.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut want = vec![0i64; e as usize + 1];
            want[0] = -1;
            want[e as usize] = 1;
            assert_eq!(prod, want, "e = {e}");
        }
    }

    #[test]
    fn integer_detection() {
        // 1 + ζ₃ + ζ₃² = 0
        let v = CyclotomicInt { e: 3, terms: vec![(0, 1), (1, 1), (2, 1)] };
        assert_eq!(v.as_integer(), Some(0));
        // 1 + ζ₄² = 0
        let v = CyclotomicInt { e: 4, terms: vec![(0, 1), (2, 1)] };
        assert_eq!(v.as_integer(), Some(0));
        // ζ₆ − ζ₆² = 1
        let v = CyclotomicInt { e: 6, terms: vec![(1, 1), (2, -1)] };
        assert_eq!(v.as_integer(), Some(1));
        // ζ₅ is not rational
        let v = CyclotomicInt { e: 5, terms: vec![(1, 1)] };
        assert_eq!(v.as_integer(), None);
        // plain integers
        assert_eq!(CyclotomicInt::integer(12, -7).as_integer(), Some(-7));
    }

    #[test]
    fn arithmetic_and_conjugation() {
        let a = CyclotomicInt { e: 5, terms: vec![(1, 1)] };
        let b = CyclotomicInt { e: 5, terms: vec![(4, 1)] };
        assert_eq!(a.conj(), b);
        // ζ·ζ⁴ = 1
        assert_eq!(a.mul(&b).unwrap(), CyclotomicInt::integer(5, 1));
        // (ζ + ζ⁴)(ζ² + ζ³) = ζ³ + ζ⁴ + ζ + ζ² = −1
        let s1 = CyclotomicInt { e: 5, terms: vec![(1, 1), (4, 1)] };
        let s2 = CyclotomicInt { e: 5, terms: vec![(2, 1), (3, 1)] };
        let p = s1.mul(&s2).unwrap();
        assert_eq!(p.as_integer(), Some(-1));
        // conductor mismatch
        let c = CyclotomicInt::integer(7, 1);
        assert!(a.add(&c).is_err());
    }

    #[test]
    fn galois_action() {
        let a = CyclotomicInt { e: 5, terms: vec![(1, 2), (2, 3)] };
        let g2 = a.galois(2).unwrap();
        assert_eq!(g2.terms, vec![(2, 2), (4, 3)]);
        assert!(a.galois(5).is_err()); // not a unit mod 5
        // σ_a ∘ σ_b = σ_{ab}
        let g6 = a.galois(2).unwrap().galois(3).unwrap();
        assert_eq!(g6, a.galois(6 % 5).unwrap());
    }

    #[test]
    fn ramanujan_sums() {
        assert_eq!(ramanujan_coeffs(6), vec![2, 1, -1, -2, -1, 1]);
        assert_eq!(ramanujan_coeffs(1), vec![1]);
        // Σ_t c_e(t) = 0 for e > 1
        for e in [2u32, 4, 6, 12, 30] {
            assert_eq!(ramanujan_coeffs(e).iter().sum::<i64>(), 0);
        }
        // brute-force check against the defining sum for e = 12
        let e = 12u32;
        let cs = ramanujan_coeffs(e);
        for t in 0..e {
            // Σ_{gcd(a,e)=1} ζ^{at} as a cyclotomic value
            let mut terms: HashMap<u32, i64> = HashMap::new();
            for a in 0..e {
                if numth::gcd(a as u64, e as u64) == 1 {
                    *terms.entry(a * t % e).or_insert(0) += 1;
                }
            }
            let v = CyclotomicInt::from_map(e, terms);
            assert_eq!(v.as_integer(), Some(cs[t as usize] as i128), "t = {t}");
        }
    }

    #[test]
    fn rational_extraction_matches_integer_value() {
        // 2(ζ₅ + ζ₅² + ζ₅³ + ζ₅⁴) = −2
        let v = CyclotomicInt { e: 5, terms: vec![(1, 2), (2, 2), (3, 2), (4, 2)] };
        assert_eq!(v.as_integer(), Some(-2));
        let ram = ramanujan_coeffs(5);
        let num = rational_part_numerator(&v.terms, &ram).unwrap();
        assert_eq!(num, -2 * numth::euler_phi(5) as i128);
    }

    #[test]
    fn value_equality_mod_phi() {
        // ζ₄² and −1 are the same value with different vectors
        let a = CyclotomicInt { e: 4, terms: vec![(2, 1)] };
        let b = CyclotomicInt::integer(4, -1);
        assert_ne!(a, b);
        assert!(a.value_eq(&b).unwrap());
    }
}
