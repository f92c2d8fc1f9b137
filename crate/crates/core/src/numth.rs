//! Elementary number theory: deterministic primality, factorization,
//! primitive prime divisors, and the explicit threshold/exponent bounds
//! used by the word-width checks.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use std::collections::BTreeMap;

/// Deterministic Miller–Rabin, valid for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle-finding variant; n must be odd, composite, not a prime power dealt with below.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as an ordered map prime → exponent.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (&p, &e) in factorize(n).iter() {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut out = n;
    for (&p, _) in factorize(n).iter() {
        out = out / p * (p - 1);
    }
    out
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.values().any(|&e| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Multiplicative order of `a` modulo prime-power-free modulus `m`
/// (requires gcd(a, m) = 1 and the factorization of a group exponent
/// bound `bound` with a^bound ≡ 1).
pub fn mult_order_mod(a: u64, m: u64, bound: u64) -> u64 {
    debug_assert_eq!(pow_mod(a, bound, m), 1);
    let mut order = bound;
    for (&r, _) in factorize(bound).iter() {
        while order % r == 0 && pow_mod(a, order / r, m) == 1 {
            order /= r;
        }
    }
    order
}

/// `q^n` as u128, or an error if `q^n > 2^63`.
pub fn checked_qpow(q: u64, n: u32) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(q as u128).ok_or(Error::Overflow("q^n"))?;
        if acc > (1u128 << 63) {
            return Err(Error::CapExceeded { what: "q^n", got: acc, cap: 1 << 63 });
        }
    }
    Ok(acc as u64)
}

/// Largest prime dividing `q^n − 1` but no `q^i − 1` for `1 ≤ i < n`,
/// or `None` when no such prime exists.  Requires `q ≥ 2`, `n ≥ 1`,
/// `q^n ≤ 2^63`.
pub fn ppd(q: u64, n: u32) -> Result<Option<u64>> {
    if q < 2 || n < 1 {
        return Err(Error::BadParameter(format!("ppd requires q ≥ 2, n ≥ 1; got q={q}, n={n}")));
    }
    let v = checked_qpow(q, n)? - 1;
    if v == 1 {
        return Ok(None);
    }
    let mut best: Option<u64> = None;
    for (&r, _) in factorize(v).iter() {
        if is_primitive_for(q, n, r) {
            best = Some(best.map_or(r, |b| b.max(r)));
        }
    }
    if let Some(r) = best {
        // Independent re-verification of the returned value.
        if !is_prime(r) || v % r != 0 || !is_primitive_for(q, n, r) {
            return Err(Error::Verification(format!("ppd({q},{n}) candidate {r} failed re-check")));
        }
    }
    Ok(best)
}

fn is_primitive_for(q: u64, n: u32, r: u64) -> bool {
    // r | q^n − 1 assumed; primitive means r divides no earlier q^i − 1.
    let mut qi = 1u64 % r;
    for _ in 1..n {
        qi = mul_mod(qi, q % r, r);
        if qi == 1 {
            return false;
        }
    }
    true
}

/// Order threshold `m^(8m²)` and word-length bound `⌈40·m·√(8·log₂ m)⌉ + 56`
/// for a word with largest exponent multiplicity `m`.  The ceiling is rounded
/// outward (strictly up on a near-integer) so the bound stays conservative.
pub fn waring_bounds(m: u32) -> Result<(BigUint, u64)> {
    if m < 1 {
        return Err(Error::BadParameter("waring_bounds requires m ≥ 1".into()));
    }
    let exp = 8u32
        .checked_mul(m)
        .and_then(|x| x.checked_mul(m))
        .ok_or(Error::Overflow("8m^2"))?;
    let threshold = BigUint::from(m).pow(exp);
    let x = 40.0 * m as f64 * (8.0 * (m as f64).log2()).sqrt();
    let c = if x <= 0.0 {
        0u64
    } else if x.fract() < 1e-9 {
        x.floor() as u64 + 1
    } else {
        x.ceil() as u64
    };
    Ok((threshold, c + 56))
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    // The float estimate is off by at most a few ulps; correct in u128 so
    // the guards cannot saturate near u64::MAX.
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while (x as u128 + 1) * (x as u128 + 1) <= n as u128 {
        x += 1;
    }
    x
}
