//! Finite fields GF(p^f) with canonical defining polynomials.
//!
//! Elements are stored as integer indices: the element Σ cᵢ·θⁱ (power
//! basis in the class of θ = x mod modulus) has index Σ cᵢ·pⁱ, i.e. the
//! coefficient vector packed base-p little-endian.  The defining modulus
//! is the Conway polynomial for q ≤ 2^16 — found by searching candidates
//! in word order for the least monic, irreducible, primitive polynomial
//! compatible with the canonical polynomials of all proper subfields —
//! and the least-index monic irreducible polynomial above that.

use crate::error::{Error, Result};
use crate::numth;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Lookup tables are built only for small fields; beyond this the
/// arithmetic falls back to polynomial operations.
const TABLE_LIMIT: u64 = 256;

/// Conway polynomials are searched for q up to this bound; larger fields
/// use the least-index monic irreducible modulus.
const CONWAY_LIMIT: u64 = 1 << 16;

// ---------------------------------------------------------------------------
// polynomial arithmetic over GF(p), little-endian coefficient vectors
// ---------------------------------------------------------------------------

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pdeg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn padd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
        *o = x % p;
    }
    ptrim(&mut out);
    out
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p;
        *o = x % p;
    }
    ptrim(&mut out);
    out
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (any nonzero `m`), coefficients mod p.
fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = pdeg(m).expect("zero modulus");
    let lead_inv = inv_mod_p(m[md], p);
    let mut r: Vec<u64> = a.to_vec();
    ptrim(&mut r);
    while let Some(rd) = pdeg(&r) {
        if rd < md {
            break;
        }
        let c = (r[rd] * lead_inv) % p;
        let shift = rd - md;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c * mi) % p;
            r[i + shift] = (r[i + shift] + p - t) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    // normalize monic
    if let Some(d) = pdeg(&a) {
        let inv = inv_mod_p(a[d], p);
        for c in a.iter_mut() {
            *c = (*c * inv) % p;
        }
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    numth::pow_mod(a, p - 2, p)
}

fn pmulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    prem(&pmul(a, b, p), m, p)
}

fn ppowmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = prem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod(&acc, &b, m, p);
        }
        b = pmulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Evaluate the GF(p)-coefficient polynomial `coeffs` at the residue `y`
/// modulo `m` (Horner).
fn pcompose(coeffs: &[u64], y: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = vec![];
    for &c in coeffs.iter().rev() {
        acc = pmulmod(&acc, y, m, p);
        if c != 0 {
            acc = padd(&acc, &[c], p);
        }
    }
    acc
}

/// Irreducibility of a monic degree-f polynomial over GF(p):
/// x^(p^f) ≡ x (mod g) and gcd(x^(p^(f/r)) − x, g) = 1 for each prime r | f.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = match pdeg(g) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x = vec![0u64, 1];
    let xr = prem(&x, g, p); // reduce so the degree-1 modulus case compares correctly
    let qf = (p as u128).pow(f as u32);
    if qf > u64::MAX as u128 {
        return false;
    }
    let xqf = ppowmod(&x, qf as u64, g, p);
    if psub(&xqf, &xr, p) != Vec::<u64>::new() {
        return false;
    }
    for (&r, _) in numth::factorize(f as u64).iter() {
        let k = f as u64 / r;
        let xq = ppowmod(&x, (p as u128).pow(k as u32) as u64, g, p);
        let d = pgcd(&psub(&xq, &x, p), g, p);
        if pdeg(&d) != Some(0) {
            return false;
        }
    }
    true
}

fn is_primitive(g: &[u64], p: u64, f: usize) -> bool {
    // order of x in (GF(p)[x]/g)^× must be p^f − 1; assumes g irreducible.
    if g[0] == 0 {
        return false;
    }
    let q1 = (p as u128).pow(f as u32) as u64 - 1;
    let x = vec![0u64, 1];
    for (&r, _) in numth::factorize(q1).iter() {
        if ppowmod(&x, q1 / r, g, p) == vec![1] {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// canonical defining polynomials
// ---------------------------------------------------------------------------

static CANON_CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();

/// Conway polynomial C_{p,f}: the word-order-least monic primitive
/// polynomial compatible with C_{p,m} for every proper divisor m | f.
pub fn conway_polynomial(p: u64, f: u32) -> Result<Vec<u64>> {
    if !numth::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let cache = CANON_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&(p, f)) {
        return Ok(g.clone());
    }
    let fu = f as usize;
    let q = (p as u128).pow(f);
    if q > CONWAY_LIMIT as u128 {
        return Err(Error::BadParameter(format!(
            "Conway search capped at q ≤ {CONWAY_LIMIT}; got p^f = {q}"
        )));
    }
    let q = q as u64;
    let sub: Vec<(u64, Vec<u64>)> = numth::divisors(f as u64)
        .into_iter()
        .filter(|&m| m < f as u64)
        .filter(|&m| m >= 1)
        .map(|m| Ok((m, conway_polynomial(p, m as u32)?)))
        .collect::<Result<_>>()?;
    // Words (b_{f-1}, …, b_0) in lexicographic order — the x^{f-1}
    // coefficient word varies slowest — with candidate coefficients
    // a_i = (−1)^{f−i} b_i mod p and monic leading term.
    for w in 0..q {
        let mut digits = vec![0u64; fu]; // digits[i] = b_i
        let mut t = w;
        for digit in digits.iter_mut() {
            *digit = t % p;
            t /= p;
        }
        let mut g = vec![0u64; fu + 1];
        g[fu] = 1;
        for i in 0..fu {
            let b = digits[i];
            g[i] = if (fu - i) % 2 == 0 { b } else { (p - b) % p };
        }
        if !is_irreducible(&g, p) || !is_primitive(&g, p, fu) {
            continue;
        }
        let compatible = sub.iter().all(|(m, cm)| {
            let e = (q - 1) / ((p as u128).pow(*m as u32) as u64 - 1);
            let y = ppowmod(&[0, 1], e, &g, p);
            pcompose(cm, &y, &g, p).is_empty()
        });
        if compatible {
            cache.lock().unwrap().insert((p, f), g.clone());
            return Ok(g);
        }
    }
    Err(Error::Verification(format!("no Conway polynomial found for p={p}, f={f}")))
}

/// Least-index monic irreducible polynomial of degree f over GF(p)
/// (index = coefficient vector packed base-p little-endian).
pub fn least_irreducible(p: u64, f: u32) -> Result<Vec<u64>> {
    let fu = f as usize;
    let mut g = vec![0u64; fu + 1];
    g[fu] = 1;
    let total = (p as u128).pow(f);
    let mut idx: u128 = 0;
    while idx < total {
        let mut t = idx;
        for gi in g.iter_mut().take(fu) {
            *gi = (t % p as u128) as u64;
            t /= p as u128;
        }
        if is_irreducible(&g, p) {
            return Ok(g);
        }
        idx += 1;
    }
    Err(Error::Verification(format!("no irreducible polynomial of degree {f} over GF({p})")))
}

// ---------------------------------------------------------------------------
// field objects
// ---------------------------------------------------------------------------

struct FieldTables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// An explicit finite field GF(p^f) with elements addressed by packed index.
pub struct FieldSpec {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// Monic defining polynomial, little-endian, length f+1.
    pub modulus: Vec<u64>,
    tables: Option<FieldTables>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "GF({})", self.q)
    }
}

impl FieldSpec {
    fn unpack(&self, idx: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.f as usize];
        let mut t = idx;
        for o in out.iter_mut() {
            *o = t % self.p;
            t /= self.p;
        }
        out
    }

    fn pack(&self, coeffs: &[u64]) -> u64 {
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    /// Power-basis coefficients of the element with the given index.
    pub fn coeffs(&self, idx: u64) -> Vec<u64> {
        self.unpack(idx)
    }

    fn add_raw(&self, a: u64, b: u64) -> u64 {
        if self.f == 1 {
            return (a + b) % self.p;
        }
        let (ca, cb) = (self.unpack(a), self.unpack(b));
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    fn neg_raw(&self, a: u64) -> u64 {
        if self.f == 1 {
            return (self.p - a) % self.p;
        }
        let ca = self.unpack(a);
        let n: Vec<u64> = ca.iter().map(|x| (self.p - x) % self.p).collect();
        self.pack(&n)
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.f == 1 {
            return numth::mul_mod(a, b, self.p);
        }
        let (mut ca, mut cb) = (self.unpack(a), self.unpack(b));
        ptrim(&mut ca);
        ptrim(&mut cb);
        let prod = pmulmod(&ca, &cb, &self.modulus, self.p);
        let mut full = vec![0u64; self.f as usize];
        full[..prod.len()].copy_from_slice(&prod);
        self.pack(&full)
    }

    fn inv_raw(&self, a: u64) -> u64 {
        debug_assert_ne!(a, 0);
        if self.f == 1 {
            return inv_mod_p(a, self.p);
        }
        // a^(q-2)
        self.pow(a, self.q - 2)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize] as u64,
            None => self.add_raw(a, b),
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.neg_raw(a)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize] as u64,
            None => self.mul_raw(a, b),
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(match &self.tables {
            Some(t) => t.inv[a as usize] as u64,
            None => self.inv_raw(a),
        })
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order; zero has none.
    pub fn mult_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut order = self.q - 1;
        for (&r, _) in numth::factorize(self.q - 1).iter() {
            while order % r == 0 && self.pow(a, order / r) == 1 {
                order /= r;
            }
        }
        Ok(order)
    }

    /// Least-index multiplicative generator.
    pub fn generator(&self) -> u64 {
        for a in 1..self.q {
            if self.mult_order(a).unwrap() == self.q - 1 {
                return a;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// x ↦ x^(p^k) (the k-th Frobenius power).
    pub fn frobenius(&self, a: u64, k: u32) -> u64 {
        let mut e = 1u64;
        for _ in 0..k {
            e *= self.p;
        }
        self.pow(a, e)
    }
}

static FIELD_REGISTRY: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldSpec>>>> = OnceLock::new();

/// Construct (or fetch) GF(p^f).  Requires p prime, 1 ≤ f ≤ 12, p^f ≤ 2^31.
pub fn make_field(p: u64, f: u32) -> Result<Arc<FieldSpec>> {
    if !numth::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !(1..=12).contains(&f) {
        return Err(Error::BadParameter(format!("extension degree {f} outside 1..=12")));
    }
    let q128 = (p as u128).pow(f);
    if q128 > 1 << 31 {
        return Err(Error::CapExceeded { what: "field size", got: q128, cap: 1 << 31 });
    }
    let q = q128 as u64;
    let registry = FIELD_REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(fs) = registry.lock().unwrap().get(&(p, f)) {
        return Ok(fs.clone());
    }
    let modulus = if q <= CONWAY_LIMIT {
        conway_polynomial(p, f)?
    } else {
        least_irreducible(p, f)?
    };
    debug_assert!(is_irreducible(&modulus, p));
    let mut fs = FieldSpec { p, f, q, modulus, tables: None };
    if q <= TABLE_LIMIT {
        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        let mut inv = vec![0u32; q as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = fs.add_raw(a, b) as u32;
                mul[(a * q + b) as usize] = fs.mul_raw(a, b) as u32;
            }
        }
        for a in 1..q {
            inv[a as usize] = fs.inv_raw(a) as u32;
        }
        fs.tables = Some(FieldTables { add, mul, inv });
    }
    let arc = Arc::new(fs);
    registry.lock().unwrap().insert((p, f), arc.clone());
    Ok(arc)
}

// ---------------------------------------------------------------------------
// element wrapper + binary ops with field checking
// ---------------------------------------------------------------------------

/// A field element bound to its field, for the checked public arithmetic API.
#[derive(Clone)]
pub struct FieldElement {
    pub field: Arc<FieldSpec>,
    pub idx: u64,
}

impl FieldElement {
    pub fn new(field: Arc<FieldSpec>, idx: u64) -> Result<Self> {
        if idx >= field.q {
            return Err(Error::IdOutOfRange(idx as usize));
        }
        Ok(FieldElement { field, idx })
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.idx)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; errors on mismatched fields or division by zero.
pub fn ff_arith(a: &FieldElement, b: &FieldElement, op: FfOp) -> Result<FieldElement> {
    if a.field.p != b.field.p || a.field.f != b.field.f {
        return Err(Error::FieldMismatch(a.field.q, b.field.q));
    }
    let f = &a.field;
    let idx = match op {
        FfOp::Add => f.add(a.idx, b.idx),
        FfOp::Sub => f.sub(a.idx, b.idx),
        FfOp::Mul => f.mul(a.idx, b.idx),
        FfOp::Div => f.div(a.idx, b.idx)?,
    };
    Ok(FieldElement { field: a.field.clone(), idx })
}

/// Multiplicative order of a nonzero element.
pub fn ff_mult_order(a: &FieldElement) -> Result<u64> {
    a.field.mult_order(a.idx)
}

// ---------------------------------------------------------------------------
// subfield embeddings
// ---------------------------------------------------------------------------

/// Index-to-index embedding GF(q) → GF(q^k) sending the power-basis root of
/// the base modulus to its least-index root in the extension.
pub struct Embedding {
    pub map: Vec<u64>,
}

pub fn embed(base: &Arc<FieldSpec>, ext: &Arc<FieldSpec>) -> Result<Embedding> {
    if base.p != ext.p || ext.f % base.f != 0 {
        return Err(Error::FieldMismatch(base.q, ext.q));
    }
    // find the least-index root of base.modulus inside ext
    let mut theta = None;
    for t in 0..ext.q {
        let mut acc = 0u64;
        for &c in base.modulus.iter().rev() {
            acc = ext.add(ext.mul(acc, t), c % ext.p);
        }
        if acc == 0 {
            theta = Some(t);
            break;
        }
    }
    let theta = theta
        .ok_or_else(|| Error::Verification(format!("no root of GF({}) modulus in GF({})", base.q, ext.q)))?;
    let mut map = vec![0u64; base.q as usize];
    for a in 0..base.q {
        let coeffs = base.coeffs(a);
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = ext.add(ext.mul(acc, theta), c);
        }
        map[a as usize] = acc;
    }
    Ok(Embedding { map })
}
