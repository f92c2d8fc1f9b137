//! Explicit construction of small classical groups.
//!
//! Groups are enumerated by breadth-first closure from a fixed generating
//! set, starting at the identity (element id 0).  Generating sets are the
//! textbook transvection families (full sets — generation is then a
//! theorem, not a guess), and every enumeration is checked against the
//! closed-form order before the group is returned.
//!
//! Encodings: permutations are image sequences; matrices are row-major
//! vectors of field-element indices (packed base-p, little-endian power
//! basis).  "Least element" always means lexicographically least encoding.

use crate::error::{Error, Result};
use crate::fields::{self, FieldSpec};
use crate::matrix;
use crate::numth;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// specs
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    Sym,
    Alt,
    SL,
    PSL,
    SU,
    PSU,
    Sp4,
    PSp4,
    OmegaPlus,
}

impl GroupKind {
    pub fn token(&self) -> &'static str {
        match self {
            GroupKind::Sym => "sym",
            GroupKind::Alt => "alt",
            GroupKind::SL => "sl",
            GroupKind::PSL => "psl",
            GroupKind::SU => "su",
            GroupKind::PSU => "psu",
            GroupKind::Sp4 => "sp4",
            GroupKind::PSp4 => "psp4",
            GroupKind::OmegaPlus => "omega+",
        }
    }

    fn is_permutation(&self) -> bool {
        matches!(self, GroupKind::Sym | GroupKind::Alt)
    }

    /// The kind of the central quotient.
    pub fn quotient_kind(&self) -> GroupKind {
        match self {
            GroupKind::SL => GroupKind::PSL,
            GroupKind::SU => GroupKind::PSU,
            GroupKind::Sp4 => GroupKind::PSp4,
            k => *k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Degree: permutation points, matrix dimension, or half-rank for omega+.
    pub n: u32,
    /// Field size (0 for permutation groups).
    pub q: u64,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_permutation() {
            write!(f, "{}:{}", self.kind.token(), self.n)
        } else if matches!(self.kind, GroupKind::Sp4 | GroupKind::PSp4) {
            write!(f, "{}:{}", self.kind.token(), self.q)
        } else {
            write!(f, "{}:{}:{}", self.kind.token(), self.n, self.q)
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::BadParameter(format!("cannot parse group spec {s:?}"));
        let kind = match parts[0] {
            "sym" => GroupKind::Sym,
            "alt" => GroupKind::Alt,
            "sl" => GroupKind::SL,
            "psl" => GroupKind::PSL,
            "su" => GroupKind::SU,
            "psu" => GroupKind::PSU,
            "sp4" => GroupKind::Sp4,
            "psp4" => GroupKind::PSp4,
            "omega+" => GroupKind::OmegaPlus,
            _ => return Err(bad()),
        };
        let nums: Vec<u64> = parts[1..]
            .iter()
            .map(|t| t.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let spec = match (kind.is_permutation(), matches!(kind, GroupKind::Sp4 | GroupKind::PSp4), nums.len()) {
            (true, _, 1) => GroupSpec { kind, n: nums[0] as u32, q: 0 },
            (_, true, 1) => GroupSpec { kind, n: 4, q: nums[0] },
            (false, false, 2) => GroupSpec { kind, n: nums[0] as u32, q: nums[1] },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Split q into (p, f) if it is a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = numth::factorize(q);
    if f.len() != 1 {
        return Err(Error::BadParameter(format!("{q} is not a prime power")));
    }
    let (&p, &e) = f.iter().next().unwrap();
    Ok((p, e))
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::BadParameter(m));
        match self.kind {
            GroupKind::Sym | GroupKind::Alt => {
                if !(1..=12).contains(&self.n) {
                    return err(format!("{self}: degree must be 1..=12"));
                }
            }
            GroupKind::SL | GroupKind::PSL => {
                prime_power(self.q)?;
                if !(2..=6).contains(&self.n) {
                    return err(format!("{self}: dimension must be 2..=6"));
                }
            }
            GroupKind::SU | GroupKind::PSU => {
                prime_power(self.q)?;
                if !(3..=4).contains(&self.n) {
                    return err(format!("{self}: dimension must be 3 or 4"));
                }
            }
            GroupKind::Sp4 | GroupKind::PSp4 => {
                prime_power(self.q)?;
            }
            GroupKind::OmegaPlus => {
                let (p, _) = prime_power(self.q)?;
                if p != 2 {
                    return err(format!("{self}: only even q supported"));
                }
                if !(2..=8).contains(&self.n) {
                    return err(format!("{self}: half-rank must be 2..=8"));
                }
            }
        }
        Ok(())
    }

    pub fn is_enumerable(&self) -> bool {
        !matches!(self.kind, GroupKind::OmegaPlus)
    }
}

/// Closed-form order with its q-part / q′-part split (q-part is 1 for
/// permutation groups).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderFormula {
    pub order: BigUint,
    pub q_part: BigUint,
    pub qprime_part: BigUint,
}

pub fn closed_form_order(spec: &GroupSpec) -> Result<OrderFormula> {
    spec.validate()?;
    let big = |x: u64| BigUint::from(x);
    let qb = big(spec.q);
    let n = spec.n;
    let form = match spec.kind {
        GroupKind::Sym => {
            let mut o = BigUint::one();
            for i in 2..=n as u64 {
                o *= big(i);
            }
            OrderFormula { order: o.clone(), q_part: BigUint::one(), qprime_part: o }
        }
        GroupKind::Alt => {
            let mut o = BigUint::one();
            for i in 2..=n as u64 {
                o *= big(i);
            }
            if n >= 2 {
                o /= big(2);
            }
            OrderFormula { order: o.clone(), q_part: BigUint::one(), qprime_part: o }
        }
        GroupKind::SL | GroupKind::PSL => {
            let q_part = qb.pow(n * (n - 1) / 2);
            let mut rest = BigUint::one();
            for i in 2..=n {
                rest *= qb.pow(i) - BigUint::one();
            }
            if spec.kind == GroupKind::PSL {
                rest /= big(numth::gcd(n as u64, spec.q - 1));
            }
            OrderFormula { order: &q_part * &rest, q_part, qprime_part: rest }
        }
        GroupKind::SU | GroupKind::PSU => {
            let q_part = qb.pow(n * (n - 1) / 2);
            let mut rest = BigUint::one();
            for i in 2..=n {
                let t = qb.pow(i);
                rest *= if i % 2 == 0 { t - BigUint::one() } else { t + BigUint::one() };
            }
            if spec.kind == GroupKind::PSU {
                rest /= big(numth::gcd(n as u64, spec.q + 1));
            }
            OrderFormula { order: &q_part * &rest, q_part, qprime_part: rest }
        }
        GroupKind::Sp4 | GroupKind::PSp4 => {
            let q_part = qb.pow(4);
            let mut rest = (qb.pow(2) - BigUint::one()) * (qb.pow(4) - BigUint::one());
            if spec.kind == GroupKind::PSp4 {
                rest /= big(numth::gcd(2, spec.q - 1));
            }
            OrderFormula { order: &q_part * &rest, q_part, qprime_part: rest }
        }
        GroupKind::OmegaPlus => {
            let q_part = qb.pow(n * (n - 1));
            let mut rest = qb.pow(n) - BigUint::one();
            for i in 1..n {
                rest *= qb.pow(2 * i) - BigUint::one();
            }
            OrderFormula { order: &q_part * &rest, q_part, qprime_part: rest }
        }
    };
    Ok(form)
}

// ---------------------------------------------------------------------------
// elements
// ---------------------------------------------------------------------------

/// A group element in its canonical encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    /// Image sequence: the permutation sends i to perm[i] (0-based).
    Perm(Vec<u8>),
    /// Row-major matrix of field-element indices.
    Mat(Vec<u32>),
}

impl GroupElement {
    pub fn is_identity(&self, dim: usize) -> bool {
        match self {
            GroupElement::Perm(p) => p.iter().enumerate().all(|(i, &im)| im as usize == i),
            GroupElement::Mat(m) => {
                m.iter().enumerate().all(|(k, &v)| v == u32::from(k % (dim + 1) == 0))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// groups
// ---------------------------------------------------------------------------

struct QuotientData {
    parent: Arc<Group>,
    /// quotient element id -> parent element id of the canonical coset rep
    parent_idx: Vec<u32>,
    /// parent element id -> quotient element id of its coset
    quot_of_parent: Vec<u32>,
}

/// A fully enumerated group.
pub struct Group {
    pub spec: GroupSpec,
    pub field: Option<Arc<FieldSpec>>,
    /// Matrix dimension (0 for permutation groups).
    pub dim: usize,
    pub elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    pub inv: Vec<u32>,
    /// Sorted element ids of the center.
    pub center: Vec<u32>,
    /// Element ids of the construction generators.
    pub gens: Vec<u32>,
    /// A small verified generating subset (used for orbit computations).
    pub small_gens: Vec<u32>,
    quotient: Option<QuotientData>,
}

impl Group {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// Product of elements by id.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.quotient {
            Some(qd) => {
                let pa = qd.parent_idx[a as usize];
                let pb = qd.parent_idx[b as usize];
                qd.quot_of_parent[qd.parent.mul(pa, pb) as usize]
            }
            None => {
                let prod = self.mul_raw(&self.elements[a as usize], &self.elements[b as usize]);
                *self.index.get(&prod).expect("closure")
            }
        }
    }

    pub fn inv_of(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn conjugate(&self, g: u32, h: u32) -> u32 {
        // h g h^{-1}
        self.mul(self.mul(h, g), self.inv[h as usize])
    }

    pub fn element_id(&self, e: &GroupElement) -> Result<u32> {
        match &self.quotient {
            Some(qd) => {
                let p = qd.parent.element_id(e)?;
                Ok(qd.quot_of_parent[p as usize])
            }
            None => self.index.get(e).copied().ok_or(Error::UnknownElement),
        }
    }

    pub fn is_central(&self, a: u32) -> bool {
        self.center.binary_search(&a).is_ok()
    }

    pub fn parent(&self) -> Option<&Arc<Group>> {
        self.quotient.as_ref().map(|qd| &qd.parent)
    }

    /// Parent element id of the canonical coset representative.
    pub fn parent_rep(&self, a: u32) -> Option<u32> {
        self.quotient.as_ref().map(|qd| qd.parent_idx[a as usize])
    }

    /// Quotient element id of a parent element id.
    pub fn image_of_parent(&self, p: u32) -> Option<u32> {
        self.quotient.as_ref().map(|qd| qd.quot_of_parent[p as usize])
    }

    fn mul_raw(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (a, b) {
            (GroupElement::Perm(x), GroupElement::Perm(y)) => {
                // (x·y)(i) = x(y(i))
                GroupElement::Perm(y.iter().map(|&i| x[i as usize]).collect())
            }
            (GroupElement::Mat(x), GroupElement::Mat(y)) => {
                let f = self.field.as_ref().expect("matrix group has a field");
                let d = self.dim;
                let xa: Vec<u64> = x.iter().map(|&v| v as u64).collect();
                let ya: Vec<u64> = y.iter().map(|&v| v as u64).collect();
                let prod = matrix::mat_mul(f, d, &xa, &ya);
                GroupElement::Mat(prod.into_iter().map(|v| v as u32).collect())
            }
            _ => unreachable!("mixed element kinds in one group"),
        }
    }

    fn inv_raw(&self, a: &GroupElement) -> GroupElement {
        match a {
            GroupElement::Perm(x) => {
                let mut out = vec![0u8; x.len()];
                for (i, &im) in x.iter().enumerate() {
                    out[im as usize] = i as u8;
                }
                GroupElement::Perm(out)
            }
            GroupElement::Mat(x) => {
                let f = self.field.as_ref().expect("matrix group has a field");
                let d = self.dim;
                let xa: Vec<u64> = x.iter().map(|&v| v as u64).collect();
                let inv = matrix::mat_inv(f, d, &xa).expect("group element invertible");
                GroupElement::Mat(inv.into_iter().map(|v| v as u32).collect())
            }
        }
    }

    /// Order of the element with the given id.
    pub fn element_order(&self, a: u32) -> u64 {
        if self.quotient.is_none() {
            if let GroupElement::Perm(p) = &self.elements[a as usize] {
                let mut seen = vec![false; p.len()];
                let mut order = 1u64;
                for start in 0..p.len() {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0u64;
                    let mut cur = start;
                    while !seen[cur] {
                        seen[cur] = true;
                        cur = p[cur] as usize;
                        len += 1;
                    }
                    order = numth::lcm(order, len);
                }
                return order;
            }
        }
        let mut x = a;
        let mut k = 1u64;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent: lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for a in 0..self.order() as u32 {
            e = numth::lcm(e, self.element_order(a));
        }
        e
    }
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

/// Enumerate the group for `spec`.  Errors if the spec is sampler-only,
/// the closed-form order exceeds `cap`, or the enumeration does not match
/// the closed-form order.
pub fn build_group(spec: &GroupSpec, cap: u64) -> Result<Arc<Group>> {
    spec.validate()?;
    if !spec.is_enumerable() {
        return Err(Error::NotEnumerable(spec.to_string()));
    }
    let expected = closed_form_order(spec)?.order;
    if expected > BigUint::from(cap) {
        let got: u128 = expected.try_into().unwrap_or(u128::MAX);
        return Err(Error::CapExceeded { what: "group order", got, cap: cap as u128 });
    }
    let expected: u64 = expected.try_into().expect("order fits in u64 under cap");

    match spec.kind {
        GroupKind::PSL | GroupKind::PSU | GroupKind::PSp4 => {
            let parent_spec = GroupSpec {
                kind: match spec.kind {
                    GroupKind::PSL => GroupKind::SL,
                    GroupKind::PSU => GroupKind::SU,
                    _ => GroupKind::Sp4,
                },
                ..*spec
            };
            // The parent may be up to gcd·cap large; allow it the same
            // absolute cap scaled by the center size bound.
            let gcd = &closed_form_order(&parent_spec)?.order / &closed_form_order(spec)?.order;
            let gcd: u64 = gcd.try_into().expect("center size fits");
            let parent = build_group(&parent_spec, cap.saturating_mul(gcd))?;
            central_quotient(&parent)
        }
        _ => {
            let (field, dim, gens) = generators(spec)?;
            let g = enumerate(spec.clone(), field, dim, gens, expected)?;
            Ok(Arc::new(g))
        }
    }
}

fn perm_cycle(n: usize, points: &[usize]) -> GroupElement {
    let mut img: Vec<u8> = (0..n as u8).collect();
    for w in 0..points.len() {
        img[points[w]] = points[(w + 1) % points.len()] as u8;
    }
    GroupElement::Perm(img)
}

fn generators(spec: &GroupSpec) -> Result<(Option<Arc<FieldSpec>>, usize, Vec<GroupElement>)> {
    let n = spec.n as usize;
    match spec.kind {
        GroupKind::Sym => {
            let mut gens = vec![];
            if n >= 2 {
                gens.push(perm_cycle(n, &[0, 1]));
            }
            if n >= 3 {
                gens.push(perm_cycle(n, &(0..n).collect::<Vec<_>>()));
            }
            Ok((None, 0, gens))
        }
        GroupKind::Alt => {
            let mut gens = vec![];
            if n >= 3 {
                gens.push(perm_cycle(n, &[0, 1, 2]));
            }
            if n >= 4 {
                if n % 2 == 1 {
                    gens.push(perm_cycle(n, &(0..n).collect::<Vec<_>>()));
                } else {
                    gens.push(perm_cycle(n, &(1..n).collect::<Vec<_>>()));
                }
            }
            Ok((None, 0, gens))
        }
        GroupKind::SL => {
            let (p, f) = prime_power(spec.q)?;
            let field = fields::make_field(p, f)?;
            let mut gens = vec![];
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for a in 1..spec.q {
                        let mut m = matrix::identity(n);
                        m[matrix::at(n, i, j)] = a;
                        gens.push(GroupElement::Mat(m.into_iter().map(|v| v as u32).collect()));
                    }
                }
            }
            Ok((Some(field), n, gens))
        }
        GroupKind::SU => {
            let (p, f) = prime_power(spec.q)?;
            let field = fields::make_field(p, 2 * f)?;
            let q = spec.q;
            let qq = field.q;
            let bar = |x: u64| field.frobenius(x, f); // x ↦ x^q
            // isotropic projective vectors for the identity Hermitian form
            let mut gens = vec![];
            let mut lams = vec![];
            for l in 1..qq {
                if field.add(l, bar(l)) == 0 {
                    lams.push(l);
                }
            }
            debug_assert_eq!(lams.len() as u64, q - 1);
            for v in projective_vectors(qq, n) {
                let herm: u64 = v.iter().fold(0u64, |acc, &vi| field.add(acc, field.mul(vi, bar(vi))));
                if herm != 0 {
                    continue;
                }
                for &l in &lams {
                    // T = I + λ·v·(v^{(q)})ᵀ
                    let mut m = matrix::identity(n);
                    for i in 0..n {
                        for j in 0..n {
                            let t = field.mul(l, field.mul(v[i], bar(v[j])));
                            m[matrix::at(n, i, j)] = field.add(m[matrix::at(n, i, j)], t);
                        }
                    }
                    gens.push(GroupElement::Mat(m.into_iter().map(|x| x as u32).collect()));
                }
            }
            Ok((Some(field), n, gens))
        }
        GroupKind::Sp4 => {
            let (p, f) = prime_power(spec.q)?;
            let field = fields::make_field(p, f)?;
            let d = 4usize;
            // B(x, y) = x1 y4 + x2 y3 − x3 y2 − x4 y1
            let jv = |fld: &FieldSpec, v: &[u64]| -> Vec<u64> {
                vec![v[3], v[2], fld.neg(v[1]), fld.neg(v[0])]
            };
            let mut gens = vec![];
            for v in projective_vectors(field.q, d) {
                let w = jv(&field, &v);
                for l in 1..field.q {
                    let mut m = matrix::identity(d);
                    for i in 0..d {
                        for j in 0..d {
                            let t = field.mul(l, field.mul(v[i], w[j]));
                            m[matrix::at(d, i, j)] = field.add(m[matrix::at(d, i, j)], t);
                        }
                    }
                    gens.push(GroupElement::Mat(m.into_iter().map(|x| x as u32).collect()));
                }
            }
            Ok((Some(field), d, gens))
        }
        _ => unreachable!("handled in build_group"),
    }
}

/// Canonical projective representatives: first nonzero coordinate is 1.
fn projective_vectors(q: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = vec![];
    for pivot in 0..d {
        // v[pivot] = 1, v[i] = 0 for i < pivot, free above
        let free = d - pivot - 1;
        let mut counter = vec![0u64; free];
        loop {
            let mut v = vec![0u64; d];
            v[pivot] = 1;
            v[pivot + 1..].copy_from_slice(&counter);
            out.push(v);
            // increment odometer
            let mut i = 0;
            while i < free {
                counter[i] += 1;
                if counter[i] < q {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == free {
                break;
            }
        }
    }
    out
}

fn enumerate(
    spec: GroupSpec,
    field: Option<Arc<FieldSpec>>,
    dim: usize,
    gen_elems: Vec<GroupElement>,
    expected: u64,
) -> Result<Group> {
    let identity = match spec.kind {
        GroupKind::Sym | GroupKind::Alt => GroupElement::Perm((0..spec.n as u8).collect()),
        _ => GroupElement::Mat(matrix::identity(dim).into_iter().map(|v| v as u32).collect()),
    };
    let mut shell = Group {
        spec: spec.clone(),
        field,
        dim,
        elements: vec![],
        index: HashMap::new(),
        inv: vec![],
        center: vec![],
        gens: vec![],
        small_gens: vec![],
        quotient: None,
    };
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0u32);
    let mut head = 0usize;
    while head < elements.len() {
        for g in &gen_elems {
            let prod = shell.mul_raw(&elements[head], g);
            if !index.contains_key(&prod) {
                if elements.len() as u64 >= expected {
                    return Err(Error::WrongOrder { got: elements.len() as u64 + 1, expected });
                }
                index.insert(prod.clone(), elements.len() as u32);
                elements.push(prod);
            }
        }
        head += 1;
    }
    if elements.len() as u64 != expected {
        return Err(Error::WrongOrder { got: elements.len() as u64, expected });
    }
    shell.elements = elements;
    shell.index = index;
    shell.inv = (0..shell.elements.len())
        .map(|i| {
            let e = shell.inv_raw(&shell.elements[i]);
            *shell.index.get(&e).expect("inverse in closure")
        })
        .collect();
    shell.gens = gen_elems
        .iter()
        .map(|g| *shell.index.get(g).expect("generator in closure"))
        .collect();
    shell.small_gens = small_generating_set(&shell);
    shell.center = compute_center(&shell);
    Ok(shell)
}

/// Greedy small generating subset, verified by closure size.
fn small_generating_set(g: &Group) -> Vec<u32> {
    let full: Vec<u32> = g.gens.clone();
    if full.is_empty() {
        return full;
    }
    let closure_size = |subset: &[u32]| -> usize {
        let mut seen = vec![false; g.elements.len()];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1usize;
        while let Some(cur) = stack.pop() {
            for &s in subset {
                let nxt = g.mul(cur, s);
                if !seen[nxt as usize] {
                    seen[nxt as usize] = true;
                    count += 1;
                    stack.push(nxt);
                }
            }
        }
        count
    };
    let mut subset = vec![full[0]];
    loop {
        let size = closure_size(&subset);
        if size == g.elements.len() {
            return subset;
        }
        // add the first generator not yet in the closure of the subset
        let mut seen = vec![false; g.elements.len()];
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(cur) = stack.pop() {
            for &s in &subset {
                let nxt = g.mul(cur, s);
                if !seen[nxt as usize] {
                    seen[nxt as usize] = true;
                    stack.push(nxt);
                }
            }
        }
        let next = full.iter().copied().find(|&f| !seen[f as usize]);
        match next {
            Some(f) => subset.push(f),
            None => return full, // should not happen: gens generate
        }
    }
}

fn compute_center(g: &Group) -> Vec<u32> {
    let gens = if g.small_gens.is_empty() { &g.gens } else { &g.small_gens };
    let mut center = vec![];
    for a in 0..g.elements.len() as u32 {
        if gens.iter().all(|&h| g.mul(a, h) == g.mul(h, a)) {
            center.push(a);
        }
    }
    center
}

/// Quotient by the center.  Coset representatives are the least-encoding
/// members; the identity coset keeps id 0.
pub fn central_quotient(parent: &Arc<Group>) -> Result<Arc<Group>> {
    let z = &parent.center;
    let n = parent.elements.len();
    let mut quot_of_parent = vec![u32::MAX; n];
    let mut parent_idx = vec![];
    let mut elements = vec![];
    for a in 0..n as u32 {
        if quot_of_parent[a as usize] != u32::MAX {
            continue;
        }
        let coset: Vec<u32> = z.iter().map(|&zi| parent.mul(zi, a)).collect();
        let rep = coset
            .iter()
            .copied()
            .min_by(|&x, &y| parent.elements[x as usize].cmp(&parent.elements[y as usize]))
            .unwrap();
        let qid = parent_idx.len() as u32;
        for &c in &coset {
            quot_of_parent[c as usize] = qid;
        }
        parent_idx.push(rep);
        elements.push(parent.elements[rep as usize].clone());
    }
    let spec = GroupSpec { kind: parent.spec.kind.quotient_kind(), ..parent.spec };
    let mut g = Group {
        spec,
        field: parent.field.clone(),
        dim: parent.dim,
        elements,
        index: HashMap::new(), // quotient lookups go through the parent
        inv: vec![],
        center: vec![],
        gens: parent.gens.iter().map(|&x| quot_of_parent[x as usize]).collect(),
        small_gens: parent.small_gens.iter().map(|&x| quot_of_parent[x as usize]).collect(),
        quotient: Some(QuotientData { parent: parent.clone(), parent_idx, quot_of_parent }),
    };
    g.inv = (0..g.elements.len() as u32)
        .map(|a| {
            let qd = g.quotient.as_ref().unwrap();
            let p = qd.parent_idx[a as usize];
            qd.quot_of_parent[parent.inv[p as usize] as usize]
        })
        .collect();
    g.center = compute_center(&g);
    // sanity: the quotient center should be trivial for the kinds above,
    // but compute rather than assume; verify order arithmetic regardless
    if g.elements.len() * z.len() != n {
        return Err(Error::Verification("coset partition size mismatch".into()));
    }
    Ok(Arc::new(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> Arc<Group> {
        build_group(&s.parse().unwrap(), DEFAULT_ENUM_CAP).unwrap()
    }

    #[test]
    fn spec_parsing_roundtrip() {
        for s in ["sym:5", "alt:9", "sl:2:7", "psl:3:2", "su:3:3", "psu:4:2", "sp4:3", "psp4:3", "omega+:4:2"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("foo:3".parse::<GroupSpec>().is_err());
        assert!("sl:2:6".parse::<GroupSpec>().is_err()); // 6 not a prime power
        assert!("su:5:2".parse::<GroupSpec>().is_err()); // dimension out of range
        assert!("omega+:4:3".parse::<GroupSpec>().is_err()); // odd q
    }

    #[test]
    fn alternating_and_symmetric_orders() {
        for (s, o) in [
            ("alt:1", 1u64),
            ("alt:2", 1),
            ("alt:3", 3),
            ("alt:4", 12),
            ("alt:5", 60),
            ("alt:6", 360),
            ("alt:7", 2520),
            ("sym:1", 1),
            ("sym:2", 2),
            ("sym:5", 120),
            ("sym:6", 720),
            ("sym:7", 5040),
        ] {
            let g = build(s);
            assert_eq!(g.order(), o, "{s}");
            assert!(g.elements[0].is_identity(g.dim));
        }
    }

    #[test]
    fn linear_group_orders_and_centers() {
        let g = build("sl:2:5");
        assert_eq!(g.order(), 120);
        assert_eq!(g.center.len(), 2);
        let g = build("sl:2:4");
        assert_eq!(g.order(), 60);
        assert_eq!(g.center.len(), 1);
        let g = build("sl:3:2");
        assert_eq!(g.order(), 168);
        assert_eq!(g.center.len(), 1);
        let g = build("su:3:3");
        assert_eq!(g.order(), 6048);
        assert_eq!(g.center.len(), 1);
    }

    #[test]
    fn alt5_center_trivial() {
        let g = build("alt:5");
        assert_eq!(g.center, vec![0]);
    }

    #[test]
    fn su3_2_is_rejected() {
        // isotropic transvections do not generate the full unitary group at q=2
        let spec: GroupSpec = "su:3:2".parse().unwrap();
        match build_group(&spec, DEFAULT_ENUM_CAP) {
            Err(Error::WrongOrder { got, expected }) => {
                assert_eq!(expected, 216);
                assert!(got < 216);
                assert_eq!(216 % got, 0, "proper subgroup order divides");
            }
            other => panic!("expected WrongOrder, got {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn group_ops_consistent() {
        for s in ["alt:5", "sl:2:5", "sym:4", "sl:3:2"] {
            let g = build(s);
            let n = g.order() as u32;
            for a in 0..n {
                assert_eq!(g.mul(a, g.inv_of(a)), 0, "{s}");
                assert_eq!(g.mul(g.inv_of(a), a), 0, "{s}");
                assert_eq!(g.mul(a, 0), a);
                assert_eq!(g.mul(0, a), a);
            }
            // exhaustive associativity for the smallest; sampled elsewhere
            if n <= 60 {
                for a in 0..n {
                    for b in 0..n {
                        for c in [0u32, 1 % n, (n - 1) / 2, n - 1] {
                            assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_structure() {
        let sl25 = build("sl:2:5");
        let psl = central_quotient(&sl25).unwrap();
        assert_eq!(psl.order(), 60);
        assert_eq!(psl.spec.kind, GroupKind::PSL);
        assert_eq!(psl.center, vec![0]);
        // quotient map is a homomorphism
        for a in 0..120u32 {
            for b in [0u32, 1, 7, 119] {
                let qa = psl.image_of_parent(a).unwrap();
                let qb = psl.image_of_parent(b).unwrap();
                assert_eq!(psl.mul(qa, qb), psl.image_of_parent(sl25.mul(a, b)).unwrap());
            }
        }
        // building psl:2:5 directly gives the same group
        let direct = build("psl:2:5");
        assert_eq!(direct.order(), 60);
        let alt5 = build("alt:5");
        let q = central_quotient(&alt5).unwrap();
        assert_eq!(q.order(), 60);
    }

    #[test]
    fn group_exponents() {
        assert_eq!(build("alt:5").exponent(), 30);
        assert_eq!(build("sl:2:5").exponent(), 60);
        assert_eq!(build("psl:3:2").exponent(), 84);
    }

    #[test]
    fn element_orders_match_generic_loop() {
        let g = build("sl:2:7");
        for a in (0..g.order() as u32).step_by(13) {
            let mut x = a;
            let mut k = 1u64;
            while x != 0 {
                x = g.mul(x, a);
                k += 1;
            }
            assert_eq!(g.element_order(a), k);
        }
        let a7 = build("alt:7");
        for a in (0..a7.order() as u32).step_by(97) {
            let mut x = a;
            let mut k = 1u64;
            while x != 0 {
                x = a7.mul(x, a);
                k += 1;
            }
            assert_eq!(a7.element_order(a), k);
        }
    }

    #[test]
    fn closed_forms() {
        let f = closed_form_order(&"sl:2:5".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(120u32));
        assert_eq!(f.q_part, BigUint::from(5u32));
        let f = closed_form_order(&"su:3:3".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(6048u32));
        let f = closed_form_order(&"su:4:2".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(25920u32));
        let f = closed_form_order(&"sp4:3".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(51840u32));
        let f = closed_form_order(&"psp4:3".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(25920u32));
        // D4 over GF(2)
        let f = closed_form_order(&"omega+:4:2".parse().unwrap()).unwrap();
        assert_eq!(f.order, BigUint::from(174_182_400u64));
        assert_eq!(f.q_part, BigUint::from(4096u32));
    }

    #[test]
    fn sampler_only_kind_does_not_enumerate() {
        let spec: GroupSpec = "omega+:4:2".parse().unwrap();
        assert!(matches!(build_group(&spec, DEFAULT_ENUM_CAP), Err(Error::NotEnumerable(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let spec: GroupSpec = "alt:9".parse().unwrap();
        assert!(matches!(build_group(&spec, 1000), Err(Error::CapExceeded { .. })));
        assert!(build_group(&spec, DEFAULT_ENUM_CAP).is_ok());
    }

    #[test]
    fn small_generating_sets_verified() {
        for s in ["sl:2:5", "sl:3:2", "alt:6", "su:3:3"] {
            let g = build(s);
            assert!(!g.small_gens.is_empty());
            assert!(g.small_gens.len() <= 4, "{s}: {}", g.small_gens.len());
            // closure of small_gens is everything
            let mut seen = vec![false; g.order() as usize];
            seen[0] = true;
            let mut stack = vec![0u32];
            let mut count = 1;
            while let Some(cur) = stack.pop() {
                for &s in &g.small_gens {
                    let nxt = g.mul(cur, s);
                    if !seen[nxt as usize] {
                        seen[nxt as usize] = true;
                        count += 1;
                        stack.push(nxt);
                    }
                }
            }
            assert_eq!(count, g.order() as usize);
        }
    }

    #[test]
    fn trivial_groups() {
        let g = build("alt:2");
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
        let g = build("sym:1");
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn sp4_generators_preserve_form() {
        let g = build("sp4:3");
        let f = g.field.clone().unwrap();
        let jmat: Vec<u64> = vec![
            0, 0, 0, 1, //
            0, 0, 1, 0, //
            0, f.neg(1), 0, 0, //
            f.neg(1), 0, 0, 0,
        ];
        for &gi in g.gens.iter().take(10) {
            let m: Vec<u64> = match &g.elements[gi as usize] {
                GroupElement::Mat(v) => v.iter().map(|&x| x as u64).collect(),
                _ => unreachable!(),
            };
            // mᵀ J m = J
            let mt = matrix::transpose(4, &m);
            let prod = matrix::mat_mul(&f, 4, &matrix::mat_mul(&f, 4, &mt, &jmat), &m);
            assert_eq!(prod, jmat);
        }
    }

    #[test]
    fn su_generators_preserve_hermitian_form() {
        let g = build("su:3:3");
        let f = g.field.clone().unwrap();
        // identity Gram: ⟨x,y⟩ = Σ xᵢ yᵢ^q; check mᴴ m = I where (mᴴ)ᵢⱼ = (mⱼᵢ)^q
        for &gi in g.gens.iter().take(8) {
            let m: Vec<u64> = match &g.elements[gi as usize] {
                GroupElement::Mat(v) => v.iter().map(|&x| x as u64).collect(),
                _ => unreachable!(),
            };
            let mut mh = vec![0u64; 9];
            for i in 0..3 {
                for j in 0..3 {
                    mh[matrix::at(3, i, j)] = f.frobenius(m[matrix::at(3, j, i)], 1);
                }
            }
            assert_eq!(matrix::mat_mul(&f, 3, &mh, &m), matrix::identity(3));
        }
    }
}
