//! The exact class-multiplication tensor a_{ijt} = #{(x, y) ∈ C_i × C_j :
//! xy = g_t} for a fixed representative g_t of C_t, and the covering
//! questions built on it: which classes appear in a product of classes,
//! and which class pairs cover everything outside the center.
//!
//! The full tensor is computed in k passes over the group (pass t counts,
//! for every x ∈ G, the pair (class(x), class(x⁻¹·g_t))), and is verified
//! against the row-sum identity Σ_t a_{ijt}·|C_t| = |C_i|·|C_j| for every
//! (i, j) before being returned.

use crate::classes::{self, ClassDecomposition};
use crate::error::{Error, Result};
use crate::groups::Group;
use rayon::prelude::*;

/// Hard bound on the class count for the cubic tensor.
const CLASS_CAP: usize = 256;

pub struct StructureConstants {
    pub decomp_id: u64,
    pub k: usize,
    /// Flattened as `[i·k² + j·k + t]`.
    tensor: Vec<u32>,
}

impl StructureConstants {
    #[inline]
    pub fn entry(&self, i: u32, j: u32, t: u32) -> u32 {
        let k = self.k;
        self.tensor[(i as usize) * k * k + (j as usize) * k + t as usize]
    }

    /// The vector (a_{ij0}, …, a_{ij,k−1}).
    pub fn row(&self, i: u32, j: u32) -> &[u32] {
        let k = self.k;
        let base = (i as usize) * k * k + (j as usize) * k;
        &self.tensor[base..base + k]
    }
}

/// Compute the full tensor; errors if the class count exceeds the cap or
/// the row-sum identity fails.
pub fn structure_constants(g: &Group, d: &ClassDecomposition) -> Result<StructureConstants> {
    let k = d.count();
    if k > CLASS_CAP {
        return Err(Error::CapExceeded { what: "class count", got: k as u128, cap: CLASS_CAP as u128 });
    }
    let n = g.order() as usize;
    let slabs: Vec<Vec<u32>> = (0..k as u32)
        .into_par_iter()
        .map(|t| {
            let gt = d.classes[t as usize].rep;
            let mut slab = vec![0u32; k * k];
            for x in 0..n as u32 {
                let y = g.mul(g.inv_of(x), gt);
                let i = d.class_of[x as usize] as usize;
                let j = d.class_of[y as usize] as usize;
                slab[i * k + j] += 1;
            }
            slab
        })
        .collect();
    let mut tensor = vec![0u32; k * k * k];
    for (t, slab) in slabs.iter().enumerate() {
        for i in 0..k {
            for j in 0..k {
                tensor[i * k * k + j * k + t] = slab[i * k + j];
            }
        }
    }
    let sc = StructureConstants { decomp_id: d.decomp_id, k, tensor };
    for i in 0..k as u32 {
        for j in 0..k as u32 {
            let mut sum: u128 = 0;
            for t in 0..k as u32 {
                sum += sc.entry(i, j, t) as u128 * d.classes[t as usize].size as u128;
            }
            let want = d.classes[i as usize].size as u128 * d.classes[j as usize].size as u128;
            if sum != want {
                return Err(Error::Verification(format!(
                    "row-sum identity failed at classes ({i}, {j}): {sum} ≠ {want}"
                )));
            }
        }
    }
    Ok(sc)
}

// ---------------------------------------------------------------------------
// class sets
// ---------------------------------------------------------------------------

/// A set of class ids, tied to one decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassSet {
    pub decomp_id: u64,
    k: usize,
    bits: Vec<u64>,
}

impl ClassSet {
    pub fn empty(d: &ClassDecomposition) -> Self {
        ClassSet { decomp_id: d.decomp_id, k: d.count(), bits: vec![0; d.count().div_ceil(64)] }
    }

    pub fn full(d: &ClassDecomposition) -> Self {
        let mut s = Self::empty(d);
        for c in 0..d.count() as u32 {
            s.insert(c);
        }
        s
    }

    pub fn from_classes(d: &ClassDecomposition, classes: &[u32]) -> Self {
        let mut s = Self::empty(d);
        for &c in classes {
            s.insert(c);
        }
        s
    }

    /// All classes whose representatives are not central.
    pub fn noncentral(g: &Group, d: &ClassDecomposition) -> Self {
        let mut s = Self::empty(d);
        for c in 0..d.count() as u32 {
            if !g.is_central(d.classes[c as usize].rep) {
                s.insert(c);
            }
        }
        s
    }

    pub fn insert(&mut self, c: u32) {
        self.bits[(c / 64) as usize] |= 1 << (c % 64);
    }

    pub fn contains(&self, c: u32) -> bool {
        self.bits[(c / 64) as usize] & (1 << (c % 64)) != 0
    }

    pub fn union_with(&mut self, other: &ClassSet) {
        debug_assert_eq!(self.decomp_id, other.decomp_id);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &ClassSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn len_classes(&self) -> usize {
        self.k
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.k as u32).filter(move |&c| self.contains(c))
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.k
    }
}

fn check_decomp(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::DecompositionMismatch);
    }
    Ok(())
}

/// Support of (Σ_{i∈A} C_i)·(Σ_{j∈B} C_j): all classes receiving a nonzero
/// structure constant from some (i, j) ∈ A × B.
pub fn product_support(sc: &StructureConstants, a: &ClassSet, b: &ClassSet) -> Result<ClassSet> {
    check_decomp(sc.decomp_id, a.decomp_id)?;
    check_decomp(sc.decomp_id, b.decomp_id)?;
    let mut out = ClassSet { decomp_id: a.decomp_id, k: sc.k, bits: vec![0; sc.k.div_ceil(64)] };
    for i in a.iter() {
        for j in b.iter() {
            for (t, &v) in sc.row(i, j).iter().enumerate() {
                if v > 0 {
                    out.insert(t as u32);
                }
            }
        }
    }
    Ok(out)
}

/// Support of the single class product C_i·C_j.
pub fn pair_support(sc: &StructureConstants, i: u32, j: u32) -> ClassSet {
    let mut out = ClassSet { decomp_id: sc.decomp_id, k: sc.k, bits: vec![0; sc.k.div_ceil(64)] };
    for (t, &v) in sc.row(i, j).iter().enumerate() {
        if v > 0 {
            out.insert(t as u32);
        }
    }
    out
}

/// Does C_i·C_j contain every class outside the center?  Also returns the
/// missing noncentral classes.
pub fn covers_noncentral(
    g: &Group,
    d: &ClassDecomposition,
    sc: &StructureConstants,
    i: u32,
    j: u32,
) -> Result<(bool, Vec<u32>)> {
    check_decomp(sc.decomp_id, d.decomp_id)?;
    let support = pair_support(sc, i, j);
    let target = ClassSet::noncentral(g, d);
    let missing: Vec<u32> = target.iter().filter(|&c| !support.contains(c)).collect();
    Ok((missing.is_empty(), missing))
}

/// Does C_i·C_j·C_l contain every class of the group?
pub fn triple_product_full(
    d: &ClassDecomposition,
    sc: &StructureConstants,
    i: u32,
    j: u32,
    l: u32,
) -> Result<bool> {
    check_decomp(sc.decomp_id, d.decomp_id)?;
    let ij = pair_support(sc, i, j);
    let single = ClassSet::from_classes(d, &[l]);
    let sup = product_support(sc, &ij, &single)?;
    Ok(sup.is_full())
}

// ---------------------------------------------------------------------------
// covering-pair searches
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassConstraint {
    Any,
    PrimeOrder,
    SquareFreeOrder,
    OrderEquals(u64),
    RegularSemisimple,
    AtMostTwoPrimeDivisors,
}

impl ClassConstraint {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "any" => ClassConstraint::Any,
            "prime" => ClassConstraint::PrimeOrder,
            "square-free" | "squarefree" => ClassConstraint::SquareFreeOrder,
            "regular-semisimple" | "rs" => ClassConstraint::RegularSemisimple,
            "few-primes" => ClassConstraint::AtMostTwoPrimeDivisors,
            other => match other.strip_prefix("order=") {
                Some(m) => ClassConstraint::OrderEquals(
                    m.parse().map_err(|_| Error::BadParameter(format!("bad order in {s:?}")))?,
                ),
                None => return Err(Error::BadParameter(format!("unknown constraint {s:?}"))),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverTarget {
    /// Everything outside the center.
    NonCentral,
    /// Every class.
    All,
}

fn order_is_squarefree(n: u64) -> bool {
    crate::numth::factorize(n).values().all(|&e| e == 1)
}

fn matches_constraint(
    g: &Group,
    d: &ClassDecomposition,
    rs_flags: &Option<Vec<bool>>,
    c: u32,
    constraint: ClassConstraint,
) -> bool {
    let order = d.classes[c as usize].order;
    match constraint {
        ClassConstraint::Any => true,
        ClassConstraint::PrimeOrder => crate::numth::is_prime(order),
        ClassConstraint::SquareFreeOrder => order_is_squarefree(order),
        ClassConstraint::OrderEquals(m) => order == m,
        ClassConstraint::RegularSemisimple => rs_flags.as_ref().map_or(false, |f| f[c as usize]),
        ClassConstraint::AtMostTwoPrimeDivisors => {
            let _ = g;
            crate::numth::factorize(order).len() <= 2
        }
    }
}

/// All class pairs (i, j) satisfying the two constraints whose product
/// covers the target.  Pairs are returned in ascending (i, j) order.
pub fn search_covering_pair(
    g: &Group,
    d: &ClassDecomposition,
    sc: &StructureConstants,
    cx: ClassConstraint,
    cy: ClassConstraint,
    target: CoverTarget,
) -> Result<Vec<(u32, u32)>> {
    check_decomp(sc.decomp_id, d.decomp_id)?;
    let needs_rs = cx == ClassConstraint::RegularSemisimple || cy == ClassConstraint::RegularSemisimple;
    let rs_flags: Option<Vec<bool>> = if needs_rs {
        Some(
            (0..d.count() as u32)
                .map(|c| {
                    classes::is_regular_semisimple(g, d, c)
                        .map(|r| r.is_regular_semisimple)
                })
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    let goal = match target {
        CoverTarget::NonCentral => ClassSet::noncentral(g, d),
        CoverTarget::All => ClassSet::full(d),
    };
    let mut out = vec![];
    for i in 0..d.count() as u32 {
        if !matches_constraint(g, d, &rs_flags, i, cx) {
            continue;
        }
        for j in 0..d.count() as u32 {
            if !matches_constraint(g, d, &rs_flags, j, cy) {
                continue;
            }
            if goal.is_subset_of(&pair_support(sc, i, j)) {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::conjugacy_classes;
    use crate::groups::{build_group, DEFAULT_ENUM_CAP};
    use std::sync::Arc;

    fn setup(s: &str) -> (Arc<Group>, ClassDecomposition, StructureConstants) {
        let g = build_group(&s.parse().unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let d = conjugacy_classes(&g);
        let sc = structure_constants(&g, &d).unwrap();
        (g, d, sc)
    }

    #[test]
    fn identity_row_is_kronecker() {
        let (_, d, sc) = setup("alt:5");
        for j in 0..d.count() as u32 {
            for t in 0..d.count() as u32 {
                assert_eq!(sc.entry(0, j, t), u32::from(j == t));
            }
        }
    }

    #[test]
    fn inverse_pair_hits_identity_with_class_size() {
        for s in ["alt:5", "sl:2:5", "sym:5"] {
            let (_, d, sc) = setup(s);
            for i in 0..d.count() as u32 {
                let ii = d.inverse_class[i as usize];
                assert_eq!(sc.entry(i, ii, 0) as u64, d.classes[i as usize].size, "{s} class {i}");
                // and no other j reaches the identity
                for j in 0..d.count() as u32 {
                    if j != ii {
                        assert_eq!(sc.entry(i, j, 0), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn brute_force_pair_counts_agree() {
        // independent O(|G|²) oracle: count products landing in each class
        for s in ["alt:4", "sl:2:3", "sym:4", "alt:5"] {
            let (g, d, sc) = setup(s);
            let k = d.count();
            let n = g.order() as u32;
            let mut agg = vec![0u64; k * k * k];
            for x in 0..n {
                for y in 0..n {
                    let i = d.class_of[x as usize] as usize;
                    let j = d.class_of[y as usize] as usize;
                    let t = d.class_of[g.mul(x, y) as usize] as usize;
                    agg[i * k * k + j * k + t] += 1;
                }
            }
            for i in 0..k {
                for j in 0..k {
                    for t in 0..k {
                        // aggregated count = a_{ijt} · |C_t|
                        assert_eq!(
                            agg[i * k * k + j * k + t],
                            sc.entry(i as u32, j as u32, t as u32) as u64
                                * d.classes[t].size,
                            "{s} ({i},{j},{t})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn representative_independence() {
        // counting against any member of C_t gives the same a_{ijt}
        let (g, d, sc) = setup("sl:2:5");
        for t in 0..d.count() as u32 {
            let members = &d.members[t as usize];
            for &m in members.iter().take(3) {
                let mut count = vec![0u32; d.count() * d.count()];
                for x in 0..g.order() as u32 {
                    let y = g.mul(g.inv_of(x), m);
                    let i = d.class_of[x as usize] as usize;
                    let j = d.class_of[y as usize] as usize;
                    count[i * d.count() + j] += 1;
                }
                for i in 0..d.count() as u32 {
                    for j in 0..d.count() as u32 {
                        assert_eq!(count[i as usize * d.count() + j as usize], sc.entry(i, j, t));
                    }
                }
            }
        }
    }

    #[test]
    fn product_order_symmetry_brute() {
        // #{(x,y): xy = g} = #{(x,y): yx = g} class-wise
        let (g, d, _) = setup("sl:2:3");
        let n = g.order() as u32;
        let k = d.count();
        let mut fwd = vec![0u64; k * k * k];
        let mut bwd = vec![0u64; k * k * k];
        for x in 0..n {
            for y in 0..n {
                let i = d.class_of[x as usize] as usize;
                let j = d.class_of[y as usize] as usize;
                fwd[i * k * k + j * k + d.class_of[g.mul(x, y) as usize] as usize] += 1;
                bwd[i * k * k + j * k + d.class_of[g.mul(y, x) as usize] as usize] += 1;
            }
        }
        assert_eq!(fwd, bwd);
    }

    #[test]
    fn alt5_three_cycles_square_to_everything() {
        let (_, d, sc) = setup("alt:5");
        let c3 = d.classes_of_order(3)[0];
        let sup = pair_support(&sc, c3, c3);
        assert!(sup.is_full());
    }

    #[test]
    fn psl32_involution_square_is_proper() {
        let (_, d, sc) = setup("psl:3:2");
        let c2 = d.classes_of_order(2)[0];
        let sup = pair_support(&sc, c2, c2);
        assert!(!sup.is_full());
        assert!(sup.contains(0), "identity is a product of two conjugate involutions");
    }

    #[test]
    fn support_of_union_is_union_of_supports() {
        let (_, d, sc) = setup("sl:2:7");
        let k = d.count() as u32;
        let a1 = ClassSet::from_classes(&d, &[1, 3 % k]);
        let a2 = ClassSet::from_classes(&d, &[2, k - 1]);
        let b = ClassSet::from_classes(&d, &[k - 2, 4 % k]);
        let mut a12 = a1.clone();
        a12.union_with(&a2);
        let lhs = product_support(&sc, &a12, &b).unwrap();
        let mut rhs = product_support(&sc, &a1, &b).unwrap();
        rhs.union_with(&product_support(&sc, &a2, &b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_acts_as_unit_on_supports() {
        let (_, d, sc) = setup("alt:6");
        let b = ClassSet::from_classes(&d, &[2, 3]);
        let id = ClassSet::from_classes(&d, &[0]);
        assert_eq!(product_support(&sc, &id, &b).unwrap(), b);
    }

    #[test]
    fn triple_products() {
        let (_, d, sc) = setup("alt:5");
        let c3 = d.classes_of_order(3)[0];
        assert!(triple_product_full(&d, &sc, c3, c3, c3).unwrap());
        assert!(!triple_product_full(&d, &sc, 0, 0, 0).unwrap());
    }

    #[test]
    fn sl25_has_no_squarefree_covering_pair() {
        let (g, d, sc) = setup("sl:2:5");
        let pairs = search_covering_pair(
            &g,
            &d,
            &sc,
            ClassConstraint::SquareFreeOrder,
            ClassConstraint::SquareFreeOrder,
            CoverTarget::NonCentral,
        )
        .unwrap();
        assert!(pairs.is_empty());
        // but dropping the constraint finds pairs: orders (3,4) work
        let pairs = search_covering_pair(
            &g,
            &d,
            &sc,
            ClassConstraint::OrderEquals(3),
            ClassConstraint::OrderEquals(4),
            CoverTarget::NonCentral,
        )
        .unwrap();
        assert!(!pairs.is_empty());
    }

    #[test]
    fn decomposition_mismatch_is_detected() {
        let (_, d1, sc1) = setup("alt:5");
        let (_, d2, _) = setup("alt:6");
        let b = ClassSet::from_classes(&d2, &[0]);
        let a = ClassSet::from_classes(&d1, &[0]);
        assert!(matches!(product_support(&sc1, &a, &b), Err(Error::DecompositionMismatch)));
    }

    #[test]
    fn constraint_parsing() {
        assert_eq!(ClassConstraint::parse("prime").unwrap(), ClassConstraint::PrimeOrder);
        assert_eq!(ClassConstraint::parse("order=8").unwrap(), ClassConstraint::OrderEquals(8));
        assert_eq!(ClassConstraint::parse("rs").unwrap(), ClassConstraint::RegularSemisimple);
        assert!(ClassConstraint::parse("nope").is_err());
    }
}
