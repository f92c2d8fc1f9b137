//! Conjugacy class decomposition with a deterministic class order:
//! ascending element order, then class size, then least representative
//! encoding.  The identity class is always class 0.

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::matrix;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_DECOMP_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct ClassInfo {
    /// Element id of the representative (least encoding in the class).
    pub rep: u32,
    pub size: u64,
    /// Order of the elements of the class.
    pub order: u64,
    pub centralizer_order: u64,
}

pub struct ClassDecomposition {
    /// Unique id tying derived objects (class sets, tensors, tables) to
    /// this particular decomposition instance.
    pub decomp_id: u64,
    pub classes: Vec<ClassInfo>,
    /// element id -> class id
    pub class_of: Vec<u32>,
    /// class id -> sorted member element ids
    pub members: Vec<Vec<u32>>,
    /// class id -> class id of inverses
    pub inverse_class: Vec<u32>,
}

impl ClassDecomposition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, element: u32) -> Result<u32> {
        self.class_of
            .get(element as usize)
            .copied()
            .ok_or(Error::IdOutOfRange(element as usize))
    }

    /// Class ids with the given element order, ascending.
    pub fn classes_of_order(&self, order: u64) -> Vec<u32> {
        (0..self.count() as u32)
            .filter(|&c| self.classes[c as usize].order == order)
            .collect()
    }
}

/// Decompose `g` into conjugacy classes by orbit expansion under
/// conjugation by a verified generating set.
pub fn conjugacy_classes(g: &Group) -> ClassDecomposition {
    let n = g.order() as usize;
    let gens: Vec<u32> = if g.small_gens.is_empty() { g.gens.clone() } else { g.small_gens.clone() };
    let gen_invs: Vec<u32> = gens.iter().map(|&h| g.inv_of(h)).collect();
    let mut class_of_raw = vec![u32::MAX; n];
    let mut raw_classes: Vec<Vec<u32>> = vec![];
    for start in 0..n as u32 {
        if class_of_raw[start as usize] != u32::MAX {
            continue;
        }
        let cid = raw_classes.len() as u32;
        let mut members = vec![start];
        class_of_raw[start as usize] = cid;
        let mut head = 0usize;
        while head < members.len() {
            let cur = members[head];
            for (&h, &hi) in gens.iter().zip(&gen_invs) {
                let conj = g.mul(g.mul(h, cur), hi);
                if class_of_raw[conj as usize] == u32::MAX {
                    class_of_raw[conj as usize] = cid;
                    members.push(conj);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        raw_classes.push(members);
    }
    // canonical order: (element order, class size, least representative encoding)
    let mut keyed: Vec<(u64, u64, u32, u32)> = raw_classes
        .iter()
        .enumerate()
        .map(|(cid, members)| {
            let rep = members
                .iter()
                .copied()
                .min_by(|&a, &b| g.elements[a as usize].cmp(&g.elements[b as usize]))
                .unwrap();
            let order = g.element_order(rep);
            (order, members.len() as u64, rep, cid as u32)
        })
        .collect();
    keyed.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| g.elements[a.2 as usize].cmp(&g.elements[b.2 as usize]))
    });
    let mut classes = vec![];
    let mut members = vec![];
    let mut class_of = vec![0u32; n];
    for (new_id, &(order, size, rep, old_id)) in keyed.iter().enumerate() {
        let mem = std::mem::take(&mut raw_classes[old_id as usize]);
        for &m in &mem {
            class_of[m as usize] = new_id as u32;
        }
        classes.push(ClassInfo { rep, size, order, centralizer_order: g.order() / size });
        members.push(mem);
    }
    let inverse_class: Vec<u32> = classes
        .iter()
        .map(|ci| class_of[g.inv_of(ci.rep) as usize])
        .collect();
    ClassDecomposition {
        decomp_id: NEXT_DECOMP_ID.fetch_add(1, Ordering::Relaxed),
        classes,
        class_of,
        members,
        inverse_class,
    }
}

/// Diagnostic report for the regular-semisimple test of one class.
#[derive(Clone, Debug)]
pub struct RegularSemisimpleReport {
    pub class: u32,
    /// Element order is coprime to the field characteristic.
    pub order_coprime_to_char: bool,
    /// The full centralizer of the representative is abelian.
    pub abelian_centralizer: bool,
    /// Square-free characteristic polynomial of the canonical matrix
    /// representative (None for central-quotient groups, where the matrix
    /// is only a coset representative).
    pub squarefree_charpoly: Option<bool>,
    pub is_regular_semisimple: bool,
}

/// Regular-semisimple test: order coprime to the characteristic and
/// abelian centralizer.  Errors on permutation groups.
pub fn is_regular_semisimple(
    g: &Group,
    d: &ClassDecomposition,
    class: u32,
) -> Result<RegularSemisimpleReport> {
    let ci = d
        .classes
        .get(class as usize)
        .ok_or(Error::IdOutOfRange(class as usize))?;
    let field = match &g.field {
        Some(f) => f.clone(),
        None => return Err(Error::PermutationInput),
    };
    let p = field.p;
    let order_coprime = ci.order % p != 0;
    let rep = ci.rep;
    let abelian = if g.is_central(rep) {
        // centralizer is the whole group
        g.center.len() as u64 == g.order()
    } else {
        let mut centralizer = Vec::with_capacity(ci.centralizer_order as usize);
        for x in 0..g.order() as u32 {
            if g.mul(x, rep) == g.mul(rep, x) {
                centralizer.push(x);
            }
        }
        debug_assert_eq!(centralizer.len() as u64, ci.centralizer_order);
        let mut ok = true;
        'outer: for (i, &a) in centralizer.iter().enumerate() {
            for &b in centralizer.iter().skip(i + 1) {
                if g.mul(a, b) != g.mul(b, a) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        ok
    };
    let squarefree = if g.parent().is_some() {
        None
    } else {
        match &g.elements[rep as usize] {
            GroupElement::Mat(m) => {
                let ma: Vec<u64> = m.iter().map(|&v| v as u64).collect();
                let cp = matrix::charpoly(&field, g.dim, &ma);
                Some(matrix::poly_is_squarefree(&field, &cp))
            }
            GroupElement::Perm(_) => return Err(Error::PermutationInput),
        }
    };
    Ok(RegularSemisimpleReport {
        class,
        order_coprime_to_char: order_coprime,
        abelian_centralizer: abelian,
        squarefree_charpoly: squarefree,
        is_regular_semisimple: order_coprime && abelian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, central_quotient, DEFAULT_ENUM_CAP};

    fn decompose(s: &str) -> (std::sync::Arc<Group>, ClassDecomposition) {
        let g = build_group(&s.parse().unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let d = conjugacy_classes(&g);
        (g, d)
    }

    #[test]
    fn alt4_class_sizes() {
        let (_, d) = decompose("alt:4");
        let sizes: Vec<u64> = d.classes.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
    }

    #[test]
    fn alt5_class_sizes_and_orders() {
        let (_, d) = decompose("alt:5");
        let sizes: Vec<u64> = d.classes.iter().map(|c| c.size).collect();
        let orders: Vec<u64> = d.classes.iter().map(|c| c.order).collect();
        assert_eq!(sizes, vec![1, 15, 20, 12, 12]);
        assert_eq!(orders, vec![1, 2, 3, 5, 5]);
    }

    #[test]
    fn sl25_has_nine_classes() {
        let (_, d) = decompose("sl:2:5");
        assert_eq!(d.count(), 9);
        let orders: Vec<u64> = d.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 5, 5, 6, 10, 10]);
        // the −I class is a singleton
        assert_eq!(d.classes[1].size, 1);
        let total: u64 = d.classes.iter().map(|c| c.size).sum();
        assert_eq!(total, 120);
    }

    #[test]
    fn trivial_group_single_class() {
        let (_, d) = decompose("alt:2");
        assert_eq!(d.count(), 1);
        assert_eq!(d.classes[0].size, 1);
    }

    #[test]
    fn identity_class_first_and_ordering_deterministic() {
        for s in ["alt:6", "sl:2:7", "sym:5", "su:3:3"] {
            let (g, d) = decompose(s);
            assert_eq!(d.classes[0].order, 1);
            assert_eq!(d.classes[0].rep, 0);
            for w in d.classes.windows(2) {
                let key0 = (w[0].order, w[0].size);
                let key1 = (w[1].order, w[1].size);
                assert!(
                    key0 < key1
                        || (key0 == key1
                            && g.elements[w[0].rep as usize] < g.elements[w[1].rep as usize]),
                    "{s}: class order not strictly increasing"
                );
            }
        }
    }

    #[test]
    fn class_map_is_conjugation_invariant() {
        for s in ["alt:6", "sl:2:7", "sym:6"] {
            let (g, d) = decompose(s);
            for x in 0..g.order() as u32 {
                for &h in &g.small_gens {
                    assert_eq!(d.class_of[g.conjugate(x, h) as usize], d.class_of[x as usize]);
                }
                // member lists agree with class_of
                let c = d.class_of[x as usize];
                assert!(d.members[c as usize].binary_search(&x).is_ok());
            }
        }
    }

    #[test]
    fn size_times_centralizer_is_group_order() {
        for s in ["alt:7", "sl:2:9", "sym:6", "su:3:3"] {
            let (g, d) = decompose(s);
            for c in &d.classes {
                assert_eq!(c.size * c.centralizer_order, g.order());
            }
            assert_eq!(d.classes.iter().map(|c| c.size).sum::<u64>(), g.order());
        }
    }

    #[test]
    fn inverse_class_is_involution() {
        for s in ["alt:6", "sl:2:5", "sl:2:7", "sym:5"] {
            let (g, d) = decompose(s);
            assert_eq!(d.inverse_class[0], 0);
            for c in 0..d.count() as u32 {
                let ic = d.inverse_class[c as usize];
                assert_eq!(d.inverse_class[ic as usize], c, "{s}");
                // every member's inverse lands in the inverse class
                for &m in &d.members[c as usize] {
                    assert_eq!(d.class_of[g.inv_of(m) as usize], ic);
                }
            }
        }
    }

    #[test]
    fn regular_semisimple_classification_sl25() {
        let (g, d) = decompose("sl:2:5");
        // orders: 1, 2, 3, 4, 5, 5, 6, 10, 10 — char is 5, so the order-5
        // and order-10 classes are not p′-elements; ±I are central.
        let expect = [false, false, true, true, false, false, true, false, false];
        for (c, &want) in expect.iter().enumerate() {
            let r = is_regular_semisimple(&g, &d, c as u32).unwrap();
            assert_eq!(r.is_regular_semisimple, want, "class {c} order {}", d.classes[c].order);
        }
        // identity: centralizer is the whole (nonabelian) group
        let r = is_regular_semisimple(&g, &d, 0).unwrap();
        assert!(!r.abelian_centralizer);
        assert!(r.order_coprime_to_char);
    }

    #[test]
    fn squarefree_witness_implies_regular_semisimple() {
        for s in ["sl:2:5", "sl:2:7", "sl:3:2", "su:3:3"] {
            let (g, d) = decompose(s);
            for c in 0..d.count() as u32 {
                let r = is_regular_semisimple(&g, &d, c).unwrap();
                if r.squarefree_charpoly == Some(true) {
                    assert!(
                        r.is_regular_semisimple,
                        "{s} class {c}: squarefree charpoly must imply regular semisimple"
                    );
                }
            }
        }
    }

    #[test]
    fn permutation_groups_rejected_for_rs_test() {
        let (g, d) = decompose("alt:5");
        assert!(matches!(is_regular_semisimple(&g, &d, 2), Err(Error::PermutationInput)));
    }

    #[test]
    fn quotient_group_classes() {
        let sl = build_group(&"sl:2:5".parse().unwrap(), DEFAULT_ENUM_CAP).unwrap();
        let psl = central_quotient(&sl).unwrap();
        let d = conjugacy_classes(&psl);
        let mut sizes: Vec<u64> = d.classes.iter().map(|c| c.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        // rs test works on quotients but reports no charpoly witness
        let r = is_regular_semisimple(&psl, &d, 2).unwrap();
        assert!(r.squarefree_charpoly.is_none());
    }
}
