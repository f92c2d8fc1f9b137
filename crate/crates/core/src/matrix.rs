//! Dense matrix arithmetic over a finite field.  Matrices are row-major
//! vectors of field-element indices; the dimension travels alongside.

use crate::fields::FieldSpec;

#[inline]
pub fn at(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

pub fn identity(d: usize) -> Vec<u64> {
    let mut m = vec![0u64; d * d];
    for i in 0..d {
        m[at(d, i, i)] = 1;
    }
    m
}

pub fn mat_mul(f: &FieldSpec, d: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[at(d, i, k)];
            if aik == 0 {
                continue;
            }
            for j in 0..d {
                let t = f.mul(aik, b[at(d, k, j)]);
                out[at(d, i, j)] = f.add(out[at(d, i, j)], t);
            }
        }
    }
    out
}

pub fn mat_vec(f: &FieldSpec, d: usize, m: &[u64], v: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; d];
    for i in 0..d {
        let mut acc = 0u64;
        for j in 0..d {
            acc = f.add(acc, f.mul(m[at(d, i, j)], v[j]));
        }
        out[i] = acc;
    }
    out
}

pub fn transpose(d: usize, m: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; d * d];
    for i in 0..d {
        for j in 0..d {
            out[at(d, j, i)] = m[at(d, i, j)];
        }
    }
    out
}

/// Row-echelon rank of an r×c matrix (destroys a copy).
pub fn rank(f: &FieldSpec, rows: usize, cols: usize, m: &[u64]) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| a[r * cols + col] != 0);
        let Some(p) = pivot else { continue };
        for j in 0..cols {
            a.swap(p * cols + j, rank * cols + j);
        }
        let inv = f.inv(a[rank * cols + col]).expect("pivot nonzero");
        for r in 0..rows {
            if r == rank || a[r * cols + col] == 0 {
                continue;
            }
            let factor = f.mul(a[r * cols + col], inv);
            for j in col..cols {
                let t = f.mul(factor, a[rank * cols + j]);
                a[r * cols + j] = f.sub(a[r * cols + j], t);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// dim ker(m) for a d×d matrix.
pub fn kernel_dim(f: &FieldSpec, d: usize, m: &[u64]) -> usize {
    d - rank(f, d, d, m)
}

pub fn det(f: &FieldSpec, d: usize, m: &[u64]) -> u64 {
    let mut a = m.to_vec();
    let mut det = 1u64;
    for col in 0..d {
        let pivot = (col..d).find(|&r| a[at(d, r, col)] != 0);
        let Some(p) = pivot else { return 0 };
        if p != col {
            for j in 0..d {
                a.swap(at(d, p, j), at(d, col, j));
            }
            det = f.neg(det);
        }
        let piv = a[at(d, col, col)];
        det = f.mul(det, piv);
        let inv = f.inv(piv).expect("pivot nonzero");
        for r in col + 1..d {
            if a[at(d, r, col)] == 0 {
                continue;
            }
            let factor = f.mul(a[at(d, r, col)], inv);
            for j in col..d {
                let t = f.mul(factor, a[at(d, col, j)]);
                a[at(d, r, j)] = f.sub(a[at(d, r, j)], t);
            }
        }
    }
    det
}

pub fn mat_inv(f: &FieldSpec, d: usize, m: &[u64]) -> Option<Vec<u64>> {
    let mut a = m.to_vec();
    let mut b = identity(d);
    for col in 0..d {
        let pivot = (col..d).find(|&r| a[at(d, r, col)] != 0)?;
        if pivot != col {
            for j in 0..d {
                a.swap(at(d, pivot, j), at(d, col, j));
                b.swap(at(d, pivot, j), at(d, col, j));
            }
        }
        let inv = f.inv(a[at(d, col, col)]).expect("pivot nonzero");
        for j in 0..d {
            a[at(d, col, j)] = f.mul(a[at(d, col, j)], inv);
            b[at(d, col, j)] = f.mul(b[at(d, col, j)], inv);
        }
        for r in 0..d {
            if r == col || a[at(d, r, col)] == 0 {
                continue;
            }
            let factor = a[at(d, r, col)];
            for j in 0..d {
                let t = f.mul(factor, a[at(d, col, j)]);
                a[at(d, r, j)] = f.sub(a[at(d, r, j)], t);
                let t = f.mul(factor, b[at(d, col, j)]);
                b[at(d, r, j)] = f.sub(b[at(d, r, j)], t);
            }
        }
    }
    Some(b)
}

/// Characteristic polynomial det(xI − M), monic, little-endian, length d+1.
///
/// The matrix is first taken to upper Hessenberg form by a Gaussian
/// similarity; the leading-principal-minor recurrence
/// p_i = (x − h_{ii})·p_{i−1} − Σ_{r<i} h_{r,i}·(Π_{s=r+1}^{i} h_{s,s−1})·p_{r−1}
/// then yields the characteristic polynomial in O(d³) field operations.
pub fn charpoly(f: &FieldSpec, d: usize, m: &[u64]) -> Vec<u64> {
    let mut h = m.to_vec();
    for col in 0..d.saturating_sub(2) {
        let pivot = (col + 1..d).find(|&r| h[at(d, r, col)] != 0);
        let Some(p) = pivot else { continue };
        if p != col + 1 {
            for j in 0..d {
                h.swap(at(d, p, j), at(d, col + 1, j));
            }
            for i in 0..d {
                h.swap(at(d, i, p), at(d, i, col + 1));
            }
        }
        let inv = f.inv(h[at(d, col + 1, col)]).expect("pivot nonzero");
        for r in col + 2..d {
            if h[at(d, r, col)] == 0 {
                continue;
            }
            let factor = f.mul(h[at(d, r, col)], inv);
            for j in 0..d {
                let t = f.mul(factor, h[at(d, col + 1, j)]);
                h[at(d, r, j)] = f.sub(h[at(d, r, j)], t);
            }
            for i in 0..d {
                let t = f.mul(factor, h[at(d, i, r)]);
                h[at(d, i, col + 1)] = f.add(h[at(d, i, col + 1)], t);
            }
        }
    }
    // recurrence over leading principal minors (1-based indices in comments)
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=d {
        let prev = &polys[i - 1];
        let mut cur = vec![0u64; prev.len() + 1];
        let hii = h[at(d, i - 1, i - 1)];
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = f.add(cur[k + 1], c);
            cur[k] = f.sub(cur[k], f.mul(hii, c));
        }
        let mut prod = 1u64;
        for r in (1..i).rev() {
            prod = f.mul(prod, h[at(d, r, r - 1)]);
            if prod == 0 {
                break;
            }
            let coef = f.mul(h[at(d, r - 1, i - 1)], prod);
            if coef != 0 {
                for (k, &c) in polys[r - 1].iter().enumerate() {
                    cur[k] = f.sub(cur[k], f.mul(coef, c));
                }
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// gcd of the characteristic polynomial with its derivative is constant
/// exactly when the polynomial is square-free.
pub fn poly_is_squarefree(f: &FieldSpec, poly: &[u64]) -> bool {
    let mut deriv: Vec<u64> = (1..poly.len())
        .map(|k| f.mul(poly[k], (k as u64) % f.p))
        .collect();
    while deriv.last() == Some(&0) {
        deriv.pop();
    }
    if deriv.is_empty() {
        return poly.len() <= 1; // nonconstant poly with zero derivative: p-th power
    }
    let g = poly_gcd(f, poly, &deriv);
    g.len() == 1
}

/// Monic gcd over the given field.
pub fn poly_gcd(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead_inv = f.inv(b[db]).expect("nonzero lead");
        while a.len() > db {
            let da = a.len() - 1;
            let c = f.mul(a[da], lead_inv);
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let t = f.mul(c, bi);
                    a[da - db + i] = f.sub(a[da - db + i], t);
                }
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead).unwrap();
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

/// Multiplicative order of an invertible matrix (None if it exceeds `cap`).
pub fn mat_order(f: &FieldSpec, d: usize, m: &[u64], cap: u64) -> Option<u64> {
    let id = identity(d);
    let mut acc = m.to_vec();
    let mut k = 1u64;
    while acc != id {
        if k >= cap {
            return None;
        }
        acc = mat_mul(f, d, &acc, m);
        k += 1;
    }
    Some(k)
}
