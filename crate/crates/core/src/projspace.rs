//! Subspaces of `F_q^d` in canonical reduced row-echelon form, the subspace
//! lattice, and the exact counting functions (Gaussian coefficients,
//! bracket products, chamber counts).

use crate::gf::{Elem, FieldCtx};
use crate::Error;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A subspace of `F_q^d`, stored as an RREF basis matrix.
///
/// Canonical: two values represent the same subspace iff their basis
/// matrices are identical, so derived `Eq`/`Hash`/`Ord` are semantic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub d: usize,
    pub rows: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn zero(d: usize) -> Subspace {
        Subspace { d, rows: Vec::new() }
    }

    pub fn full(d: usize) -> Subspace {
        let rows = (0..d)
            .map(|i| {
                let mut r = vec![0; d];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { d, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Span of arbitrary generating vectors, reduced to RREF.
    /// Idempotent and independent of generator order.
    pub fn from_vectors(field: &FieldCtx, d: usize, vectors: &[Vec<Elem>]) -> Result<Subspace, Error> {
        for v in vectors {
            if v.len() != d {
                return Err(Error::AmbientMismatch(v.len(), d));
            }
        }
        let rows = rref(field, vectors.to_vec());
        Ok(Subspace { d, rows })
    }

    /// Membership of a single vector in the span.
    pub fn contains_vector(&self, field: &FieldCtx, v: &[Elem]) -> bool {
        let mut v = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            let c = v[pivot];
            if c != 0 {
                for j in 0..self.d {
                    v[j] = field.sub(v[j], field.mul(c, row[j]));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// `other <= self` as subspaces.
    pub fn contains(&self, field: &FieldCtx, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    pub fn sum(&self, field: &FieldCtx, other: &Subspace) -> Result<Subspace, Error> {
        if self.d != other.d {
            return Err(Error::AmbientMismatch(self.d, other.d));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Subspace { d: self.d, rows: rref(field, rows) })
    }

    /// Intersection via annihilators: `A ∩ B = (A° + B°)°` for the
    /// standard dot product.
    pub fn intersect(&self, field: &FieldCtx, other: &Subspace) -> Result<Subspace, Error> {
        if self.d != other.d {
            return Err(Error::AmbientMismatch(self.d, other.d));
        }
        let mut ann = self.annihilator(field).rows;
        ann.extend(other.annihilator(field).rows);
        let ann = Subspace { d: self.d, rows: rref(field, ann) };
        Ok(ann.annihilator(field))
    }

    pub fn meets_trivially(&self, field: &FieldCtx, other: &Subspace) -> Result<bool, Error> {
        if self.d != other.d {
            return Err(Error::AmbientMismatch(self.d, other.d));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(rank(field, rows) == self.dim() + other.dim())
    }

    /// The annihilator `{ x : r · x = 0 for all basis rows r }` under the
    /// standard dot product; dimension `d - dim`.
    pub fn annihilator(&self, field: &FieldCtx) -> Subspace {
        let rows = nullspace(field, self.d, &self.rows);
        Subspace { d: self.d, rows: rref(field, rows) }
    }
}

/// In-place reduced row-echelon form; returns the nonzero rows with pivot
/// entries 1, pivot columns cleared, pivot columns strictly increasing.
pub fn rref(field: &FieldCtx, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let d = match rows.first() {
        Some(r) => r.len(),
        None => return Vec::new(),
    };
    let mut pivot_row = 0;
    for col in 0..d {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = field.inv(rows[pivot_row][col]).unwrap();
        for j in 0..d {
            rows[pivot_row][j] = field.mul(rows[pivot_row][j], inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let c = rows[r][col];
                for j in 0..d {
                    let t = field.mul(c, rows[pivot_row][j]);
                    rows[r][j] = field.sub(rows[r][j], t);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

pub fn rank(field: &FieldCtx, rows: Vec<Vec<Elem>>) -> usize {
    rref(field, rows).len()
}

/// Basis of `{ x : M x = 0 }` for the row matrix `M` (not the row space).
pub fn nullspace(field: &FieldCtx, d: usize, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let m = rref(field, rows.to_vec());
    let pivots: Vec<usize> = m.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    let mut basis = Vec::with_capacity(d - m.len());
    for free in 0..d {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0 as Elem; d];
        v[free] = 1;
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Exact counting
// ---------------------------------------------------------------------------

/// `[c]_q = prod_{i=1}^c (q^i - 1)`, with `[0]_q = 1`.
pub fn bracket(c: u32, q: u64) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 1..=c {
        qi *= &q;
        acc *= &qi - BigUint::one();
    }
    acc
}

/// Gaussian coefficient: `prod_{i=1}^a (q^{b-a+i}-1)/(q^i-1)` for
/// `0 <= a <= b`, and 0 otherwise.  The division is exact.
pub fn gaussian(b: i64, a: i64, q: u64) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    if a < 0 || a > b {
        return BigUint::zero();
    }
    let (b, a) = (b as u32, a as u32);
    let num = bracket(b, q);
    let den = bracket(a, q) * bracket(b - a, q);
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// `z_c(q)`, the number of chambers of `F_q^c`:  `(q-1)^{-c} [c]_q`.
pub fn chamber_count(c: u32, q: u64) -> BigUint {
    let num = bracket(c, q);
    let den = BigUint::from(q - 1).pow(c);
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Number of `b`-subspaces of `F_q^d` skew to a fixed `a`-subspace:
/// `gaussian(d-a, b) * q^{ab}`.
pub fn count_skew(d: u32, a: u32, b: u32, q: u64) -> BigUint {
    assert!(d >= a + b);
    gaussian((d - a) as i64, b as i64, q) * BigUint::from(q).pow(a * b)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All `s`-subspaces of `F_q^d` as canonical RREF matrices, sorted
/// lexicographically.  Generates one matrix per pivot-column pattern and
/// free-entry assignment, so exactly `gaussian(d, s, q)` values appear
/// with no dedup pass.
pub fn enumerate_subspaces(field: &FieldCtx, d: usize, s: usize) -> Vec<Subspace> {
    assert!(s <= d);
    if s == 0 {
        return vec![Subspace::zero(d)];
    }
    let q = field.q as usize;
    let mut out = Vec::new();
    for pivots in combinations(d, s) {
        // Free positions: (row i, col j) with j > pivots[i], j not a pivot.
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..d {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let count = q.checked_pow(free.len() as u32).expect("free-entry count overflow");
        for mut code in 0..count {
            let mut rows = vec![vec![0 as Elem; d]; s];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, j) in &free {
                rows[i][j] = (code % q) as Elem;
                code /= q;
            }
            out.push(Subspace { d, rows });
        }
    }
    out.sort();
    out
}

/// All 1-subspaces, i.e. projective points.
pub fn enumerate_points(field: &FieldCtx, d: usize) -> Vec<Subspace> {
    enumerate_subspaces(field, d, 1)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}
