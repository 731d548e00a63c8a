//! The eigenvectors `χ^i_P` of `Γ_{2n}(q)`, exact verification of the
//! smallest eigenvalue `-q^{2n(n-1)}`, the eigenspace dimension, and the
//! Hoffman ratio-bound certificate.
//!
//! Every identity here is an exact integer statement and is verified as
//! such; no floating point anywhere.

use crate::chambers::ChamberUniverse;
use crate::projspace::chamber_count;
use crate::Error;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;

/// An exact integer-valued function on the chamber universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub values: Vec<i64>,
}

impl WeightVector {
    pub fn zeros(n: usize) -> WeightVector {
        WeightVector { values: vec![0; n] }
    }

    pub fn ones(n: usize) -> WeightVector {
        WeightVector { values: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sparse (index, value) pairs over the support.
    pub fn to_sparse(&self) -> Vec<(usize, i64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i, v))
            .collect()
    }

    pub fn from_sparse(len: usize, entries: &[(usize, i64)]) -> WeightVector {
        let mut values = vec![0; len];
        for &(i, v) in entries {
            values[i] = v;
        }
        WeightVector { values }
    }

    /// Total mass `1ᵀ v`.
    pub fn mass(&self) -> i128 {
        self.values.iter().map(|&v| v as i128).sum()
    }

    /// CSV export: `index,value` per line.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        writeln!(sink, "index,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(sink, "{i},{v}")?;
        }
        Ok(())
    }
}

/// `⟨v, w⟩ = Σ_C v(C) w(C)`, exact.
pub fn inner_product(v: &WeightVector, w: &WeightVector) -> Result<i128, Error> {
    if v.len() != w.len() {
        return Err(Error::UniverseMismatch);
    }
    Ok(v.values
        .iter()
        .zip(&w.values)
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum())
}

/// Half-dimension of an even-dimensional universe.
pub fn half_dim(universe: &ChamberUniverse) -> Result<usize, Error> {
    if universe.d % 2 != 0 {
        return Err(Error::DimensionOutOfRange(format!(
            "universe dimension {} is odd",
            universe.d
        )));
    }
    Ok(universe.d / 2)
}

/// The map `χ^i_P` on chambers of `F_q^{2n}`:
/// `q^i` when `P ≤ C_n`, `P ≰ C_{n-i}`; `-1` when `P ≤ C_{n+i}`,
/// `P ≰ C_n`; `0` otherwise (`C_0 = {0}`, `C_{2n}` the full space).
pub fn chi_vector(universe: &ChamberUniverse, i: usize, point: usize) -> Result<WeightVector, Error> {
    let n = half_dim(universe)?;
    if i < 1 || i > n {
        return Err(Error::DimensionOutOfRange(format!("i = {i} not in [1, {n}]")));
    }
    if point >= universe.tables[1].len() {
        return Err(Error::BadParameter(format!("point index {point} out of range")));
    }
    let qi = (universe.field.q as i64).pow(i as u32);
    let values = (0..universe.len())
        .into_par_iter()
        .map(|c| {
            let in_mid = universe.point_in_part(point, c, n);
            if in_mid {
                if universe.point_in_part(point, c, n - i) {
                    0
                } else {
                    qi
                }
            } else if universe.point_in_part(point, c, n + i) {
                -1
            } else {
                0
            }
        })
        .collect();
    Ok(WeightVector { values })
}

/// Smallest eigenvalue `λ = -q^{2n(n-1)}` of `Γ_{2n}(q)`.
pub fn smallest_eigenvalue(n: usize, q: u64) -> i128 {
    -(q as i128).pow((2 * n * (n - 1)) as u32)
}

/// Exact check that `A v = λ v` where `A` acts by summing over opposite
/// chambers: for every chamber `C`, `Σ_{D opposite C} v(D) = λ v(C)`.
pub fn verify_smallest_eigenvector(universe: &ChamberUniverse, v: &WeightVector) -> Result<bool, Error> {
    let n = half_dim(universe)?;
    if v.len() != universe.len() {
        return Err(Error::UniverseMismatch);
    }
    let lambda = smallest_eigenvalue(n, universe.field.q as u64);

    // Partition the support by value: A·v per vertex is then a short
    // sum of value * popcount(row & class) terms.
    let mut classes: HashMap<i64, Vec<u64>> = HashMap::new();
    let words = universe.len().div_ceil(64);
    for (c, &val) in v.values.iter().enumerate() {
        if val != 0 {
            classes.entry(val).or_insert_with(|| vec![0u64; words])[c / 64] |= 1 << (c % 64);
        }
    }
    let classes: Vec<(i64, Vec<u64>)> = classes.into_iter().collect();

    let ok = match universe.adjacency() {
        Some(adj) => (0..universe.len()).into_par_iter().all(|c| {
            let row = adj.row(c);
            let acc: i128 = classes
                .iter()
                .map(|(val, class)| {
                    let cnt: u64 = row.iter().zip(class).map(|(a, b)| (a & b).count_ones() as u64).sum();
                    *val as i128 * cnt as i128
                })
                .sum();
            acc == lambda * v.values[c] as i128
        }),
        None => (0..universe.len()).into_par_iter().all(|c| {
            let acc: i128 = (0..universe.len())
                .filter(|&e| universe.is_opposite(c, e))
                .map(|e| v.values[e] as i128)
                .sum();
            acc == lambda * v.values[c] as i128
        }),
    };
    Ok(ok)
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn exact_integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        tail.par_iter_mut().for_each(|row| {
            let factor = row[col].clone();
            for j in col..cols {
                let num = &pivot * &row[j] - &factor * &pivot_row[j];
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero());
                row[j] = quot;
            }
        });
        prev = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// All `χ^i_P` for `i ∈ [1, n]` and every point `P`, as rows.
pub fn chi_family(universe: &ChamberUniverse) -> Result<Vec<WeightVector>, Error> {
    let n = half_dim(universe)?;
    let points = universe.tables[1].len();
    let mut out = Vec::with_capacity(n * points);
    for i in 1..=n {
        for p in 0..points {
            out.push(chi_vector(universe, i, p)?);
        }
    }
    Ok(out)
}

/// Exact rank over the rationals of the span of all `χ^i_P`.
///
/// Computed as the rank of the integer Gram matrix `M Mᵀ` (equal to the
/// rank of `M` over `Q`), which keeps the fraction-free elimination at
/// `(n·points)²` instead of `(n·points) × z_{2n}`.
pub fn eigenspace_dimension(universe: &ChamberUniverse) -> Result<usize, Error> {
    let family = chi_family(universe)?;
    Ok(rank_via_gram(&family))
}

pub fn rank_via_gram(vectors: &[WeightVector]) -> usize {
    let k = vectors.len();
    let gram: Vec<Vec<BigInt>> = (0..k)
        .into_par_iter()
        .map(|a| {
            (0..k)
                .map(|b| BigInt::from(inner_product(&vectors[a], &vectors[b]).unwrap()))
                .collect()
        })
        .collect();
    exact_integer_rank(gram)
}

/// Direct fraction-free rank of the stacked vectors; independent route
/// used to cross-check [`rank_via_gram`] at small scale.
pub fn rank_direct(vectors: &[WeightVector]) -> usize {
    let m: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.values.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    exact_integer_rank(m)
}

/// `n (q^{2n} - q) / (q - 1)`, the dimension of the λ-eigenspace.
pub fn eigenspace_dimension_formula(n: usize, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(2 * n as u32) - BigUint::from(q);
    let (quot, rem) = (BigUint::from(n) * qn).div_rem(&BigUint::from(q - 1));
    debug_assert!(rem.is_zero());
    quot
}

/// Evidence that the spectral inputs of the Hoffman bound were verified
/// on a concrete universe.
#[derive(Debug, Clone)]
pub struct SpectralCertificate {
    pub n: usize,
    pub q: u64,
    pub lambda: i128,
    pub degree: BigUint,
    pub eigenvectors_checked: usize,
    pub eigenspace_rank: Option<usize>,
    pub hoffman_bound: BigUint,
}

/// Verify `A χ = λ χ` for every `χ^i_P`, optionally the eigenspace rank,
/// then emit the ratio-bound value `N(-λ)/(k-λ)` as an exact integer.
///
/// Fails rather than returning an unsubstantiated bound.
pub fn verify_spectrum(universe: &ChamberUniverse, with_rank: bool) -> Result<SpectralCertificate, Error> {
    let n = half_dim(universe)?;
    let q = universe.field.q as u64;
    let family = chi_family(universe)?;
    for (idx, chi) in family.iter().enumerate() {
        if !verify_smallest_eigenvector(universe, chi)? {
            return Err(Error::Precondition(format!(
                "eigen-equation failed for chi vector #{idx}"
            )));
        }
    }
    let eigenspace_rank = if with_rank {
        let rank = rank_via_gram(&family);
        let expected = eigenspace_dimension_formula(n, q)
            .to_usize()
            .expect("desk-scale rank");
        if rank != expected {
            return Err(Error::Precondition(format!(
                "eigenspace rank {rank} differs from n(q^2n - q)/(q-1) = {expected}"
            )));
        }
        Some(rank)
    } else {
        None
    };

    let lambda = smallest_eigenvalue(n, q);
    let degree = universe.degree();
    let bound = hoffman_bound_value(universe.len() as u64, &degree, lambda);
    let alpha = alpha_formula(n, q);
    if bound != alpha {
        return Err(Error::Precondition(format!(
            "Hoffman bound {bound} differs from z_2n/(q^n + 1) = {alpha}"
        )));
    }
    Ok(SpectralCertificate {
        n,
        q,
        lambda,
        degree,
        eigenvectors_checked: family.len(),
        eigenspace_rank,
        hoffman_bound: bound,
    })
}

/// `N(-λ)/(k-λ)` as an exact integer; panics if the division is inexact
/// (it never is for `Γ_{2n}(q)`).
pub fn hoffman_bound_value(vertices: u64, degree: &BigUint, lambda: i128) -> BigUint {
    let minus_lambda = BigUint::from(lambda.unsigned_abs());
    assert!(lambda.is_negative());
    let num = BigUint::from(vertices) * &minus_lambda;
    let den = degree + &minus_lambda;
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "Hoffman ratio is not integral");
    quot
}

/// `α(Γ_{2n}(q)) = z_{2n}(q) / (q^n + 1)`, exact.
pub fn alpha_formula(n: usize, q: u64) -> BigUint {
    let num = chamber_count(2 * n as u32, q);
    let den = BigUint::from(q).pow(n as u32) + BigUint::one();
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero());
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(q: u64, d: usize) -> ChamberUniverse {
        ChamberUniverse::build_q(q, d, None).unwrap()
    }

    #[test]
    fn chi_branch_values_and_zero_sum() {
        let u = universe(2, 4);
        for i in 1..=2 {
            for p in 0..u.tables[1].len() {
                let chi = chi_vector(&u, i, p).unwrap();
                // Entries only from {q^i, -1, 0}.
                let qi = 2i64.pow(i as u32);
                assert!(chi.values.iter().all(|&v| v == qi || v == -1 || v == 0));
                // Orthogonal to the all-ones vector.
                assert_eq!(chi.mass(), 0, "i={i} p={p}");
            }
        }
        // i=2 branch: P <= C_2 gives q^2 (C_0 = {0} never contains P).
        let chi = chi_vector(&u, 2, 0).unwrap();
        for c in 0..u.len() {
            if u.point_in_part(0, c, 2) {
                assert_eq!(chi.values[c], 4);
            } else {
                assert_eq!(chi.values[c], -1);
            }
        }
    }

    #[test]
    fn chi_eigen_equation_q2_and_q3() {
        for q in [2u64, 3] {
            let u = universe(q, 4);
            for chi in chi_family(&u).unwrap() {
                assert!(verify_smallest_eigenvector(&u, &chi).unwrap());
            }
        }
    }

    #[test]
    fn all_ones_vector_is_not_a_lambda_eigenvector() {
        let u = universe(2, 4);
        let ones = WeightVector::ones(u.len());
        assert!(!verify_smallest_eigenvector(&u, &ones).unwrap());
    }

    #[test]
    fn eigenspace_rank_small() {
        let u = universe(2, 4);
        let family = chi_family(&u).unwrap();
        assert_eq!(family.len(), 30);
        let gram_rank = rank_via_gram(&family);
        let direct_rank = rank_direct(&family);
        assert_eq!(gram_rank, direct_rank);
        assert_eq!(gram_rank, 28);
        assert_eq!(eigenspace_dimension_formula(2, 2).to_usize().unwrap(), 28);
        assert_eq!(eigenspace_dimension_formula(2, 3).to_usize().unwrap(), 78);
        assert_eq!(eigenspace_dimension_formula(2, 4).to_usize().unwrap(), 168);
    }

    #[test]
    fn hoffman_bounds() {
        assert_eq!(alpha_formula(2, 2), BigUint::from(63u32));
        assert_eq!(alpha_formula(2, 3), BigUint::from(208u32));
        assert_eq!(alpha_formula(2, 4), BigUint::from(525u32));
        assert_eq!(alpha_formula(3, 2), BigUint::from(68355u32));
        // Ratio form agrees: 315 * 16 / (64 + 16) = 63.
        assert_eq!(
            hoffman_bound_value(315, &BigUint::from(64u32), -16),
            BigUint::from(63u32)
        );
    }

    #[test]
    fn full_certificate_q2() {
        let u = universe(2, 4);
        let cert = verify_spectrum(&u, true).unwrap();
        assert_eq!(cert.lambda, -16);
        assert_eq!(cert.eigenspace_rank, Some(28));
        assert_eq!(cert.hoffman_bound, BigUint::from(63u32));
        assert_eq!(cert.eigenvectors_checked, 30);
    }

    #[test]
    fn inner_product_basics() {
        let u = universe(2, 4);
        let ones = WeightVector::ones(u.len());
        assert_eq!(inner_product(&ones, &ones).unwrap(), 315);
        let zero = WeightVector::zeros(u.len());
        assert_eq!(inner_product(&ones, &zero).unwrap(), 0);
        let chi = chi_vector(&u, 1, 3).unwrap();
        assert_eq!(inner_product(&ones, &chi).unwrap(), 0);
    }

    #[test]
    fn sparse_dense_roundtrip() {
        let u = universe(2, 4);
        let chi = chi_vector(&u, 1, 0).unwrap();
        let sparse = chi.to_sparse();
        assert_eq!(WeightVector::from_sparse(chi.len(), &sparse), chi);
    }

    #[test]
    fn exact_rank_handles_rank_deficiency() {
        let m = vec![
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)],
        ];
        assert_eq!(exact_integer_rank(m), 2);
        assert_eq!(exact_integer_rank(vec![]), 0);
        assert_eq!(exact_integer_rank(vec![vec![BigInt::zero(); 4]; 3]), 0);
    }
}
