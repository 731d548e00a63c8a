//! The four antidesign families on the chambers of `F_q^{2n}`: weight
//! vectors orthogonal to the smallest eigenspace of `Γ_{2n}(q)`, whose
//! inner product with any maximum coclique is therefore a constant.

use crate::chambers::ChamberUniverse;
use crate::forms::{FormKind, FormSpec};
use crate::projspace::{chamber_count, gaussian, Subspace};
use crate::spectral::{chi_vector, half_dim, inner_product, WeightVector};
use crate::Error;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::io::Write;

/// Which construction a weight vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntidesignFamily {
    /// Indicator of chambers whose middle part lies in a `t`-fold spread.
    Spread { t: u64 },
    /// Indicator of symplectic chambers of an alternating form.
    Symplectic,
    /// The `-k / 1 / 0` vector of a unitary form, `k = z_n(q) - 1`.
    Unitary,
    /// The `q^{s(2n-s)-n} / 1 / 0` vector of a fixed `s`-subspace.
    Subspace { s: usize },
}

/// `v(C) = 1` iff the middle part `C_n` is a member of the spread.
pub fn spread_antidesign(universe: &ChamberUniverse, members: &[Subspace]) -> Result<WeightVector, Error> {
    let n = half_dim(universe)?;
    let mut member_idx = vec![false; universe.tables[n].len()];
    for m in members {
        if m.dim() != n {
            return Err(Error::DimensionOutOfRange(format!(
                "spread member has dimension {}, expected {n}",
                m.dim()
            )));
        }
        let idx = universe
            .subspace_index(m)
            .ok_or(Error::UniverseMismatch)?;
        member_idx[idx as usize] = true;
    }
    let values = (0..universe.len())
        .map(|c| i64::from(member_idx[universe.parts_of(c)[n - 1] as usize]))
        .collect();
    Ok(WeightVector { values })
}

/// Index maps `tables[s] -> tables[d-s]` sending a subspace to its perp.
fn perp_index_maps(universe: &ChamberUniverse, form: &FormSpec) -> Result<Vec<Vec<u32>>, Error> {
    let d = universe.d;
    let mut maps = Vec::with_capacity(d + 1);
    for s in 0..=d {
        let mut map = Vec::with_capacity(universe.tables[s].len());
        for sub in &universe.tables[s] {
            let perp = form.perp(sub)?;
            map.push(universe.subspace_index(&perp).ok_or(Error::UniverseMismatch)?);
        }
        maps.push(map);
    }
    Ok(maps)
}

/// Whether chamber `c` satisfies `C_{d-i} = C_i^⊥` for `i = 1..n`.
fn chamber_matches_perp_idx(universe: &ChamberUniverse, maps: &[Vec<u32>], c: usize, upto: usize) -> bool {
    let d = universe.d;
    let parts = universe.parts_of(c);
    (1..=upto).all(|i| parts[d - i - 1] == maps[i][parts[i - 1] as usize])
}

/// `v(C) = 1` iff `C` is a symplectic chamber of the alternating form.
pub fn symplectic_antidesign(universe: &ChamberUniverse, form: &FormSpec) -> Result<WeightVector, Error> {
    if form.kind != FormKind::Alternating {
        return Err(Error::FormKindMismatch("expected an alternating form"));
    }
    let n = half_dim(universe)?;
    if form.d != universe.d {
        return Err(Error::AmbientMismatch(form.d, universe.d));
    }
    let maps = perp_index_maps(universe, form)?;
    let values = (0..universe.len())
        .map(|c| i64::from(chamber_matches_perp_idx(universe, &maps, c, n)))
        .collect();
    Ok(WeightVector { values })
}

/// The unitary weight vector: `-k` on hermitian chambers, `1` on
/// chambers whose middle part is a generator (`C_n = C_n^⊥`) without the
/// chamber being hermitian, `0` elsewhere; `k = z_n(q) - 1`.
pub fn unitary_antidesign(universe: &ChamberUniverse, form: &FormSpec) -> Result<WeightVector, Error> {
    if form.kind != FormKind::Hermitian {
        return Err(Error::FormKindMismatch("expected a hermitian form"));
    }
    let n = half_dim(universe)?;
    if form.d != universe.d {
        return Err(Error::AmbientMismatch(form.d, universe.d));
    }
    let q = universe.field.q as u64;
    let k = chamber_count(n as u32, q)
        .to_i64()
        .expect("desk-scale chamber count")
        - 1;
    let maps = perp_index_maps(universe, form)?;
    let values = (0..universe.len())
        .map(|c| {
            let parts = universe.parts_of(c);
            let mid = parts[n - 1] as usize;
            if maps[n][mid] != mid as u32 {
                0 // C_n is not a generator
            } else if chamber_matches_perp_idx(universe, &maps, c, n) {
                -k
            } else {
                1
            }
        })
        .collect();
    Ok(WeightVector { values })
}

/// The subspace weight vector of a fixed `s`-subspace `S`, `1 <= s <= n`:
/// `q^{s(2n-s)-n}` when `C_s = S`, `1` when `S ∩ C_{2n-s} = {0}`,
/// `0` otherwise.
pub fn subspace_antidesign(universe: &ChamberUniverse, s_sub: &Subspace) -> Result<WeightVector, Error> {
    let n = half_dim(universe)?;
    let d = universe.d;
    let s = s_sub.dim();
    if s < 1 || s > n {
        return Err(Error::DimensionOutOfRange(format!("s = {s} not in [1, {n}]")));
    }
    let s_idx = universe.subspace_index(s_sub).ok_or(Error::UniverseMismatch)?;
    let heavy = (universe.field.q as i64).pow((s * (d - s) - n) as u32);
    let field = &universe.field;
    let skew: Vec<bool> = universe.tables[d - s]
        .iter()
        .map(|u| s_sub.meets_trivially(field, u).unwrap())
        .collect();
    let values = (0..universe.len())
        .map(|c| {
            let parts = universe.parts_of(c);
            if parts[s - 1] == s_idx {
                heavy
            } else {
                i64::from(skew[parts[d - s - 1] as usize])
            }
        })
        .collect();
    Ok(WeightVector { values })
}

/// Exhaustive orthogonality check: `⟨v, χ^i_P⟩ = 0` for every `i` and
/// every point `P`.
pub fn verify_antidesign(universe: &ChamberUniverse, v: &WeightVector) -> Result<bool, Error> {
    let n = half_dim(universe)?;
    for i in 1..=n {
        for p in 0..universe.tables[1].len() {
            let chi = chi_vector(universe, i, p)?;
            if inner_product(v, &chi)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `1ᵀ v` of each family in closed form.
pub fn mass_formula(family: AntidesignFamily, n: usize, q: u64) -> BigUint {
    let zn = chamber_count(n as u32, q);
    let qn1 = BigUint::from(q).pow(n as u32) + BigUint::one();
    match family {
        AntidesignFamily::Spread { t } => BigUint::from(t) * qn1 * &zn * &zn,
        AntidesignFamily::Symplectic => {
            zn * crate::forms::symplectic_generator_count(n, q)
        }
        AntidesignFamily::Unitary => BigUint::zero(),
        AntidesignFamily::Subspace { s } => {
            let d = 2 * n;
            BigUint::from(q).pow((s * (d - s) - n) as u32)
                * qn1
                * chamber_count(s as u32, q)
                * chamber_count((d - s) as u32, q)
        }
    }
}

/// `vᵀ 1_F` for a maximum coclique `F`: `1ᵀ v / (q^n + 1)` in closed
/// form for each family.
pub fn expected_intersection(family: AntidesignFamily, n: usize, q: u64) -> BigUint {
    let zn = chamber_count(n as u32, q);
    match family {
        AntidesignFamily::Spread { t } => BigUint::from(t) * &zn * &zn,
        AntidesignFamily::Symplectic => {
            zn * crate::forms::symplectic_generator_count(n - 1, q)
        }
        AntidesignFamily::Unitary => BigUint::zero(),
        AntidesignFamily::Subspace { s } => {
            let d = 2 * n;
            BigUint::from(q).pow((s * (d - s) - n) as u32)
                * chamber_count(s as u32, q)
                * chamber_count((d - s) as u32, q)
        }
    }
}

/// The two sides of the orthogonality identity for a spread vector and
/// `χ^i_P` through a covered point: `A` chambers contribute `q^i`, `B`
/// contribute `-1`, and `A q^i = B`.
pub fn spread_chi_split_counts(n: usize, q: u64, t: u64, i: usize) -> (BigUint, BigUint) {
    let zn = chamber_count(n as u32, q);
    let zi = chamber_count(i as u32, q);
    let zni = chamber_count((n - i) as u32, q);
    let common = BigUint::from(t) * zn * zi * zni;
    let a = &common * gaussian((n - 1) as i64, (n - i) as i64, q) * BigUint::from(q).pow((n - i) as u32);
    let b = common * BigUint::from(q).pow(n as u32) * gaussian((n - 1) as i64, (i - 1) as i64, q);
    (a, b)
}

/// One verified antidesign, ready for reporting.
#[derive(Debug, Clone)]
pub struct AntidesignCheck {
    pub name: String,
    pub family: AntidesignFamily,
    pub orthogonal: bool,
    pub mass: i128,
    pub mass_formula: BigUint,
    pub expected_intersection: BigUint,
}

/// Build, verify, and summarize one family on a universe.
pub fn check_antidesign(
    universe: &ChamberUniverse,
    name: &str,
    family: AntidesignFamily,
    v: &WeightVector,
) -> Result<AntidesignCheck, Error> {
    let n = half_dim(universe)?;
    let q = universe.field.q as u64;
    Ok(AntidesignCheck {
        name: name.to_string(),
        family,
        orthogonal: verify_antidesign(universe, v)?,
        mass: v.mass(),
        mass_formula: mass_formula(family, n, q),
        expected_intersection: expected_intersection(family, n, q),
    })
}

/// CSV export: one line per check.
pub fn write_checks_csv<W: Write>(checks: &[AntidesignCheck], mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "name,orthogonal,mass,mass_formula,expected_intersection")?;
    for c in checks {
        writeln!(
            sink,
            "{},{},{},{},{}",
            c.name, c.orthogonal, c.mass, c.mass_formula, c.expected_intersection
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{enumerate_generators, field_extension_spread};
    use crate::projspace::enumerate_subspaces;

    fn universe(q: u64, d: usize) -> ChamberUniverse {
        ChamberUniverse::build_q(q, d, None).unwrap()
    }

    #[test]
    fn regular_spread_vector_q2_and_q3() {
        for (q, mass) in [(2u64, 45i128), (3, 160)] {
            let u = universe(q, 4);
            let spread = field_extension_spread(&u.field, 2).unwrap();
            let v = spread_antidesign(&u, &spread).unwrap();
            assert_eq!(v.mass(), mass);
            assert_eq!(
                BigUint::from(v.mass() as u64),
                mass_formula(AntidesignFamily::Spread { t: 1 }, 2, q)
            );
            assert!(verify_antidesign(&u, &v).unwrap());
        }
    }

    #[test]
    fn symplectic_generators_as_threefold_spread_q2() {
        // The 15 symplectic generators cover every point q + 1 = 3 times,
        // giving a 3-fold spread with mass 135.
        let u = universe(2, 4);
        let form = FormSpec::standard_alternating(u.field.clone(), 2).unwrap();
        let gens = enumerate_generators(&form, &u.tables[2]).unwrap();
        assert_eq!(crate::forms::spread_fold(&u.field, 4, &gens).unwrap(), 3);
        let v = spread_antidesign(&u, &gens).unwrap();
        assert_eq!(v.mass(), 135);
        assert_eq!(
            BigUint::from(135u32),
            mass_formula(AntidesignFamily::Spread { t: 3 }, 2, 2)
        );
        assert!(verify_antidesign(&u, &v).unwrap());
    }

    #[test]
    fn symplectic_vector_q2_and_q3() {
        for (q, mass) in [(2u64, 45i128), (3, 160)] {
            let u = universe(q, 4);
            let form = FormSpec::standard_alternating(u.field.clone(), 2).unwrap();
            let v = symplectic_antidesign(&u, &form).unwrap();
            assert_eq!(v.mass(), mass);
            assert_eq!(
                BigUint::from(v.mass() as u64),
                mass_formula(AntidesignFamily::Symplectic, 2, q)
            );
            assert!(verify_antidesign(&u, &v).unwrap());
        }
    }

    #[test]
    fn unitary_vector_q4() {
        let u = universe(4, 4);
        let form = FormSpec::standard_hermitian(u.field.clone(), 4).unwrap();
        let v = unitary_antidesign(&u, &form).unwrap();
        // k = z_2(4) - 1 = 4: values in {-4, 1, 0}.
        assert!(v.values.iter().all(|&x| x == -4 || x == 1 || x == 0));
        let hermitian = v.values.iter().filter(|&&x| x == -4).count();
        let generator_only = v.values.iter().filter(|&&x| x == 1).count();
        assert_eq!(hermitian * 4, generator_only);
        assert!(hermitian > 0);
        assert_eq!(v.mass(), 0);
        assert!(verify_antidesign(&u, &v).unwrap());
    }

    #[test]
    fn subspace_vectors_q2() {
        let u = universe(2, 4);
        for (s, mass, expected) in [(1usize, 210i128, 42u32), (2, 180, 36)] {
            let sub = enumerate_subspaces(&u.field, 4, s).into_iter().next().unwrap();
            let v = subspace_antidesign(&u, &sub).unwrap();
            assert_eq!(v.mass(), mass, "s = {s}");
            assert_eq!(
                BigUint::from(v.mass() as u64),
                mass_formula(AntidesignFamily::Subspace { s }, 2, 2)
            );
            assert_eq!(
                expected_intersection(AntidesignFamily::Subspace { s }, 2, 2),
                BigUint::from(expected)
            );
            assert!(verify_antidesign(&u, &v).unwrap());
        }
    }

    #[test]
    fn expected_intersections_closed_forms() {
        assert_eq!(
            expected_intersection(AntidesignFamily::Spread { t: 1 }, 2, 2),
            BigUint::from(9u32)
        );
        assert_eq!(
            expected_intersection(AntidesignFamily::Symplectic, 2, 2),
            BigUint::from(9u32)
        );
        assert_eq!(
            expected_intersection(AntidesignFamily::Symplectic, 2, 3),
            BigUint::from(16u32)
        );
        assert_eq!(
            expected_intersection(AntidesignFamily::Unitary, 2, 4),
            BigUint::zero()
        );
        // Mass = (q^n + 1) * expected intersection for every family with
        // nonzero mass.
        for (fam, q) in [
            (AntidesignFamily::Spread { t: 1 }, 2u64),
            (AntidesignFamily::Spread { t: 3 }, 2),
            (AntidesignFamily::Symplectic, 3),
            (AntidesignFamily::Subspace { s: 1 }, 2),
            (AntidesignFamily::Subspace { s: 2 }, 2),
        ] {
            let qn1 = BigUint::from(q * q + 1);
            assert_eq!(mass_formula(fam, 2, q), qn1 * expected_intersection(fam, 2, q));
        }
    }

    #[test]
    fn spread_split_counts_balance() {
        for q in [2u64, 3, 4] {
            for n in [2usize, 3] {
                for i in 1..=n {
                    let (a, b) = spread_chi_split_counts(n, q, 1, i);
                    assert_eq!(&a * BigUint::from(q).pow(i as u32), b);
                }
            }
        }
        // Direct enumeration oracle at q = 2, n = 2, t = 1, i = 1:
        // count chambers with v = 1 and chi in each class, per point.
        let u = universe(2, 4);
        let spread = field_extension_spread(&u.field, 2).unwrap();
        let v = spread_antidesign(&u, &spread).unwrap();
        let (a, b) = spread_chi_split_counts(2, 2, 1, 1);
        for p in 0..u.tables[1].len() {
            let chi = chi_vector(&u, 1, p).unwrap();
            let pos = (0..u.len())
                .filter(|&c| v.values[c] == 1 && chi.values[c] == 2)
                .count();
            let neg = (0..u.len())
                .filter(|&c| v.values[c] == 1 && chi.values[c] == -1)
                .count();
            assert_eq!(BigUint::from(pos), a);
            assert_eq!(BigUint::from(neg), b);
        }
    }

    #[test]
    fn zero_vector_is_an_antidesign_and_singletons_are_not() {
        let u = universe(2, 4);
        let zero = WeightVector::zeros(u.len());
        assert!(verify_antidesign(&u, &zero).unwrap());
        let mut single = WeightVector::zeros(u.len());
        single.values[0] = 1;
        assert!(!verify_antidesign(&u, &single).unwrap());
    }

    #[test]
    fn check_and_csv_roundtrip() {
        let u = universe(2, 4);
        let spread = field_extension_spread(&u.field, 2).unwrap();
        let v = spread_antidesign(&u, &spread).unwrap();
        let check = check_antidesign(&u, "spread", AntidesignFamily::Spread { t: 1 }, &v).unwrap();
        assert!(check.orthogonal);
        assert_eq!(check.mass, 45);
        let mut buf = Vec::new();
        write_checks_csv(&[check], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("spread,true,45,45,9"));
    }

    #[test]
    fn family_mismatch_errors() {
        let u = universe(2, 4);
        let alt = FormSpec::standard_alternating(u.field.clone(), 2).unwrap();
        assert!(unitary_antidesign(&u, &alt).is_err());
        let pt = enumerate_subspaces(&u.field, 4, 3).into_iter().next().unwrap();
        assert!(subspace_antidesign(&u, &pt).is_err());
    }
}
