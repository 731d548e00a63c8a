//! Nondegenerate alternating and hermitian forms on `F_q^d`, perps,
//! totally isotropic generators, and the field-extension (regular)
//! spread of `F_q^{2n}`.

use crate::gf::{Elem, FieldCtx};
use crate::projspace::{nullspace, Subspace};
use crate::Error;
use num_bigint::BigUint;
use num_traits::One;
use std::io::Write;

/// Which sesquilinearity the form carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// Bilinear, skew-symmetric with zero diagonal (symplectic).
    Alternating,
    /// Conjugate-symmetric over a field with `q` a square (unitary).
    Hermitian,
}

/// A validated nondegenerate form, given by its Gram matrix.
#[derive(Debug, Clone)]
pub struct FormSpec {
    pub kind: FormKind,
    pub field: FieldCtx,
    pub d: usize,
    pub gram: Vec<Vec<Elem>>,
}

impl FormSpec {
    pub fn new(kind: FormKind, field: FieldCtx, gram: Vec<Vec<Elem>>) -> Result<FormSpec, Error> {
        let d = gram.len();
        if d == 0 || gram.iter().any(|r| r.len() != d) {
            return Err(Error::BadParameter("Gram matrix must be square and nonempty".into()));
        }
        match kind {
            FormKind::Alternating => {
                for i in 0..d {
                    if gram[i][i] != 0 {
                        return Err(Error::FormKindMismatch("alternating form needs zero diagonal"));
                    }
                    for j in 0..d {
                        if gram[i][j] != field.neg(gram[j][i]) {
                            return Err(Error::FormKindMismatch("alternating form must be skew-symmetric"));
                        }
                    }
                }
            }
            FormKind::Hermitian => {
                if !field.has_conjugation() {
                    return Err(Error::NotSquareOrder(field.q));
                }
                for i in 0..d {
                    for j in 0..d {
                        if gram[i][j] != field.conjugate(gram[j][i])? {
                            return Err(Error::FormKindMismatch("hermitian form must be conjugate-symmetric"));
                        }
                    }
                }
            }
        }
        let gram_subspace = Subspace::from_vectors(&field, d, &gram)?;
        if gram_subspace.dim() != d {
            return Err(Error::DegenerateForm);
        }
        Ok(FormSpec { kind, field, d, gram })
    }

    /// The standard symplectic form: hyperbolic `[[0,1],[-1,0]]` blocks
    /// down the diagonal of a `2n x 2n` matrix.
    pub fn standard_alternating(field: FieldCtx, n: usize) -> Result<FormSpec, Error> {
        if n == 0 {
            return Err(Error::BadParameter("n must be positive".into()));
        }
        let d = 2 * n;
        let mut gram = vec![vec![0 as Elem; d]; d];
        for b in 0..n {
            gram[2 * b][2 * b + 1] = 1;
            gram[2 * b + 1][2 * b] = field.neg(1);
        }
        FormSpec::new(FormKind::Alternating, field, gram)
    }

    /// The standard hermitian form with identity Gram matrix:
    /// `B(x, y) = Σ x_i ȳ_i`.
    pub fn standard_hermitian(field: FieldCtx, d: usize) -> Result<FormSpec, Error> {
        if d == 0 {
            return Err(Error::BadParameter("dimension must be positive".into()));
        }
        let mut gram = vec![vec![0 as Elem; d]; d];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 1;
        }
        FormSpec::new(FormKind::Hermitian, field, gram)
    }

    /// `B(x, y)`.
    pub fn evaluate(&self, x: &[Elem], y: &[Elem]) -> Result<Elem, Error> {
        if x.len() != self.d || y.len() != self.d {
            return Err(Error::AmbientMismatch(x.len(), y.len()));
        }
        let f = &self.field;
        let mut acc: Elem = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let yj = match self.kind {
                    FormKind::Alternating => yj,
                    FormKind::Hermitian => f.conjugate(yj)?,
                };
                acc = f.add(acc, f.mul(f.mul(xi, self.gram[i][j]), yj));
            }
        }
        Ok(acc)
    }

    /// `S^⊥ = { v : B(u, v) = 0 for all u ∈ S }`.
    pub fn perp(&self, s: &Subspace) -> Result<Subspace, Error> {
        if s.d != self.d {
            return Err(Error::AmbientMismatch(s.d, self.d));
        }
        let f = &self.field;
        // Constraints on v: (U G) C(v)^T = 0, where C is the identity for
        // the alternating case and entrywise conjugation for the
        // hermitian one.  Conjugation is a field automorphism, so the
        // conjugate of the constraint nullspace is again a subspace.
        let mut constraints = Vec::with_capacity(s.rows.len());
        for u in &s.rows {
            let mut row = vec![0 as Elem; self.d];
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = 0;
                for (i, &ui) in u.iter().enumerate() {
                    acc = f.add(acc, f.mul(ui, self.gram[i][j]));
                }
                *slot = acc;
            }
            constraints.push(row);
        }
        let mut basis = nullspace(f, self.d, &constraints);
        if self.kind == FormKind::Hermitian {
            for v in &mut basis {
                for x in v.iter_mut() {
                    *x = f.conjugate(*x)?;
                }
            }
        }
        Subspace::from_vectors(f, self.d, &basis)
    }

    /// Whether `B` vanishes identically on `S x S`.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> Result<bool, Error> {
        for u in &s.rows {
            for v in &s.rows {
                if self.evaluate(u, v)? != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `g_n(q) = Π_{i=1..n} (q^i + 1)`: number of generators of the
/// symplectic polar space on `F_q^{2n}`.
pub fn symplectic_generator_count(n: usize, q: u64) -> BigUint {
    (1..=n).map(|i| BigUint::from(q).pow(i as u32) + BigUint::one()).product()
}

/// `t_n(q) = Π_{j=1..n} (√q · q^{j-1} + 1)`: number of generators of the
/// hermitian polar space on `F_q^{2n}`, `q` a square.
pub fn hermitian_generator_count(n: usize, q: u64) -> Result<BigUint, Error> {
    let r = (q as f64).sqrt().round() as u64;
    if r * r != q {
        return Err(Error::NotSquareOrder(q as u16));
    }
    Ok((1..=n)
        .map(|j| BigUint::from(r) * BigUint::from(q).pow(j as u32 - 1) + BigUint::one())
        .product())
}

/// All totally isotropic `n`-subspaces of `F_q^{2n}` for the given form,
/// filtered from a precomputed table of `n`-subspaces.
pub fn enumerate_generators(form: &FormSpec, n_subspaces: &[Subspace]) -> Result<Vec<Subspace>, Error> {
    let mut out = Vec::new();
    for s in n_subspaces {
        if form.is_totally_isotropic(s)? {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Symplectic chamber: `C_{2n-i} = C_i^⊥` for `i = 1..n` (so in
/// particular `C_n` is totally isotropic).
pub fn is_symplectic_chamber(form: &FormSpec, parts: &[Subspace]) -> Result<bool, Error> {
    chamber_matches_perp(form, parts, FormKind::Alternating)
}

/// Hermitian chamber: `C_{2n-i} = C_i^⊥` for `i = 1..n`.
pub fn is_hermitian_chamber(form: &FormSpec, parts: &[Subspace]) -> Result<bool, Error> {
    chamber_matches_perp(form, parts, FormKind::Hermitian)
}

fn chamber_matches_perp(form: &FormSpec, parts: &[Subspace], want: FormKind) -> Result<bool, Error> {
    if form.kind != want {
        return Err(Error::FormKindMismatch("form kind does not match the chamber predicate"));
    }
    let d = form.d;
    if parts.len() != d - 1 {
        return Err(Error::DimensionOutOfRange(format!(
            "chamber has {} proper parts, ambient dimension is {d}",
            parts.len()
        )));
    }
    let n = d / 2;
    if d % 2 != 0 {
        return Err(Error::DimensionOutOfRange(format!("ambient dimension {d} is odd")));
    }
    for i in 1..=n {
        // parts[s - 1] has dimension s.
        if parts[d - i - 1] != form.perp(&parts[i - 1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The field-extension (regular) spread of `F_q^{2n}`: the `q^n + 1`
/// pairwise-skew `n`-subspaces `{(x, xA)}` for `A` in the matrix algebra
/// generated by the companion matrix of an irreducible degree-`n`
/// polynomial, together with `{(0, y)}`.
pub fn field_extension_spread(field: &FieldCtx, n: usize) -> Result<Vec<Subspace>, Error> {
    if n == 0 {
        return Err(Error::BadParameter("n must be positive".into()));
    }
    let d = 2 * n;
    let companion = companion_of_smallest_irreducible(field, n)?;
    // Algebra elements: a_0 I + a_1 M + ... + a_{n-1} M^{n-1}.
    let mut powers = Vec::with_capacity(n);
    let mut cur = identity(n);
    for _ in 0..n {
        powers.push(cur.clone());
        cur = mat_mul(field, &cur, &companion);
    }
    let mut members = Vec::new();
    let mut coeffs = vec![0 as Elem; n];
    loop {
        let mut a = vec![vec![0 as Elem; n]; n];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = field.add(a[i][j], field.mul(c, powers[k][i][j]));
                }
            }
        }
        let mut basis = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![0 as Elem; d];
            row[i] = 1;
            row[n..].copy_from_slice(&a[i]);
            basis.push(row);
        }
        members.push(Subspace::from_vectors(field, d, &basis)?);
        // Odometer over coefficient vectors.
        let mut k = 0;
        while k < n {
            let next = coeffs[k] as usize + 1;
            if next < field.q as usize {
                coeffs[k] = next as Elem;
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    let mut infinity = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0 as Elem; d];
        row[n + i] = 1;
        infinity.push(row);
    }
    members.push(Subspace::from_vectors(field, d, &infinity)?);
    members.sort();
    Ok(members)
}

/// Constant point-coverage count of a family of subspaces of `F_q^d`:
/// returns `t` if every projective point lies in exactly `t` members.
pub fn spread_fold(field: &FieldCtx, d: usize, members: &[Subspace]) -> Result<u64, Error> {
    let points = crate::projspace::enumerate_points(field, d);
    let mut fold = None;
    for p in &points {
        let v = &p.rows[0];
        let t = members.iter().filter(|m| m.contains_vector(field, v)).count() as u64;
        match fold {
            None => fold = Some(t),
            Some(prev) if prev != t => {
                return Err(Error::Precondition(format!(
                    "point coverage is not constant: saw both {prev} and {t}"
                )))
            }
            _ => {}
        }
    }
    fold.ok_or_else(|| Error::BadParameter("empty point set".into()))
}

/// Write each member as a basis matrix in row-major text form.
pub fn write_members<W: Write>(members: &[Subspace], mut sink: W) -> std::io::Result<()> {
    for (i, m) in members.iter().enumerate() {
        writeln!(sink, "# member {i} (dim {})", m.dim())?;
        for row in &m.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(sink, "{}", cells.join(" "))?;
        }
    }
    Ok(())
}

fn identity(n: usize) -> Vec<Vec<Elem>> {
    let mut m = vec![vec![0 as Elem; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn mat_mul(field: &FieldCtx, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = a.len();
    let mut out = vec![vec![0 as Elem; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = field.add(out[i][j], field.mul(a[i][k], b[k][j]));
            }
        }
    }
    out
}

/// Companion matrix of the lexicographically smallest monic irreducible
/// degree-`n` polynomial over the field (degree 1: `x` itself would be
/// reducible-free but has a root, so the smallest root-free choice is
/// used; for `n = 1` any monic linear polynomial works and `x` is taken).
fn companion_of_smallest_irreducible(field: &FieldCtx, n: usize) -> Result<Vec<Vec<Elem>>, Error> {
    let coeffs = smallest_irreducible(field, n)?;
    let mut m = vec![vec![0 as Elem; n]; n];
    for i in 0..n - 1 {
        m[i][i + 1] = 1;
    }
    for j in 0..n {
        m[n - 1][j] = field.neg(coeffs[j]);
    }
    Ok(m)
}

/// Coefficients `c_0..c_{n-1}` of the smallest monic irreducible
/// `x^n + c_{n-1} x^{n-1} + ... + c_0` over the field.
fn smallest_irreducible(field: &FieldCtx, n: usize) -> Result<Vec<Elem>, Error> {
    if n == 1 {
        return Ok(vec![0]);
    }
    let q = field.q as usize;
    let mut coeffs = vec![0 as Elem; n];
    loop {
        if is_irreducible(field, &coeffs) {
            return Ok(coeffs);
        }
        let mut k = 0;
        while k < n {
            let next = coeffs[k] as usize + 1;
            if next < q {
                coeffs[k] = next as Elem;
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == n {
            return Err(Error::Precondition(format!(
                "no irreducible monic polynomial of degree {n} found"
            )));
        }
    }
}

/// Irreducibility of a monic polynomial over `F_q` by trial division by
/// all monic polynomials of degree up to `n/2` (fine at desk scale).
fn is_irreducible(field: &FieldCtx, coeffs: &[Elem]) -> bool {
    let n = coeffs.len();
    if coeffs[0] == 0 {
        return false; // divisible by x
    }
    // Root test handles all degree-1 factors.
    for a in field.elements() {
        let mut val: Elem = 1; // leading monic coefficient
        for i in (0..n).rev() {
            val = field.add(field.mul(val, a), coeffs[i]);
        }
        if val == 0 {
            return false;
        }
    }
    if n <= 3 {
        return true;
    }
    // Trial division by monic polynomials of degree 2..=n/2.
    for deg in 2..=n / 2 {
        let q = field.q as usize;
        let mut div = vec![0 as Elem; deg];
        loop {
            if divides(field, coeffs, &div) {
                return false;
            }
            let mut k = 0;
            while k < deg {
                let next = div[k] as usize + 1;
                if next < q {
                    div[k] = next as Elem;
                    break;
                }
                div[k] = 0;
                k += 1;
            }
            if k == deg {
                break;
            }
        }
    }
    true
}

/// Whether the monic polynomial with low coefficients `div` divides the
/// monic polynomial with low coefficients `coeffs`.
fn divides(field: &FieldCtx, coeffs: &[Elem], div: &[Elem]) -> bool {
    let n = coeffs.len();
    let m = div.len();
    let mut rem: Vec<Elem> = coeffs.to_vec();
    rem.push(1); // leading coefficient
    for lead in (m..=n).rev() {
        let c = rem[lead];
        if c == 0 {
            continue;
        }
        rem[lead] = 0;
        for (j, &dj) in div.iter().enumerate() {
            let idx = lead - m + j;
            rem[idx] = field.sub(rem[idx], field.mul(c, dj));
        }
    }
    rem.iter().all(|&x| x == 0)
}
