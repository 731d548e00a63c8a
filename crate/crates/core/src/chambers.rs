//! Chambers (full flags) of `F_q^d`, oppositeness, the chamber universe
//! underlying the Kneser graph `Γ_d(q)`, and the counting verifiers.

use crate::bits::BitMatrix;
use crate::gf::FieldCtx;
use crate::projspace::{chamber_count, enumerate_subspaces, Subspace};
use crate::Error;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::io::Write;

/// A flag: pairwise nested proper nontrivial subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub d: usize,
    /// Members sorted by dimension, strictly nested.
    pub subspaces: Vec<Subspace>,
}

impl Flag {
    pub fn new(field: &FieldCtx, d: usize, mut subspaces: Vec<Subspace>) -> Result<Flag, Error> {
        if subspaces.is_empty() {
            return Err(Error::BadParameter("flag must be nonempty".into()));
        }
        subspaces.sort_by_key(|s| s.dim());
        for s in &subspaces {
            if s.d != d {
                return Err(Error::AmbientMismatch(s.d, d));
            }
            if s.dim() == 0 || s.dim() == d {
                return Err(Error::DimensionOutOfRange(format!(
                    "flag member of dimension {} in ambient {}",
                    s.dim(),
                    d
                )));
            }
        }
        for w in subspaces.windows(2) {
            if w[0].dim() == w[1].dim() || !w[1].contains(field, &w[0]) {
                return Err(Error::BadParameter("flag members must be totally nested".into()));
            }
        }
        Ok(Flag { d, subspaces })
    }

    /// The sorted list of member dimensions.
    pub fn flag_type(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.dim()).collect()
    }
}

/// A chamber of `F_q^d` represented by explicit subspaces
/// `C_1 < C_2 < ... < C_{d-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub d: usize,
    pub parts: Vec<Subspace>,
}

/// The indexed set of all chambers of `F_q^d` — the vertex set of `Γ_d(q)`.
///
/// Chambers are stored as index tuples into per-dimension subspace tables;
/// indices are stable for fixed `(q, d)`.  Immutable after build.
pub struct ChamberUniverse {
    pub field: FieldCtx,
    pub d: usize,
    /// `tables[s]` = all `s`-subspaces in lexicographic canonical order.
    pub tables: Vec<Vec<Subspace>>,
    /// Flat chamber storage: `d - 1` entries per chamber,
    /// `parts[c * (d-1) + i]` indexing into `tables[i + 1]`.
    parts: Vec<u32>,
    /// `skew[i]` for `1 <= i <= d-1`: bit `(a, b)` set iff
    /// `tables[i][a]` meets `tables[d-i][b]` trivially.
    skew: Vec<BitMatrix>,
    /// `point_in[s]`: bit `(p, a)` set iff point `p` lies in `tables[s][a]`.
    point_in: Vec<BitMatrix>,
    /// Dense adjacency of `Γ_d(q)`, cached when the vertex count fits.
    adjacency: Option<BitMatrix>,
}

pub const DEFAULT_CAP: u64 = 10_000_000;

/// Vertex counts up to this build a cached adjacency matrix.
pub const ADJACENCY_CACHE_LIMIT: usize = 1 << 14;

impl ChamberUniverse {
    /// Enumerate every chamber of `F_q^d`.  Refuses to build when
    /// `z_d(q)` exceeds `cap` (default [`DEFAULT_CAP`]).
    pub fn build(field: FieldCtx, d: usize, cap: Option<u64>) -> Result<ChamberUniverse, Error> {
        assert!(d >= 1);
        let cap = cap.unwrap_or(DEFAULT_CAP);
        let expected = chamber_count(d as u32, field.q as u64);
        match expected.to_u64() {
            Some(n) if n <= cap => n,
            _ => {
                return Err(Error::CapExceeded {
                    got: expected.to_u64().unwrap_or(u64::MAX),
                    cap,
                })
            }
        };

        let mut tables: Vec<Vec<Subspace>> = Vec::with_capacity(d + 1);
        for s in 0..=d {
            tables.push(enumerate_subspaces(&field, d, s));
        }

        // Upward incidence between consecutive dimensions: for each
        // s-subspace, the sorted indices of (s+1)-subspaces containing it.
        let mut ups: Vec<Vec<Vec<u32>>> = Vec::with_capacity(d);
        for s in 0..d {
            let mut up = vec![Vec::new(); tables[s].len()];
            for (bi, b) in tables[s + 1].iter().enumerate() {
                for a in subspaces_within(&field, b, s) {
                    let ai = lookup(&tables[s], &a).expect("canonical subspace in table");
                    up[ai as usize].push(bi as u32);
                }
            }
            for list in &mut up {
                list.sort_unstable();
            }
            ups.push(up);
        }

        // Depth-first chain enumeration; lexicographic on index tuples.
        let mut parts: Vec<u32> = Vec::new();
        if d == 1 {
            // The only chamber of F_q^1 is the empty flag.
        } else {
            let mut stack: Vec<u32> = Vec::with_capacity(d - 1);
            fn dfs(ups: &[Vec<Vec<u32>>], d: usize, s: usize, stack: &mut Vec<u32>, out: &mut Vec<u32>) {
                if s == d {
                    out.extend_from_slice(stack);
                    return;
                }
                let candidates: &[u32] = if s == 1 {
                    // all 1-subspaces; ups[0][zero subspace] lists them
                    &ups[0][0]
                } else {
                    &ups[s - 1][*stack.last().unwrap() as usize]
                };
                for &c in candidates {
                    stack.push(c);
                    dfs(ups, d, s + 1, stack, out);
                    stack.pop();
                }
            }
            dfs(&ups, d, 1, &mut stack, &mut parts);
        }

        let stride = d.saturating_sub(1).max(1);
        let n = if d == 1 { 1 } else { parts.len() / (d - 1) };
        debug_assert_eq!(BigUint::from(n), expected);
        let _ = stride;

        // Skew tables for complementary dimension pairs.
        let mut skew: Vec<BitMatrix> = Vec::with_capacity(d);
        skew.push(BitMatrix::new(0, 0)); // placeholder for i = 0
        for i in 1..d {
            if i > d - i {
                skew.push(skew[d - i].transpose());
                continue;
            }
            let (lo, hi) = (&tables[i], &tables[d - i]);
            let mut m = BitMatrix::new(lo.len(), hi.len());
            let fieldref = &field;
            m.fill_rows_parallel(|a, row| {
                for (b, sub) in hi.iter().enumerate() {
                    if lo[a].meets_trivially(fieldref, sub).unwrap() {
                        row[b / 64] |= 1 << (b % 64);
                    }
                }
            });
            skew.push(m);
        }

        // Point-containment tables.
        let points = &tables[1.min(d)];
        let mut point_in: Vec<BitMatrix> = Vec::with_capacity(d + 1);
        for s in 0..=d {
            let mut m = BitMatrix::new(points.len(), tables[s].len());
            for (p, point) in points.iter().enumerate() {
                for (a, sub) in tables[s].iter().enumerate() {
                    if sub.contains_vector(&field, &point.rows[0]) {
                        m.set(p, a, true);
                    }
                }
            }
            point_in.push(m);
        }

        let mut universe = ChamberUniverse { field, d, tables, parts, skew, point_in, adjacency: None };
        if universe.len() <= ADJACENCY_CACHE_LIMIT {
            universe.cache_adjacency();
        }
        Ok(universe)
    }

    pub fn build_q(q: u64, d: usize, cap: Option<u64>) -> Result<ChamberUniverse, Error> {
        ChamberUniverse::build(field_of_order(q)?, d, cap)
    }

    /// Number of chambers, `z_d(q)`.
    pub fn len(&self) -> usize {
        if self.d == 1 {
            1
        } else {
            self.parts.len() / (self.d - 1)
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index tuple of chamber `c`; entry `i` indexes `tables[i + 1]`.
    #[inline]
    pub fn parts_of(&self, c: usize) -> &[u32] {
        if self.d == 1 {
            &[]
        } else {
            &self.parts[c * (self.d - 1)..(c + 1) * (self.d - 1)]
        }
    }

    /// Part of dimension `s` (with `C_0 = {0}` and `C_d` the full space).
    pub fn part(&self, c: usize, s: usize) -> &Subspace {
        if s == 0 {
            &self.tables[0][0]
        } else if s == self.d {
            &self.tables[self.d][0]
        } else {
            &self.tables[s][self.parts_of(c)[s - 1] as usize]
        }
    }

    /// Materialize chamber `c` as explicit subspaces.
    pub fn chamber(&self, c: usize) -> Chamber {
        Chamber {
            d: self.d,
            parts: (1..self.d).map(|s| self.part(c, s).clone()).collect(),
        }
    }

    /// Index of a chamber given by its parts-index tuple (binary search;
    /// chambers are generated in lexicographic tuple order).
    pub fn lookup_tuple(&self, tuple: &[u32]) -> Option<usize> {
        if self.d == 1 {
            return if tuple.is_empty() { Some(0) } else { None };
        }
        let stride = self.d - 1;
        if tuple.len() != stride {
            return None;
        }
        let n = self.len();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.parts_of(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Index of a chamber given explicitly.
    pub fn lookup_chamber(&self, ch: &Chamber) -> Option<usize> {
        if ch.d != self.d {
            return None;
        }
        let mut tuple = Vec::with_capacity(self.d.saturating_sub(1));
        for (s, part) in ch.parts.iter().enumerate() {
            tuple.push(lookup(&self.tables[s + 1], part)?);
        }
        self.lookup_tuple(&tuple)
    }

    /// Index of a subspace in its dimension table.
    pub fn subspace_index(&self, sub: &Subspace) -> Option<u32> {
        lookup(&self.tables[sub.dim()], sub)
    }

    /// Oppositeness: `C_i ∩ D_{d-i} = {0}` for all `i`.  Vacuously true
    /// for `d = 1`.
    #[inline]
    pub fn is_opposite(&self, c: usize, e: usize) -> bool {
        let (pc, pe) = (self.parts_of(c), self.parts_of(e));
        (1..self.d).all(|i| self.skew[i].get(pc[i - 1] as usize, pe[self.d - i - 1] as usize))
    }

    /// Whether point index `p` (into `tables[1]`) lies in `C_s`.
    #[inline]
    pub fn point_in_part(&self, p: usize, c: usize, s: usize) -> bool {
        if s == 0 {
            false
        } else if s >= self.d {
            true
        } else {
            self.point_in[s].get(p, self.parts_of(c)[s - 1] as usize)
        }
    }

    /// Whether point index `p` lies in subspace `a` of dimension `s`.
    #[inline]
    pub fn point_in_subspace(&self, p: usize, s: usize, a: usize) -> bool {
        self.point_in[s].get(p, a)
    }

    fn cache_adjacency(&mut self) {
        let n = self.len();
        let mut adj = BitMatrix::new(n, n);
        let this = &*self;
        adj.fill_rows_parallel(|c, row| {
            for e in 0..n {
                if this.is_opposite(c, e) {
                    row[e / 64] |= 1 << (e % 64);
                }
            }
        });
        self.adjacency = Some(adj);
    }

    pub fn adjacency(&self) -> Option<&BitMatrix> {
        self.adjacency.as_ref()
    }

    /// Degree of `Γ_d(q)` by brute force over the universe.
    pub fn count_opposite(&self, c: usize) -> u64 {
        match &self.adjacency {
            Some(adj) => adj.row(c).iter().map(|w| w.count_ones() as u64).sum(),
            None => (0..self.len())
                .into_par_iter()
                .filter(|&e| self.is_opposite(c, e))
                .count() as u64,
        }
    }

    /// Closed form of the degree: `q^{d(d-1)/2}`.
    pub fn degree(&self) -> BigUint {
        BigUint::from(self.field.q).pow((self.d * (self.d - 1) / 2) as u32)
    }

    /// Chambers containing `S` and opposite to chamber `c`; requires
    /// `S ∩ C_{d-s} = {0}`.  Returns the brute-force count, which per the
    /// closed form equals `q^{binom(s,2) + binom(d-s,2)}`.
    pub fn count_opposite_through(&self, c: usize, s_sub: &Subspace) -> Result<u64, Error> {
        let s = s_sub.dim();
        if s == 0 || s >= self.d {
            return Err(Error::DimensionOutOfRange(format!("subspace dimension {s}")));
        }
        if !self
            .part(c, self.d - s)
            .meets_trivially(&self.field, s_sub)?
        {
            return Err(Error::Precondition(
                "S must meet C_{d-s} trivially".into(),
            ));
        }
        let si = self.subspace_index(s_sub).ok_or(Error::UniverseMismatch)?;
        Ok((0..self.len())
            .into_par_iter()
            .filter(|&e| self.parts_of(e)[s - 1] == si && self.is_opposite(c, e))
            .count() as u64)
    }

    /// Closed form for [`Self::count_opposite_through`].
    pub fn opposite_through_formula(&self, s: usize) -> BigUint {
        let binom = |m: usize| m * m.saturating_sub(1) / 2;
        BigUint::from(self.field.q).pow((binom(s) + binom(self.d - s)) as u32)
    }

    /// Number of chambers containing every member of the flag, brute force.
    pub fn count_extensions(&self, flag: &Flag) -> u64 {
        let mut wanted: Vec<(usize, u32)> = Vec::new();
        for sub in &flag.subspaces {
            let idx = self.subspace_index(sub).expect("flag member in universe");
            wanted.push((sub.dim(), idx));
        }
        (0..self.len())
            .into_par_iter()
            .filter(|&c| wanted.iter().all(|&(s, idx)| self.parts_of(c)[s - 1] == idx))
            .count() as u64
    }

    /// Closed form for flag extensions:
    /// `z_{t_1} * z_{d - t_f} * prod_{i>=2} z_{t_i - t_{i-1}}`.
    pub fn extensions_formula(&self, flag: &Flag) -> BigUint {
        let q = self.field.q as u64;
        let t = flag.flag_type();
        let mut acc = chamber_count(t[0] as u32, q);
        acc *= chamber_count((self.d - t[t.len() - 1]) as u32, q);
        for w in t.windows(2) {
            acc *= chamber_count((w[1] - w[0]) as u32, q);
        }
        acc
    }

    /// Number of edges of `Γ_d(q)`.
    pub fn edge_count(&self) -> u64 {
        let per_vertex: u64 = (0..self.len())
            .into_par_iter()
            .map(|c| {
                (c + 1..self.len())
                    .filter(|&e| self.is_opposite(c, e))
                    .count() as u64
            })
            .sum();
        per_vertex
    }

    /// Write the adjacency of `Γ_d(q)` as DIMACS (`p edge N M`, `e u v`,
    /// 1-based) or as a plain edge list.  Self-loops (only the degenerate
    /// `d = 1` vertex) are suppressed.
    pub fn export_graph<W: Write>(&self, format: GraphFormat, mut sink: W) -> std::io::Result<()> {
        let n = self.len();
        let m = self.edge_count();
        if matches!(format, GraphFormat::Dimacs) {
            writeln!(sink, "p edge {n} {m}")?;
        }
        for c in 0..n {
            for e in c + 1..n {
                if self.is_opposite(c, e) {
                    match format {
                        GraphFormat::Dimacs => writeln!(sink, "e {} {}", c + 1, e + 1)?,
                        GraphFormat::EdgeList => writeln!(sink, "{} {}", c + 1, e + 1)?,
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dimacs,
    EdgeList,
}

/// Factor a prime power and build its field.
pub fn field_of_order(q: u64) -> Result<FieldCtx, Error> {
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0u32;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if rest != 1 {
                return Err(Error::BadParameter(format!("{q} is not a prime power")));
            }
            return FieldCtx::new(p as u16, e, None);
        }
        p += 1;
    }
    FieldCtx::new(q as u16, 1, None)
}

/// All `s`-subspaces of a given subspace `b`, canonical in the ambient
/// space: enumerate abstract `s`-subspaces of `F_q^{dim b}` and push them
/// through the basis of `b`.
pub fn subspaces_within(field: &FieldCtx, b: &Subspace, s: usize) -> Vec<Subspace> {
    let k = b.dim();
    assert!(s <= k);
    enumerate_subspaces(field, k, s)
        .into_iter()
        .map(|abstract_sub| {
            let rows: Vec<Vec<_>> = abstract_sub
                .rows
                .iter()
                .map(|coeffs| {
                    let mut v = vec![0; b.d];
                    for (c, brow) in coeffs.iter().zip(&b.rows) {
                        for j in 0..b.d {
                            v[j] = field.add(v[j], field.mul(*c, brow[j]));
                        }
                    }
                    v
                })
                .collect();
            Subspace::from_vectors(field, b.d, &rows).unwrap()
        })
        .collect()
}

fn lookup(table: &[Subspace], sub: &Subspace) -> Option<u32> {
    table.binary_search(sub).ok().map(|i| i as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe(q: u64, d: usize) -> ChamberUniverse {
        ChamberUniverse::build_q(q, d, None).unwrap()
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(universe(2, 4).len(), 315);
        assert_eq!(universe(3, 4).len(), 2080);
        assert_eq!(universe(2, 1).len(), 1);
        assert_eq!(universe(2, 2).len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            ChamberUniverse::build_q(2, 4, Some(100)),
            Err(Error::CapExceeded { got: 315, cap: 100 })
        ));
    }

    #[test]
    fn chambers_are_strictly_nested() {
        let u = universe(3, 4);
        for c in 0..u.len() {
            for s in 1..u.d - 1 {
                assert!(u.part(c, s + 1).contains(&u.field, u.part(c, s)));
                assert_eq!(u.part(c, s).dim(), s);
            }
        }
    }

    #[test]
    fn oppositeness_basics() {
        let u = universe(2, 4);
        // Anti-reflexive and symmetric for d >= 2.
        for c in 0..u.len() {
            assert!(!u.is_opposite(c, c));
        }
        for c in 0..20 {
            for e in 0..u.len() {
                assert_eq!(u.is_opposite(c, e), u.is_opposite(e, c));
            }
        }
        // d=2: chambers are single 1-subspaces, opposite iff distinct.
        let u2 = universe(3, 2);
        assert_eq!(u2.len(), 4);
        for c in 0..4 {
            for e in 0..4 {
                assert_eq!(u2.is_opposite(c, e), c != e);
            }
        }
    }

    #[test]
    fn standard_vs_reversed_coordinate_flags_are_opposite() {
        let u = universe(2, 4);
        let f = &u.field;
        let basis: Vec<Vec<u16>> = (0..4)
            .map(|i| {
                let mut v = vec![0u16; 4];
                v[i] = 1;
                v
            })
            .collect();
        let std_ch = Chamber {
            d: 4,
            parts: (1..4)
                .map(|s| Subspace::from_vectors(f, 4, &basis[..s]).unwrap())
                .collect(),
        };
        let rev_ch = Chamber {
            d: 4,
            parts: (1..4)
                .map(|s| Subspace::from_vectors(f, 4, &basis[4 - s..]).unwrap())
                .collect(),
        };
        let ci = u.lookup_chamber(&std_ch).unwrap();
        let ei = u.lookup_chamber(&rev_ch).unwrap();
        assert!(u.is_opposite(ci, ei));
    }

    #[test]
    fn degree_matches_closed_form() {
        for (q, d) in [(2u64, 4usize), (3, 4)] {
            let u = universe(q, d);
            let expected = u.degree().to_u64().unwrap();
            for c in 0..u.len() {
                assert_eq!(u.count_opposite(c), expected, "q={q} d={d} c={c}");
            }
        }
        // d=1: the empty chamber is vacuously opposite to itself.
        let u1 = universe(2, 1);
        assert_eq!(u1.count_opposite(0), 1);
        // d=2, q=3: each point has q opposite points.
        let u2 = universe(3, 2);
        assert_eq!(u2.count_opposite(0), 3);
    }

    #[test]
    fn opposite_through_matches_closed_form() {
        let u = universe(2, 4);
        for c in [0usize, 17, 100] {
            for s in 1..4usize {
                // Pick any s-subspace skew to C_{d-s}.
                let part = u.part(c, 4 - s).clone();
                let sub = u.tables[s]
                    .iter()
                    .find(|t| part.meets_trivially(&u.field, t).unwrap())
                    .unwrap()
                    .clone();
                let got = u.count_opposite_through(c, &sub).unwrap();
                assert_eq!(BigUint::from(got), u.opposite_through_formula(s));
            }
        }
        assert_eq!(universe(2, 4).opposite_through_formula(1), BigUint::from(8u32));
        assert_eq!(universe(2, 4).opposite_through_formula(2), BigUint::from(4u32));
    }

    #[test]
    fn opposite_through_rejects_violated_precondition() {
        let u = universe(2, 4);
        // S = C_1 never meets C_3 trivially.
        let sub = u.part(0, 1).clone();
        assert!(matches!(
            u.count_opposite_through(0, &sub),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn flag_extensions_match_closed_form() {
        let u = universe(2, 4);
        // Single 2-subspace: z_2 * z_2 = 9.
        let two = u.tables[2][0].clone();
        let flag = Flag::new(&u.field, 4, vec![two]).unwrap();
        assert_eq!(u.extensions_formula(&flag), BigUint::from(9u32));
        assert_eq!(u.count_extensions(&flag), 9);

        // Type {1,3}: z_1 * z_2 * z_1 = 3.
        let c = 0;
        let flag13 = Flag::new(
            &u.field,
            4,
            vec![u.part(c, 1).clone(), u.part(c, 3).clone()],
        )
        .unwrap();
        assert_eq!(u.extensions_formula(&flag13), BigUint::from(3u32));
        assert_eq!(u.count_extensions(&flag13), 3);

        // A full chamber extends only to itself.
        let full = Flag::new(
            &u.field,
            4,
            (1..4).map(|s| u.part(c, s).clone()).collect(),
        )
        .unwrap();
        assert_eq!(u.extensions_formula(&full), BigUint::from(1u32));
        assert_eq!(u.count_extensions(&full), 1);
    }

    #[test]
    fn flag_extensions_brute_force_all_types_q3() {
        let u = universe(3, 4);
        let c = 123;
        for t in [vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]] {
            let flag = Flag::new(
                &u.field,
                4,
                t.iter().map(|&s| u.part(c, s).clone()).collect(),
            )
            .unwrap();
            assert_eq!(
                BigUint::from(u.count_extensions(&flag)),
                u.extensions_formula(&flag),
                "type {t:?}"
            );
        }
    }

    #[test]
    fn flag_validation() {
        let u = universe(2, 4);
        assert!(Flag::new(&u.field, 4, vec![]).is_err());
        // Non-nested pair rejected.
        let a = u.tables[2][0].clone();
        let b = u.tables[2][1].clone();
        assert!(Flag::new(&u.field, 4, vec![a, b]).is_err());
    }

    #[test]
    fn z2n_product_identity() {
        // z_{2n} = gaussian(2n, n) * z_n^2, exactly.
        for q in [2u64, 3, 4] {
            for n in 1..=3u32 {
                let lhs = chamber_count(2 * n, q);
                let rhs = crate::projspace::gaussian(2 * n as i64, n as i64, q)
                    * chamber_count(n, q)
                    * chamber_count(n, q);
                assert_eq!(lhs, rhs, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn dimacs_export_header() {
        let u = universe(2, 4);
        let mut buf = Vec::new();
        u.export_graph(GraphFormat::Dimacs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p edge 315 10080\n"));
        assert_eq!(text.lines().count(), 1 + 10080);

        let u2 = universe(2, 2);
        let mut buf = Vec::new();
        u2.export_graph(GraphFormat::Dimacs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p edge 3 3\n"));

        let u1 = universe(2, 1);
        let mut buf = Vec::new();
        u1.export_graph(GraphFormat::Dimacs, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("p edge 1 0\n"));
    }

    #[test]
    fn lookup_roundtrip() {
        let u = universe(3, 4);
        for c in [0usize, 1, 999, 2079] {
            let ch = u.chamber(c);
            assert_eq!(u.lookup_chamber(&ch), Some(c));
        }
    }
}
