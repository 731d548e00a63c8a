//! EKR-sets of chambers: the classical constructions, coclique and
//! maximality verification, the weight (heavy/light) analysis, the
//! PG(3,q) line structure checks, and an exact maximum-coclique solver
//! with classification of the results.

use crate::antidesigns::{expected_intersection, AntidesignFamily};
use crate::bits::BitSet;
use crate::chambers::ChamberUniverse;
use crate::projspace::{chamber_count, gaussian, Subspace};
use crate::spectral::{alpha_formula, half_dim, smallest_eigenvalue, WeightVector};
use crate::Error;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::io::{BufRead, Write};

/// How an EKR-set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// All chambers whose middle subspace contains the given point
    /// (index into the 1-subspace table).
    PointClassical(u32),
    /// All chambers whose middle subspace lies in the given hyperplane
    /// (index into the (d-1)-subspace table).
    HyperplaneClassical(u32),
    SearchFound,
}

/// A set of chambers, stored as a bitset over chamber indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EkrSet {
    pub q: u64,
    pub d: usize,
    pub members: BitSet,
    pub provenance: Option<Provenance>,
}

impl EkrSet {
    pub fn new(universe: &ChamberUniverse, indices: &[usize]) -> EkrSet {
        let mut members = BitSet::new(universe.len());
        for &i in indices {
            members.insert(i);
        }
        EkrSet {
            q: universe.field.q as u64,
            d: universe.d,
            members,
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members.get(c)
    }

    pub fn characteristic_vector(&self, universe: &ChamberUniverse) -> Result<WeightVector, Error> {
        self.check(universe)?;
        let values = (0..universe.len()).map(|c| i64::from(self.contains(c))).collect();
        Ok(WeightVector { values })
    }

    fn check(&self, universe: &ChamberUniverse) -> Result<(), Error> {
        if self.q != universe.field.q as u64 || self.d != universe.d {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }
}

/// All chambers whose middle subspace contains the point with index
/// `p` in the 1-subspace table.
pub fn classical_point(universe: &ChamberUniverse, p: usize) -> Result<EkrSet, Error> {
    let n = half_dim(universe)?;
    if p >= universe.tables[1].len() {
        return Err(Error::BadParameter(format!("point index {p} out of range")));
    }
    let mut members = BitSet::new(universe.len());
    for c in 0..universe.len() {
        if universe.point_in_part(p, c, n) {
            members.insert(c);
        }
    }
    Ok(EkrSet {
        q: universe.field.q as u64,
        d: universe.d,
        members,
        provenance: Some(Provenance::PointClassical(p as u32)),
    })
}

/// All chambers whose middle subspace lies inside the hyperplane with
/// index `h` in the (d-1)-subspace table.
pub fn classical_hyperplane(universe: &ChamberUniverse, h: usize) -> Result<EkrSet, Error> {
    let n = half_dim(universe)?;
    let d = universe.d;
    if h >= universe.tables[d - 1].len() {
        return Err(Error::BadParameter(format!("hyperplane index {h} out of range")));
    }
    let hyper = &universe.tables[d - 1][h];
    let field = &universe.field;
    let inside: Vec<bool> = universe.tables[n].iter().map(|s| hyper.contains(field, s)).collect();
    let mut members = BitSet::new(universe.len());
    for c in 0..universe.len() {
        if inside[universe.parts_of(c)[n - 1] as usize] {
            members.insert(c);
        }
    }
    Ok(EkrSet {
        q: universe.field.q as u64,
        d,
        members,
        provenance: Some(Provenance::HyperplaneClassical(h as u32)),
    })
}

/// No two members opposite.
pub fn is_coclique(universe: &ChamberUniverse, set: &EkrSet) -> Result<bool, Error> {
    set.check(universe)?;
    let idx = set.indices();
    if let Some(adj) = universe.adjacency() {
        let words = &set.members.words;
        Ok(idx.par_iter().all(|&c| {
            adj.row(c).iter().zip(words).all(|(a, b)| a & b == 0)
        }))
    } else {
        Ok(idx.par_iter().enumerate().all(|(i, &c)| {
            idx[i + 1..].iter().all(|&e| !universe.is_opposite(c, e))
        }))
    }
}

/// Coclique of exactly the maximum size `z_d(q)/(q^n + 1)`.
pub fn is_maximum(universe: &ChamberUniverse, set: &EkrSet) -> Result<bool, Error> {
    let n = half_dim(universe)?;
    if !is_coclique(universe, set)? {
        return Ok(false);
    }
    Ok(BigUint::from(set.len()) == alpha_formula(n, universe.field.q as u64))
}

/// `⟨v, 1_F⟩` for a weight vector against a chamber set.
pub fn set_inner_product(set: &EkrSet, v: &WeightVector) -> Result<i128, Error> {
    if v.len() != set.members.len {
        return Err(Error::UniverseMismatch);
    }
    Ok(set.members.iter().map(|c| v.values[c] as i128).sum())
}

/// One antidesign-vs-set comparison.
#[derive(Debug, Clone)]
pub struct IntersectionCheck {
    pub name: String,
    pub family: AntidesignFamily,
    pub actual: i128,
    pub expected: BigUint,
    pub pass: bool,
}

/// Compare `⟨v, 1_F⟩` against the closed-form constant for a maximum set.
pub fn antidesign_intersections(
    universe: &ChamberUniverse,
    set: &EkrSet,
    vectors: &[(String, AntidesignFamily, WeightVector)],
) -> Result<Vec<IntersectionCheck>, Error> {
    let n = half_dim(universe)?;
    if !is_maximum(universe, set)? {
        return Err(Error::Precondition("set is not a maximum coclique".into()));
    }
    let q = universe.field.q as u64;
    let mut out = Vec::with_capacity(vectors.len());
    for (name, family, v) in vectors {
        let actual = set_inner_product(set, v)?;
        let expected = expected_intersection(*family, n, q);
        let pass = actual >= 0 && BigUint::from(actual as u128) == expected;
        out.push(IntersectionCheck {
            name: name.clone(),
            family: *family,
            actual,
            expected,
            pass,
        });
    }
    Ok(out)
}

/// The x/y/z weight split of a subspace against a maximum set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub s: usize,
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub heavy: bool,
    /// `y = q^{s(2n-s)-n} (z_s z_{2n-s} - x)` held exactly.
    pub identity_ok: bool,
    /// Heavy: `x = z_s z_{2n-s}`; light: `x <= z_s z_{2n-s} - q^{n²-n+(n-s)²}`.
    pub classification_ok: bool,
}

/// Map a chamber set through the duality `C_i -> (C_{d-i})°`.
pub fn dual_set(universe: &ChamberUniverse, set: &EkrSet) -> Result<EkrSet, Error> {
    set.check(universe)?;
    let d = universe.d;
    let field = &universe.field;
    let mut members = BitSet::new(universe.len());
    for c in set.members.iter() {
        let parts: Vec<Subspace> = (1..d)
            .rev()
            .map(|i| universe.part(c, i).annihilator(field))
            .collect();
        let dual = crate::chambers::Chamber { d, parts };
        let idx = universe.lookup_chamber(&dual).ok_or(Error::UniverseMismatch)?;
        members.insert(idx);
    }
    Ok(EkrSet {
        q: set.q,
        d,
        members,
        provenance: None,
    })
}

/// Whether every chamber whose `s`-part equals `S` belongs to the set.
pub fn is_heavy(universe: &ChamberUniverse, set: &EkrSet, s_sub: &Subspace) -> Result<bool, Error> {
    set.check(universe)?;
    let s = s_sub.dim();
    let idx = universe.subspace_index(s_sub).ok_or(Error::UniverseMismatch)?;
    Ok((0..universe.len()).all(|c| universe.parts_of(c)[s - 1] != idx || set.contains(c)))
}

/// Weight profile of `S` against a maximum set.  For `s > n` the counts
/// are computed in the dual space (annihilators reverse inclusion), as
/// the subspace weight vector is only defined for `s <= n`.
pub fn weight_profile(universe: &ChamberUniverse, set: &EkrSet, s_sub: &Subspace) -> Result<WeightProfile, Error> {
    let n = half_dim(universe)?;
    let s = s_sub.dim();
    if s == 0 || s >= universe.d {
        return Err(Error::DimensionOutOfRange(format!("s = {s} not in (0, {})", universe.d)));
    }
    if !is_maximum(universe, set)? {
        return Err(Error::Precondition("set is not a maximum coclique".into()));
    }
    if s > n {
        let dual = dual_set(universe, set)?;
        let dual_sub = s_sub.annihilator(&universe.field);
        let mut profile = profile_counts(universe, &dual, &dual_sub)?;
        profile.s = s;
        return Ok(profile);
    }
    profile_counts(universe, set, s_sub)
}

fn profile_counts(universe: &ChamberUniverse, set: &EkrSet, s_sub: &Subspace) -> Result<WeightProfile, Error> {
    let n = universe.d / 2;
    let d = universe.d;
    let q = universe.field.q as u64;
    let s = s_sub.dim();
    let s_idx = universe.subspace_index(s_sub).ok_or(Error::UniverseMismatch)?;
    let field = &universe.field;
    let skew: Vec<bool> = universe.tables[d - s]
        .iter()
        .map(|u| s_sub.meets_trivially(field, u).unwrap())
        .collect();
    let (mut x, mut y, mut z) = (0u64, 0u64, 0u64);
    for c in set.members.iter() {
        let parts = universe.parts_of(c);
        if parts[s - 1] == s_idx {
            x += 1;
        } else if skew[parts[d - s - 1] as usize] {
            y += 1;
        } else {
            z += 1;
        }
    }
    let heavy = is_heavy(universe, set, s_sub)?;
    let zz = (chamber_count(s as u32, q) * chamber_count((d - s) as u32, q))
        .to_u64()
        .expect("desk-scale");
    let scale = q.pow((s * (d - s) - n) as u32);
    let identity_ok = y as u128 == scale as u128 * (zz - x) as u128;
    let classification_ok = if heavy {
        x == zz
    } else {
        let diff = (n as i64 - s as i64).pow(2) as u32;
        let gap = q.pow((n * n - n) as u32 + diff);
        x <= zz - gap
    };
    Ok(WeightProfile {
        s,
        x,
        y,
        z,
        heavy,
        identity_ok,
        classification_ok,
    })
}

/// The heavy `s`-subspace structure of a maximum set.
#[derive(Debug, Clone)]
pub struct HeavyReport {
    pub s: usize,
    /// Indices into the `s`-subspace table.
    pub heavy: Vec<u32>,
    pub pairwise_meet: bool,
    /// Heavy iff every member chamber satisfies `C_{d-s} ∩ S != {0}`.
    pub criterion_ok: bool,
    pub bound: BigUint,
    pub within_bound: bool,
}

/// Heavy `s`-subspaces (`s <= n`): list, pairwise-meeting check,
/// the `y = 0` criterion, and the `gaussian(2n-1, s-1)` bound.
pub fn heavy_analysis(universe: &ChamberUniverse, set: &EkrSet, s: usize) -> Result<HeavyReport, Error> {
    let n = half_dim(universe)?;
    if s == 0 || s > n {
        return Err(Error::DimensionOutOfRange(format!("s = {s} not in [1, {n}]")));
    }
    if !is_maximum(universe, set)? {
        return Err(Error::Precondition("set is not a maximum coclique".into()));
    }
    let field = &universe.field;
    let mut heavy = Vec::new();
    let mut criterion_ok = true;
    for (i, sub) in universe.tables[s].iter().enumerate() {
        let h = is_heavy(universe, set, sub)?;
        // Criterion: heavy iff no member chamber has C_{d-s} skew to S.
        let all_meet = set
            .members
            .iter()
            .all(|c| !universe.part(c, universe.d - s).meets_trivially(field, sub).unwrap());
        if h != all_meet {
            criterion_ok = false;
        }
        if h {
            heavy.push(i as u32);
        }
    }
    let pairwise_meet = heavy.iter().enumerate().all(|(a, &i)| {
        heavy[a + 1..].iter().all(|&j| {
            !universe.tables[s][i as usize]
                .meets_trivially(field, &universe.tables[s][j as usize])
                .unwrap()
        })
    });
    let bound = gaussian((universe.d - 1) as i64, (s - 1) as i64, universe.field.q as u64);
    let within_bound = BigUint::from(heavy.len()) <= bound;
    Ok(HeavyReport {
        s,
        heavy,
        pairwise_meet,
        criterion_ok,
        bound,
        within_bound,
    })
}

/// Line weights of a maximum set in PG(3,q) (ambient dimension 4).
#[derive(Debug, Clone)]
pub struct LineWeightReport {
    /// Weight of every 2-subspace, indexed by the 2-subspace table.
    pub weights: Vec<u64>,
    pub spectrum: BTreeSet<u64>,
    pub spectrum_ok: bool,
    /// Lines of weight < (q+1)² whose q+1 chambers through some plane
    /// all belong to the set.
    pub pi_lines: Vec<u32>,
    /// Dually, with some point.
    pub p_lines: Vec<u32>,
}

/// Weight of every line, the allowed-spectrum check, and the π-/P-line
/// labelling.  Ambient dimension 4 only.
pub fn line_weight_spectrum(universe: &ChamberUniverse, set: &EkrSet) -> Result<LineWeightReport, Error> {
    if universe.d != 4 {
        return Err(Error::DimensionOutOfRange(format!(
            "line weights are defined for dimension 4, got {}",
            universe.d
        )));
    }
    if !is_maximum(universe, set)? {
        return Err(Error::Precondition("set is not a maximum coclique".into()));
    }
    let q = universe.field.q as u64;
    let lines = universe.tables[2].len();
    let mut weights = vec![0u64; lines];
    // members[line] -> chambers of the set on that line, grouped by
    // (point index, plane index).
    let mut by_line: Vec<Vec<(u32, u32)>> = vec![Vec::new(); lines];
    for c in set.members.iter() {
        let parts = universe.parts_of(c);
        weights[parts[1] as usize] += 1;
        by_line[parts[1] as usize].push((parts[0], parts[2]));
    }
    let allowed: BTreeSet<u64> = [0, 1, 2, q + 1, 2 * q + 1, (q + 1) * (q + 1)].into();
    let spectrum: BTreeSet<u64> = weights.iter().copied().collect();
    let spectrum_ok = spectrum.is_subset(&allowed);
    let full = (q + 1) * (q + 1);
    let mut pi_lines = Vec::new();
    let mut p_lines = Vec::new();
    for (l, entries) in by_line.iter().enumerate() {
        if weights[l] >= full {
            continue;
        }
        // A plane/point carries q+1 chambers on this line exactly when
        // it appears q+1 times among the set's chambers on the line.
        let mut planes: Vec<u32> = entries.iter().map(|&(_, pl)| pl).collect();
        planes.sort_unstable();
        if count_run_of(&planes, q + 1) {
            pi_lines.push(l as u32);
        }
        let mut points: Vec<u32> = entries.iter().map(|&(pt, _)| pt).collect();
        points.sort_unstable();
        if count_run_of(&points, q + 1) {
            p_lines.push(l as u32);
        }
    }
    Ok(LineWeightReport {
        weights,
        spectrum,
        spectrum_ok,
        pi_lines,
        p_lines,
    })
}

fn count_run_of(sorted: &[u32], run: u64) -> bool {
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) as u64 == run {
            return true;
        }
        i = j;
    }
    false
}

/// Whether the middle parts (lines, for d = 4) of all members pairwise
/// intersect non-trivially.
pub fn lines_pairwise_meet(universe: &ChamberUniverse, set: &EkrSet) -> Result<bool, Error> {
    let n = half_dim(universe)?;
    set.check(universe)?;
    let field = &universe.field;
    let mids: Vec<u32> = {
        let mut v: Vec<u32> = set.members.iter().map(|c| universe.parts_of(c)[n - 1]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    Ok(mids.par_iter().enumerate().all(|(i, &a)| {
        mids[i + 1..].iter().all(|&b| {
            !universe.tables[n][a as usize]
                .meets_trivially(field, &universe.tables[n][b as usize])
                .unwrap()
        })
    }))
}

/// Every vertex outside the set has exactly `-λ` neighbors inside.
pub fn verify_ratio_tightness(universe: &ChamberUniverse, set: &EkrSet) -> Result<bool, Error> {
    let n = half_dim(universe)?;
    set.check(universe)?;
    let inside = -smallest_eigenvalue(n, universe.field.q as u64);
    let words = &set.members.words;
    let ok = match universe.adjacency() {
        Some(adj) => (0..universe.len()).into_par_iter().all(|c| {
            if set.contains(c) {
                return true;
            }
            let cnt: u64 = adj
                .row(c)
                .iter()
                .zip(words)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            cnt as i128 == inside
        }),
        None => (0..universe.len()).into_par_iter().all(|c| {
            if set.contains(c) {
                return true;
            }
            let cnt = set.members.iter().filter(|&e| universe.is_opposite(c, e)).count();
            cnt as i128 == inside
        }),
    };
    Ok(ok)
}

/// Classification outcome of a maximum set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Some point lies in the middle subspace of every member.
    PointClassical(u32),
    /// The middle subspace of every member lies in some hyperplane.
    HyperplaneClassical(u32),
    NonClassical,
}

/// Decide whether a maximum set is of classical type, returning the
/// witness point or hyperplane index.
pub fn classify(universe: &ChamberUniverse, set: &EkrSet) -> Result<Classification, Error> {
    let n = half_dim(universe)?;
    if !is_maximum(universe, set)? {
        return Err(Error::Precondition("set is not a maximum coclique".into()));
    }
    let members: Vec<usize> = set.indices();
    'point: for p in 0..universe.tables[1].len() {
        for &c in &members {
            if !universe.point_in_part(p, c, n) {
                continue 'point;
            }
        }
        return Ok(Classification::PointClassical(p as u32));
    }
    let field = &universe.field;
    'hyper: for h in 0..universe.tables[universe.d - 1].len() {
        let hyper = &universe.tables[universe.d - 1][h];
        for &c in &members {
            if !hyper.contains(field, universe.part(c, n)) {
                continue 'hyper;
            }
        }
        return Ok(Classification::HyperplaneClassical(h as u32));
    }
    Ok(Classification::NonClassical)
}

/// Solver mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Certify that no coclique of size `target + 1` exists.
    ProveAlpha,
    /// Emit all cocliques of size exactly `target`.
    EnumerateMaximum,
}

/// Solver outcome.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// No coclique larger than the target exists.
    Certified,
    /// A coclique exceeding the target was found (refutation witness).
    Exceeded(Vec<usize>),
    /// All cocliques of exactly the target size, sorted canonically.
    Enumerated(Vec<Vec<usize>>),
    /// Node budget exhausted before completion.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub budget: u64,
    /// Number of cliques in the cover driving the branch bound.
    pub cover_size: usize,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000_000;

/// Exact maximum-coclique search over a universe with cached adjacency.
///
/// The graph is first partitioned greedily into cliques (sets of
/// pairwise-opposite chambers); any coclique picks at most one vertex
/// per clique, so the number of surviving cliques bounds the branch.
/// `use_tightness` additionally prunes any branch in which a discarded
/// vertex already has more than `-λ` chosen neighbors — valid only for
/// Hoffman-tight targets, so callers must verify the ratio-tightness
/// property on known maximum sets first.
pub fn max_coclique_search(
    universe: &ChamberUniverse,
    target: usize,
    mode: SearchMode,
    budget: u64,
    use_tightness: bool,
) -> Result<SearchResult, Error> {
    let n = half_dim(universe)?;
    let adj = universe
        .adjacency()
        .ok_or_else(|| Error::Precondition("adjacency cache required for search".into()))?;
    let nv = universe.len();
    if mode == SearchMode::EnumerateMaximum {
        return enumerate_by_transversality(universe, target, budget, use_tightness);
    }
    let cover = clique_cover(universe);
    let tight_limit = if use_tightness {
        Some((-smallest_eigenvalue(n, universe.field.q as u64)) as u32)
    } else {
        None
    };
    let mut solver = Solver {
        nv,
        rows: (0..nv).map(|v| adj.row(v).to_vec()).collect(),
        cover_of: {
            let mut m = vec![0u32; nv];
            for (ci, cl) in cover.iter().enumerate() {
                for &v in cl {
                    m[v] = ci as u32;
                }
            }
            m
        },
        cover: cover.clone(),
        mode,
        budget,
        nodes: 0,
        tight_limit,
        chosen_neighbors: vec![0u32; nv],
        violations: 0,
        current: Vec::with_capacity(target + 1),
        solutions: Vec::new(),
        witness: None,
        exhausted: false,
    };
    let goal = match mode {
        SearchMode::ProveAlpha => target + 1,
        SearchMode::EnumerateMaximum => target,
    };
    // Candidate availability per vertex, and per-clique live counters.
    let mut available = vec![true; nv];
    let mut clique_live: Vec<u32> = cover.iter().map(|c| c.len() as u32).collect();
    let mut clique_dead = vec![false; cover.len()];
    solver.search(goal, &mut available, &mut clique_live, &mut clique_dead);
    let outcome = if solver.exhausted {
        SearchOutcome::Inconclusive
    } else {
        match mode {
            SearchMode::ProveAlpha => match solver.witness {
                Some(w) => SearchOutcome::Exceeded(w),
                None => SearchOutcome::Certified,
            },
            SearchMode::EnumerateMaximum => {
                let mut sols = solver.solutions;
                sols.sort();
                sols.dedup();
                SearchOutcome::Enumerated(sols)
            }
        }
    };
    Ok(SearchResult {
        outcome,
        nodes: solver.nodes,
        budget,
        cover_size: cover.len(),
    })
}

/// Enumerate all Hoffman-tight cocliques as exact transversals of the
/// maximum cliques.
///
/// `(q^n + 1) · α = z_d(q)` with a vertex-transitive graph puts the
/// clique-coclique bound in its equality case, so every maximum
/// coclique meets every maximum clique exactly once.  (Callers verify
/// this on the classical sets first via
/// [`verify_clique_transversality`].)  The search therefore branches on
/// the members of an unhit clique and prunes as soon as any clique has
/// no remaining candidate.
fn enumerate_by_transversality(
    universe: &ChamberUniverse,
    target: usize,
    budget: u64,
    use_tightness: bool,
) -> Result<SearchResult, Error> {
    let n = half_dim(universe)?;
    let q = universe.field.q as u64;
    if BigUint::from(target) != alpha_formula(n, q) {
        return Err(Error::BadParameter(format!(
            "enumeration target {target} is not the Hoffman-tight size"
        )));
    }
    let adj = universe
        .adjacency()
        .ok_or_else(|| Error::Precondition("adjacency cache required for search".into()))?;
    let cliques = max_cliques(universe)?;
    let nv = universe.len();
    let mut by_vertex: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for (i, cl) in cliques.iter().enumerate() {
        for &v in cl {
            by_vertex[v].push(i as u32);
        }
    }
    let tight_limit = if use_tightness {
        Some((-smallest_eigenvalue(n, q)) as u32)
    } else {
        None
    };
    let mut solver = TransversalSolver {
        nv,
        rows: (0..nv).map(|v| adj.row(v).to_vec()).collect(),
        clique_members: cliques.clone(),
        by_vertex,
        avail: vec![true; nv],
        avail_count: cliques.iter().map(|c| c.len() as u32).collect(),
        satisfied: vec![false; cliques.len()],
        unsat: cliques.len(),
        dead: 0,
        tight_limit,
        chosen_neighbors: vec![0u32; nv],
        violations: 0,
        current: Vec::with_capacity(target),
        target,
        budget,
        nodes: 0,
        exhausted: false,
        solutions: Vec::new(),
    };
    solver.search();
    let outcome = if solver.exhausted {
        SearchOutcome::Inconclusive
    } else {
        let mut sols = solver.solutions;
        sols.sort();
        sols.dedup();
        SearchOutcome::Enumerated(sols)
    };
    Ok(SearchResult {
        outcome,
        nodes: solver.nodes,
        budget,
        cover_size: cliques.len(),
    })
}

struct TransversalSolver {
    nv: usize,
    rows: Vec<Vec<u64>>,
    clique_members: Vec<Vec<usize>>,
    by_vertex: Vec<Vec<u32>>,
    avail: Vec<bool>,
    avail_count: Vec<u32>,
    satisfied: Vec<bool>,
    unsat: usize,
    /// Unsatisfied cliques with no available member (prune when > 0).
    dead: u32,
    tight_limit: Option<u32>,
    chosen_neighbors: Vec<u32>,
    violations: u32,
    current: Vec<usize>,
    target: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    solutions: Vec<Vec<usize>>,
}

impl TransversalSolver {
    fn search(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.dead > 0 || self.violations > 0 {
            return;
        }
        if self.unsat == 0 {
            // Each chosen vertex satisfies its cliques exactly once, so
            // a full transversal has exactly `target` vertices.
            if self.current.len() == self.target {
                let mut sol = self.current.clone();
                sol.sort_unstable();
                self.solutions.push(sol);
            }
            return;
        }
        // Fail-first: the unhit clique with fewest candidates.
        let mut pick = usize::MAX;
        let mut best = u32::MAX;
        for ci in 0..self.clique_members.len() {
            if !self.satisfied[ci] && self.avail_count[ci] < best {
                best = self.avail_count[ci];
                pick = ci;
                if best <= 1 {
                    break;
                }
            }
        }
        let members: Vec<usize> = self.clique_members[pick]
            .iter()
            .copied()
            .filter(|&v| self.avail[v])
            .collect();
        for &v in &members {
            let removed = self.take(v);
            self.search();
            self.untake(v, &removed);
            if self.exhausted {
                return;
            }
        }
    }

    fn remove_vertex(&mut self, u: usize) {
        self.avail[u] = false;
        for i in 0..self.by_vertex[u].len() {
            let j = self.by_vertex[u][i] as usize;
            self.avail_count[j] -= 1;
            if self.avail_count[j] == 0 && !self.satisfied[j] {
                self.dead += 1;
            }
        }
    }

    fn restore_vertex(&mut self, u: usize) {
        for i in 0..self.by_vertex[u].len() {
            let j = self.by_vertex[u][i] as usize;
            if self.avail_count[j] == 0 && !self.satisfied[j] {
                self.dead -= 1;
            }
            self.avail_count[j] += 1;
        }
        self.avail[u] = true;
    }

    fn take(&mut self, v: usize) -> Vec<usize> {
        self.current.push(v);
        // Mark v's cliques satisfied before any removals so the dead
        // counter ignores them.  All other members of v's cliques are
        // neighbors of v, so the independence filter below also
        // enforces single hits.
        for i in 0..self.by_vertex[v].len() {
            let j = self.by_vertex[v][i] as usize;
            self.satisfied[j] = true;
            self.unsat -= 1;
        }
        self.remove_vertex(v);
        let mut removed = Vec::new();
        let row = std::mem::take(&mut self.rows[v]);
        for (wi, &w) in row.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if u >= self.nv {
                    break;
                }
                self.chosen_neighbors[u] += 1;
                if let Some(limit) = self.tight_limit {
                    if self.chosen_neighbors[u] == limit + 1 {
                        self.violations += 1;
                    }
                }
                if self.avail[u] {
                    self.remove_vertex(u);
                    removed.push(u);
                }
            }
        }
        self.rows[v] = row;
        removed
    }

    fn untake(&mut self, v: usize, removed: &[usize]) {
        for &u in removed.iter().rev() {
            self.restore_vertex(u);
        }
        let row = std::mem::take(&mut self.rows[v]);
        for (wi, &w) in row.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if u >= self.nv {
                    break;
                }
                if let Some(limit) = self.tight_limit {
                    if self.chosen_neighbors[u] == limit + 1 {
                        self.violations -= 1;
                    }
                }
                self.chosen_neighbors[u] -= 1;
            }
        }
        self.rows[v] = row;
        self.restore_vertex(v);
        for i in 0..self.by_vertex[v].len() {
            let j = self.by_vertex[v][i] as usize;
            self.satisfied[j] = false;
            self.unsat += 1;
        }
        self.current.pop();
    }
}

/// All cliques of size `q^n + 1` in the oppositeness graph — the
/// maximum cliques, by the clique ratio bound `ω <= 1 + k/(-λ)`.
pub fn max_cliques(universe: &ChamberUniverse) -> Result<Vec<Vec<usize>>, Error> {
    let n = half_dim(universe)?;
    let adj = universe
        .adjacency()
        .ok_or_else(|| Error::Precondition("adjacency cache required".into()))?;
    let k = (universe.field.q as u64).pow(n as u32) as usize + 1;
    let nv = universe.len();
    let out: Vec<Vec<Vec<usize>>> = (0..nv)
        .into_par_iter()
        .map(|v| {
            // Cliques whose lowest vertex is v: DFS over common
            // neighbors with index above the last member.
            let mut found = Vec::new();
            let mut clique = vec![v];
            let cands: Vec<u64> = adj.row(v).to_vec();
            grow_cliques(adj, k, v, &mut clique, cands, &mut found);
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn grow_cliques(
    adj: &crate::bits::BitMatrix,
    k: usize,
    floor: usize,
    clique: &mut Vec<usize>,
    cands: Vec<u64>,
    found: &mut Vec<Vec<usize>>,
) {
    if clique.len() == k {
        found.push(clique.clone());
        return;
    }
    let need = k - clique.len();
    let mut scan = cands.clone();
    // Only extend upward to generate each clique once.
    for w in scan.iter_mut().take(floor / 64) {
        *w = 0;
    }
    scan[floor / 64] &= !(u64::MAX >> (63 - floor % 64));
    if (scan.iter().map(|w| w.count_ones()).sum::<u32>() as usize) < need {
        return;
    }
    while let Some(u) = first_bit(&scan) {
        scan[u / 64] &= !(1u64 << (u % 64));
        let next: Vec<u64> = cands.iter().zip(adj.row(u)).map(|(a, b)| a & b).collect();
        clique.push(u);
        grow_cliques(adj, k, u, clique, next, found);
        clique.pop();
    }
}

/// Every maximum clique meets the set exactly once (the equality case
/// of the clique-coclique bound, since `(q^n + 1) · α = z_d(q)`).
pub fn verify_clique_transversality(
    universe: &ChamberUniverse,
    set: &EkrSet,
    cliques: &[Vec<usize>],
) -> Result<bool, Error> {
    set.check(universe)?;
    Ok(cliques
        .par_iter()
        .all(|cl| cl.iter().filter(|&&v| set.contains(v)).count() == 1))
}

/// Partition of the vertices into cliques of the oppositeness graph:
/// greedy packing of disjoint maximum cliques, then greedy cover of the
/// leftovers.  Smaller covers give tighter branch bounds.
fn clique_cover(universe: &ChamberUniverse) -> Vec<Vec<usize>> {
    let nv = universe.len();
    let mut taken = vec![false; nv];
    let mut cover = Vec::new();
    if let Ok(cliques) = max_cliques(universe) {
        for cl in &cliques {
            if cl.iter().all(|&v| !taken[v]) {
                for &v in cl {
                    taken[v] = true;
                }
                cover.push(cl.clone());
            }
        }
    }
    cover.extend(greedy_clique_cover(universe, &taken));
    cover
}

fn greedy_clique_cover(universe: &ChamberUniverse, covered: &[bool]) -> Vec<Vec<usize>> {
    let adj = universe.adjacency().expect("adjacency cache required");
    let nv = universe.len();
    let words = nv.div_ceil(64);
    let mut uncovered: Vec<u64> = vec![0u64; words];
    for v in 0..nv {
        if !covered[v] {
            uncovered[v / 64] |= 1 << (v % 64);
        }
    }
    let mut cover = Vec::new();
    for v in 0..nv {
        if uncovered[v / 64] & (1 << (v % 64)) == 0 {
            continue;
        }
        let mut clique = vec![v];
        uncovered[v / 64] &= !(1 << (v % 64));
        // Common candidate set: uncovered vertices adjacent to the
        // whole clique so far.
        let mut cands: Vec<u64> = adj.row(v).iter().zip(&uncovered).map(|(a, b)| a & b).collect();
        loop {
            let Some(u) = first_bit(&cands) else { break };
            clique.push(u);
            uncovered[u / 64] &= !(1 << (u % 64));
            for (w, a) in cands.iter_mut().zip(adj.row(u)) {
                *w &= a;
            }
            cands[u / 64] &= !(1 << (u % 64));
        }
        cover.push(clique);
    }
    cover
}

fn first_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

struct Solver {
    nv: usize,
    rows: Vec<Vec<u64>>,
    cover: Vec<Vec<usize>>,
    cover_of: Vec<u32>,
    mode: SearchMode,
    budget: u64,
    nodes: u64,
    tight_limit: Option<u32>,
    chosen_neighbors: Vec<u32>,
    violations: u32,
    current: Vec<usize>,
    solutions: Vec<Vec<usize>>,
    witness: Option<Vec<usize>>,
    exhausted: bool,
}

impl Solver {
    fn done(&self) -> bool {
        self.exhausted
            || (self.mode == SearchMode::ProveAlpha && self.witness.is_some())
    }

    /// Depth-first search choosing, at each node, the live clique with
    /// the fewest available vertices; branches are each vertex of that
    /// clique plus "skip the clique".
    fn search(
        &mut self,
        goal: usize,
        available: &mut [bool],
        clique_live: &mut [u32],
        clique_dead: &mut [bool],
    ) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.violations > 0 {
            return;
        }
        if self.current.len() == goal {
            match self.mode {
                SearchMode::ProveAlpha => self.witness = Some(self.current.clone()),
                SearchMode::EnumerateMaximum => {
                    let mut sol = self.current.clone();
                    sol.sort_unstable();
                    self.solutions.push(sol);
                }
            }
            return;
        }
        // Upper bound: chosen + live cliques that still have a vertex.
        let potential: usize = clique_dead
            .iter()
            .zip(clique_live.iter())
            .filter(|&(&dead, &live)| !dead && live > 0)
            .count();
        if self.current.len() + potential < goal {
            return;
        }
        // Fail-first: the live clique with fewest available vertices.
        let mut pick = usize::MAX;
        let mut best = u32::MAX;
        for ci in 0..self.cover.len() {
            if !clique_dead[ci] && clique_live[ci] > 0 && clique_live[ci] < best {
                best = clique_live[ci];
                pick = ci;
                if best == 1 {
                    break;
                }
            }
        }
        if pick == usize::MAX {
            return;
        }
        let members: Vec<usize> = self.cover[pick]
            .iter()
            .copied()
            .filter(|&v| available[v])
            .collect();
        // Branch 1..k: take one vertex of the chosen clique.
        for &v in &members {
            let removed = self.take(v, available, clique_live);
            clique_dead[pick] = true;
            self.search(goal, available, clique_live, clique_dead);
            clique_dead[pick] = false;
            self.untake(v, &removed, available, clique_live);
            if self.done() {
                return;
            }
        }
        // Branch k+1: no vertex from this clique.  All its remaining
        // vertices become permanently discarded on this branch.
        for &v in &members {
            available[v] = false;
            clique_live[pick] -= 1;
        }
        clique_dead[pick] = true;
        self.search(goal, available, clique_live, clique_dead);
        clique_dead[pick] = false;
        for &v in &members {
            available[v] = true;
            clique_live[pick] += 1;
        }
    }

    /// Add `v` to the partial coclique: discard its neighbors and bump
    /// their chosen-neighbor counts for the tightness pruning.
    fn take(&mut self, v: usize, available: &mut [bool], clique_live: &mut [u32]) -> Vec<usize> {
        self.current.push(v);
        available[v] = false;
        clique_live[self.cover_of[v] as usize] -= 1;
        let mut removed = Vec::new();
        let row = std::mem::take(&mut self.rows[v]);
        for (wi, &w) in row.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if u >= self.nv {
                    break;
                }
                self.chosen_neighbors[u] += 1;
                if let Some(limit) = self.tight_limit {
                    if self.chosen_neighbors[u] == limit + 1 {
                        self.violations += 1;
                    }
                }
                if available[u] {
                    available[u] = false;
                    clique_live[self.cover_of[u] as usize] -= 1;
                    removed.push(u);
                }
            }
        }
        self.rows[v] = row;
        removed
    }

    fn untake(&mut self, v: usize, removed: &[usize], available: &mut [bool], clique_live: &mut [u32]) {
        for &u in removed {
            available[u] = true;
            clique_live[self.cover_of[u] as usize] += 1;
        }
        let row = std::mem::take(&mut self.rows[v]);
        for (wi, &w) in row.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let u = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if u >= self.nv {
                    break;
                }
                if let Some(limit) = self.tight_limit {
                    if self.chosen_neighbors[u] == limit + 1 {
                        self.violations -= 1;
                    }
                }
                self.chosen_neighbors[u] -= 1;
            }
        }
        self.rows[v] = row;
        available[v] = true;
        clique_live[self.cover_of[v] as usize] += 1;
        self.current.pop();
    }
}

const SET_FORMAT_VERSION: u32 = 1;

/// Export: header `q d version count`, then one chamber index per line.
pub fn write_set<W: Write>(set: &EkrSet, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "{} {} {} {}", set.q, set.d, SET_FORMAT_VERSION, set.len())?;
    for i in set.members.iter() {
        writeln!(sink, "{i}")?;
    }
    Ok(())
}

/// Import a set written by [`write_set`] for the given universe.
pub fn read_set<R: BufRead>(universe: &ChamberUniverse, source: R) -> Result<EkrSet, Error> {
    let mut lines = source.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::BadParameter("empty set file".into()))?
        .map_err(|e| Error::BadParameter(e.to_string()))?;
    let fields: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::BadParameter(format!("bad header: {header}"))))
        .collect::<Result<_, _>>()?;
    let [q, d, version, count] = fields[..] else {
        return Err(Error::BadParameter(format!("bad header: {header}")));
    };
    if version != SET_FORMAT_VERSION as u64 {
        return Err(Error::BadParameter(format!("unsupported set format version {version}")));
    }
    if q != universe.field.q as u64 || d as usize != universe.d {
        return Err(Error::UniverseMismatch);
    }
    let mut members = BitSet::new(universe.len());
    let mut seen = 0u64;
    for line in lines {
        let line = line.map_err(|e| Error::BadParameter(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let idx: usize = line
            .parse()
            .map_err(|_| Error::BadParameter(format!("bad index line: {line}")))?;
        if idx >= universe.len() {
            return Err(Error::BadParameter(format!("index {idx} out of range")));
        }
        members.insert(idx);
        seen += 1;
    }
    if seen != count {
        return Err(Error::BadParameter(format!(
            "header promised {count} indices, found {seen}"
        )));
    }
    Ok(EkrSet {
        q,
        d: d as usize,
        members,
        provenance: None,
    })
}
