//! Acceptance suite: one test per acceptance criterion, each printing a
//! single pass/fail line.  Everything is exact integer arithmetic; a
//! failed comparison panics the criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines even on success.

use chamber_ekr::antidesigns::{
    expected_intersection, mass_formula, spread_antidesign, subspace_antidesign,
    symplectic_antidesign, unitary_antidesign, verify_antidesign, AntidesignFamily,
};
use chamber_ekr::chambers::ChamberUniverse;
use chamber_ekr::ekr::{
    classical_hyperplane, classical_point, classify, dual_set, heavy_analysis, is_maximum,
    line_weight_spectrum, lines_pairwise_meet, max_coclique_search, set_inner_product,
    verify_ratio_tightness, weight_profile, Classification, EkrSet, SearchMode, SearchOutcome,
    DEFAULT_SEARCH_BUDGET,
};
use chamber_ekr::forms::{
    enumerate_generators, field_extension_spread, spread_fold, FormSpec,
};
use chamber_ekr::projspace::{chamber_count, count_skew, gaussian};
use chamber_ekr::spectral::{alpha_formula, verify_spectrum, WeightVector};
use chamber_ekr::Flag;
use num_bigint::BigUint;
use std::sync::OnceLock;

fn universe(q: u64, d: usize) -> ChamberUniverse {
    ChamberUniverse::build_q(q, d, None).expect("desk-scale universe")
}

/// The 615195-chamber universe is built once and shared.
fn universe_2_6() -> &'static ChamberUniverse {
    static U: OnceLock<ChamberUniverse> = OnceLock::new();
    U.get_or_init(|| universe(2, 6))
}

fn report(criterion: &str, detail: &str) {
    println!("[acceptance] {criterion}: PASS ({detail})");
}

#[test]
fn criterion_1_counting_suite() {
    // Enumerated chamber counts match the closed form at all four sizes.
    let expected = [(2u64, 4usize, 315usize), (3, 4, 2080), (4, 4, 8925)];
    for (q, d, count) in expected {
        let u = universe(q, d);
        assert_eq!(u.len(), count, "chamber count at q={q} d={d}");
        assert_eq!(BigUint::from(count), chamber_count(d as u32, q));
        for s in 1..d {
            assert_eq!(
                BigUint::from(u.tables[s].len()),
                gaussian(d as i64, s as i64, q),
                "{s}-subspace count at q={q} d={d}"
            );
        }
    }
    let u6 = universe_2_6();
    assert_eq!(u6.len(), 615195);
    assert_eq!(BigUint::from(615195u32), chamber_count(6, 2));
    for s in 1..6 {
        assert_eq!(BigUint::from(u6.tables[s].len()), gaussian(6, s as i64, 2));
    }

    // Brute-force identities at (2,4) and (3,4).
    for q in [2u64, 3] {
        let u = universe(q, 4);
        let opp = BigUint::from(q).pow(6); // q^(4 choose 2)
        assert!((0..u.len()).all(|c| BigUint::from(u.count_opposite(c)) == opp));
        for s in 1..4 {
            let expected = u.opposite_through_formula(s);
            for c in (0..u.len()).step_by(11) {
                let part = u.part(c, 4 - s);
                let sub = u.tables[s]
                    .iter()
                    .find(|t| part.meets_trivially(&u.field, t).unwrap())
                    .expect("some s-subspace skew to C_{d-s}");
                let got = u.count_opposite_through(c, sub).unwrap();
                assert_eq!(BigUint::from(got), expected, "q={q} s={s}");
            }
        }
        // Flag-extension counts for every single-part type and [1,3].
        for dims in [vec![1], vec![2], vec![3], vec![1, 3]] {
            let parts: Vec<_> = dims.iter().map(|&s| u.part(0, s).clone()).collect();
            let flag = Flag::new(&u.field, 4, parts).unwrap();
            assert_eq!(
                BigUint::from(u.count_extensions(&flag)),
                u.extensions_formula(&flag),
                "q={q} type={dims:?}"
            );
        }
        // Subspaces meeting a fixed subspace trivially.
        for a in 1..4usize {
            let fixed = u.part(0, a);
            for b in 1..=(4 - a) {
                let got = u.tables[b]
                    .iter()
                    .filter(|t| fixed.meets_trivially(&u.field, t).unwrap())
                    .count();
                assert_eq!(BigUint::from(got), count_skew(4, a as u32, b as u32, q));
            }
        }
    }
    report(
        "criterion 1 counting suite",
        "chamber counts 315/2080/8925/615195, subspace counts, oppositeness and extension counts exact",
    );
}

#[test]
fn criterion_2_spectral_suite() {
    let expected = [(2u64, 28usize, 63u32), (3, 78, 208), (4, 168, 525)];
    for (q, rank, alpha) in expected {
        let u = universe(q, 4);
        let cert = verify_spectrum(&u, true).expect("eigen-equation holds for every chi vector");
        assert_eq!(cert.lambda, -((q * q * q * q) as i128), "lambda at q={q}");
        assert_eq!(cert.eigenspace_rank, Some(rank), "rank at q={q}");
        assert_eq!(cert.hoffman_bound, BigUint::from(alpha), "bound at q={q}");
        // The bound equals z_4(q) / (q^2 + 1).
        assert_eq!(
            cert.hoffman_bound * (q * q + 1),
            chamber_count(4, q),
            "divisibility at q={q}"
        );
    }
    report(
        "criterion 2 spectral suite",
        "eigenvalue -q^4, ranks 28/78/168, ratio bounds 63/208/525 at q=2,3,4",
    );
}

/// All four antidesign families on a universe, with short names.
fn antidesign_vectors(
    u: &ChamberUniverse,
    n: usize,
    with_unitary: bool,
) -> Vec<(String, AntidesignFamily, WeightVector)> {
    let q = u.field.q as u64;
    let mut out = Vec::new();
    let spread = field_extension_spread(&u.field, n).unwrap();
    let t = spread_fold(&u.field, 2 * n, &spread).unwrap();
    assert_eq!(t, 1, "field-extension spread is 1-fold");
    out.push((
        "spread".into(),
        AntidesignFamily::Spread { t },
        spread_antidesign(u, &spread).unwrap(),
    ));
    let alt = FormSpec::standard_alternating(u.field.clone(), n).unwrap();
    // The symplectic generators form a (q+1)-fold spread: a second
    // spread instance for the orthogonality check.
    let generators = enumerate_generators(&alt, &u.tables[n]).unwrap();
    let t_gen = spread_fold(&u.field, 2 * n, &generators).unwrap();
    assert_eq!(t_gen, q + 1, "generator spread fold");
    out.push((
        "generator-spread".into(),
        AntidesignFamily::Spread { t: t_gen },
        spread_antidesign(u, &generators).unwrap(),
    ));
    out.push((
        "symplectic".into(),
        AntidesignFamily::Symplectic,
        symplectic_antidesign(u, &alt).unwrap(),
    ));
    if with_unitary {
        let herm = FormSpec::standard_hermitian(u.field.clone(), 2 * n).unwrap();
        out.push((
            "unitary".into(),
            AntidesignFamily::Unitary,
            unitary_antidesign(u, &herm).unwrap(),
        ));
    }
    for s in 1..=n {
        out.push((
            format!("subspace-{s}"),
            AntidesignFamily::Subspace { s },
            subspace_antidesign(u, &u.tables[s][0].clone()).unwrap(),
        ));
    }
    out
}

#[test]
fn criterion_3_antidesign_orthogonality() {
    for q in [2u64, 3] {
        let u = universe(q, 4);
        for (name, family, v) in antidesign_vectors(&u, 2, false) {
            assert!(
                verify_antidesign(&u, &v).unwrap(),
                "q={q} family {name} orthogonal to every eigenvector"
            );
            assert_eq!(
                BigUint::from(v.mass().unsigned_abs()),
                mass_formula(family, 2, q),
                "q={q} family {name} mass"
            );
        }
    }
    // Unitary needs a square order: q = 4.
    let u = universe(4, 4);
    let herm = FormSpec::standard_hermitian(u.field.clone(), 4).unwrap();
    let v = unitary_antidesign(&u, &herm).unwrap();
    assert!(verify_antidesign(&u, &v).unwrap(), "unitary orthogonality at q=4");
    assert_eq!(v.mass(), 0, "unitary mass is zero");
    report(
        "criterion 3 antidesign orthogonality",
        "spread (1- and (q+1)-fold), symplectic, subspace s=1,2 at q=2,3; unitary at q=4; all masses exact",
    );
}

#[test]
fn criterion_4_intersection_constants() {
    for q in [2u64, 3] {
        let u = universe(q, 4);
        let vectors = antidesign_vectors(&u, 2, false);
        for set in [classical_point(&u, 0).unwrap(), classical_hyperplane(&u, 0).unwrap()] {
            assert!(is_maximum(&u, &set).unwrap());
            for (name, family, v) in &vectors {
                let actual = set_inner_product(&set, v).unwrap();
                let expected = expected_intersection(*family, 2, q);
                assert_eq!(
                    BigUint::from(actual.unsigned_abs()),
                    expected,
                    "q={q} family {name}"
                );
            }
        }
        // The headline constants.
        let zn2 = chamber_count(2, q).pow(2);
        assert_eq!(expected_intersection(AntidesignFamily::Spread { t: 1 }, 2, q), zn2);
    }
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
        expected_intersection(AntidesignFamily::Subspace { s: 1 }, 2, 2),
        BigUint::from(42u32)
    );
    assert_eq!(
        expected_intersection(AntidesignFamily::Subspace { s: 2 }, 2, 2),
        BigUint::from(36u32)
    );
    // Unitary at q = 4: intersection constant 0 with both classical sets.
    let u = universe(4, 4);
    let herm = FormSpec::standard_hermitian(u.field.clone(), 4).unwrap();
    let v = unitary_antidesign(&u, &herm).unwrap();
    for set in [classical_point(&u, 0).unwrap(), classical_hyperplane(&u, 0).unwrap()] {
        assert!(is_maximum(&u, &set).unwrap());
        assert_eq!(set_inner_product(&set, &v).unwrap(), 0);
    }
    report(
        "criterion 4 intersection constants",
        "spread 9, symplectic 9 and 16, unitary 0, subspace 42 and 36 on both classical families",
    );
}

#[test]
fn criterion_5_weight_analysis() {
    let u = universe(2, 4);
    let point_set = classical_point(&u, 0).unwrap();
    let hyper_set = classical_hyperplane(&u, 0).unwrap();
    for set in [&point_set, &hyper_set] {
        // The weight identity for every subspace of dimension 1..3; the
        // dual route handles s = 3 internally.
        for s in 1..=3usize {
            for sub in &u.tables[s] {
                let profile = weight_profile(&u, set, sub).unwrap();
                assert!(profile.identity_ok, "identity at s={s}");
                assert!(profile.classification_ok, "heavy/light gap at s={s}");
            }
        }
    }
    // Dual route consistency: the s=3 profile equals the dual set's s=1.
    let dual = dual_set(&u, &point_set).unwrap();
    assert!(is_maximum(&u, &dual).unwrap());

    // Heavy 1-subspaces of a point-classical set: exactly the point.
    let h1 = heavy_analysis(&u, &point_set, 1).unwrap();
    assert_eq!(h1.heavy, vec![0u32], "heavy points = {{P}}");
    assert!(h1.criterion_ok && h1.within_bound);
    // Heavy 2-subspaces: the 7 lines through P, pairwise meeting, at
    // the bound gaussian(3,1,2) = 7.
    let h2 = heavy_analysis(&u, &point_set, 2).unwrap();
    assert_eq!(h2.heavy.len(), 7);
    let p = &u.tables[1][0];
    for &line in &h2.heavy {
        assert!(u.tables[2][line as usize].contains(&u.field, p));
    }
    assert!(h2.pairwise_meet && h2.criterion_ok);
    assert_eq!(h2.bound, gaussian(3, 1, 2));
    assert!(h2.within_bound);
    assert_eq!(BigUint::from(h2.heavy.len()), h2.bound, "bound is tight");
    report(
        "criterion 5 weight analysis",
        "weight identity on all subspaces of both classical sets; heavy = {P} and the 7 lines through P",
    );
}

#[test]
fn criterion_6_line_structure() {
    for q in [2u64, 3] {
        let u = universe(q, 4);
        for set in [classical_point(&u, 0).unwrap(), classical_hyperplane(&u, 0).unwrap()] {
            let lw = line_weight_spectrum(&u, &set).unwrap();
            assert!(lw.spectrum_ok, "spectrum within the allowed set at q={q}");
            let full = (q + 1) * (q + 1);
            assert!(
                lw.spectrum.iter().all(|&w| w == 0 || w == full),
                "classical spectrum is {{0, (q+1)^2}} at q={q}, got {:?}",
                lw.spectrum
            );
            assert!(lw.pi_lines.is_empty() && lw.p_lines.is_empty());
            assert!(lines_pairwise_meet(&u, &set).unwrap(), "q={q}");
        }
    }
    report(
        "criterion 6 line structure",
        "classical line spectra {0,(q+1)^2} and pairwise-meeting member lines at q=2,3",
    );
}

#[test]
fn criterion_7_full_classification_q2() {
    let u = universe(2, 4);
    // Precondition for tightness pruning: ratio tightness on both
    // classical families.
    for set in [classical_point(&u, 0).unwrap(), classical_hyperplane(&u, 0).unwrap()] {
        assert!(verify_ratio_tightness(&u, &set).unwrap());
    }
    let res = max_coclique_search(&u, 63, SearchMode::EnumerateMaximum, DEFAULT_SEARCH_BUDGET, true)
        .unwrap();
    match res.outcome {
        SearchOutcome::Enumerated(sols) => {
            assert_eq!(sols.len(), 30, "maximum cocliques of the 315-vertex graph");
            let mut points = 0;
            let mut hypers = 0;
            for sol in &sols {
                let set = EkrSet::new(&u, sol);
                assert!(is_maximum(&u, &set).unwrap());
                match classify(&u, &set).unwrap() {
                    Classification::PointClassical(_) => points += 1,
                    Classification::HyperplaneClassical(_) => hypers += 1,
                    Classification::NonClassical => panic!("non-classical maximum coclique"),
                }
            }
            assert_eq!((points, hypers), (15, 15));
            report(
                "criterion 7 full classification q=2",
                "30 maximum cocliques enumerated: 15 point-classical, 15 hyperplane-classical",
            );
        }
        SearchOutcome::Inconclusive => {
            // Fallback acceptance: certify alpha and report inconclusive,
            // not failed.
            let proof =
                max_coclique_search(&u, 63, SearchMode::ProveAlpha, DEFAULT_SEARCH_BUDGET, true)
                    .unwrap();
            assert!(matches!(proof.outcome, SearchOutcome::Certified));
            println!(
                "[acceptance] criterion 7 full classification q=2: INCONCLUSIVE \
                 (budget exhausted after {} nodes; alpha = 63 certified, ratio tightness verified)",
                res.nodes
            );
        }
        other => panic!("unexpected enumeration outcome {other:?}"),
    }
}

#[test]
fn criterion_8_streaming_n3() {
    let u = universe_2_6();
    let set = classical_point(u, 0).unwrap();
    // alpha(Gamma_6(2)) = 68355 equals the classical construction size.
    assert_eq!(alpha_formula(3, 2), BigUint::from(68355u32));
    assert_eq!(set.len(), 68355);
    // Subspace antidesign s=1 against the point-classical set:
    // 4 * z_1 * z_5 = 39060.
    let v = subspace_antidesign(u, &u.tables[1][0].clone()).unwrap();
    let got = set_inner_product(&set, &v).unwrap();
    assert_eq!(got, 39060);
    assert_eq!(
        expected_intersection(AntidesignFamily::Subspace { s: 1 }, 3, 2),
        BigUint::from(39060u32)
    );
    report(
        "criterion 8 streaming n=3",
        "classical size 68355 matches the bound formula; subspace intersection 39060 exact",
    );
}
