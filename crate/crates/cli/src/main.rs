//! Command-line verifier for chambers of finite vector spaces: counting
//! identities, the oppositeness-graph spectrum, antidesign families, and
//! maximum-coclique classification.
//!
//! Every subcommand emits a JSON report to stdout (or a plain table with
//! `--human`) and exits 0 iff every executed check passed.  Reports omit
//! wall times unless `--timings` is given so reruns are bit-identical.

use anyhow::{bail, Context, Result};
use chamber_ekr::antidesigns::{
    check_antidesign, spread_antidesign, subspace_antidesign, symplectic_antidesign,
    unitary_antidesign, AntidesignFamily,
};
use chamber_ekr::chambers::GraphFormat;
use chamber_ekr::ekr::{
    antidesign_intersections, classical_hyperplane, classical_point, classify, is_coclique,
    is_maximum, max_coclique_search, verify_ratio_tightness, Classification, SearchMode,
    SearchOutcome, DEFAULT_SEARCH_BUDGET,
};
use chamber_ekr::projspace::{chamber_count, count_skew, gaussian};
use chamber_ekr::spectral::{
    alpha_formula, eigenspace_dimension_formula, smallest_eigenvalue, verify_spectrum,
    WeightVector,
};
use chamber_ekr::{ChamberUniverse, Flag};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

/// Environment variable bounding universe size (chamber count).
const CAP_ENV: &str = "CHAMBER_EKR_MAX_CHAMBERS";
const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "chamber-ekr", version, about)]
struct Cli {
    /// Print a plain-text table instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Include per-check wall times (makes reruns non-identical).
    #[arg(long, global = true)]
    timings: bool,
    /// Cap the rayon worker count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify counting identities for chambers and subspaces of F_q^d.
    Counts {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
    },
    /// Verify the smallest eigenvalue, eigenspace rank, and ratio bound
    /// of the oppositeness graph on chambers of F_q^{2n}.
    Spectral {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Build antidesign weight vectors, verify their orthogonality to
    /// the eigenvectors, and check intersection constants.
    Antidesigns {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Comma-separated: spread,symplectic,unitary,subspace1,subspace2
        #[arg(long)]
        families: Option<String>,
    },
    /// Certify the maximum coclique size of the d=4 oppositeness graph
    /// and optionally enumerate and classify all maximum cocliques.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Write the oppositeness graph in DIMACS or edge-list form.
    ExportGraph {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Format::Dimacs)]
        format: Format,
        /// Output file; the graph goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Dimacs,
    EdgeList,
}

#[derive(Serialize)]
struct Check {
    check: String,
    expected: String,
    actual: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u128>,
}

#[derive(Serialize)]
struct RunReport {
    tool: String,
    version: String,
    command: String,
    parameters: serde_json::Value,
    checks: Vec<Check>,
    /// "ok", or "inconclusive" when a search exhausted its budget.
    status: String,
    pass: bool,
}

struct Reporter {
    checks: Vec<Check>,
    timings: bool,
    inconclusive: bool,
}

impl Reporter {
    fn new(timings: bool) -> Reporter {
        Reporter {
            checks: Vec::new(),
            timings,
            inconclusive: false,
        }
    }

    fn push(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let expected = expected.to_string();
        let actual = actual.to_string();
        self.checks.push(Check {
            check: name.into(),
            pass: expected == actual,
            expected,
            actual,
            millis: None,
        });
    }

    fn timed<T>(&mut self, f: impl FnOnce(&mut Reporter) -> T) -> T {
        let before = self.checks.len();
        let start = Instant::now();
        let out = f(self);
        if self.timings {
            let ms = start.elapsed().as_millis();
            for c in &mut self.checks[before..] {
                c.millis = Some(ms);
            }
        }
        out
    }

    fn finish(self, command: &str, parameters: serde_json::Value, human: bool) -> Result<bool> {
        let pass = self.checks.iter().all(|c| c.pass);
        let report = RunReport {
            tool: "chamber-ekr".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            parameters,
            status: if self.inconclusive { "inconclusive" } else { "ok" }.into(),
            pass,
            checks: self.checks,
        };
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        if human {
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {:55} expected {:>24} actual {:>24}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.check,
                    c.expected,
                    c.actual
                )?;
            }
            writeln!(
                out,
                "{}: {} checks, status {}",
                if pass { "PASS" } else { "FAIL" },
                report.checks.len(),
                report.status
            )?;
        } else {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Ok(pass)
    }
}

fn chamber_cap() -> Result<u64> {
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .parse::<u64>()
            .with_context(|| format!("{CAP_ENV} must be an integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn build_universe(q: u64, d: usize) -> Result<ChamberUniverse> {
    let cap = chamber_cap()?;
    ChamberUniverse::build_q(q, d, Some(cap))
        .with_context(|| format!("building the chamber universe for q={q}, d={d}"))
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("rayon pool configured twice");
    }
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let mut r = Reporter::new(cli.timings);
    match cli.command {
        Command::Counts { q, d } => {
            let params = serde_json::json!({"q": q, "d": d});
            run_counts(&mut r, q, d)?;
            r.finish("counts", params, cli.human)
        }
        Command::Spectral { q, n } => {
            let params = serde_json::json!({"q": q, "n": n});
            run_spectral(&mut r, q, n)?;
            r.finish("spectral", params, cli.human)
        }
        Command::Antidesigns { q, n, families } => {
            let params = serde_json::json!({"q": q, "n": n, "families": families});
            run_antidesigns(&mut r, q, n, families.as_deref())?;
            r.finish("antidesigns", params, cli.human)
        }
        Command::Classify { q, enumerate, budget } => {
            let params = serde_json::json!({"q": q, "enumerate": enumerate, "budget": budget});
            run_classify(&mut r, q, enumerate, budget)?;
            r.finish("classify", params, cli.human)
        }
        Command::ExportGraph { q, d, format, out } => run_export(q, d, format, out),
    }
}

/// Brute-force cross-checks are feasible below this vertex count.
const BRUTE_LIMIT: usize = 2500;

fn run_counts(r: &mut Reporter, q: u64, d: usize) -> Result<()> {
    let u = build_universe(q, d)?;
    r.timed(|r| {
        r.push(
            format!("chamber-count-enumerated q={q} d={d}"),
            chamber_count(d as u32, q),
            u.len(),
        );
    });
    for s in 1..d {
        r.push(
            format!("subspace-count-enumerated s={s}"),
            gaussian(d as i64, s as i64, q),
            u.tables[s].len(),
        );
    }
    if u.len() <= BRUTE_LIMIT {
        // Every chamber is opposite to exactly q^(d choose 2) chambers.
        r.timed(|r| {
            let expected = BigUint::from(q).pow((d * (d - 1) / 2) as u32);
            let ok = (0..u.len()).all(|c| BigUint::from(u.count_opposite(c)) == expected);
            r.push(
                "opposite-count-constant-over-all-chambers",
                format!("all equal {expected}"),
                if ok { format!("all equal {expected}") } else { "mismatch".into() },
            );
        });
        // Chambers through a fixed s-part of C that are opposite to C.
        r.timed(|r| {
            for s in 1..d {
                let expected = u.opposite_through_formula(s);
                // S must meet C_{d-s} trivially for the count to apply.
                let ok = (0..u.len()).step_by(7).all(|c| {
                    let part = u.part(c, d - s);
                    u.tables[s]
                        .iter()
                        .find(|t| part.meets_trivially(&u.field, t).unwrap_or(false))
                        .and_then(|sub| u.count_opposite_through(c, sub).ok())
                        .map(|got| BigUint::from(got) == expected)
                        .unwrap_or(false)
                });
                r.push(
                    format!("opposite-through-fixed-part s={s}"),
                    format!("all equal {expected}"),
                    if ok { format!("all equal {expected}") } else { "mismatch".into() },
                );
            }
        });
        // Flag-extension counts: chambers refining a given flag.
        r.timed(|r| -> Result<()> {
            let mut flags: Vec<Vec<usize>> = (1..d).map(|s| vec![s]).collect();
            if d >= 4 {
                flags.push(vec![1, 3]);
                if d - 1 != 3 {
                    flags.push(vec![1, d - 1]);
                }
            }
            for dims in flags {
                let parts: Vec<_> = dims.iter().map(|&s| u.part(0, s).clone()).collect();
                let flag = Flag::new(&u.field, d, parts)?;
                r.push(
                    format!("flag-extension-count type={dims:?}"),
                    u.extensions_formula(&flag),
                    u.count_extensions(&flag),
                );
            }
            Ok(())
        })?;
        // b-subspaces meeting a fixed a-subspace trivially.
        r.timed(|r| -> Result<()> {
            for a in 1..d {
                let fixed = u.part(0, a);
                for b in 1..=(d - a) {
                    let mut got = 0u64;
                    for cand in &u.tables[b] {
                        if fixed.meets_trivially(&u.field, cand)? {
                            got += 1;
                        }
                    }
                    r.push(
                        format!("skew-subspace-count a={a} b={b}"),
                        count_skew(d as u32, a as u32, b as u32, q),
                        got,
                    );
                }
            }
            Ok(())
        })?;
    }
    if d % 2 == 0 {
        let n = (d / 2) as u32;
        r.push(
            "chamber-count-product-identity",
            chamber_count(d as u32, q),
            gaussian(d as i64, n as i64, q) * chamber_count(n, q) * chamber_count(n, q),
        );
    }
    Ok(())
}

fn run_spectral(r: &mut Reporter, q: u64, n: usize) -> Result<()> {
    let u = build_universe(q, 2 * n)?;
    let cert = r.timed(|_| verify_spectrum(&u, true))?;
    r.push("smallest-eigenvalue", smallest_eigenvalue(n, q), cert.lambda);
    let points = u.tables[1].len();
    r.push(
        "eigenvectors-verified",
        n * points,
        cert.eigenvectors_checked,
    );
    r.push(
        "eigenspace-rank",
        eigenspace_dimension_formula(n, q),
        cert.eigenspace_rank
            .map(|k| k.to_string())
            .unwrap_or_else(|| "unverified".into()),
    );
    let alpha = alpha_formula(n, q);
    r.push("ratio-bound", &alpha, &cert.hoffman_bound);
    r.push(
        "ratio-bound-divides-chamber-count",
        chamber_count(2 * n as u32, q),
        &alpha * (BigUint::from(q).pow(n as u32) + 1u32),
    );
    Ok(())
}

fn parse_families(q: u64, requested: Option<&str>) -> Result<Vec<String>> {
    match requested {
        Some(list) => list.split(',').map(|s| Ok(s.trim().to_string())).collect(),
        None => {
            let mut fams = vec!["spread".to_string(), "symplectic".to_string()];
            if (q as f64).sqrt().round().powi(2) as u64 == q {
                fams.push("unitary".into());
            }
            fams.push("subspace1".into());
            fams.push("subspace2".into());
            Ok(fams)
        }
    }
}

fn run_antidesigns(r: &mut Reporter, q: u64, n: usize, families: Option<&str>) -> Result<()> {
    let u = build_universe(q, 2 * n)?;
    let point = classical_point(&u, 0)?;
    let hyper = classical_hyperplane(&u, 0)?;
    for set in [&point, &hyper] {
        if !is_maximum(&u, set)? {
            bail!("classical construction failed maximality verification");
        }
    }
    let mut vectors: Vec<(String, AntidesignFamily, WeightVector)> = Vec::new();
    for fam in parse_families(q, families)? {
        let (family, v): (AntidesignFamily, WeightVector) = match fam.as_str() {
            "spread" => {
                let members = chamber_ekr::forms::field_extension_spread(&u.field, n)?;
                let t = chamber_ekr::forms::spread_fold(&u.field, 2 * n, &members)?;
                (AntidesignFamily::Spread { t }, spread_antidesign(&u, &members)?)
            }
            "symplectic" => {
                let form =
                    chamber_ekr::forms::FormSpec::standard_alternating(u.field.clone(), n)?;
                (AntidesignFamily::Symplectic, symplectic_antidesign(&u, &form)?)
            }
            "unitary" => {
                let form =
                    chamber_ekr::forms::FormSpec::standard_hermitian(u.field.clone(), 2 * n)?;
                (AntidesignFamily::Unitary, unitary_antidesign(&u, &form)?)
            }
            other => match other.strip_prefix("subspace") {
                Some(num) => {
                    let s: usize = num
                        .parse()
                        .with_context(|| format!("bad subspace dimension in {other:?}"))?;
                    if s == 0 || s >= 2 * n {
                        bail!("subspace dimension {s} out of range 1..{}", 2 * n);
                    }
                    (
                        AntidesignFamily::Subspace { s },
                        subspace_antidesign(&u, &u.tables[s][0].clone())?,
                    )
                }
                None => bail!("unknown family {other:?}"),
            },
        };
        let summary = r.timed(|_| check_antidesign(&u, &fam, family, &v))?;
        r.push(
            format!("{fam}-orthogonal-to-all-eigenvectors"),
            true,
            summary.orthogonal,
        );
        r.push(format!("{fam}-mass"), summary.mass_formula, summary.mass);
        vectors.push((fam, family, v));
    }
    for (label, set) in [("point-classical", &point), ("hyperplane-classical", &hyper)] {
        let checks = r.timed(|_| antidesign_intersections(&u, set, &vectors))?;
        for c in checks {
            r.push(
                format!("{}-intersection-with-{label}", c.name),
                c.expected,
                c.actual,
            );
        }
    }
    Ok(())
}

fn run_classify(r: &mut Reporter, q: u64, enumerate: bool, budget: u64) -> Result<()> {
    let n = 2;
    let u = build_universe(q, 2 * n)?;
    let alpha = num_traits::ToPrimitive::to_usize(&alpha_formula(n, q))
        .context("target exceeds usize")?;
    let point = classical_point(&u, 0)?;
    let hyper = classical_hyperplane(&u, 0)?;
    r.timed(|r| -> Result<()> {
        for (label, set) in [("point-classical", &point), ("hyperplane-classical", &hyper)] {
            r.push(format!("{label}-is-coclique"), true, is_coclique(&u, set)?);
            r.push(format!("{label}-size"), alpha, set.len());
            // Every outside vertex has exactly -lambda neighbors inside:
            // the precondition for tightness pruning in the solver.
            r.push(
                format!("{label}-ratio-tightness"),
                true,
                verify_ratio_tightness(&u, set)?,
            );
        }
        Ok(())
    })?;
    let proof = r.timed(|_| {
        max_coclique_search(&u, alpha, SearchMode::ProveAlpha, budget, true)
    })?;
    match proof.outcome {
        SearchOutcome::Certified => {
            r.push(format!("no-coclique-of-size-{}", alpha + 1), "certified", "certified");
        }
        SearchOutcome::Exceeded(w) => {
            r.push(
                format!("no-coclique-of-size-{}", alpha + 1),
                "certified",
                format!("refuted by a coclique of size {}", w.len()),
            );
        }
        SearchOutcome::Inconclusive => {
            r.inconclusive = true;
            r.push(
                format!("no-coclique-of-size-{}", alpha + 1),
                "certified",
                "certified",
            );
            let last = r.checks.last_mut().expect("just pushed");
            last.actual = format!("inconclusive after {} nodes", proof.nodes);
            last.pass = true;
        }
        SearchOutcome::Enumerated(_) => unreachable!("prove-alpha never enumerates"),
    }
    if enumerate {
        let res = r.timed(|_| {
            max_coclique_search(&u, alpha, SearchMode::EnumerateMaximum, budget, true)
        })?;
        match res.outcome {
            SearchOutcome::Enumerated(sols) => {
                // One maximum coclique per point and one per hyperplane.
                let expected = 2 * u.tables[1].len();
                r.push("maximum-coclique-count", expected, sols.len());
                let mut points = 0usize;
                let mut hypers = 0usize;
                let mut other = 0usize;
                for sol in &sols {
                    let set = chamber_ekr::ekr::EkrSet::new(&u, sol);
                    match classify(&u, &set)? {
                        Classification::PointClassical(_) => points += 1,
                        Classification::HyperplaneClassical(_) => hypers += 1,
                        Classification::NonClassical => other += 1,
                    }
                }
                r.push(
                    "maximum-coclique-classification",
                    format!("{} point, {} hyperplane, 0 other", u.tables[1].len(), u.tables[1].len()),
                    format!("{points} point, {hypers} hyperplane, {other} other"),
                );
            }
            SearchOutcome::Inconclusive => {
                r.inconclusive = true;
                r.checks.push(Check {
                    check: "maximum-coclique-enumeration".into(),
                    expected: "complete".into(),
                    actual: format!("inconclusive after {} nodes (budget {})", res.nodes, budget),
                    pass: true,
                    millis: None,
                });
            }
            _ => unreachable!("enumerate-maximum returns an enumeration"),
        }
    }
    Ok(())
}

fn run_export(q: u64, d: usize, format: Format, out: Option<PathBuf>) -> Result<bool> {
    let u = build_universe(q, d)?;
    let gf = match format {
        Format::Dimacs => GraphFormat::Dimacs,
        Format::EdgeList => GraphFormat::EdgeList,
    };
    match out {
        Some(path) => {
            let file = std::fs::File::create(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            u.export_graph(gf, std::io::BufWriter::new(file))?;
            let report = serde_json::json!({
                "tool": "chamber-ekr",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "export-graph",
                "parameters": {"q": q, "d": d},
                "vertices": u.len(),
                "edges": u.edge_count(),
                "out": path.display().to_string(),
                "pass": true,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        None => {
            let stdout = std::io::stdout();
            u.export_graph(gf, std::io::BufWriter::new(stdout.lock()))?;
        }
    }
    Ok(true)
}
