//! The five commands. Each returns a [`Report`]; a report with failures maps to a
//! non-zero exit code but is still written.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use pauli_duality_core::circuits::{self, conjugate};
use pauli_duality_core::gen_stabilizer::{self, verify_lemma1, Lemma1Params, LEMMA1_TOL};
use pauli_duality_core::models::{self, dual_target, DualityReport, DUALITY_TOL};
use pauli_duality_core::scan;
use pauli_duality_core::{Complex64, DenseState, Error, Family, ModelSpec, PauliSum};

use crate::config::RunConfig;
use crate::formats::{self, float};
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    VerifyDuality,
    SolveZxz,
    EntropySweep,
    EnergyScan,
    FixedState,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyDuality => "verify-duality",
            Command::SolveZxz => "solve-zxz",
            Command::EntropySweep => "entropy-sweep",
            Command::EnergyScan => "energy-scan",
            Command::FixedState => "fixed-state",
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().context("building worker pool")?;
    pool.install(|| match cmd {
        Command::VerifyDuality => verify_duality(cfg),
        Command::SolveZxz => solve_zxz(cfg),
        Command::EntropySweep => entropy_sweep(cfg),
        Command::EnergyScan => energy_scan(cfg),
        Command::FixedState => fixed_state(cfg),
    })
}

fn grid<T: Clone>(v: &Option<Vec<T>>, default: &[T]) -> Vec<T> {
    v.clone().unwrap_or_else(|| default.to_vec())
}

fn residual_text(h: &PauliSum) -> String {
    h.iter().map(|(p, c)| format!("{} {} {}", float(c.re), float(c.im), p.letters())).collect::<Vec<_>>().join("; ")
}

pub fn verify_duality(cfg: &RunConfig) -> Result<Report> {
    let family = cfg.family.unwrap_or(Family::Ising);
    if !matches!(family, Family::Ising | Family::Cluster | Family::ClusterIsing) {
        bail!("verify-duality supports ising, cluster and cluster-ising, not {family}");
    }
    let tol = cfg.tol_or(DUALITY_TOL);
    let circuit_text = cfg
        .circuit
        .as_ref()
        .map(|p| std::fs::read_to_string(p).with_context(|| format!("reading circuit {}", p.display())))
        .transpose()?;

    let mut specs = Vec::new();
    for &len in &grid(&cfg.lens, &[4, 6, 8]) {
        for &b in &grid(&cfg.bs, &[1.0]) {
            match family {
                Family::ClusterIsing => {
                    for &j1 in &grid(&cfg.j1s, &[1.0]) {
                        for &j2 in &grid(&cfg.j2s, &[1.0]) {
                            specs.push(ModelSpec::cluster_ising(len, j1, j2, b));
                        }
                    }
                }
                Family::Cluster => {
                    for &j in &grid(&cfg.js, &[1.0]) {
                        specs.push(ModelSpec::cluster(len, j, b));
                    }
                }
                _ => {
                    for &j in &grid(&cfg.js, &[1.0]) {
                        specs.push(ModelSpec::ising(len, j).with_field(b));
                    }
                }
            }
        }
    }
    let specs: Vec<ModelSpec> = specs.into_iter().map(|s| s.with_boundary(cfg.boundary)).collect();

    let results: Vec<Result<DualityReport>> = specs
        .par_iter()
        .map(|spec| {
            spec.validate()?;
            let circuit = match &circuit_text {
                Some(t) => formats::parse_circuit(t, Some(spec.len))?,
                None => circuits::fig2_staircase(spec.len)?,
            };
            let h = models::build(spec)?;
            Ok(DualityReport::compare(conjugate(&circuit, &h)?, dual_target(spec)?, tol)?)
        })
        .collect();

    let mut report = Report::new(
        "verify-duality",
        &[
            "family",
            "L",
            "J",
            "J1",
            "J2",
            "B",
            "conjugated_terms",
            "target_terms",
            "residual_terms",
            "max_residual",
            "bulk_mismatch",
            "boundary_only",
            "residual",
            "pass",
        ],
    );
    let exact_expected = family != Family::ClusterIsing;
    for (spec, res) in specs.iter().zip(results) {
        let (j, j1, j2) = match family {
            Family::ClusterIsing => (None, Some(spec.j1), Some(spec.j2)),
            _ => (Some(spec.j), None, None),
        };
        let label = match family {
            Family::ClusterIsing => format!("{family} L={} J1={} J2={} B={}", spec.len, spec.j1, spec.j2, spec.b),
            _ => format!("{family} L={} J={} B={}", spec.len, spec.j, spec.b),
        };
        let r = match res {
            Ok(r) => r,
            Err(e) => {
                report.failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let pass = if exact_expected { r.max_residual <= tol } else { r.boundary_only && r.bulk_mismatch <= tol };
        if !pass {
            report.failures.push(format!("{label}: max residual {}", float(r.max_residual)));
        }
        report.push(vec![
            family.name().into(),
            spec.len.into(),
            j.into(),
            j1.into(),
            j2.into(),
            spec.b.into(),
            r.conjugated.num_terms().into(),
            r.target.num_terms().into(),
            r.residual_terms().into(),
            r.max_residual.into(),
            r.bulk_mismatch.into(),
            r.boundary_only.into(),
            residual_text(&r.residual).into(),
            pass.into(),
        ]);
    }
    report.note("points", specs.len());
    report.note("tol", tol);
    report.note("circuit", if cfg.circuit.is_some() { "file" } else { "staircase" });
    Ok(report)
}

const LEMMA_CHECKS: [(&str, &str); 8] = [
    ("block_sum", "block_residual"),
    ("plus_eigen", "plus_residual"),
    ("energy", "energy_rel_error"),
    ("eigen_equations", "eigen_residual"),
    ("fixed_vs_ground", "infidelity_fixed"),
    ("remark1_vs_ground", "infidelity_rotated"),
    ("t_state_vs_ground", "infidelity_t_state"),
    ("unique_ground", "ground_degeneracy"),
];

pub fn solve_zxz(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol_or(LEMMA1_TOL);
    let mut columns = vec!["N", "J", "B", "lambda", "E0_analytic", "E0_numeric", "E0_block_sum"];
    columns.extend(LEMMA_CHECKS.iter().map(|c| c.1));
    columns.push("pass");
    let mut table = Report::new("solve-zxz", &columns);
    let mut points = Vec::new();
    for &n in &grid(&cfg.ns, &[4, 6, 8]) {
        for &j in &grid(&cfg.js, &[1.0]) {
            for &b in &grid(&cfg.bs, &[0.0, 0.5, 1.0, 2.0]) {
                match Lemma1Params::new(n, j, b) {
                    Ok(p) => points.push(p),
                    Err(Error::DegenerateParameters(msg)) => {
                        let w = format!("skipped N={n} J={j} B={b}: {msg}");
                        eprintln!("warning: {w}");
                        table.warnings.push(w);
                    }
                    Err(e) => table.failures.push(format!("N={n} J={j} B={b}: {e}")),
                }
            }
        }
    }
    let results: Vec<_> = points.par_iter().map(|p| verify_lemma1(p, &cfg.backend, tol)).collect();

    for (p, res) in points.iter().zip(results) {
        let label = format!("N={} J={} B={}", p.n, p.j, p.b);
        let r = match res {
            Ok(r) => r,
            Err(e) => {
                table.failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        if !r.passed() {
            table.failures.push(format!("{label}: {}", r.failures().join(", ")));
        }
        let mut row: Vec<Cell> = vec![
            p.n.into(),
            p.j.into(),
            p.b.into(),
            r.lambda.into(),
            r.analytic_energy.into(),
            r.numeric_energy.into(),
            r.block_energy_sum.into(),
        ];
        row.extend(LEMMA_CHECKS.iter().map(|(name, _)| match *name {
            "unique_ground" => r.ground_degeneracy.into(),
            _ => r.check(name).map(|c| c.value).into(),
        }));
        row.push(r.passed().into());
        table.push(row);
    }
    table.note("points", points.len());
    table.note("skipped", table.warnings.len());
    table.note("tol", tol);
    Ok(table)
}

pub fn entropy_sweep(cfg: &RunConfig) -> Result<Report> {
    let ns = grid(&cfg.ns, &[8]);
    let js = grid(&cfg.js, &[1.0]);
    if ns.len() != 1 || js.len() != 1 {
        bail!("entropy-sweep takes a single N and a single J");
    }
    let (n, j) = (ns[0], js[0]);
    if j == 0.0 {
        bail!("entropy-sweep needs J != 0 to form B/J");
    }
    let ratios: Vec<f64> = match &cfg.bs {
        Some(bs) => bs.iter().map(|b| b / j).collect(),
        None => scan::default_entropy_grid(),
    };
    let results: Vec<_> = ratios.par_iter().map(|&r| gen_stabilizer::lemma1_entropy(n, r, &cfg.backend)).collect();
    let mut report = Report::new("entropy-sweep", &["B_over_J", "lambda", "single_site_entropy_bits"]);
    let mut values = Vec::new();
    for (&r, res) in ratios.iter().zip(results) {
        match res {
            Ok((lambda, s)) => {
                values.push(s);
                report.push(vec![r.into(), lambda.into(), s.into()]);
            }
            Err(e) => report.failures.push(format!("B/J={r}: {e}")),
        }
    }
    report.note("N", n);
    report.note("points", values.len());
    report.note("entropy_first", values.first().copied());
    report.note("entropy_last", values.last().copied());
    report.note("entropy_min", values.iter().copied().reduce(f64::min));
    report.note("entropy_max", values.iter().copied().reduce(f64::max));
    report.note("strictly_decreasing", values.windows(2).all(|w| w[1] < w[0]));
    Ok(report)
}

pub fn energy_scan(cfg: &RunConfig) -> Result<Report> {
    let js = grid(&cfg.js, &[1.0, 1.5, 2.0, 3.0]);
    let mut lens = grid(&cfg.lens, &[4, 6, 8, 10]);
    lens.sort_unstable();
    let slack = cfg.tol_or(1e-12);
    let mut report =
        Report::new("energy-scan", &["J", "L", "E0", "E0_dual", "e_per_site", "delta", "gap", "gap_formula"]);
    for &j in &js {
        if j == 0.0 || !j.is_finite() {
            // same check and message as the library scan
            let e = scan::energy_point(j, 2, &cfg.backend).err().map(|e| e.to_string()).unwrap_or_default();
            report.failures.push(format!("rejected J={j}: {e}"));
        }
    }
    if !report.passed() {
        return Ok(report);
    }
    let points: Vec<(usize, f64)> = lens.iter().flat_map(|&l| js.iter().map(move |&j| (l, j))).collect();
    let rows: Vec<_> = points.par_iter().map(|&(l, j)| scan::energy_point(j, l, &cfg.backend)).collect();
    let mut ok_rows = Vec::new();
    for (&(l, j), r) in points.iter().zip(rows) {
        match r {
            Ok(r) => ok_rows.push(r),
            Err(e) => report.failures.push(format!("J={j} L={l}: {e}")),
        }
    }
    for r in &ok_rows {
        report.push(vec![
            r.j.into(),
            r.len.into(),
            r.e0.into(),
            r.e0_dual.into(),
            r.e_per_site.into(),
            r.delta.into(),
            r.gap.into(),
            r.gap_formula.into(),
        ]);
    }
    for &j in &js {
        let one: Vec<_> = ok_rows.iter().copied().filter(|r| r.j == j).collect();
        if !scan::delta_non_increasing(&one, slack) {
            report.failures.push(format!("J={j}: delta increases with L"));
        }
    }
    report.note("non_increasing", report.passed());
    report.note("slack", slack);
    Ok(report)
}

pub fn fixed_state(cfg: &RunConfig) -> Result<Report> {
    let path = cfg.generators.as_ref().context("fixed-state needs a generator file")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading generators {}", path.display()))?;
    let gens = formats::parse_generator_set(&text)?;
    let tol = cfg.tol_or(LEMMA1_TOL);
    let be = &cfg.backend;
    let check = gens.check(be)?;
    let mut report = Report::new("fixed-state", &["index", "basis", "re", "im", "probability"]);
    report.note("L", gens.len());
    report.note("commuting", check.commuting);
    report.note("independent", check.independent);
    report.note("fixed_dim", check.fixed_dim);
    if !check.commuting {
        report.failures.push("generators do not commute".into());
    }
    if !check.independent {
        report.failures.push("generators are not independent".into());
    }
    let state = match gen_stabilizer::fixed_state(&gens, be) {
        Ok(s) => s,
        Err(e) => {
            report.failures.push(e.to_string());
            return Ok(report);
        }
    };
    let state = fix_phase(&state)?;
    let residual = gens.max_residual(&state, be)?;
    if residual > tol {
        report.failures.push(format!("eigen residual {} above {}", float(residual), float(tol)));
    }
    report.note("max_eigen_residual", residual);
    report.note("site1_entropy_bits", be.local_entropy(&state, &[0])?);
    let l = gens.len();
    for (i, a) in state.amplitudes().iter().enumerate() {
        report.push(vec![i.into(), format!("{i:0l$b}").into(), a.re.into(), a.im.into(), a.norm_sqr().into()]);
    }
    Ok(report)
}

/// Rotate the global phase so the first amplitude of largest modulus is real positive.
fn fix_phase(s: &DenseState) -> Result<DenseState> {
    let amps = s.amplitudes();
    let top = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let pivot = amps.iter().find(|a| a.norm() >= top * (1.0 - 1e-9)).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let rot = pivot.conj() / pivot.norm();
    Ok(DenseState::from_amplitudes(s.sites(), amps.iter().map(|a| a * rot).collect())?)
}
