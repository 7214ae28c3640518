//! The workflows behind the subcommands. Each writes its tables into the output directory.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use trapci::ci::{
    analyze_clusters, assign_states, cluster_density_cut, evaluate_density_cut, Assignment,
    ClusterInfo, SymmetryProbe,
};
use trapci::reference::{
    named_reference_cut, pole_positions, reference_spectrum, scattering_length, ScatteringOptions,
};
use trapci::workflow::{tensor_for, Timings};
use trapci::{
    assemble, enumerate_configurations, one_body_matrices, solve, BasisSet, CiSolution, DensityCut,
    IntegralTensor, MorseParams, ReferenceResult, StateName, TrapParams,
};

use crate::config::RunConfig;
use crate::output::{num, opt_num, Table};
use crate::UsageError;

fn scattering(morse: &MorseParams) -> Result<f64> {
    Ok(scattering_length(morse, &ScatteringOptions::default())?.a_s)
}

fn reference_for(cfg: &RunConfig, morse: &MorseParams) -> Result<Option<ReferenceResult>> {
    if !cfg.trap.has_reference() {
        return Ok(None);
    }
    Ok(Some(reference_spectrum(morse).context("reference")?))
}

/// One solved CI problem with its cluster analysis.
struct Solved {
    solution: CiSolution,
    clusters: Vec<ClusterInfo>,
    timings: Timings,
}

fn solve_with(
    cfg: &RunConfig,
    basis: &BasisSet,
    trap: &TrapParams,
    tensor: Option<&IntegralTensor>,
) -> Result<Solved> {
    let t0 = Instant::now();
    let one = one_body_matrices(basis, trap);
    let space = enumerate_configurations(basis.len()).context("assembly")?;
    let matrices = assemble(&space, &one, tensor).context("assembly")?;
    let t1 = Instant::now();
    let solution = solve(&space, &matrices, cfg.solver.lindep).context("solve")?;
    let t2 = Instant::now();
    let probe = SymmetryProbe::new(basis, &solution.space).ok();
    let e_max = solution.energies.first().copied().unwrap_or(0.0) + cfg.spectrum_window;
    let clusters = analyze_clusters(
        &solution,
        probe.as_ref(),
        &matrices.s,
        cfg.solver.degeneracy_tol,
        e_max,
    );
    Ok(Solved {
        solution,
        clusters,
        timings: Timings {
            integrals: Default::default(),
            assembly: t1 - t0,
            solve: t2 - t1,
        },
    })
}

fn build_tensor(cfg: &RunConfig, basis: &BasisSet, morse: &MorseParams) -> Result<IntegralTensor> {
    tensor_for(basis, morse, cfg.solver.threshold, cfg.cache_dir.as_deref()).context("integrals")
}

/// Full CI at one depth, integrals included.
fn solve_at(
    cfg: &RunConfig,
    basis: &BasisSet,
    trap: &TrapParams,
    morse: &MorseParams,
) -> Result<(Solved, IntegralTensor)> {
    let t = Instant::now();
    let tensor = build_tensor(cfg, basis, morse)?;
    let integrals = t.elapsed();
    let mut s = solve_with(cfg, basis, trap, Some(&tensor))?;
    s.timings.integrals = integrals;
    Ok((s, tensor))
}

fn l_of_state(clusters: &[ClusterInfo], state: usize) -> Option<(usize, Option<u32>)> {
    clusters
        .iter()
        .find(|c| c.members.contains(&state))
        .map(|c| (c.id, c.l))
}

const SPECTRUM_HEADER: [&str; 7] = [
    "De_hw",
    "as_dho",
    "inv_as",
    "state_index",
    "cluster_id",
    "L_guess",
    "E_hw",
];

fn spectrum_rows(t: &mut Table, de: f64, a_s: f64, s: &Solved) -> Result<()> {
    for c in &s.clusters {
        for &k in &c.members {
            t.row(&[
                num(de),
                num(a_s),
                num(1.0 / a_s),
                k.to_string(),
                c.id.to_string(),
                c.l.map(|l| l.to_string()).unwrap_or_default(),
                num(s.solution.energies[k]),
            ])?;
        }
    }
    Ok(())
}

pub fn scatter(cfg: &RunConfig) -> Result<()> {
    let depths = cfg.scatter.grid.values()?;
    let template = cfg.morse.build(depths[0])?;
    let opts = &cfg.scatter.options;
    let mut t = Table::create(&cfg.output_dir, "scattering.csv", &["De_hw", "as_dho"])?;
    for &de in &depths {
        let r = scattering_length(&template.with_de(de)?, opts)
            .with_context(|| format!("scattering length at De = {de}"))?;
        t.row(&[num(de), num(r.a_s)])?;
    }
    t.finish()?;

    let mut p = Table::create(&cfg.output_dir, "poles.csv", &["pole_index", "De_hw"])?;
    let [lo, hi] = cfg.scatter.grid.bounds()?;
    if hi > lo {
        let search = pole_positions(
            &template,
            [lo, hi],
            cfg.scatter.pole_scan_step,
            cfg.scatter.pole_tol,
            opts,
        )
        .context("pole search")?;
        if let Some(d) = &search.diagnostic {
            log::warn!("{d}");
        }
        for (i, de) in search.poles.iter().enumerate() {
            p.row(&[i.to_string(), num(*de)])?;
        }
    }
    p.finish()?;
    Ok(())
}

pub fn reference(cfg: &RunConfig) -> Result<()> {
    if !cfg.trap.has_reference() {
        return Err(
            UsageError("the reference needs the harmonic trap with omega = 1".into()).into(),
        );
    }
    let depths = cfg.sweep.values()?;
    let mut t = Table::create(
        &cfg.output_dir,
        "reference.csv",
        &["De_hw", "label", "L", "E_hw"],
    )?;
    for de in depths {
        let r = reference_spectrum(&cfg.morse.build(de)?)
            .with_context(|| format!("reference at De = {de}"))?;
        for (name, e) in &r.named {
            t.row(&[num(de), name.to_string(), name.l().to_string(), num(*e)])?;
        }
    }
    t.finish()?;
    Ok(())
}

const ASSIGNMENT_HEADER: [&str; 10] = [
    "De_hw",
    "as_dho",
    "label",
    "L",
    "cluster_id",
    "state_index",
    "E_hw",
    "E_ref_hw",
    "dE_hw",
    "crossing",
];

fn assignment_rows(t: &mut Table, de: f64, a_s: f64, assigned: &[Assignment]) -> Result<()> {
    for a in assigned {
        t.row(&[
            num(de),
            num(a_s),
            a.name.to_string(),
            a.name.l().to_string(),
            a.cluster.to_string(),
            a.state.to_string(),
            num(a.energy),
            num(a.reference),
            num(a.energy - a.reference),
            a.crossing.to_string(),
        ])?;
        if a.crossing {
            log::warn!("De = {de}: {} has a near-degenerate partner", a.name);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CiReport {
    basis: String,
    n_gto: usize,
    n_configurations: usize,
    kept: usize,
    de_hw: f64,
    as_dho: f64,
    threads: usize,
    integral_count: usize,
    nonzero_integrals: usize,
    integrals_s: f64,
    assembly_s: f64,
    solve_s: f64,
    total_s: f64,
    ground_hw: f64,
}

pub fn ci(cfg: &RunConfig) -> Result<()> {
    let basis = cfg.basis.build()?;
    let trap = cfg.trap.build()?;
    let morse = cfg.morse.build(cfg.morse.de)?;
    let a_s = scattering(&morse)?;
    let (s, tensor) = solve_at(cfg, &basis, &trap, &morse)?;
    log::info!(
        "{}: {} configurations, {} kept, ground {:.6} hbar omega",
        basis.name,
        s.solution.space.len(),
        s.solution.kept,
        s.solution.energies[0]
    );
    let de = morse.de;

    let mut t = Table::create(&cfg.output_dir, "spectrum.csv", &SPECTRUM_HEADER)?;
    spectrum_rows(&mut t, de, a_s, &s)?;
    t.finish()?;

    if let Some(r) = reference_for(cfg, &morse)? {
        let mut t = Table::create(&cfg.output_dir, "assignments.csv", &ASSIGNMENT_HEADER)?;
        assignment_rows(
            &mut t,
            de,
            a_s,
            &assign_states(&s.solution, &s.clusters, &r),
        )?;
        t.finish()?;
    }

    let report = CiReport {
        basis: basis.name.clone(),
        n_gto: basis.len(),
        n_configurations: s.solution.space.len(),
        kept: s.solution.kept,
        de_hw: de,
        as_dho: a_s,
        threads: rayon::current_num_threads(),
        integral_count: tensor.len(),
        nonzero_integrals: tensor.values().iter().filter(|v| **v != 0.0).count(),
        integrals_s: s.timings.integrals.as_secs_f64(),
        assembly_s: s.timings.assembly.as_secs_f64(),
        solve_s: s.timings.solve.as_secs_f64(),
        total_s: s.timings.total().as_secs_f64(),
        ground_hw: s.solution.energies[0],
    };
    write_json(&cfg.output_dir, "ci_report.json", &report)
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// CI at every sweep depth from one integral tensor. A failing depth is logged
/// and recorded, and the sweep goes on.
pub fn sweep(cfg: &RunConfig) -> Result<()> {
    let depths = cfg.sweep.values()?;
    let basis = cfg.basis.build()?;
    let trap = cfg.trap.build()?;
    let base = match depths.iter().find(|d| **d > 0.0) {
        Some(&d) => Some(build_tensor(cfg, &basis, &cfg.morse.build(d)?)?),
        None => None,
    };

    let mut spectrum = Table::create(&cfg.output_dir, "spectrum.csv", &SPECTRUM_HEADER)?;
    let mut assigned = Table::create(&cfg.output_dir, "sweep.csv", &ASSIGNMENT_HEADER)?;
    let mut failures = Table::create(&cfg.output_dir, "sweep_errors.csv", &["De_hw", "error"])?;
    let mut failed = 0;
    for &de in &depths {
        let mut step = || -> Result<()> {
            let morse = cfg.morse.build(de)?;
            let a_s = scattering(&morse)?;
            let tensor = match (&base, de > 0.0) {
                (Some(b), true) => Some(b.rescale_de(de)?),
                _ => None,
            };
            let s = solve_with(cfg, &basis, &trap, tensor.as_ref())?;
            spectrum_rows(&mut spectrum, de, a_s, &s)?;
            if let Some(r) = reference_for(cfg, &morse)? {
                assignment_rows(
                    &mut assigned,
                    de,
                    a_s,
                    &assign_states(&s.solution, &s.clusters, &r),
                )?;
            }
            log::info!("De = {de}: ground {:.6}", s.solution.energies[0]);
            Ok(())
        };
        if let Err(e) = step() {
            log::warn!("De = {de} failed: {e:#}");
            failures.row(&[num(de), format!("{e:#}")])?;
            failed += 1;
        }
    }
    spectrum.finish()?;
    assigned.finish()?;
    failures.finish()?;
    if failed > 0 {
        log::warn!("{failed} of {} depths failed", depths.len());
    }
    Ok(())
}

pub fn converge(cfg: &RunConfig) -> Result<()> {
    if cfg.converge.depths.is_empty() {
        return Err(UsageError("no depths to converge".into()).into());
    }
    let trap = cfg.trap.build()?;
    let mut bases: Vec<BasisSet> = (0..=cfg.converge.sigma_max)
        .map(BasisSet::gto_ladder)
        .collect();
    for b in &cfg.converge.extra {
        bases.push(b.build()?);
    }
    let mut t = Table::create(
        &cfg.output_dir,
        "convergence.csv",
        &[
            "N_GTO",
            "De_hw",
            "as_dho",
            "E_hw",
            "E_ref_hw",
            "dE_hw",
            "basis",
            "binding_error_pct",
        ],
    )?;
    for &de in &cfg.converge.depths {
        let morse = cfg.morse.build(de)?;
        let a_s = scattering(&morse)?;
        let e_ref = reference_for(cfg, &morse)?.and_then(|r| r.energy(StateName::Mgs));
        for basis in &bases {
            let (s, _) = solve_at(cfg, basis, &trap, &morse)
                .with_context(|| format!("{} at De = {de}", basis.name))?;
            let e = s.solution.energies[0];
            // binding relative to the non-interacting ground state
            let binding = e_ref.map(|r| 100.0 * (e - r) / (3.0 - r));
            t.row(&[
                basis.len().to_string(),
                num(de),
                num(a_s),
                num(e),
                opt_num(e_ref),
                opt_num(e_ref.map(|r| e - r)),
                basis.name.clone(),
                opt_num(binding),
            ])?;
            log::info!(
                "{} ({} functions), De = {de}: {e:.6}",
                basis.name,
                basis.len()
            );
        }
    }
    t.finish()?;
    Ok(())
}

enum StateRequest {
    Named(StateName),
    Index(usize),
}

fn parse_state(s: &str) -> Result<StateRequest> {
    if let Some(n) = StateName::ALL
        .iter()
        .find(|n| n.as_str().eq_ignore_ascii_case(s))
    {
        return Ok(StateRequest::Named(*n));
    }
    if let Ok(k) = s.parse::<usize>() {
        return Ok(StateRequest::Index(k));
    }
    let names: Vec<&str> = StateName::ALL.iter().map(|n| n.as_str()).collect();
    Err(UsageError(format!(
        "unknown state '{s}'; available: {}, or a CI state index",
        names.join(", ")
    ))
    .into())
}

fn write_cut(dir: &Path, name: &str, cut: &DensityCut) -> Result<()> {
    let mut t = Table::create(dir, name, &["z1_dho", "z2_dho", "density"])?;
    let n = cut.n();
    for i in 0..n {
        for j in 0..n {
            t.row(&[num(cut.z[i]), num(cut.z[j]), num(cut.density[i * n + j])])?;
        }
    }
    t.finish()?;
    Ok(())
}

pub fn density(cfg: &RunConfig) -> Result<()> {
    if cfg.density.states.is_empty() {
        return Err(UsageError("no states requested".into()).into());
    }
    let requests: Vec<(String, StateRequest)> = cfg
        .density
        .states
        .iter()
        .map(|s| Ok((s.clone(), parse_state(s)?)))
        .collect::<Result<_>>()?;
    cfg.density
        .grid
        .validate()
        .map_err(|e| UsageError(e.to_string()))?;
    let basis = cfg.basis.build()?;
    let trap = cfg.trap.build()?;
    let morse = cfg.morse.build(cfg.morse.de)?;
    let reference = reference_for(cfg, &morse)?;
    if reference.is_none()
        && requests
            .iter()
            .any(|(_, r)| matches!(r, StateRequest::Named(_)))
    {
        return Err(UsageError(
            "named states need the harmonic reference; use state indices".into(),
        )
        .into());
    }
    let (s, _) = solve_at(cfg, &basis, &trap, &morse)?;
    let assigned = reference
        .as_ref()
        .map(|r| assign_states(&s.solution, &s.clusters, r))
        .unwrap_or_default();
    let grid = &cfg.density.grid;
    let dir = &cfg.output_dir;

    let mut summary = Table::create(
        dir,
        "density_summary.csv",
        &[
            "label",
            "state_index",
            "cluster_id",
            "E_hw",
            "E_ref_hw",
            "overlap",
        ],
    )?;
    for (label, req) in &requests {
        let (state, cluster, ci_cut, reference_cut, e_ref) = match *req {
            StateRequest::Named(name) => {
                let a = assigned.iter().find(|a| a.name == name).ok_or_else(|| {
                    anyhow::anyhow!(
                        "{name}: no CI cluster with L = {} below the window",
                        name.l()
                    )
                })?;
                let members = &s.clusters[a.cluster].members;
                let (_, ci_cut) = cluster_density_cut(&s.solution, members, &basis, grid)?;
                let ref_cut = named_reference_cut(name, &morse, grid)?;
                (
                    a.state,
                    Some(a.cluster),
                    ci_cut,
                    Some(ref_cut),
                    Some(a.reference),
                )
            }
            StateRequest::Index(k) => {
                if k >= s.solution.n_states() {
                    return Err(UsageError(format!(
                        "state index {k} out of range; {} states available",
                        s.solution.n_states()
                    ))
                    .into());
                }
                let cut = evaluate_density_cut(&s.solution, k, &basis, grid)?;
                (k, l_of_state(&s.clusters, k).map(|c| c.0), cut, None, None)
            }
        };
        let tag = label.to_ascii_uppercase();
        write_cut(dir, &format!("density_{tag}_ci.csv"), &ci_cut)?;
        if let Some(r) = &reference_cut {
            write_cut(dir, &format!("density_{tag}_ref.csv"), r)?;
        }
        let mut cuts = Table::create(
            dir,
            &format!("cuts_{tag}.csv"),
            &[
                "z_dho",
                "ci_diagonal",
                "ci_antidiagonal",
                "ref_diagonal",
                "ref_antidiagonal",
            ],
        )?;
        let (cd, ca) = (ci_cut.diagonal_density(), ci_cut.antidiagonal_density());
        let (rd, ra) = match &reference_cut {
            Some(r) => (Some(r.diagonal_density()), Some(r.antidiagonal_density())),
            None => (None, None),
        };
        for (i, z) in ci_cut.z.iter().enumerate() {
            cuts.row(&[
                num(*z),
                num(cd[i]),
                num(ca[i]),
                opt_num(rd.as_ref().map(|v| v[i])),
                opt_num(ra.as_ref().map(|v| v[i])),
            ])?;
        }
        cuts.finish()?;
        let overlap = reference_cut
            .as_ref()
            .map(|r| ci_cut.overlap(r))
            .transpose()?;
        summary.row(&[
            tag,
            state.to_string(),
            cluster.map(|c| c.to_string()).unwrap_or_default(),
            num(s.solution.energies[state]),
            opt_num(e_ref),
            opt_num(overlap),
        ])?;
    }
    summary.finish()?;
    Ok(())
}
