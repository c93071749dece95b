//! Computation, output files and the run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use metalfluct_core::casimir::{casimir_force, CasimirConfig, CavitySpec};
use metalfluct_core::constants::{cm_to_um, ConstantsRecord};
use metalfluct_core::heat::{
    heat_spectrum, heat_transfer, log_grid, HeatCavitySpec, HeatConfig, SpectralDifference,
};
use metalfluct_core::materials::ModelTag;
use metalfluct_core::spectra::{te_amplitude_density, tm_amplitude_density, SurfaceState};
use metalfluct_core::table::SweepTable;
use metalfluct_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, ConfigFile, Format, RunConfig};
use crate::Failure;

/// Tables to write plus the per-result metadata for the manifest.
pub struct Outcome {
    pub tables: Vec<(String, SweepTable)>,
    pub results: Value,
    pub summary: Vec<String>,
}

/// Model-major list of (model, gap) pairs, the row order of every gap table.
fn cases(cfg: &RunConfig) -> Vec<(ModelTag, f64)> {
    cfg.models
        .iter()
        .flat_map(|&m| cfg.gaps.iter().map(move |&g| (m, g)))
        .collect()
}

fn heat(cfg: &RunConfig) -> Result<Outcome, Error> {
    let hc = HeatConfig {
        quadrature: cfg.quadrature.unwrap_or_default(),
        points_per_decade: 0,
    };
    let (t1, t2) = (cfg.t1.unwrap_or_default(), cfg.t2.unwrap_or_default());
    let rows = cases(cfg)
        .into_par_iter()
        .map(|(model, gap)| {
            let cavity = HeatCavitySpec::new(cfg.materials[0].clone(), cfg.materials[1].clone(), gap, t1, t2)?;
            heat_transfer(&cavity, model, &hc).map(|r| (gap, r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summary = rows
        .iter()
        .map(|(gap, r)| {
            format!(
                "L = {:.4} um  {:<19}  S = {:.6e} erg/(s cm^2)  (err {:.1e})",
                cm_to_um(*gap),
                r.model.as_str(),
                r.total,
                r.error
            )
        })
        .collect();
    let results = rows
        .iter()
        .map(|(gap, r)| {
            json!({
                "L_um": cm_to_um(*gap),
                "model": r.model,
                "total": r.total,
                "error": r.error,
                "sectors": r.sectors,
                "evaluations": r.evaluations,
            })
        })
        .collect();
    Ok(Outcome {
        tables: vec![(cfg.command.file_stem().into(), SweepTable::heat(&rows))],
        results,
        summary,
    })
}

fn casimir(cfg: &RunConfig) -> Result<Outcome, Error> {
    let cc = CasimirConfig {
        quadrature: cfg.quadrature.unwrap_or_default(),
        matsubara: cfg.matsubara.unwrap_or_default(),
    };
    let t = cfg.temperature.unwrap_or_default();
    let rows = cases(cfg)
        .into_par_iter()
        .map(|(model, gap)| {
            let cavity = CavitySpec::new(cfg.materials[0].clone(), cfg.materials[1].clone(), gap, t)?;
            casimir_force(&cavity, model, &cc)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summary = rows
        .iter()
        .map(|f| {
            format!(
                "L = {:.4} um  {:<19}  F = {:.6e} dyn/cm^2  (TE {:.4e}, TM {:.4e}, err {:.1e})",
                cm_to_um(f.gap),
                f.model.as_str(),
                f.total,
                f.te,
                f.tm,
                f.error
            )
        })
        .collect();
    Ok(Outcome {
        tables: vec![(cfg.command.file_stem().into(), SweepTable::casimir(&rows))],
        results: serde_json::to_value(&rows).unwrap_or(Value::Null),
        summary,
    })
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, Error> {
    let q = cfg.quadrature.unwrap_or_default();
    let (lo, hi) = cfg.band.unwrap_or((1e8, 1e16));
    let omegas = log_grid(lo, hi, cfg.points_per_decade.unwrap_or(60));
    if omegas.is_empty() {
        return Err(Error::Config(format!("band [{lo:e}, {hi:e}] holds no grid points")));
    }
    let cavity = HeatCavitySpec::new(
        cfg.materials[0].clone(),
        cfg.materials[1].clone(),
        cfg.gaps[0],
        cfg.t1.unwrap_or_default(),
        cfg.t2.unwrap_or_default(),
    )?;
    let mut table = SweepTable::new(&metalfluct_core::table::SPECTRUM_HEADER);
    let mut per_model = Vec::new();
    for &model in &cfg.models {
        let points = heat_spectrum(&omegas, &cavity, model, &q)?;
        table.extend_spectrum(&points, model);
        per_model.push((model, points));
    }
    let mut tables = vec![(cfg.command.file_stem().to_string(), table)];
    if let [(ModelTag::Impedance, imp), (ModelTag::LifshitzDielectric, lif)] = per_model.as_slice() {
        let diff: Vec<SpectralDifference> = imp
            .iter()
            .zip(lif)
            .map(|(a, b)| SpectralDifference {
                omega: a.omega,
                impedance: a.sectors.te_evanescent,
                lifshitz: b.sectors.te_evanescent,
            })
            .collect();
        tables.push(("te_ew_difference".into(), SweepTable::difference(&diff)));
    }
    Ok(Outcome {
        summary: vec![format!(
            "{} frequencies in [{lo:e}, {hi:e}] rad/s for {} model(s)",
            omegas.len(),
            cfg.models.len()
        )],
        results: json!({ "frequencies": omegas.len(), "models": cfg.models }),
        tables,
    })
}

fn correlations(cfg: &RunConfig) -> Result<Outcome, Error> {
    let surface = SurfaceState::new(cfg.materials[0].clone(), cfg.temperature.unwrap_or_default())?;
    let grid: Vec<(f64, f64)> = cfg
        .omegas
        .iter()
        .flat_map(|&w| cfg.kperps.iter().map(move |&k| (w, k)))
        .collect();
    let rows = grid
        .into_par_iter()
        .map(|(w, k)| {
            let te = te_amplitude_density(w, k, &surface)?.value();
            let tm = tm_amplitude_density(w, k, &surface)?.value();
            Ok([w, k, te, tm])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Outcome {
        summary: vec![format!("{} (omega, kperp) points", rows.len())],
        results: json!({ "points": rows.len(), "cross_correlations": "identically zero" }),
        tables: vec![(cfg.command.file_stem().into(), SweepTable::correlations(&rows))],
    })
}

pub fn compute(cfg: &RunConfig) -> Result<Outcome, Error> {
    match cfg.task {
        Command::HeatTransfer => heat(cfg),
        Command::Casimir => casimir(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Correlations => correlations(cfg),
        Command::Sweep => Err(Error::Config("sweep must name a command".into())),
    }
}

fn write_table(dir: &Path, stem: &str, table: &SweepTable, format: Format) -> Result<PathBuf, Failure> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let text = match format {
        Format::Csv => table.to_csv_string().map_err(|e| Failure::Io(e.to_string()))?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json()).map_err(|e| Failure::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    std::fs::write(&path, text).map_err(io)?;
    Ok(path)
}

/// Runs the computation, writes the tables and always attempts the
/// manifest. Returns the first failure, if any.
pub fn run(cfg: &RunConfig, argv: &[String], file: Option<&ConfigFile>) -> Result<Vec<String>, Failure> {
    let start = Instant::now();
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| Failure::Io(format!("{}: {e}", cfg.out_dir.display())))?;

    let mut outputs = Vec::new();
    let mut results = Value::Null;
    let outcome = compute(cfg).map_err(Failure::Compute).and_then(|o| {
        results = o.results;
        for (stem, table) in &o.tables {
            let path = write_table(&cfg.out_dir, stem, table, cfg.format)?;
            outputs.push(path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
        }
        Ok(o.summary)
    });

    let (status, error) = match &outcome {
        Ok(_) => ("ok", Value::Null),
        Err(f) => ("error", json!({ "exit_code": f.exit_code(), "kind": f.kind(), "message": f.to_string() })),
    };
    let manifest = json!({
        "tool": "metalfluct",
        "version": env!("CARGO_PKG_VERSION"),
        "status": status,
        "argv": argv,
        "config_file": file,
        "settings": cfg.settings,
        "settings_text": cfg.settings_text(),
        "resolved": cfg,
        "constants": ConstantsRecord::current(),
        "wall_time_s": start.elapsed().as_secs_f64(),
        "outputs": outputs,
        "results": results,
        "error": error,
    });
    let path = cfg.out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Io(e.to_string()))? + "\n";
    let written = std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())));
    let summary = outcome?;
    written?;
    Ok(summary)
}
