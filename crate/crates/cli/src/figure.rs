use rayon::prelude::*;

use capcon_core::dc_search::{dc_capacity, dc_hierarchy_row, with_uniform_weights, DcChannel, DcSearch, DcVariant};
use capcon_core::dephasing::{avg_equiprob_capacity, strict_equiprob_capacity, strict_optimal_capacity};
use capcon_core::noiseless::capacity_curve;
use capcon_core::{Constraint, Dimension, Probabilities};

use crate::config::Settings;
use crate::error::{invalid, CliError, CliResult};
use crate::output::Table;

pub const FIGURES: [&str; 6] = ["fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b"];

const DC_DEPH_S: &str = "C^DC_{E}_S(deph_1/2)";
const DC_DEPH_S_EQ: &str = "~C^DC_{E}_S(deph_1/2)";
const DEPH_S: &str = "C_{E}_S(deph_1/2)";
const DEPH_S_EQ: &str = "~C_{E}_S(deph_1/2)";

const FIG2_DIMS: [Dimension; 5] = [
    Dimension::Finite(2),
    Dimension::Finite(3),
    Dimension::Finite(4),
    Dimension::Finite(8),
    Dimension::Infinite,
];
const FIG3A_ENERGIES: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
const FIG3B_ENERGIES: [f64; 4] = [0.3, 0.5, 0.7, 1.0];

fn default_resolution(name: &str) -> usize {
    match name {
        "fig2" => 50,
        "fig3a" | "fig3b" => 21,
        "fig4a" => 9,
        _ => 10,
    }
}

/// Horizontal axis for each figure. Energies exclude 0; fig4a stays
/// strictly inside (0, ½).
pub fn axis(name: &str, n: usize) -> CliResult<Vec<f64>> {
    let k = n as f64;
    Ok(match name {
        "fig1" | "fig4b" => (1..=n).map(|i| i as f64 / k).collect(),
        "fig2" => (1..=n).map(|i| 0.5 * i as f64 / k).collect(),
        "fig3a" | "fig3b" => {
            if n < 2 {
                return Err(invalid("lambda axis needs at least 2 points"));
            }
            (0..n).map(|i| i as f64 / (k - 1.0)).collect()
        }
        "fig4a" => (1..=n).map(|i| 0.5 * i as f64 / (k + 1.0)).collect(),
        other => return Err(CliError::UnknownFigure(other.to_string())),
    })
}

/// Strict dense-coding capacities over complete dephasing, optimized
/// then equiprobable. The optimized run starts from the equiprobable one.
fn dephasing_dc_strict(e: f64, search: &DcSearch) -> CliResult<(f64, f64)> {
    let v = |p| DcVariant::new(DcChannel::Dephasing, Constraint::Strict, p);
    let eq = dc_capacity(e, v(Probabilities::Equiprobable), search, &[])?;
    let seed = eq
        .optimizer_info
        .as_ref()
        .map(|i| vec![with_uniform_weights(&i.argmax)])
        .unwrap_or_default();
    let opt = dc_capacity(e, v(Probabilities::Optimized), search, &seed)?;
    Ok((opt.value, eq.value))
}

fn rows<F>(xs: &[f64], settings: &Settings, f: F) -> CliResult<Vec<Vec<f64>>>
where
    F: Fn(f64) -> CliResult<Vec<f64>> + Sync,
{
    settings.pool()?.install(|| {
        xs.par_iter()
            .map(|&x| {
                let mut row = vec![x];
                row.extend(f(x)?);
                Ok(row)
            })
            .collect()
    })
}

pub fn figure(name: &str, resolution: Option<usize>, settings: &Settings) -> CliResult<Table> {
    let n = resolution
        .or(settings.resolution)
        .unwrap_or_else(|| default_resolution(name));
    if n < 2 {
        return Err(invalid(format!("resolution must be at least 2, got {n}")));
    }
    let xs = axis(name, n)?;
    let search = settings.search;
    let (header, data): (Vec<String>, _) = match name {
        "fig1" => (
            vec!["E".into(), DC_DEPH_S.into(), DEPH_S.into()],
            rows(&xs, settings, |e| {
                let (opt, _) = dephasing_dc_strict(e, &search)?;
                Ok(vec![opt, strict_optimal_capacity(0.5, e)?.value])
            })?,
        ),
        "fig2" => {
            let mut h = vec!["E".to_string()];
            h.extend(FIG2_DIMS.iter().map(|d| format!("d={d}")));
            let data = rows(&xs, settings, |e| {
                Ok(capacity_curve(e, &FIG2_DIMS)?.into_iter().map(|(_, v)| v).collect())
            })?;
            (h, data)
        }
        "fig3a" => {
            let mut h = vec!["lambda".to_string()];
            h.extend(FIG3A_ENERGIES.iter().map(|e| format!("~C_{{E}}_A E={e}")));
            let data = rows(&xs, settings, |l| {
                FIG3A_ENERGIES
                    .iter()
                    .map(|&e| Ok(avg_equiprob_capacity(l, e)?.value))
                    .collect()
            })?;
            (h, data)
        }
        "fig3b" => {
            let mut h = vec!["lambda".to_string()];
            for e in FIG3B_ENERGIES {
                h.push(format!("~C_{{E}}_S E={e}"));
                h.push(format!("C_{{E}}_S E={e}"));
            }
            let data = rows(&xs, settings, |l| {
                let mut out = Vec::new();
                for e in FIG3B_ENERGIES {
                    out.push(strict_equiprob_capacity(l, e)?.value);
                    out.push(strict_optimal_capacity(l, e)?.value);
                }
                Ok(out)
            })?;
            (h, data)
        }
        "fig4a" => (
            ["E", "C^DC_{E}_A", "~C^DC_{E}_A", "C^DC_{E}_S", "~C^DC_{E}_S", "C_{E}"]
                .map(String::from)
                .to_vec(),
            rows(&xs, settings, |e| {
                let r = dc_hierarchy_row(e, &search)?;
                Ok(vec![
                    r.avg_optimized,
                    r.avg_equiprobable,
                    r.strict_optimized,
                    r.strict_equiprobable,
                    r.unassisted,
                ])
            })?,
        ),
        "fig4b" => (
            vec![
                "E".into(),
                DC_DEPH_S.into(),
                DC_DEPH_S_EQ.into(),
                DEPH_S.into(),
                DEPH_S_EQ.into(),
            ],
            rows(&xs, settings, |e| {
                let (opt, eq) = dephasing_dc_strict(e, &search)?;
                Ok(vec![
                    opt,
                    eq,
                    strict_optimal_capacity(0.5, e)?.value,
                    strict_equiprob_capacity(0.5, e)?.value,
                ])
            })?,
        ),
        other => return Err(CliError::UnknownFigure(other.to_string())),
    };
    let mut table = Table::new(header);
    for row in data {
        table.push(row);
    }
    Ok(table)
}
