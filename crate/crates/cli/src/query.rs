use rayon::prelude::*;

use capcon_core::dc_search::{dc_capacity, dc_dephasing_capacity, DcChannel, DcVariant};
use capcon_core::dense_coding::ec_dc_capacity;
use capcon_core::dephasing::{
    avg_equiprob_capacity, avg_optimal_capacity, strict_equiprob_capacity, strict_optimal_capacity,
};
use capcon_core::dual::{dual_dephasing_equiprob_capacity, dual_dephasing_optimal_capacity, dual_noiseless_capacity};
use capcon_core::noiseless::{infinite_dimensional_capacity, noiseless_capacity};
use capcon_core::{CapacityResult, Constraint, Dimension, Probabilities};

use crate::args::{
    ChannelArg, ConstraintArg, DcArgs, DephasingArgs, DualArgs, EnergyAxis, Format, NoiselessArgs,
    ProbabilitiesArg,
};
use crate::config::Settings;
use crate::error::{invalid, CliResult};
use crate::output::{fixed, Table};

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> CliResult<Self> {
        if points < 2 {
            return Err(invalid(format!("a grid needs at least 2 points, got {points}")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(invalid(format!("grid needs finite start < stop, got {start}..{stop}")));
        }
        Ok(Self { start, stop, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / n)
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = crate::error::CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(invalid(format!("grid `{s}` is not start:stop:points")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad grid bound `{t}`")));
        let points = n
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad grid point count `{n}`")))?;
        Grid::new(num(a)?, num(b)?, points)
    }
}

pub fn parse_dimension(s: &str) -> CliResult<Dimension> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Dimension::Infinite);
    }
    match s.parse::<usize>() {
        Ok(d) if d >= 2 => Ok(Dimension::Finite(d)),
        _ => Err(invalid(format!("dimension must be an integer ≥ 2 or `inf`, got `{s}`"))),
    }
}

fn constraint(c: ConstraintArg) -> Constraint {
    match c {
        ConstraintArg::Average => Constraint::Average,
        ConstraintArg::Strict => Constraint::Strict,
    }
}

fn probabilities(p: ProbabilitiesArg) -> Probabilities {
    match p {
        ProbabilitiesArg::Equiprobable => Probabilities::Equiprobable,
        ProbabilitiesArg::Optimized => Probabilities::Optimized,
    }
}

fn check_energy(e: f64) -> CliResult<f64> {
    if !(e.is_finite() && e >= 0.0) {
        return Err(invalid(format!("--E must be finite and non-negative, got {e}")));
    }
    Ok(e)
}

/// Runs `f` at one energy or across a sweep and renders the result.
fn evaluate<F>(axis: &EnergyAxis, settings: &Settings, f: F) -> CliResult<String>
where
    F: Fn(f64) -> CliResult<CapacityResult> + Sync,
{
    let format = settings.format.unwrap_or(Format::Csv);
    if let Some(e) = axis.energy {
        let r = f(check_energy(e)?)?;
        return match format {
            Format::Csv => Ok(format!("{}\n", fixed(r.value))),
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&r)?)),
        };
    }
    let grid: Grid = axis.grid.as_deref().unwrap_or_default().parse()?;
    let energies = grid.values();
    for &e in &energies {
        check_energy(e)?;
    }
    let values = settings
        .pool()?
        .install(|| energies.par_iter().map(|&e| f(e).map(|r| r.value)).collect::<CliResult<Vec<_>>>())?;
    let mut table = Table::new(["E", "capacity"]);
    for (e, v) in energies.into_iter().zip(values) {
        table.push(vec![e, v]);
    }
    table.render(format)
}

pub fn noiseless(args: &NoiselessArgs, settings: &Settings) -> CliResult<String> {
    let dim = parse_dimension(&args.d)?;
    let c = constraint(args.constraint);
    evaluate(&args.energy, settings, |e| match dim {
        Dimension::Finite(d) => Ok(noiseless_capacity(d, e, c)?),
        Dimension::Infinite => Ok(CapacityResult::new(infinite_dimensional_capacity(e)?)),
    })
}

pub fn dephasing(args: &DephasingArgs, settings: &Settings) -> CliResult<String> {
    let f = match (args.constraint, args.probabilities) {
        (ConstraintArg::Average, ProbabilitiesArg::Equiprobable) => avg_equiprob_capacity,
        (ConstraintArg::Average, ProbabilitiesArg::Optimized) => avg_optimal_capacity,
        (ConstraintArg::Strict, ProbabilitiesArg::Equiprobable) => strict_equiprob_capacity,
        (ConstraintArg::Strict, ProbabilitiesArg::Optimized) => strict_optimal_capacity,
    };
    let lambda = args.lambda;
    evaluate(&args.energy, settings, |e| Ok(f(lambda, e)?))
}

pub fn dual(args: &DualArgs, settings: &Settings) -> CliResult<String> {
    let f = match (args.channel, args.probabilities) {
        (ChannelArg::Noiseless, _) => dual_noiseless_capacity,
        (ChannelArg::Dephasing, ProbabilitiesArg::Equiprobable) => dual_dephasing_equiprob_capacity,
        (ChannelArg::Dephasing, ProbabilitiesArg::Optimized) => dual_dephasing_optimal_capacity,
    };
    let l = args.purity;
    evaluate(&args.energy, settings, |e| Ok(f(e, l)?))
}

pub fn dc(args: &DcArgs, settings: &Settings) -> CliResult<String> {
    let numeric = args.numeric || args.channel.is_some() || args.constraint.is_some() || args.probabilities.is_some();
    if !numeric {
        let d = args.d;
        return evaluate(&args.energy, settings, |e| Ok(ec_dc_capacity(d, e)?));
    }
    if args.d != 2 {
        return Err(invalid("the numerical dense-coding search is qubit-only; use --d 2"));
    }
    let c = constraint(args.constraint.unwrap_or(ConstraintArg::Average));
    let p = probabilities(args.probabilities.unwrap_or(ProbabilitiesArg::Optimized));
    let search = settings.search;
    match args.channel.unwrap_or(ChannelArg::Noiseless) {
        ChannelArg::Dephasing => evaluate(&args.energy, settings, |e| Ok(dc_dephasing_capacity(e, c, p, &search)?)),
        ChannelArg::Noiseless => {
            let v = DcVariant::new(DcChannel::Noiseless, c, p);
            evaluate(&args.energy, settings, |e| Ok(dc_capacity(e, v, &search, &[])?))
        }
    }
}
