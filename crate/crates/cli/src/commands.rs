use std::f64::consts::PI;
use std::fs;

use etur_core::catalog::{emit, standard_catalog, write_atomic, Status, SuiteResult};
use etur_core::extremal::{extremal_spectrum, extremal_time_signal, gaussian_spectrum, OMEGA_SPAN};
use etur_core::report::sig12;
use etur_core::spectral::amplitude::{DEFAULT_POINTS, DEFAULT_SPAN};
use etur_core::spectral::io::{read_distribution, read_signal, read_spectrum, write_columns};
use etur_core::spectral::survival_amplitude;
use etur_core::{
    run_suite, solve_mu, BoundFilter, CatalogEntry, DecayTimes, EnergyDistribution, Error, Extended, ExtremalSolution,
    GaussianWignerState, Grid, SignalPair, SurvivalAmplitude,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{
    Cli, Command, DistArgs, ExtremalArgs, Failure, Format, Kind, Preset, SuiteArgs, Target, TransformArgs,
    WignerArgs,
};

const DECAY_FAMILIES: &[&str] = &[
    "Luo",
    "Short-time",
    "MT-cosine",
    "MT-rate",
    "MT-halflife",
    "MT-Fleming",
    "Gislason",
    "EqWidth-star",
    "EqWidth-2star",
    "Wigner-form",
    "Fujiwara",
    "HU",
];

const SPEED_FAMILIES: &[&str] = &["ML", "LuoZhang", "MT-orthogonal", "Pfeifer", "Yurtsever"];

/// Entry name used for objects given on the command line.
const ENTRY: &str = "input";

const TABLE_HEADER: [&str; 7] = ["kind", "name", "value", "relation", "rhs", "slack", "status"];

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    if !(cli.hbar > 0.0 && cli.hbar.is_finite()) {
        return Err(Failure::Usage(format!("--hbar must be positive, got {}", cli.hbar)));
    }
    if let Some(tol) = cli.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be non-negative, got {tol}")));
        }
    }
    match &cli.command {
        Command::Decay(a) => decay(cli, a),
        Command::Extremal(a) => extremal(cli, a),
        Command::Wigner(a) => wigner(cli, a),
        Command::Speed(a) => speed(cli, a),
        Command::Transform(a) => transform(cli, a),
        Command::Suite(a) => suite(cli, a),
    }
}

fn write_output(cli: &Cli, text: &str) -> Outcome {
    match &cli.out {
        Some(path) => Ok(write_atomic(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &impl serde::Serialize) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn judged(cli: &Cli, r: SuiteResult) -> SuiteResult {
    match cli.tol {
        Some(tol) => r.with_tolerance(tol),
        None => r,
    }
}

/// Exit status implied by a finished report.
fn verdict(r: &SuiteResult) -> Outcome {
    if r.summary.violated > 0 {
        Err(Failure::Violated)
    } else if r.summary.errors > 0 {
        Err(Failure::Numerical(format!("{} bound evaluations failed", r.summary.errors)))
    } else if !r.expectation_failures.is_empty() {
        Err(Failure::Numerical(r.expectation_failures.join("; ")))
    } else {
        Ok(())
    }
}

fn distribution(a: &DistArgs, hbar: f64) -> Result<EnergyDistribution, Failure> {
    if let Some(path) = &a.input {
        return Ok(read_distribution(path, hbar)?);
    }
    let p = match a.kind {
        None => return Err(Failure::Usage("give a distribution family or --in FILE".into())),
        Some(Kind::Sampled) => return Err(Failure::Usage("sampled distributions need --in FILE".into())),
        Some(Kind::Lorentzian) => EnergyDistribution::lorentzian(a.e0, a.gamma)?,
        Some(Kind::Gaussian) => EnergyDistribution::gaussian(a.mean, a.delta_e)?,
        Some(Kind::TruncatedParabola) => EnergyDistribution::truncated_parabola(a.delta_e)?.shifted(a.mean),
        Some(Kind::Stepwise) => EnergyDistribution::stepwise(a.delta_e)?.shifted(a.mean),
        Some(Kind::Bhattacharyya) => EnergyDistribution::bhattacharyya(a.delta_e)?.shifted(a.mean),
        Some(Kind::TwoPoint) => EnergyDistribution::two_point(a.e1, a.e2, a.weight)?,
    };
    Ok(p.with_hbar(hbar)?)
}

fn distribution_entry(a: &DistArgs, p: EnergyDistribution) -> Result<CatalogEntry, Failure> {
    let entry = CatalogEntry::distribution(ENTRY, p);
    match a.nominal_delta_e {
        Some(d) if d > 0.0 && d.is_finite() => Ok(entry.with_nominal_delta_e(d)),
        Some(d) => Err(Failure::Usage(format!("--nominal-delta-e must be positive, got {d}"))),
        None => Ok(entry),
    }
}

fn families(names: &[&str]) -> Result<BoundFilter, Failure> {
    Ok(BoundFilter::only(names.iter().copied())?)
}

/// Rows `kind,name,value,relation,rhs,slack,status` mixing scalar values
/// and bound reports.
#[derive(Default)]
struct Table(Vec<[String; 7]>);

impl Table {
    fn value(&mut self, name: &str, v: f64) {
        self.0.push(["value".into(), name.into(), sig12::format(v), String::new(), String::new(), String::new(), String::new()]);
    }

    fn bounds(&mut self, r: &SuiteResult) {
        for rec in &r.records {
            let row = match &rec.report {
                Some(b) => [
                    "bound".into(),
                    rec.bound.clone(),
                    sig12::format(b.lhs),
                    b.relation.to_string(),
                    sig12::format(b.rhs),
                    sig12::format(b.slack),
                    rec.status.as_str().into(),
                ],
                None => [
                    "bound".into(),
                    rec.bound.clone(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    rec.status.as_str().into(),
                ],
            };
            self.0.push(row);
        }
    }

    fn render(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Failure::from(Error::from(e));
        w.write_record(TABLE_HEADER).map_err(csv_err)?;
        for row in &self.0 {
            w.write_record(row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Serialize)]
struct DecayOutput<'a> {
    distribution: &'a EnergyDistribution,
    times: DecayTimes,
    bounds: &'a SuiteResult,
}

fn decay(cli: &Cli, a: &DistArgs) -> Outcome {
    let p = distribution(a, cli.hbar)?;
    let q = SurvivalAmplitude::for_distribution(&p)?;
    let times = DecayTimes::compute(&p, &q)?;
    let entry = distribution_entry(a, p.clone())?;
    let result = judged(cli, run_suite(&[entry], &families(DECAY_FAMILIES)?)?);
    let text = match cli.format {
        Format::Json => json_text(&DecayOutput { distribution: &p, times, bounds: &result })?,
        Format::Csv => {
            let mut t = Table::default();
            for (name, v) in times.entries() {
                t.value(name, v.to_f64());
            }
            t.bounds(&result);
            t.render()?
        }
    };
    write_output(cli, &text)?;
    verdict(&result)
}

fn speed(cli: &Cli, a: &DistArgs) -> Outcome {
    let p = distribution(a, cli.hbar)?;
    let entry = distribution_entry(a, p)?;
    let result = judged(cli, run_suite(&[entry], &families(SPEED_FAMILIES)?)?);
    write_output(cli, &emit(&result, cli.format.into())?)?;
    verdict(&result)
}

fn wigner_state(cli: &Cli, a: &WignerArgs) -> Result<GaussianWignerState, Failure> {
    if let Some(path) = &a.input {
        let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
        return serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let h = cli.hbar;
    let s = match a.preset {
        None => return Err(Failure::Usage("give --preset or --in FILE".into())),
        Some(Preset::Coherent) => GaussianWignerState::coherent(a.displacement, a.momentum, a.mass, a.omega, h)?,
        Some(Preset::Thermal) => GaussianWignerState::thermal(a.nbar, a.mass, a.omega, h)?,
        Some(Preset::Squeezed) => GaussianWignerState::squeezed_thermal(a.nbar, a.squeeze, a.mass, a.omega, h)?,
        Some(Preset::Free) => {
            GaussianWignerState::free_packet(a.displacement, a.momentum, a.sigma_q, a.sigma_p, a.sigma_qp, a.mass, h)?
        }
    };
    Ok(s)
}

#[derive(Serialize)]
struct WignerOutput<'a> {
    state: GaussianWignerState,
    #[serde(with = "sig12")]
    purity: f64,
    #[serde(with = "sig12")]
    determinant: f64,
    #[serde(with = "sig12")]
    delta_e: f64,
    t0: Extended,
    /// `2(ΔE T0/ħ)²`; null for an energy eigenstate.
    product: Option<Extended>,
    bounds: &'a SuiteResult,
}

fn wigner(cli: &Cli, a: &WignerArgs) -> Outcome {
    let s = wigner_state(cli, a)?;
    let delta_e = s.energy_dispersion()?;
    let t0 = s.stationarity_time();
    let product = s.stationarity_product()?;
    let result = judged(cli, run_suite(&[CatalogEntry::state(ENTRY, s)], &BoundFilter::All)?);
    let text = match cli.format {
        Format::Json => json_text(&WignerOutput {
            state: s,
            purity: s.purity(),
            determinant: s.determinant(),
            delta_e,
            t0,
            product,
            bounds: &result,
        })?,
        Format::Csv => {
            let mut t = Table::default();
            t.value("purity", s.purity());
            t.value("determinant", s.determinant());
            t.value("delta_e", delta_e);
            t.value("t0", t0.to_f64());
            t.value("product", product.map_or(f64::NAN, |p| p.to_f64()));
            t.bounds(&result);
            t.render()?
        }
    };
    write_output(cli, &text)?;
    verdict(&result)
}

/// Named columns as CSV, or as a JSON object of arrays.
fn columns(format: Format, names: &[&str], cols: &[&[f64]]) -> Result<String, Failure> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_columns(&mut buf, names, cols)?;
            String::from_utf8(buf).map_err(|e| Failure::Usage(e.to_string()))
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                names.iter().zip(cols).map(|(n, c)| ((*n).to_string(), json!(c))).collect();
            json_text(&map)
        }
    }
}

fn extremal(cli: &Cli, a: &ExtremalArgs) -> Outcome {
    let c = a.omega_plus;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Failure::Usage(format!("--omega-plus must be positive, got {c}")));
    }
    let sol = match a.n_omega {
        Some(n) if n < 16 => return Err(Failure::Usage(format!("--n-omega must be at least 16, got {n}"))),
        Some(n) => extremal_spectrum(solve_mu()?, c, &Grid::linspace(0.0, OMEGA_SPAN * c, n)?)?,
        None => ExtremalSolution::new(c)?,
    };
    let sigma = c * PI.sqrt();
    println!("mu = {:.8}", sol.mu);
    println!("omega_plus = {:.8}", sol.omega_plus);
    println!("measured dt dw+ = {:.8}", sol.measured_product());
    if a.compare_gaussian {
        println!("gaussian dt dw+ = {:.8}", ((PI - 2.0) / (4.0 * PI)).sqrt());
    }

    if let Some(path) = &cli.out {
        let keep = sol.half.points().take_while(|&w| a.omega_max.is_none_or(|m| w <= m)).count();
        if keep == 0 {
            return Err(Failure::Usage("--omega-max leaves no frequencies".into()));
        }
        let omega: Vec<f64> = sol.half.points().take(keep).collect();
        let values = &sol.values[..keep];
        let gauss: Vec<f64> = omega.iter().map(|&w| gaussian_spectrum(sigma, w)).collect();
        let text = if a.compare_gaussian {
            columns(cli.format, &["omega", "F", "F_gauss"], &[&omega, values, &gauss])?
        } else {
            columns(cli.format, &["omega", "F"], &[&omega, values])?
        };
        write_atomic(path, &text)?;
    }
    if let Some(path) = &a.signal_out {
        let signal = extremal_time_signal(&sol);
        let t = signal.time.to_vec();
        let f = &sol.spectrum.signal;
        let text = if a.compare_gaussian {
            let norm = (sigma * sigma / PI).powf(0.25);
            let g: Vec<f64> = signal.gaussian.iter().map(|v| norm * v).collect();
            columns(cli.format, &["t", "f", "f_gauss"], &[&t, f, &g])?
        } else {
            columns(cli.format, &["t", "f"], &[&t, f])?
        };
        write_atomic(path, &text)?;
    }
    Ok(())
}

fn symmetric_grid(half_width: f64, n: usize) -> Result<Grid, Failure> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Failure::Usage(format!("grid half-width must be positive, got {half_width}")));
    }
    if n < 16 {
        return Err(Failure::Usage(format!("grids need at least 16 points, got {n}")));
    }
    Ok(Grid::linspace(-half_width, half_width, n)?)
}

fn complex_output(format: Format, grid: &Grid, names: [&str; 3], re: &[f64], im: &[f64]) -> Result<String, Failure> {
    match format {
        Format::Csv => columns(format, &names, &[&grid.to_vec(), re, im]),
        Format::Json => json_text(&json!({ "grid": grid, "re": re, "im": im })),
    }
}

fn transform(cli: &Cli, a: &TransformArgs) -> Outcome {
    let text = match a.to {
        Target::Spectrum => {
            let path = a.dist.input.as_ref().ok_or_else(|| Failure::Usage("--to spectrum needs --in t,f".into()))?;
            let (time, f) = read_signal(path)?;
            let freq = symmetric_grid(a.omega_max.unwrap_or(PI / time.step), a.n_omega.unwrap_or(time.len))?;
            let pair = SignalPair::from_signal(time, &f, freq)?;
            report_moments(&pair);
            let re: Vec<f64> = pair.spectrum.iter().map(|c| c.re).collect();
            let im: Vec<f64> = pair.spectrum.iter().map(|c| c.im).collect();
            complex_output(cli.format, &pair.freq, ["omega", "ReF", "ImF"], &re, &im)?
        }
        Target::Signal => {
            let path = a.dist.input.as_ref().ok_or_else(|| Failure::Usage("--to signal needs --in omega,ReF,ImF".into()))?;
            let (freq, spectrum) = read_spectrum(path)?;
            let time = symmetric_grid(a.t_max.unwrap_or(PI / freq.step), a.n_t.unwrap_or(freq.len))?;
            let pair = SignalPair::from_spectrum(freq, &spectrum, time)?;
            report_moments(&pair);
            match cli.format {
                Format::Csv => columns(cli.format, &["t", "f"], &[&pair.time.to_vec(), &pair.signal])?,
                Format::Json => json_text(&json!({ "grid": pair.time, "values": pair.signal }))?,
            }
        }
        Target::Amplitude => {
            let p = distribution(&a.dist, cli.hbar)?;
            let t_max = a.t_max.unwrap_or(DEFAULT_SPAN * p.time_scale());
            let q = survival_amplitude(&p, t_max, a.n_t.unwrap_or(DEFAULT_POINTS))?;
            let re: Vec<f64> = q.values.iter().map(|c| c.re).collect();
            let im: Vec<f64> = q.values.iter().map(|c| c.im).collect();
            match cli.format {
                Format::Csv => columns(
                    cli.format,
                    &["t", "ReChi", "ImChi", "Q"],
                    &[&q.grid.to_vec(), &re, &im, &q.probabilities()],
                )?,
                Format::Json => json_text(&json!({ "grid": q.grid, "re": re, "im": im }))?,
            }
        }
    };
    write_output(cli, &text)
}

fn report_moments(pair: &SignalPair) {
    let m = pair.moments();
    eprintln!(
        "dt = {:.9}, dw+ = {:.9}, w+ = {:.9}, dt dw+ = {:.9}, hermitian defect = {:.3e}",
        m.delta_t,
        m.delta_omega_plus,
        m.omega_plus,
        m.delta_t * m.delta_omega_plus,
        pair.hermitian_defect()
    );
}

fn suite(cli: &Cli, a: &SuiteArgs) -> Outcome {
    let filter = if a.only.is_empty() { BoundFilter::All } else { BoundFilter::only(a.only.iter().cloned())? };
    let result = judged(cli, run_suite(&standard_catalog()?, &filter)?);
    write_output(cli, &emit(&result, cli.format.into())?)?;
    let violated = result.records.iter().filter(|r| r.status == Status::Violated).count();
    if violated > 0 {
        eprintln!("{violated} guaranteed bounds violated");
    }
    verdict(&result)
}
