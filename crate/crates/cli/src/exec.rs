//! Runs one scenario in memory; nothing touches the filesystem here.

use std::collections::BTreeMap;

use serde_json::Value;
use tfhom::biphoton::{schmidt_number, JointSpectralAmplitude, SpectralAmplitude};
use tfhom::chronowigner::{self, WignerMap, WITNESS_TOL};
use tfhom::classical::{self, CoherentInput};
use tfhom::gkpcomb::{self, LogicalLabel};
use tfhom::hom::{self, PhaseSpaceMap};
use tfhom::num::{rms_diff, rms_diff_real};
use tfhom::pumpeng::{self, Quadrature};
use tfhom::sfgrid::{FrequencyGrid, TimeGrid};
use tfhom::PMConvention;

use crate::error::CliError;
use crate::model;
use crate::output::{self, Plot};
use crate::scenario::{AmplitudeSpec, Kind, Label, Readout, Scenario, StateSpec};

pub struct Artifact {
    pub file: String,
    pub contents: String,
}

#[derive(Default)]
pub struct Report {
    pub artifacts: Vec<Artifact>,
    pub derived: BTreeMap<String, Value>,
}

impl Report {
    fn add(&mut self, file: String, contents: String) {
        self.artifacts.push(Artifact { file, contents });
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.derived.insert(key.to_string(), value.into());
    }

    fn table(&mut self, s: &Scenario, gnuplot: bool, header: &[&str], columns: &[&[f64]]) {
        let file = format!("{}.csv", s.name);
        if gnuplot {
            let plot = output::gnuplot(
                &file,
                Plot::Lines {
                    x: header[0],
                    columns: &header[1..],
                },
            );
            self.add(format!("{}.gp", s.name), plot);
        }
        self.add(file, output::table(header, columns));
    }

    fn matrix<M: PhaseSpaceMap<f64>>(&mut self, stem: &str, gnuplot: bool, map: &M) {
        let file = format!("{stem}.csv");
        if gnuplot {
            self.add(format!("{stem}.gp"), output::gnuplot(&file, Plot::Matrix { title: stem }));
        }
        self.add(file, output::matrix(map));
    }

    fn extrema(&mut self, values: &[f64]) {
        self.set("min", values.iter().copied().fold(f64::INFINITY, f64::min));
        self.set("max", values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }

    fn map_summary<M: PhaseSpaceMap<f64>>(&mut self, prefix: &str, map: &M) {
        let (i, j, v) = map.max_point();
        self.set(&format!("{prefix}max"), v);
        self.set(&format!("{prefix}max_mu"), map.mu_grid().omega(i));
        self.set(&format!("{prefix}max_tau"), map.tau_grid().t(j));
        let (i, j, v) = map.min_point();
        self.set(&format!("{prefix}min"), v);
        self.set(&format!("{prefix}min_mu"), map.mu_grid().omega(i));
        self.set(&format!("{prefix}min_tau"), map.tau_grid().t(j));
    }

    fn wigner_summary(&mut self, prefix: &str, map: &WignerMap<f64>, marginals: bool) {
        self.map_summary(prefix, map);
        self.set(&format!("{prefix}negativity_volume"), chronowigner::negativity_volume(map));
        self.set(&format!("{prefix}witness"), chronowigner::witness(map).fired);
        if marginals {
            let m = chronowigner::marginals(map);
            self.set(&format!("{prefix}spectral_marginal_total"), m.spectral_total);
            self.set(&format!("{prefix}temporal_marginal_total"), m.temporal_total);
        }
    }
}

fn other(q: Quadrature) -> Quadrature {
    match q {
        Quadrature::Fft => Quadrature::Direct,
        Quadrature::Direct => Quadrature::Fft,
    }
}

fn value_at_zero(tau: &TimeGrid<f64>, values: &[f64]) -> Option<f64> {
    (0..tau.n()).find(|&j| tau.t(j).abs() <= 1e-9 * tau.step()).map(|j| values[j])
}

fn schmidt(report: &mut Report, jsa: &JointSpectralAmplitude<f64>) -> Result<(), CliError> {
    report.set("schmidt_number", schmidt_number(jsa)?);
    Ok(())
}

struct Grids {
    grid: FrequencyGrid<f64>,
    mu: Option<FrequencyGrid<f64>>,
    tau: Option<TimeGrid<f64>>,
}

/// Builds the grids; also the only numeric work `validate` does.
pub fn grids(s: &Scenario) -> Result<(), CliError> {
    resolve(s).map(|_| ())
}

fn resolve(s: &Scenario) -> Result<Grids, CliError> {
    Ok(Grids {
        grid: model::frequency_grid(s.grid.as_ref().expect("validated"))?,
        mu: s.mu.as_ref().map(model::frequency_grid).transpose()?,
        tau: s.tau.as_ref().map(model::time_grid).transpose()?,
    })
}

pub fn execute(s: &Scenario, gnuplot: bool) -> Result<Report, CliError> {
    let g = resolve(s)?;
    let q = model::quadrature(s.numerics.quadrature);
    let mut r = Report::default();
    let grid = &g.grid;
    match s.kind {
        Kind::HomScan => {
            let tau = g.tau.expect("validated");
            let jsa = model::state(s.state.as_ref().expect("validated"), grid, q)?;
            let c = hom::hom_scan(&jsa, &tau, s.mu_offset)?;
            r.table(s, gnuplot, &["tau", "coincidence"], &[&tau.samples(), &c]);
            r.extrema(&c);
            r.set("visibility", classical::visibility(&c));
            if let Some(c0) = value_at_zero(&tau, &c) {
                r.set("coincidence_at_zero", c0);
            }
            r.set("witness", c.iter().any(|v| *v > 0.5 + WITNESS_TOL));
            schmidt(&mut r, &jsa)?;
        }
        Kind::CoincidenceMap => {
            let (mu, tau) = (g.mu.expect("validated"), g.tau.expect("validated"));
            let jsa = model::state(s.state.as_ref().expect("validated"), grid, q)?;
            let map = hom::coincidence_map(&jsa, &mu, &tau)?;
            r.matrix(&s.name, gnuplot, &map);
            r.map_summary("", &map);
            let w = chronowigner::witness(&map);
            r.set("witness", w.fired);
            r.set("witness_points", w.points.len());
            schmidt(&mut r, &jsa)?;
        }
        Kind::WignerMap => {
            let (mu, tau) = (g.mu.expect("validated"), g.tau.expect("validated"));
            let f = match (&s.spectrum, &s.state) {
                (Some(spec), _) => model::amplitude(spec, grid, q)?,
                (None, Some(StateSpec::Pm { minus, .. })) => model::amplitude(minus, grid, q)?,
                _ => unreachable!("validated"),
            };
            let map = chronowigner::wigner_map_with(&f, &mu, &tau, q)?;
            r.matrix(&s.name, gnuplot, &map);
            r.wigner_summary("", &map, s.numerics.marginals);
            if s.numerics.dual_path_check {
                let alt = chronowigner::wigner_map_with(&f, &mu, &tau, other(q))?;
                r.set("dual_path_rms", rms_diff_real(map.values(), alt.values()));
            }
            if let Some(state) = &s.state {
                let jsa = model::state(state, grid, q)?;
                let rec = chronowigner::wigner_from_hom(&hom::coincidence_map(&jsa, &mu, &tau)?);
                r.matrix(&format!("{}_from_hom", s.name), gnuplot, &rec);
                r.set("reconstruction_rms", rms_diff_real(map.values(), rec.values()));
            }
        }
        Kind::ClassicalDip => {
            let tau = g.tau.expect("validated");
            let spec = s.classical.expect("validated");
            let alpha = model::amplitude(s.spectrum.as_ref().expect("validated"), grid, q)?;
            let input = CoherentInput::new(alpha, model::phase_distribution(spec.phase))?;
            let (curve, c0) = if spec.second_order_only {
                (classical::second_order_scan(&input, &tau), classical::second_order_only_correlation(&input, 0.0))
            } else {
                (classical::correlation_scan(&input, &tau)?, classical::intensity_correlation(&input, 0.0)?)
            };
            r.table(s, gnuplot, &["t", "correlation"], &[&tau.samples(), &curve]);
            r.extrema(&curve);
            r.set("correlation_at_zero", c0);
            r.set("visibility", classical::visibility(&curve));
        }
        Kind::PumpState => {
            let pump = s.pump.as_ref().expect("validated");
            let dev = model::device(pump)?;
            let beams = model::beams(pump)?;
            let profile = pumpeng::pump_profile(&beams, &dev.z_grid(pump.z_samples)?, &dev)?;
            let f = pumpeng::phase_matching_amplitude(&profile, &dev, grid, q)?;
            let re: Vec<f64> = f.values().iter().map(|v| v.re).collect();
            let im: Vec<f64> = f.values().iter().map(|v| v.im).collect();
            let abs2: Vec<f64> = f.values().iter().map(|v| v.norm_sqr()).collect();
            r.table(s, gnuplot, &["omega", "re", "im", "abs2"], &[&grid.samples(), &re, &im, &abs2]);
            r.set("truncation_loss", profile.truncation_loss);
            if let [beam] = beams.as_slice() {
                let p = dev.gaussian_parameters(beam);
                r.set("closed_form_center", p.center);
                r.set("closed_form_width", p.width);
                r.set("closed_form_delay", p.delay);
            }
            if s.numerics.dual_path_check {
                let alt = pumpeng::phase_matching_amplitude(&profile, &dev, grid, other(q))?;
                r.set("dual_path_rms", rms_diff(f.values(), alt.values()));
            }
            if let (Some(mu), Some(tau)) = (g.mu, g.tau) {
                let map = chronowigner::wigner_map_with(&f, &mu, &tau, q)?;
                r.matrix(&format!("{}_wigner", s.name), gnuplot, &map);
                r.wigner_summary("wigner_", &map, s.numerics.marginals);
            }
        }
        Kind::CombReadout => comb_readout(s, &g, gnuplot, &mut r, q)?,
        Kind::Spectrogram => {
            let (mu, tau) = (g.mu.expect("validated"), g.tau.expect("validated"));
            let f = model::amplitude(s.spectrum.as_ref().expect("validated"), grid, q)?;
            let w = model::amplitude(s.window.as_ref().expect("validated"), grid, q)?;
            let map = hom::spectrogram_map(&f, &w, &mu, &tau)?;
            r.matrix(&s.name, gnuplot, &map);
            r.map_summary("", &map);
            r.set("in_range", map.values().iter().all(|v| (0.0..=0.5).contains(v)));
        }
    }
    Ok(r)
}

fn comb_readout(s: &Scenario, g: &Grids, gnuplot: bool, r: &mut Report, q: Quadrature) -> Result<(), CliError> {
    let tau = g.tau.expect("validated");
    let grid = &g.grid;
    if let Some(spec) = &s.spectrum {
        let a = model::amplitude(spec, grid, q)?;
        let c = gkpcomb::hom_readout(&a, &a, &tau)?;
        r.table(s, gnuplot, &["tau", "coincidence"], &[&tau.samples(), &c]);
        r.extrema(&c);
        if let AmplitudeSpec::Cavity { roundtrip_time, .. } = spec {
            let echo = roundtrip_time / 2.0;
            let probe = gkpcomb::hom_readout(&a, &a, &TimeGrid::with_step(2, echo, echo)?)?;
            r.set("satellite_depth_ratio", (0.5 - probe[1]) / (0.5 - probe[0]));
        }
        return Ok(());
    }
    let spec = s.comb.as_ref().expect("validated");
    let mut state = model::comb(spec, spec.label, grid)?;
    for gate in &spec.gates {
        state = gkpcomb::apply_gate(&state, model::gate(*gate, spec.spacing))?;
    }
    let c = match spec.readout {
        Readout::Separable => {
            let partner = match spec.reference {
                Some(l) => model::comb(spec, l, grid)?,
                None => model::comb(spec, spec.label, grid)?,
            };
            gkpcomb::hom_readout(&state, &partner, &tau)?
        }
        Readout::Entangled => {
            let fp = SpectralAmplitude::gaussian(*grid, grid.center(), spec.plus_sigma)?;
            gkpcomb::entangled_readout(&fp, &state, PMConvention::Halved, &tau)?
        }
    };
    r.table(s, gnuplot, &["tau", "coincidence"], &[&tau.samples(), &c]);
    r.extrema(&c);
    for l in [Label::Zero, Label::One, Label::Plus, Label::Minus] {
        let basis = model::comb(spec, l, grid)?;
        let key = format!("fidelity_{}", label_name(model::label(l)));
        r.set(&key, gkpcomb::logical_overlap(&basis, &state)?.norm());
    }
    r.set("label", label_name(state.label()));
    r.set("norm", state.amplitude().norm());
    Ok(())
}

fn label_name(l: LogicalLabel) -> &'static str {
    match l {
        LogicalLabel::Zero => "zero",
        LogicalLabel::One => "one",
        LogicalLabel::Plus => "plus",
        LogicalLabel::Minus => "minus",
        LogicalLabel::Raw => "raw",
    }
}
