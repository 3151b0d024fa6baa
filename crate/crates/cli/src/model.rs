//! Turns scenario specs into library objects.

use tfhom::biphoton::{jsa_from_pm, separable_jsa, JointSpectralAmplitude, PMConvention, SpectralAmplitude};
use tfhom::classical::PhaseDistribution;
use tfhom::gkpcomb::{self, CombState, LogicalLabel, ShiftGate};
use tfhom::num::cis;
use tfhom::pumpeng::{self, CavityConfig, CavityDetuning, DeviceConfig, PumpBeam, Quadrature};
use tfhom::sfgrid::{FrequencyGrid, TimeGrid};
use tfhom::Result;

use num_complex::Complex;

use crate::scenario::{
    AmplitudeSpec, Axis, CatAxis, CombSpec, Convention, Detuning, Gate, Label, PhaseSpec, PumpSpec, Quadrature as Q,
    StateSpec,
};

pub fn frequency_grid(a: &Axis) -> Result<FrequencyGrid<f64>> {
    match (a.step, a.span) {
        (Some(step), _) => FrequencyGrid::with_step(a.n, a.center, step),
        (None, Some(span)) => FrequencyGrid::new(a.n, a.center, span),
        (None, None) => unreachable!("axis validated at parse time"),
    }
}

pub fn time_grid(a: &Axis) -> Result<TimeGrid<f64>> {
    match (a.step, a.span) {
        (Some(step), _) => TimeGrid::with_step(a.n, a.center, step),
        (None, Some(span)) => TimeGrid::new(a.n, a.center, span),
        (None, None) => unreachable!("axis validated at parse time"),
    }
}

pub fn quadrature(q: Q) -> Quadrature {
    match q {
        Q::Fft => Quadrature::Fft,
        Q::Direct => Quadrature::Direct,
    }
}

pub fn convention(c: Convention) -> PMConvention {
    match c {
        Convention::Halved => PMConvention::Halved,
        Convention::Sum => PMConvention::Sum,
        Convention::Orthonormal => PMConvention::Orthonormal,
    }
}

pub fn device(p: &PumpSpec) -> Result<DeviceConfig<f64>> {
    let d = &p.device;
    DeviceConfig::new(d.length, d.group_velocity, d.omega_p, d.theta_deg, d.c)
}

pub fn beams(p: &PumpSpec) -> Result<Vec<PumpBeam<f64>>> {
    p.beams
        .iter()
        .map(|b| PumpBeam::with_amplitude(b.waist, b.theta, b.z0, Complex::new(b.amplitude[0], b.amplitude[1])))
        .collect()
}

pub fn pump_fminus(p: &PumpSpec, grid: &FrequencyGrid<f64>, q: Quadrature) -> Result<SpectralAmplitude<f64>> {
    let dev = device(p)?;
    let profile = pumpeng::pump_profile(&beams(p)?, &dev.z_grid(p.z_samples)?, &dev)?;
    pumpeng::phase_matching_amplitude(&profile, &dev, grid, q)
}

pub fn cavity(reflectivity: f64, roundtrip_time: f64, detuning: Detuning) -> Result<CavityConfig<f64>> {
    let d = match detuning {
        Detuning::Resonant => CavityDetuning::Resonant,
        Detuning::AntiResonant => CavityDetuning::AntiResonant,
    };
    CavityConfig::new(reflectivity, roundtrip_time, d)
}

pub fn amplitude(spec: &AmplitudeSpec, grid: &FrequencyGrid<f64>, q: Quadrature) -> Result<SpectralAmplitude<f64>> {
    match spec {
        AmplitudeSpec::Gaussian {
            center,
            sigma,
            delay,
            phase,
            chirp,
        } => {
            let g = SpectralAmplitude::gaussian(*grid, *center, *sigma)?;
            let values = g
                .values()
                .iter()
                .zip(grid.samples())
                .map(|(v, w)| v * cis(phase + chirp * (w - center) * (w - center) + w * delay))
                .collect();
            SpectralAmplitude::new(*grid, values)
        }
        AmplitudeSpec::OddGaussian { center, sigma, delay } => {
            Ok(SpectralAmplitude::odd_gaussian(*grid, *center, *sigma)?.delayed(*delay))
        }
        AmplitudeSpec::Cat {
            center,
            separation,
            sigma,
            phase,
            axis,
        } => {
            let h = separation / 2.0;
            let (a, b) = match axis {
                CatAxis::Frequency => (
                    SpectralAmplitude::gaussian(*grid, center - h, *sigma)?,
                    SpectralAmplitude::gaussian(*grid, center + h, *sigma)?,
                ),
                CatAxis::Time => {
                    let base = SpectralAmplitude::gaussian(*grid, *center, *sigma)?;
                    // Wigner lobes at tau = -+ separation / 2
                    (base.delayed(h), base.delayed(-h))
                }
            };
            a.add(&b.scaled(cis(*phase)))?.normalize()
        }
        AmplitudeSpec::Sum(terms) => {
            let mut acc = SpectralAmplitude::new(*grid, vec![Complex::new(0.0, 0.0); grid.n()])?;
            for t in terms {
                let a = amplitude(&t.amplitude, grid, q)?;
                acc = acc.add(&a.scaled(Complex::new(t.weight[0], t.weight[1])))?;
            }
            acc.normalize()
        }
        AmplitudeSpec::Pump(p) => pump_fminus(p, grid, q),
        AmplitudeSpec::Cavity {
            input,
            reflectivity,
            roundtrip_time,
            detuning,
        } => pumpeng::cavity_comb(&amplitude(input, grid, q)?, &cavity(*reflectivity, *roundtrip_time, *detuning)?),
    }
}

pub fn state(spec: &StateSpec, grid: &FrequencyGrid<f64>, q: Quadrature) -> Result<JointSpectralAmplitude<f64>> {
    match spec {
        StateSpec::Separable { first, second, phase } => {
            separable_jsa(&amplitude(first, grid, q)?, &amplitude(second, grid, q)?, *phase)
        }
        StateSpec::Antisymmetric { first, second } => {
            let f = amplitude(first, grid, q)?;
            let g = amplitude(second, grid, q)?;
            let n = grid.n();
            let mut values = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    values.push(f.values()[i] * g.values()[j] - g.values()[i] * f.values()[j]);
                }
            }
            JointSpectralAmplitude::new(*grid, *grid, values)?.normalize()
        }
        StateSpec::Pm { plus, minus, convention: c } => {
            Ok(jsa_from_pm(&amplitude(plus, grid, q)?, &amplitude(minus, grid, q)?, convention(*c))?.amplitude)
        }
    }
}

pub fn label(l: Label) -> LogicalLabel {
    match l {
        Label::Zero => LogicalLabel::Zero,
        Label::One => LogicalLabel::One,
        Label::Plus => LogicalLabel::Plus,
        Label::Minus => LogicalLabel::Minus,
    }
}

pub fn comb(spec: &CombSpec, l: Label, grid: &FrequencyGrid<f64>) -> Result<CombState<f64>> {
    if spec.periodic {
        gkpcomb::encode_periodic(label(l), spec.spacing, *grid)
    } else {
        let (s, w) = (
            spec.tooth_width.expect("validated at parse time"),
            spec.envelope_width.expect("validated at parse time"),
        );
        gkpcomb::encode(label(l), spec.spacing, s, w, *grid)
    }
}

pub fn gate(g: Gate, spacing: f64) -> ShiftGate<f64> {
    match g {
        Gate::X => ShiftGate::x(spacing),
        Gate::Z => ShiftGate::z(spacing),
        Gate::FrequencyShift(d) => ShiftGate::FrequencyShift(d),
        Gate::TimeShift(t) => ShiftGate::TimeShift(t),
    }
}

pub fn phase_distribution(p: PhaseSpec) -> PhaseDistribution<f64> {
    match p {
        PhaseSpec::Uniform => PhaseDistribution::UniformContinuous,
        PhaseSpec::TwoPoint([a, b]) => PhaseDistribution::TwoPoint(a, b),
        PhaseSpec::Fixed(p) => PhaseDistribution::Fixed(p),
    }
}
