//! Pump engineering: builds the phase-matching amplitude `f-` from the
//! transverse pump profile along the waveguide, and the energy-conservation
//! amplitude `f+` from the pump spectrum.

use log::warn;
use num_complex::Complex;

use crate::biphoton::SpectralAmplitude;
use crate::error::{Error, Result};
use crate::num::{cis, Real};
use crate::sfgrid::{oscillatory_sum_with, FrequencyGrid, Kernel, Lattice};
pub use crate::sfgrid::Quadrature;

/// Waveguide and pump-carrier parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConfig<T> {
    pub length: T,
    pub group_velocity: T,
    pub omega_p: T,
    pub theta_deg: T,
    pub c: T,
    pub k_deg: T,
}

impl<T: Real> DeviceConfig<T> {
    /// `k_deg = omega_p sin(theta_deg) / c`.
    pub fn new(length: T, group_velocity: T, omega_p: T, theta_deg: T, c: T) -> Result<Self> {
        for (name, v) in [("length", length), ("group velocity", group_velocity), ("omega_p", omega_p), ("c", c)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Config(format!("device {name} must be positive, got {v}")));
            }
        }
        if !theta_deg.is_finite() {
            return Err(Error::Config("degeneracy angle must be finite".into()));
        }
        Ok(Self {
            length,
            group_velocity,
            omega_p,
            theta_deg,
            c,
            k_deg: omega_p * theta_deg.sin() / c,
        })
    }

    /// Pump wavenumber `omega_p / c`.
    pub fn k(&self) -> T {
        self.omega_p / self.c
    }

    /// Centre, width and delay of the Gaussian `f-` produced by `beam`:
    /// `f-(w) ~ e^{-i (w - center) delay} exp(-(w - center)^2 / width^2)`.
    pub fn gaussian_parameters(&self, beam: &PumpBeam<T>) -> GaussianFMinus<T> {
        let v = self.group_velocity;
        GaussianFMinus {
            center: (self.k() * beam.theta.sin() - self.k_deg) * v,
            width: T::lit(2.0) * v * beam.theta.cos() / beam.waist,
            delay: beam.z0 / v,
        }
    }

    /// Midpoint lattice on `[-L/2, L/2]`.
    pub fn z_grid(&self, n: usize) -> Result<ZGrid<T>> {
        ZGrid::new(self.length, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFMinus<T> {
    pub center: T,
    pub width: T,
    pub delay: T,
}

/// Gaussian pump beam hitting the waveguide from the side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpBeam<T> {
    pub waist: T,
    pub theta: T,
    pub z0: T,
    pub amplitude: Complex<T>,
}

impl<T: Real> PumpBeam<T> {
    pub fn new(waist: T, theta: T, z0: T) -> Result<Self> {
        Self::with_amplitude(waist, theta, z0, Complex::new(T::one(), T::zero()))
    }

    pub fn with_amplitude(waist: T, theta: T, z0: T, amplitude: Complex<T>) -> Result<Self> {
        if !(waist > T::zero()) || !waist.is_finite() {
            return Err(Error::Config(format!("beam waist must be positive, got {waist}")));
        }
        if !theta.is_finite() || !z0.is_finite() {
            return Err(Error::Config("beam angle and position must be finite".into()));
        }
        if theta.cos().abs() < T::lattice_tol() {
            return Err(Error::Config("grazing beam (cos theta = 0) has an unbounded footprint".into()));
        }
        Ok(Self {
            waist,
            theta,
            z0,
            amplitude,
        })
    }

    fn envelope(&self, z: T) -> T {
        let x = (z - self.z0) * self.theta.cos() / self.waist;
        (-x * x).exp()
    }
}

/// Midpoint sampling `z_k = -L/2 + (k + 1/2) L / n` of the waveguide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZGrid<T> {
    length: T,
    n: usize,
}

impl<T: Real> ZGrid<T> {
    pub fn new(length: T, n: usize) -> Result<Self> {
        if n == 0 || !(length > T::zero()) {
            return Err(Error::Config(format!("z grid needs n > 0 and L > 0, got n = {n}, L = {length}")));
        }
        Ok(Self { length, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> T {
        self.length / T::from_usize_lossy(self.n)
    }

    pub fn z(&self, k: usize) -> T {
        let half = T::lit(0.5);
        -half * self.length + (T::from_usize_lossy(k) + half) * self.step()
    }

    pub fn lattice(&self) -> Lattice<T> {
        Lattice {
            start: self.z(0),
            step: self.step(),
            len: self.n,
        }
    }
}

/// Pump amplitude `Phi(z)` sampled along the waveguide.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpProfile<T> {
    pub grid: ZGrid<T>,
    pub values: Vec<Complex<T>>,
    /// Largest fraction of any single beam's intensity falling outside the waveguide.
    pub truncation_loss: T,
}

const TRUNCATION_WARN: f64 = 0.01;
const SAMPLES_PER_WAVELENGTH: f64 = 8.0;

/// `Phi(z) = sum_b a_b exp(-(z - z0_b)^2 cos^2 theta_b / w_b^2) e^{i k sin(theta_b) z}`.
pub fn pump_profile<T: Real>(beams: &[PumpBeam<T>], grid: &ZGrid<T>, device: &DeviceConfig<T>) -> Result<PumpProfile<T>> {
    if beams.is_empty() {
        return Err(Error::Config("pump profile needs at least one beam".into()));
    }
    let k = device.k();
    let dz = grid.step();
    for b in beams {
        let ks = (k * b.theta.sin()).abs();
        if ks > T::zero() {
            let needed = T::TAU() / (ks * T::lit(SAMPLES_PER_WAVELENGTH));
            if dz > needed {
                return Err(Error::Resolution(format!(
                    "z step {dz} exceeds {needed} (8 samples per carrier wavelength at theta = {})",
                    b.theta
                )));
            }
        }
    }
    let values = (0..grid.n())
        .map(|i| {
            let z = grid.z(i);
            beams.iter().fold(Complex::new(T::zero(), T::zero()), |acc, b| {
                acc + b.amplitude * b.envelope(z) * cis(k * b.theta.sin() * z)
            })
        })
        .collect();
    let mut truncation_loss = T::zero();
    for b in beams {
        let inside = (0..grid.n()).fold(T::zero(), |acc, i| {
            let e = b.envelope(grid.z(i));
            acc + e * e
        }) * dz;
        let total = b.waist * (T::PI() / T::lit(2.0)).sqrt() / b.theta.cos().abs();
        truncation_loss = truncation_loss.max((T::one() - inside / total).max(T::zero()));
    }
    if truncation_loss > T::lit(TRUNCATION_WARN) {
        warn!(
            "pump profile extends past the waveguide: {:.3}% of a beam's intensity is truncated",
            truncation_loss.as_f64() * 100.0
        );
    }
    Ok(PumpProfile {
        grid: *grid,
        values,
        truncation_loss,
    })
}

/// `f-(w) = \int_{-L/2}^{L/2} Phi(z) e^{-i (k_deg + w / v_g) z} dz`, unnormalized.
pub fn phase_matching_amplitude_raw<T: Real>(
    profile: &PumpProfile<T>,
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
    method: Quadrature,
) -> Result<SpectralAmplitude<T>> {
    let grid = &profile.grid;
    let dz = grid.step();
    let weighted: Vec<_> = profile
        .values
        .iter()
        .enumerate()
        .map(|(i, p)| p * cis(-device.k_deg * grid.z(i)) * dz)
        .collect();
    let v = device.group_velocity;
    let wavenumbers = Lattice {
        start: out_grid.first() / v,
        step: out_grid.step() / v,
        len: out_grid.n(),
    };
    let values = oscillatory_sum_with(&weighted, grid.lattice(), wavenumbers, Kernel::Negative, method);
    SpectralAmplitude::new(*out_grid, values)
}

/// Normalized phase-matching amplitude.
pub fn phase_matching_amplitude<T: Real>(
    profile: &PumpProfile<T>,
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
    method: Quadrature,
) -> Result<SpectralAmplitude<T>> {
    phase_matching_amplitude_raw(profile, device, out_grid, method)?.normalize()
}

/// Closed-form `f-` of a single Gaussian beam, normalized; the beam's
/// complex amplitude is not applied.
pub fn gaussian_fminus<T: Real>(
    beam: &PumpBeam<T>,
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
) -> Result<SpectralAmplitude<T>> {
    let footprint = beam.waist / beam.theta.cos().abs();
    if footprint > device.length / T::lit(4.0) {
        warn!("beam footprint {footprint} is not small against the waveguide length; closed form is approximate");
    }
    let p = device.gaussian_parameters(beam);
    out_grid.check_gaussian_coverage(p.center, p.width / T::lit(2.0).sqrt(), "gaussian f-");
    SpectralAmplitude::from_fn(*out_grid, |w| {
        let x = (w - p.center) / p.width;
        cis(-(w - p.center) * p.delay) * (-x * x).exp()
    })
    .normalize()
}

/// Normalized superposition of single-beam amplitudes, with the largest
/// pairwise overlap `|<f_a|f_b>|` of its components.
#[derive(Debug, Clone)]
pub struct Superposition<T> {
    pub amplitude: SpectralAmplitude<T>,
    pub orthogonality_defect: T,
}

/// `sum_b a_b f-_b` over any number of beams, normalized.
pub fn superposed_fminus<T: Real>(
    beams: &[PumpBeam<T>],
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
) -> Result<Superposition<T>> {
    if beams.is_empty() {
        return Err(Error::Config("superposition needs at least one beam".into()));
    }
    let parts = beams
        .iter()
        .map(|b| gaussian_fminus(b, device, out_grid))
        .collect::<Result<Vec<_>>>()?;
    let mut defect = T::zero();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            defect = defect.max(parts[i].inner(&parts[j])?.norm());
        }
    }
    let mut sum = parts[0].scaled(beams[0].amplitude);
    for (b, p) in beams.iter().zip(&parts).skip(1) {
        sum = sum.add(&p.scaled(b.amplitude))?;
    }
    Ok(Superposition {
        amplitude: sum.normalize()?,
        orthogonality_defect: defect,
    })
}

/// Two-beam cat: two positions give a time cat, two angles a frequency cat.
pub fn cat_fminus<T: Real>(
    a: &PumpBeam<T>,
    b: &PumpBeam<T>,
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
) -> Result<Superposition<T>> {
    superposed_fminus(&[*a, *b], device, out_grid)
}

/// Four-beam compass state.
pub fn compass_fminus<T: Real>(
    beams: &[PumpBeam<T>; 4],
    device: &DeviceConfig<T>,
    out_grid: &FrequencyGrid<T>,
) -> Result<Superposition<T>> {
    superposed_fminus(beams, device, out_grid)
}

/// Round-trip phase offset of the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CavityDetuning {
    #[default]
    Resonant,
    AntiResonant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig<T> {
    pub reflectivity: T,
    pub roundtrip_time: T,
    pub detuning: CavityDetuning,
}

impl<T: Real> CavityConfig<T> {
    pub fn new(reflectivity: T, roundtrip_time: T, detuning: CavityDetuning) -> Result<Self> {
        if !(reflectivity >= T::zero() && reflectivity < T::one()) {
            return Err(Error::Config(format!("cavity reflectivity must lie in [0, 1), got {reflectivity}")));
        }
        if !(roundtrip_time > T::zero()) || !roundtrip_time.is_finite() {
            return Err(Error::Config(format!("roundtrip time must be positive, got {roundtrip_time}")));
        }
        Ok(Self {
            reflectivity,
            roundtrip_time,
            detuning,
        })
    }

    /// Echo spacing `tau_bar / 2`.
    pub fn echo_spacing(&self) -> T {
        self.roundtrip_time / T::lit(2.0)
    }

    /// Fabry-Perot series `(1 - R) / (1 - R e^{i (w tau_bar / 2 + phi)})`,
    /// i.e. `(1 - R) sum_n R^n e^{i n phi}` times a delay of `n tau_bar / 2`.
    pub fn transfer(&self, w: T) -> Complex<T> {
        let phi = match self.detuning {
            CavityDetuning::Resonant => T::zero(),
            CavityDetuning::AntiResonant => T::PI(),
        };
        let r = self.reflectivity;
        let one = Complex::new(T::one(), T::zero());
        Complex::new(T::one() - r, T::zero()) / (one - cis(w * self.echo_spacing() + phi) * r)
    }
}

/// Filters `f` through the cavity and renormalizes.
pub fn cavity_comb<T: Real>(f: &SpectralAmplitude<T>, cavity: &CavityConfig<T>) -> Result<SpectralAmplitude<T>> {
    let limit = T::TAU() / cavity.echo_spacing() / T::lit(16.0);
    if f.grid().step() > limit {
        return Err(Error::Resolution(format!(
            "frequency step {} does not resolve the cavity comb (needs <= {limit})",
            f.grid().step()
        )));
    }
    let grid = *f.grid();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v * cavity.transfer(grid.omega(k)))
        .collect();
    SpectralAmplitude::new(grid, values)?.normalize()
}

/// `f+` is the pump spectrum itself; this only enforces normalization.
pub fn fplus_from_pump_spectrum<T: Real>(spectrum: &SpectralAmplitude<T>) -> Result<SpectralAmplitude<T>> {
    spectrum.normalize()
}
