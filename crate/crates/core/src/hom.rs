//! The Hong-Ou-Mandel interferometer: coincidence probability of a biphoton
//! under a time delay on one arm and a frequency displacement on the other.

use log::warn;
use num_complex::Complex;
use rayon::prelude::*;

use crate::biphoton::{JointSpectralAmplitude, PhaseSpacePoint, SpectralAmplitude};
use crate::error::{Error, Result};
use crate::num::{cis, Real};
use crate::sfgrid::{self, oscillatory_sum, Boundary, FrequencyGrid, Kernel, Lattice, TimeGrid};

const SHIFT_LOSS_LIMIT: f64 = 0.01;
const SHIFT_LOSS_WARN: f64 = 1e-6;
const RANGE_TOL: f64 = 1e-6;

/// Which input arm receives the frequency displacement; the delay goes on
/// the other one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arm {
    One,
    #[default]
    Two,
}

/// Physical settings of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSettings<T> {
    /// Delay applied as `e^{i w tau}` on the arm not shifted.
    pub delay: T,
    /// Frequency displacement `f(w) -> f(w - shift)`.
    pub shift: T,
    pub shift_arm: Arm,
}

impl<T: Real> ArmSettings<T> {
    /// Settings probing the Wigner function of `f-` at `point`.
    ///
    /// With `w- = (w1 - w2) / 2` a physical shift `s` on arm 2 moves the
    /// probed `w-` by `s / 2`, so `mu` maps to a shift of `2 mu`.
    pub fn from_point(point: &PhaseSpacePoint<T>) -> Self {
        Self {
            delay: point.tau,
            shift: T::lit(2.0) * point.mu,
            shift_arm: Arm::Two,
        }
    }

    pub fn delay(delay: T) -> Self {
        Self {
            delay,
            shift: T::zero(),
            shift_arm: Arm::Two,
        }
    }

    /// Same settings with the shift and the delay on swapped arms.
    pub fn mirrored(self) -> Self {
        Self {
            shift_arm: match self.shift_arm {
                Arm::One => Arm::Two,
                Arm::Two => Arm::One,
            },
            ..self
        }
    }

    /// Sign of the relative phase `e^{i (w_i - w_j) tau}` in the exchange sum.
    fn delay_sign(&self) -> T {
        match self.shift_arm {
            Arm::Two => T::one(),
            Arm::One => -T::one(),
        }
    }
}

/// Coincidence probability sampled over `(mu, tau)`, `mu`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceMap<T> {
    mu_grid: FrequencyGrid<T>,
    tau_grid: TimeGrid<T>,
    values: Vec<T>,
}

/// Real function sampled on a `(mu, tau)` lattice.
pub trait PhaseSpaceMap<T: Real> {
    fn mu_grid(&self) -> &FrequencyGrid<T>;
    fn tau_grid(&self) -> &TimeGrid<T>;
    /// Values with `tau` varying fastest.
    fn values(&self) -> &[T];

    fn at(&self, i_mu: usize, j_tau: usize) -> T {
        self.values()[i_mu * self.tau_grid().n() + j_tau]
    }

    fn index_of(&self, flat: usize) -> (usize, usize) {
        let nt = self.tau_grid().n();
        (flat / nt, flat % nt)
    }

    /// `(i_mu, j_tau, value)` of the smallest entry (first on ties).
    fn min_point(&self) -> (usize, usize, T) {
        let (k, v) = self
            .values()
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |best, (k, v)| if *v < best.1 { (k, *v) } else { best });
        let (i, j) = self.index_of(k);
        (i, j, v)
    }

    /// `(i_mu, j_tau, value)` of the largest entry (first on ties).
    fn max_point(&self) -> (usize, usize, T) {
        let (k, v) = self
            .values()
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (k, v)| if *v > best.1 { (k, *v) } else { best });
        let (i, j) = self.index_of(k);
        (i, j, v)
    }
}

impl<T: Real> CoincidenceMap<T> {
    pub fn new(mu_grid: FrequencyGrid<T>, tau_grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != mu_grid.n() * tau_grid.n() {
            return Err(Error::Dimension(format!(
                "coincidence map has {} values for {}x{} grid",
                values.len(),
                mu_grid.n(),
                tau_grid.n()
            )));
        }
        Ok(Self {
            mu_grid,
            tau_grid,
            values,
        })
    }
}

impl<T: Real> PhaseSpaceMap<T> for CoincidenceMap<T> {
    fn mu_grid(&self) -> &FrequencyGrid<T> {
        &self.mu_grid
    }
    fn tau_grid(&self) -> &TimeGrid<T> {
        &self.tau_grid
    }
    fn values(&self) -> &[T] {
        &self.values
    }
}

fn require_square<T: Real>(jsa: &JointSpectralAmplitude<T>) -> Result<()> {
    if !jsa.is_square() {
        return Err(Error::Dimension(
            "coincidence needs both arms of the JSA on the same frequency grid".into(),
        ));
    }
    Ok(())
}

/// JSA values with the frequency displacement applied (delay not yet applied).
fn displaced<T: Real>(jsa: &JointSpectralAmplitude<T>, shift: T, arm: Arm) -> Result<Vec<Complex<T>>> {
    let n1 = jsa.grid1().n();
    let n2 = jsa.grid2().n();
    let src = jsa.values();
    if shift == T::zero() {
        return Ok(src.to_vec());
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); n1 * n2];
    match arm {
        Arm::Two => {
            let h = jsa.grid2().step();
            for i in 0..n1 {
                let row = sfgrid::shift_samples(&src[i * n2..(i + 1) * n2], h, shift, Boundary::Zero);
                out[i * n2..(i + 1) * n2].copy_from_slice(&row.values);
            }
        }
        Arm::One => {
            let h = jsa.grid1().step();
            let mut col = vec![Complex::new(T::zero(), T::zero()); n1];
            for j in 0..n2 {
                for i in 0..n1 {
                    col[i] = src[i * n2 + j];
                }
                let moved = sfgrid::shift_samples(&col, h, shift, Boundary::Zero);
                for i in 0..n1 {
                    out[i * n2 + j] = moved.values[i];
                }
            }
        }
    }
    let before = src.iter().fold(T::zero(), |a, v| a + v.norm_sqr());
    let after = out.iter().fold(T::zero(), |a, v| a + v.norm_sqr());
    let lost = if before > T::zero() {
        (T::one() - after / before).max(T::zero())
    } else {
        T::zero()
    };
    if lost > T::lit(SHIFT_LOSS_LIMIT) {
        return Err(Error::Accuracy {
            what: format!("frequency displacement by {shift}"),
            lost: lost.as_f64(),
            limit: SHIFT_LOSS_LIMIT,
        });
    }
    if lost > T::lit(SHIFT_LOSS_WARN) {
        warn!("frequency displacement by {shift} pushes {:.3e} of the norm off the grid", lost.as_f64());
    }
    Ok(out)
}

/// `B_d = sum_{i - j = d} g_ij conj(g_ji)` for `d = -(n-1)..=(n-1)`.
fn exchange_diagonals<T: Real>(g: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut b = vec![Complex::new(T::zero(), T::zero()); 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            b[i + n - 1 - j] = b[i + n - 1 - j] + g[i * n + j] * g[j * n + i].conj();
        }
    }
    b
}

fn norm_sqr_of<T: Real>(jsa: &JointSpectralAmplitude<T>) -> Result<T> {
    let n = jsa.norm_sqr();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(Error::DegenerateState("coincidence of a zero-norm JSA".into()));
    }
    Ok(n)
}

fn finish<T: Real>(overlap: Complex<T>) -> Result<T> {
    let c = T::lit(0.5) - T::lit(0.5) * overlap.re;
    let tol = T::lit(RANGE_TOL);
    if !(c >= -tol && c <= T::one() + tol) {
        return Err(Error::OutOfRange {
            what: "coincidence probability".into(),
            value: c.as_f64(),
        });
    }
    Ok(c.max(T::zero()).min(T::one()))
}

/// Normalized exchange overlap `\int\int f'(w1, w2) conj(f'(w2, w1)) / ||f||^2`
/// by the direct double sum; real up to rounding.
pub fn exchange_overlap<T: Real>(jsa: &JointSpectralAmplitude<T>, settings: &ArmSettings<T>) -> Result<Complex<T>> {
    require_square(jsa)?;
    let norm = norm_sqr_of(jsa)?;
    let n = jsa.grid1().n();
    let g = displaced(jsa, settings.shift, settings.shift_arm)?;
    let h = jsa.grid1().step();
    let phase: Vec<Complex<T>> = (0..2 * n - 1)
        .map(|d| {
            let dd = T::from_i64(d as i64 - (n as i64 - 1)).expect("diagonal index");
            cis(settings.delay_sign() * dd * h * settings.delay)
        })
        .collect();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            acc = acc + g[i * n + j] * g[j * n + i].conj() * phase[i + n - 1 - j];
        }
    }
    Ok(acc * (jsa.cell() / norm))
}

/// `C = 1/2 - 1/2 Re` of the exchange overlap under explicit arm settings.
pub fn coincidence_arms<T: Real>(jsa: &JointSpectralAmplitude<T>, settings: &ArmSettings<T>) -> Result<T> {
    finish(exchange_overlap(jsa, settings)?)
}

/// Coincidence probability at a phase-space point (see [`ArmSettings::from_point`]).
pub fn coincidence<T: Real>(jsa: &JointSpectralAmplitude<T>, point: &PhaseSpacePoint<T>) -> Result<T> {
    coincidence_arms(jsa, &ArmSettings::from_point(point))
}

/// Delay sweep at a fixed physical displacement, via a chirp-z sum over the
/// exchange diagonals.
pub fn hom_scan_arms<T: Real>(
    jsa: &JointSpectralAmplitude<T>,
    tau_grid: &TimeGrid<T>,
    shift: T,
    shift_arm: Arm,
) -> Result<Vec<T>> {
    require_square(jsa)?;
    let norm = norm_sqr_of(jsa)?;
    let n = jsa.grid1().n();
    let h = jsa.grid1().step();
    let g = displaced(jsa, shift, shift_arm)?;
    let b = exchange_diagonals(&g, n);
    let sign = ArmSettings {
        delay: T::zero(),
        shift,
        shift_arm,
    }
    .delay_sign();
    let diagonals = Lattice {
        start: -T::from_usize_lossy(n - 1) * h * sign,
        step: h * sign,
        len: 2 * n - 1,
    };
    let scale = jsa.cell() / norm;
    oscillatory_sum(&b, diagonals, Lattice::from(tau_grid), Kernel::Positive)
        .into_iter()
        .map(|o| finish(o * scale))
        .collect()
}

/// Coincidence versus delay at Wigner coordinate `mu`.
pub fn hom_scan<T: Real>(jsa: &JointSpectralAmplitude<T>, tau_grid: &TimeGrid<T>, mu: T) -> Result<Vec<T>> {
    hom_scan_arms(jsa, tau_grid, T::lit(2.0) * mu, Arm::Two)
}

/// Full `(mu, tau)` sweep; `mu` rows run in parallel, output order is fixed.
pub fn coincidence_map<T: Real>(
    jsa: &JointSpectralAmplitude<T>,
    mu_grid: &FrequencyGrid<T>,
    tau_grid: &TimeGrid<T>,
) -> Result<CoincidenceMap<T>> {
    let rows: Vec<Vec<T>> = mu_grid
        .samples()
        .par_iter()
        .map(|mu| hom_scan(jsa, tau_grid, *mu))
        .collect::<Result<_>>()?;
    CoincidenceMap::new(*mu_grid, *tau_grid, rows.concat())
}

/// Dip of two independent photons with identical spectrum `g`, computed in
/// the time domain: `C = 1/2 (1 - |\int g~(t) conj(g~(t - tau)) dt|^2)`.
pub fn independent_source_dip<T: Real>(g: &SpectralAmplitude<T>, tau_grid: &TimeGrid<T>) -> Result<Vec<T>> {
    let norm = g.norm_sqr();
    if !(norm > T::zero()) {
        return Err(Error::DegenerateState("independent-source dip of a zero amplitude".into()));
    }
    let (gt, tg) = g.to_time()?;
    let dt = tg.step();
    tau_grid
        .samples()
        .par_iter()
        .map(|tau| {
            let moved = sfgrid::shift_samples(&gt, dt, *tau, Boundary::Periodic);
            let o = sfgrid::inner_product(&moved.values, &gt, dt) / norm;
            finish(Complex::new(o.norm_sqr(), T::zero()))
        })
        .collect()
}

fn shifted_window<T: Real>(f: &SpectralAmplitude<T>, window: &SpectralAmplitude<T>, mu: T) -> Result<Vec<Complex<T>>> {
    if !f.grid().same_lattice(window.grid()) {
        return Err(Error::Dimension("spectrogram needs pulse and window on the same grid".into()));
    }
    let moved = sfgrid::shift_samples(window.values(), window.grid().step(), mu, Boundary::Zero);
    if moved.lost > T::lit(SHIFT_LOSS_LIMIT) {
        return Err(Error::Accuracy {
            what: format!("window displacement by {mu}"),
            lost: moved.lost.as_f64(),
            limit: SHIFT_LOSS_LIMIT,
        });
    }
    Ok(moved.values)
}

fn spectrogram_value<T: Real>(x: Complex<T>) -> Result<T> {
    let p = x.norm_sqr();
    if p > T::one() + T::lit(RANGE_TOL) {
        return Err(Error::OutOfRange {
            what: "spectrogram overlap".into(),
            value: p.as_f64(),
        });
    }
    Ok(T::lit(0.5) * (T::one() - p.min(T::one())))
}

/// `S(mu, tau) = 1/2 (1 - |\int conj(f(w)) g(w - mu) e^{i w tau} dw|^2)`, with
/// `mu` the physical window displacement.
pub fn spectrogram<T: Real>(f: &SpectralAmplitude<T>, window: &SpectralAmplitude<T>, point: &PhaseSpacePoint<T>) -> Result<T> {
    let gw = shifted_window(f, window, point.mu)?;
    let grid = f.grid();
    let x = f
        .values()
        .iter()
        .zip(&gw)
        .enumerate()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (k, (a, b))| {
            acc + a.conj() * b * cis(grid.omega(k) * point.tau)
        });
    spectrogram_value(x * grid.step())
}

/// Spectrogram over a `(mu, tau)` lattice.
pub fn spectrogram_map<T: Real>(
    f: &SpectralAmplitude<T>,
    window: &SpectralAmplitude<T>,
    mu_grid: &FrequencyGrid<T>,
    tau_grid: &TimeGrid<T>,
) -> Result<CoincidenceMap<T>> {
    let grid = *f.grid();
    let rows: Vec<Vec<T>> = mu_grid
        .samples()
        .par_iter()
        .map(|mu| {
            let gw = shifted_window(f, window, *mu)?;
            let prod: Vec<_> = f.values().iter().zip(&gw).map(|(a, b)| a.conj() * b * grid.step()).collect();
            oscillatory_sum(&prod, Lattice::from(&grid), Lattice::from(tau_grid), Kernel::Positive)
                .into_iter()
                .map(spectrogram_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    CoincidenceMap::new(*mu_grid, *tau_grid, rows.concat())
}
