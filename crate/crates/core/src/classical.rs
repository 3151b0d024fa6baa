//! Classical analogue of the dip: normalized intensity correlation of two
//! coherent states sharing one spectral envelope, with a random relative
//! phase averaged analytically.

use num_complex::Complex;
use rayon::prelude::*;

use crate::biphoton::SpectralAmplitude;
use crate::error::{Error, Result};
use crate::num::{cis, Real};
use crate::sfgrid::TimeGrid;

/// Distribution of the relative phase between the two coherent inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseDistribution<T> {
    UniformContinuous,
    /// Two equally likely phases.
    TwoPoint(T, T),
    Fixed(T),
}

impl<T: Real> PhaseDistribution<T> {
    /// `(<e^{i phi}>, <e^{2 i phi}>)`.
    pub fn moments(&self) -> (Complex<T>, Complex<T>) {
        let two = T::lit(2.0);
        match *self {
            PhaseDistribution::UniformContinuous => (Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero())),
            PhaseDistribution::TwoPoint(a, b) => {
                let half = T::lit(0.5);
                ((cis(a) + cis(b)) * half, (cis(two * a) + cis(two * b)) * half)
            }
            PhaseDistribution::Fixed(p) => (cis(p), cis(two * p)),
        }
    }
}

/// Coherent states `|alpha>_1 |alpha e^{i phi}>_2` with a random `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentInput<T> {
    alpha: SpectralAmplitude<T>,
    phase: PhaseDistribution<T>,
}

impl<T: Real> CoherentInput<T> {
    pub fn new(alpha: SpectralAmplitude<T>, phase: PhaseDistribution<T>) -> Result<Self> {
        let n = alpha.norm_sqr();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::DegenerateState("coherent input has zero mean photon number".into()));
        }
        Ok(Self { alpha, phase })
    }

    pub fn alpha(&self) -> &SpectralAmplitude<T> {
        &self.alpha
    }

    pub fn phase(&self) -> &PhaseDistribution<T> {
        &self.phase
    }

    pub fn with_phase(&self, phase: PhaseDistribution<T>) -> Self {
        Self {
            alpha: self.alpha.clone(),
            phase,
        }
    }

    /// Mean total photon number `<N> = 2 \int |alpha|^2`.
    pub fn mean_photon_number(&self) -> T {
        T::lit(2.0) * self.alpha.norm_sqr()
    }

    /// `J(t) = \int |alpha(w)|^2 e^{i w t} dw`.
    pub fn spectral_overlap(&self, t: T) -> Complex<T> {
        let g = self.alpha.grid();
        self.alpha
            .values()
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (k, a)| acc + cis(g.omega(k) * t) * a.norm_sqr())
            * g.step()
    }
}

/// Phase-averaged numerator and denominator of the correlation ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMoments<T> {
    pub numerator: T,
    pub denominator: T,
}

/// `<N>^2 - 2 Re[<e^{2i phi}> J^2] - 2 |J|^2` over `<N>^2 - 4 (Re[<e^{i phi}> J])^2`.
pub fn correlation_moments<T: Real>(input: &CoherentInput<T>, t: T) -> CorrelationMoments<T> {
    let n = input.mean_photon_number();
    let j = input.spectral_overlap(t);
    let (e1, e2) = input.phase.moments();
    let two = T::lit(2.0);
    let first = (e1 * j).re;
    CorrelationMoments {
        numerator: n * n - two * (e2 * j * j).re - two * j.norm_sqr(),
        denominator: n * n - T::lit(4.0) * first * first,
    }
}

fn ratio<T: Real>(m: CorrelationMoments<T>, scale: T, t: T) -> Result<T> {
    if m.denominator.abs() <= T::epsilon().sqrt() * scale {
        return Err(Error::DegenerateState(format!(
            "intensity correlation is 0/0 at t = {t}: one output port receives no light"
        )));
    }
    Ok(m.numerator / m.denominator)
}

/// `C(t) = <N_A N_B> / (<N_A> <N_B>)` after phase averaging.
pub fn intensity_correlation<T: Real>(input: &CoherentInput<T>, t: T) -> Result<T> {
    let n = input.mean_photon_number();
    ratio(correlation_moments(input, t), n * n, t)
}

pub fn correlation_scan<T: Real>(input: &CoherentInput<T>, t_grid: &TimeGrid<T>) -> Result<Vec<T>> {
    t_grid.samples().par_iter().map(|t| intensity_correlation(input, *t)).collect()
}

/// Correlation with the phase-dependent first-order terms removed,
/// `1 - 2 |J|^2 / <N>^2`, which lies in `[1/2, 1]`.
pub fn second_order_only_correlation<T: Real>(input: &CoherentInput<T>, t: T) -> T {
    let n = input.mean_photon_number();
    T::one() - T::lit(2.0) * input.spectral_overlap(t).norm_sqr() / (n * n)
}

pub fn second_order_scan<T: Real>(input: &CoherentInput<T>, t_grid: &TimeGrid<T>) -> Vec<T> {
    t_grid
        .samples()
        .par_iter()
        .map(|t| second_order_only_correlation(input, *t))
        .collect()
}

/// `(C_far - C_min) / C_far` with `C_far` the mean over the outer 10% of the
/// scan (5% at each end); zero for flat or empty curves.
pub fn visibility<T: Real>(curve: &[T]) -> T {
    let n = curve.len();
    if n == 0 {
        return T::zero();
    }
    let edge = (n / 20).max(1);
    let outer: Vec<T> = curve[..edge].iter().chain(&curve[n - edge..]).copied().collect();
    let far = outer.iter().fold(T::zero(), |a, v| a + *v) / T::from_usize_lossy(outer.len());
    let min = curve.iter().copied().fold(T::infinity(), T::min);
    let depth = far - min;
    if !(far.abs() > T::zero()) || depth.abs() <= T::epsilon() * T::lit(16.0) * far.abs() {
        return T::zero();
    }
    depth / far
}
