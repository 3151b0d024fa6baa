//! Uniform frequency and time lattices, Riemann-sum integrals and the
//! continuous Fourier transform
//!
//! ```text
//! g~(t) = (2 pi)^(-1/2) \int g(w) e^{-i w t} dw
//! ```
//!
//! realised two ways: an FFT with phase corrections for off-centre lattices
//! (or a Bluestein chirp-z transform when the output lattice is not the
//! Fourier dual), and a direct O(n^2) quadrature used as a cross-check.

use std::sync::Arc;

use log::warn;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::num::{cis, nearest_integer, Real};

/// Uniform frequency lattice: `w_k = center + (k - n/2) * step` for `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<T> {
    n: usize,
    center: T,
    span: T,
}

impl<T: Real> FrequencyGrid<T> {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(n: usize, center: T, span: T) -> Result<Self> {
        if n < Self::MIN_SAMPLES {
            return Err(Error::Config(format!(
                "frequency grid needs at least {} samples, got {n}",
                Self::MIN_SAMPLES
            )));
        }
        if !(span > T::zero()) || !span.is_finite() || !center.is_finite() {
            return Err(Error::Config(format!(
                "frequency grid span must be finite and positive (span={span}, center={center})"
            )));
        }
        Ok(Self { n, center, span })
    }

    pub fn with_step(n: usize, center: T, step: T) -> Result<Self> {
        Self::new(n, center, step * T::from_usize_lossy(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn center(&self) -> T {
        self.center
    }

    #[inline]
    pub fn span(&self) -> T {
        self.span
    }

    #[inline]
    pub fn step(&self) -> T {
        self.span / T::from_usize_lossy(self.n)
    }

    /// Frequency of sample `k`.
    #[inline]
    pub fn omega(&self, k: usize) -> T {
        let half = T::from_usize_lossy(self.n) / T::lit(2.0);
        self.center + (T::from_usize_lossy(k) - half) * self.step()
    }

    pub fn first(&self) -> T {
        self.omega(0)
    }

    pub fn last(&self) -> T {
        self.omega(self.n - 1)
    }

    pub fn samples(&self) -> Vec<T> {
        (0..self.n).map(|k| self.omega(k)).collect()
    }

    /// Fractional sample index of frequency `w` (may lie outside `0..n`).
    #[inline]
    pub fn fractional_index(&self, w: T) -> T {
        (w - self.first()) / self.step()
    }

    /// Fourier-dual time lattice centred on `t = 0`.
    pub fn dual(&self) -> TimeGrid<T> {
        self.dual_centered(T::zero())
    }

    /// Fourier-dual time lattice: `step_t = 2 pi / (n * step)`.
    pub fn dual_centered(&self, t_center: T) -> TimeGrid<T> {
        let step_t = T::TAU() / self.span;
        TimeGrid {
            n: self.n,
            center: t_center,
            step: step_t,
        }
    }

    /// Whether a Gaussian of standard deviation `sigma` centred at `w0`
    /// fits inside the grid with at least five sigma of margin per side.
    pub fn covers_gaussian(&self, w0: T, sigma: T) -> bool {
        let margin = T::lit(5.0) * sigma;
        w0 - margin >= self.first() && w0 + margin <= self.last()
    }

    /// Logs a warning if the Gaussian is not covered (see [`covers_gaussian`](Self::covers_gaussian)).
    pub fn check_gaussian_coverage(&self, w0: T, sigma: T, what: &str) -> bool {
        let ok = self.covers_gaussian(w0, sigma);
        if !ok {
            warn!(
                "{what}: grid [{}, {}] covers fewer than 10 standard deviations of a Gaussian at {w0} with sigma {sigma}",
                self.first(),
                self.last()
            );
        }
        ok
    }

    /// True if both grids describe the same lattice (to rounding).
    pub fn same_lattice(&self, other: &Self) -> bool {
        let tol = T::lattice_tol();
        self.n == other.n
            && ((self.step() - other.step()).abs() <= tol * self.step())
            && ((self.center - other.center).abs() <= tol * self.step())
    }
}

/// Uniform time lattice: `t_j = center + (j - n/2) * step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    n: usize,
    center: T,
    step: T,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(n: usize, center: T, span: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("time grid needs at least one sample".into()));
        }
        if !(span > T::zero()) || !span.is_finite() || !center.is_finite() {
            return Err(Error::Config(format!(
                "time grid span must be finite and positive (span={span})"
            )));
        }
        Ok(Self {
            n,
            center,
            step: span / T::from_usize_lossy(n),
        })
    }

    pub fn with_step(n: usize, center: T, step: T) -> Result<Self> {
        Self::new(n, center, step * T::from_usize_lossy(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn center(&self) -> T {
        self.center
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn span(&self) -> T {
        self.step * T::from_usize_lossy(self.n)
    }

    #[inline]
    pub fn t(&self, j: usize) -> T {
        let half = T::from_usize_lossy(self.n) / T::lit(2.0);
        self.center + (T::from_usize_lossy(j) - half) * self.step
    }

    pub fn first(&self) -> T {
        self.t(0)
    }

    pub fn samples(&self) -> Vec<T> {
        (0..self.n).map(|j| self.t(j)).collect()
    }

    /// Same lattice shifted by `offset`.
    pub fn shifted(&self, offset: T) -> Self {
        Self {
            center: self.center + offset,
            ..*self
        }
    }
}

fn check_len<T>(values: &[T], n: usize, what: &str) -> Result<()> {
    if values.len() != n {
        return Err(Error::Dimension(format!(
            "{what}: {} samples for a grid of {n}",
            values.len()
        )));
    }
    Ok(())
}

/// Riemann sum `step * sum(samples)`.
pub fn integrate<T: Real>(samples: &[Complex<T>], grid: &FrequencyGrid<T>) -> Result<Complex<T>> {
    check_len(samples, grid.n(), "integrate")?;
    let sum = samples.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    Ok(sum * grid.step())
}

/// `step * sum |v|^2`.
pub fn norm_sqr<T: Real>(values: &[Complex<T>], step: T) -> T {
    values.iter().fold(T::zero(), |a, v| a + v.norm_sqr()) * step
}

/// `step * sum conj(a) b`.
pub fn inner_product<T: Real>(a: &[Complex<T>], b: &[Complex<T>], step: T) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
        * step
}

fn plan<T: Real>(n: usize, inverse: bool) -> Arc<dyn Fft<T>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Sign of the exponent in an oscillatory sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `e^{+i w x}`
    Positive,
    /// `e^{-i w x}`
    Negative,
}

impl Kernel {
    fn sign<T: Real>(self) -> T {
        match self {
            Kernel::Positive => T::one(),
            Kernel::Negative => -T::one(),
        }
    }
}

/// How an oscillatory sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Chirp-z transform.
    #[default]
    Fft,
    /// Direct summation for every output point.
    Direct,
}

/// Lattice description `x_k = start + k * step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice<T> {
    pub start: T,
    pub step: T,
    pub len: usize,
}

impl<T: Real> Lattice<T> {
    pub fn at(&self, k: usize) -> T {
        self.start + T::from_usize_lossy(k) * self.step
    }
}

impl<T: Real> From<&FrequencyGrid<T>> for Lattice<T> {
    fn from(g: &FrequencyGrid<T>) -> Self {
        Lattice {
            start: g.first(),
            step: g.step(),
            len: g.n(),
        }
    }
}

impl<T: Real> From<&TimeGrid<T>> for Lattice<T> {
    fn from(g: &TimeGrid<T>) -> Self {
        Lattice {
            start: g.first(),
            step: g.step(),
            len: g.n(),
        }
    }
}

/// Dispatches to [`oscillatory_sum`] or [`oscillatory_sum_direct`].
pub fn oscillatory_sum_with<T: Real>(
    values: &[Complex<T>],
    input: Lattice<T>,
    output: Lattice<T>,
    kernel: Kernel,
    method: Quadrature,
) -> Vec<Complex<T>> {
    match method {
        Quadrature::Fft => oscillatory_sum(values, input, output, kernel),
        Quadrature::Direct => oscillatory_sum_direct(values, input, output, kernel),
    }
}

/// `y_j = sum_k x_k exp(+-i w_j x_k)` by direct summation.
pub fn oscillatory_sum_direct<T: Real>(
    values: &[Complex<T>],
    input: Lattice<T>,
    output: Lattice<T>,
    kernel: Kernel,
) -> Vec<Complex<T>> {
    assert_eq!(values.len(), input.len);
    let s = kernel.sign::<T>();
    (0..output.len)
        .map(|j| {
            let w = output.at(j);
            values
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (k, v)| {
                    acc + v * cis(s * w * input.at(k))
                })
        })
        .collect()
}

/// `y_j = sum_k x_k exp(+-i w_j x_k)` by Bluestein's chirp-z algorithm,
/// O((n + m) log(n + m)) for arbitrary input and output lattices.
pub fn oscillatory_sum<T: Real>(
    values: &[Complex<T>],
    input: Lattice<T>,
    output: Lattice<T>,
    kernel: Kernel,
) -> Vec<Complex<T>> {
    assert_eq!(values.len(), input.len);
    let n = input.len;
    let m = output.len;
    if n == 0 || m == 0 {
        return vec![Complex::new(T::zero(), T::zero()); m];
    }
    let s = kernel.sign::<T>();
    let theta = s * input.step * output.step;
    let half = T::lit(0.5);
    let chirp = |l: i64| -> Complex<T> {
        let l2 = T::from_i64(l * l).expect("chirp index");
        cis(half * theta * l2)
    };

    let len = (n + m - 1).next_power_of_two();
    let zero = Complex::new(T::zero(), T::zero());
    let mut a = vec![zero; len];
    for (k, v) in values.iter().enumerate() {
        let kk = T::from_usize_lossy(k);
        a[k] = v * cis(s * output.start * kk * input.step) * chirp(k as i64);
    }
    let mut b = vec![zero; len];
    for (l, v) in b.iter_mut().enumerate().take(m) {
        *v = chirp(l as i64).conj();
    }
    for l in 1..n {
        b[len - l] = chirp(l as i64).conj();
    }

    let fwd = plan::<T>(len, false);
    let inv = plan::<T>(len, true);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * y;
    }
    inv.process(&mut a);
    let scale = T::one() / T::from_usize_lossy(len);

    (0..m)
        .map(|j| {
            let w = output.at(j);
            a[j] * scale * chirp(j as i64) * cis(s * w * input.start)
        })
        .collect()
}

fn inv_sqrt_tau<T: Real>() -> T {
    T::one() / T::TAU().sqrt()
}

/// Whether `tg` is the Fourier dual of `fg` (same length, reciprocal step).
pub fn is_dual<T: Real>(fg: &FrequencyGrid<T>, tg: &TimeGrid<T>) -> bool {
    if fg.n() != tg.n() {
        return false;
    }
    let product = fg.step() * tg.step() * T::from_usize_lossy(fg.n());
    (product - T::TAU()).abs() <= T::lattice_tol() * T::TAU()
}

/// Continuous Fourier transform onto the dual time lattice centred at `t = 0`.
pub fn fourier_to_time<T: Real>(
    g: &[Complex<T>],
    grid: &FrequencyGrid<T>,
) -> Result<(Vec<Complex<T>>, TimeGrid<T>)> {
    let tg = grid.dual();
    Ok((fourier_to_time_on(g, grid, &tg)?, tg))
}

/// Continuous Fourier transform evaluated on an arbitrary time lattice.
///
/// Dual lattices take the FFT path; anything else goes through the chirp-z
/// transform. Both are exact evaluations of the same Riemann sum.
pub fn fourier_to_time_on<T: Real>(
    g: &[Complex<T>],
    grid: &FrequencyGrid<T>,
    tg: &TimeGrid<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(g, grid.n(), "fourier_to_time")?;
    let pref = inv_sqrt_tau::<T>() * grid.step();
    if !is_dual(grid, tg) {
        let out = oscillatory_sum(g, grid.into(), tg.into(), Kernel::Negative);
        return Ok(out.into_iter().map(|v| v * pref).collect());
    }
    let n = grid.n();
    let half = T::from_usize_lossy(n) / T::lit(2.0);
    let h = grid.step();
    let tc = tg.center();
    let pi = T::PI();
    let mut buf: Vec<Complex<T>> = g
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let kk = T::from_usize_lossy(k);
            v * cis(-(kk - half) * h * tc + pi * kk)
        })
        .collect();
    plan::<T>(n, false).process(&mut buf);
    let global = -pi * half;
    Ok(buf
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            let jj = T::from_usize_lossy(j);
            v * pref * cis(-grid.center() * tg.t(j) + pi * jj + global)
        })
        .collect())
}

/// Direct O(n^2) quadrature of the forward transform (test and cross-check path).
pub fn fourier_to_time_direct<T: Real>(
    g: &[Complex<T>],
    grid: &FrequencyGrid<T>,
    tg: &TimeGrid<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(g, grid.n(), "fourier_to_time_direct")?;
    let pref = inv_sqrt_tau::<T>() * grid.step();
    Ok(oscillatory_sum_direct(g, grid.into(), tg.into(), Kernel::Negative)
        .into_iter()
        .map(|v| v * pref)
        .collect())
}

/// Inverse transform `g(w) = (2 pi)^(-1/2) \int g~(t) e^{+i w t} dt`.
pub fn fourier_to_frequency<T: Real>(
    gt: &[Complex<T>],
    tg: &TimeGrid<T>,
    grid: &FrequencyGrid<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(gt, tg.n(), "fourier_to_frequency")?;
    let pref = inv_sqrt_tau::<T>() * tg.step();
    if !is_dual(grid, tg) {
        let out = oscillatory_sum(gt, tg.into(), grid.into(), Kernel::Positive);
        return Ok(out.into_iter().map(|v| v * pref).collect());
    }
    let n = tg.n();
    let half = T::from_usize_lossy(n) / T::lit(2.0);
    let dt = tg.step();
    let wc = grid.center();
    let pi = T::PI();
    let mut buf: Vec<Complex<T>> = gt
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let jj = T::from_usize_lossy(j);
            v * cis((jj - half) * dt * wc - pi * jj)
        })
        .collect();
    plan::<T>(n, true).process(&mut buf);
    let global = pi * half;
    Ok(buf
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let kk = T::from_usize_lossy(k);
            v * pref * cis(grid.omega(k) * tg.center() - pi * kk + global)
        })
        .collect())
}

/// Direct quadrature of the inverse transform.
pub fn fourier_to_frequency_direct<T: Real>(
    gt: &[Complex<T>],
    tg: &TimeGrid<T>,
    grid: &FrequencyGrid<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(gt, tg.n(), "fourier_to_frequency_direct")?;
    let pref = inv_sqrt_tau::<T>() * tg.step();
    Ok(oscillatory_sum_direct(gt, tg.into(), grid.into(), Kernel::Positive)
        .into_iter()
        .map(|v| v * pref)
        .collect())
}

/// Boundary treatment for [`shift_samples`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Samples leaving the lattice are dropped; zeros enter.
    Zero,
    /// The lattice is a period; samples wrap around.
    Periodic,
}

/// Result of a lattice shift: the samples and the fraction of squared norm
/// that left the lattice (zero for periodic shifts).
#[derive(Debug, Clone)]
pub struct Shifted<T> {
    pub values: Vec<Complex<T>>,
    pub lost: T,
}

/// `out(w) = in(w - delta)` on a lattice of the given step.
///
/// Integer multiples of the step are index shifts. Fractional shifts use
/// the shift theorem: a phase ramp in the conjugate (DFT) domain, with
/// zero padding to twice the length for [`Boundary::Zero`].
pub fn shift_samples<T: Real>(
    values: &[Complex<T>],
    step: T,
    delta: T,
    boundary: Boundary,
) -> Shifted<T> {
    let n = values.len();
    let zero = Complex::new(T::zero(), T::zero());
    let before = values.iter().fold(T::zero(), |a, v| a + v.norm_sqr());
    let ratio = delta / step;
    let out = if let Some(r) = nearest_integer(ratio) {
        let mut out = vec![zero; n];
        for (k, slot) in out.iter_mut().enumerate() {
            let src = k as i64 - r;
            match boundary {
                Boundary::Zero => {
                    if src >= 0 && (src as usize) < n {
                        *slot = values[src as usize];
                    }
                }
                Boundary::Periodic => {
                    *slot = values[src.rem_euclid(n as i64) as usize];
                }
            }
        }
        out
    } else {
        let len = match boundary {
            Boundary::Zero => 2 * n,
            Boundary::Periodic => n,
        };
        let mut buf = vec![zero; len];
        buf[..n].copy_from_slice(values);
        plan::<T>(len, false).process(&mut buf);
        let lenf = T::from_usize_lossy(len);
        for (q, v) in buf.iter_mut().enumerate() {
            let signed = if q < len.div_ceil(2) {
                q as i64
            } else {
                q as i64 - len as i64
            };
            let qq = T::from_i64(signed).expect("bin index");
            *v = *v * cis(-T::TAU() * qq * ratio / lenf);
        }
        plan::<T>(len, true).process(&mut buf);
        buf.truncate(n);
        let scale = T::one() / lenf;
        buf.iter_mut().for_each(|v| *v = *v * scale);
        buf
    };
    let after = out.iter().fold(T::zero(), |a, v| a + v.norm_sqr());
    let lost = if before > T::zero() {
        match boundary {
            Boundary::Periodic => T::zero(),
            Boundary::Zero => (T::one() - after / before).max(T::zero()),
        }
    } else {
        T::zero()
    };
    Shifted { values: out, lost }
}

/// Linear interpolation of lattice samples at fractional index `x`; zero
/// outside `[0, n-1]`.
pub fn interpolate_linear<T: Real>(values: &[Complex<T>], x: T) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let n = values.len();
    if n == 0 || !x.is_finite() {
        return zero;
    }
    let last = T::from_usize_lossy(n - 1);
    let tol = T::lattice_tol();
    if x < -tol || x > last + tol {
        return zero;
    }
    let x = x.max(T::zero()).min(last);
    let i0 = x.floor();
    let frac = x - i0;
    let i = i0.to_usize().unwrap_or(0);
    if i + 1 >= n || frac <= T::zero() {
        return values[i.min(n - 1)] * (T::one() - frac);
    }
    values[i] * (T::one() - frac) + values[i + 1] * frac
}
