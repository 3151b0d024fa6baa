//! Single-photon spectral amplitudes, biphoton joint spectral amplitudes
//! (JSAs), the `w+/w-` change of variables and the frequency beam splitter.

use log::warn;
use nalgebra::{DMatrix, RealField};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::{cis, Real};
use crate::sfgrid::{self, FrequencyGrid, TimeGrid};

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex amplitude `g(w)` sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAmplitude<T> {
    grid: FrequencyGrid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> SpectralAmplitude<T> {
    pub fn new(grid: FrequencyGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Dimension(format!(
                "spectral amplitude has {} samples for a grid of {}",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: FrequencyGrid<T>, f: impl Fn(T) -> Complex<T>) -> Self {
        let values = grid.samples().into_iter().map(f).collect();
        Self { grid, values }
    }

    /// Normalized Gaussian `exp(-(w - center)^2 / (2 sigma^2))`; `|g|^2` has
    /// variance `sigma^2 / 2`.
    pub fn gaussian(grid: FrequencyGrid<T>, center: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::Config(format!("gaussian width must be positive, got {sigma}")));
        }
        grid.check_gaussian_coverage(center, sigma, "gaussian amplitude");
        let two = T::lit(2.0);
        Self::from_fn(grid, |w| {
            let x = (w - center) / sigma;
            Complex::new((-x * x / two).exp(), T::zero())
        })
        .normalize()
    }

    /// Normalized first Hermite function `(w - center) exp(-(w - center)^2 / (2 sigma^2))`,
    /// odd about `center`.
    pub fn odd_gaussian(grid: FrequencyGrid<T>, center: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::Config(format!("gaussian width must be positive, got {sigma}")));
        }
        let two = T::lit(2.0);
        Self::from_fn(grid, |w| {
            let x = (w - center) / sigma;
            Complex::new(x * (-x * x / two).exp(), T::zero())
        })
        .normalize()
    }

    #[inline]
    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn norm_sqr(&self) -> T {
        sfgrid::norm_sqr(&self.values, self.grid.step())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Returns `self / ||self||`.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::DegenerateState(
                "spectral amplitude has zero or non-finite norm".into(),
            ));
        }
        let inv = T::one() / n;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * inv).collect(),
        })
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Frequency-dependent phase `e^{i w delay}`: a delay by `delay` in time.
    pub fn delayed(&self, delay: T) -> Self {
        let grid = self.grid;
        Self {
            grid,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(k, v)| v * cis(grid.omega(k) * delay))
                .collect(),
        }
    }

    /// Linear interpolation between samples; zero outside the grid.
    pub fn sample_at(&self, w: T) -> Complex<T> {
        sfgrid::interpolate_linear(&self.values, self.grid.fractional_index(w))
    }

    /// `\int conj(self) other dw`; both amplitudes must share a lattice.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::Dimension("inner product of amplitudes on different grids".into()));
        }
        Ok(sfgrid::inner_product(&self.values, &other.values, self.grid.step()))
    }

    /// Temporal amplitude on the dual time lattice.
    pub fn to_time(&self) -> Result<(Vec<Complex<T>>, TimeGrid<T>)> {
        sfgrid::fourier_to_time(&self.values, &self.grid)
    }

    /// Sum of two amplitudes on the same lattice (unnormalized).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.grid.same_lattice(&other.grid) {
            return Err(Error::Dimension("sum of amplitudes on different grids".into()));
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

impl<T> AsRef<SpectralAmplitude<T>> for SpectralAmplitude<T> {
    fn as_ref(&self) -> &SpectralAmplitude<T> {
        self
    }
}

/// Complex joint amplitude `f(w1, w2)`, row-major with `w1` along rows.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude<T> {
    grid1: FrequencyGrid<T>,
    grid2: FrequencyGrid<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> JointSpectralAmplitude<T> {
    pub fn new(grid1: FrequencyGrid<T>, grid2: FrequencyGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid1.n() * grid2.n() {
            return Err(Error::Dimension(format!(
                "joint amplitude has {} samples for a {}x{} grid",
                values.len(),
                grid1.n(),
                grid2.n()
            )));
        }
        Ok(Self { grid1, grid2, values })
    }

    pub fn from_fn(grid1: FrequencyGrid<T>, grid2: FrequencyGrid<T>, f: impl Fn(T, T) -> Complex<T>) -> Self {
        let mut values = Vec::with_capacity(grid1.n() * grid2.n());
        for i in 0..grid1.n() {
            let w1 = grid1.omega(i);
            for j in 0..grid2.n() {
                values.push(f(w1, grid2.omega(j)));
            }
        }
        Self { grid1, grid2, values }
    }

    #[inline]
    pub fn grid1(&self) -> &FrequencyGrid<T> {
        &self.grid1
    }

    #[inline]
    pub fn grid2(&self) -> &FrequencyGrid<T> {
        &self.grid2
    }

    #[inline]
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.grid2.n() + j]
    }

    /// Area element `step1 * step2` of the double Riemann sum.
    pub fn cell(&self) -> T {
        self.grid1.step() * self.grid2.step()
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a + v.norm_sqr()) * self.cell()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::DegenerateState("joint amplitude has zero or non-finite norm".into()));
        }
        let inv = T::one() / n;
        Ok(Self {
            grid1: self.grid1,
            grid2: self.grid2,
            values: self.values.iter().map(|v| v * inv).collect(),
        })
    }

    /// Whether both arms share one lattice, as exchange operations require.
    pub fn is_square(&self) -> bool {
        self.grid1.same_lattice(&self.grid2)
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{what} needs both arms on the same grid")));
        }
        Ok(())
    }

    /// `f(w1, w2) -> f(w2, w1)`.
    pub fn swap(&self) -> Result<Self> {
        self.require_square("swap")?;
        let n = self.grid1.n();
        let mut values = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                values[j * n + i] = self.values[i * n + j];
            }
        }
        Ok(Self {
            grid1: self.grid1,
            grid2: self.grid2,
            values,
        })
    }

    /// `\int\int f(w1, w2) conj(f(w2, w1)) dw1 dw2`.
    pub fn exchange_overlap(&self) -> Result<Complex<T>> {
        self.require_square("exchange overlap")?;
        let n = self.grid1.n();
        let mut acc = czero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + self.values[i * n + j] * self.values[j * n + i].conj();
            }
        }
        Ok(acc * self.cell())
    }

    /// Bilinear interpolation; zero outside the grid.
    pub fn sample_at(&self, w1: T, w2: T) -> Complex<T> {
        let x = self.grid1.fractional_index(w1);
        let y = self.grid2.fractional_index(w2);
        let n1 = self.grid1.n();
        let n2 = self.grid2.n();
        let tol = T::lattice_tol();
        let last1 = T::from_usize_lossy(n1 - 1);
        let last2 = T::from_usize_lossy(n2 - 1);
        if !(x >= -tol && x <= last1 + tol && y >= -tol && y <= last2 + tol) {
            return czero();
        }
        let x = x.max(T::zero()).min(last1);
        let y = y.max(T::zero()).min(last2);
        let (i, fx) = split_index(x);
        let (j, fy) = split_index(y);
        let at = |a: usize, b: usize| -> Complex<T> {
            if a < n1 && b < n2 {
                self.values[a * n2 + b]
            } else {
                czero()
            }
        };
        let one = T::one();
        at(i, j) * ((one - fx) * (one - fy))
            + at(i + 1, j) * (fx * (one - fy))
            + at(i, j + 1) * ((one - fx) * fy)
            + at(i + 1, j + 1) * (fx * fy)
    }
}

fn split_index<T: Real>(x: T) -> (usize, T) {
    let f = x.floor();
    (f.to_usize().unwrap_or(0), x - f)
}

/// Point `(mu, tau)` of the chronocyclic phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint<T> {
    pub mu: T,
    pub tau: T,
}

impl<T: Real> PhaseSpacePoint<T> {
    pub fn new(mu: T, tau: T) -> Result<Self> {
        if !mu.is_finite() || !tau.is_finite() {
            return Err(Error::Config(format!("phase-space point must be finite, got ({mu}, {tau})")));
        }
        Ok(Self { mu, tau })
    }

    pub fn origin() -> Self {
        Self {
            mu: T::zero(),
            tau: T::zero(),
        }
    }
}

/// Definition of the collective frequencies `w+` and `w-`.
///
/// | variant       | `w+`             | `w-`             | `dw1 dw2 =`        |
/// |---------------|------------------|------------------|--------------------|
/// | `Halved`      | `(w1 + w2) / 2`  | `(w1 - w2) / 2`  | `2 dw+ dw-`        |
/// | `Sum`         | `w1 + w2`        | `w1 - w2`        | `dw+ dw- / 2`      |
/// | `Orthonormal` | `(w1 + w2)/sqrt2`| `(w1 - w2)/sqrt2`| `dw+ dw-`          |
///
/// Phase-space points are always expressed in the `Halved` variable;
/// [`scale`](Self::scale) converts a halved `w-` into this convention's `w-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PMConvention {
    #[default]
    Halved,
    Sum,
    Orthonormal,
}

impl PMConvention {
    /// Native `w-` per unit of halved `w-` (also the `w+` ratio).
    pub fn scale<T: Real>(self) -> T {
        match self {
            PMConvention::Halved => T::one(),
            PMConvention::Sum => T::lit(2.0),
            PMConvention::Orthonormal => T::lit(2.0).sqrt(),
        }
    }

    /// `|d(w1, w2) / d(w+, w-)|`.
    pub fn jacobian<T: Real>(self) -> T {
        match self {
            PMConvention::Halved => T::lit(2.0),
            PMConvention::Sum => T::lit(0.5),
            PMConvention::Orthonormal => T::one(),
        }
    }

    pub fn to_pm<T: Real>(self, w1: T, w2: T) -> (T, T) {
        let half = T::lit(0.5) * self.scale::<T>();
        (half * (w1 + w2), half * (w1 - w2))
    }

    pub fn from_pm<T: Real>(self, wp: T, wm: T) -> (T, T) {
        let inv = T::one() / self.scale::<T>();
        (inv * (wp + wm), inv * (wp - wm))
    }

    /// Default two-arm lattice for [`jsa_from_pm`]: every `(w1, w2)` node maps
    /// onto nodes of an `f-` lattice of step `minus_step`, and of an `f+`
    /// lattice of the same step centred at `plus_center`.
    pub fn joint_grid<T: Real>(self, plus_center: T, minus_step: T, n: usize) -> Result<FrequencyGrid<T>> {
        let step = T::lit(2.0) * minus_step / self.scale::<T>();
        let (center, _) = self.from_pm(plus_center, T::zero());
        FrequencyGrid::with_step(n, center, step)
    }

    /// Default `(w+, w-)` lattices for the beam splitter acting on a JSA with
    /// both arms on `grid`: lattice points map exactly onto input nodes.
    pub fn pm_grids<T: Real>(self, grid1: &FrequencyGrid<T>, grid2: &FrequencyGrid<T>) -> Result<(FrequencyGrid<T>, FrequencyGrid<T>)> {
        let step = grid1.step().max(grid2.step()) * self.scale::<T>();
        let (cp, cm) = self.to_pm(grid1.center(), grid2.center());
        let n = grid1.n().max(grid2.n());
        Ok((FrequencyGrid::with_step(n, cp, step)?, FrequencyGrid::with_step(n, cm, step)?))
    }
}

/// A resampled amplitude together with `|1 - ||out||^2 / ||in||^2|`
/// measured before renormalization.
#[derive(Debug, Clone)]
pub struct Resampled<A, T> {
    pub amplitude: A,
    pub norm_defect: T,
}

const NORM_LOSS_LIMIT: f64 = 0.01;

/// `f(w1)g(w2)e^{i phase}`, normalized.
pub fn separable_jsa<T: Real>(
    f: &SpectralAmplitude<T>,
    g: &SpectralAmplitude<T>,
    phase: T,
) -> Result<JointSpectralAmplitude<T>> {
    let p = cis(phase);
    let mut values = Vec::with_capacity(f.grid().n() * g.grid().n());
    for a in f.values() {
        for b in g.values() {
            values.push(a * b * p);
        }
    }
    JointSpectralAmplitude::new(*f.grid(), *g.grid(), values)?.normalize()
}

/// `f(w1, w2) = f+(w+) f-(w-)` on the default joint lattice of the convention.
pub fn jsa_from_pm<T: Real>(
    f_plus: &SpectralAmplitude<T>,
    f_minus: &SpectralAmplitude<T>,
    convention: PMConvention,
) -> Result<Resampled<JointSpectralAmplitude<T>, T>> {
    let grid = convention.joint_grid(f_plus.grid().center(), f_minus.grid().step(), f_minus.grid().n())?;
    jsa_from_pm_on(f_plus, f_minus, convention, &grid)
}

/// `f(w1, w2) = f+(w+) f-(w-)` with both arms on `grid`. `w+-` between
/// samples are linearly interpolated; outside the `f+-` support the
/// amplitude is zero.
pub fn jsa_from_pm_on<T: Real>(
    f_plus: &SpectralAmplitude<T>,
    f_minus: &SpectralAmplitude<T>,
    convention: PMConvention,
    grid: &FrequencyGrid<T>,
) -> Result<Resampled<JointSpectralAmplitude<T>, T>> {
    let raw = JointSpectralAmplitude::from_fn(*grid, *grid, |w1, w2| {
        let (wp, wm) = convention.to_pm(w1, w2);
        f_plus.sample_at(wp) * f_minus.sample_at(wm)
    });
    let expected = convention.jacobian::<T>() * f_plus.norm_sqr() * f_minus.norm_sqr();
    if !(expected > T::zero()) {
        return Err(Error::DegenerateState("f+ or f- has zero norm".into()));
    }
    let got = raw.norm_sqr();
    let defect = (T::one() - got / expected).abs();
    if defect > T::lit(NORM_LOSS_LIMIT) {
        warn!(
            "jsa_from_pm lost {:.3}% of the norm outside the f+/f- support",
            defect.as_f64() * 100.0
        );
    }
    Ok(Resampled {
        amplitude: raw.normalize()?,
        norm_defect: defect,
    })
}

/// Frequency beam splitter `|w1, w2> -> |w+, w->` onto the default lattices.
pub fn frequency_beam_splitter<T: Real>(
    jsa: &JointSpectralAmplitude<T>,
    convention: PMConvention,
) -> Result<Resampled<JointSpectralAmplitude<T>, T>> {
    let (gp, gm) = convention.pm_grids(jsa.grid1(), jsa.grid2())?;
    frequency_beam_splitter_onto(jsa, convention, &gp, &gm)
}

/// Frequency beam splitter resampled onto the given `(w+, w-)` lattices by
/// bilinear interpolation with zero padding.
pub fn frequency_beam_splitter_onto<T: Real>(
    jsa: &JointSpectralAmplitude<T>,
    convention: PMConvention,
    plus_grid: &FrequencyGrid<T>,
    minus_grid: &FrequencyGrid<T>,
) -> Result<Resampled<JointSpectralAmplitude<T>, T>> {
    let root_j = convention.jacobian::<T>().sqrt();
    let out = JointSpectralAmplitude::from_fn(*plus_grid, *minus_grid, |wp, wm| {
        let (w1, w2) = convention.from_pm(wp, wm);
        jsa.sample_at(w1, w2) * root_j
    });
    let before = jsa.norm_sqr();
    if !(before > T::zero()) {
        return Err(Error::DegenerateState("beam splitter input has zero norm".into()));
    }
    let defect = (T::one() - out.norm_sqr() / before).abs();
    if defect > T::lit(NORM_LOSS_LIMIT) {
        return Err(Error::Accuracy {
            what: "frequency beam splitter resampling".into(),
            lost: defect.as_f64(),
            limit: NORM_LOSS_LIMIT,
        });
    }
    let amplitude = out.normalize()?;
    let scale = before.sqrt();
    let amplitude = JointSpectralAmplitude {
        values: amplitude.values.into_iter().map(|v| v * scale).collect(),
        ..amplitude
    };
    Ok(Resampled { amplitude, norm_defect: defect })
}

/// Grid-weighted singular values of the amplitude matrix (descending),
/// with values below `1e-12 * max` dropped.
pub fn schmidt_singular_values<T: Real + RealField>(jsa: &JointSpectralAmplitude<T>) -> Vec<T> {
    let n1 = jsa.grid1().n();
    let n2 = jsa.grid2().n();
    let w = num_traits::Float::sqrt(jsa.cell());
    let m = DMatrix::<Complex<T>>::from_fn(n1, n2, |i, j| jsa.get(i, j) * w);
    let mut s: Vec<T> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let cutoff = s.first().copied().unwrap_or_else(T::zero) * T::lit(1e-12);
    s.retain(|v| *v > cutoff);
    s
}

/// Normalized Schmidt coefficients `lambda_k = s_k^2 / sum s^2`.
pub fn schmidt_coefficients<T: Real + RealField>(jsa: &JointSpectralAmplitude<T>) -> Vec<T> {
    let s = schmidt_singular_values(jsa);
    let total = s.iter().fold(T::zero(), |a, v| a + *v * *v);
    s.iter().map(|v| *v * *v / total).collect()
}

/// Schmidt number `K = (sum lambda)^2 / sum lambda^2`, `K = 1` iff separable.
pub fn schmidt_number<T: Real + RealField>(jsa: &JointSpectralAmplitude<T>) -> Result<T> {
    let lambda = schmidt_coefficients(jsa);
    if lambda.is_empty() {
        return Err(Error::DegenerateState("schmidt number of a zero amplitude".into()));
    }
    let sum = lambda.iter().fold(T::zero(), |a, v| a + *v);
    let sum2 = lambda.iter().fold(T::zero(), |a, v| a + *v * *v);
    Ok(sum * sum / sum2)
}
