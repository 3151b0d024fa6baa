//! Chronocyclic Wigner function of a spectral amplitude,
//! `W(mu, tau) = \int g(mu + x) conj(g(mu - x)) e^{2 i x tau} dx`,
//! its reconstruction from coincidence maps, marginals and the
//! negativity-based entanglement witness.

use log::warn;
use num_complex::Complex;
use rayon::prelude::*;

use crate::biphoton::{PhaseSpacePoint, SpectralAmplitude};
use crate::error::{Error, Result};
use crate::hom::{CoincidenceMap, PhaseSpaceMap};
use crate::num::{nearest_integer, Real};
use crate::sfgrid::{oscillatory_sum_with, FrequencyGrid, Kernel, Lattice, Quadrature, TimeGrid};

/// Witness threshold on `C - 1/2`.
pub const WITNESS_TOL: f64 = 1e-6;
const MARGINAL_WARN: f64 = 1e-4;

/// Wigner function sampled on a `(mu, tau)` lattice, `mu`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerMap<T> {
    mu_grid: FrequencyGrid<T>,
    tau_grid: TimeGrid<T>,
    values: Vec<T>,
}

impl<T: Real> WignerMap<T> {
    pub fn new(mu_grid: FrequencyGrid<T>, tau_grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != mu_grid.n() * tau_grid.n() {
            return Err(Error::Dimension(format!(
                "wigner map has {} values for {}x{} grid",
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

impl<T: Real> PhaseSpaceMap<T> for WignerMap<T> {
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

/// Sum over `p + q = m` of `g_p conj(g_q) e^{i (w_p - w_q) tau}` for every
/// `tau` of the output lattice, times the step.
fn half_lattice_row<T: Real>(g: &SpectralAmplitude<T>, m: i64, taus: Lattice<T>, method: Quadrature) -> Vec<Complex<T>> {
    let n = g.grid().n() as i64;
    let zero = Complex::new(T::zero(), T::zero());
    if m < 0 || m > 2 * (n - 1) {
        return vec![zero; taus.len];
    }
    let lo = (m - (n - 1)).max(0);
    let hi = m.min(n - 1);
    let v = g.values();
    let terms: Vec<_> = (lo..=hi).map(|p| v[p as usize] * v[(m - p) as usize].conj()).collect();
    let h = g.grid().step();
    let offsets = Lattice {
        start: T::from_i64(2 * lo - m).expect("lattice offset") * h,
        step: T::lit(2.0) * h,
        len: terms.len(),
    };
    oscillatory_sum_with(&terms, offsets, taus, Kernel::Positive, method)
        .into_iter()
        .map(|z| z * h)
        .collect()
}

/// Row at arbitrary `mu`: exact on the half lattice of the grid, linear in
/// `mu` between half-lattice points.
fn row<T: Real>(g: &SpectralAmplitude<T>, mu: T, taus: Lattice<T>, method: Quadrature) -> Vec<Complex<T>> {
    let grid = g.grid();
    let m = T::lit(2.0) * grid.fractional_index(mu);
    let last = T::from_usize_lossy(2 * (grid.n() - 1));
    if m < -T::lattice_tol() || m > last + T::lattice_tol() {
        warn!("wigner function requested at mu = {mu}, outside the amplitude's grid; returning zero");
    }
    if let Some(k) = nearest_integer(m) {
        return half_lattice_row(g, k, taus, method);
    }
    let m0 = m.floor();
    let frac = m - m0;
    let k = m0.to_i64().unwrap_or(i64::MIN / 2);
    let a = half_lattice_row(g, k, taus, method);
    let b = half_lattice_row(g, k + 1, taus, method);
    a.into_iter()
        .zip(b)
        .map(|(x, y)| x * (T::one() - frac) + y * frac)
        .collect()
}

fn unit_norm<T: Real>(g: &SpectralAmplitude<T>) -> Result<T> {
    let n = g.norm_sqr();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(Error::DegenerateState("wigner function of a zero amplitude".into()));
    }
    Ok(n)
}

/// Raw complex value of the Wigner sum; the imaginary part vanishes up to rounding.
pub fn wigner_point_complex<T: Real>(g: &SpectralAmplitude<T>, point: &PhaseSpacePoint<T>) -> Result<Complex<T>> {
    let norm = unit_norm(g)?;
    let taus = Lattice {
        start: point.tau,
        step: T::one(),
        len: 1,
    };
    Ok(row(g, point.mu, taus, Quadrature::Direct)[0] / norm)
}

/// `W(mu, tau)` of the normalized `g`.
pub fn wigner_point<T: Real>(g: &SpectralAmplitude<T>, point: &PhaseSpacePoint<T>) -> Result<T> {
    Ok(wigner_point_complex(g, point)?.re)
}

/// Half-sum form `\int g(mu - w/2) conj(g(mu + w/2)) e^{i tau w} dw`,
/// which equals `2 W(mu, -tau)`.
pub fn wigner_point_half_sum<T: Real>(g: &SpectralAmplitude<T>, point: &PhaseSpacePoint<T>) -> Result<T> {
    let mirrored = PhaseSpacePoint {
        mu: point.mu,
        tau: -point.tau,
    };
    Ok(T::lit(2.0) * wigner_point(g, &mirrored)?)
}

/// Wigner map by chirp-z sums over `tau`.
pub fn wigner_map<T: Real>(g: &SpectralAmplitude<T>, mu_grid: &FrequencyGrid<T>, tau_grid: &TimeGrid<T>) -> Result<WignerMap<T>> {
    wigner_map_with(g, mu_grid, tau_grid, Quadrature::Fft)
}

/// Wigner map with an explicit evaluation method for the `tau` sums.
pub fn wigner_map_with<T: Real>(
    g: &SpectralAmplitude<T>,
    mu_grid: &FrequencyGrid<T>,
    tau_grid: &TimeGrid<T>,
    method: Quadrature,
) -> Result<WignerMap<T>> {
    let norm = unit_norm(g)?;
    let taus = Lattice::from(tau_grid);
    let rows: Vec<Vec<T>> = mu_grid
        .samples()
        .par_iter()
        .map(|mu| row(g, *mu, taus, method).into_iter().map(|z| z.re / norm).collect())
        .collect();
    WignerMap::new(*mu_grid, *tau_grid, rows.concat())
}

/// `W = 1 - 2 C` elementwise.
pub fn wigner_from_hom<T: Real>(map: &CoincidenceMap<T>) -> WignerMap<T> {
    let two = T::lit(2.0);
    WignerMap {
        mu_grid: *map.mu_grid(),
        tau_grid: *map.tau_grid(),
        values: map.values().iter().map(|c| T::one() - two * *c).collect(),
    }
}

/// Marginal densities `\int W dtau / pi = |g(mu)|^2` and
/// `\int W dmu / pi = |g~(-tau)|^2`, with their integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginals<T> {
    pub spectral: Vec<T>,
    pub temporal: Vec<T>,
    pub spectral_total: T,
    pub temporal_total: T,
}

pub fn marginals<T: Real>(map: &WignerMap<T>) -> Marginals<T> {
    let nm = map.mu_grid.n();
    let nt = map.tau_grid.n();
    let dmu = map.mu_grid.step();
    let dtau = map.tau_grid.step();
    let pi = T::PI();
    let spectral: Vec<T> = (0..nm)
        .map(|i| (0..nt).fold(T::zero(), |a, j| a + map.at(i, j)) * dtau / pi)
        .collect();
    let temporal: Vec<T> = (0..nt)
        .map(|j| (0..nm).fold(T::zero(), |a, i| a + map.at(i, j)) * dmu / pi)
        .collect();
    let spectral_total = spectral.iter().fold(T::zero(), |a, v| a + *v) * dmu;
    let temporal_total = temporal.iter().fold(T::zero(), |a, v| a + *v) * dtau;
    for (name, total) in [("spectral", spectral_total), ("temporal", temporal_total)] {
        if (total - T::one()).abs() > T::lit(MARGINAL_WARN) {
            warn!("{name} marginal integrates to {total}; the map grid does not capture the whole state");
        }
    }
    Marginals {
        spectral,
        temporal,
        spectral_total,
        temporal_total,
    }
}

/// `sum max(0, -W) dmu dtau`.
pub fn negativity_volume<T: Real>(map: &WignerMap<T>) -> T {
    map.values.iter().fold(T::zero(), |a, w| a + (-*w).max(T::zero())) * map.mu_grid.step() * map.tau_grid.step()
}

/// Anything from which a coincidence probability can be read per cell.
pub trait CoincidenceView<T: Real>: PhaseSpaceMap<T> {
    fn coincidence_at(&self, flat: usize) -> T;
}

impl<T: Real> CoincidenceView<T> for CoincidenceMap<T> {
    fn coincidence_at(&self, flat: usize) -> T {
        self.values()[flat]
    }
}

impl<T: Real> CoincidenceView<T> for WignerMap<T> {
    fn coincidence_at(&self, flat: usize) -> T {
        T::lit(0.5) - T::lit(0.5) * self.values[flat]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessPoint<T> {
    pub mu: T,
    pub tau: T,
    pub coincidence: T,
}

/// Outcome of the `C > 1/2` entanglement witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub fired: bool,
    pub points: Vec<WitnessPoint<T>>,
}

/// Every lattice point with `C > 1/2 + 1e-6`.
pub fn witness<T: Real, M: CoincidenceView<T>>(map: &M) -> Witness<T> {
    let threshold = T::lit(0.5 + WITNESS_TOL);
    let points: Vec<_> = (0..map.values().len())
        .filter_map(|k| {
            let c = map.coincidence_at(k);
            (c > threshold).then(|| {
                let (i, j) = map.index_of(k);
                WitnessPoint {
                    mu: map.mu_grid().omega(i),
                    tau: map.tau_grid().t(j),
                    coincidence: c,
                }
            })
        })
        .collect();
    Witness {
        fired: !points.is_empty(),
        points,
    }
}
