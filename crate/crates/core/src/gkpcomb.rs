//! Frequency-comb (GKP-style) logical states and the shift gates that act on
//! them as Pauli operators.
//!
//! Logical Zero has teeth at `w_c + 2 n D`, One at `w_c + (2 n + 1) D`. A
//! frequency shift by `D` is logical X; a delay by `pi / D` multiplies tooth
//! `n` by `(-1)^n` and is logical Z.

use log::warn;
use num_complex::Complex;

use crate::biphoton::{jsa_from_pm, PMConvention, SpectralAmplitude};
use crate::error::{Error, Result};
use crate::hom::hom_scan;
use crate::num::{cis, nearest_integer, Real};
use crate::sfgrid::{self, Boundary, FrequencyGrid, Kernel, Lattice, TimeGrid};

const SHIFT_LOSS_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicalLabel {
    Zero,
    One,
    Plus,
    Minus,
    /// Not (known to be) a logical basis state.
    Raw,
}

/// Comb envelope: Gaussian teeth under a Gaussian envelope, or ideal
/// single-sample teeth filling a periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombShape<T> {
    Gaussian { tooth_width: T, envelope_width: T },
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombState<T> {
    amplitude: SpectralAmplitude<T>,
    spacing: T,
    shape: CombShape<T>,
    label: LogicalLabel,
}

impl<T: Real> CombState<T> {
    pub fn amplitude(&self) -> &SpectralAmplitude<T> {
        &self.amplitude
    }

    pub fn into_amplitude(self) -> SpectralAmplitude<T> {
        self.amplitude
    }

    /// Tooth spacing `D` (half the logical period).
    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn shape(&self) -> CombShape<T> {
        self.shape
    }

    pub fn label(&self) -> LogicalLabel {
        self.label
    }

    /// Comb reference frequency (the grid center).
    pub fn center(&self) -> T {
        self.amplitude.grid().center()
    }
}

impl<T> AsRef<SpectralAmplitude<T>> for CombState<T> {
    fn as_ref(&self) -> &SpectralAmplitude<T> {
        &self.amplitude
    }
}

fn check_spacing<T: Real>(spacing: T) -> Result<()> {
    if !(spacing > T::zero()) || !spacing.is_finite() {
        return Err(Error::Config(format!("tooth spacing must be positive, got {spacing}")));
    }
    Ok(())
}

fn superpose<T: Real>(zero: &SpectralAmplitude<T>, one: &SpectralAmplitude<T>, sign: T) -> Result<SpectralAmplitude<T>> {
    zero.add(&one.scaled(Complex::new(sign, T::zero())))?.normalize()
}

/// Gaussian comb: teeth of amplitude width `tooth_width`, envelope
/// `exp(-(w - w_c)^2 / (2 envelope_width^2))`, `w_c` the grid center.
///
/// Needs `tooth_width < spacing / 4`, at least eight samples across each
/// tooth (`4 tooth_width / step >= 8`) and an envelope spanning at least
/// eight logical teeth (`envelope_width >= 8 spacing`).
pub fn encode<T: Real>(
    label: LogicalLabel,
    spacing: T,
    tooth_width: T,
    envelope_width: T,
    grid: FrequencyGrid<T>,
) -> Result<CombState<T>> {
    check_spacing(spacing)?;
    if !(tooth_width > T::zero()) || tooth_width >= spacing / T::lit(4.0) {
        return Err(Error::Resolution(format!(
            "tooth width {tooth_width} must be positive and below a quarter of the spacing {spacing}"
        )));
    }
    if T::lit(4.0) * tooth_width < T::lit(8.0) * grid.step() {
        return Err(Error::Resolution(format!(
            "grid step {} resolves teeth of width {tooth_width} with fewer than 8 samples",
            grid.step()
        )));
    }
    if !(envelope_width >= T::lit(8.0) * spacing) || !envelope_width.is_finite() {
        return Err(Error::Config(format!(
            "envelope width {envelope_width} covers fewer than 8 teeth of spacing {spacing}"
        )));
    }
    grid.check_gaussian_coverage(grid.center(), envelope_width, "comb envelope");
    let word = |offset: T| -> Result<SpectralAmplitude<T>> {
        let wc = grid.center();
        let reach = (grid.span() / T::lit(2.0) + T::lit(8.0) * tooth_width) / (T::lit(2.0) * spacing);
        let n_max = reach.ceil().to_i64().unwrap_or(0);
        let teeth: Vec<(T, T)> = (-n_max - 1..=n_max)
            .map(|n| {
                let x = offset + T::lit(2.0) * spacing * T::from_i64(n).expect("tooth index");
                (x, (-(x * x) / (T::lit(2.0) * envelope_width * envelope_width)).exp())
            })
            .collect();
        let two_s2 = T::lit(2.0) * tooth_width * tooth_width;
        SpectralAmplitude::from_fn(grid, |w| {
            let y = w - wc;
            let v = teeth.iter().fold(T::zero(), |acc, (x, e)| {
                let d = y - *x;
                acc + *e * (-(d * d) / two_s2).exp()
            });
            Complex::new(v, T::zero())
        })
        .normalize()
    };
    let amplitude = match label {
        LogicalLabel::Zero => word(T::zero())?,
        LogicalLabel::One => word(spacing)?,
        LogicalLabel::Plus => superpose(&word(T::zero())?, &word(spacing)?, T::one())?,
        LogicalLabel::Minus => superpose(&word(T::zero())?, &word(spacing)?, -T::one())?,
        LogicalLabel::Raw => return Err(Error::Config("cannot encode a Raw logical label".into())),
    };
    Ok(CombState {
        amplitude,
        spacing,
        shape: CombShape::Gaussian {
            tooth_width,
            envelope_width,
        },
        label,
    })
}

/// Envelope-free comb with single-sample teeth; the grid is one period of
/// the lattice, so `spacing` must be a whole number of steps and the span a
/// whole number of logical periods `2 spacing`.
pub fn encode_periodic<T: Real>(label: LogicalLabel, spacing: T, grid: FrequencyGrid<T>) -> Result<CombState<T>> {
    check_spacing(spacing)?;
    let k = nearest_integer(spacing / grid.step())
        .filter(|k| *k > 0)
        .ok_or_else(|| Error::Resolution(format!("spacing {spacing} is not a whole number of grid steps {}", grid.step())))?
        as usize;
    let n = grid.n();
    if !n.is_multiple_of(2 * k) {
        return Err(Error::Config(format!(
            "periodic comb needs {n} samples to be a multiple of one logical period ({} samples)",
            2 * k
        )));
    }
    let c = n / 2;
    let word = |offset: usize| -> Result<SpectralAmplitude<T>> {
        let mut values = vec![Complex::new(T::zero(), T::zero()); n];
        for j in (0..n).filter(|j| (j + 2 * n - c - offset).is_multiple_of(2 * k)) {
            values[j] = Complex::new(T::one(), T::zero());
        }
        SpectralAmplitude::new(grid, values)?.normalize()
    };
    let amplitude = match label {
        LogicalLabel::Zero => word(0)?,
        LogicalLabel::One => word(k)?,
        LogicalLabel::Plus => superpose(&word(0)?, &word(k)?, T::one())?,
        LogicalLabel::Minus => superpose(&word(0)?, &word(k)?, -T::one())?,
        LogicalLabel::Raw => return Err(Error::Config("cannot encode a Raw logical label".into())),
    };
    Ok(CombState {
        amplitude,
        spacing,
        shape: CombShape::Periodic,
        label,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftGate<T> {
    /// `g(w) -> g(w - shift)`.
    FrequencyShift(T),
    /// `g(w) -> e^{i (w - w_c) delay} g(w)`.
    TimeShift(T),
}

impl<T: Real> ShiftGate<T> {
    /// Logical X for tooth spacing `spacing`.
    pub fn x(spacing: T) -> Self {
        ShiftGate::FrequencyShift(spacing)
    }

    /// Logical Z for tooth spacing `spacing`.
    pub fn z(spacing: T) -> Self {
        ShiftGate::TimeShift(T::PI() / spacing)
    }

    fn relabel(self, label: LogicalLabel, spacing: T) -> LogicalLabel {
        use LogicalLabel::*;
        let (units, swap) = match self {
            ShiftGate::FrequencyShift(d) => (nearest_integer(d / spacing), [Zero, One]),
            ShiftGate::TimeShift(t) => (nearest_integer(t * spacing / T::PI()), [Plus, Minus]),
        };
        match (units, label) {
            (_, Raw) | (None, _) => Raw,
            (Some(u), l) if u % 2 == 0 => l,
            (Some(_), l) if l == swap[0] => swap[1],
            (Some(_), l) if l == swap[1] => swap[0],
            (Some(_), l) => l,
        }
    }
}

/// Applies a shift gate. Frequency shifts use the DFT shift theorem (periodic
/// on periodic combs); delays are a phase ramp referenced to the comb center.
pub fn apply_gate<T: Real>(state: &CombState<T>, gate: ShiftGate<T>) -> Result<CombState<T>> {
    let grid = *state.amplitude.grid();
    let values = match gate {
        ShiftGate::FrequencyShift(d) => {
            if !d.is_finite() {
                return Err(Error::Config(format!("frequency shift must be finite, got {d}")));
            }
            let boundary = match state.shape {
                CombShape::Periodic => Boundary::Periodic,
                CombShape::Gaussian { .. } => Boundary::Zero,
            };
            let moved = sfgrid::shift_samples(state.amplitude.values(), grid.step(), d, boundary);
            if moved.lost > T::lit(SHIFT_LOSS_LIMIT) {
                return Err(Error::Accuracy {
                    what: format!("comb frequency shift by {d}"),
                    lost: moved.lost.as_f64(),
                    limit: SHIFT_LOSS_LIMIT,
                });
            }
            if moved.lost > T::lit(1e-6) {
                warn!("comb frequency shift by {d} lost {:.2e} of the norm", moved.lost.as_f64());
            }
            moved.values
        }
        ShiftGate::TimeShift(t) => {
            if !t.is_finite() {
                return Err(Error::Config(format!("time shift must be finite, got {t}")));
            }
            let wc = grid.center();
            state
                .amplitude
                .values()
                .iter()
                .enumerate()
                .map(|(k, v)| v * cis((grid.omega(k) - wc) * t))
                .collect()
        }
    };
    Ok(CombState {
        amplitude: SpectralAmplitude::new(grid, values)?,
        spacing: state.spacing,
        shape: state.shape,
        label: gate.relabel(state.label, state.spacing),
    })
}

/// `<a|b>` on the shared grid.
pub fn logical_overlap<T: Real>(a: &CombState<T>, b: &CombState<T>) -> Result<Complex<T>> {
    a.amplitude.inner(&b.amplitude)
}

/// HOM delay scan of the separable pair `a(w1) b(w2)`:
/// `C(tau) = 1/2 (1 - |\int conj(b) a e^{i w tau}|^2 / (|a|^2 |b|^2))`.
///
/// A separable pair never exceeds 1/2; [`entangled_readout`] reaches 1.
pub fn hom_readout<T: Real, A, B>(a: &A, b: &B, tau_grid: &TimeGrid<T>) -> Result<Vec<T>>
where
    A: AsRef<SpectralAmplitude<T>> + ?Sized,
    B: AsRef<SpectralAmplitude<T>> + ?Sized,
{
    let (a, b) = (a.as_ref(), b.as_ref());
    if !a.grid().same_lattice(b.grid()) {
        return Err(Error::Dimension("hom readout needs both photons on the same grid".into()));
    }
    let norm = a.norm_sqr() * b.norm_sqr();
    if !(norm > T::zero()) {
        return Err(Error::DegenerateState("hom readout of a zero amplitude".into()));
    }
    let grid = a.grid();
    let prod: Vec<Complex<T>> = a.values().iter().zip(b.values()).map(|(x, y)| y.conj() * x * grid.step()).collect();
    Ok(
        sfgrid::oscillatory_sum(&prod, Lattice::from(grid), Lattice::from(tau_grid), Kernel::Positive)
            .into_iter()
            .map(|o| (T::lit(0.5) * (T::one() - o.norm_sqr() / norm)).max(T::zero()))
            .collect(),
    )
}

/// HOM delay scan at `mu = 0` of the entangled pair `f+(w+) comb(w-)`.
pub fn entangled_readout<T: Real>(
    f_plus: &SpectralAmplitude<T>,
    comb: &CombState<T>,
    convention: PMConvention,
    tau_grid: &TimeGrid<T>,
) -> Result<Vec<T>> {
    let jsa = jsa_from_pm(f_plus, &comb.amplitude, convention)?.amplitude;
    hom_scan(&jsa, tau_grid, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::separable_jsa;
    use crate::pumpeng::{cavity_comb, CavityConfig, CavityDetuning};
    use std::f64::consts::PI;

    type G = FrequencyGrid<f64>;

    /// Acceptance-size comb: spacing 1, s = 0.05, envelope 8, step s / 2.
    fn fixture(label: LogicalLabel) -> CombState<f64> {
        encode(label, 1.0, 0.05, 8.0, G::with_step(4096, 0.0, 0.025).unwrap()).unwrap()
    }

    fn periodic(label: LogicalLabel) -> CombState<f64> {
        encode_periodic(label, 1.0, G::with_step(320, 3.0, 0.1).unwrap()).unwrap()
    }

    #[test]
    fn zero_teeth_sit_on_even_multiples() {
        let z = fixture(LogicalLabel::Zero);
        let g = z.amplitude().grid();
        let p: Vec<f64> = z.amplitude().values().iter().map(|v| v.norm_sqr()).collect();
        let mut peaks = vec![];
        for k in 1..p.len() - 1 {
            if p[k] > p[k - 1] && p[k] >= p[k + 1] && g.omega(k).abs() <= 8.0 {
                peaks.push(g.omega(k));
            }
        }
        assert_eq!(peaks.len(), 9);
        for w in peaks {
            let nearest = 2.0 * (w / 2.0).round();
            assert!((w - nearest).abs() <= g.step() + 1e-12, "{w}");
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let g = G::with_step(2048, 0.0, 0.05).unwrap();
        let zero = encode(LogicalLabel::Zero, 1.0, 0.1, 8.0, g).unwrap();
        let one = encode(LogicalLabel::One, 1.0, 0.1, 8.0, g).unwrap();
        assert!(logical_overlap(&zero, &one).unwrap().norm() < 1e-8);
        let plus = encode(LogicalLabel::Plus, 1.0, 0.1, 8.0, g).unwrap();
        assert!((plus.amplitude().norm_sqr() - 1.0).abs() < 1e-10);
        let minus = encode(LogicalLabel::Minus, 1.0, 0.1, 8.0, g).unwrap();
        assert!(logical_overlap(&plus, &minus).unwrap().norm() < 1e-8);
    }

    #[test]
    fn preconditions() {
        let g = G::with_step(2048, 0.0, 0.05).unwrap();
        assert!(matches!(encode(LogicalLabel::Zero, 1.0, 0.3, 8.0, g), Err(Error::Resolution(_))));
        assert!(matches!(encode(LogicalLabel::Zero, 1.0, 0.08, 8.0, g), Err(Error::Resolution(_))));
        assert!(matches!(encode(LogicalLabel::Zero, 1.0, 0.1, 4.0, g), Err(Error::Config(_))));
        assert!(encode(LogicalLabel::Raw, 1.0, 0.1, 8.0, g).is_err());
        assert!(encode_periodic(LogicalLabel::Zero, 1.05, g).is_err());
        assert!(encode_periodic(LogicalLabel::Zero, 1.0, G::with_step(330, 0.0, 0.1).unwrap()).is_err());
    }

    #[test]
    fn x_maps_zero_to_one() {
        let zero = fixture(LogicalLabel::Zero);
        let x = apply_gate(&zero, ShiftGate::x(1.0)).unwrap();
        assert_eq!(x.label(), LogicalLabel::One);
        let f = logical_overlap(&fixture(LogicalLabel::One), &x).unwrap().norm();
        // shifted envelope overlap exp(-D^2 / (4 W^2))
        let oracle = (-1.0f64 / (4.0 * 64.0)).exp();
        assert!(f >= 0.99);
        assert!((f - oracle).abs() < 1e-4, "{f} vs {oracle}");
    }

    #[test]
    fn z_maps_plus_to_minus() {
        let plus = fixture(LogicalLabel::Plus);
        let z = apply_gate(&plus, ShiftGate::z(1.0)).unwrap();
        assert_eq!(z.label(), LogicalLabel::Minus);
        let f = logical_overlap(&fixture(LogicalLabel::Minus), &z).unwrap().norm();
        // brute quadrature of the alternating phase across one Gaussian tooth
        let s = 0.05;
        let (mut num, mut den) = (0.0, 0.0);
        for k in -4000..=4000 {
            let y = k as f64 * 1e-4;
            let w = (-(y * y) / (s * s)).exp();
            num += w * (PI * y).cos();
            den += w;
        }
        assert!(f >= 0.99);
        assert!((f - num / den).abs() < 1e-6, "{f} vs {}", num / den);
    }

    #[test]
    fn gates_preserve_norm() {
        let plus = fixture(LogicalLabel::Plus);
        for gate in [ShiftGate::x(1.0), ShiftGate::z(1.0), ShiftGate::FrequencyShift(0.3337), ShiftGate::TimeShift(0.71)] {
            let out = apply_gate(&plus, gate).unwrap();
            assert!((out.amplitude().norm_sqr() - 1.0).abs() < 1e-10, "{gate:?}");
        }
        assert_eq!(apply_gate(&plus, ShiftGate::TimeShift(0.71)).unwrap().label(), LogicalLabel::Raw);
    }

    #[test]
    fn off_grid_shift_is_rejected() {
        let zero = fixture(LogicalLabel::Zero);
        assert!(matches!(
            apply_gate(&zero, ShiftGate::FrequencyShift(40.0)),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn squares_are_identity_on_periodic_combs() {
        for label in [LogicalLabel::Zero, LogicalLabel::One, LogicalLabel::Plus, LogicalLabel::Minus] {
            let s = periodic(label);
            for gate in [ShiftGate::x(1.0), ShiftGate::z(1.0)] {
                let twice = apply_gate(&apply_gate(&s, gate).unwrap(), gate).unwrap();
                assert_eq!(twice.label(), label);
                assert!(logical_overlap(&s, &twice).unwrap().norm() >= 1.0 - 1e-6);
            }
        }
        let one = apply_gate(&periodic(LogicalLabel::Zero), ShiftGate::x(1.0)).unwrap();
        assert!((logical_overlap(&periodic(LogicalLabel::One), &one).unwrap().norm() - 1.0).abs() < 1e-12);
        let minus = apply_gate(&periodic(LogicalLabel::Plus), ShiftGate::z(1.0)).unwrap();
        assert!((logical_overlap(&periodic(LogicalLabel::Minus), &minus).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xz_and_zx_differ_by_a_sign() {
        for s in [fixture(LogicalLabel::Plus), periodic(LogicalLabel::Plus)] {
            let xz = apply_gate(&apply_gate(&s, ShiftGate::z(1.0)).unwrap(), ShiftGate::x(1.0)).unwrap();
            let zx = apply_gate(&apply_gate(&s, ShiftGate::x(1.0)).unwrap(), ShiftGate::z(1.0)).unwrap();
            let o = logical_overlap(&xz, &zx).unwrap();
            assert!((o.norm() - 1.0).abs() < 1e-8);
            assert!((o + 1.0).norm() < 1e-8, "{o}");
        }
    }

    #[test]
    fn readout_matches_two_photon_scan() {
        let g = G::with_step(96, 0.0, 0.25).unwrap();
        let a = SpectralAmplitude::gaussian(g, 0.4, 1.0).unwrap().delayed(0.7);
        let b = SpectralAmplitude::gaussian(g, -0.2, 1.3).unwrap();
        let tg = TimeGrid::with_step(40, 0.0, 0.2).unwrap();
        let fast = hom_readout(&a, &b, &tg).unwrap();
        let slow = hom_scan(&separable_jsa(&a, &b, 0.0).unwrap(), &tg, 0.0).unwrap();
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        assert!(hom_readout(&a, &a, &tg).unwrap()[20].abs() < 1e-8);
        let other = SpectralAmplitude::gaussian(G::with_step(96, 0.0, 0.2).unwrap(), 0.0, 1.0).unwrap();
        assert!(matches!(hom_readout(&a, &other, &tg), Err(Error::Dimension(_))));
    }

    #[test]
    fn cavity_satellites_follow_the_echo_ratio() {
        let g = G::with_step(4096, 0.0, 0.01).unwrap();
        let f = SpectralAmplitude::gaussian(g, 0.0, 4.0).unwrap();
        for detuning in [CavityDetuning::Resonant, CavityDetuning::AntiResonant] {
            let cav = CavityConfig::new(0.3, 10.0, detuning).unwrap();
            let comb = cavity_comb(&f, &cav).unwrap();
            let tg = TimeGrid::with_step(64, 0.0, 0.25).unwrap();
            let c = hom_readout(&comb, &comb, &tg).unwrap();
            let base = 0.5;
            let at = |tau: f64| c[((tau - tg.first()) / tg.step()).round() as usize];
            let central = base - at(0.0);
            let (right, left) = (base - at(5.0), base - at(-5.0));
            // echo amplitudes R^n pair up into R / (1 - R^2) at one spacing
            // against 1 / (1 - R^2) at zero delay
            let oracle = 0.3f64 * 0.3;
            for sat in [right, left] {
                assert!(((sat / central) - oracle).abs() < 0.05 * oracle, "{}", sat / central);
            }
        }
    }

    #[test]
    fn entangled_comb_readout_oscillates_between_zero_and_one() {
        let mut peaks = vec![];
        for (s, h) in [(0.2, 0.1), (0.1, 0.05)] {
            let n = (80.0f64 / h).round() as usize;
            let g = G::with_step(n, 0.0, h).unwrap();
            let comb = encode(LogicalLabel::One, 1.0, s, 8.0, g).unwrap();
            let fp = SpectralAmplitude::gaussian(g, 0.0, 1.0).unwrap();
            let tg = TimeGrid::with_step(4, 0.0, PI / 2.0).unwrap();
            let c = entangled_readout(&fp, &comb, PMConvention::Halved, &tg).unwrap();
            assert!(c[2] < 1e-3, "{c:?}");
            // opposite-sign teeth pairs at tau = pi / (2 D), damped by the
            // tooth transform exp(-s^2 tau^2)
            let oracle = 0.5 * (1.0 + (-(s * PI / 2.0).powi(2)).exp());
            assert!((c[3] - oracle).abs() < 2e-3, "{} vs {oracle}", c[3]);
            peaks.push(c[3]);
        }
        assert!(peaks[1] > peaks[0] && peaks[1] > 0.98);
    }
}
