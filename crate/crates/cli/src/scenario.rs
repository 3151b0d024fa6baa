//! Scenario files: one JSON document per experiment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    HomScan,
    CoincidenceMap,
    WignerMap,
    ClassicalDip,
    PumpState,
    CombReadout,
    Spectrogram,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::HomScan => "hom_scan",
            Kind::CoincidenceMap => "coincidence_map",
            Kind::WignerMap => "wigner_map",
            Kind::ClassicalDip => "classical_dip",
            Kind::PumpState => "pump_state",
            Kind::CombReadout => "comb_readout",
            Kind::Spectrogram => "spectrogram",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Frequency lattice shared by every spectral amplitude.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Axis>,
    /// Wigner coordinate of a delay scan.
    #[serde(default)]
    pub mu_offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<AmplitudeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<AmplitudeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump: Option<PumpSpec>,
    #[serde(default)]
    pub numerics: Numerics,
}

/// Uniform lattice; give exactly one of `step` and `span`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    #[serde(default)]
    pub center: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    #[default]
    Fft,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Numerics {
    #[serde(default)]
    pub quadrature: Quadrature,
    /// Also evaluate with the other quadrature and report the RMS difference.
    #[serde(default)]
    pub dual_path_check: bool,
    /// Report Wigner marginals; the map must cover the whole state.
    #[serde(default)]
    pub marginals: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatAxis {
    /// Lobes displaced in frequency.
    #[default]
    Frequency,
    /// Lobes displaced in time.
    Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weighted {
    /// Complex weight `[re, im]`.
    pub weight: [f64; 2],
    pub amplitude: AmplitudeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeSpec {
    /// `exp(-x^2 / 2) e^{i (phase + chirp (w - center)^2 + w delay)}`, `x = (w - center) / sigma`.
    Gaussian {
        #[serde(default)]
        center: f64,
        sigma: f64,
        #[serde(default)]
        delay: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        chirp: f64,
    },
    /// First Hermite-Gauss function.
    OddGaussian {
        #[serde(default)]
        center: f64,
        sigma: f64,
        #[serde(default)]
        delay: f64,
    },
    /// Two Gaussian lobes at `center -+ separation / 2` (in frequency or
    /// delay) with relative phase `phase`.
    Cat {
        #[serde(default)]
        center: f64,
        separation: f64,
        sigma: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        axis: CatAxis,
    },
    /// Normalized weighted sum.
    Sum(Vec<Weighted>),
    /// Phase-matching amplitude of a pump configuration.
    Pump(PumpSpec),
    /// Fabry-Perot filtered amplitude.
    Cavity {
        input: Box<AmplitudeSpec>,
        reflectivity: f64,
        roundtrip_time: f64,
        #[serde(default)]
        detuning: Detuning,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detuning {
    #[default]
    Resonant,
    AntiResonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    Halved,
    Sum,
    Orthonormal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// `f(w1) g(w2) e^{i phase}`.
    Separable {
        first: AmplitudeSpec,
        second: AmplitudeSpec,
        #[serde(default)]
        phase: f64,
    },
    /// `f(w1) g(w2) - g(w1) f(w2)`.
    Antisymmetric { first: AmplitudeSpec, second: AmplitudeSpec },
    /// `f+(w+) f-(w-)`.
    Pm {
        plus: AmplitudeSpec,
        minus: AmplitudeSpec,
        #[serde(default)]
        convention: Convention,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub length: f64,
    pub group_velocity: f64,
    pub omega_p: f64,
    /// Degeneracy angle in radians.
    pub theta_deg: f64,
    #[serde(default = "unit")]
    pub c: f64,
}

fn unit() -> f64 {
    1.0
}

fn unit_weight() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub waist: f64,
    /// Incidence angle in radians.
    pub theta: f64,
    #[serde(default)]
    pub z0: f64,
    #[serde(default = "unit_weight")]
    pub amplitude: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    pub device: Device,
    pub beams: Vec<Beam>,
    pub z_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSpec {
    Uniform,
    TwoPoint([f64; 2]),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSpec {
    pub phase: PhaseSpec,
    /// Keep only the phase-independent second-order term.
    #[serde(default)]
    pub second_order_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Zero,
    One,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    X,
    Z,
    FrequencyShift(f64),
    TimeShift(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// Gated comb against the reference comb as two independent photons.
    #[default]
    Separable,
    /// Gated comb as the `f-` factor of an entangled pair.
    Entangled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombSpec {
    pub label: Label,
    pub spacing: f64,
    /// Envelope-free comb with single-sample teeth on a periodic grid.
    #[serde(default)]
    pub periodic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tooth_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope_width: Option<f64>,
    #[serde(default)]
    pub gates: Vec<Gate>,
    #[serde(default)]
    pub readout: Readout,
    /// Second photon of a separable readout; defaults to the ungated comb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Label>,
    /// Width of the Gaussian `f+` of an entangled readout.
    #[serde(default = "unit")]
    pub plus_sigma: f64,
}

/// A parsed scenario plus the unknown fields that were skipped.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub scenario: Scenario,
    pub unknown_fields: Vec<String>,
}

pub fn parse(text: &str, origin: &str) -> Result<Parsed, CliError> {
    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_ignored::deserialize(&mut de, |path| {
        // serde_ignored marks Option and newtype layers with `?`
        let path = path.to_string();
        unknown.push(path.split('.').filter(|s| *s != "?").collect::<Vec<_>>().join("."));
    })
        .map_err(|e| json_error(origin, &e))?;
    de.end().map_err(|e| json_error(origin, &e))?;
    check(&scenario, origin)?;
    Ok(Parsed {
        scenario,
        unknown_fields: unknown,
    })
}

pub fn load(path: &Path) -> Result<Parsed, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, &path.display().to_string())
}

fn json_error(origin: &str, e: &serde_json::Error) -> CliError {
    CliError::schema(format!("{origin}:{}:{}", e.line(), e.column()), strip_position(&e.to_string()))
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn require<T>(origin: &str, kind: Kind, field: &str, value: &Option<T>) -> Result<(), CliError> {
    if value.is_none() {
        return Err(CliError::schema(
            format!("{origin}: field `{field}`"),
            format!("required for kind `{}`", kind.as_str()),
        ));
    }
    Ok(())
}

fn check_axis(origin: &str, field: &str, axis: &Option<Axis>) -> Result<(), CliError> {
    if let Some(a) = axis {
        if a.step.is_some() == a.span.is_some() {
            return Err(CliError::schema(
                format!("{origin}: field `{field}`"),
                "give exactly one of `step` and `span`",
            ));
        }
    }
    Ok(())
}

/// Structural checks that serde cannot express: which fields each kind needs.
fn check(s: &Scenario, origin: &str) -> Result<(), CliError> {
    if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(CliError::schema(
            format!("{origin}: field `name`"),
            "must be a non-empty identifier of letters, digits, `_` or `-`",
        ));
    }
    for (field, axis) in [("grid", &s.grid), ("tau", &s.tau), ("mu", &s.mu)] {
        check_axis(origin, field, axis)?;
    }
    let k = s.kind;
    require(origin, k, "grid", &s.grid)?;
    match k {
        Kind::HomScan => {
            require(origin, k, "state", &s.state)?;
            require(origin, k, "tau", &s.tau)?;
        }
        Kind::CoincidenceMap => {
            require(origin, k, "state", &s.state)?;
            require(origin, k, "mu", &s.mu)?;
            require(origin, k, "tau", &s.tau)?;
        }
        Kind::WignerMap => {
            require(origin, k, "mu", &s.mu)?;
            require(origin, k, "tau", &s.tau)?;
            match (&s.spectrum, &s.state) {
                (Some(_), None) | (None, Some(StateSpec::Pm { .. })) => {}
                _ => {
                    return Err(CliError::schema(
                        format!("{origin}: field `spectrum`"),
                        "wigner_map needs either `spectrum` or a `pm` state, not both",
                    ))
                }
            }
        }
        Kind::ClassicalDip => {
            require(origin, k, "spectrum", &s.spectrum)?;
            require(origin, k, "classical", &s.classical)?;
            require(origin, k, "tau", &s.tau)?;
        }
        Kind::PumpState => {
            require(origin, k, "pump", &s.pump)?;
            if s.mu.is_some() != s.tau.is_some() {
                return Err(CliError::schema(
                    format!("{origin}: field `mu`"),
                    "`mu` and `tau` must be given together",
                ));
            }
        }
        Kind::CombReadout => {
            require(origin, k, "tau", &s.tau)?;
            if s.comb.is_some() == s.spectrum.is_some() {
                return Err(CliError::schema(
                    format!("{origin}: field `comb`"),
                    "comb_readout needs exactly one of `comb` and `spectrum`",
                ));
            }
            if let Some(c) = &s.comb {
                if !c.periodic && (c.tooth_width.is_none() || c.envelope_width.is_none()) {
                    return Err(CliError::schema(
                        format!("{origin}: field `comb`"),
                        "a non-periodic comb needs `tooth_width` and `envelope_width`",
                    ));
                }
            }
        }
        Kind::Spectrogram => {
            require(origin, k, "spectrum", &s.spectrum)?;
            require(origin, k, "window", &s.window)?;
            require(origin, k, "mu", &s.mu)?;
            require(origin, k, "tau", &s.tau)?;
        }
    }
    Ok(())
}
