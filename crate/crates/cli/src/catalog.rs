//! Bundled example scenarios, embedded at build time.

pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        Entry {
            name: $name,
            text: include_str!(concat!("../scenarios/", $name, ".json")),
        }
    };
}

/// Sorted by name.
pub const CATALOG: &[Entry] = &[
    entry!("antisymmetric_exchange"),
    entry!("cavity_comb_hom"),
    entry!("classical_quadrature"),
    entry!("classical_second_order"),
    entry!("classical_two_point"),
    entry!("classical_uniform"),
    entry!("compass_map"),
    entry!("dip_gaussian"),
    entry!("dip_phase_pi_third"),
    entry!("gkp_entangled_readout"),
    entry!("gkp_periodic_squares"),
    entry!("gkp_x_gate"),
    entry!("gkp_z_gate"),
    entry!("pump_dual_path"),
    entry!("pump_gaussian"),
    entry!("spectrogram_chirp"),
    entry!("wigner_from_hom_frequency_cat"),
    entry!("wigner_from_hom_gaussian"),
    entry!("wigner_from_hom_time_cat"),
    entry!("wigner_marginals"),
    entry!("witness_frequency_cat"),
    entry!("witness_separable"),
];

pub fn find(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse;

    #[test]
    fn entries_parse_cleanly_under_their_own_name() {
        assert!(CATALOG.len() >= 13);
        assert!(CATALOG.windows(2).all(|w| w[0].name < w[1].name));
        for e in CATALOG {
            let p = parse(e.text, e.name).unwrap();
            assert_eq!(p.scenario.name, e.name);
            assert!(p.unknown_fields.is_empty(), "{}: {:?}", e.name, p.unknown_fields);
            assert!(!p.scenario.description.is_empty());
        }
    }
}
