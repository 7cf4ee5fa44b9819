//! Worked examples shipped with the crate: theories, study records and the
//! bundled user profiles.

pub const DUNG_EXAMPLE: &str = include_str!("../../../fixtures/dung_example.phax");
pub const SIMPLIFICATION: &str = include_str!("../../../fixtures/simplification.phax");
pub const VACCINE: &str = include_str!("../../../fixtures/vaccine.phax");
pub const EXPERT_OPINION: &str = include_str!("../../../fixtures/expert_opinion.phax");

/// Two conflicting studies of different credibility.
pub const PICO_STUDIES_CSV: &str = include_str!("../../../fixtures/pico_studies.csv");
/// Two conflicting studies that tie on credibility and sample size.
pub const PICO_TIED_JSON: &str = include_str!("../../../fixtures/pico_tied.json");

/// Every theory fixture with its file name.
pub const THEORIES: [(&str, &str); 4] = [
    ("dung_example.phax", DUNG_EXAMPLE),
    ("simplification.phax", SIMPLIFICATION),
    ("vaccine.phax", VACCINE),
    ("expert_opinion.phax", EXPERT_OPINION),
];

pub const PROFILES: [(&str, &str); 3] = [
    ("patient", include_str!("../../../fixtures/profiles/patient.json")),
    ("clinician", include_str!("../../../fixtures/profiles/clinician.json")),
    ("policymaker", include_str!("../../../fixtures/profiles/policymaker.json")),
];
