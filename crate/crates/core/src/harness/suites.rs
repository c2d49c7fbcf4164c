use super::{load_epd, EpdRecord, HarnessError};

/// Test suites shipped with the crate, by name.
pub const BUNDLED_SUITES: &[(&str, &str)] = &[
    ("mate3", include_str!("../../suites/mate3.epd")),
    ("mate5", include_str!("../../suites/mate5.epd")),
];

/// Parse a bundled suite. `"mate35"` is the union of `mate3` and `mate5`.
pub fn bundled_suite(name: &str) -> Result<Vec<EpdRecord>, HarnessError> {
    if name == "mate35" {
        let mut all = bundled_suite("mate3")?;
        all.extend(bundled_suite("mate5")?);
        return Ok(all);
    }
    let text = BUNDLED_SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| HarnessError::UnknownSuite(name.to_string()))?;
    Ok(load_epd(text)?)
}
