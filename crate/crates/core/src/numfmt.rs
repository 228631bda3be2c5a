//! Number formatting shared by every text output.
//!
//! Both forms are shortest round-trippable: parsing the string with
//! `str::parse::<f64>` returns the exact same value.

/// Compact form used in model text, MathML `<cn>`, CSV and narrative output.
///
/// Integral values print without a fractional part (`100000`, `0.0005`,
/// `1e-7`).
pub fn shortest(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Attribute form used for SBML numeric attributes (`100000.0`).
pub fn decimal(x: f64) -> String {
    format!("{x:?}")
}
