//! Built-in example systems, all with n = 1 and T = 1.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::symbol::SystemSymbol;

pub const NAMES: [&str; 4] = ["m2-glaeser", "m3-tracezero", "m2-nonhyp-control", "m2-wave"];

/// A(t, xi) = [[0, 1], [t^2, 0]] xi
pub fn m2_glaeser() -> SystemSymbol {
    SystemSymbol::from_rows_1d(2, &[&[0.0], &[1.0], &[0.0, 0.0, 1.0], &[0.0]], 1.0)
        .expect("valid example")
}

/// A(t, xi) = [[0, t^4, 0], [1, 0, 0], [0, 1, 0]] xi
pub fn m3_tracezero() -> SystemSymbol {
    SystemSymbol::from_rows_1d(
        3,
        &[
            &[0.0],
            &[0.0, 0.0, 0.0, 0.0, 1.0],
            &[0.0],
            &[1.0],
            &[0.0],
            &[0.0],
            &[0.0],
            &[1.0],
            &[0.0],
        ],
        1.0,
    )
    .expect("valid example")
}

/// A(t, xi) = [[0, 1], [-1, 0]] xi, eigenvalues +-i xi.
pub fn m2_nonhyp_control() -> SystemSymbol {
    SystemSymbol::from_rows_1d(2, &[&[0.0], &[1.0], &[-1.0], &[0.0]], 1.0).expect("valid example")
}

/// A(t, xi) = [[0, 1], [1, 0]] xi, the wave equation D_t^2 u = D_x^2 u.
pub fn m2_wave() -> SystemSymbol {
    SystemSymbol::from_rows_1d(2, &[&[0.0], &[1.0], &[1.0], &[0.0]], 1.0).expect("valid example")
}

pub fn by_name(name: &str) -> Result<SystemSymbol> {
    match name {
        "m2-glaeser" => Ok(m2_glaeser()),
        "m3-tracezero" => Ok(m3_tracezero()),
        "m2-nonhyp-control" => Ok(m2_nonhyp_control()),
        "m2-wave" => Ok(m2_wave()),
        _ => Err(Error::Domain(alloc::format!(
            "unknown example `{name}`; known: {}",
            NAMES.join(", ")
        ))),
    }
}

pub fn all() -> Vec<(&'static str, SystemSymbol)> {
    NAMES
        .iter()
        .map(|&n| (n, by_name(n).expect("listed name")))
        .collect()
}
