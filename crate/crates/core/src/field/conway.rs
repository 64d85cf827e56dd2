//! Built-in Conway polynomials.
//!
//! Coefficients are listed constant term first; the leading coefficient (1)
//! is included. Degree-1 entries are kept so that subfield compatibility of
//! the higher-degree entries can be checked.

const TABLE: &[(u32, &[u32])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (11, &[9, 1]),
    (11, &[2, 7, 1]),
    (13, &[11, 1]),
    (13, &[2, 12, 1]),
    (17, &[14, 1]),
    (17, &[3, 16, 1]),
    (19, &[17, 1]),
    (19, &[2, 18, 1]),
    (23, &[18, 1]),
    (23, &[5, 21, 1]),
];

/// Conway polynomial for GF(p^degree), if present in the table.
pub fn lookup(p: u32, degree: u32) -> Option<&'static [u32]> {
    TABLE
        .iter()
        .find(|(prime, coeffs)| *prime == p && coeffs.len() as u32 == degree + 1)
        .map(|(_, coeffs)| *coeffs)
}

/// Every `(p, degree)` pair with a table entry.
pub fn entries() -> impl Iterator<Item = (u32, u32)> {
    TABLE.iter().map(|(p, c)| (*p, c.len() as u32 - 1))
}
