//! Default parameters shared by the library and the command line.
//!
//! | name                     | value | used by                              |
//! |--------------------------|-------|--------------------------------------|
//! | grid resolution, d <= 3  | 24    | envelope LP over 2-3 symbol simplices |
//! | grid resolution, d = 4   | 8     | envelope LP over 4 symbol simplices   |
//! | grid resolution, d = 5-6 | 6     |                                      |
//! | grid resolution, d > 6   | 4     |                                      |
//! | column-generation rounds | 12    | envelope LP refinement               |
//! | random restarts          | 200   | hill-climbing cross-check            |
//! | typicality slack, n <= 8 | 0.1   | binning simulator                    |
//! | typicality slack, n > 8  | 0.05  | binning simulator                    |
//! | rate slack               | 0.1   | binning simulator                    |
//! | identity tolerance       | 1e-9  | multi-letter identity checks         |
//! | state guard              | 1e7   | identity checks, exact equivocation  |

pub const COLUMN_ROUNDS: usize = 12;
pub const RESTARTS: usize = 200;
pub const EPS: f64 = 0.1;
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
pub const STATE_GUARD: usize = 10_000_000;
/// Cap on `|X Y E|^n` work units for exact equivocation.
pub const WORK_GUARD: u64 = 1 << 30;
/// Cap on `|Y|^n` for sequence enumeration in the simulator.
pub const SEQUENCE_GUARD: u64 = 1 << 24;
/// Cap on the number of codewords.
pub const CODEBOOK_GUARD: u64 = 1 << 31;

/// Default grid resolution for posteriors on a simplex with `dim` symbols.
pub fn grid_resolution(dim: usize) -> usize {
    match dim {
        0..=3 => 24,
        4 => 8,
        5 | 6 => 6,
        _ => 4,
    }
}

/// Default typicality slack for blocklength `n`.
pub fn delta_typ(n: usize) -> f64 {
    if n <= 8 {
        0.1
    } else {
        0.05
    }
}
