//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use qwmp::io::{as_vector, read_matrix};
use qwmp::weights::WeightPair;
use qwmp::{QMatrix, Quaternion, Rational, Real};

pub type QR = Quaternion<Rational>;
pub type MR = QMatrix<Rational>;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load<T: Real>(name: &str) -> QMatrix<T> {
    read_matrix(&data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn q(a: i64, b: i64, c: i64, d: i64) -> QR {
    QR::from_ints(a, b, c, d)
}

/// `(a + bi + cj + dk) / den`.
pub fn qd(a: i64, b: i64, c: i64, d: i64, den: i64) -> QR {
    q(a, b, c, d).scale(&Rational::from_ratio(1, den))
}

/// The 4×3 worked example with its weights `M` and `N^{-1}`.
pub struct Example<T: Real> {
    pub a: QMatrix<T>,
    pub weights: WeightPair<T>,
    pub b: Vec<Quaternion<T>>,
}

pub fn example<T: Real>() -> Example<T> {
    let a = load("example_a.json");
    let weights = WeightPair::from_n_inv(load("example_m.json"), load("example_n_inv.json")).expect("weights are positive definite");
    let b = as_vector(load("example_b.json")).unwrap();
    Example { a, weights, b }
}

/// The inverse exactly as printed, `(1/42)·[…]`.
pub fn printed_inverse() -> MR {
    load("example_printed_inverse.json")
}

/// The printed inverse with entry (2,2) replaced by the value that satisfies the axioms.
pub fn corrected_inverse() -> MR {
    let mut x = printed_inverse();
    x.set(1, 1, qd(-4, -8, 4, 4, 42));
    x
}
