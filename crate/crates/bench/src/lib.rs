//! Fixture families shared by the benchmarks.

use jsr_core::MatrixSet;

pub fn shear_pair() -> MatrixSet {
    MatrixSet::from_2x2(&[[[1.0, 1.0], [0.0, 1.0]], [[1.0, 0.0], [-1.0, 1.0]]])
        .expect("valid family")
}

pub fn rational_rotation_pair() -> MatrixSet {
    MatrixSet::from_2x2(&[
        [[15.0 / 17.0, -16.0 / 17.0], [4.0 / 17.0, 15.0 / 17.0]],
        [[4.0 / 5.0, 3.0 / 5.0], [-3.0 / 5.0, 4.0 / 5.0]],
    ])
    .expect("valid family")
}
