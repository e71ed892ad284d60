//! Real square matrices, finite matrix families and the planar spectral
//! helpers the relaxation schemes need.
//!
//! Only the 2x2 case carries spectral information here: spectral radius and
//! real eigendirections are computed in closed form from trace and
//! determinant. Larger dimensions are rejected explicitly.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Angular tolerance (radians) for deciding that two eigendirections coincide.
pub const DIRECTION_TOL: f64 = 1e-10;

/// Relative size below which an off-scalar part or a discriminant is treated
/// as rounding noise.
const NOISE_REL: f64 = 1e-12;

/// A real `dim x dim` matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    entries: Vec<f64>,
}

impl Matrix {
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                dim,
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, entries })
    }

    /// Planar matrix from its two rows.
    pub fn from_2x2(rows: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(2, vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    /// Rotation of the plane by `angle` radians.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            dim: 2,
            entries: vec![c, -s, s, c],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Rows of a planar matrix, `None` for other dimensions.
    pub fn as_2x2(&self) -> Option<[[f64; 2]; 2]> {
        (self.dim == 2).then(|| {
            [
                [self.entries[0], self.entries[1]],
                [self.entries[2], self.entries[3]],
            ]
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| c * v).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c];
            }
        }
        Self { dim: n, entries }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Planar `y = A x`.
    ///
    /// Panics if the matrix is not 2x2.
    #[inline]
    pub fn apply2(&self, x: [f64; 2]) -> [f64; 2] {
        assert_eq!(self.dim, 2, "apply2 needs a 2x2 matrix");
        let e = &self.entries;
        [e[0] * x[0] + e[1] * x[1], e[2] * x[0] + e[3] * x[1]]
    }

    /// Largest eigenvalue magnitude.
    ///
    /// Closed form for `dim <= 2`; larger matrices are rejected.
    pub fn spectral_radius(&self) -> Result<f64> {
        match self.dim {
            1 => Ok(self.entries[0].abs()),
            2 => {
                let [[a, b], [c, d]] = self.as_2x2().unwrap();
                let disc = (a - d) * (a - d) + 4.0 * b * c;
                if disc >= 0.0 {
                    Ok(((a + d).abs() + disc.sqrt()) / 2.0)
                } else {
                    // complex pair: |lambda|^2 = det
                    Ok((a * d - b * c).max(0.0).sqrt())
                }
            }
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// Real invariant lines of a 2x2 matrix.
    pub fn eigendirections(&self) -> Result<Eigendirections> {
        let [[a, b], [c, d]] = self.as_2x2().ok_or(Error::UnsupportedDimension(self.dim))?;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if scale == 0.0 || b.abs().max(c.abs()).max((a - d).abs()) <= NOISE_REL * scale {
            return Ok(Eigendirections::All);
        }
        let mut disc = (a - d) * (a - d) + 4.0 * b * c;
        if disc.abs() <= NOISE_REL * scale * scale {
            disc = 0.0;
        }
        if disc < 0.0 {
            return Ok(Eigendirections::None);
        }
        let root = disc.sqrt();
        let tr = a + d;
        let mut lines = Vec::with_capacity(2);
        for lambda in [(tr + root) / 2.0, (tr - root) / 2.0] {
            // null vector of A - lambda I from whichever row is larger
            let v1 = [b, lambda - a];
            let v2 = [lambda - d, c];
            let v = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) {
                v1
            } else {
                v2
            };
            let angle = line_angle(v);
            if !lines.iter().any(|&l| lines_coincide(l, angle)) {
                lines.push(angle);
            }
        }
        Ok(Eigendirections::Lines(lines))
    }
}

/// Real eigendirections of a planar matrix, as line angles in `[0, pi)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigendirections {
    /// Scalar multiple of the identity: every line is invariant.
    All,
    /// Complex eigenvalue pair: no invariant line.
    None,
    Lines(Vec<f64>),
}

fn line_angle(v: [f64; 2]) -> f64 {
    let a = v[1].atan2(v[0]).rem_euclid(PI);
    if a >= PI {
        0.0
    } else {
        a
    }
}

fn lines_coincide(a: f64, b: f64) -> bool {
    let d = (a - b).abs().rem_euclid(PI);
    d.min(PI - d) <= DIRECTION_TOL
}

/// A nonempty finite family of equally sized, not all zero, matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet {
    matrices: Vec<Matrix>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptySet)?;
        let dim = first.dim();
        if let Some((index, m)) = matrices.iter().enumerate().find(|(_, m)| m.dim() != dim) {
            return Err(Error::MixedDimensions {
                index,
                expected: dim,
                found: m.dim(),
            });
        }
        if matrices.iter().all(Matrix::is_zero) {
            return Err(Error::AllZero);
        }
        Ok(Self { matrices })
    }

    /// Convenience constructor for planar families.
    pub fn from_2x2(rows: &[[[f64; 2]; 2]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|&r| Matrix::from_2x2(r))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.matrices.iter()
    }

    /// Every member multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.matrices.iter().map(|m| m.scaled(c)).collect())
    }

    /// Error unless the family is planar.
    pub fn require_planar(&self) -> Result<()> {
        match self.dim() {
            2 => Ok(()),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    /// Whether the family has no common invariant line.
    ///
    /// Exact for 2x2 families up to [`DIRECTION_TOL`]: a common invariant
    /// line must be a real eigendirection of every non-scalar member.
    pub fn is_irreducible(&self) -> Result<bool> {
        match self.dim() {
            1 => return Ok(true),
            2 => {}
            n => return Err(Error::UnsupportedDimension(n)),
        }
        let mut constraining = Vec::new();
        for m in &self.matrices {
            match m.eigendirections()? {
                Eigendirections::All => {}
                Eigendirections::None => return Ok(true),
                Eigendirections::Lines(lines) => constraining.push(lines),
            }
        }
        let Some((first, rest)) = constraining.split_first() else {
            return Ok(false);
        };
        let shared = first.iter().any(|&cand| {
            rest.iter()
                .all(|lines| lines.iter().any(|&l| lines_coincide(cand, l)))
        });
        Ok(!shared)
    }
}

impl<'a> IntoIterator for &'a MatrixSet {
    type Item = &'a Matrix;
    type IntoIter = std::slice::Iter<'a, Matrix>;

    fn into_iter(self) -> Self::IntoIter {
        self.matrices.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_2x2(rows).unwrap()
    }

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(Matrix::identity(2).spectral_radius().unwrap(), 1.0);
        assert_eq!(m([[1.0, 1.0], [0.0, 1.0]]).spectral_radius().unwrap(), 1.0);
        let r = m([[15.0 / 17.0, -16.0 / 17.0], [4.0 / 17.0, 15.0 / 17.0]])
            .spectral_radius()
            .unwrap();
        assert!((r - 1.0).abs() < 1e-15, "{r}");
    }

    #[test]
    fn spectral_radius_rejects_large_dims() {
        let a = Matrix::identity(3);
        assert!(matches!(
            a.spectral_radius(),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn spectral_radius_negative_real_pair() {
        // eigenvalues -3 and 1
        let a = m([[-1.0, 2.0], [2.0, -1.0]]);
        assert!((a.spectral_radius().unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            Matrix::identity(2).apply(&[3.0, 4.0]).unwrap(),
            vec![3.0, 4.0]
        );
        assert_eq!(m([[1.0, 1.0], [0.0, 1.0]]).apply2([1.0, 1.0]), [2.0, 1.0]);
        assert_eq!(m([[0.0; 2]; 2]).apply2([5.0, -2.0]), [0.0, 0.0]);
        assert!(matches!(
            Matrix::identity(2).apply(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            Matrix::new(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFiniteEntry { row: 0, col: 1 })
        ));
        assert!(matches!(Matrix::new(0, vec![]), Err(Error::ZeroDimension)));
        assert!(matches!(MatrixSet::new(vec![]), Err(Error::EmptySet)));
        assert!(matches!(
            MatrixSet::new(vec![Matrix::identity(2), Matrix::identity(3)]),
            Err(Error::MixedDimensions { index: 1, .. })
        ));
        assert!(matches!(
            MatrixSet::from_2x2(&[[[0.0; 2]; 2]]),
            Err(Error::AllZero)
        ));
    }

    #[test]
    fn irreducibility_examples() {
        let scalar = MatrixSet::from_2x2(&[[[2.0, 0.0], [0.0, 2.0]]]).unwrap();
        assert!(!scalar.is_irreducible().unwrap());

        let shears =
            MatrixSet::from_2x2(&[[[1.0, 1.0], [0.0, 1.0]], [[1.0, 0.0], [-1.0, 1.0]]]).unwrap();
        assert!(shears.is_irreducible().unwrap());

        let diag =
            MatrixSet::from_2x2(&[[[2.0, 0.0], [0.0, 3.0]], [[1.0, 0.0], [0.0, 5.0]]]).unwrap();
        assert!(!diag.is_irreducible().unwrap());
    }

    #[test]
    fn shear_eigendirections() {
        assert_eq!(
            m([[1.0, 1.0], [0.0, 1.0]]).eigendirections().unwrap(),
            Eigendirections::Lines(vec![0.0])
        );
        match m([[1.0, 0.0], [-1.0, 1.0]]).eigendirections().unwrap() {
            Eigendirections::Lines(l) => {
                assert_eq!(l.len(), 1);
                assert!((l[0] - PI / 2.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irreducibility_edge_cases() {
        // a rotation alone has no invariant line
        let rot = MatrixSet::new(vec![Matrix::rotation(PI / 5.0)]).unwrap();
        assert!(rot.is_irreducible().unwrap());
        // a scalar member constrains nothing
        let mixed =
            MatrixSet::from_2x2(&[[[3.0, 0.0], [0.0, 3.0]], [[1.0, 1.0], [0.0, 2.0]]]).unwrap();
        assert!(!mixed.is_irreducible().unwrap());
        // single non-scalar matrix with a real eigenvector is reducible
        let one = MatrixSet::from_2x2(&[[[2.0, 1.0], [1.0, 2.0]]]).unwrap();
        assert!(!one.is_irreducible().unwrap());
        // a zero member alongside a reducible one
        let z = MatrixSet::from_2x2(&[[[0.0; 2]; 2], [[1.0, 0.0], [0.0, 2.0]]]).unwrap();
        assert!(!z.is_irreducible().unwrap());
        assert!(matches!(
            MatrixSet::new(vec![Matrix::identity(3)])
                .unwrap()
                .is_irreducible(),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    fn entry() -> impl Strategy<Value = f64> {
        -3.0..3.0f64
    }

    fn mat() -> impl Strategy<Value = Matrix> {
        [[entry(), entry()], [entry(), entry()]].prop_map(|r| Matrix::from_2x2(r).unwrap())
    }

    /// Well-conditioned transform: a rotation times a mild diagonal stretch.
    fn transform() -> impl Strategy<Value = (Matrix, Matrix)> {
        (0.0..PI, 0.5..2.0f64, 0.5..2.0f64).prop_map(|(t, s1, s2)| {
            let r = Matrix::rotation(t);
            let d = Matrix::from_2x2([[s1, 0.0], [0.0, s2]]).unwrap();
            let dinv = Matrix::from_2x2([[1.0 / s1, 0.0], [0.0, 1.0 / s2]]).unwrap();
            let fwd = r.mul(&d).unwrap();
            let inv = dinv.mul(&r.transpose()).unwrap();
            (fwd, inv)
        })
    }

    /// Upper-triangular members share the first axis; diagonals are kept
    /// apart so the eigendirections stay well conditioned.
    fn reducible_pair() -> impl Strategy<Value = Vec<Matrix>> {
        (
            (-2.0..2.0f64, 0.5..1.5f64, entry()),
            (-2.0..2.0f64, 0.5..1.5f64, entry()),
        )
            .prop_map(|((a, gap1, b1), (c, gap2, b2))| {
                vec![
                    Matrix::from_2x2([[a, b1], [0.0, a + gap1]]).unwrap(),
                    Matrix::from_2x2([[c, b2], [0.0, c - gap2]]).unwrap(),
                ]
            })
    }

    proptest! {
        #[test]
        fn spectral_radius_is_homogeneous(a in mat(), c in -5.0..5.0f64) {
            let lhs = a.scaled(c).spectral_radius().unwrap();
            let rhs = c.abs() * a.spectral_radius().unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn spectral_radius_transpose_invariant(a in mat()) {
            let r = a.spectral_radius().unwrap();
            let rt = a.transpose().spectral_radius().unwrap();
            prop_assert!((r - rt).abs() <= 1e-12 * r.max(1e-300));
        }

        #[test]
        fn irreducibility_similarity_invariant_generic(a in mat(), b in mat(), (t, tinv) in transform()) {
            let set = MatrixSet::new(vec![a.clone(), b.clone()]).unwrap();
            let conj = MatrixSet::new(vec![
                t.mul(&a).unwrap().mul(&tinv).unwrap(),
                t.mul(&b).unwrap().mul(&tinv).unwrap(),
            ]).unwrap();
            prop_assert_eq!(set.is_irreducible().unwrap(), conj.is_irreducible().unwrap());
        }

        #[test]
        fn irreducibility_similarity_invariant_reducible(pair in reducible_pair(), (t, tinv) in transform()) {
            let set = MatrixSet::new(pair.clone()).unwrap();
            prop_assert!(!set.is_irreducible().unwrap());
            let conj = MatrixSet::new(
                pair.iter().map(|a| t.mul(a).unwrap().mul(&tinv).unwrap()).collect()
            ).unwrap();
            prop_assert!(!conj.is_irreducible().unwrap());
        }
    }
}
