//! Complex vector/matrix primitives and orthogonal projections.
//!
//! Channel dimensions here are tiny (a handful of antennas), so everything is
//! plain dense arithmetic over [`Cplx`]. The only "decomposition" offered is
//! the projection onto a column space, which is what the beamformer design
//! needs.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex scalar used throughout (dimensionless channel gain).
pub type Cplx = Complex64;

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    data: Vec<Cplx>,
}

impl CVec {
    pub fn new(data: Vec<Cplx>) -> Self {
        CVec { data }
    }

    pub fn zeros(n: usize) -> Self {
        CVec {
            data: vec![Cplx::new(0.0, 0.0); n],
        }
    }

    /// Vector from real parts only, handy in tests.
    pub fn from_reals(reals: &[f64]) -> Self {
        CVec {
            data: reals.iter().map(|&r| Cplx::new(r, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Cplx] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cplx> {
        self.data.iter()
    }

    /// Squared Euclidean norm, the sum of squared entry magnitudes.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Hermitian inner product `self^H rhs` (conjugate-linear in `self`).
    pub fn dot(&self, rhs: &CVec) -> Cplx {
        assert_eq!(self.len(), rhs.len(), "dot of mismatched lengths");
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, s: f64) -> CVec {
        CVec {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scaled_c(&self, s: Cplx) -> CVec {
        CVec {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CVec) -> CVec {
        assert_eq!(self.len(), rhs.len(), "add of mismatched lengths");
        CVec {
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &CVec) -> CVec {
        assert_eq!(self.len(), rhs.len(), "sub of mismatched lengths");
        CVec {
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn unit(&self) -> Option<CVec> {
        let n = self.norm();
        if n > 0.0 {
            Some(self.scaled(1.0 / n))
        } else {
            None
        }
    }
}

impl std::ops::Index<usize> for CVec {
    type Output = Cplx;
    fn index(&self, i: usize) -> &Cplx {
        &self.data[i]
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Cplx>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Cplx>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        CMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Cplx::new(0.0, 0.0); rows * cols],
        }
    }

    /// Single-column matrix wrapping a vector.
    pub fn from_col(v: &CVec) -> Self {
        CMat {
            rows: v.len(),
            cols: 1,
            data: v.as_slice().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Cplx {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Cplx) {
        self.data[r * self.cols + c] = z;
    }

    /// Conjugate transpose.
    pub fn herm(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.len(), "mul_vec of mismatched shapes");
        let data = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * v[c])
                    .sum::<Cplx>()
            })
            .collect();
        CVec::new(data)
    }

    /// `A^H v`.
    pub fn herm_mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.rows, v.len(), "herm_mul_vec of mismatched shapes");
        let data = (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| self.get(r, c).conj() * v[r])
                    .sum::<Cplx>()
            })
            .collect();
        CVec::new(data)
    }
}

/// Solve the k-by-k system `G y = b` by Gaussian elimination with partial
/// pivoting. `G` is the Gram matrix of the projection basis, so k is tiny.
fn solve_small(g: &mut CMat, b: &mut [Cplx]) -> Result<Vec<Cplx>> {
    let k = g.rows();
    let scale: f64 = (0..k)
        .flat_map(|r| (0..k).map(move |c| (r, c)))
        .map(|(r, c)| g.get(r, c).norm())
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&a, &b| {
                g.get(a, col)
                    .norm()
                    .partial_cmp(&g.get(b, col).norm())
                    .unwrap()
            })
            .unwrap();
        if g.get(pivot_row, col).norm() <= scale * 1e-13 {
            return Err(Error::RankDeficient);
        }
        if pivot_row != col {
            for c in 0..k {
                let tmp = g.get(col, c);
                g.set(col, c, g.get(pivot_row, c));
                g.set(pivot_row, c, tmp);
            }
            b.swap(col, pivot_row);
        }
        for row in (col + 1)..k {
            let factor = g.get(row, col) / g.get(col, col);
            for c in col..k {
                let z = g.get(row, c) - factor * g.get(col, c);
                g.set(row, c, z);
            }
            let delta = factor * b[col];
            b[row] -= delta;
        }
    }
    let mut y = vec![Cplx::new(0.0, 0.0); k];
    for row in (0..k).rev() {
        let mut acc = b[row];
        for (c, yc) in y.iter().enumerate().take(k).skip(row + 1) {
            acc -= g.get(row, c) * yc;
        }
        y[row] = acc / g.get(row, row);
    }
    Ok(y)
}

/// Orthogonal projection of `v` onto the column space of `basis`:
/// `X (X^H X)^{-1} X^H v`. Fails if the basis is rank deficient.
pub fn project(basis: &CMat, v: &CVec) -> Result<CVec> {
    if basis.rows() != v.len() {
        return Err(Error::DimensionMismatch {
            what: "project",
            expected: basis.rows(),
            got: v.len(),
        });
    }
    let k = basis.cols();
    let mut gram = CMat::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = Cplx::new(0.0, 0.0);
            for r in 0..basis.rows() {
                acc += basis.get(r, a).conj() * basis.get(r, b);
            }
            gram.set(a, b, acc);
        }
    }
    let mut rhs: Vec<Cplx> = basis.herm_mul_vec(v).as_slice().to_vec();
    let y = solve_small(&mut gram, rhs.as_mut_slice())?;
    Ok(basis.mul_vec(&CVec::new(y)))
}

/// Projection onto the orthogonal complement: `v - project(basis, v)`.
pub fn project_orth(basis: &CMat, v: &CVec) -> Result<CVec> {
    Ok(v.sub(&project(basis, v)?))
}

/// Rank-one convenience: projection of `v` onto the span of `u`.
pub fn project_onto_vec(u: &CVec, v: &CVec) -> Result<CVec> {
    project(&CMat::from_col(u), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::TrialRng;
    use approx::assert_relative_eq;

    fn random_vec(rng: &mut TrialRng, n: usize) -> CVec {
        CVec::new((0..n).map(|_| rng.sample_cn01()).collect())
    }

    fn random_mat(rng: &mut TrialRng, rows: usize, cols: usize) -> CMat {
        CMat::new(
            rows,
            cols,
            (0..rows * cols).map(|_| rng.sample_cn01()).collect(),
        )
    }

    #[test]
    fn norm_sq_is_sum_of_squared_magnitudes() {
        let v = CVec::new(vec![Cplx::new(3.0, 4.0), Cplx::new(0.0, -2.0)]);
        assert_relative_eq!(v.norm_sq(), 25.0 + 4.0, max_relative = 1e-15);
        assert!(v.norm() >= 0.0);
    }

    #[test]
    fn herm_is_involution() {
        let mut rng = TrialRng::from_master(7, 0);
        let a = random_mat(&mut rng, 3, 5);
        assert_eq!(a.herm().herm(), a);
    }

    #[test]
    fn projection_onto_axis() {
        let e1 = CVec::from_reals(&[1.0, 0.0, 0.0]);
        let v = CVec::new(vec![
            Cplx::new(2.0, 1.0),
            Cplx::new(-1.0, 0.5),
            Cplx::new(0.0, 3.0),
        ]);
        let p = project_onto_vec(&e1, &v).unwrap();
        assert_relative_eq!((p[0] - v[0]).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(p[1].norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(p[2].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn projection_plus_complement_restores_v() {
        let mut rng = TrialRng::from_master(11, 0);
        for _ in 0..100 {
            let x = random_mat(&mut rng, 4, 2);
            let v = random_vec(&mut rng, 4);
            let p = project(&x, &v).unwrap();
            let q = project_orth(&x, &v).unwrap();
            let back = p.add(&q);
            assert_relative_eq!(back.sub(&v).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_components_are_orthogonal() {
        let mut rng = TrialRng::from_master(13, 0);
        let x = random_mat(&mut rng, 4, 1);
        let v = random_vec(&mut rng, 4);
        let p = project(&x, &v).unwrap();
        let q = project_orth(&x, &v).unwrap();
        assert!(p.dot(&q).norm() <= 1e-12 * v.norm_sq().max(1.0));
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = TrialRng::from_master(17, 0);
        for _ in 0..100 {
            let x = random_mat(&mut rng, 5, 3);
            let v = random_vec(&mut rng, 5);
            let p = project(&x, &v).unwrap();
            let pp = project(&x, &p).unwrap();
            assert_relative_eq!(pp.sub(&p).norm(), 0.0, epsilon = 1e-12 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn pythagoras_holds() {
        let mut rng = TrialRng::from_master(19, 0);
        for _ in 0..100 {
            let x = random_mat(&mut rng, 4, 2);
            let v = random_vec(&mut rng, 4);
            let p = project(&x, &v).unwrap();
            let q = project_orth(&x, &v).unwrap();
            assert_relative_eq!(
                v.norm_sq(),
                p.norm_sq() + q.norm_sq(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn rank_deficient_basis_is_reported() {
        let col = CVec::from_reals(&[1.0, 2.0, -1.0]);
        let mut data = col.as_slice().to_vec();
        data.extend(col.scaled(2.0).as_slice().to_vec());
        // column-duplicated basis, written row-major
        let x = CMat::new(
            3,
            2,
            vec![data[0], data[3], data[1], data[4], data[2], data[5]],
        );
        let v = CVec::from_reals(&[1.0, 0.0, 0.0]);
        assert!(matches!(project(&x, &v), Err(Error::RankDeficient)));
    }

    #[test]
    fn zero_basis_vector_is_rank_deficient() {
        let u = CVec::zeros(3);
        let v = CVec::from_reals(&[1.0, 2.0, 3.0]);
        assert!(matches!(project_onto_vec(&u, &v), Err(Error::RankDeficient)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let x = CMat::zeros(3, 1);
        let v = CVec::zeros(4);
        assert!(matches!(
            project(&x, &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
