//! Subspaces of a fixed ambient coordinate space and the subquotient
//! calculus (sum, intersection, preimage, quotient with chosen sections)
//! that every page computation reduces to.

use crate::field::Field;
use crate::matrix::Matrix;
use crate::Error;

/// A linear subspace given by a basis matrix whose columns are independent.
/// The stored basis is in column-reduced canonical form, so a coordinate
/// subspace is represented by standard basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix, // ambient × dim, columns independent
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(field, ambient, 0),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
        }
    }

    /// Span of the given columns, reduced to a canonical independent basis.
    pub fn from_columns(cols: &Matrix) -> Subspace {
        // Row-reduce the transpose: nonzero rows give a canonical basis.
        let (r, pivots) = cols.transpose().rref();
        let dim = pivots.len();
        let mut basis = Matrix::zero(cols.field(), cols.rows(), dim);
        for i in 0..dim {
            for j in 0..cols.rows() {
                basis.set(j, i, r.get(i, j).clone());
            }
        }
        Subspace {
            ambient: cols.rows(),
            basis,
        }
    }

    /// Coordinate subspace spanned by the given standard basis indices.
    pub fn coordinate(field: Field, ambient: usize, indices: &[usize]) -> Subspace {
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut basis = Matrix::zero(field, ambient, sorted.len());
        for (j, &i) in sorted.iter().enumerate() {
            basis.set(i, j, field.one());
        }
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn contains_vector(&self, v: &Matrix) -> bool {
        assert_eq!(v.rows(), self.ambient);
        self.basis.solve(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        self.basis.solve(&other.basis).is_some()
    }

    /// Span equality, decided by mutual containment.
    pub fn eq_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other) && other.contains(self)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(Subspace::from_columns(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        // u·x = v·y  ⟺  [u | -v]·(x,y) = 0; the intersection is u applied
        // to the x-block of the kernel.
        let k = self.basis.hstack(&other.basis.neg()).kernel();
        let x_block = k.submatrix(0..self.dim(), 0..k.cols());
        Ok(Subspace::from_columns(&self.basis.mul(&x_block)))
    }

    /// `{x : m·x ∈ self}` as a subspace of the domain of `m`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace, Error> {
        if self.ambient != m.rows() {
            return Err(Error::AmbientMismatch(self.ambient, m.rows()));
        }
        let k = m.hstack(&self.basis.neg()).kernel();
        let x_block = k.submatrix(0..m.cols(), 0..k.cols());
        Ok(Subspace::from_columns(&x_block))
    }

    /// Image of this subspace under a linear map out of its ambient space.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::from_columns(&m.mul(&self.basis))
    }

    /// Quotient `self / sub`. Coordinates are taken relative to `self`'s
    /// basis; the section picks representatives inside `self`.
    pub fn quotient(&self, sub: &Subspace) -> Result<Quotient, Error> {
        if self.ambient != sub.ambient {
            return Err(Error::AmbientMismatch(self.ambient, sub.ambient));
        }
        let w_in_self = self
            .basis
            .solve(sub.basis())
            .ok_or(Error::NotContained)?;
        let n = self.dim();
        let qdim = n - sub.dim();
        // Extend the basis of the subspace to a basis of self by standard
        // vectors, first index first.
        let mut change = w_in_self.clone();
        let mut section = Matrix::zero(self.field(), n, 0);
        for i in 0..n {
            if change.cols() == n {
                break;
            }
            let mut e = Matrix::zero(self.field(), n, 1);
            e.set(i, 0, self.field().one());
            let cand = change.hstack(&e);
            if cand.rank() == cand.cols() {
                change = cand;
                section = section.hstack(&e);
            }
        }
        assert_eq!(change.cols(), n, "basis extension failed");
        let inv = change.inverse().expect("change of basis is invertible");
        let projector = inv.submatrix(sub.dim()..n, 0..n);
        Ok(Quotient {
            dim: qdim,
            projector,
            section,
        })
    }
}

/// Data of a quotient of a subspace by a contained subspace, in the
/// coordinates of the larger subspace's basis.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub dim: usize,
    /// `dim × dim(self)`: coordinates in `self` → quotient coordinates.
    pub projector: Matrix,
    /// `dim(self) × dim`: quotient coordinates → representative in `self`.
    pub section: Matrix,
}

/// An increasing flag of subspaces indexed by integer weights; returns a
/// weighted ambient-space basis adapted to it: the span of vectors of weight
/// ≤ p equals the flag member at p. Weights are processed in increasing
/// order, pivoting on the first vector not yet in the span.
pub fn adapted_basis(flag: &[(i64, Subspace)]) -> (Vec<i64>, Matrix) {
    assert!(!flag.is_empty());
    let field = flag[0].1.field();
    let ambient = flag[0].1.ambient_dim();
    let mut weights = Vec::new();
    let mut chosen = Matrix::zero(field, ambient, 0);
    for (w, v) in flag {
        for c in 0..v.dim() {
            let col = Matrix::from_columns(field, ambient, &[v.basis().column(c)]);
            let cand = chosen.hstack(&col);
            if cand.rank() == cand.cols() {
                chosen = cand;
                weights.push(*w);
            }
        }
    }
    (weights, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    fn span(cols: &[&[i64]]) -> Subspace {
        let rows = cols[0].len();
        let field = q();
        let m = Matrix::from_i64(field, &{
            // from_i64 takes rows; build transpose then transpose back
            let data: Vec<&[i64]> = cols.to_vec();
            data
        })
        .transpose();
        assert_eq!(m.rows(), rows);
        Subspace::from_columns(&m)
    }

    #[test]
    fn intersect_examples() {
        let u = span(&[&[1, 0, 0], &[0, 1, 0]]);
        let v = span(&[&[0, 1, 0], &[0, 0, 1]]);
        let w = u.intersect(&v).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.eq_span(&span(&[&[0, 1, 0]])));

        let e1 = span(&[&[1, 0]]);
        let e2 = span(&[&[0, 1]]);
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        assert!(e1.intersect(&e1).unwrap().eq_span(&e1));

        let bad = e1.intersect(&span(&[&[1, 0, 0]]));
        assert!(bad.is_err());
    }

    #[test]
    fn dimension_formula() {
        let u = span(&[&[1, 2, 0], &[0, 1, 1]]);
        let v = span(&[&[1, 0, 0], &[1, 1, 1]]);
        let i = u.intersect(&v).unwrap();
        let s = u.sum(&v).unwrap();
        assert_eq!(i.dim() + s.dim(), u.dim() + v.dim());
    }

    #[test]
    fn preimage_examples() {
        let m = Matrix::from_i64(q(), &[&[1, 0], &[0, 0]]);
        let zero = Subspace::zero(q(), 2);
        let p = zero.preimage(&m).unwrap();
        assert!(p.eq_span(&span(&[&[0, 1]])));
        // full codomain → full domain
        let full = Subspace::full(q(), 2);
        assert_eq!(full.preimage(&m).unwrap().dim(), 2);
        // identity → preimage equals the subspace
        let v = span(&[&[1, 1]]);
        assert!(v
            .preimage(&Matrix::identity(q(), 2))
            .unwrap()
            .eq_span(&v));
        // preimage of zero == kernel
        let k = Subspace::from_columns(&m.kernel());
        assert!(zero.preimage(&m).unwrap().eq_span(&k));
    }

    #[test]
    fn quotient_examples() {
        let u = span(&[&[1, 0], &[0, 1]]);
        let w = span(&[&[1, 1]]);
        let qt = u.quotient(&w).unwrap();
        assert_eq!(qt.dim, 1);
        assert_eq!(
            qt.projector.mul(&qt.section),
            Matrix::identity(q(), 1)
        );
        // u = w → dim 0
        assert_eq!(u.quotient(&u).unwrap().dim, 0);
        // w = zero → projector invertible
        let qz = u.quotient(&Subspace::zero(q(), 2)).unwrap();
        assert_eq!(qz.dim, 2);
        assert!(qz.projector.is_invertible());
        // containment is checked
        assert!(w.quotient(&u).is_err());
    }

    #[test]
    fn adapted_basis_respects_flag() {
        let f0 = span(&[&[1, 1, 0]]);
        let f1 = span(&[&[1, 1, 0], &[0, 1, 0]]);
        let f2 = Subspace::full(q(), 3);
        let (weights, basis) = adapted_basis(&[(0, f0.clone()), (1, f1.clone()), (2, f2)]);
        assert_eq!(weights, vec![0, 1, 2]);
        let lvl0 = Subspace::from_columns(&basis.submatrix(0..3, 0..1));
        let lvl1 = Subspace::from_columns(&basis.submatrix(0..3, 0..2));
        assert!(lvl0.eq_span(&f0));
        assert!(lvl1.eq_span(&f1));
    }
}
