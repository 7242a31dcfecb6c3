//! Lie algebras given by structure constants, with no metric attached.

use crate::error::{Error, Result};
use crate::pseudolin::{basis_vector, canonical_sign, column_space, nullspace, Matrix, Subspace, Vector};

/// A real Lie algebra on the basis `e_0..e_{n-1}`.
///
/// Only `[e_i, e_j]` with `i < j` is stored; reads with `i > j` negate the
/// stored vector, so antisymmetry holds bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    n: usize,
    upper: Vec<Vector>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    pub fn abelian(n: usize) -> Self {
        Self {
            n,
            upper: vec![Vector::zeros(n); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds from `[e_i, e_j] = Σ coeff e_k` entries (0-based). Entries with
    /// `i > j` are stored negated; repeated pairs accumulate.
    pub fn from_brackets<I>(n: usize, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vec<(usize, f64)>)>,
    {
        let mut a = Self::abelian(n);
        for (i, j, coeffs) in brackets {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "bracket index ({i},{j}) out of range for dimension {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("bracket [e{i},e{i}] must vanish")));
            }
            let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            let slot = &mut a.upper[pair_index(n, lo, hi)];
            for (k, x) in coeffs {
                if k >= n {
                    return Err(Error::InvalidInput(format!(
                        "coefficient index {k} out of range for dimension {n}"
                    )));
                }
                if !x.is_finite() {
                    return Err(Error::InvalidInput("non-finite structure constant".into()));
                }
                slot[k] += sign * x;
            }
        }
        Ok(a)
    }

    /// Builds from a full tensor `c(i, j, k)`, antisymmetrizing in `(i, j)`.
    pub fn from_tensor(n: usize, c: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let mut a = Self::abelian(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let slot = &mut a.upper[pair_index(n, i, j)];
                for k in 0..n {
                    let x = 0.5 * (c(i, j, k) - c(j, i, k));
                    if !x.is_finite() {
                        return Err(Error::InvalidInput("non-finite structure constant".into()));
                    }
                    slot[k] = x;
                }
            }
        }
        Ok(a)
    }

    /// Rejects brackets whose Jacobi defect exceeds `tol * max(1, |c|max²)`.
    pub fn checked(self, tol: f64) -> Result<Self> {
        let defect = jacobi_defect(&self);
        let scale = self.max_abs().powi(2).max(1.0);
        if defect > tol * scale {
            return Err(Error::InvalidInput(format!(
                "Jacobi identity fails (defect {defect:e})"
            )));
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)][k],
            std::cmp::Ordering::Greater => -self.upper[pair_index(self.n, j, i)][k],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.upper[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => Vector::zeros(self.n),
        }
    }

    pub fn bracket(&self, u: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = u[i] * v[j] - u[j] * v[i];
                if w != 0.0 {
                    out.axpy(w, &self.upper[pair_index(self.n, i, j)], 1.0);
                }
            }
        }
        out
    }

    /// Iterator over the stored pairs `(i, j, [e_i, e_j])` with `i < j`.
    pub fn upper_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vector)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, &self.upper[pair_index(n, i, j)])))
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn is_abelian(&self) -> bool {
        self.max_abs() == 0.0
    }

    /// Matrix of `v ↦ [u, v]`.
    pub fn ad(&self, u: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for j in 0..self.n {
            let col = self.bracket(u, &basis_vector(self.n, j));
            m.set_column(j, &col);
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for j in 0..self.n {
            m.set_column(j, &self.bracket_basis(i, j));
        }
        m
    }

    /// The same algebra in the basis formed by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        let n = self.n;
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::InvalidInput("basis change must be n x n".into()));
        }
        let inv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("basis change is singular".into()))?;
        let cols: Vec<Vector> = (0..n).map(|a| p.column(a).into_owned()).collect();
        let mut out = Self::abelian(n);
        for a in 0..n {
            for b in (a + 1)..n {
                out.upper[pair_index(n, a, b)] = &inv * self.bracket(&cols[a], &cols[b]);
            }
        }
        Ok(out)
    }
}

/// Largest sup-norm of the cyclic Jacobi sum over all basis triples.
pub fn jacobi_defect(a: &LieAlgebra) -> f64 {
    let n = a.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| a.ad_basis(i)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in (j + 1)..n {
                let jk = a.bracket_basis(j, k);
                let ki = a.bracket_basis(k, i);
                let ij = a.bracket_basis(i, j);
                let s = &ads[i] * jk + &ads[k] * ij + &ads[j] * ki;
                worst = worst.max(s.amax());
            }
        }
    }
    worst
}

pub fn ad(a: &LieAlgebra, u: &Vector) -> Matrix {
    a.ad(u)
}

/// Common kernel of all `ad(e_i)`.
pub fn center(a: &LieAlgebra, tol: f64) -> Subspace {
    let n = a.dim();
    let mut stacked = Matrix::zeros(n * n, n);
    for i in 0..n {
        stacked.view_mut((i * n, 0), (n, n)).copy_from(&a.ad_basis(i));
    }
    Subspace::from_independent(n, nullspace(&stacked, tol))
}

fn span_of(n: usize, vectors: &[Vector], tol: f64) -> Subspace {
    if vectors.is_empty() {
        return Subspace::zero(n);
    }
    let mut m = Matrix::zeros(n, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    Subspace::from_independent(n, column_space(&m, tol))
}

/// `[g, g]`.
pub fn derived_ideal(a: &LieAlgebra, tol: f64) -> Subspace {
    let brackets: Vec<Vector> = a.upper_brackets().map(|(_, _, v)| v.clone()).collect();
    span_of(a.dim(), &brackets, tol)
}

/// `g⁰ = g, g^{k+1} = [g, g^k]`, stopping at the first term that does not shrink.
///
/// Each term is carried as a set of generators scaled by their singular
/// values rather than an orthonormal basis. Normalizing would divide the
/// roundoff in a short direction by its length and let it leak into the
/// next bracket.
pub fn lower_central_series(a: &LieAlgebra, tol: f64) -> Vec<Subspace> {
    let n = a.dim();
    let mut series = vec![Subspace::whole(n)];
    let mut gens = Matrix::identity(n, n);
    let ads: Vec<Matrix> = (0..n).map(|i| a.ad_basis(i)).collect();
    while gens.ncols() > 0 {
        let k = gens.ncols();
        let mut next = Matrix::zeros(n, n * k);
        for (i, ad) in ads.iter().enumerate() {
            next.view_mut((0, i * k), (n, k)).copy_from(&(ad * &gens));
        }
        let (basis, scaled) = compressed_span(&next, tol);
        if basis.len() >= series.last().map_or(n, |s| s.dim()) {
            break;
        }
        series.push(Subspace::from_independent(n, basis));
        gens = scaled;
    }
    series
}

/// Orthonormal basis of the numerical column space of `m`, together with
/// the same directions multiplied by their singular values.
fn compressed_span(m: &Matrix, tol: f64) -> (Vec<Vector>, Matrix) {
    let n = m.nrows();
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sv = &svd.singular_values;
    let thr = tol * sv.iter().cloned().fold(1.0, f64::max);
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > thr && sv[i] > 0.0).collect();
    let mut scaled = Matrix::zeros(n, keep.len());
    let basis = keep
        .iter()
        .enumerate()
        .map(|(c, &i)| {
            let v = canonical_sign(u.column(i).into_owned());
            scaled.set_column(c, &(&v * sv[i]));
            v
        })
        .collect();
    (basis, scaled)
}

pub fn is_nilpotent(a: &LieAlgebra, tol: f64) -> bool {
    lower_central_series(a, tol).last().is_none_or(|s| s.dim() == 0)
}

/// A linear map of the algebra, intended to satisfy the Leibniz rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub matrix: Matrix,
}

impl Derivation {
    pub fn new(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self {
            matrix: Matrix::from_diagonal(&Vector::from_column_slice(d)),
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Sup-norm residual of `E[x,y] - [Ex,y] - [x,Ey]` over basis pairs.
pub fn derivation_defect(a: &LieAlgebra, e: &Matrix) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let ei = e.column(i).into_owned();
        let ej_all: Vec<Vector> = (0..n).map(|j| e.column(j).into_owned()).collect();
        for j in (i + 1)..n {
            let lhs = e * a.bracket_basis(i, j);
            let r1 = a.bracket(&ei, &basis_vector(n, j));
            let r2 = a.bracket(&basis_vector(n, i), &ej_all[j]);
            worst = worst.max((lhs - r1 - r2).amax());
        }
    }
    worst
}

/// Frobenius-orthonormal basis of the derivation algebra.
///
/// Unknowns are the entries `D[r][s]` (row-major); each pair `i < j` and
/// output coordinate `k` contributes one linear equation of the Leibniz rule.
pub fn derivation_space(a: &LieAlgebra, tol: f64) -> Vec<Derivation> {
    let n = a.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut sys = Matrix::zeros(pairs.len() * n, n * n);
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..n {
            let row = p * n + k;
            // D[e_i, e_j]_k = Σ_m c_ij^m D[k][m]
            for m in 0..n {
                sys[(row, k * n + m)] += a.structure_constant(i, j, m);
            }
            // [D e_i, e_j]_k = Σ_r D[r][i] c_rj^k
            for r in 0..n {
                sys[(row, r * n + i)] -= a.structure_constant(r, j, k);
            }
            // [e_i, D e_j]_k = Σ_r D[r][j] c_ir^k
            for r in 0..n {
                sys[(row, r * n + j)] -= a.structure_constant(i, r, k);
            }
        }
    }
    nullspace(&sys, tol)
        .into_iter()
        .map(|v| Derivation::new(Matrix::from_row_slice(n, n, v.as_slice())))
        .collect()
}

/// Frobenius projection of the identity onto the derivation algebra, returned
/// when its trace (the squared norm of the projection) exceeds `tol * n`.
///
/// Trace is linear, so a nonzero-trace derivation exists iff some basis
/// element has nonzero trace iff the projection is nonzero.
pub fn find_nonzero_trace_derivation(a: &LieAlgebra, tol: f64) -> Option<Derivation> {
    let n = a.dim();
    let basis = derivation_space(a, tol);
    let mut proj = Matrix::zeros(n, n);
    for b in &basis {
        proj += &b.matrix * b.trace();
    }
    let d = Derivation::new(proj);
    if d.trace().abs() > tol * (n as f64).max(1.0) {
        Some(d)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, [(0, 1, vec![(2, 1.0)])]).unwrap()
    }

    fn l56() -> LieAlgebra {
        LieAlgebra::from_brackets(
            5,
            [
                (0, 1, vec![(2, 1.0)]),
                (0, 2, vec![(3, 1.0)]),
                (0, 3, vec![(4, 1.0)]),
                (1, 2, vec![(4, 1.0)]),
            ],
        )
        .unwrap()
    }

    fn e(n: usize, i: usize) -> Vector {
        basis_vector(n, i)
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_defect(&LieAlgebra::abelian(3)), 0.0);
        assert_eq!(jacobi_defect(&l56()), 0.0);
        // [e1,e2]=e3, [e1,e3]=e1: cyclic sum on (e1,e2,e3) is
        // [e1,[e2,e3]] + [e3,[e1,e2]] + [e2,[e3,e1]] = 0 + [e3,e3] + [e2,-e1] = e3.
        let bad = LieAlgebra::from_brackets(3, [(0, 1, vec![(2, 1.0)]), (0, 2, vec![(0, 1.0)])]).unwrap();
        assert!((jacobi_defect(&bad) - 1.0).abs() < 1e-15);
        assert!(bad.checked(1e-9).is_err());
    }

    #[test]
    fn ad_examples() {
        let h = heisenberg();
        assert_eq!(LieAlgebra::abelian(3).ad(&e(3, 0)), Matrix::zeros(3, 3));
        let ad1 = h.ad(&e(3, 0));
        let mut want = Matrix::zeros(3, 3);
        want[(2, 1)] = 1.0;
        assert_eq!(ad1, want);
        assert_eq!(h.ad(&e(3, 2)), Matrix::zeros(3, 3));
    }

    #[test]
    fn characteristic_subspaces() {
        assert_eq!(center(&LieAlgebra::abelian(3), 1e-9).dim(), 3);
        let z = center(&l56(), 1e-9);
        assert_eq!(z.dim(), 1);
        assert!(z.distance(&e(5, 4)) < 1e-12);
        let z = center(&heisenberg(), 1e-9);
        assert_eq!(z.dim(), 1);
        assert!(z.distance(&e(3, 2)) < 1e-12);

        assert_eq!(derived_ideal(&LieAlgebra::abelian(3), 1e-9).dim(), 0);
        let d = derived_ideal(&l56(), 1e-9);
        assert_eq!(d.dim(), 3);
        for k in 2..5 {
            assert!(d.distance(&e(5, k)) < 1e-12);
        }
        let l43 = LieAlgebra::from_brackets(4, [(0, 1, vec![(2, 1.0)]), (0, 2, vec![(3, 1.0)])]).unwrap();
        let d = derived_ideal(&l43, 1e-9);
        assert_eq!(d.dim(), 2);
        assert!(d.distance(&e(4, 2)) < 1e-12 && d.distance(&e(4, 3)) < 1e-12);
    }

    #[test]
    fn central_series_and_nilpotency() {
        let dims = |a: &LieAlgebra| {
            lower_central_series(a, 1e-9)
                .iter()
                .map(Subspace::dim)
                .collect::<Vec<_>>()
        };
        assert_eq!(dims(&LieAlgebra::abelian(3)), vec![3, 0]);
        assert_eq!(dims(&l56()), vec![5, 3, 2, 1, 0]);
        let l42 = LieAlgebra::from_brackets(4, [(0, 1, vec![(2, 1.0)])]).unwrap();
        assert_eq!(dims(&l42), vec![4, 1, 0]);
        let solvable = LieAlgebra::from_brackets(2, [(0, 1, vec![(1, 1.0)])]).unwrap();
        assert_eq!(dims(&solvable), vec![2, 1]);
        assert!(!is_nilpotent(&solvable, 1e-9));
        assert!(is_nilpotent(&l56(), 1e-9));
        assert!(is_nilpotent(&LieAlgebra::abelian(2), 1e-9));
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(derivation_space(&LieAlgebra::abelian(2), 1e-9).len(), 4);
        let h = heisenberg();
        let basis = derivation_space(&h, 1e-9);
        // Heisenberg derivations: 6-dimensional (gl(2) on span{e1,e2} plus e3-column freedom).
        assert_eq!(basis.len(), 6);
        for b in &basis {
            assert!(derivation_defect(&h, &b.matrix) < 1e-12);
        }
        assert!(derivation_defect(&h, &Derivation::from_diagonal(&[1.0, 0.0, 1.0]).matrix) < 1e-15);
        assert_eq!(derivation_defect(&h, &Matrix::identity(3, 3)), 1.0);
        assert_eq!(
            derivation_defect(
                &LieAlgebra::abelian(3),
                &Matrix::from_fn(3, 3, |i, j| (i * 3 + j) as f64 - 2.5)
            ),
            0.0
        );
    }

    #[test]
    fn nonzero_trace_derivation() {
        let d = find_nonzero_trace_derivation(&LieAlgebra::abelian(3), 1e-9).unwrap();
        assert!((d.matrix.clone() - Matrix::identity(3, 3)).amax() < 1e-12);
        let d = find_nonzero_trace_derivation(&heisenberg(), 1e-9).unwrap();
        assert!(d.trace() > 0.1);
        assert!(derivation_defect(&heisenberg(), &d.matrix) < 1e-12);
        let d = find_nonzero_trace_derivation(&l56(), 1e-9).unwrap();
        assert!(derivation_defect(&l56(), &d.matrix) < 1e-12);
    }

    #[test]
    fn bracket_is_bitwise_antisymmetric() {
        let a = l56();
        let u = Vector::from_column_slice(&[0.1, -0.7, 0.3, 1.9, -2.2]);
        let v = Vector::from_column_slice(&[1.3, 0.2, -0.9, 0.4, 0.05]);
        let uv = a.bracket(&u, &v);
        let vu = a.bracket(&v, &u);
        for k in 0..5 {
            // equality up to the sign of zero
            assert!(uv[k] == -vu[k]);
        }
    }
}
