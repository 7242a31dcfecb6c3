//! Linear algebra for nondegenerate symmetric bilinear forms of any signature.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// A symmetric bilinear form in coordinates.
///
/// Construction symmetrizes the input so that `g[i][j] == g[j][i]` holds bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram {
    m: Matrix,
}

impl Gram {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "gram matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        ensure_finite(&m, "gram matrix")?;
        let n = m.nrows();
        let mut s = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        Ok(Self { m: s })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("gram rows must all have length n".into()));
        }
        Self::new(Matrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: Matrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(&Vector::from_column_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        (u.transpose() * &self.m * v)[(0, 0)]
    }

    /// `Pᵀ g P`: the same form expressed in the basis given by the columns of `p`.
    pub fn congruence(&self, p: &Matrix) -> Result<Self> {
        Self::new(p.transpose() * &self.m * p)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }

    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        let sv = self.m.clone().svd(false, false).singular_values;
        let smax = sv.max();
        smax > 0.0 && sv.iter().all(|&s| s > tol * smax)
    }
}

/// Eigenvalue counts of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub minus: usize,
    pub plus: usize,
    pub null: usize,
}

impl Signature {
    pub fn is_lorentzian(&self) -> bool {
        self.minus == 1 && self.null == 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.minus, self.plus, self.null)
    }
}

/// A subspace of coordinate space, held as a linearly independent spanning list.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    vectors: Vec<Vector>,
}

impl Subspace {
    pub fn new(ambient_dim: usize, vectors: Vec<Vector>, tol: f64) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::InvalidInput(format!(
                "spanning vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
        for v in &vectors {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite spanning vector".into()));
            }
        }
        let s = Self { ambient_dim, vectors };
        if numerical_rank(&s.as_matrix(), tol) != s.vectors.len() {
            return Err(Error::InvalidInput("spanning list is rank deficient".into()));
        }
        Ok(s)
    }

    /// Trusted constructor for vectors already known to be independent
    /// (orthonormal SVD output).
    pub(crate) fn from_independent(ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        Self { ambient_dim, vectors }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim).map(|i| basis_vector(ambient_dim, i)).collect();
        Self { ambient_dim, vectors }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Spanning vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn as_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient_dim, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        m
    }

    /// Euclidean distance from `v` to the subspace (least-squares residual).
    pub fn distance(&self, v: &Vector) -> f64 {
        if self.vectors.is_empty() {
            return v.norm();
        }
        let a = self.as_matrix();
        let svd = a.clone().svd(true, true);
        let coeffs = svd
            .solve(v, 1e-14)
            .unwrap_or_else(|_| Vector::zeros(self.vectors.len()));
        (v - a * coeffs).norm()
    }

    /// Largest distance from a spanning vector of `self` to `other`.
    pub fn inclusion_residual(&self, other: &Subspace) -> f64 {
        self.vectors.iter().map(|v| other.distance(v)).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubspaceTag {
    EuclideanNondegenerate,
    LorentzianNondegenerate,
    /// Nondegenerate restriction with two or more negative directions; only
    /// reachable when the ambient form itself has index at least two.
    IndefiniteNondegenerate,
    Degenerate,
}

impl std::fmt::Display for SubspaceTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SubspaceTag::EuclideanNondegenerate => "EuclideanNondegenerate",
            SubspaceTag::LorentzianNondegenerate => "LorentzianNondegenerate",
            SubspaceTag::IndefiniteNondegenerate => "IndefiniteNondegenerate",
            SubspaceTag::Degenerate => "Degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceClass {
    pub tag: SubspaceTag,
    /// `dim(F ∩ F⊥)`, zero unless the tag is `Degenerate`.
    pub null_dim: usize,
    pub signature: Signature,
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

pub(crate) fn ensure_finite(m: &Matrix, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has non-finite entries")))
    }
}

/// Eigenvalue counts of a symmetric matrix; values within `tol * max(1, |λ|max)`
/// of zero count as null, ties included.
pub fn symmetric_signature(m: &Matrix, tol: f64) -> Result<Signature> {
    ensure_finite(m, "symmetric matrix")?;
    if m.nrows() == 0 {
        return Ok(Signature {
            minus: 0,
            plus: 0,
            null: 0,
        });
    }
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let thr = tol * eig.amax().max(1.0);
    let mut s = Signature {
        minus: 0,
        plus: 0,
        null: 0,
    };
    for &l in eig.iter() {
        if l < -thr {
            s.minus += 1;
        } else if l > thr {
            s.plus += 1;
        } else {
            s.null += 1;
        }
    }
    Ok(s)
}

pub fn signature(g: &Gram, tol: f64) -> Result<Signature> {
    symmetric_signature(g.matrix(), tol)
}

fn singular_threshold(sv: &Vector, tol: f64) -> f64 {
    tol * sv.iter().cloned().fold(1.0, f64::max)
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn numerical_rank(m: &Matrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let thr = singular_threshold(&sv, tol);
    sv.iter().filter(|&&s| s > thr && s > 0.0).count()
}

/// Flip `v` so that its first largest-magnitude entry is positive.
pub(crate) fn canonical_sign(mut v: Vector) -> Vector {
    let mut best = 0.0;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best * (1.0 + 1e-12) {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.neg_mut();
    }
    v
}

/// Orthonormal basis of the right nullspace of `m`.
pub fn nullspace(m: &Matrix, tol: f64) -> Vec<Vector> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD returns a full set of right singular vectors.
    let rows = m.nrows().max(n);
    let mut a = Matrix::zeros(rows, n);
    a.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let thr = singular_threshold(&svd.singular_values, tol);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr || s == 0.0)
        .map(|(i, _)| canonical_sign(v_t.row(i).transpose()))
        .collect()
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &Matrix, tol: f64) -> Vec<Vector> {
    if m.is_empty() {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let thr = singular_threshold(&svd.singular_values, tol);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > thr && s > 0.0)
        .map(|(i, _)| canonical_sign(u.column(i).into_owned()))
        .collect()
}

/// Restriction of `g` to `f` in the spanning coordinates of `f`.
pub fn restricted_gram(g: &Gram, f: &Subspace) -> Matrix {
    let a = f.as_matrix();
    a.transpose() * g.matrix() * a
}

fn check_dims(g: &Gram, f: &Subspace) -> Result<()> {
    if g.dim() != f.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "subspace lives in dimension {}, form in dimension {}",
            f.ambient_dim(),
            g.dim()
        )));
    }
    Ok(())
}

pub fn classify_subspace(g: &Gram, f: &Subspace, tol: f64) -> Result<SubspaceClass> {
    check_dims(g, f)?;
    if numerical_rank(&f.as_matrix(), tol) != f.dim() {
        return Err(Error::InvalidInput("spanning list is rank deficient".into()));
    }
    let sig = symmetric_signature(&restricted_gram(g, f), tol)?;
    let tag = if sig.null > 0 {
        SubspaceTag::Degenerate
    } else {
        match sig.minus {
            0 => SubspaceTag::EuclideanNondegenerate,
            1 => SubspaceTag::LorentzianNondegenerate,
            _ => SubspaceTag::IndefiniteNondegenerate,
        }
    };
    Ok(SubspaceClass {
        tag,
        null_dim: sig.null,
        signature: sig,
    })
}

/// `F⊥` with respect to `g`, as an orthonormal (Euclidean) spanning list.
pub fn orthogonal_complement(g: &Gram, f: &Subspace, tol: f64) -> Result<Subspace> {
    check_dims(g, f)?;
    if f.dim() == 0 {
        return Ok(Subspace::whole(g.dim()));
    }
    let constraints = f.as_matrix().transpose() * g.matrix();
    Ok(Subspace::from_independent(g.dim(), nullspace(&constraints, tol)))
}

/// A Euclidean-unit isotropic vector of `F`, or `None` when `g` is definite on `F`.
///
/// A null direction of the restricted form is preferred; otherwise a negative
/// and a positive eigendirection are combined into a light-like vector.
pub fn find_isotropic_in(g: &Gram, f: &Subspace, tol: f64) -> Result<Option<Vector>> {
    check_dims(g, f)?;
    if f.dim() == 0 {
        return Ok(None);
    }
    let restricted = restricted_gram(g, f);
    ensure_finite(&restricted, "restricted gram")?;
    let eig = SymmetricEigen::new(restricted);
    let thr = tol * eig.eigenvalues.amax().max(1.0);
    let a = f.as_matrix();

    let pick = |pred: &dyn Fn(f64) -> bool, by_abs_min: bool| -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if !pred(l) {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let lb = eig.eigenvalues[b];
                    let better = if by_abs_min {
                        l.abs() < lb.abs()
                    } else {
                        l.abs() > lb.abs()
                    };
                    if better {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    };

    let coords = if let Some(i) = pick(&|l: f64| l.abs() <= thr, true) {
        eig.eigenvectors.column(i).into_owned()
    } else {
        let neg = pick(&|l: f64| l < -thr, false);
        let pos = pick(&|l: f64| l > thr, false);
        match (neg, pos) {
            (Some(i), Some(j)) => {
                let li = eig.eigenvalues[i];
                let lj = eig.eigenvalues[j];
                eig.eigenvectors.column(i) / (-li).sqrt() + eig.eigenvectors.column(j) / lj.sqrt()
            }
            _ => return Ok(None),
        }
    };
    let v = a * coords;
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(None);
    }
    Ok(Some(canonical_sign(v / norm)))
}

/// Orthonormal frame of a nondegenerate form: columns `b_i` with
/// `⟨b_i, b_j⟩ = ε_i δ_ij`. Returns the frame and the signs.
pub fn orthonormal_frame(g: &Gram) -> (Matrix, Vec<f64>) {
    let eig = SymmetricEigen::new(g.matrix().clone());
    let n = g.dim();
    let mut frame = Matrix::zeros(n, n);
    let mut eps = Vec::with_capacity(n);
    for i in 0..n {
        let l = eig.eigenvalues[i];
        let scale = l.abs().sqrt();
        frame.set_column(i, &(eig.eigenvectors.column(i) / scale));
        eps.push(l.signum());
    }
    (frame, eps)
}

/// Random orthogonal matrix: the Q factor of a matrix with standard normal entries.
pub fn random_orthogonal<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
        .qr()
        .q()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn span(n: usize, vs: &[&[f64]]) -> Subspace {
        Subspace::new(n, vs.iter().map(|x| v(x)).collect(), 1e-9).unwrap()
    }

    #[test]
    fn signature_examples() {
        let id = Gram::identity(3);
        assert_eq!(
            signature(&id, 1e-9).unwrap(),
            Signature {
                minus: 0,
                plus: 3,
                null: 0
            }
        );
        let hyp = Gram::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            signature(&hyp, 1e-9).unwrap(),
            Signature {
                minus: 1,
                plus: 1,
                null: 0
            }
        );
        let m32 = Gram::from_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(
            signature(&m32, 1e-9).unwrap(),
            Signature {
                minus: 1,
                plus: 2,
                null: 0
            }
        );
    }

    #[test]
    fn signature_rejects_nan() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(Gram::new(m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn boundary_eigenvalue_counts_as_null() {
        let g = Gram::diagonal(&[1.0, 1e-9]).unwrap();
        assert_eq!(signature(&g, 1e-9).unwrap().null, 1);
    }

    #[test]
    fn construction_symmetrizes_bitwise() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 0.1 + 0.2, 0.3, 2.0]);
        let g = Gram::new(m).unwrap();
        assert_eq!(g.matrix()[(0, 1)].to_bits(), g.matrix()[(1, 0)].to_bits());
    }

    #[test]
    fn classify_examples() {
        let g = Gram::diagonal(&[-1.0, 1.0, 1.0]).unwrap();
        let c = classify_subspace(&g, &span(3, &[&[0.0, 1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.tag, SubspaceTag::EuclideanNondegenerate);
        let c = classify_subspace(&g, &span(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.tag, SubspaceTag::LorentzianNondegenerate);
        let c = classify_subspace(&g, &span(3, &[&[1.0, 1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.tag, SubspaceTag::Degenerate);
        assert_eq!(c.null_dim, 1);
    }

    #[test]
    fn rank_deficient_span_is_rejected() {
        let r = Subspace::new(3, vec![v(&[1.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])], 1e-9);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn complement_examples() {
        let g = Gram::identity(3);
        let c = orthogonal_complement(&g, &span(3, &[&[1.0, 0.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.distance(&v(&[0.0, 1.0, 0.0])) < 1e-12);
        assert!(c.distance(&v(&[0.0, 0.0, 1.0])) < 1e-12);

        let g = Gram::diagonal(&[-1.0, 1.0, 1.0]).unwrap();
        let c = orthogonal_complement(&g, &span(3, &[&[1.0, 1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.distance(&v(&[1.0, 1.0, 0.0])) < 1e-12);
        assert!(c.distance(&v(&[0.0, 0.0, 1.0])) < 1e-12);

        let g = Gram::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = orthogonal_complement(&g, &span(2, &[&[1.0, 0.0]]), 1e-9).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.distance(&v(&[1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn isotropic_examples() {
        assert!(find_isotropic_in(&Gram::identity(2), &Subspace::whole(2), 1e-9)
            .unwrap()
            .is_none());

        let g = Gram::diagonal(&[-1.0, 1.0]).unwrap();
        let w = find_isotropic_in(&g, &Subspace::whole(2), 1e-9).unwrap().unwrap();
        assert!(g.inner(&w, &w).abs() < 1e-12);
        assert!((w[0].abs() - w[1].abs()).abs() < 1e-12);

        let g = Gram::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let w = find_isotropic_in(&g, &span(2, &[&[1.0, 0.0]]), 1e-9).unwrap().unwrap();
        assert!((w - v(&[1.0, 0.0])).amax() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&Matrix::identity(3, 3), 1e-9), 3);
        assert_eq!(numerical_rank(&Matrix::zeros(3, 3), 1e-9), 0);
        let x = v(&[1.0, 2.0, 3.0]);
        assert_eq!(numerical_rank(&(&x * x.transpose()), 1e-9), 1);
    }

    #[test]
    fn frame_is_orthonormal() {
        let g = Gram::from_rows(&[vec![0.0, 0.0, 2.0], vec![0.0, 1.0, 0.0], vec![2.0, 0.0, 0.0]]).unwrap();
        let (b, eps) = orthonormal_frame(&g);
        let d = b.transpose() * g.matrix() * &b;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { eps[i] } else { 0.0 };
                assert!((d[(i, j)] - want).abs() < 1e-12);
            }
        }
    }
}
