//! Double extensions of a Euclidean vector space.
//!
//! Given a Euclidean core `V` and data `(K, D, μ, b)`, the algebra
//! `ℝe ⊕ V ⊕ ℝē` carries the bracket
//!
//! ```text
//! [ē, e] = μ e,   [ē, u] = D u + ⟨b, u⟩ e,   [u, v] = ⟨K u, v⟩ e
//! ```
//!
//! and the Lorentzian metric with `⟨e, ē⟩ = 1`, `e` and `ē` isotropic and
//! orthogonal to `V`. The basis is always ordered `(e, f₁, …, f_v, ē)`.

use nalgebra::SymmetricEigen;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::curvature::{einstein_classify, MetricLieAlgebra};
use crate::error::{Error, Result};
use crate::liealg::{self, LieAlgebra};
use crate::pseudolin::{
    find_isotropic_in, numerical_rank, orthogonal_complement, random_orthogonal, signature, Gram, Matrix, Subspace,
    Vector,
};
use crate::tol;

/// `(i, j, [(k, c)])` meaning `[e_i, e_j] = Σ c e_k`.
type Bracket = (usize, usize, Vec<(usize, f64)>);

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionData {
    k: Matrix,
    pub d: Matrix,
    pub mu: f64,
    pub b: Vector,
}

impl ExtensionData {
    /// `K` is replaced by `(K - Kᵀ)/2`.
    pub fn new(k: Matrix, d: Matrix, mu: f64, b: Vector) -> Result<Self> {
        let v = k.nrows();
        if k.ncols() != v || d.nrows() != v || d.ncols() != v || b.len() != v {
            return Err(Error::InvalidInput(format!(
                "extension data shapes disagree: K {}x{}, D {}x{}, b {}",
                k.nrows(),
                k.ncols(),
                d.nrows(),
                d.ncols(),
                b.len()
            )));
        }
        for (what, ok) in [
            ("K", k.iter().all(|x| x.is_finite())),
            ("D", d.iter().all(|x| x.is_finite())),
            ("b", b.iter().all(|x| x.is_finite())),
            ("mu", mu.is_finite()),
        ] {
            if !ok {
                return Err(Error::InvalidInput(format!("{what} has non-finite entries")));
            }
        }
        Ok(Self {
            k: antisymmetrize(&k),
            d,
            mu,
            b,
        })
    }

    /// Data with every entry zero.
    pub fn zero(v_dim: usize) -> Self {
        Self {
            k: Matrix::zeros(v_dim, v_dim),
            d: Matrix::zeros(v_dim, v_dim),
            mu: 0.0,
            b: Vector::zeros(v_dim),
        }
    }

    pub fn v_dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn k(&self) -> &Matrix {
        &self.k
    }

    pub fn set_k(&mut self, k: &Matrix) {
        self.k = antisymmetrize(k);
    }

    fn magnitude(&self) -> f64 {
        self.k.amax().max(self.d.amax()).max(self.mu.abs()).max(self.b.amax())
    }

    fn quadratic_scale(&self) -> f64 {
        let m = self.magnitude();
        (m * m).max(1.0)
    }

    /// `‖K D + Dᵀ K - μ K‖∞`.
    pub fn lie_residual(&self) -> f64 {
        (&self.k * &self.d + self.d.transpose() * &self.k - &self.k * self.mu).amax()
    }

    /// `|4μ tr D - tr K² - 2 tr D² - 2 tr D Dᵀ|`.
    pub fn trace_residual(&self) -> f64 {
        let dd = &self.d * &self.d;
        let ddt = &self.d * self.d.transpose();
        (4.0 * self.mu * self.d.trace() - (&self.k * &self.k).trace() - 2.0 * dd.trace() - 2.0 * ddt.trace()).abs()
    }
}

fn antisymmetrize(k: &Matrix) -> Matrix {
    let n = k.nrows();
    // (a - b)/2 and (b - a)/2 are exact negatives of each other.
    Matrix::from_fn(
        n,
        k.ncols(),
        |i, j| if i == j { 0.0 } else { (k[(i, j)] - k[(j, i)]) / 2.0 },
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Admissibility {
    pub is_lie: bool,
    pub is_nilpotent: bool,
    pub is_einstein: bool,
    pub lie_residual: f64,
    pub trace_residual: f64,
}

pub fn check_admissible(d: &ExtensionData, tol: f64) -> Admissibility {
    let scale = d.quadratic_scale();
    let lie_residual = d.lie_residual();
    let trace_residual = d.trace_residual();
    let is_lie = lie_residual <= tol * scale;
    let is_nilpotent = is_lie && d.mu.abs() <= tol && is_nilpotent_matrix(&d.d, tol);
    let is_einstein = is_lie && trace_residual <= tol * scale;
    Admissibility {
        is_lie,
        is_nilpotent,
        is_einstein,
        lie_residual,
        trace_residual,
    }
}

fn is_nilpotent_matrix(m: &Matrix, tol: f64) -> bool {
    let n = m.nrows();
    if n == 0 {
        return true;
    }
    let mut p = m.clone();
    for _ in 1..n {
        p = &p * m;
    }
    p.amax() <= tol * m.amax().max(1.0).powi(n as i32)
}

fn require_lie(d: &ExtensionData) -> Result<()> {
    let adm = check_admissible(d, tol::LINALG);
    if adm.is_lie {
        Ok(())
    } else {
        Err(Error::NotLie {
            residual: adm.lie_residual,
        })
    }
}

/// Gram of the model form on `(e, f₁, …, f_v, ē)`.
pub fn model_gram(v_dim: usize) -> Gram {
    let n = v_dim + 2;
    let mut g = Matrix::identity(n, n);
    g[(0, 0)] = 0.0;
    g[(n - 1, n - 1)] = 0.0;
    g[(0, n - 1)] = 1.0;
    g[(n - 1, 0)] = 1.0;
    Gram::new(g).expect("model gram is finite and square")
}

fn model_algebra(d: &ExtensionData) -> LieAlgebra {
    let v = d.v_dim();
    let n = v + 2;
    let eb = n - 1;
    let mut brackets: Vec<Bracket> = Vec::new();
    brackets.push((0, eb, vec![(0, -d.mu)]));
    for i in 0..v {
        let mut coeffs = vec![(0, -d.b[i])];
        coeffs.extend((0..v).map(|k| (k + 1, -d.d[(k, i)])));
        brackets.push((i + 1, eb, coeffs));
        for j in (i + 1)..v {
            brackets.push((i + 1, j + 1, vec![(0, d.k[(j, i)])]));
        }
    }
    LieAlgebra::from_brackets(n, brackets).expect("model brackets are in range")
}

pub fn extend(d: &ExtensionData) -> Result<MetricLieAlgebra> {
    require_lie(d)?;
    MetricLieAlgebra::new(model_algebra(d), model_gram(d.v_dim()))
}

/// `ric(ē, ē) = -½ tr D² - ½ tr D Dᵀ - ¼ tr K² + μ tr D`.
pub fn ricci_ebar(d: &ExtensionData) -> Result<f64> {
    require_lie(d)?;
    let dd = (&d.d * &d.d).trace();
    let ddt = (&d.d * d.d.transpose()).trace();
    let kk = (d.k() * d.k()).trace();
    Ok(-0.5 * dd - 0.5 * ddt - 0.25 * kk + d.mu * d.d.trace())
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub data: ExtensionData,
    /// Columns are `e, f₁, …, f_v, ē` in the input basis.
    pub basis_change: Matrix,
    /// Sup-norm gap between the input in the new basis and `extend(data)`,
    /// over structure constants and gram entries.
    pub model_residual: f64,
}

/// Exhibit a Lorentzian Ricci-flat nilpotent algebra as a double extension.
///
/// Returns `Ok(None)` when the center contains no isotropic vector.
pub fn decompose(m: &MetricLieAlgebra, tol: f64) -> Result<Option<Decomposition>> {
    let a = m.algebra();
    let g = m.gram();
    let n = m.dim();
    if !liealg::is_nilpotent(a, tol::LINALG) {
        return Err(Error::NotApplicable("algebra is not nilpotent".into()));
    }
    if !signature(g, tol::LINALG)?.is_lorentzian() {
        return Err(Error::NotApplicable("metric is not Lorentzian".into()));
    }
    let report = einstein_classify(m, tol);
    if !report.verdict.is_ricci_flat() {
        return Err(Error::NotApplicable(format!(
            "metric is {}, not Ricci-flat",
            report.verdict
        )));
    }

    let center = liealg::center(a, tol::LINALG);
    let Some(e) = find_isotropic_in(g, &center, tol::LINALG)? else {
        return Ok(None);
    };
    let ge = g.matrix() * &e;
    let x = &ge / ge.norm_squared();
    let ebar = &x - &e * (0.5 * g.inner(&x, &x));

    let pair = Subspace::new(n, vec![e.clone(), ebar.clone()], tol::LINALG)?;
    let v = orthogonal_complement(g, &pair, tol::LINALG)?;
    let fv = v.as_matrix();
    let eig = SymmetricEigen::new(fv.transpose() * g.matrix() * &fv);
    let v_dim = v.dim();
    let mut p = Matrix::zeros(n, n);
    p.set_column(0, &e);
    for i in 0..v_dim {
        let col = &fv * eig.eigenvectors.column(i) / eig.eigenvalues[i].abs().sqrt();
        p.set_column(i + 1, &col);
    }
    p.set_column(n - 1, &ebar);

    let moved = m.change_basis(&p)?;
    let c = moved.algebra();
    let eb = n - 1;
    let mut k = Matrix::zeros(v_dim, v_dim);
    let mut d = Matrix::zeros(v_dim, v_dim);
    let mut b = Vector::zeros(v_dim);
    for i in 0..v_dim {
        for j in 0..v_dim {
            k[(j, i)] = c.structure_constant(i + 1, j + 1, 0);
            d[(j, i)] = c.structure_constant(eb, i + 1, j + 1);
        }
        b[i] = c.structure_constant(eb, i + 1, 0);
    }
    let data = ExtensionData::new(k, d, 0.0, b)?;
    let model = MetricLieAlgebra::new(model_algebra(&data), model_gram(v_dim))?;
    let model_residual = model_distance(&moved, &model);
    Ok(Some(Decomposition {
        data,
        basis_change: p,
        model_residual,
    }))
}

/// Sup-norm distance between two metric algebras of the same dimension,
/// over structure constants and gram entries.
pub fn model_distance(x: &MetricLieAlgebra, y: &MetricLieAlgebra) -> f64 {
    let n = x.dim();
    let mut worst = (x.gram().matrix() - y.gram().matrix()).amax();
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((x.algebra().bracket_basis(i, j) - y.algebra().bracket_basis(i, j)).amax());
        }
    }
    worst
}

/// `(K, D)` with `K D + Dᵀ K = 0` from blocks on `V = F ⊕ F⊥`:
/// `D = [[D1, D2], [0, K0⁻¹ S]]`, `K = [[0, 0], [0, K0]]`.
pub fn kd_generate(
    f_dim: usize,
    fperp_dim: usize,
    d1: &Matrix,
    d2: &Matrix,
    k0: &Matrix,
    s: &Matrix,
) -> Result<(Matrix, Matrix)> {
    let shape = |m: &Matrix, r: usize, c: usize, what: &str| {
        if m.nrows() == r && m.ncols() == c {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{what} must be {r}x{c}, got {}x{}",
                m.nrows(),
                m.ncols()
            )))
        }
    };
    shape(d1, f_dim, f_dim, "D1")?;
    shape(d2, f_dim, fperp_dim, "D2")?;
    shape(k0, fperp_dim, fperp_dim, "K0")?;
    shape(s, fperp_dim, fperp_dim, "S")?;
    let mag = k0.amax().max(s.amax()).max(1.0);
    if (k0 + k0.transpose()).amax() > tol::LINALG * mag {
        return Err(Error::InvalidInput("K0 must be skew-symmetric".into()));
    }
    if (s - s.transpose()).amax() > tol::LINALG * mag {
        return Err(Error::InvalidInput("S must be symmetric".into()));
    }
    if numerical_rank(k0, tol::LINALG) < fperp_dim {
        return Err(Error::SingularK0);
    }
    let k0_inv = k0.clone().try_inverse().ok_or(Error::SingularK0)?;

    let v = f_dim + fperp_dim;
    let mut d = Matrix::zeros(v, v);
    d.view_mut((0, 0), (f_dim, f_dim)).copy_from(d1);
    d.view_mut((0, f_dim), (f_dim, fperp_dim)).copy_from(d2);
    d.view_mut((f_dim, f_dim), (fperp_dim, fperp_dim))
        .copy_from(&(k0_inv * s));
    let mut k = Matrix::zeros(v, v);
    k.view_mut((f_dim, f_dim), (fperp_dim, fperp_dim)).copy_from(k0);
    Ok((antisymmetrize(&k), d))
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
}

/// Random admissible data with `μ = 0` and `D` nilpotent, satisfying the trace
/// identity, so that the extension is a Ricci-flat nilpotent Lorentzian algebra.
///
/// `v_dim` must be at least 2.
pub fn random_nilpotent_data<R: Rng + ?Sized>(rng: &mut R, v_dim: usize) -> Result<ExtensionData> {
    if v_dim < 2 {
        return Err(Error::InvalidInput("random nilpotent data needs v_dim >= 2".into()));
    }
    let blocks = rng.random_range(1..=v_dim / 2);
    let fperp = 2 * blocks;
    let f = v_dim - fperp;
    let magnitude = Uniform::new(0.5, 2.0).expect("valid range");
    let mut k0 = Matrix::zeros(fperp, fperp);
    let mut s = Matrix::zeros(fperp, fperp);
    for blk in 0..blocks {
        let o = 2 * blk;
        let alpha = magnitude.sample(rng);
        k0[(o, o + 1)] = -alpha;
        k0[(o + 1, o)] = alpha;
        s[(o + 1, o + 1)] = magnitude.sample(rng);
    }
    let d1 = Matrix::from_fn(f, f, |i, j| if i < j { StandardNormal.sample(rng) } else { 0.0 });
    let d2 = gaussian_matrix(rng, f, fperp);
    let (k, d) = kd_generate(f, fperp, &d1, &d2, &k0, &s)?;

    // Scaling K preserves K D + Dᵀ K = 0; pick the factor that closes the trace identity.
    let kk = (&k * &k).trace();
    let target = -2.0 * (&d * &d).trace() - 2.0 * (&d * d.transpose()).trace();
    let t = (target / kk).sqrt();
    let q = random_orthogonal(rng, v_dim);
    let b = Vector::from_fn(v_dim, |_, _| StandardNormal.sample(rng));
    ExtensionData::new(q.transpose() * (k * t) * &q, q.transpose() * d * &q, 0.0, b)
}

/// Random data defining a Lie algebra with the given `μ` (not necessarily
/// Einstein): nilpotent data with `D` shifted by `μ/2`.
pub fn random_lie_data<R: Rng + ?Sized>(rng: &mut R, v_dim: usize, mu: f64) -> Result<ExtensionData> {
    let base = random_nilpotent_data(rng, v_dim)?;
    let d = &base.d + Matrix::identity(v_dim, v_dim) * (mu / 2.0);
    ExtensionData::new(base.k.clone(), d, mu, base.b)
}

/// The 2-step nilpotent Lorentzian algebra on `(e, z₁…z_p, ē, e₁…e_q)` with
/// `[ē, e_i] = α_i e + Σ_k c_ik z_k` and `[e_i, e_j] = a_ij e`, plus an
/// orthogonal abelian summand of dimension `abelian_dim`.
///
/// Requires `Σ_ij a_ij² = 2 Σ_ik c_ik²` over all ordered pairs.
pub fn guediri_2step(
    p: usize,
    q: usize,
    alpha: &Vector,
    c: &Matrix,
    a: &Matrix,
    abelian_dim: usize,
) -> Result<MetricLieAlgebra> {
    if alpha.len() != q || c.nrows() != q || c.ncols() != p || a.nrows() != q || a.ncols() != q {
        return Err(Error::InvalidInput(format!(
            "expected alpha of length {q}, c of shape {q}x{p}, a of shape {q}x{q}"
        )));
    }
    let mag = a.amax().max(c.amax()).max(alpha.amax()).max(1.0);
    if (a + a.transpose()).amax() > tol::LINALG * mag {
        return Err(Error::InvalidInput("a must be skew-symmetric".into()));
    }
    let a = antisymmetrize(a);
    let lhs = a.norm_squared();
    let rhs = 2.0 * c.norm_squared();
    if (lhs - rhs).abs() > tol::LINALG * (mag * mag) {
        return Err(Error::ConstraintViolation { lhs, rhs });
    }

    let n = 2 + p + q + abelian_dim;
    let e = 0;
    let z = |k: usize| 1 + k;
    let eb = 1 + p;
    let ei = |i: usize| 2 + p + i;
    let mut brackets: Vec<Bracket> = Vec::new();
    for i in 0..q {
        let mut coeffs = vec![(e, alpha[i])];
        coeffs.extend((0..p).map(|k| (z(k), c[(i, k)])));
        brackets.push((eb, ei(i), coeffs));
        for j in (i + 1)..q {
            brackets.push((ei(i), ei(j), vec![(e, a[(i, j)])]));
        }
    }
    let algebra = LieAlgebra::from_brackets(n, brackets)?;
    let mut g = Matrix::identity(n, n);
    g[(e, e)] = 0.0;
    g[(eb, eb)] = 0.0;
    g[(e, eb)] = 1.0;
    g[(eb, e)] = 1.0;
    MetricLieAlgebra::new(algebra, Gram::new(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{ricci_via_definition, Verdict};
    use crate::pseudolin::{classify_subspace, SubspaceTag};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2(rows: [[f64; 2]; 2]) -> Matrix {
        Matrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
    }

    fn rotation_data(alpha: f64, eps: f64) -> ExtensionData {
        ExtensionData::new(
            m2([[0.0, -alpha], [alpha, 0.0]]),
            m2([[0.0, eps * alpha], [0.0, 0.0]]),
            0.0,
            Vector::zeros(2),
        )
        .unwrap()
    }

    #[test]
    fn k_is_antisymmetrized() {
        let d = ExtensionData::new(m2([[1.0, 2.0], [0.0, 3.0]]), Matrix::zeros(2, 2), 0.0, Vector::zeros(2)).unwrap();
        assert_eq!(d.k(), &m2([[0.0, 1.0], [-1.0, 0.0]]));
        assert!(ExtensionData::new(Matrix::zeros(2, 2), Matrix::zeros(3, 3), 0.0, Vector::zeros(2)).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let adm = check_admissible(&ExtensionData::zero(3), 1e-9);
        assert!(adm.is_lie && adm.is_nilpotent && adm.is_einstein);
        for eps in [1.0, -1.0] {
            let adm = check_admissible(&rotation_data(1.3, eps), 1e-9);
            assert!(adm.is_lie && adm.is_nilpotent && adm.is_einstein, "{adm:?}");
        }
        let rot = ExtensionData::new(
            m2([[0.0, -1.0], [1.0, 0.0]]),
            Matrix::zeros(2, 2),
            0.0,
            Vector::zeros(2),
        )
        .unwrap();
        let adm = check_admissible(&rot, 1e-9);
        assert!(adm.is_lie && !adm.is_einstein);
        assert_eq!(adm.trace_residual, 2.0);
        let bad = ExtensionData::new(
            m2([[0.0, -1.0], [1.0, 0.0]]),
            m2([[1.0, 0.0], [0.0, 0.0]]),
            0.0,
            Vector::zeros(2),
        )
        .unwrap();
        assert!(!check_admissible(&bad, 1e-9).is_lie);
        assert!(matches!(extend(&bad), Err(Error::NotLie { .. })));
    }

    #[test]
    fn extension_of_zero_data() {
        let m = extend(&ExtensionData::zero(1)).unwrap();
        assert!(m.algebra().is_abelian());
        let want = Matrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.gram().matrix(), &want);
        assert_eq!(ricci_ebar(&ExtensionData::zero(1)).unwrap(), 0.0);
    }

    #[test]
    fn extension_brackets_follow_the_model() {
        let d = ExtensionData::new(
            m2([[0.0, -0.7], [0.7, 0.0]]),
            m2([[0.2, 0.5], [-0.3, 0.1]]),
            0.4,
            Vector::from_column_slice(&[1.5, -2.0]),
        )
        .unwrap();
        let a = model_algebra(&d);
        let e = |i| crate::pseudolin::basis_vector(4, i);
        // [ē, e] = μ e
        assert!((a.bracket(&e(3), &e(0)) - e(0) * 0.4).amax() < 1e-15);
        // [ē, f₁] = D f₁ + b₁ e
        let want = e(1) * 0.2 + e(2) * -0.3 + e(0) * 1.5;
        assert!((a.bracket(&e(3), &e(1)) - want).amax() < 1e-15);
        // [f₁, f₂] = ⟨K f₁, f₂⟩ e
        assert!((a.bracket(&e(1), &e(2)) - e(0) * 0.7).amax() < 1e-15);
    }

    #[test]
    fn rotation_data_is_ricci_flat() {
        for eps in [1.0, -1.0] {
            let d = rotation_data(1.0, eps);
            let m = extend(&d).unwrap();
            assert!(einstein_classify(&m, 1e-8).verdict.is_ricci_flat());
            assert!(ricci_ebar(&d).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn ricci_ebar_on_non_einstein_data() {
        let d = ExtensionData::new(
            m2([[0.0, -1.0], [1.0, 0.0]]),
            Matrix::zeros(2, 2),
            0.0,
            Vector::zeros(2),
        )
        .unwrap();
        assert_eq!(ricci_ebar(&d).unwrap(), 0.5);
        let m = extend(&d).unwrap();
        let ric = ricci_via_definition(&m);
        assert!((ric[(3, 3)] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ricci_ebar_matches_definition_with_mu() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for v in 2..5 {
            let d = random_lie_data(&mut rng, v, 0.8).unwrap();
            assert!(check_admissible(&d, 1e-9).is_lie);
            let m = extend(&d).unwrap();
            let ric = ricci_via_definition(&m);
            let got = ric[(v + 1, v + 1)];
            assert!((got - ricci_ebar(&d).unwrap()).abs() < 1e-9 * m.scale(), "v={v}");
        }
    }

    #[test]
    fn kd_examples() {
        let k0 = m2([[0.0, -1.0], [1.0, 0.0]]);
        let s = m2([[0.0, 0.0], [0.0, 2.0]]);
        let (k, d) = kd_generate(1, 2, &Matrix::zeros(1, 1), &Matrix::zeros(1, 2), &k0, &s).unwrap();
        assert!((&k * &d + d.transpose() * &k).amax() < 1e-15);
        assert_eq!(d[(1, 2)], 2.0);
        assert!(matches!(
            kd_generate(
                0,
                2,
                &Matrix::zeros(0, 0),
                &Matrix::zeros(0, 2),
                &Matrix::zeros(2, 2),
                &s
            ),
            Err(Error::SingularK0)
        ));
        let (k, d) = kd_generate(
            2,
            0,
            &m2([[1.0, 2.0], [3.0, 4.0]]),
            &Matrix::zeros(2, 0),
            &Matrix::zeros(0, 0),
            &Matrix::zeros(0, 0),
        )
        .unwrap();
        assert_eq!(k.amax(), 0.0);
        assert_eq!(d, m2([[1.0, 2.0], [3.0, 4.0]]));
    }

    #[test]
    fn random_nilpotent_data_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for v in [2, 3, 4, 5] {
            let d = random_nilpotent_data(&mut rng, v).unwrap();
            let adm = check_admissible(&d, 1e-9);
            assert!(adm.is_lie && adm.is_nilpotent && adm.is_einstein, "{adm:?}");
            let m = extend(&d).unwrap();
            assert_eq!(einstein_classify(&m, 1e-8).verdict, Verdict::RicciFlat);
            let dec = decompose(&m, 1e-8).unwrap().expect("center is degenerate");
            assert!(dec.model_residual < 1e-9 * m.scale(), "residual {}", dec.model_residual);
        }
    }

    #[test]
    fn decompose_preconditions() {
        let h = LieAlgebra::from_brackets(3, [(0, 1, vec![(2, 1.0)])]).unwrap();
        let m = MetricLieAlgebra::new(h, Gram::identity(3)).unwrap();
        assert!(matches!(decompose(&m, 1e-8), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn two_step_examples() {
        let zero = guediri_2step(1, 2, &Vector::zeros(2), &Matrix::zeros(2, 1), &Matrix::zeros(2, 2), 1).unwrap();
        assert!(zero.algebra().is_abelian());
        let a = m2([[0.0, 1.0], [-1.0, 0.0]]);
        let c = Matrix::from_column_slice(2, 1, &[0.5f64.sqrt(), 0.5f64.sqrt()]);
        let m = guediri_2step(1, 2, &Vector::from_column_slice(&[0.3, -0.2]), &c, &a, 2).unwrap();
        assert!(einstein_classify(&m, 1e-8).verdict.is_ricci_flat());
        let z = liealg::center(m.algebra(), 1e-9);
        assert_eq!(
            classify_subspace(m.gram(), &z, 1e-9).unwrap().tag,
            SubspaceTag::Degenerate
        );
        assert!(matches!(
            guediri_2step(1, 2, &Vector::zeros(2), &Matrix::zeros(2, 1), &a, 0),
            Err(Error::ConstraintViolation { .. })
        ));
    }
}
