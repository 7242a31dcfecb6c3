//! Levi-Civita product, curvature and Ricci curvature of a pseudo-Euclidean Lie algebra.
//!
//! Three independent routes to the Ricci curvature are provided:
//!
//! - [`ricci_via_definition`]: traces of right multiplications of the
//!   Levi-Civita product.
//! - [`ricci_general`]: adjoint operators, `J` and the mean curvature vector `H`.
//! - [`ricci_nilpotent`]: `-½𝒥₁ + ¼𝒥₂` from the structure endomorphisms,
//!   valid for nilpotent algebras.
//!
//! Bilinear forms (`ric`) and operators (`Ric = g⁻¹ ric`) are kept apart in the
//! names: functions returning the form say so.

use crate::error::{Error, Result};
use crate::liealg::{self, LieAlgebra};
use crate::pseudolin::{basis_vector, orthonormal_frame, Gram, Matrix, Vector};
use crate::tol;

/// The skew endomorphisms `S_i` with `[u, v] = Σ ⟨S_i u, v⟩ e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureEndos {
    pub s: Vec<Matrix>,
}

impl StructureEndos {
    /// `max_i ‖g S_i + S_iᵀ g‖∞`.
    pub fn skewness_defect(&self, gram: &Gram) -> f64 {
        let g = gram.matrix();
        self.s
            .iter()
            .map(|s| (g * s + s.transpose() * g).amax())
            .fold(0.0, f64::max)
    }

    /// Sup-norm gap between `Σ ⟨S_i e_a, e_b⟩ e_i` and `[e_a, e_b]`.
    pub fn reconstruction_defect(&self, algebra: &LieAlgebra, gram: &Gram) -> f64 {
        let n = algebra.dim();
        let g = gram.matrix();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let want = algebra.bracket_basis(a, b);
                for (i, s) in self.s.iter().enumerate() {
                    // ⟨S_i e_a, e_b⟩ = (g S_i)[b][a]
                    let got = (g.row(b) * s.column(a))[(0, 0)];
                    worst = worst.max((got - want[i]).abs());
                }
            }
        }
        worst
    }
}

/// A Lie algebra with a nondegenerate symmetric inner product.
///
/// The gram inverse, structure endomorphisms and the Levi-Civita left
/// multiplications of basis vectors are computed at construction.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra {
    algebra: LieAlgebra,
    gram: Gram,
    gram_inv: Matrix,
    endos: StructureEndos,
    /// `left[i]` is the matrix of `v ↦ e_i · v`.
    left: Vec<Matrix>,
}

impl MetricLieAlgebra {
    pub fn new(algebra: LieAlgebra, gram: Gram) -> Result<Self> {
        let n = algebra.dim();
        if gram.dim() != n {
            return Err(Error::InvalidInput(format!(
                "algebra has dimension {n} but gram has dimension {}",
                gram.dim()
            )));
        }
        if !gram.is_nondegenerate(tol::LINALG) {
            return Err(Error::DegenerateGram);
        }
        let gram_inv = gram.matrix().clone().try_inverse().ok_or(Error::DegenerateGram)?;
        let g = gram.matrix();

        // S_i = -g⁻¹ C_i with (C_i)_{ab} = c_ab^i.
        let endos = StructureEndos {
            s: (0..n)
                .map(|i| {
                    let c = Matrix::from_fn(n, n, |a, b| algebra.structure_constant(a, b, i));
                    -(&gram_inv * c)
                })
                .collect(),
        };

        // Koszul: 2⟨e_i·e_j, x⟩ = ⟨[e_i,e_j],x⟩ + ⟨[x,e_i],e_j⟩ + ⟨[x,e_j],e_i⟩.
        let g_brackets: Vec<Vec<Vector>> = (0..n)
            .map(|i| (0..n).map(|j| g * algebra.bracket_basis(i, j)).collect())
            .collect();
        let left = (0..n)
            .map(|i| {
                let mut l = Matrix::zeros(n, n);
                for j in 0..n {
                    let mut rhs = g_brackets[i][j].clone();
                    for x in 0..n {
                        rhs[x] += g_brackets[x][i][j] + g_brackets[x][j][i];
                    }
                    l.set_column(j, &(&gram_inv * rhs * 0.5));
                }
                l
            })
            .collect();

        Ok(Self {
            algebra,
            gram,
            gram_inv,
            endos,
            left,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn structure_endos(&self) -> &StructureEndos {
        &self.endos
    }

    /// Matrix of `v ↦ e_i · v`.
    pub fn left_basis(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `v ↦ u · v`.
    pub fn left_mult(&self, u: &Vector) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if u[i] != 0.0 {
                m += &self.left[i] * u[i];
            }
        }
        m
    }

    /// Matrix of `u ↦ u · v`.
    pub fn right_mult(&self, v: &Vector) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set_column(i, &(&self.left[i] * v));
        }
        m
    }

    /// Gram adjoint `g⁻¹ Mᵀ g`.
    pub fn adjoint(&self, m: &Matrix) -> Matrix {
        &self.gram_inv * m.transpose() * self.gram.matrix()
    }

    /// Magnitude against which Ricci and curvature residuals are judged:
    /// `max(1, M² · max(1, |g⁻¹|max))` with `M` the largest structure constant
    /// or Levi-Civita coefficient.
    pub fn scale(&self) -> f64 {
        let lmax = self.left.iter().map(|l| l.amax()).fold(0.0, f64::max);
        let m = lmax.max(self.algebra.max_abs());
        (m * m * self.gram_inv.amax().max(1.0)).max(1.0)
    }

    /// The same metric algebra in the basis formed by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        Self::new(self.algebra.change_basis(p)?, self.gram.congruence(p)?)
    }
}

/// The Levi-Civita product `u · v`.
pub fn levi_civita(m: &MetricLieAlgebra, u: &Vector, v: &Vector) -> Vector {
    m.left_mult(u) * v
}

/// `‖g L_u + L_uᵀ g‖∞`; zero up to roundoff for every `u`.
pub fn left_mult_skewness_defect(m: &MetricLieAlgebra, u: &Vector) -> f64 {
    let l = m.left_mult(u);
    let g = m.gram().matrix();
    (g * &l + l.transpose() * g).amax()
}

/// `K(e_i, e_j) = L_{[e_i,e_j]} - [L_{e_i}, L_{e_j}]`, stored as `n²` matrices.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    n: usize,
    blocks: Vec<Matrix>,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Matrix of `w ↦ K(e_i, e_j) w`.
    pub fn operator(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i * self.n + j]
    }

    /// `K(e_i, e_j) e_k`.
    pub fn component(&self, i: usize, j: usize, k: usize) -> Vector {
        self.operator(i, j).column(k).into_owned()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|b| b.amax()).fold(0.0, f64::max)
    }
}

pub fn curvature_tensor(m: &MetricLieAlgebra) -> CurvatureTensor {
    let n = m.dim();
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let lij = m.left_mult(&m.algebra().bracket_basis(i, j));
            let comm = m.left_basis(i) * m.left_basis(j) - m.left_basis(j) * m.left_basis(i);
            blocks.push(lij - comm);
        }
    }
    CurvatureTensor { n, blocks }
}

/// Ricci form `ric(u, v) = -tr(R_u R_v) + tr(R_{u·v})`.
pub fn ricci_via_definition(m: &MetricLieAlgebra) -> Matrix {
    let n = m.dim();
    let right: Vec<Matrix> = (0..n).map(|a| m.right_mult(&basis_vector(n, a))).collect();
    let right_traces: Vec<f64> = right.iter().map(Matrix::trace).collect();
    let mut ric = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let prod = m.left_basis(a).column(b);
            let tr_r_prod: f64 = (0..n).map(|k| prod[k] * right_traces[k]).sum();
            ric[(a, b)] = -(&right[a] * &right[b]).trace() + tr_r_prod;
        }
    }
    ric
}

/// Ricci operator `g⁻¹ ric` from a Ricci form.
pub fn ricci_operator(m: &MetricLieAlgebra, ricci_form: &Matrix) -> Matrix {
    m.gram_inv() * ricci_form
}

pub fn structure_endos(m: &MetricLieAlgebra) -> &StructureEndos {
    m.structure_endos()
}

/// `J_u = Σ ⟨u, e_i⟩ S_i`.
pub fn j_map(m: &MetricLieAlgebra, u: &Vector) -> Matrix {
    let n = m.dim();
    let gu = m.gram().matrix() * u;
    let mut j = Matrix::zeros(n, n);
    for (i, s) in m.structure_endos().s.iter().enumerate() {
        if gu[i] != 0.0 {
            j += s * gu[i];
        }
    }
    j
}

/// `H` with `⟨H, u⟩ = tr(ad_u)`.
pub fn mean_vector(m: &MetricLieAlgebra) -> Vector {
    let n = m.dim();
    let traces = Vector::from_iterator(n, (0..n).map(|i| m.algebra().ad_basis(i).trace()));
    m.gram_inv() * traces
}

/// `(𝒥₁, 𝒥₂)` as operators in the working basis.
pub fn j1_j2(m: &MetricLieAlgebra) -> (Matrix, Matrix) {
    let n = m.dim();
    let g = m.gram().matrix();
    let s = &m.structure_endos().s;
    let mut j1 = Matrix::zeros(n, n);
    let mut t = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sij = &s[i] * &s[j];
            if g[(i, j)] != 0.0 {
                j1 -= &sij * g[(i, j)];
            }
            t[(i, j)] = sij.trace();
        }
    }
    // 𝒥₂ u = -Σ_{ij} (g u)_i tr(S_i S_j) e_j, so 𝒥₂ = -Tᵀ g.
    let j2 = -(t.transpose() * g);
    (j1, j2)
}

/// `Q = -½𝒥₁ + ¼𝒥₂`, defined for every metric algebra.
pub fn q_operator(m: &MetricLieAlgebra) -> Matrix {
    let (j1, j2) = j1_j2(m);
    j1 * -0.5 + j2 * 0.25
}

/// Ricci operator of a nilpotent metric algebra via `-½𝒥₁ + ¼𝒥₂`.
pub fn ricci_nilpotent(m: &MetricLieAlgebra) -> Result<Matrix> {
    if !liealg::is_nilpotent(m.algebra(), tol::LINALG) {
        return Err(Error::NotNilpotent);
    }
    Ok(q_operator(m))
}

/// Ricci form from adjoints, `J` and `H`.
pub fn ricci_general(m: &MetricLieAlgebra) -> Matrix {
    let n = m.dim();
    let g = m.gram().matrix();
    let ads: Vec<Matrix> = (0..n).map(|i| m.algebra().ad_basis(i)).collect();
    let ad_stars: Vec<Matrix> = ads.iter().map(|a| m.adjoint(a)).collect();
    let js: Vec<Matrix> = (0..n).map(|i| j_map(m, &basis_vector(n, i))).collect();
    let h = mean_vector(m);
    let ad_h = m.algebra().ad(&h);
    let g_ad_h = g * &ad_h;
    let mut ric = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            // ⟨ad_H e_a, e_b⟩ = (g ad_H)[b][a]
            ric[(a, b)] = -0.5 * (&ads[a] * &ads[b]).trace()
                - 0.5 * (&ads[a] * &ad_stars[b]).trace()
                - 0.25 * (&js[a] * &js[b]).trace()
                - 0.5 * g_ad_h[(b, a)]
                - 0.5 * g_ad_h[(a, b)];
        }
    }
    ric
}

/// `B(u, v) = tr(ad_u ad_v)`.
pub fn killing_form(m: &MetricLieAlgebra) -> Matrix {
    let n = m.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| m.algebra().ad_basis(i)).collect();
    Matrix::from_fn(n, n, |a, b| (&ads[a] * &ads[b]).trace())
}

/// Both sides of the trace identity `tr(QE) = ¼ Σ ε_i ε_j ⟨E[b_i,b_j] - [Eb_i,b_j] - [b_i,Eb_j], [b_i,b_j]⟩`
/// over an internally built orthonormal frame `b`.
pub fn trace_q_times(m: &MetricLieAlgebra, e: &Matrix) -> (f64, f64) {
    let lhs = (q_operator(m) * e).trace();
    let (frame, eps) = orthonormal_frame(m.gram());
    let n = m.dim();
    let a = m.algebra();
    let b: Vec<Vector> = (0..n).map(|i| frame.column(i).into_owned()).collect();
    let eb: Vec<Vector> = b.iter().map(|v| e * v).collect();
    let mut rhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let bij = a.bracket(&b[i], &b[j]);
            let defect = e * &bij - a.bracket(&eb[i], &b[j]) - a.bracket(&b[i], &eb[j]);
            rhs += eps[i] * eps[j] * m.gram().inner(&defect, &bij);
        }
    }
    (lhs, 0.25 * rhs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Einstein { lambda: f64 },
    RicciFlat,
    Flat,
    NotEinstein,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Einstein { .. } => "Einstein",
            Verdict::RicciFlat => "RicciFlat",
            Verdict::Flat => "Flat",
            Verdict::NotEinstein => "NotEinstein",
        }
    }

    /// Ricci-flat or flat.
    pub fn is_ricci_flat(&self) -> bool {
        matches!(self, Verdict::RicciFlat | Verdict::Flat)
    }

    pub fn is_einstein(&self) -> bool {
        !matches!(self, Verdict::NotEinstein)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Einstein { lambda } => write!(f, "Einstein(lambda={lambda})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciRoute {
    Nilpotent,
    Definition,
}

#[derive(Clone, Debug)]
pub struct CurvatureReport {
    /// Ricci operator in the working basis.
    pub ricci: Matrix,
    /// Ricci form.
    pub ricci_form: Matrix,
    pub scalar: f64,
    pub einstein_lambda: Option<f64>,
    pub verdict: Verdict,
    pub flat: bool,
    pub route: RicciRoute,
    /// `‖Ric - λ̂ Id‖∞`.
    pub einstein_residual: f64,
    /// Sup-norm gap between the chosen route and the definitional route.
    pub cross_check: f64,
    pub curvature_max: f64,
    pub scale: f64,
}

/// Einstein, Ricci-flat and flatness verdicts at relative tolerance `tol`.
pub fn einstein_classify(m: &MetricLieAlgebra, tol: f64) -> CurvatureReport {
    let n = m.dim();
    let ricci_form_def = ricci_via_definition(m);
    let ricci_def = ricci_operator(m, &ricci_form_def);
    let (ricci, route) = match ricci_nilpotent(m) {
        Ok(r) => (r, RicciRoute::Nilpotent),
        Err(_) => (ricci_def.clone(), RicciRoute::Definition),
    };
    let ricci_form = m.gram().matrix() * &ricci;
    let cross_check = (&ricci - &ricci_def).amax();
    let scalar = ricci.trace();
    let lambda = scalar / n.max(1) as f64;
    let einstein_residual = (&ricci - Matrix::identity(n, n) * lambda).amax();
    let curvature_max = curvature_tensor(m).max_abs();
    let scale = m.scale();
    let thr = tol * scale;
    let flat = curvature_max <= thr;

    let verdict = if einstein_residual > thr {
        Verdict::NotEinstein
    } else if lambda.abs() > thr {
        Verdict::Einstein { lambda }
    } else if flat {
        Verdict::Flat
    } else {
        Verdict::RicciFlat
    };
    let einstein_lambda = verdict.is_einstein().then_some(lambda);

    CurvatureReport {
        ricci,
        ricci_form,
        scalar,
        einstein_lambda,
        verdict,
        flat,
        route,
        einstein_residual,
        cross_check,
        curvature_max,
        scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vector {
        basis_vector(n, i)
    }

    fn heisenberg_euclidean() -> MetricLieAlgebra {
        let a = LieAlgebra::from_brackets(3, [(0, 1, vec![(2, 1.0)])]).unwrap();
        MetricLieAlgebra::new(a, Gram::identity(3)).unwrap()
    }

    fn abelian(n: usize) -> MetricLieAlgebra {
        MetricLieAlgebra::new(LieAlgebra::abelian(n), Gram::identity(n)).unwrap()
    }

    #[test]
    fn construction_errors() {
        let a = LieAlgebra::abelian(3);
        assert!(matches!(
            MetricLieAlgebra::new(a.clone(), Gram::identity(2)),
            Err(Error::InvalidInput(_))
        ));
        let g = Gram::diagonal(&[1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(MetricLieAlgebra::new(a, g), Err(Error::DegenerateGram)));
    }

    #[test]
    fn levi_civita_examples() {
        let ab = abelian(3);
        assert_eq!(levi_civita(&ab, &e(3, 0), &e(3, 1)).amax(), 0.0);
        let h = heisenberg_euclidean();
        let p = levi_civita(&h, &e(3, 0), &e(3, 1));
        assert!((p - e(3, 2) * 0.5).amax() < 1e-15);
        assert!(levi_civita(&h, &e(3, 2), &e(3, 2)).amax() < 1e-15);
    }

    #[test]
    fn left_multiplication_is_skew() {
        assert_eq!(left_mult_skewness_defect(&abelian(2), &e(2, 0)), 0.0);
        assert!(left_mult_skewness_defect(&heisenberg_euclidean(), &e(3, 0)) < 1e-15);
    }

    #[test]
    fn heisenberg_ricci_routes() {
        let h = heisenberg_euclidean();
        let want = Matrix::from_diagonal(&Vector::from_column_slice(&[-0.5, -0.5, 0.5]));
        assert!((ricci_via_definition(&h) - &want).amax() < 1e-14);
        assert!((ricci_general(&h) - &want).amax() < 1e-14);
        assert!((ricci_nilpotent(&h).unwrap() - &want).amax() < 1e-14);
    }

    #[test]
    fn heisenberg_structure_endos() {
        let h = heisenberg_euclidean();
        let s = &h.structure_endos().s;
        assert_eq!(s[0].amax(), 0.0);
        assert_eq!(s[1].amax(), 0.0);
        let mut s3 = Matrix::zeros(3, 3);
        s3[(1, 0)] = 1.0;
        s3[(0, 1)] = -1.0;
        assert!((&s[2] - &s3).amax() < 1e-15);
        assert!(h.structure_endos().reconstruction_defect(h.algebra(), h.gram()) < 1e-15);
        assert!((j_map(&h, &e(3, 2)) - &s3).amax() < 1e-15);
        // 𝒥₁ = -S₃², 𝒥₂ = 2 ⟨·, e₃⟩ e₃.
        let (j1, j2) = j1_j2(&h);
        assert!((j1 + &s3 * &s3).amax() < 1e-15);
        let mut j2_want = Matrix::zeros(3, 3);
        j2_want[(2, 2)] = 2.0;
        assert!((j2 - j2_want).amax() < 1e-15);
    }

    #[test]
    fn mean_vector_examples() {
        assert_eq!(mean_vector(&heisenberg_euclidean()).amax(), 0.0);
        let solvable = LieAlgebra::from_brackets(2, [(0, 1, vec![(1, 1.0)])]).unwrap();
        let m = MetricLieAlgebra::new(solvable, Gram::identity(2)).unwrap();
        assert!((mean_vector(&m) - e(2, 0)).amax() < 1e-15);
        assert!(matches!(ricci_nilpotent(&m), Err(Error::NotNilpotent)));
        assert!((ricci_via_definition(&m) - ricci_general(&m)).amax() < 1e-14);
    }

    #[test]
    fn trace_identity_on_heisenberg() {
        let h = heisenberg_euclidean();
        let (l, r) = trace_q_times(&h, &Matrix::identity(3, 3));
        assert!((l + 0.5).abs() < 1e-14 && (r + 0.5).abs() < 1e-14);
        assert_eq!(trace_q_times(&h, &Matrix::zeros(3, 3)), (0.0, 0.0));
        let d = Matrix::from_diagonal(&Vector::from_column_slice(&[1.0, 0.0, 1.0]));
        let (l, r) = trace_q_times(&h, &d);
        assert!(l.abs() < 1e-14 && r.abs() < 1e-14);
    }

    #[test]
    fn verdicts() {
        let r = einstein_classify(&abelian(3), 1e-8);
        assert_eq!(r.verdict, Verdict::Flat);
        assert_eq!(r.einstein_lambda, Some(0.0));
        let r = einstein_classify(&heisenberg_euclidean(), 1e-8);
        assert_eq!(r.verdict, Verdict::NotEinstein);
        assert_eq!(r.einstein_lambda, None);
        assert!(!r.flat);
    }

    #[test]
    fn killing_form_of_nilpotent_vanishes() {
        assert_eq!(killing_form(&heisenberg_euclidean()).amax(), 0.0);
    }

    #[test]
    fn j_matches_adjoint_characterization() {
        let a = LieAlgebra::from_brackets(4, [(0, 1, vec![(2, 1.0)]), (0, 2, vec![(3, 1.0)])]).unwrap();
        let g = Gram::from_rows(&[
            vec![1.0, 0.3, 0.0, 0.0],
            vec![0.3, 0.5, 0.2, 1.0],
            vec![0.0, 0.2, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        let m = MetricLieAlgebra::new(a, g).unwrap();
        let u = Vector::from_column_slice(&[0.3, -1.0, 0.7, 2.0]);
        let ju = j_map(&m, &u);
        for k in 0..4 {
            let ad_star = m.adjoint(&m.algebra().ad_basis(k));
            assert!((ju.column(k) - ad_star * &u).amax() < 1e-12);
        }
    }
}
