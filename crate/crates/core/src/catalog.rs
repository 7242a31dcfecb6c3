//! Nilpotent Lie algebras of dimension at most five, their Ricci-flat
//! Lorentzian metrics, and three explicit examples in dimensions 6, 7 and 8.
//!
//! Bilinear forms are written in the basis `e₁, …, e_n`. A term
//! `c e*_i ⊙ e*_j` with `i ≠ j` sets `⟨e_i, e_j⟩ = ⟨e_j, e_i⟩ = c`; a term
//! `c e*_i ⊗ e*_i` sets `⟨e_i, e_i⟩ = c`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::curvature::MetricLieAlgebra;
use crate::error::{Error, Result};
use crate::liealg::{Derivation, LieAlgebra};
use crate::pseudolin::{Gram, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogName {
    L3_2,
    L4_2,
    L4_3,
    L5_2,
    L5_3,
    L5_4,
    L5_5,
    L5_6,
    L5_7,
    L5_8,
    L5_9,
    EX6,
    EX7,
    EX8,
}

impl CatalogName {
    pub const ALL: [CatalogName; 14] = [
        CatalogName::L3_2,
        CatalogName::L4_2,
        CatalogName::L4_3,
        CatalogName::L5_2,
        CatalogName::L5_3,
        CatalogName::L5_4,
        CatalogName::L5_5,
        CatalogName::L5_6,
        CatalogName::L5_7,
        CatalogName::L5_8,
        CatalogName::L5_9,
        CatalogName::EX6,
        CatalogName::EX7,
        CatalogName::EX8,
    ];

    /// The eleven algebras of dimension at most five.
    pub const SMALL: [CatalogName; 11] = [
        CatalogName::L3_2,
        CatalogName::L4_2,
        CatalogName::L4_3,
        CatalogName::L5_2,
        CatalogName::L5_3,
        CatalogName::L5_4,
        CatalogName::L5_5,
        CatalogName::L5_6,
        CatalogName::L5_7,
        CatalogName::L5_8,
        CatalogName::L5_9,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::L3_2 => "L3_2",
            CatalogName::L4_2 => "L4_2",
            CatalogName::L4_3 => "L4_3",
            CatalogName::L5_2 => "L5_2",
            CatalogName::L5_3 => "L5_3",
            CatalogName::L5_4 => "L5_4",
            CatalogName::L5_5 => "L5_5",
            CatalogName::L5_6 => "L5_6",
            CatalogName::L5_7 => "L5_7",
            CatalogName::L5_8 => "L5_8",
            CatalogName::L5_9 => "L5_9",
            CatalogName::EX6 => "EX6",
            CatalogName::EX7 => "EX7",
            CatalogName::EX8 => "EX8",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CatalogName::L3_2 => 3,
            CatalogName::L4_2 | CatalogName::L4_3 => 4,
            CatalogName::EX6 => 6,
            CatalogName::EX7 => 7,
            CatalogName::EX8 => 8,
            _ => 5,
        }
    }

    pub fn is_example(&self) -> bool {
        matches!(self, CatalogName::EX6 | CatalogName::EX7 | CatalogName::EX8)
    }

    /// Metric variants defined on this algebra.
    pub fn variants(&self) -> Vec<MetricVariant> {
        MetricVariant::ALL
            .into_iter()
            .filter(|v| v.algebra() == *self)
            .collect()
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricVariant {
    M32,
    M42,
    M43,
    M52,
    M53,
    M551,
    M552,
    M56,
    M58,
    M59,
}

impl MetricVariant {
    pub const ALL: [MetricVariant; 10] = [
        MetricVariant::M32,
        MetricVariant::M42,
        MetricVariant::M43,
        MetricVariant::M52,
        MetricVariant::M53,
        MetricVariant::M551,
        MetricVariant::M552,
        MetricVariant::M56,
        MetricVariant::M58,
        MetricVariant::M59,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricVariant::M32 => "m32",
            MetricVariant::M42 => "m42",
            MetricVariant::M43 => "m43",
            MetricVariant::M52 => "m52",
            MetricVariant::M53 => "m53",
            MetricVariant::M551 => "m551",
            MetricVariant::M552 => "m552",
            MetricVariant::M56 => "m56",
            MetricVariant::M58 => "m58",
            MetricVariant::M59 => "m59",
        }
    }

    pub fn algebra(&self) -> CatalogName {
        match self {
            MetricVariant::M32 => CatalogName::L3_2,
            MetricVariant::M42 => CatalogName::L4_2,
            MetricVariant::M43 => CatalogName::L4_3,
            MetricVariant::M52 => CatalogName::L5_2,
            MetricVariant::M53 => CatalogName::L5_3,
            MetricVariant::M551 | MetricVariant::M552 => CatalogName::L5_5,
            MetricVariant::M56 => CatalogName::L5_6,
            MetricVariant::M58 => CatalogName::L5_8,
            MetricVariant::M59 => CatalogName::L5_9,
        }
    }

    /// Parameter names accepted by this variant.
    pub fn params(&self) -> &'static [&'static str] {
        match self {
            MetricVariant::M32 => &["alpha"],
            MetricVariant::M42 => &["alpha", "a"],
            MetricVariant::M43 => &["a", "b", "eps"],
            MetricVariant::M52 => &["alpha", "a", "b"],
            MetricVariant::M53 => &["a", "b", "x", "eps"],
            MetricVariant::M551 => &["a", "b", "x", "y", "rho"],
            MetricVariant::M552 => &["a", "b", "x", "rho", "eps"],
            MetricVariant::M56 => &["a", "b", "x", "y", "mu", "eps"],
            MetricVariant::M58 => &["a", "b", "x", "y"],
            MetricVariant::M59 => &["a", "b", "x", "y", "eps"],
        }
    }

    /// Human-readable parameter constraints.
    pub fn constraints(&self) -> &'static str {
        match self {
            MetricVariant::M32 => "alpha > 0",
            MetricVariant::M42 => "alpha != 0, |a| < 1",
            MetricVariant::M43 => "eps = +-1",
            MetricVariant::M52 => "alpha != 0, |a| < 1, |b| < 1",
            MetricVariant::M53 => "eps = +-1",
            MetricVariant::M551 => "x != 0, rho != 0",
            MetricVariant::M552 => "rho != 0, eps = +-1",
            MetricVariant::M56 => "mu != 0, x != 0, eps = +-1",
            MetricVariant::M58 => "x != 0",
            MetricVariant::M59 => "x != 0, eps = +-1",
        }
    }

    /// Metrics the classification marks as flat for every parameter value.
    pub fn always_flat(&self) -> bool {
        matches!(self, MetricVariant::M32 | MetricVariant::M42 | MetricVariant::M52)
    }

    pub fn has_eps(&self) -> bool {
        self.params().contains(&"eps")
    }
}

impl fmt::Display for MetricVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricVariant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub type Params = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogKey {
    pub name: CatalogName,
    pub metric_variant: Option<MetricVariant>,
    pub params: Params,
}

impl CatalogKey {
    pub fn example(name: CatalogName) -> Self {
        Self {
            name,
            metric_variant: None,
            params: Params::new(),
        }
    }

    pub fn variant(variant: MetricVariant, params: &[(&str, f64)]) -> Self {
        Self {
            name: variant.algebra(),
            metric_variant: Some(variant),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(v) = self.metric_variant {
            write!(f, "/{v}")?;
        }
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

type Bracket = (usize, usize, Vec<(usize, f64)>);

/// 1-based bracket table.
fn table(name: CatalogName) -> Vec<Bracket> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s52 = 2.5f64.sqrt();
    let s72 = 3.5f64.sqrt();
    let s21 = 21f64.sqrt();
    let one = |i, j, k| (i, j, vec![(k, 1.0)]);
    match name {
        CatalogName::L3_2 | CatalogName::L4_2 | CatalogName::L5_2 => vec![one(1, 2, 3)],
        CatalogName::L4_3 | CatalogName::L5_3 => vec![one(1, 2, 3), one(1, 3, 4)],
        CatalogName::L5_4 => vec![one(1, 2, 5), one(3, 4, 5)],
        CatalogName::L5_5 => vec![one(1, 2, 3), one(1, 3, 5), one(2, 4, 5)],
        CatalogName::L5_6 => vec![one(1, 2, 3), one(1, 3, 4), one(1, 4, 5), one(2, 3, 5)],
        CatalogName::L5_7 => vec![one(1, 2, 3), one(1, 3, 4), one(1, 4, 5)],
        CatalogName::L5_8 => vec![one(1, 2, 4), one(1, 3, 5)],
        CatalogName::L5_9 => vec![one(1, 2, 3), one(1, 3, 4), one(2, 3, 5)],
        CatalogName::EX6 => vec![
            one(1, 3, 6),
            one(1, 5, 6),
            (2, 3, vec![(6, -1.0)]),
            one(2, 4, 6),
            one(3, 4, 1),
            one(3, 5, 2),
            (4, 5, vec![(1, 1.0), (2, 1.0)]),
        ],
        CatalogName::EX7 => vec![
            (1, 3, vec![(7, s2)]),
            (2, 4, vec![(7, s2)]),
            (4, 5, vec![(1, -1.0)]),
            (4, 6, vec![(1, -1.0)]),
            (3, 5, vec![(2, -1.0)]),
            (3, 6, vec![(2, -1.0)]),
        ],
        CatalogName::EX8 => vec![
            (1, 2, vec![(3, -4.0 * s3)]),
            (1, 3, vec![(4, s52)]),
            (1, 4, vec![(8, -2.0 * s3)]),
            (1, 5, vec![(6, 3.0 * s72)]),
            (1, 6, vec![(7, -4.0 * s2)]),
            (2, 3, vec![(5, -s52)]),
            (2, 4, vec![(6, -3.0 * s72)]),
            (2, 5, vec![(7, -2.0 * s3)]),
            (2, 6, vec![(8, -4.0 * s2)]),
            (3, 4, vec![(7, -s21)]),
            (3, 5, vec![(8, -s21)]),
        ],
    }
}

pub fn make_algebra(name: CatalogName) -> LieAlgebra {
    let brackets = table(name).into_iter().map(|(i, j, coeffs)| {
        (
            i - 1,
            j - 1,
            coeffs.into_iter().map(|(k, c)| (k - 1, c)).collect::<Vec<_>>(),
        )
    });
    LieAlgebra::from_brackets(name.dim(), brackets).expect("catalog brackets are in range")
}

/// Parses the name first, so unknown names surface as [`Error::UnknownName`].
pub fn make_algebra_by_name(name: &str) -> Result<LieAlgebra> {
    Ok(make_algebra(name.parse()?))
}

struct Form {
    m: Matrix,
}

impl Form {
    fn new(n: usize) -> Self {
        Self { m: Matrix::zeros(n, n) }
    }

    /// `c e*_i ⊗ e*_i` for `i == j`, `c e*_i ⊙ e*_j` otherwise (1-based).
    fn add(&mut self, i: usize, j: usize, c: f64) -> &mut Self {
        self.m[(i - 1, j - 1)] += c;
        if i != j {
            self.m[(j - 1, i - 1)] += c;
        }
        self
    }
}

fn resolved_params(variant: MetricVariant, given: &Params) -> Result<Params> {
    let allowed = variant.params();
    for k in given.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::BadParams(format!(
                "{variant} does not take parameter `{k}` (accepts: {})",
                allowed.join(", ")
            )));
        }
    }
    let mut out = Params::new();
    for &k in allowed {
        let v = given.get(k).copied().unwrap_or_else(|| default_param(k));
        if !v.is_finite() {
            return Err(Error::BadParams(format!("{k} must be finite")));
        }
        out.insert(k.to_string(), v);
    }
    Ok(out)
}

/// Value used for a parameter that is not given.
pub fn default_param(name: &str) -> f64 {
    match name {
        "x" | "alpha" | "eps" | "rho" | "mu" => 1.0,
        _ => 0.0,
    }
}

fn check_constraints(variant: MetricVariant, p: &Params) -> Result<()> {
    let get = |k: &str| p.get(k).copied().unwrap_or(0.0);
    let bad = |msg: &str| {
        Err(Error::BadParams(format!(
            "{variant}: {msg} ({})",
            variant.constraints()
        )))
    };
    if variant.has_eps() && get("eps") != 1.0 && get("eps") != -1.0 {
        return bad("eps must be +1 or -1");
    }
    match variant {
        MetricVariant::M32 if get("alpha") <= 0.0 => return bad("alpha must be positive"),
        MetricVariant::M42 | MetricVariant::M52 if get("alpha") == 0.0 => return bad("alpha must be nonzero"),
        _ => {}
    }
    if matches!(variant, MetricVariant::M42 | MetricVariant::M52) && get("a").abs() >= 1.0 {
        return bad("|a| must be below 1");
    }
    if variant == MetricVariant::M52 && get("b").abs() >= 1.0 {
        return bad("|b| must be below 1");
    }
    if matches!(
        variant,
        MetricVariant::M551 | MetricVariant::M56 | MetricVariant::M58 | MetricVariant::M59
    ) && get("x") == 0.0
    {
        return bad("x must be nonzero");
    }
    if matches!(variant, MetricVariant::M551 | MetricVariant::M552) && get("rho") == 0.0 {
        return bad("rho must be nonzero");
    }
    if variant == MetricVariant::M56 && get("mu") == 0.0 {
        return bad("mu must be nonzero");
    }
    Ok(())
}

/// Gram matrix of a metric variant. Parameters must already be resolved.
fn variant_gram(variant: MetricVariant, p: &Params) -> Matrix {
    let g = |k: &str| p[k];
    let n = variant.algebra().dim();
    let mut f = Form::new(n);
    match variant {
        MetricVariant::M32 => {
            f.add(1, 3, g("alpha")).add(2, 2, 1.0);
        }
        MetricVariant::M42 => {
            f.add(1, 3, g("alpha")).add(2, 2, 1.0).add(4, 4, 1.0).add(2, 4, g("a"));
        }
        MetricVariant::M43 => {
            let (a, b) = (g("a"), g("b"));
            f.add(1, 1, 1.0)
                .add(1, 2, a)
                .add(2, 2, a * a + b * b)
                .add(2, 3, b)
                .add(2, 4, g("eps"))
                .add(3, 3, 1.0);
        }
        MetricVariant::M52 => {
            let (a, b) = (g("a"), g("b"));
            f.add(1, 3, g("alpha"))
                .add(2, 2, 1.0)
                .add(4, 4, 1.0)
                .add(5, 5, 1.0)
                .add(2, 4, a)
                .add(2, 5, b)
                .add(4, 5, a * b);
        }
        MetricVariant::M58 => {
            let (a, b, x, y) = (g("a"), g("b"), g("x"), g("y"));
            let r = y / x;
            f.add(1, 1, 1.0)
                .add(1, 2, a)
                .add(1, 3, -r)
                .add(2, 3, b - a * r)
                .add(2, 2, a * a + b * b)
                .add(2, 5, x.hypot(y))
                .add(3, 3, 1.0 + r * r)
                .add(4, 4, x * x);
        }
        MetricVariant::M59 => {
            let (a, b, x, y) = (g("a"), g("b"), g("x"), g("y"));
            let r = y / x;
            f.add(1, 1, a * a + b * b)
                .add(1, 2, b - a * r)
                .add(1, 3, a)
                .add(1, 5, g("eps") * (x * x + y * y + 1.0).sqrt())
                .add(2, 2, 1.0 + r * r)
                .add(2, 3, -r)
                .add(3, 3, 1.0)
                .add(4, 4, x * x);
        }
        MetricVariant::M53 => {
            let (a, b, x) = (g("a"), g("b"), g("x"));
            f.add(1, 1, 1.0)
                .add(1, 2, a)
                .add(2, 2, a * a + b * b)
                .add(2, 3, b)
                .add(2, 4, g("eps") * (x * x + 1.0).sqrt())
                .add(3, 3, 1.0 + x * x)
                .add(3, 5, -x)
                .add(5, 5, 1.0);
        }
        MetricVariant::M551 => {
            let (a, b, x, y, rho) = (g("a"), g("b"), g("x"), g("y"), g("rho"));
            let r = y / x;
            f.add(1, 1, a * a + b * b)
                .add(1, 2, a / rho)
                .add(1, 4, rho * (b - a * r))
                .add(1, 5, x.hypot(y))
                .add(2, 2, rho.powi(-2))
                .add(2, 4, -r)
                .add(3, 3, x * x / (rho * rho))
                .add(4, 4, rho * rho * (1.0 + r * r));
        }
        MetricVariant::M552 => {
            let (a, b, x, rho) = (g("a"), g("b"), g("x"), g("rho"));
            f.add(1, 1, 1.0)
                .add(1, 2, b)
                .add(2, 2, a * a + b * b)
                .add(2, 3, a)
                .add(2, 5, g("eps") * (x * x + 1.0).sqrt())
                .add(3, 3, 1.0 + x * x)
                .add(3, 4, x * rho)
                .add(4, 4, rho * rho);
        }
        MetricVariant::M56 => {
            let (a, b, x, y, mu) = (g("a"), g("b"), g("x"), g("y"), g("mu"));
            let r = y / x;
            f.add(1, 1, a * a + b * b)
                .add(1, 2, b + a * r)
                .add(1, 3, mu * a)
                .add(1, 5, g("eps") * mu * mu * (x * x + y * y + 1.0).sqrt())
                .add(2, 2, 1.0 + r * r)
                .add(2, 3, mu * r)
                .add(3, 3, mu * mu)
                .add(4, 4, mu.powi(4) * x * x);
        }
    }
    f.m
}

fn example_gram(name: CatalogName) -> Gram {
    let n = name.dim();
    let neg = if name == CatalogName::EX8 { 5 } else { 0 };
    let mut d = vec![1.0; n];
    d[neg] = -1.0;
    Gram::diagonal(&d).expect("diagonal gram is finite")
}

pub fn make_metric(key: &CatalogKey) -> Result<MetricLieAlgebra> {
    let algebra = make_algebra(key.name);
    let gram = match key.metric_variant {
        None if key.name.is_example() => {
            if !key.params.is_empty() {
                return Err(Error::BadParams(format!("{} takes no parameters", key.name)));
            }
            example_gram(key.name)
        }
        None => {
            let variants: Vec<&str> = key.name.variants().iter().map(MetricVariant::as_str).collect();
            return Err(Error::BadParams(if variants.is_empty() {
                format!("{} carries no Ricci-flat Lorentzian metric in the catalog", key.name)
            } else {
                format!("{} needs a metric variant: {}", key.name, variants.join(", "))
            }));
        }
        Some(v) => {
            if v.algebra() != key.name {
                return Err(Error::BadParams(format!(
                    "variant {v} belongs to {}, not {}",
                    v.algebra(),
                    key.name
                )));
            }
            let p = resolved_params(v, &key.params)?;
            check_constraints(v, &p)?;
            Gram::new(variant_gram(v, &p))?
        }
    };
    MetricLieAlgebra::new(algebra, gram).map_err(|e| match e {
        Error::DegenerateGram => Error::BadParams(format!("{key} gives a degenerate gram")),
        other => other,
    })
}

/// The listed derivation with nonzero trace, as printed.
pub fn table1_derivation(name: CatalogName) -> Result<Derivation> {
    let d: &[f64] = match name {
        CatalogName::L3_2 => &[1.0, 0.0, 1.0],
        CatalogName::L4_2 => &[1.0, 0.0, 1.0, 0.0],
        CatalogName::L4_3 => &[-1.0, 2.0, 1.0, 0.0],
        CatalogName::L5_2 => &[1.0, 0.0, 1.0, 0.0, 0.0],
        CatalogName::L5_3 => &[-1.0, 2.0, 1.0, 0.0, 0.0],
        CatalogName::L5_4 => &[1.0, 0.0, 1.0, 0.0, 1.0],
        CatalogName::L5_5 => &[-1.0, 2.0, 1.0, 0.0, 2.0],
        CatalogName::L5_6 => &[1.0, 2.0, 3.0, 4.0, 5.0],
        CatalogName::L5_7 => &[1.0, -2.0, -1.0, 0.0, 1.0],
        CatalogName::L5_8 => &[1.0, -1.0, 0.0, 0.0, 1.0],
        CatalogName::L5_9 => &[2.0, -1.0, 1.0, 3.0, 0.0],
        other => return Err(Error::UnknownName(format!("{other} has no tabulated derivation"))),
    };
    Ok(Derivation::from_diagonal(d))
}

/// One random parameter set inside the constraints of `variant`, with the
/// given sign for `eps` when the variant has one.
pub fn sample_params<R: Rng + ?Sized>(rng: &mut R, variant: MetricVariant, eps: f64) -> Params {
    let signed = |rng: &mut R| {
        let m: f64 = rng.random_range(0.5..2.0);
        if rng.random_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let mut out = Params::new();
    for &k in variant.params() {
        let v = match k {
            "a" | "b" => rng.random_range(-0.9..0.9),
            "y" => rng.random_range(-2.0..2.0),
            "alpha" if variant == MetricVariant::M32 => rng.random_range(0.5..2.0),
            "eps" => eps,
            _ => signed(rng),
        };
        out.insert(k.to_string(), v);
    }
    out
}

/// `points` random parameter sets per sign of `eps` (one sign when the variant has no `eps`).
pub fn parameter_grid<R: Rng + ?Sized>(rng: &mut R, variant: MetricVariant, points: usize) -> Vec<CatalogKey> {
    let signs: &[f64] = if variant.has_eps() { &[1.0, -1.0] } else { &[1.0] };
    let mut out = Vec::with_capacity(points * signs.len());
    for &eps in signs {
        for _ in 0..points {
            out.push(CatalogKey {
                name: variant.algebra(),
                metric_variant: Some(variant),
                params: sample_params(rng, variant, eps),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{einstein_classify, Verdict};
    use crate::liealg::{derivation_defect, is_nilpotent, jacobi_defect};
    use crate::pseudolin::signature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn names_round_trip() {
        for n in CatalogName::ALL {
            assert_eq!(n.as_str().parse::<CatalogName>().unwrap(), n);
        }
        for v in MetricVariant::ALL {
            assert_eq!(v.as_str().parse::<MetricVariant>().unwrap(), v);
            assert!(v.algebra().variants().contains(&v));
        }
        assert!(matches!("L6_1".parse::<CatalogName>(), Err(Error::UnknownName(_))));
        assert!(matches!(make_algebra_by_name("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn algebras_are_nilpotent_lie_algebras() {
        for n in CatalogName::ALL {
            let a = make_algebra(n);
            assert!(jacobi_defect(&a) < 1e-12, "{n}");
            assert!(is_nilpotent(&a, 1e-9), "{n}");
        }
        let l56 = make_algebra(CatalogName::L5_6);
        assert_eq!(l56.structure_constant(1, 2, 4), 1.0);
        let ex8 = make_algebra(CatalogName::EX8);
        assert_eq!(ex8.structure_constant(0, 1, 2), -4.0 * 3f64.sqrt());
    }

    #[test]
    fn m32_gram() {
        let m = make_metric(&CatalogKey::variant(MetricVariant::M32, &[("alpha", 1.0)])).unwrap();
        let want = Matrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.gram().matrix(), &want);
        assert_eq!(einstein_classify(&m, 1e-8).verdict, Verdict::Flat);
    }

    #[test]
    fn m43_flat_iff_eps_negative() {
        let key = |eps| CatalogKey::variant(MetricVariant::M43, &[("a", 0.0), ("b", 0.0), ("eps", eps)]);
        let flat = einstein_classify(&make_metric(&key(-1.0)).unwrap(), 1e-8);
        assert_eq!(flat.verdict, Verdict::Flat);
        let curved = einstein_classify(&make_metric(&key(1.0)).unwrap(), 1e-8);
        assert_eq!(curved.verdict, Verdict::RicciFlat);
        assert!(curved.curvature_max > 1e-6 * curved.scale);
    }

    #[test]
    fn every_variant_is_ricci_flat_lorentzian() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in MetricVariant::ALL {
            for key in parameter_grid(&mut rng, v, 3) {
                let m = make_metric(&key).unwrap();
                assert!(signature(m.gram(), 1e-9).unwrap().is_lorentzian(), "{key}");
                let r = einstein_classify(&m, 1e-8);
                assert!(r.verdict.is_ricci_flat(), "{key}: {}", r.verdict);
                if v.always_flat() {
                    assert!(r.flat, "{key}");
                }
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let bad = [
            CatalogKey::variant(MetricVariant::M32, &[("alpha", -1.0)]),
            CatalogKey::variant(MetricVariant::M42, &[("a", 1.0)]),
            CatalogKey::variant(MetricVariant::M43, &[("eps", 0.5)]),
            CatalogKey::variant(MetricVariant::M58, &[("x", 0.0)]),
            CatalogKey::variant(MetricVariant::M56, &[("mu", 0.0)]),
            CatalogKey::variant(MetricVariant::M32, &[("beta", 1.0)]),
            CatalogKey {
                name: CatalogName::L5_4,
                metric_variant: Some(MetricVariant::M56),
                params: Params::new(),
            },
            CatalogKey {
                name: CatalogName::L5_4,
                metric_variant: None,
                params: Params::new(),
            },
            CatalogKey {
                name: CatalogName::L5_6,
                metric_variant: None,
                params: Params::new(),
            },
        ];
        for key in bad {
            assert!(matches!(make_metric(&key), Err(Error::BadParams(_))), "{key}");
        }
    }

    #[test]
    fn examples() {
        let ex6 = make_metric(&CatalogKey::example(CatalogName::EX6)).unwrap();
        assert_eq!(ex6.gram().matrix()[(0, 0)], -1.0);
        assert!(einstein_classify(&ex6, 1e-8).verdict.is_ricci_flat());
        let ex8 = make_metric(&CatalogKey::example(CatalogName::EX8)).unwrap();
        assert_eq!(ex8.gram().matrix()[(5, 5)], -1.0);
        let r = einstein_classify(&ex8, 1e-8);
        assert!(matches!(r.verdict, Verdict::Einstein { lambda } if (lambda - 0.5).abs() < 1e-9));
    }

    #[test]
    fn tabulated_derivations() {
        let traces = [
            (CatalogName::L3_2, 2.0),
            (CatalogName::L5_6, 15.0),
            (CatalogName::L5_7, -1.0),
            (CatalogName::L5_9, 5.0),
        ];
        for (n, t) in traces {
            let d = table1_derivation(n).unwrap();
            assert_eq!(d.trace(), t);
            assert_eq!(derivation_defect(&make_algebra(n), &d.matrix), 0.0, "{n}");
        }
        // The printed map for L5_5 fails the Leibniz rule on [e1, e3] = e5.
        let d = table1_derivation(CatalogName::L5_5).unwrap();
        assert_eq!(derivation_defect(&make_algebra(CatalogName::L5_5), &d.matrix), 2.0);
        assert!(matches!(
            table1_derivation(CatalogName::EX6),
            Err(Error::UnknownName(_))
        ));
    }
}
