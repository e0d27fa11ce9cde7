//! Decision procedures for generating operators and spears.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{dedup_points, vertex_enumerate, Halfspace, LinearProgram, LpOutcome, PolytopeH};
use crate::linalg::{bottom_symmetric_eigenvector, rank, Matrix, Vector};
use crate::operator::Operator;
use crate::oracle::{sampled_generating, SampleConfig};
use crate::scalar::{max_scalar, Backend, Scalar};
use crate::space::{vector_to_json, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Refuted => "REFUTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    VertexExact,
    EuclideanExact,
    DualSpear,
    Sampled,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::VertexExact => "VERTEX_EXACT",
            Method::EuclideanExact => "EUCLIDEAN_EXACT",
            Method::DualSpear => "DUAL_SPEAR",
            Method::Sampled => "SAMPLED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness<S> {
    Vector(Vector<S>),
    Halfspace(Halfspace<S>),
    /// A sampled point, always in `f64`.
    Sample(Vector<f64>),
}

impl<S: Scalar> Witness<S> {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Vector(v) => json!({"kind": "vector", "value": vector_to_json(v)}),
            Witness::Halfspace(h) => json!({
                "kind": "halfspace",
                "normal": vector_to_json(&h.normal),
                "offset": h.offset.to_json(),
            }),
            Witness::Sample(v) => json!({"kind": "sample", "value": vector_to_json(v)}),
        }
    }

    /// The witness point, converted to `f64`.
    pub fn point_f64(&self) -> Option<Vector<f64>> {
        match self {
            Witness::Vector(v) => Some(v.to_f64()),
            Witness::Sample(v) => Some(v.clone()),
            Witness::Halfspace(_) => None,
        }
    }
}

/// The settings a certificate was produced under.
#[derive(Clone, Debug, PartialEq)]
pub struct RunInfo {
    pub backend: Backend,
    pub tol: String,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<S> {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness<S>>,
    pub detail: String,
    pub config: RunInfo,
}

impl<S: Scalar> Certificate<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "method": self.method.as_str(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "detail": self.detail,
            "config": {
                "backend": self.config.backend.as_str(),
                "tol": self.config.tol,
                "seed": self.config.seed,
                "samples": self.config.samples,
            },
        })
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

/// Tolerance and sampling settings shared by the checks.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions<S> {
    pub tol: S,
    pub sampling: SampleConfig,
}

impl<S: Scalar> Default for CheckOptions<S> {
    fn default() -> Self {
        CheckOptions {
            tol: S::default_tol(),
            sampling: SampleConfig::default(),
        }
    }
}

impl<S: Scalar> CheckOptions<S> {
    pub fn with_tol(tol: S) -> Self {
        CheckOptions {
            tol,
            ..Self::default()
        }
    }

    pub(crate) fn exact_info(&self) -> RunInfo {
        RunInfo {
            backend: S::BACKEND,
            tol: self.tol.to_string(),
            seed: None,
            samples: None,
        }
    }

    pub(crate) fn sampled_info(&self) -> RunInfo {
        RunInfo {
            seed: Some(self.sampling.seed),
            samples: Some(self.sampling.count),
            ..self.exact_info()
        }
    }

    pub(crate) fn certificate(&self, verdict: Verdict, method: Method, witness: Option<Witness<S>>, detail: String) -> Certificate<S> {
        Certificate {
            verdict,
            method,
            witness,
            detail,
            config: self.exact_info(),
        }
    }
}

/// Decides whether a norm-one operator is generating.
///
/// Polyhedral domains: every extreme point of `B_X` must attain the norm.
/// Euclidean domains: `G` must be an isometric embedding. Anything else is
/// handed to the sampling oracle, which can only refute.
pub fn is_generating<S: Scalar>(g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Certificate<S>> {
    let x = g.domain();
    let y = g.codomain();
    if x == y && *g.matrix() == Matrix::identity(x.dim()) {
        return Ok(opts.certificate(
            Verdict::Verified,
            Method::VertexExact,
            None,
            "the identity map is an isometry".into(),
        ));
    }
    g.check_norm_one(&opts.tol)?;
    if x.is_polyhedral() {
        let one_key = y.key_of(&S::one());
        let threshold = if y.is_euclidean() {
            let lo = max_scalar(S::one() - opts.tol.clone(), S::zero());
            lo.clone() * lo
        } else {
            one_key - opts.tol.clone()
        };
        for v in x.extreme_points_checked()? {
            let key = y.norm_key(&g.apply(&v)?)?;
            if key < threshold {
                let value = y.norm_from_key(&key);
                return Ok(opts.certificate(
                    Verdict::Refuted,
                    Method::VertexExact,
                    Some(Witness::Vector(v)),
                    format!("extreme point does not attain the norm: ‖Gv‖ = {value} < 1"),
                ));
            }
        }
        return Ok(opts.certificate(
            Verdict::Verified,
            Method::VertexExact,
            None,
            "every extreme point of the domain ball attains the norm".into(),
        ));
    }
    if x.is_euclidean() && y.is_euclidean() {
        let n = x.dim();
        let gram = g.matrix().transpose().mul(g.matrix());
        let defect = gram.sub(&Matrix::identity(n)).max_abs();
        if defect <= opts.tol {
            return Ok(opts.certificate(
                Verdict::Verified,
                Method::EuclideanExact,
                None,
                "GᵀG = I: isometric embedding".into(),
            ));
        }
        let w = bottom_symmetric_eigenvector(&gram).cast::<S>();
        return Ok(opts.certificate(
            Verdict::Refuted,
            Method::EuclideanExact,
            Some(Witness::Vector(w)),
            format!("not an isometric embedding: max |GᵀG - I| = {defect}"),
        ));
    }
    if x.is_euclidean() && y.is_polyhedral() {
        return euclidean_to_polyhedral(g, opts);
    }
    sampled_generating(g, &opts.sampling)
}

/// `min_{‖x‖₂=1} ‖Gx‖ = 1 / max{‖w‖₂ : w a vertex of {x : ‖Gx‖ ≤ 1}}`.
fn euclidean_to_polyhedral<S: Scalar>(g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Certificate<S>> {
    let adj = g.matrix().transpose();
    let facets: Vec<Halfspace<S>> = g
        .codomain()
        .dual_extreme_points()?
        .iter()
        .map(|u| adj.mul_vec(u))
        .filter(|w| !w.is_zero_within(&S::zero()))
        .map(|w| Halfspace { normal: w, offset: S::one() })
        .collect();
    let kernel_witness = |why: &str| {
        let gram = g.matrix().transpose().mul(g.matrix());
        Ok(opts.certificate(
            Verdict::Refuted,
            Method::EuclideanExact,
            Some(Witness::Vector(bottom_symmetric_eigenvector(&gram).cast())),
            why.to_string(),
        ))
    };
    if facets.is_empty() {
        return kernel_witness("G vanishes");
    }
    let level_set = match vertex_enumerate(&PolytopeH::new(facets)?) {
        Ok(p) => p,
        Err(Error::Unbounded) => return kernel_witness("G is not injective"),
        Err(e) => return Err(e),
    };
    let (key, far) = level_set
        .vertices()
        .iter()
        .map(|w| (w.norm_sq(), w))
        .fold(None, |best: Option<(S, &Vector<S>)>, (k, w)| match best {
            Some((bk, bw)) if bk >= k => Some((bk, bw)),
            _ => Some((k, w)),
        })
        .ok_or(Error::Empty("level set vertices"))?;
    if (key.clone() - S::one()).abs() <= opts.tol {
        return Ok(opts.certificate(
            Verdict::Verified,
            Method::EuclideanExact,
            None,
            "‖Gx‖ = 1 on the whole Euclidean sphere: isometric embedding".into(),
        ));
    }
    let len = key.sqrt_lossy();
    Ok(opts.certificate(
        Verdict::Refuted,
        Method::EuclideanExact,
        Some(Witness::Vector(far.scale(&(S::one() / len.clone())))),
        format!("not an isometric embedding: min of ‖Gx‖ on the sphere is {}", S::one() / len),
    ))
}

/// Radius `r` of the largest ball `r·B_X` inside `conv(att(G))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Radius<S> {
    pub value: S,
    /// The finite set whose hull was measured (attaining extreme points, or
    /// the attaining points of a Euclidean domain when they are finite).
    pub attaining: Vec<Vector<S>>,
    /// Whether the attaining points span the domain.
    pub spans: bool,
}

pub fn generating_radius<S: Scalar>(g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Radius<S>> {
    g.check_norm_one(&opts.tol)?;
    let x = g.domain();
    let y = g.codomain();
    let n = x.dim();
    if x.is_polyhedral() {
        let att = g.attainment(&opts.tol)?;
        // Every vertex attaining means the hull is the whole ball; skipping
        // the facet enumeration matters for cross-polytopes in high dimension.
        let value = if att.non_attaining().next().is_none() {
            S::one()
        } else {
            x.contained_ball_radius(&att.attaining_vertices)?
        };
        let spans = rank(&att.attaining_vertices, &S::default_tol()) == n;
        return Ok(Radius {
            value,
            attaining: att.attaining_vertices,
            spans,
        });
    }
    if x.is_euclidean() && y.is_euclidean() {
        let iso = is_generating(g, opts)?.is_verified();
        return Ok(Radius {
            value: if iso { S::one() } else { S::zero() },
            attaining: Vec::new(),
            spans: iso,
        });
    }
    if x.is_euclidean() && y.is_polyhedral() {
        // ‖Gx‖ = max_u ⟨G*u, x⟩ ≤ ‖G*u‖₂, so the norm is attained exactly at
        // the vectors G*u of Euclidean length one.
        let adj = g.matrix().transpose();
        let one_key = S::one();
        let points: Vec<Vector<S>> = g
            .codomain()
            .dual_extreme_points()?
            .iter()
            .map(|u| adj.mul_vec(u))
            .filter(|w| (w.norm_sq() - one_key.clone()).abs() <= opts.tol)
            .collect();
        let points = dedup_points(&points, &S::default_tol());
        let value = x.contained_ball_radius(&points)?;
        let spans = rank(&points, &S::default_tol()) == n;
        return Ok(Radius {
            value,
            attaining: points,
            spans,
        });
    }
    Err(Error::Unsupported(format!(
        "exact radius needs a polyhedral or Euclidean domain, got {}",
        x.describe()
    )))
}

/// Whether `xstar` is a spear of the dual of `space`: `|⟨x*, v⟩| = 1` at
/// every extreme point `v` of `B_X`.
pub fn is_spear_vector<S: Scalar>(xstar: &Vector<S>, space: &Space<S>, opts: &CheckOptions<S>) -> Result<Certificate<S>> {
    space.check_dim(xstar)?;
    let dual = space.dual();
    let norm = dual.norm(xstar)?;
    let norm_ok = if dual.is_euclidean() {
        (xstar.norm_sq() - S::one()).abs() <= opts.tol
    } else {
        (norm.clone() - S::one()).abs() <= opts.tol
    };
    if !norm_ok {
        return Err(Error::NotNormOne { norm: norm.to_string() });
    }
    if space.is_euclidean() && space.dim() >= 2 {
        // Strictly convex spaces have no spears: y ⟂ x* gives ‖x* ± y‖ = √2.
        let mut y = Vector::zeros(space.dim());
        y[0] = -xstar[1].clone();
        y[1] = xstar[0].clone();
        if y.is_zero_within(&S::zero()) {
            y = Vector::unit(space.dim(), if xstar[0].is_zero() { 0 } else { 1 });
        }
        return Ok(opts.certificate(
            Verdict::Refuted,
            Method::EuclideanExact,
            Some(Witness::Vector(y)),
            "Euclidean spaces are strictly convex and have no spear vectors".into(),
        ));
    }
    let ext = if space.is_euclidean() {
        vec![Vector::unit(1, 0), Vector::unit(1, 0).neg()]
    } else {
        space.extreme_points_checked()?
    };
    for v in ext {
        let val = xstar.dot(&v).abs();
        if val < S::one() - opts.tol.clone() {
            return Ok(opts.certificate(
                Verdict::Refuted,
                Method::VertexExact,
                Some(Witness::Vector(v)),
                format!("|⟨x*, v⟩| = {val} < 1 at an extreme point"),
            ));
        }
    }
    Ok(opts.certificate(
        Verdict::Verified,
        Method::VertexExact,
        None,
        "|⟨x*, v⟩| = 1 at every extreme point".into(),
    ))
}

/// Result of the facet-wise LP behind [`is_spear_set`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpearSetValue<S> {
    /// `min_{z0 ∈ S_Z} max_{θ=±1} sup_{z∈F} ‖z + θ z0‖`.
    pub value: S,
    pub minimizer: Vector<S>,
}

/// `min` over the unit sphere of `z0 ↦ max_θ sup_{z∈F} ‖z + θz0‖`, one LP per
/// facet of `B_Z`.
pub fn spear_set_value<S: Scalar>(set: &[Vector<S>], z: &Space<S>, tol: &S) -> Result<SpearSetValue<S>> {
    if set.is_empty() {
        return Err(Error::Empty("spear set candidate"));
    }
    for f in set {
        let n = z.norm(f)?;
        if n > S::one() + tol.clone() {
            return Err(Error::NormExceedsOne { norm: n.to_string() });
        }
    }
    let d = z.dim();
    let facets = z.facets_with_vertices()?;
    let normals: Vec<&Vector<S>> = facets.iter().map(|(a, _)| a).collect();
    let support: Vec<S> = normals
        .iter()
        .map(|u| set.iter().map(|f| u.dot(f)).reduce(max_scalar).expect("nonempty set"))
        .collect();
    let mut best: Option<SpearSetValue<S>> = None;
    for phi in &normals {
        // variables (z0, t); maximize -t
        let mut obj = vec![S::zero(); d + 1];
        obj[d] = -S::one();
        let mut lp = LinearProgram::maximize_free(Vector(obj));
        for (u, h) in normals.iter().zip(&support) {
            for sign in [S::one(), -S::one()] {
                let mut row: Vec<S> = u.iter().map(|a| a.clone() * sign.clone()).collect();
                row.push(-S::one());
                lp.add_le(Vector(row), -h.clone());
            }
            let mut row = u.0.clone();
            row.push(S::zero());
            lp.add_le(Vector(row), S::one());
        }
        let mut row = phi.0.clone();
        row.push(S::zero());
        lp.add_eq(Vector(row), S::one());
        let LpOutcome::Optimal { value, x } = lp.solve_with_tol(&S::default_tol()) else {
            return Err(Error::Infeasible);
        };
        let value = -value;
        let z0 = Vector(x.0[..d].to_vec());
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(SpearSetValue { value, minimizer: z0 });
        }
    }
    best.ok_or(Error::Empty("facets"))
}

/// Whether `set` is a spear set of `z`.
pub fn is_spear_set<S: Scalar>(set: &[Vector<S>], z: &Space<S>, opts: &CheckOptions<S>) -> Result<Certificate<S>> {
    is_spear_set_with(set, z, opts, Method::VertexExact)
}

fn is_spear_set_with<S: Scalar>(set: &[Vector<S>], z: &Space<S>, opts: &CheckOptions<S>, method: Method) -> Result<Certificate<S>> {
    if !z.is_polyhedral() {
        return Err(Error::NotPolyhedral(z.describe()));
    }
    let two = S::one() + S::one();
    let m = spear_set_value(set, z, &opts.tol)?;
    if m.value >= two.clone() - opts.tol.clone() {
        Ok(opts.certificate(
            Verdict::Verified,
            method,
            None,
            "max over signs of sup ‖z ± z0‖ equals 2 on the whole sphere".into(),
        ))
    } else {
        Ok(opts.certificate(
            Verdict::Refuted,
            method,
            Some(Witness::Vector(m.minimizer)),
            format!("max over signs of sup ‖z ± z0‖ is {} < 2 at z0", m.value),
        ))
    }
}

/// Checks that `G*(ext B_{Y*})` is a spear set of `X*`; equivalent to `G`
/// being generating.
pub fn dual_spear_check<S: Scalar>(g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Certificate<S>> {
    for s in [g.domain(), g.codomain()] {
        if !s.is_polyhedral() {
            return Err(Error::NotPolyhedral(s.describe()));
        }
    }
    g.check_norm_one(&opts.tol)?;
    let adj = g.adjoint();
    let images: Vec<Vector<S>> = g
        .codomain()
        .dual_extreme_points()?
        .iter()
        .map(|u| adj.matrix().mul_vec(u))
        .collect();
    let images = dedup_points(&images, &S::default_tol());
    is_spear_set_with(&images, adj.codomain(), opts, Method::DualSpear)
}

/// `T = Σ λ_i G_i` with every `G_i` generating.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexDecomposition<S> {
    pub terms: Vec<(S, Operator<S>)>,
    pub reconstruction_error: S,
}

impl<S: Scalar> ConvexDecomposition<S> {
    pub fn weight_sum(&self) -> S {
        self.terms.iter().fold(S::zero(), |acc, (w, _)| acc + w.clone())
    }

    pub fn recombine(&self) -> Option<Matrix<S>> {
        let first = self.terms.first()?;
        let init = Matrix::zeros(first.1.matrix().rows(), first.1.matrix().cols());
        Some(
            self.terms
                .iter()
                .fold(init, |acc, (w, g)| acc.add(&g.matrix().scale(w))),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(w, g)| json!({"weight": w.to_json(), "operator": g.to_json()})).collect::<Vec<_>>(),
            "reconstruction_error": self.reconstruction_error.to_json(),
        })
    }
}

/// Splits a contraction on `ℓ1ⁿ` into a convex combination of operators
/// whose columns all have norm one.
///
/// Columns are processed left to right. A column `c` with `α = ‖c‖ < 1` is
/// replaced by `±c/α` with weights `(1 ± α)/2`; a zero column uses the
/// normalized first coordinate vector of the codomain.
pub fn decompose_into_generating<S: Scalar>(t: &Operator<S>, tol: &S) -> Result<ConvexDecomposition<S>> {
    if !t.domain().is_l1() {
        return Err(Error::Unsupported(format!(
            "decomposition needs an l1 domain, got {}",
            t.domain().describe()
        )));
    }
    let y = t.codomain();
    let n = t.domain().dim();
    let two = S::one() + S::one();
    let mut terms: Vec<(S, Matrix<S>)> = vec![(S::one(), t.matrix().clone())];
    for k in 0..n {
        let col = t.matrix().column(k);
        let key = y.norm_key(&col)?;
        let alpha = y.norm_from_key(&key);
        if S::is_exact() && y.key_of(&alpha) != key {
            return Err(Error::Unsupported(format!(
                "column {k} has an irrational norm; use the float backend"
            )));
        }
        if alpha > S::one() + tol.clone() {
            return Err(Error::NormExceedsOne { norm: alpha.to_string() });
        }
        if (alpha.clone() - S::one()).abs() <= *tol {
            continue;
        }
        let u = if alpha.is_zero() {
            y.normalize(&Vector::unit(y.dim(), 0))?
        } else {
            col.scale(&(S::one() / alpha.clone()))
        };
        let l_plus = (S::one() + alpha.clone()) / two.clone();
        let l_minus = (S::one() - alpha.clone()) / two.clone();
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (w, m) in terms {
            let mut plus = m.clone();
            plus.set_column(k, &u);
            let mut minus = m;
            minus.set_column(k, &u.neg());
            next.push((w.clone() * l_plus.clone(), plus));
            next.push((w * l_minus.clone(), minus));
        }
        terms = next;
    }
    let terms = terms
        .into_iter()
        .map(|(w, m)| Ok((w, t.with_matrix(m)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ConvexDecomposition {
        terms,
        reconstruction_error: S::zero(),
    };
    out.reconstruction_error = out
        .recombine()
        .map(|m| m.sub(t.matrix()).max_abs())
        .unwrap_or_else(S::zero);
    Ok(out)
}

#[cfg(test)]
mod tests;
