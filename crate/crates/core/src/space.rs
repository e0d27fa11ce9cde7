//! Finite-dimensional real normed spaces.
//!
//! A [`Space`] is a dimension plus a [`NormSpec`] describing its closed unit
//! ball: the classical `ℓ1`, `ℓ∞`, `ℓ2` norms, a centrally symmetric polytope
//! (by vertices or by facets), or an `ℓ1`/`ℓ∞` direct sum of other spaces.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{dedup_points, hull, vertex_enumerate, Halfspace, PolytopeH};
use crate::linalg::Vector;
use crate::scalar::{max_scalar, min_scalar, scalar_from_json, Scalar};

/// Largest extreme-point set we are willing to list.
pub const MAX_EXTREME_POINTS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumKind {
    L1Sum,
    LinfSum,
}

impl SumKind {
    pub fn dual(self) -> Self {
        match self {
            SumKind::L1Sum => SumKind::LinfSum,
            SumKind::LinfSum => SumKind::L1Sum,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SumKind::L1Sum => "l1sum",
            SumKind::LinfSum => "linfsum",
        }
    }
}

impl std::str::FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1sum" | "l1" => Ok(SumKind::L1Sum),
            "linfsum" | "linf" => Ok(SumKind::LinfSum),
            other => Err(Error::Invalid(format!("unknown sum kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec<S> {
    L1,
    Linf,
    L2,
    /// Ball given as the convex hull of the listed points.
    PolytopeV(Vec<Vector<S>>),
    /// Ball given as the intersection of the listed halfspaces.
    PolytopeH(Vec<Halfspace<S>>),
    DirectSum { kind: SumKind, parts: Vec<Space<S>> },
}

/// Both descriptions of a polytope ball: its vertices and its facet normals
/// `a` (each facet being `⟨a, x⟩ ≤ 1`). The facet normals are exactly the
/// extreme points of the polar ball.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeBall<S> {
    pub vertices: Vec<Vector<S>>,
    pub facet_normals: Vec<Vector<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Space<S> {
    dim: usize,
    norm: NormSpec<S>,
    ball: Option<Arc<PolytopeBall<S>>>,
}

/// The answer of [`Space::extreme_points`] for a space whose ball has no
/// finite extreme-point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPolyhedral;

impl<S: Scalar> Space<S> {
    pub fn l1(dim: usize) -> Self {
        Self::simple(dim, NormSpec::L1)
    }

    pub fn linf(dim: usize) -> Self {
        Self::simple(dim, NormSpec::Linf)
    }

    pub fn l2(dim: usize) -> Self {
        Self::simple(dim, NormSpec::L2)
    }

    fn simple(dim: usize, norm: NormSpec<S>) -> Self {
        assert!(dim > 0, "space dimension must be positive");
        Space { dim, norm, ball: None }
    }

    /// Ball `conv(vertices)`; must be symmetric and full-dimensional.
    pub fn polytope_v(vertices: Vec<Vector<S>>) -> Result<Self> {
        let dim = vertices.first().ok_or(Error::Empty("ball vertex list"))?.dim();
        if dim == 0 {
            return Err(Error::InvalidBall("zero-dimensional ball".into()));
        }
        let h = hull(&vertices)?;
        if h.degenerate {
            return Err(Error::InvalidBall(format!(
                "ball vertices span only {} of {} dimensions",
                h.affine_dim, dim
            )));
        }
        let ball = Self::ball_from_facets(&h.facets, dim)?;
        Ok(Space {
            dim,
            norm: NormSpec::PolytopeV(vertices),
            ball: Some(Arc::new(ball)),
        })
    }

    /// Ball `{x : ⟨a_i, x⟩ ≤ b_i}`; must be bounded, symmetric, with 0 inside.
    pub fn polytope_h(facets: Vec<Halfspace<S>>) -> Result<Self> {
        let dim = facets.first().ok_or(Error::Empty("ball facet list"))?.dim();
        if dim == 0 {
            return Err(Error::InvalidBall("zero-dimensional ball".into()));
        }
        let ball = Self::ball_from_facets(&facets, dim)?;
        Ok(Space {
            dim,
            norm: NormSpec::PolytopeH(facets),
            ball: Some(Arc::new(ball)),
        })
    }

    fn ball_from_facets(facets: &[Halfspace<S>], dim: usize) -> Result<PolytopeBall<S>> {
        let tol = S::default_tol();
        let mut scaled = Vec::with_capacity(facets.len());
        for f in facets {
            f.normal.check_dim(dim)?;
            if f.offset <= tol {
                return Err(Error::InvalidBall("the origin must be an interior point".into()));
            }
            let inv = S::one() / f.offset.clone();
            scaled.push(Halfspace {
                normal: f.normal.scale(&inv),
                offset: S::one(),
            });
        }
        let poly = PolytopeH::new(scaled)?;
        let vertices = vertex_enumerate(&poly)
            .map_err(|_| Error::InvalidBall("ball is unbounded".into()))?
            .into_vertices();
        let sym_tol = tol.clone() * S::from_i64(1000).expect("small integer");
        if vertices.iter().any(|v| !vertices.iter().any(|w| w.approx_eq(&v.neg(), &sym_tol))) {
            return Err(Error::InvalidBall("ball is not symmetric under x ↦ -x".into()));
        }
        // Irredundant facets of the ball.
        let h = hull(&vertices)?;
        if h.degenerate {
            return Err(Error::InvalidBall("ball is not full-dimensional".into()));
        }
        Ok(PolytopeBall {
            vertices,
            facet_normals: h.facets.into_iter().map(|f| f.normal).collect(),
        })
    }

    pub fn direct_sum(kind: SumKind, parts: Vec<Space<S>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Empty("direct sum parts"));
        }
        let dim = parts.iter().map(Space::dim).sum();
        Ok(Space {
            dim,
            norm: NormSpec::DirectSum { kind, parts },
            ball: None,
        })
    }

    pub fn l1_sum(parts: Vec<Space<S>>) -> Result<Self> {
        Self::direct_sum(SumKind::L1Sum, parts)
    }

    pub fn linf_sum(parts: Vec<Space<S>>) -> Result<Self> {
        Self::direct_sum(SumKind::LinfSum, parts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_spec(&self) -> &NormSpec<S> {
        &self.norm
    }

    pub fn polytope_ball(&self) -> Option<&PolytopeBall<S>> {
        self.ball.as_deref()
    }

    pub fn is_l1(&self) -> bool {
        matches!(self.norm, NormSpec::L1)
    }

    /// `ℓ2`, the only smooth norm supported.
    pub fn is_euclidean(&self) -> bool {
        matches!(self.norm, NormSpec::L2)
    }

    /// Whether the unit ball is a polytope.
    pub fn is_polyhedral(&self) -> bool {
        match &self.norm {
            NormSpec::L2 => false,
            NormSpec::DirectSum { parts, .. } => parts.iter().all(Space::is_polyhedral),
            _ => true,
        }
    }

    pub fn check_dim(&self, x: &Vector<S>) -> Result<()> {
        x.check_dim(self.dim)
    }

    fn split<'a>(&self, x: &'a [S], parts: &[Space<S>]) -> Vec<&'a [S]> {
        let mut out = Vec::with_capacity(parts.len());
        let mut start = 0;
        for p in parts {
            out.push(&x[start..start + p.dim]);
            start += p.dim;
        }
        out
    }

    /// The norm of `x`. The Euclidean norm goes through [`Scalar::sqrt_lossy`].
    pub fn norm(&self, x: &Vector<S>) -> Result<S> {
        self.check_dim(x)?;
        Ok(self.norm_unchecked(x.coords()))
    }

    fn norm_unchecked(&self, x: &[S]) -> S {
        match &self.norm {
            NormSpec::L1 => x.iter().fold(S::zero(), |acc, a| acc + a.abs()),
            NormSpec::Linf => x.iter().fold(S::zero(), |acc, a| max_scalar(acc, a.abs())),
            NormSpec::L2 => x
                .iter()
                .fold(S::zero(), |acc, a| acc + a.clone() * a.clone())
                .sqrt_lossy(),
            NormSpec::PolytopeV(_) | NormSpec::PolytopeH(_) => {
                let ball = self.ball.as_ref().expect("polytope spaces carry their ball");
                let x = Vector(x.to_vec());
                ball.facet_normals
                    .iter()
                    .fold(S::zero(), |acc, a| max_scalar(acc, a.dot(&x)))
            }
            NormSpec::DirectSum { kind, parts } => {
                let pieces = self.split(x, parts);
                let norms = parts.iter().zip(pieces).map(|(p, xs)| p.norm_unchecked(xs));
                match kind {
                    SumKind::L1Sum => norms.fold(S::zero(), |acc, n| acc + n),
                    SumKind::LinfSum => norms.fold(S::zero(), max_scalar),
                }
            }
        }
    }

    /// A strictly increasing function of the norm that avoids square roots:
    /// the squared norm for `ℓ2`, the norm itself otherwise.
    pub fn norm_key(&self, x: &Vector<S>) -> Result<S> {
        if self.is_euclidean() {
            self.check_dim(x)?;
            Ok(x.norm_sq())
        } else {
            self.norm(x)
        }
    }

    /// Converts a norm threshold to the scale of [`Space::norm_key`].
    pub fn key_of(&self, norm_value: &S) -> S {
        if self.is_euclidean() {
            norm_value.clone() * norm_value.clone()
        } else {
            norm_value.clone()
        }
    }

    /// Converts a [`Space::norm_key`] value back to a norm.
    pub fn norm_from_key(&self, key: &S) -> S {
        if self.is_euclidean() {
            key.sqrt_lossy()
        } else {
            key.clone()
        }
    }

    pub fn normalize(&self, x: &Vector<S>) -> Result<Vector<S>> {
        let n = self.norm(x)?;
        if n.is_zero() {
            return Err(Error::Invalid("cannot normalize the zero vector".into()));
        }
        Ok(x.scale(&(S::one() / n)))
    }

    /// The dual space, identified with `ℝ^dim` through the standard pairing.
    pub fn dual(&self) -> Space<S> {
        match &self.norm {
            NormSpec::L1 => Space::linf(self.dim),
            NormSpec::Linf => Space::l1(self.dim),
            NormSpec::L2 => Space::l2(self.dim),
            NormSpec::PolytopeV(vertices) => {
                let ball = self.ball.as_ref().expect("polytope spaces carry their ball");
                Space {
                    dim: self.dim,
                    norm: NormSpec::PolytopeH(
                        vertices
                            .iter()
                            .map(|v| Halfspace {
                                normal: v.clone(),
                                offset: S::one(),
                            })
                            .collect(),
                    ),
                    ball: Some(Arc::new(PolytopeBall {
                        vertices: ball.facet_normals.clone(),
                        facet_normals: ball.vertices.clone(),
                    })),
                }
            }
            NormSpec::PolytopeH(facets) => {
                let ball = self.ball.as_ref().expect("polytope spaces carry their ball");
                Space {
                    dim: self.dim,
                    norm: NormSpec::PolytopeV(
                        facets
                            .iter()
                            .map(|f| f.normal.scale(&(S::one() / f.offset.clone())))
                            .collect(),
                    ),
                    ball: Some(Arc::new(PolytopeBall {
                        vertices: ball.facet_normals.clone(),
                        facet_normals: ball.vertices.clone(),
                    })),
                }
            }
            NormSpec::DirectSum { kind, parts } => Space {
                dim: self.dim,
                norm: NormSpec::DirectSum {
                    kind: kind.dual(),
                    parts: parts.iter().map(Space::dual).collect(),
                },
                ball: None,
            },
        }
    }

    /// Number of extreme points of the ball, without listing them.
    pub fn extreme_point_count(&self) -> std::result::Result<u128, NotPolyhedral> {
        match &self.norm {
            NormSpec::L1 => Ok(2 * self.dim as u128),
            NormSpec::Linf => Ok(if self.dim >= 127 { u128::MAX } else { 1u128 << self.dim }),
            NormSpec::L2 => Err(NotPolyhedral),
            NormSpec::PolytopeV(_) | NormSpec::PolytopeH(_) => {
                Ok(self.ball.as_ref().expect("ball").vertices.len() as u128)
            }
            NormSpec::DirectSum { kind, parts } => {
                let counts = parts
                    .iter()
                    .map(Space::extreme_point_count)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(match kind {
                    SumKind::L1Sum => counts.iter().fold(0u128, |a, &c| a.saturating_add(c)),
                    SumKind::LinfSum => counts.iter().fold(1u128, |a, &c| a.saturating_mul(c)),
                })
            }
        }
    }

    /// `ext(B_X)` for polyhedral spaces.
    pub fn extreme_points(&self) -> std::result::Result<Vec<Vector<S>>, NotPolyhedral> {
        match &self.norm {
            NormSpec::L1 => Ok((0..self.dim)
                .flat_map(|i| {
                    let e = Vector::unit(self.dim, i);
                    [e.clone(), e.neg()]
                })
                .collect()),
            NormSpec::Linf => {
                let n = self.dim;
                Ok((0..1usize << n)
                    .map(|mask| {
                        Vector(
                            (0..n)
                                .map(|i| if mask >> i & 1 == 1 { -S::one() } else { S::one() })
                                .collect(),
                        )
                    })
                    .collect())
            }
            NormSpec::L2 => Err(NotPolyhedral),
            NormSpec::PolytopeV(_) | NormSpec::PolytopeH(_) => {
                Ok(self.ball.as_ref().expect("ball").vertices.clone())
            }
            NormSpec::DirectSum { kind, parts } => {
                let part_ext = parts
                    .iter()
                    .map(Space::extreme_points)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(match kind {
                    SumKind::L1Sum => {
                        let mut out = Vec::new();
                        let mut offset = 0;
                        for (p, ext) in parts.iter().zip(&part_ext) {
                            for v in ext {
                                let mut x = vec![S::zero(); self.dim];
                                x[offset..offset + p.dim].clone_from_slice(v.coords());
                                out.push(Vector(x));
                            }
                            offset += p.dim;
                        }
                        out
                    }
                    SumKind::LinfSum => {
                        let mut acc: Vec<Vec<S>> = vec![Vec::new()];
                        for ext in &part_ext {
                            let mut next = Vec::with_capacity(acc.len() * ext.len());
                            for prefix in &acc {
                                for v in ext {
                                    let mut x = prefix.clone();
                                    x.extend(v.iter().cloned());
                                    next.push(x);
                                }
                            }
                            acc = next;
                        }
                        acc.into_iter().map(Vector).collect()
                    }
                })
            }
        }
    }

    /// Like [`Space::extreme_points`] but fails with a typed error, and
    /// refuses enumerations larger than [`MAX_EXTREME_POINTS`].
    pub fn extreme_points_checked(&self) -> Result<Vec<Vector<S>>> {
        let count = self
            .extreme_point_count()
            .map_err(|_| Error::NotPolyhedral(self.describe()))?;
        if count > MAX_EXTREME_POINTS as u128 {
            return Err(Error::TooLarge(format!(
                "{} has {count} extreme points",
                self.describe()
            )));
        }
        self.extreme_points()
            .map_err(|_| Error::NotPolyhedral(self.describe()))
    }

    /// `ext(B_{X*})`.
    pub fn dual_extreme_points(&self) -> Result<Vec<Vector<S>>> {
        self.dual().extreme_points_checked()
    }

    /// The facets of a polyhedral ball, each as its (dual extreme point)
    /// normal together with the extreme points lying on it.
    pub fn facets_with_vertices(&self) -> Result<Vec<(Vector<S>, Vec<Vector<S>>)>> {
        let verts = self.extreme_points_checked()?;
        let normals = self.dual_extreme_points()?;
        let tol = S::default_tol();
        Ok(normals
            .into_iter()
            .map(|u| {
                let on: Vec<Vector<S>> = verts
                    .iter()
                    .filter(|v| (u.dot(v) - S::one()).abs() <= tol)
                    .cloned()
                    .collect();
                (u, on)
            })
            .collect())
    }

    /// Largest `r ≥ 0` with `r·B_X ⊆ conv(points)`.
    ///
    /// For a full-dimensional hull with facets `⟨a, x⟩ ≤ b` this is
    /// `min b / ‖a‖_*`; a degenerate hull contains no ball and gives 0.
    pub fn contained_ball_radius(&self, points: &[Vector<S>]) -> Result<S> {
        if points.is_empty() {
            return Ok(S::zero());
        }
        for p in points {
            self.check_dim(p)?;
        }
        let h = hull(&dedup_points(points, &S::default_tol()))?;
        if h.degenerate {
            return Ok(S::zero());
        }
        let dual = self.dual();
        let mut r: Option<S> = None;
        for f in &h.facets {
            let ratio = f.offset.clone() / dual.norm(&f.normal)?;
            r = Some(match r {
                None => ratio,
                Some(r) => min_scalar(r, ratio),
            });
        }
        Ok(max_scalar(r.unwrap_or_else(S::zero), S::zero()))
    }

    pub fn describe(&self) -> String {
        match &self.norm {
            NormSpec::L1 => format!("l1^{}", self.dim),
            NormSpec::Linf => format!("linf^{}", self.dim),
            NormSpec::L2 => format!("l2^{}", self.dim),
            NormSpec::PolytopeV(v) => format!("polytope_v({} points in R^{})", v.len(), self.dim),
            NormSpec::PolytopeH(f) => format!("polytope_h({} facets in R^{})", f.len(), self.dim),
            NormSpec::DirectSum { kind, parts } => format!(
                "{}({})",
                kind.as_str(),
                parts.iter().map(Space::describe).collect::<Vec<_>>().join(", ")
            ),
        }
    }

    /// Same space with scalars converted through `f64`.
    pub fn cast<T: Scalar>(&self) -> Space<T> {
        match &self.norm {
            NormSpec::L1 => Space::l1(self.dim),
            NormSpec::Linf => Space::linf(self.dim),
            NormSpec::L2 => Space::l2(self.dim),
            NormSpec::PolytopeV(_) | NormSpec::PolytopeH(_) => {
                let ball = self.ball.as_ref().expect("ball");
                let conv = |vs: &[Vector<S>]| vs.iter().map(Vector::cast).collect::<Vec<_>>();
                let norm = match &self.norm {
                    NormSpec::PolytopeV(v) => NormSpec::PolytopeV(conv(v)),
                    NormSpec::PolytopeH(fs) => NormSpec::PolytopeH(
                        fs.iter()
                            .map(|f| Halfspace {
                                normal: f.normal.cast(),
                                offset: T::from_f64_lossy(f.offset.to_f64_lossy()),
                            })
                            .collect(),
                    ),
                    _ => unreachable!(),
                };
                Space {
                    dim: self.dim,
                    norm,
                    ball: Some(Arc::new(PolytopeBall {
                        vertices: conv(&ball.vertices),
                        facet_normals: conv(&ball.facet_normals),
                    })),
                }
            }
            NormSpec::DirectSum { kind, parts } => Space {
                dim: self.dim,
                norm: NormSpec::DirectSum {
                    kind: *kind,
                    parts: parts.iter().map(Space::cast).collect(),
                },
                ball: None,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let vecs = |vs: &[Vector<S>]| -> Value {
            Value::Array(vs.iter().map(vector_to_json).collect())
        };
        let norm = match &self.norm {
            NormSpec::L1 => json!({"type": "l1"}),
            NormSpec::Linf => json!({"type": "linf"}),
            NormSpec::L2 => json!({"type": "l2"}),
            NormSpec::PolytopeV(v) => json!({"type": "polytope_v", "vertices": vecs(v)}),
            NormSpec::PolytopeH(fs) => json!({
                "type": "polytope_h",
                "facets": fs.iter().map(|f| json!({
                    "normal": vector_to_json(&f.normal),
                    "offset": f.offset.to_json(),
                })).collect::<Vec<_>>(),
            }),
            NormSpec::DirectSum { kind, parts } => json!({
                "type": kind.as_str(),
                "parts": parts.iter().map(Space::to_json).collect::<Vec<_>>(),
            }),
        };
        json!({"dim": self.dim, "norm": norm})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("space must be a JSON object".into()))?;
        let dim = obj.get("dim").and_then(Value::as_u64).map(|d| d as usize);
        let norm = obj
            .get("norm")
            .ok_or_else(|| Error::Invalid("space is missing `norm`".into()))?;
        let kind = norm
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("norm is missing `type`".into()))?;
        let need_dim = || dim.filter(|&d| d > 0).ok_or_else(|| Error::Invalid("space needs a positive `dim`".into()));
        let space = match kind {
            "l1" => Space::l1(need_dim()?),
            "linf" => Space::linf(need_dim()?),
            "l2" => Space::l2(need_dim()?),
            "polytope_v" => {
                let verts = norm
                    .get("vertices")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid("polytope_v needs `vertices`".into()))?
                    .iter()
                    .map(vector_from_json)
                    .collect::<Result<Vec<_>>>()?;
                Space::polytope_v(verts)?
            }
            "polytope_h" => {
                let facets = norm
                    .get("facets")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid("polytope_h needs `facets`".into()))?
                    .iter()
                    .map(|f| {
                        let normal = vector_from_json(
                            f.get("normal").ok_or_else(|| Error::Invalid("facet needs `normal`".into()))?,
                        )?;
                        let offset = f
                            .get("offset")
                            .and_then(scalar_from_json)
                            .ok_or_else(|| Error::Invalid("facet needs a numeric `offset`".into()))?;
                        Halfspace::new(normal, offset)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Space::polytope_h(facets)?
            }
            "l1sum" | "linfsum" => {
                let parts = norm
                    .get("parts")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Invalid(format!("{kind} needs `parts`")))?
                    .iter()
                    .map(Space::from_json)
                    .collect::<Result<Vec<_>>>()?;
                Space::direct_sum(kind.parse()?, parts)?
            }
            lp if lp.starts_with('l') && lp[1..].parse::<f64>().is_ok() => {
                return Err(Error::Unsupported(format!(
                    "norm `{lp}`: only l1, l2 and linf are supported"
                )))
            }
            other => return Err(Error::Invalid(format!("unknown norm type `{other}`"))),
        };
        if let Some(d) = dim {
            if d != space.dim {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: space.dim,
                });
            }
        }
        Ok(space)
    }
}

pub fn vector_to_json<S: Scalar>(v: &Vector<S>) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn vector_from_json<S: Scalar>(v: &Value) -> Result<Vector<S>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid("vector must be a JSON array".into()))?;
    arr.iter()
        .map(|x| scalar_from_json(x).ok_or_else(|| Error::Invalid(format!("not a number: {x}"))))
        .collect::<Result<Vec<S>>>()
        .map(Vector)
}
