//! Linear operators between finite-dimensional normed spaces.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{cut, in_convex_hull, Halfspace, PolytopeV};
use crate::linalg::{max_symmetric_eigenvalue, psd_rank, top_symmetric_eigenvector, Matrix, Vector};
use crate::oracle::{sample_sphere, SampleConfig};
use crate::scalar::{max_scalar, scalar_from_json, Scalar};
use crate::space::{SumKind, Space};

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exactness {
    /// Exact in the active backend.
    Exact,
    /// Exact up to a final square root or eigenvalue computed in `f64`.
    Rounded,
    /// A sampled lower bound.
    Inexact,
}

/// Samples used when an operator norm has no exact path.
pub const NORM_FALLBACK_SAMPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator<S> {
    domain: Space<S>,
    codomain: Space<S>,
    matrix: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorNorm<S> {
    pub value: S,
    pub argmax: Option<Vector<S>>,
    pub exactness: Exactness,
}

/// Extreme points of the domain ball on which `‖Gv‖` is within `tolerance`
/// of the operator norm.
#[derive(Clone, Debug, PartialEq)]
pub struct AttainmentReport<S> {
    pub operator_norm: S,
    /// Every extreme point of the domain ball, in enumeration order.
    pub vertices: Vec<Vector<S>>,
    /// `‖Gv‖` for each entry of `vertices`.
    pub values: Vec<S>,
    pub attaining_vertices: Vec<Vector<S>>,
    pub tolerance: S,
}

impl<S: Scalar> AttainmentReport<S> {
    /// Extreme points that do not attain, with their values.
    pub fn non_attaining(&self) -> impl Iterator<Item = (&Vector<S>, &S)> {
        self.vertices
            .iter()
            .zip(&self.values)
            .filter(|(v, _)| !self.attaining_vertices.contains(v))
    }
}

/// The closed `δ`-attainment set `{x ∈ S_X : ‖Gx‖ ≥ 1 - δ}` as a union of
/// polytopes, each lying in a facet of the domain ball.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRegion<S> {
    pub delta: S,
    pub pieces: Vec<PolytopeV<S>>,
}

impl<S: Scalar> DeltaRegion<S> {
    pub fn vertices(&self) -> impl Iterator<Item = &Vector<S>> {
        self.pieces.iter().flat_map(|p| p.vertices().iter())
    }

    /// Whether `x` lies in one of the pieces.
    pub fn contains(&self, x: &Vector<S>) -> bool {
        self.pieces.iter().any(|p| in_convex_hull(x, p.vertices()))
    }
}

impl<S: Scalar> Operator<S> {
    /// `matrix` has `codomain.dim()` rows and `domain.dim()` columns.
    pub fn new(domain: Space<S>, codomain: Space<S>, matrix: Matrix<S>) -> Result<Self> {
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                got: matrix.rows(),
            });
        }
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: matrix.cols(),
            });
        }
        Ok(Operator {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(space: Space<S>) -> Self {
        let n = space.dim();
        Operator {
            domain: space.clone(),
            codomain: space,
            matrix: Matrix::identity(n),
        }
    }

    /// The rank-one operator `x ↦ ⟨x*, x⟩ y`.
    pub fn rank_one(xstar: &Vector<S>, y: &Vector<S>, domain: Space<S>, codomain: Space<S>) -> Result<Self> {
        domain.check_dim(xstar)?;
        codomain.check_dim(y)?;
        Self::new(domain, codomain, Matrix::outer(y, xstar))
    }

    /// Block-diagonal operator between direct sums of the same kind.
    pub fn block_sum(blocks: &[Operator<S>], kind: SumKind) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty("block sum"));
        }
        let domain = Space::direct_sum(kind, blocks.iter().map(|b| b.domain.clone()).collect())?;
        let codomain = Space::direct_sum(kind, blocks.iter().map(|b| b.codomain.clone()).collect())?;
        let mats: Vec<Matrix<S>> = blocks.iter().map(|b| b.matrix.clone()).collect();
        Self::new(domain, codomain, Matrix::block_diagonal(&mats))
    }

    pub fn domain(&self) -> &Space<S> {
        &self.domain
    }

    pub fn codomain(&self) -> &Space<S> {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn with_matrix(&self, matrix: Matrix<S>) -> Result<Self> {
        Self::new(self.domain.clone(), self.codomain.clone(), matrix)
    }

    pub fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        self.domain.check_dim(x)?;
        Ok(self.matrix.mul_vec(x))
    }

    /// `G*` from the dual of the codomain to the dual of the domain.
    pub fn adjoint(&self) -> Self {
        Operator {
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
            matrix: self.matrix.transpose(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Operator {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.scale(k),
        }
    }

    /// `‖Gx‖` for each column of the identity, i.e. the images of `e_j`.
    pub fn column_norms(&self) -> Result<Vec<S>> {
        (0..self.matrix.cols())
            .map(|j| self.codomain.norm(&self.matrix.column(j)))
            .collect()
    }

    fn image_key(&self, x: &Vector<S>) -> S {
        self.codomain
            .norm_key(&self.matrix.mul_vec(x))
            .expect("matrix shape matches codomain")
    }

    pub fn has_exact_norm(&self) -> bool {
        self.domain.is_polyhedral() || (self.domain.is_euclidean() && (self.codomain.is_euclidean() || self.codomain.is_polyhedral()))
    }

    /// The operator norm, by case:
    /// polyhedral domain: maximum over the extreme points of the domain ball;
    /// Euclidean to Euclidean: largest singular value;
    /// Euclidean to polyhedral: maximum Euclidean length of `G*u` over the
    /// extreme points `u` of the codomain's dual ball;
    /// anything else: a sampled lower bound.
    pub fn operator_norm(&self) -> Result<OperatorNorm<S>> {
        if self.domain.is_polyhedral() {
            let ext = self.domain.extreme_points_checked()?;
            let mut best: Option<(S, Vector<S>)> = None;
            for v in ext {
                let k = self.image_key(&v);
                if best.as_ref().is_none_or(|(b, _)| k > *b) {
                    best = Some((k, v));
                }
            }
            let (key, argmax) = best.ok_or(Error::Empty("extreme points"))?;
            let exact = !self.codomain.is_euclidean() || S::is_exact() && key.sqrt_lossy() * key.sqrt_lossy() == key;
            return Ok(OperatorNorm {
                value: self.codomain.norm_from_key(&key),
                argmax: Some(argmax),
                exactness: if exact || !S::is_exact() { Exactness::Exact } else { Exactness::Rounded },
            });
        }
        if self.domain.is_euclidean() && self.codomain.is_euclidean() {
            let gram = self.matrix.transpose().mul(&self.matrix);
            let lambda = max_symmetric_eigenvalue(&gram).max(0.0);
            let argmax = top_symmetric_eigenvector(&gram).cast();
            return Ok(OperatorNorm {
                value: S::from_f64_lossy(lambda.sqrt()),
                argmax: Some(argmax),
                exactness: if S::is_exact() { Exactness::Rounded } else { Exactness::Exact },
            });
        }
        if self.domain.is_euclidean() && self.codomain.is_polyhedral() {
            let adj = self.matrix.transpose();
            let mut best: Option<(S, Vector<S>)> = None;
            for u in self.codomain.dual_extreme_points()? {
                let w = adj.mul_vec(&u);
                let k = w.norm_sq();
                if best.as_ref().is_none_or(|(b, _)| k > *b) {
                    best = Some((k, w));
                }
            }
            let (key, w) = best.ok_or(Error::Empty("dual extreme points"))?;
            let value = key.sqrt_lossy();
            let argmax = (!value.is_zero()).then(|| w.scale(&(S::one() / value.clone())));
            return Ok(OperatorNorm {
                value,
                argmax,
                exactness: if S::is_exact() { Exactness::Rounded } else { Exactness::Exact },
            });
        }
        let cfg = SampleConfig::new(NORM_FALLBACK_SAMPLES, 0);
        let mut best = (0.0f64, None);
        let g = self.cast::<f64>();
        for x in sample_sphere(g.domain(), &cfg) {
            let val = g.codomain.norm(&g.matrix.mul_vec(&x))?;
            if val > best.0 {
                best = (val, Some(x));
            }
        }
        Ok(OperatorNorm {
            value: S::from_f64_lossy(best.0),
            argmax: best.1.map(|x| x.cast()),
            exactness: Exactness::Inexact,
        })
    }

    /// Fails with [`Error::NotNormOne`] unless `‖G‖ = 1` within `tol`.
    ///
    /// Exact whenever an exact norm path exists: squared norms are compared
    /// for Euclidean targets, and the Euclidean-to-Euclidean case tests
    /// `I - GᵀG ⪰ 0` with a nontrivial kernel.
    pub fn check_norm_one(&self, tol: &S) -> Result<()> {
        let one = S::one();
        let fail = |norm: String| Err(Error::NotNormOne { norm });
        if self.domain.is_polyhedral() {
            let ext = self.domain.extreme_points_checked()?;
            let key = ext
                .iter()
                .map(|v| self.image_key(v))
                .fold(S::zero(), max_scalar);
            if (key.clone() - one).abs() <= *tol {
                return Ok(());
            }
            return fail(self.codomain.norm_from_key(&key).to_string());
        }
        if self.domain.is_euclidean() && self.codomain.is_euclidean() {
            let n = self.domain.dim();
            let gram = self.matrix.transpose().mul(&self.matrix);
            let defect = Matrix::identity(n).sub(&gram);
            let (psd, rank) = psd_rank(&defect, tol);
            if psd && rank < n {
                return Ok(());
            }
            return fail(self.operator_norm()?.value.to_string());
        }
        if self.domain.is_euclidean() && self.codomain.is_polyhedral() {
            let adj = self.matrix.transpose();
            let key = self
                .codomain
                .dual_extreme_points()?
                .iter()
                .map(|u| adj.mul_vec(u).norm_sq())
                .fold(S::zero(), max_scalar);
            if (key.clone() - one).abs() <= *tol {
                return Ok(());
            }
            return fail(key.sqrt_lossy().to_string());
        }
        // No exact path: reject clear violations of the sampled lower bound.
        let est = self.operator_norm()?.value;
        let slack = S::from_f64_lossy(0.05);
        if est > one.clone() + tol.clone() || est < one - slack {
            return fail(format!("{est} (sampled)"));
        }
        Ok(())
    }

    /// `G / ‖G‖`.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.operator_norm()?.value;
        if n.is_zero() {
            return Err(Error::Invalid("cannot normalize the zero operator".into()));
        }
        Ok(self.scale(&(S::one() / n)))
    }

    /// Extreme points of `B_X` where `‖Gv‖ ≥ ‖G‖ - tol`.
    ///
    /// The maximizers of the convex map `x ↦ ‖Gx‖` on a polytope form a union
    /// of faces, so with `tol = 0` these vertices have the same convex hull
    /// as the full attainment set.
    pub fn attainment(&self, tol: &S) -> Result<AttainmentReport<S>> {
        if !self.domain.is_polyhedral() {
            return Err(Error::NotPolyhedral(self.domain.describe()));
        }
        let vertices = self.domain.extreme_points_checked()?;
        let keys: Vec<S> = vertices.iter().map(|v| self.image_key(v)).collect();
        let max_key = keys.iter().cloned().fold(S::zero(), max_scalar);
        let operator_norm = self.codomain.norm_from_key(&max_key);
        // Compare on the key scale: ‖Gv‖ ≥ ‖G‖ - tol.
        let threshold = if self.codomain.is_euclidean() {
            let lo = max_scalar(operator_norm.clone() - tol.clone(), S::zero());
            if tol.is_zero() {
                max_key.clone()
            } else {
                lo.clone() * lo
            }
        } else {
            max_key.clone() - tol.clone()
        };
        let attaining_vertices = vertices
            .iter()
            .zip(&keys)
            .filter(|(_, k)| **k >= threshold)
            .map(|(v, _)| v.clone())
            .collect();
        let values = keys.iter().map(|k| self.codomain.norm_from_key(k)).collect();
        Ok(AttainmentReport {
            operator_norm,
            vertices,
            values,
            attaining_vertices,
            tolerance: tol.clone(),
        })
    }

    /// The closed `δ`-attainment set, built facet by facet: for every facet
    /// `F` of `B_X` and every extreme point `u` of `B_{Y*}`, the piece
    /// `F ∩ {x : ⟨G*u, x⟩ ≥ 1 - δ}`.
    pub fn delta_attainment(&self, delta: &S) -> Result<DeltaRegion<S>> {
        if !self.domain.is_polyhedral() {
            return Err(Error::NotPolyhedral(self.domain.describe()));
        }
        if !self.codomain.is_polyhedral() {
            return Err(Error::NotPolyhedral(self.codomain.describe()));
        }
        if *delta <= S::zero() || *delta >= S::one() {
            return Err(Error::Invalid(format!("delta must lie in (0, 1), got {delta}")));
        }
        self.check_norm_one(&S::default_tol())?;
        let level = S::one() - delta.clone();
        let functionals: Vec<Vector<S>> = {
            let adj = self.matrix.transpose();
            let mut fs: Vec<Vector<S>> = Vec::new();
            for u in self.codomain.dual_extreme_points()? {
                let w = adj.mul_vec(&u);
                if !w.is_zero_within(&S::default_tol()) && !fs.contains(&w) {
                    fs.push(w);
                }
            }
            fs
        };
        let mut pieces = Vec::new();
        for (_, face) in self.domain.facets_with_vertices()? {
            let face = PolytopeV::new(face)?;
            for w in &functionals {
                let h = Halfspace::new(w.neg(), -level.clone())?;
                let piece = cut(&face, &h)?;
                // The attainment set is strict (‖Gx‖ > 1 - δ): a piece lying
                // entirely on the level set has nothing of it in its interior.
                let strict = piece.vertices().iter().any(|v| w.dot(v) > level);
                if strict && !pieces.contains(&piece) {
                    pieces.push(piece);
                }
            }
        }
        Ok(DeltaRegion {
            delta: delta.clone(),
            pieces,
        })
    }

    pub fn cast<T: Scalar>(&self) -> Operator<T> {
        Operator {
            domain: self.domain.cast(),
            codomain: self.codomain.cast(),
            matrix: self.matrix.cast(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "matrix": self.matrix.to_rows().iter().map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Invalid(format!("operator is missing `{k}`")));
        let domain = Space::from_json(field("domain")?)?;
        let codomain = Space::from_json(field("codomain")?)?;
        let rows = field("matrix")?
            .as_array()
            .ok_or_else(|| Error::Invalid("`matrix` must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Invalid("matrix row must be an array".into()))?
                    .iter()
                    .map(|x| scalar_from_json(x).ok_or_else(|| Error::Invalid(format!("not a number: {x}"))))
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let matrix = if rows.is_empty() {
            Matrix::zeros(0, domain.dim())
        } else {
            Matrix::from_rows(rows)?
        };
        Self::new(domain, codomain, matrix)
    }
}
