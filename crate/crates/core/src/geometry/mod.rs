//! Polytope machinery: hull conversion, vertex enumeration, halfspace cuts
//! and linear programming, over any [`Scalar`] backend.

pub mod dd;
pub mod lp;

use crate::error::{Error, Result};
use crate::linalg::{affine_dimension, Vector};
use crate::scalar::Scalar;

pub use lp::{LinearProgram, LpOutcome};

/// The constraint `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<S> {
    pub normal: Vector<S>,
    pub offset: S,
}

impl<S: Scalar> Halfspace<S> {
    pub fn new(normal: Vector<S>, offset: S) -> Result<Self> {
        if normal.iter().all(|a| a.is_zero()) {
            return Err(Error::Invalid("halfspace normal must be nonzero".into()));
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `⟨normal, x⟩ - offset`; nonpositive inside.
    pub fn slack(&self, x: &Vector<S>) -> S {
        self.normal.dot(x) - self.offset.clone()
    }

    pub fn contains(&self, x: &Vector<S>, tol: &S) -> bool {
        self.slack(x) <= *tol
    }
}

/// A polytope given by a finite point set (its convex hull).
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeV<S> {
    dim: usize,
    vertices: Vec<Vector<S>>,
}

impl<S: Scalar> PolytopeV<S> {
    pub fn new(vertices: Vec<Vector<S>>) -> Result<Self> {
        let dim = vertices.first().ok_or(Error::Empty("polytope vertex list"))?.dim();
        for v in &vertices {
            v.check_dim(dim)?;
        }
        Ok(PolytopeV { dim, vertices })
    }

    /// A possibly empty vertex list in a known ambient dimension.
    pub fn with_dim(dim: usize, vertices: Vec<Vector<S>>) -> Result<Self> {
        for v in &vertices {
            v.check_dim(dim)?;
        }
        Ok(PolytopeV { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vector<S>> {
        self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Set equality of vertex lists within `tol`.
    pub fn same_vertices(&self, other: &Self, tol: &S) -> bool {
        same_point_set(&self.vertices, &other.vertices, tol)
    }
}

/// A polytope given by finitely many halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeH<S> {
    dim: usize,
    halfspaces: Vec<Halfspace<S>>,
}

impl<S: Scalar> PolytopeH<S> {
    pub fn new(halfspaces: Vec<Halfspace<S>>) -> Result<Self> {
        let dim = halfspaces.first().ok_or(Error::Empty("halfspace list"))?.dim();
        for h in &halfspaces {
            h.normal.check_dim(dim)?;
        }
        Ok(PolytopeH { dim, halfspaces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace<S>] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &Vector<S>, tol: &S) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }
}

/// Facet description of `conv(points)`.
///
/// A lower-dimensional point set is a legitimate result: `degenerate` is set,
/// `affine_dim` reports the dimension of the affine hull and `facets` is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull<S> {
    pub dim: usize,
    pub facets: Vec<Halfspace<S>>,
    pub degenerate: bool,
    pub affine_dim: usize,
}

impl<S: Scalar> Hull<S> {
    pub fn to_polytope(&self) -> Result<PolytopeH<S>> {
        if self.degenerate {
            return Err(Error::Invalid("degenerate hull has no facet description".into()));
        }
        PolytopeH::new(self.facets.clone())
    }
}

pub fn same_point_set<S: Scalar>(a: &[Vector<S>], b: &[Vector<S>], tol: &S) -> bool {
    a.iter().all(|p| b.iter().any(|q| p.approx_eq(q, tol)))
        && b.iter().all(|p| a.iter().any(|q| p.approx_eq(q, tol)))
}

pub fn dedup_points<S: Scalar>(points: &[Vector<S>], tol: &S) -> Vec<Vector<S>> {
    let mut out: Vec<Vector<S>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| q.approx_eq(p, tol)) {
            out.push(p.clone());
        }
    }
    out
}

fn check_dims<S: Scalar>(points: &[Vector<S>]) -> Result<usize> {
    let dim = points.first().ok_or(Error::Empty("point set"))?.dim();
    for p in points {
        p.check_dim(dim)?;
    }
    Ok(dim)
}

/// Facets of the convex hull of `points`.
///
/// Facets with positive offset are scaled to offset 1; the rest to unit
/// max-norm normals.
pub fn hull<S: Scalar>(points: &[Vector<S>]) -> Result<Hull<S>> {
    let dim = check_dims(points)?;
    let tol = S::default_tol();
    let points = dedup_points(points, &tol);
    let affine_dim = affine_dimension(&points, &tol).unwrap_or(0);
    if affine_dim < dim {
        return Ok(Hull {
            dim,
            facets: Vec::new(),
            degenerate: true,
            affine_dim,
        });
    }
    // Valid inequalities (a, b) with ⟨a, p⟩ ≤ b form a pointed cone whose
    // extreme rays are exactly the facets.
    let rows: Vec<Vector<S>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<S> = p.iter().map(|x| -x.clone()).collect();
            r.push(S::one());
            Vector(r)
        })
        .collect();
    let rays = dd::extreme_rays(&rows, &tol).map_err(|_| Error::Invalid("hull cone not pointed".into()))?;
    let mut facets = Vec::with_capacity(rays.len());
    for ray in rays {
        let mut normal = Vector(ray.0[..dim].to_vec());
        let mut offset = ray.0[dim].clone();
        if normal.is_zero_within(&tol) {
            continue;
        }
        let scale = if offset.abs() > tol {
            offset.abs()
        } else {
            normal.max_abs()
        };
        let inv = S::one() / scale;
        normal = normal.scale(&inv);
        offset = offset * inv;
        facets.push(Halfspace { normal, offset });
    }
    Ok(Hull {
        dim,
        facets,
        degenerate: false,
        affine_dim,
    })
}

/// Exact vertex set of a bounded H-polytope. An empty polytope yields an
/// empty vertex list.
pub fn vertex_enumerate<S: Scalar>(p: &PolytopeH<S>) -> Result<PolytopeV<S>> {
    let dim = p.dim();
    let tol = S::default_tol();
    let mut rows: Vec<Vector<S>> = p
        .halfspaces()
        .iter()
        .map(|h| {
            let mut r: Vec<S> = h.normal.iter().map(|x| -x.clone()).collect();
            r.push(h.offset.clone());
            Vector(r)
        })
        .collect();
    let mut t_row = vec![S::zero(); dim];
    t_row.push(S::one());
    rows.push(Vector(t_row));
    let rays = dd::extreme_rays(&rows, &tol).map_err(|_| Error::Unbounded)?;
    let mut vertices = Vec::new();
    for ray in rays {
        let t = ray.0[dim].clone();
        if t > tol {
            let inv = S::one() / t;
            vertices.push(Vector(ray.0[..dim].iter().map(|x| x.clone() * inv.clone()).collect()));
        } else {
            return Err(Error::Unbounded);
        }
    }
    let vertices = dedup_points(&vertices, &(tol * S::from_i64(100).expect("small integer")));
    PolytopeV::with_dim(dim, vertices)
}

/// Whether `x` lies in `conv(points)` (LP feasibility).
pub fn in_convex_hull<S: Scalar>(x: &Vector<S>, points: &[Vector<S>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let mut lp = LinearProgram::maximize_nonneg(Vector::zeros(n));
    for i in 0..x.dim() {
        lp.add_eq(Vector(points.iter().map(|p| p[i].clone()).collect()), x[i].clone());
    }
    lp.add_eq(Vector(vec![S::one(); n]), S::one());
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

/// `ℓ∞` distance from `x` to `conv(points)` by linear programming.
pub fn distance_to_hull<S: Scalar>(x: &Vector<S>, points: &[Vector<S>]) -> Result<S> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let n = points.len();
    let d = x.dim();
    // variables: λ_1..λ_n, s ; maximize -s
    let mut obj = vec![S::zero(); n + 1];
    obj[n] = -S::one();
    let mut lp = LinearProgram::maximize_nonneg(Vector(obj));
    for i in 0..d {
        let mut row: Vec<S> = points.iter().map(|p| p[i].clone()).collect();
        row.push(-S::one());
        lp.add_le(Vector(row.clone()), x[i].clone());
        let mut neg: Vec<S> = points.iter().map(|p| -p[i].clone()).collect();
        neg.push(-S::one());
        lp.add_le(Vector(neg), -x[i].clone());
    }
    let mut sum = vec![S::one(); n];
    sum.push(S::zero());
    lp.add_eq(Vector(sum), S::one());
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        _ => Err(Error::Infeasible),
    }
}

/// The points of `points` that are not convex combinations of the others.
pub fn extreme_subset<S: Scalar>(points: &[Vector<S>]) -> Vec<Vector<S>> {
    let tol = S::default_tol();
    let pts = dedup_points(points, &tol);
    if pts.len() <= 2 {
        return pts;
    }
    let mut kept: Vec<Vector<S>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<Vector<S>> = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !in_convex_hull(p, &others) {
            kept.push(p.clone());
        }
    }
    kept
}

/// Vertices of `conv(p) ∩ h`; may be empty.
pub fn cut<S: Scalar>(p: &PolytopeV<S>, h: &Halfspace<S>) -> Result<PolytopeV<S>> {
    if h.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: h.dim(),
        });
    }
    let tol = S::default_tol();
    let slacks: Vec<S> = p.vertices().iter().map(|v| h.slack(v)).collect();
    let mut candidates = Vec::new();
    let mut strictly_in = Vec::new();
    let mut strictly_out = Vec::new();
    for (v, s) in p.vertices().iter().zip(&slacks) {
        if *s <= tol {
            candidates.push(v.clone());
            if *s < -tol.clone() {
                strictly_in.push((v, s));
            }
        } else {
            strictly_out.push((v, s));
        }
    }
    if strictly_out.is_empty() {
        return PolytopeV::with_dim(p.dim(), p.vertices().to_vec());
    }
    // Edges crossing the boundary join a strictly-inside vertex to a
    // strictly-outside one; the crossing points are a superset of the new
    // vertices, pruned below.
    for (vin, sin) in &strictly_in {
        for (vout, sout) in &strictly_out {
            let t = (*sin).clone() / ((*sin).clone() - (*sout).clone());
            candidates.push(vin.add(&vout.sub(vin).scale(&t)));
        }
    }
    PolytopeV::with_dim(p.dim(), extreme_subset(&candidates))
}

/// The result of [`lp_max`].
#[derive(Clone, Debug, PartialEq)]
pub struct LpMax<S> {
    pub value: S,
    pub argmax: Vector<S>,
}

/// Maximum of `⟨objective, x⟩` over a V-polytope, with an attaining vertex.
pub fn lp_max_v<S: Scalar>(objective: &Vector<S>, p: &PolytopeV<S>) -> Result<LpMax<S>> {
    objective.check_dim(p.dim())?;
    let mut best: Option<LpMax<S>> = None;
    for v in p.vertices() {
        let val = objective.dot(v);
        if best.as_ref().is_none_or(|b| val > b.value) {
            best = Some(LpMax {
                value: val,
                argmax: v.clone(),
            });
        }
    }
    best.ok_or(Error::Infeasible)
}

/// Maximum of `⟨objective, x⟩` over an H-polytope via the simplex method.
pub fn lp_max_h<S: Scalar>(objective: &Vector<S>, p: &PolytopeH<S>) -> Result<LpMax<S>> {
    objective.check_dim(p.dim())?;
    let mut lp = LinearProgram::maximize_free(objective.clone());
    for h in p.halfspaces() {
        lp.add_le(h.normal.clone(), h.offset.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, x } => Ok(LpMax { value, argmax: x }),
        LpOutcome::Infeasible => Err(Error::Infeasible),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// Either representation of a polytope.
#[derive(Clone, Debug)]
pub enum Polytope<'a, S> {
    V(&'a PolytopeV<S>),
    H(&'a PolytopeH<S>),
}

pub fn lp_max<S: Scalar>(objective: &Vector<S>, p: Polytope<'_, S>) -> Result<LpMax<S>> {
    match p {
        Polytope::V(v) => lp_max_v(objective, v),
        Polytope::H(h) => lp_max_h(objective, h),
    }
}

#[cfg(test)]
mod tests;
