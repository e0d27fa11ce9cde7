//! Random spaces and operators with small integer data, for property runs.

use rand::Rng;

use crate::linalg::{Matrix, Vector};
use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::space::{Space, SumKind};

fn small_int<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    rng.random_range(-bound..=bound)
}

pub fn random_vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: i64) -> Vector<S> {
    Vector((0..dim).map(|_| S::from_i64(small_int(rng, bound)).expect("small")).collect())
}

/// A random centrally symmetric polytope ball spanned by at most
/// `max_vertices / 2` integer points and their negatives.
pub fn random_polytope_space<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, max_vertices: usize) -> Space<S> {
    let max_pairs = (max_vertices / 2).max(dim);
    loop {
        let pairs = rng.random_range(dim..=max_pairs);
        let mut pts = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs {
            let v: Vector<S> = random_vector(rng, dim, 3);
            if v.is_zero_within(&S::zero()) {
                continue;
            }
            pts.push(v.neg());
            pts.push(v);
        }
        if pts.len() < 2 * dim {
            continue;
        }
        if let Ok(s) = Space::polytope_v(pts) {
            if s.extreme_point_count().map(|c| c as usize <= max_vertices).unwrap_or(false) {
                return s;
            }
        }
    }
}

/// `ℓ1`, `ℓ∞`, a random polytope (by vertices or facets) or, in dimension
/// at least 2, a two-part direct sum of those.
pub fn random_polyhedral_space<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, max_vertices: usize) -> Space<S> {
    let choices = if dim >= 2 { 5 } else { 4 };
    match rng.random_range(0..choices) {
        0 => Space::l1(dim),
        1 => Space::linf(dim),
        2 => random_polytope_space(rng, dim, max_vertices),
        3 => random_polytope_space::<S, R>(rng, dim, max_vertices).dual(),
        _ => {
            let k = rng.random_range(1..dim);
            let kind = if rng.random_bool(0.5) { SumKind::L1Sum } else { SumKind::LinfSum };
            let a = random_simple_space(rng, k);
            let b = random_simple_space(rng, dim - k);
            Space::direct_sum(kind, vec![a, b]).expect("nonempty parts")
        }
    }
}

fn random_simple_space<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Space<S> {
    if rng.random_bool(0.5) {
        Space::l1(dim)
    } else {
        Space::linf(dim)
    }
}

pub fn random_matrix<S: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<S> {
    loop {
        let m = Matrix::from_rows(
            (0..rows)
                .map(|_| random_vector::<S, R>(rng, cols, bound).0)
                .collect(),
        )
        .expect("rectangular");
        if !m.max_abs().is_zero() {
            return m;
        }
    }
}

/// A random operator between the given spaces, scaled to norm one. Needs an
/// exact norm path (polyhedral domain) for exact normalization.
pub fn random_norm_one_operator<S: Scalar, R: Rng + ?Sized>(rng: &mut R, domain: Space<S>, codomain: Space<S>) -> Operator<S> {
    let m = random_matrix(rng, codomain.dim(), domain.dim(), 3);
    Operator::new(domain, codomain, m)
        .expect("shapes match")
        .normalize()
        .expect("nonzero operator")
}

/// A norm-one operator that is often generating: an `ℓ1` domain with
/// columns on the unit sphere, a signed permutation, or the identity.
pub fn random_structured_operator<S: Scalar, R: Rng + ?Sized>(rng: &mut R, domain: Space<S>, codomain: Space<S>) -> Operator<S> {
    if domain.is_l1() && codomain.is_polyhedral() {
        let cols: Vec<Vector<S>> = (0..domain.dim())
            .map(|_| loop {
                let v: Vector<S> = random_vector(rng, codomain.dim(), 3);
                if let Ok(u) = codomain.normalize(&v) {
                    break u;
                }
            })
            .collect();
        let m = Matrix::from_columns(&cols, codomain.dim());
        return Operator::new(domain, codomain, m).expect("shapes match");
    }
    if domain == codomain {
        return Operator::identity(domain);
    }
    random_norm_one_operator(rng, domain, codomain)
}
