//! Double-description method for pointed polyhedral cones.
//!
//! Given rows `a_1..a_m` spanning `ℝ^D`, computes the extreme rays of
//! `{y : ⟨a_i, y⟩ ≥ 0 for all i}`. Rows are inserted one at a time; rays on
//! opposite sides of the new hyperplane are combined only when adjacent,
//! where adjacency uses the combinatorial test on zero sets.

use crate::linalg::{independent_rows, invert, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPointed;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(len: usize) -> Self {
        ZeroSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray<S> {
    v: Vector<S>,
    zeros: ZeroSet,
}

fn normalized<S: Scalar>(v: Vector<S>) -> Vector<S> {
    let m = v.max_abs();
    if m.is_zero() {
        v
    } else {
        v.scale(&(S::one() / m))
    }
}

/// Extreme rays of `{y : rows·y ≥ 0}`, each scaled to unit max-norm.
pub fn extreme_rays<S: Scalar>(rows: &[Vector<S>], tol: &S) -> Result<Vec<Vector<S>>, NotPointed> {
    let Some(dim) = rows.first().map(Vector::dim) else {
        return Err(NotPointed);
    };
    let rows: Vec<Vector<S>> = rows.iter().cloned().map(normalized).collect();
    let basis = independent_rows(&rows, tol);
    if basis.len() < dim {
        return Err(NotPointed);
    }
    let m = rows.len();

    // Initial cone {y : A_B y ≥ 0}: its rays are the columns of A_B⁻¹.
    let a_b = Matrix::from_rows(basis.iter().map(|&i| rows[i].0.clone()).collect())
        .expect("rows share a dimension");
    let inv = invert(&a_b, tol).ok_or(NotPointed)?;
    let mut rays: Vec<Ray<S>> = (0..dim)
        .map(|j| {
            let mut zeros = ZeroSet::new(m);
            for (k, &row_idx) in basis.iter().enumerate() {
                if k != j {
                    zeros.insert(row_idx);
                }
            }
            Ray {
                v: normalized(inv.column(j)),
                zeros,
            }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &i in &basis {
        in_basis[i] = true;
    }

    for (i, row) in rows.iter().enumerate() {
        if in_basis[i] {
            continue;
        }
        let values: Vec<S> = rays.iter().map(|r| row.dot(&r.v)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, val) in values.iter().enumerate() {
            if *val > *tol {
                pos.push(k);
            } else if *val < -tol.clone() {
                neg.push(k);
            } else {
                rays[k].zeros.insert(i);
            }
        }
        if neg.is_empty() {
            continue;
        }

        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersection(&rays[n].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !common.is_subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = values[p].clone();
                let sn = -values[n].clone();
                let v = rays[n].v.scale(&sp).add(&rays[p].v.scale(&sn));
                let mut zeros = common;
                zeros.insert(i);
                created.push(Ray {
                    v: normalized(v),
                    zeros,
                });
            }
        }

        let mut keep = vec![true; rays.len()];
        for &n in &neg {
            keep[n] = false;
        }
        let mut next: Vec<Ray<S>> = rays
            .into_iter()
            .zip(keep)
            .filter_map(|(r, k)| k.then_some(r))
            .collect();
        next.extend(created);
        rays = next;
    }

    let mut out: Vec<Vector<S>> = Vec::with_capacity(rays.len());
    for r in rays {
        if r.v.is_zero_within(tol) {
            continue;
        }
        if !out.iter().any(|o| o.approx_eq(&r.v, &scaled_tol(tol))) {
            out.push(r.v);
        }
    }
    Ok(out)
}

fn scaled_tol<S: Scalar>(tol: &S) -> S {
    tol.clone() * S::from_i64(100).expect("small integer")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn v(xs: &[i64]) -> Vector<Rational> {
        Vector(xs.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn orthant_rays_are_unit_vectors() {
        let rows = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let mut rays = extreme_rays(&rows, &Rational::from_integer(0.into())).unwrap();
        rays.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        assert_eq!(rays, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn square_pyramid_cone_has_four_rays() {
        // cone over the square |x|,|y| ≤ z
        let rows = vec![v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let rays = extreme_rays(&rows, &Rational::from_integer(0.into())).unwrap();
        assert_eq!(rays.len(), 4);
        for r in &rays {
            assert_eq!(r[2], Rational::from_integer(1.into()));
            assert_eq!(num_traits::Signed::abs(&r[0]), Rational::from_integer(1.into()));
            assert_eq!(num_traits::Signed::abs(&r[1]), Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let rows = vec![v(&[1, 0])];
        assert_eq!(extreme_rays(&rows, &Rational::from_integer(0.into())), Err(NotPointed));
    }
}
