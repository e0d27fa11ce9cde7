//! Norms of an operator `T` relative to a norm-one operator `G`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generating::CheckOptions;
use crate::linalg::Vector;
use crate::operator::{Exactness, Operator};
use crate::oracle::SampledAttainment;
use crate::scalar::{max_scalar, Scalar};
use crate::space::Space;

/// A value together with how it was computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate<S> {
    pub value: S,
    pub exactness: Exactness,
}

impl<S: Scalar> Estimate<S> {
    fn exact(value: S) -> Self {
        Estimate {
            value,
            exactness: Exactness::Exact,
        }
    }

    fn sampled(value: f64) -> Self {
        Estimate {
            value: S::from_f64_lossy(value),
            exactness: Exactness::Inexact,
        }
    }
}

/// The default sweep `δ_k = 2^{-k}`, `k = 1..=20`.
pub fn default_delta_grid<S: Scalar>() -> Vec<S> {
    let two = S::one() + S::one();
    let mut d = S::one();
    (0..20)
        .map(|_| {
            d = d.clone() / two.clone();
            d.clone()
        })
        .collect()
}

fn same_domain<S: Scalar>(t: &Operator<S>, g: &Operator<S>) -> Result<()> {
    if t.domain() != g.domain() {
        return Err(Error::Invalid(format!(
            "T and G must share a domain: {} vs {}",
            t.domain().describe(),
            g.domain().describe()
        )));
    }
    Ok(())
}

fn max_image_norm<'a, S: Scalar + 'a>(t: &Operator<S>, points: impl IntoIterator<Item = &'a Vector<S>>) -> Result<S> {
    let mut key = S::zero();
    for x in points {
        key = max_scalar(key, t.codomain().norm_key(&t.apply(x)?)?);
    }
    Ok(t.codomain().norm_from_key(&key))
}

fn max_image_norm_f64(t: &Operator<f64>, points: &[&Vector<f64>]) -> f64 {
    points
        .iter()
        .map(|x| t.codomain().norm(&t.matrix().mul_vec(x)).expect("shape"))
        .fold(0.0, f64::max)
}

/// `‖T‖_{G,δ}`: the largest `‖Tx‖` over unit `x` with `‖Gx‖ ≥ 1 - δ`.
///
/// Exact for polyhedral domain and codomain of `G`: the maximum of the convex
/// map `x ↦ ‖Tx‖` over each piece of the region sits at a vertex.
pub fn relative_norm_delta<S: Scalar>(t: &Operator<S>, g: &Operator<S>, delta: &S, opts: &CheckOptions<S>) -> Result<Estimate<S>> {
    same_domain(t, g)?;
    if g.domain().is_polyhedral() && g.codomain().is_polyhedral() {
        let region = g.delta_attainment(delta)?;
        return Ok(Estimate::exact(max_image_norm(t, region.vertices())?));
    }
    g.check_norm_one(&opts.tol)?;
    let (gf, tf) = (g.cast::<f64>(), t.cast::<f64>());
    let att = SampledAttainment::new(&gf, &opts.sampling);
    let level = 1.0 - delta.to_f64_lossy();
    let points: Vec<&Vector<f64>> = att
        .samples
        .iter()
        .chain(&att.maximizers)
        .filter(|(_, v)| *v >= level)
        .map(|(x, _)| x)
        .collect();
    Ok(Estimate::sampled(max_image_norm_f64(&tf, &points)))
}

/// Points where `G` attains its norm, when that set is finite up to convex
/// hull: attaining extreme points of a polyhedral domain, or the unit-length
/// vectors `G*u` for a Euclidean domain and polyhedral codomain.
fn exact_attaining<S: Scalar>(g: &Operator<S>, tol: &S) -> Result<Option<Vec<Vector<S>>>> {
    if g.domain().is_polyhedral() {
        return Ok(Some(g.attainment(tol)?.attaining_vertices));
    }
    if g.domain().is_euclidean() && g.codomain().is_polyhedral() {
        let adj = g.matrix().transpose();
        return Ok(Some(
            g.codomain()
                .dual_extreme_points()?
                .iter()
                .map(|u| adj.mul_vec(u))
                .filter(|w| (w.norm_sq() - S::one()).abs() <= *tol)
                .collect(),
        ));
    }
    Ok(None)
}

/// `‖T‖_G = max{‖Tx‖ : x ∈ att(G)}`.
pub fn relative_norm<S: Scalar>(t: &Operator<S>, g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Estimate<S>> {
    same_domain(t, g)?;
    g.check_norm_one(&opts.tol)?;
    if let Some(att) = exact_attaining(g, &opts.tol)? {
        return Ok(Estimate::exact(max_image_norm(t, &att)?));
    }
    let (gf, tf) = (g.cast::<f64>(), t.cast::<f64>());
    let att = SampledAttainment::new(&gf, &opts.sampling);
    let points: Vec<&Vector<f64>> = att
        .samples
        .iter()
        .chain(&att.maximizers)
        .filter(|(_, v)| *v >= 1.0 - 1e-6)
        .map(|(x, _)| x)
        .collect();
    Ok(Estimate::sampled(max_image_norm_f64(&tf, &points)))
}

/// `‖T‖_{G,δ}` along a grid of `δ`, in grid order.
pub fn delta_sweep<S: Scalar>(t: &Operator<S>, g: &Operator<S>, grid: &[S], opts: &CheckOptions<S>) -> Result<Vec<(S, S)>> {
    grid.iter()
        .map(|d| Ok((d.clone(), relative_norm_delta(t, g, d, opts)?.value)))
        .collect()
}

/// `v_G(T)`: the largest `|⟨y*, Tx⟩|` over pairs with `⟨y*, Gx⟩ = 1`.
///
/// Exact for polyhedral spaces, where it suffices to scan pairs of extreme
/// points `v ∈ ext B_X`, `u ∈ ext B_{Y*}`.
pub fn numerical_radius<S: Scalar>(t: &Operator<S>, g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Estimate<S>> {
    same_domain(t, g)?;
    if t.codomain() != g.codomain() {
        return Err(Error::Invalid("T and G must share a codomain".into()));
    }
    g.check_norm_one(&opts.tol)?;
    if g.domain().is_polyhedral() && g.codomain().is_polyhedral() {
        let dual_ext = g.codomain().dual_extreme_points()?;
        let level = S::one() - opts.tol.clone();
        let mut best: Option<S> = None;
        for v in g.domain().extreme_points_checked()? {
            let gv = g.apply(&v)?;
            let tv = t.apply(&v)?;
            for u in &dual_ext {
                if u.dot(&gv) >= level {
                    let val = u.dot(&tv).abs();
                    best = Some(best.map_or(val.clone(), |b| max_scalar(b, val)));
                }
            }
        }
        return best
            .map(Estimate::exact)
            .ok_or_else(|| Error::Invalid("G attains its norm at no extreme pair".into()));
    }
    let (gf, tf) = (g.cast::<f64>(), t.cast::<f64>());
    let y = gf.codomain();
    let dual_ext = if y.is_polyhedral() {
        Some(y.dual_extreme_points()?)
    } else if y.is_euclidean() {
        None
    } else {
        return Err(Error::Unsupported(format!(
            "numerical radius needs a polyhedral or Euclidean codomain, got {}",
            y.describe()
        )));
    };
    let att = SampledAttainment::new(&gf, &opts.sampling);
    let level = 1.0 - 1e-6;
    let mut best = 0.0f64;
    for (x, v) in att.samples.iter().chain(&att.maximizers) {
        if *v < level {
            continue;
        }
        let gx = gf.matrix().mul_vec(x);
        let tx = tf.matrix().mul_vec(x);
        match &dual_ext {
            None => best = best.max((gx.dot(&tx) / gx.norm_sq().sqrt()).abs()),
            Some(ext) => {
                for u in ext {
                    if u.dot(&gx) >= level {
                        best = best.max(u.dot(&tx).abs());
                    }
                }
            }
        }
    }
    Ok(Estimate::sampled(best))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelativeNormReport<S> {
    pub t_norm: S,
    pub t_rel: S,
    pub v_g: S,
    pub delta_sweep: Vec<(S, S)>,
    pub exactness: Exactness,
    /// Whether `v_G(T) ≤ ‖T‖_G ≤ ‖T‖` held within tolerance.
    pub chain_holds: bool,
}

impl<S: Scalar> RelativeNormReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "t_norm": self.t_norm.to_json(),
            "t_rel": self.t_rel.to_json(),
            "v_g": self.v_g.to_json(),
            "exactness": self.exactness,
            "chain_holds": self.chain_holds,
            "delta_sweep": self.delta_sweep.iter().map(|(d, v)| json!({"delta": d.to_json(), "value": v.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn sweep_csv(&self) -> String {
        sweep_csv(&self.delta_sweep)
    }
}

pub fn sweep_csv<S: Scalar>(rows: &[(S, S)]) -> String {
    let mut out = String::from("delta,value\n");
    for (d, v) in rows {
        out.push_str(&format!("{d},{v}\n"));
    }
    out
}

/// `‖T‖`, `‖T‖_G`, `v_G(T)` and the `δ`-sweep. When `T` and `G` have
/// different codomains the numerical radius is undefined and reported as 0.
pub fn report<S: Scalar>(t: &Operator<S>, g: &Operator<S>, grid: &[S], opts: &CheckOptions<S>) -> Result<RelativeNormReport<S>> {
    let t_norm = t.operator_norm()?;
    let t_rel = relative_norm(t, g, opts)?;
    let v_g = if t.codomain() == g.codomain() {
        numerical_radius(t, g, opts)?
    } else {
        Estimate::exact(S::zero())
    };
    let delta_sweep = delta_sweep(t, g, grid, opts)?;
    let exactness = [t_norm.exactness, t_rel.exactness, v_g.exactness]
        .into_iter()
        .find(|e| *e != Exactness::Exact)
        .unwrap_or(Exactness::Exact);
    let tol = max_scalar(opts.tol.clone(), S::default_tol());
    let chain_holds =
        v_g.value <= t_rel.value.clone() + tol.clone() && t_rel.value <= t_norm.value.clone() + tol;
    Ok(RelativeNormReport {
        t_norm: t_norm.value,
        t_rel: t_rel.value,
        v_g: v_g.value,
        delta_sweep,
        exactness,
        chain_holds,
    })
}

/// A rank-one operator `x* ⊗ 1 : X → ℝ` whose relative norm drops below its
/// norm, built from an extreme point where `G` does not attain.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneWitness<S> {
    /// Extreme point of `B_X` where `‖Gv‖ < 1`.
    pub vertex: Vector<S>,
    /// Norm-one functional exposing `vertex`.
    pub xstar: Vector<S>,
    pub operator: Operator<S>,
    pub norm: S,
    pub relative_norm: S,
}

/// For a non-generating `G` on a polyhedral domain, the functional
/// averaging the facet normals through a non-attaining vertex `v` exposes
/// `v` alone, so it stays below 1 on every attaining vertex.
pub fn rank_one_witness<S: Scalar>(g: &Operator<S>, opts: &CheckOptions<S>) -> Result<Option<RankOneWitness<S>>> {
    if !g.domain().is_polyhedral() {
        return Err(Error::NotPolyhedral(g.domain().describe()));
    }
    g.check_norm_one(&opts.tol)?;
    let report = g.attainment(&opts.tol)?;
    let Some((v, _)) = report.non_attaining().next() else {
        return Ok(None);
    };
    let v = v.clone();
    let normals: Vec<Vector<S>> = g
        .domain()
        .dual_extreme_points()?
        .into_iter()
        .filter(|u| (u.dot(&v) - S::one()).abs() <= S::default_tol())
        .collect();
    let count = S::from_usize(normals.len()).expect("small count");
    let xstar = normals
        .iter()
        .fold(Vector::zeros(v.dim()), |acc, u| acc.add(u))
        .scale(&(S::one() / count));
    let line = Space::linf(1);
    let operator = Operator::rank_one(&xstar, &Vector(vec![S::one()]), g.domain().clone(), line)?;
    let norm = operator.operator_norm()?.value;
    let rel = max_image_norm(&operator, &report.attaining_vertices)?;
    Ok(Some(RankOneWitness {
        vertex: v,
        xstar,
        operator,
        norm,
        relative_norm: rel,
    }))
}
