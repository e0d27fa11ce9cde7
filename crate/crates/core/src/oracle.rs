//! Brute-force sampling oracles.
//!
//! Everything here runs in `f64` from a seeded generator and never returns
//! `VERIFIED`: sampling can exhibit a violation but cannot rule one out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::generating::{Certificate, CheckOptions, Method, Verdict, Witness};
use crate::geometry::{dedup_points, distance_to_hull};
use crate::linalg::Vector;
use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::space::Space;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    /// Number of sphere samples.
    pub count: usize,
    pub seed: u64,
    /// Threshold for the sampled `δ`-attainment set.
    pub delta: f64,
    /// Hull-membership slack for refutations.
    pub membership_tol: f64,
    /// Number of local ascents run from the best and from random samples.
    pub ascents: usize,
    /// Number of sphere points tested against the sampled hull.
    pub probes: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig::new(20_000, 0)
    }
}

impl SampleConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        SampleConfig {
            count: count.max(1),
            seed,
            delta: 1e-3,
            membership_tol: 1e-6,
            ascents: 400,
            probes: 256,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vector<f64> {
    Vector((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
}

/// `count` points of the unit sphere of `space`: Gaussian directions divided
/// by their norm.
pub fn sample_sphere(space: &Space<f64>, cfg: &SampleConfig) -> Vec<Vector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    while out.len() < cfg.count {
        let g = gaussian(&mut rng, space.dim());
        let n = space.norm(&g).expect("dimension matches");
        if n > 1e-300 {
            out.push(g.scale(&(1.0 / n)));
        }
    }
    out
}

/// Sampled approximation of the attainment set of `g` (which must have norm
/// one): sphere samples plus local maximizers of `‖Gx‖` found by pattern
/// search from the best and from random samples.
pub struct SampledAttainment {
    /// Sphere samples and their values `‖Gx‖`.
    pub samples: Vec<(Vector<f64>, f64)>,
    /// End points of the local ascents, deduplicated, with their values.
    pub maximizers: Vec<(Vector<f64>, f64)>,
}

impl SampledAttainment {
    pub fn new(g: &Operator<f64>, cfg: &SampleConfig) -> Self {
        let value = |x: &Vector<f64>| g.codomain().norm(&g.matrix().mul_vec(x)).expect("shape");
        let samples: Vec<(Vector<f64>, f64)> = sample_sphere(g.domain(), cfg)
            .into_iter()
            .map(|x| {
                let v = value(&x);
                (x, v)
            })
            .collect();
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&a, &b| samples[b].1.total_cmp(&samples[a].1));
        let half = cfg.ascents / 2;
        let mut starts: Vec<usize> = order.iter().take(half).copied().collect();
        starts.extend((0..samples.len()).take(cfg.ascents - half));
        starts.sort_unstable();
        starts.dedup();

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_a5ce_u64);
        let mut ends = Vec::with_capacity(starts.len());
        for i in starts {
            let w = gaussian(&mut rng, g.domain().dim());
            let x = ascend(g, &samples[i].0, &w, &mut rng);
            let v = value(&x);
            ends.push((x, v));
        }
        let points: Vec<Vector<f64>> = ends.iter().map(|(x, _)| x.clone()).collect();
        let maximizers = dedup_points(&points, &1e-7)
            .into_iter()
            .map(|x| {
                let v = value(&x);
                (x, v)
            })
            .collect();
        SampledAttainment { samples, maximizers }
    }

    /// Maximizers with `‖Gx‖ ≥ 1 - delta`.
    pub fn attaining(&self, delta: f64) -> Vec<Vector<f64>> {
        self.maximizers
            .iter()
            .filter(|(_, v)| *v >= 1.0 - delta)
            .map(|(x, _)| x.clone())
            .collect()
    }
}

/// Pattern search for a local maximum of `‖Gx‖ + η⟨w, x⟩` on the sphere.
/// The small random tilt breaks ties so that flat faces resolve to vertices.
fn ascend(g: &Operator<f64>, start: &Vector<f64>, w: &Vector<f64>, rng: &mut ChaCha8Rng) -> Vector<f64> {
    const ETA: f64 = 1e-4;
    let x_space = g.domain();
    let dim = x_space.dim();
    let objective = |x: &Vector<f64>| {
        g.codomain().norm(&g.matrix().mul_vec(x)).expect("shape") + ETA * w.dot(x)
    };
    let mut x = start.clone();
    let mut fx = objective(&x);
    let mut step = 0.25;
    let mut evals = 0;
    while step > 1e-13 && evals < 20_000 {
        let mut dirs: Vec<Vector<f64>> = (0..dim)
            .flat_map(|i| {
                let e = Vector::unit(dim, i);
                [e.clone(), e.neg()]
            })
            .collect();
        for _ in 0..2 {
            let r = gaussian(rng, dim);
            let n = r.norm_sq().sqrt();
            if n > 0.0 {
                let r = r.scale(&(1.0 / n));
                dirs.push(r.neg());
                dirs.push(r);
            }
        }
        let mut improved = false;
        for d in &dirs {
            let y = x.add(&d.scale(&step));
            let Ok(y) = x_space.normalize(&y) else { continue };
            evals += 1;
            let fy = objective(&y);
            if fy > fx {
                x = y;
                fx = fy;
                improved = true;
            }
        }
        if improved {
            step = (step * 2.0).min(0.5);
        } else {
            step /= 2.0;
        }
    }
    x
}

/// Tries to refute that `g` is generating by finding a sphere point far from
/// the hull of the sampled `δ`-attainment set. Never returns `VERIFIED`.
pub fn sampled_generating<S: Scalar>(g: &Operator<S>, cfg: &SampleConfig) -> Result<Certificate<S>> {
    g.check_norm_one(&S::default_tol())?;
    let opts = CheckOptions::<S> {
        tol: S::default_tol(),
        sampling: cfg.clone(),
    };
    let gf = g.cast::<f64>();
    let att = SampledAttainment::new(&gf, cfg);
    let hull_pts = att.attaining(cfg.delta);
    let near_pts: Vec<&Vector<f64>> = att
        .samples
        .iter()
        .filter(|(_, v)| *v >= 1.0 - cfg.delta)
        .map(|(x, _)| x)
        .chain(hull_pts.iter())
        .collect();
    let inconclusive = |detail: String| Certificate {
        verdict: Verdict::Inconclusive,
        method: Method::Sampled,
        witness: None,
        detail,
        config: opts.sampled_info(),
    };
    if hull_pts.is_empty() {
        return Ok(inconclusive("no sampled point attains the norm".into()));
    }

    // Probe the points where ‖Gx‖ is smallest.
    let mut probes: Vec<&(Vector<f64>, f64)> = att.samples.iter().collect();
    probes.sort_by(|a, b| a.1.total_cmp(&b.1));
    probes.truncate(cfg.probes);
    // The hull of finitely many sampled points never reaches a curved sphere;
    // require the probe to be visibly separated from every sampled near-maximizer.
    let gap = 0.05;
    for (x, _) in probes {
        let far = near_pts.iter().all(|p| p.sub(x).max_abs() > gap);
        if !far {
            continue;
        }
        let dist = distance_to_hull(x, &hull_pts)?;
        if dist > cfg.membership_tol {
            return Ok(Certificate {
                verdict: Verdict::Refuted,
                method: Method::Sampled,
                witness: Some(Witness::Sample(x.clone())),
                detail: format!(
                    "sampled sphere point at distance {dist:.3e} from the hull of {} sampled attaining points",
                    hull_pts.len()
                ),
                config: opts.sampled_info(),
            });
        }
    }
    Ok(inconclusive(format!(
        "all {} probes lie in the hull of the sampled attainment set",
        cfg.probes.min(att.samples.len())
    )))
}

/// Sampled estimate of the generating radius:
/// `min_d h_A(d) / ‖d‖_*` over sampled directions `d`, refined by a local
/// search, where `A` is the sampled attainment set.
pub fn sampled_radius<S: Scalar>(g: &Operator<S>, cfg: &SampleConfig) -> Result<f64> {
    g.check_norm_one(&S::default_tol())?;
    let gf = g.cast::<f64>();
    let att = SampledAttainment::new(&gf, cfg);
    let pts = att.attaining(1e-6);
    if pts.is_empty() {
        return Ok(0.0);
    }
    let dual = gf.domain().dual();
    let ratio = |d: &Vector<f64>| -> f64 {
        let h = pts.iter().map(|p| p.dot(d)).fold(f64::NEG_INFINITY, f64::max);
        h / dual.norm(d).expect("dimension matches")
    };
    let dir_cfg = SampleConfig {
        seed: cfg.seed.wrapping_add(1),
        ..cfg.clone()
    };
    let mut scored: Vec<(f64, Vector<f64>)> = sample_sphere(&Space::l2(gf.domain().dim()), &dir_cfg)
        .into_iter()
        .map(|d| (ratio(&d), d))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(16);

    let dim = gf.domain().dim();
    let mut best = f64::INFINITY;
    for (mut r, mut d) in scored {
        // The ratio is scale invariant, so keep `d` on the Euclidean sphere or
        // the search can drift off to infinity.
        let mut step = 0.1;
        let mut evals = 0;
        while step > 1e-10 && evals < 20_000 {
            let mut improved = false;
            for i in 0..dim {
                for s in [step, -step] {
                    let mut e = d.clone();
                    e[i] += s;
                    let len = e.norm_sq().sqrt();
                    if len == 0.0 {
                        continue;
                    }
                    let e = e.scale(&(1.0 / len));
                    evals += 1;
                    let re = ratio(&e);
                    if re < r {
                        r = re;
                        d = e;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        best = best.min(r);
    }
    Ok(best.max(0.0))
}
