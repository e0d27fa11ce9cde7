//! Named example operators with their known verdicts.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generating::Verdict;
use crate::linalg::{Matrix, Vector};
use crate::operator::Operator;
use crate::scalar::Scalar;
use crate::space::{vector_to_json, Space, SumKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Expectation<S> {
    Verdict(Verdict),
    Value(S),
    Witness(Vector<S>),
}

impl<S: Scalar> Expectation<S> {
    pub fn to_json(&self) -> Value {
        match self {
            Expectation::Verdict(v) => json!(v.as_str()),
            Expectation::Value(x) => x.to_json(),
            Expectation::Witness(w) => vector_to_json(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedExample<S> {
    pub name: String,
    pub operator: Operator<S>,
    /// Keys: `is_generating`, `generating_radius`, `witness`.
    pub expected: BTreeMap<String, Expectation<S>>,
    pub provenance: String,
}

impl<S: Scalar> NamedExample<S> {
    fn new(name: String, operator: Operator<S>, provenance: &str) -> Self {
        NamedExample {
            name,
            operator,
            expected: BTreeMap::new(),
            provenance: provenance.to_string(),
        }
    }

    fn expect(mut self, key: &str, e: Expectation<S>) -> Self {
        self.expected.insert(key.to_string(), e);
        self
    }

    pub fn expected_verdict(&self) -> Option<Verdict> {
        match self.expected.get("is_generating") {
            Some(Expectation::Verdict(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "operator": self.operator.to_json(),
            "expected": self.expected.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<serde_json::Map<_, _>>(),
            "provenance": self.provenance,
        })
    }
}

/// Catalog entries: name, parameter synopsis, description.
pub const CATALOG: &[(&str, &str, &str)] = &[
    ("l1_to_linf_inclusion", "<n>", "identity from l1^n to linf^n"),
    ("c0_diagonal", "<n>", "diag(1, 1/2, ..., 1/n) on linf^n"),
    ("l1_diagonal", "<n>", "diag(1, 1/2, ..., 1/n) on l1^n"),
    ("hilbert_counterexample", "<r>", "r*Id + (1-r)*e1⊗e1 on l2^2, 0 < r < 1"),
    ("cos_sin", "<n>", "columns (cos t_k, sin t_k), t_k = (k-1)/(n-1), from l1^n to l2^2"),
    ("block_sum", "<l1sum|linfsum> <name:param>...", "block-diagonal sum of other entries"),
];

fn parse_n(params: &[String]) -> Result<usize> {
    let p = params
        .first()
        .ok_or_else(|| Error::Invalid("missing parameter n".into()))?;
    let n: usize = p
        .parse()
        .map_err(|_| Error::Invalid(format!("n must be a positive integer, got `{p}`")))?;
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    Ok(n)
}

fn harmonic_diagonal<S: Scalar>(n: usize) -> Matrix<S> {
    Matrix::diagonal((1..=n).map(|k| S::from_ratio(1, k as i64)).collect())
}

pub fn l1_to_linf_inclusion<S: Scalar>(n: usize) -> NamedExample<S> {
    let op = Operator::new(Space::l1(n), Space::linf(n), Matrix::identity(n)).expect("square");
    NamedExample::new(format!("l1_to_linf_inclusion({n})"), op, "natural embedding of l1 into c0, truncated")
        .expect("is_generating", Expectation::Verdict(Verdict::Verified))
        .expect("generating_radius", Expectation::Value(S::one()))
}

pub fn c0_diagonal<S: Scalar>(n: usize) -> NamedExample<S> {
    let op = Operator::new(Space::linf(n), Space::linf(n), harmonic_diagonal(n)).expect("square");
    NamedExample::new(format!("c0_diagonal({n})"), op, "harmonic diagonal on c0, truncated")
        .expect("is_generating", Expectation::Verdict(Verdict::Verified))
        .expect("generating_radius", Expectation::Value(S::one()))
}

pub fn l1_diagonal<S: Scalar>(n: usize) -> NamedExample<S> {
    let op = Operator::new(Space::l1(n), Space::l1(n), harmonic_diagonal(n)).expect("square");
    let ex = NamedExample::new(format!("l1_diagonal({n})"), op, "adjoint of the harmonic diagonal on c0, truncated");
    if n == 1 {
        return ex
            .expect("is_generating", Expectation::Verdict(Verdict::Verified))
            .expect("generating_radius", Expectation::Value(S::one()));
    }
    ex.expect("is_generating", Expectation::Verdict(Verdict::Refuted))
        .expect("witness", Expectation::Witness(Vector::unit(n, 1)))
        .expect("generating_radius", Expectation::Value(S::zero()))
}

pub fn hilbert_counterexample<S: Scalar>(r: S) -> Result<NamedExample<S>> {
    if r <= S::zero() || r >= S::one() {
        return Err(Error::Invalid(format!("r must lie in (0, 1), got {r}")));
    }
    let m = Matrix::diagonal(vec![S::one(), r.clone()]);
    let op = Operator::new(Space::l2(2), Space::l2(2), m)?;
    Ok(NamedExample::new(format!("hilbert_counterexample({r})"), op, "rank-one perturbation of a multiple of the identity on the Euclidean plane")
        .expect("is_generating", Expectation::Verdict(Verdict::Refuted))
        .expect("generating_radius", Expectation::Value(S::zero())))
}

/// `(cos t, sin t)`. Exact backends use the rational point
/// `((1-s²)/(1+s²), 2s/(1+s²))` with `s ≈ tan(t/2)`, which lies exactly on
/// the unit circle.
pub fn cos_sin_point<S: Scalar>(t: f64) -> Vector<S> {
    if S::is_exact() {
        let scale = 1i64 << 20;
        let s = S::from_ratio(((t / 2.0).tan() * scale as f64).round() as i64, scale);
        let s2 = s.clone() * s.clone();
        let den = S::one() + s2.clone();
        let two = S::one() + S::one();
        Vector(vec![(S::one() - s2) / den.clone(), two * s / den])
    } else {
        Vector(vec![S::from_f64_lossy(t.cos()), S::from_f64_lossy(t.sin())])
    }
}

pub fn cos_sin<S: Scalar>(n: usize) -> NamedExample<S> {
    let cols: Vec<Vector<S>> = (0..n)
        .map(|k| {
            let t = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
            cos_sin_point(t)
        })
        .collect();
    let op = Operator::new(Space::l1(n), Space::l2(2), Matrix::from_columns(&cols, 2)).expect("shape");
    NamedExample::new(format!("cos_sin({n})"), op, "atomic version of t ↦ (cos t, sin t) on [0, 1]")
        .expect("is_generating", Expectation::Verdict(Verdict::Verified))
        .expect("generating_radius", Expectation::Value(S::one()))
}

pub fn block_sum<S: Scalar>(parts: Vec<NamedExample<S>>, kind: SumKind) -> Result<NamedExample<S>> {
    let ops: Vec<Operator<S>> = parts.iter().map(|p| p.operator.clone()).collect();
    let op = Operator::block_sum(&ops, kind)?;
    let verdicts: Vec<Option<Verdict>> = parts.iter().map(NamedExample::expected_verdict).collect();
    let name = format!(
        "block_sum({}; {})",
        kind.as_str(),
        parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", ")
    );
    let polyhedral = op.domain().is_polyhedral();
    let mut ex = NamedExample::new(name, op, "block-diagonal sum over a finite direct sum");
    // An extreme point of an ℓ1-sum lives in a single block, so every block
    // must attain. An extreme point of an ℓ∞-sum is a tuple of extreme
    // points, which attains as soon as one coordinate does.
    if polyhedral && verdicts.iter().all(Option::is_some) {
        let verified = |v: &Option<Verdict>| *v == Some(Verdict::Verified);
        let generating = match kind {
            SumKind::L1Sum => verdicts.iter().all(verified),
            SumKind::LinfSum => verdicts.iter().any(verified),
        };
        ex = ex.expect(
            "is_generating",
            Expectation::Verdict(if generating { Verdict::Verified } else { Verdict::Refuted }),
        );
    }
    Ok(ex)
}

/// Builds a catalog entry from its name and textual parameters.
///
/// `block_sum` takes a sum kind followed by `name:param` items, e.g.
/// `block_sum l1sum l1_to_linf_inclusion:2 l1_diagonal:3`.
pub fn build<S: Scalar>(name: &str, params: &[String]) -> Result<NamedExample<S>> {
    match name {
        "l1_to_linf_inclusion" => Ok(l1_to_linf_inclusion(parse_n(params)?)),
        "c0_diagonal" => Ok(c0_diagonal(parse_n(params)?)),
        "l1_diagonal" => Ok(l1_diagonal(parse_n(params)?)),
        "cos_sin" => Ok(cos_sin(parse_n(params)?)),
        "hilbert_counterexample" => {
            let p = params
                .first()
                .ok_or_else(|| Error::Invalid("missing parameter r".into()))?;
            let r = S::parse_text(p).ok_or_else(|| Error::Invalid(format!("r must be a number, got `{p}`")))?;
            hilbert_counterexample(r)
        }
        "block_sum" => {
            let (kind, items) = params
                .split_first()
                .ok_or_else(|| Error::Invalid("block_sum needs a sum kind".into()))?;
            if items.is_empty() {
                return Err(Error::Invalid("block_sum needs at least one part".into()));
            }
            let parts = items
                .iter()
                .map(|item| {
                    let mut it = item.split(':');
                    let sub = it.next().unwrap_or_default();
                    let args: Vec<String> = it.map(str::to_string).collect();
                    if sub == "block_sum" {
                        return Err(Error::Invalid("nested block_sum is not supported on the command line".into()));
                    }
                    build(sub, &args)
                })
                .collect::<Result<Vec<_>>>()?;
            block_sum(parts, kind.parse()?)
        }
        other => Err(Error::Invalid(format!(
            "unknown example `{other}`; known: {}",
            CATALOG.iter().map(|c| c.0).collect::<Vec<_>>().join(", ")
        ))),
    }
}
