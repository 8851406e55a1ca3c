//! Lie brackets of realized generators, their defects against the target
//! structure constants, and the first-order admissibility conditions.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generators::{levi_civita, Combo, Frame, GeneratorId, SubalgebraSpec, VectorField};
use crate::numkernel::{DomainError, Dual1};
use crate::phasespace::{AccelerationLaw, Kinematics, PhasePoint, Sampler, SamplingDomain, SamplingError};

/// A residual is called a witness of failure only above this level.
pub const WITNESS_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnomalyError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("fields act on different particle counts ({0} vs {1})")]
    ParticleMismatch(usize, usize),
    #[error("basis index {index} out of range for `{spec}` (dimension {dim})")]
    BadPair { spec: String, index: usize, dim: usize },
    #[error("too many points outside the law's domain: {rejected} rejected for {accepted} accepted")]
    TooManyRejections { rejected: u64, accepted: usize },
}

/// `X(f)` for a field with coefficients `x` at one point.
fn derive(x: &[Dual1], f: &Dual1) -> f64 {
    x.iter().enumerate().map(|(m, c)| c.value() * f.partial(m)).sum()
}

/// `[X, Y]_k = X(Y_k) - Y(X_k)` from jets of both coefficient vectors.
fn bracket_of_jets(x: &[Dual1], y: &[Dual1]) -> Vec<f64> {
    x.iter().zip(y).map(|(xk, yk)| derive(x, yk) - derive(y, xk)).collect()
}

/// Coefficients of `[X, Y]` at `p`.
pub fn lie_bracket(x: &VectorField, y: &VectorField, p: &PhasePoint) -> Result<Vec<f64>, AnomalyError> {
    if x.particles() != y.particles() {
        return Err(AnomalyError::ParticleMismatch(x.particles(), y.particles()));
    }
    Ok(bracket_of_jets(&x.jet(p)?, &y.jet(p)?))
}

fn check_index(spec: &SubalgebraSpec, index: usize) -> Result<(), AnomalyError> {
    if index >= spec.dim() {
        return Err(AnomalyError::BadPair { spec: spec.name().to_string(), index, dim: spec.dim() });
    }
    Ok(())
}

/// `[e_a, e_b](p) - Σ_c c[a][b][c] e_c(p)`.
pub fn bracket_defect(
    spec: &SubalgebraSpec,
    law: &Arc<AccelerationLaw>,
    p: &PhasePoint,
    (a, b): (usize, usize),
) -> Result<Vec<f64>, AnomalyError> {
    check_index(spec, a)?;
    check_index(spec, b)?;
    let frame = Frame::new(law, p)?;
    let jets = spec.fields(law).iter().map(|f| f.jet_in(&frame)).collect::<Result<Vec<_>, _>>()?;
    Ok(defect_from_jets(spec, &jets, a, b))
}

fn defect_from_jets(spec: &SubalgebraSpec, jets: &[Vec<Dual1>], a: usize, b: usize) -> Vec<f64> {
    let mut d = bracket_of_jets(&jets[a], &jets[b]);
    for (c, &k) in spec.constants(a, b).iter().enumerate() {
        if k != 0.0 {
            for (dm, e) in d.iter_mut().zip(&jets[c]) {
                *dm -= k * e.value();
            }
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    I,
    II,
    IIIG,
    IIIP,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::I, Condition::II, Condition::IIIG, Condition::IIIP];

    /// Conditions that must vanish for admissibility under the full group of
    /// the given kinematics.
    pub fn required(k: Kinematics) -> &'static [Condition] {
        match k {
            Kinematics::Galilean => &[Condition::I, Condition::II, Condition::IIIG],
            Kinematics::Poincare => &[Condition::I, Condition::II, Condition::IIIP],
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Residual tensors, each indexed `[a][i][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResiduals {
    pub i: Vec<[[f64; 3]; 3]>,
    pub ii: Vec<[[f64; 3]; 3]>,
    pub iiig: Vec<[[f64; 3]; 3]>,
    pub iiip: Vec<[[f64; 3]; 3]>,
}

impl ConditionResiduals {
    pub fn get(&self, c: Condition) -> &[[[f64; 3]; 3]] {
        match c {
            Condition::I => &self.i,
            Condition::II => &self.ii,
            Condition::IIIG => &self.iiig,
            Condition::IIIP => &self.iiip,
        }
    }

    pub fn max_abs(&self, c: Condition) -> f64 {
        self.get(c).iter().flatten().flatten().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn residuals_in(law: &Arc<AccelerationLaw>, frame: &Frame) -> Result<ConditionResiduals, DomainError> {
    let n = law.particles();
    let jet = |id| VectorField::new(Combo::single(id), Arc::clone(law)).jet_in(frame);
    let ps = (0..3).map(|i| jet(GeneratorId::P(i))).collect::<Result<Vec<_>, _>>()?;
    let js = (0..3).map(|i| jet(GeneratorId::J(i))).collect::<Result<Vec<_>, _>>()?;
    let gs = (0..3).map(|i| jet(GeneratorId::G(i))).collect::<Result<Vec<_>, _>>()?;
    let ks = (0..3).map(|i| jet(GeneratorId::K(i))).collect::<Result<Vec<_>, _>>()?;
    let h = jet(GeneratorId::H)?;
    let x = |a: usize, i: usize| frame.coords[3 * a + i].value();
    let v = |a: usize, i: usize| frame.coords[3 * n + 3 * a + i].value();
    let acc = &frame.acc;
    let mut out = ConditionResiduals {
        i: vec![[[0.0; 3]; 3]; n],
        ii: vec![[[0.0; 3]; 3]; n],
        iiig: vec![[[0.0; 3]; 3]; n],
        iiip: vec![[[0.0; 3]; 3]; n],
    };
    for a in 0..n {
        for l in 0..3 {
            let f = &acc[a][l];
            let hf = derive(&h, f);
            for i in 0..3 {
                out.i[a][i][l] = derive(&ps[i], f);
                let rot: f64 = (0..3).map(|j| levi_civita(i, j, l) * acc[a][j].value()).sum();
                out.ii[a][i][l] = derive(&js[i], f) - rot;
                out.iiig[a][i][l] = derive(&gs[i], f);
                out.iiip[a][i][l] =
                    2.0 * v(a, i) * f.value() + x(a, i) * hf - derive(&ks[i], f) + v(a, l) * acc[a][i].value();
            }
        }
    }
    Ok(out)
}

/// Residuals of Conditions I, II, IIIG and IIIP at `p`.
pub fn condition_residuals(law: &Arc<AccelerationLaw>, p: &PhasePoint) -> Result<ConditionResiduals, DomainError> {
    residuals_in(law, &Frame::new(law, p)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub lhs: String,
    pub rhs: String,
    pub sup_defect: f64,
    pub worst_point: Option<PhasePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRecord {
    pub condition: Condition,
    pub sup_residual: f64,
    pub worst_point: Option<PhasePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Above the tolerance but below the witness threshold.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Pair `"[a, b]"` or condition id.
    pub source: String,
    pub value: f64,
    pub point: PhasePoint,
}

/// Verdict over a set of `(name, sup, worst point)` records.
pub fn judge<'a>(
    records: impl IntoIterator<Item = (String, f64, Option<&'a PhasePoint>)>,
    tol: f64,
) -> (Verdict, Option<Witness>) {
    let mut worst: Option<(String, f64, Option<&PhasePoint>)> = None;
    for (name, sup, pt) in records {
        if worst.as_ref().is_none_or(|w| sup > w.1) {
            worst = Some((name, sup, pt));
        }
    }
    match worst {
        Some((_, sup, _)) if sup <= tol => (Verdict::Pass, None),
        None => (Verdict::Pass, None),
        Some((source, sup, pt)) => {
            let witness = pt.map(|p| Witness { source, value: sup, point: p.clone() });
            if sup > WITNESS_THRESHOLD {
                (Verdict::Fail, witness)
            } else {
                (Verdict::Inconclusive, witness)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnomalyReport {
    pub spec: String,
    pub law: String,
    pub samples: usize,
    pub seed: u64,
    pub rejected_samples: u64,
    pub tol: f64,
    pub pairs: Vec<PairRecord>,
    pub conditions: Vec<ConditionRecord>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl AnomalyReport {
    pub fn pair(&self, lhs: &str, rhs: &str) -> Option<&PairRecord> {
        self.pairs.iter().find(|r| (r.lhs == lhs && r.rhs == rhs) || (r.lhs == rhs && r.rhs == lhs))
    }

    pub fn condition(&self, c: Condition) -> &ConditionRecord {
        self.conditions.iter().find(|r| r.condition == c).expect("all conditions are recorded")
    }

    pub fn max_pair_defect(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, r| m.max(r.sup_defect))
    }

    /// Verdict restricted to the given conditions.
    pub fn condition_verdict(&self, required: &[Condition]) -> (Verdict, Option<Witness>) {
        judge(
            self.conditions
                .iter()
                .filter(|r| required.contains(&r.condition))
                .map(|r| (r.condition.to_string(), r.sup_residual, r.worst_point.as_ref())),
            self.tol,
        )
    }
}

struct PointResult {
    pairs: Vec<f64>,
    conditions: [f64; 4],
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}

fn evaluate_point(
    spec: &SubalgebraSpec,
    law: &Arc<AccelerationLaw>,
    p: &PhasePoint,
) -> Result<PointResult, DomainError> {
    let frame = Frame::new(law, p)?;
    let jets = spec.fields(law).iter().map(|f| f.jet_in(&frame)).collect::<Result<Vec<_>, _>>()?;
    let n = spec.dim();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(max_abs(&defect_from_jets(spec, &jets, a, b)));
        }
    }
    let res = residuals_in(law, &frame)?;
    let conditions = Condition::ALL.map(|c| res.max_abs(c));
    Ok(PointResult { pairs, conditions })
}

/// Sample `n_samples` points of `domain` on which `law` evaluates, drawing
/// replacements for points where it does not. Returns the points, their
/// results and the number of rejected draws.
fn sample_evaluated<R: Send>(
    law: &AccelerationLaw,
    domain: &SamplingDomain,
    n_samples: usize,
    eval: impl Fn(&PhasePoint) -> Result<R, DomainError> + Sync,
) -> Result<(Vec<(PhasePoint, R)>, u64), AnomalyError> {
    if n_samples == 0 {
        return Err(SamplingError::ZeroCount.into());
    }
    let mut sampler = Sampler::new(domain, law.particles());
    let mut done = Vec::with_capacity(n_samples);
    let mut rejected = 0u64;
    while done.len() < n_samples {
        // With a batch equal to the deficit every success is kept, so the
        // result matches a sequential scan of the sampler's stream.
        let batch = (0..n_samples - done.len()).map(|_| sampler.next_point()).collect::<Result<Vec<_>, _>>()?;
        let results: Vec<_> = batch.into_par_iter().map(|p| (eval(&p), p)).collect();
        for (r, p) in results {
            match r {
                Ok(r) => done.push((p, r)),
                Err(_) => rejected += 1,
            }
        }
        if rejected >= 1000 && rejected as f64 > 99.0 * done.len() as f64 {
            return Err(AnomalyError::TooManyRejections { rejected, accepted: done.len() });
        }
    }
    Ok((done, rejected))
}

/// Sup of `values(i)` over the sampled points, with the earliest worst point.
fn sup_over<R>(points: &[(PhasePoint, R)], value: impl Fn(&R) -> f64) -> (f64, Option<PhasePoint>) {
    let mut best = (0.0, None);
    for (p, r) in points {
        let v = value(r);
        if best.1.is_none() || v > best.0 || v.is_nan() {
            best = (v, Some(p.clone()));
            if v.is_nan() {
                break;
            }
        }
    }
    best
}

/// Defects for every unordered basis pair and the four condition residuals
/// over `n_samples` points of `domain`.
pub fn anomaly_report(
    spec: &SubalgebraSpec,
    law: &Arc<AccelerationLaw>,
    domain: &SamplingDomain,
    n_samples: usize,
    tol: f64,
) -> Result<AnomalyReport, AnomalyError> {
    let (points, rejected) = sample_evaluated(law, domain, n_samples, |p| evaluate_point(spec, law, p))?;
    let n = spec.dim();
    let mut pairs = Vec::new();
    let mut idx = 0;
    for a in 0..n {
        for b in a + 1..n {
            let (sup, worst) = sup_over(&points, |r| r.pairs[idx]);
            pairs.push(PairRecord {
                lhs: spec.basis[a].label.clone(),
                rhs: spec.basis[b].label.clone(),
                sup_defect: sup,
                worst_point: worst,
            });
            idx += 1;
        }
    }
    let conditions = Condition::ALL
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let (sup, worst) = sup_over(&points, |r| r.conditions[k]);
            ConditionRecord { condition: c, sup_residual: sup, worst_point: worst }
        })
        .collect();
    let (verdict, witness) =
        judge(pairs.iter().map(|r| (format!("[{}, {}]", r.lhs, r.rhs), r.sup_defect, r.worst_point.as_ref())), tol);
    Ok(AnomalyReport {
        spec: spec.name().to_string(),
        law: law.descriptor().to_string(),
        samples: n_samples,
        seed: domain.seed,
        rejected_samples: rejected,
        tol,
        pairs,
        conditions,
        verdict,
        witness,
    })
}
