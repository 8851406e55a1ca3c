//! World lines: RK4 integration, finite group actions and covariance checks.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::DomainError;
use crate::phasespace::{AccelerationLaw, Kinematics, PhaseError, PhasePoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldlineError {
    #[error("trajectory left the law's domain at step {step}: {reason}")]
    DomainExit { step: usize, reason: String },
    #[error("integration diverged at step {step}; reduce dt")]
    StepTooLarge { step: usize },
    #[error("invalid time grid: {0}")]
    BadGrid(String),
    #[error("image time is not increasing at node {node} of particle {particle}")]
    NonMonotoneTime { particle: usize, node: usize },
    #[error("boosted world line leaves no usable window on the uniform grid")]
    InterpolationRange,
    #[error("invalid group element: {0}")]
    BadElement(String),
    #[error("trajectories have no common grid")]
    NoCommonGrid,
    #[error(transparent)]
    Phase(#[from] PhaseError),
}

/// States of N particles on the uniform grid `t0 + k dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    particles: usize,
    t0: f64,
    dt: f64,
    /// Flattened coordinates per node, positions before velocities.
    states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn x(&self, k: usize, a: usize) -> [f64; 3] {
        let s = &self.states[k];
        [s[3 * a], s[3 * a + 1], s[3 * a + 2]]
    }

    pub fn v(&self, k: usize, a: usize) -> [f64; 3] {
        let o = 3 * self.particles + 3 * a;
        let s = &self.states[k];
        [s[o], s[o + 1], s[o + 2]]
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k]
    }

    pub fn point(&self, k: usize) -> PhasePoint {
        PhasePoint::from_coords(&self.states[k]).expect("trajectory states are finite")
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.len())
            .flat_map(|k| (0..self.particles).map(move |a| (k, a)))
            .map(|(k, a)| norm(self.v(k, a)))
            .fold(0.0, f64::max)
    }

    /// CSV with one row per node: `t`, positions, then velocities.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for kind in ['x', 'v'] {
            for a in 1..=self.particles {
                for i in 1..=3 {
                    write!(out, ",{kind}{i}@{a}").unwrap();
                }
            }
        }
        out.push('\n');
        for (k, s) in self.states.iter().enumerate() {
            write!(out, "{}", self.time(k)).unwrap();
            for c in s {
                write!(out, ",{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn needs_subluminal(law: &AccelerationLaw) -> bool {
    law.domain().is_relativistic() || law.kinematics() == Some(Kinematics::Poincare)
}

fn check_state(law: &AccelerationLaw, s: &[f64], step: usize) -> Result<(), WorldlineError> {
    if s.iter().any(|c| !c.is_finite()) {
        return Err(WorldlineError::StepTooLarge { step });
    }
    if needs_subluminal(law) {
        let n = law.particles();
        for a in 0..n {
            let o = 3 * n + 3 * a;
            if norm([s[o], s[o + 1], s[o + 2]]) >= 1.0 {
                return Err(WorldlineError::DomainExit {
                    step,
                    reason: format!("particle {} reached |v| >= 1", a + 1),
                });
            }
        }
    }
    Ok(())
}

fn rhs(law: &AccelerationLaw, s: &[f64], step: usize) -> Result<Vec<f64>, WorldlineError> {
    let n = law.particles();
    let acc = law.eval(s).map_err(|DomainError(reason)| WorldlineError::DomainExit { step, reason })?;
    let mut d = Vec::with_capacity(6 * n);
    d.extend_from_slice(&s[3 * n..]);
    d.extend(acc.into_iter().flatten());
    Ok(d)
}

fn axpy(s: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    s.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// `steps` RK4 steps of size `dt` from `s0` at `t0`.
fn integrate_steps(
    law: &AccelerationLaw,
    s0: Vec<f64>,
    t0: f64,
    dt: f64,
    steps: usize,
) -> Result<Trajectory, WorldlineError> {
    check_state(law, &s0, 0)?;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(s0);
    for step in 1..=steps {
        let s = states.last().unwrap();
        let k1 = rhs(law, s, step)?;
        let k2 = rhs(law, &axpy(s, dt / 2.0, &k1), step)?;
        let k3 = rhs(law, &axpy(s, dt / 2.0, &k2), step)?;
        let k4 = rhs(law, &axpy(s, dt, &k3), step)?;
        let next: Vec<f64> =
            (0..s.len()).map(|m| s[m] + dt / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])).collect();
        check_state(law, &next, step)?;
        states.push(next);
    }
    Ok(Trajectory { particles: law.particles(), t0, dt, states })
}

/// Integrate `ẋ = v, v̇ = A` over `[t_start, t_end]`. The step is adjusted
/// to divide the span evenly.
pub fn integrate(
    law: &AccelerationLaw,
    p0: &PhasePoint,
    (t_start, t_end): (f64, f64),
    dt: f64,
) -> Result<Trajectory, WorldlineError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(WorldlineError::BadGrid(format!("dt must be positive, got {dt}")));
    }
    if !(t_end > t_start) {
        return Err(WorldlineError::BadGrid(format!("empty span [{t_start}, {t_end}]")));
    }
    if p0.particles() != law.particles() {
        return Err(WorldlineError::BadGrid(format!(
            "initial point has {} particle(s), law expects {}",
            p0.particles(),
            law.particles()
        )));
    }
    let steps = ((t_end - t_start) / dt).round().max(1.0) as usize;
    integrate_steps(law, p0.coords(), t_start, (t_end - t_start) / steps as f64, steps)
}

/// Finite transformations exponentiating the axis generators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GroupElement {
    SpaceTranslation([f64; 3]),
    TimeTranslation(f64),
    Rotation([[f64; 3]; 3]),
    GalileanBoost([f64; 3]),
    /// Axis 1..=3, speed `|u| < 1`.
    LorentzBoost {
        axis: usize,
        u: f64,
    },
}

impl GroupElement {
    pub fn rotation(m: [[f64; 3]; 3]) -> Result<Self, WorldlineError> {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-12 {
                    return Err(WorldlineError::BadElement("rotation matrix is not orthonormal".into()));
                }
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det < 0.0 {
            return Err(WorldlineError::BadElement("rotation matrix has determinant -1".into()));
        }
        Ok(GroupElement::Rotation(m))
    }

    /// Rotation by `angle` about the unit vector along `axis`.
    pub fn rotation_about(axis: [f64; 3], angle: f64) -> Result<Self, WorldlineError> {
        let len = norm(axis);
        if !(len > 0.0) {
            return Err(WorldlineError::BadElement("rotation axis is zero".into()));
        }
        let n = axis.map(|c| c / len);
        let (s, c) = angle.sin_cos();
        let cross = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                m[i][j] = c * id + s * cross[i][j] + (1.0 - c) * n[i] * n[j];
            }
        }
        Self::rotation(m)
    }

    pub fn lorentz(axis: usize, u: f64) -> Result<Self, WorldlineError> {
        if !(1..=3).contains(&axis) {
            return Err(WorldlineError::BadElement(format!("boost axis must be 1, 2 or 3, got {axis}")));
        }
        if !(u.abs() < 1.0) {
            return Err(WorldlineError::BadElement(format!("boost speed must satisfy |u| < 1, got {u}")));
        }
        Ok(GroupElement::LorentzBoost { axis, u })
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::SpaceTranslation(c) => GroupElement::SpaceTranslation(c.map(|x| -x)),
            GroupElement::TimeTranslation(t) => GroupElement::TimeTranslation(-t),
            GroupElement::Rotation(m) => {
                let mut t = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        t[i][j] = m[j][i];
                    }
                }
                GroupElement::Rotation(t)
            }
            GroupElement::GalileanBoost(u) => GroupElement::GalileanBoost(u.map(|x| -x)),
            GroupElement::LorentzBoost { axis, u } => GroupElement::LorentzBoost { axis: *axis, u: -u },
        }
    }
}

fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

fn map_pointwise(traj: &Trajectory, f: impl Fn(f64, [f64; 3], [f64; 3]) -> ([f64; 3], [f64; 3])) -> Trajectory {
    let n = traj.particles;
    let states = (0..traj.len())
        .map(|k| {
            let mut s = vec![0.0; 6 * n];
            for a in 0..n {
                let (x, v) = f(traj.time(k), traj.x(k, a), traj.v(k, a));
                s[3 * a..3 * a + 3].copy_from_slice(&x);
                s[3 * n + 3 * a..3 * n + 3 * a + 3].copy_from_slice(&v);
            }
            s
        })
        .collect();
    Trajectory { states, ..traj.clone() }
}

/// Image of one particle's world line: node times and states.
struct ImageCurve {
    t: Vec<f64>,
    x: Vec<[f64; 3]>,
    v: Vec<[f64; 3]>,
}

impl ImageCurve {
    /// Hermite cubic for x (with v as derivative) and four-point Lagrange
    /// cubic for v, on the node interval containing `t`.
    fn sample(&self, t: f64) -> ([f64; 3], [f64; 3]) {
        let m = self.t.len();
        let j = self.t.partition_point(|&s| s <= t).clamp(1, m - 1) - 1;
        let (t0, t1) = (self.t[j], self.t[j + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let x = [0, 1, 2]
            .map(|i| h00 * self.x[j][i] + h10 * h * self.v[j][i] + h01 * self.x[j + 1][i] + h11 * h * self.v[j + 1][i]);
        let lo = j.saturating_sub(1).min(m.saturating_sub(4));
        let idx: Vec<usize> = (lo..(lo + 4).min(m)).collect();
        let v = [0, 1, 2].map(|i| {
            idx.iter()
                .map(|&p| {
                    let w: f64 =
                        idx.iter().filter(|&&q| q != p).map(|&q| (t - self.t[q]) / (self.t[p] - self.t[q])).product();
                    w * self.v[p][i]
                })
                .sum()
        });
        (x, v)
    }
}

fn lorentz(traj: &Trajectory, axis: usize, u: f64) -> Result<(Trajectory, f64), WorldlineError> {
    let k = axis - 1;
    let gamma = 1.0 / (1.0 - u * u).sqrt();
    let n = traj.particles;
    if traj.len() < 2 {
        return Err(WorldlineError::InterpolationRange);
    }
    let mut curves = Vec::with_capacity(n);
    for a in 0..n {
        let mut c = ImageCurve { t: Vec::new(), x: Vec::new(), v: Vec::new() };
        for node in 0..traj.len() {
            let (t, x, v) = (traj.time(node), traj.x(node, a), traj.v(node, a));
            if norm(v) >= 1.0 {
                return Err(WorldlineError::NonMonotoneTime { particle: a + 1, node });
            }
            let tp = gamma * (t + u * x[k]);
            let mut xp = x;
            xp[k] = gamma * (x[k] + u * t);
            let denom = 1.0 + u * v[k];
            let vp = [0, 1, 2].map(|i| if i == k { (v[k] + u) / denom } else { v[i] / (gamma * denom) });
            if c.t.last().is_some_and(|&last| tp <= last) {
                return Err(WorldlineError::NonMonotoneTime { particle: a + 1, node });
            }
            c.t.push(tp);
            c.x.push(xp);
            c.v.push(vp);
        }
        curves.push(c);
    }
    let start = curves.iter().map(|c| c.t[0]).fold(f64::NEG_INFINITY, f64::max);
    let end = curves.iter().map(|c| *c.t.last().unwrap()).fold(f64::INFINITY, f64::min);
    // Snap the new grid to the lattice t0 + j dt of the input.
    let dt = traj.dt;
    let eps = 1e-9 * dt;
    let j0 = ((start - traj.t0) / dt - 1e-9).ceil();
    let j1 = ((end - traj.t0) / dt + 1e-9).floor();
    if j1 - j0 < 1.0 {
        return Err(WorldlineError::InterpolationRange);
    }
    let t0 = traj.t0 + j0 * dt;
    let count = (j1 - j0) as usize + 1;
    let mut states = Vec::with_capacity(count);
    for j in 0..count {
        let t = (t0 + j as f64 * dt).clamp(start - eps, end + eps).clamp(start, end);
        let mut s = vec![0.0; 6 * n];
        for (a, c) in curves.iter().enumerate() {
            let (x, v) = c.sample(t);
            s[3 * a..3 * a + 3].copy_from_slice(&x);
            s[3 * n + 3 * a..3 * n + 3 * a + 3].copy_from_slice(&v);
        }
        states.push(s);
    }
    let trimmed = 1.0 - count as f64 / traj.len() as f64;
    Ok((Trajectory { particles: n, t0, dt, states }, trimmed.max(0.0)))
}

/// Active transformation of a world line, with the fraction of grid nodes
/// lost to re-parametrization (zero except for Lorentz boosts).
pub fn transform_trimmed(traj: &Trajectory, g: &GroupElement) -> Result<(Trajectory, f64), WorldlineError> {
    Ok(match g {
        GroupElement::SpaceTranslation(c) => (map_pointwise(traj, |_, x, v| ([0, 1, 2].map(|i| x[i] + c[i]), v)), 0.0),
        GroupElement::TimeTranslation(tau) => (Trajectory { t0: traj.t0 + tau, ..traj.clone() }, 0.0),
        GroupElement::Rotation(m) => (map_pointwise(traj, |_, x, v| (mat_vec(m, x), mat_vec(m, v))), 0.0),
        GroupElement::GalileanBoost(u) => {
            (map_pointwise(traj, |t, x, v| ([0, 1, 2].map(|i| x[i] - u[i] * t), [0, 1, 2].map(|i| v[i] - u[i]))), 0.0)
        }
        GroupElement::LorentzBoost { axis, u } => lorentz(traj, *axis, *u)?,
    })
}

pub fn transform(traj: &Trajectory, g: &GroupElement) -> Result<Trajectory, WorldlineError> {
    transform_trimmed(traj, g).map(|(t, _)| t)
}

/// Sup over shared grid nodes of the max-abs coordinate difference.
pub fn grid_distance(a: &Trajectory, b: &Trajectory) -> Result<f64, WorldlineError> {
    if a.particles != b.particles || (a.dt - b.dt).abs() > 1e-12 * a.dt {
        return Err(WorldlineError::NoCommonGrid);
    }
    let shift = (b.t0 - a.t0) / a.dt;
    let offset = shift.round();
    if (shift - offset).abs() > 1e-6 {
        return Err(WorldlineError::NoCommonGrid);
    }
    let offset = offset as i64;
    let mut worst: f64 = 0.0;
    let mut shared = 0;
    for kb in 0..b.len() {
        let ka = kb as i64 + offset;
        if ka < 0 || ka as usize >= a.len() {
            continue;
        }
        shared += 1;
        for (p, q) in a.states[ka as usize].iter().zip(&b.states[kb]) {
            worst = worst.max((p - q).abs());
        }
    }
    if shared == 0 {
        return Err(WorldlineError::NoCommonGrid);
    }
    Ok(worst)
}

/// Re-integrate from the transformed curve's initial data and return the
/// sup distance to the transformed curve.
pub fn covariance_residual(law: &AccelerationLaw, traj: &Trajectory, g: &GroupElement) -> Result<f64, WorldlineError> {
    let image = transform(traj, g)?;
    let fresh = integrate_steps(law, image.states[0].clone(), image.t0, image.dt, image.len() - 1)?;
    grid_distance(&image, &fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::SamplingDomain;
    use crate::solutions::{make_family, FamilyId, FamilyParams};

    fn free() -> AccelerationLaw {
        AccelerationLaw::free(1)
    }

    fn line(v: [f64; 3]) -> Trajectory {
        integrate(&free(), &PhasePoint::single([0.0; 3], v).unwrap(), (0.0, 2.0), 1e-3).unwrap()
    }

    #[test]
    fn free_motion_is_straight() {
        let tr = line([0.5, 0.0, 0.0]);
        assert_eq!(tr.len(), 2001);
        let x = tr.x(2000, 0);
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1] == 0.0 && x[2] == 0.0);
    }

    #[test]
    fn constant_gravity_parabola() {
        let law = make_family(FamilyId::GalileiAnisotropic, &FamilyParams::new().g(-9.8)).unwrap();
        let tr = integrate(&law, &PhasePoint::single([0.0; 3], [0.0; 3]).unwrap(), (0.0, 1.0), 1e-3).unwrap();
        let x = tr.x(tr.len() - 1, 0);
        assert!((x[2] + 4.9).abs() < 1e-10);
        assert!(x[0].abs() < 1e-15 && x[1].abs() < 1e-15);
    }

    #[test]
    fn most_special_stays_subluminal() {
        let law = make_family(FamilyId::PoincareMostSpecial, &FamilyParams::new().g(1.0)).unwrap();
        let tr = integrate(&law, &PhasePoint::single([0.0; 3], [0.0; 3]).unwrap(), (0.0, 2.0), 1e-3).unwrap();
        assert!(tr.max_speed() < 1.0);
        assert!(tr.max_speed() > 0.5);
    }

    #[test]
    fn superluminal_start_is_rejected() {
        let law = make_family(FamilyId::PoincareMostSpecial, &FamilyParams::new().g(1.0)).unwrap();
        let err = integrate(&law, &PhasePoint::single([0.0; 3], [1.2, 0.0, 0.0]).unwrap(), (0.0, 1.0), 1e-2);
        assert!(matches!(err, Err(WorldlineError::DomainExit { step: 0, .. })));
    }

    #[test]
    fn domain_exit_reports_step() {
        let law = AccelerationLaw::parse("A=(sqrt(1-x1),0,0)", SamplingDomain::galilean()).unwrap();
        let err =
            integrate(&law, &PhasePoint::single([0.0; 3], [1.0, 0.0, 0.0]).unwrap(), (0.0, 3.0), 1e-2).unwrap_err();
        assert!(matches!(err, WorldlineError::DomainExit { step, .. } if step > 50), "{err}");
    }

    #[test]
    fn boosting_the_rest_frame() {
        let rest = line([0.0; 3]);
        let (img, trimmed) = transform_trimmed(&rest, &GroupElement::lorentz(1, 0.6).unwrap()).unwrap();
        for k in 0..img.len() {
            let t = img.time(k);
            assert!((img.x(k, 0)[0] - 0.6 * t).abs() < 1e-12);
            assert!((img.v(k, 0)[0] - 0.6).abs() < 1e-12);
        }
        // image time spans gamma * 2 = 2.5 from zero
        assert_eq!(img.t0(), 0.0);
        assert!((img.t_end() - 2.5).abs() < 1e-9);
        assert!(trimmed <= 0.0);
    }

    #[test]
    fn rotating_a_line() {
        let tr = line([0.5, 0.0, 0.0]);
        let rot = GroupElement::rotation_about([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2).unwrap();
        let img = transform(&tr, &rot).unwrap();
        let v = img.v(100, 0);
        assert!(v[0].abs() < 1e-15 && (v[1] - 0.5).abs() < 1e-15);
        assert!(GroupElement::rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]).is_err());
        assert!(GroupElement::rotation([[1.0, 1e-6, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
    }

    #[test]
    fn galilean_boost_of_parabola() {
        let law = make_family(FamilyId::GalileiAnisotropic, &FamilyParams::new().g(-9.8)).unwrap();
        let tr = integrate(&law, &PhasePoint::single([0.0; 3], [0.0; 3]).unwrap(), (0.0, 1.0), 1e-3).unwrap();
        let img = transform(&tr, &GroupElement::GalileanBoost([1.0, 0.0, 0.0])).unwrap();
        for k in (0..tr.len()).step_by(97) {
            assert_eq!(img.x(k, 0)[0], -tr.time(k));
            assert_eq!(img.x(k, 0)[2], tr.x(k, 0)[2]);
        }
        assert!(covariance_residual(&law, &tr, &GroupElement::GalileanBoost([1.0, 0.0, 0.0])).unwrap() < 1e-9);
    }

    #[test]
    fn round_trip_through_lorentz_boost() {
        let law = make_family(FamilyId::PoincareMostSpecial, &FamilyParams::new().g(1.0)).unwrap();
        let tr =
            integrate(&law, &PhasePoint::single([0.1, 0.0, 0.2], [0.2, 0.1, 0.0]).unwrap(), (0.0, 1.5), 1e-3).unwrap();
        let g = GroupElement::lorentz(3, 0.3).unwrap();
        let back = transform(&transform(&tr, &g).unwrap(), &g.inverse()).unwrap();
        assert!(back.len() > tr.len() / 2);
        assert!(grid_distance(&tr, &back).unwrap() < 1e-6);
    }

    #[test]
    fn free_law_is_lorentz_covariant() {
        let tr = line([0.3, -0.2, 0.4]);
        for axis in 1..=3 {
            let r = covariance_residual(&free(), &tr, &GroupElement::lorentz(axis, 0.6).unwrap()).unwrap();
            assert!(r <= 1e-9, "axis {axis}: {r}");
        }
    }

    #[test]
    fn csv_layout() {
        let tr = integrate(
            &AccelerationLaw::free(2),
            &PhasePoint::new(vec![[0.0; 3]; 2], vec![[0.1; 3]; 2]).unwrap(),
            (0.0, 0.1),
            0.05,
        )
        .unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,x1@1,x2@1,x3@1,x1@2,x2@2,x3@2,v1@1,v2@1,v3@1,v1@2,v2@2,v3@2");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn inverse_elements() {
        let r = GroupElement::rotation_about([1.0, 2.0, 3.0], 0.7).unwrap();
        let tr = line([0.2, 0.1, 0.0]);
        let back = transform(&transform(&tr, &r).unwrap(), &r.inverse()).unwrap();
        assert!(grid_distance(&tr, &back).unwrap() < 1e-14);
        assert!(GroupElement::lorentz(4, 0.1).is_err());
        assert!(GroupElement::lorentz(1, 1.0).is_err());
    }
}
