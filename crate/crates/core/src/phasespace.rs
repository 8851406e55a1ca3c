//! Phase points, acceleration laws and reproducible sampling.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprdsl::{self, Bindings, Expr, ParseContext, ParseError};
use crate::numkernel::{lift_coords, DomainError, Dual1, Scalar};
use crate::solutions::FamilyLaw;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("a phase point needs at least one particle")]
    NoParticles,
    #[error("positions and velocities disagree on the particle count ({0} vs {1})")]
    ShapeMismatch(usize, usize),
    #[error("non-finite coordinate in phase point")]
    NonFinite,
}

/// Positions and velocities of N particles at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    x: Vec<[f64; 3]>,
    v: Vec<[f64; 3]>,
}

impl PhasePoint {
    pub fn new(x: Vec<[f64; 3]>, v: Vec<[f64; 3]>) -> Result<Self, PhaseError> {
        if x.is_empty() {
            return Err(PhaseError::NoParticles);
        }
        if x.len() != v.len() {
            return Err(PhaseError::ShapeMismatch(x.len(), v.len()));
        }
        if x.iter().chain(&v).flatten().any(|c| !c.is_finite()) {
            return Err(PhaseError::NonFinite);
        }
        Ok(PhasePoint { x, v })
    }

    /// One particle.
    pub fn single(x: [f64; 3], v: [f64; 3]) -> Result<Self, PhaseError> {
        Self::new(vec![x], vec![v])
    }

    /// Inverse of [`PhasePoint::coords`].
    pub fn from_coords(coords: &[f64]) -> Result<Self, PhaseError> {
        if coords.is_empty() || !coords.len().is_multiple_of(6) {
            return Err(PhaseError::NoParticles);
        }
        let n = coords.len() / 6;
        let triple = |k: usize| [coords[k], coords[k + 1], coords[k + 2]];
        let x = (0..n).map(|a| triple(3 * a)).collect();
        let v = (0..n).map(|a| triple(3 * n + 3 * a)).collect();
        Self::new(x, v)
    }

    pub fn particles(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[[f64; 3]] {
        &self.x
    }

    pub fn v(&self) -> &[[f64; 3]] {
        &self.v
    }

    /// Flattened coordinates: all positions particle-major, then all
    /// velocities particle-major.
    pub fn coords(&self) -> Vec<f64> {
        self.x.iter().chain(&self.v).flatten().copied().collect()
    }
}

/// Index of `x^(a)_i` in the flattened coordinates.
pub fn x_index(_n: usize, a: usize, i: usize) -> usize {
    3 * a + i
}

/// Index of `v^(a)_i` in the flattened coordinates.
pub fn v_index(n: usize, a: usize, i: usize) -> usize {
    3 * n + 3 * a + i
}

/// Region where sample points are drawn, with the margins that keep them
/// away from singular loci of a law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingDomain {
    /// Interval for every position coordinate.
    pub position_box: [f64; 2],
    /// Interval for every velocity coordinate when no speed cap is set.
    pub velocity_box: [f64; 2],
    /// Velocities of each particle are drawn in the ball of this radius.
    pub speed_cap: Option<f64>,
    /// Minimum of `1 - |v|^2` for every particle.
    pub lorentz_margin: Option<f64>,
    /// Values of `v3` to stay away from.
    pub v3_poles: Vec<f64>,
    pub pole_margin: f64,
    pub seed: u64,
}

impl Default for SamplingDomain {
    fn default() -> Self {
        Self::galilean()
    }
}

impl SamplingDomain {
    pub fn galilean() -> Self {
        SamplingDomain {
            position_box: [-1.0, 1.0],
            velocity_box: [-1.0, 1.0],
            speed_cap: None,
            lorentz_margin: None,
            v3_poles: Vec::new(),
            pole_margin: 0.1,
            seed: 42,
        }
    }

    pub fn relativistic() -> Self {
        SamplingDomain { speed_cap: Some(0.9), lorentz_margin: Some(0.05), ..Self::galilean() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pole(mut self, v3: f64) -> Self {
        if !self.v3_poles.contains(&v3) {
            self.v3_poles.push(v3);
        }
        self
    }

    pub fn is_relativistic(&self) -> bool {
        self.lorentz_margin.is_some()
    }

    pub fn contains(&self, p: &PhasePoint) -> bool {
        let [lo, hi] = self.position_box;
        if p.x().iter().flatten().any(|c| *c < lo || *c > hi) {
            return false;
        }
        p.v().iter().all(|v| {
            let s2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            let speed_ok = match self.speed_cap {
                Some(cap) => s2 <= cap * cap,
                None => v.iter().all(|c| *c >= self.velocity_box[0] && *c <= self.velocity_box[1]),
            };
            let lorentz_ok = self.lorentz_margin.is_none_or(|m| 1.0 - s2 >= m);
            let poles_ok = self.v3_poles.iter().all(|pole| (v[2] - pole).abs() >= self.pole_margin);
            speed_ok && lorentz_ok && poles_ok
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("sampler exhausted: {accepted} of {attempts} candidates accepted (< 1%); the domain is over-constrained")]
    Exhausted { accepted: u64, attempts: u64 },
    #[error("sample count must be at least 1")]
    ZeroCount,
}

/// Deterministic rejection sampler over a [`SamplingDomain`].
#[derive(Debug, Clone)]
pub struct Sampler {
    domain: SamplingDomain,
    particles: usize,
    rng: ChaCha8Rng,
    attempts: u64,
    accepted: u64,
}

/// Candidates tried before the acceptance rate is judged.
const MIN_ATTEMPTS: u64 = 1000;

impl Sampler {
    pub fn new(domain: &SamplingDomain, particles: usize) -> Self {
        Sampler {
            domain: domain.clone(),
            particles,
            rng: ChaCha8Rng::seed_from_u64(domain.seed),
            attempts: 0,
            accepted: 0,
        }
    }

    fn uniform(&mut self, [lo, hi]: [f64; 2]) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    fn candidate(&mut self) -> PhasePoint {
        let d = self.domain.clone();
        let x = (0..self.particles)
            .map(|_| [self.uniform(d.position_box), self.uniform(d.position_box), self.uniform(d.position_box)])
            .collect();
        let vbox = match d.speed_cap {
            Some(cap) => [-cap, cap],
            None => d.velocity_box,
        };
        let v = (0..self.particles).map(|_| [self.uniform(vbox), self.uniform(vbox), self.uniform(vbox)]).collect();
        PhasePoint { x, v }
    }

    pub fn next_point(&mut self) -> Result<PhasePoint, SamplingError> {
        loop {
            self.attempts += 1;
            let p = self.candidate();
            if self.domain.contains(&p) {
                self.accepted += 1;
                return Ok(p);
            }
            if self.attempts >= MIN_ATTEMPTS && (self.accepted as f64) < 0.01 * self.attempts as f64 {
                return Err(SamplingError::Exhausted { accepted: self.accepted, attempts: self.attempts });
            }
        }
    }
}

/// `count` points inside `d`, deterministic in `d.seed`.
pub fn sample_points(d: &SamplingDomain, count: usize, particles: usize) -> Result<Vec<PhasePoint>, SamplingError> {
    if count == 0 {
        return Err(SamplingError::ZeroCount);
    }
    let mut s = Sampler::new(d, particles);
    (0..count).map(|_| s.next_point()).collect()
}

/// Which relativity group a law is meant for; advisory only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kinematics {
    Galilean,
    Poincare,
}

impl fmt::Display for Kinematics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kinematics::Galilean => "galilean",
            Kinematics::Poincare => "poincare",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LawBody {
    Family(FamilyLaw),
    /// One `[A1, A2, A3]` triple per particle.
    Expr(Vec<[Expr; 3]>),
}

/// The dynamics under test: accelerations of every particle as a function
/// of positions and velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationLaw {
    particles: usize,
    body: LawBody,
    domain: SamplingDomain,
    kinematics: Option<Kinematics>,
    descriptor: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LawError {
    #[error("expected {expected} component triples, got {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("invalid law expression: {0}")]
    Parse(#[from] ParseError),
    #[error("law `{0}` must be written as `A=(..,..,..)` or `A1=(..);A2=(..)`")]
    Shape(String),
}

impl AccelerationLaw {
    pub fn from_family(family: FamilyLaw, domain: SamplingDomain) -> Self {
        AccelerationLaw {
            particles: family.particles(),
            kinematics: family.kinematics(),
            descriptor: family.describe(),
            body: LawBody::Family(family),
            domain,
        }
    }

    pub fn from_exprs(components: Vec<[Expr; 3]>, domain: SamplingDomain) -> Result<Self, LawError> {
        if components.is_empty() {
            return Err(LawError::ComponentCount { expected: 1, found: 0 });
        }
        let descriptor = components
            .iter()
            .enumerate()
            .map(|(a, c)| {
                let name = if components.len() == 1 { "A".to_string() } else { format!("A{}", a + 1) };
                format!("{name}=({},{},{})", c[0], c[1], c[2])
            })
            .collect::<Vec<_>>()
            .join(";");
        Ok(AccelerationLaw {
            particles: components.len(),
            body: LawBody::Expr(components),
            domain,
            kinematics: None,
            descriptor,
        })
    }

    /// Parse `A=(e1,e2,e3)` (one particle) or `A1=(..);A2=(..);...`.
    pub fn parse(text: &str, domain: SamplingDomain) -> Result<Self, LawError> {
        let parts: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
        let n = parts.len();
        let mut comps = Vec::with_capacity(n);
        for (a, part) in parts.iter().enumerate() {
            let (name, c) = exprdsl::parse_vector_definition(part, ParseContext::law(n))?;
            let ok = if n == 1 { name == "A" || name == "A1" } else { name == format!("A{}", a + 1) };
            if !ok {
                return Err(LawError::Shape(text.to_string()));
            }
            comps.push(c);
        }
        Self::from_exprs(comps, domain)
    }

    pub fn free(particles: usize) -> Self {
        Self::from_family(FamilyLaw::Free { particles }, SamplingDomain::galilean())
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn body(&self) -> &LawBody {
        &self.body
    }

    pub fn domain(&self) -> &SamplingDomain {
        &self.domain
    }

    pub fn with_domain(mut self, domain: SamplingDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn kinematics(&self) -> Option<Kinematics> {
        self.kinematics
    }

    pub fn with_kinematics(mut self, k: Option<Kinematics>) -> Self {
        self.kinematics = k;
        self
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Accelerations at flattened coordinates, over any numeric tower.
    pub fn eval<T: Scalar>(&self, coords: &[T]) -> Result<Vec<[T; 3]>, DomainError> {
        if coords.len() != 6 * self.particles {
            return Err(DomainError::new(format!(
                "law for {} particle(s) evaluated on {} coordinates",
                self.particles,
                coords.len()
            )));
        }
        let out = match &self.body {
            LawBody::Family(f) => f.eval(coords)?,
            LawBody::Expr(comps) => {
                let b = Bindings::coords(coords);
                comps
                    .iter()
                    .map(|[a, b1, c]| Ok([a.eval(&b)?, b1.eval(&b)?, c.eval(&b)?]))
                    .collect::<Result<Vec<_>, DomainError>>()?
            }
        };
        if out.iter().flatten().any(|c| !c.is_finite()) {
            return Err(DomainError::new(format!("non-finite acceleration from {}", self.descriptor)));
        }
        Ok(out)
    }

    pub fn accelerations(&self, p: &PhasePoint) -> Result<Vec<[f64; 3]>, DomainError> {
        self.eval(&p.coords())
    }
}

impl fmt::Display for AccelerationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor)
    }
}

/// Accelerations and their exact first partials at one point.
///
/// Matrix rows are indexed `3a + l` (component `l` of particle `a`),
/// columns `3b + i` (coordinate `i` of particle `b`).
#[derive(Debug, Clone, PartialEq)]
pub struct AccelJacobians {
    pub a: Vec<[f64; 3]>,
    pub da_dx: Vec<Vec<f64>>,
    pub da_dv: Vec<Vec<f64>>,
}

pub fn accel_jacobians(law: &AccelerationLaw, p: &PhasePoint) -> Result<AccelJacobians, DomainError> {
    let n = p.particles();
    let duals: Vec<[Dual1; 3]> = law.eval(&lift_coords(p))?;
    let a = duals.iter().map(|c| [c[0].value(), c[1].value(), c[2].value()]).collect();
    let mut da_dx = vec![vec![0.0; 3 * n]; 3 * n];
    let mut da_dv = vec![vec![0.0; 3 * n]; 3 * n];
    for (ai, comps) in duals.iter().enumerate() {
        for (l, d) in comps.iter().enumerate() {
            for b in 0..n {
                for i in 0..3 {
                    da_dx[3 * ai + l][3 * b + i] = d.partial(x_index(n, b, i));
                    da_dv[3 * ai + l][3 * b + i] = d.partial(v_index(n, b, i));
                }
            }
        }
    }
    Ok(AccelJacobians { a, da_dx, da_dv })
}
