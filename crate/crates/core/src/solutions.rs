//! Closed-form admissible acceleration families.
//!
//! Free functions (profiles) are DSL expressions in `u` or `u1,u2,u3`.
//! Where a family needs a profile's derivative, it is obtained by evaluating
//! the profile over a [`Jet`], never by hand-coded differentiation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprdsl::{self, Bindings, Expr, ParseContext, ParseError};
use crate::numkernel::{DomainError, Jet, Scalar};
use crate::phasespace::{AccelerationLaw, Kinematics, PhasePoint, SamplingDomain};

#[derive(Debug, Clone, PartialEq)]
enum ProfileBody {
    Expr(Expr),
    /// `scale * d/du expr(u)`.
    Derivative {
        expr: Expr,
        scale: f64,
    },
}

/// One of the free scalar functions of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarProfile {
    label: String,
    arity: usize,
    body: ProfileBody,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("family `{family}` needs profile `{name}`")]
    MissingProfile { family: FamilyId, name: &'static str },
    #[error("family `{family}` needs parameter `{name}`")]
    MissingParameter { family: FamilyId, name: &'static str },
    #[error("poincare-vsr needs beta != 0")]
    BetaZero,
    #[error("profile `{name}` must take {expected} argument(s), got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid profile: {0}")]
    Parse(#[from] ParseError),
}

impl ScalarProfile {
    pub fn new(label: impl Into<String>, arity: usize, body: Expr) -> Self {
        ScalarProfile { label: label.into(), arity, body: ProfileBody::Expr(body) }
    }

    /// Parse `NAME(u)=...` or `NAME(u1,u2,u3)=...`.
    pub fn parse_definition(text: &str) -> Result<Self, FamilyError> {
        let (name, arity, body) = exprdsl::parse_profile_definition(text)?;
        Ok(Self::new(name, arity, body))
    }

    /// Parse just the body, with the given arity.
    pub fn parse(label: &str, arity: usize, body: &str) -> Result<Self, FamilyError> {
        Ok(Self::new(label, arity, exprdsl::parse(body, ParseContext::profile(arity))?))
    }

    pub fn constant(label: &str, arity: usize, c: f64) -> Self {
        Self::new(label, arity, Expr::Num(c))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `scale * p'(u)` of a unary expression profile.
    pub fn derivative(&self, scale: f64) -> Option<ScalarProfile> {
        match (&self.body, self.arity) {
            (ProfileBody::Expr(e), 1) => Some(ScalarProfile {
                label: format!("{scale}*{}'", self.label),
                arity: 1,
                body: ProfileBody::Derivative { expr: e.clone(), scale },
            }),
            _ => None,
        }
    }

    pub fn eval<T: Scalar>(&self, args: &[T]) -> Result<T, DomainError> {
        match &self.body {
            ProfileBody::Expr(e) => e.eval(&Bindings::args(args)),
            ProfileBody::Derivative { expr, scale } => {
                let j = [Jet::variable(args[0].clone())];
                let out = expr.eval(&Bindings::args(&j))?;
                Ok(out.deriv * T::from(*scale))
            }
        }
    }

    /// Derivative with respect to the (single) argument, at `u`.
    pub fn derivative_at<T: Scalar>(&self, u: T) -> Result<T, DomainError> {
        match &self.body {
            ProfileBody::Expr(e) => {
                let j = [Jet::variable(u)];
                Ok(e.eval(&Bindings::args(&j))?.deriv)
            }
            ProfileBody::Derivative { expr, scale } => {
                let j = [Jet::variable(Jet::variable(u))];
                let out = expr.eval(&Bindings::args(&j))?;
                Ok(out.deriv.deriv * T::from(*scale))
            }
        }
    }
}

impl fmt::Display for ScalarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args = if self.arity == 1 { "u" } else { "u1,u2,u3" };
        match &self.body {
            ProfileBody::Expr(e) => write!(f, "{}({args})={e}", self.label),
            ProfileBody::Derivative { expr, scale } => write!(f, "{}({args})={scale}*d/du[{expr}]", self.label),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    Free,
    GalileiStatic,
    GalileiVerySpecial,
    GalileiAnisotropic,
    GalileiTwoParticle,
    PoincareVsr,
    PoincareMostSpecial,
    HomogeneousRotationAnsatz,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::Free,
        FamilyId::GalileiStatic,
        FamilyId::GalileiVerySpecial,
        FamilyId::GalileiAnisotropic,
        FamilyId::GalileiTwoParticle,
        FamilyId::PoincareVsr,
        FamilyId::PoincareMostSpecial,
        FamilyId::HomogeneousRotationAnsatz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Free => "free",
            FamilyId::GalileiStatic => "galilei-static",
            FamilyId::GalileiVerySpecial => "galilei-very-special",
            FamilyId::GalileiAnisotropic => "galilei-anisotropic",
            FamilyId::GalileiTwoParticle => "galilei-two-particle",
            FamilyId::PoincareVsr => "poincare-vsr",
            FamilyId::PoincareMostSpecial => "poincare-most-special",
            FamilyId::HomogeneousRotationAnsatz => "homogeneous-rotation-ansatz",
        }
    }

    /// Profile names and arities the family requires.
    pub fn profiles(self) -> &'static [(&'static str, usize)] {
        match self {
            FamilyId::GalileiStatic => &[("f", 1)],
            FamilyId::GalileiVerySpecial => &[("W", 1)],
            FamilyId::GalileiTwoParticle => &[("f1", 3), ("f2", 3), ("g1", 3), ("g2", 3)],
            FamilyId::PoincareVsr => &[("F", 1)],
            FamilyId::HomogeneousRotationAnsatz => &[("f", 3), ("g", 3)],
            _ => &[],
        }
    }

    /// Scalar parameters the family requires.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            FamilyId::GalileiVerySpecial | FamilyId::PoincareVsr => &["beta"],
            FamilyId::GalileiAnisotropic | FamilyId::PoincareMostSpecial => &["g"],
            _ => &[],
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('_', "-");
        FamilyId::ALL.into_iter().find(|f| f.as_str() == norm).ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// Parameters and profiles for [`make_family`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FamilyParams {
    pub beta: Option<f64>,
    pub g: Option<f64>,
    pub profiles: BTreeMap<String, ScalarProfile>,
}

impl FamilyParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn g(mut self, g: f64) -> Self {
        self.g = Some(g);
        self
    }

    pub fn profile(mut self, name: &str, p: ScalarProfile) -> Self {
        self.profiles.insert(name.to_string(), p);
        self
    }

    /// Parse a profile definition such as `W(u)=u^2` and store it under its name.
    pub fn profile_text(mut self, text: &str) -> Result<Self, FamilyError> {
        let p = ScalarProfile::parse_definition(text)?;
        self.profiles.insert(p.label().to_string(), p);
        Ok(self)
    }
}

/// A concrete instance of one family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyLaw {
    Free { particles: usize },
    Static { f: ScalarProfile },
    VerySpecial { beta: f64, w: ScalarProfile },
    Anisotropic { g: f64 },
    TwoParticle { f: [ScalarProfile; 2], g: [ScalarProfile; 2] },
    Vsr { beta: f64, f: ScalarProfile },
    MostSpecial { g: f64 },
    RotationAnsatz { f: ScalarProfile, g: ScalarProfile },
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

impl FamilyLaw {
    pub fn id(&self) -> FamilyId {
        match self {
            FamilyLaw::Free { .. } => FamilyId::Free,
            FamilyLaw::Static { .. } => FamilyId::GalileiStatic,
            FamilyLaw::VerySpecial { .. } => FamilyId::GalileiVerySpecial,
            FamilyLaw::Anisotropic { .. } => FamilyId::GalileiAnisotropic,
            FamilyLaw::TwoParticle { .. } => FamilyId::GalileiTwoParticle,
            FamilyLaw::Vsr { .. } => FamilyId::PoincareVsr,
            FamilyLaw::MostSpecial { .. } => FamilyId::PoincareMostSpecial,
            FamilyLaw::RotationAnsatz { .. } => FamilyId::HomogeneousRotationAnsatz,
        }
    }

    pub fn particles(&self) -> usize {
        match self {
            FamilyLaw::Free { particles } => *particles,
            FamilyLaw::TwoParticle { .. } => 2,
            _ => 1,
        }
    }

    pub fn kinematics(&self) -> Option<Kinematics> {
        match self {
            FamilyLaw::Static { .. }
            | FamilyLaw::VerySpecial { .. }
            | FamilyLaw::Anisotropic { .. }
            | FamilyLaw::TwoParticle { .. } => Some(Kinematics::Galilean),
            FamilyLaw::Vsr { .. } | FamilyLaw::MostSpecial { .. } => Some(Kinematics::Poincare),
            FamilyLaw::Free { .. } | FamilyLaw::RotationAnsatz { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        let id = self.id();
        match self {
            FamilyLaw::Free { particles } => format!("{id}(N={particles})"),
            FamilyLaw::Static { f } => format!("{id}[{f}]"),
            FamilyLaw::VerySpecial { beta, w } => format!("{id}[beta={beta};{w}]"),
            FamilyLaw::Anisotropic { g } => format!("{id}[g={g}]"),
            FamilyLaw::TwoParticle { f, g } => format!("{id}[{};{};{};{}]", f[0], f[1], g[0], g[1]),
            FamilyLaw::Vsr { beta, f } => format!("{id}[beta={beta};{f}]"),
            FamilyLaw::MostSpecial { g } => format!("{id}[g={g}]"),
            FamilyLaw::RotationAnsatz { f, g } => format!("{id}[{f};{g}]"),
        }
    }

    /// Accelerations at flattened coordinates.
    pub fn eval<T: Scalar>(&self, c: &[T]) -> Result<Vec<[T; 3]>, DomainError> {
        let n = c.len() / 6;
        let zero = || T::from(0.0);
        // single-particle slices
        let x = &c[0..3];
        let v = &c[3 * n..3 * n + 3];
        Ok(match self {
            FamilyLaw::Free { .. } => (0..n).map(|_| [zero(), zero(), zero()]).collect(),
            FamilyLaw::Static { f } => {
                let fv = f.eval(&[dot(v, v)])?;
                vec![[v[0].clone() * fv.clone(), v[1].clone() * fv.clone(), v[2].clone() * fv]]
            }
            FamilyLaw::VerySpecial { beta, w } => {
                let shifted = v[2].clone() - T::from(*beta);
                let u = v[0].clone().square() + v[1].clone().square() + shifted.clone().square();
                let two_dw = T::from(2.0) * w.derivative_at(u)?;
                vec![[v[0].clone() * two_dw.clone(), v[1].clone() * two_dw.clone(), shifted * two_dw]]
            }
            FamilyLaw::Anisotropic { g } => vec![[zero(), zero(), T::from(*g)]],
            FamilyLaw::TwoParticle { f, g } => {
                let dx: Vec<T> = (0..3).map(|i| c[i].clone() - c[3 + i].clone()).collect();
                let dv: Vec<T> = (0..3).map(|i| c[6 + i].clone() - c[9 + i].clone()).collect();
                let s = [dot(&dv, &dv), dot(&dv, &dx), dot(&dx, &dx)];
                let mut out = Vec::with_capacity(2);
                for a in 0..2 {
                    let fa = f[a].eval(&s)?;
                    let ga = g[a].eval(&s)?;
                    out.push(std::array::from_fn(|l| dv[l].clone() * fa.clone() + dx[l].clone() * ga.clone()));
                }
                out
            }
            FamilyLaw::Vsr { beta, f } => {
                let s = T::from(1.0) - dot(v, v);
                if s.value() <= 0.0 {
                    return Err(DomainError::new("poincare-vsr needs |v| < 1"));
                }
                let shifted = v[2].clone() - T::from(*beta);
                let w = shifted.clone() / s.sqrt();
                let common = shifted.square() * f.eval(&[w])?;
                vec![[
                    v[0].clone() * common.clone(),
                    v[1].clone() * common.clone(),
                    (v[2].clone() - T::from(1.0 / beta)) * common,
                ]]
            }
            FamilyLaw::MostSpecial { g } => {
                let s = T::from(1.0) - dot(v, v);
                if s.value() <= 0.0 {
                    return Err(DomainError::new("poincare-most-special needs |v| < 1"));
                }
                let denom = v[2].clone() - T::from(1.0);
                if denom.value() == 0.0 {
                    return Err(DomainError::new("poincare-most-special is singular at v3 = 1"));
                }
                let s32 = T::from(*g) * s.clone() * s.sqrt();
                vec![[v[0].clone() * s32.clone() / denom.clone(), v[1].clone() * s32.clone() / denom, s32]]
            }
            FamilyLaw::RotationAnsatz { f, g } => {
                let s = [dot(v, v), dot(v, x), dot(x, x)];
                let fv = f.eval(&s)?;
                let gv = g.eval(&s)?;
                vec![std::array::from_fn(|l| x[l].clone() * fv.clone() + v[l].clone() * gv.clone())]
            }
        })
    }

    /// Sampling domain excluding the family's singular loci.
    pub fn default_domain(&self) -> SamplingDomain {
        match self {
            FamilyLaw::Vsr { .. } => SamplingDomain::relativistic(),
            FamilyLaw::MostSpecial { .. } => SamplingDomain::relativistic().with_pole(1.0),
            _ => SamplingDomain::galilean(),
        }
    }
}

/// Construct a family instance as an [`AccelerationLaw`] with its default
/// sampling domain.
pub fn make_family(id: FamilyId, params: &FamilyParams) -> Result<AccelerationLaw, FamilyError> {
    let profile = |name: &'static str, arity: usize| -> Result<ScalarProfile, FamilyError> {
        let p = params.profiles.get(name).ok_or(FamilyError::MissingProfile { family: id, name })?;
        if p.arity() != arity {
            return Err(FamilyError::ArityMismatch { name: name.to_string(), expected: arity, found: p.arity() });
        }
        Ok(p.clone())
    };
    let beta = || params.beta.ok_or(FamilyError::MissingParameter { family: id, name: "beta" });
    let g = || params.g.ok_or(FamilyError::MissingParameter { family: id, name: "g" });
    let family = match id {
        FamilyId::Free => FamilyLaw::Free { particles: 1 },
        FamilyId::GalileiStatic => FamilyLaw::Static { f: profile("f", 1)? },
        FamilyId::GalileiVerySpecial => FamilyLaw::VerySpecial { beta: beta()?, w: profile("W", 1)? },
        FamilyId::GalileiAnisotropic => FamilyLaw::Anisotropic { g: g()? },
        FamilyId::GalileiTwoParticle => FamilyLaw::TwoParticle {
            f: [profile("f1", 3)?, profile("f2", 3)?],
            g: [profile("g1", 3)?, profile("g2", 3)?],
        },
        FamilyId::PoincareVsr => {
            let beta = beta()?;
            if beta == 0.0 {
                return Err(FamilyError::BetaZero);
            }
            FamilyLaw::Vsr { beta, f: profile("F", 1)? }
        }
        FamilyId::PoincareMostSpecial => FamilyLaw::MostSpecial { g: g()? },
        FamilyId::HomogeneousRotationAnsatz => FamilyLaw::RotationAnsatz { f: profile("f", 3)?, g: profile("g", 3)? },
    };
    let domain = family.default_domain();
    Ok(AccelerationLaw::from_family(family, domain))
}

/// The zero-parameter limit of the very-special family: the static family
/// with `f = 2 W'`.
pub fn reduce_very_special_beta0(w: &ScalarProfile) -> Result<AccelerationLaw, FamilyError> {
    let f = w.derivative(2.0).ok_or(FamilyError::ArityMismatch {
        name: w.label().to_string(),
        expected: 1,
        found: w.arity(),
    })?;
    make_family(FamilyId::GalileiStatic, &FamilyParams::new().profile("f", f))
}

/// Largest component-wise gap between `poincare-most-special(g)` and
/// `poincare-vsr(beta = 1, F(w) = g / w^3)` over `points`.
pub fn vsr_most_special_consistency(g: f64, points: &[PhasePoint]) -> Result<f64, DomainError> {
    let most = FamilyLaw::MostSpecial { g };
    let body = Expr::Bin(
        exprdsl::BinOp::Div,
        Box::new(Expr::Num(g)),
        Box::new(Expr::Bin(exprdsl::BinOp::Pow, Box::new(Expr::Var(exprdsl::Var::Arg)), Box::new(Expr::Num(3.0)))),
    );
    let vsr = FamilyLaw::Vsr { beta: 1.0, f: ScalarProfile::new("F", 1, body) };
    let mut gap: f64 = 0.0;
    for p in points {
        let c = p.coords();
        let a = most.eval(&c)?;
        let b = vsr.eval(&c)?;
        for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
            gap = gap.max((x - y).abs());
        }
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(arity: usize, body: &str) -> ScalarProfile {
        ScalarProfile::parse("p", arity, body).unwrap()
    }

    fn at(v: [f64; 3]) -> PhasePoint {
        PhasePoint::single([0.0; 3], v).unwrap()
    }

    fn close(a: &[[f64; 3]], b: &[[f64; 3]], tol: f64) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn very_special_example() {
        let law = make_family(FamilyId::GalileiVerySpecial, &FamilyParams::new().beta(1.0).profile("W", prof(1, "u")))
            .unwrap();
        let a = law.accelerations(&at([0.2, 0.0, 0.5])).unwrap();
        assert!(close(&a, &[[0.4, 0.0, -1.0]], 1e-15), "{a:?}");
    }

    #[test]
    fn vsr_example() {
        let law =
            make_family(FamilyId::PoincareVsr, &FamilyParams::new().beta(2.0).profile("F", prof(1, "1"))).unwrap();
        let a = law.accelerations(&at([0.0; 3])).unwrap();
        assert!(close(&a, &[[0.0, 0.0, -2.0]], 1e-15), "{a:?}");
    }

    #[test]
    fn most_special_example() {
        let law = make_family(FamilyId::PoincareMostSpecial, &FamilyParams::new().g(2.0)).unwrap();
        assert_eq!(law.accelerations(&at([0.0; 3])).unwrap(), vec![[0.0, 0.0, 2.0]]);
        assert!(law.domain().v3_poles.contains(&1.0));
        assert!(law.accelerations(&at([0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn parameter_errors() {
        let e = make_family(FamilyId::PoincareVsr, &FamilyParams::new().beta(0.0).profile("F", prof(1, "1")));
        assert_eq!(e.unwrap_err(), FamilyError::BetaZero);
        let e = make_family(FamilyId::GalileiStatic, &FamilyParams::new());
        assert!(matches!(e, Err(FamilyError::MissingProfile { name: "f", .. })));
        let e = make_family(FamilyId::GalileiStatic, &FamilyParams::new().profile("f", prof(3, "u1")));
        assert!(matches!(e, Err(FamilyError::ArityMismatch { expected: 1, found: 3, .. })));
        let e = make_family(FamilyId::GalileiAnisotropic, &FamilyParams::new());
        assert!(matches!(e, Err(FamilyError::MissingParameter { name: "g", .. })));
        assert!("nope".parse::<FamilyId>().is_err());
        assert_eq!("galilei_two_particle".parse::<FamilyId>().unwrap(), FamilyId::GalileiTwoParticle);
    }

    #[test]
    fn two_particle_relative_form() {
        let params = FamilyParams::new()
            .profile("f1", prof(3, "1"))
            .profile("f2", prof(3, "0"))
            .profile("g1", prof(3, "0"))
            .profile("g2", prof(3, "u3"));
        let law = make_family(FamilyId::GalileiTwoParticle, &params).unwrap();
        assert_eq!(law.particles(), 2);
        let p =
            PhasePoint::new(vec![[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]], vec![[0.5, 0.0, 0.0], [0.0, 0.25, 0.0]]).unwrap();
        let a = law.accelerations(&p).unwrap();
        assert!(close(&a, &[[0.5, -0.25, 0.0], [1.0, 0.0, 0.0]], 1e-15), "{a:?}");
    }

    #[test]
    fn beta_zero_limit() {
        for (w, tol) in [("u", 0.0), ("u^2", 1e-12), ("0", 0.0)] {
            let w = prof(1, w);
            let vs = make_family(FamilyId::GalileiVerySpecial, &FamilyParams::new().beta(0.0).profile("W", w.clone()))
                .unwrap();
            let st = reduce_very_special_beta0(&w).unwrap();
            for p in crate::phasespace::sample_points(&SamplingDomain::galilean(), 100, 1).unwrap() {
                let a = vs.accelerations(&p).unwrap();
                let b = st.accelerations(&p).unwrap();
                assert!(close(&a, &b, tol), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn derivative_profiles() {
        let w = prof(1, "u^3");
        let f = w.derivative(2.0).unwrap();
        assert_eq!(f.eval(&[2.0]).unwrap(), 24.0);
        assert_eq!(f.derivative_at(2.0).unwrap(), 24.0);
        assert!(prof(3, "u1").derivative(1.0).is_none());
    }

    #[test]
    fn consistency_gap() {
        let d = SamplingDomain::relativistic().with_pole(1.0);
        let pts = crate::phasespace::sample_points(&d, 100, 1).unwrap();
        assert!(vsr_most_special_consistency(2.0, &pts).unwrap() <= 1e-10);
        assert_eq!(vsr_most_special_consistency(0.0, &pts).unwrap(), 0.0);
    }
}
