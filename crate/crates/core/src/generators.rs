//! Relativity-group generators realized as vector fields on the tangent
//! bundle of configuration space, and the catalog of (sub)algebras.
//!
//! With `eps` the Levi-Civita symbol (`eps_123 = +1`) and sums over
//! particles `a` understood:
//!
//! | generator | ∂/∂x coefficient        | ∂/∂v coefficient                       |
//! |-----------|-------------------------|----------------------------------------|
//! | `P_i`     | `δ_ik`                  | 0                                      |
//! | `J_i`     | `eps_ijk x_j`           | `eps_ijk v_j`                          |
//! | `H`       | `v_k`                   | `A_k`                                  |
//! | `G_i`     | 0                       | `-δ_ik`                                |
//! | `K_i`     | `x_i v_k`               | `v_i v_k - δ_ik + x_i A_k`             |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::{lift_coords, DomainError, Dual1, Scalar};
use crate::phasespace::{AccelerationLaw, Kinematics, PhasePoint};

/// Levi-Civita symbol on 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// One of the thirteen canonical generators; axes are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorId {
    P(usize),
    J(usize),
    H,
    G(usize),
    K(usize),
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 13] = [
        GeneratorId::P(0),
        GeneratorId::P(1),
        GeneratorId::P(2),
        GeneratorId::J(0),
        GeneratorId::J(1),
        GeneratorId::J(2),
        GeneratorId::H,
        GeneratorId::G(0),
        GeneratorId::G(1),
        GeneratorId::G(2),
        GeneratorId::K(0),
        GeneratorId::K(1),
        GeneratorId::K(2),
    ];

    fn ordinal(self) -> usize {
        match self {
            GeneratorId::P(i) => i,
            GeneratorId::J(i) => 3 + i,
            GeneratorId::H => 6,
            GeneratorId::G(i) => 7 + i,
            GeneratorId::K(i) => 10 + i,
        }
    }

    /// Whether the coefficients depend on the acceleration law.
    pub fn needs_law(self) -> bool {
        matches!(self, GeneratorId::H | GeneratorId::K(_))
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::P(i) => write!(f, "P{}", i + 1),
            GeneratorId::J(i) => write!(f, "J{}", i + 1),
            GeneratorId::H => write!(f, "H"),
            GeneratorId::G(i) => write!(f, "G{}", i + 1),
            GeneratorId::K(i) => write!(f, "K{}", i + 1),
        }
    }
}

impl FromStr for GeneratorId {
    type Err = GeneratorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorId::ALL
            .into_iter()
            .find(|g| g.to_string() == s)
            .ok_or_else(|| GeneratorError::UnknownGenerator(s.to_string()))
    }
}

/// Formal linear combination of canonical generators.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Combo(BTreeMap<GeneratorId, f64>);

impl Combo {
    pub fn zero() -> Self {
        Combo(BTreeMap::new())
    }

    pub fn single(id: GeneratorId) -> Self {
        Self::zero().plus(1.0, id)
    }

    pub fn from_terms(terms: &[(f64, GeneratorId)]) -> Self {
        terms.iter().fold(Self::zero(), |c, &(k, id)| c.plus(k, id))
    }

    pub fn plus(mut self, coef: f64, id: GeneratorId) -> Self {
        let e = self.0.entry(id).or_insert(0.0);
        *e += coef;
        if *e == 0.0 {
            self.0.remove(&id);
        }
        self
    }

    pub fn add_scaled(mut self, coef: f64, other: &Combo) -> Self {
        for (&id, &c) in &other.0 {
            self = self.plus(coef * c, id);
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (GeneratorId, f64)> + '_ {
        self.0.iter().map(|(&id, &c)| (id, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, id: GeneratorId) -> f64 {
        self.0.get(&id).copied().unwrap_or(0.0)
    }

    /// Dense coefficient vector over [`GeneratorId::ALL`].
    fn dense(&self) -> [f64; 13] {
        let mut d = [0.0; 13];
        for (id, c) in self.terms() {
            d[id.ordinal()] = c;
        }
        d
    }

    fn mentions(&self, pred: impl Fn(GeneratorId) -> bool) -> bool {
        self.0.keys().any(|&id| pred(id))
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (id, c)) in self.terms().enumerate() {
            let sign = if c < 0.0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let m = c.abs();
            if m == 1.0 {
                write!(f, "{sign}{id}")?;
            } else {
                write!(f, "{sign}{m}*{id}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("generator {id} needs a law for {expected} particle(s), got one for {found}")]
    ParticleMismatch { id: GeneratorId, expected: usize, found: usize },
    #[error("{id} is a Lorentz boost but law `{law}` is declared Galilean")]
    KinematicsMismatch { id: GeneratorId, law: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// Coefficients of one canonical generator, flattened `(ξ, η)` over 6N.
fn generator_coeffs<T: Scalar>(id: GeneratorId, x: &[[T; 3]], v: &[[T; 3]], acc: &[[T; 3]]) -> Vec<T> {
    let n = x.len();
    let zero = || T::from(0.0);
    let mut xi: Vec<T> = (0..3 * n).map(|_| zero()).collect();
    let mut eta: Vec<T> = (0..3 * n).map(|_| zero()).collect();
    for a in 0..n {
        for k in 0..3 {
            let r = 3 * a + k;
            match id {
                GeneratorId::P(i) => {
                    if i == k {
                        xi[r] = T::from(1.0);
                    }
                }
                GeneratorId::J(i) => {
                    for j in 0..3 {
                        let e = levi_civita(i, j, k);
                        if e != 0.0 {
                            xi[r] = xi[r].clone() + T::from(e) * x[a][j].clone();
                            eta[r] = eta[r].clone() + T::from(e) * v[a][j].clone();
                        }
                    }
                }
                GeneratorId::H => {
                    xi[r] = v[a][k].clone();
                    eta[r] = acc[a][k].clone();
                }
                GeneratorId::G(i) => {
                    if i == k {
                        eta[r] = T::from(-1.0);
                    }
                }
                GeneratorId::K(i) => {
                    xi[r] = x[a][i].clone() * v[a][k].clone();
                    let delta = if i == k { 1.0 } else { 0.0 };
                    eta[r] = v[a][i].clone() * v[a][k].clone() - T::from(delta) + x[a][i].clone() * acc[a][k].clone();
                }
            }
        }
    }
    xi.extend(eta);
    xi
}

fn split<T: Clone>(c: &[T]) -> (Vec<[T; 3]>, Vec<[T; 3]>) {
    let n = c.len() / 6;
    let tri = |k: usize| [c[k].clone(), c[k + 1].clone(), c[k + 2].clone()];
    ((0..n).map(|a| tri(3 * a)).collect(), (0..n).map(|a| tri(3 * n + 3 * a)).collect())
}

/// A vector field on phase space: a formal combination of canonical
/// generators, realized with a given acceleration law.
#[derive(Debug, Clone)]
pub struct VectorField {
    combo: Combo,
    law: Arc<AccelerationLaw>,
}

impl VectorField {
    pub fn new(combo: Combo, law: Arc<AccelerationLaw>) -> Self {
        VectorField { combo, law }
    }

    pub fn particles(&self) -> usize {
        self.law.particles()
    }

    pub fn combo(&self) -> &Combo {
        &self.combo
    }

    pub fn law(&self) -> &AccelerationLaw {
        &self.law
    }

    fn coeffs<T: Scalar>(&self, coords: &[T], acc: Option<&[[T; 3]]>) -> Result<Vec<T>, DomainError> {
        let (x, v) = split(coords);
        let owned;
        let acc = match acc {
            Some(a) => a,
            None if self.combo.mentions(GeneratorId::needs_law) => {
                owned = self.law.eval(coords)?;
                &owned
            }
            None => &[],
        };
        let mut out: Vec<T> = (0..coords.len()).map(|_| T::from(0.0)).collect();
        for (id, c) in self.combo.terms() {
            let g = generator_coeffs(id, &x, &v, acc);
            for (o, gk) in out.iter_mut().zip(g) {
                *o = o.clone() + T::from(c) * gk;
            }
        }
        Ok(out)
    }

    /// Coefficients `(ξ, η)` at `p`, flattened in the canonical ordering.
    pub fn evaluate(&self, p: &PhasePoint) -> Result<Vec<f64>, DomainError> {
        self.coeffs(&p.coords(), None)
    }

    /// Coefficients with their exact phase-space gradients.
    pub fn jet(&self, p: &PhasePoint) -> Result<Vec<Dual1>, DomainError> {
        let frame = Frame::new(&self.law, p)?;
        self.jet_in(&frame)
    }

    pub(crate) fn jet_in(&self, frame: &Frame) -> Result<Vec<Dual1>, DomainError> {
        self.coeffs(&frame.coords, Some(&frame.acc))
    }
}

/// Lifted coordinates and accelerations at one point, shared between the
/// fields evaluated there.
pub(crate) struct Frame {
    pub coords: Vec<Dual1>,
    pub acc: Vec<[Dual1; 3]>,
}

impl Frame {
    pub fn new(law: &AccelerationLaw, p: &PhasePoint) -> Result<Self, DomainError> {
        let coords = lift_coords(p);
        let acc = law.eval(&coords)?;
        Ok(Frame { coords, acc })
    }
}

/// The canonical generator `id` realized with `law`.
pub fn build_generator(id: GeneratorId, law: Arc<AccelerationLaw>) -> Result<VectorField, GeneratorError> {
    if matches!(id, GeneratorId::K(_)) && law.kinematics() == Some(Kinematics::Galilean) {
        return Err(GeneratorError::KinematicsMismatch { id, law: law.descriptor().to_string() });
    }
    Ok(VectorField::new(Combo::single(id), law))
}

/// `(ξ(p), η(p))` flattened in the canonical ordering.
pub fn evaluate_field(f: &VectorField, p: &PhasePoint) -> Result<Vec<f64>, DomainError> {
    f.evaluate(p)
}

/// Brackets of canonical generators with the law-independent part only.
fn canonical_bracket(a: GeneratorId, b: GeneratorId) -> Combo {
    listed_bracket(a, b)
        .or_else(|| listed_bracket(b, a).map(|c| Combo::zero().add_scaled(-1.0, &c)))
        .unwrap_or_default()
}

/// Nonzero brackets in one orientation.
fn listed_bracket(a: GeneratorId, b: GeneratorId) -> Option<Combo> {
    use GeneratorId::*;
    let eps_sum = |i: usize, j: usize, sign: f64, mk: fn(usize) -> GeneratorId| {
        (0..3).fold(Combo::zero(), |c, k| c.plus(sign * levi_civita(i, j, k), mk(k)))
    };
    let c = match (a, b) {
        (J(i), P(j)) => eps_sum(i, j, -1.0, P),
        (J(i), J(j)) => eps_sum(i, j, -1.0, J),
        (J(i), G(j)) => eps_sum(i, j, -1.0, G),
        (J(i), K(j)) => eps_sum(i, j, -1.0, K),
        (H, G(i)) => Combo::single(P(i)),
        (P(i), K(j)) if i == j => Combo::single(H),
        (H, K(i)) => Combo::single(P(i)),
        (K(i), K(j)) => eps_sum(i, j, 1.0, J),
        _ => return None,
    };
    (!c.is_zero()).then_some(c)
}

/// Bracket of two formal combinations by bilinearity.
pub fn combo_bracket(x: &Combo, y: &Combo) -> Combo {
    let mut out = Combo::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            out = out.add_scaled(ca * cb, &canonical_bracket(a, b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKey {
    FullGalilei,
    FullPoincare,
    GalileiStatic,
    GalileiVerySpecial,
    GalileiAnisotropic,
    PoincareVsr,
    PoincareMostSpecial,
    HomogeneousGalilei,
    HomogeneousPoincare,
}

impl CatalogKey {
    pub const ALL: [CatalogKey; 9] = [
        CatalogKey::FullGalilei,
        CatalogKey::FullPoincare,
        CatalogKey::GalileiStatic,
        CatalogKey::GalileiVerySpecial,
        CatalogKey::GalileiAnisotropic,
        CatalogKey::PoincareVsr,
        CatalogKey::PoincareMostSpecial,
        CatalogKey::HomogeneousGalilei,
        CatalogKey::HomogeneousPoincare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogKey::FullGalilei => "full-galilei",
            CatalogKey::FullPoincare => "full-poincare",
            CatalogKey::GalileiStatic => "galilei-static",
            CatalogKey::GalileiVerySpecial => "galilei-very-special",
            CatalogKey::GalileiAnisotropic => "galilei-anisotropic",
            CatalogKey::PoincareVsr => "poincare-vsr",
            CatalogKey::PoincareMostSpecial => "poincare-most-special",
            CatalogKey::HomogeneousGalilei => "homogeneous-galilei",
            CatalogKey::HomogeneousPoincare => "homogeneous-poincare",
        }
    }

    pub fn needs_beta(self) -> bool {
        matches!(self, CatalogKey::GalileiVerySpecial | CatalogKey::PoincareVsr)
    }

    /// Basis formulas with `beta` left symbolic.
    pub fn symbolic_basis(self) -> Vec<String> {
        let fixed = |tail: [&str; 3]| ["P1", "P2", "P3", "H"].into_iter().chain(tail).map(String::from).collect();
        match self {
            CatalogKey::GalileiVerySpecial => fixed(["beta*G1+J2", "beta*G2-J1", "J3"]),
            CatalogKey::PoincareVsr => fixed(["K1+beta*J2", "K2-beta*J1", "J3"]),
            _ => catalog(self, None).map(|s| s.basis.into_iter().map(|e| e.label).collect()).unwrap_or_default(),
        }
    }

    pub fn kinematics(self) -> Kinematics {
        match self {
            CatalogKey::FullGalilei
            | CatalogKey::GalileiStatic
            | CatalogKey::GalileiVerySpecial
            | CatalogKey::GalileiAnisotropic
            | CatalogKey::HomogeneousGalilei => Kinematics::Galilean,
            _ => Kinematics::Poincare,
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogKey {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('_', "-");
        CatalogKey::ALL.into_iter().find(|k| k.as_str() == norm).ok_or_else(|| CatalogError::UnknownKey(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown group `{0}`")]
    UnknownKey(String),
    #[error("group `{0}` needs a beta parameter")]
    BetaRequired(CatalogKey),
    #[error("basis of `{0}` is linearly dependent")]
    Dependent(String),
    #[error("basis of `{spec}` does not close: [{lhs}, {rhs}] = {bracket}")]
    Closure { spec: String, lhs: String, rhs: String, bracket: String },
    #[error("structure constants of `{0}` violate the Jacobi identity")]
    Jacobi(String),
    #[error("basis element `{0}` mixes Galilean and Lorentz boosts")]
    MixedBoosts(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub label: String,
    pub combo: Combo,
}

/// A Lie (sub)algebra: basis over the canonical generators plus structure
/// constants `[e_a, e_b] = Σ_c c[a][b][c] e_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraSpec {
    pub key: CatalogKey,
    pub kinematics: Kinematics,
    pub beta: Option<f64>,
    pub basis: Vec<BasisElement>,
    structure: Vec<Vec<Vec<f64>>>,
}

const CLOSURE_TOL: f64 = 1e-12;

impl SubalgebraSpec {
    /// Build from a basis, computing and checking structure constants.
    pub fn from_basis(
        key: CatalogKey,
        kinematics: Kinematics,
        beta: Option<f64>,
        basis: Vec<Combo>,
    ) -> Result<Self, CatalogError> {
        let name = key.as_str().to_string();
        for c in &basis {
            if c.mentions(|g| matches!(g, GeneratorId::G(_))) && c.mentions(|g| matches!(g, GeneratorId::K(_))) {
                return Err(CatalogError::MixedBoosts(c.to_string()));
            }
        }
        let n = basis.len();
        let cols: Vec<[f64; 13]> = basis.iter().map(Combo::dense).collect();
        let gram: Vec<Vec<f64>> =
            (0..n).map(|a| (0..n).map(|b| (0..13).map(|k| cols[a][k] * cols[b][k]).sum()).collect()).collect();
        let mut structure = vec![vec![vec![0.0; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let br = combo_bracket(&basis[a], &basis[b]).dense();
                let rhs: Vec<f64> = (0..n).map(|c| (0..13).map(|k| cols[c][k] * br[k]).sum()).collect();
                let coef = solve(&gram, &rhs).ok_or_else(|| CatalogError::Dependent(name.clone()))?;
                let resid = (0..13)
                    .map(|k| (br[k] - (0..n).map(|c| coef[c] * cols[c][k]).sum::<f64>()).abs())
                    .fold(0.0, f64::max);
                if resid > CLOSURE_TOL {
                    return Err(CatalogError::Closure {
                        spec: name,
                        lhs: basis[a].to_string(),
                        rhs: basis[b].to_string(),
                        bracket: combo_bracket(&basis[a], &basis[b]).to_string(),
                    });
                }
                // snap rounding noise
                structure[a][b] = coef.into_iter().map(|c| if c.abs() < CLOSURE_TOL { 0.0 } else { c }).collect();
            }
        }
        let basis = basis.into_iter().map(|combo| BasisElement { label: combo.to_string(), combo }).collect();
        let spec = SubalgebraSpec { key, kinematics, beta, basis, structure };
        if spec.jacobi_defect() > 1e-10 || spec.antisymmetry_defect() > 0.0 {
            return Err(CatalogError::Jacobi(name));
        }
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        self.key.as_str()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coefficients of `[e_a, e_b]` in the basis.
    pub fn constants(&self, a: usize, b: usize) -> &[f64] {
        &self.structure[a][b]
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    worst = worst.max((self.structure[a][b][c] + self.structure[b][a][c]).abs());
                }
            }
        }
        worst
    }

    /// Largest coefficient of the cyclic sum `[[a,b],c] + [[b,c],a] + [[c,a],b]`.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let s = &self.structure;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let t: f64 = (0..n)
                            .map(|d| s[a][b][d] * s[d][c][e] + s[b][c][d] * s[d][a][e] + s[c][a][d] * s[d][b][e])
                            .sum();
                        worst = worst.max(t.abs());
                    }
                }
            }
        }
        worst
    }

    /// Basis fields realized with `law`.
    pub fn fields(&self, law: &Arc<AccelerationLaw>) -> Vec<VectorField> {
        self.basis.iter().map(|e| VectorField::new(e.combo.clone(), Arc::clone(law))).collect()
    }

    /// Warning when the law's declared kinematics disagree with the group's.
    pub fn kinematics_warning(&self, law: &AccelerationLaw) -> Option<String> {
        match law.kinematics() {
            Some(k) if k != self.kinematics => Some(format!(
                "law `{}` is declared {k} but group `{}` is {}",
                law.descriptor(),
                self.name(),
                self.kinematics
            )),
            _ => None,
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m.iter().zip(rhs).map(|(row, r)| row.iter().copied().chain([*r]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        a[r][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Build a catalog entry. `beta` is required for the parametrized groups
/// and ignored otherwise.
pub fn catalog(key: CatalogKey, beta: Option<f64>) -> Result<SubalgebraSpec, CatalogError> {
    use GeneratorId::*;
    let one = |id| Combo::single(id);
    let ps = || (0..3).map(|i| Combo::single(P(i)));
    let js = || (0..3).map(|i| Combo::single(J(i)));
    let gs = || (0..3).map(|i| Combo::single(G(i)));
    let ks = || (0..3).map(|i| Combo::single(K(i)));
    let beta = if key.needs_beta() { Some(beta.ok_or(CatalogError::BetaRequired(key))?) } else { None };
    let b = beta.unwrap_or(0.0);
    let basis: Vec<Combo> = match key {
        CatalogKey::FullGalilei => ps().chain(js()).chain([one(H)]).chain(gs()).collect(),
        CatalogKey::FullPoincare => ps().chain(js()).chain([one(H)]).chain(ks()).collect(),
        CatalogKey::GalileiStatic => ps().chain([one(H)]).chain(js()).collect(),
        // The null-rotation-type elements are oriented as βG1 + J2, βG2 - J1
        // (and K1 + βJ2, K2 - βJ1 below). With the rotation fields above this
        // is the orientation that leaves the closed-form families invariant.
        CatalogKey::GalileiVerySpecial => ps()
            .chain([
                one(H),
                Combo::from_terms(&[(b, G(0)), (1.0, J(1))]),
                Combo::from_terms(&[(b, G(1)), (-1.0, J(0))]),
                one(J(2)),
            ])
            .collect(),
        CatalogKey::GalileiAnisotropic => ps().chain([one(H)]).chain(gs()).chain([one(J(2))]).collect(),
        CatalogKey::PoincareVsr => ps()
            .chain([
                one(H),
                Combo::from_terms(&[(1.0, K(0)), (b, J(1))]),
                Combo::from_terms(&[(1.0, K(1)), (-b, J(0))]),
                one(J(2)),
            ])
            .collect(),
        CatalogKey::PoincareMostSpecial => ps()
            .chain([
                one(H),
                Combo::from_terms(&[(1.0, K(0)), (1.0, J(1))]),
                Combo::from_terms(&[(1.0, K(1)), (-1.0, J(0))]),
                one(J(2)),
                one(K(2)),
            ])
            .collect(),
        CatalogKey::HomogeneousGalilei => js().chain(gs()).collect(),
        CatalogKey::HomogeneousPoincare => js().chain(ks()).collect(),
    };
    SubalgebraSpec::from_basis(key, key.kinematics(), beta, basis)
}
