//! Each closed-form family is certified against its symmetry algebra and
//! rejected by the larger groups it is not invariant under.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wlc_core::anomaly::{anomaly_report, condition_residuals, Condition, Verdict};
use wlc_core::generators::{catalog, CatalogKey};
use wlc_core::phasespace::{sample_points, AccelerationLaw, SamplingDomain};
use wlc_core::solutions::{
    make_family, reduce_very_special_beta0, vsr_most_special_consistency, FamilyId, FamilyParams,
};

const TOL: f64 = 1e-9;

fn coef(rng: &mut ChaCha8Rng) -> f64 {
    (rng.gen_range(-1.0..1.0f64) * 1000.0).round() / 1000.0
}

/// Random smooth profile in the variables `args`, never identically zero.
fn random_profile(rng: &mut ChaCha8Rng, name: &str, args: &[&str]) -> String {
    let mut terms = vec![format!("{}", 0.5 + coef(rng).abs())];
    for a in args {
        match rng.gen_range(0..4) {
            0 => terms.push(format!("{}*{a}", coef(rng))),
            1 => terms.push(format!("{}*{a}^2", coef(rng))),
            2 => terms.push(format!("{}*exp({}*{a})", coef(rng), coef(rng) / 2.0)),
            _ => terms.push(format!("{}*sin({a})", coef(rng))),
        }
    }
    format!("{name}({})={}", args.join(","), terms.join("+"))
}

fn family(id: FamilyId, params: FamilyParams) -> Arc<AccelerationLaw> {
    Arc::new(make_family(id, &params).unwrap())
}

fn run(key: CatalogKey, beta: Option<f64>, law: &Arc<AccelerationLaw>, n: usize) -> wlc_core::AnomalyReport {
    let spec = catalog(key, beta).unwrap();
    anomaly_report(&spec, law, law.domain(), n, TOL).unwrap()
}

#[test]
fn static_family_certifies_its_subgroup_only() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let f = random_profile(&mut rng, "f", &["u"]);
        let law = family(FamilyId::GalileiStatic, FamilyParams::new().profile_text(&f).unwrap());
        let r = run(CatalogKey::GalileiStatic, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Pass, "{f}: {}", r.max_pair_defect());
        let r = run(CatalogKey::FullGalilei, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Fail, "{f}");
        assert!(r.witness.unwrap().source.contains('G'));
    }
}

#[test]
fn very_special_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for beta in [0.5, 1.0, 2.0] {
        for _ in 0..3 {
            let w = random_profile(&mut rng, "W", &["u"]);
            let law = family(FamilyId::GalileiVerySpecial, FamilyParams::new().beta(beta).profile_text(&w).unwrap());
            let r = run(CatalogKey::GalileiVerySpecial, Some(beta), &law, 100);
            assert_eq!(r.verdict, Verdict::Pass, "beta={beta} {w}: {}", r.max_pair_defect());
            assert_eq!(run(CatalogKey::FullGalilei, None, &law, 50).verdict, Verdict::Fail);
        }
    }
}

#[test]
fn very_special_reduces_to_static() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let w = random_profile(&mut rng, "W", &["u"]);
    let params = FamilyParams::new().beta(0.0).profile_text(&w).unwrap();
    let vs = make_family(FamilyId::GalileiVerySpecial, &params).unwrap();
    let st = reduce_very_special_beta0(&params.profiles["W"]).unwrap();
    for p in sample_points(&SamplingDomain::galilean(), 100, 1).unwrap() {
        let (a, b) = (vs.accelerations(&p).unwrap(), st.accelerations(&p).unwrap());
        for (x, y) in a[0].iter().zip(&b[0]) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn anisotropic_family() {
    let law = family(FamilyId::GalileiAnisotropic, FamilyParams::new().g(-9.8));
    assert_eq!(run(CatalogKey::GalileiAnisotropic, None, &law, 100).verdict, Verdict::Pass);
    for perturbed in ["A=(0.1,0,-9.8)", "A=(0,0,x3)"] {
        let law = Arc::new(AccelerationLaw::parse(perturbed, SamplingDomain::galilean()).unwrap());
        let r = run(CatalogKey::GalileiAnisotropic, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Fail, "{perturbed}");
        assert!(r.witness.unwrap().value >= 1e-3);
    }
}

#[test]
fn vsr_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for beta in [0.5, 2.0] {
        for _ in 0..3 {
            let f = random_profile(&mut rng, "F", &["u"]);
            let law = family(FamilyId::PoincareVsr, FamilyParams::new().beta(beta).profile_text(&f).unwrap());
            let r = run(CatalogKey::PoincareVsr, Some(beta), &law, 100);
            assert_eq!(r.verdict, Verdict::Pass, "beta={beta} {f}: {}", r.max_pair_defect());
            assert_eq!(run(CatalogKey::FullPoincare, None, &law, 50).verdict, Verdict::Fail);
        }
    }
}

#[test]
fn most_special_family() {
    for g in [-1.0, 2.0] {
        let law = family(FamilyId::PoincareMostSpecial, FamilyParams::new().g(g));
        let r = run(CatalogKey::PoincareMostSpecial, None, &law, 200);
        assert_eq!(r.pairs.len(), 28);
        assert_eq!(r.verdict, Verdict::Pass, "g={g}: {}", r.max_pair_defect());
        let pts = sample_points(law.domain(), 100, 1).unwrap();
        assert!(vsr_most_special_consistency(g, &pts).unwrap() <= 1e-10);
    }
}

#[test]
fn two_particle_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let args = ["u1", "u2", "u3"];
    for _ in 0..5 {
        let mut params = FamilyParams::new();
        for name in ["f1", "f2", "g1", "g2"] {
            params = params.profile_text(&random_profile(&mut rng, name, &args)).unwrap();
        }
        let law = family(FamilyId::GalileiTwoParticle, params);
        let r = run(CatalogKey::FullGalilei, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.max_pair_defect());
        assert!(r.condition(Condition::IIIG).sup_residual <= TOL);
    }
}

#[test]
fn homogeneous_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let pool = ["x1*v2", "sin(v3)", "exp(x2)", "v1^2-x3", "cos(x1*v1)", "x2*x3", "v2/(2+x1)"];
    for _ in 0..5 {
        let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())];
        let text = format!("A=({},{},{})", pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let law = Arc::new(AccelerationLaw::parse(&text, SamplingDomain::galilean()).unwrap());
        assert_eq!(run(CatalogKey::HomogeneousGalilei, None, &law, 50).verdict, Verdict::Pass, "{text}");
    }
    let args = ["u1", "u2", "u3"];
    for _ in 0..3 {
        let params = FamilyParams::new()
            .profile_text(&random_profile(&mut rng, "f", &args))
            .unwrap()
            .profile_text(&random_profile(&mut rng, "g", &args))
            .unwrap();
        let law = family(FamilyId::HomogeneousRotationAnsatz, params);
        let r = run(CatalogKey::HomogeneousPoincare, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.unwrap().source.contains('K'));
        for pair in r.pairs.iter().filter(|p| p.lhs.starts_with('J') && p.rhs.starts_with('J')) {
            assert!(pair.sup_defect <= TOL);
        }
    }
}

#[test]
fn poincare_no_go_via_condition_iiip() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let f = random_profile(&mut rng, "f", &["u"]);
        let law = Arc::new(
            make_family(FamilyId::GalileiStatic, &FamilyParams::new().profile_text(&f).unwrap())
                .unwrap()
                .with_domain(SamplingDomain::relativistic()),
        );
        let r = run(CatalogKey::FullPoincare, None, &law, 100);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.condition(Condition::IIIP).sup_residual >= 1e-3);
    }
}

#[test]
fn linear_drag_condition_values() {
    let law = Arc::new(AccelerationLaw::parse("A=(v1,v2,v3)", SamplingDomain::galilean()).unwrap());
    for p in sample_points(&SamplingDomain::galilean(), 20, 1).unwrap() {
        let r = condition_residuals(&law, &p).unwrap();
        let v = p.v()[0];
        for i in 0..3 {
            for l in 0..3 {
                let delta = if i == l { 1.0 } else { 0.0 };
                // A = v f(v^2) with f = 1
                let expect = 2.0 * v[i] * v[l] + delta;
                assert!((r.iiip[0][i][l] - expect).abs() < 1e-14);
            }
        }
    }
}
