//! Certification of conservativity: hypothesis checks, law replays,
//! sampled probes and machine-readable reports.

pub mod bundle;
pub mod config;
pub mod probe;
pub mod report;
pub mod section2;
pub mod section3;
pub mod section4;

pub use bundle::{load, monoid_of_trimodule, save, Bundle};
pub use config::ProbeConfig;
pub use probe::{cayley_target, sample_nats, conservativity_probe, l_target, lan_target, nat_is_iso, ProbeStats, ProbeTarget};
pub use report::{Check, Provenance, Report, Status, Verdict, Witness};
pub use section2::{certify_section2, replay_diagram};
pub use section3::{certify_section3, certify_section3_recovery};
pub use section4::{augmentation, cayley_probe, falsify_necessity, group_of, maschke_split, opcat_obstruction, sign_representation, split_epi_pipeline};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::encat::examples::{group_algebra, group_algebra_map, indiscrete, indiscrete_inclusion, terminal, z3_into_s3};
    use crate::encat::{generate_copresheaf, CopresheafSpec, VFunctor};
    use crate::frobenius::{group_algebra_frobenius, indiscrete_frobenius};
    use crate::groups::{FiniteGroup, FiniteMonoid};
    use crate::vbase::{BaseCtx, Field};

    fn quick() -> ProbeConfig {
        ProbeConfig { samples: 4, min_probes: 40, ..ProbeConfig::default() }
    }

    fn z3_s3(field: Field) -> (VFunctor, crate::frobenius::OpcatStructure) {
        let (h, g, img) = z3_into_s3();
        let a = Arc::new(group_algebra(&h, field).unwrap());
        let c = Arc::new(group_algebra(&g, field).unwrap());
        let (_, op) = group_algebra_frobenius(&h, field).unwrap();
        (group_algebra_map(a, c, &h, &g, &img).unwrap(), op)
    }

    #[test]
    fn subgroup_inclusion_certifies() {
        let (n, op) = z3_s3(Field::Rationals);
        let r = certify_section2(&n, &op, &quick()).unwrap();
        assert_eq!(r.status(), Status::Certified, "{}", r.to_human());
    }

    #[test]
    fn identity_on_indiscrete_certifies() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let n = VFunctor::identity(a.clone());
        let (_, op) = indiscrete_frobenius(2, Field::Rationals).unwrap();
        let r = certify_section2(&n, &op, &quick()).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn indiscrete_inclusion_certifies() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let c = Arc::new(indiscrete(3, Field::Rationals).unwrap());
        let n = indiscrete_inclusion(a, c, vec![0, 1]).unwrap();
        let (_, op) = indiscrete_frobenius(2, Field::Rationals).unwrap();
        let r = certify_section2(&n, &op, &quick()).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn replay_on_terminal_commutes() {
        let a = Arc::new(terminal(BaseCtx::FinVect(Field::Rationals)));
        let n = VFunctor::identity(a.clone());
        let (_, op) = group_algebra_frobenius(&FiniteGroup::trivial(), Field::Rationals).unwrap();
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![1] }).unwrap();
        let r = replay_diagram(&n, &op, &f, 0).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn replay_on_z2_commutes() {
        let g = FiniteGroup::cyclic(2);
        let (a, op) = group_algebra_frobenius(&g, Field::Rationals).unwrap();
        let n = VFunctor::identity(a.clone());
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![1] }).unwrap();
        let r = replay_diagram(&n, &op, &f, 0).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn recovery_agrees_with_direct_route() {
        let (n, op) = z3_s3(Field::Rationals);
        let r = certify_section3_recovery(&n, &op, &quick()).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn zero_family_fails_the_unit_phase() {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(2), Field::Rationals).unwrap());
        let b = Arc::new(a.opposite());
        let nhat = section3::zero_family(b.clone(), a.clone()).unwrap();
        let cfg = quick();
        let battery = cfg.battery(&Arc::new(b.opposite())).unwrap();
        let r = certify_section3(&nhat, None, &battery, &cfg, "zero family").unwrap();
        assert!(r.phase_passed(section2::HYPOTHESES));
        assert!(!r.phase_passed(section2::UNIT));
        assert_eq!(r.status(), Status::Violation);
    }

    #[test]
    fn maschke_on_s3_and_z2() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric3()] {
            let a = Arc::new(group_algebra(&g, Field::Rationals).unwrap());
            let r = maschke_split(&a, &quick()).unwrap();
            assert!(r.is_certified(), "{}", r.to_human());
            assert!(r.checks.iter().any(|c| c.phase == "averaging" && c.verdict == Verdict::Pass));
        }
    }

    #[test]
    fn maschke_over_f2_reports_averaging_unavailable() {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(2), Field::prime(2).unwrap()).unwrap());
        let r = maschke_split(&a, &quick()).unwrap();
        assert!(r.checks.iter().any(|c| c.phase == "averaging" && c.verdict == Verdict::NotApplicable));
        assert!(r.checks.iter().all(|c| c.phase != "averaging" || c.verdict == Verdict::NotApplicable));
    }

    #[test]
    fn split_pipeline_matches_direct_route() {
        let (n, op) = z3_s3(Field::Rationals);
        let cfg = quick();
        let split = split_epi_pipeline(&n, &cfg).unwrap();
        let direct = certify_section2(&n, &op, &cfg).unwrap();
        assert!(split.is_certified(), "{}", split.to_human());
        assert_eq!(split.status(), direct.status());
    }

    #[test]
    fn cayley_certifies_for_small_monoids() {
        for m in [FiniteMonoid::trivial(), FiniteMonoid::cyclic(2), FiniteMonoid::left_zero_with_unit()] {
            let r = cayley_probe(&m, &quick()).unwrap();
            assert!(r.is_certified(), "{}", r.to_human());
        }
    }

    #[test]
    fn falsification_report() {
        let r = falsify_necessity(&quick()).unwrap();
        assert!(r.is_certified(), "{}", r.to_human());
    }

    #[test]
    fn reports_are_deterministic() {
        let (n, op) = z3_s3(Field::prime(3).unwrap());
        let cfg = ProbeConfig { seed: 7, ..quick() };
        let a = certify_section2(&n, &op, &cfg).unwrap().to_json();
        let b = certify_section2(&n, &op, &cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}
