//! Opcategory (Frobenius) structures `δ`, `ε` on a V-category, their law
//! checkers, and the coretraction `fb -> ∏_x A(x,b) ⊗ fx`.

mod instances;
mod structure;

pub use instances::{discrete_frobenius, group_algebra_frobenius, indiscrete_frobenius};
pub use structure::{
    level_label,
    check_coassociativity, check_counit, check_delta_naturality, coretraction_check, left_inverse, opcat_map,
    NaturalityLevel, NaturalityReport, OpcatMap, OpcatStructure,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::{generate_copresheaf, representable, CopresheafSpec};
    use crate::groups::FiniteGroup;
    use crate::rng::task_rng;
    use crate::vbase::random::random_map;
    use crate::vbase::{BaseCtx, Field, VObj};

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn z2_delta_expands_over_the_basis() {
        let (_, op) = group_algebra_frobenius(&FiniteGroup::cyclic(2), q()).unwrap();
        let v = BaseCtx::FinVect(q());
        let d = op.delta(0, 0, 0);
        // e ↦ e⊗e + t⊗t, t ↦ t⊗e + e⊗t; index x·2 + y
        let col = |c: usize| (0..4).filter(|r| v.entry(d, *r, c) == q().one()).collect::<Vec<_>>();
        assert_eq!(col(0), vec![0, 3]);
        assert_eq!(col(1), vec![1, 2]);
        assert!(check_counit(&op).unwrap().is_lawful());
    }

    #[test]
    fn trivial_group_structure_is_the_unitor() {
        let (_, op) = group_algebra_frobenius(&FiniteGroup::trivial(), q()).unwrap();
        let v = BaseCtx::FinVect(q());
        assert_eq!(*op.delta(0, 0, 0), v.identity(VObj(1)));
        assert_eq!(*op.epsilon(0), v.identity(VObj(1)));
    }

    #[test]
    fn perturbed_counit_is_reported() {
        let (_, op) = group_algebra_frobenius(&FiniteGroup::cyclic(2), q()).unwrap();
        let v = BaseCtx::FinVect(q());
        let all_ones = v.index_map(VObj(2), VObj(1), |_| 0);
        let bad = op.with_epsilon(0, all_ones).unwrap();
        let rep = check_counit(&bad).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].at, "(*,*)");
    }

    #[test]
    fn group_algebras_are_full_opcategories_in_every_characteristic() {
        let cases = [
            (FiniteGroup::symmetric3(), q()),
            (FiniteGroup::cyclic(3), Field::prime(3).unwrap()),
            (FiniteGroup::cyclic(2), Field::prime(2).unwrap()),
            (FiniteGroup::cyclic(4), q()),
        ];
        for (g, field) in cases {
            let (_, op) = group_algebra_frobenius(&g, field).unwrap();
            assert!(check_counit(&op).unwrap().is_lawful());
            let nat = check_delta_naturality(&op).unwrap();
            assert_eq!(nat.level, Some(NaturalityLevel::FullOpcat));
            assert!(check_coassociativity(&op).unwrap().is_lawful());
        }
    }

    #[test]
    fn indiscrete_and_discrete_structures_certify() {
        for (n, field) in [(1, q()), (2, q()), (3, Field::prime(5).unwrap())] {
            for (_, op) in [indiscrete_frobenius(n, field).unwrap(), discrete_frobenius(n, field).unwrap()] {
                assert!(check_counit(&op).unwrap().is_lawful());
                assert!(check_delta_naturality(&op).unwrap().certifies(op.level));
            }
        }
    }

    #[test]
    fn random_delta_perturbation_names_its_triple() {
        let (_, op) = indiscrete_frobenius(2, q()).unwrap();
        let v = BaseCtx::FinVect(q());
        let mut rng = task_rng(11, "perturb");
        let d = loop {
            let d = random_map(v, VObj(1), VObj(1), &mut rng).unwrap();
            if d != v.identity(VObj(1)) {
                break d;
            }
        };
        let bad = op.with_delta(0, 1, 0, d).unwrap();
        let nat = check_delta_naturality(&bad).unwrap();
        assert_eq!(nat.level, None);
        assert!(nat.in_a.violations.iter().chain(&nat.in_b.violations).any(|w| w.at.contains("0") && w.at.contains("1")));
    }

    #[test]
    fn opposite_structure_is_lawful() {
        let (_, op) = group_algebra_frobenius(&FiniteGroup::symmetric3(), q()).unwrap();
        let o = op.opposite().unwrap();
        assert!(check_counit(&o).unwrap().is_lawful());
        assert_eq!(check_delta_naturality(&o).unwrap().level, Some(NaturalityLevel::FullOpcat));
    }

    #[test]
    fn opcat_map_on_terminal_is_the_unitor() {
        let v = BaseCtx::FinVect(q());
        let (a, op) = indiscrete_frobenius(1, q()).unwrap();
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![2] }).unwrap();
        let m = opcat_map(&op, &f, 0).unwrap();
        assert_eq!(m.into_product, v.identity(VObj(2)));
        assert!(coretraction_check(&op, &f, 0, &m).unwrap().is_lawful());
    }

    #[test]
    fn opcat_map_is_a_coretraction_on_group_algebras() {
        let (a, op) = group_algebra_frobenius(&FiniteGroup::cyclic(2), q()).unwrap();
        let f = representable(&a, 0).unwrap();
        let m = opcat_map(&op, &f, 0).unwrap();
        assert!(m.into_end.is_some());
        let left = left_inverse(&op, &f, 0, &m).unwrap();
        assert_eq!(BaseCtx::FinVect(q()).compose(&left, &m.into_product).unwrap(), BaseCtx::FinVect(q()).identity(VObj(2)));

        let (a, op) = group_algebra_frobenius(&FiniteGroup::symmetric3(), q()).unwrap();
        for spec in [
            CopresheafSpec::Free { gens: vec![1] },
            CopresheafSpec::QuotientOfFree { gens: vec![1], relations: vec![1], seed: 4 },
            CopresheafSpec::QuotientOfFree { gens: vec![2], relations: vec![2], seed: 9 },
        ] {
            let f = generate_copresheaf(&a, &spec).unwrap();
            let m = opcat_map(&op, &f, 0).unwrap();
            assert!(coretraction_check(&op, &f, 0, &m).unwrap().is_lawful());
            assert!(m.into_end.is_some());
        }
    }

    #[test]
    fn discrete_opcat_map_vanishes_off_the_diagonal() {
        let (a, op) = discrete_frobenius(2, q()).unwrap();
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![1, 2] }).unwrap();
        let v = BaseCtx::FinVect(q());
        for b in 0..2 {
            let m = opcat_map(&op, &f, b).unwrap();
            assert!(v.is_zero_map(&m.components[1 - b]));
            assert!(coretraction_check(&op, &f, b, &m).unwrap().is_lawful());
        }
    }
}
