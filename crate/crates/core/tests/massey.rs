use std::collections::BTreeMap;

use zassenhaus::cohomology::{cup, lift_through_center, Cochain1, Cohomology};
use zassenhaus::fp::BilinearMap;
use zassenhaus::group::{build_group, FiniteGroup, GroupLike, GroupSpec};
use zassenhaus::magnus::build_magnus_group;
use zassenhaus::massey::{
    check_dwyer, count_defining_systems, dwyer_to_rep, dwyer_to_system, for_each_defining_system,
    massey_value, phi_sum_witness, solve_defining_system, DefiningSystem, PhiAccumulator,
};
use zassenhaus::multsys::{Catalog, MultSystem, UGroup};
use zassenhaus::rep::{enumerate_reps, Target, DEFAULT_BUDGET};

fn cyclic(p: u32, order: usize) -> FiniteGroup {
    build_group(&GroupSpec::Cyclic { p, order }).unwrap()
}

fn magnus(p: u32, d: usize, m: usize) -> FiniteGroup {
    build_magnus_group(p, d, m).unwrap().group
}

fn first_level(sys: &MultSystem, homs: &[Cochain1]) -> BTreeMap<(usize, usize), Cochain1> {
    (1..=sys.rank()).filter(|&i| (i, i + 1) != (1, sys.rank() + 1)).zip(homs).map(|(i, a)| ((i, i + 1), a.clone())).collect()
}

#[test]
fn zero_and_vacuous_systems_are_valid() {
    let g = magnus(2, 2, 3);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 3).unwrap();
    let zero = DefiningSystem::zero(&sys, g.order());
    assert!(zero.validate(&g).is_ok());
    assert!(massey_value(&coh, &zero).unwrap().is_zero_class());
    assert!(dwyer_to_rep(&g, &zero).unwrap().is_trivial());

    // n = 2: any two cocycles form a defining system.
    let sys2 = MultSystem::standard(2, 2).unwrap();
    for a in coh.h1() {
        for b in coh.h1() {
            let m = solve_defining_system(&coh, &sys2, &first_level(&sys2, &[a.clone(), b.clone()])).unwrap().unwrap();
            assert!(m.validate(&g).is_ok());
        }
    }
}

#[test]
fn z2_value_is_the_cup_square() {
    let g = cyclic(2, 2);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 2).unwrap();
    let chi = coh.h1()[0].clone();
    let m = solve_defining_system(&coh, &sys, &first_level(&sys, &[chi.clone(), chi.clone()])).unwrap().unwrap();
    let v = massey_value(&coh, &m).unwrap();
    assert!(!v.is_zero_class());
    let f = coh.field();
    let sq = cup(&chi, &chi, &BilinearMap::field_product(f)).unwrap();
    assert_eq!(v.residual, coh.class_residual(&sq));
}

#[test]
fn z4_value_vanishes_and_lifts() {
    let g = cyclic(2, 4);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 2).unwrap();
    let chi = coh.h1()[0].clone();
    let m = solve_defining_system(&coh, &sys, &first_level(&sys, &[chi.clone(), chi])).unwrap().unwrap();
    assert!(massey_value(&coh, &m).unwrap().is_zero_class());
    let rbar = dwyer_to_rep(&g, &m).unwrap();
    assert!(lift_through_center(&g, &coh, &rbar).unwrap().is_lifted());
}

#[test]
fn triple_system_on_free_quotient() {
    let g = magnus(2, 2, 3);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 3).unwrap();
    let h = coh.h1().to_vec();
    let mut found = 0;
    for a in &h {
        for b in &h {
            for c in &h {
                let first = first_level(&sys, &[a.clone(), b.clone(), c.clone()]);
                if let Some(m) = solve_defining_system(&coh, &sys, &first).unwrap() {
                    assert!(m.validate(&g).is_ok());
                    let rbar = dwyer_to_rep(&g, &m).unwrap();
                    let u = UGroup::bar(&sys).unwrap();
                    assert!(rbar.is_multiplicative(&g, &u));
                    assert_eq!(dwyer_to_system(&g, &rbar).unwrap(), m);
                    found += 1;
                }
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn dwyer_round_trip_on_z4() {
    let g = cyclic(2, 4);
    let sys = MultSystem::standard(2, 2).unwrap();
    let (homs, _) = enumerate_reps(&g, &sys, Target::Bar, DEFAULT_BUDGET).unwrap();
    let mut systems = Vec::new();
    for r in &homs {
        let m = dwyer_to_system(&g, r).unwrap();
        assert_eq!(&dwyer_to_rep(&g, &m).unwrap(), r);
        systems.push(m);
    }
    // Homs Z/4 → Ū are pairs of characters: 2 · 2.
    assert_eq!(homs.len(), 4);
    systems.dedup();
    assert_eq!(systems.len(), homs.len());
}

#[test]
fn dwyer_counts_agree_on_small_groups() {
    let groups = [cyclic(2, 2), cyclic(2, 4), magnus(2, 2, 2), cyclic(3, 3), cyclic(3, 9)];
    for g in &groups {
        let coh = Cohomology::new(g).unwrap();
        for n in [2, 3] {
            let systems: Vec<MultSystem> = Catalog::new(g.prime(), n, 1).unwrap().take(12).collect();
            for sys in &systems {
                let c = check_dwyer(g, &coh, sys, DEFAULT_BUDGET).unwrap();
                assert!(c.is_clean(), "{c:?}");
                assert_eq!(c.defining_systems, c.bar_homs as u128);
            }
        }
    }
}

#[test]
fn enumerated_and_counted_systems_agree() {
    let g = magnus(2, 2, 2);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 3).unwrap();
    let h = coh.h1().to_vec();
    let first = first_level(&sys, &[h[0].clone(), h[1].clone(), h[0].clone()]);
    let mut walked = 0u128;
    for_each_defining_system(&coh, &sys, &first, &mut |m| {
        assert!(m.validate(&g).is_ok());
        walked += 1;
        true
    })
    .unwrap();
    assert_eq!(walked, count_defining_systems(&coh, &sys, &first).unwrap());
}

#[test]
fn sum_witnesses() {
    let g = cyclic(2, 2);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 2).unwrap();
    let chi = coh.h1()[0].clone();
    let w = solve_defining_system(&coh, &sys, &first_level(&sys, &[chi.clone(), chi])).unwrap().unwrap();
    let double = phi_sum_witness(&w, &w).unwrap();
    assert!(double.validate(&g).is_ok());
    assert!(massey_value(&coh, &double).unwrap().is_zero_class());
    let with_zero = phi_sum_witness(&w, &DefiningSystem::zero(&sys, g.order())).unwrap();
    assert_eq!(
        massey_value(&coh, &with_zero).unwrap().residual,
        massey_value(&coh, &w).unwrap().residual
    );
}

#[test]
fn accumulator_span_is_closed_under_sums() {
    let g = magnus(2, 2, 2);
    let coh = Cohomology::new(&g).unwrap();
    let sys = MultSystem::standard(2, 2).unwrap();
    let h = coh.h1().to_vec();
    let mut acc = PhiAccumulator::new(&coh);
    let mut witnesses = Vec::new();
    let mut last_rank = 0;
    for a in &h {
        for b in &h {
            let w = solve_defining_system(&coh, &sys, &first_level(&sys, &[a.clone(), b.clone()])).unwrap().unwrap();
            acc.insert(w.clone()).unwrap();
            assert!(acc.rank() <= last_rank + 1);
            last_rank = acc.rank();
            witnesses.push(w);
        }
    }
    for w1 in &witnesses {
        for w2 in &witnesses {
            let s = phi_sum_witness(w1, w2).unwrap();
            let before = acc.rank();
            let v = massey_value(&coh, &s).unwrap();
            let expect = {
                let mut r = massey_value(&coh, w1).unwrap().residual;
                r.add_assign(&massey_value(&coh, w2).unwrap().residual);
                r
            };
            assert_eq!(v.residual, expect);
            acc.insert(s).unwrap();
            assert_eq!(acc.rank(), before);
        }
    }
    // the three products χ_i ∪ χ_j span H²((ℤ/2)²)
    assert_eq!(acc.rank(), 3);
}
