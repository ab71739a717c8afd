use zassenhaus::group::{build_group, parse_word, zassenhaus_recursive, FiniteGroup, GroupLike, GroupSpec};
use zassenhaus::magnus::build_magnus_group;
use zassenhaus::pairing::{Verdict, WitnessOptions};
use zassenhaus::rep::code_to_vector;
use zassenhaus::verifier::{
    intersect_kernels, run_theorem_harness, CatalogParams, HarnessConfig, Separation, SeparationRoute,
    Separator,
};

fn cyclic(p: u32, order: usize) -> FiniteGroup {
    build_group(&GroupSpec::Cyclic { p, order }).unwrap()
}

fn magnus(p: u32, d: usize, m: usize) -> FiniteGroup {
    build_magnus_group(p, d, m).unwrap().group
}

#[test]
fn z4_single_rep_has_trivial_kernel() {
    let g = cyclic(2, 4);
    let z = zassenhaus_recursive(&g);
    let ki = intersect_kernels(&g, &z, 2, &CatalogParams::default()).unwrap();
    assert_eq!(ki.intersection.order(), 1);
    assert!(ki.standard_sufficed);
    assert_eq!(ki.systems_examined, 1);
    assert_eq!(ki.verdict(), Verdict::Established);
}

#[test]
fn rank_one_intersection_is_the_frattini_subgroup() {
    for g in [cyclic(2, 4), cyclic(3, 9), magnus(2, 2, 3), magnus(3, 2, 2)] {
        let z = zassenhaus_recursive(&g);
        let ki = intersect_kernels(&g, &z, 1, &CatalogParams::default()).unwrap();
        assert_eq!(ki.intersection, *z.term(2));
        assert_eq!(ki.invariant_violations, 0);
    }
}

#[test]
fn z4_separation_routes() {
    let g = cyclic(2, 4);
    let x = g.generators()[0];
    let mut sep = Separator::new(&g, 2, WitnessOptions::default()).unwrap();
    assert!(matches!(sep.separate(0).unwrap(), Separation::Impossible));

    let Separation::Found { rep, depth, route } = sep.separate(x).unwrap() else { panic!() };
    assert_eq!((depth, route), (1, SeparationRoute::Character));
    assert_eq!(rep.system().rank(), 2);
    assert_ne!(rep.image_code(x), 0);

    let x2 = g.mul(x, x);
    let Separation::Found { rep, depth, route } = sep.separate(x2).unwrap() else { panic!() };
    assert_eq!((depth, route), (2, SeparationRoute::Massey));
    // ρ(g²) = 1 + e13: only the corner coordinate is set.
    let v = code_to_vector(rep.system().field(), rep.system().total_dim(), rep.image_code(x2)).entries();
    assert_eq!(v, vec![0, 0, 1]);
}

#[test]
fn commutator_is_separated_at_rank_two() {
    let g = magnus(2, 2, 4);
    let sigma = parse_word(&g, "[x1,x2]").unwrap();
    let mut sep = Separator::new(&g, 2, WitnessOptions::default()).unwrap();
    let Separation::Found { rep, depth, .. } = sep.separate(sigma).unwrap() else { panic!() };
    assert_eq!(depth, 2);
    assert_ne!(rep.image_code(sigma), 0);
    assert!(!rep.kernel(&g).contains(sigma));
}

#[test]
fn harness_on_z4() {
    let report = run_theorem_harness(&HarnessConfig::new(GroupSpec::Cyclic { p: 2, order: 4 }, 2)).unwrap();
    assert_eq!(report.verdicts.overall, Verdict::Established);
    assert_eq!(report.exit_code(), 0);
    assert_eq!(report.filtration_orders, vec![4, 2, 1]);
    assert_eq!(report.separation.as_ref().unwrap().separated, 3);
    assert!(report.pairings.iter().all(|p| p.agree));
}

#[test]
fn harness_on_free_quotient_p2() {
    let config = HarnessConfig::new(GroupSpec::Magnus { p: 2, d: 2, m: 4 }, 2);
    let report = run_theorem_harness(&config).unwrap();
    assert_eq!(report.hypothesis.status, "exact");
    assert_eq!(report.levels[1].intersection_order, 4);
    assert_eq!(report.zassenhaus_term.len(), 4);
    let sep = report.separation.as_ref().unwrap();
    assert_eq!(sep.separated, 124);
    assert!(sep.inconclusive.is_empty());
    assert_eq!(report.verdicts.overall, Verdict::Established);

    let again = run_theorem_harness(&config).unwrap();
    assert_eq!(report.to_canonical_json(), again.to_canonical_json());
}

#[test]
fn harness_on_free_quotient_p3() {
    let report = run_theorem_harness(&HarnessConfig::new(GroupSpec::Magnus { p: 3, d: 2, m: 3 }, 2)).unwrap();
    assert_eq!(report.group.order, 27);
    assert_eq!(report.levels[1].intersection_order, 1);
    assert_eq!(report.separation.as_ref().unwrap().separated, 26);
    assert_eq!(report.verdicts.overall, Verdict::Established);
}

#[test]
fn hypothesis_by_order_comparison() {
    // Z/4 = S/R with S free on one generator and R = S^4 ≤ S_(2).
    let report = run_theorem_harness(&HarnessConfig::new(GroupSpec::Cyclic { p: 2, order: 4 }, 2)).unwrap();
    assert_eq!(report.hypothesis.status, "assumed");
    // Z/2 = S/S^2 but S/S_(3) = Z/4, so R is not inside S_(3).
    let mut config = HarnessConfig::new(GroupSpec::Cyclic { p: 2, order: 2 }, 3);
    config.separate_all = false;
    let report = run_theorem_harness(&config).unwrap();
    assert_eq!(report.hypothesis.status, "violated");
}
