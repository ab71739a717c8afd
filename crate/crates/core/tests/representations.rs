use std::collections::{HashMap, VecDeque};

use zassenhaus::cohomology::{lift_through_center, Cohomology, LiftOutcome};
use zassenhaus::group::{build_group, zassenhaus_recursive, FiniteGroup, GroupLike, GroupSpec};
use zassenhaus::magnus::build_magnus_group;
use zassenhaus::multsys::{Catalog, MultSystem, UGroup};
use zassenhaus::rep::{enumerate_homs, enumerate_reps, Representation, Target, DEFAULT_BUDGET};

fn cyclic(p: u32, order: usize) -> FiniteGroup {
    build_group(&GroupSpec::Cyclic { p, order }).unwrap()
}

fn unipotent(p: u32, size: usize) -> FiniteGroup {
    build_group(&GroupSpec::MatrixUnipotent { p, size, generators: None }).unwrap()
}

fn magnus(p: u32, d: usize, m: usize) -> FiniteGroup {
    build_magnus_group(p, d, m).unwrap().group
}

/// Whether the subgroup of G × U generated by `(s_i, u_i)` is the graph of
/// a function.
fn is_graph(g: &FiniteGroup, u: &UGroup, images: &[usize]) -> bool {
    let gens: Vec<(usize, usize)> = g.generators().iter().copied().zip(images.iter().copied()).collect();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    seen.insert(0, 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((x, y)) = queue.pop_front() {
        for &(s, t) in &gens {
            let (x2, y2) = (g.mul(x, s), u.mul(y, t));
            match seen.get(&x2) {
                Some(&y3) if y3 != y2 => return false,
                Some(_) => {}
                None => {
                    seen.insert(x2, y2);
                    queue.push_back((x2, y2));
                }
            }
        }
    }
    true
}

fn brute_force_hom_count(g: &FiniteGroup, u: &UGroup) -> usize {
    let r = g.generators().len();
    let total = u.order().pow(r as u32);
    (0..total)
        .filter(|&t| {
            let images: Vec<usize> = (0..r).map(|j| t / u.order().pow(j as u32) % u.order()).collect();
            is_graph(g, u, &images)
        })
        .count()
}

#[test]
fn documented_hom_counts() {
    let trivial = cyclic(2, 1);
    let s1 = MultSystem::standard(2, 1).unwrap();
    assert_eq!(enumerate_reps(&trivial, &s1, Target::Full, DEFAULT_BUDGET).unwrap().0.len(), 1);
    assert_eq!(enumerate_reps(&cyclic(2, 2), &s1, Target::Full, DEFAULT_BUDGET).unwrap().0.len(), 2);
    let s2 = MultSystem::standard(2, 2).unwrap();
    let z4 = cyclic(2, 4);
    let (reps, e) = enumerate_reps(&z4, &s2, Target::Full, DEFAULT_BUDGET).unwrap();
    assert!(!e.truncated);
    let u = UGroup::full(&s2).unwrap();
    let order_divides_4 = (0..u.order()).filter(|&x| u.pow(x, 4) == 0).count();
    assert_eq!(order_divides_4, 8);
    assert_eq!(reps.len(), order_divides_4);
}

#[test]
fn enumeration_matches_graph_oracle() {
    let groups = [cyclic(2, 4), unipotent(2, 3), magnus(2, 2, 2), cyclic(3, 9)];
    for g in &groups {
        let p = g.prime();
        let systems: Vec<MultSystem> = Catalog::new(p, 2, 1).unwrap().take(6).collect();
        for sys in &systems {
            for target in [Target::Full, Target::Bar] {
                let u = target.group(sys).unwrap();
                if u.order().pow(g.generators().len() as u32) > 1 << 14 {
                    continue;
                }
                let e = enumerate_homs(g, &u, DEFAULT_BUDGET);
                assert_eq!(e.homs.len(), brute_force_hom_count(g, &u), "{target:?}");
                for h in &e.homs {
                    assert!(is_graph(g, &u, h));
                }
            }
        }
    }
}

#[test]
fn budget_truncation_is_flagged() {
    let g = magnus(2, 2, 3);
    let sys = MultSystem::standard(2, 2).unwrap();
    let u = UGroup::full(&sys).unwrap();
    let full = enumerate_homs(&g, &u, DEFAULT_BUDGET);
    assert!(!full.truncated);
    let cut = enumerate_homs(&g, &u, 5);
    assert!(cut.truncated);
    assert!(cut.homs.len() < full.homs.len());
    assert_eq!(enumerate_homs(&g, &u, DEFAULT_BUDGET).homs, full.homs);
}

#[test]
fn reps_are_trivial_on_deep_zassenhaus_terms() {
    for g in [magnus(2, 2, 3), unipotent(2, 3), magnus(3, 2, 2)] {
        let z = zassenhaus_recursive(&g);
        let systems: Vec<MultSystem> = Catalog::new(g.prime(), 2, 1).unwrap().take(8).collect();
        for sys in &systems {
            let n = sys.rank();
            let (full, _) = enumerate_reps(&g, sys, Target::Full, DEFAULT_BUDGET).unwrap();
            let (bar, _) = enumerate_reps(&g, sys, Target::Bar, DEFAULT_BUDGET).unwrap();
            for r in &full {
                assert!(z.term(n + 1).is_subgroup_of(&r.kernel(&g)));
                let u = UGroup::full(sys).unwrap();
                assert!(r.is_multiplicative(&g, &u));
            }
            for r in &bar {
                assert!(z.term(n).is_subgroup_of(&r.kernel(&g)));
            }
        }
    }
}

#[test]
fn lift_examples() {
    let sys = MultSystem::standard(2, 2).unwrap();
    let ubar = UGroup::bar(&sys).unwrap();
    let ufull = UGroup::full(&sys).unwrap();
    // r12 = r23 = 1 is code 0b11 in both targets.
    let z4 = cyclic(2, 4);
    let rbar = Representation::from_generator_codes(&z4, &sys, Target::Bar, &ubar, &[0b11]).unwrap();
    let coh = Cohomology::new(&z4).unwrap();
    let rho = lift_through_center(&z4, &coh, &rbar).unwrap().lifted().expect("lift exists on Z/4");
    assert_eq!(rho.project(), rbar);
    let g = z4.generators()[0];
    assert_eq!(rho.image_code(g) & 0b11, 0b11);
    assert_eq!(rho.image_code(z4.mul(g, g)), 0b100);
    assert!(rho.is_multiplicative(&z4, &ufull));

    let z2 = cyclic(2, 2);
    let rbar2 = Representation::from_generator_codes(&z2, &sys, Target::Bar, &ubar, &[0b11]).unwrap();
    let coh2 = Cohomology::new(&z2).unwrap();
    match lift_through_center(&z2, &coh2, &rbar2).unwrap() {
        LiftOutcome::Lifted(_) => panic!("no lift on Z/2"),
        LiftOutcome::Obstructed(m) => assert!(!coh2.is_coboundary(&m)),
    }
    let trivial = Representation::trivial(&z2, &sys, Target::Bar);
    let lifted = lift_through_center(&z2, &coh2, &trivial).unwrap().lifted().unwrap();
    assert!(lifted.is_trivial());
}

#[test]
fn non_homomorphisms_are_rejected() {
    let sys = MultSystem::standard(2, 2).unwrap();
    let u = UGroup::full(&sys).unwrap();
    // An element of order 4 cannot be the image of the generator of Z/2.
    assert!(Representation::from_generator_codes(&cyclic(2, 2), &sys, Target::Full, &u, &[0b11]).is_err());
}

#[test]
fn embedding_preserves_kernels() {
    let g = magnus(2, 2, 3);
    let sys = MultSystem::standard(2, 1).unwrap();
    let (big, e) = sys.embed_lower_rank().unwrap();
    let ubig = UGroup::full(&big).unwrap();
    let (reps, _) = enumerate_reps(&g, &sys, Target::Full, DEFAULT_BUDGET).unwrap();
    for r in &reps {
        let up = r.embed(&big, &e).unwrap();
        assert!(up.is_multiplicative(&g, &ubig));
        assert_eq!(up.kernel(&g), r.kernel(&g));
    }
}

#[test]
fn record_round_trip() {
    let g = unipotent(2, 3);
    let sys = MultSystem::standard(2, 2).unwrap();
    let (reps, _) = enumerate_reps(&g, &sys, Target::Full, DEFAULT_BUDGET).unwrap();
    for r in reps.iter().take(10) {
        let json = serde_json::to_string(&r.to_record()).unwrap();
        let back: zassenhaus::rep::RepresentationRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(&Representation::from_record(&g, &back).unwrap(), r);
    }
}
