use zassenhaus::cohomology::TrgSign;
use zassenhaus::group::{
    build_group, normal_closure, parse_word, product, zassenhaus_recursive, FiniteGroup, GroupLike,
    GroupSpec, Subgroup,
};
use zassenhaus::magnus::{build_magnus_group, degree_filtration};
use zassenhaus::pairing::{coker_ker_pairing, PairingContext, Verdict, WitnessOptions};

fn cyclic(p: u32, order: usize) -> FiniteGroup {
    build_group(&GroupSpec::Cyclic { p, order }).unwrap()
}

fn magnus(p: u32, d: usize, m: usize) -> FiniteGroup {
    build_magnus_group(p, d, m).unwrap().group
}

fn assert_theorem_checks(ctx: &PairingContext) {
    let s = ctx.summary();
    assert_eq!(s.trg_rep_failures, 0, "{s:?}");
    assert_eq!(s.trg_rep_agreement, Verdict::Established);
    assert_eq!(s.right_nondegenerate, Verdict::Established);
    assert_eq!(s.kernel_equalities, Verdict::Established, "{:?}", s.kernels);
    assert_eq!(s.five_term_exact, Verdict::Established);
    assert!(s.trg_rep_pairs > 0);
}

#[test]
fn cyclic_four_pairing() {
    let g = cyclic(2, 4);
    let z = zassenhaus_recursive(&g);
    let ctx = PairingContext::new(&g, z.term(2), 2, &WitnessOptions::default()).unwrap();
    assert_theorem_checks(&ctx);
    assert_eq!(ctx.left_basis().len(), 1);
    assert_eq!(ctx.right_gens().len(), 1);
    let x = g.generators()[0];
    let g2 = g.mul(x, x);
    assert_eq!(ctx.pair_via_trg(g2, 0).unwrap(), 1);
    assert_eq!(ctx.pair_via_rep(g2, 0).unwrap(), 1);
    assert_eq!(ctx.pair_via_trg(0, 0).unwrap(), 0);
    assert_eq!(ctx.left_nondegenerate(), Verdict::Established);
}

#[test]
fn free_quotient_pairing_has_full_rank() {
    let mg = build_magnus_group(2, 2, 4).unwrap();
    let g = &mg.group;
    let deg = degree_filtration(&mg);
    let z = zassenhaus_recursive(g);
    let ctx = PairingContext::new(g, z.term(2), 2, &WitnessOptions::default()).unwrap();
    assert_theorem_checks(&ctx);
    let layer = (z.term(2).order() / z.term(3).order()).trailing_zeros() as usize;
    assert_eq!(layer, (deg.term(2).order() / deg.term(3).order()).trailing_zeros() as usize);
    assert_eq!(layer, 3);
    assert_eq!(ctx.rank(), 3);
    assert_eq!(ctx.summary().perfect, Verdict::Established);
    // additivity in σ
    for &a in z.term(2).elements() {
        for &b in z.term(2).elements() {
            for j in 0..ctx.right_gens().len() {
                let lhs = ctx.pair_via_trg(g.mul(a, b), j).unwrap();
                let rhs = (ctx.pair_via_trg(a, j).unwrap() + ctx.pair_via_trg(b, j).unwrap()) % 2;
                assert_eq!(lhs, rhs);
            }
        }
    }
    // σ ∈ N ∩ G_(3) pairs trivially
    for &s in z.term(3).elements() {
        for j in 0..ctx.right_gens().len() {
            assert_eq!(ctx.pair_via_trg(s, j).unwrap(), 0);
        }
    }
}

#[test]
fn pairing_at_p3() {
    let g = magnus(3, 2, 3);
    let z = zassenhaus_recursive(&g);
    for sign in [TrgSign::Negated, TrgSign::Literal] {
        let opts = WitnessOptions { sign, ..Default::default() };
        let ctx = PairingContext::new(&g, z.term(2), 2, &opts).unwrap();
        let s = ctx.summary();
        assert_eq!(s.right_nondegenerate, Verdict::Established);
        assert_eq!(s.five_term_exact, Verdict::Established);
        assert_eq!(s.kernel_equalities, Verdict::Established);
        match sign {
            TrgSign::Negated => {
                assert_eq!(s.trg_rep_failures, 0);
                assert!(!s.opposite_sign_also_validates);
                assert_eq!(ctx.rank(), ctx.left_basis().len());
            }
            TrgSign::Literal => assert!(s.trg_rep_failures > 0),
        }
    }
}

#[test]
fn contexts_reject_bad_subgroups() {
    let g = magnus(2, 2, 3);
    let z = zassenhaus_recursive(&g);
    assert!(PairingContext::new(&g, &g.whole(), 2, &WitnessOptions::default()).is_err());
    assert!(PairingContext::new(&g, z.term(2), 1, &WitnessOptions::default()).is_err());
}

#[test]
fn trivial_normal_subgroup() {
    let g = magnus(2, 2, 3);
    let ctx = PairingContext::new(&g, &Subgroup::trivial(g.order()), 2, &WitnessOptions::default()).unwrap();
    assert_eq!(ctx.left_basis().len(), 0);
    assert_eq!(ctx.left_nondegenerate(), Verdict::Established);
    assert_eq!(ctx.right_nondegenerate(), Verdict::Established);
}

#[test]
fn coker_ker_on_nested_contexts() {
    let g = magnus(2, 2, 4);
    let z = zassenhaus_recursive(&g);
    let opts = WitnessOptions::default();
    let big = PairingContext::new(&g, z.term(2), 2, &opts).unwrap();

    let deep = PairingContext::new(&g, z.term(3), 2, &opts).unwrap();
    let c = coker_ker_pairing(&deep, &big).unwrap();
    assert_eq!(c.commutativity_failures, 0);
    assert_eq!((c.coker_dim, c.ker_dim, c.rank), (3, 3, 3));
    assert_eq!(c.nondegenerate, Verdict::Established);

    let same = coker_ker_pairing(&big, &big).unwrap();
    assert_eq!((same.coker_dim, same.ker_dim), (0, 0));

    let comm = parse_word(&g, "[x1,x2]").unwrap();
    let r = product(&g, &normal_closure(&g, &[comm]), z.term(3));
    let mid = PairingContext::new(&g, &r, 2, &opts).unwrap();
    assert_theorem_checks(&mid);
    let c = coker_ker_pairing(&mid, &big).unwrap();
    assert_eq!(c.commutativity_failures, 0);
    assert!(c.commutativity_pairs > 0);
    assert_eq!((c.coker_dim, c.ker_dim, c.rank), (2, 2, 2));
    assert_eq!(c.nondegenerate, Verdict::Established);
}
