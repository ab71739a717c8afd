use zassenhaus::group::{
    build_group, closure, commutator_subgroup, elementary_quotient_basis, lower_central_series,
    parse_word, power_subgroup, zassenhaus_lazard, zassenhaus_recursive, GroupLike, GroupSpec,
    Subgroup,
};
use zassenhaus::magnus::{build_magnus_group, degree_filtration};

fn cyclic(p: u32, order: usize) -> zassenhaus::group::FiniteGroup {
    build_group(&GroupSpec::Cyclic { p, order }).unwrap()
}

fn unipotent(p: u32, size: usize) -> zassenhaus::group::FiniteGroup {
    build_group(&GroupSpec::MatrixUnipotent {
        p,
        size,
        generators: None,
    })
    .unwrap()
}

#[test]
fn commutator_and_power_examples() {
    let z4 = cyclic(2, 4);
    let whole = z4.whole();
    assert!(commutator_subgroup(&z4, &whole, &whole).is_trivial());
    assert_eq!(power_subgroup(&z4, &whole, 2).order(), 2);

    let u3 = unipotent(2, 3);
    let w = u3.whole();
    let c = commutator_subgroup(&u3, &w, &w);
    assert_eq!(c.order(), 2);
    // the center of the Heisenberg group mod 2
    for &z in c.elements() {
        for x in 0..u3.order() {
            assert_eq!(u3.mul(z, x), u3.mul(x, z));
        }
    }
}

#[test]
fn commutator_subgroup_matches_all_pairs_oracle() {
    let g = build_magnus_group(2, 2, 3).unwrap().group;
    let w = g.whole();
    let fast = commutator_subgroup(&g, &w, &w);
    let mut all = Vec::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            all.push(g.comm(a, b));
        }
    }
    assert_eq!(fast, closure(&g, &all));
}

#[test]
fn quotient_examples() {
    let z4 = cyclic(2, 4);
    let triv = Subgroup::trivial(4);
    assert_eq!(z4.quotient(&triv).unwrap().group.order(), 4);
    assert_eq!(z4.quotient(&z4.whole()).unwrap().group.order(), 1);
    let h = closure(&z4, &[z4.mul(1, 1)]);
    let q = z4.quotient(&h).unwrap();
    assert_eq!(q.group.order(), 2);
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(q.projection[z4.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
        }
    }
    let kernel: Vec<usize> = (0..4).filter(|&x| q.projection[x] == 0).collect();
    assert_eq!(kernel, h.elements());
}

#[test]
fn quotient_rejects_non_normal() {
    let u3 = unipotent(2, 3);
    let h = closure(&u3, &[u3.generators()[0]]);
    assert!(u3.quotient(&h).is_err());
}

#[test]
fn lower_central_series_examples() {
    let z4 = cyclic(2, 4);
    assert_eq!(
        lower_central_series(&z4).iter().map(|s| s.order()).collect::<Vec<_>>(),
        vec![4, 1]
    );
    let u3 = unipotent(2, 3);
    assert_eq!(
        lower_central_series(&u3).iter().map(|s| s.order()).collect::<Vec<_>>(),
        vec![8, 2, 1]
    );
    let u4 = unipotent(2, 4);
    assert_eq!(
        lower_central_series(&u4).iter().map(|s| s.order()).collect::<Vec<_>>(),
        vec![64, 8, 2, 1]
    );
}

#[test]
fn zassenhaus_examples() {
    let z2 = cyclic(2, 2);
    assert_eq!(zassenhaus_recursive(&z2).orders(), vec![2, 1]);
    let z3 = cyclic(3, 3);
    assert_eq!(zassenhaus_recursive(&z3).orders(), vec![3, 1]);
    let z4 = cyclic(2, 4);
    assert_eq!(zassenhaus_recursive(&z4).orders(), vec![4, 2, 1]);
    let u3 = unipotent(2, 3);
    let f = zassenhaus_recursive(&u3);
    assert_eq!(f.orders(), vec![8, 2, 1]);
    assert_eq!(f, zassenhaus_lazard(&u3));
}

#[test]
fn three_way_agreement_on_magnus_groups() {
    for (p, d, m, orders) in [
        (2, 2, 2, vec![4, 1]),
        (2, 2, 3, vec![32, 8, 1]),
        (2, 2, 4, vec![128, 32, 4, 1]),
        (3, 2, 3, vec![27, 3, 1]),
    ] {
        let mg = build_magnus_group(p, d, m).unwrap();
        let rec = zassenhaus_recursive(&mg.group);
        assert_eq!(rec.orders(), orders, "magnus({p},{d},{m})");
        assert_eq!(rec, zassenhaus_lazard(&mg.group));
        assert_eq!(rec, degree_filtration(&mg));
    }
}

#[test]
fn elementary_quotient_examples() {
    let z4 = cyclic(2, 4);
    let w = z4.whole();
    assert_eq!(elementary_quotient_basis(&z4, &w, &w, &[]).unwrap().dim(), 0);
    let h = closure(&z4, &[2]);
    let qb = elementary_quotient_basis(&z4, &w, &h, &[]).unwrap();
    assert_eq!(qb.dim(), 1);
    assert!(elementary_quotient_basis(&z4, &w, &Subgroup::trivial(4), &[]).is_err());

    let mg = build_magnus_group(2, 2, 3).unwrap();
    let f = zassenhaus_recursive(&mg.group);
    let qb = elementary_quotient_basis(&mg.group, f.term(2), f.term(3), &[]).unwrap();
    assert_eq!(qb.dim(), 3);
}

#[test]
fn word_parsing() {
    let g = build_magnus_group(2, 2, 4).unwrap().group;
    let x1 = g.generators()[0];
    let x2 = g.generators()[1];
    assert_eq!(parse_word(&g, "1").unwrap(), 0);
    assert_eq!(parse_word(&g, "x1*x2").unwrap(), g.mul(x1, x2));
    assert_eq!(parse_word(&g, "x1 x2").unwrap(), g.mul(x1, x2));
    assert_eq!(parse_word(&g, "[x1,x2]").unwrap(), g.comm(x1, x2));
    assert_eq!(parse_word(&g, "x1^-1").unwrap(), g.inv(x1));
    assert_eq!(parse_word(&g, "(x1 x2)^2").unwrap(), g.pow(g.mul(x1, x2), 2));
    assert!(parse_word(&g, "x3").is_err());
    assert!(parse_word(&g, "x1*").is_err());
    for x in 0..g.order() {
        assert_eq!(parse_word(&g, &g.label(x)).unwrap(), x);
    }
}
