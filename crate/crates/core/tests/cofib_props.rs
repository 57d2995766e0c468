mod common;

use cctt::cofib::{cof_entails, cof_forall, Cofib};
use cctt::interval::{DimExpr, Name};
use common::{assignments, cof_ast, cofib_holds, forall_violation, oracle_entails};
use proptest::prelude::*;

fn names(n: usize) -> Vec<Name> {
    (0..n).map(|_| Name::fresh()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn entails_matches_oracle(p in cof_ast(3), q in cof_ast(3)) {
        let ns = names(3);
        prop_assert_eq!(cof_entails(&p.build(&ns), &q.build(&ns)), oracle_entails(&p, &q, 3));
    }

    #[test]
    fn canonical_form_matches_oracle(p in cof_ast(3)) {
        let ns = names(3);
        let c = p.build(&ns);
        for a in assignments(3) {
            prop_assert_eq!(cofib_holds(&c, &ns, &a), p.holds(&a));
        }
    }

    #[test]
    fn forall_characterization(p in cof_ast(3), x in 0..3usize) {
        let ns = names(3);
        prop_assert_eq!(forall_violation(&p, x, &ns), None);
    }

    #[test]
    fn lattice_laws(p in cof_ast(3), q in cof_ast(3), r in cof_ast(3)) {
        let ns = names(3);
        let (p, q, r) = (p.build(&ns), q.build(&ns), r.build(&ns));
        prop_assert_eq!(p.and(&q.or(&r)), p.and(&q).or(&p.and(&r)));
        prop_assert_eq!(p.or(&q.and(&r)), p.or(&q).and(&p.or(&r)));
        prop_assert_eq!(p.and(&p.or(&q)), p.clone());
        prop_assert_eq!(p.or(&p.and(&q)), p.clone());
        prop_assert_eq!(p.and(&q), q.and(&p));
        prop_assert_eq!(p.or(&q), q.or(&p));
        prop_assert_eq!(p.and(&Cofib::top()), p.clone());
        prop_assert_eq!(p.or(&Cofib::bot()), p.clone());
    }

    #[test]
    fn endpoint_substitution_matches_oracle(p in cof_ast(3), x in 0..3usize, b in any::<bool>()) {
        let ns = names(3);
        let c = p.build(&ns).subst(ns[x], &DimExpr::constant(b));
        for mut a in assignments(3) {
            if a[x].is_some() {
                continue;
            }
            let lhs = cofib_holds(&c, &ns, &a);
            a[x] = Some(b);
            prop_assert_eq!(lhs, p.holds(&a));
        }
    }
}

#[test]
fn forall_examples() {
    let ns = names(3);
    let (i, j, k) = (ns[0], ns[1], ns[2]);
    let p = Cofib::atom(j, false).or(&Cofib::atom(i, false).and(&Cofib::atom(k, true)));
    assert_eq!(cof_forall(i, &p), Cofib::atom(j, false));
    assert!(cof_forall(i, &Cofib::atom(i, false)).is_bot());
    assert_eq!(cof_forall(i, &Cofib::atom(j, true)), Cofib::atom(j, true));
    let both_ends = Cofib::atom(i, false).or(&Cofib::atom(i, true));
    assert!(cof_forall(i, &both_ends).is_bot());
}
