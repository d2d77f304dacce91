use std::sync::Arc;

use dashu_int::UBig;
use padic_tower::membership::{solve_mod_prime_power, Solve};
use padic_tower::*;
use proptest::prelude::*;

fn q9() -> Arc<UnramifiedRing> {
    make_unramified_ring(3, 2, 10).unwrap()
}

fn elem(k: &UnramifiedRing, a: i64, b: i64) -> UrElem {
    k.add(&k.from_int(a), &k.mul(&k.generator(), &k.from_int(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in any::<i32>(), b in any::<i32>(), c in any::<i32>(), d in any::<i32>()) {
        let k = q9();
        let (x, y, z) = (elem(&k, a as i64, b as i64), elem(&k, c as i64, d as i64), elem(&k, b as i64, c as i64));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.frobenius(&k.mul(&x, &y)), k.mul(&k.frobenius(&x), &k.frobenius(&y)));
        prop_assert_eq!(k.frobenius_pow(&x, 2), x);
    }

    #[test]
    fn unit_inverse_inverts(a in 1i64..3_000_000, b in any::<i32>()) {
        let k = q9();
        let x = elem(&k, a, b as i64);
        prop_assume!(k.is_unit(&x));
        let y = k.unit_inverse(&x).unwrap();
        prop_assert_eq!(k.mul(&x, &y), k.one());
    }

    #[test]
    fn teichmuller_is_a_multiplicative_section(r0 in 0u64..3, r1 in 0u64..3, s0 in 0u64..3, s1 in 0u64..3) {
        let k = q9();
        let (t, u) = (k.teichmuller_lift(&[r0, r1]), k.teichmuller_lift(&[s0, s1]));
        prop_assert_eq!(k.pow(&t, 9), t.clone());
        prop_assert_eq!(k.teichmuller_of(&k.mul(&t, &u)), k.mul(&t, &u));
        prop_assert_eq!(k.residue(&t), k.residue(&k.lift_residue(&[r0, r1])));
    }

    #[test]
    fn reversion_is_a_compositional_inverse(c in proptest::collection::vec(-20i64..20, 5)) {
        let k = make_unramified_ring(5, 1, 8).unwrap();
        let mut coeffs = vec![k.zero(), k.from_int(1 + 5 * c[0])];
        coeffs.extend(c[1..].iter().map(|&n| k.from_int(n)));
        let s = Series::univariate(&*k, &coeffs, 8);
        let r = s.reversion(&k).unwrap();
        prop_assert!(s.compose(&*k, &r).unwrap().first_difference(&*k, &Series::x(&*k, 1, 8)).is_none());
    }

    #[test]
    fn principal_unit_roots(a in any::<i32>(), b in any::<i32>(), n in prop::sample::select(vec![2u64, 4, 8])) {
        let k = q9();
        let l = TameExt::from_unit(&k, 8, k.from_int(-1)).unwrap();
        // 1 + Π·(a + bΠ²)
        let t = l.add(&l.from_base(&k.from_int(a as i64)), &l.scale(&l.pow(&l.pi(), 2), &k.from_int(b as i64)));
        let u = l.add(&l.one(), &l.mul(&l.pi(), &t));
        let r = l.nth_root_of_principal_unit(&u, n).unwrap();
        prop_assert!(l.equal(&l.pow(&r, n as u128), &u));
    }

    #[test]
    fn solver_finds_planted_solutions(
        a in proptest::collection::vec(0u64..729, 12),
        x in proptest::collection::vec(0u64..729, 3),
    ) {
        let rows: Vec<Vec<UBig>> = a.chunks(3).map(|r| r.iter().map(|&v| UBig::from(v)).collect()).collect();
        let b: Vec<UBig> = rows
            .iter()
            .map(|r| r.iter().zip(&x).map(|(u, &v)| u * UBig::from(v)).sum::<UBig>() % UBig::from(729u32))
            .collect();
        match solve_mod_prime_power(3, 6, &rows, &b) {
            Solve::Solution { x: got, precision } => {
                let pm = UBig::from(3u32).pow(precision as usize);
                for (r, rhs) in rows.iter().zip(&b) {
                    let lhs: UBig = r.iter().zip(&got).map(|(u, v)| u * v).sum();
                    prop_assert_eq!(lhs % &pm, rhs % &pm);
                }
            }
            Solve::Obstruction { .. } => prop_assert!(false, "planted system reported unsolvable"),
        }
    }

    #[test]
    fn lubin_tate_law_is_commutative_and_unital(c in prop::sample::select(vec![1i64, -1]), a2 in -3i64..3) {
        let k = make_unramified_ring(3, 1, 14).unwrap();
        let s = lubin_tate_series(&k, 1, &k.from_int(c), &[(2, k.from_int(3 * a2))]).unwrap();
        let g = lubin_tate_group_law(&s, 8).unwrap();
        let law = g.law();
        prop_assert!(law.first_difference(&*k, &law.swap()).is_none());
        prop_assert!(law.restrict_y_zero().first_difference(&*k, &Series::x(&*k, 1, 8)).is_none());
        prop_assert!(verify_group_axioms(&g, 8).pass());
    }
}
