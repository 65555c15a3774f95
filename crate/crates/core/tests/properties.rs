use proptest::prelude::*;

use equicat::checks::{run_check, suspension_instance, SizeCaps};
use equicat::random::{instance_rng, random_gset, random_poset, small_groups};
use equicat::simplicial::{homology, nerve};
use equicat::{ExtInt, Group, SubgroupLattice};

fn ext() -> impl Strategy<Value = ExtInt> {
    prop_oneof![
        Just(ExtInt::NegInf),
        Just(ExtInt::PosInf),
        (-50i64..50).prop_map(ExtInt::Fin)
    ]
}

fn divisors(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ext_addition_commutes_and_is_monotone(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(a.checked_add(b).ok(), b.checked_add(a).ok());
        if let (Ok(ac), Ok(bc)) = (a.checked_add(c), b.checked_add(c)) {
            if a <= b {
                prop_assert!(ac <= bc);
            }
        }
    }

    #[test]
    fn cyclic_products_are_associative_with_divisor_lattices(n in 1usize..9, m in 1usize..4) {
        let g = Group::product(&Group::cyclic(n), &Group::cyclic(m));
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        prop_assert_eq!(SubgroupLattice::new(&Group::cyclic(n)).unwrap().len(), divisors(n));
    }

    #[test]
    fn burnside_orbit_count(seed in any::<u64>(), which in 0usize..7) {
        let (_, g) = &small_groups()[which];
        let j = random_gset(&mut instance_rng(seed, 0), g, 4, 6);
        let fixed: usize = g.elements().map(|e| (0..j.len()).filter(|&x| j.act(e, x) == x).count()).sum();
        let whole = SubgroupLattice::new(g).unwrap();
        let orbits = j.orbits(&whole.get(whole.whole())).unwrap();
        prop_assert_eq!(orbits.count() * g.order(), fixed);
    }

    #[test]
    fn nerve_euler_characteristic(seed in any::<u64>(), n in 1usize..7) {
        let p = random_poset(&mut instance_rng(seed, 0), n, 0.5);
        let k = nerve(&p).unwrap();
        let chi: i64 = k.ranks().iter().enumerate().map(|(d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
        prop_assert_eq!(homology(&k).unwrap().euler_characteristic(), chi);
    }

    #[test]
    fn suspension_coherence_any_seed(seed in any::<u64>(), k in 0u64..64) {
        let (instance, result) = suspension_instance(k, &mut instance_rng(seed, k), &SizeCaps::default());
        prop_assert!(result.is_ok(), "{}", instance);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_depend_only_on_seed(seed in any::<u64>()) {
        let caps = SizeCaps::default();
        let a = run_check("modelhpb", seed, 4, &caps).unwrap();
        let b = run_check("modelhpb", seed, 4, &caps).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
