use std::sync::{Arc, OnceLock};

use hookwalg::superspace::Config;
use hookwalg::vertex::props::{
    annihilation_holds, borcherds, random_state, skew_symmetry, translation,
};
use hookwalg::vertex::{Gen, LieTable, VertexAlgebra};
use hookwalg::wgens::HookAlgebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table() -> Arc<LieTable> {
    static T: OnceLock<Arc<LieTable>> = OnceLock::new();
    T.get_or_init(|| {
        let cfg = Config::new(4, 3).unwrap();
        Arc::new(LieTable::superalgebra(&cfg, &cfg.constants()))
    })
    .clone()
}

fn setup(seed: u64) -> (VertexAlgebra, ChaCha8Rng, Vec<Gen>) {
    let va = VertexAlgebra::new(table());
    let gens: Vec<Gen> = va.table().gens().collect();
    (va, ChaCha8Rng::seed_from_u64(seed), gens)
}

thread_local! {
    static HOOK: &'static HookAlgebra = Box::leak(Box::new(HookAlgebra::new(Config::new(4, 3).unwrap())));
}

fn hook_setup(seed: u64) -> (&'static HookAlgebra, ChaCha8Rng, Vec<Gen>) {
    let h = HOOK.with(|h| *h);
    let t = h.va().table();
    let sub = t.gens().filter(|&g| t.in_sub(g)).collect();
    (h, ChaCha8Rng::seed_from_u64(seed), sub)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn skew_symmetry_holds(seed in any::<u64>(), s in -2i64..4) {
        let (va, mut rng, gens) = setup(seed);
        let a = random_state(&va, &mut rng, &gens, 3, 2);
        let b = random_state(&va, &mut rng, &gens, 3, 2);
        let r = skew_symmetry(&va, &a, &b, s);
        prop_assert!(r.is_zero(), "residual {}", r.display(va.table()));
    }

    #[test]
    fn translation_covariance_holds(seed in any::<u64>(), s in -2i64..4) {
        let (va, mut rng, gens) = setup(seed);
        let a = random_state(&va, &mut rng, &gens, 3, 2);
        let b = random_state(&va, &mut rng, &gens, 3, 2);
        let (r1, r2) = translation(&va, &a, &b, s);
        prop_assert!(r1.is_zero(), "derivation residual {}", r1.display(va.table()));
        prop_assert!(r2.is_zero(), "covariance residual {}", r2.display(va.table()));
    }

    #[test]
    fn borcherds_identity_holds(seed in any::<u64>(), p in -2i64..3, q in -2i64..3, r in -2i64..3) {
        let (va, mut rng, gens) = setup(seed);
        let a = random_state(&va, &mut rng, &gens, 2, 2);
        let b = random_state(&va, &mut rng, &gens, 2, 2);
        let c = random_state(&va, &mut rng, &gens, 2, 2);
        let res = borcherds(&va, &a, &b, &c, p, q, r);
        prop_assert!(res.is_zero(), "residual {}", res.display(va.table()));
    }

    #[test]
    fn d0_squares_to_zero(seed in any::<u64>()) {
        let (h, mut rng, sub) = hook_setup(seed);
        let v = random_state(h.va(), &mut rng, &sub, 3, 2);
        let r = h.d0_extended(&h.d0(&v).unwrap());
        prop_assert!(r.is_zero(), "residual {}", h.display(&r));
    }

    #[test]
    fn d0_commutes_with_translation(seed in any::<u64>()) {
        let (h, mut rng, sub) = hook_setup(seed);
        let v = random_state(h.va(), &mut rng, &sub, 3, 2);
        let r = h.d0(&h.partial(&v)).unwrap().sub(&h.partial(&h.d0(&v).unwrap()));
        prop_assert!(r.is_zero(), "residual {}", h.display(&r));
    }

    #[test]
    fn annihilation_bound_holds(seed in any::<u64>()) {
        let (va, mut rng, gens) = setup(seed);
        let a = random_state(&va, &mut rng, &gens, 3, 3);
        let b = random_state(&va, &mut rng, &gens, 3, 3);
        prop_assert!(annihilation_holds(&va, &a, &b));
    }
}
