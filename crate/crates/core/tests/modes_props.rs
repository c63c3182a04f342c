use hookwalg::modes::{
    is_zero_oracle, BilinearSeries, KMode, Mode, ModeAlgebra, ModeExpr, Operator, OracleConfig,
    SeriesCoeff, StateId,
};
use hookwalg::scalars::{gen_binomial, Rational, Scalar};
use hookwalg::superspace::{weight_one_indices, Config};
use hookwalg::vertex::State;
use hookwalg::wgens::{benri_sides, HookAlgebra};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

thread_local! {
    static HOOK: &'static HookAlgebra = Box::leak(Box::new(HookAlgebra::new(Config::new(4, 3).unwrap())));
}

fn hook() -> &'static HookAlgebra {
    HOOK.with(|h| *h)
}

/// A random combination of two or three weight-one generators.
fn weight_one(rng: &mut ChaCha8Rng) -> State {
    let h = hook();
    let idx = weight_one_indices(&h.cfg);
    let mut v = State::zero();
    for _ in 0..rng.gen_range(2..=3) {
        let (i, j) = idx[rng.gen_range(0..idx.len())];
        v.add_scaled(&h.w(1, i, j), &Scalar::from_int(rng.gen_range(1..=3)));
    }
    v
}

/// A weight-one combination, or a weight-two generator.
fn low_weight(rng: &mut ChaCha8Rng) -> State {
    let h = hook();
    if rng.gen_bool(0.7) {
        return weight_one(rng);
    }
    let idx: Vec<(usize, usize)> = (2..=h.cfg.m)
        .flat_map(|i| (2..=h.cfg.m).map(move |j| (i, j)))
        .collect();
    let (i, j) = idx[rng.gen_range(0..idx.len())];
    h.w(2, i, j)
}

fn level(rng: &mut ChaCha8Rng) -> KMode {
    let mut k = Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=7)).unwrap();
    // stay away from the poles of the images
    while [-4, -3, -2, -1, 0]
        .iter()
        .any(|&p| k == Rational::from_int(p))
    {
        k = &k + &Rational::new(1, 3).unwrap();
    }
    KMode::Rational(k)
}

fn vanishes(alg: &ModeAlgebra, e: ModeExpr, depth: i64, k_mode: KMode) -> Result<(), String> {
    let cfg = OracleConfig {
        depth,
        k_mode,
        sample: None,
    };
    let v = is_zero_oracle(alg, &Operator::from_expr(e), &cfg).map_err(|e| e.to_string())?;
    if v.is_zero() {
        Ok(())
    } else {
        Err(v.to_string())
    }
}

fn algebra() -> ModeAlgebra {
    ModeAlgebra::new(hook().va().clone())
}

/// (u₍ₐ₎v)t^b expanded into modes of u and v.
fn expand(u: StateId, v: StateId, a: i64, b: i64) -> ModeExpr {
    let sign = if a.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut e = ModeExpr::zero();
    if a >= 0 {
        for i in 0..=a {
            let c = Scalar::from_rational(gen_binomial(a, i as u32));
            let c = if i % 2 == 0 { c } else { -&c };
            e.push_word(c.clone(), vec![Mode::new(u, a - i), Mode::new(v, b + i)]);
            e.push_word(
                -&(&c * &Scalar::from_int(sign)),
                vec![Mode::new(v, a + b - i), Mode::new(u, i)],
            );
        }
    } else {
        // C(a,i)(−1)^i = C(i−a−1, −a−1)
        let coeff = SeriesCoeff::binomial(-a - 1, 1, (-a - 1) as u32);
        e.push_series(BilinearSeries::new(u, a, v, b, coeff.clone()));
        e.push_series(BilinearSeries::new(
            v,
            a + b,
            u,
            0,
            coeff.scale(&Scalar::from_int(-sign)),
        ));
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn product_modes_expand(seed in any::<u64>(), a in -2i64..=2, b in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = hook();
        let alg = algebra();
        let (us, vs) = (weight_one(&mut rng), weight_one(&mut rng));
        let u = alg.register("u", us.clone());
        let v = alg.register("v", vs.clone());
        let prod = h.va().nth_product(&us, a, &vs);
        let lhs = if prod.is_zero() {
            ModeExpr::zero()
        } else {
            ModeExpr::mode(Mode::new(alg.register("u(a)v", prod), b))
        };
        let diff = lhs.sub(&expand(u, v, a, b));
        prop_assert_eq!(vanishes(&alg, diff, 4, level(&mut rng)), Ok(()));
    }

    #[test]
    fn series_identity_for_weight_one_states(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra();
        let (x, y) = (weight_one(&mut rng), weight_one(&mut rng));
        let (lhs, rhs) = benri_sides(hook(), &alg, &x, &y);
        prop_assert_eq!(vanishes(&alg, lhs.sub(&rhs), 4, level(&mut rng)), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn mode_bracket_is_antisymmetric(seed in any::<u64>(), a in -2i64..=2, b in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra();
        let x = Mode::new(alg.register("x", low_weight(&mut rng)), a);
        let y = Mode::new(alg.register("y", low_weight(&mut rng)), b);
        let sum = alg.mode_bracket(x, y).add(&alg.mode_bracket(y, x));
        prop_assert_eq!(vanishes(&alg, sum, 3, KMode::Symbolic), Ok(()));
    }

    #[test]
    fn mode_bracket_satisfies_jacobi(seed in any::<u64>(), a in -1i64..=1, b in -1i64..=1, c in -1i64..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra();
        let x = ModeExpr::mode(Mode::new(alg.register("x", weight_one(&mut rng)), a));
        let y = ModeExpr::mode(Mode::new(alg.register("y", low_weight(&mut rng)), b));
        let z = ModeExpr::mode(Mode::new(alg.register("z", low_weight(&mut rng)), c));
        let br = |p: &ModeExpr, q: &ModeExpr| alg.bracket_expr(p, q).unwrap();
        let total = br(&x, &br(&y, &z)).add(&br(&y, &br(&z, &x))).add(&br(&z, &br(&x, &y)));
        prop_assert_eq!(vanishes(&alg, total, 3, KMode::Symbolic), Ok(()));
    }

    #[test]
    fn symbolic_bracket_matches_commutator(seed in any::<u64>(), a in -2i64..=2, pl in -2i64..=1, pr in -1i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra();
        let x = ModeExpr::mode(Mode::new(alg.register("x", weight_one(&mut rng)), a));
        let l = alg.register("l", weight_one(&mut rng));
        let r = alg.register("r", weight_one(&mut rng));
        let coeff = SeriesCoeff::from_coeffs(vec![Scalar::from_int(rng.gen_range(-2..=2)), Scalar::from_int(rng.gen_range(-2..=2))]);
        let s = ModeExpr::from_series(BilinearSeries::new(l, pl, r, pr, coeff));
        let sym = Operator::from_expr(alg.bracket_expr(&x, &s).unwrap());
        let direct = Operator::commutator(&x.clone().into(), &s.into());
        let cfg = OracleConfig::symbolic(3);
        let v = is_zero_oracle(&alg, &sym.sub(&direct), &cfg).unwrap();
        prop_assert!(v.is_zero(), "{}", v);
    }

    #[test]
    fn normalizing_series_keeps_the_action(seed in any::<u64>(), pl in -3i64..=2, pr in -2i64..=3, depth in 2i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebra();
        let l = alg.register("l", weight_one(&mut rng));
        let r = alg.register("r", weight_one(&mut rng));
        let coeff = SeriesCoeff::from_coeffs((0..3).map(|_| Scalar::from_int(rng.gen_range(-2..=2))).collect());
        let e = ModeExpr::from_series(BilinearSeries::new(l, pl, r, pr, coeff));
        let n = alg.series_normalize(&e);
        prop_assert_eq!(alg.series_normalize(&n), n.clone());
        let k = if depth == 4 { level(&mut rng) } else { KMode::Symbolic };
        prop_assert_eq!(vanishes(&alg, e.sub(&n), depth, k), Ok(()));
    }
}
