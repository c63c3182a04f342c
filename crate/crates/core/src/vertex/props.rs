//! Randomized identity checks for the vertex engine: skew-symmetry,
//! translation covariance, the Borcherds identity and the annihilation bound.

use rand::Rng;

use super::algebra::Gen;
use super::engine::VertexAlgebra;
use super::state::{is_odd_monomial, Factor, State};
use crate::scalars::{gen_binomial, Rational, Scalar};

/// Parity of a state whose monomials all share one parity; `None` if mixed.
pub fn parity(va: &VertexAlgebra, a: &State) -> Option<bool> {
    let mut it = a.terms().map(|(m, _)| is_odd_monomial(va.table(), m));
    let first = it.next().unwrap_or(false);
    it.all(|p| p == first).then_some(first)
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

fn factorial(j: i64) -> Rational {
    (1..=j).fold(Rational::ONE, |acc, x| &acc * &Rational::from_int(x))
}

/// a_{(s)}b = −p(a,b) Σ_{j≥0} (−1)^{s+j} (1/j!) ∂^j (b_{(s+j)} a).
pub fn skew_symmetry(va: &VertexAlgebra, a: &State, b: &State, s: i64) -> State {
    let pab = parity(va, a).unwrap_or(false) && parity(va, b).unwrap_or(false);
    let lhs = va.nth_product(a, s, b);
    let bound = a.max_depth_weight() + b.max_depth_weight();
    let mut rhs = State::zero();
    let mut j = 0;
    while s + j < bound {
        let mut t = va.nth_product(b, s + j, a);
        for _ in 0..j {
            t = va.translate(&t);
        }
        let mut c = factorial(j).inv().expect("nonzero factorial");
        if (s + j).rem_euclid(2) == 1 {
            c = -c;
        }
        c = &c * &Rational::from_int(-sign(pab));
        rhs.add_scaled(&t, &Scalar::from_rational(c));
        j += 1;
    }
    lhs.sub(&rhs)
}

/// ∂(a_{(s)}b) − (∂a)_{(s)}b − a_{(s)}∂b, and (∂a)_{(s)}b + s·a_{(s−1)}b.
pub fn translation(va: &VertexAlgebra, a: &State, b: &State, s: i64) -> (State, State) {
    let da = va.translate(a);
    let db = va.translate(b);
    let mut r1 = va.translate(&va.nth_product(a, s, b));
    r1 = r1.sub(&va.nth_product(&da, s, b));
    r1 = r1.sub(&va.nth_product(a, s, &db));
    let mut r2 = va.nth_product(&da, s, b);
    r2.add_scaled(&va.nth_product(a, s - 1, b), &Scalar::from_int(s));
    (r1, r2)
}

/// Σ_j C(p,j)(a_{(r+j)}b)_{(p+q−j)}c
///   − Σ_j (−1)^j C(r,j)[a_{(p+r−j)}(b_{(q+j)}c) − (−1)^r p(a,b) b_{(q+r−j)}(a_{(p+j)}c)].
pub fn borcherds(
    va: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    p: i64,
    q: i64,
    r: i64,
) -> State {
    let pab = parity(va, a).unwrap_or(false) && parity(va, b).unwrap_or(false);
    let (wa, wb, wc) = (
        a.max_depth_weight(),
        b.max_depth_weight(),
        c.max_depth_weight(),
    );
    let mut out = State::zero();
    let mut j = 0;
    while r + j < wa + wb {
        let coef = gen_binomial(p, j as u32);
        if !coef.is_zero() {
            let ab = va.nth_product(a, r + j, b);
            out.add_scaled(
                &va.nth_product(&ab, p + q - j, c),
                &Scalar::from_rational(coef),
            );
        }
        j += 1;
    }
    let reach = (wb + wc - q).max(wa + wc - p).max(0);
    for j in 0..=reach {
        let coef = gen_binomial(r, j as u32);
        if coef.is_zero() {
            continue;
        }
        let coef = if j % 2 == 1 { -coef } else { coef };
        let bc = va.nth_product(b, q + j, c);
        let t1 = va.nth_product(a, p + r - j, &bc);
        out.add_scaled(&t1, &Scalar::from_rational(-&coef));
        let ac = va.nth_product(a, p + j, c);
        let t2 = va.nth_product(b, q + r - j, &ac);
        let s = sign(pab) * sign(r.rem_euclid(2) == 1);
        out.add_scaled(&t2, &Scalar::from_rational(&coef * &Rational::from_int(s)));
    }
    out
}

/// Whether a_{(s)}b vanishes for every s ≥ weight(a)+weight(b) (checked on the
/// next three values).
pub fn annihilation_holds(va: &VertexAlgebra, a: &State, b: &State) -> bool {
    let bound = a.max_depth_weight() + b.max_depth_weight();
    (bound..bound + 3).all(|s| va.nth_product(a, s, b).is_zero())
}

/// A random homogeneous state: up to `terms` ordered words of total depth
/// ≤ `max_weight` in the given generators, all of one parity, with small
/// integer-or-level coefficients.
pub fn random_state<R: Rng>(
    va: &VertexAlgebra,
    rng: &mut R,
    gens: &[Gen],
    max_weight: u16,
    terms: usize,
) -> State {
    let want_odd = rng.gen_bool(0.3);
    let mut out = State::zero();
    let mut tries = 0;
    while out.is_zero() || (out.len() < terms && tries < 4 * terms) {
        tries += 1;
        let mut budget = rng.gen_range(1..=max_weight);
        let mut word = Vec::new();
        while budget > 0 {
            let d = rng.gen_range(1..=budget.min(2));
            word.push(Factor::new(gens[rng.gen_range(0..gens.len())], d));
            budget -= d;
            if rng.gen_bool(0.4) {
                break;
            }
        }
        let odd = word.iter().filter(|f| va.table().is_odd(f.gen)).count() % 2 == 1;
        if odd != want_odd && tries < 40 {
            continue;
        }
        let coef = match rng.gen_range(0..4) {
            0 => Scalar::k_plus(rng.gen_range(-3..=3)),
            _ => Scalar::from_int(rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 }),
        };
        out.add_scaled(&va.order_word(&word), &coef);
        if tries > 200 {
            break;
        }
    }
    if parity(va, &out).is_none() {
        // keep only the parity of the first monomial
        let first = out
            .terms()
            .next()
            .map(|(m, _)| is_odd_monomial(va.table(), m))
            .unwrap_or(false);
        let mut kept = State::zero();
        for (m, c) in out.terms() {
            if is_odd_monomial(va.table(), m) == first {
                kept.add_term(m.clone(), c);
            }
        }
        out = kept;
    }
    out
}
