//! Mode-level commutators of the W-generators: the current algebra of the
//! W⁽¹⁾_{i,j} with i, j > m−n, its bracket against W⁽²⁾, and the
//! [W⁽²⁾ t, W⁽²⁾ t] identities with their series form.

use std::collections::BTreeMap;

use super::{HookAlgebra, Reading, RESIDUAL_LIMIT};
use crate::modes::{
    is_zero_oracle, BilinearSeries, Mode, ModeAlgebra, ModeExpr, Operator, OracleConfig,
    SeriesCoeff, StateId,
};
use crate::report::{summarize, Check};
use crate::scalars::Scalar;
use crate::vertex::State;

/// Mode powers swept by the current and cor suites.
pub const POWERS: std::ops::RangeInclusive<i64> = -2..=2;

/// Scalar part and per-power state sums of an expression made of single
/// modes only.
fn single_modes(alg: &ModeAlgebra, e: &ModeExpr) -> Option<(Scalar, BTreeMap<i64, State>)> {
    if e.has_series() {
        return None;
    }
    let mut out: BTreeMap<i64, State> = BTreeMap::new();
    for w in &e.words {
        let [m] = w.modes.as_slice() else { return None };
        out.entry(m.power)
            .or_default()
            .add_scaled(&alg.state(m.state), &w.coeff);
    }
    out.retain(|_, v| !v.is_zero());
    Some((e.constant.clone(), out))
}

/// `None` when `got` and `want` agree: first by comparing the state attached
/// to each power, then, since v t^a and ∂v t^{a+1} are the same operator up to
/// a factor, by the action oracle on the difference.
fn compare(
    alg: &ModeAlgebra,
    got: &ModeExpr,
    want: &ModeExpr,
    oracle: &OracleConfig,
) -> Option<String> {
    if let (Some(a), Some(b)) = (single_modes(alg, got), single_modes(alg, want)) {
        if a == b {
            return None;
        }
    }
    let op = Operator::from_expr(got.sub(want));
    match is_zero_oracle(alg, &op, oracle) {
        Ok(v) if v.is_zero() => None,
        Ok(v) => Some(summarize(&v.to_string(), RESIDUAL_LIMIT)),
        Err(e) => Some(e.to_string()),
    }
}

struct Builder<'a> {
    h: &'a HookAlgebra,
    alg: ModeAlgebra,
}

impl<'a> Builder<'a> {
    fn new(h: &'a HookAlgebra) -> Self {
        Builder {
            h,
            alg: ModeAlgebra::new(h.va().clone()),
        }
    }

    fn id(&self, label: String, v: State) -> StateId {
        self.alg.register(label, v)
    }

    fn w1(&self, i: usize, j: usize) -> StateId {
        self.id(format!("W1_{i}{j}"), self.h.w(1, i, j))
    }

    fn w2(&self, i: usize, j: usize) -> StateId {
        self.id(format!("W2_{i}{j}"), self.h.w(2, i, j))
    }

    fn mode(&self, id: StateId, a: i64) -> ModeExpr {
        ModeExpr::mode(Mode::new(id, a))
    }

    /// Σ_{s≥0} ((s+1) x t^{−s−1} y t^{s+1} − s y t^{−s} x t^s), the series
    /// form of (∂x)₍₋₁₎y t² + x₍₋₁₎y t.
    fn benri_series(&self, x: StateId, y: StateId) -> ModeExpr {
        let mut e = ModeExpr::zero();
        e.push_series(BilinearSeries::new(
            x,
            -1,
            y,
            1,
            SeriesCoeff::index().add(&SeriesCoeff::constant(Scalar::one())),
        ));
        e.push_series(BilinearSeries::new(
            y,
            0,
            x,
            0,
            SeriesCoeff::index().scale(&Scalar::from_int(-1)),
        ));
        e
    }

    /// (∂x)₍₋₁₎y t² + x₍₋₁₎y t as single modes.
    fn benri_modes(&self, x: &State, y: &State, label: &str) -> ModeExpr {
        let h = self.h;
        let a = self.id(format!("(∂{label})"), h.nop(&h.partial(x), y));
        let b = self.id(format!("({label})"), h.nop(x, y));
        self.mode(a, 2).add(&self.mode(b, 1))
    }
}

fn times(x: &Scalar, n: i64) -> Scalar {
    x * &Scalar::from_int(n)
}

fn kd(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

fn high_indices(h: &HookAlgebra) -> Vec<usize> {
    (h.cfg.short() + 1..=h.cfg.m).collect()
}

/// [W⁽¹⁾_{p,q}t^s, W⁽¹⁾_{i,j}t^u] for p, q, i, j > m−n and s, u in [`POWERS`]:
/// a gl(n) current algebra whose form is α₁+α₂ off the diagonal part and
/// carries an extra 2 on it.
pub fn current_suite(h: &HookAlgebra, oracle: &OracleConfig) -> Vec<Check> {
    let b = Builder::new(h);
    let c = &h.consts;
    let hi = high_indices(h);
    let mut out = Vec::new();
    for &p in &hi {
        for &q in &hi {
            for &i in &hi {
                for &j in &hi {
                    let mut residual = None;
                    'sweep: for s in POWERS {
                        for u in POWERS {
                            let got = b
                                .alg
                                .mode_bracket(Mode::new(b.w1(p, q), s), Mode::new(b.w1(i, j), u));
                            let mut want = ModeExpr::zero();
                            want.push_word(
                                Scalar::from_int(kd(q, i)),
                                vec![Mode::new(b.w1(p, j), s + u)],
                            );
                            want.push_word(
                                Scalar::from_int(-kd(p, j)),
                                vec![Mode::new(b.w1(i, q), s + u)],
                            );
                            if s + u == 0 {
                                let mut k =
                                    times(&(&c.alpha1 + &c.alpha2), s * kd(q, i) * kd(p, j));
                                k += &Scalar::from_int(2 * s * kd(p, q) * kd(i, j));
                                want.constant += &k;
                            }
                            if let Some(r) = compare(&b.alg, &got, &want, oracle) {
                                residual = Some(format!("s={s}, u={u}: {r}"));
                                break 'sweep;
                            }
                        }
                    }
                    out.push(Check::from_residual(
                        format!("current/({p},{q};{i},{j})"),
                        "W(1) modes with indices above m-n form a gl(n) current algebra",
                        residual,
                    ));
                }
            }
        }
    }
    out
}

/// [W⁽¹⁾_{p,q}t^s, W⁽²⁾_{i,j}t^u] for p, q, i, j > m−n and s, u in [`POWERS`].
pub fn cor_suite(h: &HookAlgebra, oracle: &OracleConfig) -> Vec<Check> {
    let b = Builder::new(h);
    let c = &h.consts;
    let sh = h.cfg.short();
    let hi = high_indices(h);
    let half = Scalar::from_rational(crate::scalars::Rational::new(1, 2).expect("nonzero"));
    let mut out = Vec::new();
    for &p in &hi {
        for &q in &hi {
            for &i in &hi {
                for &j in &hi {
                    let mut residual = None;
                    'sweep: for s in POWERS {
                        for u in POWERS {
                            let got = b
                                .alg
                                .mode_bracket(Mode::new(b.w1(p, q), s), Mode::new(b.w2(i, j), u));
                            let mut want = ModeExpr::zero();
                            let top = s + u;
                            want.push_word(
                                Scalar::from_int(-kd(p, j)),
                                vec![Mode::new(b.w2(i, q), top)],
                            );
                            want.push_word(
                                Scalar::from_int(kd(i, q)),
                                vec![Mode::new(b.w2(p, j), top)],
                            );
                            want.push_word(
                                times(&c.alpha1, s * kd(p, j)),
                                vec![Mode::new(b.w1(i, q), top - 1)],
                            );
                            want.push_word(
                                Scalar::from_int(s * kd(p, q)),
                                vec![Mode::new(b.w1(i, j), top - 1)],
                            );
                            for w in 1..=sh {
                                want.push_word(
                                    Scalar::from_int(s * kd(p, j) * kd(q, i)),
                                    vec![Mode::new(b.w1(w, w), top - 1)],
                                );
                            }
                            if top == 1 {
                                let ss = Scalar::from_int(s * (s - 1));
                                let a = &(&(&c.alpha1 + &c.alpha2) * &c.alpha1) * &(&half * &ss);
                                want.constant -= &times(&a, kd(q, i) * kd(p, j));
                                want.constant -= &times(&(&c.alpha2 * &ss), kd(p, q) * kd(i, j));
                            }
                            if let Some(r) = compare(&b.alg, &got, &want, oracle) {
                                residual = Some(format!("s={s}, u={u}: {r}"));
                                break 'sweep;
                            }
                        }
                    }
                    out.push(Check::from_residual(
                        format!("cor/({p},{q};{i},{j})"),
                        "W(1) x W(2) mode commutator for indices above m-n",
                        residual,
                    ));
                }
            }
        }
    }
    out
}

/// The printed single-mode form of [W⁽²⁾_{p,p}t, W⁽²⁾_{i,i}t] for p, i > m−n.
fn ope4_expected(b: &Builder, p: usize, i: usize, reading: Reading) -> ModeExpr {
    let h = b.h;
    let c = &h.consts;
    let sh = h.cfg.short();
    let bound = reading.bound(&h.cfg);
    let dl = p == i;
    let a1 = &c.alpha1;
    let a2 = &c.alpha2;
    let a1_2a2 = a1 + &times(a2, 2);
    let half = Scalar::from_rational(crate::scalars::Rational::new(1, 2).expect("nonzero"));
    let w1 = |a: usize, b_: usize| h.w(1, a, b_);
    let w2 = |a: usize, b_: usize| h.w(2, a, b_);
    let dd = |x: &State| h.partial(x);

    // t² and t parts as states
    let mut sq = State::zero();
    let mut lin = State::zero();
    sq.add_state(&h.nop(&w2(p, i), &w1(i, p)));
    sq.add_scaled(&h.nop(&w1(p, i), &w2(i, p)), &Scalar::from_int(-1));
    sq.add_scaled(&h.nop(&dd(&w1(p, i)), &w1(i, p)), a1);
    sq.add_state(&h.nop(&dd(&w1(p, p)), &w1(i, i)));
    if dl {
        for w in 1..=sh {
            sq.add_scaled(&h.nop(&w1(w, i), &w2(p, w)), &Scalar::from_int(-1));
            for x in 1..=sh {
                sq.add_scaled(&h.nop(&dd(&w1(w, x)), &w1(x, w)), &Scalar::from_int(-1));
            }
        }
        match reading {
            Reading::Literal => sq.add_scaled(&w2(p, i), &-a2),
            Reading::Corrected => sq.add_scaled(&dd(&w2(p, i)), &-a2),
        }
        for w in 1..=sh {
            sq.add_state(&h.nop(&dd(&w1(p, i)), &w1(w, w)));
        }
        for x in 1..=sh {
            sq.add_scaled(&dd(&dd(&w1(x, x))), &-&(&half * &a1_2a2));
        }
        let coef = -&(&half * &(&(a1 * &(a1 + a2)) + &Scalar::one()));
        sq.add_scaled(&dd(&dd(&w1(p, i))), &coef);
        for x in 1..=sh {
            sq.add_state(&h.nop(&w1(x, p), &w2(i, x)));
            sq.add_state(&h.nop(&dd(&w1(x, x)), &w1(i, p)));
        }
    }
    sq.add_scaled(&dd(&w2(p, p)), &Scalar::from_int(-1));
    sq.add_scaled(&dd(&dd(&w1(p, p))), &-&(&half * &a1_2a2));
    for w in 1..=bound {
        sq.add_scaled(&dd(&dd(&w1(w, w))), &-&half);
    }

    lin.add_scaled(&h.nop(&w1(p, i), &w1(i, p)), a1);
    lin.add_state(&h.nop(&w1(p, p), &w1(i, i)));
    if dl {
        lin.add_scaled(&w2(p, i), &-a2);
        for w in 1..=sh {
            lin.add_state(&h.nop(&w1(p, i), &w1(w, w)));
        }
        lin.add_scaled(&dd(&w1(p, i)), &-&(a1 * &(a1 + a2)));
        lin.add_scaled(&w2(i, p), &-a2);
        for x in 1..=sh {
            lin.add_state(&h.nop(&w1(x, x), &w1(i, p)));
        }
        for x in 1..=sh {
            for w in 1..=sh {
                lin.add_scaled(&h.nop(&w1(w, x), &w1(x, w)), &Scalar::from_int(-1));
            }
        }
        for x in 1..=sh {
            lin.add_scaled(&dd(&w1(x, x)), &-&a1_2a2);
        }
    }
    lin.add_scaled(&w2(p, p), &Scalar::from_int(-1));
    lin.add_scaled(&dd(&w1(p, p)), &times(a2, -2));
    lin.add_scaled(&w2(i, i), &Scalar::from_int(-1));

    let mut e = ModeExpr::zero();
    if !sq.is_zero() {
        e = e.add(&b.mode(b.id(format!("ope4sq({p},{i})"), sq), 2));
    }
    if !lin.is_zero() {
        e = e.add(&b.mode(b.id(format!("ope4lin({p},{i})"), lin), 1));
    }
    e
}

/// The series form of [W⁽²⁾_{p,p}t, W⁽²⁾_{i,i}t] for p, i > m−n.
fn ope5_expected(b: &Builder, p: usize, i: usize, reading: Reading) -> ModeExpr {
    let c = &b.h.consts;
    let minus = Scalar::from_int(-1);
    let mut e = b.benri_series(b.w1(p, i), b.w1(i, p)).scale(&c.alpha1);
    e = e.add(&b.benri_series(b.w1(p, p), b.w1(i, i)));
    e = e.add(&b.mode(b.w2(p, p), 1)).sub(&b.mode(b.w2(i, i), 1));
    for w in 1..=reading.bound(&b.h.cfg) {
        e = e.sub(&b.mode(b.w1(w, w), 0));
    }
    e = e.add(&b.mode(b.w1(p, p), 0).scale(&-&c.alpha1));
    if p == i {
        e = e.add(&b.mode(b.w1(i, i), 0).scale(&minus));
    }
    let one = SeriesCoeff::constant(Scalar::one());
    let neg = SeriesCoeff::constant(minus);
    e.push_series(BilinearSeries::new(
        b.w2(p, i),
        -1,
        b.w1(i, p),
        2,
        one.clone(),
    ));
    e.push_series(BilinearSeries::new(b.w1(i, p), 1, b.w2(p, i), 0, one));
    e.push_series(BilinearSeries::new(
        b.w1(p, i),
        -1,
        b.w2(i, p),
        2,
        neg.clone(),
    ));
    e.push_series(BilinearSeries::new(b.w2(i, p), 1, b.w1(p, i), 0, neg));
    e
}

/// [W⁽²⁾_{p,p}t, W⁽²⁾_{i,i}t] against its printed single-mode form and its
/// series form under one reading, for every p, i > m−n, plus the series
/// identity for (∂x)₍₋₁₎y t² + x₍₋₁₎y t at `benri_depth`.
pub fn ope45_suite(
    h: &HookAlgebra,
    reading: Reading,
    oracle: &OracleConfig,
    benri_depth: i64,
) -> Vec<Check> {
    let b = Builder::new(h);
    let hi = high_indices(h);
    let mut out = Vec::new();
    let tag = reading.label();
    for &p in &hi {
        for &i in &hi {
            let got = b
                .alg
                .mode_bracket(Mode::new(b.w2(p, p), 1), Mode::new(b.w2(i, i), 1));
            let want = ope4_expected(&b, p, i, reading);
            out.push(Check::from_residual(
                format!("ope4/{tag}/({p},{i})"),
                "[W(2)pp t, W(2)ii t] as single modes",
                compare(&b.alg, &got, &want, oracle),
            ));
            let want = ope5_expected(&b, p, i, reading);
            out.push(Check::from_residual(
                format!("ope5/{tag}/({p},{i})"),
                "[W(2)pp t, W(2)ii t] as mode series",
                compare(&b.alg, &got, &want, oracle),
            ));
        }
    }
    if reading == Reading::Corrected {
        let deep = OracleConfig {
            depth: benri_depth,
            ..oracle.clone()
        };
        for &p in &hi {
            for &i in &hi {
                for (x, y) in [((p, i), (i, p)), ((p, p), (i, i))] {
                    let (xs, ys) = (h.w(1, x.0, x.1), h.w(1, y.0, y.1));
                    let label = format!("W1_{}{} W1_{}{}", x.0, x.1, y.0, y.1);
                    let got = b.benri_modes(&xs, &ys, &label);
                    let want = b.benri_series(b.w1(x.0, x.1), b.w1(y.0, y.1));
                    out.push(Check::from_residual(
                        format!("benri/({},{};{},{})", x.0, x.1, y.0, y.1),
                        "(dx)(-1)y t^2 + x(-1)y t as a mode series",
                        compare(&b.alg, &got, &want, &deep),
                    ));
                }
            }
        }
    }
    out
}

/// Both sides of the series identity for (∂x)₍₋₁₎y t² + x₍₋₁₎y t, for
/// arbitrary states registered in `alg`.
pub fn benri_sides(
    h: &HookAlgebra,
    alg: &ModeAlgebra,
    x: &State,
    y: &State,
) -> (ModeExpr, ModeExpr) {
    let a = alg.register("(∂x)(-1)y", h.nop(&h.partial(x), y));
    let bb = alg.register("x(-1)y", h.nop(x, y));
    let lhs = ModeExpr::mode(Mode::new(a, 2)).add(&ModeExpr::mode(Mode::new(bb, 1)));
    let xi = alg.register("x", x.clone());
    let yi = alg.register("y", y.clone());
    let mut rhs = ModeExpr::zero();
    rhs.push_series(BilinearSeries::new(
        xi,
        -1,
        yi,
        1,
        SeriesCoeff::index().add(&SeriesCoeff::constant(Scalar::one())),
    ));
    rhs.push_series(BilinearSeries::new(
        yi,
        0,
        xi,
        0,
        SeriesCoeff::index().scale(&Scalar::from_int(-1)),
    ));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superspace::Config;

    fn h43() -> HookAlgebra {
        HookAlgebra::new(Config::new(4, 3).unwrap())
    }

    #[test]
    fn current_central_term() {
        let h = h43();
        let b = Builder::new(&h);
        let o = OracleConfig::symbolic(2);
        let got = b
            .alg
            .mode_bracket(Mode::new(b.w1(2, 3), 1), Mode::new(b.w1(3, 2), -1));
        let mut want = b.mode(b.w1(2, 2), 0).sub(&b.mode(b.w1(3, 3), 0));
        assert!(compare(&b.alg, &got, &want, &o).is_some());
        want.constant = &h.consts.alpha1 + &h.consts.alpha2;
        assert_eq!(compare(&b.alg, &got, &want, &o), None);
    }

    #[test]
    fn w_alias_brackets() {
        // [w⁽¹⁾_{n−1,n}, w⁽²⁾_{n,n}t] = w⁽²⁾_{n−1,n}t and [w⁽¹⁾_{n−1,n}, w⁽²⁾_{1,1}t] = 0 at (4,3)
        let h = h43();
        let b = Builder::new(&h);
        let o = OracleConfig::symbolic(2);
        let got = b
            .alg
            .mode_bracket(Mode::new(b.w1(3, 4), 0), Mode::new(b.w2(4, 4), 1));
        assert_eq!(compare(&b.alg, &got, &b.mode(b.w2(3, 4), 1), &o), None);
        let got = b
            .alg
            .mode_bracket(Mode::new(b.w1(3, 4), 0), Mode::new(b.w2(2, 2), 1));
        assert_eq!(compare(&b.alg, &got, &ModeExpr::zero(), &o), None);
    }

    #[test]
    fn derivative_modes_compare_by_oracle() {
        let h = h43();
        let b = Builder::new(&h);
        let x = h.w(1, 2, 3);
        let dx = b.id("∂W1_23".into(), h.partial(&x));
        let got = b.mode(dx, 1);
        let want = b.mode(b.w1(2, 3), 0).scale(&Scalar::from_int(-1));
        assert_eq!(
            compare(&b.alg, &got, &want, &OracleConfig::symbolic(2)),
            None
        );
    }
}
