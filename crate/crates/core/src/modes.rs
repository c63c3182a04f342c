//! Modes v t^a of a vertex algebra, the Borcherds bracket between them,
//! bilinear series Σ_s c(s) (A t^{p−s})(B t^{q+s}) and an action oracle on the
//! vacuum module that decides identities in the completed enveloping algebra.
//!
//! A mode v t^a acts on the vacuum module as v_{(a)}. Identities are decided by
//! acting on every PBW basis vector up to a chosen conformal weight, so a
//! nonzero verdict is exact and a zero verdict is evidence up to that weight.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::scalars::{gen_binomial, Rational, Scalar, ScalarError};
use crate::vertex::{depth_weight, Monomial, State, VertexAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeError {
    #[error("use action oracle")]
    SeriesProduct,
    #[error("odd states are not supported inside series")]
    OddSeries,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Handle of a state registered in a [`ModeAlgebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

/// v t^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub state: StateId,
    pub power: i64,
}

impl Mode {
    pub fn new(state: StateId, power: i64) -> Self {
        Mode { state, power }
    }
}

/// Polynomial in the summation index s, coefficients from degree 0 upward.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeriesCoeff {
    coeffs: Vec<Scalar>,
}

impl SeriesCoeff {
    pub fn constant(c: Scalar) -> Self {
        SeriesCoeff::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        SeriesCoeff { coeffs }
    }

    /// s itself.
    pub fn index() -> Self {
        SeriesCoeff::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, s: i64) -> Scalar {
        let x = Scalar::from_int(s);
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SeriesCoeff::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &SeriesCoeff) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Scalar], i: usize| v.get(i).cloned().unwrap_or_default();
        SeriesCoeff::from_coeffs(
            (0..n)
                .map(|i| &get(&self.coeffs, i) + &get(&other.coeffs, i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &SeriesCoeff) -> Self {
        if self.is_zero() || other.is_zero() {
            return SeriesCoeff::default();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        SeriesCoeff::from_coeffs(out)
    }

    /// s ↦ c(s + k).
    pub fn shift(&self, k: i64) -> Self {
        let lin = SeriesCoeff::from_coeffs(vec![Scalar::from_int(k), Scalar::one()]);
        let mut acc = SeriesCoeff::default();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&SeriesCoeff::constant(c.clone()));
        }
        acc
    }

    /// C(base + sign·s, r) as a polynomial in s.
    pub fn binomial(base: i64, sign: i64, r: u32) -> Self {
        let mut acc = SeriesCoeff::constant(Scalar::one());
        for t in 0..r as i64 {
            let factor =
                SeriesCoeff::from_coeffs(vec![Scalar::from_int(base - t), Scalar::from_int(sign)]);
            acc = acc.mul(&factor);
        }
        let fact: i64 = (1..=r as i64).product();
        acc.scale(&Scalar::from_rational(
            Rational::new(1, fact).expect("nonzero factorial"),
        ))
    }

    fn try_map(
        &self,
        f: &impl Fn(&Scalar) -> Result<Scalar, ScalarError>,
    ) -> Result<Self, ScalarError> {
        Ok(SeriesCoeff::from_coeffs(
            self.coeffs.iter().map(f).collect::<Result<_, _>>()?,
        ))
    }
}

impl fmt::Display for SeriesCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})s")?,
                _ => write!(f, "({c})s^{d}")?,
            }
        }
        Ok(())
    }
}

/// Σ_{s≥0} coeff(s) · (left t^{p_left−s})(right t^{p_right+s}).
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearSeries {
    pub left: StateId,
    pub right: StateId,
    pub p_left: i64,
    pub p_right: i64,
    pub coeff: SeriesCoeff,
}

impl BilinearSeries {
    pub fn new(
        left: StateId,
        p_left: i64,
        right: StateId,
        p_right: i64,
        coeff: SeriesCoeff,
    ) -> Self {
        BilinearSeries {
            left,
            right,
            p_left,
            p_right,
            coeff,
        }
    }
}

/// c · m₁ m₂ ⋯ m_r, the rightmost mode acting first.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    pub coeff: Scalar,
    pub modes: Vec<Mode>,
}

/// Element of the completed enveloping algebra: a scalar, finitely many words
/// of modes and finitely many bilinear series.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeExpr {
    pub constant: Scalar,
    pub words: Vec<Word>,
    pub series: Vec<BilinearSeries>,
}

impl ModeExpr {
    pub fn zero() -> Self {
        ModeExpr::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        ModeExpr {
            constant: c,
            ..Default::default()
        }
    }

    pub fn mode(m: Mode) -> Self {
        ModeExpr::word(Scalar::one(), vec![m])
    }

    pub fn word(coeff: Scalar, modes: Vec<Mode>) -> Self {
        let mut e = ModeExpr::zero();
        e.push_word(coeff, modes);
        e
    }

    pub fn from_series(s: BilinearSeries) -> Self {
        let mut e = ModeExpr::zero();
        e.push_series(s);
        e
    }

    pub fn push_word(&mut self, coeff: Scalar, modes: Vec<Mode>) {
        if coeff.is_zero() {
            return;
        }
        if modes.is_empty() {
            self.constant += &coeff;
        } else {
            self.words.push(Word { coeff, modes });
        }
    }

    pub fn push_series(&mut self, s: BilinearSeries) {
        if !s.coeff.is_zero() {
            self.series.push(s);
        }
    }

    pub fn has_series(&self) -> bool {
        !self.series.is_empty()
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.constant.is_zero() && self.words.is_empty() && self.series.is_empty()
    }

    pub fn add(&self, other: &ModeExpr) -> ModeExpr {
        let mut out = self.clone();
        out.constant += &other.constant;
        out.words.extend(other.words.iter().cloned());
        out.series.extend(other.series.iter().cloned());
        out
    }

    pub fn scale(&self, c: &Scalar) -> ModeExpr {
        if c.is_zero() {
            return ModeExpr::zero();
        }
        ModeExpr {
            constant: &self.constant * c,
            words: self
                .words
                .iter()
                .map(|w| Word {
                    coeff: &w.coeff * c,
                    modes: w.modes.clone(),
                })
                .collect(),
            series: self
                .series
                .iter()
                .map(|s| BilinearSeries {
                    coeff: s.coeff.scale(c),
                    ..s.clone()
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModeExpr) -> ModeExpr {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Product of two expressions; only defined when neither factor pairs a
    /// series with a non-scalar term.
    pub fn mul(&self, other: &ModeExpr) -> Result<ModeExpr, ModeError> {
        let bad = |x: &ModeExpr, y: &ModeExpr| {
            x.has_series() && !(y.words.is_empty() && y.series.is_empty())
        };
        if bad(self, other) || bad(other, self) {
            return Err(ModeError::SeriesProduct);
        }
        let mut out = ModeExpr::scalar(&self.constant * &other.constant);
        for w in &other.words {
            out.push_word(&self.constant * &w.coeff, w.modes.clone());
        }
        for w in &self.words {
            out.push_word(&w.coeff * &other.constant, w.modes.clone());
            for v in &other.words {
                let mut modes = w.modes.clone();
                modes.extend_from_slice(&v.modes);
                out.push_word(&w.coeff * &v.coeff, modes);
            }
        }
        for s in &self.series {
            out.push_series(BilinearSeries {
                coeff: s.coeff.scale(&other.constant),
                ..s.clone()
            });
        }
        for s in &other.series {
            out.push_series(BilinearSeries {
                coeff: s.coeff.scale(&self.constant),
                ..s.clone()
            });
        }
        Ok(out)
    }

    pub fn try_map_scalars(
        &self,
        f: &impl Fn(&Scalar) -> Result<Scalar, ScalarError>,
    ) -> Result<ModeExpr, ScalarError> {
        let mut out = ModeExpr::scalar(f(&self.constant)?);
        for w in &self.words {
            out.push_word(f(&w.coeff)?, w.modes.clone());
        }
        for s in &self.series {
            out.push_series(BilinearSeries {
                coeff: s.coeff.try_map(f)?,
                ..s.clone()
            });
        }
        Ok(out)
    }

    pub fn specialize(&self, k0: &Rational) -> Result<ModeExpr, ScalarError> {
        self.try_map_scalars(&|c| c.substitute(k0))
    }
}

/// Finite sum of products of expressions. Used where a product of two series
/// is needed, which [`ModeExpr`] cannot hold.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Operator {
    pub terms: Vec<(Scalar, Vec<ModeExpr>)>,
}

impl Operator {
    pub fn from_expr(e: ModeExpr) -> Self {
        Operator {
            terms: vec![(Scalar::one(), vec![e])],
        }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: &Scalar) -> Operator {
        Operator {
            terms: self.terms.iter().map(|(k, f)| (k * c, f.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut f = x.clone();
                f.extend(y.iter().cloned());
                terms.push((a * b, f));
            }
        }
        Operator { terms }
    }

    /// xy − yx.
    pub fn commutator(x: &Operator, y: &Operator) -> Operator {
        x.mul(y).sub(&y.mul(x))
    }

    pub fn specialize(&self, k0: &Rational) -> Result<Operator, ScalarError> {
        let mut terms = Vec::new();
        for (c, f) in &self.terms {
            let f = f
                .iter()
                .map(|e| e.specialize(k0))
                .collect::<Result<_, _>>()?;
            terms.push((c.substitute(k0)?, f));
        }
        Ok(Operator { terms })
    }
}

impl From<ModeExpr> for Operator {
    fn from(e: ModeExpr) -> Self {
        Operator::from_expr(e)
    }
}

#[derive(Default)]
struct Registry {
    states: Vec<Arc<State>>,
    labels: Vec<String>,
    lookup: HashMap<State, StateId>,
}

type ActKey = (StateId, i64, Monomial);

const ACT_CACHE_LIMIT: usize = 600_000;

/// Registry of states whose modes appear in expressions, together with the
/// vertex algebra they act through and a memo of mode actions on monomials.
pub struct ModeAlgebra {
    va: VertexAlgebra,
    registry: RefCell<Registry>,
    cache: RefCell<FxHashMap<ActKey, Arc<State>>>,
}

impl Clone for ModeAlgebra {
    fn clone(&self) -> Self {
        let reg = self.registry.borrow();
        ModeAlgebra {
            va: self.va.clone(),
            registry: RefCell::new(Registry {
                states: reg.states.clone(),
                labels: reg.labels.clone(),
                lookup: reg.lookup.clone(),
            }),
            cache: RefCell::default(),
        }
    }
}

impl ModeAlgebra {
    pub fn new(va: VertexAlgebra) -> Self {
        ModeAlgebra {
            va,
            registry: RefCell::default(),
            cache: RefCell::default(),
        }
    }

    pub fn va(&self) -> &VertexAlgebra {
        &self.va
    }

    /// Registers `v` under a display label; an already registered state keeps
    /// its first id and label.
    pub fn register(&self, label: impl Into<String>, v: State) -> StateId {
        let mut reg = self.registry.borrow_mut();
        if let Some(&id) = reg.lookup.get(&v) {
            return id;
        }
        let id = StateId(reg.states.len() as u32);
        reg.states.push(Arc::new(v.clone()));
        reg.labels.push(label.into());
        reg.lookup.insert(v, id);
        id
    }

    fn register_anon(&self, v: State) -> StateId {
        let n = self.registry.borrow().states.len();
        self.register(format!("v{n}"), v)
    }

    pub fn state(&self, id: StateId) -> Arc<State> {
        Arc::clone(&self.registry.borrow().states[id.0 as usize])
    }

    pub fn label(&self, id: StateId) -> String {
        self.registry.borrow().labels[id.0 as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.registry.borrow().states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same registry over the vertex algebra specialized at k = `k0`.
    pub fn specialize(&self, k0: &Rational) -> Result<ModeAlgebra, ScalarError> {
        let table = self.va.table().specialize(k0)?;
        let out = ModeAlgebra::new(VertexAlgebra::new(Arc::new(table)));
        let reg = self.registry.borrow();
        let mut new = Registry::default();
        for (v, l) in reg.states.iter().zip(&reg.labels) {
            let w = v.map_coeffs(|c| c.substitute(k0))?;
            // keep ids aligned even if two states collapse after specializing
            new.lookup
                .entry(w.clone())
                .or_insert(StateId(new.states.len() as u32));
            new.states.push(Arc::new(w));
            new.labels.push(l.clone());
        }
        *out.registry.borrow_mut() = new;
        Ok(out)
    }

    /// Splits a state into its vacuum coefficient and the rest.
    fn split_vacuum(v: &State) -> (Scalar, State) {
        let c = v.vacuum_coeff();
        let mut rest = v.clone();
        if !c.is_zero() {
            rest.add_term(Monomial::new(), &-&c);
        }
        (c, rest)
    }

    fn is_odd_state(&self, id: StateId) -> bool {
        let v = self.state(id);
        let table = self.va.table();
        let odd = v
            .terms()
            .any(|(m, _)| crate::vertex::is_odd_monomial(table, m));
        odd
    }

    /// [u t^a, v t^b] = Σ_r C(a,r) (u_{(r)}v) t^{a+b−r}.
    pub fn mode_bracket(&self, x: Mode, y: Mode) -> ModeExpr {
        let u = self.state(x.state);
        let v = self.state(y.state);
        let mut out = ModeExpr::zero();
        let bound = u.max_depth_weight() + v.max_depth_weight();
        for r in 0..bound.max(0) {
            let c = gen_binomial(x.power, r as u32);
            if c.is_zero() {
                continue;
            }
            let p = self.va.nth_product(&u, r, &v);
            self.push_mode_of(
                &mut out,
                &p,
                x.power + y.power - r,
                &Scalar::from_rational(c),
            );
        }
        out
    }

    /// out += c · (v t^a), turning the vacuum part into a scalar.
    fn push_mode_of(&self, out: &mut ModeExpr, v: &State, a: i64, c: &Scalar) {
        let (vac, rest) = Self::split_vacuum(v);
        if a == -1 {
            out.constant += &(&vac * c);
        }
        if !rest.is_zero() {
            let id = self.register_anon(rest);
            out.push_word(c.clone(), vec![Mode::new(id, a)]);
        }
    }

    /// [series, u t^a] by the Leibniz rule, with the binomials in s folded into
    /// the coefficient polynomial.
    fn series_bracket_mode(&self, s: &BilinearSeries, x: Mode) -> Result<ModeExpr, ModeError> {
        if self.is_odd_state(s.left) || self.is_odd_state(s.right) || self.is_odd_state(x.state) {
            return Err(ModeError::OddSeries);
        }
        let u = self.state(x.state);
        let a_state = self.state(s.left);
        let b_state = self.state(s.right);
        let mut out = ModeExpr::zero();
        // A t^{p−s} [B t^{q+s}, u t^a] = Σ_r C(q+s, r) A t^{p−s} (B_{(r)}u) t^{q+a−r+s}
        for r in 0..(b_state.max_depth_weight() + u.max_depth_weight()).max(0) {
            let prod = self.va.nth_product(&b_state, r, &u);
            if prod.is_zero() {
                continue;
            }
            let coeff = s.coeff.mul(&SeriesCoeff::binomial(s.p_right, 1, r as u32));
            let (vac, rest) = Self::split_vacuum(&prod);
            let q2 = s.p_right + x.power - r;
            if !vac.is_zero() {
                // |0⟩ t^{q2+s} survives only at q2 + s = −1
                let s_star = -1 - q2;
                if s_star >= 0 {
                    let c = &coeff.eval(s_star) * &vac;
                    out.push_word(c, vec![Mode::new(s.left, s.p_left - s_star)]);
                }
            }
            if !rest.is_zero() {
                let id = self.register_anon(rest);
                out.push_series(BilinearSeries::new(s.left, s.p_left, id, q2, coeff));
            }
        }
        // [A t^{p−s}, u t^a] B t^{q+s} = Σ_r C(p−s, r) (A_{(r)}u) t^{p+a−r−s} B t^{q+s}
        for r in 0..(a_state.max_depth_weight() + u.max_depth_weight()).max(0) {
            let prod = self.va.nth_product(&a_state, r, &u);
            if prod.is_zero() {
                continue;
            }
            let coeff = s.coeff.mul(&SeriesCoeff::binomial(s.p_left, -1, r as u32));
            let (vac, rest) = Self::split_vacuum(&prod);
            let p2 = s.p_left + x.power - r;
            if !vac.is_zero() {
                let s_star = p2 + 1;
                if s_star >= 0 {
                    let c = &coeff.eval(s_star) * &vac;
                    out.push_word(c, vec![Mode::new(s.right, s.p_right + s_star)]);
                }
            }
            if !rest.is_zero() {
                let id = self.register_anon(rest);
                out.push_series(BilinearSeries::new(id, p2, s.right, s.p_right, coeff));
            }
        }
        Ok(out)
    }

    /// [word, word] by the Leibniz rule down to mode brackets.
    fn word_bracket(&self, x: &[Mode], y: &[Mode]) -> ModeExpr {
        let mut out = ModeExpr::zero();
        if x.len() == 1 && y.len() == 1 {
            return self.mode_bracket(x[0], y[0]);
        }
        if x.len() > 1 {
            // [AB, Y] = A[B,Y] + [A,Y]B
            let (a, b) = x.split_at(1);
            let inner = self.word_bracket(b, y);
            out = out.add(
                &ModeExpr::word(Scalar::one(), a.to_vec())
                    .mul(&inner)
                    .expect("words only"),
            );
            let inner = self.word_bracket(a, y);
            out = out.add(
                &inner
                    .mul(&ModeExpr::word(Scalar::one(), b.to_vec()))
                    .expect("words only"),
            );
            return out;
        }
        // [X, CD] = [X,C]D + C[X,D]
        let (c, d) = y.split_at(1);
        let inner = self.word_bracket(x, c);
        out = out.add(
            &inner
                .mul(&ModeExpr::word(Scalar::one(), d.to_vec()))
                .expect("words only"),
        );
        let inner = self.word_bracket(x, d);
        out.add(
            &ModeExpr::word(Scalar::one(), c.to_vec())
                .mul(&inner)
                .expect("words only"),
        )
    }

    /// Symbolic bracket of two expressions of even modes. A series may only
    /// meet single modes; anything else is left to the oracle.
    pub fn bracket_expr(&self, x: &ModeExpr, y: &ModeExpr) -> Result<ModeExpr, ModeError> {
        let mut out = ModeExpr::zero();
        for wx in &x.words {
            for wy in &y.words {
                out = out.add(
                    &self
                        .word_bracket(&wx.modes, &wy.modes)
                        .scale(&(&wx.coeff * &wy.coeff)),
                );
            }
            for sy in &y.series {
                let [m] = wx.modes.as_slice() else {
                    return Err(ModeError::SeriesProduct);
                };
                let b = self.series_bracket_mode(sy, *m)?;
                out = out.sub(&b.scale(&wx.coeff));
            }
        }
        for sx in &x.series {
            if !y.series.is_empty() {
                return Err(ModeError::SeriesProduct);
            }
            for wy in &y.words {
                let [m] = wy.modes.as_slice() else {
                    return Err(ModeError::SeriesProduct);
                };
                out = out.add(&self.series_bracket_mode(sx, *m)?.scale(&wy.coeff));
            }
        }
        Ok(out)
    }

    /// v_{(a)} applied to a state, memoized per monomial.
    pub fn apply_mode(&self, m: Mode, v: &State) -> State {
        let mut out = State::zero();
        let st = self.state(m.state);
        let wa = st.max_depth_weight();
        for (mono, c) in v.terms() {
            if m.power >= wa + depth_weight(mono) {
                continue;
            }
            let key = (m.state, m.power, mono.clone());
            let hit = self.cache.borrow().get(&key).cloned();
            let r = match hit {
                Some(r) => r,
                None => {
                    let r = Arc::new(self.va.nth_product(
                        &st,
                        m.power,
                        &State::monomial(mono.clone(), Scalar::one()),
                    ));
                    let mut cache = self.cache.borrow_mut();
                    if cache.len() >= ACT_CACHE_LIMIT {
                        cache.clear();
                    }
                    cache.insert(key, Arc::clone(&r));
                    r
                }
            };
            out.add_scaled(&r, c);
        }
        out
    }

    fn apply_word(&self, modes: &[Mode], v: &State) -> State {
        let mut cur = v.clone();
        for m in modes.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.apply_mode(*m, &cur);
        }
        cur
    }

    /// The exact action of an expression on a state. Every series has only
    /// finitely many nonzero terms on a given state.
    pub fn act(&self, e: &ModeExpr, v: &State) -> State {
        let mut out = v.scaled(&e.constant);
        for w in &e.words {
            out.add_owned(self.apply_word(&w.modes, v), &w.coeff);
        }
        for s in &e.series {
            let right = self.state(s.right);
            let bound = (right.max_depth_weight() + v.max_depth_weight() - s.p_right).max(0);
            for k in 0..=bound {
                let c = s.coeff.eval(k);
                if c.is_zero() {
                    continue;
                }
                let inner = self.apply_mode(Mode::new(s.right, s.p_right + k), v);
                if inner.is_zero() {
                    continue;
                }
                out.add_owned(self.apply_mode(Mode::new(s.left, s.p_left - k), &inner), &c);
            }
        }
        out
    }

    pub fn act_operator(&self, op: &Operator, v: &State) -> State {
        let mut out = State::zero();
        for (c, factors) in &op.terms {
            let mut cur = v.clone();
            for f in factors.iter().rev() {
                if cur.is_zero() {
                    break;
                }
                cur = self.act(f, &cur);
            }
            out.add_owned(cur, c);
        }
        out
    }

    /// Rewrites every series to start at p_left = −1, moving the peeled or
    /// missing boundary terms into words. Idempotent.
    pub fn series_normalize(&self, e: &ModeExpr) -> ModeExpr {
        let mut out = ModeExpr {
            constant: e.constant.clone(),
            words: e.words.clone(),
            series: Vec::new(),
        };
        for s in &e.series {
            let shift = s.p_left + 1;
            if shift > 0 {
                // peel s = 0..shift−1, then s ↦ s + shift
                for k in 0..shift {
                    let c = s.coeff.eval(k);
                    out.push_word(
                        c,
                        vec![
                            Mode::new(s.left, s.p_left - k),
                            Mode::new(s.right, s.p_right + k),
                        ],
                    );
                }
            } else {
                // extend down to the anchor and subtract the added terms
                for k in shift..0 {
                    let c = s.coeff.eval(k);
                    out.push_word(
                        -&c,
                        vec![
                            Mode::new(s.left, s.p_left - k),
                            Mode::new(s.right, s.p_right + k),
                        ],
                    );
                }
            }
            out.push_series(BilinearSeries::new(
                s.left,
                -1,
                s.right,
                s.p_right + shift,
                s.coeff.shift(shift),
            ));
        }
        out
    }

    pub fn display_mode(&self, m: Mode) -> String {
        format!("{}t^{}", self.label(m.state), m.power)
    }

    pub fn display_expr(&self, e: &ModeExpr) -> String {
        let mut out = String::new();
        if !e.constant.is_zero() {
            let _ = write!(out, "({})", e.constant);
        }
        for w in &e.words {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = write!(out, "({})", w.coeff);
            for m in &w.modes {
                let _ = write!(out, " {}", self.display_mode(*m));
            }
        }
        for s in &e.series {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = write!(
                out,
                "Σ_s [{}] {}t^({}-s) {}t^({}+s)",
                s.coeff,
                self.label(s.left),
                s.p_left,
                self.label(s.right),
                s.p_right
            );
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// How the level k is treated by the oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum KMode {
    Symbolic,
    Rational(Rational),
    /// `count` random rational levels drawn from a seeded generator.
    Random {
        count: usize,
        seed: u64,
    },
}

impl fmt::Display for KMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KMode::Symbolic => write!(f, "symbolic"),
            KMode::Rational(k) => write!(f, "{k}"),
            KMode::Random { count, seed } => write!(f, "random({count},{seed})"),
        }
    }
}

/// Draws `count` distinct small rational levels.
pub fn random_levels(count: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < count {
        let num: i64 = rng.gen_range(-60..=60);
        let den: i64 = rng.gen_range(1..=9);
        let k = Rational::new(num, den).expect("positive denominator");
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

/// Which basis vectors the oracle tests.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Conformal weight bound D of the test vectors.
    pub depth: i64,
    pub k_mode: KMode,
    /// Every basis vector of weight ≤ `full_below`, plus a seeded sample of
    /// `count` vectors above it; `None` tests the whole basis.
    pub sample: Option<Sample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub full_below: i64,
    pub count: usize,
    pub seed: u64,
}

impl OracleConfig {
    pub fn symbolic(depth: i64) -> Self {
        OracleConfig {
            depth,
            k_mode: KMode::Symbolic,
            sample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A basis vector with nonzero image, both rendered.
    Nonzero {
        witness: String,
        image: String,
        level: Option<String>,
    },
    ZeroUpTo(i64),
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::ZeroUpTo(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ZeroUpTo(d) => write!(f, "zero up to weight {d}"),
            Verdict::Nonzero {
                witness,
                image,
                level,
            } => {
                write!(f, "nonzero on {witness}")?;
                if let Some(k) = level {
                    write!(f, " at k = {k}")?;
                }
                write!(f, ": {image}")
            }
        }
    }
}

/// The test vectors for a configuration, in increasing weight.
pub fn test_vectors(va: &VertexAlgebra, cfg: &OracleConfig) -> Vec<Monomial> {
    match &cfg.sample {
        None => va.sub_basis(cfg.depth),
        Some(s) => {
            let all = va.sub_basis(cfg.depth);
            let (mut low, high): (Vec<Monomial>, Vec<Monomial>) = all
                .into_iter()
                .partition(|m| va.conformal_weight(m) <= s.full_below);
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut picked: Vec<usize> =
                sample(&mut rng, high.len(), s.count.min(high.len())).into_vec();
            picked.sort_unstable();
            low.extend(picked.into_iter().map(|i| high[i].clone()));
            low
        }
    }
}

const IMAGE_LIMIT: usize = 300;

fn run_on(
    alg: &ModeAlgebra,
    op: &Operator,
    vectors: &[Monomial],
    depth: i64,
    level: Option<String>,
) -> Verdict {
    for m in vectors {
        let v = State::monomial(m.clone(), Scalar::one());
        let img = alg.act_operator(op, &v);
        if !img.is_zero() {
            let table = alg.va().table();
            return Verdict::Nonzero {
                witness: v.display(table).to_string(),
                image: crate::report::summarize(&img.display(table).to_string(), IMAGE_LIMIT),
                level,
            };
        }
    }
    Verdict::ZeroUpTo(depth)
}

/// Decides whether `op` acts as zero on precomputed test vectors, with the
/// coefficients already in the field `alg` works over.
pub fn is_zero_on(alg: &ModeAlgebra, op: &Operator, vectors: &[Monomial], depth: i64) -> Verdict {
    run_on(alg, op, vectors, depth, None)
}

/// Decides whether `op` acts as zero on the test vectors of `cfg`.
pub fn is_zero_oracle(
    alg: &ModeAlgebra,
    op: &Operator,
    cfg: &OracleConfig,
) -> Result<Verdict, ScalarError> {
    let levels = match &cfg.k_mode {
        KMode::Symbolic => {
            let vectors = test_vectors(alg.va(), cfg);
            return Ok(run_on(alg, op, &vectors, cfg.depth, None));
        }
        KMode::Rational(k) => vec![k.clone()],
        KMode::Random { count, seed } => random_levels(*count, *seed),
    };
    for k in levels {
        let spec = alg.specialize(&k)?;
        let op_k = op.specialize(&k)?;
        let vectors = test_vectors(spec.va(), cfg);
        let v = run_on(&spec, &op_k, &vectors, cfg.depth, Some(k.to_string()));
        if !v.is_zero() {
            return Ok(v);
        }
    }
    Ok(Verdict::ZeroUpTo(cfg.depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superspace::Config;
    use crate::wgens::HookAlgebra;

    fn setup() -> (HookAlgebra, ModeAlgebra) {
        let h = HookAlgebra::new(Config::new(4, 3).unwrap());
        let alg = ModeAlgebra::new(h.va().clone());
        (h, alg)
    }

    #[test]
    fn series_coeff_algebra() {
        let c = SeriesCoeff::binomial(3, -1, 2); // C(3−s, 2)
        for s in 0..6 {
            assert_eq!(c.eval(s), Scalar::from_rational(gen_binomial(3 - s, 2)));
        }
        let sh = SeriesCoeff::index().shift(1);
        assert_eq!(sh.eval(4), Scalar::from_int(5));
    }

    #[test]
    fn vacuum_examples() {
        let (h, alg) = setup();
        let x = alg.register("W1(1,2)", h.w(1, 1, 2));
        let vac = State::vacuum();
        assert!(alg.act(&ModeExpr::mode(Mode::new(x, 0)), &vac).is_zero());
        assert_eq!(
            alg.act(&ModeExpr::mode(Mode::new(x, -1)), &vac),
            h.w(1, 1, 2)
        );
    }

    #[test]
    fn zero_degree_bracket() {
        let (h, alg) = setup();
        let u = alg.register("u", h.w(1, 1, 2));
        let v = alg.register("v", h.w(1, 2, 3));
        let b = alg.mode_bracket(Mode::new(u, 0), Mode::new(v, 0));
        assert_eq!(b.words.len(), 1);
        assert_eq!(
            *alg.state(b.words[0].modes[0].state),
            h.va().nth_product(&h.w(1, 1, 2), 0, &h.w(1, 2, 3))
        );
    }

    #[test]
    fn derivative_mode_relation() {
        let (h, alg) = setup();
        let x = h.w(1, 2, 3);
        let dx = alg.register("dx", h.partial(&x));
        let xi = alg.register("x", x);
        let lhs = ModeExpr::mode(Mode::new(dx, 1));
        let rhs = ModeExpr::mode(Mode::new(xi, 0)).scale(&Scalar::from_int(-1));
        let op = Operator::from_expr(lhs.sub(&rhs));
        assert!(is_zero_oracle(&alg, &op, &OracleConfig::symbolic(2))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn oracle_examples() {
        let (h, alg) = setup();
        let x = alg.register("W1(1,2)", h.w(1, 1, 2));
        let op = Operator::from_expr(ModeExpr::mode(Mode::new(x, 0)));
        assert!(!is_zero_oracle(&alg, &op, &OracleConfig::symbolic(1))
            .unwrap()
            .is_zero());
        let zero = Operator::from_expr(ModeExpr::zero());
        assert_eq!(
            is_zero_oracle(&alg, &zero, &OracleConfig::symbolic(2)).unwrap(),
            Verdict::ZeroUpTo(2)
        );
    }

    #[test]
    fn normalize_examples() {
        let (h, alg) = setup();
        let a = alg.register("A", h.w(1, 2, 3));
        let b = alg.register("B", h.w(1, 3, 2));
        let s = BilinearSeries::new(a, 1, b, 0, SeriesCoeff::constant(Scalar::one()));
        let e = ModeExpr::from_series(s);
        let n = alg.series_normalize(&e);
        assert_eq!(n.words.len(), 2);
        assert_eq!(n.series[0].p_left, -1);
        assert_eq!(n.series[0].p_right, 2);
        assert_eq!(alg.series_normalize(&n), n);
        let cfg = OracleConfig::symbolic(3);
        assert!(is_zero_oracle(&alg, &Operator::from_expr(e.sub(&n)), &cfg)
            .unwrap()
            .is_zero());

        let s = BilinearSeries::new(a, 0, b, 0, SeriesCoeff::index());
        let e = ModeExpr::from_series(s);
        let n = alg.series_normalize(&e);
        assert!(n.words.is_empty());
        assert_eq!(n.series[0].coeff, SeriesCoeff::index().shift(1));
        assert!(is_zero_oracle(&alg, &Operator::from_expr(e.sub(&n)), &cfg)
            .unwrap()
            .is_zero());
    }
}
