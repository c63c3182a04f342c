use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::algebra::{Gen, LieTable};
use super::state::{conformal_weight, depth_weight, is_odd_monomial, Factor, Monomial, State};
use crate::scalars::{gen_binomial, Rational, Scalar};

/// Products u_{(s)}v for s ≥ 0, keyed by s.
pub type OpeTable = BTreeMap<u32, State>;

type ModeKey = (Gen, i64, Monomial);

/// The universal affine vertex (super)algebra of a [`LieTable`], realized on
/// its vacuum module in PBW normal form.
///
/// Mode actions of generators on monomials are memoized; the caches are
/// owned by the value, so clones used on different threads never share them.
pub struct VertexAlgebra {
    table: Arc<LieTable>,
    cache: RefCell<HashMap<ModeKey, State>>,
}

impl Clone for VertexAlgebra {
    fn clone(&self) -> Self {
        VertexAlgebra::new(self.table.clone())
    }
}

const CACHE_LIMIT: usize = 400_000;

impl VertexAlgebra {
    pub fn new(table: Arc<LieTable>) -> Self {
        VertexAlgebra {
            table,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn table(&self) -> &LieTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<LieTable> {
        self.table.clone()
    }

    fn swap_sign(&self, a: Gen, b: Gen) -> bool {
        self.table.is_odd(a) && self.table.is_odd(b)
    }

    /// u_{(a)} applied to a single monomial, with memoization.
    fn mode_on_monomial(&self, u: Gen, a: i64, mono: &[Factor]) -> State {
        let key = (u, a, Monomial::from_slice(mono));
        if let Some(hit) = self.cache.borrow().get(&key) {
            return hit.clone();
        }
        let mut out = State::zero();
        if a < 0 {
            self.insert_into(u, (-a) as u16, mono, &Scalar::one(), &mut out);
        } else {
            self.apply_into(u, a, mono, &Scalar::one(), &mut out);
        }
        let mut cache = self.cache.borrow_mut();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, out.clone());
        out
    }

    /// out += c · u[−d]·mono, renormalized.
    fn insert_into(&self, u: Gen, d: u16, mono: &[Factor], c: &Scalar, out: &mut State) {
        let f = Factor::new(u, d);
        match mono.first() {
            None => {
                out.add_term(smallvec::smallvec![f], c);
            }
            Some(&first) if f < first => {
                let mut m = Monomial::with_capacity(mono.len() + 1);
                m.push(f);
                m.extend_from_slice(mono);
                out.add_term(m, c);
            }
            Some(&first) if f == first => {
                if !self.table.is_odd(u) {
                    let mut m = Monomial::with_capacity(mono.len() + 1);
                    m.push(f);
                    m.extend_from_slice(mono);
                    out.add_term(m, c);
                }
            }
            Some(&first) => {
                // u[−d] v[−e] rest = ± v[−e] (u[−d] rest) + [u,v][−d−e] rest
                let rest = &mono[1..];
                let inner = self.mode_on_monomial(u, -(d as i64), rest);
                let coef = if self.swap_sign(u, first.gen) {
                    -c
                } else {
                    c.clone()
                };
                let odd_first = self.table.is_odd(first.gen);
                for (m, k) in inner.terms() {
                    // every factor of m is ≥ first, so prepending keeps PBW order
                    if odd_first && m.first() == Some(&first) {
                        continue;
                    }
                    let mut p = Monomial::with_capacity(m.len() + 1);
                    p.push(first);
                    p.extend_from_slice(m);
                    out.add_term(p, &(k * &coef));
                }
                for &(w, k) in self.table.bracket(u, first.gen) {
                    let sub = self.mode_on_monomial(w, -((d + first.depth) as i64), rest);
                    out.add_owned(sub, &c.scale(&Rational::from_int(k as i64)));
                }
            }
        }
    }

    /// out += c · u_{(a)} mono for a ≥ 0.
    fn apply_into(&self, u: Gen, a: i64, mono: &[Factor], c: &Scalar, out: &mut State) {
        let Some(&first) = mono.first() else {
            return;
        };
        let rest = &mono[1..];
        let e = first.depth as i64;
        // ± v[−e] (u_{(a)} rest)
        let inner = self.mode_on_monomial(u, a, rest);
        if !inner.is_zero() {
            let coef = if self.swap_sign(u, first.gen) {
                -c
            } else {
                c.clone()
            };
            for (m, k) in inner.terms() {
                let moved = self.mode_on_monomial(first.gen, -e, m);
                out.add_owned(moved, &(k * &coef));
            }
        }
        // [u,v]_{(a−e)} rest
        for &(w, k) in self.table.bracket(u, first.gen) {
            let sub = self.mode_on_monomial(w, a - e, rest);
            out.add_owned(sub, &c.scale(&Rational::from_int(k as i64)));
        }
        // a δ_{a,e} κ̃(u,v) rest
        if a == e {
            let kappa = self.table.form(u, first.gen);
            if !kappa.is_zero() {
                out.add_term(
                    Monomial::from_slice(rest),
                    &(&kappa.scale(&Rational::from_int(a)) * c),
                );
            }
        }
    }

    /// The mode u t^a (that is u_{(a)}) of a generator acting on a state.
    pub fn act_mode(&self, u: Gen, a: i64, v: &State) -> State {
        let mut out = State::zero();
        for (m, c) in v.terms() {
            let r = self.mode_on_monomial(u, a, m);
            out.add_owned(r, c);
        }
        out
    }

    /// Normal form of an arbitrary ordered word u₁[−s₁]⋯u_r[−s_r]|0⟩.
    pub fn order_word(&self, word: &[Factor]) -> State {
        let mut v = State::vacuum();
        for f in word.iter().rev() {
            v = self.act_mode(f.gen, -(f.depth as i64), &v);
        }
        v
    }

    /// The translation operator ∂.
    pub fn translate(&self, v: &State) -> State {
        let mut out = State::zero();
        for (m, c) in v.terms() {
            for i in 0..m.len() {
                let mut w: Vec<Factor> = m.to_vec();
                let d = w[i].depth;
                w[i].depth += 1;
                let coef = c.scale(&Rational::from_int(d as i64));
                if w.windows(2)
                    .all(|p| p[0] < p[1] || (p[0] == p[1] && !self.table.is_odd(p[0].gen)))
                {
                    out.add_term(w.into_iter().collect(), &coef);
                } else {
                    out.add_owned(self.order_word(&w), &coef);
                }
            }
        }
        out
    }

    /// a_{(s)} b for any integer s.
    pub fn nth_product(&self, a: &State, s: i64, b: &State) -> State {
        let mut out = State::zero();
        if b.is_zero() {
            return out;
        }
        let wb = b.max_depth_weight();
        for (m, c) in a.terms() {
            let r = self.nth_monomial(m, s, b, wb);
            out.add_owned(r, c);
        }
        out
    }

    fn nth_monomial(&self, m: &[Factor], s: i64, b: &State, wb: i64) -> State {
        let Some(&first) = m.first() else {
            return if s == -1 { b.clone() } else { State::zero() };
        };
        if s >= depth_weight(m) + wb {
            return State::zero();
        }
        let u = first.gen;
        let d = first.depth as i64;
        let rest = &m[1..];
        if rest.is_empty() {
            // (u[−d]|0⟩)_{(s)} = (−1)^{d−1} C(s, d−1) u_{(s−d+1)}
            let mut coef = gen_binomial(s, (d - 1) as u32);
            if coef.is_zero() {
                return State::zero();
            }
            if (d - 1) % 2 == 1 {
                coef = -coef;
            }
            return self
                .act_mode(u, s - d + 1, b)
                .scaled(&Scalar::from_rational(coef));
        }
        // (u_{(−d)} a')_{(s)} b
        //   = Σ_j C(d+j−1, j) [u_{(−d−j)} (a'_{(s+j)} b) − (−1)^d p(u,a') a'_{(s−d−j)} (u_{(j)} b)]
        let mut out = State::zero();
        let wa = depth_weight(rest);
        let mut j = 0i64;
        while s + j < wa + wb {
            let inner = self.nth_monomial(rest, s + j, b, wb);
            if !inner.is_zero() {
                let coef = Scalar::from_rational(gen_binomial(d + j - 1, j as u32));
                out.add_owned(self.act_mode(u, -d - j, &inner), &coef);
            }
            j += 1;
        }
        let mut sign = if d % 2 == 0 { -1 } else { 1 };
        if self.table.is_odd(u) && is_odd_monomial(&self.table, rest) {
            sign = -sign;
        }
        for j in 0..=wb {
            let ub = self.act_mode(u, j, b);
            if ub.is_zero() {
                continue;
            }
            let wub = ub.max_depth_weight();
            let inner = self.nth_monomial(rest, s - d - j, &ub, wub);
            if !inner.is_zero() {
                let coef = gen_binomial(d + j - 1, j as u32);
                out.add_owned(
                    inner,
                    &Scalar::from_rational(&coef * &Rational::from_int(sign)),
                );
            }
        }
        out
    }

    /// All nonzero products a_{(s)} b, s ≥ 0.
    pub fn ope_all(&self, a: &State, b: &State) -> OpeTable {
        let mut out = OpeTable::new();
        let bound = a.max_depth_weight() + b.max_depth_weight();
        for s in 0..bound.max(0) {
            let p = self.nth_product(a, s, b);
            if !p.is_zero() {
                out.insert(s as u32, p);
            }
        }
        out
    }

    /// PBW basis of the vacuum module of the even subalgebra, all monomials of
    /// conformal weight ≤ `max_weight`, in increasing weight.
    pub fn sub_basis(&self, max_weight: i64) -> Vec<Monomial> {
        let mut factors: Vec<Factor> = Vec::new();
        for depth in 1..=max_weight.max(0) as u16 {
            for g in self.table.gens() {
                if self.table.in_sub(g) && depth as i64 + self.table.shift(g) as i64 <= max_weight {
                    factors.push(Factor::new(g, depth));
                }
            }
        }
        factors.sort();
        let mut out = vec![Monomial::new()];
        let mut cur = Monomial::new();
        self.extend_basis(&factors, 0, max_weight, &mut cur, &mut out);
        out.sort_by_key(|m| (conformal_weight(&self.table, m), m.clone()));
        out
    }

    fn extend_basis(
        &self,
        factors: &[Factor],
        start: usize,
        budget: i64,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        for (idx, f) in factors.iter().enumerate().skip(start) {
            let w = f.depth as i64 + self.table.shift(f.gen) as i64;
            if w > budget {
                continue;
            }
            cur.push(*f);
            out.push(cur.clone());
            // even generators may repeat, so stay at idx
            let next = if self.table.is_odd(f.gen) {
                idx + 1
            } else {
                idx
            };
            self.extend_basis(factors, next, budget - w, cur, out);
            cur.pop();
        }
    }

    pub fn conformal_weight(&self, m: &[Factor]) -> i64 {
        conformal_weight(&self.table, m)
    }
}
