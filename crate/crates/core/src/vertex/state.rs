use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::algebra::{Gen, LieTable};
use crate::scalars::{Rational, Scalar};

/// One factor u[−depth] of a PBW monomial. The derived order (depth first,
/// then generator) is the PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub depth: u16,
    pub gen: Gen,
}

impl Factor {
    pub fn new(gen: Gen, depth: u16) -> Self {
        Factor { depth, gen }
    }
}

/// PBW monomial u₁[−s₁]⋯u_r[−s_r]|0⟩ with factors sorted ascending.
pub type Monomial = SmallVec<[Factor; 4]>;

/// Sum of depths.
pub fn depth_weight(m: &[Factor]) -> i64 {
    m.iter().map(|f| f.depth as i64).sum()
}

/// Conformal weight: Σ (depth + shift).
pub fn conformal_weight(table: &LieTable, m: &[Factor]) -> i64 {
    m.iter()
        .map(|f| f.depth as i64 + table.shift(f.gen) as i64)
        .sum()
}

pub fn is_odd_monomial(table: &LieTable, m: &[Factor]) -> bool {
    m.iter().filter(|f| table.is_odd(f.gen)).count() % 2 == 1
}

/// A vector of the vacuum module: finite combination of PBW monomials.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct State {
    terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::monomial(Monomial::new(), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut s = State::zero();
        s.add_term(m, &c);
        s
    }

    /// u[−depth]|0⟩.
    pub fn generator(gen: Gen, depth: u16) -> Self {
        State::monomial(smallvec::smallvec![Factor::new(gen, depth)], Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &[Factor]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of |0⟩.
    pub fn vacuum_coeff(&self) -> Scalar {
        self.coeff(&[])
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Like `add_term`, but only clones the monomial when it is new.
    fn add_term_ref(&mut self, m: &Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if self.terms.is_empty() && c.is_one() {
            self.terms = other.terms.clone();
            return;
        }
        if c.is_one() {
            for (m, d) in &other.terms {
                self.add_term_ref(m, d);
            }
        } else {
            for (m, d) in &other.terms {
                self.add_term_ref(m, &(d * c));
            }
        }
    }

    pub fn add_state(&mut self, other: &State) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn add_owned(&mut self, other: State, c: &Scalar) {
        if self.terms.is_empty() && c.is_one() {
            *self = other;
            return;
        }
        for (m, d) in other.terms {
            if c.is_one() {
                self.add_term(m, &d);
            } else {
                self.add_term(m, &(&d * c));
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> State {
        let mut out = State::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scaled_int(&self, c: i64) -> State {
        if c == 0 {
            return State::zero();
        }
        let r = Rational::from_int(c);
        State {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d.scale(&r)))
                .collect(),
        }
    }

    pub fn neg(&self) -> State {
        self.scaled_int(-1)
    }

    pub fn sub(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    /// Largest depth weight among the terms (0 for the zero state).
    pub fn max_depth_weight(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| depth_weight(m))
            .max()
            .unwrap_or(0)
    }

    pub fn max_conformal_weight(&self, table: &LieTable) -> i64 {
        self.terms
            .keys()
            .map(|m| conformal_weight(table, m))
            .max()
            .unwrap_or(0)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<E>(
        &self,
        mut f: impl FnMut(&Scalar) -> Result<Scalar, E>,
    ) -> Result<State, E> {
        let mut out = State::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, table: &'a LieTable) -> StateDisplay<'a> {
        StateDisplay { state: self, table }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| {
                let key: Vec<(u16, u16)> = m.iter().map(|x| (x.gen, x.depth)).collect();
                (key, c.to_string())
            }))
            .finish()
    }
}

pub struct StateDisplay<'a> {
    state: &'a State,
    table: &'a LieTable,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.state.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.state.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})")?;
            }
            for x in m {
                write!(f, "{}[-{}]", self.table.name(x.gen), x.depth)?;
            }
            write!(f, "|0>")?;
        }
        Ok(())
    }
}
