use std::collections::HashMap;

use smallvec::SmallVec;

use crate::scalars::{LevelConstants, Rational, Scalar, ScalarError};
use crate::superspace::{algebra_basis, bracket_terms, form_with, BasisVector, Config, Form, Kind};

/// Generator id inside a [`LieTable`].
pub type Gen = u16;

/// Structure constants of a finite-dimensional Lie superalgebra with an
/// invariant form: the data from which the universal affine vertex algebra is
/// built.
#[derive(Clone, Debug)]
pub struct LieTable {
    names: Vec<String>,
    odd: Vec<bool>,
    /// Conformal weight of u[−s] is s + shift.
    shift: Vec<u8>,
    /// Whether the generator belongs to the even subalgebra whose vacuum
    /// module is used as test space.
    in_sub: Vec<bool>,
    brackets: Vec<SmallVec<[(Gen, i32); 2]>>,
    forms: Vec<Scalar>,
    vectors: Vec<Option<BasisVector>>,
    lookup: HashMap<BasisVector, Gen>,
}

impl LieTable {
    /// 𝔞 with the form κ̃ evaluated with the given level constants.
    pub fn superalgebra(cfg: &Config, consts: &LevelConstants) -> Self {
        let basis = algebra_basis(cfg);
        let dim = basis.len();
        let lookup: HashMap<BasisVector, Gen> = basis
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as Gen))
            .collect();
        let mut brackets = Vec::with_capacity(dim * dim);
        let mut forms = Vec::with_capacity(dim * dim);
        for x in &basis {
            for y in &basis {
                let terms = bracket_terms(x, y)
                    .into_iter()
                    .map(|(v, c)| (lookup[&v], c as i32))
                    .collect();
                brackets.push(terms);
                forms.push(form_with(cfg, consts, Form::KappaTilde, x, y));
            }
        }
        LieTable {
            names: basis.iter().map(ToString::to_string).collect(),
            odd: basis.iter().map(BasisVector::is_odd).collect(),
            shift: basis
                .iter()
                .map(|v| (v.kind == Kind::E && cfg.col(v.i) > cfg.col(v.j)) as u8)
                .collect(),
            in_sub: basis.iter().map(|v| !v.is_odd()).collect(),
            brackets,
            forms,
            vectors: basis.iter().copied().map(Some).collect(),
            lookup,
        }
    }

    /// gl(n) with the form (E_{p,q}|E_{i,j}) = c δ_{i,q} δ_{p,j} + δ_{p,q} δ_{i,j}.
    pub fn gl(n: usize, c: &Scalar) -> Self {
        let idx = |i: usize, j: usize| ((i - 1) * n + (j - 1)) as Gen;
        let dim = n * n;
        let mut brackets = vec![SmallVec::new(); dim * dim];
        let mut forms = vec![Scalar::zero(); dim * dim];
        let mut names = Vec::with_capacity(dim);
        for p in 1..=n {
            for q in 1..=n {
                names.push(format!("E{p},{q}"));
                for i in 1..=n {
                    for j in 1..=n {
                        let slot = idx(p, q) as usize * dim + idx(i, j) as usize;
                        let mut t: SmallVec<[(Gen, i32); 2]> = SmallVec::new();
                        if q == i {
                            t.push((idx(p, j), 1));
                        }
                        if p == j {
                            if let Some(e) = t.iter_mut().find(|e| e.0 == idx(i, q)) {
                                e.1 -= 1;
                            } else {
                                t.push((idx(i, q), -1));
                            }
                        }
                        t.retain(|e| e.1 != 0);
                        brackets[slot] = t;
                        let mut f = Scalar::zero();
                        if i == q && p == j {
                            f += c;
                        }
                        if p == q && i == j {
                            f += &Scalar::one();
                        }
                        forms[slot] = f;
                    }
                }
            }
        }
        LieTable {
            names,
            odd: vec![false; dim],
            shift: vec![0; dim],
            in_sub: vec![true; dim],
            brackets,
            forms,
            vectors: vec![None; dim],
            lookup: HashMap::new(),
        }
    }

    /// The same table with every form value specialized at k = `k0`.
    pub fn specialize(&self, k0: &Rational) -> Result<LieTable, ScalarError> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.substitute(k0))
            .collect::<Result<_, _>>()?;
        Ok(LieTable {
            forms,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g as usize]
    }

    pub fn is_odd(&self, g: Gen) -> bool {
        self.odd[g as usize]
    }

    pub fn shift(&self, g: Gen) -> u8 {
        self.shift[g as usize]
    }

    pub fn in_sub(&self, g: Gen) -> bool {
        self.in_sub[g as usize]
    }

    pub fn bracket(&self, a: Gen, b: Gen) -> &[(Gen, i32)] {
        &self.brackets[a as usize * self.dim() + b as usize]
    }

    pub fn form(&self, a: Gen, b: Gen) -> &Scalar {
        &self.forms[a as usize * self.dim() + b as usize]
    }

    pub fn gen_of(&self, v: &BasisVector) -> Option<Gen> {
        self.lookup.get(v).copied()
    }

    pub fn vector(&self, g: Gen) -> Option<BasisVector> {
        self.vectors[g as usize]
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> {
        0..self.dim() as Gen
    }
}
