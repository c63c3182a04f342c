//! Finite-dimensional data: gl(m+n), the subalgebra 𝔟 of block lower
//! triangular matrices, the superalgebra 𝔞 = 𝔟 ⊕ span{ψ}, the invariant forms,
//! the hook nilpotent f and its centralizer.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalars::{LevelConstants, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("n ≥ 3 is required (got n = {0})")]
    SmallN(usize),
    #[error("m > n is required (got m = {m}, n = {n})")]
    NotHook { m: usize, n: usize },
    #[error("index {i} out of range 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error("{0} is not a basis vector of the superalgebra")]
    NotInAlgebra(String),
}

/// The pair (m, n) of a nilpotent with Jordan type (2ⁿ, 1^{m−n}) in gl(m+n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Config {
    pub m: usize,
    pub n: usize,
}

/// Column, row and the partial hat/tilde maps of an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexInfo {
    pub col: u8,
    pub row: usize,
    pub hat: Option<usize>,
    pub tilde: Option<usize>,
}

impl Config {
    pub fn new(m: usize, n: usize) -> Result<Self, ConfigError> {
        if n < 3 {
            return Err(ConfigError::SmallN(n));
        }
        if m <= n {
            return Err(ConfigError::NotHook { m, n });
        }
        Ok(Config { m, n })
    }

    /// Size of the matrices, m + n.
    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// m − n, the number of rows that only appear in column 1.
    pub fn short(&self) -> usize {
        self.m - self.n
    }

    pub fn constants(&self) -> LevelConstants {
        LevelConstants::new(self.m, self.n)
    }

    pub fn index_maps(&self, i: usize) -> Result<IndexInfo, ConfigError> {
        if i == 0 || i > self.size() {
            return Err(ConfigError::IndexOutOfRange {
                i,
                max: self.size(),
            });
        }
        Ok(IndexInfo {
            col: self.col(i),
            row: self.row(i),
            hat: self.hat(i),
            tilde: self.tilde(i),
        })
    }

    pub fn col(&self, i: usize) -> u8 {
        if i <= self.m {
            1
        } else {
            2
        }
    }

    pub fn row(&self, i: usize) -> usize {
        if i <= self.m {
            i
        } else {
            i - self.n
        }
    }

    /// The index with the same row one column to the right.
    pub fn hat(&self, i: usize) -> Option<usize> {
        (i <= self.m && i > self.short()).then_some(i + self.n)
    }

    /// The index with the same row one column to the left.
    pub fn tilde(&self, i: usize) -> Option<usize> {
        (i > self.m && i <= self.size()).then(|| i - self.n)
    }

    /// The index in column `col` with row `row`, if that cell exists.
    pub fn cell(&self, col: u8, row: usize) -> Option<usize> {
        match col {
            1 if (1..=self.m).contains(&row) => Some(row),
            2 if row > self.short() && row <= self.m => Some(row + self.n),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    E,
    Psi,
}

/// A basis vector e_{i,j} (even) or ψ_{i,j} (odd) of 𝔞, indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisVector {
    pub kind: Kind,
    pub i: usize,
    pub j: usize,
}

impl BasisVector {
    pub fn e(cfg: &Config, i: usize, j: usize) -> Result<Self, ConfigError> {
        let v = BasisVector {
            kind: Kind::E,
            i,
            j,
        };
        v.validate(cfg).map(|_| v)
    }

    pub fn psi(cfg: &Config, i: usize, j: usize) -> Result<Self, ConfigError> {
        let v = BasisVector {
            kind: Kind::Psi,
            i,
            j,
        };
        v.validate(cfg).map(|_| v)
    }

    pub fn is_odd(&self) -> bool {
        self.kind == Kind::Psi
    }

    pub fn is_valid(&self, cfg: &Config) -> bool {
        self.validate(cfg).is_ok()
    }

    fn validate(&self, cfg: &Config) -> Result<(), ConfigError> {
        cfg.index_maps(self.i)?;
        cfg.index_maps(self.j)?;
        let ok = match self.kind {
            Kind::E => cfg.col(self.i) >= cfg.col(self.j),
            Kind::Psi => cfg.col(self.i) > cfg.col(self.j),
        };
        if ok {
            Ok(())
        } else {
            Err(ConfigError::NotInAlgebra(self.to_string()))
        }
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::E => write!(f, "e{},{}", self.i, self.j),
            Kind::Psi => write!(f, "psi{},{}", self.i, self.j),
        }
    }
}

/// Finite linear combination of basis vectors plus a central summand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    pub terms: BTreeMap<BasisVector, Scalar>,
    pub central: Scalar,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn single(v: BasisVector) -> Self {
        let mut l = LinComb::zero();
        l.add(v, &Scalar::one());
        l
    }

    pub fn add(&mut self, v: BasisVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(v).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn coeff(&self, v: &BasisVector) -> Scalar {
        self.terms.get(v).cloned().unwrap_or_default()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "({c}){v}")?;
            }
        }
        if !self.central.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.central)?;
        }
        Ok(())
    }
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Super bracket on 𝔞 as integer structure constants: `[x, y] = Σ c · v`.
///
/// Terms that would leave 𝔞 never occur: for e, e ∈ 𝔟 the result stays in 𝔟 and
/// ψ_{i,q}, ψ_{p,j} arising from [e, ψ] keep a column drop.
pub fn bracket_terms(x: &BasisVector, y: &BasisVector) -> Vec<(BasisVector, i64)> {
    let mut out: Vec<(BasisVector, i64)> = Vec::with_capacity(2);
    let mut push = |v: BasisVector, c: i64| {
        if c == 0 {
            return;
        }
        if let Some(t) = out.iter_mut().find(|t| t.0 == v) {
            t.1 += c;
        } else {
            out.push((v, c));
        }
    };
    let (i, j, p, q) = (x.i, x.j, y.i, y.j);
    match (x.kind, y.kind) {
        (Kind::E, Kind::E) => {
            push(
                BasisVector {
                    kind: Kind::E,
                    i,
                    j: q,
                },
                delta(j, p),
            );
            push(
                BasisVector {
                    kind: Kind::E,
                    i: p,
                    j,
                },
                -delta(q, i),
            );
        }
        (Kind::E, Kind::Psi) => {
            push(
                BasisVector {
                    kind: Kind::Psi,
                    i,
                    j: q,
                },
                delta(j, p),
            );
            push(
                BasisVector {
                    kind: Kind::Psi,
                    i: p,
                    j,
                },
                -delta(i, q),
            );
        }
        (Kind::Psi, Kind::E) => {
            // [ψ, e] = −[e, ψ] for one odd argument
            push(
                BasisVector {
                    kind: Kind::Psi,
                    i: p,
                    j,
                },
                -delta(q, i),
            );
            push(
                BasisVector {
                    kind: Kind::Psi,
                    i,
                    j: q,
                },
                delta(p, j),
            );
        }
        (Kind::Psi, Kind::Psi) => {}
    }
    out.retain(|t| t.1 != 0);
    out
}

pub fn super_bracket(x: &BasisVector, y: &BasisVector) -> LinComb {
    let mut l = LinComb::zero();
    for (v, c) in bracket_terms(x, y) {
        l.add(v, &Scalar::from_int(c));
    }
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// (e_{i,j} | e_{p,q}) = k δ_{i,q} δ_{p,j} + δ_{i,j} δ_{p,q} on gl(m+n)
    InnerG,
    Kappa,
    KappaTilde,
}

pub fn form(cfg: &Config, which: Form, x: &BasisVector, y: &BasisVector) -> Scalar {
    form_with(cfg, &cfg.constants(), which, x, y)
}

/// [`form`] with the level constants supplied by the caller (e.g. at a fixed k).
pub fn form_with(
    cfg: &Config,
    c: &LevelConstants,
    which: Form,
    x: &BasisVector,
    y: &BasisVector,
) -> Scalar {
    if x.is_odd() || y.is_odd() {
        return Scalar::zero();
    }
    let (i, j, p, q) = (x.i, x.j, y.i, y.j);
    let lead = match which {
        Form::InnerG => &c.k,
        Form::Kappa | Form::KappaTilde => {
            let all_low = [i, j, p, q].iter().all(|&t| t <= cfg.m);
            let all_high = [i, j, p, q].iter().all(|&t| t > cfg.m);
            if all_low {
                &c.alpha1
            } else if all_high {
                &c.alpha2
            } else {
                return Scalar::zero();
            }
        }
    };
    let mut out = Scalar::zero();
    if i == q && p == j {
        out += lead;
    }
    if i == j && p == q {
        out += &Scalar::one();
    }
    out
}

/// f = Σ_{m+1 ≤ j ≤ m+n} e_{j, j−n}.
pub fn nilpotent_f(cfg: &Config) -> LinComb {
    let mut f = LinComb::zero();
    for j in cfg.m + 1..=cfg.size() {
        f.add(
            BasisVector {
                kind: Kind::E,
                i: j,
                j: j - cfg.n,
            },
            &Scalar::one(),
        );
    }
    f
}

/// A basis of the centralizer of f in gl(m+n).
///
/// The sums Σ e_{h,l} over row(h)=p, row(l)=q, col(h)=col(l) (the same shape
/// as the weight-one generators) together with e_{î,j} for i > m−n, j ≤ m.
pub fn centralizer_basis(cfg: &Config) -> Vec<LinComb> {
    let mut out = Vec::new();
    for (p, q) in weight_one_indices(cfg) {
        let mut x = LinComb::zero();
        for col in [1u8, 2] {
            if let (Some(h), Some(l)) = (cfg.cell(col, p), cfg.cell(col, q)) {
                x.add(
                    BasisVector {
                        kind: Kind::E,
                        i: h,
                        j: l,
                    },
                    &Scalar::one(),
                );
            }
        }
        out.push(x);
    }
    for (i, j) in weight_two_indices(cfg) {
        let hat = cfg.hat(i).expect("rows above m-n have a hat");
        out.push(LinComb::single(BasisVector {
            kind: Kind::E,
            i: hat,
            j,
        }));
    }
    out
}

/// Index pairs (i, j) of the weight-one generators: i ≤ m−n, j ≤ m, or i, j > m−n.
pub fn weight_one_indices(cfg: &Config) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=cfg.m {
        for j in 1..=cfg.m {
            if i <= cfg.short() || j > cfg.short() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Index pairs (i, j) of the weight-two generators: i > m−n, j ≤ m.
pub fn weight_two_indices(cfg: &Config) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in cfg.short() + 1..=cfg.m {
        for j in 1..=cfg.m {
            out.push((i, j));
        }
    }
    out
}

/// All basis vectors of 𝔞: first the e's of 𝔟, then the ψ's, each in (i, j) order.
pub fn algebra_basis(cfg: &Config) -> Vec<BasisVector> {
    let mut out = Vec::new();
    for kind in [Kind::E, Kind::Psi] {
        for i in 1..=cfg.size() {
            for j in 1..=cfg.size() {
                let v = BasisVector { kind, i, j };
                if v.is_valid(cfg) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Dense square matrix over ℚ, used for statements about f as a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub size: usize,
    pub entries: Vec<Rational>,
}

impl Matrix {
    pub fn zero(size: usize) -> Self {
        Matrix {
            size,
            entries: vec![Rational::ZERO; size * size],
        }
    }

    /// Matrix of a combination of e's with rational coefficients (1-based indices).
    pub fn from_lincomb(size: usize, x: &LinComb) -> Option<Self> {
        let mut m = Matrix::zero(size);
        for (v, c) in &x.terms {
            if v.is_odd() {
                return None;
            }
            m.entries[(v.i - 1) * size + (v.j - 1)] = c.as_rational()?;
        }
        Some(m)
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.size + c]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.size;
        let mut out = Matrix::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * n + c] = &out.entries[r * n + c] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank(
            self.entries
                .chunks(self.size)
                .map(<[Rational]>::to_vec)
                .collect(),
        )
    }
}

/// Rank of a list of rows by Gaussian elimination over ℚ.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        let pivot_row: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Dimension of ker ad(f) on gl(m+n), by linear algebra
/// on the full matrix of ad(f). Independent of [`centralizer_basis`].
pub fn centralizer_dim_by_kernel(c: &Config) -> usize {
    let n = c.size();
    let f = Matrix::from_lincomb(n, &nilpotent_f(c)).expect("f lies in gl(m+n)");
    // column (a,b) of ad(f) is [f, E_ab] flattened
    let mut rows = vec![vec![Rational::ZERO; n * n]; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut eab = Matrix::zero(n);
            eab.entries[a * n + b] = Rational::ONE;
            let fe = f.mul(&eab);
            let ef = eab.mul(&f);
            for (idx, row) in rows.iter_mut().enumerate() {
                row[a * n + b] = &fe.entries[idx] - &ef.entries[idx];
            }
        }
    }
    n * n - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg43() -> Config {
        Config::new(4, 3).unwrap()
    }

    fn e(i: usize, j: usize) -> BasisVector {
        BasisVector {
            kind: Kind::E,
            i,
            j,
        }
    }

    fn psi(i: usize, j: usize) -> BasisVector {
        BasisVector {
            kind: Kind::Psi,
            i,
            j,
        }
    }

    #[test]
    fn config_constraints() {
        assert!(Config::new(3, 3).is_err());
        assert!(Config::new(5, 2).is_err());
        assert!(Config::new(4, 3).is_ok());
        assert!(Config::new(3, 3).unwrap_err().to_string().contains("m > n"));
    }

    #[test]
    fn index_map_examples() {
        let c = cfg43();
        assert_eq!(
            c.index_maps(5).unwrap(),
            IndexInfo {
                col: 2,
                row: 2,
                hat: None,
                tilde: Some(2)
            }
        );
        assert_eq!(
            c.index_maps(2).unwrap(),
            IndexInfo {
                col: 1,
                row: 2,
                hat: Some(5),
                tilde: None
            }
        );
        assert_eq!(
            c.index_maps(1).unwrap(),
            IndexInfo {
                col: 1,
                row: 1,
                hat: None,
                tilde: None
            }
        );
        assert!(c.index_maps(8).is_err());
        assert!(c.index_maps(0).is_err());
    }

    #[test]
    fn hat_tilde_inverse() {
        for (m, n) in [(4, 3), (5, 3), (6, 4)] {
            let c = Config::new(m, n).unwrap();
            for i in 1..=c.size() {
                if let Some(h) = c.hat(i) {
                    assert_eq!(c.tilde(h), Some(i));
                    assert_eq!(c.col(h), c.col(i) + 1);
                    assert_eq!(c.row(h), c.row(i));
                }
                if let Some(t) = c.tilde(i) {
                    assert_eq!(c.hat(t), Some(i));
                }
            }
        }
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(super_bracket(&e(1, 2), &e(2, 3)), LinComb::single(e(1, 3)));
        let mut expect = LinComb::zero();
        expect.add(psi(5, 2), &Scalar::from_int(-1));
        assert_eq!(super_bracket(&e(1, 2), &psi(5, 1)), expect);
        assert!(super_bracket(&psi(5, 1), &psi(6, 2)).is_zero());
    }

    #[test]
    fn form_examples() {
        let c = cfg43();
        let k = c.constants();
        assert_eq!(form(&c, Form::Kappa, &e(1, 2), &e(2, 1)), k.alpha1);
        assert!(form(&c, Form::Kappa, &e(5, 1), &e(1, 5)).is_zero());
        assert!(form(&c, Form::Kappa, &e(1, 1), &e(2, 2)).is_one());
        assert!(form(&c, Form::KappaTilde, &e(1, 1), &psi(5, 2)).is_zero());
        assert_eq!(form(&c, Form::Kappa, &e(6, 5), &e(5, 6)), k.alpha2);
        assert_eq!(
            form(&c, Form::InnerG, &e(1, 1), &e(1, 1)),
            &k.k + &Scalar::one()
        );
    }

    fn sign(a: &BasisVector, b: &BasisVector) -> i64 {
        if a.is_odd() && b.is_odd() {
            -1
        } else {
            1
        }
    }

    fn bracket_lin(x: &LinComb, y: &BasisVector) -> LinComb {
        let mut out = LinComb::zero();
        for (v, c) in &x.terms {
            for (w, d) in bracket_terms(v, y) {
                out.add(w, &c.scale(&Rational::from_int(d)));
            }
        }
        out
    }

    fn bracket_left(x: &BasisVector, y: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (v, c) in &y.terms {
            for (w, d) in bracket_terms(x, v) {
                out.add(w, &c.scale(&Rational::from_int(d)));
            }
        }
        out
    }

    #[test]
    fn super_jacobi_all_triples() {
        let c = cfg43();
        let basis = algebra_basis(&c);
        for x in &basis {
            for y in &basis {
                let xy = super_bracket(x, y);
                for w in xy.terms.keys() {
                    assert!(w.is_valid(&c), "[{x},{y}] leaves the algebra via {w}");
                }
                for z in &basis {
                    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
                    let lhs = bracket_left(x, &super_bracket(y, z));
                    let mut rhs = bracket_lin(&xy, z);
                    let t = bracket_left(y, &super_bracket(x, z));
                    for (w, v) in t.terms {
                        rhs.add(w, &v.scale(&Rational::from_int(sign(x, y))));
                    }
                    assert_eq!(lhs, rhs, "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn kappa_invariance_on_b() {
        let c = cfg43();
        let basis: Vec<_> = algebra_basis(&c)
            .into_iter()
            .filter(|v| !v.is_odd())
            .collect();
        let pair = |l: &LinComb, z: &BasisVector, left: bool| {
            let mut out = Scalar::zero();
            for (v, coef) in &l.terms {
                let f = if left {
                    form(&c, Form::Kappa, v, z)
                } else {
                    form(&c, Form::Kappa, z, v)
                };
                out += &(coef * &f);
            }
            out
        };
        for x in &basis {
            for y in &basis {
                assert_eq!(form(&c, Form::Kappa, x, y), form(&c, Form::Kappa, y, x));
                let xy = super_bracket(x, y);
                for z in &basis {
                    let lhs = pair(&xy, z, true);
                    let rhs = pair(&super_bracket(y, z), x, false);
                    assert_eq!(lhs, rhs, "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn nilpotent_jordan_type() {
        for (m, n) in [(4, 3), (5, 3), (7, 4)] {
            let c = Config::new(m, n).unwrap();
            let f = Matrix::from_lincomb(c.size(), &nilpotent_f(&c)).unwrap();
            let f2 = f.mul(&f);
            assert!(f2.is_zero());
            assert!(!f.is_zero());
            assert!(f2.mul(&f).is_zero());
            assert_eq!(f.rank(), n);
        }
        let expect: Vec<_> = [(5, 2), (6, 3), (7, 4)]
            .iter()
            .map(|&(i, j)| e(i, j))
            .collect();
        let got: Vec<_> = nilpotent_f(&cfg43()).terms.keys().copied().collect();
        assert_eq!(got, expect);
    }

    fn jordan_census(c: &Config) -> usize {
        let parts: Vec<usize> = std::iter::repeat_n(2, c.n)
            .chain(std::iter::repeat_n(1, c.short()))
            .collect();
        parts
            .iter()
            .flat_map(|a| parts.iter().map(move |b| *a.min(b)))
            .sum()
    }

    #[test]
    fn centralizer_matches_kernel_oracle() {
        for (m, n, expect) in [(4, 3, 25), (5, 3, 34)] {
            let c = Config::new(m, n).unwrap();
            let basis = centralizer_basis(&c);
            assert_eq!(basis.len(), expect);
            assert_eq!(centralizer_dim_by_kernel(&c), expect);
            assert_eq!(jordan_census(&c), expect);
            let f = Matrix::from_lincomb(c.size(), &nilpotent_f(&c)).unwrap();
            let mut rows = Vec::new();
            for x in &basis {
                let xm = Matrix::from_lincomb(c.size(), x).unwrap();
                assert!(f.mul(&xm) == xm.mul(&f), "{x} does not commute with f");
                rows.push(xm.entries);
            }
            assert_eq!(rank(rows), expect, "basis is linearly independent");
        }
    }
}
