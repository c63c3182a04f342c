use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::rational::Rational;
use super::ScalarError;

/// Dense univariate polynomial over ℚ, coefficients stored from the constant
/// term upward. Trailing zeros are never stored; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: SmallVec<[Rational; 3]>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            coeffs: SmallVec::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly {
            coeffs: SmallVec::new(),
        };
        if !c.is_zero() {
            p.coeffs.push(c);
        }
        p
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![Rational::ZERO, Rational::ONE])
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly {
            coeffs: SmallVec::from_vec(coeffs),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or(Rational::ZERO)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or(Rational::ZERO)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ScalarError> {
        let dd = divisor.degree().ok_or(ScalarError::DivisionByZero)?;
        let lc_inv = divisor.leading().inv()?;
        let mut rem = self.clone();
        let Some(rd) = rem.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if rd < dd {
            return Ok((Poly::zero(), rem));
        }
        let mut quot = vec![Rational::ZERO; rd - dd + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.leading() * &lc_inv;
            let shift = rd - dd;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let t = &rem.coeffs[i + shift] - &(dc * &c);
                rem.coeffs[i + shift] = t;
            }
            quot[shift] = c;
            rem.trim();
        }
        Ok((Poly::from_coeffs(quot), rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl Poly {
    /// self += rhs without reallocating when the degrees allow it.
    pub(crate) fn add_in_place(&mut self, rhs: &Poly) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::ZERO);
        }
        for (a, c) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = &*a + c;
        }
        self.trim();
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out.coeffs[i] = &out.coeffs[i] + c;
        }
        out.trim();
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let mut out = vec![Rational::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Poly {
    /// Writes the polynomial in the variable `var`, highest degree first.
    pub fn fmt_in(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{var}")?;
                    if deg > 1 {
                        write!(f, "^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in("k", f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| Rational::from_int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (k+1)(k+2) / (k+1)
        let a = p(&[2, 3, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
        let g = Poly::gcd(&a, &p(&[3, 4, 1]));
        assert_eq!(g, p(&[1, 1]));
        assert!(a.div_rem(&Poly::zero()).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[12, 7, 1]).to_string(), "k^2+7*k+12");
        assert_eq!(p(&[0, -1]).to_string(), "-k");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
