use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use super::poly::Poly;
use super::rational::Rational;
use super::ScalarError;

/// Element of ℚ(k) in lowest terms with a monic denominator.
///
/// A denominator of 1 is not stored, so polynomial values (the common case)
/// never pay for a gcd.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    num: Poly,
    den: Option<Box<Poly>>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: None,
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: Poly::constant(Rational::from_int(n)),
            den: None,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar {
            num: Poly::constant(r),
            den: None,
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: None }
    }

    /// The level k.
    pub fn k() -> Self {
        Scalar::from_poly(Poly::var())
    }

    /// `k + c`.
    pub fn k_plus(c: i64) -> Self {
        &Scalar::k() + &Scalar::from_int(c)
    }

    /// Builds `num / den` and brings it to canonical form.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if den.is_constant() {
            let c = den.constant_term().inv().expect("nonzero denominator");
            return Scalar {
                num: num.scale(&c),
                den: None,
            };
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_rem(&g).expect("gcd divides").0,
                den.div_rem(&g).expect("gcd divides").0,
            )
        };
        let lc = den.leading();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_one() {
            Scalar { num, den: None }
        } else {
            Scalar {
                num,
                den: Some(Box::new(den)),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> Poly {
        self.den.as_deref().cloned().unwrap_or_else(Poly::one)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_none() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_none()
    }

    /// The value as a rational number when it does not depend on k.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.den.is_none() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(self.denom(), self.num.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at `k = k0`.
    pub fn specialize(&self, k0: &Rational) -> Result<Rational, ScalarError> {
        let n = self.num.eval(k0);
        match &self.den {
            None => Ok(n),
            Some(d) => {
                let dv = d.eval(k0);
                if dv.is_zero() {
                    return Err(ScalarError::Pole {
                        denominator: d.to_string(),
                        at: k0.clone(),
                    });
                }
                n.div(&dv)
            }
        }
    }

    /// Same as [`Scalar::specialize`] but stays inside ℚ(k) as a constant.
    pub fn substitute(&self, k0: &Rational) -> Result<Scalar, ScalarError> {
        self.specialize(k0).map(Scalar::from_rational)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (&self.den, &rhs.den) {
            (None, None) => Scalar {
                num: &self.num + &rhs.num,
                den: None,
            },
            (Some(a), Some(b)) if a == b => Scalar::normalize(&self.num + &rhs.num, (**a).clone()),
            _ => {
                let (da, db) = (self.denom(), rhs.denom());
                Scalar::normalize(&(&self.num * &db) + &(&rhs.num * &da), &da * &db)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        match (&self.den, &rhs.den) {
            (None, None) => Scalar {
                num: &self.num * &rhs.num,
                den: None,
            },
            _ => Scalar::normalize(&self.num * &rhs.num, &self.denom() * &rhs.denom()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.den.is_none() && rhs.den.is_none() {
            self.num.add_in_place(&rhs.num);
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self += &(-rhs);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.den {
            None => write!(f, "{}", self.num),
            Some(d) => {
                if self.num.degree().unwrap_or(0) > 0
                    && self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
                {
                    write!(f, "({})/({d})", self.num)
                } else {
                    write!(f, "{}/({d})", self.num)
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The level-dependent constants attached to a hook pair `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConstants {
    pub k: Scalar,
    /// `k + n`
    pub alpha1: Scalar,
    /// `k + m`
    pub alpha2: Scalar,
    /// `-1`
    pub hbar: Scalar,
    /// `k + m + n`
    pub epsilon: Scalar,
}

impl LevelConstants {
    pub fn new(m: usize, n: usize) -> Self {
        LevelConstants {
            k: Scalar::k(),
            alpha1: Scalar::k_plus(n as i64),
            alpha2: Scalar::k_plus(m as i64),
            hbar: Scalar::from_int(-1),
            epsilon: Scalar::k_plus((m + n) as i64),
        }
    }

    /// The same constants with k fixed to `k0`.
    pub fn at(&self, k0: &Rational) -> Result<Self, ScalarError> {
        Ok(LevelConstants {
            k: self.k.substitute(k0)?,
            alpha1: self.alpha1.substitute(k0)?,
            alpha2: self.alpha2.substitute(k0)?,
            hbar: self.hbar.substitute(k0)?,
            epsilon: self.epsilon.substitute(k0)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn operation_examples() {
        let c = LevelConstants::new(4, 3);
        assert_eq!(
            &c.alpha1 + &c.alpha2,
            &Scalar::k().scale(&r(2)) + &Scalar::from_int(7)
        );
        let kp1 = Scalar::k_plus(1);
        assert!((&kp1.inv().unwrap() * &kp1).is_one());
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(
            Scalar::zero().inv().unwrap_err().to_string(),
            "division by zero in ℚ(k)"
        );
    }

    #[test]
    fn specialization_examples() {
        let c = LevelConstants::new(4, 3);
        assert_eq!(c.alpha1.specialize(&r(2)).unwrap(), r(5));
        let pole = Scalar::k_plus(-1).inv().unwrap();
        let err = pole.specialize(&r(1)).unwrap_err();
        assert!(matches!(err, ScalarError::Pole { .. }));
        assert!(err.to_string().contains("k-1"));
        assert_eq!((&c.alpha1 * &c.alpha2).specialize(&r(0)).unwrap(), r(12));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::k_plus(3).to_string(), "k+3");
        assert_eq!(Scalar::k_plus(-1).inv().unwrap().to_string(), "1/(k-1)");
        let q = Scalar::k_plus(2).div(&Scalar::k_plus(5)).unwrap();
        assert_eq!(q.to_string(), "(k+2)/(k+5)");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-6i64..=6, 1i64..=3), 0..4).prop_map(|cs| {
            Poly::from_coeffs(
                cs.into_iter()
                    .map(|(a, b)| Rational::new(a, b).unwrap())
                    .collect(),
            )
        })
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (arb_poly(), arb_poly()).prop_map(|(n, d)| {
            if d.is_zero() {
                Scalar::from_poly(n)
            } else {
                Scalar::ratio(n, d).unwrap()
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_form_is_representation_independent(a in arb_scalar(), f in arb_poly()) {
            prop_assume!(!f.is_zero());
            // multiplying numerator and denominator by a common factor changes nothing
            let rebuilt = Scalar::ratio(a.numer() * &f, &a.denom() * &f).unwrap();
            prop_assert_eq!(&rebuilt, &a);
            let again = Scalar::ratio(rebuilt.numer().clone(), rebuilt.denom()).unwrap();
            prop_assert_eq!(again, rebuilt);
            prop_assert!(a.denom().leading().is_one());
        }

        #[test]
        fn specialization_is_a_homomorphism(a in arb_scalar(), b in arb_scalar(), k0 in -20i64..20) {
            let k0 = Rational::from_int(k0);
            if let (Ok(x), Ok(y)) = (a.specialize(&k0), b.specialize(&k0)) {
                prop_assert_eq!((&a * &b).specialize(&k0).unwrap(), &x * &y);
                prop_assert_eq!((&a + &b).specialize(&k0).unwrap(), &x + &y);
            }
        }
    }
}
