//! Reduced rational functions in one variable over a [`Field`].
//!
//! The engine uses the variable as the deformation unit `q^{1/2}`; Laurent
//! polynomials are the special case of a monomial denominator.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{Conjugate, Field};
use crate::poly::{field_from_int, Poly};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
/// Zero is uniquely `0 / 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Builds and reduces `num / den`; `None` if `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    pub fn from_poly(num: Poly<F>) -> Self {
        RatFunc {
            num,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(field_from_int(n))
    }

    /// `x^k` for any integer `k`.
    pub fn x_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(F::one(), k as usize))
        } else {
            RatFunc {
                num: Poly::one(),
                den: Poly::monomial(F::one(), k.unsigned_abs() as usize),
            }
        }
    }

    /// `c x^k`.
    pub fn term(c: F, k: i64) -> Self {
        Self::x_pow(k).scale(&c)
    }

    pub fn numer(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<F> {
        &self.den
    }

    fn reduce(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.term_count() == 1 {
            // monomial denominator: only common powers of x can cancel
            let k = den.degree().unwrap();
            let m = k.min(num.lowest_degree());
            let lead = den.leading().unwrap().clone();
            let mut num = num.shift_down(m);
            if !lead.is_one() {
                num = num.scale(&(F::one() / lead));
            }
            return RatFunc {
                num,
                den: Poly::monomial(F::one(), k - m),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = F::one() / lead;
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value if `self` is a constant.
    pub fn as_constant(&self) -> Option<F> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// True when the denominator is a power of the variable.
    pub fn is_laurent(&self) -> bool {
        self.den.term_count() == 1
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order,
    /// for Laurent elements only.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, F)>> {
        if !self.is_laurent() {
            return None;
        }
        let shift = self.den.degree().unwrap() as i64;
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 - shift, c.clone()))
                .collect(),
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// Evaluates at a point of the base field; `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// The Euler operator `x d/dx`.
    pub fn euler_derivative(&self) -> Self {
        let x = Poly::x();
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(&x * &top, &self.den * &self.den)
    }
}

impl<F: Field + Conjugate> Conjugate for RatFunc<F> {
    /// Conjugates coefficients and sends the variable `x` to `1/x`.
    fn conjugate(&self) -> Self {
        let n = self.num.conjugate_coeffs();
        let d = self.den.conjugate_coeffs();
        let dn = n.degree().unwrap_or(0);
        let dd = d.degree().unwrap_or(0);
        Self::reduce(n.reversed().shift_up(dd), d.reversed().shift_up(dn))
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<F: Field> Add for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_laurent() && rhs.is_laurent() {
            let a = self.den.degree().unwrap();
            let b = rhs.den.degree().unwrap();
            let k = a.max(b);
            let num = &self.num.shift_up(k - a) + &rhs.num.shift_up(k - b);
            return RatFunc::reduce(num, Poly::monomial(F::one(), k));
        }
        RatFunc::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<F: Field> Sub for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<F: Field> Div for &RatFunc<F> {
    type Output = RatFunc<F>;
    /// Panics on division by zero; use [`RatFunc::inv`] for a checked inverse.
    fn div(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, rhs: RatFunc<F>) -> RatFunc<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        -&self
    }
}
