//! Central rational functions `N(t) / (t^i (1-t)^j)`.
//!
//! On the 3-sphere `t = |Z|^2` and `1 - t = |W|^2` are central; the allowed
//! denominators are exactly the localization at those two elements.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{Conjugate, Field};
use crate::poly::{field_from_int, Poly};

/// `num(t) / (t^t_exp (1 - t)^w_exp)`, reduced: if `t_exp > 0` then
/// `num(0) != 0`, and if `w_exp > 0` then `num(1) != 0`. Zero has both
/// exponents zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralFn<S> {
    num: Poly<S>,
    t_exp: u32,
    w_exp: u32,
}

fn one_minus_t<S: Field>() -> Poly<S> {
    Poly::from_coeffs(vec![S::one(), -S::one()])
}

/// Divides by `(1 - t)`, returning `None` if not divisible.
fn div_one_minus_t<S: Field>(p: &Poly<S>) -> Option<Poly<S>> {
    p.exact_div(&one_minus_t())
}

impl<S: Field> CentralFn<S> {
    pub fn new(num: Poly<S>, t_exp: u32, w_exp: u32) -> Self {
        let mut f = CentralFn { num, t_exp, w_exp };
        f.reduce();
        f
    }

    pub fn from_poly(num: Poly<S>) -> Self {
        CentralFn {
            num,
            t_exp: 0,
            w_exp: 0,
        }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The element `t`.
    pub fn t() -> Self {
        Self::from_poly(Poly::x())
    }

    /// The element `1 - t`.
    pub fn one_minus_t() -> Self {
        Self::from_poly(one_minus_t())
    }

    /// `t^a (1-t)^b` for integer exponents of either sign.
    pub fn t_w_power(a: i64, b: i64) -> Self {
        let mut num = Poly::one();
        for _ in 0..a.max(0) {
            num = &num * &Poly::x();
        }
        for _ in 0..b.max(0) {
            num = &num * &one_minus_t();
        }
        Self::new(num, (-a).max(0) as u32, (-b).max(0) as u32)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.t_exp = 0;
            self.w_exp = 0;
            return;
        }
        while self.t_exp > 0 && self.num.coeff(0).is_zero() {
            self.num = self.num.shift_down(1);
            self.t_exp -= 1;
        }
        while self.w_exp > 0 {
            match div_one_minus_t(&self.num) {
                Some(q) => {
                    self.num = q;
                    self.w_exp -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numer(&self) -> &Poly<S> {
        &self.num
    }

    pub fn t_exp(&self) -> u32 {
        self.t_exp
    }

    pub fn w_exp(&self) -> u32 {
        self.w_exp
    }

    pub fn is_polynomial(&self) -> bool {
        self.t_exp == 0 && self.w_exp == 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<S> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CentralFn {
            num: self.num.scale(c),
            t_exp: self.t_exp,
            w_exp: self.w_exp,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        Self::new(self.num.map(f), self.t_exp, self.w_exp)
    }

    /// Splits `self = c t^a (1-t)^b` with `c` a nonzero constant, if possible.
    pub fn monomial_factorization(&self) -> Option<(S, i64, i64)> {
        if self.num.is_zero() {
            return None;
        }
        let a = self.num.lowest_degree();
        let mut rest = self.num.shift_down(a);
        let mut b = 0i64;
        while !rest.is_constant() {
            rest = div_one_minus_t(&rest)?;
            b += 1;
        }
        Some((
            rest.coeff(0),
            a as i64 - self.t_exp as i64,
            b - self.w_exp as i64,
        ))
    }

    /// Multiplicative inverse when `self` is a constant times powers of `t`
    /// and `1 - t`.
    pub fn inverse(&self) -> Option<Self> {
        let (c, a, b) = self.monomial_factorization()?;
        Some(Self::t_w_power(-a, -b).scale(&(S::one() / c)))
    }

    /// Formal derivative in `t`.
    pub fn d_dt(&self) -> Self {
        // (N / (t^i (1-t)^j))' = (N' t (1-t) - i N (1-t) + j N t) / (t^{i+1} (1-t)^{j+1})
        let t = Poly::x();
        let w = one_minus_t();
        let i = field_from_int::<S>(self.t_exp as i64);
        let j = field_from_int::<S>(self.w_exp as i64);
        let top = &(&(&self.num.derivative() * &(&t * &w)) - &(&self.num * &w).scale(&i))
            + &(&self.num * &t).scale(&j);
        Self::new(top, self.t_exp + 1, self.w_exp + 1)
    }

    /// Evaluates at `t = value`; `None` if a denominator vanishes.
    pub fn eval(&self, value: &S) -> Option<S> {
        let w = S::one() - value.clone();
        let mut den = S::one();
        for _ in 0..self.t_exp {
            den = den * value.clone();
        }
        for _ in 0..self.w_exp {
            den = den * w.clone();
        }
        if den.is_zero() {
            return None;
        }
        Some(self.num.eval(value) / den)
    }

    fn lift(&self, t_exp: u32, w_exp: u32) -> Poly<S> {
        let mut n = self.num.shift_up((t_exp - self.t_exp) as usize);
        for _ in self.w_exp..w_exp {
            n = &n * &one_minus_t();
        }
        n
    }
}

impl<S: Field + Conjugate> CentralFn<S> {
    /// Conjugates the coefficients; `t` is self-adjoint.
    pub fn conjugate(&self) -> Self {
        CentralFn {
            num: self.num.conjugate_coeffs(),
            t_exp: self.t_exp,
            w_exp: self.w_exp,
        }
    }
}

impl<S: Field> Zero for CentralFn<S> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<S: Field> One for CentralFn<S> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<S: Field> Add for &CentralFn<S> {
    type Output = CentralFn<S>;
    fn add(self, rhs: &CentralFn<S>) -> CentralFn<S> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let te = self.t_exp.max(rhs.t_exp);
        let we = self.w_exp.max(rhs.w_exp);
        CentralFn::new(&self.lift(te, we) + &rhs.lift(te, we), te, we)
    }
}

impl<S: Field> Neg for &CentralFn<S> {
    type Output = CentralFn<S>;
    fn neg(self) -> CentralFn<S> {
        CentralFn {
            num: -&self.num,
            t_exp: self.t_exp,
            w_exp: self.w_exp,
        }
    }
}

impl<S: Field> Sub for &CentralFn<S> {
    type Output = CentralFn<S>;
    fn sub(self, rhs: &CentralFn<S>) -> CentralFn<S> {
        self + &(-rhs)
    }
}

impl<S: Field> Mul for &CentralFn<S> {
    type Output = CentralFn<S>;
    fn mul(self, rhs: &CentralFn<S>) -> CentralFn<S> {
        if self.is_zero() || rhs.is_zero() {
            return CentralFn::zero();
        }
        if self.is_constant() {
            return rhs.scale(&self.num.coeff(0));
        }
        if rhs.is_constant() {
            return self.scale(&rhs.num.coeff(0));
        }
        CentralFn::new(
            &self.num * &rhs.num,
            self.t_exp + rhs.t_exp,
            self.w_exp + rhs.w_exp,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Field> $tr for CentralFn<S> {
            type Output = CentralFn<S>;
            fn $m(self, rhs: CentralFn<S>) -> CentralFn<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Field> Neg for CentralFn<S> {
    type Output = CentralFn<S>;
    fn neg(self) -> CentralFn<S> {
        -&self
    }
}
