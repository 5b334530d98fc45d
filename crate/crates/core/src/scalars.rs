//! Exact coefficients: Gaussian-rational rational functions in `q^{1/2}`.
//!
//! A [`Scalar`] is an element of `Q(i)(x)` with `x = q^{1/2}`. The formal
//! deformation parameter is unitary, so conjugation sends `x` to `1/x` and
//! `i` to `-i`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed as _, Zero};

use crate::error::{Error, Result};
use crate::field::Conjugate;
use crate::ratfunc::RatFunc;

/// `a + b i` with `a, b` exact rationals.
pub type GaussianRational = Complex<BigRational>;

/// Exact coefficient scalar.
pub type Scalar = RatFunc<GaussianRational>;

/// Values at which the deformation parameter can be specialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    /// The commutative limit `q = 1`.
    One,
    /// `q = exp(2 pi i num / den)`; not supported.
    RootOfUnity { num: i64, den: u64 },
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gaussian(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn scalar_from_gaussian(c: GaussianRational) -> Scalar {
    Scalar::constant(c)
}

pub fn scalar_int(n: i64) -> Scalar {
    Scalar::constant(gaussian(BigRational::from_integer(n.into()), BigRational::zero()))
}

pub fn scalar_rational(r: BigRational) -> Scalar {
    Scalar::constant(gaussian(r, BigRational::zero()))
}

pub fn scalar_ratio(num: i64, den: i64) -> Scalar {
    scalar_rational(rational(num, den))
}

/// `re + im i` with rational parts given as `(num, den)` pairs.
pub fn scalar_gaussian(re: (i64, i64), im: (i64, i64)) -> Scalar {
    Scalar::constant(gaussian(rational(re.0, re.1), rational(im.0, im.1)))
}

pub fn imaginary_unit() -> Scalar {
    Scalar::constant(gaussian(BigRational::zero(), BigRational::one()))
}

/// `q^{k/2}`.
pub fn q_half_pow(k: i64) -> Scalar {
    Scalar::x_pow(k)
}

/// `q^k`.
pub fn q_pow(k: i64) -> Scalar {
    Scalar::x_pow(2 * k)
}

/// `z * conj(z)`.
pub fn abs_sq(z: &Scalar) -> Scalar {
    z * &z.conjugate()
}

/// Checked division.
pub fn checked_div(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    let inv = b.inv().ok_or(Error::DivisionByZero)?;
    Ok(a * &inv)
}

/// Replaces every power of `q^{1/2}` by the value of `q` (only `q = 1`).
pub fn specialize_q(a: &Scalar, value: &QValue) -> Result<Scalar> {
    match value {
        QValue::One => {
            let one = GaussianRational::one();
            a.eval(&one)
                .map(Scalar::constant)
                .ok_or_else(|| Error::SpecializationPole(a.to_string()))
        }
        QValue::RootOfUnity { num, den } => Err(Error::UnsupportedSpecialization(format!(
            "q = exp(2 pi i {num}/{den})"
        ))),
    }
}

/// A rendered fragment with its sign pulled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signed {
    pub negative: bool,
    pub body: String,
    /// `body` has no top-level sum, so it can be the left factor of a product.
    pub atomic: bool,
}

impl Signed {
    pub fn into_string(self) -> String {
        if self.negative {
            format!("-{}", self.body)
        } else {
            self.body
        }
    }

    /// `body` parenthesized if it is not atomic.
    pub fn factor(&self) -> String {
        if self.atomic {
            self.body.clone()
        } else {
            format!("({})", self.body)
        }
    }
}

/// Joins signed terms into `a + b - c`.
pub fn join_terms(terms: Vec<Signed>) -> Signed {
    match terms.len() {
        0 => Signed {
            negative: false,
            body: "0".into(),
            atomic: true,
        },
        1 => terms.into_iter().next().unwrap(),
        _ => {
            let mut out = String::new();
            for (k, t) in terms.into_iter().enumerate() {
                if k == 0 {
                    if t.negative {
                        out.push('-');
                    }
                } else {
                    out.push_str(if t.negative { " - " } else { " + " });
                }
                out.push_str(&t.body);
            }
            Signed {
                negative: false,
                body: out,
                atomic: false,
            }
        }
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Gaussian rational with the sign of its leading nonzero part pulled out.
pub fn render_gaussian(c: &GaussianRational) -> Signed {
    let (re, im) = (&c.re, &c.im);
    if im.is_zero() {
        return Signed {
            negative: re.is_negative(),
            body: render_rational(&re.abs()),
            atomic: true,
        };
    }
    if re.is_zero() {
        let m = im.abs();
        let body = if m.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", render_rational(&m))
        };
        return Signed {
            negative: im.is_negative(),
            atomic: true,
            body,
        };
    }
    let negative = re.is_negative();
    let (re, im) = if negative {
        (-re.clone(), -im.clone())
    } else {
        (re.clone(), im.clone())
    };
    let imag = if im.abs().is_one() {
        "i".to_string()
    } else {
        format!("{}*i", render_rational(&im.abs()))
    };
    let op = if im.is_negative() { "-" } else { "+" };
    Signed {
        negative,
        body: format!("({} {} {})", render_rational(&re), op, imag),
        atomic: true,
    }
}

fn render_q_power(k: i64) -> String {
    if k % 2 == 0 {
        match k / 2 {
            1 => "q".into(),
            e if e > 0 => format!("q^{e}"),
            e => format!("q^({e})"),
        }
    } else {
        format!("q^({k}/2)")
    }
}

fn render_laurent_terms(terms: &[(i64, GaussianRational)]) -> Signed {
    let parts = terms
        .iter()
        .map(|(k, c)| {
            let coeff = render_gaussian(c);
            if *k == 0 {
                return coeff;
            }
            let qp = render_q_power(*k);
            let body = if coeff.body == "1" {
                qp
            } else {
                format!("{}*{}", coeff.body, qp)
            };
            Signed {
                negative: coeff.negative,
                body,
                atomic: true,
            }
        })
        .collect();
    join_terms(parts)
}

/// Signed rendering of a scalar in the textual grammar.
pub fn render_scalar(s: &Scalar) -> Signed {
    if let Some(terms) = s.laurent_terms() {
        return render_laurent_terms(&terms);
    }
    let to_terms = |p: &crate::poly::Poly<GaussianRational>| -> Vec<(i64, GaussianRational)> {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c.clone()))
            .collect()
    };
    let num = render_laurent_terms(&to_terms(s.numer())).into_string();
    let den = render_laurent_terms(&to_terms(s.denom())).into_string();
    Signed {
        negative: false,
        body: format!("({num})/({den})"),
        atomic: true,
    }
}

impl fmt::Display for RatFunc<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_scalar(self).into_string())
    }
}
