//! Canonical-form arithmetic for the noncommutative torus, the
//! noncommutative 3-sphere (plain and localized), and their extensions by a
//! formal conformal factor.
//!
//! Elements are finite sums `coefficient * word`. Coefficients are central
//! functions of `t = Z Z^*` (constants on the torus). A word alternates
//! between base monomials and formal symbols:
//!
//! * torus monomial `U^m V^n`, stored as `Base(m, n)`;
//! * sphere monomial `Z^a W^c`, stored as `Base(a, c)` where a negative
//!   exponent means a power of the adjoint (`Base(-2, 1) = (Z^*)^2 W`);
//! * formal symbols `K`, `K^{-1}`, `K_a`, `K_ab` modelling a hermitian
//!   invertible factor and its first and second derivatives.
//!
//! The formal symbols commute with central coefficients only. Reduction is
//! a single left-to-right stack pass: adjacent base monomials multiply
//! through the q-commutation table, `K K^{-1}` pairs cancel.

mod derivation;
mod element;
mod expr;
mod render;

use std::fmt;

pub use derivation::{check_derivation_well_defined, Derivation};
pub use element::AlgElement;
pub use derivation::relation_residuals;
pub(crate) use derivation::relation_images;
pub use expr::{normalize, parse_coeff, parse_element, parse_expr, parse_scalar, Expr};
pub use render::{
    render_coeff, render_coeff_latex, render_element, render_element_latex, render_element_latex_signed,
    render_element_signed, render_scalar_latex, render_word,
};

use num_traits::One;

use crate::central::CentralFn;
use crate::error::{Error, Result};
use crate::scalars::{q_pow, Scalar};

/// Central coefficient of an algebra element.
pub type Coeff = CentralFn<Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseAlgebra {
    /// `VU = qUV`, `U`, `V` unitary.
    Torus,
    /// The q-deformed 3-sphere on `Z, W`.
    Sphere3,
    /// The 3-sphere with `|Z|^2` and `|W|^2` inverted.
    Sphere3Loc,
}

/// Which algebra an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraSpec {
    base: BaseAlgebra,
    formal: bool,
}

impl AlgebraSpec {
    pub const fn torus() -> Self {
        AlgebraSpec {
            base: BaseAlgebra::Torus,
            formal: false,
        }
    }

    pub const fn sphere3() -> Self {
        AlgebraSpec {
            base: BaseAlgebra::Sphere3,
            formal: false,
        }
    }

    pub const fn sphere3_loc() -> Self {
        AlgebraSpec {
            base: BaseAlgebra::Sphere3Loc,
            formal: false,
        }
    }

    /// Adjoins the formal conformal factor. Allowed over the localized
    /// sphere and over the torus (which receives the transported symbols of
    /// an embedding).
    pub fn formal_factor_ext(base: BaseAlgebra) -> Result<Self> {
        match base {
            BaseAlgebra::Sphere3Loc | BaseAlgebra::Torus => Ok(AlgebraSpec { base, formal: true }),
            BaseAlgebra::Sphere3 => Err(Error::Invalid(
                "the formal factor needs a localized sphere (K^{-1} and |Z|^{-2} appear together)"
                    .into(),
            )),
        }
    }

    pub fn base(&self) -> BaseAlgebra {
        self.base
    }

    pub fn is_formal(&self) -> bool {
        self.formal
    }

    pub fn is_torus(&self) -> bool {
        self.base == BaseAlgebra::Torus
    }

    pub fn is_sphere(&self) -> bool {
        !self.is_torus()
    }

    pub fn is_localized(&self) -> bool {
        self.base == BaseAlgebra::Sphere3Loc
    }

    /// Same algebra without the formal symbols.
    pub fn without_formal(&self) -> Self {
        AlgebraSpec {
            base: self.base,
            formal: false,
        }
    }

    /// Whether `c` is an admissible coefficient here.
    pub fn admits_coeff(&self, c: &Coeff) -> bool {
        match self.base {
            BaseAlgebra::Torus => c.is_constant(),
            BaseAlgebra::Sphere3 => c.is_polynomial(),
            BaseAlgebra::Sphere3Loc => true,
        }
    }

    /// The two non-adjoint generators, `(U, V)` or `(Z, W)`.
    pub fn generators(&self) -> [Generator; 2] {
        if self.is_torus() {
            [Generator::U, Generator::V]
        } else {
            [Generator::Z, Generator::W]
        }
    }

    /// All four generators in table order `g1, g1*, g2, g2*`.
    pub fn all_generators(&self) -> [Generator; 4] {
        if self.is_torus() {
            [Generator::U, Generator::UStar, Generator::V, Generator::VStar]
        } else {
            [Generator::Z, Generator::ZStar, Generator::W, Generator::WStar]
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            BaseAlgebra::Torus => "T2_theta",
            BaseAlgebra::Sphere3 => "S3_theta",
            BaseAlgebra::Sphere3Loc => "S3_theta_loc",
        };
        if self.formal {
            write!(f, "FormalFactorExt({base})")
        } else {
            f.write_str(base)
        }
    }
}

/// Algebra generators, including adjoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    U,
    UStar,
    V,
    VStar,
    Z,
    ZStar,
    W,
    WStar,
}

impl Generator {
    pub fn is_torus(self) -> bool {
        matches!(self, Generator::U | Generator::UStar | Generator::V | Generator::VStar)
    }

    pub fn star(self) -> Self {
        use Generator::*;
        match self {
            U => UStar,
            UStar => U,
            V => VStar,
            VStar => V,
            Z => ZStar,
            ZStar => Z,
            W => WStar,
            WStar => W,
        }
    }

    /// Position in [`AlgebraSpec::all_generators`].
    pub fn table_index(self) -> usize {
        use Generator::*;
        match self {
            U | Z => 0,
            UStar | ZStar => 1,
            V | W => 2,
            VStar | WStar => 3,
        }
    }

    pub fn letter(self) -> Letter {
        use Generator::*;
        match self {
            U | Z => Letter::Base(1, 0),
            UStar | ZStar => Letter::Base(-1, 0),
            V | W => Letter::Base(0, 1),
            VStar | WStar => Letter::Base(0, -1),
        }
    }

    pub fn name(self) -> &'static str {
        use Generator::*;
        match self {
            U => "U",
            UStar => "U*",
            V => "V",
            VStar => "V*",
            Z => "Z",
            ZStar => "Z*",
            W => "W",
            WStar => "W*",
        }
    }
}

/// Formal conformal-factor symbols. Derivative indices run over `1..=3`;
/// second derivatives are stored with `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    K,
    KInv,
    D(u8),
    DD(u8, u8),
}

pub const FORMAL_INDICES: u8 = 3;

impl Symbol {
    pub fn second(a: u8, b: u8) -> Symbol {
        Symbol::DD(a.min(b), a.max(b))
    }

    pub fn name(self) -> String {
        match self {
            Symbol::K => "K".into(),
            Symbol::KInv => "Kinv".into(),
            Symbol::D(a) => format!("K_{a}"),
            Symbol::DD(a, b) => format!("K_{a}{b}"),
        }
    }

    fn cancels(self, next: Symbol) -> bool {
        matches!((self, next), (Symbol::K, Symbol::KInv) | (Symbol::KInv, Symbol::K))
    }
}

/// One letter of a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Base(i64, i64),
    Sym(Symbol),
}

pub type Word = Vec<Letter>;

/// Product of two base monomials: `(coefficient, monomial)`.
pub(crate) fn base_mul(spec: AlgebraSpec, a: (i64, i64), b: (i64, i64)) -> (Coeff, (i64, i64)) {
    // moving the right block of `a` past the left block of `b` costs q^{a.1 * b.0}
    // on both algebras (VU = qUV, WZ = qZW and their adjoint variants)
    let phase = Coeff::constant(q_pow(a.1 * b.0));
    match spec.base {
        BaseAlgebra::Torus => (phase, (a.0 + b.0, a.1 + b.1)),
        BaseAlgebra::Sphere3 | BaseAlgebra::Sphere3Loc => {
            let (z, tz) = merge_powers(a.0, b.0);
            let (w, tw) = merge_powers(a.1, b.1);
            let central = if tz == 0 && tw == 0 {
                phase
            } else {
                &phase * &Coeff::t_w_power(tz, tw)
            };
            (central, (z, w))
        }
    }
}

/// `X^a X^b` for commuting `X, X^*` with `X X^*` central: returns the
/// remaining signed exponent and the number of `X X^*` pairs absorbed.
fn merge_powers(a: i64, b: i64) -> (i64, i64) {
    if a.signum() * b.signum() >= 0 {
        (a + b, 0)
    } else {
        (a + b, a.abs().min(b.abs()))
    }
}

/// Adjoint of a base monomial.
pub(crate) fn base_star(m: (i64, i64)) -> (Coeff, (i64, i64)) {
    // (X^a Y^b)^* = Y^{-b} X^{-a} = q^{ab} X^{-a} Y^{-b} on both algebras
    (Coeff::constant(q_pow(m.0 * m.1)), (-m.0, -m.1))
}

/// Appends `l` to a reduced word, multiplying any produced coefficient into
/// `coeff`.
pub(crate) fn push_letter(spec: AlgebraSpec, word: &mut Word, coeff: &mut Coeff, l: Letter) {
    match l {
        Letter::Base(0, 0) => {}
        Letter::Base(a, b) => match word.last() {
            Some(&Letter::Base(c, d)) => {
                let (k, m) = base_mul(spec, (c, d), (a, b));
                *coeff = &*coeff * &k;
                word.pop();
                if m != (0, 0) {
                    word.push(Letter::Base(m.0, m.1));
                }
            }
            _ => word.push(l),
        },
        Letter::Sym(s) => match word.last() {
            Some(&Letter::Sym(prev)) if prev.cancels(s) => {
                word.pop();
            }
            _ => word.push(l),
        },
    }
}

/// Reduces the concatenation of two reduced words.
pub(crate) fn concat_words(spec: AlgebraSpec, left: &[Letter], right: &[Letter]) -> (Coeff, Word) {
    let mut word = Vec::with_capacity(left.len() + right.len());
    word.extend_from_slice(left);
    let mut coeff = Coeff::one();
    for &l in right {
        push_letter(spec, &mut word, &mut coeff, l);
    }
    (coeff, word)
}
