//! Text and LaTeX rendering. Text output re-parses to the same element.

use num_rational::BigRational;
use num_traits::{One, Signed as _, Zero};

use super::{AlgElement, Coeff, Letter, Symbol};
use crate::scalars::{join_terms, render_scalar, GaussianRational, Scalar, Signed};

fn product(factor: Signed, rest: &str) -> Signed {
    if factor.body == "1" {
        Signed {
            negative: factor.negative,
            body: rest.to_string(),
            atomic: true,
        }
    } else {
        Signed {
            negative: factor.negative,
            body: format!("{}*{}", factor.factor(), rest),
            atomic: true,
        }
    }
}

fn power(base: &str, e: i64) -> String {
    match e {
        1 => base.to_string(),
        e if e > 0 => format!("{base}^{e}"),
        e => format!("{base}^({e})"),
    }
}

/// Text form of a central coefficient: `(num)*t^(-i)*(1-t)^(-j)`.
pub fn render_coeff(c: &Coeff) -> Signed {
    let terms = c
        .numer()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(k, s)| {
            let s = render_scalar(s);
            if k == 0 {
                s
            } else {
                product(s, &power("t", k as i64))
            }
        })
        .collect();
    let num = join_terms(terms);
    let mut den = Vec::new();
    if c.t_exp() > 0 {
        den.push(power("t", -(c.t_exp() as i64)));
    }
    if c.w_exp() > 0 {
        den.push(power("(1 - t)", -(c.w_exp() as i64)));
    }
    if den.is_empty() {
        num
    } else {
        product(num, &den.join("*"))
    }
}

fn render_letter(torus: bool, l: &Letter) -> String {
    match *l {
        Letter::Sym(s) => s.name(),
        Letter::Base(a, b) => {
            let mut parts = Vec::new();
            let (g1, g2) = if torus { ("U", "V") } else { ("Z", "W") };
            for (g, e) in [(g1, a), (g2, b)] {
                if e == 0 {
                    continue;
                }
                if torus || e > 0 {
                    parts.push(power(g, e));
                } else {
                    parts.push(power(&format!("{g}*"), -e));
                }
            }
            parts.join("*")
        }
    }
}

/// Text form of a word.
pub fn render_word(torus: bool, w: &[Letter]) -> String {
    w.iter().map(|l| render_letter(torus, l)).collect::<Vec<_>>().join("*")
}

/// Signed text form of an element.
pub fn render_element_signed(x: &AlgElement) -> Signed {
    let torus = x.spec().is_torus();
    let terms = x
        .terms()
        .iter()
        .map(|(w, c)| {
            let c = render_coeff(c);
            if w.is_empty() {
                c
            } else {
                product(c, &render_word(torus, w))
            }
        })
        .collect();
    join_terms(terms)
}

/// Text form of an element; parses back to the same element.
pub fn render_element(x: &AlgElement) -> String {
    render_element_signed(x).into_string()
}

fn latex_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_gaussian(c: &GaussianRational) -> Signed {
    let (re, im) = (&c.re, &c.im);
    let imag = |m: &BigRational| {
        if m.is_one() {
            "i".to_string()
        } else {
            format!("{}i", latex_rational(m))
        }
    };
    if im.is_zero() {
        return Signed {
            negative: re.is_negative(),
            body: latex_rational(&re.abs()),
            atomic: true,
        };
    }
    if re.is_zero() {
        return Signed {
            negative: im.is_negative(),
            body: imag(&im.abs()),
            atomic: true,
        };
    }
    let op = if im.is_negative() { "-" } else { "+" };
    Signed {
        negative: false,
        body: format!("{} {} {}", latex_rational(re), op, imag(&im.abs())),
        atomic: false,
    }
}

fn latex_q_power(k: i64) -> String {
    match k {
        2 => "q".into(),
        k if k % 2 == 0 => format!("q^{{{}}}", k / 2),
        k => format!("q^{{{}/2}}", k),
    }
}

fn latex_product(factor: Signed, rest: &str) -> Signed {
    if factor.body == "1" {
        Signed {
            negative: factor.negative,
            body: rest.to_string(),
            atomic: true,
        }
    } else {
        Signed {
            negative: factor.negative,
            body: format!("{}{}", factor.factor(), rest),
            atomic: true,
        }
    }
}

/// LaTeX form of a scalar.
pub fn render_scalar_latex(s: &Scalar) -> Signed {
    let laurent = |terms: Vec<(i64, GaussianRational)>| {
        join_terms(
            terms
                .into_iter()
                .map(|(k, c)| {
                    let g = latex_gaussian(&c);
                    if k == 0 {
                        g
                    } else {
                        latex_product(g, &latex_q_power(k))
                    }
                })
                .collect(),
        )
    };
    if let Some(terms) = s.laurent_terms() {
        return laurent(terms);
    }
    let poly_terms = |p: &crate::poly::Poly<GaussianRational>| {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c.clone()))
            .collect::<Vec<_>>()
    };
    Signed {
        negative: false,
        body: format!(
            "\\frac{{{}}}{{{}}}",
            laurent(poly_terms(s.numer())).into_string(),
            laurent(poly_terms(s.denom())).into_string()
        ),
        atomic: true,
    }
}

fn latex_abs_power(g: &str, e: i64) -> String {
    if e == 1 {
        format!("|{g}|^2")
    } else {
        format!("|{g}|^{{{}}}", 2 * e)
    }
}

/// LaTeX form of a central coefficient, written through `|Z|^2 = t` and
/// `|W|^2 = 1 - t`.
pub fn render_coeff_latex(c: &Coeff) -> Signed {
    if let Some((k, a, b)) = c.monomial_factorization() {
        let mut rest = String::new();
        if a != 0 {
            rest.push_str(&latex_abs_power("Z", a));
        }
        if b != 0 {
            rest.push_str(&latex_abs_power("W", b));
        }
        let s = render_scalar_latex(&k);
        return if rest.is_empty() { s } else { latex_product(s, &rest) };
    }
    let terms = c
        .numer()
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(k, s)| {
            let s = render_scalar_latex(s);
            if k == 0 {
                s
            } else {
                latex_product(s, &latex_abs_power("Z", k as i64))
            }
        })
        .collect();
    let num = join_terms(terms);
    let mut den = String::new();
    if c.t_exp() > 0 {
        den.push_str(&latex_abs_power("Z", -(c.t_exp() as i64)));
    }
    if c.w_exp() > 0 {
        den.push_str(&latex_abs_power("W", -(c.w_exp() as i64)));
    }
    if den.is_empty() {
        num
    } else {
        latex_product(num, &den)
    }
}

fn latex_word(torus: bool, w: &[Letter]) -> String {
    let hh = if torus { "(\\tilde{H}\\tilde{H}^*)" } else { "(HH^*)" };
    let mut out = String::new();
    for l in w {
        match *l {
            Letter::Sym(Symbol::K) => out.push_str(hh),
            Letter::Sym(Symbol::KInv) => out.push_str(&format!("{hh}^{{-1}}")),
            Letter::Sym(Symbol::D(a)) => out.push_str(&format!("\\partial_{a}{hh}")),
            Letter::Sym(Symbol::DD(a, b)) => out.push_str(&format!("\\partial_{a}\\partial_{b}{hh}")),
            Letter::Base(a, b) => {
                let (g1, g2) = if torus { ("U", "V") } else { ("Z", "W") };
                for (g, e) in [(g1, a), (g2, b)] {
                    match e {
                        0 => {}
                        1 => out.push_str(g),
                        e if torus || e > 0 => out.push_str(&format!("{g}^{{{e}}}")),
                        -1 => out.push_str(&format!("{g}^*")),
                        e => out.push_str(&format!("({g}^*)^{{{}}}", -e)),
                    }
                }
            }
        }
    }
    out
}

/// LaTeX form of an element. The word `K^{-1} K_a` with coefficient `c` is
/// shown as `(2c) H_a`, matching `H_a = (1/2) K^{-1} K_a`.
pub fn render_element_latex_signed(x: &AlgElement) -> Signed {
    let torus = x.spec().is_torus();
    let h = if torus { "\\tilde{H}" } else { "H" };
    let two = crate::scalars::scalar_int(2);
    let terms = x
        .terms()
        .iter()
        .map(|(w, c)| match w.as_slice() {
            [] => render_coeff_latex(c),
            [Letter::Sym(Symbol::KInv), Letter::Sym(Symbol::D(a))] => {
                let c2 = c.scale(&two);
                latex_product(render_coeff_latex(&c2), &format!("{h}_{a}"))
            }
            _ => latex_product(render_coeff_latex(c), &latex_word(torus, w)),
        })
        .collect();
    join_terms(terms)
}

pub fn render_element_latex(x: &AlgElement) -> String {
    render_element_latex_signed(x).into_string()
}
