//! Real calculi: derivation Lie algebras, free modules with an anchor map,
//! and hermitian metrics.

use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::qalgebra::{check_derivation_well_defined, render_element, AlgElement, AlgebraSpec, Derivation, Symbol};
use crate::report::Report;
use crate::scalars::scalar_rational;

/// A finite-dimensional real Lie algebra of derivations with rational
/// structure constants `[d_a, d_b] = f^c_ab d_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    derivations: Vec<Derivation>,
    /// `structure[c][a][b] = f^c_ab`.
    structure: Vec<Vec<Vec<BigRational>>>,
}

impl LieAlgebra {
    pub fn abelian(derivations: Vec<Derivation>) -> Result<Self> {
        let n = derivations.len();
        Self::new(derivations, vec![vec![vec![BigRational::zero(); n]; n]; n])
    }

    /// Checks shape, antisymmetry and the Jacobi identity of the structure
    /// constants. The bracket realization is checked by
    /// [`LieAlgebra::check_bracket_realization`].
    pub fn new(derivations: Vec<Derivation>, structure: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
        let n = derivations.len();
        if n == 0 {
            return Err(Error::Invalid("empty derivation basis".into()));
        }
        let spec = derivations[0].spec();
        if let Some(d) = derivations.iter().find(|d| d.spec() != spec) {
            return Err(Error::MixedAlgebras(d.spec().to_string(), spec.to_string()));
        }
        if structure.len() != n || structure.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::RankMismatch {
                expected: n,
                found: structure.len(),
            });
        }
        let f = |c: usize, a: usize, b: usize| &structure[c][a][b];
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if f(c, a, b) != &-f(c, b, a).clone() {
                        return Err(Error::Invalid(format!("structure constants not antisymmetric at f^{}_{}{}", c + 1, a + 1, b + 1)));
                    }
                }
            }
        }
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut s = BigRational::zero();
                        for e in 0..n {
                            s += f(e, a, b) * f(d, e, c) + f(e, b, c) * f(d, e, a) + f(e, c, a) * f(d, e, b);
                        }
                        if !s.is_zero() {
                            return Err(Error::Invalid("structure constants violate the Jacobi identity".into()));
                        }
                    }
                }
            }
        }
        Ok(LieAlgebra { derivations, structure })
    }

    pub fn dim(&self) -> usize {
        self.derivations.len()
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.derivations[0].spec()
    }

    pub fn derivation(&self, a: usize) -> &Derivation {
        &self.derivations[a]
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    /// `f^c_ab`.
    pub fn f(&self, c: usize, a: usize, b: usize) -> &BigRational {
        &self.structure[c][a][b]
    }

    pub fn structure(&self) -> &Vec<Vec<Vec<BigRational>>> {
        &self.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// Coordinates of `[x, y]` for `x = x^a d_a`, `y = y^b d_b`.
    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        (0..n)
            .map(|c| {
                let mut s = BigRational::zero();
                for a in 0..n {
                    for b in 0..n {
                        if !x[a].is_zero() && !y[b].is_zero() {
                            s += &x[a] * &y[b] * self.f(c, a, b);
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// The derivation `sum_a x^a d_a`.
    pub fn combination(&self, x: &[BigRational]) -> Result<Derivation> {
        if x.len() != self.dim() {
            return Err(Error::RankMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let terms: Vec<_> = x.iter().cloned().zip(self.derivations.iter()).collect();
        Derivation::combination(self.spec(), &terms)
    }

    /// Elements on which brackets are compared: the four generators and,
    /// with the formal factor, `K`.
    pub(crate) fn test_elements(spec: AlgebraSpec) -> Result<Vec<(String, AlgElement)>> {
        let mut out = Vec::new();
        for g in spec.all_generators() {
            out.push((g.name().to_string(), AlgElement::generator(spec, g)?));
        }
        if spec.is_formal() {
            out.push(("K".into(), AlgElement::symbol(spec, Symbol::K)?));
        }
        Ok(out)
    }

    /// `[d_a, d_b](g) = f^c_ab d_c(g)` on every generator.
    pub fn check_bracket_realization(&self) -> Report {
        let mut report = Report::new();
        let elems = match Self::test_elements(self.spec()) {
            Ok(e) => e,
            Err(e) => {
                report.fail("bracket realization", e.to_string());
                return report;
            }
        };
        let n = self.dim();
        for a in 0..n {
            for b in (a + 1)..n {
                let name = format!("bracket [d_{}, d_{}]", a + 1, b + 1);
                let res = (|| -> Result<Option<String>> {
                    for (gname, g) in &elems {
                        let da = &self.derivations[a];
                        let db = &self.derivations[b];
                        let lhs = &da.apply(&db.apply(g)?)? - &db.apply(&da.apply(g)?)?;
                        let mut rhs = AlgElement::zero(self.spec());
                        for c in 0..n {
                            let f = self.f(c, a, b);
                            if !f.is_zero() {
                                rhs = &rhs + &self.derivations[c].apply(g)?.scale_scalar(&scalar_rational(f.clone()));
                            }
                        }
                        if lhs != rhs {
                            return Ok(Some(format!("on {gname}: {}", render_element(&(&lhs - &rhs)))));
                        }
                    }
                    Ok(None)
                })();
                match res {
                    Ok(None) => report.pass(name),
                    Ok(Some(d)) => report.fail(name, d),
                    Err(e) => report.fail(name, e.to_string()),
                }
            }
        }
        report
    }

    /// The basis `d~_i = sum_j A_ij d_j` with transformed structure constants.
    pub fn change_basis(&self, a: &RationalMatrix) -> Result<Self> {
        let n = self.dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::RankMismatch { expected: n, found: a.rows() });
        }
        let a_inv = a.inverse()?;
        let derivations = (0..n).map(|i| self.combination(a.row(i))).collect::<Result<Vec<_>>>()?;
        let mut structure = vec![vec![vec![BigRational::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                // [d~_i, d~_j] in old coordinates, then mapped back
                let old = self.bracket(a.row(i), a.row(j));
                for c in 0..n {
                    let mut s = BigRational::zero();
                    for m in 0..n {
                        s += &old[m] * a_inv.get(m, c);
                    }
                    structure[c][i][j] = s;
                }
            }
        }
        Self::new(derivations, structure)
    }
}

/// A module element `m = E_a m^a` in the right-module convention.
#[derive(Clone, Debug, PartialEq)]
pub struct ModVec(pub Vec<AlgElement>);

impl ModVec {
    pub fn zero(spec: AlgebraSpec, n: usize) -> Self {
        ModVec(vec![AlgElement::zero(spec); n])
    }

    /// The basis vector `E_a` (zero-based `a`).
    pub fn basis(spec: AlgebraSpec, n: usize, a: usize) -> Self {
        let mut v = Self::zero(spec, n);
        v.0[a] = AlgElement::one(spec);
        v
    }

    /// `E_a x^a` with rational coordinates.
    pub fn from_rational(spec: AlgebraSpec, x: &[BigRational]) -> Self {
        ModVec(x.iter().map(|c| AlgElement::scalar(spec, scalar_rational(c.clone()))).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[AlgElement] {
        &self.0
    }

    pub fn coord(&self, a: usize) -> &AlgElement {
        &self.0[a]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(AlgElement::is_zero)
    }

    fn same_rank(&self, other: &Self) -> Result<()> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_rank(other)?;
        Ok(ModVec(
            self.0.iter().zip(&other.0).map(|(x, y)| x.checked_add(y)).collect::<Result<_>>()?,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// `m a`.
    pub fn right_mul(&self, a: &AlgElement) -> Result<Self> {
        Ok(ModVec(self.0.iter().map(|x| x.checked_mul(a)).collect::<Result<_>>()?))
    }

    /// Coordinate-wise map.
    pub fn map(&self, f: impl Fn(&AlgElement) -> Result<AlgElement>) -> Result<Self> {
        Ok(ModVec(self.0.iter().map(f).collect::<Result<_>>()?))
    }

    /// Inverse of [`ModVec::render`]: a sum of `B_a` or `B_a*(coefficient)`
    /// terms with basis symbol `B`.
    pub fn parse(text: &str, basis: &str, spec: AlgebraSpec, n: usize) -> Result<Self> {
        let mut out = Self::zero(spec, n);
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(out);
        }
        let prefix = format!("{basis}_");
        let bytes = text.as_bytes();
        let mut cuts = vec![0];
        let mut depth = 0i32;
        for (i, &c) in bytes.iter().enumerate() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && text[i + 1..].trim_start().starts_with(&prefix) => cuts.push(i),
                _ => {}
            }
        }
        cuts.push(text.len());
        for w in cuts.windows(2) {
            let raw = &text[w[0]..w[1]];
            let offset = w[0] + raw.len() - raw.trim_start().len();
            let mut term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let negative = term.starts_with('-');
            if negative || term.starts_with('+') {
                term = term[1..].trim_start();
            }
            let perr = |message: String| Error::Parse { offset, message };
            let body = term
                .strip_prefix(&prefix)
                .ok_or_else(|| perr(format!("expected {prefix}<index>")))?;
            let digits = body.chars().take_while(char::is_ascii_digit).count();
            let a: usize = body[..digits].parse().map_err(|_| perr("missing basis index".into()))?;
            if a == 0 || a > n {
                return Err(perr(format!("basis index {a} out of range 1..={n}")));
            }
            let rest = body[digits..].trim();
            let coeff = if rest.is_empty() {
                AlgElement::one(spec)
            } else {
                let c = rest.strip_prefix('*').ok_or_else(|| perr("expected '*' after basis vector".into()))?;
                crate::qalgebra::parse_element(c, spec)?
            };
            let coeff = if negative { -&coeff } else { coeff };
            out.0[a - 1] = &out.0[a - 1] + &coeff;
        }
        Ok(out)
    }

    /// LaTeX form `E_1 c^1 + ...`; an overall sign is pulled out of a
    /// coefficient when that shortens it.
    pub fn render_latex(&self, basis: &str) -> String {
        let terms = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| {
                let plain = crate::qalgebra::render_element_latex_signed(c);
                let flipped = crate::qalgebra::render_element_latex_signed(&-c);
                let minus = |s: &crate::scalars::Signed| s.negative as usize + s.body.starts_with('-') as usize + s.body.matches(" - ").count();
                let (negative, s) = if minus(&flipped) < minus(&plain) && !flipped.negative {
                    (true, flipped)
                } else {
                    (plain.negative, crate::scalars::Signed { negative: false, ..plain })
                };
                let name = format!("{basis}_{}", a + 1);
                let body = match (s.body.as_str(), s.atomic) {
                    ("1", _) => name,
                    (b, true) => format!("{name}{b}"),
                    (b, false) => format!("{name}({b})"),
                };
                crate::scalars::Signed { negative, body, atomic: true }
            })
            .collect();
        crate::scalars::join_terms(terms).into_string()
    }

    /// `E_1*(m^1) + ...` with the given basis symbol.
    pub fn render(&self, basis: &str) -> String {
        let terms = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| {
                let s = crate::qalgebra::render_element_signed(c);
                let name = format!("{basis}_{}", a + 1);
                crate::scalars::Signed {
                    negative: s.negative,
                    body: if s.body == "1" { name } else { format!("{name}*({})", s.body) },
                    atomic: true,
                }
            })
            .collect();
        crate::scalars::join_terms(terms).into_string()
    }
}

impl Add for &ModVec {
    type Output = ModVec;
    fn add(self, rhs: &ModVec) -> ModVec {
        self.checked_add(rhs).expect("module vectors of different rank")
    }
}

impl Sub for &ModVec {
    type Output = ModVec;
    fn sub(self, rhs: &ModVec) -> ModVec {
        self.checked_sub(rhs).expect("module vectors of different rank")
    }
}

impl Neg for &ModVec {
    type Output = ModVec;
    fn neg(self) -> ModVec {
        ModVec(self.0.iter().map(|x| -x).collect())
    }
}

/// A real calculus `(A, g, M, phi)` with `M` free of rank `dim g` and
/// `phi(d_a) = sum_b anchor[a][b] E_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealCalculus {
    lie: LieAlgebra,
    anchor: RationalMatrix,
}

impl RealCalculus {
    /// The free calculus with `E_a = phi(d_a)`.
    pub fn free(lie: LieAlgebra) -> Self {
        let n = lie.dim();
        RealCalculus {
            lie,
            anchor: RationalMatrix::identity(n),
        }
    }

    /// A calculus with an invertible anchor matrix (so `phi(g)` generates `M`).
    pub fn with_anchor(lie: LieAlgebra, anchor: RationalMatrix) -> Result<Self> {
        if anchor.rows() != lie.dim() || anchor.cols() != lie.dim() || anchor.inverse().is_err() {
            return Err(Error::NotFree("anchor image does not form a basis".into()));
        }
        Ok(RealCalculus { lie, anchor })
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.lie.spec()
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn rank(&self) -> usize {
        self.lie.dim()
    }

    pub fn anchor(&self) -> &RationalMatrix {
        &self.anchor
    }

    /// Whether `phi(d_a) = E_a`.
    pub fn is_free(&self) -> bool {
        self.anchor.is_identity()
    }

    pub fn derivation(&self, a: usize) -> &Derivation {
        self.lie.derivation(a)
    }

    /// `phi(sum_a x^a d_a)`.
    pub fn anchor_vector(&self, x: &[BigRational]) -> ModVec {
        let n = self.rank();
        let coords: Vec<BigRational> = (0..n)
            .map(|b| (0..n).fold(BigRational::zero(), |s, a| s + &x[a] * self.anchor.get(a, b)))
            .collect();
        ModVec::from_rational(self.spec(), &coords)
    }

    /// Same calculus with derivation basis `d~_i = sum_j A_ij d_j` and module
    /// basis `E~_i = phi(d~_i)`.
    pub fn change_basis(&self, a: &RationalMatrix) -> Result<Self> {
        if !self.is_free() {
            return Err(Error::NotFree("basis change needs E_a = phi(d_a)".into()));
        }
        Ok(Self::free(self.lie.change_basis(a)?))
    }
}

/// A hermitian form on a free module given by its matrix `h_ab` on the
/// basis, together with a registered inverse matrix `h^ab`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMetric {
    entries: Vec<Vec<AlgElement>>,
    inverse: Vec<Vec<AlgElement>>,
}

fn square(m: &[Vec<AlgElement>], n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n)
}

impl HermitianMetric {
    /// Diagonal metric; entries are inverted in-engine.
    pub fn diagonal(entries: Vec<AlgElement>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Invalid("empty metric".into()));
        }
        let spec = entries[0].spec();
        let mut h = vec![vec![AlgElement::zero(spec); n]; n];
        let mut inv = h.clone();
        for (a, e) in entries.into_iter().enumerate() {
            inv[a][a] = e.invert()?;
            h[a][a] = e;
        }
        Ok(HermitianMetric { entries: h, inverse: inv })
    }

    /// Metric with a registered inverse. Only the shape is checked here;
    /// [`validate_real_metric_calculus`] checks the inverse identities.
    pub fn new(entries: Vec<Vec<AlgElement>>, inverse: Vec<Vec<AlgElement>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || !square(&entries, n) || !square(&inverse, n) {
            return Err(Error::RankMismatch {
                expected: n,
                found: inverse.len(),
            });
        }
        let spec = entries[0][0].spec();
        if let Some(x) = entries.iter().chain(&inverse).flatten().find(|x| x.spec() != spec) {
            return Err(Error::MixedAlgebras(x.spec().to_string(), spec.to_string()));
        }
        Ok(HermitianMetric { entries, inverse })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.entries[0][0].spec()
    }

    /// `h_ab`.
    pub fn entry(&self, a: usize, b: usize) -> &AlgElement {
        &self.entries[a][b]
    }

    /// `h^ab`.
    pub fn inverse_entry(&self, a: usize, b: usize) -> &AlgElement {
        &self.inverse[a][b]
    }

    pub fn entries(&self) -> &[Vec<AlgElement>] {
        &self.entries
    }

    /// The registered inverse `h^ab`.
    pub fn inverse_matrix(&self) -> Vec<Vec<AlgElement>> {
        self.inverse.clone()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.rank();
        (0..n).all(|a| (0..n).all(|b| a == b || self.entries[a][b].is_zero()))
    }

    /// `h(m, n) = sum (m^a)^* h_ab n^b`.
    pub fn eval(&self, m: &ModVec, n: &ModVec) -> Result<AlgElement> {
        let r = self.rank();
        for v in [m, n] {
            if v.rank() != r {
                return Err(Error::RankMismatch {
                    expected: r,
                    found: v.rank(),
                });
            }
        }
        let spec = self.spec();
        let mut out = AlgElement::zero(spec);
        for a in 0..r {
            if m.0[a].is_zero() {
                continue;
            }
            let ma = m.0[a].star();
            for b in 0..r {
                if self.entries[a][b].is_zero() || n.0[b].is_zero() {
                    continue;
                }
                out = out.checked_add(&ma.checked_mul(&self.entries[a][b])?.checked_mul(&n.0[b])?)?;
            }
        }
        Ok(out)
    }

    /// Residuals of `h^ab h_bc = delta^a_c` and `h_cb h^ba = delta^a_c`.
    pub fn inverse_residuals(&self) -> Vec<(String, AlgElement)> {
        let n = self.rank();
        let spec = self.spec();
        let mut out = Vec::new();
        for a in 0..n {
            for c in 0..n {
                let mut left = AlgElement::zero(spec);
                let mut right = AlgElement::zero(spec);
                for b in 0..n {
                    left = &left + &(&self.inverse[a][b] * &self.entries[b][c]);
                    right = &right + &(&self.entries[c][b] * &self.inverse[b][a]);
                }
                let delta = if a == c { AlgElement::one(spec) } else { AlgElement::zero(spec) };
                out.push((format!("h^{{{}b}} h_{{b{}}}", a + 1, c + 1), &left - &delta));
                out.push((format!("h_{{{}b}} h^{{b{}}}", c + 1, a + 1), &right - &delta));
            }
        }
        out
    }

    /// The metric in the basis `E~_i = sum_j A_ij E_j`:
    /// `h~ = A h A^T` and `h~^{-1} = A^{-T} h^{-1} A^{-1}`.
    pub fn transform(&self, a: &RationalMatrix) -> Result<Self> {
        let n = self.rank();
        if a.rows() != n || a.cols() != n {
            return Err(Error::RankMismatch { expected: n, found: a.rows() });
        }
        let a_inv = a.inverse()?;
        let spec = self.spec();
        let sandwich = |l: &RationalMatrix, m: &[Vec<AlgElement>], r_t: bool, r: &RationalMatrix| {
            // (L M R)_ij with R given either directly or as a transpose
            let mut out = vec![vec![AlgElement::zero(spec); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = AlgElement::zero(spec);
                    for k in 0..n {
                        for l_ in 0..n {
                            let lk = l.get(i, k);
                            let rl = if r_t { r.get(j, l_) } else { r.get(l_, j) };
                            if lk.is_zero() || rl.is_zero() || m[k][l_].is_zero() {
                                continue;
                            }
                            acc = &acc + &m[k][l_].scale_scalar(&scalar_rational(lk * rl));
                        }
                    }
                    out[i][j] = acc;
                }
            }
            out
        };
        let entries = sandwich(a, &self.entries, true, a);
        let inverse = sandwich(&a_inv.transpose(), &self.inverse, false, &a_inv);
        Ok(HermitianMetric { entries, inverse })
    }
}

/// Checks the real metric calculus conditions: hermitian basis values,
/// the registered inverse, the bracket realization, and well-defined
/// hermitian derivations.
pub fn validate_real_metric_calculus(c: &RealCalculus, h: &HermitianMetric) -> Report {
    let mut report = Report::new();
    if h.rank() != c.rank() || h.spec() != c.spec() {
        report.fail(
            "metric matches calculus",
            format!("rank {} over {} vs rank {} over {}", h.rank(), h.spec(), c.rank(), c.spec()),
        );
        return report;
    }
    let n = c.rank();
    for a in 0..n {
        for b in 0..n {
            let e = h.entry(a, b);
            let name = format!("h(E_{}, E_{}) hermitian", a + 1, b + 1);
            if e.is_hermitian() && e.star() == *h.entry(b, a) {
                report.pass(name);
            } else {
                report.fail(name, render_element(e));
            }
        }
    }
    let bad: Vec<String> = h
        .inverse_residuals()
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(name, r)| format!("{name}: {}", render_element(&r)))
        .collect();
    if bad.is_empty() {
        report.pass("registered inverse");
    } else {
        report.fail("registered inverse", bad.join("; "));
    }
    report.extend("", c.lie().check_bracket_realization());
    for (a, d) in c.lie().derivations().iter().enumerate() {
        let name = format!("d_{} well-defined", a + 1);
        match check_derivation_well_defined(d) {
            Ok(()) => report.pass(name),
            Err(e) => report.fail(name, e.to_string()),
        }
        let name = format!("d_{} hermitian", a + 1);
        if d.is_hermitian() {
            report.pass(name);
        } else {
            report.fail(name, "d(g*) != d(g)*");
        }
    }
    report
}
