//! Sparse multivariate polynomials over the rationals.
//!
//! Variables `y_1, …, y_n` are the coordinate functions of the Chevalley
//! basis. The Killing form induces a pairing on polynomials, computed here
//! through the dual operator `q ↦ q♯` obtained by substituting
//! `y_i ↦ Σ_j (B⁻¹)_{ij} ∂_j`; then `∂_{q*} p = q♯(∂) p` and
//! `(p, q) = Σ_β p_β q♯_β β!`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, rat, Rational};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        Monomial {
            deg: exps.iter().map(|&e| e as u32).sum(),
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn degree(&self) -> usize {
        self.deg as usize
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// `β!` = product of factorials of the exponents.
    pub fn factorial(&self) -> BigInt {
        let mut f = BigInt::one();
        for &e in self.exps.iter() {
            for k in 2..=e as u64 {
                f *= k;
            }
        }
        f
    }

    /// `∂^β y^α = α!/(α-β)! y^{α-β}` when `β ≤ α`.
    fn differentiate(&self, by: &Monomial) -> Option<(BigInt, Monomial)> {
        let mut coef = BigInt::one();
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(by.exps.iter()) {
            if b > a {
                return None;
            }
            for k in (a - b + 1)..=a {
                coef *= k as u64;
            }
            exps.push(a - b);
        }
        Some((coef, Monomial::from_exponents(exps)))
    }

    fn fmt_text(&self) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("y{}", i + 1)
                } else {
                    format!("y{}^{}", i + 1, e)
                }
            })
            .collect();
        parts.join("*")
    }
}

/// Sparse polynomial: nonzero coefficients keyed by monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// `Σ c_i y_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest monomial in the global order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `∂p/∂y_i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::from_exponents(exps), c * rat(e as i64));
        }
        out
    }

    /// `Σ_i v_i ∂p/∂y_i`.
    pub fn directional(&self, v: &[Rational]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.partial(i).scale(c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars, "evaluation point arity");
        let mut s = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    if x[i].is_zero() {
                        t = Rational::zero();
                        break;
                    }
                    t *= num_traits::pow(x[i].clone(), e as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `y_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(target), p.clone()])
            .collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Applies the constant-coefficient operator `op(∂)` to `self`.
    pub fn apply_differential(&self, op: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (mo, co) in &op.terms {
            for (mp, cp) in &self.terms {
                if mo.deg > mp.deg {
                    continue;
                }
                if let Some((k, m)) = mp.differentiate(mo) {
                    out.add_term(m, co * cp * Rational::from_integer(k));
                }
            }
        }
        out
    }

    /// Parses the text form, e.g. `"2*y1^2 + 2*y2*y3 - 1/2"`.
    pub fn parse(s: &str, nvars: usize) -> Result<Poly> {
        let mut p = Poly::zero(nvars);
        let normalized = s.replace('-', "+-");
        for raw in normalized.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term),
            };
            let mut coef = Rational::one();
            let mut exps = vec![0u8; nvars];
            for factor in body.split('*').map(str::trim) {
                if let Some(v) = factor.strip_prefix('y') {
                    let (idx, pow) = match v.split_once('^') {
                        Some((i, e)) => (
                            i,
                            e.parse::<u8>()
                                .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                        ),
                        None => (v, 1),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::Parse(format!("variable {factor:?} out of range")));
                    }
                    exps[idx - 1] += pow;
                } else {
                    coef *= rational::parse(factor)?;
                }
            }
            if neg {
                coef = -coef;
            }
            p.add_term(Monomial::from_exponents(exps), coef);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, abs) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mono = m.fmt_text();
            let coef = rational::to_string(&abs);
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTermJson {
    #[serde(with = "crate::rational::serde_one")]
    coef: Rational,
    /// `(variable, exponent)` pairs with 1-based variables.
    powers: Vec<(usize, u8)>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<PolyTermJson>,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| PolyTermJson {
                    coef: c.clone(),
                    powers: m
                        .exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i + 1, e))
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut p = Poly::zero(raw.nvars);
        for t in raw.terms {
            let mut exps = vec![0u8; raw.nvars];
            for (v, e) in t.powers {
                if v == 0 || v > raw.nvars {
                    return Err(serde::de::Error::custom("variable out of range"));
                }
                exps[v - 1] += e;
            }
            p.add_term(Monomial::from_exponents(exps), t.coef);
        }
        Ok(p)
    }
}

/// The Killing identification `g ≅ g*` transported to polynomials.
#[derive(Debug, Clone)]
pub struct KillingDual {
    n: usize,
    killing: Vec<Vec<i64>>,
    /// `y_i ↦ Σ_j (B⁻¹)_{ij} ξ_j` as linear polynomials in the ∂-variables.
    dual_images: Vec<Poly>,
}

impl KillingDual {
    pub fn new(g: &LieAlgebra) -> Self {
        let inv = g.killing_inverse();
        let dual_images = inv.iter().map(|row| Poly::linear(row)).collect();
        KillingDual {
            n: g.dim(),
            killing: g.killing().to_vec(),
            dual_images,
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// The linear polynomial `B(x, ·)`.
    pub fn covector(&self, x: &LieElement) -> Poly {
        let coeffs: Vec<Rational> = (0..self.n)
            .map(|j| {
                x.coords()
                    .iter()
                    .enumerate()
                    .filter(|(i, a)| !a.is_zero() && self.killing[*i][j] != 0)
                    .map(|(i, a)| a * rat(self.killing[i][j]))
                    .sum()
            })
            .collect();
        Poly::linear(&coeffs)
    }

    /// `q♯`, the constant-coefficient operator representing `∂_q`.
    pub fn dual_operator(&self, q: &Poly) -> Poly {
        q.substitute(&self.dual_images)
    }

    /// `∂_q p`.
    pub fn apply(&self, q: &Poly, p: &Poly) -> Poly {
        p.apply_differential(&self.dual_operator(q))
    }

    /// The Killing pairing of polynomials; homogeneous components of
    /// different degree are orthogonal.
    pub fn pairing(&self, p: &Poly, q: &Poly) -> Result<Rational> {
        p.check_same(q)?;
        if p.nvars != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.nvars,
            });
        }
        let op = self.dual_operator(q);
        Ok(pair_with_operator(p, &op))
    }

    /// `∂_{p_i} q = 0` for every generator `p_i`.
    pub fn is_harmonic(&self, q: &Poly, gens: &[Poly]) -> bool {
        gens.iter()
            .all(|p| q.apply_differential(&self.dual_operator(p)).is_zero())
    }

    /// Precomputes the operators of a generator list for repeated
    /// harmonicity tests.
    pub fn harmonic_test(&self, gens: &[Poly]) -> HarmonicTest {
        HarmonicTest {
            ops: gens.iter().map(|p| self.dual_operator(p)).collect(),
        }
    }
}

/// `Σ_β p_β op_β β!`.
pub fn pair_with_operator(p: &Poly, op: &Poly) -> Rational {
    let mut s = Rational::zero();
    for (m, c) in &p.terms {
        if let Some(d) = op.terms.get(m) {
            s += c * d * Rational::from_integer(m.factorial());
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct HarmonicTest {
    ops: Vec<Poly>,
}

impl HarmonicTest {
    pub fn is_harmonic(&self, q: &Poly) -> bool {
        self.ops.iter().all(|op| q.apply_differential(op).is_zero())
    }
}

/// Derivative of `p` along the vector field `x ↦ [y_i, x]`; it vanishes for
/// every basis element exactly when `p` is invariant, and a span is a
/// `g`-module exactly when it is closed under these derivations.
pub fn lie_derivative(g: &LieAlgebra, i: usize, p: &Poly) -> Poly {
    let n = g.dim();
    // [y_i, x]_j = Σ_m x_m c_{im}^j
    let mut field: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for m in 0..n {
        for &(j, c) in g.bracket_basis(i, m) {
            field[j][m] += rat(c);
        }
    }
    let mut out = Poly::zero(n);
    for (j, row) in field.iter().enumerate() {
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let dp = p.partial(j);
        if dp.is_zero() {
            continue;
        }
        out = &out + &(&dp * &Poly::linear(row));
    }
    out
}

/// Finite-dimensional span of polynomials kept in reduced row echelon form
/// against the global monomial order (largest monomial first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpace {
    nvars: usize,
    basis: Vec<Poly>,
}

impl PolySpace {
    pub fn span(nvars: usize, polys: impl IntoIterator<Item = Poly>) -> Self {
        let polys: Vec<Poly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        if polys.is_empty() {
            return PolySpace {
                nvars,
                basis: Vec::new(),
            };
        }
        let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms.keys().cloned()).collect();
        monos.sort_unstable_by(|a, b| b.cmp(a));
        monos.dedup();
        let col: std::collections::HashMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows: Matrix = polys
            .iter()
            .map(|p| {
                let mut row = vec![Rational::zero(); monos.len()];
                for (m, c) in &p.terms {
                    row[col[m]] = c.clone();
                }
                row
            })
            .collect();
        let (red, _) = linalg::rref(rows);
        let basis = red
            .into_iter()
            .map(|row| {
                Poly::from_terms(
                    nvars,
                    row.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (monos[j].clone(), c)),
                )
            })
            .collect();
        PolySpace { nvars, basis }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    /// Common degree when every basis element is homogeneous of one degree.
    pub fn degree(&self) -> Option<usize> {
        let d = self.basis.first()?.degree()?;
        self.basis
            .iter()
            .all(|p| p.is_homogeneous() && p.degree() == Some(d))
            .then_some(d)
    }

    /// Remainder of `p` after eliminating every pivot monomial.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut r = p.clone();
        for b in &self.basis {
            let (lead, _) = b.leading().expect("nonzero basis element");
            let c = r.coefficient(lead);
            if !c.is_zero() {
                r = &r - &b.scale(&c);
            }
        }
        r
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn contains_space(&self, other: &PolySpace) -> bool {
        other.basis.iter().all(|p| self.contains(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::rootdata::{CartanType, RootSystem};

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::new(RootSystem::new(s.parse::<CartanType>().unwrap()))
    }

    /// Brute-force pairing: expand each monomial into its list of linear
    /// factors and sum over all bijections of `Π (B⁻¹)_{ij}`.
    fn permanent_pairing(ginv: &Matrix, p: &Poly, q: &Poly) -> Rational {
        fn factors(m: &Monomial) -> Vec<usize> {
            m.exponents()
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect()
        }
        fn perm_sum(
            ginv: &Matrix,
            a: &[usize],
            b: &mut Vec<usize>,
            used: &mut Vec<bool>,
            k: usize,
        ) -> Rational {
            if k == a.len() {
                return Rational::one();
            }
            let mut s = Rational::zero();
            for j in 0..b.len() {
                if used[j] {
                    continue;
                }
                let g = &ginv[a[k]][b[j]];
                if g.is_zero() {
                    continue;
                }
                used[j] = true;
                s += g * perm_sum(ginv, a, b, used, k + 1);
                used[j] = false;
            }
            s
        }
        let mut total = Rational::zero();
        for (m1, c1) in p.terms() {
            for (m2, c2) in q.terms() {
                if m1.degree() != m2.degree() {
                    continue;
                }
                let a = factors(m1);
                let mut b = factors(m2);
                let mut used = vec![false; b.len()];
                total += c1 * c2 * perm_sum(ginv, &a, &mut b, &mut used, 0);
            }
        }
        total
    }

    #[test]
    fn arithmetic_basics() {
        let n = 3;
        let a = Poly::var(n, 0);
        assert_eq!((&a * &a).partial(0), a.scale(&rat(2)));
        let p = Poly::parse("y2^2 + y1*y3", n).unwrap();
        assert_eq!(&p * &Poly::one(n), p);
        // basis (h, e, f) = (y1, y2, y3): p1 = 2 y1^2 + 2 y2 y3
        let p1 = Poly::parse("2*y1^2 + 2*y2*y3", n).unwrap();
        assert_eq!(p1.partial(0), Poly::parse("4*y1", n).unwrap());
        assert!(Poly::var(2, 0).try_add(&Poly::var(3, 0)).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let p = Poly::parse("-1/2*y3^2*y7 + 3*y1 - 4", 8).unwrap();
        let s = p.to_string();
        assert_eq!(s, "-1/2*y3^2*y7 + 3*y1 - 4");
        assert_eq!(Poly::parse(&s, 8).unwrap(), p);
        assert!(Poly::parse("y9", 8).is_err());
        let json = serde_json::to_string(&p).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn a1_pairing_values() {
        let g = alg("A1");
        let kd = KillingDual::new(&g);
        let lh = kd.covector(&g.basis_element(0));
        assert_eq!(lh, Poly::linear(&[rat(8), rat(0), rat(0)]));
        assert_eq!(kd.pairing(&lh, &lh).unwrap(), rat(8));
        let p1 = Poly::parse("2*y1^2 + 2*y2*y3", 3).unwrap();
        let v = kd.pairing(&p1, &p1).unwrap();
        assert_eq!(v, permanent_pairing(g.killing_inverse(), &p1, &p1));
        // 4·(y1²,y1²) + 4·(y2y3,y2y3) = 4·2/64 + 4·1/16
        assert_eq!(v, frac(3, 8));
        assert_eq!(kd.pairing(&p1, &lh).unwrap(), rat(0));
    }

    #[test]
    fn harmonic_basics() {
        let g = alg("A1");
        let kd = KillingDual::new(&g);
        let p1 = Poly::parse("2*y1^2 + 2*y2*y3", 3).unwrap();
        let gens = vec![p1.clone()];
        assert!(kd.is_harmonic(&Poly::one(3), &gens));
        for i in 0..3 {
            assert!(kd.is_harmonic(&Poly::var(3, i), &gens));
        }
        assert!(!kd.is_harmonic(&p1, &gens));
        let c = kd.apply(&p1, &p1);
        assert!(c.degree() == Some(0) && !c.is_zero());
    }

    #[test]
    fn lie_derivative_kills_casimir_polynomial() {
        let g = alg("A1");
        let p1 = Poly::parse("2*y1^2 + 2*y2*y3", 3).unwrap();
        for i in 0..3 {
            assert!(lie_derivative(&g, i, &p1).is_zero());
        }
        assert!(!lie_derivative(&g, 1, &Poly::var(3, 0)).is_zero());
    }

    #[test]
    fn space_reduction() {
        let n = 3;
        let polys = vec![
            Poly::parse("y1 + y2", n).unwrap(),
            Poly::parse("2*y1 + 2*y2", n).unwrap(),
            Poly::parse("y3", n).unwrap(),
        ];
        let s = PolySpace::span(n, polys);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.degree(), Some(1));
        assert!(s.contains(&Poly::parse("3*y1 + 3*y2 - y3", n).unwrap()));
        assert!(!s.contains(&Poly::var(n, 0)));
        let t = PolySpace::span(
            n,
            vec![Poly::parse("y3 + y1 + y2", n).unwrap(), Poly::var(n, 2)],
        );
        assert_eq!(s, t);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy(n: usize, deg: usize) -> impl Strategy<Value = Poly> {
            proptest::collection::vec((proptest::collection::vec(0..n, deg), -4i64..=4), 1..4)
                .prop_map(move |terms| {
                    let mut p = Poly::zero(n);
                    for (vars, c) in terms {
                        let mut e = vec![0u8; n];
                        for v in vars {
                            e[v] += 1;
                        }
                        p.add_term(Monomial::from_exponents(e), rat(c));
                    }
                    p
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn adjointness_a1(p in poly_strategy(3, 3), q in poly_strategy(3, 1), f in poly_strategy(3, 2)) {
                let g = alg("A1");
                let kd = KillingDual::new(&g);
                let lhs = kd.pairing(&kd.apply(&q, &p), &f).unwrap();
                let rhs = kd.pairing(&p, &(&q * &f)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn adjointness_a2(p in poly_strategy(8, 3), q in poly_strategy(8, 2), f in poly_strategy(8, 1)) {
                let g = alg("A2");
                let kd = KillingDual::new(&g);
                let lhs = kd.pairing(&kd.apply(&q, &p), &f).unwrap();
                let rhs = kd.pairing(&p, &(&q * &f)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn harmonic_orthogonal_to_invariant_ideal(f in poly_strategy(8, 1), pick in 0usize..20) {
                let g = alg("A2");
                let kd = KillingDual::new(&g);
                // R^3 is harmonic of degree 3; p_1 has degree 2
                static DATA: std::sync::OnceLock<(Vec<Poly>, PolySpace)> = std::sync::OnceLock::new();
                let (gens, h) = DATA.get_or_init(|| {
                    let g = alg("A2");
                    (crate::invariants::chevalley_generators(&g).unwrap(), crate::gammamap::rk_space(&g, 3))
                });
                let q = &h.basis()[pick % h.dim()];
                prop_assert_eq!(kd.pairing(&(&gens[0] * &f), q).unwrap(), Rational::zero());
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]


            #[test]
            fn pairing_symmetric_and_matches_permanent(p in poly_strategy(8, 2), q in poly_strategy(8, 2)) {
                let g = alg("A2");
                let kd = KillingDual::new(&g);
                let a = kd.pairing(&p, &q).unwrap();
                prop_assert_eq!(&a, &kd.pairing(&q, &p).unwrap());
                prop_assert_eq!(a, permanent_pairing(g.killing_inverse(), &p, &q));
            }
        }
    }
}
