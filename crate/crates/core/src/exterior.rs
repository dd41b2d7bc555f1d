//! Exterior algebra on `g`: sparse elements keyed by basis subsets, the
//! coboundary `dx` of a degree-one element, and the algebra homomorphism
//! `γ: P(g) → ∧^even g` sending `B(x, ·)` to `-dx`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polyring::Poly;
use crate::rational::{rat, Rational};

/// Bitset of basis indices; bit `i` is the basis element `y_i`.
pub type Blade = u128;

pub const MAX_EXTERIOR_DIM: usize = 128;

/// Sign of `e_a ∧ e_b` relative to the sorted blade `a | b`; zero when they
/// share an index.
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // bits of a above j
        swaps += if j >= 127 {
            0
        } else {
            (a >> (j + 1)).count_ones()
        };
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    let mut v = Vec::with_capacity(b.count_ones() as usize);
    let mut rest = b;
    while rest != 0 {
        v.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    n: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl ExtElement {
    pub fn zero(n: usize) -> Self {
        assert!(
            n <= MAX_EXTERIOR_DIM,
            "exterior algebra limited to dimension {MAX_EXTERIOR_DIM}"
        );
        ExtElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The empty wedge.
    pub fn one(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut u = Self::zero(n);
        u.add_term(0, c);
        u
    }

    /// `y_{i_1} ∧ ⋯ ∧ y_{i_k}` in the given order.
    pub fn basis_wedge(n: usize, indices: &[usize]) -> Self {
        let mut u = Self::one(n);
        for &i in indices {
            u = u
                .wedge(&Self::blade(n, 1 << i, Rational::one()))
                .expect("same ambient");
        }
        u
    }

    pub fn blade(n: usize, b: Blade, c: Rational) -> Self {
        let mut u = Self::zero(n);
        u.add_term(b, c);
        u
    }

    pub fn from_vector(x: &LieElement) -> Self {
        let mut u = Self::zero(x.dim());
        for (i, c) in x.coords().iter().enumerate() {
            u.add_term(1 << i, c.clone());
        }
        u
    }

    pub fn dim(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: Blade) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    /// Grades present among the stored terms.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.count_ones() as usize).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn add_term(&mut self, b: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &ExtElement) -> ExtElement {
        let mut out = self.clone();
        for (&b, c) in &other.terms {
            out.add_term(b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ExtElement {
        let mut out = Self::zero(self.n);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(&b, a)| (b, a * c)).collect();
        }
        out
    }

    pub fn wedge(&self, other: &ExtElement) -> Result<ExtElement> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = Self::zero(self.n);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                match wedge_sign(a, b) {
                    0 => {}
                    1 => out.add_term(a | b, ca * cb),
                    _ => out.add_term(a | b, -(ca * cb)),
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> ExtElement {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.wedge(self).expect("same ambient");
            if out.is_zero() {
                break;
            }
        }
        out
    }

    /// `c` with `self = c · other`, if it exists and `other ≠ 0`.
    pub fn ratio_to(&self, other: &ExtElement) -> Option<Rational> {
        let (&b, c0) = other.terms.iter().next()?;
        let c = self.coefficient(b) / c0;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Action of the basis element `y_i` as a derivation.
    pub fn ad_action(&self, g: &LieAlgebra, i: usize) -> ExtElement {
        let mut out = Self::zero(self.n);
        for (&blade, c) in &self.terms {
            for j in blade_indices(blade) {
                let below = blade & ((1u128 << j) - 1);
                let above = blade & !(((1u128 << j) << 1).wrapping_sub(1));
                for &(k, s) in g.bracket_basis(i, j) {
                    let kb = 1u128 << k;
                    let s1 = wedge_sign(below, kb);
                    if s1 == 0 {
                        continue;
                    }
                    let s2 = wedge_sign(below | kb, above);
                    if s2 == 0 {
                        continue;
                    }
                    out.add_term(below | kb | above, c * rat(s * (s1 * s2) as i64));
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ExtTermJson {
    basis: Vec<usize>,
    #[serde(with = "crate::rational::serde_one")]
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct ExtJson {
    dim: usize,
    terms: Vec<ExtTermJson>,
}

impl Serialize for ExtElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExtJson {
            dim: self.n,
            terms: self
                .terms
                .iter()
                .map(|(&b, c)| ExtTermJson {
                    basis: blade_indices(b),
                    coef: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExtJson::deserialize(d)?;
        if raw.dim > MAX_EXTERIOR_DIM {
            return Err(serde::de::Error::custom("dimension too large"));
        }
        let mut u = ExtElement::zero(raw.dim);
        for t in raw.terms {
            if t.basis.iter().any(|&i| i >= raw.dim) {
                return Err(serde::de::Error::custom("basis index out of range"));
            }
            u = u.add(&ExtElement::basis_wedge(raw.dim, &t.basis).scale(&t.coef));
        }
        Ok(u)
    }
}

/// Result of examining the powers of `dx`.
#[derive(Debug, Clone)]
pub struct DxProfile {
    /// Largest `k` with `(dx)^k ≠ 0`.
    pub k_max: usize,
    /// `(dx)^{k_max}`.
    pub witness: ExtElement,
    pub orbit_dim: usize,
    /// Whether `witness` is a nonzero multiple of `w_1 ∧ ⋯ ∧ w_{2k}` for a
    /// basis `w_i` of `[x, g]`.
    pub in_top_wedge: bool,
}

impl DxProfile {
    pub fn consistent(&self) -> bool {
        2 * self.k_max == self.orbit_dim && self.in_top_wedge
    }
}

/// Exterior-algebra data of one Lie algebra: Killing Gram, coboundary, γ and
/// the extended pairing.
#[derive(Debug, Clone)]
pub struct Exterior<'a> {
    g: &'a LieAlgebra,
    ginv: &'a Matrix,
    /// `γ(y_j)` for each coordinate function.
    gamma_vars: Vec<ExtElement>,
}

impl<'a> Exterior<'a> {
    pub fn new(g: &'a LieAlgebra) -> Self {
        assert!(g.dim() <= MAX_EXTERIOR_DIM);
        let ginv = g.killing_inverse();
        let n = g.dim();
        let mut ext = Exterior {
            g,
            ginv,
            gamma_vars: Vec::new(),
        };
        // y_j = B(z_j, ·) with z_j the j-th column of B⁻¹.
        ext.gamma_vars = (0..n)
            .map(|j| {
                let z = LieElement::new((0..n).map(|i| ginv[i][j].clone()).collect());
                ext.coboundary(&z).scale(&rat(-1))
            })
            .collect();
        ext
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.g
    }

    /// `dx ∈ ∧²g`, characterized by `(dx, u ∧ v) = -B(x, [u, v])`.
    pub fn coboundary(&self, x: &LieElement) -> ExtElement {
        let g = self.g;
        let n = g.dim();
        let bx = g.killing_covector(x);
        // K_ab = B(x, [y_a, y_b])
        let mut k = vec![vec![Rational::zero(); n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let v: Rational = g
                    .bracket_basis(a, b)
                    .iter()
                    .filter(|(m, _)| !bx[*m].is_zero())
                    .map(|&(m, c)| &bx[m] * rat(c))
                    .sum();
                k[b][a] = -v.clone();
                k[a][b] = v;
            }
        }
        // C = -B⁻¹ K B⁻¹
        let c = linalg::mat_mul(&linalg::mat_mul(self.ginv, &k), self.ginv);
        let mut out = ExtElement::zero(n);
        for a in 0..n {
            for b in a + 1..n {
                out.add_term((1 << a) | (1 << b), -c[a][b].clone());
            }
        }
        out
    }

    pub fn dx_power_profile(&self, x: &LieElement) -> DxProfile {
        let n = self.g.dim();
        let dx = self.coboundary(x);
        let mut k_max = 0;
        let mut witness = ExtElement::one(n);
        loop {
            let next = witness.wedge(&dx).expect("same ambient");
            if next.is_zero() {
                break;
            }
            witness = next;
            k_max += 1;
        }
        let ad = self.g.ad_matrix(x);
        let (image, _) = linalg::rref(linalg::transpose(&ad));
        let orbit_dim = image.len();
        let mut top = ExtElement::one(n);
        for w in &image {
            top = top
                .wedge(&ExtElement::from_vector(&LieElement::new(w.clone())))
                .expect("same ambient");
        }
        let in_top_wedge = matches!(witness.ratio_to(&top), Some(c) if !c.is_zero());
        DxProfile {
            k_max,
            witness,
            orbit_dim,
            in_top_wedge,
        }
    }

    /// `γ(y_j)`.
    pub fn gamma_var(&self, j: usize) -> &ExtElement {
        &self.gamma_vars[j]
    }

    /// The algebra homomorphism `γ`; maps `P^k(g)` into `∧^{2k} g`.
    pub fn gamma_hom(&self, p: &Poly) -> ExtElement {
        let n = self.g.dim();
        assert_eq!(p.nvars(), n);
        let mut out = ExtElement::zero(n);
        for (m, c) in p.terms() {
            let mut t = ExtElement::scalar(n, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.wedge(&self.gamma_vars[j]).expect("same ambient");
                    if t.is_zero() {
                        break;
                    }
                }
                if t.is_zero() {
                    break;
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `(y_S, y_T) = det B(y_s, y_t)`.
    pub fn blade_pairing(&self, s: Blade, t: Blade) -> Rational {
        if s.count_ones() != t.count_ones() {
            return Rational::zero();
        }
        let si = blade_indices(s);
        let ti = blade_indices(t);
        let killing = self.g.killing();
        let m: Matrix = si
            .iter()
            .map(|&a| ti.iter().map(|&b| rat(killing[a][b])).collect())
            .collect();
        if m.iter().any(|row| row.iter().all(Zero::is_zero)) {
            return Rational::zero();
        }
        linalg::det(&m)
    }

    /// Killing form extended to `∧g` by Gram determinants.
    pub fn ext_pairing(&self, u: &ExtElement, v: &ExtElement) -> Rational {
        let mut s = Rational::zero();
        for (&a, ca) in u.terms() {
            for (&b, cb) in v.terms() {
                if a.count_ones() != b.count_ones() {
                    continue;
                }
                let p = self.blade_pairing(a, b);
                if !p.is_zero() {
                    s += ca * cb * p;
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::KillingDual;
    use crate::rootdata::{CartanType, RootSystem};

    fn alg(s: &str) -> LieAlgebra {
        LieAlgebra::new(RootSystem::new(s.parse::<CartanType>().unwrap()))
    }

    #[test]
    fn wedge_signs_and_nilpotence() {
        let n = 3;
        let e = ExtElement::basis_wedge(n, &[1]);
        assert!(e.wedge(&e).unwrap().is_zero());
        // A1 basis (h, e, f) = (0, 1, 2): e ∧ h ∧ f = -h ∧ e ∧ f
        let ehf = ExtElement::basis_wedge(n, &[1, 0, 2]);
        assert_eq!(ehf, ExtElement::blade(n, 0b111, rat(-1)));
        let eh = ExtElement::basis_wedge(n, &[1, 0]);
        let ef = ExtElement::basis_wedge(n, &[1, 2]);
        assert!(eh.wedge(&ef).unwrap().is_zero());
        assert!(ExtElement::zero(3).wedge(&ExtElement::zero(4)).is_err());
    }

    #[test]
    fn coboundary_contract() {
        let g = alg("A2");
        let ext = Exterior::new(&g);
        let n = g.dim();
        let x = LieElement::from_ints(&[1, -2, 3, 0, 1, 0, 2, -1]);
        let dx = ext.coboundary(&x);
        for a in 0..n {
            for b in a + 1..n {
                let uv = ExtElement::basis_wedge(n, &[a, b]);
                let br = g.bracket(&g.basis_element(a), &g.basis_element(b)).unwrap();
                assert_eq!(ext.ext_pairing(&dx, &uv), -g.killing_form(&x, &br));
            }
        }
        assert!(ext.coboundary(&g.zero()).is_zero());
    }

    #[test]
    fn dh_in_sl2() {
        let g = alg("A1");
        let ext = Exterior::new(&g);
        let dh = ext.coboundary(&g.basis_element(0));
        // [h, g] = span{e, f}
        assert_eq!(dh.len(), 1);
        assert!(dh.coefficient(0b110) != Rational::zero());
        let prof = ext.dx_power_profile(&g.basis_element(1));
        assert_eq!(prof.k_max, 1);
        assert!(prof.consistent());
        let zero = ext.dx_power_profile(&g.zero());
        assert_eq!(zero.k_max, 0);
        assert_eq!(zero.witness, ExtElement::one(3));
        assert!(zero.consistent());
    }

    #[test]
    fn a2_regular_and_minimal() {
        let g = alg("A2");
        let ext = Exterior::new(&g);
        let dx = ext.coboundary(&g.regular_nilpotent());
        assert!(!dx.pow(3).is_zero());
        assert!(dx.pow(4).is_zero());
        let p = ext.dx_power_profile(&g.root_vector(0));
        assert_eq!(p.k_max, 2);
        assert!(p.consistent());
    }

    #[test]
    fn gamma_on_low_degree() {
        let g = alg("A1");
        let ext = Exterior::new(&g);
        let kd = KillingDual::new(&g);
        assert_eq!(ext.gamma_hom(&Poly::one(3)), ExtElement::one(3));
        let h = g.basis_element(0);
        let lh = kd.covector(&h);
        let dh = ext.coboundary(&h);
        assert_eq!(ext.gamma_hom(&lh), dh.scale(&rat(-1)));
        assert!(ext.gamma_hom(&lh.pow(2)).is_zero());
    }

    #[test]
    fn ext_pairing_a1() {
        let g = alg("A1");
        let ext = Exterior::new(&g);
        let ef = ExtElement::basis_wedge(3, &[1, 2]);
        assert_eq!(ext.ext_pairing(&ef, &ef), rat(-16));
        let e = ExtElement::basis_wedge(3, &[1]);
        assert_eq!(ext.ext_pairing(&e, &e), rat(0));
        assert_eq!(ext.ext_pairing(&e, &ef), rat(0));
    }

    #[test]
    fn derivation_action_matches_bracket_on_vectors() {
        let g = alg("B2");
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let v = ExtElement::basis_wedge(g.dim(), &[j]);
                let lhs = v.ad_action(&g, i);
                let rhs = ExtElement::from_vector(
                    &g.bracket(&g.basis_element(i), &g.basis_element(j)).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let u = ExtElement::basis_wedge(5, &[3, 1]).scale(&crate::rational::frac(2, 3));
        let s = serde_json::to_string(&u).unwrap();
        let back: ExtElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }
}
