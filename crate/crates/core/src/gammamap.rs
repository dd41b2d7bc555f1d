//! The matching-sum map `Γ: ∧^{2k} g → P^k(g)` and the spaces `R^k(g)`.
//!
//! For `x_1, …, x_{2k}` the image is
//! `Σ_ν sg(ν) Π_i B([x_{ν(2i-1)}, x_{ν(2i)}], ·)` over the perfect matchings
//! `ν` of `{1, …, 2k}`, each written canonically. Carrying `sg(ν)` is the
//! same as reorienting brackets so that every coset representative is even.
//! With this normalization `Γ` is exactly the transpose of `γ` under the
//! Killing pairings.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::polyring::{lie_derivative, KillingDual, Poly, PolySpace};

/// A perfect matching of `{0, …, 2k-1}` in canonical form: pairs ascending,
/// first elements ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Sign of the permutation `(a_1, b_1, a_2, b_2, …)`.
    pub fn sign(&self) -> i64 {
        let flat: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut inv = 0;
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                if flat[i] > flat[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("({},{})", a + 1, b + 1))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// All `(2k-1)!!` perfect matchings of `{0, …, 2k-1}`, lexicographic.
pub fn enumerate_matchings(k: usize) -> Vec<Matching> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(Matching { pairs: cur.clone() });
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..2 * k).collect(), &mut Vec::new(), &mut out);
    out
}

/// `(2k-1)!!`.
pub fn double_factorial_odd(k: usize) -> u128 {
    (1..=k as u128).map(|i| 2 * i - 1).product()
}

/// Linear forms `B([x_a, x_b], ·)` for all `a < b`.
fn bracket_forms(
    g: &LieAlgebra,
    kd: &KillingDual,
    xs: &[LieElement],
) -> Result<HashMap<(usize, usize), Poly>> {
    let mut forms = HashMap::new();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            let br = g.bracket(&xs[a], &xs[b])?;
            forms.insert((a, b), kd.covector(&br));
        }
    }
    Ok(forms)
}

/// `Γ(x_1 ∧ ⋯ ∧ x_{2k})` with `c_k = 1`.
///
/// Evaluated by expanding along the first position and memoizing on the set
/// of remaining positions, which visits `2^{2k}` subsets instead of every
/// matching.
pub fn gamma_map(g: &LieAlgebra, xs: &[LieElement]) -> Result<Poly> {
    if xs.len() % 2 == 1 {
        return Err(Error::OddLength(xs.len()));
    }
    let kd = KillingDual::new(g);
    gamma_map_with(g, &kd, xs)
}

pub fn gamma_map_with(g: &LieAlgebra, kd: &KillingDual, xs: &[LieElement]) -> Result<Poly> {
    if xs.len() % 2 == 1 {
        return Err(Error::OddLength(xs.len()));
    }
    assert!(xs.len() <= 64);
    let forms = bracket_forms(g, kd, xs)?;
    let n = g.dim();
    let mut memo: HashMap<u64, Poly> = HashMap::new();
    fn rec(
        mask: u64,
        n: usize,
        forms: &HashMap<(usize, usize), Poly>,
        memo: &mut HashMap<u64, Poly>,
    ) -> Poly {
        if mask == 0 {
            return Poly::one(n);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut out = Poly::zero(n);
        let mut between = 0;
        let mut scan = rest;
        while scan != 0 {
            let j = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let form = &forms[&(i, j)];
            if !form.is_zero() {
                let sub = rec(rest & !(1 << j), n, forms, memo);
                if !sub.is_zero() {
                    let t = form * &sub;
                    out = if between % 2 == 0 {
                        &out + &t
                    } else {
                        &out - &t
                    };
                }
            }
            between += 1;
        }
        memo.insert(mask, out.clone());
        out
    }
    let full = if xs.len() == 64 {
        u64::MAX
    } else {
        (1u64 << xs.len()) - 1
    };
    Ok(rec(full, n, &forms, &mut memo))
}

/// `Γ` evaluated term by term over [`enumerate_matchings`].
pub fn gamma_map_by_matchings(g: &LieAlgebra, xs: &[LieElement]) -> Result<Poly> {
    if xs.len() % 2 == 1 {
        return Err(Error::OddLength(xs.len()));
    }
    let kd = KillingDual::new(g);
    let forms = bracket_forms(g, &kd, xs)?;
    let mut out = Poly::zero(g.dim());
    for m in enumerate_matchings(xs.len() / 2) {
        let mut t = Poly::constant(g.dim(), crate::rational::rat(m.sign()));
        for &(a, b) in m.pairs() {
            t = &t * &forms[&(a, b)];
        }
        out = &out + &t;
    }
    Ok(out)
}

/// Index subsets of `{0..n}` of size `k`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `R^k(g)`: the span of `Γ` over all basis wedges of degree `2k`.
pub fn rk_space(g: &LieAlgebra, k: usize) -> PolySpace {
    let n = g.dim();
    if 2 * k > n {
        return PolySpace::span(n, std::iter::empty());
    }
    let kd = KillingDual::new(g);
    let images: Vec<Poly> = subsets(n, 2 * k)
        .par_iter()
        .map(|s| {
            let xs: Vec<LieElement> = s.iter().map(|&i| g.basis_element(i)).collect();
            gamma_map_with(g, &kd, &xs).expect("even length")
        })
        .collect();
    PolySpace::span(n, images)
}

/// Whether a span is stable under the derivations `x ↦ [y_i, x]`.
pub fn is_g_stable(g: &LieAlgebra, space: &PolySpace) -> bool {
    (0..g.dim()).into_par_iter().all(|i| {
        space
            .basis()
            .iter()
            .all(|p| space.contains(&lie_derivative(g, i, p)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyViolation {
    pub element: LieElement,
    pub orbit_dim: usize,
    /// True when every basis polynomial should have vanished.
    pub expected_vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub k: usize,
    pub space_dim: usize,
    pub checked: usize,
    pub vanishing: usize,
    pub nonvanishing: usize,
    pub violations: Vec<VarietyViolation>,
}

impl VarietyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the zero locus of `R^k(g)` against orbit dimensions: samples with
/// `dim [g, x] < 2k` must annihilate every basis polynomial, the others must
/// not.
pub fn variety_check(
    g: &LieAlgebra,
    k: usize,
    space: &PolySpace,
    samples: &[LieElement],
) -> VarietyReport {
    let results: Vec<(usize, bool)> = samples
        .par_iter()
        .map(|x| {
            let od = g.orbit_dim(x);
            let vanishes = space.basis().iter().all(|p| p.eval(x.coords()).is_zero());
            (od, vanishes)
        })
        .collect();
    let mut report = VarietyReport {
        k,
        space_dim: space.dim(),
        checked: samples.len(),
        vanishing: 0,
        nonvanishing: 0,
        violations: Vec::new(),
    };
    for (x, (od, vanishes)) in samples.iter().zip(results) {
        let expected = od < 2 * k;
        if vanishes {
            report.vanishing += 1;
        } else {
            report.nonvanishing += 1;
        }
        if vanishes != expected {
            report.violations.push(VarietyViolation {
                element: x.clone(),
                orbit_dim: od,
                expected_vanishing: expected,
            });
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointnessReport {
    pub k: usize,
    pub checked: usize,
    pub failures: usize,
}

impl AdjointnessReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Compares `(Γ(u), p)` with `(u, γ(p))` on random basis wedges `u` of degree
/// `2k` and random monomials `p` of degree `k`.
pub fn check_adjointness(g: &LieAlgebra, k: usize, trials: usize, seed: u64) -> AdjointnessReport {
    use crate::exterior::{ExtElement, Exterior};
    use crate::polyring::Monomial;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let n = g.dim();
    let mut report = AdjointnessReport {
        k,
        checked: 0,
        failures: 0,
    };
    if 2 * k > n {
        return report;
    }
    let ext = Exterior::new(g);
    let kd = KillingDual::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut idx = sample(&mut rng, n, 2 * k).into_vec();
        idx.sort_unstable();
        let mut exps = vec![0u8; n];
        for _ in 0..k {
            exps[rng.gen_range(0..n)] += 1;
        }
        let p = Poly::from_terms(
            n,
            [(Monomial::from_exponents(exps), crate::rational::rat(1))],
        );
        let xs: Vec<LieElement> = idx.iter().map(|&i| g.basis_element(i)).collect();
        let lhs = kd
            .pairing(&gamma_map_with(g, &kd, &xs).expect("even length"), &p)
            .expect("same ring");
        let rhs = ext.ext_pairing(&ExtElement::basis_wedge(n, &idx), &ext.gamma_hom(&p));
        report.checked += 1;
        if lhs != rhs {
            report.failures += 1;
        }
    }
    report
}
