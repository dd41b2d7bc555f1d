//! Chevalley bases and the Lie algebra built from a root system.
//!
//! The basis is ordered `h_1, …, h_ℓ`, then `e_φ` for the positive roots in
//! their fixed order, then `e_{-φ}` in the same order. Structure constants are
//! integers: `[e_α, e_β] = N_{α,β} e_{α+β}` with `N_{α,β} = ±(p+1)`, the sign
//! fixed by declaring `N` positive on every extraspecial pair and propagating
//! through the standard relations between structure constants.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{rat, Rational};
use crate::rootdata::{RootIndex, RootSystem};

/// An element of the Lie algebra as exact coordinates over the Chevalley basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LieElement {
    #[serde(with = "crate::rational::serde_vec")]
    coords: Vec<Rational>,
}

impl LieElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        LieElement { coords }
    }

    pub fn zero(n: usize) -> Self {
        LieElement {
            coords: vec![Rational::zero(); n],
        }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut x = Self::zero(n);
        x.coords[i] = Rational::one();
        x
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LieElement {
            coords: v.iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        LieElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> LieElement {
        LieElement {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn axpy(&mut self, c: &Rational, other: &LieElement) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// Outcome of an exhaustive structural check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCheck {
    pub checked: usize,
    pub failures: usize,
}

impl StructureCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    rs: RootSystem,
    n: usize,
    /// `table[i * n + j]` lists `(k, c_{ij}^k)` with `[y_i, y_j] = Σ c_{ij}^k y_k`.
    table: Vec<Vec<(usize, i64)>>,
    killing: Vec<Vec<i64>>,
    killing_inv: Matrix,
    extraspecial: Vec<Option<(RootIndex, RootIndex)>>,
}

impl LieAlgebra {
    pub fn new(rs: RootSystem) -> Self {
        let l = rs.rank();
        let r = rs.r();
        let n = rs.dim();
        let mut carter = StructureConstants::new(&rs);
        let mut table = vec![Vec::new(); n * n];

        for a in 0..2 * r {
            let ra = rs.root(a);
            let ea = l + a;
            for i in 0..l {
                let c = rs.coroot_pairing(ra.coords(), i);
                if c != 0 {
                    table[i * n + ea] = vec![(ea, c)];
                    table[ea * n + i] = vec![(ea, -c)];
                }
            }
            for b in 0..2 * r {
                let rb = rs.root(b);
                let eb = l + b;
                let sum = ra.add(&rb);
                if sum.coords().iter().all(|&c| c == 0) {
                    // [e_α, e_{-α}] = h_α
                    let h = rs.coroot(ra.coords());
                    table[ea * n + eb] = h
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect();
                } else if let Some(s) = rs.index_of(sum.coords()) {
                    table[ea * n + eb] = vec![(l + s, carter.get(a, b))];
                }
            }
        }

        let killing = killing_from_table(&table, n);
        let killing_rat: Matrix = killing
            .iter()
            .map(|row| row.iter().map(|&v| rat(v)).collect())
            .collect();
        let killing_inv = linalg::inverse(&killing_rat).expect("Killing form is nondegenerate");
        let extraspecial = carter.extraspecial.clone();

        LieAlgebra {
            rs,
            n,
            table,
            killing,
            killing_inv,
            extraspecial,
        }
    }

    pub fn rootsys(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Basis position of `h_i`.
    pub fn h_index(&self, i: usize) -> usize {
        i
    }

    /// Basis position of the root vector for a signed root index.
    pub fn root_vector_index(&self, root: RootIndex) -> usize {
        self.rank() + root
    }

    /// Signed root index of a basis position, `None` for Cartan elements.
    pub fn root_of_basis(&self, i: usize) -> Option<RootIndex> {
        (i >= self.rank()).then(|| i - self.rank())
    }

    pub fn root_vector(&self, root: RootIndex) -> LieElement {
        LieElement::basis(self.n, self.root_vector_index(root))
    }

    pub fn basis_element(&self, i: usize) -> LieElement {
        LieElement::basis(self.n, i)
    }

    pub fn zero(&self) -> LieElement {
        LieElement::zero(self.n)
    }

    pub fn labels(&self) -> Vec<String> {
        let l = self.rank();
        let r = self.rs.r();
        (0..self.n)
            .map(|i| {
                if i < l {
                    format!("h{}", i + 1)
                } else if i < l + r {
                    format!("e{}", self.rs.root(i - l))
                } else {
                    format!("f{}", self.rs.root(i - l - r).neg())
                }
            })
            .collect()
    }

    /// Sparse `[y_i, y_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i * self.n + j]
    }

    /// Extraspecial pair of a positive non-simple root.
    pub fn extraspecial_pair(&self, root: RootIndex) -> Option<(RootIndex, RootIndex)> {
        self.extraspecial.get(root).copied().flatten()
    }

    fn check_dim(&self, x: &LieElement) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut out = vec![Rational::zero(); self.n];
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for &(k, c) in self.bracket_basis(i, j) {
                    out[k] += &ab * rat(c);
                }
            }
        }
        Ok(LieElement::new(out))
    }

    /// `[y_i, x]` for a basis element `y_i`.
    pub fn bracket_with_basis(&self, i: usize, x: &LieElement) -> LieElement {
        let mut out = vec![Rational::zero(); self.n];
        for (j, b) in x.support() {
            for &(k, c) in self.bracket_basis(i, j) {
                out[k] += b * rat(c);
            }
        }
        LieElement::new(out)
    }

    /// Matrix of `ad x`; column `j` holds the coordinates of `[x, y_j]`.
    pub fn ad_matrix(&self, x: &LieElement) -> Matrix {
        let mut m = vec![vec![Rational::zero(); self.n]; self.n];
        for (i, a) in x.support() {
            for j in 0..self.n {
                for &(k, c) in self.bracket_basis(i, j) {
                    m[k][j] += a * rat(c);
                }
            }
        }
        m
    }

    /// Integer Gram matrix `B(y_i, y_j) = tr(ad y_i ∘ ad y_j)`.
    pub fn killing(&self) -> &[Vec<i64>] {
        &self.killing
    }

    pub fn killing_inverse(&self) -> &Matrix {
        &self.killing_inv
    }

    pub fn killing_form(&self, x: &LieElement, y: &LieElement) -> Rational {
        let mut s = Rational::zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let g = self.killing[i][j];
                if g != 0 {
                    s += a * b * rat(g);
                }
            }
        }
        s
    }

    /// Coefficients of the linear function `B(x, ·)` in the coordinate functions.
    pub fn killing_covector(&self, x: &LieElement) -> Vec<Rational> {
        (0..self.n)
            .map(|j| {
                x.support()
                    .filter(|(i, _)| self.killing[*i][j] != 0)
                    .map(|(i, a)| a * rat(self.killing[i][j]))
                    .sum()
            })
            .collect()
    }

    /// The element `z` with `B(z, ·)` equal to the given linear function.
    pub fn from_covector(&self, cov: &[Rational]) -> LieElement {
        LieElement::new(linalg::mat_vec(&self.killing_inv, cov))
    }

    /// `dim [g, x]`, the exact rank of `ad x`.
    pub fn orbit_dim(&self, x: &LieElement) -> usize {
        if x.is_zero() {
            return 0;
        }
        linalg::rank(&self.ad_matrix(x))
    }

    /// Sum of the simple root vectors.
    pub fn regular_nilpotent(&self) -> LieElement {
        let mut x = self.zero();
        for i in 0..self.rank() {
            x.coords[self.root_vector_index(i)] = Rational::one();
        }
        x
    }

    /// `exp(t · ad y_i)(x)` for a nilpotent basis element `y_i`.
    pub fn ad_exp(&self, i: usize, t: &Rational, x: &LieElement) -> LieElement {
        let mut out = x.clone();
        let mut term = x.clone();
        let mut k = 1i64;
        loop {
            term = self.bracket_with_basis(i, &term).scale(&(t / rat(k)));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
            k += 1;
            assert!(k <= self.n as i64 + 1, "ad_exp on a non-nilpotent element");
        }
        out
    }

    pub fn check_antisymmetry(&self) -> StructureCheck {
        let mut check = StructureCheck::default();
        for i in 0..self.n {
            for j in 0..self.n {
                check.checked += 1;
                let mut a: Vec<(usize, i64)> = self.bracket_basis(i, j).to_vec();
                let mut b: Vec<(usize, i64)> = self
                    .bracket_basis(j, i)
                    .iter()
                    .map(|&(k, c)| (k, -c))
                    .collect();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    check.failures += 1;
                }
            }
        }
        check
    }

    /// Jacobi identity on every unordered triple of distinct basis elements.
    pub fn check_jacobi(&self) -> StructureCheck {
        let n = self.n;
        let mut check = StructureCheck::default();
        let inner = |i: usize, j: usize, k: usize, acc: &mut HashMap<usize, i64>| {
            // [y_i, [y_j, y_k]]
            for &(m, c) in self.bracket_basis(j, k) {
                for &(p, d) in self.bracket_basis(i, m) {
                    *acc.entry(p).or_insert(0) += c * d;
                }
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = HashMap::new();
                    inner(i, j, k, &mut acc);
                    inner(j, k, i, &mut acc);
                    inner(k, i, j, &mut acc);
                    check.checked += 1;
                    if acc.values().any(|&v| v != 0) {
                        check.failures += 1;
                    }
                }
            }
        }
        check
    }

    /// `B([y_i, y_j], y_k) = B(y_i, [y_j, y_k])` on all basis triples.
    pub fn check_killing_invariance(&self) -> StructureCheck {
        let n = self.n;
        let mut check = StructureCheck::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs: i64 = self
                        .bracket_basis(i, j)
                        .iter()
                        .map(|&(m, c)| c * self.killing[m][k])
                        .sum();
                    let rhs: i64 = self
                        .bracket_basis(j, k)
                        .iter()
                        .map(|&(m, c)| c * self.killing[i][m])
                        .sum();
                    check.checked += 1;
                    if lhs != rhs {
                        check.failures += 1;
                    }
                }
            }
        }
        check
    }

    /// Chevalley normalization: `N_{α,β} = ±(p+1)` and `[e_α, e_{-α}] = h_α`.
    pub fn check_chevalley_normalization(&self) -> StructureCheck {
        let rs = &self.rs;
        let l = self.rank();
        let mut check = StructureCheck::default();
        for a in 0..2 * rs.r() {
            for b in 0..2 * rs.r() {
                let ra = rs.root(a);
                let rb = rs.root(b);
                let Some(s) = rs.index_of(ra.add(&rb).coords()) else {
                    continue;
                };
                check.checked += 1;
                let p = string_length(rs, &ra, &rb);
                let entry = self.bracket_basis(l + a, l + b);
                if entry.len() != 1 || entry[0].0 != l + s || entry[0].1.abs() != p + 1 {
                    check.failures += 1;
                }
            }
        }
        check
    }
}

/// Largest `p` with `β - pα` a root.
fn string_length(
    rs: &RootSystem,
    alpha: &crate::rootdata::Root,
    beta: &crate::rootdata::Root,
) -> i64 {
    let mut p = 0;
    let mut cur = beta.sub(alpha);
    while rs.is_root(cur.coords()) {
        p += 1;
        cur = cur.sub(alpha);
    }
    p
}

fn killing_from_table(table: &[Vec<(usize, i64)>], n: usize) -> Vec<Vec<i64>> {
    // ad[i][k][m]: coefficient of y_k in [y_i, y_m]
    let mut ad = vec![vec![vec![0i64; n]; n]; n];
    for i in 0..n {
        for m in 0..n {
            for &(k, c) in &table[i * n + m] {
                ad[i][k][m] += c;
            }
        }
    }
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut t = 0i64;
            for k in 0..n {
                for m in 0..n {
                    let x = ad[i][k][m];
                    if x != 0 {
                        t += x * ad[j][m][k];
                    }
                }
            }
            b[i][j] = t;
            b[j][i] = t;
        }
    }
    b
}

/// Structure constants `N_{α,β}` determined by positive signs on extraspecial
/// pairs.
struct StructureConstants<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(RootIndex, RootIndex), i64>,
    extraspecial: Vec<Option<(RootIndex, RootIndex)>>,
}

impl<'a> StructureConstants<'a> {
    fn new(rs: &'a RootSystem) -> Self {
        let r = rs.r();
        let pos = rs.positive_roots();
        let extraspecial = (0..r)
            .map(|xi| {
                (0..xi).find_map(|a| {
                    let rest = pos[xi].sub(&pos[a]);
                    rs.index_of(rest.coords())
                        .filter(|&b| b < r)
                        .map(|b| (a, b))
                })
            })
            .collect();
        StructureConstants {
            rs,
            memo: HashMap::new(),
            extraspecial,
        }
    }

    fn norm(&self, idx: RootIndex) -> i64 {
        let root = self.rs.root(idx);
        self.rs.inner(root.coords(), root.coords())
    }

    fn get(&mut self, a: RootIndex, b: RootIndex) -> i64 {
        if let Some(&v) = self.memo.get(&(a, b)) {
            return v;
        }
        let rs = self.rs;
        let r = rs.r();
        let ra = rs.root(a);
        let rb = rs.root(b);
        let s = rs
            .index_of(ra.add(&rb).coords())
            .expect("structure constant requested for a non-root sum");
        let v = if a < r && b < r {
            if a > b {
                -self.get(b, a)
            } else {
                let (ap, bp) =
                    self.extraspecial[s].expect("non-simple root has an extraspecial pair");
                if a == ap {
                    string_length(rs, &ra, &rb) + 1
                } else {
                    // Four-root relation with (α, β, -α', -β').
                    let rap = rs.root(ap);
                    let nap = rs.negate_index(ap);
                    let nbp = rs.negate_index(bp);
                    let mut acc = Ratio::<i64>::zero();
                    let d1 = rb.sub(&rap);
                    if let Some(i1) = rs.index_of(d1.coords()) {
                        let t = self.get(b, nap) * self.get(a, nbp);
                        acc += Ratio::new(t, self.norm(i1));
                    }
                    let d2 = ra.sub(&rap);
                    if let Some(i2) = rs.index_of(d2.coords()) {
                        let t = self.get(nap, a) * self.get(b, nbp);
                        acc += Ratio::new(t, self.norm(i2));
                    }
                    let val = -acc * Ratio::from_integer(self.norm(s))
                        / Ratio::from_integer(self.get(nap, nbp));
                    assert!(val.is_integer(), "non-integral structure constant");
                    val.to_integer()
                }
            }
        } else if a >= r && b >= r {
            -self.get(a - r, b - r)
        } else {
            // α + β + γ = 0 relates the mixed pair to a same-sign pair.
            let c = rs.negate_index(s);
            let (num, den) = if (b < r) == (c < r) {
                (self.get(b, c) * self.norm(c), self.norm(a))
            } else {
                (self.get(c, a) * self.norm(c), self.norm(b))
            };
            assert_eq!(num % den, 0, "non-integral structure constant");
            num / den
        };
        self.memo.insert((a, b), v);
        v
    }
}

/// Sampled elements of one stratum `g^(2j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Samples {
    pub stratum: usize,
    pub elements: Vec<LieElement>,
    /// Set when fewer than the requested number of elements were found.
    pub short: bool,
}

/// Draws up to `count` distinct elements `x` with `orbit_dim(x) = stratum`.
///
/// Candidates come from structured families (root vectors, sums of root
/// vectors, semisimple points on intersections of root hyperplanes, and
/// semisimple plus commuting nilpotent) and random rational combinations,
/// all optionally conjugated by `exp(t ad e_φ)`. The sequence is fixed by
/// `seed`.
pub fn sample_elements(g: &LieAlgebra, stratum: usize, count: usize, seed: u64) -> Result<Samples> {
    let r = g.rootsys().r();
    if stratum % 2 == 1 || stratum > 2 * r {
        return Err(Error::UnreachableStratum { stratum });
    }
    if stratum == 0 {
        return Ok(Samples {
            stratum,
            elements: vec![g.zero()],
            short: count > 1,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (stratum as u64).wrapping_mul(0x9e37_79b9));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |x: LieElement, out: &mut Vec<LieElement>| {
        if out.len() < count && g.orbit_dim(&x) == stratum && seen.insert(x.clone()) {
            out.push(x);
        }
    };

    for x in structured_candidates(g) {
        consider(x, &mut out);
    }
    let attempts = 60 * count + 400;
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let x = random_candidate(g, &mut rng);
        consider(x, &mut out);
    }
    if out.is_empty() {
        return Err(Error::UnreachableStratum { stratum });
    }
    let short = out.len() < count;
    Ok(Samples {
        stratum,
        elements: out,
        short,
    })
}

fn structured_candidates(g: &LieAlgebra) -> Vec<LieElement> {
    let rs = g.rootsys();
    let r = rs.r();
    let l = g.rank();
    let mut v = Vec::new();
    for a in 0..2 * r {
        v.push(g.root_vector(a));
    }
    v.push(g.regular_nilpotent());
    let mut prefix = g.zero();
    for a in 0..r {
        prefix = prefix.add(&g.root_vector(a));
        v.push(prefix.clone());
    }
    for i in 0..l {
        v.push(g.basis_element(i));
    }
    v
}

/// Coefficients `c` of `h = Σ c_i h_i` spanning `{h : α(h) = 0 ∀α ∈ roots}`.
fn hyperplane_intersection(g: &LieAlgebra, roots: &[RootIndex]) -> Matrix {
    let rs = g.rootsys();
    let l = g.rank();
    let rows: Matrix = roots
        .iter()
        .map(|&a| {
            let root = rs.root(a);
            (0..l)
                .map(|i| rat(rs.coroot_pairing(root.coords(), i)))
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| if i == j { rat(1) } else { rat(0) })
                    .collect()
            })
            .collect();
    }
    linalg::nullspace(&rows, l)
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    let v = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn random_candidate(g: &LieAlgebra, rng: &mut ChaCha8Rng) -> LieElement {
    let rs = g.rootsys();
    let r = rs.r();
    let l = g.rank();
    let n = g.dim();
    let mut x = match rng.gen_range(0..4) {
        // semisimple on a random intersection of root hyperplanes
        0 | 3 => {
            let mut roots: Vec<RootIndex> = (0..r).collect();
            roots.shuffle(rng);
            let take = rng.gen_range(0..=l.min(r));
            roots.truncate(take);
            let basis = hyperplane_intersection(g, &roots);
            let mut h = g.zero();
            for b in &basis {
                let c = rat(small_nonzero(rng));
                for i in 0..l {
                    h.coords[i] += &c * &b[i];
                }
            }
            if rng.gen_range(0..4) == 3 {
                // add a nilpotent element of the centralizer of h
                for a in 0..r {
                    let root = rs.root(a);
                    let val: Rational = (0..l)
                        .map(|i| &h.coords[i] * rat(rs.coroot_pairing(root.coords(), i)))
                        .sum();
                    if val.is_zero() && rng.gen_bool(0.5) {
                        h.coords[g.root_vector_index(a)] = rat(small_nonzero(rng));
                    }
                }
            }
            h
        }
        // nilpotent from positive root vectors
        1 => {
            let mut x = g.zero();
            for a in 0..r {
                if rng.gen_bool(0.4) {
                    x.coords[g.root_vector_index(a)] = rat(small_nonzero(rng));
                }
            }
            x
        }
        // sparse random element
        _ => {
            let mut x = g.zero();
            let density = rng.gen_range(0.1..0.9);
            for c in x.coords.iter_mut() {
                if rng.gen_bool(density) {
                    *c = rat(small_nonzero(rng));
                }
            }
            x
        }
    };
    let conjugations = rng.gen_range(0..3);
    for _ in 0..conjugations {
        let idx = l + rng.gen_range(0..2 * r);
        let t = rat(small_nonzero(rng));
        x = g.ad_exp(idx, &t, &x);
    }
    debug_assert_eq!(x.dim(), n);
    x
}
