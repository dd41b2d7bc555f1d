//! Standard polynomial identities on matrix algebras and their Lie-theoretic
//! refinements: the alternating sum `[[x_1, …, x_k]]`, nilpotency indices of
//! representations, and randomized and exhaustive verification.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::gammamap::subsets;
use crate::invariants::MatrixRep;
use crate::rational::{rat, Rational};

/// Largest degree accepted by [`std_identity`]; the sum has `k!` terms.
pub const MAX_IDENTITY_DEGREE: usize = 10;

/// A dense `N×N` matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    #[serde(with = "crate::rational::serde_vec")]
    data: Vec<Rational>,
}

impl SquareMatrix {
    pub fn zero(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// The matrix unit `E_{ij}` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.data[i * n + j] = Rational::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| rat(c)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn axpy(&mut self, c: &Rational, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.data[i * self.n + i].clone()).sum()
    }

    pub fn is_skew(&self) -> bool {
        self.add(&self.transpose()).is_zero()
    }

    /// Least `k` with `self^k = 0`, if it is at most `n`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut p = Self::identity(self.n);
        for k in 1..=self.n.max(1) {
            p = p.mul(self);
            if p.is_zero() {
                return Some(k);
            }
        }
        if self.n == 0 {
            Some(0)
        } else {
            None
        }
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(crate::rational::to_string).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `[[x_1, …, x_k]] = Σ_σ sg(σ) x_{σ(1)} ⋯ x_{σ(k)}`.
///
/// Prefix products are shared between all permutations whose prefixes use
/// the same set of arguments: with `F(S)` the signed sum over orderings of
/// `S`, `F(S) = Σ_{j∈S} (-1)^{#{i∈S : i>j}} F(S∖{j}) x_j`. This costs
/// `k·2^{k-1}` products instead of roughly `e·k!`.
pub fn std_identity(xs: &[SquareMatrix]) -> Result<SquareMatrix> {
    let k = xs.len();
    if k == 0 {
        return Err(Error::Config(
            "standard identity needs at least one argument".into(),
        ));
    }
    if k > MAX_IDENTITY_DEGREE {
        return Err(Error::Budget(format!(
            "degree {k} exceeds the limit {MAX_IDENTITY_DEGREE} for the standard identity"
        )));
    }
    let n = xs[0].n;
    if let Some(bad) = xs.iter().find(|x| x.n != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.n,
        });
    }
    let full = (1usize << k) - 1;
    let mut table: Vec<Option<SquareMatrix>> = vec![None; full + 1];
    table[0] = Some(SquareMatrix::identity(n));
    for size in 1..=k {
        let layer: Vec<usize> = (1..=full)
            .filter(|m| m.count_ones() as usize == size)
            .collect();
        let computed: Vec<(usize, SquareMatrix)> = layer
            .par_iter()
            .map(|&mask| {
                let mut acc = SquareMatrix::zero(n);
                for j in 0..k {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let prev = table[mask & !(1 << j)]
                        .as_ref()
                        .expect("smaller layer done");
                    if prev.is_zero() {
                        continue;
                    }
                    let above = (mask >> (j + 1)).count_ones();
                    let sign = if above % 2 == 0 {
                        Rational::one()
                    } else {
                        -Rational::one()
                    };
                    acc.axpy(&sign, &prev.mul(&xs[j]));
                }
                (mask, acc)
            })
            .collect();
        for (mask, m) in computed {
            table[mask] = Some(m);
        }
        if size >= 2 {
            for mask in (1..=full).filter(|m| m.count_ones() as usize == size - 1) {
                table[mask] = None;
            }
        }
    }
    Ok(table[full].take().expect("full set computed"))
}

/// `ε(π)`: the least `k` with `π(w)^k = 0` for every nilpotent `w`.
///
/// Evaluated on the regular nilpotent element, whose orbit is dense in the
/// nilpotent cone; every root vector is checked not to exceed it.
pub fn epsilon(rep: &MatrixRep, g: &LieAlgebra) -> Result<usize> {
    let not_nil = |what: &str| Error::Representation(format!("image of {what} is not nilpotent"));
    let e = rep.image(&g.regular_nilpotent());
    let eps = e
        .nilpotency_index()
        .ok_or_else(|| not_nil("the regular nilpotent"))?;
    for a in 0..2 * g.rootsys().r() {
        let idx = rep
            .image(&g.root_vector(a))
            .nilpotency_index()
            .ok_or_else(|| not_nil("a root vector"))?;
        if idx > eps {
            return Err(Error::Representation(format!(
                "root vector has nilpotency index {idx} above the regular nilpotent's {eps}"
            )));
        }
    }
    Ok(eps)
}

fn random_int(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9))
}

pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n);
    for v in m.data.iter_mut() {
        *v = random_int(rng);
    }
    m
}

pub fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = random_int(rng);
            m.set(j, i, -v.clone());
            m.set(i, j, v);
        }
    }
    m
}

pub fn random_lie_element(g: &LieAlgebra, rng: &mut ChaCha8Rng) -> LieElement {
    LieElement::new((0..g.dim()).map(|_| random_int(rng)).collect())
}

/// Which family of matrices an identity case draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixClass {
    Full,
    Skew,
    Image,
    MatrixUnits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub theorem: String,
    pub label: String,
    pub class: MatrixClass,
    pub size: usize,
    pub degree: usize,
    pub trials: usize,
    pub nonzero: usize,
    /// Whether some tuple of one degree lower gave a nonzero value. Only
    /// informational.
    pub lower_degree_witness: Option<bool>,
}

impl IdentityCase {
    pub fn passed(&self) -> bool {
        self.nonzero == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardReport {
    pub cases: Vec<IdentityCase>,
}

impl StandardReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(IdentityCase::passed)
    }
}

pub struct RepCase<'a> {
    pub label: String,
    pub algebra: &'a LieAlgebra,
    pub rep: &'a MatrixRep,
}

pub struct StandardConfig<'a> {
    /// Sizes `n` for the degree `2n` identity on all of `M(n)`.
    pub full_sizes: Vec<usize>,
    /// Even sizes `n` for the degree `2n-2` identity on skew matrices.
    pub skew_sizes: Vec<usize>,
    /// Representations checked at degree `2ε(π)`.
    pub reps: Vec<RepCase<'a>>,
    pub trials: usize,
    pub seed: u64,
    /// Also run the full sizes exhaustively over matrix units (`n ≤ 3`).
    pub matrix_units: bool,
}

fn run_random<F>(degree: usize, trials: usize, seed: u64, draw: F) -> Result<(usize, Option<bool>)>
where
    F: Fn(&mut ChaCha8Rng) -> SquareMatrix + Sync,
{
    let nonzero = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let xs: Vec<SquareMatrix> = (0..degree).map(|_| draw(&mut rng)).collect();
            Ok(!std_identity(&xs)?.is_zero())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    let witness = if degree >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut found = false;
        for _ in 0..trials.clamp(1, 10) {
            let xs: Vec<SquareMatrix> = (0..degree - 1).map(|_| draw(&mut rng)).collect();
            if !std_identity(&xs)?.is_zero() {
                found = true;
                break;
            }
        }
        Some(found)
    } else {
        None
    };
    Ok((nonzero, witness))
}

/// The degree `2n` identity on every `2n`-subset of matrix units of `M(n)`.
///
/// Tuples with a repeated unit vanish by alternation, and reordering only
/// changes the sign, so subsets cover all tuples.
pub fn check_matrix_units(n: usize) -> Result<IdentityCase> {
    if n > 3 {
        return Err(Error::Budget(format!(
            "matrix-unit sweep limited to n ≤ 3, got {n}"
        )));
    }
    let units: Vec<SquareMatrix> = (0..n * n)
        .map(|u| SquareMatrix::unit(n, u / n, u % n))
        .collect();
    let sets = subsets(n * n, 2 * n);
    let nonzero = sets
        .par_iter()
        .map(|s| {
            let xs: Vec<SquareMatrix> = s.iter().map(|&u| units[u].clone()).collect();
            std_identity(&xs).map(|m| !m.is_zero())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok(IdentityCase {
        theorem: "al1".into(),
        label: format!("M({n}) matrix units"),
        class: MatrixClass::MatrixUnits,
        size: n,
        degree: 2 * n,
        trials: sets.len(),
        nonzero,
        lower_degree_witness: None,
    })
}

pub fn verify_standard_theorems(cfg: &StandardConfig) -> Result<StandardReport> {
    let mut cases = Vec::new();
    for &n in &cfg.full_sizes {
        let (nonzero, witness) =
            run_random(2 * n, cfg.trials, cfg.seed, |rng| random_matrix(n, rng))?;
        cases.push(IdentityCase {
            theorem: "al1".into(),
            label: format!("M({n})"),
            class: MatrixClass::Full,
            size: n,
            degree: 2 * n,
            trials: cfg.trials,
            nonzero,
            lower_degree_witness: witness,
        });
        if cfg.matrix_units && n <= 3 {
            cases.push(check_matrix_units(n)?);
        }
    }
    for &n in &cfg.skew_sizes {
        if n % 2 == 1 || n < 2 {
            return Err(Error::Config(format!(
                "skew identity needs an even size ≥ 2, got {n}"
            )));
        }
        let degree = 2 * n - 2;
        let (nonzero, witness) =
            run_random(degree, cfg.trials, cfg.seed, |rng| random_skew(n, rng))?;
        cases.push(IdentityCase {
            theorem: "al2".into(),
            label: format!("so({n})"),
            class: MatrixClass::Skew,
            size: n,
            degree,
            trials: cfg.trials,
            nonzero,
            lower_degree_witness: witness,
        });
    }
    for case in &cfg.reps {
        let eps = epsilon(case.rep, case.algebra)?;
        let g = case.algebra;
        let (nonzero, witness) = run_random(2 * eps, cfg.trials, cfg.seed, |rng| {
            case.rep.image(&random_lie_element(g, rng))
        })?;
        cases.push(IdentityCase {
            theorem: "al3".into(),
            label: case.label.clone(),
            class: MatrixClass::Image,
            size: case.rep.dim(),
            degree: 2 * eps,
            trials: cfg.trials,
            nonzero,
            lower_degree_witness: witness,
        });
    }
    Ok(StandardReport { cases })
}
