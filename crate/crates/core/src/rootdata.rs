//! Root systems of the classical Cartan types.
//!
//! Roots are stored as integer coordinate vectors over the simple roots. The
//! full root set is produced by closing the simple roots under the simple
//! reflections; the positive roots are then ordered by height, with ties
//! broken by decreasing lexicographic order of coordinates (so the simple
//! roots appear as `α1, α2, …`).

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the rank accepted by [`CartanType::with_options`].
pub const DEFAULT_MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        };
        write!(f, "{c}")
    }
}

/// Bounds applied when validating a [`CartanType`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeOptions {
    pub max_rank: usize,
    /// Accept `D2 = so(4)` and `D3 = so(6)`; off by default since D2 is not simple.
    pub allow_low_rank_d: bool,
}

impl Default for TypeOptions {
    fn default() -> Self {
        TypeOptions {
            max_rank: DEFAULT_MAX_RANK,
            allow_low_rank_d: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::with_options(family, rank, &TypeOptions::default())
    }

    pub fn with_options(family: Family, rank: usize, opts: &TypeOptions) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Config("rank must be at least 1".into()));
        }
        if rank > opts.max_rank {
            return Err(Error::Config(format!(
                "{family}{rank}: rank exceeds the configured bound {}",
                opts.max_rank
            )));
        }
        if family == Family::D {
            let min = if opts.allow_low_rank_d { 2 } else { 4 };
            if rank < min {
                return Err(Error::Config(format!(
                    "D{rank}: family D requires rank >= {min}"
                )));
            }
        }
        Ok(CartanType { family, rank })
    }

    pub fn parse_with(s: &str, opts: &TypeOptions) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            _ => return Err(Error::ParseCartanType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::ParseCartanType(s.to_string()))?;
        Self::with_options(family, rank, opts)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Closed-form number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1) / 2,
            Family::B | Family::C => l * l,
            Family::D => l * (l - 1),
        }
    }

    /// Simple roots written in the standard orthonormal ε-basis.
    fn epsilon_simple_roots(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let dim = if self.family == Family::A { l + 1 } else { l };
        let eps = |i: usize| {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            v
        };
        let diff = |i: usize, j: usize| {
            let mut v = eps(i);
            v[j] -= 1;
            v
        };
        (0..l)
            .map(|i| match self.family {
                Family::A => diff(i, i + 1),
                _ if i + 1 < l => diff(i, i + 1),
                Family::B => eps(l - 1),
                Family::C => {
                    let mut v = eps(l - 1);
                    v[l - 1] = 2;
                    v
                }
                Family::D => {
                    let mut v = eps(l - 1);
                    v[l - 2] += 1;
                    v
                }
            })
            .collect()
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, &TypeOptions::default())
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A root as integer coefficients over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Index of a root in the signed enumeration used throughout the crate:
/// `0..r` are the positive roots in their fixed order and `r..2r` are their
/// negatives in the same order.
pub type RootIndex = usize;

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    /// Gram matrix `(α_i, α_j)` of the simple roots in the ε-normalization.
    simple_form: Vec<Vec<i64>>,
    /// `cartan[i][j] = α_j(h_i) = 2(α_i, α_j)/(α_i, α_i)`.
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    index: HashMap<Vec<i64>, RootIndex>,
    /// `sum_table[i][j]` is the positive index of `φ_i + φ_j` when it is a root.
    sum_table: Vec<Vec<Option<usize>>>,
    exponents: Vec<usize>,
}

impl RootSystem {
    pub fn new(t: CartanType) -> Self {
        let l = t.rank();
        let eps = t.epsilon_simple_roots();
        let simple_form: Vec<Vec<i64>> = eps
            .iter()
            .map(|a| eps.iter().map(|b| dot(a, b)).collect())
            .collect();
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| 2 * simple_form[i][j] / simple_form[i][i])
                    .collect()
            })
            .collect();

        // Closure of the simple roots under simple reflections.
        let simple: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                v
            })
            .collect();
        let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = simple.into_iter().collect();
        while let Some(beta) = queue.pop_front() {
            for i in 0..l {
                let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
                let mut img = beta.clone();
                img[i] -= pairing;
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let mut positive: Vec<Root> = seen
            .into_iter()
            .map(Root)
            .filter(Root::is_positive)
            .collect();
        positive.sort_by_key(|r| (r.height(), Reverse(r.0.clone())));

        let r = positive.len();
        let mut index = HashMap::with_capacity(2 * r);
        for (i, root) in positive.iter().enumerate() {
            index.insert(root.0.clone(), i);
            index.insert(root.neg().0, r + i);
        }
        let sum_table = positive
            .iter()
            .map(|a| {
                positive
                    .iter()
                    .map(|b| index.get(&a.add(b).0).copied())
                    .collect()
            })
            .collect();

        // Exponents are the dual partition of the heights of positive roots.
        let max_h = positive.iter().map(Root::height).max().unwrap_or(0) as usize;
        let mut count = vec![0usize; max_h + 2];
        for root in &positive {
            count[root.height() as usize] += 1;
        }
        let mut exponents = Vec::with_capacity(l);
        for m in 1..=max_h {
            for _ in 0..count[m] - count[m + 1] {
                exponents.push(m);
            }
        }
        exponents.sort_unstable();

        RootSystem {
            cartan_type: t,
            simple_form,
            cartan,
            positive,
            index,
            sum_table,
            exponents,
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    /// Number of positive roots.
    pub fn r(&self) -> usize {
        self.positive.len()
    }

    /// Dimension `ℓ + 2r` of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.rank() + 2 * self.r()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_form(&self) -> &[Vec<i64>] {
        &self.simple_form
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        self.positive[..self.rank()].to_vec()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Root for a signed index.
    pub fn root(&self, idx: RootIndex) -> Root {
        let r = self.r();
        if idx < r {
            self.positive[idx].clone()
        } else {
            self.positive[idx - r].neg()
        }
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<RootIndex> {
        self.index.get(coords).copied()
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.index.contains_key(coords)
    }

    pub fn negate_index(&self, idx: RootIndex) -> RootIndex {
        let r = self.r();
        if idx < r {
            idx + r
        } else {
            idx - r
        }
    }

    pub fn sum_table(&self) -> &[Vec<Option<usize>>] {
        &self.sum_table
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// Degrees `m_i + 1` of the basic invariants.
    pub fn degrees(&self) -> Vec<usize> {
        self.exponents.iter().map(|m| m + 1).collect()
    }

    pub fn highest_root(&self) -> Root {
        self.positive.last().cloned().expect("nonempty root system")
    }

    /// Invariant form on the root lattice in the ε-normalization.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.rank();
        let mut s = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += a[i] * self.simple_form[i][j] * b[j];
            }
        }
        s
    }

    /// `⟨β, α_i^∨⟩` for `β` given in simple-root coordinates.
    pub fn coroot_pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    /// Coroot `α^∨` written over the simple coroots `h_i`.
    pub fn coroot(&self, alpha: &[i64]) -> Vec<i64> {
        let norm = self.inner(alpha, alpha);
        (0..self.rank())
            .map(|i| {
                let num = alpha[i] * self.simple_form[i][i];
                debug_assert_eq!(num % norm, 0);
                num / norm
            })
            .collect()
    }

    /// Sum of the positive roots (`2ρ`).
    pub fn two_rho(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        for root in &self.positive {
            for (a, b) in v.iter_mut().zip(&root.0) {
                *a += b;
            }
        }
        v
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exponents of the Lie algebra of type `t`, ascending.
pub fn exponents(t: CartanType) -> Vec<usize> {
    RootSystem::new(t).exponents().to_vec()
}
