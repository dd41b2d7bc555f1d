//! Ideals of the positive root poset, their weights `⟨Φ⟩ = Σ_{φ∈Φ} φ`, the
//! Casimir operator on weights and on exterior powers, and the checks tying
//! them together.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::exterior::{Blade, ExtElement, MAX_EXTERIOR_DIM};
use crate::gammamap::subsets;
use crate::linalg::{self, Matrix};
use crate::rational::{rat, to_f64, Rational};
use crate::rootdata::{Root, RootIndex, RootSystem};

/// Default cap on `dim ∧^k g` for [`casimir_on_wedge`].
pub const DEFAULT_WEDGE_BUDGET: usize = 5000;

/// An upward-closed set of positive roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootIdeal {
    /// Members in the fixed positive-root order.
    pub roots: Vec<Root>,
    /// `⟨Φ⟩` over the simple roots.
    pub weight: Vec<i64>,
    pub abelian: bool,
}

impl RootIdeal {
    pub fn from_indices(rs: &RootSystem, idx: &[RootIndex]) -> Self {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        let roots: Vec<Root> = idx.iter().map(|&i| rs.root(i)).collect();
        let mut weight = vec![0; rs.rank()];
        for r in &roots {
            for (w, c) in weight.iter_mut().zip(r.coords()) {
                *w += c;
            }
        }
        let abelian = roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots[i..].iter().all(|b| !rs.is_root(a.add(b).coords())));
        RootIdeal {
            roots,
            weight,
            abelian,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn indices(&self, rs: &RootSystem) -> Vec<RootIndex> {
        self.roots
            .iter()
            .map(|r| rs.index_of(r.coords()).expect("member is a root"))
            .collect()
    }
}

/// Whether a set of positive roots is closed under adding positive roots.
pub fn is_upward_closed(rs: &RootSystem, set: &[RootIndex]) -> bool {
    let members: BTreeSet<RootIndex> = set.iter().copied().collect();
    set.iter().all(|&a| {
        rs.positive_roots().iter().all(|psi| {
            let s = rs.root(a).add(psi);
            match rs.index_of(s.coords()) {
                Some(i) => members.contains(&i),
                None => true,
            }
        })
    })
}

/// All ideals of cardinality `k`, in lexicographic order of their sorted
/// index lists.
///
/// Roots are decided from the highest down; a root may join only when every
/// `φ + α_i` that is a root has already joined, which keeps the partial set
/// upward closed at each step.
pub fn enumerate_ideals(rs: &RootSystem, k: usize) -> Vec<RootIdeal> {
    let r = rs.r();
    if k > r {
        return Vec::new();
    }
    let l = rs.rank();
    let covers: Vec<Vec<RootIndex>> = (0..r)
        .map(|a| {
            (0..l)
                .filter_map(|i| {
                    let mut c = rs.root(a).coords().to_vec();
                    c[i] += 1;
                    rs.index_of(&c)
                })
                .collect()
        })
        .collect();

    fn rec(
        pos: usize,
        k: usize,
        chosen: &mut Vec<bool>,
        count: usize,
        covers: &[Vec<RootIndex>],
        out: &mut Vec<Vec<RootIndex>>,
    ) {
        if count == k {
            out.push((0..chosen.len()).filter(|&i| chosen[i]).collect());
            return;
        }
        // roots still undecided: 0..pos
        if pos == 0 || count + pos < k {
            return;
        }
        let a = pos - 1;
        if covers[a].iter().all(|&c| chosen[c]) {
            chosen[a] = true;
            rec(a, k, chosen, count + 1, covers, out);
            chosen[a] = false;
        }
        rec(a, k, chosen, count, covers, out);
    }
    let mut sets = Vec::new();
    rec(r, k, &mut vec![false; r], 0, &covers, &mut sets);
    sets.sort();
    sets.iter()
        .map(|s| RootIdeal::from_indices(rs, s))
        .collect()
}

/// `λ(h_i)` for `λ` over the simple roots.
fn on_coroots(rs: &RootSystem, lambda: &[i64]) -> Vec<i64> {
    (0..rs.rank())
        .map(|i| rs.coroot_pairing(lambda, i))
        .collect()
}

pub fn is_dominant(rs: &RootSystem, lambda: &[i64]) -> bool {
    on_coroots(rs, lambda).iter().all(|&v| v >= 0)
}

/// `(λ, μ)` for the form induced by the Killing form, with both weights given
/// over the simple roots.
pub fn killing_weight_form(g: &LieAlgebra, lambda: &[i64], mu: &[i64]) -> Rational {
    let rs = g.rootsys();
    let l = g.rank();
    let gh: Matrix = (0..l)
        .map(|i| (0..l).map(|j| rat(g.killing()[i][j])).collect())
        .collect();
    let a: Vec<Rational> = on_coroots(rs, lambda).into_iter().map(rat).collect();
    let b: Vec<Rational> = on_coroots(rs, mu).into_iter().map(rat).collect();
    let t = linalg::solve(&gh, &b).expect("Killing form nondegenerate on h");
    a.iter().zip(&t).map(|(x, y)| x * y).sum()
}

/// Eigenvalue `(λ, λ + 2ρ)` of the Casimir element on the irreducible module
/// of highest weight `λ`, normalized to 1 on the adjoint module.
pub fn casimir_eigenvalue(g: &LieAlgebra, lambda: &[i64]) -> Result<Rational> {
    let rs = g.rootsys();
    if lambda.len() != rs.rank() {
        return Err(Error::DimensionMismatch {
            expected: rs.rank(),
            found: lambda.len(),
        });
    }
    if !is_dominant(rs, lambda) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let shifted: Vec<i64> = lambda
        .iter()
        .zip(rs.two_rho())
        .map(|(a, b)| a + b)
        .collect();
    Ok(killing_weight_form(g, lambda, &shifted))
}

/// Weyl's dimension formula `Π_{α>0} (λ+ρ, α)/(ρ, α)`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &[i64]) -> Result<BigInt> {
    if !is_dominant(rs, lambda) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let two_rho = rs.two_rho();
    let shifted: Vec<i64> = lambda
        .iter()
        .zip(&two_rho)
        .map(|(a, b)| 2 * a + b)
        .collect();
    let mut q = Rational::one();
    for a in rs.positive_roots() {
        q *= Rational::new(
            rs.inner(&shifted, a.coords()).into(),
            rs.inner(&two_rho, a.coords()).into(),
        );
    }
    debug_assert!(q.is_integer());
    Ok(q.to_integer())
}

/// Number of partitions of `n`, by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> u128 {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut s = 0i128;
        for k in 1.. {
            let k = k as i64;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut any = false;
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if g as usize <= m {
                    s += sign * p[m - g as usize];
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        p[m] = s;
    }
    p[n] as u128
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub ideal: RootIdeal,
    pub dominant: bool,
    #[serde(with = "crate::rational::serde_one")]
    pub casimir: Rational,
    /// Weyl dimension of `⟨Φ⟩`, as a decimal string.
    pub dimension: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub cartan_type: String,
    pub rank: usize,
    #[serde(with = "crate::rational::serde_one")]
    pub adjoint_casimir: Rational,
    pub ideals: Vec<IdealCheck>,
    pub all_abelian: bool,
    pub weights_distinct: bool,
    pub all_dominant: bool,
    pub casimir_equals_rank: bool,
    /// `P(ℓ)` in type A, `None` otherwise.
    pub partition_number: Option<u128>,
    pub count_matches: Option<bool>,
}

impl IdealReport {
    pub fn passed(&self) -> bool {
        self.adjoint_casimir.is_one()
            && !self.ideals.is_empty()
            && self.all_abelian
            && self.weights_distinct
            && self.all_dominant
            && self.casimir_equals_rank
            && self.count_matches != Some(false)
    }
}

/// Checks the ideals of cardinality `ℓ`: all abelian, weights distinct and
/// dominant, Casimir eigenvalue `ℓ` on each weight, and in type A a count of
/// `P(ℓ)`.
pub fn verify_ideal_theorems(g: &LieAlgebra) -> Result<IdealReport> {
    let rs = g.rootsys();
    let l = rs.rank();
    let theta = rs.highest_root();
    let adjoint_casimir = casimir_eigenvalue(g, theta.coords())?;
    let ideals = enumerate_ideals(rs, l);
    let mut checks = Vec::with_capacity(ideals.len());
    for ideal in ideals {
        let dominant = is_dominant(rs, &ideal.weight);
        let (casimir, dimension) = if dominant {
            (
                casimir_eigenvalue(g, &ideal.weight)?,
                weyl_dimension(rs, &ideal.weight)?.to_string(),
            )
        } else {
            (Rational::zero(), "0".into())
        };
        checks.push(IdealCheck {
            ideal,
            dominant,
            casimir,
            dimension,
        });
    }
    let weights: BTreeSet<&Vec<i64>> = checks.iter().map(|c| &c.ideal.weight).collect();
    let partition_number =
        (rs.cartan_type().family() == crate::rootdata::Family::A).then(|| partition_count(l));
    Ok(IdealReport {
        cartan_type: rs.cartan_type().to_string(),
        rank: l,
        adjoint_casimir,
        all_abelian: checks.iter().all(|c| c.ideal.abelian),
        weights_distinct: weights.len() == checks.len(),
        all_dominant: checks.iter().all(|c| c.dominant),
        casimir_equals_rank: checks
            .iter()
            .all(|c| c.dominant && c.casimir == rat(l as i64)),
        count_matches: partition_number.map(|p| p == checks.len() as u128),
        partition_number,
        ideals: checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WedgeReport {
    pub k: usize,
    pub dim: usize,
    /// `dim ker(Cas - k)` on `∧^k g`, exact.
    pub eigenspace_dim: usize,
    /// Sum of Weyl dimensions of `⟨Φ⟩` over abelian ideals of size `k`.
    pub ideal_dimension_sum: String,
    pub abelian_ideals: usize,
    /// Abelian ideals whose wedge `e_Φ` lies in the eigenspace.
    pub ideals_in_eigenspace: usize,
    /// Largest real part among the floating-point eigenvalues.
    pub max_eigenvalue: f64,
    pub bound_holds: bool,
}

impl WedgeReport {
    /// Exact parts only; the floating-point bound is reported separately.
    pub fn exact_passed(&self) -> bool {
        self.ideals_in_eigenspace == self.abelian_ideals
            && self.ideal_dimension_sum == self.eigenspace_dim.to_string()
    }
}

/// Casimir operator `Σ_i y_i z_i` (with `B(y_i, z_j) = δ_ij`) on `∧^k g`,
/// as an exact matrix over the basis wedges in lexicographic order.
pub fn casimir_on_wedge(g: &LieAlgebra, k: usize, budget: usize) -> Result<(Matrix, WedgeReport)> {
    let n = g.dim();
    if n > MAX_EXTERIOR_DIM {
        return Err(Error::Budget(format!(
            "dim g = {n} exceeds {MAX_EXTERIOR_DIM}"
        )));
    }
    let basis = subsets(n, k);
    if basis.len() > budget {
        return Err(Error::Budget(format!(
            "dim ∧^{k} g = {} exceeds the budget {budget}",
            basis.len()
        )));
    }
    let blade_of = |s: &[usize]| s.iter().fold(0 as Blade, |b, &i| b | (1 << i));
    let index: HashMap<Blade, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, s)| (blade_of(s), i))
        .collect();
    let ginv = g.killing_inverse();
    let apply = |v: &ExtElement| -> ExtElement {
        let parts: Vec<ExtElement> = (0..n).map(|j| v.ad_action(g, j)).collect();
        let mut out = ExtElement::zero(n);
        for (i, row) in ginv.iter().enumerate() {
            let mut z = ExtElement::zero(n);
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    z = z.add(&parts[j].scale(c));
                }
            }
            if !z.is_zero() {
                out = out.add(&z.ad_action(g, i));
            }
        }
        out
    };
    let cols: Vec<Vec<(usize, Rational)>> = basis
        .par_iter()
        .map(|s| {
            apply(&ExtElement::basis_wedge(n, s))
                .terms()
                .map(|(b, c)| (index[b], c.clone()))
                .collect()
        })
        .collect();
    let d = basis.len();
    let mut m: Matrix = vec![vec![Rational::zero(); d]; d];
    for (j, col) in cols.into_iter().enumerate() {
        for (i, c) in col {
            m[i][j] = c;
        }
    }

    let kk = rat(k as i64);
    let blocks = weight_blocks(g, &basis);
    let mut eigenspace_dim = 0;
    let mut max_eigenvalue = f64::NEG_INFINITY;
    let hform = compact_form(g);
    for block in &blocks {
        let shifted: Matrix = block
            .iter()
            .map(|&i| {
                block
                    .iter()
                    .map(|&j| {
                        if i == j {
                            &m[i][j] - &kk
                        } else {
                            m[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        eigenspace_dim += block.len() - linalg::rank(&shifted);
        max_eigenvalue =
            max_eigenvalue.max(block_max_eigenvalue(&m, block, &basis, &hform, g.rank()));
    }

    let rs = g.rootsys();
    let abelian: Vec<RootIdeal> = enumerate_ideals(rs, k)
        .into_iter()
        .filter(|i| i.abelian)
        .collect();
    let mut dim_sum = BigInt::zero();
    let mut in_space = 0;
    for ideal in &abelian {
        dim_sum += weyl_dimension(rs, &ideal.weight)?;
        let idx: Vec<usize> = ideal
            .indices(rs)
            .iter()
            .map(|&a| g.root_vector_index(a))
            .collect();
        let v = ExtElement::basis_wedge(n, &idx);
        if apply(&v) == v.scale(&kk) {
            in_space += 1;
        }
    }

    let report = WedgeReport {
        k,
        dim: d,
        eigenspace_dim,
        ideal_dimension_sum: dim_sum.to_string(),
        abelian_ideals: abelian.len(),
        ideals_in_eigenspace: in_space,
        max_eigenvalue,
        bound_holds: max_eigenvalue <= k as f64 + 1e-9,
    };
    Ok((m, report))
}

/// Groups basis wedges by their `h`-weight (the sum of the roots of their
/// root-vector factors). The Casimir operator preserves each group.
fn weight_blocks(g: &LieAlgebra, basis: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let rs = g.rootsys();
    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (idx, s) in basis.iter().enumerate() {
        let mut w = vec![0i64; rs.rank()];
        for &i in s {
            if let Some(a) = g.root_of_basis(i) {
                for (x, c) in w.iter_mut().zip(rs.root(a).coords()) {
                    *x += c;
                }
            }
        }
        groups.entry(w).or_default().push(idx);
    }
    groups.into_values().collect()
}

/// Gram matrix of the positive-definite form `H(x, y) = -B(x, ω y)` with `ω`
/// the Chevalley involution (`h ↦ -h`, `e_α ↦ -e_{-α}`). It is the Killing
/// form on the `h` block and diagonal with entries `B(e_α, e_{-α})` on root
/// vectors.
fn compact_form(g: &LieAlgebra) -> Vec<Vec<f64>> {
    let n = g.dim();
    let l = g.rank();
    let rs = g.rootsys();
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..l {
        for j in 0..l {
            h[i][j] = g.killing()[i][j] as f64;
        }
    }
    for i in l..n {
        let a = g.root_of_basis(i).expect("root vector");
        let j = g.root_vector_index(rs.negate_index(a));
        h[i][i] = g.killing()[i][j] as f64;
    }
    h
}

/// Largest eigenvalue of one weight block of the Casimir matrix.
///
/// The Casimir operator is self-adjoint for the form induced by `H` on
/// `∧^k g`, so with `W = L Lᵀ` the Gram matrix of that form on the block,
/// `Lᵀ C L⁻ᵀ` is symmetric and its spectrum can be computed reliably.
fn block_max_eigenvalue(
    m: &Matrix,
    block: &[usize],
    basis: &[Vec<usize>],
    h: &[Vec<f64>],
    l: usize,
) -> f64 {
    let d = block.len();
    let c = DMatrix::from_fn(d, d, |a, b| to_f64(&m[block[a]][block[b]]));
    let w = DMatrix::from_fn(d, d, |a, b| {
        let (s, t) = (&basis[block[a]], &basis[block[b]]);
        let (sh, sr): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&i| i < l);
        let (th, tr): (Vec<usize>, Vec<usize>) = t.iter().partition(|&&i| i < l);
        if sr != tr || sh.len() != th.len() {
            return 0.0;
        }
        let sub = DMatrix::from_fn(sh.len(), sh.len(), |i, j| h[sh[i]][th[j]]);
        let det = if sh.is_empty() {
            1.0
        } else {
            sub.determinant()
        };
        sr.iter().map(|&i| h[i][i]).product::<f64>() * det
    });
    let chol = w.cholesky().expect("compact form is positive definite");
    let lower = chol.l();
    let linv = lower
        .clone()
        .try_inverse()
        .expect("Cholesky factor is invertible");
    let sym = lower.transpose() * c * linv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}
