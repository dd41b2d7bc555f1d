//! Invariant polynomials of the classical algebras: the defining matrix
//! representation, Chevalley generators from trace powers (and the Pfaffian
//! in type D), the Jacobian table `Q_{ij} = ∂p_i/∂y_j` and the span of its
//! maximal minors.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{LieAlgebra, LieElement, StructureCheck};
use crate::error::{Error, Result};
use crate::gammamap::{enumerate_matchings, subsets};
use crate::identities::SquareMatrix;
use crate::linalg::{self, Matrix};
use crate::polyring::{lie_derivative, KillingDual, Monomial, Poly, PolySpace};
use crate::rational::{rat, Rational};
use crate::rootdata::Family;

/// A matrix representation: one matrix per Chevalley basis element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRep {
    dim: usize,
    mats: Vec<SquareMatrix>,
    /// Invariant bilinear form `S` (so `S·π(x)` is skew or symmetric), when
    /// the representation preserves one.
    form: Option<SquareMatrix>,
}

impl MatrixRep {
    pub fn new(mats: Vec<SquareMatrix>, form: Option<SquareMatrix>) -> Result<Self> {
        let dim = mats.first().map_or(0, SquareMatrix::n);
        if let Some(bad) = mats.iter().find(|m| m.n() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.n(),
            });
        }
        Ok(MatrixRep { dim, mats, form })
    }

    /// The adjoint representation in the Chevalley basis.
    pub fn adjoint(g: &LieAlgebra) -> Self {
        let mats = (0..g.dim())
            .map(|i| SquareMatrix::from_rows(g.ad_matrix(&g.basis_element(i))).expect("square"))
            .collect();
        MatrixRep {
            dim: g.dim(),
            mats,
            form: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[SquareMatrix] {
        &self.mats
    }

    pub fn form(&self) -> Option<&SquareMatrix> {
        self.form.as_ref()
    }

    pub fn image(&self, x: &LieElement) -> SquareMatrix {
        let mut out = SquareMatrix::zero(self.dim);
        for (c, m) in x.coords().iter().zip(&self.mats) {
            out.axpy(c, m);
        }
        out
    }

    /// `π([y_i, y_j]) = [π(y_i), π(y_j)]` on all pairs `i < j`.
    pub fn check_homomorphism(&self, g: &LieAlgebra) -> StructureCheck {
        let n = g.dim();
        let fails = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut f = 0;
                for j in i + 1..n {
                    let lhs = self.mats[i].commutator(&self.mats[j]);
                    let mut rhs = SquareMatrix::zero(self.dim);
                    for &(k, c) in g.bracket_basis(i, j) {
                        rhs.axpy(&rat(c), &self.mats[k]);
                    }
                    if lhs != rhs {
                        f += 1;
                    }
                }
                f
            })
            .sum();
        StructureCheck {
            checked: n * n.saturating_sub(1) / 2,
            failures: fails,
        }
    }

    /// The generic matrix `Σ_j y_j π(y_j)` with linear polynomial entries.
    pub fn generic_matrix(&self) -> Vec<Vec<Poly>> {
        let n = self.mats.len();
        (0..self.dim)
            .map(|a| {
                (0..self.dim)
                    .map(|b| {
                        let coeffs: Vec<Rational> =
                            self.mats.iter().map(|m| m.get(a, b).clone()).collect();
                        debug_assert_eq!(coeffs.len(), n);
                        Poly::linear(&coeffs)
                    })
                    .collect()
            })
            .collect()
    }
}

fn unit_combo(n: usize, entries: &[(usize, usize, i64)]) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n);
    for &(i, j, c) in entries {
        m.set(i, j, m.get(i, j) + rat(c));
    }
    m
}

/// Matrices of `e_{α_i}` and `e_{-α_i}` in the defining representation, and
/// the invariant form.
fn simple_generators(
    family: Family,
    l: usize,
) -> (
    usize,
    Vec<(SquareMatrix, SquareMatrix)>,
    Option<SquareMatrix>,
) {
    let mut gens = Vec::with_capacity(l);
    match family {
        Family::A => {
            let n = l + 1;
            for i in 0..l {
                gens.push((
                    unit_combo(n, &[(i, i + 1, 1)]),
                    unit_combo(n, &[(i + 1, i, 1)]),
                ));
            }
            (n, gens, None)
        }
        Family::B | Family::C | Family::D => {
            let n = if family == Family::B {
                2 * l + 1
            } else {
                2 * l
            };
            let p = |i: usize| l + i;
            for i in 0..l.saturating_sub(1) {
                gens.push((
                    unit_combo(n, &[(i, i + 1, 1), (p(i + 1), p(i), -1)]),
                    unit_combo(n, &[(i + 1, i, 1), (p(i), p(i + 1), -1)]),
                ));
            }
            let a = l - 1;
            let last = match family {
                Family::B => {
                    let z = 2 * l;
                    (
                        unit_combo(n, &[(a, z, 1), (z, p(a), -1)]),
                        unit_combo(n, &[(z, a, 2), (p(a), z, -2)]),
                    )
                }
                Family::C => (
                    unit_combo(n, &[(a, p(a), 1)]),
                    unit_combo(n, &[(p(a), a, 1)]),
                ),
                _ => (
                    unit_combo(n, &[(a - 1, p(a), 1), (a, p(a - 1), -1)]),
                    unit_combo(n, &[(p(a), a - 1, 1), (p(a - 1), a, -1)]),
                ),
            };
            gens.push(last);
            let mut form = SquareMatrix::zero(n);
            let sign = if family == Family::C { -1 } else { 1 };
            for i in 0..l {
                form.set(i, p(i), rat(1));
                form.set(p(i), i, rat(sign));
            }
            if family == Family::B {
                form.set(2 * l, 2 * l, rat(1));
            }
            (n, gens, Some(form))
        }
    }
}

/// The defining representation: `sl(ℓ+1)`, `so(2ℓ+1)`, `sp(2ℓ)` or
/// `so(2ℓ)`. Simple root vectors are standard matrices; the rest follow from
/// the extraspecial brackets, and the homomorphism property is verified on all
/// basis pairs.
pub fn defining_rep(g: &LieAlgebra) -> Result<MatrixRep> {
    let rs = g.rootsys();
    let l = g.rank();
    let r = rs.r();
    let (dim, simple, form) = simple_generators(rs.cartan_type().family(), l);
    let mut mats: Vec<Option<SquareMatrix>> = vec![None; g.dim()];
    for (i, (e, f)) in simple.into_iter().enumerate() {
        mats[g.h_index(i)] = Some(e.commutator(&f));
        mats[g.root_vector_index(i)] = Some(e);
        mats[g.root_vector_index(rs.negate_index(i))] = Some(f);
    }
    for a in l..r {
        let (b, c) = g.extraspecial_pair(a).ok_or_else(|| {
            Error::Representation(format!("no extraspecial pair for root {}", rs.root(a)))
        })?;
        for (a, b, c) in [
            (a, b, c),
            (rs.negate_index(a), rs.negate_index(b), rs.negate_index(c)),
        ] {
            let (ib, ic) = (g.root_vector_index(b), g.root_vector_index(c));
            let target = g.root_vector_index(a);
            let nbc = g
                .bracket_basis(ib, ic)
                .iter()
                .find(|(k, _)| *k == target)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Representation("extraspecial bracket vanishes".into()))?;
            let m = mats[ib]
                .as_ref()
                .expect("lower root built")
                .commutator(mats[ic].as_ref().expect("lower root built"))
                .scale(&(Rational::one() / rat(nbc)));
            mats[target] = Some(m);
        }
    }
    let mats: Vec<SquareMatrix> = mats
        .into_iter()
        .map(|m| m.expect("every basis element built"))
        .collect();
    let rep = MatrixRep { dim, mats, form };
    let check = rep.check_homomorphism(g);
    if !check.passed() {
        return Err(Error::Representation(format!(
            "defining matrices fail the bracket relations on {} of {} pairs",
            check.failures, check.checked
        )));
    }
    Ok(rep)
}

type PolyMatrix = Vec<Vec<Poly>>;

fn poly_mat_mul(a: &PolyMatrix, b: &PolyMatrix, nvars: usize) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Poly::zero(nvars);
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            s = &s + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn trace_powers(x: &PolyMatrix, nvars: usize, max: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(max);
    let mut p = x.clone();
    for d in 1..=max {
        if d > 1 {
            p = poly_mat_mul(&p, x, nvars);
        }
        let mut t = Poly::zero(nvars);
        for (i, row) in p.iter().enumerate() {
            t = &t + &row[i];
        }
        out.push(t);
    }
    out
}

/// Pfaffian of a skew matrix of polynomials, summed over perfect matchings.
pub fn pfaffian(a: &PolyMatrix, nvars: usize) -> Poly {
    let n = a.len();
    assert!(n.is_multiple_of(2), "Pfaffian of odd size");
    enumerate_matchings(n / 2)
        .par_iter()
        .map(|m| {
            let mut t = Poly::constant(nvars, rat(m.sign()));
            for &(i, j) in m.pairs() {
                t = &t * &a[i][j];
            }
            t
        })
        .reduce(|| Poly::zero(nvars), |x, y| &x + &y)
}

/// Monomials `Π q_j^{e_j}` of total weighted degree `d`.
fn products_of_degree(lower: &[(usize, Poly)], d: usize, nvars: usize) -> Vec<Poly> {
    fn rec(lower: &[(usize, Poly)], idx: usize, rem: usize, cur: Poly, out: &mut Vec<Poly>) {
        if rem == 0 {
            out.push(cur);
            return;
        }
        if idx == lower.len() {
            return;
        }
        let (deg, ref q) = lower[idx];
        let mut c = cur;
        let mut left = rem;
        loop {
            rec(lower, idx + 1, left, c.clone(), out);
            if left < deg {
                break;
            }
            c = &c * q;
            left -= deg;
        }
    }
    let mut out = Vec::new();
    rec(lower, 0, d, Poly::one(nvars), &mut out);
    out
}

/// Replaces each generator by its component orthogonal to all products of
/// lower-degree generators. An invariant `p` satisfies `∂_{p_j} p = 0` for
/// every lower `p_j` exactly when it is orthogonal to `p_j · P`, and by
/// invariance of the pairing it suffices to test against `p_j · J`.
pub fn adjust_generators(kd: &KillingDual, gens: &[Poly]) -> Result<Vec<Poly>> {
    let nvars = kd.nvars();
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| gens[i].degree().unwrap_or(0));
    let mut out: Vec<Option<Poly>> = vec![None; gens.len()];
    let mut done: Vec<(usize, Poly)> = Vec::new();
    for &i in &order {
        let d = gens[i].degree().unwrap_or(0);
        let lower: Vec<(usize, Poly)> = done.iter().filter(|(dj, _)| *dj < d).cloned().collect();
        let prods = products_of_degree(&lower, d, nvars);
        let mut p = gens[i].clone();
        if !prods.is_empty() {
            let gram: Matrix = prods
                .iter()
                .map(|a| {
                    prods
                        .iter()
                        .map(|b| kd.pairing(a, b))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let rhs: Vec<Rational> = prods
                .iter()
                .map(|a| kd.pairing(&p, a))
                .collect::<Result<_>>()?;
            let c = linalg::solve(&gram, &rhs).ok_or_else(|| {
                Error::Generators(format!("singular pairing on products of degree {d}"))
            })?;
            for (ci, q) in c.iter().zip(&prods) {
                if !ci.is_zero() {
                    p = &p - &q.scale(ci);
                }
            }
        }
        done.push((d, p.clone()));
        out[i] = Some(p);
    }
    Ok(out
        .into_iter()
        .map(|p| p.expect("every generator adjusted"))
        .collect())
}

/// Generators of the invariant ring, ordered by degree.
///
/// Trace powers of the generic defining matrix (degrees `2..ℓ+1` in type A,
/// even degrees up to `2ℓ` in types B and C, even degrees up to `2ℓ-2` plus
/// the Pfaffian of `S·X` in type D), each verified invariant, then adjusted so
/// that every entry of the Jacobian table is harmonic.
pub fn chevalley_generators(g: &LieAlgebra) -> Result<Vec<Poly>> {
    let rs = g.rootsys();
    let l = g.rank();
    let n = g.dim();
    let family = rs.cartan_type().family();
    let rep = defining_rep(g)?;
    let x = rep.generic_matrix();
    let (degrees, max): (Vec<usize>, usize) = match family {
        Family::A => ((2..=l + 1).collect(), l + 1),
        Family::B | Family::C => ((1..=l).map(|i| 2 * i).collect(), 2 * l),
        Family::D => ((1..l).map(|i| 2 * i).collect(), 2 * l - 2),
    };
    let traces = trace_powers(&x, n, max);
    let mut gens: Vec<Poly> = degrees.iter().map(|&d| traces[d - 1].clone()).collect();
    if family == Family::D {
        let s = rep.form().expect("type D preserves a form");
        let sx: PolyMatrix = (0..rep.dim())
            .map(|a| {
                (0..rep.dim())
                    .map(|b| {
                        let mut t = Poly::zero(n);
                        for c in 0..rep.dim() {
                            let sc = s.get(a, c);
                            if !sc.is_zero() {
                                t = &t + &x[c][b].scale(sc);
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        gens.push(pfaffian(&sx, n));
    }
    gens.sort_by_key(|p| p.degree().unwrap_or(0));

    for (k, p) in gens.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::Generators(format!("generator {} vanishes", k + 1)));
        }
        if (0..n).any(|i| !lie_derivative(g, i, p).is_zero()) {
            return Err(Error::Generators(format!(
                "generator {} is not invariant",
                k + 1
            )));
        }
    }
    let got: Vec<usize> = gens.iter().map(|p| p.degree().unwrap_or(0)).collect();
    if got != rs.degrees() {
        return Err(Error::Generators(format!(
            "generator degrees {got:?} differ from {:?}",
            rs.degrees()
        )));
    }

    let kd = KillingDual::new(g);
    let gens = adjust_generators(&kd, &gens)?;
    let q = q_matrix(g, &gens);
    if q.rank_at(&g.regular_nilpotent()) != l {
        return Err(Error::Generators(
            "Jacobian rank below ℓ at the regular nilpotent".into(),
        ));
    }
    let test = kd.harmonic_test(&gens);
    if !q.entries.par_iter().flatten().all(|e| test.is_harmonic(e)) {
        return Err(Error::Generators("a Jacobian entry is not harmonic".into()));
    }
    Ok(gens)
}

/// `Q_{ij} = ∂p_i/∂y_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub entries: Vec<Vec<Poly>>,
    /// `deg p_i - 1` for each row.
    pub degrees: Vec<usize>,
}

impl QMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn eval(&self, x: &LieElement) -> Matrix {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x.coords())).collect())
            .collect()
    }

    pub fn rank_at(&self, x: &LieElement) -> usize {
        linalg::rank(&self.eval(x))
    }

    /// The span `S_i` of row `i`.
    pub fn row_space(&self, i: usize) -> PolySpace {
        PolySpace::span(self.cols(), self.entries[i].iter().cloned())
    }
}

pub fn q_matrix(g: &LieAlgebra, gens: &[Poly]) -> QMatrix {
    let n = g.dim();
    let entries: Vec<Vec<Poly>> = gens
        .iter()
        .map(|p| (0..n).map(|j| p.partial(j)).collect())
        .collect();
    let degrees = gens
        .iter()
        .map(|p| p.degree().unwrap_or(1).saturating_sub(1))
        .collect();
    QMatrix { entries, degrees }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(v: &mut Vec<usize>, i: usize, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if i == v.len() {
            out.push((v.clone(), sign));
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            rec(v, i + 1, if i == j { sign } else { -sign }, out);
            v.swap(i, j);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), 0, 1, &mut out);
    out
}

/// Determinant of the `ℓ×ℓ` minor of `Q` on the given columns.
pub fn minor(q: &QMatrix, cols: &[usize]) -> Poly {
    let n = q.cols();
    let mut out = Poly::zero(n);
    for (perm, sign) in permutations(q.rows()) {
        let mut t = Poly::constant(n, rat(sign));
        for (i, &c) in perm.iter().enumerate() {
            t = &t * &q.entries[i][cols[c]];
            if t.is_zero() {
                break;
            }
        }
        out = &out + &t;
    }
    out
}

/// Span of all maximal minors of `Q`.
pub fn minors_space(q: &QMatrix) -> PolySpace {
    let polys: Vec<Poly> = subsets(q.cols(), q.rows())
        .par_iter()
        .map(|cols| minor(q, cols))
        .collect();
    PolySpace::span(q.cols(), polys)
}

/// Monomial `Π y_i^{e_i}` as a polynomial; convenient in tests and reports.
pub fn monomial(nvars: usize, exps: &[(usize, u8)]) -> Poly {
    let mut e = vec![0u8; nvars];
    for &(i, k) in exps {
        e[i] += k;
    }
    Poly::from_terms(nvars, [(Monomial::from_exponents(e), Rational::one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammamap::rk_space;
    use crate::rootdata::{CartanType, RootSystem, TypeOptions};

    fn alg(s: &str) -> LieAlgebra {
        let opts = TypeOptions {
            allow_low_rank_d: true,
            ..TypeOptions::default()
        };
        LieAlgebra::new(RootSystem::new(CartanType::parse_with(s, &opts).unwrap()))
    }

    #[test]
    fn defining_reps_are_homomorphisms() {
        for t in ["A1", "A2", "A3", "B2", "B3", "C3", "D2", "D3", "D4"] {
            let g = alg(t);
            let rep = defining_rep(&g).unwrap();
            let check = rep.check_homomorphism(&g);
            assert!(check.passed(), "{t}");
            assert_eq!(check.checked, g.dim() * (g.dim() - 1) / 2);
            if let Some(s) = rep.form() {
                for m in rep.mats() {
                    let sm = s.mul(m);
                    let skew = sm.add(&sm.transpose()).is_zero();
                    let sym = sm.sub(&sm.transpose()).is_zero();
                    assert!(skew || sym, "{t}: S·π(x) neither skew nor symmetric");
                }
            } else {
                assert!(rep.mats().iter().all(|m| m.trace().is_zero()));
            }
        }
        assert_eq!(
            defining_rep(&alg("A2"))
                .unwrap()
                .check_homomorphism(&alg("A2"))
                .checked,
            28
        );
        assert_eq!(
            defining_rep(&alg("B2"))
                .unwrap()
                .check_homomorphism(&alg("B2"))
                .checked,
            45
        );
    }

    #[test]
    fn adjoint_rep() {
        let g = alg("B2");
        assert!(MatrixRep::adjoint(&g).check_homomorphism(&g).passed());
    }

    #[test]
    fn sl2_generator() {
        let g = alg("A1");
        let gens = chevalley_generators(&g).unwrap();
        // basis (h, e, f): tr X² for X = [[y1, y2], [y3, -y1]]
        assert_eq!(gens, vec![Poly::parse("2*y1^2 + 2*y2*y3", 3).unwrap()]);
        let q = q_matrix(&g, &gens);
        assert_eq!(q.row_space(0).dim(), 3);
        assert_eq!(minors_space(&q), rk_space(&g, 1));
    }

    #[test]
    fn sl3_generators_and_minors() {
        let g = alg("A2");
        let gens = chevalley_generators(&g).unwrap();
        let degs: Vec<usize> = gens.iter().map(|p| p.degree().unwrap()).collect();
        assert_eq!(degs, vec![2, 3]);
        let q = q_matrix(&g, &gens);
        assert_eq!((q.rows(), q.cols()), (2, 8));
        assert_eq!(q.degrees, vec![1, 2]);
        for i in 0..2 {
            assert_eq!(q.row_space(i).dim(), 8);
        }
        let m = minors_space(&q);
        assert_eq!(m.dim(), 20);
        assert_eq!(m, rk_space(&g, 3));
        assert!(q.rank_at(&g.root_vector(0)) < 2);
        assert_eq!(q.rank_at(&g.regular_nilpotent()), 2);
    }

    #[test]
    fn b2_generators_need_adjustment() {
        let g = alg("B2");
        let rep = defining_rep(&g).unwrap();
        let raw = trace_powers(&rep.generic_matrix(), g.dim(), 4);
        let kd = KillingDual::new(&g);
        // the raw quartic is not orthogonal to the square of the quadratic
        assert!(!kd.pairing(&raw[3], &raw[1].pow(2)).unwrap().is_zero());
        let gens = chevalley_generators(&g).unwrap();
        assert!(kd.pairing(&gens[1], &gens[0].pow(2)).unwrap().is_zero());
        assert!(kd.apply(&gens[0], &gens[1]).is_zero());
        // still a generator: differs from the raw one by a multiple of p2²
        let diff = &raw[3] - &gens[1];
        let sq = gens[0].pow(2);
        let (m, c) = sq.leading().unwrap();
        assert_eq!(diff, sq.scale(&(diff.coefficient(m) / c)));
        let q = q_matrix(&g, &gens);
        assert_eq!(minors_space(&q), rk_space(&g, 4));
    }

    #[test]
    fn d3_pfaffian() {
        let g = alg("D3");
        let gens = chevalley_generators(&g).unwrap();
        let degs: Vec<usize> = gens.iter().map(|p| p.degree().unwrap()).collect();
        assert_eq!(degs, vec![2, 3, 4]);
        assert_eq!(degs.iter().map(|d| d - 1).sum::<usize>(), g.rootsys().r());
    }

    #[test]
    fn pfaffian_small() {
        // Pf [[0, a], [-a, 0]] = a
        let a = Poly::var(1, 0);
        let m = vec![vec![Poly::zero(1), a.clone()], vec![-&a, Poly::zero(1)]];
        assert_eq!(pfaffian(&m, 1), a);
    }

    #[test]
    fn products_enumeration() {
        let p2 = Poly::var(2, 0);
        let p3 = Poly::var(2, 1);
        let prods = products_of_degree(&[(2, p2), (3, p3)], 6, 2);
        assert_eq!(prods.len(), 2);
    }
}
