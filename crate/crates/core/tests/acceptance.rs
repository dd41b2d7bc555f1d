//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sheetcalc::borelideals::{
    casimir_on_wedge, enumerate_ideals, verify_ideal_theorems, weyl_dimension,
};
use sheetcalc::chevalley::{sample_elements, LieAlgebra};
use sheetcalc::exterior::{ExtElement, Exterior};
use sheetcalc::gammamap::{
    check_adjointness, double_factorial_odd, enumerate_matchings, gamma_map, rk_space, subsets,
    variety_check,
};
use sheetcalc::identities::{
    epsilon, random_lie_element, std_identity, verify_standard_theorems, RepCase, SquareMatrix,
    StandardConfig,
};
use sheetcalc::invariants::{chevalley_generators, defining_rep, minors_space, q_matrix};
use sheetcalc::polyring::{KillingDual, Monomial, Poly};
use sheetcalc::rational::rat;
use sheetcalc::rootdata::{CartanType, Family, TypeOptions};
use sheetcalc::{Error, RootSystem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn alg(s: &str) -> LieAlgebra {
    LieAlgebra::new(RootSystem::new(s.parse::<CartanType>().unwrap()))
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Alternating sum over all permutations, with the sign read off from the
/// inversion count.
fn permutation_expansion(xs: &[SquareMatrix]) -> SquareMatrix {
    fn perms(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == v.len() {
            out.push(v.clone());
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            perms(v, i + 1, out);
            v.swap(i, j);
        }
    }
    let mut all = Vec::new();
    perms(&mut (0..xs.len()).collect(), 0, &mut all);
    let n = xs[0].n();
    let mut acc = SquareMatrix::zero(n);
    for p in all {
        let inv = (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let prod = p
            .iter()
            .fold(SquareMatrix::identity(n), |m, &i| m.mul(&xs[i]));
        acc.axpy(&rat(if inv % 2 == 0 { 1 } else { -1 }), &prod);
    }
    acc
}

fn criterion_1() -> Outcome {
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![2, 3],
        skew_sizes: vec![],
        reps: vec![],
        trials: 100,
        seed: 1,
        matrix_units: true,
    })
    .map_err(err)?;
    let mut parts = Vec::new();
    for c in &rep.cases {
        ensure(
            c.passed(),
            format!("{} degree {}: {} nonzero", c.label, c.degree, c.nonzero),
        )?;
        parts.push(format!("{} deg {} over {}", c.label, c.degree, c.trials));
    }
    ensure(
        rep.cases.len() == 4,
        "expected random and matrix-unit cases for n = 2, 3",
    )?;

    let e = |i, j| SquareMatrix::unit(2, i, j);
    let xs = [e(0, 0), e(0, 1), e(1, 0)];
    let fast = std_identity(&xs).map_err(err)?;
    let oracle = permutation_expansion(&xs);
    let expect = SquareMatrix::from_ints(&[&[2, 0], &[0, 1]]).map_err(err)?;
    ensure(
        oracle == expect,
        "permutation expansion of [[E11,E12,E21]] is not 2E11+E22",
    )?;
    ensure(
        fast == oracle,
        "degree-3 witness differs from the permutation expansion",
    )?;
    parts.push("[[E11,E12,E21]] = 2E11+E22".into());
    Ok(parts.join("; "))
}

fn criterion_2() -> Outcome {
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![],
        skew_sizes: vec![2, 4],
        reps: vec![],
        trials: 50,
        seed: 2,
        matrix_units: false,
    })
    .map_err(err)?;
    let mut parts = Vec::new();
    for c in &rep.cases {
        ensure(
            c.passed(),
            format!("{} degree {}: {} nonzero", c.label, c.degree, c.nonzero),
        )?;
        parts.push(format!("{} deg {} over {}", c.label, c.degree, c.trials));
    }
    let degrees: Vec<usize> = rep.cases.iter().map(|c| c.degree).collect();
    ensure(degrees == [2, 6], format!("unexpected degrees {degrees:?}"))?;
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let opts = TypeOptions {
        allow_low_rank_d: true,
        ..TypeOptions::default()
    };
    let a2 = alg("A2");
    let d2 = LieAlgebra::new(RootSystem::new(
        CartanType::with_options(Family::D, 2, &opts).map_err(err)?,
    ));
    let (ra, rd) = (
        defining_rep(&a2).map_err(err)?,
        defining_rep(&d2).map_err(err)?,
    );
    let (ea, ed) = (
        epsilon(&ra, &a2).map_err(err)?,
        epsilon(&rd, &d2).map_err(err)?,
    );
    ensure(ea == 3, format!("ε(A2 defining) = {ea}"))?;
    ensure(ed == 3, format!("ε(D2 defining) = {ed}"))?;
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![],
        skew_sizes: vec![],
        reps: vec![
            RepCase {
                label: "A2 defining".into(),
                algebra: &a2,
                rep: &ra,
            },
            RepCase {
                label: "D2 defining".into(),
                algebra: &d2,
                rep: &rd,
            },
        ],
        trials: 50,
        seed: 3,
        matrix_units: false,
    })
    .map_err(err)?;
    for c in &rep.cases {
        ensure(c.degree == 6, format!("{} degree {}", c.label, c.degree))?;
        ensure(
            c.passed(),
            format!("{}: {} of {} nonzero", c.label, c.nonzero, c.trials),
        )?;
    }
    Ok(format!(
        "ε = 3 for A2 and D2; degree-6 identity on images, {} trials each",
        rep.cases[0].trials
    ))
}

/// Set partitions of `0..2k` into pairs, read off every permutation.
fn pair_partitions_brute(k: usize) -> BTreeSet<Vec<(usize, usize)>> {
    fn perms(v: &mut Vec<usize>, i: usize, out: &mut BTreeSet<Vec<(usize, usize)>>) {
        if i == v.len() {
            let mut pairs: Vec<(usize, usize)> = v
                .chunks(2)
                .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
                .collect();
            pairs.sort_unstable();
            out.insert(pairs);
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            perms(v, i + 1, out);
            v.swap(i, j);
        }
    }
    let mut out = BTreeSet::new();
    perms(&mut (0..2 * k).collect(), 0, &mut out);
    out
}

fn criterion_4() -> Outcome {
    let mut counts = Vec::new();
    for k in 0..=8 {
        let n = enumerate_matchings(k).len() as u128;
        let expect: u128 = (1..=k as u128).map(|i| 2 * i - 1).product();
        ensure(
            n == expect && double_factorial_odd(k) == expect,
            format!("k = {k}: {n} matchings, (2k-1)!! = {expect}"),
        )?;
        counts.push(n);
    }
    for k in 1..=4 {
        let ours: BTreeSet<Vec<(usize, usize)>> = enumerate_matchings(k)
            .iter()
            .map(|m| m.pairs().to_vec())
            .collect();
        let brute = pair_partitions_brute(k);
        ensure(
            ours.len() == enumerate_matchings(k).len() && ours == brute,
            format!("k = {k}: matchings differ from pair partitions"),
        )?;
    }
    Ok(format!(
        "counts {counts:?}; bijection with pair partitions for k ≤ 4"
    ))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for (name, expect) in [("A1", Some(3)), ("A2", Some(20)), ("B2", None)] {
        let g = alg(name);
        let gens = chevalley_generators(&g).map_err(err)?;
        let m = minors_space(&q_matrix(&g, &gens));
        let rk = rk_space(&g, g.rootsys().r());
        ensure(
            m == rk,
            format!(
                "{name}: minors span dim {} vs R^r dim {}",
                m.dim(),
                rk.dim()
            ),
        )?;
        if let Some(d) = expect {
            ensure(
                rk.dim() == d,
                format!("{name}: dim R^r = {}, expected {d}", rk.dim()),
            )?;
        }
        parts.push(format!("{name} dim {}", rk.dim()));
    }
    let rs = RootSystem::new("A2".parse().unwrap());
    let dims: Vec<BigInt> = enumerate_ideals(&rs, 2)
        .iter()
        .map(|i| weyl_dimension(&rs, &i.weight))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(
        dims == [BigInt::from(10), BigInt::from(10)],
        format!("A2 Weyl dimensions {dims:?}"),
    )?;
    parts.push("A2 = 10 + 10".into());
    Ok(parts.join("; "))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for name in ["A1", "A2", "B2"] {
        let g = alg(name);
        let gens = chevalley_generators(&g).map_err(err)?;
        let test = KillingDual::new(&g).harmonic_test(&gens);
        let q = q_matrix(&g, &gens);
        let mut checked = 0;
        for e in q.entries.iter().flatten() {
            ensure(
                test.is_harmonic(e),
                format!("{name}: Q entry {e} not harmonic"),
            )?;
            checked += 1;
        }
        for k in 1..=g.rootsys().r() {
            for p in rk_space(&g, k).basis() {
                ensure(
                    test.is_harmonic(p),
                    format!("{name}: element of R^{k} not harmonic"),
                )?;
                checked += 1;
            }
        }
        parts.push(format!("{name} {checked} polynomials"));
    }
    Ok(parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for name in ["A1", "A2", "B2"] {
        let g = alg(name);
        let r = g.rootsys().r();
        let ext = Exterior::new(&g);
        let mut samples = Vec::new();
        let mut strata = Vec::new();
        for s in (0..=2 * r).step_by(2) {
            match sample_elements(&g, s, 20, 7) {
                Ok(found) => {
                    // the zero element is the only point of orbit dimension 0
                    let need = if s == 0 { 1 } else { 20 };
                    ensure(
                        found.elements.len() >= need,
                        format!("{name}: {} samples in orbit dim {s}", found.elements.len()),
                    )?;
                    strata.push(format!("{s}:{}", found.elements.len()));
                    samples.extend(found.elements);
                }
                Err(Error::UnreachableStratum { .. }) => strata.push(format!("{s}:empty")),
                Err(e) => return Err(err(e)),
            }
        }
        for x in &samples {
            ensure(
                ext.dx_power_profile(x).consistent(),
                format!("{name}: dx profile inconsistent"),
            )?;
        }
        for k in 1..=r {
            let space = rk_space(&g, k);
            let rep = variety_check(&g, k, &space, &samples);
            ensure(
                rep.passed(),
                format!(
                    "{name}: zero locus of R^{k} has {} violations",
                    rep.violations.len()
                ),
            )?;
        }
        parts.push(format!("{name} [{}]", strata.join(" ")));
    }
    Ok(parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();

    // full bases on A1: ∧^2 g against degree-1 monomials
    let g = alg("A1");
    let n = g.dim();
    let ext = Exterior::new(&g);
    let kd = KillingDual::new(&g);
    let mut full = 0;
    for k in 1..=n / 2 {
        for idx in subsets(n, 2 * k) {
            let xs: Vec<_> = idx.iter().map(|&i| g.basis_element(i)).collect();
            let big = gamma_map(&g, &xs).map_err(err)?;
            let wedge = ExtElement::basis_wedge(n, &idx);
            for mono in subsets(n + k - 1, k) {
                // stars and bars: a k-multiset of variables
                let mut exps = vec![0u8; n];
                for (pos, &c) in mono.iter().enumerate() {
                    exps[c - pos] += 1;
                }
                let p = Poly::from_terms(n, [(Monomial::from_exponents(exps), rat(1))]);
                let lhs = kd.pairing(&big, &p).map_err(err)?;
                let rhs = ext.ext_pairing(&wedge, &ext.gamma_hom(&p));
                ensure(lhs == rhs, format!("A1 adjointness fails on {idx:?}"))?;
                full += 1;
            }
        }
    }
    parts.push(format!("A1 {full} basis pairs"));

    let a2 = alg("A2");
    let mut pairs = 0;
    for k in 1..=a2.rootsys().r() {
        let rep = check_adjointness(&a2, k, 70, 80 + k as u64);
        ensure(
            rep.passed(),
            format!("A2 adjointness: {} failures at k = {k}", rep.failures),
        )?;
        pairs += rep.checked;
    }
    ensure(pairs >= 200, format!("only {pairs} A2 pairs"))?;
    parts.push(format!("A2 {pairs} random pairs"));

    for name in ["A1", "A2"] {
        let g = alg(name);
        let ext = Exterior::new(&g);
        let kd = KillingDual::new(&g);
        let r = g.rootsys().r();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = random_lie_element(&g, &mut rng);
            let lin = kd.covector(&x);
            let minus_dx = ext.coboundary(&x).scale(&rat(-1));
            for k in 1..=r {
                ensure(
                    ext.gamma_hom(&lin.pow(k)) == minus_dx.pow(k),
                    format!("{name}: γ(x^{k}) ≠ (-dx)^{k}"),
                )?;
            }
        }
    }
    parts.push("γ(x^k) = (-dx)^k for 50 x on A1, A2".into());

    for name in ["A1", "A2", "B2"] {
        let g = alg(name);
        let ext = Exterior::new(&g);
        for p in chevalley_generators(&g).map_err(err)? {
            ensure(ext.gamma_hom(&p).is_zero(), format!("{name}: γ(p) ≠ 0"))?;
        }
    }
    parts.push("γ(p_i) = 0 on A1, A2, B2".into());
    Ok(parts.join("; "))
}

fn criterion_9() -> Outcome {
    let mut counts = Vec::new();
    for l in 1..=5 {
        let rep = verify_ideal_theorems(&alg(&format!("A{l}"))).map_err(err)?;
        ensure(rep.passed(), format!("A{l} fails"))?;
        counts.push(rep.ideals.len());
    }
    ensure(counts == [1, 2, 3, 5, 7], format!("counts {counts:?}"))?;
    for name in ["B2", "D4"] {
        let rep = verify_ideal_theorems(&alg(name)).map_err(err)?;
        ensure(
            rep.all_abelian && rep.weights_distinct && rep.all_dominant && rep.casimir_equals_rank,
            format!("{name} fails"),
        )?;
    }
    Ok(format!("A1-A5 counts {counts:?}; B2 and D4 pass"))
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    let mut max_ok = true;
    for (name, k, expect, ideals) in [
        ("A1", 1, 3, None),
        ("A1", 2, 0, None),
        ("A2", 2, 20, Some(2)),
    ] {
        let g = alg(name);
        let (_, rep) = casimir_on_wedge(&g, k, 5000).map_err(err)?;
        ensure(
            rep.eigenspace_dim == expect,
            format!(
                "{name} k={k}: eigenspace dim {}, expected {expect}",
                rep.eigenspace_dim
            ),
        )?;
        if let Some(m) = ideals {
            ensure(
                rep.abelian_ideals == m && rep.ideals_in_eigenspace == m,
                format!(
                    "{name} k={k}: {} of {} wedges e_Φ in the eigenspace",
                    rep.ideals_in_eigenspace, rep.abelian_ideals
                ),
            )?;
        }
        max_ok &= rep.bound_holds;
        parts.push(format!(
            "{name} k={k} dim {} (max eigenvalue {:.9})",
            rep.eigenspace_dim, rep.max_eigenvalue
        ));
    }
    parts.push(format!(
        "numeric bound {}",
        if max_ok {
            "holds"
        } else {
            "VIOLATED (informational)"
        }
    ));
    Ok(parts.join("; "))
}

fn criterion_11() -> Outcome {
    let mut built = Vec::new();
    let mut checked = 0usize;
    for family in [Family::A, Family::B, Family::C, Family::D] {
        for l in 1..=sheetcalc::rootdata::DEFAULT_MAX_RANK {
            let Ok(t) = CartanType::new(family, l) else {
                continue;
            };
            let g = LieAlgebra::new(RootSystem::new(t));
            let def = defining_rep(&g).map_err(err)?;
            for (what, c) in [
                ("antisymmetry", g.check_antisymmetry()),
                ("Jacobi", g.check_jacobi()),
                ("Killing invariance", g.check_killing_invariance()),
                ("normalization", g.check_chevalley_normalization()),
                ("homomorphism", def.check_homomorphism(&g)),
            ] {
                ensure(
                    c.passed(),
                    format!("{t}: {what} fails on {} of {}", c.failures, c.checked),
                )?;
                checked += c.checked;
            }
            built.push(t.to_string());
        }
    }
    Ok(format!(
        "{} algebras ({}), {checked} exact checks",
        built.len(),
        built.join(" ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("standard identity on M(2), M(3)", criterion_1),
        ("skew-symmetric identity", criterion_2),
        ("ε and identities on representation images", criterion_3),
        ("matching combinatorics", criterion_4),
        ("minors span equals R^r", criterion_5),
        ("harmonicity", criterion_6),
        ("sheet varieties", criterion_7),
        ("γ/Γ duality", criterion_8),
        ("ideals and Casimir", criterion_9),
        ("Casimir on wedges", criterion_10),
        ("structural exactness", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1} s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
