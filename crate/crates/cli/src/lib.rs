//! Verification runners behind the `sheetcalc` command line.
//!
//! Each runner checks one family of statements on one algebra and returns a
//! [`VerificationReport`]. Checks that would exceed the built-in work limits
//! are reported as skipped with the reason, never silently dropped.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sheetcalc::borelideals::{self, casimir_on_wedge, verify_ideal_theorems, weyl_dimension};
use sheetcalc::chevalley::{sample_elements, LieAlgebra};
use sheetcalc::exterior::Exterior;
use sheetcalc::gammamap::{
    check_adjointness, enumerate_matchings, rk_space, subsets, variety_check,
};
use sheetcalc::identities::{
    epsilon, random_lie_element, std_identity, verify_standard_theorems, RepCase, SquareMatrix,
    StandardConfig,
};
use sheetcalc::invariants::{
    chevalley_generators, defining_rep, minors_space, q_matrix, MatrixRep,
};
use sheetcalc::polyring::{KillingDual, Poly, PolySpace};
use sheetcalc::rootdata::{CartanType, Family, TypeOptions, DEFAULT_MAX_RANK};
use sheetcalc::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the rank budget.
pub const MAX_RANK_ENV: &str = "SHEETCALC_MAX_RANK";

/// Largest degree of the standard identity evaluated by the runners.
pub const IDENTITY_DEGREE_LIMIT: usize = 8;
/// Largest `dim g` for the exact polynomial checks.
pub const POLY_DIM_LIMIT: usize = 15;
/// Above this `dim g`, random elements for the `γ(x^k)` check keep only four
/// nonzero coordinates.
pub const SPARSE_ABOVE_DIM: usize = 10;
/// Largest `dim ∧^k g` for the exact wedge Casimir.
pub const WEDGE_DIM_LIMIT: usize = 600;

pub const THEOREMS: [&str; 9] = [
    "al1",
    "al2",
    "al3",
    "sheets",
    "gamma",
    "minors",
    "harmonic",
    "ideals",
    "casimir-wedge",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Trial counts, dimensions, eigenvalues and the like.
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub cartan_type: String,
    pub theorem: String,
    pub status: Status,
    pub seed: u64,
    pub trials: Option<usize>,
    pub elapsed_ms: u64,
    pub checks: Vec<CheckLine>,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    /// One line per check.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} {} {} ({} ms)\n",
            self.status.label(),
            self.theorem,
            self.cartan_type,
            self.elapsed_ms
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {} {}: {}\n",
                c.status.label(),
                c.name,
                c.detail
            ));
        }
        out
    }
}

struct Builder {
    checks: Vec<CheckLine>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new() }
    }

    fn check(
        &mut self,
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        values: Value,
    ) {
        self.push(name, Status::of(ok), detail, values);
    }

    fn skip(&mut self, name: impl Into<String>, why: impl Into<String>) {
        self.push(name, Status::Skipped, why, json!({}));
    }

    fn push(
        &mut self,
        name: impl Into<String>,
        status: Status,
        detail: impl Into<String>,
        values: Value,
    ) {
        let values = match values {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        self.checks.push(CheckLine {
            name: name.into(),
            status,
            detail: detail.into(),
            values,
        });
    }
}

/// Rank budget from the environment, or the library default.
pub fn type_options() -> Result<TypeOptions> {
    let max_rank = match std::env::var(MAX_RANK_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{MAX_RANK_ENV}={v:?} is not a rank")))?,
        Err(_) => DEFAULT_MAX_RANK,
    };
    Ok(TypeOptions {
        max_rank,
        allow_low_rank_d: true,
    })
}

pub fn parse_type(s: &str) -> Result<CartanType> {
    CartanType::parse_with(s, &type_options()?)
}

/// Runs one theorem family; `theorem` must be one of [`THEOREMS`].
pub fn run_theorem(
    theorem: &str,
    t: CartanType,
    seed: u64,
    trials: Option<usize>,
) -> Result<VerificationReport> {
    let g = LieAlgebra::new(sheetcalc::RootSystem::new(t));
    let start = Instant::now();
    let mut b = Builder::new();
    match theorem {
        "al1" => al1(&g, seed, trials.unwrap_or(100), &mut b)?,
        "al2" => al2(seed, trials.unwrap_or(50), &mut b)?,
        "al3" => al3(&g, seed, trials.unwrap_or(50), &mut b)?,
        "sheets" => sheets(&g, seed, trials.unwrap_or(20), &mut b)?,
        "gamma" => gamma(&g, seed, trials.unwrap_or(200), &mut b)?,
        "minors" => minors(&g, &mut b)?,
        "harmonic" => harmonic(&g, &mut b)?,
        "ideals" => ideals(&g, &mut b)?,
        "casimir-wedge" => casimir_wedge(&g, &mut b)?,
        other => return Err(Error::Config(format!("unknown theorem {other:?}"))),
    }
    let status = if b.checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if b.checks.iter().all(|c| c.status == Status::Skipped) {
        Status::Skipped
    } else {
        Status::Pass
    };
    Ok(VerificationReport {
        version: VERSION.to_string(),
        cartan_type: t.to_string(),
        theorem: theorem.to_string(),
        status,
        seed,
        trials,
        elapsed_ms: start.elapsed().as_millis() as u64,
        checks: b.checks,
    })
}

fn al1(g: &LieAlgebra, seed: u64, trials: usize, b: &mut Builder) -> Result<()> {
    let n = defining_rep(g)?.dim();
    // fixed witness: [[E11, E12, E21]] = 2E11 + E22 in M(2)
    let e = |i, j| SquareMatrix::unit(2, i, j);
    let w = std_identity(&[e(0, 0), e(0, 1), e(1, 0)])?;
    let expect = SquareMatrix::from_ints(&[&[2, 0], &[0, 1]])?;
    b.check(
        "degree-3 witness on M(2)",
        w == expect,
        format!("[[E11,E12,E21]] = {}", w.to_string().replace('\n', " ")),
        json!({}),
    );
    if 2 * n > IDENTITY_DEGREE_LIMIT {
        b.skip(
            format!("M({n}) degree {}", 2 * n),
            format!("degree above the limit {IDENTITY_DEGREE_LIMIT}"),
        );
        return Ok(());
    }
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![n],
        skew_sizes: vec![],
        reps: vec![],
        trials,
        seed,
        matrix_units: true,
    })?;
    for c in rep.cases {
        b.check(
            format!("{} degree {}", c.label, c.degree),
            c.passed(),
            format!("{} tuples, {} nonzero", c.trials, c.nonzero),
            json!({"trials": c.trials, "nonzero": c.nonzero, "lower_degree_witness": c.lower_degree_witness}),
        );
    }
    Ok(())
}

fn al2(seed: u64, trials: usize, b: &mut Builder) -> Result<()> {
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![],
        skew_sizes: vec![2, 4],
        reps: vec![],
        trials,
        seed,
        matrix_units: false,
    })?;
    for c in rep.cases {
        b.check(
            format!("skew {}x{} degree {}", c.size, c.size, c.degree),
            c.passed(),
            format!("{} tuples, {} nonzero", c.trials, c.nonzero),
            json!({"trials": c.trials, "nonzero": c.nonzero, "lower_degree_witness": c.lower_degree_witness}),
        );
    }
    Ok(())
}

fn al3(g: &LieAlgebra, seed: u64, trials: usize, b: &mut Builder) -> Result<()> {
    let t = g.rootsys().cartan_type();
    let def = defining_rep(g)?;
    let adj = MatrixRep::adjoint(g);
    let n = def.dim();
    let eps_def = epsilon(&def, g)?;
    match t.family() {
        Family::A => b.check(
            "ε(defining) = n",
            eps_def == n,
            format!("ε = {eps_def}, n = {n}"),
            json!({"epsilon": eps_def, "n": n}),
        ),
        Family::D => b.check(
            "ε(defining) = n-1",
            eps_def + 1 == n,
            format!("ε = {eps_def}, n = {n}"),
            json!({"epsilon": eps_def, "n": n}),
        ),
        _ => b.push(
            "ε(defining)",
            Status::Pass,
            format!("ε = {eps_def}, n = {n}"),
            json!({"epsilon": eps_def, "n": n}),
        ),
    }
    let mut cases = Vec::new();
    for (label, rep) in [("defining", &def), ("adjoint", &adj)] {
        let eps = epsilon(rep, g)?;
        if 2 * eps > IDENTITY_DEGREE_LIMIT {
            b.skip(
                format!("{label} degree {}", 2 * eps),
                format!("ε = {eps}; degree above the limit {IDENTITY_DEGREE_LIMIT}"),
            );
        } else {
            cases.push(RepCase {
                label: label.to_string(),
                algebra: g,
                rep,
            });
        }
    }
    let rep = verify_standard_theorems(&StandardConfig {
        full_sizes: vec![],
        skew_sizes: vec![],
        reps: cases,
        trials,
        seed,
        matrix_units: false,
    })?;
    for c in rep.cases {
        b.check(
            format!("{} images degree {}", c.label, c.degree),
            c.passed(),
            format!("{} tuples of {}x{} images, {} nonzero", c.trials, c.size, c.size, c.nonzero),
            json!({"trials": c.trials, "nonzero": c.nonzero, "lower_degree_witness": c.lower_degree_witness}),
        );
    }
    Ok(())
}

fn poly_budget(g: &LieAlgebra, b: &mut Builder, name: &str) -> bool {
    if g.dim() > POLY_DIM_LIMIT {
        b.skip(
            name,
            format!("dim g = {} above the limit {POLY_DIM_LIMIT}", g.dim()),
        );
        false
    } else {
        true
    }
}

fn sheets(g: &LieAlgebra, seed: u64, per_stratum: usize, b: &mut Builder) -> Result<()> {
    if !poly_budget(g, b, "sheet varieties") {
        return Ok(());
    }
    let r = g.rootsys().r();
    let mut samples = Vec::new();
    for s in (0..=2 * r).step_by(2) {
        match sample_elements(g, s, per_stratum, seed) {
            Ok(found) => {
                let enough = found.elements.len() >= per_stratum || s == 0;
                b.check(
                    format!("samples in orbit dim {s}"),
                    enough,
                    format!("{} found", found.elements.len()),
                    json!({"stratum": s, "count": found.elements.len()}),
                );
                samples.extend(found.elements);
            }
            Err(Error::UnreachableStratum { .. }) => b.skip(
                format!("samples in orbit dim {s}"),
                "no element found; stratum treated as empty",
            ),
            Err(e) => return Err(e),
        }
    }
    let ext = Exterior::new(g);
    let bad = samples
        .iter()
        .filter(|x| !ext.dx_power_profile(x).consistent())
        .count();
    b.check(
        "max k with (dx)^k ≠ 0 equals orbit dim / 2, witness in ∧[x,g]",
        bad == 0,
        format!("{} samples, {bad} violations", samples.len()),
        json!({"samples": samples.len(), "violations": bad}),
    );
    for k in 1..=r {
        let space = rk_space(g, k);
        let rep = variety_check(g, k, &space, &samples);
        b.check(
            format!("zero locus of R^{k}"),
            rep.passed(),
            format!(
                "dim {}; {} vanish, {} do not, {} violations",
                rep.space_dim,
                rep.vanishing,
                rep.nonvanishing,
                rep.violations.len()
            ),
            json!({"k": k, "dim": rep.space_dim, "vanishing": rep.vanishing, "nonvanishing": rep.nonvanishing, "violations": rep.violations.len()}),
        );
    }
    Ok(())
}

fn gamma(g: &LieAlgebra, seed: u64, trials: usize, b: &mut Builder) -> Result<()> {
    let mut counts = BTreeMap::new();
    for k in 0..=4 {
        counts.insert(k, enumerate_matchings(k).len());
    }
    let ok = counts
        .iter()
        .all(|(&k, &c)| c as u128 == sheetcalc::gammamap::double_factorial_odd(k));
    b.check(
        "matchings counted by (2k-1)!!",
        ok,
        format!("{:?}", counts.values().collect::<Vec<_>>()),
        json!({}),
    );
    if !poly_budget(g, b, "Γ/γ duality") {
        return Ok(());
    }
    let r = g.rootsys().r();
    let mut checked = 0;
    let mut failures = 0;
    for k in 1..=r {
        let rep = check_adjointness(g, k, trials.div_ceil(r), seed.wrapping_add(k as u64));
        checked += rep.checked;
        failures += rep.failures;
    }
    b.check(
        "(Γ(u), p) = (u, γ(p))",
        failures == 0,
        format!("{checked} random pairs, {failures} failures"),
        json!({"pairs": checked, "failures": failures}),
    );

    let ext = Exterior::new(g);
    let kd = KillingDual::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = trials.clamp(1, 50);
    let mut bad = 0;
    for _ in 0..count {
        let mut x = random_lie_element(g, &mut rng);
        if g.dim() > SPARSE_ABOVE_DIM {
            // dense powers in large algebras are very expensive; keep four coordinates
            let keep: Vec<usize> = rand::seq::index::sample(&mut rng, g.dim(), 4).into_vec();
            let coords = (0..g.dim())
                .map(|i| {
                    if keep.contains(&i) {
                        x.coords()[i].clone()
                    } else {
                        sheetcalc::rational::rat(0)
                    }
                })
                .collect();
            x = sheetcalc::LieElement::new(coords);
        }
        let lin = kd.covector(&x);
        let minus_dx = ext.coboundary(&x).scale(&(-sheetcalc::rational::rat(1)));
        for k in 1..=r {
            if ext.gamma_hom(&lin.pow(k)) != minus_dx.pow(k) {
                bad += 1;
            }
        }
    }
    b.check(
        "γ(x^k) = (-dx)^k",
        bad == 0,
        format!("{count} random x, k ≤ {r}, {bad} failures"),
        json!({"elements": count, "failures": bad}),
    );

    let gens = chevalley_generators(g)?;
    let killed = gens.iter().filter(|p| ext.gamma_hom(p).is_zero()).count();
    b.check(
        "γ(p_i) = 0",
        killed == gens.len(),
        format!("{killed} of {} generators", gens.len()),
        json!({"generators": gens.len()}),
    );
    Ok(())
}

fn minors(g: &LieAlgebra, b: &mut Builder) -> Result<()> {
    if !poly_budget(g, b, "minors span") {
        return Ok(());
    }
    let rs = g.rootsys();
    let gens = chevalley_generators(g)?;
    let q = q_matrix(g, &gens);
    let m = minors_space(&q);
    let rk = rk_space(g, rs.r());
    b.check(
        "span of maximal minors of Q = R^r",
        m == rk,
        format!("dims {} and {}", m.dim(), rk.dim()),
        json!({"minors_dim": m.dim(), "rk_dim": rk.dim(), "r": rs.r()}),
    );
    let mut sum = num_bigint::BigInt::from(0);
    for ideal in borelideals::enumerate_ideals(rs, rs.rank()) {
        sum += weyl_dimension(rs, &ideal.weight)?;
    }
    b.check(
        "dim R^r = Σ dim V_⟨Φ⟩ over ideals of size ℓ",
        sum == num_bigint::BigInt::from(rk.dim()),
        format!("{} vs {sum}", rk.dim()),
        json!({"rk_dim": rk.dim(), "weyl_sum": sum.to_string()}),
    );
    let degs: Vec<usize> = q.degrees.clone();
    let ok = degs.iter().sum::<usize>() == rs.r();
    b.check(
        "Σ m_i = r",
        ok,
        format!("exponents {degs:?}"),
        json!({"exponents": degs}),
    );
    Ok(())
}

fn harmonic(g: &LieAlgebra, b: &mut Builder) -> Result<()> {
    if !poly_budget(g, b, "harmonicity") {
        return Ok(());
    }
    let gens = chevalley_generators(g)?;
    let kd = KillingDual::new(g);
    let test = kd.harmonic_test(&gens);
    let q = q_matrix(g, &gens);
    let entries: Vec<&Poly> = q.entries.iter().flatten().collect();
    let bad = entries.iter().filter(|e| !test.is_harmonic(e)).count();
    b.check(
        "Q entries harmonic",
        bad == 0,
        format!("{} entries, {bad} not harmonic", entries.len()),
        json!({"entries": entries.len(), "failures": bad}),
    );
    for i in 0..q.rows() {
        let s: PolySpace = q.row_space(i);
        b.check(
            format!("S_{} has dimension dim g", i + 1),
            s.dim() == g.dim(),
            format!("degree {}, dim {}", q.degrees[i], s.dim()),
            json!({"dim": s.dim()}),
        );
    }
    for k in 1..=g.rootsys().r() {
        let space = rk_space(g, k);
        let bad = space
            .basis()
            .iter()
            .filter(|p| !test.is_harmonic(p))
            .count();
        b.check(
            format!("R^{k} harmonic"),
            bad == 0,
            format!("dim {}, {bad} not harmonic", space.dim()),
            json!({"k": k, "dim": space.dim(), "failures": bad}),
        );
    }
    Ok(())
}

fn ideals(g: &LieAlgebra, b: &mut Builder) -> Result<()> {
    let rep = verify_ideal_theorems(g)?;
    let l = rep.rank;
    b.check(
        "Casimir normalization",
        rep.adjoint_casimir == sheetcalc::rational::rat(1),
        format!("value {} on the adjoint module", rep.adjoint_casimir),
        json!({}),
    );
    b.check(
        format!("ideals of size {l} are abelian"),
        rep.all_abelian && !rep.ideals.is_empty(),
        format!("{} ideals", rep.ideals.len()),
        json!({"ideals": rep.ideals.len()}),
    );
    b.check(
        "weights distinct and dominant",
        rep.weights_distinct && rep.all_dominant,
        format!(
            "{:?}",
            rep.ideals
                .iter()
                .map(|c| c.ideal.weight.clone())
                .collect::<Vec<_>>()
        ),
        json!({}),
    );
    let values: Vec<String> = rep
        .ideals
        .iter()
        .map(|c| sheetcalc::rational::to_string(&c.casimir))
        .collect();
    b.check(
        format!("Casimir value {l} on each weight"),
        rep.casimir_equals_rank,
        values.join(", "),
        json!({"eigenvalues": values}),
    );
    if let Some(p) = rep.partition_number {
        b.check(
            format!("count equals P({l})"),
            rep.count_matches == Some(true),
            format!("{} ideals, P({l}) = {p}", rep.ideals.len()),
            json!({"count": rep.ideals.len(), "partitions": p.to_string()}),
        );
    }
    Ok(())
}

fn casimir_wedge(g: &LieAlgebra, b: &mut Builder) -> Result<()> {
    let n = g.dim();
    for k in 1..=n {
        let d = subsets(n, k).len();
        if d > WEDGE_DIM_LIMIT {
            b.skip(
                format!("∧^{k}"),
                format!("dimension {d} above the limit {WEDGE_DIM_LIMIT}; larger k skipped"),
            );
            break;
        }
        let (_, rep) = casimir_on_wedge(g, k, WEDGE_DIM_LIMIT)?;
        b.check(
            format!("∧^{k}: eigenvalue {k} space"),
            rep.exact_passed(),
            format!(
                "dim {} vs Σ over {} abelian ideals {}, {} wedges e_Φ in it",
                rep.eigenspace_dim, rep.abelian_ideals, rep.ideal_dimension_sum, rep.ideals_in_eigenspace
            ),
            json!({"k": k, "wedge_dim": rep.dim, "eigenspace_dim": rep.eigenspace_dim, "ideal_sum": rep.ideal_dimension_sum}),
        );
        b.check(
            format!("∧^{k}: eigenvalues ≤ {k} (floating point)"),
            rep.bound_holds,
            format!("max {:.9}", rep.max_eigenvalue),
            json!({"max_eigenvalue": rep.max_eigenvalue}),
        );
    }
    Ok(())
}
