//! Verification suites over a built engine. Each suite walks its checks in a
//! deterministic order and reports violations as data; an empty violation
//! list is the expected outcome on a correct build.

use dstar_core::engine::Engine;
use dstar_core::invariants::inv_pairing;
use dstar_core::num_rational::BigRational;
use dstar_core::num_traits::One;
use dstar_core::plancherel::{
    check_factorization_equal, check_scalar_distinct, mu_inverse_distinct, mu_inverse_equal,
    olshanski_limit, q_pow_complex, series_oracle, Complex, OracleInput,
};
use dstar_core::ratio::{as_power_of_q, q_pow, rat_int, v_n, vol_u};
use dstar_core::rng::SplitMix64;
use serde::Serialize;

use crate::config::{RunConfig, Suite, TriplePolicy, EXHAUSTIVE_TRIPLE_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: u64,
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: Suite) -> SuiteOutcome {
        SuiteOutcome {
            name: suite.name().to_string(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Refuse configurations whose exhaustive scans would blow up.
pub fn validate_policy(engine: &Engine, config: &RunConfig) -> anyhow::Result<()> {
    let needs_triples = config
        .suites
        .iter()
        .any(|s| matches!(s, Suite::Cliff | Suite::Ultrametric));
    if needs_triples && config.triples == TriplePolicy::Exhaustive {
        let n = engine.base.num_irreps() as u64;
        let cube = n.saturating_pow(3);
        if cube > EXHAUSTIVE_TRIPLE_CAP {
            anyhow::bail!(
                "{cube} triples exceed the exhaustive cap {EXHAUSTIVE_TRIPLE_CAP}; \
                 use --triples sample:COUNT"
            );
        }
    }
    Ok(())
}

pub fn run_suites(engine: &Engine, config: &RunConfig) -> Vec<SuiteOutcome> {
    let mut suites = config.suites.clone();
    suites.sort_unstable();
    suites.dedup();
    suites
        .into_iter()
        .map(|s| match s {
            Suite::Cliff => cliff_suite(engine, config),
            Suite::Invariants => invariants_suite(engine, config),
            Suite::ConductorIntegrality => conductor_suite(engine),
            Suite::Ultrametric => ultrametric_suite(engine, config),
            Suite::Plancherel => plancherel_suite(engine),
            Suite::Oracle => oracle_suite(engine, config),
            Suite::Norms => norms_suite(engine),
        })
        .collect()
}

fn triples(engine: &Engine, config: &RunConfig, tag: u64) -> Vec<(usize, usize, usize)> {
    let n = engine.base.num_irreps();
    match config.triples {
        TriplePolicy::Exhaustive => {
            let mut out = Vec::with_capacity(n * n * n);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        out.push((a, b, c));
                    }
                }
            }
            out
        }
        TriplePolicy::Sampled { count } => {
            let mut rng = SplitMix64::derive(config.seed, tag);
            (0..count)
                .map(|_| {
                    (
                        rng.below(n as u64) as usize,
                        rng.below(n as u64) as usize,
                        rng.below(n as u64) as usize,
                    )
                })
                .collect()
        }
    }
}

/// The Clifford-theory suite: threshold equivalences of the Hom profile, the
/// scalar character identity on `U_k`, the constituent ratio formula, the
/// distance ultrametric with equal normalized Hom dimensions beyond the
/// threshold, and the twist characterization of distance zero.
fn cliff_suite(engine: &Engine, config: &RunConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Cliff);
    let base = &engine.base;
    let m = base.m();
    let degrees = &base.table.degrees;

    // constituents of a restriction to a normal subgroup share degree and
    // multiplicity
    for i in 0..base.num_irreps() {
        for k in 0..=m {
            out.checked += 1;
            let dec = base.restriction(i, k);
            let (_, d0, e0) = dec[0];
            if !dec.iter().all(|&(_, d, e)| d == d0 && e == e0) {
                out.violations.push(format!(
                    "irrep {i} level {k}: constituents differ in degree or multiplicity: {dec:?}"
                ));
            }
        }
    }

    for pair in &engine.pairs {
        let (i1, i2) = (pair.i1, pair.i2);
        let (d1, d2) = (degrees[i1], degrees[i2]);
        for k in 0..=m {
            out.checked += 1;
            let hom_positive = pair.hom_dims[k] > 0;
            if hom_positive != (k >= pair.dist) {
                out.violations.push(format!(
                    "pair ({i1},{i2}) level {k}: Hom positivity does not match dist = {}",
                    pair.dist
                ));
            }
            let identity = scalar_character_identity(engine, i1, i2, k);
            if identity != (k >= pair.dist) {
                out.violations.push(format!(
                    "pair ({i1},{i2}) level {k}: d2·chi1 = d1·chi2 on U_k is {identity}, dist = {}",
                    pair.dist
                ));
            }
            if k >= pair.dist {
                let dec1 = base.restriction(i1, k);
                let dec2 = base.restriction(i2, k);
                let (_, ds1, _) = dec1[0];
                let (_, ds2, _) = dec2[0];
                if ds1 != ds2 || dec1.len() != dec2.len() {
                    out.violations.push(format!(
                        "pair ({i1},{i2}) level {k}: common-constituent data differ"
                    ));
                }
                // hom/(d1 d2) = 1/(#constituents · d_sigma^2)
                if pair.hom_dims[k] * ds1 * ds1 * dec1.len() as u64 != d1 * d2 {
                    out.violations.push(format!(
                        "pair ({i1},{i2}) level {k}: ratio formula fails: hom = {}, d_sigma = {ds1}, count = {}",
                        pair.hom_dims[k],
                        dec1.len()
                    ));
                }
            }
        }
        out.checked += 1;
        if (pair.dist == 0) != (pair.t_pair > 0) {
            out.violations.push(format!(
                "pair ({i1},{i2}): dist = {} but t_pair = {}",
                pair.dist, pair.t_pair
            ));
        }
        if pair.t_pair > 0 {
            let (t1, t2) = (base.irreps[i1].t, base.irreps[i2].t);
            if pair.t_pair != t1 || t1 != t2 {
                out.violations.push(format!(
                    "pair ({i1},{i2}): t_pair = {} differs from t = {t1}, {t2}",
                    pair.t_pair
                ));
            }
        }
    }

    // part (2): distance ultrametric and equal normalized Hom dimensions
    for (a, b, c) in triples(engine, config, 0xC71F) {
        out.checked += 1;
        let ab = engine.pair(a, b);
        let bc = engine.pair(b, c);
        let ac = engine.pair(a, c);
        let bound = ab.dist.max(bc.dist);
        if ac.dist > bound {
            out.violations.push(format!(
                "triple ({a},{b},{c}): dist {} > max({}, {})",
                ac.dist, ab.dist, bc.dist
            ));
            continue;
        }
        let (da, db, dc) = (degrees[a], degrees[b], degrees[c]);
        for k in bound..=m {
            let nab = BigRational::new(ab.hom_dims[k].into(), (da * db).into());
            let nbc = BigRational::new(bc.hom_dims[k].into(), (db * dc).into());
            let nac = BigRational::new(ac.hom_dims[k].into(), (da * dc).into());
            if nab != nbc || nbc != nac {
                out.violations.push(format!(
                    "triple ({a},{b},{c}) level {k}: normalized Hom dimensions differ"
                ));
            }
        }
    }
    out
}

/// `d2·chi1(u) = d1·chi2(u)` for every u in `U_k`, checked classwise mod l.
fn scalar_character_identity(engine: &Engine, i1: usize, i2: usize, k: usize) -> bool {
    let base = &engine.base;
    let table = &base.table;
    let l = table.ell;
    let counts = base.group.subgroup_class_counts(k).expect("level");
    let d1 = table.degrees[i1] % l;
    let d2 = table.degrees[i2] % l;
    counts.iter().enumerate().all(|(c, &cnt)| {
        cnt == 0
            || dstar_core::modl::mul_mod(d2, table.values[i1][c], l)
                == dstar_core::modl::mul_mod(d1, table.values[i2][c], l)
    })
}

/// Profile shape, unramified-twist invariance, the monotone normalized
/// pairing, the Steinberg anchor and the squared dimension identity.
fn invariants_suite(engine: &Engine, _config: &RunConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Invariants);
    let base = &engine.base;
    let (q, n, m) = (base.q(), base.n(), base.m());
    let degrees = &base.table.degrees;

    for pair in &engine.pairs {
        let (i1, i2) = (pair.i1, pair.i2);
        out.checked += 1;
        if pair.hom_dims.windows(2).any(|w| w[0] > w[1]) {
            out.violations
                .push(format!("pair ({i1},{i2}): Hom profile not monotone"));
        }
        if *pair.hom_dims.last().unwrap() != degrees[i1] * degrees[i2] {
            out.violations
                .push(format!("pair ({i1},{i2}): Hom at full level is not d1·d2"));
        }
        // twisting either argument by any unramified character leaves
        // dist, inv and f-tilde unchanged
        for power in 0..n as u64 {
            out.checked += 1;
            let j2 = base.twisted_index(i2, power);
            let homs = base.hom_profile(i1, j2);
            let dist = dstar_core::invariants::dist_from_homs(&homs);
            let inv = inv_pairing(q, n, m, &homs);
            if dist != pair.dist || inv != pair.inv {
                out.violations.push(format!(
                    "pair ({i1},{i2}): twist by power {power} changes dist or inv"
                ));
            }
        }
        // min form of the self-pairing bound
        out.checked += 1;
        let norm_pair = pair.inv_normalized(degrees[i1], degrees[i2]);
        for i in [i1, i2] {
            let self_norm = BigRational::from(base.irreps[i].inv_self.clone())
                / rat_int((degrees[i] * degrees[i]) as i64);
            if self_norm < norm_pair {
                out.violations.push(format!(
                    "pair ({i1},{i2}): normalized inv exceeds the self-pairing of {i}"
                ));
            }
        }
    }

    // Steinberg anchor: the trivial representation has t = 1, r = n and
    // self-conductor n^2 - n
    out.checked += 1;
    let triv = base.table.trivial_index();
    let rec = &base.irreps[triv];
    if rec.t != 1 || rec.r != n as u64 || rec.f_self != (n as i64) * (n as i64 - 1) {
        out.violations.push(format!(
            "trivial representation: t = {}, r = {}, f = {} (expected 1, {n}, {})",
            rec.t,
            rec.r,
            rec.f_self,
            (n as i64) * (n as i64 - 1)
        ));
    }

    // d = v_n q^{f/2} t (1 - q^{-rt})^{-1}, squared to stay rational
    for rec in &base.irreps {
        out.checked += 1;
        let lhs = rat_int((rec.degree * rec.degree) as i64) * {
            let b = BigRational::one() - q_pow(q, -((rec.r * rec.t) as i64));
            b.clone() * b
        };
        let vn = v_n(q, n);
        let rhs = vn.clone() * vn * q_pow(q, rec.f_self) * rat_int((rec.t * rec.t) as i64);
        if lhs != rhs {
            out.violations.push(format!(
                "irrep {}: squared dimension identity fails",
                rec.idx
            ));
        }
    }
    out
}

/// Integrality and nonnegativity of the conductors, re-derived from scratch.
fn conductor_suite(engine: &Engine) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::ConductorIntegrality);
    let base = &engine.base;
    let (q, n) = (base.q(), base.n());
    let vn = v_n(q, n);
    let vn2 = vn.clone() * vn;
    for pair in &engine.pairs {
        out.checked += 1;
        let (i1, i2) = (pair.i1, pair.i2);
        let d1d2 = base.table.degrees[i1] * base.table.degrees[i2];
        let value = vn2.clone() * &pair.inv / rat_int(d1d2 as i64);
        match as_power_of_q(q, &value) {
            Some(exp) => {
                if -exp != pair.f_tilde {
                    out.violations.push(format!(
                        "pair ({i1},{i2}): recomputed f-tilde {} differs from record {}",
                        -exp, pair.f_tilde
                    ));
                }
            }
            None => out.violations.push(format!(
                "pair ({i1},{i2}): v_n^2 inv/(d1 d2) = {value} is not a power of q"
            )),
        }
        let r1 = base.irreps[i1].r;
        if pair.f != pair.f_tilde - (r1 * pair.t_pair) as i64 {
            out.violations.push(format!(
                "pair ({i1},{i2}): f = {} is not f-tilde - r·t_pair",
                pair.f
            ));
        }
        if pair.f < 0 {
            out.violations
                .push(format!("pair ({i1},{i2}): negative conductor {}", pair.f));
        }
    }
    out
}

/// The conductor ultrametric inequality over triples.
fn ultrametric_suite(engine: &Engine, config: &RunConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Ultrametric);
    let degrees = &engine.base.table.degrees;
    for (a, b, c) in triples(engine, config, 0x0171) {
        out.checked += 1;
        let ab = engine.pair(a, b);
        let bc = engine.pair(b, c);
        let ac = engine.pair(a, c);
        if ac.f_tilde > ab.f_tilde.max(bc.f_tilde) {
            out.violations.push(format!(
                "triple ({a},{b},{c}): f-tilde {} > max({}, {})",
                ac.f_tilde, ab.f_tilde, bc.f_tilde
            ));
        }
        // equivalent min form on the normalized pairings
        let nac = ac.inv_normalized(degrees[a], degrees[c]);
        let nab = ab.inv_normalized(degrees[a], degrees[b]);
        let nbc = bc.inv_normalized(degrees[b], degrees[c]);
        if nac < nab.min(nbc) {
            out.violations.push(format!(
                "triple ({a},{b},{c}): normalized inv below the min bound"
            ));
        }
    }
    out
}

/// Exact density identities: the factorized diagonal form for every
/// irreducible, the scalar form for every positive-distance pair, the
/// `s -> -s` symmetry and the order-2 pole at `Y = 1`.
fn plancherel_suite(engine: &Engine) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Plancherel);
    let base = &engine.base;
    let (q, n) = (base.q(), base.n());
    for rec in &base.irreps {
        out.checked += 1;
        if let Err(e) = check_factorization_equal(q, rec.t, rec.r, rec.degree, &rec.inv_self) {
            out.violations.push(format!("irrep {}: {e}", rec.idx));
        }
        let mu = mu_inverse_equal(&rec.inv_self, rec.t, rec.degree);
        if !mu.eq_fn(&mu.invert_variable()) {
            out.violations.push(format!(
                "irrep {}: density not symmetric under s -> -s",
                rec.idx
            ));
        }
        let order = mu.reduced_denominator_order_at_one();
        if order != 2 {
            out.violations.push(format!(
                "irrep {}: pole order at Y = 1 is {order}, expected 2",
                rec.idx
            ));
        }
        // consequence of the entireness statement: the density times
        // (1 - q^{-s})(1 - q^s) tends to 1/d^2 at s = 0, exactly
        let limit = olshanski_limit(&mu);
        let expect = BigRational::one() / rat_int((rec.degree * rec.degree) as i64);
        if limit != Some(expect) {
            out.violations.push(format!(
                "irrep {}: limit of the regularized density at s = 0 is {limit:?}",
                rec.idx
            ));
        }
    }
    for pair in &engine.pairs {
        if pair.dist == 0 {
            continue;
        }
        out.checked += 1;
        let (i1, i2) = (pair.i1, pair.i2);
        let (d1, d2) = (base.table.degrees[i1], base.table.degrees[i2]);
        if let Err(e) = check_scalar_distinct(q, n, &pair.inv, d1, d2, pair.f) {
            out.violations.push(format!("pair ({i1},{i2}): {e}"));
        }
        let mu = mu_inverse_distinct(&pair.inv, d1, d2);
        if !mu.eq_fn(&mu.invert_variable()) || !mu.is_constant() {
            out.violations.push(format!(
                "pair ({i1},{i2}): constant density expected at positive distance"
            ));
        }
    }
    out
}

/// Shell-sum oracle versus the closed form at seeded sample points in the
/// convergence region.
fn oracle_suite(engine: &Engine, config: &RunConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Oracle);
    let base = &engine.base;
    let (q, n, m) = (base.q(), base.n(), base.m());
    let mut rng = SplitMix64::derive(config.seed, 0x0AC1E);
    for pair in &engine.pairs {
        let (i1, i2) = (pair.i1, pair.i2);
        let (d1, d2) = (base.table.degrees[i1], base.table.degrees[i2]);
        // pairs at distance zero reduce to the diagonal of the first member
        let (closed, input_homs, d1d2, equal_case) = if pair.dist == 0 {
            let rec = &base.irreps[i1];
            (
                mu_inverse_equal(&rec.inv_self, rec.t, rec.degree),
                base.hom_profile(i1, i1),
                rec.degree * rec.degree,
                Some(rec.t),
            )
        } else {
            (
                mu_inverse_distinct(&pair.inv, d1, d2),
                pair.hom_dims.clone(),
                d1 * d2,
                None,
            )
        };
        let input = OracleInput {
            q,
            n,
            m,
            hom_dims: &input_homs,
            d1d2,
            equal_case,
        };
        for _ in 0..5 {
            out.checked += 1;
            let s = Complex::new(-1.5 + 1.2 * rng.unit_f64(), -2.0 + 4.0 * rng.unit_f64());
            let y = q_pow_complex(q, Complex::new(-s.re, -s.im));
            let closed_val = closed.eval(y) * Complex::from_re(d1d2 as f64);
            match series_oracle(&input, s, config.shells) {
                Ok(total) => {
                    let rel = (closed_val - total).abs() / closed_val.abs();
                    // NaN must count as a violation, hence not `rel > tol`
                    if !rel.le(&config.tol) {
                        out.violations.push(format!(
                            "pair ({i1},{i2}) at s = {:.4}+{:.4}i: relative error {rel:.3e}",
                            s.re, s.im
                        ));
                    }
                }
                Err(e) => out.violations.push(format!("pair ({i1},{i2}): {e}")),
            }
        }
    }
    out
}

/// Character-norm facts: the `U_0` norm equals `t`, shell integrals take the
/// value `t` exactly on shells with `t | k` and vanish identically otherwise,
/// the restriction to `U_0` is multiplicity free of length `t`, the length of
/// the restriction to `U_1` is `t(q^n-1)/(q^{rt}-1)`, and, whenever the
/// `U_1`-restriction is multiplicity free, the `U_1` norm identity and the
/// product form of the reducibility relation.
fn norms_suite(engine: &Engine) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Norms);
    let base = &engine.base;
    let (q, n) = (base.q(), base.n());
    for rec in &base.irreps {
        let i = rec.idx;
        let t = rec.t;
        out.checked += 1;
        let u0_norm = base.hom_dim(i, i, 0);
        if u0_norm != t {
            out.violations.push(format!(
                "irrep {i}: U_0 norm {u0_norm} differs from t = {t}"
            ));
        }
        for j in 0..n {
            out.checked += 1;
            let integral = base.shell_integral(i, i, j);
            let vanishes = base.vanishes_on_shell(i, j);
            if (j as u64).is_multiple_of(t) {
                if integral != t || vanishes {
                    out.violations.push(format!(
                        "irrep {i} shell {j}: integral {integral}, expected t = {t}"
                    ));
                }
            } else if integral != 0 || !vanishes {
                out.violations.push(format!(
                    "irrep {i} shell {j}: expected identically zero character"
                ));
            }
        }
        out.checked += 1;
        let dec0 = base.restriction(i, 0);
        if dec0.len() as u64 != t || dec0.iter().any(|&(_, _, e)| e != 1) {
            out.violations.push(format!(
                "irrep {i}: restriction to U_0 is not multiplicity free of length t"
            ));
        }
        // length of the restriction to U_1
        out.checked += 1;
        let dec1 = base.restriction(i, 1);
        let length: u64 = dec1.iter().map(|&(_, _, e)| e).sum();
        let qn = q.pow(n) - 1;
        let qrt = q.pow((rec.r * rec.t) as u32) - 1;
        if t * qn % qrt != 0 || length != t * qn / qrt {
            out.violations.push(format!(
                "irrep {i}: length of the U_1 restriction is {length}, expected t(q^n-1)/(q^rt - 1)"
            ));
        }
        let mult_free_u1 = dec1.iter().all(|&(_, _, e)| e == 1);
        if t == 1 && !mult_free_u1 {
            out.violations.push(format!(
                "irrep {i}: t = 1 but the U_1 restriction is not multiplicity free"
            ));
        }
        if mult_free_u1 {
            out.checked += 1;
            // integral of |chi|^2 over U_1 equals t/(q^{rt} - 1)
            let u1_integral = vol_u(q, n, 1) * rat_int(base.hom_dim(i, i, 1) as i64);
            let expected = rat_int(t as i64) / rat_int(qrt as i64);
            if u1_integral != expected {
                out.violations.push(format!(
                    "irrep {i}: U_1 norm {u1_integral} differs from t/(q^rt - 1)"
                ));
            }
            // inv = (t + u1) · u1, the product form of the reducibility relation
            let product = (rat_int(t as i64) + u1_integral.clone()) * u1_integral;
            if product != rec.inv_self {
                out.violations.push(format!(
                    "irrep {i}: product identity differs from inv = {}",
                    rec.inv_self
                ));
            }
        }
    }
    out
}
