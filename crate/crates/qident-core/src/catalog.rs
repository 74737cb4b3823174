//! The identity catalog: every verified identity as a self-describing
//! record with builders, term bounds, verification modes, and a driver.
//!
//! Records verify in one or both of two modes:
//!
//! * `series` — parameters stay symbolic; both sides are expanded as exact
//!   truncated multivariate series (or exact fractions for the finite
//!   families) and compared coefficientwise on the requested window;
//! * `sample` — parameters are bound to exact rationals drawn
//!   deterministically from a seed, and the resulting one-variable q-series
//!   (or rational-function) identities are checked exactly, once per
//!   sample.
//!
//! Records whose right-hand sides are only formally convergent with
//! symbolic parameters (sums whose terms carry no positive q-power, so a
//! scalar substitution would need infinitely many terms per coefficient)
//! are series-only.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bailey::{
    bailey_lemma_sides, beta_from_alpha, closing_sum_sides, conc_i_sides, gamma_sum,
    gamma_weighted_sum, pair_double_square, pair_square, rational_samples, square_weighted_sum,
    success_sides, two_sided_alpha_sum, BaileyPair, MonomialParam, PairKind, RhoSpec,
};
use crate::finite::{
    finite_q_identity_sides, t_closed_s0, t_closed_s1, t_recurrence_residual, t_sum, SMode,
};
use crate::inversion::{lambda_frac, lambda_oracle};
use crate::poly::SparsePoly;
use crate::qfrac::PochFrac;
use crate::qtools::{frac_div_poch, poch_infinite, poly_poch, q_binomial, qvec};
use crate::scalar::{self, ExactScalar};
use crate::series::{SeriesCmp, TruncatedSeries};
use crate::vars::{AlgebraError, ExponentVector, TruncationProfile, VarRegistry};

// ---------------------------------------------------------------------------
// Outcome types
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Series,
    Sample,
}

impl VerifyMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyMode::Series => "series",
            VerifyMode::Sample => "sample",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl VerifyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyStatus::Pass => "PASS",
            VerifyStatus::Fail => "FAIL",
            VerifyStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// A concrete coefficient mismatch: the exponent of each variable at the
/// first differing monomial, with both coefficients rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub exponents: Vec<(String, i64)>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct VerificationOutcome {
    pub id: &'static str,
    pub status: VerifyStatus,
    pub mode: VerifyMode,
    /// Caps actually used, sorted by variable name.
    pub caps: Vec<(String, i64)>,
    pub witness: Option<Witness>,
    /// Human-oriented context (failing family member, inconclusive reason).
    /// Not part of the machine-readable report schema.
    pub detail: String,
}

/// Options for one verification run.
#[derive(Clone, Debug)]
pub struct VerifyRequest {
    /// Cap overrides by variable name (`q` included); unspecified variables
    /// use the record defaults.
    pub caps: BTreeMap<String, i64>,
    pub mode: VerifyMode,
    pub samples: u32,
    pub seed: u64,
    /// Harness self-test: perturb the right-hand side by `+1` before
    /// comparing, which must flip every record to FAIL.
    pub mutate_rhs: bool,
}

impl Default for VerifyRequest {
    fn default() -> Self {
        VerifyRequest {
            caps: BTreeMap::new(),
            mode: VerifyMode::Series,
            samples: 5,
            seed: 0,
            mutate_rhs: false,
        }
    }
}

pub struct IdentityRecord {
    pub id: &'static str,
    pub description: &'static str,
    /// Non-q parameters, in registry order.
    pub params: &'static [&'static str],
    /// Default caps; for the finite (fraction-valued) families the `q` cap
    /// doubles as the family depth bound.
    pub default_caps: &'static [(&'static str, i64)],
    pub modes: &'static [VerifyMode],
    pub min_q_cap: i64,
    run: fn(&RunCtx) -> Result<RunOut, AlgebraError>,
}

impl IdentityRecord {
    pub fn supports(&self, mode: VerifyMode) -> bool {
        self.modes.contains(&mode)
    }
}

struct RunCtx {
    caps: BTreeMap<String, i64>,
    mode: VerifyMode,
    samples: u32,
    seed: u64,
    mutate: bool,
}

impl RunCtx {
    fn cap(&self, name: &str) -> i64 {
        *self
            .caps
            .get(name)
            .unwrap_or_else(|| panic!("missing cap for `{name}`"))
    }
}

enum RunOut {
    Pass,
    Fail {
        witness: Option<Witness>,
        detail: String,
    },
    Inconclusive(String),
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

pub fn catalog() -> &'static [IdentityRecord] {
    CATALOG
}

pub fn find_record(id: &str) -> Option<&'static IdentityRecord> {
    CATALOG.iter().find(|r| r.id == id)
}

pub fn verify(record: &'static IdentityRecord, req: &VerifyRequest) -> VerificationOutcome {
    let mut caps: BTreeMap<String, i64> = record
        .default_caps
        .iter()
        .map(|(n, v)| (String::from(*n), *v))
        .collect();
    for (n, v) in &req.caps {
        if caps.contains_key(n) {
            caps.insert(n.clone(), *v);
        }
    }
    let caps_list: Vec<(String, i64)> = caps.iter().map(|(n, v)| (n.clone(), *v)).collect();
    let mk = |status, witness, detail| VerificationOutcome {
        id: record.id,
        status,
        mode: req.mode,
        caps: caps_list.clone(),
        witness,
        detail,
    };

    if !record.supports(req.mode) {
        return mk(
            VerifyStatus::Inconclusive,
            None,
            format!("mode `{}` not supported by {}", req.mode.as_str(), record.id),
        );
    }
    if caps.get("q").copied().unwrap_or(0) < record.min_q_cap {
        return mk(
            VerifyStatus::Inconclusive,
            None,
            format!("q cap below record minimum {}", record.min_q_cap),
        );
    }
    let ctx = RunCtx {
        caps,
        mode: req.mode,
        samples: req.samples.max(1),
        seed: req.seed,
        mutate: req.mutate_rhs,
    };
    match (record.run)(&ctx) {
        Ok(RunOut::Pass) => mk(VerifyStatus::Pass, None, String::new()),
        Ok(RunOut::Fail { witness, detail }) => mk(VerifyStatus::Fail, witness, detail),
        Ok(RunOut::Inconclusive(d)) => mk(VerifyStatus::Inconclusive, None, d),
        Err(e) => mk(VerifyStatus::Inconclusive, None, format!("algebra error: {e}")),
    }
}

/// Verify every record at its defaults (with the request's overrides).
pub fn verify_all(req: &VerifyRequest) -> Vec<VerificationOutcome> {
    CATALOG
        .iter()
        .map(|r| {
            let mut req = req.clone();
            if !r.supports(req.mode) {
                // verify-all sweeps run every record in its richest mode
                req.mode = VerifyMode::Series;
            }
            verify(r, &req)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------------

fn mk_witness(
    registry: &Arc<VarRegistry>,
    e: &ExponentVector,
    lhs: &ExactScalar,
    rhs: &ExactScalar,
) -> Witness {
    Witness {
        exponents: registry
            .names()
            .zip(e.0.iter())
            .map(|(n, x)| (String::from(n), *x))
            .collect(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// A parameter assignment: symbolic variables (series mode) or one tuple of
/// exact rational values (sample mode).
struct Binding {
    registry: Arc<VarRegistry>,
    vals: BTreeMap<String, MonomialParam>,
    label: String,
}

impl Binding {
    fn get(&self, name: &str) -> &MonomialParam {
        &self.vals[name]
    }
}

fn make_bindings(ctx: &RunCtx, params: &[&str]) -> Vec<Binding> {
    match ctx.mode {
        VerifyMode::Series => {
            let registry = if params.is_empty() {
                VarRegistry::q_only()
            } else {
                VarRegistry::with_params(params)
            };
            let vals = params
                .iter()
                .map(|p| (String::from(*p), MonomialParam::variable(&registry, p)))
                .collect();
            alloc::vec![Binding {
                registry,
                vals,
                label: String::from("symbolic"),
            }]
        }
        VerifyMode::Sample => {
            let registry = VarRegistry::q_only();
            let pool = rational_samples(ctx.seed, ctx.samples as usize * params.len().max(1), &[]);
            (0..ctx.samples as usize)
                .map(|i| {
                    let mut vals = BTreeMap::new();
                    let mut label = String::from("sample");
                    for (j, p) in params.iter().enumerate() {
                        let v = pool[i * params.len() + j].clone();
                        label.push_str(&format!(" {p}={v}"));
                        vals.insert(String::from(*p), MonomialParam::constant(&registry, v));
                    }
                    Binding {
                        registry: registry.clone(),
                        vals,
                        label,
                    }
                })
                .collect()
        }
    }
}

/// Window with cap `ctx.caps[v]` for every registry variable.
fn profile_of(ctx: &RunCtx, registry: &Arc<VarRegistry>) -> TruncationProfile {
    let caps: Vec<(&str, i64)> = registry.names().map(|n| (n, ctx.cap(n))).collect();
    TruncationProfile::caps(registry, &caps)
}

/// Same window with the q cap raised by `extra` (headroom for summands
/// whose numerators reach below q^0).
fn extend_q(profile: &TruncationProfile, registry: &Arc<VarRegistry>, extra: i64) -> TruncationProfile {
    let mut maxs = profile.maxs().to_vec();
    maxs[registry.q_index()] += extra;
    TruncationProfile::from_bounds(profile.mins().to_vec(), maxs)
}

fn check_series(
    registry: &Arc<VarRegistry>,
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
    required: &TruncationProfile,
    mutate: bool,
    context: &str,
) -> Result<RunOut, AlgebraError> {
    let rhs = if mutate {
        rhs.add(&TruncatedSeries::one(registry))?
    } else {
        rhs.clone()
    };
    Ok(match lhs.equal_on(&rhs, required)? {
        SeriesCmp::Pass => RunOut::Pass,
        SeriesCmp::Fail { exponent, lhs, rhs } => RunOut::Fail {
            witness: Some(mk_witness(registry, &exponent, &lhs, &rhs)),
            detail: String::from(context),
        },
        SeriesCmp::Inconclusive => {
            RunOut::Inconclusive(format!("exact region below requested window ({context})"))
        }
    })
}

fn check_frac(lhs: &PochFrac, rhs: &PochFrac, mutate: bool, context: &str) -> RunOut {
    let rhs = if mutate {
        rhs.add(&PochFrac::one(rhs.registry()))
    } else {
        rhs.clone()
    };
    match lhs.difference_witness(&rhs) {
        None => RunOut::Pass,
        Some((e, l, r)) => RunOut::Fail {
            witness: Some(mk_witness(lhs.registry(), &e, &l, &r)),
            detail: String::from(context),
        },
    }
}

fn run_bindings<F>(ctx: &RunCtx, params: &[&str], f: F) -> Result<RunOut, AlgebraError>
where
    F: Fn(&Binding) -> Result<RunOut, AlgebraError>,
{
    for b in make_bindings(ctx, params) {
        match f(&b)? {
            RunOut::Pass => {}
            RunOut::Fail { witness, detail } => {
                return Ok(RunOut::Fail {
                    witness,
                    detail: format!("{} [{}]", detail, b.label),
                })
            }
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn one() -> ExactScalar {
    scalar::one()
}

fn inf_prod(
    x: &SparsePoly,
    base: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    poch_infinite(&TruncatedSeries::from_poly_entire(x.clone()), base, profile)
}

fn inv_inf_prod(
    x: &SparsePoly,
    base: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    inf_prod(x, base, profile)?.invert(profile)
}

/// `-p*q` for a monomial parameter (the argument of `(-cq; q)_n` factors).
fn neg_q(registry: &Arc<VarRegistry>, p: &MonomialParam) -> MonomialParam {
    let t = p.times_q(registry, 1);
    MonomialParam { e: t.e, c: -t.c }
}

/// Divide by `(p; q^base)_n` for a monomial parameter.
fn div_poch_param(
    f: &PochFrac,
    p: &MonomialParam,
    base: i64,
    n: i64,
) -> Result<PochFrac, AlgebraError> {
    frac_div_poch(f, &p.e, &p.c, base, n)
}

/// `h_n(x, y | q^2) = sum_k [n k]_{q^2} x^k y^{n-k}` for polynomial
/// arguments.
fn rs_poly(registry: &Arc<VarRegistry>, n: i64, x: &SparsePoly, y: &SparsePoly) -> SparsePoly {
    let mut acc = SparsePoly::zero(registry);
    for k in 0..=n {
        acc = acc.add(
            &q_binomial(registry, n, k, 2)
                .mul(&x.pow(k as u64))
                .mul(&y.pow((n - k) as u64)),
        );
    }
    acc
}

// ---------------------------------------------------------------------------
// Shared builders (also exercised directly by the acceptance tests)
// ---------------------------------------------------------------------------

/// `sum_n (a,b;q)_n q^{n(n+1)/2 + shift*n} c^n / ((q;q)_n (a b q^s; q^2)_n)`
/// summed while the dominant q-power stays at or below the q cap and the
/// explicit `c^n` stays at or below `ccap`.
pub fn gen_lhs(
    registry: &Arc<VarRegistry>,
    a: &MonomialParam,
    b: &MonomialParam,
    c: &MonomialParam,
    s: i64,
    shift: i64,
    ccap: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let qcap = profile.max(registry.q_index());
    let abqs = a.times(b).times_q(registry, s);
    let mut acc = TruncatedSeries::zero(registry);
    let mut n = 0i64;
    loop {
        let power = n * (n + 1) / 2 + shift * n;
        if power > qcap || n > ccap {
            break;
        }
        let num = poly_poch(&a.poly(registry), 1, n)
            .mul(&poly_poch(&b.poly(registry), 1, n))
            .mul(&SparsePoly::q_pow(registry, one(), power))
            .mul(&c.pow_poly(registry, n));
        let mut f = PochFrac::from_poly(num);
        f = frac_div_poch(&f, &qvec(registry, 1), &one(), 1, n)?;
        f = div_poch_param(&f, &abqs, 2, n)?;
        acc = acc.add(&f.to_series(profile)?)?;
        n += 1;
    }
    Ok(acc)
}

/// `sum_{n=0}^{nmax} h_n(x, y | q^2) / ((q;q)_n (-cq;q)_n)`; with `c`
/// absent the plain `1/(q;q)_n` generating sum.
pub fn rs_pochhammer_sum(
    registry: &Arc<VarRegistry>,
    x: &SparsePoly,
    y: &SparsePoly,
    c: Option<&MonomialParam>,
    nmax: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let mut acc = TruncatedSeries::zero(registry);
    for n in 0..=nmax {
        let mut f = PochFrac::from_poly(rs_poly(registry, n, x, y));
        f = frac_div_poch(&f, &qvec(registry, 1), &one(), 1, n)?;
        if let Some(c) = c {
            let m = neg_q(registry, c);
            f = div_poch_param(&f, &m, 1, n)?;
        }
        acc = acc.add(&f.to_series(profile)?)?;
    }
    Ok(acc)
}

/// `(-cq,a,b;q)_inf / (abq;q^2)_inf * sum_n h_n(a,b|q^2)/((q,-cq;q)_n)`.
pub fn gen_i_rhs(
    registry: &Arc<VarRegistry>,
    a: &MonomialParam,
    b: &MonomialParam,
    c: &MonomialParam,
    nmax: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let ncq = neg_q(registry, c);
    let pre = inf_prod(&ncq.poly(registry), 1, profile)?
        .mul(&inf_prod(&a.poly(registry), 1, profile)?)?
        .mul(&inf_prod(&b.poly(registry), 1, profile)?)?
        .mul(&inv_inf_prod(
            &a.times(b).times_q(registry, 1).poly(registry),
            2,
            profile,
        )?)?;
    let sum = rs_pochhammer_sum(
        registry,
        &a.poly(registry),
        &b.poly(registry),
        Some(c),
        nmax,
        profile,
    )?;
    pre.mul(&sum)
}

/// `(a,b,-cq;q)_inf / (ab;q^2)_inf *
///  sum_n [h_n(a,bq|q^2) + h_n(aq,b|q^2)] / ((q,-cq;q)_n (1+q^n))`.
pub fn gen_ii_rhs(
    registry: &Arc<VarRegistry>,
    a: &MonomialParam,
    b: &MonomialParam,
    c: &MonomialParam,
    nmax: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let ncq = neg_q(registry, c);
    let pre = inf_prod(&a.poly(registry), 1, profile)?
        .mul(&inf_prod(&b.poly(registry), 1, profile)?)?
        .mul(&inf_prod(&ncq.poly(registry), 1, profile)?)?
        .mul(&inv_inf_prod(&a.times(b).poly(registry), 2, profile)?)?;
    let mut sum = TruncatedSeries::zero(registry);
    for n in 0..=nmax {
        let h = rs_poly(
            registry,
            n,
            &a.poly(registry),
            &b.times_q(registry, 1).poly(registry),
        )
        .add(&rs_poly(
            registry,
            n,
            &a.times_q(registry, 1).poly(registry),
            &b.poly(registry),
        ));
        let mut f = PochFrac::from_poly(h);
        f = frac_div_poch(&f, &qvec(registry, 1), &one(), 1, n)?;
        f = div_poch_param(&f, &ncq, 1, n)?;
        if n == 0 {
            f = f.scale(&scalar::ratio(1, 2));
        } else {
            f = f.div_factor(qvec(registry, n), -one())?;
        }
        sum = sum.add(&f.to_series(profile)?)?;
    }
    pre.mul(&sum)
}

/// The two-parameter master right-hand side,
/// `(a,b,-cq;q)_inf/(abq^s;q^2)_inf` times the double sum over `n >= k`
/// whose inner kernel is the terminating `(q^{-2k};q^2)_j` sum. The kernel
/// and the `1/(q;q)_{n-2k}` weight are kept fused as `1/(q;q)_{n-2k+j}`:
/// on the boundary `k <= n < 2k` the split form degenerates to `0 * inf`
/// while the fused form stays finite, and those boundary terms are
/// required for the identity. For `n >= 2k` the fused form factors back
/// into `T_{n-k,k}(s)/(q;q)_{n-2k}` exactly. Negative q-powers in the
/// kernels are absorbed by computing every factor at an extended q window.
pub fn master_rhs(
    registry: &Arc<VarRegistry>,
    a: &MonomialParam,
    b: &MonomialParam,
    c: &MonomialParam,
    s: i64,
    acap: i64,
    bcap: i64,
    profile: &TruncationProfile,
) -> Result<TruncatedSeries, AlgebraError> {
    let qi = registry.q_index();
    let ncq = neg_q(registry, c);
    let mut terms: Vec<PochFrac> = Vec::new();
    for k in 0..=bcap {
        for n in k..=(acap + k) {
            for j in (2 * k - n).max(0)..=k {
                let weight = crate::qtools::tau_factor(registry, 2, k)
                    .mul(&b.times_q(registry, s).pow_poly(registry, k))
                    .mul(&a.pow_poly(registry, n - k))
                    .mul(&poly_poch(
                        &SparsePoly::q_pow(registry, one(), -2 * k),
                        2,
                        j,
                    ))
                    .mul(&SparsePoly::q_pow(registry, one(), (2 - s) * j));
                let mut f = PochFrac::from_poly(weight);
                f = frac_div_poch(&f, &qvec(registry, 2), &one(), 2, k)?;
                f = frac_div_poch(&f, &qvec(registry, 1), &one(), 1, j)?;
                f = frac_div_poch(&f, &qvec(registry, 1), &one(), 1, n - 2 * k + j)?;
                f = div_poch_param(&f, &ncq, 1, n)?;
                terms.push(f);
            }
        }
    }
    let headroom = terms
        .iter()
        .map(|f| -f.num().support_min(qi))
        .max()
        .unwrap_or(0)
        .max(0);
    let ext = extend_q(profile, registry, headroom);
    let mut sum = TruncatedSeries::zero(registry);
    for f in &terms {
        sum = sum.add(&f.to_series(&ext)?)?;
    }
    let abqs = a.times(b).times_q(registry, s);
    let pre = inf_prod(&a.poly(registry), 1, &ext)?
        .mul(&inf_prod(&b.poly(registry), 1, &ext)?)?
        .mul(&inf_prod(&ncq.poly(registry), 1, &ext)?)?
        .mul(&inv_inf_prod(&abqs.poly(registry), 2, &ext)?)?;
    pre.mul(&sum)
}

// ---------------------------------------------------------------------------
// Record runners
// ---------------------------------------------------------------------------

fn run_and11(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b) = (bind.get("a"), bind.get("b"));
        let unit = MonomialParam::constant(r, one());
        let lhs = gen_lhs(r, a, b, &unit, 1, 0, i64::MAX, &prof)?;
        let abq = a.times(b).times_q(r, 1);
        let rhs = inf_prod(&SparsePoly::q_pow(r, -one(), 1), 1, &prof)?
            .mul(&inf_prod(&a.times_q(r, 1).poly(r), 2, &prof)?)?
            .mul(&inf_prod(&b.times_q(r, 1).poly(r), 2, &prof)?)?
            .mul(&inv_inf_prod(&abq.poly(r), 2, &prof)?)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "sum vs product form")
    })
}

fn run_gen_i(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b", "c"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b, c) = (bind.get("a"), bind.get("b"), bind.get("c"));
        let lhs = gen_lhs(r, a, b, c, 1, 0, ctx.cap("c"), &prof)?;
        let rhs = gen_i_rhs(r, a, b, c, ctx.cap("a") + ctx.cap("b"), &prof)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "sum vs transformed sum")
    })
}

fn run_gen_ii(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["alpha", "beta", "c"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let a2 = square_param(bind.get("alpha"));
        let b2 = square_param(bind.get("beta"));
        let c = bind.get("c");
        let lhs = gen_lhs(r, &a2, &b2, c, 0, 0, ctx.cap("c"), &prof)?;
        let rhs = gen_ii_rhs(r, &a2, &b2, c, ctx.cap("alpha") + ctx.cap("beta"), &prof)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "sum vs symmetrized sum")
    })
}

fn square_param(p: &MonomialParam) -> MonomialParam {
    p.times(p)
}

fn run_gen_iii(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["alpha", "beta", "c"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (al, be, c) = (bind.get("alpha"), bind.get("beta"), bind.get("c"));
        let (a2, b2) = (square_param(al), square_param(be));
        let ab = al.times(be);
        let qcap = ctx.cap("q");
        // both sides multiplied by (alpha + beta), which has no inverse as
        // a formal series
        let apb = al.poly(r).add(&be.poly(r));
        let mut lhs = TruncatedSeries::zero(r);
        let mut n = 0i64;
        while n * (n + 1) / 2 <= qcap && n <= ctx.cap("c") {
            let num = poly_poch(&a2.poly(r), 1, n)
                .mul(&poly_poch(&b2.poly(r), 1, n))
                .mul(&SparsePoly::q_pow(r, one(), n * (n + 1) / 2))
                .mul(&c.pow_poly(r, n))
                .mul(&apb);
            let mut f = PochFrac::from_poly(num);
            f = frac_div_poch(&f, &qvec(r, 1), &one(), 1, n)?;
            f = div_poch_param(&f, &ab, 1, n)?;
            let nab = MonomialParam { e: ab.e.clone(), c: -ab.c.clone() };
            f = div_poch_param(&f, &nab, 1, n + 1)?;
            lhs = lhs.add(&f.to_series(&prof)?)?;
            n += 1;
        }
        let ncq = neg_q(r, c);
        let nmax = ctx.cap("alpha") + ctx.cap("beta");
        let pre = inf_prod(&a2.poly(r), 1, &prof)?
            .mul(&inf_prod(&b2.poly(r), 1, &prof)?)?
            .mul(&inf_prod(&ncq.poly(r), 1, &prof)?)?
            .mul(&inv_inf_prod(&a2.times(&b2).poly(r), 2, &prof)?)?;
        let mut sum = TruncatedSeries::zero(r);
        for m in 0..=nmax {
            let h = rs_poly(r, m, &a2.poly(r), &b2.times_q(r, 1).poly(r))
                .mul(&al.poly(r))
                .add(&rs_poly(r, m, &a2.times_q(r, 1).poly(r), &b2.poly(r)).mul(&be.poly(r)));
            let mut f = PochFrac::from_poly(h);
            f = frac_div_poch(&f, &qvec(r, 1), &one(), 1, m)?;
            f = div_poch_param(&f, &ncq, 1, m)?;
            sum = sum.add(&f.to_series(&prof)?)?;
        }
        let rhs = pre.mul(&sum)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "weighted split sum")
    })
}

fn run_lambda(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let r = VarRegistry::with_params(&["a"]);
    let prof = profile_of(ctx, &r);
    let qi = r.q_index();
    for n in 0..=12 {
        let f = lambda_frac(n);
        let headroom = (-f.num().support_min(qi)).max(0);
        let ext = extend_q(&prof, &r, headroom);
        let closed = f.to_series(&ext)?;
        let oracle = lambda_oracle(n, &prof)?;
        match check_series(
            &r,
            &closed,
            &oracle,
            &prof,
            ctx.mutate,
            &format!("coefficient index n = {n}"),
        )? {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_t_rec(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        for r in (n + 2)..=(n + 6) {
            let res = t_recurrence_residual(r, n, None)?;
            let zero = PochFrac::zero(res.registry());
            match check_frac(&zero, &res.neg(), ctx.mutate, &format!("r = {r}, n = {n}")) {
                RunOut::Pass => {}
                other => return Ok(other),
            }
        }
    }
    Ok(RunOut::Pass)
}

fn run_t_closed(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        for r in (n + 1)..=(n + 5) {
            let direct = t_sum(r, n, SMode::Integer(1))?;
            let closed = t_closed_s1(r, n)?;
            match check_frac(&direct, &closed, ctx.mutate, &format!("s=1, r = {r}, n = {n}")) {
                RunOut::Pass => {}
                other => return Ok(other),
            }
        }
        for r in (n + 2)..=(n + 6) {
            let direct = t_sum(r, n, SMode::Integer(0))?;
            let closed = t_closed_s0(r, n)?;
            match check_frac(&direct, &closed, ctx.mutate, &format!("s=0, r = {r}, n = {n}")) {
                RunOut::Pass => {}
                other => return Ok(other),
            }
        }
    }
    Ok(RunOut::Pass)
}

fn run_master(ctx: &RunCtx, s: i64) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b", "c"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b, c) = (bind.get("a"), bind.get("b"), bind.get("c"));
        let lhs = gen_lhs(r, a, b, c, s, 0, ctx.cap("c"), &prof)?;
        let rhs = master_rhs(r, a, b, c, s, ctx.cap("a"), ctx.cap("b"), &prof)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "sum vs T-weighted double sum")
    })
}

fn run_master_0(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_master(ctx, 0)
}
fn run_master_1(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_master(ctx, 1)
}
fn run_master_2(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_master(ctx, 2)
}
fn run_master_3(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_master(ctx, 3)
}

fn run_rs_gf(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b) = (bind.get("a"), bind.get("b"));
        let lhs = rs_pochhammer_sum(
            r,
            &a.poly(r),
            &b.poly(r),
            None,
            ctx.cap("a") + ctx.cap("b"),
            &prof,
        )?;
        let rhs = inf_prod(&a.times(b).times_q(r, 1).poly(r), 2, &prof)?
            .mul(&inv_inf_prod(&a.poly(r), 1, &prof)?)?
            .mul(&inv_inf_prod(&b.poly(r), 1, &prof)?)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "generating function")
    })
}

fn run_fin_q(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for m in 0..=depth {
        let (lhs, rhs) = finite_q_identity_sides(m)?;
        match check_frac(&lhs, &rhs, ctx.mutate, &format!("M = {m}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_c_qinv(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b) = (bind.get("a"), bind.get("b"));
        let unit = MonomialParam::constant(r, one());
        // exponent n(n-1)/2 realized as n(n+1)/2 - n
        let lhs = gen_lhs(r, a, b, &unit, 1, -1, i64::MAX, &prof)?;
        let aq = a.times_q(r, 1);
        let bq = b.times_q(r, 1);
        let even = inf_prod(&a.poly(r), 2, &prof)?.mul(&inf_prod(&b.poly(r), 2, &prof)?)?;
        let odd = inf_prod(&aq.poly(r), 2, &prof)?.mul(&inf_prod(&bq.poly(r), 2, &prof)?)?;
        let rhs = even
            .add(&odd)?
            .mul(&inv_inf_prod(&SparsePoly::q_pow(r, one(), 1), 2, &prof)?)?
            .mul(&inv_inf_prod(&a.times(b).times_q(r, 1).poly(r), 2, &prof)?)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "inverse-shifted sum")
    })
}

fn run_s_eval(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (a, b) = (bind.get("a"), bind.get("b"));
        let mut lhs = TruncatedSeries::zero(r);
        for n in 0..=(ctx.cap("a") + ctx.cap("b")) {
            let mut f = PochFrac::from_poly(rs_poly(r, n, &a.poly(r), &b.poly(r)));
            f = frac_div_poch(&f, &qvec(r, 2), &one(), 2, n)?;
            lhs = lhs.add(&f.to_series(&prof)?)?;
        }
        let rhs = inv_inf_prod(&a.poly(r), 2, &prof)?
            .mul(&inv_inf_prod(&b.poly(r), 2, &prof)?)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "double sum evaluation")
    })
}

fn run_andrews_pp(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["alpha", "beta"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let (al, be) = (bind.get("alpha"), bind.get("beta"));
        let (a2, b2) = (square_param(al), square_param(be));
        let ab = al.times(be);
        let qcap = ctx.cap("q");
        let apb = al.poly(r).add(&be.poly(r));
        let mut lhs = TruncatedSeries::zero(r);
        let mut n = 0i64;
        while n * (n + 1) / 2 <= qcap {
            let num = poly_poch(&a2.poly(r), 1, n)
                .mul(&poly_poch(&b2.poly(r), 1, n))
                .mul(&SparsePoly::q_pow(r, one(), n * (n + 1) / 2))
                .mul(&apb);
            let mut f = PochFrac::from_poly(num);
            f = frac_div_poch(&f, &qvec(r, 1), &one(), 1, n)?;
            f = div_poch_param(&f, &ab, 1, n)?;
            let nab = MonomialParam { e: ab.e.clone(), c: -ab.c.clone() };
            f = div_poch_param(&f, &nab, 1, n + 1)?;
            lhs = lhs.add(&f.to_series(&prof)?)?;
            n += 1;
        }
        let first = inf_prod(&a2.times_q(r, 1).poly(r), 2, &prof)?
            .mul(&inf_prod(&b2.poly(r), 2, &prof)?)?
            .mul(&TruncatedSeries::from_poly_entire(al.poly(r)))?;
        let second = inf_prod(&a2.poly(r), 2, &prof)?
            .mul(&inf_prod(&b2.times_q(r, 1).poly(r), 2, &prof)?)?
            .mul(&TruncatedSeries::from_poly_entire(be.poly(r)))?;
        let rhs = first
            .add(&second)?
            .mul(&inv_inf_prod(&SparsePoly::q_pow(r, one(), 1), 2, &prof)?)?
            .mul(&inv_inf_prod(&a2.times(&b2).poly(r), 2, &prof)?)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "product split form")
    })
}

fn run_aw_theta(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a", "b"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let qcap = ctx.cap("q");
        let (a, b) = (bind.get("a"), bind.get("b"));
        // partial theta side
        let mut theta = SparsePoly::one(r);
        let mut n = 1i64;
        while n * (n - 1) / 2 <= qcap {
            let w = SparsePoly::q_pow(r, scalar::neg_one_pow(n), n * (n - 1) / 2);
            theta = theta.add(&w.mul(&a.pow_poly(r, n).add(&b.pow_poly(r, n))));
            n += 1;
        }
        // the theta polynomial is complete only up to the q cap
        let lhs = TruncatedSeries::from_poly_entire(theta).truncate_caps(&prof);
        // transformed side; (ab/q;q)_{2n} reaches q^{-1}, so all factors
        // get one extra q of headroom
        let ext = extend_q(&prof, r, 1);
        let pre = inf_prod(&SparsePoly::q_pow(r, one(), 1), 1, &ext)?
            .mul(&inf_prod(&a.poly(r), 1, &ext)?)?
            .mul(&inf_prod(&b.poly(r), 1, &ext)?)?;
        let ab = a.times(b);
        let mut den_inv = TruncatedSeries::one(r).truncate_caps(&ext);
        let mut num = SparsePoly::one(r);
        let mut sum = TruncatedSeries::zero(r);
        for m in 0..=(qcap + 1) {
            if m > 0 {
                // (q;q)_m gains index m; (a,b,ab;q)_m gain index m-1
                for factor in [
                    SparsePoly::q_pow(r, one(), m),
                    a.times_q(r, m - 1).poly(r),
                    b.times_q(r, m - 1).poly(r),
                    ab.times_q(r, m - 1).poly(r),
                ] {
                    let inv = TruncatedSeries::from_poly_entire(
                        SparsePoly::one(r).sub(&factor),
                    )
                    .invert(&ext)?;
                    den_inv = den_inv.mul(&inv)?;
                }
                // (ab/q; q)_{2m} gains the j = 2m-2, 2m-1 factors
                num = num
                    .mul(&SparsePoly::one(r).sub(&ab.times_q(r, 2 * m - 3).poly(r)))
                    .mul(&SparsePoly::one(r).sub(&ab.times_q(r, 2 * m - 2).poly(r)));
            }
            let term = TruncatedSeries::from_poly_entire(
                num.mul(&SparsePoly::q_pow(r, one(), m)),
            )
            .mul(&den_inv)?;
            sum = sum.add(&term)?;
        }
        let rhs = pre.mul(&sum)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "partial theta transform")
    })
}

fn run_war_theta(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_bindings(ctx, &["a"], |bind| {
        let r = &bind.registry;
        let prof = profile_of(ctx, r);
        let qcap = ctx.cap("q");
        let a = bind.get("a");
        let mut theta = SparsePoly::one(r);
        let mut n = 1i64;
        while 2 * n * n <= qcap {
            theta = theta.add(
                &a.pow_poly(r, n)
                    .mul(&SparsePoly::q_pow(r, scalar::int(2), 2 * n * n)),
            );
            n += 1;
        }
        let lhs = TruncatedSeries::from_poly_entire(theta).truncate_caps(&prof);
        let pre = inf_prod(&SparsePoly::q_pow(r, one(), 1), 1, &prof)?
            .mul(&inf_prod(&a.times_q(r, 1).poly(r), 2, &prof)?)?;
        let mut den_inv = TruncatedSeries::one(r).truncate_caps(&prof);
        let mut num = SparsePoly::one(r);
        let mut sum = TruncatedSeries::zero(r);
        for m in 0..=qcap {
            if m > 0 {
                for factor in [
                    SparsePoly::q_pow(r, one(), m),
                    a.times_q(r, m).poly(r).neg(),
                    a.times_q(r, 2 * m - 1).poly(r),
                ] {
                    let inv = TruncatedSeries::from_poly_entire(
                        SparsePoly::one(r).sub(&factor),
                    )
                    .invert(&prof)?;
                    den_inv = den_inv.mul(&inv)?;
                }
                // (-a; q)_{2m} gains the j = 2m-2, 2m-1 factors
                num = num
                    .mul(&SparsePoly::one(r).add(&a.times_q(r, 2 * m - 2).poly(r)))
                    .mul(&SparsePoly::one(r).add(&a.times_q(r, 2 * m - 1).poly(r)));
            }
            let term = TruncatedSeries::from_poly_entire(
                num.mul(&SparsePoly::q_pow(r, one(), m)),
            )
            .mul(&den_inv)?;
            sum = sum.add(&term)?;
        }
        let rhs = pre.mul(&sum)?;
        check_series(r, &lhs, &rhs, &prof, ctx.mutate, "partial theta transform")
    })
}

fn run_success(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        let (lhs, rhs) = success_sides(n);
        match check_frac(&lhs, &rhs, ctx.mutate, &format!("n = {n}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_pair(ctx: &RunCtx, pair: &BaileyPair) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        let direct = pair.beta(n);
        let rebuilt = beta_from_alpha(&|k| pair.alpha(k), n);
        match check_frac(&direct, &rebuilt, ctx.mutate, &format!("n = {n}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_bp_square(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_pair(ctx, &pair_square())
}

fn run_bp_double_square(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_pair(ctx, &pair_double_square())
}

fn run_lemma_specialized(ctx: &RunCtx, pair: &BaileyPair) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    match ctx.mode {
        VerifyMode::Series => {
            let r = VarRegistry::with_params(&["rho1", "rho2"]);
            let sym1 = RhoSpec::variable(&r, "rho1");
            let sym2 = RhoSpec::variable(&r, "rho2");
            let configs: [(&str, RhoSpec, RhoSpec); 3] = [
                ("symbolic rho", sym1.clone(), sym2.clone()),
                ("mixed limit", sym1.clone(), RhoSpec::Infinite),
                ("double limit", RhoSpec::Infinite, RhoSpec::Infinite),
            ];
            for (label, r1, r2) in &configs {
                for n in 0..=depth {
                    let (lhs, rhs) = bailey_lemma_sides(&r, pair, r1, r2, n)?;
                    match check_frac(&lhs, &rhs, ctx.mutate, &format!("{label}, n = {n}")) {
                        RunOut::Pass => {}
                        other => return Ok(other),
                    }
                }
            }
        }
        VerifyMode::Sample => {
            let r = VarRegistry::q_only();
            let pool = rational_samples(ctx.seed, 2 * ctx.samples as usize, &[]);
            for i in 0..ctx.samples as usize {
                let r1 = RhoSpec::rational(&r, pool[2 * i].clone());
                let r2 = RhoSpec::rational(&r, pool[2 * i + 1].clone());
                for n in 0..=depth {
                    let (lhs, rhs) = bailey_lemma_sides(&r, pair, &r1, &r2, n)?;
                    match check_frac(
                        &lhs,
                        &rhs,
                        ctx.mutate,
                        &format!("rho1={}, rho2={}, n = {n}", pool[2 * i], pool[2 * i + 1]),
                    ) {
                        RunOut::Pass => {}
                        other => return Ok(other),
                    }
                }
            }
        }
    }
    Ok(RunOut::Pass)
}

fn run_bl_conc1(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_lemma_specialized(ctx, &pair_double_square())
}

fn run_bl_conc0123(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_lemma_specialized(ctx, &pair_square())
}

/// `prod_{j=0}^{k-1} (a - q^j)`, the polynomial form of `(1/a;q)_k a^k`.
fn falling_a_product(registry: &Arc<VarRegistry>, a: &SparsePoly, k: i64) -> SparsePoly {
    let mut acc = SparsePoly::one(registry);
    for j in 0..k {
        acc = acc.mul(&a.sub(&SparsePoly::q_pow(registry, one(), j)));
    }
    acc
}

fn run_conc_i(ctx: &RunCtx, kind: PairKind) -> Result<RunOut, AlgebraError> {
    let depth = 8i64;
    match ctx.mode {
        VerifyMode::Series => {
            let r = VarRegistry::with_params(&["a"]);
            let a = MonomialParam::variable(&r, "a");
            for n in 1..=depth {
                let (lhs, rhs) = conc_i_sides(kind, &r, &a, n)?;
                match check_frac(&lhs, &rhs, ctx.mutate, &format!("n = {n}")) {
                    RunOut::Pass => {}
                    other => return Ok(other),
                }
            }
            if kind == PairKind::DoubleSquare {
                // limiting form: both sides are genuine two-variable series
                // because (1/a;q)_k a^k is the polynomial prod(a - q^j)
                let prof = profile_of(ctx, &r);
                let qcap = ctx.cap("q");
                let acap = ctx.cap("a");
                let apoly = SparsePoly::var(&r, "a");
                let mut jmax = 0i64;
                while (jmax + 1) * jmax / 2 <= qcap {
                    jmax += 1;
                }
                let kmax = acap + jmax + 1;
                let mut lhs = TruncatedSeries::zero(&r);
                for k in 0..=kmax {
                    let f = gamma_sum(&r, k).mul_poly(&falling_a_product(&r, &apoly, k));
                    lhs = lhs.add(&f.to_series(&prof)?)?;
                }
                lhs = lhs.mul_poly(&SparsePoly::one(&r).sub(&apoly))?;
                let aq = a.times_q(&r, 1);
                let mut rhs = TruncatedSeries::zero(&r);
                let mut k = 0i64;
                while 2 * k * k <= qcap {
                    let num = falling_a_product(&r, &apoly, k)
                        .scale(&(scalar::neg_one_pow(k) * scalar::int(2)))
                        .mul(&SparsePoly::one(&r).sub(&SparsePoly::q_pow(&r, one(), k)))
                        .mul(&SparsePoly::q_pow(&r, one(), 2 * k * k));
                    let f = div_poch_param(&PochFrac::from_poly(num), &aq, 1, k)?;
                    rhs = rhs.add(&f.to_series(&prof)?)?;
                    k += 1;
                }
                match check_series(&r, &lhs, &rhs, &prof, ctx.mutate, "limiting form")? {
                    RunOut::Pass => {}
                    other => return Ok(other),
                }
            }
        }
        VerifyMode::Sample => {
            let r = VarRegistry::q_only();
            let pool = rational_samples(ctx.seed, ctx.samples as usize, &[]);
            for v in &pool {
                let a = MonomialParam::constant(&r, v.clone());
                for n in 1..=depth {
                    let (lhs, rhs) = conc_i_sides(kind, &r, &a, n)?;
                    match check_frac(&lhs, &rhs, ctx.mutate, &format!("a = {v}, n = {n}")) {
                        RunOut::Pass => {}
                        other => return Ok(other),
                    }
                }
            }
        }
    }
    Ok(RunOut::Pass)
}

fn run_bl_conc1_i(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_conc_i(ctx, PairKind::DoubleSquare)
}

fn run_bl_conc0123_i(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_conc_i(ctx, PairKind::Square)
}

fn run_two_sided(
    ctx: &RunCtx,
    lhs_fn: fn(i64) -> PochFrac,
    scale: i64,
) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        let lhs = lhs_fn(n);
        let rhs = two_sided_alpha_sum(n, scale);
        match check_frac(&lhs, &rhs, ctx.mutate, &format!("n = {n}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_bl_conc1_ii(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_two_sided(ctx, gamma_weighted_sum, 3)
}

fn run_bl_conc000(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    run_two_sided(ctx, square_weighted_sum, 2)
}

fn run_bl_conc0123_ii(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    let r = VarRegistry::q_only();
    let pair = pair_square();
    for n in 0..=depth {
        let (lhs, rhs) = bailey_lemma_sides(&r, &pair, &RhoSpec::Infinite, &RhoSpec::Infinite, n)?;
        match check_frac(&lhs, &rhs, ctx.mutate, &format!("double limit, n = {n}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

fn run_bl_conc222(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let r = VarRegistry::q_only();
    let prof = profile_of(ctx, &r);
    let qcap = ctx.cap("q");
    let mut lhs = TruncatedSeries::zero(&r);
    let mut k = 0i64;
    while k * k <= qcap {
        let f = gamma_sum(&r, k).mul_poly(&SparsePoly::q_pow(&r, one(), k * k));
        let f = frac_div_poch(&f, &qvec(&r, 1), &one(), 1, k)?;
        lhs = lhs.add(&f.to_series(&prof)?)?;
        k += 1;
    }
    let rhs = inf_prod(&SparsePoly::q_pow(&r, one(), 3), 6, &prof)?
        .mul(&inv_inf_prod(&SparsePoly::q_pow(&r, one(), 1), 3, &prof)?)?
        .mul(&inv_inf_prod(&SparsePoly::q_pow(&r, one(), 2), 3, &prof)?)?;
    check_series(&r, &lhs, &rhs, &prof, ctx.mutate, "triple product evaluation")
}

fn run_closing_sum(ctx: &RunCtx) -> Result<RunOut, AlgebraError> {
    let depth = ctx.cap("q");
    for n in 0..=depth {
        let (lhs, rhs) = closing_sum_sides(n);
        match check_frac(&lhs, &rhs, ctx.mutate, &format!("n = {n}")) {
            RunOut::Pass => {}
            other => return Ok(other),
        }
    }
    Ok(RunOut::Pass)
}

// ---------------------------------------------------------------------------
// The catalog
// ---------------------------------------------------------------------------

const SERIES_ONLY: &[VerifyMode] = &[VerifyMode::Series];
const BOTH_MODES: &[VerifyMode] = &[VerifyMode::Series, VerifyMode::Sample];

static CATALOG: &[IdentityRecord] = &[
    IdentityRecord {
        id: "AND-11",
        description: "sum (a,b;q)_n q^{n(n+1)/2} / ((q;q)_n (abq;q^2)_n) = (-q;q)_inf (aq,bq;q^2)_inf / (abq;q^2)_inf",
        params: &["a", "b"],
        default_caps: &[("q", 20), ("a", 8), ("b", 8)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_and11,
    },
    IdentityRecord {
        id: "GEN-I",
        description: "c-weighted extension of AND-11 via the Rogers-Szego sum over (q,-cq;q)_n",
        params: &["a", "b", "c"],
        default_caps: &[("q", 16), ("a", 6), ("b", 6), ("c", 6)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_gen_i,
    },
    IdentityRecord {
        id: "GEN-II",
        description: "variant with (ab;q^2)_n denominators and symmetrized Rogers-Szego numerators over (1+q^n); parameters entered as a=alpha^2, b=beta^2",
        params: &["alpha", "beta", "c"],
        default_caps: &[("q", 14), ("alpha", 6), ("beta", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_gen_ii,
    },
    IdentityRecord {
        id: "GEN-III",
        description: "square-root weighted variant with (q,(ab)^{1/2};q)_n (-(ab)^{1/2};q)_{n+1} denominators; both sides multiplied by alpha+beta",
        params: &["alpha", "beta", "c"],
        default_caps: &[("q", 14), ("alpha", 6), ("beta", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_gen_iii,
    },
    IdentityRecord {
        id: "LAMBDA",
        description: "closed form of the x^n coefficients of (ax;q^2)_inf/(x;q)_inf against an independent bivariate-expansion oracle",
        params: &["a"],
        default_caps: &[("q", 24), ("a", 12)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_lambda,
    },
    IdentityRecord {
        id: "T-REC",
        description: "three-term recurrence in n for the T sums, with the substitution variable y kept symbolic (q cap = depth bound for n)",
        params: &[],
        default_caps: &[("q", 8)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_t_rec,
    },
    IdentityRecord {
        id: "T-CLOSED",
        description: "closed Pochhammer-quotient evaluations of the T sums at s = 1 and s = 0 (q cap = depth bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_t_closed,
    },
    IdentityRecord {
        id: "MASTER-0",
        description: "master transformation at s = 0: c-weighted sum vs T-weighted double sum",
        params: &["a", "b", "c"],
        default_caps: &[("q", 14), ("a", 6), ("b", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_master_0,
    },
    IdentityRecord {
        id: "MASTER-1",
        description: "master transformation at s = 1: c-weighted sum vs T-weighted double sum",
        params: &["a", "b", "c"],
        default_caps: &[("q", 14), ("a", 6), ("b", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_master_1,
    },
    IdentityRecord {
        id: "MASTER-2",
        description: "master transformation at s = 2: c-weighted sum vs T-weighted double sum",
        params: &["a", "b", "c"],
        default_caps: &[("q", 14), ("a", 6), ("b", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_master_2,
    },
    IdentityRecord {
        id: "MASTER-3",
        description: "master transformation at s = 3: c-weighted sum vs T-weighted double sum",
        params: &["a", "b", "c"],
        default_caps: &[("q", 14), ("a", 6), ("b", 6), ("c", 4)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_master_3,
    },
    IdentityRecord {
        id: "RS-GF",
        description: "generating function: sum h_n(a,b|q^2)/(q;q)_n = (abq;q^2)_inf/((a,b;q)_inf)",
        params: &["a", "b"],
        default_caps: &[("q", 16), ("a", 8), ("b", 8)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_rs_gf,
    },
    IdentityRecord {
        id: "FIN-Q",
        description: "finite symbolic-a identity between a terminating (q^{-2M};q^2)_k sum and a q-binomial Pochhammer sum (q cap = bound for M)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_fin_q,
    },
    IdentityRecord {
        id: "C-QINV",
        description: "q^{n(n-1)/2} variant: sum = [(a,b;q^2)_inf + (aq,bq;q^2)_inf] / ((q,abq;q^2)_inf)",
        params: &["a", "b"],
        default_caps: &[("q", 20), ("a", 6), ("b", 6)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_c_qinv,
    },
    IdentityRecord {
        id: "S-EVAL",
        description: "double sum sum_n h_n(a,b|q^2)/(q^2;q^2)_n evaluates to 1/((a,b;q^2)_inf)",
        params: &["a", "b"],
        default_caps: &[("q", 16), ("a", 8), ("b", 8)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_s_eval,
    },
    IdentityRecord {
        id: "ANDREWS-PP",
        description: "closed product evaluation of the square-root weighted sum; parameters entered as a=alpha^2, b=beta^2, both sides multiplied by alpha+beta",
        params: &["alpha", "beta"],
        default_caps: &[("q", 14), ("alpha", 6), ("beta", 6)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_andrews_pp,
    },
    IdentityRecord {
        id: "AW-THETA",
        description: "two-parameter partial theta identity: 1 + sum (-1)^n q^{n(n-1)/2}(a^n+b^n) = (q,a,b;q)_inf sum (ab/q;q)_{2n} q^n/((q,a,b,ab;q)_n)",
        params: &["a", "b"],
        default_caps: &[("q", 30), ("a", 10), ("b", 10)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_aw_theta,
    },
    IdentityRecord {
        id: "WAR-THETA",
        description: "one-parameter partial theta identity: 1 + 2 sum a^n q^{2n^2} = (q;q)_inf (aq;q^2)_inf sum (-a;q)_{2n} q^n/((q,-aq;q)_n (aq;q^2)_n)",
        params: &["a"],
        default_caps: &[("q", 40), ("a", 6)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_war_theta,
    },
    IdentityRecord {
        id: "SUCCESS",
        description: "closed evaluation q^{n(n-1)/2}(1+q^n) sum_k (q^{-n},q^n;q)_k q^k lambda_k(-q) = 2 q^{2n^2} (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_success,
    },
    IdentityRecord {
        id: "BP-3666",
        description: "Bailey pair alpha_n = 2(-1)^n q^{n^2}, beta_n = 1/(q^2;q^2)_n + 1/(q;q)_n^2 at a = 1 (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_bp_square,
    },
    IdentityRecord {
        id: "BP-GREAT",
        description: "Bailey pair alpha_n = 2(-1)^n q^{2n^2}, beta_n = 1/(q;q)_n^2 + gamma(n)/(q;q)_n at a = 1 (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_bp_double_square,
    },
    IdentityRecord {
        id: "BL-CONC1",
        description: "Bailey transform instantiated with the 2(-1)^n q^{2n^2} pair; symbolic rho and formal rho limits in series mode, rational rho in sample mode (q cap = bound for n)",
        params: &["rho1", "rho2"],
        default_caps: &[("q", 8)],
        modes: BOTH_MODES,
        min_q_cap: 0,
        run: run_bl_conc1,
    },
    IdentityRecord {
        id: "BL-CONC1-I",
        description: "rho1 = 1/a, rho2 = q specialization with gamma weights, finite depth plus its limiting two-variable series form",
        params: &["a"],
        default_caps: &[("q", 12), ("a", 6)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_bl_conc1_i,
    },
    IdentityRecord {
        id: "BL-CONC1-II",
        description: "formal rho limit: sum q^{k^2} gamma(k)/((q;q)_k (q;q)_{n-k}) equals the two-sided (-1)^k q^{3k^2} sum (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_bl_conc1_ii,
    },
    IdentityRecord {
        id: "BL-CONC222",
        description: "limiting series sum q^{k^2} gamma(k)/(q;q)_k = (q^3;q^6)_inf/((q,q^2;q^3)_inf), a triple-product consequence",
        params: &[],
        default_caps: &[("q", 60)],
        modes: SERIES_ONLY,
        min_q_cap: 4,
        run: run_bl_conc222,
    },
    IdentityRecord {
        id: "BL-CONC0123",
        description: "Bailey transform instantiated with the 2(-1)^n q^{n^2} pair; symbolic rho and formal rho limits in series mode, rational rho in sample mode (q cap = bound for n)",
        params: &["rho1", "rho2"],
        default_caps: &[("q", 8)],
        modes: BOTH_MODES,
        min_q_cap: 0,
        run: run_bl_conc0123,
    },
    IdentityRecord {
        id: "BL-CONC0123-I",
        description: "rho1 = 1/a, rho2 = q specialization with (-q;q)_k denominators, finite depth",
        params: &["a"],
        default_caps: &[("q", 12), ("a", 6)],
        modes: BOTH_MODES,
        min_q_cap: 4,
        run: run_bl_conc0123_i,
    },
    IdentityRecord {
        id: "BL-CONC0123-II",
        description: "double formal rho limit of the 2(-1)^n q^{n^2} transform (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_bl_conc0123_ii,
    },
    IdentityRecord {
        id: "BL-CONC000",
        description: "sum q^{k^2}/((q^2;q^2)_k (q;q)_{n-k}) equals the two-sided (-1)^k q^{2k^2} sum (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_bl_conc000,
    },
    IdentityRecord {
        id: "CLOSING-SUM",
        description: "sum q^{k^2}/((q;q)_k^2 (q;q)_{n-k}) = 1/(q;q)_n^2 (q cap = bound for n)",
        params: &[],
        default_caps: &[("q", 10)],
        modes: SERIES_ONLY,
        min_q_cap: 0,
        run: run_closing_sum,
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    fn small_req(caps: &[(&str, i64)]) -> VerifyRequest {
        VerifyRequest {
            caps: caps.iter().map(|(n, v)| (String::from(*n), *v)).collect(),
            ..VerifyRequest::default()
        }
    }

    #[test]
    fn catalog_ids_unique_and_sized() {
        assert!(CATALOG.len() >= 24);
        for (i, r) in CATALOG.iter().enumerate() {
            assert!(
                !CATALOG[..i].iter().any(|o| o.id == r.id),
                "duplicate id {}",
                r.id
            );
            assert!(r.default_caps.iter().any(|(n, _)| *n == "q"));
        }
    }

    #[test]
    fn every_record_passes_at_reduced_caps() {
        for rec in CATALOG {
            let req = small_req(&[
                ("q", reduced_qcap(rec)),
                ("a", 3),
                ("b", 3),
                ("c", 2),
                ("alpha", 3),
                ("beta", 3),
            ]);
            let out = verify(rec, &req);
            assert_eq!(
                out.status,
                VerifyStatus::Pass,
                "{}: {:?} {}",
                rec.id,
                out.witness,
                out.detail
            );
        }
    }

    #[test]
    fn every_record_is_mutation_sensitive() {
        for rec in CATALOG {
            let mut req = small_req(&[
                ("q", reduced_qcap(rec)),
                ("a", 3),
                ("b", 3),
                ("c", 2),
                ("alpha", 3),
                ("beta", 3),
            ]);
            req.mutate_rhs = true;
            let out = verify(rec, &req);
            assert_eq!(out.status, VerifyStatus::Fail, "{}", rec.id);
            assert!(out.witness.is_some(), "{} lacks a witness", rec.id);
        }
    }

    fn reduced_qcap(rec: &IdentityRecord) -> i64 {
        match rec.id {
            // depth-style caps: keep families short
            "T-REC" | "T-CLOSED" | "FIN-Q" | "SUCCESS" | "BP-3666" | "BP-GREAT"
            | "BL-CONC1" | "BL-CONC0123" | "BL-CONC1-II" | "BL-CONC0123-II" | "BL-CONC000"
            | "CLOSING-SUM" => 3,
            "BL-CONC222" => 16,
            _ => 6,
        }
    }

    #[test]
    fn sample_mode_passes_where_supported() {
        for rec in CATALOG {
            if !rec.supports(VerifyMode::Sample) {
                continue;
            }
            let mut req = small_req(&[("q", reduced_qcap(rec)), ("a", 3), ("b", 3)]);
            req.mode = VerifyMode::Sample;
            req.samples = 2;
            req.seed = 11;
            let out = verify(rec, &req);
            assert_eq!(out.status, VerifyStatus::Pass, "{} {}", rec.id, out.detail);
        }
    }

    #[test]
    fn sample_mode_is_mutation_sensitive_and_deterministic() {
        let rec = find_record("AND-11").unwrap();
        let mut req = small_req(&[("q", 6)]);
        req.mode = VerifyMode::Sample;
        req.samples = 2;
        req.seed = 5;
        let a = verify(rec, &req);
        let b = verify(rec, &req);
        assert_eq!(a.status, VerifyStatus::Pass);
        assert_eq!(a.caps, b.caps);
        req.mutate_rhs = true;
        let m = verify(rec, &req);
        assert_eq!(m.status, VerifyStatus::Fail);
        assert!(m.witness.is_some());
    }

    #[test]
    fn unsupported_mode_is_inconclusive() {
        let rec = find_record("RS-GF").unwrap();
        let mut req = VerifyRequest::default();
        req.mode = VerifyMode::Sample;
        assert_eq!(verify(rec, &req).status, VerifyStatus::Inconclusive);
    }

    #[test]
    fn q_cap_below_minimum_is_inconclusive() {
        let rec = find_record("AND-11").unwrap();
        let req = small_req(&[("q", 2)]);
        assert_eq!(verify(rec, &req).status, VerifyStatus::Inconclusive);
    }

    #[test]
    fn gen_i_at_c_zero_matches_plain_generating_sum() {
        // with the c cap at zero the c-weighted machinery must reproduce
        // the plain generating sum coefficientwise
        let r = VarRegistry::with_params(&["a", "b", "c"]);
        let prof = TruncationProfile::caps(&r, &[("a", 3), ("b", 3), ("c", 0), ("q", 8)]);
        let a = MonomialParam::variable(&r, "a");
        let b = MonomialParam::variable(&r, "b");
        let c = MonomialParam::variable(&r, "c");
        let with_c = rs_pochhammer_sum(&r, &a.poly(&r), &b.poly(&r), Some(&c), 6, &prof).unwrap();
        let plain = rs_pochhammer_sum(&r, &a.poly(&r), &b.poly(&r), None, 6, &prof).unwrap();
        match with_c.equal_on(&plain, &prof).unwrap() {
            SeriesCmp::Pass => {}
            other => panic!("mismatch: {other:?}"),
        }
    }
}
