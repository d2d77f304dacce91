//! JSON scenarios: a config names a pipeline and its parameters, the runner
//! executes it and returns a report carrying every certificate it produced.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cert::Certificate;
use crate::compositum::{galois_structure, verify_compositum, verify_equal_over_k1, verify_unequal_heights};
use crate::division_points::{division_field, torsion_module_structure, verify_division_field, DivisionFieldData};
use crate::ec_formal::{
    curve_formal_group, default_cutoffs, product_group, supersingular_test, verify_product_tameness_with,
    WeierstrassCurve,
};
use crate::error::{Error, Result};
use crate::formal_group::{iterate_series, lubin_tate_group_law, lubin_tate_series, verify_group_axioms, LtSeries};
use crate::ring::Ring;
use crate::unramified::{make_unramified_ring, UnramifiedRing, UrElem};

pub const SCHEMA: u32 = 1;

/// Digits of headroom the Lubin–Tate solver needs beyond the law cutoff.
pub const SOLVER_SLACK: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Group laws, axioms, and iterates of `[π]`.
    LtBuild,
    /// Torsion fields of each group.
    DivisionField,
    /// Two groups of the same height: compositum and its Galois group.
    CompositumEqual,
    /// One group against groups of smaller height.
    CompositumUnequal,
    /// Equality of all torsion fields after adjoining the roots of unity.
    EqualOverK1,
    /// Formal groups of elliptic curves and their product.
    CurveProduct,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::LtBuild => "lt-build",
            Kind::DivisionField => "division-field",
            Kind::CompositumEqual => "compositum-equal",
            Kind::CompositumUnequal => "compositum-unequal",
            Kind::EqualOverK1 => "equal-over-k1",
            Kind::CurveProduct => "curve-product",
        }
    }
}

/// An element of `O_K`: an integer, little-endian digit strings in the
/// generator, or a power of the canonical root of unity of a given order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Int(i64),
    Digits(Vec<String>),
    Root(RootSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSpec {
    pub root_of_unity: u64,
    #[serde(default = "default_power")]
    pub power: u64,
}

fn default_power() -> u64 {
    1
}

impl ElementSpec {
    pub fn resolve(&self, k: &UnramifiedRing) -> Result<UrElem> {
        match self {
            ElementSpec::Int(n) => Ok(k.from_int(*n)),
            ElementSpec::Digits(d) => k.from_strings(d),
            ElementSpec::Root(r) => {
                let g = k.root_of_unity_generator(r.root_of_unity as u128)?;
                Ok(k.pow(&g, r.power as u128))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub h: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<ElementSpec>,
    /// `(index, coefficient)` terms added to `πX + X^q`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbation: Vec<(usize, ElementSpec)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub kind: Kind,
    pub p: u64,
    pub f: usize,
    /// `N`, digits of `p`-adic precision.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// `D`, total-degree cutoff of the group laws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupSpec>,
    /// Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<[i64; 5]>,
}

/// Command-line overrides for `N` and `D`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub cutoff: Option<usize>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    fn max_q(&self) -> usize {
        let h = self.groups.iter().map(|g| g.h).max().unwrap_or(2);
        (self.p as usize).saturating_pow(h)
    }

    /// Effective `(N, D)` after overrides and defaults.
    pub fn budget(&self, o: &Overrides) -> (u32, usize) {
        if self.kind == Kind::CurveProduct {
            let n = o.precision.or(self.precision).unwrap_or(4);
            let d = o.cutoff.or(self.cutoff).unwrap_or((self.p * self.p) as usize + 8);
            return (n, d);
        }
        let extra = if self.kind == Kind::LtBuild { 8 } else { 1 };
        let d = o.cutoff.or(self.cutoff).unwrap_or(self.max_q() + extra);
        let n = o.precision.or(self.precision).unwrap_or(d as u32 + SOLVER_SLACK);
        (n, d)
    }

    /// Shape checks that need no arithmetic.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema != SCHEMA {
            return bad(format!("unsupported schema {}", self.schema));
        }
        if self.p < 3 || self.p > 1 << 20 || !(2..).take_while(|d| d * d <= self.p).all(|d| self.p % d != 0) {
            return bad(format!("p = {} is not an odd prime", self.p));
        }
        if self.f == 0 {
            return bad("f must be positive".into());
        }
        for g in &self.groups {
            if g.h == 0 || self.f % g.h as usize != 0 {
                return bad(format!("height {} does not divide f = {}", g.h, self.f));
            }
        }
        let n = self.groups.len();
        match self.kind {
            Kind::CurveProduct => {
                if self.curves.is_empty() || n > 0 {
                    return bad("curve-product takes curves and no groups".into());
                }
            }
            _ if !self.curves.is_empty() => return bad(format!("{} takes no curves", self.kind.name())),
            Kind::LtBuild | Kind::DivisionField if n == 0 => return bad("at least one group is required".into()),
            Kind::CompositumEqual if n != 2 || self.groups[0].h != self.groups[1].h => {
                return bad("compositum-equal takes two groups of the same height".into())
            }
            Kind::CompositumUnequal if n < 2 => return bad("compositum-unequal takes at least two groups".into()),
            Kind::EqualOverK1 if n < 2 || self.groups.iter().any(|g| g.h != self.groups[0].h) => {
                return bad("equal-over-k1 takes at least two groups of one height".into())
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PrecisionExhausted,
    ConfigError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::PrecisionExhausted => 3,
            Verdict::ConfigError => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub name: String,
    pub kind: Option<Kind>,
    pub parameters: Value,
    pub verdict: Verdict,
    pub first_failure: Option<String>,
    pub error: Option<String>,
    pub checks_total: usize,
    pub checks_passed: usize,
    /// One-line findings for the text summary.
    pub highlights: Vec<String>,
    pub results: Value,
    pub q_convention: &'static str,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// Canonical JSON: sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        canonical_json(&v)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = self.kind.map_or("?", Kind::name);
        s.push_str(&format!("scenario {} [{kind}]\n", self.name));
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::PrecisionExhausted => "PRECISION EXHAUSTED",
            Verdict::ConfigError => "CONFIG ERROR",
        };
        s.push_str(&format!("verdict: {verdict} ({}/{} checks)\n", self.checks_passed, self.checks_total));
        if let Some(id) = &self.first_failure {
            s.push_str(&format!("first failing check: {id}\n"));
        }
        if let Some(e) = &self.error {
            s.push_str(&format!("error: {e}\n"));
        }
        for h in &self.highlights {
            s.push_str(&format!("  {h}\n"));
        }
        s
    }
}

pub fn canonical_json(v: &Value) -> String {
    // serde_json's map is ordered by key, so re-serializing a Value sorts.
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// Error classes: verification failures versus input problems.
pub fn error_verdict(e: &Error) -> (Verdict, &'static str) {
    if e.is_precision() {
        return (Verdict::PrecisionExhausted, "precision");
    }
    match e {
        Error::KrasnerGapFails(_) => (Verdict::Fail, "krasner-gap"),
        Error::DivisibilityFails(..) => (Verdict::Fail, "divisibility"),
        Error::MultipleSlopes(_) => (Verdict::Fail, "single-slope"),
        Error::NoAdmissibleMultiplier => (Verdict::Fail, "admissible-multiplier"),
        Error::NonConvergence(_) => (Verdict::Fail, "solver-convergence"),
        Error::HeightMismatch(_) => (Verdict::Fail, "height-match"),
        Error::NotPPower(_) | Error::NoUnitCoefficient => (Verdict::Fail, "height"),
        _ => (Verdict::ConfigError, "config"),
    }
}

struct Outcome {
    results: Value,
    cert: Certificate,
    highlights: Vec<String>,
}

fn error_report(name: String, kind: Option<Kind>, parameters: Value, e: &Error) -> Report {
    let (verdict, id) = error_verdict(e);
    Report {
        schema: SCHEMA,
        name,
        kind,
        parameters,
        verdict,
        first_failure: (verdict == Verdict::Fail).then(|| id.to_string()),
        error: Some(e.to_string()),
        checks_total: usize::from(verdict == Verdict::Fail),
        checks_passed: 0,
        highlights: Vec::new(),
        results: Value::Null,
        q_convention: "q = p^h",
    }
}

/// Parse and run a config document; malformed input yields a config-error
/// report rather than an `Err`.
pub fn run_json(text: &str, o: &Overrides) -> Report {
    match Scenario::from_json(text) {
        Ok(s) => run_scenario(&s, o),
        Err(e) => error_report("<config>".into(), None, Value::Null, &e),
    }
}

pub fn run_scenario(s: &Scenario, o: &Overrides) -> Report {
    let name = s.name.clone().unwrap_or_else(|| "<unnamed>".into());
    let (n, d) = s.budget(o);
    let mut effective = s.clone();
    effective.precision = Some(n);
    effective.cutoff = Some(d);
    effective.name = None;
    effective.description = None;
    let parameters = serde_json::to_value(&effective).expect("config serializes");
    let outcome = s.validate().and_then(|_| {
        if s.kind != Kind::CurveProduct && n < d as u32 + SOLVER_SLACK {
            return Err(Error::PrecisionExhausted(format!(
                "N = {n} is below the solver budget D + {SOLVER_SLACK} = {}",
                d as u32 + SOLVER_SLACK
            )));
        }
        let k = make_unramified_ring(s.p, s.f, n)?;
        match s.kind {
            Kind::LtBuild => lt_build(&k, &s.groups, d),
            Kind::DivisionField => division_fields(&k, &s.groups, d),
            Kind::CompositumEqual => compositum_equal(&k, &s.groups, d),
            Kind::CompositumUnequal => compositum_unequal(&k, &s.groups, d),
            Kind::EqualOverK1 => equal_over_k1(&k, &s.groups, d),
            Kind::CurveProduct => curves(&k, &s.curves, d),
        }
    });
    match outcome {
        Err(e) => error_report(name, Some(s.kind), parameters, &e),
        Ok(out) => {
            let total = out.cert.checks.len();
            let passed = out.cert.checks.iter().filter(|c| c.pass).count();
            let first = out.cert.first_failure().map(|c| c.id.clone());
            Report {
                schema: SCHEMA,
                name,
                kind: Some(s.kind),
                parameters,
                verdict: if first.is_none() { Verdict::Pass } else { Verdict::Fail },
                first_failure: first,
                error: None,
                checks_total: total,
                checks_passed: passed,
                highlights: out.highlights,
                results: out.results,
                q_convention: "q = p^h",
            }
        }
    }
}

fn series_of(k: &Arc<UnramifiedRing>, g: &GroupSpec) -> Result<LtSeries> {
    let c = match &g.multiplier {
        Some(m) => m.resolve(k)?,
        None => k.one(),
    };
    let pert = g
        .perturbation
        .iter()
        .map(|(i, a)| Ok((*i, a.resolve(k)?)))
        .collect::<Result<Vec<_>>>()?;
    lubin_tate_series(k, g.h, &c, &pert)
}

fn digits(k: &UnramifiedRing, x: &UrElem) -> Value {
    json!(k.to_strings(x))
}

/// Coordinates with balanced representatives, for the text summary.
fn signed(k: &UnramifiedRing, x: &UrElem) -> String {
    let m = k.modulus();
    let half = m / 2u8;
    let parts: Vec<String> = x
        .coeffs()
        .iter()
        .map(|c| if *c > half { format!("-{}", m - c) } else { c.to_string() })
        .collect();
    let last = parts.iter().rposition(|c| c != "0").unwrap_or(0);
    if last == 0 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

fn fields(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Vec<DivisionFieldData>> {
    groups
        .par_iter()
        .map(|g| {
            let s = series_of(k, g)?;
            division_field(&lubin_tate_group_law(&s, d)?)
        })
        .collect()
}

fn lt_build(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Outcome> {
    let built = groups
        .par_iter()
        .map(|g| {
            let s = series_of(k, g)?;
            let law = lubin_tate_group_law(&s, d)?;
            let axioms = verify_group_axioms(&law, d);
            let mut iterates = Vec::new();
            for n in 2..=3u32 {
                let it = iterate_series(k, law.pi_series(), n as usize);
                let ok = k.is_zero(it.coeff(0)) && *it.coeff(1) == k.pow(law.pi(), n as u128);
                iterates.push((n, ok));
            }
            Ok((s, law, axioms, iterates))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::default();
    let mut out = Vec::new();
    let mut highlights = Vec::new();
    for (i, (s, law, axioms, iterates)) in built.iter().enumerate() {
        for a in &axioms.checks {
            let at = a.first_failure.as_ref().map(|m| format!(" first failure at {m:?}")).unwrap_or_default();
            cert.push(format!("group[{i}].{}", a.name), a.pass, format!("to degree {}{at}", axioms.cutoff));
        }
        cert.push(
            format!("group[{i}].height"),
            law.height() == s.height(),
            format!("height {} from [π]", law.height()),
        );
        for (n, ok) in iterates {
            cert.push(format!("group[{i}].iterate-{n}"), *ok, format!("[π]^{n}(X) ≡ π^{n}X mod degree 2"));
        }
        highlights.push(format!(
            "group {i}: height {}, q = {}, axioms to degree {} {}",
            law.height(),
            s.q(),
            axioms.cutoff,
            if axioms.pass() { "hold" } else { "FAIL" }
        ));
        out.push(json!({
            "index": i,
            "height": law.height(),
            "q": s.q(),
            "pi": digits(k, &s.pi()),
            "series": s.coefficients().iter().map(|c| digits(k, c)).collect::<Vec<_>>(),
            "axioms": axioms,
            "iterates": iterates.iter().map(|(n, ok)| json!({"n": n, "pass": ok})).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome { results: json!({ "groups": out }), cert, highlights })
}

fn division_fields(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Outcome> {
    let data = fields(k, groups, d)?;
    let structure = data.par_iter().map(torsion_module_structure).collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::default();
    let mut out = Vec::new();
    let mut highlights = Vec::new();
    for (i, (dd, st)) in data.iter().zip(structure).enumerate() {
        cert.extend(&format!("group[{i}]"), verify_division_field(dd));
        cert.extend(&format!("group[{i}].torsion"), st);
        highlights.push(format!(
            "group {i}: K(Π)/K totally ramified of degree e = {}, Π^{} = π′ = {}, {} torsion points",
            dd.e(),
            dd.e(),
            signed(k, &dd.pair.pi_prime),
            dd.torsion.len()
        ));
        out.push(json!({
            "index": i,
            "q": dd.q(),
            "e": dd.e(),
            "pi_prime": digits(k, &dd.pair.pi_prime),
            "multiplier": digits(k, &dd.multiplier),
            "division_polynomial": {
                "coefficients": dd.division_poly.coeffs.iter().map(|c| digits(k, c)).collect::<Vec<_>>(),
                "digits": dd.division_poly.digits,
                "exact": dd.division_poly.exact,
            },
            "torsion_points": dd.torsion.len(),
        }));
    }
    Ok(Outcome { results: json!({ "groups": out }), cert, highlights })
}

fn compositum_equal(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Outcome> {
    let data = fields(k, groups, d)?;
    let r = verify_compositum(&data[0], &data[1])?;
    let g = galois_structure(&r);
    let mut cert = Certificate::default();
    cert.extend("compositum", r.certificate.clone());
    cert.extend("galois", g.certificate.clone());
    let highlights = vec![
        format!("ζ = {} of order {}", signed(k, &k.from_strings(&r.zeta)?), r.zeta_order),
        format!("ζ₁ of order {} over the degree-{} unramified ring", r.zeta1_order, r.f1),
        format!(
            "compositum degree {} over K (e = {}, f = {}), Kummer exponent {}",
            r.compositum_degree, r.ramification_index, r.unramified_degree, r.kummer_exponent
        ),
        format!("Krasner slack {} digits", r.krasner.slack_digits.min(r.krasner_swapped.slack_digits)),
        format!("equal over K: {}", r.equal_over_base),
        format!("Gal ≅ {}", g.group),
    ];
    Ok(Outcome { results: json!({ "compositum": r, "galois": g }), cert, highlights })
}

fn compositum_unequal(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Outcome> {
    let data = fields(k, groups, d)?;
    let r = verify_unequal_heights(&data[0], &data[1..])?;
    let mut cert = Certificate::default();
    cert.extend("unequal", r.certificate.clone());
    let mut highlights: Vec<String> = r
        .containments
        .iter()
        .map(|c| {
            format!(
                "group {} (height {}) ⊆ K₁(𝔉[π]) of height {}: descent exponent {}",
                c.index, c.height, r.h1, c.descent_exponent
            )
        })
        .collect();
    highlights.push(format!("degree of K₁ over Q_p: {}, lcm bound {}", r.k1_degree, r.lcm_bound));
    Ok(Outcome { results: json!({ "unequal": r }), cert, highlights })
}

fn equal_over_k1(k: &Arc<UnramifiedRing>, groups: &[GroupSpec], d: usize) -> Result<Outcome> {
    let data = fields(k, groups, d)?;
    let r = verify_equal_over_k1(&data)?;
    let mut cert = Certificate::default();
    cert.extend("equality", r.certificate.clone());
    let highlights = vec![
        format!("{} groups, K₁ of degree {} over Q_p", r.groups, r.k1_degree),
        format!("all torsion fields agree over K₁: {}", r.pass()),
        format!("Gal ≅ {} over K₁", r.galois_over_k1),
    ];
    Ok(Outcome { results: json!({ "equality": r }), cert, highlights })
}

fn curves(k: &Arc<UnramifiedRing>, coeffs: &[[i64; 5]], d: usize) -> Result<Outcome> {
    let (_, pi_cutoff) = default_cutoffs(k);
    let built = coeffs
        .par_iter()
        .map(|a| {
            let c = WeierstrassCurve::new(k, a.map(|n| k.from_int(n)))?;
            let v = supersingular_test(&c)?;
            let g = curve_formal_group(&c, d, pi_cutoff)?;
            Ok((v, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::default();
    let mut highlights = Vec::new();
    let mut verdicts = Vec::new();
    for (i, (v, g)) in built.iter().enumerate() {
        cert.push(
            format!("curve[{i}].height-matches-trace"),
            v.consistent() && v.height == g.height(),
            format!("height {}, trace {}", v.height, v.trace),
        );
        cert.push(
            format!("curve[{i}].axioms"),
            verify_group_axioms(g, d.min(16)).pass(),
            "formal group law axioms",
        );
        highlights.push(format!(
            "curve {i} {:?}: height {}, #E = {}, trace {}, {}",
            coeffs[i],
            v.height,
            v.point_count,
            v.trace,
            if v.supersingular { "supersingular" } else { "ordinary" }
        ));
        verdicts.push(v.clone());
    }
    let heights: Vec<u32> = built.iter().map(|(_, g)| g.height()).collect();
    let product = if heights.iter().all(|&h| h == heights[0]) {
        let groups: Vec<_> = built.into_iter().map(|(_, g)| g).collect();
        let data = groups.par_iter().map(division_field).collect::<Result<Vec<_>>>()?;
        let prod = product_group(groups)?;
        let r = verify_product_tameness_with(&prod, &data)?;
        cert.extend("product", r.certificate.clone());
        highlights.push(format!(
            "product of dimension {}: {} torsion points, e = {}, tame: {}",
            r.dimension, r.torsion_count, r.ramification_index, r.tame
        ));
        if let Some(eq) = &r.equality {
            highlights.push(format!("Gal ≅ {} over K₁ of degree {}", eq.galois_over_k1, eq.k1_degree));
        }
        Some(r)
    } else {
        highlights.push(format!("heights {heights:?} differ; no product taken"));
        None
    };
    Ok(Outcome { results: json!({ "curves": verdicts, "product": product }), cert, highlights })
}

/// A bundled scenario.
pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

macro_rules! builtin {
    ($name:literal, $desc:literal) => {
        Builtin {
            name: $name,
            description: $desc,
            config: include_str!(concat!("../scenarios/", $name, ".json")),
        }
    };
}

pub fn builtins() -> Vec<Builtin> {
    vec![
        builtin!("q3-two-uniformizers", "Q_3 with π = 3 and π = -3: compositum of degree 4, Galois group C2 x C2"),
        builtin!("q3-lt-build", "height-1 group laws over Q_3 and Q_9: axioms to degree q + 8 and iterates of [π]"),
        builtin!("q25-lt-build", "height-1 and height-2 group laws over Q_25: axioms to degree q + 8"),
        builtin!("q9-division-fields", "torsion fields of 3X + X^9 and its perturbation 3X + 3X^2 + X^9"),
        builtin!("q9-equal-over-k", "3X + X^9 and 3X + 3X^2 + X^9 share a torsion field over Q_9"),
        builtin!("q9-order-eight", "multipliers 1 and an 8th root of unity over Q_9: f1 = 16, Galois group C8 x C8"),
        builtin!("q9-three-groups", "three height-2 groups over Q_9 agree after adjoining the roots of unity"),
        builtin!("q9-unequal-heights", "height-1 torsion field inside the height-2 one over Q_9"),
        builtin!("q9-swapped-heights", "negative control: the height-2 field is not inside the height-1 one"),
        builtin!("q9-supersingular-curves", "formal groups of y^2 = x^3 + x and y^2 = x^3 - x + 1 over Z_9"),
    ]
}

pub fn builtin(name: &str) -> Option<Builtin> {
    builtins().into_iter().find(|b| b.name == name)
}
