//! Composita of division fields: the unit `ζ` relating two uniformizers, its
//! root `ζ₁`, Krasner location of `Π₂` near `ζ₁Π₁`, membership certificates,
//! Galois structure, and the unequal-height containments.

use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cert::Certificate;
use crate::division_points::{division_field, DivisionFieldData};
use crate::error::{Error, Result};
use crate::formal_group::{lubin_tate_group_law, lubin_tate_series};
use crate::membership::{membership, Membership, MembershipSummary};
use crate::residue::{canonical_cmp, gcd, lcm};
use crate::ring::Ring;
use crate::tame_ext::{RationalValuation, TameExt, TeElem};
use crate::unramified::{embed_subring, make_unramified_ring, RingEmbedding, UnramifiedRing, UrElem, Valuation};

/// `π₂′ = (ζ + x)·π₁′` with `ζ` a Teichmüller unit and `v(x) ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPair {
    pub zeta: UrElem,
    pub x: UrElem,
}

pub fn zeta_of_pair(k: &UnramifiedRing, pi1: &UrElem, pi2: &UrElem) -> Result<ZetaPair> {
    let unit_part = |pi: &UrElem| {
        if k.valuation(pi) != Valuation::Finite(1) {
            return Err(Error::NotUniformizer(k.valuation(pi).to_string()));
        }
        Ok(k.div_by_p(pi).expect("valuation 1"))
    };
    let u1 = unit_part(pi1)?;
    let u2 = unit_part(pi2)?;
    let ratio = k.mul(&u2, &k.unit_inverse(&u1)?);
    let zeta = k.teichmuller_of(&ratio);
    // the unit parts are only known modulo p^(N-1)
    let x = k.truncate(&k.sub(&ratio, &zeta), k.precision() - 1);
    Ok(ZetaPair { zeta, x })
}

/// A root `ζ₁` of `Y^n = ζ` in the least unramified extension containing one.
#[derive(Clone, Debug)]
pub struct ZetaOne {
    pub ring: Arc<UnramifiedRing>,
    /// `O_K -> ring`.
    pub embedding: RingEmbedding,
    pub zeta1: UrElem,
    pub f1: usize,
    pub order: u128,
}

/// The least multiple `f₁` of `f` such that `Y^n = ζ` is solvable in
/// `μ_{p^{f₁} - 1}`, where `ζ` has order `d`.
pub fn solvable_degree(p: u64, f: usize, d: u128, n: u128) -> Result<usize> {
    let mut f1 = f;
    loop {
        let m = checked_order(p, f1)?;
        let g = gcd_u128(n, m);
        if (m / g) % d == 0 {
            return Ok(f1);
        }
        f1 += f;
    }
}

fn checked_order(p: u64, f: usize) -> Result<u128> {
    (p as u128)
        .checked_pow(f as u32)
        .filter(|q| *q < 1u128 << 64)
        .map(|q| q - 1)
        .ok_or(Error::FieldTooLarge { p, f })
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The Teichmüller root of `Y^n = z` with least residue, if `B` has one.
fn least_root_of_unity_root(b: &UnramifiedRing, z: &UrElem, n: usize) -> Option<UrElem> {
    let rf = b.residue_field();
    let mut poly = vec![rf.neg(&b.residue(z))];
    poly.resize(n, rf.zero());
    poly.push(rf.one());
    let mut roots = rf.poly_roots(&poly);
    roots.sort_by(|x, y| canonical_cmp(x, y));
    roots.first().map(|r| b.teichmuller_lift(r))
}

pub fn adjoin_zeta_one(k: &Arc<UnramifiedRing>, zeta: &UrElem, q: usize) -> Result<ZetaOne> {
    let m = k.residue_order() - 1;
    if !k.is_unit(zeta) || k.pow(zeta, m) != k.one() {
        return Err(Error::InvalidParameter("ζ is not a (p^f - 1)-th root of unity".into()));
    }
    let d = k.root_of_unity_order(zeta);
    let n = (q - 1) as u128;
    let f1 = solvable_degree(k.p(), k.degree(), d, n)?;
    let ring = make_unramified_ring(k.p(), f1, k.precision())?;
    let embedding = embed_subring(k, &ring)?;
    let zeta1 = least_root_of_unity_root(&ring, &embedding.apply(zeta), q - 1).expect("degree chosen solvable");
    let order = ring.root_of_unity_order(&zeta1);
    Ok(ZetaOne { ring, embedding, zeta1, f1, order })
}

/// The inequalities that place `Π₂` in `K(β)`.
#[derive(Clone, Debug, Serialize)]
pub struct KrasnerWitness {
    #[serde(skip)]
    pub alpha: TeElem,
    /// `v(β^n - π₂′)`.
    pub residual_valuation: RationalValuation,
    /// `v(π₂′)`.
    pub target_valuation: RationalValuation,
    /// `v(β - α)`.
    pub approximation_valuation: RationalValuation,
    /// Least `v(α - ζα)` over `ζ ∈ μ_n`, `ζ ≠ 1`.
    pub root_gap: RationalValuation,
    /// `Π`-digits by which the weaker of the two strict inequalities holds.
    pub slack_digits: u32,
}

fn pi_digits(v: Valuation) -> u32 {
    match v {
        Valuation::Finite(k) | Valuation::AtLeast(k) => k,
    }
}

/// Find the root `α` of `X^n - π₂′` (`n = [L : B]`) closest to `β`.
///
/// Requires `v(β^n - π₂′) > v(π₂′)` and `v(β - α)` above every gap between
/// roots, each with at least two `Π`-digits to spare.
pub fn krasner_locate(ext: &TameExt, beta: &TeElem, pi2_prime: &UrElem) -> Result<KrasnerWitness> {
    let n = ext.e();
    let base = ext.base();
    let target = ext.from_base(pi2_prime);
    let bn = ext.pow(beta, n as u128);
    let residual = ext.sub(&bn, &target);
    let target_digits = match ext.pi_valuation(&target) {
        Valuation::Finite(v) => v,
        Valuation::AtLeast(_) => return Err(Error::NotUniformizer("zero".into())),
    };
    let res_digits = pi_digits(ext.pi_valuation(&residual));
    if res_digits < target_digits + 2 {
        return Err(Error::KrasnerGapFails(format!(
            "v(β^{n} - π₂′) = {} is not above v(π₂′) = {}",
            ext.rational_valuation(&residual),
            ext.rational_valuation(&target)
        )));
    }
    let w = ext.divide(&target, &bn)?;
    let y = ext.nth_root_of_principal_unit(&w, n as u64)?;
    let alpha = ext.mul(beta, &y);
    if !ext.is_zero(&ext.sub(&ext.pow(&alpha, n as u128), &target)) {
        return Err(Error::KrasnerGapFails("located α does not satisfy α^n = π₂′".into()));
    }
    let zeta = base.root_of_unity_generator(n as u128)?;
    let mut gap_digits = u32::MAX;
    let mut z = base.one();
    for _ in 1..n {
        z = base.mul(&z, &zeta);
        let d = ext.sub(&alpha, &ext.scale(&alpha, &z));
        gap_digits = gap_digits.min(pi_digits(ext.pi_valuation(&d)));
    }
    if n == 1 {
        gap_digits = 0;
    }
    let approx = ext.sub(beta, &alpha);
    let approx_digits = pi_digits(ext.pi_valuation(&approx));
    let slack = (res_digits - target_digits).min(approx_digits.saturating_sub(gap_digits));
    if slack < 2 {
        return Err(Error::KrasnerGapFails(format!(
            "v(β - α) = {} does not clear the root gap {}/{n}",
            ext.rational_valuation(&approx),
            gap_digits
        )));
    }
    Ok(KrasnerWitness {
        alpha,
        residual_valuation: ext.rational_valuation(&residual),
        target_valuation: ext.rational_valuation(&target),
        approximation_valuation: ext.rational_valuation(&approx),
        root_gap: RationalValuation::Finite(Ratio::new(gap_digits, n as u32)),
        slack_digits: slack,
    })
}

/// `α ↦ α^{(q₁-1)/(q₂-1)}`, a root of `X^{q₂-1} - π₂′` when `α` is one of
/// `X^{q₁-1} - π₂′`.
pub fn height_descend(ext: &TameExt, alpha: &TeElem, q1: usize, q2: usize) -> Result<TeElem> {
    let (e1, e2) = (q1 as u64 - 1, q2 as u64 - 1);
    if e2 == 0 || e1 % e2 != 0 {
        return Err(Error::DivisibilityFails(e2, e1));
    }
    Ok(ext.pow(alpha, (e1 / e2) as u128))
}

/// The division field of `small` realized inside `B(Π_big)`.
#[derive(Clone, Debug)]
struct Realization {
    ext: Arc<TameExt>,
    zeta: ZetaPair,
    zeta1: UrElem,
    witness: KrasnerWitness,
    /// Image of `Π_small`.
    image_pi: TeElem,
    torsion: Vec<TeElem>,
    memberships: Vec<Membership>,
    cert: Certificate,
}

fn check_same_base(a: &DivisionFieldData, b: &DivisionFieldData) -> Result<()> {
    if !a.base.same_field(&b.base) || a.base.precision() != b.base.precision() {
        return Err(Error::MixedRings);
    }
    Ok(())
}

/// Map `Σ c_k Π_s^k` to `Σ emb(c_k) γ^k`.
fn transport(ext: &TameExt, emb: &RingEmbedding, src: &TameExt, t: &TeElem, gamma_pows: &[TeElem]) -> TeElem {
    let ratio = (ext.e() / src.e()) as u32;
    let k = emb.src();
    let acc = t
        .coordinates()
        .iter()
        .zip(gamma_pows)
        .fold(ext.zero(), |acc, (c, g)| ext.add(&acc, &ext.scale(g, &emb.apply(&k.coerce(src.base(), c)))));
    ext.with_precision(&acc, t.precision().saturating_mul(ratio))
}

/// Realize `K(𝔉_small[π])` inside `B(Π_big)`, `B ⊇ K` given by `emb`.
fn realize(emb: &RingEmbedding, big: &DivisionFieldData, small: &DivisionFieldData) -> Result<Realization> {
    check_same_base(big, small)?;
    let k = &big.base;
    let b = emb.dst();
    let (qb, qs) = (big.q(), small.q());
    let zeta = zeta_of_pair(k, &big.pair.pi_prime, &small.pair.pi_prime)?;
    let zeta1 = least_root_of_unity_root(b, &emb.apply(&zeta.zeta), qb - 1).ok_or_else(|| {
        Error::InvalidParameter(format!("ζ has no ({})-th root in the degree-{} ring", qb - 1, b.degree()))
    })?;
    let unit = emb.apply(&k.div_by_p(&big.pair.pi_prime).expect("valuation 1"));
    let ext = TameExt::from_unit(b, qb - 1, unit)?;
    let l = &*ext;
    let beta = l.scale(&l.pi(), &zeta1);
    let pi_s = emb.apply(&small.pair.pi_prime);
    let witness = krasner_locate(l, &beta, &pi_s)?;
    let gamma = height_descend(l, &witness.alpha, qb, qs)?;
    let mut cert = Certificate::default();
    cert.push(
        "image-relation",
        l.equal(&l.pow(&gamma, (qs - 1) as u128), &l.from_base(&pi_s)),
        format!("image of Π₂ raised to {} equals π₂′", qs - 1),
    );
    let mut gamma_pows = vec![l.one()];
    for _ in 1..small.e() {
        gamma_pows.push(l.mul(gamma_pows.last().unwrap(), &gamma));
    }
    let src_emb = if Arc::ptr_eq(emb.src(), &small.base) { emb.clone() } else { embed_subring(&small.base, b)? };
    let torsion: Vec<TeElem> =
        small.torsion.iter().map(|t| transport(l, &src_emb, &small.ext, t, &gamma_pows)).collect();
    let law = small.group.at_precision(&small.base).base_change(&src_emb)?;
    let killed = torsion.iter().all(|t| law.eval_pi(l, t).map_or(false, |v| l.is_zero(&v)));
    cert.push("torsion-killed-by-pi", killed, format!("{} transported points", torsion.len()));
    let distinct = (0..torsion.len()).all(|i| (i + 1..torsion.len()).all(|j| !l.equal(&torsion[i], &torsion[j])));
    cert.push("torsion-distinct", distinct, "transported points are pairwise distinct");
    let over_b = RingEmbedding::identity(b.clone());
    let pi_basis: Vec<TeElem> = pi_powers(l);
    let memberships: Vec<Membership> =
        torsion.iter().map(|t| membership(l, t, &pi_basis, &over_b)).collect::<Result<_>>()?;
    cert.push(
        "torsion-in-ambient",
        memberships.iter().all(Membership::is_member),
        format!("coordinates over the degree-{} ring", b.degree()),
    );
    Ok(Realization { ext, zeta, zeta1, witness, image_pi: gamma, torsion, memberships, cert })
}

fn pi_powers(l: &TameExt) -> Vec<TeElem> {
    let mut out = vec![l.one()];
    for _ in 1..l.e() {
        out.push(l.mul(out.last().unwrap(), &l.pi()));
    }
    out
}

/// Named membership outcome for reports.
#[derive(Clone, Debug, Serialize)]
pub struct NamedMembership {
    pub name: String,
    #[serde(flatten)]
    pub summary: MembershipSummary,
}

/// The certified compositum of two equal-height division fields.
#[derive(Clone, Debug, Serialize)]
pub struct CompositumReport {
    pub p: u64,
    pub f: usize,
    pub h: u32,
    pub q: usize,
    pub precision: u32,
    pub pi1_prime: Vec<String>,
    pub pi2_prime: Vec<String>,
    pub zeta: Vec<String>,
    pub zeta_order: u128,
    pub x: Vec<String>,
    pub zeta1: Vec<String>,
    pub zeta1_order: u128,
    pub f1: usize,
    pub unramified_degree: usize,
    pub ramification_index: usize,
    pub compositum_degree: usize,
    pub equal_over_base: bool,
    pub kummer_exponent: u128,
    pub krasner: KrasnerWitness,
    pub krasner_swapped: KrasnerWitness,
    pub memberships: Vec<NamedMembership>,
    pub certificate: Certificate,
    #[serde(skip)]
    pub base: Arc<UnramifiedRing>,
    #[serde(skip)]
    pub zeta_one: ZetaOne,
    #[serde(skip)]
    pub ambient: Arc<TameExt>,
}

impl CompositumReport {
    pub fn pass(&self) -> bool {
        self.certificate.pass()
    }
}

/// `ord(ζ₁) / gcd(ord(ζ₁), p^f - 1)`.
pub fn kummer_exponent(order: u128, base_units: u128) -> u128 {
    order / gcd_u128(order, base_units)
}

struct PairCore {
    zeta_one: ZetaOne,
    real: Realization,
    memberships: Vec<NamedMembership>,
    cert: Certificate,
}

fn pair_core(d1: &DivisionFieldData, d2: &DivisionFieldData) -> Result<PairCore> {
    check_same_base(d1, d2)?;
    if d1.group.height() != d2.group.height() {
        return Err(Error::HeightMismatch(format!("{} vs {}", d1.group.height(), d2.group.height())));
    }
    let k = &d1.base;
    let q = d1.q();
    let e = q - 1;
    let zp = zeta_of_pair(k, &d1.pair.pi_prime, &d2.pair.pi_prime)?;
    let zeta_one = adjoin_zeta_one(k, &zp.zeta, q)?;
    let emb = &zeta_one.embedding;
    let b = &zeta_one.ring;
    let real = realize(emb, d1, d2)?;
    let l = &*real.ext;
    let mut cert = Certificate::default();
    let recombined = k.mul(&k.add(&zp.zeta, &zp.x), &d1.pair.pi_prime);
    cert.push(
        "zeta",
        k.equal(&recombined, &d2.pair.pi_prime) && k.valuation(&zp.x).is_at_least(1),
        format!("π₂′ = (ζ + x)π₁′ with v(x) = {}", k.valuation(&zp.x)),
    );
    let z1 = &zeta_one.zeta1;
    let z1_pow = b.pow(z1, e as u128);
    let in_mu = b.pow(z1, (e as u128) * (k.residue_order() - 1)) == b.one();
    let smaller = (1..zeta_one.f1 / k.degree()).all(|j| {
        let m = (k.p() as u128).pow((j * k.degree()) as u32) - 1;
        (m / gcd_u128(e as u128, m)) % k.root_of_unity_order(&zp.zeta) != 0
    });
    cert.push(
        "zeta1",
        z1_pow == emb.apply(&zp.zeta) && in_mu && smaller,
        format!("ζ₁^{e} = ζ, ζ₁ ∈ μ_(q-1)(p^f-1), f₁ = {} is least", zeta_one.f1),
    );
    cert.push(
        "krasner",
        true,
        format!(
            "v(β^{e} - π₂′) = {} > {}, v(β - α) = {} > {}",
            real.witness.residual_valuation,
            real.witness.target_valuation,
            real.witness.approximation_valuation,
            real.witness.root_gap
        ),
    );
    cert.extend("transport", real.cert.clone());

    // K(ζ₁, Π₁) contains the image of Π₂ and all of 𝔉₂[π₂]
    let u = zeta_one.f1 / k.degree();
    let mut z1_pows = vec![b.one()];
    for _ in 1..u {
        z1_pows.push(b.mul(z1_pows.last().unwrap(), z1));
    }
    let pis = pi_powers(l);
    let basis_a: Vec<TeElem> = z1_pows.iter().flat_map(|z| pis.iter().map(move |pp| l.scale(pp, z))).collect();
    let mut memberships = Vec::new();
    let mut all = true;
    let m = membership(l, &real.image_pi, &basis_a, emb)?;
    all &= m.is_member();
    memberships.push(NamedMembership { name: "pi2-over-K".into(), summary: (&m).into() });
    for (i, t) in real.torsion.iter().enumerate() {
        let m = membership(l, t, &basis_a, emb)?;
        all &= m.is_member();
        memberships.push(NamedMembership { name: format!("torsion2[{i}]-over-K"), summary: (&m).into() });
    }
    cert.push("field2-in-compositum", all, "Π₂ and 𝔉₂[π₂] in the K-span of ζ₁^a Π₁^b");

    // ζ₁ ∈ K(Π₁, Π₂): span of Π₁^i (α/Π₁)^j
    let ratio = l.div_pi_pow(&real.witness.alpha, 1).expect("valuation 1/e");
    let mut r_pows = vec![l.one()];
    for _ in 1..u {
        r_pows.push(l.mul(r_pows.last().unwrap(), &ratio));
    }
    let basis_b: Vec<TeElem> = r_pows.iter().flat_map(|r| pis.iter().map(move |pp| l.mul(pp, r))).collect();
    let m = membership(l, &l.from_base(z1), &basis_b, emb)?;
    cert.push("zeta1-in-compositum", m.is_member(), "ζ₁ in the K-span of Π₁^i (α/Π₁)^j");
    memberships.push(NamedMembership { name: "zeta1-over-K(Pi1,Pi2)".into(), summary: (&m).into() });

    let orbit = frobenius_orbit(b, z1, k.degree());
    cert.push(
        "unramified-part",
        orbit == u && gcd(e as u64, k.p()) == 1,
        format!("σ^f has orbit {orbit} on ζ₁, [K(ζ₁):K] = {u}, gcd({e}, {}) = 1", k.p()),
    );
    Ok(PairCore { zeta_one, real, memberships, cert })
}

/// Length of the orbit of `x` under `σ^f`.
fn frobenius_orbit(b: &UnramifiedRing, x: &UrElem, f: usize) -> usize {
    let mut y = b.frobenius_pow(x, f);
    let mut n = 1;
    while y != *x {
        y = b.frobenius_pow(&y, f);
        n += 1;
    }
    n
}

/// `K(𝔉₁[π₁], 𝔉₂[π₂]) = K(Π₁, Π₂) = K(ζ₁, Π₁) = K(ζ₁, Π₂)` for two groups of
/// the same height over the same `K`.
pub fn verify_compositum(d1: &DivisionFieldData, d2: &DivisionFieldData) -> Result<CompositumReport> {
    let fwd = pair_core(d1, d2)?;
    let bwd = pair_core(d2, d1)?;
    let k = &d1.base;
    let q = d1.q();
    let e = q - 1;
    let mut certificate = fwd.cert.clone();
    certificate.push(
        "swapped",
        bwd.cert.pass(),
        match bwd.cert.first_failure() {
            None => "the roles of the two groups can be exchanged".to_string(),
            Some(c) => format!("swapped run fails at {}", c.id),
        },
    );
    let zo = &fwd.zeta_one;
    let u = zo.f1 / k.degree();
    let zeta = &fwd.real.zeta;
    Ok(CompositumReport {
        p: k.p(),
        f: k.degree(),
        h: d1.group.height(),
        q,
        precision: k.precision(),
        pi1_prime: k.to_strings(&d1.pair.pi_prime),
        pi2_prime: k.to_strings(&d2.pair.pi_prime),
        zeta: k.to_strings(&zeta.zeta),
        zeta_order: k.root_of_unity_order(&zeta.zeta),
        x: k.to_strings(&zeta.x),
        zeta1: zo.ring.to_strings(&zo.zeta1),
        zeta1_order: zo.order,
        f1: zo.f1,
        unramified_degree: u,
        ramification_index: e,
        compositum_degree: u * e,
        equal_over_base: u == 1,
        kummer_exponent: kummer_exponent(zo.order, k.residue_order() - 1),
        krasner: fwd.real.witness.clone(),
        krasner_swapped: bwd.real.witness.clone(),
        memberships: fwd.memberships,
        certificate,
        base: k.clone(),
        zeta_one: fwd.zeta_one.clone(),
        ambient: fwd.real.ext.clone(),
    })
}

/// Galois group of the compositum over `K`.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisStructure {
    pub unramified_order: usize,
    pub ramified_order: usize,
    pub group: String,
    pub kummer_exponent: u128,
    pub certificate: Certificate,
}

fn cyclic_name(n: usize) -> String {
    format!("C{n}")
}

pub fn galois_structure(report: &CompositumReport) -> GaloisStructure {
    let k = &report.base;
    let zo = &report.zeta_one;
    let b = &zo.ring;
    let l = &*report.ambient;
    let f = k.degree();
    let e = l.e();
    let mut cert = Certificate::default();

    let orbit = frobenius_orbit(b, &zo.zeta1, f);
    let moved = report.unramified_degree == 1 || b.frobenius_pow(&zo.zeta1, f) != zo.zeta1;
    cert.push(
        "unramified-factor",
        orbit == report.unramified_degree && moved,
        format!("σ^f permutes the roots of Y^{e} = ζ with orbit {orbit} on ζ₁"),
    );

    let zeta_e = b.root_of_unity_generator(e as u128).expect("μ_(q-1) ⊂ K");
    let mut x = l.pi();
    let mut order = 0;
    for n in 1..=e {
        x = l.scale_pi(&x, &zeta_e);
        if l.equal(&x, &l.pi()) {
            order = n;
            break;
        }
    }
    let preserves = l.equal(&l.pow(&l.scale_pi(&l.pi(), &zeta_e), e as u128), &l.from_base(l.gamma()));
    cert.push("ramified-factor", order == e && preserves, format!("Π ↦ ζ_(q-1)Π has order {order}"));

    // σ acts on coordinates and fixes Π; τ scales Π. They commute on ζ₁^a Π^b.
    let sigma = |t: &TeElem| l.map_coords(t, |c| b.frobenius_pow(c, f));
    let tau = |t: &TeElem| l.scale_pi(t, &zeta_e);
    let mut commute = true;
    let mut z = b.one();
    for _ in 0..report.unramified_degree {
        let mut pp = l.from_base(&z);
        for _ in 0..e {
            commute &= l.equal(&sigma(&tau(&pp)), &tau(&sigma(&pp)));
            pp = l.mul(&pp, &l.pi());
        }
        z = b.mul(&z, &zo.zeta1);
    }
    cert.push("direct-product", commute, "σ and τ commute on the basis ζ₁^a Π^b");

    let ek = report.kummer_exponent;
    let in_k = |n: u128| {
        let y = b.pow(&zo.zeta1, n);
        b.frobenius_pow(&y, f) == y
    };
    let minimal = crate::residue::divisors(ek as u64).into_iter().filter(|&d| (d as u128) < ek).all(|d| !in_k(d as u128));
    cert.push(
        "kummer-exponent",
        in_k(ek) && minimal && (e as u128) % ek == 0,
        format!("ζ₁^{ek} ∈ K, no smaller power is, and {ek} | {e}"),
    );
    let group = if report.unramified_degree == 1 {
        cyclic_name(e)
    } else {
        format!("{} x {}", cyclic_name(report.unramified_degree), cyclic_name(e))
    };
    GaloisStructure {
        unramified_order: report.unramified_degree,
        ramified_order: e,
        group,
        kummer_exponent: ek,
        certificate: cert,
    }
}

/// The least multiple `f₁` of `f` with `(q - 1)(p^f - 1) | p^{f₁} - 1`.
pub fn k1_degree(p: u64, f: usize, q: usize) -> Result<usize> {
    let n = (q as u128 - 1) * (checked_order(p, f)?);
    let mut f1 = f;
    loop {
        if checked_order(p, f1)? % n == 0 {
            return Ok(f1);
        }
        f1 += f;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEquality {
    pub i: usize,
    pub j: usize,
    /// `ζ_ij` with `π_j′ = (ζ_ij + x)π_i′`.
    pub zeta: Vec<String>,
    pub zeta1: Vec<String>,
    pub krasner_slack_digits: u32,
    pub forward: bool,
    pub backward: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityReport {
    pub p: u64,
    pub f: usize,
    pub h: u32,
    pub q: usize,
    pub precision: u32,
    /// Always `q = p^h`.
    pub q_convention: String,
    pub groups: usize,
    pub k1_degree: usize,
    pub unramified_degree: usize,
    pub ramification_index: usize,
    pub tame: bool,
    pub galois_over_k1: String,
    pub pairs: Vec<PairEquality>,
    pub certificate: Certificate,
}

impl EqualityReport {
    pub fn pass(&self) -> bool {
        self.certificate.pass()
    }
}

/// `K₁(𝔉₁[π₁]) = … = K₁(𝔉_n[π_n])` with `K₁ = K(μ_{(q-1)(p^f-1)})`.
pub fn verify_equal_over_k1(groups: &[DivisionFieldData]) -> Result<EqualityReport> {
    if groups.len() < 2 {
        return Err(Error::InvalidParameter("need at least two groups".into()));
    }
    let d0 = &groups[0];
    for d in &groups[1..] {
        check_same_base(d0, d)?;
        if d.group.height() != d0.group.height() {
            return Err(Error::HeightMismatch(format!("{} vs {}", d0.group.height(), d.group.height())));
        }
    }
    let k = &d0.base;
    let q = d0.q();
    let e = q - 1;
    let f1 = k1_degree(k.p(), k.degree(), q)?;
    let k1 = make_unramified_ring(k.p(), f1, k.precision())?;
    let emb = embed_subring(k, &k1)?;
    let pairs: Vec<(usize, usize)> =
        (0..groups.len()).flat_map(|i| (i + 1..groups.len()).map(move |j| (i, j))).collect();
    let runs: Vec<Result<(Realization, Realization)>> = pairs
        .par_iter()
        .map(|&(i, j)| Ok((realize(&emb, &groups[i], &groups[j])?, realize(&emb, &groups[j], &groups[i])?)))
        .collect();
    let mut certificate = Certificate::default();
    let mut out = Vec::new();
    for (&(i, j), run) in pairs.iter().zip(runs) {
        let (fwd, bwd) = run?;
        certificate.extend(&format!("pair[{i},{j}]"), fwd.cert.clone());
        certificate.extend(&format!("pair[{j},{i}]"), bwd.cert.clone());
        out.push(PairEquality {
            i,
            j,
            zeta: k.to_strings(&fwd.zeta.zeta),
            zeta1: k1.to_strings(&fwd.zeta1),
            krasner_slack_digits: fwd.witness.slack_digits.min(bwd.witness.slack_digits),
            forward: fwd.cert.pass(),
            backward: bwd.cert.pass(),
        });
    }
    let l = TameExt::from_unit(&k1, e, emb.apply(&k.div_by_p(&d0.pair.pi_prime).expect("valuation 1")))?;
    let zeta_e = k1.root_of_unity_generator(e as u128)?;
    let mut x = l.pi();
    let mut order = 0;
    for n in 1..=e {
        x = l.scale_pi(&x, &zeta_e);
        if l.equal(&x, &l.pi()) {
            order = n;
            break;
        }
    }
    certificate.push("galois-over-K1", order == e, format!("Π ↦ ζΠ generates a group of order {order}"));
    let tame = gcd(e as u64, k.p()) == 1;
    certificate.push("tame", tame, format!("gcd({e}, {}) = 1, unramified part of degree {}", k.p(), f1 / k.degree()));
    Ok(EqualityReport {
        p: k.p(),
        f: k.degree(),
        h: d0.group.height(),
        q,
        precision: k.precision(),
        q_convention: "q = p^h".into(),
        groups: groups.len(),
        k1_degree: f1,
        unramified_degree: f1 / k.degree(),
        ramification_index: e,
        tame,
        galois_over_k1: format!("C{e}"),
        pairs: out,
        certificate,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Containment {
    pub index: usize,
    pub height: u32,
    pub descent_exponent: usize,
    pub zeta: Vec<String>,
    pub zeta1: Vec<String>,
    pub krasner: KrasnerWitness,
    pub torsion_points: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnequalHeightReport {
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub h1: u32,
    pub heights: Vec<u32>,
    pub k1_degree: usize,
    pub containments: Vec<Containment>,
    /// Only containment is certified; equality need not hold.
    pub equality_claimed: bool,
    pub f_a: usize,
    pub lcm_bound: u32,
    pub bound_witnessed: bool,
    pub certificate: Certificate,
}

impl UnequalHeightReport {
    pub fn pass(&self) -> bool {
        self.certificate.pass()
    }
}

/// Residue degree of `Q_p(π) ⊆ K`: the least `d | f` with `σ^d(π) = π`.
pub fn residue_degree_of(k: &UnramifiedRing, pi: &UrElem) -> usize {
    crate::residue::divisors(k.degree() as u64)
        .into_iter()
        .map(|d| d as usize)
        .find(|&d| k.frobenius_pow(pi, d) == *pi)
        .unwrap_or(k.degree())
}

/// `K₁(𝔉_i[π_i]) ⊆ K₁(𝔉₁[π₁])` for every `i`, where `h_i | h₁` and
/// `K₁ = K(μ_{(q₁-1)(p^f-1)})`.
pub fn verify_unequal_heights(d1: &DivisionFieldData, others: &[DivisionFieldData]) -> Result<UnequalHeightReport> {
    let h1 = d1.group.height();
    for d in others {
        check_same_base(d1, d)?;
        let h = d.group.height();
        if h1 % h != 0 {
            return Err(Error::DivisibilityFails(h as u64, h1 as u64));
        }
    }
    let k = &d1.base;
    let f1 = k1_degree(k.p(), k.degree(), d1.q())?;
    let k1 = make_unramified_ring(k.p(), f1, k.precision())?;
    let emb = embed_subring(k, &k1)?;
    let runs: Vec<Result<Realization>> = others.par_iter().map(|d| realize(&emb, d1, d)).collect();
    let mut certificate = Certificate::default();
    let mut containments = Vec::new();
    for (i, (d, run)) in others.iter().zip(runs).enumerate() {
        let r = run?;
        certificate.extend(&format!("group[{}]", i + 1), r.cert.clone());
        containments.push(Containment {
            index: i + 1,
            height: d.group.height(),
            descent_exponent: (d1.q() - 1) / (d.q() - 1),
            zeta: k.to_strings(&r.zeta.zeta),
            zeta1: k1.to_strings(&r.zeta1),
            krasner: r.witness.clone(),
            torsion_points: r.torsion.len(),
            pass: r.cert.pass() && r.memberships.iter().all(Membership::is_member),
        });
    }
    let f_a = residue_degree_of(k, d1.group.pi());
    let heights: Vec<u32> = std::iter::once(h1).chain(others.iter().map(|d| d.group.height())).collect();
    let big_h = heights.iter().fold(f_a as u64, |acc, &h| lcm(acc, h as u64)) as u32;
    let (bound_witnessed, detail) = if big_h == h1 {
        (certificate.pass(), "the first group has height H".to_string())
    } else {
        match lcm_witness(d1, others, big_h) {
            Ok(c) => {
                let pass = c.pass();
                certificate.extend("lcm-witness", c);
                (pass, format!("Lubin–Tate witness of height {big_h}"))
            }
            Err(err) => (false, format!("no witness of height {big_h}: {err}")),
        }
    };
    certificate.push("lcm-bound", bound_witnessed || big_h != h1, detail);
    Ok(UnequalHeightReport {
        p: k.p(),
        f: k.degree(),
        precision: k.precision(),
        h1,
        heights,
        k1_degree: f1,
        containments,
        equality_claimed: false,
        f_a,
        lcm_bound: big_h,
        bound_witnessed,
        certificate,
    })
}

/// Containment of every field in `K₁(𝔉[π₁])` for a Lubin–Tate group of height `H`.
fn lcm_witness(d1: &DivisionFieldData, others: &[DivisionFieldData], big_h: u32) -> Result<Certificate> {
    let k = &d1.base;
    let pi = k.coerce(d1.group.ring(), d1.group.pi());
    let c = k.div_by_p(&pi).ok_or_else(|| Error::NotUniformizer(k.valuation(&pi).to_string()))?;
    if k.teichmuller_of(&c) != c {
        return Err(Error::MultiplierOrderWrong);
    }
    let lt = lubin_tate_series(k, big_h, &c, &[])?;
    let law = lubin_tate_group_law(&lt, lt.q() + 1)?;
    let w = division_field(&law)?;
    let f1 = k1_degree(k.p(), k.degree(), w.q())?;
    let k1 = make_unramified_ring(k.p(), f1, k.precision())?;
    let emb = embed_subring(k, &k1)?;
    let mut cert = Certificate::default();
    for (i, d) in std::iter::once(d1).chain(others).enumerate() {
        let r = realize(&emb, &w, d)?;
        cert.extend(&format!("group[{i}]"), r.cert);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{lubin_tate_group_law, lubin_tate_series};

    fn q3() -> Arc<UnramifiedRing> {
        make_unramified_ring(3, 1, 12).unwrap()
    }

    #[test]
    fn zeta_examples() {
        let k = q3();
        let z = zeta_of_pair(&k, &k.from_int(-3), &k.from_int(3)).unwrap();
        assert_eq!(z, ZetaPair { zeta: k.from_int(-1), x: k.zero() });
        let z = zeta_of_pair(&k, &k.from_int(3), &k.from_int(3)).unwrap();
        assert_eq!(z.zeta, k.one());
        let z = zeta_of_pair(&k, &k.from_int(-3), &k.from_int(-12)).unwrap();
        assert_eq!(z.zeta, k.one());
        assert_eq!(z.x, k.from_int(3));
        assert!(matches!(zeta_of_pair(&k, &k.from_int(9), &k.from_int(3)), Err(Error::NotUniformizer(_))));
    }

    #[test]
    fn adjoin_examples() {
        let k = q3();
        let z = adjoin_zeta_one(&k, &k.from_int(-1), 3).unwrap();
        assert_eq!(z.f1, 2);
        assert_eq!(z.order, 4);
        let b = &z.ring;
        assert_eq!(b.pow(&z.zeta1, 2), b.from_int(-1));
        let z = adjoin_zeta_one(&k, &k.one(), 3).unwrap();
        assert_eq!((z.f1, z.zeta1.clone()), (1, z.ring.one()));
        let k9 = make_unramified_ring(3, 2, 6).unwrap();
        let g = k9.root_of_unity_generator(8).unwrap();
        let z = adjoin_zeta_one(&k9, &g, 9).unwrap();
        assert_eq!((z.f1, z.order), (16, 64));
    }

    #[test]
    fn descend_examples() {
        let k = make_unramified_ring(3, 2, 6).unwrap();
        let l = TameExt::from_unit(&k, 8, k.from_int(-1)).unwrap();
        let a = l.pi();
        assert!(l.equal(&height_descend(&l, &a, 9, 9).unwrap(), &a));
        let d = height_descend(&l, &a, 9, 3).unwrap();
        assert!(l.equal(&l.pow(&d, 2), &l.from_int(-3)));
        assert_eq!(height_descend(&l, &a, 9, 4).unwrap_err(), Error::DivisibilityFails(3, 8));
    }

    #[test]
    fn krasner_examples() {
        // β = iΠ with Π^2 = -3: β^2 = 3 exactly
        let b = make_unramified_ring(3, 2, 10).unwrap();
        let l = TameExt::from_unit(&b, 2, b.from_int(-1)).unwrap();
        let beta = l.scale(&l.pi(), &b.generator());
        let w = krasner_locate(&l, &beta, &b.from_int(3)).unwrap();
        assert!(l.equal(&w.alpha, &beta));
        assert!(w.slack_digits >= 2);
        // 3·(1 + 3·5): α ≠ β but close
        let w = krasner_locate(&l, &beta, &b.from_int(48)).unwrap();
        assert_eq!(w.approximation_valuation, RationalValuation::Finite(Ratio::new(3, 2)));
        // 3·(1 + i): residue of the ratio does not match
        let bad = b.mul(&b.from_int(3), &b.add(&b.one(), &b.generator()));
        assert!(matches!(krasner_locate(&l, &beta, &bad), Err(Error::KrasnerGapFails(_))));
    }

    fn lt(k: &Arc<UnramifiedRing>, h: u32, c: &UrElem, pert: &[(usize, UrElem)]) -> DivisionFieldData {
        let s = lubin_tate_series(k, h, c, pert).unwrap();
        division_field(&lubin_tate_group_law(&s, s.q() + 1).unwrap()).unwrap()
    }

    #[test]
    fn q3_pair() {
        let k = q3();
        let d1 = lt(&k, 1, &k.one(), &[]);
        let d2 = lt(&k, 1, &k.from_int(-1), &[]);
        let r = verify_compositum(&d1, &d2).unwrap();
        assert!(r.pass(), "{:?}", r.certificate.first_failure());
        assert_eq!(r.zeta, k.to_strings(&k.from_int(-1)));
        assert_eq!((r.f1, r.zeta1_order, r.compositum_degree, r.kummer_exponent), (2, 4, 4, 2));
        let g = galois_structure(&r);
        assert!(g.certificate.pass(), "{:?}", g.certificate);
        assert_eq!(g.group, "C2 x C2");
        let s = verify_compositum(&d2, &d1).unwrap();
        assert!(s.pass());
        let eq = verify_equal_over_k1(&[d1, d2]).unwrap();
        assert!(eq.pass(), "{:?}", eq.certificate.first_failure());
        assert_eq!(eq.k1_degree, 2);
    }

    #[test]
    fn unequal_heights_q9() {
        let k = make_unramified_ring(3, 2, 8).unwrap();
        let d1 = lt(&k, 2, &k.one(), &[]);
        let d2 = lt(&k, 1, &k.one(), &[]);
        let r = verify_unequal_heights(&d1, std::slice::from_ref(&d2)).unwrap();
        assert!(r.pass(), "{:?}", r.certificate.first_failure());
        assert_eq!(r.containments[0].descent_exponent, 4);
        assert_eq!((r.f_a, r.lcm_bound), (1, 2));
        assert_eq!(
            verify_unequal_heights(&d2, std::slice::from_ref(&d1)).unwrap_err(),
            Error::DivisibilityFails(2, 1)
        );
    }
}
