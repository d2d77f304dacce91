//! The `π`-torsion of a formal group and the radical field it generates.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::formal_group::{lubin_tate_endomorphism, FormalGroupLaw};
use crate::residue::canonical_cmp;
use crate::ring::Ring;
use crate::tame_ext::{TameExt, TeElem, UniformizerPair};
use crate::unramified::{UnramifiedRing, UrElem, Valuation};

/// `P̃ = P / X` where `[π] = P·U` is the Weierstrass factorization.
#[derive(Clone, Debug)]
pub struct DivisionPolynomial {
    /// Coefficients `a_0 .. a_{q-1}` with `a_{q-1} = 1`.
    pub coeffs: Vec<UrElem>,
    /// `p`-adic digits of the coefficients that are meaningful.
    pub digits: u32,
    /// The coefficients are exact (the `[π]` series was a polynomial).
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct DivisionFieldData {
    pub group: FormalGroupLaw,
    /// `K` at the precision the torsion is known to.
    pub base: Arc<UnramifiedRing>,
    pub ext: Arc<TameExt>,
    pub pair: UniformizerPair,
    /// `0` followed by the nonzero points, ordered by the residue of `t/Π`.
    pub torsion: Vec<TeElem>,
    /// `c` with `γ = c·p·teich(-a_0/p)`.
    pub multiplier: UrElem,
    pub division_poly: DivisionPolynomial,
}

impl DivisionFieldData {
    pub fn q(&self) -> usize {
        self.group.q()
    }

    pub fn e(&self) -> usize {
        self.ext.e()
    }
}

/// Weierstrass-prepare `[π]` and strip the factor `X`.
pub fn division_polynomial(group: &FormalGroupLaw) -> Result<DivisionPolynomial> {
    let r = group.ring();
    let q = group.q();
    let w = if group.pi_is_polynomial() {
        group.pi_series().weierstrass_prep_polynomial(r)?
    } else {
        group.pi_series().weierstrass_prep(r)?
    };
    if w.poly.len() != q + 1 {
        return Err(Error::HeightMismatch(format!(
            "Weierstrass degree {} but q = {q}",
            w.poly.len() - 1
        )));
    }
    let low = r.truncate(&w.poly[0], w.digits);
    if !r.is_zero(&low) {
        return Err(Error::NonzeroConstantTerm);
    }
    let coeffs: Vec<UrElem> = w.poly[1..].to_vec();
    let v0 = r.truncate(&coeffs[0], w.digits);
    let slope_ok = r.valuation(&v0) == Valuation::Finite(1)
        && coeffs[1..q - 1].iter().all(|a| r.valuation(a).is_at_least(1));
    if !slope_ok {
        let vals: Vec<String> = coeffs.iter().map(|a| r.valuation(a).to_string()).collect();
        return Err(Error::MultipleSlopes(format!("coefficient valuations [{}]", vals.join(", "))));
    }
    Ok(DivisionPolynomial { coeffs, digits: w.digits, exact: group.pi_is_polynomial() })
}

/// Newton's method for a simple root of a monic polynomial over `L`.
fn newton_root(ext: &TameExt, poly: &[TeElem], start: TeElem) -> Result<TeElem> {
    let dpoly: Vec<TeElem> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ext.mul(c, &ext.from_int(i as i64)))
        .collect();
    let eval = |p: &[TeElem], x: &TeElem| p.iter().rev().fold(ext.zero(), |acc, c| ext.add(&ext.mul(&acc, x), c));
    let mut y = start;
    for _ in 0..64 {
        let v = eval(poly, &y);
        if ext.is_zero(&v) {
            return Ok(y);
        }
        let d = eval(&dpoly, &y);
        y = ext.sub(&y, &ext.mul(&v, &ext.unit_inverse(&d)?));
    }
    Err(Error::NonConvergence(poly.len() - 1))
}

/// Find the radical field `K(Π)` containing the `π`-torsion, and the torsion.
pub fn construct_division_field(group: &FormalGroupLaw, dp: &DivisionPolynomial) -> Result<DivisionFieldData> {
    let r0 = group.ring();
    let q = group.q();
    let e = q - 1;
    if (r0.residue_order() - 1) % e as u128 != 0 {
        return Err(Error::HeightNotDividingF { h: group.height(), f: r0.degree() });
    }
    let base = if dp.digits < r0.precision() { r0.with_precision(dp.digits) } else { r0.clone() };
    let k = &*base;
    let a: Vec<UrElem> = dp.coeffs.iter().map(|c| k.coerce(r0, c)).collect();
    // a_k / p for k < q - 1
    let a_over_p: Vec<UrElem> = a[..e]
        .iter()
        .map(|x| k.div_by_p(x).expect("single slope"))
        .collect();
    let coeff_prec = if dp.exact { e as u32 * k.precision() } else { e as u32 * (k.precision() - 1) };
    let start = k.teichmuller_of(&k.neg(&a_over_p[0]));
    let rf = k.residue_field();
    for c_res in rf.elements().filter(|x| !rf.is_zero(x)) {
        let c = k.teichmuller_lift(&c_res);
        let unit = k.mul(&c, &start);
        let ext = TameExt::from_unit(&base, e, unit.clone())?;
        let l = &*ext;
        let u_inv = k.unit_inverse(&unit)?;
        // Q(Y) = P̃(ΠY) / γ = Y^e + Σ (a_k/p)(γ/p)^{-1} Π^k Y^k
        let mut poly: Vec<TeElem> = (0..e)
            .map(|i| {
                let b = l.mul_pi_pow(&l.from_base(&k.mul(&a_over_p[i], &u_inv)), i as u32);
                l.with_precision(&b, coeff_prec)
            })
            .collect();
        poly.push(l.one());
        let b0 = k.residue(&k.mul(&a_over_p[0], &u_inv));
        // residue equation Y^e + b0 = 0
        let mut res_poly = vec![b0];
        res_poly.resize(e, rf.zero());
        res_poly.push(rf.one());
        let mut roots = rf.poly_roots(&res_poly);
        if roots.len() != e {
            continue;
        }
        roots.sort_by(|x, y| canonical_cmp(x, y));
        let ys: Vec<TeElem> = roots
            .iter()
            .map(|r| newton_root(l, &poly, l.from_base(&k.lift_residue(r))))
            .collect::<Result<_>>()?;
        let pair = l.normalize_pi_multiple(&ys[0])?;
        let mut torsion = vec![l.zero()];
        torsion.extend(ys.iter().map(|y| l.mul(&l.pi(), y)));
        return Ok(DivisionFieldData {
            group: group.clone(),
            base: base.clone(),
            ext,
            pair,
            torsion,
            multiplier: c,
            division_poly: dp.clone(),
        });
    }
    Err(Error::NoAdmissibleMultiplier)
}

/// Division polynomial plus division field in one step.
pub fn division_field(group: &FormalGroupLaw) -> Result<DivisionFieldData> {
    let dp = division_polynomial(group)?;
    construct_division_field(group, &dp)
}

/// Degree, total ramification, cyclicity, and generation checks.
pub fn verify_division_field(data: &DivisionFieldData) -> Certificate {
    let mut cert = Certificate::default();
    let l = &*data.ext;
    let k = &*data.base;
    let q = data.q();
    let e = l.e();
    cert.push("degree", e == q - 1, format!("e = {e}, q - 1 = {}", q - 1));
    cert.push("tame", e as u64 % k.p() != 0, format!("gcd({e}, {}) = 1", k.p()));

    let pi = &data.pair.pi;
    let relation = l.sub(&l.pow(pi, e as u128), &l.from_base(&data.pair.pi_prime));
    let v_prime = k.valuation(&data.pair.pi_prime);
    cert.push(
        "radical-form",
        l.is_zero(&relation) && v_prime == Valuation::Finite(1),
        format!("Π^{e} - π′ vanishes to {} Π-digits, v(π′) = {v_prime}", relation.precision()),
    );
    let v_pi = l.rational_valuation(pi);
    cert.push("totally-ramified", v_pi.finite() == Some(num_rational::Ratio::new(1, e as u32)), format!("v(Π) = {v_pi}"));

    let kummer = (k.residue_order() - 1) % e as u128 == 0;
    let mut cyclic = kummer;
    let mut detail = String::from("μ_(q-1) not in K");
    if kummer {
        let zeta = k.root_of_unity_generator(e as u128).expect("divides");
        let img = l.scale_pi(&l.pi(), &zeta);
        let preserves = l.equal(&l.pow(&img, e as u128), &l.from_base(l.gamma()));
        // order of Π ↦ ζΠ is the order of ζ
        let mut x = l.pi();
        let mut order = 0;
        for n in 1..=e {
            x = l.scale_pi(&x, &zeta);
            if l.equal(&x, &l.pi()) {
                order = n;
                break;
            }
        }
        cyclic = preserves && order == e;
        detail = format!("Π ↦ ζΠ preserves the relation: {preserves}, order {order}");
    }
    cert.push("cyclic", cyclic, detail);

    let mut all_killed = true;
    let mut valuations_ok = true;
    for t in &data.torsion[1..] {
        match law_over(data).eval_pi(l, t) {
            Ok(v) => all_killed &= l.is_zero(&v),
            Err(_) => all_killed = false,
        }
        valuations_ok &= l.pi_valuation(t) == Valuation::Finite(1);
    }
    cert.push(
        "torsion-in-field",
        all_killed && valuations_ok,
        format!("{} nonzero points, each of valuation 1/{e}", data.torsion.len() - 1),
    );
    let mut residues: Vec<_> = data.torsion[1..].iter().filter_map(|t| l.leading_residue(t)).collect();
    residues.sort_by(|a, b| canonical_cmp(a, b));
    residues.dedup();
    cert.push("distinct-residues", residues.len() == q - 1, format!("{} distinct leading residues", residues.len()));
    let generates = data.torsion[1..].iter().any(|t| k.is_unit(&t.coordinates()[1.min(e - 1)]));
    cert.push("generates", generates, "a torsion point has a unit Π-coordinate");
    cert
}

fn find_point(l: &TameExt, torsion: &[TeElem], x: &TeElem) -> Option<usize> {
    let hits: Vec<usize> = torsion
        .iter()
        .enumerate()
        .filter(|(_, t)| l.is_zero(&l.sub(t, x)))
        .map(|(i, _)| i)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Closure of the torsion list under `⊕` and under `[c]`, `c ∈ μ_{q-1}`.
///
/// Sums are evaluated from the truncated law, so they are matched to the
/// number of `Π`-digits the cutoff supports.
pub fn torsion_module_structure(data: &DivisionFieldData) -> Result<Certificate> {
    let mut cert = Certificate::default();
    let l = &*data.ext;
    let k = &*data.base;
    let q = data.q();
    let tors = &data.torsion;
    cert.push("cardinality", tors.len() == q, format!("{} points, q = {q}", tors.len()));
    let group = law_over(data);
    let pairs: Vec<(usize, usize)> = (0..tors.len()).flat_map(|i| (i..tors.len()).map(move |j| (i, j))).collect();
    let results: Vec<(u32, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let s = group.add_points_truncated(l, &tors[i], &tors[j]);
            (s.precision(), s.precision() >= 2 && find_point(l, tors, &s).is_some())
        })
        .collect();
    let min_prec = results.iter().map(|r| r.0).min().unwrap_or(0);
    let sum_fail = results.iter().position(|r| !r.1).map(|k| pairs[k]);
    cert.push(
        "closed-under-addition",
        sum_fail.is_none(),
        match sum_fail {
            None => format!("all {} sums matched to at least {min_prec} Π-digits", q * (q + 1) / 2),
            Some((i, j)) => format!("point {i} ⊕ point {j} is not in the list"),
        },
    );

    let mut mult_fail = None;
    match data.group.lubin_tate() {
        Some(lt) => {
            let r0 = data.group.ring();
            let zeta0 = r0.root_of_unity_generator((q - 1) as u128)?;
            let series = lubin_tate_endomorphism(lt, &zeta0, data.group.cutoff())?.map(|c| k.coerce(r0, c));
            for (i, t) in tors.iter().enumerate().skip(1) {
                let v = l.pi_valuation(t).finite().unwrap_or(1);
                let cap = ((series.cutoff() as u64 + 1) * v as u64).min(u32::MAX as u64) as u32;
                let img = series.evaluate_at_point(l, &l.with_precision(t, cap))?;
                if find_point(l, tors, &img).is_none() {
                    mult_fail = Some(i);
                    break;
                }
            }
            cert.push(
                "closed-under-teichmuller-multiples",
                mult_fail.is_none(),
                "[ζ] for the generator ζ of μ_(q-1)",
            );
        }
        None => {
            // [n] by repeated addition for n = 2 .. p - 1
            'pts: for (i, t) in tors.iter().enumerate().skip(1) {
                let mut acc = t.clone();
                for _ in 2..k.p() {
                    acc = group.add_points_truncated(l, &acc, t);
                    if find_point(l, tors, &acc).is_none() {
                        mult_fail = Some(i);
                        break 'pts;
                    }
                }
            }
            cert.push("closed-under-integer-multiples", mult_fail.is_none(), "[n] for 1 <= n < p");
        }
    }
    Ok(cert)
}

/// The group law with coefficients brought to the division field's base.
fn law_over(data: &DivisionFieldData) -> FormalGroupLaw {
    if Arc::ptr_eq(&data.base, data.group.ring()) {
        return data.group.clone();
    }
    data.group.at_precision(&data.base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{lubin_tate_group_law, lubin_tate_series};
    use crate::tseries::Series;
    use crate::unramified::make_unramified_ring;

    fn lt_group(p: u64, f: usize, h: u32, n: u32, c: &UrElem, pert: &[(usize, UrElem)], ring: &Arc<UnramifiedRing>) -> FormalGroupLaw {
        let _ = (p, f, n);
        let lt = lubin_tate_series(ring, h, c, pert).unwrap();
        lubin_tate_group_law(&lt, lt.q() + 8).unwrap()
    }

    #[test]
    fn division_polynomials() {
        let r = make_unramified_ring(3, 1, 10).unwrap();
        let g = lt_group(3, 1, 1, 10, &r.one(), &[], &r);
        assert_eq!(division_polynomial(&g).unwrap().coeffs, vec![r.from_int(3), r.zero(), r.one()]);
        let g = lt_group(3, 1, 1, 10, &r.from_int(-1), &[], &r);
        assert_eq!(division_polynomial(&g).unwrap().coeffs, vec![r.from_int(-3), r.zero(), r.one()]);
        let r2 = make_unramified_ring(3, 2, 10).unwrap();
        let g = lt_group(3, 2, 2, 10, &r2.one(), &[(2, r2.from_int(3))], &r2);
        let dp = division_polynomial(&g).unwrap();
        let mut expect = vec![r2.zero(); 9];
        expect[0] = r2.from_int(3);
        expect[1] = r2.from_int(3);
        expect[8] = r2.one();
        assert_eq!(dp.coeffs, expect);
    }

    #[test]
    fn q3_division_field() {
        let r = make_unramified_ring(3, 1, 10).unwrap();
        let g = lt_group(3, 1, 1, 10, &r.one(), &[], &r);
        let data = division_field(&g).unwrap();
        let l = &*data.ext;
        assert_eq!(data.pair.pi_prime, r.from_int(-3));
        assert_eq!(data.torsion.len(), 3);
        assert!(l.equal(&l.pow(&l.pi(), 2), &l.from_int(-3)));
        // torsion = {0, Π, -Π}
        assert!(l.equal(&data.torsion[1], &l.pi()));
        assert!(l.equal(&data.torsion[2], &l.neg(&l.pi())));
        assert!(verify_division_field(&data).pass());
        let t = &data.torsion;
        assert!(l.is_zero(&g.add_points_truncated(l, &t[1], &t[2])));
        let doubled = g.add_points_truncated(l, &t[1], &t[1]);
        assert_eq!(find_point(l, t, &doubled), Some(2));
        for x in t {
            assert!(l.equal(&g.add_points_truncated(l, &t[0], x), x));
        }
        let tm = torsion_module_structure(&data).unwrap();
        assert!(tm.pass(), "{tm:?}");
    }

    #[test]
    fn q9_division_fields() {
        let r = make_unramified_ring(3, 2, 6).unwrap();
        for pert in [vec![], vec![(2, r.from_int(3))]] {
            let g = lt_group(3, 2, 2, 6, &r.one(), &pert, &r);
            let data = division_field(&g).unwrap();
            assert_eq!(data.pair.pi_prime, r.from_int(-3));
            assert_eq!(data.e(), 8);
            let cert = verify_division_field(&data);
            assert!(cert.pass(), "{cert:?}");
            assert!(torsion_module_structure(&data).unwrap().pass());
        }
    }

    #[test]
    fn corrupted_torsion_fails() {
        let r = make_unramified_ring(3, 1, 10).unwrap();
        let g = lt_group(3, 1, 1, 10, &r.one(), &[], &r);
        let mut data = division_field(&g).unwrap();
        let l = data.ext.clone();
        data.torsion[1] = l.add(&data.torsion[1], &l.from_int(9));
        let cert = verify_division_field(&data);
        assert!(!cert.pass());
        assert_eq!(cert.first_failure().unwrap().id, "torsion-in-field");
    }

    #[test]
    fn multiple_slopes_rejected() {
        let r = make_unramified_ring(3, 1, 8).unwrap();
        // 9X + X^3: P̃ = X^2 + 9 has slope 1, not 1/2
        let pis = Series::univariate(&*r, &[r.zero(), r.from_int(9), r.zero(), r.one()], 30);
        let law = Series::bivariate(&*r, &[(1, 0, r.one()), (0, 1, r.one())], 4);
        let g = FormalGroupLaw::supplied(&r, law, pis, r.from_int(9), crate::formal_group::LawSource::Supplied).unwrap();
        let r = division_polynomial(&g);
        assert!(matches!(r, Err(Error::MultipleSlopes(_))), "{r:?}");
    }
}
