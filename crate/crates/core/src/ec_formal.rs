//! Formal groups of elliptic curves with good reduction, height tests, and
//! products of such groups.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cert::Certificate;
use crate::compositum::{k1_degree, verify_equal_over_k1, EqualityReport};
use crate::division_points::{division_field, verify_division_field, DivisionFieldData};
use crate::error::{Error, Result};
use crate::formal_group::{height_of_group_law, FormalGroupLaw, LawSource};
use crate::residue::gcd;
use crate::ring::Ring;
use crate::tame_ext::{TameExt, TeElem};
use crate::tseries::Series;
use crate::unramified::{UnramifiedRing, UrElem};

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over `O_K`.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    ring: Arc<UnramifiedRing>,
    a: [UrElem; 5],
    discriminant: UrElem,
}

impl WeierstrassCurve {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(ring: &Arc<UnramifiedRing>, a: [UrElem; 5]) -> Result<Self> {
        let r = &**ring;
        let [a1, a2, a3, a4, a6] = &a;
        let c = |n: i64| r.from_int(n);
        let b2 = r.add(&r.mul(a1, a1), &r.mul(&c(4), a2));
        let b4 = r.add(&r.mul(&c(2), a4), &r.mul(a1, a3));
        let b6 = r.add(&r.mul(a3, a3), &r.mul(&c(4), a6));
        let b8 = {
            let t1 = r.mul(&r.mul(a1, a1), a6);
            let t2 = r.mul(&c(4), &r.mul(a2, a6));
            let t3 = r.mul(a1, &r.mul(a3, a4));
            let t4 = r.mul(a2, &r.mul(a3, a3));
            let t5 = r.mul(a4, a4);
            r.sub(&r.add(&r.sub(&r.add(&t1, &t2), &t3), &t4), &t5)
        };
        let disc = {
            let t1 = r.mul(&r.mul(&b2, &b2), &b8);
            let t2 = r.mul(&c(8), &r.pow(&b4, 3));
            let t3 = r.mul(&c(27), &r.mul(&b6, &b6));
            let t4 = r.mul(&c(9), &r.mul(&b2, &r.mul(&b4, &b6)));
            r.add(&r.neg(&r.add(&r.add(&t1, &t2), &t3)), &t4)
        };
        if !r.is_unit(&disc) {
            return Err(Error::BadReduction);
        }
        Ok(WeierstrassCurve { ring: ring.clone(), a, discriminant: disc })
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(ring: &Arc<UnramifiedRing>, a: i64, b: i64) -> Result<Self> {
        let r = &**ring;
        WeierstrassCurve::new(ring, [r.zero(), r.zero(), r.zero(), r.from_int(a), r.from_int(b)])
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn coefficients(&self) -> &[UrElem; 5] {
        &self.a
    }

    pub fn discriminant(&self) -> &UrElem {
        &self.discriminant
    }

    /// `w(z) = z³ + a1·z·w + a2·z²·w + a3·w² + a4·z·w² + a6·w³`, where
    /// `z = -x/y` and `w = -1/y`.
    pub fn w_series(&self, cutoff: usize) -> Series<UrElem> {
        let r = &*self.ring;
        let [a1, a2, a3, a4, a6] = &self.a;
        let z = Series::x(r, 1, cutoff);
        let z2 = z.mul(r, &z);
        let z3 = z2.mul(r, &z);
        let mut w = Series::zero(r, 1, cutoff);
        // each pass fixes at least one more degree
        for _ in 0..cutoff {
            let w2 = w.mul(r, &w);
            let w3 = w2.mul(r, &w);
            let next = z3
                .add(r, &z.mul(r, &w).scale(r, a1))
                .add(r, &z2.mul(r, &w).scale(r, a2))
                .add(r, &w2.scale(r, a3))
                .add(r, &z.mul(r, &w2).scale(r, a4))
                .add(r, &w3.scale(r, a6));
            if next.first_difference(r, &w).is_none() {
                break;
            }
            w = next;
        }
        w
    }

    /// `F(z1, z2)` given the chord slope `λ` and the series `w(z1)`, for
    /// series in any number of variables.
    fn chord_sum(&self, z1: &Series<UrElem>, z2: &Series<UrElem>, lambda: &Series<UrElem>, w: &Series<UrElem>) -> Result<Series<UrElem>> {
        let r = &*self.ring;
        let [a1, a2, a3, a4, a6] = &self.a;
        let nu = w.compose(r, z1)?.sub(r, &lambda.mul(r, z1));
        let l2 = lambda.mul(r, lambda);
        let l3 = l2.mul(r, lambda);
        // the third root of the cubic cut out by the line w = λz + ν
        let num = lambda
            .scale(r, a1)
            .add(r, &l2.scale(r, a3))
            .add(r, &nu.scale(r, a2))
            .add(r, &lambda.mul(r, &nu).scale(r, &r.mul(&r.from_int(2), a4)))
            .add(r, &l2.mul(r, &nu).scale(r, &r.mul(&r.from_int(3), a6)));
        let m = lambda.scale(r, a2).add(r, &l2.scale(r, a4)).add(r, &l3.scale(r, a6));
        let z3 = z1.add(r, z2).add(r, &num.mul(r, &unit_inverse(r, &m))).neg(r);
        // [-1](z) = z / (-1 + a1 z + a3 w(z))
        let mut den = z3.scale(r, a1).add(r, &w.compose(r, &z3)?.scale(r, a3));
        den.set_coeff(0, r.from_int(-1));
        Ok(z3.mul(r, &series_inverse(r, &den)?))
    }

    /// `λ = Σ_n A_n (z2^n - z1^n)/(z2 - z1)`, with `w = Σ A_n z^n`.
    fn chord_slope(&self, w: &Series<UrElem>, z1: &Series<UrElem>, z2: &Series<UrElem>) -> Series<UrElem> {
        let r = &*self.ring;
        let cutoff = z1.cutoff();
        // h_n = Σ_{i<n} z1^i z2^(n-1-i); h_{n+1} = z1·h_n + z2^n
        let mut h = Series::constant(r, z1.vars(), cutoff, r.one());
        let mut z2n = z2.clone();
        let mut lambda = Series::zero(r, z1.vars(), cutoff);
        for n in 1..=(cutoff + 1).min(w.cutoff()) {
            if n >= 3 {
                lambda = lambda.add(r, &h.scale(r, w.coeff(n)));
            }
            h = z1.mul(r, &h).add(r, &z2n);
            z2n = z2n.mul(r, z2);
        }
        lambda
    }

    /// The formal group law `F(z1, z2)` to total degree `cutoff`.
    pub fn group_law(&self, cutoff: usize) -> Result<Series<UrElem>> {
        let r = &*self.ring;
        let w = self.w_series(cutoff + 1);
        let x = Series::x(r, 2, cutoff);
        let y = Series::y(r, cutoff);
        let lambda = self.chord_slope(&w, &x, &y);
        self.chord_sum(&x, &y, &lambda, &w)
    }

    /// `[n](T)` by repeated addition, univariate throughout.
    pub fn multiplication_series(&self, n: u64, cutoff: usize) -> Result<Series<UrElem>> {
        let r = &*self.ring;
        let w = self.w_series(cutoff + 1);
        let t = Series::x(r, 1, cutoff);
        let mut acc = t.clone();
        for _ in 1..n {
            let lambda = self.chord_slope(&w, &t, &acc);
            acc = self.chord_sum(&t, &acc, &lambda, &w)?;
        }
        Ok(acc)
    }

    /// `#E(F_w)` by enumeration, including the point at infinity.
    pub fn residue_point_count(&self) -> Result<u128> {
        let rf = self.ring.residue_field();
        rf.order().filter(|&w| w <= 1 << 16).ok_or(Error::FieldTooLarge {
            p: self.ring.p(),
            f: self.ring.degree(),
        })?;
        let a: Vec<_> = self.a.iter().map(|c| self.ring.residue(c)).collect();
        let elems: Vec<_> = rf.elements().collect();
        let mut count = 1u128;
        for x in &elems {
            let x2 = rf.mul(x, x);
            let rhs = rf.add(
                &rf.add(&rf.mul(&x2, x), &rf.mul(&a[1], &x2)),
                &rf.add(&rf.mul(&a[3], x), &a[4]),
            );
            for y in &elems {
                let lhs = rf.add(&rf.mul(y, y), &rf.add(&rf.mul(&a[0], &rf.mul(x, y)), &rf.mul(&a[2], y)));
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

fn unit_inverse(r: &UnramifiedRing, m: &Series<UrElem>) -> Series<UrElem> {
    // (1 + m)^(-1) for m without constant term
    let mut one = Series::constant(r, m.vars(), m.cutoff(), r.one());
    let mut acc = one.clone();
    let neg = m.neg(r);
    for _ in 0..m.cutoff() {
        one = one.mul(r, &neg);
        if one.is_zero(r) {
            break;
        }
        acc = acc.add(r, &one);
    }
    acc
}

/// Inverse of a series in one or two variables whose constant term is a unit.
fn series_inverse(r: &UnramifiedRing, s: &Series<UrElem>) -> Result<Series<UrElem>> {
    let c0 = r.unit_inverse(&s.table()[0])?;
    let mut m = s.scale(r, &c0);
    m.set_coeff(0, r.zero());
    Ok(unit_inverse(r, &m).scale(r, &c0))
}

/// Law cutoff `p² + 8` and `[p]` to `p²(N + 2) - 1`, so that Weierstrass
/// preparation of `[p]` keeps all `N` digits when the height is 2.
pub fn default_cutoffs(ring: &UnramifiedRing) -> (usize, usize) {
    let q = (ring.p() * ring.p()) as usize;
    (q + 8, q * (ring.precision() as usize + 2) - 1)
}

/// The curve's formal group with `π = p` and `[π] = [p]`.
pub fn curve_formal_group(curve: &WeierstrassCurve, cutoff: usize, pi_cutoff: usize) -> Result<FormalGroupLaw> {
    let r = curve.ring();
    let min = (r.p() * r.p()) as usize + 2;
    if cutoff < min {
        return Err(Error::InsufficientCutoff { needed: min, have: cutoff });
    }
    let law = curve.group_law(cutoff)?;
    let pis = curve.multiplication_series(r.p(), pi_cutoff.max(cutoff))?;
    FormalGroupLaw::supplied(r, law, pis, r.from_int(r.p() as i64), LawSource::EllipticCurve)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupersingularVerdict {
    pub height: u32,
    pub supersingular: bool,
    pub point_count: u128,
    /// `w + 1 - #E(F_w)`.
    pub trace: i128,
    /// `trace ≡ 0 mod p`.
    pub trace_vanishes: bool,
}

impl SupersingularVerdict {
    pub fn consistent(&self) -> bool {
        self.supersingular == self.trace_vanishes
    }
}

/// Height of the formal group from `[p]`, checked against the trace of
/// Frobenius on the reduction.
pub fn supersingular_test(curve: &WeierstrassCurve) -> Result<SupersingularVerdict> {
    let r = curve.ring();
    let p = r.p();
    let pis = curve.multiplication_series(p, (p * p) as usize + 1)?;
    let height = height_of_group_law(r, &pis)?;
    let point_count = curve.residue_point_count()?;
    let w = r.residue_order();
    let trace = (w + 1) as i128 - point_count as i128;
    Ok(SupersingularVerdict {
        height,
        supersingular: height == 2,
        point_count,
        trace,
        trace_vanishes: trace.rem_euclid(p as i128) == 0,
    })
}

/// Componentwise formal group `(F_1(X_1, Y_1), …, F_n(X_n, Y_n))`.
#[derive(Clone, Debug)]
pub struct ProductGroupLaw {
    components: Vec<FormalGroupLaw>,
}

pub fn product_group(components: Vec<FormalGroupLaw>) -> Result<ProductGroupLaw> {
    let Some(first) = components.first() else {
        return Err(Error::InvalidParameter("empty product".into()));
    };
    let r = first.ring();
    if components.iter().any(|g| !g.ring().same_field(r) || g.ring().precision() != r.precision()) {
        return Err(Error::MixedRings);
    }
    Ok(ProductGroupLaw { components })
}

impl ProductGroupLaw {
    pub fn components(&self) -> &[FormalGroupLaw] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    /// `Π q_i`.
    pub fn torsion_count(&self) -> u128 {
        self.components.iter().map(|g| g.q() as u128).product()
    }

    /// Componentwise `s ⊕ t`, each coordinate in its own extension.
    pub fn add_points(&self, exts: &[&TameExt], s: &[TeElem], t: &[TeElem]) -> Result<Vec<TeElem>> {
        if exts.len() != self.dimension() || s.len() != self.dimension() || t.len() != self.dimension() {
            return Err(Error::InvalidParameter("point dimension does not match the product".into()));
        }
        self.components
            .iter()
            .zip(exts)
            .zip(s.iter().zip(t))
            .map(|((g, l), (a, b))| g.add_points(l, a, b))
            .collect()
    }

    /// Division fields of the components, in order.
    pub fn division_data(&self) -> Result<Vec<DivisionFieldData>> {
        self.components.par_iter().map(division_field).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub dimension: usize,
    pub heights: Vec<u32>,
    pub q: usize,
    pub torsion_count: u128,
    pub ramification_index: usize,
    pub tame: bool,
    pub k1_degree: usize,
    pub unramified_degree: usize,
    pub equality: Option<EqualityReport>,
    pub certificate: Certificate,
}

impl ProductReport {
    pub fn pass(&self) -> bool {
        self.certificate.pass()
    }
}

/// The `p`-torsion field of a product of height-`h` groups: each component's
/// division field, their equality over `K(μ_{(q-1)(w-1)})`, and tameness.
pub fn verify_product_tameness(product: &ProductGroupLaw) -> Result<ProductReport> {
    let data = product.division_data()?;
    verify_product_fields(product, &data)
}

pub fn verify_product_tameness_with(product: &ProductGroupLaw, data: &[DivisionFieldData]) -> Result<ProductReport> {
    verify_product_fields(product, data)
}

fn verify_product_fields(product: &ProductGroupLaw, data: &[DivisionFieldData]) -> Result<ProductReport> {
    let heights: Vec<u32> = product.components.iter().map(FormalGroupLaw::height).collect();
    if heights.iter().any(|&h| h != heights[0]) {
        return Err(Error::HeightMismatch(format!("{heights:?}")));
    }
    let d0 = &data[0];
    let k = &d0.base;
    let q = d0.q();
    let e = q - 1;
    let mut certificate = Certificate::default();
    for (i, d) in data.iter().enumerate() {
        certificate.extend(&format!("component[{i}]"), verify_division_field(d));
    }
    let tame = gcd(e as u64, k.p()) == 1 && data.iter().all(|d| d.e() == e);
    certificate.push("tame", tame, format!("ramification index {e} = p^h - 1, prime to {}", k.p()));
    let f1 = k1_degree(k.p(), k.degree(), q)?;
    let equality = if data.len() >= 2 {
        let eq = verify_equal_over_k1(data)?;
        certificate.push("equal-over-K1", eq.pass(), format!("all component fields agree over the degree-{f1} ring"));
        Some(eq)
    } else {
        None
    };
    Ok(ProductReport {
        p: k.p(),
        f: k.degree(),
        precision: k.precision(),
        dimension: product.dimension(),
        heights,
        q,
        torsion_count: product.torsion_count(),
        ramification_index: e,
        tame,
        k1_degree: f1,
        unramified_degree: f1 / k.degree(),
        equality,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::verify_group_axioms;
    use crate::unramified::make_unramified_ring;

    #[test]
    fn w_series_of_y2_x3_x() {
        // a4 = 1: w = z^3 + z w^2 = z^3 + z^7 + 2 z^11 + ...
        let r = make_unramified_ring(5, 1, 6).unwrap();
        let c = WeierstrassCurve::short(&r, 1, 0).unwrap();
        let w = c.w_series(11);
        let expect: Vec<i64> = vec![0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 2];
        assert_eq!(w.table(), &expect.iter().map(|&n| r.from_int(n)).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn curve_law_axioms() {
        let r = make_unramified_ring(3, 2, 6).unwrap();
        let c = WeierstrassCurve::short(&r, 1, 0).unwrap();
        let g = curve_formal_group(&c, 11, 20).unwrap();
        let law = g.law();
        assert_eq!(*law.coeff2(1, 0), r.one());
        assert_eq!(*law.coeff2(0, 1), r.one());
        assert!(r.is_zero(law.coeff2(1, 1)));
        let cert = verify_group_axioms(&g, 11);
        assert!(cert.pass(), "{cert:?}");
        assert_eq!(g.height(), 2);
        let pis = g.pi_series();
        assert!(r.valuation(pis.coeff(3)).is_at_least(1));
        assert!(r.is_unit(pis.coeff(9)));
        // general Weierstrass form with every coefficient present
        let gen = WeierstrassCurve::new(&r, [1, 1, 1, 1, 1].map(|n| r.from_int(n))).unwrap();
        let g = curve_formal_group(&gen, 11, 11).unwrap();
        let cert = verify_group_axioms(&g, 11);
        assert!(cert.pass(), "{cert:?}");
    }

    #[test]
    fn bad_reduction_rejected() {
        let r = make_unramified_ring(3, 1, 6).unwrap();
        assert_eq!(WeierstrassCurve::short(&r, 0, 1).unwrap_err(), Error::BadReduction);
    }

    #[test]
    fn supersingular_examples() {
        let r = make_unramified_ring(3, 1, 6).unwrap();
        let v = supersingular_test(&WeierstrassCurve::short(&r, 1, 0).unwrap()).unwrap();
        assert_eq!((v.height, v.point_count, v.trace), (2, 4, 0));
        let v = supersingular_test(&WeierstrassCurve::short(&r, -1, 1).unwrap()).unwrap();
        assert_eq!((v.height, v.point_count, v.trace), (2, 7, -3));
        // y^2 = x^3 + x^2 + 1 is ordinary mod 3
        let c = WeierstrassCurve::new(&r, [r.zero(), r.one(), r.zero(), r.zero(), r.one()]).unwrap();
        let v = supersingular_test(&c).unwrap();
        assert_eq!(v.height, 1);
        assert!(v.consistent());
    }

    #[test]
    fn product_of_supersingular_curves() {
        let r = make_unramified_ring(3, 2, 4).unwrap();
        let (d, dp) = default_cutoffs(&r);
        let g1 = curve_formal_group(&WeierstrassCurve::short(&r, 1, 0).unwrap(), d, dp).unwrap();
        let single = product_group(vec![g1.clone()]).unwrap();
        let rep = verify_product_tameness(&single).unwrap();
        assert!(rep.pass(), "{:?}", rep.certificate.first_failure());
        assert_eq!((rep.ramification_index, rep.torsion_count), (8, 9));
        let g2 = curve_formal_group(&WeierstrassCurve::short(&r, -1, 1).unwrap(), d, dp).unwrap();
        let pair = product_group(vec![g1, g2]).unwrap();
        assert_eq!(pair.torsion_count(), 81);
        let rep = verify_product_tameness(&pair).unwrap();
        assert!(rep.pass(), "{:?}", rep.certificate.first_failure());
        assert_eq!(rep.k1_degree, 16);
    }
}
