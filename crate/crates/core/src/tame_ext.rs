//! Radical totally tamely ramified extensions `L = B(Π)`, `Π^e = γ`, over an
//! unramified ring `B`.
//!
//! Elements are `c_0 + c_1 Π + … + c_{e-1} Π^{e-1}` together with the number
//! of correct `Π`-adic digits. A freshly built element knows `e·N` digits;
//! division by `Π` or `p` spends them.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residue::ResidueElement;
use crate::ring::Ring;
use crate::unramified::{UnramifiedRing, UrElem, Valuation};

/// Valuation normalized so that `v(p) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RationalValuation {
    Finite(Ratio<u32>),
    /// Zero to the working precision.
    AtLeast(Ratio<u32>),
}

impl RationalValuation {
    pub fn finite(self) -> Option<Ratio<u32>> {
        match self {
            RationalValuation::Finite(v) => Some(v),
            RationalValuation::AtLeast(_) => None,
        }
    }

    pub fn bound(self) -> Ratio<u32> {
        match self {
            RationalValuation::Finite(v) | RationalValuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for RationalValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalValuation::Finite(v) => write!(f, "{v}"),
            RationalValuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl Serialize for RationalValuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct TeElem {
    coeffs: Vec<UrElem>,
    prec: u32,
}

impl TeElem {
    /// Coefficients `c_0 .. c_{e-1}` in the basis `1, Π, …, Π^{e-1}`.
    pub fn coordinates(&self) -> &[UrElem] {
        &self.coeffs
    }

    /// Number of correct `Π`-adic digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }
}

/// `L = B(Π)` with `Π^e = γ = p·u`, `u` a unit of `B`.
#[derive(Debug)]
pub struct TameExt {
    base: Arc<UnramifiedRing>,
    e: usize,
    unit: UrElem,
    gamma: UrElem,
}

/// `(Π, π′)` with `Π^e = π′`, `v(π′) = 1`.
#[derive(Clone, Debug)]
pub struct UniformizerPair {
    pub pi: TeElem,
    pub pi_prime: UrElem,
}

/// Build `B(Π)` with `Π^e = γ`. Since `γ` is known modulo `p^N`, the unit
/// `γ/p` is only pinned down modulo `p^(N-1)`; prefer [`TameExt::from_unit`]
/// when the unit is available.
pub fn make_radical_ext(base: &Arc<UnramifiedRing>, e: usize, gamma: &UrElem) -> Result<Arc<TameExt>> {
    let v = base.valuation(gamma);
    if v != Valuation::Finite(1) {
        return Err(Error::NotUniformizer(v.to_string()));
    }
    let unit = base.div_by_p(gamma).expect("valuation 1");
    TameExt::from_unit(base, e, unit)
}

impl TameExt {
    /// `Π^e = p·unit`. Unlike [`make_radical_ext`] this keeps every digit of
    /// the unit, so the relation is exact at full precision.
    pub fn from_unit(base: &Arc<UnramifiedRing>, e: usize, unit: UrElem) -> Result<Arc<TameExt>> {
        if e == 0 {
            return Err(Error::InvalidParameter("ramification index must be positive".into()));
        }
        if e as u64 % base.p() == 0 {
            return Err(Error::WildRamification { e: e as u64, p: base.p() });
        }
        if !base.is_unit(&unit) {
            return Err(Error::NotUniformizer(">=2".into()));
        }
        let gamma = base.mul_p_pow(&unit, 1);
        Ok(Arc::new(TameExt { base: base.clone(), e, unit, gamma }))
    }

    pub fn base(&self) -> &Arc<UnramifiedRing> {
        &self.base
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn gamma(&self) -> &UrElem {
        &self.gamma
    }

    /// `γ / p`.
    pub fn gamma_unit(&self) -> &UrElem {
        &self.unit
    }

    /// Full `Π`-adic precision `e·N`.
    pub fn full_precision(&self) -> u32 {
        self.e as u32 * self.base.precision()
    }

    pub fn same_ext(&self, other: &TameExt) -> bool {
        self.e == other.e && self.base == other.base && self.unit == other.unit
    }

    /// True when `μ_e ⊂ B`, so that `L/B` is Galois with cyclic group.
    pub fn is_kummer(&self) -> bool {
        (self.base.residue_order() - 1) % self.e as u128 == 0
    }

    fn digits_of_coeff(&self, i: usize, prec: u32) -> u32 {
        // c_i Π^i matters modulo Π^prec, i.e. c_i modulo p^ceil((prec - i)/e).
        let e = self.e as u32;
        (prec.saturating_sub(i as u32)).div_ceil(e)
    }

    /// Build an element from coordinates, trimming digits below `prec`.
    pub fn element(&self, coeffs: Vec<UrElem>, prec: u32) -> TeElem {
        assert_eq!(coeffs.len(), self.e);
        let prec = prec.min(self.full_precision());
        if prec == self.full_precision() {
            return TeElem { coeffs, prec };
        }
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.digits_of_coeff(i, prec);
                self.base.truncate(&c, k)
            })
            .collect();
        TeElem { coeffs, prec }
    }

    pub fn from_base(&self, a: &UrElem) -> TeElem {
        let mut c = vec![self.base.zero(); self.e];
        c[0] = a.clone();
        TeElem { coeffs: c, prec: self.full_precision() }
    }

    /// The generator `Π`.
    pub fn pi(&self) -> TeElem {
        if self.e == 1 {
            return self.from_base(&self.gamma);
        }
        let mut c = vec![self.base.zero(); self.e];
        c[1] = self.base.one();
        TeElem { coeffs: c, prec: self.full_precision() }
    }

    /// Valuation counted in `Π`-adic digits.
    pub fn pi_valuation(&self, x: &TeElem) -> Valuation {
        let e = self.e as u32;
        let mut best = x.prec;
        for (i, c) in x.coeffs.iter().enumerate() {
            if let Valuation::Finite(v) = self.base.valuation(c) {
                best = best.min(e * v + i as u32);
            }
        }
        if best >= x.prec {
            Valuation::AtLeast(x.prec)
        } else {
            Valuation::Finite(best)
        }
    }

    pub fn rational_valuation(&self, x: &TeElem) -> RationalValuation {
        let e = self.e as u32;
        match self.pi_valuation(x) {
            Valuation::Finite(v) => RationalValuation::Finite(Ratio::new(v, e)),
            Valuation::AtLeast(v) => RationalValuation::AtLeast(Ratio::new(v, e)),
        }
    }

    pub fn is_unit(&self, x: &TeElem) -> bool {
        self.pi_valuation(x) == Valuation::Finite(0)
    }

    /// Residue of `x / Π^k` where `k` is the `Π`-valuation of `x`.
    pub fn leading_residue(&self, x: &TeElem) -> Option<ResidueElement> {
        let Valuation::Finite(k) = self.pi_valuation(x) else {
            return None;
        };
        let e = self.e as u32;
        let (a, j) = (k / e, (k % e) as usize);
        // x / Π^k ≡ (c_j / p^a) / u^a.
        let d = self.base.div_by_p_pow(&x.coeffs[j], a)?;
        let rf = self.base.residue_field();
        let u_inv = rf.inv(&self.base.residue(&self.unit))?;
        Some(rf.mul(&self.base.residue(&d), &rf.pow(&u_inv, a as u128)))
    }

    /// Residue of a unit of `L` (its constant coordinate mod `p`).
    pub fn residue(&self, x: &TeElem) -> ResidueElement {
        self.base.residue(&x.coeffs[0])
    }

    pub fn with_precision(&self, x: &TeElem, prec: u32) -> TeElem {
        self.element(x.coeffs.clone(), prec.min(x.prec))
    }

    pub fn scale(&self, x: &TeElem, a: &UrElem) -> TeElem {
        let va = self.base.valuation(a);
        let coeffs = x.coeffs.iter().map(|c| self.base.mul(c, a)).collect();
        let gain = match va {
            Valuation::Finite(v) => v * self.e as u32,
            Valuation::AtLeast(_) => self.full_precision(),
        };
        self.element(coeffs, x.prec.saturating_add(gain))
    }

    /// `x · Π^k`.
    pub fn mul_pi_pow(&self, x: &TeElem, k: u32) -> TeElem {
        let mut c = x.coeffs.clone();
        for _ in 0..k {
            let top = c.pop().unwrap();
            c.insert(0, self.base.mul(&top, &self.gamma));
        }
        self.element(c, x.prec.saturating_add(k))
    }

    /// `x / Π^k`; `None` when `Π^k ∤ x` at the known precision.
    pub fn div_pi_pow(&self, x: &TeElem, k: u32) -> Option<TeElem> {
        if !self.pi_valuation(x).is_at_least(k) || x.prec < k {
            return None;
        }
        let u_inv = self.base.unit_inverse(&self.unit).ok()?;
        let mut c = x.coeffs.clone();
        for _ in 0..k {
            let low = c.remove(0);
            let low = self.base.mul(&self.base.div_by_p(&low)?, &u_inv);
            c.push(low);
        }
        Some(self.element(c, x.prec - k))
    }

    /// `x / p`.
    pub fn div_by_p(&self, x: &TeElem) -> Option<TeElem> {
        if !self.pi_valuation(x).is_at_least(self.e as u32) || x.prec < self.e as u32 {
            return None;
        }
        let c = x
            .coeffs
            .iter()
            .map(|c| self.base.div_by_p(c))
            .collect::<Option<Vec<_>>>()?;
        Some(self.element(c, x.prec - self.e as u32))
    }

    /// Inverse of a unit of `L`.
    pub fn unit_inverse(&self, x: &TeElem) -> Result<TeElem> {
        let c0 = self.base.unit_inverse(&x.coeffs[0])?;
        let mut y = self.from_base(&c0);
        let two = self.from_int(2);
        for _ in 0..64 {
            let xy = self.mul(x, &y);
            let next = self.mul(&y, &self.sub(&two, &xy));
            if self.equal(&next, &y) {
                return Ok(self.with_precision(&next, x.prec));
            }
            y = next;
        }
        Err(Error::NonConvergence(0))
    }

    /// `x / y` for `v(y) <= v(x)`, reported at the precision left over.
    pub fn divide(&self, x: &TeElem, y: &TeElem) -> Result<TeElem> {
        let Valuation::Finite(k) = self.pi_valuation(y) else {
            return Err(Error::NotAUnit);
        };
        let x1 = self
            .div_pi_pow(x, k)
            .ok_or_else(|| Error::PrecisionExhausted("dividend valuation below divisor".into()))?;
        let y1 = self.div_pi_pow(y, k).expect("valuation known");
        Ok(self.mul(&x1, &self.unit_inverse(&y1)?))
    }

    /// The unique `w ≡ 1 mod Π` with `w^n = u`.
    pub fn nth_root_of_principal_unit(&self, u: &TeElem, n: u64) -> Result<TeElem> {
        let r = self.inverse_nth_root(u, n)?;
        // u^{1/n} = u · r^{n-1}
        Ok(self.mul(u, &self.pow(&r, (n - 1) as u128)))
    }

    /// The unique `r ≡ 1 mod Π` with `u · r^n = 1`.
    fn inverse_nth_root(&self, u: &TeElem, n: u64) -> Result<TeElem> {
        if n == 0 || n % self.base.p() == 0 {
            return Err(Error::WildRamification { e: n, p: self.base.p() });
        }
        let d = self.sub(u, &self.one());
        if !self.pi_valuation(&d).is_at_least(1) {
            return Err(Error::NotPrincipalUnit);
        }
        let inv_n = self.base.unit_inverse(&self.base.from_int(n as i64))?;
        let mut r = self.one();
        // r <- r + r(1 - u r^n)/n, quadratic convergence.
        for _ in 0..64 {
            let err = self.sub(&self.one(), &self.mul(u, &self.pow(&r, n as u128)));
            if self.is_zero(&err) {
                return Ok(self.with_precision(&r, u.prec));
            }
            r = self.add(&r, &self.scale(&self.mul(&r, &err), &inv_n));
        }
        Err(Error::NonConvergence(0))
    }

    /// Normalize `Π·y` (`y` a unit of `L`) to a pair `(Π', π')` with
    /// `Π'^e = π' = p·c`, `c` a Teichmüller unit.
    pub fn normalize_pi_multiple(&self, y: &TeElem) -> Result<UniformizerPair> {
        if !self.is_unit(y) {
            return Err(Error::NotUniformizer(self.rational_valuation(&self.mul(&self.pi(), y)).to_string()));
        }
        // (Π y)^e = p · u y^e
        let v = self.scale(&self.pow(y, self.e as u128), &self.unit);
        let c = self.base.teichmuller_lift(&self.residue(&v));
        let c_inv = self.base.unit_inverse(&c)?;
        let principal = self.scale(&v, &c_inv);
        let w = self.inverse_nth_root(&principal, self.e as u64)?;
        let pi = self.mul(&self.mul(&self.pi(), y), &w);
        if pi.prec < 2 * self.e as u32 {
            return Err(Error::PrecisionExhausted(format!(
                "uniformizer known to {} Π-digits",
                pi.prec
            )));
        }
        Ok(UniformizerPair { pi, pi_prime: self.base.mul_p_pow(&c, 1) })
    }

    /// Normalize an arbitrary element of valuation `1/e`.
    pub fn normalize_uniformizer(&self, pi_tilde: &TeElem) -> Result<UniformizerPair> {
        let v = self.pi_valuation(pi_tilde);
        if v != Valuation::Finite(1) {
            return Err(Error::NotUniformizer(self.rational_valuation(pi_tilde).to_string()));
        }
        let y = self.div_pi_pow(pi_tilde, 1).expect("valuation 1");
        self.normalize_pi_multiple(&y)
    }

    /// The automorphism `Π ↦ ζΠ` fixing `B`, for `ζ^e = 1`.
    pub fn scale_pi(&self, x: &TeElem, zeta: &UrElem) -> TeElem {
        let mut z = self.base.one();
        let mut c = Vec::with_capacity(self.e);
        for ci in &x.coeffs {
            c.push(self.base.mul(ci, &z));
            z = self.base.mul(&z, zeta);
        }
        self.element(c, x.prec)
    }

    /// Apply a map to every coordinate (e.g. a Frobenius power, which fixes
    /// `Π` whenever it fixes `γ`).
    pub fn map_coords(&self, x: &TeElem, f: impl Fn(&UrElem) -> UrElem) -> TeElem {
        self.element(x.coeffs.iter().map(f).collect(), x.prec)
    }

    pub fn to_strings(&self, x: &TeElem) -> Vec<Vec<String>> {
        x.coeffs.iter().map(|c| self.base.to_strings(c)).collect()
    }
}

impl Ring for TameExt {
    type Elem = TeElem;

    fn zero(&self) -> TeElem {
        TeElem { coeffs: vec![self.base.zero(); self.e], prec: self.full_precision() }
    }

    fn one(&self) -> TeElem {
        self.from_base(&self.base.one())
    }

    fn from_int(&self, n: i64) -> TeElem {
        self.from_base(&self.base.from_int(n))
    }

    fn add(&self, a: &TeElem, b: &TeElem) -> TeElem {
        let c = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.add(x, y)).collect();
        self.element(c, a.prec.min(b.prec))
    }

    fn sub(&self, a: &TeElem, b: &TeElem) -> TeElem {
        let c = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.sub(x, y)).collect();
        self.element(c, a.prec.min(b.prec))
    }

    fn neg(&self, a: &TeElem) -> TeElem {
        TeElem { coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect(), prec: a.prec }
    }

    fn mul(&self, a: &TeElem, b: &TeElem) -> TeElem {
        let va = self.pi_valuation(a);
        let vb = self.pi_valuation(b);
        let full = self.full_precision();
        let prec = match (va, vb) {
            (Valuation::Finite(x), Valuation::Finite(y)) => (a.prec + y).min(b.prec + x),
            (Valuation::AtLeast(_), Valuation::Finite(y)) => a.prec + y,
            (Valuation::Finite(x), Valuation::AtLeast(_)) => b.prec + x,
            (Valuation::AtLeast(_), Valuation::AtLeast(_)) => a.prec + b.prec,
        }
        .min(full);
        let e = self.e;
        if e == 1 {
            return self.element(vec![self.base.mul(&a.coeffs[0], &b.coeffs[0])], prec);
        }
        let mut out = Vec::with_capacity(e);
        for k in 0..e {
            // Π^{k} and Π^{k+e} = γ Π^k
            let low = self.base.dot((0..=k).map(|i| (&a.coeffs[i], &b.coeffs[k - i])));
            let high = self
                .base
                .dot((k + 1..e).map(|i| (&a.coeffs[i], &b.coeffs[k + e - i])));
            out.push(self.base.add(&low, &self.base.mul(&high, &self.gamma)));
        }
        self.element(out, prec)
    }

    fn is_zero(&self, a: &TeElem) -> bool {
        matches!(self.pi_valuation(a), Valuation::AtLeast(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unramified::make_unramified_ring;

    fn q3_sqrt_m3() -> Arc<TameExt> {
        let base = make_unramified_ring(3, 1, 10).unwrap();
        make_radical_ext(&base, 2, &base.from_int(-3)).unwrap()
    }

    fn rv(n: u32, d: u32) -> RationalValuation {
        RationalValuation::Finite(Ratio::new(n, d))
    }

    #[test]
    fn construction_errors() {
        let base = make_unramified_ring(3, 1, 10).unwrap();
        assert_eq!(
            make_radical_ext(&base, 3, &base.from_int(3)).unwrap_err(),
            Error::WildRamification { e: 3, p: 3 }
        );
        assert!(matches!(make_radical_ext(&base, 2, &base.from_int(9)), Err(Error::NotUniformizer(_))));
    }

    #[test]
    fn pi_squared_is_gamma() {
        let l = q3_sqrt_m3();
        let pi = l.pi();
        assert!(l.equal(&l.mul(&pi, &pi), &l.from_int(-3)));
        assert_eq!(l.rational_valuation(&pi), rv(1, 2));
        let x = l.add(&l.from_int(3), &pi);
        assert_eq!(l.rational_valuation(&x), rv(1, 2));
        assert!(matches!(l.rational_valuation(&l.zero()), RationalValuation::AtLeast(_)));
    }

    #[test]
    fn coordinates_of_square() {
        let l = q3_sqrt_m3();
        let b = l.base();
        let x = l.add(&l.one(), &l.pi());
        let sq = l.mul(&x, &x);
        assert_eq!(sq.coordinates(), &[b.from_int(1 - 3), b.from_int(2)]);
        assert_eq!(l.pi().coordinates(), &[b.zero(), b.one()]);
    }

    #[test]
    fn principal_unit_roots() {
        let l = q3_sqrt_m3();
        assert!(l.equal(&l.nth_root_of_principal_unit(&l.one(), 2).unwrap(), &l.one()));
        let w = l.nth_root_of_principal_unit(&l.from_int(4), 2).unwrap();
        assert!(l.equal(&w, &l.from_int(-2)));
        let u = l.add(&l.one(), &l.pi());
        let w = l.nth_root_of_principal_unit(&u, 4).unwrap();
        assert!(l.equal(&l.pow(&w, 4), &u));
        assert!(l.pi_valuation(&l.sub(&w, &l.one())).is_at_least(1));
        assert_eq!(l.nth_root_of_principal_unit(&l.from_int(2), 2).unwrap_err(), Error::NotPrincipalUnit);
    }

    #[test]
    fn normalization() {
        let l = q3_sqrt_m3();
        let b = l.base().clone();
        let pair = l.normalize_uniformizer(&l.pi()).unwrap();
        // γ/p is only determined modulo p^(N-1) by γ
        assert!(l.equal(&l.with_precision(&pair.pi, 18), &l.pi()));
        assert_eq!(pair.pi_prime, b.from_int(-3));
        for t in [l.scale(&l.pi(), &b.from_int(4)), l.scale(&l.pi(), &b.from_int(2))] {
            let pair = l.normalize_uniformizer(&t).unwrap();
            assert!(l.equal(&l.pow(&pair.pi, 2), &l.from_base(&pair.pi_prime)));
            assert_eq!(b.valuation(&pair.pi_prime), Valuation::Finite(1));
            assert_eq!(l.rational_valuation(&pair.pi), rv(1, 2));
        }
        // the exact variant keeps every digit
        let y = l.add(&l.from_int(2), &l.pi());
        let pair = l.normalize_pi_multiple(&y).unwrap();
        assert_eq!(pair.pi.precision(), l.full_precision());
        assert!(l.is_zero(&l.sub(&l.pow(&pair.pi, 2), &l.from_base(&pair.pi_prime))));
    }

    #[test]
    fn kummer_automorphism_has_order_e() {
        let base = make_unramified_ring(3, 2, 6).unwrap();
        let zeta = base.root_of_unity_generator(8).unwrap();
        let l = TameExt::from_unit(&base, 8, base.from_int(-1)).unwrap();
        assert!(l.is_kummer());
        let x = l.add(&l.pi(), &l.mul(&l.pi(), &l.pi()));
        let mut y = x.clone();
        for k in 1..=8 {
            y = l.scale_pi(&y, &zeta);
            assert_eq!(l.equal(&y, &x), k == 8);
        }
        // preserves the relation Π^8 = γ
        let img = l.scale_pi(&l.pi(), &zeta);
        assert!(l.equal(&l.pow(&img, 8), &l.from_base(l.gamma())));
    }

    #[test]
    fn precision_bookkeeping() {
        let l = q3_sqrt_m3();
        let pi = l.pi();
        let y = l.div_pi_pow(&l.from_int(3), 1).unwrap();
        assert_eq!(y.precision(), 19);
        assert!(l.equal(&l.mul(&y, &pi), &l.from_int(3)));
        let z = l.div_by_p(&l.from_int(9)).unwrap();
        assert_eq!(z.precision(), 18);
        assert!(l.equal(&z, &l.from_int(3)));
        assert!(l.div_pi_pow(&l.one(), 1).is_none());
        assert_eq!(l.leading_residue(&l.scale(&pi, &l.base().from_int(5))), Some(vec![2]));
        // 3 = -Π^2, so its leading residue at Π^2 is -1
        assert_eq!(l.leading_residue(&l.from_int(3)), Some(vec![2]));
    }
}
