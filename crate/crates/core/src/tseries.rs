//! Dense power series in one or two variables, truncated at total degree `D`.
//!
//! Bivariate coefficients are stored graded: degree `d` starts at offset
//! `d(d+1)/2` and runs `X^d, X^{d-1}Y, …, Y^d`.

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::tame_ext::{TameExt, TeElem};
use crate::unramified::{UnramifiedRing, UrElem, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<E> {
    vars: usize,
    cutoff: usize,
    coeffs: Vec<E>,
}

/// Offset of `X^i Y^j` in a bivariate table.
pub fn index2(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn table_len(vars: usize, cutoff: usize) -> usize {
    if vars == 1 {
        cutoff + 1
    } else {
        (cutoff + 1) * (cutoff + 2) / 2
    }
}

impl<E: Clone> Series<E> {
    pub fn zero<R: Ring<Elem = E>>(r: &R, vars: usize, cutoff: usize) -> Self {
        assert!(vars == 1 || vars == 2, "only one or two variables");
        Series { vars, cutoff, coeffs: vec![r.zero(); table_len(vars, cutoff)] }
    }

    /// Univariate series from `c_0, c_1, …`; missing terms are zero, extra
    /// terms are dropped.
    pub fn univariate<R: Ring<Elem = E>>(r: &R, coeffs: &[E], cutoff: usize) -> Self {
        let mut s = Self::zero(r, 1, cutoff);
        for (i, c) in coeffs.iter().enumerate().take(cutoff + 1) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    /// Bivariate series from `(i, j, c)` meaning `c X^i Y^j`.
    pub fn bivariate<R: Ring<Elem = E>>(r: &R, terms: &[(usize, usize, E)], cutoff: usize) -> Self {
        let mut s = Self::zero(r, 2, cutoff);
        for (i, j, c) in terms {
            if i + j <= cutoff {
                s.coeffs[index2(*i, *j)] = c.clone();
            }
        }
        s
    }

    /// Build a series from its raw table (graded order when bivariate).
    pub fn from_table(vars: usize, cutoff: usize, coeffs: Vec<E>) -> Result<Self> {
        if !(vars == 1 || vars == 2) || coeffs.len() != table_len(vars, cutoff) {
            return Err(Error::Config(format!(
                "series table for {vars} variable(s) at cutoff {cutoff} needs {} coefficients, got {}",
                table_len(vars.clamp(1, 2), cutoff),
                coeffs.len()
            )));
        }
        Ok(Series { vars, cutoff, coeffs })
    }

    pub fn x<R: Ring<Elem = E>>(r: &R, vars: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(r, vars, cutoff);
        if cutoff >= 1 {
            s.coeffs[1] = r.one();
        }
        s
    }

    pub fn y<R: Ring<Elem = E>>(r: &R, cutoff: usize) -> Self {
        let mut s = Self::zero(r, 2, cutoff);
        if cutoff >= 1 {
            s.coeffs[index2(0, 1)] = r.one();
        }
        s
    }

    pub fn constant<R: Ring<Elem = E>>(r: &R, vars: usize, cutoff: usize, c: E) -> Self {
        let mut s = Self::zero(r, vars, cutoff);
        s.coeffs[0] = c;
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Raw table (graded-lexicographic when bivariate).
    pub fn table(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &E {
        debug_assert_eq!(self.vars, 1);
        &self.coeffs[i]
    }

    pub fn coeff2(&self, i: usize, j: usize) -> &E {
        debug_assert_eq!(self.vars, 2);
        &self.coeffs[index2(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, c: E) {
        self.coeffs[i] = c;
    }

    pub fn set_coeff2(&mut self, i: usize, j: usize, c: E) {
        self.coeffs[index2(i, j)] = c;
    }

    /// Coefficients of the homogeneous part of degree `d`
    /// (`X^d, X^{d-1}Y, …` when bivariate).
    pub fn homogeneous(&self, d: usize) -> &[E] {
        if self.vars == 1 {
            &self.coeffs[d..=d]
        } else {
            &self.coeffs[index2(d, 0)..=index2(0, d)]
        }
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        Series {
            vars: self.vars,
            cutoff,
            coeffs: self.coeffs[..table_len(self.vars, cutoff)].to_vec(),
        }
    }

    pub fn map<F, T>(&self, f: F) -> Series<T>
    where
        F: Fn(&E) -> T,
    {
        Series { vars: self.vars, cutoff: self.cutoff, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// `F(Y, X)`.
    pub fn swap(&self) -> Self {
        assert_eq!(self.vars, 2);
        let mut out = self.clone();
        for d in 0..=self.cutoff {
            for j in 0..=d {
                out.coeffs[index2(d - j, j)] = self.coeffs[index2(j, d - j)].clone();
            }
        }
        out
    }

    /// The univariate series `F(X, 0)`.
    pub fn restrict_y_zero(&self) -> Self {
        assert_eq!(self.vars, 2);
        Series {
            vars: 1,
            cutoff: self.cutoff,
            coeffs: (0..=self.cutoff).map(|i| self.coeffs[index2(i, 0)].clone()).collect(),
        }
    }

    /// The univariate series `F(X, X)`.
    pub fn diagonal<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        assert_eq!(self.vars, 2);
        let coeffs = (0..=self.cutoff)
            .map(|d| self.homogeneous(d).iter().fold(r.zero(), |acc, c| r.add(&acc, c)))
            .collect();
        Series { vars: 1, cutoff: self.cutoff, coeffs }
    }

    /// Monomial exponents in table order.
    pub fn monomials(&self) -> Vec<(usize, usize)> {
        if self.vars == 1 {
            (0..=self.cutoff).map(|i| (i, 0)).collect()
        } else {
            (0..=self.cutoff).flat_map(|d| (0..=d).map(move |j| (d - j, j))).collect()
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series in different numbers of variables");
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.zip_with(other, |a, b| r.add(a, b))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.zip_with(other, |a, b| r.sub(a, b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&E, &E) -> E) -> Self {
        self.check_compatible(other);
        let cutoff = self.cutoff.min(other.cutoff);
        let n = table_len(self.vars, cutoff);
        Series {
            vars: self.vars,
            cutoff,
            coeffs: self.coeffs[..n].iter().zip(&other.coeffs[..n]).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        self.map(|c| r.neg(c))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        self.map(|a| r.mul(a, c))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.coeffs.iter().all(|c| r.is_zero(c))
    }

    /// Index of the first nonzero coefficient (table order), if any.
    pub fn first_difference<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Option<(usize, usize)> {
        let d = self.sub(r, other);
        let mons = d.monomials();
        d.coeffs.iter().position(|c| !r.is_zero(c)).map(|k| mons[k])
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, other: &Self) -> Self {
        self.check_compatible(other);
        let cutoff = self.cutoff.min(other.cutoff);
        let a = &self.coeffs;
        let b = &other.coeffs;
        if self.vars == 1 {
            let lo_a = a.iter().position(|c| !r.is_zero(c)).unwrap_or(cutoff + 1);
            let lo_b = b.iter().position(|c| !r.is_zero(c)).unwrap_or(cutoff + 1);
            let coeffs = (0..=cutoff)
                .map(|k| {
                    if k < lo_a + lo_b {
                        return r.zero();
                    }
                    r.dot((lo_a..=k - lo_b).map(|i| (&a[i], &b[k - i])))
                })
                .collect();
            return Series { vars: 1, cutoff, coeffs };
        }
        let nz_a: Vec<bool> = a.iter().map(|c| !r.is_zero(c)).collect();
        let mut coeffs = Vec::with_capacity(table_len(2, cutoff));
        for d in 0..=cutoff {
            for jj in 0..=d {
                let ii = d - jj;
                let mut pairs = Vec::new();
                for i in 0..=ii {
                    for j in 0..=jj {
                        let ka = index2(i, j);
                        if nz_a[ka] {
                            pairs.push((ka, index2(ii - i, jj - j)));
                        }
                    }
                }
                coeffs.push(r.dot(pairs.iter().map(|&(x, y)| (&a[x], &b[y]))));
            }
        }
        Series { vars: 2, cutoff, coeffs }
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, n: usize) -> Self {
        let mut acc = Self::constant(r, self.vars, self.cutoff, r.one());
        for _ in 0..n {
            acc = acc.mul(r, self);
        }
        acc
    }

    /// Powers `self^0 .. self^n`.
    pub fn powers<R: Ring<Elem = E>>(&self, r: &R, n: usize) -> Vec<Self> {
        let mut out = vec![Self::constant(r, self.vars, self.cutoff, r.one())];
        for k in 1..=n {
            let next = out[k - 1].mul(r, self);
            out.push(next);
        }
        out
    }

    pub fn has_zero_constant<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        r.is_zero(&self.coeffs[0])
    }

    /// `g ∘ h` for univariate `g`; `h` may have one or two variables.
    pub fn compose<R: Ring<Elem = E>>(&self, r: &R, h: &Self) -> Result<Self> {
        assert_eq!(self.vars, 1, "outer series must be univariate");
        if !h.has_zero_constant(r) {
            return Err(Error::NonzeroConstantTerm);
        }
        let cutoff = self.cutoff.min(h.cutoff);
        let h = h.truncate(cutoff);
        let mut acc = Self::constant(r, h.vars, cutoff, self.coeffs[cutoff].clone());
        for i in (0..cutoff).rev() {
            acc = acc.mul(r, &h);
            acc.coeffs[0] = r.add(&acc.coeffs[0], &self.coeffs[i]);
        }
        Ok(acc)
    }

    /// `F(u, v)` for bivariate `F`.
    pub fn substitute_bivariate<R: Ring<Elem = E>>(&self, r: &R, u: &Self, v: &Self) -> Result<Self> {
        assert_eq!(self.vars, 2, "outer series must be bivariate");
        u.check_compatible(v);
        if !u.has_zero_constant(r) || !v.has_zero_constant(r) {
            return Err(Error::NonzeroConstantTerm);
        }
        let cutoff = self.cutoff.min(u.cutoff).min(v.cutoff);
        let u = u.truncate(cutoff);
        let v = v.truncate(cutoff);
        let upow = u.powers(r, cutoff);
        // Σ_j v^j (Σ_i F_ij u^i), Horner in v
        let mut acc = Self::zero(r, u.vars, cutoff);
        for j in (0..=cutoff).rev() {
            acc = acc.mul(r, &v);
            let mut inner = Self::zero(r, u.vars, cutoff);
            for (k, slot) in inner.coeffs.iter_mut().enumerate() {
                *slot = r.dot((0..=cutoff - j).map(|i| (&self.coeffs[index2(i, j)], &upow[i].coeffs[k])));
            }
            acc = acc.add(r, &inner);
        }
        Ok(acc)
    }
}

impl Series<UrElem> {
    /// `1 / g` for a unit series over an unramified ring.
    pub fn inverse(&self, r: &UnramifiedRing) -> Result<Self> {
        assert_eq!(self.vars, 1);
        let c0 = r.unit_inverse(&self.coeffs[0])?;
        let mut h = vec![c0.clone()];
        for k in 1..=self.cutoff {
            let s = r.dot((1..=k).map(|i| (&self.coeffs[i], &h[k - i])));
            h.push(r.neg(&r.mul(&s, &c0)));
        }
        Ok(Series { vars: 1, cutoff: self.cutoff, coeffs: h })
    }

    /// Compositional inverse of `uX + …` with `u` a unit.
    pub fn reversion(&self, r: &UnramifiedRing) -> Result<Self> {
        assert_eq!(self.vars, 1);
        if !self.has_zero_constant(r) {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.cutoff == 0 {
            return Ok(self.clone());
        }
        let u_inv = r.unit_inverse(&self.coeffs[1]).map_err(|_| Error::NonUnitLinearTerm)?;
        let x = Self::x(r, 1, self.cutoff);
        let mut h = x.scale(r, &u_inv);
        // Each pass fixes one more degree.
        for _ in 1..self.cutoff {
            let err = self.compose(r, &h)?.sub(r, &x);
            if err.is_zero(r) {
                break;
            }
            h = h.sub(r, &err.scale(r, &u_inv));
        }
        Ok(h)
    }

    /// Index of the first unit coefficient.
    pub fn first_unit_index(&self, r: &UnramifiedRing) -> Option<usize> {
        assert_eq!(self.vars, 1);
        self.coeffs.iter().position(|c| r.is_unit(c))
    }

    /// Evaluate a univariate series at a point of positive valuation.
    pub fn evaluate_at_point(&self, ext: &TameExt, x: &TeElem) -> Result<TeElem> {
        assert_eq!(self.vars, 1);
        let v = positive_valuation(ext, x)?;
        check_tail(self.cutoff, v, x.precision())?;
        let mut acc = ext.from_base(&self.coeffs[self.cutoff]);
        for i in (0..self.cutoff).rev() {
            acc = ext.mul(&acc, x);
            acc = ext.add(&acc, &ext.from_base(&self.coeffs[i]));
        }
        Ok(acc)
    }

    /// Evaluate a bivariate series at `(s, t)`, both of positive valuation.
    pub fn evaluate_bivariate(&self, ext: &TameExt, s: &TeElem, t: &TeElem) -> Result<TeElem> {
        assert_eq!(self.vars, 2);
        let base = ext.base();
        let vs = positive_valuation(ext, s)?;
        let vt = positive_valuation(ext, t)?;
        check_tail(self.cutoff, vs.min(vt), s.precision().min(t.precision()))?;
        let d = self.cutoff;
        let tpow = ext.powers(t, d);
        let mut acc = ext.zero();
        for i in (0..=d).rev() {
            acc = ext.mul(&acc, s);
            // Σ_j F_ij t^j, coordinatewise
            let coords: Vec<UrElem> = (0..ext.e())
                .map(|k| {
                    base.dot((0..=d - i).map(|j| (&self.coeffs[index2(i, j)], &tpow[j].coordinates()[k])))
                })
                .collect();
            let prec = tpow[..=d - i].iter().map(TeElem::precision).min().unwrap();
            acc = ext.add(&acc, &ext.element(coords, prec));
        }
        Ok(acc)
    }

    /// Weierstrass preparation `g = P·U` treating `g` as known only to its
    /// cutoff.
    pub fn weierstrass_prep(&self, r: &UnramifiedRing) -> Result<Weierstrass> {
        weierstrass(self, r, false)
    }

    /// Weierstrass preparation of a polynomial whose terms above the cutoff
    /// are known to vanish.
    pub fn weierstrass_prep_polynomial(&self, r: &UnramifiedRing) -> Result<Weierstrass> {
        weierstrass(self, r, true)
    }
}

/// `g = P·U`, `P` monic of degree `m` with non-leading coefficients in `pO`.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    /// `P_0 .. P_m`, `P_m = 1`.
    pub poly: Vec<UrElem>,
    pub unit: Series<UrElem>,
    /// `p`-adic digits of `P` that are determined by the input.
    pub digits: u32,
}

fn positive_valuation(ext: &TameExt, x: &TeElem) -> Result<u32> {
    match ext.pi_valuation(x) {
        Valuation::Finite(0) => Err(Error::InvalidParameter("evaluation point is a unit".into())),
        Valuation::Finite(v) => Ok(v),
        Valuation::AtLeast(_) => Ok(u32::MAX),
    }
}

fn check_tail(cutoff: usize, v: u32, prec: u32) -> Result<()> {
    // Omitted terms have Π-valuation at least (D+1)·v.
    if v != u32::MAX && (cutoff as u64 + 1) * (v as u64) < prec as u64 {
        let needed = (prec as usize).div_ceil(v as usize) - 1;
        return Err(Error::InsufficientCutoff { needed, have: cutoff });
    }
    Ok(())
}

impl TameExt {
    fn powers(&self, x: &TeElem, n: usize) -> Vec<TeElem> {
        let mut out = vec![self.one()];
        for k in 1..=n {
            let next = self.mul(&out[k - 1], x);
            out.push(next);
        }
        out
    }
}

fn weierstrass(g: &Series<UrElem>, r: &UnramifiedRing, exact: bool) -> Result<Weierstrass> {
    let d = g.cutoff;
    let n = r.precision();
    let m = g.first_unit_index(r).ok_or(Error::NoUnitCoefficient)?;
    let digits = if exact {
        n
    } else {
        // A change of g beyond degree D moves P by p^((D+1-m)/m).
        n.min(((d + 1 - m) / m.max(1)) as u32)
    };
    if digits < 2 {
        return Err(Error::PrecisionExhausted(format!(
            "Weierstrass degree {m} at cutoff {d} leaves {digits} digit(s)"
        )));
    }
    if m == 0 {
        return Ok(Weierstrass {
            poly: vec![r.one()],
            unit: g.clone(),
            digits,
        });
    }
    // Work on the polynomial g_{<=D}, long enough that every degree feeding
    // the low coefficients is covered to full precision.
    let work = d.max(m * (n as usize + 2));
    let gp = Series::univariate(r, &g.coeffs, work);
    let low: Vec<UrElem> = gp.coeffs[..m].to_vec();
    let high = Series::univariate(r, &gp.coeffs[m..], work);
    let h_inv = high.inverse(r)?;
    let low_series = Series::univariate(r, &low, work);
    let one = Series::constant(r, 1, work, r.one());
    let mut q = h_inv.clone();
    let mut converged = false;
    for _ in 0..=2 * (work + n as usize) {
        let ql = q.mul(r, &low_series);
        let shifted = Series::univariate(r, &ql.coeffs[m..], work);
        let next = one.sub(r, &shifted).mul(r, &h_inv);
        if next == q {
            converged = true;
            break;
        }
        q = next;
    }
    if !converged {
        return Err(Error::NonConvergence(m));
    }
    let ql = q.mul(r, &low_series);
    let mut poly: Vec<UrElem> = ql.coeffs[..m].iter().map(|c| r.truncate(c, digits)).collect();
    poly.push(r.one());
    let unit = q.inverse(r)?.truncate(d);
    Ok(Weierstrass { poly, unit, digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tame_ext::make_radical_ext;
    use crate::unramified::make_unramified_ring;
    use std::sync::Arc;

    fn zp(n: u32) -> Arc<UnramifiedRing> {
        make_unramified_ring(3, 1, n).unwrap()
    }

    fn uni(r: &UnramifiedRing, c: &[i64], d: usize) -> Series<UrElem> {
        let c: Vec<UrElem> = c.iter().map(|&x| r.from_int(x)).collect();
        Series::univariate(r, &c, d)
    }

    #[test]
    fn composition() {
        let r = zp(10);
        let x2 = uni(&r, &[0, 0, 1], 4);
        let h = uni(&r, &[0, 1, 1], 4);
        assert_eq!(x2.compose(&*r, &h).unwrap(), uni(&r, &[0, 0, 1, 2, 1], 4));
        assert_eq!(uni(&r, &[0, 1], 4).compose(&*r, &h).unwrap(), h);
        assert_eq!(x2.compose(&*r, &uni(&r, &[1, 1], 4)).unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn reversion_examples() {
        let r = zp(10);
        let g = uni(&r, &[0, 1, 1], 4);
        assert_eq!(g.reversion(&r).unwrap(), uni(&r, &[0, 1, -1, 2, -5], 4));
        let r6 = zp(6);
        assert_eq!(uni(&r6, &[0, 2], 5).reversion(&r6).unwrap(), uni(&r6, &[0, 365], 5));
        assert_eq!(uni(&r, &[0, 3, 1], 4).reversion(&r).unwrap_err(), Error::NonUnitLinearTerm);
        let f = uni(&r, &[0, 3, 0, 1], 8);
        assert_eq!(f.reversion(&r).unwrap_err(), Error::NonUnitLinearTerm);
    }

    #[test]
    fn bivariate_substitution() {
        let r = zp(10);
        let x = Series::x(&*r, 1, 3);
        let xy = Series::bivariate(&*r, &[(1, 0, r.one()), (0, 1, r.one())], 3);
        assert_eq!(xy.substitute_bivariate(&*r, &x, &x).unwrap(), uni(&r, &[0, 2], 3));
        let mult = Series::bivariate(&*r, &[(1, 0, r.one()), (0, 1, r.one()), (1, 1, r.one())], 3);
        let x2 = uni(&r, &[0, 0, 1], 3);
        assert_eq!(mult.substitute_bivariate(&*r, &x, &x2).unwrap(), uni(&r, &[0, 1, 1, 1], 3));
    }

    #[test]
    fn graded_layout() {
        let r = zp(4);
        let s = Series::bivariate(&*r, &[(2, 1, r.from_int(7))], 4);
        assert_eq!(s.homogeneous(3), &[r.zero(), r.from_int(7), r.zero(), r.zero()]);
        assert_eq!(*s.swap().coeff2(1, 2), r.from_int(7));
        assert_eq!(s.monomials()[index2(2, 1)], (2, 1));
    }

    #[test]
    fn evaluation_kills_torsion() {
        let r = zp(10);
        let l = make_radical_ext(&r, 2, &r.from_int(-3)).unwrap();
        let f = uni(&r, &[0, 3, 0, 1], 20);
        let v = f.evaluate_at_point(&l, &l.pi()).unwrap();
        assert!(l.is_zero(&v));
        let short = uni(&r, &[0, 3, 0, 1], 10);
        assert_eq!(
            short.evaluate_at_point(&l, &l.pi()).unwrap_err(),
            Error::InsufficientCutoff { needed: 19, have: 10 }
        );
    }

    #[test]
    fn weierstrass_examples() {
        let r = zp(10);
        let w = uni(&r, &[0, 3, 0, 1], 30).weierstrass_prep_polynomial(&r).unwrap();
        assert_eq!(w.poly, vec![r.zero(), r.from_int(3), r.zero(), r.one()]);
        assert_eq!(w.unit, Series::constant(&*r, 1, 30, r.one()));
        let g = uni(&r, &[0, 3, 3, 0, 0, 0, 0, 0, 0, 1], 40);
        let w = g.weierstrass_prep_polynomial(&r).unwrap();
        assert_eq!(w.poly.len(), 10);
        // a genuine power series: P·U reproduces g
        let g = uni(&r, &[3, 9, 1, 1, 5, 0, 2], 40);
        let w = g.weierstrass_prep_polynomial(&r).unwrap();
        assert_eq!(w.poly.len(), 3);
        assert!(r.valuation(&w.poly[0]).is_at_least(1) && r.valuation(&w.poly[1]).is_at_least(1));
        let p = Series::univariate(&*r, &w.poly, 40);
        assert_eq!(p.mul(&*r, &w.unit), g);
        assert_eq!(uni(&r, &[3, 9], 5).weierstrass_prep(&r).unwrap_err(), Error::NoUnitCoefficient);
    }
}
