//! Unramified extensions of `Z_p` truncated at absolute precision `p^N`.
//!
//! `O_K = Z_p[t] / (g(t))` where `g` is the least monic irreducible of degree
//! `f` over `F_p` (coefficients `(c_{f-1}, ..., c_0)` compared
//! lexicographically), read into `Z/p^N` with coefficients in `[0, p)`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use dashu_int::fast_div::ConstDivisor;
use dashu_int::{IBig, UBig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{canonical_cmp, is_irreducible_mod_p, is_prime, ResidueElement, ResidueField};
use crate::ring::Ring;

/// `p`-adic valuation of an element known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// The element vanishes modulo `p^N`; its valuation is at least `N`.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// True when the valuation is provably `>= k`.
    pub fn is_at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= k,
        }
    }

    pub fn is_unit(self) -> bool {
        self == Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// An element of an [`UnramifiedRing`]: `f` coefficients in `[0, p^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UrElem(pub(crate) Vec<UBig>);

impl UrElem {
    pub fn coeffs(&self) -> &[UBig] {
        &self.0
    }
}

pub struct UnramifiedRing {
    p: u64,
    f: usize,
    prec: u32,
    modulus: UBig,
    divisor: ConstDivisor,
    poly: Vec<u64>,
    residue: ResidueField,
    frobenius_image: OnceLock<UrElem>,
}

impl fmt::Debug for UnramifiedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnramifiedRing")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("N", &self.prec)
            .field("defining_poly", &self.poly)
            .finish()
    }
}

impl PartialEq for UnramifiedRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.prec == other.prec && self.poly == other.poly
    }
}

impl Eq for UnramifiedRing {}

/// Least monic irreducible of degree `f` over `F_p` in the canonical order.
pub fn canonical_defining_poly(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    let mut c = vec![0u64; f];
    loop {
        let mut monic = c.clone();
        monic.push(1);
        if is_irreducible_mod_p(p, &monic) {
            return c;
        }
        // increment with c_0 least significant
        for d in c.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
}

/// Build `O_K` for the unramified extension of degree `f` at precision `N`.
pub fn make_unramified_ring(p: u64, f: usize, n: u32) -> Result<Arc<UnramifiedRing>> {
    UnramifiedRing::new(p, f, n).map(Arc::new)
}

impl UnramifiedRing {
    pub fn new(p: u64, f: usize, n: u32) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if f == 0 {
            return Err(Error::InvalidParameter("residue degree must be positive".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("precision N = {n} is below 2")));
        }
        if (p as u128).checked_pow(f as u32).map_or(true, |q| q >= 1 << 126) {
            return Err(Error::FieldTooLarge { p, f });
        }
        let poly = canonical_defining_poly(p, f);
        Ok(Self::with_poly(p, poly, n))
    }

    fn with_poly(p: u64, poly: Vec<u64>, n: u32) -> Self {
        let modulus = UBig::from(p).pow(n as usize);
        UnramifiedRing {
            p,
            f: poly.len(),
            prec: n,
            divisor: ConstDivisor::new(modulus.clone()),
            modulus,
            residue: ResidueField::new(p, poly.clone()),
            poly,
            frobenius_image: OnceLock::new(),
        }
    }

    /// Same extension at a different absolute precision.
    pub fn with_precision(&self, n: u32) -> Arc<UnramifiedRing> {
        Arc::new(Self::with_poly(self.p, self.poly.clone(), n.max(1)))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> &UBig {
        &self.modulus
    }

    /// Residue-level coefficients `g_0 .. g_{f-1}` of the monic defining polynomial.
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// `p^f`.
    pub fn residue_order(&self) -> u128 {
        self.residue.order().unwrap()
    }

    /// True when `other` is the same extension (possibly at another precision).
    pub fn same_field(&self, other: &UnramifiedRing) -> bool {
        self.p == other.p && self.poly == other.poly
    }

    fn reduce(&self, x: UBig) -> UBig {
        x % &self.divisor
    }

    pub fn from_ubig(&self, n: UBig) -> UrElem {
        let mut v = vec![UBig::ZERO; self.f];
        v[0] = self.reduce(n);
        UrElem(v)
    }

    pub fn from_ibig(&self, n: &IBig) -> UrElem {
        let m = IBig::from(self.modulus.clone());
        let mut r = n % &m;
        if r < IBig::ZERO {
            r += m;
        }
        self.from_ubig(UBig::try_from(r).expect("nonnegative after adjustment"))
    }

    pub fn from_coeffs(&self, coeffs: Vec<UBig>) -> UrElem {
        assert_eq!(coeffs.len(), self.f, "coefficient count must equal the degree");
        UrElem(coeffs.into_iter().map(|c| self.reduce(c)).collect())
    }

    /// Parse signed decimal strings, little-endian in the generator.
    pub fn from_strings<S: AsRef<str>>(&self, digits: &[S]) -> Result<UrElem> {
        if digits.len() > self.f || digits.is_empty() {
            return Err(Error::Config(format!(
                "expected 1..={} coefficients, got {}",
                self.f,
                digits.len()
            )));
        }
        let mut out = self.zero();
        for (i, s) in digits.iter().enumerate() {
            let v: IBig = s
                .as_ref()
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("not an integer: {:?}", s.as_ref())))?;
            out.0[i] = self.from_ibig(&v).0[0].clone();
        }
        Ok(out)
    }

    /// Decimal digit strings of each coefficient, little-endian.
    pub fn to_strings(&self, x: &UrElem) -> Vec<String> {
        x.0.iter().map(|c| c.to_string()).collect()
    }

    /// Lift a residue with coefficients in `[0, p)`.
    pub fn lift_residue(&self, r: &[u64]) -> UrElem {
        UrElem(r.iter().map(|&c| UBig::from(c)).collect())
    }

    pub fn residue(&self, x: &UrElem) -> ResidueElement {
        x.0.iter().map(|c| (c % self.p) as u64).collect()
    }

    /// The generator `t` of `O_K` over `Z_p` (the root of the defining polynomial).
    pub fn generator(&self) -> UrElem {
        if self.f == 1 {
            // t - 0 convention: t = 0, and every element is a constant.
            self.from_ubig(UBig::from(self.p - self.poly[0]) % UBig::from(self.p))
        } else {
            let mut v = vec![UBig::ZERO; self.f];
            v[1] = UBig::ONE;
            UrElem(v)
        }
    }

    pub fn valuation(&self, x: &UrElem) -> Valuation {
        let mut best = self.prec;
        for c in &x.0 {
            if c.is_zero() {
                continue;
            }
            let mut v = 0;
            let mut c = c.clone();
            while v < best && (&c % self.p) == 0 {
                c /= self.p;
                v += 1;
            }
            best = best.min(v);
        }
        if best >= self.prec {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Finite(best)
        }
    }

    pub fn is_unit(&self, x: &UrElem) -> bool {
        x.0.iter().any(|c| (c % self.p) != 0)
    }

    /// `x / p`, exact in `Z/p^(N-1)` (top digit filled with zero); `None` when `p ∤ x`.
    pub fn div_by_p(&self, x: &UrElem) -> Option<UrElem> {
        if x.0.iter().any(|c| (c % self.p) != 0) {
            return None;
        }
        Some(UrElem(x.0.iter().map(|c| c / self.p).collect()))
    }

    /// `x / p^k`; `None` unless `p^k | x`.
    pub fn div_by_p_pow(&self, x: &UrElem, k: u32) -> Option<UrElem> {
        (0..k).try_fold(x.clone(), |acc, _| self.div_by_p(&acc))
    }

    /// `x mod p^k` (coefficientwise).
    pub fn truncate(&self, x: &UrElem, k: u32) -> UrElem {
        if k >= self.prec {
            return x.clone();
        }
        let m = UBig::from(self.p).pow(k as usize);
        UrElem(x.0.iter().map(|c| c % &m).collect())
    }

    pub fn mul_p_pow(&self, x: &UrElem, k: u32) -> UrElem {
        let s = UBig::from(self.p).pow(k as usize);
        UrElem(x.0.iter().map(|c| self.reduce(c * &s)).collect())
    }

    pub fn scale_int(&self, x: &UrElem, n: u64) -> UrElem {
        UrElem(x.0.iter().map(|c| self.reduce(c * UBig::from(n))).collect())
    }

    pub fn unit_inverse(&self, x: &UrElem) -> Result<UrElem> {
        let r = self.residue(x);
        let r_inv = self.residue.inv(&r).ok_or(Error::NotAUnit)?;
        let mut y = self.lift_residue(&r_inv);
        let two = self.from_int(2);
        // Newton: each step doubles the number of correct digits.
        for _ in 0..=(64 - (self.prec as u64).leading_zeros()) + 1 {
            let xy = self.mul(x, &y);
            if xy == self.one() {
                return Ok(y);
            }
            y = self.mul(&y, &self.sub(&two, &xy));
        }
        debug_assert_eq!(self.mul(x, &y), self.one());
        Ok(y)
    }

    /// `x^(p^k)` by repeated `p`-th powers.
    pub fn pow_p_power(&self, x: &UrElem, k: usize) -> UrElem {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.pow(&y, self.p as u128);
        }
        y
    }

    /// The unique lift `x ≡ r (mod p)` with `x^(p^f) = x`.
    pub fn teichmuller_lift(&self, r: &[u64]) -> UrElem {
        let mut x = self.lift_residue(r);
        // Each pass gains at least f digits; stop at the fixed point.
        for _ in 0..=self.prec {
            let y = self.pow_p_power(&x, self.f);
            if y == x {
                return x;
            }
            x = y;
        }
        x
    }

    /// Teichmüller representative of the residue of `x`.
    pub fn teichmuller_of(&self, x: &UrElem) -> UrElem {
        self.teichmuller_lift(&self.residue(x))
    }

    /// The canonical generator of `μ_{p^h - 1}` (`h | f`): Teichmüller lift of
    /// the least element of multiplicative order `p^h - 1`.
    pub fn root_of_unity_generator(&self, order: u128) -> Result<UrElem> {
        let q = self.residue_order();
        if (q - 1) % order != 0 {
            return Err(Error::DivisibilityFails(order as u64, (q - 1) as u64));
        }
        let g = self.residue.primitive_element();
        let r = self.residue.pow(&g, (q - 1) / order);
        Ok(self.teichmuller_lift(&r))
    }

    /// Multiplicative order of a root of unity (`x^(p^f-1) = 1`).
    pub fn root_of_unity_order(&self, x: &UrElem) -> u128 {
        self.residue.multiplicative_order(&self.residue(x))
    }

    /// The arithmetic Frobenius automorphism `σ` (lifting `x -> x^p`).
    pub fn frobenius(&self, x: &UrElem) -> UrElem {
        if self.f == 1 {
            return x.clone();
        }
        let image = self.frobenius_image.get_or_init(|| {
            let g = self.defining_poly_elems();
            let r = self.residue.frobenius(&self.residue.generator());
            self.hensel_lift(&g, &r).expect("defining polynomial is separable mod p")
        });
        self.eval_in_generator(x, image)
    }

    /// `σ^k`.
    pub fn frobenius_pow(&self, x: &UrElem, k: usize) -> UrElem {
        (0..k % self.f).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Evaluate `x`, read as a polynomial in the generator, at `t = image`.
    fn eval_in_generator(&self, x: &UrElem, image: &UrElem) -> UrElem {
        let mut acc = self.zero();
        for c in x.0.iter().rev() {
            acc = self.mul(&acc, image);
            acc = self.add(&acc, &self.from_ubig(c.clone()));
        }
        acc
    }

    /// Defining polynomial as ring elements, monic, low to high.
    pub fn defining_poly_elems(&self) -> Vec<UrElem> {
        let mut g: Vec<UrElem> = self.poly.iter().map(|&c| self.from_int(c as i64)).collect();
        g.push(self.one());
        g
    }

    pub fn poly_eval(&self, poly: &[UrElem], x: &UrElem) -> UrElem {
        poly.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn poly_derivative(&self, poly: &[UrElem]) -> Vec<UrElem> {
        poly.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale_int(c, i as u64))
            .collect()
    }

    fn poly_residue(&self, poly: &[UrElem]) -> Vec<ResidueElement> {
        let mut r: Vec<ResidueElement> = poly.iter().map(|c| self.residue(c)).collect();
        self.residue.poly_trim(&mut r);
        r
    }

    /// Newton-lift a simple residue root of `poly` to a root modulo `p^N`.
    pub fn hensel_lift(&self, poly: &[UrElem], root: &[u64]) -> Result<UrElem> {
        let dpoly = self.poly_derivative(poly);
        let mut x = self.lift_residue(root);
        let d0 = self.poly_eval(&dpoly, &x);
        if !self.is_unit(&d0) {
            return Err(Error::NotSeparable);
        }
        for _ in 0..=2 * (64 - (self.prec as u64).leading_zeros()) + 2 {
            let v = self.poly_eval(poly, &x);
            if self.is_zero(&v) {
                return Ok(x);
            }
            let d = self.poly_eval(&dpoly, &x);
            x = self.sub(&x, &self.mul(&v, &self.unit_inverse(&d)?));
        }
        Ok(x)
    }

    /// All roots of `poly` lifting simple residue roots, sorted by residue.
    pub fn hensel_roots(&self, poly: &[UrElem]) -> Result<Vec<UrElem>> {
        let r = self.poly_residue(poly);
        if r.len() <= 1 {
            return Ok(Vec::new());
        }
        if !self.residue.poly_is_separable(&r) {
            return Err(Error::NotSeparable);
        }
        self.residue
            .poly_roots(&r)
            .iter()
            .map(|root| self.hensel_lift(poly, root))
            .collect()
    }

    /// Bring an element of the same field at another precision into this ring.
    pub fn coerce(&self, src: &UnramifiedRing, x: &UrElem) -> UrElem {
        debug_assert!(self.same_field(src));
        UrElem(x.0.iter().map(|c| self.reduce(c.clone())).collect())
    }

    fn lazy_mul(&self, a: &UrElem, b: &UrElem) -> Vec<UBig> {
        let f = self.f;
        let mut acc = vec![UBig::ZERO; 2 * f - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        acc
    }

    /// Fold an unreduced product of length `2f - 1` modulo `g` and `p^N`.
    fn fold(&self, mut acc: Vec<UBig>) -> UrElem {
        let f = self.f;
        if f == 1 {
            return UrElem(vec![self.reduce(acc.pop().unwrap())]);
        }
        let mut neg = vec![UBig::ZERO; acc.len()];
        for k in (f..acc.len()).rev() {
            let t = self.sub_mod(&acc[k], &neg[k]);
            if t.is_zero() {
                continue;
            }
            for (i, &g) in self.poly.iter().enumerate() {
                if g != 0 {
                    neg[k - f + i] += &t * UBig::from(g);
                }
            }
        }
        UrElem((0..f).map(|i| self.sub_mod(&acc[i], &neg[i])).collect())
    }

    fn sub_mod(&self, a: &UBig, b: &UBig) -> UBig {
        let a = self.reduce(a.clone());
        if b.is_zero() {
            return a;
        }
        let b = self.reduce(b.clone());
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }
}

impl Ring for UnramifiedRing {
    type Elem = UrElem;

    fn zero(&self) -> UrElem {
        UrElem(vec![UBig::ZERO; self.f])
    }

    fn one(&self) -> UrElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> UrElem {
        self.from_ibig(&IBig::from(n))
    }

    fn add(&self, a: &UrElem, b: &UrElem) -> UrElem {
        UrElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| {
                    let s = x + y;
                    if s >= self.modulus {
                        s - &self.modulus
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    fn sub(&self, a: &UrElem, b: &UrElem) -> UrElem {
        UrElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| if x >= y { x - y } else { x + &self.modulus - y })
                .collect(),
        )
    }

    fn neg(&self, a: &UrElem) -> UrElem {
        UrElem(
            a.0.iter()
                .map(|x| if x.is_zero() { UBig::ZERO } else { &self.modulus - x })
                .collect(),
        )
    }

    fn mul(&self, a: &UrElem, b: &UrElem) -> UrElem {
        if self.f == 1 {
            return UrElem(vec![self.reduce(&a.0[0] * &b.0[0])]);
        }
        self.fold(self.lazy_mul(a, b))
    }

    fn is_zero(&self, a: &UrElem) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    fn dot<'a, I>(&self, pairs: I) -> UrElem
    where
        I: Iterator<Item = (&'a UrElem, &'a UrElem)>,
    {
        let mut acc = vec![UBig::ZERO; 2 * self.f - 1];
        let mut any = false;
        for (a, b) in pairs {
            for (i, x) in a.0.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.0.iter().enumerate() {
                    if !y.is_zero() {
                        acc[i + j] += x * y;
                        any = true;
                    }
                }
            }
        }
        if !any {
            return self.zero();
        }
        self.fold(acc)
    }
}

/// An injective ring map `O_{K'} -> O_K` for `f' | f`, sending the generator
/// of the source to the canonical (least-residue) root of its defining
/// polynomial in the target.
#[derive(Clone, Debug)]
pub struct RingEmbedding {
    src: Arc<UnramifiedRing>,
    dst: Arc<UnramifiedRing>,
    powers: Vec<UrElem>,
}

impl RingEmbedding {
    pub fn src(&self) -> &Arc<UnramifiedRing> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<UnramifiedRing> {
        &self.dst
    }

    /// Image of the source generator.
    pub fn generator_image(&self) -> UrElem {
        if self.powers.len() > 1 {
            self.powers[1].clone()
        } else {
            self.dst.from_ubig(self.src.generator().0[0].clone())
        }
    }

    pub fn apply(&self, x: &UrElem) -> UrElem {
        let consts: Vec<UrElem> = x.0.iter().map(|c| self.dst.from_ubig(c.clone())).collect();
        self.dst.dot(consts.iter().zip(&self.powers))
    }

    /// The unique `y` with `apply(y) = x`, if `x` lies in the image.
    pub fn preimage(&self, x: &UrElem) -> Option<UrElem> {
        let (src, dst) = (&self.src, &self.dst);
        let h = src.degree();
        let f = dst.degree();
        // columns: coordinates of the images of 1, θ, …, θ^{h-1}; last column x
        let mut rows: Vec<Vec<UBig>> = (0..f)
            .map(|r| {
                let mut row: Vec<UBig> = self.powers.iter().map(|b| b.0[r].clone()).collect();
                row.push(x.0[r].clone());
                row
            })
            .collect();
        let m = &dst.modulus;
        let p = dst.p;
        let sub = |a: &UBig, b: &UBig| if a >= b { a - b } else { a + m - b };
        let mut pivots = Vec::with_capacity(h);
        let mut next = 0;
        for col in 0..h {
            let pr = (next..f).find(|&r| (&rows[r][col] % p) != 0)?;
            rows.swap(next, pr);
            let inv = dst.unit_inverse(&dst.from_ubig(rows[next][col].clone())).ok()?.0[0].clone();
            for c in col..=h {
                rows[next][c] = (&rows[next][c] * &inv) % m;
            }
            for r in 0..f {
                if r != next && !rows[r][col].is_zero() {
                    let factor = rows[r][col].clone();
                    for c in col..=h {
                        let t = (&factor * &rows[next][c]) % m;
                        rows[r][c] = sub(&rows[r][c], &t);
                    }
                }
            }
            pivots.push(next);
            next += 1;
        }
        if rows[next..].iter().any(|r| !r[h].is_zero()) {
            return None;
        }
        let y = src.from_coeffs(pivots.iter().map(|&r| rows[r][h].clone()).collect());
        (self.apply(&y) == *x).then_some(y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RingEmbedding) -> Result<RingEmbedding> {
        if !inner.dst.same_field(&self.src) {
            return Err(Error::RingMismatch("embeddings do not chain".into()));
        }
        let image = self.apply(&self.src.coerce(&inner.dst, &inner.generator_image()));
        Ok(RingEmbedding::from_image(inner.src.clone(), self.dst.clone(), image))
    }

    fn from_image(src: Arc<UnramifiedRing>, dst: Arc<UnramifiedRing>, image: UrElem) -> Self {
        let mut powers = vec![dst.one()];
        for _ in 1..src.degree() {
            let next = dst.mul(powers.last().unwrap(), &image);
            powers.push(next);
        }
        RingEmbedding { src, dst, powers }
    }

    pub fn identity(ring: Arc<UnramifiedRing>) -> Self {
        let image = ring.generator();
        RingEmbedding::from_image(ring.clone(), ring, image)
    }
}

/// Canonical embedding of `src` (degree `f'`) into `dst` (degree `f`, `f' | f`).
pub fn embed_subring(src: &Arc<UnramifiedRing>, dst: &Arc<UnramifiedRing>) -> Result<RingEmbedding> {
    if src.p != dst.p || src.prec != dst.prec {
        return Err(Error::RingMismatch(format!(
            "source (p={}, N={}) vs target (p={}, N={})",
            src.p, src.prec, dst.p, dst.prec
        )));
    }
    if dst.f % src.f != 0 {
        return Err(Error::DivisibilityFails(src.f as u64, dst.f as u64));
    }
    if src.f == 1 {
        return Ok(RingEmbedding::from_image(src.clone(), dst.clone(), dst.zero()));
    }
    let g: Vec<UrElem> = src
        .defining_poly_elems()
        .iter()
        .map(|c| dst.from_ubig(c.0[0].clone()))
        .collect();
    let mut roots = dst.hensel_roots(&g)?;
    roots.sort_by(|a, b| canonical_cmp(&dst.residue(a), &dst.residue(b)));
    let image = roots.into_iter().next().ok_or(Error::NotSeparable)?;
    Ok(RingEmbedding::from_image(src.clone(), dst.clone(), image))
}
