//! Finite fields `F_{p^f}` and polynomials over them.
//!
//! Elements are coefficient vectors of length `f` in `[0, p)`, read as a
//! polynomial in the generator `t` modulo the defining polynomial. These are
//! only ever small fields' worth of data, so everything here is plain `u64`.

use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An element of `F_{p^f}`: coefficients `c_0 .. c_{f-1}` in `[0, p)`.
pub type ResidueElement = Vec<u64>;

/// Canonical total order on residues: compare `(c_{f-1}, ..., c_0)`
/// lexicographically.
pub fn canonical_cmp(a: &[u64], b: &[u64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `F_{p^f}` presented as `F_p[t] / (g)`; `poly` holds `g_0 .. g_{f-1}` of the
/// monic `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    f: usize,
    poly: Vec<u64>,
}

impl ResidueField {
    pub(crate) fn new(p: u64, poly: Vec<u64>) -> Self {
        let f = poly.len();
        ResidueField { p, f, poly }
    }

    /// The prime field `F_p`, presented with `g = t` so that `t = 0`.
    pub fn prime(p: u64) -> Self {
        ResidueField::new(p, vec![0])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    /// Field size `p^f`, if it fits.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.f as u32)
    }

    pub fn zero(&self) -> ResidueElement {
        vec![0; self.f]
    }

    pub fn one(&self) -> ResidueElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> ResidueElement {
        let mut v = self.zero();
        v[0] = n % self.p;
        v
    }

    /// The class of the generator `t` (equal to `-g_0` when `f = 1`).
    pub fn generator(&self) -> ResidueElement {
        if self.f == 1 {
            self.neg(&vec![self.poly[0]])
        } else {
            let mut v = self.zero();
            v[1] = 1;
            v
        }
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> ResidueElement {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> ResidueElement {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> ResidueElement {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> ResidueElement {
        let p = self.p;
        let f = self.f;
        if f == 1 {
            return vec![mulmod(a[0], b[0], p)];
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &g) in self.poly.iter().enumerate() {
                let idx = k - f + i;
                prod[idx] = (prod[idx] + p - mulmod(t, g, p)) % p;
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> ResidueElement {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: &[u64]) -> ResidueElement {
        self.pow(a, self.p as u128)
    }

    pub fn inv(&self, a: &[u64]) -> Option<ResidueElement> {
        if self.is_zero(a) {
            return None;
        }
        let q = self.order().expect("residue field too large");
        Some(self.pow(a, q - 2))
    }

    /// Multiplicative order of a nonzero element, given the factorisation of
    /// `p^f - 1`.
    pub fn multiplicative_order(&self, a: &[u64]) -> u128 {
        let q = self.order().expect("residue field too large");
        let mut ord = q - 1;
        for (r, _) in factorize(q - 1) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// Every element in canonical order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        let total = self.order().expect("residue field too large");
        (0..total).map(move |mut k| {
            let mut v = vec![0u64; self.f];
            for c in v.iter_mut() {
                *c = (k % self.p as u128) as u64;
                k /= self.p as u128;
            }
            v
        })
    }

    /// The least primitive element in canonical order.
    pub fn primitive_element(&self) -> ResidueElement {
        let q = self.order().expect("residue field too large");
        self.elements()
            .skip(1)
            .find(|x| self.multiplicative_order(x) == q - 1)
            .expect("finite fields have primitive elements")
    }

    // ----- polynomials over the field (coefficients low to high) -----

    pub fn poly_trim(&self, a: &mut Vec<ResidueElement>) {
        while a.last().is_some_and(|c| self.is_zero(c)) {
            a.pop();
        }
    }

    pub fn poly_add(&self, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: Vec<_> = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_sub(&self, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: Vec<_> = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_mul(&self, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.poly_trim(&mut out);
        out
    }

    /// Division with remainder by a nonzero polynomial.
    pub fn poly_divrem(
        &self,
        a: &[ResidueElement],
        b: &[ResidueElement],
    ) -> (Vec<ResidueElement>, Vec<ResidueElement>) {
        let mut b = b.to_vec();
        self.poly_trim(&mut b);
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = a.to_vec();
        self.poly_trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = self.inv(b.last().unwrap()).unwrap();
        let mut quot = vec![self.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(r.last().unwrap(), &lead_inv);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = self.sub(&r[shift + i], &self.mul(&c, bc));
            }
            quot[shift] = c;
            r.pop();
            self.poly_trim(&mut r);
        }
        self.poly_trim(&mut quot);
        (quot, r)
    }

    pub fn poly_rem(&self, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
        self.poly_divrem(a, b).1
    }

    pub fn poly_monic(&self, a: &[ResidueElement]) -> Vec<ResidueElement> {
        match a.last() {
            None => Vec::new(),
            Some(lead) => {
                let inv = self.inv(lead).unwrap();
                a.iter().map(|c| self.mul(c, &inv)).collect()
            }
        }
    }

    /// Monic gcd.
    pub fn poly_gcd(&self, a: &[ResidueElement], b: &[ResidueElement]) -> Vec<ResidueElement> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        self.poly_trim(&mut x);
        self.poly_trim(&mut y);
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    pub fn poly_derivative(&self, a: &[ResidueElement]) -> Vec<ResidueElement> {
        let mut out: Vec<_> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(c, &self.from_u64(i as u64 % self.p)))
            .collect();
        self.poly_trim(&mut out);
        out
    }

    pub fn poly_eval(&self, a: &[ResidueElement], x: &[u64]) -> ResidueElement {
        a.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    fn poly_mulmod(
        &self,
        a: &[ResidueElement],
        b: &[ResidueElement],
        m: &[ResidueElement],
    ) -> Vec<ResidueElement> {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    /// `a^e mod m`.
    pub fn poly_powmod(
        &self,
        a: &[ResidueElement],
        mut e: u128,
        m: &[ResidueElement],
    ) -> Vec<ResidueElement> {
        let mut base = self.poly_rem(a, m);
        let mut acc = self.poly_rem(&[self.one()], m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mulmod(&base, &base, m);
            }
        }
        acc
    }

    /// `X^(p^(f*k)) mod m`, by repeated `p`-th powers.
    fn x_pow_frobenius(&self, k: usize, m: &[ResidueElement]) -> Vec<ResidueElement> {
        let mut y = self.poly_rem(&[self.zero(), self.one()], m);
        for _ in 0..self.f * k {
            y = self.poly_powmod(&y, self.p as u128, m);
        }
        y
    }

    /// True when the reduction has no repeated roots in an algebraic closure.
    pub fn poly_is_separable(&self, a: &[ResidueElement]) -> bool {
        let d = self.poly_derivative(a);
        !d.is_empty() && self.poly_gcd(a, &d).len() == 1
    }

    /// All roots in this field, without multiplicity, in canonical order.
    pub fn poly_roots(&self, a: &[ResidueElement]) -> Vec<ResidueElement> {
        let g = self.poly_monic(a);
        if g.len() <= 1 {
            return Vec::new();
        }
        let x = vec![self.zero(), self.one()];
        let xq = self.x_pow_frobenius(1, &g);
        let split = self.poly_gcd(&g, &self.poly_sub(&xq, &x));
        let mut roots = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_f1e1d);
        self.split_linear(split, &mut rng, &mut roots);
        roots.sort_by(|a, b| canonical_cmp(a, b));
        roots.dedup();
        roots
    }

    fn split_linear(
        &self,
        g: Vec<ResidueElement>,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<ResidueElement>,
    ) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(self.neg(&self.mul(&g[0], &self.inv(&g[1]).unwrap()))),
            _ => {
                let q = self.order().expect("residue field too large");
                let exp = (q - 1) / 2;
                loop {
                    let a: ResidueElement = (0..self.f).map(|_| rng.gen_range(0..self.p)).collect();
                    let shifted = vec![a, self.one()];
                    let mut t = self.poly_powmod(&shifted, exp, &g);
                    t = self.poly_sub(&t, &[self.one()]);
                    let d = self.poly_gcd(&g, &t);
                    if d.len() > 1 && d.len() < g.len() {
                        let (rest, _) = self.poly_divrem(&g, &d);
                        let rest = self.poly_monic(&rest);
                        self.split_linear(d, rng, out);
                        self.split_linear(rest, rng, out);
                        return;
                    }
                }
            }
        }
    }
}

/// Polynomials over `F_p` as plain coefficient lists; irreducibility by
/// Rabin's test.
pub fn is_irreducible_mod_p(p: u64, monic: &[u64]) -> bool {
    let fp = ResidueField::prime(p);
    let g: Vec<ResidueElement> = monic.iter().map(|&c| vec![c % p]).collect();
    let n = g.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![fp.zero(), fp.one()];
    if fp.poly_sub(&fp.x_pow_frobenius(n, &g), &fp.poly_rem(&x, &g)) != Vec::<ResidueElement>::new()
    {
        return false;
    }
    for (r, _) in factorize(n as u128) {
        let y = fp.x_pow_frobenius(n / r as usize, &g);
        if fp.poly_gcd(&g, &fp.poly_sub(&y, &x)).len() != 1 {
            return false;
        }
    }
    true
}

/// Trial-division factorisation into `(prime, exponent)` pairs.
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n as u128).len() == 1 && factorize(n as u128)[0].1 == 1
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn order_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
        assert!(k <= m, "{a} is not a unit mod {m}");
    }
    k
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let big: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&d| d * d != n).collect();
    out.extend(big);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_roots(k: &ResidueField, a: &[ResidueElement]) -> Vec<ResidueElement> {
        k.elements().filter(|x| k.is_zero(&k.poly_eval(a, x))).collect()
    }

    #[test]
    fn quadratic_irreducibles_over_f3() {
        // x^2 + 1, x^2 + x + 2, x^2 + 2x + 2 are the irreducible monic quadratics.
        let mut found = Vec::new();
        for c1 in 0..3 {
            for c0 in 0..3 {
                if is_irreducible_mod_p(3, &[c0, c1, 1]) {
                    found.push((c1, c0));
                }
            }
        }
        assert_eq!(found, vec![(0, 1), (1, 2), (2, 2)]);
    }

    #[test]
    fn irreducibility_agrees_with_root_count_for_cubics_mod_5() {
        let fp = ResidueField::prime(5);
        for c in 0..125u64 {
            let poly = [c % 5, (c / 5) % 5, c / 25, 1];
            let as_res: Vec<ResidueElement> = poly.iter().map(|&x| vec![x]).collect();
            let has_root = !brute_roots(&fp, &as_res).is_empty();
            assert_eq!(is_irreducible_mod_p(5, &poly), !has_root, "{poly:?}");
        }
    }

    #[test]
    fn root_finding_matches_enumeration_in_f9() {
        let k = ResidueField::new(3, vec![1, 0]);
        let x = k.generator();
        // X^8 - 1 splits completely, X^4 + 1 has the four elements of order 8.
        let mut x8 = vec![k.zero(); 9];
        x8[0] = k.neg(&k.one());
        x8[8] = k.one();
        assert_eq!(k.poly_roots(&x8), brute_roots(&k, &x8));
        assert_eq!(k.poly_roots(&x8).len(), 8);
        let mut x4 = vec![k.zero(); 5];
        x4[0] = k.one();
        x4[4] = k.one();
        let r = k.poly_roots(&x4);
        assert_eq!(r, brute_roots(&k, &x4));
        assert!(r.iter().all(|z| k.multiplicative_order(z) == 8));
        // (X - t)^2 (X + 1)
        let lin = vec![k.neg(&x), k.one()];
        let sq = k.poly_mul(&lin, &lin);
        let p = k.poly_mul(&sq, &[k.one(), k.one()]);
        assert!(!k.poly_is_separable(&p));
        assert_eq!(k.poly_roots(&p), brute_roots(&k, &p));
    }

    #[test]
    fn order_and_primitive_elements() {
        let k = ResidueField::new(3, vec![1, 0]);
        let g = k.primitive_element();
        assert_eq!(k.multiplicative_order(&g), 8);
        assert_eq!(order_mod(3, 64), 16);
        assert_eq!(order_mod(3, 4), 2);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(16), vec![1, 2, 4, 8, 16]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
