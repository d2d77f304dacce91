//! Deciding whether an element of a radical extension lies in the span of a
//! basis, by row reduction over `Z/p^M`.

use dashu_int::fast_div::ConstDivisor;
use dashu_int::UBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::tame_ext::{TameExt, TeElem};
use crate::unramified::{RingEmbedding, UrElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `x = Σ_j coords[j]·basis[j]` modulo `p^precision`.
    Member { coords: Vec<UrElem>, precision: u32 },
    /// After elimination, equation `row` reads `0 = r` with `v_p(r) = valuation`.
    NotInSpan { row: usize, valuation: u32, margin: u32, precision: u32 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn coords(&self) -> Option<&[UrElem]> {
        match self {
            Membership::Member { coords, .. } => Some(coords),
            Membership::NotInSpan { .. } => None,
        }
    }
}

/// Serializable view of a [`Membership`] outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipSummary {
    pub member: bool,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_valuation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<u32>,
}

impl From<&Membership> for MembershipSummary {
    fn from(m: &Membership) -> Self {
        match m {
            Membership::Member { precision, .. } => {
                MembershipSummary { member: true, precision: *precision, obstruction_valuation: None, margin: None }
            }
            Membership::NotInSpan { valuation, margin, precision, .. } => MembershipSummary {
                member: false,
                precision: *precision,
                obstruction_valuation: Some(*valuation),
                margin: Some(*margin),
            },
        }
    }
}

/// Outcome of solving `A x = b` over `Z/p^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Solution { x: Vec<UBig>, precision: u32 },
    Obstruction { row: usize, valuation: u32, precision: u32 },
}

fn vp(x: &UBig, p: u64, m: u32) -> u32 {
    if *x == UBig::ZERO {
        return m;
    }
    let mut v = 0;
    let mut y = x.clone();
    while v < m && (&y % p) == 0 {
        y /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: &UBig, modulus: &ConstDivisor) -> UBig {
    modulus.reduce(a.clone()).inv().expect("pivot is a unit").residue()
}

/// Solve `A x = b` modulo `p^m` with valuation-minimal full pivoting.
///
/// Columns that never receive a pivot are free and set to zero. The returned
/// precision drops by the largest pivot valuation.
pub fn solve_mod_prime_power(p: u64, m: u32, a: &[Vec<UBig>], b: &[UBig]) -> Solve {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let modulus = UBig::from(p).pow(m as usize);
    let divisor = ConstDivisor::new(modulus.clone());
    let mut a: Vec<Vec<UBig>> = a.iter().map(|r| r.iter().map(|x| x % &modulus).collect()).collect();
    let mut b: Vec<UBig> = b.iter().map(|x| x % &modulus).collect();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<(u32, UBig)> = Vec::new();
    let sub = |x: &UBig, y: &UBig| if x >= y { x - y } else { x + &modulus - y };
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let v = vp(&a[i][j], p, m);
                if v < m && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break;
                    }
                }
            }
            if best.map_or(false, |b| b.0 == 0) {
                break;
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(r, i);
        b.swap(r, i);
        if j != r {
            for row in a.iter_mut() {
                row.swap(r, j);
            }
            perm.swap(r, j);
        }
        let pv = UBig::from(p).pow(v as usize);
        let unit = &a[r][r] / &pv;
        let uinv = inverse_mod(&unit, &divisor);
        for i in r + 1..rows {
            if a[i][r] == UBig::ZERO {
                continue;
            }
            let factor = (&a[i][r] / &pv * &uinv) % &modulus;
            for c in r..cols {
                let t = (&factor * &a[r][c]) % &modulus;
                a[i][c] = sub(&a[i][c], &t);
            }
            let t = (&factor * &b[r]) % &modulus;
            b[i] = sub(&b[i], &t);
        }
        pivots.push((v, uinv));
        r += 1;
    }
    let vmax = pivots.iter().map(|(v, _)| *v).max().unwrap_or(0);
    let prec = m - vmax;
    let pm = UBig::from(p).pow(prec as usize);
    // the least leftover valuation does not depend on the pivot order
    if let Some((w, i)) = (r..rows).map(|i| (vp(&b[i], p, m), i)).min() {
        if w < prec {
            return Solve::Obstruction { row: i, valuation: w, precision: prec };
        }
    }
    let mut x = vec![UBig::ZERO; cols];
    for k in (0..r).rev() {
        let mut s = b[k].clone();
        for j in k + 1..r {
            let t = (&a[k][j] * &x[j]) % &modulus;
            s = sub(&s, &t);
        }
        let (v, uinv) = &pivots[k];
        let w = vp(&s, p, m);
        if w < *v {
            return Solve::Obstruction { row: k, valuation: w, precision: prec };
        }
        let pv = UBig::from(p).pow(*v as usize);
        x[k] = (&s / &pv * uinv) % &modulus;
    }
    let mut out = vec![UBig::ZERO; cols];
    for (k, &c) in perm.iter().enumerate() {
        out[c] = &x[k] % &pm;
    }
    Solve::Solution { x: out, precision: prec }
}

/// Coordinates of `x` against `basis` over a coefficient ring `C ⊆ B`,
/// where `B` is the base of `ext` and `coeff` embeds `C` into it.
///
/// Refuses to report a non-member when the obstruction sits within two
/// digits of the surviving precision.
pub fn membership(ext: &TameExt, x: &TeElem, basis: &[TeElem], coeff: &RingEmbedding) -> Result<Membership> {
    let b = ext.base();
    if !coeff.dst().same_field(b) || coeff.dst().precision() != b.precision() {
        return Err(Error::RingMismatch("coefficient ring does not embed into the extension's base".into()));
    }
    let e = ext.e() as u32;
    let p = b.p();
    let min_prec = basis.iter().chain(std::iter::once(x)).map(TeElem::precision).min().unwrap_or(0);
    let m = (min_prec / e).min(b.precision());
    let c = coeff.src();
    let fc = c.degree();
    let fb = b.degree();
    // column (j, l): coordinates of θ^l · basis[j]
    let theta = coeff.generator_image();
    let mut theta_pows = vec![b.one()];
    for _ in 1..fc {
        theta_pows.push(b.mul(theta_pows.last().unwrap(), &theta));
    }
    let columns: Vec<Vec<UBig>> = basis
        .iter()
        .flat_map(|v| theta_pows.iter().map(move |t| ext.scale(v, t)))
        .map(|v| flatten(&v, fb))
        .collect();
    let rows = e as usize * fb;
    let matrix: Vec<Vec<UBig>> = (0..rows).map(|r| columns.iter().map(|col| col[r].clone()).collect()).collect();
    let rhs = flatten(x, fb);
    match solve_mod_prime_power(p, m, &matrix, &rhs) {
        Solve::Solution { x: sol, precision } => {
            let coords: Vec<UrElem> = sol.chunks(fc).map(|ch| c.from_coeffs(ch.to_vec())).collect();
            // recombine as a check
            let back = basis
                .iter()
                .zip(&coords)
                .fold(ext.zero(), |acc, (v, k)| ext.add(&acc, &ext.scale(v, &coeff.apply(k))));
            let diff = ext.sub(&back, x);
            let pm = UBig::from(p).pow(precision as usize);
            if diff.coordinates().iter().any(|d| d.coeffs().iter().any(|u| u % &pm != UBig::ZERO)) {
                return Err(Error::PrecisionExhausted("recombined coordinates do not reproduce the element".into()));
            }
            Ok(Membership::Member { coords, precision })
        }
        Solve::Obstruction { row, valuation, precision } => {
            if valuation + 2 > precision {
                return Err(Error::PrecisionTooLowToDecide { valuation, precision });
            }
            Ok(Membership::NotInSpan { row, valuation, margin: precision - valuation, precision })
        }
    }
}

fn flatten(v: &TeElem, fb: usize) -> Vec<UBig> {
    let mut out = Vec::with_capacity(v.coordinates().len() * fb);
    for c in v.coordinates() {
        out.extend(c.coeffs().iter().cloned());
        out.extend(std::iter::repeat(UBig::ZERO).take(fb - c.coeffs().len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unramified::{embed_subring, make_unramified_ring};
    use crate::tame_ext::TameExt;

    fn u(x: u64) -> UBig {
        UBig::from(x)
    }

    #[test]
    fn small_systems() {
        // 2x = 4 mod 27 has x = 2; 3x = 1 has no integral solution
        assert_eq!(
            solve_mod_prime_power(3, 3, &[vec![u(2)]], &[u(4)]),
            Solve::Solution { x: vec![u(2)], precision: 3 }
        );
        assert!(matches!(
            solve_mod_prime_power(3, 3, &[vec![u(3)]], &[u(1)]),
            Solve::Obstruction { valuation: 0, .. }
        ));
        // [[1,1],[1,2]] x = [3,5] -> (1,2)
        let s = solve_mod_prime_power(5, 4, &[vec![u(1), u(1)], vec![u(1), u(2)]], &[u(3), u(5)]);
        assert_eq!(s, Solve::Solution { x: vec![u(1), u(2)], precision: 4 });
    }

    #[test]
    fn sqrt3_over_gaussian_integers() {
        // Z_9 = Z_3[i], L = Z_9(Π), Π^2 = -3; √3 = iΠ
        let b = make_unramified_ring(3, 2, 10).unwrap();
        let ext = TameExt::from_unit(&b, 2, b.from_int(-1)).unwrap();
        let i = b.generator();
        let sqrt3 = ext.scale(&ext.pi(), &i);
        assert!(ext.equal(&ext.pow(&sqrt3, 2), &ext.from_int(3)));
        let basis = vec![ext.one(), ext.pi()];
        let over_b = crate::unramified::RingEmbedding::identity(b.clone());
        let m = membership(&ext, &sqrt3, &basis, &over_b).unwrap();
        assert_eq!(m.coords().unwrap(), &[b.zero(), i.clone()]);
        let z3 = make_unramified_ring(3, 1, 10).unwrap();
        let over_z3 = embed_subring(&z3, &b).unwrap();
        match membership(&ext, &sqrt3, &basis, &over_z3).unwrap() {
            Membership::NotInSpan { valuation, margin, .. } => {
                assert_eq!(valuation, 0);
                assert_eq!(margin, 10);
            }
            other => panic!("{other:?}"),
        }
        // a basis element is a unit vector
        let m = membership(&ext, &ext.pi(), &basis, &over_z3).unwrap();
        assert_eq!(m.coords().unwrap(), &[z3.zero(), z3.one()]);
    }

    #[test]
    fn near_precision_obstruction_is_undecided() {
        let b = make_unramified_ring(3, 1, 6).unwrap();
        let ext = TameExt::from_unit(&b, 2, b.one()).unwrap();
        // x = 3^5 Π is zero modulo p^6 only to within one digit of the span {1}
        let x = ext.scale(&ext.pi(), &b.from_int(243));
        let id = crate::unramified::RingEmbedding::identity(b.clone());
        assert!(matches!(
            membership(&ext, &x, &[ext.one()], &id),
            Err(Error::PrecisionTooLowToDecide { valuation: 5, precision: 6 })
        ));
    }
}
