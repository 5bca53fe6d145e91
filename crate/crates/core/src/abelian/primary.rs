use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::group::FgAbGroup;
use super::matrix::IntMatrix;

/// A cyclic summand `Z/p^e` of a primary decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimarySummand {
    pub prime: BigInt,
    pub exponent: u32,
}

impl PrimarySummand {
    pub fn order(&self) -> BigInt {
        num_traits::pow(self.prime.clone(), self.exponent as usize)
    }
}

/// `G ≅ Z^r ⊕ ⊕ Z/p^e`, with change-of-basis matrices on canonical
/// coordinates. Decomposed coordinates list the free generators first, then
/// one coordinate per primary summand.
#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub free_rank: usize,
    pub summands: Vec<PrimarySummand>,
    /// G.ngens × (free_rank + summands): decomposed generators in G.
    pub to_group: IntMatrix,
    /// (free_rank + summands) × G.ngens: G generators in decomposed coordinates.
    pub from_group: IntMatrix,
}

impl PrimaryDecomposition {
    pub fn len(&self) -> usize {
        self.free_rank + self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Order of each decomposed generator, `0` for free ones.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.summands.iter().map(PrimarySummand::order));
        v
    }

    pub fn canonicalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .zip(self.orders())
            .map(|(c, d)| if d.is_zero() { c.clone() } else { c.mod_floor(&d) })
            .collect()
    }
}

pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

pub fn primary_decompose(g: &FgAbGroup) -> PrimaryDecomposition {
    let free = g.free_rank();
    let mut summands = Vec::new();
    // (torsion generator index, summand index, cofactor d/p^e, CRT coefficient)
    let mut links = Vec::new();
    for (t, d) in g.torsion().iter().enumerate() {
        for (p, e) in factorize(d) {
            let pe = num_traits::pow(p.clone(), e as usize);
            let cofactor = d / &pe;
            let crt = mod_inverse(&cofactor.mod_floor(&pe), &pe);
            links.push((free + t, free + summands.len(), cofactor, crt));
            summands.push(PrimarySummand { prime: p, exponent: e });
        }
    }
    let n = free + summands.len();
    let mut to_group = IntMatrix::zeros(g.ngens(), n);
    let mut from_group = IntMatrix::zeros(n, g.ngens());
    for i in 0..free {
        to_group[(i, i)] = BigInt::one();
        from_group[(i, i)] = BigInt::one();
    }
    for (gen, summand, cofactor, crt) in links {
        to_group[(gen, summand)] = cofactor;
        from_group[(summand, gen)] = crt;
    }
    PrimaryDecomposition {
        free_rank: free,
        summands,
        to_group,
        from_group,
    }
}

/// 2-adic valuation of a positive integer.
pub fn two_adic_valuation(n: &BigInt) -> u32 {
    if n.is_zero() {
        return 0;
    }
    n.trailing_zeros().and_then(|z| z.to_u32()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summands(g: &FgAbGroup) -> Vec<(i64, u32)> {
        let mut v: Vec<(i64, u32)> = primary_decompose(g)
            .summands
            .iter()
            .map(|s| (s.prime.to_i64().unwrap(), s.exponent))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn z6_splits_by_crt() {
        assert_eq!(summands(&FgAbGroup::cyclic(6)), vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn free_group_has_no_summands() {
        let d = primary_decompose(&FgAbGroup::free(2));
        assert_eq!(d.free_rank, 2);
        assert!(d.summands.is_empty());
    }

    #[test]
    fn already_primary() {
        let g = FgAbGroup::from_invariants(0, &[BigInt::from(2), BigInt::from(4)]).unwrap();
        assert_eq!(summands(&g), vec![(2, 1), (2, 2)]);
    }

    #[test]
    fn round_trip_on_z12_z360() {
        let g = FgAbGroup::from_invariants(1, &[BigInt::from(12), BigInt::from(360)]).unwrap();
        let d = primary_decompose(&g);
        for i in 0..g.ngens() {
            let e = g.generator(i);
            let back = g.canonicalize(&d.to_group.mul_vec(&d.from_group.mul_vec(&e)));
            assert_eq!(back, e);
        }
        for i in 0..d.len() {
            let mut e = vec![BigInt::zero(); d.len()];
            e[i] = BigInt::one();
            let back = d.canonicalize(&d.from_group.mul_vec(&d.to_group.mul_vec(&e)));
            assert_eq!(back, e);
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(two_adic_valuation(&BigInt::from(8)), 3);
        assert_eq!(two_adic_valuation(&BigInt::from(12)), 2);
        assert_eq!(two_adic_valuation(&BigInt::from(5)), 0);
    }
}
