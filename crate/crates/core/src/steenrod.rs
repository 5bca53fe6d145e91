//! Cup products, cup-i products and Steenrod squares on simplicial cochains.
//!
//! The cup product is the Alexander–Whitney front-face/back-face product.
//! The cup-i products are computed mod 2 from the interval-cut description:
//! for an `n`-simplex and each subset `U ⊂ {0..n}` of size `n − i`, written
//! `u_1 < … < u_{n−i}`, the left factor drops the `u_j` with `u_j + j` even
//! and the right factor drops those with `u_j + j` odd.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::simplicial::{Cochain, SimplicialComplex, SimplicialError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("cup-{i} undefined for degrees ({p}, {q})")]
    IndexOutOfRange { i: usize, p: usize, q: usize },
    #[error("cup-i products are computed mod 2, got modulus {0}")]
    NotModTwo(u64),
}

pub fn cup(complex: &SimplicialComplex, x: &Cochain, y: &Cochain) -> Result<Cochain, SteenrodError> {
    x.check(complex)?;
    y.check(complex)?;
    if x.modulus() != y.modulus() {
        return Err(SimplicialError::ModulusMismatch(x.modulus(), y.modulus()).into());
    }
    let (p, q) = (x.degree(), y.degree());
    let values = complex
        .simplices(p + q)
        .iter()
        .map(|s| x.value_at(complex, &s[..=p]) * y.value_at(complex, &s[p..]))
        .collect();
    Ok(Cochain::new(complex, p + q, x.modulus(), values))
}

pub fn cup_i(complex: &SimplicialComplex, x: &Cochain, y: &Cochain, i: usize) -> Result<Cochain, SteenrodError> {
    x.check(complex)?;
    y.check(complex)?;
    for m in [x.modulus(), y.modulus()] {
        if m != 2 {
            return Err(SteenrodError::NotModTwo(m));
        }
    }
    let (p, q) = (x.degree(), y.degree());
    if i > p.min(q) {
        return Err(SteenrodError::IndexOutOfRange { i, p, q });
    }
    let n = p + q - i;
    let subsets = subsets_of_size(n + 1, n - i);
    let values = complex
        .simplices(n)
        .iter()
        .map(|s| {
            let mut acc = 0u8;
            for u in &subsets {
                let (mut left, mut right) = (Vec::with_capacity(p + 1), Vec::with_capacity(q + 1));
                let mut drop_left = vec![false; n + 1];
                let mut drop_right = vec![false; n + 1];
                for (j, &uj) in u.iter().enumerate() {
                    if (uj + j + 1) % 2 == 0 {
                        drop_left[uj] = true;
                    } else {
                        drop_right[uj] = true;
                    }
                }
                for k in 0..=n {
                    if !drop_left[k] {
                        left.push(s[k]);
                    }
                    if !drop_right[k] {
                        right.push(s[k]);
                    }
                }
                if left.len() != p + 1 || right.len() != q + 1 {
                    continue;
                }
                let a = x.value_at(complex, &left);
                if a.is_zero() {
                    continue;
                }
                let b = y.value_at(complex, &right);
                if !b.is_zero() {
                    acc ^= 1;
                }
            }
            BigInt::from(acc)
        })
        .collect();
    Ok(Cochain::new(complex, n, 2, values))
}

/// `Sq^k(z) = z ∪_{q−k} z` on a mod-2 cochain of degree `q`; zero when `k > q`.
pub fn sq_cochain(complex: &SimplicialComplex, z: &Cochain, k: usize) -> Result<Cochain, SteenrodError> {
    let q = z.degree();
    if k > q {
        return Ok(Cochain::zero(complex, q + k, 2));
    }
    cup_i(complex, z, z, q - k)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
