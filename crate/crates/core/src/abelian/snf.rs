use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::AbelianError;

/// Smith normal form `U·A·V = S` with unimodular `U`, `V`.
///
/// `u_inv` is carried along so that generators of cokernels can be read off
/// without a separate inversion.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // Row op helpers keep U and U^{-1} in lockstep.
    let row_add = |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst, src, k: &BigInt| {
        s.add_row_multiple(dst, src, k);
        u.add_row_multiple(dst, src, k);
        ui.add_col_multiple(src, dst, &-k);
    };
    let row_swap = |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a, b| {
        s.swap_rows(a, b);
        u.swap_rows(a, b);
        ui.swap_cols(a, b);
    };

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero |entry| in the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let e = &s[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(s, u, u_inv, v);
            };
            row_swap(&mut s, &mut u, &mut u_inv, t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_add(&mut s, &mut u, &mut u_inv, i, t, &-q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(i) => row_add(&mut s, &mut u, &mut u_inv, t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(s, u, u_inv, v)
}

fn finish(s: IntMatrix, u: IntMatrix, u_inv: IntMatrix, v: IntMatrix) -> SnfResult {
    SnfResult { u, u_inv, s, v }
}

/// Cached SNF of a matrix for repeated solves of `A·x = b`.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    snf: SnfResult,
}

impl LinearSolver {
    pub fn new(a: &IntMatrix) -> Self {
        Self {
            snf: smith_normal_form(a),
        }
    }

    pub fn rows(&self) -> usize {
        self.snf.s.rows()
    }

    /// Integer solution of `A·x = b`, or `None` when there is none.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, AbelianError> {
        let (m, n) = self.snf.s.shape();
        if b.len() != m {
            return Err(AbelianError::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        let c = self.snf.u.mul_vec(b);
        let factors = self.snf.invariant_factors();
        let mut y = vec![BigInt::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            match factors.get(i) {
                Some(d) => {
                    let (q, r) = ci.div_rem(d);
                    if !r.is_zero() {
                        return Ok(None);
                    }
                    y[i] = q;
                }
                None if !ci.is_zero() => return Ok(None),
                None => {}
            }
        }
        Ok(Some(self.snf.v.mul_vec(&y)))
    }
}

/// Solves `A·x ≡ b (mod modulus)`; `modulus = 0` means over the integers.
///
/// Solutions modulo a positive modulus are returned reduced into `[0, modulus)`.
pub fn solve_linear(
    a: &IntMatrix,
    b: &[BigInt],
    modulus: &BigInt,
) -> Result<Option<Vec<BigInt>>, AbelianError> {
    if b.len() != a.rows() {
        return Err(AbelianError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    if modulus.is_zero() {
        return LinearSolver::new(a).solve(b);
    }
    let m = modulus.abs();
    let aug = a.hstack(&IntMatrix::identity(a.rows()).scale(&m));
    Ok(LinearSolver::new(&aug).solve(b)?.map(|x| {
        x[..a.cols()].iter().map(|v| v.mod_floor(&m)).collect()
    }))
}

/// Columns form a basis of `{x : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<usize> = (r..a.cols()).collect();
    snf.v.select_columns(&cols)
}

/// Columns form a basis of the lattice spanned by the columns of `g`.
pub fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    let r = snf.rank();
    let gv = g * &snf.v;
    gv.select_columns(&(0..r).collect::<Vec<_>>())
}
