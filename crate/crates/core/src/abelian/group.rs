use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::{kernel_basis, lattice_basis, smith_normal_form, LinearSolver};
use super::AbelianError;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` presented
/// as a quotient of an ambient lattice `Z^n` by the column span of a relation
/// matrix.
///
/// Elements are written in canonical coordinates: free coordinates first,
/// then one coordinate per invariant factor, reduced into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbGroup {
    relations: IntMatrix,
    free_rank: usize,
    torsion: Vec<BigInt>,
    /// ambient × ngens: generator columns in ambient coordinates.
    basis_map: IntMatrix,
    /// ngens × ambient: ambient vector to unreduced canonical coordinates.
    coord_map: IntMatrix,
}

impl FgAbGroup {
    /// `Z^n / colspan(relations)`, where `n = relations.rows()`.
    pub fn cokernel(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let n = relations.rows();
        let factors = snf.invariant_factors();
        let torsion_idx: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_one()).collect();
        let mut order: Vec<usize> = (factors.len()..n).collect();
        order.extend(&torsion_idx);
        Self {
            relations: relations.clone(),
            free_rank: n - factors.len(),
            torsion: torsion_idx.iter().map(|&i| factors[i].clone()).collect(),
            basis_map: snf.u_inv.select_columns(&order),
            coord_map: snf.u.select_rows(&order),
        }
    }

    /// The group with the given invariants, presented on its own generators.
    pub fn from_invariants(free_rank: usize, torsion: &[BigInt]) -> Result<Self, AbelianError> {
        for (i, d) in torsion.iter().enumerate() {
            if d <= &BigInt::one() {
                return Err(AbelianError::InvalidInvariantFactors(format!(
                    "torsion coefficient {d} must exceed 1"
                )));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(AbelianError::InvalidInvariantFactors(format!(
                    "{} does not divide {d}",
                    torsion[i - 1]
                )));
            }
        }
        let n = free_rank + torsion.len();
        let mut relations = IntMatrix::zeros(n, torsion.len());
        for (i, d) in torsion.iter().enumerate() {
            relations[(free_rank + i, i)] = d.clone();
        }
        Ok(Self {
            relations,
            free_rank,
            torsion: torsion.to_vec(),
            basis_map: IntMatrix::identity(n),
            coord_map: IntMatrix::identity(n),
        })
    }

    pub fn free(rank: usize) -> Self {
        Self::from_invariants(rank, &[]).expect("free group has no torsion")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => Self::free(1),
            1 => Self::trivial(),
            d => Self::from_invariants(0, &[BigInt::from(d)]).unwrap(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn basis_map(&self) -> &IntMatrix {
        &self.basis_map
    }

    pub fn coord_map(&self) -> &IntMatrix {
        &self.coord_map
    }

    /// Order of each canonical generator; `0` marks a free generator.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    /// Reduces torsion coordinates into `[0, d_i)`.
    pub fn canonicalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.ngens(), "coordinate length mismatch");
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| match i.checked_sub(self.free_rank) {
                Some(t) => c.mod_floor(&self.torsion[t]),
                None => c.clone(),
            })
            .collect()
    }

    pub fn from_i64(&self, coords: &[i64]) -> Vec<BigInt> {
        let v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.canonicalize(&v)
    }

    pub fn is_zero(&self, coords: &[BigInt]) -> bool {
        self.canonicalize(coords).iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.canonicalize(&s)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.canonicalize(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.scale(&BigInt::from(-1), a)
    }

    /// Canonical coordinates of an ambient vector.
    pub fn reduce_ambient(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.canonicalize(&self.coord_map.mul_vec(x))
    }

    /// An ambient representative of canonical coordinates.
    pub fn lift_to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis_map.mul_vec(coords)
    }

    /// Diagonal relation matrix in canonical coordinates (one column per
    /// torsion generator).
    pub fn canonical_relations(&self) -> IntMatrix {
        let n = self.ngens();
        let mut r = IntMatrix::zeros(n, self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            r[(self.free_rank + i, i)] = d.clone();
        }
        r
    }

    /// Whether `x` lies in the subgroup generated by `gens` (canonical coordinates).
    pub fn in_span(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> bool {
        self.express_in_span(gens, x).is_some()
    }

    /// Integer coefficients `c` with `Σ c_j gens_j = x`, when they exist.
    pub fn express_in_span(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.ngens();
        let g = IntMatrix::from_columns(n, gens).hstack(&self.canonical_relations());
        let sol = LinearSolver::new(&g).solve(x).expect("dimension checked by construction")?;
        Some(sol[..gens.len()].to_vec())
    }

    /// Isomorphism type of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<BigInt>]) -> FgAbGroup {
        let n = self.ngens();
        let s = gens.len();
        let g = IntMatrix::from_columns(n, gens).hstack(&self.canonical_relations());
        let k = kernel_basis(&g);
        let rel = k.select_rows(&(0..s).collect::<Vec<_>>());
        FgAbGroup::cokernel(&rel)
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut c = BigInt::zero();
                while &c < d {
                    let mut e = prefix.clone();
                    e.push(c.clone());
                    next.push(e);
                    c += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Additive order of an element (`0` for infinite order).
    pub fn element_order(&self, x: &[BigInt]) -> BigInt {
        let x = self.canonicalize(x);
        if x[..self.free_rank].iter().any(|c| !c.is_zero()) {
            return BigInt::zero();
        }
        x[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .fold(BigInt::one(), |acc, (c, d)| {
                let o = d / c.gcd(d);
                acc.lcm(&o)
            })
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// A subquotient `N / D` of some outer lattice `Z^n`, where `N` is a full
/// sublattice basis and `D ⊂ N`. Keeps the map back to outer coordinates so
/// that elements retain explicit representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbGroup,
    /// n × r: basis of the numerator lattice.
    pub lattice: IntMatrix,
    solver: LinearSolver,
}

impl Subquotient {
    /// Builds `span(numerator) / span(denominator)`; both given as generator
    /// columns in outer coordinates.
    pub fn new(numerator: &IntMatrix, denominator: &IntMatrix) -> Result<Self, AbelianError> {
        let lattice = lattice_basis(numerator);
        let solver = LinearSolver::new(&lattice);
        let r = lattice.cols();
        let mut rel_cols = Vec::with_capacity(denominator.cols());
        for col in denominator.columns() {
            let y = solver.solve(&col)?.ok_or(AbelianError::NotInSubgroup)?;
            rel_cols.push(y);
        }
        let rel = IntMatrix::from_columns(r, &rel_cols);
        Ok(Self {
            group: FgAbGroup::cokernel(&rel),
            lattice,
            solver,
        })
    }

    /// Outer-coordinate representative of canonical coordinates.
    pub fn to_outer(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.lattice.mul_vec(&self.group.lift_to_ambient(coords))
    }

    /// Canonical coordinates of an outer vector, or `None` when it is not in
    /// the numerator lattice.
    pub fn from_outer(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>, AbelianError> {
        Ok(self.solver.solve(x)?.map(|y| self.group.reduce_ambient(&y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cokernel_examples() {
        let g = FgAbGroup::cokernel(&IntMatrix::from_i64(1, 1, &[2]));
        assert_eq!(g.to_string(), "Z/2");
        let g = FgAbGroup::cokernel(&IntMatrix::zeros(3, 0));
        assert_eq!(g.to_string(), "Z^3");
        let g = FgAbGroup::cokernel(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(g.to_string(), "Z/6");
        assert_eq!(g.order(), Some(BigInt::from(6)));
    }

    #[test]
    fn mixed_presentation() {
        // Z^3 / <(2,0,0), (0,4,0)> = Z ⊕ Z/2 ⊕ Z/4
        let a = IntMatrix::from_i64(3, 2, &[2, 0, 0, 4, 0, 0]);
        let g = FgAbGroup::cokernel(&a);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &ints(&[2, 4])[..]);
        // Relation columns reduce to zero.
        for col in a.columns() {
            assert!(g.is_zero(&g.reduce_ambient(&col)));
        }
        // Generators round trip through the ambient lattice.
        for i in 0..g.ngens() {
            let e = g.generator(i);
            assert_eq!(g.reduce_ambient(&g.lift_to_ambient(&e)), e);
        }
    }

    #[test]
    fn invariants_are_validated() {
        assert!(FgAbGroup::from_invariants(0, &ints(&[2, 3])).is_err());
        assert!(FgAbGroup::from_invariants(0, &ints(&[1])).is_err());
        assert!(FgAbGroup::from_invariants(1, &ints(&[2, 6])).is_ok());
    }

    #[test]
    fn element_orders_and_enumeration() {
        let g = FgAbGroup::from_invariants(0, &ints(&[2, 4])).unwrap();
        assert_eq!(g.elements().unwrap().len(), 8);
        assert_eq!(g.element_order(&ints(&[1, 2])), BigInt::from(2));
        assert_eq!(g.element_order(&ints(&[0, 1])), BigInt::from(4));
        assert_eq!(g.element_order(&ints(&[0, 0])), BigInt::from(1));
    }

    #[test]
    fn subgroup_and_span() {
        let g = FgAbGroup::from_invariants(1, &ints(&[4])).unwrap();
        let gens = vec![ints(&[2, 0]), ints(&[0, 2])];
        let h = g.subgroup(&gens);
        assert_eq!(h.to_string(), "Z ⊕ Z/2");
        assert!(g.in_span(&gens, &ints(&[4, 2])));
        assert!(!g.in_span(&gens, &ints(&[1, 0])));
        assert!(!g.in_span(&gens, &ints(&[0, 1])));
    }

    #[test]
    fn subquotient_round_trip() {
        // 2Z ⊕ Z modulo (4, 0) → Z/2 ⊕ Z in the lattice basis.
        let num = IntMatrix::from_i64(2, 2, &[2, 0, 0, 1]);
        let den = IntMatrix::from_i64(2, 1, &[4, 0]);
        let sq = Subquotient::new(&num, &den).unwrap();
        assert_eq!(sq.group.to_string(), "Z ⊕ Z/2");
        for i in 0..sq.group.ngens() {
            let e = sq.group.generator(i);
            let outer = sq.to_outer(&e);
            assert_eq!(sq.from_outer(&outer).unwrap(), Some(e));
        }
        assert_eq!(sq.from_outer(&ints(&[1, 0])).unwrap(), None);
        assert!(Subquotient::new(&num, &IntMatrix::from_i64(2, 1, &[1, 0])).is_err());
    }

    #[test]
    fn negative_coordinates_canonicalize() {
        let g = FgAbGroup::cyclic(6);
        assert_eq!(g.from_i64(&[-1]), ints(&[5]));
        assert_eq!(g.torsion_exponent(), BigInt::from(6));
        assert_eq!(g.neg(&ints(&[2])), ints(&[4]));
    }
}
