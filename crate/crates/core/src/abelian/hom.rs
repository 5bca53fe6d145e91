use num_bigint::BigInt;
use num_traits::Zero;

use super::group::FgAbGroup;
use super::matrix::IntMatrix;
use super::snf::{kernel_basis, lattice_basis};
use super::AbelianError;

/// A homomorphism between finitely generated abelian groups, stored as an
/// integer matrix acting on canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Validates shape and torsion compatibility: every torsion generator of
    /// order `d` must map to an element killed by `d`.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(AbelianError::ShapeMismatch {
                expected: (target.ngens(), source.ngens()),
                found: matrix.shape(),
            });
        }
        for (i, d) in source.generator_orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let col = matrix.column(i);
            if !target.is_zero(&target.scale(d, &col)) {
                return Err(AbelianError::TorsionViolation { generator: i, order: d.clone() });
            }
        }
        // Store reduced columns so equal maps compare equal.
        let cols: Vec<Vec<BigInt>> = matrix.columns().map(|c| target.canonicalize(&c)).collect();
        let matrix = IntMatrix::from_columns(target.ngens(), &cols);
        Ok(Self { source, target, matrix })
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.ngens(), source.ngens());
        Self { source, target, matrix }
    }

    pub fn identity(group: FgAbGroup) -> Self {
        let matrix = IntMatrix::identity(group.ngens());
        Self {
            source: group.clone(),
            target: group,
            matrix,
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.canonicalize(&self.matrix.mul_vec(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, AbelianError> {
        if !inner.target.isomorphic(&self.source) || inner.target.ngens() != self.source.ngens() {
            return Err(AbelianError::ShapeMismatch {
                expected: (self.source.ngens(), 0),
                found: (inner.target.ngens(), 0),
            });
        }
        GroupHom::new(inner.source.clone(), self.target.clone(), &self.matrix * &inner.matrix)
    }

    pub fn scale(&self, k: &BigInt) -> GroupHom {
        GroupHom::new(self.source.clone(), self.target.clone(), self.matrix.scale(k))
            .expect("multiples of a valid hom are valid")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Relation lattice of the image: `{y : M·y ∈ relations of target}` as a
    /// column basis.
    fn preimage_of_zero_lattice(&self) -> IntMatrix {
        let s = self.source.ngens();
        let stacked = self.matrix.hstack(&self.target.canonical_relations());
        let k = kernel_basis(&stacked);
        lattice_basis(&k.select_rows(&(0..s).collect::<Vec<_>>()))
    }

    /// Cokernel of the map, with the quotient map from the target.
    pub fn cokernel(&self) -> (FgAbGroup, GroupHom) {
        let stacked = self.matrix.hstack(&self.target.canonical_relations());
        let coker = FgAbGroup::cokernel(&stacked);
        let quotient = GroupHom::new(self.target.clone(), coker.clone(), coker.coord_map().clone())
            .expect("target relations are part of the cokernel presentation");
        (coker, quotient)
    }

    /// Isomorphism type of the image.
    pub fn image(&self) -> FgAbGroup {
        FgAbGroup::cokernel(&self.preimage_of_zero_lattice())
    }

    /// Kernel as a group, together with generators in source coordinates
    /// (one per canonical kernel generator).
    pub fn kernel(&self) -> (FgAbGroup, Vec<Vec<BigInt>>) {
        let lattice = self.preimage_of_zero_lattice();
        let sq = super::group::Subquotient::new(&lattice, &self.source.canonical_relations())
            .expect("source relations lie in the kernel lattice");
        let gens = (0..sq.group.ngens())
            .map(|i| self.source.canonicalize(&sq.to_outer(&sq.group.generator(i))))
            .collect();
        (sq.group, gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    /// Some `x` with `f(x) = y`, if one exists.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let gens: Vec<Vec<BigInt>> = self.matrix.columns().collect();
        self.target
            .express_in_span(&gens, y)
            .map(|x| self.source.canonicalize(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn times_two_on_z() {
        let z = FgAbGroup::free(1);
        let f = GroupHom::new(z.clone(), z, IntMatrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(f.cokernel().0.to_string(), "Z/2");
        assert!(f.is_injective());
        assert!(!f.is_surjective());
    }

    #[test]
    fn zero_map_cokernel_is_target() {
        let f = GroupHom::zero(FgAbGroup::free(1), FgAbGroup::cyclic(4));
        let (c, q) = f.cokernel();
        assert_eq!(c.to_string(), "Z/4");
        assert!(q.is_surjective());
        assert!(q.is_injective());
    }

    #[test]
    fn diagonal_two_b() {
        for b in 1..4i64 {
            let z2 = FgAbGroup::free(2);
            let f = GroupHom::new(z2.clone(), z2, IntMatrix::diagonal(&[2 * b, 2 * b])).unwrap();
            let expect = FgAbGroup::cokernel(&IntMatrix::diagonal(&[2 * b, 2 * b]));
            assert!(f.cokernel().0.isomorphic(&expect));
        }
    }

    #[test]
    fn torsion_violation_rejected() {
        // Z/2 → Z/4 sending the generator to 1 is not well defined.
        let r = GroupHom::new(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), IntMatrix::from_i64(1, 1, &[1]));
        assert!(matches!(r, Err(AbelianError::TorsionViolation { .. })));
        let ok = GroupHom::new(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), IntMatrix::from_i64(1, 1, &[2]));
        assert!(ok.is_ok());
    }

    #[test]
    fn kernel_and_image() {
        // Z ⊕ Z/4 → Z/4, (a, b) ↦ a + 2b
        let src = FgAbGroup::from_invariants(1, &ints(&[4])).unwrap();
        let f = GroupHom::new(src, FgAbGroup::cyclic(4), IntMatrix::from_i64(1, 2, &[1, 2])).unwrap();
        assert_eq!(f.image().to_string(), "Z/4");
        let (k, gens) = f.kernel();
        // Kernel: {(a,b) : a + 2b ≡ 0 mod 4} ≅ Z ⊕ Z/2
        assert_eq!(k.to_string(), "Z ⊕ Z/2");
        for g in &gens {
            assert!(f.target().is_zero(&f.apply(g)));
        }
        assert_eq!(f.preimage(&ints(&[3])).map(|x| f.apply(&x)), Some(ints(&[3])));
    }

    #[test]
    fn composition() {
        let z = FgAbGroup::free(1);
        let two = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let red = GroupHom::new(z, FgAbGroup::cyclic(4), IntMatrix::from_i64(1, 1, &[1])).unwrap();
        let c = red.compose(&two).unwrap();
        assert_eq!(c.apply(&ints(&[3])), ints(&[2]));
        assert!(two.compose(&red).is_err());
    }
}
