use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{Backend, CohomologyClass, CohomologyModel, Coefficients, CupTable, GroupEntry, ModelError};
use crate::abelian::{kernel_basis, two_adic_valuation, FgAbGroup, GroupHom, IntMatrix, Subquotient};
use crate::simplicial::{Cochain, SimplicialComplex};
use crate::steenrod;

/// Cohomology groups of a simplicial complex, each kept as the subquotient
/// `cocycles / coboundaries` of the cochain lattice so that every class has
/// an explicit representative.
#[derive(Clone, Debug)]
pub struct SimplicialCohomology {
    complex: SimplicialComplex,
    groups: BTreeMap<(usize, Coefficients), Subquotient>,
}

impl SimplicialCohomology {
    pub fn new(complex: SimplicialComplex) -> Self {
        Self {
            complex,
            groups: BTreeMap::new(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Computes (and caches) `H^q(X; c)` for `q ≤ dim X`.
    pub fn compute(&mut self, q: usize, c: Coefficients) -> Result<&Subquotient, ModelError> {
        if !self.groups.contains_key(&(q, c)) {
            let sq = cohomology_subquotient(&self.complex, q, c.modulus())?;
            self.groups.insert((q, c), sq);
        }
        Ok(&self.groups[&(q, c)])
    }

    pub fn subquotient(&self, q: usize, c: Coefficients) -> Result<&Subquotient, ModelError> {
        self.groups.get(&(q, c)).ok_or(ModelError::MissingGroup {
            degree: q,
            coefficients: c,
        })
    }

    /// Cocycle representing the class with the given canonical coordinates.
    pub fn representative(&self, q: usize, c: Coefficients, coords: &[BigInt]) -> Result<Cochain, ModelError> {
        let sq = self.subquotient(q, c)?;
        Ok(Cochain::new(&self.complex, q, c.modulus(), sq.to_outer(coords)))
    }

    /// Canonical coordinates of the class of a cocycle.
    pub fn class_of(&self, z: &Cochain, c: Coefficients) -> Result<Vec<BigInt>, ModelError> {
        z.check(&self.complex)?;
        let q = z.degree();
        if q > self.complex.dimension() {
            return Ok(Vec::new());
        }
        let not_cocycle = || ModelError::NotACocycle {
            degree: q,
            coefficients: c,
        };
        if z.with_modulus(c.modulus()).coboundary(&self.complex)?.values().iter().any(|v| !v.is_zero()) {
            return Err(not_cocycle());
        }
        self.subquotient(q, c)?.from_outer(z.values())?.ok_or_else(not_cocycle)
    }

    /// Bockstein of a `Z/2^k` cocycle: lift to an integral cochain `z̃` and
    /// return the class of `δz̃ / 2^k` in `H^{q+1}(X;Z)`.
    pub fn bockstein(&self, z: &Cochain, k: u32) -> Result<CohomologyClass, ModelError> {
        let m = BigInt::from(1u64 << k);
        let lift = z.with_modulus(0);
        let d = lift.coboundary(&self.complex)?;
        let mut w = Vec::with_capacity(d.values().len());
        for v in d.values() {
            let (quo, rem) = v.div_rem(&m);
            if !rem.is_zero() {
                return Err(ModelError::NotACocycle {
                    degree: z.degree(),
                    coefficients: Coefficients::mod_two_power(k),
                });
            }
            w.push(quo);
        }
        let w = Cochain::new(&self.complex, z.degree() + 1, 0, w);
        let coords = self.class_of(&w, Coefficients::Integers)?;
        Ok(CohomologyClass {
            degree: z.degree() + 1,
            coefficients: Coefficients::Integers,
            coords,
            representative: Some(w),
        })
    }
}

fn cohomology_subquotient(x: &SimplicialComplex, q: usize, modulus: u64) -> Result<Subquotient, ModelError> {
    let n = x.count(q);
    let d = x.coboundary(q, 0)?;
    let m = BigInt::from(modulus);
    // Cocycles: x with δx ≡ 0 (mod m).
    let cocycles = if modulus == 0 {
        kernel_basis(&d)
    } else {
        let aug = d.hstack(&IntMatrix::identity(d.rows()).scale(&m));
        kernel_basis(&aug).select_rows(&(0..n).collect::<Vec<_>>())
    };
    // Coboundaries, plus m·C^q for Z/m coefficients.
    let mut boundaries = if q == 0 {
        IntMatrix::zeros(n, 0)
    } else {
        x.coboundary(q - 1, 0)?
    };
    if modulus != 0 {
        boundaries = boundaries.hstack(&IntMatrix::identity(n).scale(&m));
    }
    Ok(Subquotient::new(&cocycles, &boundaries)?)
}

/// Builds a cohomology model of `x`. `k_max` defaults to the largest `k`
/// such that `2^k` divides the exponent of the 2-primary integral torsion.
pub fn model_from_simplicial(x: &SimplicialComplex, k_max: Option<u32>) -> Result<CohomologyModel, ModelError> {
    let dim = x.dimension();
    let mut coh = SimplicialCohomology::new(x.clone());
    let z = Coefficients::Integers;
    for q in 0..=dim {
        coh.compute(q, z)?;
    }
    let k_max = match k_max {
        Some(k) => k,
        None => (1..=dim)
            .map(|q| two_adic_valuation(&coh.subquotient(q, z).unwrap().group.torsion_exponent()))
            .max()
            .unwrap_or(0),
    };
    let mut coeffs = vec![z];
    coeffs.extend((1..=k_max.max(1)).map(Coefficients::mod_two_power));
    for &c in &coeffs[1..] {
        for q in 0..=dim {
            coh.compute(q, c)?;
        }
    }

    let mut groups = BTreeMap::new();
    for &c in &coeffs {
        for q in 0..=dim {
            let group = coh.subquotient(q, c)?.group.clone();
            let names = (0..group.ngens())
                .map(|i| match c {
                    Coefficients::Integers => format!("e{q}.{i}"),
                    _ => format!("e{q}.{i}[{c}]"),
                })
                .collect();
            groups.insert((q, c), GroupEntry { group, names });
        }
    }

    let mut model = CohomologyModel {
        dimension: dim,
        k_max,
        groups,
        reductions: BTreeMap::new(),
        bocksteins: BTreeMap::new(),
        squares: BTreeMap::new(),
        cups: BTreeMap::new(),
        backend: Backend::Algebraic,
    };
    let two = Coefficients::Mod(2);
    let rep = |q: usize, c: Coefficients, i: usize| -> Result<Cochain, ModelError> {
        let g = &coh.subquotient(q, c)?.group;
        coh.representative(q, c, &g.generator(i))
    };
    let hom_from_columns = |q_src: usize, c_src: Coefficients, q_tgt: usize, c_tgt: Coefficients, cols: Vec<Vec<BigInt>>| -> Result<GroupHom, ModelError> {
        let source = model_group(&coh, dim, q_src, c_src);
        let target = model_group(&coh, dim, q_tgt, c_tgt);
        Ok(GroupHom::new(source, target.clone(), IntMatrix::from_columns(target.ngens(), &cols))?)
    };

    for q in 0..=dim {
        for &from in &coeffs {
            for &to in &coeffs[1..] {
                let useful = match (from, to) {
                    (Coefficients::Integers, _) => true,
                    (_, t) => t == two && from != two,
                };
                if !useful {
                    continue;
                }
                let ngens = coh.subquotient(q, from)?.group.ngens();
                let cols = (0..ngens)
                    .map(|i| coh.class_of(&rep(q, from, i)?.with_modulus(to.modulus()), to))
                    .collect::<Result<Vec<_>, _>>()?;
                model.reductions.insert((q, from, to), hom_from_columns(q, from, q, to, cols)?);
            }
        }
        for &c in &coeffs[1..] {
            let k = c.two_power().expect("coefficients are powers of two");
            let ngens = coh.subquotient(q, c)?.group.ngens();
            let cols = (0..ngens)
                .map(|i| Ok(coh.bockstein(&rep(q, c, i)?, k)?.coords))
                .collect::<Result<Vec<_>, ModelError>>()?;
            model.bocksteins.insert((q, k), hom_from_columns(q, c, q + 1, z, cols)?);
        }
        if q >= 2 {
            for &c in &coeffs {
                let ngens = coh.subquotient(q, c)?.group.ngens();
                let cols = (0..ngens)
                    .map(|i| {
                        let sq = steenrod::sq_cochain(x, &rep(q, c, i)?.with_modulus(2), 2)?;
                        if q + 2 > dim {
                            Ok(Vec::new())
                        } else {
                            coh.class_of(&sq, two)
                        }
                    })
                    .collect::<Result<Vec<_>, ModelError>>()?;
                model.squares.insert((q, c), hom_from_columns(q, c, q + 2, two, cols)?);
            }
        }
    }
    for c in [z, two] {
        for p in 1..dim {
            for q in 1..=dim - p {
                let left = coh.subquotient(p, c)?.group.clone();
                let right = coh.subquotient(q, c)?.group.clone();
                let target = coh.subquotient(p + q, c)?.group.clone();
                let mut entries = Vec::with_capacity(left.ngens());
                for i in 0..left.ngens() {
                    let a = rep(p, c, i)?;
                    let mut row = Vec::with_capacity(right.ngens());
                    for j in 0..right.ngens() {
                        let prod = steenrod::cup(x, &a, &rep(q, c, j)?)?;
                        row.push(coh.class_of(&prod, c)?);
                    }
                    entries.push(row);
                }
                let table = CupTable {
                    left,
                    right,
                    target,
                    entries,
                };
                table
                    .check_torsion()
                    .map_err(|m| ModelError::validation("torsion-respect", format!("cup ({p},{q})"), m))?;
                model.cups.insert((p, q, c), table);
            }
        }
    }
    model.backend = Backend::Simplicial(Box::new(coh));
    Ok(model)
}

fn model_group(coh: &SimplicialCohomology, dim: usize, q: usize, c: Coefficients) -> FgAbGroup {
    if q > dim {
        FgAbGroup::trivial()
    } else {
        coh.subquotient(q, c).expect("group computed").group.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> CohomologyModel {
        model_from_simplicial(&SimplicialComplex::parse(text).unwrap(), None).unwrap()
    }

    #[test]
    fn sphere_groups() {
        let m = load(include_str!("../../fixtures/s2.txt"));
        let z = Coefficients::Integers;
        let g: Vec<String> = (0..=2).map(|q| m.group(q, z).unwrap().to_string()).collect();
        assert_eq!(g, ["Z", "0", "Z"]);
        assert_eq!(m.group(2, Coefficients::Mod(2)).unwrap().to_string(), "Z/2");
        assert_eq!(m.group(3, z).unwrap().to_string(), "0");
    }

    #[test]
    fn rp2_groups_and_bockstein() {
        let m = load(include_str!("../../fixtures/rp2.txt"));
        let z = Coefficients::Integers;
        assert_eq!(m.group(1, z).unwrap().to_string(), "0");
        assert_eq!(m.group(2, z).unwrap().to_string(), "Z/2");
        assert_eq!(m.group(1, Coefficients::Mod(2)).unwrap().to_string(), "Z/2");
        let d = m.bockstein(1, 1).unwrap();
        assert!(d.is_injective() && d.is_surjective());
        assert_eq!(m.k_max(), 1);
    }

    #[test]
    fn class_round_trip() {
        let m = load(include_str!("../../fixtures/torus.txt"));
        let s = m.simplicial().unwrap();
        for c in m.coefficient_systems() {
            let g = m.group(1, c).unwrap();
            for i in 0..g.ngens() {
                let e = g.generator(i);
                let z = s.representative(1, c, &e).unwrap();
                assert!(z.with_modulus(c.modulus()).is_cocycle(s.complex()).unwrap());
                assert_eq!(s.class_of(&z, c).unwrap(), e);
            }
        }
    }

    #[test]
    fn non_cocycle_rejected() {
        let m = load(include_str!("../../fixtures/circle.txt"));
        let s = m.simplicial().unwrap();
        let f = Cochain::from_fn(s.complex(), 0, 0, |v| v[0] as i64);
        assert!(matches!(
            s.class_of(&f, Coefficients::Integers),
            Err(ModelError::NotACocycle { .. })
        ));
    }
}
