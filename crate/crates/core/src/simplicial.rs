//! Finite ordered simplicial complexes and their cochains.
//!
//! Vertices are nonnegative integer labels ordered numerically. A q-simplex
//! is a strictly increasing vertex tuple, and the q-simplices of a complex
//! are indexed by their position in lexicographic order. Every matrix and
//! cochain in this crate uses that indexing.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::abelian::IntMatrix;

pub type Simplex = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("line {line}: malformed facet: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex label {label} out of range")]
    VertexOutOfRange { line: usize, label: String },
    #[error("complex is empty")]
    Empty,
    #[error("degree {degree} out of range for a complex of dimension {dimension}")]
    DegreeOutOfRange { degree: usize, dimension: usize },
    #[error("cochain does not belong to this complex (degree {degree}, modulus {modulus})")]
    ComplexMismatch { degree: usize, modulus: u64 },
    #[error("coefficient moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("vertex map is not simplicial: {0:?} has no image simplex")]
    NotSimplicial(Simplex),
    #[error("vertex {0} has no image under the vertex map")]
    UnmappedVertex(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    id: u64,
}

impl SimplicialComplex {
    /// Downward closure of the given facets.
    pub fn from_facets<I, F>(facets: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u32]>,
    {
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for facet in facets {
            let mut f: Simplex = facet.as_ref().to_vec();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            let n = f.len();
            // All nonempty subsets of the facet.
            for mask in 1u64..(1u64 << n) {
                let face: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let q = face.len() - 1;
                if by_dim.len() <= q {
                    by_dim.resize_with(q + 1, BTreeSet::new);
                }
                by_dim[q].insert(face);
            }
        }
        if by_dim.is_empty() {
            return Err(SimplicialError::Empty);
        }
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut h = DefaultHasher::new();
        simplices.hash(&mut h);
        Ok(Self {
            simplices,
            index,
            id: h.finish(),
        })
    }

    /// Parses the facet text format: one facet per line as whitespace
    /// separated vertex labels; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, SimplicialError> {
        let mut facets = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut facet = Vec::new();
            for tok in trimmed.split_whitespace() {
                if !tok.bytes().all(|b| b.is_ascii_digit()) {
                    if tok.starts_with('-') && tok[1..].bytes().all(|b| b.is_ascii_digit()) && tok.len() > 1 {
                        return Err(SimplicialError::VertexOutOfRange { line, label: tok.into() });
                    }
                    return Err(SimplicialError::Malformed {
                        line,
                        message: format!("not a vertex label: {tok:?}"),
                    });
                }
                let v: u32 = tok
                    .parse()
                    .map_err(|_| SimplicialError::VertexOutOfRange { line, label: tok.into() })?;
                if facet.contains(&v) {
                    return Err(SimplicialError::Malformed {
                        line,
                        message: format!("vertex {v} repeated"),
                    });
                }
                facet.push(v);
            }
            facets.push(facet);
        }
        Self::from_facets(facets)
    }

    /// Facet text for this complex: the maximal simplices, one per line.
    pub fn to_facet_text(&self) -> String {
        let mut out = String::new();
        for s in self.facets() {
            let labels: Vec<String> = s.iter().map(u32::to_string).collect();
            writeln!(out, "{}", labels.join(" ")).unwrap();
        }
        out
    }

    /// Maximal simplices, by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for q in 0..=self.dimension() {
            for s in &self.simplices[q] {
                let covered = self.simplices.get(q + 1).is_some_and(|up| {
                    up.iter().any(|t| s.iter().all(|v| t.contains(v)))
                });
                if !covered {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices[0].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.simplices[0].iter().map(|s| s[0])
    }

    /// Sorted q-simplices (empty above the dimension).
    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    pub fn index_of(&self, simplex: &[u32]) -> Option<usize> {
        let q = simplex.len().checked_sub(1)?;
        self.index.get(q)?.get(simplex).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension())
            .map(|q| if q % 2 == 0 { self.count(q) as i64 } else { -(self.count(q) as i64) })
            .sum()
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    /// Matrix of `δ: C^q → C^{q+1}` with coefficients reduced mod `modulus`
    /// (`0` for the integers).
    pub fn coboundary(&self, q: usize, modulus: u64) -> Result<IntMatrix, SimplicialError> {
        if q > self.dimension() {
            return Err(SimplicialError::DegreeOutOfRange {
                degree: q,
                dimension: self.dimension(),
            });
        }
        let mut d = IntMatrix::zeros(self.count(q + 1), self.count(q));
        for (row, s) in self.simplices(q + 1).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let col = self.index[q][&face];
                let sign = if i % 2 == 0 { 1 } else { -1 };
                d[(row, col)] = reduce(BigInt::from(sign), modulus);
            }
        }
        Ok(d)
    }

    /// Ordered product triangulation of `|self| × |other|`: simplices are
    /// chains in the product order whose projections are simplices.
    pub fn product(&self, other: &Self) -> Result<Self, SimplicialError> {
        let width = other.vertices().max().unwrap_or(0) + 1;
        let label = |a: u32, b: u32| a * width + b;
        let mut facets = Vec::new();
        for s in self.facets() {
            for t in other.facets() {
                // Monotone lattice paths through s × t.
                let (p, q) = (s.len() - 1, t.len() - 1);
                for steps in monotone_paths(p, q) {
                    let (mut i, mut j) = (0usize, 0usize);
                    let mut chain = vec![label(s[0], t[0])];
                    for step_in_first in steps {
                        if step_in_first {
                            i += 1;
                        } else {
                            j += 1;
                        }
                        chain.push(label(s[i], t[j]));
                    }
                    facets.push(chain);
                }
            }
        }
        Self::from_facets(facets)
    }
}

fn monotone_paths(p: usize, q: usize) -> Vec<Vec<bool>> {
    if p == 0 && q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    if p > 0 {
        for mut rest in monotone_paths(p - 1, q) {
            rest.insert(0, true);
            out.push(rest);
        }
    }
    if q > 0 {
        for mut rest in monotone_paths(p, q - 1) {
            rest.insert(0, false);
            out.push(rest);
        }
    }
    out
}

pub(crate) fn reduce(v: BigInt, modulus: u64) -> BigInt {
    if modulus == 0 {
        v
    } else {
        v.mod_floor(&BigInt::from(modulus))
    }
}

/// A q-cochain with coefficients in `Z` (`modulus = 0`) or `Z/modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    complex_id: u64,
    degree: usize,
    modulus: u64,
    values: Vec<BigInt>,
}

impl Cochain {
    pub fn new(complex: &SimplicialComplex, degree: usize, modulus: u64, values: Vec<BigInt>) -> Self {
        assert_eq!(values.len(), complex.count(degree), "cochain length mismatch");
        let values = values.into_iter().map(|v| reduce(v, modulus)).collect();
        Self {
            complex_id: complex.id(),
            degree,
            modulus,
            values,
        }
    }

    pub fn zero(complex: &SimplicialComplex, degree: usize, modulus: u64) -> Self {
        Self::new(complex, degree, modulus, vec![BigInt::zero(); complex.count(degree)])
    }

    /// The constant function 1 on vertices.
    pub fn unit(complex: &SimplicialComplex, modulus: u64) -> Self {
        Self::new(complex, 0, modulus, vec![BigInt::from(1); complex.count(0)])
    }

    pub fn from_fn(
        complex: &SimplicialComplex,
        degree: usize,
        modulus: u64,
        mut f: impl FnMut(&[u32]) -> i64,
    ) -> Self {
        let values = complex.simplices(degree).iter().map(|s| BigInt::from(f(s))).collect();
        Self::new(complex, degree, modulus, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn belongs_to(&self, complex: &SimplicialComplex) -> bool {
        self.complex_id == complex.id() && self.values.len() == complex.count(self.degree)
    }

    pub(crate) fn check(&self, complex: &SimplicialComplex) -> Result<(), SimplicialError> {
        if self.belongs_to(complex) {
            Ok(())
        } else {
            Err(SimplicialError::ComplexMismatch {
                degree: self.degree,
                modulus: self.modulus,
            })
        }
    }

    pub fn value_at(&self, complex: &SimplicialComplex, simplex: &[u32]) -> BigInt {
        complex
            .index_of(simplex)
            .map_or_else(BigInt::zero, |i| self.values[i].clone())
    }

    /// Same values reinterpreted with a new modulus (reducing when needed).
    pub fn with_modulus(&self, modulus: u64) -> Self {
        Self {
            complex_id: self.complex_id,
            degree: self.degree,
            modulus,
            values: self.values.iter().map(|v| reduce(v.clone(), modulus)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SimplicialError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SimplicialError> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self, SimplicialError> {
        if self.modulus != other.modulus {
            return Err(SimplicialError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.complex_id != other.complex_id || self.degree != other.degree {
            return Err(SimplicialError::ComplexMismatch {
                degree: other.degree,
                modulus: other.modulus,
            });
        }
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| reduce(op(a, b), self.modulus))
                .collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|v| reduce(v * k, self.modulus))
                .collect(),
            ..self.clone()
        }
    }

    pub fn coboundary(&self, complex: &SimplicialComplex) -> Result<Self, SimplicialError> {
        self.check(complex)?;
        let q = self.degree;
        if q >= complex.dimension() {
            return Ok(Self::zero(complex, q + 1, self.modulus));
        }
        let d = complex.coboundary(q, 0)?;
        Ok(Self::new(complex, q + 1, self.modulus, d.mul_vec(&self.values)))
    }

    pub fn is_cocycle(&self, complex: &SimplicialComplex) -> Result<bool, SimplicialError> {
        Ok(self.coboundary(complex)?.is_zero())
    }
}

/// A vertex map between complexes, `images[v]` being the image of vertex `v`.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    images: HashMap<u32, u32>,
}

impl SimplicialMap {
    /// Validates that every simplex of `source` maps onto a simplex of `target`.
    pub fn new(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        images: HashMap<u32, u32>,
    ) -> Result<Self, SimplicialError> {
        for v in source.vertices() {
            if !images.contains_key(&v) {
                return Err(SimplicialError::UnmappedVertex(v));
            }
        }
        let map = Self { images };
        for q in 0..=source.dimension() {
            for s in source.simplices(q) {
                let mut img: Simplex = s.iter().map(|v| map.images[v]).collect();
                img.sort_unstable();
                img.dedup();
                if target.index_of(&img).is_none() {
                    return Err(SimplicialError::NotSimplicial(s.clone()));
                }
            }
        }
        Ok(map)
    }

    pub fn from_pairs(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        pairs: &[(u32, u32)],
    ) -> Result<Self, SimplicialError> {
        Self::new(source, target, pairs.iter().copied().collect())
    }

    pub fn image(&self, v: u32) -> u32 {
        self.images[&v]
    }

    /// `(f*c)(σ) = ±c(f(σ))`, zero when `f` collapses `σ`.
    pub fn pullback(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        c: &Cochain,
    ) -> Result<Cochain, SimplicialError> {
        c.check(target)?;
        let q = c.degree();
        let values = source
            .simplices(q)
            .iter()
            .map(|s| {
                let img: Vec<u32> = s.iter().map(|v| self.images[v]).collect();
                let (sign, sorted) = sort_with_sign(&img);
                match sign {
                    0 => BigInt::zero(),
                    sign => c.value_at(target, &sorted) * sign,
                }
            })
            .collect();
        Ok(Cochain::new(source, q, c.modulus(), values))
    }
}

/// Sorts a vertex tuple, returning the permutation sign (0 on repeats).
fn sort_with_sign(v: &[u32]) -> (i64, Vec<u32>) {
    let mut w = v.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            } else if w[j] == w[j + 1] {
                return (0, w);
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return (0, w);
    }
    (sign, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = "0 1\n1 2\n0 2\n";

    fn sphere() -> SimplicialComplex {
        SimplicialComplex::parse("# boundary of the tetrahedron\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n").unwrap()
    }

    #[test]
    fn parse_circle() {
        let c = SimplicialComplex::parse(CIRCLE).unwrap();
        assert_eq!((c.count(0), c.count(1), c.dimension()), (3, 3, 1));
    }

    #[test]
    fn parse_sphere_closure() {
        let s = sphere();
        assert_eq!((s.count(0), s.count(1), s.count(2)), (4, 6, 4));
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            SimplicialComplex::parse("0 1\n0 x\n"),
            Err(SimplicialError::Malformed {
                line: 2,
                message: "not a vertex label: \"x\"".into()
            })
        );
        assert!(matches!(
            SimplicialComplex::parse("0 1\n\n0 -3\n"),
            Err(SimplicialError::VertexOutOfRange { line: 3, .. })
        ));
        assert!(matches!(
            SimplicialComplex::parse("0 99999999999\n"),
            Err(SimplicialError::VertexOutOfRange { line: 1, .. })
        ));
        assert_eq!(SimplicialComplex::parse("# nothing\n"), Err(SimplicialError::Empty));
        assert!(matches!(
            SimplicialComplex::parse("1 1\n"),
            Err(SimplicialError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn facet_text_round_trip() {
        let s = sphere();
        assert_eq!(SimplicialComplex::parse(&s.to_facet_text()).unwrap(), s);
    }

    #[test]
    fn coboundary_top_degree_is_empty() {
        let s = sphere();
        let d = s.coboundary(2, 0).unwrap();
        assert_eq!(d.shape(), (0, 4));
        assert!(s.coboundary(3, 0).is_err());
    }

    #[test]
    fn circle_incidence_rank_two() {
        let c = SimplicialComplex::parse(CIRCLE).unwrap();
        let d = c.coboundary(0, 0).unwrap();
        let snf = crate::abelian::smith_normal_form(&d);
        assert_eq!(snf.rank(), 2);
    }

    #[test]
    fn product_of_circle_and_interval() {
        let c = SimplicialComplex::parse(CIRCLE).unwrap();
        let i = SimplicialComplex::parse("0 1\n").unwrap();
        let cyl = c.product(&i).unwrap();
        assert_eq!(cyl.count(2), 6);
        assert_eq!(cyl.euler_characteristic(), 0);
    }

    #[test]
    fn pullback_identity_and_constant() {
        let s = sphere();
        let id = SimplicialMap::from_pairs(&s, &s, &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        let c = Cochain::from_fn(&s, 1, 0, |e| (e[0] * 3 + e[1]) as i64);
        assert_eq!(id.pullback(&s, &s, &c).unwrap(), c);
        let k = SimplicialMap::from_pairs(&s, &s, &[(0, 2), (1, 2), (2, 2), (3, 2)]).unwrap();
        assert!(k.pullback(&s, &s, &c).unwrap().is_zero());
    }

    #[test]
    fn pullback_respects_orientation() {
        // Swap 0 and 1 on the sphere: the edge (0,1) maps to itself reversed.
        let s = sphere();
        let f = SimplicialMap::from_pairs(&s, &s, &[(0, 1), (1, 0), (2, 2), (3, 3)]).unwrap();
        let c = Cochain::from_fn(&s, 1, 0, |e| if e == [0, 1] { 1 } else { 0 });
        let p = f.pullback(&s, &s, &c).unwrap();
        assert_eq!(p.value_at(&s, &[0, 1]), BigInt::from(-1));
    }

    #[test]
    fn non_simplicial_map_rejected() {
        let c = SimplicialComplex::parse(CIRCLE).unwrap();
        let i = SimplicialComplex::parse("0 1\n2\n").unwrap();
        assert!(matches!(
            SimplicialMap::from_pairs(&c, &i, &[(0, 0), (1, 1), (2, 2)]),
            Err(SimplicialError::NotSimplicial(_))
        ));
    }
}
