//! Cohomology models: the groups, reductions, Bocksteins, `Sq²` and cup
//! pairings that the cohomotopy computations consume.
//!
//! A model is either computed from a simplicial complex, in which case every
//! class carries an explicit cocycle representative, or loaded from an
//! algebraic JSON description and treated formally.

mod algebraic;
mod simplicial;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::abelian::{AbelianError, FgAbGroup, GroupHom, IntMatrix};
use crate::simplicial::{Cochain, SimplicialError};
use crate::steenrod::SteenrodError;

pub use algebraic::{load_algebraic_model, ModelFile};
pub use simplicial::{model_from_simplicial, SimplicialCohomology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coefficients {
    Integers,
    Mod(u64),
}

impl Coefficients {
    pub fn mod_two_power(k: u32) -> Self {
        Coefficients::Mod(1 << k)
    }

    /// `0` for the integers.
    pub fn modulus(self) -> u64 {
        match self {
            Coefficients::Integers => 0,
            Coefficients::Mod(m) => m,
        }
    }

    /// `k` when the coefficients are `Z/2^k`.
    pub fn two_power(self) -> Option<u32> {
        match self {
            Coefficients::Mod(m) if m >= 2 && m.is_power_of_two() => Some(m.trailing_zeros()),
            _ => None,
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Z" {
            return Ok(Coefficients::Integers);
        }
        let m = s
            .strip_prefix("Z/")
            .and_then(|m| m.parse::<u64>().ok())
            .ok_or_else(|| format!("unrecognised coefficients {s:?} (expected Z or Z/m)"))?;
        if m < 2 {
            return Err(format!("modulus must be at least 2, got {m}"));
        }
        Ok(Coefficients::Mod(m))
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model file: {0}")]
    Json(String),
    #[error("{rule} violated at {location}: {message}")]
    Validation {
        rule: &'static str,
        location: String,
        message: String,
    },
    #[error("model has no group H^{degree}(X;{coefficients})")]
    MissingGroup { degree: usize, coefficients: Coefficients },
    #[error("model has no {0}")]
    MissingMap(String),
    #[error("class is not a cocycle of degree {degree} with coefficients {coefficients}")]
    NotACocycle { degree: usize, coefficients: Coefficients },
    #[error("class has no cocycle representative")]
    NoRepresentative,
    #[error("expected {expected} coordinates, found {found}")]
    CoordinateLength { expected: usize, found: usize },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
}

impl ModelError {
    pub(crate) fn validation(rule: &'static str, location: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError::Validation {
            rule,
            location: location.into(),
            message: message.into(),
        }
    }
}

/// An element of `H^q(X; coefficients)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub coefficients: Coefficients,
    /// Canonical coordinates in the group's generators.
    pub coords: Vec<BigInt>,
    /// Cocycle representative (simplicial models only).
    pub representative: Option<Cochain>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupEntry {
    pub group: FgAbGroup,
    pub names: Vec<String>,
}

/// Bilinear pairing `H^p(c) × H^q(c) → H^{p+q}(c)` on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupTable {
    pub left: FgAbGroup,
    pub right: FgAbGroup,
    pub target: FgAbGroup,
    /// `entries[i][j]` = canonical coordinates of `g_i ∪ h_j`.
    pub entries: Vec<Vec<Vec<BigInt>>>,
}

impl CupTable {
    pub fn zero(left: FgAbGroup, right: FgAbGroup, target: FgAbGroup) -> Self {
        let entries = vec![vec![target.zero(); right.ngens()]; left.ngens()];
        Self {
            left,
            right,
            target,
            entries,
        }
    }

    pub fn apply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut acc = self.target.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let k = ai * bj;
                for (t, v) in self.entries[i][j].iter().enumerate() {
                    acc[t] += &k * v;
                }
            }
        }
        self.target.canonicalize(&acc)
    }

    /// `(−) ∪ b` as a homomorphism out of the left factor.
    pub fn right_multiplication(&self, b: &[BigInt]) -> Result<GroupHom, AbelianError> {
        let cols: Vec<Vec<BigInt>> = (0..self.left.ngens())
            .map(|i| self.apply(&self.left.generator(i), b))
            .collect();
        GroupHom::new(
            self.left.clone(),
            self.target.clone(),
            IntMatrix::from_columns(self.target.ngens(), &cols),
        )
    }

    /// Torsion compatibility in both arguments.
    pub(crate) fn check_torsion(&self) -> Result<(), String> {
        for (i, d) in self.left.generator_orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for j in 0..self.right.ngens() {
                if !self.target.is_zero(&self.target.scale(d, &self.entries[i][j])) {
                    return Err(format!("left generator {i} has order {d} but {d}·(g{i} ∪ h{j}) ≠ 0"));
                }
            }
        }
        for (j, d) in self.right.generator_orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for i in 0..self.left.ngens() {
                if !self.target.is_zero(&self.target.scale(d, &self.entries[i][j])) {
                    return Err(format!("right generator {j} has order {d} but {d}·(g{i} ∪ h{j}) ≠ 0"));
                }
            }
        }
        Ok(())
    }
}

/// Which backend produced a model.
#[derive(Clone, Debug)]
pub enum Backend {
    Algebraic,
    Simplicial(Box<SimplicialCohomology>),
}

#[derive(Clone, Debug)]
pub struct CohomologyModel {
    pub(crate) dimension: usize,
    pub(crate) k_max: u32,
    pub(crate) groups: BTreeMap<(usize, Coefficients), GroupEntry>,
    pub(crate) reductions: BTreeMap<(usize, Coefficients, Coefficients), GroupHom>,
    pub(crate) bocksteins: BTreeMap<(usize, u32), GroupHom>,
    pub(crate) squares: BTreeMap<(usize, Coefficients), GroupHom>,
    pub(crate) cups: BTreeMap<(usize, usize, Coefficients), CupTable>,
    pub(crate) backend: Backend,
}

impl CohomologyModel {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn simplicial(&self) -> Option<&SimplicialCohomology> {
        match &self.backend {
            Backend::Simplicial(s) => Some(s),
            Backend::Algebraic => None,
        }
    }

    /// Coefficient systems the model carries: `Z` and `Z/2^k`, `k ≤ max(k_max, 1)`.
    pub fn coefficient_systems(&self) -> Vec<Coefficients> {
        let mut v = vec![Coefficients::Integers];
        v.extend((1..=self.k_max.max(1)).map(Coefficients::mod_two_power));
        v
    }

    /// `H^q(X; c)`; trivial above the dimension.
    pub fn group(&self, q: usize, c: Coefficients) -> Result<&FgAbGroup, ModelError> {
        self.entry(q, c).map(|e| &e.group)
    }

    pub fn generator_names(&self, q: usize, c: Coefficients) -> Result<&[String], ModelError> {
        self.entry(q, c).map(|e| e.names.as_slice())
    }

    fn entry(&self, q: usize, c: Coefficients) -> Result<&GroupEntry, ModelError> {
        static TRIVIAL: std::sync::OnceLock<GroupEntry> = std::sync::OnceLock::new();
        if let Some(e) = self.groups.get(&(q, c)) {
            return Ok(e);
        }
        if q > self.dimension {
            return Ok(TRIVIAL.get_or_init(|| GroupEntry {
                group: FgAbGroup::trivial(),
                names: Vec::new(),
            }));
        }
        Err(ModelError::MissingGroup {
            degree: q,
            coefficients: c,
        })
    }

    pub fn has_group(&self, q: usize, c: Coefficients) -> bool {
        self.group(q, c).is_ok()
    }

    fn zero_if_trivial(&self, source: &FgAbGroup, target: &FgAbGroup) -> Option<GroupHom> {
        (source.is_trivial() || target.is_trivial()).then(|| GroupHom::zero(source.clone(), target.clone()))
    }

    /// Coefficient reduction `H^q(from) → H^q(to)`.
    pub fn reduction(&self, q: usize, from: Coefficients, to: Coefficients) -> Result<GroupHom, ModelError> {
        let source = self.group(q, from)?;
        let target = self.group(q, to)?;
        if from == to {
            return Ok(GroupHom::identity(source.clone()));
        }
        if let Some(h) = self.reductions.get(&(q, from, to)) {
            return Ok(h.clone());
        }
        if let Some(h) = self.zero_if_trivial(source, target) {
            return Ok(h);
        }
        // Z → Z/2 through some stored Z → Z/2^k → Z/2.
        if from == Coefficients::Integers && to == Coefficients::Mod(2) {
            for k in 2..=self.k_max {
                let mid = Coefficients::mod_two_power(k);
                if let (Some(a), Some(b)) = (self.reductions.get(&(q, from, mid)), self.reductions.get(&(q, mid, to))) {
                    return Ok(b.compose(a)?);
                }
            }
        }
        Err(ModelError::MissingMap(format!("reduction H^{q}(X;{from}) → H^{q}(X;{to})")))
    }

    /// Bockstein `δ_k: H^q(X;Z/2^k) → H^{q+1}(X;Z)`.
    pub fn bockstein(&self, q: usize, k: u32) -> Result<GroupHom, ModelError> {
        let source = self.group(q, Coefficients::mod_two_power(k))?;
        let target = self.group(q + 1, Coefficients::Integers)?;
        if let Some(h) = self.bocksteins.get(&(q, k)) {
            return Ok(h.clone());
        }
        if let Some(h) = self.zero_if_trivial(source, target) {
            return Ok(h);
        }
        Err(ModelError::MissingMap(format!("Bockstein δ_{k} on H^{q}(X;Z/{})", 1u64 << k)))
    }

    /// `Sq²: H^q(X;c) → H^{q+2}(X;Z/2)`, reduction mod 2 followed by `Sq²`.
    pub fn sq2(&self, q: usize, c: Coefficients) -> Result<GroupHom, ModelError> {
        let source = self.group(q, c)?;
        let two = Coefficients::Mod(2);
        let target = self.group(q + 2, two)?;
        if let Some(h) = self.squares.get(&(q, c)) {
            return Ok(h.clone());
        }
        if q < 2 {
            return Ok(GroupHom::zero(source.clone(), target.clone()));
        }
        if let Some(h) = self.zero_if_trivial(source, target) {
            return Ok(h);
        }
        if c != two {
            let base = self.sq2(q, two)?;
            let red = self.reduction(q, c, two)?;
            return Ok(base.compose(&red)?);
        }
        Err(ModelError::MissingMap(format!("Sq² on H^{q}(X;Z/2)")))
    }

    /// Cup pairing `H^p(c) × H^q(c) → H^{p+q}(c)`.
    pub fn cup_table(&self, p: usize, q: usize, c: Coefficients) -> Result<CupTable, ModelError> {
        let left = self.group(p, c)?;
        let right = self.group(q, c)?;
        let target = self.group(p + q, c)?;
        if let Some(t) = self.cups.get(&(p, q, c)) {
            return Ok(t.clone());
        }
        if left.is_trivial() || right.is_trivial() || target.is_trivial() {
            return Ok(CupTable::zero(left.clone(), right.clone(), target.clone()));
        }
        Err(ModelError::MissingMap(format!("cup pairing H^{p} × H^{q} → H^{} with {c} coefficients", p + q)))
    }

    /// A class from coordinates, attaching a representative when available.
    pub fn class(&self, q: usize, c: Coefficients, coords: &[BigInt]) -> Result<CohomologyClass, ModelError> {
        let g = self.group(q, c)?;
        if coords.len() != g.ngens() {
            return Err(ModelError::CoordinateLength {
                expected: g.ngens(),
                found: coords.len(),
            });
        }
        let coords = g.canonicalize(coords);
        let representative = match self.simplicial() {
            Some(s) if q <= self.dimension => Some(s.representative(q, c, &coords)?),
            _ => None,
        };
        Ok(CohomologyClass {
            degree: q,
            coefficients: c,
            coords,
            representative,
        })
    }

    pub fn class_i64(&self, q: usize, c: Coefficients, coords: &[i64]) -> Result<CohomologyClass, ModelError> {
        let v: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.class(q, c, &v)
    }

    /// `δ_k(x)`: from the representative on simplicial models (lift to an
    /// integral cochain, divide its coboundary by `2^k`), otherwise from the
    /// stored table.
    pub fn bockstein_class(&self, x: &CohomologyClass) -> Result<CohomologyClass, ModelError> {
        let k = x
            .coefficients
            .two_power()
            .ok_or_else(|| ModelError::MissingMap(format!("Bockstein on {} coefficients", x.coefficients)))?;
        if let (Some(s), Some(rep)) = (self.simplicial(), &x.representative) {
            return s.bockstein(rep, k);
        }
        let coords = self.bockstein(x.degree, k)?.apply(&x.coords);
        self.class(x.degree + 1, Coefficients::Integers, &coords)
    }

    /// `Sq²(x) ∈ H^{q+2}(X;Z/2)`; on simplicial models computed as
    /// `z ∪_{q−2} z` from the mod 2 reduction `z` of the representative.
    pub fn sq2_class(&self, x: &CohomologyClass) -> Result<CohomologyClass, ModelError> {
        let two = Coefficients::Mod(2);
        if let (Some(s), Some(rep)) = (self.simplicial(), &x.representative) {
            let z = rep.with_modulus(2);
            let sq = crate::steenrod::sq_cochain(s.complex(), &z, 2)?;
            let coords = s.class_of(&sq, two)?;
            let representative = (x.degree + 2 <= self.dimension).then_some(sq);
            return Ok(CohomologyClass {
                degree: x.degree + 2,
                coefficients: two,
                coords,
                representative,
            });
        }
        let coords = self.sq2(x.degree, x.coefficients)?.apply(&x.coords);
        self.class(x.degree + 2, two, &coords)
    }

    /// `x ∪ y` through the stored pairing.
    pub fn cup_classes(&self, x: &CohomologyClass, y: &CohomologyClass) -> Result<CohomologyClass, ModelError> {
        if x.coefficients != y.coefficients {
            return Err(ModelError::MissingMap(format!(
                "cup pairing between {} and {} coefficients",
                x.coefficients, y.coefficients
            )));
        }
        let t = self.cup_table(x.degree, y.degree, x.coefficients)?;
        let coords = t.apply(&x.coords, &y.coords);
        self.class(x.degree + y.degree, x.coefficients, &coords)
    }

    /// Largest `k` such that `2^k` divides the exponent of the 2-primary
    /// torsion in `H^q(X;Z)`, over all degrees.
    pub fn integral_two_torsion_exponent(&self) -> u32 {
        (1..=self.dimension)
            .filter_map(|q| self.group(q, Coefficients::Integers).ok())
            .map(|g| crate::abelian::two_adic_valuation(&g.torsion_exponent()))
            .max()
            .unwrap_or(0)
    }
}
