//! The algebraic model file: a JSON description of cohomology groups and the
//! maps between them, for spaces that are not given by a triangulation.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "k_max": 1,
//!   "groups": { "H1,Z": { "free_rank": 1, "torsion": [], "generators": ["a"] }, ... },
//!   "maps": [
//!     { "kind": "cup", "degrees": [1, 2], "coefficients": ["Z"], "table": [[[1]]] },
//!     { "kind": "reduction", "degrees": [2], "coefficients": ["Z", "Z/2"], "matrix": [[1]] }
//!   ]
//! }
//! ```
//!
//! Matrices act on generator coordinates: one row per target generator, one
//! column per source generator. A cup table is indexed `[left][right]` and
//! holds target coordinates. Generators are listed free ones first, then one
//! per torsion coefficient.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Backend, CohomologyModel, Coefficients, CupTable, GroupEntry, ModelError};
use crate::abelian::{AbelianError, FgAbGroup, GroupHom, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dimension: usize,
    pub k_max: u32,
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Reduction,
    Bockstein,
    Sq2,
    Cup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub kind: MapKind,
    pub degrees: Vec<usize>,
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<Vec<i64>>>>,
}

pub fn group_key(q: usize, c: Coefficients) -> String {
    format!("H{q},{c}")
}

fn parse_group_key(key: &str) -> Option<(usize, Coefficients)> {
    let (deg, coeff) = key.strip_prefix('H')?.split_once(',')?;
    Some((deg.trim().parse().ok()?, coeff.parse().ok()?))
}

/// Parses and validates an algebraic model.
pub fn load_algebraic_model(text: &str) -> Result<CohomologyModel, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    CohomologyModel::from_model_file(&file)
}

struct Builder<'a> {
    file: &'a ModelFile,
    model: CohomologyModel,
}

impl Builder<'_> {
    fn coefficients(&self, raw: &str, location: &str) -> Result<Coefficients, ModelError> {
        let c: Coefficients = raw
            .parse()
            .map_err(|e: String| ModelError::validation("coefficient-range", location, e))?;
        match c {
            Coefficients::Integers => Ok(c),
            _ => match c.two_power() {
                Some(k) if k <= self.file.k_max.max(1) => Ok(c),
                _ => Err(ModelError::validation(
                    "coefficient-range",
                    location,
                    format!("{c} is not Z/2^k with k ≤ k_max = {}", self.file.k_max),
                )),
            },
        }
    }

    fn group(&self, q: usize, c: Coefficients, location: &str) -> Result<FgAbGroup, ModelError> {
        self.model.group(q, c).cloned().map_err(|_| {
            ModelError::validation(
                "missing-group",
                location,
                format!("map refers to undeclared group {}", group_key(q, c)),
            )
        })
    }

    fn matrix(&self, spec: &MapSpec, source: &FgAbGroup, target: &FgAbGroup, location: &str) -> Result<IntMatrix, ModelError> {
        let rows = spec
            .matrix
            .as_ref()
            .ok_or_else(|| ModelError::validation("matrix-shape", location, "missing \"matrix\""))?;
        let shape_err = || {
            ModelError::validation(
                "matrix-shape",
                location,
                format!("expected a {}×{} matrix", target.ngens(), source.ngens()),
            )
        };
        if rows.len() != target.ngens() || rows.iter().any(|r| r.len() != source.ngens()) {
            return Err(shape_err());
        }
        Ok(IntMatrix::from_rows(rows, source.ngens()))
    }

    fn hom(&self, spec: &MapSpec, source: FgAbGroup, target: FgAbGroup, location: &str) -> Result<GroupHom, ModelError> {
        let m = self.matrix(spec, &source, &target, location)?;
        GroupHom::new(source, target, m).map_err(|e| match e {
            AbelianError::TorsionViolation { .. } => ModelError::validation("torsion-respect", location, e.to_string()),
            other => ModelError::validation("matrix-shape", location, other.to_string()),
        })
    }

    fn expect_len<T>(v: &[T], n: usize, what: &str, location: &str) -> Result<(), ModelError> {
        if v.len() == n {
            Ok(())
        } else {
            Err(ModelError::validation(
                "map-arity",
                location,
                format!("expected {n} {what}, found {}", v.len()),
            ))
        }
    }

    fn add_map(&mut self, idx: usize, spec: &MapSpec) -> Result<(), ModelError> {
        let location = format!("maps[{idx}] ({:?})", spec.kind).to_lowercase();
        let loc = location.as_str();
        let dup = |present: bool| {
            if present {
                Err(ModelError::validation("duplicate-map", loc, "map defined twice"))
            } else {
                Ok(())
            }
        };
        match spec.kind {
            MapKind::Reduction => {
                Self::expect_len(&spec.degrees, 1, "degrees", loc)?;
                Self::expect_len(&spec.coefficients, 2, "coefficients", loc)?;
                let q = spec.degrees[0];
                let from = self.coefficients(&spec.coefficients[0], loc)?;
                let to = self.coefficients(&spec.coefficients[1], loc)?;
                if from == to || to == Coefficients::Integers {
                    return Err(ModelError::validation("map-arity", loc, format!("no reduction from {from} to {to}")));
                }
                if let (Some(a), Some(b)) = (from.two_power(), to.two_power()) {
                    if b > a {
                        return Err(ModelError::validation("map-arity", loc, format!("no reduction from {from} to {to}")));
                    }
                }
                let h = self.hom(spec, self.group(q, from, loc)?, self.group(q, to, loc)?, loc)?;
                dup(self.model.reductions.insert((q, from, to), h).is_some())
            }
            MapKind::Bockstein => {
                Self::expect_len(&spec.degrees, 1, "degrees", loc)?;
                Self::expect_len(&spec.coefficients, 1, "coefficients", loc)?;
                let q = spec.degrees[0];
                let c = self.coefficients(&spec.coefficients[0], loc)?;
                let k = c.two_power().ok_or_else(|| {
                    ModelError::validation("coefficient-range", loc, "Bockstein source must be Z/2^k")
                })?;
                let source = self.group(q, c, loc)?;
                let target = self.group(q + 1, Coefficients::Integers, loc)?;
                let m = self.matrix(spec, &source, &target, loc)?;
                let pow = BigInt::from(1u64 << k);
                for j in 0..source.ngens() {
                    if !target.is_zero(&target.scale(&pow, &m.column(j))) {
                        return Err(ModelError::validation(
                            "bockstein-2k-torsion",
                            loc,
                            format!("image of generator {j} is not killed by {pow}"),
                        ));
                    }
                }
                let h = self.hom(spec, source, target, loc)?;
                dup(self.model.bocksteins.insert((q, k), h).is_some())
            }
            MapKind::Sq2 => {
                Self::expect_len(&spec.degrees, 1, "degrees", loc)?;
                Self::expect_len(&spec.coefficients, 1, "coefficients", loc)?;
                let q = spec.degrees[0];
                let c = self.coefficients(&spec.coefficients[0], loc)?;
                let target = self.group(q + 2, Coefficients::Mod(2), loc)?;
                let h = self.hom(spec, self.group(q, c, loc)?, target, loc)?;
                dup(self.model.squares.insert((q, c), h).is_some())
            }
            MapKind::Cup => {
                Self::expect_len(&spec.degrees, 2, "degrees", loc)?;
                Self::expect_len(&spec.coefficients, 1, "coefficients", loc)?;
                let (p, q) = (spec.degrees[0], spec.degrees[1]);
                let c = self.coefficients(&spec.coefficients[0], loc)?;
                let left = self.group(p, c, loc)?;
                let right = self.group(q, c, loc)?;
                let target = self.group(p + q, c, loc)?;
                let raw = spec
                    .table
                    .as_ref()
                    .ok_or_else(|| ModelError::validation("matrix-shape", loc, "missing \"table\""))?;
                let shape_ok = raw.len() == left.ngens()
                    && raw
                        .iter()
                        .all(|row| row.len() == right.ngens() && row.iter().all(|v| v.len() == target.ngens()));
                if !shape_ok {
                    return Err(ModelError::validation(
                        "matrix-shape",
                        loc,
                        format!(
                            "expected a {}×{}×{} table",
                            left.ngens(),
                            right.ngens(),
                            target.ngens()
                        ),
                    ));
                }
                let entries = raw
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| target.canonicalize(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
                            .collect()
                    })
                    .collect();
                let table = CupTable {
                    left,
                    right,
                    target,
                    entries,
                };
                table
                    .check_torsion()
                    .map_err(|m| ModelError::validation("torsion-respect", loc, m))?;
                if p == q {
                    let sign = BigInt::from(if (p * q) % 2 == 0 { 1 } else { -1 });
                    for i in 0..table.left.ngens() {
                        for j in 0..i {
                            let swapped = table.target.scale(&sign, &table.entries[j][i]);
                            if table.entries[i][j] != swapped {
                                return Err(ModelError::validation(
                                    "cup-symmetry",
                                    loc,
                                    format!("g{i} ∪ g{j} ≠ (−1)^{} g{j} ∪ g{i}", p * q),
                                ));
                            }
                        }
                    }
                }
                dup(self.model.cups.insert((p, q, c), table).is_some())
            }
        }
    }
}

impl CohomologyModel {
    /// Builds and validates a model from its file description.
    pub fn from_model_file(file: &ModelFile) -> Result<Self, ModelError> {
        let mut b = Builder {
            file,
            model: CohomologyModel {
                dimension: file.dimension,
                k_max: file.k_max,
                groups: BTreeMap::new(),
                reductions: BTreeMap::new(),
                bocksteins: BTreeMap::new(),
                squares: BTreeMap::new(),
                cups: BTreeMap::new(),
                backend: Backend::Algebraic,
            },
        };
        for (key, spec) in &file.groups {
            let location = format!("groups[{key:?}]");
            let (q, c) = parse_group_key(key).ok_or_else(|| {
                ModelError::validation("group-key", &location, "expected a key like \"H2,Z\" or \"H3,Z/2\"")
            })?;
            b.coefficients(&c.to_string(), &location)?;
            if q > file.dimension {
                return Err(ModelError::validation(
                    "degree-range",
                    &location,
                    format!("degree {q} exceeds dimension {}", file.dimension),
                ));
            }
            let torsion: Vec<BigInt> = spec.torsion.iter().map(|&d| BigInt::from(d)).collect();
            let group = FgAbGroup::from_invariants(spec.free_rank, &torsion)
                .map_err(|e| ModelError::validation("invariant-factors", &location, e.to_string()))?;
            if let Coefficients::Mod(m) = c {
                if group.free_rank() > 0 || group.torsion().iter().any(|d| !(BigInt::from(m) % d).is_zero()) {
                    return Err(ModelError::validation(
                        "invariant-factors",
                        &location,
                        format!("a {c}-module must be finite with invariant factors dividing {m}"),
                    ));
                }
            }
            let names = if spec.generators.is_empty() {
                (0..group.ngens()).map(|i| format!("{key}#{i}")).collect()
            } else {
                spec.generators.clone()
            };
            if names.len() != group.ngens() {
                return Err(ModelError::validation(
                    "generator-names",
                    &location,
                    format!("{} names for {} generators", names.len(), group.ngens()),
                ));
            }
            let mut seen = HashSet::new();
            if let Some(d) = names.iter().find(|n| !seen.insert(n.as_str())) {
                return Err(ModelError::validation("generator-names", &location, format!("duplicate name {d:?}")));
            }
            b.model.groups.insert((q, c), GroupEntry { group, names });
        }
        for (i, spec) in file.maps.iter().enumerate() {
            b.add_map(i, spec)?;
        }
        b.model.check_graded_commutativity()?;
        Ok(b.model)
    }

    fn check_graded_commutativity(&self) -> Result<(), ModelError> {
        for (&(p, q, c), table) in &self.cups {
            if p >= q {
                continue;
            }
            let Some(other) = self.cups.get(&(q, p, c)) else { continue };
            let sign = BigInt::from(if (p * q) % 2 == 0 { 1 } else { -1 });
            for i in 0..table.left.ngens() {
                for j in 0..table.right.ngens() {
                    if table.entries[i][j] != table.target.scale(&sign, &other.entries[j][i]) {
                        return Err(ModelError::validation(
                            "cup-symmetry",
                            format!("cup H{p} × H{q} ({c})"),
                            format!("x{i} ∪ y{j} ≠ (−1)^{} y{j} ∪ x{i}", p * q),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The model in the algebraic file format. Simplicial models export their
    /// computed tables, which reload to an equivalent algebraic model.
    pub fn to_model_file(&self) -> Result<ModelFile, ModelError> {
        let small = |v: &BigInt| {
            v.to_i64()
                .ok_or_else(|| ModelError::Json(format!("integer {v} does not fit the file format")))
        };
        let vec = |v: &[BigInt]| v.iter().map(small).collect::<Result<Vec<i64>, _>>();
        let mat = |m: &IntMatrix| (0..m.rows()).map(|i| vec(m.row(i))).collect::<Result<Vec<_>, _>>();
        let mut groups = BTreeMap::new();
        for ((q, c), e) in &self.groups {
            groups.insert(
                group_key(*q, *c),
                GroupSpec {
                    free_rank: e.group.free_rank(),
                    torsion: vec(e.group.torsion())?,
                    generators: e.names.clone(),
                },
            );
        }
        let mut maps = Vec::new();
        let hom_spec = |kind, degrees, coefficients: Vec<Coefficients>, h: &GroupHom| -> Result<MapSpec, ModelError> {
            Ok(MapSpec {
                kind,
                degrees,
                coefficients: coefficients.iter().map(ToString::to_string).collect(),
                matrix: Some(mat(h.matrix())?),
                table: None,
            })
        };
        for ((q, from, to), h) in &self.reductions {
            maps.push(hom_spec(MapKind::Reduction, vec![*q], vec![*from, *to], h)?);
        }
        for ((q, k), h) in &self.bocksteins {
            maps.push(hom_spec(MapKind::Bockstein, vec![*q], vec![Coefficients::mod_two_power(*k)], h)?);
        }
        for ((q, c), h) in &self.squares {
            maps.push(hom_spec(MapKind::Sq2, vec![*q], vec![*c], h)?);
        }
        for ((p, q, c), t) in &self.cups {
            let table = t
                .entries
                .iter()
                .map(|row| row.iter().map(|v| vec(v)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            maps.push(MapSpec {
                kind: MapKind::Cup,
                degrees: vec![*p, *q],
                coefficients: vec![c.to_string()],
                matrix: None,
                table: Some(table),
            });
        }
        Ok(ModelFile {
            dimension: self.dimension,
            k_max: self.k_max,
            groups,
            maps,
        })
    }

    pub fn to_json(&self) -> Result<String, ModelError> {
        serde_json::to_string_pretty(&self.to_model_file()?).map_err(|e| ModelError::Json(e.to_string()))
    }
}
