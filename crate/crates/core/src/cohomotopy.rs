//! `[X, S^n]` for `dim X ≤ n + 1` together with its group extension, and the
//! fibers of `[X, S^2] → H^2(X;Z)` for `dim X ≤ 4`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abelian::{primary_decompose, AbelianError, FgAbGroup, GroupHom, IntMatrix, PrimarySummand};
use crate::model::{CohomologyClass, CohomologyModel, Coefficients, ModelError};

#[derive(Debug, Error)]
pub enum CohomotopyError {
    #[error("{0}")]
    Usage(String),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
    #[error("classification refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

type Result<T> = std::result::Result<T, CohomotopyError>;

const Z: Coefficients = Coefficients::Integers;
const Z2: Coefficients = Coefficients::Mod(2);

/// `coker(Sq̄²) = H^{n+1}(X;Z/2) / Sq²(H^{n−1}(X;Z))` and the quotient map.
pub fn coker_sq2bar(model: &CohomologyModel, n: usize) -> Result<(FgAbGroup, GroupHom)> {
    if n == 0 {
        return Err(CohomotopyError::Usage("coker(Sq̄²) needs n ≥ 1".into()));
    }
    let sq = model.sq2(n - 1, Z).map_err(|e| match e {
        ModelError::MissingGroup { .. } | ModelError::MissingMap(_) => {
            CohomotopyError::Usage(format!("model does not cover degrees {} and {}: {e}", n - 1, n + 1))
        }
        other => other.into(),
    })?;
    let (c, quotient) = sq.cokernel();
    if c.free_rank() > 0 || c.torsion().iter().any(|d| d != &BigInt::from(2)) {
        return Err(CohomotopyError::Inconsistent(format!("coker(Sq̄²) = {c} is not elementary abelian")));
    }
    Ok((c, quotient))
}

/// The relation `2^k·ḡ = ι(Sq²(γ′))` attached to a 2-primary summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRelation {
    /// Index among the decomposed generators of `H^n(X;Z)`.
    pub summand: usize,
    pub order: BigInt,
    /// `γ` in canonical coordinates of `H^n(X;Z)`.
    pub gamma: Vec<BigInt>,
    /// `γ′ ∈ H^{n−1}(X;Z/2^k)` with `δ_k(γ′) = γ`.
    pub gamma_prime: Vec<BigInt>,
    /// `Sq²(γ′)` in `coker(Sq̄²)`.
    pub sq2_term: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct SphereMapGroup {
    pub n: usize,
    pub group: FgAbGroup,
    pub coker: FgAbGroup,
    pub coker_quotient: GroupHom,
    pub inclusion: GroupHom,
    pub projection: GroupHom,
    /// Primary decomposition of `H^n(X;Z)`: free generators, then these.
    pub free_rank: usize,
    pub summands: Vec<PrimarySummand>,
    /// `ḡ_i` for each decomposed generator of `H^n(X;Z)`, in group coordinates.
    pub summand_lifts: Vec<Vec<BigInt>>,
    /// A lift of each canonical generator of `H^n(X;Z)`.
    pub section_data: Vec<Vec<BigInt>>,
    pub relations: Vec<ExtensionRelation>,
}

impl SphereMapGroup {
    pub fn cohomology(&self) -> &FgAbGroup {
        self.projection.target()
    }

    /// Finitely generated abelian extensions split exactly when the middle
    /// group is isomorphic to the direct sum of the ends.
    pub fn is_split(&self) -> bool {
        let (a, b) = (&self.coker, self.cohomology());
        let torsion = [a.torsion(), b.torsion()].concat();
        let free = a.free_rank() + b.free_rank();
        let mut rel = IntMatrix::zeros(free + torsion.len(), torsion.len());
        for (j, d) in torsion.iter().enumerate() {
            rel[(free + j, j)] = d.clone();
        }
        FgAbGroup::cokernel(&rel).isomorphic(&self.group)
    }

    /// The chosen lift of `γ ∈ H^n(X;Z)`.
    pub fn section(&self, gamma: &[BigInt]) -> Vec<BigInt> {
        let mut acc = self.group.zero();
        for (t, c) in gamma.iter().enumerate() {
            if !c.is_zero() {
                acc = self.group.add(&acc, &self.group.scale(c, &self.section_data[t]));
            }
        }
        acc
    }

    /// Replaces the lift of generator `t` by `lift(t) + ι(delta[t])`.
    pub fn perturb_section(&self, delta: &[Vec<BigInt>]) -> Result<Self> {
        if delta.len() != self.section_data.len() {
            return Err(CohomotopyError::Usage(format!(
                "expected {} perturbations, found {}",
                self.section_data.len(),
                delta.len()
            )));
        }
        let mut out = self.clone();
        for (s, d) in out.section_data.iter_mut().zip(delta) {
            *s = self.group.add(s, &self.inclusion.apply(d));
        }
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(CohomotopyError::Inconsistent(m.into()));
        if !self.projection.compose(&self.inclusion)?.is_zero() {
            return bad("projection ∘ inclusion ≠ 0");
        }
        if !self.inclusion.is_injective() {
            return bad("inclusion of coker(Sq̄²) is not injective");
        }
        if !self.projection.is_surjective() {
            return bad("projection onto H^n is not surjective");
        }
        let (_, kernel) = self.projection.kernel();
        let image: Vec<Vec<BigInt>> = self.inclusion.matrix().columns().collect();
        if kernel.iter().any(|k| !self.group.in_span(&image, k)) {
            return bad("sequence is not exact at [X,S^n]");
        }
        for (t, s) in self.section_data.iter().enumerate() {
            if self.projection.apply(s) != self.cohomology().generator(t) {
                return bad("section does not lift the generators");
            }
        }
        Ok(())
    }
}

/// `[X, S^n]` as an extension `0 → coker(Sq̄²) → [X,S^n] → H^n(X;Z) → 0`.
pub fn sphere_maps(model: &CohomologyModel, n: usize) -> Result<SphereMapGroup> {
    if n < 3 {
        return Err(CohomotopyError::Usage(format!("sphere dimension must be at least 3, got {n}")));
    }
    if model.dimension() > n + 1 {
        return Err(CohomotopyError::Usage(format!(
            "[X,S^{n}] needs dim X ≤ {}, model has dimension {}",
            n + 1,
            model.dimension()
        )));
    }
    let (coker, coker_quotient) = coker_sq2bar(model, n)?;
    let hn = model.group(n, Z)?.clone();
    let pd = primary_decompose(&hn);
    let (c, s) = (coker.ngens(), pd.len());
    let two = BigInt::from(2);

    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..c {
        let mut col = vec![BigInt::zero(); c + s];
        col[j] = two.clone();
        rel_cols.push(col);
    }
    let mut relations = Vec::new();
    for (idx, summand) in pd.summands.iter().enumerate() {
        let i = pd.free_rank + idx;
        let order = summand.order();
        let mut col = vec![BigInt::zero(); c + s];
        col[c + i] = order.clone();
        if summand.prime == two {
            let k = summand.exponent;
            let gamma = hn.canonicalize(&pd.to_group.column(i));
            let delta = model.bockstein(n - 1, k)?;
            let gamma_prime = delta.preimage(&gamma).ok_or_else(|| {
                CohomotopyError::Inconsistent(format!(
                    "summand {i} of H^{n}(X;Z) of order {order} is not in the image of δ_{k}"
                ))
            })?;
            let sq = model.sq2(n - 1, Coefficients::mod_two_power(k))?.apply(&gamma_prime);
            let sq2_term = coker_quotient.apply(&sq);
            for (j, v) in sq2_term.iter().enumerate() {
                col[j] = -v;
            }
            relations.push(ExtensionRelation {
                summand: i,
                order,
                gamma,
                gamma_prime,
                sq2_term,
            });
        }
        rel_cols.push(col);
    }
    let group = FgAbGroup::cokernel(&IntMatrix::from_columns(c + s, &rel_cols));
    let unit = |idx: usize| {
        let mut v = vec![BigInt::zero(); c + s];
        v[idx] = BigInt::one();
        group.reduce_ambient(&v)
    };

    let inclusion = GroupHom::new(
        coker.clone(),
        group.clone(),
        IntMatrix::from_columns(group.ngens(), &(0..c).map(unit).collect::<Vec<_>>()),
    )?;
    let summand_lifts: Vec<Vec<BigInt>> = (0..s).map(|i| unit(c + i)).collect();
    let proj_cols: Vec<Vec<BigInt>> = (0..group.ngens())
        .map(|t| {
            let amb = group.basis_map().column(t);
            pd.to_group.mul_vec(&amb[c..])
        })
        .collect();
    let projection = GroupHom::new(group.clone(), hn.clone(), IntMatrix::from_columns(hn.ngens(), &proj_cols))?;
    let section_data = (0..hn.ngens())
        .map(|t| {
            let mut acc = group.zero();
            for (i, lift) in summand_lifts.iter().enumerate() {
                let coeff = &pd.from_group[(i, t)];
                if !coeff.is_zero() {
                    acc = group.add(&acc, &group.scale(coeff, lift));
                }
            }
            acc
        })
        .collect();
    let out = SphereMapGroup {
        n,
        group,
        coker,
        coker_quotient,
        inclusion,
        projection,
        free_rank: pd.free_rank,
        summands: pd.summands.clone(),
        summand_lifts,
        section_data,
        relations,
    };
    out.check()?;
    Ok(out)
}

/// `γ ↦ 2·s(γ)` from `H^n(X;Z)` to `[X,S^n]`, for any section `s`.
pub fn two_lift_hom(s: &SphereMapGroup) -> Result<GroupHom> {
    let two = BigInt::from(2);
    let cols: Vec<Vec<BigInt>> = s.section_data.iter().map(|l| s.group.scale(&two, l)).collect();
    Ok(GroupHom::new(
        s.cohomology().clone(),
        s.group.clone(),
        IntMatrix::from_columns(s.group.ngens(), &cols),
    )?)
}

/// Sign of the degree `c_e = ±2` in `ψ[β]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

fn check_beta(model: &CohomologyModel, beta: &CohomologyClass) -> Result<()> {
    if beta.degree != 2 || beta.coefficients != Z {
        return Err(CohomotopyError::Usage(format!(
            "β must lie in H^2(X;Z), got a class in H^{}(X;{})",
            beta.degree, beta.coefficients
        )));
    }
    let g = model.group(2, Z)?;
    if beta.coords.len() != g.ngens() {
        return Err(CohomotopyError::Usage(format!(
            "β has {} coordinates but H^2(X;Z) has {} generators",
            beta.coords.len(),
            g.ngens()
        )));
    }
    Ok(())
}

/// `(−) ∪ β : H^1(X;Z) → H^3(X;Z)`.
pub fn cup_with_beta(model: &CohomologyModel, beta: &CohomologyClass) -> Result<GroupHom> {
    check_beta(model, beta)?;
    Ok(model.cup_table(1, 2, Z)?.right_multiplication(&beta.coords)?)
}

/// `ψ[β] = c_e·s ∘ ((−) ∪ β)` with `c_e = +2`.
pub fn psi_beta(model: &CohomologyModel, s: &SphereMapGroup, beta: &CohomologyClass) -> Result<GroupHom> {
    psi_beta_signed(model, s, beta, Sign::Plus)
}

pub fn psi_beta_signed(
    model: &CohomologyModel,
    s: &SphereMapGroup,
    beta: &CohomologyClass,
    sign: Sign,
) -> Result<GroupHom> {
    if s.n != 3 {
        return Err(CohomotopyError::Usage(format!("ψ[β] lands in [X,S^3], got [X,S^{}]", s.n)));
    }
    let psi = two_lift_hom(s)?.compose(&cup_with_beta(model, beta)?)?;
    Ok(match sign {
        Sign::Plus => psi,
        Sign::Minus => psi.scale(&BigInt::from(-1)),
    })
}

/// How the kernel of `q` was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QKernelSearch {
    /// Every `a ∈ H^2(X;Z/2)` was tried.
    Exhaustive,
    /// `H^2(X;Z/2)` exceeded the enumeration cap; the admissible `a` were
    /// taken from kernel generators instead.
    KernelGenerators,
}

const Q_SEARCH_CAP: u32 = 16;

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub beta: CohomologyClass,
    pub beta_squared: Vec<BigInt>,
    pub realizable: bool,
    /// `coker ψ[β]`, when `β ∪ β = 0`.
    pub fiber: Option<FgAbGroup>,
    /// `P_β = coker(2(−) ∪ β)`.
    pub p_beta: FgAbGroup,
    /// The induced surjection `coker ψ[β] → P_β`.
    pub to_p_beta: Option<GroupHom>,
    /// `q : coker(Sq̄²) → coker ψ[β]`.
    pub q: Option<GroupHom>,
    /// Generators of `ker q`: the classes `Sq²(a)` with `δ_1(a) ∈ im((−) ∪ β)`.
    pub q_kernel: Vec<Vec<BigInt>>,
    pub q_kernel_search: QKernelSearch,
}

impl FiberReport {
    /// `|fiber|`, when finite.
    pub fn fiber_order(&self) -> Option<BigInt> {
        self.fiber.as_ref().and_then(FgAbGroup::order)
    }
}

/// `P_β = coker(2(−) ∪ β : H^1 → H^3)` with its quotient map.
fn p_beta(model: &CohomologyModel, beta: &CohomologyClass) -> Result<(FgAbGroup, GroupHom)> {
    Ok(cup_with_beta(model, beta)?.scale(&BigInt::from(2)).cokernel())
}

/// The fiber of `[X,S^2] → H^2(X;Z)` over `β`.
pub fn pi2_fiber(model: &CohomologyModel, beta: &CohomologyClass) -> Result<FiberReport> {
    let s = pi2_base(model)?;
    pi2_fiber_with(model, &s, beta)
}

fn pi2_base(model: &CohomologyModel) -> Result<SphereMapGroup> {
    if model.dimension() > 4 {
        return Err(CohomotopyError::Usage(format!(
            "[X,S^2] is computed for dim X ≤ 4, model has dimension {}",
            model.dimension()
        )));
    }
    sphere_maps(model, 3)
}

/// As [`pi2_fiber`], reusing a precomputed `[X,S^3]`.
pub fn pi2_fiber_with(model: &CohomologyModel, s: &SphereMapGroup, beta: &CohomologyClass) -> Result<FiberReport> {
    check_beta(model, beta)?;
    let h4 = model.group(4, Z)?;
    let beta_squared = model.cup_table(2, 2, Z)?.apply(&beta.coords, &beta.coords);
    let realizable = h4.is_zero(&beta_squared);
    let (p_group, p_quotient) = p_beta(model, beta)?;
    let (q_kernel, q_kernel_search) = q_kernel_search(model, s, beta)?;
    let mut report = FiberReport {
        beta: beta.clone(),
        beta_squared,
        realizable,
        fiber: None,
        p_beta: p_group,
        to_p_beta: None,
        q: None,
        q_kernel,
        q_kernel_search,
    };
    if !realizable {
        return Ok(report);
    }

    let psi = psi_beta(model, s, beta)?;
    let (fiber, fiber_quotient) = psi.cokernel();
    let down = p_quotient.compose(&s.projection)?;
    if !down.compose(&psi)?.is_zero() {
        return Err(CohomotopyError::Inconsistent("ψ[β] does not lie over 2(−)∪β".into()));
    }
    let cols = (0..fiber.ngens())
        .map(|t| {
            let lift = fiber_quotient.preimage(&fiber.generator(t)).ok_or_else(|| {
                CohomotopyError::Inconsistent("quotient onto coker ψ[β] is not surjective".into())
            })?;
            Ok(down.apply(&lift))
        })
        .collect::<Result<Vec<_>>>()?;
    let to_p = GroupHom::new(
        fiber.clone(),
        report.p_beta.clone(),
        IntMatrix::from_columns(report.p_beta.ngens(), &cols),
    )?;
    let q = fiber_quotient.compose(&s.inclusion)?;

    if !to_p.is_surjective() {
        return Err(CohomotopyError::Inconsistent("coker ψ[β] → P_β is not onto".into()));
    }
    if !to_p.compose(&q)?.is_zero() {
        return Err(CohomotopyError::Inconsistent("image of q is not in the kernel of coker ψ[β] → P_β".into()));
    }
    let q_image: Vec<Vec<BigInt>> = q.matrix().columns().collect();
    let (_, to_p_kernel) = to_p.kernel();
    if to_p_kernel.iter().any(|k| !fiber.in_span(&q_image, k)) {
        return Err(CohomotopyError::Inconsistent("kernel of coker ψ[β] → P_β exceeds the image of q".into()));
    }
    let (_, ker_q) = q.kernel();
    let coker = &s.coker;
    if ker_q.iter().any(|k| !coker.in_span(&report.q_kernel, k))
        || report.q_kernel.iter().any(|k| !q.apply(k).iter().all(Zero::is_zero))
    {
        return Err(CohomotopyError::Inconsistent(
            "kernel of q differs from the classes Sq²(a) with δ_1(a) ∈ im((−)∪β)".into(),
        ));
    }
    report.fiber = Some(fiber);
    report.to_p_beta = Some(to_p);
    report.q = Some(q);
    Ok(report)
}

/// Generators of `{Sq²(a) : δ_1(a) ∈ im((−) ∪ β)}` inside `coker(Sq̄²)`.
fn q_kernel_search(
    model: &CohomologyModel,
    s: &SphereMapGroup,
    beta: &CohomologyClass,
) -> Result<(Vec<Vec<BigInt>>, QKernelSearch)> {
    let h2 = model.group(2, Z2)?;
    let delta = model.bockstein(2, 1)?;
    let sq = model.sq2(2, Z2)?;
    let cup = cup_with_beta(model, beta)?;
    let h3 = cup.target();
    let image: Vec<Vec<BigInt>> = cup.matrix().columns().collect();
    let to_coker = |a: &[BigInt]| s.coker_quotient.apply(&sq.apply(a));

    let small = h2.free_rank() == 0 && h2.ngens() as u32 <= Q_SEARCH_CAP;
    let (admissible, method) = if small {
        let elems = h2
            .elements()
            .expect("finite group")
            .into_iter()
            .filter(|a| h3.in_span(&image, &delta.apply(a)))
            .collect();
        (elems, QKernelSearch::Exhaustive)
    } else {
        let (_, cq) = cup.cokernel();
        let (_, gens) = cq.compose(&delta)?.kernel();
        (gens, QKernelSearch::KernelGenerators)
    };
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for a in &admissible {
        let v = to_coker(a);
        if !s.coker.is_zero(&v) && !s.coker.in_span(&out, &v) {
            out.push(v);
        }
    }
    Ok((out, method))
}

/// All fibers over `β` in `H^2(X;Z)`: every element when `H^2` is finite,
/// otherwise free coordinates in `[−bound, bound]`.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub reports: Vec<FiberReport>,
    /// `Σ |fiber|` over realizable `β`, when every fiber is finite.
    pub total: Option<BigInt>,
}

pub fn pi2_enumerate(model: &CohomologyModel, bound: Option<u64>) -> Result<Enumeration> {
    let h2 = model.group(2, Z)?.clone();
    if h2.free_rank() > 0 && bound.is_none() {
        return Err(CohomotopyError::Usage(format!(
            "H^2(X;Z) = {h2} is infinite; supply a bound for the free coordinates"
        )));
    }
    let s = pi2_base(model)?;
    let b = bound.unwrap_or(0) as i64;
    let ranges: Vec<Vec<BigInt>> = h2
        .generator_orders()
        .iter()
        .map(|d| {
            if d.is_zero() {
                (-b..=b).map(BigInt::from).collect()
            } else {
                num_iter(d)
            }
        })
        .collect();
    let mut reports = Vec::new();
    let mut total = Some(BigInt::zero());
    for coords in cartesian(&ranges) {
        let beta = model.class(2, Z, &coords)?;
        let r = pi2_fiber_with(model, &s, &beta)?;
        if r.realizable {
            total = match (total, r.fiber_order()) {
                (Some(t), Some(o)) => Some(t + o),
                _ => None,
            };
        }
        reports.push(r);
    }
    Ok(Enumeration { reports, total })
}

fn num_iter(d: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut i = BigInt::zero();
    while &i < d {
        out.push(i.clone());
        i += 1;
    }
    out
}

fn cartesian(ranges: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// `P_β`, the fiber over `β` when `dim X ≤ 3`.
pub fn pontrjagin_fiber(model: &CohomologyModel, beta: &CohomologyClass) -> Result<FgAbGroup> {
    if model.dimension() > 3 {
        return Err(CohomotopyError::Usage(format!(
            "the Pontrjagin fiber needs dim X ≤ 3 (model has dimension {}); use pi2_fiber",
            model.dimension()
        )));
    }
    Ok(p_beta(model, beta)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldType {
    /// Some integral class has odd square.
    OddSquare = 1,
    /// Every mod 2 class squares to zero.
    EvenMod2 = 2,
    /// Integral squares even, some mod 2 square nonzero.
    Mixed = 3,
}

impl ManifoldType {
    pub fn number(self) -> u8 {
        self as u8
    }
}

/// Type of a closed orientable 4-manifold from its cup square forms. The
/// square map is additive mod 2, so testing generators suffices.
pub fn classify_4manifold_type(model: &CohomologyModel) -> Result<ManifoldType> {
    if model.dimension() != 4 {
        return Err(CohomotopyError::Refused(format!("model has dimension {}, not 4", model.dimension())));
    }
    let h4 = model.group(4, Z)?;
    if h4.free_rank() != 1 || !h4.torsion().is_empty() {
        return Err(CohomotopyError::Refused(format!("H^4(X;Z) = {h4} is not infinite cyclic")));
    }
    let two = BigInt::from(2);
    let integral = model.cup_table(2, 2, Z)?;
    let h2 = model.group(2, Z)?;
    for i in 0..h2.free_rank() {
        let g = h2.generator(i);
        let square = &integral.apply(&g, &g)[0];
        if (square % &two).abs().is_one() {
            return Ok(ManifoldType::OddSquare);
        }
    }
    let mod2 = model.cup_table(2, 2, Z2)?;
    let h2m = model.group(2, Z2)?;
    for i in 0..h2m.ngens() {
        let g = h2m.generator(i);
        if !mod2.target.is_zero(&mod2.apply(&g, &g)) {
            return Ok(ManifoldType::Mixed);
        }
    }
    Ok(ManifoldType::EvenMod2)
}
