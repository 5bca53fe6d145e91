#![allow(dead_code)]

use std::path::PathBuf;

use cohomotopy::abelian::{smith_normal_form, FgAbGroup, GroupHom, IntMatrix};
use cohomotopy::cohomotopy::{
    pi2_fiber_with, psi_beta_signed, sphere_maps, two_lift_hom, Sign, SphereMapGroup,
};
use cohomotopy::model::{load_algebraic_model, model_from_simplicial, CohomologyClass, CohomologyModel, Coefficients};
use cohomotopy::simplicial::{Cochain, SimplicialComplex};
use cohomotopy::steenrod::{cup, cup_i, sq_cochain};
use cohomotopy::torsor::{is_homomorphism, FiniteBiTorsor, FiniteGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub const Z: Coefficients = Coefficients::Integers;
pub const Z2: Coefficients = Coefficients::Mod(2);

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn complex(name: &str) -> SimplicialComplex {
    SimplicialComplex::parse(&fixture(name)).unwrap()
}

pub fn algebraic(name: &str) -> CohomologyModel {
    load_algebraic_model(&fixture(name)).unwrap()
}

/// S² × S¹ as the ordered product of ∂Δ³ with a triangle.
pub fn s2xs1_complex() -> SimplicialComplex {
    complex("s2.txt").product(&complex("circle.txt")).unwrap()
}

pub const SIMPLICIAL_FIXTURES: [&str; 6] = ["s2.txt", "s3.txt", "circle.txt", "circle6.txt", "rp2.txt", "torus.txt"];
pub const ALGEBRAIC_FIXTURES: [&str; 7] = [
    "s2xs1.json",
    "s2xt2.json",
    "cp2.json",
    "s2xs2.json",
    "t4.json",
    "enriques.json",
    "moore_wedge_s4.json",
];

/// Every fixture as a named model, including the simplicial S² × S¹.
pub fn all_models() -> Vec<(String, CohomologyModel)> {
    let mut out: Vec<(String, CohomologyModel)> = SIMPLICIAL_FIXTURES
        .iter()
        .map(|n| (n.to_string(), model_from_simplicial(&complex(n), None).unwrap()))
        .collect();
    out.push(("s2 × circle".into(), model_from_simplicial(&s2xs1_complex(), None).unwrap()));
    out.extend(ALGEBRAIC_FIXTURES.iter().map(|n| (n.to_string(), algebraic(n))));
    out
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `Z^free ⊕ Z/t_1 ⊕ …` up to isomorphism, for any list of orders.
pub fn abelian(free: usize, torsion: &[i64]) -> FgAbGroup {
    let mut rel = IntMatrix::zeros(free + torsion.len(), torsion.len());
    for (j, &d) in torsion.iter().enumerate() {
        rel[(free + j, j)] = BigInt::from(d);
    }
    FgAbGroup::cokernel(&rel)
}

pub fn same_group(g: &FgAbGroup, free: usize, torsion: &[i64]) -> Check {
    let want = abelian(free, torsion);
    ensure!(g.isomorphic(&want), "got {g}, expected {want}");
    Ok(())
}

// ---------------------------------------------------------------------------
// Integer oracles, written independently of the library.

/// Fraction-free determinant.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// gcd of all k × k minors.
pub fn minor_gcd(a: &[Vec<i64>], k: usize) -> BigInt {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut g = BigInt::zero();
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let m = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| BigInt::from(a[i][j])).collect())
                .collect();
            g = g.gcd(&bareiss(m));
        }
    }
    g
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn check_snf(a: &[Vec<i64>]) -> Check {
    let cols = a.first().map_or(0, Vec::len);
    let m = IntMatrix::from_rows(a, cols);
    let r = smith_normal_form(&m);
    ensure!(&(&r.u * &m) * &r.v == r.s, "U·A·V ≠ S for {a:?}");
    ensure!(&r.u * &r.u_inv == IntMatrix::identity(m.rows()), "U·U⁻¹ ≠ I for {a:?}");
    ensure!(bareiss(to_rows(&r.u)).abs().is_one(), "U not unimodular for {a:?}");
    ensure!(bareiss(to_rows(&r.v)).abs().is_one(), "V not unimodular for {a:?}");
    let (rows, n) = m.shape();
    for i in 0..rows {
        for j in 0..n {
            ensure!(i == j || r.s[(i, j)].is_zero(), "S not diagonal for {a:?}");
        }
    }
    let d: Vec<BigInt> = (0..rows.min(n)).map(|i| r.s[(i, i)].clone()).collect();
    let rank = d.iter().take_while(|x| !x.is_zero()).count();
    ensure!(d[rank..].iter().all(Zero::is_zero), "zero diagonal entry before a nonzero one for {a:?}");
    for i in 0..rank {
        ensure!(d[i].is_positive(), "negative invariant factor for {a:?}");
        if i + 1 < rank {
            ensure!(d[i + 1].is_multiple_of(&d[i]), "divisibility fails for {a:?}");
        }
    }
    let mut prefix = BigInt::one();
    for k in 1..=rows.min(n) {
        let g = minor_gcd(a, k);
        if k <= rank {
            prefix *= &d[k - 1];
            ensure!(g == prefix, "d_1…d_{k} = {prefix} but gcd of {k}-minors is {g} for {a:?}");
        } else {
            ensure!(g.is_zero(), "rank {rank} but a nonzero {k}-minor exists for {a:?}");
        }
    }
    Ok(())
}

pub fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let r = rng.gen_range(1..=4);
    let c = rng.gen_range(1..=5);
    let sparse = rng.gen_bool(0.3);
    (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(-9..=9) })
                .collect()
        })
        .collect()
}

/// Rank over `F_p` by Gaussian elimination.
pub fn rank_mod_p(m: &IntMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| (v % BigInt::from(p)).try_into().unwrap()).map(|v: i64| v.rem_euclid(p)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][col] % p == 1).unwrap();
        for j in 0..m.cols() {
            a[rank][j] = a[rank][j] * inv % p;
        }
        for i in 0..a.len() {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..m.cols() {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim H^q(X; F_p)` from coboundary ranks.
pub fn betti_mod_p(x: &SimplicialComplex, q: usize, p: i64) -> usize {
    let n = x.count(q);
    let out = if q < x.dimension() { rank_mod_p(&x.coboundary(q, 0).unwrap(), p) } else { 0 };
    let inc = if q > 0 { rank_mod_p(&x.coboundary(q - 1, 0).unwrap(), p) } else { 0 };
    n - out - inc
}

// ---------------------------------------------------------------------------
// Cochain identities.

pub fn random_cochain(x: &SimplicialComplex, q: usize, modulus: u64, rng: &mut impl Rng) -> Cochain {
    let vals = (0..x.count(q)).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
    Cochain::new(x, q, modulus, vals)
}

pub fn check_cochain_identities(x: &SimplicialComplex, rng: &mut impl Rng) -> Check {
    let dim = x.dimension();
    for m in [0u64, 2, 4] {
        for q in 0..=dim {
            let c = random_cochain(x, q, m, rng);
            let dd = c.coboundary(x).unwrap().coboundary(x).unwrap();
            ensure!(dd.is_zero(), "δ² ≠ 0 in degree {q} mod {m}");
        }
    }
    for p in 0..dim {
        for q in 0..dim - p {
            let a = random_cochain(x, p, 0, rng);
            let b = random_cochain(x, q, 0, rng);
            let lhs = cup(x, &a, &b).unwrap().coboundary(x).unwrap();
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let rhs = cup(x, &a.coboundary(x).unwrap(), &b)
                .unwrap()
                .add(&cup(x, &a, &b.coboundary(x).unwrap()).unwrap().scale(sign))
                .unwrap();
            ensure!(lhs == rhs, "Leibniz fails for degrees ({p},{q})");
        }
    }
    // δ(a ∪_i b) = a ∪_{i−1} b + b ∪_{i−1} a + δa ∪_i b + a ∪_i δb  (mod 2)
    for p in 0..=dim {
        for q in 0..=dim {
            for i in 1..=p.min(q) {
                if p + q - i + 1 > dim {
                    continue;
                }
                let a = random_cochain(x, p, 2, rng);
                let b = random_cochain(x, q, 2, rng);
                let lhs = cup_i(x, &a, &b, i).unwrap().coboundary(x).unwrap();
                let rhs = [
                    cup_i(x, &a, &b, i - 1),
                    cup_i(x, &b, &a, i - 1),
                    cup_i(x, &a.coboundary(x).unwrap(), &b, i),
                    cup_i(x, &a, &b.coboundary(x).unwrap(), i),
                ]
                .into_iter()
                .map(Result::unwrap)
                .reduce(|u, v| u.add(&v).unwrap())
                .unwrap();
                ensure!(lhs == rhs, "cup-{i} coboundary formula fails for degrees ({p},{q})");
            }
        }
    }
    Ok(())
}

/// `Sq⁰ = id`, `Sq^q = cup square`, `Sq¹ = ρ∘δ_1` on every class of a
/// simplicial model, plus representative independence of the squares.
pub fn check_squares(model: &CohomologyModel, rng: &mut impl Rng) -> Check {
    let s = model.simplicial().ok_or("not simplicial")?;
    let x = s.complex();
    for q in 0..=x.dimension() {
        let g = model.group(q, Z2).unwrap().clone();
        for a in g.elements().unwrap() {
            let z = s.representative(q, Z2, &a).unwrap();
            ensure!(sq_cochain(x, &z, 0).unwrap() == z, "Sq⁰ ≠ id on H^{q}");
            ensure!(sq_cochain(x, &z, q).unwrap() == cup(x, &z, &z).unwrap(), "Sq^{q} ≠ cup square");
            let c = random_cochain(x, q.saturating_sub(1), 2, rng);
            let z2 = if q == 0 { z.clone() } else { z.add(&c.coboundary(x).unwrap()).unwrap() };
            for k in 0..=q.min(2) {
                if q + k > x.dimension() {
                    continue;
                }
                let c1 = s.class_of(&sq_cochain(x, &z, k).unwrap(), Z2).unwrap();
                let c2 = s.class_of(&sq_cochain(x, &z2, k).unwrap(), Z2).unwrap();
                ensure!(c1 == c2, "Sq^{k} depends on the representative in degree {q}");
            }
            if q < x.dimension() {
                let sq1 = s.class_of(&sq_cochain(x, &z, 1).unwrap(), Z2).unwrap();
                let class = model.class(q, Z2, &a).unwrap();
                let beta = model.bockstein_class(&class).unwrap();
                let reduced = model.reduction(q + 1, Z, Z2).unwrap().apply(&beta.coords);
                ensure!(sq1 == reduced, "Sq¹ ≠ ρδ₁ in degree {q}");
            }
            let class = model.class(q, Z2, &a).unwrap();
            let via_rep = model.sq2_class(&class).unwrap().coords;
            let via_table = model.sq2(q, Z2).unwrap().apply(&a);
            ensure!(via_rep == via_table, "class-level Sq² disagrees with the Sq² table in degree {q}");
        }
    }
    Ok(())
}

/// `im(δ_k) = ker(2^k : H^{q+1}(X;Z) → H^{q+1}(X;Z))`.
pub fn check_bockstein_exactness(model: &CohomologyModel) -> Check {
    for q in 0..model.dimension() {
        for k in 1..=model.k_max().max(1) {
            let delta = model.bockstein(q, k).unwrap();
            let target = model.group(q + 1, Z).unwrap().clone();
            let times = GroupHom::identity(target.clone()).scale(&BigInt::from(1u64 << k));
            let (_, kernel) = times.kernel();
            let image: Vec<Vec<BigInt>> = delta.matrix().columns().collect();
            for v in &image {
                ensure!(target.is_zero(&times.apply(v)), "δ_{k} image not killed by 2^{k} in degree {}", q + 1);
            }
            for v in &kernel {
                ensure!(target.in_span(&image, v), "ker 2^{k} not in im δ_{k} in degree {}", q + 1);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Cohomotopy properties.

pub fn random_perturbation(s: &SphereMapGroup, rng: &mut impl Rng) -> Vec<Vec<BigInt>> {
    (0..s.section_data.len())
        .map(|_| (0..s.coker.ngens()).map(|_| BigInt::from(rng.gen_range(0..2))).collect())
        .collect()
}

pub fn check_section_independence(s: &SphereMapGroup, rng: &mut impl Rng) -> Check {
    let base = two_lift_hom(s).unwrap();
    for _ in 0..8 {
        let t = s.perturb_section(&random_perturbation(s, rng)).unwrap();
        ensure!(two_lift_hom(&t).unwrap().matrix() == base.matrix(), "two_lift_hom depends on the section");
    }
    Ok(())
}

/// A spread of β values: every element of a small `H^2`, otherwise a box.
pub fn sample_betas(model: &CohomologyModel) -> Vec<CohomologyClass> {
    let g = model.group(2, Z).unwrap().clone();
    let orders = g.generator_orders();
    let width: i64 = match g.free_rank() {
        0..=2 => 2,
        3..=4 => 1,
        _ => 0,
    };
    let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
    for d in &orders {
        let range: Vec<i64> = if d.is_zero() {
            (-width..=width).collect()
        } else {
            (0..i64::try_from(d).unwrap()).collect()
        };
        coords = coords
            .into_iter()
            .flat_map(|p| range.iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    if width == 0 {
        for i in 0..g.free_rank() {
            for j in i..g.free_rank() {
                let mut v = vec![0; g.ngens()];
                v[i] += 1;
                v[j] += 1;
                coords.push(v);
            }
        }
    }
    coords.iter().map(|c| model.class_i64(2, Z, c).unwrap()).collect()
}

pub fn check_sign_and_negation(model: &CohomologyModel, s: &SphereMapGroup, beta: &CohomologyClass) -> Check {
    let plus = psi_beta_signed(model, s, beta, Sign::Plus).unwrap();
    let minus = psi_beta_signed(model, s, beta, Sign::Minus).unwrap();
    let (a, _) = plus.cokernel();
    let (b, _) = minus.cokernel();
    ensure!(a.isomorphic(&b), "coker ψ depends on the sign: {a} vs {b}");
    let ip: Vec<Vec<BigInt>> = plus.matrix().columns().collect();
    let im: Vec<Vec<BigInt>> = minus.matrix().columns().collect();
    ensure!(
        ip.iter().all(|v| s.group.in_span(&im, v)) && im.iter().all(|v| s.group.in_span(&ip, v)),
        "image of ψ depends on the sign"
    );
    let neg = model.class(2, Z, &beta.coords.iter().map(|c| -c).collect::<Vec<_>>()).unwrap();
    let r1 = pi2_fiber_with(model, s, beta).unwrap();
    let r2 = pi2_fiber_with(model, s, &neg).unwrap();
    ensure!(r1.realizable == r2.realizable, "realizability differs between β and −β");
    if let (Some(f1), Some(f2)) = (&r1.fiber, &r2.fiber) {
        ensure!(f1.isomorphic(f2), "fiber over β is {f1} but over −β is {f2}");
    }
    Ok(())
}

pub fn check_order_accounting(model: &CohomologyModel, s: &SphereMapGroup, beta: &CohomologyClass) -> Check {
    let r = pi2_fiber_with(model, s, beta).map_err(|e| e.to_string())?;
    let Some(fiber) = &r.fiber else { return Ok(()) };
    let Some(order) = fiber.order() else { return Ok(()) };
    let p = r.p_beta.order().ok_or("finite fiber over an infinite P_β")?;
    let im_q = r.q.as_ref().unwrap().image().order().unwrap();
    ensure!(order == &p * &im_q, "|fiber| = {order} but |P_β|·|im q| = {p}·{im_q}");
    let coker_order = s.coker.order().unwrap();
    let ker_order = s.coker.subgroup(&r.q_kernel).order().unwrap();
    ensure!(coker_order == &ker_order * &im_q, "|coker| ≠ |ker q|·|im q|");
    Ok(())
}

pub fn sphere_maps_3(model: &CohomologyModel) -> Option<SphereMapGroup> {
    (model.dimension() <= 4).then(|| sphere_maps(model, 3).unwrap())
}

// ---------------------------------------------------------------------------
// Torsors.

pub fn torsor_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = (1..=24).map(|n| (format!("Z/{n}"), FiniteGroup::cyclic(n))).collect();
    out.extend((3..=12).map(|n| (format!("D{n}"), FiniteGroup::dihedral(n))));
    out.push(("S3".into(), FiniteGroup::symmetric(3)));
    out.push(("S4".into(), FiniteGroup::symmetric(4)));
    out.push(("Q8".into(), FiniteGroup::quaternion()));
    let c2 = FiniteGroup::cyclic(2);
    let c3 = FiniteGroup::cyclic(3);
    out.push(("Z/2×Z/2".into(), FiniteGroup::product(&c2, &c2)));
    out.push(("Z/2×S3".into(), FiniteGroup::product(&c2, &FiniteGroup::symmetric(3))));
    out.push(("Z/3×Q8".into(), FiniteGroup::product(&c3, &FiniteGroup::quaternion())));
    out.push(("Z/2×D6".into(), FiniteGroup::product(&c2, &FiniteGroup::dihedral(6))));
    out
}

pub fn check_torsor(b: &FiniteBiTorsor) -> Check {
    let g = b.left_group();
    let h = b.right_group();
    let n = b.size();
    for x in 0..n {
        let isotropy_l = (0..g.order()).filter(|&a| b.act_left(a, x) == x).count();
        let isotropy_r = (0..h.order()).filter(|&a| b.act_right(x, a) == x).count();
        ensure!(isotropy_l == 1 && isotropy_r == 1, "nontrivial isotropy at {x}");
        let gamma = b.gamma_x(x).unwrap();
        let bar = b.gamma_bar_x(x).unwrap();
        ensure!(is_homomorphism(g, h, &gamma), "γ_{x} is not multiplicative");
        ensure!(is_homomorphism(h, g, &bar), "γ̄_{x} is not multiplicative");
        ensure!((0..g.order()).all(|a| bar[gamma[a]] == a), "γ̄_{x} ∘ γ_{x} ≠ id");
        ensure!((0..h.order()).all(|a| gamma[bar[a]] == a), "γ_{x} ∘ γ̄_{x} ≠ id");
        for a in 0..g.order() {
            ensure!(b.act_left(a, x) == b.act_right(x, gamma[a]), "g·x ≠ x·γ_x(g)");
        }
    }
    for x1 in 0..n {
        for x2 in 0..n {
            let c = b.verify_conjugacy(x1, x2).map_err(|e| e.to_string())?;
            ensure!(b.act_right(x2, c) == x1, "conjugator does not carry x2 to x1");
            if x1 == x2 {
                ensure!(c == h.identity(), "h ≠ e for x1 = x2");
            }
            if g.is_abelian() {
                ensure!(b.gamma_x(x1).unwrap() == b.gamma_x(x2).unwrap(), "abelian γ_x differ");
            }
        }
    }
    Ok(())
}

/// The translation torsor and one twisted by each of a few automorphisms.
pub fn torsor_fixtures(g: &FiniteGroup) -> Vec<FiniteBiTorsor> {
    let mut out = vec![FiniteBiTorsor::translation(g)];
    if g.order() <= 12 {
        for phi in g.automorphisms().into_iter().take(4) {
            out.push(FiniteBiTorsor::twisted(g, &phi).unwrap());
        }
    } else {
        let c = g.generators()[0];
        out.push(FiniteBiTorsor::twisted(g, &g.conjugation(c)).unwrap());
    }
    out
}
