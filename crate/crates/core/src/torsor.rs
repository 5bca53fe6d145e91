//! Finite bi-torsors: a set with commuting free transitive actions of `G`
//! on the left and `H` on the right, and the isomorphisms `γ_x : G → H`
//! determined by `g·x = x·γ_x(g)`.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsorError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("torsor axiom violated: {0}")]
    Axiom(String),
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("conjugacy identity fails at g = {g}")]
    ConjugacyFailure { g: usize },
}

/// A finite group on `0..order` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, TorsorError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(TorsorError::NotAGroup("table is not a square table on 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| TorsorError::NotAGroup("no identity".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| TorsorError::NotAGroup(format!("{a} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(TorsorError::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverses,
        })
    }

    fn from_elements<T: Clone + Eq + std::hash::Hash>(elems: Vec<T>, mul: impl Fn(&T, &T) -> T) -> Self {
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        Self::from_table(table).expect("closed under a group law")
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_elements((0..n).collect(), |a, b| (a + b) % n)
    }

    /// Permutations of `0..n`, composed right to left; index 0 is the identity.
    pub fn symmetric(n: usize) -> Self {
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        Self::from_elements(perms, |a: &Vec<usize>, b: &Vec<usize>| b.iter().map(|&i| a[i]).collect())
    }

    /// Symmetries of the `n`-gon, order `2n`: `(r, s)` stands for `ρ^r σ^s`.
    pub fn dihedral(n: usize) -> Self {
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|s| (0..n).map(move |r| (r, s))).collect();
        Self::from_elements(elems, |&(r1, s1), &(r2, s2)| {
            let r = if s1 == 0 { r1 + r2 } else { r1 + n - r2 };
            (r % n, s1 ^ s2)
        })
    }

    /// Quaternion group of order 8 as `±1, ±i, ±j, ±k`.
    pub fn quaternion() -> Self {
        // (sign, unit) with unit 0..4 = 1, i, j, k.
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let elems: Vec<(bool, usize)> = [false, true].iter().flat_map(|&s| (0..4).map(move |u| (s, u))).collect();
        Self::from_elements(elems, |&(s1, u1), &(s2, u2)| {
            let (s, u) = unit_mul(u1, u2);
            (s1 ^ s2 ^ s, u)
        })
    }

    pub fn product(a: &Self, b: &Self) -> Self {
        let elems: Vec<(usize, usize)> = (0..a.order()).flat_map(|x| (0..b.order()).map(move |y| (x, y))).collect();
        Self::from_elements(elems, |&(a1, b1), &(a2, b2)| (a.mul(a1, a2), b.mul(b1, b2)))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A generating set, chosen greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in 0..self.order() {
            if !span.contains(&a) {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    frontier.push(b);
                }
            }
        }
        (0..self.order()).filter(|&a| seen[a]).collect()
    }

    /// Extends an assignment on generators to a homomorphism into `target`,
    /// if one exists.
    pub fn extend_homomorphism(&self, target: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut f: Vec<Option<usize>> = vec![None; self.order()];
        f[self.identity] = Some(target.identity());
        let mut frontier = vec![self.identity];
        while let Some(a) = frontier.pop() {
            let fa = f[a].expect("visited");
            for (&g, &img) in gens.iter().zip(images) {
                let b = self.mul(a, g);
                let fb = target.mul(fa, img);
                match f[b] {
                    None => {
                        f[b] = Some(fb);
                        frontier.push(b);
                    }
                    Some(v) if v != fb => return None,
                    _ => {}
                }
            }
        }
        let f: Vec<usize> = f.into_iter().collect::<Option<_>>()?;
        is_homomorphism(self, target, &f).then_some(f)
    }

    /// All automorphisms, found by extending maps on a generating set.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let n = self.order();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        loop {
            if let Some(f) = self.extend_homomorphism(self, &gens, &images) {
                let mut seen = vec![false; n];
                f.iter().for_each(|&v| seen[v] = true);
                if seen.iter().all(|&s| s) {
                    out.push(f);
                }
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    return out;
                }
                images[i] += 1;
                if images[i] < n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    /// `x ↦ c x c⁻¹`.
    pub fn conjugation(&self, c: usize) -> Vec<usize> {
        (0..self.order()).map(|x| self.mul(self.mul(c, x), self.inv(c))).collect()
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Whether `f` (as a table on `0..source.order()`) is multiplicative.
pub fn is_homomorphism(source: &FiniteGroup, target: &FiniteGroup, f: &[usize]) -> bool {
    f.len() == source.order()
        && (0..source.order())
            .all(|a| (0..source.order()).all(|b| f[source.mul(a, b)] == target.mul(f[a], f[b])))
}

/// A bi-torsor on the carrier `0..size`.
#[derive(Clone, Debug)]
pub struct FiniteBiTorsor {
    left: FiniteGroup,
    right: FiniteGroup,
    /// `left_action[g][x] = g·x`.
    left_action: Vec<Vec<usize>>,
    /// `right_action[x][h] = x·h`.
    right_action: Vec<Vec<usize>>,
}

impl FiniteBiTorsor {
    pub fn new(
        left: FiniteGroup,
        right: FiniteGroup,
        left_action: Vec<Vec<usize>>,
        right_action: Vec<Vec<usize>>,
    ) -> Result<Self, TorsorError> {
        let size = right_action.len();
        let axiom = |m: String| Err(TorsorError::Axiom(m));
        if left_action.len() != left.order() || left_action.iter().any(|r| r.len() != size || r.iter().any(|&v| v >= size)) {
            return axiom("left action table has the wrong shape".into());
        }
        if right_action.iter().any(|r| r.len() != right.order() || r.iter().any(|&v| v >= size)) {
            return axiom("right action table has the wrong shape".into());
        }
        for x in 0..size {
            if left_action[left.identity()][x] != x || right_action[x][right.identity()] != x {
                return axiom(format!("identity does not fix {x}"));
            }
            for a in 0..left.order() {
                for b in 0..left.order() {
                    if left_action[left.mul(a, b)][x] != left_action[a][left_action[b][x]] {
                        return axiom(format!("left action not compatible at ({a}, {b}, {x})"));
                    }
                }
            }
            for a in 0..right.order() {
                for b in 0..right.order() {
                    if right_action[x][right.mul(a, b)] != right_action[right_action[x][a]][b] {
                        return axiom(format!("right action not compatible at ({x}, {a}, {b})"));
                    }
                }
            }
            for g in 0..left.order() {
                for h in 0..right.order() {
                    if right_action[left_action[g][x]][h] != left_action[g][right_action[x][h]] {
                        return axiom(format!("actions do not commute at ({g}, {x}, {h})"));
                    }
                }
            }
        }
        // Free and transitive: each orbit map is a bijection.
        if left.order() != size || right.order() != size {
            return axiom(format!(
                "carrier has {size} points but the groups have orders {} and {}",
                left.order(),
                right.order()
            ));
        }
        for x in 0..size {
            let mut hit_l = vec![false; size];
            let mut hit_r = vec![false; size];
            for g in 0..size {
                hit_l[left_action[g][x]] = true;
                hit_r[right_action[x][g]] = true;
            }
            if hit_l.iter().any(|h| !h) || hit_r.iter().any(|h| !h) {
                return axiom(format!("an action is not free and transitive at {x}"));
            }
        }
        Ok(Self {
            left,
            right,
            left_action,
            right_action,
        })
    }

    /// `G` acting on itself by left and right translation.
    pub fn translation(g: &FiniteGroup) -> Self {
        Self::twisted(g, &(0..g.order()).collect::<Vec<_>>()).expect("translation torsor")
    }

    /// Carrier `G`, with `h ∈ H = G` acting on the right through the
    /// automorphism `phi`: `x·h = x φ(h)`.
    pub fn twisted(g: &FiniteGroup, phi: &[usize]) -> Result<Self, TorsorError> {
        let n = g.order();
        let left = (0..n).map(|a| (0..n).map(|x| g.mul(a, x)).collect()).collect();
        let right = (0..n).map(|x| (0..n).map(|h| g.mul(x, phi[h])).collect()).collect();
        Self::new(g.clone(), g.clone(), left, right)
    }

    pub fn left_group(&self) -> &FiniteGroup {
        &self.left
    }

    pub fn right_group(&self) -> &FiniteGroup {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.right_action.len()
    }

    pub fn act_left(&self, g: usize, x: usize) -> usize {
        self.left_action[g][x]
    }

    pub fn act_right(&self, x: usize, h: usize) -> usize {
        self.right_action[x][h]
    }

    fn check_point(&self, x: usize) -> Result<(), TorsorError> {
        if x < self.size() {
            Ok(())
        } else {
            Err(TorsorError::OutOfRange(x))
        }
    }

    /// The unique `h` with `x·h = y`.
    pub fn right_difference(&self, x: usize, y: usize) -> Result<usize, TorsorError> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok((0..self.right.order())
            .find(|&h| self.right_action[x][h] == y)
            .expect("right action is transitive"))
    }

    /// The unique `g` with `g·x = y`.
    pub fn left_difference(&self, x: usize, y: usize) -> Result<usize, TorsorError> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok((0..self.left.order())
            .find(|&g| self.left_action[g][x] == y)
            .expect("left action is transitive"))
    }

    /// `γ_x : G → H`, `g·x = x·γ_x(g)`.
    pub fn gamma_x(&self, x: usize) -> Result<Vec<usize>, TorsorError> {
        self.check_point(x)?;
        (0..self.left.order())
            .map(|g| self.right_difference(x, self.left_action[g][x]))
            .collect()
    }

    /// `γ̄_x : H → G`, `γ̄_x(h)·x = x·h`.
    pub fn gamma_bar_x(&self, x: usize) -> Result<Vec<usize>, TorsorError> {
        self.check_point(x)?;
        (0..self.right.order())
            .map(|h| self.left_difference(x, self.right_action[x][h]))
            .collect()
    }

    /// Finds `h` with `x1 = x2·h` and checks `γ_{x1}(g) = h⁻¹ γ_{x2}(g) h`
    /// for every `g`.
    pub fn verify_conjugacy(&self, x1: usize, x2: usize) -> Result<usize, TorsorError> {
        let h = self.right_difference(x2, x1)?;
        let g1 = self.gamma_x(x1)?;
        let g2 = self.gamma_x(x2)?;
        let hinv = self.right.inv(h);
        for g in 0..self.left.order() {
            if g1[g] != self.right.mul(self.right.mul(hinv, g2[g]), h) {
                return Err(TorsorError::ConjugacyFailure { g });
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(!FiniteGroup::quaternion().is_abelian());
        assert!(FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)).is_abelian());
    }

    #[test]
    fn cyclic_translation_gamma_is_identity() {
        let g = FiniteGroup::cyclic(5);
        let b = FiniteBiTorsor::translation(&g);
        for x in 0..5 {
            assert_eq!(b.gamma_x(x).unwrap(), (0..5).collect::<Vec<_>>());
        }
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        let g = FiniteGroup::cyclic(2);
        let err = FiniteBiTorsor::new(g.clone(), g, vec![vec![0, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(err, Err(TorsorError::Axiom(_))));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FiniteGroup::symmetric(3).automorphisms().len(), 6);
        assert_eq!(FiniteGroup::cyclic(8).automorphisms().len(), 4);
    }
}
