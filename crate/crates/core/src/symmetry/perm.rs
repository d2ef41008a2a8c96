//! Permutations and a deterministic Schreier-Sims stabilizer chain.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

/// A permutation of `0..n`, stored as the image of each point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images.into_iter().map(|i| i as u32).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.apply(i);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    /// `transversal[β]` maps `point` to `β`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(n: usize, point: usize, gens: Vec<Permutation>) -> Self {
        let mut l = Level { point, gens, transversal: vec![None; n], orbit: Vec::new() };
        l.rebuild();
        l
    }

    fn rebuild(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.point] = Some(Permutation::identity(n));
        self.orbit = vec![self.point];
        let mut k = 0;
        while k < self.orbit.len() {
            let p = self.orbit[k];
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q].is_none() {
                    let u = self.transversal[p].as_ref().expect("orbit point").then(g);
                    self.transversal[q] = Some(u);
                    self.orbit.push(q);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// Deterministic Schreier-Sims from a generating set.
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = Vec::new();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().expect("non-identity"));
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let fixing: Vec<Permutation> = gens
                    .iter()
                    .filter(|g| base[..i].iter().all(|&x| g.apply(x) == x))
                    .cloned()
                    .collect();
                Level::new(degree, b, fixing)
            })
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut jump = None;
            'scan: for bi in 0..levels[iu].orbit.len() {
                let beta = levels[iu].orbit[bi];
                for gi in 0..levels[iu].gens.len() {
                    let level = &levels[iu];
                    let g = &level.gens[gi];
                    let u_beta = level.transversal[beta].as_ref().expect("orbit point");
                    let u_img = level.transversal[g.apply(beta)].as_ref().expect("orbit closed");
                    let schreier = u_beta.then(g).then(&u_img.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = strip(&levels, schreier, iu + 1);
                    if j < levels.len() || !h.is_identity() {
                        if j == levels.len() {
                            let p = h.first_moved().expect("non-identity residue");
                            levels.push(Level::new(degree, p, Vec::new()));
                        }
                        for l in &mut levels[iu + 1..=j] {
                            l.gens.push(h.clone());
                            l.rebuild();
                        }
                        jump = Some(j);
                        break 'scan;
                    }
                }
            }
            match jump {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        StabilizerChain { degree, levels }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit.len())).fold(BigUint::one(), |a, b| a * b)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = strip(&self.levels, g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }
}

/// Sift `g` through `levels[start..]`; returns the residue and the level
/// where sifting stopped (`levels.len()` if it went through).
fn strip(levels: &[Level], mut g: Permutation, start: usize) -> (Permutation, usize) {
    for (l, level) in levels.iter().enumerate().skip(start) {
        let beta = g.apply(level.point);
        match &level.transversal[beta] {
            Some(u) => g = g.then(&u.inverse()),
            None => return (g, l),
        }
    }
    (g, levels.len())
}

/// Orbits of a group given by generators, each sorted; listed by least element.
pub fn orbits(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for s in 0..degree {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut k = 0;
        while k < orb.len() {
            let p = orb[k];
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orb.push(q);
                }
            }
            k += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn symmetric_group_order() {
        for n in 2..=7usize {
            let c = StabilizerChain::new(n, &[cycle(n), transposition(n, 0, 1)]);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(c.order(), BigUint::from(fact), "S_{n}");
        }
    }

    #[test]
    fn cyclic_and_trivial() {
        assert_eq!(StabilizerChain::new(5, &[cycle(5)]).order(), BigUint::from(5u32));
        assert_eq!(StabilizerChain::new(4, &[]).order(), BigUint::from(1u32));
    }

    #[test]
    fn alternating_group() {
        // 3-cycles generate A_n
        let n = 6;
        let gens: Vec<Permutation> = (0..n - 2)
            .map(|i| {
                let mut v: Vec<usize> = (0..n).collect();
                v[i] = i + 1;
                v[i + 1] = i + 2;
                v[i + 2] = i;
                Permutation::from_images(v).unwrap()
            })
            .collect();
        let c = StabilizerChain::new(n, &gens);
        assert_eq!(c.order(), BigUint::from(360u32));
        assert!(!c.contains(&transposition(n, 0, 1)));
        let odd_cycle = Permutation::from_images(vec![1, 2, 3, 4, 0, 5]).unwrap();
        assert!(c.contains(&odd_cycle));
    }

    #[test]
    fn cube_rotations() {
        // rotation group of the cube acting on its 8 vertices (binary labels)
        let rot = |f: fn(usize, usize, usize) -> (usize, usize, usize)| {
            let imgs = (0..8)
                .map(|v| {
                    let (x, y, z) = f(v >> 2 & 1, v >> 1 & 1, v & 1);
                    x << 2 | y << 1 | z
                })
                .collect();
            Permutation::from_images(imgs).unwrap()
        };
        let a = rot(|x, y, z| (y, 1 - x, z));
        let b = rot(|x, y, z| (x, z, 1 - y));
        let c = StabilizerChain::new(8, &[a.clone(), b.clone()]);
        assert_eq!(c.order(), BigUint::from(24u32));
        assert!(c.contains(&a.then(&b).then(&a)));
        assert_eq!(orbits(8, &[a, b]).len(), 1);
    }

    #[test]
    fn inverse_and_then() {
        let p = Permutation::from_images(vec![2, 0, 1, 3]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(format!("{p:?}"), "(0 2 1)");
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }
}
