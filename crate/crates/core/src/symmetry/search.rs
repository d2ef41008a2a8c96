//! Backtrack search for a group given as the images of a fixed base.
//!
//! Levels are processed from the last base point to the first. At level `k`
//! the pointwise stabilizer of `base[..k]` is searched for elements moving
//! `base[k]` to each candidate outside the orbit already generated; the
//! group order is the product of the final orbit lengths.

use crate::budget::Meter;
use crate::error::Result;

pub(crate) trait Domain {
    type Elem: Clone;

    fn num_points(&self) -> usize;
    fn base(&self) -> &[usize];
    /// Points that may be the image of `base[images.len()]` given the
    /// images chosen for the earlier base points.
    fn candidates(&self, images: &[usize]) -> Vec<usize>;
    /// The element with these base images, if it exists.
    fn complete(&mut self, images: &[usize]) -> Option<Self::Elem>;
    fn apply(&self, g: &Self::Elem, p: usize) -> usize;
}

pub(crate) struct Chain<E> {
    pub generators: Vec<E>,
    pub orbit_sizes: Vec<usize>,
}

struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    fn new(n: usize) -> Self {
        Partition { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

pub(crate) fn search_chain<D: Domain>(d: &mut D, meter: &mut Meter) -> Result<Chain<D::Elem>> {
    let base = d.base().to_vec();
    let np = d.num_points();
    let mut generators = Vec::new();
    let mut orbit_sizes = vec![1; base.len()];
    // orbits of the group generated so far, i.e. by generators of levels >= k
    let mut part = Partition::new(np);
    for k in (0..base.len()).rev() {
        let fixed = &base[..k];
        let mut failed: Vec<usize> = Vec::new();
        for w in d.candidates(fixed) {
            let root = part.find(w);
            if root == part.find(base[k]) || failed.iter().any(|&f| part.find(f) == root) {
                continue;
            }
            let mut images = fixed.to_vec();
            images.push(w);
            match extend(d, &mut images, meter)? {
                Some(g) => {
                    for p in 0..np {
                        let q = d.apply(&g, p);
                        part.union(p, q);
                    }
                    generators.push(g);
                }
                None => failed.push(w),
            }
        }
        let r = part.find(base[k]);
        orbit_sizes[k] = (0..np).filter(|&p| part.find(p) == r).count();
    }
    Ok(Chain { generators, orbit_sizes })
}

fn extend<D: Domain>(d: &mut D, images: &mut Vec<usize>, meter: &mut Meter) -> Result<Option<D::Elem>> {
    if images.len() == d.base().len() {
        return Ok(d.complete(images));
    }
    for c in d.candidates(images) {
        meter.tick()?;
        images.push(c);
        let found = extend(d, images, meter)?;
        images.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
