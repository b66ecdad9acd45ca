use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::lattice::LatticePoint;

/// Insertion-ordered set of equal-length integer vectors stored flat.
#[derive(Clone)]
pub struct PointSet {
    dim: usize,
    coords: Vec<i64>,
    table: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet { dim, coords: Vec::new(), table: HashTable::new(), hasher: DefaultHashBuilder::default() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn lattice_point(&self, i: usize) -> LatticePoint {
        LatticePoint(self.point(i).to_vec())
    }

    pub fn get(&self, x: &[i64]) -> Option<usize> {
        let h = self.hasher.hash_one(x);
        let (coords, dim) = (&self.coords, self.dim);
        self.table.find(h, |&i| &coords[i as usize * dim..(i as usize + 1) * dim] == x).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.get(x).is_some()
    }

    /// Index of `x`, and whether it was newly added.
    pub fn insert(&mut self, x: &[i64]) -> (usize, bool) {
        debug_assert_eq!(x.len(), self.dim);
        if let Some(i) = self.get(x) {
            return (i, false);
        }
        let i = self.len();
        self.coords.extend_from_slice(x);
        let h = self.hasher.hash_one(x);
        let (coords, dim, hasher) = (&self.coords, self.dim, &self.hasher);
        self.table.insert_unique(h, i as u32, |&j| hasher.hash_one(&coords[j as usize * dim..(j as usize + 1) * dim]));
        (i, true)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim.max(1)).take(self.len())
    }

    pub fn to_sorted_points(&self) -> Vec<LatticePoint> {
        let mut v: Vec<LatticePoint> = self.iter().map(|p| LatticePoint(p.to_vec())).collect();
        v.sort();
        v
    }
}

impl core::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_lookup() {
        let mut s = PointSet::new(3);
        assert_eq!(s.insert(&[1, 2, 3]), (0, true));
        assert_eq!(s.insert(&[0, 0, 0]), (1, true));
        assert_eq!(s.insert(&[1, 2, 3]), (0, false));
        assert_eq!(s.get(&[0, 0, 0]), Some(1));
        assert_eq!(s.get(&[0, 0, 1]), None);
        for i in 0..1000 {
            s.insert(&[i, -i, i * i]);
        }
        assert_eq!(s.len(), 1001);
        assert_eq!(s.get(&[500, -500, 250000]), Some(501));
    }
}
