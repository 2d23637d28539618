//! Partitions of a finite ground set `{0, .., n-1}` ordered by refinement,
//! with the family-level operators used to build them: connected components
//! of an arbitrary family, and flattening of a superfamily.

use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A set of disjoint nonempty blocks covering `{0, .., arity-1}`.
///
/// Blocks are kept sorted by least member, so two partitions are equal
/// exactly when their block vectors are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    arity: usize,
    blocks: Vec<BitSet>,
}

impl Partition {
    pub fn new(arity: usize, blocks: impl IntoIterator<Item = BitSet>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::NotAPartition("empty ground set".into()));
        }
        let mut seen = BitSet::new();
        let mut out = Vec::new();
        for b in blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            if b.bound() > arity {
                return Err(Error::NotAPartition(format!(
                    "block {b:?} exceeds ground set of {arity}"
                )));
            }
            if seen.intersects(&b) {
                return Err(Error::NotAPartition(format!("block {b:?} overlaps another")));
            }
            seen.union_with(&b);
            out.push(b);
        }
        if seen != BitSet::full(arity) {
            let missing = BitSet::full(arity).difference(&seen);
            return Err(Error::NotAPartition(format!("elements {missing:?} not covered")));
        }
        Ok(Self::from_canonical_parts(arity, out))
    }

    /// Builds from blocks already known to be a partition; only sorts.
    pub(crate) fn from_canonical_parts(arity: usize, mut blocks: Vec<BitSet>) -> Self {
        blocks.sort_unstable_by_key(|b| b.first());
        Self { arity, blocks }
    }

    /// The partition into singletons.
    pub fn bottom(arity: usize) -> Self {
        assert!(arity > 0, "partition of an empty ground set");
        Self {
            arity,
            blocks: (0..arity).map(BitSet::singleton).collect(),
        }
    }

    /// The trivial one-block partition.
    pub fn top(arity: usize) -> Self {
        assert!(arity > 0, "partition of an empty ground set");
        Self {
            arity,
            blocks: vec![BitSet::full(arity)],
        }
    }

    /// Reads a restricted-growth string: `labels[i]` is the block of element `i`.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![BitSet::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].insert(i);
        }
        Self::new(labels.len(), blocks.into_iter().filter(|b| !b.is_empty()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_bottom(&self) -> bool {
        self.blocks.len() == self.arity
    }

    pub fn is_top(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Index of the block holding `element`.
    pub fn block_of(&self, element: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(element))
    }

    /// Per-element block index.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.arity];
        for (bi, b) in self.blocks.iter().enumerate() {
            for e in b {
                labels[e] = bi;
            }
        }
        labels
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::SchemeMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    /// True iff every block of `self` lies inside some block of `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        let labels = other.labels();
        Ok(self.blocks.iter().all(|b| {
            let mut it = b.iter().map(|e| labels[e]);
            let first = it.next();
            it.all(|l| Some(l) == first)
        }))
    }

    /// Greatest lower bound: the nonempty pairwise block intersections.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut blocks = Vec::new();
        for x in &self.blocks {
            for y in &other.blocks {
                let z = x.intersection(y);
                if !z.is_empty() {
                    blocks.push(z);
                }
            }
        }
        Ok(Self::from_canonical_parts(self.arity, blocks))
    }

    /// Least upper bound: connected components of the combined blocks.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let combined = self.blocks.iter().chain(&other.blocks).cloned().collect();
        let cc = connected_components(&Family(combined));
        Ok(Self::from_canonical_parts(self.arity, cc.0))
    }

    /// Reads a partition of the ground set `∪family` whose elements are
    /// exactly `{0, .., arity-1}`.
    pub fn from_family(arity: usize, family: Family) -> Result<Self> {
        Self::new(arity, family.0)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// A nonempty collection of nonempty sets, not necessarily disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family(Vec<BitSet>);

impl Family {
    pub fn new(members: Vec<BitSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Input("a family must have at least one member".into()));
        }
        if members.iter().any(BitSet::is_empty) {
            return Err(Error::Input("a family member must not be empty".into()));
        }
        Ok(Self(members))
    }

    pub fn members(&self) -> &[BitSet] {
        &self.0
    }

    pub fn into_members(self) -> Vec<BitSet> {
        self.0
    }

    /// The union of all members.
    pub fn ground(&self) -> BitSet {
        let mut g = BitSet::new();
        for m in &self.0 {
            g.union_with(m);
        }
        g
    }
}

/// A nonempty collection of families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperFamily(Vec<Family>);

impl SuperFamily {
    pub fn new(members: Vec<Family>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Input("a superfamily must have at least one member".into()));
        }
        Ok(Self(members))
    }

    pub fn members(&self) -> &[Family] {
        &self.0
    }
}

/// Merges chains of overlapping members. The result partitions `∪family`
/// and is returned in canonical block order.
pub fn connected_components(family: &Family) -> Family {
    let bound = family.0.iter().map(BitSet::bound).max().unwrap_or(0);
    let mut uf = UnionFind::new(bound);
    for m in &family.0 {
        let mut it = m.iter();
        if let Some(first) = it.next() {
            for e in it {
                uf.union(first, e);
            }
        }
    }
    let ground = family.ground();
    let mut by_root: Vec<Option<usize>> = vec![None; bound];
    let mut blocks: Vec<BitSet> = Vec::new();
    for e in &ground {
        let r = uf.find(e);
        let slot = *by_root[r].get_or_insert_with(|| {
            blocks.push(BitSet::new());
            blocks.len() - 1
        });
        blocks[slot].insert(e);
    }
    // elements are visited in ascending order, so blocks are already
    // ordered by least member
    Family(blocks)
}

/// Replaces every member of the superfamily by the union of its members.
pub fn xi(sf: &SuperFamily) -> Family {
    Family(sf.0.iter().map(Family::ground).collect())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            rank: vec![0; len],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}
