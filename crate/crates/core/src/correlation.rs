//! Self-correlation of block sets and the mincor family of a relation seen
//! through a partition of its scheme.
//!
//! A set of blocks is correlated when the relation's projection onto their
//! union is strictly smaller than the product of the per-block projection
//! sizes, i.e. some combination of block values never occurs together. With
//! the partition into singletons this is plain attribute correlation.

use std::collections::HashMap;
use std::sync::RwLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::relation::Relation;

/// Levels with at least this many candidates are tested in parallel.
const PARALLEL_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest mincor size (in blocks) to look for; `None` searches every level.
    pub max_size: Option<usize>,
}

/// Cardinality evidence for one correlated block set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    /// Size of the projection onto the union of the blocks.
    pub joint: usize,
    /// Product of the per-block projection sizes, saturating.
    pub product: u128,
}

/// Minimal correlated block sets plus the blocks no mincor touches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MincorFamily {
    ground: Partition,
    /// Sets of block indices into `ground`, each of size at least two, in
    /// discovery order (by size, then lexicographic).
    mincors: Vec<BitSet>,
    evidence: Vec<Evidence>,
    singletons: Vec<usize>,
    truncated: bool,
}

impl MincorFamily {
    pub fn ground(&self) -> &Partition {
        &self.ground
    }

    pub fn mincors(&self) -> &[BitSet] {
        &self.mincors
    }

    pub fn evidence(&self) -> &[Evidence] {
        &self.evidence
    }

    /// Block indices covered by no mincor.
    pub fn singletons(&self) -> &[usize] {
        &self.singletons
    }

    /// True when a size cap cut the search short.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// A mincor as attribute-id blocks of the ground partition.
    pub fn mincor_blocks(&self, i: usize) -> Vec<&BitSet> {
        self.mincors[i].iter().map(|b| &self.ground.blocks()[b]).collect()
    }

    /// All members over block indices: mincors first, then singletons.
    pub fn members(&self) -> Vec<BitSet> {
        self.mincors
            .iter()
            .cloned()
            .chain(self.singletons.iter().map(|&b| BitSet::singleton(b)))
            .collect()
    }
}

/// Answers correlation queries for one relation and partition, memoizing
/// projection sizes by attribute set.
pub struct Correlator<'a> {
    relation: &'a Relation,
    partition: &'a Partition,
    block_sizes: Vec<usize>,
    cache: RwLock<HashMap<BitSet, usize>>,
}

impl<'a> Correlator<'a> {
    pub fn new(relation: &'a Relation, partition: &'a Partition) -> Result<Self> {
        if partition.arity() != relation.arity() {
            return Err(Error::SchemeMismatch {
                left: relation.arity(),
                right: partition.arity(),
            });
        }
        let block_sizes = partition
            .blocks()
            .iter()
            .map(|b| relation.count_distinct(b))
            .collect();
        Ok(Self {
            relation,
            partition,
            block_sizes,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn block_size(&self, block: usize) -> usize {
        self.block_sizes[block]
    }

    fn union_of(&self, sel: &BitSet) -> BitSet {
        let mut u = BitSet::new();
        for b in sel {
            u.union_with(&self.partition.blocks()[b]);
        }
        u
    }

    /// `|π_{∪sel}(r)|`.
    pub fn joint_size(&self, sel: &BitSet) -> usize {
        if sel.len() == 1 {
            return self.block_sizes[sel.first().expect("nonempty")];
        }
        let attrs = self.union_of(sel);
        if let Some(&n) = self.cache.read().expect("cache lock").get(&attrs) {
            return n;
        }
        let n = self.relation.count_distinct(&attrs);
        self.cache.write().expect("cache lock").insert(attrs, n);
        n
    }

    /// `∏_{Y∈sel} |π_Y(r)|`, saturating.
    pub fn product(&self, sel: &BitSet) -> u128 {
        sel.iter()
            .fold(1u128, |acc, b| acc.saturating_mul(self.block_sizes[b] as u128))
    }

    pub fn is_correlated(&self, sel: &BitSet) -> bool {
        let product = self.product(sel);
        // the joint projection never exceeds |r|
        if product > self.relation.len() as u128 {
            return true;
        }
        (self.joint_size(sel) as u128) < product
    }

    pub fn evidence(&self, sel: &BitSet) -> Evidence {
        Evidence {
            joint: self.joint_size(sel),
            product: self.product(sel),
        }
    }

    fn check_selection(&self, sel: &BitSet) -> Result<()> {
        if sel.is_empty() {
            return Err(Error::EmptySelection);
        }
        if sel.bound() > self.partition.len() {
            return Err(Error::BlockNotInPartition(vec![sel.bound() - 1]));
        }
        Ok(())
    }
}

/// Maps blocks given as attribute sets onto their indices in `x`.
pub fn block_indices(x: &Partition, blocks: &[BitSet]) -> Result<BitSet> {
    let mut sel = BitSet::new();
    for b in blocks {
        let i = x
            .blocks()
            .iter()
            .position(|y| y == b)
            .ok_or_else(|| Error::BlockNotInPartition(b.iter().collect()))?;
        sel.insert(i);
    }
    Ok(sel)
}

/// Whether the blocks `sel` of `x` are self-correlated with respect to the
/// quotient of `r` by `x`.
pub fn is_correlated(r: &Relation, x: &Partition, sel: &[BitSet]) -> Result<bool> {
    if sel.is_empty() {
        return Err(Error::EmptySelection);
    }
    let idx = block_indices(x, sel)?;
    let c = Correlator::new(r, x)?;
    c.check_selection(&idx)?;
    Ok(c.is_correlated(&idx))
}

/// Inclusion-minimal correlated sets of blocks of `x`, as block-index sets.
pub fn mincors(r: &Relation, x: &Partition) -> Result<Vec<BitSet>> {
    Ok(mincor_family(r, x, SearchOptions::default())?.mincors)
}

/// Level-wise search: a k-set of blocks is a mincor iff it contains no
/// smaller mincor and is correlated. Correlation is upward closed, so this
/// yields exactly the minimal correlated sets.
pub fn mincor_family(r: &Relation, x: &Partition, opts: SearchOptions) -> Result<MincorFamily> {
    let c = Correlator::new(r, x)?;
    // a block with a single value multiplies every product by one and can
    // never take part in a correlated set
    let eligible: Vec<usize> = (0..x.len()).filter(|&b| c.block_size(b) > 1).collect();
    let max_level = opts.max_size.map_or(eligible.len(), |k| k.min(eligible.len()));
    let mut truncated = max_level < eligible.len();

    let mut found: Vec<BitSet> = Vec::new();
    for k in 2..=max_level {
        let candidates: Vec<BitSet> = eligible
            .iter()
            .copied()
            .combinations(k)
            .map(|combo| combo.into_iter().collect::<BitSet>())
            .filter(|cand| !found.iter().any(|m| m.is_subset(cand)))
            .collect();
        if candidates.is_empty() {
            // every k-set already contains a mincor, and so does every larger set
            truncated = false;
            break;
        }
        let hits: Vec<bool> = if candidates.len() >= PARALLEL_THRESHOLD {
            candidates.par_iter().map(|s| c.is_correlated(s)).collect()
        } else {
            candidates.iter().map(|s| c.is_correlated(s)).collect()
        };
        found.extend(
            candidates
                .into_iter()
                .zip(hits)
                .filter_map(|(s, hit)| hit.then_some(s)),
        );
    }

    let mut covered = BitSet::new();
    for m in &found {
        covered.union_with(m);
    }
    let singletons = (0..x.len()).filter(|b| !covered.contains(*b)).collect();
    let evidence = found.iter().map(|m| c.evidence(m)).collect();
    Ok(MincorFamily {
        ground: x.clone(),
        mincors: found,
        evidence,
        singletons,
        truncated,
    })
}
