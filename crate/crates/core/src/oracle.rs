//! Brute-force ground truth for differential testing, plus seeded instance
//! generators.
//!
//! Nothing here shares a code path with the correlation or decomposition
//! modules: correlation is decided by enumerating every combination of block
//! values, mincors by scanning every attribute subset, and the focus by
//! meeting every partition whose block projections join back to the
//! relation.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::relation::{join, Attribute, Relation, Scheme, SubScheme, Tuple};

/// Oracle paths refuse schemes wider than this.
pub const MAX_ATTRIBUTES: usize = 12;
/// Oracle paths refuse value-combination spaces larger than this.
pub const MAX_COMBINATIONS: u64 = 1 << 24;

fn guard_arity(n: usize) -> Result<()> {
    if n > MAX_ATTRIBUTES {
        return Err(Error::Guard(format!(
            "brute force limited to {MAX_ATTRIBUTES} attributes, got {n}"
        )));
    }
    Ok(())
}

/// A combination of block values (one subtuple per selected block) that is
/// absent from the relation, if any.
pub fn correlation_witness(r: &Relation, x: &Partition, sel: &[BitSet]) -> Result<Option<Vec<Tuple>>> {
    if sel.is_empty() {
        return Err(Error::EmptySelection);
    }
    if x.arity() != r.arity() {
        return Err(Error::SchemeMismatch {
            left: r.arity(),
            right: x.arity(),
        });
    }
    for b in sel {
        if !x.blocks().contains(b) {
            return Err(Error::BlockNotInPartition(b.iter().collect()));
        }
    }
    let values: Vec<Vec<Tuple>> = sel
        .iter()
        .map(|b| Ok(r.project(&SubScheme::new(b.clone())?)?.tuples().to_vec()))
        .collect::<Result<_>>()?;
    let space = values
        .iter()
        .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64))
        .filter(|&s| s <= MAX_COMBINATIONS)
        .ok_or_else(|| Error::Guard("combination space too large to enumerate".into()))?;

    // which block-value combinations actually occur together
    let present: HashSet<Vec<Vec<u32>>> = r
        .tuples()
        .iter()
        .map(|t| sel.iter().map(|b| b.iter().map(|a| t[a]).collect()).collect())
        .collect();

    let mut cursor = vec![0usize; values.len()];
    for _ in 0..space {
        let combo: Vec<Vec<u32>> = cursor.iter().zip(&values).map(|(&i, v)| v[i].to_vec()).collect();
        if !present.contains(&combo) {
            return Ok(Some(combo.into_iter().map(Tuple::new).collect()));
        }
        for (c, v) in cursor.iter_mut().zip(&values).rev() {
            *c += 1;
            if *c < v.len() {
                break;
            }
            *c = 0;
        }
    }
    Ok(None)
}

pub fn is_correlated(r: &Relation, x: &Partition, sel: &[BitSet]) -> Result<bool> {
    Ok(correlation_witness(r, x, sel)?.is_some())
}

/// Minimal correlated attribute sets, found by testing every subset of the
/// scheme and keeping the correlated ones with no correlated proper subset.
pub fn mincors(r: &Relation) -> Result<Vec<BitSet>> {
    let n = r.arity();
    guard_arity(n)?;
    let bottom = Partition::bottom(n);
    let mut correlated = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: BitSet = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sel: Vec<BitSet> = set.iter().map(BitSet::singleton).collect();
        if is_correlated(r, &bottom, &sel)? {
            correlated.push(set);
        }
    }
    let mut minimal: Vec<BitSet> = correlated
        .iter()
        .filter(|s| !correlated.iter().any(|t| t != *s && t.is_subset(s)))
        .cloned()
        .collect();
    minimal.sort();
    Ok(minimal)
}

/// Independence by materializing the join of the block projections.
pub fn is_independent(r: &Relation, x: &Partition) -> Result<bool> {
    let parts = x
        .blocks()
        .iter()
        .map(|b| r.project(&SubScheme::new(b.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let size = parts
        .iter()
        .try_fold(1u64, |acc, p| acc.checked_mul(p.len() as u64))
        .filter(|&s| s <= MAX_COMBINATIONS)
        .ok_or_else(|| Error::Guard("join too large to materialize".into()))?;
    if size < r.len() as u64 {
        return Err(Error::Invariant(
            "join smaller than the relation it contains".into(),
        ));
    }
    Ok(join(&parts)?.align_to(r.scheme())? == *r)
}

/// The meet of all independent partitions, by exhaustive enumeration.
/// Fails if that meet is not itself independent.
pub fn focus(r: &Relation) -> Result<Partition> {
    let n = r.arity();
    guard_arity(n)?;
    let mut acc: Option<Vec<usize>> = None;
    for p in PartitionEnumerator::new(n)? {
        if !is_independent(r, &p)? {
            continue;
        }
        let labels = p.labels();
        acc = Some(match acc {
            None => labels,
            Some(prev) => meet_labels(&prev, &labels),
        });
    }
    let meet = Partition::from_labels(&acc.expect("the trivial partition is always independent"))?;
    if !is_independent(r, &meet)? {
        return Err(Error::Invariant(format!(
            "meet of independent partitions {meet} is not independent"
        )));
    }
    Ok(meet)
}

/// Meet of two partitions given as block labels: elements share a block
/// iff they share one in both.
fn meet_labels(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    a.iter()
        .zip(b)
        .map(|(&x, &y)| match pairs.iter().position(|&p| p == (x, y)) {
            Some(i) => i,
            None => {
                pairs.push((x, y));
                pairs.len() - 1
            }
        })
        .collect()
}

/// Every partition of `{0, .., n-1}` exactly once, via restricted-growth
/// strings in lexicographic order.
pub struct PartitionEnumerator {
    rgs: Vec<usize>,
    done: bool,
}

impl PartitionEnumerator {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("cannot enumerate partitions of an empty set".into()));
        }
        guard_arity(n)?;
        Ok(Self {
            rgs: vec![0; n],
            done: false,
        })
    }
}

impl Iterator for PartitionEnumerator {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.rgs).expect("restricted-growth string");
        // advance: bump the rightmost position that may grow, reset the tail
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let max_prefix = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= max_prefix {
                self.rgs[i] += 1;
                for r in &mut self.rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All families `Z` with `|Z| = |blocks|` taking one nonempty subset from
/// each block (the selections of a block family of full size).
pub fn full_selections(blocks: &[BitSet]) -> Vec<Vec<BitSet>> {
    let mut out = vec![Vec::new()];
    for b in blocks {
        let members: Vec<usize> = b.iter().collect();
        let subsets: Vec<BitSet> = (1u32..(1 << members.len()))
            .map(|m| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect()
            })
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                subsets.iter().map(move |s| {
                    let mut z = prefix.clone();
                    z.push(s.clone());
                    z
                })
            })
            .collect();
    }
    out
}

/// Spreadsheet-style column names: A..Z, AA, AB, ...
pub fn column_name(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).expect("ascii")
}

fn value_label(attr: &str, i: usize) -> String {
    format!("{}{}", attr.to_ascii_lowercase(), i + 1)
}

/// Builds a relation from raw value indices, keeping only observed values
/// and relabelling them densely.
fn from_raw(names: Vec<String>, raw: Vec<Vec<u32>>) -> Result<Relation> {
    let n = names.len();
    let mut observed: Vec<Vec<u32>> = vec![Vec::new(); n];
    for t in &raw {
        for (i, &v) in t.iter().enumerate() {
            observed[i].push(v);
        }
    }
    for o in &mut observed {
        o.sort_unstable();
        o.dedup();
    }
    let attributes = names
        .iter()
        .zip(&observed)
        .map(|(name, o)| Attribute::new(name.clone(), (0..o.len()).map(|i| value_label(name, i)).collect()))
        .collect();
    let tuples = raw
        .into_iter()
        .map(|t| {
            Tuple::new(
                t.iter()
                    .enumerate()
                    .map(|(i, v)| observed[i].binary_search(v).expect("observed") as u32)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Relation::new(Scheme::new(attributes)?, tuples)
}

/// Uniform random relation: each domain size is drawn from `1..=max_domain`,
/// the tuple count from `1..=max_tuples`, tuples with replacement.
pub fn gen_random_relation(seed: u64, n: usize, max_domain: usize, max_tuples: usize) -> Result<Relation> {
    if n == 0 || max_domain == 0 || max_tuples == 0 {
        return Err(Error::Input(
            "attributes, domain and tuple bounds must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domains: Vec<u32> = (0..n).map(|_| rng.random_range(1..=max_domain) as u32).collect();
    let count = rng.random_range(1..=max_tuples);
    let raw = (0..count)
        .map(|_| domains.iter().map(|&d| rng.random_range(0..d)).collect())
        .collect();
    from_raw((0..n).map(column_name).collect(), raw)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub attributes: usize,
    pub tuples: usize,
}

/// A relation built as the join of random factors over disjoint attribute
/// sets, with columns shuffled.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub factors: Vec<Relation>,
    pub planted: Partition,
    pub relation: Relation,
}

pub fn gen_planted(seed: u64, blocks: &[BlockSpec], max_domain: usize) -> Result<PlantedInstance> {
    if blocks.is_empty() || max_domain == 0 {
        return Err(Error::Input(
            "planted spec needs at least one block and a positive domain bound".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = blocks.iter().map(|b| b.attributes).sum();
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut rng);
    let names: Vec<String> = (0..total).map(column_name).collect();

    let mut factors = Vec::with_capacity(blocks.len());
    let mut planted_blocks = Vec::with_capacity(blocks.len());
    let mut next = 0;
    for spec in blocks {
        if spec.attributes == 0 || spec.tuples == 0 {
            return Err(Error::Input("planted blocks need attributes and tuples".into()));
        }
        let capacity = (0..spec.attributes)
            .try_fold(1u64, |acc, _| acc.checked_mul(max_domain as u64))
            .unwrap_or(u64::MAX);
        if (spec.tuples as u64) > capacity || spec.tuples as u64 > MAX_COMBINATIONS {
            return Err(Error::Input(format!(
                "{} distinct tuples do not fit {} attributes with domains of at most {max_domain}",
                spec.tuples, spec.attributes
            )));
        }
        let mut domains: Vec<u64> = (0..spec.attributes)
            .map(|_| rng.random_range(1..=max_domain) as u64)
            .collect();
        while domains.iter().product::<u64>() < spec.tuples as u64 {
            let i = rng.random_range(0..domains.len());
            if domains[i] < max_domain as u64 {
                domains[i] += 1;
            }
        }
        let mut seen = HashSet::new();
        let mut raw = Vec::with_capacity(spec.tuples);
        while raw.len() < spec.tuples {
            let t: Vec<u32> = domains.iter().map(|&d| rng.random_range(0..d) as u32).collect();
            if seen.insert(t.clone()) {
                raw.push(t);
            }
        }
        let ids: Vec<usize> = order[next..next + spec.attributes].to_vec();
        next += spec.attributes;
        factors.push(from_raw(ids.iter().map(|&i| names[i].clone()).collect(), raw)?);
        planted_blocks.push(ids.into_iter().collect::<BitSet>());
    }
    let joined = join(&factors)?;
    let target = Scheme::new(
        names
            .iter()
            .map(|n| {
                let src = joined.scheme().id_of(n).expect("every column is generated");
                joined.scheme().attribute(src).clone()
            })
            .collect(),
    )?;
    let relation = joined.align_to(&target)?;
    Ok(PlantedInstance {
        factors,
        planted: Partition::new(total, planted_blocks)?,
        relation,
    })
}

/// Instance description accepted by the `gen` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GenSpec {
    Random {
        attributes: usize,
        max_domain: usize,
        max_tuples: usize,
    },
    Planted {
        blocks: Vec<BlockSpec>,
        #[serde(default = "default_max_domain")]
        max_domain: usize,
    },
}

fn default_max_domain() -> usize {
    3
}

impl GenSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("generator spec: {e}")))
    }

    /// The relation and, for planted specs, the planted partition.
    pub fn generate(&self, seed: u64) -> Result<(Relation, Option<Partition>)> {
        match self {
            GenSpec::Random {
                attributes,
                max_domain,
                max_tuples,
            } => Ok((
                gen_random_relation(seed, *attributes, *max_domain, *max_tuples)?,
                None,
            )),
            GenSpec::Planted { blocks, max_domain } => {
                let p = gen_planted(seed, blocks, *max_domain)?;
                Ok((p.relation, Some(p.planted)))
            }
        }
    }
}
