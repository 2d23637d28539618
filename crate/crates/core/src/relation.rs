//! Schemes, tuples and relations with set semantics, plus projection,
//! join over disjoint schemes, the complete relation and quotients.
//!
//! Values are interned per attribute: a tuple stores one dense index into
//! each attribute's domain, and labels only matter at the I/O boundary.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Ordinal position of an attribute within its scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Attribute {
    name: String,
    domain: Vec<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, domain: Vec<String>) -> Self {
        Self {
            name: name.into(),
            domain,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    attributes: Vec<Attribute>,
}

impl Scheme {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::InvalidScheme("no attributes".into()));
        }
        let mut names = HashSet::new();
        for a in &attributes {
            if !names.insert(a.name.as_str()) {
                return Err(Error::InvalidScheme(format!("duplicate attribute `{}`", a.name)));
            }
            if a.domain.is_empty() {
                return Err(Error::InvalidScheme(format!(
                    "attribute `{}` has an empty domain",
                    a.name
                )));
            }
            if a.domain.len() > u32::MAX as usize {
                return Err(Error::InvalidScheme(format!(
                    "attribute `{}` has too many values",
                    a.name
                )));
            }
            let mut labels = HashSet::new();
            if let Some(dup) = a.domain.iter().find(|v| !labels.insert(v.as_str())) {
                return Err(Error::InvalidScheme(format!(
                    "value `{dup}` repeated in the domain of `{}`",
                    a.name
                )));
            }
        }
        Ok(Self { attributes })
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, id: AttributeId) -> &Attribute {
        &self.attributes[id.0]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }

    pub fn id_of(&self, name: &str) -> Result<AttributeId> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .map(AttributeId)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn domain_size(&self, id: usize) -> usize {
        self.attributes[id].domain.len()
    }

    pub fn bottom(&self) -> Partition {
        Partition::bottom(self.arity())
    }

    pub fn top(&self) -> Partition {
        Partition::top(self.arity())
    }

    /// Names of the attributes in `block`, in scheme order.
    pub fn block_names(&self, block: &BitSet) -> Vec<String> {
        block.iter().map(|i| self.attributes[i].name.clone()).collect()
    }

    pub fn partition_names(&self, p: &Partition) -> Vec<Vec<String>> {
        p.blocks().iter().map(|b| self.block_names(b)).collect()
    }

    /// Resolves blocks given as attribute names into a partition.
    pub fn partition_from_names<S: AsRef<str>>(&self, blocks: &[Vec<S>]) -> Result<Partition> {
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut set = BitSet::new();
            for name in b {
                let id = self.id_of(name.as_ref())?;
                if set.contains(id.0) {
                    return Err(Error::NotAPartition(format!(
                        "attribute `{}` listed twice",
                        name.as_ref()
                    )));
                }
                set.insert(id.0);
            }
            out.push(set);
        }
        Partition::new(self.arity(), out)
    }

    /// The canonical text form, e.g. `[["A","B"],["C","D"]]`.
    pub fn partition_json(&self, p: &Partition) -> String {
        serde_json::to_string(&self.partition_names(p)).expect("string arrays serialize")
    }
}

/// One value index per attribute of the governing scheme.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(Box<[u32]>);

impl Tuple {
    pub fn new(values: impl Into<Box<[u32]>>) -> Self {
        Self(values.into())
    }
}

impl Deref for Tuple {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A nonempty set of attribute ids of some scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubScheme(BitSet);

impl SubScheme {
    pub fn new(members: BitSet) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySubScheme);
        }
        Ok(Self(members))
    }

    pub fn from_ids(ids: impl IntoIterator<Item = AttributeId>) -> Result<Self> {
        Self::new(ids.into_iter().map(|a| a.0).collect())
    }

    pub fn from_names<S: AsRef<str>>(scheme: &Scheme, names: &[S]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| scheme.id_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ids(ids)
    }

    pub fn members(&self) -> &BitSet {
        &self.0
    }
}

/// A nonempty, deduplicated, canonically sorted set of tuples in which every
/// domain value occurs at least once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    scheme: Scheme,
    tuples: Vec<Tuple>,
}

impl Relation {
    /// Validates, sorts and deduplicates.
    pub fn new(scheme: Scheme, tuples: Vec<Tuple>) -> Result<Self> {
        Ok(Self::with_duplicates(scheme, tuples)?.0)
    }

    /// Like [`Relation::new`], also reporting how many duplicate tuples were dropped.
    pub fn with_duplicates(scheme: Scheme, mut tuples: Vec<Tuple>) -> Result<(Self, usize)> {
        if tuples.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let n = scheme.arity();
        let mut seen: Vec<Vec<bool>> = scheme
            .attributes
            .iter()
            .map(|a| vec![false; a.domain.len()])
            .collect();
        for t in &tuples {
            if t.len() != n {
                return Err(Error::InvalidTuple(format!(
                    "tuple of length {} over a scheme of {n} attributes",
                    t.len()
                )));
            }
            for (i, &v) in t.iter().enumerate() {
                let slot = seen[i].get_mut(v as usize).ok_or_else(|| {
                    Error::InvalidTuple(format!(
                        "value index {v} outside the domain of `{}`",
                        scheme.attributes[i].name
                    ))
                })?;
                *slot = true;
            }
        }
        for (i, s) in seen.iter().enumerate() {
            if let Some(v) = s.iter().position(|b| !b) {
                return Err(Error::InvalidTuple(format!(
                    "value `{}` of `{}` occurs in no tuple",
                    scheme.attributes[i].domain[v], scheme.attributes[i].name
                )));
            }
        }
        let before = tuples.len();
        tuples.sort_unstable();
        tuples.dedup();
        let dups = before - tuples.len();
        Ok((Self { scheme, tuples }, dups))
    }

    /// Builds a relation from labelled rows. Domains are the distinct values
    /// of each column in first-appearance order; duplicate rows are dropped
    /// and counted.
    pub fn from_rows<S, R>(header: &[S], rows: impl IntoIterator<Item = R>) -> Result<(Self, usize)>
    where
        S: AsRef<str>,
        R: AsRef<[String]>,
    {
        let n = header.len();
        let mut interners: Vec<HashMap<String, u32>> = vec![HashMap::new(); n];
        let mut domains: Vec<Vec<String>> = vec![Vec::new(); n];
        let mut tuples = Vec::new();
        for (line, row) in rows.into_iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Input(format!(
                    "row {} has {} fields, expected {n}",
                    line + 1,
                    row.len()
                )));
            }
            let t: Vec<u32> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| {
                    *interners[i].entry(cell.clone()).or_insert_with(|| {
                        domains[i].push(cell.clone());
                        (domains[i].len() - 1) as u32
                    })
                })
                .collect();
            tuples.push(Tuple::new(t));
        }
        if tuples.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let scheme = Scheme::new(
            header
                .iter()
                .zip(domains)
                .map(|(h, d)| Attribute::new(h.as_ref(), d))
                .collect(),
        )?;
        Self::with_duplicates(scheme, tuples)
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn arity(&self) -> usize {
        self.scheme.arity()
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.tuples.binary_search(t).is_ok()
    }

    /// Value labels of one tuple, in scheme order.
    pub fn labels<'a>(&'a self, t: &'a Tuple) -> impl Iterator<Item = &'a str> + 'a {
        t.iter()
            .zip(&self.scheme.attributes)
            .map(|(&v, a)| a.domain[v as usize].as_str())
    }

    fn check_attrs(&self, attrs: &BitSet) -> Result<()> {
        if attrs.is_empty() {
            return Err(Error::EmptySubScheme);
        }
        if attrs.bound() > self.arity() {
            return Err(Error::AttributeOutOfRange {
                id: attrs.bound() - 1,
                arity: self.arity(),
            });
        }
        Ok(())
    }

    pub fn project(&self, sub: &SubScheme) -> Result<Relation> {
        let attrs = sub.members();
        self.check_attrs(attrs)?;
        let ids: Vec<usize> = attrs.iter().collect();
        let scheme = Scheme {
            attributes: ids.iter().map(|&i| self.scheme.attributes[i].clone()).collect(),
        };
        let mut tuples: Vec<Tuple> = self
            .tuples
            .iter()
            .map(|t| Tuple::new(ids.iter().map(|&i| t[i]).collect::<Vec<_>>()))
            .collect();
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Relation { scheme, tuples })
    }

    /// `|π_attrs(self)|` without materializing the projection.
    pub fn projection_cardinality(&self, attrs: &BitSet) -> Result<usize> {
        self.check_attrs(attrs)?;
        Ok(self.count_distinct(attrs))
    }

    pub(crate) fn count_distinct(&self, attrs: &BitSet) -> usize {
        let ids: Vec<usize> = attrs.iter().collect();
        if ids.len() == self.arity() {
            return self.len();
        }
        let radix_product = ids
            .iter()
            .try_fold(1u64, |acc, &i| acc.checked_mul(self.scheme.domain_size(i) as u64));
        match radix_product {
            Some(_) => {
                let mut seen = HashSet::with_capacity(self.len());
                for t in &self.tuples {
                    let key = ids.iter().fold(0u64, |acc, &i| {
                        acc * self.scheme.domain_size(i) as u64 + t[i] as u64
                    });
                    seen.insert(key);
                }
                seen.len()
            }
            None => {
                let mut seen = HashSet::with_capacity(self.len());
                for t in &self.tuples {
                    seen.insert(ids.iter().map(|&i| t[i]).collect::<Vec<_>>());
                }
                seen.len()
            }
        }
    }

    /// Reorders columns to match `target`'s attribute order, translating
    /// values by label. Fails unless both schemes have the same attribute
    /// names and every label exists in `target`.
    pub fn align_to(&self, target: &Scheme) -> Result<Relation> {
        if target.arity() != self.arity() {
            return Err(Error::InvalidScheme("schemes differ in arity".into()));
        }
        let mut maps: Vec<(usize, Vec<u32>)> = Vec::with_capacity(target.arity());
        for ta in &target.attributes {
            let src = self.scheme.id_of(&ta.name)?.0;
            let lookup: HashMap<&str, u32> = ta
                .domain
                .iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), i as u32))
                .collect();
            let map = self.scheme.attributes[src]
                .domain
                .iter()
                .map(|l| {
                    lookup.get(l.as_str()).copied().ok_or_else(|| {
                        Error::InvalidTuple(format!("value `{l}` not in the domain of `{}`", ta.name))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            maps.push((src, map));
        }
        let tuples = self
            .tuples
            .iter()
            .map(|t| {
                Tuple::new(
                    maps.iter()
                        .map(|(src, m)| m[t[*src] as usize])
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Relation::new(target.clone(), tuples)
    }

    /// Re-encodes every tuple blockwise relative to `partition`.
    pub fn quotient(&self, partition: &Partition) -> Result<QuotientRelation<'_>> {
        if partition.arity() != self.arity() {
            return Err(Error::SchemeMismatch {
                left: self.arity(),
                right: partition.arity(),
            });
        }
        let blocks: Vec<Vec<usize>> = partition.blocks().iter().map(|b| b.iter().collect()).collect();
        let mut block_values: Vec<Vec<Tuple>> = blocks
            .iter()
            .map(|ids| {
                let mut vals: Vec<Tuple> = self
                    .tuples
                    .iter()
                    .map(|t| Tuple::new(ids.iter().map(|&i| t[i]).collect::<Vec<_>>()))
                    .collect();
                vals.sort_unstable();
                vals.dedup();
                vals
            })
            .collect();
        let mut rows: Vec<Tuple> = self
            .tuples
            .iter()
            .map(|t| {
                let row: Vec<u32> = blocks
                    .iter()
                    .zip(&block_values)
                    .map(|(ids, vals)| {
                        let sub: Vec<u32> = ids.iter().map(|&i| t[i]).collect();
                        vals.binary_search_by(|v| (**v).cmp(&sub[..]))
                            .expect("subtuple interned above") as u32
                    })
                    .collect();
                Tuple::new(row)
            })
            .collect();
        rows.sort_unstable();
        block_values.shrink_to_fit();
        Ok(QuotientRelation {
            base: self,
            partition: partition.clone(),
            block_values,
            rows,
        })
    }
}

/// Joins relations over pairwise-disjoint schemes. The result scheme is the
/// concatenation of the operand schemes in order.
pub fn join(parts: &[Relation]) -> Result<Relation> {
    let (first, rest) = parts.split_first().ok_or(Error::EmptyJoin)?;
    let mut names = HashSet::new();
    for p in parts {
        for n in p.scheme.names() {
            if !names.insert(n) {
                return Err(Error::OverlappingSchemes(n.to_string()));
            }
        }
    }
    let total = parts
        .iter()
        .try_fold(1usize, |acc, p| acc.checked_mul(p.len()))
        .ok_or_else(|| Error::Guard("join cardinality overflows".into()))?;
    let mut acc: Vec<Vec<u32>> = first.tuples.iter().map(|t| t.to_vec()).collect();
    let mut attributes = first.scheme.attributes.clone();
    for p in rest {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for a in &acc {
            for t in &p.tuples {
                let mut v = Vec::with_capacity(a.len() + t.len());
                v.extend_from_slice(a);
                v.extend_from_slice(t);
                next.push(v);
            }
        }
        acc = next;
        attributes.extend(p.scheme.attributes.iter().cloned());
    }
    debug_assert_eq!(acc.len(), total);
    let mut tuples: Vec<Tuple> = acc.into_iter().map(Tuple::new).collect();
    tuples.sort_unstable();
    Ok(Relation {
        scheme: Scheme { attributes },
        tuples,
    })
}

/// Every combination of domain values.
pub fn complete_relation(scheme: &Scheme) -> Result<Relation> {
    let total = scheme
        .attributes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.domain.len()))
        .filter(|&t| t <= u32::MAX as usize)
        .ok_or_else(|| Error::Guard("complete relation too large to materialize".into()))?;
    let mut tuples = Vec::with_capacity(total);
    let mut cur = vec![0u32; scheme.arity()];
    'outer: loop {
        tuples.push(Tuple::new(cur.clone()));
        for i in (0..cur.len()).rev() {
            cur[i] += 1;
            if (cur[i] as usize) < scheme.domain_size(i) {
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    Ok(Relation {
        scheme: scheme.clone(),
        tuples,
    })
}

/// A relation viewed through a partition of its scheme: each block acts as
/// one composite attribute whose values are the block's distinct subtuples.
#[derive(Clone, Debug)]
pub struct QuotientRelation<'a> {
    base: &'a Relation,
    partition: Partition,
    block_values: Vec<Vec<Tuple>>,
    rows: Vec<Tuple>,
}

impl<'a> QuotientRelation<'a> {
    pub fn base(&self) -> &'a Relation {
        self.base
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Distinct subtuples of block `b`, sorted; a row's entry for `b` indexes this list.
    pub fn block_values(&self, b: usize) -> &[Tuple] {
        &self.block_values[b]
    }

    pub fn rows(&self) -> &[Tuple] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Materializes the quotient as an ordinary relation with one attribute
    /// per block. Attribute names and value labels are JSON arrays of the
    /// underlying names and labels.
    pub fn to_relation(&self) -> Relation {
        let scheme = self.base.scheme();
        let attributes = self
            .partition
            .blocks()
            .iter()
            .zip(&self.block_values)
            .map(|(block, vals)| {
                let ids: Vec<usize> = block.iter().collect();
                let name = serde_json::to_string(&scheme.block_names(block)).expect("serialize");
                let domain = vals
                    .iter()
                    .map(|v| {
                        let labels: Vec<&str> = ids
                            .iter()
                            .zip(v.iter())
                            .map(|(&a, &x)| scheme.attributes[a].domain[x as usize].as_str())
                            .collect();
                        serde_json::to_string(&labels).expect("serialize")
                    })
                    .collect();
                Attribute::new(name, domain)
            })
            .collect();
        Relation {
            scheme: Scheme { attributes },
            tuples: self.rows.clone(),
        }
    }
}
