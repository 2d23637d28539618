//! The inflationary transformer on partitions, its fixed-point iteration
//! from the partition into singletons, independence tests, and extraction of
//! the factor relations of the resulting focus.

use crate::correlation::{mincor_family, MincorFamily, SearchOptions};
use crate::error::{Error, Result};
use crate::partition::{connected_components, xi, Family, Partition, SuperFamily};
use crate::relation::{join, Relation, SubScheme};

/// Paranoid checks refuse to materialize joins with more tuples than this.
pub const MATERIALIZE_LIMIT: usize = 1 << 24;

/// Applies the transformer once: merge overlapping mincors of the quotient
/// by `x` and flatten the merged block groups back onto attributes.
pub fn alpha(r: &Relation, x: &Partition) -> Result<Partition> {
    Ok(alpha_step(r, x, SearchOptions::default())?.output)
}

/// One application of the transformer together with the mincor family it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaStep {
    pub input: Partition,
    pub family: MincorFamily,
    pub output: Partition,
}

pub fn alpha_step(r: &Relation, x: &Partition, opts: SearchOptions) -> Result<AlphaStep> {
    let family = mincor_family(r, x, opts)?;
    let output = merge_family(x, &family)?;
    Ok(AlphaStep {
        input: x.clone(),
        family,
        output,
    })
}

fn merge_family(x: &Partition, family: &MincorFamily) -> Result<Partition> {
    // ground set here is block indices of x
    let components = connected_components(&Family::new(family.members())?);
    let groups = components
        .members()
        .iter()
        .map(|comp| Family::new(comp.iter().map(|b| x.blocks()[b].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    let flattened = xi(&SuperFamily::new(groups)?);
    Partition::from_family(x.arity(), flattened)
}

/// The chain ⊥, α(⊥), α²(⊥), … up to and including the confirming step
/// that maps the fixed point to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTrace {
    steps: Vec<AlphaStep>,
}

impl AlphaTrace {
    pub fn steps(&self) -> &[AlphaStep] {
        &self.steps
    }

    pub fn fixed_point(&self) -> &Partition {
        &self.steps.last().expect("trace has at least one step").output
    }

    /// Number of transformer applications, the confirming one included.
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    /// Applications that changed the partition.
    pub fn productive_steps(&self) -> usize {
        self.steps.len() - 1
    }

    /// Whether any step ran with a truncated mincor search.
    pub fn truncated(&self) -> bool {
        self.steps.iter().any(|s| s.family.truncated())
    }
}

/// The maximum independent partition, by iterating the transformer from
/// the partition into singletons until it stabilizes.
pub fn focus(r: &Relation) -> Result<(Partition, AlphaTrace)> {
    let trace = focus_with(r, SearchOptions::default())?;
    Ok((trace.fixed_point().clone(), trace))
}

pub fn focus_with(r: &Relation, opts: SearchOptions) -> Result<AlphaTrace> {
    let n = r.arity();
    let mut x = Partition::bottom(n);
    let mut steps = Vec::new();
    loop {
        // a strictly ascending chain from ⊥ has at most n-1 increases
        if steps.len() >= n {
            return Err(Error::Invariant(format!(
                "transformer did not stabilize within {n} applications"
            )));
        }
        let step = alpha_step(r, &x, opts)?;
        if !x.refines(&step.output)? {
            return Err(Error::Invariant(format!(
                "transformer is not inflationary at {x}: produced {}",
                step.output
            )));
        }
        let done = step.output == x;
        x = step.output.clone();
        steps.push(step);
        if done {
            return Ok(AlphaTrace { steps });
        }
    }
}

/// Product of the projection sizes of the blocks of `x`, or `None` on overflow.
pub fn block_product(r: &Relation, x: &Partition) -> Result<Option<usize>> {
    check_arity(r, x)?;
    Ok(x.blocks()
        .iter()
        .try_fold(1usize, |acc, b| acc.checked_mul(r.count_distinct(b))))
}

fn check_arity(r: &Relation, x: &Partition) -> Result<()> {
    if x.arity() != r.arity() {
        return Err(Error::SchemeMismatch {
            left: r.arity(),
            right: x.arity(),
        });
    }
    Ok(())
}

/// `r` always lies inside the join of its block projections, so the two
/// are equal exactly when their sizes are.
pub fn is_independent(r: &Relation, x: &Partition) -> Result<bool> {
    // an overflowing product certainly differs from |r|
    Ok(block_product(r, x)? == Some(r.len()))
}

/// Independence decided by materializing the join of the block projections
/// and comparing it with `r` as a set. Also cross-checks the cardinality test.
pub fn is_independent_paranoid(r: &Relation, x: &Partition) -> Result<bool> {
    let product = block_product(r, x)?
        .ok_or_else(|| Error::Guard(format!("join of the blocks of {x} overflows; cannot materialize")))?;
    if product > MATERIALIZE_LIMIT {
        return Err(Error::Guard(format!(
            "join of the blocks of {x} would have {product} tuples (limit {MATERIALIZE_LIMIT})"
        )));
    }
    let joined = join(&projections(r, x)?)?.align_to(r.scheme())?;
    let by_join = joined == *r;
    if by_join != (product == r.len()) {
        return Err(Error::Invariant(format!(
            "join comparison ({by_join}) disagrees with cardinality test at {x}"
        )));
    }
    Ok(by_join)
}

/// Projections of `r` onto each block of `x`, in canonical block order.
pub fn projections(r: &Relation, x: &Partition) -> Result<Vec<Relation>> {
    check_arity(r, x)?;
    x.blocks()
        .iter()
        .map(|b| r.project(&SubScheme::new(b.clone())?))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FactorizeOptions {
    pub search: SearchOptions,
    pub paranoid: bool,
}

/// Whether a factorization has been confirmed to reconstruct its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Unverified,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub focus: Partition,
    pub factors: Vec<Relation>,
    pub trace: AlphaTrace,
    pub status: Status,
    /// `|r| · |scheme|`.
    pub cells_flat: usize,
    /// `Σ |factor| · |block|`.
    pub cells_factorized: usize,
}

pub fn factorize(r: &Relation) -> Result<Factorization> {
    factorize_with(r, FactorizeOptions::default())
}

/// Computes the focus and its factors. When the mincor search was capped the
/// result is re-tested for independence and marked unverified on failure;
/// otherwise a failed reconstruction is an internal error.
pub fn factorize_with(r: &Relation, opts: FactorizeOptions) -> Result<Factorization> {
    let trace = focus_with(r, opts.search)?;
    let focus = trace.fixed_point().clone();
    let independent = if opts.paranoid {
        is_independent_paranoid(r, &focus)?
    } else {
        is_independent(r, &focus)?
    };
    let factors = projections(r, &focus)?;
    let status = if independent {
        let rejoined = join(&factors)?.align_to(r.scheme())?;
        if rejoined != *r {
            return Err(Error::Invariant(format!(
                "factors of {focus} do not reconstruct the relation"
            )));
        }
        Status::Verified
    } else if trace.truncated() {
        Status::Unverified
    } else {
        return Err(Error::Invariant(format!(
            "fixed point {focus} is not an independent partition"
        )));
    };
    let cells_flat = r.len() * r.arity();
    let cells_factorized = factors.iter().map(|f| f.len() * f.arity()).sum();
    Ok(Factorization {
        focus,
        factors,
        trace,
        status,
        cells_flat,
        cells_factorized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{entangled_pairs, non_monotone, relation_from_strs, separable_pairs};
    use crate::relation::complete_relation;

    fn part(r: &Relation, blocks: &[&[&str]]) -> Partition {
        let v: Vec<Vec<&str>> = blocks.iter().map(|b| b.to_vec()).collect();
        r.scheme().partition_from_names(&v).unwrap()
    }

    #[test]
    fn alpha_on_entangled() {
        let r = entangled_pairs();
        let pairs = part(&r, &[&["A", "B"], &["C", "D"]]);
        assert_eq!(alpha(&r, &r.scheme().bottom()).unwrap(), pairs);
        assert_eq!(alpha(&r, &pairs).unwrap(), r.scheme().top());
    }

    #[test]
    fn alpha_is_not_monotone() {
        let q = non_monotone();
        let x1 = q.scheme().bottom();
        let x2 = part(&q, &[&["A"], &["B", "D"], &["C", "E"]]);
        let a1 = alpha(&q, &x1).unwrap();
        let a2 = alpha(&q, &x2).unwrap();
        // {A,B,C}, {D,E}, {A,C,D} and {B,C,D} are all mincors at the bottom
        // (a2c1d2 and b1c1d2 never occur), so they chain into one block
        assert_eq!(a1, q.scheme().top());
        assert_eq!(a2, part(&q, &[&["A"], &["B", "C", "D", "E"]]));
        assert!(x1.refines(&x2).unwrap());
        assert!(!a1.refines(&a2).unwrap());
    }

    #[test]
    fn alpha_on_complete_relation_is_identity_at_bottom() {
        let full = complete_relation(non_monotone().scheme()).unwrap();
        let bot = full.scheme().bottom();
        assert_eq!(alpha(&full, &bot).unwrap(), bot);
    }

    #[test]
    fn focus_of_entangled_is_trivial() {
        let r = entangled_pairs();
        let (f, trace) = focus(&r).unwrap();
        assert_eq!(f, r.scheme().top());
        assert_eq!(trace.productive_steps(), 2);
        assert_eq!(trace.iterations(), 3);
        assert_eq!(trace.steps()[0].input, r.scheme().bottom());
        for w in trace.steps().windows(2) {
            assert_eq!(w[0].output, w[1].input);
        }
    }

    #[test]
    fn focus_of_non_monotone_is_trivial() {
        // 19 tuples over binary attributes: no nontrivial block product can equal a prime
        let q = non_monotone();
        let (f, trace) = focus(&q).unwrap();
        assert_eq!(f, q.scheme().top());
        assert_eq!(trace.productive_steps(), 1);
    }

    #[test]
    fn focus_of_separable_and_complete() {
        let r = separable_pairs();
        assert_eq!(focus(&r).unwrap().0, part(&r, &[&["A", "B"], &["C", "D"]]));
        let full = complete_relation(r.scheme()).unwrap();
        assert_eq!(focus(&full).unwrap().0, full.scheme().bottom());
    }

    #[test]
    fn degenerate_relations_focus_on_bottom() {
        let one_col = relation_from_strs(&["V"], &[&["x"], &["y"]]);
        let (f, t) = focus(&one_col).unwrap();
        assert!(f.is_bottom() && f.is_top());
        assert_eq!(t.iterations(), 1);

        let one_row = relation_from_strs(&["A", "B", "C"], &[&["a", "b", "c"]]);
        assert_eq!(focus(&one_row).unwrap().0, Partition::bottom(3));
        for labels in [[0, 0, 0], [0, 1, 0], [0, 1, 2]] {
            let x = Partition::from_labels(&labels).unwrap();
            assert!(is_independent(&one_row, &x).unwrap());
        }
    }

    #[test]
    fn independence_examples() {
        let r2 = separable_pairs();
        let pairs = part(&r2, &[&["A", "B"], &["C", "D"]]);
        assert!(is_independent(&r2, &pairs).unwrap());
        assert!(is_independent_paranoid(&r2, &pairs).unwrap());
        let r1 = entangled_pairs();
        assert!(!is_independent(&r1, &pairs).unwrap());
        assert!(!is_independent_paranoid(&r1, &pairs).unwrap());
        for r in [r1, r2, non_monotone()] {
            assert!(is_independent(&r, &r.scheme().top()).unwrap());
        }
    }

    #[test]
    fn factorize_examples() {
        let r2 = separable_pairs();
        let f = factorize(&r2).unwrap();
        assert_eq!(f.status, Status::Verified);
        assert_eq!(
            f.factors.iter().map(Relation::len).collect::<Vec<_>>(),
            vec![3, 3]
        );
        assert_eq!((f.cells_flat, f.cells_factorized), (36, 12));

        let r1 = entangled_pairs();
        let f = factorize(&r1).unwrap();
        assert_eq!(f.factors, vec![r1.clone()]);
        assert_eq!(f.cells_flat, f.cells_factorized);

        let full = complete_relation(non_monotone().scheme()).unwrap();
        let f = factorize(&full).unwrap();
        assert_eq!(f.factors.len(), 5);
        assert!(f.factors.iter().all(|x| x.len() == 2));
    }

    #[test]
    fn capped_search_marks_unverified_when_not_independent() {
        // the only correlation needs all three attributes: z = x xor y
        let r = relation_from_strs(
            &["X", "Y", "Z"],
            &[
                &["0", "0", "0"],
                &["0", "1", "1"],
                &["1", "0", "1"],
                &["1", "1", "0"],
            ],
        );
        let capped = FactorizeOptions {
            search: SearchOptions { max_size: Some(2) },
            paranoid: false,
        };
        let f = factorize_with(&r, capped).unwrap();
        assert_eq!(f.status, Status::Unverified);
        assert!(f.focus.is_bottom());
        let f = factorize(&r).unwrap();
        assert_eq!(f.status, Status::Verified);
        assert!(f.focus.is_top());
    }

    #[test]
    fn paranoid_refuses_huge_joins() {
        // six columns, each a different permutation of 30 values
        let steps = [1, 7, 11, 13, 17, 19];
        let rows: Vec<Vec<String>> = (0..30)
            .map(|i| steps.iter().map(|s| format!("{}", (i * s) % 30)).collect())
            .collect();
        let header: Vec<String> = (0..6).map(|j| format!("C{j}")).collect();
        let (r, _) = Relation::from_rows(&header, &rows).unwrap();
        assert!(matches!(
            is_independent_paranoid(&r, &r.scheme().bottom()),
            Err(Error::Guard(_))
        ));
        assert!(!is_independent(&r, &r.scheme().bottom()).unwrap());
    }
}
