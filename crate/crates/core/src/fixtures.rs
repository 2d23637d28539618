//! Small hand-written relations over binary attributes, used by tests, the
//! golden CLI fixtures and the documentation.

use crate::relation::Relation;

/// Builds a relation from literal rows. Panics on malformed input.
pub fn relation_from_strs(header: &[&str], rows: &[&[&str]]) -> Relation {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    Relation::from_rows(header, &rows)
        .expect("valid literal relation")
        .0
}

/// Splits compact rows such as `"a1b2c1d1"` into two-character labels.
fn binary_rows(header: &[&str], rows: &[&str]) -> Relation {
    let cells: Vec<Vec<&str>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), 2 * header.len(), "row `{r}`");
            (0..header.len()).map(|i| &r[2 * i..2 * i + 2]).collect()
        })
        .collect();
    let refs: Vec<&[&str]> = cells.iter().map(Vec::as_slice).collect();
    relation_from_strs(header, &refs)
}

/// Five tuples over A, B, C, D in which {A,B} and {C,D} are each correlated
/// but the pair of blocks is not independent; only the trivial partition is.
pub fn entangled_pairs() -> Relation {
    binary_rows(
        &["A", "B", "C", "D"],
        &["a1b1c1d1", "a1b1c2d2", "a1b2c1d2", "a2b2c1d1", "a2b2c2d2"],
    )
}

/// Nine tuples over A, B, C, D: the join of a 3-tuple AB relation and a
/// 3-tuple CD relation.
pub fn separable_pairs() -> Relation {
    binary_rows(
        &["A", "B", "C", "D"],
        &[
            "a1b1c1d1", "a1b1c1d2", "a1b1c2d2", "a1b2c1d1", "a1b2c1d2", "a1b2c2d2", "a2b2c1d1", "a2b2c1d2",
            "a2b2c2d2",
        ],
    )
}

/// Nineteen tuples over A..E: the complete relation minus every tuple
/// containing a1b1c1, every tuple containing d2e2, and the two tuples
/// a2b1c1d2e1 and a2b2c1d2e1. Witnesses that the transformer is not
/// monotone.
pub fn non_monotone() -> Relation {
    binary_rows(
        &["A", "B", "C", "D", "E"],
        &[
            "a1b1c2d1e1",
            "a1b1c2d1e2",
            "a1b1c2d2e1",
            "a1b2c1d1e1",
            "a1b2c1d1e2",
            "a1b2c1d2e1",
            "a1b2c2d1e1",
            "a1b2c2d1e2",
            "a1b2c2d2e1",
            "a2b1c1d1e1",
            "a2b1c1d1e2",
            "a2b1c2d1e1",
            "a2b1c2d1e2",
            "a2b1c2d2e1",
            "a2b2c1d1e1",
            "a2b2c1d1e2",
            "a2b2c2d1e1",
            "a2b2c2d1e2",
            "a2b2c2d2e1",
        ],
    )
}
