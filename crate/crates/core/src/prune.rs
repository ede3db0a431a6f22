//! Necessary conditions for a tuple `(B, A)` to admit an APN permutation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{reference_classes, AutoTuple, PublishedVerdict};
use crate::error::{Error, Result};
use crate::gf2::{fixed_space, Gf2Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    RejectedDim,
    RejectedQuadrinomial,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// `dim Ord(A, i)` and `dim Ord(B, i)`; either they differ or the common
    /// value is excluded.
    Dimension { i: u64, dim_a: usize, dim_b: usize },
    /// `X^a + X^b + X^c + 1` annihilates both `A` and `B`.
    Quadrinomial { a: u64, b: u64, c: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub const UNDECIDED: Verdict = Verdict {
        kind: VerdictKind::Undecided,
        witness: None,
    };

    pub fn is_rejected(&self) -> bool {
        self.kind != VerdictKind::Undecided
    }
}

/// Dimensions of invariant subspaces that no APN permutation can map onto
/// each other (for a proper nonzero subspace).
fn excluded_dimension(d: usize, n: usize) -> bool {
    d > 0 && d < n && (d == 2 || d == 4 || d == n - 1)
}

/// A permutation maps `Ord(A, i)` bijectively onto `Ord(B, i)`, and an APN
/// permutation cannot map a subspace of dimension 2, 4 or n-1 onto another.
pub fn dim_filter(t: &AutoTuple) -> Verdict {
    for i in [1, t.p] {
        let dim_a = fixed_space(&t.a, i).dim;
        let dim_b = fixed_space(&t.b, i).dim;
        if dim_a != dim_b || excluded_dimension(dim_a, t.n) {
            return Verdict {
                kind: VerdictKind::RejectedDim,
                witness: Some(Witness::Dimension { i, dim_a, dim_b }),
            };
        }
    }
    Verdict::UNDECIDED
}

fn powers(m: &Gf2Matrix, p: u64) -> Vec<Gf2Matrix> {
    let mut out = Vec::with_capacity(p as usize);
    let mut cur = Gf2Matrix::identity(m.n());
    for _ in 0..p {
        out.push(cur);
        cur = cur.mul(m);
    }
    out
}

/// Searches `p > a > b > c > 0`, largest `a` first, for a relation
/// `M^a + M^b + M^c + I = 0` shared by `A` and `B`. For such a relation and a
/// point `g` of full order, `F(A^a g) + F(A^b g) = F(A^c g) + F(g)` with four
/// distinct inputs, so `F` is not APN.
pub fn quadrinomial_filter(t: &AutoTuple) -> Verdict {
    let p = t.p;
    let pa = powers(&t.a, p);
    let pb = powers(&t.b, p);
    let zero_sum = |pw: &[Gf2Matrix], a: u64, b: u64, c: u64| {
        pw[a as usize]
            .add(&pw[b as usize])
            .add(&pw[c as usize])
            .add(&pw[0])
            .is_zero()
    };
    for a in (3..p).rev() {
        for b in (2..a).rev() {
            for c in (1..b).rev() {
                if zero_sum(&pa, a, b, c) && zero_sum(&pb, a, b, c) {
                    return Verdict {
                        kind: VerdictKind::RejectedQuadrinomial,
                        witness: Some(Witness::Quadrinomial { a, b, c }),
                    };
                }
            }
        }
    }
    Verdict::UNDECIDED
}

/// The dimension filter, then the quadrinomial filter.
pub fn admissibility(t: &AutoTuple) -> Verdict {
    let v = dim_filter(t);
    if v.is_rejected() {
        return v;
    }
    quadrinomial_filter(t)
}

/// Re-checks a witness against the tuple by direct computation.
pub fn verify_witness(t: &AutoTuple, v: &Verdict) -> bool {
    match (v.kind, v.witness) {
        (VerdictKind::Undecided, None) => true,
        (VerdictKind::RejectedDim, Some(Witness::Dimension { i, dim_a, dim_b })) => {
            fixed_space(&t.a, i).dim == dim_a
                && fixed_space(&t.b, i).dim == dim_b
                && (dim_a != dim_b || excluded_dimension(dim_a, t.n))
        }
        (VerdictKind::RejectedQuadrinomial, Some(Witness::Quadrinomial { a, b, c })) => {
            let rel = |m: &Gf2Matrix| {
                m.pow(a)
                    .add(&m.pow(b))
                    .add(&m.pow(c))
                    .add(&Gf2Matrix::identity(m.n()))
                    .is_zero()
            };
            t.p > a && a > b && b > c && c > 0 && rel(&t.a) && rel(&t.b)
        }
        _ => false,
    }
}

pub const VERDICTS_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub n: usize,
    pub class_id: usize,
    pub paper_class: Option<usize>,
    pub verdict: VerdictKind,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictsFile {
    pub schema: u32,
    pub n: usize,
    pub verdicts: Vec<VerdictRecord>,
}

impl VerdictsFile {
    pub fn new(n: usize, tuples: &[AutoTuple]) -> Self {
        VerdictsFile {
            schema: VERDICTS_SCHEMA,
            n,
            verdicts: tuples
                .iter()
                .map(|t| {
                    let v = admissibility(t);
                    VerdictRecord {
                        n: t.n,
                        class_id: t.class_id,
                        paper_class: t.paper_class,
                        verdict: v.kind,
                        witness: v.witness,
                    }
                })
                .collect(),
        }
    }
}

/// One row of the comparison against the published verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub class_id: usize,
    pub published: PublishedVerdict,
    pub computed: Verdict,
}

impl Table1Row {
    /// Filter rejections must agree in kind; everything else must stay
    /// undecided.
    pub fn matches(&self) -> bool {
        match self.published {
            PublishedVerdict::Dimension => self.computed.kind == VerdictKind::RejectedDim,
            PublishedVerdict::Quadrinomial => {
                self.computed.kind == VerdictKind::RejectedQuadrinomial
            }
            _ => self.computed.kind == VerdictKind::Undecided,
        }
    }
}

/// Computed verdicts next to the published ones, in published order.
/// `tuples` must carry published class indices.
pub fn table1_rows(n: usize, tuples: &[AutoTuple]) -> Result<Vec<Table1Row>> {
    let refs = reference_classes(n)
        .ok_or_else(|| Error::InvalidInput(format!("no published verdicts for n = {n}")))?;
    refs.iter()
        .map(|r| {
            let t = tuples
                .iter()
                .find(|t| t.paper_class == Some(r.class))
                .ok_or_else(|| Error::InvalidInput(format!("class {} missing", r.class)))?;
            Ok(Table1Row {
                class_id: r.class,
                published: r.admissible,
                computed: admissibility(t),
            })
        })
        .collect()
}

fn published_label(v: PublishedVerdict) -> &'static str {
    match v {
        PublishedVerdict::Dimension => "no (dimension)",
        PublishedVerdict::Quadrinomial => "no (quadrinomial)",
        PublishedVerdict::SearchEmpty => "no (search)",
        PublishedVerdict::Admissible => "yes",
        PublishedVerdict::Open => "?",
    }
}

fn computed_label(v: &Verdict) -> String {
    match v.witness {
        Some(Witness::Dimension { i, dim_a, dim_b }) if dim_a == dim_b => {
            format!("rejected-dim (i={i}, dim={dim_a})")
        }
        Some(Witness::Dimension { i, dim_a, dim_b }) => {
            format!("rejected-dim (i={i}, {dim_a} != {dim_b})")
        }
        Some(Witness::Quadrinomial { a, b, c }) => {
            format!("rejected-quadrinomial (X^{a}+X^{b}+X^{c}+1)")
        }
        None => "undecided".to_string(),
    }
}

pub fn render_table1(n: usize, rows: &[Table1Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n = {n}");
    let _ = writeln!(s, "{:>4}  {:<18}  {:<42}  {}", "No.", "published", "computed", "flag");
    for r in rows {
        let _ = writeln!(
            s,
            "{:>4}  {:<18}  {:<42}  {}",
            r.class_id,
            published_label(r.published),
            computed_label(&r.computed),
            if r.matches() { "MATCH" } else { "MISMATCH" }
        );
    }
    let mismatches = rows.iter().filter(|r| !r.matches()).count();
    let pruned = rows.iter().filter(|r| r.computed.is_rejected()).count();
    let _ = writeln!(s, "pruned {pruned}, mismatches {mismatches}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::enumerate_classes;

    fn class(n: usize, k: usize) -> AutoTuple {
        enumerate_classes(n).into_iter().find(|t| t.paper_class == Some(k)).unwrap()
    }

    #[test]
    fn named_rejections() {
        let v = dim_filter(&class(6, 6));
        assert_eq!(v.kind, VerdictKind::RejectedDim);
        assert_eq!(v.witness, Some(Witness::Dimension { i: 1, dim_a: 2, dim_b: 2 }));
        assert_eq!(dim_filter(&class(7, 12)).kind, VerdictKind::RejectedDim);
        assert_eq!(quadrinomial_filter(&class(6, 4)).kind, VerdictKind::RejectedQuadrinomial);
        assert_eq!(quadrinomial_filter(&class(7, 2)).kind, VerdictKind::RejectedQuadrinomial);
        assert_eq!(admissibility(&class(6, 5)), Verdict::UNDECIDED);
    }

    #[test]
    fn zero_fixed_space_passes_dim_filter() {
        let t = class(7, 1);
        assert_eq!(t.fixed_dims, (1, 1));
        let t = class(6, 5);
        assert_eq!(t.fixed_dims, (0, 0));
        assert_eq!(dim_filter(&t), Verdict::UNDECIDED);
    }

    #[test]
    fn trivial_relation_is_ignored() {
        // order 2: the only relation is M^2 + I = 0, never a quadrinomial
        for t in enumerate_classes(5).iter().filter(|t| t.p == 2) {
            assert_eq!(quadrinomial_filter(t), Verdict::UNDECIDED);
        }
    }

    #[test]
    fn witnesses_verify() {
        for n in 3..=8 {
            for t in enumerate_classes(n) {
                let v = admissibility(&t);
                assert!(verify_witness(&t, &v), "n = {n} class {}", t.class_id);
            }
        }
    }

    #[test]
    fn published_columns_match() {
        for (n, pruned) in [(6, 8), (7, 13), (8, 15)] {
            let rows = table1_rows(n, &enumerate_classes(n)).unwrap();
            let bad: Vec<usize> = rows.iter().filter(|r| !r.matches()).map(|r| r.class_id).collect();
            assert!(bad.is_empty(), "n = {n}: mismatches {bad:?}");
            assert_eq!(rows.iter().filter(|r| r.computed.is_rejected()).count(), pruned);
        }
        let text = render_table1(6, &table1_rows(6, &enumerate_classes(6)).unwrap());
        assert!(text.contains("mismatches 0"));
    }

    #[test]
    fn verdict_json_shape() {
        let f = VerdictsFile::new(6, &enumerate_classes(6));
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"verdict\":\"rejected-dim\""));
        assert!(s.contains("\"witness\":{\"i\":1,\"dim_a\":2,\"dim_b\":2}"));
        assert!(s.contains("\"witness\":null"));
    }
}
