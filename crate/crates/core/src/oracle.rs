//! Exhaustive enumeration of clean-type expressions.
//!
//! The oracle scans every idempotent of the ring and keeps the ones that
//! satisfy the requested side conditions, with no shortcuts and no shared
//! code with the constructive decompositions — only ring arithmetic and the
//! cached structural sets. It is the ground truth the algorithms are
//! validated against, and it refuses (rather than samples) when a ring is
//! too large to scan.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analysis::{self, AnalysisError, ANALYSIS_CAP};
use crate::ring::{Elem, Ring};
use crate::usc::CleanExpression;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("cardinality {cardinality} exceeds the oracle cap {cap}")]
    CapExceeded { cardinality: u64, cap: u64 },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Which side conditions an expression must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpressionKind {
    /// `a - e` is a unit.
    Clean,
    /// `a - e` is a unit and `e` commutes with `a`.
    StronglyClean,
    /// `a - e` is a unit and `e` lies in the double commutant of `a`.
    Bicommutant,
    /// `a - e` and `a + e` are units and `e` commutes with `a`.
    Signed,
}

impl ExpressionKind {
    pub fn name(self) -> &'static str {
        match self {
            ExpressionKind::Clean => "clean",
            ExpressionKind::StronglyClean => "strongly_clean",
            ExpressionKind::Bicommutant => "comm2",
            ExpressionKind::Signed => "signed",
        }
    }
}

/// Every expression of the requested kind for one element, sorted by
/// idempotent index.
#[derive(Clone, Debug)]
pub struct ExpressionList {
    pub ring: Ring,
    pub element: Elem,
    pub kind: ExpressionKind,
    pub expressions: Vec<CleanExpression>,
}

fn cap_check(r: &Ring) -> Result<(), OracleError> {
    if r.card() > ANALYSIS_CAP {
        Err(OracleError::CapExceeded {
            cardinality: r.card(),
            cap: ANALYSIS_CAP,
        })
    } else {
        Ok(())
    }
}

/// Scans all idempotents and returns every `(e, a - e)` satisfying `kind`.
pub fn expressions(r: &Ring, a: Elem, kind: ExpressionKind) -> Result<ExpressionList, OracleError> {
    cap_check(r)?;
    let units = analysis::units(r)?;
    let comm2 = match kind {
        ExpressionKind::Bicommutant => Some(analysis::double_commutant(r, a)?),
        _ => None,
    };
    let mut out = Vec::new();
    for &e in analysis::idempotent_slice(r) {
        let u = r.sub(a, e);
        if !units.contains(u) {
            continue;
        }
        let commuting = r.mul(e, a) == r.mul(a, e);
        let signed = commuting && units.contains(r.add(a, e));
        let keep = match kind {
            ExpressionKind::Clean => true,
            ExpressionKind::StronglyClean => commuting,
            ExpressionKind::Bicommutant => comm2.as_ref().unwrap().contains(e),
            ExpressionKind::Signed => signed,
        };
        if keep {
            out.push(CleanExpression {
                ring: r.clone(),
                element: a,
                idempotent: e,
                unit: u,
                commuting,
                double_commutant: comm2.as_ref().is_some_and(|c| c.contains(e)),
                signed,
            });
        }
    }
    Ok(ExpressionList {
        ring: r.clone(),
        element: a,
        kind,
        expressions: out,
    })
}

/// Number of expressions of the requested kind for one element.
pub fn expression_count(r: &Ring, a: Elem, kind: ExpressionKind) -> Result<usize, OracleError> {
    cap_check(r)?;
    let units = analysis::unit_data(r)?;
    let comm2 = match kind {
        ExpressionKind::Bicommutant => Some(analysis::double_commutant(r, a)?),
        _ => None,
    };
    let mut count = 0;
    for &e in analysis::idempotent_slice(r) {
        let u = r.sub(a, e);
        if !units.mask[u.0 as usize] {
            continue;
        }
        let ok = match kind {
            ExpressionKind::Clean => true,
            ExpressionKind::StronglyClean => r.mul(e, a) == r.mul(a, e),
            ExpressionKind::Bicommutant => comm2.as_ref().unwrap().contains(e),
            ExpressionKind::Signed => {
                r.mul(e, a) == r.mul(a, e) && units.mask[r.add(a, e).0 as usize]
            }
        };
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// Histogram over all elements of how many expressions of the given kind
/// each one has. A ring is "uniquely `kind`" exactly when the histogram is
/// `{1: |R|}`.
pub fn uniqueness_census(
    r: &Ring,
    kind: ExpressionKind,
) -> Result<BTreeMap<usize, u64>, OracleError> {
    cap_check(r)?;
    let mut histogram = BTreeMap::new();
    for a in r.elements() {
        let count = expression_count(r, a, kind)?;
        *histogram.entry(count).or_insert(0u64) += 1;
    }
    Ok(histogram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingExpr, TriMatrix};

    fn zn(n: u64) -> Ring {
        Ring::new(RingExpr::Zn(n)).unwrap()
    }

    fn t2z2() -> Ring {
        Ring::new(RingExpr::Triangular {
            n: 2,
            base: Box::new(RingExpr::Zn(2)),
        })
        .unwrap()
    }

    #[test]
    fn z6_clean_expressions_of_two() {
        let r = zn(6);
        let list = expressions(&r, Elem(2), ExpressionKind::Clean).unwrap();
        let pairs: Vec<(Elem, Elem)> = list
            .expressions
            .iter()
            .map(|e| (e.idempotent, e.unit))
            .collect();
        assert_eq!(pairs, vec![(Elem(1), Elem(1)), (Elem(3), Elem(5))]);
    }

    #[test]
    fn t2z2_strongly_clean_unique() {
        let r = t2z2();
        let a = r
            .pack_tri(&TriMatrix::new(2, vec![Elem(1), Elem(1), Elem(0)]).unwrap())
            .unwrap();
        let list = expressions(&r, a, ExpressionKind::StronglyClean).unwrap();
        assert_eq!(list.expressions.len(), 1);
        let e = &list.expressions[0];
        assert_eq!(
            r.unpack_tri(e.idempotent).unwrap().entries(),
            &[Elem(0), Elem(1), Elem(1)]
        );
        e.check().unwrap();
    }

    #[test]
    fn one_has_single_clean_expression_in_uc_rings() {
        // uniquely clean rings: 1 = 0 + 1 is the only expression
        for r in [
            zn(2),
            zn(4),
            Ring::new(RingExpr::Product(
                Box::new(RingExpr::Zn(2)),
                Box::new(RingExpr::Zn(2)),
            ))
            .unwrap(),
        ] {
            let list = expressions(&r, r.one(), ExpressionKind::Clean).unwrap();
            assert_eq!(list.expressions.len(), 1);
            assert_eq!(list.expressions[0].idempotent, r.zero());
            assert_eq!(list.expressions[0].unit, r.one());
        }
    }

    #[test]
    fn census_examples() {
        let census = uniqueness_census(&t2z2(), ExpressionKind::StronglyClean).unwrap();
        assert_eq!(census, BTreeMap::from([(1, 8)]));

        let census = uniqueness_census(&zn(6), ExpressionKind::Clean).unwrap();
        assert!(census.keys().any(|&k| k >= 2));

        let census = uniqueness_census(&zn(2), ExpressionKind::Clean).unwrap();
        assert_eq!(census, BTreeMap::from([(1, 2)]));
    }

    #[test]
    fn kind_monotonicity() {
        let r = Ring::new(RingExpr::Triangular {
            n: 2,
            base: Box::new(RingExpr::Zn(4)),
        })
        .unwrap();
        for a in r.elements() {
            let idems = |kind| -> Vec<Elem> {
                expressions(&r, a, kind)
                    .unwrap()
                    .expressions
                    .iter()
                    .map(|e| e.idempotent)
                    .collect()
            };
            let clean = idems(ExpressionKind::Clean);
            let strong = idems(ExpressionKind::StronglyClean);
            let comm2 = idems(ExpressionKind::Bicommutant);
            let signed = idems(ExpressionKind::Signed);
            assert!(strong.iter().all(|e| clean.contains(e)));
            assert!(comm2.iter().all(|e| strong.contains(e)));
            assert!(signed.iter().all(|e| strong.contains(e)));
        }
    }

    #[test]
    fn every_expression_revalidates() {
        let r = t2z2();
        for a in r.elements() {
            for kind in [
                ExpressionKind::Clean,
                ExpressionKind::StronglyClean,
                ExpressionKind::Bicommutant,
                ExpressionKind::Signed,
            ] {
                for e in expressions(&r, a, kind).unwrap().expressions {
                    e.check().unwrap();
                }
            }
        }
    }
}
