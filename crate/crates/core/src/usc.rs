//! Constructive clean decompositions in upper-triangular matrix rings.
//!
//! Over a base ring that is uniquely clean and uniquely bleached, every
//! element of `T_n(R)` has a unique strongly clean expression `A = E + U`
//! with `E` idempotent, `U` invertible, and `E*A = A*E`.
//! [`strongly_clean_decompose`] builds it by recursion on the block form
//! `A = [[a_11, alpha], [0, A_1]]`: the base ring supplies `a_11 = e_11 +
//! u_11`, the recursive call supplies `A_1 = E_1 + U_1`, and the corner row
//! `x` of `E` is the unique solution of
//!
//! ```text
//! (u_11 + 2*e_11 - 1) x - x U_1 = e_11*alpha - alpha*E_1,
//! ```
//!
//! solved entry by entry with the series solver (the scalar on the left
//! lies in the radical, the diagonal of `U_1` consists of units).
//!
//! Over a commutative uniquely clean base two refinements are available:
//! [`lift_idempotent_mod_radical`] produces the idempotent `G` in the
//! bicommutant of `A` with `A - G` in the radical,
//! [`bicommutant_decompose`] turns it into the unique clean expression with
//! `E` in `comm^2(A)`, and [`signed_decompose`] produces the unique
//! idempotent commuting with `A` for which both `A - E` and `A + E` are
//! invertible (applying the lift to `A^2`).
//!
//! Every decomposition re-verifies its output under ring arithmetic before
//! returning.

use thiserror::Error;

use crate::analysis::{self, AnalysisError};
use crate::ring::{tri_offset, Elem, Ring, RingError};
use crate::sylvester::{self, LRMode, LRProblem, Method, SylvesterError};

/// Bound for verifying bicommutant membership against the full double
/// commutant; larger rings check commutation with `comm(A)` elementwise.
const COMM2_EXACT_LIMIT: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UscError {
    #[error("element {element} does not have a unique clean expression")]
    NotUniquelyClean { element: Elem },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Sylvester(#[from] SylvesterError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A verified decomposition `element = idempotent + unit`, with flags for
/// the side conditions that were established.
#[derive(Clone, Debug, PartialEq)]
pub struct CleanExpression {
    pub ring: Ring,
    pub element: Elem,
    pub idempotent: Elem,
    pub unit: Elem,
    /// `idempotent` commutes with `element`.
    pub commuting: bool,
    /// `idempotent` lies in the double commutant of `element`.
    pub double_commutant: bool,
    /// Both `element - idempotent` and `element + idempotent` are units.
    pub signed: bool,
}

impl CleanExpression {
    /// Re-checks the defining equations and every set flag under ring
    /// arithmetic.
    pub fn check(&self) -> Result<(), UscError> {
        let r = &self.ring;
        let (a, e, u) = (self.element, self.idempotent, self.unit);
        if r.add(e, u) != a {
            return Err(UscError::InternalCheckFailed(format!(
                "{e} + {u} != {a}"
            )));
        }
        if r.mul(e, e) != e {
            return Err(UscError::InternalCheckFailed(format!(
                "{e} is not idempotent"
            )));
        }
        if !analysis::is_unit(r, u) {
            return Err(UscError::InternalCheckFailed(format!("{u} is not a unit")));
        }
        if self.commuting && r.mul(e, a) != r.mul(a, e) {
            return Err(UscError::InternalCheckFailed(format!(
                "{e} does not commute with {a}"
            )));
        }
        if self.double_commutant {
            verify_bicommutant_membership(r, a, e)?;
        }
        if self.signed {
            let plus = r.add(a, e);
            if !analysis::is_unit(r, plus) {
                return Err(UscError::InternalCheckFailed(format!(
                    "{a} + {e} is not a unit"
                )));
            }
        }
        Ok(())
    }
}

/// `(e, u)` with `a = e + u`, `e` the unique idempotent making `u` a unit.
fn uc_pair(base: &Ring, a: Elem) -> Result<(Elem, Elem), UscError> {
    let mut hit: Option<(Elem, Elem)> = None;
    for &e in analysis::idempotent_slice(base) {
        let u = base.sub(a, e);
        if analysis::is_unit(base, u) {
            if hit.is_some() {
                return Err(UscError::NotUniquelyClean { element: a });
            }
            hit = Some((e, u));
        }
    }
    hit.ok_or(UscError::NotUniquelyClean { element: a })
}

/// The unique idempotent congruent to `a` modulo the radical.
fn radical_pair(base: &Ring, a: Elem) -> Result<Elem, UscError> {
    let mut hit: Option<Elem> = None;
    for &e in analysis::idempotent_slice(base) {
        if analysis::in_jacobson(base, base.sub(a, e)) {
            if hit.is_some() {
                return Err(UscError::NotUniquelyClean { element: a });
            }
            hit = Some(e);
        }
    }
    hit.ok_or(UscError::NotUniquelyClean { element: a })
}

/// Unique clean decomposition in a uniquely clean ring, found by scanning
/// the idempotents. Errors with [`UscError::NotUniquelyClean`] when the
/// element has zero or several expressions, so it doubles as a checker.
pub fn uc_decompose_base(r: &Ring, a: Elem) -> Result<CleanExpression, UscError> {
    if !r.is_valid(a) {
        return Err(RingError::IndexOutOfRange {
            index: a.0,
            cardinality: r.card(),
        }
        .into());
    }
    let (e, u) = uc_pair(r, a)?;
    let expr = CleanExpression {
        ring: r.clone(),
        element: a,
        idempotent: e,
        unit: u,
        commuting: r.mul(e, a) == r.mul(a, e),
        double_commutant: false,
        signed: false,
    };
    expr.check()?;
    Ok(expr)
}

fn triangular_of(tr: &Ring) -> Result<(usize, Ring), UscError> {
    match tr.triangular_parts() {
        Some((n, base)) => Ok((n, base.clone())),
        None => Err(UscError::PreconditionViolated(
            "decomposition requires a triangular matrix ring".to_string(),
        )),
    }
}

fn ensure_uniquely_clean(base: &Ring) -> Result<(), UscError> {
    let _ = analysis::units(base); // prime the unit cache when within cap
    for a in base.elements() {
        if let Err(UscError::NotUniquelyClean { .. }) = uc_pair(base, a) {
            return Err(UscError::PreconditionViolated(format!(
                "base ring {base} is not uniquely clean (element {a})"
            )));
        }
    }
    Ok(())
}

fn ensure_bleached(base: &Ring) -> Result<(), UscError> {
    if base.is_commutative() {
        return Ok(()); // commutative rings are uniquely bleached
    }
    match analysis::is_uniquely_bleached(base)? {
        analysis::BleachOutcome::Bleached => Ok(()),
        analysis::BleachOutcome::Counterexample { radical, unit, .. } => {
            Err(UscError::PreconditionViolated(format!(
                "base ring {base} is not uniquely bleached (pair {radical}, {unit})"
            )))
        }
    }
}

fn ensure_commutative(base: &Ring) -> Result<(), UscError> {
    if base.is_commutative() {
        Ok(())
    } else {
        Err(UscError::PreconditionViolated(format!(
            "base ring {base} is not commutative"
        )))
    }
}

/// `out[j] = sum_{i <= j} row[i] * t[i][j]` — row vector times triangular.
fn row_times_tri(base: &Ring, n: usize, row: &[Elem], t: &[Elem]) -> Vec<Elem> {
    (0..n)
        .map(|j| {
            let mut acc = base.zero();
            for i in 0..=j {
                acc = base.add(acc, base.mul(row[i], t[tri_offset(n, i, j)]));
            }
            acc
        })
        .collect()
}

/// Inverse of an upper-triangular matrix whose diagonal entries are units,
/// by back substitution. Returns `None` when a diagonal entry is not
/// invertible or the product check fails.
fn tri_inverse(base: &Ring, n: usize, m: &[Elem]) -> Option<Vec<Elem>> {
    let mut inv = vec![base.zero(); m.len()];
    for j in 0..n {
        let d = analysis::inverse(base, m[tri_offset(n, j, j)]).ok()?;
        inv[tri_offset(n, j, j)] = d;
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = base.zero();
            for k in i + 1..=j {
                acc = base.add(
                    acc,
                    base.mul(m[tri_offset(n, i, k)], inv[tri_offset(n, k, j)]),
                );
            }
            let d = inv[tri_offset(n, i, i)];
            // solve m_ii * x = -acc
            inv[tri_offset(n, i, j)] = base.neg(base.mul(d, acc));
        }
    }
    let mut prod = vec![base.zero(); m.len()];
    crate::ring::tri_mul_entries(base, n, m, &inv, &mut prod);
    let mut identity = vec![base.zero(); m.len()];
    for i in 0..n {
        identity[tri_offset(n, i, i)] = base.one();
    }
    if prod == identity {
        Some(inv)
    } else {
        None
    }
}

/// Recursive strongly clean decomposition on raw upper-triangle entries;
/// returns the entries of `(E, U)`.
fn decompose_entries(
    base: &Ring,
    n: usize,
    m: &[Elem],
) -> Result<(Vec<Elem>, Vec<Elem>), UscError> {
    if n == 1 {
        let (e, u) = uc_pair(base, m[0])?;
        return Ok((vec![e], vec![u]));
    }
    let sub_n = n - 1;
    let a11 = m[0];
    let alpha = &m[1..n];
    let (e1, u1) = decompose_entries(base, sub_n, &m[n..])?;
    let (e11, u11) = uc_pair(base, a11)?;
    // w = u_11 + 2*e_11 - 1 lies in the radical of the base ring
    let w = base.sub(base.add(u11, base.add(e11, e11)), base.one());
    // right-hand side row: e_11*alpha - alpha*E_1
    let rhs_row: Vec<Elem> = (0..sub_n)
        .map(|j| {
            let mut acc = base.mul(e11, alpha[j]);
            for i in 0..=j {
                acc = base.sub(acc, base.mul(alpha[i], e1[tri_offset(sub_n, i, j)]));
            }
            acc
        })
        .collect();
    // solve for the corner row left to right; each column sees the
    // previously solved entries through the strictly upper part of U_1
    let mut x = vec![base.zero(); sub_n];
    for j in 0..sub_n {
        let mut rhs = rhs_row[j];
        for i in 0..j {
            rhs = base.add(rhs, base.mul(x[i], u1[tri_offset(sub_n, i, j)]));
        }
        let c_jj = u1[tri_offset(sub_n, j, j)];
        let problem = LRProblem::new(base.clone(), w, c_jj, rhs, LRMode::ARadicalBUnit)?;
        x[j] = sylvester::solve_lr(&problem, Method::Series)?;
    }
    let mut e_entries = Vec::with_capacity(m.len());
    e_entries.push(e11);
    e_entries.extend_from_slice(&x);
    e_entries.extend_from_slice(&e1);
    let u_entries: Vec<Elem> = m
        .iter()
        .zip(&e_entries)
        .map(|(&a, &e)| base.sub(a, e))
        .collect();
    Ok((e_entries, u_entries))
}

/// The unique strongly clean decomposition of `a` in a triangular matrix
/// ring whose base is uniquely clean and uniquely bleached.
pub fn strongly_clean_decompose(tr: &Ring, a: Elem) -> Result<CleanExpression, UscError> {
    let (n, base) = triangular_of(tr)?;
    ensure_uniquely_clean(&base)?;
    ensure_bleached(&base)?;
    let m = tr.unpack_tri(a)?;
    let (e_entries, _) = decompose_entries(&base, n, m.entries())?;
    let e = tr.pack_tri(&crate::ring::TriMatrix::new(n, e_entries)?)?;
    let u = tr.sub(a, e);
    if tr.mul(e, e) != e {
        return Err(UscError::InternalCheckFailed(
            "assembled idempotent fails e^2 = e".to_string(),
        ));
    }
    if tr.mul(e, a) != tr.mul(a, e) {
        return Err(UscError::InternalCheckFailed(
            "assembled idempotent fails e*a = a*e".to_string(),
        ));
    }
    if !analysis::is_unit(tr, u) {
        return Err(UscError::InternalCheckFailed(
            "assembled complement is not a unit".to_string(),
        ));
    }
    Ok(CleanExpression {
        ring: tr.clone(),
        element: a,
        idempotent: e,
        unit: u,
        commuting: true,
        double_commutant: false,
        signed: false,
    })
}

fn verify_bicommutant_membership(r: &Ring, a: Elem, g: Elem) -> Result<(), UscError> {
    if r.card() <= COMM2_EXACT_LIMIT {
        let comm2 = analysis::double_commutant(r, a)?;
        if !comm2.contains(g) {
            return Err(UscError::InternalCheckFailed(format!(
                "{g} is not in the double commutant of {a}"
            )));
        }
    } else {
        // commutation with every element of comm(a)
        let comm = analysis::commutant(r, a);
        for y in comm.iter() {
            if r.mul(g, y) != r.mul(y, g) {
                return Err(UscError::InternalCheckFailed(format!(
                    "{g} fails to commute with {y} in comm({a})"
                )));
            }
        }
    }
    Ok(())
}

/// Entries of `G` with `G` idempotent, `A - G` in the radical, and `G` in
/// the double commutant of `A`, by recursion on the block form.
fn lift_entries(base: &Ring, n: usize, m: &[Elem]) -> Result<Vec<Elem>, UscError> {
    if n == 1 {
        return Ok(vec![radical_pair(base, m[0])?]);
    }
    let sub_n = n - 1;
    let a11 = m[0];
    let alpha = &m[1..n];
    let e1 = lift_entries(base, sub_n, &m[n..])?;
    let e11 = radical_pair(base, a11)?;
    let w11 = base.sub(a11, e11);
    // c = 1 - 2*e_11 - w_11; the matrix W_1 + c*I is invertible because its
    // diagonal is a unit plus a radical element
    let c = base.sub(base.sub(base.one(), base.add(e11, e11)), w11);
    let mut summand: Vec<Elem> = m[n..]
        .iter()
        .zip(&e1)
        .map(|(&a, &e)| base.sub(a, e))
        .collect();
    for i in 0..sub_n {
        let off = tri_offset(sub_n, i, i);
        summand[off] = base.add(summand[off], c);
    }
    let inv = tri_inverse(base, sub_n, &summand).ok_or_else(|| {
        UscError::InternalCheckFailed("radical-shifted diagonal summand not invertible".to_string())
    })?;
    // corner row: alpha * (E_1 - e_11*I) * (W_1 + c*I)^-1
    let mut shifted = e1.clone();
    for i in 0..sub_n {
        let off = tri_offset(sub_n, i, i);
        shifted[off] = base.sub(shifted[off], e11);
    }
    let row = row_times_tri(base, sub_n, alpha, &shifted);
    let beta = row_times_tri(base, sub_n, &row, &inv);
    let mut out = Vec::with_capacity(m.len());
    out.push(e11);
    out.extend_from_slice(&beta);
    out.extend_from_slice(&e1);
    Ok(out)
}

/// The idempotent `G` in the double commutant of `a` with `a - G` in the
/// radical of the triangular matrix ring. Base must be commutative and
/// uniquely clean.
pub fn lift_idempotent_mod_radical(tr: &Ring, a: Elem) -> Result<Elem, UscError> {
    let (n, base) = triangular_of(tr)?;
    ensure_commutative(&base)?;
    ensure_uniquely_clean(&base)?;
    let m = tr.unpack_tri(a)?;
    let entries = lift_entries(&base, n, m.entries())?;
    let g = tr.pack_tri(&crate::ring::TriMatrix::new(n, entries)?)?;
    if tr.mul(g, g) != g {
        return Err(UscError::InternalCheckFailed(
            "lifted element fails g^2 = g".to_string(),
        ));
    }
    if !analysis::in_jacobson(tr, tr.sub(a, g)) {
        return Err(UscError::InternalCheckFailed(
            "a - g is not in the radical".to_string(),
        ));
    }
    verify_bicommutant_membership(tr, a, g)?;
    Ok(g)
}

/// The unique clean decomposition whose idempotent lies in the double
/// commutant of `a`. Base must be commutative and uniquely clean.
pub fn bicommutant_decompose(tr: &Ring, a: Elem) -> Result<CleanExpression, UscError> {
    let g = lift_idempotent_mod_radical(tr, a)?;
    let e = tr.sub(tr.one(), g);
    let u = tr.sub(a, e);
    let expr = CleanExpression {
        ring: tr.clone(),
        element: a,
        idempotent: e,
        unit: u,
        commuting: true,
        double_commutant: true,
        signed: false,
    };
    expr.check()?;
    Ok(expr)
}

/// The unique idempotent commuting with `a` such that both `a - E` and
/// `a + E` are units. Base must be commutative and uniquely clean.
pub fn signed_decompose(tr: &Ring, a: Elem) -> Result<CleanExpression, UscError> {
    let a2 = tr.mul(a, a);
    let g = lift_idempotent_mod_radical(tr, a2)?;
    let e = tr.sub(tr.one(), g);
    let u = tr.sub(a, e);
    if tr.mul(e, a) != tr.mul(a, e) {
        return Err(UscError::InternalCheckFailed(
            "signed idempotent does not commute with the element".to_string(),
        ));
    }
    // (a - e)(a + e) = a^2 - e; its unit-ness carries to both factors
    if !analysis::is_unit(tr, tr.sub(a2, e)) {
        return Err(UscError::InternalCheckFailed(
            "a^2 - e is not a unit".to_string(),
        ));
    }
    let expr = CleanExpression {
        ring: tr.clone(),
        element: a,
        idempotent: e,
        unit: u,
        commuting: true,
        double_commutant: false,
        signed: true,
    };
    expr.check()?;
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingExpr, TriMatrix};

    fn zn(n: u64) -> Ring {
        Ring::new(RingExpr::Zn(n)).unwrap()
    }

    fn tri(n: usize, base: RingExpr) -> Ring {
        Ring::new(RingExpr::Triangular {
            n,
            base: Box::new(base),
        })
        .unwrap()
    }

    fn mat(r: &Ring, entries: &[u64]) -> Elem {
        let n = r.triangular_parts().unwrap().0;
        r.pack_tri(&TriMatrix::new(n, entries.iter().map(|&e| Elem(e)).collect()).unwrap())
            .unwrap()
    }

    #[test]
    fn uc_base_examples() {
        let z2 = zn(2);
        let expr = uc_decompose_base(&z2, Elem(0)).unwrap();
        assert_eq!((expr.idempotent, expr.unit), (Elem(1), Elem(1)));

        let z4 = zn(4);
        let expr = uc_decompose_base(&z4, Elem(2)).unwrap();
        assert_eq!((expr.idempotent, expr.unit), (Elem(1), Elem(1)));

        let z6 = zn(6);
        assert!(matches!(
            uc_decompose_base(&z6, Elem(2)),
            Err(UscError::NotUniquelyClean { element: Elem(2) })
        ));
    }

    #[test]
    fn t2_z2_decomposition_example() {
        let t = tri(2, RingExpr::Zn(2));
        let a = mat(&t, &[1, 1, 0]);
        let expr = strongly_clean_decompose(&t, a).unwrap();
        assert_eq!(expr.idempotent, mat(&t, &[0, 1, 1]));
        assert_eq!(expr.unit, t.one());
        expr.check().unwrap();
    }

    #[test]
    fn identity_and_zero_decompose() {
        for t in [tri(2, RingExpr::Zn(4)), tri(3, RingExpr::Zn(2))] {
            let expr = strongly_clean_decompose(&t, t.one()).unwrap();
            assert_eq!(expr.idempotent, t.zero());
            assert_eq!(expr.unit, t.one());

            let expr = strongly_clean_decompose(&t, t.zero()).unwrap();
            assert_eq!(expr.idempotent, t.one());
            assert_eq!(expr.unit, t.neg(t.one()));
        }
    }

    #[test]
    fn rejects_non_uc_base() {
        let t = tri(2, RingExpr::Zn(3));
        assert!(matches!(
            strongly_clean_decompose(&t, t.one()),
            Err(UscError::PreconditionViolated(_))
        ));
        let t6 = tri(2, RingExpr::Zn(6));
        assert!(matches!(
            strongly_clean_decompose(&t6, t6.zero()),
            Err(UscError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn rejects_non_triangular() {
        let z4 = zn(4);
        assert!(matches!(
            strongly_clean_decompose(&z4, Elem(1)),
            Err(UscError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn lift_examples() {
        let t = tri(2, RingExpr::Zn(2));
        let a = mat(&t, &[1, 1, 0]);
        // A is idempotent, so the lift returns A itself
        assert_eq!(lift_idempotent_mod_radical(&t, a).unwrap(), a);
        assert_eq!(lift_idempotent_mod_radical(&t, t.zero()).unwrap(), t.zero());
        assert_eq!(lift_idempotent_mod_radical(&t, t.one()).unwrap(), t.one());
    }

    #[test]
    fn bicommutant_decompose_examples() {
        let t = tri(2, RingExpr::Zn(2));
        let a = mat(&t, &[1, 1, 0]);
        let expr = bicommutant_decompose(&t, a).unwrap();
        assert_eq!(expr.idempotent, mat(&t, &[0, 1, 1]));
        let sc = strongly_clean_decompose(&t, a).unwrap();
        assert_eq!(expr.idempotent, sc.idempotent);

        let expr = bicommutant_decompose(&t, t.zero()).unwrap();
        assert_eq!(expr.idempotent, t.one());

        // diag(2,2) over Z4: E = I, A - E = diag(1,1)
        let t4 = tri(2, RingExpr::Zn(4));
        let d22 = mat(&t4, &[2, 0, 2]);
        let expr = bicommutant_decompose(&t4, d22).unwrap();
        assert_eq!(expr.idempotent, t4.one());
        expr.check().unwrap();
    }

    #[test]
    fn signed_decompose_examples() {
        let t4 = tri(2, RingExpr::Zn(4));
        let d22 = mat(&t4, &[2, 0, 2]);
        let expr = signed_decompose(&t4, d22).unwrap();
        assert_eq!(expr.idempotent, t4.one());
        assert_eq!(expr.unit, mat(&t4, &[1, 0, 1]));
        expr.check().unwrap();

        let expr = signed_decompose(&t4, t4.zero()).unwrap();
        assert_eq!(expr.idempotent, t4.one());
    }

    #[test]
    fn rejects_noncommutative_base_for_bicommutant() {
        let nested = tri(
            2,
            RingExpr::Triangular {
                n: 2,
                base: Box::new(RingExpr::Zn(2)),
            },
        );
        assert!(matches!(
            bicommutant_decompose(&nested, nested.zero()),
            Err(UscError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn corner_equation_agrees_with_direct_conditions() {
        // For every element of T2(Z4), the decomposition's corner x makes
        // E idempotent and commuting, matching the defining equations.
        let t = tri(2, RingExpr::Zn(4));
        for a in t.elements() {
            let expr = strongly_clean_decompose(&t, a).unwrap();
            let e = expr.idempotent;
            assert_eq!(t.mul(e, e), e);
            assert_eq!(t.mul(e, a), t.mul(a, e));
            assert_eq!(t.add(expr.idempotent, expr.unit), a);
        }
    }
}
