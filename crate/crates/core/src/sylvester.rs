//! The operator equation `a*x - x*b = v` over a finite ring.
//!
//! Writing `L` for the map `x -> a*x - x*b`, the equation has a unique
//! solution exactly when `L` is bijective. Two solvers are provided: a
//! brute-force scan of the whole ring, and a closed-form finite series that
//! inverts `L` when one of `a`, `b` is a unit and the other is nilpotent.
//! With `a` invertible and `b^n = 0` the inverse operator is
//!
//! ```text
//! phi(v) = a^-1 v + a^-2 v b + ... + a^-n v b^(n-1),
//! ```
//!
//! and when `b` is merely assumed to have a central `n`-th power the same
//! series composes with `L` to left multiplication by `1 - a^-n b^n`, so a
//! single correction factor finishes the job whenever that element is a
//! unit. Every solver verifies its answer by substitution before returning.

use thiserror::Error;

use crate::analysis::{self, AnalysisError};
use crate::ring::{Elem, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SylvesterError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("the map x -> a*x - x*b is not bijective for these coefficients")]
    NotBijective,
    #[error("internal residual check failed; solver produced a wrong answer")]
    ResidualMismatch,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Which membership pattern the coefficients satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LRMode {
    /// `a` a unit, `b` in the Jacobson radical.
    AUnitBRadical,
    /// `a` in the Jacobson radical, `b` a unit.
    ARadicalBUnit,
    Generic,
}

/// An instance of `a*x - x*b = v`.
#[derive(Clone, Debug)]
pub struct LRProblem {
    pub ring: Ring,
    pub a: Elem,
    pub b: Elem,
    pub v: Elem,
    pub mode: LRMode,
}

impl LRProblem {
    /// Builds a problem, checking the membership requirements of `mode`.
    pub fn new(ring: Ring, a: Elem, b: Elem, v: Elem, mode: LRMode) -> Result<Self, SylvesterError> {
        let p = LRProblem { ring, a, b, v, mode };
        p.check_mode()?;
        Ok(p)
    }

    /// Classifies `(a, b)` by unit/radical membership.
    pub fn infer_mode(ring: &Ring, a: Elem, b: Elem) -> LRMode {
        if analysis::is_unit(ring, a) && analysis::in_jacobson(ring, b) {
            LRMode::AUnitBRadical
        } else if analysis::in_jacobson(ring, a) && analysis::is_unit(ring, b) {
            LRMode::ARadicalBUnit
        } else {
            LRMode::Generic
        }
    }

    fn check_mode(&self) -> Result<(), SylvesterError> {
        let (r, a, b) = (&self.ring, self.a, self.b);
        match self.mode {
            LRMode::AUnitBRadical => {
                if !analysis::is_unit(r, a) {
                    return Err(SylvesterError::PreconditionViolated(format!(
                        "mode requires a = {a} to be a unit"
                    )));
                }
                if !analysis::in_jacobson(r, b) {
                    return Err(SylvesterError::PreconditionViolated(format!(
                        "mode requires b = {b} to lie in the Jacobson radical"
                    )));
                }
            }
            LRMode::ARadicalBUnit => {
                if !analysis::in_jacobson(r, a) {
                    return Err(SylvesterError::PreconditionViolated(format!(
                        "mode requires a = {a} to lie in the Jacobson radical"
                    )));
                }
                if !analysis::is_unit(r, b) {
                    return Err(SylvesterError::PreconditionViolated(format!(
                        "mode requires b = {b} to be a unit"
                    )));
                }
            }
            LRMode::Generic => {}
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    Brute,
}

/// Evaluates `a*x - x*b`.
pub fn apply_lr(r: &Ring, a: Elem, b: Elem, x: Elem) -> Elem {
    r.sub(r.mul(a, x), r.mul(x, b))
}

/// Whether `x -> a*x - x*b` is injective (equivalently bijective).
pub fn is_lr_bijective(r: &Ring, a: Elem, b: Elem) -> bool {
    let mut seen = vec![false; r.card() as usize];
    for x in r.elements() {
        let y = apply_lr(r, a, b, x);
        if seen[y.0 as usize] {
            return false;
        }
        seen[y.0 as usize] = true;
    }
    true
}

/// Smallest `n >= 1` with `x^n = 0`, or `None` when no power vanishes.
pub fn nilpotency_index(r: &Ring, x: Elem) -> Option<u32> {
    let mut seen = std::collections::HashSet::new();
    let mut pow = x;
    let mut n = 1u32;
    loop {
        if pow == r.zero() {
            return Some(n);
        }
        if !seen.insert(pow) {
            return None; // powers entered a cycle that avoids zero
        }
        pow = r.mul(pow, x);
        n += 1;
    }
}

/// Series solution with `a` a unit and `b` nilpotent:
/// `x = a^-1 v + a^-2 v b + ... + a^-n v b^(n-1)` where `b^n = 0`.
pub fn solve_series_unit_nilpotent(
    r: &Ring,
    a: Elem,
    b: Elem,
    v: Elem,
) -> Result<Elem, SylvesterError> {
    let n = nilpotency_index(r, b).ok_or_else(|| {
        SylvesterError::PreconditionViolated(format!("{b} is not nilpotent"))
    })?;
    let a_inv = analysis::inverse(r, a)?;
    let mut x = r.zero();
    let mut left = a_inv;
    let mut right = r.one();
    for k in 0..n {
        x = r.add(x, r.mul(left, r.mul(v, right)));
        if k + 1 < n {
            left = r.mul(left, a_inv);
            right = r.mul(right, b);
        }
    }
    Ok(x)
}

/// Mirrored series with `a` nilpotent and `b` a unit:
/// `x = -(v b^-1 + a v b^-2 + ... + a^(m-1) v b^-m)` where `a^m = 0`.
pub fn solve_series_nilpotent_unit(
    r: &Ring,
    a: Elem,
    b: Elem,
    v: Elem,
) -> Result<Elem, SylvesterError> {
    let m = nilpotency_index(r, a).ok_or_else(|| {
        SylvesterError::PreconditionViolated(format!("{a} is not nilpotent"))
    })?;
    let b_inv = analysis::inverse(r, b)?;
    let mut x = r.zero();
    let mut left = r.one();
    let mut right = b_inv;
    for k in 0..m {
        x = r.add(x, r.mul(left, r.mul(v, right)));
        if k + 1 < m {
            left = r.mul(left, a);
            right = r.mul(right, b_inv);
        }
    }
    Ok(r.neg(x))
}

/// Series solution with `a` a unit and some power `b^n` central: apply the
/// length-`n` series, then correct by the inverse of `1 - a^-n b^n`.
pub fn solve_series_central_power(
    r: &Ring,
    a: Elem,
    b: Elem,
    v: Elem,
) -> Result<Elem, SylvesterError> {
    let a_inv = analysis::inverse(r, a)?;
    let mut b_pow = b;
    let mut a_inv_pow = a_inv;
    let mut n = 1u32;
    let mut seen = std::collections::HashSet::new();
    loop {
        if analysis::is_central(r, b_pow) {
            let c = r.sub(r.one(), r.mul(a_inv_pow, b_pow));
            if analysis::is_unit(r, c) {
                break;
            }
        }
        if !seen.insert((b_pow, a_inv_pow)) {
            return Err(SylvesterError::PreconditionViolated(format!(
                "no power of {b} is central with 1 - a^-n b^n a unit"
            )));
        }
        b_pow = r.mul(b_pow, b);
        a_inv_pow = r.mul(a_inv_pow, a_inv);
        n += 1;
    }
    let c = r.sub(r.one(), r.mul(a_inv_pow, b_pow));
    let c_inv = analysis::inverse(r, c)?;
    let mut phi = r.zero();
    let mut left = a_inv;
    let mut right = r.one();
    for k in 0..n {
        phi = r.add(phi, r.mul(left, r.mul(v, right)));
        if k + 1 < n {
            left = r.mul(left, a_inv);
            right = r.mul(right, b);
        }
    }
    Ok(r.mul(c_inv, phi))
}

/// Solves `a*x - x*b = v`. The answer is verified by substitution before it
/// is returned, whichever method produced it.
pub fn solve_lr(problem: &LRProblem, method: Method) -> Result<Elem, SylvesterError> {
    let r = &problem.ring;
    let (a, b, v) = (problem.a, problem.b, problem.v);
    let x = match method {
        Method::Brute => {
            let mut hits = Vec::new();
            for x in r.elements() {
                if apply_lr(r, a, b, x) == v {
                    hits.push(x);
                    if hits.len() > 1 {
                        break;
                    }
                }
            }
            match hits.len() {
                1 => hits[0],
                _ => return Err(SylvesterError::NotBijective),
            }
        }
        Method::Series => {
            problem.check_mode()?;
            match problem.mode {
                LRMode::Generic => {
                    return Err(SylvesterError::PreconditionViolated(
                        "series method requires a unit/radical mode".to_string(),
                    ))
                }
                LRMode::AUnitBRadical => {
                    if nilpotency_index(r, b).is_some() {
                        solve_series_unit_nilpotent(r, a, b, v)?
                    } else {
                        solve_series_central_power(r, a, b, v)?
                    }
                }
                LRMode::ARadicalBUnit => solve_series_nilpotent_unit(r, a, b, v)?,
            }
        }
    };
    if apply_lr(r, a, b, x) != v {
        return Err(SylvesterError::ResidualMismatch);
    }
    Ok(x)
}
