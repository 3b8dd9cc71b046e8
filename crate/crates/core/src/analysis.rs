//! Structural sets (units, idempotents, Jacobson radical, commutants) and
//! the ring-class predicates, decided exhaustively.
//!
//! Every predicate scans elements in ascending index order and reports the
//! first witness it finds, so results are deterministic. Expensive scans are
//! guarded by [`ANALYSIS_CAP`]; the underlying sets are cached per ring
//! instance and shared by later queries.

use std::fmt;

use thiserror::Error;

use crate::ring::{Elem, Ring};

/// Exhaustive analysis is declined above this cardinality.
pub const ANALYSIS_CAP: u64 = 1 << 16;

/// Budget for the `|J| * |U| * |R|` bleachedness scan.
const BLEACH_BUDGET: u64 = 1 << 27;

/// Budget for the `|idempotents| * |R|` centrality scan.
const ABELIAN_BUDGET: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("element {0} is not a unit")]
    NotAUnit(Elem),
    #[error("cardinality {cardinality} exceeds the analysis cap {cap}")]
    CapExceeded { cardinality: u64, cap: u64 },
    #[error("operation requires a triangular matrix ring")]
    NotTriangular,
}

/// Sorted set of elements of one ring.
#[derive(Clone, Debug)]
pub struct ElementSet {
    ring: Ring,
    members: Vec<Elem>,
}

impl ElementSet {
    fn new(ring: Ring, members: Vec<Elem>) -> ElementSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ElementSet { ring, members }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter().copied()
    }
}

pub(crate) struct UnitData {
    pub(crate) mask: Vec<bool>,
    pub(crate) members: Vec<Elem>,
    pub(crate) inverse: Vec<u32>,
}

fn cap_check(r: &Ring) -> Result<(), AnalysisError> {
    if r.card() > ANALYSIS_CAP {
        Err(AnalysisError::CapExceeded {
            cardinality: r.card(),
            cap: ANALYSIS_CAP,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn unit_data(r: &Ring) -> Result<&UnitData, AnalysisError> {
    cap_check(r)?;
    Ok(r.caches().units.get_or_init(|| {
        let card = r.card() as usize;
        let mut mask = vec![false; card];
        let mut members = Vec::new();
        let mut inverse = vec![u32::MAX; card];
        let mut seen = vec![false; card];
        for a in r.elements() {
            seen.iter_mut().for_each(|s| *s = false);
            let mut right_inv = None;
            let mut injective = true;
            for x in r.elements() {
                let y = r.mul(a, x);
                if seen[y.0 as usize] {
                    injective = false;
                    break;
                }
                seen[y.0 as usize] = true;
                if y == r.one() {
                    right_inv = Some(x);
                }
            }
            if injective {
                let inv = right_inv.expect("finite injective map is surjective");
                // in a finite ring a one-sided inverse is two-sided
                assert_eq!(r.mul(inv, a), r.one());
                mask[a.0 as usize] = true;
                inverse[a.0 as usize] = inv.0 as u32;
                members.push(a);
            }
        }
        UnitData {
            mask,
            members,
            inverse,
        }
    }))
}

/// The group of units, decided by bijectivity of left multiplication.
pub fn units(r: &Ring) -> Result<ElementSet, AnalysisError> {
    let data = unit_data(r)?;
    Ok(ElementSet::new(r.clone(), data.members.clone()))
}

/// Whether `a` is invertible. Uses the cached unit table when present,
/// otherwise runs a single left-multiplication scan.
pub fn is_unit(r: &Ring, a: Elem) -> bool {
    if let Some(data) = r.caches().units.get() {
        return data.mask[a.0 as usize];
    }
    let card = r.card() as usize;
    let mut seen = vec![false; card];
    for x in r.elements() {
        let y = r.mul(a, x);
        if seen[y.0 as usize] {
            return false;
        }
        seen[y.0 as usize] = true;
    }
    true
}

/// Two-sided inverse of `a`, verified on both sides.
pub fn inverse(r: &Ring, a: Elem) -> Result<Elem, AnalysisError> {
    if let Some(data) = r.caches().units.get() {
        let v = data.inverse[a.0 as usize];
        return if v == u32::MAX {
            Err(AnalysisError::NotAUnit(a))
        } else {
            Ok(Elem(v as u64))
        };
    }
    for x in r.elements() {
        if r.mul(a, x) == r.one() && r.mul(x, a) == r.one() {
            return Ok(x);
        }
    }
    Err(AnalysisError::NotAUnit(a))
}

pub(crate) fn idempotent_slice(r: &Ring) -> &[Elem] {
    r.caches().idempotents.get_or_init(|| {
        r.elements().filter(|&e| r.mul(e, e) == e).collect()
    })
}

/// All elements with `e^2 = e`, ascending.
pub fn idempotents(r: &Ring) -> ElementSet {
    ElementSet::new(r.clone(), idempotent_slice(r).to_vec())
}

fn jacobson_slice(r: &Ring) -> Result<&[Elem], AnalysisError> {
    cap_check(r)?;
    let mask = unit_data(r)?;
    Ok(r.caches().jacobson.get_or_init(|| {
        let mut members = Vec::new();
        for a in r.elements() {
            let mut inside = true;
            for x in r.elements() {
                let t = r.sub(r.one(), r.mul(x, a));
                if !mask.mask[t.0 as usize] {
                    inside = false;
                    break;
                }
            }
            if inside {
                members.push(a);
            }
        }
        members
    }))
}

/// The Jacobson radical: all `a` with `1 - x*a` a unit for every `x`.
pub fn jacobson_radical(r: &Ring) -> Result<ElementSet, AnalysisError> {
    Ok(ElementSet::new(r.clone(), jacobson_slice(r)?.to_vec()))
}

/// Radical of a triangular matrix ring computed from its shape: diagonal
/// entries in the radical of the base ring, arbitrary entries above.
pub fn jacobson_radical_structural(r: &Ring) -> Result<ElementSet, AnalysisError> {
    let (n, base) = r.triangular_parts().ok_or(AnalysisError::NotTriangular)?;
    let base = base.clone();
    let base_j: Vec<Elem> = jacobson_slice(&base)?.to_vec();
    let all: Vec<Elem> = base.elements().collect();
    let span = n * (n + 1) / 2;
    let mut allowed: Vec<&[Elem]> = Vec::with_capacity(span);
    for i in 0..n {
        for j in i..n {
            allowed.push(if i == j { &base_j } else { &all });
        }
    }
    // odometer over the allowed digit sets, most significant digit first;
    // digit sets are sorted so indices come out ascending
    let mut members = Vec::new();
    let mut pick = vec![0usize; span];
    loop {
        let mut idx = 0u64;
        for (k, &p) in pick.iter().enumerate() {
            idx = idx * base.card() + allowed[k][p].0;
        }
        members.push(Elem(idx));
        let mut k = span;
        loop {
            if k == 0 {
                return Ok(ElementSet::new(r.clone(), members));
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < allowed[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// Membership in the Jacobson radical without materializing the whole set
/// when a structural shortcut applies.
pub fn in_jacobson(r: &Ring, a: Elem) -> bool {
    if let Some(j) = r.caches().jacobson.get() {
        return j.binary_search(&a).is_ok();
    }
    if let Some((n, base)) = r.triangular_parts() {
        let base = base.clone();
        let m = r.unpack_tri(a).expect("valid index");
        return (0..n).all(|i| in_jacobson(&base, m.get(i, i)));
    }
    if r.card() <= ANALYSIS_CAP {
        return jacobson_slice(r)
            .expect("cap checked")
            .binary_search(&a)
            .is_ok();
    }
    r.elements()
        .all(|x| is_unit(r, r.sub(r.one(), r.mul(x, a))))
}

/// All elements commuting with `a`.
pub fn commutant(r: &Ring, a: Elem) -> ElementSet {
    let members = r
        .elements()
        .filter(|&x| r.mul(x, a) == r.mul(a, x))
        .collect();
    ElementSet::new(r.clone(), members)
}

/// All elements commuting with everything that commutes with `a`.
pub fn double_commutant(r: &Ring, a: Elem) -> Result<ElementSet, AnalysisError> {
    cap_check(r)?;
    let comm = commutant(r, a);
    let members = comm
        .iter()
        .filter(|&x| comm.iter().all(|y| r.mul(x, y) == r.mul(y, x)))
        .collect();
    Ok(ElementSet::new(r.clone(), members))
}

pub fn is_central(r: &Ring, a: Elem) -> bool {
    r.elements().all(|x| r.mul(x, a) == r.mul(a, x))
}

/// Which of the two operator maps failed to be injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BleachDirection {
    /// `x -> a*x - x*b` with `a` in the radical and `b` a unit.
    RadicalLeft,
    /// `x -> b*x - x*a` with `b` a unit and `a` in the radical.
    UnitLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BleachOutcome {
    Bleached,
    Counterexample {
        radical: Elem,
        unit: Elem,
        direction: BleachDirection,
        collision: (Elem, Elem),
    },
}

impl BleachOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, BleachOutcome::Bleached)
    }
}

/// Checks that `x -> a*x - x*b` and `x -> b*x - x*a` are bijections for
/// every `a` in the radical and unit `b`; returns the first failing pair.
pub fn is_uniquely_bleached(r: &Ring) -> Result<BleachOutcome, AnalysisError> {
    let units = unit_data(r)?;
    let jac: Vec<Elem> = jacobson_slice(r)?.to_vec();
    let cost = (jac.len() as u64)
        .saturating_mul(units.members.len() as u64)
        .saturating_mul(r.card());
    if cost > BLEACH_BUDGET {
        return Err(AnalysisError::CapExceeded {
            cardinality: r.card(),
            cap: ANALYSIS_CAP,
        });
    }
    let card = r.card() as usize;
    let mut first_preimage = vec![u32::MAX; card];
    for &a in &jac {
        for &b in &units.members {
            for (direction, l, rr) in [
                (BleachDirection::RadicalLeft, a, b),
                (BleachDirection::UnitLeft, b, a),
            ] {
                first_preimage.iter_mut().for_each(|s| *s = u32::MAX);
                for x in r.elements() {
                    let y = r.sub(r.mul(l, x), r.mul(x, rr));
                    let slot = &mut first_preimage[y.0 as usize];
                    if *slot != u32::MAX {
                        return Ok(BleachOutcome::Counterexample {
                            radical: a,
                            unit: b,
                            direction,
                            collision: (Elem(*slot as u64), x),
                        });
                    }
                    *slot = x.0 as u32;
                }
            }
        }
    }
    Ok(BleachOutcome::Bleached)
}

/// Counterexample data attached to a failed predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No clean-type expression exists for this element.
    MissingExpression { element: Elem },
    /// Two distinct expressions for one element; pairs are `(e, u)`.
    ExtraExpression {
        element: Elem,
        first: (Elem, Elem),
        second: (Elem, Elem),
    },
    /// An idempotent and an element it fails to commute with.
    NonCentralIdempotent { idempotent: Elem, other: Elem },
    NotIdempotent { element: Elem },
    /// Neither `a` nor `1 - a` is a unit.
    NotLocal { element: Elem },
    BleachFailure {
        radical: Elem,
        unit: Elem,
        direction: BleachDirection,
        collision: (Elem, Elem),
    },
    /// `|R / J(R)|` when it differs from 2.
    ResidueCardinality { cardinality: u64 },
}

/// Outcome of one predicate. `Declined` means the scan was refused because
/// the ring is too large for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    Declined,
}

impl Verdict {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails(_) => Some(false),
            Verdict::Declined => None,
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    fn from_opt(witness: Option<Witness>) -> Verdict {
        match witness {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "true"),
            Verdict::Fails(_) => write!(f, "false"),
            Verdict::Declined => write!(f, "declined"),
        }
    }
}

/// The four clean-type predicates, decided in one pass.
#[derive(Clone, Debug)]
pub struct CleanFamily {
    pub clean: Verdict,
    pub uniquely_clean: Verdict,
    pub strongly_clean: Verdict,
    pub uniquely_strongly_clean: Verdict,
}

/// One scan over all elements and idempotents decides clean, uniquely clean,
/// strongly clean, and uniquely strongly clean together. For each element the
/// idempotents `e` with `a - e` a unit are counted, with and without the
/// requirement `e*a = a*e`.
pub fn clean_family(r: &Ring) -> Result<CleanFamily, AnalysisError> {
    let units = unit_data(r)?;
    let idem = idempotent_slice(r);
    let mut not_clean: Option<Witness> = None;
    let mut not_uc: Option<Witness> = None;
    let mut not_sc: Option<Witness> = None;
    let mut not_usc: Option<Witness> = None;
    for a in r.elements() {
        let mut pairs: Vec<(Elem, Elem)> = Vec::new();
        let mut commuting: Vec<(Elem, Elem)> = Vec::new();
        for &e in idem {
            let u = r.sub(a, e);
            if !units.mask[u.0 as usize] {
                continue;
            }
            if pairs.len() < 2 {
                pairs.push((e, u));
            }
            if commuting.len() < 2 && r.mul(e, a) == r.mul(a, e) {
                commuting.push((e, u));
            }
            if pairs.len() >= 2 && commuting.len() >= 2 {
                break;
            }
        }
        if pairs.is_empty() && not_clean.is_none() {
            not_clean = Some(Witness::MissingExpression { element: a });
        }
        if not_uc.is_none() {
            match pairs.len() {
                0 => not_uc = Some(Witness::MissingExpression { element: a }),
                1 => {}
                _ => {
                    not_uc = Some(Witness::ExtraExpression {
                        element: a,
                        first: pairs[0],
                        second: pairs[1],
                    })
                }
            }
        }
        if commuting.is_empty() && not_sc.is_none() {
            not_sc = Some(Witness::MissingExpression { element: a });
        }
        if not_usc.is_none() {
            match commuting.len() {
                0 => not_usc = Some(Witness::MissingExpression { element: a }),
                1 => {}
                _ => {
                    not_usc = Some(Witness::ExtraExpression {
                        element: a,
                        first: commuting[0],
                        second: commuting[1],
                    })
                }
            }
        }
        if not_clean.is_some() && not_uc.is_some() && not_sc.is_some() && not_usc.is_some() {
            break;
        }
    }
    Ok(CleanFamily {
        clean: Verdict::from_opt(not_clean),
        uniquely_clean: Verdict::from_opt(not_uc),
        strongly_clean: Verdict::from_opt(not_sc),
        uniquely_strongly_clean: Verdict::from_opt(not_usc),
    })
}

/// Every idempotent commutes with every element.
pub fn check_abelian(r: &Ring) -> Verdict {
    let idem = idempotent_slice(r);
    if (idem.len() as u64).saturating_mul(r.card()) > ABELIAN_BUDGET {
        return Verdict::Declined;
    }
    for &e in idem {
        for x in r.elements() {
            if r.mul(e, x) != r.mul(x, e) {
                return Verdict::Fails(Witness::NonCentralIdempotent {
                    idempotent: e,
                    other: x,
                });
            }
        }
    }
    Verdict::Holds
}

/// Every element squares to itself.
pub fn check_boolean(r: &Ring) -> Verdict {
    for a in r.elements() {
        if r.mul(a, a) != a {
            return Verdict::Fails(Witness::NotIdempotent { element: a });
        }
    }
    Verdict::Holds
}

/// For every `a`, `a` or `1 - a` is a unit.
pub fn check_local(r: &Ring) -> Verdict {
    let units = match unit_data(r) {
        Ok(u) => u,
        Err(_) => return Verdict::Declined,
    };
    for a in r.elements() {
        let other = r.sub(r.one(), a);
        if !units.mask[a.0 as usize] && !units.mask[other.0 as usize] {
            return Verdict::Fails(Witness::NotLocal { element: a });
        }
    }
    Verdict::Holds
}

/// `|R / J(R)| = 2`. Any unital ring with two elements is the field with
/// two elements, so no isomorphism search is needed.
pub fn check_residue_z2(r: &Ring) -> Verdict {
    let jac = match jacobson_slice(r) {
        Ok(j) => j,
        Err(_) => return Verdict::Declined,
    };
    let residue = r.card() / jac.len() as u64;
    if residue == 2 {
        Verdict::Holds
    } else {
        Verdict::Fails(Witness::ResidueCardinality {
            cardinality: residue,
        })
    }
}

pub fn check_bleached(r: &Ring) -> Verdict {
    match is_uniquely_bleached(r) {
        Ok(BleachOutcome::Bleached) => Verdict::Holds,
        Ok(BleachOutcome::Counterexample {
            radical,
            unit,
            direction,
            collision,
        }) => Verdict::Fails(Witness::BleachFailure {
            radical,
            unit,
            direction,
            collision,
        }),
        Err(_) => Verdict::Declined,
    }
}

/// Full predicate report for one ring.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub ring_text: String,
    pub cardinality: u64,
    pub clean: Verdict,
    pub uniquely_clean: Verdict,
    pub strongly_clean: Verdict,
    pub uniquely_strongly_clean: Verdict,
    pub abelian: Verdict,
    pub boolean: Verdict,
    pub local: Verdict,
    pub uniquely_bleached: Verdict,
    pub residue_is_z2: Verdict,
}

impl PropertyReport {
    /// `(name, verdict)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, &Verdict); 9] {
        [
            ("clean", &self.clean),
            ("uniquely_clean", &self.uniquely_clean),
            ("strongly_clean", &self.strongly_clean),
            ("uniquely_strongly_clean", &self.uniquely_strongly_clean),
            ("abelian", &self.abelian),
            ("boolean", &self.boolean),
            ("local", &self.local),
            ("uniquely_bleached", &self.uniquely_bleached),
            ("residue_is_Z2", &self.residue_is_z2),
        ]
    }
}

/// Decides every predicate for `r`. Scans that would exceed their budget are
/// reported as [`Verdict::Declined`] rather than blocking the rest.
pub fn classify(r: &Ring) -> PropertyReport {
    let family = match clean_family(r) {
        Ok(f) => f,
        Err(_) => CleanFamily {
            clean: Verdict::Declined,
            uniquely_clean: Verdict::Declined,
            strongly_clean: Verdict::Declined,
            uniquely_strongly_clean: Verdict::Declined,
        },
    };
    PropertyReport {
        ring_text: r.expr().to_string(),
        cardinality: r.card(),
        clean: family.clean,
        uniquely_clean: family.uniquely_clean,
        strongly_clean: family.strongly_clean,
        uniquely_strongly_clean: family.uniquely_strongly_clean,
        abelian: check_abelian(r),
        boolean: check_boolean(r),
        local: check_local(r),
        uniquely_bleached: check_bleached(r),
        residue_is_z2: check_residue_z2(r),
    }
}
