//! Compositional construction of finite rings with exact arithmetic on
//! canonically indexed elements.
//!
//! A ring is described by a [`RingExpr`] and realized as a [`Ring`]. Elements
//! are the indices `0..cardinality`, encoded per constructor:
//!
//! * `Zn`: the residue itself;
//! * `Product`: `index(left) * |right| + index(right)`;
//! * `Triangular`: row-major upper-triangle entries as digits in base
//!   `|base|`, with the `(1,1)` entry most significant;
//! * `PolyQuotient`: coefficient digits in base `p`, constant term least
//!   significant;
//! * `Quotient`: rank of the minimal coset representative in base-ring
//!   index order.
//!
//! Arithmetic is computed structurally from the constructor tree; rings of
//! cardinality at most 256 cache full operation tables, which is invisible
//! to callers.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::analysis::UnitData;

/// Default cardinality cap for ring construction.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Rings at or below this cardinality cache full operation tables.
const TABLE_LIMIT: u64 = 256;

/// Canonical index of a ring element, valid for exactly one ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(pub u64);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Constructor expression for a finite ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    /// Integers modulo `n`, `n >= 2`.
    Zn(u64),
    /// `F_p[x]/(f)` with `p` prime and `f` monic of degree >= 1, given by
    /// coefficients from the constant term upward.
    PolyQuotient { p: u64, modulus: Vec<u64> },
    /// Direct product of two rings.
    Product(Box<RingExpr>, Box<RingExpr>),
    /// `n x n` upper-triangular matrices over the base ring, `n >= 1`.
    Triangular { n: usize, base: Box<RingExpr> },
    /// Quotient of the base ring by the two-sided ideal generated by the
    /// listed element indices.
    Quotient { base: Box<RingExpr>, generators: Vec<u64> },
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zn(n) => write!(f, "Z{n}"),
            RingExpr::PolyQuotient { p, modulus } => {
                write!(f, "F{p}[x]/({})", poly_text(modulus))
            }
            RingExpr::Product(l, r) => {
                write!(f, "{l} x ")?;
                if matches!(**r, RingExpr::Product(_, _)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            RingExpr::Triangular { n, base } => write!(f, "T{n}({base})"),
            RingExpr::Quotient { base, generators } => {
                if matches!(**base, RingExpr::Product(_, _)) {
                    write!(f, "({base})/(")?;
                } else {
                    write!(f, "{base}/(")?;
                }
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Renders polynomial coefficients (constant term first) as `x^2+3x+2`.
pub fn poly_text(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, _) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, _) => format!("{c}x"),
            (_, 1) => format!("x^{k}"),
            (_, _) => format!("{c}x^{k}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus {0} is not allowed; Zn requires n >= 2")]
    InvalidModulus(u64),
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("polynomial modulus must be monic of degree >= 1")]
    NonMonicModulus,
    #[error("triangular size {0} is not allowed; need n >= 1")]
    InvalidDimension(usize),
    #[error("cardinality exceeds the cap {cap}")]
    CapExceeded { cap: u64 },
    #[error("generator index {index} out of range for base ring of cardinality {cardinality}")]
    InvalidGenerator { index: u64, cardinality: u64 },
    #[error("ideal is the whole ring; quotient would not be unital with 1 != 0")]
    TrivialQuotient,
    #[error("element index {index} out of range for ring of cardinality {cardinality}")]
    IndexOutOfRange { index: u64, cardinality: u64 },
    #[error("matrix has {got} entries, ring expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a triangular matrix ring")]
    NotTriangular,
}

/// Arithmetic operation selector for [`Ring::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Sub,
}

enum Structure {
    Zn {
        modulus: u64,
    },
    Poly {
        p: u64,
        modulus: Vec<u64>,
        degree: usize,
    },
    Product {
        left: Ring,
        right: Ring,
    },
    Triangular {
        n: usize,
        base: Ring,
        span: usize,
    },
    Quotient {
        base: Ring,
        ideal: Vec<Elem>,
        reps: Vec<Elem>,
        canon: Vec<u32>,
    },
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Default)]
pub(crate) struct Caches {
    tables: OnceLock<Option<Tables>>,
    pub(crate) units: OnceLock<UnitData>,
    pub(crate) idempotents: OnceLock<Vec<Elem>>,
    pub(crate) jacobson: OnceLock<Vec<Elem>>,
    commutative: OnceLock<bool>,
}

struct Repr {
    expr: RingExpr,
    card: u64,
    zero: Elem,
    one: Elem,
    structure: Structure,
    caches: Caches,
}

/// A finite unital ring with exact structural arithmetic.
///
/// Cloning is cheap (shared immutable representation). All methods are pure;
/// concurrent use needs no synchronization.
#[derive(Clone)]
pub struct Ring {
    repr: Arc<Repr>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, |R|={})", self.repr.expr, self.repr.card)
    }
}

/// Rings compare equal when they were built from the same expression; the
/// canonical encodings make their arithmetic identical in that case.
impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr) || self.repr.expr == other.repr.expr
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr.expr)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn tri_span(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Offset of entry `(i, j)` (0-based, `i <= j < n`) in the row-major
/// upper-triangle layout. Row `i` starts at `i*(2n - i + 1)/2`.
pub(crate) fn tri_offset(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

impl Ring {
    /// Builds the ring described by `expr` under the default cardinality cap.
    pub fn new(expr: RingExpr) -> Result<Ring, RingError> {
        Ring::with_cap(expr, DEFAULT_CAP)
    }

    /// Builds the ring described by `expr`; every ring in the constructor
    /// tree must have cardinality at most `cap`.
    pub fn with_cap(expr: RingExpr, cap: u64) -> Result<Ring, RingError> {
        match expr {
            RingExpr::Zn(m) => {
                if m < 2 {
                    return Err(RingError::InvalidModulus(m));
                }
                if m > cap {
                    return Err(RingError::CapExceeded { cap });
                }
                Ok(Ring::from_parts(
                    RingExpr::Zn(m),
                    m,
                    Elem(0),
                    Elem(1),
                    Structure::Zn { modulus: m },
                ))
            }
            RingExpr::PolyQuotient { p, modulus } => {
                if !is_prime(p) {
                    return Err(RingError::NonPrimeCharacteristic(p));
                }
                let mut f: Vec<u64> = modulus.iter().map(|c| c % p).collect();
                while f.last() == Some(&0) {
                    f.pop();
                }
                if f.len() < 2 || *f.last().unwrap() != 1 {
                    return Err(RingError::NonMonicModulus);
                }
                let degree = f.len() - 1;
                let card = u32::try_from(degree)
                    .ok()
                    .and_then(|d| p.checked_pow(d))
                    .filter(|&c| c <= cap)
                    .ok_or(RingError::CapExceeded { cap })?;
                Ok(Ring::from_parts(
                    RingExpr::PolyQuotient {
                        p,
                        modulus: f.clone(),
                    },
                    card,
                    Elem(0),
                    Elem(1),
                    Structure::Poly {
                        p,
                        modulus: f,
                        degree,
                    },
                ))
            }
            RingExpr::Product(l, r) => {
                let left = Ring::with_cap(*l, cap)?;
                let right = Ring::with_cap(*r, cap)?;
                let card = left
                    .card()
                    .checked_mul(right.card())
                    .filter(|&c| c <= cap)
                    .ok_or(RingError::CapExceeded { cap })?;
                let one = Elem(left.one().0 * right.card() + right.one().0);
                Ok(Ring::from_parts(
                    RingExpr::Product(
                        Box::new(left.expr().clone()),
                        Box::new(right.expr().clone()),
                    ),
                    card,
                    Elem(0),
                    one,
                    Structure::Product { left, right },
                ))
            }
            RingExpr::Triangular { n, base } => {
                if n < 1 {
                    return Err(RingError::InvalidDimension(n));
                }
                let base = Ring::with_cap(*base, cap)?;
                let span = tri_span(n);
                let card = u32::try_from(span)
                    .ok()
                    .and_then(|s| base.card().checked_pow(s))
                    .filter(|&c| c <= cap)
                    .ok_or(RingError::CapExceeded { cap })?;
                let mut digits = vec![base.zero(); span];
                for i in 0..n {
                    digits[tri_offset(n, i, i)] = base.one();
                }
                let one = tri_encode_digits(base.card(), &digits);
                Ok(Ring::from_parts(
                    RingExpr::Triangular {
                        n,
                        base: Box::new(base.expr().clone()),
                    },
                    card,
                    Elem(0),
                    one,
                    Structure::Triangular { n, base, span },
                ))
            }
            RingExpr::Quotient { base, generators } => {
                let base = Ring::with_cap(*base, cap)?;
                let mut gens = Vec::with_capacity(generators.len());
                for &g in &generators {
                    if g >= base.card() {
                        return Err(RingError::InvalidGenerator {
                            index: g,
                            cardinality: base.card(),
                        });
                    }
                    gens.push(Elem(g));
                }
                let ideal = saturate_ideal(&base, &gens);
                if ideal.len() as u64 == base.card() {
                    return Err(RingError::TrivialQuotient);
                }
                let (reps, canon) = coset_data(&base, &ideal);
                let card = reps.len() as u64;
                let zero = Elem(canon[base.zero().0 as usize] as u64);
                let one = Elem(canon[base.one().0 as usize] as u64);
                debug_assert_ne!(zero, one);
                Ok(Ring::from_parts(
                    RingExpr::Quotient {
                        base: Box::new(base.expr().clone()),
                        generators,
                    },
                    card,
                    zero,
                    one,
                    Structure::Quotient {
                        base,
                        ideal,
                        reps,
                        canon,
                    },
                ))
            }
        }
    }

    fn from_parts(expr: RingExpr, card: u64, zero: Elem, one: Elem, structure: Structure) -> Ring {
        Ring {
            repr: Arc::new(Repr {
                expr,
                card,
                zero,
                one,
                structure,
                caches: Caches::default(),
            }),
        }
    }

    pub fn expr(&self) -> &RingExpr {
        &self.repr.expr
    }

    pub fn card(&self) -> u64 {
        self.repr.card
    }

    pub fn zero(&self) -> Elem {
        self.repr.zero
    }

    pub fn one(&self) -> Elem {
        self.repr.one
    }

    pub fn is_valid(&self, a: Elem) -> bool {
        a.0 < self.repr.card
    }

    /// Yields every element exactly once, in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.repr.card).map(Elem)
    }

    pub(crate) fn caches(&self) -> &Caches {
        &self.repr.caches
    }

    /// Two rings are the same instance if they share a representation.
    pub fn same_instance(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr)
    }

    fn tables(&self) -> Option<&Tables> {
        self.repr
            .caches
            .tables
            .get_or_init(|| {
                if self.repr.card > TABLE_LIMIT {
                    return None;
                }
                let n = self.repr.card as usize;
                let mut add = vec![0u32; n * n];
                let mut mul = vec![0u32; n * n];
                let mut neg = vec![0u32; n];
                for a in 0..n {
                    neg[a] = self.neg_raw(Elem(a as u64)).0 as u32;
                    for b in 0..n {
                        add[a * n + b] = self.add_raw(Elem(a as u64), Elem(b as u64)).0 as u32;
                        mul[a * n + b] = self.mul_raw(Elem(a as u64), Elem(b as u64)).0 as u32;
                    }
                }
                Some(Tables { add, mul, neg })
            })
            .as_ref()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.is_valid(a) && self.is_valid(b));
        if let Some(t) = self.tables() {
            let n = self.repr.card as usize;
            return Elem(t.add[a.0 as usize * n + b.0 as usize] as u64);
        }
        self.add_raw(a, b)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.is_valid(a) && self.is_valid(b));
        if let Some(t) = self.tables() {
            let n = self.repr.card as usize;
            return Elem(t.mul[a.0 as usize * n + b.0 as usize] as u64);
        }
        self.mul_raw(a, b)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        debug_assert!(self.is_valid(a));
        if let Some(t) = self.tables() {
            return Elem(t.neg[a.0 as usize] as u64);
        }
        self.neg_raw(a)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Checked arithmetic dispatch; `b` is ignored for `Neg`.
    pub fn arith(&self, op: ArithOp, a: Elem, b: Elem) -> Result<Elem, RingError> {
        let check = |e: Elem| {
            if self.is_valid(e) {
                Ok(e)
            } else {
                Err(RingError::IndexOutOfRange {
                    index: e.0,
                    cardinality: self.repr.card,
                })
            }
        };
        check(a)?;
        if !matches!(op, ArithOp::Neg) {
            check(b)?;
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => self.neg(a),
            ArithOp::Sub => self.sub(a, b),
        })
    }

    /// The image of the integer `k` under the unique map from `Z`.
    pub fn from_int(&self, k: i64) -> Elem {
        if k < 0 {
            return self.neg(self.from_int(-k));
        }
        let mut acc = self.zero();
        let mut base = self.one();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a` raised to the `k`-th power; `pow(a, 0)` is `1`.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        *self.repr.caches.commutative.get_or_init(|| {
            match &self.repr.structure {
                Structure::Zn { .. } | Structure::Poly { .. } => true,
                Structure::Product { left, right } => {
                    left.is_commutative() && right.is_commutative()
                }
                Structure::Triangular { n, base, .. } => *n == 1 && base.is_commutative(),
                Structure::Quotient { base, reps, .. } => {
                    if base.is_commutative() {
                        return true;
                    }
                    // scan coset representatives pairwise
                    for (i, &a) in reps.iter().enumerate() {
                        for &b in &reps[i + 1..] {
                            if self.canon_of(base.mul(a, b)) != self.canon_of(base.mul(b, a)) {
                                return false;
                            }
                        }
                    }
                    true
                }
            }
        })
    }

    fn canon_of(&self, base_elem: Elem) -> Elem {
        match &self.repr.structure {
            Structure::Quotient { canon, .. } => Elem(canon[base_elem.0 as usize] as u64),
            _ => unreachable!(),
        }
    }

    /// For a triangular matrix ring, its size and base ring.
    pub fn triangular_parts(&self) -> Option<(usize, &Ring)> {
        match &self.repr.structure {
            Structure::Triangular { n, base, .. } => Some((*n, base)),
            _ => None,
        }
    }

    pub fn product_parts(&self) -> Option<(&Ring, &Ring)> {
        match &self.repr.structure {
            Structure::Product { left, right } => Some((left, right)),
            _ => None,
        }
    }

    /// For a polynomial quotient ring, the characteristic and the modulus
    /// coefficients (constant term first).
    pub fn poly_parts(&self) -> Option<(u64, &[u64])> {
        match &self.repr.structure {
            Structure::Poly { p, modulus, .. } => Some((*p, modulus)),
            _ => None,
        }
    }

    pub fn zn_modulus(&self) -> Option<u64> {
        match &self.repr.structure {
            Structure::Zn { modulus } => Some(*modulus),
            _ => None,
        }
    }

    /// For a quotient ring, the base ring and the sorted ideal elements.
    pub fn quotient_parts(&self) -> Option<(&Ring, &[Elem])> {
        match &self.repr.structure {
            Structure::Quotient { base, ideal, .. } => Some((base, ideal)),
            _ => None,
        }
    }

    /// Minimal base-ring representative of a quotient element.
    pub fn quotient_rep(&self, a: Elem) -> Option<Elem> {
        match &self.repr.structure {
            Structure::Quotient { reps, .. } => reps.get(a.0 as usize).copied(),
            _ => None,
        }
    }

    /// Coefficients (constant term first, length = degree) of a polynomial
    /// quotient element.
    pub fn poly_coeffs(&self, a: Elem) -> Option<Vec<u64>> {
        match &self.repr.structure {
            Structure::Poly { p, degree, .. } => {
                let mut v = a.0;
                let mut out = Vec::with_capacity(*degree);
                for _ in 0..*degree {
                    out.push(v % p);
                    v /= p;
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Element of a polynomial quotient ring from arbitrary coefficients;
    /// reduces modulo `p` and modulo the ring's monic modulus.
    pub fn poly_element_from_coeffs(&self, coeffs: &[u64]) -> Option<Elem> {
        match &self.repr.structure {
            Structure::Poly { p, modulus, degree } => {
                let mut work: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
                if work.len() < *degree {
                    work.resize(*degree, 0);
                }
                for k in (*degree..work.len()).rev() {
                    let c = work[k];
                    if c == 0 {
                        continue;
                    }
                    work[k] = 0;
                    for t in 0..*degree {
                        let sub = (modulus[t] * c) % p;
                        work[k - degree + t] = (work[k - degree + t] + p - sub) % p;
                    }
                }
                work.truncate(*degree);
                let mut idx = 0u64;
                for (k, &c) in work.iter().enumerate() {
                    idx += c * p.pow(k as u32);
                }
                Some(Elem(idx))
            }
            _ => None,
        }
    }

    /// Packs an upper-triangular matrix over the base ring into its canonical
    /// index in this triangular matrix ring.
    pub fn pack_tri(&self, m: &TriMatrix) -> Result<Elem, RingError> {
        let (n, base) = match &self.repr.structure {
            Structure::Triangular { n, base, .. } => (*n, base),
            _ => return Err(RingError::NotTriangular),
        };
        if m.n != n {
            return Err(RingError::DimensionMismatch {
                expected: tri_span(n),
                got: tri_span(m.n),
            });
        }
        for &e in &m.entries {
            if !base.is_valid(e) {
                return Err(RingError::IndexOutOfRange {
                    index: e.0,
                    cardinality: base.card(),
                });
            }
        }
        Ok(tri_encode_digits(base.card(), &m.entries))
    }

    /// Inverse of [`Ring::pack_tri`].
    pub fn unpack_tri(&self, a: Elem) -> Result<TriMatrix, RingError> {
        let (n, base, span) = match &self.repr.structure {
            Structure::Triangular { n, base, span } => (*n, base, *span),
            _ => return Err(RingError::NotTriangular),
        };
        if !self.is_valid(a) {
            return Err(RingError::IndexOutOfRange {
                index: a.0,
                cardinality: self.repr.card,
            });
        }
        Ok(TriMatrix {
            n,
            entries: tri_decode_digits(base.card(), span, a),
        })
    }

    fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr.structure {
            Structure::Zn { modulus } => Elem((a.0 + b.0) % modulus),
            Structure::Poly { p, degree, .. } => {
                let (mut va, mut vb, mut out, mut scale) = (a.0, b.0, 0u64, 1u64);
                for _ in 0..*degree {
                    out += ((va % p + vb % p) % p) * scale;
                    va /= p;
                    vb /= p;
                    scale *= p;
                }
                Elem(out)
            }
            Structure::Product { left, right } => {
                let rc = right.card();
                let l = left.add(Elem(a.0 / rc), Elem(b.0 / rc));
                let r = right.add(Elem(a.0 % rc), Elem(b.0 % rc));
                Elem(l.0 * rc + r.0)
            }
            Structure::Triangular { base, span, .. } => {
                let da = tri_decode_digits(base.card(), *span, a);
                let db = tri_decode_digits(base.card(), *span, b);
                let out: Vec<Elem> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| base.add(x, y))
                    .collect();
                tri_encode_digits(base.card(), &out)
            }
            Structure::Quotient {
                base, reps, canon, ..
            } => {
                let s = base.add(reps[a.0 as usize], reps[b.0 as usize]);
                Elem(canon[s.0 as usize] as u64)
            }
        }
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr.structure {
            Structure::Zn { modulus } => Elem((a.0 * b.0) % modulus),
            Structure::Poly { p, modulus, degree } => {
                let d = *degree;
                let mut ca = Vec::with_capacity(d);
                let mut cb = Vec::with_capacity(d);
                let (mut va, mut vb) = (a.0, b.0);
                for _ in 0..d {
                    ca.push(va % p);
                    cb.push(vb % p);
                    va /= p;
                    vb /= p;
                }
                let mut conv = vec![0u64; 2 * d - 1];
                for (i, &x) in ca.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in cb.iter().enumerate() {
                        conv[i + j] = (conv[i + j] + x * y) % p;
                    }
                }
                for k in (d..2 * d - 1).rev() {
                    let c = conv[k];
                    if c == 0 {
                        continue;
                    }
                    conv[k] = 0;
                    for t in 0..d {
                        let sub = (modulus[t] * c) % p;
                        conv[k - d + t] = (conv[k - d + t] + p - sub) % p;
                    }
                }
                let mut out = 0u64;
                let mut scale = 1u64;
                for &c in conv.iter().take(d) {
                    out += c * scale;
                    scale *= p;
                }
                Elem(out)
            }
            Structure::Product { left, right } => {
                let rc = right.card();
                let l = left.mul(Elem(a.0 / rc), Elem(b.0 / rc));
                let r = right.mul(Elem(a.0 % rc), Elem(b.0 % rc));
                Elem(l.0 * rc + r.0)
            }
            Structure::Triangular { n, base, span } => {
                let da = tri_decode_digits(base.card(), *span, a);
                let db = tri_decode_digits(base.card(), *span, b);
                let mut out = vec![base.zero(); *span];
                tri_mul_entries(base, *n, &da, &db, &mut out);
                tri_encode_digits(base.card(), &out)
            }
            Structure::Quotient {
                base, reps, canon, ..
            } => {
                let s = base.mul(reps[a.0 as usize], reps[b.0 as usize]);
                Elem(canon[s.0 as usize] as u64)
            }
        }
    }

    fn neg_raw(&self, a: Elem) -> Elem {
        match &self.repr.structure {
            Structure::Zn { modulus } => Elem((modulus - a.0) % modulus),
            Structure::Poly { p, degree, .. } => {
                let (mut v, mut out, mut scale) = (a.0, 0u64, 1u64);
                for _ in 0..*degree {
                    out += ((p - v % p) % p) * scale;
                    v /= p;
                    scale *= p;
                }
                Elem(out)
            }
            Structure::Product { left, right } => {
                let rc = right.card();
                let l = left.neg(Elem(a.0 / rc));
                let r = right.neg(Elem(a.0 % rc));
                Elem(l.0 * rc + r.0)
            }
            Structure::Triangular { base, span, .. } => {
                let da = tri_decode_digits(base.card(), *span, a);
                let out: Vec<Elem> = da.iter().map(|&x| base.neg(x)).collect();
                tri_encode_digits(base.card(), &out)
            }
            Structure::Quotient {
                base, reps, canon, ..
            } => {
                let s = base.neg(reps[a.0 as usize]);
                Elem(canon[s.0 as usize] as u64)
            }
        }
    }
}

fn tri_encode_digits(base_card: u64, digits: &[Elem]) -> Elem {
    let mut acc = 0u64;
    for d in digits {
        acc = acc * base_card + d.0;
    }
    Elem(acc)
}

fn tri_decode_digits(base_card: u64, span: usize, a: Elem) -> Vec<Elem> {
    let mut out = vec![Elem(0); span];
    let mut v = a.0;
    for k in (0..span).rev() {
        out[k] = Elem(v % base_card);
        v /= base_card;
    }
    out
}

pub(crate) fn tri_mul_entries(base: &Ring, n: usize, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
    for i in 0..n {
        for j in i..n {
            let mut acc = base.zero();
            for k in i..=j {
                acc = base.add(
                    acc,
                    base.mul(a[tri_offset(n, i, k)], b[tri_offset(n, k, j)]),
                );
            }
            out[tri_offset(n, i, j)] = acc;
        }
    }
}

fn saturate_ideal(base: &Ring, gens: &[Elem]) -> Vec<Elem> {
    let card = base.card() as usize;
    let mut in_set = vec![false; card];
    in_set[base.zero().0 as usize] = true;
    let mut members = vec![base.zero()];
    let mut queue: Vec<Elem> = gens.to_vec();
    while let Some(x) = queue.pop() {
        if in_set[x.0 as usize] {
            continue;
        }
        in_set[x.0 as usize] = true;
        queue.push(base.neg(x));
        for &m in &members {
            queue.push(base.add(x, m));
        }
        for r in base.elements() {
            queue.push(base.mul(r, x));
            queue.push(base.mul(x, r));
        }
        members.push(x);
    }
    members.sort();
    members
}

fn coset_data(base: &Ring, ideal: &[Elem]) -> (Vec<Elem>, Vec<u32>) {
    let card = base.card() as usize;
    let mut canon = vec![u32::MAX; card];
    let mut reps = Vec::new();
    for idx in 0..card {
        if canon[idx] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(Elem(idx as u64));
        for &i in ideal {
            let y = base.add(Elem(idx as u64), i);
            canon[y.0 as usize] = id;
        }
    }
    (reps, canon)
}

/// Upper-triangular matrix over a base ring, stored as the row-major list of
/// upper-triangle entries `(a_11, a_12, ..., a_1n, a_22, ..., a_nn)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriMatrix {
    n: usize,
    entries: Vec<Elem>,
}

impl TriMatrix {
    pub fn new(n: usize, entries: Vec<Elem>) -> Result<TriMatrix, RingError> {
        if entries.len() != tri_span(n) {
            return Err(RingError::DimensionMismatch {
                expected: tri_span(n),
                got: entries.len(),
            });
        }
        Ok(TriMatrix { n, entries })
    }

    pub fn zero(n: usize, base: &Ring) -> TriMatrix {
        TriMatrix {
            n,
            entries: vec![base.zero(); tri_span(n)],
        }
    }

    pub fn identity(n: usize, base: &Ring) -> TriMatrix {
        TriMatrix::scalar(n, base, base.one())
    }

    /// Diagonal matrix `c·I`.
    pub fn scalar(n: usize, base: &Ring, c: Elem) -> TriMatrix {
        let mut m = TriMatrix::zero(n, base);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[tri_offset(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.entries[tri_offset(self.n, i, j)] = e;
    }

    pub fn add(&self, other: &TriMatrix, base: &Ring) -> TriMatrix {
        assert_eq!(self.n, other.n);
        TriMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| base.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TriMatrix, base: &Ring) -> TriMatrix {
        assert_eq!(self.n, other.n);
        TriMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| base.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, base: &Ring) -> TriMatrix {
        TriMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&a| base.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &TriMatrix, base: &Ring) -> TriMatrix {
        assert_eq!(self.n, other.n);
        let mut out = vec![base.zero(); self.entries.len()];
        tri_mul_entries(base, self.n, &self.entries, &other.entries, &mut out);
        TriMatrix {
            n: self.n,
            entries: out,
        }
    }
}
