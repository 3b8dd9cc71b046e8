//! Shared ring battery for the integration suites. Rings are built once and
//! shared so cached structural sets (units, idempotents, radical) are reused
//! across tests.
#![allow(dead_code)] // each test binary uses a different subset

use std::sync::OnceLock;

use ringlab_core::ring::{Ring, RingExpr};

pub fn zn_expr(n: u64) -> RingExpr {
    RingExpr::Zn(n)
}

pub fn tri_expr(n: usize, base: RingExpr) -> RingExpr {
    RingExpr::Triangular {
        n,
        base: Box::new(base),
    }
}

pub fn prod_expr(l: RingExpr, r: RingExpr) -> RingExpr {
    RingExpr::Product(Box::new(l), Box::new(r))
}

/// `F2[x]/(x^2)` — local with nonzero radical, not a field.
pub fn f2x2_expr() -> RingExpr {
    RingExpr::PolyQuotient {
        p: 2,
        modulus: vec![0, 0, 1],
    }
}

/// `F2[x]/(x^2+x+1)` — the field with four elements.
pub fn gf4_expr() -> RingExpr {
    RingExpr::PolyQuotient {
        p: 2,
        modulus: vec![1, 1, 1],
    }
}

pub struct Battery {
    pub z2: Ring,
    pub z3: Ring,
    pub z4: Ring,
    pub z6: Ring,
    pub z8: Ring,
    pub z9: Ring,
    pub z2xz2: Ring,
    pub f2x2: Ring,
    pub gf4: Ring,
    pub t2_z2: Ring,
    pub t3_z2: Ring,
    pub t2_z3: Ring,
    pub t2_z4: Ring,
    pub t3_z4: Ring,
    pub t2_z6: Ring,
    pub t2_z8: Ring,
    pub t2_z9: Ring,
    pub t2_z2xz2: Ring,
    pub t3_z2xz2: Ring,
    pub t2_f2x2: Ring,
    pub t3_f2x2: Ring,
}

impl Battery {
    /// The base rings.
    pub fn bases(&self) -> Vec<&Ring> {
        vec![
            &self.z2,
            &self.z3,
            &self.z4,
            &self.z6,
            &self.z8,
            &self.z9,
            &self.z2xz2,
            &self.f2x2,
            &self.gf4,
        ]
    }

    /// `T2` over each base ring, paired with the base.
    pub fn t2_pairs(&self) -> Vec<(&Ring, &Ring)> {
        vec![
            (&self.z2, &self.t2_z2),
            (&self.z3, &self.t2_z3),
            (&self.z4, &self.t2_z4),
            (&self.z6, &self.t2_z6),
            (&self.z8, &self.t2_z8),
            (&self.z9, &self.t2_z9),
            (&self.z2xz2, &self.t2_z2xz2),
            (&self.f2x2, &self.t2_f2x2),
        ]
    }
}

pub fn battery() -> &'static Battery {
    static BATTERY: OnceLock<Battery> = OnceLock::new();
    BATTERY.get_or_init(|| {
        let ring = |e: RingExpr| Ring::new(e).unwrap();
        Battery {
            z2: ring(zn_expr(2)),
            z3: ring(zn_expr(3)),
            z4: ring(zn_expr(4)),
            z6: ring(zn_expr(6)),
            z8: ring(zn_expr(8)),
            z9: ring(zn_expr(9)),
            z2xz2: ring(prod_expr(zn_expr(2), zn_expr(2))),
            f2x2: ring(f2x2_expr()),
            gf4: ring(gf4_expr()),
            t2_z2: ring(tri_expr(2, zn_expr(2))),
            t3_z2: ring(tri_expr(3, zn_expr(2))),
            t2_z3: ring(tri_expr(2, zn_expr(3))),
            t2_z4: ring(tri_expr(2, zn_expr(4))),
            t3_z4: ring(tri_expr(3, zn_expr(4))),
            t2_z6: ring(tri_expr(2, zn_expr(6))),
            t2_z8: ring(tri_expr(2, zn_expr(8))),
            t2_z9: ring(tri_expr(2, zn_expr(9))),
            t2_z2xz2: ring(tri_expr(2, prod_expr(zn_expr(2), zn_expr(2)))),
            t3_z2xz2: ring(tri_expr(3, prod_expr(zn_expr(2), zn_expr(2)))),
            t2_f2x2: ring(tri_expr(2, f2x2_expr())),
            t3_f2x2: ring(tri_expr(3, f2x2_expr())),
        }
    })
}

/// Deterministic pseudo-random stream for seeded spot checks.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg(seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1))
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }
}
