//! Exact character computations around iterated quantum Frobenius.
//!
//! The crate is organised bottom-up:
//!
//! * [`weightlat`]: root data, weights in fundamental-weight coordinates, the
//!   character ring `Z[X]` and the Frobenius twist.
//! * [`weylchar`]: Weyl characters with Freudenthal and tensor-product oracles.
//! * [`klengine`]: Coxeter element normal forms, Bruhat order and
//!   Kazhdan–Lusztig polynomials.
//! * [`lusztig`]: the level-`n` characters `E^n_λ` and the Steinberg and
//!   stabilization checks.
//! * [`drinfeld`]: type-A Drinfeld polynomial exponents and evaluation points.
//! * [`qchar`]: ε,t-characters, the collapse map Π and the twisted assembly.
//! * [`fgl`]: formal group laws, p-series, torsion counts, cyclotomic rings.
//! * [`quiverfix`]: fixed-point components of `T*Gr(w)` under `Z/p`.
//! * [`verify`]: the cross-module verification harness.
//!
//! All arithmetic is exact.

pub mod drinfeld;
pub mod error;
pub mod fgl;
pub mod klengine;
pub mod lusztig;
pub mod qchar;
pub mod quiverfix;
pub mod verify;

pub mod weightlat;
pub mod weylchar;

pub use error::{Error, ErrorCategory, Result};
pub use weightlat::{Character, RootSystem, RootType, WeightVector};

/// Trial-division primality test; the primes used here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
