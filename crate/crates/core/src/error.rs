//! Crate-wide error type.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::poset::PosetViolation;

/// Errors reported by the library.
///
/// Guard errors (`TooLarge`) are distinguished from domain errors so callers
/// can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A group invariant factor was smaller than 2.
    InvalidGroup(String),
    /// An element index or tuple does not belong to the group.
    ElementNotInGroup,
    /// The trivial group cannot index a cone.
    TrivialGroup,
    /// `u` is not invertible modulo `m`.
    NotAUnit { unit: u64, modulus: u64 },
    /// The cone has a nontrivial lineality space; basis vectors attached.
    NotPointed { lineality: Vec<Vec<BigInt>> },
    /// An enumeration exceeded its size guard.
    TooLarge { what: &'static str, limit: usize },
    /// Two posets (or a poset and a group) live on different ground sets.
    GroundMismatch,
    /// A relation failed the partial-order or balance axioms.
    InvalidPoset(PosetViolation),
    /// The generators (together with the modulus, where applicable) have gcd > 1.
    GcdNotOne,
    /// A required element is not representable in the semigroup.
    NotInSemigroup { value: u64 },
    /// A point violates the given inequality row of a cone or polyhedron.
    NotAMember { row: usize },
    /// `gcd(q, n) > 1`: the point carries no semigroup.
    NotCoprime { q: u64, n: u64 },
    /// The point must first be decomposed so that its first coordinate is zero.
    NonzeroFirstCoordinate,
    /// A ray of the group cone had first coordinate zero.
    ZeroFirstRayCoordinate,
    /// Triangulation input rays do not span the ambient space.
    DegenerateRays,
    /// Reconstruction was called without a value for the given atom.
    MissingAtomValue { atom: usize },
    /// Propagated coordinates contradict a poset relation; witness pair attached.
    InconsistentPropagation { a: usize, b: usize },
    /// A residue class had fewer than `needed` samples.
    InsufficientSamples { residue: u64, needed: usize },
    /// A held-out sample disagreed with the interpolated quasipolynomial.
    FitMismatch { witness: u64 },
    /// Generic precondition failure with a short description.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGroup(msg) => write!(f, "invalid group: {msg}"),
            Error::ElementNotInGroup => write!(f, "element does not belong to the group"),
            Error::TrivialGroup => write!(f, "the trivial group has no cone coordinates"),
            Error::NotAUnit { unit, modulus } => {
                write!(f, "{unit} is not a unit modulo {modulus}")
            }
            Error::NotPointed { lineality } => write!(
                f,
                "cone is not pointed (lineality space of dimension {})",
                lineality.len()
            ),
            Error::TooLarge { what, limit } => {
                write!(f, "{what} exceeds the size guard ({limit})")
            }
            Error::GroundMismatch => write!(f, "ground sets do not match"),
            Error::InvalidPoset(v) => write!(f, "invalid poset: {v}"),
            Error::GcdNotOne => write!(f, "generators do not have gcd 1"),
            Error::NotInSemigroup { value } => {
                write!(f, "{value} is not an element of the semigroup")
            }
            Error::NotAMember { row } => {
                write!(f, "point violates inequality row {row}")
            }
            Error::NotCoprime { q, n } => {
                write!(f, "gcd({q}, {n}) > 1: no semigroup corresponds to this point")
            }
            Error::NonzeroFirstCoordinate => {
                write!(f, "first coordinate must be zero (decompose the point first)")
            }
            Error::ZeroFirstRayCoordinate => {
                write!(f, "a ray has first coordinate zero")
            }
            Error::DegenerateRays => write!(f, "rays do not span the ambient space"),
            Error::MissingAtomValue { atom } => {
                write!(f, "no value supplied for atom {atom}")
            }
            Error::InconsistentPropagation { a, b } => {
                write!(f, "propagation inconsistent at relation {a} < {b}")
            }
            Error::InsufficientSamples { residue, needed } => {
                write!(f, "residue class {residue} needs at least {needed} samples")
            }
            Error::FitMismatch { witness } => {
                write!(f, "held-out sample at {witness} disagrees with the fit")
            }
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<PosetViolation> for Error {
    fn from(v: PosetViolation) -> Self {
        Error::InvalidPoset(v)
    }
}

pub type Result<T> = core::result::Result<T, Error>;
