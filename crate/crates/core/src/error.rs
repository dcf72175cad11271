// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is reducible over the base field")]
    ReduciblePolynomial,
    #[error("expected a monic polynomial of degree {expected}, got {found} coefficients")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("value {0} is not a canonical field element")]
    InvalidElement(u64),

    #[error("points are not pairwise distinct")]
    DegeneratePoints,
    #[error("fractional linear map is singular (ad - bc = 0)")]
    SingularMap,
    #[error("circles are identical")]
    IdenticalCircles,
    #[error("circle coefficients are degenerate")]
    DegenerateCircle,
    #[error("point does not lie on the circle")]
    PointNotOnCircle,
    #[error("point lies on the circle")]
    PointOnCircle,
    #[error("circle passes through infinity")]
    CircleThroughInfinity,

    #[error("key circles violate the key conditions for this message")]
    InvalidKey,
    #[error("candidate stream exhausted before a valid key was found")]
    CandidateStreamExhausted,
    #[error("message circle passes through infinity; line keys are impossible")]
    MessageCircleThroughInfinity,
    #[error("field too small for the byte encoding (need q = 2^n with n >= 2)")]
    FieldTooSmall,
    #[error("point carries a malformed position tag")]
    MalformedTag,
    #[error("payload length does not match the encoded triples")]
    LengthMismatch,
    #[error("invalid container: {0}")]
    InvalidContainer(String),
    #[error("key source exhausted")]
    KeysourceExhausted,
    #[error("containers carry no integrity protection; authenticity cannot be established")]
    AuthenticityNotProvided,
    #[error("key material does not match the container's field parameters or mode")]
    KeyMismatch,

    #[error("projective points are identical")]
    IdenticalPoints,
    #[error("message point is not on the distinguished line")]
    MessageNotOnL0,
    #[error("key point lies on the distinguished line")]
    KeyOnL0,
    #[error("tag line equals the distinguished line")]
    TagIsL0,
    #[error("operation requires characteristic 2")]
    WrongCharacteristic,
}

pub type Result<T> = std::result::Result<T, Error>;
