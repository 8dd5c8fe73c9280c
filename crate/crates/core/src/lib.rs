//! Weak shuffle and weak stuffle products on word algebras.
//!
//! A weak stuffle product on words over an alphabet is the bilinear product
//! given by the recursion
//!
//! ```text
//! au □ bv = f1(a⊗b) a(u □ bv) + f2(a⊗b) b(au □ v) + f3(a⊗b)(u □ v)
//! ```
//!
//! with `u □ ε = ε □ u = u` and `f3 = k·g` letter valued. The classical
//! shuffle, the quasi-shuffle of multiple zeta values and the q-shuffles of
//! the Schlesinger–Zudilin and Bradley–Zhao models are all instances.
//!
//! Everything is generic over the coefficient field ([`Scalar`]); the
//! aliases below fix it to exact rationals.

pub mod classify;
pub mod error;
pub mod laws;
pub mod leading;
pub mod lincomb;
pub mod product;
pub mod report;
pub mod scalar;
pub mod table;
pub mod word;

pub use error::{CheckError, ProductError, SpecError};
pub use lincomb::{LinComb, TensorComb, WordComb};
pub use product::{Corner, Engine};
pub use report::{CheckReport, Failure, Verdict};
pub use scalar::{Scalar, SmallRational};
pub use table::{builtin_spec, table_from_tuple, Builtin, F3Map, ProductRule, RuleSpec, Spec, StuffleTable};
pub use word::{Letter, LetterNames, Word};

pub type Rational = scalar::Rational;
/// A formal linear combination of words with rational coefficients.
pub type Elem = WordComb<Rational>;
pub type TensorElem = TensorComb<Rational>;
pub type Table = StuffleTable<Rational>;
