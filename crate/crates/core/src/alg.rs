//! The arithmetic interface shared by form rings over finite rings and over polynomial rings.

use std::fmt::Debug;
use std::hash::Hash;

/// A ring with involution, a central multiplier λ and a form parameter Λ.
pub trait FormAlg: Send + Sync {
    type E: Clone + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn conj(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;

    fn lambda(&self) -> Self::E;
    fn in_lambda(&self, a: &Self::E) -> bool;
    fn in_lambda_max(&self, a: &Self::E) -> bool;
    fn in_lambda_min(&self, a: &Self::E) -> bool;
    /// Least z with z + λz̄ = t.
    fn solve_f(&self, t: &Self::E) -> Option<Self::E>;
    fn show(&self, a: &Self::E) -> String;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }

    fn lambda_bar(&self) -> Self::E {
        self.conj(&self.lambda())
    }

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }
}
