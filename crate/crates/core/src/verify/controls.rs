//! Deliberate non-solutions used as negative controls.

use crate::cartesian::NumberState;
use crate::mode::ModePoint;
use crate::scalar::{Cx, Real};

/// Extremal-state formula with `φ` replaced by `2φ`.
pub fn wrong_width_gaussian<T: Real>(point: &ModePoint<T>) -> impl Fn([T; 1]) -> Cx<T> + Send + Sync + Copy {
    let mut p = *point;
    p.phi *= T::lit(2.0);
    let st = NumberState::new(&p, 0, 0).expect("order 0 is always allowed");
    move |[z]: [T; 1]| st.eval(z)
}

/// Extremal-state formula with only the `(πφ)^(-1/4)` prefactor, i.e. the
/// `ξ̄/ξ` phase dropped.
pub fn unphased_extremal<T: Real>(point: &ModePoint<T>) -> impl Fn([T; 1]) -> Cx<T> + Send + Sync + Copy {
    let mut p = *point;
    p.theta = T::zero();
    let st = NumberState::new(&p, 0, 0).expect("order 0 is always allowed");
    move |[z]: [T; 1]| st.eval(z)
}
