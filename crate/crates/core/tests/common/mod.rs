#![allow(dead_code)]

use proptest::prelude::*;
use weyl_lab_core::inner::{InnerFunctionSpec, Zero};
use weyl_lab_core::Complex64 as C;

/// Specs with moderate phase speed: `b ≤ 2`, up to three zeros with `Im ≥ 0.3`.
pub fn inner_spec() -> impl Strategy<Value = InnerFunctionSpec> {
    let zero = (-4.0..4.0f64, 0.3..3.0f64, 1u32..=2).prop_map(|(x, y, m)| Zero::new(C::new(x, y), m));
    (0.0..2.0f64, -3.1..3.1f64, prop::collection::vec(zero, 0..=3))
        .prop_filter("needs a nonconstant function", |(b, _, z)| *b > 0.05 || !z.is_empty())
        .prop_map(|(b, g, z)| InnerFunctionSpec::new(C::from_polar(1.0, g), b, z).unwrap())
}

pub fn upper_point() -> impl Strategy<Value = C> {
    (-6.0..6.0f64, 0.05..5.0f64).prop_map(|(x, y)| C::new(x, y))
}
