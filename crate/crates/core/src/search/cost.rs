//! Cost-vector comparisons. All comparisons are exact: costs are sums of
//! input values, so no tolerance is applied.

use std::cmp::Ordering;

/// `a` dominates `b`: no component larger and at least one strictly smaller.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "cost vectors of different length");
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// `a <= b` in every component (weak dominance, equality allowed).
#[inline]
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[inline]
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[inline]
pub fn lex_less(a: &[f64], b: &[f64]) -> bool {
    lex_cmp(a, b) == Ordering::Less
}

#[inline]
pub fn add_into(out: &mut Vec<f64>, a: &[f64], b: &[f64]) {
    out.clear();
    out.extend(a.iter().zip(b).map(|(x, y)| x + y));
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        assert!(!dominates(&[5.0, 4.0], &[4.0, 5.0]));
        assert!(!dominates(&[4.0, 5.0], &[5.0, 4.0]));
        assert!(!dominates(&[3.0, 3.0], &[3.0, 3.0]));
        assert!(dominates(&[1.0, 1.0, 1.0], &[1.0, 2.0, 1.0]));
        assert!(!dominates(&[1.0, 2.0, 1.0], &[1.0, 1.0, 1.0]));
    }

    #[test]
    #[should_panic]
    fn length_mismatch_panics() {
        dominates(&[1.0], &[1.0, 2.0]);
    }

    #[test]
    fn lex_examples() {
        assert!(lex_less(&[1.0, 9.0], &[2.0, 0.0]));
        assert!(!lex_less(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]));
        assert!(lex_less(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]));
    }

    fn vec_pair(d: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        // small integer domain so equal components actually occur
        let comp = (0u8..4).prop_map(f64::from);
        (prop::collection::vec(comp.clone(), d), prop::collection::vec(comp, d))
    }

    fn vec_triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..5).prop_flat_map(|d| {
            let comp = (0u8..3).prop_map(f64::from);
            (
                prop::collection::vec(comp.clone(), d),
                prop::collection::vec(comp.clone(), d),
                prop::collection::vec(comp, d),
            )
        })
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order((a, b, c) in vec_triple()) {
            prop_assert!(!dominates(&a, &a));
            if dominates(&a, &b) {
                prop_assert!(!dominates(&b, &a));
            }
            if dominates(&a, &b) && dominates(&b, &c) {
                prop_assert!(dominates(&a, &c));
            }
        }

        #[test]
        fn dominance_implies_lex_precedence((a, b) in (1usize..7).prop_flat_map(vec_pair)) {
            if dominates(&a, &b) {
                prop_assert!(lex_less(&a, &b));
            }
        }

        #[test]
        fn single_objective_dominance_is_less_than(x in 0u16..100, y in 0u16..100) {
            let (a, b) = ([f64::from(x)], [f64::from(y)]);
            prop_assert_eq!(dominates(&a, &b), x < y);
        }
    }
}
