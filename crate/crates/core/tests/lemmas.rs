mod common;

use common::{heavy_four_colorings, heavy_three_colorings, naive_g, prefix_lemmas_exhaustive, prefix_lemmas_sampled};

#[test]
fn heavy_three_color_class_forces_a_violation() {
    assert_eq!(heavy_three_colorings(10_000, 1), Ok(60_000));
}

#[test]
fn heavy_four_color_class_forces_a_violation() {
    assert_eq!(heavy_four_colorings(10_000, 2), Ok(70_000));
}

#[test]
fn prefix_lemmas_at_two_colors() {
    let g = naive_g(2, 2, 12).unwrap();
    assert_eq!(g, 6);
    assert!(prefix_lemmas_exhaustive(2, 2, g).unwrap() > 0);
    let g = naive_g(3, 2, 14).unwrap();
    assert_eq!(g, 11);
    assert!(prefix_lemmas_exhaustive(3, 2, g).unwrap() > 0);
    prefix_lemmas_sampled(3, 2, g, 20_000, 3).unwrap();
}

#[test]
fn prefix_lemmas_at_three_colors() {
    let g = naive_g(2, 3, 12).unwrap();
    prefix_lemmas_exhaustive(2, 3, g).unwrap();
}
