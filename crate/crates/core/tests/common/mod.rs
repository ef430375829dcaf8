//! Independent oracles used by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use lcolor::{Color, Coloring};

/// Direct reading of the definition: try every pair of monochromatic
/// m-subsets `X ≺ Y`.
pub fn brute_violates(colors: &[Color], m: usize) -> bool {
    let n = colors.len();
    for c in 1..=colors.iter().copied().max().unwrap_or(0) {
        for d in 1..=colors.iter().copied().max().unwrap_or(0) {
            let xs: Vec<usize> = (0..n).filter(|&i| colors[i] == c).collect();
            let ys: Vec<usize> = (0..n).filter(|&i| colors[i] == d).collect();
            for x in xs.iter().copied().combinations(m) {
                let (x1, xm) = (x[0] as i64, x[m - 1] as i64);
                for y in ys.iter().copied().filter(|&p| p as i64 > xm).combinations(m) {
                    let ym = y[m - 1] as i64;
                    if 2 * (xm - x1) <= ym - x1 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Every coloring of `[1, n]` with colors in `[1, r]`, in lexicographic order.
pub fn all_colorings(n: usize, r: Color) -> impl Iterator<Item = Vec<Color>> {
    (0..n).map(|_| 1..=r).multi_cartesian_product()
}

/// Whether some r-coloring of `[1, n]` is an L(r)-coloring, by plain enumeration.
pub fn naive_exists(m: usize, r: Color, n: usize) -> Option<Vec<Color>> {
    all_colorings(n, r).find(|c| lcolor::is_l_coloring(&Coloring::new(1, c.clone(), r).unwrap(), m))
}

/// `g(m, r)` by plain enumeration.
pub fn naive_g(m: usize, r: Color, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| naive_exists(m, r, n).is_none())
}

use lcolor::coloring::prefix_statistics;
use lcolor::find_violation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive agreement of the linear verifier with [`brute_violates`] for
/// `n <= 12`, `r <= 3`, `m <= 3`. Returns the number of checks.
pub fn verifier_equivalence() -> Result<u64, String> {
    let mut checked = 0;
    for r in 1..=3u32 {
        for n in 1..=12usize {
            for colors in all_colorings(n, r) {
                let c = Coloring::new(1, colors.clone(), r).unwrap();
                for m in 1..=3 {
                    let fast = find_violation(&c, m);
                    if fast.is_some() != brute_violates(&colors, m) {
                        return Err(format!("disagreement on {colors:?} with m = {m}"));
                    }
                    if let Some(v) = fast {
                        if !v.is_valid_for(&c, m) {
                            return Err(format!("invalid certificate on {colors:?} with m = {m}"));
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// A coloring of `[1, n]` in which color `c` fills all but `others`
/// positions; the rest get random other colors.
fn heavy(rng: &mut ChaCha8Rng, n: usize, r: u32, others: usize) -> Vec<Color> {
    let c = rng.gen_range(1..=r);
    let mut colors = vec![c; n];
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    for &i in &idx[..others] {
        let mut d = rng.gen_range(1..r);
        if d >= c {
            d += 1;
        }
        colors[i] = d;
    }
    colors
}

/// Three colorings of `[1, 3m-4]` with a class of size at least
/// `3m-⌈m/2⌉-2` are never L(3). Samples `samples` colorings for each
/// `m ∈ [4, 9]`.
pub fn heavy_three_colorings(samples: usize, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for m in 4..=9usize {
        let n = 3 * m - 4;
        let max_others = n - (3 * m - m.div_ceil(2) - 2);
        for _ in 0..samples {
            let others = rng.gen_range(0..=max_others);
            let colors = heavy(&mut rng, n, 3, others);
            if lcolor::is_l_coloring(&Coloring::new(1, colors.clone(), 3).unwrap(), m) {
                return Err(format!("m = {m}: {colors:?} is an L(3)-coloring"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Four colorings of `[1, 4m-5]` with a class of size at least `3m-3`
/// are never L(4), for `m ∈ [3, 9]`.
pub fn heavy_four_colorings(samples: usize, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for m in 3..=9usize {
        let n = 4 * m - 5;
        let max_others = n - (3 * m - 3);
        for _ in 0..samples {
            let others = rng.gen_range(0..=max_others);
            let colors = heavy(&mut rng, n, 4, others);
            if lcolor::is_l_coloring(&Coloring::new(1, colors.clone(), 4).unwrap(), m) {
                return Err(format!("m = {m}: {colors:?} is an L(4)-coloring"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Colorings of `[1, g-1]` with `m` equal colors inside `[1, r(m-1)]` are
/// not L(r).
pub fn crowded_prefix_check(colors: &[Color], m: usize, r: u32) -> Result<(), String> {
    let k = r as usize * (m - 1);
    let crowded = (1..=r).any(|c| colors.iter().take(k).filter(|&&x| x == c).count() >= m);
    if crowded && lcolor::is_l_coloring(&Coloring::new(1, colors.to_vec(), r).unwrap(), m) {
        return Err(format!("{colors:?} is L({r}) for m = {m} despite a crowded prefix"));
    }
    Ok(())
}

/// Colorings of `[1, g-k]` whose counts around the first `m`-th occurrence
/// sum to at most `r(2m-2)-k` are not L(r).
pub fn occurrence_sum_check(colors: &[Color], m: usize, r: u32, k: usize) -> Result<(), String> {
    let c = Coloring::new(1, colors.to_vec(), r).unwrap();
    let stats = prefix_statistics(&c, m);
    let Some(sum) = stats.occurrence_sum else { return Ok(()) };
    if (sum as i64) <= (r as i64) * (2 * m as i64 - 2) - k as i64 && lcolor::is_l_coloring(&c, m) {
        return Err(format!("{colors:?} is L({r}) for m = {m}, k = {k} with occurrence sum {sum}"));
    }
    Ok(())
}

/// Both prefix lemmas over every coloring of `[1, g-k]`, `k >= 1`.
pub fn prefix_lemmas_exhaustive(m: usize, r: u32, g: usize) -> Result<u64, String> {
    let mut checked = 0;
    for colors in all_colorings(g - 1, r) {
        crowded_prefix_check(&colors, m, r)?;
        checked += 1;
    }
    for k in 1..g {
        for colors in all_colorings(g - k, r) {
            occurrence_sum_check(&colors, m, r, k)?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// Both prefix lemmas on random colorings.
pub fn prefix_lemmas_sampled(m: usize, r: u32, g: usize, samples: usize, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let colors: Vec<Color> = (0..g - 1).map(|_| rng.gen_range(1..=r)).collect();
        crowded_prefix_check(&colors, m, r)?;
        let k = rng.gen_range(1..g);
        occurrence_sum_check(&colors[..g - k], m, r, k)?;
    }
    Ok(2 * samples as u64)
}
