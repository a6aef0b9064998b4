use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteGluingSpec;

/// Size bounds for [`random_spec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpecParams {
    pub max_pieces: usize,
    pub max_points: usize,
}

impl Default for RandomSpecParams {
    fn default() -> Self {
        RandomSpecParams {
            max_pieces: 6,
            max_points: 12,
        }
    }
}

/// Deterministic random gluing data for a given seed.
///
/// Three generators are mixed so the corpus contains both families that
/// satisfy the cocycle condition and families that do not:
/// * pieces embedded in a common ambient set, glued wherever images agree;
/// * the same, keeping only a random subset of each pair's coincidences;
/// * unrelated random partial bijections.
pub fn random_spec(seed: u64, params: RandomSpecParams) -> FiniteGluingSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_pieces = params.max_pieces.max(1);
    let max_points = params.max_points.max(1);
    let pieces = rng.random_range(1..=max_pieces);
    let sizes: Vec<usize> = (0..pieces).map(|_| rng.random_range(1..=max_points)).collect();
    let mut spec = FiniteGluingSpec::new(
        sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| (format!("X{i}"), (0..n).map(|p| format!("p{p}")).collect()))
            .collect(),
    )
    .expect("generated labels are distinct");

    let mode = rng.random_range(0..3u8);
    if mode < 2 {
        let ambient = rng.random_range(*sizes.iter().max().unwrap()..=2 * max_points);
        let placements: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&n| {
                let mut slots: Vec<usize> = (0..ambient).collect();
                slots.shuffle(&mut rng);
                slots.truncate(n);
                slots
            })
            .collect();
        for i in 0..pieces {
            for j in i + 1..pieces {
                let mut pairs: Vec<(usize, usize)> = Vec::new();
                for (x, sx) in placements[i].iter().enumerate() {
                    if let Some(y) = placements[j].iter().position(|sy| sy == sx) {
                        if mode == 0 || rng.random_bool(0.5) {
                            pairs.push((x, y));
                        }
                    }
                }
                spec.identify_indices(i, j, pairs).expect("coincidences form a bijection");
            }
        }
    } else {
        for i in 0..pieces {
            for j in i + 1..pieces {
                let m = rng.random_range(0..=sizes[i].min(sizes[j]).min(3));
                let mut xs: Vec<usize> = (0..sizes[i]).collect();
                let mut ys: Vec<usize> = (0..sizes[j]).collect();
                xs.shuffle(&mut rng);
                ys.shuffle(&mut rng);
                let pairs = xs.into_iter().zip(ys).take(m).collect();
                spec.identify_indices(i, j, pairs).expect("zip of distinct points");
            }
        }
    }
    spec
}
