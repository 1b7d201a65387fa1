#![allow(dead_code)]

use kappadiv::steenrod::{bockstein, power, Letter, SteenrodWord};
use kappadiv::Prime;
use rand::Rng;

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// A word of 1..=`max_len` letters with indices in 1..=`max_index`; at odd
/// `p` roughly a third of the letters are Bocksteins.
pub fn random_word<R: Rng>(rng: &mut R, p: Prime, max_len: usize, max_index: u32) -> SteenrodWord {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            if p.is_two() {
                Letter::Sq(rng.gen_range(1..=max_index))
            } else if rng.gen_range(0..3) == 0 {
                bockstein(p)
            } else {
                power(p, rng.gen_range(1..=max_index))
            }
        })
        .collect();
    SteenrodWord::new(p, letters).unwrap()
}
