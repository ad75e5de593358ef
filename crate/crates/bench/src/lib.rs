//! Instance generators shared by the benchmarks.

use rand::Rng;
use twostripe::congruence::gcd;
use twostripe::TwoStripeInstance;

/// Random feasible, nontrivial unit-cost instance with `n` close to
/// `2^bits` and `g1 = c` drawn up to `2^max_col_bits`.
pub fn random_instance<R: Rng>(rng: &mut R, bits: u32, max_col_bits: u32) -> TwoStripeInstance {
    assert!((8..=61).contains(&bits) && max_col_bits < bits - 2);
    loop {
        let c = rng.gen_range(2..=1u64 << max_col_bits);
        let r = rng.gen_range((1u64 << (bits - 1))..(1u64 << bits)) / c;
        if r < 4 {
            continue;
        }
        let n = r * c;
        // gcd(n, c * u) = c when gcd(u, r) = 1.
        let u = rng.gen_range(1..=r / 2);
        if gcd(u, r) != 1 {
            continue;
        }
        let a1 = c * u;
        let a2 = rng.gen_range(1..=n / 2);
        if a2 == a1 || gcd(a2, c) != 1 {
            continue;
        }
        if let Ok(inst) = TwoStripeInstance::unit(n, a1, a2) {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use twostripe::Triviality;

    #[test]
    fn generated_instances_are_nontrivial() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let inst = random_instance(&mut rng, 60, 20);
            assert_eq!(inst.classify(), Triviality::NonTrivial);
            assert!(inst.n() >= 1 << 58);
        }
    }
}
