//! Seeded random systems for exhaustive and property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Ring, RingElement};
use crate::polynomials::{is_essentially_distinct, PolySystem, RingPolynomial};

/// `count` one-variable integer systems with `1..=max_size` members of
/// degree `1..=max_degree`, no constant terms and coefficients in `-3..=3`.
/// Every system is nonconstant and essentially distinct.
pub fn seeded_corpus(seed: u64, count: usize, max_degree: u32, max_size: usize) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = rng.gen_range(1..=max_size);
        let polys: Vec<RingPolynomial> = (0..size).map(|_| random_poly(&mut rng, max_degree)).collect();
        let sys = PolySystem::new(polys).expect("shared ring");
        if is_essentially_distinct(&sys) {
            out.push(sys);
        }
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32) -> RingPolynomial {
    let degree = rng.gen_range(1..=max_degree);
    let mut terms = Vec::new();
    for k in 1..=degree {
        let c: i64 = if k == degree {
            let c = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                -c
            } else {
                c
            }
        } else {
            rng.gen_range(-3..=3)
        };
        terms.push((vec![k], RingElement::from_int(Ring::Integers, c)));
    }
    RingPolynomial::from_terms(Ring::Integers, 1, terms)
}
