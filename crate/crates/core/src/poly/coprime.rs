//! Probabilistic coprimality of polynomial tuples via restriction to random lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Poly, UPoly};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Coprimality {
    Coprime,
    CommonFactorLikely,
}

/// Restricts the nonzero inputs to `trials` random lines `a + s b` with small integer `a` and
/// nonzero small integer `b`, and reports a likely common factor when the univariate gcd is
/// nonconstant on a majority of lines.
pub fn coprime_check(polys: &[Poly], trials: usize, seed: u64) -> Coprimality {
    let live: Vec<&Poly> = polys.iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = live.first() else {
        return Coprimality::CommonFactorLikely;
    };
    let n = first.nvars();
    if live.iter().any(|p| p.is_constant()) {
        return Coprimality::Coprime;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = trials.max(1);
    let mut hits = 0;
    for _ in 0..trials {
        let line: Vec<Poly> = (0..n)
            .map(|_| {
                let a = rng.gen_range(-3i64..=3);
                let mut b = 0;
                while b == 0 {
                    b = rng.gen_range(-3i64..=3);
                }
                Poly::linear(&[Scalar::from_i64(b)]).add(&Poly::constant(1, Scalar::from_i64(a)))
            })
            .collect();
        let mut g: Option<UPoly> = None;
        for p in &live {
            let u = p.compose(&line).to_upoly(0).expect("univariate");
            g = Some(match g {
                None => u,
                Some(g) => g.gcd(&u),
            });
            if g.as_ref().is_some_and(UPoly::is_constant) {
                break;
            }
        }
        if g.is_some_and(|g| !g.is_constant()) {
            hits += 1;
        }
    }
    if 2 * hits > trials {
        Coprimality::CommonFactorLikely
    } else {
        Coprimality::Coprime
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn polys(src: &[&str]) -> Vec<Poly> {
        let names = vec!["z".to_string(), "w".to_string()];
        src.iter().map(|s| parse_poly(s, &names).unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(coprime_check(&polys(&["z^2", "1 + w"]), 5, 1), Coprimality::Coprime);
        assert_eq!(coprime_check(&polys(&["z*w", "z"]), 5, 1), Coprimality::CommonFactorLikely);
        assert_eq!(coprime_check(&polys(&["z", "w"]), 5, 1), Coprimality::Coprime);
        assert_eq!(coprime_check(&polys(&["z*(w - 1)", "0", "(w - 1)^2"]), 7, 3), Coprimality::CommonFactorLikely);
    }
}
