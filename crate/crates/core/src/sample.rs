//! Random birational exponent matrices, for property checks beyond the
//! exhaustively enumerated range.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::enumeration::compositions;
use crate::map::ExponentMatrix;

/// Draws rows uniformly from the compositions of `d` until the matrix is a
/// valid birational exponent matrix. Gives up after `max_attempts` draws.
pub fn random_birational<R: Rng + ?Sized>(
    n: usize,
    d: u64,
    rng: &mut R,
    max_attempts: usize,
) -> Option<ExponentMatrix> {
    let rows = compositions(d, n + 1);
    for _ in 0..max_attempts {
        let picked: Vec<Vec<u64>> = (0..=n).map(|_| rows.choose(rng).unwrap().clone()).collect();
        if let Ok(m) = ExponentMatrix::new(&picked) {
            if m.is_birational() {
                return Some(m);
            }
        }
    }
    None
}

/// Checks that inversion composes to the identity on both sides, is an
/// involution, and swaps the degrees. Returns the first failure.
pub fn round_trip_failure(m: &ExponentMatrix) -> Option<String> {
    let inv = match m.invert() {
        Ok(inv) => inv,
        Err(e) => return Some(e.to_string()),
    };
    let id = ExponentMatrix::identity(m.n());
    if inv.compose(m).as_ref() != Ok(&id) {
        return Some("invert(E) . E is not the identity".to_string());
    }
    if m.compose(&inv).as_ref() != Ok(&id) {
        return Some("E . invert(E) is not the identity".to_string());
    }
    match inv.invert() {
        Ok(back) if &back == m => {}
        _ => return Some("invert(invert(E)) differs from E".to_string()),
    }
    match inv.inverse_degree() {
        Ok(d) if d == m.d() => None,
        _ => Some("inverse_degree(invert(E)) differs from d".to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn samples_are_birational_and_reproducible() {
        let draw = |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..20)
                .map(|_| random_birational(3, 4, &mut rng, 1_000_000).unwrap())
                .collect::<Vec<_>>()
        };
        let a = draw(11);
        assert!(a.iter().all(|m| m.is_birational() && m.d() == 4 && m.n() == 3));
        assert!(a.iter().all(|m| round_trip_failure(m).is_none()));
        assert_eq!(a, draw(11));
    }
}
