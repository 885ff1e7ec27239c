//! Exact positive-semidefiniteness by symmetric elimination with diagonal pivoting.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Decides whether a symmetric rational matrix is PSD.
///
/// Eliminates on a positive diagonal entry at a time (the Schur complement of a
/// positive pivot is PSD iff the matrix is). A negative diagonal entry refutes
/// PSD; once every remaining diagonal entry is zero, the rest must vanish.
pub fn is_psd(m: &[Vec<Rational>]) -> Result<bool> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "row {i} has {} entries in a {n}x{n} matrix",
                row.len()
            )));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] != m[j][i] {
                return Err(Error::ShapeMismatch(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return Ok(false);
        }
        let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) else {
            let all_zero = active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
            return Ok(all_zero);
        };
        let p = active.remove(pos);
        let pivot = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &pivot;
            for &j in &active {
                let delta = &factor * &a[p][j];
                a[i][j] -= delta;
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn det2(a: &[Vec<Rational>], i: usize, j: usize) -> Rational {
        &a[i][i] * &a[j][j] - &a[i][j] * &a[j][i]
    }

    fn det3(a: &[Vec<Rational>]) -> Rational {
        &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
            - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
    }

    /// A symmetric 3x3 matrix is PSD iff every principal minor is nonnegative.
    fn minors_oracle(a: &[Vec<Rational>]) -> bool {
        let zero = Rational::zero();
        (0..3).all(|i| a[i][i] >= zero)
            && [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| det2(a, i, j) >= zero)
            && det3(a) >= zero
    }

    fn r(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
        ratio(rng.gen_range(lo..=hi), rng.gen_range(1..=3))
    }

    fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
        match rng.gen_range(0..3) {
            // B B^T with B of rank <= 2: PSD, often singular
            0 | 1 => {
                let cols = rng.gen_range(1..=2);
                let b: Vec<Vec<Rational>> =
                    (0..3).map(|_| (0..cols).map(|_| r(rng, -2, 2)).collect()).collect();
                let mut m = vec![vec![Rational::zero(); 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] = (0..cols).map(|k| &b[i][k] * &b[j][k]).sum();
                    }
                }
                // occasionally perturb one diagonal entry either way
                if rng.gen_bool(0.3) {
                    let i = rng.gen_range(0..3);
                    m[i][i] += ratio(rng.gen_range(-1..=1), 4);
                }
                m
            }
            _ => {
                let mut m = vec![vec![Rational::zero(); 3]; 3];
                for i in 0..3 {
                    for j in i..3 {
                        let v = r(rng, -3, 3);
                        m[i][j] = v.clone();
                        m[j][i] = v;
                    }
                }
                m
            }
        }
    }

    #[test]
    fn agrees_with_principal_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut psd = 0;
        for _ in 0..1000 {
            let m = random_matrix(&mut rng);
            let expected = minors_oracle(&m);
            psd += usize::from(expected);
            assert_eq!(is_psd(&m).unwrap(), expected, "{m:?}");
        }
        assert!(psd > 200 && psd < 900);
    }

    #[test]
    fn small_cases() {
        assert!(is_psd(&[]).unwrap());
        assert!(is_psd(&[vec![int(0)]]).unwrap());
        assert!(!is_psd(&[vec![int(-1)]]).unwrap());
        // zero pivot with a nonzero off-diagonal
        let m = vec![vec![int(0), int(1)], vec![int(1), int(5)]];
        assert!(!is_psd(&m).unwrap());
        let m = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(is_psd(&m).unwrap());
        let m = vec![vec![int(1), int(2)], vec![int(2), int(1)]];
        assert!(!is_psd(&m).unwrap());
        let asym = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert!(matches!(is_psd(&asym), Err(Error::ShapeMismatch(_))));
        let ragged = vec![vec![int(1), int(2)], vec![int(0)]];
        assert!(matches!(is_psd(&ragged), Err(Error::ShapeMismatch(_))));
    }
}
