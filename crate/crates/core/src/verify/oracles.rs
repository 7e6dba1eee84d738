//! Reference values computed without the library's own special-function
//! code paths.

use num_complex::Complex64;

/// Apéry's constant ζ(3).
pub const ZETA_THREE: f64 = 1.202_056_903_159_594_3;

/// `E_1(z)` by the continued fraction
/// `e^{-z} / (z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))`, evaluated with
/// the modified Lentz algorithm. Converges for `|arg z| < pi`; slow near 0.
pub fn e1_continued_fraction(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // even form: E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
    let mut f = z + 1.0;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..200_000 {
        let a = -((n * n) as f64);
        let b = z + (2 * n + 1) as f64;
        d = b + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + c.inv() * a;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - one).norm() < 1e-16 {
            break;
        }
    }
    (-z).exp() / f
}

/// `π(x)` by trial division.
pub fn prime_count_trial(x: u64) -> usize {
    (2..=x).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).count()
}

/// `Σ_{N < p <= bound} p^{-2}` plus `1/(bound log bound)` for the rest.
pub fn prime_square_tail(n: u64, bound: u64) -> f64 {
    let set = crate::arith::sieve_primes(bound);
    let head: f64 = set
        .primes()
        .iter()
        .filter(|&&p| p > n)
        .map(|&p| (p as f64).powi(-2))
        .rev()
        .sum();
    head + 1.0 / (bound as f64 * (bound as f64).ln())
}
