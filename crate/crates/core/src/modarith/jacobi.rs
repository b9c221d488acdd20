use super::{ArithError, PrimePower};

/// Jacobi symbol `(a/n)` for odd positive `n`; negative `a` is reduced first.
pub fn jacobi(a: i128, n: u64) -> Result<i8, ArithError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(ArithError::EvenModulus(n));
    }
    let mut a = a.rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Legendre symbol for an odd prime; convenience wrapper that cannot fail.
pub fn legendre(a: i128, p: u64) -> i8 {
    jacobi(a, p).expect("odd prime modulus")
}

/// `(a/p^e)`, taken as `(a/p)^e`.
pub fn jacobi_pp(a: i128, pp: PrimePower) -> Result<i8, ArithError> {
    let s = jacobi(a, pp.p())?;
    Ok(if pp.exponent() % 2 == 1 { s } else { s * s })
}
