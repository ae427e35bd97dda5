//! Independent oracle for the tau table: direct truncated expansion of
//! `q * prod (1 - q^n)^24` with schoolbook big-integer arithmetic. This code
//! deliberately shares nothing with the transform-based builder it checks.

use num_bigint::BigInt;
use num_traits::Zero;
use rmflab_core::modform;

/// tau(1..=n_max) by multiplying out the 24th power factor by factor.
fn tau_by_direct_expansion(n_max: usize) -> Vec<BigInt> {
    let len = n_max; // coefficients of prod (1 - q^n)^24 up to degree n_max - 1
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::from(1);
    for n in 1..len {
        for _ in 0..24 {
            for j in (n..len).rev() {
                let sub = c[j - n].clone();
                c[j] -= sub;
            }
        }
    }
    c // c[m] = tau(m + 1)
}

#[test]
fn oracle_reproduces_classical_leading_values() {
    let oracle = tau_by_direct_expansion(10);
    let classical: [i64; 10] = [
        1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920,
    ];
    for (i, want) in classical.iter().enumerate() {
        assert_eq!(oracle[i], BigInt::from(*want), "n = {}", i + 1);
    }
}

#[test]
fn transform_path_matches_oracle_exactly() {
    let n_max = 600u64;
    let oracle = tau_by_direct_expansion(n_max as usize);
    let tab = modform::build_tau_table(n_max).unwrap();
    for n in 1..=n_max {
        assert_eq!(tab.tau(n), &oracle[(n - 1) as usize], "n = {n}");
    }
}

#[test]
fn prime_square_identity_against_oracle() {
    // tau(25) = tau(5)^2 - 5^11, with both sides from the oracle alone.
    let oracle = tau_by_direct_expansion(25);
    let tau5 = &oracle[4];
    let want = tau5 * tau5 - BigInt::from(5u64).pow(11);
    assert_eq!(oracle[24], want);
    assert_eq!(want, BigInt::from(-25499225i64));
}

#[test]
fn lambda_normalization_against_20_digit_oracle() {
    // lambda(n) = tau(n) / n^{5.5} evaluated in scaled integer arithmetic:
    // lambda * 10^20 ~= tau * 10^40 / isqrt(n^11 * 10^40).
    let n_max = 4096u64;
    let tab = modform::build_tau_table(n_max).unwrap();
    let lt = modform::lambda_from_tau(&tab);
    let scale = BigInt::from(10u64).pow(40);
    // fixed 1% pseudo-random subsample, seeded by a simple LCG
    let mut state = 0x243F6A8885A308D3u64;
    let mut checked = 0;
    while checked < n_max / 100 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let n = 2 + state % (n_max - 1);
        // lambda * 10^20 = tau * 10^40 / isqrt(n^11 * 10^40), truncated
        let num = tab.tau(n) * &scale;
        let den = num_integer::Roots::sqrt(&(BigInt::from(n).pow(11) * &scale));
        let q = num / den;
        use num_traits::ToPrimitive;
        let oracle = q.to_f64().unwrap() / 1e20;
        let got = lt.val(n);
        assert!(
            (got - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
            "n = {n}: {got} vs {oracle}"
        );
        checked += 1;
    }
}
