//! Reference values as decimal strings, rounded or truncated to the digits shown.

/// `(k, μ(e^{-t}), e₁(t), e₁(t)/t^{2 lg ρ})` at `t = 2^{-k}`.
pub const TABLE1: [(u32, &str, &str, &str); 5] = [
    (20, "2.6180306", "1.1708e-8", "2.6790"),
    (21, "2.6180323", "4.4999e-9", "2.6958"),
    (22, "2.6180331", "1.7079e-9", "2.6787"),
    (23, "2.6180336", "6.5648e-10", "2.6956"),
    (24, "2.6180338", "2.4917e-10", "2.6786"),
];

/// `(k, A_k, B_k, C_k)`.
pub const TABLE2: [(usize, &str, &str, &str); 4] = [
    (1, "2.009968436e-3", "-6.155485619e-4", "2.102111592e-3"),
    (2, "-1.751530562e-6", "1.354122041e-6", "2.213934464e-6"),
    (3, "4.561611933e-10", "-2.802129666e-9", "2.839016326e-9"),
    (4, "2.421586941e-13", "3.247722091e-12", "3.256737573e-12"),
];

/// `(decade, ln F(e^{-t}), e₂(t), e₂(t)/t^{2 lg ρ})` at `t = 10^{-decade}`.
pub const TABLE3: [(u32, &str, &str, &str); 10] = [
    (1, "1.756508934", "7.11e-3", "0.1739"),
    (2, "3.322632048", "2.93e-4", "0.1755"),
    (3, "4.919666200", "1.19e-5", "0.1748"),
    (4, "6.514164850", "4.91e-7", "0.1757"),
    (5, "8.114306645", "2.00e-8", "0.1755"),
    (6, "9.714782160", "8.16e-10", "0.1748"),
    (7, "11.30965459", "3.35e-11", "0.1757"),
    (8, "12.91018122", "1.37e-12", "0.1755"),
    (9, "14.51031430", "5.57e-14", "0.1748"),
    (10, "16.10521012", "2.29e-15", "0.1757"),
];

/// Band containing the last column of the `ln F` table.
pub const TABLE3_RATIO_BAND: (f64, f64) = (0.1739, 0.1757);

pub const C0: &str = "0.1216438693";
pub const L0: &str = "0.9624";
pub const L0_PRIME: &str = "0.05706";
pub const LAMBDA: &str = "1.403";
pub const C1: &str = "0.4501";

/// `C(z)` bounds on `(0, 1)` and on `[1/2, 1)`.
pub const C_BOUNDS_ALL: (f64, f64) = (1.0, 1.14);
pub const C_BOUNDS_UPPER: (f64, f64) = (1.11, 1.14);

/// Zero of `μ` nearest the origin, and its modulus.
pub const MU_ZERO: (&str, &str) = ("-0.2787", "0.7477");
pub const MU_ZERO_ABS: &str = "0.7979";

/// Root moduli of the characteristic polynomial at `ζ₇` (printed truncated).
pub const ZETA7_MODULI: (&str, &str) = ("0.53101005", "1.88320350");

pub const EXCEPTIONAL_PRIMES: [u64; 2] = [5, 11];
