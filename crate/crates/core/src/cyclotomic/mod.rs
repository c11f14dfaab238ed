//! Exact cyclotomic arithmetic for the matrices `γ_p`, the spectral lemma for
//! `U_M(γ)` and the 4×4 system satisfied by `F` and `F'`.

pub mod bsystem;
pub mod gamma;
pub mod ring;
pub mod spectral;

pub use bsystem::{b_matrix, verify_b_system, BSample, BSystemReport};
pub use gamma::{
    exceptional_primes, fib_identity, fib_mod7, fibonacci, g_matrix, g_one_power, gamma_p,
    gamma_steps, is_exceptional, prime_scan, trace_witness, Exceptional, FibMod7, PrimeReport,
};
pub use ring::{is_prime, CycInt, CycMatrix};
pub use spectral::{u_matrix, u_spectrum, EigenPoly, USpectrum};
