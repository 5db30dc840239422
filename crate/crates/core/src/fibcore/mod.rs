//! Exact modular Fibonacci arithmetic and Pisano periods.
//!
//! Two independent routes compute π(m): [`pisano_direct`] walks residue
//! pairs until `(0, 1)` recurs, and [`pisano_fast`] factors `m`, combines the
//! prime-power periods by LCM and then certifies the candidate with
//! [`fib_mod`].

mod arith;
mod factor;
mod omega;
mod pisano;

pub use arith::{
    fib_mod, fib_mod_u64, fib_pair_mod, fib_pair_mod_u64, is_period, is_period_u64,
    residue_stream, BigResidue, BigResidueStream, ResidueStream,
};
pub use factor::{factorize, is_prime_u64, Factorization};
pub use omega::{omega, omega_lcm_predict, OmegaClass, ZeroCount};
pub use pisano::{
    is_wall_sun_sun, pisano_direct, pisano_direct_big, pisano_factored, pisano_fast,
    PeriodCache, PeriodDescriptor, PeriodMethod,
};
