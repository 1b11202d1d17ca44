//! Exact arithmetic in `F_p`, `F_q = F_p[x]/g` and `F_{q^d} = F_q[y]/f`.

mod base;
mod counter;
pub mod poly;
mod tower;

pub use base::{is_prime, prime_power_decomposition, smallest_prime_power_at_least, BaseField, MAX_BASE_ORDER};
pub use counter::count_muls;
pub use poly::{is_irreducible, Poly};
pub use tower::{Fe, FieldTower, Level, MAX_EXT_DEGREE};
