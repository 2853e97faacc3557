pub mod field;
pub mod ideal;
pub mod roots;

pub use field::{field_index, FieldIndex, NfElement, NumberField};
pub use ideal::{split_prime, valuation, FracIdeal, PrimeIdealData};
pub use roots::{archimedean_abs, is_root_of_unity, log_rational};
