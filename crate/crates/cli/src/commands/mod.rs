mod asymptotics;
mod code;
mod entropy;
mod guess;

pub use asymptotics::{contrast, convergence};
pub use code::{code, code_exponent, codebook, decode, encode};
pub use entropy::{entropy, oracle};
pub use guess::{guess, guess_exponent};
