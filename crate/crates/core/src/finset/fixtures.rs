//! Discretized interval gluings. Each interval `[-1, 1]` becomes a chain
//! of evenly spaced points (3 by default: `-1, 0, 1`).

use super::{dualize, FiniteGluingSpec, FinsetError};
use crate::exactlin::{format_rational, Rational};
use crate::multipullback::GluingFamily;

pub const DEFAULT_CHAIN_LENGTH: usize = 3;

pub const FIXTURE_NAMES: [&str; 6] = ["tstar", "tcirc-a", "tcirc-c", "example1", "example2", "example3"];

/// Point labels of a chain of `n >= 2` evenly spaced points from -1 to 1.
pub fn chain_points(n: usize) -> Vec<String> {
    let n = n.max(2);
    let last = (n - 1) as i64;
    (0..n as i64)
        .map(|t| format_rational(&Rational::new((2 * t - last).into(), last.into())))
        .collect()
}

fn three_chains(n: usize) -> FiniteGluingSpec {
    let pts = chain_points(n);
    FiniteGluingSpec::new(vec![("1", pts.clone()), ("2", pts.clone()), ("3", pts)])
        .expect("distinct labels")
}

fn build(n: usize, two_three: &[(&str, &str)]) -> Result<FiniteGluingSpec, FinsetError> {
    let mut s = three_chains(n);
    s.identify("1", "2", &[("1", "1")])?;
    s.identify("1", "3", &[("1", "1")])?;
    s.identify("2", "3", two_three)?;
    Ok(s)
}

/// Three intervals whose partial gluing folds `I_2` and `I_3` onto each
/// other end to end: `1₂ ~ -1₃` and `-1₂ ~ 1₃`, so `I_2` is not embedded.
pub fn tstar(n: usize) -> FiniteGluingSpec {
    build(n, &[("-1", "1"), ("1", "-1")]).expect("fixture is valid")
}

/// Circle with a tail, glued so that `I_2` and `I_3` meet only at `-1`.
pub fn tcirc_a(n: usize) -> FiniteGluingSpec {
    build(n, &[("-1", "-1")]).expect("fixture is valid")
}

/// The same circle, with `I_2` and `I_3` also identified at `1`.
pub fn tcirc_c(n: usize) -> FiniteGluingSpec {
    build(n, &[("-1", "-1"), ("1", "1")]).expect("fixture is valid")
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Gluing(FiniteGluingSpec),
    Family(GluingFamily),
}

/// Named fixtures: `tstar`, `tcirc-a`, `tcirc-c` as gluing data and
/// `example1..3` as their dual algebra families.
pub fn fixture(name: &str, chain_length: usize) -> Option<Fixture> {
    let spec = match name {
        "tstar" | "example1" => tstar(chain_length),
        "tcirc-a" | "example2" => tcirc_a(chain_length),
        "tcirc-c" | "example3" => tcirc_c(chain_length),
        _ => return None,
    };
    if name.starts_with("example") {
        Some(Fixture::Family(dualize(&spec).expect("fixtures dualize")))
    } else {
        Some(Fixture::Gluing(spec))
    }
}
