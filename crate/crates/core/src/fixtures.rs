//! Bundled force fields.

use crate::error::{Error, Result};
use crate::hamiltonian::QuarticForceField;
use crate::modal::SystemSpec;

/// A force field with the modal basis size it is meant to be used with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub modal_dim: usize,
    json: &'static str,
}

impl Fixture {
    pub fn qff(&self) -> QuarticForceField {
        QuarticForceField::from_json(self.json).expect("bundled fixture parses")
    }

    pub fn system(&self) -> SystemSpec {
        SystemSpec::uniform(self.qff().modes(), self.modal_dim).expect("bundled fixture is valid")
    }
}

/// Four modes, two modals each: a doubly degenerate bend, a symmetric and
/// an antisymmetric stretch.
pub const CO2_LIKE: Fixture = Fixture {
    name: "co2_like",
    modal_dim: 2,
    json: include_str!("../fixtures/co2_like.json"),
};

/// Two identical modes with even couplings only, so the two fundamentals
/// are exactly degenerate.
pub const SYMMETRIC_PAIR: Fixture = Fixture {
    name: "symmetric_pair",
    modal_dim: 3,
    json: include_str!("../fixtures/symmetric_pair.json"),
};

pub const ANHARMONIC_PAIR: Fixture = Fixture {
    name: "anharmonic_pair",
    modal_dim: 3,
    json: include_str!("../fixtures/anharmonic_pair.json"),
};

pub const ALL: [Fixture; 3] = [CO2_LIKE, SYMMETRIC_PAIR, ANHARMONIC_PAIR];

pub fn by_name(name: &str) -> Result<Fixture> {
    ALL.into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown fixture `{name}`")))
}
