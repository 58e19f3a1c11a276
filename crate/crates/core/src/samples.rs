//! Models and formulas shipped with the crate.

/// Vending machine controller against its environment.
pub const VENDING_MODEL: &str = include_str!("../models/vending.ocg");

/// Formulas about [`VENDING_MODEL`], with a gloss for each.
pub const VENDING_FORMULAS: [(&str, &str); 2] = [
    (
        "<<ctrl>> G ((Request & r < 3) -> X X Release)",
        "control is released right after a request whenever the balance is below 3",
    ),
    (
        "<<ctrl>> G ((Request & r >= 3) -> F Dispense)",
        "coffee is eventually dispensed after a request whenever the balance is at least 3",
    ),
];

/// A four-state energy game; Sys keeps the counter positive from enough credit.
pub const ENERGY_MODEL: &str = include_str!("../models/energy.ocg");

pub const ENERGY_FORMULA: &str = "<<Sys>> G r > 0";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;

    #[test]
    fn samples_load() {
        let m = load_model(VENDING_MODEL).unwrap();
        assert_eq!(m.state_count(), 8);
        assert_eq!(m.owner_name(m.state_id("ctrl").unwrap()), "ctrl");
        assert_eq!(load_model(ENERGY_MODEL).unwrap().state_count(), 4);
        for (f, _) in VENDING_FORMULAS {
            crate::formula::parse(f).unwrap();
        }
    }
}
