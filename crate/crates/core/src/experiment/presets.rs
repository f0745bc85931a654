use crate::stream::{ConceptFunction, DriftKind, SineFunction, StreamSpec};

pub const SUITE_LENGTH: u64 = 40_000;
pub const ABRUPT_POSITIONS: [u64; 3] = [10_000, 20_000, 30_000];
pub const GRADUAL_POSITIONS: [u64; 3] = [9_500, 20_000, 30_500];
pub const GRADUAL_WIDTH: u64 = 1_000;
pub const SEA_NOISE: f64 = 0.2;
pub const RT_SEEDS: [u64; 4] = [8873, 9856, 7896, 2563];

/// Name of the only built-in preset.
pub const PAPER_SUITE: &str = "paper-suite";

fn sine(function: SineFunction, reversed: bool) -> ConceptFunction {
    ConceptFunction::Sine { function, reversed }
}

/// Concept order F1 of a family; F2 is the reverse.
fn family_f1(family: &str) -> (Vec<ConceptFunction>, f64, usize) {
    use SineFunction::*;
    match family {
        "Sine" => (vec![sine(Sine1, false), sine(Sine1, true), sine(Sine2, false), sine(Sine2, true)], 0.0, 20),
        "RT" => (RT_SEEDS.iter().map(|&seed| ConceptFunction::RandomTree { seed }).collect(), 0.0, 20),
        "Mixed" => ([0, 1, 0, 1].iter().map(|&function| ConceptFunction::Mixed { function }).collect(), 0.0, 10),
        "Sea" => ((0..4).map(|function| ConceptFunction::Sea { function }).collect(), SEA_NOISE, 10),
        "Stagger" => ([0, 1, 2, 0].iter().map(|&function| ConceptFunction::Stagger { function }).collect(), 0.0, 10),
        _ => unreachable!("unknown family {family}"),
    }
}

pub const FAMILIES: [&str; 5] = ["Sine", "RT", "Mixed", "Sea", "Stagger"];

/// One suite dataset, e.g. `suite_spec("Sine", DriftKind::Abrupt, 1, seed)`.
pub fn suite_spec(family: &str, drift: DriftKind, order: u8, seed: u64) -> StreamSpec {
    let (mut concepts, noise, bins) = family_f1(family);
    if order == 2 {
        concepts.reverse();
    }
    let (tag, positions, width) = match drift {
        DriftKind::Abrupt => ("A", ABRUPT_POSITIONS.to_vec(), 0),
        DriftKind::Gradual => ("G", GRADUAL_POSITIONS.to_vec(), GRADUAL_WIDTH),
    };
    StreamSpec {
        name: format!("{family}_{tag}_F{order}"),
        concepts,
        drift,
        positions,
        width,
        length: SUITE_LENGTH,
        noise,
        seed,
        balance_classes: true,
        grid_bins: Some(bins),
    }
}

/// The 20 datasets: five families, abrupt and gradual, two concept orders.
pub fn paper_suite(seed: u64) -> Vec<StreamSpec> {
    let mut out = Vec::with_capacity(20);
    for family in FAMILIES {
        for drift in [DriftKind::Abrupt, DriftKind::Gradual] {
            for order in [1, 2] {
                out.push(suite_spec(family, drift, order, seed));
            }
        }
    }
    out
}
