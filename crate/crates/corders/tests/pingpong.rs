//! Ping-pong configurations: validation, the symbolic evaluator, presets,
//! k-lifts, exact realizations, and gap reports.

use corders::circle::{CoverPoint, ProjectivePoint};
use corders::freegroup::{ball, commutator_product, Alphabet, Letter, ReducedWord};
use corders::orders::{check_cocycle, compare_on_ball, OrderTable};
use corders::pingpong::{
    certify_action, comp, eval_triple, gap_orbit_check, klift, klift_is_realization,
    lift_fixed_points, linear_part_generator, preset_by_name, preset_schottky,
    preset_three_boundary, realize_moebius, realize_pl, KliftVerdict, PingPongConfig,
    PingPongError, RealizedAction, Slot,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::HashSet;

fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(f2(), s).unwrap()
}

fn shipped_configs() -> Vec<(&'static str, PingPongConfig)> {
    vec![
        ("schottky1", preset_schottky(1)),
        ("schottky2", preset_schottky(2)),
        ("three_boundary", preset_three_boundary()),
        ("klift_schottky1_2", klift(&preset_schottky(1), 2).unwrap()),
        ("klift_schottky1_3", klift(&preset_schottky(1), 3).unwrap()),
        ("klift_schottky2_6", klift(&preset_schottky(2), 6).unwrap()),
    ]
}

#[test]
fn presets_validate() {
    for (name, cfg) in shipped_configs() {
        let report = cfg.validate();
        assert!(report.ok(), "{name}: {report}");
    }
}

#[test]
fn preset_by_name_matches_constructors() {
    assert_eq!(preset_by_name("schottky1"), Some(preset_schottky(1)));
    assert_eq!(preset_by_name("schottky2"), Some(preset_schottky(2)));
    assert_eq!(
        preset_by_name("three_boundary"),
        Some(preset_three_boundary())
    );
    assert_eq!(
        preset_by_name("klift_schottky1_3"),
        Some(klift(&preset_schottky(1), 3).unwrap())
    );
    assert_eq!(preset_by_name("nonsense"), None);
}

#[test]
fn preset_slot_sequences() {
    let letter = |c: char| Letter::from_char(c).unwrap();
    let slot = |c: char| Slot::Component {
        letter: letter(c),
        index: 0,
    };
    assert_eq!(
        preset_schottky(1).slots(),
        &[Slot::Basepoint, slot('a'), slot('b'), slot('A'), slot('B')]
    );
    assert_eq!(
        preset_three_boundary().slots(),
        &[Slot::Basepoint, slot('a'), slot('A'), slot('b'), slot('B')]
    );
    assert_eq!(preset_schottky(2).slots().len(), 9);
}

#[test]
fn comp_examples() {
    let cfg = preset_schottky(1);
    assert_eq!(comp(&cfg, &w("e")), Slot::Basepoint);
    let a = Slot::Component {
        letter: Letter::from_char('a').unwrap(),
        index: 0,
    };
    assert_eq!(comp(&cfg, &w("a")), a);
    assert_eq!(comp(&cfg, &w("ab")), a);
}

#[test]
fn eval_triple_examples() {
    let cfg = preset_schottky(1);
    assert_eq!(eval_triple(&cfg, &w("a"), &w("a"), &w("b")), 0);
    assert_eq!(eval_triple(&cfg, &w("aBAb"), &w("b"), &w("Ab")), 1);
    // The five proof points sit in the stated counterclockwise order:
    // x₀, ab⁻¹a⁻¹b(x₀), b(x₀), a⁻¹b(x₀), b⁻¹a⁻¹b(x₀).
    let chain: Vec<ReducedWord> = ["e", "aBAb", "b", "Ab", "BAb"].iter().map(|s| w(s)).collect();
    for i in 0..5 {
        let (u, v, x) = (&chain[i], &chain[(i + 1) % 5], &chain[(i + 2) % 5]);
        assert_eq!(eval_triple(&cfg, u, v, x), 1, "({u}, {v}, {x})");
    }
}

#[test]
fn preset_tables_pass_check_cocycle_ball2() {
    for (name, cfg) in shipped_configs() {
        let t = OrderTable::materialize(&cfg, 2).unwrap();
        let report = check_cocycle(&t);
        assert!(report.passed(), "{name}: {report}");
    }
}

/// A random valid connected-domain configuration: any cyclic arrangement of
/// the 2n component slots plus the marker is order-compatible when every
/// letter has a single component (all containment targets coincide).
fn random_connected_config(rng: &mut StdRng, rank: u32) -> PingPongConfig {
    let alphabet = Alphabet::new(rank).unwrap();
    let mut slots = vec![Slot::Basepoint];
    slots.extend(alphabet.letters().map(|letter| Slot::Component { letter, index: 0 }));
    slots.shuffle(rng);
    let containment = alphabet
        .letters()
        .map(|s| {
            slots
                .iter()
                .map(|slot| match slot {
                    Slot::Component { letter, .. } if *letter == s.inverse() => None,
                    _ => Some(0),
                })
                .collect()
        })
        .collect();
    PingPongConfig::new(alphabet, slots, containment)
}

#[test]
fn random_valid_configs_induce_circular_orders() {
    let mut rng = StdRng::seed_from_u64(42);
    for trial in 0..20 {
        let rank = 2 + (trial % 2) as u32;
        let cfg = random_connected_config(&mut rng, rank);
        assert!(cfg.validate().ok(), "trial {trial}");
        let t = OrderTable::materialize(&cfg, 2).unwrap();
        let report = check_cocycle(&t);
        assert!(report.passed(), "trial {trial}: {report}");
    }
}

// ---------------------------------------------------------------------------
// Serialization and constructed violations
// ---------------------------------------------------------------------------

#[test]
fn json_roundtrip_on_shipped_configs() {
    for (name, cfg) in shipped_configs() {
        let json = serde_json::to_string(&cfg).unwrap();
        let back: PingPongConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg, "{name}");
    }
}

fn mutate_schottky_klift(edit: impl FnOnce(&mut serde_json::Value)) -> PingPongConfig {
    let mut v = serde_json::to_value(klift(&preset_schottky(1), 2).unwrap()).unwrap();
    edit(&mut v);
    serde_json::from_value(v).unwrap()
}

#[test]
fn schema_violation_excluded_domain() {
    // Containment for `a` must not cover components of a⁻¹ (slot 3 = A[0]).
    let cfg = mutate_schottky_klift(|v| {
        v["containment"]["a"]["3"] = serde_json::json!(0);
    });
    let report = cfg.validate();
    assert!(!report.ok());
    assert!(report.to_string().contains('a'), "{report}");
}

#[test]
fn schema_violation_target_out_of_range() {
    let cfg = mutate_schottky_klift(|v| {
        v["containment"]["a"]["0"] = serde_json::json!(5);
    });
    assert!(!cfg.validate().ok());
}

#[test]
fn order_compatibility_violation_reversed_targets() {
    // Swap two of a's targets so the cyclic target sequence descends twice.
    let cfg = mutate_schottky_klift(|v| {
        v["containment"]["a"]["1"] = serde_json::json!(1);
        v["containment"]["a"]["2"] = serde_json::json!(0);
    });
    let report = cfg.validate();
    assert!(!report.ok(), "reversed targets must violate monotonicity");
}

// ---------------------------------------------------------------------------
// k-lifts
// ---------------------------------------------------------------------------

#[test]
fn klift_identity_at_k1() {
    let cfg = preset_schottky(1);
    assert_eq!(klift(&cfg, 1).unwrap(), cfg);
}

#[test]
fn klift_component_counts() {
    let lifted = klift(&preset_schottky(1), 2).unwrap();
    assert_eq!(lifted.slots().len(), 9);
    for letter in f2().letters() {
        assert_eq!(lifted.num_components(letter), 2);
    }
    assert!(lifted.validate().ok());
}

#[test]
fn klift_rejects_disconnected_domains() {
    let lifted = klift(&preset_schottky(1), 2).unwrap();
    assert!(matches!(
        klift(&lifted, 2),
        Err(PingPongError::DisconnectedDomains)
    ));
}

#[test]
fn klift_realization_criterion() {
    for k in 1..=7 {
        assert_eq!(klift_is_realization(1, k), KliftVerdict::Realization);
    }
    assert_eq!(klift_is_realization(2, 4), KliftVerdict::Realization);
    assert!(matches!(
        klift_is_realization(2, 6),
        KliftVerdict::CriterionFails { gcd: 3 }
    ));
}

#[test]
fn linear_part_generator_powers() {
    let c = commutator_product(f2()).unwrap();
    assert_eq!(linear_part_generator(f2(), 1).unwrap(), c);
    let cube = c.multiply(&c).unwrap().multiply(&c).unwrap();
    assert_eq!(linear_part_generator(f2(), 3).unwrap(), cube);
}

// ---------------------------------------------------------------------------
// Exact realizations
// ---------------------------------------------------------------------------

#[test]
fn moebius_realization_matches_symbolic_order_on_ball2() {
    let cfg = preset_schottky(1);
    let action = realize_moebius(&cfg).unwrap();
    // 17 distinct ball-2 orbit points (trivial stabilizer on the ball).
    let orbit: HashSet<ProjectivePoint> = ball(f2(), 2)
        .iter()
        .map(|u| action.orbit_point(u))
        .collect();
    assert_eq!(orbit.len(), 17);
    let table = orbit_order_table(&action, 2);
    assert_eq!(compare_on_ball(&cfg, &table, 2).unwrap(), None);
}

fn orbit_order_table(action: &RealizedAction, radius: u32) -> OrderTable {
    let oracle = corders::orders::order_from_action(action.alphabet(), |u: &ReducedWord| {
        Ok(action.orbit_point(u))
    });
    OrderTable::materialize(&oracle, radius).unwrap()
}

#[test]
fn pl_realizations_certify_and_match_symbolic_orders() {
    for (name, cfg) in shipped_configs() {
        let action = realize_pl(&cfg).unwrap();
        certify_action(&cfg, &action).unwrap_or_else(|e| panic!("{name}: {e}"));
        let table = orbit_order_table(&action, 2);
        assert_eq!(
            compare_on_ball(&cfg, &table, 2).unwrap(),
            None,
            "{name}: PL orbit order differs from the symbolic order"
        );
    }
}

#[test]
fn certification_rejects_basepoint_inside_an_arc() {
    let cfg = preset_schottky(1);
    let good = realize_pl(&cfg).unwrap();
    let moved = RealizedAction::new(
        cfg.alphabet(),
        (0..2).map(|g| good.generator(g).clone()).collect(),
        ProjectivePoint::frac(3, 2),
        good.arcs().to_vec(),
    );
    assert!(certify_action(&cfg, &moved).is_err());
}

#[test]
fn lifted_action_commutes_with_deck_on_ball2() {
    let cfg = preset_schottky(1);
    let action = realize_moebius(&cfg).unwrap();
    for k in [2u32, 3] {
        let lifted = lift_fixed_points(&cfg, &action, k).unwrap();
        let x0 = action.basepoint().clone();
        for u in ball(f2(), 2) {
            let p0 = lifted
                .line_point(&u, &CoverPoint::new(x0.clone(), 0))
                .unwrap();
            for s in [1i64, -1, 2] {
                let ps = lifted
                    .line_point(&u, &CoverPoint::new(x0.clone(), s))
                    .unwrap();
                assert_eq!(ps.base, p0.base);
                assert_eq!(ps.sheet, p0.sheet + s, "{u} at shift {s} (k = {k})");
            }
        }
    }
}

#[test]
fn klift_combinatorics_match_exact_lifted_orbit_on_ball2() {
    let cfg = preset_schottky(1);
    let action = realize_moebius(&cfg).unwrap();
    for k in [2u32, 3] {
        let lifted_cfg = klift(&cfg, k).unwrap();
        let lifted = lift_fixed_points(&cfg, &action, k).unwrap();
        assert_eq!(
            compare_on_ball(&lifted_cfg, &lifted, 2).unwrap(),
            None,
            "k = {k}"
        );
    }
}

// ---------------------------------------------------------------------------
// Gap reports
// ---------------------------------------------------------------------------

#[test]
fn gap_orbit_check_schottky_visits_every_gap() {
    let cfg = preset_schottky(1);
    let action = realize_pl(&cfg).unwrap();
    let report = gap_orbit_check(&cfg, &action, 4).unwrap();
    assert!(report.all_visited(), "{report}");
}

#[test]
fn gap_orbit_check_three_boundary_has_unvisited_gap() {
    let cfg = preset_three_boundary();
    let action = realize_pl(&cfg).unwrap();
    let report = gap_orbit_check(&cfg, &action, 4).unwrap();
    assert!(!report.all_visited());
    assert!(!report.unvisited().is_empty());
    // The report is explicit evidence, never a proof claim.
    let text = report.to_string();
    assert!(!text.to_lowercase().contains("proof"), "{text}");
    assert!(text.to_lowercase().contains("evidence"), "{text}");
}

#[test]
fn gap_orbit_check_non_coprime_klift_has_unvisited_gaps() {
    let cfg = klift(&preset_schottky(2), 6).unwrap();
    let action = realize_pl(&cfg).unwrap();
    let report = gap_orbit_check(&cfg, &action, 3).unwrap();
    assert!(!report.all_visited(), "{report}");
}
