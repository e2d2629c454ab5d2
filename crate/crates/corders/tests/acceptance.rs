//! Acceptance gate: ten end-to-end criteria, run in order, one printed
//! pass/fail line each.  Run with `--nocapture` to see the per-criterion
//! lines; any failure panics at the end with the full list.
//!
//! These are deliberately exhaustive (ball-3 scans, 50–100 randomized
//! trials) and rely on the optimized test profile; expect minutes, not
//! seconds, for the whole gate.

use corders::circle::{rotation_number, CoverPoint, RotationNumber};
use corders::extensions::{
    chain_report, cofinality_check, ext_compare, standard_klift_realization, ExtElement,
};
use corders::freegroup::{ball, commutator_product, Alphabet, ReducedWord};
use corders::harness::{
    find_divergence_pair, run_basepoint_walk, run_singleton_neighborhood, run_stability,
    safe_margin,
};
use corders::orders::{
    check_cocycle, compare_on_ball, conjugate, midpoint_embed, order_from_action,
    unit_circle_ord, OrderTable,
};
use corders::pingpong::{
    gap_orbit_check, klift, lift_fixed_points, preset_schottky, preset_three_boundary,
    realize_moebius, realize_pl, PingPongConfig,
};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// AC-1: materialized ball-3 tables for the shipped configurations satisfy
/// degeneracy, antisymmetry, the cocycle identity, and left invariance,
/// exhaustively and exactly.
fn ac1() -> Outcome {
    let configs: Vec<(&str, PingPongConfig)> = vec![
        ("schottky1", preset_schottky(1)),
        ("schottky2", preset_schottky(2)),
        ("three_boundary", preset_three_boundary()),
        ("klift_schottky1_2", klift(&preset_schottky(1), 2).map_err(s)?),
        ("klift_schottky1_3", klift(&preset_schottky(1), 3).map_err(s)?),
    ];
    let mut sizes = Vec::new();
    for (name, cfg) in &configs {
        let t = OrderTable::materialize(cfg, 3).map_err(s)?;
        let report = check_cocycle(&t);
        if !report.passed() {
            return Err(format!("{name}: {report}"));
        }
        sizes.push(format!("{name} ({} words)", t.len()));
    }
    Ok(format!("ball-3 cocycle axioms hold for {}", sizes.join(", ")))
}

/// AC-2: the symbolic evaluator, the Möbius realization, and the PL
/// realization induce the same circular order on all ball-3 triples of
/// schottky1.
fn ac2() -> Outcome {
    let cfg = preset_schottky(1);
    let moebius = realize_moebius(&cfg).map_err(s)?;
    let pl = realize_pl(&cfg).map_err(s)?;
    for (name, action) in [("Moebius", &moebius), ("PL", &pl)] {
        let oracle = order_from_action(cfg.alphabet(), |u: &ReducedWord| {
            Ok(action.orbit_point(u))
        });
        if let Some(witness) = compare_on_ball(&cfg, &oracle, 3).map_err(s)? {
            return Err(format!("symbolic vs {name} differ: {witness:?}"));
        }
    }
    Ok("symbolic = Moebius = PL on all 53^3 ball-3 triples".into())
}

/// AC-3: for k in {2, 3}, the combinatorial k-lift order equals the exact
/// fixed-point-lift orbit order on all ball-3 triples, and the lifted action
/// commutes with the deck rotation on all ball-2 orbit points.
fn ac3() -> Outcome {
    let cfg = preset_schottky(1);
    let action = realize_moebius(&cfg).map_err(s)?;
    for k in [2u32, 3] {
        let lifted_cfg = klift(&cfg, k).map_err(s)?;
        let lifted = lift_fixed_points(&cfg, &action, k).map_err(s)?;
        if let Some(witness) = compare_on_ball(&lifted_cfg, &lifted, 3).map_err(s)? {
            return Err(format!("k = {k}: klift vs exact lift differ: {witness:?}"));
        }
        let x0 = action.basepoint().clone();
        for u in ball(f2(), 2) {
            let p0 = lifted
                .line_point(&u, &CoverPoint::new(x0.clone(), 0))
                .map_err(s)?;
            for shift in [1i64, -1, 2] {
                let ps = lifted
                    .line_point(&u, &CoverPoint::new(x0.clone(), shift))
                    .map_err(s)?;
                if ps.base != p0.base || ps.sheet != p0.sheet + shift {
                    return Err(format!("k = {k}: deck commutation fails at {u}"));
                }
            }
        }
    }
    Ok("klift = exact lifted orbit on ball 3; deck commutation on ball 2 (k = 2, 3)".into())
}

/// AC-4: certified rotation number of the lifted commutator product equals
/// 1/k for rank 2 (k in {2, 3, 5}) and 3/k mod 1 for rank 4 (k in {4, 5}).
fn ac4() -> Outcome {
    let mut checked = Vec::new();
    for (n, k, p) in [(1u32, 2u32, 1i64), (1, 3, 1), (1, 5, 1), (2, 4, 3), (2, 5, 3)] {
        let r = standard_klift_realization(n, k).map_err(s)?;
        let word = commutator_product(r.base().alphabet()).map_err(s)?;
        let f = r.word_self_map(&word);
        let rot = rotation_number(&f, r.base().basepoint(), 64, &r.sample_points())
            .map_err(s)?
            .mod_one();
        let want = RotationNumber::rational(p, i64::from(k));
        if rot != want {
            return Err(format!("n = {n}, k = {k}: rot = {rot}, expected {want}"));
        }
        checked.push(format!("{rot}"));
    }
    Ok(format!("rot([a,b]...) = {}", checked.join(", ")))
}

/// AC-5: 50 random margin-bounded perturbations of the PL schottky1 action
/// leave the ball-3 order table identical.
fn ac5() -> Outcome {
    let cfg = preset_schottky(1);
    let action = realize_pl(&cfg).map_err(s)?;
    let margin = safe_margin(&action).ok_or("no finite gaps")?;
    let report = run_stability(&cfg, &margin, 0xAC05, 50, 3).map_err(s)?;
    if !report.passed() {
        return Err(format!(
            "{} of {} perturbed tables differ: {:?}",
            report.failures, 50, report.witnesses
        ));
    }
    Ok(format!(
        "50/50 perturbations (margin {margin}) leave the ball-3 table unchanged"
    ))
}

/// AC-6: 100 random PL actions constrained to the five-point cyclic
/// configuration induce the same ball-3 order; the unconstrained control
/// arm disagrees at least once.
fn ac6() -> Outcome {
    let report = run_singleton_neighborhood(0xAC06, 100, 3).map_err(s)?;
    if !report.passed() {
        return Err(format!(
            "{} of 100 constrained actions disagree: {:?}",
            report.failures, report.witnesses
        ));
    }
    let control = report.control.as_ref().ok_or("missing control arm")?;
    if control.disagreements == 0 {
        return Err("control arm never disagreed: experiment is vacuous".into());
    }
    Ok(format!(
        "100/100 constrained actions agree on ball 3; control arm disagreed {} times \
         (witness: {})",
        control.disagreements,
        control.witness.clone().unwrap_or_default()
    ))
}

/// AC-7: three_boundary has an orbit-free gap at depth 4, and two basepoints
/// exist whose induced orders agree on ball 2 but differ on ball 3.
fn ac7() -> Outcome {
    let cfg = preset_three_boundary();
    let action = realize_pl(&cfg).map_err(s)?;
    let gaps = gap_orbit_check(&cfg, &action, 4).map_err(s)?;
    if gaps.all_visited() {
        return Err("depth-4 orbit visited every gap".into());
    }
    let (p, q, witness) = find_divergence_pair(&action, 2, 3).map_err(s)?;
    let walk = run_basepoint_walk(&cfg, &action, &[p.clone(), q.clone()], 3).map_err(s)?;
    let line = walk.lines.first().cloned().unwrap_or_default();
    if !line.contains("first difference") {
        return Err(format!("walk saw no ball-3 difference for {p} vs {q}: {line}"));
    }
    Ok(format!(
        "unvisited gap at depth 4; basepoints {p} vs {q} agree on ball 2, differ on ball 3 \
         at {witness}"
    ))
}

/// AC-8: for every shipped configuration, the midpoint embedding of the
/// ball-2 table re-extracts the exact table.
fn ac8() -> Outcome {
    let configs: Vec<(&str, PingPongConfig)> = vec![
        ("schottky1", preset_schottky(1)),
        ("schottky2", preset_schottky(2)),
        ("three_boundary", preset_three_boundary()),
        ("klift_schottky1_2", klift(&preset_schottky(1), 2).map_err(s)?),
        ("klift_schottky1_3", klift(&preset_schottky(1), 3).map_err(s)?),
        ("klift_schottky2_6", klift(&preset_schottky(2), 6).map_err(s)?),
    ];
    for (name, cfg) in &configs {
        let t = OrderTable::materialize(cfg, 2).map_err(s)?;
        let coords = midpoint_embed(&t).map_err(s)?;
        let n = t.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if unit_circle_ord(&coords[i], &coords[j], &coords[k]) != t.value(i, j, k) {
                        return Err(format!("{name}: round-trip differs at ({i}, {j}, {k})"));
                    }
                }
            }
        }
    }
    Ok("midpoint embedding round-trips every shipped ball-2 table".into())
}

/// AC-9: the verified chains id < c < ... < c^{k-1} < z < c^k for
/// k in {2, 3, 5}, pairwise distinctness on (c^min, z), and cofinality
/// brackets for all four generators-with-inverses.
fn ac9() -> Outcome {
    for k in [2u32, 3, 5] {
        let report = chain_report(k).map_err(s)?;
        if !report.verified {
            return Err(format!("k = {k}: chain not verified"));
        }
    }
    let c = commutator_product(f2()).map_err(s)?;
    let z = ExtElement::z(f2());
    let ks = [2u32, 3, 5];
    for (i, &ka) in ks.iter().enumerate() {
        for &kb in &ks[i + 1..] {
            let m = i64::from(ka.min(kb));
            let cm = ExtElement::new(c.clone(), 0).pow(m).map_err(s)?;
            let ra = standard_klift_realization(1, ka).map_err(s)?;
            let rb = standard_klift_realization(1, kb).map_err(s)?;
            let va = ext_compare(&ra, &cm, &z).map_err(s)?;
            let vb = ext_compare(&rb, &cm, &z).map_err(s)?;
            if va != 1 || vb != -1 {
                return Err(format!(
                    "k = {ka} vs {kb}: (c^{m}, z) gave {va} and {vb}, expected +1 and -1"
                ));
            }
        }
    }
    let gens: Vec<ExtElement> = ["a", "A", "b", "B"]
        .iter()
        .map(|t| ExtElement::new(ReducedWord::parse(f2(), t).unwrap(), 0))
        .collect();
    for k in [2u32, 3, 5] {
        let r = standard_klift_realization(1, k).map_err(s)?;
        let brackets = cofinality_check(&r, &gens).map_err(s)?;
        if brackets.brackets.len() != 4 {
            return Err(format!("k = {k}: expected 4 cofinality brackets"));
        }
    }
    Ok("chains verified for k = 2, 3, 5; pairwise distinct on (c^min, z); \
        generators bracketed by powers of z"
        .into())
}

/// AC-10: conjugating the symbolic order by g equals reading the orbit order
/// from the moved basepoint rho(g)(x0), on ball-2 triples for every g in
/// ball 2.
fn ac10() -> Outcome {
    let cfg = preset_schottky(1);
    let action = realize_pl(&cfg).map_err(s)?;
    for g in ball(f2(), 2) {
        let moved_base = action.orbit_point(&g);
        let moved = order_from_action(cfg.alphabet(), |u: &ReducedWord| {
            Ok(action.apply_point(u, &moved_base))
        });
        let conj = conjugate(&cfg, g.clone());
        if let Some(witness) = compare_on_ball(&moved, &conj, 2).map_err(s)? {
            return Err(format!("g = {g}: {witness:?}"));
        }
    }
    Ok("conjugate(c, g) = orbit order from rho(g)(x0) for all 17 ball-2 translates".into())
}

#[test]
fn acceptance_gate() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
        ("AC-10", ac10),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("{name}: PASS — {detail}"),
            Err(detail) => {
                println!("{name}: FAIL — {detail}");
                failures.push(format!("{name}: {detail}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
}
