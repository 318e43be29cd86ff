//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any criterion fails.
//!
//! Run alone with `cargo test -p tiled-adapt --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiled_adapt::{
    adapt_run, adapt_trials, build_xxz, certify_tiled_completeness, energy_and_gradient,
    exact_ground_energy, full_pauli_pool, harvest_tiles, lie_closure, prepare_neel, sector_basis,
    tile_pool_1d, AdaptConfig, AnsatzEntry, LatticeSpec, NeelSpec, PauliString, RunRecord,
    SymmetrySector, TieBreak, TileSet, TileShape,
};

const TRIALS: usize = 50;
const EXTRA_TRIALS: usize = 25;

enum Verdict {
    Pass(String),
    Flag(String),
    Fail(String),
}

fn set_of(text: &str) -> BTreeSet<PauliString> {
    parse_all(text).into_iter().collect()
}

fn union(records: &[RunRecord]) -> BTreeSet<PauliString> {
    records.iter().flat_map(|r| r.chosen_operators()).collect()
}

fn show(set: &BTreeSet<PauliString>) -> String {
    set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Trials on the full Pauli pool of a small lattice.
fn harvest_trials(spec: &LatticeSpec, n_trials: usize) -> Vec<RunRecord> {
    let h = build_xxz(spec).unwrap();
    let pool = full_pauli_pool(spec.n_qubits()).unwrap();
    let neel = prepare_neel(&NeelSpec::new(spec.geometry)).unwrap();
    let mut records = adapt_trials(&h, &pool, &neel, &AdaptConfig::default(), n_trials).unwrap();
    for r in &mut records {
        r.lattice = Some(*spec);
    }
    records
}

/// Harvest check shared by the 1D and 2D criteria: every trial converges in
/// an allowed number of steps, the union over the first `TRIALS` trials is
/// the expected set, and `EXTRA_TRIALS` further trials add nothing.
fn harvest_criterion(spec: &LatticeSpec, steps: &[usize], expected: &str) -> (Verdict, TileSet) {
    let records = harvest_trials(spec, TRIALS + EXTRA_TRIALS);
    let tiles = harvest_tiles(&records[..TRIALS]).unwrap();
    let first = union(&records[..TRIALS]);
    let all = union(&records);
    let expected = set_of(expected);
    let step_counts: BTreeSet<usize> = records.iter().map(|r| r.steps.len()).collect();
    let ok_steps = records.iter().all(|r| r.converged && steps.contains(&r.steps.len()));
    let detail = format!(
        "{} trials, steps {:?}, harvested {} operators",
        records.len(),
        step_counts,
        first.len()
    );
    let verdict = if !ok_steps {
        Verdict::Fail(format!("{detail}; step counts outside {steps:?}"))
    } else if first != expected {
        Verdict::Fail(format!(
            "{detail}; extra [{}] missing [{}]",
            show(&first.difference(&expected).copied().collect()),
            show(&expected.difference(&first).copied().collect())
        ))
    } else if all != first {
        Verdict::Fail(format!("{detail}; not stable under {EXTRA_TRIALS} more trials"))
    } else {
        Verdict::Pass(format!("{detail}, equal to the reference set and stable"))
    };
    (verdict, tiles)
}

struct Cell {
    l: usize,
    j_z: f64,
    record: RunRecord,
    exact: f64,
}

fn tiled_solve(tiles: &TileSet, l: usize, j_z: f64, cfg: &AdaptConfig) -> Cell {
    let spec = LatticeSpec::chain(l, j_z).unwrap();
    let h = build_xxz(&spec).unwrap();
    let pool = tile_pool_1d(tiles, l).unwrap();
    let neel = prepare_neel(&NeelSpec::new(spec.geometry)).unwrap();
    let mut record = adapt_run(&h, &pool, &neel, cfg).unwrap();
    let exact = exact_ground_energy(&h, 1e-10).unwrap();
    record.lattice = Some(spec);
    record.set_exact_energy(exact);
    Cell { l, j_z, record, exact }
}

fn criterion_4(cells: &[Cell]) -> Verdict {
    let worst = cells
        .iter()
        .max_by(|a, b| {
            let (ea, eb) = (a.record.relative_error.unwrap(), b.record.relative_error.unwrap());
            ea.total_cmp(&eb)
        })
        .unwrap();
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !(c.record.converged && c.record.relative_error.unwrap() < 6e-4))
        .map(|c| format!("L={} J_z={}", c.l, c.j_z))
        .collect();
    let detail = format!(
        "{} cells, worst relative error {:.3e} at L={} J_z={}",
        cells.len(),
        worst.record.relative_error.unwrap(),
        worst.l,
        worst.j_z
    );
    if bad.is_empty() {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; failing cells {}", bad.join(", ")))
    }
}

fn criterion_5(cells: &[Cell]) -> Verdict {
    let cell = |j_z: f64| cells.iter().find(|c| c.l == 12 && c.j_z == j_z).unwrap();
    let (half, one) = (cell(0.5), cell(1.0));
    let digits = (1.0 / (half.record.final_energy - half.exact).abs()).log10();
    let (p_half, p_one) = (half.record.n_parameters(), one.record.n_parameters());
    let detail = format!(
        "J_z=0.5: {p_half} parameters, log10(1/|E-E0|) = {digits:.2} (reference 132); \
         J_z=1.0: {p_one} parameters (reference 122)"
    );
    if !(half.record.converged && digits >= 1.5 && p_half <= 150) || !one.record.converged {
        Verdict::Fail(detail)
    } else if !(100..=145).contains(&p_one) {
        Verdict::Flag(format!("{detail}; J_z=1.0 count outside [100, 145]"))
    } else {
        Verdict::Pass(detail)
    }
}

fn criterion_6(tiles: &TileSet) -> Verdict {
    let expected = set_of("XYIIIIII IIXYIIII IIIIXYII IIIIIIXY");
    let cfg = AdaptConfig {
        tie_break: TieBreak::Lexicographic,
        ..Default::default()
    };
    let mut lines = Vec::new();
    let mut ok = true;
    // The angle sign depends on which sublattice starts up; both orientations
    // are run and the spin-flipped one carries the −π/4 convention.
    for up_first in [true, false] {
        let spec = LatticeSpec::chain(8, 1.0).unwrap();
        let h = build_xxz(&spec).unwrap();
        let pool = tile_pool_1d(tiles, 8).unwrap();
        let neel = prepare_neel(&NeelSpec {
            up_first,
            ..NeelSpec::new(spec.geometry)
        })
        .unwrap();
        let rec = adapt_run(&h, &pool, &neel, &cfg).unwrap();
        let first: BTreeSet<PauliString> = rec.steps.iter().take(4).map(|s| s.operator).collect();
        let target = if up_first { FRAC_PI_4 } else { -FRAC_PI_4 };
        let thetas = &rec.steps.last().unwrap().thetas[..4];
        let angle_err = thetas
            .iter()
            .map(|t| ((t - target).rem_euclid(PI) + PI / 2.0).rem_euclid(PI) - PI / 2.0)
            .fold(0.0f64, |m, d| m.max(d.abs()));
        let g0 = rec.steps[0].max_abs_gradient;
        let spread = rec.steps[..4]
            .iter()
            .fold(0.0f64, |m, s| m.max((s.max_abs_gradient - g0).abs()));
        ok &= first == expected && angle_err < 0.05 && spread < 1e-6 && rec.steps.len() >= 4;
        lines.push(format!(
            "{}: first four {{{}}}, |θ − ({:+.4})| ≤ {:.1e}, max|g| spread {:.1e}",
            if up_first { "↑↓…" } else { "↓↑…" },
            show(&first),
            target,
            angle_err,
            spread
        ));
    }
    let detail = lines.join("; ");
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn criterion_7() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, tile, n) in [("8-op", TILE_8, 3), ("12-op", TILE_12, 3), ("32-op", TILE_32, 4)] {
        let closure = lie_closure(&parse_all(tile)).unwrap();
        let sector: BTreeSet<PauliString> =
            sector_basis(n, &SymmetrySector::z_parity_odd_y(n).unwrap()).unwrap().into_iter().collect();
        ok &= closure == sector;
        notes.push(format!("{name} closes to {}/{}", closure.len(), sector.len()));
    }
    let tiles = TileSet::new(TileShape::Chain { len: 3 }, parse_all(TILE_12)).unwrap();
    for l2 in 4..=6 {
        let report =
            certify_tiled_completeness(&tiles, l2, &SymmetrySector::z_parity_odd_y(l2).unwrap()).unwrap();
        ok &= report.complete;
        notes.push(format!(
            "L2={l2} {} ({}/{})",
            if report.complete { "complete" } else { "incomplete" },
            report.closure_size,
            report.sector_size
        ));
    }
    let detail = notes.join(", ");
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

/// Central difference of `f` at 0 with step 1e-5.
fn central(f: impl Fn(f64) -> f64) -> f64 {
    let h = 1e-5;
    (f(h) - f(-h)) / (2.0 * h)
}

fn relative(a: f64, b: f64) -> f64 {
    // Exactly vanishing derivatives are compared on an absolute 1e-8 scale.
    (a - b).abs() / b.abs().max(1e-2)
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut notes = Vec::new();
    let mut ok = true;

    // (a) Finite-difference agreement.
    let mut worst = 0.0f64;
    for instance in 0..200 {
        let n = 1 + instance % 6;
        let h = random_sum(&mut rng, n, 2 * n + 2);
        let psi = random_state(&mut rng, n);
        let pool: Vec<PauliString> = (0..4).map(|_| random_nonidentity(&mut rng, n)).collect();
        let grads = psi.pool_gradients(&h, &pool).unwrap();
        for (a, g) in pool.iter().zip(&grads) {
            let fd = central(|t| psi.apply_rotation(a, t).unwrap().expectation(&h).unwrap());
            worst = worst.max(relative(*g, fd));
        }
        let ansatz: Vec<AnsatzEntry> = (0..4)
            .map(|_| AnsatzEntry {
                generator: random_nonidentity(&mut rng, n),
                theta: rng.random_range(-PI..PI),
            })
            .collect();
        let (_, grad) = energy_and_gradient(&psi, &ansatz, &h).unwrap();
        for j in 0..ansatz.len() {
            let fd = central(|t| {
                let mut shifted = ansatz.clone();
                shifted[j].theta += t;
                energy_and_gradient(&psi, &shifted, &h).unwrap().0
            });
            worst = worst.max(relative(grad[j], fd));
        }
    }
    ok &= worst < 1e-6;
    notes.push(format!("(a) worst FD rel {worst:.1e}"));

    // (b) Norm drift.
    let mut drift = 0.0f64;
    for n in [2, 5, 8, 10] {
        let mut psi = random_state(&mut rng, n);
        for _ in 0..100 {
            let p = random_nonidentity(&mut rng, n);
            psi.rotate(&p, rng.random_range(-PI..PI)).unwrap();
        }
        drift = drift.max((psi.norm() - 1.0).abs());
    }
    ok &= drift < 1e-9;
    notes.push(format!("(b) drift {drift:.1e}"));

    // (c) Ground energies against dense diagonalization.
    let mut gap = 0.0f64;
    for n in 1..=6 {
        for k in 0..4 {
            let h = if k == 0 && n >= 2 {
                build_xxz(&LatticeSpec::chain(n, 0.25 * n as f64).unwrap()).unwrap()
            } else {
                random_sum(&mut rng, n, 3 * n)
            };
            let dense_e = nalgebra::SymmetricEigen::new(dense_sum(&h)).eigenvalues.min();
            gap = gap.max((exact_ground_energy(&h, 1e-10).unwrap() - dense_e).abs());
        }
    }
    ok &= gap < 1e-9;
    notes.push(format!("(c) |ΔE0| {gap:.1e}"));

    // (d) Even-Y generators on real references.
    let mut even_max = 0.0f64;
    let mut even_chosen = 0;
    for n in 2..=4 {
        let pool = full_pauli_pool(n).unwrap();
        let h = build_xxz(&LatticeSpec::chain(n, rng.random_range(0.0..2.0)).unwrap()).unwrap();
        let psi = random_real_state(&mut rng, n);
        let grads = psi.pool_gradients(&h, &pool.operators).unwrap();
        for (p, g) in pool.operators.iter().zip(grads) {
            if p.y_count() % 2 == 0 {
                even_max = even_max.max(g.abs());
            }
        }
        let neel = prepare_neel(&NeelSpec::new(tiled_adapt::Geometry::Chain { len: n })).unwrap();
        let rec = adapt_run(&h, &pool, &neel, &AdaptConfig::default()).unwrap();
        even_chosen += rec.steps.iter().filter(|s| s.operator.y_count() % 2 == 0).count();
    }
    ok &= even_max <= 1e-12 && even_chosen == 0;
    notes.push(format!("(d) even-Y max|g| {even_max:.1e}, selected {even_chosen}"));

    // (e) Bit-identical records under a fixed seed.
    let spec = LatticeSpec::grid(2, 2, 1.0).unwrap();
    let h = build_xxz(&spec).unwrap();
    let pool = full_pauli_pool(4).unwrap();
    let neel = prepare_neel(&NeelSpec::new(spec.geometry)).unwrap();
    let cfg = AdaptConfig { seed: 2024, ..Default::default() };
    let a = adapt_run(&h, &pool, &neel, &cfg).unwrap().to_json_without_timing();
    let b = adapt_run(&h, &pool, &neel, &cfg).unwrap().to_json_without_timing();
    ok &= a == b;
    notes.push(format!("(e) identical JSON: {}", a == b));

    let detail = notes.join(", ");
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn main() {
    let mut failures = 0;
    let mut report = |id: usize, started: Instant, v: Verdict| {
        let secs = started.elapsed().as_secs_f64();
        let (tag, detail) = match v {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Flag(d) => ("FLAG", d),
            Verdict::Fail(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id}: {tag} [{secs:.1}s] {detail}");
    };

    let t = Instant::now();
    let (v, tiles_half) = harvest_criterion(&LatticeSpec::chain(3, 0.5).unwrap(), &[3], TILE_8);
    report(1, t, v);

    let t = Instant::now();
    let (v, _) = harvest_criterion(&LatticeSpec::chain(3, 1.5).unwrap(), &[3], TILE_12);
    report(2, t, v);

    let t = Instant::now();
    let (v, _) = harvest_criterion(&LatticeSpec::grid(2, 2, 1.0).unwrap(), &[5, 6], TILE_32);
    report(3, t, v);

    // Tiled pools use tiles harvested at the J_z being solved.
    let t = Instant::now();
    let tiles_one = harvest_tiles(&harvest_trials(&LatticeSpec::chain(3, 1.0).unwrap(), TRIALS)).unwrap();
    let cfg = AdaptConfig::default();
    let mut cells = Vec::new();
    for (j_z, tiles) in [(0.5, &tiles_half), (1.0, &tiles_one)] {
        for l in 4..=12 {
            cells.push(tiled_solve(tiles, l, j_z, &cfg));
        }
    }
    report(4, t, criterion_4(&cells));

    let t = Instant::now();
    report(5, t, criterion_5(&cells));

    let t = Instant::now();
    report(6, t, criterion_6(&tiles_one));

    let t = Instant::now();
    report(7, t, criterion_7());

    let t = Instant::now();
    report(8, t, criterion_8());

    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
