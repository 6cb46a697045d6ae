//! End-to-end acceptance run. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits nonzero if any fails. Takes about fifteen minutes on
//! one core.

mod common;

use std::process::Command;
use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_lab::analysis::{
    binary_entropy, count_failures, fit_points, locate_loss_cutoff, locate_threshold,
    percolation_threshold, FitOptions, FitPoint, LocateConfig, Located, ScalingFit,
};
use surface_lab::decoder::{matching_weight, mwpm, DefectGraph, SurfaceCode};
use surface_lab::lattice::find_isomorphism;
use surface_lab::loss::DamagedCode;
use surface_lab::noise::{sample, ErrorPattern, NoiseParams};
use surface_lab::stabilizer::{syndrome, ErrorType};
use surface_lab::{Lattice, LatticeKind};

const THRESHOLD_TOL: f64 = 0.012;
const PERCOLATION_TOL: f64 = 0.008;
const KESTEN_RANGE: (f64, f64) = (0.99, 1.01);
const GV_TOL: f64 = 0.06;
const NU_RANGE: (f64, f64) = (1.2, 1.8);
/// Allowed increase between consecutive loss rates, about two standard
/// errors of a lossy threshold fit at the trial counts below.
const MONOTONE_SLACK: f64 = 0.003;
const CUTOFF_TOL: f64 = 0.02;
const FIT_RECOVERY_TOL: f64 = 1e-6;

const LOSS_GRID: [f64; 3] = [0.1, 0.2, 0.3];
const SEED: u64 = 1;

/// Reference (Z, X) error thresholds.
fn reference_threshold(kind: &LatticeKind) -> (f64, f64) {
    match kind {
        LatticeKind::Square => (0.103, 0.103),
        LatticeKind::Kagome => (0.116, 0.095),
        LatticeKind::Hexagonal => (0.159, 0.065),
        LatticeKind::Trihexa => (0.205, 0.041),
        _ => unreachable!(),
    }
}

/// Reference (primal, dual) bond-percolation thresholds.
fn reference_percolation(kind: &LatticeKind) -> (f64, f64) {
    match kind {
        LatticeKind::Square => (0.5, 0.5),
        LatticeKind::Kagome => (0.524, 0.476),
        LatticeKind::Hexagonal => (0.653, 0.347),
        LatticeKind::Trihexa => (0.740, 0.260),
        _ => unreachable!(),
    }
}

/// Sizes giving comparable code distances and edge counts per lattice.
fn sizes(kind: &LatticeKind, ty: ErrorType) -> Vec<usize> {
    match (kind, ty) {
        (LatticeKind::Square, _) => vec![8, 12, 16],
        (LatticeKind::Kagome, _) => vec![4, 6, 8],
        (LatticeKind::Hexagonal, ErrorType::Z) => vec![4, 6, 8],
        (LatticeKind::Hexagonal, ErrorType::X) => vec![8, 12, 16],
        (LatticeKind::Trihexa, ErrorType::Z) => vec![2, 3, 4],
        (LatticeKind::Trihexa, ErrorType::X) => vec![8, 12, 16],
        _ => unreachable!(),
    }
}

fn lossless_config(kind: &LatticeKind, ty: ErrorType) -> LocateConfig {
    LocateConfig {
        sizes: sizes(kind, ty),
        trials: 6000,
        fine_span: 0.12,
        seed: SEED,
        ..LocateConfig::default()
    }
}

fn lossy_config(kind: &LatticeKind, ty: ErrorType) -> LocateConfig {
    LocateConfig {
        sizes: sizes(kind, ty),
        trials: 1500,
        seed: SEED,
        ..LocateConfig::default()
    }
}

fn cutoff_config() -> LocateConfig {
    LocateConfig {
        sizes: vec![8, 12, 16],
        trials: 1000,
        fine_span: 0.06,
        fine_points: 9,
        coarse_max: 0.95,
        seed: SEED,
        ..LocateConfig::default()
    }
}

struct Verdicts {
    lines: Vec<(String, bool, String)>,
}

impl Verdicts {
    fn record(&mut self, id: &str, ok: bool, summary: String) {
        eprintln!("  -> {id} {}", if ok { "pass" } else { "fail" });
        self.lines.push((id.to_string(), ok, summary));
    }
}

fn ci_text(fit: &ScalingFit) -> String {
    fit.p_th_ci
        .map(|c| format!("[{:.4}, {:.4}]", c.lo, c.hi))
        .unwrap_or_else(|| "none".into())
}

type Thresholds = Vec<(LatticeKind, ErrorType, Result<ScalingFit, String>)>;

fn lossless_thresholds() -> Thresholds {
    let mut out = Vec::new();
    for kind in LatticeKind::BASE {
        for ty in [ErrorType::Z, ErrorType::X] {
            let start = Instant::now();
            let result = locate_threshold(&kind, ty, 0.0, &lossless_config(&kind, ty))
                .map_err(|e| e.to_string())
                .and_then(|l| match l {
                    Located::Threshold { fit, .. } => Ok(fit),
                    Located::Vanished { .. } => Err("threshold vanished at zero loss".into()),
                });
            match &result {
                Ok(f) => eprintln!(
                    "  {kind} {ty}: p_th={:.4} ci={} nu={:.3} sse={:.2e} ({:.0}s)",
                    f.p_th,
                    ci_text(f),
                    f.nu,
                    f.sse,
                    start.elapsed().as_secs_f64()
                ),
                Err(e) => eprintln!("  {kind} {ty}: error {e}"),
            }
            out.push((kind.clone(), ty, result));
        }
    }
    out
}

fn find<'a>(t: &'a Thresholds, kind: &LatticeKind, ty: ErrorType) -> Option<&'a ScalingFit> {
    t.iter()
        .find(|(k, y, _)| k == kind && *y == ty)
        .and_then(|(_, _, r)| r.as_ref().ok())
}

fn criterion_1(v: &mut Verdicts, t: &Thresholds) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, ty, result) in t {
        let (rz, rx) = reference_threshold(kind);
        let want = if *ty == ErrorType::Z { rz } else { rx };
        match result {
            Ok(f) => {
                let good = (f.p_th - want).abs() <= THRESHOLD_TOL;
                ok &= good;
                parts.push(format!("{kind}/{ty} {:.4} (ref {want})", f.p_th));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{kind}/{ty} error: {e}"));
            }
        }
    }
    v.record("C1", ok, format!("thresholds within ±{THRESHOLD_TOL}: {}", parts.join("; ")));
}

fn criterion_2(v: &mut Verdicts) -> Vec<(LatticeKind, f64, f64)> {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut estimates = Vec::new();
    for kind in LatticeKind::BASE {
        let start = Instant::now();
        let p = percolation_threshold(&kind, &[16, 32, 64], 1000, SEED).unwrap();
        let q = percolation_threshold(&kind.dual(), &[16, 32, 64], 1000, SEED).unwrap();
        let (rp, rq) = reference_percolation(&kind);
        let sum = p.p_c + q.p_c;
        let good = (p.p_c - rp).abs() <= PERCOLATION_TOL
            && (q.p_c - rq).abs() <= PERCOLATION_TOL
            && (KESTEN_RANGE.0..=KESTEN_RANGE.1).contains(&sum);
        eprintln!(
            "  {kind}: {:.4} dual {:.4} sum {sum:.4} ({:.0}s)",
            p.p_c,
            q.p_c,
            start.elapsed().as_secs_f64()
        );
        ok &= good;
        parts.push(format!("{kind} {:.4}/{:.4} sum {sum:.4}", p.p_c, q.p_c));
        estimates.push((kind, p.p_c, q.p_c));
    }
    v.record(
        "C2",
        ok,
        format!(
            "percolation within ±{PERCOLATION_TOL}, Kesten sums in [{}, {}]: {}",
            KESTEN_RANGE.0,
            KESTEN_RANGE.1,
            parts.join("; ")
        ),
    );
    estimates
}

fn criterion_3(v: &mut Verdicts, t: &Thresholds) {
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LatticeKind::BASE {
        match (find(t, &kind, ErrorType::Z), find(t, &kind, ErrorType::X)) {
            (Some(z), Some(x)) => {
                let r = 1.0 - binary_entropy(x.p_th) - binary_entropy(z.p_th);
                ok &= r.abs() <= GV_TOL;
                parts.push(format!("{kind} {r:+.4}"));
            }
            _ => {
                ok = false;
                parts.push(format!("{kind} missing fit"));
            }
        }
    }
    v.record("C3", ok, format!("|1 - h(pX) - h(pZ)| <= {GV_TOL}: {}", parts.join("; ")));
}

fn criterion_4(v: &mut Verdicts, t: &Thresholds) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, ty, result) in t {
        match result {
            Ok(f) => {
                ok &= (NU_RANGE.0..=NU_RANGE.1).contains(&f.nu);
                parts.push(format!("{kind}/{ty} {:.3}", f.nu));
            }
            Err(_) => {
                ok = false;
                parts.push(format!("{kind}/{ty} missing fit"));
            }
        }
    }
    v.record(
        "C4",
        ok,
        format!("nu in [{}, {}]: {}", NU_RANGE.0, NU_RANGE.1, parts.join("; ")),
    );
}

fn criterion_5(v: &mut Verdicts, t: &Thresholds) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (ty, increasing) in [(ErrorType::Z, true), (ErrorType::X, false)] {
        for pair in LatticeKind::BASE.windows(2) {
            let (Some(a), Some(b)) = (find(t, &pair[0], ty), find(t, &pair[1], ty)) else {
                ok = false;
                parts.push(format!("{ty} {}->{} missing fit", pair[0], pair[1]));
                continue;
            };
            let ordered = if increasing { b.p_th > a.p_th } else { b.p_th < a.p_th };
            let separated = match (a.p_th_ci, b.p_th_ci) {
                (Some(ca), Some(cb)) => !ca.overlaps(&cb),
                _ => false,
            };
            ok &= ordered && separated;
            parts.push(format!(
                "{ty} {}->{}: {} {}",
                pair[0],
                pair[1],
                if ordered { "ordered" } else { "NOT ordered" },
                if separated { "separated" } else { "OVERLAP" }
            ));
        }
    }
    v.record(
        "C5",
        ok,
        format!("pZ increasing, pX decreasing, disjoint CIs: {}", parts.join("; ")),
    );
}

fn criterion_6(v: &mut Verdicts, t: &Thresholds, percolation: &[(LatticeKind, f64, f64)]) {
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LatticeKind::BASE {
        for ty in [ErrorType::Z, ErrorType::X] {
            let start = Instant::now();
            let mut curve = vec![find(t, &kind, ty).map(|f| f.p_th)];
            for p_loss in LOSS_GRID {
                let r = locate_threshold(&kind, ty, p_loss, &lossy_config(&kind, ty));
                if let Err(e) = &r {
                    eprintln!("  {kind} {ty} p_loss={p_loss}: error {e}");
                }
                curve.push(r.ok().map(|l| l.threshold()));
            }
            let monotone = curve.iter().all(Option::is_some)
                && curve
                    .windows(2)
                    .all(|w| w[1].unwrap() <= w[0].unwrap() + MONOTONE_SLACK);

            let (_, primal, dual) = percolation.iter().find(|(k, ..)| *k == kind).unwrap();
            // Z errors are matched on the primal graph, X errors on the dual.
            let expected = if ty == ErrorType::Z { *primal } else { *dual };
            let cutoff = locate_loss_cutoff(&kind, ty, &cutoff_config());
            let cutoff_ok = matches!(&cutoff, Ok(c) if (c.cutoff - expected).abs() <= CUTOFF_TOL);
            ok &= monotone && cutoff_ok;

            let shown: Vec<String> = curve
                .iter()
                .map(|x| x.map_or("err".into(), |x| format!("{x:.4}")))
                .collect();
            let cut = cutoff.map_or_else(|e| format!("error {e}"), |c| format!("{:.4}", c.cutoff));
            eprintln!(
                "  {kind} {ty}: p_th {} cutoff {cut} vs {expected:.4} ({:.0}s)",
                shown.join(" "),
                start.elapsed().as_secs_f64()
            );
            parts.push(format!(
                "{kind}/{ty} [{}]{} cutoff {cut} vs {expected:.4}{}",
                shown.join(", "),
                if monotone { "" } else { " NOT monotone" },
                if cutoff_ok { "" } else { " OFF" }
            ));
        }
    }
    v.record(
        "C6",
        ok,
        format!(
            "p_th nonincreasing on p_loss {{0, 0.1, 0.2, 0.3}} (slack {MONOTONE_SLACK}), cutoff within ±{CUTOFF_TOL} of percolation: {}",
            parts.join("; ")
        ),
    );
}

fn error_pattern(ty: ErrorType, edges: Vec<usize>) -> ErrorPattern {
    match ty {
        ErrorType::X => ErrorPattern {
            x_errors: edges,
            ..Default::default()
        },
        ErrorType::Z => ErrorPattern {
            z_errors: edges,
            ..Default::default()
        },
    }
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a
        .iter()
        .filter(|x| b.binary_search(x).is_err())
        .chain(b.iter().filter(|x| a.binary_search(x).is_err()))
        .copied()
        .collect();
    v.sort_unstable();
    v
}

fn criterion_7(v: &mut Verdicts) {
    let mut failures: Vec<String> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut kinds: Vec<LatticeKind> = LatticeKind::BASE.to_vec();
    kinds.extend(LatticeKind::BASE.iter().map(LatticeKind::dual));
    kinds.extend((0..=3).map(LatticeKind::Recursive));

    for kind in &kinds {
        for size in 2..=4 {
            let lat = Lattice::build(kind.clone(), size).unwrap();
            if lat.euler_characteristic() != 0 {
                failures.push(format!("euler {kind} L={size}"));
            }
        }
        let lat = Lattice::build(kind.clone(), 3).unwrap();
        if find_isomorphism(&lat.dual().dual(), &lat).is_none() {
            failures.push(format!("dual involution {kind}"));
        }
    }

    let lattices: Vec<Lattice> = kinds
        .iter()
        .map(|k| Lattice::build(k.clone(), 4).unwrap())
        .collect();
    for i in 0..1000 {
        let lat = &lattices[i % lattices.len()];
        let ty = if i % 2 == 0 { ErrorType::Z } else { ErrorType::X };
        let mut draw = || -> Vec<usize> {
            let p = rng.random_range(0.0..0.5);
            (0..lat.num_edges()).filter(|_| rng.random_bool(p)).collect()
        };
        let (a, b) = (draw(), draw());
        let sa = syndrome(lat, &error_pattern(ty, a.clone()), ty).unwrap().defects;
        let sb = syndrome(lat, &error_pattern(ty, b.clone()), ty).unwrap().defects;
        let sab = syndrome(lat, &error_pattern(ty, xor(&a, &b)), ty).unwrap().defects;
        if sab != xor(&sa, &sb) || sa.len() % 2 != 0 {
            failures.push(format!("syndrome linearity/parity pattern {i}"));
        }
    }

    let small: Vec<Lattice> = LatticeKind::BASE
        .iter()
        .map(|k| Lattice::build(k.clone(), 4).unwrap())
        .collect();
    let oracles: Vec<_> = small.iter().map(common::primal_distances).collect();
    let codes: Vec<SurfaceCode> = small.iter().cloned().map(SurfaceCode::new).collect();
    for i in 0..500 {
        let w = i % small.len();
        let count = 2 * rng.random_range(1..=5usize);
        let mut defects = sample_indices(&mut rng, small[w].num_vertices(), count).into_vec();
        defects.sort_unstable();
        let g = DefectGraph::build(codes[w].graph(ErrorType::Z), &defects);
        let weight = matching_weight(&g, &mwpm(&g).unwrap());
        if weight != common::brute_force_matching(&oracles[w], &defects) {
            failures.push(format!("matching instance {i}"));
        }
    }

    for (w, code) in codes.iter().enumerate() {
        let damaged = DamagedCode::new(code, &[]).unwrap();
        for t in 0..250 {
            let params = NoiseParams {
                p_x: 0.08,
                p_z: 0.08,
                p_loss: 0.0,
                seed: SEED,
                trial_index: t,
            };
            let pat = sample(code.lattice(), &params).unwrap();
            for (ty, e) in [(ErrorType::X, &pat.x_errors), (ErrorType::Z, &pat.z_errors)] {
                if code.decode(e, ty).unwrap() != damaged.decode(e, ty).unwrap() {
                    failures.push(format!("lossless/damaged lattice {w} trial {t}"));
                }
            }
        }
        for ty in [ErrorType::X, ErrorType::Z] {
            if count_failures(code, ty, 0.0, 0.0, SEED, 1000).unwrap() != 0 {
                failures.push(format!("failures at p=0 lattice {w} {ty}"));
            }
        }
    }

    let (a, b, nu, x_th) = (0.1, 3.0, 1.5, 0.103);
    let mut points = Vec::new();
    for size in [8.0, 12.0, 16.0, 24.0] {
        for k in 0..11 {
            let x = 0.08 + 0.005 * k as f64;
            points.push(FitPoint {
                size,
                x,
                rate: a + b * (x - x_th) * f64::powf(size, 1.0 / nu),
                trials: 10_000,
            });
        }
    }
    let opts = FitOptions {
        bootstrap: 0,
        ..FitOptions::default()
    };
    match fit_points(&points, &opts) {
        Ok(f) => {
            for (name, got, want) in [("A", f.a, a), ("B", f.b, b), ("nu", f.nu, nu), ("p_th", f.p_th, x_th)] {
                if (got - want).abs() > FIT_RECOVERY_TOL {
                    failures.push(format!("fit {name} {got} vs {want}"));
                }
            }
        }
        Err(e) => failures.push(format!("fit error {e}")),
    }

    let ok = failures.is_empty();
    v.record(
        "C7",
        ok,
        if ok {
            "euler, dual involution, syndrome linearity, matching oracle, lossless equality, p=0, fit recovery".into()
        } else {
            format!("{} violations: {}", failures.len(), failures.iter().take(10).cloned().collect::<Vec<_>>().join("; "))
        },
    );
}

fn criterion_8(v: &mut Verdicts) {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 2] = [
        &["--lattice", "kagome", "--sizes", "4,6", "--error-type", "X", "--p-grid", "0.08:0.11:0.01", "--trials", "500", "--seed", "13"],
        &["--lattice", "hexagonal", "--sizes", "4", "--error-type", "Z", "--p-grid", "0.05,0.1", "--loss-grid", "0,0.2", "--trials", "400", "--seed", "21"],
    ];
    let mut ok = true;
    for (c, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for jobs in ["1", "2", "4"] {
            let path = dir.path().join(format!("{c}-{jobs}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_surface-lab"))
                .arg("simulate")
                .args(*args)
                .args(["--jobs", jobs, "--output", path.to_str().unwrap()])
                .env("RUST_LOG", "warn")
                .status()
                .unwrap();
            ok &= status.success();
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        ok &= !outputs[0].is_empty() && outputs.iter().all(|o| *o == outputs[0]);
    }
    v.record("C8", ok, "simulate CSV byte-identical for --jobs 1, 2, 4".into());
}

fn main() {
    let start = Instant::now();
    let mut v = Verdicts { lines: Vec::new() };
    eprintln!("property suites");
    criterion_7(&mut v);
    eprintln!("determinism");
    criterion_8(&mut v);
    eprintln!("percolation thresholds");
    let percolation = criterion_2(&mut v);
    eprintln!("lossless error thresholds");
    let thresholds = lossless_thresholds();
    criterion_1(&mut v, &thresholds);
    criterion_3(&mut v, &thresholds);
    criterion_4(&mut v, &thresholds);
    criterion_5(&mut v, &thresholds);
    eprintln!("loss curves");
    criterion_6(&mut v, &thresholds, &percolation);

    v.lines.sort_by(|a, b| a.0.cmp(&b.0));
    println!("acceptance ({:.0}s)", start.elapsed().as_secs_f64());
    for (id, ok, summary) in &v.lines {
        println!("[{}] {id} {summary}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed = v.lines.iter().filter(|l| !l.1).count();
    println!("{} passed, {failed} failed", v.lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
