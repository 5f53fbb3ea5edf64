//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use serde_json::Value;

use dieudonne::constructions::{build_from_blocks, build_simple_minimal, build_traverso_witness};
use dieudonne::formula_one::{find_cyclic_vector, qx_coefficients};
use dieudonne::harness::{verify_cutoff_upper, Verdict};
use dieudonne::newton::{bounds, np_compare, np_enumerate, np_of_module, Comparison, Slope};
use dieudonne::rng::SplitMix64;
use dieudonne::witt_ring::Valuation;
use dieudonne::{DieudonneModule, Matrix, NewtonPolygon, RingParams, WittRing};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn ring(p: u64, deg: usize, n: u32) -> Arc<WittRing> {
    Arc::new(WittRing::new(RingParams::new(p, deg, n)).expect("valid ring"))
}

fn coprime_pairs(max_r: u32) -> Vec<(u32, u32)> {
    (0..=max_r)
        .flat_map(|c| (0..=max_r - c).map(move |d| (c, d)))
        .filter(|&(c, d)| c + d >= 1 && c.gcd(&d) == 1)
        .collect()
}

fn c1_minimal_slopes() -> Result<String, String> {
    let start = Instant::now();
    let mut cases = 0;
    for p in [2u64, 3, 5] {
        for (c, d) in coprime_pairs(6) {
            let m = build_simple_minimal(&ring(p, 1, d + 3), c, d).map_err(|e| e.to_string())?;
            let np = np_of_module(&m).map_err(|e| e.to_string())?;
            let expected = NewtonPolygon::isoclinic(c + d, d).unwrap();
            ensure(np == expected, || {
                format!("H_{{{c},{d}}} at p = {p}: {np}, expected {expected}")
            })?;
            cases += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1), "all cases")?;
    Ok(format!("{cases} modules in {:?}", start.elapsed()))
}

fn c2_witness_sharpness() -> Result<String, String> {
    let mut cases = 0;
    for p in [2u64, 3] {
        for c in 1..=4u32 {
            for d in 1..=4u32 {
                if bounds(c, d).j < 2 {
                    continue;
                }
                let start = Instant::now();
                let j = bounds(c, d).j;
                let w = build_traverso_witness(&ring(p, 1, d + j + 4), c, d)
                    .map_err(|e| e.to_string())?;
                let base = np_of_module(&w.base).map_err(|e| e.to_string())?;
                let twisted = np_of_module(&w.twisted).map_err(|e| e.to_string())?;
                let expected_base = NewtonPolygon::isoclinic(c + d, d).unwrap();
                let lower = Slope::new(i64::from(j - 1), i64::from(c));
                let upper = Slope::from_integer(1) - Slope::new(i64::from(j - 1), i64::from(d));
                let expected_twisted =
                    NewtonPolygon::from_slopes(&[(lower, c), (upper, d)]).unwrap();
                let tag = format!("(c, d, p) = ({c}, {d}, {p})");
                ensure(base == expected_base, || format!("{tag}: base {base}"))?;
                ensure(twisted == expected_twisted, || {
                    format!("{tag}: twisted {twisted}")
                })?;
                let level = w
                    .twisted
                    .phi()
                    .congruence_level(w.base.phi(), w.base.ring());
                ensure(level == j - 1, || format!("{tag}: congruent mod p^{level}"))?;
                ensure(base != twisted, || format!("{tag}: polygons agree"))?;
                within(start.elapsed(), Duration::from_secs(1), &tag)?;
                cases += 1;
            }
        }
    }
    let w = build_traverso_witness(&ring(2, 1, 12), 2, 3).unwrap();
    let cv = find_cyclic_vector(&w.twisted, 64).map_err(|e| e.to_string())?;
    let qx = qx_coefficients(&w.twisted, &cv).map_err(|e| e.to_string())?;
    let (j, c, r) = (w.bounds.j, 2usize, 5usize);
    ensure(
        qx.valuations[0] == Valuation::Finite(0)
            && qx.valuations[c] == Valuation::Finite(j - 1)
            && qx.valuations[r] == Valuation::Finite(3),
        || format!("twisted (2,3) valuations {:?}", qx.valuations),
    )?;
    Ok(format!(
        "{cases} witness pairs; twisted (2,3) Q valuations {:?}",
        qx.valuations
    ))
}

fn c3_upper_bound_stability() -> Result<String, String> {
    let start = Instant::now();
    let mut modules = 0;
    for p in [2u64, 3] {
        for r in 1..=6u32 {
            for d in 0..=r {
                let c = r - d;
                let level = bounds(c, d).j.max(1);
                let w = ring(p, 1, d + level + 4);
                for np in np_enumerate(c, d) {
                    let m =
                        build_from_blocks(&w, &np.to_simple_blocks()).map_err(|e| e.to_string())?;
                    let seed = u64::from(r * 100 + d * 10) + p;
                    let report = verify_cutoff_upper(&m, "minimal", level, 100, seed)
                        .map_err(|e| e.to_string())?;
                    ensure(report.verdict() == Verdict::AllStable, || {
                        format!("counterexample for {np} at p = {p}, level {level}")
                    })?;
                    modules += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "stability sweep")?;
    Ok(format!(
        "{modules} modules x 100 trials in {:?}",
        start.elapsed()
    ))
}

/// phi(e_i) = e_{i+1} for i < c, p e_{i+1} otherwise.
fn shift_module(w: &Arc<WittRing>, c: u32, d: u32) -> DieudonneModule {
    let r = (c + d) as usize;
    let mut phi = Matrix::zeros(w, r, r);
    for i in 0..r {
        let entry = if i < c as usize { w.one() } else { w.p_pow(1) };
        phi.set((i + 1) % r, i, entry);
    }
    DieudonneModule::new(w.clone(), phi).expect("valid module")
}

fn c4_formula_equivalence() -> Result<String, String> {
    let pairs = [(1u32, 1u32), (1, 2), (2, 1), (2, 3)];
    let mut agreed = 0;
    let mut failed_search = 0;
    let mut rng = SplitMix64::new(4);
    while agreed < 100 {
        let (c, d) = pairs[rng.below(4) as usize];
        let p = [2u64, 3][rng.below(2) as usize];
        let w = ring(p, 1, d + 6);
        let (m, _) = shift_module(&w, c, d)
            .perturb_with(1, &mut rng)
            .map_err(|e| e.to_string())?;
        let Ok(cv) = find_cyclic_vector(&m, 64) else {
            failed_search += 1;
            ensure(failed_search < 100, || {
                "cyclic vector search keeps failing".into()
            })?;
            continue;
        };
        let qx = qx_coefficients(&m, &cv).map_err(|e| e.to_string())?;
        let np = np_of_module(&m).map_err(|e| e.to_string())?;
        ensure(qx.polygon == np, || {
            format!("({c}, {d}) at p = {p}: {} vs {np}", qx.polygon)
        })?;
        agreed += 1;
    }
    Ok(format!(
        "{agreed} modules agree, {failed_search} searches failed"
    ))
}

fn check_dual(m: &DieudonneModule, tag: &str) -> Result<(), String> {
    let dual = m.dual().map_err(|e| e.to_string())?;
    ensure((dual.codim(), dual.dim()) == (m.dim(), m.codim()), || {
        format!("{tag}: (c, d) not swapped")
    })?;
    let np = np_of_module(m).map_err(|e| e.to_string())?;
    let np_dual = np_of_module(&dual).map_err(|e| e.to_string())?;
    ensure(np_dual == np.reflect(), || {
        format!("{tag}: dual {np_dual}, polygon {np}")
    })
}

fn c5_duality() -> Result<String, String> {
    let mut cases = 0;
    for r in 1..=6u32 {
        for d in 0..=r {
            let c = r - d;
            let w = ring(2, 1, c.max(d) + 4);
            for np in np_enumerate(c, d) {
                let m = build_from_blocks(&w, &np.to_simple_blocks()).map_err(|e| e.to_string())?;
                check_dual(&m, &np.to_string())?;
                cases += 1;
            }
        }
    }
    for (c, d) in [(2, 3), (3, 2), (3, 3)] {
        let w =
            build_traverso_witness(&ring(3, 1, c.max(d) + 6), c, d).map_err(|e| e.to_string())?;
        check_dual(&w.base, "witness base")?;
        check_dual(&w.twisted, "witness twisted")?;
        cases += 2;
    }
    Ok(format!("{cases} modules"))
}

fn c6_bounds_table() -> Result<String, String> {
    for c in 1..=8u32 {
        for d in 1..=8u32 {
            let b = bounds(c, d);
            let r = c + d;
            // least j with j (c + d) >= cd
            let j = (0..).find(|&j| j * r >= c * d).unwrap();
            ensure(b.j == j, || format!("j({c},{d}) = {}", b.j))?;
            ensure(b.n_bound == c * d + 1, || format!("n_bound({c},{d})"))?;
            if c.gcd(&d) == 1 {
                ensure(b.isosimple_q_bound == j - 1, || {
                    format!("q bound ({c},{d})")
                })?;
            }
        }
        ensure(bounds(c, c).j == c.div_ceil(2), || format!("j({c},{c})"))?;
    }
    Ok("64 rows".into())
}

/// Convex lattice paths from (0,0) to (r,d) with slopes in [0,1], as
/// vertex lists, grown one segment at a time.
fn lattice_paths(c: u32, d: u32) -> BTreeSet<Vec<(u32, i64)>> {
    let (r, d) = (c + d, i64::from(d));
    fn grow(
        r: u32,
        d: i64,
        path: &mut Vec<(u32, i64)>,
        last: Option<(i64, i64)>,
        out: &mut BTreeSet<Vec<(u32, i64)>>,
    ) {
        let (x, y) = *path.last().unwrap();
        if x == r {
            if y == d {
                out.insert(path.clone());
            }
            return;
        }
        for nx in x + 1..=r {
            for ny in y..=d {
                let (dy, dx) = (ny - y, i64::from(nx - x));
                if dy > dx {
                    continue;
                }
                if let Some((ly, lx)) = last {
                    if ly * dx >= dy * lx {
                        continue;
                    }
                }
                path.push((nx, ny));
                grow(r, d, path, Some((dy, dx)), out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    grow(r, d, &mut vec![(0, 0)], None, &mut out);
    out
}

fn c7_enumeration() -> Result<String, String> {
    let n11 = np_enumerate(1, 1);
    ensure(n11.len() == 2, || format!("|N_1,1| = {}", n11.len()))?;
    let n23 = np_enumerate(2, 3);
    let oracle = lattice_paths(2, 3);
    let ours: BTreeSet<_> = n23.iter().map(NewtonPolygon::vertices).collect();
    ensure(n23.len() == oracle.len() && ours == oracle, || {
        format!("|N_2,3| = {}, oracle {}", n23.len(), oracle.len())
    })?;
    let above = |a, b| np_compare(a, b).unwrap().is_above();
    for a in &n23 {
        ensure(np_compare(a, a).unwrap() == Comparison::Equal, || {
            "reflexivity".into()
        })?;
        for b in &n23 {
            ensure(!(above(a, b) && above(b, a)) || a == b, || {
                "antisymmetry".into()
            })?;
            for c in &n23 {
                ensure(!(above(a, b) && above(b, c)) || above(a, c), || {
                    "transitivity".into()
                })?;
            }
        }
    }
    Ok(format!(
        "|N_1,1| = 2, |N_2,3| = {} (oracle {})",
        n23.len(),
        oracle.len()
    ))
}

fn c8_witt_algebra() -> Result<String, String> {
    let start = Instant::now();
    for (p, deg) in [(2u64, 1usize), (2, 3), (3, 2), (5, 2)] {
        let w = ring(p, deg, 6);
        let mut rng = SplitMix64::new(p * 10 + deg as u64);
        for _ in 0..1000 {
            let (a, b) = (w.random(&mut rng), w.random(&mut rng));
            let tag = || format!("W(F_{p}^{deg}): a = {a:?}, b = {b:?}");
            ensure(
                w.frobenius(&w.add(&a, &b), 1) == w.add(&w.frobenius(&a, 1), &w.frobenius(&b, 1)),
                tag,
            )?;
            ensure(
                w.frobenius(&w.mul(&a, &b), 1) == w.mul(&w.frobenius(&a, 1), &w.frobenius(&b, 1)),
                tag,
            )?;
            ensure(w.frobenius(&a, deg as i64) == a, tag)?;
            let diff = w.sub(&w.frobenius(&a, 1), &w.pow(&a, p));
            ensure(w.valuation(&diff) >= Valuation::Finite(1), tag)?;
            match w.unit_inverse(&a) {
                Ok(inv) => ensure(w.mul(&a, &inv) == w.one(), tag)?,
                Err(_) => ensure(!w.is_unit(&a), tag)?,
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(5), "4000 checks")?;
    Ok(format!("4 x 1000 checks in {:?}", start.elapsed()))
}

fn dvg(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_dvg"))
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("dvg runs");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn c9_determinism() -> Result<String, String> {
    let (code, module) = dvg(&["minimal", "--ci-di", "2,3", "--p", "3"], None);
    ensure(code == 0, || format!("minimal exited {code}"))?;
    let args = ["verify", "--seed", "42", "--trials", "50"];
    let (code_a, a) = dvg(&args, Some(&module));
    let (code_b, b) = dvg(&args, Some(&module));
    ensure(code_a == 0 && code_b == 0, || {
        format!("verify exited {code_a}, {code_b}")
    })?;
    let body = |text: &str| -> Result<String, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Ok(serde_json::to_string(&v["body"]).unwrap())
    };
    let (body_a, body_b) = (body(&a)?, body(&b)?);
    ensure(body_a == body_b, || "report bodies differ".into())?;
    Ok(format!("identical {}-byte bodies", body_a.len()))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("minimal-module slopes", c1_minimal_slopes),
        ("witness sharpness", c2_witness_sharpness),
        ("upper-bound stability", c3_upper_bound_stability),
        (
            "cyclic-vector route equals linearization",
            c4_formula_equivalence,
        ),
        ("duality reflects polygons", c5_duality),
        ("bounds table", c6_bounds_table),
        ("polygon enumeration", c7_enumeration),
        ("Witt ring algebra", c8_witt_algebra),
        ("report determinism", c9_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
