//! Acceptance run: each criterion prints one PASS/FAIL line with its timing.
//! The process exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use z2genus_core::bounds::{
    amalgamation_check, amalgamation_k, claim_rank_inequality_check, kleitman_check, parity_sweep, thm1_lower_bounds,
    two_component_reduction, upper_bound_search, AmalgamationInput, Interval, KmnLabeling, SearchConfig,
    UpperBoundCertificate,
};
use z2genus_core::drawing::{Graph, SpanningForest};
use z2genus_core::gf2::gram_factor;
use z2genus_core::minrank::{
    brute_force_minrank, minrank_corner, minrank_three_upper, minrank_two_diag, PartialSymmetricMatrix,
    DEFAULT_ORACLE_BITS,
};
use z2genus_core::tournament::{
    decaen_check, generate_instance, random_even_kmn_drawing, random_tournament, verify_block_bound,
};
use z2genus_core::Gf2Matrix;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Gf2Matrix {
    Gf2Matrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5))
}

fn random_symmetric(n: usize, rng: &mut impl Rng) -> Gf2Matrix {
    let upper = random_matrix(n, n, rng);
    Gf2Matrix::from_fn(n, n, |i, j| upper.get(i.min(j), i.max(j)))
}

/// Every `rows × cols` matrix.
fn all_matrices(rows: usize, cols: usize) -> impl Iterator<Item = Gf2Matrix> {
    (0u32..1 << (rows * cols)).map(move |code| Gf2Matrix::from_fn(rows, cols, |i, j| code >> (i * cols + j) & 1 == 1))
}

fn all_symmetric(n: usize) -> impl Iterator<Item = Gf2Matrix> {
    all_matrices(n, n).filter(Gf2Matrix::is_symmetric)
}

fn gram_factorization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut plus_one = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=12);
        let mut a = random_symmetric(n, &mut rng);
        if trial % 2 == 0 {
            (0..n).for_each(|i| a.set(i, i, false));
        }
        let f = gram_factor(&a).map_err(|e| e.to_string())?;
        let product = f.factor.transpose().mul(&f.factor).map_err(|e| e.to_string())?;
        ensure(product == a, || format!("BᵀB differs from A for {a:?}"))?;
        let (ra, rb) = (a.rank(), f.factor.rank());
        let alternate = a.is_alternate().map_err(|e| e.to_string())?;
        ensure(rb == ra || (rb == ra + 1 && alternate), || {
            format!("rank(B) = {rb}, rank(A) = {ra}, alternate = {alternate}")
        })?;
        let rows = f.factor.rows();
        let extra_row = alternate && ra > 0;
        ensure(rows == ra + extra_row as usize, || {
            format!("{rows} factor rows for rank {ra}, alternate = {alternate}")
        })?;
        plus_one += extra_row as usize;
    }
    Ok(format!("500 matrices, {plus_one} nonzero alternate needing one extra factor row"))
}

fn oracle(p: &PartialSymmetricMatrix) -> Result<usize, String> {
    brute_force_minrank(p, false, DEFAULT_ORACLE_BITS)
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn corner_case(a11: &Gf2Matrix, a12: &Gf2Matrix) -> Result<(), String> {
    let r = minrank_corner(a11, a12).map_err(|e| e.to_string())?;
    let p = PartialSymmetricMatrix::corner(a11, a12).map_err(|e| e.to_string())?;
    let o = oracle(&p)?;
    ensure(r.value == o && r.achieved_rank == r.value, || {
        format!("corner {a11:?} {a12:?}: formula {} oracle {o} achieved {}", r.value, r.achieved_rank)
    })
}

fn corner_exactness() -> Check {
    let mut cases = 0;
    for s1 in 1..=2 {
        for s2 in 1..=2 {
            for a11 in all_symmetric(s1) {
                for a12 in all_matrices(s1, s2) {
                    corner_case(&a11, &a12)?;
                    cases += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (s1, s2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        corner_case(&random_symmetric(s1, &mut rng), &random_matrix(s1, s2, &mut rng))?;
    }
    Ok(format!("{cases} exhaustive + 1000 random instances"))
}

fn two_diag_case(a12: &Gf2Matrix) -> Result<(), String> {
    let r = minrank_two_diag(a12).map_err(|e| e.to_string())?;
    let p = PartialSymmetricMatrix::two_diag(a12).map_err(|e| e.to_string())?;
    let o = oracle(&p)?;
    ensure(r.value == a12.rank() && r.value == o && r.achieved_rank == r.value, || {
        format!("two_diag {a12:?}: formula {} oracle {o} achieved {}", r.value, r.achieved_rank)
    })
}

fn two_diag_exactness() -> Check {
    let mut cases = 0;
    for s1 in 1..=2 {
        for s2 in 1..=2 {
            for a12 in all_matrices(s1, s2) {
                two_diag_case(&a12)?;
                cases += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (s1, s2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        two_diag_case(&random_matrix(s1, s2, &mut rng))?;
    }
    Ok(format!("{cases} exhaustive + 1000 random instances"))
}

fn three_upper_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tight = 0;
    for _ in 0..1000 {
        let s: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
        let a11 = random_symmetric(s[0], &mut rng);
        let a12 = random_matrix(s[0], s[1], &mut rng);
        let a13 = random_matrix(s[0], s[2], &mut rng);
        let a23 = random_matrix(s[1], s[2], &mut rng);
        let r = minrank_three_upper(&a11, &a12, &a13, &a23).map_err(|e| e.to_string())?;
        let p = PartialSymmetricMatrix::three_upper(&a11, &a12, &a13, &a23).map_err(|e| e.to_string())?;
        let o = oracle(&p)?;
        ensure(o <= r.value && r.achieved_rank <= r.value, || {
            format!("three_upper: oracle {o}, value {}, achieved {}", r.value, r.achieved_rank)
        })?;
        tight += (o == r.value) as usize;
    }
    Ok(format!("1000 instances, tightness rate {:.3}", tight as f64 / 1000.0))
}

fn decaen() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=14);
        let r = decaen_check(&random_tournament(n, &mut rng)).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("violation: {r:?}"))?;
    }
    Ok("10000 tournaments, no violations".into())
}

fn block_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut separating, mut tail_violations, mut random_diagonal_violations) = (0, 0, 0);
    for _ in 0..1000 {
        let (m, n) = (rng.gen_range(2..=4), rng.gen_range(1..=6));
        let inst = generate_instance(m, n, rng.gen()).map_err(|e| e.to_string())?;
        let r = verify_block_bound(&inst).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("violation: {r:?}"))?;
        separating += r.separates as usize;
        tail_violations += !r.holds_proof_tail as usize;
        let free = verify_block_bound(&inst.with_random_diagonal_blocks(rng.gen())).map_err(|e| e.to_string())?;
        random_diagonal_violations += !free.holds as usize;
    }
    Ok(format!(
        "1000 instances, no violations; {separating} separate the two bounds, \
         {tail_violations} miss the -(n-2) variant, {random_diagonal_violations} random-diagonal misses"
    ))
}

fn kleitman() -> Check {
    let g = Graph::complete_bipartite(3, 3);
    let sweep = parity_sweep(&g, 18).map_err(|e| e.to_string())?;
    ensure(sweep.all_odd(), || format!("even parity sum reached: {sweep:?}"))?;
    let labels = KmnLabeling::standard(3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let d = random_even_kmn_drawing(3, 3, &mut rng).map_err(|e| e.to_string())?;
        ensure(kleitman_check(&d, &labels).map_err(|e| e.to_string())?, || "value 0".into())?;
    }
    let cert = upper_bound_search(&g, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let star = [0, 1, 2, 3, 6];
    let forest = SpanningForest::from_edges(&g, &star).map_err(|e| e.to_string())?;
    let d = cert
        .drawing()
        .and_then(|d| d.normalize_forest(&forest))
        .map_err(|e| e.to_string())?;
    ensure(kleitman_check(&d, &labels).map_err(|e| e.to_string())?, || "search drawing gives 0".into())?;
    Ok(format!(
        "span dimension {}, {} parity vectors all odd; 2001 even drawings give 1",
        sweep.dimension, sweep.points
    ))
}

fn star(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (0, v)).collect()).expect("star")
}

fn search(g: &Graph, alternate: bool) -> Result<UpperBoundCertificate, String> {
    let config = SearchConfig {
        alternate,
        budget: 100_000,
        ..SearchConfig::default()
    };
    let cert = upper_bound_search(g, &config).map_err(|e| e.to_string())?;
    cert.verify().map_err(|e| e.to_string())?;
    Ok(cert)
}

fn known_genera() -> Check {
    let limit = Duration::from_secs(300);
    let mut planar = vec![("K4", Graph::complete(4)), ("P6", Graph::path(6)), ("star7", star(7))];
    for n in 3..=8 {
        planar.push(("cycle", Graph::cycle(n)));
    }
    let mut slowest = Duration::ZERO;
    for (name, g) in &planar {
        for alternate in [false, true] {
            let t = Instant::now();
            let cert = search(g, alternate)?;
            slowest = slowest.max(t.elapsed());
            ensure(cert.value == 0, || format!("{name}: value {}", cert.value))?;
        }
    }
    for (name, g) in [("K5", Graph::complete(5)), ("K3,3", Graph::complete_bipartite(3, 3))] {
        for alternate in [false, true] {
            let t = Instant::now();
            let cert = search(&g, alternate)?;
            slowest = slowest.max(t.elapsed());
            let rank = cert.witness_matrix.rank();
            let expected_rank = if alternate { 2 } else { 1 };
            ensure(cert.value == 1 && rank == expected_rank, || {
                format!("{name} alternate={alternate}: value {} rank {rank}", cert.value)
            })?;
        }
    }
    ensure(slowest < limit, || format!("slowest search took {slowest:?}"))?;
    Ok(format!("{} searches, slowest {slowest:.2?}", 2 * planar.len() + 4))
}

fn thm1_table() -> Check {
    let mut rows = 0;
    for m in 3..=12 {
        for n in m..=12 {
            let r = thm1_lower_bounds(m, n).map_err(|e| e.to_string())?;
            ensure(r.consistent(), || format!("{r:?}"))?;
            if m == n {
                ensure(r.ratio >= Ratio::new(n as i64 - 6, n as i64), || format!("ratio {r:?}"))?;
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} table rows"))
}

fn exact(v: i64) -> Interval {
    Interval::exact(v)
}

fn upto(v: usize) -> Interval {
    Interval::new(0, v as i64).expect("nonnegative")
}

fn glue(first: &Graph, second: &Graph, shared: usize) -> Graph {
    // Vertices 0..shared of both graphs are identified.
    let offset = first.vertex_count() - shared;
    let map = |v: usize| if v < shared { v } else { v + offset };
    let mut edges = first.edges().to_vec();
    for &(u, v) in second.edges() {
        let e = (map(u), map(v));
        if first.edge_index(e.0, e.1).is_none() {
            edges.push(e);
        }
    }
    Graph::new(first.vertex_count() + second.vertex_count() - shared, edges).expect("glued graph")
}

fn amalgamation() -> Check {
    let mut checked = 0;
    // Two planar pieces: a 4-cycle through u, v and a path u-x-v.
    let c4 = Graph::new(4, vec![(0, 2), (2, 1), (1, 3), (3, 0)]).expect("c4");
    let path = Graph::new(3, vec![(0, 2), (2, 1)]).expect("path");
    let theta = glue(&c4, &path, 2);
    let k = amalgamation_k(&theta, 0, 1).map_err(|e| e.to_string())?;
    let g0 = search(&theta, true)?;
    let eg0 = search(&theta, false)?;
    let report = amalgamation_check(AmalgamationInput {
        k,
        g0_first: exact(0),
        g0_second: exact(0),
        g0_whole: upto(g0.value),
        eg0_first: exact(0),
        eg0_second: exact(0),
        eg0_whole: upto(eg0.value),
    })
    .map_err(|e| e.to_string())?;
    ensure(report.inequalities_checked.iter().all(|c| c.holds()), || format!("{report:?}"))?;
    ensure(report.g0_whole_upper <= 1, || format!("{report:?}"))?;
    checked += 1;
    let reduced = two_component_reduction(&theta, 0, 1, &[2, 3]).map_err(|e| e.to_string())?;
    ensure(reduced.added_edges.len() == k.saturating_sub(2), || format!("{reduced:?}"))?;

    // K5 pieces sharing two vertices; K5 minus an edge is planar.
    let k5 = Graph::complete(5);
    let k5_minus = Graph::new(5, k5.edges().iter().copied().filter(|&e| e != (0, 1)).collect()).expect("k5-e");
    for (second, g0_second, eg0_second) in [(&k5_minus, 0, 0), (&k5, 1, 1)] {
        let whole = glue(&k5, second, 2);
        let k = amalgamation_k(&whole, 0, 1).map_err(|e| e.to_string())?;
        let small = SearchConfig {
            budget: 3000,
            ..SearchConfig::default()
        };
        let g0 = upper_bound_search(&whole, &SearchConfig { alternate: true, ..small }).map_err(|e| e.to_string())?;
        let eg0 = upper_bound_search(&whole, &small).map_err(|e| e.to_string())?;
        g0.verify().map_err(|e| e.to_string())?;
        eg0.verify().map_err(|e| e.to_string())?;
        // The whole graph contains K5, so both genera are at least 1.
        let report = amalgamation_check(AmalgamationInput {
            k,
            g0_first: exact(1),
            g0_second: exact(g0_second),
            g0_whole: Interval::new(1, g0.value as i64).map_err(|e| e.to_string())?,
            eg0_first: exact(1),
            eg0_second: exact(eg0_second),
            eg0_whole: Interval::new(1, eg0.value as i64).map_err(|e| e.to_string())?,
        })
        .map_err(|e| e.to_string())?;
        ensure(!report.refuted(), || format!("{report:?}"))?;
        checked += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_margin = i64::MAX;
    for _ in 0..1000 {
        let sizes = [0; 4].map(|_| rng.gen_range(0..=4));
        let b = claim_matrix(sizes, &mut rng);
        let r = claim_rank_inequality_check(&b, sizes).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("claim fails: {r:?}"))?;
        worst_margin = worst_margin.min(r.rhs as i64 - r.lhs);
    }
    Ok(format!(
        "{checked} amalgamation fixtures hold; 1000 claim matrices hold, smallest margin {worst_margin}"
    ))
}

fn claim_matrix(sizes: [usize; 4], rng: &mut impl Rng) -> Gf2Matrix {
    let class: Vec<usize> = (0..4).flat_map(|c| std::iter::repeat(c).take(sizes[c])).collect();
    let n = class.len();
    let zero = |a: usize, b: usize| matches!((a.min(b), a.max(b)), (0, 2) | (0, 3) | (1, 3));
    let upper = random_matrix(n, n, rng);
    Gf2Matrix::from_fn(n, n, |i, j| !zero(class[i], class[j]) && upper.get(i.min(j), i.max(j)))
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn determinism() -> Check {
    let runs: Vec<Vec<String>> = vec![
        vec!["rank".into(), fixture("i3_plus_j3.txt")],
        vec!["factor".into(), fixture("hyperbolic.txt")],
        vec!["minrank".into(), fixture("three_upper.txt")],
        vec!["tournament-verify".into(), "--blocks".into(), "3".into(), "4".into(), "--count".into(), "20".into()],
        vec!["tournament-verify".into(), fixture("cyclic_tournament.txt")],
        vec!["kmn-bounds".into(), "5".into(), "7".into()],
        vec!["kmn-sweep".into(), "--format".into(), "table".into()],
        vec!["kleitman".into(), "--count".into(), "20".into()],
        vec!["search-upper".into(), fixture("k33.txt"), "--alternate".into()],
        vec!["search-upper".into(), fixture("k5.txt"), "--budget".into(), "500".into()],
        vec!["amalgam-check".into(), fixture("amalgam_k5.json")],
        vec!["claim-check".into(), fixture("claim_block_diagonal.txt"), "--sizes".into(), "2".into(), "0".into(), "0".into(), "2".into()],
    ];
    let bin = env!("CARGO_BIN_EXE_z2genus");
    for args in &runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(bin)
                .args(args)
                .args(["--seed", "42"])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(0), || {
                format!("{args:?} exited with {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
            })?;
            outputs.push(out.stdout);
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} subcommand runs byte-identical", runs.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "gram factorization", limit: secs(5), run: gram_factorization },
        Criterion { id: 2, name: "corner completion exactness", limit: secs(30), run: corner_exactness },
        Criterion { id: 3, name: "two-diagonal completion exactness", limit: secs(30), run: two_diag_exactness },
        Criterion { id: 4, name: "three-block completion soundness", limit: None, run: three_upper_soundness },
        Criterion { id: 5, name: "de Caen tournament bound", limit: secs(10), run: decaen },
        Criterion { id: 6, name: "block tournament bound", limit: secs(60), run: block_bound },
        Criterion { id: 7, name: "Kleitman invariant", limit: secs(60), run: kleitman },
        Criterion { id: 8, name: "known small genera by search", limit: None, run: known_genera },
        Criterion { id: 9, name: "K_{m,n} bound table", limit: secs(1), run: thm1_table },
        Criterion { id: 10, name: "amalgamation and rank claim", limit: secs(60), run: amalgamation },
        Criterion { id: 11, name: "determinism", limit: None, run: determinism },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {} ({elapsed:.2?}): {why}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
