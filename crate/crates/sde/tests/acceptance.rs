// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! Exits nonzero when a criterion fails, unless the failure is listed in
//! [`KNOWN_DISCREPANCIES`], in which case the FAIL line is still printed
//! together with the reason.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sde::graph6::{encode_graph6, parse_graph6, parse_graph6_lines};
use sde::pipeline::{self, AsymptoticFamily};
use sde::report::{read_metric_table, records_to_csv_string};
use sde_core::families::{
    fork_q_constant, lollipop_coefficients, lollipop_limit_spectral_radius, path_q_exact,
    FamilySpec, RandomModel,
};
use sde_core::graph::{classify, connected_components, degree_sequence, dpr_rewire};
use sde_core::metrics::{effective_resistance, pearson, spanning_tree_count, Metric};
use sde_core::solver::{
    bounds, recursion_iterates, sde, solve_bisection, solve_recursion, SdeOptions, SdeResult,
};
use sde_core::spectral::{full_spectrum, spectral_radius};
use sde_core::{Graph, GraphClass, DEFAULT_TOL_DEG};

const FIXTURE_N7: &str = include_str!("fixtures/connected7.g6");
const FIXTURE_N8: &str = include_str!("fixtures/connected8.g6");

/// Criteria whose failure is documented and does not fail the run.
const KNOWN_DISCREPANCIES: &[(u32, &str)] = &[
    (
        5,
        "the recursion from q0 contracts at a rate near 0.77 on ER(50, 0.2) and needs 35 to 100 steps for 1e-6; see README",
    ),
    (
        10,
        "the published lambda1 - E[D] column is reproduced by d_max - lambda1, not by lambda1 - 2L/N; see README",
    ),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn numeric() -> SdeOptions {
    SdeOptions {
        classify: false,
        ..SdeOptions::default()
    }
}

fn fixture(text: &str) -> Vec<Graph> {
    parse_graph6_lines(text)
        .into_iter()
        .map(|(line, r)| {
            r.unwrap_or_else(|e| panic!("fixture line {line}: {e}"))
                .graph
        })
        .collect()
}

fn non_regular(graphs: &[Graph]) -> Vec<&Graph> {
    graphs
        .iter()
        .filter(|g| !matches!(classify(g, DEFAULT_TOL_DEG), GraphClass::Regular(_)))
        .collect()
}

fn finite_q(r: SdeResult) -> Option<f64> {
    r.finite().map(|f| f.q)
}

fn c1_biregular_gives_two() -> Outcome {
    let opts = numeric();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut graphs = Vec::new();
    for m in 1..=10 {
        for n in m + 1..=10 {
            graphs.push(FamilySpec::CompleteBipartite(m, n));
        }
    }
    for m in 1..30 {
        for n in 1..=30 - m {
            for r1 in 1..=n {
                let spec = FamilySpec::Biregular { m, n, r1 };
                if (m * r1) % n == 0 && m * r1 / n != r1 {
                    graphs.push(spec);
                }
            }
        }
    }
    for spec in graphs {
        let g = spec.generate().expect("valid biregular spec");
        let q = match finite_q(sde(&g, &opts).expect("solver")) {
            Some(q) => q,
            None => return outcome(false, format!("{spec}: no finite exponent")),
        };
        worst = worst.max((q - 2.0).abs());
        count += 1;
    }
    outcome(
        worst <= 1e-6,
        format!("{count} biregular graphs, max |q - 2| = {worst:.2e}"),
    )
}

fn c2_two_implies_biregular() -> Outcome {
    let graphs = fixture(FIXTURE_N7);
    let opts = numeric();
    let mut mismatches = 0;
    let (mut low, mut bireg) = (0, 0);
    for g in non_regular(&graphs) {
        let q = sde(g, &opts).expect("solver").value();
        let is_low = q <= 2.0 + 1e-6;
        let is_bireg = matches!(classify(g, DEFAULT_TOL_DEG), GraphClass::Biregular(..));
        low += usize::from(is_low);
        bireg += usize::from(is_bireg);
        mismatches += usize::from(is_low != is_bireg);
    }
    outcome(
        mismatches == 0 && low > 0,
        format!("{low} graphs with q <= 2 + 1e-6, {bireg} classified biregular, {mismatches} mismatches"),
    )
}

/// Random connected graph with maximum degree at most `cap`, none of whose
/// nodes is forced to be regular at `cap`.
fn bounded_component(rng: &mut ChaCha8Rng, cap: usize) -> Graph {
    loop {
        let n = rng.gen_range(2..=9);
        let mut links = Vec::new();
        let mut deg = vec![0usize; n];
        // random spanning tree respecting the cap, then extra links
        for v in 1..n {
            let choices: Vec<usize> = (0..v).filter(|&u| deg[u] < cap).collect();
            if choices.is_empty() {
                break;
            }
            let u = choices[rng.gen_range(0..choices.len())];
            links.push((u, v));
            deg[u] += 1;
            deg[v] += 1;
        }
        if links.len() != n - 1 {
            continue;
        }
        for _ in 0..rng.gen_range(0..n * 2) {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v
                && deg[u] < cap
                && deg[v] < cap
                && !links.contains(&(u.min(v), u.max(v)))
                && !links.contains(&(u.max(v), u.min(v)))
            {
                links.push((u.min(v), u.max(v)));
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        return Graph::from_unweighted(n, links).expect("simple");
    }
}

fn is_regular_at(g: &Graph, d: f64) -> bool {
    g.degrees().iter().all(|&x| x == d)
}

fn c3_clique_component() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pos_ok, mut neg_ok, mut numeric_agree) = (0, 0, 0);
    let opts = SdeOptions::default();
    let num = numeric();
    let mut failures = Vec::new();
    let mut with = 0;
    while with < 50 {
        let k = rng.gen_range(2..=5);
        let mut g = FamilySpec::Complete(k + 1).generate().unwrap();
        for _ in 0..rng.gen_range(1..=3) {
            g = g.disjoint_union(&bounded_component(&mut rng, k));
        }
        if matches!(classify(&g, DEFAULT_TOL_DEG), GraphClass::Regular(_)) {
            continue;
        }
        with += 1;
        let r = sde(&g, &opts).unwrap();
        if matches!(r, SdeResult::Infinite(_)) {
            pos_ok += 1;
        } else {
            failures.push(format!("with clique: {}", encode_graph6(&g).unwrap()));
        }
        numeric_agree += usize::from(matches!(sde(&g, &num).unwrap(), SdeResult::Infinite(_)));
    }
    let mut without = 0;
    while without < 50 {
        let k = rng.gen_range(2..=5);
        let mut g = bounded_component(&mut rng, k);
        for _ in 0..rng.gen_range(1..=3) {
            g = g.disjoint_union(&bounded_component(&mut rng, k));
        }
        let d_max = g.degrees().into_iter().fold(0.0, f64::max);
        let comps = connected_components(&g);
        if comps.len() < 2 || comps.iter().any(|c| is_regular_at(&g.induced(c), d_max)) {
            continue;
        }
        without += 1;
        let r = sde(&g, &opts).unwrap();
        if matches!(r, SdeResult::Finite(_)) {
            neg_ok += 1;
        } else {
            failures.push(format!("without clique: {}", encode_graph6(&g).unwrap()));
        }
        numeric_agree += usize::from(matches!(sde(&g, &num).unwrap(), SdeResult::Finite(_)));
    }
    let pass = pos_ok == 50 && neg_ok == 50 && numeric_agree == 100 && failures.is_empty();
    let mut detail = format!(
        "{pos_ok}/50 infinite with a K_(d_max+1) component, {neg_ok}/50 finite without, numeric solver agrees on {numeric_agree}/100"
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure {f}"));
    }
    outcome(pass, detail)
}

fn sandwich(g: &Graph, slack: f64) -> Result<(), String> {
    let ds = degree_sequence(g, DEFAULT_TOL_DEG);
    let lambda1 = spectral_radius(g, 1e-12).map_err(|e| e.to_string())?;
    let b = bounds(&ds, lambda1).map_err(|e| e.to_string())?;
    let q = finite_q(solve_bisection(&ds, lambda1, 1e-9).map_err(|e| e.to_string())?)
        .ok_or("no finite exponent")?;
    let sharp = b.sharpened_upper.unwrap_or(b.upper);
    if b.lower <= q + slack && q <= sharp + slack && sharp <= b.upper + slack {
        Ok(())
    } else {
        Err(format!(
            "lower {} q {q} sharpened {sharp} upper {}",
            b.lower, b.upper
        ))
    }
}

fn c4_bounds_sandwich() -> Outcome {
    let slack = 2e-9;
    let graphs = fixture(FIXTURE_N7);
    let fixture_set = non_regular(&graphs);
    let model = RandomModel::ErdosRenyi { n: 50, p: 0.2 };
    let er: Vec<Graph> = (0..1000)
        .map(|i| model.ensemble_member(4, i, 100).unwrap())
        .collect();
    let mut bad = Vec::new();
    for g in fixture_set.iter().copied().chain(er.iter()) {
        if let Err(e) = sandwich(g, slack) {
            bad.push(e);
        }
    }
    let mut detail = format!(
        "{} fixture + {} ER graphs, {} violations",
        fixture_set.len(),
        er.len(),
        bad.len()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(bad.is_empty(), detail)
}

fn c5_solver_cross_validation() -> Outcome {
    let (g7, g8) = (fixture(FIXTURE_N7), fixture(FIXTURE_N8));
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for g in non_regular(&g7).into_iter().chain(non_regular(&g8)) {
        let ds = degree_sequence(g, DEFAULT_TOL_DEG);
        let lambda1 = spectral_radius(g, 1e-12).unwrap();
        let a = finite_q(solve_bisection(&ds, lambda1, 1e-9).unwrap()).unwrap();
        let b = finite_q(solve_recursion(&ds, lambda1, 1e-9, 1000).unwrap()).unwrap();
        worst = worst.max((a - b).abs());
        count += 1;
    }
    let model = RandomModel::ErdosRenyi { n: 50, p: 0.2 };
    let mut fast = 0;
    let mut max_steps = 0;
    for i in 0..1000 {
        let g = model.ensemble_member(5, i, 100).unwrap();
        let ds = degree_sequence(&g, DEFAULT_TOL_DEG);
        let lambda1 = spectral_radius(&g, 1e-12).unwrap();
        let truth = finite_q(solve_bisection(&ds, lambda1, 1e-13).unwrap()).unwrap();
        let steps = recursion_iterates(&ds, lambda1)
            .unwrap()
            .take(1001)
            .position(|q| (q - truth).abs() <= 1e-6)
            .unwrap_or(usize::MAX);
        max_steps = max_steps.max(steps);
        fast += usize::from(steps <= 20);
    }
    outcome(
        worst <= 2e-9 && fast >= 950,
        format!(
            "{count} fixture graphs, max |bisection - recursion| = {worst:.2e}; {fast}/1000 ER graphs within 1e-6 in <= 20 steps (max {max_steps})"
        ),
    )
}

fn c6_fork_constant() -> Outcome {
    let root = fork_q_constant(1e-14);
    let mut worst: f64 = 0.0;
    for n in [5, 20, 100, 1000] {
        let g = FamilySpec::Fork(n).generate().unwrap();
        let q = finite_q(sde(&g, &SdeOptions::default()).unwrap()).unwrap_or(f64::NAN);
        worst = worst.max((q - root).abs());
    }
    outcome(
        worst <= 1e-6 && (root - 2.36864).abs() <= 1e-4,
        format!("root {root:.8}, max |q(A_N) - root| = {worst:.2e} over N in {{5, 20, 100, 1000}}"),
    )
}

fn c7_path_asymptotics() -> Outcome {
    let rows = pipeline::asymptotics(
        AsymptoticFamily::Path,
        &[50, 100, 200],
        &SdeOptions::default(),
    )
    .unwrap();
    let rel: Vec<f64> = rows.iter().map(|r| r.rel_error).collect();
    let asym_ok = rel.iter().all(|&e| e <= 0.02) && rel.windows(2).all(|w| w[1] < w[0]);
    let mut exact_worst: f64 = 0.0;
    for n in [5, 10, 25] {
        let g = FamilySpec::Path(n).generate().unwrap();
        let q = finite_q(sde(&g, &SdeOptions::default()).unwrap()).unwrap();
        exact_worst = exact_worst.max((q - path_q_exact(n, 1e-13)).abs());
    }
    outcome(
        asym_ok && exact_worst <= 1e-8,
        format!(
            "relative errors {:.2e}, {:.2e}, {:.2e} at N = 50, 100, 200; exact-equation gap {exact_worst:.2e}",
            rel[0], rel[1], rel[2]
        ),
    )
}

fn c8_wheel_limit() -> Outcome {
    let sizes = [10, 100, 1000, 10_000];
    let rows =
        pipeline::asymptotics(AsymptoticFamily::Wheel, &sizes, &SdeOptions::default()).unwrap();
    let excess: Vec<f64> = rows.iter().map(|r| r.solver_q - 2.0).collect();
    let pass = excess.iter().all(|&e| e > 0.0) && excess.windows(2).all(|w| w[1] < w[0]);
    let text: Vec<String> = excess.iter().map(|e| format!("{e:.4e}")).collect();
    outcome(
        pass,
        format!("q(W_N) - 2 = {} for N = 10..10^4", text.join(", ")),
    )
}

fn c9_lollipop_asymptotics() -> Outcome {
    let b1000 = AsymptoticFamily::Lollipop.member(1000).unwrap();
    let lambda_1000 = spectral_radius(&b1000, 1e-13).unwrap();
    let limit = lollipop_limit_spectral_radius().unwrap();
    let (a, _) = lollipop_coefficients(limit);
    let sizes = [1000, 10_000, 100_000];
    let rows =
        pipeline::asymptotics(AsymptoticFamily::Lollipop, &sizes, &SdeOptions::default()).unwrap();
    let qs: Vec<f64> = rows.iter().map(|r| r.solver_q).collect();
    let slope = pipeline::log_slope(&sizes, &qs);
    let pass = (lambda_1000 - 2.902).abs() <= 1e-3 && ((slope - a) / a).abs() <= 0.05;
    outcome(
        pass,
        format!("lambda1(B_1000) = {lambda_1000:.6}, limit {limit:.6}, slope {slope:.3} vs 1/(log 3 - log lambda1) = {a:.3}"),
    )
}

fn correlation_of(csv: &str, m: Metric) -> f64 {
    let table = read_metric_table(csv.as_bytes()).unwrap();
    sde::report::correlate(&table, "")
        .unwrap()
        .r(m)
        .unwrap_or(f64::NAN)
}

fn gap_dmax_lambda1(csv: &str) -> f64 {
    let table = read_metric_table(csv.as_bytes()).unwrap();
    let q = table.column(Metric::SdeQ).unwrap();
    let d = table.column(Metric::MaxDegree).unwrap();
    let l = table.column(Metric::SpectralRadius).unwrap();
    let (x, y): (Vec<f64>, Vec<f64>) = (0..q.len())
        .filter(|&i| q[i].is_finite())
        .map(|i| (d[i] - l[i], q[i]))
        .unzip();
    pearson(&x, &y).unwrap()
}

fn c10_exhaustive_column() -> Outcome {
    let opts = SdeOptions::default();
    let csv7 = records_to_csv_string(&pipeline::batch_graph6(FIXTURE_N7, &opts).rows);
    let csv8 = records_to_csv_string(&pipeline::batch_graph6(FIXTURE_N8, &opts).rows);
    let assort7 = correlation_of(&csv7, Metric::Assortativity);
    let gap7 = correlation_of(&csv7, Metric::GapLambda1MeanDegree);
    let assort8 = correlation_of(&csv8, Metric::Assortativity);
    let pass = (assort7 - 0.765).abs() <= 0.02
        && (gap7 + 0.535).abs() <= 0.02
        && (assort8 - 0.749).abs() <= 0.02;
    outcome(
        pass,
        format!(
            "N=7 assortativity r = {assort7:.4} (0.765), lambda1 - E[D] r = {gap7:.4} (-0.535); N=8 assortativity r = {assort8:.4} (0.749); d_max - lambda1 r = {:.4} (N=7)",
            gap_dmax_lambda1(&csv7)
        ),
    )
}

fn c11_stochastic_columns() -> Outcome {
    let opts = SdeOptions::default();
    let er =
        pipeline::ensemble(RandomModel::ErdosRenyi { n: 100, p: 0.1 }, 1000, 1, &opts).unwrap();
    let ba =
        pipeline::ensemble(RandomModel::BarabasiAlbert { n: 100, m: 3 }, 1000, 1, &opts).unwrap();
    let r_er = pipeline::correlate_rows(&er, "er")
        .unwrap()
        .r(Metric::Assortativity)
        .unwrap_or(f64::NAN);
    let r_ba = pipeline::correlate_rows(&ba, "ba")
        .unwrap()
        .r(Metric::Assortativity)
        .unwrap_or(f64::NAN);
    outcome(
        (r_er - 0.856).abs() <= 0.05 && (r_ba - 0.712).abs() <= 0.07,
        format!(
            "ER(100, 0.1) r = {r_er:.4} (0.856 +- 0.05), BA(100, 3) r = {r_ba:.4} (0.712 +- 0.07)"
        ),
    )
}

fn c12_nonmonotonic() -> Outcome {
    let t = pipeline::nonmonotonic(11, 200, 12, &SdeOptions::default()).unwrap();
    let decreasing = t.iter().filter(|t| t.decreasing).count();
    let start_ok = t.iter().all(|t| (t.q[0] - 2.0).abs() <= 1e-6);
    outcome(
        decreasing >= 1 && start_ok && t.len() == 200,
        format!("{decreasing}/200 trajectories decrease somewhere; all start at q = 2: {start_ok}"),
    )
}

fn pseudoinverse_resistance(g: &Graph) -> f64 {
    let n = g.n();
    let deg = g.degrees();
    let w = 2 * n;
    let mut a = vec![0.0; n * w];
    for i in 0..n {
        for j in 0..n {
            let l = if i == j { deg[i] } else { -g.weight(i, j) };
            a[i * w + j] = l + 1.0 / n as f64;
        }
        a[i * w + n + i] = 1.0;
    }
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x * w + c].abs().total_cmp(&a[y * w + c].abs()))
            .unwrap();
        for k in 0..w {
            a.swap(c * w + k, p * w + k);
        }
        let d = a[c * w + c];
        for k in 0..w {
            a[c * w + k] /= d;
        }
        for r in 0..n {
            if r != c {
                let f = a[r * w + c];
                for k in 0..w {
                    a[r * w + k] -= f * a[c * w + k];
                }
            }
        }
    }
    let pinv = |i: usize, j: usize| a[i * w + n + j] - 1.0 / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
        }
    }
    total
}

fn enumerate_trees(n: usize, links: &[(usize, usize)]) -> u64 {
    let mut count = 0;
    for mask in 0u32..1 << links.len() {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        let find = |p: &mut Vec<usize>, mut x: usize| {
            while p[x] != x {
                x = p[x];
            }
            x
        };
        let mut ok = true;
        for (k, &(u, v)) in links.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    ok = false;
                    break;
                }
                parent[a] = b;
            }
        }
        count += u64::from(ok);
    }
    count
}

fn c13_property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut notes = Vec::new();
    let mut pass = true;

    let mut round_trip_bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=30);
        let p = rng.gen::<f64>();
        let g = sde_core::families::erdos_renyi(n, p, &mut rng);
        if parse_graph6(&encode_graph6(&g).unwrap()).unwrap() != g {
            round_trip_bad += 1;
        }
    }
    pass &= round_trip_bad == 0;
    notes.push(format!("graph6 round-trip failures {round_trip_bad}/1000"));

    let mut scale_worst: f64 = 0.0;
    let mut scaled = 0;
    while scaled < 100 {
        let n = rng.gen_range(4..=25);
        let base = sde_core::families::erdos_renyi(n, 0.4, &mut rng);
        if !base.is_connected() {
            continue;
        }
        let links = base
            .links()
            .map(|(u, v, _)| (u, v, rng.gen_range(0.1..5.0)))
            .collect::<Vec<_>>();
        let g = Graph::from_links(n, links).unwrap();
        let Some(q) = finite_q(sde(&g, &SdeOptions::default()).unwrap()) else {
            continue;
        };
        for s in [0.5, 3.7] {
            let qs =
                finite_q(sde(&g.scaled(s), &SdeOptions::default()).unwrap()).unwrap_or(f64::NAN);
            scale_worst = scale_worst.max((qs - q).abs() / q);
        }
        scaled += 1;
    }
    pass &= scale_worst <= 1e-7;
    notes.push(format!(
        "scale invariance max rel. change {scale_worst:.1e}"
    ));

    let mut pairs = 0;
    let mut order_bad = 0;
    while pairs < 100 {
        let g = sde_core::families::erdos_renyi(rng.gen_range(8..=30), 0.3, &mut rng);
        let links: Vec<(usize, usize)> = g.links().map(|(u, v, _)| (u, v)).collect();
        if links.len() < 2 || !g.is_connected() {
            continue;
        }
        let (l1, l2) = (
            links[rng.gen_range(0..links.len())],
            links[rng.gen_range(0..links.len())],
        );
        let Ok(h) = dpr_rewire(&g, l1, l2, &mut rng) else {
            continue;
        };
        if !h.is_connected() {
            continue;
        }
        let (la, lb) = (
            spectral_radius(&g, 1e-13).unwrap(),
            spectral_radius(&h, 1e-13).unwrap(),
        );
        if (la - lb).abs() < 1e-6 {
            continue;
        }
        let ds = degree_sequence(&g, DEFAULT_TOL_DEG);
        assert_eq!(ds, degree_sequence(&h, DEFAULT_TOL_DEG));
        let qa = solve_bisection(&ds, la, 1e-12).unwrap().value();
        let qb = solve_bisection(&ds, lb, 1e-12).unwrap().value();
        if (qa > 2.0 || qb > 2.0) && (la < lb) != (qa < qb) {
            order_bad += 1;
        }
        pairs += 1;
    }
    pass &= order_bad == 0;
    notes.push(format!(
        "lambda1 monotonicity violations {order_bad}/100 rewired pairs"
    ));

    let mut rg_worst: f64 = 0.0;
    let mut rg = 0;
    while rg < 100 {
        let g = sde_core::families::erdos_renyi(
            rng.gen_range(2..=30),
            rng.gen_range(0.15..0.8),
            &mut rng,
        );
        if !g.is_connected() {
            continue;
        }
        let a = effective_resistance(&full_spectrum(&g).unwrap());
        let b = pseudoinverse_resistance(&g);
        rg_worst = rg_worst.max((a - b).abs() / a.max(1.0));
        rg += 1;
    }
    pass &= rg_worst <= 1e-6;
    notes.push(format!("R_G dual computation max rel. gap {rg_worst:.1e}"));

    let mut tree_bad = 0;
    let mut tree_graphs = 0;
    for n in 2..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let links: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Graph::from_unweighted(n, links.iter().copied()).unwrap();
            if !g.is_connected() {
                continue;
            }
            tree_graphs += 1;
            if spanning_tree_count(&full_spectrum(&g).unwrap()) != enumerate_trees(n, &links) as f64
            {
                tree_bad += 1;
            }
        }
    }
    pass &= tree_bad == 0;
    notes.push(format!(
        "spanning-tree mismatches {tree_bad}/{tree_graphs} labelled graphs"
    ));

    outcome(pass, notes.join("; "))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        (
            1,
            "biregular graphs have q = 2",
            Duration::from_secs(5),
            c1_biregular_gives_two,
        ),
        (
            2,
            "q = 2 only for biregular connected graphs",
            Duration::from_secs(10),
            c2_two_implies_biregular,
        ),
        (
            3,
            "q infinite iff a K_(d_max+1) component",
            Duration::from_secs(10),
            c3_clique_component,
        ),
        (
            4,
            "bounds sandwich",
            Duration::from_secs(60),
            c4_bounds_sandwich,
        ),
        (
            5,
            "bisection and recursion agree",
            Duration::from_secs(60),
            c5_solver_cross_validation,
        ),
        (6, "fork constant", Duration::from_secs(5), c6_fork_constant),
        (
            7,
            "path asymptotics",
            Duration::from_secs(30),
            c7_path_asymptotics,
        ),
        (8, "wheel limit", Duration::from_secs(30), c8_wheel_limit),
        (
            9,
            "lollipop asymptotics",
            Duration::from_secs(300),
            c9_lollipop_asymptotics,
        ),
        (
            10,
            "exhaustive correlation column",
            Duration::from_secs(120),
            c10_exhaustive_column,
        ),
        (
            11,
            "random-ensemble correlation columns",
            Duration::from_secs(600),
            c11_stochastic_columns,
        ),
        (
            12,
            "non-monotonic link addition",
            Duration::from_secs(120),
            c12_nonmonotonic,
        ),
        (
            13,
            "property suites",
            Duration::from_secs(120),
            c13_property_suites,
        ),
    ];
    let only: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut unexpected = 0;
    for (id, name, budget, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= budget;
        let pass = out.pass && in_time;
        let mut line = format!(
            "{} [{id:>2}] {name}: {} ({:.2}s, budget {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
        if !in_time {
            line.push_str(" over budget");
        }
        if !pass {
            match KNOWN_DISCREPANCIES.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => line.push_str(&format!(" [known discrepancy: {why}]")),
                None => unexpected += 1,
            }
        }
        println!("{line}");
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
