//! Acceptance suite: one test per criterion, each ending in a single
//! `criterion N: PASS` line (run with `--nocapture` to see them).
//!
//! The criteria pin the known structure of the dimension-7 search:
//! the order-3 censuses, the survey table, the Kramer-Mesner dimensions,
//! the normalizer of the order-3 group and its induced column classes, the
//! desk-scale classification of order-3 conjugacy classes, solver and
//! estimator correctness against independent oracles, the trivial design
//! end to end, the forced fixed blocks, and a deterministic smoke run of
//! the search campaign on the real order-4 instance.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use qsteiner::action::{
    classify_fixed_plane, classify_point_orbit, fixed_plane_census, fixed_planes_by_construction,
    induced_orbits_on_orbits, orbit, orbit_partition, point_orbit_census, stabilizer_of_orbit,
    FixedPlaneClass, PointOrbitClass,
};
use qsteiner::campaign::{
    run_campaign, CampaignConfig, CampaignVerdict, ColumnState, ProbeConfig,
};
use qsteiner::gf2::{gaussian_binomial, Subspace};
use qsteiner::group::{
    closure, dim7, element_order, enumerate_gl, fixed_space_dim, is_normalizing, representative,
    GroupElement, MatrixGroup, DEFAULT_CLOSURE_CAP,
};
use qsteiner::km::{
    assemble_design, build_km_matrix, filter_lambda1, verify_design, KMMatrix,
};
use qsteiner::rng::SplitMix64;
use qsteiner::solver::{
    estimate_tree_size, reference, solve, solve_job, split_prefixes, Budget, ExactCoverInstance,
    PrefixJob, SolveStatus,
};
use qsteiner::theory::{
    forced_fixed_blocks_f1, o3_counts, order3_table, DesignParams,
};

// shared heavyweight fixtures, computed once per test binary

fn g31() -> &'static MatrixGroup {
    static G: OnceLock<MatrixGroup> = OnceLock::new();
    G.get_or_init(dim7::order3_f1_group)
}

fn g4() -> &'static MatrixGroup {
    static G: OnceLock<MatrixGroup> = OnceLock::new();
    G.get_or_init(dim7::order4_group)
}

fn normalizer_g31() -> &'static MatrixGroup {
    static N: OnceLock<MatrixGroup> = OnceLock::new();
    N.get_or_init(|| {
        closure(7, &dim7::order3_f1_normalizer_generators(), DEFAULT_CLOSURE_CAP)
            .expect("normalizer closure fits the cap")
    })
}

fn km_g31_filtered() -> &'static KMMatrix {
    static M: OnceLock<KMMatrix> = OnceLock::new();
    M.get_or_init(|| {
        filter_lambda1(&build_km_matrix(g31(), DesignParams::sts(7))).expect("lambda = 1")
    })
}

fn km_g4_filtered() -> &'static KMMatrix {
    static M: OnceLock<KMMatrix> = OnceLock::new();
    M.get_or_init(|| {
        filter_lambda1(&build_km_matrix(g4(), DesignParams::sts(7))).expect("lambda = 1")
    })
}

#[test]
fn criterion_1_order3_census_v7() {
    let started = Instant::now();
    // (f, fixed points, orbit lines, orbit triangles, planes type 7, planes type 1)
    let expected = [
        (1u32, 1u64, 21u64, 21u64, 0u64, 21u64),
        (3, 7, 5, 35, 1, 35),
        (5, 31, 1, 31, 155, 31),
    ];
    for &(f, fixed, lines, tris, p7, p1) in &expected {
        let a = representative(7, f).unwrap();
        let census = point_orbit_census(&a).unwrap();
        assert_eq!(census.fixed_points, fixed, "fixed points for f={f}");
        assert_eq!(census.orbit_lines, lines, "orbit lines for f={f}");
        assert_eq!(census.orbit_triangles, tris, "orbit triangles for f={f}");
        let (c7, c1) = fixed_plane_census(&a).unwrap();
        assert_eq!(c7, p7, "type-7 planes for f={f}");
        assert_eq!(c1, p1, "type-1 planes for f={f}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "census took {elapsed:?}, budget 10 s");
    println!(
        "criterion 1: PASS - direct census for f = 1/3/5 at v = 7 reproduces all fifteen \
         table entries (fixed points 1/7/31, lines 21/5/1, triangles 21/35/31, type-7 planes \
         0/1/155, type-1 planes 21/35/31) in {elapsed:?}"
    );
}

#[test]
fn criterion_2_survey_table() {
    let started = Instant::now();
    let mut rows = Vec::new();
    for v in [7u32, 9, 13] {
        rows.extend(order3_table(v).unwrap());
    }
    let table_elapsed = started.elapsed();

    // survivors and their full columns:
    // (v, f, fixed, lines, triangles, planes7, planes1, f7, f1)
    #[allow(clippy::type_complexity)]
    let expected: [(u32, u32, u128, u128, u128, u128, u128, u128, u128); 6] = [
        (7, 1, 1, 21, 21, 0, 21, 0, 21),
        (9, 1, 1, 85, 85, 0, 85, 0, 85),
        (9, 3, 7, 21, 147, 1, 147, 1, 21),
        (13, 1, 1, 1365, 1365, 0, 1365, 0, 1365),
        (13, 3, 7, 341, 2387, 1, 2387, 1, 341),
        (13, 7, 127, 21, 2667, 11811, 2667, 381, 21),
    ];
    let survivors: Vec<&qsteiner::theory::TableRow> =
        rows.iter().filter(|r| !r.verdict.excluded).collect();
    assert_eq!(
        survivors.iter().map(|r| (r.ty.v, r.ty.f)).collect::<Vec<_>>(),
        expected.iter().map(|e| (e.0, e.1)).collect::<Vec<_>>(),
        "surviving types"
    );
    for (row, e) in survivors.iter().zip(&expected) {
        let c = row.counts;
        assert_eq!(
            (c.fixed_points, c.orbit_lines, c.orbit_triangles, c.fixed_planes_type7, c.fixed_planes_type1),
            (e.2, e.3, e.4, e.5, e.6),
            "counts for ({}, {})",
            e.0,
            e.1
        );
        assert_eq!(c.f7, Some(e.7), "f7 for ({}, {})", e.0, e.1);
        assert_eq!(c.f1, e.8, "f1 for ({}, {})", e.0, e.1);
    }
    // spotlight values
    assert_eq!(gaussian_binomial(7, 3), 11811);
    assert_eq!(survivors[5].counts.f7, Some(381));
    assert_eq!(survivors[4].counts.orbit_triangles, 2387);

    // The type-1 plane count equals the orbit-triangle count (each type-1
    // plane is spanned by its unique orbit triangle); for (13,7) that is
    // 2667. Confirm every v = 13 column by direct structural enumeration.
    for &(f, p7, p1) in &[(1u32, 0usize, 1365usize), (3, 1, 2387), (7, 11811, 2667)] {
        let a = representative(13, f).unwrap();
        let (t7, t1) = fixed_planes_by_construction(&a).unwrap();
        assert_eq!((t7.len(), t1.len()), (p7, p1), "constructive census for (13,{f})");
    }

    assert!(table_elapsed.as_secs() < 1, "table took {table_elapsed:?}, budget 1 s");
    println!(
        "criterion 2: PASS - survey reproduces all six surviving type columns for \
         v = 7, 9, 13 (11811, 381, 2387 included) in {table_elapsed:?}; the type-1 plane \
         count for (13,7) is 2667 = #orbit triangles, confirmed by direct enumeration of \
         all 14478 fixed planes"
    );
}

#[test]
fn criterion_3_km_dimensions() {
    let started = Instant::now();
    let m31 = km_g31_filtered();
    assert_eq!((m31.nrows(), m31.ncols()), (903, 3741), "order-3 group dimensions");
    let m4 = km_g4_filtered();
    assert_eq!((m4.nrows(), m4.ncols()), (693, 2439), "order-4 group dimensions");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "build took {elapsed:?}, budget 5 min");
    println!(
        "criterion 3: PASS - filtered Kramer-Mesner systems are 903 x 3741 (order-3 group) \
         and 693 x 2439 (order-4 group), built in {elapsed:?}"
    );
}

#[test]
fn criterion_4_normalizer_verification() {
    let started = Instant::now();
    let n = normalizer_g31();
    assert_eq!(n.order(), Some(362_880), "normalizer order");
    for (i, gen) in dim7::order3_f1_normalizer_generators().iter().enumerate() {
        assert!(is_normalizing(gen, g31()).unwrap(), "generator {i} must normalize");
    }
    let mut rng = SplitMix64::new(0x5eed);
    let elements = n.elements().unwrap();
    for _ in 0..10_000 {
        let e = &elements[rng.below(elements.len() as u64) as usize];
        assert!(is_normalizing(e, g31()).unwrap(), "sampled element must normalize");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "verification took {elapsed:?}, budget 2 min");
    println!(
        "criterion 4: PASS - closure of the three provided generators has order exactly \
         362880; all generators and 10000 sampled elements conjugate the order-3 group into \
         itself ({elapsed:?})"
    );
}

#[test]
fn criterion_5_normalizer_classes() {
    let started = Instant::now();
    let orbits = orbit_partition(7, 3, g31());
    assert_eq!(orbits.len(), 3951);
    let classes = induced_orbits_on_orbits(normalizer_g31(), &orbits, g31()).unwrap();
    let mut unfiltered_sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    unfiltered_sizes.sort_unstable();
    assert_eq!(unfiltered_sizes, vec![21, 105, 105, 210, 360, 630, 2520]);

    // restrict to the lambda = 1 filtered columns via the provenance map
    let km = km_g31_filtered();
    let surviving: BTreeSet<usize> =
        km.col_provenance().unwrap().iter().map(|&c| c as usize).collect();
    let filtered_classes: Vec<&Vec<usize>> = classes
        .iter()
        .filter(|class| class.iter().any(|i| surviving.contains(i)))
        .collect();
    for class in &filtered_classes {
        let all_in = class.iter().all(|i| surviving.contains(i));
        assert!(all_in, "filtering must remove whole classes, never fragments");
    }
    let mut filtered_sizes: Vec<usize> = filtered_classes.iter().map(|c| c.len()).collect();
    filtered_sizes.sort_unstable();
    assert_eq!(filtered_sizes, vec![21, 210, 360, 630, 2520]);

    // the size-21 class is the setwise-fixed planes, which the structure
    // theory forces into every design; the *search* classes are the other 4
    let fixed_class: Vec<&Subspace> = filtered_classes
        .iter()
        .find(|c| c.len() == 21)
        .unwrap()
        .iter()
        .map(|&i| orbits[i].representative())
        .collect();
    let forced = forced_fixed_blocks_f1(7).unwrap();
    let mut fixed_class_sorted: Vec<Subspace> = fixed_class.into_iter().cloned().collect();
    fixed_class_sorted.sort_unstable();
    assert_eq!(fixed_class_sorted, forced, "the 21-class is exactly the forced fixed blocks");
    for i in classes.iter().flatten() {
        if orbits[*i].size() == 1 {
            assert!(forced.binary_search(orbits[*i].representative()).is_ok());
        }
    }
    let movable: Vec<usize> = filtered_classes
        .iter()
        .filter(|c| c.len() != 21)
        .map(|c| c.len())
        .collect();
    assert_eq!(movable.len(), 4, "exactly four search classes");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "classification took {elapsed:?}, budget 5 min");
    println!(
        "criterion 5: PASS - the normalizer splits the 3741 filtered columns into the 21 \
         theory-forced fixed blocks plus exactly 4 search classes of sizes 210/360/630/2520 \
         (unfiltered column classes: 7, sizes 21/105/105/210/360/630/2520) ({elapsed:?})"
    );
}

#[test]
fn criterion_6_order3_classification_desk_scale() {
    let started = Instant::now();
    // (a) brute-force conjugacy classification in GL(v,2), v = 2, 3, 4
    for v in 2..=4u32 {
        let gl = enumerate_gl(v);
        let order3: Vec<&GroupElement> = gl.iter().filter(|g| element_order(g) == 3).collect();
        let mut by_f: HashMap<u32, usize> = HashMap::new();
        for g in &order3 {
            *by_f.entry(fixed_space_dim(g)).or_insert(0) += 1;
        }
        assert_eq!(by_f.len() as u32, v / 2, "floor(v/2) classes for v={v}");
        for (&f, &count) in &by_f {
            let rep = representative(v, f).unwrap();
            assert_eq!(element_order(&rep), 3);
            // the conjugation orbit of the representative is the whole f-set
            let class: std::collections::HashSet<_> =
                gl.iter().map(|p| rep.conjugate_by(p).matrix().clone()).collect();
            assert_eq!(class.len(), count, "class size for v={v} f={f}");
            for g in &order3 {
                if fixed_space_dim(g) == f {
                    assert!(class.contains(g.matrix()), "v={v} f={f}");
                }
            }
        }
    }
    // (b) closed-form counts match exhaustive censuses for every valid type
    // with v <= 9
    for v in 2..=9u32 {
        for f in (0..v).filter(|f| (v - f) % 2 == 0) {
            let c = o3_counts(v, f).unwrap();
            let a = representative(v, f).unwrap();
            let census = point_orbit_census(&a).unwrap();
            assert_eq!(u128::from(census.fixed_points), c.fixed_points, "v={v} f={f}");
            assert_eq!(u128::from(census.orbit_lines), c.orbit_lines, "v={v} f={f}");
            assert_eq!(u128::from(census.orbit_triangles), c.orbit_triangles, "v={v} f={f}");
            let (p7, p1) = fixed_plane_census(&a).unwrap();
            assert_eq!(u128::from(p7), c.fixed_planes_type7, "v={v} f={f}");
            assert_eq!(u128::from(p1), c.fixed_planes_type1, "v={v} f={f}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "classification took {elapsed:?}, budget 5 min");
    println!(
        "criterion 6: PASS - GL(v,2) brute force confirms floor(v/2) order-3 conjugacy \
         classes for v = 2, 3, 4, and the closed-form counts equal exhaustive censuses for \
         every valid (v, f) with v <= 9 ({elapsed:?})"
    );
}

#[test]
fn criterion_7_solver_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0xc7);
    let sorted = |mut v: Vec<Vec<u32>>| {
        v.sort();
        v
    };
    for trial in 0..100 {
        let inst = reference::random_instance(&mut rng, 20, 25);
        let dlx = sorted(solve(&inst, &Budget::UNLIMITED, true).solutions);
        let brute = sorted(reference::solve_all(&inst));
        assert_eq!(dlx, brute, "plain instance, trial {trial}");

        // forced / excluded variants
        let ncols = inst.num_columns() as u64;
        let forced = rng.below(ncols) as u32;
        let excluded = rng.below(ncols) as u32;
        if forced != excluded {
            let variant = inst
                .clone()
                .with_forced([forced])
                .unwrap()
                .with_excluded([excluded])
                .unwrap();
            let dlx = sorted(solve(&variant, &Budget::UNLIMITED, true).solutions);
            let brute = sorted(reference::solve_all(&variant));
            assert_eq!(dlx, brute, "variant instance, trial {trial}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "equivalence took {elapsed:?}, budget 1 min");
    println!(
        "criterion 7: PASS - dancing-links solution sets equal exhaustive enumeration on 100 \
         seeded instances (<= 20 rows, <= 25 columns), including forced/excluded variants \
         ({elapsed:?})"
    );
}

#[test]
fn criterion_8_trivial_design_end_to_end() {
    let started = Instant::now();
    let group = MatrixGroup::trivial(3);
    let km = filter_lambda1(&build_km_matrix(&group, DesignParams::sts(3))).unwrap();
    assert_eq!((km.nrows(), km.ncols()), (7, 1));
    let inst = ExactCoverInstance::from_km(&km).unwrap();
    let out = solve(&inst, &Budget::UNLIMITED, true);
    assert_eq!(out.status, SolveStatus::SolutionsFound);
    assert_eq!(out.solutions, vec![vec![0]], "exactly one solution");
    let design = assemble_design(&km, &[true], &group).unwrap();
    assert_eq!(design.blocks, vec![Subspace::full(3)], "the single block is the whole space");
    let report = verify_design(&design);
    assert!(report.ok, "coverage verification");
    assert_eq!(report.subspaces_checked, 7);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "end-to-end took {elapsed:?}, budget 1 s");
    println!(
        "criterion 8: PASS - trivial group, v = 3: one solution, assembling to the full \
         space, and direct verification covers all 7 lines exactly once ({elapsed:?})"
    );
}

#[test]
fn criterion_9_forced_fixed_blocks() {
    let started = Instant::now();
    let blocks = forced_fixed_blocks_f1(7).unwrap();
    assert_eq!(blocks.len(), 21, "(2^6 - 1)/3 forced blocks");
    let a = representative(7, 1).unwrap();
    let fixed_point = Subspace::point(7, 1 << 6);
    for (i, b) in blocks.iter().enumerate() {
        assert_eq!(classify_fixed_plane(b, &a).unwrap(), FixedPlaneClass::Type1);
        let orbit_lines = b
            .subspaces(2)
            .into_iter()
            .filter(|l| l.apply(a.matrix()) == *l && l.points().all(|x| a.matrix().apply(x) != x))
            .count();
        assert_eq!(orbit_lines, 1, "exactly one orbit line in block {i}");
        for b2 in &blocks[i + 1..] {
            assert_eq!(b.intersect(b2).unwrap(), fixed_point, "pairwise intersection");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "took {elapsed:?}, budget 1 s");
    println!(
        "criterion 9: PASS - the 21 forced type-1 planes pairwise meet exactly in the fixed \
         point and each contains exactly one orbit line ({elapsed:?})"
    );
}

#[test]
fn criterion_10_estimator_sanity() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0xe57);
    let mut within = 0;
    let total = 100;
    for t in 0..total {
        let inst = reference::random_instance(&mut rng, 16, 20);
        let exact = solve(&inst, &Budget::UNLIMITED, true).nodes as f64;
        let est = estimate_tree_size(&inst, 10_000, 0xabc + t);
        let dev = (est.mean - exact).abs();
        let ok = if est.std_error == 0.0 { dev == 0.0 } else { dev <= 3.0 * est.std_error };
        if ok {
            within += 1;
        }
    }
    assert!(within >= 95, "only {within}/{total} estimates within 3 standard errors");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "estimation took {elapsed:?}, budget 2 min");
    println!(
        "criterion 10: PASS - estimator mean within 3 standard errors of the true node count \
         on {within}/{total} seeded instances at 10000 probes each ({elapsed:?})"
    );
}

#[test]
fn criterion_11_campaign_smoke_on_order4_instance() {
    let started = Instant::now();
    let km = km_g4_filtered();

    // (a) deterministic campaign smoke run with node-budgeted probes sized
    // to finish far inside the one-minute envelope
    let config = CampaignConfig {
        probe: ProbeConfig { budget: Budget::nodes(1_000), stop_on_solution: true },
        rounds: 1,
        level: 2,
        split_tasks: 1,
        job_budget: Budget::nodes(300),
        workers: 4,
        checkpoint_dir: None,
    };
    let report_a = run_campaign(km.clone(), g4().clone(), g4().clone(), &config).unwrap();
    let report_b = run_campaign(km.clone(), g4().clone(), g4().clone(), &config).unwrap();
    assert_eq!(
        report_a.deterministic_ledger, report_b.deterministic_ledger,
        "ledger must be deterministic"
    );
    assert!(!report_a.deterministic_ledger.is_empty());
    assert_ne!(report_a.verdict, CampaignVerdict::DesignsFound, "no design at smoke budgets");
    assert_eq!(report_a.column_states.len(), km.ncols());
    for s in &report_a.column_states {
        assert!(matches!(
            s,
            ColumnState::Open
                | ColumnState::ExcludedByClass
                | ColumnState::ExcludedByPair
                | ColumnState::CoveredByHardSplit
        ));
    }

    // (b) prefix splitting partitions the search on the real instance
    let inst = ExactCoverInstance::from_km(km).unwrap();
    let level1 = split_prefixes(&inst, 1).unwrap();
    let level2 = split_prefixes(&inst, 2).unwrap();
    assert!(!level1.jobs.is_empty() && level2.jobs.len() > level1.jobs.len());
    let level1_paths: BTreeSet<&[(u32, u32)]> =
        level1.jobs.iter().map(|j| j.path.as_slice()).collect();
    let mut seen_paths = BTreeSet::new();
    for job in &level2.jobs {
        assert_eq!(job.path.len(), 2, "every level-2 job sits at depth 2");
        assert!(
            level1_paths.contains(&job.path[..1]),
            "each level-2 job extends a level-1 job"
        );
        assert!(seen_paths.insert(job.path.clone()), "job paths are pairwise distinct");
    }

    // (c) budgeted node accounting on sampled jobs: solving a level-1 job
    // equals walking its level-2 children in order under the same budget
    let budget_nodes = 50_000u64;
    for sample in level1.jobs.iter().take(2) {
        let direct = solve_job(&inst, sample, &Budget::nodes(budget_nodes), true).unwrap();
        let children: Vec<&PrefixJob> = level2
            .jobs
            .iter()
            .filter(|j| j.path[..1] == sample.path[..])
            .collect();
        let mut remaining = budget_nodes;
        let mut total = 0u64;
        let mut solutions = Vec::new();
        let mut budget_hit = false;
        for child in children {
            if remaining == 0 {
                budget_hit = true;
                break;
            }
            total += 1; // the edge into the child
            remaining -= 1;
            let out = solve_job(&inst, child, &Budget::nodes(remaining), true).unwrap();
            total += out.nodes;
            remaining -= out.nodes;
            solutions.extend(out.solutions);
            if out.status == SolveStatus::BudgetExhausted {
                budget_hit = true;
                break;
            }
        }
        assert_eq!(direct.nodes, total, "node accounting identity on sampled job");
        assert_eq!(direct.solutions, solutions, "solution splicing on sampled job");
        assert_eq!(direct.status == SolveStatus::BudgetExhausted, budget_hit);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "smoke took {elapsed:?}, budget 5 min");
    println!(
        "criterion 11: PASS - campaign smoke on the real 693 x 2439 instance is deterministic \
         (identical ledgers across runs, verdict {:?}), level-2 jobs partition the level-1 \
         jobs, and budgeted node accounting is exact on sampled jobs ({elapsed:?})",
        report_a.verdict
    );
}

/// Supplementary reproduction (not a numbered criterion): the pair-fixing
/// structure of the hard class. With the 210- and 2520-column classes
/// removed, anchoring the least column of the 360-class and grouping the
/// remaining partners (360 + 630 classes) under the stabilizer of the
/// anchor's orbit yields exactly 14 classes of pairs.
#[test]
fn supplementary_pair_structure_of_hard_class() {
    let km = km_g31_filtered();
    let g = g31();
    let n = normalizer_g31();

    let index: HashMap<&Subspace, u32> = km
        .cols()
        .iter()
        .enumerate()
        .map(|(i, meta)| (&meta.representative, i as u32))
        .collect();
    // columns of each class, via the class of their orbit representative
    let orbits = orbit_partition(7, 3, g);
    let classes = induced_orbits_on_orbits(n, &orbits, g).unwrap();
    let surviving: BTreeSet<usize> =
        km.col_provenance().unwrap().iter().map(|&c| c as usize).collect();
    let filtered_class_cols = |target_len: usize| -> Vec<u32> {
        let class = classes
            .iter()
            .filter(|c| c.iter().all(|i| surviving.contains(i)))
            .find(|c| c.len() == target_len)
            .expect("class with the requested size");
        let mut cols: Vec<u32> = class
            .iter()
            .map(|&i| index[orbits[i].representative()])
            .collect();
        cols.sort_unstable();
        cols
    };
    let anchor_class = filtered_class_cols(360);
    let partner_class = filtered_class_cols(630);
    let anchor = anchor_class[0];

    let anchor_orbit = orbit(&km.cols()[anchor as usize].representative, g);
    let stab = stabilizer_of_orbit(n, &anchor_orbit, g).unwrap();
    assert_eq!(stab.order(), Some(362_880 / 360), "orbit-stabilizer identity");

    let eligible: BTreeSet<u32> = anchor_class
        .iter()
        .chain(&partner_class)
        .copied()
        .filter(|&c| c != anchor)
        .collect();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut pair_classes = 0;
    for &p in &eligible {
        if seen.contains(&p) {
            continue;
        }
        pair_classes += 1;
        for s in stab.elements().unwrap() {
            let img =
                canonical_image(&km.cols()[p as usize].representative, s, g, &index);
            seen.insert(img);
        }
    }
    assert_eq!(pair_classes, 14, "stabilizer classes of pairs through the hard anchor");
    println!(
        "supplementary: PASS - pairs through the hard class split into 14 stabilizer classes"
    );
}

fn canonical_image(
    rep: &Subspace,
    s: &GroupElement,
    g: &MatrixGroup,
    index: &HashMap<&Subspace, u32>,
) -> u32 {
    let img = qsteiner::action::canonical_in_orbit(&rep.apply(s.matrix()), g).unwrap();
    index[&img]
}

/// Supplementary: the tree-size estimator emits a finite positive estimate
/// with a standard error on the real order-4 instance (no ground truth is
/// asserted; the exhaustive count is out of desk-scale reach).
#[test]
fn supplementary_estimator_on_order4_instance() {
    let inst = ExactCoverInstance::from_km(km_g4_filtered()).unwrap();
    let est = estimate_tree_size(&inst, 100, 0x64);
    assert!(est.mean.is_finite() && est.mean > 0.0);
    assert!(est.std_error.is_finite());
    println!(
        "supplementary: PASS - order-4 instance tree size estimate {:.3e} +- {:.3e} (100 probes)",
        est.mean, est.std_error
    );
}

/// Supplementary: the classification of point orbits on the worked small
/// example (the three orbit kinds in ambient dimension 3).
#[test]
fn supplementary_point_orbit_kinds_v3() {
    let a = representative(3, 1).unwrap();
    let g = closure(3, std::slice::from_ref(&a), 8).unwrap();
    let kinds: Vec<PointOrbitClass> = orbit_partition(3, 1, &g)
        .iter()
        .map(|o| classify_point_orbit(o, &a).unwrap())
        .collect();
    assert_eq!(kinds.iter().filter(|k| **k == PointOrbitClass::FixedPoint).count(), 1);
    assert_eq!(kinds.iter().filter(|k| **k == PointOrbitClass::OrbitLine).count(), 1);
    assert_eq!(kinds.iter().filter(|k| **k == PointOrbitClass::OrbitTriangle).count(), 1);
}
