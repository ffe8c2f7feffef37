use std::collections::HashMap;
use std::f64::consts::PI;

use plot94_core::contour::{
    choose_levels, extract_contours, level_segments, ContourLevelSet, ContourPolyline, GridEdge,
};
use plot94_core::surface::ScalarGrid;
use plot94_testkit::contour::{edge_crossed, interpolate};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_grid(rng: &mut impl Rng, n: usize) -> ScalarGrid {
    let z = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ScalarGrid::new(n, n, (0.0, 1.0), (-2.0, 3.0), z).unwrap()
}

/// Value of the edge interpolant at vertex `p` of a contour.
fn value_on_edge(grid: &ScalarGrid, e: GridEdge, x: f64, y: f64) -> f64 {
    let ((i0, j0), (i1, j1)) = e.ends();
    let (a, b) = (grid.z_at(i0, j0), grid.z_at(i1, j1));
    let s = match e {
        GridEdge::Horizontal { .. } => (x - grid.x_at(i0)) / (grid.x_at(i1) - grid.x_at(i0)),
        GridEdge::Vertical { .. } => (y - grid.y_at(j0)) / (grid.y_at(j1) - grid.y_at(j0)),
    };
    interpolate(a, b, s)
}

fn all_edges(grid: &ScalarGrid) -> Vec<GridEdge> {
    let mut out = Vec::new();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            if i + 1 < grid.nx() {
                out.push(GridEdge::Horizontal { i, j });
            }
            if j + 1 < grid.ny() {
                out.push(GridEdge::Vertical { i, j });
            }
        }
    }
    out
}

fn check_grid(grid: &ScalarGrid, levels: &ContourLevelSet) {
    let polys = extract_contours(grid, levels);
    for &level in levels.levels() {
        let mine: Vec<&ContourPolyline> = polys.iter().filter(|p| p.level == level).collect();

        let mut hits: HashMap<GridEdge, usize> = HashMap::new();
        for p in &mine {
            assert_eq!(p.vertices.len(), p.edges.len());
            for (v, &e) in p.vertices.iter().zip(&p.edges) {
                let r = (value_on_edge(grid, e, v.x, v.y) - level).abs();
                assert!(r < 1e-9, "residual {r}");
                *hits.entry(e).or_default() += 1;
            }
        }
        for e in all_edges(grid) {
            let ((i0, j0), (i1, j1)) = e.ends();
            let want = usize::from(edge_crossed(grid.z_at(i0, j0), grid.z_at(i1, j1), level));
            assert_eq!(hits.get(&e).copied().unwrap_or(0), want, "{e:?} at {level}");
        }

        let chained: usize = mine
            .iter()
            .map(|p| if p.closed { p.vertices.len() } else { p.vertices.len() - 1 })
            .sum();
        assert_eq!(chained, level_segments(grid, level).len());
    }
}

#[test]
fn random_grids_five_levels() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let grid = random_grid(&mut rng, 16);
        let levels = choose_levels(&grid, 5);
        assert_eq!(levels.len(), 5);
        check_grid(&grid, &levels);
    }
}

proptest! {
    #[test]
    fn small_grids_with_coarse_values(
        z in prop::collection::vec(-3i32..=3, 25),
        level in -3i32..=3,
    ) {
        // Integer values put samples exactly on the level.
        let grid = ScalarGrid::new(5, 5, (0.0, 4.0), (0.0, 4.0), z.iter().map(|&v| v as f64).collect()).unwrap();
        let levels = ContourLevelSet::new(vec![level as f64 + 0.5, level as f64 + 1.0]).unwrap();
        let polys = extract_contours(&grid, &levels);
        for p in &polys {
            prop_assert!(p.vertices.len() >= 2);
            for w in p.vertices.windows(2) {
                prop_assert!(w[0] != w[1]);
            }
        }
    }
}

#[test]
fn sin_sin_level_half_is_all_loops() {
    let n = 33;
    let xs: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / (n - 1) as f64).collect();
    let z = xs
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (PI * x).sin() * (PI * y).sin()))
        .collect();
    let grid = ScalarGrid::new(n, n, (0.0, 2.0), (0.0, 2.0), z).unwrap();
    let levels = ContourLevelSet::new(vec![0.5]).unwrap();
    let polys = extract_contours(&grid, &levels);
    // Positive only on [0,1]^2 and [1,2]^2.
    assert_eq!(polys.len(), 2);
    assert!(polys.iter().all(|p| p.closed));
    check_grid(&grid, &levels);
}

#[test]
fn level_spacing_example() {
    let grid = ScalarGrid::new(2, 2, (0.0, 1.0), (0.0, 1.0), vec![-1.0, 1.0, 0.0, 0.5]).unwrap();
    assert_eq!(choose_levels(&grid, 3).levels(), &[-0.5, 0.0, 0.5]);
}
