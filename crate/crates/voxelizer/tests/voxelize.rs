use geomcore::build::make_standard_part;
use geomcore::class::StandardClass;
use geomcore::face::TAU;
use geomcore::random::{make_random_part, make_stack, SectionKind, StackSection};
use meshkit::{octahedral_rotations, rotate_mesh, tessellate, MeshBuilder, TriangleMesh, DEFAULT_CHORD_TOL};
use voxelizer::{make_invariants, voxelize};

/// Closed lat-long sphere; poles and the seam weld because grid angles
/// and the zero angle are computed identically for coincident points.
fn sphere_mesh(radius: f64, stacks: usize, slices: usize) -> TriangleMesh {
    let pt = |i: usize, j: usize| {
        let theta = std::f64::consts::PI * i as f64 / stacks as f64;
        let phi = TAU * (j % slices) as f64 / slices as f64;
        [
            radius * theta.sin() * phi.cos(),
            radius * theta.sin() * phi.sin(),
            radius * theta.cos(),
        ]
    };
    let mut b = MeshBuilder::new();
    for i in 0..stacks {
        for j in 0..slices {
            let (p00, p10, p11, p01) = (pt(i, j), pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1));
            b.add_triangle(p00, p10, p11);
            b.add_triangle(p00, p11, p01);
        }
    }
    let m = b.finish();
    assert!(m.is_closed(), "sphere helper must be watertight");
    assert!(m.signed_volume() > 0.0, "sphere helper must face outward");
    m
}

#[test]
fn axis_aligned_cube_fills_exactly_the_core_block() {
    // Side-4 cube: the fit is exact (scale 1), so the faces land exactly
    // on voxel boundaries and only the 4^3 core is inside.
    let part = make_stack(
        &[StackSection { kind: SectionKind::Square, inradius: 2.0, height: 4.0 }],
        None,
        "cube",
    );
    let mesh = tessellate(&part, DEFAULT_CHORD_TOL).unwrap();
    let g = voxelize(&mesh, 6).unwrap();
    assert_eq!(g.count(), 64);
    for x in 0..6 {
        for y in 0..6 {
            for z in 0..6 {
                let core = (1..=4).contains(&x) && (1..=4).contains(&y) && (1..=4).contains(&z);
                assert_eq!(g.get(x, y, z), core, "voxel ({x},{y},{z})");
            }
        }
    }
    assert!(!g.surface_only);
}

#[test]
fn octahedral_rotations_permute_the_grid_bit_for_bit() {
    let r = 32usize;
    let meshes = [
        tessellate(&make_random_part(11), DEFAULT_CHORD_TOL).unwrap(),
        tessellate(
            &make_standard_part(StandardClass::HexSocketHeadCapScrew, "M12x80", None).unwrap(),
            DEFAULT_CHORD_TOL,
        )
        .unwrap(),
    ];
    for mesh in &meshes {
        let base = voxelize(mesh, r).unwrap();
        for rot in octahedral_rotations() {
            let turned = voxelize(&rotate_mesh(mesh, &rot), r).unwrap();
            // The rotation matrix is a signed permutation; apply it to
            // grid indices (negated axes mirror: i -> r-1-i).
            for z in 0..r {
                for y in 0..r {
                    for x in 0..r {
                        let idx = [x, y, z];
                        let mut to = [0usize; 3];
                        for row in 0..3 {
                            for col in 0..3 {
                                let e = rot.0[row][col];
                                if e > 0.5 {
                                    to[row] = idx[col];
                                } else if e < -0.5 {
                                    to[row] = r - 1 - idx[col];
                                }
                            }
                        }
                        assert_eq!(
                            turned.get(to[0], to[1], to[2]),
                            base.get(x, y, z),
                            "rot {rot:?} voxel ({x},{y},{z})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn sphere_occupancy_matches_center_count_within_the_shell() {
    let r = 32usize;
    let mesh = sphere_mesh(5.0, 48, 96);
    let g = voxelize(&mesh, r).unwrap();

    // Exact fit: extent 10, scale 3, so the sphere has radius 15 in grid
    // units around the grid center.
    let rv = 15.0f64;
    let half = r as f64 / 2.0;
    let mut inside = 0usize;
    let mut shell = 0usize;
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                let c = [
                    x as f64 + 0.5 - half,
                    y as f64 + 0.5 - half,
                    z as f64 + 0.5 - half,
                ];
                let d2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
                if d2 < rv * rv {
                    inside += 1;
                }
                // Does the voxel cube straddle the sphere surface?
                let (mut near2, mut far2) = (0.0f64, 0.0f64);
                for k in 0..3 {
                    let (lo, hi) = (c[k] - 0.5, c[k] + 0.5);
                    let far = lo.abs().max(hi.abs());
                    let near = if lo > 0.0 {
                        lo
                    } else if hi < 0.0 {
                        -hi
                    } else {
                        0.0
                    };
                    near2 += near * near;
                    far2 += far * far;
                }
                if near2 < rv * rv && far2 > rv * rv {
                    shell += 1;
                }
            }
        }
    }
    let count = g.count();
    assert!(
        count.abs_diff(inside) <= shell,
        "count {count} vs center-oracle {inside}, shell {shell}"
    );
}

#[test]
fn open_mesh_marks_surface_only() {
    let part = make_standard_part(StandardClass::HexNut, "M12", None).unwrap();
    let closed = tessellate(&part, DEFAULT_CHORD_TOL).unwrap();
    let mut open = closed.clone();
    open.triangles.pop();
    assert!(!open.is_closed());

    let g_closed = voxelize(&closed, 24).unwrap();
    let g_open = voxelize(&open, 24).unwrap();
    assert!(g_open.surface_only);
    assert!(!g_closed.surface_only);
    assert!(g_open.count() >= 1);
    assert!(g_open.count() < g_closed.count());
    for (s, f) in g_open.data().iter().zip(g_closed.data()) {
        assert!(s <= f, "open-mesh voxel outside the solid grid");
    }
}

#[test]
fn invariants_are_deterministic_and_start_at_input_pose() {
    let mesh = tessellate(&make_random_part(5), DEFAULT_CHORD_TOL).unwrap();
    let a = make_invariants(&mesh, 24, 6, 99).unwrap();
    let b = make_invariants(&mesh, 24, 6, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 6);
    assert_eq!(a[0], voxelize(&mesh, 24).unwrap());

    let single = make_invariants(&mesh, 24, 1, 7).unwrap();
    assert_eq!(single, vec![voxelize(&mesh, 24).unwrap()]);

    let other_seed = make_invariants(&mesh, 24, 6, 100).unwrap();
    assert_ne!(a[1..], other_seed[1..], "seed must steer the rotations");
}

#[test]
fn sphere_invariants_have_stable_occupancy() {
    let mesh = sphere_mesh(5.0, 40, 80);
    let grids = make_invariants(&mesh, 32, 8, 3).unwrap();
    let counts: Vec<usize> = grids.iter().map(|g| g.count()).collect();
    let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
    assert!(
        (*hi as f64) <= *lo as f64 * 1.02,
        "rotation-variant sphere counts: {counts:?}"
    );
}

#[test]
fn occupancy_fraction_converges_with_resolution() {
    let part = make_stack(
        &[StackSection { kind: SectionKind::Cylinder, inradius: 10.0, height: 20.0 }],
        None,
        "plug",
    );
    let mesh = tessellate(&part, DEFAULT_CHORD_TOL).unwrap();
    // Normalize by the (r-2)^3 core the body is fitted into; dividing by
    // r^3 would mix in the fixed margin, whose relative size halves at
    // every doubling regardless of the rasterization.
    let f: Vec<f64> = [32usize, 64, 128]
        .iter()
        .map(|&r| {
            let core = (r - 2).pow(3) as f64;
            voxelize(&mesh, r).unwrap().count() as f64 / core
        })
        .collect();
    assert!((f[1] - f[0]).abs() / f[0] < 0.05, "32->64 jump: {f:?}");
    assert!((f[2] - f[1]).abs() / f[1] < 0.05, "64->128 jump: {f:?}");
}
