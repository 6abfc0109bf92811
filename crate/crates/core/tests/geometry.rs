mod common;

use common::{inclusion_exclusion, m, q, random_body, random_box};
use cover_cone::{
    default_system, log_projection_vector, projection_volume, read_body, thicken, write_body,
    AxisBox, BoxUnionBody, ProjectionVolumes, SubsetMask,
};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn union_volume_matches_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..150 {
        let n = 3;
        let body = random_body(&mut rng, n, 3, 6);
        for a in SubsetMask::full(n).nonempty_subsets() {
            assert_eq!(
                projection_volume(&body, a),
                inclusion_exclusion(body.boxes(), a),
                "{a}"
            );
        }
    }
}

#[test]
fn adding_a_box_never_shrinks_and_is_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let first = random_body(&mut rng, 3, 3, 8);
        let extra = random_box(&mut rng, 3, 8);
        let mut boxes = first.boxes().to_vec();
        boxes.push(extra.clone());
        let union = BoxUnionBody::new(boxes).unwrap();
        for a in SubsetMask::full(3).nonempty_subsets() {
            let before = projection_volume(&first, a);
            let after = projection_volume(&union, a);
            assert!(after >= before);
            assert!(after <= before + extra.projection_volume(a));
        }
    }
}

#[test]
fn contained_boxes_change_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let body = random_body(&mut rng, 3, 3, 8);
        let host = &body.boxes()[0];
        let inner = AxisBox::new(
            host.intervals()
                .iter()
                .map(|(a, b)| {
                    let mid = (a + b) / q(2, 1);
                    (mid.clone(), mid)
                })
                .collect(),
        )
        .unwrap();
        let mut boxes = body.boxes().to_vec();
        boxes.push(inner);
        boxes.push(host.clone());
        let padded = BoxUnionBody::new(boxes).unwrap();
        assert_eq!(ProjectionVolumes::of(&padded), ProjectionVolumes::of(&body));
    }
}

#[test]
fn scaling_an_axis_scales_projections_through_it() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let body = random_body(&mut rng, 3, 3, 8);
        let c = q(3, 2);
        let stretched = BoxUnionBody::new(
            body.boxes()
                .iter()
                .map(|b| {
                    let mut iv = b.intervals().to_vec();
                    iv[1] = (&iv[1].0 * &c, &iv[1].1 * &c);
                    AxisBox::new(iv).unwrap()
                })
                .collect(),
        )
        .unwrap();
        for a in SubsetMask::full(3).nonempty_subsets() {
            let factor = if a.contains(2) { c.clone() } else { q(1, 1) };
            assert_eq!(
                projection_volume(&stretched, a),
                projection_volume(&body, a) * factor
            );
        }
    }
}

#[test]
fn cover_inequalities_hold_on_random_bodies() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sys = default_system(3).unwrap();
    let mut checked = 0;
    for _ in 0..200 {
        let body = thicken(&random_body(&mut rng, 3, 4, 10), &q(1, 8)).unwrap();
        let volumes = ProjectionVolumes::of(&body);
        assert!(volumes.all_positive());
        let logs = log_projection_vector(&body);
        for g in sys.generators() {
            assert!(volumes.satisfies(g), "{g}");
            // the same statement in log form, to the working precision
            let c = g.cover();
            let lhs: f64 = c
                .parts()
                .iter()
                .map(|&p| cover_cone::precise::to_f64(logs.log(p).unwrap()))
                .sum();
            let rhs = c.k() as f64 * cover_cone::precise::to_f64(logs.log(c.ground()).unwrap());
            assert!(lhs >= rhs - 1e-9);
            checked += 1;
        }
    }
    assert_eq!(checked, 200 * sys.len());
}

#[test]
fn thickening_adds_exactly_the_cube_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let body = random_body(&mut rng, 3, 3, 8);
        let eps = q(1, 16);
        let thick = thicken(&body, &eps).unwrap();
        for a in SubsetMask::full(3).nonempty_subsets() {
            let mut cube = q(1, 1);
            for _ in 0..a.len() {
                cube *= &eps;
            }
            assert_eq!(
                projection_volume(&thick, a),
                projection_volume(&body, a) + cube
            );
        }
    }
}

#[test]
fn body_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let body = random_body(&mut rng, 4, 4, 16);
        assert_eq!(read_body(&write_body(&body)).unwrap(), body);
    }
}

#[test]
fn lower_dimensional_bodies_have_zero_projections() {
    let flat = BoxUnionBody::new(vec![AxisBox::in_span(
        3,
        m(&[1, 2]),
        &[q(0, 1), q(0, 1), q(2, 1)],
        &[q(1, 1), q(2, 1), q(0, 1)],
    )
    .unwrap()])
    .unwrap();
    assert!(projection_volume(&flat, m(&[1, 2, 3])).is_zero());
    assert_eq!(projection_volume(&flat, m(&[1, 2])), q(2, 1));
    let logs = log_projection_vector(&flat);
    assert_eq!(
        logs.zero_subsets(),
        vec![m(&[3]), m(&[1, 3]), m(&[2, 3]), m(&[1, 2, 3])]
    );
}
