use ra_kit::bounds::embeds;
use ra_kit::corpus::{left_linear, point_algebra};
use ra_kit::*;

fn structure(n: usize, holds: Vec<Element>) -> LabeledStructure {
    LabeledStructure::from_holds(Network::default_nodes(n), holds)
}

#[test]
fn left_linear_bounds_define_atomic_structures() {
    let ra = left_linear();
    let bs = generate_bounds(&ra).unwrap();
    for n in 0..=2usize {
        for code in 0..(1u64 << (4 * n * n)) {
            let s = structure(n, (0..n * n).map(|i| Element::from_bits((code >> (4 * i)) & 15)).collect());
            assert_eq!(check_membership(&bs, &s), is_atomic(&ra, &struct_to_net(&ra, &s)));
        }
    }
    for code in 0..4u64.pow(9) {
        let mut c = code;
        let holds = (0..9)
            .map(|_| {
                let a = (c % 4) as usize;
                c /= 4;
                Element::atom(a)
            })
            .collect();
        let s = structure(3, holds);
        assert_eq!(check_membership(&bs, &s), is_atomic(&ra, &struct_to_net(&ra, &s)));
    }
}

#[test]
fn bounds_are_minimal_and_distinct() {
    for ra in [point_algebra(), left_linear()] {
        let bs = generate_bounds(&ra).unwrap();
        for (i, b) in bs.bounds.iter().enumerate() {
            assert!(!is_atomic(&ra, &struct_to_net(&ra, &b.structure)));
            for (j, c) in bs.bounds.iter().enumerate() {
                if i != j {
                    assert!(!embeds(&c.structure, &b.structure), "bound {j} embeds in bound {i}");
                }
            }
        }
    }
}

#[test]
fn point_bound_counts() {
    let bs = generate_bounds(&point_algebra()).unwrap();
    assert_eq!([Family::F1, Family::F2, Family::F3].map(|f| bs.count(f)), [7, 34, 3]);
}
