mod common;

use arb_core::imgio::{generate_synthetic_dataset, load_dataset, load_image, resize_to, write_pgm};
use arb_core::{BinaryImage, Error};
use common::{component_count, random_blob, rng};

#[test]
fn synthetic_shapes_are_single_in_frame_components() {
    let ds = generate_synthetic_dataset(200, 120, 120, 42).unwrap();
    assert_eq!(ds.len(), 200);
    let mut seen = std::collections::HashSet::new();
    for (id, img) in ds.entries() {
        assert_eq!(component_count(img), 1, "{id}");
        assert!(!img.touches_border(), "{id}");
        assert!(seen.insert(img.pixels().to_vec()), "{id} duplicates another shape");
    }
    assert_eq!(ds, generate_synthetic_dataset(200, 120, 120, 42).unwrap());
    assert_ne!(ds, generate_synthetic_dataset(200, 120, 120, 43).unwrap());
}

#[test]
fn dataset_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ds = generate_synthetic_dataset(12, 80, 80, 1).unwrap();
    ds.write_dir(dir.path()).unwrap();
    assert_eq!(load_dataset(dir.path(), 127, 80, 80).unwrap(), ds);
}

#[test]
fn pgm_round_trip_of_random_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(8);
    for i in 0..10 {
        let img = random_blob(&mut r, 50, 0);
        let path = dir.path().join(format!("{i}.pgm"));
        write_pgm(&img, &path).unwrap();
        assert_eq!(load_image(&path, 127).unwrap(), img);
    }
}

#[test]
fn nearest_neighbour_resize_follows_centre_mapping() {
    let mut r = rng(4);
    let img = random_blob(&mut r, 37, 0);
    let out = resize_to(&img, 20, 29).unwrap();
    for y in 0..29 {
        for x in 0..20 {
            let sx = ((2 * x + 1) as f64 * 37.0 / 40.0).floor() as usize;
            let sy = ((2 * y + 1) as f64 * 37.0 / 58.0).floor() as usize;
            assert_eq!(out.get(x, y), img.get(sx, sy));
        }
    }
}

#[test]
fn bad_inputs_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.png");
    std::fs::write(&junk, b"not an image").unwrap();
    let err = load_dataset(dir.path(), 127, 32, 32).unwrap_err();
    assert!(err.to_string().contains("junk.png"), "{err}");
    assert!(matches!(load_image(&dir.path().join("missing.pgm"), 127), Err(Error::Io { .. })));
    assert!(BinaryImage::new(2, 2, vec![true; 3]).is_err());
}
