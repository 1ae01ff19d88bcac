//! Code-layer checks against independently computed Hamming distances and
//! the evaluation-code distance law.

mod common;

use common::TestRng;
use sjlt::codes::{
    degrade_code, load_code, min_distance, qary_to_binary, random_code, reed_solomon_code,
    save_code, CodeSpec,
};

fn brute_distance(words: &[Vec<u16>]) -> usize {
    let mut best = usize::MAX;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let d = words[i]
                .iter()
                .zip(&words[j])
                .filter(|(a, b)| a != b)
                .count();
            best = best.min(d);
        }
    }
    best
}

#[test]
fn evaluation_codes_hit_the_distance_law() {
    // length-s evaluation code of degree < m has distance exactly s - m + 1
    for (q, s, m) in [(4usize, 4usize, 1usize), (4, 4, 2), (4, 4, 3), (8, 8, 2), (8, 8, 3), (8, 5, 2), (16, 10, 2)] {
        let code = reed_solomon_code(q, s, m).unwrap();
        let CodeSpec::QAry { words, .. } = &code else {
            panic!("expected q-ary code")
        };
        assert_eq!(words.len(), q.pow(m as u32));
        assert_eq!(min_distance(&code).unwrap(), s - m + 1, "(q,s,m)=({q},{s},{m})");
        assert_eq!(min_distance(&code).unwrap(), brute_distance(words));
    }
}

#[test]
fn binary_expansion_doubles_distance_and_fixes_weight() {
    let code = reed_solomon_code(8, 8, 2).unwrap();
    let bin = qary_to_binary(&code).unwrap();
    let CodeSpec::BinaryWeight { len, s, supports } = &bin else {
        panic!("expected binary code")
    };
    assert_eq!(*len, 64);
    assert_eq!(*s, 8);
    assert_eq!(supports.len(), 64);
    // weight-s expansion: differing symbols contribute 2 bit flips each
    assert_eq!(min_distance(&bin).unwrap(), 2 * min_distance(&code).unwrap());
    for sup in supports {
        assert_eq!(sup.len(), 8);
        // one set bit per symbol slot of width q=8
        for (slot, &bit) in sup.iter().enumerate() {
            assert!((bit as usize) >= slot * 8 && (bit as usize) < (slot + 1) * 8);
        }
    }
}

#[test]
fn random_codes_are_reproducible_and_degradable() {
    let a = random_code(40, 6, 8, 4, 123).unwrap();
    let b = random_code(40, 6, 8, 4, 123).unwrap();
    assert_eq!(a, b);
    let c = random_code(40, 6, 8, 4, 124).unwrap();
    assert_ne!(a, c);
    let bad = degrade_code(&a).unwrap();
    let CodeSpec::QAry { words, .. } = &bad else {
        panic!()
    };
    assert!(words.iter().all(|w| w[0] == 1));
    assert!(min_distance(&bad).unwrap() <= min_distance(&a).unwrap());
}

#[test]
fn code_files_round_trip_both_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let qpath = dir.path().join("rs.csv");
    let bpath = dir.path().join("bin.csv");

    let qary = reed_solomon_code(8, 8, 2).unwrap();
    save_code(&qary, &qpath).unwrap();
    let back = load_code(&qpath, 8, 64).unwrap();
    assert_eq!(back, qary);

    let bin = qary_to_binary(&qary).unwrap();
    save_code(&bin, &bpath).unwrap();
    let back = load_code(&bpath, 8, 64).unwrap();
    assert_eq!(back, bin);
}

#[test]
fn loader_validates_against_requested_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rs.csv");
    let qary = reed_solomon_code(8, 8, 2).unwrap();
    save_code(&qary, &path).unwrap();
    // wrong s
    assert!(load_code(&path, 4, 64).is_err());
    // k not a multiple of s
    assert!(load_code(&path, 8, 63).is_err());
    // symbol out of range for q = k / s = 4
    assert!(load_code(&path, 8, 32).is_err());
}

#[test]
fn random_code_symbols_cover_the_alphabet() {
    let mut rng = TestRng::new(9);
    for _ in 0..5 {
        let seed = rng.next_u64();
        let code = random_code(64, 5, 4, 2, seed).unwrap();
        let CodeSpec::QAry { words, q, .. } = &code else {
            panic!()
        };
        let mut seen = vec![false; *q];
        for w in words {
            for &sym in w {
                seen[sym as usize] = true;
            }
        }
        assert!(seen.iter().all(|&b| b), "alphabet not covered for seed {seed}");
    }
}
