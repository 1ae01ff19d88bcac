//! The hashing substrate: t-wise independent functions over GF(2^w).
//!
//! Every random choice a sketch makes flows through polynomials of degree
//! < t with random coefficients in a binary finite field: evaluating one
//! polynomial at 2^w points gives a family of values that are t-wise
//! independent, which is all the distortion analysis needs, while costing
//! only t words of seed. This example pokes at the field arithmetic, the
//! hash family, and the seed accounting.
//!
//! Run with: cargo run --release --example hashing

use sjlt::kwise::{gf_mul, FieldSpec, KWiseHash};
use sjlt::params::JlParams;
use sjlt::sketch::sample_block;

fn main() {
    // the 8-bit field, GF(256): bytes with carry-less multiplication
    // reduced by the standard degree-8 modulus
    let f8 = FieldSpec::with_default_poly(8).expect("supported width");
    println!("GF(2^8), modulus {:#05x}", f8.poly());
    let (a, b) = (0x53u64, 0xCAu64);
    println!("  {a:#04x} * {b:#04x} = {:#04x} (they are inverses)", gf_mul(a, b, &f8).unwrap());
    assert_eq!(gf_mul(a, b, &f8).unwrap(), 0x01);
    // xor is the field addition, so (a+b)*c distributes bitwise
    let c = 0x1D;
    assert_eq!(
        gf_mul(a ^ b, c, &f8).unwrap(),
        gf_mul(a, c, &f8).unwrap() ^ gf_mul(b, c, &f8).unwrap()
    );

    // a 4-wise independent hash: a random cubic over GF(2^16)
    let f16 = FieldSpec::with_default_poly(16).expect("supported width");
    let coeffs = vec![0x1234, 0xBEEF, 0x0007, 0xA001]; // degree-3 polynomial
    let hash = KWiseHash::from_coeffs(&f16, coeffs).expect("coefficients fit the field");
    println!("\n4-wise hash over GF(2^16): h(x) = sum of coeff[i] * x^i");
    for x in [0u64, 1, 2, 0xFFFF] {
        println!("  h({x:#06x}) = {:#06x}", hash.eval(x).unwrap());
    }
    // batch evaluation matches the one-at-a-time path
    let points: Vec<u64> = (0..100).collect();
    let batch = hash.eval_batch(&points).expect("points fit the field");
    for (x, y) in points.iter().zip(&batch) {
        assert_eq!(*y, hash.eval(*x).unwrap());
    }
    println!("  batch evaluation over 100 points agrees with single evaluation");

    // 4-wise independence, demonstrated empirically: any 4 fixed distinct
    // points get each 4-bit sign pattern with frequency ~ 2^-4 over the
    // random draw of the polynomial. Count patterns over many draws.
    let mut seed = 0x5EED_5EEDu64;
    let mut counts = [0u64; 16];
    let draws = 40_000;
    for _ in 0..draws {
        let cs: Vec<u64> = (0..4)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                seed & f16.mask()
            })
            .collect();
        let h = KWiseHash::from_coeffs(&f16, cs).expect("in range");
        let mut pattern = 0usize;
        for (bit, x) in [3u64, 17, 257, 9001].iter().enumerate() {
            pattern |= ((h.eval(*x).unwrap() & 1) as usize) << bit;
        }
        counts[pattern] += 1;
    }
    let expect = draws as f64 / 16.0;
    let worst = counts
        .iter()
        .map(|&c| (c as f64 - expect).abs() / expect)
        .fold(0.0f64, f64::max);
    println!(
        "\nsign patterns of 4 fixed points over {draws} random cubics: worst cell is {:.1}% from uniform",
        100.0 * worst
    );
    assert!(worst < 0.10, "4-bit patterns should be near-uniform");

    // seed accounting in a real sketch: one row hash + one sign hash,
    // each t coefficients of w bits
    let p = JlParams::derive(0.25, 0.05, 1024, 5).expect("params");
    let sk = sample_block(&p).expect("sampling succeeds");
    println!(
        "\na (0.25, 0.05) sketch at d = 1024 uses t = {} -> {} seed bits total",
        p.t(),
        sk.seed_bits()
    );
}
