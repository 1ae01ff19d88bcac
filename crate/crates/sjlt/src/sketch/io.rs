//! Binary sketch serialization.
//!
//! Layout (all integers little-endian):
//!   magic "SJLT" | version u32 | tag u8 | k u64 | d u64 | s u64 | seed u64
//!   then for each of the d columns:
//!     count u64, then count * (row u64, value f64 as IEEE-754 bits)
//!
//! Values round-trip bit-exactly; loading re-validates the structure.

use super::{ConstructionTag, SparseSketch};
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"SJLT";
const VERSION: u32 = 1;

pub fn write_sketch<W: Write>(sketch: &SparseSketch, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[sketch.tag().to_byte()])?;
    out.write_all(&(sketch.k() as u64).to_le_bytes())?;
    out.write_all(&(sketch.d() as u64).to_le_bytes())?;
    out.write_all(&(sketch.s() as u64).to_le_bytes())?;
    out.write_all(&sketch.seed().to_le_bytes())?;
    for i in 0..sketch.d() {
        let (rows, vals) = sketch.column(i);
        out.write_all(&(rows.len() as u64).to_le_bytes())?;
        for (r, v) in rows.iter().zip(vals) {
            out.write_all(&r.to_le_bytes())?;
            out.write_all(&v.to_bits().to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_u64<R: Read>(src: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    src.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn checked_usize(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Format(format!("{what} {v} exceeds usize")))
}

pub fn read_sketch<R: Read>(mut src: R) -> Result<SparseSketch> {
    let mut magic = [0u8; 4];
    src.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic: not a sketch file".into()));
    }
    let mut vbuf = [0u8; 4];
    src.read_exact(&mut vbuf)?;
    let version = u32::from_le_bytes(vbuf);
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported sketch format version {version}"
        )));
    }
    let mut tag_byte = [0u8; 1];
    src.read_exact(&mut tag_byte)?;
    let tag = ConstructionTag::from_byte(tag_byte[0])?;
    let k = checked_usize(read_u64(&mut src)?, "dimension k")?;
    let d = checked_usize(read_u64(&mut src)?, "dimension d")?;
    let s = checked_usize(read_u64(&mut src)?, "sparsity s")?;
    let seed = read_u64(&mut src)?;
    if d == 0 || k == 0 {
        return Err(Error::Format("sketch dimensions must be nonzero".into()));
    }
    let mut offsets = Vec::with_capacity(d + 1);
    offsets.push(0usize);
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for _ in 0..d {
        let count = checked_usize(read_u64(&mut src)?, "column entry count")?;
        if count > k {
            return Err(Error::Format(format!(
                "column entry count {count} exceeds k={k}"
            )));
        }
        for _ in 0..count {
            rows.push(read_u64(&mut src)?);
            values.push(f64::from_bits(read_u64(&mut src)?));
        }
        offsets.push(rows.len());
    }
    // seed_bits is not serialized; equality ignores it.
    SparseSketch::from_parts(k, d, s, tag, seed, 0, offsets, rows, values)
}

pub fn save_sketch(sketch: &SparseSketch, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut buf = std::io::BufWriter::new(file);
    write_sketch(sketch, &mut buf)?;
    use std::io::Write as _;
    buf.flush()?;
    Ok(())
}

pub fn load_sketch(path: &Path) -> Result<SparseSketch> {
    let file = std::fs::File::open(path)?;
    let mut buf = std::io::BufReader::new(file);
    let sketch = read_sketch(&mut buf)?;
    let mut probe = [0u8; 1];
    use std::io::Read as _;
    if buf.read(&mut probe)? != 0 {
        return Err(Error::Format("trailing bytes after sketch data".into()));
    }
    Ok(sketch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::JlParams;
    use crate::sketch::sample::{sample_block, sample_dks};

    #[test]
    fn round_trip_is_bit_exact() {
        let p = JlParams::derive(0.25, 0.05, 16, 77).unwrap();
        for sk in [sample_block(&p).unwrap(), sample_dks(&p).unwrap()] {
            let mut bytes = Vec::new();
            write_sketch(&sk, &mut bytes).unwrap();
            let back = read_sketch(bytes.as_slice()).unwrap();
            assert_eq!(sk, back);
            // serialization itself is deterministic
            let mut again = Vec::new();
            write_sketch(&sk, &mut again).unwrap();
            assert_eq!(bytes, again);
        }
    }

    #[test]
    fn rejects_corruption() {
        let p = JlParams::derive(0.25, 0.05, 4, 1).unwrap();
        let sk = sample_block(&p).unwrap();
        let mut bytes = Vec::new();
        write_sketch(&sk, &mut bytes).unwrap();

        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        assert!(read_sketch(bad_magic.as_slice()).is_err());

        let mut bad_version = bytes.clone();
        bad_version[4] = 9;
        assert!(read_sketch(bad_version.as_slice()).is_err());

        let mut bad_tag = bytes.clone();
        bad_tag[8] = 200;
        assert!(read_sketch(bad_tag.as_slice()).is_err());

        let truncated = &bytes[..bytes.len() - 3];
        assert!(read_sketch(truncated).is_err());
    }

    #[test]
    fn file_round_trip_and_trailing_byte_detection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sk.bin");
        let p = JlParams::derive(0.3, 0.1, 8, 5).unwrap();
        let sk = sample_block(&p).unwrap();
        save_sketch(&sk, &path).unwrap();
        assert_eq!(load_sketch(&path).unwrap(), sk);

        let mut bytes = std::fs::read(&path).unwrap();
        bytes.push(0);
        std::fs::write(&path, &bytes).unwrap();
        assert!(load_sketch(&path).is_err());
    }
}
