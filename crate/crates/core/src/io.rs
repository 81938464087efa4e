//! Bit sequence files: a diffable ASCII format and a packed binary format.
//!
//! ASCII: `#FNORM-BITS v1 n=<N> base=1`, an optional `# provenance: ...`
//! line, then '0'/'1' lines of at most 4096 characters.
//! Packed: magic `FNRMPK1\0`, the length as u64 little endian, then the
//! bits least significant first within each byte.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::seq::BitSeq;

pub const ASCII_LINE: usize = 4096;
pub const PACKED_MAGIC: &[u8; 8] = b"FNRMPK1\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitFormat {
    Ascii,
    Packed,
}

pub fn write_ascii<W: Write>(x: &BitSeq, mut w: W) -> Result<()> {
    writeln!(w, "#FNORM-BITS v1 n={} base=1", x.len())?;
    if !x.provenance().is_empty() {
        writeln!(w, "# provenance: {}", x.provenance().replace('\n', " "))?;
    }
    let s = x.to_string01();
    for line in s.as_bytes().chunks(ASCII_LINE) {
        w.write_all(line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_ascii<R: BufRead>(r: R) -> Result<BitSeq> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("#FNORM-BITS") || fields.next() != Some("v1") {
        return Err(Error::Format(format!("bad header {header:?}")));
    }
    let mut n = None;
    for f in fields {
        match f.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<u64>().map_err(|_| Error::Format(format!("bad length {v:?}")))?),
            Some(("base", "1")) => {}
            _ => return Err(Error::Format(format!("unsupported header field {f:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Format("header lacks n=".into()))?;
    let mut provenance = String::new();
    let mut words = vec![0u64; n.div_ceil(64) as usize];
    let mut i = 0u64;
    for line in lines {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(p) = rest.trim_start().strip_prefix("provenance:") {
                provenance = p.trim().to_string();
            }
            continue;
        }
        if line.len() > ASCII_LINE {
            return Err(Error::Format(format!("line longer than {ASCII_LINE} characters")));
        }
        for c in line.bytes() {
            let bit = match c {
                b'0' => false,
                b'1' => true,
                _ => return Err(Error::Format(format!("unexpected byte {c:#04x}"))),
            };
            if i >= n {
                return Err(Error::Format(format!("more than the declared {n} bits")));
            }
            if bit {
                words[(i / 64) as usize] |= 1 << (i % 64);
            }
            i += 1;
        }
    }
    if i != n {
        return Err(Error::Format(format!("{i} bits present, {n} declared")));
    }
    Ok(BitSeq::from_words(words, n).with_provenance(provenance))
}

pub fn write_packed<W: Write>(x: &BitSeq, mut w: W) -> Result<()> {
    w.write_all(PACKED_MAGIC)?;
    w.write_all(&x.len().to_le_bytes())?;
    let nbytes = x.len().div_ceil(8) as usize;
    let mut bytes = Vec::with_capacity(nbytes + 8);
    for word in x.words() {
        bytes.extend_from_slice(&word.to_le_bytes());
    }
    bytes.truncate(nbytes);
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_packed<R: Read>(mut r: R) -> Result<BitSeq> {
    let mut head = [0u8; 16];
    r.read_exact(&mut head).map_err(|_| Error::Format("truncated header".into()))?;
    if &head[..8] != PACKED_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u64::from_le_bytes(head[8..].try_into().unwrap());
    let nbytes = n.div_ceil(8) as usize;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != nbytes {
        return Err(Error::Format(format!("{} payload bytes, {nbytes} expected", bytes.len())));
    }
    if n % 8 != 0 && bytes[nbytes - 1] >> (n % 8) != 0 {
        return Err(Error::Format("padding bits are set".into()));
    }
    bytes.resize(nbytes.div_ceil(8) * 8, 0);
    let words = bytes.chunks(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(BitSeq::from_words(words, n))
}

pub fn write_bits<W: Write>(x: &BitSeq, format: BitFormat, w: W) -> Result<()> {
    match format {
        BitFormat::Ascii => write_ascii(x, w),
        BitFormat::Packed => write_packed(x, w),
    }
}

/// Reads either format, telling them apart by the first bytes.
pub fn read_bits(bytes: &[u8]) -> Result<BitSeq> {
    if bytes.starts_with(PACKED_MAGIC) {
        read_packed(bytes)
    } else {
        read_ascii(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_layout() {
        let x = BitSeq::from_fn(5000, |i| i % 3 == 0).with_provenance("every third");
        let mut out = Vec::new();
        write_ascii(&x, &mut out).unwrap();
        let text = String::from_utf8(out.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "#FNORM-BITS v1 n=5000 base=1");
        assert_eq!(lines[1], "# provenance: every third");
        assert_eq!(lines[2].len(), 4096);
        assert_eq!(lines[3].len(), 904);
        assert!(lines[2].starts_with("001001"));
        let y = read_ascii(&out[..]).unwrap();
        assert_eq!(y, x);
        assert_eq!(y.provenance(), "every third");
    }

    #[test]
    fn packed_layout() {
        let x = BitSeq::from_str01("1101000011").unwrap();
        let mut out = Vec::new();
        write_packed(&x, &mut out).unwrap();
        assert_eq!(&out[..8], b"FNRMPK1\0");
        assert_eq!(&out[8..16], &10u64.to_le_bytes());
        // bits 1..8 → 0b00001011, bits 9..10 → 0b11
        assert_eq!(&out[16..], &[0x0B, 0x03]);
        assert_eq!(read_bits(&out).unwrap(), x);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_ascii(&b"#FNORM-BITS v1 n=3 base=1\n10\n"[..]).is_err());
        assert!(read_ascii(&b"#FNORM-BITS v1 n=2 base=1\n102\n"[..]).is_err());
        assert!(read_ascii(&b"#FNORM-BITS v2 n=2 base=1\n10\n"[..]).is_err());
        assert!(read_ascii(&b"#FNORM-BITS v1 n=2 base=0\n10\n"[..]).is_err());
        let mut p = b"FNRMPK1\0".to_vec();
        p.extend_from_slice(&3u64.to_le_bytes());
        p.push(0xFF);
        assert!(read_packed(&p[..]).is_err());
        assert!(read_packed(&p[..10]).is_err());
        assert_eq!(read_bits(&b"#FNORM-BITS v1 n=0 base=1\n"[..]).unwrap().len(), 0);
    }
}
