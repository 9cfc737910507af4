//! Binary vector-store format, all integers and reals little-endian:
//!
//! ```text
//! magic "RIVS" | version u32 | dim u32 | sparsity f64 | before u32 | after u32
//! | master_seed u64 | frozen u8 | unit_count u64
//! then per unit, sorted by UTF-8 bytes:
//! name_len u32 | name bytes | occurrences u64 | dim x f64
//! ```
//!
//! Sorting makes the file independent of the order units were first seen.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{EmbeddingConfig, VectorStore};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"RIVS";
const VERSION: u32 = 1;

impl VectorStore {
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let cfg = self.config();
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&(cfg.dim as u32).to_le_bytes())?;
        out.write_all(&cfg.sparsity.to_le_bytes())?;
        out.write_all(&(cfg.before as u32).to_le_bytes())?;
        out.write_all(&(cfg.after as u32).to_le_bytes())?;
        out.write_all(&cfg.master_seed.to_le_bytes())?;
        out.write_all(&[u8::from(self.is_frozen())])?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;

        let mut units: Vec<&str> = self.units().collect();
        units.sort_unstable();
        for unit in units {
            let repr = self.get(unit).unwrap();
            out.write_all(&(unit.len() as u32).to_le_bytes())?;
            out.write_all(unit.as_bytes())?;
            out.write_all(&repr.occurrences.to_le_bytes())?;
            for v in repr.values {
                out.write_all(&v.to_le_bytes())?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        read_exact(&mut input, &mut magic)?;
        if &magic != MAGIC {
            return Err(Error::StoreFormat("bad magic".into()));
        }
        let version = read_u32(&mut input)?;
        if version != VERSION {
            return Err(Error::StoreFormat(format!("unsupported version {version}")));
        }
        let cfg = EmbeddingConfig {
            dim: read_u32(&mut input)? as usize,
            sparsity: f64::from_bits(read_u64(&mut input)?),
            before: read_u32(&mut input)? as usize,
            after: read_u32(&mut input)? as usize,
            master_seed: read_u64(&mut input)?,
        };
        let mut flag = [0u8; 1];
        read_exact(&mut input, &mut flag)?;
        let count = read_u64(&mut input)?;

        let mut store = VectorStore::new(cfg)?;
        let mut values = vec![0.0; cfg.dim];
        for _ in 0..count {
            let len = read_u32(&mut input)? as usize;
            let mut name = vec![0u8; len];
            read_exact(&mut input, &mut name)?;
            let name = String::from_utf8(name).map_err(|e| Error::StoreFormat(e.to_string()))?;
            let occurrences = read_u64(&mut input)?;
            for v in values.iter_mut() {
                *v = f64::from_bits(read_u64(&mut input)?);
            }
            store.insert(&name, occurrences, &values)?;
        }
        let mut trailing = [0u8; 1];
        if input.read(&mut trailing)? != 0 {
            return Err(Error::StoreFormat("trailing bytes".into()));
        }
        if flag[0] == 1 {
            store.freeze();
        }
        Ok(store)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn read_exact<R: Read>(input: &mut R, buf: &mut [u8]) -> Result<()> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::StoreFormat("truncated file".into()),
        _ => e.into(),
    })
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(input, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(input, &mut b)?;
    Ok(u64::from_le_bytes(b))
}
