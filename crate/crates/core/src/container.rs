//! Self-describing index files.
//!
//! Layout: magic `"GCRS"`, format version (`u16`), structure tag (`u8`),
//! payload length (`u64`), payload, CRC32 of the payload (`u32`). Every
//! integer is little-endian.

use std::path::Path;

use crate::appart::ApVariant;
use crate::fmindex::FmIndex;
use crate::gcc::Sampling;
use crate::huffman::CodeShape;
use crate::persist::{Persist, Reader, Writer};
use crate::seq::{Rsa, SeqIndex};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"GCRS";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 1 + 8;

/// Structure family recorded in the header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum StructureTag {
    GccN = 0,
    GccC = 1,
    Wt = 2,
    Wth = 3,
    Wm = 4,
    Wmh = 5,
    Mwt = 6,
    Mwth = 7,
    Ap = 8,
    ApRp = 9,
    Fmi = 10,
}

impl StructureTag {
    pub const ALL: [StructureTag; 11] = [
        StructureTag::GccN,
        StructureTag::GccC,
        StructureTag::Wt,
        StructureTag::Wth,
        StructureTag::Wm,
        StructureTag::Wmh,
        StructureTag::Mwt,
        StructureTag::Mwth,
        StructureTag::Ap,
        StructureTag::ApRp,
        StructureTag::Fmi,
    ];

    pub fn from_u8(v: u8) -> Option<Self> {
        Self::ALL.get(v as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureTag::GccN => "GCC.N",
            StructureTag::GccC => "GCC.C",
            StructureTag::Wt => "WT",
            StructureTag::Wth => "WTH",
            StructureTag::Wm => "WM",
            StructureTag::Wmh => "WMH",
            StructureTag::Mwt => "MWT",
            StructureTag::Mwth => "MWTH",
            StructureTag::Ap => "AP",
            StructureTag::ApRp => "AP.RP",
            StructureTag::Fmi => "FMI",
        }
    }

    /// Accepts the display name, case-insensitively, with `_` for `.`.
    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.to_ascii_uppercase().replace('_', ".");
        Self::ALL.iter().copied().find(|t| t.name() == norm)
    }
}

/// Tag describing a sequence structure.
pub fn seq_tag(idx: &SeqIndex) -> StructureTag {
    match idx {
        SeqIndex::Gcc(g) => match g.config().sampling {
            Sampling::Sequence { .. } => StructureTag::GccN,
            Sampling::Reduced { .. } => StructureTag::GccC,
        },
        SeqIndex::Tree(t) => match (t.codes().shape(), t.codes().arity() > 2) {
            (CodeShape::Balanced, false) => StructureTag::Wt,
            (CodeShape::Huffman, false) => StructureTag::Wth,
            (CodeShape::Balanced, true) => StructureTag::Mwt,
            (CodeShape::Huffman, true) => StructureTag::Mwth,
        },
        SeqIndex::Matrix(m) => match m.codes().shape() {
            CodeShape::Balanced => StructureTag::Wm,
            CodeShape::Huffman => StructureTag::Wmh,
        },
        SeqIndex::Ap(a) => match a.config().variant {
            ApVariant::Plain => StructureTag::Ap,
            ApVariant::Rp => StructureTag::ApRp,
        },
    }
}

/// Anything that can live in an index file.
#[derive(Clone, Debug)]
pub enum AnyIndex {
    Seq(SeqIndex),
    Fm(FmIndex),
}

impl AnyIndex {
    pub fn tag(&self) -> StructureTag {
        match self {
            AnyIndex::Seq(s) => seq_tag(s),
            AnyIndex::Fm(_) => StructureTag::Fmi,
        }
    }

    pub fn size_in_bits(&self) -> usize {
        match self {
            AnyIndex::Seq(s) => s.size_in_bits(),
            AnyIndex::Fm(f) => f.size_in_bits(),
        }
    }

    /// Length of the indexed sequence or text.
    pub fn len(&self) -> usize {
        match self {
            AnyIndex::Seq(s) => s.len(),
            AnyIndex::Fm(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        match self {
            AnyIndex::Seq(s) => s.save(&mut w),
            AnyIndex::Fm(f) => f.save(&mut w),
        }
        let payload = w.into_bytes();
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.tag() as u8);
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
        out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN + 4 {
            return Err(Error::corrupt("index file too short"));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::corrupt("bad index magic"));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::corrupt(format!(
                "unsupported index version {version}"
            )));
        }
        let tag = StructureTag::from_u8(bytes[6])
            .ok_or_else(|| Error::corrupt("unknown structure tag"))?;
        let len = u64::from_le_bytes(bytes[7..15].try_into().expect("8 bytes"));
        if len != (bytes.len() - HEADER_LEN - 4) as u64 {
            return Err(Error::corrupt("payload length does not match file size"));
        }
        let payload = &bytes[HEADER_LEN..bytes.len() - 4];
        let stored = u32::from_le_bytes(bytes[bytes.len() - 4..].try_into().expect("4 bytes"));
        if crc32fast::hash(payload) != stored {
            return Err(Error::corrupt("checksum mismatch"));
        }
        let mut r = Reader::new(payload);
        let idx = if tag == StructureTag::Fmi {
            AnyIndex::Fm(FmIndex::load(&mut r)?)
        } else {
            AnyIndex::Seq(SeqIndex::load(&mut r)?)
        };
        if r.remaining() != 0 {
            return Err(Error::corrupt("trailing bytes in payload"));
        }
        if idx.tag() != tag {
            return Err(Error::corrupt("payload does not match structure tag"));
        }
        Ok(idx)
    }

    pub fn save_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load_file(path: &Path) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}
