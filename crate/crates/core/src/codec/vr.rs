use std::fmt;
use std::str::FromStr;

/// Value representation of a data element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VR {
    AE,
    AS,
    AT,
    CS,
    DA,
    DS,
    DT,
    FL,
    FD,
    IS,
    LO,
    LT,
    OB,
    OD,
    OF,
    OL,
    OV,
    OW,
    PN,
    SH,
    SL,
    SQ,
    SS,
    ST,
    SV,
    TM,
    UC,
    UI,
    UL,
    UN,
    UR,
    US,
    UT,
    UV,
}

use VR::*;

const ALL: [VR; 34] = [
    AE, AS, AT, CS, DA, DS, DT, FL, FD, IS, LO, LT, OB, OD, OF, OL, OV, OW, PN, SH, SL, SQ, SS,
    ST, SV, TM, UC, UI, UL, UN, UR, US, UT, UV,
];

impl VR {
    pub fn all() -> &'static [VR] {
        &ALL
    }

    pub fn from_bytes(code: [u8; 2]) -> Option<VR> {
        ALL.iter().copied().find(|vr| vr.code().as_bytes() == code)
    }

    pub fn code(self) -> &'static str {
        match self {
            AE => "AE",
            AS => "AS",
            AT => "AT",
            CS => "CS",
            DA => "DA",
            DS => "DS",
            DT => "DT",
            FL => "FL",
            FD => "FD",
            IS => "IS",
            LO => "LO",
            LT => "LT",
            OB => "OB",
            OD => "OD",
            OF => "OF",
            OL => "OL",
            OV => "OV",
            OW => "OW",
            PN => "PN",
            SH => "SH",
            SL => "SL",
            SQ => "SQ",
            SS => "SS",
            ST => "ST",
            SV => "SV",
            TM => "TM",
            UC => "UC",
            UI => "UI",
            UL => "UL",
            UN => "UN",
            UR => "UR",
            US => "US",
            UT => "UT",
            UV => "UV",
        }
    }

    /// Explicit VR encodings of these VRs use two reserved bytes followed by
    /// a 32-bit length; all others use a 16-bit length.
    pub fn has_long_length(self) -> bool {
        matches!(self, OB | OD | OF | OL | OV | OW | SQ | SV | UC | UN | UR | UT | UV)
    }

    /// Character string VRs.
    pub fn is_string(self) -> bool {
        matches!(
            self,
            AE | AS | CS | DA | DS | DT | IS | LO | LT | PN | SH | ST | TM | UC | UI | UR | UT
        )
    }

    /// VRs holding free text that the cleaner may rewrite.
    pub fn is_text(self) -> bool {
        matches!(self, SH | LO | ST | LT | UT | UC | PN)
    }

    /// String VRs whose value is never split on backslash.
    pub fn is_single_valued_text(self) -> bool {
        matches!(self, LT | ST | UT | UR)
    }

    pub fn is_temporal(self) -> bool {
        matches!(self, DA | DT | TM)
    }

    /// Padding byte used to bring odd-length values to even length.
    pub fn padding(self) -> u8 {
        match self {
            UI => 0x00,
            vr if vr.is_string() => b' ',
            _ => 0x00,
        }
    }

    /// Maximum length in characters of a single value, where the standard sets one.
    /// For PN the limit applies to each component group.
    pub fn max_value_len(self) -> Option<usize> {
        match self {
            AE => Some(16),
            AS => Some(4),
            CS => Some(16),
            DA => Some(8),
            DS => Some(16),
            DT => Some(26),
            IS => Some(12),
            LO => Some(64),
            LT => Some(10240),
            PN => Some(64),
            SH => Some(16),
            ST => Some(1024),
            TM => Some(14),
            UI => Some(64),
            _ => None,
        }
    }

    /// Size in bytes of one value for fixed-width binary VRs.
    pub fn binary_unit(self) -> Option<usize> {
        match self {
            US | SS | OW => Some(2),
            UL | SL | FL | OF | OL | AT => Some(4),
            FD | OD | SV | UV | OV => Some(8),
            OB | UN => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for VR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown value representation {0:?}")]
pub struct VrParseError(pub String);

impl FromStr for VR {
    type Err = VrParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.trim().as_bytes();
        if b.len() != 2 {
            return Err(VrParseError(s.to_string()));
        }
        VR::from_bytes([b[0], b[1]]).ok_or_else(|| VrParseError(s.to_string()))
    }
}
