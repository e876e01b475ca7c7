use serde::{Deserialize, Serialize};

/// The ten part classes the recognizer distinguishes.
///
/// Codes are stable and used in labels, checkpoints and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StandardClass {
    HexHeadScrew,
    HexSocketHeadCapScrew,
    HexSocketCountersunkScrew,
    HexNut,
    RetainingRingShaft,
    RetainingRingBore,
    ParallelKeyA,
    ParallelKeyC,
    ChamferedPlainWasher,
    Other,
}

impl StandardClass {
    pub const ALL: [StandardClass; 10] = [
        StandardClass::HexHeadScrew,
        StandardClass::HexSocketHeadCapScrew,
        StandardClass::HexSocketCountersunkScrew,
        StandardClass::HexNut,
        StandardClass::RetainingRingShaft,
        StandardClass::RetainingRingBore,
        StandardClass::ParallelKeyA,
        StandardClass::ParallelKeyC,
        StandardClass::ChamferedPlainWasher,
        StandardClass::Other,
    ];

    /// The nine classes backed by a standard (everything except `Other`).
    pub const STANDARD: [StandardClass; 9] = [
        StandardClass::HexHeadScrew,
        StandardClass::HexSocketHeadCapScrew,
        StandardClass::HexSocketCountersunkScrew,
        StandardClass::HexNut,
        StandardClass::RetainingRingShaft,
        StandardClass::RetainingRingBore,
        StandardClass::ParallelKeyA,
        StandardClass::ParallelKeyC,
        StandardClass::ChamferedPlainWasher,
    ];

    /// Stable numeric code, 1 through 10.
    pub fn code(self) -> u8 {
        match self {
            StandardClass::HexHeadScrew => 1,
            StandardClass::HexSocketHeadCapScrew => 2,
            StandardClass::HexSocketCountersunkScrew => 3,
            StandardClass::HexNut => 4,
            StandardClass::RetainingRingShaft => 5,
            StandardClass::RetainingRingBore => 6,
            StandardClass::ParallelKeyA => 7,
            StandardClass::ParallelKeyC => 8,
            StandardClass::ChamferedPlainWasher => 9,
            StandardClass::Other => 10,
        }
    }

    pub fn from_code(code: u8) -> Option<StandardClass> {
        if code == 0 {
            return None;
        }
        StandardClass::ALL.get(code as usize - 1).copied()
    }

    /// Human-readable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            StandardClass::HexHeadScrew => "hex head screw",
            StandardClass::HexSocketHeadCapScrew => "hex socket head cap screw",
            StandardClass::HexSocketCountersunkScrew => "hex socket countersunk screw",
            StandardClass::HexNut => "hex nut",
            StandardClass::RetainingRingShaft => "retaining ring (shaft)",
            StandardClass::RetainingRingBore => "retaining ring (bore)",
            StandardClass::ParallelKeyA => "parallel key, form A",
            StandardClass::ParallelKeyC => "parallel key, form C",
            StandardClass::ChamferedPlainWasher => "chamfered plain washer",
            StandardClass::Other => "non-standard part",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_one_to_ten_in_order() {
        for (i, c) in StandardClass::ALL.iter().enumerate() {
            assert_eq!(c.code() as usize, i + 1);
            assert_eq!(StandardClass::from_code(c.code()), Some(*c));
        }
        assert_eq!(StandardClass::from_code(0), None);
        assert_eq!(StandardClass::from_code(11), None);
    }
}
