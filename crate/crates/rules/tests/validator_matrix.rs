//! Cross-class soundness of the validator: every generated standard part
//! passes validation as its own class and fails as every other class.

use geomcore::build::make_standard_part;
use geomcore::StandardClass;
use rules::validate;

const MATRIX: [(StandardClass, [&str; 5]); 9] = [
    (StandardClass::HexHeadScrew, ["M5x30", "M6x40", "M8x40", "M12x60", "M16x60"]),
    (StandardClass::HexSocketHeadCapScrew, ["M4x20", "M5x30", "M8x40", "M12x80", "M16x90"]),
    (StandardClass::HexSocketCountersunkScrew, ["M4x20", "M5x30", "M8x40", "M12x60", "M16x80"]),
    (StandardClass::HexNut, ["M4", "M6", "M10", "M12", "M20"]),
    (StandardClass::RetainingRingShaft, ["8", "12", "15", "20", "30"]),
    (StandardClass::RetainingRingBore, ["8", "12", "19", "24", "30"]),
    (StandardClass::ParallelKeyA, ["2x2x10", "3x3x11", "5x5x12", "6x6x25", "10x8x50"]),
    (StandardClass::ParallelKeyC, ["2x2x12", "3x3x16", "4x4x25", "5x5x40", "6x6x60"]),
    (StandardClass::ChamferedPlainWasher, ["4", "6", "10", "12", "20"]),
];

#[test]
fn every_part_passes_its_class_and_fails_the_rest() {
    let mut passes = 0;
    let mut rejections = 0;
    for (class, sizes) in MATRIX {
        for size in sizes {
            let part = make_standard_part(class, size, None)
                .unwrap_or_else(|e| panic!("building {class:?} {size}: {e}"));
            for (claimed, _) in MATRIX {
                let report = validate(&part, claimed);
                assert_eq!(report.class, claimed);
                if claimed == class {
                    assert!(
                        report.passed,
                        "{class:?} {size} must pass as itself; failures: {:?}",
                        report.failures().collect::<Vec<_>>()
                    );
                    passes += 1;
                } else {
                    assert!(
                        !report.passed,
                        "{class:?} {size} must not pass as {claimed:?}"
                    );
                    rejections += 1;
                }
            }
            // A claim of "non-standard" on a standard part fails too.
            assert!(!validate(&part, StandardClass::Other).passed);
        }
    }
    assert_eq!(passes, 9 * 5);
    assert_eq!(rejections, 9 * 5 * 8);
}

#[test]
fn passing_reports_name_the_matched_size() {
    // The dimension requirement resolves to a concrete table row wherever
    // tables apply; retaining rings have no dimension requirement.
    for (class, sizes) in MATRIX {
        let part = make_standard_part(class, sizes[3], None).unwrap();
        let report = validate(&part, class);
        let ring = matches!(
            class,
            StandardClass::RetainingRingShaft | StandardClass::RetainingRingBore
        );
        assert_eq!(
            report.matched_row.is_some(),
            !ring,
            "{class:?}: matched row presence"
        );
    }
}
