//! End-to-end extraction + designation on the two reference fastener sets,
//! with the exact property values pinned (key widths, lengths, thread
//! lengths, nut height, washer bore/thickness, ring fits, key sections).
//! Torque values arrive through BOM metadata the way a designer sets them.

use geomcore::build::make_standard_part;
use geomcore::{PartModel, PitchKind, StandardClass};
use rules::{designate, extract_properties, validate, StandardProperties};

fn close(a: Option<f64>, b: f64) -> bool {
    a.is_some_and(|a| (a - b).abs() < 1e-9)
}

/// Validate, extract, and designate in one pass, as the pipeline does.
fn run(part: &PartModel, class: StandardClass) -> (StandardProperties, String) {
    let report = validate(part, class);
    assert!(report.passed, "{class:?} validation: {:?}", report.failures().collect::<Vec<_>>());
    let props = extract_properties(part, class).unwrap();
    let d = designate(class, &props).unwrap();
    (props, d.text)
}

#[test]
fn pendulum_fixture_fasteners() {
    // M12 cap screw, 80 long, strength 10.9, torque set to 1 N·m in the BOM.
    let mut screw =
        make_standard_part(StandardClass::HexSocketHeadCapScrew, "M12x80", Some("10.9")).unwrap();
    screw.features.as_mut().unwrap().bom_torque = Some(1.0);
    let (props, text) = run(&screw, StandardClass::HexSocketHeadCapScrew);
    assert_eq!(text, "ISO 4762 - M12x80 - 10.9");
    assert!(close(props.key_width, 10.0));
    assert!(close(props.overall_length, 80.0));
    assert!(close(props.thread_length, 36.0));
    assert!(close(props.thread_pitch, 1.75));
    assert_eq!(props.pitch_kind, Some(PitchKind::Regular));
    assert_eq!(props.strength_class.as_deref(), Some("10.9"));
    assert_eq!(props.assembly_torque, Some(1.0));

    let mut nut = make_standard_part(StandardClass::HexNut, "M12", Some("10.9")).unwrap();
    nut.features.as_mut().unwrap().bom_torque = Some(1.0);
    let (props, text) = run(&nut, StandardClass::HexNut);
    assert_eq!(text, "ISO 4032 - M12 - 10.9");
    assert!(close(props.key_width, 18.0));
    assert!(close(props.height, 10.8));
    assert!(close(props.nominal_diameter, 12.0));
    assert_eq!(props.assembly_torque, Some(1.0));

    let washer = make_standard_part(StandardClass::ChamferedPlainWasher, "12", None).unwrap();
    let (props, text) = run(&washer, StandardClass::ChamferedPlainWasher);
    assert_eq!(text, "ISO 7090 - 12");
    assert!(close(props.nominal_diameter, 12.0));
    assert!(close(props.thickness, 2.5));
    assert_eq!(props.strength_class, None, "washers carry no strength class");
}

#[test]
fn gripper_drive_fasteners() {
    // M5 cap screw, 30 long, strength 8.8, torque set to 2 N·m in the BOM.
    let mut screw =
        make_standard_part(StandardClass::HexSocketHeadCapScrew, "M5x30", Some("8.8")).unwrap();
    screw.features.as_mut().unwrap().bom_torque = Some(2.0);
    let (props, text) = run(&screw, StandardClass::HexSocketHeadCapScrew);
    assert_eq!(text, "ISO 4762 - M5x30 - 8.8");
    assert!(close(props.key_width, 4.0));
    assert!(close(props.overall_length, 30.0));
    assert!(close(props.thread_length, 22.0));
    assert_eq!(props.strength_class.as_deref(), Some("8.8"));
    assert_eq!(props.assembly_torque, Some(2.0));

    for (size, expected) in [("10", "DIN 471 - 10x1"), ("15", "DIN 471 - 15x1")] {
        let ring = make_standard_part(StandardClass::RetainingRingShaft, size, None).unwrap();
        let (props, text) = run(&ring, StandardClass::RetainingRingShaft);
        assert_eq!(text, expected);
        assert!(close(props.fit_diameter, size.parse().unwrap()));
        assert!(close(props.thickness, 1.0));
    }

    for (size, expected) in
        [("5x5x12", "DIN 6885 - A - 5x5x12"), ("3x3x11", "DIN 6885 - A - 3x3x11")]
    {
        let key = make_standard_part(StandardClass::ParallelKeyA, size, None).unwrap();
        let (props, text) = run(&key, StandardClass::ParallelKeyA);
        assert_eq!(text, expected);
        let mut dims = size.split('x').map(|p| p.parse::<f64>().unwrap());
        assert!(close(props.key_section_width, dims.next().unwrap()));
        assert!(close(props.key_section_height, dims.next().unwrap()));
        assert!(close(props.key_length, dims.next().unwrap()));
    }
}
