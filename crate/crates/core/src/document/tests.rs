use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::quadruple::tests::{q1, q2, random_strong_quadruple};

#[test]
fn quadruple_document_round_trips_bit_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for q in [
        q1(),
        q2(),
        random_strong_quadruple(&mut rng, 4, 2, 3),
        AdmissibleQuadruple::empty(1, 2),
    ] {
        let doc = QuadrupleDocument::from_quadruple(&q);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: QuadrupleDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, doc);
        let back = parsed.to_quadruple(1e-9).unwrap();
        assert_eq!(back.alpha(), q.alpha());
        assert_eq!(back.s0(), q.s0());
        assert_eq!(back.theta1(), q.theta1());
        assert_eq!(back.theta2(), q.theta2());
    }
}

#[test]
fn realization_document_round_trips_bit_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(82);
    let q = random_strong_quadruple(&mut rng, 3, 2, 1);
    for r in [q.phi1(), q.phi2()] {
        let doc = RealizationDocument::from_realization(&r);
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: RealizationDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, doc);
        let back = parsed.to_realization().unwrap();
        assert_eq!(back.state(), r.state());
        assert_eq!(back.input(), r.input());
        assert_eq!(back.output(), r.output());
        assert_eq!(back.convention(), r.convention());
    }
}

#[test]
fn field_names_follow_the_schema() {
    let doc = QuadrupleDocument::from_quadruple(&q1());
    let json = serde_json::to_value(&doc).unwrap();
    for key in ["schemaVersion", "n", "m1", "m2", "alpha", "s0", "theta1", "theta2"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["schemaVersion"], "1");
    assert_eq!(json["alpha"][0][0][1], 1.0); // alpha = i as [0.0, 1.0]

    let rdoc = RealizationDocument::from_realization(&q1().phi1());
    let rjson = serde_json::to_value(&rdoc).unwrap();
    for key in ["schemaVersion", "convention", "gamma", "inputMap", "outputMap"] {
        assert!(rjson.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rjson["convention"], "continuous");
}

#[test]
fn bad_documents_are_rejected() {
    let mut doc = QuadrupleDocument::from_quadruple(&q1());
    doc.schema_version = "2".into();
    assert!(matches!(
        doc.to_quadruple(1e-9),
        Err(Error::InvalidArgument(_))
    ));

    let mut doc = QuadrupleDocument::from_quadruple(&q1());
    doc.n = 3;
    assert!(matches!(
        doc.to_quadruple(1e-9),
        Err(Error::DimensionMismatch(_))
    ));

    let mut rdoc = RealizationDocument::from_realization(&q1().phi1());
    rdoc.convention = "sideways".into();
    assert!(matches!(
        rdoc.to_realization(),
        Err(Error::InvalidArgument(_))
    ));

    // Ragged matrix rows.
    let json = r#"{"schemaVersion":"1","convention":"continuous",
        "gamma":[[[0.0,1.0]],[[0.0,0.0]]],
        "inputMap":[[[1.0,0.0]]],"outputMap":[[[1.0,0.0]]]}"#;
    let parsed: RealizationDocument = serde_json::from_str(json).unwrap();
    assert!(parsed.to_realization().is_err());
}
