//! Dealer to participants through the text formats only.

use groupshare::scheme::{format_bundle, parse_bundle, schemes, DealRequest, GroupCodec, Secret};
use groupshare::securesum::{transcript_privacy_audit, Observer};
use groupshare::Presentation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn shares_survive_serialization() {
    let registry = schemes();
    for (mode, t, p, secret) in [
        ("nn", None, None, "5eed"),
        ("tn", Some(3), Some(257u64), "200"),
    ] {
        let scheme = registry.get(mode).unwrap();
        let (cfg, s) = scheme.prepare(&DealRequest { n: 4, t, p, secret }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let groups = cfg.sample_groups(&mut rng).unwrap();
        let cols = scheme.deal(&cfg, &s, &groups, &mut rng).unwrap();

        // Each participant only ever sees text: its presentation and its bundle.
        let decoded: Vec<_> = groups
            .iter()
            .zip(&cols)
            .map(|(g, wc)| {
                let g: Presentation = g.to_string().parse().unwrap();
                let wc = parse_bundle(&format_bundle(wc)).unwrap();
                (wc.participant, GroupCodec::new(&g).decode(&wc).unwrap())
            })
            .collect();
        assert_eq!(scheme.combine(&cfg, &decoded).unwrap(), s);

        let (via_ring, tr) = scheme.combine_secure(&cfg, &decoded, &mut rng).unwrap();
        assert_eq!(via_ring, s);
        tr.verify_replay().unwrap();
        for j in 1..=tr.participants() {
            let report = transcript_privacy_audit(&tr, Observer::Participant(j)).unwrap();
            assert!(report.reveals_nothing(), "{mode}: {report}");
        }
        if let Secret::Bits(c) = &s {
            assert_eq!(c.to_hex(), secret);
        }
    }
}
