use qho_phase::checks::Model;
use qho_phase::fock::OscParams;
use qho_phase::io::{
    cartesian_basis_hash, doubled_basis_hash, read_triplets, spherical_basis_hash, write_triplets,
};
use qho_phase::phase1d::EdgeMode;

#[test]
fn phase_exponential_round_trips_through_text() {
    let m = Model::build(6, OscParams::new(1.0, 2.0).unwrap(), EdgeMode::Cyclic).unwrap();
    let hash = doubled_basis_hash(&m.phase);
    for op in [&m.phase.e2, &m.phase.sin2, &m.phase.cos2] {
        let mut buf = Vec::new();
        write_triplets(&mut buf, op, "spherical-doubled", &hash).unwrap();
        let (header, back) = read_triplets(buf.as_slice()).unwrap();
        assert_eq!(header.basis_sha256, hash);
        assert_eq!(header.rows, m.phase.dim());
        assert_eq!(&back, op);
    }
}

#[test]
fn basis_hashes_distinguish_bases() {
    let a = Model::build(4, OscParams::default(), EdgeMode::Open).unwrap();
    let b = Model::build(5, OscParams::default(), EdgeMode::Open).unwrap();
    assert_ne!(
        cartesian_basis_hash(&a.fock.basis),
        cartesian_basis_hash(&b.fock.basis)
    );
    assert_ne!(
        spherical_basis_hash(&a.spherical),
        spherical_basis_hash(&b.spherical)
    );
    assert_ne!(
        spherical_basis_hash(&a.spherical),
        doubled_basis_hash(&a.phase)
    );
    let a2 = Model::build(4, OscParams::new(3.0, 0.5).unwrap(), EdgeMode::Cyclic).unwrap();
    assert_eq!(doubled_basis_hash(&a.phase), doubled_basis_hash(&a2.phase));
}
