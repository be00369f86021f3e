use qpkc::bitlinalg::BitVec;
use qpkc::gf2m::FieldParams;
use qpkc::mceliece::{decrypt, encrypt, keygen, sample_error};
use qpkc::seed::{stream_rng, Stream};
use rand::Rng;

#[test]
fn randomized_decoding_at_m10() {
    let (pk, sk) = keygen(FieldParams::with_default_modulus(10).unwrap(), 1024, 50, 21).unwrap();
    assert_eq!((pk.n(), pk.k(), pk.t()), (1024, 524, 50));
    let code = sk.code();
    let mut rng = stream_rng(21, Stream::Error);
    for _ in 0..50 {
        let w = rng.gen_range(0..=50);
        let e = sample_error(1024, w, &mut rng).unwrap();
        assert_eq!(code.decode(&code.syndrome(&e).unwrap()).unwrap(), e);
    }
    for _ in 0..20 {
        let m = BitVec::random(524, &mut rng);
        let ct = encrypt(&pk, &m, &mut rng).unwrap();
        assert_eq!(decrypt(&sk, &ct).unwrap(), m);
    }
}

#[test]
fn shorter_codes_at_m8() {
    for (n, t) in [(256, 16), (200, 10), (64, 4)] {
        let (pk, sk) = keygen(FieldParams::with_default_modulus(8).unwrap(), n, t, 3).unwrap();
        assert_eq!(pk.k(), n - 8 * t);
        let mut rng = stream_rng(3, Stream::Error);
        for _ in 0..20 {
            let m = BitVec::random(pk.k(), &mut rng);
            let ct = encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(decrypt(&sk, &ct).unwrap(), m);
        }
    }
}
