mod common;

use common::{construction, options, CONWAY, SECOND};
use hillcap_core::cache::{self, CacheError, CacheStatus, FORMAT_VERSION, MAGIC};

#[test]
fn encode_decode_round_trip() {
    for poly in [CONWAY, SECOND] {
        let cached = cache::to_cached(construction(poly));
        let bytes = cache::encode(&cached);
        assert_eq!(&bytes[..8], MAGIC);
        let back = cache::decode(&bytes).unwrap();
        assert_eq!(back, cached);
        let rebuilt = cache::from_cached(back).unwrap();
        assert_eq!(rebuilt.scheme, construction(poly).scheme);
        assert_eq!(rebuilt.connection.set, construction(poly).connection.set);
    }
}

#[test]
fn decode_rejects_damage() {
    let bytes = cache::encode(&cache::to_cached(construction(CONWAY)));
    assert!(matches!(cache::decode(b"nope"), Err(CacheError::BadMagic)));
    let mut stale = bytes.clone();
    stale[8..12].copy_from_slice(&(FORMAT_VERSION - 1).to_le_bytes());
    assert!(matches!(
        cache::decode(&stale),
        Err(CacheError::StaleVersion { .. })
    ));
    assert!(matches!(
        cache::decode(&bytes[..5000]),
        Err(CacheError::Malformed(_))
    ));
    let mut bad_color = bytes.clone();
    bad_color[30] = 200;
    assert!(cache::decode(&bad_color).is_err());
}

#[test]
fn load_or_build_miss_hit_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let opts = options(CONWAY);
    let (a, s) = cache::load_or_build(Some(dir.path()), &opts).unwrap();
    assert_eq!(s, CacheStatus::Miss);
    let path = dir.path().join(cache::cache_file_name(&opts));
    assert!(path.exists());
    let (b, s) = cache::load_or_build(Some(dir.path()), &opts).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    assert_eq!(a.scheme, b.scheme);
    assert_eq!(a.tau, b.tau);

    // a file written by an older format is rebuilt in place
    let mut bytes = std::fs::read(&path).unwrap();
    bytes[8..12].copy_from_slice(&1u32.to_le_bytes());
    std::fs::write(&path, &bytes).unwrap();
    let (c, s) = cache::load_or_build(Some(dir.path()), &opts).unwrap();
    assert_eq!(s, CacheStatus::Rebuilt);
    assert_eq!(c.scheme, a.scheme);
    assert_eq!(std::fs::read(&path).unwrap(), cache::encode(&cache::to_cached(&a)));

    let (_, s) = cache::load_or_build(None, &opts).unwrap();
    assert_eq!(s, CacheStatus::Disabled);
}

#[test]
fn file_names_separate_keys() {
    let a = cache::cache_file_name(&options(CONWAY));
    let b = cache::cache_file_name(&options(SECOND));
    assert_ne!(a, b);
    assert_eq!(a, "scheme-10eb-e7-std0.hcs");
}

#[test]
fn matrix_csv_shapes() {
    let s = &construction(CONWAY).scheme;
    let p = cache::matrix_csv(s, false);
    assert_eq!(p.lines().count(), 11);
    assert!(p.starts_with("j,0,1,2,3,4,5,6,7,8,9\n0,1,117,234,"));
    let q = cache::matrix_csv(s, true);
    assert_eq!(q.lines().nth(2).unwrap(), "1,1,-27,10,10,15,63,30,30,-66,-66");
}
