use std::collections::HashSet;
use std::time::Instant;

use weil_core::census::{
    census_weil_set, smoothness_char2, smoothness_char2_in_field, verify_census, Census,
    CensusCache, CensusOptions, Curve,
};
use weil_core::smallfield::{base_field, extend, poly, Element};
use weil_core::PrimePower;

fn run(q: i64) -> (Census, weil_core::CensusSet) {
    let census = Census::new(q, false).unwrap();
    let start = Instant::now();
    let set = census.run().unwrap();
    eprintln!(
        "census q={q}: {} models, {} classes in {:.2?}",
        set.models,
        set.classes.len(),
        start.elapsed()
    );
    (census, set)
}

#[test]
fn census_matches_classification_q2() {
    let (census, set) = run(2);
    verify_census(&census, &set).unwrap();
    assert!(set.contains(1, 0));
    for (a, b) in [(0, 3), (1, 4), (2, 5), (3, 6), (-2, 5)] {
        assert!(!set.contains(a, b), "({a},{b}) realized over F_2");
    }
}

#[test]
fn census_matches_classification_q3() {
    let (census, set) = run(3);
    verify_census(&census, &set).unwrap();
    assert!(set.contains(1, 4));
}

#[test]
fn census_matches_classification_q5() {
    let (census, set) = run(5);
    verify_census(&census, &set).unwrap();
    assert!(!set.contains(8, 26));
}

#[test]
fn census_matches_classification_q7() {
    let (census, set) = run(7);
    verify_census(&census, &set).unwrap();
}

/// Odd q: the enumeration count equals a direct filter over every
/// coefficient vector of degree <= 6.
#[test]
fn model_count_matches_direct_filter() {
    for q in [3i64, 5] {
        let census = Census::new(q, false).unwrap();
        let field = census.field(1).clone();
        let qu = q as u32;
        let mut direct = 0u64;
        for id in 0..qu.pow(7) {
            let mut v = id;
            let f: Vec<Element> = (0..7)
                .map(|_| {
                    let c = Element::new(v % qu);
                    v /= qu;
                    c
                })
                .collect();
            let f = poly::trim(f);
            if matches!(poly::degree(&f), Some(5 | 6)) && poly::is_squarefree(&field, &f) {
                direct += 1;
            }
        }
        assert_eq!(census.curves().count() as u64, direct, "q={q}");
    }
}

/// Singular points of the char-2 models only need to be searched for in
/// F_{q^2} and F_{q^3}; for q = 2 this agrees with a scan of all of F_{q^6}.
#[test]
fn char2_subextension_scan_equals_full_scan() {
    let f2 = base_field(2, 1).unwrap();
    let f64 = extend(&f2, 6).unwrap();
    let census = Census::new(2, false).unwrap();
    let mut smooth = 0;
    for id in 0..census.candidate_count() {
        let Curve::Char2(c) = census.candidate(id) else {
            unreachable!()
        };
        let by_subfields = smoothness_char2(2, &c.h, &c.f).unwrap();
        let by_full_scan = smoothness_char2_in_field(&f64, &c.h, &c.f);
        assert_eq!(by_subfields, by_full_scan, "{c:?}");
        smooth += by_subfields as u32;
    }
    assert!(smooth > 0);
}

#[test]
fn parallel_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = HashSet::new();
    for jobs in [1, 3, 8] {
        let options = CensusOptions {
            jobs: Some(jobs),
            cache_dir: Some(dir.path().to_owned()),
            force: true,
            ..Default::default()
        };
        census_weil_set(3, &options).unwrap();
        bytes.insert(std::fs::read(CensusCache::new(dir.path()).path(3)).unwrap());
    }
    assert_eq!(bytes.len(), 1);
}

#[test]
fn valid_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = CensusCache::new(dir.path());
    let options = CensusOptions {
        cache_dir: Some(dir.path().to_owned()),
        ..Default::default()
    };
    let first = census_weil_set(2, &options).unwrap();
    // A doctored but well-formed cache file is returned as-is.
    let mut doctored = first.clone();
    let extra = doctored.classes.remove(&(1, 0)).unwrap();
    *doctored.classes.values_mut().next().unwrap() += extra;
    cache.store(&doctored).unwrap();
    assert_eq!(census_weil_set(2, &options).unwrap(), doctored);
    let forced = CensusOptions {
        force: true,
        ..options.clone()
    };
    assert_eq!(census_weil_set(2, &forced).unwrap(), first);
    assert_eq!(cache.load(PrimePower::new(2).unwrap()).unwrap(), first);
}

#[test]
fn census_matches_classification_q9() {
    let (census, set) = run(9);
    verify_census(&census, &set).unwrap();
    assert!(set.contains(6, 20));
}
