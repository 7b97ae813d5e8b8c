mod support;

use num_bigint::BigUint;
use support::{all_uws, count_c, count_s, uw};
use udooc::digraph::AdjacencySet;
use udooc::enumeration::{count_codewords, count_s as table_s, growth_rate};

fn as_u64(v: &[BigUint]) -> Vec<u64> {
    v.iter().map(|x| x.try_into().unwrap()).collect()
}

#[test]
fn c_and_s_match_brute_force() {
    for len in 2..=5 {
        for k in all_uws(len) {
            let c = as_u64(&count_codewords(&k, 12).unwrap());
            let s = as_u64(&table_s(&k, 12).unwrap());
            for n in 0..=12 {
                assert_eq!(c[n], count_c(&k, n), "c k={k} n={n}");
                assert_eq!(s[n], count_s(&k, n), "s k={k} n={n}");
            }
        }
    }
}

#[test]
fn walks_count_codewords_for_nonempty_lengths() {
    for len in 2..=6 {
        for k in all_uws(len) {
            let adj = AdjacencySet::new(&k).unwrap();
            let walks = adj.walk_counts(12 + len - 1);
            for n in 1..=12 {
                assert_eq!(walks[n + len - 1], BigUint::from(count_c(&k, n)), "k={k} n={n}");
            }
        }
    }
}

#[test]
fn counts_invariant_under_reverse_and_complement() {
    for len in 2..=7 {
        for k in all_uws(len) {
            let c = count_codewords(&k, 20).unwrap();
            assert_eq!(c, count_codewords(&k.reverse(), 20).unwrap(), "{k}");
            assert_eq!(c, count_codewords(&k.complement(), 20).unwrap(), "{k}");
        }
    }
}

#[test]
fn ratio_approaches_growth_rate() {
    for s in ["00", "000", "0001", "0110", "010", "00000"] {
        let k = uw(s);
        let c = count_codewords(&k, 200).unwrap();
        let ratio = udooc_ratio(&c[199], &c[200]);
        let g = growth_rate(&k).unwrap().value;
        assert!((ratio - g).abs() < 1e-9, "{s}: {ratio} vs {g}");
    }
}

fn udooc_ratio(a: &BigUint, b: &BigUint) -> f64 {
    // Both are huge; compare the leading 60 bits.
    let shift = a.bits().saturating_sub(60);
    let a = (a >> shift).to_string().parse::<f64>().unwrap();
    let b = (b >> shift).to_string().parse::<f64>().unwrap();
    b / a
}
