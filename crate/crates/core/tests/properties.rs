// SPDX-License-Identifier: Apache-2.0

use coinv_core::bijections::{
    join_first_high, join_last_low, merge_tops, separate_tops, split_first_high, split_last_low, swap_adjacent,
    ONE_TWO, ZERO_THREE,
};
use coinv_core::pipelines::{
    composed_shift, general_forward, general_inverse, simplified_shift, simplified_shift_inv, Route,
};
use coinv_core::qpoly::{q_binomial, q_multinomial, QPoly};
use coinv_core::trace::Tracer;
use coinv_core::verify::{sweep, Bounds, Report};
use coinv_core::words::{classify, gf, p_max, p_one, Class, Freqs, Params, Position, Word};
use proptest::prelude::*;

/// Pair count by definition, kept independent of the library.
fn coinv_oracle(letters: &[u8]) -> u64 {
    let mut count = 0;
    for a in 0..letters.len() {
        for b in a + 1..letters.len() {
            if letters[a] < letters[b] {
                count += 1;
            }
        }
    }
    count
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

fn word_over(top: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=top, 1..=max_len).prop_map(Word::new)
}

fn top_and_word(max_len: usize) -> impl Strategy<Value = (u8, Word)> {
    (3u8..=5).prop_flat_map(move |top| (Just(top), word_over(top, max_len)))
}

fn is_palindromic(p: &QPoly) -> bool {
    let c = p.coeffs();
    c.iter().eq(c.iter().rev())
}

proptest! {
    #[test]
    fn coinv_matches_pair_count(letters in prop::collection::vec(0u8..6, 0..14)) {
        prop_assert_eq!(Word::new(letters.clone()).coinv(), coinv_oracle(&letters));
    }

    #[test]
    fn coinv_append(letters in prop::collection::vec(0u8..6, 0..12), x in 0u8..6) {
        let w = Word::new(letters.clone());
        let smaller = letters.iter().filter(|&&y| y < x).count() as u64;
        prop_assert_eq!(w.concat(&Word::new(vec![x])).coinv(), w.coinv() + smaller);
    }

    #[test]
    fn binomial_symmetry_and_value_at_one(n in 0i64..18, k in 0i64..18) {
        prop_assume!(k <= n);
        let p = q_binomial(n, k).unwrap();
        prop_assert_eq!(&p, &q_binomial(n, n - k).unwrap());
        prop_assert!(is_palindromic(&p));
        prop_assert_eq!(p.eval_at_one().unwrap(), binomial(n as u128, k as u128));
    }

    #[test]
    fn multinomial_is_order_free(parts in prop::collection::vec(0i64..4, 1..5)) {
        let n: i64 = parts.iter().sum();
        let mut reversed = parts.clone();
        reversed.reverse();
        let mut sorted = parts.clone();
        sorted.sort();
        let p = q_multinomial(n, &parts).unwrap();
        prop_assert_eq!(&p, &q_multinomial(n, &reversed).unwrap());
        prop_assert_eq!(&p, &q_multinomial(n, &sorted).unwrap());
    }

    #[test]
    fn class_gf_is_multinomial(counts in prop::collection::vec(0usize..4, 1..5)) {
        let total: usize = counts.iter().sum();
        prop_assume!(total <= 10);
        let mut freqs = vec![0];
        freqs.extend_from_slice(&counts);
        let parts: Vec<i64> = counts.iter().map(|&c| c as i64).collect();
        prop_assert_eq!(gf(&Freqs::new(freqs), |_| true).unwrap(), q_multinomial(total as i64, &parts).unwrap());
    }

    #[test]
    fn positions_stay_in_range((top, w) in top_and_word(10)) {
        prop_assume!(w.count(1) + w.count(top) > 0);
        let (n, k) = (w.len(), w.count(top));
        let l = w.count(1) + k;
        match p_one(&w, top) {
            Position::Finite(i) => prop_assert!(l > k && (1..=n - l + 1).contains(&i)),
            Position::Infinite => prop_assert_eq!(l, k),
        }
        match p_max(&w, top) {
            Position::Finite(j) => prop_assert!(k > 0 && (1..=n - k + 1).contains(&j)),
            Position::Infinite => prop_assert_eq!(k, 0),
        }
        if k == 0 {
            prop_assert_eq!(classify(&w, top), Class::Greater);
        }
        if k == l {
            prop_assert_eq!(classify(&w, top), Class::LessEq);
        }
    }

    #[test]
    fn first_high_and_last_low_roundtrip(letters in prop::collection::vec(prop::bool::ANY, 1..12)) {
        let highs: Vec<u8> = letters.iter().map(|&b| if b { 3 } else { 0 }).collect();
        let w = Word::new(highs);
        prop_assume!(w.count(3) > 0);
        let sw = split_first_high(&w, ZERO_THREE).unwrap();
        prop_assert_eq!(sw.weight(), w.coinv());
        prop_assert_eq!(join_first_high(&sw, w.len() - 1, w.count(3), ZERO_THREE).unwrap(), w.clone());

        let v = w.map(|x| if x == 3 { 2 } else { 1 });
        prop_assume!(v.count(1) > 0);
        let sv = split_last_low(&v, ONE_TWO).unwrap();
        prop_assert_eq!(sv.weight(), v.coinv());
        prop_assert_eq!(join_last_low(&sv, v.len() - 1, v.count(1), ONE_TWO).unwrap(), v);
    }

    #[test]
    fn tops_split_roundtrip(w in word_over(3, 12)) {
        let (y, z) = separate_tops(&w).unwrap();
        prop_assert_eq!(y.coinv() + z.coinv(), w.coinv());
        prop_assert_eq!(merge_tops(&y, &z).unwrap(), w);
    }

    #[test]
    fn adjacent_swap_is_a_weight_preserving_involution(w in word_over(5, 12), l in 1u8..5) {
        let v = swap_adjacent(&w, l);
        prop_assert_eq!(v.coinv(), w.coinv());
        prop_assert_eq!(v.count(l), w.count(l + 1));
        prop_assert_eq!(swap_adjacent(&v, l), w);
    }

    #[test]
    fn general_routes_roundtrip((top, w) in top_and_word(9)) {
        prop_assume!(w.count(1) > 0);
        let route = match classify(&w, top) {
            Class::Greater => Route::Greater,
            Class::LessEq => Route::LessEq,
        };
        let res = general_forward(&w, top, route, &mut Tracer::off()).unwrap();
        prop_assert_eq!(res.target.weight(), w.coinv());
        prop_assert_eq!(general_inverse(&res.target, &res.params, route, &mut Tracer::off()).unwrap(), w);
    }

    #[test]
    fn simplified_shift_is_the_composed_route((top, w) in top_and_word(9)) {
        prop_assume!(w.count(1) > 0);
        prop_assume!(classify(&w, top) == Class::Greater);
        let out = simplified_shift(&w, top).unwrap();
        let (composed, k) = composed_shift(&w, top, &mut Tracer::off()).unwrap();
        prop_assert_eq!(&composed, &out.word);
        prop_assert_eq!(k, w.count(top));
        prop_assert_eq!(w.coinv(), out.word.coinv() + k as u64);
        let trace = out.trace.unwrap();
        prop_assert!(trace.is_conserved());
        prop_assert_eq!(trace.net_shift(), k as i64);
        prop_assert_eq!(simplified_shift_inv(&out.word, top).unwrap().word, w);
    }
}

#[test]
fn prefix_sum_and_factorization() {
    // Sum over the position of the first high letter, and the split into
    // high positions and the remaining subword.
    for a in 0..9i64 {
        for b in 1..=a + 1 {
            let lhs = gf(
                &Freqs::from_pairs(&[(0, (a + 1 - b) as usize), (3, b as usize)]),
                |_| true,
            )
            .unwrap();
            let mut rhs = QPoly::zero();
            for s in 0..=a + 1 - b {
                rhs = &rhs + &q_binomial(a - s, b - 1).unwrap().shift((s * b) as usize);
            }
            assert_eq!(lhs, rhs, "A={a} B={b}");
        }
    }
    for (x, y, z) in [(1, 2, 3), (2, 2, 2), (0, 3, 1), (4, 0, 2)] {
        let lhs = gf(&Freqs::from_pairs(&[(1, x), (2, y), (3, z)]), |_| true).unwrap();
        let n = (x + y + z) as i64;
        let rhs = &q_binomial(n, z as i64).unwrap() * &q_binomial((x + y) as i64, y as i64).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn reports_are_deterministic() {
    let canonical = |reports: &[Report]| reports.iter().map(Report::to_canonical_json).collect::<Vec<_>>();
    let bounds = Bounds::new(4, 5).with_max_middle(2);
    let first = canonical(&sweep(&bounds));
    assert_eq!(first, canonical(&sweep(&bounds)));
    assert_eq!(first, canonical(&sweep(&bounds.sequential())));
}

#[test]
fn reports_roundtrip_through_json() {
    for r in sweep(&Bounds::only(3, 3)) {
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn params_roundtrip_through_json() {
    let p = Params::general(5, 3, 1, vec![1, 0, 2]).with_one_pos(2);
    let back: Params = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}
