use proptest::prelude::*;
use symflow::schottky::*;
use symflow::shift::Symbol;

fn reduced_word(symbols: u32, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(0..symbols - 1, 0..max_len).prop_flat_map(move |steps| {
        (0..symbols).prop_map(move |first| {
            // each step picks one of the symbols other than the inverse of the last
            let mut w: Vec<Symbol> = Vec::with_capacity(steps.len() + 1);
            w.push(first);
            for &k in &steps {
                let bad = inverse_symbol(*w.last().unwrap());
                w.push(if k >= bad { k + 1 } else { k });
            }
            w
        })
    })
}

fn groups() -> Vec<SchottkyGroup> {
    [(2, 2.5), (2, 4.0), (3, 3.0)].iter().map(|&(k, l)| SchottkyGroup::symmetric(k, l).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn displacement_subadditive_with_gromov_lower_bound(gi in 0usize..3, w in reduced_word(4, 8), cut in 0usize..9) {
        let g = &groups()[gi];
        let cut = cut.min(w.len());
        let (v, u) = w.split_at(cut);
        let dv = displacement(&g.word_to_isometry(v).unwrap());
        let du = displacement(&g.word_to_isometry(u).unwrap());
        let dw = displacement(&g.word_to_isometry(&w).unwrap());
        prop_assert!(dw <= dv + du + 1e-9);
        prop_assert!(dw >= dv + du - g.gromov_constant() - 1e-9);
    }

    #[test]
    fn word_products_associate(w in reduced_word(6, 10), a in 0usize..11, b in 0usize..11) {
        let g = &groups()[2];
        let (a, b) = (a.min(w.len()), b.min(w.len()));
        let (i, j) = (a.min(b), a.max(b));
        let whole = g.word_to_isometry(&w).unwrap();
        let parts = g
            .word_to_isometry(&w[..i])
            .unwrap()
            .compose(&g.word_to_isometry(&w[i..j]).unwrap())
            .compose(&g.word_to_isometry(&w[j..]).unwrap());
        let (m, n) = (whole.matrix(), parts.matrix());
        let scale = m.iter().flatten().fold(1.0f64, |s, x| s.max(x.abs()));
        for r in 0..2 {
            for c in 0..2 {
                prop_assert!((m[r][c] - n[r][c]).abs() < 1e-10 * scale);
            }
        }
        // entries carry relative rounding, so det is exact only to ε‖M‖²
        prop_assert!((whole.det() - 1.0).abs() < 1e-12 * scale * scale);
    }
}

#[test]
fn roof_positive_on_every_admissible_pair() {
    for g in groups() {
        let s = coded_system(&g).unwrap();
        let base = s.base();
        for a in 0..g.symbol_count() as Symbol {
            for b in 0..g.symbol_count() as Symbol {
                if base.transition(a, b) {
                    assert!(s.roof().value(&[a, b]) >= ROOF_FLOOR);
                }
            }
        }
    }
}

#[test]
fn pruned_count_matches_brute_force_up_to_eight() {
    for g in groups() {
        for r in [0.5, 2.0, 4.3, 5.5, 7.9] {
            assert_eq!(orbit_count(&g, r).unwrap(), orbit_count_brute_force(&g, r, 10_000_000).unwrap());
        }
    }
}

#[test]
fn single_generator_subgroups_grow_slower() {
    for g in groups().into_iter().filter(|g| g.rank() >= 2) {
        let full = critical_exponent(&g, 12.0).unwrap();
        for i in 0..g.rank() {
            let sub = critical_exponent(&g.subgroup(&[i]).unwrap(), 12.0).unwrap();
            assert!(full.delta - sub.delta >= 0.1, "{} vs {}", full.delta, sub.delta);
        }
    }
}
