//! Independent references for quantities the library computes by faster
//! or more specialised means.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex;

use anyon1d::chain::{apply_translation, Occupation, SectorBasis, SectorKey, StateVector};
use anyon1d::operator::KymOperator;
use anyon1d::theory::hilbert_dimension;

/// Creation operators in site order, as `(site, spin)` with sites 0-based.
fn modes(sites: &[Occupation]) -> Vec<(usize, Occupation)> {
    sites
        .iter()
        .enumerate()
        .filter(|(_, o)| o.is_electron())
        .map(|(i, &o)| (i, o))
        .collect()
}

/// Relabel the sites of `c†_1 c†_2 ... |0⟩` and bring the product back to
/// site order, returning the new occupations and the reordering sign.
fn relabel(sites: &[Occupation], map: impl Fn(usize) -> usize) -> (Vec<Occupation>, f64) {
    let mut ops: Vec<(usize, Occupation)> = modes(sites).into_iter().map(|(i, o)| (map(i), o)).collect();
    // bubble sort counts transpositions
    let mut sign = 1.0;
    for i in 0..ops.len() {
        for j in 0..ops.len() - 1 - i {
            if ops[j].0 > ops[j + 1].0 {
                ops.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut out = vec![Occupation::Hole; sites.len()];
    for (i, o) in ops {
        out[i] = o;
    }
    (out, sign)
}

/// Dense `H = -(2π²/N²) Σ_{α<β} P_αβ / |η_α - η_β|²` with `P_αβ` the
/// fermionic exchange of the two sites' modes.
fn reference_hamiltonian(n: usize, sector: &SectorBasis) -> Vec<Vec<f64>> {
    let dim = sector.len();
    let mut h = vec![vec![0.0; dim]; dim];
    let g = -2.0 * PI * PI / (n * n) as f64;
    for (col, c) in sector.configs().iter().enumerate() {
        let sites = c.unpack(n);
        for a in 0..n {
            for b in a + 1..n {
                let d = 2.0 * (PI * (b - a) as f64 / n as f64).sin();
                let w = g / (d * d);
                let (new, sign) = relabel(&sites, |i| {
                    if i == a {
                        b
                    } else if i == b {
                        a
                    } else {
                        i
                    }
                });
                let packed = anyon1d::chain::Configuration::pack(&new).unwrap();
                let row = sector.index_of(packed).unwrap();
                h[row][col] += w * sign;
            }
        }
    }
    h
}

#[test]
fn operator_matches_second_quantised_exchange() {
    for n in 2..=6 {
        let op = KymOperator::<f64>::new(n).unwrap();
        for q in 0..=n {
            for up in 0..=n - q {
                let s = SectorBasis::enumerate(n, SectorKey::new(q, up)).unwrap();
                let reference = reference_hamiltonian(n, &s);
                let dense = op.build_dense(&s).unwrap();
                for (i, row) in reference.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        assert!((dense.get(i, j) - x).abs() < 1e-13, "N={n} Q={q} up={up} ({i},{j})");
                    }
                }
            }
        }
    }
}

#[test]
fn translation_matches_mode_relabelling() {
    for n in 2..=7 {
        for q in 0..=n {
            for up in 0..=n - q {
                let s = SectorBasis::enumerate(n, SectorKey::new(q, up)).unwrap();
                for idx in 0..s.len() {
                    let v = StateVector::<f64>::basis(s.clone(), idx).unwrap();
                    let t = apply_translation(&v);
                    let (new, sign) = relabel(&s.config(idx).unpack(n), |i| (i + 1) % n);
                    let target = anyon1d::chain::Configuration::pack(&new).unwrap();
                    let expected = t.amplitude_of(target).unwrap();
                    assert_eq!(expected, Complex::new(sign, 0.0), "N={n} {}", s.config(idx).display(n));
                    assert!((t.norm() - 1.0).abs() < 1e-15);
                }
            }
        }
    }
}

/// Multisets of size `k` over `slots` kinds, enumerated explicitly.
fn enumerate_multisets(slots: usize, k: usize) -> usize {
    fn go(slots: usize, k: usize, start: usize, acc: &mut Vec<usize>, seen: &mut BTreeSet<Vec<usize>>) {
        if acc.len() == k {
            seen.insert(acc.clone());
            return;
        }
        for s in start..slots {
            acc.push(s);
            go(slots, k, s, acc, seen);
            acc.pop();
        }
    }
    let mut seen = BTreeSet::new();
    go(slots, k, 0, &mut Vec::new(), &mut seen);
    seen.len()
}

#[test]
fn counting_matches_explicit_multisets() {
    for n in 1..=12u64 {
        let report = hilbert_dimension(n);
        let mut total = 0usize;
        for c in &report.per_spinon_number {
            // spin-1/2 bosons: each orbital offers an up and a down slot
            let explicit = enumerate_multisets(2 * c.orbitals as usize, c.n_spinons as usize);
            assert_eq!(c.states, BigUint::from(explicit), "N={n} N_sp={}", c.n_spinons);
            total += explicit;
        }
        assert_eq!(total, 1usize << n);
    }
}

#[test]
fn sector_sizes_match_explicit_enumeration() {
    for n in 1..=8usize {
        let mut counts = std::collections::BTreeMap::new();
        for word in 0..3usize.pow(n as u32) {
            let mut w = word;
            let mut sites = Vec::with_capacity(n);
            for _ in 0..n {
                sites.push(match w % 3 {
                    0 => Occupation::Hole,
                    1 => Occupation::Up,
                    _ => Occupation::Down,
                });
                w /= 3;
            }
            let c = anyon1d::chain::Configuration::pack(&sites).unwrap();
            *counts.entry((c.n_holes(n), c.n_up())).or_insert(0usize) += 1;
        }
        for ((q, up), count) in counts {
            assert_eq!(SectorBasis::enumerate(n, SectorKey::new(q, up)).unwrap().len(), count);
        }
    }
}
