use ringspec::ccm::{self, balanced_nx, flatten, unflatten, CcmConfig, LsfCache};
use ringspec::conformal::PowerSeriesMap;
use ringspec::exact::annulus_spectrum;

use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn annulus_half_ground_state() {
    let cfg = CcmConfig::new(24, 60, PowerSeriesMap::annulus(0.5).unwrap()).unwrap();
    let r = ccm::solve(&cfg, 5, false, &LsfCache::disabled()).unwrap();
    assert!(rel(r.energies[0], 39.01328850) < 5e-3, "{}", r.energies[0]);
    assert!(r.energies.iter().all(|&e| e > 0.0));
}

#[test]
fn matches_oracle_and_converges() {
    for a in [0.5, 0.9] {
        let map = PowerSeriesMap::annulus(a).unwrap();
        let exact = annulus_spectrum(a, 1.0, 20).unwrap().expanded();
        let err = |nx: u32, ny: u32| {
            let cfg = CcmConfig::new(nx, ny, map.clone()).unwrap();
            let r = ccm::solve(&cfg, 20, false, &LsfCache::disabled()).unwrap();
            r.energies
                .iter()
                .zip(&exact)
                .map(|(c, e)| rel(*c, *e))
                .fold(0.0, f64::max)
        };
        let nx = balanced_nx(map.lx(), 120).max(14);
        let coarse = err(nx, 120);
        assert!(coarse < 5e-3, "a = {a}: {coarse}");
        // both dimensions grow by half
        let fine = err(2 * ((3 * nx + 2) / 4), 180);
        assert!(fine < coarse, "a = {a}: {fine} !< {coarse}");
    }
}

#[test]
fn degenerate_pairs_on_annulus() {
    let cfg = CcmConfig::new(14, 60, PowerSeriesMap::annulus(0.5).unwrap()).unwrap();
    let r = ccm::solve(&cfg, 7, false, &LsfCache::disabled()).unwrap();
    // ground state simple, then m = 1 and m = 2 pairs
    assert!(rel(r.energies[1], r.energies[0]) > 1e-3);
    for i in [1, 3, 5] {
        assert!(
            rel(r.energies[i + 1], r.energies[i]) < 1e-6,
            "{:?}",
            &r.energies[i..i + 2]
        );
    }
}

#[test]
fn symmetrization_preserves_spectrum() {
    // Oracle: eigenvalues of the nonsymmetric D^{-1} L via its characteristic
    // behaviour — each (lambda, psi) must satisfy D^{-1} L psi = lambda psi.
    let map = PowerSeriesMap::robnik(0.1, 0.3).unwrap();
    let cfg = CcmConfig::new(4, 4, map).unwrap();
    let asm = ccm::assemble(&cfg, &LsfCache::disabled()).unwrap();
    let r = ccm::solve(&cfg, cfg.dim(), true, &LsfCache::disabled()).unwrap();
    for (i, &e) in r.energies.iter().enumerate() {
        let psi = r.vector(i).unwrap();
        let lpsi = asm.laplacian.mul_vec(psi);
        for k in 0..cfg.dim() {
            let lhs = asm.inv_density[k] * lpsi[k];
            assert!(
                (lhs - e * psi[k]).abs()
                    < 1e-9 * e * psi.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            );
        }
    }
}

#[test]
fn wavefunctions() {
    let cache = LsfCache::disabled();
    let cfg = CcmConfig::new(8, 40, PowerSeriesMap::annulus(0.5).unwrap()).unwrap();
    let r = ccm::solve(&cfg, 4, true, &cache).unwrap();
    let ground = ccm::sample_wavefunction(&r, 0).unwrap();
    assert!(ground.iter().all(|&(_, _, p)| p > 0.0));
    for i in 0..4 {
        assert!((r.weighted_norm(i).unwrap() - 1.0).abs() < 1e-10);
    }

    let cfg = CcmConfig::new(14, 80, PowerSeriesMap::robnik(0.1, 0.1).unwrap()).unwrap();
    let r = ccm::solve(&cfg, 1, true, &cache).unwrap();
    let samples = ccm::sample_wavefunction(&r, 0).unwrap();
    let nodes = cfg.nodes();
    let peak = (0..samples.len())
        .max_by(|&i, &j| samples[i].2.abs().total_cmp(&samples[j].2.abs()))
        .unwrap();
    assert_eq!(nodes[peak].1, 0.0, "peak at y = {}", nodes[peak].1);
    assert!((r.weighted_norm(0).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn dilation_rescales_energies() {
    let base = PowerSeriesMap::robnik(0.1, 0.2).unwrap();
    let scaled = PowerSeriesMap::new(0.2, 2.0, vec![1.0, 0.1]).unwrap();
    let cache = LsfCache::disabled();
    let e1 = ccm::solve(&CcmConfig::new(6, 20, base).unwrap(), 5, false, &cache).unwrap();
    let e2 = ccm::solve(&CcmConfig::new(6, 20, scaled).unwrap(), 5, false, &cache).unwrap();
    for (a, b) in e1.energies.iter().zip(&e2.energies) {
        assert!(rel(*b, a / 4.0) < 1e-12);
    }
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("ringspec-cache-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let cache = LsfCache::in_dir(&dir);
    let cfg = CcmConfig::new(6, 10, PowerSeriesMap::annulus(0.5).unwrap()).unwrap();
    let cold = ccm::solve(&cfg, 6, false, &cache).unwrap();
    assert!(!cold.cache_hit);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 2);
    let warm = ccm::solve(&cfg, 6, false, &cache).unwrap();
    assert!(warm.cache_hit);
    assert_eq!(cold.energies, warm.energies);

    // a corrupted file is recomputed, not trusted
    let name = ccm::cache_file_name(&cfg.y_basis());
    std::fs::write(dir.join(&name), b"LSFD2\0junk").unwrap();
    let again = ccm::solve(&cfg, 6, false, &cache).unwrap();
    assert!(!again.cache_hit);
    assert_eq!(again.energies, cold.energies);
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #[test]
    fn flatten_is_a_bijection(hx in 1u32..8, hy in 1u32..10) {
        let (nx, ny) = (2 * hx, 2 * hy);
        let dim = ((nx - 1) * (ny + 1)) as i64;
        let mut seen = std::collections::HashSet::new();
        for big_k in 1..=dim {
            let (k, kp) = flatten(big_k, nx, ny).unwrap();
            prop_assert!(k.abs() < nx as i64 / 2 && kp.abs() <= ny as i64 / 2);
            prop_assert!(seen.insert((k, kp)));
            prop_assert_eq!(unflatten(k, kp, nx, ny).unwrap(), big_k);
        }
        prop_assert_eq!(seen.len() as i64, dim);
    }

    #[test]
    fn balanced_nx_is_even_and_positive(lx in 1e-3f64..10.0, hy in 1u32..300) {
        let nx = balanced_nx(lx, 2 * hy);
        prop_assert!(nx >= 2 && nx.is_multiple_of(2));
    }
}
