use ddesim_core::operator::{
    boson_destroy, embed, hermitize, kron, sigma_minus, sigma_plus, sigma_x, sigma_y, sigma_z,
};
use ddesim_core::{c64, concurrence, post_jump_state, ComplexMatrix, DensityMatrix, SpaceLayout};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn random_state(rng: &mut ChaCha8Rng, layout: SpaceLayout) -> DensityMatrix {
    let n = layout.total_dim();
    let g = random_matrix(rng, n, n);
    DensityMatrix::normalized(layout, &g * &g.adjoint()).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let (w, v) = hermitize(&random_matrix(rng, n, n)).unwrap().hermitian_eigen().unwrap();
    let phases = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c64::new(0.0, 3.0 * w[i]).exp()
        } else {
            c64::new(0.0, 0.0)
        }
    });
    &(&v * &phases) * &v.adjoint()
}

fn random_ket(rng: &mut ChaCha8Rng, n: usize) -> Vec<c64> {
    let mut ket: Vec<c64> = (0..n)
        .map(|_| c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut ket {
        *z /= norm;
    }
    ket
}

/// Quadruple-loop partial trace over the subsystems not in `keep`.
fn brute_partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut d = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let compose = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for i in 0..total {
        for j in 0..total {
            let (di, dj) = (digits(i), digits(j));
            let traced_equal = (0..dims.len()).all(|k| keep.contains(&k) || di[k] == dj[k]);
            if traced_equal {
                let (a, b) = (compose(&di), compose(&dj));
                out[(a, b)] += rho[(i, j)];
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c, d] = [0, 1, 2, 3].map(|_| random_matrix(&mut rng, 2, 2));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn embed_respects_products_and_commutes_across_sites(seed in any::<u64>(), n_max in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SpaceLayout::qubits_and_boson(n_max).unwrap();
        let (a, b) = (random_matrix(&mut rng, 2, 2), random_matrix(&mut rng, 2, 2));
        let ab = embed(&(&a * &b), 1, &layout).unwrap();
        let composed = &embed(&a, 1, &layout).unwrap() * &embed(&b, 1, &layout).unwrap();
        prop_assert!(ab.max_abs_diff(&composed) < 1e-13);

        let x = embed(&a, 0, &layout).unwrap();
        let y = embed(&random_matrix(&mut rng, n_max + 1, n_max + 1), 2, &layout).unwrap();
        prop_assert!(x.commutator(&y).max_abs() < 1e-13);
    }

    #[test]
    fn partial_trace_matches_index_contraction(
        seed in any::<u64>(),
        dims in prop::collection::vec(2usize..4, 2..4),
        mask in 1u8..7,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keep: Vec<usize> = (0..dims.len()).filter(|k| mask & (1 << k) != 0).collect();
        prop_assume!(!keep.is_empty());
        let layout = SpaceLayout::new(dims.clone()).unwrap();
        let rho = random_state(&mut rng, layout);
        let reduced = rho.partial_trace(&keep).unwrap();
        let oracle = brute_partial_trace(rho.matrix(), &dims, &keep);
        prop_assert!(reduced.matrix().max_abs_diff(&oracle) < 1e-13);
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_factorizes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&mut rng, SpaceLayout::new(vec![2]).unwrap());
        let b = random_state(&mut rng, SpaceLayout::new(vec![3]).unwrap());
        let ab = DensityMatrix::product(&a, &b);
        prop_assert!(ab.partial_trace(&[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-14);
        prop_assert!(ab.partial_trace(&[1]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-14);
    }

    #[test]
    fn hermitize_yields_hermitian(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = hermitize(&random_matrix(&mut rng, n, n)).unwrap();
        prop_assert_eq!(h.hermitian_deviation(), 0.0);
    }

    #[test]
    fn concurrence_is_invariant_under_local_unitaries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&mut rng, SpaceLayout::qubit_pair());
        let u = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
        let rotated = DensityMatrix::new(
            SpaceLayout::qubit_pair(),
            hermitize(&(&(&u * rho.matrix()) * &u.adjoint())).unwrap(),
        )
        .unwrap();
        let (a, b) = (concurrence(&rho).unwrap().value, concurrence(&rotated).unwrap().value);
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn concurrence_of_pure_states(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_ket(&mut rng, 4);
        // |⟨ψ|σʸ⊗σʸ|ψ*⟩| reduces to 2|ψ₀ψ₃ − ψ₁ψ₂|
        let closed = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
        let rho = DensityMatrix::pure(SpaceLayout::qubit_pair(), &psi).unwrap();
        let r = concurrence(&rho).unwrap();
        prop_assert!((r.value - closed).abs() < 1e-9);
        prop_assert!(r.lambdas.windows(2).all(|w| w[0] >= w[1]) && r.lambdas[3] >= 0.0);
    }

    #[test]
    fn post_jump_weight_is_emitter_population(seed in any::<u64>(), emitter in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SpaceLayout::qubits_and_boson(2).unwrap();
        let rho = random_state(&mut rng, layout.clone());
        let n = embed(&(&sigma_plus() * &sigma_minus()), emitter, &layout).unwrap();
        let (state, weight) = post_jump_state(&rho, emitter).unwrap();
        prop_assert!((weight - rho.expectation(&n).unwrap().re).abs() < 1e-14);
        prop_assert!((state.trace().re - 1.0).abs() < 1e-13);
        // the jumped emitter is left in |g⟩
        prop_assert!(state.expectation(&n).unwrap().norm() < 1e-14);
    }
}

#[test]
fn pauli_and_ladder_conventions() {
    let i = c64::new(0.0, 1.0);
    assert_eq!(sigma_minus()[(0, 1)], c64::new(1.0, 0.0));
    assert_eq!(&sigma_plus() * &sigma_minus(), ComplexMatrix::diagonal(&[0.0, 1.0]));
    assert_eq!(sigma_z(), ComplexMatrix::diagonal(&[-1.0, 1.0]));
    assert!(sigma_x().is_unitary(1e-15) && sigma_y().is_unitary(1e-15));
    // σᶻ = diag(−1, 1) flips the sign of the textbook σˣσʸ = iσᶻ
    let xy = &sigma_x() * &sigma_y();
    assert!(xy.max_abs_diff(&sigma_z().scale(-i)) < 1e-15);
}

#[test]
fn boson_number_operator_is_diagonal() {
    let a = boson_destroy(4).unwrap();
    let n = &a.adjoint() * &a;
    assert!(n.max_abs_diff(&ComplexMatrix::diagonal(&[0.0, 1.0, 2.0, 3.0, 4.0])) < 1e-14);
}
