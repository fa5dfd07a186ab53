use normbridge::linalg::random::{random_psd_with, substream};
use normbridge::linalg::{loewner_leq, Field};
use normbridge::pipeline::{construct_bprime, construct_projector, run_pipeline, trace_pipeline, BPrimeRoute};
use normbridge::{Error, Matrix, Psd, Psd32};
use rand::Rng;

/// Singular `A` where the generalized-inverse formula for `B′` overshoots `B`.
#[test]
fn singular_a_bprime_stays_below_b() {
    let a = Psd::from_diag(&[1.0, 0.0]).unwrap();
    let b = Psd::from_matrix(Matrix::from_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap()).unwrap();
    let trace = run_pipeline(&a, &b, 0.5, 1).unwrap();
    assert!(trace.passed());
    assert_eq!(trace.b_prime_route, BPrimeRoute::RangeOfB);

    let (proj, _) = construct_projector(&a, &b, 1).unwrap();
    let (bp, route, rec) = construct_bprime(&a, &b, &proj, 1).unwrap();
    assert_eq!(route, BPrimeRoute::RangeOfB);
    assert!(rec.pass, "{rec:?}");
    assert!(loewner_leq(bp.as_hermitian(), b.as_hermitian(), 1e-12).unwrap().holds);
    // λ(AB) = {1, 0}, so B′ = diag(1, 0) would also do; the computed one must
    // reproduce A^{1/2}B′A^{1/2} = P = e₁e₁*.
    assert!((bp.as_matrix()[(0, 0)].re - 1.0).abs() <= 1e-12);
}

#[test]
fn identity_pair() {
    for n in 1..=5 {
        let i = Psd::identity(n);
        for k in 1..=n {
            let t = run_pipeline(&i, &i, 0.3, k).unwrap();
            assert_eq!(t.b_prime_route, BPrimeRoute::GeneralizedInverse);
            assert!((t.final_bound - 1.0).abs() <= 1e-12);
            assert!((t.scale - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn random_runs_pass_and_serialize() {
    let mut rng = substream(77, 0);
    let mut ran = 0;
    for i in 0..300 {
        let n = rng.random_range(1..=6usize);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let (ra, rb) = (rng.random_range(1..=n), rng.random_range(1..=n));
        let a: Psd = random_psd_with(&mut rng, n, ra, field).unwrap();
        let b: Psd = random_psd_with(&mut rng, n, rb, field).unwrap();
        let k = rng.random_range(1..=n);
        let q = rng.random_range(0.05..0.95);
        let t = match trace_pipeline(&a, &b, q, k) {
            Ok(t) => t,
            Err(Error::TriviallyTrue(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        ran += 1;
        assert!(t.passed() || t.degenerate, "case {i}: {:?}", t.steps.iter().find(|s| !s.pass));
        // B′ lives on the normalized instance B/√t.
        let b_norm = b.scale(1.0 / t.scale.sqrt()).unwrap();
        let order = loewner_leq(t.b_prime.as_hermitian(), b_norm.as_hermitian(), 1e-8).unwrap();
        assert!(order.holds, "case {i}: {order:?}");
        assert!(t.final_bound >= 1.0 - 1e-8);

        let doc = t.to_json();
        let steps = doc["steps"].as_array().unwrap();
        assert!(!steps.is_empty());
        for s in steps {
            assert!(s["name"].is_string());
            assert!(s["residuals"].is_object());
            assert!(s["pass"].is_boolean());
        }
    }
    assert!(ran > 150, "only {ran} non-trivial runs");
}

#[test]
fn rank_below_k_is_trivial_and_q_must_be_interior() {
    let a = Psd::from_diag(&[1.0, 0.0, 0.0]).unwrap();
    let b = Psd::identity(3);
    assert!(matches!(trace_pipeline(&a, &b, 0.5, 2), Err(Error::TriviallyTrue(_))));
    for q in [0.0, 1.0, -0.1, f64::NAN] {
        assert!(matches!(trace_pipeline(&b, &b, q, 1), Err(Error::PipelineDomain { .. })));
    }
}

#[test]
fn single_precision_runs() {
    let mut ran = 0;
    for seed in 0..40 {
        let mut rng = substream(91, seed);
        let n = rng.random_range(2..=4usize);
        let a: Psd32 = random_psd_with(&mut rng, n, n, Field::Real).unwrap();
        let b: Psd32 = random_psd_with(&mut rng, n, n, Field::Complex).unwrap();
        let t = match trace_pipeline(&a, &b, 0.4, rng.random_range(1..=n)) {
            Ok(t) if !t.degenerate => t,
            Ok(_) | Err(Error::TriviallyTrue(_)) => continue,
            Err(e) => panic!("seed {seed}: {e}"),
        };
        ran += 1;
        assert!(t.passed(), "seed {seed}: {:?}", t.steps.iter().find(|s| !s.pass));
        assert!(t.final_bound >= 1.0 - 1e-3);
    }
    assert!(ran >= 30);
}
