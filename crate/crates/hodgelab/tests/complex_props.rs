//! Property tests for the complex machinery on randomly generated double
//! complexes and subcomplexes.
//!
//! Random double complexes come from tensor products of two random single
//! complexes, which guarantees `d² = 0` and anticommutation by construction;
//! random subcomplexes are spans of differentials of random chains, the
//! harmonic basis, and generic extra directions.

use hodgelab::complex::*;
use hodgelab::linalg;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random single complex `R^{n0} → R^{n1} → R^{n2}` with `d1 d0 = 0`.
fn random_single_complex(rng: &mut ChaCha8Rng, dims: [usize; 3]) -> [DMatrix<f64>; 2] {
    let d0 = DMatrix::from_fn(dims[1], dims[0], |_, _| rng.gen_range(-1.0..1.0));
    let raw = DMatrix::from_fn(dims[2], dims[1], |_, _| rng.gen_range(-1.0..1.0));
    // kill the range of d0 so that d1 d0 = 0
    let q = linalg::range_basis(&d0);
    let d1 = &raw - (raw.clone() * &q) * q.transpose();
    [d0, d1]
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.5..0.5));
    &a * a.transpose() + DMatrix::identity(n, n)
}

/// Random bounded double complex as a tensor product, with random SPD Grams.
fn random_double_complex(rng: &mut ChaCha8Rng) -> TotalComplex {
    let udims = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=2)];
    let vdims = [rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(0..=2)];
    let [du0, du1] = random_single_complex(rng, udims);
    let [dv0, dv1] = random_single_complex(rng, vdims);
    let du = [du0, du1];
    let dv = [dv0, dv1];

    let mut builder = DoubleComplex::builder();
    for p in 0..3 {
        for q in 0..3 {
            let dim = udims[p] * vdims[q];
            if dim > 0 {
                builder = builder.space(
                    (p, q),
                    InnerProductSpace::new(random_spd(rng, dim), p as i32).unwrap(),
                );
            }
        }
    }
    for p in 0..2 {
        for q in 0..3 {
            if udims[p] * vdims[q] == 0 || udims[p + 1] == 0 {
                continue;
            }
            let eye = DMatrix::<f64>::identity(vdims[q], vdims[q]);
            builder = builder.d_h((p, q), du[p].kronecker(&eye));
        }
    }
    for p in 0..3 {
        for q in 0..2 {
            if udims[p] * vdims[q] == 0 || vdims[q + 1] == 0 {
                continue;
            }
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let eye = DMatrix::<f64>::identity(udims[p], udims[p]);
            builder = builder.d_v((p, q), eye.kronecker(&dv[q]) * sign);
        }
    }
    assemble_total(&builder.build().expect("tensor product is a double complex"))
        .expect("assembly")
}

/// Random subcomplex that keeps the ambient cohomology (spans of exact chains,
/// the harmonic basis, and generic directions). Returns `None` when the
/// generic-position assumption fails for this draw.
fn random_matching_subcomplex(
    rng: &mut ChaCha8Rng,
    total: &TotalComplex,
) -> Option<SubcomplexEmbedding> {
    let k_max = total.k_max();
    let mut spans: Vec<Vec<DVector<f64>>> = vec![Vec::new(); k_max + 1];
    for k in 0..=k_max {
        let n = total.dim(k);
        if n == 0 {
            continue;
        }
        for h in harmonic_basis(total, k) {
            spans[k].push(h.coeffs);
        }
        let n_extra = rng.gen_range(0..=2usize.min(n));
        for _ in 0..n_extra {
            let y = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            if k < k_max && total.dim(k + 1) > 0 {
                spans[k + 1].push(total.d(k) * &y);
            }
            spans[k].push(y);
        }
    }
    let mut maps = Vec::with_capacity(k_max + 1);
    for (k, vecs) in spans.iter().enumerate() {
        let n = total.dim(k);
        if vecs.is_empty() {
            maps.push(DMatrix::zeros(n, 0));
            continue;
        }
        let m = linalg::from_columns(n, vecs);
        maps.push(linalg::range_basis(&m));
    }
    SubcomplexEmbedding::new(total, maps).ok()
}

#[test]
fn adjoint_identity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let total = random_double_complex(&mut rng);
        for k in 1..=total.k_max() {
            let (n_lo, n_hi) = (total.dim(k - 1), total.dim(k));
            if n_lo == 0 || n_hi == 0 {
                continue;
            }
            let adj = total.adjoint(k).unwrap();
            for _ in 0..100 {
                let u = DVector::from_fn(n_lo, |_, _| rng.gen_range(-1.0..1.0));
                let v = DVector::from_fn(n_hi, |_, _| rng.gen_range(-1.0..1.0));
                let lhs = total.inner(k, &(total.d(k - 1) * &u), &v);
                let rhs = total.inner(k - 1, &u, &(&adj * &v));
                let scale = total.norm(k - 1, &u) * total.norm(k, &v);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * scale.max(1.0),
                    "adjoint identity defect {:.3e}",
                    (lhs - rhs).abs()
                );
            }
        }
    }
}

#[test]
fn hodge_split_reconstructs_and_is_orthogonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let total = random_double_complex(&mut rng);
        for k in 0..=total.k_max() {
            let n = total.dim(k);
            if n == 0 {
                continue;
            }
            for _ in 0..5 {
                let v = ChainVector::from_coeffs(
                    &total,
                    k,
                    DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)),
                )
                .unwrap();
                let s = hodge_decompose(&total, k, &v).unwrap();
                let sum = &s.b.coeffs + &s.h.coeffs + &s.bstar.coeffs;
                let vn = total.norm(k, &v.coeffs);
                assert!(total.norm(k, &(&sum - &v.coeffs)) <= 1e-10 * vn.max(1.0));
                // pairwise orthogonality
                for (a, b) in [
                    (&s.b.coeffs, &s.h.coeffs),
                    (&s.b.coeffs, &s.bstar.coeffs),
                    (&s.h.coeffs, &s.bstar.coeffs),
                ] {
                    let na = total.norm(k, a);
                    let nb = total.norm(k, b);
                    assert!(total.inner(k, a, b).abs() <= 1e-10 * (na * nb).max(1.0));
                }
                // Pythagoras
                let parts = total.norm(k, &s.b.coeffs).powi(2)
                    + total.norm(k, &s.h.coeffs).powi(2)
                    + total.norm(k, &s.bstar.coeffs).powi(2);
                assert!((parts - vn * vn).abs() <= 1e-9 * (vn * vn).max(1e-12));
                // harmonic part is closed and co-closed
                if total.dim(k + 1) > 0 {
                    assert!(total.norm(k + 1, &(total.d(k) * &s.h.coeffs)) <= 1e-9 * vn.max(1.0));
                }
                // D applied to the exact part reproduces D v
                if total.dim(k + 1) > 0 {
                    let db = total.d(k) * &s.b.coeffs;
                    let dbs = total.d(k) * &s.bstar.coeffs;
                    let dv = total.d(k) * &v.coeffs;
                    let lhs = &db + &dbs;
                    assert!(total.norm(k + 1, &(&lhs - &dv)) <= 1e-9 * vn.max(1.0));
                }
            }
        }
    }
}

#[test]
fn poincare_duality_between_adjacent_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut checked = 0;
    for _ in 0..20 {
        let total = random_double_complex(&mut rng);
        for k in 0..total.k_max() {
            let c_d = match poincare_constant(&total, k, None) {
                Ok(c) => c,
                Err(_) => continue,
            };
            // the adjoint route: smallest nonzero singular value of D*_{k+1}
            // measured between the Gram geometries
            let adj = total.adjoint(k + 1).unwrap();
            let f_hi = linalg::GramFactor::new(&total.gram(k + 1)).unwrap();
            let f_lo = linalg::GramFactor::new(&total.gram(k)).unwrap();
            let adj_e = linalg::GramFactor::conjugate(&adj, &f_hi, &f_lo);
            let c_star = 1.0 / linalg::min_nonzero_singular_value(&adj_e).unwrap();
            assert!(
                (c_d - c_star).abs() <= 1e-9 * c_d.max(1.0),
                "duality defect: {c_d} vs {c_star}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 10, "too few nontrivial degrees ({checked})");
}

#[test]
fn subcomplex_restriction_never_improves_poincare() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 && attempts < 200 {
        attempts += 1;
        let total = random_double_complex(&mut rng);
        let Some(emb) = random_matching_subcomplex(&mut rng, &total) else {
            continue;
        };
        for k in 0..total.k_max() {
            let (Ok(c_full), Ok(c_sub)) = (
                poincare_constant(&total, k, None),
                poincare_constant(&total, k, Some(&emb)),
            ) else {
                continue;
            };
            assert!(
                c_sub <= c_full * (1.0 + 1e-9),
                "restriction increased the constant: {c_sub} > {c_full}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} comparisons realized");
}

#[test]
fn cochain_projection_properties_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 && attempts < 300 {
        attempts += 1;
        let total = random_double_complex(&mut rng);
        let Some(emb) = random_matching_subcomplex(&mut rng, &total) else {
            continue;
        };
        let Ok(proj) = cochain_projection(&total, &emb) else {
            continue;
        };
        let k_max = total.k_max();
        for k in 0..k_max {
            let pi_k = &proj.pi[k];
            let pi_next = &proj.pi[k + 1];
            // commutation π_{k+1} D = D^B π_k
            let lhs = pi_next * total.d(k);
            let rhs = emb.induced_d(k) * pi_k;
            let scale = linalg::spectral_norm(total.d(k)).max(1.0);
            let defect = linalg::fro(&(&lhs - &rhs));
            assert!(
                defect <= 1e-10 * scale,
                "commutation defect {defect:.3e} at degree {k} (scale {scale:.3e})"
            );
        }
        for k in 0..=k_max {
            // idempotence on the subcomplex: π E = id
            let pe = &proj.pi[k] * emb.map(k);
            let nb = emb.sub_dim(k);
            assert!(
                linalg::fro(&(&pe - DMatrix::identity(nb, nb))) <= 1e-10 * (nb as f64).max(1.0),
                "π∘E ≠ id at degree {k}"
            );
            // measured bound against the assumption constants
            let bound = 1.0 + proj.kappa1[k] + proj.kappa1[k] * proj.kappa2[k];
            assert!(
                proj.kappa[k].is_finite() && proj.kappa[k] <= bound * (1.0 + 1e-9),
                "κ = {} exceeds 1 + κ₁ + κ₁κ₂ = {} at degree {k}",
                proj.kappa[k],
                bound
            );
        }
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} random instances realized");
}

#[test]
fn full_norm_bound_implies_graph_bound() {
    // the graph-norm operator norm never exceeds the max of the adjacent
    // plain-norm operator norms, measured on the identity subcomplex
    // projection composed with a contraction
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for _ in 0..10 {
        let total = random_double_complex(&mut rng);
        let Some(emb) = random_matching_subcomplex(&mut rng, &total) else {
            continue;
        };
        let Ok(proj) = cochain_projection(&total, &emb) else {
            continue;
        };
        for k in 0..total.k_max() {
            let n = total.dim(k);
            if n == 0 {
                continue;
            }
            // plain operator norms at k and k+1
            let plain = |kk: usize| -> f64 {
                let m = emb.map(kk) * &proj.pi[kk];
                let f = linalg::GramFactor::new(&total.gram(kk)).unwrap();
                linalg::spectral_norm(&linalg::GramFactor::conjugate(&m, &f, &f))
            };
            let bound = plain(k).max(plain(k + 1));
            assert!(
                proj.kappa[k] <= bound * (1.0 + 1e-9),
                "graph bound {} exceeds max of plain bounds {} at degree {k}",
                proj.kappa[k],
                bound
            );
        }
    }
}
