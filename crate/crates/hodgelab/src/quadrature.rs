//! Piecewise Gauss-Legendre quadrature for the closed-form rod fields.
//!
//! All integrands here are piecewise analytic (polynomials and hyperbolic
//! functions on intervals bounded away from singular behavior), so the 32-point
//! rule is exact to machine precision on each smooth piece.

/// 32-point Gauss-Legendre nodes on (-1, 1), positive half; mirrored below.
const NODES_HALF: [f64; 16] = [
    0.048307665687738310,
    0.144471961582796488,
    0.239287362252137065,
    0.331868602282127667,
    0.421351276130635333,
    0.506899908932229359,
    0.587715757240762304,
    0.663044266930215231,
    0.732182118740289711,
    0.794483795967942386,
    0.849367613732569970,
    0.896321155766052202,
    0.934906075937739667,
    0.964762255587506390,
    0.985611511545268382,
    0.997263861849481570,
];
const WEIGHTS_HALF: [f64; 16] = [
    0.096540088514727812,
    0.095638720079274833,
    0.093844399080804566,
    0.091173878695763863,
    0.087652093004403908,
    0.083311924226946846,
    0.078193895787070311,
    0.072345794108848449,
    0.065822222776361752,
    0.058684093478535704,
    0.050998059262376244,
    0.042835898022226426,
    0.034273862913021626,
    0.025392065309262427,
    0.016274394730905965,
    0.007018610009469298,
];

/// Integrate `f` over `[lo, hi]` with a single 32-point rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let c = 0.5 * (hi + lo);
    let h = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for i in 0..16 {
        let x = NODES_HALF[i] * h;
        acc += WEIGHTS_HALF[i] * (f(c + x) + f(c - x));
    }
    acc * h
}

/// Integrate `f` over `[lo, hi]`, splitting at the interior breakpoints.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breaks: &[f64]) -> f64 {
    let mut pts: Vec<f64> = vec![lo];
    for &b in breaks {
        if b > lo && b < hi {
            pts.push(b);
        }
    }
    pts.push(hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.windows(2).map(|w| integrate(&f, w[0], w[1])).sum()
}

/// Squared L2 norm of `f` over `[lo, hi]` with interior breakpoints.
pub fn l2_sq<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breaks: &[f64]) -> f64 {
    integrate_piecewise(|x| f(x) * f(x), lo, hi, breaks)
}
