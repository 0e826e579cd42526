//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over the union of the consecutive intervals given by
/// `breakpoints`, bisecting the worst panel until the summed error estimate
/// drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "quadrature breakpoints must be strictly increasing".into(),
        ));
    }
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Accuracy {
                what: "integrand produced a non-finite value".into(),
                achieved: error,
            });
        }
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error,
                intervals: panels.len(),
            });
        }
        if panels.len() >= max_panels {
            return Err(Error::Accuracy {
                what: format!("quadrature did not converge within {max_panels} panels"),
                achieved: error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Accuracy {
                what: "quadrature panel collapsed below machine resolution".into(),
                achieved: error,
            });
        }
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}
