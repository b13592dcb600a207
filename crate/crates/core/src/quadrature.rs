//! Panel-adaptive Gauss-Kronrod quadrature for complex-valued integrands.
//!
//! One fixed 61-point Kronrod rule (embedded 30-point Gauss) is applied per
//! panel; the panel with the worst error estimate is bisected until the
//! summed estimate drops below an absolute tolerance or the panel budget is
//! exhausted. The integrands this crate cares about are smooth products of
//! oscillatory mode functions, which is exactly the regime where a
//! high-order rule plus bisection converges fast.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute-tolerance target and panel budget for one integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Absolute tolerance on the summed error estimate.
    pub abs_tol: f64,
    /// Hard cap on the number of panels before giving up.
    pub panel_budget: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            panel_budget: 10_000,
        }
    }
}

impl QuadratureConfig {
    /// Same panel budget, different absolute tolerance.
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            ..Default::default()
        }
    }
}

/// Value, error estimate and the number of panels it took.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

// 61-point Kronrod abscissae (positive half, descending), with the embedded
// 30-point Gauss weights `WG` and the Kronrod weights `WGK`. Standard
// QUADPACK constants, kept at their full published precision.
#[allow(clippy::excessive_precision)]
#[rustfmt::skip]
const XGK: [f64; 31] = [
    0.999_484_410_050_490_637_571_325_895_705_811,
    0.996_893_484_074_649_540_271_630_050_918_695,
    0.991_630_996_870_404_594_858_628_366_109_486,
    0.983_668_123_279_747_209_970_032_581_605_663,
    0.973_116_322_501_126_268_374_693_868_423_707,
    0.960_021_864_968_307_512_216_871_025_581_798,
    0.944_374_444_748_559_979_415_831_324_037_439,
    0.926_200_047_429_274_325_879_324_277_080_474,
    0.905_573_307_699_907_798_546_522_558_925_958,
    0.882_560_535_792_052_681_543_116_462_530_226,
    0.857_205_233_546_061_098_958_658_510_658_944,
    0.829_565_762_382_768_397_442_898_119_732_502,
    0.799_727_835_821_839_083_013_668_942_322_683,
    0.767_777_432_104_826_194_917_977_340_974_503,
    0.733_790_062_453_226_804_726_171_131_369_528,
    0.697_850_494_793_315_796_932_292_388_026_640,
    0.660_061_064_126_626_961_370_053_668_149_271,
    0.620_526_182_989_242_861_140_477_556_431_189,
    0.579_345_235_826_361_691_756_024_932_172_540,
    0.536_624_148_142_019_899_264_169_793_311_073,
    0.492_480_467_861_778_574_993_693_061_207_709,
    0.447_033_769_538_089_176_780_609_900_322_854,
    0.400_401_254_830_394_392_535_476_211_542_661,
    0.352_704_725_530_878_113_471_037_207_089_374,
    0.304_073_202_273_625_077_372_677_107_199_257,
    0.254_636_926_167_889_846_439_805_129_817_805,
    0.204_525_116_682_309_891_438_957_671_002_025,
    0.153_869_913_608_583_546_963_794_672_743_256,
    0.102_806_937_966_737_030_147_096_751_318_001,
    0.051_471_842_555_317_695_833_025_213_166_723,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
#[rustfmt::skip]
const WG: [f64; 15] = [
    0.007_968_192_496_166_605_615_465_883_474_674,
    0.018_466_468_311_090_959_142_302_131_912_047,
    0.028_784_707_883_323_369_349_719_179_611_292,
    0.038_799_192_569_627_049_596_801_936_446_348,
    0.048_402_672_830_594_052_902_938_140_422_808,
    0.057_493_156_217_619_066_481_721_689_402_056,
    0.065_974_229_882_180_495_128_128_515_115_962,
    0.073_755_974_737_705_206_268_243_850_022_191,
    0.080_755_895_229_420_215_354_694_938_460_530,
    0.086_899_787_201_082_979_802_387_530_715_126,
    0.092_122_522_237_786_128_717_632_707_087_619,
    0.096_368_737_174_644_259_639_468_626_351_810,
    0.099_593_420_586_795_267_062_780_282_103_569,
    0.101_762_389_748_405_504_596_428_952_168_554,
    0.102_852_652_893_558_840_341_285_636_705_415,
];

#[allow(clippy::excessive_precision)]
#[rustfmt::skip]
const WGK: [f64; 31] = [
    0.001_389_013_698_677_007_624_551_591_226_760,
    0.003_890_461_127_099_884_051_267_201_844_516,
    0.006_630_703_915_931_292_173_319_826_369_750,
    0.009_273_279_659_517_763_428_441_146_892_024,
    0.011_823_015_253_496_341_742_232_898_853_251,
    0.014_369_729_507_045_804_812_451_432_443_580,
    0.016_920_889_189_053_272_627_572_289_420_322,
    0.019_414_141_193_942_381_173_408_951_050_128,
    0.021_828_035_821_609_192_297_167_485_738_339,
    0.024_191_162_078_080_601_365_686_370_725_232,
    0.026_509_954_882_333_101_610_601_709_335_075,
    0.028_754_048_765_041_292_843_978_785_354_334,
    0.030_907_257_562_387_762_472_884_252_943_092,
    0.032_981_447_057_483_726_031_814_191_016_854,
    0.034_979_338_028_060_024_137_499_670_731_468,
    0.036_882_364_651_821_229_223_911_065_617_136,
    0.038_678_945_624_727_592_950_348_651_532_281,
    0.040_374_538_951_535_959_111_995_279_752_468,
    0.041_969_810_215_164_246_147_147_541_285_970,
    0.043_452_539_701_356_069_316_831_728_117_073,
    0.044_814_800_133_162_663_192_355_551_616_723,
    0.046_059_238_271_006_988_116_271_735_559_374,
    0.047_185_546_569_299_153_945_261_478_181_099,
    0.048_185_861_757_087_129_140_779_492_298_305,
    0.049_055_434_555_029_778_887_528_165_367_238,
    0.049_795_683_427_074_206_357_811_569_379_942,
    0.050_405_921_402_782_346_840_893_085_653_585,
    0.050_881_795_898_749_606_492_297_473_049_805,
    0.051_221_547_849_258_772_170_656_282_604_944,
    0.051_426_128_537_459_025_933_862_879_215_781,
    0.051_494_729_429_451_567_558_340_433_647_099,
];

/// QUADPACK error rescaling: sharpen the raw |K - G| difference using the
/// scale of the integrand's variation, with a floor at 50 eps of |f|.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 61-point Kronrod evaluation on [a, b].
fn qk61<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_gauss = Complex64::new(0.0, 0.0);
    let mut res_kronrod = f_center * WGK[30];
    let mut res_abs = res_kronrod.norm();

    let mut fv1 = [Complex64::new(0.0, 0.0); 30];
    let mut fv2 = [Complex64::new(0.0, 0.0); 30];

    for (j, gauss_w) in WG.iter().enumerate() {
        let jtw = j * 2 + 1;
        let abscissa = half_len * XGK[jtw];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        fv1[jtw] = fval1;
        fv2[jtw] = fval2;
        let fsum = fval1 + fval2;
        res_gauss += gauss_w * fsum;
        res_kronrod += WGK[jtw] * fsum;
        res_abs += WGK[jtw] * (fval1.norm() + fval2.norm());
    }

    for j in 0..15 {
        let jtwm1 = j * 2;
        let abscissa = half_len * XGK[jtwm1];
        let fval1 = f(center - abscissa);
        let fval2 = f(center + abscissa);
        fv1[jtwm1] = fval1;
        fv2[jtwm1] = fval2;
        res_kronrod += WGK[jtwm1] * (fval1 + fval2);
        res_abs += WGK[jtwm1] * (fval1.norm() + fval2.norm());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[30] * (f_center - mean).norm();
    for j in 0..30 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let err = (res_kronrod - res_gauss).norm() * half_len.abs();
    let value = res_kronrod * half_len;
    let abserr = rescale_error(err, res_abs * half_len.abs(), res_asc * half_len.abs());
    (value, abserr)
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over [a, b] to the requested absolute tolerance.
///
/// Fails with [`Error::ToleranceNotReached`] if the panel budget runs out or
/// the remaining error is dominated by panels too narrow to split further;
/// the error carries the best estimate so callers can still inspect it.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureOutcome> {
    if a == b {
        return Ok(QuadratureOutcome {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut heap = BinaryHeap::new();
    let (value, error) = qk61(&f, lo, hi);
    heap.push(Panel {
        a: lo,
        b: hi,
        value,
        error,
    });
    let mut panels = 1usize;
    let mut total_error = error;
    // Panels narrower than f64 spacing are kept as-is; their error cannot be
    // reduced by further bisection.
    let mut frozen_value = Complex64::new(0.0, 0.0);
    let mut frozen_error = 0.0f64;
    let mut frozen_panels = 0usize;

    while total_error + frozen_error > cfg.abs_tol {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break, // everything frozen
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            total_error -= worst.error;
            frozen_value += worst.value;
            frozen_error += worst.error;
            frozen_panels += 1;
            continue;
        }
        if panels + 1 > cfg.panel_budget {
            let value = sign
                * (heap.iter().map(|p| p.value).sum::<Complex64>()
                    + worst.value
                    + frozen_value);
            return Err(Error::ToleranceNotReached {
                value,
                achieved: total_error + frozen_error,
                requested: cfg.abs_tol,
                panels,
            });
        }
        total_error -= worst.error;
        let (lv, le) = qk61(&f, worst.a, mid);
        let (rv, re) = qk61(&f, mid, worst.b);
        total_error += le + re;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        panels += 1;
    }

    let achieved = total_error + frozen_error;
    let value = sign * (heap.iter().map(|p| p.value).sum::<Complex64>() + frozen_value);
    if achieved > cfg.abs_tol {
        return Err(Error::ToleranceNotReached {
            value,
            achieved,
            requested: cfg.abs_tol,
            panels: panels + frozen_panels,
        });
    }
    Ok(QuadratureOutcome {
        value,
        error_estimate: achieved,
        panels,
    })
}
