use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

/// Field element used by every numerical routine of the crate.
///
/// Two implementations exist: [`Complex64`] for production runs and
/// [`Counted`] which performs the identical arithmetic while tallying real
/// floating point operations. Conversions (`from_*`, `to_c64`) are free.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;

    fn from_f64(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Multiplication by a real number.
    fn scale(self, s: f64) -> Self;
    fn conj(self) -> Self;
    /// Records `n` special-function evaluations (sqrt, log, Bessel, ...).
    fn note_special(_n: u64) {}
}

impl Scalar for Complex64 {
    #[inline(always)]
    fn from_c64(z: Complex64) -> Self {
        z
    }
    #[inline(always)]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        Complex64::new(self.re * s, self.im * s)
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
}

static ADDS: AtomicU64 = AtomicU64::new(0);
static MULS: AtomicU64 = AtomicU64::new(0);
static DIVS: AtomicU64 = AtomicU64::new(0);
static SPECIALS: AtomicU64 = AtomicU64::new(0);

/// Snapshot of the global operation tallies fed by [`Counted`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlopTally {
    pub adds: u64,
    pub muls: u64,
    pub divs: u64,
    pub specials: u64,
}

impl FlopTally {
    /// Arithmetic operations; special-function calls are reported separately.
    pub fn flops(&self) -> u64 {
        self.adds + self.muls + self.divs
    }

    pub fn since(&self, earlier: &FlopTally) -> FlopTally {
        FlopTally {
            adds: self.adds - earlier.adds,
            muls: self.muls - earlier.muls,
            divs: self.divs - earlier.divs,
            specials: self.specials - earlier.specials,
        }
    }
}

impl Add for FlopTally {
    type Output = FlopTally;
    fn add(self, o: FlopTally) -> FlopTally {
        FlopTally {
            adds: self.adds + o.adds,
            muls: self.muls + o.muls,
            divs: self.divs + o.divs,
            specials: self.specials + o.specials,
        }
    }
}

/// Current global tallies. Counting regions that run concurrently share the
/// counters, so callers that need exact per-region numbers must serialize them.
pub fn flop_tally() -> FlopTally {
    FlopTally {
        adds: ADDS.load(Ordering::Relaxed),
        muls: MULS.load(Ordering::Relaxed),
        divs: DIVS.load(Ordering::Relaxed),
        specials: SPECIALS.load(Ordering::Relaxed),
    }
}

pub fn reset_flop_tally() {
    ADDS.store(0, Ordering::Relaxed);
    MULS.store(0, Ordering::Relaxed);
    DIVS.store(0, Ordering::Relaxed);
    SPECIALS.store(0, Ordering::Relaxed);
}

#[inline(always)]
fn tally(adds: u64, muls: u64, divs: u64) {
    if adds > 0 {
        ADDS.fetch_add(adds, Ordering::Relaxed);
    }
    if muls > 0 {
        MULS.fetch_add(muls, Ordering::Relaxed);
    }
    if divs > 0 {
        DIVS.fetch_add(divs, Ordering::Relaxed);
    }
}

/// Complex number whose arithmetic is counted in real flops:
/// add/sub = 2 adds, mul = 4 muls + 2 adds, div = 6 muls + 3 adds + 2 divs,
/// real scaling = 2 muls. Negation and conjugation are free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counted(pub Complex64);

impl Add for Counted {
    type Output = Counted;
    #[inline]
    fn add(self, o: Counted) -> Counted {
        tally(2, 0, 0);
        Counted(self.0 + o.0)
    }
}

impl Sub for Counted {
    type Output = Counted;
    #[inline]
    fn sub(self, o: Counted) -> Counted {
        tally(2, 0, 0);
        Counted(self.0 - o.0)
    }
}

impl Mul for Counted {
    type Output = Counted;
    #[inline]
    fn mul(self, o: Counted) -> Counted {
        tally(2, 4, 0);
        Counted(self.0 * o.0)
    }
}

impl Div for Counted {
    type Output = Counted;
    #[inline]
    fn div(self, o: Counted) -> Counted {
        tally(3, 6, 2);
        Counted(self.0 / o.0)
    }
}

impl Neg for Counted {
    type Output = Counted;
    #[inline]
    fn neg(self) -> Counted {
        Counted(-self.0)
    }
}

impl AddAssign for Counted {
    #[inline]
    fn add_assign(&mut self, o: Counted) {
        *self = *self + o;
    }
}

impl SubAssign for Counted {
    #[inline]
    fn sub_assign(&mut self, o: Counted) {
        *self = *self - o;
    }
}

impl MulAssign for Counted {
    #[inline]
    fn mul_assign(&mut self, o: Counted) {
        *self = *self * o;
    }
}

impl Scalar for Counted {
    fn from_c64(z: Complex64) -> Self {
        Counted(z)
    }
    fn to_c64(self) -> Complex64 {
        self.0
    }
    fn scale(self, s: f64) -> Self {
        tally(0, 2, 0);
        Counted(self.0.scale(s))
    }
    fn conj(self) -> Self {
        Counted(self.0.conj())
    }
    fn note_special(n: u64) {
        SPECIALS.fetch_add(n, Ordering::Relaxed);
    }
}
