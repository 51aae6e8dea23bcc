//! C ABI over the point-interaction library.
//!
//! Every function returns a [`PiStatus`] and writes results through out
//! pointers. On failure the out pointers are left untouched and a message is
//! available from [`pi_last_error_message`] on the same thread. Handles are
//! opaque heap objects owned by the caller, who releases them with the
//! matching `_free` function. Dimensions are passed as the integers 2 or 3.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use point_interaction::overlap::{self, PhaseSolution, QuadratureConfig};
use point_interaction::specfun::{self, CylKind};
use point_interaction::{oracle_well, states, Coupling, Dimension, Error, Phase, ScatteringState, SquareWell};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument is outside the function's domain.
    Domain = 2,
    /// A quadrature or extrapolation did not reach its tolerance.
    Convergence = 3,
    NoBoundState = 4,
    /// Phase samples do not come from one coupling.
    InconsistentFamily = 5,
    /// Bracketed root and closed form disagree.
    CrossCheck = 6,
    /// The library panicked; this is a bug.
    Internal = 7,
}

pub const PI_BESSEL_J0: u32 = 0;
pub const PI_BESSEL_J1: u32 = 1;
pub const PI_NEUMANN_N0: u32 = 2;
pub const PI_NEUMANN_N1: u32 = 3;

/// A point-interaction coupling: `k_b` in 2D, `k_b'` in 3D.
pub struct PiCoupling(Coupling);

/// A continuum state of definite wavenumber and phase.
pub struct PiState(ScatteringState);

/// Breakdown of a regularized overlap, see `pi_overlap`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PiOverlap {
    /// Non-delta overlap in the normalization of `pi_residual`.
    pub finite_part: f64,
    pub raw_overlap: f64,
    pub lower_limit_contribution: f64,
    pub upper_limit_contribution: f64,
    pub oscillatory_tail_discarded: f64,
    pub lower_eps_deviation: f64,
    pub extrapolation_spread: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn status_of(e: &Error) -> PiStatus {
    match e {
        Error::ConvergenceFailure { .. } => PiStatus::Convergence,
        Error::NoBoundState(_) => PiStatus::NoBoundState,
        Error::InconsistentFamily(_) => PiStatus::InconsistentFamily,
        Error::CrossCheck { .. } => PiStatus::CrossCheck,
        Error::Domain(_)
        | Error::OverflowGuard { .. }
        | Error::UnderflowToZero { .. }
        | Error::DegenerateWavenumbers { .. }
        | Error::ZeroPhase { .. }
        | Error::ResonancePole { .. }
        | Error::NoSolutionInBracket(_) => PiStatus::Domain,
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            PiStatus::Ok
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed as {name}"));
            PiStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            PiStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, name: &'static str, v: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` is null or points to a live `T`.
unsafe fn borrow<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

fn dimension(d: u32) -> Result<Dimension, Failure> {
    Ok(Dimension::from_int(d)?)
}

fn require_out<T>(p: *mut T, name: &'static str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::Null(name))
    } else {
        Ok(())
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or 0
/// when the last call succeeded.
///
/// # Safety
/// `buf` is null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn pi_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_new_2d(kb: f64, out: *mut *mut PiCoupling) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let c = Coupling::two_d(kb)?;
        write(out, "out", Box::into_raw(Box::new(PiCoupling(c))))
    })
}

/// `kb_prime = 0` is the unitary limit.
///
/// # Safety
/// `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_new_3d(kb_prime: f64, out: *mut *mut PiCoupling) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let c = Coupling::three_d(kb_prime)?;
        write(out, "out", Box::into_raw(Box::new(PiCoupling(c))))
    })
}

/// # Safety
/// `c` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_free(c: *mut PiCoupling) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Dimension (2 or 3) and coupling value (0 for the unitary limit).
///
/// # Safety
/// `c` is a live handle; out pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_info(c: *const PiCoupling, out_dim: *mut u32, out_value: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out_value, "out_value")?;
        write(out_dim, "out_dim", c.dimension().as_int())?;
        write(out_value, "out_value", c.value())
    })
}

/// `tan eta(k)` of the family; infinite at a pole.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_tan_eta(c: *const PiCoupling, k: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        write(out, "out", c.tan_eta(k)?)
    })
}

/// The family's phase as the unit pair `(cos eta, sin eta)`.
///
/// # Safety
/// `c` is a live handle; out pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_phase(c: *const PiCoupling, k: f64, out_cos: *mut f64, out_sin: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out_cos, "out_cos")?;
        require_out(out_sin, "out_sin")?;
        let p = c.phase(k)?;
        write(out_cos, "out_cos", p.cos())?;
        write(out_sin, "out_sin", p.sin())
    })
}

/// Bound-state decay constant `kappa`; `NoBoundState` for 3D `k_b' >= 0`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_bound_kappa(c: *const PiCoupling, out: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        write(out, "out", states::bound_state(c)?.kappa)
    })
}

/// Unnormalized bound-state profile `K0(kappa r)` (2D) or `exp(-kappa r)/r` (3D).
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_bound_psi(dim: u32, kappa: f64, r: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let b = states::BoundState::new(dimension(dim)?, kappa)?;
        write(out, "out", states::bound_psi(&b, r)?)
    })
}

/// State of wavenumber `k` on the family of `c`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pi_coupling_state(c: *const PiCoupling, k: f64, out: *mut *mut PiState) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        let s = c.state(k)?;
        write(out, "out", Box::into_raw(Box::new(PiState(s))))
    })
}

/// State with an explicit phase given as `tan eta` (infinite for `eta = pi/2`).
///
/// # Safety
/// `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pi_state_new(dim: u32, k: f64, tan_eta: f64, out: *mut *mut PiState) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let s = ScatteringState::new(dimension(dim)?, k, Phase::from_tan(tan_eta)?)?;
        write(out, "out", Box::into_raw(Box::new(PiState(s))))
    })
}

/// # Safety
/// `s` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pi_state_free(s: *mut PiState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Radial wave function at `r > 0`.
///
/// # Safety
/// `s` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_state_psi(s: *const PiState, r: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        let s = &borrow(s, "state")?.0;
        require_out(out, "out")?;
        write(out, "out", s.psi(r)?)
    })
}

/// Regularized non-delta overlap of two states with the default schedule
/// for their wavenumbers.
///
/// # Safety
/// `a` and `b` are live handles; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_overlap(a: *const PiState, b: *const PiState, out: *mut PiOverlap) -> PiStatus {
    guard(|| {
        let a = &borrow(a, "a")?.0;
        let b = &borrow(b, "b")?.0;
        require_out(out, "out")?;
        let cfg = QuadratureConfig::for_pair(a.dimension, a.k, b.k);
        let o = overlap::overlap_numeric(a, b, &cfg)?;
        write(
            out,
            "out",
            PiOverlap {
                finite_part: o.finite_part,
                raw_overlap: o.raw_overlap,
                lower_limit_contribution: o.lower_limit_contribution,
                upper_limit_contribution: o.upper_limit_contribution,
                oscillatory_tail_discarded: o.oscillatory_tail_discarded,
                lower_eps_deviation: o.lower_eps_deviation,
                extrapolation_spread: o.extrapolation_spread,
            },
        )
    })
}

/// Closed-form non-delta residual for states normalized as `R - tan eta I`.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_residual(dim: u32, k: f64, l: f64, tan_eta_k: f64, tan_eta_l: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        write(out, "out", overlap::residual(dimension(dim)?, k, l, tan_eta_k, tan_eta_l)?)
    })
}

/// `tan eta(l)` cancelling the overlap with the reference state. A pole is
/// reported through `out_is_pole` with `out_tan` set to infinity.
///
/// # Safety
/// Out pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pi_solve_phase(
    dim: u32,
    l: f64,
    reference_k: f64,
    reference_tan_eta: f64,
    out_tan: *mut f64,
    out_is_pole: *mut bool,
) -> PiStatus {
    guard(|| {
        require_out(out_tan, "out_tan")?;
        require_out(out_is_pole, "out_is_pole")?;
        let s = overlap::solve_phase(l, reference_k, reference_tan_eta, dimension(dim)?)?;
        write(out_tan, "out_tan", s.tan())?;
        write(out_is_pole, "out_is_pole", s == PhaseSolution::Pole)
    })
}

/// Recovers the coupling from `n` samples `(ks[i], tans[i])`.
///
/// # Safety
/// `ks` and `tans` hold `n` readable values; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pi_infer_coupling(
    dim: u32,
    ks: *const f64,
    tans: *const f64,
    n: usize,
    out: *mut *mut PiCoupling,
) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        if ks.is_null() {
            return Err(Failure::Null("ks"));
        }
        if tans.is_null() {
            return Err(Failure::Null("tans"));
        }
        let ks = std::slice::from_raw_parts(ks, n);
        let tans = std::slice::from_raw_parts(tans, n);
        let samples: Vec<(f64, f64)> = ks.iter().copied().zip(tans.iter().copied()).collect();
        let c = overlap::infer_coupling(&samples, dimension(dim)?)?;
        write(out, "out", Box::into_raw(Box::new(PiCoupling(c))))
    })
}

/// Windowed estimate of the delta-normalization coefficient at `k`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_delta_coefficient(c: *const PiCoupling, k: f64, window: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        let dim = c.dimension();
        let cfg = QuadratureConfig::for_pair(dim, k, k + window);
        write(out, "out", overlap::delta_coefficient(dim, c, k, window, &cfg)?)
    })
}

/// Overlap of the family's bound state with its continuum state at `k`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_bound_scattering_overlap(c: *const PiCoupling, k: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        let bs = states::bound_state(c)?;
        let cfg = QuadratureConfig::for_pair(c.dimension(), k, 1.5 * k);
        write(out, "out", overlap::bound_scattering_overlap(&bs, &c.state(k)?, &cfg)?)
    })
}

/// s-wave phase shift of an attractive square well of depth `depth` (`V0 = depth`).
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_well_phase_shift(dim: u32, radius: f64, depth: f64, k: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let w = SquareWell::new(dimension(dim)?, radius, depth)?;
        write(out, "out", oracle_well::phase_shift(k, &w)?)
    })
}

/// Depth of the first-branch square well of `radius` reproducing `c`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_tune_depth(c: *const PiCoupling, radius: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        let c = &borrow(c, "coupling")?.0;
        require_out(out, "out")?;
        write(out, "out", oracle_well::tune_depth(c.dimension(), radius, c)?.depth)
    })
}

/// `J0`, `J1`, `N0` or `N1` at `x`, selected by the `PI_BESSEL_*` / `PI_NEUMANN_*` codes.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_cyl_bessel(kind: u32, x: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        let kind = match kind {
            PI_BESSEL_J0 => CylKind::J0,
            PI_BESSEL_J1 => CylKind::J1,
            PI_NEUMANN_N0 => CylKind::N0,
            PI_NEUMANN_N1 => CylKind::N1,
            other => return Err(Error::Domain(format!("unknown cylinder function code {other}")).into()),
        };
        write(out, "out", specfun::cyl_bessel(kind, x)?)
    })
}

/// Modified Bessel function `K0(x)`.
///
/// # Safety
/// `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pi_bessel_k0(x: f64, out: *mut f64) -> PiStatus {
    guard(|| {
        require_out(out, "out")?;
        write(out, "out", specfun::mod_bessel_k0(x)?)
    })
}
