#ifndef POINT_INTERACTION_H
#define POINT_INTERACTION_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define PI_BESSEL_J0 0

#define PI_BESSEL_J1 1

#define PI_NEUMANN_N0 2

#define PI_NEUMANN_N1 3

// Result code of every exported function.
typedef enum PiStatus {
  PI_STATUS_OK = 0,
  // A required pointer argument was null.
  PI_STATUS_NULL_POINTER = 1,
  // An argument is outside the function's domain.
  PI_STATUS_DOMAIN = 2,
  // A quadrature or extrapolation did not reach its tolerance.
  PI_STATUS_CONVERGENCE = 3,
  PI_STATUS_NO_BOUND_STATE = 4,
  // Phase samples do not come from one coupling.
  PI_STATUS_INCONSISTENT_FAMILY = 5,
  // Bracketed root and closed form disagree.
  PI_STATUS_CROSS_CHECK = 6,
  // The library panicked; this is a bug.
  PI_STATUS_INTERNAL = 7,
} PiStatus;

// A point-interaction coupling: `k_b` in 2D, `k_b'` in 3D.
typedef struct PiCoupling PiCoupling;

// A continuum state of definite wavenumber and phase.
typedef struct PiState PiState;

// Breakdown of a regularized overlap, see `pi_overlap`.
typedef struct PiOverlap {
  // Non-delta overlap in the normalization of `pi_residual`.
  double finite_part;
  double raw_overlap;
  double lower_limit_contribution;
  double upper_limit_contribution;
  double oscillatory_tail_discarded;
  double lower_eps_deviation;
  double extrapolation_spread;
} PiOverlap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL, or 0
// when the last call succeeded.
//
// # Safety
// `buf` is null or valid for `len` bytes of writes.
size_t pi_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *pi_version(void);

// # Safety
// `out` is valid for a pointer write.
enum PiStatus pi_coupling_new_2d(double kb, struct PiCoupling **out);

// `kb_prime = 0` is the unitary limit.
//
// # Safety
// `out` is valid for a pointer write.
enum PiStatus pi_coupling_new_3d(double kb_prime, struct PiCoupling **out);

// # Safety
// `c` is null or a handle from this library that has not been freed.
void pi_coupling_free(struct PiCoupling *c);

// Dimension (2 or 3) and coupling value (0 for the unitary limit).
//
// # Safety
// `c` is a live handle; out pointers are valid for writes.
enum PiStatus pi_coupling_info(const struct PiCoupling *c, uint32_t *out_dim, double *out_value);

// `tan eta(k)` of the family; infinite at a pole.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum PiStatus pi_coupling_tan_eta(const struct PiCoupling *c, double k, double *out);

// The family's phase as the unit pair `(cos eta, sin eta)`.
//
// # Safety
// `c` is a live handle; out pointers are valid for writes.
enum PiStatus pi_coupling_phase(const struct PiCoupling *c,
                                double k,
                                double *out_cos,
                                double *out_sin);

// Bound-state decay constant `kappa`; `NoBoundState` for 3D `k_b' >= 0`.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum PiStatus pi_coupling_bound_kappa(const struct PiCoupling *c, double *out);

// Unnormalized bound-state profile `K0(kappa r)` (2D) or `exp(-kappa r)/r` (3D).
//
// # Safety
// `out` is valid for a write.
enum PiStatus pi_bound_psi(uint32_t dim, double kappa, double r, double *out);

// State of wavenumber `k` on the family of `c`.
//
// # Safety
// `c` is a live handle; `out` is valid for a pointer write.
enum PiStatus pi_coupling_state(const struct PiCoupling *c, double k, struct PiState **out);

// State with an explicit phase given as `tan eta` (infinite for `eta = pi/2`).
//
// # Safety
// `out` is valid for a pointer write.
enum PiStatus pi_state_new(uint32_t dim, double k, double tan_eta, struct PiState **out);

// # Safety
// `s` is null or a handle from this library that has not been freed.
void pi_state_free(struct PiState *s);

// Radial wave function at `r > 0`.
//
// # Safety
// `s` is a live handle; `out` is valid for a write.
enum PiStatus pi_state_psi(const struct PiState *s, double r, double *out);

// Regularized non-delta overlap of two states with the default schedule
// for their wavenumbers.
//
// # Safety
// `a` and `b` are live handles; `out` is valid for a write.
enum PiStatus pi_overlap(const struct PiState *a, const struct PiState *b, struct PiOverlap *out);

// Closed-form non-delta residual for states normalized as `R - tan eta I`.
//
// # Safety
// `out` is valid for a write.
enum PiStatus pi_residual(uint32_t dim,
                          double k,
                          double l,
                          double tan_eta_k,
                          double tan_eta_l,
                          double *out);

// `tan eta(l)` cancelling the overlap with the reference state. A pole is
// reported through `out_is_pole` with `out_tan` set to infinity.
//
// # Safety
// Out pointers are valid for writes.
enum PiStatus pi_solve_phase(uint32_t dim,
                             double l,
                             double reference_k,
                             double reference_tan_eta,
                             double *out_tan,
                             bool *out_is_pole);

// Recovers the coupling from `n` samples `(ks[i], tans[i])`.
//
// # Safety
// `ks` and `tans` hold `n` readable values; `out` is valid for a pointer write.
enum PiStatus pi_infer_coupling(uint32_t dim,
                                const double *ks,
                                const double *tans,
                                size_t n,
                                struct PiCoupling **out);

// Windowed estimate of the delta-normalization coefficient at `k`.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum PiStatus pi_delta_coefficient(const struct PiCoupling *c,
                                   double k,
                                   double window,
                                   double *out);

// Overlap of the family's bound state with its continuum state at `k`.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum PiStatus pi_bound_scattering_overlap(const struct PiCoupling *c, double k, double *out);

// s-wave phase shift of an attractive square well of depth `depth` (`V0 = depth`).
//
// # Safety
// `out` is valid for a write.
enum PiStatus pi_well_phase_shift(uint32_t dim, double radius, double depth, double k, double *out);

// Depth of the first-branch square well of `radius` reproducing `c`.
//
// # Safety
// `c` is a live handle; `out` is valid for a write.
enum PiStatus pi_tune_depth(const struct PiCoupling *c, double radius, double *out);

// `J0`, `J1`, `N0` or `N1` at `x`, selected by the `PI_BESSEL_*` / `PI_NEUMANN_*` codes.
//
// # Safety
// `out` is valid for a write.
enum PiStatus pi_cyl_bessel(uint32_t kind, double x, double *out);

// Modified Bessel function `K0(x)`.
//
// # Safety
// `out` is valid for a write.
enum PiStatus pi_bessel_k0(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POINT_INTERACTION_H */
