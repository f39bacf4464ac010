#ifndef SPIRALBOUND_H
#define SPIRALBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Width-function classification of a spiral profile.
typedef enum SbSpiralClass {
  SB_SPIRAL_CLASS_STRICTLY_EXPANDING = 0,
  SB_SPIRAL_CLASS_EXPANDING = 1,
  SB_SPIRAL_CLASS_STRICTLY_SHRINKING = 2,
  SB_SPIRAL_CLASS_SHRINKING = 3,
  SB_SPIRAL_CLASS_ASYMPTOTICALLY_ARCHIMEDEAN = 4,
} SbSpiralClass;

// Status codes returned by every fallible call.
typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_DOMAIN_ERROR = 1,
  SB_STATUS_RANGE_ERROR = 2,
  SB_STATUS_NUMERICAL_ERROR = 3,
  SB_STATUS_GEOMETRY_ERROR = 4,
  SB_STATUS_ASSUMPTION_VIOLATION = 5,
  SB_STATUS_NOT_SIMPLE = 6,
  SB_STATUS_SOLVER_ERROR = 7,
  SB_STATUS_COUNT_MISMATCH = 8,
  SB_STATUS_CONFIG_ERROR = 9,
  SB_STATUS_IO_ERROR = 10,
  SB_STATUS_NULL_POINTER = 11,
  SB_STATUS_PANIC = 12,
} SbStatus;

// Threshold-set variant of the moment bound.
typedef enum SbThresholdVariant {
  SB_THRESHOLD_VARIANT_AS_STATED_LAMBDA = 0,
  SB_THRESHOLD_VARIANT_CONSERVATIVE2_LAMBDA = 1,
} SbThresholdVariant;

// Opaque geometry cache handle.
typedef struct SbCache SbCache;

// Opaque eigensolver result handle.
typedef struct SbEigenResult SbEigenResult;

// Opaque horn profile handle.
typedef struct SbHorn SbHorn;

// Opaque spiral profile handle.
typedef struct SbProfile SbProfile;

// All pieces of one evaluated bound.
typedef struct SbBoundReport {
  double integral_term;
  double c1_term;
  double c2_term;
  double total;
  double sup_w;
  // Right endpoint of the threshold set; NaN when the set is empty.
  double s_star;
  double width_integral;
  // 1 when the threshold set ran into the end of the cached range.
  int32_t threshold_saturated;
} SbBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message of the calling thread. The pointer stays valid
// until the next failing call on the same thread.
const char *sb_last_error(void);

// Library version as a static string.
const char *sb_version(void);

// Create a power spiral r(θ) = scale · θ^exponent.
//
// # Safety
// `out` must be a valid pointer; the returned handle must be released with
// [`sb_profile_free`].
enum SbStatus sb_profile_power(double scale, double exponent, struct SbProfile **out);

// Create an Archimedean spiral r(θ) = scale · θ.
//
// # Safety
// `out` must be a valid pointer; release the handle with [`sb_profile_free`].
enum SbStatus sb_profile_archimedean(double scale, struct SbProfile **out);

// Release a profile handle. NULL is ignored.
//
// # Safety
// `p` must be NULL or a pointer previously returned by a profile
// constructor, not yet freed.
void sb_profile_free(struct SbProfile *p);

// Coil width a(θ) = (r(θ) − r(θ−2π)) / 2π.
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer.
enum SbStatus sb_profile_width(const struct SbProfile *p, double theta, double *out);

// Arc length s(θ) from the start of the curve.
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer.
enum SbStatus sb_profile_arc_length(const struct SbProfile *p, double theta, double *out);

// Curvature γ(θ).
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer.
enum SbStatus sb_profile_curvature(const struct SbProfile *p, double theta, double *out);

// Point of the parallel-coordinate map at (θ, u).
//
// # Safety
// `p` must be a live profile handle; `out_x`, `out_y` valid pointers.
enum SbStatus sb_profile_fermi_point(const struct SbProfile *p,
                                     double theta,
                                     double u,
                                     double *out_x,
                                     double *out_y);

// Classify the spiral by the monotonicity and limit of its width function.
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer.
enum SbStatus sb_profile_classify(const struct SbProfile *p, enum SbSpiralClass *out);

// Build the geometry cache over θ ∈ [start, theta_hi]. `margin` is the
// safety margin in d·γ ≤ 1 − margin (pass 0 for the default 0.05); `gap`
// is the coil gap (pass 0 for a single spiral, 2π).
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer; release the
// handle with [`sb_cache_free`].
enum SbStatus sb_cache_build(const struct SbProfile *p,
                             double theta_hi,
                             double margin,
                             double gap,
                             uint64_t seed,
                             struct SbCache **out);

// Release a cache handle. NULL is ignored.
//
// # Safety
// `c` must be NULL or a pointer from [`sb_cache_build`], not yet freed.
void sb_cache_free(struct SbCache *c);

// Smallest admissible arc length s₀ of the cache.
//
// # Safety
// `c` must be a live cache handle.
double sb_cache_s0(const struct SbCache *c);

// Inward normal width d(s), s ≥ s₀.
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_cache_normal_width(const struct SbCache *c, double s, double *out);

// Inverse arc-length map θ(s).
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_cache_theta_of_arc(const struct SbCache *c, double s, double *out);

// Effective potential W(s).
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_cache_potential_w(const struct SbCache *c, double s, double *out);

// Evaluate the moment bound (σ ≥ 3/2).
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_moment_bound(const struct SbCache *c,
                              double sigma,
                              double lambda,
                              enum SbThresholdVariant variant,
                              struct SbBoundReport *out);

// Evaluate the small-power bound (1/2 ≤ σ < 3/2).
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_small_sigma_bound(const struct SbCache *c,
                                   double sigma,
                                   double lambda,
                                   enum SbThresholdVariant variant,
                                   struct SbBoundReport *out);

// Large-Λ asymptotic form of the bound.
//
// # Safety
// `c` must be a live cache handle and `out` a valid pointer.
enum SbStatus sb_asymptotic_bound(const struct SbCache *c,
                                  double sigma,
                                  double lambda,
                                  double *out);

// One-dimensional semiclassical constant L¹(σ).
//
// # Safety
// `out` must be a valid pointer.
enum SbStatus sb_lt_constant_1(double sigma, double *out);

// Two-dimensional semiclassical constant L²(σ) = 1/(4π(σ+1)).
//
// # Safety
// `out` must be a valid pointer.
enum SbStatus sb_lt_constant_2(double sigma, double *out);

// Sharpness constant ratio 2^{σ+3} π L¹(σ).
//
// # Safety
// `out` must be a valid pointer.
enum SbStatus sb_constant_ratio(double sigma, double *out);

// Sharpness lower bound ((1−w)²/(2^{σ+3}π²)) Λ^{σ+1} ln Λ.
//
// # Safety
// `out` must be a valid pointer.
enum SbStatus sb_lower_bound_example(double sigma, double lambda, double w, double *out);

// Exponential horn width amplitude · e^{−rate·s}.
//
// # Safety
// `out` must be a valid pointer; release with [`sb_horn_free`].
enum SbStatus sb_horn_exponential(double amplitude, double rate, struct SbHorn **out);

// Constant horn of the given height on (0, length).
//
// # Safety
// `out` must be a valid pointer; release with [`sb_horn_free`].
enum SbStatus sb_horn_constant(double height, double length, struct SbHorn **out);

// Release a horn handle. NULL is ignored.
//
// # Safety
// `h` must be NULL or a pointer from a horn constructor, not yet freed.
void sb_horn_free(struct SbHorn *h);

// Weyl-type counting integral for the horn at energy λ.
//
// # Safety
// `h` must be a live horn handle and `out` a valid pointer.
enum SbStatus sb_horn_weyl_count(const struct SbHorn *h, double lambda, double *out);

// Chain-of-estimates lower bound (Λ/2π²) ∫_{f ≥ π/√Λ} f ds.
//
// # Safety
// `h` must be a live horn handle and `out` a valid pointer.
enum SbStatus sb_horn_lower_estimate(const struct SbHorn *h, double lambda, double *out);

// Rasterize the spiral domain (truncation disc `r_max`, spacing `h`),
// assemble the five-point operator and compute every eigenvalue below
// `cutoff`, certified against the inertia count.
//
// # Safety
// `p` must be a live profile handle and `out` a valid pointer; release the
// result with [`sb_eigen_free`].
enum SbStatus sb_spiral_eigenvalues(const struct SbProfile *p,
                                    double h,
                                    double r_max,
                                    double cutoff,
                                    uint64_t seed,
                                    struct SbEigenResult **out);

// Release an eigensolver result. NULL is ignored.
//
// # Safety
// `r` must be NULL or a pointer from [`sb_spiral_eigenvalues`], not freed.
void sb_eigen_free(struct SbEigenResult *r);

// Number of eigenvalues below the cutoff.
//
// # Safety
// `r` must be a live result handle.
size_t sb_eigen_count(const struct SbEigenResult *r);

// The i-th eigenvalue (ascending); NaN when out of range.
//
// # Safety
// `r` must be a live result handle.
double sb_eigen_value(const struct SbEigenResult *r, size_t i);

// Eigenvalue moment Σ (Λ − λ_i)^σ of the computed spectrum.
//
// # Safety
// `r` must be a live result handle and `out` a valid pointer.
enum SbStatus sb_eigen_moment(const struct SbEigenResult *r,
                              double sigma,
                              double lambda,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPIRALBOUND_H */
