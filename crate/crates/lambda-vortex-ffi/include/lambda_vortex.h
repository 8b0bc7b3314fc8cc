#ifndef LAMBDA_VORTEX_H
#define LAMBDA_VORTEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Polarization classification of a Stokes sample.
 */
typedef enum LvPolarizationClass {
  LvPolarizationLinear = 0,
  LvPolarizationLeftCircular = 1,
  LvPolarizationRightCircular = 2,
  LvPolarizationEllipticalLeft = 3,
  LvPolarizationEllipticalRight = 4,
  LvPolarizationUndefined = 5,
} LvPolarizationClass;

/**
 * Status codes returned by every fallible call.
 */
typedef enum LvStatus {
  LvOk = 0,
  /**
   * A required pointer argument was NULL.
   */
  LvNullPointer = 1,
  /**
   * A parameter violated its documented range.
   */
  LvInvalidArgument = 2,
  /**
   * The medium does not attenuate (Im[X] >= 0), so no characteristic
   * distance exists.
   */
  LvNonAbsorbing = 3,
  /**
   * X = 0 with the series fallback disabled.
   */
  LvDegenerate = 4,
  /**
   * File could not be written or read.
   */
  LvIoError = 5,
  /**
   * The requested integration would exceed the step cap.
   */
  LvStepOverflow = 6,
} LvStatus;

/**
 * Entrance vector vortex beam parameters (opaque).
 */
typedef struct LvBeam LvBeam;

/**
 * Sampled transverse field map (opaque).
 */
typedef struct LvFieldMap LvFieldMap;

/**
 * Medium parameters for both legs (opaque).
 */
typedef struct LvMedium LvMedium;

/**
 * Prepared ground-state superposition (opaque).
 */
typedef struct LvState LvState;

/**
 * Complex number as a (re, im) pair of doubles.
 */
typedef struct LvComplex {
  double re;
  double im;
} LvComplex;

/**
 * Right- and left-circular Rabi amplitudes.
 */
typedef struct LvFieldPair {
  struct LvComplex omega_r;
  struct LvComplex omega_l;
} LvFieldPair;

/**
 * Stokes parameters plus ellipse angles; `zeta`/`xi` are NaN when the
 * sample is below the intensity floor.
 */
typedef struct LvStokes {
  double s0;
  double s1;
  double s2;
  double s3;
  double zeta;
  double xi;
  enum LvPolarizationClass classification;
} LvStokes;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *lv_version(void);

/**
 * Builds a prepared state from the magnitude of c1 and the relative phase
 * carried by c2.
 *
 * # Safety
 * `out` must be a valid pointer to an `LvState*` slot.
 */
enum LvStatus lv_state_new(double c1_magnitude, double relative_phase, struct LvState **out);

/**
 * # Safety
 * `state` must be NULL or a pointer from `lv_state_new`, not yet freed.
 */
void lv_state_free(struct LvState *state);

/**
 * Builds a medium from per-leg optical depth, decay rate, and detuning,
 * plus the physical length.
 *
 * # Safety
 * `out` must be a valid pointer to an `LvMedium*` slot.
 */
enum LvStatus lv_medium_new(double alpha_r,
                            double gamma_r,
                            double delta_r,
                            double alpha_l,
                            double gamma_l,
                            double delta_l,
                            double length,
                            struct LvMedium **out);

/**
 * # Safety
 * `medium` must be NULL or a pointer from `lv_medium_new`, not yet freed.
 */
void lv_medium_free(struct LvMedium *medium);

/**
 * Builds a vortex beam: topological charge of the right-circular
 * component, shared waist, mixing angle theta in [0, pi/2], relative phase
 * psi, and overall Rabi scale epsilon.
 *
 * # Safety
 * `out` must be a valid pointer to an `LvBeam*` slot.
 */
enum LvStatus lv_beam_new(int32_t charge,
                          double waist,
                          double theta,
                          double psi,
                          double epsilon,
                          struct LvBeam **out);

/**
 * # Safety
 * `beam` must be NULL or a pointer from `lv_beam_new`, not yet freed.
 */
void lv_beam_free(struct LvBeam *beam);

/**
 * Entrance fields of the beam at polar point (r, phi); phi is wrapped
 * into [0, 2pi).
 *
 * # Safety
 * `beam` and `out` must be valid pointers.
 */
enum LvStatus lv_input_fields(const struct LvBeam *beam,
                              double r,
                              double phi,
                              struct LvFieldPair *out);

/**
 * Propagates the entrance fields to distance z with the analytic solution.
 *
 * # Safety
 * `state`, `medium`, and `out` must be valid pointers.
 */
enum LvStatus lv_propagate(const struct LvState *state,
                           const struct LvMedium *medium,
                           struct LvFieldPair input,
                           double z,
                           struct LvFieldPair *out);

/**
 * Stationary fields after the damped component has died out (symmetric
 * absorbing regime).
 *
 * # Safety
 * `state` and `out` must be valid pointers.
 */
enum LvStatus lv_asymptotic_fields(const struct LvState *state,
                                   struct LvFieldPair input,
                                   struct LvFieldPair *out);

/**
 * Characteristic attenuation distance; fails with LV_NON_ABSORBING when
 * Im[X] >= 0.
 *
 * # Safety
 * `state`, `medium`, and `out` must be valid pointers.
 */
enum LvStatus lv_characteristic_distance(const struct LvState *state,
                                         const struct LvMedium *medium,
                                         double *out);

/**
 * First-order steady-state coherences (rho_g1e, rho_g2e) for the given
 * fields.
 *
 * # Safety
 * All pointers must be valid.
 */
enum LvStatus lv_steady_coherences(const struct LvState *state,
                                   const struct LvMedium *medium,
                                   struct LvFieldPair fields,
                                   struct LvComplex *out_rho_g1e,
                                   struct LvComplex *out_rho_g2e);

/**
 * Stokes parameters and polarization ellipse of a field pair.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LvStatus lv_stokes(struct LvFieldPair fields, struct LvStokes *out);

/**
 * Independent fixed-step RK4 integration of the propagation equations,
 * for cross-checking the analytic path from a foreign runtime.
 *
 * # Safety
 * `state`, `medium`, and `out` must be valid pointers.
 */
enum LvStatus lv_oracle_integrate(const struct LvState *state,
                                  const struct LvMedium *medium,
                                  struct LvFieldPair input,
                                  double z,
                                  uint32_t steps_per_absorption_length,
                                  struct LvFieldPair *out);

/**
 * Evaluates the field map on an n-by-n grid spanning `extent` waists.
 *
 * # Safety
 * `state`, `medium`, `beam`, and `out` must be valid pointers.
 */
enum LvStatus lv_field_map_evaluate(const struct LvState *state,
                                    const struct LvMedium *medium,
                                    const struct LvBeam *beam,
                                    uint32_t n,
                                    double extent,
                                    double z,
                                    struct LvFieldMap **out);

/**
 * Samples per axis of a field map.
 *
 * # Safety
 * `map` must be a valid pointer from `lv_field_map_evaluate`.
 */
uint32_t lv_field_map_n(const struct LvFieldMap *map);

/**
 * Copies one component (0 = right-circular, 1 = left-circular) into
 * `buffer`, row-major, `len` elements; `len` must equal n*n.
 *
 * # Safety
 * `map` must be valid and `buffer` must point to at least `len` writable
 * `LvComplex` slots.
 */
enum LvStatus lv_field_map_component(const struct LvFieldMap *map,
                                     uint32_t component,
                                     struct LvComplex *buffer,
                                     uintptr_t len);

/**
 * Writes a field map to a VVFM container file.
 *
 * # Safety
 * `map` must be valid and `path` a NUL-terminated UTF-8 string.
 */
enum LvStatus lv_field_map_write_vvfm(const struct LvFieldMap *map, const char *path);

/**
 * # Safety
 * `map` must be NULL or a pointer from `lv_field_map_evaluate`, not yet
 * freed.
 */
void lv_field_map_free(struct LvFieldMap *map);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LAMBDA_VORTEX_H */
