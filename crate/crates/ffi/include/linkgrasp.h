#ifndef LINKGRASP_H
#define LINKGRASP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every entry point.
typedef enum LgStatus {
  LG_STATUS_OK = 0,
  LG_STATUS_NULL_POINTER = 1,
  LG_STATUS_INVALID_ARGUMENT = 2,
  // Malformed mechanism (unknown id, bad length, ...).
  LG_STATUS_DEFINITION = 3,
  LG_STATUS_NO_CONVERGENCE = 4,
  LG_STATUS_SINGULAR_JACOBIAN = 5,
  LG_STATUS_DEGENERATE_FIT = 6,
  LG_STATUS_INFEASIBLE = 7,
  LG_STATUS_UNBOUNDED = 8,
  // Parameter outside the model's domain.
  LG_STATUS_DOMAIN = 9,
  // Mechanism JSON could not be parsed.
  LG_STATUS_PARSE = 10,
  // A Rust panic was caught at the boundary.
  LG_STATUS_PANIC = 99,
} LgStatus;

typedef enum LgClosure {
  LG_CLOSURE_FORCE_CLOSED = 0,
  LG_CLOSURE_MARGINAL = 1,
  LG_CLOSURE_NOT_CLOSED = 2,
} LgClosure;

// Opaque mechanism handle.
typedef struct LgMechanism LgMechanism;

// Opaque swept trajectory.
typedef struct LgTrajectory LgTrajectory;

// Total-least-squares line through a node path.
typedef struct LgLineFit {
  double centroid_x;
  double centroid_y;
  double direction_x;
  double direction_y;
  double max_deviation;
  double rms_deviation;
} LgLineFit;

typedef struct LgFingerParams {
  double k1;
  double k2;
  double l1;
  double h;
  double theta2;
  double mu;
  double ta;
  double t2;
} LgFingerParams;

typedef struct LgContactForces {
  double f1;
  double f2;
  enum LgClosure closure;
} LgContactForces;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *lg_version(void);

// Message of the last failed call on this thread, empty after a success.
// Valid until the next call on the same thread.
const char *lg_last_error_message(void);

// Parses a mechanism JSON document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum LgStatus lg_mechanism_from_json(const char *json, struct LgMechanism **out);

// Classical Peaucellier inversor.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_mechanism_peaucellier(double long_link,
                                       double rhombus_side,
                                       double crank_radius,
                                       struct LgMechanism **out);

// Semi-Peaucellier linkage.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_mechanism_semi_peaucellier(double long_link,
                                            double rhombus_side,
                                            double crank_radius,
                                            double bar_overhang,
                                            struct LgMechanism **out);

// One (`stages = 1`) or two chained parallelograms.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_mechanism_double_parallelogram(double link_length,
                                                double base_span,
                                                uint8_t stages,
                                                struct LgMechanism **out);

// Semi-Peaucellier linkage composed with a two-stage parallelogram. The
// fingertip node is `fingertip`.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_mechanism_finger(double long_link,
                                  double rhombus_side,
                                  double crank_radius,
                                  double bar_overhang,
                                  double link_length,
                                  double base_span,
                                  struct LgMechanism **out);

// Serializes to JSON. Free the string with [`lg_string_free`].
//
// # Safety
// `mechanism` must be a live handle; `out` must be writable.
enum LgStatus lg_mechanism_to_json(const struct LgMechanism *mechanism, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void lg_string_free(char *s);

// Releases a mechanism. Null is ignored.
//
// # Safety
// `mechanism` must come from this library and not be freed twice.
void lg_mechanism_free(struct LgMechanism *mechanism);

// `2 × free nodes − equations`; zero for a well-constrained mechanism.
//
// # Safety
// `mechanism` must be a live handle; `out` must be writable.
enum LgStatus lg_mechanism_mobility(const struct LgMechanism *mechanism, int64_t *out);

// Moving rigid bodies, counting declared bodies once.
//
// # Safety
// `mechanism` must be a live handle; `out` must be writable.
enum LgStatus lg_mechanism_component_count(const struct LgMechanism *mechanism, size_t *out);

// Sweeps the driver over `steps + 1` samples from `from` to `to`.
//
// # Safety
// `mechanism` must be a live handle; `out` must be writable.
enum LgStatus lg_sweep(const struct LgMechanism *mechanism,
                       double from,
                       double to,
                       size_t steps,
                       struct LgTrajectory **out);

// Releases a trajectory. Null is ignored.
//
// # Safety
// `trajectory` must come from this library and not be freed twice.
void lg_trajectory_free(struct LgTrajectory *trajectory);

// # Safety
// `trajectory` must be a live handle; `out` must be writable.
enum LgStatus lg_trajectory_len(const struct LgTrajectory *trajectory, size_t *out);

// Driver input of sample `index`.
//
// # Safety
// `trajectory` must be a live handle; `out` must be writable.
enum LgStatus lg_trajectory_input(const struct LgTrajectory *trajectory, size_t index, double *out);

// Position of `node` at sample `index`.
//
// # Safety
// `trajectory` must be a live handle, `node` NUL-terminated, and both out
// pointers writable.
enum LgStatus lg_trajectory_position(const struct LgTrajectory *trajectory,
                                     size_t index,
                                     const char *node,
                                     double *out_x,
                                     double *out_y);

// Line fit of `node`'s path.
//
// # Safety
// `trajectory` must be a live handle, `node` NUL-terminated, `out`
// writable.
enum LgStatus lg_trajectory_straightness(const struct LgTrajectory *trajectory,
                                         const char *node,
                                         struct LgLineFit *out);

// Largest rotation of segment `a → b` from its first-sample angle.
//
// # Safety
// `trajectory` must be a live handle, `a` and `b` NUL-terminated, `out`
// writable.
enum LgStatus lg_trajectory_orientation_drift(const struct LgTrajectory *trajectory,
                                              const char *a,
                                              const char *b,
                                              double *out);

// `|EB|·|ED|` at sample `index`; needs nodes `E`, `B` and `D`.
//
// # Safety
// `trajectory` must be a live handle; `out` must be writable.
enum LgStatus lg_trajectory_inversion_product(const struct LgTrajectory *trajectory,
                                              size_t index,
                                              double *out);

// Maximum mass (kg) held by friction in a parallel pinch.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_max_grasp_mass(double mu,
                                double fn_,
                                double d,
                                double alpha,
                                double max_t,
                                double g,
                                double *out);

// Bisection reference for [`lg_max_grasp_mass`].
//
// # Safety
// `out` must be writable.
enum LgStatus lg_max_mass_oracle(double mu,
                                 double fn_,
                                 double d,
                                 double alpha,
                                 double max_t,
                                 double g,
                                 double *out);

// Largest contact offset that still holds `weight` newtons. Returns
// `Infeasible` when friction cannot hold the weight at all and `Unbounded`
// when the moment arm vanishes.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_max_offset_d(double mu,
                              double fn_,
                              double alpha,
                              double max_t,
                              double g,
                              double weight,
                              double *out);

// Whether the pinch holds `weight` newtons at offset `d`.
//
// # Safety
// `out` must be writable.
enum LgStatus lg_stable_pinch(double mu,
                              double fn_,
                              double d,
                              double alpha,
                              double max_t,
                              double g,
                              double weight,
                              bool *out);

// Phalanx contact forces; `use_matrix` selects the explicit matrix route
// over the closed form.
//
// # Safety
// `params` must point to a valid struct; `out` must be writable.
enum LgStatus lg_contact_forces(const struct LgFingerParams *params,
                                bool use_matrix,
                                struct LgContactForces *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINKGRASP_H */
